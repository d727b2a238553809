use nalgebra::{Matrix2, Vector2, Vector4};
use serde::{Deserialize, Serialize};

use super::{mixing_matrix, GammaSet, M4};
use crate::error::{OrbitError, Result};
use crate::little_group::{orbit_act, OrbitPoint};
use crate::minkowski::LorentzMatrix;
use crate::sl2c::{lift, spin_boost, spin_boost_bar, Sl2cElement};
use crate::C64;

/// Four spinor components at an orbit point, in the spinor frame.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiracSpinorSample {
    pub components: [C64; 4],
    pub n: OrbitPoint,
}

impl DiracSpinorSample {
    pub fn new(components: [C64; 4], n: OrbitPoint) -> Result<Self> {
        if components.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(OrbitError::InvalidArgument("non-finite spinor component".into()));
        }
        Ok(Self { components, n })
    }

    pub fn vector(&self) -> Vector4<C64> {
        Vector4::from(self.components)
    }

    pub fn scale(&self, a: C64) -> Self {
        Self { components: self.components.map(|z| z * a), n: self.n }
    }
}

/// `ψ = (1/√2)[[1, 1], [−1, 1]]·(B(n)φ, B̄(n)χ)`.
pub fn assemble_spinor(phi: &Vector2<C64>, chi: &Vector2<C64>, n: &OrbitPoint) -> DiracSpinorSample {
    let fwd = n.forward();
    let b = spin_boost(&fwd).expect("forward cone");
    let bb = spin_boost_bar(&fwd).expect("forward cone");
    let upper = b.matrix() * phi;
    let lower = bb.matrix() * chi;
    let stacked = Vector4::new(upper[0], upper[1], lower[0], lower[1]);
    let psi = mixing_matrix() * stacked;
    DiracSpinorSample { components: [psi[0], psi[1], psi[2], psi[3]], n: *n }
}

/// Metric of the indefinite form: `∓γ⁰(γ·n)`, upper sign on the forward cone.
pub fn form_metric(n: &OrbitPoint) -> M4<C64> {
    let g = GammaSet::<C64>::spinor_frame();
    let nc = n.vector().0.map(|x| C64::new(x, 0.0));
    g.gamma[0] * g.slash(&nc) * C64::new(-f64::from(n.cone_sign()), 0.0)
}

/// `∓ψ̄₁(γ·n)ψ₂` with `ψ̄ = ψ†γ⁰`.
pub fn indefinite_form(psi1: &DiracSpinorSample, psi2: &DiracSpinorSample) -> Result<C64> {
    if psi1.n.vector().max_abs_diff(psi2.n.vector()) > 1e-12 * (1.0 + psi1.n.vector().0[0].abs()) {
        return Err(OrbitError::InvalidArgument("spinors live at different orbit points".into()));
    }
    let v1 = psi1.vector();
    let v2 = psi2.vector();
    Ok(v1.dotc(&(form_metric(&psi1.n) * v2)))
}

/// `S(M) = Mix·diag(M, M^{†−1})·Mixᵀ`, with `S (γ·a) S⁻¹ = γ·(Λa)`.
pub fn spinor_rep(m: &Sl2cElement) -> M4<C64> {
    let a = *m.matrix();
    let b: Matrix2<C64> = a.adjoint().try_inverse().expect("unimodular");
    let mut s = M4::zeros();
    for r in 0..2 {
        for c in 0..2 {
            s[(r, c)] = a[(r, c)];
            s[(r + 2, c + 2)] = b[(r, c)];
        }
    }
    let mix = mixing_matrix();
    mix * s * mix.transpose()
}

/// `ψ ↦ S(Λ)ψ` with the label moved to `Λn`.
pub fn transform_spinor(psi: &DiracSpinorSample, lambda: &LorentzMatrix) -> DiracSpinorSample {
    let v = spinor_rep(&lift(lambda)) * psi.vector();
    DiracSpinorSample { components: [v[0], v[1], v[2], v[3]], n: orbit_act(lambda, &psi.n) }
}

/// Arguments `(x, n, τ)` of an off-shell wavefunction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OffShellPoint {
    pub t: f64,
    pub x: [f64; 3],
    pub n0: f64,
    pub n: [f64; 3],
    pub tau: f64,
}

pub trait DiracField {
    fn eval(&self, at: &OffShellPoint) -> Vector4<C64>;
}

impl<F: Fn(&OffShellPoint) -> Vector4<C64>> DiracField for F {
    fn eval(&self, at: &OffShellPoint) -> Vector4<C64> {
        self(at)
    }
}

/// `u·exp(i(k·x + q·n − κτ))`, with `k·x = −k⁰t + k⃗·x⃗` and `q·n` the
/// Euclidean pairing of `q` with `(n⁰, n⃗)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiracPlaneWave {
    pub amplitude: [C64; 4],
    pub k: [f64; 4],
    pub q: [f64; 4],
    pub kappa: f64,
}

impl DiracPlaneWave {
    pub fn phase(&self, at: &OffShellPoint) -> f64 {
        let kx = -self.k[0] * at.t + (0..3).map(|i| self.k[i + 1] * at.x[i]).sum::<f64>();
        let qn = self.q[0] * at.n0 + (0..3).map(|i| self.q[i + 1] * at.n[i]).sum::<f64>();
        kx + qn - self.kappa * at.tau
    }
}

impl DiracField for DiracPlaneWave {
    fn eval(&self, at: &OffShellPoint) -> Vector4<C64> {
        Vector4::from(self.amplitude) * C64::from_polar(1.0, self.phase(at))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DiscreteSymmetry {
    C,
    P,
    T,
    CP,
    CPT,
}

impl std::str::FromStr for DiscreteSymmetry {
    type Err = OrbitError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "C" => Ok(Self::C),
            "P" => Ok(Self::P),
            "T" => Ok(Self::T),
            "CP" => Ok(Self::CP),
            "CPT" => Ok(Self::CPT),
            other => Err(OrbitError::InvalidArgument(format!("unknown discrete symmetry {other:?}"))),
        }
    }
}

impl DiscreteSymmetry {
    /// Matrix factor: `iγ²`, `γ⁰`, `iγ¹γ³`, `iγ²γ⁰`, `iγ⁵`.
    pub fn matrix(self) -> M4<C64> {
        let g = GammaSet::<C64>::spinor_frame();
        let i = C64::new(0.0, 1.0);
        match self {
            Self::C => g.gamma[2] * i,
            Self::P => g.gamma[0],
            Self::T => g.gamma[1] * g.gamma[3] * i,
            Self::CP => g.gamma[2] * g.gamma[0] * i,
            Self::CPT => g.gamma5 * i,
        }
    }

    /// Where the conjugated field is evaluated.
    pub fn reflect(self, p: &OffShellPoint) -> OffShellPoint {
        let neg3 = |v: [f64; 3]| v.map(|x| -x);
        match self {
            Self::C => OffShellPoint { tau: -p.tau, ..*p },
            Self::P => OffShellPoint { x: neg3(p.x), n: neg3(p.n), ..*p },
            Self::T => OffShellPoint { t: -p.t, n0: -p.n0, tau: -p.tau, ..*p },
            Self::CP => OffShellPoint { x: neg3(p.x), n: neg3(p.n), tau: -p.tau, ..*p },
            Self::CPT => OffShellPoint { t: -p.t, x: neg3(p.x), n0: -p.n0, n: neg3(p.n), ..*p },
        }
    }
}

/// `ψ^X(point) = M_X ψ*(reflected point)`.
pub fn discrete_symmetry<F: DiracField + ?Sized>(kind: DiscreteSymmetry, psi: &F, at: &OffShellPoint) -> Vector4<C64> {
    let v = psi.eval(&kind.reflect(at)).map(|z| z.conj());
    kind.matrix() * v
}
