//! Wigner rotations `D(Λ, n) = B(Λn)⁻¹ · M_Λ · B(n)` for a timelike
//! stability vector `n`, and the induced transformation law of spinor
//! wavefunctions.
//!
//! Matrix convention: `D` acts on column spinors, so the cocycle reads
//! `D(Λ₂Λ₁, n) = ±D(Λ₂, Λ₁n)·D(Λ₁, n)`. The sign comes from the lift of
//! `Λ` and is not canonical; comparisons go through the SO(3) image.

use nalgebra::{Matrix2, Matrix3};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{OrbitError, Result};
use crate::minkowski::{minkowski_dot, FourVector, LorentzMatrix, GROUP_TOL};
use crate::sl2c::{adjoint_rotation, lift, rotation_to_quaternion, spin_boost, Sl2cElement};
use crate::C64;

/// Unit timelike stability vector with its light-cone branch.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitPoint {
    n: FourVector,
    cone_sign: i8,
}

impl OrbitPoint {
    /// Accepts `n` when `|n·n + 1| ≤ 1e-12·(n⁰)²`.
    pub fn new(n: FourVector) -> Result<Self> {
        Self::with_tolerance(n, GROUP_TOL)
    }

    pub fn with_tolerance(n: FourVector, tol: f64) -> Result<Self> {
        let n = FourVector::new(n.0)?;
        let sq = minkowski_dot(&n, &n);
        if (sq + 1.0).abs() > tol * n.0[0].powi(2).max(1.0) {
            return Err(OrbitError::InvalidOrbitPoint(format!(
                "n·n = {sq}, expected -1 for {:?}",
                n.0
            )));
        }
        Ok(Self::new_unchecked(n))
    }

    /// Rescales a timelike vector onto the unit hyperboloid.
    pub fn normalized(n: FourVector) -> Result<Self> {
        let n = FourVector::new(n.0)?;
        let sq = minkowski_dot(&n, &n);
        if !(sq < 0.0) {
            return Err(OrbitError::InvalidOrbitPoint(format!(
                "{:?} is not timelike (n·n = {sq})",
                n.0
            )));
        }
        Ok(Self::new_unchecked(n.scale(1.0 / (-sq).sqrt())))
    }

    pub(crate) fn new_unchecked(n: FourVector) -> Self {
        let cone_sign = if n.0[0] < 0.0 { -1 } else { 1 };
        Self { n, cone_sign }
    }

    /// The rest point `n₀ = (1, 0, 0, 0)`.
    pub fn rest() -> Self {
        Self::new_unchecked(FourVector::rest())
    }

    pub fn vector(&self) -> &FourVector {
        &self.n
    }

    pub fn cone_sign(&self) -> i8 {
        self.cone_sign
    }

    pub(crate) fn require_future(&self) -> Result<()> {
        if self.cone_sign > 0 {
            Ok(())
        } else {
            Err(OrbitError::InvalidOrbitPoint(
                "boost requires n on the forward light cone".into(),
            ))
        }
    }

    /// The forward-cone representative `cone_sign · n`.
    pub fn forward(&self) -> Self {
        if self.cone_sign > 0 {
            *self
        } else {
            Self::new_unchecked(-self.n)
        }
    }
}

/// Uniformly random direction and rapidity in `[0, max_rapidity]`.
pub fn random_orbit_point<R: Rng>(rng: &mut R, max_rapidity: f64) -> OrbitPoint {
    let xi = rng.gen_range(0.0..=max_rapidity);
    let cos_t: f64 = rng.gen_range(-1.0..=1.0);
    let phi = rng.gen_range(0.0..std::f64::consts::TAU);
    let sin_t = (1.0 - cos_t * cos_t).sqrt();
    let d = [sin_t * phi.cos(), sin_t * phi.sin(), cos_t];
    let sh = xi.sinh();
    OrbitPoint::new_unchecked(FourVector([xi.cosh(), sh * d[0], sh * d[1], sh * d[2]]))
}

/// `n ↦ Λn`.
pub fn orbit_act(lambda: &LorentzMatrix, n: &OrbitPoint) -> OrbitPoint {
    OrbitPoint::new_unchecked(lambda.apply(n.vector()))
}

/// An SU(2) element produced by the boost-conjugation chain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WignerRotation {
    matrix: Matrix2<C64>,
    lambda: LorentzMatrix,
    n: OrbitPoint,
}

impl WignerRotation {
    pub fn matrix(&self) -> &Matrix2<C64> {
        &self.matrix
    }

    pub fn lambda(&self) -> &LorentzMatrix {
        &self.lambda
    }

    pub fn orbit_point(&self) -> &OrbitPoint {
        &self.n
    }

    /// `‖D†D − 1‖∞` (max entry).
    pub fn unitarity_residual(&self) -> f64 {
        (self.matrix.adjoint() * self.matrix - Matrix2::identity()).camax()
    }

    pub fn det_residual(&self) -> f64 {
        (self.matrix.determinant() - C64::new(1.0, 0.0)).norm()
    }

    /// Sign-free SO(3) image of `D`.
    pub fn so3(&self) -> Matrix3<f64> {
        adjoint_rotation(&self.matrix)
    }

    /// Axis and angle `θ ∈ [0, π]` of the SO(3) image.
    pub fn axis_angle(&self) -> ([f64; 3], f64) {
        let (w, v) = rotation_to_quaternion(&self.so3());
        let s = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let angle = 2.0 * s.atan2(w);
        if s < 1e-15 {
            ([0.0, 0.0, 1.0], 0.0)
        } else {
            (v.map(|x| x / s), angle)
        }
    }

    /// Rotation angle in `[0, 2π]` read from the trace of `D` itself.
    pub fn spinor_angle(&self) -> f64 {
        let half_trace = (self.matrix.trace().re / 2.0).clamp(-1.0, 1.0);
        2.0 * half_trace.acos()
    }
}

/// `D(Λ, n) = B(Λn)⁻¹ · M_Λ · B(n)`.
///
/// Points on the backward cone use the boost of `−n`; `Λ(−n) = −Λn` so the
/// chain is the same.
pub fn wigner_rotation(lambda: &LorentzMatrix, n: &OrbitPoint) -> WignerRotation {
    let fwd = n.forward();
    let moved = orbit_act(lambda, &fwd);
    let b_n = spin_boost(&fwd).expect("forward cone");
    let b_moved_inv = spin_boost(&moved).expect("orthochronous").inverse();
    let m = lift(lambda);
    let d = b_moved_inv.compose(&m).compose(&b_n);
    WignerRotation {
        matrix: *d.matrix(),
        lambda: *lambda,
        n: *n,
    }
}

/// Lift used inside [`wigner_rotation`], exposed for cross-checks.
pub fn lorentz_lift(lambda: &LorentzMatrix) -> Sl2cElement {
    lift(lambda)
}

/// A two-component field sample `φ_σ(n, x)`.
pub trait SpinorField {
    fn eval(&self, n: &OrbitPoint, x: &FourVector) -> [C64; 2];
}

impl<F> SpinorField for F
where
    F: Fn(&OrbitPoint, &FourVector) -> [C64; 2],
{
    fn eval(&self, n: &OrbitPoint, x: &FourVector) -> [C64; 2] {
        self(n, x)
    }
}

/// `φ′(n, x) = D(Λ, Λ⁻¹n) · φ(Λ⁻¹n, Λ⁻¹x)`.
///
/// `D(Λ, m)` carries spin labels from `m` to `Λm = n`, which makes two
/// successive transformations compose to the product transformation (up to
/// the lift sign).
pub fn induced_transform<F: SpinorField + ?Sized>(
    psi: &F,
    lambda: &LorentzMatrix,
    n: &OrbitPoint,
    x: &FourVector,
) -> [C64; 2] {
    let inv = lambda.inverse();
    let m = orbit_act(&inv, n);
    let y = inv.apply(x);
    let d = wigner_rotation(lambda, &m);
    let v = psi.eval(&m, &y);
    let dm = d.matrix();
    [
        dm[(0, 0)] * v[0] + dm[(0, 1)] * v[1],
        dm[(1, 0)] * v[0] + dm[(1, 1)] * v[1],
    ]
}

/// Plane-wave test field `φ(n, x) = u(n) e^{i k·x}` with a smooth spinor
/// profile `u(n)`.
#[derive(Clone, Copy, Debug)]
pub struct PlaneWaveSpinor {
    pub k: FourVector,
    pub amplitude: [C64; 2],
    pub profile: [f64; 3],
}

impl PlaneWaveSpinor {
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        let mut comp = || C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let amplitude = [comp(), comp()];
        Self {
            k: FourVector(std::array::from_fn(|_| rng.gen_range(-1.0..1.0))),
            amplitude,
            profile: std::array::from_fn(|_| rng.gen_range(-0.5..0.5)),
        }
    }
}

impl SpinorField for PlaneWaveSpinor {
    fn eval(&self, n: &OrbitPoint, x: &FourVector) -> [C64; 2] {
        let phase = C64::new(0.0, minkowski_dot(&self.k, x)).exp();
        let v = n.vector().0;
        let tilt = C64::new(self.profile[0] * v[1], self.profile[1] * v[2] + self.profile[2] * v[3]);
        [self.amplitude[0] * phase * (tilt.exp()), self.amplitude[1] * phase * (-tilt).exp()]
    }
}
