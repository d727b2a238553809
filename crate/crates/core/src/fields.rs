//! Analytic vector-field models and the 2×2 field calculus: `𝒟·𝒜`, its trace,
//! field strengths, determinant invariants, gauge shifts and Maxwell residuals.
//!
//! `𝒟 = σ^μ∂_μ/√2` and `𝒜 = σ_μa^μ/√2` with `σ^μ = (1, σ⃗)`, so that
//! `𝒟·𝒜 = ½(∂·a)·1 + ½(ε⃗ + ib⃗)·σ⃗` with `ε^i = f_{0i}`, `b^i = ½ε^{ijk}f_{jk}`.

use nalgebra::{Matrix2, Matrix4};
use serde::{Deserialize, Serialize};

use crate::error::{OrbitError, Result};
use crate::minkowski::{levi_civita_upper, LorentzMatrix, METRIC_DIAG};
use crate::sl2c::pauli;
use crate::C64;

pub type Tensor3 = [[[f64; 4]; 4]; 4];

/// One term `c·(x⁰)^{e0}(x¹)^{e1}(x²)^{e2}(x³)^{e3}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyTerm {
    pub powers: [u32; 4],
    pub coefficient: f64,
}

/// A real polynomial of total degree at most 3 in the coordinates.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Polynomial(pub Vec<PolyTerm>);

pub const MAX_DEGREE: u32 = 3;

/// Value and all partial derivatives up to third order of a scalar.
#[derive(Clone, Copy, Debug, Default)]
pub struct ScalarJet {
    pub value: f64,
    pub d1: [f64; 4],
    pub d2: [[f64; 4]; 4],
    pub d3: Tensor3,
}

impl Polynomial {
    pub fn new(terms: Vec<PolyTerm>) -> Result<Self> {
        let p = Polynomial(terms);
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        match self.0.iter().find(|t| t.powers.iter().sum::<u32>() > MAX_DEGREE || !t.coefficient.is_finite()) {
            Some(t) => Err(OrbitError::InvalidArgument(format!("polynomial term {:?} exceeds degree {MAX_DEGREE} or is not finite", t.powers))),
            None => Ok(()),
        }
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|t| t.powers.iter().sum()).max().unwrap_or(0)
    }

    /// `∂^{k₀}_0 ⋯ ∂^{k₃}_3` of the polynomial at `x`.
    pub fn derivative(&self, orders: [u32; 4], x: &[f64; 4]) -> f64 {
        let mut total = 0.0;
        for t in &self.0 {
            let mut v = t.coefficient;
            for a in 0..4 {
                let (e, k) = (t.powers[a], orders[a]);
                if k > e {
                    v = 0.0;
                    break;
                }
                let falling: u32 = (e - k + 1..=e).product();
                v *= falling as f64 * x[a].powi((e - k) as i32);
            }
            total += v;
        }
        total
    }

    pub fn jet(&self, x: &[f64; 4]) -> ScalarJet {
        let ord = |idx: &[usize]| {
            let mut o = [0u32; 4];
            for &i in idx {
                o[i] += 1;
            }
            o
        };
        let mut j = ScalarJet { value: self.derivative([0; 4], x), ..Default::default() };
        for a in 0..4 {
            j.d1[a] = self.derivative(ord(&[a]), x);
            for b in 0..4 {
                j.d2[a][b] = self.derivative(ord(&[a, b]), x);
                for c in 0..4 {
                    j.d3[a][b][c] = self.derivative(ord(&[a, b, c]), x);
                }
            }
        }
        j
    }
}

fn kdot(k: &[f64; 4], x: &[f64; 4]) -> f64 {
    (0..4).map(|m| METRIC_DIAG[m] * k[m] * x[m]).sum()
}

fn lower(k: &[f64; 4]) -> [f64; 4] {
    std::array::from_fn(|m| METRIC_DIAG[m] * k[m])
}

/// A scalar gauge function `λ(x)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ScalarModel {
    Polynomial { coefficients: Polynomial },
    /// `Re(A e^{ik·x})`.
    PlaneWave { amplitude: C64, k: [f64; 4] },
}

impl ScalarModel {
    pub fn jet(&self, x: &[f64; 4]) -> ScalarJet {
        match self {
            ScalarModel::Polynomial { coefficients } => coefficients.jet(x),
            ScalarModel::PlaneWave { amplitude, k } => {
                let kl = lower(k);
                let i = C64::new(0.0, 1.0);
                let z = amplitude * (i * kdot(k, x)).exp();
                let mut j = ScalarJet { value: z.re, ..Default::default() };
                for a in 0..4 {
                    j.d1[a] = (z * i * kl[a]).re;
                    for b in 0..4 {
                        j.d2[a][b] = (-z * kl[a] * kl[b]).re;
                        for c in 0..4 {
                            j.d3[a][b][c] = (-z * i * kl[a] * kl[b] * kl[c]).re;
                        }
                    }
                }
                j
            }
        }
    }
}

/// Value and derivatives of a vector field: `d1[α][μ] = ∂_α a^μ`,
/// `d2[α][β][μ] = ∂_α∂_β a^μ`.
#[derive(Clone, Copy, Debug, Default)]
pub struct FieldJet {
    pub value: [f64; 4],
    pub d1: [[f64; 4]; 4],
    pub d2: Tensor3,
}

/// An analytic vector potential `a^μ(x)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FieldModel {
    /// `a^μ = Re(ε^μ e^{ik·x})`.
    PlaneWave { polarization: [C64; 4], k: [f64; 4] },
    /// One polynomial per component `a^μ`.
    Polynomial { coefficients: [Polynomial; 4] },
    /// `a^μ + ∂^μλ`.
    Gauged { base: Box<FieldModel>, gauge: ScalarModel },
    /// `a'(x) = Λa(Λ⁻¹x)`.
    Transformed { base: Box<FieldModel>, lorentz: [[f64; 4]; 4] },
}

impl FieldModel {
    pub fn from_json(text: &str) -> Result<Self> {
        let model: FieldModel = serde_json::from_str(text).map_err(|e| OrbitError::InvalidArgument(format!("field model: {e}")))?;
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            FieldModel::PlaneWave { polarization, k } => {
                if polarization.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) || k.iter().any(|v| !v.is_finite()) {
                    return Err(OrbitError::InvalidArgument("plane wave has non-finite entries".into()));
                }
                Ok(())
            }
            FieldModel::Polynomial { coefficients } => coefficients.iter().try_for_each(Polynomial::validate),
            FieldModel::Gauged { base, gauge } => {
                if let ScalarModel::Polynomial { coefficients } = gauge {
                    coefficients.validate()?;
                }
                base.validate()
            }
            FieldModel::Transformed { base, lorentz } => {
                LorentzMatrix::new(Matrix4::from_fn(|r, c| lorentz[r][c]))?;
                base.validate()
            }
        }
    }

    pub fn transformed(&self, lambda: &LorentzMatrix) -> FieldModel {
        let m = lambda.matrix();
        FieldModel::Transformed { base: Box::new(self.clone()), lorentz: std::array::from_fn(|r| std::array::from_fn(|c| m[(r, c)])) }
    }

    pub fn jet(&self, x: &[f64; 4]) -> FieldJet {
        match self {
            FieldModel::PlaneWave { polarization, k } => {
                let kl = lower(k);
                let i = C64::new(0.0, 1.0);
                let phase = (i * kdot(k, x)).exp();
                let mut j = FieldJet::default();
                for mu in 0..4 {
                    let z = polarization[mu] * phase;
                    j.value[mu] = z.re;
                    for a in 0..4 {
                        j.d1[a][mu] = (z * i * kl[a]).re;
                        for b in 0..4 {
                            j.d2[a][b][mu] = (-z * kl[a] * kl[b]).re;
                        }
                    }
                }
                j
            }
            FieldModel::Polynomial { coefficients } => {
                let mut j = FieldJet::default();
                for mu in 0..4 {
                    let s = coefficients[mu].jet(x);
                    j.value[mu] = s.value;
                    for a in 0..4 {
                        j.d1[a][mu] = s.d1[a];
                        for b in 0..4 {
                            j.d2[a][b][mu] = s.d2[a][b];
                        }
                    }
                }
                j
            }
            FieldModel::Gauged { base, gauge } => {
                let mut j = base.jet(x);
                let s = gauge.jet(x);
                for mu in 0..4 {
                    let eta = METRIC_DIAG[mu];
                    j.value[mu] += eta * s.d1[mu];
                    for a in 0..4 {
                        j.d1[a][mu] += eta * s.d2[a][mu];
                        for b in 0..4 {
                            j.d2[a][b][mu] += eta * s.d3[a][b][mu];
                        }
                    }
                }
                j
            }
            FieldModel::Transformed { base, lorentz } => {
                let l = Matrix4::from_fn(|r, c| lorentz[r][c]);
                let linv = Matrix4::from_fn(|r, c| METRIC_DIAG[r] * METRIC_DIAG[c] * l[(c, r)]);
                let y: [f64; 4] = std::array::from_fn(|r| (0..4).map(|c| linv[(r, c)] * x[c]).sum());
                let b = base.jet(&y);
                let mut j = FieldJet::default();
                for mu in 0..4 {
                    j.value[mu] = (0..4).map(|nu| l[(mu, nu)] * b.value[nu]).sum();
                    for a in 0..4 {
                        let mut s1 = 0.0;
                        for nu in 0..4 {
                            for be in 0..4 {
                                s1 += l[(mu, nu)] * linv[(be, a)] * b.d1[be][nu];
                            }
                        }
                        j.d1[a][mu] = s1;
                        for c in 0..4 {
                            let mut s2 = 0.0;
                            for nu in 0..4 {
                                for be in 0..4 {
                                    for ga in 0..4 {
                                        s2 += l[(mu, nu)] * linv[(be, a)] * linv[(ga, c)] * b.d2[be][ga][nu];
                                    }
                                }
                            }
                            j.d2[a][c][mu] = s2;
                        }
                    }
                }
                j
            }
        }
    }
}

/// `f_{μν}` with lower indices at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldStrength {
    pub lower: Matrix4<f64>,
}

impl FieldStrength {
    pub fn from_jet(j: &FieldJet) -> Self {
        // ∂_μ a_ν − ∂_ν a_μ with a_ν = η_νν a^ν
        Self { lower: Matrix4::from_fn(|mu, nu| METRIC_DIAG[nu] * j.d1[mu][nu] - METRIC_DIAG[mu] * j.d1[nu][mu]) }
    }

    pub fn upper(&self) -> Matrix4<f64> {
        Matrix4::from_fn(|mu, nu| METRIC_DIAG[mu] * METRIC_DIAG[nu] * self.lower[(mu, nu)])
    }

    /// `f̃^{μν} = ½ε^{μνρσ}f_{ρσ}`.
    pub fn dual_upper(&self) -> Matrix4<f64> {
        Matrix4::from_fn(|mu, nu| {
            let mut s = 0.0;
            for r in 0..4 {
                for t in 0..4 {
                    s += 0.5 * levi_civita_upper(mu, nu, r, t) as f64 * self.lower[(r, t)];
                }
            }
            s
        })
    }

    /// The dual as a lower-index field strength.
    pub fn dual(&self) -> FieldStrength {
        let u = self.dual_upper();
        FieldStrength { lower: Matrix4::from_fn(|mu, nu| METRIC_DIAG[mu] * METRIC_DIAG[nu] * u[(mu, nu)]) }
    }

    /// `f_{μν}f^{μν}`.
    pub fn ff(&self) -> f64 {
        self.lower.component_mul(&self.upper()).sum()
    }

    /// `f_{μν}f̃^{μν}`.
    pub fn ff_dual(&self) -> f64 {
        self.lower.component_mul(&self.dual_upper()).sum()
    }

    pub fn antisymmetry_residual(&self) -> f64 {
        (self.lower + self.lower.transpose()).abs().max()
    }

    /// `ε^i = f_{0i}`.
    pub fn electric(&self) -> [f64; 3] {
        std::array::from_fn(|i| self.lower[(0, i + 1)])
    }

    /// `b^i = ½ε^{ijk}f_{jk}`.
    pub fn magnetic(&self) -> [f64; 3] {
        [self.lower[(2, 3)], self.lower[(3, 1)], self.lower[(1, 2)]]
    }
}

pub fn field_strength(field: &FieldModel, x: &[f64; 4]) -> FieldStrength {
    FieldStrength::from_jet(&field.jet(x))
}

fn sigma_basis() -> [Matrix2<C64>; 4] {
    let [s1, s2, s3] = pauli();
    [Matrix2::identity(), s1, s2, s3]
}

/// `𝒟·𝒜 = ½(σ^α∂_α)(σ_μa^μ)` evaluated from the analytic derivatives.
pub fn d_dot_a(field: &FieldModel, x: &[f64; 4]) -> Matrix2<C64> {
    let j = field.jet(x);
    let s = sigma_basis();
    let mut m = Matrix2::zeros();
    for a in 0..4 {
        for mu in 0..4 {
            m += s[a] * s[mu] * C64::new(0.5 * j.d1[a][mu], 0.0);
        }
    }
    m
}

/// `∂·a = ∂_μa^μ`.
pub fn divergence(field: &FieldModel, x: &[f64; 4]) -> f64 {
    let j = field.jet(x);
    (0..4).map(|mu| j.d1[mu][mu]).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FieldDecomposition {
    pub divergence: f64,
    pub electric: [f64; 3],
    pub magnetic: [f64; 3],
}

/// Reads `∂·a` from the trace of `𝒟·𝒜` and `ε⃗ + ib⃗` from its traceless part.
pub fn decompose_fields(field: &FieldModel, x: &[f64; 4]) -> FieldDecomposition {
    let m = d_dot_a(field, x);
    let [_, s1, s2, s3] = sigma_basis();
    let w: Vec<C64> = [s1, s2, s3].iter().map(|s| (m * s).trace()).collect();
    FieldDecomposition {
        divergence: m.trace().re,
        electric: std::array::from_fn(|k| w[k].re),
        magnetic: std::array::from_fn(|k| w[k].im),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DetInvariants {
    pub det: C64,
    /// `¼(∂·a)²`
    pub gauge_part: f64,
    pub ff: f64,
    pub ff_dual: f64,
}

impl DetInvariants {
    /// `|det − ¼[(∂·a)² + ½f_{μν}f^{μν} + ½i f_{μν}f̃^{μν}]|`.
    pub fn identity_residual(&self) -> f64 {
        let want = C64::new(self.gauge_part + self.ff / 8.0, self.ff_dual / 8.0);
        (self.det - want).norm()
    }
}

pub fn det_invariants(field: &FieldModel, x: &[f64; 4]) -> DetInvariants {
    let m = d_dot_a(field, x);
    let f = field_strength(field, x);
    let div = divergence(field, x);
    DetInvariants { det: m.determinant(), gauge_part: 0.25 * div * div, ff: f.ff(), ff_dual: f.ff_dual() }
}

pub fn gauge_transform(field: &FieldModel, gauge: &ScalarModel) -> FieldModel {
    FieldModel::Gauged { base: Box::new(field.clone()), gauge: gauge.clone() }
}

/// `∂_μf^{μν}`.
pub fn maxwell_residual(field: &FieldModel, x: &[f64; 4]) -> [f64; 4] {
    let j = field.jet(x);
    std::array::from_fn(|nu| {
        let mut s = 0.0;
        for mu in 0..4 {
            // ∂_μ f_{μν} = ∂_μ∂_μ a_ν − ∂_μ∂_ν a_μ
            let d = METRIC_DIAG[nu] * j.d2[mu][mu][nu] - METRIC_DIAG[mu] * j.d2[mu][nu][mu];
            s += METRIC_DIAG[mu] * METRIC_DIAG[nu] * d;
        }
        s
    })
}

/// `∂·a − g` for a gauge condition `∂_μa^μ = g`.
pub fn gauge_constraint_residual(field: &FieldModel, x: &[f64; 4], g: f64) -> f64 {
    divergence(field, x) - g
}

/// A random polynomial vector field of total degree ≤ 3.
pub fn random_polynomial_field<R: rand::Rng>(rng: &mut R, terms: usize) -> FieldModel {
    FieldModel::Polynomial { coefficients: std::array::from_fn(|_| random_polynomial(rng, terms)) }
}

pub fn random_polynomial<R: rand::Rng>(rng: &mut R, terms: usize) -> Polynomial {
    Polynomial(
        (0..terms)
            .map(|_| {
                let mut powers = [0u32; 4];
                for _ in 0..rng.gen_range(0..=MAX_DEGREE) {
                    powers[rng.gen_range(0..4)] += 1;
                }
                PolyTerm { powers, coefficient: rng.gen_range(-1.0..1.0) }
            })
            .collect(),
    )
}
