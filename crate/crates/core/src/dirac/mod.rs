//! The spin-½ sector: gamma matrices, spinor assembly on the orbit, the
//! operators `K_L`, `K_T`, the n-projected algebra, projectors and discrete
//! symmetries.
//!
//! Clifford convention `{γ^μ, γ^ν} = −2η^{μν}`, so `(γ·n)² = 1` for unit
//! timelike `n`; `γ·a = γ^μ a_μ`.

mod operators;
mod spinor;

use std::ops::Neg;

use nalgebra::{ClosedAddAssign, ClosedMulAssign, ClosedSubAssign, Matrix4};
use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::minkowski::METRIC_DIAG;
use crate::C64;

pub use operators::*;
pub use spinor::*;

/// Entry type of gamma-matrix computations: floating or exact complex.
pub trait DiracScalar:
    nalgebra::Scalar + Zero + One + ClosedAddAssign + ClosedSubAssign + ClosedMulAssign + Neg<Output = Self>
{
    fn ratio(num: i64, den: i64) -> Self;
    fn imag_unit() -> Self;
}

impl DiracScalar for C64 {
    fn ratio(num: i64, den: i64) -> Self {
        C64::new(num as f64 / den as f64, 0.0)
    }

    fn imag_unit() -> Self {
        C64::new(0.0, 1.0)
    }
}

/// Exact complex rationals.
pub type QI = Complex<BigRational>;

impl DiracScalar for QI {
    fn ratio(num: i64, den: i64) -> Self {
        Complex::new(BigRational::new(BigInt::from(num), BigInt::from(den)), BigRational::zero())
    }

    fn imag_unit() -> Self {
        Complex::new(BigRational::zero(), BigRational::one())
    }
}

pub type M4<T> = Matrix4<T>;

fn eta_t<T: DiracScalar>(mu: usize) -> T {
    T::ratio(METRIC_DIAG[mu] as i64, 1)
}

/// `γ⁰…γ³` and `γ⁵ = iγ⁰γ¹γ²γ³`.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaSet<T: DiracScalar> {
    pub gamma: [M4<T>; 4],
    pub gamma5: M4<T>,
}

/// Block mixing `(1/√2)[[1, 1], [−1, 1]]` of the spinor assembly.
pub fn mixing_matrix() -> M4<C64> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = M4::zeros();
    for k in 0..2 {
        m[(k, k)] = C64::new(r, 0.0);
        m[(k, k + 2)] = C64::new(r, 0.0);
        m[(k + 2, k)] = C64::new(-r, 0.0);
        m[(k + 2, k + 2)] = C64::new(r, 0.0);
    }
    m
}

impl<T: DiracScalar> GammaSet<T> {
    /// Chiral basis `γ^μ = [[0, σ̄^μ], [σ^μ, 0]]` with `σ^μ = (1, σ⃗)`,
    /// `σ̄^μ = (1, −σ⃗)`.
    pub fn chiral() -> Self {
        let (z, o, i) = (T::zero(), T::one(), T::imag_unit());
        let pauli: [[[T; 2]; 2]; 4] = [
            [[o.clone(), z.clone()], [z.clone(), o.clone()]],
            [[z.clone(), o.clone()], [o.clone(), z.clone()]],
            [[z.clone(), -i.clone()], [i.clone(), z.clone()]],
            [[o.clone(), z.clone()], [z.clone(), -o.clone()]],
        ];
        let gamma: [M4<T>; 4] = std::array::from_fn(|mu| {
            let mut g = M4::from_element(T::zero());
            for r in 0..2 {
                for c in 0..2 {
                    let s = pauli[mu][r][c].clone();
                    let bar = if mu == 0 { s.clone() } else { -s.clone() };
                    g[(r, c + 2)] = bar;
                    g[(r + 2, c)] = s;
                }
            }
            g
        });
        Self::from_gammas(gamma)
    }

    /// Chiral basis conjugated by the assembly mixing, in which
    /// `γ⁰ = diag(1, 1, −1, −1)`. Entries stay in `{0, ±1, ±i}`.
    pub fn spinor_frame() -> Self {
        let chiral = Self::chiral();
        // Mix γ Mixᵀ with Mix = (1/√2)[[1,1],[-1,1]] ⊗ 1; the √2 factors pair up
        let half = T::ratio(1, 2);
        let gamma = chiral.gamma.map(|g| {
            M4::from_fn(|r, c| {
                let (br, ir) = (r / 2, r % 2);
                let (bc, ic) = (c / 2, c % 2);
                let mix = |b: usize, k: usize| -> T {
                    match (b, k) {
                        (1, 0) => -T::one(),
                        _ => T::one(),
                    }
                };
                let mut s = T::zero();
                for k in 0..2 {
                    for l in 0..2 {
                        let w = mix(br, k) * mix(bc, l);
                        s += w * g[(2 * k + ir, 2 * l + ic)].clone();
                    }
                }
                s * half.clone()
            })
        });
        Self::from_gammas(gamma)
    }

    fn from_gammas(gamma: [M4<T>; 4]) -> Self {
        let gamma5 = gamma[0].clone() * gamma[1].clone() * gamma[2].clone() * gamma[3].clone() * T::imag_unit();
        Self { gamma, gamma5 }
    }

    pub fn identity() -> M4<T> {
        M4::identity()
    }

    /// `γ·a = γ^μ η_{μμ} a^μ` for contravariant `a`.
    pub fn slash(&self, a: &[T; 4]) -> M4<T> {
        let mut m = M4::from_element(T::zero());
        for mu in 0..4 {
            m += self.gamma[mu].clone() * (eta_t::<T>(mu) * a[mu].clone());
        }
        m
    }

    /// `Σ^{μν} = (i/4)[γ^μ, γ^ν]`.
    pub fn sigma(&self, mu: usize, nu: usize) -> M4<T> {
        commutator(&self.gamma[mu], &self.gamma[nu]) * (T::imag_unit() * T::ratio(1, 4))
    }

    /// Residual of `{γ^μ, γ^ν} = −2η^{μν}` and the `γ⁵` relations; zero in
    /// exact arithmetic.
    pub fn clifford_defects(&self) -> Vec<M4<T>> {
        let mut out = Vec::new();
        let id = M4::<T>::identity();
        for mu in 0..4 {
            for nu in 0..4 {
                let anti = anticommutator(&self.gamma[mu], &self.gamma[nu]);
                let want = if mu == nu { id.clone() * (eta_t::<T>(mu) * T::ratio(-2, 1)) } else { M4::from_element(T::zero()) };
                out.push(anti - want);
            }
            out.push(anticommutator(&self.gamma5, &self.gamma[mu]));
        }
        out.push(self.gamma5.clone() * self.gamma5.clone() - id);
        out
    }
}

pub fn commutator<T: DiracScalar>(a: &M4<T>, b: &M4<T>) -> M4<T> {
    a.clone() * b.clone() - b.clone() * a.clone()
}

pub fn anticommutator<T: DiracScalar>(a: &M4<T>, b: &M4<T>) -> M4<T> {
    a.clone() * b.clone() + b.clone() * a.clone()
}

pub fn is_zero<T: DiracScalar>(m: &M4<T>) -> bool {
    m.iter().all(|x| x.is_zero())
}

/// Converts an exact matrix to floating point.
pub fn to_c64(m: &M4<QI>) -> M4<C64> {
    use num_traits::ToPrimitive;
    m.map(|z| C64::new(z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN)))
}

/// `ε_{ijk}` as an exact scalar.
fn eps3<T: DiracScalar>(i: usize, j: usize, k: usize) -> T {
    T::ratio(crate::minkowski::levi_civita3(i, j, k) as i64, 1)
}

/// The point `((1+|u|²), 2u)/(1−|u|²)` of the forward unit hyperboloid, exact
/// for rational `u` with `|u| < 1`.
pub fn rational_orbit_point(u: [(i64, i64); 3]) -> Option<[QI; 4]> {
    let u = u.map(|(a, b)| QI::ratio(a, b));
    let uu = u.iter().fold(QI::zero(), |acc, x| acc + x.clone() * x.clone());
    let den = QI::one() - uu.clone();
    if den.re <= BigRational::zero() {
        return None;
    }
    let two = QI::ratio(2, 1);
    Some([
        (QI::one() + uu) / den.clone(),
        u[0].clone() * two.clone() / den.clone(),
        u[1].clone() * two.clone() / den.clone(),
        u[2].clone() * two / den,
    ])
}
