//! The covering group `SL(2,C)`: Pauli bases, the vector ↔ matrix map,
//! spinor boosts and the two-to-one homomorphism onto the Lorentz group.
//!
//! Vectors act on matrices by congruence, `𝒜(Λa) = M 𝒜(a) M†`. On the
//! unitary subgroup this coincides with conjugation `M 𝒜 M⁻¹`; congruence is
//! what reproduces the vector law for boosts.

use nalgebra::{Matrix2, Matrix3, Matrix4};

use crate::error::{OrbitError, Result};
use crate::little_group::OrbitPoint;
use crate::minkowski::{FourVector, LorentzMatrix, GROUP_TOL};
use crate::C64;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Pauli matrices `σ₁, σ₂, σ₃`.
pub fn pauli() -> [Matrix2<C64>; 3] {
    let o = c(0.0, 0.0);
    let l = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    [
        Matrix2::new(o, l, l, o),
        Matrix2::new(o, -i, i, o),
        Matrix2::new(l, o, o, -l),
    ]
}

/// `σ_μ = (+1, σ⃗)`.
pub fn sigma_basis() -> [Matrix2<C64>; 4] {
    let [s1, s2, s3] = pauli();
    [Matrix2::identity(), s1, s2, s3]
}

/// `σ̄_μ = (−1, σ⃗)`.
pub fn sigma_bar_basis() -> [Matrix2<C64>; 4] {
    let [s1, s2, s3] = pauli();
    [-Matrix2::identity(), s1, s2, s3]
}

/// An element of `SL(2,C)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sl2cElement(Matrix2<C64>);

impl Sl2cElement {
    pub fn identity() -> Self {
        Self(Matrix2::identity())
    }

    /// Accepts `m` when `|det m − 1| ≤ 1e-12`.
    pub fn new(m: Matrix2<C64>) -> Result<Self> {
        let det = m.determinant();
        if (det - C64::new(1.0, 0.0)).norm() > GROUP_TOL * m.norm().max(1.0).powi(2) {
            return Err(OrbitError::NotUnimodular(format!("{det}")));
        }
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &Matrix2<C64> {
        &self.0
    }

    pub fn compose(&self, rhs: &Self) -> Self {
        Self(self.0 * rhs.0)
    }

    /// Inverse via the adjugate, exact for unit determinant.
    pub fn inverse(&self) -> Self {
        let m = &self.0;
        Self(Matrix2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]))
    }

    pub fn neg(&self) -> Self {
        Self(-self.0)
    }

    /// `exp(-i θ k⃗·σ⃗/2)` for a unit axis `k`.
    pub fn rotation(axis: [f64; 3], angle: f64) -> Result<Self> {
        let norm = axis.iter().map(|a| a * a).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(OrbitError::InvalidArgument("rotation axis must be nonzero".into()));
        }
        let k = axis.map(|a| a / norm);
        Ok(Self(su2_from_quaternion(
            (angle / 2.0).cos(),
            [(angle / 2.0).sin() * k[0], (angle / 2.0).sin() * k[1], (angle / 2.0).sin() * k[2]],
        )))
    }
}

/// `w − i(x σ₁ + y σ₂ + z σ₃)`.
pub(crate) fn su2_from_quaternion(w: f64, v: [f64; 3]) -> Matrix2<C64> {
    Matrix2::new(c(w, -v[2]), c(-v[1], -v[0]), c(v[1], -v[0]), c(w, v[2]))
}

/// `𝒜 = (1/√2) σ_μ a^μ = (1/√2)[[a⁰+a³, a¹−ia²], [a¹+ia², a⁰−a³]]` with the
/// right-handed Pauli matrices.
pub fn vector_to_matrix(a: &FourVector) -> Matrix2<C64> {
    let a = a.0;
    Matrix2::new(
        c(a[0] + a[3], 0.0),
        c(a[1], -a[2]),
        c(a[1], a[2]),
        c(a[0] - a[3], 0.0),
    ) * c(FRAC_1_SQRT_2, 0.0)
}

/// Complex extension of [`vector_to_matrix`] (no Hermiticity implied).
pub fn complex_vector_to_matrix(a: &[C64; 4]) -> Matrix2<C64> {
    let i = c(0.0, 1.0);
    Matrix2::new(a[0] + a[3], a[1] - i * a[2], a[1] + i * a[2], a[0] - a[3]) * c(FRAC_1_SQRT_2, 0.0)
}

/// Inverse of [`complex_vector_to_matrix`] for arbitrary complex matrices.
pub fn matrix_to_complex_vector(m: &Matrix2<C64>) -> [C64; 4] {
    let s = c(FRAC_1_SQRT_2, 0.0);
    let i = c(0.0, 1.0);
    [
        (m[(0, 0)] + m[(1, 1)]) * s,
        (m[(0, 1)] + m[(1, 0)]) * s,
        (m[(1, 0)] - m[(0, 1)]) * s / i,
        (m[(0, 0)] - m[(1, 1)]) * s,
    ]
}

/// Inverse of [`vector_to_matrix`]; rejects non-Hermitian input.
pub fn matrix_to_vector(m: &Matrix2<C64>) -> Result<FourVector> {
    let res = (m - m.adjoint()).camax();
    if res > 1e-10 * m.camax().max(1.0) {
        return Err(OrbitError::NotHermitian(res));
    }
    let v = matrix_to_complex_vector(m);
    Ok(FourVector(v.map(|z| z.re)))
}

/// Positive Hermitian spinor boost `B(n) = (1 + n⁰ + n⃗·σ⃗)/√(2(1+n⁰))`.
pub fn spin_boost(n: &OrbitPoint) -> Result<Sl2cElement> {
    n.require_future()?;
    let v = n.vector().0;
    let norm = (2.0 * (1.0 + v[0])).sqrt();
    Ok(Sl2cElement(Matrix2::new(
        c((1.0 + v[0] + v[3]) / norm, 0.0),
        c(v[1] / norm, -v[2] / norm),
        c(v[1] / norm, v[2] / norm),
        c((1.0 + v[0] - v[3]) / norm, 0.0),
    )))
}

/// Second-kind boost `B̄(n) = (1 + n⁰ − n⃗·σ⃗)/√(2(1+n⁰)) = B(n)^{†−1}`.
pub fn spin_boost_bar(n: &OrbitPoint) -> Result<Sl2cElement> {
    Ok(spin_boost(n)?.inverse())
}

/// `Λ^μ_ν = ½ tr(σ_μ M σ_ν M†)`, the unique vector map with
/// `M 𝒜(a) M† = 𝒜(Λa)`.
pub fn covering_map(m: &Sl2cElement) -> Result<LorentzMatrix> {
    let checked = Sl2cElement::new(m.0)?;
    Ok(LorentzMatrix::from_matrix_unchecked(covering_matrix(&checked.0)))
}

pub(crate) fn covering_matrix(m: &Matrix2<C64>) -> Matrix4<f64> {
    let basis = sigma_basis();
    let md = m.adjoint();
    let mut out = Matrix4::zeros();
    for nu in 0..4 {
        let image = m * basis[nu] * md;
        for mu in 0..4 {
            out[(mu, nu)] = 0.5 * (basis[mu] * image).trace().re;
        }
    }
    out
}

/// Adjoint (spin-1) image `R_ij = ½ tr(σ_i U σ_j U†)` of a 2×2 matrix.
pub fn adjoint_rotation(u: &Matrix2<C64>) -> Matrix3<f64> {
    let s = pauli();
    let ud = u.adjoint();
    Matrix3::from_fn(|i, j| 0.5 * (s[i] * u * s[j] * ud).trace().re)
}

/// Unit quaternion `(w, x, y, z)` with `w ≥ 0` for a rotation matrix.
pub(crate) fn rotation_to_quaternion(r: &Matrix3<f64>) -> (f64, [f64; 3]) {
    let tr = r.trace();
    let (w, x, y, z);
    if tr > 0.0 {
        let s = 2.0 * (tr + 1.0).sqrt();
        w = 0.25 * s;
        x = (r[(2, 1)] - r[(1, 2)]) / s;
        y = (r[(0, 2)] - r[(2, 0)]) / s;
        z = (r[(1, 0)] - r[(0, 1)]) / s;
    } else if r[(0, 0)] > r[(1, 1)] && r[(0, 0)] > r[(2, 2)] {
        let s = 2.0 * (1.0 + r[(0, 0)] - r[(1, 1)] - r[(2, 2)]).sqrt();
        w = (r[(2, 1)] - r[(1, 2)]) / s;
        x = 0.25 * s;
        y = (r[(0, 1)] + r[(1, 0)]) / s;
        z = (r[(0, 2)] + r[(2, 0)]) / s;
    } else if r[(1, 1)] > r[(2, 2)] {
        let s = 2.0 * (1.0 + r[(1, 1)] - r[(0, 0)] - r[(2, 2)]).sqrt();
        w = (r[(0, 2)] - r[(2, 0)]) / s;
        x = (r[(0, 1)] + r[(1, 0)]) / s;
        y = 0.25 * s;
        z = (r[(1, 2)] + r[(2, 1)]) / s;
    } else {
        let s = 2.0 * (1.0 + r[(2, 2)] - r[(0, 0)] - r[(1, 1)]).sqrt();
        w = (r[(1, 0)] - r[(0, 1)]) / s;
        x = (r[(0, 2)] + r[(2, 0)]) / s;
        y = (r[(1, 2)] + r[(2, 1)]) / s;
        z = 0.25 * s;
    }
    let norm = (w * w + x * x + y * y + z * z).sqrt();
    let sign = if w < 0.0 { -1.0 } else { 1.0 };
    (sign * w / norm, [sign * x / norm, sign * y / norm, sign * z / norm])
}

/// Canonical lift of `Λ` into `SL(2,C)`.
///
/// `Λ = L(m)·R` with `m = Λn₀`; the boost lifts to the positive Hermitian
/// [`spin_boost`] and the rotation to `exp(−iθ k⃗·σ⃗/2)` with `θ ∈ [0, π]`.
pub fn lift(lambda: &LorentzMatrix) -> Sl2cElement {
    let l = lambda.matrix();
    let m = FourVector([l[(0, 0)], l[(1, 0)], l[(2, 0)], l[(3, 0)]]);
    let m = OrbitPoint::new_unchecked(m);
    let boost = spin_boost(&m).expect("Λ is orthochronous");
    let boost_inv = crate::minkowski::boost_matrix(&m).expect("Λ is orthochronous").inverse();
    let rot4 = boost_inv.matrix() * l;
    let rot = Matrix3::from_fn(|i, j| rot4[(i + 1, j + 1)]);
    let (w, v) = rotation_to_quaternion(&rot);
    Sl2cElement(boost.0 * su2_from_quaternion(w, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::little_group::random_orbit_point;
    use crate::minkowski::{boost_matrix, minkowski_dot, random_lorentz};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_sl2c(rng: &mut ChaCha8Rng) -> Sl2cElement {
        let mut m = Matrix2::from_fn(|_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let det = m.determinant();
        m /= det.sqrt();
        Sl2cElement::new(m).unwrap()
    }

    /// Matrix exponential by truncated Taylor series with scaling.
    fn expm2(a: &Matrix2<C64>) -> Matrix2<C64> {
        let mut out = Matrix2::identity();
        let mut term = Matrix2::identity();
        for k in 1..40 {
            term = term * a / c(k as f64, 0.0);
            out += term;
        }
        out
    }

    #[test]
    fn vector_to_matrix_examples() {
        let r2 = 2f64.sqrt();
        let id = vector_to_matrix(&FourVector([r2, 0.0, 0.0, 0.0]));
        assert!((id - Matrix2::identity()).camax() < 1e-15);
        let x = vector_to_matrix(&FourVector([0.0, r2, 0.0, 0.0]));
        assert!((x - pauli()[0]).camax() < 1e-15);
    }

    #[test]
    fn determinant_is_minus_half_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..500 {
            let a = FourVector(std::array::from_fn(|_| rng.gen_range(-3.0..3.0)));
            let det = vector_to_matrix(&a).determinant();
            assert!((det.re + 0.5 * minkowski_dot(&a, &a)).abs() < 1e-12);
            assert!(det.im.abs() < 1e-12);
        }
    }

    #[test]
    fn matrix_to_vector_round_trip() {
        let r2 = 2f64.sqrt();
        let v = matrix_to_vector(&Matrix2::identity()).unwrap();
        assert!(v.max_abs_diff(&FourVector([r2, 0.0, 0.0, 0.0])) < 1e-15);
        let v = matrix_to_vector(&pauli()[0]).unwrap();
        assert!(v.max_abs_diff(&FourVector([0.0, r2, 0.0, 0.0])) < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut worst: f64 = 0.0;
        for _ in 0..1000 {
            let a = FourVector(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)));
            let back = matrix_to_vector(&vector_to_matrix(&a)).unwrap();
            worst = worst.max(back.max_abs_diff(&a));
        }
        assert!(worst <= 1e-13, "{worst}");
    }

    #[test]
    fn matrix_to_vector_rejects_non_hermitian() {
        let m = Matrix2::new(c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0));
        assert!(matches!(matrix_to_vector(&m), Err(OrbitError::NotHermitian(_))));
    }

    #[test]
    fn spin_boost_examples() {
        let b = spin_boost(&OrbitPoint::rest()).unwrap();
        assert!((b.matrix() - Matrix2::identity()).camax() < 1e-15);
        let xi = 0.9_f64;
        let n = OrbitPoint::new(FourVector([xi.cosh(), xi.sinh(), 0.0, 0.0])).unwrap();
        let expected = expm2(&(pauli()[0] * c(0.5 * xi, 0.0)));
        assert!((spin_boost(&n).unwrap().matrix() - expected).camax() < 1e-12);
    }

    #[test]
    fn spin_boost_covers_boost_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = random_orbit_point(&mut rng, 2.0);
            let b = spin_boost(&n).unwrap();
            assert!((b.matrix().determinant() - c(1.0, 0.0)).norm() < 1e-12);
            assert!((b.matrix() - b.matrix().adjoint()).camax() < 1e-15);
            let lam = covering_map(&b).unwrap();
            assert!(lam.max_abs_diff(&boost_matrix(&n).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn covering_map_rotation_about_z() {
        let theta = 0.8;
        let m = Sl2cElement::rotation([0.0, 0.0, 1.0], theta).unwrap();
        let expected = LorentzMatrix::rotation([0.0, 0.0, 1.0], theta).unwrap();
        assert!(covering_map(&m).unwrap().max_abs_diff(&expected) < 1e-14);
        assert_eq!(*covering_map(&Sl2cElement::identity()).unwrap().matrix(), Matrix4::identity());
    }

    #[test]
    fn covering_map_is_homomorphism_and_two_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let a = random_sl2c(&mut rng);
            let b = random_sl2c(&mut rng);
            let lab = covering_map(&a.compose(&b)).unwrap();
            let la_lb = covering_map(&a).unwrap().compose(&covering_map(&b).unwrap());
            let scale = lab.matrix().amax().max(1.0);
            assert!(lab.max_abs_diff(&la_lb) < 1e-12 * scale);
            assert!(covering_map(&a.neg()).unwrap().max_abs_diff(&covering_map(&a).unwrap()) < 1e-14 * scale);
        }
    }

    #[test]
    fn covering_map_rejects_non_unimodular() {
        let m = Sl2cElement(Matrix2::identity() * c(2.0, 0.0));
        assert!(covering_map(&m).is_err());
    }

    #[test]
    fn congruence_preserves_norm_and_unitary_gives_rotation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let m = random_sl2c(&mut rng);
            let a = FourVector(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)));
            let lam = covering_map(&m).unwrap();
            let moved = m.matrix() * vector_to_matrix(&a) * m.matrix().adjoint();
            let direct = vector_to_matrix(&lam.apply(&a));
            assert!((moved - direct).camax() < 1e-11 * lam.matrix().amax().max(moved.camax()) * (1.0 + a.0.iter().map(|x| x.abs()).sum::<f64>()));
            let la = lam.apply(&a);
            assert!((minkowski_dot(&la, &la) - minkowski_dot(&a, &a)).abs() < 1e-11 * lam.matrix().amax().powi(2));
        }
        for _ in 0..50 {
            let axis = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let u = Sl2cElement::rotation(axis, rng.gen_range(0.0..6.0)).unwrap();
            let lam = covering_map(&u).unwrap();
            assert!((lam.matrix()[(0, 0)] - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn lift_covers_lambda() {
        for seed in 0..300 {
            let lam = random_lorentz(seed, 1.5);
            let m = lift(&lam);
            assert!((m.matrix().determinant() - c(1.0, 0.0)).norm() < 1e-12);
            let back = covering_map(&m).unwrap();
            assert!(back.max_abs_diff(&lam) < 1e-11 * lam.matrix().amax(), "seed {seed}");
        }
        // rotation by nearly π exercises the non-trace branches
        let lam = LorentzMatrix::rotation([1.0, 2.0, -0.5], 3.14159).unwrap();
        assert!(covering_map(&lift(&lam)).unwrap().max_abs_diff(&lam) < 1e-12);
    }
}
