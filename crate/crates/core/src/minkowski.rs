//! Minkowski-space primitives with signature `(-,+,+,+)`.

use std::ops::{Add, Index, Mul, Neg, Sub};

use nalgebra::{Matrix4, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{OrbitError, Result};
use crate::little_group::OrbitPoint;

/// Tolerance for group-membership checks.
pub const GROUP_TOL: f64 = 1e-12;

/// Diagonal of the metric `η`.
pub const METRIC_DIAG: [f64; 4] = [-1.0, 1.0, 1.0, 1.0];

#[inline]
pub fn eta(mu: usize, nu: usize) -> f64 {
    if mu == nu {
        METRIC_DIAG[mu]
    } else {
        0.0
    }
}

pub fn metric() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::from(METRIC_DIAG))
}

/// A contravariant four-vector `a^μ`, index 0 timelike.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct FourVector(pub [f64; 4]);

impl FourVector {
    /// Builds a vector, rejecting NaN or infinite components.
    pub fn new(components: [f64; 4]) -> Result<Self> {
        if components.iter().all(|c| c.is_finite()) {
            Ok(Self(components))
        } else {
            Err(OrbitError::InvalidArgument(format!(
                "non-finite four-vector {components:?}"
            )))
        }
    }

    pub const fn rest() -> Self {
        Self([1.0, 0.0, 0.0, 0.0])
    }

    pub fn t(&self) -> f64 {
        self.0[0]
    }

    pub fn spatial(&self) -> [f64; 3] {
        [self.0[1], self.0[2], self.0[3]]
    }

    pub fn dot(&self, other: &Self) -> f64 {
        minkowski_dot(self, other)
    }

    pub fn square(&self) -> f64 {
        minkowski_dot(self, self)
    }

    /// Covariant components `a_μ = η_{μν} a^ν`.
    pub fn lower(&self) -> [f64; 4] {
        let a = self.0;
        [-a[0], a[1], a[2], a[3]]
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.map(|c| c * s))
    }

    pub fn to_vector(&self) -> Vector4<f64> {
        Vector4::from(self.0)
    }

    pub fn from_vector(v: &Vector4<f64>) -> Self {
        Self([v[0], v[1], v[2], v[3]])
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (0..4).map(|i| (self.0[i] - other.0[i]).abs()).fold(0.0, f64::max)
    }
}

impl Index<usize> for FourVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for FourVector {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl Sub for FourVector {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl Neg for FourVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self(self.0.map(|c| -c))
    }
}

/// `a·b = -a⁰b⁰ + a¹b¹ + a²b² + a³b³`.
pub fn minkowski_dot(a: &FourVector, b: &FourVector) -> f64 {
    -a.0[0] * b.0[0] + a.0[1] * b.0[1] + a.0[2] * b.0[2] + a.0[3] * b.0[3]
}

/// A proper orthochronous Lorentz transformation `Λ^μ_ν`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LorentzMatrix(Matrix4<f64>);

impl LorentzMatrix {
    pub fn identity() -> Self {
        Self(Matrix4::identity())
    }

    /// Validates `ΛᵀηΛ = η`, `det Λ = 1` and `Λ⁰₀ ≥ 1` at [`GROUP_TOL`].
    pub fn new(m: Matrix4<f64>) -> Result<Self> {
        Self::with_tolerance(m, GROUP_TOL)
    }

    pub fn with_tolerance(m: Matrix4<f64>, tol: f64) -> Result<Self> {
        if m.iter().any(|x| !x.is_finite()) {
            return Err(OrbitError::NotLorentz("non-finite entries".into()));
        }
        let scale = m.amax().max(1.0);
        let res = metric_residual(&m);
        if res > tol * scale * scale {
            return Err(OrbitError::NotLorentz(format!("metric residual {res:e}")));
        }
        if m[(0, 0)] < 1.0 - tol * scale {
            return Err(OrbitError::NotLorentz("not orthochronous".into()));
        }
        let det = m.determinant();
        if (det - 1.0).abs() > 1e-9 * scale.powi(4) {
            return Err(OrbitError::NotLorentz(format!("det = {det}")));
        }
        Ok(Self(m))
    }

    /// Wraps a matrix already known to be in the group.
    pub(crate) fn from_matrix_unchecked(m: Matrix4<f64>) -> Self {
        Self(m)
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    pub fn apply(&self, a: &FourVector) -> FourVector {
        FourVector::from_vector(&(self.0 * a.to_vector()))
    }

    pub fn compose(&self, rhs: &Self) -> Self {
        Self(self.0 * rhs.0)
    }

    /// `Λ⁻¹ = η Λᵀ η`.
    pub fn inverse(&self) -> Self {
        let g = metric();
        Self(g * self.0.transpose() * g)
    }

    /// Max entry of `ΛᵀηΛ - η`.
    pub fn metric_residual(&self) -> f64 {
        metric_residual(&self.0)
    }

    /// Pure rotation by `angle` about the unit `axis`.
    pub fn rotation(axis: [f64; 3], angle: f64) -> Result<Self> {
        let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        if !(norm > 0.0) || !angle.is_finite() {
            return Err(OrbitError::InvalidArgument("rotation axis must be nonzero".into()));
        }
        let k = axis.map(|c| c / norm);
        let (s, c) = angle.sin_cos();
        let mut m = Matrix4::identity();
        for i in 0..3 {
            for j in 0..3 {
                let delta = if i == j { 1.0 } else { 0.0 };
                let mut cross = 0.0;
                for l in 0..3 {
                    cross -= levi_civita3(i, j, l) * k[l];
                }
                m[(i + 1, j + 1)] = c * delta + (1.0 - c) * k[i] * k[j] + s * cross;
            }
        }
        Ok(Self(m))
    }

    /// Pure boost with rapidity `rapidity` along the unit `direction`.
    pub fn boost(direction: [f64; 3], rapidity: f64) -> Result<Self> {
        let norm = direction.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !(norm > 0.0) || !rapidity.is_finite() {
            return Err(OrbitError::InvalidArgument("boost direction must be nonzero".into()));
        }
        let d = direction.map(|c| c / norm);
        let (ch, sh) = (rapidity.cosh(), rapidity.sinh());
        let n = FourVector([ch, sh * d[0], sh * d[1], sh * d[2]]);
        Ok(boost_matrix(&OrbitPoint::new(n)?)?)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.0 - other.0).amax()
    }
}

fn metric_residual(m: &Matrix4<f64>) -> f64 {
    let g = metric();
    (m.transpose() * g * m - g).amax()
}

/// The pure boost `L(n)` with `L(n)·n₀ = n`.
///
/// `L^0_0 = n⁰`, `L^0_i = L^i_0 = nⁱ`, `L^i_j = δ_ij + nⁱnʲ/(1+n⁰)`.
pub fn boost_matrix(n: &OrbitPoint) -> Result<LorentzMatrix> {
    n.require_future()?;
    let v = n.vector().0;
    let mut m = Matrix4::identity();
    m[(0, 0)] = v[0];
    for i in 1..4 {
        m[(0, i)] = v[i];
        m[(i, 0)] = v[i];
        for j in 1..4 {
            m[(i, j)] += v[i] * v[j] / (1.0 + v[0]);
        }
    }
    Ok(LorentzMatrix(m))
}

/// The six Lorentz generators `J_i` (rotations) and `K_i` (boosts) as 4×4
/// matrices acting on contravariant vectors.
pub fn lorentz_generators() -> ([Matrix4<f64>; 3], [Matrix4<f64>; 3]) {
    let mut rot = [Matrix4::zeros(); 3];
    let mut boost = [Matrix4::zeros(); 3];
    for k in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                rot[k][(i + 1, j + 1)] = -levi_civita3(k, i, j);
            }
        }
        boost[k][(0, k + 1)] = 1.0;
        boost[k][(k + 1, 0)] = 1.0;
    }
    (rot, boost)
}

/// Deterministic random element `exp(θ·J + ξ·K)` with every parameter drawn
/// uniformly from `[-scale, scale]`.
pub fn random_lorentz(seed: u64, scale: f64) -> LorentzMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_lorentz_with(&mut rng, scale)
}

pub fn random_lorentz_with<R: Rng>(rng: &mut R, scale: f64) -> LorentzMatrix {
    if scale <= 0.0 {
        return LorentzMatrix::identity();
    }
    let (rot, boost) = lorentz_generators();
    let mut g = Matrix4::zeros();
    for k in 0..3 {
        g += rot[k] * rng.gen_range(-scale..=scale);
        g += boost[k] * rng.gen_range(-scale..=scale);
    }
    LorentzMatrix(g.exp())
}

/// `h^{λμ} = η^{λμ} + n^λ n^μ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectorH(Matrix4<f64>);

impl ProjectorH {
    pub fn new(n: &FourVector) -> Self {
        let mut m = metric();
        for l in 0..4 {
            for u in 0..4 {
                m[(l, u)] += n.0[l] * n.0[u];
            }
        }
        Self(m)
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    pub fn get(&self, l: usize, u: usize) -> f64 {
        self.0[(l, u)]
    }

    /// Eigenvalues of the mixed form `h^λ_μ = h^{λν}η_{νμ}`, sorted.
    pub fn mixed_eigenvalues(&self) -> [f64; 4] {
        let mixed = self.0 * metric();
        let mut ev: Vec<f64> = mixed.complex_eigenvalues().iter().map(|z| z.re).collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        [ev[0], ev[1], ev[2], ev[3]]
    }
}

/// Three-dimensional Levi-Civita symbol, `ε_{012} = 1`.
#[inline]
pub fn levi_civita3(i: usize, j: usize, k: usize) -> f64 {
    if i == j || j == k || i == k {
        return 0.0;
    }
    permutation_sign(&[i, j, k]) as f64
}

/// Covariant Levi-Civita symbol `ε_{μνκλ}` with `ε_{0123} = +1`.
#[inline]
pub fn levi_civita(mu: usize, nu: usize, ka: usize, la: usize) -> i32 {
    let idx = [mu, nu, ka, la];
    for a in 0..4 {
        for b in (a + 1)..4 {
            if idx[a] == idx[b] {
                return 0;
            }
        }
    }
    permutation_sign(&idx)
}

/// Contravariant symbol `ε^{μνκλ} = -ε_{μνκλ}` (one timelike index raised).
#[inline]
pub fn levi_civita_upper(mu: usize, nu: usize, ka: usize, la: usize) -> i32 {
    -levi_civita(mu, nu, ka, la)
}

fn permutation_sign(idx: &[usize]) -> i32 {
    let mut sign = 1;
    for a in 0..idx.len() {
        for b in (a + 1)..idx.len() {
            if idx[a] > idx[b] {
                sign = -sign;
            }
        }
    }
    sign
}

impl Mul<FourVector> for &LorentzMatrix {
    type Output = FourVector;
    fn mul(self, rhs: FourVector) -> FourVector {
        self.apply(&rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_orbit_point(seed: u64) -> OrbitPoint {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        crate::little_group::random_orbit_point(&mut rng, 1.5)
    }

    #[test]
    fn dot_examples() {
        let e0 = FourVector([1.0, 0.0, 0.0, 0.0]);
        let e1 = FourVector([0.0, 1.0, 0.0, 0.0]);
        assert_eq!(minkowski_dot(&e0, &e0), -1.0);
        assert_eq!(minkowski_dot(&e1, &e1), 1.0);
        let a = FourVector([2.0, 1.0, 0.0, 0.0]);
        let b = FourVector([1.0, 2.0, 0.0, 0.0]);
        assert_eq!(minkowski_dot(&a, &b), 0.0);
    }

    #[test]
    fn four_vector_rejects_nan() {
        assert!(FourVector::new([f64::NAN, 0.0, 0.0, 0.0]).is_err());
        assert!(FourVector::new([1.0, f64::INFINITY, 0.0, 0.0]).is_err());
    }

    #[test]
    fn boost_at_rest_is_identity() {
        let l = boost_matrix(&OrbitPoint::rest()).unwrap();
        assert_eq!(*l.matrix(), Matrix4::identity());
    }

    #[test]
    fn boost_along_x_maps_rest_vector() {
        let xi = 0.7_f64;
        let n = OrbitPoint::new(FourVector([xi.cosh(), xi.sinh(), 0.0, 0.0])).unwrap();
        let l = boost_matrix(&n).unwrap();
        assert!(l.apply(&FourVector::rest()).max_abs_diff(n.vector()) < 1e-12);
        assert!((l.matrix()[(0, 1)] - xi.sinh()).abs() < 1e-12);
        assert!((l.matrix()[(1, 1)] - xi.cosh()).abs() < 1e-12);
    }

    #[test]
    fn boost_properties_random() {
        for seed in 0..200 {
            let n = random_orbit_point(seed);
            let l = boost_matrix(&n).unwrap();
            assert!(l.metric_residual() < 1e-12);
            assert!(l.apply(&FourVector::rest()).max_abs_diff(n.vector()) < 1e-12);
            assert!((l.matrix() - l.matrix().transpose()).amax() < 1e-15);
            assert!(l.matrix()[(0, 0)] >= 1.0);
        }
    }

    #[test]
    fn boost_rejects_invalid() {
        let bad = OrbitPoint::new(FourVector([-1.0, 0.0, 0.0, 0.0])).unwrap();
        assert!(boost_matrix(&bad).is_err());
    }

    #[test]
    fn random_lorentz_properties() {
        assert_eq!(*random_lorentz(3, 0.0).matrix(), Matrix4::identity());
        for seed in 0..200 {
            let a = random_lorentz(seed, 1.0);
            let b = random_lorentz(seed + 1000, 1.0);
            assert!(a.metric_residual() < 1e-12);
            assert!(LorentzMatrix::new(*a.matrix()).is_ok());
            assert!(LorentzMatrix::new(*a.compose(&b).matrix()).is_ok());
        }
        assert_eq!(random_lorentz(9, 1.0), random_lorentz(9, 1.0));
    }

    #[test]
    fn inverse_undoes() {
        let a = random_lorentz(4, 1.2);
        let id = a.compose(&a.inverse());
        assert!((id.matrix() - Matrix4::identity()).amax() < 1e-12);
    }

    #[test]
    fn projector_properties() {
        for seed in 0..100 {
            let n = random_orbit_point(seed);
            let h = ProjectorH::new(n.vector());
            let hn = h.matrix() * n.vector().to_vector();
            // h^{λμ} n_μ
            let hn_low = h.matrix() * metric() * n.vector().to_vector();
            assert!(hn_low.amax() < 1e-12 * n.vector().0[0].powi(3), "{hn}");
            let heh = h.matrix() * metric() * h.matrix();
            assert!((heh - h.matrix()).amax() < 1e-12 * n.vector().0[0].powi(4));
            let ev = h.mixed_eigenvalues();
            assert!(ev[0].abs() < 1e-10);
            for e in &ev[1..] {
                assert!((e - 1.0).abs() < 1e-10, "{ev:?}");
            }
        }
    }

    #[test]
    fn levi_civita_contraction() {
        let mut sum = 0;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        sum += levi_civita(a, b, c, d) * levi_civita_upper(a, b, c, d);
                    }
                }
            }
        }
        assert_eq!(sum, -24);
        assert_eq!(levi_civita(0, 1, 2, 3), 1);
        assert_eq!(levi_civita(1, 0, 2, 3), -1);
        assert_eq!(levi_civita(3, 2, 1, 0), 1);
    }

    #[test]
    fn rotation_about_z() {
        let r = LorentzMatrix::rotation([0.0, 0.0, 1.0], 0.3).unwrap();
        let x = r.apply(&FourVector([0.0, 1.0, 0.0, 0.0]));
        assert!((x.0[1] - 0.3f64.cos()).abs() < 1e-15);
        assert!((x.0[2] - 0.3f64.sin()).abs() < 1e-15);
    }
}
