use nalgebra::Matrix4;
use serde::Serialize;

use super::{commutator, eps3, eta_t, DiracScalar, GammaSet, M4};
use crate::error::{OrbitError, Result};
use crate::little_group::OrbitPoint;
use crate::minkowski::FourVector;
use crate::C64;

/// `a·b = η_{μν} a^μ b^ν`.
pub fn mdot<T: DiracScalar>(a: &[T; 4], b: &[T; 4]) -> T {
    let mut s = T::zero();
    for mu in 0..4 {
        s += eta_t::<T>(mu) * a[mu].clone() * b[mu].clone();
    }
    s
}

/// `h^{μν} = η^{μν} + n^μ n^ν`.
pub fn h_upper<T: DiracScalar>(n: &[T; 4], mu: usize, nu: usize) -> T {
    let eta = if mu == nu { eta_t::<T>(mu) } else { T::zero() };
    eta + n[mu].clone() * n[nu].clone()
}

/// `K^μ = Σ^{μν} n_ν`.
pub fn k_vector<T: DiracScalar>(g: &GammaSet<T>, n: &[T; 4]) -> [M4<T>; 4] {
    std::array::from_fn(|mu| {
        let mut k = M4::from_element(T::zero());
        for nu in 0..4 {
            k += g.sigma(mu, nu) * (eta_t::<T>(nu) * n[nu].clone());
        }
        k
    })
}

/// `γ_n^μ = γ_λ h^{λμ} = γ^μ + (γ·n) n^μ`.
pub fn projected_gamma<T: DiracScalar>(g: &GammaSet<T>, n: &[T; 4]) -> [M4<T>; 4] {
    let gn = g.slash(n);
    std::array::from_fn(|mu| g.gamma[mu].clone() + gn.clone() * n[mu].clone())
}

/// `γ_n^μ`, `Σ_n^{μν} = (i/4)[γ_n^μ, γ_n^ν]` and `K^μ` at one orbit point.
#[derive(Clone, Debug)]
pub struct ProjectedAlgebra<T: DiracScalar> {
    pub n: [T; 4],
    pub gamma_n: [M4<T>; 4],
    pub sigma_n: [[M4<T>; 4]; 4],
    pub k: [M4<T>; 4],
}

pub fn projected_algebra<T: DiracScalar>(g: &GammaSet<T>, n: &[T; 4]) -> ProjectedAlgebra<T> {
    let gamma_n = projected_gamma(g, n);
    let quarter_i = T::imag_unit() * T::ratio(1, 4);
    let sigma_n = std::array::from_fn(|mu| {
        std::array::from_fn(|nu| commutator(&gamma_n[mu], &gamma_n[nu]) * quarter_i.clone())
    });
    ProjectedAlgebra { n: n.clone(), gamma_n, sigma_n, k: k_vector(g, n) }
}

/// Which relation a residual belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AlgebraRelation {
    /// `[K^μ, K^ν] = −iΣ_n^{μν}`
    KK,
    /// `[Σ_n^{μν}, K^λ] = −i(h^{νλ}K^μ − h^{μλ}K^ν)`
    SigmaK,
    /// `[Σ_n^{μν}, Σ_n^{λρ}] = −i(h^{νλ}Σ^{μρ} + h^{ρμ}Σ^{νλ} − h^{μλ}Σ^{νρ} − h^{ρν}Σ^{μλ})`
    SigmaSigma,
    /// `Σ_n^{μν} = Σ^{μν} + K^μn^ν − n^μK^ν`
    Decomposition,
    /// `K^μ n_μ = 0`, `Σ_n^{μν} n_ν = 0`
    Transversality,
}

impl<T: DiracScalar> ProjectedAlgebra<T> {
    fn h(&self, mu: usize, nu: usize) -> T {
        h_upper(&self.n, mu, nu)
    }

    /// Every defect matrix of the commutator table; all vanish when the
    /// algebra closes.
    pub fn defects(&self, g: &GammaSet<T>) -> Vec<(AlgebraRelation, [usize; 4], M4<T>)> {
        let i = T::imag_unit();
        let (s, k) = (&self.sigma_n, &self.k);
        let mut out = Vec::new();
        for mu in 0..4 {
            for nu in 0..4 {
                let d = commutator(&k[mu], &k[nu]) + s[mu][nu].clone() * i.clone();
                out.push((AlgebraRelation::KK, [mu, nu, 0, 0], d));
                let d = s[mu][nu].clone()
                    - g.sigma(mu, nu)
                    - k[mu].clone() * self.n[nu].clone()
                    + k[nu].clone() * self.n[mu].clone();
                out.push((AlgebraRelation::Decomposition, [mu, nu, 0, 0], d));
                for la in 0..4 {
                    let rhs = (k[mu].clone() * self.h(nu, la) - k[nu].clone() * self.h(mu, la)) * i.clone();
                    let d = commutator(&s[mu][nu], &k[la]) + rhs;
                    out.push((AlgebraRelation::SigmaK, [mu, nu, la, 0], d));
                    for rho in 0..4 {
                        let rhs = (s[mu][rho].clone() * self.h(nu, la)
                            + s[nu][la].clone() * self.h(rho, mu)
                            - s[nu][rho].clone() * self.h(mu, la)
                            - s[mu][la].clone() * self.h(rho, nu))
                            * i.clone();
                        let d = commutator(&s[mu][nu], &s[la][rho]) + rhs;
                        out.push((AlgebraRelation::SigmaSigma, [mu, nu, la, rho], d));
                    }
                }
            }
        }
        let mut kn = M4::from_element(T::zero());
        for mu in 0..4 {
            kn += k[mu].clone() * (eta_t::<T>(mu) * self.n[mu].clone());
            let mut sn = M4::from_element(T::zero());
            for nu in 0..4 {
                sn += s[mu][nu].clone() * (eta_t::<T>(nu) * self.n[nu].clone());
            }
            out.push((AlgebraRelation::Transversality, [mu, 0, 0, 0], sn));
        }
        out.push((AlgebraRelation::Transversality, [4, 0, 0, 0], kn));
        out
    }
}

impl ProjectedAlgebra<C64> {
    /// Largest entry over every defect.
    pub fn max_defect(&self, g: &GammaSet<C64>) -> f64 {
        self.defects(g).iter().map(|(_, _, d)| d.camax()).fold(0.0, f64::max)
    }

    /// Numeric rank of a family of matrices viewed as vectors in `C^16`.
    pub fn rank_of(mats: &[M4<C64>]) -> usize {
        let cols: Vec<C64> = mats.iter().flat_map(|m| m.iter().copied()).collect();
        let a = nalgebra::DMatrix::from_column_slice(16, mats.len(), &cols);
        a.svd(false, false).singular_values.iter().filter(|&&s| s > 1e-9).count()
    }

    pub fn k_rank(&self) -> usize {
        Self::rank_of(&self.k)
    }

    pub fn sigma_rank(&self) -> usize {
        let mut v = Vec::new();
        for mu in 0..4 {
            for nu in mu + 1..4 {
                v.push(self.sigma_n[mu][nu]);
            }
        }
        Self::rank_of(&v)
    }
}

/// `ε^{ijk} (½σ_k ⊕ ½σ_k)` in the spinor-frame block layout.
pub fn rest_frame_spin_block<T: DiracScalar>(i: usize, j: usize) -> M4<T> {
    let g = GammaSet::<T>::chiral();
    let mut m = M4::from_element(T::zero());
    for k in 0..3 {
        let e = eps3::<T>(i - 1, j - 1, k);
        if e.is_zero() {
            continue;
        }
        // the lower-left chiral block of γ^k is σ_k
        let mut sk = M4::from_element(T::zero());
        let gk = &g.gamma[k + 1];
        for r in 0..2 {
            for c in 0..2 {
                let v = gk[(r + 2, c)].clone() * T::ratio(1, 2);
                sk[(r, c)] = v.clone();
                sk[(r + 2, c + 2)] = v;
            }
        }
        m += sk * e;
    }
    m
}

/// `(K_L, K_T)` with `K_L = −(p·n)(γ·n)` and `K_T = γ⁵(γ·p + (p·n)γ·n)`.
pub fn k_operators<T: DiracScalar>(g: &GammaSet<T>, p: &[T; 4], n: &[T; 4]) -> (M4<T>, M4<T>) {
    let pn = mdot(p, n);
    let gn = g.slash(n);
    let kl = gn.clone() * (-pn.clone());
    let kt = g.gamma5.clone() * (g.slash(p) + gn * pn);
    (kl, kt)
}

/// Half-sum forms: `K_L = ½(γ·p + (γ·n)(γ·p)(γ·n))`, `K_T = ½γ⁵(γ·p − (γ·n)(γ·p)(γ·n))`.
pub fn k_operators_from_halves<T: DiracScalar>(g: &GammaSet<T>, p: &[T; 4], n: &[T; 4]) -> (M4<T>, M4<T>) {
    let (gp, gn) = (g.slash(p), g.slash(n));
    let sandwich = gn.clone() * gp.clone() * gn;
    let half = T::ratio(1, 2);
    let kl = (gp.clone() + sandwich.clone()) * half.clone();
    let kt = g.gamma5.clone() * (gp - sandwich) * half;
    (kl, kt)
}

/// `K_T = −2iγ⁵(p·K)(γ·n)`.
pub fn k_transverse_from_k<T: DiracScalar>(g: &GammaSet<T>, p: &[T; 4], n: &[T; 4]) -> M4<T> {
    let k = k_vector(g, n);
    let mut pk = M4::from_element(T::zero());
    for mu in 0..4 {
        pk += k[mu].clone() * (eta_t::<T>(mu) * p[mu].clone());
    }
    g.gamma5.clone() * pk * g.slash(n) * (T::imag_unit() * T::ratio(-2, 1))
}

/// `(K_L² − (p·n)², K_T² − (p² + (p·n)²))`, both zero exactly.
pub fn k_square_defects<T: DiracScalar>(g: &GammaSet<T>, p: &[T; 4], n: &[T; 4]) -> (M4<T>, M4<T>) {
    let (kl, kt) = k_operators(g, p, n);
    let pn = mdot(p, n);
    let id = M4::<T>::identity();
    let dl = kl.clone() * kl - id.clone() * (pn.clone() * pn.clone());
    let dt = kt.clone() * kt - id * (mdot(p, p) + pn.clone() * pn);
    (dl, dt)
}

fn c4(v: &FourVector) -> [C64; 4] {
    v.0.map(|x| C64::new(x, 0.0))
}

/// `(K_T² − K_L²)/2M`.
pub fn free_hamiltonian(p: &FourVector, n: &OrbitPoint, mass: f64) -> M4<C64> {
    let g = GammaSet::<C64>::spinor_frame();
    let (kl, kt) = k_operators(&g, &c4(p), &c4(n.vector()));
    (kt * kt - kl * kl) / C64::new(2.0 * mass, 0.0)
}

/// `Σ_n^{μν} f_{μν}` for covariant `f`.
pub fn spin_field_coupling(n: &OrbitPoint, f: &Matrix4<f64>) -> M4<C64> {
    let g = GammaSet::<C64>::spinor_frame();
    let alg = projected_algebra(&g, &c4(n.vector()));
    let mut m = M4::zeros();
    for mu in 0..4 {
        for nu in 0..4 {
            m += alg.sigma_n[mu][nu] * C64::new(f[(mu, nu)], 0.0);
        }
    }
    m
}

fn check_antisymmetric(f: &Matrix4<f64>) -> Result<()> {
    let r = (f + f.transpose()).amax();
    if r > 1e-12 * f.amax().max(1.0) {
        return Err(OrbitError::InvalidArgument(format!("field tensor not antisymmetric (residual {r:e})")));
    }
    Ok(())
}

/// `(p²/2M)·1 + coupling·Σ_n^{μν} f_{μν}` for a constant field, with the
/// potential folded into the kinetic momentum `p`.
pub fn em_hamiltonian(p: &FourVector, n: &OrbitPoint, f: &Matrix4<f64>, mass: f64, coupling: f64) -> Result<M4<C64>> {
    check_antisymmetric(f)?;
    if !(mass > 0.0) {
        return Err(OrbitError::InvalidArgument("mass must be positive".into()));
    }
    let kinetic = M4::<C64>::identity() * C64::new(p.square() / (2.0 * mass), 0.0);
    Ok(kinetic + spin_field_coupling(n, f) * C64::new(coupling, 0.0))
}

/// Parity, energy-branch and helicity projector pairs.
#[derive(Clone, Debug)]
pub struct Projectors {
    pub plus: M4<C64>,
    pub minus: M4<C64>,
    pub energy_plus: M4<C64>,
    pub energy_minus: M4<C64>,
    pub helicity_plus: M4<C64>,
    pub helicity_minus: M4<C64>,
}

/// `2iγ⁵(p·K)`, whose square is `p² + (p·n)²`.
pub fn helicity_operator<T: DiracScalar>(g: &GammaSet<T>, p: &[T; 4], n: &[T; 4]) -> M4<T> {
    let k = k_vector(g, n);
    let mut pk = M4::from_element(T::zero());
    for mu in 0..4 {
        pk += k[mu].clone() * (eta_t::<T>(mu) * p[mu].clone());
    }
    g.gamma5.clone() * pk * (T::imag_unit() * T::ratio(2, 1))
}

/// `P_± = ½(1 ± γ·n)`, `P_{E±} = ½(1 ± (p·n)/|p·n|)`,
/// `P_{n±} = ½(1 ± 2iγ⁵(p·K)/√(p² + (p·n)²))` with `γ⁵ = iγ⁰γ¹γ²γ³`.
pub fn projectors(p: &FourVector, n: &OrbitPoint) -> Result<Projectors> {
    let g = GammaSet::<C64>::spinor_frame();
    let (pc, nc) = (c4(p), c4(n.vector()));
    let id = M4::<C64>::identity();
    let half = C64::new(0.5, 0.0);
    let gn = g.slash(&nc);
    let pn = p.dot(n.vector());
    if pn.abs() < 1e-14 * (1.0 + p.0.iter().map(|x| x.abs()).sum::<f64>()) {
        return Err(OrbitError::Degenerate("p·n = 0: energy branch undefined".into()));
    }
    let transverse = p.square() + pn * pn;
    if !(transverse > 1e-28 * (1.0 + p.0.iter().map(|x| x * x).sum::<f64>())) {
        return Err(OrbitError::Degenerate("p² + (p·n)² ≤ 0: helicity undefined".into()));
    }
    let sgn = C64::new(pn.signum(), 0.0);
    let hel = helicity_operator(&g, &pc, &nc) / C64::new(transverse.sqrt(), 0.0);
    Ok(Projectors {
        plus: (id + gn) * half,
        minus: (id - gn) * half,
        energy_plus: (id + id * sgn) * half,
        energy_minus: (id - id * sgn) * half,
        helicity_plus: (id + hel) * half,
        helicity_minus: (id - hel) * half,
    })
}

fn matrix_json(m: &M4<C64>) -> serde_json::Value {
    serde_json::Value::Array(
        (0..4)
            .map(|r| serde_json::Value::Array((0..4).map(|c| serde_json::json!([m[(r, c)].re, m[(r, c)].im])).collect()))
            .collect(),
    )
}

/// Every matrix family at `n`, row-major with entries `[re, im]`.
pub fn dump_matrix_families(n: &OrbitPoint) -> serde_json::Value {
    let g = GammaSet::<C64>::spinor_frame();
    let alg = projected_algebra(&g, &c4(n.vector()));
    let list = |ms: &[M4<C64>]| serde_json::Value::Array(ms.iter().map(matrix_json).collect());
    let sigma_n: Vec<serde_json::Value> = alg.sigma_n.iter().map(|row| list(row)).collect();
    serde_json::json!({
        "n": n.vector().0,
        "gamma": list(&g.gamma),
        "gamma5": matrix_json(&g.gamma5),
        "gamma_n": list(&alg.gamma_n),
        "sigma_n": sigma_n,
        "k": list(&alg.k),
    })
}
