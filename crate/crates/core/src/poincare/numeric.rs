use nalgebra::Matrix4;
use num_traits::Zero;
use serde::Serialize;

use super::expr::{eta_q, OperatorExpr};
use crate::dirac::{projected_algebra, DiracScalar, GammaSet, M4, QI};
use crate::error::{OrbitError, Result};
use crate::minkowski::{levi_civita, FourVector, METRIC_DIAG};
use crate::{OrbitPoint, C64};

/// `W_μ = ½ε_{μνκλ}Σ_n^{νκ}p^λ` in the spin-½ realization.
pub fn spin_pauli_lubanski(p: &FourVector, n: &OrbitPoint) -> [M4<C64>; 4] {
    let g = GammaSet::<C64>::spinor_frame();
    let nc = n.vector().0.map(|x| C64::new(x, 0.0));
    let alg = projected_algebra(&g, &nc);
    std::array::from_fn(|mu| {
        let mut w = M4::zeros();
        for nu in 0..4 {
            for ka in 0..4 {
                for la in 0..4 {
                    let e = levi_civita(mu, nu, ka, la);
                    if e != 0 {
                        w += alg.sigma_n[nu][ka] * C64::new(0.5 * e as f64 * p.0[la], 0.0);
                    }
                }
            }
        }
        w
    })
}

/// `C_n = W_μW^μ` in the spin-½ realization.
pub fn spin_casimir(p: &FourVector, n: &OrbitPoint) -> M4<C64> {
    let w = spin_pauli_lubanski(p, n);
    (0..4).fold(M4::zeros(), |acc, mu| acc + w[mu] * w[mu] * C64::new(METRIC_DIAG[mu], 0.0))
}

/// Eigenvalues of the Hermitian part of `C_n`, ascending.
pub fn spin_casimir_eigenvalues(p: &FourVector, n: &OrbitPoint) -> Vec<f64> {
    let c = spin_casimir(p, n);
    let h = (c + c.adjoint()) * C64::new(0.5, 0.0);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

fn mass_of(p: &FourVector) -> Result<f64> {
    let m2 = -p.square();
    if !(m2 > 0.0) {
        return Err(OrbitError::Degenerate(format!("p is not timelike (p·p = {})", p.square())));
    }
    Ok(m2.sqrt())
}

/// `n(p) = p/m` with `m = √(−p·p)`.
pub fn n_of_p(p: &FourVector) -> Result<FourVector> {
    Ok(p.scale(1.0 / mass_of(p)?))
}

/// `J[μ][ν] = ∂n^μ/∂p^ν = (δ^μ_ν + p^μp_ν/m²)/m`.
pub fn n_of_p_jacobian(p: &FourVector) -> Result<Matrix4<f64>> {
    let m = mass_of(p)?;
    let lower = p.lower();
    Ok(Matrix4::from_fn(|mu, nu| {
        let delta = if mu == nu { 1.0 } else { 0.0 };
        (delta + p.0[mu] * lower[nu] / (m * m)) / m
    }))
}

/// Central differences of `n(p)` with step `h = 1e-6·‖p‖`.
pub fn n_of_p_jacobian_fd(p: &FourVector) -> Result<Matrix4<f64>> {
    mass_of(p)?;
    let h = 1e-6 * p.0.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut j = Matrix4::zeros();
    for nu in 0..4 {
        let mut hi = *p;
        let mut lo = *p;
        hi.0[nu] += h;
        lo.0[nu] -= h;
        let (a, b) = (n_of_p(&hi)?, n_of_p(&lo)?);
        for mu in 0..4 {
            j[(mu, nu)] = (a.0[mu] - b.0[mu]) / (2.0 * h);
        }
    }
    Ok(j)
}

type OpMatrix = Vec<Vec<OperatorExpr>>;

fn lift(m: &M4<QI>) -> OpMatrix {
    (0..4).map(|r| (0..4).map(|c| OperatorExpr::scalar(m[(r, c)].clone())).collect()).collect()
}

fn op_mul(a: &OpMatrix, b: &OpMatrix) -> OpMatrix {
    (0..4)
        .map(|r| {
            (0..4)
                .map(|c| (0..4).fold(OperatorExpr::zero(), |acc, k| &acc + &(&a[r][k] * &b[k][c])))
                .collect()
        })
        .collect()
}

fn op_sub(a: &OpMatrix, b: &OpMatrix) -> OpMatrix {
    (0..4).map(|r| (0..4).map(|c| &a[r][c] - &b[r][c]).collect()).collect()
}

fn op_scale(a: &OpMatrix, s: &OperatorExpr) -> OpMatrix {
    a.iter().map(|row| row.iter().map(|e| s * e).collect()).collect()
}

fn op_add(a: &OpMatrix, b: &OpMatrix) -> OpMatrix {
    (0..4).map(|r| (0..4).map(|c| &a[r][c] + &b[r][c]).collect()).collect()
}

/// Outcome of the gauged `i[K_T, K_L]` computation.
#[derive(Clone, Debug, Serialize)]
pub struct FieldCommutatorCheck {
    /// Whether `i[K_T, K_L]` contains no operator (x or p) terms.
    pub constant: bool,
    /// `c` in `i[K_T, K_L] = c·(−ieγ⁵(K^μn^ν − n^μK^ν)f_{μν})`, exact.
    pub proportionality: Option<String>,
    pub residual_entries: usize,
    #[serde(skip)]
    pub exact_constant: Option<QI>,
}

/// Builds `K_L = −(π·n)γ·n` and `K_T = γ⁵(γ·π + (π·n)γ·n)` with the minimally
/// substituted `π^μ = p^μ − e a^μ(x)`, `a_ν = −½f_{νμ}x^μ` for a constant
/// field `f` (lower indices), at a fixed rational `n`, and compares
/// `i[K_T, K_L]` with `−ieγ⁵(K^μn^ν − n^μK^ν)f_{μν}`.
pub fn gauged_k_commutator(n: &[QI; 4], f: &[[QI; 4]; 4], e: &QI) -> FieldCommutatorCheck {
    let g = GammaSet::<QI>::spinor_frame();
    let pi: Vec<OperatorExpr> = (0..4)
        .map(|mu| {
            let mut a_lower = OperatorExpr::zero();
            for nu in 0..4 {
                a_lower = &a_lower + &OperatorExpr::x(nu).scale(&(f[mu][nu].clone() * QI::ratio(-1, 2)));
            }
            let a_upper = a_lower.scale(&eta_q(mu));
            &OperatorExpr::p(mu) - &a_upper.scale(e)
        })
        .collect();
    let pi_n = (0..4).fold(OperatorExpr::zero(), |acc, mu| &acc + &pi[mu].scale(&(eta_q(mu) * n[mu].clone())));
    let slash_n = lift(&g.slash(n));
    let mut slash_pi: OpMatrix = vec![vec![OperatorExpr::zero(); 4]; 4];
    for mu in 0..4 {
        let gm = lift(&(g.gamma[mu].clone() * eta_q(mu)));
        slash_pi = op_add(&slash_pi, &op_scale(&gm, &pi[mu]));
    }
    let g5 = lift(&g.gamma5);
    let k_l = op_scale(&slash_n, &(-pi_n.clone()));
    let k_t = op_mul(&g5, &op_add(&slash_pi, &op_scale(&slash_n, &pi_n)));
    let i = OperatorExpr::scalar(QI::imag_unit());
    let lhs = op_scale(&op_sub(&op_mul(&k_t, &k_l), &op_mul(&k_l, &k_t)), &i);
    let alg = projected_algebra(&g, n);
    let mut spin = M4::<QI>::from_element(QI::zero());
    for mu in 0..4 {
        for nu in 0..4 {
            let t = alg.k[mu].clone() * n[nu].clone() - alg.k[nu].clone() * n[mu].clone();
            spin += t * f[mu][nu].clone();
        }
    }
    let rhs = g.gamma5.clone() * spin * (-(QI::imag_unit() * e.clone()));
    let scalars: Option<Vec<Vec<QI>>> = lhs.iter().map(|row| row.iter().map(OperatorExpr::as_scalar).collect()).collect();
    let Some(scalars) = scalars else {
        return FieldCommutatorCheck { constant: false, proportionality: None, residual_entries: 16, exact_constant: None };
    };
    let pivot = (0..16).find(|&k| !rhs[(k / 4, k % 4)].is_zero());
    let c = pivot.map(|k| scalars[k / 4][k % 4].clone() / rhs[(k / 4, k % 4)].clone()).unwrap_or_else(QI::zero);
    let residual_entries = (0..16)
        .filter(|&k| !(scalars[k / 4][k % 4].clone() - rhs[(k / 4, k % 4)].clone() * c.clone()).is_zero())
        .count();
    FieldCommutatorCheck {
        constant: true,
        proportionality: Some(super::expr::format_qi(&c)),
        residual_entries,
        exact_constant: Some(c),
    }
}
