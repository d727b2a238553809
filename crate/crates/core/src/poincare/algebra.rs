use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::expr::{commutator, eta_q, format_qi, OperatorExpr};
use crate::dirac::{DiracScalar, QI};
use crate::error::{OrbitError, Result};
use crate::minkowski::levi_civita;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum IndexSymmetry {
    None,
    Antisymmetric,
}

/// Operators labelled by Lorentz index tuples.
#[derive(Clone, Debug)]
pub struct IndexedOperatorFamily {
    pub name: String,
    pub symmetry: IndexSymmetry,
    entries: BTreeMap<Vec<usize>, OperatorExpr>,
}

impl IndexedOperatorFamily {
    pub fn new(name: &str, symmetry: IndexSymmetry) -> Self {
        Self { name: name.into(), symmetry, entries: BTreeMap::new() }
    }

    /// Inserts an entry; antisymmetric families also store the swapped pair
    /// with opposite sign and reject nonzero diagonal entries.
    pub fn insert(&mut self, idx: Vec<usize>, expr: OperatorExpr) -> Result<()> {
        if idx.iter().any(|&i| i > 3) {
            return Err(OrbitError::InvalidArgument(format!("index out of range: {idx:?}")));
        }
        if self.symmetry == IndexSymmetry::Antisymmetric {
            if idx.len() != 2 {
                return Err(OrbitError::InvalidArgument("antisymmetric families take index pairs".into()));
            }
            if idx[0] == idx[1] {
                if !expr.is_zero() {
                    return Err(OrbitError::InvalidArgument(format!("{}^{idx:?} must vanish", self.name)));
                }
            } else {
                self.entries.insert(vec![idx[1], idx[0]], -expr.clone());
            }
        }
        self.entries.insert(idx, expr);
        Ok(())
    }

    pub fn get(&self, idx: &[usize]) -> OperatorExpr {
        self.entries.get(idx).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<usize>, &OperatorExpr)> {
        self.entries.iter()
    }

    pub fn map(&self, f: impl Fn(&OperatorExpr) -> OperatorExpr) -> Self {
        Self {
            name: self.name.clone(),
            symmetry: self.symmetry,
            entries: self.entries.iter().map(|(k, v)| (k.clone(), f(v))).collect(),
        }
    }
}

/// How `n` enters the generators.
#[derive(Clone, Debug)]
pub enum NMode {
    Symbolic,
    /// Generators are built symbolically, then evaluated at the given point.
    Numeric([QI; 4]),
}

#[derive(Clone, Debug)]
pub struct Generators {
    pub m: IndexedOperatorFamily,
    pub k: IndexedOperatorFamily,
    pub m_n: IndexedOperatorFamily,
}

/// `M^{μν} = x^μp^ν − x^νp^μ − i(n^μ∂n^ν − n^ν∂n^μ)`.
pub fn lorentz_generator(mu: usize, nu: usize) -> OperatorExpr {
    let orbital = &(OperatorExpr::x(mu) * OperatorExpr::p(nu)) - &(OperatorExpr::x(nu) * OperatorExpr::p(mu));
    let internal = &(OperatorExpr::n(mu) * OperatorExpr::dn(nu)) - &(OperatorExpr::n(nu) * OperatorExpr::dn(mu));
    &orbital - &internal.scale(&QI::imag_unit())
}

/// `K^μ = M^{μν}n_ν`, `M_n^{μν} = M^{μν} + K^μn^ν − K^νn^μ`.
pub fn build_generators(mode: &NMode) -> Generators {
    let mut m = IndexedOperatorFamily::new("M", IndexSymmetry::Antisymmetric);
    for mu in 0..4 {
        for nu in mu..4 {
            m.insert(vec![mu, nu], lorentz_generator(mu, nu)).expect("valid indices");
        }
    }
    let mut k = IndexedOperatorFamily::new("K", IndexSymmetry::None);
    for mu in 0..4 {
        let mut acc = OperatorExpr::zero();
        for nu in 0..4 {
            acc = &acc + &(m.get(&[mu, nu]) * OperatorExpr::n(nu)).scale(&eta_q(nu));
        }
        k.insert(vec![mu], acc).expect("valid index");
    }
    let mut m_n = IndexedOperatorFamily::new("M_n", IndexSymmetry::Antisymmetric);
    for mu in 0..4 {
        for nu in mu..4 {
            let e = if mu == nu {
                OperatorExpr::zero()
            } else {
                let a = k.get(&[mu]) * OperatorExpr::n(nu);
                let b = k.get(&[nu]) * OperatorExpr::n(mu);
                (&m.get(&[mu, nu]) + &(&a - &b)).reduce_shell()
            };
            m_n.insert(vec![mu, nu], e).expect("valid indices");
        }
    }
    let gens = Generators { m, k, m_n };
    match mode {
        NMode::Symbolic => gens,
        NMode::Numeric(n) => Generators {
            m: gens.m.map(|e| e.substitute_n(n)),
            k: gens.k.map(|e| e.substitute_n(n)),
            m_n: gens.m_n.map(|e| e.substitute_n(n)),
        },
    }
}

/// `h^{μν} = η^{μν} + n^μn^ν` as an operator.
pub fn h_expr(mu: usize, nu: usize) -> OperatorExpr {
    let nn = OperatorExpr::n(mu) * OperatorExpr::n(nu);
    if mu == nu {
        &OperatorExpr::scalar(eta_q(mu)) + &nn
    } else {
        nn
    }
}

/// `x·n`.
pub fn x_dot_n() -> OperatorExpr {
    (0..4).fold(OperatorExpr::zero(), |acc, mu| &acc + &(OperatorExpr::x(mu) * OperatorExpr::n(mu)).scale(&eta_q(mu)))
}

/// Exact fit of `target` as a linear combination of `basis`.
#[derive(Clone, Debug, Serialize)]
pub struct BasisFit {
    /// Coefficients as exact strings, free directions set to zero.
    pub coefficients: Vec<String>,
    /// Number of monomials left over after subtracting the fit.
    pub residual_terms: usize,
    pub rank: usize,
    #[serde(skip)]
    pub exact: Vec<QI>,
}

impl BasisFit {
    pub fn closes(&self) -> bool {
        self.residual_terms == 0
    }
}

/// Gaussian elimination over Q(i) on the monomial coefficient matrix.
pub fn fit_basis(target: &OperatorExpr, basis: &[OperatorExpr]) -> BasisFit {
    let mut monomials: Vec<_> = target.terms().map(|(m, _)| m.clone()).collect();
    for b in basis {
        monomials.extend(b.terms().map(|(m, _)| m.clone()));
    }
    monomials.sort();
    monomials.dedup();
    let cols = basis.len();
    let mut rows: Vec<Vec<QI>> = monomials
        .iter()
        .map(|m| {
            let mut r: Vec<QI> = basis.iter().map(|b| b.coefficient(m)).collect();
            r.push(target.coefficient(m));
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(row, p);
        let inv = QI::one() / rows[row][col].clone();
        for c in col..=cols {
            rows[row][c] = rows[row][c].clone() * inv.clone();
        }
        for r in 0..rows.len() {
            if r != row && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in col..=cols {
                    let v = rows[row][c].clone() * f.clone();
                    rows[r][c] -= v;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let mut exact = vec![QI::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        exact[c] = rows[r][cols].clone();
    }
    let fitted = basis.iter().zip(&exact).fold(OperatorExpr::zero(), |acc, (b, c)| &acc + &b.scale(c));
    let residual_terms = (target - &fitted).len();
    BasisFit { coefficients: exact.iter().map(format_qi).collect(), residual_terms, rank: pivots.len(), exact }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OrbitRelation {
    /// `[M_n^{μν}, M_n^{κλ}]`
    RotationRotation,
    /// `[M_n^{μν}, x^λ]`
    RotationPosition,
}

/// One commutator of the on-orbit algebra, reduced on the shell.
#[derive(Clone, Debug, Serialize)]
pub struct ClosureEntry {
    pub relation: OrbitRelation,
    pub lhs: Vec<usize>,
    /// Fit against the reference four-term `h`-pattern.
    pub reference: BasisFit,
    /// Whether the reference coefficients reproduce the commutator exactly.
    pub matches_reference: bool,
    /// Fit against every covariant structure of the right index type.
    pub general: BasisFit,
    pub lhs_terms: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitAlgebraReport {
    pub entries: Vec<ClosureEntry>,
    pub rotation_closes: bool,
    pub rotation_matches_reference: bool,
    pub position_closes: bool,
    pub position_matches_reference: bool,
}

fn reference_rotation_basis(mu: usize, nu: usize, ka: usize, la: usize, m_n: &IndexedOperatorFamily) -> (Vec<OperatorExpr>, Vec<QI>) {
    let i = QI::imag_unit();
    let term = |a: usize, b: usize, c: usize, d: usize| (h_expr(a, b) * m_n.get(&[c, d])).reduce_shell();
    (
        vec![term(mu, ka, nu, la), term(mu, la, nu, ka), term(nu, ka, mu, la), term(nu, la, mu, ka)],
        vec![i.clone(), -i.clone(), -i.clone(), i],
    )
}

/// `η^{ab}M_n^{cd}` and `n^an^bM_n^{cd}` over every pairing of the four free
/// indices.
fn general_rotation_basis(mu: usize, nu: usize, ka: usize, la: usize, m_n: &IndexedOperatorFamily) -> Vec<OperatorExpr> {
    let idx = [mu, nu, ka, la];
    let mut out = Vec::new();
    for a in 0..4 {
        for b in a + 1..4 {
            let rest: Vec<usize> = (0..4).filter(|&c| c != a && c != b).collect();
            let m = m_n.get(&[idx[rest[0]], idx[rest[1]]]);
            out.push((OperatorExpr::scalar(if idx[a] == idx[b] { eta_q(idx[a]) } else { QI::zero() }) * m.clone()).reduce_shell());
            out.push((OperatorExpr::n(idx[a]) * OperatorExpr::n(idx[b]) * m).reduce_shell());
        }
    }
    out
}

fn reference_position_basis(mu: usize, nu: usize, la: usize) -> (Vec<OperatorExpr>, Vec<QI>) {
    let i = QI::imag_unit();
    let xn = x_dot_n();
    (
        vec![
            (h_expr(mu, la) * OperatorExpr::x(nu)).reduce_shell(),
            (h_expr(nu, la) * OperatorExpr::x(mu)).reduce_shell(),
            (h_expr(mu, la) * OperatorExpr::n(nu) * xn.clone()).reduce_shell(),
            (h_expr(nu, la) * OperatorExpr::n(mu) * xn).reduce_shell(),
        ],
        vec![i.clone(), -i.clone(), i.clone(), i],
    )
}

/// Every rank-3 structure linear in `x` built from `η`, `n` and `x`.
fn general_position_basis(mu: usize, nu: usize, la: usize) -> Vec<OperatorExpr> {
    let xn = x_dot_n();
    let idx = [mu, nu, la];
    let eta = |a: usize, b: usize| OperatorExpr::scalar(if a == b { eta_q(a) } else { QI::zero() });
    let n = OperatorExpr::n;
    let mut out = Vec::new();
    for free in 0..3 {
        let others: Vec<usize> = (0..3).filter(|&c| c != free).collect();
        let (a, b) = (idx[others[0]], idx[others[1]]);
        let x = OperatorExpr::x(idx[free]);
        out.push(eta(a, b) * x.clone());
        out.push(n(a) * n(b) * x);
        out.push(eta(a, b) * n(idx[free]) * xn.clone());
    }
    out.push(n(mu) * n(nu) * n(la) * xn);
    out.into_iter().map(|e| e.reduce_shell()).collect()
}

fn entry(relation: OrbitRelation, lhs: Vec<usize>, value: OperatorExpr, reference: (Vec<OperatorExpr>, Vec<QI>), general: Vec<OperatorExpr>) -> ClosureEntry {
    let (pb, pc) = reference;
    let claimed = pb.iter().zip(&pc).fold(OperatorExpr::zero(), |acc, (b, c)| &acc + &b.scale(c));
    ClosureEntry {
        relation,
        matches_reference: (&value - &claimed).reduce_shell().is_zero(),
        reference: fit_basis(&value, &pb),
        general: fit_basis(&value, &general),
        lhs_terms: value.len(),
        lhs,
    }
}

/// Computes every `[M_n^{μν}, M_n^{κλ}]` (μ<ν, κ<λ) and `[M_n^{μν}, x^λ]`
/// symbolically, reduces on the shell and decomposes each over the reference
/// `h`-pattern and over the general covariant basis.
pub fn verify_orbit_algebra() -> OrbitAlgebraReport {
    let g = build_generators(&NMode::Symbolic);
    let pairs: Vec<(usize, usize)> = (0..4).flat_map(|a| (a + 1..4).map(move |b| (a, b))).collect();
    let mut jobs = Vec::new();
    for &(mu, nu) in &pairs {
        for &(ka, la) in &pairs {
            jobs.push((mu, nu, ka, Some(la)));
        }
        for la in 0..4 {
            jobs.push((mu, nu, la, None));
        }
    }
    let entries: Vec<ClosureEntry> = jobs
        .par_iter()
        .map(|&(mu, nu, ka, la)| match la {
            Some(la) => {
                let v = commutator(&g.m_n.get(&[mu, nu]), &g.m_n.get(&[ka, la])).reduce_shell();
                entry(
                    OrbitRelation::RotationRotation,
                    vec![mu, nu, ka, la],
                    v,
                    reference_rotation_basis(mu, nu, ka, la, &g.m_n),
                    general_rotation_basis(mu, nu, ka, la, &g.m_n),
                )
            }
            None => {
                let v = commutator(&g.m_n.get(&[mu, nu]), &OperatorExpr::x(ka)).reduce_shell();
                entry(OrbitRelation::RotationPosition, vec![mu, nu, ka], v, reference_position_basis(mu, nu, ka), general_position_basis(mu, nu, ka))
            }
        })
        .collect();
    let of = |r: OrbitRelation| entries.iter().filter(move |e| e.relation == r);
    OrbitAlgebraReport {
        rotation_closes: of(OrbitRelation::RotationRotation).all(|e| e.general.closes()),
        rotation_matches_reference: of(OrbitRelation::RotationRotation).all(|e| e.matches_reference),
        position_closes: of(OrbitRelation::RotationPosition).all(|e| e.general.closes()),
        position_matches_reference: of(OrbitRelation::RotationPosition).all(|e| e.matches_reference),
        entries,
    }
}

/// `W_μ = ½ε_{μνκλ}M_n^{νκ}p^λ` and `C_n = W_μW^μ`.
pub fn pauli_lubanski(g: &Generators) -> (IndexedOperatorFamily, OperatorExpr) {
    let mut w = IndexedOperatorFamily::new("W", IndexSymmetry::None);
    let half = QI::ratio(1, 2);
    for mu in 0..4 {
        let mut acc = OperatorExpr::zero();
        for nu in 0..4 {
            for ka in 0..4 {
                for la in 0..4 {
                    let e = levi_civita(mu, nu, ka, la);
                    if e != 0 {
                        let t = g.m_n.get(&[nu, ka]) * OperatorExpr::p(la);
                        acc = &acc + &t.scale(&(half.clone() * QI::ratio(e as i64, 1)));
                    }
                }
            }
        }
        w.insert(vec![mu], acc.reduce_shell()).expect("valid index");
    }
    let mut c = OperatorExpr::zero();
    for mu in 0..4 {
        let wm = w.get(&[mu]);
        c = &c + &(&wm * &wm).scale(&eta_q(mu));
    }
    (w, c.reduce_shell())
}

/// `ε_{μνκλ}[M_n^{νκ}, p^λ]` for each μ.
pub fn pauli_lubanski_reordering(g: &Generators) -> Vec<OperatorExpr> {
    (0..4)
        .map(|mu| {
            let mut acc = OperatorExpr::zero();
            for nu in 0..4 {
                for ka in 0..4 {
                    for la in 0..4 {
                        let e = levi_civita(mu, nu, ka, la);
                        if e != 0 {
                            let t = commutator(&g.m_n.get(&[nu, ka]), &OperatorExpr::p(la));
                            acc = &acc + &t.scale(&QI::ratio(e as i64, 1));
                        }
                    }
                }
            }
            acc.reduce_shell()
        })
        .collect()
}

/// `p·p`.
pub fn p_squared() -> OperatorExpr {
    (0..4).fold(OperatorExpr::zero(), |acc, mu| &acc + &(OperatorExpr::p(mu) * OperatorExpr::p(mu)).scale(&eta_q(mu)))
}

/// `p·n`.
pub fn p_dot_n() -> OperatorExpr {
    (0..4).fold(OperatorExpr::zero(), |acc, mu| &acc + &(OperatorExpr::p(mu) * OperatorExpr::n(mu)).scale(&eta_q(mu)))
}

/// Symbolic Pauli-Lubanski checks.
#[derive(Clone, Debug, Serialize)]
pub struct PauliLubanskiReport {
    /// Monomial counts of `ε_{μνκλ}[M_n^{νκ}, p^λ]`, μ = 0..3.
    pub reordering_terms: Vec<usize>,
    /// `[W_μ, p^ν]` as strings, indexed `4μ + ν`.
    pub w_p_commutators: Vec<String>,
    pub w_p_commute: bool,
    /// `[W_μ, p^ν]` after imposing `p = m n`, i.e. on the aligned subspace.
    pub w_p_commute_aligned: bool,
    pub casimir_commutes_with_mass: bool,
    pub casimir_terms: usize,
}

/// Substitutes `p^μ → m n^μ` symbolically (m kept as 1; the check is
/// homogeneous in p).
fn align_p_with_n(e: &OperatorExpr) -> OperatorExpr {
    let mut out = OperatorExpr::zero();
    for (m, c) in e.terms() {
        let word: Vec<_> = m
            .iter()
            .map(|g| if g.species() == super::expr::Species::P { super::expr::Gen::new(super::expr::Species::N, g.index()) } else { *g })
            .collect();
        out = &out + &OperatorExpr::word(&word).scale(c);
    }
    out.reduce_shell()
}

pub fn pauli_lubanski_report() -> PauliLubanskiReport {
    let g = build_generators(&NMode::Symbolic);
    let reorder = pauli_lubanski_reordering(&g);
    let (w, c) = pauli_lubanski(&g);
    let comms: Vec<OperatorExpr> = (0..16)
        .into_par_iter()
        .map(|k| commutator(&w.get(&[k / 4]), &OperatorExpr::p(k % 4)).reduce_shell())
        .collect();
    let pp = p_squared();
    PauliLubanskiReport {
        reordering_terms: reorder.iter().map(OperatorExpr::len).collect(),
        w_p_commute: comms.iter().all(OperatorExpr::is_zero),
        w_p_commute_aligned: comms.iter().all(|e| align_p_with_n(e).is_zero()),
        w_p_commutators: comms.iter().map(|e| e.to_string()).collect(),
        casimir_commutes_with_mass: commutator(&c, &pp).reduce_shell().is_zero(),
        casimir_terms: c.len(),
    }
}

/// The `n·n` and `(n·n + 1)` operators.
pub fn n_squared() -> OperatorExpr {
    (0..4).fold(OperatorExpr::zero(), |acc, mu| &acc + &(OperatorExpr::n(mu) * OperatorExpr::n(mu)).scale(&eta_q(mu)))
}

pub fn shell_constraint() -> OperatorExpr {
    &n_squared() + &OperatorExpr::one()
}

/// `[a,[b,c]] + [b,[c,a]] + [c,[a,b]]`.
pub fn jacobi_residual(a: &OperatorExpr, b: &OperatorExpr, c: &OperatorExpr) -> OperatorExpr {
    let t1 = commutator(a, &commutator(b, c));
    let t2 = commutator(b, &commutator(c, a));
    let t3 = commutator(c, &commutator(a, b));
    &(&t1 + &t2) + &t3
}
