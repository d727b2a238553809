use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::dirac::{DiracScalar, QI};
use crate::minkowski::METRIC_DIAG;

/// Generator species in canonical order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Species {
    X,
    P,
    N,
    Dn,
}

impl Species {
    const ALL: [Species; 4] = [Species::X, Species::P, Species::N, Species::Dn];

    fn symbol(self) -> &'static str {
        match self {
            Species::X => "x",
            Species::P => "p",
            Species::N => "n",
            Species::Dn => "∂n",
        }
    }
}

/// One generator with an upper Lorentz index, packed as `4·species + index`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gen(u8);

impl Gen {
    pub fn new(species: Species, index: usize) -> Self {
        assert!(index < 4);
        Gen(species as u8 * 4 + index as u8)
    }

    pub fn species(self) -> Species {
        Species::ALL[(self.0 / 4) as usize]
    }

    pub fn index(self) -> usize {
        (self.0 % 4) as usize
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.species().symbol(), self.index())
    }
}

/// A canonically ordered word of generators.
pub type Monomial = Vec<Gen>;

pub(crate) fn eta_q(mu: usize) -> QI {
    QI::ratio(METRIC_DIAG[mu] as i64, 1)
}

fn i_unit() -> QI {
    QI::imag_unit()
}

/// `[u, v]` for two single generators, as a scalar.
fn generator_commutator(u: Gen, v: Gen) -> Option<QI> {
    if u.index() != v.index() {
        return None;
    }
    let eta = eta_q(u.index());
    match (u.species(), v.species()) {
        (Species::X, Species::P) => Some(i_unit() * eta),
        (Species::P, Species::X) => Some(-(i_unit() * eta)),
        (Species::Dn, Species::N) => Some(eta),
        (Species::N, Species::Dn) => Some(-eta),
        _ => None,
    }
}

type Terms = BTreeMap<Monomial, QI>;

fn accumulate(terms: &mut Terms, m: Monomial, c: QI) {
    if c.is_zero() {
        return;
    }
    match terms.entry(m) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

fn order_cache() -> &'static Mutex<HashMap<Vec<Gen>, Vec<(Monomial, QI)>>> {
    static CACHE: OnceLock<Mutex<HashMap<Vec<Gen>, Vec<(Monomial, QI)>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Normal-orders an arbitrary word: the first out-of-order adjacent pair `uv`
/// is rewritten as `vu + [u, v]`.
pub fn normal_order_word(word: &[Gen]) -> Vec<(Monomial, QI)> {
    let Some(i) = (0..word.len().saturating_sub(1)).find(|&i| word[i] > word[i + 1]) else {
        return vec![(word.to_vec(), QI::one())];
    };
    if let Some(hit) = order_cache().lock().unwrap().get(word) {
        return hit.clone();
    }
    let mut terms = Terms::new();
    let mut swapped = word.to_vec();
    swapped.swap(i, i + 1);
    // generators of one species commute, so a full sort of that run is safe
    if word[i].species() == word[i + 1].species() {
        let mut j = i;
        while j > 0 && swapped[j - 1].species() == swapped[j].species() && swapped[j - 1] > swapped[j] {
            swapped.swap(j - 1, j);
            j -= 1;
        }
    }
    for (m, c) in normal_order_word(&swapped) {
        accumulate(&mut terms, m, c);
    }
    if let Some(k) = generator_commutator(word[i], word[i + 1]) {
        let mut shorter = word[..i].to_vec();
        shorter.extend_from_slice(&word[i + 2..]);
        for (m, c) in normal_order_word(&shorter) {
            accumulate(&mut terms, m, c * k.clone());
        }
    }
    let out: Vec<_> = terms.into_iter().collect();
    order_cache().lock().unwrap().insert(word.to_vec(), out.clone());
    out
}

/// A finite sum of normal-ordered monomials with exact complex-rational
/// coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OperatorExpr {
    terms: Terms,
}

impl OperatorExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(c: QI) -> Self {
        let mut terms = Terms::new();
        accumulate(&mut terms, Vec::new(), c);
        Self { terms }
    }

    pub fn rational(num: i64, den: i64) -> Self {
        Self::scalar(QI::ratio(num, den))
    }

    pub fn one() -> Self {
        Self::rational(1, 1)
    }

    pub fn gen(species: Species, index: usize) -> Self {
        Self::word(&[Gen::new(species, index)])
    }

    pub fn x(mu: usize) -> Self {
        Self::gen(Species::X, mu)
    }

    pub fn p(mu: usize) -> Self {
        Self::gen(Species::P, mu)
    }

    pub fn n(mu: usize) -> Self {
        Self::gen(Species::N, mu)
    }

    pub fn dn(mu: usize) -> Self {
        Self::gen(Species::Dn, mu)
    }

    /// The product of the generators in the given order.
    pub fn word(word: &[Gen]) -> Self {
        let mut terms = Terms::new();
        for (m, c) in normal_order_word(word) {
            accumulate(&mut terms, m, c);
        }
        Self { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &QI)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &[Gen]) -> QI {
        self.terms.get(m).cloned().unwrap_or_else(QI::zero)
    }

    /// The scalar part when the expression has no generators.
    pub fn as_scalar(&self) -> Option<QI> {
        match self.terms.len() {
            0 => Some(QI::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, c: &QI) -> Self {
        let mut terms = Terms::new();
        for (m, v) in &self.terms {
            accumulate(&mut terms, m.clone(), v.clone() * c.clone());
        }
        Self { terms }
    }

    pub fn contains_species(&self, s: Species) -> bool {
        self.terms.keys().any(|m| m.iter().any(|g| g.species() == s))
    }

    /// Reduction modulo the left ideal generated by `n·n + 1`: in normal order
    /// the n-factors form a commutative block, where `(n⁰)²` is replaced by
    /// `1 + (n¹)² + (n²)² + (n³)²`.
    pub fn reduce_shell(&self) -> Self {
        let n0 = Gen::new(Species::N, 0);
        let mut out = Terms::new();
        let mut stack: Vec<(Monomial, QI)> = self.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        while let Some((m, c)) = stack.pop() {
            let Some(pos) = m.iter().position(|&g| g == n0).filter(|&p| m.get(p + 1) == Some(&n0)) else {
                accumulate(&mut out, m, c);
                continue;
            };
            let mut rest = m.clone();
            rest.drain(pos..pos + 2);
            stack.push((rest.clone(), c.clone()));
            for k in 1..4 {
                let g = Gen::new(Species::N, k);
                let mut w = rest.clone();
                w.insert(pos, g);
                w.insert(pos, g);
                w.sort();
                stack.push((w, c.clone()));
            }
        }
        Self { terms: out }
    }

    /// Replaces every `n^μ` by a number. Only meaningful after normal ordering,
    /// where all `n` stand to the left of `∂n`.
    pub fn substitute_n(&self, n: &[QI; 4]) -> Self {
        let mut out = Terms::new();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Vec::with_capacity(m.len());
            for g in m {
                if g.species() == Species::N {
                    coeff *= n[g.index()].clone();
                } else {
                    rest.push(*g);
                }
            }
            accumulate(&mut out, rest, coeff);
        }
        Self { terms: out }
    }

    /// Formal adjoint with `x`, `p`, `n` self-adjoint and `∂n† = −∂n` (flat
    /// measure on `n`-space), re-normal-ordered.
    pub fn adjoint(&self) -> Self {
        let mut out = OperatorExpr::zero();
        for (m, c) in &self.terms {
            let reversed: Vec<Gen> = m.iter().rev().copied().collect();
            let odd = m.iter().filter(|g| g.species() == Species::Dn).count() % 2 == 1;
            let coeff = if odd { -c.conj() } else { c.conj() };
            out = out + OperatorExpr::word(&reversed).scale(&coeff);
        }
        out
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }
}

pub fn commutator(a: &OperatorExpr, b: &OperatorExpr) -> OperatorExpr {
    &(a * b) - &(b * a)
}

impl<'a> Add<&'a OperatorExpr> for &'a OperatorExpr {
    type Output = OperatorExpr;
    fn add(self, rhs: &OperatorExpr) -> OperatorExpr {
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            accumulate(&mut terms, m.clone(), c.clone());
        }
        OperatorExpr { terms }
    }
}

impl<'a> Sub<&'a OperatorExpr> for &'a OperatorExpr {
    type Output = OperatorExpr;
    fn sub(self, rhs: &OperatorExpr) -> OperatorExpr {
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            accumulate(&mut terms, m.clone(), -c.clone());
        }
        OperatorExpr { terms }
    }
}

impl<'a> Mul<&'a OperatorExpr> for &'a OperatorExpr {
    type Output = OperatorExpr;
    fn mul(self, rhs: &OperatorExpr) -> OperatorExpr {
        let mut terms = Terms::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let c = ca.clone() * cb.clone();
                let mut w = ma.clone();
                w.extend_from_slice(mb);
                for (m, k) in normal_order_word(&w) {
                    accumulate(&mut terms, m, k * c.clone());
                }
            }
        }
        OperatorExpr { terms }
    }
}

impl Add for OperatorExpr {
    type Output = OperatorExpr;
    fn add(self, rhs: OperatorExpr) -> OperatorExpr {
        &self + &rhs
    }
}

impl Sub for OperatorExpr {
    type Output = OperatorExpr;
    fn sub(self, rhs: OperatorExpr) -> OperatorExpr {
        &self - &rhs
    }
}

impl Mul for OperatorExpr {
    type Output = OperatorExpr;
    fn mul(self, rhs: OperatorExpr) -> OperatorExpr {
        &self * &rhs
    }
}

impl Neg for OperatorExpr {
    type Output = OperatorExpr;
    fn neg(self) -> OperatorExpr {
        self.scale(&-QI::one())
    }
}

pub(crate) fn format_qi(c: &QI) -> String {
    if c.im.is_zero() {
        format!("{}", c.re)
    } else if c.re.is_zero() {
        format!("{}i", c.im)
    } else {
        format!("({}{}{}i)", c.re, if c.im < num_rational::BigRational::zero() { "" } else { "+" }, c.im)
    }
}

impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", format_qi(c))?;
            for g in m {
                write!(f, "·{g}")?;
            }
        }
        Ok(())
    }
}
