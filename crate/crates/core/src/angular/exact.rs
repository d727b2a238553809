//! Exact signed square roots of rationals and sums of them.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Mul, Neg};

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{OrbitError, Result};

/// `sign · √(p/q)` stored as the signed square `sign · p/q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactReal {
    signed_sq: BigRational,
}

impl ExactReal {
    pub fn zero() -> Self {
        Self { signed_sq: BigRational::zero() }
    }

    pub fn one() -> Self {
        Self { signed_sq: BigRational::one() }
    }

    /// The rational `r` itself.
    pub fn from_rational(r: BigRational) -> Self {
        let sq = &r * &r;
        Self { signed_sq: if r.is_negative() { -sq } else { sq } }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    /// `sign · √radicand`; the radicand must be nonnegative.
    pub fn signed_sqrt(sign: i32, radicand: BigRational) -> Result<Self> {
        if radicand.is_negative() {
            return Err(OrbitError::InvalidArgument("negative radicand".into()));
        }
        let signed_sq = match sign.cmp(&0) {
            Ordering::Greater => radicand,
            Ordering::Less => -radicand,
            Ordering::Equal => BigRational::zero(),
        };
        Ok(Self { signed_sq })
    }

    pub fn sqrt_of(radicand: BigRational) -> Result<Self> {
        Self::signed_sqrt(1, radicand)
    }

    /// Value whose square carries the sign of the value, i.e. `sign·p/q`.
    pub fn signed_square(&self) -> &BigRational {
        &self.signed_sq
    }

    pub fn sign(&self) -> i32 {
        if self.signed_sq.is_positive() {
            1
        } else if self.signed_sq.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn is_zero(&self) -> bool {
        self.signed_sq.is_zero()
    }

    pub fn radicand(&self) -> BigRational {
        self.signed_sq.abs()
    }

    pub fn p(&self) -> BigInt {
        self.signed_sq.numer().abs()
    }

    pub fn q(&self) -> BigInt {
        self.signed_sq.denom().clone()
    }

    /// The square `value²`, always nonnegative.
    pub fn square(&self) -> BigRational {
        self.radicand()
    }

    /// Rational value when the radicand is a perfect square.
    pub fn to_rational(&self) -> Option<BigRational> {
        let r = rational_sqrt(&self.radicand())?;
        Some(if self.sign() < 0 { -r } else { r })
    }

    pub fn to_f64(&self) -> f64 {
        let r = self.radicand();
        let v = ratio_to_f64(&r).sqrt();
        f64::from(self.sign()) * v
    }

    pub fn abs(&self) -> Self {
        Self { signed_sq: self.radicand() }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(OrbitError::Degenerate("reciprocal of zero".into()));
        }
        Ok(Self { signed_sq: self.signed_sq.recip() })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.recip()?)
    }

    /// Multiplies by `(-1)^k`.
    pub fn with_phase(self, k: i64) -> Self {
        if k.rem_euclid(2) == 1 {
            -self
        } else {
            self
        }
    }

    /// Exact sum when both terms share a radical class, `None` otherwise.
    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        let mut s = RadicalSum::new();
        s.push(self);
        s.push(other);
        s.to_exact().ok()
    }
}

impl Default for ExactReal {
    fn default() -> Self {
        Self::zero()
    }
}

impl Mul for &ExactReal {
    type Output = ExactReal;
    fn mul(self, rhs: &ExactReal) -> ExactReal {
        let prod = &self.signed_sq * &rhs.signed_sq;
        let neg = self.sign() * rhs.sign() < 0;
        ExactReal { signed_sq: if neg { -prod.abs() } else { prod.abs() } }
    }
}

impl Mul for ExactReal {
    type Output = ExactReal;
    fn mul(self, rhs: ExactReal) -> ExactReal {
        &self * &rhs
    }
}

impl Neg for ExactReal {
    type Output = ExactReal;
    fn neg(self) -> ExactReal {
        ExactReal { signed_sq: -self.signed_sq }
    }
}

impl PartialOrd for ExactReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.signed_sq.cmp(&other.signed_sq)
    }
}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let sign = if self.sign() < 0 { "-" } else { "" };
        if let Some(r) = rational_sqrt(&self.radicand()) {
            return write!(f, "{sign}{r}");
        }
        write!(f, "{sign}sqrt({})", self.radicand())
    }
}

/// Serialised form used by coefficient tables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactRepr {
    pub sign: i32,
    pub p: String,
    pub q: String,
    pub value: f64,
}

impl From<&ExactReal> for ExactRepr {
    fn from(x: &ExactReal) -> Self {
        Self {
            sign: x.sign(),
            p: x.p().to_string(),
            q: x.q().to_string(),
            value: x.to_f64(),
        }
    }
}

impl Serialize for ExactReal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ExactRepr::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactReal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let r = ExactRepr::deserialize(d)?;
        let p: BigInt = r.p.parse().map_err(D::Error::custom)?;
        let q: BigInt = r.q.parse().map_err(D::Error::custom)?;
        if q.is_zero() {
            return Err(D::Error::custom("zero denominator"));
        }
        ExactReal::signed_sqrt(r.sign, BigRational::new(p, q)).map_err(D::Error::custom)
    }
}

/// `Σ cᵢ √rᵢ` with the radicals grouped into classes whose pairwise ratio
/// is a rational square. Distinct classes are linearly independent over
/// the rationals, so the sum vanishes exactly when every class
/// coefficient does.
#[derive(Clone, Debug, Default)]
pub struct RadicalSum {
    terms: Vec<(BigRational, BigRational)>,
}

impl RadicalSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: &ExactReal) {
        if x.is_zero() {
            return;
        }
        let r = x.radicand();
        let sign = BigRational::from_integer(x.sign().into());
        self.add_term(r, sign);
    }

    /// Adds `coeff · √radicand`.
    pub fn add_term(&mut self, radicand: BigRational, coeff: BigRational) {
        if radicand.is_zero() || coeff.is_zero() {
            return;
        }
        for (rep, c) in self.terms.iter_mut() {
            if let Some(t) = rational_sqrt(&(&radicand * &*rep)) {
                // √radicand = (t / rep) √rep
                *c += coeff * t / &*rep;
                return;
            }
        }
        self.terms.push((radicand, coeff));
    }

    pub fn extend<'a>(&mut self, xs: impl IntoIterator<Item = &'a ExactReal>) {
        for x in xs {
            self.push(x);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_zero())
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(r, c)| ratio_to_f64(c) * ratio_to_f64(r).sqrt())
            .sum()
    }

    /// Collapses to a single signed radical.
    pub fn to_exact(&self) -> Result<ExactReal> {
        let live: Vec<_> = self.terms.iter().filter(|(_, c)| !c.is_zero()).collect();
        match live.as_slice() {
            [] => Ok(ExactReal::zero()),
            [(r, c)] => {
                let sign = if c.is_negative() { -1 } else { 1 };
                ExactReal::signed_sqrt(sign, c * c * r)
            }
            _ => Err(OrbitError::NotSingleRadical),
        }
    }
}

impl<'a> FromIterator<&'a ExactReal> for RadicalSum {
    fn from_iter<I: IntoIterator<Item = &'a ExactReal>>(iter: I) -> Self {
        let mut s = RadicalSum::new();
        s.extend(iter);
        s
    }
}

impl FromIterator<ExactReal> for RadicalSum {
    fn from_iter<I: IntoIterator<Item = ExactReal>>(iter: I) -> Self {
        let mut s = RadicalSum::new();
        for x in iter {
            s.push(&x);
        }
        s
    }
}

fn biguint_sqrt_exact(n: &BigUint) -> Option<BigUint> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = biguint_sqrt_exact(r.numer().magnitude())?;
    let d = biguint_sqrt_exact(r.denom().magnitude())?;
    Some(BigRational::new(
        BigInt::from_biguint(Sign::Plus, n),
        BigInt::from_biguint(Sign::Plus, d),
    ))
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // scale both parts down to keep f64 in range
    let shift = r.denom().bits().max(r.numer().bits()).saturating_sub(1000);
    let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}
