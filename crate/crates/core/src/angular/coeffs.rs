//! Clebsch-Gordan, 3j, Racah W, 6j and 9j coefficients in exact arithmetic.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::exact::{ExactReal, RadicalSum};
use crate::error::{OrbitError, Result};

/// A half-integer stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);
    pub const ONE: HalfInt = HalfInt(2);

    pub const fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    pub const fn integer(n: i32) -> Self {
        HalfInt(2 * n)
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn to_f64(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    /// Dimension `2j + 1` of the spin-`j` multiplet.
    pub fn multiplicity(self) -> i32 {
        self.0 + 1
    }

    /// Projections `j, j-1, …, -j`.
    pub fn projections(self) -> impl Iterator<Item = HalfInt> {
        let j = self.0;
        (0..=j.max(-1)).map(move |k| HalfInt(j - 2 * k))
    }

    /// Integer value, if any.
    pub fn as_integer(self) -> Option<i32> {
        self.is_integer().then_some(self.0 / 2)
    }
}

impl std::ops::Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl std::ops::Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl std::ops::Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for HalfInt {
    type Err = OrbitError;

    /// Accepts `3`, `-1/2`, `1.5`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || OrbitError::InvalidQuantumNumbers(format!("not a half-integer: {s:?}"));
        if let Some((n, d)) = s.split_once('/') {
            let n: i32 = n.trim().parse().map_err(|_| bad())?;
            return match d.trim() {
                "2" => Ok(HalfInt(n)),
                "1" => Ok(HalfInt(2 * n)),
                _ => Err(bad()),
            };
        }
        if let Ok(n) = s.parse::<i32>() {
            return Ok(HalfInt(2 * n));
        }
        let x: f64 = s.parse().map_err(|_| bad())?;
        let t = (2.0 * x).round();
        if (2.0 * x - t).abs() > 1e-9 || t.abs() > f64::from(i32::MAX) {
            return Err(bad());
        }
        Ok(HalfInt(t as i32))
    }
}

const FACT_MAX: usize = 512;

fn factorials() -> &'static [BigInt] {
    static CACHE: OnceLock<Vec<BigInt>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let mut v = Vec::with_capacity(FACT_MAX + 1);
        v.push(BigInt::one());
        for k in 1..=FACT_MAX {
            let next = &v[k - 1] * BigInt::from(k);
            v.push(next);
        }
        v
    })
}

/// `n!` for a value given as twice an integer.
fn fact2(twice: i32) -> Result<&'static BigInt> {
    if twice < 0 || twice % 2 != 0 {
        return Err(OrbitError::InvalidQuantumNumbers(format!(
            "factorial of {}",
            HalfInt(twice)
        )));
    }
    factorials()
        .get((twice / 2) as usize)
        .ok_or(OrbitError::Overflow("factorial table"))
}

fn ratio(n: BigInt, d: BigInt) -> BigRational {
    BigRational::new(n, d)
}

fn check_magnitude(j: HalfInt) -> Result<()> {
    if j.0 < 0 {
        return Err(OrbitError::InvalidQuantumNumbers(format!("negative spin {j}")));
    }
    if j.0 as usize > FACT_MAX / 2 {
        return Err(OrbitError::InvalidQuantumNumbers(format!("spin {j} too large")));
    }
    Ok(())
}

fn check_projection(j: HalfInt, m: HalfInt) -> Result<()> {
    check_magnitude(j)?;
    if m.0.abs() > j.0 || (j.0 - m.0) % 2 != 0 {
        return Err(OrbitError::InvalidQuantumNumbers(format!(
            "projection {m} incompatible with spin {j}"
        )));
    }
    Ok(())
}

/// Whether `(a, b, c)` obey the triangle rule with integer perimeter.
pub fn triangle(a: HalfInt, b: HalfInt, c: HalfInt) -> bool {
    let (a, b, c) = (a.0, b.0, c.0);
    a >= 0 && b >= 0 && c >= 0 && (a + b + c) % 2 == 0 && c <= a + b && c >= (a - b).abs()
}

/// `Δ(abc)² = (a+b-c)!(a-b+c)!(-a+b+c)!/(a+b+c+1)!`.
fn delta_sq(a: HalfInt, b: HalfInt, c: HalfInt) -> Result<BigRational> {
    let (a, b, c) = (a.0, b.0, c.0);
    let num = fact2(a + b - c)? * fact2(a - b + c)? * fact2(-a + b + c)?;
    Ok(ratio(num, fact2(a + b + c + 2)?.clone()))
}

/// Combines `√radicand · Σ` into a signed radical.
fn assemble(radicand: BigRational, sum: BigRational) -> Result<ExactReal> {
    if sum.is_zero() {
        return Ok(ExactReal::zero());
    }
    let sign = if sum.is_negative() { -1 } else { 1 };
    ExactReal::signed_sqrt(sign, radicand * &sum * &sum)
}

fn sign_pow(twice_exponent: i32) -> i64 {
    debug_assert!(twice_exponent % 2 == 0);
    if (twice_exponent / 2).rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `⟨j1 m1; j2 m2 | j m⟩` with the Condon-Shortley phase.
pub fn clebsch_gordan(
    j1: HalfInt,
    j2: HalfInt,
    j: HalfInt,
    m1: HalfInt,
    m2: HalfInt,
    m: HalfInt,
) -> Result<ExactReal> {
    check_projection(j1, m1)?;
    check_projection(j2, m2)?;
    check_projection(j, m)?;
    if m1 + m2 != m || !triangle(j1, j2, j) {
        return Ok(ExactReal::zero());
    }
    let (j1, j2, j, m1, m2, m) = (j1.0, j2.0, j.0, m1.0, m2.0, m.0);
    let mut rad = delta_sq(HalfInt(j1), HalfInt(j2), HalfInt(j))? * BigInt::from(j + 1);
    let projections = fact2(j1 + m1)?
        * fact2(j1 - m1)?
        * fact2(j2 + m2)?
        * fact2(j2 - m2)?
        * fact2(j + m)?
        * fact2(j - m)?;
    rad *= BigRational::from_integer(projections);

    // k runs over twice-values with every factorial argument nonnegative
    let kmin = 0.max(j2 - j - m1).max(j1 - j + m2);
    let kmax = (j1 + j2 - j).min(j1 - m1).min(j2 + m2);
    let mut sum = BigRational::zero();
    let mut k = kmin;
    while k <= kmax {
        let den = fact2(k)?
            * fact2(j1 + j2 - j - k)?
            * fact2(j1 - m1 - k)?
            * fact2(j2 + m2 - k)?
            * fact2(j - j2 + m1 + k)?
            * fact2(j - j1 - m2 + k)?;
        let term = ratio(BigInt::from(sign_pow(k)), den);
        sum += term;
        k += 2;
    }
    assemble(rad, sum)
}

/// Wigner 3j symbol `(j1 j2 j3; m1 m2 m3)`.
pub fn wigner_3j(
    j1: HalfInt,
    j2: HalfInt,
    j3: HalfInt,
    m1: HalfInt,
    m2: HalfInt,
    m3: HalfInt,
) -> Result<ExactReal> {
    check_projection(j1, m1)?;
    check_projection(j2, m2)?;
    check_projection(j3, m3)?;
    if (m1 + m2 + m3).0 != 0 || !triangle(j1, j2, j3) {
        return Ok(ExactReal::zero());
    }
    let cg = clebsch_gordan(j1, j2, j3, m1, m2, -m3)?;
    let norm = ExactReal::sqrt_of(BigRational::from_integer(j3.multiplicity().into()))?;
    Ok(cg.div(&norm)?.with_phase(i64::from((j1.0 - j2.0 - m3.0) / 2)))
}

/// Racah `W(abcd; ef)`, zero unless the triads (abe), (cde), (acf), (bdf)
/// are all valid.
pub fn racah_w(
    a: HalfInt,
    b: HalfInt,
    c: HalfInt,
    d: HalfInt,
    e: HalfInt,
    f: HalfInt,
) -> Result<ExactReal> {
    for x in [a, b, c, d, e, f] {
        check_magnitude(x)?;
    }
    if !(triangle(a, b, e) && triangle(c, d, e) && triangle(a, c, f) && triangle(b, d, f)) {
        return Ok(ExactReal::zero());
    }
    let rad = delta_sq(a, b, e)? * delta_sq(c, d, e)? * delta_sq(a, c, f)? * delta_sq(b, d, f)?;
    let (a, b, c, d, e, f) = (a.0, b.0, c.0, d.0, e.0, f.0);
    let kmin = (a + b + e).max(c + d + e).max(a + c + f).max(b + d + f);
    let kmax = (a + b + c + d).min(a + d + e + f).min(b + c + e + f);
    let mut sum = BigRational::zero();
    let mut k = kmin;
    while k <= kmax {
        let den = fact2(k - a - b - e)?
            * fact2(k - c - d - e)?
            * fact2(k - a - c - f)?
            * fact2(k - b - d - f)?
            * fact2(a + b + c + d - k)?
            * fact2(a + d + e + f - k)?
            * fact2(b + c + e + f - k)?;
        let num = fact2(k + 2)? * BigInt::from(sign_pow(k + a + b + c + d));
        sum += ratio(num, den);
        k += 2;
    }
    assemble(rad, sum)
}

/// Wigner 6j symbol `{j1 j2 j3; j4 j5 j6} = (-1)^{j1+j2+j4+j5} W(j1 j2 j5 j4; j3 j6)`.
pub fn six_j(
    j1: HalfInt,
    j2: HalfInt,
    j3: HalfInt,
    j4: HalfInt,
    j5: HalfInt,
    j6: HalfInt,
) -> Result<ExactReal> {
    let w = racah_w(j1, j2, j5, j4, j3, j6)?;
    Ok(w.with_phase(i64::from((j1 + j2 + j4 + j5).0 / 2)))
}

/// Wigner 9j symbol, rows given in order.
pub fn nine_j(j: [[HalfInt; 3]; 3]) -> Result<ExactReal> {
    nine_j_sum(j)?.to_exact()
}

/// The 9j symbol as an unreduced radical sum
/// `Σ_x (-1)^{2x}(2x+1){j1 j4 j7; j8 j9 x}{j2 j5 j8; j4 x j6}{j3 j6 j9; x j1 j2}`.
pub fn nine_j_sum(j: [[HalfInt; 3]; 3]) -> Result<RadicalSum> {
    let [[j1, j2, j3], [j4, j5, j6], [j7, j8, j9]] = j;
    for x in j.iter().flatten() {
        check_magnitude(*x)?;
    }
    let rows_ok = j.iter().all(|r| triangle(r[0], r[1], r[2]));
    let cols_ok = (0..3).all(|c| triangle(j[0][c], j[1][c], j[2][c]));
    let mut sum = RadicalSum::new();
    if !(rows_ok && cols_ok) {
        return Ok(sum);
    }
    let lo = (j1.0 - j9.0).abs().max((j4.0 - j8.0).abs()).max((j2.0 - j6.0).abs());
    let hi = (j1.0 + j9.0).min(j4.0 + j8.0).min(j2.0 + j6.0);
    let mut x = lo;
    while x <= hi {
        let hx = HalfInt(x);
        let t = six_j(j1, j4, j7, j8, j9, hx)?
            * six_j(j2, j5, j8, j4, hx, j6)?
            * six_j(j3, j6, j9, hx, j1, j2)?;
        if !t.is_zero() {
            let weight = BigRational::from_integer(BigInt::from((x + 1) * if x % 2 == 0 { 1 } else { -1 }));
            sum.add_term(t.radicand(), weight * BigInt::from(t.sign()));
        }
        x += 2;
    }
    Ok(sum)
}
