//! Flat coefficient rows for CSV/JSON emission. Quantum numbers are stored
//! as `2j` integers.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::coeffs::{clebsch_gordan, nine_j, six_j, HalfInt};
use super::exact::ExactReal;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CgRow {
    pub two_j1: i32,
    pub two_j2: i32,
    pub two_j: i32,
    pub two_m1: i32,
    pub two_m2: i32,
    pub two_m: i32,
    pub sign: i32,
    pub p: String,
    pub q: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SixJRow {
    pub two_j1: i32,
    pub two_j2: i32,
    pub two_j3: i32,
    pub two_j4: i32,
    pub two_j5: i32,
    pub two_j6: i32,
    pub sign: i32,
    pub p: String,
    pub q: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NineJRow {
    pub two_j: [i32; 9],
    pub sign: i32,
    pub p: String,
    pub q: String,
    pub value: f64,
}

fn parts(x: &ExactReal) -> (i32, String, String, f64) {
    (x.sign(), x.p().to_string(), x.q().to_string(), x.to_f64())
}

pub fn cg_row(j1: HalfInt, j2: HalfInt, j: HalfInt, m1: HalfInt, m2: HalfInt) -> Result<CgRow> {
    let m = m1 + m2;
    let v = clebsch_gordan(j1, j2, j, m1, m2, m)?;
    let (sign, p, q, value) = parts(&v);
    Ok(CgRow {
        two_j1: j1.twice(),
        two_j2: j2.twice(),
        two_j: j.twice(),
        two_m1: m1.twice(),
        two_m2: m2.twice(),
        two_m: m.twice(),
        sign,
        p,
        q,
        value,
    })
}

/// Every coefficient `⟨j1 m1; j2 m2 | j m1+m2⟩` for `|j1-j2| ≤ j ≤ j1+j2`,
/// ordered by `j`, then `m1`, then `m2`, both descending.
pub fn cg_table(j1: HalfInt, j2: HalfInt) -> Result<Vec<CgRow>> {
    let lo = (j1.twice() - j2.twice()).abs();
    let hi = j1.twice() + j2.twice();
    let keys: Vec<(HalfInt, HalfInt, HalfInt)> = (lo..=hi)
        .step_by(2)
        .map(HalfInt::from_twice)
        .flat_map(|j| {
            j1.projections().flat_map(move |m1| j2.projections().map(move |m2| (j, m1, m2)))
        })
        .filter(|(j, m1, m2)| (*m1 + *m2).twice().abs() <= j.twice())
        .collect();
    keys.par_iter().map(|&(j, m1, m2)| cg_row(j1, j2, j, m1, m2)).collect()
}

pub fn six_j_row(j: [HalfInt; 6]) -> Result<SixJRow> {
    let v = six_j(j[0], j[1], j[2], j[3], j[4], j[5])?;
    let (sign, p, q, value) = parts(&v);
    Ok(SixJRow {
        two_j1: j[0].twice(),
        two_j2: j[1].twice(),
        two_j3: j[2].twice(),
        two_j4: j[3].twice(),
        two_j5: j[4].twice(),
        two_j6: j[5].twice(),
        sign,
        p,
        q,
        value,
    })
}

pub fn nine_j_row(j: [[HalfInt; 3]; 3]) -> Result<NineJRow> {
    let v = nine_j(j)?;
    let (sign, p, q, value) = parts(&v);
    let mut two_j = [0; 9];
    for (slot, x) in two_j.iter_mut().zip(j.iter().flatten()) {
        *slot = x.twice();
    }
    Ok(NineJRow { two_j, sign, p, q, value })
}
