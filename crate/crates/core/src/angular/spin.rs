//! Total-spin operators on `(C²)^{⊗N}` and the left-combed reduction of the
//! product space into total-spin multiplets.
//!
//! Basis index: spin 1 is the most significant bit, bit value 0 is `m = +½`.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::coeffs::{clebsch_gordan, HalfInt};
use super::exact::{ExactReal, RadicalSum};
use crate::error::Result;
use crate::{check_spin_count, state_cap, C64};

/// `m` (as twice its value) of spin `a` in basis state `index`.
pub fn twice_projection(index: usize, a: usize, n: usize) -> i32 {
    if (index >> (n - 1 - a)) & 1 == 0 {
        1
    } else {
        -1
    }
}

/// `S_i = Σ_a ½σ_i^{(a)}`, entries exact multiples of ½.
pub fn total_spin_operators(n: usize) -> Result<[DMatrix<C64>; 3]> {
    total_spin_operators_with_cap(n, state_cap())
}

pub fn total_spin_operators_with_cap(n: usize, cap: usize) -> Result<[DMatrix<C64>; 3]> {
    check_spin_count(n, cap)?;
    let dim = 1usize << n;
    let mut s1 = DMatrix::zeros(dim, dim);
    let mut s2 = DMatrix::zeros(dim, dim);
    let mut s3 = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        for a in 0..n {
            let bit = 1usize << (n - 1 - a);
            let flipped = i ^ bit;
            let up = i & bit == 0;
            s1[(flipped, i)] += C64::new(0.5, 0.0);
            s2[(flipped, i)] += C64::new(0.0, if up { 0.5 } else { -0.5 });
            s3[(i, i)] += C64::new(if up { 0.5 } else { -0.5 }, 0.0);
        }
    }
    Ok([s1, s2, s3])
}

/// `S² = S₁² + S₂² + S₃²`.
pub fn total_spin_squared(s: &[DMatrix<C64>; 3]) -> DMatrix<C64> {
    s.iter().map(|x| x * x).fold(DMatrix::zeros(s[0].nrows(), s[0].ncols()), |acc, x| acc + x)
}

/// Label of one column of the reduction matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ColumnLabel {
    /// Intermediate spins `k₂ … k_{N-1}` of the left-combed tree.
    pub path: Vec<HalfInt>,
    pub s: HalfInt,
    pub sigma: HalfInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSpec {
    pub s: HalfInt,
    pub multiplicity: usize,
    pub dimension: usize,
}

/// One irreducible block of the reduced matrix: columns `start..start+dim`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockRange {
    pub path: Vec<HalfInt>,
    pub s: HalfInt,
    pub start: usize,
    pub dimension: usize,
}

#[derive(Clone, Debug)]
pub struct ProductDecomposition {
    pub n: usize,
    pub labels: Vec<ColumnLabel>,
    /// Sparse exact columns: `(row, value)` pairs.
    pub columns: Vec<Vec<(usize, ExactReal)>>,
    pub blocks: Vec<BlockSpec>,
    pub ranges: Vec<BlockRange>,
}

struct PartialState {
    path: Vec<HalfInt>,
    mu: HalfInt,
    amps: Vec<(usize, ExactReal)>,
}

/// `binom(N, N/2 - s) - binom(N, N/2 - s - 1)`.
pub fn spin_multiplicity(n: usize, s: HalfInt) -> usize {
    let k = n as i32 - s.twice();
    if k < 0 || k % 2 != 0 {
        return 0;
    }
    let k = (k / 2) as usize;
    let b = |n: usize, k: usize| -> usize {
        if k > n {
            return 0;
        }
        (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
    };
    b(n, k) - if k == 0 { 0 } else { b(n, k - 1) }
}

pub fn decompose_product(n: usize) -> Result<ProductDecomposition> {
    decompose_product_with_cap(n, state_cap())
}

pub fn decompose_product_with_cap(n: usize, cap: usize) -> Result<ProductDecomposition> {
    check_spin_count(n, cap)?;
    let half = HalfInt::HALF;
    let mut cg_cache: HashMap<(i32, i32, i32, i32), ExactReal> = HashMap::new();
    let mut cg = |k: HalfInt, mu: HalfInt, m: HalfInt, k2: HalfInt| -> Result<ExactReal> {
        let key = (k.twice(), mu.twice(), m.twice(), k2.twice());
        if let Some(v) = cg_cache.get(&key) {
            return Ok(v.clone());
        }
        let v = clebsch_gordan(k, half, k2, mu, m, mu + m)?;
        cg_cache.insert(key, v.clone());
        Ok(v)
    };

    let mut states: Vec<PartialState> = [half, -half]
        .into_iter()
        .enumerate()
        .map(|(idx, mu)| PartialState { path: vec![half], mu, amps: vec![(idx, ExactReal::one())] })
        .collect();

    for _ in 1..n {
        let mut by_key: HashMap<(Vec<HalfInt>, HalfInt), usize> = HashMap::new();
        for (i, st) in states.iter().enumerate() {
            by_key.insert((st.path.clone(), st.mu), i);
        }
        let mut prefixes: Vec<Vec<HalfInt>> = states.iter().map(|s| s.path.clone()).collect();
        prefixes.sort();
        prefixes.dedup();
        let mut next = Vec::new();
        for prefix in prefixes {
            let k = *prefix.last().expect("nonempty path");
            for k2 in [k + half, k - half] {
                if k2.twice() < 0 {
                    continue;
                }
                let mut path = prefix.clone();
                path.push(k2);
                for mu2 in k2.projections() {
                    let mut amps = Vec::new();
                    for (bit, m) in [(0usize, half), (1usize, -half)] {
                        let mu = mu2 - m;
                        if mu.twice().abs() > k.twice() {
                            continue;
                        }
                        let c = cg(k, mu, m, k2)?;
                        if c.is_zero() {
                            continue;
                        }
                        let src = &states[by_key[&(prefix.clone(), mu)]];
                        amps.extend(src.amps.iter().map(|(idx, a)| (idx * 2 + bit, a * &c)));
                    }
                    amps.sort_by_key(|(idx, _)| *idx);
                    next.push(PartialState { path: path.clone(), mu: mu2, amps });
                }
            }
        }
        states = next;
    }

    let mut cols: Vec<(ColumnLabel, Vec<(usize, ExactReal)>)> = states
        .into_iter()
        .map(|st| {
            let s = *st.path.last().expect("nonempty path");
            let inner = if st.path.len() > 2 { st.path[1..st.path.len() - 1].to_vec() } else { Vec::new() };
            (ColumnLabel { path: inner, s, sigma: st.mu }, st.amps)
        })
        .collect();
    cols.sort_by(|(a, _), (b, _)| {
        a.s.cmp(&b.s).then_with(|| a.path.cmp(&b.path)).then_with(|| b.sigma.cmp(&a.sigma))
    });

    let mut ranges: Vec<BlockRange> = Vec::new();
    for (i, (label, _)) in cols.iter().enumerate() {
        match ranges.last_mut() {
            Some(r) if r.path == label.path && r.s == label.s => r.dimension += 1,
            _ => ranges.push(BlockRange { path: label.path.clone(), s: label.s, start: i, dimension: 1 }),
        }
    }
    let mut blocks: Vec<BlockSpec> = Vec::new();
    for r in &ranges {
        match blocks.last_mut() {
            Some(b) if b.s == r.s => b.multiplicity += 1,
            _ => blocks.push(BlockSpec { s: r.s, multiplicity: 1, dimension: r.dimension }),
        }
    }
    let (labels, columns) = cols.into_iter().unzip();
    Ok(ProductDecomposition { n, labels, columns, blocks, ranges })
}

impl ProductDecomposition {
    pub fn dimension(&self) -> usize {
        1 << self.n
    }

    /// The orthogonal matrix `C` in floating point.
    pub fn matrix(&self) -> DMatrix<f64> {
        let d = self.dimension();
        let mut c = DMatrix::zeros(d, d);
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                c[(*i, j)] = v.to_f64();
            }
        }
        c
    }

    pub fn complex_matrix(&self) -> DMatrix<C64> {
        self.matrix().map(|x| C64::new(x, 0.0))
    }

    /// Exact `(CᵀC)_{ij}`.
    pub fn exact_gram(&self, i: usize, j: usize) -> RadicalSum {
        let (a, b) = (&self.columns[i], &self.columns[j]);
        let mut sum = RadicalSum::new();
        let (mut p, mut q) = (0, 0);
        while p < a.len() && q < b.len() {
            match a[p].0.cmp(&b[q].0) {
                std::cmp::Ordering::Less => p += 1,
                std::cmp::Ordering::Greater => q += 1,
                std::cmp::Ordering::Equal => {
                    sum.push(&(&a[p].1 * &b[q].1));
                    p += 1;
                    q += 1;
                }
            }
        }
        sum
    }

    /// Whether `CᵀC = 1` holds exactly.
    pub fn is_exactly_orthogonal(&self) -> bool {
        let d = self.dimension();
        (0..d).all(|i| {
            (i..d).all(|j| {
                let mut g = self.exact_gram(i, j);
                if i == j {
                    g.add_term(BigRational::from_integer(BigInt::from(1)), BigRational::from_integer(BigInt::from(-1)));
                }
                g.is_zero()
            })
        })
    }

    /// Highest block dimension, `N + 1`.
    pub fn top_dimension(&self) -> usize {
        self.blocks.last().map_or(0, |b| b.dimension)
    }
}
