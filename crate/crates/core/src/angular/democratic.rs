//! Democratic coupling of three spin-½: joint eigenbasis of
//! `K = (A⃗ × B⃗)·C⃗`, `S²` and `S₃`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::coeffs::HalfInt;
use super::spin::{total_spin_operators_with_cap, total_spin_squared};
use crate::minkowski::levi_civita3;
use crate::C64;

const DIM: usize = 8;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DemocraticState {
    pub k: f64,
    pub s: HalfInt,
    pub sigma: HalfInt,
    pub vector: Vec<C64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DemocraticBasis {
    /// Ordered by `s`, then `k`, then `σ` descending.
    pub states: Vec<DemocraticState>,
    /// The nonzero `|k|` carried by the two doublets.
    pub kappa: f64,
}

fn pauli_half(i: usize) -> DMatrix<C64> {
    let (z, o, im) = (C64::new(0.0, 0.0), C64::new(0.5, 0.0), C64::new(0.0, 0.5));
    match i {
        0 => DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        1 => DMatrix::from_row_slice(2, 2, &[z, -im, im, z]),
        _ => DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
    }
}

/// `½σ_i` acting on spin `a` of three.
pub fn single_spin(a: usize, i: usize) -> DMatrix<C64> {
    let id = DMatrix::<C64>::identity(2, 2);
    let factors: Vec<DMatrix<C64>> = (0..3).map(|b| if b == a { pauli_half(i) } else { id.clone() }).collect();
    factors[0].kronecker(&factors[1]).kronecker(&factors[2])
}

/// `K = ε_{ijk} A_i B_j C_k`.
pub fn k_operator() -> DMatrix<C64> {
    let mut k = DMatrix::zeros(DIM, DIM);
    for i in 0..3 {
        for j in 0..3 {
            for l in 0..3 {
                let e = levi_civita3(i, j, l);
                if e != 0.0 {
                    k += single_spin(0, i) * single_spin(1, j) * single_spin(2, l) * C64::new(e, 0.0);
                }
            }
        }
    }
    k
}

/// Operator sending spin `a` to slot `perm[a]`.
pub fn permutation_operator(perm: [usize; 3]) -> DMatrix<C64> {
    let mut p = DMatrix::zeros(DIM, DIM);
    for i in 0..DIM {
        let bits: Vec<usize> = (0..3).map(|a| (i >> (2 - a)) & 1).collect();
        let mut j = 0;
        for a in 0..3 {
            j |= bits[a] << (2 - perm[a]);
        }
        p[(j, i)] = C64::new(1.0, 0.0);
    }
    p
}

fn expect(op: &DMatrix<C64>, v: &DVector<C64>) -> f64 {
    v.dotc(&(op * v)).re
}

pub fn democratic_coupling() -> DemocraticBasis {
    let s = total_spin_operators_with_cap(3, DIM).expect("three spins fit the cap");
    let s2 = total_spin_squared(&s);
    let k = k_operator();
    // generic weights separate every joint eigenvalue
    let combo = &k + &s2 * C64::new(0.7, 0.0) + &s[2] * C64::new(0.31, 0.0);
    let eig = combo.symmetric_eigen();
    let mut states: Vec<DemocraticState> = (0..DIM)
        .map(|c| {
            let mut v: DVector<C64> = eig.eigenvectors.column(c).into_owned();
            if let Some(pivot) = v.iter().find(|x| x.norm() > 1e-9).copied() {
                let phase = pivot.conj() / pivot.norm();
                v *= phase;
            }
            let ssq = expect(&s2, &v);
            let twice_s = ((1.0 + 4.0 * ssq).sqrt() - 1.0).round() as i32;
            let sigma = (2.0 * expect(&s[2], &v)).round() as i32;
            DemocraticState {
                k: expect(&k, &v),
                s: HalfInt::from_twice(twice_s),
                sigma: HalfInt::from_twice(sigma),
                vector: v.iter().copied().collect(),
            }
        })
        .collect();
    states.sort_by(|a, b| {
        a.s.cmp(&b.s)
            .then(a.k.total_cmp(&b.k))
            .then(b.sigma.cmp(&a.sigma))
    });
    let kappa = states.iter().map(|s| s.k.abs()).fold(0.0, f64::max);
    DemocraticBasis { states, kappa }
}

impl DemocraticBasis {
    pub fn vector(&self, i: usize) -> DVector<C64> {
        DVector::from_column_slice(&self.states[i].vector)
    }

    /// Characters of the six permutations on the span of the two `s = ½`
    /// doublet states with projection `sigma`, in the order
    /// identity, (12), (13), (23), (123), (132).
    pub fn doublet_characters(&self, sigma: HalfInt) -> [f64; 6] {
        let idx: Vec<usize> = (0..self.states.len())
            .filter(|&i| self.states[i].s == HalfInt::HALF && self.states[i].sigma == sigma)
            .collect();
        let perms = [[0, 1, 2], [1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]];
        perms.map(|p| {
            let op = permutation_operator(p);
            idx.iter().map(|&i| self.vector(i).dotc(&(&op * self.vector(i))).re).sum()
        })
    }
}

/// `Σ|χ|²/|G|`, equal to 1 exactly for an irreducible representation.
pub fn irreducibility_norm(chars: &[f64; 6]) -> f64 {
    chars.iter().map(|c| c * c).sum::<f64>() / 6.0
}
