//! Binary coupling trees: counting, enumeration and recoupling amplitudes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::coeffs::{clebsch_gordan, triangle, HalfInt};
use super::exact::{ExactReal, RadicalSum};
use crate::error::{OrbitError, Result};

/// `(a_N, c_N, d_N)`: bracketings, labeled ordered trees, and labeled
/// trees with unordered children.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CouplingCounts {
    pub a: u128,
    pub c: u128,
    pub d: u128,
}

pub fn coupling_counts(n: usize) -> Result<CouplingCounts> {
    if n < 2 {
        return Err(OrbitError::InvalidArgument("coupling needs at least two spins".into()));
    }
    let overflow = || OrbitError::Overflow("coupling_counts");
    let n128 = n as u128;
    // a_N = binom(2N-2, N-1) / N
    let mut binom: u128 = 1;
    for i in 0..(n128 - 1) {
        binom = binom.checked_mul(2 * n128 - 2 - i).ok_or_else(overflow)? / (i + 1);
    }
    let a = binom / n128;
    let mut fact: u128 = 1;
    for i in 2..=n128 {
        fact = fact.checked_mul(i).ok_or_else(overflow)?;
    }
    let c = fact.checked_mul(a).ok_or_else(overflow)?;
    let d = c >> (n - 1);
    Ok(CouplingCounts { a, c, d })
}

/// `(2N-3)!!`.
pub fn double_factorial_count(n: usize) -> u128 {
    (1..=(2 * n as u128).saturating_sub(3)).step_by(2).product()
}

/// Tree shape with 1-based leaf labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TreeShape {
    Leaf(usize),
    Node(Box<TreeShape>, Box<TreeShape>),
}

impl TreeShape {
    pub fn node(l: TreeShape, r: TreeShape) -> Self {
        TreeShape::Node(Box::new(l), Box::new(r))
    }

    pub fn leaves(&self) -> Vec<usize> {
        match self {
            TreeShape::Leaf(i) => vec![*i],
            TreeShape::Node(l, r) => {
                let mut v = l.leaves();
                v.extend(r.leaves());
                v
            }
        }
    }

    fn min_leaf(&self) -> usize {
        self.leaves().into_iter().min().unwrap_or(0)
    }

    /// Children ordered by smallest leaf, for comparing trees up to swaps.
    pub fn canonical(&self) -> TreeShape {
        match self {
            TreeShape::Leaf(i) => TreeShape::Leaf(*i),
            TreeShape::Node(l, r) => {
                let (l, r) = (l.canonical(), r.canonical());
                if l.min_leaf() <= r.min_leaf() {
                    TreeShape::node(l, r)
                } else {
                    TreeShape::node(r, l)
                }
            }
        }
    }

    fn relabel(&self, labels: &[usize]) -> TreeShape {
        match self {
            TreeShape::Leaf(i) => TreeShape::Leaf(labels[*i - 1]),
            TreeShape::Node(l, r) => TreeShape::node(l.relabel(labels), r.relabel(labels)),
        }
    }

    /// Every tree obtained by attaching `leaf` on one edge (or above the root).
    fn insertions(&self, leaf: usize) -> Vec<TreeShape> {
        let mut out = vec![TreeShape::node(self.clone(), TreeShape::Leaf(leaf))];
        if let TreeShape::Node(l, r) = self {
            for t in l.insertions(leaf) {
                out.push(TreeShape::node(t, (**r).clone()));
            }
            for t in r.insertions(leaf) {
                out.push(TreeShape::node((**l).clone(), t));
            }
        }
        out
    }
}

impl fmt::Display for TreeShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeShape::Leaf(i) => write!(f, "{i}"),
            TreeShape::Node(l, r) => write!(f, "({l} {r})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TreeKind {
    /// Bracketings of `1 … N` in order; `a_N` of them.
    Shapes,
    /// Bracketings of every leaf permutation; `c_N`.
    Labeled,
    /// Labeled trees up to swapping children; `d_N`.
    Unordered,
}

impl TreeKind {
    pub fn max_leaves(self) -> usize {
        match self {
            TreeKind::Shapes => 12,
            TreeKind::Labeled => 7,
            TreeKind::Unordered => 9,
        }
    }
}

fn shapes(lo: usize, hi: usize) -> Vec<TreeShape> {
    if lo == hi {
        return vec![TreeShape::Leaf(lo)];
    }
    let mut out = Vec::new();
    for split in (lo..hi).rev() {
        for l in shapes(lo, split) {
            for r in shapes(split + 1, hi) {
                out.push(TreeShape::node(l.clone(), r));
            }
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (1..=n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).expect("successor exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

/// Deterministically ordered enumeration of coupling trees on `n` leaves.
pub fn enumerate_trees(n: usize, kind: TreeKind) -> Result<Vec<TreeShape>> {
    if n == 0 {
        return Err(OrbitError::InvalidArgument("need at least one leaf".into()));
    }
    if n > kind.max_leaves() {
        return Err(OrbitError::CapExceeded { n_spins: n, cap: kind.max_leaves() });
    }
    Ok(match kind {
        TreeKind::Shapes => shapes(1, n),
        TreeKind::Labeled => {
            let base = shapes(1, n);
            permutations(n)
                .iter()
                .flat_map(|p| base.iter().map(move |t| t.relabel(p)))
                .collect()
        }
        TreeKind::Unordered => {
            let mut trees = vec![TreeShape::Leaf(1)];
            for leaf in 2..=n {
                trees = trees.iter().flat_map(|t| t.insertions(leaf)).map(|t| t.canonical()).collect();
            }
            trees.sort();
            trees
        }
    })
}

/// Number of distinct trees after identifying child swaps.
pub fn count_unordered(trees: &[TreeShape]) -> usize {
    trees.iter().map(TreeShape::canonical).collect::<BTreeSet<_>>().len()
}

/// A coupling tree with spins on every node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CouplingNode {
    /// 0-based particle index.
    Leaf(usize),
    Node { left: Box<CouplingNode>, right: Box<CouplingNode>, spin: HalfInt },
}

impl CouplingNode {
    pub fn leaf(i: usize) -> Self {
        CouplingNode::Leaf(i)
    }

    pub fn couple(left: CouplingNode, right: CouplingNode, spin: HalfInt) -> Self {
        CouplingNode::Node { left: Box::new(left), right: Box::new(right), spin }
    }

    fn spin(&self, leaves: &[HalfInt]) -> HalfInt {
        match self {
            CouplingNode::Leaf(i) => leaves[*i],
            CouplingNode::Node { spin, .. } => *spin,
        }
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            CouplingNode::Leaf(i) => out.push(*i),
            CouplingNode::Node { left, right, .. } => {
                left.collect_leaves(out);
                right.collect_leaves(out);
            }
        }
    }

    fn collect_internal(&self, out: &mut Vec<HalfInt>) {
        if let CouplingNode::Node { left, right, spin } = self {
            left.collect_internal(out);
            right.collect_internal(out);
            out.push(*spin);
        }
    }

    fn check(&self, leaves: &[HalfInt]) -> Result<()> {
        if let CouplingNode::Node { left, right, spin } = self {
            left.check(leaves)?;
            right.check(leaves)?;
            let (a, b) = (left.spin(leaves), right.spin(leaves));
            if !triangle(a, b, *spin) {
                return Err(OrbitError::InvalidQuantumNumbers(format!("({a}, {b}) cannot couple to {spin}")));
            }
        }
        Ok(())
    }

    /// Product-state expansion at projection `m`, keyed by per-particle `2m`.
    fn expand(&self, leaves: &[HalfInt], m: HalfInt, out: &mut Vec<(Vec<i32>, ExactReal)>, acc: (Vec<i32>, ExactReal)) -> Result<()> {
        match self {
            CouplingNode::Leaf(i) => {
                let (mut key, amp) = acc;
                key[*i] = m.twice();
                out.push((key, amp));
            }
            CouplingNode::Node { left, right, spin } => {
                let (ja, jb) = (left.spin(leaves), right.spin(leaves));
                for ma in ja.projections() {
                    let mb = m - ma;
                    if mb.twice().abs() > jb.twice() {
                        continue;
                    }
                    let c = clebsch_gordan(ja, jb, *spin, ma, mb, m)?;
                    if c.is_zero() {
                        continue;
                    }
                    let mut partial = Vec::new();
                    left.expand(leaves, ma, &mut partial, (acc.0.clone(), &acc.1 * &c))?;
                    for p in partial {
                        right.expand(leaves, mb, out, p)?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Spins `j_a` on the leaves, intermediate spins on internal nodes, total on the root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CouplingTree {
    leaves: Vec<HalfInt>,
    root: CouplingNode,
}

impl CouplingTree {
    pub fn new(leaves: Vec<HalfInt>, root: CouplingNode) -> Result<Self> {
        let mut seen = Vec::new();
        root.collect_leaves(&mut seen);
        seen.sort_unstable();
        if seen != (0..leaves.len()).collect::<Vec<_>>() {
            return Err(OrbitError::TreeMismatch(format!("leaf indices {seen:?} do not cover 0..{}", leaves.len())));
        }
        if leaves.iter().any(|j| j.twice() < 0) {
            return Err(OrbitError::InvalidQuantumNumbers("negative leaf spin".into()));
        }
        root.check(&leaves)?;
        Ok(Self { leaves, root })
    }

    /// `((…((1 2)k₂ 3)k₃ …) N)j`.
    pub fn left_combed(leaves: Vec<HalfInt>, intermediates: &[HalfInt], total: HalfInt) -> Result<Self> {
        let n = leaves.len();
        if n < 2 || intermediates.len() != n - 2 {
            return Err(OrbitError::TreeMismatch(format!("{n} leaves need {} intermediate spins", n.saturating_sub(2))));
        }
        let mut node = CouplingNode::leaf(0);
        for i in 1..n {
            let spin = if i == n - 1 { total } else { intermediates[i - 1] };
            node = CouplingNode::couple(node, CouplingNode::leaf(i), spin);
        }
        Self::new(leaves, node)
    }

    pub fn root(&self) -> &CouplingNode {
        &self.root
    }

    pub fn leaf_spins(&self) -> &[HalfInt] {
        &self.leaves
    }

    pub fn total(&self) -> HalfInt {
        self.root.spin(&self.leaves)
    }

    /// Spins of the `N - 2` internal nodes below the root, in post-order.
    pub fn intermediate_labels(&self) -> Vec<HalfInt> {
        let mut v = Vec::new();
        self.root.collect_internal(&mut v);
        v.pop();
        v
    }

    /// Exact expansion into product states `|m₁ … m_N⟩`.
    pub fn expand(&self, sigma: HalfInt) -> Result<BTreeMap<Vec<i32>, ExactReal>> {
        let j = self.total();
        if sigma.twice().abs() > j.twice() || (j - sigma).twice() % 2 != 0 {
            return Err(OrbitError::InvalidQuantumNumbers(format!("projection {sigma} incompatible with total {j}")));
        }
        let mut out = Vec::new();
        let seed = (vec![0; self.leaves.len()], ExactReal::one());
        self.root.expand(&self.leaves, sigma, &mut out, seed)?;
        Ok(out.into_iter().collect())
    }
}

impl fmt::Display for CouplingNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CouplingNode::Leaf(i) => write!(f, "{}", i + 1),
            CouplingNode::Node { left, right, spin } => write!(f, "({left} {right})_{spin}"),
        }
    }
}

impl fmt::Display for CouplingTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.root)
    }
}

/// `⟨A; j σ | B; j σ⟩` as an unreduced radical sum.
pub fn recoupling_sum(a: &CouplingTree, b: &CouplingTree, sigma: HalfInt) -> Result<RadicalSum> {
    if a.leaves != b.leaves {
        return Err(OrbitError::TreeMismatch("trees couple different leaf spins".into()));
    }
    if a.total() != b.total() {
        return Err(OrbitError::TreeMismatch(format!("totals differ: {} vs {}", a.total(), b.total())));
    }
    let ea = a.expand(sigma)?;
    let eb = b.expand(sigma)?;
    Ok(ea.iter().filter_map(|(k, x)| eb.get(k).map(|y| x * y)).collect())
}

/// `⟨A; j σ | B; j σ⟩`, exact.
pub fn recoupling_amplitude(a: &CouplingTree, b: &CouplingTree, sigma: HalfInt) -> Result<ExactReal> {
    recoupling_sum(a, b, sigma)?.to_exact()
}
