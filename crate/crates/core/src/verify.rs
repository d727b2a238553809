//! The verification battery: every module's invariants evaluated over seeded
//! random trials, collected into a JSON-serialisable report.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix4, Vector2};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::angular::*;
use crate::dirac::{self, DiracScalar, GammaSet, QI};
use crate::error::{OrbitError, Result};
use crate::fields;
use crate::little_group::{orbit_act, random_orbit_point, wigner_rotation};
use crate::minkowski::{random_lorentz_with, FourVector};
use crate::poincare;
use crate::sl2c::{covering_map, lift};
use crate::tensors::{product_rep, reduce_rep, spin_character};
use crate::{OrbitPoint, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    All,
    LittleGroup,
    Angular,
    Dirac,
    Poincare,
    Fields,
}

impl Suite {
    pub const MODULES: [Suite; 5] = [Suite::LittleGroup, Suite::Angular, Suite::Dirac, Suite::Poincare, Suite::Fields];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::LittleGroup => "little-group",
            Suite::Angular => "angular",
            Suite::Dirac => "dirac",
            Suite::Poincare => "poincare",
            Suite::Fields => "fields",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = OrbitError;

    fn from_str(s: &str) -> Result<Self> {
        [Suite::All].iter().chain(&Suite::MODULES).find(|x| x.name() == s).copied().ok_or_else(|| OrbitError::InvalidArgument(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VerifyOptions {
    pub suite: Suite,
    pub seed: u64,
    pub trials: usize,
    /// Replaces every floating-point tolerance when set.
    pub tol: Option<f64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { suite: Suite::All, seed: 7, trials: 200, tol: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub suite: Suite,
    pub name: String,
    /// Exact checks report the number of failing cases as their residual.
    pub exact: bool,
    pub cases: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub options: VerifyOptions,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

struct Battery {
    opts: VerifyOptions,
    suite: Suite,
    checks: Vec<CheckResult>,
}

impl Battery {
    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.opts.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ salt)
    }

    fn numeric(&mut self, name: &str, cases: usize, residual: f64, default_tol: f64) {
        let tolerance = self.opts.tol.unwrap_or(default_tol);
        self.checks.push(CheckResult {
            suite: self.suite,
            name: name.into(),
            exact: false,
            cases,
            max_residual: residual,
            tolerance,
            passed: residual.is_finite() && residual <= tolerance,
        });
    }

    fn exact(&mut self, name: &str, count: IdentityCount) {
        self.checks.push(CheckResult {
            suite: self.suite,
            name: name.into(),
            exact: true,
            cases: count.cases,
            max_residual: count.failures as f64,
            tolerance: 0.0,
            passed: count.failures == 0 && count.cases > 0,
        });
    }

    fn flag(&mut self, name: &str, ok: bool) {
        self.exact(name, IdentityCount { cases: 1, failures: usize::from(!ok) });
    }
}

fn max_of(it: impl ParallelIterator<Item = f64>) -> f64 {
    it.reduce(|| 0.0, f64::max)
}

/// Number of cases examined and how many violated an exact identity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct IdentityCount {
    pub cases: usize,
    pub failures: usize,
}

impl std::ops::Add for IdentityCount {
    type Output = IdentityCount;
    fn add(self, o: IdentityCount) -> IdentityCount {
        IdentityCount { cases: self.cases + o.cases, failures: self.failures + o.failures }
    }
}

impl std::iter::Sum for IdentityCount {
    fn sum<I: Iterator<Item = IdentityCount>>(iter: I) -> Self {
        iter.fold(IdentityCount::default(), |a, b| a + b)
    }
}

fn spins(max_twice: i32) -> impl Iterator<Item = HalfInt> + Clone {
    (0..=max_twice).map(HalfInt::from_twice)
}

fn one() -> num_rational::BigRational {
    num_rational::BigRational::from_integer(1.into())
}

/// Column and row orthogonality of the CG matrix for `j1, j2 ≤ max`.
pub fn cg_orthogonality(max_twice: i32) -> IdentityCount {
    let pairs: Vec<(HalfInt, HalfInt)> = spins(max_twice).flat_map(|a| spins(max_twice).map(move |b| (a, b))).collect();
    pairs
        .par_iter()
        .map(|&(j1, j2)| {
            let mut count = IdentityCount::default();
            let lo = (j1.twice() - j2.twice()).abs();
            let totals: Vec<HalfInt> = (lo..=j1.twice() + j2.twice()).step_by(2).map(HalfInt::from_twice).collect();
            let cg = |j, m1, m2, m| clebsch_gordan(j1, j2, j, m1, m2, m).expect("valid");
            for &j in &totals {
                for m in j.projections() {
                    for &jp in &totals {
                        for mp in jp.projections() {
                            let mut sum = RadicalSum::new();
                            for m1 in j1.projections() {
                                for m2 in j2.projections() {
                                    sum.push(&(&cg(j, m1, m2, m) * &cg(jp, m1, m2, mp)));
                                }
                            }
                            if j == jp && m == mp {
                                sum.add_term(one(), -one());
                            }
                            count.cases += 1;
                            count.failures += usize::from(!sum.is_zero());
                        }
                    }
                }
            }
            for m1 in j1.projections() {
                for m2 in j2.projections() {
                    for m1p in j1.projections() {
                        for m2p in j2.projections() {
                            let mut sum = RadicalSum::new();
                            for &j in &totals {
                                for m in j.projections() {
                                    sum.push(&(&cg(j, m1, m2, m) * &cg(j, m1p, m2p, m)));
                                }
                            }
                            if m1 == m1p && m2 == m2p {
                                sum.add_term(one(), -one());
                            }
                            count.cases += 1;
                            count.failures += usize::from(!sum.is_zero());
                        }
                    }
                }
            }
            count
        })
        .sum()
}

/// `Σ_e (2e+1)(2f+1) W(abcd; ef) W(abcd; ef') = δ_{ff'}` for `a, b, c, d ≤ max`.
pub fn racah_orthogonality(max_twice: i32) -> IdentityCount {
    let side = (max_twice + 1) as usize;
    let quads: Vec<[HalfInt; 4]> = (0..side.pow(4))
        .map(|k| std::array::from_fn(|i| HalfInt::from_twice((k / side.pow(i as u32) % side) as i32)))
        .collect();
    quads
        .par_iter()
        .map(|&[a, b, c, d]| {
            let mut count = IdentityCount::default();
            for f in spins(2 * max_twice) {
                for fp in spins(2 * max_twice) {
                    let mut sum = RadicalSum::new();
                    let mut any = false;
                    for e in spins(2 * max_twice) {
                        let x = racah_w(a, b, c, d, e, f).expect("valid");
                        let y = racah_w(a, b, c, d, e, fp).expect("valid");
                        let weight = ExactReal::from_integer(i64::from(e.multiplicity() * f.multiplicity()));
                        let term = &(&x * &y) * &weight;
                        any |= !term.is_zero();
                        sum.push(&term);
                    }
                    if f == fp && triangle(a, c, f) && triangle(b, d, f) && any {
                        sum.add_term(one(), -one());
                    }
                    count.cases += 1;
                    count.failures += usize::from(!sum.is_zero());
                }
            }
            count
        })
        .sum()
}

/// The Biedenharn-Elliott sum rule for all arguments `≤ max`.
pub fn biedenharn_elliott(max_twice: i32) -> IdentityCount {
    let side = (max_twice + 1) as usize;
    let cache: std::collections::HashMap<[i32; 6], ExactReal> = (0..(2 * side).pow(6))
        .into_par_iter()
        .filter_map(|k| {
            let j: [i32; 6] = std::array::from_fn(|i| (k / (2 * side).pow(i as u32) % (2 * side)) as i32);
            let v = six_j(
                HalfInt::from_twice(j[0]),
                HalfInt::from_twice(j[1]),
                HalfInt::from_twice(j[2]),
                HalfInt::from_twice(j[3]),
                HalfInt::from_twice(j[4]),
                HalfInt::from_twice(j[5]),
            )
            .ok()?;
            (!v.is_zero()).then_some((j, v))
        })
        .collect();
    let zero = ExactReal::zero();
    let sj = |j: [HalfInt; 6]| cache.get(&j.map(HalfInt::twice)).unwrap_or(&zero);
    let third = |x: HalfInt, y: HalfInt, z: HalfInt, w: HalfInt| -> Vec<HalfInt> { spins(max_twice).filter(|&p| triangle(x, y, p) && triangle(z, w, p)).collect() };
    let six: Vec<[HalfInt; 6]> = (0..side.pow(6)).map(|k| std::array::from_fn(|i| HalfInt::from_twice((k / side.pow(i as u32) % side) as i32))).collect();
    six.par_iter()
        .map(|&[a, b, c, d, e, f]| {
            let mut count = IdentityCount::default();
            for p in third(a, d, b, c) {
                for q in third(c, f, d, e) {
                    for r in third(a, e, b, f) {
                        let s = (a + b + c + d + e + f + p + q + r).twice();
                        let mut lhs = RadicalSum::new();
                        for x in spins(2 * max_twice) {
                            let t = &(sj([a, b, x, c, d, p]) * sj([c, d, x, e, f, q])) * sj([e, f, x, b, a, r]);
                            if t.is_zero() {
                                continue;
                            }
                            let t = (&t * &ExactReal::from_integer(i64::from(x.multiplicity()))).with_phase(i64::from((s + x.twice()) / 2));
                            lhs.push(&t);
                        }
                        lhs.push(&-(sj([p, q, r, e, a, d]) * sj([p, q, r, f, b, c])));
                        count.cases += 1;
                        count.failures += usize::from(!lhs.is_zero());
                    }
                }
            }
            count
        })
        .sum()
}

fn three_tree(leaves: [HalfInt; 3], first: (usize, usize), third: usize, k: HalfInt, s: HalfInt) -> Option<CouplingTree> {
    let root = CouplingNode::couple(CouplingNode::couple(CouplingNode::leaf(first.0), CouplingNode::leaf(first.1), k), CouplingNode::leaf(third), s);
    CouplingTree::new(leaves.to_vec(), root).ok()
}

/// Three-spin recoupling amplitudes against the Racah form
/// `(−1)^{a+e−s}√((2d+1)(2e+1)) W(a b s c; d e)` and its cyclic image, for
/// leaves `≤ max`.
pub fn three_spin_recoupling(max_twice: i32) -> IdentityCount {
    let mut jobs = Vec::new();
    for a in spins(max_twice).skip(1) {
        for b in spins(max_twice).skip(1) {
            for c in spins(max_twice).skip(1) {
                jobs.push([a, b, c]);
            }
        }
    }
    jobs.par_iter()
        .map(|&leaves| {
            let [a, b, c] = leaves;
            let mut count = IdentityCount::default();
            let top = 3 * max_twice;
            for s in spins(top) {
                for d in spins(2 * max_twice) {
                    for e in spins(2 * max_twice) {
                        let norm = |x: HalfInt, y: HalfInt| ExactReal::sqrt_of(num_rational::BigRational::from_integer(i64::from(x.multiplicity() * y.multiplicity()).into())).expect("positive");
                        if let (Some(x), Some(y)) = (three_tree(leaves, (0, 1), 2, d, s), three_tree(leaves, (1, 2), 0, e, s)) {
                            let amp = recoupling_amplitude(&x, &y, s).expect("compatible");
                            let w = (&racah_w(a, b, s, c, d, e).expect("valid") * &norm(d, e)).with_phase(i64::from((a + e - s).twice() / 2));
                            count.cases += 1;
                            count.failures += usize::from(amp != w);
                        }
                        if let (Some(y), Some(z)) = (three_tree(leaves, (1, 2), 0, d, s), three_tree(leaves, (2, 0), 1, e, s)) {
                            let amp = recoupling_amplitude(&y, &z, s).expect("compatible");
                            let w = (&racah_w(b, c, s, a, d, e).expect("valid") * &norm(d, e)).with_phase(i64::from((b + e - s).twice() / 2));
                            count.cases += 1;
                            count.failures += usize::from(amp != w);
                        }
                    }
                }
            }
            count
        })
        .sum()
}

/// `d_N` against explicit enumeration of unordered labelled trees.
pub fn tree_counts(max_n: usize) -> IdentityCount {
    (2..=max_n)
        .map(|n| {
            let c = coupling_counts(n).expect("small n");
            let shapes = enumerate_trees(n, TreeKind::Shapes).map(|t| t.len() as u128).ok();
            let unordered = enumerate_trees(n, TreeKind::Unordered).map(|t| t.len() as u128).ok();
            let ok = shapes == Some(c.a) && unordered == Some(c.d) && c.d == double_factorial_count(n);
            IdentityCount { cases: 1, failures: usize::from(!ok) }
        })
        .sum()
}

/// Block reduction `Cᵀ D^{⊗N} C` for one `(Λ, n)`: off-block Frobenius norm
/// and the worst character mismatch of the diagonal blocks.
pub fn block_reduction_residuals(lambda: &crate::LorentzMatrix, n: &OrbitPoint, n_spins: usize) -> Result<(f64, f64)> {
    let rep = product_rep(lambda, n, n_spins)?;
    let red = reduce_rep(&rep)?;
    let psi = rep.factor().spinor_angle();
    let chars = red.ranges.iter().enumerate().map(|(i, r)| (red.block_trace(i) - C64::new(spin_character(r.s, psi), 0.0)).norm()).fold(0.0, f64::max);
    Ok((red.off_block_residual(), chars))
}

fn little_group_suite(b: &mut Battery) {
    let trials = b.opts.trials;
    let mut rng = b.rng(1);
    let samples: Vec<_> = (0..trials).map(|_| (random_lorentz_with(&mut rng, 1.0), random_orbit_point(&mut rng, 2.0))).collect();
    let unit = max_of(samples.par_iter().map(|(l, n)| wigner_rotation(l, n).unitarity_residual()));
    let det = max_of(samples.par_iter().map(|(l, n)| wigner_rotation(l, n).det_residual()));
    b.numeric("wigner rotation unitarity", trials, unit, 1e-12);
    b.numeric("wigner rotation unit determinant", trials, det, 1e-12);
    let mut rng = b.rng(2);
    let triples: Vec<_> = (0..trials).map(|_| (random_lorentz_with(&mut rng, 0.8), random_lorentz_with(&mut rng, 0.8), random_orbit_point(&mut rng, 1.5))).collect();
    let cocycle = max_of(triples.par_iter().map(|(l1, l2, n)| {
        let whole = wigner_rotation(&l2.compose(l1), n).so3();
        let chain = wigner_rotation(l2, &orbit_act(l1, n)).so3() * wigner_rotation(l1, n).so3();
        (whole - chain).abs().max()
    }));
    b.numeric("cocycle at SO(3) level", trials, cocycle, 1e-10);
    let cover = max_of(samples.par_iter().map(|(l, _)| covering_map(&lift(l)).map(|m| m.max_abs_diff(l)).unwrap_or(f64::INFINITY)));
    b.numeric("lift covers the Lorentz matrix", trials, cover, 1e-10);
    let mut rng = b.rng(3);
    let red_trials = trials.min(100);
    let red_samples: Vec<_> = (0..red_trials).map(|_| (random_lorentz_with(&mut rng, 1.0), random_orbit_point(&mut rng, 1.5))).collect();
    let results: Vec<(f64, f64)> = red_samples
        .par_iter()
        .flat_map_iter(|(l, n)| (1..=6).map(move |k| block_reduction_residuals(l, n, k).unwrap_or((f64::INFINITY, f64::INFINITY))))
        .collect();
    b.numeric("block reduction N <= 6 off-block norm", results.len(), results.iter().map(|r| r.0).fold(0.0, f64::max), 1e-10);
    b.numeric("block traces equal characters", results.len(), results.iter().map(|r| r.1).fold(0.0, f64::max), 1e-9);
}

fn angular_suite(b: &mut Battery) {
    b.exact("clebsch-gordan orthogonality j <= 2", cg_orthogonality(4));
    b.exact("racah orthogonality j <= 2", racah_orthogonality(4));
    b.exact("biedenharn-elliott j <= 2", biedenharn_elliott(4));
    b.exact("three-spin recoupling racah form", three_spin_recoupling(3));
    let c3 = coupling_counts(3).map(|c| (c.a, c.c, c.d)).ok();
    b.flag("coupling counts N = 3 are (2, 12, 3)", c3 == Some((2, 12, 3)));
    b.exact("d_N matches tree enumeration N <= 8", tree_counts(8));
    let decomp: IdentityCount = (1..=6)
        .map(|n| {
            let ok = decompose_product(n).map(|d| d.is_exactly_orthogonal() && d.top_dimension() == n + 1).unwrap_or(false);
            IdentityCount { cases: 1, failures: usize::from(!ok) }
        })
        .sum();
    b.exact("exact orthogonal reduction with top block N+1, N <= 6", decomp);
    let two = decompose_product(2).map(|d| d.blocks.iter().map(|x| (x.s.twice(), x.multiplicity, x.dimension)).collect::<Vec<_>>()).ok();
    b.flag("two spins reduce to 1x1 + 3x3", two == Some(vec![(0, 1, 1), (2, 1, 3)]));
}

fn c4(v: &FourVector) -> [C64; 4] {
    v.0.map(|x| C64::new(x, 0.0))
}

fn random_rational_n(rng: &mut ChaCha8Rng) -> [QI; 4] {
    loop {
        let u = std::array::from_fn(|_| (rng.gen_range(-4..=4), 9));
        if let Some(n) = dirac::rational_orbit_point(u) {
            return n;
        }
    }
}

fn dirac_suite(b: &mut Battery) {
    let gq = GammaSet::<QI>::spinor_frame();
    let clifford = [GammaSet::<QI>::chiral(), gq.clone()].iter().flat_map(|g| g.clifford_defects()).map(|d| dirac::is_zero(&d)).collect::<Vec<_>>();
    b.exact("clifford relations", IdentityCount { cases: clifford.len(), failures: clifford.iter().filter(|ok| !**ok).count() });
    let mut rng = b.rng(4);
    let exact_trials = b.opts.trials.min(40);
    let mut count = IdentityCount::default();
    for _ in 0..exact_trials {
        let n = random_rational_n(&mut rng);
        let p: [QI; 4] = std::array::from_fn(|_| QI::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5)));
        let (dl, dt) = dirac::k_square_defects(&gq, &p, &n);
        let (kl, kt) = dirac::k_operators(&gq, &p, &n);
        let halves = dirac::k_operators_from_halves(&gq, &p, &n);
        let ok = dirac::is_zero(&dl) && dirac::is_zero(&dt) && halves == (kl, kt.clone()) && dirac::k_transverse_from_k(&gq, &p, &n) == kt;
        count = count + IdentityCount { cases: 1, failures: usize::from(!ok) };
    }
    b.exact("K_L^2 and K_T^2 identities on rational inputs", count);
    let mut count = IdentityCount::default();
    for _ in 0..3 {
        let n = random_rational_n(&mut rng);
        let alg = dirac::projected_algebra(&gq, &n);
        let defects = alg.defects(&gq);
        count = count + IdentityCount { cases: defects.len(), failures: defects.iter().filter(|d| !dirac::is_zero(&d.2)).count() };
    }
    b.exact("projected algebra table at rational n", count);
    let gc = GammaSet::<C64>::spinor_frame();
    let mut rng = b.rng(5);
    let points: Vec<OrbitPoint> = (0..b.opts.trials.min(100)).map(|_| random_orbit_point(&mut rng, 1.0)).collect();
    let table = max_of(points.par_iter().map(|n| dirac::projected_algebra(&gc, &c4(n.vector())).max_defect(&gc)));
    b.numeric("projected algebra table at random n", points.len(), table, 1e-12);
    let n0 = [QI::ratio(1, 1), QI::zero(), QI::zero(), QI::zero()];
    let alg0 = dirac::projected_algebra(&gq, &n0);
    let mut rest = IdentityCount::default();
    for i in 1..4 {
        rest.cases += 2;
        rest.failures += usize::from(!dirac::is_zero(&alg0.sigma_n[0][i]));
        for j in 1..4 {
            rest.cases += 1;
            rest.failures += usize::from(alg0.sigma_n[i][j] != dirac::rest_frame_spin_block::<QI>(i, j));
        }
    }
    b.exact("rest-frame spin matrices", rest);
    b.exact("rest-frame projector reductions", rest_frame_projectors());
    let mut rng = b.rng(6);
    let mut idem = 0.0f64;
    let id = Matrix4::<C64>::identity();
    for _ in 0..b.opts.trials {
        let n = random_orbit_point(&mut rng, 1.5);
        let p = FourVector(std::array::from_fn(|_| rng.gen_range(-3.0..3.0)));
        if let Ok(pr) = dirac::projectors(&p, &n) {
            for (x, y) in [(pr.plus, pr.minus), (pr.energy_plus, pr.energy_minus), (pr.helicity_plus, pr.helicity_minus)] {
                idem = idem.max((x * x - x).camax()).max((x * y).camax()).max((x + y - id).camax());
            }
        }
    }
    b.numeric("projector pairs idempotent and complementary", b.opts.trials, idem, 1e-12);
    let mut electric = Matrix4::zeros();
    electric[(0, 1)] = 0.7;
    electric[(1, 0)] = -0.7;
    electric[(0, 3)] = -1.1;
    electric[(3, 0)] = 1.1;
    b.numeric("electric coupling vanishes at n0", 1, dirac::spin_field_coupling(&OrbitPoint::rest(), &electric).camax(), 0.0);
    let mut rng = b.rng(7);
    let mut form = 0.0f64;
    for trial in 0..b.opts.trials {
        let mut n = random_orbit_point(&mut rng, 1.5);
        if trial % 2 == 1 {
            n = OrbitPoint::new(FourVector(n.vector().0.map(|x| -x))).expect("unit");
        }
        let rs = |rng: &mut ChaCha8Rng| Vector2::new(C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)), C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let (phi, chi) = (rs(&mut rng), rs(&mut rng));
        let psi = dirac::assemble_spinor(&phi, &chi, &n);
        let want = phi.norm_squared() + chi.norm_squared();
        let got = dirac::indefinite_form(&psi, &psi).expect("same n");
        let moved = dirac::transform_spinor(&psi, &random_lorentz_with(&mut rng, 0.8));
        let after = dirac::indefinite_form(&moved, &moved).expect("same n");
        form = form.max((got - C64::new(want, 0.0)).norm() / want).max((after - got).norm() / want);
    }
    b.numeric("spinor form positive on both cones and invariant", b.opts.trials, form, 1e-10);
    let mut rng = b.rng(8);
    let wave = dirac::DiracPlaneWave {
        amplitude: std::array::from_fn(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))),
        k: std::array::from_fn(|_| rng.gen_range(-2.0..2.0)),
        q: std::array::from_fn(|_| rng.gen_range(-1.0..1.0)),
        kappa: rng.gen_range(-1.0..1.0),
    };
    let mut c2 = 0.0f64;
    for _ in 0..b.opts.trials.min(50) {
        let at = dirac::OffShellPoint {
            t: rng.gen_range(-2.0..2.0),
            x: std::array::from_fn(|_| rng.gen_range(-2.0..2.0)),
            n0: rng.gen_range(1.0..2.0),
            n: std::array::from_fn(|_| rng.gen_range(-1.0..1.0)),
            tau: rng.gen_range(-2.0..2.0),
        };
        let once = |p: &dirac::OffShellPoint| dirac::discrete_symmetry(dirac::DiscreteSymmetry::C, &wave, p);
        let twice = dirac::discrete_symmetry(dirac::DiscreteSymmetry::C, &once, &at);
        c2 = c2.max((twice - dirac::DiracField::eval(&wave, &at)).norm());
    }
    b.numeric("charge conjugation squares to one", b.opts.trials.min(50), c2, 1e-12);
}

/// At `n₀` with `p = (E, 2, 3, 6)`: `P_± = ½(1 ∓ γ⁰)`, `P_{E±} = ½(1 ∓ sgn E)`,
/// `P_{n±} = ½(1 ∓ σ⃗·p⃗/|p⃗|)` on both 2×2 diagonal blocks, all in Q(i).
pub fn rest_frame_projectors() -> IdentityCount {
    let g = GammaSet::<QI>::spinor_frame();
    let n0 = [QI::ratio(1, 1), QI::zero(), QI::zero(), QI::zero()];
    let id = Matrix4::<QI>::identity();
    let half = QI::ratio(1, 2);
    let mut count = IdentityCount::default();
    let mut check = |ok: bool| {
        count.cases += 1;
        count.failures += usize::from(!ok);
    };
    let gn = g.slash(&n0);
    check((id.clone() + gn.clone()) * half.clone() == (id.clone() - g.gamma[0].clone()) * half.clone());
    check((id.clone() - gn) * half.clone() == (id.clone() + g.gamma[0].clone()) * half.clone());
    for e in [5i64, -5] {
        let p = [QI::ratio(e, 1), QI::ratio(2, 1), QI::ratio(3, 1), QI::ratio(6, 1)];
        let pn = dirac::mdot(&p, &n0);
        check(pn == QI::ratio(-e, 1));
        let hel = dirac::helicity_operator(&g, &p, &n0) * QI::ratio(1, 7);
        let plus = (id.clone() + hel.clone()) * half.clone();
        let minus = (id.clone() - hel) * half.clone();
        let i = QI::imag_unit();
        let r = |a: i64| QI::ratio(a, 7);
        let sp = [[r(6), r(2) - i.clone() * r(3)], [r(2) + i * r(3), r(-6)]];
        for (proj, sign) in [(plus, -1i64), (minus, 1)] {
            let mut ok = true;
            for row in 0..4 {
                for col in 0..4 {
                    let want = if row / 2 == col / 2 {
                        let d = if row == col { half.clone() } else { QI::zero() };
                        d + sp[row % 2][col % 2].clone() * QI::ratio(sign, 2)
                    } else {
                        QI::zero()
                    };
                    ok &= proj[(row, col)] == want;
                }
            }
            check(ok);
        }
    }
    count
}

fn poincare_suite(b: &mut Battery) {
    let report = poincare::verify_orbit_algebra();
    let rot = report.entries.iter().filter(|e| e.relation == poincare::OrbitRelation::RotationRotation);
    let cases = rot.clone().count();
    b.exact("M_n closure matches the reference h-pattern", IdentityCount { cases, failures: rot.filter(|e| !e.matches_reference).count() });
    let pos: Vec<_> = report.entries.iter().filter(|e| e.relation == poincare::OrbitRelation::RotationPosition).collect();
    b.exact("[M_n, x] closes on the h-x-n basis", IdentityCount { cases: pos.len(), failures: pos.iter().filter(|e| !e.reference.closes()).count() });
    let pl = poincare::pauli_lubanski_report();
    b.flag("epsilon contraction kills the reordering term", pl.reordering_terms.iter().all(|&t| t == 0));
    b.flag("[W, p] = 0 for p parallel to n", pl.w_p_commute_aligned);
    b.flag("[C_n, p.p] = 0", pl.casimir_commutes_with_mass);
    let mut rng = b.rng(9);
    let mut jac = IdentityCount::default();
    for _ in 0..b.opts.trials.min(20) {
        let (x, y, z) = (random_quadratic(&mut rng), random_quadratic(&mut rng), random_quadratic(&mut rng));
        jac.cases += 1;
        jac.failures += usize::from(!poincare::jacobi_residual(&x, &y, &z).is_zero());
    }
    b.exact("jacobi identity of the engine", jac);
    let mut rng = b.rng(10);
    let mut cas = 0.0f64;
    let mut fd = 0.0f64;
    for _ in 0..b.opts.trials {
        let n = random_orbit_point(&mut rng, 1.5);
        let m = rng.gen_range(0.2..4.0);
        let p = n.vector().scale(m);
        for e in poincare::spin_casimir_eigenvalues(&p, &n) {
            cas = cas.max((e - 0.75 * m * m).abs() / (1.0 + m * m));
        }
        let pn = random_orbit_point(&mut rng, 2.0).vector().scale(rng.gen_range(0.3..5.0));
        let (j, f) = (poincare::n_of_p_jacobian(&pn), poincare::n_of_p_jacobian_fd(&pn));
        fd = fd.max(match (j, f) {
            (Ok(j), Ok(f)) => (j - f).abs().max() / j.abs().max(),
            _ => f64::INFINITY,
        });
    }
    b.numeric("spin-1/2 casimir equals 3m^2/4 for p parallel to n", b.opts.trials, cas, 1e-10);
    b.numeric("n(p) jacobian matches finite differences", b.opts.trials, fd, 1e-6);
    let mut rng = b.rng(11);
    let mut k = IdentityCount::default();
    for _ in 0..2 {
        let n = random_rational_n(&mut rng);
        let mut f: [[QI; 4]; 4] = std::array::from_fn(|_| std::array::from_fn(|_| QI::zero()));
        for a in 0..4 {
            for c in a + 1..4 {
                let v = QI::ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4));
                f[a][c] = v.clone();
                f[c][a] = -v;
            }
        }
        let check = poincare::gauged_k_commutator(&n, &f, &QI::ratio(rng.gen_range(1..=5), 3));
        k.cases += 1;
        k.failures += usize::from(!(check.constant && check.residual_entries == 0 && check.exact_constant == Some(QI::ratio(1, 1))));
    }
    b.exact("gauged i[K_T, K_L] with unit constant", k);
}

fn random_quadratic(rng: &mut ChaCha8Rng) -> poincare::OperatorExpr {
    use poincare::{OperatorExpr, Species};
    let species = [Species::X, Species::P, Species::N, Species::Dn];
    let mut e = OperatorExpr::zero();
    for _ in 0..3 {
        let a = OperatorExpr::gen(species[rng.gen_range(0..4)], rng.gen_range(0..4));
        let c = OperatorExpr::gen(species[rng.gen_range(0..4)], rng.gen_range(0..4));
        e = &e + &(a * c).scale(&QI::ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3)));
    }
    e
}

fn fields_suite(b: &mut Battery) {
    let trials = b.opts.trials;
    let mut rng = b.rng(12);
    let point = |rng: &mut ChaCha8Rng| -> [f64; 4] { std::array::from_fn(|_| rng.gen_range(-1.5..1.5)) };
    let mut trace = 0.0f64;
    let mut det_id = 0.0f64;
    let mut det_inv = 0.0f64;
    let mut gauge = 0.0f64;
    let mut pure = 0.0f64;
    for _ in 0..trials {
        let field = fields::random_polynomial_field(&mut rng, 6);
        let x = point(&mut rng);
        trace = trace.max((fields::d_dot_a(&field, &x).trace() - C64::new(fields::divergence(&field, &x), 0.0)).norm());
        let inv = fields::det_invariants(&field, &x);
        det_id = det_id.max(inv.identity_residual() / (1.0 + inv.det.norm()));
        let lam = random_lorentz_with(&mut rng, 0.7);
        let moved = fields::det_invariants(&field.transformed(&lam), &lam.apply(&FourVector(x)).0);
        det_inv = det_inv.max((moved.det - inv.det).norm() / (1.0 + inv.det.norm()));
        let g = fields::ScalarModel::Polynomial { coefficients: fields::random_polynomial(&mut rng, 6) };
        let shifted = fields::gauge_transform(&field, &g);
        let (fa, fb) = (fields::field_strength(&field, &x), fields::field_strength(&shifted, &x));
        gauge = gauge.max((fa.lower - fb.lower).abs().max()).max((fa.ff() - fb.ff()).abs() / (1.0 + fa.ff().abs()));
        let pure_gauge = fields::gauge_transform(&fields::FieldModel::Polynomial { coefficients: Default::default() }, &g);
        pure = pure.max(fields::field_strength(&pure_gauge, &x).lower.abs().max());
    }
    b.numeric("trace of D.A equals divergence", trials, trace, 1e-12);
    b.numeric("determinant identity", trials, det_id, 1e-12);
    b.numeric("determinant Lorentz invariance", trials, det_inv, 1e-10);
    b.numeric("gauge invariance of f and ff", trials, gauge, 1e-12);
    b.numeric("pure gauge has vanishing f", trials, pure, 1e-12);
    let mut rng = b.rng(13);
    let mut maxwell = 0.0f64;
    for _ in 0..trials {
        let dir: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-3);
        let w = rng.gen_range(0.5..3.0);
        let k = [w, w * dir[0] / norm, w * dir[1] / norm, w * dir[2] / norm];
        let mut e = [0.0, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let dot: f64 = (1..4).map(|i| e[i] * k[i]).sum::<f64>() / (w * w);
        for i in 1..4 {
            e[i] -= dot * k[i];
        }
        let field = fields::FieldModel::PlaneWave { polarization: e.map(|v| C64::new(v, 0.0)), k };
        let x = point(&mut rng);
        let r = fields::maxwell_residual(&field, &x);
        let inv = fields::det_invariants(&field, &x);
        maxwell = maxwell.max(r.iter().fold(0.0, |m, v| m.max(v.abs()))).max(inv.ff.abs()).max(inv.ff_dual.abs());
    }
    b.numeric("null transverse plane waves solve Maxwell", trials, maxwell, 1e-12);
}

/// Runs the selected suites. Output is deterministic for fixed options.
pub fn run_verify(opts: &VerifyOptions) -> VerifyReport {
    let suites: Vec<Suite> = if opts.suite == Suite::All { Suite::MODULES.to_vec() } else { vec![opts.suite] };
    let mut checks = Vec::new();
    for suite in suites {
        let mut b = Battery { opts: *opts, suite, checks: Vec::new() };
        match suite {
            Suite::LittleGroup => little_group_suite(&mut b),
            Suite::Angular => angular_suite(&mut b),
            Suite::Dirac => dirac_suite(&mut b),
            Suite::Poincare => poincare_suite(&mut b),
            Suite::Fields => fields_suite(&mut b),
            Suite::All => unreachable!(),
        }
        checks.extend(b.checks);
    }
    let passed = checks.iter().all(|c| c.passed);
    VerifyReport { options: *opts, checks, passed }
}
