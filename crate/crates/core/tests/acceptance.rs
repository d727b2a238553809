//! Acceptance criteria 1-9. Each test prints one PASS/FAIL line.

use std::io::Write;
use std::time::{Duration, Instant};

use nalgebra::{Matrix2, Matrix3, Matrix4};
use num_traits::{One, Zero};
use orbitrep::angular::*;
use orbitrep::dirac::{self, DiracScalar, GammaSet, QI};
use orbitrep::fields::{self, FieldModel, ScalarModel};
use orbitrep::little_group::{orbit_act, random_orbit_point, wigner_rotation};
use orbitrep::minkowski::{random_lorentz_with, FourVector};
use orbitrep::poincare;
use orbitrep::sl2c::pauli;
use orbitrep::tensors::{product_rep, reduce_rep};
use orbitrep::verify::{self, Suite, VerifyOptions};
use orbitrep::{OrbitPoint, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const UNITARITY_TOL: f64 = 1e-12;
const COCYCLE_TOL: f64 = 1e-10;
const OFF_BLOCK_TOL: f64 = 1e-10;
const CHARACTER_TOL: f64 = 1e-9;
const ALGEBRA_TABLE_TOL: f64 = 1e-12;
const CASIMIR_TOL: f64 = 1e-10;
const JACOBIAN_REL_TOL: f64 = 1e-6;
const TRACE_TOL: f64 = 1e-12;
const MAXWELL_TOL: f64 = 1e-12;
const DET_INVARIANCE_TOL: f64 = 1e-10;
const UNITARITY_BUDGET: Duration = Duration::from_secs(5);
const VERIFY_BUDGET: Duration = Duration::from_secs(120);

/// Writes straight to stderr so the line survives libtest output capture.
fn report(id: u32, title: &str, ok: bool, detail: &str) {
    let line = format!("criterion {id} {}: {title} ({detail})\n", if ok { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().write_all(line.as_bytes());
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn so3_image(d: &Matrix2<C64>) -> Matrix3<f64> {
    let s = pauli();
    Matrix3::from_fn(|i, j| (s[i] * d * s[j] * d.adjoint()).trace().re / 2.0)
}

#[test]
fn criterion_1_little_group_unitarity() {
    let start = Instant::now();
    let mut r = rng(101);
    let (mut unit, mut det) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let lambda = random_lorentz_with(&mut r, 1.0);
        let n = random_orbit_point(&mut r, 2.0);
        let d = *wigner_rotation(&lambda, &n).matrix();
        let e = d.adjoint() * d - Matrix2::identity();
        let row_sum = (0..2).map(|i| (0..2).map(|j| e[(i, j)].norm()).sum::<f64>()).fold(0.0, f64::max);
        unit = unit.max(row_sum);
        det = det.max((d.determinant() - C64::new(1.0, 0.0)).norm());
    }
    let elapsed = start.elapsed();
    let ok = unit <= UNITARITY_TOL && det <= UNITARITY_TOL && elapsed < UNITARITY_BUDGET;
    report(1, "little-group unitarity over 1000 (L, n)", ok, &format!("max |D'D-1| = {unit:.2e}, max |det D - 1| = {det:.2e}, {:.2} s", elapsed.as_secs_f64()));
    assert!(ok);
}

#[test]
fn criterion_2_cocycle() {
    let mut r = rng(202);
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let (l1, l2) = (random_lorentz_with(&mut r, 0.8), random_lorentz_with(&mut r, 0.8));
        let n = random_orbit_point(&mut r, 1.5);
        let whole = so3_image(wigner_rotation(&l2.compose(&l1), &n).matrix());
        let chain = so3_image(wigner_rotation(&l2, &orbit_act(&l1, &n)).matrix()) * so3_image(wigner_rotation(&l1, &n).matrix());
        worst = worst.max((whole - chain).abs().max());
    }
    let ok = worst <= COCYCLE_TOL;
    report(2, "cocycle at the SO(3) level over 500 triples", ok, &format!("max residual {worst:.2e}"));
    assert!(ok);
}

#[test]
fn criterion_3_exact_coefficients() {
    let cg = verify::cg_orthogonality(4);
    let racah = verify::racah_orthogonality(4);
    let be = verify::biedenharn_elliott(4);
    let three = verify::three_spin_recoupling(4);
    let all = [cg, racah, be, three];
    let ok = all.iter().all(|c| c.failures == 0 && c.cases > 0);
    report(
        3,
        "exact CG, Racah, Biedenharn-Elliott and N=3 recoupling for spins <= 2",
        ok,
        &format!("cases/failures: CG {}/{}, Racah {}/{}, BE {}/{}, recoupling {}/{}", cg.cases, cg.failures, racah.cases, racah.failures, be.cases, be.failures, three.cases, three.failures),
    );
    assert!(ok);
}

#[test]
fn criterion_4_combinatorics() {
    let c3 = coupling_counts(3).unwrap();
    let triple = (c3.a, c3.c, c3.d) == (2, 12, 3);
    let double_factorial = |n: usize| (1..=2 * n as u128 - 3).step_by(2).product::<u128>();
    let trees = (2..=8).all(|n| {
        let listed = enumerate_trees(n, TreeKind::Unordered).unwrap().len() as u128;
        listed == double_factorial(n) && coupling_counts(n).unwrap().d == listed
    });
    let two = decompose_product(2).unwrap();
    let dims: Vec<(usize, usize)> = two.blocks.iter().map(|b| (b.dimension, b.multiplicity)).collect();
    let two_ok = dims == vec![(1, 1), (3, 1)];
    let top = (1..=8).all(|n| decompose_product(n).unwrap().top_dimension() == n + 1);
    let ok = triple && trees && two_ok && top;
    report(4, "coupling counts, tree enumeration, two-spin and top blocks", ok, &format!("(a3,c3,d3) = ({}, {}, {}), d_N = (2N-3)!! for N <= 8: {trees}, 2 spins {dims:?}, top N+1: {top}", c3.a, c3.c, c3.d));
    assert!(ok);
}

fn character(twice_s: i32, psi: f64) -> f64 {
    (-twice_s..=twice_s).step_by(2).map(|m| (f64::from(m) * psi / 2.0).cos()).sum()
}

#[test]
fn criterion_5_block_reduction() {
    let mut r = rng(505);
    let (mut off, mut chars) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let lambda = random_lorentz_with(&mut r, 1.0);
        let n = random_orbit_point(&mut r, 1.5);
        for count in 1..=6 {
            let rep = product_rep(&lambda, &n, count).unwrap();
            let red = reduce_rep(&rep).unwrap();
            off = off.max(red.off_block_residual());
            let half_trace = (rep.factor().matrix().trace().re / 2.0).clamp(-1.0, 1.0);
            let psi = 2.0 * half_trace.acos();
            for (i, range) in red.ranges.iter().enumerate() {
                chars = chars.max((red.block_trace(i) - C64::new(character(range.s.twice(), psi), 0.0)).norm());
            }
        }
    }
    let ok = off <= OFF_BLOCK_TOL && chars <= CHARACTER_TOL;
    report(5, "block reduction N <= 6 over 100 (L, n)", ok, &format!("off-block {off:.2e}, character mismatch {chars:.2e}"));
    assert!(ok);
}

fn q(a: i64, b: i64) -> QI {
    QI::ratio(a, b)
}

fn pauli_q(k: usize) -> [[QI; 2]; 2] {
    let i = QI::imag_unit();
    match k {
        0 => [[QI::zero(), QI::one()], [QI::one(), QI::zero()]],
        1 => [[QI::zero(), -i.clone()], [i, QI::zero()]],
        _ => [[QI::one(), QI::zero()], [QI::zero(), -QI::one()]],
    }
}

fn levi3(i: usize, j: usize, k: usize) -> i64 {
    ((j as i64 - i as i64) * (k as i64 - i as i64) * (k as i64 - j as i64)).signum()
}

#[test]
fn criterion_6_dirac_sector() {
    let g = GammaSet::<QI>::spinor_frame();
    let mut r = rng(606);
    let mut k_fail = 0;
    for _ in 0..40 {
        let n = loop {
            let u = std::array::from_fn(|_| (r.gen_range(-5..=5), 11));
            if let Some(n) = dirac::rational_orbit_point(u) {
                break n;
            }
        };
        let p: [QI; 4] = std::array::from_fn(|_| q(r.gen_range(-9..=9), r.gen_range(1..=4)));
        let (dl, dt) = dirac::k_square_defects(&g, &p, &n);
        k_fail += usize::from(!(dirac::is_zero(&dl) && dirac::is_zero(&dt)));
    }
    let gc = GammaSet::<C64>::spinor_frame();
    let table = (0..100)
        .map(|_| {
            let n = random_orbit_point(&mut r, 1.0);
            dirac::projected_algebra(&gc, &n.vector().0.map(|x| C64::new(x, 0.0))).max_defect(&gc)
        })
        .fold(0.0, f64::max);
    let n0 = [q(1, 1), QI::zero(), QI::zero(), QI::zero()];
    let alg = dirac::projected_algebra(&g, &n0);
    let mut spin_fail = 0;
    for i in 1..4 {
        spin_fail += usize::from(!dirac::is_zero(&alg.sigma_n[0][i]));
        for j in 1..4 {
            let mut want = Matrix4::<QI>::from_element(QI::zero());
            for k in 0..3 {
                let e = levi3(i - 1, j - 1, k);
                for b in 0..2 {
                    for (rr, row) in pauli_q(k).iter().enumerate() {
                        for (cc, v) in row.iter().enumerate() {
                            want[(2 * b + rr, 2 * b + cc)] += v.clone() * q(e, 2);
                        }
                    }
                }
            }
            spin_fail += usize::from(alg.sigma_n[i][j] != want);
        }
    }
    let projectors = verify::rest_frame_projectors();
    let mut electric = Matrix4::zeros();
    for (a, v) in [(1, 0.7), (2, -1.3), (3, 2.1)] {
        electric[(0, a)] = v;
        electric[(a, 0)] = -v;
    }
    let coupling = dirac::spin_field_coupling(&OrbitPoint::rest(), &electric).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let ok = k_fail == 0 && table <= ALGEBRA_TABLE_TOL && spin_fail == 0 && projectors.failures == 0 && coupling == 0.0;
    report(
        6,
        "Dirac K identities, projected table, rest-frame spin, projectors, electric coupling",
        ok,
        &format!("K failures {k_fail}/40, table {table:.2e}, rest-frame spin failures {spin_fail} (Sigma^ij = eps^ijk sigma_k / 2 per block), projector failures {}/{}, electric coupling {coupling:.1e}", projectors.failures, projectors.cases),
    );
    assert!(ok);
}

#[test]
fn criterion_7_poincare_orbit() {
    let closure = poincare::verify_orbit_algebra();
    let sample = |rel| closure.entries.iter().find(|e| e.relation == rel && e.reference.coefficients.iter().any(|c| c != "0")).map(|e| e.reference.coefficients.join(", ")).unwrap_or_default();
    let closes = closure.rotation_closes && closure.position_closes;
    let pl = poincare::pauli_lubanski_report();
    let mut r = rng(707);
    let (mut casimir, mut jac) = (0.0f64, 0.0f64);
    for _ in 0..200 {
        let n = random_orbit_point(&mut r, 1.5);
        let m = r.gen_range(0.2..4.0);
        for e in poincare::spin_casimir_eigenvalues(&n.vector().scale(m), &n) {
            casimir = casimir.max((e - m * m * 0.5 * 1.5).abs() / (1.0 + m * m));
        }
        let p = random_orbit_point(&mut r, 2.0).vector().scale(r.gen_range(0.3..5.0));
        let (a, b) = (poincare::n_of_p_jacobian(&p).unwrap(), poincare::n_of_p_jacobian_fd(&p).unwrap());
        jac = jac.max((a - b).abs().max() / a.abs().max());
    }
    let ok = closes && pl.w_p_commute && casimir <= CASIMIR_TOL && jac <= JACOBIAN_REL_TOL;
    report(
        7,
        "orbit algebra closure, [W, p] = 0, Casimir, Jacobian",
        ok,
        &format!(
            "closure {closes} (M_n M_n coefficients [{}], M_n x coefficients [{}]), [W_mu, p^nu] = 0: {} (zero for p parallel to n: {}), Casimir {casimir:.2e}, Jacobian {jac:.2e}",
            sample(poincare::OrbitRelation::RotationRotation),
            sample(poincare::OrbitRelation::RotationPosition),
            pl.w_p_commute,
            pl.w_p_commute_aligned
        ),
    );
    assert!(ok);
}

fn divergence_oracle(field: &FieldModel, x: &[f64; 4]) -> f64 {
    match field {
        FieldModel::Polynomial { coefficients } => (0..4)
            .map(|mu| {
                let mut orders = [0; 4];
                orders[mu] = 1;
                coefficients[mu].derivative(orders, x)
            })
            .sum(),
        _ => unreachable!(),
    }
}

#[test]
fn criterion_8_field_forms() {
    let mut r = rng(808);
    let (mut trace, mut pure, mut inv) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let field = fields::random_polynomial_field(&mut r, 6);
        let x: [f64; 4] = std::array::from_fn(|_| r.gen_range(-1.5..1.5));
        trace = trace.max((fields::d_dot_a(&field, &x).trace() - C64::new(divergence_oracle(&field, &x), 0.0)).norm());
        let gauge = ScalarModel::Polynomial { coefficients: fields::random_polynomial(&mut r, 6) };
        let only_gauge = fields::gauge_transform(&FieldModel::Polynomial { coefficients: Default::default() }, &gauge);
        pure = pure.max(fields::field_strength(&only_gauge, &x).lower.abs().max());
        let lambda = random_lorentz_with(&mut r, 0.7);
        let before = fields::det_invariants(&field, &x).det;
        let after = fields::det_invariants(&field.transformed(&lambda), &lambda.apply(&FourVector(x)).0).det;
        inv = inv.max((after - before).norm() / (1.0 + before.norm()));
    }
    let mut maxwell = 0.0f64;
    for _ in 0..100 {
        let w = r.gen_range(0.5..3.0);
        let theta = r.gen_range(0.0..std::f64::consts::PI);
        let phi = r.gen_range(0.0..std::f64::consts::TAU);
        let dir = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
        let e1 = [theta.cos() * phi.cos(), theta.cos() * phi.sin(), -theta.sin()];
        let e2 = [-phi.sin(), phi.cos(), 0.0];
        let (a, b) = (C64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)), C64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)));
        let mut polarization = [C64::zero(); 4];
        for i in 0..3 {
            polarization[i + 1] = a * e1[i] + b * e2[i];
        }
        let field = FieldModel::PlaneWave { polarization, k: [w, w * dir[0], w * dir[1], w * dir[2]] };
        let x: [f64; 4] = std::array::from_fn(|_| r.gen_range(-2.0..2.0));
        maxwell = maxwell.max(fields::maxwell_residual(&field, &x).iter().fold(0.0, |m, v| m.max(v.abs())));
    }
    let ok = trace <= TRACE_TOL && pure == 0.0 && maxwell <= MAXWELL_TOL && inv <= DET_INVARIANCE_TOL;
    report(8, "trace, pure gauge, null plane waves, determinant invariance", ok, &format!("trace {trace:.2e}, pure gauge max |f| {pure:.1e}, Maxwell {maxwell:.2e}, det invariance {inv:.2e}"));
    assert!(ok);
}

fn golden_tables() -> Vec<(&'static str, String)> {
    let h = HalfInt::from_twice;
    let render = |v: serde_json::Value| serde_json::to_string_pretty(&v).unwrap() + "\n";
    let six: Vec<SixJRow> = (0..3i32.pow(6))
        .map(|k| std::array::from_fn(|i| h(k / 3i32.pow(i as u32) % 3)))
        .map(|j| six_j_row(j).unwrap())
        .collect();
    vec![
        ("cg_2_1.json", render(serde_json::to_value(cg_table(h(2), h(1)).unwrap()).unwrap())),
        ("cg_4_3.json", render(serde_json::to_value(cg_table(h(4), h(3)).unwrap()).unwrap())),
        ("sixj_le1.json", render(serde_json::to_value(six).unwrap())),
    ]
}

#[test]
fn criterion_9_end_to_end() {
    let opts = VerifyOptions { suite: Suite::All, seed: 7, trials: 200, tol: None };
    let start = Instant::now();
    let first = verify::run_verify(&opts);
    let elapsed = start.elapsed();
    let second = verify::run_verify(&opts);
    let stable_report = serde_json::to_string(&first).unwrap() == serde_json::to_string(&second).unwrap();
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden");
    let tables = golden_tables();
    let mut golden_ok = tables == golden_tables();
    for (name, text) in tables {
        let path = format!("{dir}/{name}");
        if std::env::var_os("ORBITREP_BLESS").is_some() {
            std::fs::write(&path, &text).unwrap();
        }
        let stored = std::fs::read_to_string(&path).unwrap_or_default();
        golden_ok &= stored == text;
    }
    let failed: Vec<String> = first.failures().map(|c| format!("{}/{}", c.suite, c.name)).collect();
    let ok = first.passed && elapsed < VERIFY_BUDGET && stable_report && golden_ok;
    report(
        9,
        "verify --suite all --trials 200 --seed 7 and golden tables",
        ok,
        &format!("{} checks, failures {failed:?}, {:.1} s, report stable {stable_report}, goldens match {golden_ok}", first.checks.len(), elapsed.as_secs_f64()),
    );
    assert!(ok);
}
