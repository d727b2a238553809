use nalgebra::Matrix2;
use orbitrep::fields::*;
use orbitrep::minkowski::{random_lorentz_with, METRIC_DIAG};
use orbitrep::sl2c::pauli;
use orbitrep::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn point(rng: &mut ChaCha8Rng) -> [f64; 4] {
    std::array::from_fn(|_| rng.gen_range(-1.5..1.5))
}

fn poly(terms: &[([u32; 4], f64)]) -> Polynomial {
    Polynomial(terms.iter().map(|&(powers, coefficient)| PolyTerm { powers, coefficient }).collect())
}

fn zero_field() -> FieldModel {
    FieldModel::Polynomial { coefficients: Default::default() }
}

fn random_scalar(rng: &mut ChaCha8Rng) -> ScalarModel {
    ScalarModel::Polynomial { coefficients: random_polynomial(rng, 6) }
}

fn random_model(rng: &mut ChaCha8Rng, kind: usize) -> FieldModel {
    let base = random_polynomial_field(rng, 5);
    match kind % 4 {
        0 => base,
        1 => FieldModel::PlaneWave {
            polarization: std::array::from_fn(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))),
            k: std::array::from_fn(|_| rng.gen_range(-2.0..2.0)),
        },
        2 => gauge_transform(&base, &random_scalar(rng)),
        _ => base.transformed(&random_lorentz_with(rng, 0.7)),
    }
}

fn box_of(s: &ScalarModel, x: &[f64; 4]) -> f64 {
    let j = s.jet(x);
    (0..4).map(|m| METRIC_DIAG[m] * j.d2[m][m]).sum()
}

#[test]
fn jets_match_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    let h = 1e-5;
    for trial in 0..40 {
        let field = random_model(&mut rng, trial);
        let x = point(&mut rng);
        let j = field.jet(&x);
        for a in 0..4 {
            let (mut hi, mut lo) = (x, x);
            hi[a] += h;
            lo[a] -= h;
            let (jh, jl) = (field.jet(&hi), field.jet(&lo));
            for mu in 0..4 {
                let fd = (jh.value[mu] - jl.value[mu]) / (2.0 * h);
                assert!((fd - j.d1[a][mu]).abs() < 1e-6 * (1.0 + fd.abs()), "trial {trial}");
                for b in 0..4 {
                    let fd2 = (jh.d1[b][mu] - jl.d1[b][mu]) / (2.0 * h);
                    assert!((fd2 - j.d2[a][b][mu]).abs() < 1e-6 * (1.0 + fd2.abs()));
                }
            }
        }
    }
}

#[test]
fn constant_and_uniform_magnetic_fields() {
    let c = FieldModel::Polynomial { coefficients: std::array::from_fn(|m| poly(&[([0; 4], m as f64 + 0.5)])) };
    assert_eq!(d_dot_a(&c, &[0.3, 1.0, -2.0, 0.5]), Matrix2::zeros());
    let b = 1.7;
    let field = FieldModel::Polynomial { coefficients: [poly(&[]), poly(&[]), poly(&[([0, 1, 0, 0], b)]), poly(&[])] };
    let x = [0.2, -0.4, 1.1, 0.9];
    let d = decompose_fields(&field, &x);
    assert_eq!(d.divergence, 0.0);
    assert_eq!(d.electric, [0.0; 3]);
    assert_eq!(d.magnetic, [0.0, 0.0, b]);
    let want = pauli()[2] * C64::new(0.0, 0.5 * b);
    assert!((d_dot_a(&field, &x) - want).camax() < 1e-15);
}

#[test]
fn trace_and_decomposition_on_random_polynomials() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    let [s1, s2, s3] = pauli();
    for _ in 0..100 {
        let field = random_polynomial_field(&mut rng, 6);
        let x = point(&mut rng);
        let m = d_dot_a(&field, &x);
        let div = divergence(&field, &x);
        assert!((m.trace() - C64::new(div, 0.0)).norm() < 1e-12);
        let f = field_strength(&field, &x);
        let d = decompose_fields(&field, &x);
        assert!(f.antisymmetry_residual() == 0.0);
        for k in 0..3 {
            assert!((d.electric[k] - f.electric()[k]).abs() < 1e-12);
            assert!((d.magnetic[k] - f.magnetic()[k]).abs() < 1e-12);
        }
        let w: Vec<C64> = (0..3).map(|k| C64::new(d.electric[k], d.magnetic[k])).collect();
        let rebuilt = (Matrix2::identity() * C64::new(div, 0.0) + s1 * w[0] + s2 * w[1] + s3 * w[2]) * C64::new(0.5, 0.0);
        assert!((rebuilt - m).camax() < 1e-12);
        // ε^i = f_{0i} = −f^{0i}, b^3 = f^{12}
        let up = f.upper();
        assert!((d.electric[2] + up[(0, 3)]).abs() < 1e-12);
        assert!((d.magnetic[2] - up[(1, 2)]).abs() < 1e-12);
        let dd = f.dual().dual();
        assert!((dd.lower + f.lower).abs().max() < 1e-12);
    }
}

#[test]
fn determinant_identity_and_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(59);
    for trial in 0..100 {
        let field = random_model(&mut rng, trial);
        let x = point(&mut rng);
        let inv = det_invariants(&field, &x);
        assert!(inv.identity_residual() < 1e-12 * (1.0 + inv.det.norm()), "{inv:?}");
        let lam = random_lorentz_with(&mut rng, 0.7);
        let moved = field.transformed(&lam);
        let xp = lam.apply(&orbitrep::FourVector(x)).0;
        let inv2 = det_invariants(&moved, &xp);
        let scale = 1.0 + inv.det.norm();
        assert!((inv2.det - inv.det).norm() < 1e-10 * scale, "{} {}", inv2.det, inv.det);
        assert!((inv2.ff - inv.ff).abs() < 1e-10 * (1.0 + inv.ff.abs()));
        assert!((inv2.ff_dual - inv.ff_dual).abs() < 1e-10 * (1.0 + inv.ff_dual.abs()));
    }
}

#[test]
fn pure_gauge_fields() {
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    for _ in 0..50 {
        let lam = random_scalar(&mut rng);
        let field = gauge_transform(&zero_field(), &lam);
        let x = point(&mut rng);
        let f = field_strength(&field, &x);
        assert!(f.lower.abs().max() < 1e-12);
        let d = decompose_fields(&field, &x);
        let bx = box_of(&lam, &x);
        assert!((d.divergence - bx).abs() < 1e-12);
        assert!(d.electric.iter().chain(&d.magnetic).all(|v| v.abs() < 1e-12));
        let inv = det_invariants(&field, &x);
        assert!((inv.det - C64::new(0.25 * bx * bx, 0.0)).norm() < 1e-12 * (1.0 + bx * bx));
        assert!(maxwell_residual(&field, &x).iter().all(|v| v.abs() < 1e-12));
    }
}

#[test]
fn gauge_transform_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(67);
    let base = random_polynomial_field(&mut rng, 6);
    let constant = ScalarModel::Polynomial { coefficients: poly(&[([0; 4], 3.0)]) };
    let x = point(&mut rng);
    assert_eq!(gauge_transform(&base, &constant).jet(&x).d1, base.jet(&x).d1);
    let quad = ScalarModel::Polynomial { coefficients: poly(&[([2, 0, 0, 0], 0.7), ([0, 1, 1, 0], -1.3), ([0, 0, 0, 2], 0.4)]) };
    let shifted = gauge_transform(&base, &quad);
    for _ in 0..100 {
        let x = point(&mut rng);
        let (a, b) = (decompose_fields(&base, &x), decompose_fields(&shifted, &x));
        assert!((b.divergence - a.divergence - box_of(&quad, &x)).abs() < 1e-12);
        for k in 0..3 {
            assert!((a.electric[k] - b.electric[k]).abs() < 1e-12);
            assert!((a.magnetic[k] - b.magnetic[k]).abs() < 1e-12);
        }
        let (fa, fb) = (field_strength(&base, &x), field_strength(&shifted, &x));
        assert!((fa.ff() - fb.ff()).abs() < 1e-12 * (1.0 + fa.ff().abs()));
        assert!((fa.ff_dual() - fb.ff_dual()).abs() < 1e-12 * (1.0 + fa.ff_dual().abs()));
        assert!((fa.dual_upper() - fb.dual_upper()).abs().max() < 1e-12);
    }
}

#[test]
fn plane_waves() {
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    for _ in 0..50 {
        // null k along a random direction, real transverse polarization
        let dir: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
        let w = rng.gen_range(0.5..3.0);
        let k = [w, w * dir[0] / norm, w * dir[1] / norm, w * dir[2] / norm];
        let mut e = [0.0, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let dot: f64 = (1..4).map(|i| e[i] * k[i]).sum::<f64>() / (w * w);
        for i in 1..4 {
            e[i] -= dot * k[i];
        }
        let field = FieldModel::PlaneWave { polarization: e.map(|v| C64::new(v, 0.0)), k };
        let x = point(&mut rng);
        assert!(divergence(&field, &x).abs() < 1e-12);
        assert!(maxwell_residual(&field, &x).iter().all(|v| v.abs() < 1e-12));
        let inv = det_invariants(&field, &x);
        assert!(inv.ff.abs() < 1e-12 && inv.ff_dual.abs() < 1e-12 && inv.det.norm() < 1e-12);
        // massive dispersion: ∂_μf^{μν} = −k²a^ν for k·ε = 0
        let km = [w * 1.3, k[1], k[2], k[3]];
        let massive = FieldModel::PlaneWave { polarization: e.map(|v| C64::new(0.0, v)), k: km };
        let k2 = -km[0] * km[0] + km[1] * km[1] + km[2] * km[2] + km[3] * km[3];
        let r = maxwell_residual(&massive, &x);
        let a = massive.jet(&x).value;
        for nu in 0..4 {
            assert!((r[nu] + k2 * a[nu]).abs() < 1e-12);
        }
        assert!(gauge_constraint_residual(&massive, &x, 0.0).abs() < 1e-12);
    }
}

#[test]
fn json_models() {
    let text = r#"{"kind":"plane-wave","polarization":[[0,0],[1,0],[0,1],[0,0]],"k":[1,0,0,1]}"#;
    let m = FieldModel::from_json(text).unwrap();
    assert!(matches!(m, FieldModel::PlaneWave { .. }));
    let back = serde_json::to_string(&m).unwrap();
    assert_eq!(FieldModel::from_json(&back).unwrap(), m);
    let poly = r#"{"kind":"polynomial","coefficients":[[],[],[{"powers":[0,1,0,0],"coefficient":2.0}],[]]}"#;
    assert!(FieldModel::from_json(poly).is_ok());
    let bad = r#"{"kind":"polynomial","coefficients":[[],[],[{"powers":[0,4,0,0],"coefficient":2.0}],[]]}"#;
    assert!(FieldModel::from_json(bad).is_err());
    assert!(FieldModel::from_json(r#"{"kind":"nope"}"#).is_err());
}
