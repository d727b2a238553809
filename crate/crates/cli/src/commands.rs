use anyhow::{bail, Context, Result};
use orbitrep::angular::{
    cg_row, cg_table, coupling_counts, enumerate_trees, nine_j_row, six_j_row, spin_multiplicity, triangle, ExactRepr,
    HalfInt, TreeKind,
};
use orbitrep::fields::{self, FieldModel};
use orbitrep::little_group::wigner_rotation;
use orbitrep::minkowski::{minkowski_dot, FourVector, LorentzMatrix};
use orbitrep::verify::{run_verify, Suite, VerifyOptions};
use orbitrep::{check_spin_count, state_cap, OrbitPoint, C64};
use serde_json::{json, Value};

use crate::output::{num, Output};

/// Result of a command: rendered data and whether a selection rule forced
/// the value to zero.
pub struct Outcome {
    pub output: Output,
    pub selection_zero: bool,
    pub passed: bool,
}

impl Outcome {
    fn ok(output: Output) -> Self {
        Self { output, selection_zero: false, passed: true }
    }
}

fn spin(name: &str, twice: i32) -> Result<HalfInt> {
    if twice < 0 {
        bail!("{name} must be a nonnegative 2j integer, got {twice}");
    }
    Ok(HalfInt::from_twice(twice))
}

fn projection(name: &str, j: HalfInt, twice: i32) -> Result<HalfInt> {
    if twice.abs() > j.twice() || (j.twice() - twice) % 2 != 0 {
        bail!("{name} = {twice}/2 is not a projection of spin {}/2", j.twice());
    }
    Ok(HalfInt::from_twice(twice))
}

const COEFF_HEADERS: [&str; 4] = ["sign", "p", "q", "value"];

fn coeff_cells(sign: i32, p: &str, q: &str, value: f64) -> [String; 4] {
    [sign.to_string(), p.into(), q.into(), num(value)]
}

pub fn cg(j1: i32, j2: i32, j: Option<i32>, m1: Option<i32>, m2: Option<i32>, m: Option<i32>) -> Result<Outcome> {
    let (a, b) = (spin("j1", j1)?, spin("j2", j2)?);
    let mut headers = vec!["two_j1", "two_j2", "two_j", "two_m1", "two_m2", "two_m"];
    headers.extend(COEFF_HEADERS);
    let cells = |r: &orbitrep::angular::CgRow| -> Vec<String> {
        let mut v: Vec<String> = [r.two_j1, r.two_j2, r.two_j, r.two_m1, r.two_m2, r.two_m].iter().map(i32::to_string).collect();
        v.extend(coeff_cells(r.sign, &r.p, &r.q, r.value));
        v
    };
    match (j, m1, m2, m) {
        (None, None, None, None) => {
            let table = cg_table(a, b)?;
            let rows = table.iter().map(cells).collect();
            Ok(Outcome::ok(Output::new(serde_json::to_value(&table)?, &headers, rows)))
        }
        (Some(j), Some(m1), Some(m2), Some(m)) => {
            let c = spin("j", j)?;
            let (x, y) = (projection("m1", a, m1)?, projection("m2", b, m2)?);
            let z = projection("m", c, m)?;
            let selection_zero = x + y != z || !triangle(a, b, c);
            let row = if x + y == z {
                cg_row(a, b, c, x, y)?
            } else {
                let z = ExactRepr::from(&orbitrep::angular::ExactReal::zero());
                orbitrep::angular::CgRow { two_j1: j1, two_j2: j2, two_j: j, two_m1: m1, two_m2: m2, two_m: m, sign: z.sign, p: z.p, q: z.q, value: z.value }
            };
            let mut value = serde_json::to_value(&row)?;
            value["selection_rule_zero"] = json!(selection_zero);
            let rows = vec![cells(&row)];
            Ok(Outcome { output: Output::new(value, &headers, rows), selection_zero, passed: true })
        }
        _ => bail!("give all of --j, --m1, --m2, --m for a single coefficient, or none for the full table"),
    }
}

pub fn sixj(j: [i32; 6]) -> Result<Outcome> {
    let s: Vec<HalfInt> = j.iter().enumerate().map(|(i, &t)| spin(&format!("j{}", i + 1), t)).collect::<Result<_>>()?;
    let triads = [[0, 1, 2], [0, 4, 5], [3, 1, 5], [3, 4, 2]];
    let selection_zero = triads.iter().any(|t| !triangle(s[t[0]], s[t[1]], s[t[2]]));
    let row = six_j_row(s.try_into().expect("six spins"))?;
    let mut value = serde_json::to_value(&row)?;
    value["selection_rule_zero"] = json!(selection_zero);
    let mut headers = vec!["two_j1", "two_j2", "two_j3", "two_j4", "two_j5", "two_j6"];
    headers.extend(COEFF_HEADERS);
    let mut cells: Vec<String> = j.iter().map(i32::to_string).collect();
    cells.extend(coeff_cells(row.sign, &row.p, &row.q, row.value));
    Ok(Outcome { output: Output::new(value, &headers, vec![cells]), selection_zero, passed: true })
}

pub fn ninej(j: [i32; 9]) -> Result<Outcome> {
    let mut s = [[HalfInt::ZERO; 3]; 3];
    for (k, &t) in j.iter().enumerate() {
        s[k / 3][k % 3] = spin(&format!("j{}", k + 1), t)?;
    }
    let selection_zero = (0..3).any(|r| !triangle(s[r][0], s[r][1], s[r][2]) || !triangle(s[0][r], s[1][r], s[2][r]));
    let row = nine_j_row(s)?;
    let mut value = serde_json::to_value(&row)?;
    value["selection_rule_zero"] = json!(selection_zero);
    let names: Vec<String> = (1..=9).map(|k| format!("two_j{k}")).collect();
    let mut headers: Vec<&str> = names.iter().map(String::as_str).collect();
    headers.extend(COEFF_HEADERS);
    let mut cells: Vec<String> = j.iter().map(i32::to_string).collect();
    cells.extend(coeff_cells(row.sign, &row.p, &row.q, row.value));
    Ok(Outcome { output: Output::new(value, &headers, vec![cells]), selection_zero, passed: true })
}

fn complex(z: C64) -> Value {
    json!([z.re, z.im])
}

/// Accepts `n` on the unit hyperboloid to 1e-9, rescales other timelike
/// vectors with a warning and rejects the rest.
fn orbit_point(n: [f64; 4]) -> Result<(OrbitPoint, bool)> {
    let v = FourVector::new(n)?;
    let sq = minkowski_dot(&v, &v);
    if !(sq < 0.0) {
        bail!("n = {n:?} is not timelike (n.n = {sq})");
    }
    let renormalized = (sq + 1.0).abs() > 1e-9 * n[0].powi(2).max(1.0);
    if renormalized {
        eprintln!("warning: n.n = {sq}; rescaled onto the unit hyperboloid");
    }
    Ok((OrbitPoint::normalized(v)?, renormalized))
}

pub fn wigner_rot(axis: [f64; 3], angle: f64, boost: [f64; 3], rapidity: f64, n: [f64; 4]) -> Result<Outcome> {
    let (point, renormalized) = orbit_point(n)?;
    let rot = if angle == 0.0 { LorentzMatrix::identity() } else { LorentzMatrix::rotation(axis, angle)? };
    let bst = if rapidity == 0.0 { LorentzMatrix::identity() } else { LorentzMatrix::boost(boost, rapidity)? };
    let lambda = bst.compose(&rot);
    let w = wigner_rotation(&lambda, &point);
    let d = w.matrix();
    let (rot_axis, rot_angle) = w.axis_angle();
    let matrix: Vec<Value> = (0..2).map(|r| json!([complex(d[(r, 0)]), complex(d[(r, 1)])])).collect();
    let lambda_rows: Vec<Vec<f64>> = (0..4).map(|r| (0..4).map(|c| lambda.matrix()[(r, c)]).collect()).collect();
    let value = json!({
        "n": point.vector().0,
        "renormalized": renormalized,
        "lambda": lambda_rows,
        "d": matrix,
        "unitarity_residual": w.unitarity_residual(),
        "det_residual": w.det_residual(),
        "rotation_axis": rot_axis,
        "rotation_angle": rot_angle,
    });
    let mut rows = Vec::new();
    for r in 0..2 {
        for c in 0..2 {
            rows.push(vec![format!("d[{r}][{c}]"), num(d[(r, c)].re), num(d[(r, c)].im)]);
        }
    }
    rows.push(vec!["unitarity_residual".into(), num(w.unitarity_residual()), num(0.0)]);
    rows.push(vec!["det_residual".into(), num(w.det_residual()), num(0.0)]);
    for (i, a) in rot_axis.iter().enumerate() {
        rows.push(vec![format!("rotation_axis[{i}]"), num(*a), num(0.0)]);
    }
    rows.push(vec!["rotation_angle".into(), num(rot_angle), num(0.0)]);
    Ok(Outcome::ok(Output::new(value, &["quantity", "re", "im"], rows)))
}

pub fn decompose(n: usize, trees: Option<TreeKind>, matrix: bool) -> Result<Outcome> {
    let cap = state_cap();
    check_spin_count(n, cap)?;
    let blocks: Vec<(i32, usize, usize)> = (0..=n as i32)
        .filter(|t| (n as i32 - t) % 2 == 0)
        .map(|t| (t, spin_multiplicity(n, HalfInt::from_twice(t)), (t + 1) as usize))
        .filter(|b| b.1 > 0)
        .collect();
    let counts = if n >= 2 { coupling_counts(n).ok() } else { None };
    let mut value = json!({
        "n": n,
        "cap": cap,
        "blocks": blocks.iter().map(|b| json!({"two_s": b.0, "multiplicity": b.1, "dimension": b.2})).collect::<Vec<_>>(),
        "counts": counts.map(|c| json!({"a": c.a, "c": c.c, "d": c.d})),
    });
    if let Some(kind) = trees {
        let list = enumerate_trees(n, kind)?;
        value["trees"] = json!(list.iter().map(ToString::to_string).collect::<Vec<_>>());
    }
    if matrix {
        let d = orbitrep::angular::decompose_product(n)?;
        let columns: Vec<Value> = d
            .labels
            .iter()
            .zip(&d.columns)
            .map(|(label, col)| {
                json!({
                    "path": label.path.iter().map(|k| k.twice()).collect::<Vec<_>>(),
                    "two_s": label.s.twice(),
                    "two_sigma": label.sigma.twice(),
                    "entries": col.iter().map(|(row, v)| json!([row, ExactRepr::from(v)])).collect::<Vec<_>>(),
                })
            })
            .collect();
        value["matrix"] = json!({"dimension": d.dimension(), "columns": columns});
    }
    let rows = blocks.iter().map(|b| vec![b.0.to_string(), b.1.to_string(), b.2.to_string()]).collect();
    Ok(Outcome::ok(Output::new(value, &["two_s", "multiplicity", "dimension"], rows)))
}

pub fn verify(suite: Suite, seed: u64, trials: usize, tol: Option<f64>) -> Result<Outcome> {
    let report = run_verify(&VerifyOptions { suite, seed, trials, tol });
    let rows = report
        .checks
        .iter()
        .map(|c| {
            vec![
                c.suite.to_string(),
                c.name.clone(),
                c.exact.to_string(),
                c.cases.to_string(),
                num(c.max_residual),
                num(c.tolerance),
                if c.passed { "pass" } else { "FAIL" }.to_string(),
            ]
        })
        .collect();
    let passed = report.passed;
    let value = serde_json::to_value(&report)?;
    let headers = ["suite", "check", "exact", "cases", "max_residual", "tolerance", "status"];
    Ok(Outcome { output: Output::new(value, &headers, rows), selection_zero: false, passed })
}

pub fn field(model: &str, at: [f64; 4]) -> Result<Outcome> {
    let text = if model == "-" {
        std::io::read_to_string(std::io::stdin())?
    } else {
        std::fs::read_to_string(model).with_context(|| format!("reading {model}"))?
    };
    let field = FieldModel::from_json(&text)?;
    let f = fields::field_strength(&field, &at);
    let parts = fields::decompose_fields(&field, &at);
    let inv = fields::det_invariants(&field, &at);
    let maxwell = fields::maxwell_residual(&field, &at);
    let lower: Vec<Vec<f64>> = (0..4).map(|r| (0..4).map(|c| f.lower[(r, c)]).collect()).collect();
    let value = json!({
        "at": at,
        "f_lower": lower,
        "divergence": parts.divergence,
        "electric": parts.electric,
        "magnetic": parts.magnetic,
        "ff": inv.ff,
        "ff_dual": inv.ff_dual,
        "det": complex(inv.det),
        "maxwell_residual": maxwell,
    });
    let mut rows = vec![vec!["divergence".into(), num(parts.divergence)]];
    for i in 0..3 {
        rows.push(vec![format!("electric[{i}]"), num(parts.electric[i])]);
    }
    for i in 0..3 {
        rows.push(vec![format!("magnetic[{i}]"), num(parts.magnetic[i])]);
    }
    rows.push(vec!["ff".into(), num(inv.ff)]);
    rows.push(vec!["ff_dual".into(), num(inv.ff_dual)]);
    rows.push(vec!["det.re".into(), num(inv.det.re)]);
    rows.push(vec!["det.im".into(), num(inv.det.im)]);
    for (i, r) in maxwell.iter().enumerate() {
        rows.push(vec![format!("maxwell_residual[{i}]"), num(*r)]);
    }
    Ok(Outcome::ok(Output::new(value, &["quantity", "value"], rows)))
}
