use std::fs;
use std::path::Path;

use glinear::backward::{
    float_indices, optimal_constant, optimality_check, run_experiment, sigma_min_tau, summarize, AppendixMatrices,
    ConvIndex,
};
use glinear::eigen::{check_g_linearization, check_linearization, complete_eigenstructure, solve_regular};
use glinear::io::{
    ansatz_from_json, ansatz_to_json, basis_to_json, eig_to_json, mat_from_json, pencil_from_json, poly_from_json,
    to_pretty, trim_from_json, trim_to_json, vector_from_json, vector_to_json,
};
use glinear::minimal::{minimal_basis, recover_minimal, BasisSide, RecoveryMode, Source};
use glinear::reduction::{trim, z_rank, TrimResult};
use glinear::spaces::{
    ansatz_membership, build_l1, build_l2, companion_c1g, companion_c2g, AnsatzPencil, Membership, Side,
};
use glinear::{Field, Mat, MatPoly, Pencil, Rat, Scalar, Tol};
use serde_json::{json, Value};

use crate::{BasisArg, Command, Ctx, Failure, Outcome, SideArg};

type Res<T> = std::result::Result<T, Failure>;

/// Scalars whose values convert exactly into rationals.
trait Exact: Scalar {
    fn exact(&self) -> Rat;
}

impl Exact for Rat {
    fn exact(&self) -> Rat {
        self.clone()
    }
}

impl Exact for f64 {
    fn exact(&self) -> Rat {
        Rat::from_f64(*self)
    }
}

fn read_json(path: &Path) -> Res<Value> {
    let text = fs::read_to_string(path).map_err(|e| Failure::schema(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::schema(format!("{}: {e}", path.display())))
}

/// Rewrites a scalar entry into `target`'s encoding: floats become exact dyadic
/// rationals, rationals become nearest floats. Returns false for non-scalars.
fn coerce_entry(x: &mut Value, target: Field) -> Res<bool> {
    match (target, &*x) {
        (Field::Float64, Value::String(s)) => {
            let r = glinear::scalar::parse_rational(s)?;
            *x = json!(r.to_f64());
            Ok(true)
        }
        (Field::Rational, Value::Number(n)) => {
            let f = n.as_f64().ok_or_else(|| Failure::schema("non-finite entry"))?;
            *x = Value::String(Rat::from_f64(f).to_string());
            Ok(true)
        }
        _ => Ok(false),
    }
}

fn coerce(v: &mut Value, target: Field) -> Res<()> {
    match v {
        Value::Object(o) => {
            if o.contains_key("field") {
                o.insert("field".into(), Value::String(target.name().into()));
            }
            for (key, x) in o.iter_mut() {
                if key == "alpha" {
                    coerce_entry(x, target)?;
                } else {
                    coerce(x, target)?;
                }
            }
        }
        Value::Array(items) => {
            for x in items.iter_mut() {
                if !coerce_entry(x, target)? {
                    coerce(x, target)?;
                }
            }
        }
        _ => {}
    }
    Ok(())
}

/// Reads the inputs and brings them all into one field: `--field` if given,
/// otherwise the field declared by the first input, otherwise rational.
fn load(paths: &[&Path], ctx: &Ctx) -> Res<(Field, Vec<Value>)> {
    let mut docs = paths.iter().map(|p| read_json(p)).collect::<Res<Vec<_>>>()?;
    let field = ctx.field.or_else(|| docs.first().and_then(declared_field)).unwrap_or(Field::Rational);
    for d in docs.iter_mut() {
        if declared_field(d) != Some(field) {
            coerce(d, field)?;
        }
    }
    Ok((field, docs))
}

fn declared_field(v: &Value) -> Option<Field> {
    v.get("field").and_then(Value::as_str).and_then(|s| s.parse().ok())
}

fn kind(v: &Value) -> Option<&str> {
    v.get("kind").and_then(Value::as_str)
}

/// A bare array of rows or an object holding one under `matrix`.
fn matrix_input<T: Scalar>(v: &Value) -> Res<Mat<T>> {
    let inner = v.get("matrix").unwrap_or(v);
    Ok(mat_from_json(inner, None, None)?)
}

fn pretty(v: Value, ok: bool) -> Outcome {
    Outcome { text: to_pretty(&v), code: if ok { 0 } else { 3 } }
}

fn with_source(mut v: Value, source: &str) -> Value {
    if let Value::Object(o) = &mut v {
        o.insert("source".into(), Value::String(source.into()));
    }
    v
}

macro_rules! by_field {
    ($field:expr, $f:ident($($arg:expr),*)) => {
        match $field {
            Field::Rational => $f::<Rat>($($arg),*),
            Field::Float64 => $f::<f64>($($arg),*),
        }
    };
}

pub fn run(cmd: &Command, ctx: &Ctx) -> Res<Outcome> {
    match cmd {
        Command::Info { poly } => {
            let (field, docs) = load(&[poly], ctx)?;
            by_field!(field, info(&docs[0], ctx.tol))
        }
        Command::Build { poly, side, ansatz, w, companion } => {
            let side = match side {
                SideArg::L1 => Side::L1,
                SideArg::L2 => Side::L2,
            };
            let mut paths = vec![poly.as_path()];
            if let (Some(a), Some(w), false) = (ansatz, w, companion) {
                paths.extend([a.as_path(), w.as_path()]);
            }
            let (field, docs) = load(&paths, ctx)?;
            by_field!(field, build(&docs, side))
        }
        Command::Check { pencil, poly, strong, glin, lin } => {
            let (field, docs) = load(&[pencil, poly], ctx)?;
            let mode = if *lin {
                Some(false)
            } else if *glin {
                Some(true)
            } else {
                None
            };
            by_field!(field, check(&docs[0], &docs[1], *strong, mode, ctx.tol))
        }
        Command::Trim { pencil, d } => {
            let mut paths = vec![pencil.as_path()];
            paths.extend(d.as_deref());
            let (field, docs) = load(&paths, ctx)?;
            by_field!(field, trim_cmd(&docs[0], docs.get(1), ctx.tol))
        }
        Command::Solve { poly } => {
            let (field, docs) = load(&[poly], ctx)?;
            match field {
                Field::Rational => solve_exact(&docs[0], ctx.tol),
                Field::Float64 => solve_float(&docs[0], ctx.tol),
            }
        }
        Command::Recover { pencil, poly, mode, side } => {
            let rmode: RecoveryMode = mode.parse()?;
            let (field, docs) = load(&[pencil, poly], ctx)?;
            by_field!(field, recover(&docs[0], &docs[1], rmode, *side, ctx.tol))
        }
        Command::Backward { poly, trim, eps, trials, seed, factor } => {
            let (field, docs) = load(&[poly, trim], ctx)?;
            let (p, tr) = match field {
                Field::Rational => load_float::<Rat>(&docs[0], &docs[1])?,
                Field::Float64 => load_float::<f64>(&docs[0], &docs[1])?,
            };
            backward(&p, &tr, *eps, *trials, *seed, *factor, ctx.tol)
        }
        Command::LemmaCheck { k, n } => lemma_check(*k, *n),
        Command::Examples { id } => {
            let report = glinear::worked::run_example(*id)?;
            Ok(pretty(report.to_json(), report.passed()))
        }
    }
}

fn info<T: Scalar>(pv: &Value, tol: Tol) -> Res<Outcome> {
    let p: MatPoly<T> = poly_from_json(pv)?;
    Ok(pretty(
        json!({
            "kind": "info",
            "field": T::FIELD.name(),
            "rows": p.rows(),
            "cols": p.cols(),
            "grade": p.grade(),
            "degree": p.degree(),
            "nrank": p.normal_rank(tol),
            "frobenius_norm": p.frob_norm(),
        }),
        true,
    ))
}

fn build<T: Scalar>(docs: &[Value], side: Side) -> Res<Outcome> {
    let p: MatPoly<T> = poly_from_json(&docs[0])?;
    let (l, source) = match (&docs[1..], side) {
        ([], Side::L1) => (companion_c1g(&p)?, "companion_l1"),
        ([], Side::L2) => (companion_c2g(&p)?, "companion_l2"),
        ([av, wv], _) => {
            let v: Vec<T> = vector_from_json(av)?;
            let w: Mat<T> = matrix_input(wv)?;
            match side {
                Side::L1 => (build_l1(&p, &v, &w)?, "build_l1"),
                Side::L2 => (build_l2(&p, &v, &w)?, "build_l2"),
            }
        }
        _ => unreachable!("clap requires both --ansatz and --w"),
    };
    Ok(pretty(with_source(ansatz_to_json(&l), source), true))
}

fn membership_json<T: Scalar>(m: &Membership<T>) -> Value {
    match m {
        Membership::Member(v) => {
            json!({ "member": true, "degenerate": false, "ansatz": vector_to_json(v) })
        }
        Membership::NotMember => json!({ "member": false, "degenerate": false, "ansatz": null }),
        Membership::Degenerate => json!({ "member": true, "degenerate": true, "ansatz": null }),
    }
}

fn check<T: Exact>(lv: &Value, pv: &Value, strong: bool, glin: Option<bool>, tol: Tol) -> Res<Outcome> {
    let l: Pencil<T> = pencil_from_json(lv)?;
    let p: MatPoly<T> = poly_from_json(pv)?;
    let (m, n, k) = (p.rows(), p.cols(), p.grade());
    let glin_shape = l.rows() == k * m && l.cols() == k * n;
    let glin = glin.unwrap_or(glin_shape);
    let le = l.map_field(|x| x.exact());
    let pe = p.map_field(|x| x.exact());
    let verdict = if glin { check_g_linearization(&le, &pe, strong)? } else { check_linearization(&le, &pe, strong)? };
    let mut membership = json!({ "l1": null, "l2": null });
    let mut zr = Value::Null;
    if glin_shape && k >= 2 {
        let m1 = ansatz_membership(&l, &p, Side::L1, tol)?;
        let m2 = ansatz_membership(&l, &p, Side::L2, tol)?;
        membership = json!({ "l1": membership_json(&m1), "l2": membership_json(&m2) });
        let member = if kind(lv) == Some("ansatz_pencil") {
            Some(ansatz_from_json::<T>(lv)?)
        } else {
            [(m1, Side::L1), (m2, Side::L2)].into_iter().find_map(|(mm, side)| match mm {
                Membership::Member(v) if v.iter().any(|x| !x.is_zero()) => {
                    Some(AnsatzPencil { pencil: l.clone(), side, ansatz: v, m, n, k })
                }
                _ => None,
            })
        };
        if let Some(a) = member {
            let r = z_rank(&a, tol)?;
            let full = r == (k - 1) * m.min(n);
            zr = json!({ "side": a.side, "z_rank": r, "full": full });
        }
    }
    let ok = verdict.holds;
    Ok(pretty(
        json!({
            "kind": "check_report",
            "field": T::FIELD.name(),
            "mode": if glin { "glin" } else { "lin" },
            "strong": strong,
            "verdict": verdict,
            "membership": membership,
            "z_rank": zr,
            "exact_arithmetic": true,
        }),
        ok,
    ))
}

fn trim_cmd<T: Scalar>(lv: &Value, dv: Option<&Value>, tol: Tol) -> Res<Outcome> {
    if kind(lv) != Some("ansatz_pencil") {
        return Err(Failure::schema("trim expects an ansatz_pencil (see `glinear build`)"));
    }
    let l: AnsatzPencil<T> = ansatz_from_json(lv)?;
    let d: Option<Mat<T>> = dv.map(matrix_input).transpose()?;
    let tr = trim(&l, d.as_ref(), tol)?;
    Ok(pretty(with_source(trim_to_json(&tr), "trim"), true))
}

fn solve_exact(pv: &Value, tol: Tol) -> Res<Outcome> {
    let p: MatPoly<Rat> = poly_from_json(pv)?;
    let es = complete_eigenstructure(&p, tol)?;
    let right = minimal_basis(&p, BasisSide::Right, tol)?;
    let left = minimal_basis(&p, BasisSide::Left, tol)?;
    let ok = es.index_sum_consistent();
    let mut v = eig_to_json(&es);
    v["field"] = json!("rational");
    v["right_basis"] = basis_to_json(&right);
    v["left_basis"] = basis_to_json(&left);
    Ok(pretty(v, ok))
}

fn solve_float(pv: &Value, tol: Tol) -> Res<Outcome> {
    let p: MatPoly<f64> = poly_from_json(pv)?;
    let nrank = p.normal_rank(tol);
    let (right, r_inc) = float_indices(&p, BasisSide::Right, tol);
    let (left, l_inc) = float_indices(&p, BasisSide::Left, tol);
    let spectrum = if p.rows() == p.cols() && nrank == p.cols() {
        let s = solve_regular(&p, tol)?;
        json!({
            "finite": s.finite.iter().map(|&(re, im, mult)| json!({ "re": re, "im": im, "multiplicity": mult })).collect::<Vec<_>>(),
            "infinite": s.infinite,
            "shift": s.shift,
        })
    } else {
        Value::Null
    };
    Ok(pretty(
        json!({
            "kind": "float_eigenstructure",
            "field": "float64",
            "nrank": nrank,
            "grade": p.grade(),
            "right_indices": right,
            "left_indices": left,
            "inconclusive": r_inc || l_inc,
            "spectrum": spectrum,
        }),
        true,
    ))
}

fn recover<T: Scalar>(lv: &Value, pv: &Value, mode: RecoveryMode, side: BasisArg, tol: Tol) -> Res<Outcome> {
    let p: MatPoly<T> = poly_from_json(pv)?;
    let member: Option<AnsatzPencil<T>>;
    let trimmed: Option<TrimResult<T>>;
    let source = match (mode, kind(lv)) {
        (RecoveryMode::GlinL1 | RecoveryMode::GlinL2, Some("ansatz_pencil")) => {
            member = Some(ansatz_from_json(lv)?);
            Source::Member(member.as_ref().expect("just set"))
        }
        (RecoveryMode::TrimmedL1 | RecoveryMode::TrimmedL2, Some("trim_result")) => {
            trimmed = Some(trim_from_json(lv)?);
            Source::Trimmed(trimmed.as_ref().expect("just set"))
        }
        (RecoveryMode::TrimmedL1 | RecoveryMode::TrimmedL2, Some("ansatz_pencil")) => {
            trimmed = Some(trim(&ansatz_from_json(lv)?, None, tol)?);
            Source::Trimmed(trimmed.as_ref().expect("just set"))
        }
        _ => return Err(Failure::schema("recover expects an ansatz_pencil or a trim_result matching --mode")),
    };
    let get = |s: BasisSide| -> Res<Value> { Ok(basis_to_json(&recover_minimal(source.clone(), &p, s, mode, tol)?)) };
    let right = if side != BasisArg::Left { get(BasisSide::Right)? } else { Value::Null };
    let left = if side != BasisArg::Right { get(BasisSide::Left)? } else { Value::Null };
    let mode_name = match mode {
        RecoveryMode::GlinL1 => "glin_l1",
        RecoveryMode::GlinL2 => "glin_l2",
        RecoveryMode::TrimmedL1 => "trimmed_l1",
        RecoveryMode::TrimmedL2 => "trimmed_l2",
    };
    Ok(pretty(
        json!({ "kind": "recovery", "field": T::FIELD.name(), "mode": mode_name, "right": right, "left": left }),
        true,
    ))
}

fn load_float<T: Scalar>(pv: &Value, tv: &Value) -> Res<(MatPoly<f64>, TrimResult<f64>)> {
    let p: MatPoly<T> = poly_from_json(pv)?;
    let tr: TrimResult<T> = trim_from_json(tv)?;
    Ok((p.to_float(), tr.to_float()))
}

fn backward(
    p: &MatPoly<f64>,
    tr: &TrimResult<f64>,
    eps: f64,
    trials: usize,
    seed: u64,
    factor: f64,
    tol: Tol,
) -> Res<Outcome> {
    let reports = run_experiment(p, tr, eps, trials, seed, tol)?;
    let mut text = String::new();
    for r in &reports {
        let mut v = serde_json::to_value(r).map_err(glinear::Error::from)?;
        v["kind"] = json!("perturb_report");
        text.push_str(&v.to_string());
        text.push('\n');
    }
    let summary = summarize(&reports);
    let ok = summary.all_bounds_hold && summary.all_dual_bounds_ok && summary.indices_preserved;
    let opt = optimality_check(tr, p, factor);
    let mut s = serde_json::to_value(&summary).map_err(glinear::Error::from)?;
    s["kind"] = json!("backward_summary");
    s["epsilon_fraction"] = json!(eps);
    s["seed"] = json!(seed);
    s["optimal_constant"] = json!(optimal_constant(tr.k, tr.n));
    s["optimality"] = serde_json::to_value(&opt).map_err(glinear::Error::from)?;
    text.push_str(&s.to_string());
    text.push('\n');
    Ok(Outcome { text, code: if ok { 0 } else { 3 } })
}

fn lemma_check(k: usize, n: usize) -> Res<Outcome> {
    const MATCH_TOL: f64 = 1e-12;
    let mut rows = Vec::new();
    let mut ok = true;
    for which in [ConvIndex::Square, ConvIndex::Wide] {
        let (formula, svd) = sigma_min_tau(k, n, which)?;
        let diff = (formula - svd).abs();
        let hit = diff <= MATCH_TOL;
        ok &= hit;
        rows.push(json!({
            "j": which.j(k),
            "formula": formula,
            "formula_6dp": format!("{formula:.6}"),
            "svd": svd,
            "abs_diff": diff,
            "match": hit,
        }));
    }
    // The closed form for the smallest eigenvalue of T̂_{k−1} needs k >= 3.
    let t_hat = if k >= 3 {
        let computed = AppendixMatrices::smallest_eigenvalue(&AppendixMatrices::t_hat(k - 1));
        let predicted = AppendixMatrices::predicted_t_hat_min(k);
        let hit = (computed - predicted).abs() <= MATCH_TOL;
        ok &= hit;
        json!({ "computed": computed, "predicted": predicted, "match": hit })
    } else {
        Value::Null
    };
    Ok(pretty(json!({ "kind": "lemma_check", "k": k, "n": n, "rows": rows, "t_hat_min": t_hat, "pass": ok }), ok))
}
