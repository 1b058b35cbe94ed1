//! One function per subcommand. Each returns the report and whether its certificates held.

use channel_fidelity::apps::{acin_search, optimize_discrimination, qecc_check};
use channel_fidelity::chanfid::{bound_suite, cf_property_suite, channel_fidelity, EstimatorConfig, PropertyInputs};
use channel_fidelity::channels::kraus_from_choi;
use channel_fidelity::random::Sampler;
use channel_fidelity::{tol, ComplexMatrix, QuantumChannel};
use serde_json::{json, Value};

use crate::document::{
    choi_document, kraus_document, parse_channel, parse_code, parse_ensemble, parse_unitary, read_source,
    unwrap_report, vector_value,
};
use crate::report::{digest, num, RunReport};
use crate::{CliError, CliResult};

#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: RunReport,
    /// False when a certificate or asserted inequality failed; the report is still emitted.
    pub ok: bool,
    pub message: Option<String>,
}

impl Outcome {
    fn ok(report: RunReport) -> Self {
        Self {
            report,
            ok: true,
            message: None,
        }
    }

    fn check(report: RunReport, ok: bool, message: impl Into<String>) -> Self {
        Self {
            report,
            ok,
            message: (!ok).then(|| message.into()),
        }
    }
}

/// A user tolerance may tighten `default` but never loosen it.
pub fn tighten(default: f64, user: Option<f64>) -> CliResult<f64> {
    match user {
        None => Ok(default),
        Some(t) if t.is_nan() || t <= 0.0 => Err(CliError::Input(format!("--tol must be positive, got {t}"))),
        Some(t) if t > default => Err(CliError::Input(format!(
            "--tol {t:e} would loosen the default {default:e}; only tighter tolerances are accepted"
        ))),
        Some(t) => Ok(t),
    }
}

fn load(report: &mut RunReport, label: &str, arg: &str) -> CliResult<Value> {
    let v = read_source(arg)?;
    report.inputs.insert(label.into(), digest(unwrap_report(&v)));
    Ok(v)
}

fn load_channel(report: &mut RunReport, label: &str, arg: &str) -> CliResult<QuantumChannel> {
    parse_channel(&load(report, label, arg)?)
}

fn same_dims(a: &QuantumChannel, b: &QuantumChannel) -> CliResult<()> {
    if (a.dim_in(), a.dim_out()) == (b.dim_in(), b.dim_out()) {
        Ok(())
    } else {
        Err(CliError::Input(format!(
            "channels differ in shape: {} -> {} vs {} -> {}",
            a.dim_in(),
            a.dim_out(),
            b.dim_in(),
            b.dim_out()
        )))
    }
}

pub fn fidelity(a: &str, b: &str, user_tol: Option<f64>) -> CliResult<Outcome> {
    let mut report = RunReport::new("fidelity");
    let s = load_channel(&mut report, "A", a)?;
    let t = load_channel(&mut report, "B", b)?;
    same_dims(&s, &t)?;
    let limit = tighten(tol::ROUTE_RESIDUAL, user_tol)?;
    report.tolerances.insert("route_residual".into(), limit);
    report.tolerances.insert("fidelity_paths".into(), tol::FIDELITY_PATHS);
    let r = channel_fidelity(&s, &t)?;
    report.results = json!({
        "value": num(r.value),
        "route": r.route.label(),
        "residual": num(r.residual),
    });
    let ok = r.residual <= limit;
    Ok(Outcome::check(report, ok, format!("route residual {:e} exceeds {limit:e}", r.residual)))
}

pub fn choi(a: &str, user_tol: Option<f64>) -> CliResult<Outcome> {
    let mut report = RunReport::new("choi");
    let ch = load_channel(&mut report, "A", a)?;
    let limit = tighten(tol::COMPLETENESS, user_tol)?;
    report.tolerances.insert("choi_trace".into(), limit);
    let c = ch.choi();
    let residual = c.trace_residual();
    report.results = json!({
        "document": choi_document(&c),
        "trace_residual": num(residual),
    });
    Ok(Outcome::check(report, residual <= limit, format!("Choi partial-trace residual {residual:e} exceeds {limit:e}")))
}

pub fn kraus(a: &str, user_tol: Option<f64>) -> CliResult<Outcome> {
    let mut report = RunReport::new("kraus");
    let ch = load_channel(&mut report, "A", a)?;
    let limit = tighten(tol::FIDELITY_PATHS, user_tol)?;
    report.tolerances.insert("round_trip".into(), limit);
    report.tolerances.insert("kraus_retention".into(), tol::KRAUS_RETENTION);
    let back = kraus_from_choi(&ch.choi())?;
    let distance = back.choi().matrix().max_diff(ch.choi().matrix());
    report.results = json!({
        "document": kraus_document(&back),
        "kraus_count": back.kraus_count(),
        "choi_distance": num(distance),
    });
    Ok(Outcome::check(report, distance <= limit, format!("round-trip Choi distance {distance:e} exceeds {limit:e}")))
}

fn auxiliary_rank(d_in: usize, d_out: usize, sampler: &mut Sampler) -> usize {
    let lo = d_in.div_ceil(d_out);
    let hi = d_in * d_out;
    lo + sampler.index(hi - lo + 1)
}

pub fn props(a: &str, b: &str, seed: u64) -> CliResult<Outcome> {
    let mut report = RunReport::new("props");
    report.seed = Some(seed);
    let s = load_channel(&mut report, "A", a)?;
    let t = load_channel(&mut report, "B", b)?;
    same_dims(&s, &t)?;
    let (d_in, d_out) = (s.dim_in(), s.dim_out());
    let mut sampler = Sampler::new(seed);
    let random = |d_in: usize, d_out: usize, sampler: &mut Sampler| {
        let rank = auxiliary_rank(d_in, d_out, sampler);
        QuantumChannel::random_with(d_in, d_out, rank, sampler)
    };
    let s2 = random(d_in, d_out, &mut sampler)?;
    let t2 = random(d_in, d_out, &mut sampler)?;
    let r = random(d_out, d_out, &mut sampler)?;
    let u: ComplexMatrix = sampler.haar_unitary(d_out);
    let v: ComplexMatrix = sampler.haar_unitary(d_out);
    let lambda = sampler.uniform_in(0.05, 0.95);
    let inputs = PropertyInputs {
        s: &s,
        t: &t,
        s1: &s,
        s2: &s2,
        t1: &t,
        t2: &t2,
        r: &r,
        u: &u,
        v: &v,
        lambda,
    };
    for (k, v) in [
        ("CF2", 1e-10),
        ("CF3", 1e-9),
        ("CF4", 1e-9),
        ("CF5", 1e-8),
        ("CF6", 1e-9),
        ("CF7", 1e-9),
    ] {
        report.tolerances.insert(k.into(), v);
    }
    let checks = cf_property_suite(&inputs);
    let all = checks.iter().all(|c| c.passed);
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    report.results = json!({
        "lambda": num(lambda),
        "all_passed": all,
        "checks": checks
            .iter()
            .map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail}))
            .collect::<Vec<_>>(),
    });
    Ok(Outcome::check(report, all, format!("failed properties: {}", failed.join(", "))))
}

pub fn bounds(a: &str, b: &str, budget: usize, seed: u64, user_tol: Option<f64>) -> CliResult<Outcome> {
    let mut report = RunReport::new("bounds");
    report.seed = Some(seed);
    let s = load_channel(&mut report, "A", a)?;
    let t = load_channel(&mut report, "B", b)?;
    same_dims(&s, &t)?;
    let slack = tighten(tol::INEQUALITY_SLACK, user_tol)?;
    report.tolerances.insert("inequality_slack".into(), slack);
    let config = EstimatorConfig {
        restarts: budget,
        seed,
        ..EstimatorConfig::default()
    };
    let r = bound_suite(&s, &t, &config)?;
    let rows: Vec<Value> = r
        .inequalities
        .iter()
        .map(|i| {
            json!({
                "name": i.name,
                "lhs": num(i.lhs),
                "rhs": num(i.rhs),
                "satisfied": i.lhs <= i.rhs + slack,
                "asserted": i.asserted,
            })
        })
        .collect();
    let broken: Vec<&str> = r
        .inequalities
        .iter()
        .filter(|i| i.asserted && i.lhs > i.rhs + slack)
        .map(|i| i.name)
        .collect();
    let mut results = json!({
        "fid": num(r.fid),
        "choi_trace_distance": num(r.choi_trace_distance),
        "diamond_lb": num(r.diamond_lb),
        "restarts": budget,
        "steps": config.steps,
        "inequalities": rows,
        "holds": broken.is_empty(),
    });
    if let Some(od) = r.offdiag_lb {
        results["offdiag_lb"] = num(od);
    }
    report.results = results;
    let ok = broken.is_empty();
    Ok(Outcome::check(report, ok, format!("violated inequalities: {}", broken.join(", "))))
}

pub fn ham_discriminate(ensemble: &str, grid: Option<usize>) -> CliResult<Outcome> {
    let mut report = RunReport::new("ham-discriminate");
    let ens = parse_ensemble(&load(&mut report, "ensemble", ensemble)?, grid)?;
    report.tolerances.insert("refinement_width".into(), 1e-9 * ens.horizon());
    let r = optimize_discrimination(&ens)?;
    report.results = json!({
        "t_opt": num(r.t_opt),
        "f_opt": num(r.f_opt),
        "worst_pair": [r.worst_pair.0, r.worst_pair.1],
        "grid_points": ens.grid_points(),
        "curve": r.curve.iter().map(|&(t, f)| json!([num(t), num(f)])).collect::<Vec<_>>(),
    });
    Ok(Outcome::ok(report))
}

pub fn acin(u1: &str, u2: &str, n_max: usize, user_tol: Option<f64>) -> CliResult<Outcome> {
    let mut report = RunReport::new("acin");
    let a = parse_unitary(&load(&mut report, "U1", u1)?)?;
    let b = parse_unitary(&load(&mut report, "U2", u2)?)?;
    let limit = tighten(1e-9, user_tol)?;
    report.tolerances.insert("residual".into(), limit);
    report.tolerances.insert("fidelity_after".into(), limit);
    let r = acin_search(&a, &b, n_max)?;
    report.results = json!({
        "n0": r.n0,
        "theta": num(r.theta),
        "weights": r.weights.iter().map(|&(k, x)| json!([k, num(x)])).collect::<Vec<_>>(),
        "psi": vector_value(r.psi.amplitudes()),
        "residual": num(r.residual),
        "fidelity_after": num(r.fidelity_after),
    });
    let ok = r.residual <= limit && r.fidelity_after <= limit;
    Ok(Outcome::check(
        report,
        ok,
        format!("residual {:e} / fidelity after {:e} exceed {limit:e}", r.residual, r.fidelity_after),
    ))
}

pub fn qecc(code: &str, noise: &str, user_tol: Option<f64>) -> CliResult<Outcome> {
    let mut report = RunReport::new("qecc-check");
    let code = parse_code(&load(&mut report, "code", code)?)?;
    let noise = load_channel(&mut report, "noise", noise)?;
    let limit = tighten(tol::TRACE, user_tol)?;
    report.tolerances.insert("fidelity".into(), limit);
    report.tolerances.insert("leakage".into(), limit);
    report.tolerances.insert("leakage_reject".into(), 1e-6);
    let r = qecc_check(&code, &noise)?;
    let correctable = r.correctable && r.fidelity >= 1.0 - limit && r.leakage <= limit;
    report.results = json!({
        "fidelity": num(r.fidelity),
        "leakage": num(r.leakage),
        "correctable": correctable,
    });
    Ok(Outcome::ok(report))
}

pub fn random_channel(d_in: usize, d_out: usize, rank: usize, seed: u64) -> CliResult<Outcome> {
    let mut report = RunReport::new("random-channel");
    report.seed = Some(seed);
    report.tolerances.insert("completeness".into(), tol::COMPLETENESS);
    let ch = QuantumChannel::random(d_in, d_out, rank, seed)?;
    report.results = json!({
        "document": kraus_document(&ch),
        "completeness_residual": num(ch.completeness_residual()),
    });
    Ok(Outcome::ok(report))
}
