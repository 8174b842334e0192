//! The subcommands, as functions from a parsed document to a result document.

use std::path::Path;

use cvlqr::lqr::{gain_from_solution, relative_difference, AntilinearLqr};
use cvlqr::riccati::{normal_riccati_residual, RiccatiSolution};
use cvlqr::timedelay::{closed_loop_radius, simulate_delay};
use cvlqr::{
    anti_riccati_residual, bimatrix_riccati_residual, build_normal_data, check_antilinear, check_complex,
    cross_validate_antilinear, lift_problem, lqr_antilinear, lqr_complex_observed, solve_delay_lqr_observed,
    AntilinearMethod, AntilinearSystem, Bimatrix, BimatrixRiccatiIteration, CMat, ComplexLinearSystem, CostWeights,
    HermitianBimatrix, PbhReport, SolverOptions, TraceRow,
};
use serde_json::{json, Map, Value};

use crate::doc::{self, enc_complex, enc_real, enc_real_vec, FileOptions, InputDocument, Problem};
use crate::error::{CliError, CliResult, EXIT_NOT_STABILIZABLE, EXIT_OK};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MethodChoice {
    Bimatrix,
    Anti,
    Normal,
    All,
}

impl MethodChoice {
    fn parse(s: &str) -> CliResult<Self> {
        match s {
            "bimatrix" => Ok(Self::Bimatrix),
            "anti" => Ok(Self::Anti),
            "normal" => Ok(Self::Normal),
            "all" => Ok(Self::All),
            other => Err(CliError::field("options.method", format!("unknown method `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Flags {
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub trace: bool,
    pub horizon: Option<usize>,
    /// Record the Riccati iterate with this index (the run continues at least that long).
    pub snapshot: Option<usize>,
    pub method: Option<MethodChoice>,
}

/// A CSV file written next to the result document.
#[derive(Debug, Clone, PartialEq)]
pub struct Sidecar {
    /// File name suffix, e.g. `trace` for `<stem>_trace.csv`.
    pub suffix: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Sidecar {
    pub fn to_csv(&self) -> CliResult<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Write {
            path: format!("<{} csv>", self.suffix).into(),
            source: std::io::Error::other(e),
        };
        w.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            w.write_record(row).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Write {
            path: format!("<{} csv>", self.suffix).into(),
            source: std::io::Error::other(e.to_string()),
        })?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub document: Value,
    /// Human-readable lines.
    pub summary: Vec<String>,
    pub sidecars: Vec<Sidecar>,
    pub exit_code: i32,
}

fn solver_options(file: &FileOptions, flags: &Flags) -> CliResult<SolverOptions> {
    let mut opts = file.solver();
    if let Some(t) = flags.tol {
        opts.tol = t;
    }
    if let Some(m) = flags.max_iter {
        opts.max_iter = m;
    }
    opts.record_trace = flags.trace;
    if let Some(k) = flags.snapshot {
        opts.min_iter = k;
    }
    opts.validate()?;
    Ok(opts)
}

fn options_doc(opts: &SolverOptions) -> Value {
    json!({
        "tol": opts.tol,
        "max_iter": opts.max_iter,
        "divergence_bound": opts.divergence_bound,
        "residual_factor": opts.residual_factor,
    })
}

fn trace_sidecar(suffix: &str, trace: &[TraceRow]) -> Sidecar {
    Sidecar {
        suffix: suffix.to_string(),
        header: vec!["iter".into(), "residual".into(), "step".into()],
        rows: trace
            .iter()
            .map(|r| {
                vec![
                    r.iteration.to_string(),
                    format!("{:e}", r.residual),
                    format!("{:e}", r.step),
                ]
            })
            .collect(),
    }
}

fn base_document(command: &str, input: &InputDocument, opts: &SolverOptions) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("kind".into(), json!(input.problem.kind()));
    m.insert("options".into(), options_doc(opts));
    m.insert("input".into(), input.raw.clone());
    m
}

fn wrong_kind(command: &str, got: &str, want: &str) -> CliError {
    CliError::field("kind", format!("{command} expects kind `{want}`, found `{got}`"))
}

struct Observed {
    snapshot_at: Option<usize>,
    snapshot: Option<HermitianBimatrix>,
    max_deviation: f64,
}

impl Observed {
    fn new(snapshot_at: Option<usize>) -> Self {
        Self {
            snapshot_at,
            snapshot: None,
            max_deviation: 0.0,
        }
    }

    fn observe(&mut self, k: usize, p: &HermitianBimatrix) {
        self.max_deviation = self.max_deviation.max(p.correction());
        if self.snapshot_at == Some(k) {
            self.snapshot = Some(p.clone());
        }
    }

    fn document(&self) -> Option<Value> {
        let k = self.snapshot_at?;
        let p = self.snapshot.as_ref()?;
        Some(json!({ "k": k, "p1": enc_complex(p.p1()), "p2": enc_complex(p.p2()) }))
    }
}

fn solution_fields(m: &mut Map<String, Value>, sol: &RiccatiSolution) {
    m.insert("residual".into(), json!(sol.residual));
    m.insert("iterations".into(), json!(sol.iterations));
}

// -- solve-complex --------------------------------------------------------------

pub fn solve_complex(input: &InputDocument, flags: &Flags) -> CliResult<Outcome> {
    let Problem::Complex { system, weights, x0 } = &input.problem else {
        return Err(wrong_kind("solve-complex", input.problem.kind(), "complex"));
    };
    let opts = solver_options(&input.options, flags)?;
    require_stabilizable(&input.problem)?;
    let mut obs = Observed::new(flags.snapshot);
    let res = lqr_complex_observed(system, weights, &opts, |k, p| obs.observe(k, p))?;
    let mut d = base_document("solve-complex", input, &opts);
    d.insert("method".into(), json!("bimatrix"));
    d.insert("p1".into(), enc_complex(res.p().p1()));
    d.insert("p2".into(), enc_complex(res.p().p2()));
    d.insert("k1".into(), enc_complex(res.gain.k1()));
    d.insert("k2".into(), enc_complex(res.gain.k2()));
    solution_fields(&mut d, &res.solution);
    d.insert("spectral_radius".into(), json!(res.closed_loop_radius));
    d.insert("max_structure_deviation".into(), json!(obs.max_deviation));
    let mut summary = vec![
        format!(
            "converged in {} iterations, residual {:.3e}",
            res.solution.iterations, res.solution.residual
        ),
        format!("closed-loop spectral radius {:.6}", res.closed_loop_radius),
    ];
    if let Some(x0) = x0 {
        let j = res.jmin(x0)?;
        d.insert("jmin".into(), json!(j));
        summary.push(format!("Jmin = {j:.10}"));
    }
    if let Some(s) = obs.document() {
        d.insert("snapshot".into(), s);
    }
    let sidecars = res
        .solution
        .trace
        .as_deref()
        .map(|t| vec![trace_sidecar("trace", t)])
        .unwrap_or_default();
    Ok(Outcome {
        document: Value::Object(d),
        summary,
        sidecars,
        exit_code: EXIT_OK,
    })
}

// -- solve-antilinear -----------------------------------------------------------

fn antilinear_block(lqr: &AntilinearLqr, x0: Option<&cvlqr::CVec>) -> CliResult<Value> {
    let mut m = Map::new();
    m.insert("p".into(), enc_complex(&lqr.p));
    m.insert("k1".into(), enc_complex(&lqr.k1));
    if lqr.method == AntilinearMethod::Bimatrix {
        m.insert("p2".into(), enc_complex(lqr.solution.p.p2()));
    }
    solution_fields(&mut m, &lqr.solution);
    m.insert("spectral_radius".into(), json!(lqr.closed_loop_radius));
    if let Some(x0) = x0 {
        m.insert("jmin".into(), json!(lqr.jmin(x0)?));
    }
    Ok(Value::Object(m))
}

pub fn solve_antilinear(input: &InputDocument, flags: &Flags) -> CliResult<Outcome> {
    let Problem::Antilinear { system, weights, x0 } = &input.problem else {
        return Err(wrong_kind("solve-antilinear", input.problem.kind(), "antilinear"));
    };
    if flags.snapshot.is_some() {
        return Err(
            cvlqr::Error::InvalidOptions("--snapshot is supported by solve-complex and solve-delay".into()).into(),
        );
    }
    let method = match (flags.method, input.options.method.as_deref()) {
        (Some(m), _) => m,
        (None, Some(s)) => MethodChoice::parse(s)?,
        (None, None) => MethodChoice::Normal,
    };
    let opts = solver_options(&input.options, flags)?;
    require_stabilizable(&input.problem)?;
    let mut d = base_document("solve-antilinear", input, &opts);
    let mut results = Map::new();
    let mut summary = Vec::new();
    let mut sidecars = Vec::new();
    let single = |m: AntilinearMethod| -> CliResult<AntilinearLqr> { Ok(lqr_antilinear(system, weights, &opts, m)?) };
    let routes: Vec<AntilinearLqr> = match method {
        MethodChoice::Bimatrix => vec![single(AntilinearMethod::Bimatrix)?],
        MethodChoice::Anti => vec![single(AntilinearMethod::Anti)?],
        MethodChoice::Normal => vec![single(AntilinearMethod::Normal)?],
        MethodChoice::All => {
            let cv = cross_validate_antilinear(system, weights, &opts)?;
            d.insert(
                "discrepancies".into(),
                json!({
                    "p1_vs_anti": cv.p1_vs_anti,
                    "p1_vs_normal": cv.p1_vs_normal,
                    "anti_vs_normal": cv.anti_vs_normal,
                    "p2_relative": cv.p2_relative,
                    "gain_bimatrix_vs_anti": cv.gain_bimatrix_vs_anti,
                    "gain_bimatrix_vs_normal": cv.gain_bimatrix_vs_normal,
                    "gain_anti_vs_normal": cv.gain_anti_vs_normal,
                    "jmin_bimatrix_vs_anti": cv.jmin_bimatrix_vs_anti,
                    "jmin_anti_vs_normal": cv.jmin_anti_vs_normal,
                }),
            );
            summary.push("discrepancy (relative)      value".into());
            for (name, v) in [
                ("P1 vs P_A", cv.p1_vs_anti),
                ("P1 vs P_N", cv.p1_vs_normal),
                ("P_A vs P_N", cv.anti_vs_normal),
                ("|P2| / |P1|", cv.p2_relative),
                ("gain bimatrix vs anti", cv.gain_bimatrix_vs_anti),
                ("gain bimatrix vs normal", cv.gain_bimatrix_vs_normal),
                ("gain anti vs normal", cv.gain_anti_vs_normal),
                ("Jmin bimatrix vs anti", cv.jmin_bimatrix_vs_anti),
                ("Jmin anti vs normal", cv.jmin_anti_vs_normal),
            ] {
                summary.push(format!("{name:<27} {v:.3e}"));
            }
            let bimatrix = cv.bimatrix;
            let b = AntilinearLqr {
                method: AntilinearMethod::Bimatrix,
                k1: bimatrix.gain.k1().clone(),
                p: bimatrix.p().p1().clone(),
                solution: bimatrix.solution,
                closed_loop_radius: bimatrix.closed_loop_radius,
            };
            vec![b, cv.anti, cv.normal]
        }
    };
    let mut iterations = Map::new();
    for r in &routes {
        let name = r.method.name();
        results.insert(name.into(), antilinear_block(r, x0.as_ref())?);
        iterations.insert(name.into(), json!(r.solution.iterations));
        summary.push(format!(
            "{name}: {} iterations, residual {:.3e}, spectral radius {:.6}",
            r.solution.iterations, r.solution.residual, r.closed_loop_radius
        ));
        if let Some(t) = r.solution.trace.as_deref() {
            let suffix = if routes.len() == 1 {
                "trace".to_string()
            } else {
                format!("{name}_trace")
            };
            sidecars.push(trace_sidecar(&suffix, t));
        }
    }
    d.insert("method".into(), json!(format!("{method:?}").to_lowercase()));
    d.insert("results".into(), Value::Object(results));
    d.insert("iterations".into(), Value::Object(iterations));
    Ok(Outcome {
        document: Value::Object(d),
        summary,
        sidecars,
        exit_code: EXIT_OK,
    })
}

// -- solve-delay ----------------------------------------------------------------

pub fn solve_delay(input: &InputDocument, flags: &Flags) -> CliResult<Outcome> {
    let Problem::Delay { system: ds, initial } = &input.problem else {
        return Err(wrong_kind("solve-delay", input.problem.kind(), "delay"));
    };
    let opts = solver_options(&input.options, flags)?;
    let horizon = flags.horizon.or(input.options.horizon);
    if horizon.is_some() && initial.is_none() {
        return Err(CliError::field(
            "xi0",
            "missing (an initial condition is required for a trajectory)",
        ));
    }
    require_stabilizable(&input.problem)?;
    let mut obs = Observed::new(flags.snapshot);
    let sol = solve_delay_lqr_observed(ds, &opts, |k, p| obs.observe(k, p))?;
    let radius = closed_loop_radius(ds, &sol.feedback)?;
    let mut d = base_document("solve-delay", input, &opts);
    d.insert("feedback".into(), enc_real(&sol.feedback.f));
    d.insert("k1".into(), enc_complex(sol.lqr.gain.k1()));
    d.insert("k2".into(), enc_complex(sol.lqr.gain.k2()));
    d.insert("p1".into(), enc_complex(sol.lqr.p().p1()));
    d.insert("p2".into(), enc_complex(sol.lqr.p().p2()));
    d.insert("l0".into(), enc_real(&sol.l0));
    d.insert("padded".into(), json!(sol.padded));
    if let Some(row) = &sol.slack_row {
        d.insert("slack_row".into(), enc_real_vec(row));
    }
    solution_fields(&mut d, &sol.lqr.solution);
    d.insert("spectral_radius".into(), json!(radius));
    d.insert("max_structure_deviation".into(), json!(obs.max_deviation));
    let mut summary = vec![
        format!(
            "converged in {} iterations, residual {:.3e}",
            sol.lqr.solution.iterations, sol.lqr.solution.residual
        ),
        format!("closed-loop spectral radius {radius:.6}"),
    ];
    if sol.padded {
        summary.push("odd input dimension: padded with a zero input column (slack row dropped)".into());
    }
    let mut sidecars = Vec::new();
    if let Some(ic) = initial {
        let j1 = sol.jmin(ic)?;
        let j2 = sol.jmin_lifted(ic)?;
        d.insert("jmin".into(), json!(j1));
        d.insert("jmin_lifted".into(), json!(j2));
        summary.push(format!("Jmin = {j1:.10} (lifted {j2:.10})"));
        if let Some(h) = horizon {
            let traj = simulate_delay(ds, &sol.feedback, ic, h)?;
            d.insert("trajectory_cost".into(), json!(traj.cost));
            d.insert("horizon".into(), json!(h));
            let (n, p) = (ds.n(), ds.p());
            let mut header = vec!["k".to_string()];
            header.extend((1..=n).map(|i| format!("state_{i}")));
            header.extend((1..=p).map(|i| format!("input_{i}")));
            let rows = traj
                .states
                .iter()
                .enumerate()
                .map(|(k, xi)| {
                    let mut row = vec![k.to_string()];
                    row.extend(xi.iter().map(|x| format!("{x:e}")));
                    match traj.inputs.get(k) {
                        Some(v) => row.extend(v.iter().map(|x| format!("{x:e}"))),
                        None => row.extend(std::iter::repeat_n(String::new(), p)),
                    }
                    row
                })
                .collect();
            sidecars.push(Sidecar {
                suffix: "trajectory".into(),
                header,
                rows,
            });
        }
    }
    if let Some(s) = obs.document() {
        d.insert("snapshot".into(), s);
    }
    if let Some(t) = sol.lqr.solution.trace.as_deref() {
        sidecars.push(trace_sidecar("trace", t));
    }
    Ok(Outcome {
        document: Value::Object(d),
        summary,
        sidecars,
        exit_code: EXIT_OK,
    })
}

// -- check-stabilizability ------------------------------------------------------

pub fn stabilizability_report(problem: &Problem) -> CliResult<PbhReport> {
    Ok(match problem {
        Problem::Complex { system, .. } => check_complex(system),
        Problem::Antilinear { system, .. } => check_antilinear(system),
        Problem::Delay { system, .. } => check_complex(&lift_problem(system)?.system),
    })
}

fn require_stabilizable(problem: &Problem) -> CliResult<()> {
    let rep = stabilizability_report(problem)?;
    if rep.stabilizable {
        return Ok(());
    }
    let eigs: Vec<String> = rep.offending.iter().map(|l| format!("{}{:+}j", l.re, l.im)).collect();
    Err(CliError::NotStabilizable(format!(
        "rank test fails at eigenvalue(s) {}",
        eigs.join(", ")
    )))
}

pub fn check_stabilizability(input: &InputDocument) -> CliResult<Outcome> {
    let rep = stabilizability_report(&input.problem)?;
    let mut summary = vec![format!("stabilizable: {}", rep.stabilizable)];
    for l in &rep.offending {
        summary.push(format!(
            "offending eigenvalue: {}{:+}j (|λ| = {})",
            l.re,
            l.im,
            l.norm()
        ));
    }
    let document = json!({
        "command": "check-stabilizability",
        "kind": input.problem.kind(),
        "stabilizable": rep.stabilizable,
        "offending_eigenvalues": rep.offending.iter().map(|l| json!([l.re, l.im])).collect::<Vec<_>>(),
    });
    Ok(Outcome {
        document,
        summary,
        sidecars: Vec::new(),
        exit_code: if rep.stabilizable {
            EXIT_OK
        } else {
            EXIT_NOT_STABILIZABLE
        },
    })
}

// -- verify ---------------------------------------------------------------------

struct Check {
    name: String,
    residual: f64,
    bound: f64,
}

fn field<'a>(v: &'a Value, name: &str) -> CliResult<&'a Value> {
    v.get(name)
        .ok_or_else(|| CliError::field(name, "missing in result document"))
}

fn hermitian_from(v: &Value, p1: &str, p2: Option<&str>) -> CliResult<HermitianBimatrix> {
    let a = doc::complex_matrix(field(v, p1)?, p1)?;
    let b = match p2 {
        Some(name) => doc::complex_matrix(field(v, name)?, name)?,
        None => CMat::zeros(a.nrows(), a.ncols()),
    };
    Ok(HermitianBimatrix::new(a, b)?)
}

fn bimatrix_check(
    name: &str,
    p: &HermitianBimatrix,
    sys: &ComplexLinearSystem,
    w: &CostWeights,
    tol: f64,
) -> CliResult<Check> {
    Ok(Check {
        name: name.into(),
        residual: bimatrix_riccati_residual(p, sys, w)?,
        bound: 100.0 * tol * p.bnorm(),
    })
}

fn gain_check(
    name: &str,
    doc_v: &Value,
    p: &HermitianBimatrix,
    sys: &ComplexLinearSystem,
    w: &CostWeights,
) -> CliResult<Check> {
    let it = BimatrixRiccatiIteration::new(sys, w)?;
    let k = gain_from_solution(sys, p, &it.s(p)?)?;
    let k1 = doc::complex_matrix(field(doc_v, "k1")?, "k1")?;
    let k2 = doc::complex_matrix(field(doc_v, "k2")?, "k2")?;
    let stored = Bimatrix::new(k1, k2)?;
    let gap = k.k().sub(&stored)?.bnorm();
    Ok(Check {
        name: name.into(),
        residual: gap,
        bound: 1e-9 * k.k().bnorm().max(1.0),
    })
}

fn antilinear_checks(results: &Value, sys: &AntilinearSystem, w: &CostWeights, tol: f64) -> CliResult<Vec<Check>> {
    let obj = results
        .as_object()
        .ok_or_else(|| CliError::field("results", "expected an object"))?;
    let mut out = Vec::new();
    for (name, block) in obj {
        let p = doc::complex_matrix(field(block, "p")?, "p")?;
        let check = match name.as_str() {
            "bimatrix" => bimatrix_check(
                "bimatrix residual",
                &hermitian_from(block, "p", Some("p2"))?,
                &sys.to_complex(),
                w,
                tol,
            )?,
            "anti" => Check {
                name: "anti-Riccati residual".into(),
                residual: anti_riccati_residual(&p, sys, w)?,
                bound: 100.0 * tol * p.norm(),
            },
            "normal" => Check {
                name: "normal Riccati residual".into(),
                residual: normal_riccati_residual(&p, &build_normal_data(sys, w)?)?,
                bound: 100.0 * tol * p.norm(),
            },
            other => return Err(CliError::field("results", format!("unknown method `{other}`"))),
        };
        out.push(check);
        if name != "bimatrix" {
            let k1 = doc::complex_matrix(field(block, "k1")?, "k1")?;
            let reference = antilinear_gain(sys, w, &p)?;
            out.push(Check {
                name: format!("{name} gain"),
                residual: relative_difference(&k1, &reference),
                bound: 1e-9,
            });
        }
    }
    Ok(out)
}

fn antilinear_gain(sys: &AntilinearSystem, w: &CostWeights, p: &CMat) -> CliResult<CMat> {
    let pc = cvlqr::linalg::conj(p);
    let (a2, b2) = (sys.a2(), sys.b2());
    let s = w.r() + b2.adjoint() * &pc * b2;
    Ok(-(cvlqr::linalg::inverse(&s, "R + B2^H P^# B2")? * b2.adjoint() * &pc * a2))
}

pub fn verify(result_path: &Path) -> CliResult<Outcome> {
    let result = doc::read_json(result_path)?;
    let input = doc::parse(field(&result, "input")?.clone())?;
    let tol = field(&result, "options")?
        .get("tol")
        .and_then(Value::as_f64)
        .ok_or_else(|| CliError::field("options.tol", "missing in result document"))?;
    let checks = match &input.problem {
        Problem::Complex { system, weights, .. } => {
            let p = hermitian_from(&result, "p1", Some("p2"))?;
            vec![
                bimatrix_check("bimatrix residual", &p, system, weights, tol)?,
                gain_check("gain", &result, &p, system, weights)?,
            ]
        }
        Problem::Antilinear { system, weights, .. } => {
            antilinear_checks(field(&result, "results")?, system, weights, tol)?
        }
        Problem::Delay { system, .. } => {
            let lifted = lift_problem(system)?;
            let p = hermitian_from(&result, "p1", Some("p2"))?;
            vec![
                bimatrix_check("lifted bimatrix residual", &p, &lifted.system, &lifted.weights, tol)?,
                gain_check("lifted gain", &result, &p, &lifted.system, &lifted.weights)?,
            ]
        }
    };
    let mut summary = Vec::new();
    let mut failed = Vec::new();
    for c in &checks {
        let ok = c.residual <= c.bound;
        summary.push(format!(
            "{}: {:.3e} (bound {:.3e}) {}",
            c.name,
            c.residual,
            c.bound,
            if ok { "ok" } else { "FAILED" }
        ));
        if !ok {
            failed.push(c.name.clone());
        }
    }
    if !failed.is_empty() {
        return Err(CliError::Verification(format!(
            "{} ({})",
            failed.join(", "),
            summary.join("; ")
        )));
    }
    summary.push("verified: true".into());
    let document = json!({
        "command": "verify",
        "kind": input.problem.kind(),
        "verified": true,
        "checks": checks.iter().map(|c| json!({"name": c.name, "value": c.residual, "bound": c.bound})).collect::<Vec<_>>(),
    });
    Ok(Outcome {
        document,
        summary,
        sidecars: Vec::new(),
        exit_code: EXIT_OK,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn input(v: Value) -> InputDocument {
        doc::parse(v).unwrap()
    }

    #[test]
    fn flags_override_file_options() {
        let file = FileOptions {
            tol: Some(1e-8),
            max_iter: Some(10),
            ..Default::default()
        };
        let flags = Flags {
            tol: Some(1e-11),
            snapshot: Some(7),
            ..Default::default()
        };
        let o = solver_options(&file, &flags).unwrap();
        assert_eq!((o.tol, o.max_iter, o.min_iter), (1e-11, 10, 7));
        let too_late = Flags {
            snapshot: Some(11),
            ..Default::default()
        };
        assert!(solver_options(&file, &too_late).is_err());
    }

    #[test]
    fn method_comes_from_file_when_no_flag() {
        let d = input(
            json!({"kind": "antilinear", "a2": [[2]], "b2": [[1]], "q": [[1]], "r": [[1]], "options": {"method": "anti"}}),
        );
        let out = solve_antilinear(&d, &Flags::default()).unwrap();
        assert_eq!(out.document["method"], "anti");
        assert!(out.document["results"].get("anti").is_some());
        let d = input(json!({"kind": "antilinear", "a2": [[2]], "b2": [[1]], "q": [[1]], "r": [[1]]}));
        let out = solve_antilinear(&d, &Flags::default()).unwrap();
        assert_eq!(out.document["method"], "normal");
    }

    #[test]
    fn wrong_kind_is_an_input_error() {
        let d = input(json!({"kind": "antilinear", "a2": [[2]], "b2": [[1]], "q": [[1]], "r": [[1]]}));
        assert_eq!(
            solve_delay(&d, &Flags::default()).unwrap_err().exit_code(),
            crate::error::EXIT_INPUT
        );
    }

    #[test]
    fn stabilizability_outcome() {
        let d = input(json!({"kind": "antilinear", "a2": [[2]], "b2": [[0]], "q": [[1]], "r": [[1]]}));
        let out = check_stabilizability(&d).unwrap();
        assert_eq!(out.exit_code, EXIT_NOT_STABILIZABLE);
        assert_eq!(out.summary[0], "stabilizable: false");
        assert_eq!(out.document["offending_eigenvalues"][0][0], 4.0);
    }

    #[test]
    fn trace_sidecar_rows() {
        let rows = [TraceRow {
            iteration: 0,
            residual: 0.5,
            step: 0.0,
        }];
        let s = trace_sidecar("trace", &rows);
        assert_eq!(s.to_csv().unwrap(), "iter,residual,step\n0,5e-1,0e0\n");
    }
}
