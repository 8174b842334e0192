//! Iteration-count benchmark over a directory of problems or a random suite.

use std::path::Path;
use std::time::Instant;

use cvlqr::random::{antilinear_system, rng, weights};
use cvlqr::{
    check_antilinear, check_complex, lift_problem, lqr_antilinear, lqr_complex, AntilinearMethod, AntilinearSystem,
    ComplexLinearSystem, CostWeights, SolverOptions,
};
use rayon::prelude::*;

use crate::commands::Sidecar;
use crate::doc::{self, Problem};
use crate::error::{CliError, CliResult};

pub const COLUMNS: [&str; 12] = [
    "instance",
    "kind",
    "n",
    "m",
    "status",
    "bimatrix_iters",
    "anti_iters",
    "normal_iters",
    "bimatrix_residual",
    "anti_residual",
    "normal_residual",
    "wall_time_ms",
];

#[derive(Debug, Clone)]
pub enum BenchInput {
    Complex(ComplexLinearSystem, CostWeights),
    Antilinear(AntilinearSystem, CostWeights),
    Invalid(String),
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BenchRow {
    pub instance: String,
    pub kind: String,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub status: String,
    pub bimatrix: Option<(usize, f64)>,
    pub anti: Option<(usize, f64)>,
    pub normal: Option<(usize, f64)>,
    pub wall_time_ms: f64,
}

impl BenchRow {
    fn record(&self) -> Vec<String> {
        let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
        let it = |r: Option<(usize, f64)>| opt(r.map(|x| x.0));
        let res = |r: Option<(usize, f64)>| r.map(|x| format!("{:e}", x.1)).unwrap_or_default();
        vec![
            self.instance.clone(),
            self.kind.clone(),
            opt(self.n),
            opt(self.m),
            self.status.clone(),
            it(self.bimatrix),
            it(self.anti),
            it(self.normal),
            res(self.bimatrix),
            res(self.anti),
            res(self.normal),
            format!("{:.3}", self.wall_time_ms),
        ]
    }
}

/// Antilinear instances drawn like the test suites.
pub fn random_instances(n: usize, m: usize, count: usize, seed: u64) -> Vec<(String, BenchInput)> {
    let mut r = rng(seed);
    (0..count)
        .map(|i| {
            let input = match (antilinear_system(&mut r, n, m, 1.2), weights(&mut r, n, m)) {
                (Ok(sys), Ok(w)) => BenchInput::Antilinear(sys, w),
                (Err(e), _) | (_, Err(e)) => BenchInput::Invalid(e.to_string()),
            };
            (format!("random_{i:04}"), input)
        })
        .collect()
}

/// Every `*.json` file in `dir`, sorted by name. Delay problems are benchmarked through their lifting.
pub fn directory_instances(dir: &Path) -> CliResult<Vec<(String, BenchInput)>> {
    let entries = std::fs::read_dir(dir).map_err(|source| CliError::Read {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut paths: Vec<_> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    Ok(paths
        .into_iter()
        .map(|p| {
            let name = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            let input = match doc::load(&p) {
                Ok(d) => match d.problem {
                    Problem::Complex { system, weights, .. } => BenchInput::Complex(system, weights),
                    Problem::Antilinear { system, weights, .. } => BenchInput::Antilinear(system, weights),
                    Problem::Delay { system, .. } => match lift_problem(&system) {
                        Ok(l) => BenchInput::Complex(l.system, l.weights),
                        Err(e) => BenchInput::Invalid(e.to_string()),
                    },
                },
                Err(e) => BenchInput::Invalid(e.to_string()),
            };
            (name, input)
        })
        .collect())
}

fn run_one(name: &str, input: &BenchInput, opts: &SolverOptions) -> BenchRow {
    let start = Instant::now();
    let mut row = BenchRow {
        instance: name.to_string(),
        ..Default::default()
    };
    match input {
        BenchInput::Invalid(msg) => {
            row.kind = "unknown".into();
            row.status = format!("error: {msg}");
        }
        BenchInput::Complex(sys, w) => {
            row.kind = "complex".into();
            row.n = Some(sys.n());
            row.m = Some(sys.m());
            if !check_complex(sys).stabilizable {
                row.status = "skipped: not stabilizable".into();
            } else {
                match lqr_complex(sys, w, opts) {
                    Ok(l) => {
                        row.bimatrix = Some((l.solution.iterations, l.solution.residual));
                        row.status = "ok".into();
                    }
                    Err(e) => row.status = format!("error: {e}"),
                }
            }
        }
        BenchInput::Antilinear(sys, w) => {
            row.kind = "antilinear".into();
            row.n = Some(sys.n());
            row.m = Some(sys.m());
            if !check_antilinear(sys).stabilizable {
                row.status = "skipped: not stabilizable".into();
            } else {
                row.status = "ok".into();
                for method in [
                    AntilinearMethod::Bimatrix,
                    AntilinearMethod::Anti,
                    AntilinearMethod::Normal,
                ] {
                    match lqr_antilinear(sys, w, opts, method) {
                        Ok(l) => {
                            let cell = Some((l.solution.iterations, l.solution.residual));
                            match method {
                                AntilinearMethod::Bimatrix => row.bimatrix = cell,
                                AntilinearMethod::Anti => row.anti = cell,
                                AntilinearMethod::Normal => row.normal = cell,
                            }
                        }
                        Err(e) => {
                            row.status = format!("error: {} route: {e}", method.name());
                            break;
                        }
                    }
                }
            }
        }
    }
    row.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    row
}

/// Rows come back in input order whatever the thread count.
pub fn run(instances: &[(String, BenchInput)], opts: &SolverOptions) -> Vec<BenchRow> {
    instances
        .par_iter()
        .map(|(name, input)| run_one(name, input, opts))
        .collect()
}

pub fn table(rows: &[BenchRow]) -> Sidecar {
    Sidecar {
        suffix: "bench".into(),
        header: COLUMNS.iter().map(|s| s.to_string()).collect(),
        rows: rows.iter().map(BenchRow::record).collect(),
    }
}

/// `(instances with normal ≤ anti iterations, instances with both counts)`.
pub fn normal_vs_anti(rows: &[BenchRow]) -> (usize, usize) {
    let both: Vec<_> = rows.iter().filter_map(|r| Some((r.anti?.0, r.normal?.0))).collect();
    (both.iter().filter(|(a, n)| n <= a).count(), both.len())
}

pub fn summary(rows: &[BenchRow]) -> Vec<String> {
    let ok = rows.iter().filter(|r| r.status == "ok").count();
    let skipped = rows.iter().filter(|r| r.status.starts_with("skipped")).count();
    let (le, both) = normal_vs_anti(rows);
    vec![
        format!(
            "{} instances: {ok} solved, {skipped} skipped, {} errors",
            rows.len(),
            rows.len() - ok - skipped
        ),
        format!("normal route needed no more iterations than anti route on {le} of {both} antilinear instances"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_are_ordered_and_deterministic() {
        let inst = random_instances(3, 2, 6, 11);
        let opts = SolverOptions::default();
        let a = run(&inst, &opts);
        let b = run(&inst, &opts);
        assert_eq!(a.len(), 6);
        for (i, (x, y)) in a.iter().zip(&b).enumerate() {
            assert_eq!(x.instance, format!("random_{i:04}"));
            assert_eq!(
                (x.bimatrix, x.anti, x.normal, &x.status),
                (y.bimatrix, y.anti, y.normal, &y.status)
            );
        }
    }

    #[test]
    fn table_has_fixed_columns() {
        let rows = run(
            &[("bad".into(), BenchInput::Invalid("nope".into()))],
            &SolverOptions::default(),
        );
        let t = table(&rows);
        assert_eq!(t.header.len(), COLUMNS.len());
        assert_eq!(t.rows[0][4], "error: nope");
        assert_eq!(t.rows[0].len(), COLUMNS.len());
    }
}
