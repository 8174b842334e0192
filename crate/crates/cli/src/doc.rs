//! JSON problem and result documents.
//!
//! Complex entries are `[re, im]` pairs (a bare number is read as real);
//! matrices are arrays of rows, vectors plain arrays.

use std::path::Path;

use cvlqr::linalg::c;
use cvlqr::{
    AntilinearSystem, CMat, CVec, ComplexLinearSystem, CostWeights, DelayInitialCondition, DelaySystem, RMat, RVec,
    SolverOptions,
};
use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone)]
pub enum Problem {
    Complex {
        system: ComplexLinearSystem,
        weights: CostWeights,
        x0: Option<CVec>,
    },
    Antilinear {
        system: AntilinearSystem,
        weights: CostWeights,
        x0: Option<CVec>,
    },
    Delay {
        system: DelaySystem,
        initial: Option<DelayInitialCondition>,
    },
}

impl Problem {
    pub fn kind(&self) -> &'static str {
        match self {
            Problem::Complex { .. } => "complex",
            Problem::Antilinear { .. } => "antilinear",
            Problem::Delay { .. } => "delay",
        }
    }
}

/// Solver settings stored in the document's `options` object.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FileOptions {
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub divergence_bound: Option<f64>,
    pub horizon: Option<usize>,
    pub method: Option<String>,
}

impl FileOptions {
    pub fn solver(&self) -> SolverOptions {
        let d = SolverOptions::default();
        SolverOptions {
            tol: self.tol.unwrap_or(d.tol),
            max_iter: self.max_iter.unwrap_or(d.max_iter),
            divergence_bound: self.divergence_bound.or(d.divergence_bound),
            ..d
        }
    }
}

#[derive(Debug, Clone)]
pub struct InputDocument {
    pub problem: Problem,
    pub options: FileOptions,
    pub raw: Value,
}

pub fn read_json(path: &Path) -> CliResult<Value> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load(path: &Path) -> CliResult<InputDocument> {
    parse(read_json(path)?)
}

pub fn parse(raw: Value) -> CliResult<InputDocument> {
    let obj = raw
        .as_object()
        .ok_or_else(|| CliError::field("<root>", "expected a JSON object"))?;
    let kind = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| CliError::field("kind", "missing or not a string"))?;
    let options = parse_options(obj.get("options"))?;
    let problem = match kind {
        "complex" => parse_complex(obj)?,
        "antilinear" => parse_antilinear(obj)?,
        "delay" => parse_delay(obj)?,
        other => {
            return Err(CliError::field(
                "kind",
                format!("unknown kind `{other}` (expected complex, antilinear or delay)"),
            ))
        }
    };
    Ok(InputDocument { problem, options, raw })
}

fn parse_options(v: Option<&Value>) -> CliResult<FileOptions> {
    let Some(v) = v else {
        return Ok(FileOptions::default());
    };
    let obj = v
        .as_object()
        .ok_or_else(|| CliError::field("options", "expected an object"))?;
    let float = |key: &str| -> CliResult<Option<f64>> {
        match obj.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(x) => x
                .as_f64()
                .map(Some)
                .ok_or_else(|| CliError::field(format!("options.{key}"), "expected a number")),
        }
    };
    let count = |key: &str| -> CliResult<Option<usize>> {
        match obj.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(x) => x
                .as_u64()
                .map(|n| Some(n as usize))
                .ok_or_else(|| CliError::field(format!("options.{key}"), "expected a non-negative integer")),
        }
    };
    let method = match obj.get("method") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(CliError::field("options.method", "expected a string")),
    };
    Ok(FileOptions {
        tol: float("tol")?,
        max_iter: count("max_iter")?,
        divergence_bound: float("divergence_bound")?,
        horizon: count("horizon")?,
        method,
    })
}

fn get<'a>(obj: &'a Map<String, Value>, field: &str) -> CliResult<&'a Value> {
    obj.get(field).ok_or_else(|| CliError::field(field, "missing"))
}

fn entry(v: &Value, field: &str) -> CliResult<Complex64> {
    match v {
        Value::Number(n) => Ok(c(n.as_f64().unwrap_or(f64::NAN), 0.0)),
        Value::Array(pair) if pair.len() == 2 => match (pair[0].as_f64(), pair[1].as_f64()) {
            (Some(re), Some(im)) => Ok(c(re, im)),
            _ => Err(CliError::field(field, "complex entries must be [re, im] numbers")),
        },
        _ => Err(CliError::field(field, "entries must be numbers or [re, im] pairs")),
    }
}

fn real_entry(v: &Value, field: &str) -> CliResult<f64> {
    v.as_f64()
        .ok_or_else(|| CliError::field(field, "entries of a real matrix must be numbers"))
}

fn grid<T>(v: &Value, field: &str, f: impl Fn(&Value, &str) -> CliResult<T>) -> CliResult<(usize, usize, Vec<T>)> {
    let rows = v
        .as_array()
        .ok_or_else(|| CliError::field(field, "expected an array of rows"))?;
    if rows.is_empty() {
        return Err(CliError::field(field, "matrix has no rows"));
    }
    let mut ncols = None;
    let mut data = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| CliError::field(field, format!("row {i} is not an array")))?;
        match ncols {
            None => ncols = Some(row.len()),
            Some(n) if n != row.len() => {
                return Err(CliError::field(
                    field,
                    format!("row {i} has {} entries, expected {n}", row.len()),
                ))
            }
            _ => {}
        }
        for x in row {
            data.push(f(x, field)?);
        }
    }
    Ok((rows.len(), ncols.unwrap_or(0), data))
}

pub fn complex_matrix(v: &Value, field: &str) -> CliResult<CMat> {
    let (r, cols, data) = grid(v, field, entry)?;
    Ok(CMat::from_row_slice(r, cols, &data))
}

pub fn real_matrix(v: &Value, field: &str) -> CliResult<RMat> {
    let (r, cols, data) = grid(v, field, real_entry)?;
    Ok(RMat::from_row_slice(r, cols, &data))
}

pub fn complex_vector(v: &Value, field: &str) -> CliResult<CVec> {
    let items = v
        .as_array()
        .ok_or_else(|| CliError::field(field, "expected an array"))?;
    let data = items.iter().map(|x| entry(x, field)).collect::<CliResult<Vec<_>>>()?;
    Ok(CVec::from_vec(data))
}

pub fn real_vector(v: &Value, field: &str) -> CliResult<RVec> {
    let items = v
        .as_array()
        .ok_or_else(|| CliError::field(field, "expected an array"))?;
    let data = items
        .iter()
        .map(|x| real_entry(x, field))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(RVec::from_vec(data))
}

fn shape_check(field: &str, got: (usize, usize), rows: usize, cols: Option<usize>) -> CliResult<()> {
    let ok = got.0 == rows && cols.is_none_or(|c| got.1 == c);
    if ok {
        return Ok(());
    }
    let want = match cols {
        Some(c) => format!("{rows}x{c}"),
        None => format!("{rows} rows"),
    };
    Err(CliError::field(
        field,
        format!("dimension mismatch: expected {want}, found {}x{}", got.0, got.1),
    ))
}

fn optional<'a>(obj: &'a Map<String, Value>, field: &str) -> Option<&'a Value> {
    obj.get(field).filter(|v| !v.is_null())
}

fn weights(obj: &Map<String, Value>, n: usize, m: usize) -> CliResult<CostWeights> {
    let q = complex_matrix(get(obj, "q")?, "q")?;
    shape_check("q", q.shape(), n, Some(n))?;
    let r = complex_matrix(get(obj, "r")?, "r")?;
    shape_check("r", r.shape(), m, Some(m))?;
    CostWeights::new(q, r).map_err(|e| match e {
        cvlqr::Error::InvalidWeights(msg) => CliError::field(if msg.starts_with('R') { "r" } else { "q" }, msg),
        other => other.into(),
    })
}

fn initial_state(obj: &Map<String, Value>, n: usize) -> CliResult<Option<CVec>> {
    let Some(v) = optional(obj, "x0") else {
        return Ok(None);
    };
    let x0 = complex_vector(v, "x0")?;
    if x0.len() != n {
        return Err(CliError::field(
            "x0",
            format!("dimension mismatch: expected {n} entries, found {}", x0.len()),
        ));
    }
    Ok(Some(x0))
}

fn parse_complex(obj: &Map<String, Value>) -> CliResult<Problem> {
    let a1 = complex_matrix(get(obj, "a1")?, "a1")?;
    let n = a1.nrows();
    shape_check("a1", a1.shape(), n, Some(n))?;
    let a2 = match optional(obj, "a2") {
        Some(v) => complex_matrix(v, "a2")?,
        None => CMat::zeros(n, n),
    };
    shape_check("a2", a2.shape(), n, Some(n))?;
    let b1 = complex_matrix(get(obj, "b1")?, "b1")?;
    shape_check("b1", b1.shape(), n, None)?;
    let m = b1.ncols();
    let b2 = match optional(obj, "b2") {
        Some(v) => complex_matrix(v, "b2")?,
        None => CMat::zeros(n, m),
    };
    shape_check("b2", b2.shape(), n, Some(m))?;
    let system = ComplexLinearSystem::from_parts(a1, a2, b1, b2)?;
    Ok(Problem::Complex {
        weights: weights(obj, n, m)?,
        x0: initial_state(obj, n)?,
        system,
    })
}

fn parse_antilinear(obj: &Map<String, Value>) -> CliResult<Problem> {
    let a2 = complex_matrix(get(obj, "a2")?, "a2")?;
    let n = a2.nrows();
    shape_check("a2", a2.shape(), n, Some(n))?;
    let b2 = complex_matrix(get(obj, "b2")?, "b2")?;
    shape_check("b2", b2.shape(), n, None)?;
    let m = b2.ncols();
    let system = AntilinearSystem::new(a2, b2)?;
    Ok(Problem::Antilinear {
        weights: weights(obj, n, m)?,
        x0: initial_state(obj, n)?,
        system,
    })
}

fn parse_delay(obj: &Map<String, Value>) -> CliResult<Problem> {
    let a0 = real_matrix(get(obj, "a0")?, "a0")?;
    let n = a0.nrows();
    shape_check("a0", a0.shape(), n, Some(n))?;
    let ad = real_matrix(get(obj, "ad")?, "ad")?;
    shape_check("ad", ad.shape(), n, Some(n))?;
    let g = real_matrix(get(obj, "g")?, "g")?;
    shape_check("g", g.shape(), n, None)?;
    let p = g.ncols();
    let q0 = real_matrix(get(obj, "q0")?, "q0")?;
    shape_check("q0", q0.shape(), n, Some(n))?;
    let r0 = real_matrix(get(obj, "r0")?, "r0")?;
    shape_check("r0", r0.shape(), p, Some(p))?;
    let system = DelaySystem::new(a0, ad, g, q0, r0).map_err(|e| match e {
        cvlqr::Error::InvalidWeights(msg) => CliError::field(if msg.starts_with("R0") { "r0" } else { "q0" }, msg),
        other => other.into(),
    })?;
    let initial = match (optional(obj, "xi0"), optional(obj, "xi_m1")) {
        (None, None) => None,
        (Some(a), Some(b)) => {
            let xi0 = real_vector(a, "xi0")?;
            let xi_m1 = real_vector(b, "xi_m1")?;
            for (name, v) in [("xi0", &xi0), ("xi_m1", &xi_m1)] {
                if v.len() != n {
                    return Err(CliError::field(
                        name,
                        format!("dimension mismatch: expected {n} entries, found {}", v.len()),
                    ));
                }
            }
            Some(DelayInitialCondition::new(xi0, xi_m1)?)
        }
        (Some(_), None) => return Err(CliError::field("xi_m1", "missing (xi0 given)")),
        (None, Some(_)) => return Err(CliError::field("xi0", "missing (xi_m1 given)")),
    };
    Ok(Problem::Delay { system, initial })
}

// -- encoding -------------------------------------------------------------------

pub fn enc_complex(m: &CMat) -> Value {
    Value::Array(
        m.row_iter()
            .map(|row| Value::Array(row.iter().map(|z| json!([z.re, z.im])).collect()))
            .collect(),
    )
}

pub fn enc_real(m: &RMat) -> Value {
    Value::Array(
        m.row_iter()
            .map(|row| Value::Array(row.iter().map(|&x| json!(x)).collect()))
            .collect(),
    )
}

pub fn enc_complex_vec(v: &CVec) -> Value {
    Value::Array(v.iter().map(|z| json!([z.re, z.im])).collect())
}

pub fn enc_real_vec(v: &RVec) -> Value {
    Value::Array(v.iter().map(|&x| json!(x)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entries_accept_numbers_and_pairs() {
        let m = complex_matrix(&json!([[1, [2.0, -3.0]], [[0, 1], 4.5]]), "a").unwrap();
        assert_eq!(m[(0, 0)], c(1.0, 0.0));
        assert_eq!(m[(0, 1)], c(2.0, -3.0));
        assert_eq!(m[(1, 0)], c(0.0, 1.0));
        assert!(complex_matrix(&json!([[[1, 2, 3]]]), "a").is_err());
        assert!(real_matrix(&json!([[[1, 2]]]), "g").is_err());
        assert!(complex_matrix(&json!([[1, 2], [3]]), "a").is_err());
    }

    #[test]
    fn encoding_round_trips() {
        let m = CMat::from_row_slice(2, 1, &[c(0.1, -2.0), c(3.0, 0.0)]);
        assert_eq!(complex_matrix(&enc_complex(&m), "m").unwrap(), m);
        let v = CVec::from_vec(vec![c(1.0, 2.0), c(-1.0, 0.5)]);
        assert_eq!(complex_vector(&enc_complex_vec(&v), "v").unwrap(), v);
        let r = RMat::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(real_matrix(&enc_real(&r), "r").unwrap(), r);
        let rv = RVec::from_vec(vec![1.5, -2.5]);
        assert_eq!(real_vector(&enc_real_vec(&rv), "v").unwrap(), rv);
    }

    #[test]
    fn errors_name_the_field() {
        let e =
            parse(json!({"kind": "complex", "a1": [[1, 0], [0, 1]], "b1": [[1]], "q": [[1, 0], [0, 1]], "r": [[1]]}))
                .unwrap_err();
        assert!(e.to_string().contains("b1"), "{e}");
        let e = parse(json!({"kind": "delay"})).unwrap_err();
        assert!(e.to_string().contains("a0"), "{e}");
        let e = parse(json!({"kind": "other"})).unwrap_err();
        assert!(e.to_string().contains("unknown kind"));
        assert!(parse(json!([1])).is_err());
    }

    #[test]
    fn options_and_optional_fields() {
        let d = parse(json!({
            "kind": "antilinear", "a2": [[2]], "b2": [[1]], "q": [[1]], "r": [[1]],
            "options": {"tol": 1e-10, "max_iter": 50, "method": "anti"}
        }))
        .unwrap();
        assert_eq!(d.options.tol, Some(1e-10));
        assert_eq!(d.options.solver().max_iter, 50);
        assert_eq!(d.options.method.as_deref(), Some("anti"));
        match d.problem {
            Problem::Antilinear { x0, .. } => assert!(x0.is_none()),
            _ => panic!("wrong kind"),
        }
    }

    #[test]
    fn delay_initial_condition_needs_both_halves() {
        let base =
            json!({"kind": "delay", "a0": [[1]], "ad": [[0]], "g": [[1, 0]], "q0": [[2]], "r0": [[1, 0], [0, 1]]});
        let mut with_one = base.clone();
        with_one["xi0"] = json!([1]);
        assert!(parse(with_one).unwrap_err().to_string().contains("xi_m1"));
        let mut both = base;
        both["xi0"] = json!([1]);
        both["xi_m1"] = json!([2]);
        assert!(matches!(
            parse(both).unwrap().problem,
            Problem::Delay { initial: Some(_), .. }
        ));
    }
}
