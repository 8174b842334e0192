//! Library half of the `cvlqr` command-line tool.

pub mod bench;
pub mod commands;
pub mod doc;
pub mod error;

use std::path::{Path, PathBuf};

use commands::Sidecar;
use error::{CliError, CliResult};

/// `<dir>/<stem>_<suffix>.csv`, next to `output` if given, else next to `input`'s stem in the working directory.
pub fn sidecar_path(output: Option<&Path>, input: &Path, suffix: &str) -> PathBuf {
    let (dir, stem) = match output {
        Some(o) => (o.parent().map(Path::to_path_buf).unwrap_or_default(), o.file_stem()),
        None => (PathBuf::new(), input.file_stem()),
    };
    let stem = stem
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "cvlqr".into());
    dir.join(format!("{stem}_{suffix}.csv"))
}

pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_sidecars(sidecars: &[Sidecar], output: Option<&Path>, input: &Path) -> CliResult<Vec<PathBuf>> {
    sidecars
        .iter()
        .map(|s| {
            let path = sidecar_path(output, input, &s.suffix);
            write_file(&path, &s.to_csv()?)?;
            Ok(path)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sidecar_names() {
        assert_eq!(
            sidecar_path(Some(Path::new("out/res.json")), Path::new("in/p.json"), "trace"),
            PathBuf::from("out/res_trace.csv")
        );
        assert_eq!(
            sidecar_path(None, Path::new("in/p.json"), "trajectory"),
            PathBuf::from("p_trajectory.csv")
        );
    }

    #[test]
    fn csv_quoting() {
        let s = Sidecar {
            suffix: "x".into(),
            header: vec!["a".into(), "b".into()],
            rows: vec![vec!["1".into(), "error: x, y".into()]],
        };
        assert_eq!(s.to_csv().unwrap(), "a,b\n1,\"error: x, y\"\n");
    }
}
