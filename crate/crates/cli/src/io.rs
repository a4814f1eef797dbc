use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use lctb_core::{Complex64, SampledSignal};

use crate::error::CliError;

/// Relative tolerance on the spacing of `t` in a signal file.
pub const STEP_REL_TOL: f64 = 1e-9;

pub fn read_signal(path: &Path) -> Result<SampledSignal, CliError> {
    let file = File::open(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    parse_signal(file, &path.display().to_string())
}

pub fn parse_signal<R: std::io::Read>(reader: R, name: &str) -> Result<SampledSignal, CliError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| CliError::input(format!("{name}: {e}")))?.clone();
    if headers.iter().collect::<Vec<_>>() != ["t", "re", "im"] {
        return Err(CliError::input(format!("{name}: header must be t,re,im, got {}", headers.iter().collect::<Vec<_>>().join(","))));
    }
    let mut ts = Vec::new();
    let mut zs = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CliError::input(format!("{name}: {e}")))?;
        let field = |i: usize| -> Result<f64, CliError> {
            let raw = rec.get(i).unwrap_or("");
            let v: f64 = raw
                .parse()
                .map_err(|_| CliError::input(format!("{name}: row {}: cannot parse '{raw}'", line + 2)))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(CliError::input(format!("{name}: row {}: non-finite value", line + 2)))
            }
        };
        ts.push(field(0)?);
        zs.push(Complex64::new(field(1)?, field(2)?));
    }
    if ts.len() < 2 {
        return Err(CliError::input(format!("{name}: need at least two rows, got {}", ts.len())));
    }
    let step = (ts[ts.len() - 1] - ts[0]) / (ts.len() - 1) as f64;
    if !(step > 0.0) {
        return Err(CliError::input(format!("{name}: t must increase")));
    }
    for (i, w) in ts.windows(2).enumerate() {
        if ((w[1] - w[0]) - step).abs() > STEP_REL_TOL * step {
            return Err(CliError::input(format!("{name}: t is not equispaced near row {}", i + 3)));
        }
    }
    SampledSignal::new(ts[0], step, zs).map_err(CliError::from)
}

pub fn write_signal(path: &Path, s: &SampledSignal) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| CliError::output(path, e))?;
    let mut w = BufWriter::new(file);
    let mut put = || -> std::io::Result<()> {
        writeln!(w, "t,re,im")?;
        for (t, z) in s.iter() {
            writeln!(w, "{t:.16e},{:.16e},{:.16e}", z.re, z.im)?;
        }
        w.flush()
    };
    put().map_err(|e| CliError::output(path, e))
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::numerical(e.to_string()))?;
    std::fs::write(path, text + "\n").map_err(|e| CliError::output(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_exactly() {
        let s = SampledSignal::new(-1.0, 0.1, vec![Complex64::new(1.0 / 3.0, -2.0f64.sqrt()); 21]).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        write_signal(&path, &s).unwrap();
        let back = read_signal(&path).unwrap();
        assert_eq!(back.samples(), s.samples());
        assert!((back.dt() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_files() {
        let bad = [
            "x,re,im\n0,1,0\n1,1,0\n",
            "t,re,im\n0,1,0\n",
            "t,re,im\n0,1,0\n1,abc,0\n",
            "t,re,im\n0,1,0\n1,1,0\n3,1,0\n",
            "t,re,im\n0,1,0\n1,inf,0\n",
            "t,re,im\n1,1,0\n0,1,0\n",
        ];
        for text in bad {
            let err = parse_signal(text.as_bytes(), "mem").unwrap_err();
            assert_eq!(err.exit_code(), 2, "{text:?}");
        }
    }

    #[test]
    fn tolerates_print_rounding_in_t() {
        let text = "t,re,im\n0.1,1,0\n0.2,1,0\n0.30000000000000004,1,0\n0.4,0,0\n";
        let s = parse_signal(text.as_bytes(), "mem").unwrap();
        assert_eq!(s.len(), 4);
    }
}
