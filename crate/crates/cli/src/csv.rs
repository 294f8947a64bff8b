//! CSV emission and re-reading.
//!
//! Numbers are written with 17 significant digits so a write/read cycle is
//! bit-exact; line terminator is LF; singular holes become empty fields.
//! Spectrum columns: `omega_s,re_value,im_value` (mechanical) or
//! `omega_s,f_hz,re_value,im_value` (electrical); `im_value` is the
//! quadrature partner where one exists (absorption, dispersion) and `0` for
//! purely real observables. Trajectory columns: `t,x1,v1,x2,v2`.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use eitsim_core::{Picture, Spectrum64, Trajectory};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CsvError {
    #[error("io: {0}")]
    Io(#[from] io::Error),
    #[error("csv line {line}: {message}")]
    Malformed { line: usize, message: String },
}

/// 17 significant digits: enough to reproduce any f64 exactly.
fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

pub fn write_spectrum_csv<W: Write>(s: &Spectrum64, picture: Picture, out: &mut W) -> io::Result<()> {
    match picture {
        Picture::Mechanical => writeln!(out, "omega_s,re_value,im_value")?,
        Picture::Electrical => writeln!(out, "omega_s,f_hz,re_value,im_value")?,
    }
    for i in 0..s.values.len() {
        let omega = s.grid.value(i);
        let hole = s.holes.contains(&i);
        let re = if hole {
            String::new()
        } else {
            fmt(s.values[i])
        };
        let im = if hole {
            String::new()
        } else {
            match &s.complex_values {
                Some(cv) => fmt(cv[i].im),
                None => fmt(0.0),
            }
        };
        match picture {
            Picture::Mechanical => writeln!(out, "{},{},{}", fmt(omega), re, im)?,
            Picture::Electrical => {
                writeln!(out, "{},{},{},{}", fmt(omega), fmt(omega / TWO_PI), re, im)?
            }
        }
    }
    Ok(())
}

pub fn write_spectrum_csv_file(
    s: &Spectrum64,
    picture: Picture,
    path: &Path,
) -> io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_spectrum_csv(s, picture, &mut w)?;
    w.flush()
}

pub fn spectrum_csv_string(s: &Spectrum64, picture: Picture) -> String {
    let mut buf = Vec::new();
    write_spectrum_csv(s, picture, &mut buf).expect("in-memory write");
    String::from_utf8(buf).expect("ascii csv")
}

/// Writes every `stride`-th state (stride 1 = all of them).
pub fn write_trajectory_csv<W: Write>(
    t: &Trajectory<f64>,
    stride: usize,
    out: &mut W,
) -> io::Result<()> {
    writeln!(out, "t,x1,v1,x2,v2")?;
    let stride = stride.max(1);
    for s in t.states.iter().step_by(stride) {
        writeln!(
            out,
            "{},{},{},{},{}",
            fmt(s.t),
            fmt(s.x1),
            fmt(s.v1),
            fmt(s.x2),
            fmt(s.v2)
        )?;
    }
    Ok(())
}

pub fn write_trajectory_csv_file(
    t: &Trajectory<f64>,
    stride: usize,
    path: &Path,
) -> io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_trajectory_csv(t, stride, &mut w)?;
    w.flush()
}

/// A re-read spectrum file. `re`/`im` are `None` on hole rows.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumCsv {
    pub omegas: Vec<f64>,
    pub f_hz: Option<Vec<f64>>,
    pub re: Vec<Option<f64>>,
    pub im: Vec<Option<f64>>,
}

impl SpectrumCsv {
    pub fn holes(&self) -> usize {
        self.re.iter().filter(|v| v.is_none()).count()
    }
}

pub fn read_spectrum_csv(text: &str) -> Result<SpectrumCsv, CsvError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(CsvError::Malformed {
        line: 1,
        message: "empty file".into(),
    })?;
    let electrical = match header {
        "omega_s,re_value,im_value" => false,
        "omega_s,f_hz,re_value,im_value" => true,
        other => {
            return Err(CsvError::Malformed {
                line: 1,
                message: format!("unrecognized header: {other}"),
            })
        }
    };
    let mut out = SpectrumCsv {
        omegas: Vec::new(),
        f_hz: electrical.then(Vec::new),
        re: Vec::new(),
        im: Vec::new(),
    };
    let expected = if electrical { 4 } else { 3 };
    for (i, line) in lines {
        let line_no = i + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != expected {
            return Err(CsvError::Malformed {
                line: line_no,
                message: format!("expected {expected} fields, got {}", fields.len()),
            });
        }
        let num = |s: &str| -> Result<f64, CsvError> {
            s.parse::<f64>().map_err(|_| CsvError::Malformed {
                line: line_no,
                message: format!("not a number: `{s}`"),
            })
        };
        let opt = |s: &str| -> Result<Option<f64>, CsvError> {
            if s.is_empty() {
                Ok(None)
            } else {
                num(s).map(Some)
            }
        };
        out.omegas.push(num(fields[0])?);
        let (re_idx, im_idx) = if electrical {
            out.f_hz.as_mut().unwrap().push(num(fields[1])?);
            (2, 3)
        } else {
            (1, 2)
        };
        out.re.push(opt(fields[re_idx])?);
        out.im.push(opt(fields[im_idx])?);
    }
    Ok(out)
}

/// A re-read trajectory file.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryCsv {
    pub t: Vec<f64>,
    pub x1: Vec<f64>,
    pub v1: Vec<f64>,
    pub x2: Vec<f64>,
    pub v2: Vec<f64>,
}

pub fn read_trajectory_csv(text: &str) -> Result<TrajectoryCsv, CsvError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(CsvError::Malformed {
        line: 1,
        message: "empty file".into(),
    })?;
    if header != "t,x1,v1,x2,v2" {
        return Err(CsvError::Malformed {
            line: 1,
            message: format!("unrecognized header: {header}"),
        });
    }
    let mut out = TrajectoryCsv {
        t: Vec::new(),
        x1: Vec::new(),
        v1: Vec::new(),
        x2: Vec::new(),
        v2: Vec::new(),
    };
    for (i, line) in lines {
        let line_no = i + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(CsvError::Malformed {
                line: line_no,
                message: format!("expected 5 fields, got {}", fields.len()),
            });
        }
        let mut parsed = [0.0; 5];
        for (slot, field) in parsed.iter_mut().zip(&fields) {
            *slot = field.parse::<f64>().map_err(|_| CsvError::Malformed {
                line: line_no,
                message: format!("not a number: `{field}`"),
            })?;
        }
        out.t.push(parsed[0]);
        out.x1.push(parsed[1]);
        out.v1.push(parsed[2]);
        out.x2.push(parsed[3]);
        out.v2.push(parsed[4]);
    }
    Ok(out)
}
