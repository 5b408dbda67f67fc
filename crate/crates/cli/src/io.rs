use std::io::{self, Read, Write};
use std::path::Path;

use serde::Serialize;
use symcount::{CfGrid, EstimateReport, Pmf};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// `start:stop:count`, endpoint-inclusive when `count > 1`.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    let [start, stop, count] = parts[..] else {
        return Err(CliError::Invalid(format!("grid `{text}` is not start:stop:count")));
    };
    let start: f64 = parse_num(start)?;
    let stop: f64 = parse_num(stop)?;
    let count: usize = count
        .trim()
        .parse()
        .map_err(|_| CliError::Invalid(format!("bad grid count `{count}`")))?;
    if count == 0 {
        return Err(CliError::Invalid("grid count must be positive".into()));
    }
    if !start.is_finite() || !stop.is_finite() {
        return Err(CliError::Invalid("grid bounds must be finite".into()));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let step = (stop - start) / (count - 1) as f64;
    Ok((0..count)
        .map(|j| if j + 1 == count { stop } else { start + step * j as f64 })
        .collect())
}

/// `p:w,p:w,...`
pub fn parse_mixture(text: &str) -> Result<Vec<(f64, f64)>, CliError> {
    text.split(',')
        .map(|atom| {
            let (p, w) = atom
                .split_once(':')
                .ok_or_else(|| CliError::Invalid(format!("mixture atom `{atom}` is not p:w")))?;
            Ok((parse_num(p)?, parse_num(w)?))
        })
        .collect()
}

fn parse_num(s: &str) -> Result<f64, CliError> {
    s.trim()
        .parse()
        .map_err(|_| CliError::Invalid(format!("`{s}` is not a number")))
}

pub fn read_input(path: Option<&Path>) -> Result<String, CliError> {
    let mut text = String::new();
    match path {
        Some(p) if p != Path::new("-") => {
            text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Invalid(format!("{}: {e}", p.display())))?;
        }
        _ => {
            io::stdin().read_to_string(&mut text)?;
        }
    }
    Ok(text)
}

/// Newline-delimited counts, or CSV with a `count` column when the first
/// line is a header.
pub fn parse_counts(text: &str) -> Result<Vec<usize>, CliError> {
    let first = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
    if first.contains(',') && first.parse::<usize>().is_err() {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let column = reader
            .headers()
            .map_err(|e| CliError::Invalid(e.to_string()))?
            .iter()
            .position(|h| h == "count")
            .ok_or_else(|| CliError::Invalid("CSV input has no `count` column".into()))?;
        return reader
            .records()
            .enumerate()
            .map(|(i, rec)| {
                let rec = rec.map_err(|e| CliError::Invalid(e.to_string()))?;
                let field = rec.get(column).unwrap_or("");
                field
                    .parse()
                    .map_err(|_| CliError::Invalid(format!("row {}: bad count `{field}`", i + 1)))
            })
            .collect();
    }
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            l.trim()
                .parse()
                .map_err(|_| CliError::Invalid(format!("line {}: bad count `{}`", i + 1, l.trim())))
        })
        .collect()
}

#[derive(Serialize)]
struct PmfJson<'a> {
    p: &'a [f64],
    tail_bound: f64,
    error_estimate: f64,
    admissible: bool,
}

#[derive(Serialize)]
struct CfJson<'a> {
    u: &'a [f64],
    re: Vec<f64>,
    im: Vec<f64>,
}

pub fn write_pmf<W: Write>(out: W, pmf: &Pmf, format: Format) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["s", "p"])?;
            for (s, p) in pmf.values().iter().enumerate() {
                w.serialize((s, p))?;
            }
            w.flush()?;
        }
        Format::Json => write_json(
            out,
            &PmfJson {
                p: pmf.values(),
                tail_bound: *pmf.tail_bound(),
                error_estimate: *pmf.error_estimate(),
                admissible: pmf.admissible(),
            },
        )?,
    }
    Ok(())
}

pub fn write_cf<W: Write>(out: W, cf: &CfGrid, format: Format) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["u", "re", "im"])?;
            for (u, chi) in cf.u.iter().zip(&cf.chi) {
                w.serialize((u, chi.re, chi.im))?;
            }
            w.flush()?;
        }
        Format::Json => write_json(
            out,
            &CfJson {
                u: &cf.u,
                re: cf.chi.iter().map(|c| c.re).collect(),
                im: cf.chi.iter().map(|c| c.im).collect(),
            },
        )?,
    }
    Ok(())
}

pub fn write_counts<W: Write>(mut out: W, counts: &[usize], format: Format) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            for c in counts {
                writeln!(out, "{c}")?;
            }
        }
        Format::Json => write_json(&mut out, &counts)?,
    }
    Ok(())
}

pub fn write_estimate<W: Write>(out: W, report: &EstimateReport, format: Format) -> Result<(), CliError> {
    match format {
        Format::Json => write_json(out, report)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["l", "c_hat", "std_err"])?;
            for (l, (c, se)) in report.c_hat.iter().zip(&report.std_err).enumerate() {
                w.serialize((l + 1, c, se))?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

pub fn write_json<W: Write, T: Serialize + ?Sized>(mut out: W, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut out, value).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(())
}
