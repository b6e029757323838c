//! CSV, JSON and two-column plot output for sweep rows.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fit::RateFit;
use crate::sweep::SweepRow;

/// One CSV line; column order is fixed by field order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub eps: f64,
    pub p_eps: f64,
    pub q_eps: f64,
    pub v_eps: f64,
    pub lambda: f64,
    pub eta: Option<f64>,
    pub eta_prime: Option<f64>,
    pub eta_tilde: Option<f64>,
    pub eta_dprime: Option<f64>,
    pub th5: f64,
    pub l2: Option<f64>,
    pub h1: Option<f64>,
    pub h1_corrected: Option<f64>,
    pub u_norm: f64,
    pub fitted: Option<f64>,
}

impl From<&SweepRow> for CsvRow {
    fn from(r: &SweepRow) -> Self {
        Self {
            eps: r.eps,
            p_eps: r.numbers.p_eps,
            q_eps: r.numbers.q_eps,
            v_eps: r.numbers.v_eps,
            lambda: r.numbers.lambda_eps,
            eta: r.rates.eta,
            eta_prime: r.rates.eta_prime,
            eta_tilde: r.rates.eta_tilde,
            eta_dprime: r.rates.eta_dprime,
            th5: r.rates.th5_bound,
            l2: r.errors.l2,
            h1: r.errors.h1,
            h1_corrected: r.errors.h1_corrected,
            u_norm: r.errors.u_norm,
            fitted: r.fitted,
        }
    }
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(CsvRow::from(r))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<Vec<CsvRow>> {
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary<'a> {
    pub rows: &'a [SweepRow],
    pub fits: Vec<(String, RateFit)>,
}

pub fn write_json<W: Write>(summary: &Summary<'_>, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, summary)?;
    writeln!(out)?;
    Ok(())
}

/// One `eps value` file per recorded column, ready for gnuplot.
pub fn write_plot_data(rows: &[SweepRow], dir: &Path) -> Result<Vec<String>> {
    std::fs::create_dir_all(dir)?;
    let csv: Vec<CsvRow> = rows.iter().map(CsvRow::from).collect();
    let columns: [(&str, fn(&CsvRow) -> Option<f64>); 9] = [
        ("eta", |r| r.eta),
        ("eta_prime", |r| r.eta_prime),
        ("eta_tilde", |r| r.eta_tilde),
        ("eta_dprime", |r| r.eta_dprime),
        ("th5", |r| Some(r.th5)),
        ("l2", |r| r.l2),
        ("h1", |r| r.h1),
        ("h1_corrected", |r| r.h1_corrected),
        ("u_norm", |r| Some(r.u_norm)),
    ];
    let mut written = Vec::new();
    for (name, get) in columns {
        let lines: Vec<String> = csv
            .iter()
            .filter_map(|r| get(r).map(|v| format!("{:e} {:e}", r.eps, v)))
            .collect();
        if lines.is_empty() {
            continue;
        }
        let mut text = format!("# eps {name}\n");
        for l in lines {
            text.push_str(&l);
            text.push('\n');
        }
        std::fs::write(dir.join(format!("{name}.dat")), text)?;
        written.push(name.to_string());
    }
    Ok(written)
}
