use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{Method, ResultRow};
use crate::error::Result;
use crate::CHEMICAL_ACCURACY;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: Method,
    pub rows: usize,
    pub failed: usize,
    pub mean_parameters: Option<f64>,
    pub mean_depth: Option<f64>,
    /// Mean of `|E − E_FCI|`.
    pub mean_abs_error: Option<f64>,
    pub max_abs_error: Option<f64>,
    pub within_chemical_accuracy: usize,
    pub mean_wall_time: f64,
}

/// Relative savings of an ansatz method against the baseline: `(base − method) / base`, in percent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reduction {
    pub method: Method,
    pub parameters_percent: Option<f64>,
    pub depth_percent: Option<f64>,
    /// `base / method` mean wall time.
    pub speedup: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub methods: Vec<MethodSummary>,
    pub baseline: Method,
    pub reductions: Vec<Reduction>,
}

fn mean(xs: impl Iterator<Item = f64>) -> Option<f64> {
    let (n, s) = xs.fold((0usize, 0.0), |(n, s), x| (n + 1, s + x));
    (n > 0).then(|| s / n as f64)
}

pub fn summarize(rows: &[ResultRow]) -> ScanSummary {
    let mut by_method: BTreeMap<Method, Vec<&ResultRow>> = BTreeMap::new();
    for r in rows {
        by_method.entry(r.method).or_default().push(r);
    }
    let methods: Vec<MethodSummary> = by_method
        .iter()
        .map(|(&method, rs)| {
            let ok: Vec<&&ResultRow> = rs.iter().filter(|r| r.succeeded()).collect();
            let errors: Vec<f64> = ok.iter().filter_map(|r| r.error.map(f64::abs)).collect();
            MethodSummary {
                method,
                rows: rs.len(),
                failed: rs.len() - ok.len(),
                mean_parameters: mean(ok.iter().filter_map(|r| r.n_parameters.map(|n| n as f64))),
                mean_depth: mean(ok.iter().filter_map(|r| r.depth.map(|d| d as f64))),
                mean_abs_error: mean(errors.iter().copied()),
                max_abs_error: errors.iter().copied().reduce(f64::max),
                within_chemical_accuracy: errors.iter().filter(|e| **e < CHEMICAL_ACCURACY).count(),
                mean_wall_time: mean(rs.iter().map(|r| r.wall_time)).unwrap_or(0.0),
            }
        })
        .collect();
    let baseline = Method::Adapt(2);
    let base = methods.iter().find(|m| m.method == baseline);
    let reductions = match base {
        None => Vec::new(),
        Some(b) => methods
            .iter()
            .filter(|m| m.method != baseline && !matches!(m.method, Method::Hf | Method::Fci))
            .map(|m| Reduction {
                method: m.method,
                parameters_percent: percent(b.mean_parameters, m.mean_parameters),
                depth_percent: percent(b.mean_depth, m.mean_depth),
                speedup: (m.mean_wall_time > 0.0).then(|| b.mean_wall_time / m.mean_wall_time),
            })
            .collect(),
    };
    ScanSummary { methods, baseline, reductions }
}

fn percent(base: Option<f64>, value: Option<f64>) -> Option<f64> {
    match (base, value) {
        (Some(b), Some(v)) if b != 0.0 => Some(100.0 * (b - v) / b),
        _ => None,
    }
}

/// Columns: molecule, bond_length, method, energy, n_parameters, depth,
/// fci_energy, error, converged, wall_time, note.
pub fn write_rows_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_rows_csv<R: Read>(input: R) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_reader(input);
    let rows = r.deserialize().collect::<std::result::Result<Vec<ResultRow>, _>>()?;
    Ok(rows)
}

/// Wide table for plotting: `bond_length`, then `energy_<m>`, `error_<m>`
/// and `n_parameters_<m>` for each method in `methods`. Missing cells are empty.
pub fn write_plot_csv<W: Write>(rows: &[ResultRow], methods: &[Method], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["bond_length".to_string()];
    for m in methods {
        header.push(format!("energy_{m}"));
        header.push(format!("error_{m}"));
        header.push(format!("n_parameters_{m}"));
    }
    w.write_record(&header)?;
    let mut geometries: Vec<(String, Option<f64>)> = Vec::new();
    for r in rows {
        let key = (r.molecule.clone(), r.bond_length);
        if !geometries.contains(&key) {
            geometries.push(key);
        }
    }
    let fmt = |x: Option<f64>| x.map(|v| format!("{v:?}")).unwrap_or_default();
    for (mol, bond) in geometries {
        let mut rec = vec![fmt(bond)];
        for m in methods {
            let r = rows.iter().find(|r| r.molecule == mol && r.bond_length == bond && r.method == *m);
            rec.push(fmt(r.and_then(|r| r.energy)));
            rec.push(fmt(r.and_then(|r| r.error)));
            rec.push(r.and_then(|r| r.n_parameters).map(|n| n.to_string()).unwrap_or_default());
        }
        w.write_record(&rec)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
