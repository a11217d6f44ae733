mod common;

use gbef_core::pipeline::{
    read_rows_csv, run_method, scan, summarize, write_rows_csv, Method, PipelineConfig, ResultRow,
};
use gbef_core::CHEMICAL_ACCURACY;

#[test]
fn fci_row_is_its_own_reference() {
    let s = common::system_near("h2", 0.7414);
    let row = run_method(&s, Method::Fci, &PipelineConfig::default()).row;
    assert_eq!(row.error, Some(0.0));
    assert!(row.note.is_none());
}

#[test]
fn uccsd_row_on_h4() {
    let s = common::system_near("h4", 0.9);
    let row = run_method(&s, Method::Uccsd, &PipelineConfig::default()).row;
    assert_eq!(row.n_parameters, Some(14));
    assert!(row.depth.unwrap() > 0);
    assert!(row.error.unwrap().abs() < CHEMICAL_ACCURACY);
}

#[test]
fn gbef_row_on_h4() {
    let s = common::system_near("h4", 0.9);
    let run = run_method(&s, Method::Gbef, &PipelineConfig::default());
    assert!(run.row.error.unwrap().abs() < CHEMICAL_ACCURACY);
    assert_eq!(run.row.n_parameters, Some(run.selection.unwrap().kept.len()));
}

#[test]
fn ablation_stays_within_tolerance() {
    let s = common::system_near("h4", 0.5);
    let cfg = PipelineConfig::default();
    let ab = run_method(&s, Method::GbefAblation, &cfg).row;
    let full = run_method(&s, Method::Uccsd, &cfg).row;
    assert!(ab.error.unwrap().abs() < cfg.ablation_tolerance);
    assert!(ab.n_parameters.unwrap() <= full.n_parameters.unwrap());
}

#[test]
fn hartree_fock_scan() {
    let systems = common::systems("h4");
    let rows = scan(&systems, &[Method::Hf], &PipelineConfig::default(), 2).unwrap();
    assert_eq!(rows.len(), 21);
    for (r, f) in rows.iter().zip(common::fixtures("h4")) {
        assert!((r.energy.unwrap() - f.energies.hf).abs() < 1e-8);
        assert_eq!(r.bond_length, Some(f.bond_length));
    }
}

fn without_time(rows: &[ResultRow]) -> String {
    let mut rows = rows.to_vec();
    rows.iter_mut().for_each(|r| r.wall_time = 0.0);
    let mut buf = Vec::new();
    write_rows_csv(&rows, &mut buf).unwrap();
    String::from_utf8(buf).unwrap()
}

#[test]
fn scans_are_reproducible() {
    let systems: Vec<_> = common::systems("h2");
    let methods = [Method::Hf, Method::Gbef, Method::Adapt(2), Method::Fci];
    let a = scan(&systems, &methods, &PipelineConfig::default(), 1).unwrap();
    let b = scan(&systems, &methods, &PipelineConfig::default(), 3).unwrap();
    assert_eq!(a.len(), 5 * methods.len());
    assert_eq!(without_time(&a), without_time(&b));
    let text = without_time(&a);
    assert_eq!(without_time(&read_rows_csv(text.as_bytes()).unwrap()), text);
    let summary = summarize(&a);
    assert!(summary.reductions.iter().any(|r| r.method == Method::Gbef));
}

#[test]
fn failures_are_recorded_per_row() {
    let s = common::system_near("h2", 0.7414);
    let mut cfg = PipelineConfig::default();
    cfg.bfgs.c2 = 2.0;
    let rows = scan(std::slice::from_ref(&s), &[Method::Uccsd, Method::Hf], &cfg, 1).unwrap();
    assert!(rows[0].energy.is_none() && rows[0].note.is_some());
    assert!(rows[1].energy.is_some());
}
