//! End-to-end runs: integrals in, energies, parameter counts and depths out.

mod report;

pub use report::{read_rows_csv, summarize, write_plot_csv, write_rows_csv, MethodSummary, Reduction, ScanSummary};

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, GbefError, Result};
use crate::integrals::{build_hamiltonian, MolecularIntegrals, MoleculeFixture};
use crate::operator::{enumerate_excitations, group_spin_adapted, jordan_wigner, ParameterGroup, PauliOperator};
use crate::screening::{ablation_minimize, build_ansatz, screen, sort_truncate, SelectionReport, Thresholds};
use crate::solvers::{adapt_vqe, fci_ground_state, vqe, AdaptConfig, AdaptIteration, BfgsConfig, FciResult};
use crate::statevector::{hartree_fock_bits, AnsatzCircuit, SparseOperator};
use crate::synthesis::{depth, synthesize};
use crate::CHEMICAL_ACCURACY;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Hf,
    Uccsd,
    Gbef,
    GbefAblation,
    /// ADAPT-VQE with `ε = 10^{−m}`.
    Adapt(u32),
    Fci,
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::Hf,
        Method::Uccsd,
        Method::Gbef,
        Method::GbefAblation,
        Method::Adapt(1),
        Method::Adapt(2),
        Method::Adapt(3),
        Method::Fci,
    ];

    /// Parses a comma-separated list such as `HF,GBEF,ADAPT-e2`.
    pub fn parse_list(s: &str) -> Result<Vec<Method>> {
        let mut out: Vec<Method> = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let m: Method = part.parse()?;
            if !out.contains(&m) {
                out.push(m);
            }
        }
        if out.is_empty() {
            return Err(invalid("no methods given"));
        }
        Ok(out)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Hf => f.write_str("HF"),
            Method::Uccsd => f.write_str("UCCSD"),
            Method::Gbef => f.write_str("GBEF"),
            Method::GbefAblation => f.write_str("GBEF-ablation"),
            Method::Adapt(m) => write!(f, "ADAPT-e{m}"),
            Method::Fci => f.write_str("FCI"),
        }
    }
}

impl FromStr for Method {
    type Err = GbefError;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let m = match lower.as_str() {
            "hf" => Method::Hf,
            "uccsd" => Method::Uccsd,
            "gbef" => Method::Gbef,
            "gbef-ablation" => Method::GbefAblation,
            "fci" => Method::Fci,
            other => {
                let exp = other
                    .strip_prefix("adapt-e")
                    .or_else(|| other.strip_prefix("adapt-ε"))
                    .and_then(|d| d.parse::<u32>().ok())
                    .filter(|m| (1..=12).contains(m));
                match exp {
                    Some(m) => Method::Adapt(m),
                    None => return Err(invalid(format!("unknown method `{s}`"))),
                }
            }
        };
        Ok(m)
    }
}

impl Serialize for Method {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Method {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub thresholds: Thresholds,
    pub bfgs: BfgsConfig,
    /// Target `|E − E_FCI|` for the ablation search.
    pub ablation_tolerance: f64,
    pub adapt_max_iterations: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            thresholds: Thresholds { abs: 0.05, mag: 0.5 },
            bfgs: BfgsConfig::default(),
            ablation_tolerance: CHEMICAL_ACCURACY,
            adapt_max_iterations: AdaptConfig::default().max_iterations,
        }
    }
}

/// Everything derived once from a set of integrals.
#[derive(Debug)]
pub struct MolecularSystem {
    pub name: String,
    pub bond_length: Option<f64>,
    pub integrals: MolecularIntegrals,
    pub hamiltonian: PauliOperator,
    pub sparse: SparseOperator,
    pub groups: Vec<ParameterGroup>,
    fci: OnceLock<FciResult>,
}

impl MolecularSystem {
    pub fn new(name: impl Into<String>, bond_length: Option<f64>, integrals: MolecularIntegrals) -> Result<Self> {
        integrals.validate()?;
        if integrals.ms2 != 0 {
            return Err(GbefError::Unsupported(format!("open-shell reference (2S = {})", integrals.ms2)));
        }
        let n_qubits = integrals.n_qubits();
        let hamiltonian = jordan_wigner(&build_hamiltonian(&integrals), n_qubits)?;
        let sparse = SparseOperator::from_pauli(&hamiltonian)?;
        let groups = group_spin_adapted(&enumerate_excitations(integrals.n_spatial, integrals.n_electrons)?)?;
        Ok(Self { name: name.into(), bond_length, integrals, hamiltonian, sparse, groups, fci: OnceLock::new() })
    }

    pub fn from_fixture(f: &MoleculeFixture) -> Result<Self> {
        Self::new(f.name.clone(), Some(f.bond_length), f.integrals()?)
    }

    pub fn n_qubits(&self) -> usize {
        self.integrals.n_qubits()
    }

    pub fn n_electrons(&self) -> usize {
        self.integrals.n_electrons
    }

    pub fn reference(&self) -> u64 {
        hartree_fock_bits(self.n_electrons())
    }

    pub fn hf_energy(&self) -> f64 {
        let r = self.reference();
        self.sparse.element(r, r).re
    }

    /// Computed on first use.
    pub fn fci(&self) -> Result<&FciResult> {
        if let Some(r) = self.fci.get() {
            return Ok(r);
        }
        let r = fci_ground_state(&self.sparse, self.n_electrons(), self.integrals.ms2)?;
        Ok(self.fci.get_or_init(|| r))
    }

    pub fn screen(&self, t: Thresholds) -> Result<SelectionReport> {
        sort_truncate(screen(&self.hamiltonian, self.reference(), &self.groups)?, t)
    }

    pub fn uccsd_circuit(&self) -> AnsatzCircuit {
        AnsatzCircuit::from_groups(self.n_qubits(), self.n_electrons(), &self.groups)
    }

    /// Circuit over the given group ids, ascending.
    pub fn circuit_for(&self, ids: &[usize]) -> Result<AnsatzCircuit> {
        let report = SelectionReport {
            records: Vec::new(),
            kept: ids.to_vec(),
            dropped: Vec::new(),
            thresholds: None,
            warning: None,
        };
        build_ansatz(&report, &self.groups, self.n_qubits(), self.n_electrons())
    }
}

/// One line of a results table. Energies in Hartree, wall time in seconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub molecule: String,
    pub bond_length: Option<f64>,
    pub method: Method,
    pub energy: Option<f64>,
    pub n_parameters: Option<usize>,
    pub depth: Option<usize>,
    pub fci_energy: Option<f64>,
    pub error: Option<f64>,
    pub converged: bool,
    pub wall_time: f64,
    pub note: Option<String>,
}

impl ResultRow {
    pub fn succeeded(&self) -> bool {
        self.energy.is_some()
    }
}

/// A row plus the artifacts behind it.
#[derive(Debug, Clone)]
pub struct MethodRun {
    pub row: ResultRow,
    pub circuit: Option<AnsatzCircuit>,
    pub theta: Vec<f64>,
    pub selection: Option<SelectionReport>,
    pub adapt_log: Vec<AdaptIteration>,
}

struct Outcome {
    energy: f64,
    converged: bool,
    circuit: Option<AnsatzCircuit>,
    theta: Vec<f64>,
    selection: Option<SelectionReport>,
    adapt_log: Vec<AdaptIteration>,
    note: Option<String>,
}

impl Outcome {
    fn plain(energy: f64) -> Self {
        Self {
            energy,
            converged: true,
            circuit: None,
            theta: Vec::new(),
            selection: None,
            adapt_log: Vec::new(),
            note: None,
        }
    }
}

/// Runs one method. Failures land in the row's `note` instead of the result.
/// Wall time covers the method's full pipeline (screening and VQE for GBEF,
/// every iteration for ADAPT) and excludes the FCI reference and synthesis.
pub fn run_method(sys: &MolecularSystem, method: Method, cfg: &PipelineConfig) -> MethodRun {
    let start = Instant::now();
    let result = execute(sys, method, cfg);
    let wall_time = start.elapsed().as_secs_f64();
    let fci_energy = sys.fci().ok().map(|r| r.energy);
    let mut row = ResultRow {
        molecule: sys.name.clone(),
        bond_length: sys.bond_length,
        method,
        energy: None,
        n_parameters: None,
        depth: None,
        fci_energy,
        error: None,
        converged: false,
        wall_time,
        note: None,
    };
    match result {
        Ok(o) => {
            row.energy = Some(o.energy);
            row.error = fci_energy.map(|f| o.energy - f);
            row.converged = o.converged;
            row.note = o.note;
            match &o.circuit {
                Some(c) => {
                    row.n_parameters = Some(c.n_parameters());
                    match synthesize(c) {
                        Ok(gc) => row.depth = Some(depth(&gc).depth),
                        Err(e) => row.note = Some(format!("synthesis failed: {e}")),
                    }
                }
                None if method == Method::Hf => {
                    row.n_parameters = Some(0);
                    row.depth = Some(0);
                }
                None => {}
            }
            MethodRun { row, circuit: o.circuit, theta: o.theta, selection: o.selection, adapt_log: o.adapt_log }
        }
        Err(e) => {
            row.note = Some(e.to_string());
            MethodRun { row, circuit: None, theta: Vec::new(), selection: None, adapt_log: Vec::new() }
        }
    }
}

fn execute(sys: &MolecularSystem, method: Method, cfg: &PipelineConfig) -> Result<Outcome> {
    match method {
        Method::Hf => Ok(Outcome::plain(sys.hf_energy())),
        Method::Fci => Ok(Outcome::plain(sys.fci()?.energy)),
        Method::Uccsd => run_vqe(sys, sys.uccsd_circuit(), None, cfg),
        Method::Gbef => {
            let report = sys.screen(cfg.thresholds)?;
            let circuit = build_ansatz(&report, &sys.groups, sys.n_qubits(), sys.n_electrons())?;
            let note = report.warning.clone();
            let mut o = run_vqe(sys, circuit, Some(report), cfg)?;
            o.note = o.note.or(note);
            Ok(o)
        }
        Method::GbefAblation => {
            let fci = sys.fci()?.energy;
            let records = screen(&sys.hamiltonian, sys.reference(), &sys.groups)?;
            let outcome = ablation_minimize(
                records,
                |ids| Ok(vqe(&sys.circuit_for(ids)?, &sys.sparse, None, &cfg.bfgs)?.energy),
                fci,
                cfg.ablation_tolerance,
            )?;
            let circuit = sys.circuit_for(&outcome.report.kept)?;
            let mut o = run_vqe(sys, circuit, Some(outcome.report.clone()), cfg)?;
            if !outcome.feasible {
                o.note = outcome.report.warning;
            }
            Ok(o)
        }
        Method::Adapt(m) => {
            let acfg = AdaptConfig {
                max_iterations: cfg.adapt_max_iterations,
                bfgs: cfg.bfgs,
                ..AdaptConfig::with_exponent(m)
            };
            let r = adapt_vqe(&sys.sparse, sys.n_electrons(), &sys.groups, &acfg)?;
            Ok(Outcome {
                energy: r.energy,
                converged: r.converged,
                circuit: Some(r.circuit),
                theta: r.theta,
                selection: None,
                adapt_log: r.iterations,
                note: r.warning,
            })
        }
    }
}

fn run_vqe(
    sys: &MolecularSystem,
    circuit: AnsatzCircuit,
    selection: Option<SelectionReport>,
    cfg: &PipelineConfig,
) -> Result<Outcome> {
    let r = vqe(&circuit, &sys.sparse, None, &cfg.bfgs)?;
    Ok(Outcome {
        energy: r.energy,
        converged: r.converged,
        circuit: Some(circuit),
        theta: r.theta,
        selection,
        adapt_log: Vec::new(),
        note: r.message,
    })
}

/// Every method on every system, geometries in parallel on at most `jobs`
/// threads. Rows come back ordered by system, then by `methods`.
pub fn scan(
    systems: &[MolecularSystem],
    methods: &[Method],
    cfg: &PipelineConfig,
    jobs: usize,
) -> Result<Vec<ResultRow>> {
    if methods.is_empty() {
        return Err(invalid("no methods to run"));
    }
    let pool =
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(|e| invalid(format!("thread pool: {e}")))?;
    let per_system: Vec<Vec<ResultRow>> = pool
        .install(|| systems.par_iter().map(|s| methods.iter().map(|&m| run_method(s, m, cfg).row).collect()).collect());
    Ok(per_system.into_iter().flatten().collect())
}
