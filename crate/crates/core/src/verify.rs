//! Formula-versus-oracle comparison suites.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::counting::{empirical_census, stabilizer_state_count};
use crate::error::{Error, Result};
use crate::graph::{family_set, partition, triangle_bundle_example, Graph};
use crate::measurement::{expectation_curve, precision_curve, synthesize_plan};
use crate::noise::{qfi_dephasing_exact, qfi_erasure_pattern, ErasurePattern};
use crate::oracle::{
    apply_dephasing, apply_twin_clifford, erasure_mixture, graph_state_vector, partial_trace, qfi_mixed, qfi_pure,
    DensityMatrix, ORACLE_LIMIT,
};
use crate::qfi::{qfi_graph, qfi_graph_lc};

/// Absolute tolerance for QFI comparisons.
pub const QFI_TOLERANCE: f64 = 1e-6;
/// Relative tolerance on Δθ²·Q at the small-phase operating point.
pub const PRECISION_TOLERANCE: f64 = 0.01;
/// Small-phase operating point.
pub const SMALL_THETA: f64 = 0.01;

const RANDOM_GRAPHS_PER_SIZE: usize = 25;
const RANDOM_SEED: u64 = 0x5eed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Noiseless,
    LocalClifford,
    Dephasing,
    /// Pattern formula against the reduced state on surviving qubits.
    Erasure,
    /// Pattern formula against the n-qubit state with L_y fully dephased.
    ErasureMixture,
    Measurement,
    Counting,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Noiseless,
        Suite::LocalClifford,
        Suite::Dephasing,
        Suite::Erasure,
        Suite::ErasureMixture,
        Suite::Measurement,
        Suite::Counting,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Noiseless => "noiseless",
            Suite::LocalClifford => "lc",
            Suite::Dephasing => "dephasing",
            Suite::Erasure => "erasure",
            Suite::ErasureMixture => "erasure-mixture",
            Suite::Measurement => "measurement",
            Suite::Counting => "counting",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub cases: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    /// Label of the case with the largest deviation.
    pub worst_case: Option<String>,
}

impl SuiteReport {
    fn new(suite: Suite, tolerance: f64) -> Self {
        SuiteReport { suite, cases: 0, max_deviation: 0.0, tolerance, worst_case: None }
    }

    fn record(&mut self, label: impl FnOnce() -> String, deviation: f64) {
        self.cases += 1;
        if deviation > self.max_deviation || deviation.is_nan() {
            self.max_deviation = if deviation.is_nan() { f64::INFINITY } else { deviation };
            self.worst_case = Some(label());
        }
    }

    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tolerance
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = if self.passed() { "≤" } else { ">" };
        write!(f, "{}: {} cases, max deviation {:.3e} {rel} {:e}", self.suite, self.cases, self.max_deviation, self.tolerance)?;
        if let (false, Some(w)) = (self.passed(), &self.worst_case) {
            write!(f, " (worst: {w})")?;
        }
        Ok(())
    }
}

/// Family graphs with `n <= max_n`, the ten-vertex triangle bundle when it
/// fits, and seeded random connected graphs.
pub fn test_graphs(max_n: usize) -> Vec<(String, Graph)> {
    let mut out = family_set(max_n);
    let fig = triangle_bundle_example();
    if fig.graph.n() <= max_n {
        out.push(("triangle-bundle".into(), fig.graph));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED);
    for n in 2..=max_n {
        for i in 0..RANDOM_GRAPHS_PER_SIZE {
            out.push((format!("random{n}-{i}"), Graph::random_connected(n, 0.4, &mut rng)));
        }
    }
    out
}

/// Every closed-twin class of size at least two, flattened.
pub fn closed_twin_vertices(g: &Graph) -> Vec<usize> {
    let mut v: Vec<usize> = partition(g).closed_classes.iter().filter(|c| c.size() > 1).flat_map(|c| c.members.clone()).collect();
    v.sort_unstable();
    v
}

/// Dephasing grid 0, 0.05, …, 0.5.
pub fn dephasing_grid() -> Vec<f64> {
    (0..=10).map(|i| i as f64 * 0.05).collect()
}

/// QFI of the state left after discarding `sites`, generator on survivors.
pub fn erasure_oracle_partial_trace(g: &Graph, pat: &ErasurePattern) -> Result<f64> {
    if pat.len() == g.n() {
        return Ok(0.0);
    }
    let rho = DensityMatrix::from_pure(&graph_state_vector(g)?);
    let reduced = partial_trace(&rho, pat.sites())?;
    let active: Vec<usize> = (0..reduced.n()).collect();
    qfi_mixed(&reduced, &active)
}

/// QFI of the n-qubit mixture with L_y dephased at p = ½, full generator.
pub fn erasure_oracle_mixture(g: &Graph, pat: &ErasurePattern) -> Result<f64> {
    let psi = graph_state_vector(g)?;
    let all: Vec<usize> = (0..g.n()).collect();
    qfi_mixed(&erasure_mixture(g, &psi, pat)?, &all)
}

/// All patterns with one or two erased sites.
pub fn small_patterns(n: usize) -> Vec<ErasurePattern> {
    let mut out = Vec::new();
    for a in 0..n {
        out.push(ErasurePattern::new(n, &[a]).expect("in range"));
        for b in (a + 1)..n {
            out.push(ErasurePattern::new(n, &[a, b]).expect("in range"));
        }
    }
    out
}

pub fn run_suite(suite: Suite, max_n: usize) -> Result<SuiteReport> {
    let graphs = || test_graphs(max_n);
    Ok(match suite {
        Suite::Noiseless => {
            let mut r = SuiteReport::new(suite, QFI_TOLERANCE);
            for (id, g) in graphs() {
                let d = (qfi_graph(&g)?.value - qfi_pure(&graph_state_vector(&g)?)).abs();
                r.record(|| id, d);
            }
            r
        }
        Suite::LocalClifford => {
            let mut r = SuiteReport::new(suite, QFI_TOLERANCE);
            for (id, g) in graphs() {
                let psi = apply_twin_clifford(&graph_state_vector(&g)?, &closed_twin_vertices(&g))?;
                let d = (qfi_graph_lc(&g)?.value - qfi_pure(&psi)).abs();
                r.record(|| id, d);
            }
            r
        }
        Suite::Dephasing => {
            let mut r = SuiteReport::new(suite, QFI_TOLERANCE);
            for (id, g) in family_set(max_n) {
                let psi = graph_state_vector(&g)?;
                let all: Vec<usize> = (0..g.n()).collect();
                for p in dephasing_grid() {
                    let oracle = qfi_mixed(&apply_dephasing(&psi, p)?, &all)?;
                    let d = (qfi_dephasing_exact(&g, p)?.value - oracle).abs();
                    r.record(|| format!("{id} p={p}"), d);
                }
            }
            r
        }
        Suite::Erasure | Suite::ErasureMixture => {
            let mut r = SuiteReport::new(suite, QFI_TOLERANCE);
            for (id, g) in family_set(max_n) {
                for pat in small_patterns(g.n()) {
                    let oracle = if suite == Suite::Erasure {
                        erasure_oracle_partial_trace(&g, &pat)?
                    } else {
                        erasure_oracle_mixture(&g, &pat)?
                    };
                    let d = (qfi_erasure_pattern(&g, &pat)?.value - oracle).abs();
                    r.record(|| format!("{id} erase {:?}", pat.sites()), d);
                }
            }
            r
        }
        Suite::Measurement => {
            let mut r = SuiteReport::new(suite, PRECISION_TOLERANCE);
            for (id, g) in family_set(max_n.min(ORACLE_LIMIT - 1)) {
                let plan = synthesize_plan(&g)?;
                let q = plan.target_qfi();
                let d = precision_curve(&plan, &[SMALL_THETA])?[0];
                r.record(|| id.clone(), (d * q - 1.0).abs());
                let s = expectation_curve(&plan, &[SMALL_THETA])?[0];
                let series = 1.0 - SMALL_THETA * SMALL_THETA * q / 2.0;
                // Scaled so the 1e-5 series tolerance maps onto this suite's.
                r.record(|| format!("{id} series"), (s - series).abs() * PRECISION_TOLERANCE / 1e-5);
            }
            r
        }
        Suite::Counting => {
            let mut r = SuiteReport::new(suite, 0.0);
            for n in 1..=max_n.min(crate::counting::CENSUS_LIMIT) {
                let census = empirical_census(n, 0.0)?;
                let equal = census.total == stabilizer_state_count(n as u32);
                r.record(|| format!("census n={n}"), if equal { 0.0 } else { 1.0 });
            }
            r
        }
    })
}
