//! Closed-form noiseless QFI of graph and stabilizer states.
//!
//! All values use the generator `H = ½ Σ X_i`, so a product state scores `n`
//! and the Heisenberg limit is `n²`.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{partition, Graph};
use crate::stabilizer::{classify_x_forms, StabilizerGroup};

/// Which formula (or oracle) produced a QFI value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QfiMethod {
    /// Σ v_l² over open-neighbourhood classes.
    GraphPartition,
    /// Σ v_l² + Σ u_m² − n after the true-twin local Clifford.
    GraphLocalClifford,
    /// Ordered `+X_iX_j` pair count plus the diagonal.
    StabilizerPairs,
    /// ½ Σ f(v_l, p) g(N_l, p).
    DephasingExact,
    /// (1−2p)² Q(G) + 4np(1−p).
    DephasingApprox,
    /// Σ h_l over classes for a fixed erasure pattern.
    ErasurePattern,
    /// Dense state-vector / density-matrix evaluation.
    Oracle,
}

impl QfiMethod {
    pub fn tag(self) -> &'static str {
        match self {
            QfiMethod::GraphPartition => "partition",
            QfiMethod::GraphLocalClifford => "partition-lc",
            QfiMethod::StabilizerPairs => "stabilizer-pairs",
            QfiMethod::DephasingExact => "dephasing-exact",
            QfiMethod::DephasingApprox => "dephasing-approx",
            QfiMethod::ErasurePattern => "erasure-pattern",
            QfiMethod::Oracle => "oracle",
        }
    }
}

impl fmt::Display for QfiMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QfiValue {
    pub value: f64,
    pub method: QfiMethod,
}

impl QfiValue {
    pub fn new(value: f64, method: QfiMethod) -> Self {
        QfiValue { value, method }
    }
}

/// Q(G) = Σ_l v_l².
pub fn qfi_graph(g: &Graph) -> Result<QfiValue> {
    g.require_no_isolated()?;
    Ok(QfiValue::new(partition(g).open_square_sum() as f64, QfiMethod::GraphPartition))
}

/// QFI after applying the true-twin local Clifford: Σ v_l² + Σ u_m² − n.
pub fn qfi_graph_lc(g: &Graph) -> Result<QfiValue> {
    g.require_no_isolated()?;
    let p = partition(g);
    let q = p.open_square_sum() + p.closed_square_sum() - g.n();
    Ok(QfiValue::new(q as f64, QfiMethod::GraphLocalClifford))
}

/// QFI of a stabilizer state without `±X_i` or `-X_iX_j` stabilizers:
/// the number of ordered pairs `i ≠ j` with `+X_iX_j ∈ S`, plus `n` for the
/// diagonal terms.
pub fn qfi_stabilizer(s: &StabilizerGroup) -> Result<QfiValue> {
    let report = classify_x_forms(s);
    if let Some(witness) = report.bad_witness {
        return Err(Error::BadXForm { witness });
    }
    Ok(QfiValue::new((2 * report.count_xixj + s.n()) as f64, QfiMethod::StabilizerPairs))
}

/// Lower bound n²/k on a `k`-bundle graph of `n` qubits.
pub fn bundle_bound(n: usize, k: usize) -> Result<f64> {
    if k == 0 || k > n {
        return Err(Error::Precondition(format!("bundle bound needs 1 <= k <= n, got n = {n}, k = {k}")));
    }
    Ok((n * n) as f64 / k as f64)
}
