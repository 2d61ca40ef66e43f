//! Quantum Fisher information of graph and stabilizer states.
//!
//! Closed-form values (noiseless, local-Clifford boosted, dephased, erased)
//! sit next to a dense state-vector oracle that checks them on small
//! instances. Measurement synthesis and stabilizer-state counting build on
//! the same Pauli and graph layers.

pub mod bits;
pub mod combinatorics;
pub mod counting;
pub mod error;
pub mod graph;
pub mod measurement;
pub mod noise;
pub mod oracle;
pub mod pauli;
pub mod qfi;
pub mod stabilizer;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{partition, Graph, PartitionReport};
pub use pauli::{Letter, PauliOperator, Phase};
pub use qfi::{qfi_graph, qfi_graph_lc, qfi_stabilizer, QfiMethod, QfiValue};
pub use stabilizer::StabilizerGroup;
