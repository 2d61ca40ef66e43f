use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::pauli::PauliOperator;
use crate::stabilizer::StabilizerGroup;

use super::{check_qubits, check_size, ORACLE_LIMIT};

const NORM_TOLERANCE: f64 = 1e-12;

/// Dense pure state; qubit `q` is bit `q` of the basis index.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(n: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != 1 << n {
            return Err(Error::InvalidState(format!("{} amplitudes for {n} qubits", amplitudes.len())));
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidState(format!("norm² = {norm}")));
        }
        Ok(StateVector { n, amplitudes })
    }

    /// Computational basis state `|b⟩`.
    pub fn basis(n: usize, b: usize) -> Result<Self> {
        check_size("state vector", n, ORACLE_LIMIT)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        *amps.get_mut(b).ok_or_else(|| Error::InvalidState(format!("basis index {b} out of range")))? =
            Complex64::new(1.0, 0.0);
        Ok(StateVector { n, amplitudes: amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum())
    }

    /// |⟨self|other⟩|².
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        self.inner(other).map(|z| z.norm_sqr())
    }

    /// Tensor product with `self` on the low qubits.
    pub fn tensor(&self, high: &StateVector) -> Result<StateVector> {
        let n = self.n + high.n;
        check_size("state vector", n, ORACLE_LIMIT)?;
        let mut amps = Vec::with_capacity(1 << n);
        for h in &high.amplitudes {
            for l in &self.amplitudes {
                amps.push(l * h);
            }
        }
        Ok(StateVector { n, amplitudes: amps })
    }
}

/// |G⟩ = Π_{(i,j)∈E} CZ_ij |+⟩^{⊗n}.
pub fn graph_state_vector(g: &Graph) -> Result<StateVector> {
    let n = g.n();
    check_size("graph_state_vector", n, ORACLE_LIMIT)?;
    let amp = (1.0 / (1u64 << n) as f64).sqrt();
    let edges: Vec<u64> = g.edges().iter().map(|&(i, j)| (1u64 << i) | (1u64 << j)).collect();
    let amplitudes = (0..1u64 << n)
        .map(|b| {
            let flips = edges.iter().filter(|&&e| b & e == e).count();
            Complex64::new(if flips % 2 == 0 { amp } else { -amp }, 0.0)
        })
        .collect();
    Ok(StateVector { n, amplitudes })
}

/// `P|ψ⟩` for a Pauli operator including its phase.
pub fn apply_pauli(psi: &StateVector, p: &PauliOperator) -> Result<StateVector> {
    if p.n() != psi.n {
        return Err(Error::DimensionMismatch { left: psi.n, right: p.n() });
    }
    let (x, z) = (p.x_mask().to_u64() as usize, p.z_mask().to_u64() as usize);
    let base = p.phase().exponent() as u32 + (x & z).count_ones();
    let mut out = vec![Complex64::new(0.0, 0.0); psi.amplitudes.len()];
    for (b, &a) in psi.amplitudes.iter().enumerate() {
        let k = base + 2 * (z & b).count_ones();
        out[b ^ x] = a * i_pow(k);
    }
    Ok(StateVector { n: psi.n, amplitudes: out })
}

pub(crate) fn i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// ⟨ψ|P|ψ⟩ for Hermitian `P`.
pub fn pauli_expectation(psi: &StateVector, p: &PauliOperator) -> Result<f64> {
    if !p.is_hermitian() {
        return Err(Error::Precondition(format!("{p} is not Hermitian")));
    }
    let pp = apply_pauli(psi, p)?;
    Ok(psi.inner(&pp)?.re)
}

/// The unique state stabilized by `s`, built by projecting a basis vector
/// with Π (I + g_i)/2.
pub fn stabilizer_state_vector(s: &StabilizerGroup) -> Result<StateVector> {
    let n = s.n();
    check_size("stabilizer_state_vector", n, ORACLE_LIMIT)?;
    let threshold = 0.5 / (1u64 << n) as f64;
    for b in 0..1usize << n {
        let mut v = StateVector::basis(n, b)?;
        for g in s.generators() {
            let gv = apply_pauli(&v, g)?;
            for (a, ga) in v.amplitudes.iter_mut().zip(&gv.amplitudes) {
                *a = (*a + ga) * 0.5;
            }
        }
        let norm: f64 = v.amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if norm > threshold {
            let scale = 1.0 / norm.sqrt();
            v.amplitudes.iter_mut().for_each(|a| *a *= scale);
            return Ok(v);
        }
    }
    Err(Error::InvalidGroup("projector annihilates every basis state".into()))
}

/// (Σ_{i∈active} X_i)|ψ⟩ without normalization.
pub(crate) fn x_sum(psi: &StateVector, active: &[usize]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); psi.amplitudes.len()];
    for &q in active {
        let bit = 1usize << q;
        for (b, &a) in psi.amplitudes.iter().enumerate() {
            out[b ^ bit] += a;
        }
    }
    out
}

/// QFI of a pure state for H = ½ Σ X_i over every qubit: Var(Σ X_i).
pub fn qfi_pure(psi: &StateVector) -> f64 {
    let all: Vec<usize> = (0..psi.n).collect();
    qfi_pure_active(psi, &all).expect("all qubits are in range")
}

/// Var(Σ_{i∈active} X_i).
pub fn qfi_pure_active(psi: &StateVector, active: &[usize]) -> Result<f64> {
    check_qubits(psi.n, active)?;
    let phi = x_sum(psi, active);
    let second: f64 = phi.iter().map(|a| a.norm_sqr()).sum();
    let first: Complex64 = psi.amplitudes.iter().zip(&phi).map(|(a, b)| a.conj() * b).sum();
    Ok(second - first.norm_sqr())
}

/// Apply diag(1, i) to each listed qubit: X ↦ Y, Y ↦ −X, Z ↦ Z.
pub fn apply_twin_clifford(psi: &StateVector, vertices: &[usize]) -> Result<StateVector> {
    check_qubits(psi.n, vertices)?;
    let mask = vertices.iter().fold(0usize, |m, &v| m | (1 << v));
    let amplitudes = psi.amplitudes.iter().enumerate().map(|(b, &a)| a * i_pow((b & mask).count_ones())).collect();
    Ok(StateVector { n: psi.n, amplitudes })
}

/// exp(−i θ/2 Σ_{i∈active} X_i)|ψ⟩.
pub fn evolve(psi: &StateVector, theta: f64, active: &[usize]) -> Result<StateVector> {
    check_qubits(psi.n, active)?;
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let mis = Complex64::new(0.0, -s);
    let mut amps = psi.amplitudes.clone();
    for &q in active {
        let bit = 1usize << q;
        for b in 0..amps.len() {
            if b & bit == 0 {
                let (a0, a1) = (amps[b], amps[b | bit]);
                amps[b] = a0 * c + a1 * mis;
                amps[b | bit] = a1 * c + a0 * mis;
            }
        }
    }
    Ok(StateVector { n: psi.n, amplitudes: amps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, path, star};
    use crate::stabilizer::{enumerate_group, generators_from_graph};
    use approx::assert_relative_eq;

    #[test]
    fn single_vertex_is_plus_state() {
        let psi = graph_state_vector(&Graph::empty(1)).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_relative_eq!(psi.amplitudes()[0].re, h);
        assert_relative_eq!(psi.amplitudes()[1].re, h);
    }

    #[test]
    fn k2_state() {
        let psi = graph_state_vector(&complete(2).unwrap()).unwrap();
        // (|0+⟩ + |1−⟩)/√2 with qubit 0 first: amplitudes ½(1, 1, 1, −1).
        let want = [0.5, 0.5, 0.5, -0.5];
        for (a, w) in psi.amplitudes().iter().zip(want) {
            assert_relative_eq!(a.re, w);
            assert_eq!(a.im, 0.0);
        }
    }

    #[test]
    fn graph_state_is_stabilized() {
        let g = star(4).unwrap();
        let psi = graph_state_vector(&g).unwrap();
        for gen in generators_from_graph(&g).generators() {
            assert_relative_eq!(pauli_expectation(&psi, gen).unwrap(), 1.0, epsilon = 1e-12);
            assert_relative_eq!(psi.fidelity(&apply_pauli(&psi, gen).unwrap()).unwrap(), 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn expectation_examples() {
        let g = path(4).unwrap();
        let psi = graph_state_vector(&g).unwrap();
        assert_relative_eq!(pauli_expectation(&psi, &PauliOperator::identity(4)).unwrap(), 1.0, epsilon = 1e-12);
        for q in 0..4 {
            let x = PauliOperator::x_string(4, &[q]);
            assert!(pauli_expectation(&psi, &x).unwrap().abs() < 1e-12);
        }
        let s = generators_from_graph(&g);
        for el in enumerate_group(&s).unwrap() {
            assert_relative_eq!(pauli_expectation(&psi, &el).unwrap(), 1.0, epsilon = 1e-12);
        }
        assert!(pauli_expectation(&psi, &PauliOperator::identity(3)).is_err());
        assert!(pauli_expectation(&psi, &"+iZIII".parse().unwrap()).is_err());
    }

    #[test]
    fn qfi_pure_examples() {
        assert_relative_eq!(qfi_pure(&graph_state_vector(&star(10).unwrap()).unwrap()), 82.0, epsilon = 1e-9);
        assert_relative_eq!(qfi_pure(&graph_state_vector(&path(5).unwrap()).unwrap()), 5.0, epsilon = 1e-9);
        for n in 1..6 {
            assert_relative_eq!(qfi_pure(&StateVector::basis(n, 0).unwrap()), n as f64, epsilon = 1e-12);
        }
    }

    #[test]
    fn twin_clifford_examples() {
        let psi = graph_state_vector(&complete(2).unwrap()).unwrap();
        assert_eq!(apply_twin_clifford(&psi, &[]).unwrap(), psi);
        let phi = apply_twin_clifford(&psi, &[0, 1]).unwrap();
        assert_relative_eq!(pauli_expectation(&phi, &"+XX".parse().unwrap()).unwrap(), 1.0, epsilon = 1e-12);
        let k4 = graph_state_vector(&complete(4).unwrap()).unwrap();
        assert_relative_eq!(qfi_pure(&apply_twin_clifford(&k4, &[0, 1, 2, 3]).unwrap()), 16.0, epsilon = 1e-9);
        assert!(apply_twin_clifford(&psi, &[2]).is_err());
    }

    #[test]
    fn stabilizer_state_matches_graph_state() {
        for g in [star(5).unwrap(), path(4).unwrap(), complete(3).unwrap()] {
            let a = graph_state_vector(&g).unwrap();
            let b = stabilizer_state_vector(&generators_from_graph(&g)).unwrap();
            assert_relative_eq!(a.fidelity(&b).unwrap(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn evolution_is_unitary_and_reversible() {
        let psi = graph_state_vector(&star(4).unwrap()).unwrap();
        let all = [0, 1, 2, 3];
        let fwd = evolve(&psi, 0.7, &all).unwrap();
        assert!(StateVector::new(4, fwd.amplitudes().to_vec()).is_ok());
        let back = evolve(&fwd, -0.7, &all).unwrap();
        assert_relative_eq!(back.fidelity(&psi).unwrap(), 1.0, epsilon = 1e-12);
        // |+⟩ is an eigenstate of X.
        let plus = graph_state_vector(&Graph::empty(1)).unwrap();
        assert_relative_eq!(evolve(&plus, 1.3, &[0]).unwrap().fidelity(&plus).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn size_guard() {
        assert!(matches!(graph_state_vector(&Graph::empty(15)), Err(Error::SizeGuard { .. })));
    }
}
