use num_complex::Complex64;

use super::eigen::{eigh, EigenDecomposition};
use super::state::StateVector;
use super::{check_qubits, check_size, DEPHASING_LIMIT};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::noise::ErasurePattern;

const HERMITIAN_TOLERANCE: f64 = 1e-12;
const TRACE_TOLERANCE: f64 = 1e-12;
const NEGATIVITY_TOLERANCE: f64 = 1e-10;
/// Pairs with λ_j + λ_k at or below this are dropped from the QFI sum.
pub const SPECTRAL_CUTOFF: f64 = 1e-10;

/// Dense `2^n × 2^n` density matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    /// Checks Hermiticity and unit trace. Positivity is checked when the
    /// matrix is diagonalized.
    pub fn new(n: usize, entries: Vec<Complex64>) -> Result<Self> {
        let d = 1usize << n;
        if entries.len() != d * d {
            return Err(Error::InvalidState(format!("{} entries for {n} qubits", entries.len())));
        }
        for i in 0..d {
            for j in i..d {
                let dev = (entries[i * d + j] - entries[j * d + i].conj()).norm();
                if dev > HERMITIAN_TOLERANCE {
                    return Err(Error::InvalidState(format!("not Hermitian at ({i}, {j}): {dev:e}")));
                }
            }
        }
        let trace: Complex64 = (0..d).map(|i| entries[i * d + i]).sum();
        if (trace - 1.0).norm() > TRACE_TOLERANCE {
            return Err(Error::InvalidState(format!("trace {trace}")));
        }
        Ok(DensityMatrix { n, entries })
    }

    pub fn from_pure(psi: &StateVector) -> Self {
        let a = psi.amplitudes();
        let entries = a.iter().flat_map(|x| a.iter().map(move |y| x * y.conj())).collect();
        DensityMatrix { n: psi.n(), entries }
    }

    /// I / 2^n.
    pub fn maximally_mixed(n: usize) -> Result<Self> {
        check_size("density matrix", n, DEPHASING_LIMIT)?;
        let d = 1usize << n;
        let mut entries = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            entries[i * d + i] = Complex64::new(1.0 / d as f64, 0.0);
        }
        Ok(DensityMatrix { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim() + j]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.entry(i, i)).sum()
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        Ok(self.entries.iter().zip(&other.entries).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    /// Eigendecomposition; fails if any eigenvalue is below −1e-10.
    pub fn eigen(&self) -> Result<EigenDecomposition> {
        let dec = eigh(&self.entries, self.dim())?;
        if let Some(&low) = dec.eigenvalues().last() {
            if low < -NEGATIVITY_TOLERANCE {
                return Err(Error::InvalidState(format!("negative eigenvalue {low:e}")));
            }
        }
        Ok(dec)
    }
}

/// Independent phase flips with probability `p` on every qubit.
pub fn apply_dephasing(psi: &StateVector, p: f64) -> Result<DensityMatrix> {
    let all: Vec<usize> = (0..psi.n()).collect();
    dephase_sites(&DensityMatrix::from_pure(psi), p, &all)
}

/// Phase flips with probability `p` on `sites` only.
///
/// The channel multiplies ρ_ab by (1−2p) for every listed qubit on which
/// `a` and `b` differ.
pub fn dephase_sites(rho: &DensityMatrix, p: f64, sites: &[usize]) -> Result<DensityMatrix> {
    check_size("dephasing", rho.n, DEPHASING_LIMIT)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    check_qubits(rho.n, sites)?;
    let mask = sites.iter().fold(0usize, |m, &s| m | (1 << s));
    let damp = 1.0 - 2.0 * p;
    let powers: Vec<f64> = (0..=rho.n as i32).map(|k| damp.powi(k)).collect();
    let d = rho.dim();
    let entries = rho
        .entries
        .iter()
        .enumerate()
        .map(|(idx, &v)| v * powers[(((idx / d) ^ (idx % d)) & mask).count_ones() as usize])
        .collect();
    Ok(DensityMatrix { n: rho.n, entries })
}

/// The same channel as [`apply_dephasing`] written as an explicit mixture
/// Σ_k p^{|k|}(1−p)^{n−|k|} Z_k ψ Z_k over all 2^n flip patterns.
pub fn apply_dephasing_kraus(psi: &StateVector, p: f64) -> Result<DensityMatrix> {
    let n = psi.n();
    check_size("dephasing", n, DEPHASING_LIMIT)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    let d = 1usize << n;
    let a = psi.amplitudes();
    let mut entries = vec![Complex64::new(0.0, 0.0); d * d];
    for k in 0..d {
        let w = k.count_ones() as i32;
        let weight = p.powi(w) * (1.0 - p).powi(n as i32 - w);
        if weight == 0.0 {
            continue;
        }
        let flipped: Vec<Complex64> =
            (0..d).map(|b| if (k & b).count_ones() % 2 == 0 { a[b] } else { -a[b] }).collect();
        for i in 0..d {
            for j in 0..d {
                entries[i * d + j] += flipped[i] * flipped[j].conj() * weight;
            }
        }
    }
    Ok(DensityMatrix { n, entries })
}

/// 2^{-|L|} Σ_{j⊆L} Z_j |G⟩⟨G| Z_j with L the erased sites and their
/// neighbours: the state on all n qubits whose stabilizers are exactly the
/// elements of ⟨g_i⟩ acting trivially on the erased qubits.
pub fn erasure_mixture(g: &Graph, psi: &StateVector, pat: &ErasurePattern) -> Result<DensityMatrix> {
    if psi.n() != g.n() {
        return Err(Error::DimensionMismatch { left: g.n(), right: psi.n() });
    }
    let l: Vec<usize> = pat.affected(g).iter_ones().collect();
    dephase_sites(&DensityMatrix::from_pure(psi), 0.5, &l)
}

/// Trace out `sites`; surviving qubits keep their relative order.
pub fn partial_trace(rho: &DensityMatrix, sites: &[usize]) -> Result<DensityMatrix> {
    let n = rho.n;
    check_qubits(n, sites)?;
    let mut traced: Vec<usize> = sites.to_vec();
    traced.sort_unstable();
    traced.dedup();
    if traced.is_empty() {
        return Err(Error::Precondition("partial trace over an empty site set".into()));
    }
    if traced.len() == n {
        return Err(Error::Precondition("cannot trace out every qubit".into()));
    }
    let kept: Vec<usize> = (0..n).filter(|q| !traced.contains(q)).collect();
    let scatter = |bits: usize, qubits: &[usize]| {
        qubits.iter().enumerate().fold(0usize, |acc, (i, &q)| acc | (((bits >> i) & 1) << q))
    };
    let m = kept.len();
    let (dk, dt) = (1usize << m, 1usize << traced.len());
    let kept_idx: Vec<usize> = (0..dk).map(|r| scatter(r, &kept)).collect();
    let traced_idx: Vec<usize> = (0..dt).map(|t| scatter(t, &traced)).collect();
    let mut entries = vec![Complex64::new(0.0, 0.0); dk * dk];
    for r in 0..dk {
        for c in 0..dk {
            entries[r * dk + c] = traced_idx.iter().map(|&t| rho.entry(kept_idx[r] | t, kept_idx[c] | t)).sum();
        }
    }
    Ok(DensityMatrix { n: m, entries })
}

/// QFI of ρ for H = ½ Σ_{i∈active} X_i:
/// 2 Σ_{λ_j+λ_k > ε} (λ_j − λ_k)² / (λ_j + λ_k) |⟨j|H|k⟩|².
pub fn qfi_mixed(rho: &DensityMatrix, active: &[usize]) -> Result<f64> {
    check_qubits(rho.n, active)?;
    let dec = rho.eigen()?;
    let d = rho.dim();
    let lam = dec.eigenvalues();
    // W = H V, column by column.
    let mut w = vec![Complex64::new(0.0, 0.0); d * d];
    for &q in active {
        let bit = 1usize << q;
        for i in 0..d {
            for k in 0..d {
                w[(i ^ bit) * d + k] += dec.vector_entry(i, k) * 0.5;
            }
        }
    }
    let mut q = 0.0;
    for j in 0..d {
        for k in (j + 1)..d {
            let s = lam[j] + lam[k];
            if s <= SPECTRAL_CUTOFF {
                continue;
            }
            let diff = lam[j] - lam[k];
            if diff == 0.0 {
                continue;
            }
            let h: Complex64 = (0..d).map(|i| dec.vector_entry(i, j).conj() * w[i * d + k]).sum();
            // Both orderings (j, k) and (k, j) contribute equally.
            q += 4.0 * diff * diff / s * h.norm_sqr();
        }
    }
    Ok(q)
}
