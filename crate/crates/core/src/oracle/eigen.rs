//! Cyclic Jacobi eigensolver for dense complex Hermitian matrices.

use num_complex::Complex64;

use crate::error::{Error, Result};

const OFF_DIAGONAL_TOLERANCE: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;
const RECONSTRUCTION_TOLERANCE: f64 = 1e-9;
const ORTHONORMALITY_TOLERANCE: f64 = 1e-10;

/// Eigenvalues in descending order with matching orthonormal eigenvector
/// columns.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    dim: usize,
    eigenvalues: Vec<f64>,
    /// Row-major `dim × dim`; column `k` is the `k`-th eigenvector.
    vectors: Vec<Complex64>,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Component `i` of eigenvector `k`.
    pub fn vector_entry(&self, i: usize, k: usize) -> Complex64 {
        self.vectors[i * self.dim + k]
    }

    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self.vector_entry(i, k)).collect()
    }
}

fn off_diagonal_norm(a: &[Complex64], d: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                s += a[i * d + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Diagonalize the Hermitian matrix `a` (row-major, `dim × dim`).
///
/// Every call checks `‖VΛV† − A‖_max ≤ 1e-9` and `‖V†V − I‖_max ≤ 1e-10`
/// and fails otherwise.
pub fn eigh(a: &[Complex64], dim: usize) -> Result<EigenDecomposition> {
    if a.len() != dim * dim {
        return Err(Error::Eigen(format!("expected {} entries, got {}", dim * dim, a.len())));
    }
    let d = dim;
    let mut m = a.to_vec();
    // Symmetrize so the diagonal is exactly real.
    for i in 0..d {
        m[i * d + i] = Complex64::new(m[i * d + i].re, 0.0);
        for j in (i + 1)..d {
            let avg = (m[i * d + j] + m[j * d + i].conj()) * 0.5;
            m[i * d + j] = avg;
            m[j * d + i] = avg.conj();
        }
    }
    let mut v = vec![Complex64::new(0.0, 0.0); d * d];
    for i in 0..d {
        v[i * d + i] = Complex64::new(1.0, 0.0);
    }
    let scale = m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1.0);

    let mut converged = d <= 1;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&m, d) <= OFF_DIAGONAL_TOLERANCE * scale {
            converged = true;
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                let apq = m[p * d + q];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                // Rotate the phase of q so that a_pq becomes real and positive.
                let phase = apq / r;
                let phase_c = phase.conj();
                for i in 0..d {
                    m[i * d + q] *= phase_c;
                    v[i * d + q] *= phase_c;
                }
                for j in 0..d {
                    m[q * d + j] *= phase;
                }
                m[p * d + q] = Complex64::new(r, 0.0);
                m[q * d + p] = Complex64::new(r, 0.0);
                m[q * d + q] = Complex64::new(m[q * d + q].re, 0.0);

                let app = m[p * d + p].re;
                let aqq = m[q * d + q].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 { 1.0 } else { -1.0 } / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for i in 0..d {
                    let (xp, xq) = (m[i * d + p], m[i * d + q]);
                    m[i * d + p] = xp * c - xq * s;
                    m[i * d + q] = xp * s + xq * c;
                    let (yp, yq) = (v[i * d + p], v[i * d + q]);
                    v[i * d + p] = yp * c - yq * s;
                    v[i * d + q] = yp * s + yq * c;
                }
                for j in 0..d {
                    let (xp, xq) = (m[p * d + j], m[q * d + j]);
                    m[p * d + j] = xp * c - xq * s;
                    m[q * d + j] = xp * s + xq * c;
                }
                m[p * d + q] = Complex64::new(0.0, 0.0);
                m[q * d + p] = Complex64::new(0.0, 0.0);
            }
        }
    }
    if !converged && off_diagonal_norm(&m, d) > OFF_DIAGONAL_TOLERANCE * scale {
        return Err(Error::Eigen(format!("no convergence after {MAX_SWEEPS} sweeps")));
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&x, &y| m[y * d + y].re.total_cmp(&m[x * d + x].re));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| m[k * d + k].re).collect();
    let mut vectors = vec![Complex64::new(0.0, 0.0); d * d];
    for (new_k, &old_k) in order.iter().enumerate() {
        for i in 0..d {
            vectors[i * d + new_k] = v[i * d + old_k];
        }
    }
    let dec = EigenDecomposition { dim: d, eigenvalues, vectors };
    self_check(a, &dec)?;
    Ok(dec)
}

fn self_check(a: &[Complex64], dec: &EigenDecomposition) -> Result<()> {
    let d = dec.dim;
    let mut worst_rec: f64 = 0.0;
    let mut worst_orth: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let mut rec = Complex64::new(0.0, 0.0);
            let mut ov = Complex64::new(0.0, 0.0);
            for k in 0..d {
                rec += dec.vector_entry(i, k) * dec.eigenvalues[k] * dec.vector_entry(j, k).conj();
                ov += dec.vector_entry(k, i).conj() * dec.vector_entry(k, j);
            }
            worst_rec = worst_rec.max((rec - a[i * d + j]).norm());
            let target = if i == j { 1.0 } else { 0.0 };
            worst_orth = worst_orth.max((ov - target).norm());
        }
    }
    if worst_rec > RECONSTRUCTION_TOLERANCE {
        return Err(Error::Eigen(format!("reconstruction error {worst_rec:e}")));
    }
    if worst_orth > ORTHONORMALITY_TOLERANCE {
        return Err(Error::Eigen(format!("orthonormality error {worst_orth:e}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_input_is_sorted() {
        let a = vec![c(0.2, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.8, 0.0)];
        let e = eigh(&a, 2).unwrap();
        assert_eq!(e.eigenvalues(), &[0.8, 0.2]);
        assert_relative_eq!(e.vector_entry(1, 0).norm(), 1.0);
    }

    #[test]
    fn pauli_y_spectrum() {
        let a = vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)];
        let e = eigh(&a, 2).unwrap();
        assert_relative_eq!(e.eigenvalues()[0], 1.0, epsilon = 1e-14);
        assert_relative_eq!(e.eigenvalues()[1], -1.0, epsilon = 1e-14);
    }

    #[test]
    fn random_hermitian_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in [1, 2, 3, 5, 8, 16, 33] {
            let mut a = vec![c(0.0, 0.0); d * d];
            for i in 0..d {
                a[i * d + i] = c(rng.gen_range(-1.0..1.0), 0.0);
                for j in (i + 1)..d {
                    let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    a[i * d + j] = z;
                    a[j * d + i] = z.conj();
                }
            }
            let e = eigh(&a, d).unwrap();
            let trace: f64 = (0..d).map(|i| a[i * d + i].re).sum();
            assert_relative_eq!(e.eigenvalues().iter().sum::<f64>(), trace, epsilon = 1e-10);
            assert!(e.eigenvalues().windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn degenerate_spectrum() {
        // Projector onto (1, i, 0)/√2 plus a copy of it: eigenvalues {1, 0, 0}.
        let h = 0.5;
        let a = vec![c(h, 0.0), c(0.0, -h), c(0.0, 0.0), c(0.0, h), c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let e = eigh(&a, 3).unwrap();
        assert_relative_eq!(e.eigenvalues()[0], 1.0, epsilon = 1e-14);
        assert!(e.eigenvalues()[1].abs() < 1e-14 && e.eigenvalues()[2].abs() < 1e-14);
    }

    #[test]
    fn wrong_length_rejected() {
        assert!(eigh(&[c(1.0, 0.0)], 2).is_err());
    }
}
