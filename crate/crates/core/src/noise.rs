//! Closed-form QFI of graph states under iid dephasing and under a finite
//! number of erasures.

use crate::bits::Bits;
use crate::combinatorics::{binomial, binomial_ratio};
use crate::error::{Error, Result};
use crate::graph::{partition, Graph};
use crate::qfi::{qfi_graph, QfiMethod, QfiValue};

/// Largest number of erasure patterns averaged by exact enumeration.
pub const AVERAGE_ENUMERATION_LIMIT: f64 = 2.0e6;

/// Per-qubit phase-flip probability.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct DephasingSpec {
    p: f64,
}

impl DephasingSpec {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        Ok(DephasingSpec { p })
    }

    pub fn p(self) -> f64 {
        self.p
    }
}

fn check_p(p: f64) -> Result<f64> {
    DephasingSpec::new(p).map(DephasingSpec::p)
}

/// f(v, p) = v²(1−2p)² + 4vp(1−p).
pub fn dephasing_f(v: usize, p: f64) -> f64 {
    let v = v as f64;
    v * v * (1.0 - 2.0 * p).powi(2) + 4.0 * v * p * (1.0 - p)
}

/// g(N, p) = Σ_j C(N,j) (a_j − b_j)² / (a_j + b_j) with
/// a_j = p^{N−j}(1−p)^j and b_j = p^j(1−p)^{N−j}; equal to 2 at p ∈ {0, 1}.
///
/// Each term is evaluated as `exp(ln C + ln(a+b)) · tanh²((ln a − ln b)/2)`
/// so that large `N` neither overflows the binomial nor underflows the powers.
pub fn dephasing_g(big_n: usize, p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 2.0;
    }
    let (lp, lq) = (p.ln(), (1.0 - p).ln());
    let nf = big_n as f64;
    let mut ln_choose = 0.0;
    let mut sum = 0.0;
    for j in 0..=big_n {
        if j > 0 {
            ln_choose += ((big_n - j + 1) as f64).ln() - (j as f64).ln();
        }
        let jf = j as f64;
        let ln_a = (nf - jf) * lp + jf * lq;
        let ln_b = jf * lp + (nf - jf) * lq;
        let (hi, lo) = if ln_a > ln_b { (ln_a, ln_b) } else { (ln_b, ln_a) };
        let ln_sum = hi + (lo - hi).exp().ln_1p();
        let ratio = ((ln_a - ln_b) / 2.0).tanh();
        sum += (ln_choose + ln_sum).exp() * ratio * ratio;
    }
    sum
}

/// 2 − 2(2p(1−p) + ½)^N, a lower bound on g.
pub fn g_lower_bound(big_n: usize, p: f64) -> f64 {
    2.0 - 2.0 * (2.0 * p * (1.0 - p) + 0.5).powi(big_n as i32)
}

/// ½ Σ_l f(v_l, p) g(N_l, p) over open-neighbourhood classes.
pub fn qfi_dephasing_exact(g: &Graph, p: f64) -> Result<QfiValue> {
    let p = check_p(p)?;
    g.require_no_isolated()?;
    let q = partition(g)
        .open_classes
        .iter()
        .map(|c| dephasing_f(c.size(), p) * dephasing_g(c.shared_neighborhood.len(), p))
        .sum::<f64>()
        / 2.0;
    Ok(QfiValue::new(q, QfiMethod::DephasingExact))
}

/// (1−2p)² Q(G) + 4np(1−p); accurate when (2p(1−p)+½)^{N_l} ≈ 0 for all l.
pub fn qfi_dephasing_approx(g: &Graph, p: f64) -> Result<QfiValue> {
    let p = check_p(p)?;
    let q = qfi_graph(g)?.value;
    let n = g.n() as f64;
    Ok(QfiValue::new((1.0 - 2.0 * p).powi(2) * q + 4.0 * n * p * (1.0 - p), QfiMethod::DephasingApprox))
}

/// Set of erased vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErasurePattern {
    sites: Vec<usize>,
}

impl ErasurePattern {
    /// Validate `sites` against a graph on `n` vertices.
    pub fn new(n: usize, sites: &[usize]) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::InvalidErasure("pattern is empty".into()));
        }
        let mut sorted = sites.to_vec();
        sorted.sort_unstable();
        if let Some(&bad) = sorted.iter().find(|&&s| s >= n) {
            return Err(Error::InvalidErasure(format!("site {bad} out of range (n = {n})")));
        }
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidErasure("repeated site".into()));
        }
        Ok(ErasurePattern { sites: sorted })
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    /// L_y: erased vertices together with their neighbourhoods.
    pub fn affected(&self, g: &Graph) -> Bits {
        let mut l = Bits::zeros(g.n());
        for &y in &self.sites {
            l.set(y, true);
            for &w in g.neighbors(y) {
                l.set(w, true);
            }
        }
        l
    }
}

/// Open classes as `(V_l, N_l)` bit vectors.
struct ClassMasks {
    classes: Vec<(Bits, Bits, usize)>,
}

impl ClassMasks {
    fn new(g: &Graph) -> Self {
        let n = g.n();
        let classes = partition(g)
            .open_classes
            .iter()
            .map(|c| {
                (
                    Bits::from_indices(n, c.members.iter().copied()),
                    Bits::from_indices(n, c.shared_neighborhood.iter().copied()),
                    c.size(),
                )
            })
            .collect();
        ClassMasks { classes }
    }

    /// Σ_l h_l for the affected set `l`.
    fn value(&self, l: &Bits) -> u64 {
        self.classes
            .iter()
            .map(|(members, nbhd, v)| {
                let v = *v as u64;
                match (nbhd.is_subset(l), members.is_subset(l)) {
                    (false, false) => v * v,
                    (false, true) => v,
                    _ => 0,
                }
            })
            .sum()
    }
}

/// Σ_l h_l with h_l = v_l² if neither N_l nor V_l lies inside L_y, v_l if
/// only V_l does, and 0 once N_l ⊆ L_y.
pub fn qfi_erasure_pattern(g: &Graph, pat: &ErasurePattern) -> Result<QfiValue> {
    g.require_no_isolated()?;
    if let Some(&bad) = pat.sites().iter().find(|&&s| s >= g.n()) {
        return Err(Error::InvalidErasure(format!("site {bad} out of range (n = {})", g.n())));
    }
    let q = ClassMasks::new(g).value(&pat.affected(g));
    Ok(QfiValue::new(q as f64, QfiMethod::ErasurePattern))
}

/// Visit every `e`-subset of `0..n` in lexicographic order.
pub(crate) fn for_each_subset(n: usize, e: usize, mut visit: impl FnMut(&[usize])) {
    if e > n {
        return;
    }
    let mut idx: Vec<usize> = (0..e).collect();
    loop {
        visit(&idx);
        let mut i = e;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - e {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for k in (i + 1)..e {
            idx[k] = idx[k - 1] + 1;
        }
    }
}

/// Mean of [`qfi_erasure_pattern`] over all `C(n, e)` patterns.
///
/// Pattern values are integers, so the sum is accumulated exactly.
pub fn qfi_erasure_average_exact(g: &Graph, e: usize) -> Result<f64> {
    g.require_no_isolated()?;
    let n = g.n();
    if e == 0 || e > n {
        return Err(Error::InvalidErasure(format!("need 1 <= e <= n, got e = {e}, n = {n}")));
    }
    let count = binomial(n as i64, e as i64);
    if count > AVERAGE_ENUMERATION_LIMIT {
        return Err(Error::Precondition(format!("C({n}, {e}) = {count:.0} patterns exceeds the enumeration limit")));
    }
    let masks = ClassMasks::new(g);
    let mut total: u64 = 0;
    for_each_subset(n, e, |sites| {
        let pat = ErasurePattern { sites: sites.to_vec() };
        total += masks.value(&pat.affected(g));
    });
    Ok(total as f64 / count)
}

/// Single-erasure average as printed: Σ v_l²(n−v_l−N_l)/n + Σ v_l N_l/n.
///
/// Overcounts when a class's neighbourhood can be covered by one erased
/// vertex together with its own neighbours (path(3): 4/3 against 2/3).
pub fn qfi_erasure_single_avg_formula(g: &Graph) -> Result<f64> {
    g.require_no_isolated()?;
    let n = g.n() as f64;
    let sum = partition(g)
        .open_classes
        .iter()
        .map(|c| {
            let v = c.size() as f64;
            let nl = c.shared_neighborhood.len() as f64;
            v * v * (n - v - nl) / n + v * nl / n
        })
        .sum();
    Ok(sum)
}

fn bundle_size(n: usize, k: usize) -> Result<usize> {
    if k == 0 || !n.is_multiple_of(k) {
        return Err(Error::Precondition(format!("k = {k} must divide n = {n}")));
    }
    Ok(n / k)
}

/// Average QFI of a bundled star (k bundles of j = n/k) after `e` erasures:
/// [C(n−j,e)/C(n,e)]·j + [C(j,e)/C(n,e)]·(n−j).
pub fn qfi_erasure_star_formula(n: usize, k: usize, e: usize) -> Result<f64> {
    let j = bundle_size(n, k)?;
    if e == 0 || e > n {
        return Err(Error::Precondition(format!("need 1 <= e <= n, got e = {e}, n = {n}")));
    }
    let (n, j, e) = (n as i64, j as i64, e as i64);
    Ok(binomial_ratio(n - j, n, e) * j as f64 + binomial_ratio(j, n, e) * (n - j) as f64)
}

/// Average QFI of a bundled cycle (k ≥ 5 bundles of j = n/k) after
/// `1 <= e < 2j` erasures.
pub fn qfi_erasure_cyclic_formula(n: usize, k: usize, e: usize) -> Result<f64> {
    let j = bundle_size(n, k)?;
    if k < 5 {
        return Err(Error::Precondition(format!("cyclic erasure formula needs k >= 5, got k = {k}")));
    }
    if e == 0 || e >= 2 * j {
        return Err(Error::Precondition(format!("cyclic erasure formula needs 1 <= e < 2j = {}, got e = {e}", 2 * j)));
    }
    let (nn, jj, ee) = (n as i64, j as i64, e as i64);
    let r = |a: i64| binomial_ratio(a, nn, ee);
    let quadratic = (2.0 * r(nn - 4 * jj) - r(nn - 5 * jj)) * (nn * jj) as f64;
    let linear = (2.0 * r(nn - 2 * jj) - r(nn - 3 * jj) - 2.0 * r(nn - 4 * jj) + r(nn - 5 * jj)) * nn as f64;
    Ok(quadratic + linear)
}
