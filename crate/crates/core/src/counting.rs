//! Exact stabilizer-state counts, the lower bound on states with large QFI,
//! and an exhaustive census for very small systems.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::bits::Bits;
use crate::combinatorics::binomial_big;
use crate::error::{Error, Result};
use crate::oracle::{qfi_pure, stabilizer_state_vector};
use crate::pauli::{Letter, Phase, PauliOperator};
use crate::stabilizer::StabilizerGroup;

/// Largest `n` for [`empirical_census`].
pub const CENSUS_LIMIT: usize = 3;

/// Exact nonnegative integer.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BigCount(BigUint);

impl BigCount {
    pub fn value(&self) -> &BigUint {
        &self.0
    }

    /// Leading digits in `d.ddddde+N` form.
    pub fn scientific(&self, digits: usize) -> String {
        let s = self.0.to_string();
        let digits = digits.max(1);
        let exp = s.len() - 1;
        let mut mant: Vec<u8> = s.bytes().take(digits).collect();
        // Round half up on the next digit.
        if s.len() > digits && s.as_bytes()[digits] >= b'5' {
            let mut i = mant.len();
            loop {
                if i == 0 {
                    mant.insert(0, b'1');
                    mant.pop();
                    return format_sci(&mant, exp + 1);
                }
                i -= 1;
                if mant[i] == b'9' {
                    mant[i] = b'0';
                } else {
                    mant[i] += 1;
                    break;
                }
            }
        }
        format_sci(&mant, exp)
    }
}

fn format_sci(mant: &[u8], exp: usize) -> String {
    let head = mant[0] as char;
    let tail: String = mant[1..].iter().map(|&b| b as char).collect();
    if tail.is_empty() {
        format!("{head}e{exp}")
    } else {
        format!("{head}.{tail}e{exp}")
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl From<u64> for BigCount {
    fn from(v: u64) -> Self {
        BigCount(BigUint::from(v))
    }
}

impl From<BigUint> for BigCount {
    fn from(v: BigUint) -> Self {
        BigCount(v)
    }
}

/// N_n = 2^n Π_{k=1}^{n} (2^k + 1).
pub fn stabilizer_state_count(n: u32) -> BigCount {
    let mut acc = BigUint::one() << n;
    for k in 1..=n {
        acc *= (BigUint::one() << k) + 1u32;
    }
    BigCount(acc)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetrologyBound {
    /// Σ_{j=k}^{n} C(n−1, j−1) 2^j N_{n−j}.
    pub full: BigCount,
    /// The `j = k` term alone.
    pub simple: BigCount,
    pub k: u32,
}

/// k = ⌈n^{1−ε/2}⌉, read to within 1e-9 of an integer before rounding up.
pub fn bound_threshold(n: u32, epsilon: f64) -> u32 {
    let raw = (n as f64).powf(1.0 - epsilon / 2.0);
    let near = raw.round();
    let k = if (raw - near).abs() < 1e-9 { near } else { raw.ceil() };
    (k as u32).clamp(1, n)
}

/// Lower bound on the number of n-qubit stabilizer states with QFI at least
/// n^{2−ε}.
pub fn metrology_bound(n: u32, epsilon: f64) -> Result<MetrologyBound> {
    if n < 2 {
        return Err(Error::Precondition(format!("metrology bound needs n >= 2, got {n}")));
    }
    if !(epsilon > 0.0 && epsilon <= 2.0) {
        return Err(Error::Precondition(format!("epsilon must lie in (0, 2], got {epsilon}")));
    }
    let k = bound_threshold(n, epsilon);
    let term = |j: u32| {
        binomial_big(n as u64 - 1, j as u64 - 1) * (BigUint::one() << j) * stabilizer_state_count(n - j).0
    };
    let full = (k..=n).map(term).sum();
    Ok(MetrologyBound { full: BigCount(full), simple: BigCount(term(k)), k })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub n: usize,
    pub total: BigCount,
    pub above_threshold: BigCount,
    /// QFI value (always an integer for stabilizer states) → number of states.
    pub histogram: BTreeMap<u64, u64>,
}

/// Symplectic vector packed as `x | z << n`.
type Packed = u64;

fn packed_commute(a: Packed, b: Packed, n: usize) -> bool {
    let mask = (1u64 << n) - 1;
    let (ax, az, bx, bz) = (a & mask, a >> n, b & mask, b >> n);
    ((ax & bz).count_ones() + (az & bx).count_ones()) % 2 == 0
}

/// Reduced row echelon basis of the span of `rows`, or `None` if dependent.
fn rref(rows: &[Packed]) -> Option<Vec<Packed>> {
    let mut basis: Vec<Packed> = Vec::new();
    for &r in rows {
        let mut v = r;
        for &b in &basis {
            let pivot = 63 - b.leading_zeros();
            if v >> pivot & 1 == 1 {
                v ^= b;
            }
        }
        if v == 0 {
            return None;
        }
        let pivot = 63 - v.leading_zeros();
        for b in basis.iter_mut() {
            if *b >> pivot & 1 == 1 {
                *b ^= v;
            }
        }
        basis.push(v);
    }
    basis.sort_unstable();
    Some(basis)
}

/// Every maximal commuting subspace of the n-qubit symplectic space, as a
/// canonical basis.
fn lagrangian_subspaces(n: usize) -> Vec<Vec<Packed>> {
    let top = 1u64 << (2 * n);
    let mut seen: HashSet<Vec<Packed>> = HashSet::new();
    let mut out = Vec::new();
    let mut chosen: Vec<Packed> = Vec::with_capacity(n);
    fn extend(
        start: Packed,
        top: Packed,
        n: usize,
        chosen: &mut Vec<Packed>,
        seen: &mut HashSet<Vec<Packed>>,
        out: &mut Vec<Vec<Packed>>,
    ) {
        if chosen.len() == n {
            if let Some(b) = rref(chosen) {
                if seen.insert(b.clone()) {
                    out.push(b);
                }
            }
            return;
        }
        for v in start..top {
            if chosen.iter().all(|&c| packed_commute(c, v, n)) && rref(&[chosen.as_slice(), &[v]].concat()).is_some() {
                chosen.push(v);
                extend(v + 1, top, n, chosen, seen, out);
                chosen.pop();
            }
        }
    }
    extend(1, top, n, &mut chosen, &mut seen, &mut out);
    out.sort();
    out
}

fn packed_to_pauli(v: Packed, n: usize, negative: bool) -> PauliOperator {
    let mask = (1u64 << n) - 1;
    let phase = if negative { Phase::MINUS_ONE } else { Phase::PLUS_ONE };
    PauliOperator::from_parts(phase, Bits::from_u64(n, v & mask), Bits::from_u64(n, v >> n))
}

/// Every n-qubit stabilizer group, one per state.
pub fn all_stabilizer_groups(n: usize) -> Result<Vec<StabilizerGroup>> {
    if n > CENSUS_LIMIT {
        return Err(Error::SizeGuard { what: "stabilizer census", n, limit: CENSUS_LIMIT });
    }
    if n == 0 {
        return Err(Error::Precondition("census needs n >= 1".into()));
    }
    let mut groups = Vec::new();
    for basis in lagrangian_subspaces(n) {
        for signs in 0..1u32 << n {
            let gens = basis.iter().enumerate().map(|(i, &v)| packed_to_pauli(v, n, signs >> i & 1 == 1)).collect();
            groups.push(StabilizerGroup::new(gens)?);
        }
    }
    Ok(groups)
}

/// Enumerate all n-qubit stabilizer states (n ≤ 3) and bin their QFI.
pub fn empirical_census(n: usize, threshold: f64) -> Result<Census> {
    let groups = all_stabilizer_groups(n)?;
    let mut histogram = BTreeMap::new();
    let mut above = 0u64;
    for g in &groups {
        let q = qfi_pure(&stabilizer_state_vector(g)?);
        if q >= threshold - 1e-9 {
            above += 1;
        }
        *histogram.entry(q.round().to_u64().unwrap_or(0)).or_insert(0) += 1;
    }
    Ok(Census { n, total: BigCount::from(groups.len() as u64), above_threshold: BigCount::from(above), histogram })
}

/// ⟨X_a X_b : b ∈ partners⟩ with a = 0, `P` on `{0} ∪ partners`, and `P·g`
/// for every generator `g` of `sub` placed on the remaining qubits in order.
pub fn lower_bound_group(
    n: usize,
    partners: &[usize],
    p_letters: &[Letter],
    sub: Option<&StabilizerGroup>,
) -> Result<StabilizerGroup> {
    let mut core: Vec<usize> = std::iter::once(0).chain(partners.iter().copied()).collect();
    core.sort_unstable();
    core.dedup();
    let k = core.len();
    if k != partners.len() + 1 || core.iter().any(|&q| q >= n) {
        return Err(Error::Precondition("partners must be distinct qubits in 1..n".into()));
    }
    if p_letters.len() != k || p_letters.iter().any(|l| !matches!(l, Letter::Y | Letter::Z)) {
        return Err(Error::Precondition(format!("P needs {k} letters from {{Y, Z}}")));
    }
    let rest: Vec<usize> = (0..n).filter(|q| !core.contains(q)).collect();
    let sub_n = sub.map_or(0, StabilizerGroup::n);
    if sub_n != rest.len() {
        return Err(Error::DimensionMismatch { left: rest.len(), right: sub_n });
    }
    let mut p = PauliOperator::identity(n);
    for (&q, &l) in core.iter().zip(p_letters) {
        p.set_letter(q, l);
    }
    let mut gens: Vec<PauliOperator> = partners.iter().map(|&b| PauliOperator::x_string(n, &[0, b])).collect();
    gens.push(p.clone());
    if let Some(sub) = sub {
        for g in sub.generators() {
            let mut placed = PauliOperator::identity(n).with_phase(g.phase());
            for (i, &q) in rest.iter().enumerate() {
                placed.set_letter(q, g.letter(i));
            }
            gens.push(p.multiply(&placed)?);
        }
    }
    StabilizerGroup::new(gens)
}

/// Sorted list of all group elements, used to compare groups for equality.
pub fn group_fingerprint(s: &StabilizerGroup) -> Result<Vec<String>> {
    let mut v: Vec<String> = crate::stabilizer::enumerate_group(s)?.map(|e| e.to_string()).collect();
    v.sort();
    Ok(v)
}
