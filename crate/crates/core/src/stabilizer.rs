//! Stabilizer groups: construction from graphs, enumeration, GF(2)
//! membership and the X-form census that drives the QFI counting formula.

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::pauli::{Letter, Phase, PauliOperator};

/// Largest `n` for which the full `2^n` group may be enumerated.
pub const ENUMERATION_LIMIT: usize = 24;

/// `n` independent, pairwise commuting Hermitian generators on `n` qubits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerGroup {
    n: usize,
    generators: Vec<PauliOperator>,
}

impl StabilizerGroup {
    pub fn new(generators: Vec<PauliOperator>) -> Result<Self> {
        let n = generators.len();
        for (i, g) in generators.iter().enumerate() {
            if g.n() != n {
                return Err(Error::InvalidGroup(format!("generator {i} acts on {} qubits, expected {n}", g.n())));
            }
            if !g.is_hermitian() {
                return Err(Error::InvalidGroup(format!("generator {i} ({g}) is not Hermitian")));
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if !generators[i].commutes_unchecked(&generators[j]) {
                    return Err(Error::InvalidGroup(format!("generators {i} and {j} anticommute")));
                }
            }
        }
        let group = StabilizerGroup { n, generators };
        // Independence is checked by the solver's elimination.
        GroupSolver::new(&group)?;
        Ok(group)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    /// Signed membership: true iff `p` itself (with its phase) is in the group.
    pub fn contains(&self, p: &PauliOperator) -> Result<bool> {
        if p.n() != self.n {
            return Err(Error::DimensionMismatch { left: self.n, right: p.n() });
        }
        Ok(GroupSolver::new(self)?.element_with_string(p).is_some_and(|e| &e == p))
    }

    /// Product of the generators selected by `mask`.
    pub fn product(&self, mask: &Bits) -> PauliOperator {
        let mut acc = PauliOperator::identity(self.n);
        for i in mask.iter_ones() {
            acc = acc.mul_unchecked(&self.generators[i]);
        }
        acc
    }
}

/// Graph-state generators: `X` on vertex `i`, `Z` on `N(i)`, sign `+1`.
pub fn generators_from_graph(g: &Graph) -> StabilizerGroup {
    let n = g.n();
    let generators = (0..n)
        .map(|i| PauliOperator::from_parts(Phase::PLUS_ONE, Bits::from_indices(n, [i]), g.neighbor_bits(i)))
        .collect();
    StabilizerGroup { n, generators }
}

/// Iterator over all `2^n` group elements in Gray-code order, identity first.
pub struct GroupElements<'a> {
    group: &'a StabilizerGroup,
    current: PauliOperator,
    mask: Bits,
    step: u64,
    total: u64,
}

impl<'a> GroupElements<'a> {
    /// Generator subset that produced the element most recently yielded.
    pub fn current_mask(&self) -> &Bits {
        &self.mask
    }
}

impl Iterator for GroupElements<'_> {
    type Item = PauliOperator;

    fn next(&mut self) -> Option<PauliOperator> {
        if self.step >= self.total {
            return None;
        }
        if self.step > 0 {
            let b = self.step.trailing_zeros() as usize;
            // Generators commute and square to identity, so right-multiplying
            // toggles generator b in the product.
            self.current = self.current.mul_unchecked(&self.group.generators[b]);
            self.mask.flip(b);
        }
        self.step += 1;
        Some(self.current.clone())
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.step) as usize;
        (left, Some(left))
    }
}

/// Stream every group element exactly once with its exact sign.
pub fn enumerate_group(s: &StabilizerGroup) -> Result<GroupElements<'_>> {
    if s.n > ENUMERATION_LIMIT {
        return Err(Error::SizeGuard { what: "group enumeration", n: s.n, limit: ENUMERATION_LIMIT });
    }
    Ok(GroupElements { group: s, current: PauliOperator::identity(s.n), mask: Bits::zeros(s.n), step: 0, total: 1u64 << s.n })
}

struct EchelonRow {
    pivot: usize,
    vector: Bits,
    combination: Bits,
}

/// Row-reduced symplectic generator matrix for GF(2) membership queries.
pub struct GroupSolver<'a> {
    group: &'a StabilizerGroup,
    rows: Vec<EchelonRow>,
}

impl<'a> GroupSolver<'a> {
    pub fn new(group: &'a StabilizerGroup) -> Result<Self> {
        let n = group.n;
        let mut rows: Vec<EchelonRow> = Vec::with_capacity(n);
        for (i, g) in group.generators.iter().enumerate() {
            let mut vector = g.symplectic();
            let mut combination = Bits::from_indices(n, [i]);
            for row in &rows {
                if vector.get(row.pivot) {
                    vector.xor_assign(&row.vector);
                    combination.xor_assign(&row.combination);
                }
            }
            match vector.first_one_from(0) {
                Some(pivot) => rows.push(EchelonRow { pivot, vector, combination }),
                None => return Err(Error::InvalidGroup(format!("generator {i} is a product of earlier generators"))),
            }
        }
        Ok(GroupSolver { group, rows })
    }

    /// Generator subset whose product has the same letters as `p`.
    pub fn solve(&self, p: &PauliOperator) -> Option<Bits> {
        let mut target = p.symplectic();
        let mut combination = Bits::zeros(self.group.n);
        for row in &self.rows {
            if target.get(row.pivot) {
                target.xor_assign(&row.vector);
                combination.xor_assign(&row.combination);
            }
        }
        target.is_zero().then_some(combination)
    }

    /// The group element with the letters of `p` (carrying whatever sign the
    /// group assigns), or `None` if neither `+p` nor `-p` is in the group.
    pub fn element_with_string(&self, p: &PauliOperator) -> Option<PauliOperator> {
        self.solve(p).map(|mask| self.group.product(&mask))
    }
}

/// Census of X-type stabilizers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XFormReport {
    /// Unordered pairs `i < j` with `+X_i X_j` in the group.
    pub count_xixj: usize,
    /// Some `±X_i` or `-X_i X_j` is in the group.
    pub has_bad_form: bool,
    pub bad_witness: Option<PauliOperator>,
}

/// Count `+X_iX_j` stabilizers and look for `±X_i` / `-X_iX_j`, using one
/// GF(2) solve per candidate rather than enumerating the group.
pub fn classify_x_forms(s: &StabilizerGroup) -> XFormReport {
    let solver = GroupSolver::new(s).expect("validated group");
    let n = s.n;
    let mut witness = None;
    for i in 0..n {
        let cand = PauliOperator::single(n, i, Letter::X);
        if let Some(e) = solver.element_with_string(&cand) {
            witness.get_or_insert(e);
        }
    }
    let mut count = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            let cand = PauliOperator::x_string(n, &[i, j]);
            if let Some(e) = solver.element_with_string(&cand) {
                if e.sign() == Some(1) {
                    count += 1;
                } else {
                    witness.get_or_insert(e);
                }
            }
        }
    }
    XFormReport { count_xixj: count, has_bad_form: witness.is_some(), bad_witness: witness }
}
