//! Fixed local measurement strategies for small-phase estimation.
//!
//! A stabilizer built only from `Y` and `Z` letters anticommutes with every
//! `X_i`, so measuring it on the encoded state gives
//! `⟨S⟩ = 1 − θ²Q/2 + O(θ⁴)` and a precision of `1/Q` as `θ → 0`. Graphs
//! without such a stabilizer can borrow one extra qubit (the `G⁺`
//! construction) to fix the letters that are not `Y`/`Z`.

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::graph::{partition, Graph};
use crate::oracle::{evolve, graph_state_vector, pauli_expectation};
use crate::pauli::{Letter, Phase, PauliOperator};
use crate::qfi::qfi_graph;
use crate::stabilizer::{enumerate_group, generators_from_graph, StabilizerGroup};

/// Central-difference step for ∂θ⟨S⟩.
pub const DERIVATIVE_STEP: f64 = 1e-5;
const MIN_DERIVATIVE: f64 = 1e-12;

/// A graph, the stabilizer to measure and the qubits that carry θ.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementPlan {
    graph: Graph,
    observable: PauliOperator,
    extended: bool,
    base_qfi: f64,
    theta_domain: f64,
}

impl MeasurementPlan {
    /// Plan measuring a `+1` Y/Z stabilizer of `g` directly.
    pub fn direct(g: &Graph, observable: PauliOperator) -> Result<Self> {
        check_member(g, &observable)?;
        if let Some(q) = (0..g.n()).find(|&q| !is_yz(observable.letter(q))) {
            return Err(Error::Precondition(format!("{observable} has letter {} on qubit {q}", observable.letter(q).as_char())));
        }
        Self::build(g.clone(), observable, false, qfi_graph(g)?.value)
    }

    /// Plan on `G⁺` for a pairing stabilizer `s` of `g`.
    pub fn extended(g: &Graph, s: &PauliOperator) -> Result<Self> {
        let (plus, observable) = extend_graph_plus(g, s)?;
        Self::build(plus, observable, true, qfi_graph(g)?.value)
    }

    fn build(graph: Graph, observable: PauliOperator, extended: bool, base_qfi: f64) -> Result<Self> {
        let theta_domain = 0.1 / base_qfi.sqrt();
        Ok(MeasurementPlan { graph, observable, extended, base_qfi, theta_domain })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn observable(&self) -> &PauliOperator {
        &self.observable
    }

    pub fn is_extended(&self) -> bool {
        self.extended
    }

    /// QFI of the graph the phase is written on (the original graph for
    /// extended plans).
    pub fn target_qfi(&self) -> f64 {
        self.base_qfi
    }

    /// Phases with |θ| below this keep the O(θ³) corrections small.
    pub fn theta_domain(&self) -> f64 {
        self.theta_domain
    }

    /// Qubits that carry the phase. The appended qubit of an extended plan is
    /// a reference and is left untouched.
    pub fn encoded_qubits(&self) -> Vec<usize> {
        let n = if self.extended { self.graph.n() - 1 } else { self.graph.n() };
        (0..n).collect()
    }
}

fn is_yz(l: Letter) -> bool {
    matches!(l, Letter::Y | Letter::Z)
}

fn check_member(g: &Graph, p: &PauliOperator) -> Result<()> {
    if p.n() != g.n() {
        return Err(Error::DimensionMismatch { left: g.n(), right: p.n() });
    }
    if !generators_from_graph(g).contains(p)? {
        return Err(Error::Precondition(format!("{p} is not a stabilizer of the graph state")));
    }
    Ok(())
}

/// Lowest element by letter string, `I < X < Y < Z` on qubit 0 first.
fn pick_smallest(cands: impl Iterator<Item = PauliOperator>) -> Option<PauliOperator> {
    cands.min_by(|a, b| a.letters().cmp(&b.letters()))
}

/// The `+1` group element made only of `Y` and `Z` letters with the smallest
/// letter string, if any.
pub fn find_yz_stabilizer(s: &StabilizerGroup) -> Result<Option<PauliOperator>> {
    let all = Bits::ones(s.n());
    let elements = enumerate_group(s)?;
    Ok(pick_smallest(elements.filter(|e| e.sign() == Some(1) && e.z_mask() == &all)))
}

/// `true` when every open class of `g` carries letters from one side of
/// `{Y, Z} | {X, I}`, i.e. the Z bit is constant on the class.
fn is_pairing(g: &Graph, s: &PauliOperator) -> bool {
    partition(g).open_classes.iter().all(|c| {
        let first = s.z_mask().get(c.members[0]);
        c.members.iter().all(|&m| s.z_mask().get(m) == first)
    })
}

/// A stabilizer of `g` whose letters never split an open class between
/// `{Y, Z}` and `{X, I}`. Non-identity elements are preferred.
pub fn find_pairing_stabilizer(g: &Graph) -> Result<Option<PauliOperator>> {
    g.require_no_isolated()?;
    let s = generators_from_graph(g);
    let elements = enumerate_group(&s)?;
    let found = pick_smallest(elements.filter(|e| !e.is_identity_string() && is_pairing(g, e)));
    Ok(found.or_else(|| Some(PauliOperator::identity(g.n()))))
}

/// Append vertex `n` joined to `C_S = {i : s_i ∈ {X, I}}` and return
/// `(G⁺, S̃)` with `S̃ = g_{n+1}·S⁺`, where `S⁺` is the same product of
/// graph generators as `s`, taken in `G⁺`.
///
/// `S̃` has `Y`/`Z` letters on qubits `0..n` and `X` or `Y` on qubit `n`,
/// depending on whether `s` has an even or odd number of `X` letters.
pub fn extend_graph_plus(g: &Graph, s: &PauliOperator) -> Result<(Graph, PauliOperator)> {
    g.require_no_isolated()?;
    check_member(g, s).map_err(|e| Error::InvalidPairing(e.to_string()))?;
    if !is_pairing(g, s) {
        return Err(Error::InvalidPairing(format!("{s} splits an open class")));
    }
    let n = g.n();
    let c_s: Vec<usize> = (0..n).filter(|&i| !s.z_mask().get(i)).collect();
    if c_s.is_empty() {
        return Err(Error::IsolatedVertex(n));
    }
    let plus = g.with_appended_vertex(&c_s)?;
    let lifted = generators_from_graph(&plus).product(&s.x_mask().resized(n + 1));
    let g_new = PauliOperator::from_parts(Phase::PLUS_ONE, Bits::from_indices(n + 1, [n]), Bits::from_indices(n + 1, c_s));
    let tilde = g_new.multiply(&lifted)?;
    debug_assert!(tilde.is_hermitian());
    Ok((plus, tilde))
}

/// Y/Z stabilizer plan when one exists, otherwise the `G⁺` plan built from
/// the preferred pairing stabilizer.
pub fn synthesize_plan(g: &Graph) -> Result<MeasurementPlan> {
    g.require_no_isolated()?;
    if let Some(s) = find_yz_stabilizer(&generators_from_graph(g))? {
        return MeasurementPlan::direct(g, s);
    }
    match find_pairing_stabilizer(g)? {
        Some(s) => MeasurementPlan::extended(g, &s),
        None => Err(Error::Precondition("no pairing stabilizer".into())),
    }
}

/// ⟨S⟩ after encoding each θ with exp(−iθ/2 Σ X_i).
pub fn expectation_curve(plan: &MeasurementPlan, thetas: &[f64]) -> Result<Vec<f64>> {
    let psi = graph_state_vector(&plan.graph)?;
    let active = plan.encoded_qubits();
    thetas
        .iter()
        .map(|&t| pauli_expectation(&evolve(&psi, t, &active)?, &plan.observable))
        .collect()
}

/// (⟨S⟩, ∂θ⟨S⟩) at each θ, derivative by central difference.
fn value_and_slope(plan: &MeasurementPlan, thetas: &[f64]) -> Result<Vec<(f64, f64)>> {
    let mut pts = Vec::with_capacity(3 * thetas.len());
    for &t in thetas {
        pts.extend([t, t - DERIVATIVE_STEP, t + DERIVATIVE_STEP]);
    }
    let vals = expectation_curve(plan, &pts)?;
    Ok(vals.chunks(3).map(|c| (c[0], (c[2] - c[1]) / (2.0 * DERIVATIVE_STEP))).collect())
}

/// Δθ² = (1 − ⟨S⟩²) / |∂θ⟨S⟩|².
pub fn precision_curve(plan: &MeasurementPlan, thetas: &[f64]) -> Result<Vec<f64>> {
    let vs = value_and_slope(plan, thetas)?;
    thetas
        .iter()
        .zip(vs)
        .map(|(&t, (v, d))| {
            if d.abs() < MIN_DERIVATIVE {
                Err(Error::Uninformative(t))
            } else {
                Ok((1.0 - v * v) / (d * d))
            }
        })
        .collect()
}

/// Fisher information of the two-outcome measurement, (∂θ⟨S⟩)² / (1 − ⟨S⟩²).
pub fn fisher_information(plan: &MeasurementPlan, thetas: &[f64]) -> Result<Vec<f64>> {
    precision_curve(plan, thetas).map(|v| v.into_iter().map(|d| 1.0 / d).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{bundled_cycle, bundled_star, complete, path, star};
    use crate::oracle::apply_pauli;
    use crate::stabilizer::classify_x_forms;
    use approx::assert_relative_eq;

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    #[test]
    fn yz_examples() {
        let k2 = generators_from_graph(&complete(2).unwrap());
        assert_eq!(find_yz_stabilizer(&k2).unwrap(), Some(p("YY")));
        assert_eq!(find_yz_stabilizer(&generators_from_graph(&star(4).unwrap())).unwrap(), Some(p("YYZZ")));
        assert_eq!(find_yz_stabilizer(&generators_from_graph(&path(3).unwrap())).unwrap(), Some(p("YYZ")));
        assert_eq!(find_yz_stabilizer(&generators_from_graph(&path(4).unwrap())).unwrap(), Some(p("ZYYZ")));
        assert_eq!(find_yz_stabilizer(&generators_from_graph(&crate::graph::cycle(5).unwrap())).unwrap(), None);
    }

    #[test]
    fn yz_bundled_families() {
        for k in 2..5 {
            for j in 1..4 {
                let s = generators_from_graph(&bundled_star(k, j).unwrap().graph);
                assert!(find_yz_stabilizer(&s).unwrap().is_some(), "bundled star {k}x{j}");
            }
        }
        for j in 1..3 {
            for k in [3, 5, 6, 7] {
                let s = generators_from_graph(&bundled_cycle(k, j).unwrap().graph);
                assert!(find_yz_stabilizer(&s).unwrap().is_none(), "bundled cycle {k}x{j}");
            }
            for k in [4, 8] {
                let s = generators_from_graph(&bundled_cycle(k, j).unwrap().graph);
                assert!(find_yz_stabilizer(&s).unwrap().is_some(), "bundled cycle {k}x{j}");
            }
        }
    }

    #[test]
    fn yz_guard() {
        let g = generators_from_graph(&star(25).unwrap());
        assert!(matches!(find_yz_stabilizer(&g), Err(Error::SizeGuard { .. })));
    }

    #[test]
    fn pairing_examples() {
        let k2 = complete(2).unwrap();
        assert_eq!(find_pairing_stabilizer(&k2).unwrap(), Some(p("XZ")));
        let p3 = path(3).unwrap();
        assert!(is_pairing(&p3, &p("ZXZ")));
        // Open twins share a neighbourhood, so every graph stabilizer gives
        // them the same Z bit.
        let g = bundled_star(3, 2).unwrap().graph;
        for e in enumerate_group(&generators_from_graph(&g)).unwrap() {
            assert!(is_pairing(&g, &e));
        }
        assert!(!is_pairing(&g, &p("IZIIII")));
    }

    #[test]
    fn extension_of_path3() {
        let (plus, tilde) = extend_graph_plus(&path(3).unwrap(), &p("ZXZ")).unwrap();
        assert_eq!(plus.edges(), vec![(0, 1), (1, 2), (1, 3)]);
        assert_eq!(tilde, p("+ZYZY"));
        assert!(generators_from_graph(&plus).contains(&tilde).unwrap());
    }

    #[test]
    fn extension_errors() {
        let s4 = star(4).unwrap();
        assert!(matches!(extend_graph_plus(&s4, &p("YYZZ")), Err(Error::IsolatedVertex(4))));
        assert!(matches!(extend_graph_plus(&s4, &p("-ZXII")), Err(Error::InvalidPairing(_))));
        assert!(matches!(extend_graph_plus(&s4, &p("XXII")), Err(Error::InvalidPairing(_))));
    }

    #[test]
    fn extension_keeps_x_pairs_and_qfi() {
        for (_, g) in crate::graph::family_set(6) {
            let Some(s) = find_pairing_stabilizer(&g).unwrap() else { continue };
            let Ok((plus, tilde)) = extend_graph_plus(&g, &s) else { continue };
            let n = g.n();
            assert!((0..n).all(|q| is_yz(tilde.letter(q))));
            assert!(matches!(tilde.letter(n), Letter::X | Letter::Y));
            assert!(qfi_graph(&plus).unwrap().value >= qfi_graph(&g).unwrap().value);
            let before = generators_from_graph(&g);
            let after = generators_from_graph(&plus);
            for i in 0..n {
                for j in (i + 1)..n {
                    if before.contains(&PauliOperator::x_string(n, &[i, j])).unwrap() {
                        assert!(after.contains(&PauliOperator::x_string(n + 1, &[i, j])).unwrap());
                    }
                }
            }
            assert!(classify_x_forms(&after).count_xixj >= classify_x_forms(&before).count_xixj);
        }
    }

    #[test]
    fn curve_examples() {
        let plan = synthesize_plan(&star(4).unwrap()).unwrap();
        assert!(!plan.is_extended());
        let v = expectation_curve(&plan, &[0.0, 0.01]).unwrap();
        assert_relative_eq!(v[0], 1.0, epsilon = 1e-12);
        assert!((v[1] - (1.0 - 0.5 * 1e-4 * 10.0)).abs() <= 1e-5);

        let k2 = synthesize_plan(&complete(2).unwrap()).unwrap();
        let thetas = [0.3, -0.3, std::f64::consts::PI, -std::f64::consts::PI];
        let c = expectation_curve(&k2, &thetas).unwrap();
        assert_relative_eq!(c[0], c[1], epsilon = 1e-12);
        assert_relative_eq!(c[2], c[3], epsilon = 1e-12);
        let prec = precision_curve(&k2, &[0.01]).unwrap()[0];
        assert!((prec * 2.0 - 1.0).abs() < 0.01);
    }

    #[test]
    fn precision_at_zero_is_uninformative() {
        let plan = synthesize_plan(&star(4).unwrap()).unwrap();
        assert_eq!(precision_curve(&plan, &[0.0]), Err(Error::Uninformative(0.0)));
    }

    #[test]
    fn extended_plan_for_path3() {
        let plan = synthesize_plan(&crate::graph::cycle(5).unwrap()).unwrap();
        assert!(plan.is_extended());
        let plan = MeasurementPlan::extended(&path(3).unwrap(), &p("ZXZ")).unwrap();
        assert_eq!(plan.target_qfi(), 5.0);
        let d = precision_curve(&plan, &[0.01]).unwrap()[0];
        assert!((d * 5.0 - 1.0).abs() < 0.01);
    }

    #[test]
    fn fisher_information_bounded_by_qfi() {
        for g in [star(4).unwrap(), complete(2).unwrap(), bundled_star(2, 2).unwrap().graph, path(4).unwrap(), path(5).unwrap()] {
            let plan = synthesize_plan(&g).unwrap();
            let q = plan.target_qfi();
            let thetas: Vec<f64> = (1..20).map(|i| i as f64 * 0.07).collect();
            for f in fisher_information(&plan, &thetas).unwrap() {
                assert!(f <= q * (1.0 + 1e-6));
            }
            let f0 = fisher_information(&plan, &[0.01]).unwrap()[0];
            assert!((f0 / q - 1.0).abs() < 0.01);
        }
    }

    #[test]
    fn yz_operators_reverse_the_phase() {
        let g = path(4).unwrap();
        let psi = graph_state_vector(&g).unwrap();
        let all = [0, 1, 2, 3];
        for s in ["+YZYZ", "-ZZZZ", "+YYYY", "+ZYZY"] {
            let s = p(s);
            for theta in [0.2, 1.1, -2.5] {
                let lhs = apply_pauli(&evolve(&psi, theta, &all).unwrap(), &s).unwrap();
                let rhs = evolve(&apply_pauli(&psi, &s).unwrap(), -theta, &all).unwrap();
                let dev = lhs.amplitudes().iter().zip(rhs.amplitudes()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
                assert!(dev < 1e-10);
            }
        }
    }
}
