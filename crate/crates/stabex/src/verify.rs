//! Exact verification of constructed formulations.
//!
//! Two independent routes are checked and both must pass:
//!
//! * every facet of the stable set polytope (vertex nonnegativity and
//!   maximal clique rank inequalities) is valid on the projection of the
//!   formulation, established by an exact linear program per facet;
//! * every stable set of the graph lifts into the formulation, via the
//!   stored witness when present and an exact feasibility program otherwise.
//!
//! Together these pin the projection to the stable set polytope itself. A
//! separate randomized check compares the clique relaxation against brute
//! force enumeration on integer objectives, exposing any graph whose
//! relaxation is not integral.
//!
//! All comparisons are exact rational equalities; there are no tolerances
//! anywhere.

use crate::extform::{witness_satisfies, ExtendedFormulation};
use crate::family::{maximal_cliques, set_label, stable_sets, EnumError, EnumLimits};
use crate::graph::Graph;
use crate::linalg::{rat, Rat};
use crate::lp::{lp_max, LinearProgram, LpError, LpOutcome};
use crate::slack::RowLabel;
use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("invalid parameter: {0}")]
    ParameterError(String),
    #[error("no lift exists: {0}")]
    LiftFailure(String),
    #[error("label mismatch: {0}")]
    LabelMismatch(String),
    #[error(transparent)]
    Enum(#[from] EnumError),
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// Outcome of maximizing one facet's left-hand side over the formulation.
#[derive(Clone, Debug)]
pub struct FacetCheck {
    pub label: String,
    pub bound: Rat,
    /// Exact optimum when the program was bounded and feasible.
    pub value: Option<Rat>,
    pub ok: bool,
}

/// Outcome of lifting one stable set into the formulation.
#[derive(Clone, Debug)]
pub struct LiftCheck {
    pub label: String,
    pub via_witness: bool,
    pub ok: bool,
}

#[derive(Clone, Debug)]
pub struct EfReport {
    pub facet_checks: Vec<FacetCheck>,
    pub lift_checks: Vec<LiftCheck>,
    pub pass: bool,
}

/// Outcome of one random-objective comparison between the clique relaxation
/// and brute force enumeration.
#[derive(Clone, Debug)]
pub struct StabCheck {
    pub objective: Vec<i64>,
    pub lp_value: Rat,
    pub enum_value: Rat,
    pub ok: bool,
}

#[derive(Clone, Debug)]
pub struct StabReport {
    pub checks: Vec<StabCheck>,
    pub pass: bool,
}

fn facet_rows(g: &Graph, limits: &EnumLimits) -> Result<Vec<(RowLabel, Vec<Rat>, Rat)>, EnumError> {
    let n = g.n();
    let mut rows = Vec::new();
    for v in 0..n {
        let mut a = vec![Rat::zero(); n];
        a[v] = rat(-1);
        rows.push((RowLabel::Vertex(v), a, rat(0)));
    }
    for c in maximal_cliques(g, limits)?.iter() {
        let mut a = vec![Rat::zero(); n];
        for &v in c {
            a[v] = rat(1);
        }
        rows.push((RowLabel::Clique(c.to_vec()), a, rat(1)));
    }
    Ok(rows)
}

fn lift_system(ef: &ExtendedFormulation, set: &[usize]) -> LinearProgram {
    let r = ef.size();
    let eq = (0..ef.rows())
        .map(|i| {
            let lhs: Rat =
                set.iter().map(|&v| ef.e[(i, v)].clone()).fold(Rat::zero(), |a, b| a + b);
            (ef.f.row(i).to_vec(), &ef.g[i] - &lhs)
        })
        .collect();
    LinearProgram {
        maximize: vec![Rat::zero(); r],
        eq,
        ineq: Vec::new(),
        nonneg: vec![true; r],
    }
}

/// Finds an exact nonnegative lift of a stable set indicator vector,
/// preferring the stored witness and falling back to a feasibility program.
pub fn lift_vertex(ef: &ExtendedFormulation, set: &[usize]) -> Result<Vec<Rat>, VerifyError> {
    let mut key = set.to_vec();
    key.sort_unstable();
    key.dedup();
    if key.iter().any(|&v| v >= ef.dim()) {
        return Err(VerifyError::LabelMismatch(format!(
            "set {key:?} is out of range for a formulation on {} variables",
            ef.dim()
        )));
    }
    if let Some(w) = ef.witnesses.get(&key) {
        if witness_satisfies(ef, &key, w) {
            return Ok(w.clone());
        }
    }
    match lp_max(&lift_system(ef, &key))? {
        LpOutcome::Optimal { point, .. } => Ok(point),
        _ => Err(VerifyError::LiftFailure(format!(
            "the indicator vector of {key:?} has no nonnegative lift"
        ))),
    }
}

/// Certifies that the formulation's projection is exactly the stable set
/// polytope, facet programs one way and stable set lifts the other.
pub fn verify_ef(
    g: &Graph,
    ef: &ExtendedFormulation,
    limits: &EnumLimits,
) -> Result<EfReport, VerifyError> {
    if ef.x_names != g.names() {
        return Err(VerifyError::LabelMismatch(
            "formulation names do not match the graph".into(),
        ));
    }
    let d = ef.dim();
    let r = ef.size();
    let mut facet_checks = Vec::new();
    for (label, a, beta) in facet_rows(g, limits)? {
        // max a.x over E x + F t = g, t >= 0, x free.
        let mut objective = a;
        objective.extend(std::iter::repeat(Rat::zero()).take(r));
        let eq = (0..ef.rows())
            .map(|i| {
                let mut row = ef.e.row(i).to_vec();
                row.extend(ef.f.row(i).iter().cloned());
                (row, ef.g[i].clone())
            })
            .collect();
        let mut nonneg = vec![false; d];
        nonneg.extend(std::iter::repeat(true).take(r));
        let lp = LinearProgram { maximize: objective, eq, ineq: Vec::new(), nonneg };
        let (value, ok) = match lp_max(&lp)? {
            LpOutcome::Optimal { value, .. } => {
                let ok = value <= beta;
                (Some(value), ok)
            }
            _ => (None, false),
        };
        facet_checks.push(FacetCheck { label: label.render(g), bound: beta, value, ok });
    }
    let mut lift_checks = Vec::new();
    for set in stable_sets(g, limits)?.iter() {
        let label = set_label(g, set);
        match ef.witnesses.get(set) {
            Some(w) if witness_satisfies(ef, set, w) => {
                lift_checks.push(LiftCheck { label, via_witness: true, ok: true });
            }
            _ => {
                let ok = matches!(lp_max(&lift_system(ef, set))?, LpOutcome::Optimal { .. });
                lift_checks.push(LiftCheck { label, via_witness: false, ok });
            }
        }
    }
    let pass = facet_checks.iter().all(|c| c.ok) && lift_checks.iter().all(|c| c.ok);
    Ok(EfReport { facet_checks, lift_checks, pass })
}

/// Compares the clique relaxation against brute force stable set
/// enumeration on seeded random integer objectives. The two optima agree
/// exactly on every objective precisely when the relaxation is the stable
/// set polytope itself.
pub fn verify_stab_description(
    g: &Graph,
    trials: usize,
    seed: u64,
    limits: &EnumLimits,
) -> Result<StabReport, VerifyError> {
    if trials == 0 {
        return Err(VerifyError::ParameterError(
            "the number of trials must be positive".into(),
        ));
    }
    let n = g.n();
    let cliques = maximal_cliques(g, limits)?;
    let stabs = stable_sets(g, limits)?;
    let ineq: Vec<(Vec<Rat>, Rat)> = cliques
        .iter()
        .map(|c| {
            let mut row = vec![Rat::zero(); n];
            for &v in c {
                row[v] = rat(1);
            }
            (row, rat(1))
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::with_capacity(trials);
    for _ in 0..trials {
        let objective: Vec<i64> = (0..n).map(|_| rng.gen_range(-9..=9)).collect();
        let lp = LinearProgram {
            maximize: objective.iter().map(|&c| rat(c)).collect(),
            eq: Vec::new(),
            ineq: ineq.clone(),
            nonneg: vec![true; n],
        };
        let lp_value = match lp_max(&lp)? {
            LpOutcome::Optimal { value, .. } => value,
            other => {
                return Err(VerifyError::ParameterError(format!(
                    "the clique relaxation is bounded and nonempty, yet the program returned {other:?}"
                )))
            }
        };
        let enum_value = stabs
            .iter()
            .map(|set| set.iter().map(|&v| objective[v]).sum::<i64>())
            .max()
            .map(rat)
            .unwrap_or_else(|| rat(0));
        let ok = lp_value == enum_value;
        checks.push(StabCheck { objective, lp_value, enum_value, ok });
    }
    let pass = checks.iter().all(|c| c.ok);
    Ok(StabReport { checks, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extform::ef_from_facets;
    use crate::graph;
    use crate::linalg::ratio;

    fn lim() -> EnumLimits {
        EnumLimits::default()
    }

    #[test]
    fn facet_formulations_verify() {
        for g in [
            graph::complete(3),
            graph::path(4),
            graph::cycle(6),
            graph::complete_bipartite(2, 3),
        ] {
            let ef = ef_from_facets(&g, &lim()).unwrap();
            let report = verify_ef(&g, &ef, &lim()).unwrap();
            assert!(report.pass, "{:?}", report);
            assert!(report.lift_checks.iter().all(|c| c.via_witness));
            // Each facet is attained, not merely bounded.
            for c in &report.facet_checks {
                assert_eq!(c.value.as_ref(), Some(&c.bound), "{}", c.label);
            }
        }
    }

    #[test]
    fn verification_catches_a_dropped_facet() {
        // Remove the clique row of K2: the projection becomes too large and
        // the edge inequality fails the facet program.
        let g = graph::complete(2);
        let mut ef = ef_from_facets(&g, &lim()).unwrap();
        let keep = 2;
        ef.e = crate::linalg::Mat::from_fn(keep, 2, |i, j| ef.e[(i, j)].clone());
        ef.f = crate::linalg::Mat::from_fn(keep, ef.size(), |i, j| ef.f[(i, j)].clone());
        ef.g.truncate(keep);
        let report = verify_ef(&g, &ef, &lim()).unwrap();
        assert!(!report.pass);
        let clique = report.facet_checks.iter().find(|c| c.label.starts_with("C:")).unwrap();
        assert!(!clique.ok);
    }

    #[test]
    fn verification_catches_a_tightened_system() {
        // Force x to be the all-zero point: all lifts except the empty set
        // disappear while the facet programs still pass.
        let g = graph::complete(2);
        let mut ef = ef_from_facets(&g, &lim()).unwrap();
        for i in 0..ef.rows() {
            ef.g[i] = Rat::zero();
        }
        ef.witnesses.clear();
        let report = verify_ef(&g, &ef, &lim()).unwrap();
        assert!(!report.pass);
        let failed: Vec<_> = report.lift_checks.iter().filter(|c| !c.ok).collect();
        assert_eq!(failed.len(), 2);
    }

    #[test]
    fn lift_vertex_prefers_witnesses_and_solves_otherwise() {
        let g = graph::path(3);
        let mut ef = ef_from_facets(&g, &lim()).unwrap();
        let set = vec![0usize, 2];
        let stored = lift_vertex(&ef, &set).unwrap();
        ef.witnesses.clear();
        let solved = lift_vertex(&ef, &set).unwrap();
        assert!(witness_satisfies(&ef, &set, &stored));
        assert!(witness_satisfies(&ef, &set, &solved));
    }

    #[test]
    fn lift_vertex_rejects_a_non_stable_set() {
        let g = graph::complete(2);
        let ef = ef_from_facets(&g, &lim()).unwrap();
        // Both endpoints of an edge: the clique row forces a negative slack.
        let err = lift_vertex(&ef, &[0, 1]).unwrap_err();
        assert!(matches!(err, VerifyError::LiftFailure(_)));
        let err = lift_vertex(&ef, &[0, 7]).unwrap_err();
        assert!(matches!(err, VerifyError::LabelMismatch(_)));
    }

    #[test]
    fn stab_description_passes_on_perfect_graphs() {
        for g in [graph::path(5), graph::cycle(6), graph::complete(4)] {
            let report = verify_stab_description(&g, 12, 7, &lim()).unwrap();
            assert!(report.pass);
            assert_eq!(report.checks.len(), 12);
        }
    }

    #[test]
    fn stab_description_flags_an_odd_hole() {
        // All-ones is only one certificate; with enough random objectives at
        // least one exposes the fractional vertex of the C5 relaxation.
        let g = graph::cycle(5);
        let report = verify_stab_description(&g, 40, 3, &lim()).unwrap();
        assert!(!report.pass);
        let bad = report.checks.iter().find(|c| !c.ok).unwrap();
        assert!(bad.lp_value > bad.enum_value);
    }

    #[test]
    fn stab_description_gap_value_on_c5_all_ones() {
        // Direct check of the canonical gap: the relaxation optimum is 5/2
        // while the largest stable set has two vertices.
        let g = graph::cycle(5);
        let n = g.n();
        let cliques = maximal_cliques(&g, &lim()).unwrap();
        let ineq: Vec<(Vec<Rat>, Rat)> = cliques
            .iter()
            .map(|c| {
                let mut row = vec![Rat::zero(); n];
                for &v in c {
                    row[v] = rat(1);
                }
                (row, rat(1))
            })
            .collect();
        let lp = LinearProgram {
            maximize: vec![rat(1); n],
            eq: Vec::new(),
            ineq,
            nonneg: vec![true; n],
        };
        match lp_max(&lp).unwrap() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, ratio(5, 2)),
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn zero_trials_is_a_parameter_error() {
        let g = graph::path(3);
        let err = verify_stab_description(&g, 0, 0, &lim()).unwrap_err();
        assert!(matches!(err, VerifyError::ParameterError(_)));
    }

    #[test]
    fn seeded_runs_are_reproducible() {
        let g = graph::cycle(6);
        let a = verify_stab_description(&g, 6, 11, &lim()).unwrap();
        let b = verify_stab_description(&g, 6, 11, &lim()).unwrap();
        let objs_a: Vec<_> = a.checks.iter().map(|c| c.objective.clone()).collect();
        let objs_b: Vec<_> = b.checks.iter().map(|c| c.objective.clone()).collect();
        assert_eq!(objs_a, objs_b);
    }
}
