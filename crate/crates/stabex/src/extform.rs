//! Extended formulations of stable set polytopes in slack form.
//!
//! A formulation here is a system `E x + F t = g, t >= 0` whose projection
//! to the `x` variables is the stable set polytope of a graph. Its size is
//! the number of `t` variables, i.e. the number of inequalities. A
//! nonnegative factorization `S = T U` of the slack matrix yields one
//! directly (`F = T`, one equation per facet, and the columns of `U` lift
//! the polytope's vertices); conversely, any valid formulation can be
//! turned back into a factorization of the same inner dimension by deriving
//! each facet from the equation system with an exact dual linear program.
//!
//! Substitution composes at this level: replacing a vertex `u` of `G1` by a
//! whole graph `G2` only needs the two systems glued along one scalar (the
//! indicator of "the copy of `G2` is occupied"), and that scalar can be
//! eliminated exactly, so the sizes add with no overhead.

use crate::family::{stable_sets, EnumError, EnumLimits};
use crate::graph::{validate_certificate, BasicCertificate, Graph, GraphError};
use crate::linalg::{rat, Mat, Rat};
use crate::lp::{lp_max, LinearProgram, LpError, LpOutcome};
use crate::slack::{build_slack, RowLabel};
use crate::factor::{FactorError, NonnegFactorization};
use num::{Signed, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExtFormError {
    #[error("label mismatch: {0}")]
    LabelMismatch(String),
    #[error("formulation check failed: {0}")]
    InternalCompositionError(String),
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error(transparent)]
    Enum(#[from] EnumError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// Slack-form extended formulation `{x : exists t >= 0, E x + F t = g}` of a
/// stable set polytope, with an exact lift stored for every stable set.
///
/// Witness keys are sorted vertex index sets in the `x_names` order; the
/// stored vector is the `t` part of the lift.
#[derive(Clone, Debug)]
pub struct ExtendedFormulation {
    pub x_names: Vec<String>,
    pub t_names: Vec<String>,
    pub e: Mat,
    pub f: Mat,
    pub g: Vec<Rat>,
    pub witnesses: BTreeMap<Vec<usize>, Vec<Rat>>,
}

impl ExtendedFormulation {
    /// Number of inequalities: the dimension of the nonnegative `t` block.
    pub fn size(&self) -> usize {
        self.f.ncols()
    }

    pub fn dim(&self) -> usize {
        self.e.ncols()
    }

    pub fn rows(&self) -> usize {
        self.e.nrows()
    }

    fn t_names_for(r: usize) -> Vec<String> {
        (0..r).map(|i| format!("t{i}")).collect()
    }
}

/// Checks that a stored witness satisfies its system exactly.
pub fn witness_satisfies(ef: &ExtendedFormulation, set: &[usize], t: &[Rat]) -> bool {
    if t.len() != ef.size() || !t.iter().all(|x| !x.is_negative()) {
        return false;
    }
    for i in 0..ef.rows() {
        let mut lhs = set.iter().map(|&v| ef.e[(i, v)].clone()).fold(Rat::zero(), |a, b| a + b);
        for (j, tj) in t.iter().enumerate() {
            lhs += &ef.f[(i, j)] * tj;
        }
        if lhs != ef.g[i] {
            return false;
        }
    }
    true
}

/// Converts a nonnegative factorization of the slack matrix into a
/// formulation of the same size: one equation per facet row, `F = T`, and
/// the columns of `U` as witnesses.
pub fn ef_from_factorization(
    g: &Graph,
    f: &NonnegFactorization,
) -> Result<ExtendedFormulation, ExtFormError> {
    if f.names != g.names() {
        return Err(ExtFormError::LabelMismatch(
            "factorization names do not match the graph".into(),
        ));
    }
    let d = g.n();
    let m = f.row_labels.len();
    let mut e = Mat::zeros(m, d);
    let mut rhs = Vec::with_capacity(m);
    for (i, label) in f.row_labels.iter().enumerate() {
        match label {
            RowLabel::Vertex(v) => {
                e[(i, *v)] = rat(-1);
                rhs.push(rat(0));
            }
            RowLabel::Clique(c) => {
                for &v in c {
                    e[(i, v)] = rat(1);
                }
                rhs.push(rat(1));
            }
        }
    }
    let witnesses = f
        .col_sets
        .iter()
        .enumerate()
        .map(|(j, set)| (set.clone(), f.u.col(j)))
        .collect();
    Ok(ExtendedFormulation {
        x_names: g.names().to_vec(),
        t_names: ExtendedFormulation::t_names_for(f.t.ncols()),
        e,
        f: f.t.clone(),
        g: rhs,
        witnesses,
    })
}

/// The clique-description formulation: one slack variable per facet of the
/// stable set polytope, size `|V| + #maximal cliques`.
pub fn ef_from_facets(g: &Graph, limits: &EnumLimits) -> Result<ExtendedFormulation, ExtFormError> {
    let s = build_slack(g, limits)?;
    ef_from_factorization(g, &crate::factor::facet_factorization(&s))
}

/// Star-based formulation for a line graph of a bipartite root: one row per
/// line-graph vertex plus one row per maximal star of the root. For
/// bipartite roots the maximal cliques of the line graph are exactly the
/// maximal stars, so this is the clique description assembled without ever
/// enumerating cliques of the line graph. Size at most `2 |V|`.
pub fn ef_from_stars(
    g: &Graph,
    cert: &BasicCertificate,
    limits: &EnumLimits,
) -> Result<ExtendedFormulation, ExtFormError> {
    let BasicCertificate::LineBipartite { root, vertex_edge } = cert else {
        return Err(ExtFormError::LabelMismatch(
            "star formulation needs a line-of-bipartite certificate".into(),
        ));
    };
    validate_certificate(g, cert)?;
    // Edge behind each line vertex, as root indices.
    let edge_of: Vec<(usize, usize)> = (0..g.n())
        .map(|v| {
            let (_, (r1, r2)) = vertex_edge
                .iter()
                .find(|(name, _)| g.index_of(name) == Some(v))
                .expect("certificate covers every vertex");
            let a = root.index_of(r1).expect("validated");
            let b = root.index_of(r2).expect("validated");
            (a.min(b), a.max(b))
        })
        .collect();
    // Star centers: every root vertex with an edge, except pendants hanging
    // off a vertex of larger degree (their star is strictly contained) and
    // the higher endpoint of a single-edge component (equal stars).
    let mut centers = Vec::new();
    for w in 0..root.n() {
        let deg = root.degree(w);
        if deg == 0 {
            continue;
        }
        if deg == 1 {
            let nb = root.neighbors(w)[0];
            if root.degree(nb) > 1 || nb < w {
                continue;
            }
        }
        centers.push(w);
    }
    let d = g.n();
    let m = d + centers.len();
    let r = m;
    let mut e = Mat::zeros(m, d);
    let mut rhs = Vec::with_capacity(m);
    for v in 0..d {
        e[(v, v)] = rat(-1);
        rhs.push(rat(0));
    }
    for (k, &w) in centers.iter().enumerate() {
        for v in 0..d {
            if edge_of[v].0 == w || edge_of[v].1 == w {
                e[(d + k, v)] = rat(1);
            }
        }
        rhs.push(rat(1));
    }
    let f = Mat::identity(r);
    // Witness per stable set: the slack of each row, exactly.
    let mut witnesses = BTreeMap::new();
    for set in stable_sets(g, limits)?.iter() {
        let mut t = Vec::with_capacity(r);
        for i in 0..m {
            let lhs: Rat = set.iter().map(|&v| e[(i, v)].clone()).fold(Rat::zero(), |a, b| a + b);
            let slack = &rhs[i] - &lhs;
            if slack.is_negative() {
                return Err(ExtFormError::InternalCompositionError(format!(
                    "star row {i} has negative slack on stable set {set:?}"
                )));
            }
            t.push(slack);
        }
        witnesses.insert(set.to_vec(), t);
    }
    Ok(ExtendedFormulation {
        x_names: g.names().to_vec(),
        t_names: ExtendedFormulation::t_names_for(r),
        e,
        f,
        g: rhs,
        witnesses,
    })
}

/// Composes formulations across vertex substitution: `g` must be `g1` with
/// vertex `u` replaced by `g2`. The two systems share one scalar, the
/// indicator of the substituted copy being occupied, which appears as `x_u`
/// in the first system and as `g2`'s right-hand side scaling in the second;
/// it is eliminated exactly by pivoting on one equation. The result has
/// size exactly `size(ef1) + size(ef2)`.
pub fn ef_substitute(
    g: &Graph,
    g1: &Graph,
    u: usize,
    ef1: &ExtendedFormulation,
    g2: &Graph,
    ef2: &ExtendedFormulation,
) -> Result<ExtendedFormulation, ExtFormError> {
    if ef1.x_names != g1.names() || ef2.x_names != g2.names() {
        return Err(ExtFormError::LabelMismatch(
            "formulation names do not match the substitution parts".into(),
        ));
    }
    if u >= g1.n() {
        return Err(ExtFormError::LabelMismatch(format!("vertex index {u} out of range")));
    }
    // Where each composed x variable comes from: g1 minus u, or g2.
    enum Src {
        First(usize),
        Second(usize),
    }
    let src: Vec<Src> = g
        .names()
        .iter()
        .map(|name| {
            if name != g1.name(u) {
                if let Some(v) = g1.index_of(name) {
                    return Ok(Src::First(v));
                }
            }
            if let Some(v) = g2.index_of(name) {
                return Ok(Src::Second(v));
            }
            Err(ExtFormError::LabelMismatch(format!(
                "vertex {name:?} of the composed graph belongs to neither part"
            )))
        })
        .collect::<Result<_, _>>()?;
    if g.n() != g1.n() - 1 + g2.n() {
        return Err(ExtFormError::LabelMismatch(
            "composed graph does not have |V1| - 1 + |V2| vertices".into(),
        ));
    }

    let (m1, m2) = (ef1.rows(), ef2.rows());
    let (r1, r2) = (ef1.size(), ef2.size());
    let d = g.n();
    // Pivot equation of the second system: any row with nonzero rhs.
    let Some(p) = ef2.g.iter().position(|b| !b.is_zero()) else {
        return Err(ExtFormError::InternalCompositionError(
            "second formulation has no equation with nonzero right-hand side".into(),
        ));
    };
    let pivot_rhs = ef2.g[p].clone();

    // Row layout: all m1 rows of the first system (with x_u replaced by the
    // pivot expression), then the m2 - 1 non-pivot rows of the second
    // system (homogenized against the pivot row).
    let m = m1 + m2 - 1;
    let mut e = Mat::zeros(m, d);
    let mut f = Mat::zeros(m, r1 + r2);
    let mut rhs = Vec::with_capacity(m);

    // z := x_u = (E2[p] . y2 + F2[p] . t2) / pivot_rhs.
    let coeff_e2 = |col: usize| &ef2.e[(p, col)] / &pivot_rhs;
    let coeff_f2 = |col: usize| &ef2.f[(p, col)] / &pivot_rhs;

    for i in 0..m1 {
        let zcoef = ef1.e[(i, u)].clone();
        for (jx, s) in src.iter().enumerate() {
            match s {
                Src::First(v) => e[(i, jx)] = ef1.e[(i, *v)].clone(),
                Src::Second(v) => e[(i, jx)] = &zcoef * &coeff_e2(*v),
            }
        }
        for j in 0..r1 {
            f[(i, j)] = ef1.f[(i, j)].clone();
        }
        for j in 0..r2 {
            f[(i, r1 + j)] = &zcoef * &coeff_f2(j);
        }
        rhs.push(ef1.g[i].clone());
    }
    let mut row = m1;
    for i in 0..m2 {
        if i == p {
            continue;
        }
        // E2[i] y2 + F2[i] t2 - g2[i] z = 0.
        let zcoef = -ef2.g[i].clone();
        for (jx, s) in src.iter().enumerate() {
            if let Src::Second(v) = s {
                e[(row, jx)] = &ef2.e[(i, *v)] + &(&zcoef * &coeff_e2(*v));
            }
        }
        for j in 0..r2 {
            f[(row, r1 + j)] = &ef2.f[(i, j)] + &(&zcoef * &coeff_f2(j));
        }
        rhs.push(Rat::zero());
        row += 1;
    }

    // Witnesses: a stable set of g occupies the copy of g2 or not; in the
    // former case x_u lifts to 1 alongside the first part, in the latter the
    // whole second system is zeroed.
    let mut witnesses = BTreeMap::new();
    for (set1, w1) in &ef1.witnesses {
        if set1.contains(&u) {
            continue;
        }
        let base: Vec<usize> = (0..d)
            .filter(|&jx| matches!(&src[jx], Src::First(v) if set1.contains(v)))
            .collect();
        // Copy unoccupied: t2 = 0 solves the homogeneous second block.
        let mut t = w1.clone();
        t.extend(std::iter::repeat(Rat::zero()).take(r2));
        witnesses.insert(base.clone(), t);
    }
    for (set1, w1) in &ef1.witnesses {
        if !set1.contains(&u) {
            continue;
        }
        let base: Vec<usize> = (0..d)
            .filter(|&jx| matches!(&src[jx], Src::First(v) if set1.contains(v)))
            .collect();
        for (set2, w2) in &ef2.witnesses {
            if set2.is_empty() {
                continue;
            }
            let mut set: Vec<usize> = base.clone();
            set.extend(
                (0..d).filter(|&jx| matches!(&src[jx], Src::Second(v) if set2.contains(v))),
            );
            set.sort_unstable();
            let mut t = w1.clone();
            t.extend(w2.iter().cloned());
            witnesses.insert(set, t);
        }
    }

    let ef = ExtendedFormulation {
        x_names: g.names().to_vec(),
        t_names: ExtendedFormulation::t_names_for(r1 + r2),
        e,
        f,
        g: rhs,
        witnesses,
    };
    // Cheap exactness check: every stored witness must satisfy the system.
    for (set, t) in &ef.witnesses {
        if !witness_satisfies(&ef, set, t) {
            return Err(ExtFormError::InternalCompositionError(format!(
                "substitution witness for {set:?} does not satisfy the composed system"
            )));
        }
    }
    Ok(ef)
}

/// Drops linearly dependent equations. The kept rows are the first maximal
/// independent subset of `[E | F | g]` in row order; since the system is
/// consistent (witnesses exist), dependent rows are implied and the solution
/// set is unchanged. The size (number of `t` variables) is untouched.
pub fn reduce_equalities(ef: &ExtendedFormulation) -> ExtendedFormulation {
    let m = ef.rows();
    let width = ef.dim() + ef.size() + 1;
    let mut reduced: Vec<Vec<Rat>> = Vec::new();
    let mut keep = Vec::new();
    for i in 0..m {
        let mut row: Vec<Rat> = ef.e.row(i).to_vec();
        row.extend(ef.f.row(i).iter().cloned());
        row.push(ef.g[i].clone());
        // Reduce against the rows kept so far (each has a pivot column).
        for prev in &reduced {
            let pivot = prev.iter().position(|x| !x.is_zero()).expect("kept rows are nonzero");
            if row[pivot].is_zero() {
                continue;
            }
            let factor = &row[pivot] / &prev[pivot];
            for j in 0..width {
                let delta = &factor * &prev[j];
                row[j] -= delta;
            }
        }
        if row.iter().any(|x| !x.is_zero()) {
            reduced.push(row);
            keep.push(i);
        }
    }
    ExtendedFormulation {
        x_names: ef.x_names.clone(),
        t_names: ef.t_names.clone(),
        e: Mat::from_fn(keep.len(), ef.dim(), |i, j| ef.e[(keep[i], j)].clone()),
        f: Mat::from_fn(keep.len(), ef.size(), |i, j| ef.f[(keep[i], j)].clone()),
        g: keep.iter().map(|&i| ef.g[i].clone()).collect(),
        witnesses: ef.witnesses.clone(),
    }
}

/// Recovers a nonnegative factorization of the slack matrix from a valid
/// formulation, one exact dual linear program per facet: minimizing `g . mu`
/// over `E' mu = a, F' mu >= 0` proves `a . x <= beta` with multiplier
/// vector `mu`, and `F' mu` is the facet's row of the left factor. Witness
/// lifts supply the right factor. The inner dimension equals the
/// formulation size.
pub fn factorization_from_ef(
    g: &Graph,
    ef: &ExtendedFormulation,
    limits: &EnumLimits,
) -> Result<NonnegFactorization, ExtFormError> {
    if ef.x_names != g.names() {
        return Err(ExtFormError::LabelMismatch(
            "formulation names do not match the graph".into(),
        ));
    }
    let s = build_slack(g, limits)?;
    let (m, r, d) = (ef.rows(), ef.size(), ef.dim());
    let et = ef.e.transpose();
    let ft = ef.f.transpose();
    let mut t_rows: Vec<Vec<Rat>> = Vec::with_capacity(s.row_labels.len());
    for label in &s.row_labels {
        let (facet, beta): (Vec<Rat>, Rat) = match label {
            RowLabel::Vertex(v) => {
                let mut a = vec![Rat::zero(); d];
                a[*v] = rat(-1);
                (a, rat(0))
            }
            RowLabel::Clique(c) => {
                let mut a = vec![Rat::zero(); d];
                for &v in c {
                    a[v] = rat(1);
                }
                (a, rat(1))
            }
        };
        // min g . mu  s.t.  E' mu = a,  F' mu >= 0, mu free.
        let eq: Vec<(Vec<Rat>, Rat)> =
            (0..d).map(|j| (et.row(j).to_vec(), facet[j].clone())).collect();
        let ineq: Vec<(Vec<Rat>, Rat)> = (0..r)
            .map(|j| (ft.row(j).iter().map(|x| -x.clone()).collect(), Rat::zero()))
            .collect();
        let lp = LinearProgram {
            maximize: ef.g.iter().map(|x| -x.clone()).collect(),
            eq,
            ineq,
            nonneg: vec![false; m],
        };
        let (value, point) = match lp_max(&lp)? {
            LpOutcome::Optimal { value, point } => (value, point),
            other => {
                return Err(ExtFormError::InternalCompositionError(format!(
                    "facet {} cannot be derived from the formulation ({other:?})",
                    label.render(g)
                )))
            }
        };
        let bound = -value;
        if bound != beta {
            return Err(ExtFormError::InternalCompositionError(format!(
                "facet {} derives with bound {bound} instead of {beta}",
                label.render(g)
            )));
        }
        let t_row: Vec<Rat> = (0..r)
            .map(|j| ft.row(j).iter().zip(&point).fold(Rat::zero(), |acc, (a, b)| acc + a * b))
            .collect();
        if t_row.iter().any(|x| x.is_negative()) {
            return Err(ExtFormError::InternalCompositionError(format!(
                "facet {} derived with a negative multiplier on the slack block",
                label.render(g)
            )));
        }
        t_rows.push(t_row);
    }
    let t = Mat::from_rows(t_rows);
    let mut u = Mat::zeros(r, s.columns.len());
    for (jcol, set) in s.columns.iter().enumerate() {
        let w = ef.witnesses.get(set).ok_or_else(|| {
            ExtFormError::LabelMismatch(format!("formulation has no witness for {set:?}"))
        })?;
        if w.len() != r || w.iter().any(|x| x.is_negative()) {
            return Err(ExtFormError::InternalCompositionError(format!(
                "witness for {set:?} is not a nonnegative lift"
            )));
        }
        for (i, x) in w.iter().enumerate() {
            u[(i, jcol)] = x.clone();
        }
    }
    let f = NonnegFactorization {
        names: g.names().to_vec(),
        row_labels: s.row_labels.clone(),
        col_sets: s.columns.iter().map(|c| c.to_vec()).collect(),
        t,
        u,
    };
    crate::factor::verify_factorization(&f, &s)?;
    Ok(f)
}
