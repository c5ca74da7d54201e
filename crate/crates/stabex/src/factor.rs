//! Nonnegative factorizations of slack matrices, and the compositions that
//! assemble factorizations of a graph from factorizations of its parts.
//!
//! A factorization is a pair of nonnegative matrices `T` (facets x r) and
//! `U` (r x stable sets) with `T U = S`, the slack matrix. Its inner
//! dimension `r` is the number of inequalities of the extended formulation
//! it induces, so every composition here is a size bound made executable:
//!
//! * [`partition_compose`]: vertex partition, `r <= r1 + r2 + |C12|` where
//!   `C12` counts the maximal cliques meeting both parts;
//! * [`two_join_compose`]: 2-join, `r <= 3 r1 + 3 r2`;
//! * [`skew_compose`]: skew partition, `r <= 2 r11 + 2 r22 + r12 + r21`
//!   over the four induced children;
//! * [`complement_compose`]: complementation, `r' <= r + |V|`.
//!
//! Each composition multiplies its factors back together and compares the
//! product entry by entry against an independently built slack matrix of the
//! target graph before returning; a mismatch is an internal error, never a
//! silently wrong result.
//!
//! The workhorse behind the clique bookkeeping is row extension: for a
//! non-maximal clique `K` contained in a maximal clique `C`, the identity
//! `1 - |I & K| = (1 - |I & C|) + |I & (C \ K)|` writes the slack row of `K`
//! as a nonnegative combination of existing rows, so extended rows never
//! increase the inner dimension.

use crate::family::{EnumError, EnumLimits};
use crate::graph::{
    validate_certificate, validate_skew_partition, validate_two_join, BasicCertificate, Graph,
    GraphError, SkewPartitionData, TwoJoinData,
};
use crate::linalg::{rat, Mat, Rat};
use crate::slack::{build_slack, RowLabel, SlackMatrix};
use num::{Signed, Zero};
use std::collections::{HashMap, HashSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FactorError {
    /// Names, row labels, or column labels of the operands do not line up.
    #[error("label mismatch: {0}")]
    LabelMismatch(String),
    /// A coefficient or matrix entry required to be nonnegative is negative.
    #[error("not nonnegative: {0}")]
    NotNonnegative(String),
    /// A composed factorization failed its own exactness check, or an
    /// operand lacks structure the composition relies on.
    #[error("composition check failed: {0}")]
    InternalCompositionError(String),
    #[error(transparent)]
    Enum(#[from] EnumError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Nonnegative factorization `T U = S` of a slack matrix, carrying the
/// labels of the matrix it factorizes.
#[derive(Clone, Debug)]
pub struct NonnegFactorization {
    /// Vertex names of the graph whose slack matrix this factorizes.
    pub names: Vec<String>,
    /// Facet labels, one per row of `T`.
    pub row_labels: Vec<RowLabel>,
    /// Stable sets labelling the columns of `U`.
    pub col_sets: Vec<Vec<usize>>,
    /// Facets x r, nonnegative.
    pub t: Mat,
    /// r x stable sets, nonnegative.
    pub u: Mat,
}

impl NonnegFactorization {
    /// Inner dimension: the size of the induced extended formulation.
    pub fn r(&self) -> usize {
        self.t.ncols()
    }
}

/// Trivial factorization `S = I S`.
pub fn facet_factorization(s: &SlackMatrix) -> NonnegFactorization {
    NonnegFactorization {
        names: s.graph.names().to_vec(),
        row_labels: s.row_labels.clone(),
        col_sets: s.columns.iter().map(|c| c.to_vec()).collect(),
        t: Mat::identity(s.mat.nrows()),
        u: s.mat.clone(),
    }
}

/// Trivial factorization `S = S I`.
pub fn vertex_factorization(s: &SlackMatrix) -> NonnegFactorization {
    NonnegFactorization {
        names: s.graph.names().to_vec(),
        row_labels: s.row_labels.clone(),
        col_sets: s.columns.iter().map(|c| c.to_vec()).collect(),
        t: s.mat.clone(),
        u: Mat::identity(s.mat.ncols()),
    }
}

/// Checks that `f` is a genuine nonnegative factorization of `s`: labels
/// agree, both factors are nonnegative, and `T U` equals the slack matrix
/// entry by entry.
pub fn verify_factorization(f: &NonnegFactorization, s: &SlackMatrix) -> Result<(), FactorError> {
    if f.names != s.graph.names() {
        return Err(FactorError::LabelMismatch("vertex names differ from slack matrix".into()));
    }
    if f.row_labels != s.row_labels {
        return Err(FactorError::LabelMismatch("row labels differ from slack matrix".into()));
    }
    let scols: Vec<Vec<usize>> = s.columns.iter().map(|c| c.to_vec()).collect();
    if f.col_sets != scols {
        return Err(FactorError::LabelMismatch("column labels differ from slack matrix".into()));
    }
    if f.t.nrows() != f.row_labels.len()
        || f.u.ncols() != f.col_sets.len()
        || f.t.ncols() != f.u.nrows()
    {
        return Err(FactorError::LabelMismatch(format!(
            "factor shapes {}x{} and {}x{} do not match the labels",
            f.t.nrows(),
            f.t.ncols(),
            f.u.nrows(),
            f.u.ncols()
        )));
    }
    if !f.t.is_nonnegative() {
        return Err(FactorError::NotNonnegative("left factor has a negative entry".into()));
    }
    if !f.u.is_nonnegative() {
        return Err(FactorError::NotNonnegative("right factor has a negative entry".into()));
    }
    if f.t.mul(&f.u) != s.mat {
        return Err(FactorError::InternalCompositionError(
            "product of factors does not equal the slack matrix".into(),
        ));
    }
    Ok(())
}

/// Column-wise concatenation of two factorizations with identical rows:
/// `[S1 S2] = [T1 T2] [U1 0; 0 U2]`.
pub fn concat_columns(
    a: &NonnegFactorization,
    b: &NonnegFactorization,
) -> Result<NonnegFactorization, FactorError> {
    if a.names != b.names {
        return Err(FactorError::LabelMismatch("vertex names differ".into()));
    }
    if a.row_labels != b.row_labels {
        return Err(FactorError::LabelMismatch("row labels differ".into()));
    }
    let zero_tr = Mat::zeros(a.u.nrows(), b.u.ncols());
    let zero_bl = Mat::zeros(b.u.nrows(), a.u.ncols());
    let mut col_sets = a.col_sets.clone();
    col_sets.extend(b.col_sets.iter().cloned());
    Ok(NonnegFactorization {
        names: a.names.clone(),
        row_labels: a.row_labels.clone(),
        col_sets,
        t: a.t.hstack(&b.t),
        u: a.u.hstack(&zero_tr).vstack(&zero_bl.hstack(&b.u)),
    })
}

fn combine_rows(t: &Mat, coeffs: &[(usize, Rat)]) -> Result<Vec<Rat>, FactorError> {
    let mut row = vec![Rat::zero(); t.ncols()];
    for (i, c) in coeffs {
        if c.is_negative() {
            return Err(FactorError::NotNonnegative(format!(
                "row combination uses negative coefficient {c} on row {i}"
            )));
        }
        if *i >= t.nrows() {
            return Err(FactorError::LabelMismatch(format!(
                "row index {i} out of range for {} rows",
                t.nrows()
            )));
        }
        for (j, x) in t.row(*i).iter().enumerate() {
            row[j] += c * x;
        }
    }
    Ok(row)
}

/// Appends rows that are nonnegative combinations of existing rows. Each
/// addition is `(label, coefficients over existing row indices)`; the inner
/// dimension is unchanged.
pub fn row_extend(
    f: &NonnegFactorization,
    additions: &[(RowLabel, Vec<(usize, Rat)>)],
) -> Result<NonnegFactorization, FactorError> {
    let mut out = f.clone();
    for (label, coeffs) in additions {
        let row = combine_rows(&f.t, coeffs)?;
        out.t = out.t.vstack(&Mat::from_rows(vec![row]));
        out.row_labels.push(label.clone());
    }
    Ok(out)
}

/// Relabels and reuses columns: each entry of `new_cols` is a new column
/// label together with the source column of `U` it copies, or `None` for an
/// all-zero column.
pub fn column_map(
    f: &NonnegFactorization,
    new_cols: &[(Vec<usize>, Option<usize>)],
) -> Result<NonnegFactorization, FactorError> {
    for (_, src) in new_cols {
        if let Some(j) = src {
            if *j >= f.u.ncols() {
                return Err(FactorError::LabelMismatch(format!(
                    "source column {j} out of range for {} columns",
                    f.u.ncols()
                )));
            }
        }
    }
    let u = Mat::from_fn(f.u.nrows(), new_cols.len(), |i, j| match new_cols[j].1 {
        Some(src) => f.u[(i, src)].clone(),
        None => Rat::zero(),
    });
    Ok(NonnegFactorization {
        names: f.names.clone(),
        row_labels: f.row_labels.clone(),
        col_sets: new_cols.iter().map(|(c, _)| c.clone()).collect(),
        t: f.t.clone(),
        u,
    })
}

/// Greedily extends a clique to an inclusion-maximal one by repeatedly
/// adjoining the smallest-index compatible vertex.
pub fn complete_clique(g: &Graph, k: &[usize]) -> Vec<usize> {
    let mut c = k.to_vec();
    while let Some(&v) = g.common_neighbors(&c).first() {
        c.push(v);
    }
    c.sort_unstable();
    c
}

/// Row-extension coefficients expressing the slack row of clique `k` (given
/// in child indices) over the facet rows of the child: the completed maximal
/// clique row plus one vertex row per completion vertex.
fn extension_coeffs(
    child: &Graph,
    row_of: &HashMap<RowLabel, usize>,
    k: &[usize],
) -> Result<Vec<(usize, Rat)>, FactorError> {
    let completed = complete_clique(child, k);
    let clique_row = *row_of.get(&RowLabel::Clique(completed.clone())).ok_or_else(|| {
        FactorError::InternalCompositionError(format!(
            "child factorization has no row for maximal clique {completed:?}"
        ))
    })?;
    let mut coeffs = vec![(clique_row, rat(1))];
    for &v in &completed {
        if !k.contains(&v) {
            let vrow = *row_of.get(&RowLabel::Vertex(v)).ok_or_else(|| {
                FactorError::InternalCompositionError(format!(
                    "child factorization has no row for vertex {v}"
                ))
            })?;
            coeffs.push((vrow, rat(1)));
        }
    }
    Ok(coeffs)
}

/// Child factorization with index translation against a parent graph.
struct ChildCtx<'a> {
    f: &'a NonnegFactorization,
    graph: Graph,
    to_child: HashMap<usize, usize>,
    row_of: HashMap<RowLabel, usize>,
    col_of: HashMap<Vec<usize>, usize>,
}

impl<'a> ChildCtx<'a> {
    /// `verts` are sorted parent indices; `f` must factorize the slack
    /// matrix of the induced subgraph on them.
    fn build(parent: &Graph, verts: &[usize], f: &'a NonnegFactorization, which: &str) -> Result<Self, FactorError> {
        let graph = parent.induced(verts)?;
        if f.names != graph.names() {
            return Err(FactorError::LabelMismatch(format!(
                "{which}: factorization names {:?} do not match induced subgraph {:?}",
                f.names,
                graph.names()
            )));
        }
        let to_child = verts.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let row_of = f.row_labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        let col_of = f.col_sets.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        Ok(ChildCtx { f, graph, to_child, row_of, col_of })
    }

    /// Restriction of a parent vertex set to this child, in child indices.
    fn restrict(&self, parent_set: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> =
            parent_set.iter().filter_map(|v| self.to_child.get(v).copied()).collect();
        out.sort_unstable();
        out
    }

    fn col(&self, child_set: &[usize]) -> Result<usize, FactorError> {
        self.col_of.get(child_set).copied().ok_or_else(|| {
            FactorError::InternalCompositionError(format!(
                "child factorization has no column for stable set {child_set:?}"
            ))
        })
    }

    fn row(&self, label: &RowLabel) -> Result<usize, FactorError> {
        self.row_of.get(label).copied().ok_or_else(|| {
            FactorError::InternalCompositionError(format!(
                "child factorization has no row labelled {label:?}"
            ))
        })
    }

    fn extension(&self, child_clique: &[usize]) -> Result<Vec<(usize, Rat)>, FactorError> {
        extension_coeffs(&self.graph, &self.row_of, child_clique)
    }
}

fn check_partition_sets(g: &Graph, parts: &[&[usize]]) -> Result<(), FactorError> {
    let mut seen = vec![false; g.n()];
    for part in parts {
        for &v in *part {
            if v >= g.n() || seen[v] {
                return Err(FactorError::LabelMismatch(format!(
                    "vertex sets do not partition the graph (vertex {v})"
                )));
            }
            seen[v] = true;
        }
    }
    if seen.iter().any(|&b| !b) {
        return Err(FactorError::LabelMismatch("vertex sets do not cover the graph".into()));
    }
    Ok(())
}

fn finish(
    s: SlackMatrix,
    t: Mat,
    u: Mat,
    op: &str,
) -> Result<NonnegFactorization, FactorError> {
    if !t.is_nonnegative() || !u.is_nonnegative() {
        return Err(FactorError::NotNonnegative(format!("{op} produced a negative entry")));
    }
    if t.mul(&u) != s.mat {
        return Err(FactorError::InternalCompositionError(format!(
            "{op}: factor product does not reproduce the slack matrix"
        )));
    }
    Ok(NonnegFactorization {
        names: s.graph.names().to_vec(),
        row_labels: s.row_labels,
        col_sets: s.columns.iter().map(|c| c.to_vec()).collect(),
        t,
        u,
    })
}

/// Composes factorizations of the two sides of a vertex partition into one
/// of the whole graph. Maximal cliques meeting both sides each get a fresh
/// inequality, so the result has inner dimension `r1 + r2 + |C12|`.
pub fn partition_compose(
    g: &Graph,
    part1: &[usize],
    part2: &[usize],
    f1: &NonnegFactorization,
    f2: &NonnegFactorization,
    limits: &EnumLimits,
) -> Result<NonnegFactorization, FactorError> {
    let mut p1 = part1.to_vec();
    let mut p2 = part2.to_vec();
    p1.sort_unstable();
    p2.sort_unstable();
    check_partition_sets(g, &[&p1, &p2])?;
    let s = build_slack(g, limits)?;
    let c1 = ChildCtx::build(g, &p1, f1, "partition side 1")?;
    let c2 = ChildCtx::build(g, &p2, f2, "partition side 2")?;
    let side1: HashSet<usize> = p1.iter().copied().collect();

    // Rows: cliques inside one side reuse that side's facet row; cliques
    // meeting both sides get an identity row in a dedicated block.
    enum RK {
        Side1(usize),
        Side2(usize),
        Crossing(usize),
    }
    let mut kinds = Vec::with_capacity(s.row_labels.len());
    let mut crossing = 0usize;
    for label in &s.row_labels {
        let kind = match label {
            RowLabel::Vertex(v) => {
                if side1.contains(v) {
                    RK::Side1(c1.row(&RowLabel::Vertex(c1.to_child[v]))?)
                } else {
                    RK::Side2(c2.row(&RowLabel::Vertex(c2.to_child[v]))?)
                }
            }
            RowLabel::Clique(c) => {
                let in1 = c.iter().filter(|v| side1.contains(v)).count();
                if in1 == c.len() {
                    RK::Side1(c1.row(&RowLabel::Clique(c1.restrict(c)))?)
                } else if in1 == 0 {
                    RK::Side2(c2.row(&RowLabel::Clique(c2.restrict(c)))?)
                } else {
                    let k = crossing;
                    crossing += 1;
                    RK::Crossing(k)
                }
            }
        };
        kinds.push(kind);
    }

    let (r1, r2) = (f1.r(), f2.r());
    let width = r1 + r2 + crossing;
    let ncols = s.columns.len();
    let mut t = Mat::zeros(s.row_labels.len(), width);
    for (i, kind) in kinds.iter().enumerate() {
        match kind {
            RK::Side1(row) => {
                for (j, x) in f1.t.row(*row).iter().enumerate() {
                    t[(i, j)] = x.clone();
                }
            }
            RK::Side2(row) => {
                for (j, x) in f2.t.row(*row).iter().enumerate() {
                    t[(i, r1 + j)] = x.clone();
                }
            }
            RK::Crossing(k) => t[(i, r1 + r2 + k)] = rat(1),
        }
    }

    let mut u = Mat::zeros(width, ncols);
    for jcol in 0..ncols {
        let set = s.columns.get(jcol);
        let col1 = c1.col(&c1.restrict(set))?;
        let col2 = c2.col(&c2.restrict(set))?;
        for i in 0..r1 {
            u[(i, jcol)] = f1.u[(i, col1)].clone();
        }
        for i in 0..r2 {
            u[(r1 + i, jcol)] = f2.u[(i, col2)].clone();
        }
    }
    for (i, kind) in kinds.iter().enumerate() {
        if let RK::Crossing(k) = kind {
            let RowLabel::Clique(c) = &s.row_labels[i] else { unreachable!() };
            for jcol in 0..ncols {
                let hits = s.columns.get(jcol).iter().filter(|v| c.contains(v)).count() as i64;
                u[(r1 + r2 + k, jcol)] = rat(1 - hits);
            }
        }
    }
    finish(s, t, u, "partition composition")
}

/// Column classes of a 2-join, per stable set: restricted to one side, or
/// mixed with one of four containment patterns that decide which child can
/// reproduce each mixed clique row.
#[derive(Clone, Copy, PartialEq, Eq)]
enum JoinCol {
    Pure1,
    Pure2,
    I3,
    I4,
    I5,
    I6,
}

/// Composes along a 2-join. Both mixed clique families (`A1 x A2` cliques
/// and `B1 x B2` cliques) reuse rows of the children through row extension,
/// at the cost of one extra copy of each child per family: the result has
/// inner dimension at most `3 r1 + 3 r2`.
pub fn two_join_compose(
    g: &Graph,
    d: &TwoJoinData,
    f1: &NonnegFactorization,
    f2: &NonnegFactorization,
    limits: &EnumLimits,
) -> Result<NonnegFactorization, FactorError> {
    validate_two_join(g, d)?;
    let s = build_slack(g, limits)?;
    let mut v1 = d.v1.clone();
    let mut v2 = d.v2.clone();
    v1.sort_unstable();
    v2.sort_unstable();
    let c1 = ChildCtx::build(g, &v1, f1, "2-join side 1")?;
    let c2 = ChildCtx::build(g, &v2, f2, "2-join side 2")?;
    let side1: HashSet<usize> = v1.iter().copied().collect();
    let a1: HashSet<usize> = d.a1.iter().copied().collect();
    let b1: HashSet<usize> = d.b1.iter().copied().collect();
    let a2: HashSet<usize> = d.a2.iter().copied().collect();
    let b2: HashSet<usize> = d.b2.iter().copied().collect();

    // Row classes.
    enum RK {
        Side1(usize),
        Side2(usize),
        // Extension coefficients of the two restrictions, in f1 and f2.
        MixedA(Vec<(usize, Rat)>, Vec<(usize, Rat)>),
        MixedB(Vec<(usize, Rat)>, Vec<(usize, Rat)>),
    }
    let mut kinds = Vec::with_capacity(s.row_labels.len());
    let mut any_a = false;
    let mut any_b = false;
    for label in &s.row_labels {
        let kind = match label {
            RowLabel::Vertex(v) => {
                if side1.contains(v) {
                    RK::Side1(c1.row(&RowLabel::Vertex(c1.to_child[v]))?)
                } else {
                    RK::Side2(c2.row(&RowLabel::Vertex(c2.to_child[v]))?)
                }
            }
            RowLabel::Clique(c) => {
                let p1: Vec<usize> = c.iter().copied().filter(|v| side1.contains(v)).collect();
                let p2: Vec<usize> = c.iter().copied().filter(|v| !side1.contains(v)).collect();
                if p2.is_empty() {
                    RK::Side1(c1.row(&RowLabel::Clique(c1.restrict(c)))?)
                } else if p1.is_empty() {
                    RK::Side2(c2.row(&RowLabel::Clique(c2.restrict(c)))?)
                } else if p1.iter().all(|v| a1.contains(v)) && p2.iter().all(|v| a2.contains(v)) {
                    any_a = true;
                    RK::MixedA(c1.extension(&c1.restrict(&p1))?, c2.extension(&c2.restrict(&p2))?)
                } else if p1.iter().all(|v| b1.contains(v)) && p2.iter().all(|v| b2.contains(v)) {
                    any_b = true;
                    RK::MixedB(c1.extension(&c1.restrict(&p1))?, c2.extension(&c2.restrict(&p2))?)
                } else {
                    return Err(FactorError::InternalCompositionError(format!(
                        "mixed clique {label:?} does not respect the 2-join"
                    )));
                }
            }
        };
        kinds.push(kind);
    }

    // Column classes.
    let d1: Vec<usize> =
        v1.iter().copied().filter(|v| !a1.contains(v) && !b1.contains(v)).collect();
    let d2: Vec<usize> =
        v2.iter().copied().filter(|v| !a2.contains(v) && !b2.contains(v)).collect();
    let d1set: HashSet<usize> = d1.into_iter().collect();
    let d2set: HashSet<usize> = d2.into_iter().collect();
    let mut classes = Vec::with_capacity(s.columns.len());
    let mut cols1 = Vec::with_capacity(s.columns.len());
    let mut cols2 = Vec::with_capacity(s.columns.len());
    for set in s.columns.iter() {
        let i1: Vec<usize> = set.iter().copied().filter(|v| side1.contains(v)).collect();
        let i2: Vec<usize> = set.iter().copied().filter(|v| !side1.contains(v)).collect();
        let class = if i2.is_empty() {
            JoinCol::Pure1
        } else if i1.is_empty() {
            JoinCol::Pure2
        } else if i1.iter().all(|v| d1set.contains(v)) {
            JoinCol::I3
        } else if i1.iter().all(|v| d1set.contains(v) || a1.contains(v))
            && i2.iter().all(|v| d2set.contains(v) || b2.contains(v))
        {
            JoinCol::I4
        } else if i1.iter().all(|v| d1set.contains(v) || b1.contains(v))
            && i2.iter().all(|v| d2set.contains(v) || a2.contains(v))
        {
            JoinCol::I5
        } else if i2.iter().all(|v| d2set.contains(v)) {
            JoinCol::I6
        } else {
            return Err(FactorError::InternalCompositionError(format!(
                "stable set {set:?} does not respect the 2-join"
            )));
        };
        classes.push(class);
        cols1.push(c1.col(&c1.restrict(set))?);
        cols2.push(c2.col(&c2.restrict(set))?);
    }

    // Usage layout: side copies see every column; each mixed-family copy of
    // a child sees exactly the column classes on which the other side's
    // restriction contributes nothing to the slack.
    let (r1, r2) = (f1.r(), f2.r());
    let mut offset = 0usize;
    let u1_off = offset;
    offset += r1;
    let u2_off = offset;
    offset += r2;
    let ua1_off = if any_a { let o = offset; offset += r1; Some(o) } else { None };
    let ua2_off = if any_a { let o = offset; offset += r2; Some(o) } else { None };
    let ub1_off = if any_b { let o = offset; offset += r1; Some(o) } else { None };
    let ub2_off = if any_b { let o = offset; offset += r2; Some(o) } else { None };
    let width = offset;

    let mut t = Mat::zeros(s.row_labels.len(), width);
    for (i, kind) in kinds.iter().enumerate() {
        match kind {
            RK::Side1(row) => {
                for (j, x) in f1.t.row(*row).iter().enumerate() {
                    t[(i, u1_off + j)] = x.clone();
                }
            }
            RK::Side2(row) => {
                for (j, x) in f2.t.row(*row).iter().enumerate() {
                    t[(i, u2_off + j)] = x.clone();
                }
            }
            RK::MixedA(e1, e2) => {
                let row1 = combine_rows(&f1.t, e1)?;
                let row2 = combine_rows(&f2.t, e2)?;
                let (o1, o2) = (ua1_off.unwrap(), ua2_off.unwrap());
                for (j, x) in row1.into_iter().enumerate() {
                    t[(i, o1 + j)] = x;
                }
                for (j, x) in row2.into_iter().enumerate() {
                    t[(i, o2 + j)] = x;
                }
            }
            RK::MixedB(e1, e2) => {
                let row1 = combine_rows(&f1.t, e1)?;
                let row2 = combine_rows(&f2.t, e2)?;
                let (o1, o2) = (ub1_off.unwrap(), ub2_off.unwrap());
                for (j, x) in row1.into_iter().enumerate() {
                    t[(i, o1 + j)] = x;
                }
                for (j, x) in row2.into_iter().enumerate() {
                    t[(i, o2 + j)] = x;
                }
            }
        }
    }

    let mut u = Mat::zeros(width, s.columns.len());
    for jcol in 0..s.columns.len() {
        let class = classes[jcol];
        let put1 = |u: &mut Mat, off: usize| {
            for i in 0..r1 {
                u[(off + i, jcol)] = f1.u[(i, cols1[jcol])].clone();
            }
        };
        let put2 = |u: &mut Mat, off: usize| {
            for i in 0..r2 {
                u[(off + i, jcol)] = f2.u[(i, cols2[jcol])].clone();
            }
        };
        put1(&mut u, u1_off);
        put2(&mut u, u2_off);
        // A-family: side 1 covers columns whose side-2 part avoids A2
        // (Pure1, I4, I6); side 2 covers the complementary classes.
        if let (Some(o1), Some(o2)) = (ua1_off, ua2_off) {
            match class {
                JoinCol::Pure1 | JoinCol::I4 | JoinCol::I6 => put1(&mut u, o1),
                JoinCol::Pure2 | JoinCol::I3 | JoinCol::I5 => put2(&mut u, o2),
            }
        }
        // B-family: side 1 covers columns whose side-2 part avoids B2
        // (Pure1, I5, I6).
        if let (Some(o1), Some(o2)) = (ub1_off, ub2_off) {
            match class {
                JoinCol::Pure1 | JoinCol::I5 | JoinCol::I6 => put1(&mut u, o1),
                JoinCol::Pure2 | JoinCol::I3 | JoinCol::I4 => put2(&mut u, o2),
            }
        }
    }
    finish(s, t, u, "2-join composition")
}

/// Composes along a skew partition from factorizations of the four induced
/// children: `A1 | B1` with `A2 | B2` (the two sides), plus the two diagonal
/// children `A1 | B2` and `A2 | B1` used for mixed cliques. The result has
/// inner dimension at most `2 r11 + 2 r22 + r12 + r21`.
pub fn skew_compose(
    g: &Graph,
    d: &SkewPartitionData,
    f11: &NonnegFactorization,
    f22: &NonnegFactorization,
    f12: &NonnegFactorization,
    f21: &NonnegFactorization,
    limits: &EnumLimits,
) -> Result<NonnegFactorization, FactorError> {
    validate_skew_partition(g, d)?;
    let s = build_slack(g, limits)?;
    let sorted = |xs: &[usize], ys: &[usize]| {
        let mut v: Vec<usize> = xs.iter().chain(ys).copied().collect();
        v.sort_unstable();
        v
    };
    let v1 = sorted(&d.a1, &d.b1);
    let v2 = sorted(&d.a2, &d.b2);
    let v12 = sorted(&d.a1, &d.b2);
    let v21 = sorted(&d.a2, &d.b1);
    let c11 = ChildCtx::build(g, &v1, f11, "skew side 1")?;
    let c22 = ChildCtx::build(g, &v2, f22, "skew side 2")?;
    let c12 = ChildCtx::build(g, &v12, f12, "skew child A1|B2")?;
    let c21 = ChildCtx::build(g, &v21, f21, "skew child A2|B1")?;
    let side1: HashSet<usize> = v1.iter().copied().collect();
    let a1: HashSet<usize> = d.a1.iter().copied().collect();
    let a2: HashSet<usize> = d.a2.iter().copied().collect();
    let b1: HashSet<usize> = d.b1.iter().copied().collect();
    let b2: HashSet<usize> = d.b2.iter().copied().collect();

    // Mixed cliques: if the side-2 part stays inside A2, extend within side
    // 1 and within A2|B1; otherwise the side-1 part stays inside A1 (no
    // B1-B2 edges exist) and we extend within side 2 and within A1|B2.
    enum RK {
        Side1(usize),
        Side2(usize),
        Mixed3(Vec<(usize, Rat)>, Vec<(usize, Rat)>),
        Mixed4(Vec<(usize, Rat)>, Vec<(usize, Rat)>),
    }
    let mut kinds = Vec::with_capacity(s.row_labels.len());
    let mut any3 = false;
    let mut any4 = false;
    for label in &s.row_labels {
        let kind = match label {
            RowLabel::Vertex(v) => {
                if side1.contains(v) {
                    RK::Side1(c11.row(&RowLabel::Vertex(c11.to_child[v]))?)
                } else {
                    RK::Side2(c22.row(&RowLabel::Vertex(c22.to_child[v]))?)
                }
            }
            RowLabel::Clique(c) => {
                let p1: Vec<usize> = c.iter().copied().filter(|v| side1.contains(v)).collect();
                let p2: Vec<usize> = c.iter().copied().filter(|v| !side1.contains(v)).collect();
                if p2.is_empty() {
                    RK::Side1(c11.row(&RowLabel::Clique(c11.restrict(c)))?)
                } else if p1.is_empty() {
                    RK::Side2(c22.row(&RowLabel::Clique(c22.restrict(c)))?)
                } else if p2.iter().all(|v| a2.contains(v)) {
                    any3 = true;
                    // Extend C & V1 in side 1, and (C & B1) | (C & V2) in A2|B1.
                    let diag: Vec<usize> =
                        c.iter().copied().filter(|v| b1.contains(v) || !side1.contains(v)).collect();
                    RK::Mixed3(c11.extension(&c11.restrict(&p1))?, c21.extension(&c21.restrict(&diag))?)
                } else if p1.iter().all(|v| a1.contains(v)) {
                    any4 = true;
                    let diag: Vec<usize> =
                        c.iter().copied().filter(|v| a1.contains(v) || b2.contains(v)).collect();
                    RK::Mixed4(c22.extension(&c22.restrict(&p2))?, c12.extension(&c12.restrict(&diag))?)
                } else {
                    return Err(FactorError::InternalCompositionError(format!(
                        "mixed clique {label:?} does not respect the skew partition"
                    )));
                }
            }
        };
        kinds.push(kind);
    }

    // Column classes: pure columns, mixed columns avoiding A2 (their side-2
    // part lies in B2), and the remaining mixed columns, whose side-1 part
    // must then avoid A1.
    #[derive(Clone, Copy, PartialEq, Eq)]
    enum SkewCol {
        Pure1,
        Pure2,
        InB2,
        InB1,
    }
    let mut classes = Vec::with_capacity(s.columns.len());
    let mut cols11 = Vec::new();
    let mut cols22 = Vec::new();
    let mut cols12 = Vec::new();
    let mut cols21 = Vec::new();
    for set in s.columns.iter() {
        let i1: Vec<usize> = set.iter().copied().filter(|v| side1.contains(v)).collect();
        let i2: Vec<usize> = set.iter().copied().filter(|v| !side1.contains(v)).collect();
        let class = if i2.is_empty() {
            SkewCol::Pure1
        } else if i1.is_empty() {
            SkewCol::Pure2
        } else if i2.iter().all(|v| b2.contains(v)) {
            SkewCol::InB2
        } else if i1.iter().all(|v| b1.contains(v)) {
            SkewCol::InB1
        } else {
            return Err(FactorError::InternalCompositionError(format!(
                "stable set {set:?} does not respect the skew partition"
            )));
        };
        classes.push(class);
        cols11.push(c11.col(&c11.restrict(set))?);
        cols22.push(c22.col(&c22.restrict(set))?);
        cols12.push(c12.col(&c12.restrict(set))?);
        cols21.push(c21.col(&c21.restrict(set))?);
    }

    let (r11, r22, r12, r21) = (f11.r(), f22.r(), f12.r(), f21.r());
    let mut offset = 0usize;
    let u1_off = offset;
    offset += r11;
    let u2_off = offset;
    offset += r22;
    let m3a_off = if any3 { let o = offset; offset += r11; Some(o) } else { None };
    let m3b_off = if any3 { let o = offset; offset += r21; Some(o) } else { None };
    let m4a_off = if any4 { let o = offset; offset += r22; Some(o) } else { None };
    let m4b_off = if any4 { let o = offset; offset += r12; Some(o) } else { None };
    let width = offset;

    let mut t = Mat::zeros(s.row_labels.len(), width);
    let put_combo = |t: &mut Mat, i: usize, off: usize, row: Vec<Rat>| {
        for (j, x) in row.into_iter().enumerate() {
            t[(i, off + j)] = x;
        }
    };
    for (i, kind) in kinds.iter().enumerate() {
        match kind {
            RK::Side1(row) => {
                for (j, x) in f11.t.row(*row).iter().enumerate() {
                    t[(i, u1_off + j)] = x.clone();
                }
            }
            RK::Side2(row) => {
                for (j, x) in f22.t.row(*row).iter().enumerate() {
                    t[(i, u2_off + j)] = x.clone();
                }
            }
            RK::Mixed3(e1, e21) => {
                put_combo(&mut t, i, m3a_off.unwrap(), combine_rows(&f11.t, e1)?);
                put_combo(&mut t, i, m3b_off.unwrap(), combine_rows(&f21.t, e21)?);
            }
            RK::Mixed4(e2, e12) => {
                put_combo(&mut t, i, m4a_off.unwrap(), combine_rows(&f22.t, e2)?);
                put_combo(&mut t, i, m4b_off.unwrap(), combine_rows(&f12.t, e12)?);
            }
        }
    }

    let mut u = Mat::zeros(width, s.columns.len());
    for jcol in 0..s.columns.len() {
        for i in 0..r11 {
            u[(u1_off + i, jcol)] = f11.u[(i, cols11[jcol])].clone();
        }
        for i in 0..r22 {
            u[(u2_off + i, jcol)] = f22.u[(i, cols22[jcol])].clone();
        }
        match classes[jcol] {
            SkewCol::Pure1 | SkewCol::InB2 => {
                if let Some(o) = m3a_off {
                    for i in 0..r11 {
                        u[(o + i, jcol)] = f11.u[(i, cols11[jcol])].clone();
                    }
                }
                if let Some(o) = m4b_off {
                    for i in 0..r12 {
                        u[(o + i, jcol)] = f12.u[(i, cols12[jcol])].clone();
                    }
                }
            }
            SkewCol::Pure2 | SkewCol::InB1 => {
                if let Some(o) = m3b_off {
                    for i in 0..r21 {
                        u[(o + i, jcol)] = f21.u[(i, cols21[jcol])].clone();
                    }
                }
                if let Some(o) = m4a_off {
                    for i in 0..r22 {
                        u[(o + i, jcol)] = f22.u[(i, cols22[jcol])].clone();
                    }
                }
            }
        }
    }
    finish(s, t, u, "skew partition composition")
}

/// Builds a factorization of the complement's slack matrix from one of the
/// graph's own. Every clique of `g` (that is, every column of the target)
/// is expressed through row extension inside `f`; the extended rows,
/// transposed, factorize the clique-vs-maximal-stable-set block, and a fresh
/// identity block covers the `|V|` vertex rows. Inner dimension `r + |V|`.
pub fn complement_compose(
    g: &Graph,
    f: &NonnegFactorization,
    limits: &EnumLimits,
) -> Result<NonnegFactorization, FactorError> {
    if f.names != g.names() {
        return Err(FactorError::LabelMismatch(
            "factorization names do not match the graph".into(),
        ));
    }
    let gbar = g.complement();
    let target = build_slack(&gbar, limits)?;
    let row_of: HashMap<RowLabel, usize> =
        f.row_labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
    let col_of: HashMap<Vec<usize>, usize> =
        f.col_sets.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
    let n = g.n();
    let r = f.r();
    let width = n + r;

    // Left factor: vertex rows keep an identity block; each maximal stable
    // set of g (clique row of the target) copies its U column from f.
    let mut t = Mat::zeros(target.row_labels.len(), width);
    for (i, label) in target.row_labels.iter().enumerate() {
        match label {
            RowLabel::Vertex(v) => t[(i, *v)] = rat(1),
            RowLabel::Clique(c) => {
                let col = *col_of.get(c).ok_or_else(|| {
                    FactorError::InternalCompositionError(format!(
                        "factorization has no column for maximal stable set {c:?}"
                    ))
                })?;
                for j in 0..r {
                    t[(i, n + j)] = f.u[(j, col)].clone();
                }
            }
        }
    }

    // Right factor: one column per clique K of g; the lower block is the
    // row-extended slack row of K in f, the upper block marks K's vertices.
    let mut u = Mat::zeros(width, target.columns.len());
    for (jcol, k) in target.columns.iter().enumerate() {
        for &v in k {
            u[(v, jcol)] = rat(1);
        }
        let coeffs = extension_coeffs(g, &row_of, k)?;
        let extended = combine_rows(&f.t, &coeffs)?;
        for (j, x) in extended.into_iter().enumerate() {
            u[(n + j, jcol)] = x;
        }
    }
    finish(target, t, u, "complement composition")
}

/// Builds the factorization dictated by a basic-class certificate:
/// bipartite-like classes take the clique description directly, complement
/// classes go through [`complement_compose`], and double split graphs are
/// assembled from their matching side and clique side.
pub fn basic_factorization(
    g: &Graph,
    cert: &BasicCertificate,
    limits: &EnumLimits,
) -> Result<NonnegFactorization, FactorError> {
    validate_certificate(g, cert)?;
    match cert {
        BasicCertificate::Bipartite { .. }
        | BasicCertificate::LineBipartite { .. }
        | BasicCertificate::FacetDirect => Ok(facet_factorization(&build_slack(g, limits)?)),
        BasicCertificate::CoBipartite { .. } | BasicCertificate::CoLineBipartite { .. } => {
            let h = g.complement();
            let fh = facet_factorization(&build_slack(&h, limits)?);
            complement_compose(&h, &fh, limits)
        }
        BasicCertificate::DoubleSplit { a, b, x, y, .. } => {
            let resolve = |names: &[String]| -> Result<Vec<usize>, FactorError> {
                names
                    .iter()
                    .map(|s| {
                        g.index_of(s).ok_or_else(|| {
                            FactorError::LabelMismatch(format!("unknown vertex {s:?}"))
                        })
                    })
                    .collect()
            };
            let mut v1 = resolve(a)?;
            v1.extend(resolve(b)?);
            let mut v2 = resolve(x)?;
            v2.extend(resolve(y)?);
            v1.sort_unstable();
            v2.sort_unstable();
            // Matching side: bipartite, clique description suffices.
            let g1 = g.induced(&v1)?;
            let f1 = facet_factorization(&build_slack(&g1, limits)?);
            // Clique side: complement of a perfect matching.
            let g2 = g.induced(&v2)?;
            let m = g2.complement();
            let fm = facet_factorization(&build_slack(&m, limits)?);
            let f2 = complement_compose(&m, &fm, limits)?;
            partition_compose(g, &v1, &v2, &f1, &f2, limits)
        }
    }
}
