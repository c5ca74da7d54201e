//! Slack matrices of stable set polytopes of perfect graphs.
//!
//! For a perfect graph G the stable set polytope is cut out by nonnegativity
//! (one row per vertex, `x_v >= 0`) and maximal-clique rows (`sum_{v in C}
//! x_v <= 1`), and its vertices are the characteristic vectors of stable
//! sets. The slack matrix pairs those facet rows with those vertices:
//!
//! * vertex row v, stable set I: slack of `-x_v <= 0` is `|{v} & I|`,
//! * clique row C, stable set I: slack of the clique rank inequality is
//!   `1 - |I & C|`.
//!
//! All entries are 0 or 1. The nonnegative rank of this matrix is exactly
//! the minimum size of a slack-form extended formulation of the polytope,
//! which is why every composition in this crate is checked by multiplying
//! its factors back into the slack matrix.

use crate::family::{maximal_cliques, set_label, stable_sets, EnumError, EnumLimits, SetFamily};
use crate::graph::Graph;
use crate::linalg::{rat, Mat};

/// Row of a slack matrix: a nonnegativity facet or a clique inequality.
/// `Clique` also labels non-maximal cliques produced by row extension.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RowLabel {
    Vertex(usize),
    Clique(Vec<usize>),
}

impl RowLabel {
    /// Rendered form: `v:a` for vertices, `C:{a,b}` for cliques.
    pub fn render(&self, g: &Graph) -> String {
        match self {
            RowLabel::Vertex(v) => format!("v:{}", g.name(*v)),
            RowLabel::Clique(c) => format!("C:{}", set_label(g, c)),
        }
    }
}

/// Slack matrix of a graph's stable set polytope description, rows indexed
/// by vertices then maximal cliques (canonical order), columns by all stable
/// sets (canonical order, empty set first).
#[derive(Clone, Debug)]
pub struct SlackMatrix {
    pub graph: Graph,
    pub row_labels: Vec<RowLabel>,
    pub columns: SetFamily,
    pub mat: Mat,
}

/// Builds the slack matrix of `g`.
pub fn build_slack(g: &Graph, limits: &EnumLimits) -> Result<SlackMatrix, EnumError> {
    let columns = stable_sets(g, limits)?;
    let cliques = maximal_cliques(g, limits)?;
    let mut row_labels: Vec<RowLabel> = (0..g.n()).map(RowLabel::Vertex).collect();
    row_labels.extend(cliques.iter().map(|c| RowLabel::Clique(c.to_vec())));
    let mat = Mat::from_fn(row_labels.len(), columns.len(), |i, j| {
        let set = columns.get(j);
        match &row_labels[i] {
            RowLabel::Vertex(v) => {
                if set.contains(v) {
                    rat(1)
                } else {
                    rat(0)
                }
            }
            RowLabel::Clique(c) => {
                let hits = set.iter().filter(|v| c.contains(v)).count() as i64;
                rat(1 - hits)
            }
        }
    });
    Ok(SlackMatrix { graph: g.clone(), row_labels, columns, mat })
}

/// Exact rank of the slack matrix over the rationals. This lower-bounds the
/// nonnegative rank, so it lower-bounds every extended formulation size the
/// crate produces.
pub fn rational_rank(s: &SlackMatrix) -> usize {
    s.mat.rank()
}

/// Dimension of the stable set polytope. It always contains the origin and
/// all unit vectors, so it is full-dimensional in R^V.
pub fn dim_stab(g: &Graph) -> usize {
    g.n()
}

/// Writes the slack matrix as CSV: header row of stable-set labels, then one
/// row per facet with its label in the first cell.
pub fn write_csv<W: std::io::Write>(s: &SlackMatrix, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec![String::new()];
    header.extend(s.columns.iter().map(|c| set_label(&s.graph, c)));
    w.write_record(&header)?;
    for (i, label) in s.row_labels.iter().enumerate() {
        let mut record = vec![label.render(&s.graph)];
        record.extend(s.mat.row(i).iter().map(|x| x.to_string()));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph;
    use num::{One, Zero};

    fn lim() -> EnumLimits {
        EnumLimits::default()
    }

    #[test]
    fn slack_of_k2_is_frozen() {
        let g = graph::complete(2);
        let s = build_slack(&g, &lim()).unwrap();
        assert_eq!(s.mat.nrows(), 3);
        assert_eq!(s.mat.ncols(), 3);
        // Columns: {}, {v1}, {v2}. Rows: v:v1, v:v2, C:{v1,v2}.
        let expect = [[0, 1, 0], [0, 0, 1], [1, 0, 0]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(s.mat[(i, j)], rat(expect[i][j]));
            }
        }
        assert_eq!(rational_rank(&s), 3);
    }

    #[test]
    fn slack_dimensions() {
        for g in [graph::path(4), graph::cycle(6), graph::complete_bipartite(2, 3)] {
            let s = build_slack(&g, &lim()).unwrap();
            let cliques = maximal_cliques(&g, &lim()).unwrap();
            let stabs = stable_sets(&g, &lim()).unwrap();
            assert_eq!(s.mat.nrows(), g.n() + cliques.len());
            assert_eq!(s.mat.ncols(), stabs.len());
            assert_eq!(dim_stab(&g), g.n());
        }
    }

    #[test]
    fn entries_are_zero_one() {
        for g in [
            graph::complete(4),
            graph::cycle(6),
            graph::path(5),
            graph::antimatching(3),
            graph::double_split(2, 2, &[vec![0], vec![1]]).unwrap(),
        ] {
            let s = build_slack(&g, &lim()).unwrap();
            for i in 0..s.mat.nrows() {
                for x in s.mat.row(i) {
                    assert!(x.is_zero() || x.is_one());
                }
            }
        }
    }

    #[test]
    fn complete_graph_rank() {
        // K_p has p + 1 stable sets (empty set and singletons) and the
        // corresponding slack columns are linearly independent.
        for p in 2..=5 {
            let s = build_slack(&graph::complete(p), &lim()).unwrap();
            assert_eq!(rational_rank(&s), p + 1);
        }
    }

    #[test]
    fn csv_round_shape() {
        let g = graph::complete(2);
        let s = build_slack(&g, &lim()).unwrap();
        let mut buf = Vec::new();
        write_csv(&s, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.trim_end().lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], ",{},{v1},{v2}");
        assert_eq!(lines[1], "v:v1,0,1,0");
        assert_eq!(lines[2], "v:v2,0,0,1");
        // The clique label contains a comma, so it must be quoted.
        assert_eq!(lines[3], "\"C:{v1,v2}\",1,0,0");
    }

    #[test]
    fn row_label_rendering() {
        let g = graph::path(3);
        assert_eq!(RowLabel::Vertex(0).render(&g), "v:v1");
        assert_eq!(RowLabel::Clique(vec![0, 1]).render(&g), "C:{v1,v2}");
        assert_eq!(RowLabel::Clique(vec![]).render(&g), "C:{}");
    }
}
