//! Compact extended formulations of stable set polytopes of perfect graphs.
//!
//! The stable set polytope of a perfect graph is described by nonnegativity
//! and maximal-clique inequalities, and the smallest slack-form extended
//! formulation `{x : E x + F t = g, t >= 0}` of that polytope has exactly as
//! many inequalities as the nonnegative rank of its slack matrix. This crate
//! exploits that correspondence constructively:
//!
//! * [`graph`] and [`family`] provide named graphs, structural certificates
//!   (bipartite, complement-bipartite, line graphs of bipartite graphs,
//!   double split graphs, 2-joins, skew partitions), and exhaustive
//!   enumeration of stable sets and maximal cliques at desk scale;
//! * [`slack`] builds exact rational slack matrices;
//! * [`factor`] builds nonnegative factorizations `S = T U` for the basic
//!   graph classes and composes factorizations of parts into factorizations
//!   of the whole along vertex partitions, 2-joins, skew partitions, and
//!   complementation, checking each product exactly;
//! * [`extform`] turns factorizations into extended formulations, composes
//!   formulations across vertex substitution, and converts formulations back
//!   into factorizations;
//! * [`lp`] is an exact rational simplex solver, and [`verify`] uses it to
//!   certify that a formulation projects onto the stable set polytope and
//!   that the clique description itself is correct on perfect instances;
//! * [`tree`] evaluates whole decomposition trees and reports size bounds;
//! * [`gen`] and [`jsonio`] supply seeded test instances and the JSON/CSV
//!   interchange formats used by the `stabex` command-line tool.
//!
//! Everything is computed over arbitrary-precision rationals; no floating
//! point is used anywhere, and every construction is verified against an
//! independently built slack matrix or polytope description before it is
//! returned.

pub mod extform;
pub mod factor;
pub mod family;
pub mod gen;
pub mod graph;
pub mod jsonio;
pub mod linalg;
pub mod lp;
pub mod slack;
pub mod verify;
