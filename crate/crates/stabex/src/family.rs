//! Exhaustive enumeration of stable sets and maximal cliques, with the
//! brute-force invariants built on top of them (independence number, clique
//! number, chromatic number, perfection).
//!
//! Enumeration is deliberately limited to desk-scale graphs: every routine
//! takes an [`EnumLimits`] and refuses inputs above the relevant cap instead
//! of silently taking exponential time. All families are returned in a
//! canonical order (by size, then lexicographically by sorted vertex
//! indices), with the empty set first where it belongs.

use crate::graph::Graph;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EnumError {
    /// The graph is too large for the requested exhaustive computation.
    #[error("size limit exceeded: {what} on {n} vertices (limit {limit})")]
    SizeLimit { what: &'static str, n: usize, limit: usize },
}

/// Per-operation vertex-count caps for exhaustive routines.
#[derive(Clone, Copy, Debug)]
pub struct EnumLimits {
    /// Cap for enumerating all stable sets (2^n sets scanned).
    pub stable_sets: usize,
    /// Cap for enumerating maximal cliques.
    pub max_cliques: usize,
    /// Cap for exact chromatic/clique/independence numbers.
    pub exact: usize,
    /// Cap for the brute-force perfection check (all induced subgraphs).
    pub perfect: usize,
}

impl Default for EnumLimits {
    fn default() -> Self {
        EnumLimits { stable_sets: 15, max_cliques: 20, exact: 12, perfect: 10 }
    }
}

impl EnumLimits {
    /// Sets every cap to `n`.
    pub fn with_cap(n: usize) -> Self {
        EnumLimits { stable_sets: n, max_cliques: n, exact: n, perfect: n }
    }
}

/// An ordered family of vertex subsets with O(1) membership lookup.
///
/// Sets are stored as sorted index vectors in canonical order: ascending by
/// size, ties broken lexicographically.
#[derive(Clone, Debug)]
pub struct SetFamily {
    sets: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl SetFamily {
    fn from_sets(mut sets: Vec<Vec<usize>>) -> Self {
        for s in &mut sets {
            s.sort_unstable();
        }
        sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let index = sets.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        SetFamily { sets, index }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn get(&self, i: usize) -> &[usize] {
        &self.sets[i]
    }

    /// Index of a set given by sorted vertex indices.
    pub fn position(&self, set: &[usize]) -> Option<usize> {
        self.index.get(set).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &[usize]> {
        self.sets.iter().map(Vec::as_slice)
    }
}

/// Human-readable label for a vertex set: `{}`, `{a}`, `{a,c}`.
pub fn set_label(g: &Graph, set: &[usize]) -> String {
    let names: Vec<&str> = set.iter().map(|&v| g.name(v)).collect();
    format!("{{{}}}", names.join(","))
}

/// All stable sets of `g`, the empty set included.
pub fn stable_sets(g: &Graph, limits: &EnumLimits) -> Result<SetFamily, EnumError> {
    let n = g.n();
    if n > limits.stable_sets {
        return Err(EnumError::SizeLimit { what: "stable set enumeration", n, limit: limits.stable_sets });
    }
    let masks = adjacency_masks(g);
    let mut sets = Vec::new();
    for mask in 0u64..(1u64 << n) {
        if is_stable_mask(&masks, mask) {
            sets.push(mask_to_set(mask));
        }
    }
    Ok(SetFamily::from_sets(sets))
}

/// All inclusion-maximal cliques of `g`, via Bron-Kerbosch with pivoting.
/// For the empty graph on zero vertices this is the single empty clique.
pub fn maximal_cliques(g: &Graph, limits: &EnumLimits) -> Result<SetFamily, EnumError> {
    let n = g.n();
    if n > limits.max_cliques {
        return Err(EnumError::SizeLimit { what: "maximal clique enumeration", n, limit: limits.max_cliques });
    }
    let masks = adjacency_masks(g);
    let mut out = Vec::new();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    bron_kerbosch(&masks, 0, full, 0, &mut out);
    Ok(SetFamily::from_sets(out.into_iter().map(mask_to_set).collect()))
}

fn adjacency_masks(g: &Graph) -> Vec<u64> {
    (0..g.n())
        .map(|v| g.neighbors(v).into_iter().fold(0u64, |m, u| m | (1 << u)))
        .collect()
}

fn is_stable_mask(masks: &[u64], mask: u64) -> bool {
    let mut rest = mask;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        if masks[v] & mask != 0 {
            return false;
        }
    }
    true
}

fn mask_to_set(mut mask: u64) -> Vec<usize> {
    let mut out = Vec::new();
    while mask != 0 {
        out.push(mask.trailing_zeros() as usize);
        mask &= mask - 1;
    }
    out
}

fn bron_kerbosch(masks: &[u64], r: u64, mut p: u64, mut x: u64, out: &mut Vec<u64>) {
    if p == 0 && x == 0 {
        out.push(r);
        return;
    }
    // Pivot on the vertex of P | X with the most neighbors in P.
    let pivot = mask_to_set(p | x)
        .into_iter()
        .max_by_key(|&v| (masks[v] & p).count_ones())
        .expect("P | X is nonempty");
    let candidates = p & !masks[pivot];
    for v in mask_to_set(candidates) {
        let bit = 1u64 << v;
        bron_kerbosch(masks, r | bit, p & masks[v], x & masks[v], out);
        p &= !bit;
        x |= bit;
    }
}

/// Independence number, clique number, and chromatic number, all exact.
pub fn alpha_omega_chi(g: &Graph, limits: &EnumLimits) -> Result<(usize, usize, usize), EnumError> {
    let n = g.n();
    if n > limits.exact {
        return Err(EnumError::SizeLimit { what: "exact invariants", n, limit: limits.exact });
    }
    let masks = adjacency_masks(g);
    let full = if n == 0 { 0 } else { (1u64 << n) - 1 };
    let omega = max_clique_size(&masks, full);
    let comasks = complement_masks(&masks, full);
    let alpha = max_clique_size(&comasks, full);
    let mut chi = omega;
    while !colorable(&masks, full, chi) {
        chi += 1;
    }
    Ok((alpha, omega, chi))
}

fn complement_masks(masks: &[u64], full: u64) -> Vec<u64> {
    masks
        .iter()
        .enumerate()
        .map(|(v, &m)| full & !m & !(1u64 << v))
        .collect()
}

fn max_clique_size(masks: &[u64], sub: u64) -> usize {
    fn go(masks: &[u64], p: u64, size: usize, best: &mut usize) {
        if size + p.count_ones() as usize <= *best {
            return;
        }
        if p == 0 {
            *best = (*best).max(size);
            return;
        }
        let v = p.trailing_zeros() as usize;
        go(masks, p & masks[v] & !(1u64 << v), size + 1, best);
        go(masks, p & !(1u64 << v), size, best);
    }
    let mut best = 0;
    go(masks, sub, 0, &mut best);
    best
}

/// Greedy-ordered backtracking test for proper k-colorability of the
/// vertices in `sub`.
fn colorable(masks: &[u64], sub: u64, k: usize) -> bool {
    let verts = mask_to_set(sub);
    if verts.is_empty() {
        return true;
    }
    if k == 0 {
        return false;
    }
    let mut order = verts.clone();
    order.sort_by_key(|&v| std::cmp::Reverse((masks[v] & sub).count_ones()));
    let mut colors: HashMap<usize, usize> = HashMap::new();
    fn assign(masks: &[u64], order: &[usize], at: usize, k: usize, colors: &mut HashMap<usize, usize>) -> bool {
        if at == order.len() {
            return true;
        }
        let v = order[at];
        let mut used = vec![false; k];
        for (&u, &c) in colors.iter() {
            if masks[v] & (1 << u) != 0 {
                used[c] = true;
            }
        }
        // Symmetry break: only try one previously unused color.
        let first_free = (0..k).find(|&c| !colors.values().any(|&x| x == c));
        for c in 0..k {
            if used[c] {
                continue;
            }
            if let Some(f) = first_free {
                if c > f {
                    break;
                }
            }
            colors.insert(v, c);
            if assign(masks, order, at + 1, k, colors) {
                return true;
            }
            colors.remove(&v);
        }
        false
    }
    assign(masks, &order, 0, k, &mut colors)
}

/// Tests perfection by definition: for every induced subgraph, the chromatic
/// number equals the clique number.
pub fn is_perfect_bruteforce(g: &Graph, limits: &EnumLimits) -> Result<bool, EnumError> {
    let n = g.n();
    if n > limits.perfect {
        return Err(EnumError::SizeLimit { what: "perfection check", n, limit: limits.perfect });
    }
    let masks = adjacency_masks(g);
    for sub in 0u64..(1u64 << n) {
        let omega = max_clique_size(&masks, sub);
        if !colorable(&masks, sub, omega) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph;
    use proptest::prelude::*;

    fn lim() -> EnumLimits {
        EnumLimits::default()
    }

    /// Independent oracle: maximal cliques by scanning all subsets.
    fn cliques_by_subset_scan(g: &Graph) -> Vec<Vec<usize>> {
        let n = g.n();
        let mut cliques = Vec::new();
        for mask in 0u64..(1u64 << n) {
            let set = mask_to_set(mask);
            if !g.is_clique(&set) {
                continue;
            }
            let extendable = (0..n)
                .any(|u| mask & (1 << u) == 0 && set.iter().all(|&v| g.has_edge(u, v)));
            if !extendable {
                cliques.push(set);
            }
        }
        cliques.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        cliques
    }

    #[test]
    fn stable_sets_of_p3() {
        let g = graph::path(3);
        let fam = stable_sets(&g, &lim()).unwrap();
        let got: Vec<Vec<usize>> = fam.iter().map(|s| s.to_vec()).collect();
        assert_eq!(got, vec![vec![], vec![0], vec![1], vec![2], vec![0, 2]]);
        assert_eq!(fam.position(&[0, 2]), Some(4));
        assert_eq!(fam.position(&[0, 1]), None);
    }

    #[test]
    fn canonical_order_is_size_then_lex() {
        let g = graph::empty(3);
        let fam = stable_sets(&g, &lim()).unwrap();
        let got: Vec<Vec<usize>> = fam.iter().map(|s| s.to_vec()).collect();
        assert_eq!(
            got,
            vec![
                vec![],
                vec![0],
                vec![1],
                vec![2],
                vec![0, 1],
                vec![0, 2],
                vec![1, 2],
                vec![0, 1, 2]
            ]
        );
    }

    #[test]
    fn maximal_cliques_small_cases() {
        let g = graph::complete(4);
        let fam = maximal_cliques(&g, &lim()).unwrap();
        assert_eq!(fam.len(), 1);
        assert_eq!(fam.get(0), &[0, 1, 2, 3]);

        let c5 = graph::cycle(5);
        let fam = maximal_cliques(&c5, &lim()).unwrap();
        assert_eq!(fam.len(), 5); // the five edges

        let e = graph::empty(3);
        let fam = maximal_cliques(&e, &lim()).unwrap();
        assert_eq!(fam.len(), 3); // singletons
    }

    #[test]
    fn set_labels() {
        let g = graph::path(3);
        assert_eq!(set_label(&g, &[]), "{}");
        assert_eq!(set_label(&g, &[0]), "{v1}");
        assert_eq!(set_label(&g, &[0, 2]), "{v1,v3}");
    }

    #[test]
    fn limits_are_enforced() {
        let g = graph::empty(16);
        assert!(matches!(
            stable_sets(&g, &lim()),
            Err(EnumError::SizeLimit { what: "stable set enumeration", .. })
        ));
        assert!(stable_sets(&g, &EnumLimits::with_cap(16)).is_ok());
        let big = graph::empty(21);
        assert!(maximal_cliques(&big, &lim()).is_err());
        assert!(alpha_omega_chi(&graph::empty(13), &lim()).is_err());
        assert!(is_perfect_bruteforce(&graph::empty(11), &lim()).is_err());
    }

    #[test]
    fn invariants_of_known_graphs() {
        assert_eq!(alpha_omega_chi(&graph::cycle(5), &lim()).unwrap(), (2, 2, 3));
        assert_eq!(alpha_omega_chi(&graph::cycle(6), &lim()).unwrap(), (3, 2, 2));
        assert_eq!(alpha_omega_chi(&graph::path(4), &lim()).unwrap(), (2, 2, 2));
        assert_eq!(alpha_omega_chi(&graph::complete(4), &lim()).unwrap(), (1, 4, 4));
        assert_eq!(alpha_omega_chi(&graph::empty(4), &lim()).unwrap(), (4, 1, 1));
        assert_eq!(alpha_omega_chi(&graph::complete_bipartite(2, 3), &lim()).unwrap(), (3, 2, 2));
        assert_eq!(alpha_omega_chi(&graph::cycle(7), &lim()).unwrap(), (3, 2, 3));
    }

    #[test]
    fn perfection_of_known_graphs() {
        assert!(is_perfect_bruteforce(&graph::cycle(4), &lim()).unwrap());
        assert!(!is_perfect_bruteforce(&graph::cycle(5), &lim()).unwrap());
        assert!(is_perfect_bruteforce(&graph::cycle(6), &lim()).unwrap());
        assert!(!is_perfect_bruteforce(&graph::cycle(7), &lim()).unwrap());
        // Complement of C7 contains an odd hole's complement; also imperfect.
        assert!(!is_perfect_bruteforce(&graph::cycle(7).complement(), &lim()).unwrap());
        assert!(is_perfect_bruteforce(&graph::path(5), &lim()).unwrap());
        assert!(is_perfect_bruteforce(&graph::complete(5), &lim()).unwrap());
        // Bull: triangle with two pendant horns; perfect.
        let bull = Graph::unnamed(5, vec![(0, 1), (1, 2), (0, 2), (0, 3), (1, 4)]).unwrap();
        assert!(is_perfect_bruteforce(&bull, &lim()).unwrap());
        // Double split graphs are perfect.
        let ds = graph::double_split(2, 2, &[vec![0], vec![1]]).unwrap();
        assert!(is_perfect_bruteforce(&ds, &lim()).unwrap());
    }

    fn arbitrary_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (2..=max_n).prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> =
                (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            proptest::collection::vec(proptest::bool::ANY, pairs.len()).prop_map(move |mask| {
                let edges =
                    pairs.iter().zip(&mask).filter(|(_, &m)| m).map(|(&e, _)| e).collect();
                Graph::unnamed(n, edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn bron_kerbosch_matches_subset_scan(g in arbitrary_graph(8)) {
            let fam = maximal_cliques(&g, &lim()).unwrap();
            let got: Vec<Vec<usize>> = fam.iter().map(|s| s.to_vec()).collect();
            prop_assert_eq!(got, cliques_by_subset_scan(&g));
        }

        #[test]
        fn stable_sets_are_complement_cliques(g in arbitrary_graph(7)) {
            let stab = stable_sets(&g, &lim()).unwrap();
            for s in stab.iter() {
                prop_assert!(g.is_stable(s));
                prop_assert!(g.complement().is_clique(s));
            }
            // Count check: number of stable sets of g = number of cliques of
            // the complement (including the empty one).
            let co = g.complement();
            let all_cliques = (0u64..(1 << co.n()))
                .filter(|&m| co.is_clique(&mask_to_set(m)))
                .count();
            prop_assert_eq!(stab.len(), all_cliques);
        }

        #[test]
        fn alpha_of_complement_is_omega(g in arbitrary_graph(7)) {
            let (alpha, omega, chi) = alpha_omega_chi(&g, &lim()).unwrap();
            let (ca, co, _) = alpha_omega_chi(&g.complement(), &lim()).unwrap();
            prop_assert_eq!(alpha, co);
            prop_assert_eq!(omega, ca);
            prop_assert!(chi >= omega);
        }

        #[test]
        fn perfection_closed_under_complement(g in arbitrary_graph(6)) {
            let a = is_perfect_bruteforce(&g, &lim()).unwrap();
            let b = is_perfect_bruteforce(&g.complement(), &lim()).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
