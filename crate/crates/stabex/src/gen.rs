//! Seeded instance generators and a corpus of small perfect graphs.
//!
//! Everything here is deterministic in the seed, so test fixtures and
//! command line runs reproduce bit for bit.

use crate::family::{is_perfect_bruteforce, EnumLimits};
use crate::graph::{
    self, validate_certificate, validate_two_join, BasicCertificate, Graph, GraphError,
    TwoJoinData,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random bipartite graph on `n` vertices: a random side assignment, then
/// each crossing pair becomes an edge with probability one half. Returns
/// the graph together with its bipartition certificate.
pub fn random_bipartite(n: usize, seed: u64) -> Result<(Graph, BasicCertificate), GraphError> {
    if n == 0 {
        return Err(GraphError::ParameterError("a graph needs at least one vertex".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let side: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if side[u] != side[v] && rng.gen() {
                edges.push((u, v));
            }
        }
    }
    let g = Graph::unnamed(n, edges)?;
    let names = |flag: bool| -> Vec<String> {
        (0..n).filter(|&v| side[v] == flag).map(|v| g.name(v).to_string()).collect()
    };
    let cert = BasicCertificate::Bipartite { sides: [names(false), names(true)] };
    validate_certificate(&g, &cert)?;
    Ok((g, cert))
}

/// Random double split graph: `p` adjacent pairs against `q` nonadjacent
/// pairs, with an independently random linking pattern for each pair of
/// pairs. Returns the graph and the matching structure certificate.
pub fn random_double_split(
    p: usize,
    q: usize,
    seed: u64,
) -> Result<(Graph, BasicCertificate), GraphError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let linking: Vec<Vec<usize>> =
        (0..p).map(|_| (0..q).filter(|_| rng.gen()).collect()).collect();
    let g = graph::double_split(p, q, &linking)?;
    let role = |prefix: &str, count: usize| -> Vec<String> {
        (1..=count).map(|i| format!("{prefix}{i}")).collect()
    };
    let cert = BasicCertificate::DoubleSplit {
        p,
        q,
        linking,
        a: role("a", p),
        b: role("b", p),
        x: role("x", q),
        y: role("y", q),
    };
    validate_certificate(&g, &cert)?;
    Ok((g, cert))
}

/// Perfect graphs carrying a proper 2-join, generated by gluing two short
/// paths (occasionally with an extra pendant on an attachment side) along
/// complete crossings and keeping only the perfect outcomes.
pub fn two_join_instances(count: usize, seed: u64) -> Vec<(Graph, TwoJoinData)> {
    let limits = EnumLimits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut attempts = 0usize;
    while out.len() < count && attempts < 400 * count.max(1) {
        attempts += 1;
        let n1 = rng.gen_range(3..=4);
        let n2 = rng.gen_range(3..=4);
        let pendant = rng.gen_range(0..3u32);
        let build_side = |n: usize, with_pendant: bool| {
            let mut edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
            let mut a = vec![0usize];
            let b = vec![n - 1];
            let mut total = n;
            if with_pendant {
                edges.push((0, n));
                a.push(n);
                total += 1;
            }
            (total, edges, a, b)
        };
        let (t1, e1, a1, b1) = build_side(n1, pendant == 1);
        let (t2, e2, a2, b2) = build_side(n2, pendant == 2);
        let names: Vec<String> = (0..t1)
            .map(|i| format!("s{i}"))
            .chain((0..t2).map(|i| format!("t{i}")))
            .collect();
        let mut edges = e1;
        edges.extend(e2.iter().map(|&(u, v)| (u + t1, v + t1)));
        for &u in &a1 {
            for &v in &a2 {
                edges.push((u, v + t1));
            }
        }
        for &u in &b1 {
            for &v in &b2 {
                edges.push((u, v + t1));
            }
        }
        let Ok(g) = Graph::new(names, edges) else { continue };
        let data = TwoJoinData {
            v1: (0..t1).collect(),
            v2: (t1..t1 + t2).collect(),
            a1,
            b1,
            a2: a2.iter().map(|&v| v + t1).collect(),
            b2: b2.iter().map(|&v| v + t1).collect(),
        };
        if validate_two_join(&g, &data).is_err() {
            continue;
        }
        if matches!(is_perfect_bruteforce(&g, &limits), Ok(true)) {
            out.push((g, data));
        }
    }
    out
}

/// Named perfect graphs on at most nine vertices, used as shared fixtures.
pub fn corpus() -> Vec<(&'static str, Graph)> {
    let paw = Graph::new(
        vec!["t1".into(), "t2".into(), "t3".into(), "p".into()],
        vec![(0, 1), (0, 2), (1, 2), (0, 3)],
    )
    .expect("hardcoded");
    let diamond = Graph::new(
        vec!["a".into(), "b".into(), "c".into(), "d".into()],
        vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)],
    )
    .expect("hardcoded");
    let bull = Graph::new(
        vec!["a".into(), "b".into(), "c".into(), "d".into(), "e".into()],
        vec![(0, 1), (0, 2), (1, 2), (0, 3), (1, 4)],
    )
    .expect("hardcoded");
    let double_split = graph::double_split(2, 2, &[vec![0], vec![0, 1]]).expect("hardcoded");
    vec![
        ("path2", graph::path(2)),
        ("path3", graph::path(3)),
        ("path4", graph::path(4)),
        ("path5", graph::path(5)),
        ("path6", graph::path(6)),
        ("cycle4", graph::cycle(4)),
        ("cycle6", graph::cycle(6)),
        ("cycle8", graph::cycle(8)),
        ("complete3", graph::complete(3)),
        ("complete4", graph::complete(4)),
        ("complete5", graph::complete(5)),
        ("complete6", graph::complete(6)),
        ("edgeless2", graph::empty(2)),
        ("edgeless3", graph::empty(3)),
        ("edgeless4", graph::empty(4)),
        ("complete_bipartite_2_3", graph::complete_bipartite(2, 3)),
        ("complete_bipartite_3_3", graph::complete_bipartite(3, 3)),
        ("star_1_4", graph::complete_bipartite(1, 4)),
        ("matching3", graph::matching(3)),
        ("antimatching3", graph::antimatching(3)),
        ("double_split_2_2", double_split),
        ("paw", paw),
        ("diamond", diamond),
        ("bull", bull),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bipartite_generation_is_deterministic() {
        let (g1, c1) = random_bipartite(8, 42).unwrap();
        let (g2, _) = random_bipartite(8, 42).unwrap();
        assert_eq!(g1, g2);
        validate_certificate(&g1, &c1).unwrap();
        let (g3, _) = random_bipartite(8, 43).unwrap();
        assert_ne!(g1, g3);
    }

    #[test]
    fn bipartite_generation_rejects_zero() {
        assert!(random_bipartite(0, 1).is_err());
    }

    #[test]
    fn double_split_generation_is_deterministic() {
        let (g1, c1) = random_double_split(2, 3, 5).unwrap();
        let (g2, _) = random_double_split(2, 3, 5).unwrap();
        assert_eq!(g1, g2);
        validate_certificate(&g1, &c1).unwrap();
        assert_eq!(g1.n(), 2 * 2 + 2 * 3);
    }

    #[test]
    fn two_join_instances_are_valid_and_perfect() {
        let instances = two_join_instances(5, 9);
        assert_eq!(instances.len(), 5);
        let limits = EnumLimits::default();
        for (g, data) in &instances {
            validate_two_join(g, data).unwrap();
            assert!(is_perfect_bruteforce(g, &limits).unwrap());
        }
        let again = two_join_instances(5, 9);
        for ((g1, _), (g2, _)) in instances.iter().zip(&again) {
            assert_eq!(g1, g2);
        }
    }

    #[test]
    fn corpus_graphs_are_perfect_and_small() {
        let limits = EnumLimits::default();
        let corpus = corpus();
        assert!(corpus.len() >= 20);
        for (name, g) in &corpus {
            assert!(g.n() <= 9, "{name} is too large");
            assert!(
                is_perfect_bruteforce(g, &limits).unwrap(),
                "{name} is not perfect"
            );
        }
        let names: std::collections::HashSet<_> = corpus.iter().map(|(n, _)| *n).collect();
        assert_eq!(names.len(), corpus.len());
    }
}
