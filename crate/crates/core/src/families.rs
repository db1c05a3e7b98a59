//! Standard graph families and small-graph enumeration.

use itertools::Itertools;
use rand::Rng;

use crate::graph::Graph;

/// Path `1 - 2 - ... - n`.
pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &edges).expect("path is simple")
}

/// Cycle on `n >= 3` vertices.
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3);
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges).expect("cycle is simple")
}

/// Complete graph `K_n`.
pub fn complete(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).tuple_combinations().collect();
    Graph::from_edges(n, &edges).expect("complete graph is simple")
}

/// Star `K_{1,leaves}`; the center is vertex `1`.
pub fn star(leaves: usize) -> Graph {
    let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
    Graph::from_edges(leaves + 1, &edges).expect("star is simple")
}

fn from_mask(n: usize, pairs: &[(usize, usize)], mask: u64) -> Graph {
    let edges: Vec<_> = pairs
        .iter()
        .enumerate()
        .filter(|(k, _)| mask >> k & 1 == 1)
        .map(|(_, &e)| e)
        .collect();
    Graph::from_edges(n, &edges).expect("mask graphs are simple")
}

/// One representative of every isomorphism class of connected graphs on
/// `n` vertices (`n <= 6`). Representatives are the lexicographically least
/// edge masks of their class.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    assert!((1..=6).contains(&n), "exhaustive enumeration is for n <= 6");
    let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    let index_of = |a: usize, b: usize| {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        pairs.iter().position(|&p| p == (a, b)).unwrap()
    };
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    // image of each pair under each permutation
    let images: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| pairs.iter().map(|&(a, b)| index_of(p[a], p[b])).collect())
        .collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let canonical = images.iter().all(|img| {
            let mut image = 0u64;
            for (k, &j) in img.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    image |= 1 << j;
                }
            }
            image >= mask
        });
        if !canonical {
            continue;
        }
        let g = from_mask(n, &pairs, mask);
        if g.is_connected() {
            out.push(g);
        }
    }
    out
}

/// Random connected graph: a uniform random spanning tree skeleton (random
/// attachment) plus each remaining pair independently with probability `p`.
pub fn random_connected<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let mut present = vec![vec![false; n]; n];
    let mut edges = Vec::new();
    for k in 1..n {
        let a = order[k];
        let b = order[rng.gen_range(0..k)];
        present[a][b] = true;
        present[b][a] = true;
        edges.push((a.min(b), a.max(b)));
    }
    for (a, b) in (0..n).tuple_combinations() {
        if !present[a][b] && rng.gen_bool(p) {
            edges.push((a, b));
        }
    }
    edges.sort_unstable();
    Graph::from_edges(n, &edges).expect("random graphs are simple")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn connected_graph_counts() {
        // OEIS A001349
        let counts: Vec<usize> = (1..=6).map(|n| connected_graphs(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 21, 112]);
    }

    #[test]
    fn families_have_expected_shapes() {
        assert_eq!(path(5).m(), 4);
        assert_eq!(cycle(5).m(), 5);
        assert_eq!(complete(5).m(), 10);
        assert_eq!(star(5).m(), 5);
        assert!(star(5).is_connected());
    }

    #[test]
    fn random_graphs_are_connected_and_seeded() {
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let g = random_connected(8, 0.3, &mut a);
            assert!(g.is_connected());
            assert_eq!(g, random_connected(8, 0.3, &mut b));
        }
    }
}
