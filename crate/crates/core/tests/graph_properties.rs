use gssl_core::fixtures::les_miserables;
use gssl_core::graph::{knn_similarity, rbf_similarity};
use gssl_core::{FeatureSet, Graph};
use proptest::prelude::*;

fn points(max_n: usize, dim: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-3.0f64..3.0, dim), 3..max_n)
}

/// Directed 0/1 kNN matrix from a full distance table: `j` is a neighbor of
/// `i` when fewer than `k` other nodes beat it on (distance, index).
fn brute_force_knn(rows: &[Vec<f64>], k: usize) -> Vec<Vec<f64>> {
    let n = rows.len();
    let dist: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| rows[i].iter().zip(&rows[j]).map(|(a, b)| (a - b).powi(2)).sum())
                .collect()
        })
        .collect();
    let mut a = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let better = (0..n)
                .filter(|&l| l != i && l != j)
                .filter(|&l| dist[i][l] < dist[i][j] || (dist[i][l] == dist[i][j] && l < j))
                .count();
            if better < k {
                a[i][j] = 1.0;
            }
        }
    }
    a
}

proptest! {
    #[test]
    fn degrees_match_neighbor_sums(
        edges in prop::collection::vec((0usize..12, 0usize..12, 0.01f64..5.0), 1..40)
    ) {
        let edges: Vec<_> = edges.into_iter().filter(|(u, v, _)| u != v).collect();
        prop_assume!(!edges.is_empty());
        let g = Graph::from_edge_list(edges.iter().map(|&(u, v, w)| (u, v, Some(w))), false).unwrap();
        let mut total = 0.0;
        for i in 0..g.node_count() {
            let recomputed: f64 = g.neighbors(i).iter().map(|&(_, w)| w).sum();
            prop_assert!((recomputed - g.degree(i)).abs() <= 1e-12 * recomputed.max(1.0));
            for &(j, w) in g.neighbors(i) {
                prop_assert!(w > 0.0);
                prop_assert_eq!(g.weight(j, i), w);
            }
            total += g.degree(i);
        }
        prop_assert!((total - g.total_weight()).abs() <= 1e-12 * total);
    }

    #[test]
    fn knn_matches_brute_force(rows in points(12, 2), k in 1usize..4) {
        prop_assume!(k < rows.len());
        let g = knn_similarity(&FeatureSet::new(rows.clone()).unwrap(), k).unwrap();
        let a = brute_force_knn(&rows, k);
        for i in 0..rows.len() {
            for j in 0..rows.len() {
                if i != j {
                    prop_assert_eq!(g.weight(i, j), (a[i][j] + a[j][i]) / 2.0);
                }
            }
        }
    }

    #[test]
    fn rbf_is_permutation_equivariant(rows in points(10, 3), gamma in 0.1f64..5.0, rot in 0usize..10) {
        let n = rows.len();
        let perm: Vec<usize> = (0..n).map(|i| (i + rot) % n).collect();
        let permuted: Vec<Vec<f64>> = perm.iter().map(|&p| rows[p].clone()).collect();
        let g = rbf_similarity(&FeatureSet::new(rows).unwrap(), gamma).unwrap();
        let h = rbf_similarity(&FeatureSet::new(permuted).unwrap(), gamma).unwrap();
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(h.weight(i, j), g.weight(perm[i], perm[j]));
            }
        }
    }
}

#[test]
fn les_miserables_is_connected() {
    let (g, _) = les_miserables().unwrap();
    assert!(g.is_connected());
    assert_eq!(g.node_count(), 77);
}
