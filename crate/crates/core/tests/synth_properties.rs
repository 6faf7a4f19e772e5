use gssl_core::io::write_edge_list;
use gssl_core::synth::{planted_partition, PlantedPartitionSpec};

fn paper_spec(seed: u64) -> PlantedPartitionSpec {
    PlantedPartitionSpec {
        sizes: vec![100, 100],
        p_in: vec![0.3, 0.1],
        p_out: 0.05,
        seed,
    }
}

#[test]
fn link_counts_are_binomially_concentrated() {
    let pairs_in = 100.0 * 99.0 / 2.0;
    let pairs_out = 100.0 * 100.0;
    for seed in 0..20 {
        let (g, truth) = planted_partition(&paper_spec(seed)).unwrap();
        let mut counts = [0.0; 3];
        for (i, j, w) in g.edges() {
            assert_eq!(w, 1.0);
            assert_ne!(i, j);
            match (truth.class_of(i), truth.class_of(j)) {
                (0, 0) => counts[0] += 1.0,
                (1, 1) => counts[1] += 1.0,
                _ => counts[2] += 1.0,
            }
        }
        for (count, (pairs, p)) in counts
            .iter()
            .zip([(pairs_in, 0.3), (pairs_in, 0.1), (pairs_out, 0.05)])
        {
            let mean: f64 = pairs * p;
            let sd = (pairs * p * (1.0 - p)).sqrt();
            assert!((count - mean).abs() <= 4.0 * sd, "seed {seed}: {count} vs {mean}");
        }
    }
}

#[test]
fn small_instance_edge_stream_is_pinned() {
    // ChaCha8 stream, lexicographic pair order: this output must not change
    // across platforms or releases.
    let spec = PlantedPartitionSpec {
        sizes: vec![3, 3],
        p_in: vec![0.6, 0.6],
        p_out: 0.3,
        seed: 2024,
    };
    let (g, _) = planted_partition(&spec).unwrap();
    let mut buf = Vec::new();
    write_edge_list(&g, &mut buf).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap(), PINNED);
}

const PINNED: &str = "0 1\n1 2\n1 3\n3 5\n";
