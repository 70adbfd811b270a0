mod common;

use common::{all_nodes, naive_norm_sq};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use treenorm::checks::random_tree_vector;
use treenorm::norm::{
    norm, norm_oracle, norm_oracle_exact, norm_oracle_strict, rational_from_int, TreeVector,
};
use treenorm::tree::{check_admissible, Mode};

/// Every vector on the depth-3 tree with at most three nonzero entries in -2..=2.
fn small_vectors() -> Vec<TreeVector> {
    let nodes = all_nodes(3);
    let vals = [-2.0, -1.0, 1.0, 2.0];
    let mut out = vec![TreeVector::zero(3).unwrap()];
    let n = nodes.len();
    for mask in 1u32..(1 << n) {
        let k = mask.count_ones() as usize;
        if k > 3 {
            continue;
        }
        let support: Vec<_> = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| nodes[i])
            .collect();
        for code in 0..4usize.pow(k as u32) {
            let entries = support
                .iter()
                .enumerate()
                .map(|(j, s)| (*s, vals[code / 4usize.pow(j as u32) % 4]));
            out.push(TreeVector::from_entries(3, entries).unwrap());
        }
    }
    out
}

#[test]
fn depth_three_exhaustive_exact() {
    let vs = small_vectors();
    assert_eq!(vs.len(), 1 + 7 * 4 + 21 * 16 + 35 * 64);
    for x in &vs {
        let dp = norm(x);
        let naive = naive_norm_sq(x);
        assert_eq!(dp.squared, naive, "{x:?}");
        // integer data: squared norms are integers, compare exactly
        assert_eq!(
            norm_oracle_exact(x).unwrap(),
            rational_from_int(naive as i64),
            "{x:?}"
        );
    }
}

#[test]
fn random_depth_five_against_both_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..400 {
        let support = rng.gen_range(1..=6);
        let x = random_tree_vector(&mut rng, 5, support, 3);
        let dp = norm(&x).value;
        assert!((dp - norm_oracle(&x).unwrap()).abs() <= 1e-12, "{x:?}");
        assert!((dp * dp - naive_norm_sq(&x)).abs() <= 1e-9, "{x:?}");
    }
}

#[test]
fn witness_family_reproduces_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..500 {
        let x = random_tree_vector(&mut rng, 6, 8, 4);
        let b = norm(&x);
        let Some(fam) = &b.witness_family else {
            assert!(x.is_zero());
            continue;
        };
        check_admissible(fam.segments(), Mode::Extended).unwrap();
        let sq: f64 = fam
            .segments()
            .iter()
            .map(|s| s.nodes().map(|n| x.get(&n)).sum::<f64>().powi(2))
            .sum();
        assert!((sq - b.squared).abs() <= 1e-9);
    }
}

#[test]
fn strict_semantics_never_exceed_extended() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..300 {
        let x = random_tree_vector(&mut rng, 4, 5, 2);
        assert!(norm_oracle_strict(&x).unwrap() <= norm(&x).value + 1e-12);
    }
}
