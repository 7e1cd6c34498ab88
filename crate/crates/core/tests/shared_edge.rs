//! Splitting an edge from either adjacent triangle gives identical products.

use std::collections::HashMap;

use fjordmap::subdivision::{root_config, split_triangle, subdivide};
use fjordmap::{Edge, GenConfig, Seed, Triangle, Variant, Vertex};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_vertex(rng: &mut ChaCha8Rng, x: f64, y: f64) -> Vertex {
    Vertex::new(x, y, rng.random_range(-1.0..=1.0), Seed::new(rng.random_range(-1.0..1.0)))
}

fn random_edge(rng: &mut ChaCha8Rng) -> Edge {
    if rng.random_bool(0.5) {
        Edge::river(rng.random_range(-1.0..=1.0))
    } else {
        Edge::DRY
    }
}

/// Two right-isosceles triangles sharing the hypotenuse `p`-`q`, one on each
/// side, listing the shared endpoints in opposite orders.
fn adjacent_pair(rng: &mut ChaCha8Rng) -> (Triangle, Triangle) {
    let (cx, cy) = (rng.random_range(0.0..1.0), rng.random_range(0.0..1.0));
    let r = rng.random_range(1e-6..0.5);
    let angle = rng.random_range(0.0..std::f64::consts::TAU);
    let (dx, dy) = (r * angle.cos(), r * angle.sin());
    let p = random_vertex(rng, cx - dx, cy - dy);
    let q = random_vertex(rng, cx + dx, cy + dy);
    let a = random_vertex(rng, cx - dy, cy + dx);
    let b = random_vertex(rng, cx + dy, cy - dx);
    let shared = random_edge(rng);
    let left = Triangle {
        v0: a,
        v1: p,
        v2: q,
        e0: shared,
        e1: random_edge(rng),
        e2: random_edge(rng),
    };
    let right = Triangle {
        v0: b,
        v1: q,
        v2: p,
        e0: shared,
        e1: random_edge(rng),
        e2: random_edge(rng),
    };
    (left, right)
}

fn bits(v: &Vertex) -> [u64; 4] {
    [v.x.to_bits(), v.y.to_bits(), v.h.to_bits(), v.s.value().to_bits()]
}

fn river_bits(e: Edge) -> Option<u64> {
    e.river.map(f64::to_bits)
}

fn random_config(rng: &mut ChaCha8Rng) -> GenConfig {
    let mut cfg = GenConfig::with_seed(rng.random());
    if rng.random_bool(0.5) {
        cfg.variant = Variant::IslandsInFjords;
    }
    cfg.k1 = rng.random_range(0.0..1.0);
    cfg.k2 = rng.random_range(0.0..1.0);
    cfg
}

#[test]
fn ten_thousand_random_adjacent_splits_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for i in 0..10_000 {
        let cfg = random_config(&mut rng);
        let (left, right) = adjacent_pair(&mut rng);
        let a = split_triangle(&left, &cfg);
        let b = split_triangle(&right, &cfg);
        assert_eq!(bits(&a.v3), bits(&b.v3), "case {i}: midpoint differs");
        // Halves are named from each triangle's own v1, so they swap.
        assert_eq!(river_bits(a.e4), river_bits(b.e5), "case {i}: half at p differs");
        assert_eq!(river_bits(a.e5), river_bits(b.e4), "case {i}: half at q differs");
        assert!((-1.0..=1.0).contains(&a.v3.h), "case {i}: altitude {}", a.v3.h);
        if let Some(r) = a.e3.river {
            assert!((-1.0..=1.0).contains(&r), "case {i}: river altitude {r}");
        }
    }
}

proptest! {
    #[test]
    fn adjacent_splits_agree(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cfg = random_config(&mut rng);
        let (left, right) = adjacent_pair(&mut rng);
        let a = split_triangle(&left, &cfg);
        let b = split_triangle(&right, &cfg);
        prop_assert_eq!(bits(&a.v3), bits(&b.v3));
        prop_assert_eq!(river_bits(a.e4), river_bits(b.e5));
        prop_assert_eq!(river_bits(a.e5), river_bits(b.e4));
    }
}

/// Every edge of a uniformly subdivided map carries the same attribute as
/// seen from both triangles that share it.
#[test]
fn subdivided_map_edges_are_consistent() {
    for (seed, variant) in [(2, Variant::Base), (8, Variant::IslandsInFjords)] {
        let cfg = GenConfig::with_seed(seed).with_variant(variant);
        let (a, b) = root_config(&cfg);
        let mut leaves = vec![a, b];
        for _ in 0..12 {
            leaves = leaves
                .iter()
                .flat_map(|t| {
                    let (x, y) = subdivide(t, &cfg);
                    [x, y]
                })
                .collect();
        }
        let mut seen: HashMap<(u64, u64), Option<u64>> = HashMap::new();
        let mut shared = 0;
        for t in &leaves {
            for v in t.vertices() {
                assert!((-1.0..=1.0).contains(&v.h));
            }
            for (p, q, e) in [(&t.v1, &t.v2, t.e0), (&t.v0, &t.v2, t.e1), (&t.v0, &t.v1, t.e2)] {
                let key = (((p.x + q.x) / 2.0).to_bits(), ((p.y + q.y) / 2.0).to_bits());
                if let Some(other) = seen.insert(key, river_bits(e)) {
                    assert_eq!(other, river_bits(e), "seed {seed}: edge at {key:?}");
                    shared += 1;
                }
            }
        }
        assert!(shared > leaves.len());
    }
}
