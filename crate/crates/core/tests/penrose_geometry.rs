//! Robinson subdivision keeps golden triangles and covers the kite.

use fjordmap::penrose::{kite_area, kite_roots, split_robinson, weighted_altitude, RobinsonKind, PHI};
use fjordmap::{render_kite_with, Execution, GenConfig, Seed, Variant, Vertex, Viewport};

#[test]
fn every_triangle_to_depth_12_is_golden() {
    let cfg = GenConfig::with_seed(11);
    let mut level = kite_roots(&cfg).to_vec();
    let area: f64 = level.iter().map(|t| t.area()).sum();
    assert!((area - kite_area()).abs() < 1e-12);
    let mut checked = 0;
    for depth in 0..=12 {
        for t in &level {
            assert!(t.is_golden(1e-9), "depth {depth}: {:?} {:?}", t.kind, t.sides());
            for v in t.tri.vertices() {
                assert!((-1.0..=1.0).contains(&v.h));
            }
            checked += 1;
        }
        let total: f64 = level.iter().map(|t| t.area()).sum();
        assert!((total - area).abs() < 1e-9, "depth {depth}: area {total}");
        if depth < 12 {
            level = level
                .iter()
                .flat_map(|t| {
                    let (a, b) = split_robinson(t, &cfg);
                    [a, b]
                })
                .collect();
        }
    }
    assert!(checked > 10_000);
    assert!(level.iter().any(|t| t.kind == RobinsonKind::Acute));
    assert!(level.iter().any(|t| t.kind == RobinsonKind::Obtuse));
}

#[test]
fn weighted_altitude_uses_golden_weights() {
    let cfg = GenConfig::default();
    let v1 = Vertex::new(0.0, 0.0, 1.0, Seed::new(0.25));
    let v2 = Vertex::new(1.0, 0.0, 0.0, Seed::new(-0.5));
    assert!((weighted_altitude(&v1, &v2, Seed::ZERO, &cfg) - (PHI - 1.0)).abs() < 1e-12);
}

#[test]
fn whole_map_masks_outside_the_kite() {
    let expected = 1.0 - kite_area();
    assert!((expected - 0.5747).abs() < 1e-4);
    for variant in [Variant::Base, Variant::IslandsInFjords] {
        let cfg = GenConfig::with_seed(4).with_variant(variant);
        let r = render_kite_with(&Viewport::whole_map(255), &cfg, Execution::Parallel).unwrap();
        let f = r.raster.no_data_fraction();
        assert!((f - expected).abs() < 0.02 * expected, "no-data fraction {f}");
    }
}

#[test]
fn kite_render_is_thread_independent() {
    let cfg = GenConfig::with_seed(13);
    let v = Viewport::new((0.5, 0.45), 2.0, 70, 50);
    let a = render_kite_with(&v, &cfg, Execution::Sequential).unwrap();
    let b = render_kite_with(&v, &cfg, Execution::Parallel).unwrap();
    assert_eq!(a.raster, b.raster);
    assert_eq!(a.visited, b.visited);
}
