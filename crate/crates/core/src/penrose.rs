//! Kite-shaped maps built from Robinson triangles.
//!
//! Acute triangles have angles 36°-72°-72° and obtuse ones 36°-36°-108°; in
//! both the long side is φ times the short one. Each split cuts one side at
//! ratio φ:1 and yields one acute and one obtuse child.
//!
//! A [`RobinsonTriangle`] reuses the [`Triangle`] labelling: `v0` is the
//! vertex opposite the side that is cut next, `v1` is the end of that side
//! nearest the cut point and `v2` the far end. The cut point is
//! `v2 + (v1 - v2) / φ`. Children, with `p` the cut point:
//!
//! | parent | child  | `v0` | `v1` | `v2` | `e0`      | `e1` | `e2` |
//! |--------|--------|------|------|------|-----------|------|------|
//! | acute  | acute  | `p`  | `v1` | `v0` | parent e2 | e3   | e4   |
//! | acute  | obtuse | `p`  | `v2` | `v0` | parent e1 | e3   | e5   |
//! | obtuse | acute  | `v0` | `p`  | `v2` | e5        | parent e1 | e3 |
//! | obtuse | obtuse | `p`  | `v0` | `v1` | parent e2 | e4   | e3   |
//!
//! With this table every side is cut at the same point by both triangles
//! that share it, so split products agree across neighbours exactly as on
//! the square map. River routing and the `e3` rules are the square-map ones,
//! applied to the same vertex and edge roles.

use crate::config::GenConfig;
use crate::error::Result;
use crate::raster::{drive, intersects, Execution, Leaf, PixelGrid, RasterCell, Rendered, Subdivider, Viewport, Visit};
use crate::river_rules::{e3_attribute, E3Context};
use crate::seedmix::{mix, root_altitude, root_seed, Seed};
use crate::subdivision::{cap, delta, route, signed_area, Edge, Triangle, Vertex};

/// The golden ratio.
pub const PHI: f64 = 1.618_033_988_749_895;
/// `1 / φ == φ - 1`.
pub const INV_PHI: f64 = 0.618_033_988_749_895;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RobinsonKind {
    /// 36°-72°-72°.
    Acute,
    /// 36°-36°-108°.
    Obtuse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Chirality {
    /// `v0 -> v1 -> v2` turns counter-clockwise in map coordinates.
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RobinsonTriangle {
    pub kind: RobinsonKind,
    pub tri: Triangle,
}

impl RobinsonTriangle {
    pub fn chirality(&self) -> Chirality {
        if signed_area(&self.tri.v0, &self.tri.v1, &self.tri.v2) > 0.0 {
            Chirality::Left
        } else {
            Chirality::Right
        }
    }

    /// The 36° vertex of an acute triangle, the 108° vertex of an obtuse one.
    pub fn apex(&self) -> &Vertex {
        match self.kind {
            RobinsonKind::Acute => &self.tri.v2,
            RobinsonKind::Obtuse => &self.tri.v0,
        }
    }

    /// Side lengths, shortest first.
    pub fn sides(&self) -> [f64; 3] {
        let t = &self.tri;
        let mut s = [t.v1.distance(&t.v2), t.v0.distance(&t.v2), t.v0.distance(&t.v1)];
        s.sort_by(f64::total_cmp);
        s
    }

    pub fn diameter(&self) -> f64 {
        self.sides()[2]
    }

    /// Checks the isosceles golden-ratio shape within `rel_tol`.
    pub fn is_golden(&self, rel_tol: f64) -> bool {
        let [a, b, c] = self.sides();
        match self.kind {
            RobinsonKind::Acute => {
                (b - c).abs() <= rel_tol * c && (c / a - PHI).abs() <= rel_tol * PHI
            }
            RobinsonKind::Obtuse => {
                (a - b).abs() <= rel_tol * c && (c / a - PHI).abs() <= rel_tol * PHI
            }
        }
    }

    pub fn area(&self) -> f64 {
        self.tri.area()
    }
}

/// Altitude of a new vertex on a dry edge: weighted towards `v1`, the
/// endpoint nearer the cut.
pub fn weighted_altitude(v1: &Vertex, v2: &Vertex, s3: Seed, cfg: &GenConfig) -> f64 {
    cap((PHI - 1.0) * v1.h + (2.0 - PHI) * v2.h + delta(v1, v2, cfg) * s3.value())
}

/// One Robinson split with its intermediate products.
#[derive(Clone, Copy, Debug)]
pub struct RobinsonSplit {
    pub p: Vertex,
    pub e3: Edge,
    pub e4: Edge,
    pub e5: Edge,
    pub acute: RobinsonTriangle,
    pub obtuse: RobinsonTriangle,
}

/// New vertex and halves of the cut side; depends only on `v1`, `v2`, `e0`.
fn cut(v1: &Vertex, v2: &Vertex, e0: Edge, cfg: &GenConfig) -> (Vertex, Edge, Edge) {
    let s = mix(v1.s, v2.s);
    let routing = route(v1, v2, e0, s, cfg);
    let base = routing.base_altitude(v1.h, v2.h, PHI - 1.0, 2.0 - PHI);
    let p = Vertex {
        x: v2.x + (v1.x - v2.x) * INV_PHI,
        y: v2.y + (v1.y - v2.y) * INV_PHI,
        h: cap(base + delta(v1, v2, cfg) * s.value()),
        s,
    };
    let (e4, e5) = routing.halves();
    (p, e4, e5)
}

pub fn split_robinson_full(t: &RobinsonTriangle, cfg: &GenConfig) -> RobinsonSplit {
    let r = &t.tri;
    let (p, e4, e5) = cut(&r.v1, &r.v2, r.e0, cfg);
    let e3 = Edge {
        river: e3_attribute(&E3Context {
            v0: r.v0,
            v1: r.v1,
            v2: r.v2,
            v3: p,
            e1: r.e1,
            e2: r.e2,
            e4,
            e5,
            cfg,
        }),
    };
    let (acute, obtuse) = match t.kind {
        RobinsonKind::Acute => (
            Triangle { v0: p, v1: r.v1, v2: r.v0, e0: r.e2, e1: e3, e2: e4 },
            Triangle { v0: p, v1: r.v2, v2: r.v0, e0: r.e1, e1: e3, e2: e5 },
        ),
        RobinsonKind::Obtuse => (
            Triangle { v0: r.v0, v1: p, v2: r.v2, e0: e5, e1: r.e1, e2: e3 },
            Triangle { v0: p, v1: r.v0, v2: r.v1, e0: r.e2, e1: e4, e2: e3 },
        ),
    };
    RobinsonSplit {
        p,
        e3,
        e4,
        e5,
        acute: RobinsonTriangle { kind: RobinsonKind::Acute, tri: acute },
        obtuse: RobinsonTriangle { kind: RobinsonKind::Obtuse, tri: obtuse },
    }
}

/// Splits `t` into its (acute, obtuse) children.
pub fn split_robinson(t: &RobinsonTriangle, cfg: &GenConfig) -> (RobinsonTriangle, RobinsonTriangle) {
    let s = split_robinson_full(t, cfg);
    (s.acute, s.obtuse)
}

/// Vertices of the kite inside the unit square: top, bottom, left, right.
pub fn kite_corners() -> [(f64, f64); 4] {
    let sin36 = (36f64).to_radians().sin();
    let cos36 = (36f64).to_radians().cos();
    let leg = 1.0 / (2.0 * sin36);
    let top = (0.5, (1.0 - leg) / 2.0);
    [
        top,
        (0.5, top.1 + leg),
        (0.5 - leg * sin36, top.1 + leg * cos36),
        (0.5 + leg * sin36, top.1 + leg * cos36),
    ]
}

/// The two mirror-image acute triangles forming the kite. They share the
/// top-bottom axis, which is also the first side to be cut.
pub fn kite_roots(cfg: &GenConfig) -> [RobinsonTriangle; 2] {
    let corners = kite_corners();
    let v: Vec<Vertex> = corners
        .iter()
        .enumerate()
        .map(|(i, &(x, y))| {
            let h = match cfg.root_altitudes {
                Some(hs) => hs[i],
                None => root_altitude(cfg.master_seed, i as u64),
            };
            Vertex::new(x, y, h, root_seed(cfg.master_seed, i as u64))
        })
        .collect();
    let half = |side: Vertex| RobinsonTriangle {
        kind: RobinsonKind::Acute,
        tri: Triangle {
            v0: side,
            v1: v[1],
            v2: v[0],
            e0: Edge::DRY,
            e1: Edge::DRY,
            e2: Edge::DRY,
        },
    };
    [half(v[2]), half(v[3])]
}

/// Area of the kite as a fraction of the unit square.
pub fn kite_area() -> f64 {
    let sin36 = (36f64).to_radians().sin();
    let leg = 1.0 / (2.0 * sin36);
    leg * leg * sin36
}

pub(crate) struct KiteMap<'a> {
    cfg: &'a GenConfig,
    map_px: u64,
    x0: i64,
    y0: i64,
    width: u32,
    height: u32,
    window: [f64; 4],
}

impl KiteMap<'_> {
    fn local_index(&self, gx: i64, gy: i64) -> Option<usize> {
        let lx = gx - self.x0;
        let ly = gy - self.y0;
        (lx >= 0 && ly >= 0 && lx < self.width as i64 && ly < self.height as i64)
            .then(|| ly as usize * self.width as usize + lx as usize)
    }

}

impl Subdivider for KiteMap<'_> {
    type Node = (RobinsonTriangle, u128);

    fn visit(&self, (t, path): (RobinsonTriangle, u128)) -> Visit<Self::Node> {
        if !intersects(t.tri.bbox(), self.window) {
            return Visit::Culled;
        }
        if t.diameter() * self.map_px as f64 <= 1.0 {
            let (p, _, _) = cut(&t.tri.v1, &t.tri.v2, t.tri.e0, self.cfg);
            return Visit::Leaf(Leaf {
                tri: t.tri,
                cell: RasterCell {
                    h: p.h,
                    is_river: t.tri.e0.has_river(),
                },
                key: path,
            });
        }
        let s = split_robinson_full(&t, self.cfg);
        Visit::Split([(s.acute, path << 1), (s.obtuse, (path << 1) | 1)])
    }

    /// Every pixel whose centre lies in the leaf, edges included.
    fn paint(&self, leaf: &Leaf, emit: &mut dyn FnMut(usize)) {
        let t = &leaf.tri;
        let s = self.map_px as f64;
        let [minx, miny, maxx, maxy] = t.bbox();
        let cx0 = (minx * s - 0.5).ceil() as i64;
        let cx1 = (maxx * s - 0.5).floor() as i64;
        let cy0 = (miny * s - 0.5).ceil() as i64;
        let cy1 = (maxy * s - 0.5).floor() as i64;
        let (a, b, c) = (&t.v0, &t.v1, &t.v2);
        let scale = (maxx - minx).max(maxy - miny);
        let eps = 1e-9 * scale * scale;
        let edge = |p: &Vertex, q: &Vertex, x: f64, y: f64| (q.x - p.x) * (y - p.y) - (q.y - p.y) * (x - p.x);
        for gy in cy0..=cy1 {
            let y = (gy as f64 + 0.5) / s;
            for gx in cx0..=cx1 {
                let Some(index) = self.local_index(gx, gy) else {
                    continue;
                };
                let x = (gx as f64 + 0.5) / s;
                let d = [edge(a, b, x, y), edge(b, c, x, y), edge(c, a, x, y)];
                if d.iter().all(|&v| v >= -eps) || d.iter().all(|&v| v <= eps) {
                    emit(index);
                }
            }
        }
    }
}

pub(crate) fn kite_job<'a>(grid: &PixelGrid, cfg: &'a GenConfig) -> (KiteMap<'a>, Vec<(RobinsonTriangle, u128)>) {
    let job = KiteMap {
        cfg,
        map_px: grid.map_px,
        x0: grid.x0,
        y0: grid.y0,
        width: grid.width,
        height: grid.height,
        window: grid.padded_window(),
    };
    let [a, b] = kite_roots(cfg);
    (job, vec![(a, 2), (b, 3)])
}

/// Renders `viewport` of the kite map. Pixels outside the kite are no-data.
pub fn render_kite(viewport: &Viewport, cfg: &GenConfig) -> Result<Rendered> {
    render_kite_with(viewport, cfg, Execution::default())
}

pub fn render_kite_with(viewport: &Viewport, cfg: &GenConfig, exec: Execution) -> Result<Rendered> {
    cfg.validate()?;
    let grid = viewport.pixel_grid()?;
    let (job, roots) = kite_job(&grid, cfg);
    Ok(drive(&job, roots, grid.width, grid.height, exec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seedmix::Seed;

    fn vtx(x: f64, y: f64, h: f64, s: f64) -> Vertex {
        Vertex::new(x, y, h, Seed::new(s))
    }

    #[test]
    fn phi_constants() {
        assert_eq!(PHI, (1.0 + 5f64.sqrt()) / 2.0);
        assert!((INV_PHI - (PHI - 1.0)).abs() < 1e-15);
        assert!((INV_PHI * PHI - 1.0).abs() < 1e-15);
    }

    #[test]
    fn weighted_altitude_examples() {
        let cfg = GenConfig::default();
        let a = vtx(0.0, 0.0, 0.3, 0.1);
        let b = vtx(1.0, 0.0, 0.3, 0.2);
        assert!((weighted_altitude(&a, &b, Seed::ZERO, &cfg) - 0.3).abs() < 1e-15);
        let one = vtx(0.0, 0.0, 1.0, 0.1);
        let zero = vtx(1.0, 0.0, 0.0, 0.2);
        let w = weighted_altitude(&one, &zero, Seed::ZERO, &cfg);
        assert!((w - 0.618_033_988_7).abs() < 1e-10);
        assert!((w - (PHI - 1.0)).abs() < 1e-12);
        assert_ne!(w, weighted_altitude(&zero, &one, Seed::ZERO, &cfg));
    }

    #[test]
    fn kite_roots_are_golden_mirrors() {
        let cfg = GenConfig::with_seed(4);
        let [l, r] = kite_roots(&cfg);
        assert!(l.is_golden(1e-12) && r.is_golden(1e-12));
        assert_ne!(l.chirality(), r.chirality());
        assert!((l.area() + r.area() - kite_area()).abs() < 1e-12);
        for (x, y) in kite_corners() {
            assert!((0.0..=1.0).contains(&x) && (0.0..=1.0).contains(&y));
        }
    }

    #[test]
    fn children_are_golden_and_partition_parent() {
        let cfg = GenConfig::with_seed(8);
        let [root, _] = kite_roots(&cfg);
        let (a, o) = split_robinson(&root, &cfg);
        assert!(a.is_golden(1e-9) && o.is_golden(1e-9));
        assert_eq!(a.kind, RobinsonKind::Acute);
        assert_eq!(o.kind, RobinsonKind::Obtuse);
        assert!((a.area() + o.area() - root.area()).abs() <= 1e-12 * root.area());
        let (a2, o2) = split_robinson(&o, &cfg);
        assert!(a2.is_golden(1e-9) && o2.is_golden(1e-9));
        assert!((a2.area() + o2.area() - o.area()).abs() <= 1e-12 * o.area());
    }

    fn mirror(t: &RobinsonTriangle) -> RobinsonTriangle {
        let m = |v: Vertex| Vertex { x: -v.x, ..v };
        RobinsonTriangle {
            kind: t.kind,
            tri: Triangle {
                v0: m(t.tri.v0),
                v1: m(t.tri.v1),
                v2: m(t.tri.v2),
                ..t.tri
            },
        }
    }

    #[test]
    fn mirrored_parent_gives_mirrored_children() {
        let cfg = GenConfig::with_seed(13);
        let [root, _] = kite_roots(&cfg);
        let mut stack = vec![root];
        for _ in 0..6 {
            let t = stack.pop().unwrap();
            let (a, o) = split_robinson(&t, &cfg);
            let (ma, mo) = split_robinson(&mirror(&t), &cfg);
            for (c, mc) in [(a, ma), (o, mo)] {
                assert_eq!(mirror(&c), mc);
                assert_ne!(c.chirality(), mc.chirality());
            }
            stack.push(a);
            stack.push(o);
        }
    }
}
