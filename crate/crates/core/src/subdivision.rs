//! Vertex/edge/triangle model and the hypotenuse split.
//!
//! A [`Triangle`] is labelled so that `v0` is the vertex opposite the edge
//! that gets split next (the right-angle apex for the square map), `e0` joins
//! `v1` and `v2`, `e1` joins `v0` and `v2`, and `e2` joins `v0` and `v1`.
//! Splitting places `v3` on `e0`, halves `e0` into `e4` (`v1`–`v3`) and `e5`
//! (`v3`–`v2`), and adds the interior edge `e3` (`v0`–`v3`).
//!
//! Everything computed for `v3`, `e4` and `e5` depends only on `v1`, `v2` and
//! `e0`, so the triangle on the other side of `e0` derives identical values.

use crate::config::{GenConfig, Variant};
use crate::river_rules::{e3_attribute, E3Context};
use crate::seedmix::{mix, root_altitude, root_seed, self_mix, Seed};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vertex {
    pub x: f64,
    pub y: f64,
    /// Altitude in `[-1, 1]`; negative is below sea level.
    pub h: f64,
    pub s: Seed,
}

impl Vertex {
    pub fn new(x: f64, y: f64, h: f64, s: Seed) -> Vertex {
        Vertex { x, y, h, s }
    }

    pub fn distance(&self, other: &Vertex) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        (dx * dx + dy * dy).sqrt()
    }
}

/// Edge attributes. The endpoints are the triangle vertices named by the
/// edge's role, so only the optional river crossing is stored.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Edge {
    /// Altitude at which a river crosses this edge, if one does.
    pub river: Option<f64>,
}

impl Edge {
    pub const DRY: Edge = Edge { river: None };

    pub fn river(h: f64) -> Edge {
        Edge { river: Some(h) }
    }

    pub fn has_river(&self) -> bool {
        self.river.is_some()
    }

    /// Seed of the edge joining `a` and `b`, symmetric in its endpoints.
    pub fn seed(a: &Vertex, b: &Vertex) -> Seed {
        mix(a.s, b.s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Triangle {
    pub v0: Vertex,
    pub v1: Vertex,
    pub v2: Vertex,
    /// `v1`–`v2`, the edge split next.
    pub e0: Edge,
    /// `v0`–`v2`.
    pub e1: Edge,
    /// `v0`–`v1`.
    pub e2: Edge,
}

impl Triangle {
    pub fn area(&self) -> f64 {
        signed_area(&self.v0, &self.v1, &self.v2).abs()
    }

    pub fn bbox(&self) -> [f64; 4] {
        let xs = [self.v0.x, self.v1.x, self.v2.x];
        let ys = [self.v0.y, self.v1.y, self.v2.y];
        [
            xs[0].min(xs[1]).min(xs[2]),
            ys[0].min(ys[1]).min(ys[2]),
            xs[0].max(xs[1]).max(xs[2]),
            ys[0].max(ys[1]).max(ys[2]),
        ]
    }

    /// True when the triangle is isosceles and right-angled at `v0`.
    pub fn is_isosceles_right(&self, rel_tol: f64) -> bool {
        let a = self.v0.distance(&self.v1);
        let b = self.v0.distance(&self.v2);
        let dot = (self.v1.x - self.v0.x) * (self.v2.x - self.v0.x)
            + (self.v1.y - self.v0.y) * (self.v2.y - self.v0.y);
        (a - b).abs() <= rel_tol * a.max(b) && dot.abs() <= rel_tol * a * b
    }

    pub fn vertices(&self) -> [&Vertex; 3] {
        [&self.v0, &self.v1, &self.v2]
    }
}

pub(crate) fn signed_area(a: &Vertex, b: &Vertex, c: &Vertex) -> f64 {
    ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y)) / 2.0
}

/// Displacement scale for a new vertex between `v1` and `v2`.
#[inline]
pub fn delta(v1: &Vertex, v2: &Vertex, cfg: &GenConfig) -> f64 {
    cfg.k1 * v1.distance(v2) + cfg.k2 * (v1.h - v2.h).abs()
}

/// Where the river on a split edge goes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum Routing {
    Dry,
    /// Onto the `v1` half.
    First(f64),
    /// Onto the `v2` half.
    Second(f64),
    /// Onto both halves (islands variant only). `far_is_second` names the
    /// endpoint the nearest-altitude rule would not have picked.
    Both { river: f64, far_is_second: bool },
}

/// True if a river at altitude `river` belongs on the `v1` half.
fn nearer_first(v1: &Vertex, v2: &Vertex, river: f64) -> bool {
    let d1 = (river - v1.h).abs();
    let d2 = (river - v2.h).abs();
    if d1 != d2 {
        return d1 < d2;
    }
    // Exact tie: smaller canonical seed wins, then coordinates.
    let key = |v: &Vertex| (v.s.encode(), v.x, v.y);
    key(v1).partial_cmp(&key(v2)) == Some(std::cmp::Ordering::Less)
}

pub(crate) fn route(v1: &Vertex, v2: &Vertex, e0: Edge, edge_seed: Seed, cfg: &GenConfig) -> Routing {
    let Some(river) = e0.river else {
        return Routing::Dry;
    };
    let first = nearer_first(v1, v2, river);
    if cfg.variant == Variant::IslandsInFjords
        && river < cfg.k7
        && self_mix(edge_seed).value().abs() < cfg.k8
    {
        return Routing::Both {
            river,
            far_is_second: first,
        };
    }
    if first {
        Routing::First(river)
    } else {
        Routing::Second(river)
    }
}

impl Routing {
    pub(crate) fn halves(self) -> (Edge, Edge) {
        match self {
            Routing::Dry => (Edge::DRY, Edge::DRY),
            Routing::First(r) => (Edge::river(r), Edge::DRY),
            Routing::Second(r) => (Edge::DRY, Edge::river(r)),
            Routing::Both { river, .. } => (Edge::river(river), Edge::river(river)),
        }
    }

    /// Interpolated altitude before displacement: `w1·h1 + w2·h2`, with the
    /// river altitude standing in for the endpoint on the river's half. A
    /// river on both halves gives the three-way average of the river (twice)
    /// and the far endpoint.
    pub(crate) fn base_altitude(self, h1: f64, h2: f64, w1: f64, w2: f64) -> f64 {
        match self {
            Routing::Dry => w1 * h1 + w2 * h2,
            Routing::First(r) => w1 * r + w2 * h2,
            Routing::Second(r) => w1 * h1 + w2 * r,
            Routing::Both { river, far_is_second } => {
                let far = if far_is_second { h2 } else { h1 };
                (river + river + far) / 3.0
            }
        }
    }
}

#[inline]
pub(crate) fn cap(h: f64) -> f64 {
    h.clamp(-1.0, 1.0)
}

/// Splits the hypotenuse `v1`–`v2` at its midpoint.
///
/// Returns the new vertex and the halves `e4` (`v1`–`v3`) and `e5`
/// (`v3`–`v2`). Reads nothing but its arguments, so both triangles sharing
/// `e0` obtain identical results.
pub fn split_hypotenuse(v1: &Vertex, v2: &Vertex, e0: Edge, cfg: &GenConfig) -> (Vertex, Edge, Edge) {
    let s3 = mix(v1.s, v2.s);
    let routing = route(v1, v2, e0, s3, cfg);
    let displacement = delta(v1, v2, cfg) * s3.value();
    let base = routing.base_altitude(v1.h, v2.h, 0.5, 0.5);
    let v3 = Vertex {
        x: (v1.x + v2.x) / 2.0,
        y: (v1.y + v2.y) / 2.0,
        h: cap(base + displacement),
        s: s3,
    };
    let (e4, e5) = routing.halves();
    (v3, e4, e5)
}

/// Result of one subdivision step.
#[derive(Clone, Copy, Debug)]
pub struct Split {
    pub v3: Vertex,
    pub e3: Edge,
    pub e4: Edge,
    pub e5: Edge,
    /// `v3` apex, hypotenuse `v0`–`v1` (the old `e2`).
    pub child_a: Triangle,
    /// `v3` apex, hypotenuse `v2`–`v0` (the old `e1`).
    pub child_b: Triangle,
}

/// Derives `e3` from the fully split triangle and assembles the children.
pub(crate) fn assemble(t: &Triangle, v3: Vertex, e4: Edge, e5: Edge, cfg: &GenConfig) -> Split {
    let e3 = Edge {
        river: e3_attribute(&E3Context {
            v0: t.v0,
            v1: t.v1,
            v2: t.v2,
            v3,
            e1: t.e1,
            e2: t.e2,
            e4,
            e5,
            cfg,
        }),
    };
    let child_a = Triangle {
        v0: v3,
        v1: t.v0,
        v2: t.v1,
        e0: t.e2,
        e1: e4,
        e2: e3,
    };
    let child_b = Triangle {
        v0: v3,
        v1: t.v2,
        v2: t.v0,
        e0: t.e1,
        e1: e3,
        e2: e5,
    };
    Split {
        v3,
        e3,
        e4,
        e5,
        child_a,
        child_b,
    }
}

/// One full subdivision step, keeping the intermediate products.
pub fn split_triangle(t: &Triangle, cfg: &GenConfig) -> Split {
    let (v3, e4, e5) = split_hypotenuse(&t.v1, &t.v2, t.e0, cfg);
    assemble(t, v3, e4, e5, cfg)
}

pub fn subdivide(t: &Triangle, cfg: &GenConfig) -> (Triangle, Triangle) {
    let split = split_triangle(t, cfg);
    (split.child_a, split.child_b)
}

/// The two root triangles tiling the unit square, sharing the diagonal from
/// (0,1) to (1,0).
pub fn root_config(cfg: &GenConfig) -> (Triangle, Triangle) {
    let corners = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)];
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
    let lower = Triangle {
        v0: v[0],
        v1: v[2],
        v2: v[1],
        e0: Edge::DRY,
        e1: Edge::DRY,
        e2: Edge::DRY,
    };
    let upper = Triangle {
        v0: v[3],
        v1: v[1],
        v2: v[2],
        e0: Edge::DRY,
        e1: Edge::DRY,
        e2: Edge::DRY,
    };
    (lower, upper)
}
