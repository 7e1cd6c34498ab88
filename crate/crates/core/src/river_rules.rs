//! River attribute of the interior edge `e3`.
//!
//! `e3` runs from `v0` to the new vertex `v3` and divides the parent into a
//! `v1` side (outer edges `e2`, `e4`) and a `v2` side (outer edges `e1`,
//! `e5`). The decision looks at which outer edges carry rivers and falls into
//! exactly one [`RiverCase`].
//!
//! One-river probes. For a river on an outer edge, the *far* vertex is the
//! corner of the opposite sub-triangle that is not on `e3`, and the *guard*
//! vertex is the endpoint of `e3` that does not lie on the river's edge:
//!
//! | river on | far vertex | guard vertex |
//! |----------|------------|--------------|
//! | `e1`     | `v1`       | `v3`         |
//! | `e2`     | `v2`       | `v3`         |
//! | `e4`     | `v2`       | `v0`         |
//! | `e5`     | `v1`       | `v0`         |
//!
//! Seeds: every case draws from `mix(v0.s, v3.s)` except the upward
//! extension and branching cases, which use `self_mix(far.s)` for the
//! altitude.

use crate::config::GenConfig;
use crate::seedmix::{between, mix, self_mix, Seed};
use crate::subdivision::{Edge, Vertex};

/// Everything visible to the `e3` decision.
#[derive(Clone, Copy, Debug)]
pub struct E3Context<'a> {
    pub v0: Vertex,
    pub v1: Vertex,
    pub v2: Vertex,
    pub v3: Vertex,
    /// `v0`–`v2`.
    pub e1: Edge,
    /// `v0`–`v1`.
    pub e2: Edge,
    /// `v1`–`v3`.
    pub e4: Edge,
    /// `v3`–`v2`.
    pub e5: Edge,
    pub cfg: &'a GenConfig,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OuterEdge {
    E1,
    E2,
    E4,
    E5,
}

/// Rivers on opposite sides of `e3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OppositePair {
    E1E2,
    E1E4,
    E2E5,
}

/// Rivers on the same side of `e3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SameSidePair {
    E1E5,
    E2E4,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RiverCase {
    NoRiver,
    OneRiver(OuterEdge),
    TwoOpposite(OppositePair),
    TwoSameSide(SameSidePair),
    /// Three rivers; the payload names the dry outer edge (`E4` or `E5`).
    Three { missing: OuterEdge },
    /// Rivers on both `e4` and `e5` (islands variant only).
    Islands,
}

impl<'a> E3Context<'a> {
    fn edge(&self, which: OuterEdge) -> Edge {
        match which {
            OuterEdge::E1 => self.e1,
            OuterEdge::E2 => self.e2,
            OuterEdge::E4 => self.e4,
            OuterEdge::E5 => self.e5,
        }
    }

    fn river(&self, which: OuterEdge) -> f64 {
        self.edge(which)
            .river
            .expect("river case dispatched onto a dry edge")
    }

    fn cross_seed(&self) -> Seed {
        mix(self.v0.s, self.v3.s)
    }

    /// Swaps the `v1` and `v2` sides.
    pub fn mirrored(&self) -> E3Context<'a> {
        E3Context {
            v1: self.v2,
            v2: self.v1,
            e1: self.e2,
            e2: self.e1,
            e4: self.e5,
            e5: self.e4,
            ..*self
        }
    }
}

/// Classifies the context by its set of river-carrying outer edges.
pub fn classify(ctx: &E3Context) -> RiverCase {
    use OuterEdge::*;
    let wet = [
        ctx.e1.has_river(),
        ctx.e2.has_river(),
        ctx.e4.has_river(),
        ctx.e5.has_river(),
    ];
    match wet {
        [false, false, false, false] => RiverCase::NoRiver,
        [true, false, false, false] => RiverCase::OneRiver(E1),
        [false, true, false, false] => RiverCase::OneRiver(E2),
        [false, false, true, false] => RiverCase::OneRiver(E4),
        [false, false, false, true] => RiverCase::OneRiver(E5),
        [true, true, false, false] => RiverCase::TwoOpposite(OppositePair::E1E2),
        [true, false, true, false] => RiverCase::TwoOpposite(OppositePair::E1E4),
        [false, true, false, true] => RiverCase::TwoOpposite(OppositePair::E2E5),
        [true, false, false, true] => RiverCase::TwoSameSide(SameSidePair::E1E5),
        [false, true, true, false] => RiverCase::TwoSameSide(SameSidePair::E2E4),
        [true, true, true, false] => RiverCase::Three { missing: E5 },
        [true, true, false, true] => RiverCase::Three { missing: E4 },
        [_, _, true, true] => RiverCase::Islands,
    }
}

/// River altitude on `e3`, if any.
pub fn e3_attribute(ctx: &E3Context) -> Option<f64> {
    match classify(ctx) {
        RiverCase::NoRiver => case_no_river(ctx),
        RiverCase::OneRiver(which) => case_one_river(ctx, which),
        RiverCase::TwoOpposite(pair) => Some(case_two_opposite(ctx, pair)),
        RiverCase::TwoSameSide(pair) => case_two_same_side(ctx, pair),
        RiverCase::Three { missing } => Some(case_three(ctx, missing)),
        RiverCase::Islands => islands_cases(ctx),
    }
}

/// A river may start on `e3` when one side is clearly land and the other
/// clearly sea, and the sea corner is lower than both ends of `e3`.
pub fn case_no_river(ctx: &E3Context) -> Option<f64> {
    let cfg = ctx.cfg;
    let (v0, v1, v2, v3) = (&ctx.v0, &ctx.v1, &ctx.v2, &ctx.v3);
    let low = if v1.h > cfg.k3 && v2.h < cfg.k4 && v2.h < v0.h && v2.h < v3.h {
        v2.h
    } else if v2.h > cfg.k3 && v1.h < cfg.k4 && v1.h < v0.h && v1.h < v3.h {
        v1.h
    } else {
        return None;
    };
    let seed = ctx.cross_seed();
    if let Some(keep) = cfg.no_river_gate {
        if self_mix(seed).value().abs() >= keep {
            return None;
        }
    }
    Some(between(low, v0.h.min(v3.h), seed))
}

pub fn case_one_river(ctx: &E3Context, which: OuterEdge) -> Option<f64> {
    let river = ctx.river(which);
    let (far, guard) = match which {
        OuterEdge::E1 => (&ctx.v1, &ctx.v3),
        OuterEdge::E2 => (&ctx.v2, &ctx.v3),
        OuterEdge::E4 => (&ctx.v2, &ctx.v0),
        OuterEdge::E5 => (&ctx.v1, &ctx.v0),
    };
    let seed = ctx.cross_seed();
    if far.h < 0.0 && far.h < river && guard.h > 0.0 {
        // Downhill towards a sea corner.
        Some(between(far.h, river, seed))
    } else if far.h > river && ctx.v0.h > river && ctx.v3.h > river {
        // Upstream into higher ground, with probability k5.
        (seed.value().abs() < ctx.cfg.k5).then(|| {
            let top = far.h.min(ctx.v0.h).min(ctx.v3.h);
            between(river, top, self_mix(far.s))
        })
    } else {
        None
    }
}

/// Rivers on both sides always connect through `e3`.
pub fn case_two_opposite(ctx: &E3Context, pair: OppositePair) -> f64 {
    let (a, b) = match pair {
        OppositePair::E1E2 => {
            // Ordered by altitude so the result does not depend on which
            // side is labelled v1.
            let (r1, r2) = (ctx.river(OuterEdge::E1), ctx.river(OuterEdge::E2));
            (r1.min(r2), r1.max(r2))
        }
        OppositePair::E1E4 => (ctx.river(OuterEdge::E1), ctx.river(OuterEdge::E4)),
        OppositePair::E2E5 => (ctx.river(OuterEdge::E2), ctx.river(OuterEdge::E5)),
    };
    between(a, b, ctx.cross_seed())
}

/// Two rivers on one side: possibly a branch entering through `e3`, with
/// probability proportional to the hypotenuse length.
pub fn case_two_same_side(ctx: &E3Context, pair: SameSidePair) -> Option<f64> {
    let (far, lowest_river) = match pair {
        SameSidePair::E1E5 => (
            &ctx.v1,
            ctx.river(OuterEdge::E1).min(ctx.river(OuterEdge::E5)),
        ),
        SameSidePair::E2E4 => (
            &ctx.v2,
            ctx.river(OuterEdge::E2).min(ctx.river(OuterEdge::E4)),
        ),
    };
    let lowest_vertex = far.h.min(ctx.v0.h).min(ctx.v3.h);
    if lowest_vertex <= lowest_river {
        return None;
    }
    let chance = ctx.cfg.k6 * ctx.v1.distance(&ctx.v2);
    (ctx.cross_seed().value().abs() < chance)
        .then(|| between(lowest_vertex, lowest_river, self_mix(far.s)))
}

/// Three rivers always connect through `e3`.
pub fn case_three(ctx: &E3Context, missing: OuterEdge) -> f64 {
    let r1 = ctx.river(OuterEdge::E1);
    let r2 = ctx.river(OuterEdge::E2);
    let (lone, other) = match missing {
        // Rivers on e1, e2, e4: e1 is alone on its side.
        OuterEdge::E5 => (r1, r2.min(ctx.river(OuterEdge::E4))),
        OuterEdge::E4 => (r2, r1.min(ctx.river(OuterEdge::E5))),
        OuterEdge::E1 | OuterEdge::E2 => {
            unreachable!("three-river case always has e1 and e2 wet")
        }
    };
    between(lone, other, ctx.cross_seed())
}

/// Rivers on both halves of the split edge.
pub fn islands_cases(ctx: &E3Context) -> Option<f64> {
    let seed = ctx.cross_seed();
    match (ctx.e1.river, ctx.e2.river) {
        (Some(r1), None) => Some(between(r1, ctx.river(OuterEdge::E4), seed)),
        (None, Some(r2)) => Some(between(r2, ctx.river(OuterEdge::E5), seed)),
        _ => None,
    }
}
