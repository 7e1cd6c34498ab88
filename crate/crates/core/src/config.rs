//! Generator constants and variant selection.

use crate::error::{Error, Result};
use crate::render::ColorMap;

/// River rule set used when splitting edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Variant {
    #[default]
    Base,
    /// Deep underwater rivers may be copied onto both halves of a split edge,
    /// producing islands in fjords instead of closed river loops.
    IslandsInFjords,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenConfig {
    pub master_seed: u64,
    /// Displacement per unit of edge length.
    pub k1: f64,
    /// Displacement per unit of altitude difference between the endpoints.
    pub k2: f64,
    /// Minimum land altitude for a river to start in the no-river case.
    pub k3: f64,
    /// Maximum sea altitude for a river to start in the no-river case.
    pub k4: f64,
    /// Probability of extending a river upwards.
    pub k5: f64,
    /// Branching probability per unit of hypotenuse length.
    pub k6: f64,
    /// River altitude below which the islands variant may duplicate a river.
    pub k7: f64,
    /// Probability of duplicating a river in the islands variant.
    pub k8: f64,
    pub variant: Variant,
    pub palette: ColorMap,
    /// Keep only this fraction of rivers started in the no-river case.
    /// `None` starts a river whenever the preconditions hold.
    pub no_river_gate: Option<f64>,
    /// Overrides the hashed root altitudes (corners in the order
    /// (0,0), (1,0), (0,1), (1,1) for the square map).
    pub root_altitudes: Option<[f64; 4]>,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            master_seed: 0,
            k1: 0.32,
            k2: 0.55,
            k3: 0.1,
            k4: -0.1,
            k5: 0.7,
            k6: 2.0,
            k7: -0.1,
            k8: 0.15,
            variant: Variant::Base,
            palette: ColorMap::default(),
            no_river_gate: None,
            root_altitudes: None,
        }
    }
}

impl GenConfig {
    pub fn with_seed(master_seed: u64) -> Self {
        GenConfig {
            master_seed,
            ..GenConfig::default()
        }
    }

    pub fn with_variant(mut self, variant: Variant) -> Self {
        self.variant = variant;
        self
    }

    /// Alias for `k3`.
    pub fn min_land(&self) -> f64 {
        self.k3
    }

    /// Alias for `k4`.
    pub fn max_sea(&self) -> f64 {
        self.k4
    }

    pub fn validate(&self) -> Result<()> {
        let ks = [
            ("k1", self.k1),
            ("k2", self.k2),
            ("k3", self.k3),
            ("k4", self.k4),
            ("k5", self.k5),
            ("k6", self.k6),
            ("k7", self.k7),
            ("k8", self.k8),
        ];
        for (name, v) in ks {
            if !v.is_finite() {
                return Err(Error::InvalidConfig(format!("{name} must be finite")));
            }
        }
        if self.k1 < 0.0 || self.k2 < 0.0 {
            return Err(Error::InvalidConfig("k1 and k2 must be non-negative".into()));
        }
        if !(-1.0..=1.0).contains(&self.k3) || !(-1.0..=1.0).contains(&self.k4) {
            return Err(Error::InvalidConfig("k3 and k4 must lie in [-1, 1]".into()));
        }
        if self.k5 < 0.0 || self.k6 < 0.0 || self.k8 < 0.0 {
            return Err(Error::InvalidConfig("k5, k6 and k8 must be non-negative".into()));
        }
        if !(self.k7 < 0.0 && self.k7 >= -1.0) {
            return Err(Error::InvalidConfig("k7 must lie in [-1, 0)".into()));
        }
        if let Some(p) = self.no_river_gate {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidConfig("no-river gate must lie in [0, 1]".into()));
            }
        }
        if let Some(hs) = self.root_altitudes {
            if hs.iter().any(|h| !(-1.0..=1.0).contains(h)) {
                return Err(Error::InvalidConfig("root altitudes must lie in [-1, 1]".into()));
            }
        }
        self.palette.validate()
    }
}
