//! River network statistics.
//!
//! River pixels are grouped into components with 8-neighbour connectivity.
//! Two notions of "loop" are reported:
//!
//! * a component is *cyclic* when the river network underneath it has a
//!   cycle: leaf triangles joined through shared river-carrying edges form a
//!   closed chain. Only [`map_stats`] can see this, since it needs the leaves.
//! * a component *encloses* a region when non-river pixels (4-connected, not
//!   touching the raster border or no-data) are surrounded by it. Separate
//!   branches passing within a pixel of each other enclose regions without
//!   any river loop, so this is a rasterisation measure only.

use std::collections::{HashMap, VecDeque};

use crate::config::GenConfig;
use crate::error::Result;
use crate::raster::{trace_map, MapShape, Raster, Viewport};

#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    pub pixels: usize,
    pub min_altitude: f64,
    pub touches_sea: bool,
    /// Enclosed non-river regions.
    pub holes: usize,
    /// The river network under this component contains a cycle.
    pub cyclic: bool,
    /// Lowest river altitude of the networks painting this component.
    pub river_altitude: Option<f64>,
    /// Pixel bounds `[x_min, y_min, x_max, y_max]`, inclusive.
    pub bbox: [u32; 4],
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RiverStats {
    pub river_pixels: usize,
    /// River pixels at or above sea level.
    pub land_river_pixels: usize,
    pub components: Vec<Component>,
    /// Lowest river altitudes of network cycles that painted no river pixel.
    pub hidden_cycles: Vec<f64>,
}

impl RiverStats {
    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn touching_sea(&self) -> usize {
        self.components.iter().filter(|c| c.touches_sea).count()
    }

    pub fn cyclic(&self) -> impl Iterator<Item = &Component> {
        self.components.iter().filter(|c| c.cyclic)
    }

    /// Cyclic components, counting hidden network cycles as well.
    pub fn cyclic_count(&self) -> usize {
        self.cyclic().count() + self.hidden_cycles.len()
    }

    /// Lowest river altitude of each cyclic component or hidden cycle.
    pub fn cyclic_min_altitudes(&self) -> Vec<f64> {
        self.cyclic()
            .map(|c| c.river_altitude.unwrap_or(c.min_altitude))
            .chain(self.hidden_cycles.iter().copied())
            .collect()
    }

    /// Cycles whose lowest point is not below `threshold`.
    pub fn cyclic_not_below(&self, threshold: f64) -> usize {
        self.cyclic_min_altitudes().iter().filter(|&&h| h >= threshold).count()
    }

    /// Components enclosing at least one non-river region.
    pub fn enclosing_count(&self) -> usize {
        self.components.iter().filter(|c| c.holes > 0).count()
    }

    pub const CSV_HEADER: &'static str =
        "river_pixels,land_river_pixels,components,touching_sea,cyclic_components,enclosing_components";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.river_pixels,
            self.land_river_pixels,
            self.component_count(),
            self.touching_sea(),
            self.cyclic_count(),
            self.enclosing_count()
        )
    }
}

const NEIGHBOURS_8: [(i64, i64); 8] = [
    (-1, -1),
    (0, -1),
    (1, -1),
    (-1, 0),
    (1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
];
const NEIGHBOURS_4: [(i64, i64); 4] = [(0, -1), (-1, 0), (1, 0), (0, 1)];

/// Pixel statistics of `raster`. Network cycles are not visible here, so no
/// component is marked cyclic; see [`map_stats`].
pub fn river_stats(raster: &Raster) -> RiverStats {
    pixel_stats(raster).0
}

/// Renders `viewport` and reports its river statistics, including cycles in
/// the river network. Leaves are joined through river edges with equal
/// midpoints; in the kite map, edges of leaves at different depths never
/// match, so cycles through such T-junctions go unnoticed.
pub fn map_stats(shape: MapShape, viewport: &Viewport, cfg: &GenConfig) -> Result<(Raster, RiverStats)> {
    let mut network = Network::default();
    let raster = trace_map(shape, viewport, cfg, &mut |leaf, pixels| {
        let t = &leaf.tri;
        let id = network.add(pixels);
        for (a, b, e) in [(&t.v1, &t.v2, t.e0), (&t.v0, &t.v2, t.e1), (&t.v0, &t.v1, t.e2)] {
            if let Some(r) = e.river {
                let mid = (((a.x + b.x) / 2.0).to_bits(), ((a.y + b.y) / 2.0).to_bits());
                network.link(mid, id, r);
            }
        }
    })?
    .raster;
    let (mut stats, labels) = pixel_stats(&raster);
    let low = network.lowest_river_per_root();
    for leaf in 0..network.len() {
        let root = network.find(leaf);
        let Some(&h) = low.get(&root) else { continue };
        for &p in network.pixels_of(leaf) {
            if let Some(c) = labels[p] {
                let comp = &mut stats.components[c];
                comp.river_altitude = Some(comp.river_altitude.map_or(h, |a| a.min(h)));
            }
        }
    }
    for (root, leaves) in network.cyclic_groups() {
        let mut seen = false;
        for &leaf in &leaves {
            for &p in network.pixels_of(leaf) {
                if let Some(c) = labels[p] {
                    stats.components[c].cyclic = true;
                    seen = true;
                }
            }
        }
        if !seen {
            stats.hidden_cycles.push(low[&root]);
        }
    }
    Ok((raster, stats))
}

/// Leaves joined by river edges, with union-find over leaf ids.
#[derive(Default)]
struct Network {
    parent: Vec<usize>,
    /// Lowest river altitude on each leaf's edges.
    river_low: Vec<f64>,
    pixel_start: Vec<usize>,
    pixels: Vec<usize>,
    open: HashMap<(u64, u64), usize>,
    closing: Vec<usize>,
}

impl Network {
    fn add(&mut self, pixels: &[usize]) -> usize {
        let id = self.parent.len();
        self.parent.push(id);
        self.river_low.push(f64::INFINITY);
        self.pixel_start.push(self.pixels.len());
        self.pixels.extend_from_slice(pixels);
        id
    }

    fn len(&self) -> usize {
        self.parent.len()
    }

    fn pixels_of(&self, leaf: usize) -> &[usize] {
        let end = self.pixel_start.get(leaf + 1).copied().unwrap_or(self.pixels.len());
        &self.pixels[self.pixel_start[leaf]..end]
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn link(&mut self, edge: (u64, u64), leaf: usize, river: f64) {
        self.river_low[leaf] = self.river_low[leaf].min(river);
        let Some(other) = self.open.remove(&edge) else {
            self.open.insert(edge, leaf);
            return;
        };
        let (a, b) = (self.find(leaf), self.find(other));
        if a == b {
            self.closing.push(leaf);
        } else {
            self.parent[a] = b;
        }
    }

    fn lowest_river_per_root(&mut self) -> HashMap<usize, f64> {
        let mut low = HashMap::new();
        for leaf in 0..self.len() {
            let h = self.river_low[leaf];
            if h.is_finite() {
                let r = self.find(leaf);
                low.entry(r).and_modify(|a: &mut f64| *a = a.min(h)).or_insert(h);
            }
        }
        low
    }

    /// Roots and leaf sets of the connected networks that contain a cycle.
    fn cyclic_groups(&mut self) -> Vec<(usize, Vec<usize>)> {
        let mut roots: Vec<usize> = self.closing.clone().into_iter().map(|l| self.find(l)).collect();
        roots.sort_unstable();
        roots.dedup();
        let mut groups: HashMap<usize, Vec<usize>> = roots.iter().map(|&r| (r, Vec::new())).collect();
        for leaf in 0..self.parent.len() {
            let r = self.find(leaf);
            if let Some(g) = groups.get_mut(&r) {
                g.push(leaf);
            }
        }
        roots
            .into_iter()
            .map(|r| (r, groups.remove(&r).unwrap_or_default()))
            .collect()
    }
}

/// Components and per-pixel component labels.
fn pixel_stats(raster: &Raster) -> (RiverStats, Vec<Option<usize>>) {
    let (w, h) = (raster.width() as i64, raster.height() as i64);
    let cells = raster.cells();
    let at = |x: i64, y: i64| (y * w + x) as usize;
    let inside = |x: i64, y: i64| x >= 0 && y >= 0 && x < w && y < h;
    let is_river = |i: usize| cells[i].map(|c| c.is_river).unwrap_or(false);

    const NONE: u32 = u32::MAX;
    let mut label = vec![NONE; cells.len()];
    let mut components = Vec::new();
    let mut queue = VecDeque::new();
    let mut stats = RiverStats::default();

    for start in 0..cells.len() {
        if !is_river(start) || label[start] != NONE {
            continue;
        }
        let id = components.len() as u32;
        let mut comp = Component {
            pixels: 0,
            min_altitude: f64::INFINITY,
            touches_sea: false,
            holes: 0,
            cyclic: false,
            river_altitude: None,
            bbox: [u32::MAX, u32::MAX, 0, 0],
        };
        label[start] = id;
        queue.push_back(start);
        while let Some(i) = queue.pop_front() {
            let cell = cells[i].expect("river pixel has data");
            comp.pixels += 1;
            comp.min_altitude = comp.min_altitude.min(cell.h);
            if cell.h < 0.0 {
                comp.touches_sea = true;
            } else {
                stats.land_river_pixels += 1;
            }
            let (x, y) = (i as i64 % w, i as i64 / w);
            let b = &mut comp.bbox;
            *b = [b[0].min(x as u32), b[1].min(y as u32), b[2].max(x as u32), b[3].max(y as u32)];
            for (dx, dy) in NEIGHBOURS_8 {
                let (nx, ny) = (x + dx, y + dy);
                if !inside(nx, ny) {
                    continue;
                }
                let j = at(nx, ny);
                if is_river(j) {
                    if label[j] == NONE {
                        label[j] = id;
                        queue.push_back(j);
                    }
                } else if cells[j].map(|c| c.h < 0.0).unwrap_or(false) {
                    comp.touches_sea = true;
                }
            }
        }
        stats.river_pixels += comp.pixels;
        components.push(comp);
    }

    // Non-river regions; the first pixel of each region in scan order is its
    // top-left one, and the pixel above it belongs to the enclosing river.
    let mut seen = vec![false; cells.len()];
    for start in 0..cells.len() {
        if is_river(start) || seen[start] {
            continue;
        }
        seen[start] = true;
        queue.push_back(start);
        let mut enclosed = true;
        while let Some(i) = queue.pop_front() {
            let (x, y) = (i as i64 % w, i as i64 / w);
            if cells[i].is_none() || x == 0 || y == 0 || x == w - 1 || y == h - 1 {
                enclosed = false;
            }
            for (dx, dy) in NEIGHBOURS_4 {
                let (nx, ny) = (x + dx, y + dy);
                if !inside(nx, ny) {
                    continue;
                }
                let j = at(nx, ny);
                if !is_river(j) && !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        if enclosed {
            let (x, y) = (start as i64 % w, start as i64 / w);
            let owner = label[at(x, y - 1)];
            debug_assert_ne!(owner, NONE);
            components[owner as usize].holes += 1;
        }
    }

    stats.components = components;
    let labels = label.into_iter().map(|l| (l != NONE).then_some(l as usize)).collect();
    (stats, labels)
}
