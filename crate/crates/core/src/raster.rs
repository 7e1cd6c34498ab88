//! Viewports, rasters and the culled recursive renderer.
//!
//! A viewport at zoom `z` with `W x H` pixels is a window onto a virtual
//! square map of `S = round(z * max(W, H))` pixels per side. Pixel `(c, r)`
//! of that virtual map covers `[c/S, (c+1)/S] x [r/S, (r+1)/S]` (y grows
//! downwards). Rendering a viewport therefore produces exactly the matching
//! crop of a whole-map render at `S x S`, while only visiting triangles that
//! touch the window.

use crate::config::GenConfig;
use crate::error::{Error, Result};
use crate::par::{IntoParallelIterator, ParallelIterator};
use crate::subdivision::{root_config, split_hypotenuse, split_triangle, Triangle};

/// Largest supported virtual map side, in pixels.
pub const MAX_MAP_PIXELS: u64 = 1 << 40;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Viewport {
    /// Window centre in map coordinates.
    pub center: (f64, f64),
    /// 1 shows the whole map.
    pub zoom: f64,
    pub width_px: u32,
    pub height_px: u32,
}

impl Viewport {
    pub fn new(center: (f64, f64), zoom: f64, width_px: u32, height_px: u32) -> Viewport {
        Viewport {
            center,
            zoom,
            width_px,
            height_px,
        }
    }

    pub fn whole_map(size: u32) -> Viewport {
        Viewport::new((0.5, 0.5), 1.0, size, size)
    }

    pub fn pixel_grid(&self) -> Result<PixelGrid> {
        let (w, h) = (self.width_px, self.height_px);
        if w == 0 || h == 0 {
            return Err(Error::EmptyViewport {
                width: w,
                height: h,
            });
        }
        if !(self.zoom.is_finite() && self.zoom > 0.0)
            || !self.center.0.is_finite()
            || !self.center.1.is_finite()
        {
            return Err(Error::InvalidZoom(self.zoom));
        }
        let side = (self.zoom * w.max(h) as f64).round();
        if side < 1.0 {
            return Err(Error::InvalidZoom(self.zoom));
        }
        if side > MAX_MAP_PIXELS as f64 {
            return Err(Error::ZoomTooDeep(side));
        }
        let map_px = side as u64;
        let x0 = (self.center.0 * side - w as f64 / 2.0).round() as i64;
        let y0 = (self.center.1 * side - h as f64 / 2.0).round() as i64;
        Ok(PixelGrid {
            map_px,
            x0,
            y0,
            width: w,
            height: h,
        })
    }

    /// World-space window, clipped to the unit square.
    pub fn window(&self) -> Result<[f64; 4]> {
        let g = self.pixel_grid()?;
        let s = g.map_px as f64;
        Ok([
            (g.x0 as f64 / s).clamp(0.0, 1.0),
            (g.y0 as f64 / s).clamp(0.0, 1.0),
            ((g.x0 + g.width as i64) as f64 / s).clamp(0.0, 1.0),
            ((g.y0 + g.height as i64) as f64 / s).clamp(0.0, 1.0),
        ])
    }
}

/// Placement of a viewport's pixels within the virtual whole-map raster.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PixelGrid {
    /// Side of the virtual whole-map raster.
    pub map_px: u64,
    /// Virtual column of the viewport's left edge.
    pub x0: i64,
    /// Virtual row of the viewport's top edge.
    pub y0: i64,
    pub width: u32,
    pub height: u32,
}

impl PixelGrid {
    pub fn pixel_size(&self) -> f64 {
        1.0 / self.map_px as f64
    }

    /// Number of halvings of the unit square needed for one-pixel legs.
    pub fn levels(&self) -> u32 {
        if self.map_px <= 1 {
            0
        } else {
            64 - (self.map_px - 1).leading_zeros()
        }
    }

    /// Subdivision depth of the square map: `2 * ceil(log2(S))`.
    pub fn depth(&self) -> u32 {
        2 * self.levels()
    }

    /// Index into the viewport raster of virtual pixel `(gx, gy)`.
    #[inline]
    pub fn local_index(&self, gx: i64, gy: i64) -> Option<usize> {
        let lx = gx - self.x0;
        let ly = gy - self.y0;
        (lx >= 0 && ly >= 0 && lx < self.width as i64 && ly < self.height as i64)
            .then(|| ly as usize * self.width as usize + lx as usize)
    }

    /// Viewport window in map coordinates, padded by one pixel.
    pub fn padded_window(&self) -> [f64; 4] {
        let s = self.map_px as f64;
        [
            (self.x0 - 1) as f64 / s,
            (self.y0 - 1) as f64 / s,
            (self.x0 + self.width as i64 + 1) as f64 / s,
            (self.y0 + self.height as i64 + 1) as f64 / s,
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RasterCell {
    pub h: f64,
    pub is_river: bool,
}

/// Row-major grid of cells; `None` marks pixels without map data.
#[derive(Clone, Debug, PartialEq)]
pub struct Raster {
    width: u32,
    height: u32,
    cells: Vec<Option<RasterCell>>,
}

impl Raster {
    pub fn empty(width: u32, height: u32) -> Raster {
        Raster {
            width,
            height,
            cells: vec![None; width as usize * height as usize],
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn cells(&self) -> &[Option<RasterCell>] {
        &self.cells
    }

    pub fn get(&self, x: u32, y: u32) -> Option<&RasterCell> {
        if x >= self.width || y >= self.height {
            return None;
        }
        self.cells[y as usize * self.width as usize + x as usize].as_ref()
    }

    pub fn set(&mut self, x: u32, y: u32, cell: Option<RasterCell>) {
        let idx = y as usize * self.width as usize + x as usize;
        self.cells[idx] = cell;
    }

    /// `w x h` window starting at `(x0, y0)`; outside pixels are no-data.
    pub fn crop(&self, x0: i64, y0: i64, w: u32, h: u32) -> Raster {
        let mut out = Raster::empty(w, h);
        for y in 0..h {
            for x in 0..w {
                let (sx, sy) = (x0 + x as i64, y0 + y as i64);
                if sx >= 0 && sy >= 0 && sx < self.width as i64 && sy < self.height as i64 {
                    out.set(x, y, self.get(sx as u32, sy as u32).copied());
                }
            }
        }
        out
    }

    pub fn no_data_fraction(&self) -> f64 {
        let missing = self.cells.iter().filter(|c| c.is_none()).count();
        missing as f64 / self.cells.len() as f64
    }
}

/// Whether independent subtrees may render on several threads.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Falls back to sequential when built without the `parallel` feature.
    #[default]
    Parallel,
}

#[derive(Clone, Debug)]
pub struct Rendered {
    pub raster: Raster,
    /// Triangles examined, including culled ones.
    pub visited: u64,
}

/// A recursive subdivision scheme the driver can render.
pub(crate) trait Subdivider: Sync {
    type Node: Send;

    fn visit(&self, node: Self::Node) -> Visit<Self::Node>;

    /// Calls `emit` with the index of every viewport pixel `leaf` colours.
    fn paint(&self, leaf: &Leaf, emit: &mut dyn FnMut(usize));
}

pub(crate) enum Visit<N> {
    Culled,
    Leaf(Leaf),
    Split([N; 2]),
}

/// A triangle small enough to colour pixels directly. When several leaves
/// paint the same pixel the lowest `key` wins, which keeps the result
/// independent of visit order.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Leaf {
    pub tri: Triangle,
    pub cell: RasterCell,
    pub key: u128,
}

#[derive(Clone, Copy, Debug)]
struct Pixel {
    index: usize,
    key: u128,
    cell: RasterCell,
}

struct Canvas {
    width: u32,
    height: u32,
    cells: Vec<Option<(u128, RasterCell)>>,
}

impl Canvas {
    fn new(width: u32, height: u32) -> Canvas {
        Canvas {
            width,
            height,
            cells: vec![None; width as usize * height as usize],
        }
    }

    #[inline]
    fn put(&mut self, p: Pixel) {
        let slot = &mut self.cells[p.index];
        match slot {
            Some((key, _)) if *key <= p.key => {}
            _ => *slot = Some((p.key, p.cell)),
        }
    }

    fn paint<S: Subdivider>(&mut self, s: &S, leaf: &Leaf) {
        s.paint(leaf, &mut |index| {
            self.put(Pixel {
                index,
                key: leaf.key,
                cell: leaf.cell,
            })
        });
    }

    fn into_raster(self) -> Raster {
        Raster {
            width: self.width,
            height: self.height,
            cells: self.cells.into_iter().map(|c| c.map(|(_, cell)| cell)).collect(),
        }
    }
}

fn walk<S: Subdivider>(s: &S, root: S::Node, on_leaf: &mut dyn FnMut(Leaf)) -> u64 {
    let mut visited = 0;
    let mut stack = vec![root];
    while let Some(node) = stack.pop() {
        visited += 1;
        match s.visit(node) {
            Visit::Culled => {}
            Visit::Leaf(leaf) => on_leaf(leaf),
            Visit::Split([a, b]) => {
                stack.push(b);
                stack.push(a);
            }
        }
    }
    visited
}

pub(crate) fn drive<S: Subdivider>(
    s: &S,
    roots: Vec<S::Node>,
    width: u32,
    height: u32,
    exec: Execution,
) -> Rendered {
    let mut canvas = Canvas::new(width, height);
    let mut visited = 0;
    match exec {
        Execution::Sequential => {
            for root in roots {
                visited += walk(s, root, &mut |leaf| canvas.paint(s, &leaf));
            }
        }
        Execution::Parallel => {
            // Expand breadth-first until there is enough independent work.
            let target = 16 * crate::par::current_num_threads().max(1);
            let mut frontier = roots;
            while !frontier.is_empty() && frontier.len() < target {
                let mut next = Vec::with_capacity(frontier.len() * 2);
                for node in frontier {
                    visited += 1;
                    match s.visit(node) {
                        Visit::Culled => {}
                        Visit::Leaf(leaf) => canvas.paint(s, &leaf),
                        Visit::Split([a, b]) => next.extend([a, b]),
                    }
                }
                frontier = next;
            }
            let parts: Vec<(Vec<Pixel>, u64)> = frontier
                .into_par_iter()
                .map(|node| {
                    let mut pixels = Vec::new();
                    let n = walk(s, node, &mut |leaf| {
                        s.paint(&leaf, &mut |index| {
                            pixels.push(Pixel {
                                index,
                                key: leaf.key,
                                cell: leaf.cell,
                            })
                        })
                    });
                    (pixels, n)
                })
                .collect();
            for (pixels, n) in parts {
                visited += n;
                for p in pixels {
                    canvas.put(p);
                }
            }
        }
    }
    Rendered {
        raster: canvas.into_raster(),
        visited,
    }
}

/// Sequential render that also reports every leaf with the pixels it painted.
pub(crate) fn trace<S: Subdivider>(
    s: &S,
    roots: Vec<S::Node>,
    width: u32,
    height: u32,
    on_leaf: &mut dyn FnMut(&Leaf, &[usize]),
) -> Rendered {
    let mut canvas = Canvas::new(width, height);
    let mut visited = 0;
    let mut painted = Vec::new();
    for root in roots {
        visited += walk(s, root, &mut |leaf| {
            painted.clear();
            s.paint(&leaf, &mut |index| painted.push(index));
            for &index in &painted {
                canvas.put(Pixel {
                    index,
                    key: leaf.key,
                    cell: leaf.cell,
                });
            }
            on_leaf(&leaf, &painted);
        });
    }
    Rendered {
        raster: canvas.into_raster(),
        visited,
    }
}

#[inline]
pub(crate) fn intersects(bbox: [f64; 4], window: [f64; 4]) -> bool {
    bbox[2] >= window[0] && bbox[0] <= window[2] && bbox[3] >= window[1] && bbox[1] <= window[3]
}

struct SquareMap<'a> {
    cfg: &'a GenConfig,
    grid: PixelGrid,
    depth: u32,
    levels: u32,
    window: [f64; 4],
}

impl SquareMap<'_> {
    /// Virtual pixel holding the hypotenuse midpoint `(x, y)` of a
    /// final-depth triangle, if that point is the sample chosen for it.
    ///
    /// Final midpoints sit on a `2^L` grid at `(i + 1/2) / 2^L`. Each virtual
    /// pixel takes the midpoint nearest its centre, which is the one whose
    /// grid cell contains that centre; since `S <= 2^L` no two pixels share a
    /// sample.
    #[inline]
    fn sample_pixel(&self, coord: f64) -> Option<i64> {
        let n = 1u128 << self.levels;
        let i = (coord * n as f64) as u128;
        if i >= n {
            return None;
        }
        let s = self.grid.map_px as u128;
        let c = ((2 * i + 1) * s) / (2 * n);
        let back = ((2 * c + 1) * n) / (2 * s);
        (back == i).then_some(c as i64)
    }
}

impl Subdivider for SquareMap<'_> {
    type Node = (Triangle, u32);

    fn visit(&self, (t, depth): (Triangle, u32)) -> Visit<(Triangle, u32)> {
        if !intersects(t.bbox(), self.window) {
            return Visit::Culled;
        }
        if depth == self.depth {
            let (v3, _, _) = split_hypotenuse(&t.v1, &t.v2, t.e0, self.cfg);
            return Visit::Leaf(Leaf {
                tri: t,
                cell: RasterCell {
                    h: v3.h,
                    is_river: t.e0.has_river(),
                },
                key: 0,
            });
        }
        let split = split_triangle(&t, self.cfg);
        Visit::Split([(split.child_a, depth + 1), (split.child_b, depth + 1)])
    }

    fn paint(&self, leaf: &Leaf, emit: &mut dyn FnMut(usize)) {
        let t = &leaf.tri;
        let sample = |a: f64, b: f64| self.sample_pixel((a + b) / 2.0);
        if let (Some(gx), Some(gy)) = (sample(t.v1.x, t.v2.x), sample(t.v1.y, t.v2.y)) {
            if let Some(index) = self.grid.local_index(gx, gy) {
                emit(index);
            }
        }
    }
}

/// Renders `viewport` of the square map.
pub fn render_region(viewport: &Viewport, cfg: &GenConfig) -> Result<Raster> {
    Ok(render_region_with(viewport, cfg, Execution::default())?.raster)
}

pub fn render_region_with(viewport: &Viewport, cfg: &GenConfig, exec: Execution) -> Result<Rendered> {
    cfg.validate()?;
    let grid = viewport.pixel_grid()?;
    let job = SquareMap {
        cfg,
        grid,
        depth: grid.depth(),
        levels: grid.levels(),
        window: grid.padded_window(),
    };
    let (a, b) = root_config(cfg);
    Ok(drive(&job, vec![(a, 0), (b, 0)], grid.width, grid.height, exec))
}

/// Which map a render covers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum MapShape {
    /// The unit square from two right-isosceles roots.
    #[default]
    Square,
    /// The Penrose kite from two Robinson roots.
    Kite,
}

pub fn render_map(shape: MapShape, viewport: &Viewport, cfg: &GenConfig, exec: Execution) -> Result<Rendered> {
    match shape {
        MapShape::Square => render_region_with(viewport, cfg, exec),
        MapShape::Kite => crate::penrose::render_kite_with(viewport, cfg, exec),
    }
}

/// Like [`render_map`], sequentially, reporting each leaf and its pixels.
pub(crate) fn trace_map(
    shape: MapShape,
    viewport: &Viewport,
    cfg: &GenConfig,
    on_leaf: &mut dyn FnMut(&Leaf, &[usize]),
) -> Result<Rendered> {
    cfg.validate()?;
    let grid = viewport.pixel_grid()?;
    match shape {
        MapShape::Square => {
            let job = SquareMap {
                cfg,
                grid,
                depth: grid.depth(),
                levels: grid.levels(),
                window: grid.padded_window(),
            };
            let (a, b) = root_config(cfg);
            Ok(trace(&job, vec![(a, 0), (b, 0)], grid.width, grid.height, on_leaf))
        }
        MapShape::Kite => {
            let (job, roots) = crate::penrose::kite_job(&grid, cfg);
            Ok(trace(&job, roots, grid.width, grid.height, on_leaf))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_viewports() {
        let cfg = GenConfig::default();
        let err = render_region(&Viewport::new((0.5, 0.5), 1.0, 0, 10), &cfg).unwrap_err();
        assert!(matches!(err, Error::EmptyViewport { .. }));
        assert!(err.to_string().contains("zero pixel"));
        assert!(render_region(&Viewport::new((0.5, 0.5), 0.0, 8, 8), &cfg).is_err());
        assert!(render_region(&Viewport::new((0.5, 0.5), 1e12, 8, 8), &cfg).is_err());
    }

    #[test]
    fn depth_formula() {
        for (size, depth) in [(1, 0), (2, 2), (3, 4), (4, 4), (63, 12), (64, 12), (65, 14), (1023, 20)] {
            let g = Viewport::whole_map(size).pixel_grid().unwrap();
            assert_eq!(g.depth(), depth, "size {size}");
        }
    }

    #[test]
    fn whole_map_covers_every_pixel() {
        let cfg = GenConfig::with_seed(5);
        for size in [1, 2, 3, 17, 63, 64, 100] {
            let r = render_region(&Viewport::whole_map(size), &cfg).unwrap();
            assert_eq!(r.no_data_fraction(), 0.0, "size {size}");
        }
    }

    #[test]
    fn rerender_is_identical() {
        let cfg = GenConfig::with_seed(9);
        let v = Viewport::whole_map(63);
        assert_eq!(render_region(&v, &cfg).unwrap(), render_region(&v, &cfg).unwrap());
    }

    #[test]
    fn zoomed_render_matches_crop() {
        let cfg = GenConfig::with_seed(3);
        let n = 31;
        let full = render_region(&Viewport::whole_map(4 * n), &cfg).unwrap();
        let v = Viewport::new((0.25, 0.25), 4.0, n, n);
        let g = v.pixel_grid().unwrap();
        let zoomed = render_region(&v, &cfg).unwrap();
        assert_eq!(zoomed, full.crop(g.x0, g.y0, n, n));
    }

    #[test]
    fn sequential_equals_parallel() {
        let cfg = GenConfig::with_seed(21);
        let v = Viewport::new((0.4, 0.6), 3.0, 50, 40);
        let a = render_region_with(&v, &cfg, Execution::Sequential).unwrap();
        let b = render_region_with(&v, &cfg, Execution::Parallel).unwrap();
        assert_eq!(a.raster, b.raster);
        assert_eq!(a.visited, b.visited);
    }

    #[test]
    fn off_map_pixels_are_no_data() {
        let cfg = GenConfig::with_seed(1);
        let r = render_region(&Viewport::new((0.0, 0.0), 2.0, 20, 20), &cfg).unwrap();
        assert!(r.get(0, 0).is_none());
        assert!(r.get(19, 19).is_some());
    }
}
