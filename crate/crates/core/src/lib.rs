//! Procedural terrain with fjords and river networks, generated by recursive
//! triangle subdivision. Any region at any zoom renders from the master seed
//! alone, with the same pixels it would have in a larger render.
//!
//! ```
//! use fjordmap::{render_region, GenConfig, Viewport};
//!
//! let cfg = GenConfig::with_seed(7);
//! let raster = render_region(&Viewport::whole_map(64), &cfg).unwrap();
//! assert_eq!(raster.width(), 64);
//! ```

pub mod config;
pub mod error;
mod par;
pub mod penrose;
pub mod raster;
pub mod render;
pub mod river_rules;
pub mod seedmix;
pub mod stats;
pub mod subdivision;

pub use config::{GenConfig, Variant};
pub use error::{Error, Result};
pub use penrose::{render_kite, render_kite_with};
pub use raster::{render_map, render_region, render_region_with, Execution, MapShape, Raster, RasterCell, Rendered, Viewport};
pub use render::{colorize, write_image, ColorMap, ImageFormat, RgbImage};
pub use seedmix::Seed;
pub use stats::{map_stats, river_stats, RiverStats};
pub use subdivision::{split_triangle, subdivide, Edge, Triangle, Vertex};

/// Number of worker threads the parallel driver will use.
pub fn worker_threads() -> usize {
    par::current_num_threads()
}
