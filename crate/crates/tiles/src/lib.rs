//! HTTP tile service over the fjordmap renderer.
//!
//! `GET /tile?seed=&variant=&z=&x=&y=&size=` returns a PNG tile. Level `z`
//! shows the map at zoom `base^z`, cut into `base^z * base^z` tiles; tile
//! `(x, y)` covers virtual pixels `[x*size, (x+1)*size)` horizontally and
//! likewise vertically, so neighbouring tiles join without seams.
//!
//! `GET /healthz` returns version, uptime and cache counters as JSON.

use std::collections::HashMap;
use std::num::NonZeroUsize;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Instant;

use axum::body::Bytes;
use axum::extract::{Query, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use fjordmap::{render_map, Execution, GenConfig, MapShape, RgbImage, Variant, Viewport};
use lru::LruCache;
use serde_json::json;
use tokio::sync::OnceCell;

pub const DEFAULT_TILE_SIZE: u32 = 256;
pub const MIN_TILE_SIZE: u32 = 16;
pub const MAX_TILE_SIZE: u32 = 1024;
/// Largest virtual map side the renderer accepts.
const MAX_MAP_PIXELS: u128 = 1 << 40;

#[derive(Clone, Debug)]
pub struct TileConfig {
    /// Zoom factor between consecutive levels.
    pub base: u32,
    /// Tiles kept in memory.
    pub cache_capacity: usize,
    /// Constants and palette for every tile; seed and variant come from the request.
    pub template: GenConfig,
}

impl Default for TileConfig {
    fn default() -> Self {
        TileConfig {
            base: 5,
            cache_capacity: 1024,
            template: GenConfig::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TileVariant {
    Base,
    Islands,
    Penrose,
    PenroseIslands,
}

impl TileVariant {
    pub fn parse(s: &str) -> Option<TileVariant> {
        Some(match s {
            "base" => TileVariant::Base,
            "islands" => TileVariant::Islands,
            "penrose" => TileVariant::Penrose,
            "penrose-islands" => TileVariant::PenroseIslands,
            _ => return None,
        })
    }

    pub fn shape(self) -> MapShape {
        match self {
            TileVariant::Base | TileVariant::Islands => MapShape::Square,
            TileVariant::Penrose | TileVariant::PenroseIslands => MapShape::Kite,
        }
    }

    pub fn rules(self) -> Variant {
        match self {
            TileVariant::Base | TileVariant::Penrose => Variant::Base,
            TileVariant::Islands | TileVariant::PenroseIslands => Variant::IslandsInFjords,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TileRequest {
    pub seed: u64,
    pub variant: TileVariant,
    pub z: u32,
    pub x: u64,
    pub y: u64,
    pub size: u32,
}

impl TileRequest {
    /// Validates query parameters against a level base.
    pub fn from_query(q: &HashMap<String, String>, base: u32) -> Result<TileRequest, String> {
        fn field<T: std::str::FromStr>(
            q: &HashMap<String, String>,
            name: &str,
            default: Option<T>,
        ) -> Result<T, String> {
            match q.get(name) {
                Some(v) => v
                    .parse()
                    .map_err(|_| format!("invalid value for {name}: {v:?}")),
                None => default.ok_or_else(|| format!("missing parameter {name}")),
            }
        }
        let seed = field(q, "seed", None)?;
        let variant = match q.get("variant") {
            None => TileVariant::Base,
            Some(v) => TileVariant::parse(v).ok_or_else(|| {
                format!("unknown variant {v:?} (expected base, islands, penrose or penrose-islands)")
            })?,
        };
        let z: u32 = field(q, "z", None)?;
        let x: u64 = field(q, "x", None)?;
        let y: u64 = field(q, "y", None)?;
        let size: u32 = field(q, "size", Some(DEFAULT_TILE_SIZE))?;
        if !(MIN_TILE_SIZE..=MAX_TILE_SIZE).contains(&size) {
            return Err(format!(
                "size {size} outside [{MIN_TILE_SIZE}, {MAX_TILE_SIZE}]"
            ));
        }
        let n = (base as u128)
            .checked_pow(z)
            .filter(|n| n * size as u128 <= MAX_MAP_PIXELS)
            .ok_or_else(|| format!("level {z} is too deep for tile size {size}"))?;
        if x as u128 >= n || y as u128 >= n {
            return Err(format!("tile ({x}, {y}) outside level {z}, which has {n} tiles per side"));
        }
        Ok(TileRequest { seed, variant, z, x, y, size })
    }

    pub fn viewport(&self, base: u32) -> Viewport {
        let n = (base as f64).powi(self.z as i32);
        Viewport::new(
            ((self.x as f64 + 0.5) / n, (self.y as f64 + 0.5) / n),
            n,
            self.size,
            self.size,
        )
    }
}

/// Renders one tile to PNG bytes.
pub fn render_tile(req: &TileRequest, cfg: &TileConfig) -> fjordmap::Result<Vec<u8>> {
    let gen = GenConfig {
        master_seed: req.seed,
        variant: req.variant.rules(),
        ..cfg.template.clone()
    };
    gen.validate()?;
    let out = render_map(req.variant.shape(), &req.viewport(cfg.base), &gen, Execution::Parallel)?;
    RgbImage::from_raster(&out.raster, &gen.palette).encode_png()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CacheStats {
    pub entries: usize,
    pub capacity: usize,
    pub hits: u64,
    pub misses: u64,
    pub renders: u64,
}

type Slot = Arc<OnceCell<Bytes>>;

pub struct AppState {
    cfg: TileConfig,
    cache: Mutex<LruCache<TileRequest, Slot>>,
    hits: AtomicU64,
    misses: AtomicU64,
    renders: AtomicU64,
    started: Instant,
}

impl AppState {
    pub fn new(cfg: TileConfig) -> Arc<AppState> {
        let cap = NonZeroUsize::new(cfg.cache_capacity.max(1)).unwrap();
        Arc::new(AppState {
            cfg,
            cache: Mutex::new(LruCache::new(cap)),
            hits: AtomicU64::new(0),
            misses: AtomicU64::new(0),
            renders: AtomicU64::new(0),
            started: Instant::now(),
        })
    }

    pub fn config(&self) -> &TileConfig {
        &self.cfg
    }

    pub fn stats(&self) -> CacheStats {
        let cache = self.cache.lock().unwrap();
        CacheStats {
            entries: cache.len(),
            capacity: cache.cap().get(),
            hits: self.hits.load(Ordering::Relaxed),
            misses: self.misses.load(Ordering::Relaxed),
            renders: self.renders.load(Ordering::Relaxed),
        }
    }

    /// Returns the tile, rendering it at most once however many callers ask.
    pub async fn tile(self: &Arc<Self>, req: TileRequest) -> Result<Bytes, String> {
        let slot = {
            let mut cache = self.cache.lock().unwrap();
            match cache.get(&req) {
                Some(slot) if slot.initialized() => {
                    self.hits.fetch_add(1, Ordering::Relaxed);
                    slot.clone()
                }
                Some(slot) => slot.clone(),
                None => {
                    self.misses.fetch_add(1, Ordering::Relaxed);
                    let slot = Slot::default();
                    cache.put(req, slot.clone());
                    slot
                }
            }
        };
        let result = slot
            .get_or_try_init(|| async {
                let state = self.clone();
                tokio::task::spawn_blocking(move || {
                    state.renders.fetch_add(1, Ordering::Relaxed);
                    render_tile(&req, &state.cfg)
                })
                .await
                .map_err(|e| format!("render task failed: {e}"))?
                .map(Bytes::from)
                .map_err(|e| e.to_string())
            })
            .await
            .cloned();
        if result.is_err() {
            // Keep failures out of the cache so a later request can retry.
            let mut cache = self.cache.lock().unwrap();
            if cache.peek(&req).is_some_and(|s| Arc::ptr_eq(s, &slot)) {
                cache.pop(&req);
            }
        }
        result
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/tile", get(tile))
        .route("/healthz", get(healthz))
        .with_state(state)
}

fn error(status: StatusCode, message: String) -> Response {
    let mut res = (status, Json(json!({ "error": message }))).into_response();
    let h = res.headers_mut();
    h.insert(header::CACHE_CONTROL, HeaderValue::from_static("no-store"));
    h.insert(header::ACCESS_CONTROL_ALLOW_ORIGIN, HeaderValue::from_static("*"));
    res
}

async fn tile(State(state): State<Arc<AppState>>, Query(q): Query<HashMap<String, String>>) -> Response {
    let req = match TileRequest::from_query(&q, state.cfg.base) {
        Ok(req) => req,
        Err(msg) => return error(StatusCode::BAD_REQUEST, msg),
    };
    match state.tile(req).await {
        Ok(png) => (
            [
                (header::CONTENT_TYPE, "image/png"),
                (header::CACHE_CONTROL, "public, max-age=31536000, immutable"),
                (header::ACCESS_CONTROL_ALLOW_ORIGIN, "*"),
            ],
            png,
        )
            .into_response(),
        Err(msg) => error(StatusCode::INTERNAL_SERVER_ERROR, msg),
    }
}

async fn healthz(State(state): State<Arc<AppState>>) -> Response {
    let s = state.stats();
    let mut res = Json(json!({
        "status": "ok",
        "version": env!("CARGO_PKG_VERSION"),
        "uptime_s": state.started.elapsed().as_secs_f64(),
        "base": state.cfg.base,
        "cache": {
            "entries": s.entries,
            "capacity": s.capacity,
            "hits": s.hits,
            "misses": s.misses,
            "renders": s.renders,
        },
    }))
    .into_response();
    res.headers_mut()
        .insert(header::CACHE_CONTROL, HeaderValue::from_static("no-store"));
    res
}

#[cfg(test)]
mod tests {
    use super::*;

    fn query(pairs: &[(&str, &str)]) -> HashMap<String, String> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn parses_defaults() {
        let req = TileRequest::from_query(&query(&[("seed", "3"), ("z", "0"), ("x", "0"), ("y", "0")]), 5).unwrap();
        assert_eq!(req.size, DEFAULT_TILE_SIZE);
        assert_eq!(req.variant, TileVariant::Base);
    }

    #[test]
    fn rejects_out_of_range() {
        let q = |x: &str, size: &str, z: &str| {
            TileRequest::from_query(&query(&[("seed", "1"), ("z", z), ("x", x), ("y", "0"), ("size", size)]), 5)
        };
        assert!(q("4", "64", "1").is_ok());
        assert!(q("5", "64", "1").is_err());
        assert!(q("0", "15", "1").is_err());
        assert!(q("0", "1025", "1").is_err());
        assert!(q("0", "64", "30").is_err());
        assert!(q("-1", "64", "1").is_err());
    }

    #[test]
    fn tile_viewport_lands_on_pixel_grid() {
        for (base, z, x, y) in [(5, 1, 3, 4), (2, 10, 1023, 7), (5, 12, 244140, 1)] {
            let req = TileRequest { seed: 0, variant: TileVariant::Base, z, x, y, size: 256 };
            let g = req.viewport(base).pixel_grid().unwrap();
            assert_eq!((g.x0, g.y0), (x as i64 * 256, y as i64 * 256));
            assert_eq!(g.map_px, (base as u64).pow(z) * 256);
        }
    }
}
