//! Colouring rasters and writing images.
//!
//! PPM output is binary P6 with maxval 255: the ASCII header
//! `P6\n<width> <height>\n255\n` followed by `width * height` RGB triples,
//! rows top to bottom. PNG output holds the same pixels as 8-bit RGB.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use image::codecs::png::PngEncoder;
use image::{ExtendedColorType, ImageEncoder};

use crate::error::{Error, Result};
use crate::raster::{Raster, RasterCell};

pub type Rgb = [u8; 3];

/// Altitude colour ramp. Colours are interpolated linearly between stops.
#[derive(Clone, Debug, PartialEq)]
pub struct ColorMap {
    /// Stops for `[-1, 0)`, first threshold -1.
    pub sea_stops: Vec<(f64, Rgb)>,
    /// Stops for `[0, 1]`, first threshold 0.
    pub land_stops: Vec<(f64, Rgb)>,
    pub river_color: Rgb,
    /// Colour of pixels without map data.
    pub no_data: Rgb,
}

impl Default for ColorMap {
    fn default() -> Self {
        ColorMap {
            sea_stops: vec![
                (-1.0, [0, 0, 70]),
                (-0.5, [0, 30, 140]),
                (-0.15, [20, 80, 190]),
                (-0.02, [80, 150, 225]),
            ],
            land_stops: vec![
                (0.0, [50, 140, 60]),
                (0.25, [120, 170, 70]),
                (0.5, [140, 105, 60]),
                (0.8, [245, 245, 245]),
                (1.0, [255, 255, 255]),
            ],
            river_color: [40, 90, 255],
            no_data: [24, 24, 24],
        }
    }
}

fn check_stops(stops: &[(f64, Rgb)], first: f64, below: f64, what: &str) -> Result<()> {
    let Some(&(start, _)) = stops.first() else {
        return Err(Error::InvalidPalette(format!("{what} stops are empty")));
    };
    if start != first {
        return Err(Error::InvalidPalette(format!("{what} stops must start at {first}")));
    }
    if stops.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(Error::InvalidPalette(format!(
            "{what} thresholds must be strictly increasing"
        )));
    }
    if stops.last().map(|s| s.0 > below).unwrap_or(false) {
        return Err(Error::InvalidPalette(format!("{what} thresholds exceed {below}")));
    }
    Ok(())
}

fn ramp(stops: &[(f64, Rgb)], h: f64) -> Rgb {
    let i = stops.partition_point(|s| s.0 <= h).max(1) - 1;
    let (t0, c0) = stops[i];
    let Some(&(t1, c1)) = stops.get(i + 1) else {
        return c0;
    };
    let f = ((h - t0) / (t1 - t0)).clamp(0.0, 1.0);
    let mut out = [0u8; 3];
    for k in 0..3 {
        out[k] = (c0[k] as f64 + (c1[k] as f64 - c0[k] as f64) * f).round() as u8;
    }
    out
}

impl ColorMap {
    pub fn validate(&self) -> Result<()> {
        check_stops(&self.sea_stops, -1.0, -f64::MIN_POSITIVE, "sea")?;
        check_stops(&self.land_stops, 0.0, 1.0, "land")
    }

    pub fn colorize(&self, cell: &RasterCell) -> Rgb {
        if cell.h < 0.0 {
            ramp(&self.sea_stops, cell.h)
        } else if cell.is_river {
            // Darker upstream so high rivers stay visible against snow.
            let shade = 1.0 - 0.35 * cell.h.clamp(0.0, 1.0);
            self.river_color.map(|c| (c as f64 * shade).round() as u8)
        } else {
            ramp(&self.land_stops, cell.h)
        }
    }
}

pub fn colorize(cell: &RasterCell, map: &ColorMap) -> Rgb {
    map.colorize(cell)
}

/// 8-bit RGB image, rows top to bottom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RgbImage {
    pub width: u32,
    pub height: u32,
    pub pixels: Vec<Rgb>,
}

impl RgbImage {
    pub fn from_raster(raster: &Raster, map: &ColorMap) -> RgbImage {
        RgbImage {
            width: raster.width(),
            height: raster.height(),
            pixels: raster
                .cells()
                .iter()
                .map(|c| c.as_ref().map_or(map.no_data, |c| map.colorize(c)))
                .collect(),
        }
    }

    fn bytes(&self) -> Vec<u8> {
        self.pixels.iter().flatten().copied().collect()
    }

    fn check(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::EmptyImage);
        }
        Ok(())
    }

    pub fn encode_ppm(&self) -> Result<Vec<u8>> {
        self.check()?;
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend(self.bytes());
        Ok(out)
    }

    pub fn encode_png(&self) -> Result<Vec<u8>> {
        self.check()?;
        let mut out = Vec::new();
        PngEncoder::new(&mut out)
            .write_image(&self.bytes(), self.width, self.height, ExtendedColorType::Rgb8)
            .map_err(|e| Error::Png(e.to_string()))?;
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ImageFormat {
    Ppm,
    Png,
}

impl ImageFormat {
    /// Guesses the format from a file extension; anything but `.png` is PPM.
    pub fn from_path(path: &Path) -> ImageFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("png") => ImageFormat::Png,
            _ => ImageFormat::Ppm,
        }
    }
}

pub fn write_image(image: &RgbImage, path: &Path, format: ImageFormat) -> Result<()> {
    let bytes = match format {
        ImageFormat::Ppm => image.encode_ppm()?,
        ImageFormat::Png => image.encode_png()?,
    };
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut w = BufWriter::new(File::create(path).map_err(io)?);
    w.write_all(&bytes).map_err(io)?;
    w.flush().map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell(h: f64, is_river: bool) -> RasterCell {
        RasterCell { h, is_river }
    }

    #[test]
    fn palette_extremes() {
        let map = ColorMap::default();
        map.validate().unwrap();
        assert_eq!(map.colorize(&cell(-1.0, false)), map.sea_stops[0].1);
        assert_eq!(map.colorize(&cell(1.0, false)), [255, 255, 255]);
        // Rivers are invisible under water.
        assert_eq!(map.colorize(&cell(-0.3, true)), map.colorize(&cell(-0.3, false)));
    }

    #[test]
    fn land_rivers_use_river_colour() {
        let map = ColorMap::default();
        let river = map.colorize(&cell(0.3, true));
        assert_ne!(river, map.colorize(&cell(0.3, false)));
        assert!(river[2] > river[0] && river[2] > river[1]);
    }

    #[test]
    fn rejects_unordered_stops() {
        let mut map = ColorMap::default();
        map.land_stops.swap(1, 2);
        assert!(map.validate().is_err());
        let mut map = ColorMap::default();
        map.sea_stops[0].0 = -0.9;
        assert!(map.validate().is_err());
    }

    #[test]
    fn ppm_layout() {
        let mut r = Raster::empty(1, 1);
        r.set(0, 0, Some(cell(0.0, false)));
        let img = RgbImage::from_raster(&r, &ColorMap::default());
        let ppm = img.encode_ppm().unwrap();
        let header = b"P6\n1 1\n255\n";
        assert_eq!(&ppm[..header.len()], header);
        assert_eq!(ppm.len(), header.len() + 3);
        assert_eq!(&ppm[header.len()..], &ColorMap::default().land_stops[0].1);
        assert!(RgbImage { width: 0, height: 0, pixels: vec![] }.encode_ppm().is_err());
    }

    #[test]
    fn png_decodes_to_same_pixels() {
        let mut r = Raster::empty(5, 3);
        for (i, h) in [-0.9, -0.4, -0.01, 0.0, 0.3, 0.6, 0.95].iter().enumerate() {
            r.set(i as u32 % 5, i as u32 / 5, Some(cell(*h, i == 4)));
        }
        let img = RgbImage::from_raster(&r, &ColorMap::default());
        let png = img.encode_png().unwrap();
        let decoded = image::load_from_memory(&png).unwrap().to_rgb8();
        assert_eq!(decoded.dimensions(), (5, 3));
        assert_eq!(decoded.into_raw(), img.bytes());
    }

    #[test]
    fn unwritable_path_reports_path() {
        let img = RgbImage { width: 1, height: 1, pixels: vec![[1, 2, 3]] };
        let path = Path::new("/nonexistent-dir/for/sure/map.ppm");
        let err = write_image(&img, path, ImageFormat::Ppm).unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/for/sure/map.ppm"));
    }
}
