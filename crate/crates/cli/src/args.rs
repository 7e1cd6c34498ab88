use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fjordmap::{GenConfig, ImageFormat, MapShape, Variant, Viewport};

#[derive(Parser, Debug, Clone, PartialEq)]
#[command(name = "fjordmap", version, about = "Zoomable maps with rivers and fjords")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone, PartialEq)]
pub enum Command {
    /// Render a map image.
    Render(RenderArgs),
    /// Time a whole-map render against a deeply zoomed one.
    Bench(BenchArgs),
    /// Print river network statistics as CSV.
    Stats(StatsArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum VariantArg {
    Base,
    Islands,
    Penrose,
    PenroseIslands,
}

impl VariantArg {
    pub fn shape(self) -> MapShape {
        match self {
            VariantArg::Base | VariantArg::Islands => MapShape::Square,
            VariantArg::Penrose | VariantArg::PenroseIslands => MapShape::Kite,
        }
    }

    pub fn rules(self) -> Variant {
        match self {
            VariantArg::Base | VariantArg::Penrose => Variant::Base,
            VariantArg::Islands | VariantArg::PenroseIslands => Variant::IslandsInFjords,
        }
    }

    fn name(self) -> &'static str {
        match self {
            VariantArg::Base => "base",
            VariantArg::Islands => "islands",
            VariantArg::Penrose => "penrose",
            VariantArg::PenroseIslands => "penrose-islands",
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormatArg {
    Ppm,
    Png,
}

fn parse_center(s: &str) -> Result<(f64, f64), String> {
    let (x, y) = s.split_once(',').ok_or("expected X,Y")?;
    let x: f64 = x.trim().parse().map_err(|e| format!("bad x: {e}"))?;
    let y: f64 = y.trim().parse().map_err(|e| format!("bad y: {e}"))?;
    if !x.is_finite() || !y.is_finite() {
        return Err("coordinates must be finite".into());
    }
    Ok((x, y))
}

fn parse_size(s: &str) -> Result<u32, String> {
    match s.parse::<u32>() {
        Ok(0) => Err("size must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_zoom(s: &str) -> Result<f64, String> {
    let z: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if z.is_finite() && z > 0.0 {
        Ok(z)
    } else {
        Err("zoom must be a positive number".into())
    }
}

fn parse_threads(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("threads must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

/// Options shared by every subcommand.
#[derive(Args, Debug, Clone, PartialEq)]
pub struct MapArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Output width and height in pixels.
    #[arg(long, default_value_t = 1023, value_parser = parse_size)]
    pub size: u32,
    #[arg(long, value_enum, default_value_t = VariantArg::Base)]
    pub variant: VariantArg,
    /// Map-space centre of the view, as X,Y in [0, 1].
    #[arg(long, default_value = "0.5,0.5", value_parser = parse_center, allow_hyphen_values = true)]
    pub center: (f64, f64),
    /// Worker threads; 1 renders sequentially. Defaults to all cores.
    #[arg(long, value_parser = parse_threads)]
    pub threads: Option<usize>,
    #[command(flatten)]
    pub constants: Constants,
}

/// Generator constant overrides; ranges are checked before rendering.
#[derive(Args, Debug, Clone, PartialEq)]
pub struct Constants {
    /// Displacement per unit edge length (>= 0).
    #[arg(long, allow_hyphen_values = true)]
    pub k1: Option<f64>,
    /// Displacement per unit altitude difference (>= 0).
    #[arg(long, allow_hyphen_values = true)]
    pub k2: Option<f64>,
    /// Land threshold for starting rivers, in [-1, 1].
    #[arg(long, allow_hyphen_values = true)]
    pub k3: Option<f64>,
    /// Sea threshold for starting rivers, in [-1, 1].
    #[arg(long, allow_hyphen_values = true)]
    pub k4: Option<f64>,
    /// Upstream extension probability (>= 0).
    #[arg(long, allow_hyphen_values = true)]
    pub k5: Option<f64>,
    /// Branching probability per unit length (>= 0).
    #[arg(long, allow_hyphen_values = true)]
    pub k6: Option<f64>,
    /// Islands variant depth threshold, in [-1, 0).
    #[arg(long, allow_hyphen_values = true)]
    pub k7: Option<f64>,
    /// Islands variant duplication probability (>= 0).
    #[arg(long, allow_hyphen_values = true)]
    pub k8: Option<f64>,
    /// Keep only this fraction of rivers that start at a coast, in [0, 1].
    #[arg(long, allow_hyphen_values = true)]
    pub river_gate: Option<f64>,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct RenderArgs {
    #[command(flatten)]
    pub map: MapArgs,
    /// 1 shows the whole map.
    #[arg(long, default_value_t = 1.0, value_parser = parse_zoom)]
    pub zoom: f64,
    #[arg(long, short, default_value = "map.ppm")]
    pub output: PathBuf,
    /// Image format; guessed from the output extension when omitted.
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct BenchArgs {
    #[command(flatten)]
    pub map: MapArgs,
    /// Zoom compared against the whole map.
    #[arg(long, default_value_t = 125.0, value_parser = parse_zoom)]
    pub zoom: f64,
    /// Renders per zoom; the median is reported.
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
    pub repeat: u32,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct StatsArgs {
    #[command(flatten)]
    pub map: MapArgs,
    #[arg(long, default_value_t = 1.0, value_parser = parse_zoom)]
    pub zoom: f64,
}

impl MapArgs {
    pub fn gen_config(&self) -> GenConfig {
        let c = &self.constants;
        let d = GenConfig::with_seed(self.seed).with_variant(self.variant.rules());
        GenConfig {
            k1: c.k1.unwrap_or(d.k1),
            k2: c.k2.unwrap_or(d.k2),
            k3: c.k3.unwrap_or(d.k3),
            k4: c.k4.unwrap_or(d.k4),
            k5: c.k5.unwrap_or(d.k5),
            k6: c.k6.unwrap_or(d.k6),
            k7: c.k7.unwrap_or(d.k7),
            k8: c.k8.unwrap_or(d.k8),
            no_river_gate: c.river_gate,
            ..d
        }
    }

    pub fn viewport(&self, zoom: f64) -> Viewport {
        Viewport::new(self.center, zoom, self.size, self.size)
    }

    /// Flags reproducing these options, every value spelled out.
    fn to_args(&self) -> Vec<String> {
        let cfg = self.gen_config();
        let mut out = vec![
            format!("--seed={}", self.seed),
            format!("--size={}", self.size),
            format!("--variant={}", self.variant.name()),
            format!("--center={},{}", self.center.0, self.center.1),
        ];
        if let Some(t) = self.threads {
            out.push(format!("--threads={t}"));
        }
        for (name, v) in [
            ("k1", cfg.k1),
            ("k2", cfg.k2),
            ("k3", cfg.k3),
            ("k4", cfg.k4),
            ("k5", cfg.k5),
            ("k6", cfg.k6),
            ("k7", cfg.k7),
            ("k8", cfg.k8),
        ] {
            out.push(format!("--{name}={v}"));
        }
        if let Some(g) = cfg.no_river_gate {
            out.push(format!("--river-gate={g}"));
        }
        out
    }
}

impl RenderArgs {
    pub fn format(&self) -> ImageFormat {
        match self.format {
            Some(FormatArg::Ppm) => ImageFormat::Ppm,
            Some(FormatArg::Png) => ImageFormat::Png,
            None => ImageFormat::from_path(&self.output),
        }
    }
}

impl Command {
    pub fn map(&self) -> &MapArgs {
        match self {
            Command::Render(a) => &a.map,
            Command::Bench(a) => &a.map,
            Command::Stats(a) => &a.map,
        }
    }

    /// The effective configuration as a command line that parses back to an
    /// equivalent command.
    pub fn to_args(&self) -> Vec<String> {
        let (name, zoom) = match self {
            Command::Render(a) => ("render", a.zoom),
            Command::Bench(a) => ("bench", a.zoom),
            Command::Stats(a) => ("stats", a.zoom),
        };
        let mut out = vec![name.to_string()];
        out.extend(self.map().to_args());
        out.push(format!("--zoom={zoom}"));
        match self {
            Command::Render(a) => {
                let format = match a.format() {
                    ImageFormat::Ppm => "ppm",
                    ImageFormat::Png => "png",
                };
                out.push(format!("--output={}", a.output.display()));
                out.push(format!("--format={format}"));
            }
            Command::Bench(a) => out.push(format!("--repeat={}", a.repeat)),
            Command::Stats(_) => {}
        }
        out
    }
}
