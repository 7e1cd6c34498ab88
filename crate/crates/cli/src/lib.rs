//! The `fjordmap` command line: `render`, `bench` and `stats`.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid arguments, 3 a river
//! network violates the variant's loop rule (`stats` only).

pub mod args;

use std::ffi::OsString;
use std::io::Write;
use std::time::{Duration, Instant};

use clap::error::ErrorKind;
use clap::Parser;
use fjordmap::{
    map_stats, render_map, write_image, Error, Execution, RgbImage, Rendered, Variant,
};

pub use args::{BenchArgs, Cli, Command, MapArgs, RenderArgs, StatsArgs};

pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CYCLES: i32 = 3;

/// Parses `args` (program name first) and runs the command, printing to the
/// process's stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match execute(&cli.command, out) {
        Ok(code) => {
            if code == EXIT_CYCLES {
                let _ = writeln!(err, "error: river network has loops the variant forbids");
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Io { .. } => EXIT_IO,
                _ => EXIT_USAGE,
            }
        }
    }
}

/// Runs a parsed command and returns its exit code.
pub fn execute(command: &Command, out: &mut dyn Write) -> Result<i32, Error> {
    let map = command.map();
    map.gen_config().validate()?;
    let _ = writeln!(out, "config: {}", command.to_args().join(" "));
    match command {
        Command::Render(a) => run_render(a, out),
        Command::Bench(a) => run_bench(a, out),
        Command::Stats(a) => run_stats(a, out),
    }
}

/// Calls `f` with the execution mode for `threads`, inside a pool of that
/// size when one is requested.
fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce(Execution) -> T + Send) -> Result<T, Error> {
    match threads {
        Some(1) => Ok(f(Execution::Sequential)),
        #[cfg(feature = "parallel")]
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(|| f(Execution::Parallel)))
            .map_err(|e| Error::InvalidConfig(format!("cannot start {n} threads: {e}"))),
        _ => Ok(f(Execution::Parallel)),
    }
}

fn render(map: &MapArgs, zoom: f64, center: Option<(f64, f64)>) -> Result<(Rendered, Duration), Error> {
    let cfg = map.gen_config();
    let mut viewport = map.viewport(zoom);
    if let Some(c) = center {
        viewport.center = c;
    }
    with_threads(map.threads, |exec| {
        let start = Instant::now();
        let r = render_map(map.variant.shape(), &viewport, &cfg, exec);
        r.map(|r| (r, start.elapsed()))
    })?
}

pub fn run_render(a: &RenderArgs, out: &mut dyn Write) -> Result<i32, Error> {
    let (rendered, elapsed) = render(&a.map, a.zoom, None)?;
    let image = RgbImage::from_raster(&rendered.raster, &a.map.gen_config().palette);
    write_image(&image, &a.output, a.format())?;
    let _ = writeln!(
        out,
        "elapsed_ms={:.3} visited={} output={}",
        elapsed.as_secs_f64() * 1e3,
        rendered.visited,
        a.output.display()
    );
    Ok(0)
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

/// Renders the same pixel count at zoom 1 and at `--zoom`, alternating, and
/// reports median times as `key=value` lines.
pub fn run_bench(a: &BenchArgs, out: &mut dyn Write) -> Result<i32, Error> {
    let mut times = [Vec::new(), Vec::new()];
    let mut visited = [0, 0];
    let mut first = [None, None];
    let mut deterministic = true;
    for _ in 0..a.repeat {
        for (i, (zoom, center)) in [(1.0, (0.5, 0.5)), (a.zoom, a.map.center)].into_iter().enumerate() {
            let (r, t) = render(&a.map, zoom, Some(center))?;
            times[i].push(t.as_secs_f64() * 1e3);
            visited[i] = r.visited;
            match &first[i] {
                None => first[i] = Some(r.raster),
                Some(raster) => deterministic &= *raster == r.raster,
            }
        }
    }
    let [t1, tz] = times.map(median);
    let lines = [
        format!("size={}", a.map.size),
        format!("zoom={}", a.zoom),
        format!("repeat={}", a.repeat),
        format!("median_ms_zoom1={t1:.3}"),
        format!("median_ms_zoomed={tz:.3}"),
        format!("ratio={:.4}", tz / t1),
        format!("visited_zoom1={}", visited[0]),
        format!("visited_zoomed={}", visited[1]),
        format!("deterministic={deterministic}"),
    ];
    for line in lines {
        let _ = writeln!(out, "{line}");
    }
    Ok(0)
}

pub fn run_stats(a: &StatsArgs, out: &mut dyn Write) -> Result<i32, Error> {
    let cfg = a.map.gen_config();
    let (_, stats) = map_stats(a.map.variant.shape(), &a.map.viewport(a.zoom), &cfg)?;
    let shallow = stats.cyclic_not_below(cfg.k7);
    let _ = writeln!(out, "{},cyclic_not_below_k7", fjordmap::RiverStats::CSV_HEADER);
    let _ = writeln!(out, "{},{shallow}", stats.csv_row());
    let violation = match cfg.variant {
        Variant::Base => stats.cyclic_count() > 0,
        Variant::IslandsInFjords => shallow > 0,
    };
    Ok(if violation { EXIT_CYCLES } else { 0 })
}
