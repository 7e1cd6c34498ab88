use std::process::Command;

use fjordmap_cli::{run_with, Cli, EXIT_CYCLES, EXIT_IO, EXIT_USAGE};

use clap::Parser;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_with(std::iter::once("fjordmap").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn value<'a>(text: &'a str, key: &str) -> &'a str {
    text.split_whitespace()
        .find_map(|w| w.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
}

fn config_line(out: &str) -> Vec<String> {
    let line = out.lines().find_map(|l| l.strip_prefix("config: ")).unwrap();
    line.split(' ').map(str::to_string).collect()
}

#[test]
fn printed_config_reparses_to_itself() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("m.png");
    let out_arg = out_path.to_str().unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["render", "--size", "16", "--seed", "9", "--center", "0.3,-0.25", "--k1", "0.1", "-o", out_arg],
        vec!["stats", "--size", "16", "--variant", "penrose-islands", "--river-gate", "0.5", "--k7", "-0.3"],
        vec!["bench", "--size", "8", "--repeat", "1", "--threads", "2", "--zoom", "7.5"],
    ];
    for args in cases {
        let (code, out, _) = run(&args);
        assert_eq!(code, 0, "{args:?}");
        let printed = config_line(&out);
        let reparsed = Cli::try_parse_from(std::iter::once("fjordmap".to_string()).chain(printed.clone())).unwrap();
        assert_eq!(reparsed.command.to_args(), printed);
        let original = Cli::try_parse_from(std::iter::once("fjordmap").chain(args.iter().copied())).unwrap();
        assert_eq!(original.command.map().gen_config(), reparsed.command.map().gen_config());
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["render", "--zoom", "0"]).0, EXIT_USAGE);
    assert_eq!(run(&["render", "--size", "0"]).0, EXIT_USAGE);
    assert_eq!(run(&["render", "--variant", "hex"]).0, EXIT_USAGE);
    assert_eq!(run(&["render", "--k7", "0.2"]).0, EXIT_USAGE);
    assert_eq!(run(&["render", "--size", "4", "--zoom", "1e13"]).0, EXIT_USAGE);
    assert_eq!(run(&["nonsense"]).0, EXIT_USAGE);
    let (code, _, err) = run(&["render", "--size", "4", "-o", "/definitely/missing/dir/m.ppm"]);
    assert_eq!(code, EXIT_IO);
    assert!(err.contains("/definitely/missing/dir/m.ppm"));
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("render"));
}

#[test]
fn deep_zoom_visits_far_fewer_triangles_than_its_virtual_map() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z.ppm");
    let p = path.to_str().unwrap();
    let (code, out, _) = run(&["render", "--size", "63", "--zoom", "125", "--center", "0.3,0.7", "-o", p]);
    assert_eq!(code, 0);
    let zoomed: u64 = value(&out, "visited").parse().unwrap();
    let (_, out, _) = run(&["render", "--size", "63", "-o", p]);
    let whole: u64 = value(&out, "visited").parse().unwrap();
    // A full render of the 7875-pixel virtual map would visit ~2^27 nodes.
    assert!(zoomed < 3 * whole, "zoomed {zoomed}, whole {whole}");
    let bytes = std::fs::read(&path).unwrap();
    assert_eq!(bytes.len(), "P6\n63 63\n255\n".len() + 63 * 63 * 3);
}

#[test]
fn penrose_render_masks_outside_the_kite() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.ppm");
    let (code, _, _) = run(&["render", "--size", "101", "--variant", "penrose", "-o", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let bytes = std::fs::read(&path).unwrap();
    let pixels = &bytes["P6\n101 101\n255\n".len()..];
    let no_data = fjordmap::ColorMap::default().no_data;
    let masked = pixels.chunks(3).filter(|p| *p == no_data).count();
    let fraction = masked as f64 / (101.0 * 101.0);
    assert!((fraction - 0.5747).abs() < 0.03, "masked fraction {fraction}");
}

#[test]
fn png_output_by_extension_or_flag() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.png");
    let b = dir.path().join("b.img");
    assert_eq!(run(&["render", "--size", "20", "-o", a.to_str().unwrap()]).0, 0);
    assert_eq!(run(&["render", "--size", "20", "--format", "png", "-o", b.to_str().unwrap()]).0, 0);
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert!(a.starts_with(b"\x89PNG"));
    assert_eq!(a, b);
}

#[test]
fn bench_prints_key_values() {
    let (code, out, _) = run(&["bench", "--size", "31", "--repeat", "2"]);
    assert_eq!(code, 0);
    for line in out.lines().filter(|l| !l.starts_with("config: ")) {
        let (k, v) = line.split_once('=').unwrap_or_else(|| panic!("not key=value: {line}"));
        assert!(!k.is_empty() && !v.is_empty());
    }
    let ratio: f64 = value(&out, "ratio").parse().unwrap();
    assert!(ratio > 0.0);
    assert_eq!(value(&out, "deterministic"), "true");
}

#[test]
fn stats_csv_and_cycle_exit_code() {
    let (code, out, _) = run(&["stats", "--size", "63", "--seed", "2"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().filter(|l| !l.starts_with("config: ")).collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0].split(',').count(), lines[1].split(',').count());
    assert!(lines[0].starts_with("river_pixels,"));
    // Islands loops are allowed, so they do not trip the cycle exit code.
    let (code, out, err) = run(&["stats", "--size", "127", "--seed", "8", "--variant", "islands"]);
    assert_ne!(code, EXIT_CYCLES, "{err}");
    assert_eq!(code, 0);
    let row: Vec<u64> = out.lines().last().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    let (cyclic, not_below) = (row[4], row[6]);
    assert!(cyclic > 0);
    assert_eq!(not_below, 0);
}

#[test]
fn binary_is_deterministic_across_threads() {
    let exe = env!("CARGO_BIN_EXE_fjordmap");
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for threads in ["1", "3"] {
        let path = dir.path().join(format!("t{threads}.ppm"));
        let status = Command::new(exe)
            .args(["render", "--size", "64", "--variant", "islands", "--threads", threads, "-o"])
            .arg(&path)
            .output()
            .unwrap();
        assert!(status.status.success());
        assert!(String::from_utf8_lossy(&status.stdout).contains("elapsed_ms="));
        files.push(std::fs::read(path).unwrap());
    }
    assert_eq!(files[0], files[1]);
}
