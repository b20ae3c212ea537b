//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 analysis refusal,
//! 3 numerical failure.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::configspace::{enumerate_modes, tangent_space_dim};
use crate::error::{Error, Result};
use crate::io::fold::{export_fold, import_fold, FoldDocument};
use crate::io::report::{build_report, mode_entry, pattern_info, TraceSettings, DEFAULT_REPORT_TOL};
use crate::io::svg::export_svg;
use crate::pattern::{
    classify_pattern, generate_chicken_wire, generate_miura, generate_rotationally_symmetric, CreasePattern,
    PatternClass, QuadTile,
};
use crate::selffold::analyze_all;
use crate::sim::{fold_path, reconstruct_3d};

pub const TOLERANCE_ENV: &str = "ORIGAMI_SELFFOLD_TOLERANCE";

#[derive(Parser, Debug)]
#[command(name = "origami-selffold", version, about = "Rigid folding and self-foldability of quadrilateral origami tessellations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a crease pattern and write it as FOLD or SVG.
    Generate(GenerateArgs),
    /// Classify, enumerate modes and decide unique self-foldability.
    Analyze(AnalyzeArgs),
    /// List the folding modes through the flat state.
    Modes(ModesArgs),
    /// Synthesize a driving force for one mode.
    Selffold(AnalyzeArgs),
    /// Fold along a mode and report the path.
    Simulate(SimulateArgs),
    /// Export a crease pattern or folded state.
    Export(ExportArgs),
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Source {
    /// Tile interior angles in degrees, counter-clockwise.
    #[arg(long, value_name = "A,B,C,D")]
    tile: Option<String>,
    /// Miura-ori with acute angle THETA degrees.
    #[arg(long, value_name = "THETA")]
    miura: Option<f64>,
    /// Chicken Wire with base angle THETA degrees.
    #[arg(long = "chicken-wire", value_name = "THETA")]
    chicken_wire: Option<f64>,
    /// FOLD file to import.
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PatternArgs {
    #[command(flatten)]
    source: Source,
    /// Face grid, rows x columns.
    #[arg(long, default_value = "3x3", value_name = "RxC")]
    grid: String,
    /// First side length for Miura and Chicken Wire tiles.
    #[arg(long = "len-a", value_name = "LEN")]
    len_a: Option<f64>,
    /// Second side length for Miura and Chicken Wire tiles.
    #[arg(long = "len-b", value_name = "LEN")]
    len_b: Option<f64>,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[command(flatten)]
    pattern: PatternArgs,
    /// Colour creases by this mode.
    #[arg(long)]
    mode: Option<String>,
    /// Output path; `.svg` writes SVG, anything else FOLD. Stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[command(flatten)]
    pattern: PatternArgs,
    /// Mode number or `all`.
    #[arg(long)]
    mode: Option<String>,
    /// Driver angle in degrees for the forward-force trace.
    #[arg(long, default_value_t = 60.0)]
    driver: f64,
    /// Sample count for the forward-force trace.
    #[arg(long, default_value_t = 50)]
    steps: usize,
    #[arg(long)]
    json: bool,
    /// Exit with status 2 unless every selected mode is uniquely self-foldable.
    #[arg(long = "require-unique")]
    require_unique: bool,
}

#[derive(Args, Debug)]
struct ModesArgs {
    #[command(flatten)]
    pattern: PatternArgs,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    pattern: PatternArgs,
    #[arg(long, default_value = "1")]
    mode: String,
    /// Final driver angle in degrees.
    #[arg(long, default_value_t = 60.0)]
    driver: f64,
    #[arg(long, default_value_t = 50)]
    steps: usize,
    /// Write the final folded state (FOLD) or the MV pattern (SVG).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct ExportArgs {
    #[command(flatten)]
    pattern: PatternArgs,
    #[arg(long)]
    mode: Option<String>,
    /// Fold the driver crease of the mode to this angle (degrees) before export.
    #[arg(long)]
    driver: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

fn parse_grid(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::InvalidGrid(format!("expected RxC, got {s:?}"));
    let (r, c) = s.to_ascii_lowercase().split_once('x').map(|(a, b)| (a.to_string(), b.to_string())).ok_or_else(bad)?;
    Ok((r.trim().parse().map_err(|_| bad())?, c.trim().parse().map_err(|_| bad())?))
}

fn parse_tile(s: &str) -> Result<[f64; 4]> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::InvalidAngle(format!("expected four angles, got {s:?}")))?;
    parts
        .try_into()
        .map_err(|_| Error::InvalidAngle(format!("expected four angles, got {s:?}")))
}

fn build_pattern(args: &PatternArgs) -> Result<(CreasePattern, String)> {
    let s = &args.source;
    if let Some(path) = &s.input {
        let text = std::fs::read_to_string(path)?;
        let p = import_fold(&FoldDocument::from_json(&text)?)?;
        return Ok((p, format!("fold:{}", path.display())));
    }
    let (rows, cols) = parse_grid(&args.grid)?;
    if let Some(t) = &s.tile {
        let angles = parse_tile(t)?;
        let tile = QuadTile::from_degrees(angles)?;
        return Ok((generate_rotationally_symmetric(&tile, rows, cols)?, format!("tile:{t}")));
    }
    if let Some(theta) = s.miura {
        let p = generate_miura(theta.to_radians(), args.len_a.unwrap_or(1.0), args.len_b.unwrap_or(1.0), rows, cols)?;
        return Ok((p, format!("miura:{theta}")));
    }
    if let Some(theta) = s.chicken_wire {
        let p = generate_chicken_wire(
            theta.to_radians(),
            args.len_a.unwrap_or(2.0),
            args.len_b.unwrap_or(1.0),
            rows,
            cols,
        )?;
        return Ok((p, format!("chicken-wire:{theta}")));
    }
    unreachable!("clap enforces one pattern source")
}

/// Selected 1-based mode numbers out of `count`.
fn select_modes(sel: Option<&str>, count: usize) -> Result<Vec<usize>> {
    match sel.map(str::trim) {
        None | Some("all") => Ok((1..=count).collect()),
        Some(x) => {
            let k: usize = x
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("mode must be a number or `all`, got {x:?}")))?;
            if k == 0 || k > count {
                return Err(Error::InvalidArgument(format!("mode {k} out of range 1..={count}")));
            }
            Ok(vec![k])
        }
    }
}

fn report_tolerance() -> Result<f64> {
    match std::env::var(TOLERANCE_ENV) {
        Err(_) => Ok(DEFAULT_REPORT_TOL),
        Ok(v) => match v.trim().parse::<f64>() {
            Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
            _ => Err(Error::InvalidArgument(format!("{TOLERANCE_ENV} must be a positive number, got {v:?}"))),
        },
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => Ok(std::fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn is_svg(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("svg"))
}

fn print_json<T: Serialize>(v: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        return 3;
    }
    match e {
        Error::NonConvexTile
        | Error::DegenerateTile(_)
        | Error::InvalidAngle(_)
        | Error::InvalidArgument(_)
        | Error::InvalidGrid(_)
        | Error::MalformedDocument(_)
        | Error::NonQuadFace { .. }
        | Error::NonManifold(_)
        | Error::WrongDegree { .. }
        | Error::Io(_)
        | Error::Json(_) => 1,
        _ => 2,
    }
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Generate(a) => generate(a),
        Command::Analyze(a) => analyze_cmd(a, false),
        Command::Selffold(a) => analyze_cmd(a, true),
        Command::Modes(a) => modes_cmd(a),
        Command::Simulate(a) => simulate(a),
        Command::Export(a) => export(a),
    }
}

fn mode_by_selector(p: &CreasePattern, sel: &str) -> Result<crate::configspace::GlobalMode> {
    let modes = enumerate_modes(p)?;
    let k = select_modes(Some(sel), modes.len())?;
    if k.len() != 1 {
        return Err(Error::InvalidArgument("select a single mode".into()));
    }
    Ok(modes[k[0] - 1].clone())
}

fn generate(a: GenerateArgs) -> Result<i32> {
    let (p, _) = build_pattern(&a.pattern)?;
    let mode = a.mode.as_deref().map(|s| mode_by_selector(&p, s)).transpose()?;
    let text = match &a.out {
        Some(path) if is_svg(path) => export_svg(&p, mode.as_ref()),
        _ => export_fold(&p, mode.as_ref(), None)?.to_json()?,
    };
    write_output(a.out.as_deref(), &text)?;
    Ok(0)
}

fn analyze_cmd(a: AnalyzeArgs, single: bool) -> Result<i32> {
    let tol = report_tolerance()?;
    let (p, source) = build_pattern(&a.pattern)?;
    let analysis = analyze_all(&p)?;
    let default = if single { Some("1") } else { None };
    let selected = select_modes(a.mode.as_deref().or(default), analysis.modes.len())?;
    let trace = Some(TraceSettings {
        driver_max: a.driver.to_radians(),
        steps: a.steps,
    });
    let report = build_report(&p, &source, &analysis, &selected, trace, tol);
    if a.json {
        print!("{}", report.to_json()?);
    } else {
        println!(
            "pattern: {} ({:?}), {}x{} faces, {} creases, tangent space dimension {}",
            source,
            report.pattern.class,
            report.pattern.rows,
            report.pattern.cols,
            report.pattern.crease_count,
            report.pattern.tangent_space_dim
        );
        println!("modes: {}", report.modes.len());
        for v in &report.verdicts {
            let m = &report.modes[v.mode - 1];
            println!(
                "mode {} [{}]: uniquely_self_foldable = {}, span residual {:.3e}",
                v.mode, m.mv, v.uniquely_self_foldable, v.span_residual
            );
            if let Some(f) = &v.driving_force {
                let fs: Vec<String> = f.iter().map(|x| format!("{x:.6}")).collect();
                println!("  driving force: [{}]", fs.join(", "));
            }
            if let Some(t) = &v.forward_force_trace {
                println!(
                    "  forward force over {} points to {} deg: min {:.6}, max {:.6}",
                    t.points, t.driver_max_deg, t.min, t.max
                );
            }
            if let Some(e) = &v.trace_error {
                println!("  trace failed: {e}");
            }
        }
    }
    if a.require_unique && report.verdicts.iter().any(|v| !v.uniquely_self_foldable) {
        eprintln!("refused: a selected mode is not uniquely self-foldable");
        return Ok(2);
    }
    Ok(0)
}

#[derive(Serialize)]
struct ModesOutput {
    pattern: crate::io::report::PatternInfo,
    modes: Vec<crate::io::report::ModeEntry>,
}

fn modes_cmd(a: ModesArgs) -> Result<i32> {
    let (p, source) = build_pattern(&a.pattern)?;
    let class = match classify_pattern(&p) {
        Err(Error::MixedVertexGeometry) => PatternClass::Unsupported,
        other => other?,
    };
    let modes = enumerate_modes(&p)?;
    let out = ModesOutput {
        pattern: pattern_info(&p, &source, class, tangent_space_dim(&p)?),
        modes: modes.iter().enumerate().map(|(i, m)| mode_entry(i + 1, m)).collect(),
    };
    if a.json {
        print_json(&out)?;
    } else {
        for m in &out.modes {
            let t: Vec<String> = m.tangent.iter().map(|x| format!("{x:.4}")).collect();
            println!("mode {} {} vertex modes {:?} tangent [{}]", m.id, m.mv, m.vertex_modes, t.join(", "));
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct SimulateOutput {
    mode: usize,
    points: usize,
    driver_deg: Vec<f64>,
    arc_length: Vec<f64>,
    final_angles_deg: Vec<f64>,
    max_closure_residual: f64,
    max_placement_deviation: f64,
}

fn simulate(a: SimulateArgs) -> Result<i32> {
    let (p, _) = build_pattern(&a.pattern)?;
    let modes = enumerate_modes(&p)?;
    let k = select_modes(Some(&a.mode), modes.len())?;
    if k.len() != 1 {
        return Err(Error::InvalidArgument("select a single mode".into()));
    }
    let mode = &modes[k[0] - 1];
    let path = fold_path(&p, mode, a.driver.to_radians(), a.steps)?;
    let mut closure = 0.0f64;
    let mut deviation = 0.0f64;
    for pt in &path.points {
        closure = closure.max(crate::configspace::global_closure_residual(&p, &pt.folding_angles));
        deviation = deviation.max(reconstruct_3d(&p, pt)?.max_deviation);
    }
    let last = path.points.last().unwrap();
    if let Some(out) = &a.out {
        let text = if is_svg(out) {
            export_svg(&p, Some(mode))
        } else {
            export_fold(&p, Some(mode), Some(last))?.to_json()?
        };
        std::fs::write(out, text)?;
    }
    let out = SimulateOutput {
        mode: k[0],
        points: path.points.len(),
        driver_deg: path.driver_values.iter().map(|d| d.to_degrees()).collect(),
        arc_length: path.arc_length.clone(),
        final_angles_deg: last.folding_angles.iter().map(|x| x.to_degrees()).collect(),
        max_closure_residual: closure,
        max_placement_deviation: deviation,
    };
    if a.json {
        print_json(&out)?;
    } else {
        println!(
            "mode {}: {} points to driver {} deg, arc length {:.6}, max closure residual {:.3e}, max placement deviation {:.3e}",
            out.mode,
            out.points,
            a.driver,
            out.arc_length.last().unwrap(),
            out.max_closure_residual,
            out.max_placement_deviation
        );
    }
    Ok(0)
}

fn export(a: ExportArgs) -> Result<i32> {
    let (p, _) = build_pattern(&a.pattern)?;
    let mode = match (&a.mode, a.driver) {
        (Some(s), _) => Some(mode_by_selector(&p, s)?),
        (None, Some(_)) => Some(mode_by_selector(&p, "1")?),
        (None, None) => None,
    };
    let text = if is_svg(&a.out) {
        export_svg(&p, mode.as_ref())
    } else {
        let point = match (a.driver, &mode) {
            (Some(d), Some(m)) => Some(crate::sim::propagate_fold(&p, m, d.to_radians())?),
            _ => None,
        };
        export_fold(&p, mode.as_ref(), point.as_ref())?.to_json()?
    };
    std::fs::write(&a.out, text)?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("3x4").unwrap(), (3, 4));
        assert_eq!(parse_grid("2X2").unwrap(), (2, 2));
        assert!(parse_grid("3").is_err());
    }

    #[test]
    fn tile_parsing() {
        assert_eq!(parse_tile("50,110,130,70").unwrap(), [50.0, 110.0, 130.0, 70.0]);
        assert!(parse_tile("50,110").is_err());
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(["origami-selffold", "analyze"]), 1);
        assert_eq!(run(["origami-selffold", "bogus"]), 1);
    }
}
