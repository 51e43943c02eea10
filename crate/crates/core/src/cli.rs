//! Command-line front end. Every invocation writes into a fresh run directory
//! with a manifest; see [`run`] for the exit-code contract.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::ansatz::{param_count, ParameterVector};
use crate::error::Error;
use crate::exact::{gradient_grid, spectrum_grids};
use crate::exec::{init_workers, Exec};
use crate::grid::{Axis, GridResult, GridSpec};
use crate::gridcsv::{fmt_num, read_csv, to_csv};
use crate::manifest::RunDir;
use crate::optimize::OptimizerConfig;
use crate::phases::{analyze, mean_field_ed, BoundaryCurve, WindowShape, DEFAULT_WINDOW};
use crate::svg::{self, Arrows};
use crate::vqe::{vqe_sweep_from, SweepConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "lrxxz", version, about = "Long-range XXZ chain: exact and VQE energy grids, coherence phase maps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact ground energy, gap and energy gradient over a (Δ, α) grid.
    EdGrid(EdGridArgs),
    /// VQE energies, E_d and relative error over a (Δ, α) grid.
    VqeGrid(VqeGridArgs),
    /// Gradient field, directional coherence and boundaries from an ed.csv.
    Coherence(CoherenceArgs),
    /// Mean-field E_d estimate over a (Δ, α) grid.
    MeanField(MeanFieldArgs),
    /// SVG heatmap of a grid CSV, optionally with gradient arrows.
    Plot(PlotArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Flat `key = value` file supplying any flag; command-line flags win.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Parent of the run directories.
    #[arg(long, default_value = "runs")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Chain length.
    #[arg(long = "N")]
    pub n: usize,
    /// Coupling constant (default: preset).
    #[arg(long = "J", allow_hyphen_values = true)]
    pub j: Option<f64>,
    /// Δ range as `min:max:count` (default: preset).
    #[arg(long, allow_hyphen_values = true, value_parser = parse_axis)]
    pub delta: Option<Axis>,
    /// α range as `min:max:count` (default: preset).
    #[arg(long, allow_hyphen_values = true, value_parser = parse_axis)]
    pub alpha: Option<Axis>,
    /// Run cells one at a time instead of on the worker pool.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub sequential: Option<bool>,
}

#[derive(Debug, Args)]
pub struct EdGridArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// Δ ∈ [-4, 0] × α ∈ [1, 4], 41×31, J = 1, depth 1, cold start.
    Phase,
    /// Δ ∈ [-0.9, 0.9] × α ∈ [1, 4], 19×31, J = -1, depth 2, warm start.
    Accuracy,
}

#[derive(Debug, Args)]
pub struct VqeGridArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value = "phase")]
    pub preset: Preset,
    /// Ansatz layers (default: preset).
    #[arg(long)]
    pub depth: Option<usize>,
    /// Seed each cell from its left neighbour's optimum (default: preset).
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub warm: Option<bool>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 4000)]
    pub max_evals: usize,
    #[arg(long, default_value_t = 1)]
    pub restarts: usize,
    #[arg(long, default_value_t = OptimizerConfig::default().initial_step)]
    pub initial_step: f64,
    #[arg(long, default_value_t = OptimizerConfig::default().x_tolerance)]
    pub x_tolerance: f64,
    #[arg(long, default_value_t = OptimizerConfig::default().f_tolerance)]
    pub f_tolerance: f64,
    /// Parameter file to start from instead of the seeded initializer.
    #[arg(long, value_name = "FILE")]
    pub init: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Shape {
    Square,
    Row,
}

#[derive(Debug, Args)]
pub struct CoherenceArgs {
    /// E_d grid CSV, e.g. ed.csv from vqe-grid.
    #[arg(long)]
    pub input: PathBuf,
    /// Odd window edge length.
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    pub window: usize,
    #[arg(long, value_enum, default_value = "square")]
    pub shape: Shape,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct MeanFieldArgs {
    #[arg(long = "N")]
    pub n: usize,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_axis)]
    pub delta: Option<Axis>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_axis)]
    pub alpha: Option<Axis>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// Scalar grid CSV for the heatmap.
    #[arg(long)]
    pub input: PathBuf,
    /// Arrow component along α; needs --uy.
    #[arg(long, requires = "uy")]
    pub ux: Option<PathBuf>,
    /// Arrow component along Δ; needs --ux.
    #[arg(long, requires = "ux")]
    pub uy: Option<PathBuf>,
    /// Draw an arrow every `stride` cells in each direction.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub stride: u64,
    #[arg(long, default_value = "plot.svg")]
    pub name: String,
    #[command(flatten)]
    pub common: Common,
}

fn parse_axis(s: &str) -> Result<Axis, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("expected min:max:count, got `{s}`"));
    }
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("`{t}` is not a number"));
    let count = parts[2].trim().parse::<usize>().map_err(|_| format!("`{}` is not a count", parts[2]))?;
    Axis::new(num(parts[0])?, num(parts[1])?, count).map_err(|e| e.to_string())
}

struct PresetValues {
    j: f64,
    delta: Axis,
    alpha: Axis,
    depth: usize,
    warm: bool,
}

impl Preset {
    fn values(self) -> PresetValues {
        let alpha = Axis::new(1.0, 4.0, 31).expect("valid preset axis");
        match self {
            Preset::Phase => PresetValues { j: 1.0, delta: Axis::new(-4.0, 0.0, 41).expect("valid preset axis"), alpha, depth: 1, warm: false },
            Preset::Accuracy => PresetValues { j: -1.0, delta: Axis::new(-0.9, 0.9, 19).expect("valid preset axis"), alpha, depth: 2, warm: true },
        }
    }
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

/// Splices the `--config` file's entries in right after the subcommand so
/// that later command-line occurrences override them.
fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let mut rest = Vec::with_capacity(args.len());
    let mut path: Option<PathBuf> = None;
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        match a.to_str() {
            Some("--config") => match it.next() {
                Some(p) => path = Some(p.into()),
                None => return Err("--config needs a file argument".into()),
            },
            Some(s) if s.starts_with("--config=") => path = Some(s["--config=".len()..].into()),
            _ => rest.push(a),
        }
    }
    let Some(path) = path else { return Ok(rest) };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let mut injected = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(format!("{}: line {}: expected `key = value`", path.display(), i + 1));
        };
        let key = k.trim().replace('_', "-");
        let key = match key.as_str() {
            "n" => "N".to_string(),
            "j" => "J".to_string(),
            _ => key,
        };
        if key.is_empty() || key == "config" {
            return Err(format!("{}: line {}: invalid key `{}`", path.display(), i + 1, k.trim()));
        }
        injected.push(OsString::from(format!("--{key}")));
        injected.push(OsString::from(v.trim().trim_matches('"')));
    }
    let at = rest.len().min(2);
    rest.splice(at..at, injected);
    Ok(rest)
}

fn parse_cli(args: Vec<OsString>) -> Result<Cli, clap::Error> {
    let mut cmd = Cli::command();
    for name in ["ed-grid", "vqe-grid", "coherence", "mean-field", "plot"] {
        cmd = cmd.mut_subcommand(name, |s| s.args_override_self(true));
    }
    let matches = cmd.try_get_matches_from(args)?;
    Cli::from_arg_matches(&matches)
}

/// Runs the CLI on `args` (program name first) and returns the exit code:
/// 0 success, 1 numeric or runtime failure, 2 usage error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match expand_config(args) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
    };
    let cli = match parse_cli(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let workers = init_workers();
    let outcome = match cli.command {
        Command::EdGrid(a) => ed_grid(a, workers),
        Command::VqeGrid(a) => vqe_grid(a, workers),
        Command::Coherence(a) => coherence(a),
        Command::MeanField(a) => mean_field(a),
        Command::Plot(a) => plot(a),
    };
    match outcome {
        Ok(dir) => {
            println!("{}", dir.display());
            EXIT_OK
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            EXIT_RUNTIME
        }
    }
}

fn axis_json(a: &Axis) -> Value {
    json!({ "min": fmt_num(a.min), "max": fmt_num(a.max), "count": a.count })
}

fn exec_of(m: &ModelArgs) -> Exec {
    if m.sequential.unwrap_or(false) {
        Exec::Sequential
    } else {
        Exec::Parallel
    }
}

fn write_grid(run: &mut RunDir, name: &str, g: &GridResult) -> Result<(), Failure> {
    run.write(name, to_csv(g).as_bytes())?;
    Ok(())
}

fn ed_grid(a: EdGridArgs, workers: usize) -> Result<PathBuf, Failure> {
    let preset = Preset::Phase.values();
    let m = &a.model;
    let j = m.j.unwrap_or(preset.j);
    let spec = GridSpec::new(m.delta.unwrap_or(preset.delta), m.alpha.unwrap_or(preset.alpha));
    if m.n < 2 {
        return Err(Failure::Usage(format!("--N must be at least 2, got {}", m.n)));
    }
    let (energy, gap) = spectrum_grids(&spec, j, m.n, exec_of(m))?;
    let mut run = RunDir::create(&a.common.out, "ed-grid")?;
    write_grid(&mut run, "energy.csv", &energy)?;
    write_grid(&mut run, "gap.csv", &gap)?;
    let grads = match gradient_grid(&energy) {
        Ok(g) => [g.d_delta, g.d_alpha, g.magnitude],
        Err(e) => {
            log::warn!("gradient grids masked: {e}");
            let masked = GridResult::from_fn(spec, "masked", |_, _| f64::NAN)?;
            [masked.clone(), masked.clone(), masked]
        }
    };
    for (name, g) in ["grad_delta.csv", "grad_alpha.csv", "grad_mag.csv"].iter().zip(&grads) {
        write_grid(&mut run, name, g)?;
    }
    let params = json!({
        "N": m.n, "J": fmt_num(j), "delta": axis_json(&spec.delta), "alpha": axis_json(&spec.alpha),
        "exec": format!("{:?}", exec_of(m)), "workers": workers,
    });
    Ok(run.finish(params, "ok")?)
}

fn vqe_grid(a: VqeGridArgs, workers: usize) -> Result<PathBuf, Failure> {
    let preset = a.preset.values();
    let m = &a.model;
    if m.n < 2 || !m.n.is_multiple_of(2) {
        return Err(Failure::Usage(format!(
            "--N {} rejected: the VQE starts from the Neel state, which lies in the zero-magnetization sector only for an even chain length >= 2",
            m.n
        )));
    }
    let depth = a.depth.unwrap_or(preset.depth);
    if depth == 0 {
        return Err(Failure::Usage("--depth must be at least 1".into()));
    }
    let optimizer = OptimizerConfig {
        max_evals: a.max_evals,
        initial_step: a.initial_step,
        x_tolerance: a.x_tolerance,
        f_tolerance: a.f_tolerance,
        seed: a.seed,
    };
    optimizer.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    if a.restarts == 0 {
        return Err(Failure::Usage("--restarts must be at least 1".into()));
    }
    let cfg = SweepConfig { j: m.j.unwrap_or(preset.j), n: m.n, depth, optimizer, warm: a.warm.unwrap_or(preset.warm), restarts: a.restarts };
    let spec = GridSpec::new(m.delta.unwrap_or(preset.delta), m.alpha.unwrap_or(preset.alpha));

    let start = match &a.init {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            let (n, _, pv) = ParameterVector::from_text(&text, path).map_err(|e| Failure::Usage(e.to_string()))?;
            if n != m.n {
                return Err(Failure::Usage(format!("{} was written for N = {n}, this run has N = {}", path.display(), m.n)));
            }
            Some(pv)
        }
        None => None,
    };
    let count = param_count(m.n, depth).map_err(|e| Failure::Usage(e.to_string()))?;
    if start.as_ref().is_some_and(|s| s.len() > count) {
        return Err(Failure::Usage(format!("--init has more than the {count} parameters of depth {depth}")));
    }

    let sweep = vqe_sweep_from(&spec, &cfg, start.as_ref(), exec_of(m))?;
    let mut run = RunDir::create(&a.common.out, "vqe-grid")?;
    write_grid(&mut run, "evqe.csv", &sweep.e_vqe)?;
    write_grid(&mut run, "eexact.csv", &sweep.e_exact)?;
    write_grid(&mut run, "ed.csv", &sweep.e_d)?;
    write_grid(&mut run, "relerr.csv", &sweep.rel_error)?;
    for (k, p) in sweep.params.iter().enumerate() {
        if let Some(p) = p {
            let (row, col) = (k / spec.cols(), k % spec.cols());
            run.write(&format!("params/a{row:03}_d{col:03}.txt"), p.to_text(m.n, depth).as_bytes())?;
        }
    }
    let failures: Vec<Value> =
        sweep.failures.iter().map(|f| json!({ "delta": fmt_num(f.delta), "alpha": fmt_num(f.alpha), "message": f.message })).collect();
    let params = json!({
        "preset": format!("{:?}", a.preset).to_lowercase(),
        "N": m.n, "J": fmt_num(cfg.j), "depth": depth, "param_count": count,
        "delta": axis_json(&spec.delta), "alpha": axis_json(&spec.alpha),
        "warm": cfg.warm, "restarts": cfg.restarts,
        "optimizer": {
            "max_evals": optimizer.max_evals, "initial_step": fmt_num(optimizer.initial_step),
            "x_tolerance": fmt_num(optimizer.x_tolerance), "f_tolerance": fmt_num(optimizer.f_tolerance), "seed": optimizer.seed,
        },
        "init": a.init.as_ref().map(|p| p.display().to_string()),
        "exec": format!("{:?}", exec_of(m)), "workers": workers,
        "total_evals": sweep.total_evals(),
        "failures": failures,
    });
    if sweep.failures.is_empty() {
        log::info!("max relative error {:e}, min {:e}", sweep.rel_error.max(), sweep.rel_error.min());
        Ok(run.finish(params, "ok")?)
    } else {
        let dir = run.finish(params, "cell failures")?;
        for f in &sweep.failures {
            eprintln!("cell (delta = {}, alpha = {}) failed: {}", f.delta, f.alpha, f.message);
        }
        Err(Failure::Runtime(format!("{} cell(s) failed; partial results in {}", sweep.failures.len(), dir.display())))
    }
}

fn boundary_csv(curves: &[&BoundaryCurve]) -> String {
    let mut out = String::from("mode,line,critical\n");
    for c in curves {
        let mut rows: Vec<(f64, f64)> = c.points.clone();
        rows.extend(c.skipped.iter().map(|&l| (l, f64::NAN)));
        rows.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (line, crit) in rows {
            out.push_str(&format!("{},{},{}\n", c.mode.tag(), fmt_num(line), fmt_num(crit)));
        }
    }
    out
}

fn read_input(path: &Path) -> Result<GridResult, Failure> {
    read_csv(path).map_err(|e| match e {
        Error::Io { .. } => Failure::Runtime(e.to_string()),
        other => Failure::Usage(other.to_string()),
    })
}

fn coherence(a: CoherenceArgs) -> Result<PathBuf, Failure> {
    if a.window == 0 || a.window.is_multiple_of(2) {
        return Err(Failure::Usage(format!("--window must be odd and positive, got {}", a.window)));
    }
    let e_d = read_input(&a.input)?;
    let shape = match a.shape {
        Shape::Square => WindowShape::Square,
        Shape::Row => WindowShape::Row,
    };
    let an = analyze(&e_d, a.window, shape).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut run = RunDir::create(&a.common.out, "coherence")?;
    write_grid(&mut run, "ux.csv", &an.field.ux_grid()?)?;
    write_grid(&mut run, "uy.csv", &an.field.uy_grid()?)?;
    write_grid(&mut run, "angle.csv", &an.angles)?;
    write_grid(&mut run, "coherence.csv", &an.coherence.to_grid())?;
    run.write("boundary.csv", boundary_csv(&[&an.along_delta, &an.along_alpha]).as_bytes())?;
    let params = json!({
        "input": a.input.display().to_string(),
        "input_sha256": crate::manifest::sha256_hex(&std::fs::read(&a.input).map_err(|e| Error::io(&a.input, e))?),
        "window": a.window, "shape": format!("{:?}", shape).to_lowercase(),
        "zero_gradient": fmt_num(crate::phases::ZERO_GRADIENT),
        "defined_cells": an.field.defined_count(),
        "degenerate": { "ridge-along-delta": an.along_delta.degenerate, "ridge-along-alpha": an.along_alpha.degenerate },
    });
    if an.field.defined_count() == 0 {
        let dir = run.finish(params, "all cells masked")?;
        return Err(Failure::Runtime(format!(
            "the gradient of {} vanishes everywhere, so every cell is masked and no boundary exists (outputs in {})",
            a.input.display(),
            dir.display()
        )));
    }
    Ok(run.finish(params, "ok")?)
}

fn mean_field(a: MeanFieldArgs) -> Result<PathBuf, Failure> {
    let preset = Preset::Phase.values();
    if a.n < 2 {
        return Err(Failure::Usage(format!("--N must be at least 2, got {}", a.n)));
    }
    let spec = GridSpec::new(a.delta.unwrap_or(preset.delta), a.alpha.unwrap_or(preset.alpha));
    if spec.alpha.min <= 0.0 {
        return Err(Failure::Usage("α must be positive".into()));
    }
    let values = (0..spec.len())
        .map(|k| {
            let (d, al) = spec.coords(k);
            mean_field_ed(d, al, a.n)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let g = GridResult::new(spec, values, "mean-field E_d")?;
    let mut run = RunDir::create(&a.common.out, "mean-field")?;
    write_grid(&mut run, "mf_ed.csv", &g)?;
    let params = json!({ "N": a.n, "delta": axis_json(&spec.delta), "alpha": axis_json(&spec.alpha) });
    Ok(run.finish(params, "ok")?)
}

fn plot(a: PlotArgs) -> Result<PathBuf, Failure> {
    if a.name.contains('/') || a.name.is_empty() {
        return Err(Failure::Usage(format!("--name must be a plain file name, got `{}`", a.name)));
    }
    let g = read_input(&a.input)?;
    let vectors = match (&a.ux, &a.uy) {
        (Some(x), Some(y)) => Some((read_input(x)?, read_input(y)?)),
        _ => None,
    };
    let arrows = vectors.as_ref().map(|(ux, uy)| Arrows { ux, uy, stride: a.stride as usize });
    let text = svg::render(&g, arrows.as_ref()).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut run = RunDir::create(&a.common.out, "plot")?;
    run.write(&a.name, text.as_bytes())?;
    let params = json!({
        "input": a.input.display().to_string(),
        "ux": a.ux.as_ref().map(|p| p.display().to_string()),
        "uy": a.uy.as_ref().map(|p| p.display().to_string()),
        "stride": a.stride,
    });
    Ok(run.finish(params, "ok")?)
}
