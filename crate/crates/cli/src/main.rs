//! `wirescat` command-line driver.

mod config;
mod svg;
mod table;

use clap::{Args, Parser, Subcommand, ValueEnum};
use config::{parse_real, Config};
use std::f64::consts::PI;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use table::{Cell, Table};
use wirescat::greens::{convergence_benchmark, BenchmarkSpec, Representation};
use wirescat::mirror::{field_map, FieldKind, GridSpec, MirrorKind};
use wirescat::renorm::DEFAULT_TOL;
use wirescat::sweep::{sweep_geometry, sweep_k, GeometrySweep, Grid, KSweep, SweepRow};
use wirescat::validate::{run_validation, Relation, ValidateOptions};
use wirescat::waveguide::{Point, WireConfig, DEFAULT_MODE_GUARD};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(wirescat::Error),
    Io(std::io::Error),
    ValidationFailed,
}

impl From<wirescat::Error> for CliError {
    fn from(e: wirescat::Error) -> Self {
        Self::Domain(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e)
    }
}

#[derive(Parser)]
#[command(name = "wirescat", version, about = "Point-impurity scattering in a hard-walled quantum wire")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct Common {
    /// key=value file; flags given on the command line take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Wavenumber times width (accepts e.g. `2.5pi`)
    #[arg(long, global = true, value_parser = parse_real, allow_hyphen_values = true)]
    kd: Option<f64>,
    #[arg(long, global = true, value_parser = parse_real)]
    kd_min: Option<f64>,
    #[arg(long, global = true, value_parser = parse_real)]
    kd_max: Option<f64>,
    #[arg(long, global = true)]
    points: Option<usize>,
    /// Impurity height(s) in units of the width, comma separated for sweep-k
    #[arg(long, global = true, value_parser = parse_real, value_delimiter = ',')]
    y0: Option<Vec<f64>>,
    /// Scattering length in units of the width (negative: attractive)
    #[arg(long, global = true, value_parser = parse_real, allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long, global = true, value_parser = parse_real, allow_hyphen_values = true)]
    x0: Option<f64>,
    /// Truncation tolerance of the mode series
    #[arg(long, global = true, value_parser = parse_real)]
    tol: Option<f64>,
    /// Output file (standard output when absent)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Also write an SVG plot here
    #[arg(long, global = true)]
    svg: Option<PathBuf>,
    /// Smaller grids for validate
    #[arg(long, global = true)]
    fast: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Cross section and conductance against kd
    SweepK,
    /// Cross section over scattering length and impurity height at fixed kd
    SweepGeom(GeomArgs),
    /// Mirror waves or the wire Green's function on a grid
    FieldMap(FieldArgs),
    /// Terms-versus-error table of the Green's function representations
    GreensBench(BenchArgs),
    /// Run every identity check; exit code 1 on any failure
    Validate(ValidateArgs),
}

#[derive(Args)]
struct GeomArgs {
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    a_min: Option<f64>,
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    a_max: Option<f64>,
    #[arg(long)]
    a_points: Option<usize>,
    #[arg(long, value_parser = parse_real)]
    y0_min: Option<f64>,
    #[arg(long, value_parser = parse_real)]
    y0_max: Option<f64>,
    #[arg(long)]
    y0_points: Option<usize>,
}

#[derive(Args)]
struct FieldArgs {
    /// s, s_plus, px, dxy, f, or greens
    #[arg(long)]
    kind: Option<String>,
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    x_min: Option<f64>,
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    x_max: Option<f64>,
    #[arg(long, value_parser = parse_real)]
    y_min: Option<f64>,
    #[arg(long, value_parser = parse_real)]
    y_max: Option<f64>,
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long)]
    ny: Option<usize>,
}

#[derive(Args)]
struct BenchArgs {
    /// Field point; defaults to the source point
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    x: Option<f64>,
    #[arg(long, value_parser = parse_real)]
    y: Option<f64>,
    /// Comma-separated representations (spectral, kummer, image, diffraction)
    #[arg(long)]
    reps: Option<String>,
}

#[derive(Args)]
struct ValidateArgs {
    /// Relative perturbation of s(k); for exercising the detectors
    #[arg(long, hide = true, value_parser = parse_real, allow_hyphen_values = true)]
    perturb_s: Option<f64>,
}

struct Ctx {
    common: Common,
    config: Config,
}

impl Ctx {
    fn format(&self) -> Result<Format, CliError> {
        if let Some(f) = self.common.format {
            return Ok(f);
        }
        match self.config.raw("format") {
            None | Some("csv") => Ok(Format::Csv),
            Some("json") => Ok(Format::Json),
            Some(other) => Err(CliError::Usage(format!("unknown format '{other}'"))),
        }
    }

    fn out(&self) -> Result<Option<PathBuf>, CliError> {
        self.config.pick_opt(self.common.out.clone(), "out")
    }

    fn svg(&self) -> Result<Option<PathBuf>, CliError> {
        self.config.pick_opt(self.common.svg.clone(), "svg")
    }

    fn emit(&self, table: &Table) -> Result<(), CliError> {
        let fmt = self.format()?;
        let write = |w: &mut dyn Write| -> std::io::Result<()> {
            match fmt {
                Format::Csv => table.write_csv(w),
                Format::Json => table.write_json(w),
            }
        };
        match self.out()? {
            Some(path) => {
                let mut f = std::io::BufWriter::new(std::fs::File::create(&path)?);
                write(&mut f)?;
                f.flush()?;
            }
            None => {
                let stdout = std::io::stdout();
                let mut lock = stdout.lock();
                write(&mut lock)?;
            }
        }
        Ok(())
    }
}

fn write_svg(path: &Path, svg: &str) -> Result<(), CliError> {
    std::fs::write(path, svg)?;
    Ok(())
}

fn row_cells(r: &SweepRow) -> Vec<Cell> {
    vec![
        Cell::F(r.y0),
        Cell::F(r.a),
        Cell::F(r.kd),
        Cell::U(r.n),
        Cell::F(r.sigma),
        Cell::F(r.conductance),
        Cell::F(r.conductance_empty),
        Cell::F(r.sigma_free),
        Cell::F(r.gr_re),
        Cell::F(r.gr_im),
        Cell::F(r.rs_re),
        Cell::F(r.rs_im),
        Cell::F(r.delta0),
        Cell::B(r.gap),
        Cell::F(r.gr_asym_re),
        Cell::F(r.gr_asym_im),
        Cell::F(r.sigma_asym),
    ]
}

fn sweep_k_cmd(ctx: &Ctx) -> Result<(), CliError> {
    let c = &ctx.common;
    let cfg = &ctx.config;
    let kd = Grid::new(
        cfg.pick(c.kd_min, "kd-min", 0.5 * PI)?,
        cfg.pick(c.kd_max, "kd-max", 7.5 * PI)?,
        cfg.pick(c.points, "points", 2000)?,
    )?;
    let mut spec = KSweep::new(kd, cfg.pick(c.y0.clone(), "y0", vec![0.5])?, cfg.pick(c.a, "a", 0.1)?);
    spec.x0 = cfg.pick(c.x0, "x0", 0.0)?;
    spec.tol = cfg.pick(c.tol, "tol", DEFAULT_TOL)?;
    let rows = sweep_k(&spec)?;
    let mut t = Table::new("sweep-k", &SweepRow::COLUMNS);
    t.meta_f("kd_min", kd.min);
    t.meta_f("kd_max", kd.max);
    t.meta("points", kd.points);
    t.meta("y0", spec.y0.iter().map(|v| format!("{v:.16e}")).collect::<Vec<_>>().join(" "));
    t.meta_f("a", spec.a);
    t.meta_f("x0", spec.x0);
    t.meta("representation", "kummer");
    t.meta_f("tol", spec.tol);
    t.meta_f("mode_guard", spec.mode_guard);
    for r in &rows {
        t.push(row_cells(r));
    }
    ctx.emit(&t)?;
    if let Some(path) = ctx.svg()? {
        let mut series = Vec::new();
        for (b, y0) in spec.y0.iter().enumerate() {
            let block = &rows[b * kd.points..(b + 1) * kd.points];
            series.push(svg::Series {
                label: format!("sigma, y0={y0}"),
                points: block.iter().map(|r| (r.kd / PI, r.sigma)).collect(),
            });
        }
        series.push(svg::Series {
            label: "free k sigma_f".into(),
            points: rows[..kd.points].iter().map(|r| (r.kd / PI, r.sigma_free * r.kd)).collect(),
        });
        let title = format!("cross section, a = {}", spec.a);
        write_svg(&path, &svg::line_plot(&title, "kd / pi", "sigma / d", &series))?;
    }
    Ok(())
}

fn sweep_geom_cmd(ctx: &Ctx, g: &GeomArgs) -> Result<(), CliError> {
    let c = &ctx.common;
    let cfg = &ctx.config;
    let a = Grid::new(
        cfg.pick(g.a_min, "a-min", -0.1)?,
        cfg.pick(g.a_max, "a-max", 0.1)?,
        cfg.pick(g.a_points, "a-points", 101)?,
    )?;
    let y0 = Grid::new(
        cfg.pick(g.y0_min, "y0-min", 0.02)?,
        cfg.pick(g.y0_max, "y0-max", 0.98)?,
        cfg.pick(g.y0_points, "y0-points", 51)?,
    )?;
    let mut spec = GeometrySweep::new(cfg.pick(c.kd, "kd", 12.5 * PI)?, a, y0);
    spec.x0 = cfg.pick(c.x0, "x0", 0.0)?;
    spec.tol = cfg.pick(c.tol, "tol", DEFAULT_TOL)?;
    let rows = sweep_geometry(&spec)?;
    let mut t = Table::new("sweep-geom", &SweepRow::COLUMNS);
    t.meta_f("kd", spec.kd);
    t.meta("a_grid", format!("{:.16e} {:.16e} {}", a.min, a.max, a.points));
    t.meta("y0_grid", format!("{:.16e} {:.16e} {}", y0.min, y0.max, y0.points));
    t.meta_f("x0", spec.x0);
    t.meta("representation", "kummer");
    t.meta_f("tol", spec.tol);
    t.meta_f("mode_guard", spec.mode_guard);
    for r in &rows {
        t.push(row_cells(r));
    }
    ctx.emit(&t)?;
    if let Some(path) = ctx.svg()? {
        let values: Vec<f64> = rows.iter().map(|r| r.sigma).collect();
        let title = format!("sigma at kd = {:.4} pi", spec.kd / PI);
        let svg = svg::heatmap(&title, "a / d", "y0 / d", (a.min, a.max), (y0.min, y0.max), a.points, y0.points, &values);
        write_svg(&path, &svg)?;
    }
    Ok(())
}

fn field_map_cmd(ctx: &Ctx, f: &FieldArgs) -> Result<(), CliError> {
    let c = &ctx.common;
    let cfg = &ctx.config;
    let kind_name = cfg.pick(f.kind.clone(), "kind", "s".to_string())?;
    let tol = cfg.pick(c.tol, "tol", DEFAULT_TOL)?;
    let kind = if kind_name == "greens" {
        FieldKind::Greens { tol }
    } else {
        FieldKind::Mirror(kind_name.parse::<MirrorKind>()?)
    };
    let k = cfg.pick(c.kd, "kd", 40.0)?;
    let y0 = cfg.pick(c.y0.clone(), "y0", vec![0.6])?;
    let [y0] = y0[..] else {
        return Err(CliError::Usage("field-map takes a single --y0".into()));
    };
    let wire = WireConfig::new(y0, cfg.pick(c.a, "a", 0.1)?)?
        .with_x0(cfg.pick(c.x0, "x0", 0.0)?)?
        .with_mode_guard(DEFAULT_MODE_GUARD)?;
    let grid = GridSpec::new(
        (cfg.pick(f.x_min, "x-min", -2.0)?, cfg.pick(f.x_max, "x-max", 2.0)?),
        (cfg.pick(f.y_min, "y-min", 0.0)?, cfg.pick(f.y_max, "y-max", 1.0)?),
        cfg.pick(f.nx, "nx", 400)?,
        cfg.pick(f.ny, "ny", 100)?,
    )?;
    let map = field_map(kind, k, &wire, &grid)?;
    let mut t = Table::new("field-map", &["x", "y", "re", "im"]);
    t.meta("kind", kind.name());
    t.meta_f("kd", k);
    t.meta_f("y0", wire.y0);
    t.meta_f("x0", wire.x0);
    t.meta_f("a", wire.a);
    t.meta("grid", format!("{} x {}, row-major in y", grid.nx, grid.ny));
    if let FieldKind::Greens { tol } = kind {
        t.meta("representation", "kummer");
        t.meta_f("tol", tol);
    }
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let v = map.at(i, j);
            t.push(vec![Cell::F(grid.x(i)), Cell::F(grid.y(j)), Cell::F(v.re), Cell::F(v.im)]);
        }
    }
    ctx.emit(&t)?;
    if let Some(path) = ctx.svg()? {
        let values: Vec<f64> = map.values.iter().map(|z| z.re).collect();
        let title = format!("{} wave, kd = {:.4}, y0 = {}", kind.name(), k, wire.y0);
        let svg = svg::heatmap(&title, "x / d", "y / d", grid.x_range, grid.y_range, grid.nx, grid.ny, &values);
        write_svg(&path, &svg)?;
    }
    Ok(())
}

fn greens_bench_cmd(ctx: &Ctx, b: &BenchArgs) -> Result<(), CliError> {
    let c = &ctx.common;
    let cfg = &ctx.config;
    let k = cfg.pick(c.kd, "kd", 2.5 * PI)?;
    let y0 = cfg.pick(c.y0.clone(), "y0", vec![0.3])?;
    let [y0] = y0[..] else {
        return Err(CliError::Usage("greens-bench takes a single --y0".into()));
    };
    let r0 = Point::new(cfg.pick(c.x0, "x0", 0.0)?, y0);
    let r = Point::new(cfg.pick(b.x, "x", r0.x)?, cfg.pick(b.y, "y", r0.y)?);
    let coincident = r == r0;
    let default_reps = if coincident { "kummer,image" } else { "spectral,kummer,image" };
    let reps = cfg.pick(b.reps.clone(), "reps", default_reps.to_string())?;
    let spec = BenchmarkSpec {
        representations: reps
            .split(',')
            .map(|s| s.trim().parse::<Representation>())
            .collect::<Result<_, _>>()?,
        ..BenchmarkSpec::default()
    };
    let table = convergence_benchmark(r, r0, k, &spec)?;
    let mut t = Table::new(
        "greens-bench",
        &["representation", "mode", "tol", "terms_used", "value_re", "value_im", "error"],
    );
    t.meta_f("kd", k);
    t.meta("r", format!("{:.16e} {:.16e}", r.x, r.y));
    t.meta("r0", format!("{:.16e} {:.16e}", r0.x, r0.y));
    t.meta("coincident", table.coincident);
    t.meta("reference", format!("{:.16e} {:.16e}", table.reference.re, table.reference.im));
    for row in &table.rows {
        t.push(vec![
            Cell::S(row.representation.name().into()),
            Cell::S(row.mode.name().into()),
            Cell::F(row.tol),
            Cell::U(row.terms_used),
            Cell::F(row.value.re),
            Cell::F(row.value.im),
            Cell::F(row.error),
        ]);
    }
    ctx.emit(&t)?;
    if let Some(path) = ctx.svg()? {
        let mut series: Vec<svg::Series> = Vec::new();
        for row in table.rows.iter().filter(|r| r.tol.is_nan()) {
            let label = format!("{} {}", row.representation.name(), row.mode.name());
            let p = ((row.terms_used as f64).log10(), row.error.max(1e-17).log10());
            match series.iter_mut().find(|s| s.label == label) {
                Some(s) => s.points.push(p),
                None => series.push(svg::Series { label, points: vec![p] }),
            }
        }
        write_svg(&path, &svg::line_plot("convergence", "log10 terms", "log10 error", &series))?;
    }
    Ok(())
}

fn validate_cmd(ctx: &Ctx, v: &ValidateArgs) -> Result<(), CliError> {
    let fast = ctx.common.fast || ctx.config.pick(None, "fast", false)?;
    let opts = ValidateOptions {
        fast,
        perturb_s: v.perturb_s.unwrap_or(0.0),
    };
    let report = run_validation(opts);
    let mut t = Table::new("validate", &["check", "measured", "relation", "threshold", "passed", "detail"]);
    t.meta("fast", fast);
    t.meta_f("perturb_s", opts.perturb_s);
    for c in &report.checks {
        let rel = match c.relation {
            Relation::Le => "<=",
            Relation::Ge => ">=",
        };
        t.push(vec![
            Cell::S(c.name.into()),
            Cell::F(c.measured),
            Cell::S(rel.into()),
            Cell::F(c.threshold),
            Cell::B(c.passed),
            Cell::S(c.detail.clone()),
        ]);
    }
    ctx.emit(&t)?;
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::ValidationFailed)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = match &cli.common.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let ctx = Ctx {
        common: cli.common,
        config,
    };
    match &cli.command {
        Command::SweepK => sweep_k_cmd(&ctx),
        Command::SweepGeom(g) => sweep_geom_cmd(&ctx, g),
        Command::FieldMap(f) => field_map_cmd(&ctx, f),
        Command::GreensBench(b) => greens_bench_cmd(&ctx, b),
        Command::Validate(v) => validate_cmd(&ctx, v),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::ValidationFailed) => {
            eprintln!("wirescat: validation failed");
            ExitCode::from(1)
        }
        Err(CliError::Usage(m)) => {
            eprintln!("wirescat: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(e)) => {
            eprintln!("wirescat: {e}");
            ExitCode::from(2)
        }
        Err(CliError::Io(e)) => {
            eprintln!("wirescat: {e}");
            ExitCode::from(2)
        }
    }
}
