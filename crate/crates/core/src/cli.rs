//! The `circenv` command-line driver.
//!
//! Exit status: 0 on success, 1 on domain errors (including a verification
//! that ran but did not pass), 2 on usage errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::assoc::{self, Angle, BasePoint};
use crate::dsl::{parse_family, FamilySpec};
use crate::envelope::{CircleFamily, Classification, EnvelopeBranch};
use crate::frontal::{build_frontal, FrontalData};
use crate::geom::Vec2;
use crate::io::SampledCurve;
use crate::mohr;
use crate::render::{self, Scene, Style};
use crate::tolerance::Tolerances;
use crate::verify::{self, random, Relation, VerificationReport};

#[derive(Debug, Parser)]
#[command(name = "circenv", version, about = "Envelopes of circle families, associated curves and Mohr failure envelopes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Envelope branches of a circle family.
    Envelope {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value_t = Branch::Plus)]
        branch: Branch,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Number of envelopes, as a JSON report.
    Classify {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evolute, involute, evolutoid, pedal, contrapedal or pedaloid of the center curve.
    Assoc {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum)]
        kind: Kind,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Numerical check of one relation, or the random property suite.
    Verify {
        #[arg(long)]
        family: Option<PathBuf>,
        #[arg(long)]
        grid: Option<usize>,
        #[command(flatten)]
        tolerances: ToleranceArgs,
        /// Relation id, e.g. T1.7-2ii.
        #[arg(long)]
        relation: Option<String>,
        #[arg(long, value_enum)]
        suite: Option<Suite>,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Residual tolerance; defaults depend on the relation.
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Mohr circles and failure envelope from a stress CSV.
    Mohr {
        /// CSV with header sigma1,sigma3[,label].
        #[arg(long)]
        stress: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// SVG of every k-th circle of a family with its envelopes.
    Render {
        #[command(flatten)]
        family: FamilyArgs,
        /// Draw every k-th circle; default keeps at most 60.
        #[arg(long)]
        stride: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[arg(long)]
    pub family: PathBuf,
    /// Number of grid samples, overriding the file.
    #[arg(long)]
    pub grid: Option<usize>,
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
}

#[derive(Debug, Args)]
pub struct ToleranceArgs {
    #[arg(long)]
    pub tol_frame: Option<f64>,
    #[arg(long)]
    pub tol_zero: Option<f64>,
    #[arg(long)]
    pub tol_eq: Option<f64>,
    #[arg(long)]
    pub density: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    /// Angle in radians.
    #[arg(long, allow_negative_numbers = true)]
    pub phi: Option<f64>,
    /// Base point `x,y`.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub point: Option<Vec2>,
    #[arg(long, allow_negative_numbers = true)]
    pub t0: Option<f64>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Branch {
    Plus,
    Minus,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Svg,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Evolute,
    Involute,
    Evolutoid,
    Pedal,
    Contrapedal,
    Pedaloid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Random,
}

fn parse_point(s: &str) -> Result<Vec2, String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected x,y, got '{}'", s))?;
    let num = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("'{}': {}", v.trim(), e));
    Ok(Vec2::new(num(x)?, num(y)?))
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
    /// Output was written but the checked relation did not hold.
    #[error("verification failed: {0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) | CliError::Failed(_) => 1,
        }
    }
}

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

impl ToleranceArgs {
    fn resolve(&self) -> Tolerances {
        let mut tol = Tolerances::default();
        if let Some(v) = self.tol_frame {
            tol.frame = v;
        }
        if let Some(v) = self.tol_zero {
            tol.zero = v;
        }
        if let Some(v) = self.tol_eq {
            tol.equality = v;
        }
        if let Some(v) = self.density {
            tol.density = v;
        }
        tol
    }
}

fn load_spec(path: &Path, grid: Option<usize>) -> Result<FamilySpec, CliError> {
    let text = fs::read_to_string(path).map_err(|e| domain(format!("{}: {}", path.display(), e)))?;
    let spec = parse_family(&text).map_err(|e| domain(format!("{}: {}", path.display(), e)))?;
    match grid {
        Some(n) if n < 5 => Err(usage("--grid needs at least 5 samples")),
        Some(n) => Ok(spec.with_samples(n)),
        None => Ok(spec),
    }
}

impl FamilyArgs {
    fn family(&self) -> Result<CircleFamily, CliError> {
        let spec = load_spec(&self.family, self.grid)?;
        CircleFamily::from_spec(&spec, &self.tolerances.resolve()).map_err(domain)
    }

    fn frontal(&self) -> Result<FrontalData, CliError> {
        let spec = load_spec(&self.family, self.grid)?;
        build_frontal(&spec, &self.tolerances.resolve()).map_err(domain)
    }
}

/// Writes to `--out` or, without it, to `stdout`.
fn emit(out: Option<&Path>, stdout: &mut dyn Write, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, content).map_err(|e| domain(format!("{}: {}", path.display(), e))),
        None => stdout.write_all(content.as_bytes()).map_err(domain),
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn require<T>(value: Option<T>, flag: &str, what: &str) -> Result<T, CliError> {
    value.ok_or_else(|| usage(format!("{} requires {}", what, flag)))
}

/// Runs a parsed command, writing primary output to `stdout` unless `--out`
/// is given. Diagnostics go to `stderr`.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Envelope { family, branch, output } => run_envelope(family, *branch, output, stdout),
        Command::Classify { family, output } => {
            if matches!(output.format, Some(Format::Csv | Format::Svg)) {
                return Err(usage("classify writes JSON only"));
            }
            let report = family.family()?.classify();
            emit(output.out.as_deref(), stdout, &to_json(&report))
        }
        Command::Assoc { family, kind, params, output } => run_assoc(family, *kind, params, output, stdout),
        Command::Verify { family, grid, tolerances, relation, suite, count, seed, tol, params, output } => {
            if matches!(output.format, Some(Format::Csv | Format::Svg)) {
                return Err(usage("verify writes JSON only"));
            }
            if suite.is_some() {
                let report = random::run_suite(*count, *seed);
                emit(output.out.as_deref(), stdout, &to_json(&report))?;
                return if report.pass {
                    Ok(())
                } else {
                    let failed: Vec<String> =
                        report.fixtures.iter().filter(|f| !f.pass).map(|f| f.seed.to_string()).collect();
                    Err(CliError::Failed(format!("seeds {}", failed.join(", "))))
                };
            }
            let relation: Relation =
                require(relation.as_deref(), "--relation or --suite", "verify")?.parse().map_err(|e| usage(format!("{}", e)))?;
            let path = require(family.as_deref(), "--family", "verify --relation")?;
            let spec = load_spec(path, *grid)?;
            let report = run_relation(&spec, &tolerances.resolve(), relation, params, *tol)?;
            emit(output.out.as_deref(), stdout, &to_json(&report))?;
            if let Some(note) = &report.note {
                let _ = writeln!(stderr, "note: {}", note);
            }
            if report.pass {
                Ok(())
            } else {
                Err(CliError::Failed(format!("{} residual {:e} > {:e}", report.relation, report.max_residual, report.tolerance)))
            }
        }
        Command::Mohr { stress, output } => run_mohr(stress, output, stdout, stderr),
        Command::Render { family, stride, out } => {
            let fam = family.family()?;
            let k = match stride {
                Some(0) => return Err(usage("--stride must be positive")),
                Some(k) => *k,
                None => render::default_stride(fam.len()),
            };
            let scene = with_envelopes(render::family_scene(&fam, k, title_of(&family.family)), &fam)?;
            emit(out.as_deref(), stdout, &render::render_svg(&scene).map_err(domain)?)
        }
    }
}

fn title_of(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

/// Adds each distinct envelope branch as a thick polyline.
fn with_envelopes(scene: Scene, family: &CircleFamily) -> Result<Scene, CliError> {
    let (plus, minus) = family.envelopes().map_err(domain)?;
    let scene = scene.polyline(plus.f.clone(), Style::Thick);
    Ok(if family.classify().variant == Classification::Unique {
        scene
    } else {
        scene.polyline(minus.f.clone(), Style::Thick)
    })
}

fn branch_path(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = out.extension().map(|e| e.to_string_lossy().into_owned()).unwrap_or_else(|| "csv".into());
    out.with_file_name(format!("{}_{}.{}", stem, suffix, ext))
}

fn run_envelope(args: &FamilyArgs, branch: Branch, output: &OutputArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let format = output.format.unwrap_or(Format::Csv);
    if format == Format::Json {
        return Err(usage("envelope writes csv or svg"));
    }
    let family = args.family()?;
    let (plus, minus) = family.envelopes().map_err(domain)?;
    let pick: Vec<(&str, &EnvelopeBranch)> = match branch {
        Branch::Plus => vec![("plus", &plus)],
        Branch::Minus => vec![("minus", &minus)],
        Branch::Both => vec![("plus", &plus), ("minus", &minus)],
    };
    if format == Format::Svg {
        let scene = render::family_scene(&family, render::default_stride(family.len()), title_of(&args.family));
        let scene = pick.iter().fold(scene, |s, (_, b)| s.polyline(b.f.clone(), Style::Thick));
        return emit(output.out.as_deref(), stdout, &render::render_svg(&scene).map_err(domain)?);
    }
    match (branch, output.out.as_deref()) {
        (Branch::Both, None) => Err(usage("--branch both requires --out (writes <stem>_plus.csv and <stem>_minus.csv)")),
        (Branch::Both, Some(out)) => {
            for (name, b) in pick {
                emit(Some(&branch_path(out, name)), stdout, &b.to_csv())?;
            }
            Ok(())
        }
        (_, out) => emit(out, stdout, &pick[0].1.to_csv()),
    }
}

fn run_assoc(args: &FamilyArgs, kind: Kind, p: &ParamArgs, output: &OutputArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let format = output.format.unwrap_or(Format::Csv);
    if format == Format::Json {
        return Err(usage("assoc writes csv or svg"));
    }
    let what = format!("assoc --kind {:?}", kind).to_lowercase();
    let phi = || require(p.phi, "--phi", &what).map(Angle);
    let point = || require(p.point, "--point", &what).map(BasePoint);
    let fd = args.frontal()?;
    let curve: SampledCurve = match kind {
        Kind::Evolute => assoc::evolute(&fd).map_err(domain)?,
        Kind::Involute => assoc::involute(&fd, p.t0.unwrap_or(fd.grid.a)).map_err(domain)?.curve,
        Kind::Evolutoid => assoc::evolutoid(&fd, phi()?).map_err(domain)?,
        Kind::Pedal => assoc::pedal(&fd, point()?),
        Kind::Contrapedal => assoc::contrapedal(&fd, point()?),
        Kind::Pedaloid => assoc::pedaloid(&fd, point()?, phi()?),
    };
    match format {
        Format::Svg => {
            let scene = Scene::new(what)
                .polyline(fd.gamma.clone(), Style::Dashed)
                .polyline(curve.points.clone(), Style::Thick);
            let scene = match p.point {
                Some(pt) => scene.marker(pt),
                None => scene,
            };
            emit(output.out.as_deref(), stdout, &render::render_svg(&scene).map_err(domain)?)
        }
        _ => emit(output.out.as_deref(), stdout, &curve.to_csv()),
    }
}

fn run_relation(
    spec: &FamilySpec,
    tol: &Tolerances,
    relation: Relation,
    p: &ParamArgs,
    residual_tol: Option<f64>,
) -> Result<VerificationReport, CliError> {
    let eps = residual_tol.unwrap_or_else(|| relation.default_tolerance());
    let what = format!("relation {}", relation);
    let phi = || require(p.phi, "--phi", &what).map(Angle);
    let point = || require(p.point, "--point", &what).map(BasePoint);
    if relation == Relation::PedaloidOfEvolutoid {
        let fd = build_frontal(spec, tol).map_err(domain)?;
        return verify::verify_prop44(&fd, point()?, phi()?, eps).map_err(domain);
    }
    let family = CircleFamily::from_spec(spec, tol).map_err(domain)?;
    let report = match relation {
        Relation::EnvelopeDefinition => {
            let (plus, minus) = family.envelopes().map_err(domain)?;
            let a = verify::verify_envelope_def(&family, &plus.f, eps).map_err(domain)?;
            a.merge(verify::verify_envelope_def(&family, &minus.f, eps).map_err(domain)?)
        }
        Relation::EnvelopeFrame => {
            let (plus, minus) = family.envelopes().map_err(domain)?;
            verify::verify_envelope_frame(&plus, eps).merge(verify::verify_envelope_frame(&minus, eps))
        }
        Relation::EvoluteOfEnvelope => verify::verify_2i(&family, eps).map_err(domain)?,
        Relation::ScaledFamilyEvolutoids => verify::verify_2ii(&family, phi()?, eps).map_err(domain)?,
        Relation::MidpointFamilyContrapedal => verify::verify_2iii(&family, point()?, eps).map_err(domain)?,
        Relation::PedaloidFamilyPedaloid => verify::verify_2iv(&family, point()?, phi()?, eps).map_err(domain)?,
        Relation::PedalOfReflectedCenters => verify::verify_3(&family, eps).map_err(domain)?,
        Relation::SingularitiesAtInflections => verify::verify_prop41(&family, eps).map_err(domain)?,
        Relation::OsculatingCircle => {
            verify::verify_prop42(&family, require(p.t0, "--t0", &what)?, eps).map_err(domain)?
        }
        Relation::ConstantEnvelopeSingularities | Relation::CentersOnBisector | Relation::CentersOnLine => {
            let report = verify::verify_prop43(&family, eps).map_err(domain)?;
            if report.relation != relation {
                return Err(domain(format!("{} does not apply: the family matches {}", relation, report.relation)));
            }
            report
        }
        Relation::PedaloidOfEvolutoid => unreachable!("handled above"),
    };
    Ok(report)
}

fn run_mohr(stress: &Path, output: &OutputArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let records = mohr::load_stress_csv(stress).map_err(|e| domain(format!("{}: {}", stress.display(), e)))?;
    let circles = mohr::mohr_circles(&records);
    let line = mohr::fit_failure_line(&circles).map_err(domain)?;
    if let Some(w) = line.warning() {
        let _ = writeln!(stderr, "warning: {}", w);
    }
    match output.format.unwrap_or(Format::Json) {
        Format::Json => emit(output.out.as_deref(), stdout, &to_json(&mohr::MohrReport::new(&line, circles.len()))),
        Format::Csv => {
            let env = mohr::mohr_envelope_curve(&circles).map_err(domain)?;
            emit(output.out.as_deref(), stdout, &env.curve.to_csv())
        }
        Format::Svg => {
            // the straight line is always drawn; the curved envelope when it exists
            let env = match mohr::mohr_envelope_curve(&circles) {
                Ok(env) => Some(env),
                Err(e) => {
                    let _ = writeln!(stderr, "warning: no curved envelope: {}", e);
                    None
                }
            };
            let scene = render::mohr_scene(&circles, &line, env.as_ref().map(|e| e.curve.points.as_slice()));
            emit(output.out.as_deref(), stdout, &render::render_svg(&scene).map_err(domain)?)
        }
    }
}

/// Parses the process arguments, runs, and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    match run(&cli, &mut stdout.lock(), &mut stderr.lock()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e);
            e.exit_code()
        }
    }
}
