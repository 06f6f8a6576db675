mod params;
mod sweep;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use bochner::curvature::{from_json, to_json, CurvatureModel};
use bochner::discrete::{icosphere, spectrum_csv, verify_form_bound};
use bochner::pinching::{classify, SearchOptions, DEFAULT_RESTARTS, DEFAULT_SEED, DEFAULT_TOL};
use bochner::weitzenboeck::diagnostics::form_diagnostics;
use bochner::weitzenboeck::{
    bound_form, bound_negative_sym, bound_positive_sym, rigidity_check, weitz_matrix, BoundCheck, BoundTag, Space,
};
use bochner::{CurvatureTensor, Error, MultiIndexBasis, TensorCoeffs};

const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_VALIDATION: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "bochner", version, about = "Curvature operators, pinching and Bochner-type bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the curvature JSON of a model tensor.
    Model(ModelArgs),
    /// Sectional/Ricci extrema, pinching verdicts and second-kind spectrum.
    Analyze(AnalyzeArgs),
    /// Pointwise Weitzenböck bounds for the requested degrees.
    Bounds(BoundsArgs),
    /// Seeded perturbation sweep around a space form.
    Sweep(SweepArgs),
    /// Lowest Hodge eigenvalues on 1-cochains of an icosphere.
    SphereSpectrum(SpectrumArgs),
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false, id = "kind")]
struct ModelKind {
    /// Space form: n=<dim> kappa=<curvature>
    #[arg(long, num_args = 1.., value_name = "KEY=VALUE")]
    constant: Option<Vec<String>>,
    /// Riemannian product of space forms: dim:kappa,dim:kappa,...
    #[arg(long, value_name = "FACTORS")]
    product: Option<String>,
    /// Complex projective space with holomorphic sectional curvature 4: m=<complex dim>
    #[arg(long, num_args = 1.., value_name = "KEY=VALUE")]
    fubini_study: Option<Vec<String>>,
    /// Perturbed space form: n=<dim> eps=<size> [seed=<u64>] [kappa=<base>]
    #[arg(long, num_args = 1.., value_name = "KEY=VALUE")]
    random: Option<Vec<String>>,
}

#[derive(Args, Debug)]
struct ModelArgs {
    #[command(flatten)]
    kind: ModelKind,
    /// Output path (stdout when omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Copy)]
struct SearchArgs {
    /// Random restarts of the sectional-curvature search.
    #[arg(long, default_value_t = DEFAULT_RESTARTS)]
    restarts: usize,
    /// Step-size tolerance of the sectional-curvature search.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Seed of the random restarts.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    search_seed: u64,
}

impl SearchArgs {
    fn options(self) -> SearchOptions {
        SearchOptions { restarts: self.restarts, tol: self.tol, seed: self.search_seed }
    }
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    /// Curvature JSON file.
    input: PathBuf,
    #[command(flatten)]
    search: SearchArgs,
    /// Also report the Einstein rigidity criterion.
    #[arg(long)]
    rigidity: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    /// Curvature JSON file.
    input: PathBuf,
    /// Symmetric tensor degrees (each at least 2).
    #[arg(long, default_value = "2")]
    p: String,
    /// Form degrees (each in 1..n).
    #[arg(long, default_value = "1")]
    q: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Print form-coefficient diagnostics to stderr.
    #[arg(long)]
    diagnostics: bool,
    #[command(flatten)]
    search: SearchArgs,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, value_enum, default_value_t = sweep::Base::Sphere)]
    base: sweep::Base,
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long, default_value_t = 0.02)]
    eps: f64,
    #[arg(long, default_value_t = 500)]
    count: usize,
    /// Seed of the first tensor; tensor i uses seed + i.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Symmetric tensor degrees checked per tensor.
    #[arg(long, default_value = "2")]
    p: String,
    /// Form degrees checked per tensor.
    #[arg(long, default_value = "1")]
    q: String,
    /// Random restarts of the sectional-curvature search.
    #[arg(long, default_value_t = 16)]
    restarts: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    search_seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    /// Subdivision level, 0..=5.
    #[arg(long, default_value_t = 3)]
    level: usize,
    /// Number of eigenvalues to print.
    #[arg(long, default_value_t = 8)]
    k: usize,
    /// Spectrum CSV path (stdout when omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Write the JSON report, including the bound check, here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Export the mesh as OFF.
    #[arg(long)]
    off: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Validation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Validation(_) => Failure::Validation(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(format!("i/o error: {e}"))
    }
}

type CmdResult = Result<u8, Failure>;

fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn to_json_text<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn load(path: &Path) -> Result<CurvatureTensor, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(from_json(&text)?)
}

fn cmd_model(args: &ModelArgs) -> CmdResult {
    let k = &args.kind;
    let model: CurvatureModel = if let Some(w) = &k.constant {
        params::constant(w)?
    } else if let Some(spec) = &k.product {
        params::product(spec)?
    } else if let Some(w) = &k.fubini_study {
        params::fubini_study(w)?
    } else if let Some(w) = &k.random {
        params::random(w)?
    } else {
        unreachable!("clap enforces one model kind")
    };
    let r = model.build()?;
    let mut text = to_json(&r);
    text.push('\n');
    emit(args.output.as_deref(), &text)?;
    Ok(0)
}

#[derive(Serialize)]
struct AnalyzeWithRigidity {
    report: bochner::pinching::PinchingReport,
    rigidity: bochner::weitzenboeck::RigidityReport,
}

fn cmd_analyze(args: &AnalyzeArgs) -> CmdResult {
    let r = load(&args.input)?;
    let rep = classify(&r, args.search.options())?;
    let text = if args.rigidity {
        let rigidity = rigidity_check(&r, &rep)?;
        to_json_text(&AnalyzeWithRigidity { report: rep, rigidity })
    } else {
        to_json_text(&rep)
    };
    emit(args.output.as_deref(), &text)?;
    Ok(0)
}

fn checks_csv(checks: &[BoundCheck]) -> String {
    let mut s = String::from("bound_tag,space,degree,n,rhs,lambda_extreme,margin,satisfied,vacuous,tolerance,inputs_digest\n");
    for c in checks {
        let space = serde_json::to_value(c.space).expect("space serializes");
        s.push_str(&format!(
            "{},{},{},{},{:.16e},{:.16e},{:.16e},{},{},{:.16e},{}\n",
            c.bound_tag.as_str(),
            space.as_str().unwrap_or_default(),
            c.degree,
            c.n,
            c.rhs,
            c.lambda_extreme,
            c.margin,
            c.satisfied,
            c.vacuous,
            c.tolerance,
            c.inputs_digest
        ));
    }
    s
}

fn log_form_diagnostics(r: &CurvatureTensor, q: usize) -> Result<(), Failure> {
    let w = weitz_matrix(r, Space::Forms, q, 1.0)?;
    let e = w.eigen();
    let basis = MultiIndexBasis::alternating(r.n(), q)?;
    let omega = TensorCoeffs::from_normalized(&basis, &e.vector(0))?;
    let d = form_diagnostics(r, &omega)?;
    eprintln!("diagnostic q={q}: {}", serde_json::to_string(&d).expect("diagnostics serialize"));
    Ok(())
}

fn cmd_bounds(args: &BoundsArgs) -> CmdResult {
    let r = load(&args.input)?;
    let ps = params::degrees(&args.p)?;
    let qs = params::degrees(&args.q)?;
    if let Some(p) = ps.iter().find(|&&p| p < 2) {
        return Err(Failure::Usage(format!("symmetric degree {p} must be at least 2")));
    }
    if let Some(q) = qs.iter().find(|&&q| q == 0 || q >= r.n()) {
        return Err(Failure::Usage(format!("form degree {q} must lie in 1..{}", r.n())));
    }
    let rep = classify(&r, args.search.options())?;
    let mut checks = Vec::new();
    for &p in &ps {
        checks.push(bound_positive_sym(&r, &rep, p, BoundTag::Eq2_7)?);
        checks.push(bound_positive_sym(&r, &rep, p, BoundTag::Eq2_9)?);
        checks.push(bound_negative_sym(&r, &rep, p)?);
    }
    for &q in &qs {
        checks.push(bound_form(&r, &rep, q)?);
        if args.diagnostics {
            log_form_diagnostics(&r, q)?;
        }
    }
    let text = match args.format {
        Format::Json => to_json_text(&checks),
        Format::Csv => checks_csv(&checks),
    };
    emit(args.output.as_deref(), &text)?;
    let violated = checks.iter().filter(|c| !c.satisfied).count();
    if violated > 0 {
        eprintln!("{violated} bound check(s) violated");
        return Ok(EXIT_VIOLATION);
    }
    Ok(0)
}

fn cmd_sweep(args: &SweepArgs) -> CmdResult {
    let cfg = sweep::SweepConfig {
        base: args.base,
        n: args.n,
        eps: args.eps,
        count: args.count,
        seed: args.seed,
        p: params::degrees(&args.p)?,
        q: params::degrees(&args.q)?,
        search: SearchOptions { restarts: args.restarts, tol: args.tol, seed: args.search_seed },
    };
    let summary = sweep::run(&cfg)?;
    emit(args.output.as_deref(), &to_json_text(&summary))?;
    if !summary.violations.is_empty() {
        eprintln!("{} violation(s) in {} tensors", summary.violations.len(), summary.count);
        return Ok(EXIT_VIOLATION);
    }
    Ok(0)
}

fn cmd_sphere_spectrum(args: &SpectrumArgs) -> CmdResult {
    let mesh = icosphere(args.level)?;
    if let Some(p) = &args.off {
        fs::write(p, mesh.to_off()).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display())))?;
    }
    let res = verify_form_bound(&mesh, args.k)?;
    emit(args.output.as_deref(), &spectrum_csv(&res.eigenvalues))?;
    if let Some(p) = &args.report {
        fs::write(p, to_json_text(&res)).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display())))?;
    }
    let c = &res.check;
    eprintln!(
        "{}: lambda_1 = {:.16e}, bound {:.16e}, margin {:.16e}, {}",
        c.bound_tag.as_str(),
        c.lambda_extreme,
        c.rhs,
        c.margin,
        if c.satisfied { "satisfied" } else { "violated" }
    );
    Ok(if c.satisfied { 0 } else { EXIT_VIOLATION })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Model(a) => cmd_model(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::SphereSpectrum(a) => cmd_sphere_spectrum(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_VALIDATION)
        }
    }
}
