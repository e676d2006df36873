//! Campaign runner: every library operation behind one subcommand, with
//! reproducible seeds, JSON/CSV reports, and `key = value` config files that
//! command-line flags override.
//!
//! Exit codes: 0 success, 2 precondition error, 3 resource guard, 4 unknown
//! subcommand, 5 malformed parameter, 6 file I/O or parse failure.

mod catalog;
mod prob;
mod report;

use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use globalcube::bump;
use globalcube::cube::{self, fkg_check, random_monotone, BiasedMeasure, CubeFamily};
use globalcube::embed;
use globalcube::families::{self, PermFamily, SearchMode, UmvirateSpec};
use globalcube::fourier;
use globalcube::globalness;
use globalcube::Error as CoreError;

use prob::{GridSpec, Prob};
use report::{CheckLine, Format, Report};

const SEED_ENV: &str = "GLOBALCUBE_SEED";

#[derive(Parser)]
#[command(
    name = "globalcube",
    version,
    about = "Exact desk-scale campaigns for intersecting families and biased-cube analysis",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args)]
struct GlobalOpts {
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Report format: json (default) or csv
    #[arg(long, global = true)]
    format: Option<Format>,
    /// RNG seed; falls back to GLOBALCUBE_SEED, then 0
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Size of the parallel task pool; 1 is the reference behavior
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// `key = value` config file; flags given on the command line win
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    FourierRoundtrip(FourierRoundtripArgs),
    NoiseCheck(NoiseCheckArgs),
    FkgSuite(FkgSuiteArgs),
    Globalness(GlobalnessArgs),
    ExtractGlobal(ExtractGlobalArgs),
    LevelDAudit(LevelDAuditArgs),
    SharpProbe(SharpProbeArgs),
    SearchMax(SearchMaxArgs),
    SearchMaxCube(SearchMaxCubeArgs),
    VerifyAk(VerifyAkArgs),
    Counterexample(CounterexampleArgs),
    Stability(StabilityArgs),
    Coupling(CouplingArgs),
    HallBound(HallBoundArgs),
    Bump(BumpArgs),
    Chain(ChainArgs),
    AuditClaim52(AuditClaim52Args),
    AuditBootstrap(AuditBootstrapArgs),
    AuditProp41(AuditProp41Args),
    BasisBound(BasisBoundArgs),
    RAudit(RAuditArgs),
    ListCampaigns,
}

#[derive(Args)]
struct FourierRoundtripArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<Prob>,
    #[arg(long)]
    trials: Option<u64>,
    /// Also verify character orthonormality exhaustively (n <= 8)
    #[arg(long)]
    orthonormality: bool,
}

#[derive(Args)]
struct NoiseCheckArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    q: Option<Prob>,
    #[arg(long)]
    p: Option<Prob>,
    #[arg(long)]
    trials: Option<u64>,
    /// Additionally draw this many coupled pairs and report marginal stats
    #[arg(long)]
    samples: Option<u64>,
}

#[derive(Args)]
struct FkgSuiteArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<Prob>,
    #[arg(long)]
    pairs: Option<u64>,
    /// Check every monotone pair (n <= 4) instead of random pairs
    #[arg(long)]
    exhaustive: bool,
}

#[derive(Args)]
struct GlobalnessArgs {
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    p: Option<Prob>,
}

#[derive(Args)]
struct ExtractGlobalArgs {
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    p: Option<Prob>,
    #[arg(long)]
    g: Option<f64>,
    /// Sweep this many random monotone families instead of reading one
    #[arg(long)]
    random: Option<u64>,
    /// Dimension for the random sweep
    #[arg(long)]
    n: Option<usize>,
    /// Write the restricted family to this path
    #[arg(long)]
    save: Option<PathBuf>,
}

#[derive(Args)]
struct LevelDAuditArgs {
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    p: Option<Prob>,
    #[arg(long)]
    g: Option<f64>,
    #[arg(long = "d-max")]
    d_max: Option<usize>,
}

#[derive(Args)]
struct SharpProbeArgs {
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    p: Option<Prob>,
    #[arg(long)]
    t: Option<usize>,
    /// Second family: switches to the cross-intersection probe
    #[arg(long = "input-b")]
    input_b: Option<PathBuf>,
    #[arg(long)]
    g: Option<f64>,
    #[arg(long)]
    c3: Option<f64>,
}

#[derive(Args)]
struct SearchMaxArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    /// single or cross
    #[arg(long)]
    mode: Option<String>,
}

#[derive(Args)]
struct SearchMaxCubeArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    p: Option<Prob>,
}

#[derive(Args)]
struct VerifyAkArgs {
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    p: Option<Prob>,
    /// Sweep t <= t-max, r <= r-max and compare against 0.85^t
    #[arg(long)]
    sweep: bool,
    #[arg(long = "t-max")]
    t_max: Option<usize>,
    #[arg(long = "r-max")]
    r_max: Option<usize>,
}

#[derive(Args)]
struct CounterexampleArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    save: Option<PathBuf>,
}

#[derive(Args)]
struct StabilityArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long = "save-a")]
    save_a: Option<PathBuf>,
    #[arg(long = "save-b")]
    save_b: Option<PathBuf>,
}

#[derive(Args)]
struct CouplingArgs {
    #[arg(long)]
    n: Option<usize>,
    /// Defaults to min(1, 10 ln(n)/n), the regime of the closure bound
    #[arg(long)]
    p: Option<Prob>,
    #[arg(long)]
    samples: Option<u64>,
    /// Embed this word (space-separated letters) and report its matrix
    #[arg(long)]
    word: Option<String>,
    /// Verify embedding fidelity exhaustively over S_n for this n (<= 5)
    #[arg(long)]
    fidelity: Option<usize>,
}

#[derive(Args)]
struct HallBoundArgs {
    #[arg(long)]
    n: Option<usize>,
    /// Defaults to min(1, 10 ln(n)/n)
    #[arg(long)]
    p: Option<Prob>,
    /// auto (exact when n <= 3), exact, or mc
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    samples: Option<u64>,
    /// Report Hall membership of one matrix from a bitmat file
    #[arg(long)]
    matrix: Option<PathBuf>,
}

#[derive(Args)]
struct BumpArgs {
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct ChainArgs {
    #[arg(long = "input-a")]
    input_a: Option<PathBuf>,
    #[arg(long = "input-b")]
    input_b: Option<PathBuf>,
    /// Use the umvirate `i:j,i:j,...` on A's ground set as family B
    #[arg(long = "umvirate-b")]
    umvirate_b: Option<String>,
    #[arg(long)]
    t: Option<usize>,
}

#[derive(Args)]
struct AuditClaim52Args {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    c: Option<Prob>,
    #[arg(long)]
    grid: Option<GridSpec>,
}

#[derive(Args)]
struct AuditBootstrapArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    grid: Option<GridSpec>,
}

#[derive(Args)]
struct AuditProp41Args {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    c: Option<Prob>,
    #[arg(long)]
    g: Option<f64>,
}

#[derive(Args)]
struct BasisBoundArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
}

#[derive(Args)]
struct RAuditArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    c0: Option<usize>,
    #[arg(long)]
    grid: Option<GridSpec>,
}

/// CLI-level failure with its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn param(msg: impl Into<String>) -> Self {
        Failure {
            code: 5,
            message: msg.into(),
        }
    }

    fn io(msg: impl Into<String>) -> Self {
        Failure {
            code: 6,
            message: msg.into(),
        }
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        let code = match &e {
            CoreError::ResourceGuard { .. } => 3,
            CoreError::Parse { .. } | CoreError::Io(_) => 6,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// Parameter resolution: command line first, then the config file, then the
/// default. Every resolved value is echoed into the report.
struct Ctx {
    cfg: BTreeMap<String, String>,
    echo: BTreeMap<String, String>,
    seed: u64,
}

impl Ctx {
    fn resolve<T: FromStr + ToString>(
        &mut self,
        key: &str,
        cli: Option<T>,
        default: Option<T>,
    ) -> Result<T, Failure>
    where
        T::Err: std::fmt::Display,
    {
        let value = match cli {
            Some(v) => v,
            None => match self.cfg.get(key) {
                Some(raw) => raw
                    .parse::<T>()
                    .map_err(|e| Failure::param(format!("config key `{key}`: {e}")))?,
                None => default
                    .ok_or_else(|| Failure::param(format!("missing required parameter --{key}")))?,
            },
        };
        self.echo.insert(key.to_string(), value.to_string());
        Ok(value)
    }

    fn resolve_opt<T: FromStr + ToString>(
        &mut self,
        key: &str,
        cli: Option<T>,
    ) -> Result<Option<T>, Failure>
    where
        T::Err: std::fmt::Display,
    {
        let value = match cli {
            Some(v) => Some(v),
            None => match self.cfg.get(key) {
                Some(raw) => Some(
                    raw.parse::<T>()
                        .map_err(|e| Failure::param(format!("config key `{key}`: {e}")))?,
                ),
                None => None,
            },
        };
        if let Some(v) = &value {
            self.echo.insert(key.to_string(), v.to_string());
        }
        Ok(value)
    }

    fn resolve_path(&mut self, key: &str, cli: Option<PathBuf>) -> Result<PathBuf, Failure> {
        self.resolve_path_opt(key, cli)?
            .ok_or_else(|| Failure::param(format!("missing required parameter --{key}")))
    }

    fn resolve_path_opt(
        &mut self,
        key: &str,
        cli: Option<PathBuf>,
    ) -> Result<Option<PathBuf>, Failure> {
        let value = match cli {
            Some(v) => Some(v),
            None => self.cfg.get(key).map(PathBuf::from),
        };
        if let Some(v) = &value {
            self.echo
                .insert(key.to_string(), v.to_string_lossy().into_owned());
        }
        Ok(value)
    }

    fn flag(&mut self, key: &str, cli: bool) -> bool {
        let v = cli
            || self
                .cfg
                .get(key)
                .map(|raw| raw == "true" || raw == "1")
                .unwrap_or(false);
        if v {
            self.echo.insert(key.to_string(), "true".to_string());
        }
        v
    }
}

fn parse_config(path: &Path) -> Result<BTreeMap<String, String>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::io(format!("config {}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Failure::io(format!(
                "config {} line {}: expected `key = value`",
                path.display(),
                idx + 1
            ))
        })?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn read_cube(path: &Path) -> Result<CubeFamily, Failure> {
    let file = File::open(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
    cube::read_cube_file(&mut BufReader::new(file)).map_err(Failure::from)
}

fn read_perm(path: &Path) -> Result<PermFamily, Failure> {
    let file = File::open(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
    families::read_perm_file(&mut BufReader::new(file)).map_err(Failure::from)
}

fn save_perm(path: &Path, fam: &PermFamily) -> Result<(), Failure> {
    let mut file = File::create(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
    families::write_perm_file(fam, &mut file).map_err(Failure::from)
}

fn rational_str(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = e.print();
                    std::process::exit(0);
                }
                ErrorKind::InvalidSubcommand | ErrorKind::MissingSubcommand => 4,
                _ => 5,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };

    let seed = cli.global.seed.unwrap_or_else(|| {
        std::env::var(SEED_ENV)
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(0)
    });
    if let Some(workers) = cli.global.workers {
        if workers == 0 {
            eprintln!("error: --workers must be positive");
            std::process::exit(5);
        }
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global();
    }
    let cfg = match &cli.global.config {
        Some(path) => match parse_config(path) {
            Ok(map) => map,
            Err(f) => {
                eprintln!("error: {}", f.message);
                std::process::exit(f.code);
            }
        },
        None => BTreeMap::new(),
    };
    let mut ctx = Ctx {
        cfg,
        echo: BTreeMap::new(),
        seed,
    };
    ctx.echo.insert("seed".to_string(), seed.to_string());

    let start = Instant::now();
    let command_name = command_name(&cli.cmd);
    let outcome = dispatch(cli.cmd, &mut ctx);
    match outcome {
        Ok((payload, checks)) => {
            let mut report = Report::new(command_name, ctx.echo, payload).with_checks(checks);
            report.wall_clock_ms = start.elapsed().as_millis();
            let format = cli.global.format.unwrap_or(Format::Json);
            if let Err(e) = report.emit(format, cli.global.output.as_deref()) {
                eprintln!("error: writing report: {e}");
                std::process::exit(6);
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            std::process::exit(f.code);
        }
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::FourierRoundtrip(_) => "fourier-roundtrip",
        Command::NoiseCheck(_) => "noise-check",
        Command::FkgSuite(_) => "fkg-suite",
        Command::Globalness(_) => "globalness",
        Command::ExtractGlobal(_) => "extract-global",
        Command::LevelDAudit(_) => "level-d-audit",
        Command::SharpProbe(_) => "sharp-probe",
        Command::SearchMax(_) => "search-max",
        Command::SearchMaxCube(_) => "search-max-cube",
        Command::VerifyAk(_) => "verify-ak",
        Command::Counterexample(_) => "counterexample",
        Command::Stability(_) => "stability",
        Command::Coupling(_) => "coupling",
        Command::HallBound(_) => "hall-bound",
        Command::Bump(_) => "bump",
        Command::Chain(_) => "chain",
        Command::AuditClaim52(_) => "audit-claim52",
        Command::AuditBootstrap(_) => "audit-bootstrap",
        Command::AuditProp41(_) => "audit-prop41",
        Command::BasisBound(_) => "basis-bound",
        Command::RAudit(_) => "r-audit",
        Command::ListCampaigns => "list-campaigns",
    }
}

type Outcome = Result<(Value, Vec<CheckLine>), Failure>;

fn dispatch(cmd: Command, ctx: &mut Ctx) -> Outcome {
    match cmd {
        Command::FourierRoundtrip(a) => run_fourier_roundtrip(a, ctx),
        Command::NoiseCheck(a) => run_noise_check(a, ctx),
        Command::FkgSuite(a) => run_fkg_suite(a, ctx),
        Command::Globalness(a) => run_globalness(a, ctx),
        Command::ExtractGlobal(a) => run_extract_global(a, ctx),
        Command::LevelDAudit(a) => run_level_d_audit(a, ctx),
        Command::SharpProbe(a) => run_sharp_probe(a, ctx),
        Command::SearchMax(a) => run_search_max(a, ctx),
        Command::SearchMaxCube(a) => run_search_max_cube(a, ctx),
        Command::VerifyAk(a) => run_verify_ak(a, ctx),
        Command::Counterexample(a) => run_counterexample(a, ctx),
        Command::Stability(a) => run_stability(a, ctx),
        Command::Coupling(a) => run_coupling(a, ctx),
        Command::HallBound(a) => run_hall_bound(a, ctx),
        Command::Bump(a) => run_bump(a, ctx),
        Command::Chain(a) => run_chain(a, ctx),
        Command::AuditClaim52(a) => run_audit_claim52(a, ctx),
        Command::AuditBootstrap(a) => run_audit_bootstrap(a, ctx),
        Command::AuditProp41(a) => run_audit_prop41(a, ctx),
        Command::BasisBound(a) => run_basis_bound(a, ctx),
        Command::RAudit(a) => run_r_audit(a, ctx),
        Command::ListCampaigns => run_list_campaigns(),
    }
}

fn run_fourier_roundtrip(a: FourierRoundtripArgs, ctx: &mut Ctx) -> Outcome {
    let n = ctx.resolve("n", a.n, None)?;
    let p = ctx.resolve("p", a.p, Some("0.25".parse().unwrap()))?;
    let trials = ctx.resolve("trials", a.trials, Some(100))?;
    let ortho = ctx.flag("orthonormality", a.orthonormality);
    let m = BiasedMeasure::new(p.float)?;
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut max_roundtrip = 0.0f64;
    let mut max_parseval = 0.0f64;
    for _ in 0..trials {
        let f = fourier::RealFunctionOnCube::random(n, &mut rng)?;
        let c = fourier::transform(&f, &m)?;
        let back = fourier::inverse_transform(&c)?;
        max_roundtrip = max_roundtrip.max(f.max_abs_diff(&back)?);
        max_parseval = max_parseval.max((c.total_weight() - f.second_moment(&m)).abs());
    }
    let mut payload = json!({
        "n": n,
        "trials": trials,
        "max_roundtrip_error": max_roundtrip,
        "max_parseval_error": max_parseval,
    });
    let mut checks = vec![
        CheckLine {
            name: "roundtrip-1e-10".to_string(),
            pass: max_roundtrip <= 1e-10,
        },
        CheckLine {
            name: "parseval-1e-10".to_string(),
            pass: max_parseval <= 1e-10,
        },
    ];
    if ortho {
        if n > 8 {
            return Err(Failure::from(CoreError::ResourceGuard {
                what: "orthonormality dimension",
                cap: 8,
                requested: n,
            }));
        }
        let mut worst = 0.0f64;
        let mut weights = vec![0.0f64; 1 << n];
        for x in 0..1u32 << n {
            let ones = x.count_ones() as i32;
            weights[x as usize] = p.float.powi(ones) * (1.0 - p.float).powi(n as i32 - ones);
        }
        for s in 0..1u32 << n {
            for t in s..1u32 << n {
                let mut inner = 0.0;
                for x in 0..1u32 << n {
                    inner += fourier::character(p.float, s, x)
                        * fourier::character(p.float, t, x)
                        * weights[x as usize];
                }
                let expect = if s == t { 1.0 } else { 0.0 };
                worst = worst.max((inner - expect).abs());
            }
        }
        payload["max_orthonormality_error"] = json!(worst);
        checks.push(CheckLine {
            name: "orthonormality-1e-12".to_string(),
            pass: worst <= 1e-12,
        });
    }
    Ok((payload, checks))
}

fn run_noise_check(a: NoiseCheckArgs, ctx: &mut Ctx) -> Outcome {
    let n = ctx.resolve("n", a.n, None)?;
    let q = ctx.resolve("q", a.q, None)?;
    let p = ctx.resolve("p", a.p, None)?;
    let trials = ctx.resolve("trials", a.trials, Some(50))?;
    let samples = ctx.resolve_opt("samples", a.samples)?;
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mq = BiasedMeasure::new(q.float)?;
    let mut max_diff = 0.0f64;
    for _ in 0..trials {
        let f = fourier::RealFunctionOnCube::random(n, &mut rng)?;
        let via_fourier = fourier::inverse_transform(&fourier::one_sided_noise(
            &fourier::transform(&f, &mq)?,
            p.float,
        )?)?;
        let via_coupling = fourier::coupling_expectation(&f, q.float, p.float)?;
        max_diff = max_diff.max(via_fourier.max_abs_diff(&via_coupling)?);
    }
    let mut payload = json!({
        "n": n,
        "trials": trials,
        "rho": fourier::NoiseRho::new(q.float, p.float)?.rho,
        "max_route_difference": max_diff,
    });
    if let Some(count) = samples {
        let mut ones_x = 0u64;
        let mut ones_y = 0u64;
        let mut dominated = true;
        for _ in 0..count {
            let (x, y) = fourier::sample_coupled_pair(n, q.float, p.float, &mut rng)?;
            ones_x += x.weight() as u64;
            ones_y += y.weight() as u64;
            dominated &= x.bits() & !y.bits() == 0;
        }
        let denom = (count * n as u64) as f64;
        payload["sample_mean_x"] = json!(ones_x as f64 / denom);
        payload["sample_mean_y"] = json!(ones_y as f64 / denom);
        payload["all_pairs_dominated"] = json!(dominated);
    }
    let checks = vec![CheckLine {
        name: "routes-agree-1e-10".to_string(),
        pass: max_diff <= 1e-10,
    }];
    Ok((payload, checks))
}

fn run_fkg_suite(a: FkgSuiteArgs, ctx: &mut Ctx) -> Outcome {
    let n = ctx.resolve("n", a.n, None)?;
    let p = ctx.resolve("p", a.p, Some("0.3".parse().unwrap()))?;
    let exhaustive = ctx.flag("exhaustive", a.exhaustive);
    let m = BiasedMeasure::new(p.float)?;
    let mut violations = 0u64;
    let mut min_slack = f64::INFINITY;
    let mut pairs_checked = 0u64;
    if exhaustive {
        if n > 4 {
            return Err(Failure::from(CoreError::ResourceGuard {
                what: "exhaustive FKG dimension",
                cap: 4,
                requested: n,
            }));
        }
        let monotone: Vec<CubeFamily> = (0u64..1 << (1usize << n))
            .filter_map(|subset| {
                let members: Vec<u32> = (0..1u32 << n).filter(|&x| subset >> x & 1 == 1).collect();
                let fam = CubeFamily::new(n, members).unwrap();
                fam.is_monotone().then_some(fam)
            })
            .collect();
        for f in &monotone {
            for g in &monotone {
                let out = fkg_check(f, g, &m)?;
                pairs_checked += 1;
                min_slack = min_slack.min(out.lhs - out.rhs);
                if !out.holds {
                    violations += 1;
                }
            }
        }
    } else {
        let pairs = ctx.resolve("pairs", a.pairs, Some(1000))?;
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
        for i in 0..pairs {
            let f = random_monotone(n, 1 + (i % 7) as usize, &mut rng)?;
            let g = random_monotone(n, 1 + ((i / 7) % 7) as usize, &mut rng)?;
            let out = fkg_check(&f, &g, &m)?;
            pairs_checked += 1;
            min_slack = min_slack.min(out.lhs - out.rhs);
            if !out.holds {
                violations += 1;
            }
        }
    }
    let payload = json!({
        "n": n,
        "pairs_checked": pairs_checked,
        "violations": violations,
        "min_slack": min_slack,
    });
    let checks = vec![CheckLine {
        name: "no-fkg-violation".to_string(),
        pass: violations == 0,
    }];
    Ok((payload, checks))
}

fn run_globalness(a: GlobalnessArgs, ctx: &mut Ctx) -> Outcome {
    let input = ctx.resolve_path("input", a.input)?;
    let p = ctx.resolve("p", a.p, None)?;
    let fam = read_cube(&input)?;
    let m = BiasedMeasure::new(p.float)?;
    let cert = globalness::certify_globalness(&fam, &m)?;
    let payload = json!({
        "n": fam.dim(),
        "family_size": fam.len(),
        "mu": cert.mu,
        "g_min": cert.g_min,
        "witness": cert.witness.to_string(),
        "ratios_by_size": cert.ratios,
    });
    Ok((payload, Vec::new()))
}

fn run_extract_global(a: ExtractGlobalArgs, ctx: &mut Ctx) -> Outcome {
    let p = ctx.resolve("p", a.p, None)?;
    let g = ctx.resolve("g", a.g, None)?;
    let m = BiasedMeasure::new(p.float)?;
    if let Some(count) = ctx.resolve_opt("random", a.random)? {
        // random sweep: every extraction must re-certify at the same g
        let n = ctx.resolve("n", a.n, None)?;
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
        let mut done = 0u64;
        let mut bound_failures = 0u64;
        let mut recert_failures = 0u64;
        while done < count {
            let fam = random_monotone(n, 1 + (done % 5) as usize, &mut rng)?;
            if fam.is_empty() {
                continue;
            }
            let out = globalness::extract_global_restriction(&fam, g, &m)?;
            let s = out.restriction.size() as i32;
            if out.restricted_measure / g.powi(s) < out.base_measure {
                bound_failures += 1;
            }
            if out.restriction.size() < n {
                let cert = globalness::certify_globalness(&out.family, &m)?;
                if cert.g_min > g * (1.0 + 1e-9) {
                    recert_failures += 1;
                }
            }
            done += 1;
        }
        let payload = json!({
            "n": n,
            "families": done,
            "lower_bound_failures": bound_failures,
            "recertification_failures": recert_failures,
        });
        let checks = vec![
            CheckLine {
                name: "extraction-lower-bound".to_string(),
                pass: bound_failures == 0,
            },
            CheckLine {
                name: "recertifies-g-global".to_string(),
                pass: recert_failures == 0,
            },
        ];
        return Ok((payload, checks));
    }
    let input = ctx.resolve_path("input", a.input)?;
    let fam = read_cube(&input)?;
    let out = globalness::extract_global_restriction(&fam, g, &m)?;
    if let Some(save) = ctx.resolve_path_opt("save", a.save)? {
        let mut file =
            File::create(&save).map_err(|e| Failure::io(format!("{}: {e}", save.display())))?;
        cube::write_cube_file(&out.family, &mut file)?;
    }
    let s = out.restriction.size() as i32;
    let payload = json!({
        "restriction": out.restriction.to_string(),
        "restriction_size": out.restriction.size(),
        "base_measure": out.base_measure,
        "restricted_measure": out.restricted_measure,
        "restricted_size": out.family.len(),
        "lower_bound_g_pow_s_times_mu": out.base_measure * g.powi(s),
    });
    let checks = vec![CheckLine {
        name: "measure-grew-by-g-pow-s".to_string(),
        pass: out.restricted_measure / g.powi(s) >= out.base_measure,
    }];
    Ok((payload, checks))
}

fn run_level_d_audit(a: LevelDAuditArgs, ctx: &mut Ctx) -> Outcome {
    let input = ctx.resolve_path("input", a.input)?;
    let p = ctx.resolve("p", a.p, None)?;
    let g = ctx.resolve("g", a.g, None)?;
    let d_max = ctx.resolve("d-max", a.d_max, None)?;
    let fam = read_cube(&input)?;
    let m = BiasedMeasure::new(p.float)?;
    let rows = globalness::level_d_audit(&fam, &m, g, d_max)?;
    let payload = json!({
        "summary": {
            "n": fam.dim(),
            "p": p.float,
            "g": g,
            "mu": fam.measure(&m),
        },
        "rows": rows.iter().map(|r| json!({
            "d": r.d,
            "lhs": r.lhs,
            "frame": r.frame,
            "implied_c2": r.implied_c2,
        })).collect::<Vec<_>>(),
    });
    Ok((payload, Vec::new()))
}

fn run_sharp_probe(a: SharpProbeArgs, ctx: &mut Ctx) -> Outcome {
    let input = ctx.resolve_path("input", a.input)?;
    let p = ctx.resolve("p", a.p, None)?;
    let t = ctx.resolve("t", a.t, None)?;
    let fam = read_cube(&input)?;
    if let Some(second) = ctx.resolve_path_opt("input-b", a.input_b)? {
        let g = ctx.resolve("g", a.g, None)?;
        let c3 = ctx.resolve("c3", a.c3, None)?;
        let other = read_cube(&second)?;
        let out = globalness::global_cross_probe(&fam, &other, p.float, g, t, c3)?;
        let payload = json!({
            "mode": "cross",
            "mu_a": out.mu_a,
            "mu_b": out.mu_b,
            "min_measure": out.min_measure,
            "rhs_exp_bound": out.rhs,
        });
        return Ok((payload, Vec::new()));
    }
    let probe = globalness::sharp_threshold_probe(&fam, p.float, t)?;
    let payload = json!({
        "mode": "threshold",
        "mu_p": probe.mu_p,
        "mu_third": probe.mu_third,
        "lemma_rhs": probe.lemma_rhs,
        "warning": probe.warning,
    });
    Ok((payload, Vec::new()))
}

fn run_search_max(a: SearchMaxArgs, ctx: &mut Ctx) -> Outcome {
    let n = ctx.resolve("n", a.n, None)?;
    let t = ctx.resolve("t", a.t, None)?;
    let mode_str = ctx.resolve("mode", a.mode, Some("single".to_string()))?;
    let mode = match mode_str.as_str() {
        "single" => SearchMode::Single,
        "cross" => SearchMode::Cross,
        other => return Err(Failure::param(format!("mode must be single or cross, got `{other}`"))),
    };
    let result = families::max_t_intersecting(n, t, mode)?;
    let witnesses: Vec<Value> = result
        .witnesses
        .iter()
        .map(|w| match w {
            families::SearchWitness::Family(f) => json!({
                "members": f.members().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            }),
            families::SearchWitness::Pair(x, y) => json!({
                "a": x.members().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                "b": y.members().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            }),
        })
        .collect();
    let payload = json!({
        "n": n,
        "t": t,
        "mode": mode_str,
        "max_size": result.max_size,
        "witness_count": result.witness_count,
        "all_umvirates": result.all_umvirates,
        "witnesses": witnesses,
    });
    Ok((payload, Vec::new()))
}

fn run_search_max_cube(a: SearchMaxCubeArgs, ctx: &mut Ctx) -> Outcome {
    let n = ctx.resolve("n", a.n, None)?;
    let t = ctx.resolve("t", a.t, None)?;
    let p = ctx.resolve("p", a.p, None)?;
    let mut payload = json!({ "n": n, "t": t });
    match &p.exact {
        Some(exact) => {
            let (best, witness) = families::max_t_intersecting_cube_exact(n, t, exact)?;
            payload["max_measure"] = json!(best.to_f64());
            payload["max_measure_exact"] = json!(rational_str(&best));
            payload["witness_masks"] =
                json!(witness.members().iter().map(|m| format!("{m:x}")).collect::<Vec<_>>());
        }
        None => {
            let (best, witness) = families::max_t_intersecting_cube(n, t, p.float)?;
            payload["max_measure"] = json!(best);
            payload["witness_masks"] =
                json!(witness.members().iter().map(|m| format!("{m:x}")).collect::<Vec<_>>());
        }
    }
    Ok((payload, Vec::new()))
}

fn run_verify_ak(a: VerifyAkArgs, ctx: &mut Ctx) -> Outcome {
    let p = ctx.resolve("p", a.p, Some("1/3".parse().unwrap()))?;
    if ctx.flag("sweep", a.sweep) {
        let t_max = ctx.resolve("t-max", a.t_max, Some(10))?;
        let r_max = ctx.resolve("r-max", a.r_max, Some(5))?;
        let mut rows = Vec::new();
        let mut all_below = true;
        for t in 1..=t_max {
            let bound = 0.85f64.powi(t as i32);
            for r in 0..=r_max {
                let out = families::ak_bound_check(t, r, p.float)?;
                let below = out.measure <= bound + 1e-12;
                all_below &= below;
                rows.push(json!({
                    "t": t,
                    "r": r,
                    "measure": out.measure,
                    "bound_085_pow_t": bound,
                    "within_regime": out.within_regime,
                    "below_bound": below,
                }));
            }
        }
        let payload = json!({ "rows": rows });
        let checks = vec![CheckLine {
            name: "max-measure-below-085-pow-t".to_string(),
            pass: all_below,
        }];
        return Ok((payload, checks));
    }
    let t = ctx.resolve("t", a.t, Some(1))?;
    let r = ctx.resolve("r", a.r, Some(1))?;
    let out = families::ak_bound_check(t, r, p.float)?;
    let mut payload = json!({
        "t": t,
        "r": r,
        "measure": out.measure,
        "within_regime": out.within_regime,
    });
    if let Some(exact) = &p.exact {
        payload["measure_exact"] = json!(rational_str(&families::ak_measure_exact(t, r, exact)?));
    }
    // materialize the family on the smallest cube to re-check t-intersection
    let n = t + 2 * r;
    if n <= cube::MAX_EXACT_DIM {
        let fam = families::ak_family(t, r, n)?;
        payload["t_intersecting"] = json!(families::is_t_intersecting_cube(&fam, t));
    }
    Ok((payload, Vec::new()))
}

fn run_counterexample(a: CounterexampleArgs, ctx: &mut Ctx) -> Outcome {
    let n = ctx.resolve("n", a.n, None)?;
    let t = ctx.resolve("t", a.t, None)?;
    let report = families::counterexample_family(n, t)?;
    if let Some(path) = ctx.resolve_path_opt("save", a.save)? {
        save_perm(&path, &report.family)?;
    }
    let payload = json!({
        "n": n,
        "t": t,
        "size": report.size,
        "formula": report.formula,
        "umvirate_size": report.umvirate_size,
        "t_intersecting": report.t_intersecting,
        "beats_umvirate": report.size > report.umvirate_size,
    });
    let checks = vec![
        CheckLine {
            name: "size-equals-formula".to_string(),
            pass: report.size == report.formula,
        },
        CheckLine {
            name: "t-intersecting".to_string(),
            pass: report.t_intersecting,
        },
    ];
    Ok((payload, checks))
}

fn run_stability(a: StabilityArgs, ctx: &mut Ctx) -> Outcome {
    let n = ctx.resolve("n", a.n, None)?;
    let t = ctx.resolve("t", a.t, None)?;
    let ex = families::stability_family(n, t)?;
    if let Some(path) = ctx.resolve_path_opt("save-a", a.save_a)? {
        save_perm(&path, &ex.a)?;
    }
    if let Some(path) = ctx.resolve_path_opt("save-b", a.save_b)? {
        save_perm(&path, &ex.b)?;
    }
    let target = 1.0 - (-1.0f64).exp();
    let payload = json!({
        "n": n,
        "t": t,
        "size_a": ex.a.len(),
        "size_b": ex.b.len(),
        "ratio": ex.ratio,
        "one_minus_inv_e": target,
        "cross_checked": ex.cross_checked,
    });
    let checks = vec![CheckLine {
        name: "cross-t-intersecting".to_string(),
        pass: ex.cross_checked,
    }];
    Ok((payload, checks))
}

fn run_coupling(a: CouplingArgs, ctx: &mut Ctx) -> Outcome {
    let n = ctx.resolve("n", a.n, None)?;
    let p_opt = ctx.resolve_opt("p", a.p)?;
    let (p, capped) = match p_opt {
        Some(p) => (p.float, false),
        None => {
            let raw = 10.0 * (n as f64).ln() / n as f64;
            (raw.min(1.0), raw > 1.0)
        }
    };
    ctx.echo.insert("p-effective".to_string(), p.to_string());
    let samples = ctx.resolve("samples", a.samples, Some(10_000))?;
    let report = embed::coupling_campaign(n, p, samples, ctx.seed)?;
    let factor = embed::embedding_measure_factor(n, (1.0 / n as f64).min(p))?;
    let mut payload = json!({
        "n": n,
        "p": p,
        "p_capped_at_one": capped,
        "samples": samples,
        "dominated_rate": report.dominated_rate,
        "chi_square": report.chi_square,
        "chi_square_critical": report.chi_square_critical,
        "degrees_of_freedom": report.degrees_of_freedom,
        "exact_uniform_sampler": report.exact_uniform_sampler,
        "word_point_mass_ratio": factor.point_mass_ratio,
        "word_point_mass_bound": factor.bound,
    });
    if let Some(word_text) = ctx.resolve_opt::<String>("word", a.word)? {
        let letters: Vec<u8> = word_text
            .split_whitespace()
            .map(|tok| tok.parse::<u8>().map_err(|_| Failure::param(format!("bad letter `{tok}`"))))
            .collect::<Result<_, _>>()?;
        let word = embed::WordPoint::new(letters)?;
        let matrix = embed::embed_word(&word)?;
        payload["word_weight"] = json!(matrix.weight());
        payload["word_dominates_permutation"] = json!(embed::hall_membership(&matrix));
    }
    let mut checks = Vec::new();
    if let Some(fid_n) = ctx.resolve_opt::<usize>("fidelity", a.fidelity)? {
        if fid_n > 5 {
            return Err(Failure::from(CoreError::ResourceGuard {
                what: "fidelity check degree",
                cap: 5,
                requested: fid_n,
            }));
        }
        let group = families::symmetric_group(fid_n)?;
        let mut ok = true;
        for x in group.members() {
            for y in group.members() {
                let w = embed::embed_perm(x)?.and_weight(&embed::embed_perm(y)?)?;
                if w as usize != families::agreement(x, y)? {
                    ok = false;
                }
            }
        }
        payload["fidelity_n"] = json!(fid_n);
        payload["fidelity_ok"] = json!(ok);
        checks.push(CheckLine {
            name: "embedding-preserves-agreement".to_string(),
            pass: ok,
        });
    }
    if let (Some(stat), Some(crit)) = (report.chi_square, report.chi_square_critical) {
        checks.push(CheckLine {
            name: "sigma-marginal-uniform".to_string(),
            pass: stat < crit,
        });
    }
    Ok((payload, checks))
}

fn run_hall_bound(a: HallBoundArgs, ctx: &mut Ctx) -> Outcome {
    if let Some(path) = ctx.resolve_path_opt("matrix", a.matrix)? {
        let file = File::open(&path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
        let matrix = embed::read_bitmat_file(&mut BufReader::new(file))?;
        let member = embed::hall_membership(&matrix);
        let payload = json!({
            "n": matrix.n(),
            "weight": matrix.weight(),
            "in_up_closure": member,
        });
        return Ok((payload, Vec::new()));
    }
    let n = ctx.resolve("n", a.n, None)?;
    let p_opt = ctx.resolve_opt("p", a.p)?;
    let (p_float, p_exact, capped) = match &p_opt {
        Some(p) => (p.float, p.exact.clone(), false),
        None => {
            let raw = 10.0 * (n as f64).ln() / n as f64;
            (raw.min(1.0), None, raw > 1.0)
        }
    };
    ctx.echo.insert("p-effective".to_string(), p_float.to_string());
    let mode = ctx.resolve("mode", a.mode, Some("auto".to_string()))?;
    let samples = ctx.resolve("samples", a.samples, Some(10_000))?;
    let force_exact = match mode.as_str() {
        "auto" => n <= embed::MAX_EXACT_HALL_N,
        "exact" => true,
        "mc" => false,
        other => return Err(Failure::param(format!("mode must be auto, exact or mc, got `{other}`"))),
    };
    if force_exact && n > embed::MAX_EXACT_HALL_N {
        return Err(Failure::from(CoreError::ResourceGuard {
            what: "exact Hall enumeration degree",
            cap: embed::MAX_EXACT_HALL_N,
            requested: n,
        }));
    }
    let out = if force_exact {
        embed::hall_bound(n, p_float, 0, ctx.seed)?
    } else {
        embed::hall_bound(n, p_float.min(0.9999999), samples.max(1), ctx.seed)?
    };
    let mut payload = json!({
        "n": n,
        "p": p_float,
        "p_capped_at_one": capped,
        "exact": out.exact,
        "mu_U": out.mu_u,
        "samples": out.samples,
        "wilson_low_99": out.wilson_low,
        "wilson_high_99": out.wilson_high,
        "union_bound_residual": out.union_bound_residual,
    });
    if out.exact {
        if let Some(exact_p) = &p_exact {
            let mu = embed::hall_mu_exact(n, exact_p)?;
            payload["mu_U_exact"] = json!(rational_str(&mu));
        }
    }
    let checks = vec![CheckLine {
        name: "mu-at-least-half".to_string(),
        pass: if out.exact {
            out.mu_u >= 0.5
        } else {
            out.wilson_low > 0.5
        },
    }];
    Ok((payload, checks))
}

fn run_bump(a: BumpArgs, ctx: &mut Ctx) -> Outcome {
    let input = ctx.resolve_path("input", a.input)?;
    let fam = read_perm(&input)?;
    let report = bump::density_bump(&fam)?;
    let payload = json!({
        "n": fam.n(),
        "family_size": fam.len(),
        "best_i": report.best_i,
        "best_j": report.best_j,
        "ratio": report.ratio,
        "table": report.table,
    });
    Ok((payload, Vec::new()))
}

fn run_chain(a: ChainArgs, ctx: &mut Ctx) -> Outcome {
    let input_a = ctx.resolve_path("input-a", a.input_a)?;
    let fam_a = read_perm(&input_a)?;
    let fam_b = match (
        ctx.resolve_path_opt("input-b", a.input_b)?,
        ctx.resolve_opt::<String>("umvirate-b", a.umvirate_b)?,
    ) {
        (Some(path), None) => read_perm(&path)?,
        (None, Some(spec_text)) => {
            let pairs: Vec<(usize, usize)> = spec_text
                .split(',')
                .map(|tok| {
                    let (i, j) = tok
                        .split_once(':')
                        .ok_or_else(|| Failure::param(format!("expected i:j, got `{tok}`")))?;
                    let i = i.trim().parse().map_err(|_| Failure::param("bad position"))?;
                    let j = j.trim().parse().map_err(|_| Failure::param("bad value"))?;
                    Ok::<(usize, usize), Failure>((i, j))
                })
                .collect::<Result<_, _>>()?;
            let spec = UmvirateSpec::new(pairs)?;
            families::umvirate(&spec, fam_a.n())?
        }
        (Some(_), Some(_)) => {
            return Err(Failure::param("give either --input-b or --umvirate-b, not both"))
        }
        (None, None) => return Err(Failure::param("missing --input-b or --umvirate-b")),
    };
    let t = ctx.resolve("t", a.t, None)?;
    let report = bump::restriction_chain(&fam_a, &fam_b, t)?;
    let payload = json!({
        "t": t,
        "cross_t_ok": report.cross_t_ok,
        "final_containment": report.final_containment,
        "steps": report.steps.iter().map(|s| json!({
            "i": s.i,
            "j": s.j,
            "retained_a": s.retained_a,
            "retained_b": s.retained_b,
        })).collect::<Vec<_>>(),
    });
    Ok((payload, Vec::new()))
}

fn audit_payload(audits: &[(BTreeMap<String, f64>, &bump::ConstantAudit)]) -> (Value, Vec<CheckLine>) {
    let mut rows = Vec::new();
    let mut all = true;
    for (inputs, audit) in audits {
        for check in &audit.checks {
            all &= check.holds;
            let mut row = serde_json::Map::new();
            for (k, v) in inputs {
                row.insert(k.clone(), json!(v));
            }
            row.insert("name".to_string(), json!(check.name));
            row.insert("eq".to_string(), json!(check.eq));
            row.insert("lhs".to_string(), json!(check.lhs));
            row.insert("rhs".to_string(), json!(check.rhs));
            row.insert("holds".to_string(), json!(check.holds));
            rows.push(Value::Object(row));
        }
    }
    (
        json!({ "checks": rows }),
        vec![CheckLine {
            name: "all-checks-hold".to_string(),
            pass: all,
        }],
    )
}

fn inputs_map(audit: &bump::ConstantAudit) -> BTreeMap<String, f64> {
    audit.inputs.iter().cloned().collect()
}

fn run_audit_claim52(a: AuditClaim52Args, ctx: &mut Ctx) -> Outcome {
    let a_param = ctx.resolve("a", a.a, Some(50.0))?;
    let c = ctx.resolve("c", a.c, Some("2/3".parse().unwrap()))?;
    if let Some(grid) = ctx.resolve_opt("grid", a.grid)? {
        let t_fallback = ctx.resolve("t", a.t, Some(1))?;
        let mut audits = Vec::new();
        for t in grid.values_or("t", t_fallback) {
            for n in grid.values_or("n", 0) {
                if n <= t {
                    continue;
                }
                audits.push(bump::audit_claim52(n, t, a_param, c.float)?);
            }
        }
        let rows: Vec<(BTreeMap<String, f64>, &bump::ConstantAudit)> =
            audits.iter().map(|a| (inputs_map(a), a)).collect();
        return Ok(audit_payload(&rows));
    }
    let n = ctx.resolve("n", a.n, None)?;
    let t = ctx.resolve("t", a.t, Some(1))?;
    let audit = bump::audit_claim52(n, t, a_param, c.float)?;
    let rows = vec![(inputs_map(&audit), &audit)];
    Ok(audit_payload(&rows))
}

fn run_audit_bootstrap(a: AuditBootstrapArgs, ctx: &mut Ctx) -> Outcome {
    if let Some(grid) = ctx.resolve_opt("grid", a.grid)? {
        let t_fallback = ctx.resolve("t", a.t, Some(1))?;
        let mut points = Vec::new();
        for t in grid.values_or("t", t_fallback) {
            for n in grid.values_or("n", 0) {
                if n > t {
                    points.push((n, t));
                }
            }
        }
        let audits = bump::audit_bootstrap_grid(&points)?;
        let rows: Vec<(BTreeMap<String, f64>, &bump::ConstantAudit)> =
            audits.iter().map(|a| (inputs_map(a), a)).collect();
        return Ok(audit_payload(&rows));
    }
    let n = ctx.resolve("n", a.n, None)?;
    let t = ctx.resolve("t", a.t, Some(1))?;
    let audit = bump::audit_bootstrap(n, t)?;
    let rows = vec![(inputs_map(&audit), &audit)];
    Ok(audit_payload(&rows))
}

fn run_audit_prop41(a: AuditProp41Args, ctx: &mut Ctx) -> Outcome {
    let n = ctx.resolve("n", a.n, None)?;
    let t = ctx.resolve("t", a.t, None)?;
    let k = ctx.resolve("k", a.k, Some(50))?;
    let c = ctx.resolve("c", a.c, Some("2/3".parse().unwrap()))?;
    let g = ctx.resolve("g", a.g, Some(4.0))?;
    let audit = bump::audit_prop41_cases(n, t, k, c.float, g)?;
    let rows = vec![(inputs_map(&audit), &audit)];
    let (payload, _) = audit_payload(&rows);
    // boundaries are informational, not verdicts, so no check lines here
    Ok((payload, Vec::new()))
}

fn run_basis_bound(a: BasisBoundArgs, ctx: &mut Ctx) -> Outcome {
    let n = ctx.resolve("n", a.n, None)?;
    let t = ctx.resolve("t", a.t, None)?;
    let out = bump::induction_basis_bound(n, t)?;
    let payload = json!({
        "n": n,
        "t": t,
        "exact_count": out.exact_count,
        "binom_bound": out.binom_bound,
        "two_n_bound": out.two_n_bound,
    });
    let checks = vec![CheckLine {
        name: "exact-le-binom-le-2n".to_string(),
        pass: out.exact_count <= out.binom_bound && out.binom_bound <= out.two_n_bound,
    }];
    Ok((payload, checks))
}

fn run_r_audit(a: RAuditArgs, ctx: &mut Ctx) -> Outcome {
    let c0 = ctx.resolve("c0", a.c0, Some(500))?;
    if let Some(grid) = ctx.resolve_opt("grid", a.grid)? {
        let t_fallback = ctx.resolve("t", a.t, Some(1))?;
        let mut rows = Vec::new();
        let mut all = true;
        for t in grid.values_or("t", t_fallback) {
            for n in grid.values_or("n", 0) {
                if n < c0 * t + 1 {
                    continue;
                }
                let log2_r = bump::r_of_log2(n, t, c0)?;
                let (rel_n, rel_both) = bump::r_of_monotonicity(n, t, c0)?;
                all &= rel_n && rel_both;
                rows.push(json!({
                    "n": n,
                    "t": t,
                    "log2_r": log2_r,
                    "step_n_holds": rel_n,
                    "step_both_holds": rel_both,
                }));
            }
        }
        let payload = json!({ "rows": rows });
        let checks = vec![CheckLine {
            name: "monotonicity-relations".to_string(),
            pass: all,
        }];
        return Ok((payload, checks));
    }
    let n = ctx.resolve("n", a.n, None)?;
    let t = ctx.resolve("t", a.t, Some(1))?;
    let r = bump::r_of(n, t, c0)?;
    let log2_r = bump::r_of_log2(n, t, c0)?;
    let payload = json!({
        "n": n,
        "t": t,
        "c0": c0,
        "r": if r.is_finite() { json!(r) } else { json!("overflow") },
        "log2_r": log2_r,
    });
    Ok((payload, Vec::new()))
}

fn run_list_campaigns() -> Outcome {
    let payload = serde_json::to_value(catalog::CAMPAIGNS).expect("catalog serializes");
    Ok((json!({ "campaigns": payload }), Vec::new()))
}
