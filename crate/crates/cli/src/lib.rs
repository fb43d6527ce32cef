//! Command-line front end: argument parsing, configuration layering and JSON output.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cheb_core::annulus::{compare_with_chebyshev, trace_euler};
use cheb_core::arc::{arc_algebra, quantum_coinvariants_rank, quantum_hochschild_bar, Twist};
use cheb_core::chebyshev::{
    build_theta, class_chebyshev, euler_characteristic, jw_system, khovanov_system, triangle_check, ChebyshevSystem,
};
use cheb_core::complex::{simplify, Base, Bn, ComplexJson, GradedComplex, Tl};
use cheb_core::projector::{build_qn, kills_turnbacks, p1_complex, p2_complex, projector, TruncatedProjector};
use cheb_core::tl::{admissible_sequences, central_idempotent, jones_wenzl, primitive_idempotent, set_jw_cache_dir};
use cheb_core::verify::{verify_suite, Suite, SuiteConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "cheb", version, about = "Temperley–Lieb and Bar-Natan computations")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Default)]
pub struct GlobalArgs {
    /// key=value configuration file
    #[arg(long, global = true, env = "CHEB_CONFIG")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, env = "CHEB_N_MAX")]
    pub n_max: Option<usize>,
    #[arg(long, global = true, env = "CHEB_DEPTH")]
    pub depth: Option<usize>,
    #[arg(long, global = true, env = "CHEB_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true, env = "CHEB_FORMAT")]
    pub format: Option<Format>,
    #[arg(long, global = true, env = "CHEB_PARALLELISM")]
    pub parallelism: Option<usize>,
    /// Write the result here instead of stdout
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Khovanov,
    Jw,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProjectorCheck {
    Turnbacks,
    Euler,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// The Jones–Wenzl projector p_n
    Jw {
        #[arg(long)]
        n: usize,
    },
    /// Central or primitive idempotents of TL_n
    Idempotents {
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "primitive", required_unless_present = "primitive")]
        central: bool,
        #[arg(long)]
        primitive: bool,
    },
    /// The complex V_n of a Chebyshev system
    Colored {
        #[arg(long, value_enum)]
        model: Model,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        triangle: bool,
        #[arg(long, value_enum)]
        theta_against: Option<Model>,
    },
    /// A truncated categorified projector P_n
    Projector {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        check: Option<ProjectorCheck>,
    },
    /// The four-term complex Q_n
    Qn {
        #[arg(long)]
        n: usize,
    },
    /// Delooping and Gaussian elimination of a complex read from JSON
    Simplify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Euler characteristic of the annular closure of a complex read from JSON
    TraceEuler {
        #[arg(long)]
        input: PathBuf,
        /// Report coefficients in the basis S_k
        #[arg(long)]
        chebyshev: bool,
        /// Period of the tail left out of a truncated complex; read from the file when absent
        #[arg(long)]
        period: Option<usize>,
        /// Fail unless the class is S_k (below the cutoff of a truncated complex)
        #[arg(long)]
        expect: Option<usize>,
    },
    /// The arc algebra H^n
    Arc {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        hh0: bool,
        #[arg(long)]
        hh: bool,
        #[arg(long, default_value_t = 2)]
        imax: usize,
    },
    /// Run a verification suite
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
        /// Include wall times in the report
        #[arg(long)]
        timings: bool,
    },
}

/// Resolved configuration: flags > CHEB_* environment > config file > defaults.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub n_max: usize,
    pub depth: usize,
    pub cache_dir: Option<PathBuf>,
    pub output_format: Format,
    pub parallelism: usize,
}

impl Default for Config {
    fn default() -> Self {
        Self { n_max: 6, depth: 12, cache_dir: None, output_format: Format::Json, parallelism: 1 }
    }
}

fn parse_config_file(path: &Path) -> anyhow::Result<BTreeMap<String, String>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("{}:{}: expected key=value", path.display(), i + 1);
        };
        out.insert(k.trim().replace('-', "_"), v.trim().to_string());
    }
    Ok(out)
}

impl Config {
    pub fn resolve(g: &GlobalArgs) -> anyhow::Result<Config> {
        let file = match &g.config {
            Some(p) => parse_config_file(p)?,
            None => BTreeMap::new(),
        };
        let mut c = Config::default();
        for (k, v) in &file {
            match k.as_str() {
                "n_max" => c.n_max = v.parse().with_context(|| format!("n_max = {v}"))?,
                "depth" => c.depth = v.parse().with_context(|| format!("depth = {v}"))?,
                "cache_dir" => c.cache_dir = Some(PathBuf::from(v)),
                "output_format" | "format" => {
                    c.output_format = Format::from_str(v, true).map_err(|e| anyhow::anyhow!("output_format: {e}"))?
                }
                "parallelism" => c.parallelism = v.parse().with_context(|| format!("parallelism = {v}"))?,
                other => bail!("unknown configuration key {other:?}"),
            }
        }
        if let Some(v) = g.n_max {
            c.n_max = v;
        }
        if let Some(v) = g.depth {
            c.depth = v;
        }
        if let Some(v) = &g.cache_dir {
            c.cache_dir = Some(v.clone());
        }
        if let Some(v) = g.format {
            c.output_format = v;
        }
        if let Some(v) = g.parallelism {
            c.parallelism = v;
        }
        if c.n_max < 1 {
            bail!("n_max must be at least 1");
        }
        if c.depth < 2 {
            bail!("depth must be at least 2");
        }
        if c.parallelism < 1 {
            bail!("parallelism must be at least 1");
        }
        Ok(c)
    }
}

/// Exit code and rendered output of one invocation.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parse `args` (program name first) and execute.
pub fn run_command<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let config = match Config::resolve(&cli.global) {
        Ok(c) => c,
        Err(e) => return Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {e:#}\n") },
    };
    set_jw_cache_dir(config.cache_dir.clone());
    match execute(&cli.command, &config) {
        Ok((value, text, passed)) => {
            let rendered = match config.output_format {
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&value).expect("serializable")),
                Format::Text => text.unwrap_or_else(|| format!("{}\n", serde_json::to_string_pretty(&value).expect("serializable"))),
            };
            let code = if passed { EXIT_OK } else { EXIT_FAILED };
            match &cli.global.output {
                Some(path) => match fs::write(path, &rendered) {
                    Ok(()) => Outcome { code, stdout: String::new(), stderr: String::new() },
                    Err(e) => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {}: {e}\n", path.display()) },
                },
                None => Outcome { code, stdout: rendered, stderr: String::new() },
            }
        }
        Err(e) => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {e:#}\n") },
    }
}

/// (JSON value, optional text rendering, whether every check passed)
type Rendered = (Value, Option<String>, bool);

fn to_value<T: serde::Serialize>(x: &T) -> anyhow::Result<Value> {
    Ok(serde_json::to_value(x)?)
}

fn system(model: Model, n: usize) -> anyhow::Result<ChebyshevSystem> {
    Ok(match model {
        Model::Khovanov => khovanov_system(n)?,
        Model::Jw => jw_system(n)?,
    })
}

fn projector_of(n: usize, depth: usize) -> anyhow::Result<TruncatedProjector> {
    Ok(match n {
        1 => p1_complex(),
        2 => p2_complex(depth)?,
        _ => projector(n, depth)?,
    })
}

/// A complex, or the output of `projector` holding one under "complex".
fn read_complex_json(path: &Path) -> anyhow::Result<(Value, Option<usize>)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut v: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let period = v.get("period").and_then(Value::as_u64).map(|p| p as usize);
    if let Some(c) = v.get_mut("complex") {
        return Ok((c.take(), period));
    }
    Ok((v, period))
}

fn projector_period(n: usize) -> usize {
    (2 * n).saturating_sub(2)
}

fn parse_complex<B: Base>(v: Value) -> anyhow::Result<GradedComplex<B>> {
    let j: ComplexJson<B::Obj, B::Mor> = serde_json::from_value(v)?;
    Ok(GradedComplex::from_json(j)?)
}

fn base_of(v: &Value) -> anyhow::Result<&str> {
    v.get("base").and_then(Value::as_str).context("complex JSON lacks a \"base\" field")
}

fn execute(cmd: &Command, cfg: &Config) -> anyhow::Result<Rendered> {
    match cmd {
        Command::Jw { n } => {
            if *n == 0 {
                bail!("--n must be positive");
            }
            let p = jones_wenzl(*n);
            Ok((to_value(&p)?, Some(format!("{p}\n")), true))
        }
        Command::Idempotents { n, central, .. } => {
            let mut text = String::new();
            let value = if *central {
                let mut out = Vec::new();
                for k in (n % 2..=*n).step_by(2) {
                    let p = central_idempotent(*n, k)?;
                    text.push_str(&format!("p_{{{n},{k}}} = {p}\n"));
                    out.push(json!({"k": k, "element": p}));
                }
                Value::Array(out)
            } else {
                let mut out = Vec::new();
                for e in admissible_sequences(*n) {
                    let p = primitive_idempotent(&e)?;
                    text.push_str(&format!("p_{:?} = {p}\n", e.entries()));
                    out.push(json!({"epsilon": e.entries(), "weight": e.weight(), "element": p}));
                }
                Value::Array(out)
            };
            Ok((value, Some(text), true))
        }
        Command::Colored { model, n, triangle, theta_against } => {
            let sys = system(*model, *n)?;
            let v = sys.complex(*n)?;
            let class = euler_characteristic(v)?;
            let mut out = json!({
                "model": sys.name,
                "n": n,
                "complex": v.to_json(),
                "closure_chebyshev": class_chebyshev(&class)?,
            });
            let mut passed = true;
            if *triangle {
                let r = if *n >= 2 { triangle_check(&sys, *n).map(|w| w.cone.len()) } else { Ok(0) };
                passed &= r.is_ok();
                out["triangle"] = match r {
                    Ok(len) => json!({"passed": true, "cone_generators": len}),
                    Err(e) => json!({"passed": false, "error": e.to_string()}),
                };
            }
            if let Some(other) = theta_against {
                let b = system(*other, *n)?;
                let r = build_theta(&sys, &b, *n);
                passed &= r.is_ok();
                out["theta"] = match r {
                    Ok(t) => json!({"passed": true, "entries": t.iter().map(|m| m.entries.len()).collect::<Vec<_>>()}),
                    Err(e) => json!({"passed": false, "error": e.to_string()}),
                };
            }
            Ok((out, None, passed))
        }
        Command::Projector { n, check } => {
            let p = projector_of(*n, cfg.depth)?;
            let mut out = json!({
                "n": n,
                "depth": p.depth,
                "safe_window": p.safe_window,
                "period": projector_period(*n),
                "complex": p.complex.to_json(),
            });
            let mut passed = true;
            match check {
                Some(ProjectorCheck::Turnbacks) => {
                    let reports = kills_turnbacks(&p, p.safe_window)?;
                    passed = reports.iter().all(|r| r.killed());
                    out["turnbacks"] = to_value(&reports)?;
                }
                Some(ProjectorCheck::Euler) => {
                    let t = trace_euler(&p.complex, projector_period(*n))?;
                    let m = compare_with_chebyshev(&t, *n);
                    passed = m.matches();
                    out["euler"] = json!({"trace": to_value(&t)?, "comparison": to_value(&m)?});
                }
                None => {}
            }
            Ok((out, None, passed))
        }
        Command::Qn { n } => {
            if *n < 2 {
                bail!("Q_n needs n ≥ 2");
            }
            let prev = projector_of(n - 1, cfg.depth + 4)?;
            let q = build_qn(*n, &prev, cfg.depth)?;
            let s = q.summary();
            let passed = s.d_squared_zero;
            Ok((json!({"summary": to_value(&s)?, "complex": q.complex().to_json()}), None, passed))
        }
        Command::Simplify { input } => {
            let (v, _) = read_complex_json(input)?;
            let out = match base_of(&v)? {
                "BN" => to_value(&simplify(&parse_complex::<Bn>(v)?)?.to_json())?,
                "TL" => to_value(&simplify(&parse_complex::<Tl>(v)?)?.to_json())?,
                other => bail!("unknown base {other:?}"),
            };
            Ok((out, None, true))
        }
        Command::TraceEuler { input, chebyshev, period, expect } => {
            let (v, file_period) = read_complex_json(input)?;
            let mut passed = true;
            let out = match base_of(&v)? {
                "BN" => {
                    let c = parse_complex::<Bn>(v)?;
                    let t = trace_euler(&c, period.or(file_period).unwrap_or(2))?;
                    let mut out = json!({"window": t.window, "valid_below": t.valid_below});
                    if let Some(k) = expect {
                        let m = compare_with_chebyshev(&t, *k);
                        passed = m.matches();
                        out["expect"] = to_value(&m)?;
                    }
                    if *chebyshev {
                        let coeffs: BTreeMap<String, Value> = t
                            .value
                            .chebyshev()
                            .into_iter()
                            .map(|(k, c)| Ok((format!("S_{k}"), to_value(&c)?)))
                            .collect::<anyhow::Result<_>>()?;
                        out["chebyshev"] = to_value(&coeffs)?;
                    } else {
                        let coeffs: BTreeMap<String, Value> = t
                            .value
                            .coefficients
                            .iter()
                            .map(|(k, c)| Ok((format!("z^{k}"), to_value(c)?)))
                            .collect::<anyhow::Result<_>>()?;
                        out["value"] = to_value(&coeffs)?;
                    }
                    out
                }
                "TL" => {
                    let c = parse_complex::<Tl>(v)?;
                    let class = euler_characteristic(&c)?;
                    let cheb = class_chebyshev(&class)?;
                    if let Some(k) = expect {
                        passed = cheb.iter().enumerate().all(|(i, c)| if i == *k { c.is_one() } else { c.is_zero() })
                            && cheb.len() > *k;
                    }
                    let coeffs: BTreeMap<String, Value> = cheb
                        .into_iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(k, c)| Ok((format!("S_{k}"), to_value(&c)?)))
                        .collect::<anyhow::Result<_>>()?;
                    json!({"chebyshev": coeffs})
                }
                other => bail!("unknown base {other:?}"),
            };
            Ok((out, None, passed))
        }
        Command::Arc { n, hh0, hh, imax } => {
            let alg = arc_algebra(*n)?;
            let mut out = json!({
                "n": n,
                "dimension": alg.dim(),
                "graded_dimension": alg.regular.graded_dimension(),
            });
            let mut passed = true;
            if *hh0 {
                let r = quantum_coinvariants_rank(*n)?;
                passed &= r.rank == r.admissible;
                out["hh0"] = to_value(&r)?;
            }
            if *hh {
                out["hh"] = to_value(&quantum_hochschild_bar(*n, *imax, Twist::Quantum)?)?;
                out["hh_classical"] = to_value(&quantum_hochschild_bar(*n, *imax, Twist::Classical)?)?;
            }
            Ok((out, None, passed))
        }
        Command::Verify { suite, timings } => {
            let sc = SuiteConfig { n_max: cfg.n_max, depth: cfg.depth, parallelism: cfg.parallelism };
            let mut r = verify_suite(*suite, &sc);
            if !timings {
                r = r.without_timing();
            }
            let text = r
                .checks
                .iter()
                .map(|c| format!("{} {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.witness))
                .collect();
            Ok((to_value(&r)?, Some(text), r.passed()))
        }
    }
}
