//! Command-line front end. [`run`] is the whole program minus process exit,
//! so tests can drive it in-process.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::classify::{classify, delta_exactness_certificate, verify_witness, KernelVerdict};
use crate::graded::{basis_of_d_degree, koszul_homology_window, GradedError, Window};
use crate::scalar::Q;
use crate::semigroup::{frobenius, gaps, is_delta_weight, member_representation, SemigroupError, WeightSystem};
use crate::twist::TwistParameter;
use crate::weyl::{euler_field, parse_weyl, DeltaElement, WeylElement};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_VERIFICATION: i32 = 4;

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Parser, Debug)]
#[command(name = "weylstack", version, about = "Twisted D-modules on weighted projective stacks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct Common {
    /// Comma-separated positive weights, e.g. 1,1,2
    #[arg(long, value_delimiter = ',', required = true)]
    weights: Vec<u64>,
    #[arg(long, value_enum, default_value = "text")]
    output: OutputFormat,
    /// Write the report to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct WindowArgs {
    #[arg(long, allow_hyphen_values = true)]
    degree_lo: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    degree_hi: Option<i64>,
    #[arg(long)]
    order: Option<u32>,
    #[arg(long)]
    padding: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify Gamma_lambda for a weight system and twist
    Classify {
        #[command(flatten)]
        common: Common,
        /// Integer, p/q, or `generic`
        #[arg(long, allow_hyphen_values = true)]
        twist: TwistParameter,
    },
    /// Semigroup queries
    Semigroup {
        #[command(flatten)]
        common: Common,
        #[command(subcommand)]
        query: SemigroupQuery,
    },
    /// Run a verification suite
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        twist: TwistParameter,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        window: WindowArgs,
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Evaluate a Weyl-algebra expression to normal order
    Weyl {
        /// Weights, needed for `E`
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<u64>>,
        #[arg(long, value_enum, default_value = "text")]
        output: OutputFormat,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
}

#[derive(Subcommand, Debug, Clone)]
enum SemigroupQuery {
    Frobenius,
    Gaps,
    Member {
        #[arg(allow_hyphen_values = true)]
        k: i64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Euler,
    Delta,
    Koszul,
    Witnesses,
    All,
}

/// Everything a verification run depends on.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub weights: WeightSystem,
    pub twist: TwistParameter,
    pub window: Window,
    pub output: OutputFormat,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub data: Value,
}

impl Check {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.to_string(),
            passed,
            detail: detail.into(),
            data: Value::Null,
        }
    }

    fn with_data(mut self, data: Value) -> Self {
        self.data = data;
        self
    }
}

struct Failure {
    code: i32,
    message: String,
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

fn weight_system(weights: &[u64]) -> Result<WeightSystem, Failure> {
    WeightSystem::new(weights.to_vec()).map_err(|e| input_error(format!("invalid weights: {e}")))
}

fn window_from(args: &WindowArgs, w: &WeightSystem) -> Result<Window, Failure> {
    let d = Window::default_for(w);
    Window::new(
        args.degree_lo.unwrap_or(d.degree_lo),
        args.degree_hi.unwrap_or(d.degree_hi),
        args.order.unwrap_or(d.order_bound),
        args.padding.unwrap_or(d.padding),
    )
    .map_err(|e| input_error(format!("invalid window: {e}")))
}

/// Runs the program on `args` (including the program name) and returns the
/// exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    let (target, result) = dispatch(cli.command);
    match result {
        Ok((text, code)) => {
            let written = match target {
                Some(path) => fs::write(&path, &text).map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: {e}");
                return EXIT_INPUT;
            }
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

type Outcome = Result<(String, i32), Failure>;

fn dispatch(cmd: Command) -> (Option<PathBuf>, Outcome) {
    match cmd {
        Command::Classify { common, twist } => (common.out.clone(), cmd_classify(&common, &twist)),
        Command::Semigroup { common, query } => (common.out.clone(), cmd_semigroup(&common, &query)),
        Command::Verify {
            common,
            twist,
            seed,
            window,
            suite,
        } => {
            let out = common.out.clone();
            let cfg = weight_system(&common.weights).and_then(|w| {
                Ok(RunConfig {
                    window: window_from(&window, &w)?,
                    weights: w,
                    twist,
                    output: common.output,
                    seed,
                })
            });
            (out, cfg.and_then(|cfg| cmd_verify(&cfg, suite)))
        }
        Command::Weyl {
            weights,
            output,
            expr,
        } => (None, cmd_weyl_eval(weights.as_deref(), output, &expr)),
    }
}

fn cmd_classify(common: &Common, twist: &TwistParameter) -> Outcome {
    let w = weight_system(&common.weights)?;
    let c = classify(&w, twist);
    let text = match common.output {
        OutputFormat::Json => c.to_json() + "\n",
        OutputFormat::Text => c.to_string() + "\n",
    };
    Ok((text, EXIT_OK))
}

fn cmd_semigroup(common: &Common, query: &SemigroupQuery) -> Outcome {
    let w = weight_system(&common.weights)?;
    let precondition = |e: SemigroupError| Failure {
        code: EXIT_PRECONDITION,
        message: e.to_string(),
    };
    let (name, value, text) = match query {
        SemigroupQuery::Frobenius => {
            let f = frobenius(&w).map_err(precondition)?;
            ("frobenius", json!(f), f.to_string())
        }
        SemigroupQuery::Gaps => {
            let g = gaps(&w).map_err(precondition)?;
            let s: Vec<String> = g.iter().map(|k| k.to_string()).collect();
            ("gaps", json!(g), format!("[{}]", s.join(",")))
        }
        SemigroupQuery::Member { k } => {
            let rep = member_representation(&w, *k);
            let text = match &rep {
                Some(b) => {
                    let s: Vec<String> = b.iter().map(|x| x.to_string()).collect();
                    format!("true ({})", s.join(","))
                }
                None => "false".to_string(),
            };
            (
                "member",
                json!({ "k": k, "member": rep.is_some(), "representation": rep }),
                text,
            )
        }
    };
    let text = match common.output {
        OutputFormat::Text => text + "\n",
        OutputFormat::Json => {
            let doc = json!({ "weights": w.weights(), "query": name, "result": value });
            serde_json::to_string_pretty(&doc).expect("json") + "\n"
        }
    };
    Ok((text, EXIT_OK))
}

fn cmd_weyl_eval(weights: Option<&[u64]>, output: OutputFormat, expr: &str) -> Outcome {
    let w = weights.map(weight_system).transpose()?;
    let e = parse_weyl(expr, w.as_ref()).map_err(|e| input_error(e.to_string()))?;
    let text = match output {
        OutputFormat::Text => e.to_string() + "\n",
        OutputFormat::Json => {
            let doc = json!({ "input": expr, "result": e.to_string() });
            serde_json::to_string_pretty(&doc).expect("json") + "\n"
        }
    };
    Ok((text, EXIT_OK))
}

/// Runs one suite (or all of them) and renders the per-check results.
fn cmd_verify(cfg: &RunConfig, suite: Suite) -> Outcome {
    let needed = cfg.weights.max_weight();
    if matches!(suite, Suite::Koszul | Suite::All) && cfg.window.padding < needed {
        let e = GradedError::WindowTooSmall {
            padding: cfg.window.padding,
            needed,
        };
        return Err(Failure {
            code: EXIT_PRECONDITION,
            message: e.to_string(),
        });
    }
    let checks = run_suite(cfg, suite);
    let passed = checks.iter().all(|c| c.passed);
    let text = match cfg.output {
        OutputFormat::Text => {
            let mut s = String::new();
            for c in &checks {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                s.push_str(&format!("{tag} {}: {}\n", c.name, c.detail));
            }
            s
        }
        OutputFormat::Json => {
            let doc = json!({
                "suite": suite,
                "weights": cfg.weights.weights(),
                "twist": cfg.twist,
                "seed": cfg.seed,
                "window": cfg.window,
                "passed": passed,
                "checks": checks,
            });
            serde_json::to_string_pretty(&doc).expect("json") + "\n"
        }
    };
    Ok((text, if passed { EXIT_OK } else { EXIT_VERIFICATION }))
}

pub fn run_suite(cfg: &RunConfig, suite: Suite) -> Vec<Check> {
    match suite {
        Suite::Euler => vec![check_euler(cfg)],
        Suite::Delta => check_delta(cfg),
        Suite::Koszul => check_koszul(cfg),
        Suite::Witnesses => vec![check_witnesses(cfg)],
        Suite::All => {
            let mut v = vec![check_euler(cfg)];
            v.extend(check_delta(cfg));
            v.extend(check_koszul(cfg));
            v.push(check_witnesses(cfg));
            v
        }
    }
}

/// A seeded random element of `D_k`.
pub fn random_homogeneous(w: &WeightSystem, k: i64, order_bound: u32, rng: &mut impl Rng) -> WeylElement<Q> {
    let basis = basis_of_d_degree(w, k, order_bound);
    let mut e = WeylElement::zero(w.len());
    if basis.is_empty() {
        return e;
    }
    for _ in 0..rng.gen_range(1..=4) {
        let b = &basis[rng.gen_range(0..basis.len())];
        let c: i64 = rng.gen_range(-9..=9);
        e = e.add(&b.scale(&Q::from_integer(c.into())));
    }
    e
}

fn check_euler(cfg: &RunConfig) -> Check {
    let w = &cfg.weights;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let e: WeylElement<Q> = euler_field(w);
    let (lo, hi) = (cfg.window.degree_lo.max(-8), cfg.window.degree_hi.min(8));
    let order = cfg.window.order_bound.min(4);
    let trials = 100;
    for _ in 0..trials {
        let k = rng.gen_range(lo..=hi.max(lo));
        let a = random_homogeneous(w, k, order, &mut rng);
        let lhs = e.commutator(&a);
        let rhs = a.scale(&Q::from_integer(k.into()));
        if lhs != rhs {
            return Check::new(
                "euler_grading",
                false,
                format!("[E, {a}] = {lhs}, expected {rhs}"),
            );
        }
    }
    Check::new(
        "euler_grading",
        true,
        format!("[E, a] = k a on {trials} random elements of degree in [{lo}, {hi}]"),
    )
}

fn check_delta(cfg: &RunConfig) -> Vec<Check> {
    let w = &cfg.weights;
    let order = cfg.window.order_bound;
    let cert = delta_exactness_certificate(w, &cfg.twist, &cfg.window);
    let top = -(w.weight_sum() as i64);
    let bottom = top - order as i64 * w.weight(0) as i64;
    // every weight in [bottom, top] is reachable with |beta| <= order
    let expected: Vec<i64> = (bottom..=top)
        .rev()
        .filter(|&mu| crate::semigroup::is_member(w, top - mu))
        .collect();
    let found: Vec<i64> = cert.eigenvalues.iter().copied().filter(|&mu| mu >= bottom).collect();
    let eigen_check = {
        let ok = found == expected
            && (0..w.len()).all(|i| {
                let mut beta = vec![0; w.len()];
                beta[i] = 1;
                DeltaElement::monomial(&beta, Q::from_integer(1.into())).euler_eigenvalue(w)
                    == Some(Q::from_integer((top - w.weight(i) as i64).into()))
            });
        Check::new(
            "delta_weights",
            ok,
            format!(
                "E-weights of d^beta delta in [{bottom}, {top}] = -{} - semigroup: {:?}",
                w.weight_sum(),
                found
            ),
        )
    };
    let formula = is_delta_weight(w, &cfg.twist);
    let agree = !cert.conclusive || cert.found == formula;
    let twist_check = Check::new(
        "delta_twist",
        agree,
        format!(
            "twist {} {} a delta weight (enumeration {}, semigroup formula {})",
            cfg.twist,
            if formula { "is" } else { "is not" },
            if cert.conclusive {
                if cert.found {
                    "found it"
                } else {
                    "excluded it"
                }
            } else {
                "inconclusive at this order"
            },
            formula
        ),
    )
    .with_data(serde_json::to_value(&cert).expect("json"));
    vec![eigen_check, twist_check]
}

fn check_koszul(cfg: &RunConfig) -> Vec<Check> {
    let w = &cfg.weights;
    let report = match koszul_homology_window(w, &cfg.twist, &cfg.window) {
        Ok(r) => r,
        Err(e) => return vec![Check::new("koszul", false, e.to_string())],
    };
    let summary = json!({
        "ker_phi1_dim": report.ker_phi1_dim,
        "homology_dim": report.homology_dim,
        "homology_status": report.homology_status,
        "witness_vectors": report.witness_vectors,
        "paper_class": report.paper_class,
    });
    let mut checks = vec![Check::new(
        "koszul_hom",
        report.ker_phi1_dim == 0,
        format!("dim Ker phi_1 = {} in window", report.ker_phi1_dim),
    )];
    if w.n() >= 2 {
        checks.push(
            Check::new(
                "koszul_ext1",
                report.homology_dim == 0,
                format!(
                    "dim Ker phi_2 / Im phi_1 = {} in window ({})",
                    report.homology_dim, report.homology_status
                ),
            )
            .with_data(summary),
        );
    } else {
        let witnesses: Vec<String> = report
            .witness_vectors
            .iter()
            .map(|h| format!("({})", h.components.join(", ")))
            .collect();
        let detail = format!(
            "homology {} in window, witnesses {}",
            report.homology_dim,
            if witnesses.is_empty() {
                "none".to_string()
            } else {
                witnesses.join("; ")
            }
        );
        let passed = match (&report.paper_class, cfg.twist.as_rational()) {
            (Some(pc), Some(l)) if l == &Q::from_integer(0.into()) => pc.detected(),
            _ => true,
        };
        checks.push(Check::new("koszul_n1_class", passed, detail).with_data(summary));
    }
    checks
}

fn check_witnesses(cfg: &RunConfig) -> Check {
    let c = classify(&cfg.weights, &cfg.twist);
    match &c.kernel {
        KernelVerdict::NonzeroWitness { witness } => {
            match verify_witness(witness, &cfg.weights, &cfg.twist, &cfg.window) {
                Ok(v) => Check::new("kernel_witness", true, format!("{witness} verified"))
                    .with_data(serde_json::to_value(&v).expect("json")),
                Err(e) => Check::new("kernel_witness", false, format!("{witness}: {e}")),
            }
        }
        other => Check::new(
            "kernel_witness",
            true,
            format!("no witness to verify (kernel {})", match other {
                KernelVerdict::Zero => "zero",
                _ => "unknown",
            }),
        ),
    }
}
