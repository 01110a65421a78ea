//! `origami`: builds origamis, computes Veech groups and runs the exact
//! checks of the library from the command line. All output is key-sorted
//! JSON on stdout; diagnostics go to stderr.
//!
//! Exit codes: 0 pass, 1 verification failed, 2 malformed input,
//! 3 precondition violated.

use std::io::{Read, Write};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde_json::{json, Value};

use origami_veech::covers::{build_dp, build_w, verify_theorem, CoverError, Flavor};
use origami_veech::modular::{
    check_conj_lemma, factors_through, in_gamma_uu, sl2_group_order, wohlfahrt_level, ModularError, TorsionConfig,
};
use origami_veech::quartic::{
    is_singular, l_orbit, lambda_a_convert, legendre_orbit, orbit_under, parse_rational, rational_string,
    singular_points_mod_q, subgroup_l_h, Field, FourthRootOf8, LambdaDirection, Mat3, QuarticError, QuarticForm,
    QuarticParams,
};
use origami_veech::{decompose_word, orbit, MatZ, Origami};

#[derive(Parser)]
#[command(name = "origami", version, about = "Veech groups of origamis and related exact computations")]
struct Cli {
    /// Include wall-clock time in the report (makes output non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print an origami as JSON.
    #[command(subcommand)]
    Build(BuildKind),
    /// Veech group of an origami read from a JSON file (or stdin).
    Veech {
        /// Path to the origami JSON; `-` or omitted reads stdin.
        path: Option<String>,
        /// Emit the orbit graph as Graphviz DOT instead of the report.
        #[arg(long)]
        dot: bool,
    },
    /// Compare the Veech group of D_P with the level-2n congruence model.
    VerifyTheorem(ConfigArgs),
    /// Computations in the quartic family.
    #[command(subcommand)]
    Quartic(QuarticCommand),
    /// Check that every trace-0 element of SL2(F_p) is conjugate to S or S^-1.
    ConjLemma {
        #[arg(long)]
        p: u64,
    },
}

#[derive(Subcommand)]
enum BuildKind {
    /// The quaternion origami (8 squares).
    W,
    /// The double cover D_P of the n x n torus.
    Dp {
        #[command(flatten)]
        config: ConfigArgs,
        /// Monodromy of x^n and y^n: one of 11, 00, 10, 01.
        #[arg(long)]
        flavor: String,
    },
}

#[derive(Args)]
struct ConfigArgs {
    #[arg(long)]
    n: u64,
    #[arg(long, allow_hyphen_values = true)]
    p: i64,
    #[arg(long, allow_hyphen_values = true)]
    q: i64,
}

#[derive(Args)]
struct ParamArgs {
    #[arg(allow_hyphen_values = true)]
    a: String,
    #[arg(allow_hyphen_values = true)]
    b: String,
    #[arg(allow_hyphen_values = true)]
    c: String,
}

#[derive(Subcommand)]
enum QuarticCommand {
    /// Singularity criterion, optionally with the singular points mod a prime.
    Singular {
        #[command(flatten)]
        params: ParamArgs,
        /// Also list singular points over F_q.
        #[arg(long = "mod")]
        modulus: Option<u64>,
    },
    /// Orbit of (a, b, c) under L (or its order-8 subgroup with --lh).
    Orbit {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        lh: bool,
    },
    /// Substitute (x, y, z) -> M (x, y, z) into f_abc, or check the
    /// f_{0,3,0} -> 8 f_{0,0,0} identity with --fermat.
    Transform {
        /// The parameters a b c (omitted with --fermat).
        #[arg(allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(allow_hyphen_values = true)]
        b: Option<String>,
        #[arg(allow_hyphen_values = true)]
        c: Option<String>,
        /// Nine comma-separated rational entries of M, row by row.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        matrix: Option<Vec<String>>,
        #[arg(long, conflicts_with_all = ["matrix"])]
        fermat: bool,
    },
    /// Convert between the Legendre parameter and a.
    Lambda {
        #[arg(long, allow_hyphen_values = true, conflicts_with = "to_lambda", required_unless_present = "to_lambda")]
        to_a: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        to_lambda: Option<String>,
    },
}

enum Failure {
    Malformed(String),
    Precondition(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Malformed(_) => 2,
            Failure::Precondition(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Malformed(m) | Failure::Precondition(m) => m,
        }
    }
}

impl From<QuarticError> for Failure {
    fn from(e: QuarticError) -> Self {
        match e {
            QuarticError::BadRational(_) | QuarticError::NotQuartic(_) | QuarticError::InvalidSymmetry => {
                Failure::Malformed(e.to_string())
            }
            QuarticError::BadModulus(_) | QuarticError::NotInvertible | QuarticError::ExcludedValue(_) => {
                Failure::Precondition(e.to_string())
            }
        }
    }
}

/// What a subcommand produced: either raw text (origami JSON, DOT) or a
/// report with a pass flag.
enum Output {
    Raw(String),
    Report { command: &'static str, inputs: Value, results: Value, pass: bool },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(&cli.command) {
        Ok(Output::Raw(text)) => {
            emit(&text);
            ExitCode::SUCCESS
        }
        Ok(Output::Report { command, inputs, results, pass }) => {
            let mut report = json!({ "command": command, "inputs": inputs, "results": results, "pass": pass });
            if cli.timing {
                report["wall_clock_ms"] = json!(start.elapsed().as_millis() as u64);
            }
            emit(&serde_json::to_string_pretty(&report).expect("report serializes"));
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}

// a closed pipe (e.g. `| head`) is not an error worth a panic
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn run(command: &Command) -> Result<Output, Failure> {
    match command {
        Command::Build(BuildKind::W) => Ok(Output::Raw(origami_json(&build_w()))),
        Command::Build(BuildKind::Dp { config, flavor }) => cmd_build_dp(config, flavor),
        Command::Veech { path, dot } => cmd_veech(path.as_deref(), *dot),
        Command::VerifyTheorem(config) => cmd_verify_theorem(config),
        Command::Quartic(sub) => cmd_quartic(sub),
        Command::ConjLemma { p } => cmd_conj_lemma(*p),
    }
}

fn origami_json(o: &Origami) -> String {
    serde_json::to_string(&sorted(o)).expect("origami serializes")
}

// round-trip through Value so maps come out key-sorted
fn sorted<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("value serializes")
}

fn cmd_build_dp(config: &ConfigArgs, flavor: &str) -> Result<Output, Failure> {
    let flavor = Flavor::parse(flavor).map_err(|e| Failure::Malformed(e.to_string()))?;
    let cfg = TorsionConfig::new(config.n, config.p, config.q).map_err(|e| Failure::Malformed(e.to_string()))?;
    if cfg.n() % 2 == 0 {
        eprintln!("warning: n = {} is even; the congruence description of the Veech group needs odd n", cfg.n());
    }
    match build_dp(&cfg, flavor) {
        Ok(o) => Ok(Output::Raw(origami_json(&o))),
        Err(e) => Err(Failure::Precondition(format!("cannot build D_P{cfg} with flavor {}: {e}", flavor.label()))),
    }
}

fn read_input(path: Option<&str>) -> Result<String, Failure> {
    match path {
        None | Some("-") => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Malformed(format!("reading stdin: {e}")))?;
            Ok(s)
        }
        Some(p) => std::fs::read_to_string(p).map_err(|e| Failure::Malformed(format!("reading {p}: {e}"))),
    }
}

// largest |SL2(Z/N)| · index for which the congruence test is attempted
const CONGRUENCE_BUDGET: u64 = 20_000_000;

fn matrix_json(m: &MatZ) -> Value {
    json!({ "matrix": [[m.a, m.b], [m.c, m.d]], "word": decompose_word(m).to_string() })
}

fn cmd_veech(path: Option<&str>, dot: bool) -> Result<Output, Failure> {
    let text = read_input(path)?;
    let o: Origami = serde_json::from_str(&text).map_err(|e| Failure::Malformed(format!("invalid origami: {e}")))?;
    let graph = orbit(&o);
    if dot {
        return Ok(Output::Raw(graph.to_dot()));
    }
    let action = graph.action();
    let generators = action.stabilizer_generators();
    let level = wohlfahrt_level(&action);
    let congruence = match sl2_group_order(level).checked_mul(action.size() as u64) {
        Some(work) if work <= CONGRUENCE_BUDGET => json!(factors_through(&action, level)),
        _ => Value::Null,
    };
    let results = json!({
        "degree": o.degree(),
        "genus": o.genus(),
        "stratum": sorted(&o.stratum()),
        "index": action.size(),
        "generators": generators.iter().map(matrix_json).collect::<Vec<_>>(),
        "action": sorted(&action),
        "spot_checks": {
            "contains_minus_identity": action.contains(&MatZ::MINUS_IDENTITY),
            "contains_s": action.contains(&MatZ::S),
            "contains_t": action.contains(&MatZ::T),
            "generators_in_gamma_uu": generators.iter().all(in_gamma_uu),
            "level": level,
            "congruence": congruence,
        },
    });
    Ok(Output::Report { command: "veech", inputs: json!({ "origami": sorted(&o) }), results, pass: true })
}

fn cmd_verify_theorem(config: &ConfigArgs) -> Result<Output, Failure> {
    let cfg = TorsionConfig::new(config.n, config.p, config.q).map_err(|e| Failure::Precondition(e.to_string()))?;
    let report = verify_theorem(&cfg).map_err(|e| match e {
        CoverError::Modular(ModularError::NotOdd(_) | ModularError::NotGeneralPosition) => {
            Failure::Precondition(format!("{cfg}: {e}"))
        }
        other => Failure::Precondition(other.to_string()),
    })?;
    let inputs = json!({ "n": cfg.n(), "p": cfg.p(), "q": cfg.q() });
    let pass = report.pass;
    Ok(Output::Report { command: "verify-theorem", inputs, results: sorted(&report), pass })
}

fn params(p: &ParamArgs) -> Result<QuarticParams, Failure> {
    Ok(QuarticParams::parse(&p.a, &p.b, &p.c)?)
}

fn rational_json(q: &BigRational) -> Value {
    json!(rational_string(q))
}

fn cmd_quartic(sub: &QuarticCommand) -> Result<Output, Failure> {
    match sub {
        QuarticCommand::Singular { params: raw, modulus } => {
            let p = params(raw)?;
            let mut results = json!({
                "singular": is_singular(&p),
                "criterion": rational_json(&p.criterion()),
            });
            let mut inputs = json!({ "params": sorted(&p) });
            if let Some(q) = *modulus {
                let points = singular_points_mod_q(&p, q)?;
                results["singular_points_mod_q"] = json!(points);
                inputs["modulus"] = json!(q);
            }
            Ok(Output::Report { command: "quartic singular", inputs, results, pass: true })
        }
        QuarticCommand::Orbit { params: raw, lh } => {
            let p = params(raw)?;
            let (group, orbit) = if *lh { ("L_H", orbit_under(&subgroup_l_h(), &p)) } else { ("L", l_orbit(&p)) };
            let results = json!({
                "group": group,
                "size": orbit.len(),
                "orbit": orbit.iter().map(sorted).collect::<Vec<_>>(),
            });
            Ok(Output::Report { command: "quartic orbit", inputs: json!({ "params": sorted(&p) }), results, pass: true })
        }
        QuarticCommand::Transform { a, b, c, matrix, fermat } => {
            if *fermat {
                let f030 = QuarticForm::<BigRational>::family(&QuarticParams::from_ints(0, 3, 0)).lift::<FourthRootOf8>();
                let fermat = QuarticForm::<BigRational>::family(&QuarticParams::from_ints(0, 0, 0)).lift::<FourthRootOf8>();
                let image = f030.transform(&origami_veech::quartic::fermat_transform())?;
                let expected = fermat.scale(&FourthRootOf8::from_int(8));
                let pass = image == expected;
                let results = json!({ "form": sorted(&image), "expected": sorted(&expected), "equal": pass });
                let inputs = json!({ "params": "0,3,0", "matrix": "(x + z, t y, x - z), t^4 = 8" });
                return Ok(Output::Report { command: "quartic transform", inputs, results, pass });
            }
            let (Some(a), Some(b), Some(c)) = (a, b, c) else {
                return Err(Failure::Malformed("expected three parameters a b c".into()));
            };
            let entries = matrix.as_ref().ok_or_else(|| Failure::Malformed("expected --matrix or --fermat".into()))?;
            if entries.len() != 9 {
                return Err(Failure::Malformed(format!("--matrix needs 9 entries, got {}", entries.len())));
            }
            let p = QuarticParams::parse(a, b, c)?;
            let values: Vec<BigRational> = entries.iter().map(|e| parse_rational(e)).collect::<Result<_, _>>()?;
            let m = Mat3::new(std::array::from_fn(|i| std::array::from_fn(|j| values[3 * i + j].clone())));
            let image = QuarticForm::<BigRational>::family(&p).transform(&m)?;
            let inputs = json!({ "params": sorted(&p), "matrix": values.iter().map(rational_json).collect::<Vec<_>>() });
            Ok(Output::Report { command: "quartic transform", inputs, results: json!({ "form": sorted(&image) }), pass: true })
        }
        QuarticCommand::Lambda { to_a, to_lambda } => {
            let (raw, direction) = match (to_a, to_lambda) {
                (Some(v), _) => (v, LambdaDirection::ToA),
                (None, Some(v)) => (v, LambdaDirection::ToLambda),
                (None, None) => return Err(Failure::Malformed("expected --to-a or --to-lambda".into())),
            };
            let value = parse_rational(raw)?;
            let converted = lambda_a_convert(&value, direction)?;
            let (lambda, a) = match direction {
                LambdaDirection::ToA => (value.clone(), converted.clone()),
                LambdaDirection::ToLambda => (converted.clone(), value.clone()),
            };
            let orbit = legendre_orbit(&lambda)?;
            let results = json!({
                "lambda": rational_json(&lambda),
                "a": rational_json(&a),
                "legendre_orbit": orbit.iter().map(rational_json).collect::<Vec<_>>(),
            });
            let key = if direction == LambdaDirection::ToA { "lambda" } else { "a" };
            Ok(Output::Report { command: "quartic lambda", inputs: json!({ key: rational_json(&value) }), results, pass: true })
        }
    }
}

const CONJ_LEMMA_MAX_P: u64 = 31;

fn cmd_conj_lemma(p: u64) -> Result<Output, Failure> {
    if p > CONJ_LEMMA_MAX_P {
        return Err(Failure::Precondition(format!("p = {p} exceeds {CONJ_LEMMA_MAX_P}")));
    }
    let report = check_conj_lemma(p).map_err(|e| Failure::Precondition(e.to_string()))?;
    let pass = report.pass();
    Ok(Output::Report { command: "conj-lemma", inputs: json!({ "p": p }), results: sorted(&report), pass })
}
