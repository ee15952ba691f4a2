use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use tiet::capset::{self, CapsetError};
use tiet::iet::{self, Closure, IetError, Iet3Params};
use tiet::monoid;
use tiet::morphism::{self, IntMatrix, Morphism, MorphismError};
use tiet::parse::{self, ParseError};
use tiet::preserve::{self, Verdict};
use tiet::qfield::{Interval, QuadReal, RealParam};
use tiet::repro;
use tiet::words::{self, PointedWord, WordError};
use tiet::Error;

const EXIT_FALSIFIED: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_DOMAIN: u8 = 65;

#[derive(Parser, Debug)]
#[command(name = "tiet", version, about = "Exact tools for 3-interval exchange words, morphisms and cut-and-project sets")]
struct Cli {
    /// Write output to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<String>,
    /// Seed for every sampled quantity.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Read parameters as floats with this tolerance.
    #[arg(long, global = true, value_name = "TOL")]
    approx: Option<f64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Svg,
    Text,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// 3-interval exchanges: coding, classification, binary projection.
    #[command(subcommand)]
    Iet(IetCmd),
    /// Finite pointed words: factors, complexity, balance, densities, distance.
    #[command(subcommand)]
    Word(WordCmd),
    /// Morphisms: incidence data, application, composition, fixed points.
    #[command(subcommand)]
    Morph(MorphCmd),
    /// Integer 3x3 matrices: class membership, enumeration, spectrum.
    #[command(subcommand)]
    Monoid(MonoidCmd),
    /// Cut-and-project sets.
    #[command(subcommand)]
    Capset(CapsetCmd),
    /// Preservation harness.
    #[command(subcommand)]
    Preserve(PreserveCmd),
    /// Run the acceptance suite and print a pass/fail table.
    Repro {
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
    },
}

#[derive(Args, Debug)]
struct IetArgs {
    /// `alpha,beta,gamma`, e.g. `1,sqrt2,sqrt2`.
    #[arg(long)]
    params: String,
    #[arg(long, value_enum, default_value_t = ClosureArg::Left)]
    closure: ClosureArg,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ClosureArg {
    Left,
    Right,
}

#[derive(Subcommand, Debug)]
enum IetCmd {
    /// Coding of the orbit of x0 over an index range.
    Code {
        #[command(flatten)]
        p: IetArgs,
        #[arg(long, default_value = "0")]
        x0: String,
        #[arg(long, default_value = "0:99", allow_hyphen_values = true)]
        range: String,
    },
    /// Periodic, degenerate or non-degenerate, with the integer witness.
    Classify {
        #[command(flatten)]
        p: IetArgs,
    },
    /// Binary projection of the coding next to the matching 2iet coding.
    Sigma {
        #[command(flatten)]
        p: IetArgs,
        #[arg(long, default_value = "0")]
        x0: String,
        #[arg(long, default_value = "0:99", allow_hyphen_values = true)]
        range: String,
    },
    /// Factor complexity of a coding window.
    Complexity {
        #[command(flatten)]
        p: IetArgs,
        #[arg(long, default_value = "0")]
        x0: String,
        #[arg(long, default_value_t = 100_000)]
        len: usize,
        #[arg(long, default_value_t = 30)]
        nmax: usize,
    },
}

#[derive(Subcommand, Debug)]
enum WordCmd {
    /// Complexity profile `n,C(n)`.
    Complexity {
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 10)]
        nmax: usize,
    },
    /// Sorted factors of one length.
    Factors {
        #[arg(long)]
        word: String,
        #[arg(long)]
        n: usize,
    },
    /// Balance defect of a binary word.
    Balance {
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 50)]
        nmax: usize,
    },
    /// Letter frequencies.
    Densities {
        #[arg(long)]
        word: String,
    },
    /// Distance between two pointed words.
    Distance {
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
    },
}

#[derive(Subcommand, Debug)]
enum MorphCmd {
    /// Images, incidence matrix, determinant, primitivity.
    Info {
        #[arg(long)]
        morphism: String,
    },
    /// Image of a pointed word.
    Apply {
        #[arg(long)]
        morphism: String,
        #[arg(long)]
        word: String,
    },
    /// `morphism ∘ with`.
    Compose {
        #[arg(long)]
        morphism: String,
        #[arg(long)]
        with: String,
    },
    /// Window of a two-sided fixed point of some power.
    Fixed {
        #[arg(long)]
        morphism: String,
        #[arg(long, default_value_t = 50)]
        min_len: usize,
    },
    /// Dominant eigenvalue with left and right eigenvectors.
    Perron {
        #[arg(long)]
        morphism: String,
    },
}

#[derive(Subcommand, Debug)]
enum MonoidCmd {
    /// Class membership report.
    Check {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// Members with entries up to a bound.
    Enum {
        #[arg(long, default_value_t = 2)]
        bound: u32,
    },
    /// Characteristic polynomial split and eigenvalues.
    Spectrum {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// Lattice witness `(K1, L1)` of a determinant-0 matrix.
    Degeneracy {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
}

#[derive(Subcommand, Debug)]
enum CapsetCmd {
    /// Points and gap labels from a 3iet orbit.
    Gen {
        #[command(flatten)]
        p: IetArgs,
        #[arg(long, default_value = "0")]
        x0: String,
        #[arg(long, default_value = "1")]
        eta: String,
        #[arg(long, default_value = "-50:200", allow_hyphen_values = true)]
        range: String,
    },
    /// Both sides of the duality count.
    Dualcheck {
        #[arg(long)]
        eps: String,
        #[arg(long)]
        eta: String,
        #[arg(long, allow_hyphen_values = true)]
        omega1: String,
        #[arg(long, allow_hyphen_values = true)]
        omega2: String,
    },
    /// Unit scaling identity on a window.
    Scale {
        #[arg(long)]
        eps: String,
        #[arg(long)]
        lambda: String,
        #[arg(long, default_value = "[0,1)", allow_hyphen_values = true)]
        omega: String,
        #[arg(long, default_value = "[-20,20]", allow_hyphen_values = true)]
        window: String,
    },
    /// Renormalization identity on a window.
    Renorm {
        #[arg(long)]
        eps: String,
        #[arg(long)]
        eta: String,
        #[arg(long, default_value = "(0,1]", allow_hyphen_values = true)]
        omega: String,
        #[arg(long, default_value = "[-20,20]", allow_hyphen_values = true)]
        window: String,
    },
    /// Count discrepancy against its bound over random triples.
    Qbound {
        #[arg(long)]
        eps: String,
        #[arg(long)]
        eta: String,
        #[arg(long, default_value_t = 200)]
        triples: usize,
    },
    /// Spread of window counts scaled by powers of a unit.
    Pn {
        #[arg(long)]
        eps: String,
        #[arg(long)]
        lambda: String,
        #[arg(long, default_value = "(-1,0]", allow_hyphen_values = true)]
        omega: String,
        #[arg(long, default_value_t = 6)]
        nmax: u32,
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
    /// Self-similar point set of a primitive morphism.
    Selfsim {
        #[arg(long)]
        morphism: String,
        #[arg(long, default_value_t = 500)]
        gaps: usize,
    },
}

#[derive(Subcommand, Debug)]
enum PreserveCmd {
    /// Factor containment trials; exit 2 when falsified.
    Test {
        #[arg(long)]
        morphism: String,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 50_000)]
        window: usize,
        #[arg(long, default_value_t = 15)]
        flen: usize,
    },
    /// Degeneracy dichotomy by determinant.
    #[command(alias = "thmb")]
    Dichotomy {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Transported parameters `(alpha,beta,gamma) M`.
    Transport {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        #[arg(long)]
        params: String,
    },
    /// Fixed point of a power checked against the eigenvector coding.
    Fixed {
        #[arg(long)]
        morphism: String,
        #[arg(long, default_value_t = 20_000)]
        window: usize,
        #[arg(long, default_value_t = 15)]
        flen: usize,
    },
}

enum CliError {
    Usage(String),
    Domain(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let usage = matches!(
            e,
            Error::Parse(_)
                | Error::Word(WordError::Parse(_))
                | Error::Morphism(MorphismError::Parse(_) | MorphismError::MatrixParse(_) | MorphismError::Erasing(_))
        );
        if usage {
            CliError::Usage(e.to_string())
        } else {
            CliError::Domain(e)
        }
    }
}

macro_rules! impl_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                Error::from(e).into()
            }
        }
    )*};
}
impl_from!(ParseError, IetError, WordError, MorphismError, CapsetError, monoid::MonoidError, preserve::PreserveError);

enum Output {
    Json(Value),
    Text(String),
}

struct Run {
    out: Output,
    code: u8,
}

fn ok(out: Output) -> Result<Run, CliError> {
    Ok(Run { out, code: 0 })
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn bad_format(f: Format, cmd: &str) -> CliError {
    CliError::Usage(format!("format {f:?} is not available for {cmd}").to_lowercase())
}

fn iet_params(a: &IetArgs, approx: Option<f64>) -> Result<Iet3Params, CliError> {
    let v = parse::parse_param_list(&a.params, approx)?;
    let [al, be, ga]: [RealParam; 3] =
        v.try_into().map_err(|_| CliError::Usage("--params needs three values".into()))?;
    let closure = match a.closure {
        ClosureArg::Left => Closure::LeftClosed,
        ClosureArg::Right => Closure::RightClosed,
    };
    Ok(Iet3Params::new(al, be, ga, closure)?)
}

fn quad(s: &str) -> Result<QuadReal, CliError> {
    Ok(parse::parse_quad(s)?)
}

fn interval(s: &str) -> Result<Interval, CliError> {
    Ok(parse::parse_interval(s)?)
}

fn morph(s: &str) -> Result<Morphism, CliError> {
    Ok(s.parse::<Morphism>()?)
}

fn matrix(s: &str) -> Result<IntMatrix, CliError> {
    Ok(s.parse::<IntMatrix>()?)
}

fn word(s: &str) -> Result<PointedWord, CliError> {
    Ok(s.parse::<PointedWord>()?)
}

fn profile_output(profile: &[usize], fmt: Format) -> Output {
    match fmt {
        Format::Csv => Output::Text(words::complexity_csv(profile)),
        _ => Output::Json(json!({ "complexity": profile })),
    }
}

fn run_iet(cmd: &IetCmd, fmt: Format, approx: Option<f64>) -> Result<Run, CliError> {
    match cmd {
        IetCmd::Code { p, x0, range } => {
            let params = iet_params(p, approx)?;
            let x0 = parse::parse_param(x0, approx)?;
            let (lo, hi) = parse::parse_range(range)?;
            let w = iet::t3_code(&params, &x0, lo, hi)?;
            match fmt {
                Format::Text => ok(Output::Text(format!("{}\n", w.word))),
                Format::Json => ok(Output::Json(json!({ "word": w.word.to_string(), "ties": w.ties }))),
                f => Err(bad_format(f, "iet code")),
            }
        }
        IetCmd::Classify { p } => {
            let class = iet::classify(&iet_params(p, approx)?)?;
            ok(Output::Json(to_json(&class)))
        }
        IetCmd::Sigma { p, x0, range } => {
            let params = iet_params(p, approx)?;
            let x = quad(x0)?;
            let (lo, hi) = parse::parse_range(range)?;
            let w = iet::t3_word(&params, &RealParam::Exact(x.clone()), lo, hi)?;
            let proj = iet::sigma_project(&w)?;
            let two = iet::sigma_two_iet(&params, &x)?;
            let left = proj.origin() as i64;
            let s = iet::t2_code(&two, -left, proj.len() as i64 - left - 1)?;
            let defect = words::balance_defect(&proj, proj.len().min(200))?;
            ok(Output::Json(json!({
                "projection": proj.to_string(),
                "mechanical": s.to_string(),
                "equal": proj == s,
                "slope": to_json(&two.slope),
                "balance_defect": defect,
            })))
        }
        IetCmd::Complexity { p, x0, len, nmax } => {
            let params = iet_params(p, approx)?;
            let x0 = parse::parse_param(x0, approx)?;
            let w = iet::t3_word(&params, &x0, 0, *len as i64 - 1)?;
            ok(profile_output(&words::complexity_profile(&w, *nmax)?, fmt))
        }
    }
}

fn run_word(cmd: &WordCmd, fmt: Format) -> Result<Run, CliError> {
    match cmd {
        WordCmd::Complexity { word: w, nmax } => {
            ok(profile_output(&words::complexity_profile(&word(w)?, *nmax)?, fmt))
        }
        WordCmd::Factors { word: w, n } => {
            let f = words::factors(&word(w)?, *n)?;
            match fmt {
                Format::Json => ok(Output::Json(json!({ "n": n, "factors": f.to_text().lines().collect::<Vec<_>>() }))),
                _ => ok(Output::Text(f.to_text())),
            }
        }
        WordCmd::Balance { word: w, nmax } => {
            ok(Output::Json(json!({ "balance_defect": words::balance_defect(&word(w)?, *nmax)? })))
        }
        WordCmd::Densities { word: w } => {
            let w = word(w)?;
            let d = words::empirical_densities(&w)?;
            let letters: Vec<String> = w.alphabet().letters().map(|l| w.alphabet().symbol(l).to_string()).collect();
            let map: serde_json::Map<String, Value> =
                letters.into_iter().zip(d.iter()).map(|(k, v)| (k, Value::String(v.to_string()))).collect();
            ok(Output::Json(Value::Object(map)))
        }
        WordCmd::Distance { u, v } => {
            ok(Output::Json(json!({ "distance": words::metric_distance(&word(u)?, &word(v)?).to_string() })))
        }
    }
}

fn morph_info(m: &Morphism) -> Value {
    let mat = m.incidence_matrix();
    json!({
        "morphism": m.to_string(),
        "images": to_json(m),
        "matrix": to_json(&mat),
        "det": mat.det().to_string(),
        "primitivity": to_json(&m.primitivity()),
    })
}

fn run_morph(cmd: &MorphCmd, fmt: Format) -> Result<Run, CliError> {
    match cmd {
        MorphCmd::Info { morphism } => ok(Output::Json(morph_info(&morph(morphism)?))),
        MorphCmd::Apply { morphism, word: w } => {
            let v = morph(morphism)?.apply(&word(w)?)?;
            match fmt {
                Format::Text => ok(Output::Text(format!("{v}\n"))),
                _ => ok(Output::Json(json!({ "word": v.to_string() }))),
            }
        }
        MorphCmd::Compose { morphism, with } => {
            ok(Output::Json(morph_info(&morph(morphism)?.compose(&morph(with)?)?)))
        }
        MorphCmd::Fixed { morphism, min_len } => {
            let m = morph(morphism)?;
            let a = m.alphabet();
            let seeds = morphism::fixed_point_seeds(&m, 9);
            let mut found = Vec::new();
            for (p, l, r) in seeds {
                let w = morphism::fixed_point_window(&m.power(p), l, r, *min_len)?;
                found.push(json!({
                    "power": p,
                    "seed": format!("{}|{}", a.symbol(l), a.symbol(r)),
                    "window": w.to_string(),
                }));
            }
            if found.is_empty() {
                return Err(CliError::Domain(MorphismError::NotAFixedPointSeed(m.to_string(), "no seed for powers up to 9").into()));
            }
            ok(Output::Json(Value::Array(found)))
        }
        MorphCmd::Perron { morphism } => {
            ok(Output::Json(to_json(&morphism::perron_data(&morph(morphism)?.incidence_matrix())?)))
        }
    }
}

fn run_monoid(cmd: &MonoidCmd, fmt: Format) -> Result<Run, CliError> {
    match cmd {
        MonoidCmd::Check { matrix: m } => ok(Output::Json(to_json(&monoid::matrix_report(&matrix(m)?)?))),
        MonoidCmd::Enum { bound } => {
            let members = monoid::enumerate_e3n(*bound)?;
            match fmt {
                Format::Csv => {
                    let mut s = String::from("matrix,det,sign\n");
                    for m in &members {
                        let sign = monoid::symplectic_like_check(m).unwrap_or(0);
                        s.push_str(&format!("\"{m}\",{},{sign}\n", m.det()));
                    }
                    ok(Output::Text(s))
                }
                _ => ok(Output::Json(json!({
                    "bound": bound,
                    "count": members.len(),
                    "members": members.iter().map(ToString::to_string).collect::<Vec<_>>(),
                }))),
            }
        }
        MonoidCmd::Spectrum { matrix: m } => ok(Output::Json(to_json(&monoid::spectrum_report(&matrix(m)?)?))),
        MonoidCmd::Degeneracy { matrix: m } => {
            let (k, l) = monoid::degeneracy_transport_check(&matrix(m)?)?;
            ok(Output::Json(json!({ "K1": k.to_string(), "L1": l.to_string() })))
        }
    }
}

fn points_json(points: &[QuadReal]) -> Vec<String> {
    points.iter().map(ToString::to_string).collect()
}

fn run_capset(cmd: &CapsetCmd, fmt: Format, seed: u64) -> Result<Run, CliError> {
    match cmd {
        CapsetCmd::Gen { p, x0, eta, range } => {
            let params = iet_params(p, None)?;
            let cp = capset::from_iet(&params, &RealParam::Exact(quad(x0)?), &RealParam::Exact(quad(eta)?))?;
            let (lo, hi) = parse::parse_range(range)?;
            let set = capset::generate(&cp, lo, hi);
            match fmt {
                Format::Csv => ok(Output::Text(set.to_csv())),
                Format::Svg => ok(Output::Text(set.to_svg())),
                Format::Text => ok(Output::Text(format!("{}\n", set.gap_word()))),
                Format::Json => ok(Output::Json(json!({
                    "conversion": to_json(&cp),
                    "gap_word": set.gap_word().to_string(),
                    "points": points_json(&set.points),
                    "indices": set.indices,
                }))),
            }
        }
        CapsetCmd::Dualcheck { eps, eta, omega1, omega2 } => {
            let (a, b) = capset::duality_counts(&quad(eps)?, &quad(eta)?, &interval(omega1)?, &interval(omega2)?)?;
            ok(Output::Json(json!({ "count": a, "dual_count": b, "equal": a == b })))
        }
        CapsetCmd::Scale { eps, lambda, omega, window } => {
            let (l, r) = capset::unit_scaling_sides(&quad(eps)?, &quad(lambda)?, &interval(omega)?, &interval(window)?)?;
            ok(Output::Json(json!({ "equal": l == r, "lhs": points_json(&l), "rhs": points_json(&r) })))
        }
        CapsetCmd::Renorm { eps, eta, omega, window } => {
            let o = interval(omega)?;
            let (l, r) = capset::renorm_sides(&quad(eps)?, &quad(eta)?, &o, &o, &interval(window)?)?;
            ok(Output::Json(json!({ "equal": l == r, "lhs": points_json(&l), "rhs": points_json(&r) })))
        }
        CapsetCmd::Qbound { eps, eta, triples } => {
            ok(Output::Json(to_json(&capset::q_bound_experiment(&quad(eps)?, &quad(eta)?, *triples, seed)?)))
        }
        CapsetCmd::Pn { eps, lambda, omega, nmax, samples } => {
            let r = capset::pn_experiment(&quad(eps)?, &quad(lambda)?, &interval(omega)?, *nmax, *samples, seed)?;
            ok(Output::Json(to_json(&r)))
        }
        CapsetCmd::Selfsim { morphism, gaps } => {
            let r = capset::selfsimilar_check(&morph(morphism)?, *gaps)?;
            match fmt {
                Format::Svg => ok(Output::Text(r.to_svg())),
                _ => ok(Output::Json(to_json(&r))),
            }
        }
    }
}

fn run_preserve(cmd: &PreserveCmd, seed: u64) -> Result<Run, CliError> {
    match cmd {
        PreserveCmd::Test { morphism, trials, window, flen } => {
            let r = preserve::test_preservation(&morph(morphism)?, *trials, *window, *flen, seed)?;
            let code = if r.verdict == Verdict::Consistent { 0 } else { EXIT_FALSIFIED };
            Ok(Run { out: Output::Json(to_json(&r)), code })
        }
        PreserveCmd::Dichotomy { matrix: m, samples } => {
            ok(Output::Json(to_json(&preserve::degeneracy_dichotomy_check(&matrix(m)?, *samples, seed)?)))
        }
        PreserveCmd::Transport { matrix: m, params } => {
            let m = matrix(m)?;
            let v = parse::parse_quad_list(params)?;
            let p: [QuadReal; 3] = v.try_into().map_err(|_| CliError::Usage("--params needs three values".into()))?;
            let t = preserve::predicted_params(&m, &p)?;
            ok(Output::Json(json!({ "symbolic": preserve::symbolic_transport(&m), "params": to_json(&t) })))
        }
        PreserveCmd::Fixed { morphism, window, flen } => {
            ok(Output::Json(to_json(&preserve::fixed_point_3iet_check(&morph(morphism)?, *window, *flen)?)))
        }
    }
}

fn run_repro(only: &[u32], fmt: Format) -> Result<Run, CliError> {
    let ids = if only.is_empty() { repro::criterion_ids() } else { only.to_vec() };
    let mut results = Vec::new();
    for id in ids {
        results.push(repro::run(id).ok_or_else(|| CliError::Usage(format!("no criterion {id}")))?);
    }
    let code = if results.iter().all(|r| r.passed) { 0 } else { 1 };
    let out = match fmt {
        Format::Json => Output::Json(json!({ "criteria": to_json(&results) })),
        _ => Output::Text(results.iter().map(|r| r.line() + "\n").collect()),
    };
    Ok(Run { out, code })
}

fn dispatch(cli: &Cli) -> Result<Run, CliError> {
    let fmt = cli.format;
    match &cli.cmd {
        Cmd::Iet(c) => run_iet(c, fmt, cli.approx),
        Cmd::Word(c) => run_word(c, fmt),
        Cmd::Morph(c) => run_morph(c, fmt),
        Cmd::Monoid(c) => run_monoid(c, fmt),
        Cmd::Capset(c) => run_capset(c, fmt, cli.seed),
        Cmd::Preserve(c) => run_preserve(c, cli.seed),
        Cmd::Repro { only } => run_repro(only, fmt),
    }
}

fn render(out: Output, seed: u64) -> String {
    match out {
        Output::Text(s) => s,
        Output::Json(mut v) => {
            match &mut v {
                Value::Object(m) => {
                    m.insert("seed".into(), json!(seed));
                }
                _ => v = json!({ "seed": seed, "result": v }),
            }
            serde_json::to_string_pretty(&v).expect("json renders") + "\n"
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(&cli) {
        Ok(run) => {
            let text = render(run.out, cli.seed);
            let written = match &cli.out {
                Some(path) => fs::write(path, text),
                None => std::io::stdout().write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("{}", json!({ "error": "io", "message": e.to_string() }));
                return ExitCode::from(EXIT_DOMAIN);
            }
            ExitCode::from(run.code)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}\n\nFor more information, try '--help'.");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Domain(e)) => {
            eprintln!("{}", json!({ "error": e.kind(), "message": e.to_string() }));
            ExitCode::from(EXIT_DOMAIN)
        }
    }
}
