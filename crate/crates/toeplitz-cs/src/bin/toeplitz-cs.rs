use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use toeplitz_cs::gen::Constraint;
use toeplitz_cs::io::{parse_symbol, serialize_symbol, ParsedSymbol};
use toeplitz_cs::normality::{
    brown_halmos_scalar, default_truncation, ghr_normal_check, kkl_normal_check, normal1_case,
    NormalCase,
};
use toeplitz_cs::operator::{block_toeplitz, conjugation_op, toeplitz, ConjugationSpec};
use toeplitz_cs::report::{CheckReport, NormalityReport, Verdict};
use toeplitz_cs::symmetry::{
    cs_coeff_block, cs_coeff_scalar, cs_numeric, infer_lambda_block, infer_lambda_scalar,
};
use toeplitz_cs::{Error, C64};

const EXIT_PASS: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_OTHER: u8 = 2;

#[derive(Parser)]
#[command(
    name = "toeplitz-cs",
    about = "Complex symmetry and normality checks for truncated (block) Toeplitz operators"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Default)]
struct PhaseArgs {
    /// Real value of the phase (e.g. --lambda -1)
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    lambda_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    lambda_im: Option<f64>,
    /// Angle theta, interpreted as exp(i*theta)
    #[arg(long, allow_hyphen_values = true)]
    lambda_arg: Option<f64>,
}

#[derive(Args, Clone, Default)]
struct MuArgs {
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    mu_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    mu_im: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    mu_arg: Option<f64>,
}

fn resolve_phase(
    name: &str,
    plain: Option<f64>,
    re: Option<f64>,
    im: Option<f64>,
    arg: Option<f64>,
) -> Result<Option<C64>, Error> {
    let raw = match (plain, re, im, arg) {
        (None, None, None, None) => return Ok(None),
        (Some(v), None, None, None) => C64::new(v, 0.0),
        (None, _, _, None) if re.is_some() || im.is_some() => {
            C64::new(re.unwrap_or(0.0), im.unwrap_or(0.0))
        }
        (None, None, None, Some(t)) => C64::from_polar(1.0, t),
        _ => {
            return Err(Error::InvalidArgument(format!(
                "give {name} as exactly one of --{name}, --{name}-re/--{name}-im, --{name}-arg"
            )))
        }
    };
    if (raw.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "{name} must be unimodular (|{name}| = {:.3e})",
            raw.norm()
        )));
    }
    Ok(Some(raw / raw.norm()))
}

impl PhaseArgs {
    fn resolve(&self) -> Result<Option<C64>, Error> {
        resolve_phase("lambda", self.lambda, self.lambda_re, self.lambda_im, self.lambda_arg)
    }
}

impl MuArgs {
    fn resolve(&self) -> Result<C64, Error> {
        Ok(resolve_phase("mu", self.mu, self.mu_re, self.mu_im, self.mu_arg)?
            .unwrap_or(C64::new(1.0, 0.0)))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CsMethod {
    Coeff,
    Numeric,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormalMethod {
    Kkl,
    Ghr,
    BrownHalmos,
    CaseI,
    CaseIi,
    CaseIv,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Scalar,
    Block2,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstraintArg {
    Free,
    Analytic,
    RealValued,
    BrownHalmos,
    LambdaSymmetric,
}

#[derive(Subcommand)]
enum Cmd {
    /// Test complex symmetry of the truncated Toeplitz operator of a symbol
    CheckCs {
        #[arg(long)]
        input: String,
        #[command(flatten)]
        lambda: PhaseArgs,
        #[command(flatten)]
        mu: MuArgs,
        /// Truncation size (default 4(d+1))
        #[arg(long)]
        size: Option<usize>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = CsMethod::Both)]
        method: CsMethod,
        #[arg(long)]
        json: bool,
    },
    /// List the unimodular phases for which the symbol is symmetric
    InferLambda {
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Test normality of the (block) Toeplitz operator of a symbol
    CheckNormal {
        #[arg(long)]
        input: String,
        #[arg(long, value_enum, default_value_t = NormalMethod::Kkl)]
        method: NormalMethod,
        #[arg(long)]
        size: Option<usize>,
        #[arg(long)]
        pad: Option<usize>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Generate a random symbol file on stdout
    Generate {
        #[arg(long, value_enum, default_value_t = KindArg::Scalar)]
        kind: KindArg,
        #[command(flatten)]
        lambda: PhaseArgs,
        /// RNG seed (defaults to TOEPLITZ_SEED or 0)
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 2)]
        degree: i64,
        #[arg(long, value_enum, default_value_t = ConstraintArg::Free)]
        constraint: ConstraintArg,
    },
    /// Run the full property suite
    Verify {
        #[arg(long)]
        seed: Option<u64>,
        /// Comma-separated truncation sizes
        #[arg(long, default_value = "6,8", value_delimiter = ',')]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a symbol at a point of the unit circle
    Eval {
        #[arg(long)]
        input: String,
        /// Point as "re" or "re,im"
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long)]
        json: bool,
    },
}

fn default_seed() -> u64 {
    std::env::var("TOEPLITZ_SEED")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(0)
}

fn load(path: &str) -> Result<ParsedSymbol, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {path}: {e}")))?;
    parse_symbol(&text)
}

fn parse_point(s: &str) -> Result<C64, Error> {
    let parts: Vec<&str> = s.split(',').collect();
    let parse = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| Error::InvalidArgument(format!("bad number in point: {t:?}")))
    };
    match parts.as_slice() {
        [re] => Ok(C64::new(parse(re)?, 0.0)),
        [re, im] => Ok(C64::new(parse(re)?, parse(im)?)),
        _ => Err(Error::InvalidArgument("point must be \"re\" or \"re,im\"".into())),
    }
}

fn check_verdict_text(rep: &CheckReport, label: &str) {
    println!(
        "{label}: {}, residual {:.3e} (tol {:.1e})",
        if rep.verdict { "true" } else { "false" },
        rep.residual,
        rep.tol
    );
    if !rep.verdict {
        if let Some(rel) = rep.violated_relation {
            println!("  violated relation {rel} at n={}", rep.violated_index.unwrap_or(0));
        } else if let Some(n) = rep.violated_index {
            println!("  violated at n={n}");
        }
    }
}

fn check_report_json(rep: &CheckReport, label: &str) -> serde_json::Value {
    let mut v = serde_json::to_value(rep).expect("reports serialize");
    v["check"] = json!(label);
    v
}

fn run_check_cs(
    input: &str,
    lambda: &PhaseArgs,
    mu: &MuArgs,
    size: Option<usize>,
    tol: f64,
    method: CsMethod,
    json_out: bool,
) -> Result<u8, Error> {
    let sym = load(input)?;
    let lam = lambda.resolve()?.ok_or_else(|| {
        Error::InvalidArgument("check-cs needs a lambda (--lambda/--lambda-re/--lambda-arg)".into())
    })?;
    let mu = mu.resolve()?;
    let n = size.unwrap_or_else(|| default_truncation(sym.band_degree()).0);

    let coeff = match (&sym, method) {
        (_, CsMethod::Numeric) => None,
        (ParsedSymbol::Scalar(s), _) => Some(cs_coeff_scalar(s, lam, tol)?),
        (ParsedSymbol::Block(m), _) => Some(cs_coeff_block(m, lam, tol)?),
    };
    let numeric = match (&sym, method) {
        (_, CsMethod::Coeff) => None,
        (ParsedSymbol::Scalar(s), _) => {
            let t = toeplitz(s, n)?;
            let c = conjugation_op(&ConjugationSpec::scalar(mu, lam), n)?;
            Some(cs_numeric(&t, &c, tol)?)
        }
        (ParsedSymbol::Block(m), _) => {
            let t = block_toeplitz(m, n)?;
            let c = conjugation_op(&ConjugationSpec::block(mu, lam), n)?;
            Some(cs_numeric(&t, &c, tol)?)
        }
    };

    let verdict = coeff.as_ref().map_or(true, |r| r.verdict)
        && numeric.as_ref().map_or(true, |r| r.verdict);
    if json_out {
        let mut parts = Vec::new();
        if let Some(r) = &coeff {
            parts.push(check_report_json(r, "coefficient"));
        }
        if let Some(r) = &numeric {
            parts.push(check_report_json(r, "dense"));
        }
        println!("{}", json!({ "cs": verdict, "size": n, "reports": parts }));
    } else {
        if let Some(r) = &coeff {
            check_verdict_text(r, "CS (coefficient test)");
        }
        if let Some(r) = &numeric {
            check_verdict_text(r, &format!("CS (dense test, N={n})"));
        }
    }
    Ok(if verdict { EXIT_PASS } else { EXIT_FAIL })
}

fn run_infer(input: &str, tol: f64, json_out: bool) -> Result<u8, Error> {
    let sym = load(input)?;
    let inf = match &sym {
        ParsedSymbol::Scalar(s) => infer_lambda_scalar(s, tol),
        ParsedSymbol::Block(m) => infer_lambda_block(m, tol),
    };
    if json_out {
        let cands: Vec<_> = inf
            .candidates
            .iter()
            .map(|(lam, rep)| json!({ "lambda": [lam.re, lam.im], "residual": rep.residual }))
            .collect();
        println!(
            "{}",
            json!({ "unconstrained": inf.unconstrained, "candidates": cands })
        );
    } else if inf.unconstrained {
        println!("every unimodular lambda works (symbol has no off-diagonal constraints)");
    } else if inf.candidates.is_empty() {
        println!("no unimodular lambda satisfies the symmetry relations");
    } else {
        for (lam, rep) in &inf.candidates {
            println!("lambda = {:+.12} {:+.12}i  residual {:.3e}", lam.re, lam.im, rep.residual);
        }
    }
    Ok(if inf.unconstrained || !inf.candidates.is_empty() { EXIT_PASS } else { EXIT_FAIL })
}

fn normality_exit(rep: &NormalityReport) -> u8 {
    match rep.verdict {
        Verdict::Pass => EXIT_PASS,
        Verdict::Fail => EXIT_FAIL,
        Verdict::NotApplicable => EXIT_OTHER,
    }
}

fn print_normality(rep: &NormalityReport, label: &str, json_out: bool) {
    if json_out {
        let mut v = serde_json::to_value(rep).expect("reports serialize");
        v["method"] = json!(label);
        println!("{v}");
        return;
    }
    match rep.verdict {
        Verdict::Pass => println!("normal ({label}): true"),
        Verdict::Fail => println!("normal ({label}): false"),
        Verdict::NotApplicable => {
            println!(
                "normal ({label}): not applicable{}",
                rep.detail.as_deref().map(|d| format!(" ({d})")).unwrap_or_default()
            )
        }
    }
    for r in &rep.residuals {
        println!("  {}: {:.3e}", r.name, r.value);
    }
    if let Some(u) = rep.phase_u {
        println!("  phase u = {:+.12} {:+.12}i", u.re, u.im);
    }
    if let Some(u) = rep.unitary_u {
        println!(
            "  U = [[{:.6} {:+.6}i, {:.6} {:+.6}i], [{:.6} {:+.6}i, {:.6} {:+.6}i]]",
            u[(0, 0)].re, u[(0, 0)].im, u[(0, 1)].re, u[(0, 1)].im,
            u[(1, 0)].re, u[(1, 0)].im, u[(1, 1)].re, u[(1, 1)].im
        );
    }
}

fn run_check_normal(
    input: &str,
    method: NormalMethod,
    size: Option<usize>,
    pad: Option<usize>,
    tol: f64,
    json_out: bool,
) -> Result<u8, Error> {
    let sym = load(input)?;
    let (dn, dp) = default_truncation(sym.band_degree());
    let (n, pad) = (size.unwrap_or(dn), pad.unwrap_or(dp));
    let rep = match (&sym, method) {
        (ParsedSymbol::Scalar(s), NormalMethod::BrownHalmos) => brown_halmos_scalar(s, tol),
        (ParsedSymbol::Scalar(_), _) => {
            return Err(Error::InvalidArgument(
                "scalar symbols support only --method brown-halmos".into(),
            ))
        }
        (ParsedSymbol::Block(_), NormalMethod::BrownHalmos) => {
            return Err(Error::InvalidArgument(
                "--method brown-halmos applies to scalar symbols".into(),
            ))
        }
        (ParsedSymbol::Block(m), NormalMethod::Kkl) => kkl_normal_check(m, n, pad, tol)?,
        (ParsedSymbol::Block(m), NormalMethod::Ghr) => ghr_normal_check(m, tol)?,
        (ParsedSymbol::Block(m), NormalMethod::CaseI) => {
            normal1_case(m, NormalCase::I, n, pad, tol)?
        }
        (ParsedSymbol::Block(m), NormalMethod::CaseIi) => {
            normal1_case(m, NormalCase::II, n, pad, tol)?
        }
        (ParsedSymbol::Block(m), NormalMethod::CaseIv) => {
            normal1_case(m, NormalCase::IV, n, pad, tol)?
        }
    };
    let label = match method {
        NormalMethod::Kkl => "truncated words",
        NormalMethod::Ghr => "symbol relation",
        NormalMethod::BrownHalmos => "coefficient phase",
        NormalMethod::CaseI => "case i",
        NormalMethod::CaseIi => "case ii",
        NormalMethod::CaseIv => "case iv",
    };
    print_normality(&rep, label, json_out);
    Ok(normality_exit(&rep))
}

fn run_generate(
    kind: KindArg,
    lambda: &PhaseArgs,
    seed: Option<u64>,
    degree: i64,
    constraint: ConstraintArg,
) -> Result<u8, Error> {
    let seed = seed.unwrap_or_else(default_seed);
    let lam = lambda.resolve()?;
    let constraint = match constraint {
        ConstraintArg::Free => Constraint::Free,
        ConstraintArg::Analytic => Constraint::Analytic,
        ConstraintArg::RealValued => Constraint::RealValued,
        ConstraintArg::BrownHalmos => Constraint::BrownHalmos,
        ConstraintArg::LambdaSymmetric => Constraint::LambdaSymmetric(lam.ok_or_else(|| {
            Error::InvalidArgument("--constraint lambda-symmetric needs a lambda".into())
        })?),
    };
    let sym = match kind {
        KindArg::Scalar => ParsedSymbol::Scalar(toeplitz_cs::gen::random_scalar(
            seed, degree, constraint,
        )?),
        KindArg::Block2 => {
            ParsedSymbol::Block(toeplitz_cs::gen::random_block(seed, degree, constraint)?)
        }
    };
    println!("{}", serialize_symbol(&sym, Some(&format!("seed-{seed}"))));
    Ok(EXIT_PASS)
}

fn run_verify(seed: Option<u64>, sizes: &[usize], tol: f64, json_out: bool) -> Result<u8, Error> {
    let seed = seed.unwrap_or_else(default_seed);
    let rep = toeplitz_cs::suite::run_suite(seed, sizes, tol)?;
    if json_out {
        println!("{}", serde_json::to_string_pretty(&rep).expect("reports serialize"));
    } else {
        println!(
            "suite: seed {seed}, sizes {:?}, tol {:.1e}, {:.0} ms",
            sizes, tol, rep.wall_time_ms
        );
        for p in &rep.properties {
            println!(
                "  {:<45} {:>4} cases, {} failures, max residual {:.3e}",
                p.name, p.cases, p.failures, p.max_residual
            );
            for ce in &p.counterexamples {
                println!("    counterexample ({}):", ce.parameters);
                for line in ce.symbol.lines() {
                    println!("      {line}");
                }
            }
        }
        println!(
            "result: {}",
            if rep.all_pass() { "all properties pass" } else { "FAILURES" }
        );
    }
    Ok(if rep.all_pass() { EXIT_PASS } else { EXIT_FAIL })
}

fn run_eval(input: &str, point: &str, json_out: bool) -> Result<u8, Error> {
    let sym = load(input)?;
    let z = parse_point(point)?;
    match sym {
        ParsedSymbol::Scalar(s) => {
            let v = s.eval(z)?;
            if json_out {
                println!("{}", json!({ "value": [v.re, v.im] }));
            } else {
                println!("{:+.12} {:+.12}i", v.re, v.im);
            }
        }
        ParsedSymbol::Block(m) => {
            let v = m.eval(z)?;
            if json_out {
                let rows: Vec<Vec<[f64; 2]>> = (0..2)
                    .map(|r| (0..2).map(|c| [v[(r, c)].re, v[(r, c)].im]).collect())
                    .collect();
                println!("{}", json!({ "value": rows }));
            } else {
                for r in 0..2 {
                    println!(
                        "[{:+.12} {:+.12}i, {:+.12} {:+.12}i]",
                        v[(r, 0)].re, v[(r, 0)].im, v[(r, 1)].re, v[(r, 1)].im
                    );
                }
            }
        }
    }
    Ok(EXIT_PASS)
}

fn dispatch(cli: Cli) -> Result<u8, Error> {
    match cli.cmd {
        Cmd::CheckCs { input, lambda, mu, size, tol, method, json } => {
            run_check_cs(&input, &lambda, &mu, size, tol, method, json)
        }
        Cmd::InferLambda { input, tol, json } => run_infer(&input, tol, json),
        Cmd::CheckNormal { input, method, size, pad, tol, json } => {
            run_check_normal(&input, method, size, pad, tol, json)
        }
        Cmd::Generate { kind, lambda, seed, degree, constraint } => {
            run_generate(kind, &lambda, seed, degree, constraint)
        }
        Cmd::Verify { seed, sizes, tol, json } => run_verify(seed, &sizes, tol, json),
        Cmd::Eval { input, point, json } => run_eval(&input, &point, json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_OTHER)
        }
    }
}
