use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::Zero;

use g2hitchin::algebra::scalar::parse_rational;
use g2hitchin::algebra::Scalar;
use g2hitchin::bun_chart::{classify, fiber, galois_involution, ChartPoint, FiberKind, FiberPoints};
use g2hitchin::curve::CurveParams;
use g2hitchin::emit::{emit, EmitFormat, EmitObject};
use g2hitchin::higgs::{hamiltonians_at, CotangentPoint, HamiltonianTriple, RstSource};
use g2hitchin::hitchin::{hamiltonians_u, numeric_nice_basis, vgp_hamiltonians, NrCotangentPoint, USource};
use g2hitchin::nr_moduli::NrPoint;
use g2hitchin::verify::{run_suite, Suite, VerifyConfig, DEFAULT_SAMPLES};
use g2hitchin::Error;

#[derive(Parser)]
#[command(name = "g2hitchin", version, about = "Exact formulas and identity checks for the genus-2 Hitchin system")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ParamArgs {
    /// Curve parameters r s t (exact rationals such as 3/2).
    #[arg(long, num_args = 3, value_names = ["R", "S", "T"], allow_hyphen_values = true)]
    params: Option<Vec<String>>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and print a JSON report.
    Verify {
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, default_value_t = g2hitchin::sampling::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        /// Record per-check wall-clock times (makes reports non-reproducible).
        #[arg(long)]
        timings: bool,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Print a stored or derived formula object.
    Emit {
        #[arg(long, value_parser = parse_object)]
        object: EmitObject,
        #[arg(long, default_value = "canonical", value_parser = parse_format)]
        format: EmitFormat,
        #[arg(long, value_enum, default_value_t = SourceArg::Derived)]
        source: SourceArg,
    },
    /// Evaluate a map at exact rational inputs.
    Eval {
        #[arg(value_enum)]
        map: EvalMap,
        #[arg(allow_hyphen_values = true)]
        inputs: Vec<String>,
        #[arg(long, value_enum, default_value_t = SourceArg::Derived)]
        source: SourceArg,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Classifying map from the (R,S,T) chart to P^3.
    Classify {
        #[arg(long, num_args = 3, required = true, allow_hyphen_values = true)]
        rst: Vec<String>,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Chart preimages of a point of P^3.
    Fiber {
        #[arg(long, num_args = 4, required = true, allow_hyphen_values = true)]
        v: Vec<String>,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Galois involution of the chart.
    Involute {
        #[arg(long, num_args = 3, required = true, allow_hyphen_values = true)]
        rst: Vec<String>,
        #[command(flatten)]
        params: ParamArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SourceArg {
    Table,
    Derived,
}

impl SourceArg {
    fn source(self) -> USource {
        match self {
            SourceArg::Table => USource::Literal,
            SourceArg::Derived => USource::Derived,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EvalMap {
    Classify,
    Fiber,
    Involution,
    HamiltoniansRst,
    HamiltoniansU,
    Vgp,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_object(s: &str) -> Result<EmitObject, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_format(s: &str) -> Result<EmitFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Failure classes mapped to exit codes 2 and 1.
enum Failure {
    Usage(String),
    Eval(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Eval(e)
    }
}

fn rationals(xs: &[String]) -> Result<Vec<BigRational>, Failure> {
    xs.iter()
        .map(|x| parse_rational(x).ok_or_else(|| Failure::Usage(format!("not an exact rational: `{x}`"))))
        .collect()
}

fn arity<const N: usize>(xs: &[String], what: &str) -> Result<[BigRational; N], Failure> {
    let v = rationals(xs)?;
    v.try_into().map_err(|v: Vec<_>| Failure::Usage(format!("{what} takes {N} inputs, got {}", v.len())))
}

fn curve_params(p: &ParamArgs) -> Result<CurveParams, Failure> {
    match &p.params {
        None => CurveParams::from_ints(2, 3, 5).map_err(|e| Failure::Usage(e.to_string())),
        Some(v) => CurveParams::parse(&v[0], &v[1], &v[2]).map_err(|e| Failure::Usage(e.to_string())),
    }
}

fn join<T: std::fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn eval_classify(params: &CurveParams, rst: [BigRational; 3]) -> Result<String, Failure> {
    let env = params.env(&BigRational::zero());
    let [r, s, t] = rst;
    let v = classify(&env, &ChartPoint::new(r, s, t))?;
    Ok(join(&v.point.normalized()?.coords))
}

fn eval_fiber(params: &CurveParams, v: [BigRational; 4]) -> Result<String, Failure> {
    let f = fiber(params, &NrPoint::v(v)?)?;
    let kind = match f.kind {
        FiberKind::Generic => "generic",
        FiberKind::DoubleRoot => "double-root",
        FiberKind::Degenerate => "degenerate",
    };
    let mut out = vec![format!("kind {kind}")];
    match &f.points {
        FiberPoints::Rational(pts) => out.extend(pts.iter().map(|p| p.to_string())),
        FiberPoints::Quadratic { radicand, points } => {
            out.push(format!("d^2 = {radicand}"));
            out.extend(points.iter().map(|p| p.to_string()));
        }
    }
    Ok(out.join("\n"))
}

fn eval_involution(params: &CurveParams, rst: [BigRational; 3]) -> Result<String, Failure> {
    let env = params.env(&BigRational::zero());
    let [r, s, t] = rst;
    Ok(galois_involution(&env, &ChartPoint::new(r, s, t))?.to_string())
}

fn run_eval(map: EvalMap, inputs: &[String], source: USource, params: &CurveParams) -> Result<String, Failure> {
    match map {
        EvalMap::Classify => eval_classify(params, arity(inputs, "classify")?),
        EvalMap::Fiber => eval_fiber(params, arity(inputs, "fiber")?),
        EvalMap::Involution => eval_involution(params, arity(inputs, "involution")?),
        EvalMap::HamiltoniansRst => {
            let [r, s, t, cr, cs, ct] = arity(inputs, "hamiltonians-rst (R S T c_r c_s c_t)")?;
            let env = params.env(&BigRational::zero());
            let cot = CotangentPoint { base: ChartPoint::new(r, s, t), c: [cr, cs, ct] };
            Ok(join(&hamiltonians_at(&env, &cot, RstSource::Table)?.h))
        }
        EvalMap::HamiltoniansU => {
            let [u0, u1, u2, u3, e0, e1, e2] = arity(inputs, "hamiltonians-u (u0 u1 u2 u3 eta0 eta1 eta2)")?;
            let (oenv, _) = numeric_nice_basis(params)?;
            let t = oenv.template().clone();
            let base = NrPoint::u([u0, u1, u2, u3].map(|x| t.embed(&x)))?;
            let q = NrCotangentPoint::new(base, [e0, e1, e2].map(|x| t.embed(&x)))?;
            Ok(join(&hamiltonians_u(&oenv, &q, source)?.h))
        }
        EvalMap::Vgp => {
            let h = arity(inputs, "vgp (h0 h1 h2)")?;
            let env = params.env(&BigRational::zero());
            Ok(join(&vgp_hamiltonians(&env, &HamiltonianTriple { h })?))
        }
    }
}

/// Positional inputs accept negative fractions such as `-7/3`, so clap hands
/// over any options that follow them; pick those out here.
fn split_trailing_options(
    raw: Vec<String>,
    mut source: SourceArg,
    mut params: ParamArgs,
) -> Result<(Vec<String>, SourceArg, ParamArgs), Failure> {
    let mut inputs = Vec::new();
    let mut it = raw.into_iter();
    while let Some(a) = it.next() {
        match a.as_str() {
            "--params" => {
                let v: Vec<String> = it.by_ref().take(3).collect();
                if v.len() != 3 {
                    return Err(Failure::Usage("--params takes three values".into()));
                }
                params.params = Some(v);
            }
            "--source" => {
                let v = it.next().ok_or_else(|| Failure::Usage("--source takes a value".into()))?;
                source = SourceArg::from_str(&v, false).map_err(Failure::Usage)?;
            }
            _ if a.starts_with("--") => return Err(Failure::Usage(format!("unexpected option `{a}`"))),
            _ => inputs.push(a),
        }
    }
    Ok((inputs, source, params))
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    let text = match cli.command {
        Command::Verify { suite, seed, samples, timings, params } => {
            let params = match params.params {
                None => None,
                Some(_) => Some(curve_params(&params)?),
            };
            let report = run_suite(suite, &VerifyConfig { seed, params, samples, timings });
            println!("{}", report.to_json());
            return Ok(if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
        Command::Emit { object, format, source } => {
            print!("{}", emit(object, format, source.source())?);
            return Ok(ExitCode::SUCCESS);
        }
        Command::Eval { map, inputs, source, params } => {
            let (inputs, source, params) = split_trailing_options(inputs, source, params)?;
            run_eval(map, &inputs, source.source(), &curve_params(&params)?)?
        }
        Command::Classify { rst, params } => eval_classify(&curve_params(&params)?, arity(&rst, "--rst")?)?,
        Command::Fiber { v, params } => eval_fiber(&curve_params(&params)?, arity(&v, "--v")?)?,
        Command::Involute { rst, params } => eval_involution(&curve_params(&params)?, arity(&rst, "--rst")?)?,
    };
    println!("{text}");
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Eval(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
