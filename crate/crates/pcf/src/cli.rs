use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use puiseux_cf::berkovich::{
    ball_of_prefix, prefix_representation, reduce_to_ray, Promenade, PromenadeTail, DEFAULT_REDUCTION_STEPS,
};
use puiseux_cf::cf::{
    approximants, best_approximation_check, detect_periodicity, error_valuation, error_valuation_exact,
    expand_stream, BestApproximation, ContinuedFraction, Expansion, ExpansionStatus, PeriodVerdict,
};
use puiseux_cf::typeiv::{Exclusion, NestedBallSeq};
use puiseux_cf::{Degree, Error, Exponent, Field, Fp, Rational, SeriesStream, TruncatedSeries};
use serde_json::{json, Value};

use crate::parse::{parse_ball, parse_cf, parse_point, parse_poly, parse_rational, parse_word};
use crate::render::{cf_json, promenade_json, promenade_svg, promenade_tsv, tail_str};
use crate::spec::{parse_spec, Spec};

/// Quotients read from periodic literals and terms read from `e69` sums.
const STREAM_BUDGET: usize = 4096;

#[derive(Parser, Debug)]
#[command(name = "pcf", version, about = "Continued fractions over Puiseux series")]
pub struct Cli {
    /// Coefficient field: `q` or `fp:<p>` for a prime p <= 31.
    #[arg(long, global = true, default_value = "q")]
    pub field: String,
    /// Precision cutoff on the exponent axis: terms above it are computed.
    #[arg(long, global = true, default_value = "-50", allow_hyphen_values = true)]
    pub cutoff: String,
    /// Partial quotients to show, f0 included.
    #[arg(long, global = true, default_value_t = 32, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_terms: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Tsv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Continued fraction expansion of a value or stream.
    Expand {
        #[arg(allow_hyphen_values = true)]
        spec: String,
    },
    /// Value of a spec: exact when possible, else a truncated series.
    Eval {
        #[arg(allow_hyphen_values = true)]
        spec: String,
    },
    /// Approximants p_n/q_n, n = 0..=N.
    Approx {
        #[arg(allow_hyphen_values = true)]
        spec: String,
        #[arg(long)]
        n: Option<usize>,
    },
    /// nu(z - p_n/q_n), checked against deg f_{n+1} + 2 deg q_n.
    Error {
        #[arg(allow_hyphen_values = true)]
        spec: String,
        #[arg(long)]
        n: usize,
    },
    /// Whether p/q with nu(z - p/q) > 2 deg q is an approximant.
    Best {
        #[arg(allow_hyphen_values = true)]
        spec: String,
        #[arg(allow_hyphen_values = true)]
        p: String,
        #[arg(allow_hyphen_values = true)]
        q: String,
    },
    /// Eventual periodicity and the quadratic it implies.
    Period {
        #[arg(allow_hyphen_values = true)]
        spec: String,
        #[arg(long, default_value_t = 8)]
        max_period: usize,
        /// Added to 2 deg(disc) to form the verification threshold.
        #[arg(long, default_value = "10")]
        margin: String,
    },
    /// Distance between two points eta(a, r).
    BerkDist { a: String, b: String },
    /// Join of two points.
    BerkJoin { a: String, b: String },
    /// Image of a point under a word in i, t(f), m(d1, d2, f).
    BerkAct { word: String, point: String },
    /// Reduction to the ray eta(0, -v), with the witness word.
    Reduce {
        point: String,
        #[arg(long, default_value_t = DEFAULT_REDUCTION_STEPS)]
        max_steps: usize,
    },
    /// Breakpoints of the promenade towards a value or a type IV spec.
    Promenade {
        #[arg(allow_hyphen_values = true)]
        spec: String,
        #[arg(long, allow_hyphen_values = true)]
        t_max: Option<String>,
        /// Also write an SVG plot here.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// The open ball of a finite prefix, with optional membership probes.
    Ball {
        prefix: String,
        #[arg(long = "probe", allow_hyphen_values = true)]
        probes: Vec<String>,
    },
    /// B = B_{w - D} for a closed ball.
    PrefixRep { ball: String },
    /// Nested ball sequence report for e69[:schedule] or iva:<schedule>:<bound>.
    Typeiv {
        spec: String,
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long = "probe", allow_hyphen_values = true)]
        probes: Vec<String>,
    },
}

/// Rendered result of a command.
pub struct Report {
    pub text: String,
    pub json: Value,
    pub tsv: Option<String>,
    /// The computation stopped for lack of precision or budget.
    pub exhausted: bool,
}

impl Report {
    fn new(text: impl Into<String>, json: Value) -> Self {
        Report {
            text: text.into(),
            json,
            tsv: None,
            exhausted: false,
        }
    }
}

/// Exit status for an error: 2 for exhaustion, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_exhaustion() {
        2
    } else {
        1
    }
}

pub fn run(cli: &Cli) -> Result<Report, Error> {
    let field = cli.field.as_str();
    macro_rules! primes {
        ($($p:literal),*) => {
            match field {
                "q" => execute::<Rational>(cli),
                $(concat!("fp:", $p) => execute::<Fp<$p>>(cli),)*
                _ => Err(Error::Domain(format!(
                    "unsupported field {:?}: use q or fp:<p> with p in 2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31",
                    field
                ))),
            }
        };
    }
    primes!(2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31)
}

struct Ctx {
    cutoff: Exponent,
    /// Partials after f0.
    max_terms: usize,
}

/// Expansion of a type I spec: exact values through Euclid, streams at the
/// cutoff.
fn expansion<F: Field>(spec: &Spec<F>, ctx: &Ctx) -> Result<(ContinuedFraction<F>, ExpansionStatus), Error> {
    if spec.is_type_iv() {
        return Err(Error::Domain(
            "a type IV spec is not an element; use the typeiv or promenade commands".into(),
        ));
    }
    if let Some(x) = spec.exact() {
        let mut e = Expansion::of_rational(&x);
        let status = e.run(ctx.max_terms);
        return Ok((e.expression(), status));
    }
    expand_stream(&spec.stream(STREAM_BUDGET)?, ctx.max_terms, &ctx.cutoff)
}

fn truncated<F: Field>(spec: &Spec<F>, ctx: &Ctx) -> Result<TruncatedSeries<F>, Error> {
    match spec.exact() {
        Some(x) => TruncatedSeries::from_rational(&x, &Degree::Finite(ctx.cutoff.clone())),
        None => spec.stream(STREAM_BUDGET)?.truncate(&ctx.cutoff),
    }
}

fn is_exhausted(status: ExpansionStatus) -> bool {
    matches!(
        status,
        ExpansionStatus::PrecisionExhausted | ExpansionStatus::BudgetExhausted
    )
}

fn execute<F: Field>(cli: &Cli) -> Result<Report, Error> {
    let ctx = Ctx {
        cutoff: parse_rational(&cli.cutoff)?,
        max_terms: cli.max_terms as usize - 1,
    };
    match &cli.command {
        Command::Expand { spec } => {
            let (cf, status) = expansion(&parse_spec::<F>(spec)?, &ctx)?;
            let mut r = Report::new(format!("{} ({})", cf, status.as_str()), cf_json(&cf, status));
            r.exhausted = is_exhausted(status);
            Ok(r)
        }
        Command::Eval { spec } => {
            let spec = parse_spec::<F>(spec)?;
            if spec.is_type_iv() {
                return Err(Error::Domain("a type IV spec has no value".into()));
            }
            if let Some(x) = spec.exact() {
                return Ok(Report::new(x.to_string(), json!({"value": x.to_string(), "exact": true})));
            }
            let z = truncated(&spec, &ctx)?;
            Ok(Report::new(z.to_string(), json!({"value": z.to_string(), "exact": false})))
        }
        Command::Approx { spec, n } => {
            let (cf, status) = expansion(&parse_spec::<F>(spec)?, &ctx)?;
            let known = cf.quotients().len();
            let n = n.unwrap_or(known.saturating_sub(1));
            if n >= known && is_exhausted(status) {
                return Err(Error::PrecisionExhausted {
                    needed: Degree::Finite(ctx.cutoff.clone()),
                });
            }
            let pairs = approximants(&cf, n)?;
            let mut text = String::new();
            let mut tsv = String::from("n\tp\tq\n");
            for a in &pairs {
                text += &format!("x_{} = ({})/({})\n", a.index, a.p, a.q);
                tsv += &format!("{}\t{}\t{}\n", a.index, a.p, a.q);
            }
            let json = Value::Array(
                pairs
                    .iter()
                    .map(|a| json!({"n": a.index, "p": a.p.to_string(), "q": a.q.to_string()}))
                    .collect(),
            );
            let mut r = Report::new(text.trim_end(), json);
            r.tsv = Some(tsv);
            Ok(r)
        }
        Command::Error { spec, n } => {
            let spec = parse_spec::<F>(spec)?;
            let v = match spec.exact() {
                Some(x) => error_valuation_exact(&x, *n)?,
                None => error_valuation(&spec.stream(STREAM_BUDGET)?, *n, &ctx.cutoff)?,
            };
            Ok(Report::new(
                format!("nu(z - x_{}) = {}", n, v),
                json!({"n": n, "valuation": v.to_string()}),
            ))
        }
        Command::Best { spec, p, q } => {
            let spec = parse_spec::<F>(spec)?;
            let z = match spec.exact() {
                Some(x) => SeriesStream::from_rational(&x),
                None => spec.stream(STREAM_BUDGET)?,
            };
            let (p, q) = (parse_poly::<F>(p)?, parse_poly::<F>(q)?);
            Ok(match best_approximation_check(&z, &p, &q, &ctx.cutoff)? {
                BestApproximation::IsApproximant(n) => Report::new(
                    format!("approximant x_{}", n),
                    json!({"result": "approximant", "n": n}),
                ),
                BestApproximation::NotBetter => Report::new(
                    "not-better: nu(z - p/q) <= 2 deg q",
                    json!({"result": "not-better"}),
                ),
            })
        }
        Command::Period {
            spec,
            max_period,
            margin,
        } => {
            let spec = parse_spec::<F>(spec)?;
            let (cf, _) = expansion(&spec, &ctx)?;
            let z = truncated(&spec, &ctx)?;
            let margin = parse_rational(margin)?;
            match detect_periodicity(&cf, *max_period, Some(&z), &margin) {
                None => Ok(Report::new(
                    format!("no period found in {} quotients", cf.quotients().len()),
                    json!({"periodic": false}),
                )),
                Some(p) => {
                    let (verified, residual, threshold) = match &p.verdict {
                        PeriodVerdict::Verified { residual, threshold } => (true, residual, threshold),
                        PeriodVerdict::Heuristic { residual, threshold } => (false, residual, threshold),
                    };
                    let text = format!(
                        "preperiod {}, period {}\nquadratic: {}\n{}: nu(residual) >= {}, threshold {}",
                        p.preperiod,
                        p.period,
                        p.quadratic,
                        if verified { "verified" } else { "heuristic" },
                        residual,
                        threshold
                    );
                    Ok(Report::new(
                        text,
                        json!({
                            "periodic": true,
                            "preperiod": p.preperiod,
                            "period": p.period,
                            "quadratic": p.quadratic.to_string(),
                            "verified": verified,
                            "residual": residual.to_string(),
                            "threshold": threshold.to_string(),
                        }),
                    ))
                }
            }
        }
        Command::BerkDist { a, b } => {
            let d = parse_point::<F>(a)?.distance(&parse_point(b)?);
            Ok(Report::new(d.to_string(), json!({"distance": d.to_string()})))
        }
        Command::BerkJoin { a, b } => {
            let j = parse_point::<F>(a)?.join(&parse_point(b)?);
            Ok(Report::new(
                j.to_string(),
                json!({"center": j.center().to_string(), "radius": j.radius().to_string()}),
            ))
        }
        Command::BerkAct { word, point } => {
            let p = parse_word::<F>(word)?.act(&parse_point(point)?)?;
            Ok(Report::new(
                p.to_string(),
                json!({"center": p.center().to_string(), "radius": p.radius().to_string()}),
            ))
        }
        Command::Reduce { point, max_steps } => {
            let r = reduce_to_ray(&parse_point::<F>(point)?, *max_steps)?;
            Ok(Report::new(
                format!("v = {}\nwitness = {}", r.v, r.witness),
                json!({"v": r.v.to_string(), "witness": r.witness.to_string()}),
            ))
        }
        Command::Promenade { spec, t_max, svg } => {
            let t_max = t_max.as_deref().map(parse_rational).transpose()?;
            let spec = parse_spec::<F>(spec)?;
            let w = match &spec {
                Spec::Iva { schedule, .. } => {
                    let degrees: Vec<Exponent> = (1..=ctx.max_terms).map_while(|i| schedule.term(i)).collect();
                    let limit = schedule.sum_limit().map(|s| s.scale(2));
                    Promenade::from_degrees(&degrees, PromenadeTail::Accumulates { limit }, t_max.as_ref())
                }
                Spec::E69(_) => Promenade::pure_descent(
                    Exponent::zero(),
                    PromenadeTail::Accumulates {
                        limit: Some(Exponent::zero()),
                    },
                ),
                _ => {
                    let (cf, status) = expansion(&spec, &ctx)?;
                    Promenade::from_expansion(&cf, status, t_max.as_ref())
                }
            };
            if let Some(path) = svg {
                std::fs::write(path, promenade_svg(&w))
                    .map_err(|e| Error::Domain(format!("cannot write {}: {}", path.display(), e)))?;
            }
            let mut text = String::from("t v\n");
            for (t, v) in w.breakpoints() {
                text += &format!("{} {}\n", t, v);
            }
            text += &format!("tail: {}", tail_str(w.tail()));
            let mut r = Report::new(text, promenade_json(&w));
            r.tsv = Some(promenade_tsv(&w));
            Ok(r)
        }
        Command::Ball { prefix, probes } => {
            let lit = parse_cf::<F>(prefix)?;
            if !lit.is_finite() {
                return Err(Error::Domain("the prefix must be a finite literal".into()));
            }
            let cf = ContinuedFraction::finite(lit.prefix)?;
            let b = ball_of_prefix(&cf)?;
            let mut text = b.to_string();
            let mut rows = Vec::new();
            for probe in probes {
                let z = parse_spec::<F>(probe)?;
                let inside = b.contains(&truncated(&z, &ctx)?)?;
                text += &format!("\n{}: {}", probe, if inside { "inside" } else { "outside" });
                rows.push(json!({"probe": probe, "inside": inside}));
            }
            Ok(Report::new(
                text,
                json!({"ball": b.to_string(), "center": b.center().to_string(), "radius": b.radius().to_string(), "probes": rows}),
            ))
        }
        Command::PrefixRep { ball } => {
            let rep = prefix_representation(&parse_ball::<F>(ball)?)?;
            let prefix = rep.prefix.as_ref().map(|p| p.to_string());
            Ok(Report::new(
                format!(
                    "prefix = {}\nimage = {}\nrho = {}",
                    prefix.as_deref().unwrap_or("(empty)"),
                    rep.image,
                    rep.rho
                ),
                json!({"prefix": prefix, "image": rep.image.to_string(), "rho": rep.rho.to_string()}),
            ))
        }
        Command::Typeiv { spec, n, probes } => typeiv::<F>(spec, *n, probes),
    }
}

fn typeiv<F: Field>(spec: &str, n: usize, probes: &[String]) -> Result<Report, Error> {
    let mut seq = match parse_spec::<F>(spec)? {
        Spec::E69(s) => NestedBallSeq::e69_sequence(s, n)?,
        Spec::Iva { schedule, bound } => NestedBallSeq::iva(schedule, bound, n)?,
        _ => {
            return Err(Error::Domain(
                "expected e69[:<schedule>] or iva:<schedule>:<bound>".into(),
            ))
        }
    };
    let mut text = String::from("n\tcenter\tradius\tnested\n");
    let mut balls = Vec::new();
    for (k, b) in seq.balls().iter().enumerate() {
        // every ball was checked against its predecessor when produced
        text += &format!("{}\t{}\t{}\tyes\n", k + 1, b.center(), b.radius());
        balls.push(json!({"n": k + 1, "center": b.center().to_string(), "radius": b.radius().to_string(), "nested": true}));
    }
    let tsv = text.clone();
    let kind = seq.kind().as_str();
    let limit = seq.radius_limit().map(|l| l.to_string());
    let bound = seq.radius_bound().map(|l| l.to_string());
    text += &match (&limit, &bound) {
        (Some(l), _) => format!("kind: {}\nradius limit: {}\n", kind, l),
        (None, Some(b)) => format!("kind: {}\nradius limit: <= {}\n", kind, b),
        (None, None) => format!("kind: {}\nradius limit: unknown\n", kind),
    };
    let mut samples = Vec::new();
    for probe in probes {
        let z = parse_spec::<F>(probe)?;
        let z = match z.exact() {
            Some(x) => SeriesStream::from_rational(&x),
            None => z.stream(STREAM_BUDGET)?,
        };
        let verdict = match seq.exclude_point(&z, n.max(1) * 4)? {
            Exclusion::ExcludedAt(k) => format!("excluded-at({})", k),
            Exclusion::Inconclusive { depth } => format!("inconclusive (depth {})", depth),
        };
        text += &format!("probe {}: {}\n", probe, verdict);
        samples.push(json!({"probe": probe, "result": verdict}));
    }
    let witness = match seq.ivb_witness(n) {
        Ok(w) => {
            let p = w.prefix.map_or("(empty)".to_string(), |p| p.to_string());
            text += &format!("ivb witness: prefix {} stabilized over {} balls", p, w.images.len());
            json!({"status": "stabilized", "prefix": p, "images": w.images.iter().map(|d| d.to_string()).collect::<Vec<_>>()})
        }
        Err(Error::BudgetExhausted { budget }) => {
            text += &format!("ivb witness: budget-exhausted after {} balls (prefixes keep growing: {})", budget, kind);
            json!({"status": "budget-exhausted", "verdict": kind})
        }
        Err(e) => return Err(e),
    };
    let mut r = Report::new(
        text,
        json!({"kind": kind, "radius_limit": limit, "radius_bound": bound, "balls": balls, "exclusions": samples, "witness": witness}),
    );
    r.tsv = Some(tsv);
    Ok(r)
}

/// Parses, runs and prints; returns the process exit code.
pub fn main_with(args: impl IntoIterator<Item = String>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(r) => {
            match cli.format {
                Format::Text => println!("{}", r.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&r.json).expect("json")),
                Format::Tsv => match &r.tsv {
                    Some(t) => print!("{}", t),
                    None => println!("{}", r.text),
                },
            }
            if r.exhausted {
                2
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("pcf: {}", e);
            exit_code(&e)
        }
    }
}
