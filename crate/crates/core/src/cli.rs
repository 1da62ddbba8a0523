//! Command-line front end: a JSON job document plus flags in, text or JSON out.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use rug::{Integer, Rational};
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::algebra::{FieldElement, NumberField, DEFAULT_PRECISION};
use crate::curve::{clear_denominators, Curve, Point};
use crate::eds::{psi_naive, psi_pow2, AbstractEds};
use crate::error::{Error, Result};
use crate::height::{
    archimedean_height_at, canonical_height, canonical_height_pair, compute_e, local_decompose, tate_height,
    HeightEstimate, Method,
};
use crate::lehmer::{growth_estimate, search, SearchConfig, SearchOutcome};

#[derive(Parser, Debug)]
#[command(name = "edsh", version, about = "Canonical heights from elliptic divisibility sequences")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Canonical height estimate with its archimedean and non-archimedean parts.
    Height,
    /// Archimedean contribution by floating-point doubling.
    Arch,
    /// Height plus per-prime contributions for the primes given with --primes.
    Decompose,
    /// Compare the sequence estimate with the Tate doubling limit.
    TateCheck,
    /// Growth of an abstract sequence given by its terms u2, u3, u4.
    EdsGrowth,
    /// Search a box of seeds for small growth.
    LehmerSearch,
    /// Print psi_n(Q) and E_n = |N(psi_n(Q))|.
    Psi,
}

#[derive(clap::Args, Debug, Clone, Default)]
pub struct Options {
    /// Job document (JSON); reads stdin when absent or "-".
    #[arg(global = true)]
    pub input: Option<PathBuf>,
    #[arg(long, global = true)]
    pub n: Option<u64>,
    /// Use the index 2^N.
    #[arg(long, global = true, value_name = "N")]
    pub pow2: Option<u32>,
    /// gcd or dpower.
    #[arg(long, global = true)]
    pub method: Option<String>,
    #[arg(long, global = true, env = "EDSH_PRECISION_BITS")]
    pub precision_bits: Option<u32>,
    /// Comma-separated primes dividing D.
    #[arg(long, global = true, value_delimiter = ',')]
    pub primes: Option<Vec<String>>,
    /// Two indices n1,n2 whose estimates are combined.
    #[arg(long, global = true, value_delimiter = ',', num_args = 1)]
    pub extrapolate: Option<Vec<u64>>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true)]
    pub json: bool,
    /// Terms u2;u3;u4, each a comma-separated coefficient vector.
    #[arg(long, global = true)]
    pub seed_terms: Option<String>,
    #[arg(long, global = true)]
    pub coeff_bound: Option<i64>,
    #[arg(long, global = true)]
    pub extend_to: Option<u64>,
    /// Prune threshold in nats for the search pre-pass.
    #[arg(long, global = true)]
    pub prune: Option<f64>,
    /// Doubling count for tate-check.
    #[arg(long, global = true)]
    pub k: Option<u32>,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct Document {
    field: FieldDoc,
    curve: Option<CurveDoc>,
    point: Option<PointDoc>,
    seed_terms: Option<Vec<Vec<String>>>,
    #[serde(default)]
    parameters: Parameters,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct FieldDoc {
    minpoly: Vec<String>,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct CurveDoc {
    #[serde(default)]
    a1: Vec<String>,
    #[serde(default)]
    a2: Vec<String>,
    #[serde(default)]
    a3: Vec<String>,
    #[serde(default)]
    a4: Vec<String>,
    #[serde(default)]
    a6: Vec<String>,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct PointDoc {
    x: Vec<String>,
    y: Vec<String>,
}

#[derive(Deserialize, Debug, Default, Clone)]
#[serde(deny_unknown_fields)]
pub struct Parameters {
    pub n: Option<u64>,
    #[serde(rename = "N")]
    pub pow2: Option<u32>,
    pub method: Option<String>,
    pub precision_bits: Option<u32>,
    pub primes: Option<Vec<String>>,
    pub threads: Option<usize>,
    pub output: Option<String>,
    pub k: Option<u32>,
    pub coeff_bound: Option<i64>,
    pub extend_to: Option<u64>,
    pub prune: Option<f64>,
}

/// A parsed and validated job.
#[derive(Debug, Clone)]
pub struct JobSpec {
    pub field: Arc<NumberField>,
    pub curve: Option<Curve>,
    pub point: Option<Point>,
    pub seed_terms: Option<[FieldElement; 3]>,
    pub parameters: Parameters,
    /// Messages about automatic adjustments such as denominator clearing.
    pub notices: Vec<String>,
}

fn parse_error(context: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse { context: context.into(), message: message.into() }
}

fn parse_rational(s: &str, context: &str) -> Result<Rational> {
    let t = s.trim();
    let r = if t.contains('/') {
        let (a, b) = t.split_once('/').unwrap();
        let (a, b) = (parse_integer(a, context)?, parse_integer(b, context)?);
        if b == 0 {
            return Err(parse_error(context, format!("zero denominator in {s:?}")));
        }
        Rational::from((a, b))
    } else {
        Rational::from(parse_integer(t, context)?)
    };
    Ok(r)
}

fn parse_integer(s: &str, context: &str) -> Result<Integer> {
    let t = s.trim();
    let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(parse_error(context, format!("{s:?} is not an exact integer")));
    }
    t.parse::<Integer>().map_err(|e| parse_error(context, e.to_string()))
}

/// An element from exact coefficient strings (`"3"` or `"p/q"`), zero-padded to the field degree.
pub fn parse_element(k: &Arc<NumberField>, v: &[String], context: &str) -> Result<FieldElement> {
    if v.len() > k.degree() {
        return Err(parse_error(context, format!("{} coefficients for a field of degree {}", v.len(), k.degree())));
    }
    let coeffs = v
        .iter()
        .enumerate()
        .map(|(i, s)| parse_rational(s, &format!("{context}[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    k.element(&coeffs)
}

/// Parses seed terms from the flag syntax `u2;u3;u4` with comma-separated coefficients.
fn parse_seed_flag(s: &str) -> Result<Vec<Vec<String>>> {
    let terms: Vec<Vec<String>> =
        s.split(';').map(|t| t.split(',').map(|c| c.trim().to_string()).filter(|c| !c.is_empty()).collect()).collect();
    if terms.len() != 3 {
        return Err(parse_error("--seed-terms", format!("expected 3 terms u2;u3;u4, got {}", terms.len())));
    }
    Ok(terms)
}

/// Parses a job document. A non-integral point is moved to an integral model with a notice.
pub fn parse_input(document: &str) -> Result<JobSpec> {
    let doc: Document =
        serde_json::from_str(document).map_err(|e| parse_error(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    build_job(doc)
}

fn build_job(doc: Document) -> Result<JobSpec> {
    let minpoly = doc
        .field
        .minpoly
        .iter()
        .enumerate()
        .map(|(i, s)| parse_integer(s, &format!("field.minpoly[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let field = NumberField::new(minpoly)?;
    let mut notices = Vec::new();

    let curve = match &doc.curve {
        None => None,
        Some(c) => {
            let a = [("a1", &c.a1), ("a2", &c.a2), ("a3", &c.a3), ("a4", &c.a4), ("a6", &c.a6)]
                .iter()
                .map(|(name, v)| parse_element(&field, v, &format!("curve.{name}")))
                .collect::<Result<Vec<_>>>()?;
            let [a1, a2, a3, a4, a6]: [FieldElement; 5] = a.try_into().unwrap();
            Some(Curve::new(a1, a2, a3, a4, a6)?)
        }
    };
    let mut curve = curve;
    let point = match &doc.point {
        None => None,
        Some(p) => {
            let x = parse_element(&field, &p.x, "point.x")?;
            let y = parse_element(&field, &p.y, "point.y")?;
            let pt = Point::affine(x, y);
            let c = curve.as_ref().ok_or_else(|| Error::Validation("a point needs a curve".into()))?;
            if !c.is_on_curve(&pt) {
                return Err(Error::PointNotOnCurve);
            }
            if pt.is_integral() {
                Some(pt)
            } else {
                let (c2, q2, u) = clear_denominators(c, &pt)?;
                notices.push(format!("point is not integral; moved to the model scaled by u = {u}, Q = {q2}"));
                curve = Some(c2);
                Some(q2)
            }
        }
    };
    let seed_terms = match &doc.seed_terms {
        None => None,
        Some(v) => Some(seed_from_strings(&field, v, "seed_terms")?),
    };
    Ok(JobSpec { field, curve, point, seed_terms, parameters: doc.parameters, notices })
}

fn seed_from_strings(k: &Arc<NumberField>, v: &[Vec<String>], context: &str) -> Result<[FieldElement; 3]> {
    if v.len() != 3 {
        return Err(parse_error(context, format!("expected 3 terms u2, u3, u4, got {}", v.len())));
    }
    let t = v
        .iter()
        .enumerate()
        .map(|(i, c)| parse_element(k, c, &format!("{context}[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    Ok(t.try_into().unwrap())
}

/// 1 for bad input, 2 for failures during computation.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. }
        | Error::Validation(_)
        | Error::NotMonic
        | Error::NotSquarefree
        | Error::ZeroDegree
        | Error::FieldMismatch
        | Error::BadLength { .. }
        | Error::PrecisionTooLow(_)
        | Error::SingularCurve
        | Error::NonIntegralCoefficients
        | Error::PointNotOnCurve
        | Error::PointNotIntegral
        | Error::PointAtInfinity
        | Error::BadSeed
        | Error::NotPowerOfTwo(_)
        | Error::IndexTooSmall { .. }
        | Error::PrimeDoesNotDivideD(_)
        | Error::EqualIndices => 1,
        _ => 2,
    }
}

/// Rounds to 12 significant digits, so printed values re-parse to the same double.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap()
}

fn num(x: f64) -> Value {
    serde_json::Number::from_f64(round12(x)).map(Value::Number).unwrap_or(Value::Null)
}

fn estimate_json(h: &HeightEstimate) -> Value {
    let mut m = Map::new();
    m.insert("hhat".into(), num(h.total));
    m.insert("arch".into(), num(h.arch));
    m.insert("nonarch".into(), num(h.nonarch));
    m.insert("n".into(), json!(h.n_used));
    m.insert("d".into(), json!(h.d));
    m.insert("method".into(), json!(h.method.as_str()));
    if let Some(pp) = &h.per_prime {
        let pm: Map<String, Value> = pp.iter().map(|(p, v)| (p.to_string(), num(*v))).collect();
        m.insert("per_prime".into(), Value::Object(pm));
    }
    m.insert("torsion".into(), json!(h.torsion));
    m.insert("warnings".into(), json!(h.warnings));
    if let Some(x) = h.extrapolated {
        m.insert("extrapolated".into(), num(x));
    }
    if let Some(s) = h.spread {
        m.insert("spread".into(), num(s));
    }
    Value::Object(m)
}

fn estimate_text(h: &HeightEstimate) -> String {
    let mut s = String::new();
    s += &format!("hhat     {}\n", round12(h.total));
    s += &format!("arch     {}\n", round12(h.arch));
    s += &format!("nonarch  {}\n", round12(h.nonarch));
    if let Some(pp) = &h.per_prime {
        for (p, v) in pp {
            s += &format!("  p = {p}: {}\n", round12(*v));
        }
    }
    s += &format!("n = {}, d = {}, method = {}, error {}\n", h.n_used, h.d, h.method, h.error_order);
    if let Some(x) = h.extrapolated {
        s += &format!("extrapolated {}\n", round12(x));
    }
    if let Some(x) = h.spread {
        s += &format!("spread       {}\n", round12(x));
    }
    if h.torsion {
        s += "torsion point\n";
    }
    for w in &h.warnings {
        s += &format!("warning: {w}\n");
    }
    s
}

/// Merged settings: flags override the document.
struct Settings {
    n: Option<u64>,
    method: Method,
    precision_bits: u32,
    primes: Option<Vec<Integer>>,
}

fn settings(opts: &Options, p: &Parameters) -> Result<Settings> {
    let n = match (opts.n, opts.pow2) {
        (Some(_), Some(_)) => return Err(Error::Validation("--n and --pow2 are exclusive".into())),
        (Some(n), None) => Some(n),
        (None, Some(e)) => Some(pow2_index(e)?),
        (None, None) => match (p.n, p.pow2) {
            (Some(n), _) => Some(n),
            (None, Some(e)) => Some(pow2_index(e)?),
            (None, None) => None,
        },
    };
    let method = match opts.method.as_ref().or(p.method.as_ref()) {
        None => Method::GcdConsecutive,
        Some(s) => match s.parse::<Method>()? {
            Method::TateOracle => return Err(Error::Validation("use tate-check for the Tate limit".into())),
            m => m,
        },
    };
    let precision_bits = opts.precision_bits.or(p.precision_bits).unwrap_or(DEFAULT_PRECISION);
    if precision_bits < 53 {
        return Err(Error::PrecisionTooLow(precision_bits));
    }
    let primes = match opts.primes.as_ref().or(p.primes.as_ref()) {
        None => None,
        Some(v) => Some(v.iter().map(|s| parse_integer(s, "primes")).collect::<Result<Vec<_>>>()?),
    };
    Ok(Settings { n, method, precision_bits, primes })
}

fn pow2_index(e: u32) -> Result<u64> {
    if e >= 63 {
        return Err(Error::Validation(format!("2^{e} is too large an index")));
    }
    Ok(1u64 << e)
}

fn require_n(s: &Settings) -> Result<u64> {
    s.n.ok_or_else(|| Error::Validation("an index is required (--n or --pow2)".into()))
}

fn curve_point(job: &JobSpec) -> Result<(&Curve, &Point)> {
    let c = job.curve.as_ref().ok_or_else(|| Error::Validation("this command needs a curve".into()))?;
    let q = job.point.as_ref().ok_or_else(|| Error::Validation("this command needs a point".into()))?;
    Ok((c, q))
}

/// Output of a command: the JSON value and its human-readable rendering.
pub struct Output {
    pub json: Value,
    pub text: String,
}

/// Runs one command on a parsed job.
pub fn run_command(cmd: Command, job: &JobSpec, opts: &Options) -> Result<Output> {
    let s = settings(opts, &job.parameters)?;
    let mut out = match cmd {
        Command::Height | Command::Decompose => {
            let (c, q) = curve_point(job)?;
            let mut h = match &opts.extrapolate {
                Some(v) => {
                    if v.len() != 2 {
                        return Err(Error::Validation("--extrapolate takes two indices n1,n2".into()));
                    }
                    canonical_height_pair(c, q, v[0], v[1], s.method)?.1
                }
                None => canonical_height(c, q, require_n(&s)?, s.method)?,
            };
            if cmd == Command::Decompose {
                let primes = s.primes.as_ref().ok_or_else(|| Error::Validation("decompose needs --primes".into()))?;
                if !h.torsion {
                    h.per_prime = Some(local_decompose(c, q, h.n_used, primes)?);
                } else {
                    h.per_prime = Some(primes.iter().map(|p| (p.clone(), 0.0)).collect::<BTreeMap<_, _>>());
                }
            }
            Output { json: estimate_json(&h), text: estimate_text(&h) }
        }
        Command::Arch => {
            let (c, q) = curve_point(job)?;
            let n = require_n(&s)?;
            let (a, used) = archimedean_height_at(c, q, n, s.precision_bits)?;
            let mut warnings = Vec::new();
            if used != n {
                warnings.push(format!("index {n} rounded up to the power of two {used}"));
            }
            let json = json!({
                "arch": num(a), "n": used, "d": c.degree(), "method": "float-doubling",
                "precision_bits": s.precision_bits, "warnings": warnings,
            });
            let mut text = format!("arch     {}\nn = {used}, d = {}, precision {} bits\n", round12(a), c.degree(), s.precision_bits);
            for w in &warnings {
                text += &format!("warning: {w}\n");
            }
            Output { json, text }
        }
        Command::TateCheck => {
            let (c, q) = curve_point(job)?;
            let k = opts.k.or(job.parameters.k).unwrap_or(6);
            let n = s.n.unwrap_or(128);
            let (e, t) = rayon::join(|| canonical_height(c, q, n, s.method), || tate_height(c, q, k, s.precision_bits));
            let (e, t) = (e?, t?);
            let diff = (e.total - t.total).abs();
            let json = json!({ "eds": estimate_json(&e), "tate": estimate_json(&t), "k": k, "difference": num(diff) });
            let text = format!(
                "sequence (n = {n}):\n{}tate (k = {k}):\n{}difference {}\n",
                estimate_text(&e),
                estimate_text(&t),
                round12(diff)
            );
            Output { json, text }
        }
        Command::EdsGrowth => {
            let seed = match &opts.seed_terms {
                Some(f) => seed_from_strings(&job.field, &parse_seed_flag(f)?, "--seed-terms")?,
                None => job.seed_terms.clone().ok_or_else(|| Error::Validation("eds-growth needs --seed-terms".into()))?,
            };
            let [u2, u3, u4] = seed;
            let seq = AbstractEds::from_terms(u2, u3, u4)?;
            let n = s.n.unwrap_or(512);
            let h = growth_estimate(&seq, n)?;
            let mut json = estimate_json(&h);
            json["normalized"] = num(h.normalized());
            let text = format!("{}d*hhat   {}\n", estimate_text(&h), round12(h.normalized()));
            Output { json, text }
        }
        Command::LehmerSearch => {
            let mut cfg = SearchConfig::new(
                job.field.clone(),
                opts.coeff_bound.or(job.parameters.coeff_bound).unwrap_or(1),
                opts.extend_to.or(job.parameters.extend_to).unwrap_or(128),
            );
            if let Some(p) = opts.prune.or(job.parameters.prune) {
                cfg.prune_threshold = p;
            }
            search_output(&search(&cfg)?)
        }
        Command::Psi => {
            let (c, q) = curve_point(job)?;
            let n = require_n(&s)?;
            let fast = opts.pow2.is_some() || (opts.n.is_none() && job.parameters.pow2.is_some());
            let e = compute_e(c, q, n, fast)?;
            let v = if fast { psi_pow2(c, q, n.trailing_zeros())? } else { psi_naive(c, q, n)? };
            let coeffs = v.to_strings();
            let json = json!({ "n": n, "E": e.e.to_string(), "psi": coeffs });
            let text = format!("psi_{n}(Q) = {v}\nE_{n} = {}\n", e.e);
            Output { json, text }
        }
    };
    if !job.notices.is_empty() {
        if let Some(w) = out.json.get_mut("warnings").and_then(|w| w.as_array_mut()) {
            for (i, note) in job.notices.iter().enumerate() {
                w.insert(i, json!(note));
            }
        } else if let Value::Object(m) = &mut out.json {
            m.insert("notices".into(), json!(job.notices));
        }
        out.text = job.notices.iter().map(|n| format!("notice: {n}\n")).collect::<String>() + &out.text;
    }
    Ok(out)
}

fn search_output(r: &SearchOutcome) -> Output {
    let mut text = String::new();
    let mut cands = Vec::new();
    for (i, c) in r.candidates.iter().enumerate() {
        let terms: Vec<String> = c.initial_terms.iter().map(|t| t.to_string()).collect();
        text += &format!("{:>3}  d*hhat {}  hhat {}  seed 0, 1, {}\n", i + 1, round12(c.normalized), round12(c.estimate.total), terms.join(", "));
        cands.push(json!({
            "rank": i + 1,
            "initial_terms": c.initial_terms.iter().map(|t| t.to_strings()).collect::<Vec<_>>(),
            "hhat": num(c.estimate.total),
            "normalized": num(c.normalized),
            "n": c.estimate.n_used,
            "warnings": c.estimate.warnings,
        }));
    }
    let skipped: Vec<Value> = r
        .skipped
        .iter()
        .map(|s| json!({ "initial_terms": s.initial_terms.iter().map(|t| t.to_strings()).collect::<Vec<_>>(), "reason": s.reason }))
        .collect();
    text += &format!("evaluated {}, pruned {}, skipped {}\n", r.evaluated, r.pruned, r.skipped.len());
    if let Some(c) = r.candidates.first() {
        text += &format!("note: {}\n", c.caveat);
    }
    let json = json!({
        "candidates": cands,
        "skipped": skipped,
        "pruned": r.pruned,
        "evaluated": r.evaluated,
        "caveat": crate::lehmer::CANDIDATE_CAVEAT,
    });
    Output { json, text }
}

fn read_document(path: &Option<PathBuf>) -> Result<String> {
    let io_err = |e: std::io::Error| Error::Validation(format!("cannot read input: {e}"));
    match path {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p).map_err(io_err),
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(io_err)?;
            Ok(s)
        }
    }
}

/// Whole program: returns the process exit status.
pub fn run(cli: Cli) -> i32 {
    let result = (|| {
        let doc = read_document(&cli.opts.input)?;
        let job = parse_input(&doc)?;
        if let Some(t) = cli.opts.threads.or(job.parameters.threads) {
            if t == 0 {
                return Err(Error::Validation("--threads must be positive".into()));
            }
            // a pool may already exist when called twice in one process; results do not depend on it
            let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
        }
        let json = cli.opts.json || job.parameters.output.as_deref() == Some("json");
        let out = run_command(cli.command, &job, &cli.opts)?;
        Ok((out, json))
    })();
    match result {
        Ok((out, json)) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&out.json).unwrap());
            } else {
                print!("{}", out.text);
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
