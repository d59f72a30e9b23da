//! `ri-tails`: characteristics, fundamental functions and diagnostics of
//! rearrangement-invariant spaces as CSV or JSON.
//!
//! Exit status: 0 when every asserted check passes, 1 when a check reports
//! `violated` (or a witness does not saturate), 2 on usage, parse or
//! numerical errors.

mod inputs;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use ri_tails::catalog::{
    characteristic, conjugate_young, fundamental, parse_space_spec, Family, SpaceDescriptor,
};
use ri_tails::diagnostics::{
    associate_product, regularity_report, resonant_bound, sum_characteristic_bounds,
};
use ri_tails::montecarlo::{confidence_interval, sample, verify_tail_bound, CiRequest};
use ri_tails::report::{fmt_num, DiagnosticsReport, Verdict};
use ri_tails::witness::{lorentz_witness, lp_witness, orlicz_witness, WitnessReport};

use inputs::{parse_grid, parse_rv, GridSpec};

const SEED_ENV: &str = "RI_TAILS_SEED";

const SPACE_HELP: &str = "Space spec, e.g. lp:p=2, linf, lorentz:w=power,p=2, \
orlicz:form=power,p=3, orlicz:form=powerlog,p=2,q=1, gls:B=2,beta=1, \
gls:form=powerroot,m=1, gls:form=degenerate,r=2. Append measure=infinite for \
the sigma-finite model where supported";


#[derive(Parser, Debug)]
#[command(name = "ri-tails", version, about = "Tail characteristics of rearrangement-invariant spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Serialize)]
struct Output {
    /// Output format (defaults: csv for tables, json for reports)
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
enum Command {
    /// Tchebychev characteristic T(t) on a t-grid
    #[command(after_help = "CSV columns: t,T")]
    Char {
        #[arg(long, help = SPACE_HELP)]
        space: String,
        /// Grid min:max:points[:lin] (log spacing by default)
        #[arg(long = "t", default_value = "2:1e6:200")]
        t: String,
        #[command(flatten)]
        #[serde(flatten)]
        out: Output,
    },
    /// Fundamental function phi(delta) on a delta-grid
    #[command(after_help = "CSV columns: delta,phi")]
    Fundamental {
        #[arg(long, help = SPACE_HELP)]
        space: String,
        /// Grid min:max:points[:lin]; delta <= 1 for probability measures
        #[arg(long, default_value = "1e-6:1:200")]
        delta: String,
        #[command(flatten)]
        #[serde(flatten)]
        out: Output,
    },
    /// Regularity ratio rho(t) = g^{-1}(t)·T(t) with g(s) = 1/phi(1/s)
    #[command(after_help = "CSV columns: t,lhs,rhs,ratio with lhs = g^{-1}(t), rhs = 1/T(t), ratio = rho(t)")]
    Regularity {
        #[arg(long, help = SPACE_HELP)]
        space: String,
        #[arg(long = "t", default_value = "2:1e6:200")]
        t: String,
        #[command(flatten)]
        #[serde(flatten)]
        out: Output,
    },
    /// Associate-space product identities for an Lp/Lq or Orlicz N/N* pair
    #[command(after_help = "CSV columns: t,lhs,rhs,ratio (lhs = product of left inverses, rhs = t), \
then a blank line and delta,lhs,rhs,ratio (lhs = phi_F·phi_F', rhs = delta)")]
    Associate {
        #[arg(long, help = SPACE_HELP)]
        space: String,
        /// Associate space; defaults to the cataloged associate of --space
        #[arg(long)]
        dual: Option<String>,
        #[arg(long = "t", default_value = "2:1e6:200")]
        t: String,
        #[arg(long, default_value = "1e-6:1:200")]
        delta: String,
        #[command(flatten)]
        #[serde(flatten)]
        out: Output,
    },
    /// Direct-sum sandwich max(T_F, T_G) <= T_F vee T_G
    #[command(after_help = "CSV columns: t,lhs,rhs,ratio with lhs = max, rhs = vee")]
    Sum {
        /// Exactly two space specs: --space A --space B
        #[arg(long, required = true, help = SPACE_HELP)]
        space: Vec<String>,
        #[arg(long = "t", default_value = "2:1e6:200")]
        t: String,
        #[command(flatten)]
        #[serde(flatten)]
        out: Output,
    },
    /// Two-point extremal witness at level t (lp, orlicz, lorentz)
    #[command(after_help = "CSV columns: t,norm,tail,characteristic,saturated")]
    Witness {
        #[arg(long, help = SPACE_HELP)]
        space: String,
        /// Witness level
        #[arg(long = "t")]
        t: f64,
        #[command(flatten)]
        #[serde(flatten)]
        out: Output,
    },
    /// Monte-Carlo check of empirical tails against T(t / norm)
    #[command(after_help = "CSV columns: t,lhs,rhs,ratio with lhs = empirical tail, rhs = T(t/norm). \
Random variables: const:c=1, twopoint:v=10,p=0.01, atoms:0@0.99,10@0.01, powersing:alpha=0.5[,scale=1]. \
RI_TAILS_SEED overrides --seed.")]
    Mc {
        #[arg(long, help = SPACE_HELP)]
        space: String,
        /// Random variable spec
        #[arg(long)]
        rv: String,
        #[arg(long = "t", default_value = "2:100:20")]
        t: String,
        /// Sample size
        #[arg(long, default_value_t = 1_000_000)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Also write the samples as a single-column CSV (header `value`)
        #[arg(long)]
        samples: Option<PathBuf>,
        #[command(flatten)]
        #[serde(flatten)]
        out: Output,
    },
    /// Confidence radius sigma·[T]^{-1}(alpha)/wn
    #[command(after_help = "CSV columns: radius,u")]
    Ci {
        #[arg(long, help = SPACE_HELP)]
        space: String,
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        wn: f64,
        #[arg(long)]
        alpha: f64,
        #[command(flatten)]
        #[serde(flatten)]
        out: Output,
    },
    /// Universal bound C3 = max t·T(t)
    #[command(after_help = "CSV columns: t,lhs,rhs,ratio with lhs = t·T(t), rhs = C3")]
    Resonant {
        #[arg(long, help = SPACE_HELP)]
        space: String,
        #[arg(long = "t", default_value = "2:1e6:200")]
        t: String,
        #[command(flatten)]
        #[serde(flatten)]
        out: Output,
    },
}

/// A failure attributed to one flag or token.
struct CliError(String);

fn flag_err(flag: &str) -> impl Fn(String) -> CliError + '_ {
    move |msg| CliError(format!("{flag}: {msg}"))
}

fn lib_err(flag: &str) -> impl Fn(ri_tails::Error) -> CliError + '_ {
    move |e| CliError(format!("{flag}: {e}"))
}

fn space(text: &str) -> Result<SpaceDescriptor, CliError> {
    parse_space_spec(text).map_err(lib_err("--space"))
}

fn grid(flag: &str, text: &str) -> Result<(GridSpec, Vec<f64>), CliError> {
    let g = parse_grid(text).map_err(flag_err(flag))?;
    let pts = g.points();
    Ok((g, pts))
}

enum Body {
    Table { columns: Vec<&'static str>, rows: Vec<Vec<f64>> },
    Report(DiagnosticsReport),
    Witness(WitnessReport),
}

struct Outcome {
    body: Body,
    default: Format,
    verdict: Option<String>,
    failed: bool,
    extra: Vec<(String, Value)>,
}

fn verdict_name(v: Verdict) -> String {
    serde_json::to_value(v).ok().and_then(|x| x.as_str().map(String::from)).unwrap_or_default()
}

fn report(r: DiagnosticsReport) -> Outcome {
    Outcome {
        verdict: Some(verdict_name(r.verdict)),
        failed: r.verdict == Verdict::Violated,
        body: Body::Report(r),
        default: Format::Json,
        extra: vec![],
    }
}

fn table(columns: Vec<&'static str>, rows: Vec<Vec<f64>>) -> Outcome {
    Outcome { body: Body::Table { columns, rows }, default: Format::Csv, verdict: None, failed: false, extra: vec![] }
}

fn associate_of(f: &SpaceDescriptor) -> Result<SpaceDescriptor, CliError> {
    let err = |m: String| CliError(format!("--dual: {m}"));
    match &f.family {
        Family::Lp { p } => {
            let q = if *p == 1.0 {
                f64::INFINITY
            } else if p.is_infinite() {
                1.0
            } else {
                p / (p - 1.0)
            };
            SpaceDescriptor::new(Family::Lp { p: q }, f.measure).map_err(|e| err(e.to_string()))
        }
        Family::Orlicz { n } => Ok(SpaceDescriptor::orlicz(conjugate_young(n).map_err(|e| err(e.to_string()))?)),
        _ => Err(err(format!("no cataloged associate for {f}; pass --dual explicitly"))),
    }
}

fn run(cmd: &Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Char { space: s, t, .. } => {
            let sp = space(s)?;
            let (_, pts) = grid("--t", t)?;
            let tail = characteristic(&sp).map_err(lib_err("--space"))?;
            Ok(table(vec!["t", "T"], pts.iter().map(|&x| vec![x, tail.eval(x)]).collect()))
        }
        Command::Fundamental { space: s, delta, .. } => {
            let sp = space(s)?;
            let (_, pts) = grid("--delta", delta)?;
            let phi = fundamental(&sp).map_err(lib_err("--space"))?;
            let rows = pts
                .iter()
                .map(|&d| Ok(vec![d, phi.eval(d).map_err(lib_err("--delta"))?]))
                .collect::<Result<Vec<_>, CliError>>()?;
            let mut out = table(vec!["delta", "phi"], rows);
            if phi.is_asymptotic() {
                out.extra.push(("note".into(), json!("asymptotic form with unit constants")));
            }
            Ok(out)
        }
        Command::Regularity { space: s, t, .. } => {
            let sp = space(s)?;
            let (_, pts) = grid("--t", t)?;
            Ok(report(regularity_report(&sp, &pts).map_err(lib_err("regularity"))?))
        }
        Command::Associate { space: s, dual, t, delta, .. } => {
            let f = space(s)?;
            let g = match dual {
                Some(d) => parse_space_spec(d).map_err(lib_err("--dual"))?,
                None => associate_of(&f)?,
            };
            let (_, tp) = grid("--t", t)?;
            let (_, dp) = grid("--delta", delta)?;
            Ok(report(associate_product(&f, &g, &tp, &dp).map_err(lib_err("associate"))?))
        }
        Command::Sum { space: specs, t, .. } => {
            if specs.len() != 2 {
                return Err(CliError(format!("--space: sum needs exactly two spaces, got {}", specs.len())));
            }
            let (a, b) = (space(&specs[0])?, space(&specs[1])?);
            let (_, pts) = grid("--t", t)?;
            let ta = characteristic(&a).map_err(lib_err("--space"))?;
            let tb = characteristic(&b).map_err(lib_err("--space"))?;
            let mut r = sum_characteristic_bounds(&ta, &tb, &pts).map_err(lib_err("sum"))?;
            r.subject = format!("sum {a} + {b}");
            Ok(report(r))
        }
        Command::Witness { space: s, t, .. } => {
            let sp = space(s)?;
            let w = match &sp.family {
                Family::Lp { p } => lp_witness(*p, *t),
                Family::Orlicz { n } => orlicz_witness(n, *t),
                Family::Lorentz { w } => lorentz_witness(w, *t),
                Family::Gls { .. } => {
                    return Err(CliError(
                        "--space: no saturating witness is available for Grand Lebesgue spaces".into(),
                    ))
                }
            }
            .map_err(lib_err("--t"))?;
            Ok(Outcome {
                verdict: Some(if w.saturated { "saturated" } else { "notSaturated" }.into()),
                failed: !w.saturated,
                body: Body::Witness(w),
                default: Format::Csv,
                extra: vec![],
            })
        }
        Command::Mc { space: s, rv, t, n, seed, samples, .. } => {
            let sp = space(s)?;
            let x = parse_rv(rv).map_err(flag_err("--rv"))?;
            let (_, pts) = grid("--t", t)?;
            let seed = effective_seed(*seed)?;
            if let Some(path) = samples {
                let batch = sample(&x, *n, seed).map_err(lib_err("--n"))?;
                fs::write(path, batch.to_csv())
                    .map_err(|e| CliError(format!("--samples: {}: {e}", path.display())))?;
            }
            let mut out = report(verify_tail_bound(&sp, &x, &pts, *n, seed).map_err(lib_err("mc"))?);
            out.extra.push(("seed".into(), json!(seed)));
            Ok(out)
        }
        Command::Ci { space: s, sigma, wn, alpha, .. } => {
            let sp = space(s)?;
            let flag = if !(*alpha > 0.0 && *alpha < 1.0) {
                "--alpha"
            } else if !(*sigma > 0.0 && sigma.is_finite()) {
                "--sigma"
            } else {
                "--wn"
            };
            let req = CiRequest::new(*sigma, *wn, *alpha, sp).map_err(lib_err(flag))?;
            let radius = confidence_interval(&req).map_err(lib_err("--alpha"))?;
            Ok(table(vec!["radius", "u"], vec![vec![radius, radius * wn]]))
        }
        Command::Resonant { space: s, t, .. } => {
            let sp = space(s)?;
            let (_, pts) = grid("--t", t)?;
            Ok(report(resonant_bound(&sp, &pts).map_err(lib_err("resonant"))?))
        }
    }
}

fn effective_seed(flag: u64) -> Result<u64, CliError> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError(format!("{SEED_ENV}: `{v}` is not an unsigned 64-bit seed"))),
        Err(_) => Ok(flag),
    }
}

fn output_of(cmd: &Command) -> &Output {
    match cmd {
        Command::Char { out, .. }
        | Command::Fundamental { out, .. }
        | Command::Regularity { out, .. }
        | Command::Associate { out, .. }
        | Command::Sum { out, .. }
        | Command::Witness { out, .. }
        | Command::Mc { out, .. }
        | Command::Ci { out, .. }
        | Command::Resonant { out, .. } => out,
    }
}

fn command_name(cmd: &Command) -> String {
    serde_json::to_value(cmd)
        .ok()
        .and_then(|v| v.as_object().and_then(|o| o.keys().next().cloned()))
        .unwrap_or_default()
}

fn render_csv(body: &Body) -> String {
    match body {
        Body::Table { columns, rows } => {
            let mut s = columns.join(",");
            s.push('\n');
            for r in rows {
                s.push_str(&r.iter().map(|&x| fmt_num(x)).collect::<Vec<_>>().join(","));
                s.push('\n');
            }
            s
        }
        Body::Report(r) => r.to_csv(),
        Body::Witness(w) => format!(
            "t,norm,tail,characteristic,saturated\n{},{},{},{},{}\n",
            fmt_num(w.t),
            fmt_num(w.norm_value),
            fmt_num(w.tail_at_t),
            fmt_num(w.characteristic_at_t),
            w.saturated
        ),
    }
}

fn render_json(cmd: &Command, out: &Outcome) -> String {
    let config = serde_json::to_value(cmd)
        .ok()
        .and_then(|v| v.as_object().and_then(|o| o.values().next().cloned()))
        .unwrap_or(Value::Null);
    let mut doc = serde_json::Map::new();
    doc.insert("command".into(), json!(command_name(cmd)));
    doc.insert("config".into(), config);
    match &out.body {
        Body::Table { columns, rows } => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| Value::Object(columns.iter().zip(r).map(|(c, x)| (c.to_string(), json!(x))).collect()))
                .collect();
            doc.insert("rows".into(), Value::Array(rows));
        }
        Body::Report(r) => {
            doc.insert("report".into(), r.to_json());
        }
        Body::Witness(w) => {
            doc.insert("report".into(), w.to_json());
        }
    }
    doc.insert("verdict".into(), out.verdict.clone().map_or(Value::Null, Value::String));
    doc.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    for (k, v) in &out.extra {
        doc.insert(k.clone(), v.clone());
    }
    let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("json renders");
    s.push('\n');
    s
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli.command) {
        Ok(o) => o,
        Err(CliError(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let opts = output_of(&cli.command);
    let text = match opts.format.unwrap_or(outcome.default) {
        Format::Csv => render_csv(&outcome.body),
        Format::Json => render_json(&cli.command, &outcome),
    };
    let written = match &opts.output {
        Some(path) => fs::write(path, &text).map_err(|e| format!("--output: {}: {e}", path.display())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(msg) = written {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    if outcome.failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
