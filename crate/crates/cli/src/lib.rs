//! The `realzoo` command-line tool.

mod args;
mod config;

use std::fmt::Write as _;
use std::path::Path;

use clap::Parser;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use realzoo::cantorset::{in_cantor, intervals, locate};
use realzoo::conn::{self, big_four_graph, render_scientific, scenario_count, star_graph, ConnError};
use realzoo::enclosure::fmt_ratio;
use realzoo::points::ternary_prefix;
use realzoo::taxonomy::{blocks_csv, enumerate_blocks, stats, Block};
use realzoo::witness::{
    continuity_probe, default_spot_plans, diff_quotients, discontinuity_witness, signature_spot_check, Claim,
    ProbePlan, SpotStatus, Verdict, WitnessBudget,
};
use realzoo::zoo::{eval_with, representative};
use realzoo::{TaggedPoint, ZooEntry, Q};

pub use args::Cli;
use args::*;
pub use config::{CliConfig, OutputFormat};

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or input files: exit status 2.
    Usage(String),
    /// Evaluation failures and strict-mode inconclusive results: exit status 1.
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => m,
        }
    }
}

/// Output of a successful command and whether strict mode should fail it.
pub struct Output {
    pub text: String,
    pub inconclusive: bool,
}

impl Output {
    fn plain(text: String) -> Output {
        Output { text, inconclusive: false }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable output");
    s.push('\n');
    s
}

/// Parses `argv`, runs the command, prints its output, and returns the exit status.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let strict = cli.strict;
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            if strict && out.inconclusive {
                eprintln!("error: result is inconclusive (--strict)");
                1
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

pub fn run(cli: Cli) -> Result<Output, CliError> {
    let cfg = CliConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::Eval(a) => cmd_eval(&cfg, a),
        Command::Plot(a) => cmd_plot(&cfg, a),
        Command::Digits(a) => cmd_digits(&cfg, a),
        Command::Cantor(c) => cmd_cantor(&cfg, c),
        Command::Blocks(c) => cmd_blocks(&cfg, c),
        Command::Probe(a) => cmd_probe(&cfg, a),
        Command::Graph(a) => cmd_graph(&cfg, a),
        Command::Scenarios(a) => Ok(cmd_scenarios(&cfg, &a)),
    }
}

fn entry(cfg: &CliConfig, rep: &RepArgs) -> Result<ZooEntry, CliError> {
    representative(rep.rep as usize, rep.n.unwrap_or(cfg.default_family_n)).map_err(|e| CliError::Usage(e.to_string()))
}

fn cmd_eval(cfg: &CliConfig, a: EvalArgs) -> Result<Output, CliError> {
    let e = entry(cfg, &a.rep)?;
    let precision = a.precision.unwrap_or(cfg.default_precision);
    let v =
        eval_with(&e.expr, &a.at, precision, &cfg.eval_options()).map_err(|err| CliError::Runtime(err.to_string()))?;
    Ok(Output::plain(to_json(&json!({
        "rep": e.id,
        "point": a.at,
        "precision": precision,
        "lo": fmt_ratio(v.lo()),
        "hi": fmt_ratio(v.hi()),
        "exact": v.is_exact(),
    }))))
}

fn cmd_plot(cfg: &CliConfig, a: PlotArgs) -> Result<Output, CliError> {
    if a.from >= a.to {
        return Err(CliError::Usage("--from must be less than --to".into()));
    }
    let e = entry(cfg, &a.rep)?;
    let precision = a.precision.unwrap_or(cfg.default_precision);
    let opts = cfg.eval_options();
    let steps = Q::from_integer((a.samples - 1).into());
    let xs: Vec<Q> = (0..a.samples).map(|i| &a.from + (&a.to - &a.from) * Q::from_integer(i.into()) / &steps).collect();
    let rows: Vec<String> = xs
        .par_iter()
        .map(|x| {
            let p = TaggedPoint::Rat(x.clone());
            match eval_with(&e.expr, &p, precision, &opts) {
                Ok(v) => format!("{},{},{}", fmt_ratio(x), fmt_ratio(v.lo()), fmt_ratio(v.hi())),
                Err(err) => format!("{},error,{}", fmt_ratio(x), err.to_string().replace(',', ";")),
            }
        })
        .collect();
    let mut text = String::from("x,lo,hi\n");
    for r in rows {
        text.push_str(&r);
        text.push('\n');
    }
    Ok(Output::plain(text))
}

fn cmd_digits(cfg: &CliConfig, a: DigitsArgs) -> Result<Output, CliError> {
    use realzoo::points::DigitError;
    let digits = ternary_prefix(&a.point, a.count, cfg.digit_budget).map_err(|e| match e {
        DigitError::OutOfRange => CliError::Usage(format!("{} lies outside [0, 1]", a.point)),
        e @ DigitError::Unresolved { .. } => CliError::Runtime(e.to_string()),
    })?;
    let format = a.format.unwrap_or(match cfg.output_format {
        Some(OutputFormat::Table) => DigitsFormat::Table,
        _ => DigitsFormat::Json,
    });
    let text = match format {
        DigitsFormat::Json => to_json(&json!({ "point": a.point, "count": a.count, "digits": digits })),
        DigitsFormat::Table => {
            let s: String = digits.iter().map(|d| char::from(b'0' + d)).collect();
            format!("0.{s}\n")
        }
    };
    Ok(Output::plain(text))
}

fn tabular(cfg: &CliConfig, explicit: Option<TabularFormat>, fallback: TabularFormat) -> TabularFormat {
    explicit.unwrap_or(match cfg.output_format {
        Some(OutputFormat::Csv) => TabularFormat::Csv,
        Some(OutputFormat::Json) => TabularFormat::Json,
        Some(OutputFormat::Table) => TabularFormat::Table,
        _ => fallback,
    })
}

fn render_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (i, (c, w)) in cells.iter().zip(&widths).enumerate() {
            if i + 1 == cells.len() {
                s.push_str(c);
            } else {
                let _ = write!(s, "{c}{}  ", " ".repeat(w - c.chars().count()));
            }
        }
        s.push('\n');
        s
    };
    let mut out = line(header.to_vec());
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}

fn cmd_cantor(cfg: &CliConfig, c: CantorCommand) -> Result<Output, CliError> {
    let text = match c {
        CantorCommand::Intervals { level, format } => {
            let ivs: Vec<_> = intervals(level).map_err(|e| CliError::Usage(e.to_string()))?.collect();
            match tabular(cfg, format, TabularFormat::Csv) {
                TabularFormat::Csv => {
                    let mut s = String::from("n,k,a,b\n");
                    for iv in &ivs {
                        s.push_str(&iv.csv_row());
                        s.push('\n');
                    }
                    s
                }
                TabularFormat::Json => to_json(
                    &ivs.iter()
                        .map(|iv| json!({"n": iv.level, "k": iv.index, "a": fmt_ratio(&iv.a), "b": fmt_ratio(&iv.b)}))
                        .collect::<Vec<_>>(),
                ),
                TabularFormat::Table => render_table(
                    &["n", "k", "a", "b"],
                    &ivs.iter()
                        .map(|iv| vec![iv.level.to_string(), iv.index.to_string(), fmt_ratio(&iv.a), fmt_ratio(&iv.b)])
                        .collect::<Vec<_>>(),
                ),
            }
        }
        CantorCommand::Locate { point, level } => {
            let loc = locate(&point, level, cfg.digit_budget).map_err(|e| CliError::Usage(e.to_string()))?;
            to_json(&json!({ "point": point, "level": level, "location": loc }))
        }
        CantorCommand::Member { point } => {
            to_json(&json!({ "point": point, "membership": in_cantor(&point, cfg.digit_budget) }))
        }
    };
    Ok(Output::plain(text))
}

fn blocks_rows(blocks: &[Block]) -> Vec<Vec<String>> {
    blocks
        .iter()
        .map(|b| {
            let s = &b.signature;
            vec![
                b.id.to_string(),
                b.case_label.clone(),
                s.continuity.to_string(),
                s.discontinuity.to_string(),
                s.differentiability.to_string(),
                s.non_differentiability.to_string(),
                b.block_cardinality.to_string(),
                b.representative.to_string(),
            ]
        })
        .collect()
}

fn cmd_blocks(cfg: &CliConfig, c: BlocksCommand) -> Result<Output, CliError> {
    let text = match c {
        BlocksCommand::List { format } => {
            let blocks = enumerate_blocks();
            match tabular(cfg, format, TabularFormat::Csv) {
                TabularFormat::Csv => blocks_csv(&blocks),
                TabularFormat::Json => to_json(&blocks),
                TabularFormat::Table => render_table(
                    &["id", "case", "cC", "cCc", "cD", "cDc", "cardinality", "representative"],
                    &blocks_rows(&blocks),
                ),
            }
        }
        BlocksCommand::Stats => to_json(&stats()),
    };
    Ok(Output::plain(text))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path, what: &str) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Runtime(format!("cannot read {what} {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("invalid {what} {}: {e}", path.display())))
}

fn probe_plan(cfg: &CliConfig, a: &ProbeArgs) -> Result<ProbePlan, CliError> {
    let mut plan = match (&a.plan, &a.at) {
        (Some(path), at) => {
            let mut p: ProbePlan = read_json(path, "plan")?;
            if let Some(c) = at {
                p.center = c.clone();
            }
            p
        }
        (None, Some(c)) => ProbePlan::new(c.clone()).with_precision(cfg.default_precision),
        (None, None) => return Err(CliError::Usage("--at or --plan is required".into())),
    };
    if let Some(e) = &a.epsilon {
        plan.epsilon = e.clone();
    }
    if let Some(p) = a.precision {
        plan.precision = p;
    }
    plan.validate().map_err(|e| CliError::Usage(format!("invalid plan: {e}")))?;
    Ok(plan)
}

fn verdict_output(value: serde_json::Value, verdict: &Verdict) -> Output {
    Output { text: to_json(&value), inconclusive: matches!(verdict, Verdict::Inconclusive { .. }) }
}

fn cmd_probe(cfg: &CliConfig, a: ProbeArgs) -> Result<Output, CliError> {
    let e = entry(cfg, &a.rep)?;
    match a.mode {
        ProbeMode::Continuity => {
            let plan = probe_plan(cfg, &a)?;
            let v = continuity_probe(&e.expr, &plan);
            Ok(verdict_output(json!({"rep": e.id, "mode": "continuity", "plan": plan, "verdict": v}), &v))
        }
        ProbeMode::Quotients => {
            let plan = probe_plan(cfg, &a)?;
            let scan = diff_quotients(&e.expr, &plan.center, &plan.steps, plan.precision);
            let v = scan.verdict.clone();
            Ok(verdict_output(
                json!({"rep": e.id, "mode": "quotients", "center": plan.center, "precision": plan.precision, "scan": scan}),
                &v,
            ))
        }
        ProbeMode::Witness => {
            let plan = probe_plan(cfg, &a)?;
            let budget = WitnessBudget { radii: plan.radii.clone(), precision: plan.precision };
            let v = discontinuity_witness(&e.expr, &plan.center, &plan.epsilon, &budget);
            Ok(verdict_output(
                json!({"rep": e.id, "mode": "witness", "center": plan.center, "epsilon": fmt_ratio(&plan.epsilon), "verdict": v}),
                &v,
            ))
        }
        ProbeMode::Spot => {
            if a.at.is_some() || a.epsilon.is_some() || a.precision.is_some() {
                return Err(CliError::Usage("spot mode takes its points and tolerances from the plan".into()));
            }
            let claims: Vec<Claim> = match &a.plan {
                Some(path) => read_json(path, "claims")?,
                None => default_spot_plans(e.id).ok_or_else(|| {
                    CliError::Usage(format!("no shipped spot plan for representative {}; pass --plan", e.id))
                })?,
            };
            let report = signature_spot_check(&e, &claims).map_err(|err| CliError::Usage(err.to_string()))?;
            let inconclusive = report.status == SpotStatus::Inconclusive;
            Ok(Output { text: to_json(&json!({"rep": e.id, "mode": "spot", "report": report})), inconclusive })
        }
    }
}

fn conn_error(e: ConnError) -> CliError {
    CliError::Usage(e.to_string())
}

fn cmd_graph(cfg: &CliConfig, a: GraphArgs) -> Result<Output, CliError> {
    match a.action {
        Some(GraphCommand::Scenarios(s)) => Ok(cmd_scenarios(cfg, &s)),
        Some(GraphCommand::Check { edge: (from, to), plan }) => {
            let big = big_four_graph();
            let graph = if big.nodes().contains(&from) && big.nodes().contains(&to) { big } else { star_graph() };
            let claims: Option<Vec<Claim>> = plan.as_deref().map(|p| read_json(p, "claims")).transpose()?;
            let report = conn::check_edge(&graph, &from, &to, claims.as_deref()).map_err(conn_error)?;
            let inconclusive = report.report.status == SpotStatus::Inconclusive;
            Ok(Output { text: to_json(&report), inconclusive })
        }
        None => {
            let g = match a.which {
                WhichGraph::Star => star_graph(),
                WhichGraph::Bigfour => big_four_graph(),
            };
            let format = a.format.unwrap_or(match cfg.output_format {
                Some(OutputFormat::Json) => GraphFormat::Json,
                _ => GraphFormat::Dot,
            });
            let text = match format {
                GraphFormat::Dot => g.to_dot(),
                GraphFormat::Json => {
                    let mut s = g.to_json();
                    s.push('\n');
                    s
                }
            };
            Ok(Output::plain(text))
        }
    }
}

fn cmd_scenarios(cfg: &CliConfig, a: &ScenarioArgs) -> Output {
    let count = scenario_count(a.nodes);
    let format = a.format.unwrap_or(match cfg.output_format {
        Some(OutputFormat::Json) => ScenarioFormat::Json,
        _ => ScenarioFormat::Table,
    });
    let text = match format {
        ScenarioFormat::Table => format!("{count}\n"),
        ScenarioFormat::Json => {
            let pairs = a.nodes as u64 * (a.nodes as u64 - 1) / 2;
            to_json(&json!({
                "nodes": a.nodes,
                "pairs": pairs,
                "count": count.to_string(),
                "scientific": render_scientific(&count, 7),
            }))
        }
    };
    Output::plain(text)
}
