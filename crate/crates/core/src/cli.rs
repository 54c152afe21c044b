//! The `atlas` command line: argument parsing and the subcommands, returning
//! captured output so the binary stays a thin wrapper.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::admissible::{straight_classes, ParahoricLabel};
use crate::ekor::{is_basic_stratum, stratum_report};
use crate::error::{AtlasError, Result};
use crate::export::{
    adm_csv, adm_dot, adm_entries, adm_table, gortz_yu_json, gortz_yu_table, hoeve_json, hoeve_table,
    straight_class_json, strata_csv, strata_table, stratum_json, to_json, word_string, ComparisonJson, StratumJson,
    Table,
};
use crate::oracle::run_suites;
use crate::siegel::SiegelContext;

/// Largest genus accepted by the enumeration commands.
pub const MAX_GENUS: usize = 5;
/// Largest genus accepted by `check`.
pub const MAX_CHECK_GENUS: usize = 3;

const TAIL: &str = "τ";

#[derive(Parser, Debug)]
#[command(name = "atlas", version, about = "Admissible sets and basic EKOR strata for GSp(2g)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(clap::Args, Debug, Clone)]
pub struct CommonArgs {
    /// Genus: the group is GSp(2g) with μ = (1^g, 0^g).
    #[arg(long)]
    pub g: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the main output here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(clap::Args, Debug, Clone)]
pub struct LevelArgs {
    /// `iwahori`, `hyperspecial`, or a comma-separated node list such as `0,2`.
    #[arg(long, default_value = "iwahori")]
    pub level: String,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Enumerate Adm(μ).
    Adm {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// One record per element of Adm(μ) ∩ ᴷW̃, with basicness and I(K, w, σ).
    Classify {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        level: LevelArgs,
    },
    /// Deligne–Lusztig data of the basic strata at a level.
    DlData {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        level: LevelArgs,
    },
    /// Generic data against the closed forms at Iwahori and hyperspecial level.
    Compare {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the brute-force oracle suites.
    Check {
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Config(String),
    Internal(String),
}

impl From<AtlasError> for Failure {
    fn from(e: AtlasError) -> Self {
        match e {
            AtlasError::InvalidGenus(_) | AtlasError::InvalidLevel(_) => Failure::Config(e.to_string()),
            other => Failure::Internal(other.to_string()),
        }
    }
}

/// Main payload, summary lines, and whether a check failed.
struct Report {
    payload: String,
    summary: Vec<String>,
    failed: bool,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            };
        }
    };
    let common = common_args(&cli.command).clone();
    let result = catch_unwind(AssertUnwindSafe(|| execute(&cli.command)))
        .unwrap_or_else(|p| Err(Failure::Internal(panic_message(p.as_ref()))));
    match result {
        Err(Failure::Config(msg)) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") },
        Err(Failure::Internal(msg)) => Outcome { code: 1, stdout: String::new(), stderr: format!("error: {msg}\n") },
        Ok(rep) => finish(rep, &common),
    }
}

fn panic_message(p: &(dyn std::any::Any + Send)) -> String {
    if let Some(s) = p.downcast_ref::<&str>() {
        format!("internal failure: {s}")
    } else if let Some(s) = p.downcast_ref::<String>() {
        format!("internal failure: {s}")
    } else {
        "internal failure".into()
    }
}

fn finish(rep: Report, common: &CommonArgs) -> Outcome {
    let summary: String = rep.summary.iter().map(|l| format!("{l}\n")).collect();
    let mut out = Outcome { code: i32::from(rep.failed), stdout: String::new(), stderr: String::new() };
    match &common.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &rep.payload) {
                return Outcome { code: 1, stdout: String::new(), stderr: format!("error: {}: {e}\n", path.display()) };
            }
            out.stdout = summary;
        }
        None if common.format == Format::Text => {
            out.stdout = rep.payload;
            out.stdout.push_str(&summary);
        }
        None => {
            out.stdout = rep.payload;
            out.stderr = summary;
        }
    }
    out
}

fn common_args(cmd: &Command) -> &CommonArgs {
    match cmd {
        Command::Adm { common }
        | Command::Classify { common, .. }
        | Command::DlData { common, .. }
        | Command::Compare { common }
        | Command::Check { common } => common,
    }
}

fn context(g: usize, max: usize) -> std::result::Result<SiegelContext, Failure> {
    if g == 0 || g > max {
        return Err(Failure::Config(format!("--g must be between 1 and {max}, got {g}")));
    }
    Ok(SiegelContext::new(g)?)
}

/// `iwahori`, `hyperspecial`, or a node list.
pub fn parse_level(ctx: &SiegelContext, spec: &str) -> Result<ParahoricLabel> {
    let spec = spec.trim();
    match spec {
        "iwahori" => Ok(ParahoricLabel::iwahori()),
        "hyperspecial" => Ok(ctx.hyperspecial()),
        _ => {
            let mut nodes = crate::coxeter::NodeSubset::empty();
            for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                let i: usize = part
                    .strip_prefix('s')
                    .unwrap_or(part)
                    .parse()
                    .map_err(|_| AtlasError::InvalidLevel(format!("cannot parse node `{part}`")))?;
                if i > ctx.g() {
                    return Err(AtlasError::InvalidLevel(format!("node {i} is not in s0..s{}", ctx.g())));
                }
                nodes.insert(i);
            }
            ParahoricLabel::new(ctx.group(), nodes)
        }
    }
}

fn unsupported(cmd: &str, f: Format) -> Failure {
    Failure::Config(format!("format {f:?} is not supported by `{cmd}`").to_lowercase())
}

fn execute(cmd: &Command) -> std::result::Result<Report, Failure> {
    match cmd {
        Command::Adm { common } => cmd_adm(common),
        Command::Classify { common, level } => cmd_classify(common, level),
        Command::DlData { common, level } => cmd_dl_data(common, level),
        Command::Compare { common } => cmd_compare(common),
        Command::Check { common } => cmd_check(common),
    }
}

fn profile_summary(profile: &[usize]) -> String {
    let total: usize = profile.iter().sum();
    let counts: Vec<String> = profile.iter().map(|c| c.to_string()).collect();
    format!("{total} elements: {} by length 0..{}", counts.join("/"), profile.len().saturating_sub(1))
}

fn cmd_adm(common: &CommonArgs) -> std::result::Result<Report, Failure> {
    let ctx = context(common.g, MAX_GENUS)?;
    let grp = ctx.group();
    let adm = ctx.adm();
    let entries = adm_entries(grp, adm);
    let classes = straight_classes(grp, adm)?;
    let payload = match common.format {
        Format::Json => to_json(&entries)?,
        Format::Csv => adm_csv(&entries)?,
        Format::Dot => adm_dot(grp, adm, TAIL, |x| is_basic_stratum(grp, x)),
        Format::Text => {
            let mut s = adm_table(&entries, TAIL).render();
            s.push('\n');
            let mut t = Table::new(&["newton", "kottwitz", "representative", "straight elements", "basic"]);
            for class in &classes {
                let c = straight_class_json(grp, class);
                let rep = adm.position(&class.representative).map(|i| word_string(adm.word_of(i), TAIL));
                t.push(vec![
                    format!("({})", c.newton.join(",")),
                    c.kottwitz.to_string(),
                    rep.unwrap_or_default(),
                    c.size.to_string(),
                    if c.basic { "yes".into() } else { "".into() },
                ]);
            }
            s.push_str(&t.render());
            s.push('\n');
            s
        }
    };
    Ok(Report {
        payload,
        summary: vec![profile_summary(&adm.length_profile()), format!("{} straight classes", classes.len())],
        failed: false,
    })
}

fn records(ctx: &SiegelContext, level: &LevelArgs) -> std::result::Result<(ParahoricLabel, Vec<StratumJson>), Failure> {
    let k = parse_level(ctx, &level.level)?;
    let recs = stratum_report(ctx.group(), ctx.adm(), k)?;
    Ok((k, recs.iter().map(|r| stratum_json(ctx.group(), r)).collect()))
}

fn cmd_classify(common: &CommonArgs, level: &LevelArgs) -> std::result::Result<Report, Failure> {
    let ctx = context(common.g, MAX_GENUS)?;
    let (k, recs) = records(&ctx, level)?;
    let basic = recs.iter().filter(|r| r.basic).count();
    let payload = match common.format {
        Format::Json => to_json(&recs)?,
        Format::Csv => strata_csv(&recs)?,
        Format::Text => {
            let mut s = format!("K = {}\n\n", k.nodes());
            s.push_str(&strata_table(&recs, TAIL).render());
            s.push('\n');
            s
        }
        Format::Dot => return Err(unsupported("classify", common.format)),
    };
    Ok(Report { payload, summary: vec![format!("{} strata, {basic} basic", recs.len())], failed: false })
}

fn cmd_dl_data(common: &CommonArgs, level: &LevelArgs) -> std::result::Result<Report, Failure> {
    let ctx = context(common.g, MAX_GENUS)?;
    let (k, recs) = records(&ctx, level)?;
    let basic: Vec<StratumJson> = recs.into_iter().filter(|r| r.basic).collect();
    let payload = match common.format {
        Format::Json => to_json(&basic)?,
        Format::Csv => strata_csv(&basic)?,
        Format::Text => {
            let mut t = Table::new(&[
                "element", "ambient", "type", "parabolic", "frobenius", "stable", "dim", "coxeter", "index set",
            ]);
            for r in &basic {
                let Some(dl) = &r.dl else { continue };
                let images: Vec<String> = dl.frobenius.images.iter().map(|i| i.to_string()).collect();
                t.push(vec![
                    word_string(&r.word, TAIL),
                    dl.ambient.to_string(),
                    dl.ambient_type.clone(),
                    dl.parabolic.to_string(),
                    format!("[{}]", images.join(" ")),
                    if dl.frobenius.stabilizes_parabolic { "yes".into() } else { "no".into() },
                    dl.dim.to_string(),
                    if dl.sigma_coxeter { "yes".into() } else { "no".into() },
                    format!("J/J∩K{}", dl.index_set.parahoric),
                ]);
            }
            let mut s = format!("K = {}\n\n", k.nodes());
            s.push_str(&t.render());
            s.push('\n');
            s
        }
        Format::Dot => return Err(unsupported("dl-data", common.format)),
    };
    Ok(Report { payload, summary: vec![format!("{} basic strata", basic.len())], failed: false })
}

fn cmd_compare(common: &CommonArgs) -> std::result::Result<Report, Failure> {
    let ctx = context(common.g, MAX_GENUS)?;
    let gy = gortz_yu_json(&ctx.compare_gortz_yu()?);
    let h = hoeve_json(&ctx.compare_hoeve()?);
    let mismatches = h.iter().filter(|r| !r.agrees).count();
    let payload = match common.format {
        Format::Json => to_json(&ComparisonJson { g: ctx.g(), gortz_yu: gy.clone(), hoeve: h.clone() })?,
        Format::Text => {
            let mut s = String::from("Basic Iwahori strata (K = {})\n\n");
            s.push_str(&gortz_yu_table(&gy, TAIL).render());
            s.push_str(&format!("\nBasic EO strata (K = {})\n\n", ctx.hyperspecial().nodes()));
            s.push_str(&hoeve_table(&h, TAIL).render());
            s.push('\n');
            s
        }
        f => return Err(unsupported("compare", f)),
    };
    let mut summary = vec![
        format!("{} basic Iwahori strata, all superspecial", gy.len()),
        format!("{} basic EO strata, {mismatches} closed-form mismatches", h.len()),
    ];
    for r in h.iter().filter(|r| !r.agrees) {
        summary.push(format!(
            "mismatch: c = {}, w = {}: I(K,w,σ) = {}, closed form {}",
            r.c,
            word_string(&r.w, ""),
            r.i_set,
            r.closed_i_set
        ));
    }
    Ok(Report { payload, summary, failed: mismatches > 0 })
}

fn cmd_check(common: &CommonArgs) -> std::result::Result<Report, Failure> {
    let ctx = context(common.g, MAX_CHECK_GENUS)?;
    let grp = ctx.group();
    let tau = ctx.tau().element.clone();
    let omegas = [grp.inv(&tau), tau];
    let conj = (ctx.g() <= 2).then_some(4);
    let reports = run_suites(grp, ctx.adm(), &omegas, 6, conj);
    let failed = reports.iter().filter(|r| !r.passed()).count();
    let payload = match common.format {
        Format::Json => to_json(&reports)?,
        Format::Text => reports.iter().map(|r| format!("{r}\n")).collect(),
        f => return Err(unsupported("check", f)),
    };
    let summary = if failed == 0 {
        vec![format!("all {} suites pass", reports.len())]
    } else {
        vec![format!("{failed} of {} suites failed", reports.len())]
    };
    Ok(Report { payload, summary, failed: failed > 0 })
}
