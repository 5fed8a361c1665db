use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use kloomo::char_sums::{self, KloostermanTable};
use kloomo::codes::{self, WeightDistribution};
use kloomo::field::{Felt, FieldCtx, MAX_DEGREE};
use kloomo::moments::{self, MomentKind, MomentSeries, Source};
use kloomo::Group;

const BUDGET_ENV: &str = "KLOOMO_BUDGET";

#[derive(Parser)]
#[command(
    name = "kloomo",
    version,
    about = "Kloosterman sums, orthogonal-group codes and power moments over GF(2^r)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write output here instead of stdout
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Worker threads for the direct Kloosterman kernels
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: u16,

    /// Enumeration budget (also read from KLOOMO_BUDGET)
    #[arg(long, global = true)]
    budget: Option<u128>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Paper,
}

#[derive(Subcommand)]
enum Command {
    /// Field parameters and trace statistics
    Field(FieldArgs),
    /// Kloosterman sums K_m(a)
    Ksum(KsumArgs),
    /// Weight distribution of C(G)
    Wdist(WdistArgs),
    /// Power moments of Kloosterman sums
    Moments(MomentArgs),
    /// Run every cross-check feasible for the field
    Verify(VerifyArgs),
}

#[derive(Args)]
struct FieldSel {
    /// Extension degree, q = 2^r
    #[arg(long)]
    r: u32,

    /// Reduction polynomial as hex bit pattern (default: built-in table)
    #[arg(long, value_parser = parse_hex_u64)]
    poly: Option<u64>,
}

#[derive(Args)]
struct FieldArgs {
    #[command(flatten)]
    field: FieldSel,
}

#[derive(Args)]
struct KsumArgs {
    #[command(flatten)]
    field: FieldSel,

    /// Single argument a (hex)
    #[arg(long, value_parser = parse_hex_u32, conflicts_with = "all", required_unless_present_any = ["all", "profile"])]
    a: Option<u32>,

    /// Every nonzero a
    #[arg(long)]
    all: bool,

    /// Value profile t -> count instead of the table
    #[arg(long)]
    profile: bool,

    /// Dimension of the sum
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=3))]
    m: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GroupArg {
    So2m,
    O2m,
    So4m,
}

impl GroupArg {
    fn group(self) -> Group {
        match self {
            GroupArg::So2m => Group::So2Minus,
            GroupArg::O2m => Group::O2Minus,
            GroupArg::So4m => Group::So4Minus,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WdistMethod {
    Dp,
    Macwilliams,
    Brute,
}

#[derive(Args)]
struct WdistArgs {
    #[command(flatten)]
    field: FieldSel,

    #[arg(long, value_enum)]
    group: GroupArg,

    /// Only weights 0..=J
    #[arg(long)]
    max_weight: Option<usize>,

    #[arg(long, value_enum, default_value_t = WdistMethod::Dp)]
    method: WdistMethod,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    K,
    K2,
    KEven,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MomentMethod {
    Recursive,
    Direct,
    Salie,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SourceArg {
    G1,
    G2,
}

#[derive(Args)]
struct MomentArgs {
    #[command(flatten)]
    field: FieldSel,

    #[arg(long, default_value_t = 10)]
    h_max: u32,

    #[arg(long, value_enum, default_value_t = KindArg::K)]
    kind: KindArg,

    #[arg(long, value_enum, default_value_t = MomentMethod::Recursive)]
    method: MomentMethod,

    /// Code feeding the MK^h recursion
    #[arg(long, value_enum, default_value_t = SourceArg::G1)]
    source: SourceArg,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    field: FieldSel,

    #[arg(long, default_value_t = 10)]
    h_max: u32,
}

fn parse_hex_u64(s: &str) -> std::result::Result<u64, String> {
    let digits = s
        .strip_prefix("0x")
        .or_else(|| s.strip_prefix("0X"))
        .unwrap_or(s);
    u64::from_str_radix(digits, 16).map_err(|e| format!("not a hex number: {e}"))
}

fn parse_hex_u32(s: &str) -> std::result::Result<u32, String> {
    let v = parse_hex_u64(s)?;
    u32::try_from(v).map_err(|_| "value too large".to_string())
}

/// Failure kinds, mapped to exit codes 1 and 2.
enum Failure {
    Verification(String),
    Usage(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

impl From<kloomo::Error> for Failure {
    fn from(e: kloomo::Error) -> Self {
        Failure::Usage(e.into())
    }
}

struct Env {
    jobs: usize,
    budget: Option<u128>,
    format: Format,
}

impl Env {
    fn field(&self, sel: &FieldSel) -> Result<FieldCtx> {
        if !(1..=MAX_DEGREE).contains(&sel.r) {
            bail!("--r {} is out of range (1..={MAX_DEGREE})", sel.r);
        }
        let ctx = match sel.poly {
            Some(p) => FieldCtx::with_poly(sel.r, p)?,
            None => FieldCtx::new(sel.r)?,
        };
        Ok(match self.budget {
            Some(b) => ctx.with_budget(b)?,
            None => ctx,
        })
    }

    fn reject_paper(&self, what: &str) -> Result<()> {
        if self.format == Format::Paper {
            bail!("--format paper is only available for wdist and moments, not {what}");
        }
        Ok(())
    }
}

fn metadata(ctx: &FieldCtx, group: Option<Group>, method: &str) -> Value {
    json!({
        "r": ctx.r(),
        "q": ctx.q(),
        "poly_hex": format!("{:#x}", ctx.poly()),
        "group": group.map(|g| g.short_name()),
        "method": method,
        "version": env!("CARGO_PKG_VERSION"),
    })
}

fn rows_json(
    meta: Value,
    columns: [&str; 2],
    rows: impl IntoIterator<Item = (String, String)>,
) -> String {
    let rows: Vec<Value> = rows
        .into_iter()
        .map(|(a, b)| {
            let mut m = Map::new();
            m.insert(columns[0].into(), Value::String(a));
            m.insert(columns[1].into(), Value::String(b));
            Value::Object(m)
        })
        .collect();
    let doc = json!({ "metadata": meta, "rows": rows });
    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
}

fn cmd_field(env: &Env, args: &FieldArgs) -> Result<String> {
    env.reject_paper("field")?;
    let ctx = env.field(&args.field)?;
    let trace_one = ctx.trace_one_count();
    let smallest = ctx.smallest_trace_one();
    Ok(match env.format {
        Format::Json => {
            let doc = json!({
                "metadata": metadata(&ctx, None, "field"),
                "trace_mask_hex": format!("{:#x}", ctx.trace_mask()),
                "trace_one_count": trace_one,
                "smallest_trace_one_hex": format!("{:#x}", smallest.0),
            });
            serde_json::to_string_pretty(&doc)? + "\n"
        }
        _ => format!(
            "key,value\nr,{}\nq,{}\npoly_hex,{:#x}\ntrace_mask_hex,{:#x}\ntrace_one_count,{}\nsmallest_trace_one_hex,{:#x}\n",
            ctx.r(),
            ctx.q(),
            ctx.poly(),
            ctx.trace_mask(),
            trace_one,
            smallest.0
        ),
    })
}

fn cmd_ksum(env: &Env, args: &KsumArgs) -> Result<String> {
    env.reject_paper("ksum")?;
    let ctx = env.field(&args.field)?;
    let method = format!("m={}", args.m);
    let values: Vec<(Felt, i64)> = if let Some(a) = args.a.filter(|_| !args.profile) {
        let a = ctx.elem(a)?;
        vec![(a, char_sums::kloosterman_m(&ctx, args.m, a)?)]
    } else if args.m == 1 {
        KloostermanTable::build_with_jobs(&ctx, env.jobs)?
            .iter()
            .collect()
    } else {
        let q = u128::from(ctx.q());
        ctx.check_budget(q.pow(args.m + 1))?;
        ctx.nonzero()
            .map(|a| Ok((a, char_sums::kloosterman_m(&ctx, args.m, a)?)))
            .collect::<Result<_>>()?
    };
    if args.profile {
        let mut counts = std::collections::BTreeMap::<i64, u64>::new();
        for (_, v) in &values {
            *counts.entry(*v).or_default() += 1;
        }
        let profile = char_sums::ValueProfile {
            q: u64::from(ctx.q()),
            counts,
        };
        return Ok(match env.format {
            Format::Json => rows_json(
                metadata(&ctx, None, &method),
                ["t", "count"],
                profile
                    .counts
                    .iter()
                    .map(|(t, c)| (t.to_string(), c.to_string())),
            ),
            _ => profile.to_csv(),
        });
    }
    let rows = values
        .iter()
        .map(|(a, k)| (format!("{:#x}", a.0), k.to_string()));
    Ok(match env.format {
        Format::Json => rows_json(metadata(&ctx, None, &method), ["a_hex", "K"], rows),
        _ => {
            let mut out = String::from("a_hex,K\n");
            for (a, k) in rows {
                out.push_str(&format!("{a},{k}\n"));
            }
            out
        }
    })
}

fn wdist_output(
    env: &Env,
    ctx: &FieldCtx,
    group: Group,
    method: &str,
    wd: &WeightDistribution,
) -> String {
    match env.format {
        Format::Csv => wd.to_csv(),
        Format::Paper => wd.to_paper(),
        Format::Json => rows_json(
            metadata(ctx, Some(group), method),
            ["w", "frequency"],
            wd.counts
                .iter()
                .enumerate()
                .map(|(w, c)| (w.to_string(), c.to_string())),
        ),
    }
}

fn cmd_wdist(env: &Env, args: &WdistArgs) -> Result<String> {
    let ctx = env.field(&args.field)?;
    let group = args.group.group();
    let code = codes::build_code(&ctx, group)?;
    let (wd, method) = match args.method {
        WdistMethod::Dp => (codes::weight_distribution_dp(&code, args.max_weight)?, "dp"),
        WdistMethod::Macwilliams => (
            codes::weight_distribution_macwilliams(&code, args.max_weight)?,
            "macwilliams",
        ),
        WdistMethod::Brute => {
            let mut wd = codes::weight_distribution_bruteforce(&code)?;
            if let Some(j) = args.max_weight.filter(|&j| j + 1 < wd.counts.len()) {
                wd.counts.truncate(j + 1);
                wd.mode = codes::Mode::Prefix(j);
            }
            (wd, "brute")
        }
    };
    Ok(wdist_output(env, &ctx, group, method, &wd))
}

fn direct_series(env: &Env, ctx: &FieldCtx, kind: MomentKind, h_max: u32) -> Result<MomentSeries> {
    let (m, step) = match kind {
        MomentKind::Mk => (1, 1),
        MomentKind::Mk2 => (2, 1),
        MomentKind::MkEven => (1, 2),
    };
    let values = (0..=h_max)
        .map(|h| char_sums::moment_direct_with_jobs(ctx, m, step * h, env.jobs))
        .collect::<std::result::Result<Vec<BigInt>, _>>()?;
    Ok(MomentSeries {
        kind,
        q: ctx.q(),
        values,
    })
}

fn cmd_moments(env: &Env, args: &MomentArgs) -> Result<String> {
    let ctx = env.field(&args.field)?;
    let kind = match args.kind {
        KindArg::K => MomentKind::Mk,
        KindArg::K2 => MomentKind::Mk2,
        KindArg::KEven => MomentKind::MkEven,
    };
    let source = match args.source {
        SourceArg::G1 => Source::G1,
        SourceArg::G2 => Source::G2,
    };
    let (series, method) = match (args.method, kind) {
        (MomentMethod::Recursive, MomentKind::Mk) => (
            moments::mk_recursive(&ctx, args.h_max, source)?,
            "recursive",
        ),
        (MomentMethod::Recursive, MomentKind::Mk2) => {
            (moments::mk2_recursive(&ctx, args.h_max)?, "recursive")
        }
        (MomentMethod::Recursive, MomentKind::MkEven) => {
            (moments::mk_even_recursive(&ctx, args.h_max)?, "recursive")
        }
        (MomentMethod::Direct, kind) => (direct_series(env, &ctx, kind, args.h_max)?, "direct"),
        (MomentMethod::Salie, MomentKind::Mk) => (moments::salie_mk(&ctx, args.h_max)?, "salie"),
        (MomentMethod::Salie, _) => bail!("--method salie only produces --kind k"),
    };
    let group = match (args.method, kind) {
        (MomentMethod::Recursive, MomentKind::Mk) => Some(source.group()),
        (MomentMethod::Recursive, _) => Some(Group::So4Minus),
        _ => None,
    };
    Ok(match env.format {
        Format::Csv => series.to_csv(),
        Format::Paper => series.to_paper(),
        Format::Json => rows_json(
            metadata(&ctx, group, method),
            ["h", "value"],
            series
                .values
                .iter()
                .enumerate()
                .map(|(h, v)| (series.order(h).to_string(), v.to_string())),
        ),
    })
}

fn cmd_verify(env: &Env, args: &VerifyArgs) -> std::result::Result<String, Failure> {
    env.reject_paper("verify")?;
    let ctx = env.field(&args.field)?;
    let report = moments::verify_suite(&ctx, args.h_max);
    let text = match env.format {
        Format::Json => {
            let checks: Vec<Value> = report
                .checks
                .iter()
                .map(|c| {
                    let (status, detail) = match &c.status {
                        moments::Status::Pass => ("pass", None),
                        moments::Status::Fail(d) => ("fail", Some(d.clone())),
                        moments::Status::Skip(d) => ("skip", Some(d.clone())),
                    };
                    json!({ "check": c.name, "status": status, "detail": detail })
                })
                .collect();
            let doc = json!({
                "metadata": metadata(&ctx, None, "verify"),
                "passed": report.passed(),
                "checks": checks,
            });
            serde_json::to_string_pretty(&doc).map_err(anyhow::Error::from)? + "\n"
        }
        _ => format!("{report}\n"),
    };
    if report.passed() {
        Ok(text)
    } else {
        Err(Failure::Verification(text))
    }
}

fn resolve_budget(flag: Option<u128>) -> Result<Option<u128>> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .with_context(|| format!("{BUDGET_ENV}={s:?} is not a nonnegative integer")),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(anyhow!("{BUDGET_ENV}: {e}")),
    }
}

fn emit(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> std::result::Result<String, Failure> {
    let env = Env {
        jobs: cli.jobs as usize,
        budget: resolve_budget(cli.budget)?,
        format: cli.format,
    };
    Ok(match &cli.command {
        Command::Field(a) => cmd_field(&env, a)?,
        Command::Ksum(a) => cmd_ksum(&env, a)?,
        Command::Wdist(a) => cmd_wdist(&env, a)?,
        Command::Moments(a) => cmd_moments(&env, a)?,
        Command::Verify(a) => cmd_verify(&env, a)?,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (text, code) = match run(&cli) {
        Ok(text) => (text, 0),
        Err(Failure::Verification(text)) => (text, 1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(cli.output.as_ref(), &text) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
