//! `knotwist`: twisted Alexander invariants from the command line.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use knotwist::covers::verify_lemma_2_3;
use knotwist::fpgroup::{abelianization_map, GroupPresentation};
use knotwist::invariants::{
    delta_k, divisibility_check, monicness_verdict, mutant_compare, read_table, row_matches, triviality_search,
    validate_fixture, write_table, InvariantError, InvariantReport, Limits, ReportRecord, TableRow, Verdict,
    GOLDEN_TABLE,
};
use knotwist::knot_codec::{braid_to_presentation, parse_braid, parse_pd, pd_to_wirtinger, CodecError, Fixtures, FIXTURES_ENV};
use knotwist::perm::rep_classes;
use knotwist::scalar::Scalar;
use knotwist::twisted::TwistRing;
use knotwist::{with_prime, Integer, SUPPORTED_PRIMES};

const EXIT_FAILED_CHECK: u8 = 1;
const EXIT_UNKNOWN_INPUT: u8 = 2;
const EXIT_RESOURCE: u8 = 3;
const EXIT_FIXTURE_GAP: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "knotwist", version, about = "Twisted Alexander polynomials from permutation representations")]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Config {
    /// Fixture file to use instead of the bundled one.
    #[arg(long, global = true, env = FIXTURES_ENV)]
    fixtures: Option<PathBuf>,
    /// Coefficient ring.
    #[arg(long, global = true, value_enum, default_value_t = Ring::Fp)]
    ring: Ring,
    /// Prime for `--ring fp`.
    #[arg(long, global = true, default_value_t = 13)]
    p: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Identify t with t^-1 when comparing.
    #[arg(long, global = true, default_value_t = true, action = clap::ArgAction::Set)]
    allow_mirror: bool,
    /// Largest symmetric group degree allowed.
    #[arg(long, global = true, default_value_t = knotwist::perm::DEFAULT_MAX_K)]
    max_k: usize,
    /// Largest image group for covers and regular representations.
    #[arg(long, global = true, default_value_t = knotwist::perm::DEFAULT_MAX_GROUP_ORDER)]
    max_group_order: usize,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Ring {
    Z,
    Fp,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
struct Source {
    /// Name in the fixture file.
    #[arg(long)]
    knot: Option<String>,
    /// Braid word, e.g. "1 1 1" or "3: 1 -2 1 -2".
    #[arg(long, allow_hyphen_values = true)]
    braid: Option<String>,
    /// PD code, e.g. "X(1,5,2,4);X(3,9,4,8)".
    #[arg(long)]
    pd: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute Δ^k with its per-class factors.
    Invariant {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        k: usize,
    },
    /// Decide whether Δ^k separates two fixture knots.
    Compare {
        first: String,
        second: String,
        #[arg(long, default_value_t = 5)]
        k: usize,
    },
    /// Rows of lowest and highest terms, optionally checked against a golden file.
    Table {
        /// Knots to tabulate with their k, as NAME:K; defaults to every row of the golden file.
        #[arg(long, value_delimiter = ',')]
        rows: Vec<String>,
        /// Compare against the golden rows and fail on any difference.
        #[arg(long)]
        check: bool,
        /// Golden CSV (default: the bundled table).
        #[arg(long)]
        golden: Option<PathBuf>,
    },
    /// Compare twisted polynomials with pushforwards from the regular covers.
    Cover {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        k: usize,
    },
    /// Monicness over the integers for k up to a bound.
    Fibered {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 3)]
        k_max: usize,
    },
    /// Smallest k with Δ^k different from 1.
    Trivial {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 5)]
        k_max: usize,
    },
    /// For every class into S_k, check that the regular-representation
    /// polynomial divides Δ^|G|.
    Divides {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        k: usize,
    },
    /// Check Δ^1 of every fixture against its recorded Alexander polynomial.
    Validate,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("unknown knot `{0}`")]
    UnknownKnot(String),
    #[error("{0}")]
    Input(#[from] CodecError),
    #[error("unsupported prime {0}; choose one of {SUPPORTED_PRIMES:?}")]
    Prime(u32),
    #[error("{0}")]
    Invariant(#[from] InvariantError),
    #[error("missing from fixtures: {0}")]
    FixtureGap(String),
    #[error("{0}")]
    Check(String),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::UnknownKnot(_) | CliError::Input(_) | CliError::Prime(_) | CliError::Usage(_) => {
                EXIT_UNKNOWN_INPUT
            }
            CliError::Invariant(e) if e.is_resource() => EXIT_RESOURCE,
            CliError::Invariant(InvariantError::Codec(_)) => EXIT_UNKNOWN_INPUT,
            CliError::Invariant(_) | CliError::Check(_) => EXIT_FAILED_CHECK,
            CliError::FixtureGap(_) => EXIT_FIXTURE_GAP,
        }
    }
}

struct Ctx {
    config: Config,
    fixtures: Fixtures,
    limits: Limits,
}

impl Ctx {
    fn resolve(&self, s: &Source) -> Result<(String, GroupPresentation), CliError> {
        if let Some(name) = &s.knot {
            let rec = self.fixtures.get(name).ok_or_else(|| CliError::UnknownKnot(name.clone()))?;
            return Ok((name.clone(), rec.presentation()?));
        }
        if let Some(b) = &s.braid {
            return Ok((format!("braid({b})"), braid_to_presentation(&parse_braid(b)?)?));
        }
        if let Some(pd) = &s.pd {
            return Ok(("pd".into(), pd_to_wirtinger(&parse_pd(pd)?)?));
        }
        Err(CliError::Usage("one of --knot, --braid or --pd is required".into()))
    }

    fn named(&self, name: &str) -> Result<GroupPresentation, CliError> {
        let rec = self.fixtures.get(name).ok_or_else(|| CliError::UnknownKnot(name.into()))?;
        Ok(rec.presentation()?)
    }

    fn genus(&self, s: &Source) -> Option<u32> {
        s.knot.as_ref().and_then(|n| self.fixtures.get(n)).and_then(|r| r.genus)
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn report_text<C: Scalar>(r: &InvariantReport<C>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "knot {}  k = {}  ring {}", r.name, r.k, r.ring);
    let _ = writeln!(out, "classes: {} ({} abelian)", r.classes.len(), r.num_abelian());
    for c in &r.classes {
        let kind = if c.class.abelian { "abelian" } else { "non-abelian" };
        let _ = writeln!(out, "  {}  orbit {}  {}  {}", c.class.rep, c.class.orbit, kind, c.poly);
    }
    let _ = writeln!(out, "product: {}", r.product);
    let _ = writeln!(out, "degree: {}", r.degree());
    if let Some(m) = r.monic() {
        let _ = writeln!(out, "monic: {m}");
    }
    out
}

fn render_report<C: Scalar>(r: &InvariantReport<C>, format: Format) -> Result<String, CliError> {
    Ok(match format {
        Format::Text => report_text(r),
        Format::Json => json(&r.record()),
        Format::Csv => write_table(&[TableRow::from_report(r)])?,
    })
}

/// Run `$body` with `$C` bound to the configured coefficient type.
macro_rules! with_ring {
    ($cfg:expr, $C:ident => $body:expr) => {
        match $cfg.ring {
            Ring::Z => {
                type $C = Integer;
                $body
            }
            Ring::Fp => with_prime!($cfg.p, P => {
                type $C = knotwist::Fp<P>;
                $body
            }, _ => Err(CliError::Prime($cfg.p))),
        }
    };
}

fn invariant(ctx: &Ctx, source: &Source, k: usize) -> Result<String, CliError> {
    let (name, p) = ctx.resolve(source)?;
    with_ring!(ctx.config, C => {
        let r = delta_k::<C>(&name, &p, k, &ctx.limits)?;
        render_report(&r, ctx.config.format)
    })
}

#[derive(Serialize)]
struct CompareRecord {
    first: ReportRecord,
    second: ReportRecord,
    verdict: Verdict,
}

fn compare_in<C: TwistRing>(ctx: &Ctx, a: &str, b: &str, k: usize) -> Result<String, CliError> {
    let (pa, pb) = (ctx.named(a)?, ctx.named(b)?);
    let cmp = mutant_compare::<C>((a, &pa), (b, &pb), k, ctx.config.allow_mirror, &ctx.limits)?;
    let verdict = cmp.verdict();
    Ok(match ctx.config.format {
        Format::Json => json(&CompareRecord {
            first: cmp.first.record(),
            second: cmp.second.record(),
            verdict,
        }),
        Format::Csv => write_table(&[TableRow::from_report(&cmp.first), TableRow::from_report(&cmp.second)])?,
        Format::Text => {
            let mut out = String::new();
            for r in [&cmp.first, &cmp.second] {
                let _ = writeln!(out, "{}  k = {}  classes {}  degree {}", r.name, r.k, r.classes.len(), r.degree());
                let _ = writeln!(out, "  {}", r.product);
            }
            let _ = writeln!(out, "{}", if cmp.distinguished { "DISTINGUISHED" } else { "NOT DISTINGUISHED" });
            out
        }
    })
}

fn compare(ctx: &Ctx, a: &str, b: &str, k: usize) -> Result<String, CliError> {
    with_ring!(ctx.config, C => compare_in::<C>(ctx, a, b, k))
}

fn parse_row_spec(spec: &str) -> Result<(String, usize), CliError> {
    let (name, k) = spec
        .rsplit_once(':')
        .ok_or_else(|| CliError::Usage(format!("row `{spec}` should be NAME:K")))?;
    let k = k.parse().map_err(|_| CliError::Usage(format!("bad k in `{spec}`")))?;
    Ok((name.to_string(), k))
}

fn table(ctx: &Ctx, rows: &[String], check: bool, golden: &Option<PathBuf>) -> Result<(String, Option<CliError>), CliError> {
    let golden_text = match golden {
        Some(path) => std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?,
        None => GOLDEN_TABLE.to_string(),
    };
    let golden_rows = read_table(&golden_text)?;
    let wanted: Vec<(String, usize)> = if rows.is_empty() {
        golden_rows.iter().map(|r| (r.knot.clone(), r.k)).collect()
    } else {
        rows.iter().map(|s| parse_row_spec(s)).collect::<Result<_, _>>()?
    };
    let missing: Vec<&str> = wanted
        .iter()
        .filter(|(n, _)| ctx.fixtures.get(n).is_none())
        .map(|(n, _)| n.as_str())
        .collect();

    let mut out_rows = Vec::new();
    let mut mismatches = Vec::new();
    with_ring!(ctx.config, C => {
        for (name, k) in wanted.iter().filter(|(n, _)| ctx.fixtures.get(n).is_some()) {
            let p = ctx.named(name)?;
            let r = delta_k::<C>(name, &p, *k, &ctx.limits)?;
            if check {
                match golden_rows.iter().find(|g| &g.knot == name && g.k == *k) {
                    Some(g) if row_matches(g, r.classes.len(), &r.product, ctx.config.allow_mirror) => {}
                    Some(_) => mismatches.push(name.clone()),
                    None => mismatches.push(format!("{name} (no golden row)")),
                }
            }
            out_rows.push(TableRow::from_report(&r));
        }
        Ok::<(), CliError>(())
    })?;

    let mut text = match ctx.config.format {
        Format::Json => json(&out_rows),
        _ => write_table(&out_rows)?,
    };
    if check {
        let _ = writeln!(
            text,
            "# check: {} of {} rows match",
            out_rows.len() - mismatches.len(),
            out_rows.len()
        );
    }
    let failure = if !missing.is_empty() {
        Some(CliError::FixtureGap(missing.join(", ")))
    } else if !mismatches.is_empty() {
        Some(CliError::Check(format!("rows differ from golden data: {}", mismatches.join(", "))))
    } else {
        None
    };
    Ok((text, failure))
}

#[derive(Serialize)]
struct CoverRow {
    rep: String,
    group_order: usize,
    b1: usize,
    div: Option<i64>,
    twisted: String,
    cover: String,
    equal: bool,
    /// Sum of the twisted coefficients vanishes whenever `b1 > 1`.
    vanishing_ok: bool,
}

fn cover(ctx: &Ctx, source: &Source, k: usize) -> Result<(String, Option<CliError>), CliError> {
    let (name, p) = ctx.resolve(source)?;
    if ctx.config.ring != Ring::Fp {
        return Err(CliError::Usage("cover works over --ring fp".into()));
    }
    if k > ctx.limits.max_k {
        return Err(InvariantError::KTooLarge { k, max: ctx.limits.max_k }.into());
    }
    let phi = abelianization_map(&p).map_err(InvariantError::from)?;
    let rows: Vec<CoverRow> = with_prime!(ctx.config.p, P => {
        rep_classes(&p, k)
            .iter()
            .map(|c| {
                let r = verify_lemma_2_3::<P>(&p, &c.rep, &phi, ctx.limits.max_group_order)
                    .map_err(InvariantError::from)?;
                let vanishing_ok = r.b1 <= 1 || r.vanishes_at_one;
                Ok(CoverRow {
                    rep: c.rep.to_string(),
                    group_order: knotwist::perm::image_group(&c.rep, ctx.limits.max_group_order)
                        .map_err(InvariantError::from)?
                        .len(),
                    b1: r.b1,
                    div: r.div,
                    twisted: r.twisted.to_string(),
                    cover: r.cover.to_string(),
                    equal: r.equal,
                    vanishing_ok,
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?
    }, _ => return Err(CliError::Prime(ctx.config.p)));
    let text = match ctx.config.format {
        Format::Json => json(&rows),
        _ => {
            let mut out = String::new();
            let _ = writeln!(out, "knot {name}  k = {k}  F_{}", ctx.config.p);
            for r in &rows {
                let _ = writeln!(
                    out,
                    "  {}  |G| = {}  b1 = {}  div = {}  {}",
                    r.rep,
                    r.group_order,
                    r.b1,
                    r.div.map(|d| d.to_string()).unwrap_or_else(|| "-".into()),
                    if r.equal && r.vanishing_ok { "equal" } else { "DIFFERENT" }
                );
                let _ = writeln!(out, "    twisted: {}", r.twisted);
                let _ = writeln!(out, "    cover:   {}", r.cover);
            }
            out
        }
    };
    let bad = rows.iter().any(|r| !r.equal || !r.vanishing_ok);
    Ok((text, bad.then(|| CliError::Check("cover check failed".into()))))
}

fn verdict_text(v: &Verdict, format: Format) -> String {
    match format {
        Format::Json => json(v),
        _ => format!("{v}\n"),
    }
}

#[derive(Serialize)]
struct DivisibilityRow {
    rep: String,
    group_order: usize,
    gamma: String,
    divides: bool,
}

fn divides(ctx: &Ctx, source: &Source, k: usize) -> Result<(String, Option<CliError>), CliError> {
    let (name, p) = ctx.resolve(source)?;
    if k > ctx.limits.max_k {
        return Err(InvariantError::KTooLarge { k, max: ctx.limits.max_k }.into());
    }
    let mut rows = Vec::new();
    with_ring!(ctx.config, C => {
        for c in rep_classes(&p, k) {
            let d = divisibility_check::<C>(&p, &c.rep, &ctx.limits)?;
            rows.push(DivisibilityRow {
                rep: c.rep.to_string(),
                group_order: d.group_order,
                gamma: d.gamma.to_string(),
                divides: d.divides,
            });
        }
        Ok::<(), CliError>(())
    })?;
    let text = match ctx.config.format {
        Format::Json => json(&rows),
        _ => {
            let mut out = format!("knot {name}  k = {k}\n");
            for r in &rows {
                let _ = writeln!(
                    out,
                    "  {}  |G| = {}  {}",
                    r.rep,
                    r.group_order,
                    if r.divides { "divides" } else { "DOES NOT DIVIDE" }
                );
            }
            out
        }
    };
    let bad = rows.iter().any(|r| !r.divides);
    Ok((text, bad.then(|| CliError::Check("divisibility failed".into()))))
}

fn validate(ctx: &Ctx) -> Result<(String, Option<CliError>), CliError> {
    let mut out = String::new();
    let mut bad = Vec::new();
    for rec in ctx.fixtures.records() {
        let check = validate_fixture(rec)?;
        let status = match check.agrees {
            Some(true) => "ok",
            Some(false) => {
                bad.push(rec.name.clone());
                "MISMATCH"
            }
            None => "unrecorded",
        };
        let _ = writeln!(out, "{:<12} {:<10} {}", rec.name, status, check.computed);
    }
    let failure = (!bad.is_empty()).then(|| CliError::Check(format!("fixtures disagree: {}", bad.join(", "))));
    Ok((out, failure))
}

fn run(cli: Cli) -> Result<(String, Option<CliError>), CliError> {
    if let Some(n) = cli.config.threads {
        // Only fails if a pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    if cli.config.ring == Ring::Fp && !SUPPORTED_PRIMES.contains(&cli.config.p) {
        return Err(CliError::Prime(cli.config.p));
    }
    let fixtures = match &cli.config.fixtures {
        Some(path) => Fixtures::from_path(path)?,
        None => Fixtures::bundled(),
    };
    let ctx = Ctx {
        limits: Limits {
            max_k: cli.config.max_k,
            max_group_order: cli.config.max_group_order,
        },
        config: cli.config,
        fixtures,
    };
    let plain = |r: Result<String, CliError>| r.map(|s| (s, None));
    match &cli.command {
        Command::Invariant { source, k } => plain(invariant(&ctx, source, *k)),
        Command::Compare { first, second, k } => plain(compare(&ctx, first, second, *k)),
        Command::Table { rows, check, golden } => table(&ctx, rows, *check, golden),
        Command::Cover { source, k } => cover(&ctx, source, *k),
        Command::Fibered { source, k_max } => {
            let (_, p) = ctx.resolve(source)?;
            let v = monicness_verdict(&p, *k_max, ctx.genus(source), &ctx.limits)?;
            plain(Ok(verdict_text(&v, ctx.config.format)))
        }
        Command::Trivial { source, k_max } => {
            let (_, p) = ctx.resolve(source)?;
            let v = triviality_search(&p, *k_max, &ctx.limits)?;
            plain(Ok(verdict_text(&v, ctx.config.format)))
        }
        Command::Divides { source, k } => divides(&ctx, source, *k),
        Command::Validate => validate(&ctx),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((out, failure)) => {
            print!("{out}");
            match failure {
                None => ExitCode::SUCCESS,
                Some(e) => {
                    eprintln!("knotwist: {e}");
                    ExitCode::from(e.exit_code())
                }
            }
        }
        Err(e) => {
            eprintln!("knotwist: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
