//! Command-line grammar and dispatch.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use zhad::classify::{
    a_ts, bounds_from_rows, classification_report, classify_fixed, equivalence_search,
    nonlinear_s_range, Budget, ClassificationRow, EquivalenceVerdict,
};
use zhad::hadamard::{
    enumerate_type_specs, generator_direct, generator_recursive, gray_image, AdditiveCode,
};
use zhad::invariants::compute_record;
use zhad::{GrayTable, Residue, TypeSpec};

use crate::cache::{ResultsCache, CACHE_ENV};
use crate::expected::{ExpectedTables, EXPECTED_JSON};
use crate::format;

/// Exit status for a verification mismatch.
pub const EXIT_MISMATCH: i32 = 1;
/// Exit status for usage and runtime errors.
pub const EXIT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "zhad",
    version,
    about = "Gray images, invariants and classification of Z_2^s-additive Hadamard codes"
)]
pub struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// JSON-lines cache of invariant records.
    #[arg(long, global = true, env = CACHE_ENV)]
    pub cache: Option<PathBuf>,
    /// Lift the default cap on t.
    #[arg(long, global = true)]
    pub allow_large: bool,
    /// Worker threads (defaults to one per core).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Direct,
    Recursive,
}

#[derive(Args, Debug)]
pub struct CodeArgs {
    /// Ring exponent; inferred from the tuple length when omitted.
    #[arg(long)]
    pub s: Option<u32>,
    /// Comma-separated t_1,...,t_s.
    #[arg(long = "type")]
    pub ty: String,
}

impl CodeArgs {
    fn spec(&self) -> Result<TypeSpec> {
        let spec: TypeSpec = self.ty.parse()?;
        if let Some(s) = self.s {
            if s != spec.s() {
                bail!(
                    "--s {s} does not match the {}-entry type {}",
                    spec.s(),
                    self.ty
                );
            }
        }
        Ok(spec)
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Gray map images of the elements of Z_2^s.
    Gray {
        #[arg(long)]
        s: u32,
        /// Print only this element.
        #[arg(long)]
        u: Option<u64>,
    },
    /// List the types of length 2^t over Z_2^s.
    Types {
        #[arg(long)]
        t: u32,
        #[arg(long)]
        s: u32,
    },
    /// Print a generator matrix, optionally with the binary codewords.
    Build {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, value_enum, default_value = "direct")]
        mode: Mode,
        /// Also list the Gray image as hex words.
        #[arg(long)]
        words: bool,
    },
    /// Rank, kernel dimension, linearity and minimum distance of one code.
    Invariants {
        #[command(flatten)]
        code: CodeArgs,
        /// Confirm the kernel dimension by exhaustive search.
        #[arg(long)]
        verify_kernel: bool,
    },
    /// Invariant table for length 2^t, for one s or all of them.
    Classify {
        #[arg(long)]
        t: u32,
        #[arg(long)]
        s: Option<u32>,
        #[arg(long)]
        verify_kernel: bool,
    },
    /// Lower bounds (kernel, rank and kernel) and upper bound on A_t.
    Bounds {
        #[arg(long)]
        t: u32,
    },
    /// Search for an equivalence between two codes given as s,t_1,...,t_s.
    Equiv {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        budget_ms: Option<u64>,
        #[arg(long)]
        budget_nodes: Option<u64>,
    },
    /// Replay the classification against the embedded expected tables.
    Verify {
        #[arg(long, default_value_t = 3)]
        t_min: u32,
        #[arg(long, default_value_t = 10)]
        t_max: u32,
        /// Print the embedded tables and exit.
        #[arg(long)]
        dump_expected: bool,
        #[arg(long)]
        verify_kernel: bool,
    },
}

/// Parses `s,t_1,...,t_s` or `s:t_1,...,t_s`.
pub fn parse_code_ref(text: &str) -> Result<TypeSpec> {
    let parts: Vec<u32> = text
        .split([',', ':'])
        .map(|p| p.trim().parse::<u32>())
        .collect::<std::result::Result<_, _>>()
        .with_context(|| format!("malformed code {text:?}; expected s,t_1,...,t_s"))?;
    let Some((&s, counts)) = parts.split_first() else {
        bail!("empty code reference");
    };
    if counts.len() != s as usize {
        bail!(
            "code {text:?} gives s={s} but {} type entries",
            counts.len()
        );
    }
    Ok(TypeSpec::new(s, counts)?)
}

fn write_json(out: &mut dyn Write, value: &impl serde::Serialize) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

/// Runs one command, returning the process exit status.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Gray { s, u } => gray(cli, out, *s, *u),
        Command::Types { t, s } => types(cli, out, *t, *s),
        Command::Build { code, mode, words } => build(cli, out, code, *mode, *words),
        Command::Invariants {
            code,
            verify_kernel,
        } => invariants(cli, out, code, *verify_kernel),
        Command::Classify {
            t,
            s,
            verify_kernel,
        } => classify(cli, out, *t, *s, *verify_kernel),
        Command::Bounds { t } => bounds(cli, out, *t),
        Command::Equiv {
            a,
            b,
            budget_ms,
            budget_nodes,
        } => equiv(cli, out, a, b, *budget_ms, *budget_nodes),
        Command::Verify {
            t_min,
            t_max,
            dump_expected,
            verify_kernel,
        } => {
            if *dump_expected {
                out.write_all(EXPECTED_JSON.as_bytes())?;
                return Ok(0);
            }
            verify(cli, out, *t_min, *t_max, *verify_kernel)
        }
    }
}

fn gray(cli: &Cli, out: &mut dyn Write, s: u32, u: Option<u64>) -> Result<i32> {
    let table = GrayTable::build(s)?;
    let elements: Vec<u32> = match u {
        Some(u) => vec![Residue::new(u, s)?.value()],
        None => (0..1u32 << s).collect(),
    };
    match cli.format.unwrap_or(Format::Text) {
        Format::Json => {
            let rows: Vec<_> = elements
                .iter()
                .map(|&u| json!({ "u": u, "image": table.images()[u as usize].to_string() }))
                .collect();
            write_json(out, &json!({ "s": s, "images": rows }))?;
        }
        Format::Csv => {
            writeln!(out, "u,image")?;
            for u in elements {
                writeln!(out, "{u},{}", table.images()[u as usize])?;
            }
        }
        Format::Text => {
            for u in elements {
                writeln!(out, "{u} {}", table.images()[u as usize])?;
            }
        }
    }
    Ok(0)
}

fn types(cli: &Cli, out: &mut dyn Write, t: u32, s: u32) -> Result<i32> {
    let specs = enumerate_type_specs(t, s);
    match cli.format.unwrap_or(Format::Text) {
        Format::Json => write_json(out, &specs)?,
        Format::Csv | Format::Text => {
            for spec in specs {
                writeln!(out, "{}", spec.type_string())?;
            }
        }
    }
    Ok(0)
}

fn build(cli: &Cli, out: &mut dyn Write, code: &CodeArgs, mode: Mode, words: bool) -> Result<i32> {
    let spec = code.spec()?;
    spec.check_cap(cli.allow_large)?;
    let gen = match mode {
        Mode::Direct => generator_direct(&spec),
        Mode::Recursive => generator_recursive(&spec),
    };
    let image = if words {
        let table = GrayTable::build(spec.s())?;
        Some(gray_image(&AdditiveCode::new(gen.clone()), &table)?)
    } else {
        None
    };
    match cli.format.unwrap_or(Format::Text) {
        Format::Json => {
            let rows: Vec<&[u32]> = gen.rows().iter().map(|r| r.entries()).collect();
            let mut doc =
                json!({ "s": spec.s(), "type": spec.counts(), "n": gen.n(), "rows": rows });
            if let Some(image) = &image {
                let hex: Vec<String> = image.iter().map(|w| w.to_hex()).collect();
                doc["words"] = json!({ "length": image.length(), "hex": hex });
            }
            write_json(out, &doc)?;
        }
        Format::Csv | Format::Text => {
            out.write_all(gen.to_text().as_bytes())?;
            if let Some(image) = &image {
                writeln!(out)?;
                for w in image.iter() {
                    writeln!(out, "{}", w.to_hex())?;
                }
            }
        }
    }
    Ok(0)
}

fn invariants(cli: &Cli, out: &mut dyn Write, code: &CodeArgs, verify_kernel: bool) -> Result<i32> {
    let spec = code.spec()?;
    let cache = cli.cache.as_ref().map(ResultsCache::new);
    let cached = match &cache {
        Some(c) if !verify_kernel => c.lookup(&spec)?,
        _ => None,
    };
    let record = match cached {
        Some(r) => r,
        None => {
            let start = Instant::now();
            let (record, _) = compute_record(&spec, verify_kernel, cli.allow_large)?;
            if let Some(c) = &cache {
                c.append(&record, ms(start.elapsed()))?;
            }
            record
        }
    };
    match cli.format.unwrap_or(Format::Json) {
        Format::Json => write_json(out, &record)?,
        Format::Csv => {
            out.write_all(format::records_to_csv(std::slice::from_ref(&record))?.as_bytes())?
        }
        Format::Text => {
            writeln!(out, "type {} over Z_2^{}", record.spec, record.spec.s())?;
            writeln!(out, "t {}  n {}  N {}", record.t, record.n, record.length)?;
            writeln!(
                out,
                "rank {}  kernel_dim {}  linear {}",
                record.rank, record.kernel_dim, record.linear
            )?;
            writeln!(out, "min_distance {}", record.min_distance)?;
        }
    }
    Ok(0)
}

fn text_rows(out: &mut dyn Write, rows: &[ClassificationRow]) -> Result<()> {
    for r in rows {
        let line = format!("  {:<20} ({},{})", r.spec.to_string(), r.rank, r.kernel_dim);
        writeln!(out, "{line}{}", if r.linear { " linear" } else { "" })?;
    }
    Ok(())
}

fn classify(
    cli: &Cli,
    out: &mut dyn Write,
    t: u32,
    s: Option<u32>,
    verify_kernel: bool,
) -> Result<i32> {
    let format = cli.format.unwrap_or(Format::Csv);
    if let Some(s) = s {
        let rows = classify_fixed(t, s, verify_kernel, cli.allow_large)?;
        match format {
            Format::Json => write_json(out, &rows)?,
            Format::Csv => out.write_all(format::rows_to_csv(&rows)?.as_bytes())?,
            Format::Text => {
                writeln!(out, "t={t} s={s} A={}", a_ts(t, s).value)?;
                text_rows(out, &rows)?;
            }
        }
        return Ok(0);
    }
    let report = classification_report(t, 2..=t + 1, verify_kernel, cli.allow_large)?;
    match format {
        Format::Json => write_json(out, &report)?,
        Format::Csv => {
            let rows: Vec<ClassificationRow> = report.rows().cloned().collect();
            out.write_all(format::rows_to_csv(&rows)?.as_bytes())?;
        }
        Format::Text => {
            for g in &report.groups {
                let bound = if g.count.upper_bound {
                    " (upper bound)"
                } else {
                    ""
                };
                writeln!(out, "s={} A={}{bound}", g.s, g.count.value)?;
                text_rows(out, &g.rows)?;
            }
            if let Some(b) = report.bounds {
                writeln!(
                    out,
                    "bounds K={} RK={} upper={}",
                    b.lower_k, b.lower_rk, b.upper
                )?;
            }
        }
    }
    Ok(0)
}

fn bounds(cli: &Cli, out: &mut dyn Write, t: u32) -> Result<i32> {
    let b = zhad::classify::a_t_bounds(t, cli.allow_large)?;
    match cli.format.unwrap_or(Format::Text) {
        Format::Json => write_json(out, &b)?,
        Format::Csv => writeln!(
            out,
            "t,lower_k,lower_rk,upper\n{},{},{},{}",
            b.t, b.lower_k, b.lower_rk, b.upper
        )?,
        Format::Text => writeln!(out, "{},{},{}", b.lower_k, b.lower_rk, b.upper)?,
    }
    Ok(0)
}

fn equiv(
    cli: &Cli,
    out: &mut dyn Write,
    a: &str,
    b: &str,
    budget_ms: Option<u64>,
    budget_nodes: Option<u64>,
) -> Result<i32> {
    let image = |spec: &TypeSpec| -> Result<_> {
        spec.check_cap(cli.allow_large)?;
        Ok(gray_image(
            &AdditiveCode::from_spec(spec),
            &GrayTable::build(spec.s())?,
        )?)
    };
    let (sa, sb) = (parse_code_ref(a)?, parse_code_ref(b)?);
    let mut budget = Budget::default();
    if let Some(ms) = budget_ms {
        budget.time_limit = Some(Duration::from_millis(ms));
    }
    if let Some(n) = budget_nodes {
        budget.max_nodes = n;
    }
    let start = Instant::now();
    let verdict = equivalence_search(&image(&sa)?, &image(&sb)?, &budget)?;
    let elapsed = start.elapsed();
    match cli.format.unwrap_or(Format::Text) {
        Format::Json => write_json(
            out,
            &json!({ "a": sa, "b": sb, "verdict": verdict, "wall_time_ms": ms(elapsed) }),
        )?,
        Format::Csv | Format::Text => match &verdict {
            EquivalenceVerdict::Equivalent { witness } => {
                writeln!(out, "equivalent")?;
                writeln!(out, "translation {}", witness.translation.to_hex())?;
                let perm: Vec<String> = witness.permutation.iter().map(|p| p.to_string()).collect();
                writeln!(out, "permutation {}", perm.join(" "))?;
            }
            EquivalenceVerdict::Inequivalent { separated_by } => {
                writeln!(out, "inequivalent: {separated_by}")?;
            }
            EquivalenceVerdict::Unknown { nodes } => {
                writeln!(out, "unknown: budget exhausted after {nodes} nodes")?;
            }
        },
    }
    Ok(0)
}

fn verify(
    cli: &Cli,
    out: &mut dyn Write,
    t_min: u32,
    t_max: u32,
    verify_kernel: bool,
) -> Result<i32> {
    if t_min < 3 || t_min > t_max {
        bail!("need 3 <= t-min <= t-max, got {t_min}..{t_max}");
    }
    let expected = ExpectedTables::embedded();
    let mut checks = 0usize;
    let mut mismatches: Vec<String> = Vec::new();
    for t in t_min..=t_max {
        let mut rows = Vec::new();
        for s in nonlinear_s_range(t) {
            rows.extend(classify_fixed(t, s, verify_kernel, cli.allow_large)?);
        }
        if expected.pair_t_range().contains(&t) {
            let computed: BTreeMap<(u32, Vec<u32>), (usize, u32)> = rows
                .iter()
                .filter(|r| !r.linear)
                .map(|r| ((r.spec.s(), r.spec.counts().to_vec()), r.pair()))
                .collect();
            let published: BTreeMap<(u32, Vec<u32>), (usize, u32)> = expected
                .pairs_for(t)
                .map(|p| ((p.s, p.counts.clone()), (p.rank, p.kernel_dim)))
                .collect();
            for key in computed
                .keys()
                .chain(published.keys())
                .collect::<std::collections::BTreeSet<_>>()
            {
                checks += 1;
                let (got, want) = (computed.get(key), published.get(key));
                if got != want {
                    mismatches.push(format!(
                        "t={t} s={} type={:?}: computed {got:?}, expected {want:?}",
                        key.0, key.1
                    ));
                }
            }
        }
        for s in 2..=9 {
            if let Some(want) = expected.count(t, s) {
                checks += 1;
                let got = a_ts(t, s).value;
                if got != want {
                    mismatches.push(format!("A(t={t}, s={s}): computed {got}, expected {want}"));
                }
            }
        }
        if let Some(want) = expected.bounds(t) {
            checks += 1;
            let got = bounds_from_rows(t, &rows);
            if got != want {
                mismatches.push(format!("bounds t={t}: computed {got:?}, expected {want:?}"));
            }
        }
        if cli.format != Some(Format::Json) {
            writeln!(out, "t={t}: {} rows classified", rows.len())?;
        }
    }
    match cli.format.unwrap_or(Format::Text) {
        Format::Json => write_json(out, &json!({ "checks": checks, "mismatches": mismatches }))?,
        Format::Csv | Format::Text => {
            for m in &mismatches {
                writeln!(out, "MISMATCH {m}")?;
            }
            writeln!(
                out,
                "verify: {checks} checks, {} mismatches",
                mismatches.len()
            )?;
        }
    }
    Ok(if mismatches.is_empty() {
        0
    } else {
        EXIT_MISMATCH
    })
}
