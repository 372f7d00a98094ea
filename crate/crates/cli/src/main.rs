mod escape;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use xbwtrie::combinatorics::{
    count_tries_formula, enumerate_matrices, enumerate_tries, trie_to_matrix, DEFAULT_CAP,
};
use xbwtrie::entropy::{check_bounds, format_value, report_modes, EntropyReport, ReportRow};
use xbwtrie::succinct::{BlockCodec, RankSelect};
use xbwtrie::trie::{build_from_strings, parse_strings, SymbolDistribution, Trie};
use xbwtrie::verify::{run_sweep, VerifyConfig};
use xbwtrie::xbwt::{build_index, Mode, XbwtIndex, MAGIC};

use crate::escape::{escape, unescape};

static STOP: AtomicBool = AtomicBool::new(false);

#[derive(Parser)]
#[command(name = "xbwtrie", version, about = "Trie counting, entropy and XBWT count index")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Plain,
    Fid,
    Id,
    FixedBlock,
    Auto,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Format {
    Table,
    Tsv,
    JsonLines,
}

#[derive(Subcommand)]
enum Command {
    /// Build an index from a newline-separated strings file.
    Build {
        input: PathBuf,
        #[arg(long, short)]
        output: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        mode: ModeArg,
        /// Block size for fixed-block mode.
        #[arg(long)]
        block_size: Option<u64>,
    },
    /// Count nodes reached by each pattern (`\xNN` escapes allowed).
    Count {
        index: PathBuf,
        patterns: Vec<String>,
        /// File with one raw pattern per line.
        #[arg(long)]
        patterns_file: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "tsv")]
        format: Format,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Entropy report and bound checks for an index or strings file.
    Stats {
        input: PathBuf,
        /// Highest context order.
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Count tries with a symbol distribution three ways.
    Enumerate {
        n: u64,
        /// Comma-separated per-symbol edge counts.
        distribution: String,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Exhaustive sweep of the counting, rotation and round-trip checks.
    Verify {
        #[arg(long, default_value_t = 8)]
        max_n: u64,
        #[arg(long, default_value_t = 3)]
        max_sigma: usize,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Print the pre-order degree matrix, co-lex order and XBWT.
    Dump {
        input: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let _ = ctrlc::set_handler(|| STOP.store(true, Ordering::SeqCst));
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

/// Returns whether every check passed.
fn run(command: Command) -> Result<bool> {
    match command {
        Command::Build {
            input,
            output,
            mode,
            block_size,
        } => cmd_build(&input, &output, mode, block_size),
        Command::Count {
            index,
            patterns,
            patterns_file,
            format,
            output,
        } => cmd_count(&index, &patterns, patterns_file.as_deref(), format, output.as_deref()),
        Command::Stats { input, k, format, output } => cmd_stats(&input, k, format, output.as_deref()),
        Command::Enumerate {
            n,
            distribution,
            cap,
            output,
        } => cmd_enumerate(n, &distribution, cap, output.as_deref()),
        Command::Verify {
            max_n,
            max_sigma,
            cap,
            output,
        } => cmd_verify(max_n, max_sigma, cap, output.as_deref()),
        Command::Dump { input, output } => cmd_dump(&input, output.as_deref()),
    }
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Writes to the file if given, otherwise to stdout.
fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn trie_from_strings(path: &Path, data: &[u8]) -> Result<Trie> {
    let strings = parse_strings(data);
    if strings.is_empty() {
        bail!("{}: no strings", path.display());
    }
    Ok(build_from_strings(&strings)?)
}

/// A trie from either an index file or a strings file.
fn load_trie(path: &Path) -> Result<Trie> {
    let data = read(path)?;
    if data.starts_with(MAGIC) {
        let index = XbwtIndex::deserialize(&data).with_context(|| format!("{}", path.display()))?;
        return Ok(index.invert()?);
    }
    trie_from_strings(path, &data)
}

fn mode_of(mode: ModeArg, block_size: Option<u64>) -> Result<Mode> {
    if block_size == Some(0) {
        bail!("block size must be positive");
    }
    Ok(match mode {
        ModeArg::Plain => Mode::Plain,
        ModeArg::Fid => Mode::Fid,
        ModeArg::Id => Mode::Id,
        ModeArg::FixedBlock => Mode::FixedBlock {
            block_size,
            codec: BlockCodec::Rrr,
        },
        ModeArg::Auto => Mode::AUTO,
    })
}

fn cmd_build(input: &Path, output: &Path, mode: ModeArg, block_size: Option<u64>) -> Result<bool> {
    let trie = trie_from_strings(input, &read(input)?)?;
    let index = build_index(&trie, mode_of(mode, block_size)?);
    fs::write(output, index.serialize()).with_context(|| format!("cannot write {}", output.display()))?;
    let mut text = format!(
        "n={} sigma={} r={} mode={}\n",
        index.n(),
        index.alphabet().len(),
        index.run_count().total,
        index.mode().name()
    );
    for m in report_modes() {
        let built = build_index(&trie, m);
        let p = built.payload_bits();
        text.push_str(&format!(
            "payload {}: entropy={} overhead={} total={}\n",
            built.mode().name(),
            p.entropy,
            p.overhead,
            p.total()
        ));
    }
    emit(None, &text)?;
    Ok(true)
}

fn cmd_count(
    index_path: &Path,
    patterns: &[String],
    patterns_file: Option<&Path>,
    format: Format,
    output: Option<&Path>,
) -> Result<bool> {
    let index = XbwtIndex::deserialize(&read(index_path)?).with_context(|| format!("{}", index_path.display()))?;
    let mut queries: Vec<(String, Vec<u8>)> = Vec::new();
    for p in patterns {
        queries.push((p.clone(), unescape(p)?));
    }
    if let Some(path) = patterns_file {
        for p in parse_strings(&read(path)?) {
            queries.push((escape(&p), p));
        }
    }
    let mut ok = true;
    let mut text = String::new();
    for (shown, bytes) in &queries {
        match index.count(bytes) {
            Ok(c) => match format {
                Format::JsonLines => text.push_str(&format!("{}\n", json!({"pattern": shown, "count": c}))),
                _ => text.push_str(&format!("{shown}\t{c}\n")),
            },
            Err(e) => {
                ok = false;
                eprintln!("{shown}\terror: {e}");
            }
        }
    }
    emit(output, &text)?;
    Ok(ok)
}

fn render_report(report: &EntropyReport, format: Format) -> String {
    match format {
        Format::Tsv => report.to_tsv(),
        Format::JsonLines => report
            .rows()
            .into_iter()
            .map(|row| match row {
                ReportRow::Metric { name, k, value } => json!({"metric": name, "k": k, "value": value}),
                ReportRow::Check { name, pass, slack } => {
                    json!({"check": name, "status": if pass { "pass" } else { "fail" }, "slack": slack})
                }
            })
            .map(|v| format!("{v}\n"))
            .collect(),
        Format::Table => {
            let mut out = format!("{:<28} {:>3} {:>16}\n", "metric", "k", "value");
            let mut checks = format!("\n{:<28} {:>6} {:>16}\n", "check", "status", "slack");
            for row in report.rows() {
                match row {
                    ReportRow::Metric { name, k, value } => {
                        let k = k.map_or_else(|| "-".to_string(), |k| k.to_string());
                        out.push_str(&format!("{name:<28} {k:>3} {:>16}\n", format_value(value)));
                    }
                    ReportRow::Check { name, pass, slack } => {
                        let status = if pass { "pass" } else { "FAIL" };
                        checks.push_str(&format!("{name:<28} {status:>6} {:>16}\n", format_value(slack)));
                    }
                }
            }
            out + &checks
        }
    }
}

fn cmd_stats(input: &Path, k: usize, format: Format, output: Option<&Path>) -> Result<bool> {
    let trie = load_trie(input)?;
    let report = check_bounds(&trie, k);
    emit(output, &render_report(&report, format))?;
    Ok(report.all_pass())
}

fn cmd_enumerate(n: u64, distribution: &str, cap: u64, output: Option<&Path>) -> Result<bool> {
    let counts = distribution
        .split(',')
        .map(|s| s.trim().parse::<u64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .with_context(|| format!("bad distribution {distribution:?}"))?;
    if n == 0 {
        bail!("n must be positive");
    }
    let dist = SymbolDistribution::new(n, counts)?;
    let formula = count_tries_formula(&dist);
    let mut matrices = 0u64;
    for m in enumerate_matrices(&dist, cap)? {
        if STOP.load(Ordering::Relaxed) {
            bail!("interrupted");
        }
        drop(m);
        matrices += 1;
    }
    let tries = enumerate_tries(&dist, cap)?.count() as u64;
    let by_matrices = if matrices.is_multiple_of(n) { (matrices / n).to_string() } else { format!("{matrices}/{n}") };
    let ok = formula == tries.into() && matrices.is_multiple_of(n) && formula == (matrices / n).into();
    let text = format!(
        "formula\t{formula}\nmatrices/n\t{by_matrices}\ntries\t{tries}\n{}\n",
        if ok { "equal" } else { "MISMATCH" }
    );
    emit(output, &text)?;
    Ok(ok)
}

fn cmd_verify(max_n: u64, max_sigma: usize, cap: u64, output: Option<&Path>) -> Result<bool> {
    if cap == 0 {
        bail!("cap must be positive");
    }
    let summary = run_sweep(&VerifyConfig::new(max_n, max_sigma, cap), &STOP)?;
    let mut text = summary.table();
    for r in summary.failures() {
        let counts: Vec<String> = r.counts.iter().map(u64::to_string).collect();
        text.push_str(&format!(
            "failed n={} dist={} formula={} matrices={} lukasiewicz={} tries={} rotation_failures={} roundtrip_failures={}\n",
            r.n,
            counts.join(","),
            r.formula,
            r.matrices,
            r.lukasiewicz,
            r.tries,
            r.rotation_failures,
            r.roundtrip_failures
        ));
    }
    emit(output, &text)?;
    Ok(summary.passed())
}

fn cmd_dump(input: &Path, output: Option<&Path>) -> Result<bool> {
    let trie = load_trie(input)?;
    let mut text = trie_to_matrix(&trie).to_text();
    let colex: Vec<String> = trie.colex_order().iter().map(|u| (u + 1).to_string()).collect();
    text.push_str(&format!("colex: {}\n", colex.join(" ")));
    let index = build_index(&trie, Mode::Plain);
    let sets: Vec<String> = index
        .xbwt()
        .iter()
        .map(|s| format!("{{{}}}", s.iter().map(|&c| escape(&[c])).collect::<Vec<_>>().join(",")))
        .collect();
    text.push_str(&format!("xbwt: {}\n", sets.join(" ")));
    for (&c, b) in index.alphabet().symbols().iter().zip(index.bitvectors()) {
        text.push_str(&format!("B_{}: {}\n", escape(&[c]), b.to_raw()));
    }
    emit(output, &text)?;
    Ok(true)
}

