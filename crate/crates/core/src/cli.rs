//! Command-line surface: argument parsing and dispatch to the pipeline stages.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use serde_json::{json, Value};

use crate::classes::ClassRecord;
use crate::enumerate::{enumerate_words, EnumerationConfig, DEFAULT_MAX_WORD_LENGTH};
use crate::error::{Result, SystoleError};
use crate::io;
use crate::lengths::Cutoff;
use crate::real::{parse_decimal, DEFAULT_PRECISION, MAX_PRECISION, MIN_PRECISION};
use crate::simulate::empirical_rates;
use crate::spectrum::assemble_spectrum;
use crate::tail::{expected_systole_from, SystoleReport};

#[derive(Debug, Parser)]
#[command(name = "systole", version, about = "Length spectrum and expected systole of random octahedral gluings")]
pub struct Cli {
    /// Working precision in bits.
    #[arg(long, global = true, env = "SYSTOLE_PRECISION", default_value_t = DEFAULT_PRECISION)]
    pub precision: u32,
    /// Worker threads (0 uses every core).
    #[arg(long, global = true, env = "SYSTOLE_WORKERS", default_value_t = 0)]
    pub workers: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the word classes with translation length below the cutoff.
    Words {
        #[command(flatten)]
        head: HeadArgs,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Group the classes by length and report rates and probabilities.
    Spectrum {
        #[command(flatten)]
        head: HeadArgs,
    },
    /// Compute the head sum and the certified tail bound.
    ExpectedSystole {
        #[command(flatten)]
        head: HeadArgs,
        /// Cutoff used to find the next length (default: tried from D + 0.4 upward).
        #[arg(long)]
        tail_cutoff: Option<String>,
        /// Fail unless the D = 4.6 reference values are reproduced.
        #[arg(long)]
        check_anchors: bool,
    },
    /// Sample random gluings and tabulate short-cycle counts.
    Simulate {
        /// Number of blocks.
        #[arg(long, default_value_t = 200)]
        n: usize,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        #[arg(long, default_value_t = 6)]
        max_cycle_len: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct HeadArgs {
    /// Length cutoff D, as a decimal.
    #[arg(long)]
    pub max_length: String,
    /// Word cache to reuse or create.
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// Output file (default: standard output).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Longest word the search may reach before giving up.
    #[arg(long, default_value_t = DEFAULT_MAX_WORD_LENGTH)]
    pub max_word_length: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Output of a successful run: the artifact and where it goes.
#[derive(Debug)]
pub struct Artifact {
    pub text: String,
    pub out: Option<PathBuf>,
}

impl Artifact {
    pub fn emit(&self) -> Result<()> {
        match &self.out {
            Some(p) => fs::write(p, &self.text)?,
            None => print!("{}", self.text),
        }
        Ok(())
    }
}

fn check_precision(p: u32) -> Result<()> {
    if (MIN_PRECISION..=MAX_PRECISION).contains(&p) {
        Ok(())
    } else {
        Err(SystoleError::InvalidConfig(format!("precision {p} outside [{MIN_PRECISION}, {MAX_PRECISION}]")))
    }
}

fn head_classes(head: &HeadArgs, precision: u32) -> Result<(Cutoff, Vec<ClassRecord>)> {
    let mut config = EnumerationConfig::parse(&head.max_length, precision)?;
    config.max_word_length = head.max_word_length;
    if let Some(path) = &head.cache {
        if let Some(classes) = io::load_cache(path, &config.cutoff)? {
            info!("loaded {} classes from {}", classes.len(), path.display());
            return Ok((config.cutoff, classes));
        }
    }
    let e = enumerate_words(&config)?;
    info!("enumerated {} classes over {} stems", e.classes.len(), e.stems_visited);
    if let Some(path) = &head.cache {
        io::save_cache(path, &e.classes, &config.cutoff)?;
    }
    Ok((config.cutoff, e.classes))
}

fn head_config(head: &HeadArgs, precision: u32) -> Value {
    json!({
        "D": head.max_length,
        "precision_bits": precision,
        "max_word_length": head.max_word_length,
    })
}

/// Reference values at D = 4.6.
pub fn check_anchors(report: &SystoleReport) -> Result<()> {
    let fail = |what: String| Err(SystoleError::AnchorFailure(what));
    if report.spectrum.len() != 31 {
        return fail(format!("{} lengths, expected 31", report.spectrum.len()));
    }
    if report.cum_rate != parse_decimal("112").unwrap() / parse_decimal("3").unwrap() {
        return fail(format!("cumulative rate {}, expected 112/3", report.cum_rate));
    }
    if !report.lambda_set_ok {
        return fail("window classes differ from the reference list".into());
    }
    if report.next.ceiling != 11 {
        return fail(format!("ceiling {}, expected 11", report.next.ceiling));
    }
    let sc = report.s_c.to_decimal_string(15);
    if sc != "2.56034118731933" {
        return fail(format!("S_c = {sc}"));
    }
    if report.s_e.to_f64() > 3.0e-16 {
        return fail(format!("S_e = {}", report.s_e.to_decimal_string(6)));
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<Artifact> {
    check_precision(cli.precision)?;
    let prec = cli.precision;
    match &cli.command {
        Command::Words { head, format } => {
            let (_, classes) = head_classes(head, prec)?;
            let text = match format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    io::write_word_cache(&mut buf, &classes, prec)?;
                    String::from_utf8(buf).expect("CSV is UTF-8")
                }
                Format::Json => {
                    let mut sorted = classes.clone();
                    sorted.sort();
                    let rows: Vec<Value> = sorted
                        .iter()
                        .map(|c| {
                            json!({
                                "word": c.representative().to_string(),
                                "m": c.m(),
                                "trace_re": c.canonical_trace().re.to_string(),
                                "trace_im": c.canonical_trace().im.to_string(),
                                "cardinality": c.cardinality().to_string(),
                                "length_decimal": c.length(prec).to_decimal_string(io::DIGITS),
                            })
                        })
                        .collect();
                    io::pretty(&Value::Array(rows))
                }
            };
            Ok(Artifact { text, out: head.out.clone() })
        }
        Command::Spectrum { head } => {
            let (_, classes) = head_classes(head, prec)?;
            let spectrum = assemble_spectrum(&classes, prec)?;
            Ok(Artifact { text: io::pretty(&io::spectrum_json(&spectrum)), out: head.out.clone() })
        }
        Command::ExpectedSystole { head, tail_cutoff, check_anchors: anchors } => {
            let (cutoff, classes) = head_classes(head, prec)?;
            if *anchors && cutoff.value() != &parse_decimal("4.6").unwrap() {
                return Err(SystoleError::InvalidConfig("--check-anchors needs --max-length 4.6".into()));
            }
            let report = expected_systole_from(&cutoff, &classes, tail_cutoff.as_deref())?;
            if *anchors {
                check_anchors(&report)?;
            }
            let mut settings = head_config(head, prec);
            settings["tail_cutoff"] = json!(tail_cutoff);
            settings["check_anchors"] = json!(anchors);
            let config = io::config_json("expected-systole", settings);
            Ok(Artifact { text: io::pretty(&io::report_json(&report, config)), out: head.out.clone() })
        }
        Command::Simulate { n, samples, max_cycle_len, seed, out } => {
            if *n < 2 || *samples < 2 || *max_cycle_len < 3 {
                return Err(SystoleError::InvalidConfig("need n ≥ 2, samples ≥ 2 and max-cycle-len ≥ 3".into()));
            }
            if *max_cycle_len > *n {
                return Err(SystoleError::InvalidConfig("max-cycle-len exceeds n".into()));
            }
            let table = empirical_rates(*samples, *n, *max_cycle_len, *seed);
            let mut buf = Vec::new();
            io::write_simulation_table(&mut buf, &table)?;
            Ok(Artifact { text: String::from_utf8(buf).expect("CSV is UTF-8"), out: out.clone() })
        }
    }
}

/// Machine-readable error object written to standard error.
pub fn error_json(err: &SystoleError) -> Value {
    json!({ "error": { "kind": err.kind(), "message": err.to_string(), "exit_code": err.exit_code() } })
}
