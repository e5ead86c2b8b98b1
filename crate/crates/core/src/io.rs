//! File formats: the word cache, spectrum and report JSON, and the simulation table.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::classes::ClassRecord;
use crate::error::{Result, SystoleError};
use crate::lengths::Cutoff;
use crate::real::parse_decimal;
use crate::simulate::SimulationTable;
use crate::spectrum::SpectrumEntry;
use crate::tail::SystoleReport;
use crate::word::Word;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Significant digits of every decimal field.
pub const DIGITS: usize = 30;

pub const CACHE_HEADER: [&str; 6] = ["word", "m", "trace_re", "trace_im", "cardinality", "length_decimal"];

pub const SIMULATE_HEADER: [&str; 8] = [
    "m",
    "trace_re",
    "trace_im",
    "empirical_mean",
    "empirical_var",
    "predicted_rate_num",
    "predicted_rate_den",
    "stderr",
];

fn csv_err(e: csv::Error) -> SystoleError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => SystoleError::Io(io),
        other => SystoleError::Cache(format!("{other:?}")),
    }
}

/// Writes one row per class, sorted by (length, m, word).
pub fn write_word_cache<W: Write>(out: W, classes: &[ClassRecord], prec: u32) -> Result<()> {
    let mut sorted = classes.to_vec();
    sorted.sort();
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CACHE_HEADER).map_err(csv_err)?;
    for c in &sorted {
        let t = c.canonical_trace();
        w.write_record([
            c.representative().to_string(),
            c.m().to_string(),
            t.re.to_string(),
            t.im.to_string(),
            c.cardinality().to_string(),
            c.length(prec).to_decimal_string(DIGITS),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a word cache, checking every row against its recomputed class.
pub fn read_word_cache<R: Read>(input: R, prec: u32) -> Result<Vec<ClassRecord>> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers().map_err(csv_err)?.clone();
    if header.iter().ne(CACHE_HEADER.iter().copied()) {
        return Err(SystoleError::Cache(format!("unexpected header {:?}", header.iter().collect::<Vec<_>>())));
    }
    let mut out = Vec::new();
    for (line, row) in r.records().enumerate() {
        let row = row.map_err(csv_err)?;
        let bad = |what: &str| SystoleError::Cache(format!("row {}: {what}", line + 1));
        let word: Word = row[0].parse().map_err(|_| bad("unparsable word"))?;
        let c = ClassRecord::from_word(&word);
        let t = c.canonical_trace();
        let int = |s: &str| s.parse::<BigInt>().map_err(|_| bad("unparsable integer"));
        let consistent = row[1].parse::<usize>().ok() == Some(c.m())
            && int(&row[2])? == t.re
            && int(&row[3])? == t.im
            && int(&row[4])? == c.cardinality()
            && row[5] == c.length(prec).to_decimal_string(DIGITS);
        if !consistent || c.representative() != &word {
            return Err(bad("does not match its recomputed class"));
        }
        out.push(c);
    }
    Ok(out)
}

/// Location of the metadata recorded next to a word cache.
pub fn cache_meta_path(cache: &Path) -> PathBuf {
    let mut name = cache.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

/// Writes the cache and its metadata (the cutoff it is complete for).
pub fn save_cache(path: &Path, classes: &[ClassRecord], cutoff: &Cutoff) -> Result<()> {
    let mut buf = Vec::new();
    write_word_cache(&mut buf, classes, cutoff.precision())?;
    fs::write(path, buf)?;
    let meta = json!({ "D": cutoff.text(), "precision_bits": cutoff.precision(), "version": VERSION });
    fs::write(cache_meta_path(path), pretty(&meta))?;
    Ok(())
}

/// Classes below `cutoff` from a cache, or `None` if the cache is missing or was
/// built for a smaller cutoff.
pub fn load_cache(path: &Path, cutoff: &Cutoff) -> Result<Option<Vec<ClassRecord>>> {
    if !path.exists() {
        return Ok(None);
    }
    let meta: Value = match fs::read(cache_meta_path(path)) {
        Ok(bytes) => serde_json::from_slice(&bytes).map_err(|e| SystoleError::Cache(e.to_string()))?,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let built_for = meta["D"]
        .as_str()
        .and_then(|d| parse_decimal(d).ok())
        .ok_or_else(|| SystoleError::Cache("metadata lacks a cutoff".into()))?;
    if &built_for < cutoff.value() {
        return Ok(None);
    }
    let classes = read_word_cache(fs::File::open(path)?, cutoff.precision())?;
    let mut kept = Vec::with_capacity(classes.len());
    for c in classes {
        if cutoff.length_below(c.tau_key())? {
            kept.push(c);
        }
    }
    Ok(Some(kept))
}

fn rational_field(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn ratio_fields(r: &BigRational) -> (Value, Value) {
    (rational_field(r.numer()), rational_field(r.denom()))
}

pub fn spectrum_json(spectrum: &[SpectrumEntry]) -> Value {
    let entries: Vec<Value> = spectrum
        .iter()
        .map(|e| {
            let (rn, rd) = ratio_fields(&e.rate);
            let (cn, cd) = ratio_fields(&e.cum_rate);
            let classes: Vec<Value> = e
                .classes
                .iter()
                .map(|c| json!({"word": c.representative().to_string(), "m": c.m(), "cardinality": rational_field(&c.cardinality())}))
                .collect();
            json!({
                "i": e.index,
                "length": e.length.to_decimal_string(DIGITS),
                "classes": classes,
                "rate_num": rn,
                "rate_den": rd,
                "cum_rate_num": cn,
                "cum_rate_den": cd,
                "p_i": e.probability.to_decimal_string(DIGITS),
            })
        })
        .collect();
    Value::Array(entries)
}

/// Full configuration of a run, embedded in every JSON artifact.
pub fn config_json(command: &str, fields: Value) -> Value {
    json!({ "command": command, "settings": fields })
}

pub fn report_json(report: &SystoleReport, config: Value) -> Value {
    let (rn, rd) = ratio_fields(&report.cum_rate);
    let d = |x: &crate::real::PreciseReal| x.to_decimal_string(DIGITS);
    let window: Vec<String> = report.next.window.iter().map(|c| c.representative().to_string()).collect();
    let (wn, wd) = ratio_fields(&report.next.window_rate);
    json!({
        "S_c": d(&report.s_c),
        "A": d(&report.a),
        "B1_self": d(&report.b1_self),
        "B1_paper": crate::tail::B1_REFERENCE,
        "B2": d(&report.b2),
        "B2_recount": d(&report.b2_recount),
        "S_e": d(&report.s_e),
        "lower": d(&report.lower),
        "upper": d(&report.upper),
        "D": report.cutoff,
        "tail_D": report.tail_cutoff,
        "precision_bits": report.precision,
        "n_lengths": report.spectrum.len(),
        "n_classes": report.n_classes,
        "next_length": d(&report.next.length),
        "window": { "words": window, "rate_num": wn, "rate_den": wd },
        "anchors": {
            "R31_num": rn,
            "R31_den": rd,
            "lambda_set_ok": report.lambda_set_ok,
            "tau_l32_ceiling": report.next.ceiling,
        },
        "notes": [
            "each S^k·theta and S^k·theta^2 class is counted separately with rate 1/2",
            "S_e uses the larger of the two B1 values and the larger of B2 and its recount",
        ],
        "version": VERSION,
        "config": config,
    })
}

pub fn write_simulation_table<W: Write>(out: W, table: &SimulationTable) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SIMULATE_HEADER).map_err(csv_err)?;
    for r in &table.rows {
        w.write_record([
            r.key.m.to_string(),
            r.key.trace.0.to_string(),
            r.key.trace.1.to_string(),
            format!("{:.6}", r.mean),
            format!("{:.6}", r.variance),
            r.predicted.numer().to_string(),
            r.predicted.denom().to_string(),
            format!("{:.6}", r.stderr),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Pretty JSON with a trailing newline.
pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}
