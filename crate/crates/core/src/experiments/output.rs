//! Result tables and their CSV / JSON encodings.
//!
//! CSV files start with `#` comment lines (tool version, config echo) and a
//! mandatory header row. Every number is rounded to 15 significant digits
//! before it is stored, so CSV and JSON carry identical values.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::channels::ChannelFamily;
use crate::error::{Error, Result};
use crate::strategies::{InputMode, StrategyKind};

/// Rounds to 15 significant digits.
pub fn round_sig15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().expect("formatted float parses")
}

/// One optimized success probability on a `P_succ` vs shots curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub family: ChannelFamily,
    pub eta0: f64,
    pub eta1: f64,
    /// Number of shots.
    pub n: usize,
    pub strategy: StrategyKind,
    pub input_mode: InputMode,
    pub p_succ: f64,
    /// Optimal inputs, schedule levels flattened.
    pub r: Vec<f64>,
    pub evaluations: usize,
    pub wall_time_s: Option<f64>,
}

impl ResultRow {
    pub fn rounded(mut self) -> Self {
        self.eta0 = round_sig15(self.eta0);
        self.eta1 = round_sig15(self.eta1);
        self.p_succ = round_sig15(self.p_succ);
        self.r.iter_mut().for_each(|v| *v = round_sig15(*v));
        self.wall_time_s = self.wall_time_s.map(round_sig15);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.5..=1.0).contains(&self.p_succ) {
            return Err(Error::Config(format!(
                "row {} n={} {}: p_succ {} outside [0.5, 1]",
                self.family, self.n, self.strategy, self.p_succ
            )));
        }
        Ok(())
    }
}

/// One cell of a Bayesian − Markovian difference map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffRow {
    pub family: ChannelFamily,
    pub eta0: f64,
    pub eta1: f64,
    pub p_bayes: f64,
    pub p_markov: f64,
    pub diff: f64,
}

impl DiffRow {
    pub fn rounded(mut self) -> Self {
        self.eta0 = round_sig15(self.eta0);
        self.eta1 = round_sig15(self.eta1);
        self.p_bayes = round_sig15(self.p_bayes);
        self.p_markov = round_sig15(self.p_markov);
        self.diff = round_sig15(self.diff);
        self
    }
}

/// A table that knows its CSV layout.
pub trait CsvRow: Sized {
    const HEADER: &'static [&'static str];
    fn to_record(&self) -> Vec<String>;
    fn from_record(record: &csv::StringRecord) -> Result<Self>;
}

fn field(record: &csv::StringRecord, i: usize) -> Result<&str> {
    record
        .get(i)
        .ok_or_else(|| Error::Config(format!("CSV record is missing column {i}")))
}

fn parse<T: std::str::FromStr>(record: &csv::StringRecord, i: usize) -> Result<T> {
    let raw = field(record, i)?;
    raw.parse()
        .map_err(|_| Error::Config(format!("cannot parse CSV column {i} value `{raw}`")))
}

impl CsvRow for ResultRow {
    const HEADER: &'static [&'static str] = &[
        "family",
        "eta0",
        "eta1",
        "n",
        "strategy",
        "input_mode",
        "p_succ",
        "r",
        "evaluations",
        "wall_time_s",
    ];

    fn to_record(&self) -> Vec<String> {
        vec![
            self.family.to_string(),
            self.eta0.to_string(),
            self.eta1.to_string(),
            self.n.to_string(),
            self.strategy.to_string(),
            self.input_mode.to_string(),
            self.p_succ.to_string(),
            self.r
                .iter()
                .map(f64::to_string)
                .collect::<Vec<_>>()
                .join(";"),
            self.evaluations.to_string(),
            self.wall_time_s.map(|t| t.to_string()).unwrap_or_default(),
        ]
    }

    fn from_record(rec: &csv::StringRecord) -> Result<Self> {
        let r_field = field(rec, 7)?;
        let r = if r_field.is_empty() {
            Vec::new()
        } else {
            r_field
                .split(';')
                .map(|v| {
                    v.parse()
                        .map_err(|_| Error::Config(format!("bad r value `{v}`")))
                })
                .collect::<Result<_>>()?
        };
        let wall = field(rec, 9)?;
        Ok(Self {
            family: parse(rec, 0)?,
            eta0: parse(rec, 1)?,
            eta1: parse(rec, 2)?,
            n: parse(rec, 3)?,
            strategy: parse(rec, 4)?,
            input_mode: parse(rec, 5)?,
            p_succ: parse(rec, 6)?,
            r,
            evaluations: parse(rec, 8)?,
            wall_time_s: if wall.is_empty() {
                None
            } else {
                Some(parse(rec, 9)?)
            },
        })
    }
}

impl CsvRow for DiffRow {
    const HEADER: &'static [&'static str] =
        &["family", "eta0", "eta1", "p_bayes", "p_markov", "diff"];

    fn to_record(&self) -> Vec<String> {
        vec![
            self.family.to_string(),
            self.eta0.to_string(),
            self.eta1.to_string(),
            self.p_bayes.to_string(),
            self.p_markov.to_string(),
            self.diff.to_string(),
        ]
    }

    fn from_record(rec: &csv::StringRecord) -> Result<Self> {
        Ok(Self {
            family: parse(rec, 0)?,
            eta0: parse(rec, 1)?,
            eta1: parse(rec, 2)?,
            p_bayes: parse(rec, 3)?,
            p_markov: parse(rec, 4)?,
            diff: parse(rec, 5)?,
        })
    }
}

/// Writes `# ` comment lines, the header and all rows.
pub fn write_csv<R: CsvRow, W: Write>(mut out: W, comments: &[String], rows: &[R]) -> Result<()> {
    for line in comments {
        writeln!(out, "# {line}")?;
    }
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(R::HEADER)?;
    for row in rows {
        writer.write_record(row.to_record())?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_csv<R: CsvRow, I: Read>(input: I) -> Result<Vec<R>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .has_headers(true)
        .from_reader(input);
    let header = reader.headers()?.clone();
    if header.iter().collect::<Vec<_>>() != R::HEADER {
        return Err(Error::Config(format!("unexpected CSV header: {header:?}")));
    }
    reader.records().map(|rec| R::from_record(&rec?)).collect()
}

/// JSON document: `{"version": …, "config": …, "rows": […]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JsonTable<R> {
    pub version: String,
    pub config: serde_json::Value,
    pub rows: Vec<R>,
}

pub fn write_json<R: Serialize + Clone, W: Write>(
    mut out: W,
    config: serde_json::Value,
    rows: &[R],
) -> Result<()> {
    let table = JsonTable {
        version: crate::VERSION.to_string(),
        config,
        rows: rows.to_vec(),
    };
    serde_json::to_writer_pretty(&mut out, &table)?;
    writeln!(out)?;
    Ok(())
}

pub fn read_json<R: for<'de> Deserialize<'de>, I: Read>(input: I) -> Result<Vec<R>> {
    let table: JsonTable<R> = serde_json::from_reader(input)?;
    Ok(table.rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn row(p: f64, r: Vec<f64>) -> ResultRow {
        ResultRow {
            family: ChannelFamily::AmplitudeDamping,
            eta0: 1.1780972450961724,
            eta1: 0.6283185307179586,
            n: r.len(),
            strategy: StrategyKind::Bayesian,
            input_mode: InputMode::Flat,
            p_succ: p,
            r,
            evaluations: 1234,
            wall_time_s: None,
        }
        .rounded()
    }

    #[test]
    fn sig15_rounding() {
        assert_eq!(round_sig15(0.5875), 0.5875);
        assert_eq!(round_sig15(1.0000000000000002), 1.0);
        assert_eq!(round_sig15(0.49999999999999994), 0.5);
        assert_eq!(round_sig15(0.1234567890123456789), 0.123456789012346);
    }

    #[test]
    fn csv_has_comments_and_header() {
        let mut buf = Vec::new();
        write_csv(
            &mut buf,
            &["qcd 0.1.0".into()],
            &[row(0.7, vec![1.0, 0.25])],
        )
        .unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# qcd 0.1.0\nfamily,eta0,"));
        assert!(text.contains("1;0.25"));
        let back: Vec<ResultRow> = read_csv(&buf[..]).unwrap();
        assert_eq!(back, vec![row(0.7, vec![1.0, 0.25])]);
    }

    #[test]
    fn read_back_rejects_wrong_header() {
        let bad = "a,b,c\n1,2,3\n";
        assert!(read_csv::<DiffRow, _>(bad.as_bytes()).is_err());
    }

    #[test]
    fn row_invariant() {
        assert!(row(0.75, vec![0.0]).validate().is_ok());
        assert!(row(0.45, vec![0.0]).validate().is_err());
    }

    proptest! {
        #[test]
        fn csv_json_round_trip(p in 0.5..=1.0f64, r in proptest::collection::vec(0.0..=1.0f64, 1..6),
                               t in proptest::option::of(0.0..100.0f64)) {
            let mut original = row(p, r);
            original.wall_time_s = t.map(round_sig15);
            let mut csv_buf = Vec::new();
            write_csv(&mut csv_buf, &[], std::slice::from_ref(&original)).unwrap();
            let from_csv: Vec<ResultRow> = read_csv(&csv_buf[..]).unwrap();
            let mut json_buf = Vec::new();
            write_json(&mut json_buf, serde_json::Value::Null, &from_csv).unwrap();
            let from_json: Vec<ResultRow> = read_json(&json_buf[..]).unwrap();
            prop_assert_eq!(&from_json, &vec![original]);
            prop_assert!(from_json[0].validate().is_ok());
        }
    }
}
