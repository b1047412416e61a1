//! Weight distributions and their CSV/JSON loaders.

use std::collections::HashSet;
use std::io::Read;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{parse_weight, Rational};

/// One party of a distribution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Party {
    pub id: String,
    pub weight: Rational,
}

/// Ordered list of parties with non-negative weights and positive total.
///
/// Input order is the canonical party index; every deterministic tie-break in
/// the toolkit refers to it. Alongside the exact weights the distribution
/// keeps a primitive integer vector proportional to them (`units`), which is
/// identical for any two distributions that differ by a uniform positive
/// rescaling.
#[derive(Debug, Clone)]
pub struct WeightDistribution {
    parties: Vec<Party>,
    total: Rational,
    units: Vec<BigUint>,
    unit_total: BigUint,
}

impl PartialEq for WeightDistribution {
    fn eq(&self, other: &Self) -> bool {
        self.parties == other.parties
    }
}

impl Eq for WeightDistribution {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Csv,
    Json,
}

impl InputFormat {
    /// `.json` selects JSON, anything else CSV.
    pub fn from_path(path: &std::path::Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => InputFormat::Json,
            _ => InputFormat::Csv,
        }
    }
}

impl WeightDistribution {
    /// Builds a distribution from `(id, weight)` pairs in canonical order.
    pub fn new<I, S>(parties: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Rational)>,
        S: Into<String>,
    {
        Self::from_rows(
            parties
                .into_iter()
                .enumerate()
                .map(|(i, (id, w))| (id.into(), w, i + 1)),
        )
    }

    /// Parties get ids `p1..pn`.
    pub fn from_weights<I>(weights: I) -> Result<Self>
    where
        I: IntoIterator<Item = Rational>,
    {
        Self::new(
            weights
                .into_iter()
                .enumerate()
                .map(|(i, w)| (format!("p{}", i + 1), w)),
        )
    }

    /// Convenience for tests and examples.
    pub fn from_integers<I>(weights: I) -> Result<Self>
    where
        I: IntoIterator<Item = u64>,
    {
        Self::from_weights(weights.into_iter().map(Rational::from))
    }

    fn from_rows<I>(rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = (String, Rational, usize)>,
    {
        let mut seen = HashSet::new();
        let mut parties = Vec::new();
        for (id, weight, line) in rows {
            if weight.is_negative() {
                return Err(Error::NegativeWeight {
                    id,
                    weight: weight.to_string(),
                    line,
                });
            }
            if !seen.insert(id.clone()) {
                return Err(Error::DuplicateId { id, line });
            }
            parties.push(Party { id, weight });
        }
        if parties.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        let total: Rational = parties.iter().map(|p| &p.weight).sum();
        if total.is_zero() {
            return Err(Error::ZeroTotalWeight);
        }
        let (units, unit_total) = primitive_units(&parties);
        Ok(WeightDistribution {
            parties,
            total,
            units,
            unit_total,
        })
    }

    pub fn len(&self) -> usize {
        self.parties.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.parties.is_empty()
    }

    pub fn parties(&self) -> &[Party] {
        &self.parties
    }

    pub fn weight(&self, index: usize) -> &Rational {
        &self.parties[index].weight
    }

    pub fn weights(&self) -> impl Iterator<Item = &Rational> {
        self.parties.iter().map(|p| &p.weight)
    }

    pub fn id(&self, index: usize) -> &str {
        &self.parties[index].id
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.parties.iter().map(|p| p.id.as_str())
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.parties.iter().position(|p| p.id == id)
    }

    /// Total weight `W`.
    pub fn total(&self) -> &Rational {
        &self.total
    }

    /// Primitive integer weights proportional to the exact weights.
    pub fn units(&self) -> &[BigUint] {
        &self.units
    }

    /// Sum of [`units`](Self::units).
    pub fn unit_total(&self) -> &BigUint {
        &self.unit_total
    }

    /// Multiplies every weight by `factor` (must be positive).
    pub fn scaled(&self, factor: &Rational) -> Result<Self> {
        if !factor.is_positive() {
            return Err(Error::Config(format!("scale factor {factor} must be positive")));
        }
        Self::new(
            self.parties
                .iter()
                .map(|p| (p.id.clone(), &p.weight * factor)),
        )
    }

    /// CSV with a `id,weight` header; weights printed exactly (`p/q` or integer).
    pub fn to_csv(&self) -> String {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer.write_record(["id", "weight"]).expect("in-memory write");
        for p in &self.parties {
            writer
                .write_record([p.id.as_str(), p.weight.to_string().as_str()])
                .expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 output")
    }

    /// JSON array of `{"id": ..., "weight": ...}` with string fields.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(&self.parties).expect("serializable");
        out.push('\n');
        out
    }
}

fn primitive_units(parties: &[Party]) -> (Vec<BigUint>, BigUint) {
    let lcm = parties.iter().fold(BigUint::one(), |acc, p| {
        acc.lcm(p.weight.denom().magnitude())
    });
    let mut units: Vec<BigUint> = parties
        .iter()
        .map(|p| p.weight.numer().magnitude() * (&lcm / p.weight.denom().magnitude()))
        .collect();
    let gcd = units
        .iter()
        .fold(BigUint::zero(), |acc, x| acc.gcd(x));
    if !gcd.is_one() {
        for x in &mut units {
            *x /= &gcd;
        }
    }
    let total = units.iter().sum();
    (units, total)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonEntry {
    id: String,
    weight: String,
}

/// Reads a distribution in the given format.
///
/// CSV rows are `id,weight`; a first row equal to `id,weight` (any case) is
/// treated as a header, blank lines and lines starting with `#` are skipped.
/// JSON is an array of objects with string fields `id` and `weight`; error
/// positions for JSON refer to the 1-based array entry.
pub fn load_distribution<R: Read>(reader: R, format: InputFormat) -> Result<WeightDistribution> {
    match format {
        InputFormat::Csv => load_csv(reader),
        InputFormat::Json => load_json(reader),
    }
}

/// Reads CSV records with their 1-based line numbers in the original text
/// (blank and `#` comment lines count toward the numbering).
pub(crate) fn read_csv_records<R: Read>(mut reader: R) -> Result<Vec<(csv::StringRecord, usize)>> {
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes).map_err(|e| Error::Malformed {
        line: 0,
        message: e.to_string(),
    })?;
    // positions point at the end of the previous record; skip blank and comment lines
    let line_at = |byte: u64| {
        let mut at = byte as usize;
        while at < bytes.len() {
            match bytes[at] {
                b'\n' | b'\r' => at += 1,
                b'#' => at += bytes[at..].iter().position(|&b| b == b'\n').unwrap_or(bytes.len() - at),
                _ => break,
            }
        }
        1 + bytes[..at].iter().filter(|&&b| b == b'\n').count()
    };
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(bytes.as_slice());
    let mut records = Vec::new();
    for record in csv.records() {
        let record = record.map_err(|e| Error::Malformed {
            line: e.position().map(|p| line_at(p.byte())).unwrap_or(0),
            message: e.to_string(),
        })?;
        let line = record.position().map(|p| line_at(p.byte())).unwrap_or(0);
        records.push((record, line));
    }
    Ok(records)
}

fn load_csv<R: Read>(reader: R) -> Result<WeightDistribution> {
    let mut rows = Vec::new();
    for (n, (record, line)) in read_csv_records(reader)?.into_iter().enumerate() {
        if record.len() != 2 {
            return Err(Error::Malformed {
                line,
                message: format!("expected 2 fields `id,weight`, found {}", record.len()),
            });
        }
        if n == 0
            && record[0].eq_ignore_ascii_case("id")
            && record[1].eq_ignore_ascii_case("weight")
        {
            continue;
        }
        let id = record[0].to_string();
        if id.is_empty() {
            return Err(Error::Malformed {
                line,
                message: "empty party id".into(),
            });
        }
        let weight = parse_row_weight(&id, &record[1], line)?;
        rows.push((id, weight, line));
    }
    WeightDistribution::from_rows(rows)
}

fn load_json<R: Read>(reader: R) -> Result<WeightDistribution> {
    let entries: Vec<JsonEntry> = serde_json::from_reader(reader).map_err(|e| Error::Malformed {
        line: e.line(),
        message: e.to_string(),
    })?;
    let mut rows = Vec::with_capacity(entries.len());
    for (i, entry) in entries.into_iter().enumerate() {
        let weight = parse_row_weight(&entry.id, &entry.weight, i + 1)?;
        rows.push((entry.id, weight, i + 1));
    }
    WeightDistribution::from_rows(rows)
}

fn parse_row_weight(id: &str, text: &str, line: usize) -> Result<Rational> {
    match parse_weight(text) {
        Ok(w) => Ok(w),
        Err(_) if Rational::parse(text).map(|w| w.is_negative()).unwrap_or(false) => {
            Err(Error::NegativeWeight {
                id: id.to_string(),
                weight: text.to_string(),
                line,
            })
        }
        Err(e) => Err(Error::Malformed {
            line,
            message: e.to_string(),
        }),
    }
}
