//! Counts of reducible quintic types with many singular points.
//!
//! Each row describes one configuration of components and the closed points
//! formed by its singularities. The data lives in `data/type_tables.v1.jsonl`,
//! one JSON object per line:
//!
//! | field | meaning |
//! |---|---|
//! | `id` | stable identifier, `<section>/<n>` |
//! | `section` | which family of configurations the row belongs to |
//! | `description` | free text for the components |
//! | `lambda` | the singular points other than one rational node, as `[part, multiplicity]` pairs |
//! | `sigma` | stored `σ_5(λ)` |
//! | `delta` | number of isolated singularities of delta invariant one |
//! | `poly_odd`, `poly_even` | curves of this type divided by `|PGL_3(F_q)|`, as `[exponent, numerator, denominator]` triples, for odd and even `q` |
//! | `factored_odd`, `factored_even` | the same polynomials in factored form, for auditing |
//!
//! The embedded file is pinned by SHA-256. [`parse_rows`] skips the checksum
//! so that altered tables can be fed through the same validation.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::combinat::{self, Partition};
use crate::symbolic::{pgl3_order, QPoly};

const TABLE_RESOURCE: &str = include_str!("../data/type_tables.v1.jsonl");
const TABLE_SHA256: &str = "3ccdfb6bcbf6f7f1b34112a0f0dd5079c92dd905a9214468f479de7890fb7f14";

/// Sections whose subtotal differs between odd and even characteristic.
pub const CHAR_DEPENDENT_SECTIONS: [&str; 2] = ["conic-three-lines/two-tangent", "conic-three-lines/one-tangent"];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("embedded table checksum mismatch: expected {expected}, found {actual}")]
    Checksum { expected: String, actual: String },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("row {id}: stored sigma {stored} but sigma_5 recomputes to {computed}")]
    Sigma { id: String, stored: i64, computed: String },
    #[error("row {id}: partition weight {weight} outside 6..=9")]
    Weight { id: String, weight: u64 },
    #[error("row {id}: {delta} delta-one singularities exceed the {points} singular points")]
    Delta { id: String, delta: u32, points: u64 },
    #[error("row {id}: duplicate identifier")]
    DuplicateId { id: String },
    #[error("table total for {char} characteristic is {value}, expected 1")]
    Total { char: Char, value: String },
    #[error("row {id}: count at q = {q} is not a non-negative integer")]
    Integrality { id: String, q: u64 },
    #[error("section {section}: subtotal depends on the characteristic (difference {diff})")]
    SectionCharacteristic { section: String, diff: String },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Char {
    Odd,
    Two,
}

impl Char {
    pub fn of_field_size(q: u64) -> Char {
        if q.is_multiple_of(2) {
            Char::Two
        } else {
            Char::Odd
        }
    }
}

impl fmt::Display for Char {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Char::Odd => "odd",
            Char::Two => "two",
        })
    }
}

impl FromStr for Char {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "odd" => Ok(Char::Odd),
            "two" | "even" | "2" => Ok(Char::Two),
            other => Err(format!("unknown characteristic `{other}` (expected odd or two)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeRow {
    pub id: String,
    pub section: String,
    pub description: String,
    pub lambda: Partition,
    #[serde(rename = "sigma")]
    pub sigma_stored: i64,
    #[serde(rename = "delta")]
    pub delta_count: u32,
    pub poly_odd: QPoly,
    pub poly_even: QPoly,
    #[serde(default)]
    pub factored_odd: String,
    #[serde(default)]
    pub factored_even: String,
}

impl TypeRow {
    pub fn poly(&self, ch: Char) -> &QPoly {
        match ch {
            Char::Odd => &self.poly_odd,
            Char::Two => &self.poly_even,
        }
    }

    /// `σ · #δ · #{C}` for the given column.
    pub fn contribution(&self, ch: Char) -> QPoly {
        let w = BigRational::from_integer(BigInt::from(self.sigma_stored) * BigInt::from(self.delta_count));
        self.poly(ch).scale(&w)
    }
}

/// The embedded rows, after the checksum and per-row checks.
pub fn load_rows() -> Result<Vec<TypeRow>, TableError> {
    let actual = hex::encode(Sha256::digest(TABLE_RESOURCE.as_bytes()));
    if actual != TABLE_SHA256 {
        return Err(TableError::Checksum { expected: TABLE_SHA256.into(), actual });
    }
    parse_rows(TABLE_RESOURCE)
}

/// Rows from an external file, with the same per-row checks but no checksum.
pub fn load_rows_from_path(path: &Path) -> Result<Vec<TypeRow>, TableError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| TableError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_rows(&text)
}

/// Parse JSON lines and check weights, delta counts and identifier uniqueness.
/// Stored sigmas are checked separately by [`validate_sigma`].
pub fn parse_rows(text: &str) -> Result<Vec<TypeRow>, TableError> {
    let mut rows: Vec<TypeRow> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: TypeRow =
            serde_json::from_str(line).map_err(|e| TableError::Parse { line: n + 1, message: e.to_string() })?;
        let weight = row.lambda.weight();
        if !(6..=9).contains(&weight) {
            return Err(TableError::Weight { id: row.id, weight });
        }
        if row.delta_count as u64 > weight + 1 {
            return Err(TableError::Delta { id: row.id, delta: row.delta_count, points: weight + 1 });
        }
        if !seen.insert(row.id.clone()) {
            return Err(TableError::DuplicateId { id: row.id });
        }
        rows.push(row);
    }
    Ok(rows)
}

pub fn validate_sigma(row: &TypeRow) -> Result<(), TableError> {
    let computed = combinat::sigma(&row.lambda, 5);
    if computed != BigInt::from(row.sigma_stored) {
        return Err(TableError::Sigma { id: row.id.clone(), stored: row.sigma_stored, computed: computed.to_string() });
    }
    Ok(())
}

/// `Σ σ · #δ · #{C}` over all rows for one characteristic column.
pub fn table_total(rows: &[TypeRow], ch: Char) -> QPoly {
    rows.iter().map(|r| r.contribution(ch)).sum()
}

/// `poly(q) · |PGL_3(F_q)|` is a non-negative integer for the column matching `q`.
pub fn integrality_check(row: &TypeRow, q: u64) -> bool {
    let value = row.poly(Char::of_field_size(q)).eval_int(q as i64) * pgl3_order().eval_int(q as i64);
    value.is_integer() && !value.is_negative()
}

/// Per-section `Σ σ · #δ · (poly_odd - poly_even)`.
pub fn section_char_differences(rows: &[TypeRow]) -> BTreeMap<String, QPoly> {
    let mut out: BTreeMap<String, QPoly> = BTreeMap::new();
    for row in rows {
        let diff = row.contribution(Char::Odd) - row.contribution(Char::Two);
        let entry = out.entry(row.section.clone()).or_default();
        *entry = entry.clone() + diff;
    }
    out
}

/// Field sizes used for the integrality checks.
pub const INTEGRALITY_FIELDS: [u64; 7] = [2, 3, 4, 5, 7, 8, 9];

/// Run every table check, returning the first failure.
pub fn validate_all(rows: &[TypeRow]) -> Result<(), TableError> {
    for row in rows {
        validate_sigma(row)?;
        for q in INTEGRALITY_FIELDS {
            if !integrality_check(row, q) {
                return Err(TableError::Integrality { id: row.id.clone(), q });
            }
        }
    }
    for ch in [Char::Odd, Char::Two] {
        let total = table_total(rows, ch);
        if total != QPoly::one() {
            return Err(TableError::Total { char: ch, value: total.to_string() });
        }
    }
    for (section, diff) in section_char_differences(rows) {
        let expected_dependent = CHAR_DEPENDENT_SECTIONS.contains(&section.as_str());
        if !expected_dependent && !diff.is_zero() {
            return Err(TableError::SectionCharacteristic { section, diff: diff.to_string() });
        }
    }
    Ok(())
}
