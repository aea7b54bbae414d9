//! The shipped reference table of resultant percentages and expectation
//! values, and the machinery that compares engine output against it.
//!
//! Values for shapes through 8 crossings and for the composite rows are
//! exact dyadic decimals and are compared exactly; the 9-crossing rows are
//! printed rounded, so those compare within 0.00005.

use freeknot_core::classify::ReferenceTable;
use freeknot_core::diagram::FreeDiagram;
use freeknot_core::enumerate::{distribution, expectation, EnumerateError, ResultantDistribution};
use num::{BigInt, BigRational, Signed, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AppendixError {
    #[error("appendix line {0}: {1}")]
    Parse(usize, String),
    #[error("no shape for appendix knot {0}")]
    MissingShape(String),
    #[error(transparent)]
    Enumerate(#[from] EnumerateError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AppendixRow {
    pub name: String,
    pub unknot_pct: BigRational,
    pub trefoil_pct: BigRational,
    pub fig8_pct: BigRational,
    pub expectation: BigRational,
}

impl AppendixRow {
    /// 9-crossing prime rows are rounded in the source table.
    pub fn is_rounded(&self) -> bool {
        self.name.starts_with("9_") && !self.name.contains('#')
    }
}

/// Parse a decimal literal like `56.25`, `0.`, or `100` into an exact
/// rational.
pub fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (sign, s) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, s),
    };
    let (int_part, frac_part) = match s.split_once('.') {
        Some((i, f)) => (i, f),
        None => (s, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    let den = BigInt::from(10u32).pow(frac_part.len() as u32);
    Some(BigRational::new(BigInt::from(sign) * num, den))
}

/// A documented correction to one cell of the shipped table.
#[derive(Debug, Clone)]
pub struct Erratum {
    pub knot: String,
    pub column: String,
    pub printed: BigRational,
    pub corrected: BigRational,
    pub note: String,
}

pub fn parse_errata_csv(text: &str) -> Result<Vec<Erratum>, AppendixError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("knot,") {
            continue;
        }
        let fields: Vec<&str> = line.splitn(5, ',').collect();
        if fields.len() != 5 {
            return Err(AppendixError::Parse(i + 1, "expected 5 fields".into()));
        }
        let dec = |s: &str| {
            parse_decimal(s).ok_or_else(|| AppendixError::Parse(i + 1, format!("bad decimal {s:?}")))
        };
        out.push(Erratum {
            knot: fields[0].to_string(),
            column: fields[1].to_string(),
            printed: dec(fields[2])?,
            corrected: dec(fields[3])?,
            note: fields[4].to_string(),
        });
    }
    Ok(out)
}

/// Replace the defective cells, checking that each erratum's `printed` value
/// still matches what the table says (guarding against stale errata).
pub fn apply_errata(rows: &mut [AppendixRow], errata: &[Erratum]) -> Result<(), AppendixError> {
    for e in errata {
        let row = rows
            .iter_mut()
            .find(|r| r.name == e.knot)
            .ok_or_else(|| AppendixError::MissingShape(e.knot.clone()))?;
        let cell = match e.column.as_str() {
            "unknot_pct" => &mut row.unknot_pct,
            "trefoil_pct" => &mut row.trefoil_pct,
            "fig8_pct" => &mut row.fig8_pct,
            "expectation" => &mut row.expectation,
            other => return Err(AppendixError::Parse(0, format!("unknown column {other:?}"))),
        };
        if *cell != e.printed {
            return Err(AppendixError::Parse(
                0,
                format!("erratum for {} {}: table says {}, erratum expects {}", e.knot, e.column, cell, e.printed),
            ));
        }
        *cell = e.corrected.clone();
    }
    Ok(())
}

pub fn parse_appendix_csv(text: &str) -> Result<Vec<AppendixRow>, AppendixError> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("knot,") {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(AppendixError::Parse(i + 1, format!("expected 5 fields, got {}", fields.len())));
        }
        let dec = |s: &str| {
            parse_decimal(s).ok_or_else(|| AppendixError::Parse(i + 1, format!("bad decimal {s:?}")))
        };
        rows.push(AppendixRow {
            name: fields[0].to_string(),
            unknot_pct: dec(fields[1])?,
            trefoil_pct: dec(fields[2])?,
            fig8_pct: dec(fields[3])?,
            expectation: dec(fields[4])?,
        });
    }
    Ok(rows)
}

/// One compared column of one appendix row.
#[derive(Debug, Clone)]
pub struct ColumnDiff {
    pub column: &'static str,
    pub expected: BigRational,
    pub got: BigRational,
}

#[derive(Debug, Clone)]
pub struct RowReport {
    pub name: String,
    pub rounded: bool,
    pub mismatches: Vec<ColumnDiff>,
}

impl RowReport {
    pub fn pass(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Exact percentage of one class in a distribution.
fn pct(dist: &ResultantDistribution, class: &str) -> BigRational {
    dist.probability(class) * BigRational::from(BigInt::from(100))
}

/// Rounded rows match within 0.00005 (inclusive); exact rows must be equal.
fn column_ok(expected: &BigRational, got: &BigRational, rounded: bool) -> bool {
    if rounded {
        let tol = BigRational::new(BigInt::from(1), BigInt::from(20_000));
        (expected - got).abs() <= tol
    } else {
        expected == got
    }
}

/// Compare one appendix row against an enumerated distribution.
pub fn compare_row(
    row: &AppendixRow,
    dist: &ResultantDistribution,
    table: &ReferenceTable,
) -> Result<RowReport, AppendixError> {
    let e = expectation(dist, table.crossing_numbers())?;
    let rounded = row.is_rounded();
    let got = [
        ("unknot_pct", pct(dist, "0_1"), &row.unknot_pct),
        ("trefoil_pct", pct(dist, "3_1"), &row.trefoil_pct),
        ("fig8_pct", pct(dist, "4_1"), &row.fig8_pct),
        ("expectation", e, &row.expectation),
    ];
    let mut mismatches = Vec::new();
    for (column, got, expected) in got {
        if !column_ok(expected, &got, rounded) {
            mismatches.push(ColumnDiff { column, expected: expected.clone(), got });
        }
    }
    Ok(RowReport { name: row.name.clone(), rounded, mismatches })
}

/// Resolve the shape of an appendix knot name: primes come from the corpus,
/// composites are connected sums of their components spliced at the
/// lowest-numbered arcs.
pub fn shape_for_name(
    name: &str,
    shapes: &BTreeMap<String, FreeDiagram>,
) -> Result<FreeDiagram, AppendixError> {
    if !name.contains('#') {
        return shapes.get(name).cloned().ok_or_else(|| AppendixError::MissingShape(name.into()));
    }
    let mut acc: Option<FreeDiagram> = None;
    for part in name.split('#') {
        let d = shapes.get(part).cloned().ok_or_else(|| AppendixError::MissingShape(part.into()))?;
        acc = Some(match acc {
            None => d,
            Some(prev) => prev
                .connected_sum(&d, 1, 1)
                .expect("corpus shapes always have arc 1"),
        });
    }
    Ok(acc.unwrap())
}

/// Enumerate every appendix row and compare all four columns.
pub fn reproduce_appendix(
    rows: &[AppendixRow],
    shapes: &BTreeMap<String, FreeDiagram>,
    table: &ReferenceTable,
) -> Result<Vec<RowReport>, AppendixError> {
    let mut reports = Vec::new();
    for row in rows {
        let shape = shape_for_name(&row.name, shapes)?;
        let dist = distribution(&shape, table)?;
        reports.push(compare_row(row, &dist, table)?);
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_parsing() {
        let r = parse_decimal("56.25").unwrap();
        assert_eq!(r, BigRational::new(BigInt::from(5625), BigInt::from(100)));
        assert_eq!(parse_decimal("0.").unwrap(), BigRational::zero());
        assert_eq!(parse_decimal("2.").unwrap(), BigRational::from(BigInt::from(2)));
        assert_eq!(parse_decimal("100").unwrap(), BigRational::from(BigInt::from(100)));
        assert!(parse_decimal("x").is_none());
    }

    #[test]
    fn tolerance_boundary_is_inclusive() {
        // 49.21875 printed as 49.2188 differs by exactly 1/20000
        let exact = parse_decimal("49.21875").unwrap();
        let printed = parse_decimal("49.2188").unwrap();
        assert!(column_ok(&printed, &exact, true));
        assert!(!column_ok(&printed, &exact, false));
    }

    #[test]
    fn shipped_appendix_parses() {
        let text = std::fs::read_to_string(crate::data_path("appendix.csv")).unwrap();
        let rows = parse_appendix_csv(&text).unwrap();
        assert_eq!(rows.len(), 96); // unknot + 84 primes + 11 composites
        assert_eq!(rows[0].name, "0_1");
        assert!(rows.iter().any(|r| r.name == "3_1#3_1#3_1"));
    }
}
