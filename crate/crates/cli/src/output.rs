//! Distribution report rendering: JSON and CSV mirrors with exact decimal
//! probability strings.

use freeknot_core::classify::ReferenceTable;
use freeknot_core::enumerate::{decimal_string, expectation, percent_string, ResultantDistribution};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format {other:?}, expected json or csv")),
        }
    }
}

#[derive(Serialize)]
struct JsonReport<'a> {
    shape: &'a str,
    n: usize,
    counts: &'a BTreeMap<String, u64>,
    probabilities: BTreeMap<String, String>,
    expectation: String,
}

/// Render a distribution report. Class probabilities are exact terminating
/// decimals in percent; the expectation is an exact decimal.
pub fn render_distribution(
    shape_label: &str,
    dist: &ResultantDistribution,
    table: &ReferenceTable,
    format: Format,
) -> Result<String, String> {
    let e = expectation(dist, table.crossing_numbers()).map_err(|e| e.to_string())?;
    let expectation = decimal_string(&e);
    let probabilities: BTreeMap<String, String> = dist
        .counts
        .iter()
        .map(|(name, &count)| (name.clone(), percent_string(count, dist.n)))
        .collect();
    match format {
        Format::Json => {
            let report = JsonReport {
                shape: shape_label,
                n: dist.n,
                counts: &dist.counts,
                probabilities,
                expectation,
            };
            serde_json::to_string_pretty(&report).map_err(|e| e.to_string())
        }
        Format::Csv => {
            let mut out = String::from("shape,n,class,count,probability_pct,expectation\n");
            for (name, &count) in &dist.counts {
                out.push_str(&format!(
                    "{shape_label},{},{name},{count},{},{expectation}\n",
                    dist.n,
                    probabilities[name],
                ));
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use freeknot_core::diagram::render_pd_line;
    use freeknot_core::enumerate::distribution;
    use freeknot_core::tangle::make_foil;

    #[test]
    fn json_report_is_deterministic() {
        let d = make_foil(3).unwrap();
        let mut data = String::from("0_1:\n");
        data.push_str(&render_pd_line("3_1", &d, Some(&d.alternating_assignment())));
        let table = ReferenceTable::build(&data, 6).unwrap();
        let dist = distribution(&d, &table).unwrap();
        let a = render_distribution("3_1", &dist, &table, Format::Json).unwrap();
        let b = render_distribution("3_1", &dist, &table, Format::Json).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("\"0_1\": 6"));
        assert!(a.contains("\"75\""));
        assert!(a.contains("\"expectation\": \"0.75\""));

        let csv = render_distribution("3_1", &dist, &table, Format::Csv).unwrap();
        assert!(csv.contains("3_1,3,0_1,6,75,0.75"));
    }
}
