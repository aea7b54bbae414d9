//! Exact resultant distributions over all `2^n` assignments of a shape,
//! the constructive descent unknots, and expectation values.

use crate::classify::{Identified, ReferenceTable};
use crate::diagram::{Assignment, FreeDiagram};
use crate::polynomial::LaurentPoly;
use crate::statesum::{build_state_table, jones_with_powers, loop_value_powers, orientation};
use num::{BigInt, BigRational, ToPrimitive};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EnumerateError {
    #[error("unidentified resultant: {count} assignment(s) with jones {jones}")]
    UnidentifiedResultant { jones: LaurentPoly, count: u64 },
    #[error("no crossing number for class {0}")]
    MissingCrossingNumber(String),
}

/// Exact integer tally of canonical Jones keys over all assignments of a
/// shape. This is the classification-free core of `distribution`.
pub fn jones_tally(d: &FreeDiagram) -> BTreeMap<LaurentPoly, u64> {
    #[cfg(feature = "parallel")]
    {
        jones_tally_par(d)
    }
    #[cfg(not(feature = "parallel"))]
    {
        jones_tally_seq(d)
    }
}

pub fn jones_tally_seq(d: &FreeDiagram) -> BTreeMap<LaurentPoly, u64> {
    let n = d.crossing_count();
    let t = build_state_table(d);
    let o = orientation(d);
    let powers = loop_value_powers(t.max_loops() as usize);
    let mut counts = BTreeMap::new();
    for mask in 0u64..1 << n {
        let a = Assignment::new(mask, n);
        let key = jones_with_powers(&t, &o, &a, &powers).canonical_key();
        *counts.entry(key).or_insert(0) += 1;
    }
    counts
}

/// Assignment ranges are processed independently and the tallies merged
/// associatively, so the result does not depend on the partitioning.
#[cfg(feature = "parallel")]
pub fn jones_tally_par(d: &FreeDiagram) -> BTreeMap<LaurentPoly, u64> {
    use rayon::prelude::*;
    let n = d.crossing_count();
    let t = build_state_table(d);
    let o = orientation(d);
    let powers = loop_value_powers(t.max_loops() as usize);
    (0u64..1 << n)
        .into_par_iter()
        .fold(BTreeMap::new, |mut counts: BTreeMap<LaurentPoly, u64>, mask| {
            let a = Assignment::new(mask, n);
            let key = jones_with_powers(&t, &o, &a, &powers).canonical_key();
            *counts.entry(key).or_insert(0) += 1;
            counts
        })
        .reduce(BTreeMap::new, merge_tallies)
}

#[cfg(feature = "parallel")]
fn merge_tallies(
    mut a: BTreeMap<LaurentPoly, u64>,
    b: BTreeMap<LaurentPoly, u64>,
) -> BTreeMap<LaurentPoly, u64> {
    for (k, v) in b {
        *a.entry(k).or_insert(0) += v;
    }
    a
}

/// Exact counts per identified knot class over all `2^n` assignments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResultantDistribution {
    pub shape_id: String,
    pub n: usize,
    pub counts: BTreeMap<String, u64>,
}

impl ResultantDistribution {
    pub fn total(&self) -> u64 {
        1u64 << self.n
    }

    pub fn count(&self, class: &str) -> u64 {
        self.counts.get(class).copied().unwrap_or(0)
    }

    /// Exact probability of a class as a rational with denominator `2^n`.
    pub fn probability(&self, class: &str) -> BigRational {
        BigRational::new(BigInt::from(self.count(class)), BigInt::from(self.total()))
    }
}

/// Enumerate, classify, and tally every assignment. A Jones value matching
/// no table entry aborts with a report rather than being silently binned.
pub fn distribution(
    d: &FreeDiagram,
    table: &ReferenceTable,
) -> Result<ResultantDistribution, EnumerateError> {
    let tally = jones_tally(d);
    distribution_from_tally(d.canonical_form(), d.crossing_count(), &tally, table)
}

/// Classify a precomputed tally of canonical Jones keys.
pub fn distribution_from_tally(
    shape_id: String,
    n: usize,
    tally: &BTreeMap<LaurentPoly, u64>,
    table: &ReferenceTable,
) -> Result<ResultantDistribution, EnumerateError> {
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for (key, &count) in tally {
        match table.identify(key) {
            Identified::Class(c) => *counts.entry(c.name.clone()).or_insert(0) += count,
            Identified::Unidentified(jones) => {
                return Err(EnumerateError::UnidentifiedResultant { jones, count })
            }
        }
    }
    Ok(ResultantDistribution { shape_id, n, counts })
}

/// The climb/downramp unknot assignments: for each of the `4n` (arc,
/// direction) choices, travel the diagram making the current strand the
/// overstrand at every crossing not yet assigned. Deduplicated; the set has
/// at least `2n` members and every member is an unknot diagram.
pub fn descent_unknot_assignments(d: &FreeDiagram) -> BTreeSet<Assignment> {
    let n = d.crossing_count();
    let mut out = BTreeSet::new();
    if n == 0 {
        return out;
    }
    // end darts of each arc, in arc order
    let mut ends: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for dart in 0..4 * n {
        ends.entry(d.arc_at(dart)).or_default().push(dart);
    }
    for arc_ends in ends.values() {
        debug_assert_eq!(arc_ends.len(), 2);
        for &start in arc_ends {
            let mut mask = 0u64;
            let mut assigned = 0u64;
            let mut dart = start;
            for _ in 0..2 * n {
                let (c, s) = (dart / 4, dart % 4);
                if assigned >> c & 1 == 0 {
                    assigned |= 1 << c;
                    if s == 1 || s == 3 {
                        mask |= 1 << c;
                    }
                }
                // exit the crossing and follow the arc to its far end
                let exit = c * 4 + (s + 2) % 4;
                let pair = &ends[&d.arc_at(exit)];
                dart = if pair[0] == exit { pair[1] } else { pair[0] };
            }
            debug_assert_eq!(assigned.count_ones() as usize, n);
            out.insert(Assignment::new(mask, n));
        }
    }
    out
}

/// Exact expected crossing number: sum of `P(class) * crossing_number`.
pub fn expectation(
    dist: &ResultantDistribution,
    crossing_numbers: &BTreeMap<String, u32>,
) -> Result<BigRational, EnumerateError> {
    let mut acc = BigInt::from(0);
    for (name, &count) in &dist.counts {
        let x = crossing_numbers
            .get(name)
            .ok_or_else(|| EnumerateError::MissingCrossingNumber(name.clone()))?;
        acc += BigInt::from(count) * BigInt::from(*x);
    }
    Ok(BigRational::new(acc, BigInt::from(dist.total())))
}

/// True iff some assignment of the shape is a trefoil diagram.
pub fn trefoil_exists(d: &FreeDiagram, table: &ReferenceTable) -> Result<bool, EnumerateError> {
    Ok(distribution(d, table)?.count("3_1") > 0)
}

/// Render an exact dyadic rational as a terminating decimal string.
pub fn decimal_string(r: &BigRational) -> String {
    let (num, den) = (r.numer().clone(), r.denom().clone());
    // denominators here are powers of two, so the expansion terminates
    let mut k = 0u32;
    let mut d = den.clone();
    let two = BigInt::from(2);
    while (&d % &two) == BigInt::from(0) {
        d /= &two;
        k += 1;
    }
    assert!(d == BigInt::from(1), "denominator {den} is not a power of two");
    let five = BigInt::from(5);
    let scaled = num * five.pow(k); // numerator over 10^k
    let negative = scaled < BigInt::from(0);
    let digits = scaled.magnitude().to_string();
    let k = k as usize;
    let (int_part, frac_part) = if digits.len() > k {
        (digits[..digits.len() - k].to_string(), digits[digits.len() - k..].to_string())
    } else {
        ("0".to_string(), format!("{digits:0>k$}"))
    };
    let frac_part = frac_part.trim_end_matches('0');
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    out.push_str(&int_part);
    if !frac_part.is_empty() {
        out.push('.');
        out.push_str(frac_part);
    }
    out
}

/// Percentage of `count` out of `2^n`, as an exact decimal string.
pub fn percent_string(count: u64, n: usize) -> String {
    let r = BigRational::new(BigInt::from(count) * BigInt::from(100), BigInt::from(1u64 << n));
    decimal_string(&r)
}

/// f64 view of an exact rational, for reporting only.
pub fn approx(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{free_trefoil, render_pd_line};
    use crate::statesum::{build_state_table, jones, orientation};

    fn table() -> ReferenceTable {
        let tre = free_trefoil();
        let fig8 = crate::tangle::make_2n(2).unwrap();
        let k52 = crate::tangle::make_2n(3).unwrap();
        let mut data = String::from("0_1:\n");
        for (name, d) in [("3_1", &tre), ("4_1", &fig8), ("5_2", &k52)] {
            data.push_str(&render_pd_line(name, d, Some(&d.alternating_assignment())));
            data.push('\n');
        }
        ReferenceTable::build(&data, 9).unwrap()
    }

    #[test]
    fn trefoil_distribution() {
        let dist = distribution(&free_trefoil(), &table()).unwrap();
        assert_eq!(dist.count("0_1"), 6);
        assert_eq!(dist.count("3_1"), 2);
        assert_eq!(dist.counts.values().sum::<u64>(), 8);
        assert_eq!(percent_string(dist.count("0_1"), dist.n), "75");
        assert_eq!(percent_string(dist.count("3_1"), dist.n), "25");
    }

    #[test]
    fn figure_eight_distribution() {
        let dist = distribution(&crate::tangle::make_2n(2).unwrap(), &table()).unwrap();
        assert_eq!(dist.count("0_1"), 12);
        assert_eq!(dist.count("3_1"), 2);
        assert_eq!(dist.count("4_1"), 2);
        assert_eq!(dist.total(), 16);
    }

    #[test]
    fn circle_distribution() {
        let dist = distribution(&FreeDiagram::circle(), &table()).unwrap();
        assert_eq!(dist.count("0_1"), 1);
        assert_eq!(dist.total(), 1);
    }

    #[test]
    fn seq_and_par_tallies_agree() {
        let d = crate::tangle::make_2n(3).unwrap();
        let seq = jones_tally_seq(&d);
        assert_eq!(seq.values().sum::<u64>(), 32);
        #[cfg(feature = "parallel")]
        assert_eq!(seq, jones_tally_par(&d));
        assert_eq!(seq, jones_tally(&d));
    }

    #[test]
    fn descent_assignments_are_unknots() {
        let d = free_trefoil();
        let set = descent_unknot_assignments(&d);
        assert_eq!(set.len(), 6);
        let t = build_state_table(&d);
        let o = orientation(&d);
        for a in &set {
            assert!(jones(&t, &o, a).unwrap().is_one());
        }

        let kinked = FreeDiagram::circle().add_kink(1).unwrap();
        let set = descent_unknot_assignments(&kinked);
        assert_eq!(set.len(), 2);
    }

    #[test]
    fn expectation_of_trefoil_shape() {
        let t = table();
        let dist = distribution(&free_trefoil(), &t).unwrap();
        let e = expectation(&dist, t.crossing_numbers()).unwrap();
        assert_eq!(decimal_string(&e), "0.75");
    }

    #[test]
    fn expectation_requires_crossing_numbers() {
        let t = table();
        let dist = distribution(&free_trefoil(), &t).unwrap();
        let err = expectation(&dist, &BTreeMap::new()).unwrap_err();
        assert!(matches!(err, EnumerateError::MissingCrossingNumber(_)));
    }

    #[test]
    fn trefoil_exists_examples() {
        let t = table();
        assert!(trefoil_exists(&free_trefoil(), &t).unwrap());
        assert!(!trefoil_exists(&FreeDiagram::circle(), &t).unwrap());
    }

    #[test]
    fn unidentified_aborts() {
        // a 5_1 resultant is not in this small table
        let d = crate::tangle::make_foil(5).unwrap();
        let err = distribution(&d, &table()).unwrap_err();
        assert!(matches!(err, EnumerateError::UnidentifiedResultant { .. }));
    }

    #[test]
    fn decimal_strings_are_exact() {
        assert_eq!(percent_string(6, 3), "75");
        assert_eq!(percent_string(168, 9), "32.8125");
        assert_eq!(percent_string(1, 9), "0.1953125");
        assert_eq!(percent_string(0, 5), "0");
    }

    #[test]
    fn chiral_counts_are_even() {
        let t = table();
        for d in [free_trefoil(), crate::tangle::make_2n(3).unwrap()] {
            let dist = distribution(&d, &t).unwrap();
            for (name, count) in &dist.counts {
                if name != "0_1" && name != "4_1" {
                    assert_eq!(count % 2, 0, "class {name}");
                }
            }
        }
    }
}
