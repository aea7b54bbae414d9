//! Formula-versus-enumeration checks: every closed-form count is compared
//! with an exact exhaustive tally of the corresponding generated shape.
//! Classes are keyed by engine-derived Jones polynomials of the family
//! closures, so no identification table is needed here.

use freeknot_core::diagram::FreeDiagram;
use freeknot_core::enumerate::jones_tally;
use freeknot_core::formulas::{
    self, binom, foil_count, kn_unknot_count, recursive_max_step, recursive_prob,
    two_n_family_count, two_n_unknot_count, twoonen_counts, RecursiveSumParams,
};
use freeknot_core::polynomial::LaurentPoly;
use freeknot_core::statesum::{build_state_table, jones, orientation};
use freeknot_core::tangle::{make_21n, make_2n, make_foil, make_kn};
use num::{BigInt, BigRational, One, Zero};
use std::collections::BTreeMap;

/// One verified statement: a formula value and, when the shape was small
/// enough to enumerate, the matching exhaustive count.
#[derive(Debug, Clone)]
pub struct Check {
    pub theorem: &'static str,
    pub parameter: String,
    pub formula: String,
    pub enumerated: Option<String>,
    pub pass: bool,
}

impl Check {
    fn enumerated(theorem: &'static str, parameter: String, formula: BigInt, got: u64) -> Self {
        let pass = formula == BigInt::from(got);
        Check {
            theorem,
            parameter,
            formula: formula.to_string(),
            enumerated: Some(got.to_string()),
            pass,
        }
    }

    fn formula_only(theorem: &'static str, parameter: String, formula: String) -> Self {
        Check { theorem, parameter, formula, enumerated: None, pass: true }
    }
}

/// Jones key of the alternating assignment of a shape: the knot the family
/// diagram itself represents.
pub fn family_key(d: &FreeDiagram) -> LaurentPoly {
    let t = build_state_table(d);
    let o = orientation(d);
    jones(&t, &o, &d.alternating_assignment()).unwrap().canonical_key()
}

/// Keys for the nested families, computed once and memoized by the caller.
pub struct FamilyKeys {
    foil: BTreeMap<i64, LaurentPoly>,
    two_n: BTreeMap<i64, LaurentPoly>,
    two_one_n: BTreeMap<i64, LaurentPoly>,
}

impl FamilyKeys {
    pub fn new() -> Self {
        Self { foil: BTreeMap::new(), two_n: BTreeMap::new(), two_one_n: BTreeMap::new() }
    }

    pub fn foil(&mut self, k: i64) -> LaurentPoly {
        self.foil
            .entry(k)
            .or_insert_with(|| {
                if k == 1 {
                    LaurentPoly::one()
                } else {
                    family_key(&make_foil(k).unwrap())
                }
            })
            .clone()
    }

    /// The 2 k knot: unknot for k = 0, trefoil for k = 1, else the closure.
    pub fn two_n(&mut self, k: i64) -> LaurentPoly {
        self.two_n
            .entry(k)
            .or_insert_with(|| match k {
                0 => LaurentPoly::one(),
                1 => family_key(&make_foil(3).unwrap()),
                _ => family_key(&make_2n(k).unwrap()),
            })
            .clone()
    }

    /// The 2 1 k knot: the figure eight for k = 1, else the closure.
    pub fn two_one_n(&mut self, k: i64) -> LaurentPoly {
        self.two_one_n
            .entry(k)
            .or_insert_with(|| {
                if k == 1 {
                    family_key(&make_2n(2).unwrap())
                } else {
                    family_key(&make_21n(k).unwrap())
                }
            })
            .clone()
    }
}

impl Default for FamilyKeys {
    fn default() -> Self {
        Self::new()
    }
}

fn count(tally: &BTreeMap<LaurentPoly, u64>, key: &LaurentPoly) -> u64 {
    tally.get(key).copied().unwrap_or(0)
}

/// Foil theorem: the free n-foil yields `2 C(n, (n-k)/2)` k-foils for every
/// odd k, and the counts exhaust `2^n`.
pub fn verify_foils(ns: &[i64], keys: &mut FamilyKeys) -> Vec<Check> {
    let mut out = Vec::new();
    for &n in ns {
        let tally = jones_tally(&make_foil(n).unwrap());
        let mut covered = 0u64;
        let mut k = 1;
        while k <= n {
            let expected = foil_count(n, k).unwrap();
            let got = count(&tally, &keys.foil(k));
            covered += got;
            out.push(Check::enumerated("foil k-count", format!("n={n} k={k}"), expected, got));
            k += 2;
        }
        out.push(Check::enumerated(
            "foil totals",
            format!("n={n}"),
            BigInt::one() << (n as usize),
            covered,
        ));
    }
    out
}

/// The 2 n theorems: the parity-split unknot formula and the paired
/// `2 k` / `2 (k-1)` class counts.
pub fn verify_two_n(ns: &[i64], keys: &mut FamilyKeys) -> Vec<Check> {
    let mut out = Vec::new();
    for &n in ns {
        let tally = jones_tally(&make_2n(n).unwrap());
        let unknots = count(&tally, &LaurentPoly::one());
        out.push(Check::enumerated(
            "2 n unknots",
            format!("n={n}"),
            two_n_unknot_count(n).unwrap(),
            unknots,
        ));
        let mut covered = unknots;
        for j in 1..=n {
            // class 2 j arises as the 2 k resultant when j = n mod 2, and
            // as the 2 (k-1) partner of k = j + 1 otherwise
            let expected = if j % 2 == n % 2 {
                two_n_family_count(n, j).unwrap().0
            } else {
                two_n_family_count(n, j + 1).unwrap().1
            };
            let got = count(&tally, &keys.two_n(j));
            covered += got;
            out.push(Check::enumerated("2 n family", format!("n={n} class=2 {j}"), expected, got));
        }
        out.push(Check::enumerated(
            "2 n totals",
            format!("n={n}"),
            BigInt::one() << (n as usize + 2),
            covered,
        ));
    }
    out
}

/// k n theorems: the even/even and odd/even unknot formulas, plus the
/// distribution symmetry between k n and n k.
pub fn verify_kn(pairs: &[(i64, i64)], symmetry_budget: i64) -> Vec<Check> {
    let mut out = Vec::new();
    for &(k, n) in pairs {
        let tally = jones_tally(&make_kn(k, n).unwrap());
        out.push(Check::enumerated(
            "k n unknots",
            format!("k={k} n={n}"),
            kn_unknot_count(k, n).unwrap(),
            count(&tally, &LaurentPoly::one()),
        ));
    }
    for k in 1..=symmetry_budget {
        for n in k..=symmetry_budget {
            if k + n > symmetry_budget || (k % 2 == 1 && n % 2 == 1) {
                continue;
            }
            let a = jones_tally(&make_kn(k, n).unwrap());
            let b = jones_tally(&make_kn(n, k).unwrap());
            out.push(Check {
                theorem: "k n symmetry",
                parameter: format!("k={k} n={n}"),
                formula: "distribution(k n) = distribution(n k)".into(),
                enumerated: Some(if a == b { "equal".into() } else { "different".into() }),
                pass: a == b,
            });
        }
    }
    out
}

/// 2 1 n theorems: unknots, k-foils (k up to n + 2), figure eights, and
/// 2 1 k classes, plus the accounted-for total.
pub fn verify_twoonen(ns: &[i64], keys: &mut FamilyKeys) -> Vec<Check> {
    let mut out = Vec::new();
    for &n in ns {
        let tally = jones_tally(&make_21n(n).unwrap());
        let counts = twoonen_counts(n).unwrap();
        out.push(Check::enumerated(
            "2 1 n unknots",
            format!("n={n}"),
            counts.unknots.clone(),
            count(&tally, &LaurentPoly::one()),
        ));
        for (&k, expected) in &counts.kfoils {
            out.push(Check::enumerated(
                "2 1 n k-foils",
                format!("n={n} k={k}"),
                expected.clone(),
                count(&tally, &keys.foil(k)),
            ));
        }
        out.push(Check::enumerated(
            "2 1 n figure eights",
            format!("n={n}"),
            counts.fig8.clone(),
            count(&tally, &keys.two_one_n(1)),
        ));
        for (&k, expected) in &counts.two_one_k {
            out.push(Check::enumerated(
                "2 1 n family",
                format!("n={n} class=2 1 {k}"),
                expected.clone(),
                count(&tally, &keys.two_one_n(k)),
            ));
        }
        // the formulas account for exactly this many of the 2^(n+3)
        let mut accounted = 0u64;
        accounted += count(&tally, &LaurentPoly::one());
        for &k in counts.kfoils.keys() {
            accounted += count(&tally, &keys.foil(k));
        }
        accounted += count(&tally, &keys.two_one_n(1));
        for &k in counts.two_one_k.keys() {
            accounted += count(&tally, &keys.two_one_n(k));
        }
        out.push(Check::enumerated(
            "2 1 n classified total",
            format!("n={n}"),
            counts.classified_total(),
            accounted,
        ));
    }
    out
}

/// Recursive-sum arithmetic: closed form against the recurrence, and the
/// maximum-step intervals.
pub fn verify_recursive() -> Vec<Check> {
    let mut out = Vec::new();
    let rat = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
    // closed form N alpha^(N-1) beta against the recurrence
    for (alpha, beta) in [(rat(3, 4), rat(1, 4)), (rat(5, 8), rat(3, 16)), (rat(2, 5), rat(1, 5))] {
        let mut x = BigRational::zero();
        let mut alpha_pow = BigRational::one();
        let mut pass = true;
        for n in 0..=8u32 {
            let closed =
                recursive_prob(&RecursiveSumParams::new(alpha.clone(), beta.clone(), n).unwrap());
            pass &= closed == x;
            // x_{N+1} = alpha^N beta + alpha x_N
            x = &alpha_pow * &beta + &alpha * &x;
            alpha_pow *= &alpha;
        }
        out.push(Check {
            theorem: "recursive closed form",
            parameter: format!("alpha={alpha} beta={beta}"),
            formula: "N alpha^(N-1) beta".into(),
            enumerated: Some("recurrence".into()),
            pass,
        });
    }
    for (alpha, want) in [
        (rat(3, 4), (3u32, 4u32)),
        (rat(2, 5), (1, 1)),
        (rat(3, 5), (2, 2)),
        (rat(7, 10), (3, 3)),
    ] {
        let got = recursive_max_step(&alpha).unwrap();
        out.push(Check {
            theorem: "recursive max step",
            parameter: format!("alpha={alpha}"),
            formula: format!("{want:?}"),
            enumerated: Some(format!("{got:?}")),
            pass: got == want,
        });
    }
    out
}

/// Formula-only evaluations past the enumeration horizon, exercising the
/// exact big-integer arithmetic.
pub fn formula_only_rows(n_max: i64) -> Vec<Check> {
    let mut out = Vec::new();
    let mut n = 13;
    while n <= n_max {
        out.push(Check::formula_only(
            "foil trefoils (formula only)",
            format!("n={n}"),
            foil_count(n, 3).unwrap().to_string(),
        ));
        n += 2;
    }
    if n_max >= 13 {
        out.push(Check::formula_only(
            "binomial row sum",
            format!("n={n_max}"),
            (0..=n_max).map(|k| binom(n_max, k)).sum::<BigInt>().to_string(),
        ));
    }
    let _ = formulas::max_kfoil_probability(3).unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_family_checks_pass() {
        let mut keys = FamilyKeys::new();
        assert!(verify_foils(&[3, 5], &mut keys).iter().all(|c| c.pass));
        assert!(verify_two_n(&[1, 2, 3], &mut keys).iter().all(|c| c.pass));
        assert!(verify_twoonen(&[1, 3], &mut keys).iter().all(|c| c.pass));
        assert!(verify_kn(&[(2, 2), (3, 2)], 6).iter().all(|c| c.pass));
        assert!(verify_recursive().iter().all(|c| c.pass));
    }
}
