//! Identification of Jones polynomials as named knots, mirror-collapsed,
//! covering the prime knots through 9 crossings and their connected sums.
//!
//! No Jones polynomial is ever hand-entered: the table is built by running
//! the shipped signed planar diagram codes through the same state-sum
//! pipeline that classification checks, and composite keys are products of
//! prime keys.

use crate::diagram::{parse_pd_line, DiagramError};
use crate::polynomial::LaurentPoly;
use crate::statesum::{build_state_table, jones, orientation};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Parse(#[from] DiagramError),
    #[error("entry {0} has no crossing data")]
    MissingAssignment(String),
    #[error("jones key collision between {0} and {1}")]
    KeyCollision(String, String),
    #[error("invalid diagram for {name}: {source}")]
    InvalidDiagram {
        name: String,
        #[source]
        source: DiagramError,
    },
}

/// A named knot, its crossing number, and its mirror-collapsed Jones key.
/// Composite classes can own several keys (one per chirality pairing), all
/// mapping to the same name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnotClass {
    pub name: String,
    pub crossing_number: u32,
    pub jones_key: LaurentPoly,
}

#[derive(Debug, Clone)]
pub struct ReferenceTable {
    entries: BTreeMap<LaurentPoly, KnotClass>,
    /// crossing number per class name (composites included)
    crossing_numbers: BTreeMap<String, u32>,
    /// prime (and unknot) entries in file order: (name, jones polynomial as
    /// computed, crossing number)
    primes: Vec<(String, LaurentPoly, u32)>,
}

/// Outcome of a lookup; an unidentified polynomial is a value, not an error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Identified<'a> {
    Class(&'a KnotClass),
    Unidentified(LaurentPoly),
}

impl ReferenceTable {
    /// Build from PD data (one knot per line, `name: (a,b,c,d).../over=...`),
    /// adding composite classes up to `max_composite_crossings` total
    /// crossings. Every key collision is a hard error.
    pub fn build(pd_data: &str, max_composite_crossings: u32) -> Result<Self, ClassifyError> {
        let mut table = ReferenceTable {
            entries: BTreeMap::new(),
            crossing_numbers: BTreeMap::new(),
            primes: Vec::new(),
        };
        for (i, raw) in pd_data.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parsed = parse_pd_line(line, i + 1)?;
            let name = parsed.name.expect("pd line always carries a name");
            let d = parsed.diagram;
            d.validate().map_err(|e| ClassifyError::InvalidDiagram { name: name.clone(), source: e })?;
            let v = if d.crossing_count() == 0 {
                LaurentPoly::one()
            } else {
                let a = parsed
                    .assignment
                    .ok_or_else(|| ClassifyError::MissingAssignment(name.clone()))?;
                let t = build_state_table(&d);
                let o = orientation(&d);
                jones(&t, &o, &a).expect("assignment length matches by construction")
            };
            let xnum = d.crossing_count() as u32;
            table.insert(name.clone(), xnum, v.canonical_key())?;
            table.primes.push((name, v, xnum));
        }
        table.add_composites(max_composite_crossings)?;
        Ok(table)
    }

    fn insert(&mut self, name: String, xnum: u32, key: LaurentPoly) -> Result<(), ClassifyError> {
        if let Some(existing) = self.entries.get(&key) {
            if existing.name != name {
                return Err(ClassifyError::KeyCollision(existing.name.clone(), name));
            }
            return Ok(());
        }
        self.crossing_numbers.entry(name.clone()).or_insert(xnum);
        self.entries.insert(key.clone(), KnotClass { name, crossing_number: xnum, jones_key: key });
        Ok(())
    }

    /// Multisets of nontrivial primes with total crossing number within
    /// budget; each chirality pairing of the component polynomials is
    /// registered under the single mirror-collapsed composite name.
    fn add_composites(&mut self, budget: u32) -> Result<(), ClassifyError> {
        let nontrivial: Vec<(String, LaurentPoly, u32)> =
            self.primes.iter().filter(|p| p.2 > 0).cloned().collect();
        let mut stack: Vec<usize> = Vec::new();
        let mut results: Vec<(String, u32, Vec<LaurentPoly>)> = Vec::new();
        collect_multisets(&nontrivial, 0, 0, budget, &mut stack, &mut results);
        for (name, xnum, keys) in results {
            for key in keys {
                self.insert(name.clone(), xnum, key)?;
            }
        }
        Ok(())
    }

    pub fn identify(&self, p: &LaurentPoly) -> Identified<'_> {
        match self.entries.get(&p.canonical_key()) {
            Some(c) => Identified::Class(c),
            None => Identified::Unidentified(p.clone()),
        }
    }

    pub fn crossing_number(&self, name: &str) -> Option<u32> {
        self.crossing_numbers.get(name).copied()
    }

    pub fn crossing_numbers(&self) -> &BTreeMap<String, u32> {
        &self.crossing_numbers
    }

    /// Prime entries (including the unknot) in file order.
    pub fn primes(&self) -> impl Iterator<Item = (&str, &LaurentPoly, u32)> {
        self.primes.iter().map(|(n, p, x)| (n.as_str(), p, *x))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Order composite component names by crossing number, then table index,
/// matching the `3_1#4_1` naming convention.
fn collect_multisets(
    primes: &[(String, LaurentPoly, u32)],
    start: usize,
    used: u32,
    budget: u32,
    stack: &mut Vec<usize>,
    results: &mut Vec<(String, u32, Vec<LaurentPoly>)>,
) {
    if stack.len() >= 2 {
        let name: Vec<&str> = stack.iter().map(|&i| primes[i].0.as_str()).collect();
        let keys = chirality_products(&stack.iter().map(|&i| primes[i].1.clone()).collect::<Vec<_>>());
        results.push((name.join("#"), used, keys));
    }
    for i in start..primes.len() {
        let x = primes[i].2;
        if used + x > budget {
            continue;
        }
        stack.push(i);
        collect_multisets(primes, i, used + x, budget, stack, results);
        stack.pop();
    }
}

/// All products of the component polynomials with each factor taken either
/// as itself or mirrored, collapsed to canonical keys and deduplicated.
fn chirality_products(components: &[LaurentPoly]) -> Vec<LaurentPoly> {
    let m = components.len();
    let mut keys = Vec::new();
    for signs in 0u32..1 << m {
        let mut prod = LaurentPoly::one();
        for (i, c) in components.iter().enumerate() {
            let factor = if signs >> i & 1 == 1 { c.mirror() } else { c.clone() };
            prod = &prod * &factor;
        }
        let key = prod.canonical_key();
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    keys
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{free_trefoil, render_pd_line};
    use crate::statesum::{build_state_table, jones, orientation};

    fn small_pd_data() -> String {
        let tre = free_trefoil();
        let fig8 = crate::tangle::make_2n(2).unwrap();
        let mut out = String::from("0_1:\n");
        out.push_str(&render_pd_line("3_1", &tre, Some(&tre.alternating_assignment())));
        out.push('\n');
        out.push_str(&render_pd_line("4_1", &fig8, Some(&fig8.alternating_assignment())));
        out.push('\n');
        out
    }

    #[test]
    fn builds_and_identifies() {
        let table = ReferenceTable::build(&small_pd_data(), 9).unwrap();
        // unknot
        match table.identify(&LaurentPoly::one()) {
            Identified::Class(c) => {
                assert_eq!(c.name, "0_1");
                assert_eq!(c.crossing_number, 0);
            }
            _ => panic!("unknot must identify"),
        }
        // engine-computed trefoil jones identifies as 3_1, either chirality
        let d = free_trefoil();
        let (t, o) = (build_state_table(&d), orientation(&d));
        let v = jones(&t, &o, &d.alternating_assignment()).unwrap();
        for p in [v.clone(), v.mirror()] {
            match table.identify(&p) {
                Identified::Class(c) => assert_eq!(c.name, "3_1"),
                _ => panic!("trefoil must identify"),
            }
        }
    }

    #[test]
    fn composites_are_products() {
        let table = ReferenceTable::build(&small_pd_data(), 9).unwrap();
        let d = free_trefoil();
        let (t, o) = (build_state_table(&d), orientation(&d));
        let v3 = jones(&t, &o, &d.alternating_assignment()).unwrap();
        let fig8 = crate::tangle::make_2n(2).unwrap();
        let (tf, of) = (build_state_table(&fig8), orientation(&fig8));
        let v4 = jones(&tf, &of, &fig8.alternating_assignment()).unwrap();

        match table.identify(&(&v3 * &v4)) {
            Identified::Class(c) => {
                assert_eq!(c.name, "3_1#4_1");
                assert_eq!(c.crossing_number, 7);
            }
            _ => panic!("3_1#4_1 must identify"),
        }
        // both granny and square products carry the single name 3_1#3_1
        for p in [&v3 * &v3, &v3 * &v3.mirror()] {
            match table.identify(&p) {
                Identified::Class(c) => assert_eq!(c.name, "3_1#3_1"),
                _ => panic!("3_1#3_1 must identify"),
            }
        }
        assert_eq!(table.crossing_number("3_1#3_1#3_1"), Some(9));
    }

    #[test]
    fn unidentified_is_a_value() {
        let table = ReferenceTable::build(&small_pd_data(), 9).unwrap();
        let weird = LaurentPoly::monomial(7, 2);
        match table.identify(&weird) {
            Identified::Unidentified(p) => assert_eq!(p, weird),
            _ => panic!("nonsense polynomial must not identify"),
        }
    }

    #[test]
    fn key_collision_is_detected() {
        // register the trefoil twice under different names
        let tre = free_trefoil();
        let a = tre.alternating_assignment();
        let mut data = render_pd_line("3_1", &tre, Some(&a));
        data.push('\n');
        data.push_str(&render_pd_line("3_1x", &tre, Some(&a)));
        let err = ReferenceTable::build(&data, 6).unwrap_err();
        assert!(matches!(err, ClassifyError::KeyCollision(..)));
    }
}
