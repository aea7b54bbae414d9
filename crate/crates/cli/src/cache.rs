//! On-disk cache of raw Jones-key tallies, keyed by the canonical diagram
//! encoding plus the engine version. Hits therefore never change any
//! reported number: classification runs on the cached tally exactly as it
//! would on a fresh one.

use freeknot_core::diagram::FreeDiagram;
use freeknot_core::enumerate::jones_tally;
use freeknot_core::polynomial::{parse_poly, LaurentPoly};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

fn cache_file(dir: &Path, d: &FreeDiagram) -> PathBuf {
    let mut hasher = Sha256::new();
    hasher.update(d.canonical_form().as_bytes());
    hasher.update(b"|engine=");
    hasher.update(env!("CARGO_PKG_VERSION").as_bytes());
    let digest = hasher.finalize();
    let mut name = String::with_capacity(64);
    for byte in digest {
        name.push_str(&format!("{byte:02x}"));
    }
    dir.join(format!("{name}.tally"))
}

fn render(tally: &BTreeMap<LaurentPoly, u64>) -> String {
    let mut out = String::new();
    for (poly, count) in tally {
        out.push_str(&format!("{count}\t{poly}\n"));
    }
    out
}

fn parse(text: &str) -> Option<BTreeMap<LaurentPoly, u64>> {
    let mut tally = BTreeMap::new();
    for line in text.lines() {
        let (count, poly) = line.split_once('\t')?;
        tally.insert(parse_poly(poly).ok()?, count.parse().ok()?);
    }
    Some(tally)
}

/// Tally the shape, going through the cache directory when one is given.
/// Unreadable or stale cache entries are recomputed and rewritten.
pub fn tally_cached(d: &FreeDiagram, cache_dir: Option<&Path>) -> BTreeMap<LaurentPoly, u64> {
    let Some(dir) = cache_dir else {
        return jones_tally(d);
    };
    let path = cache_file(dir, d);
    if let Ok(text) = std::fs::read_to_string(&path) {
        if let Some(tally) = parse(&text) {
            if tally.values().sum::<u64>() == 1u64 << d.crossing_count() {
                return tally;
            }
        }
    }
    let tally = jones_tally(d);
    if std::fs::create_dir_all(dir).is_ok() {
        let _ = std::fs::write(&path, render(&tally));
    }
    tally
}

#[cfg(test)]
mod tests {
    use super::*;
    use freeknot_core::tangle::make_foil;

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let d = make_foil(3).unwrap();
        let fresh = tally_cached(&d, Some(dir.path()));
        assert_eq!(fresh.values().sum::<u64>(), 8);
        // second call reads the file back and must agree exactly
        let cached = tally_cached(&d, Some(dir.path()));
        assert_eq!(fresh, cached);
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
