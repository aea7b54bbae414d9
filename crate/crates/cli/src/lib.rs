//! Library side of the `freeknot` command line: appendix reproduction,
//! report rendering, the distribution cache, and the corpus generator.

pub mod appendix;
pub mod cache;
pub mod output;
pub mod tablegen;
pub mod verify;

use freeknot_core::classify::ReferenceTable;
use freeknot_core::diagram::{parse_pd_line, FreeDiagram};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

/// Locate a shipped data file: `$FREEKNOT_DATA` first, then the workspace
/// `data/` directory next to the manifest, then `./data`.
pub fn data_path(file: &str) -> PathBuf {
    if let Ok(dir) = std::env::var("FREEKNOT_DATA") {
        let p = Path::new(&dir).join(file);
        if p.exists() {
            return p;
        }
    }
    let workspace = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(file);
    if workspace.exists() {
        return workspace;
    }
    Path::new("data").join(file)
}

/// Parse the PD corpus into named shapes plus the raw text (which the
/// reference table builder consumes).
pub fn load_corpus(text: &str) -> Result<BTreeMap<String, FreeDiagram>, String> {
    let mut shapes = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parsed = parse_pd_line(line, i + 1).map_err(|e| e.to_string())?;
        let name = parsed.name.expect("pd lines carry names");
        if shapes.insert(name.clone(), parsed.diagram).is_some() {
            return Err(format!("duplicate corpus entry {name}"));
        }
    }
    Ok(shapes)
}

/// Load the shipped corpus and build the reference table in one step.
pub fn load_reference(
    pd_path: &Path,
    composite_budget: u32,
) -> Result<(BTreeMap<String, FreeDiagram>, ReferenceTable), String> {
    let text = std::fs::read_to_string(pd_path)
        .map_err(|e| format!("cannot read {}: {e}", pd_path.display()))?;
    let shapes = load_corpus(&text)?;
    let table = ReferenceTable::build(&text, composite_budget).map_err(|e| e.to_string())?;
    Ok((shapes, table))
}

/// Sort key for knot names: (crossing number, table index), composites after
/// primes of the same total.
pub fn name_sort_key(name: &str) -> (u32, u32, String) {
    if let Some((n, idx)) = name.split_once('_') {
        if !name.contains('#') {
            if let (Ok(n), Ok(idx)) = (n.parse(), idx.parse()) {
                return (n, idx, String::new());
            }
        }
    }
    let total: u32 = name
        .split('#')
        .filter_map(|p| p.split('_').next())
        .filter_map(|n| n.parse::<u32>().ok())
        .sum();
    (total, u32::MAX, name.to_string())
}
