//! Free knot diagrams as combinatorial maps (rotation systems).
//!
//! A diagram with `n` crossings stores, for each crossing, the four arc
//! labels around it in counterclockwise slot order. Arc labels are
//! canonicalized to `1..=2n` by traversal order from crossing 0, slot 0,
//! which pins down a deterministic state and assignment bit order.

use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error("arc {0} appears {1} time(s), expected exactly 2")]
    ArcMultiplicity(u32, usize),
    #[error("traversal splits into more than one component (a link, not a knot)")]
    MultiComponent,
    #[error("rotation system is not planar: V - E + F = {0}, expected 2")]
    NonPlanar(i64),
    #[error("unknown arc {0}")]
    UnknownArc(u32),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A dart is one of the four arc-ends at a crossing: `crossing * 4 + slot`.
pub type Dart = usize;

/// Which transversal strand is the overstrand at a crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OverPair {
    Slots02,
    Slots13,
}

/// A choice of overstrand at every crossing, packed as a bit mask.
/// Bit `c` set means the strand through slots (1,3) of crossing `c` is over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    mask: u64,
    len: u8,
}

impl Assignment {
    pub fn new(mask: u64, len: usize) -> Self {
        assert!(len <= 64);
        let keep = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        Self { mask: mask & keep, len: len as u8 }
    }

    pub fn from_overs(overs: &[OverPair]) -> Self {
        let mut mask = 0u64;
        for (c, o) in overs.iter().enumerate() {
            if *o == OverPair::Slots13 {
                mask |= 1 << c;
            }
        }
        Self::new(mask, overs.len())
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn bit(&self, c: usize) -> bool {
        self.mask >> c & 1 == 1
    }

    pub fn over(&self, c: usize) -> OverPair {
        if self.bit(c) {
            OverPair::Slots13
        } else {
            OverPair::Slots02
        }
    }

    /// Flip every crossing; this mirrors the resulting knot diagram.
    pub fn complement(&self) -> Self {
        Self::new(!self.mask, self.len())
    }

    /// All `2^n` assignments of an `n`-crossing diagram.
    pub fn all(n: usize) -> impl Iterator<Item = Assignment> {
        assert!(n < 63);
        (0u64..1 << n).map(move |m| Assignment::new(m, n))
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in 0..self.len() {
            write!(f, "{}", if self.bit(c) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// A crossing at which two cyclically adjacent slots are the two ends of one
/// arc, i.e. a Reidemeister-I kink.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LoopReport {
    pub crossing_id: usize,
    pub loop_length: usize,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FreeDiagram {
    crossings: Vec<[u32; 4]>,
    arc_count: u32,
}

impl fmt::Debug for FreeDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FreeDiagram({})", self.encode())
    }
}

impl FreeDiagram {
    /// The 0-crossing circle: one closed arc, no crossings.
    pub fn circle() -> Self {
        Self { crossings: Vec::new(), arc_count: 1 }
    }

    /// Build from raw crossing tuples, validate, and canonicalize arc labels.
    pub fn from_crossings(crossings: Vec<[u32; 4]>) -> Result<Self, DiagramError> {
        if crossings.is_empty() {
            return Ok(Self::circle());
        }
        let arc_count = 2 * crossings.len() as u32;
        let mut d = Self { crossings, arc_count };
        d.validate()?;
        d.canonicalize();
        Ok(d)
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn arc_count(&self) -> u32 {
        self.arc_count
    }

    pub fn crossings(&self) -> &[[u32; 4]] {
        &self.crossings
    }

    pub fn arc_at(&self, dart: Dart) -> u32 {
        self.crossings[dart / 4][dart % 4]
    }

    /// Checks all structural invariants, reporting the first violation.
    pub fn validate(&self) -> Result<(), DiagramError> {
        if self.crossings.is_empty() {
            return Ok(());
        }
        let n = self.crossings.len();
        let mut counts = std::collections::HashMap::new();
        for cr in &self.crossings {
            for &a in cr {
                *counts.entry(a).or_insert(0usize) += 1;
            }
        }
        if counts.len() != 2 * n {
            // some label is missing, so some other label is over-used
            for (&a, &k) in &counts {
                if k != 2 {
                    return Err(DiagramError::ArcMultiplicity(a, k));
                }
            }
        }
        for (&a, &k) in &counts {
            if k != 2 {
                return Err(DiagramError::ArcMultiplicity(a, k));
            }
        }
        let pairing = self.arc_pairing();
        if self.traversal_with(&pairing, 0).len() != 2 * n {
            return Err(DiagramError::MultiComponent);
        }
        let f = self.face_count_with(&pairing) as i64;
        let euler = n as i64 - 2 * n as i64 + f;
        if euler != 2 {
            return Err(DiagramError::NonPlanar(euler));
        }
        Ok(())
    }

    /// For each dart, the dart at the other end of its arc.
    fn arc_pairing(&self) -> Vec<Dart> {
        let mut first: std::collections::HashMap<u32, Dart> = std::collections::HashMap::new();
        let mut pair = vec![usize::MAX; self.crossings.len() * 4];
        for d in 0..pair.len() {
            let a = self.arc_at(d);
            match first.get(&a) {
                None => {
                    first.insert(a, d);
                }
                Some(&e) => {
                    pair[d] = e;
                    pair[e] = d;
                }
            }
        }
        pair
    }

    /// The sequence of darts entered by the knot traversal starting by
    /// entering `start`. Walk: enter slot `s`, exit slot `s+2`, follow the
    /// arc. Stops when the start dart recurs.
    fn traversal_with(&self, pairing: &[Dart], start: Dart) -> Vec<Dart> {
        let mut seq = Vec::with_capacity(2 * self.crossings.len());
        let mut d = start;
        loop {
            seq.push(d);
            let exit = (d / 4) * 4 + (d % 4 + 2) % 4;
            d = pairing[exit];
            if d == start {
                break;
            }
            if seq.len() > 4 * self.crossings.len() {
                break; // malformed pairing; caller notices the bad length
            }
        }
        seq
    }

    /// The canonical traversal: the sequence of darts entered, starting at
    /// crossing 0, slot 0. Arc `k` (1-based) is the arc entered at step `k`.
    pub fn traversal(&self) -> Vec<Dart> {
        if self.crossings.is_empty() {
            return Vec::new();
        }
        self.traversal_with(&self.arc_pairing(), 0)
    }

    fn face_count_with(&self, pairing: &[Dart]) -> usize {
        if self.crossings.is_empty() {
            return 2;
        }
        let darts = self.crossings.len() * 4;
        let mut seen = vec![false; darts];
        let mut faces = 0;
        for d0 in 0..darts {
            if seen[d0] {
                continue;
            }
            faces += 1;
            let mut d = d0;
            while !seen[d] {
                seen[d] = true;
                let other = pairing[d];
                d = (other / 4) * 4 + (other % 4 + 1) % 4;
            }
        }
        faces
    }

    /// Number of faces of the rotation system (2 for the circle).
    pub fn face_count(&self) -> usize {
        self.face_count_with(&self.arc_pairing())
    }

    /// Relabel arcs to 1..=2n in traversal order from crossing 0, slot 0.
    fn canonicalize(&mut self) {
        if self.crossings.is_empty() {
            return;
        }
        let seq = self.traversal();
        let mut new_label = std::collections::HashMap::new();
        for (k, &d) in seq.iter().enumerate() {
            new_label.insert(self.arc_at(d), (k + 1) as u32);
        }
        for cr in &mut self.crossings {
            for a in cr.iter_mut() {
                *a = new_label[a];
            }
        }
    }

    /// Crossings where two cyclically adjacent slots carry the same arc.
    /// Empty result means the diagram is minimal.
    pub fn find_length_one_loops(&self) -> Vec<LoopReport> {
        let mut out = Vec::new();
        for (c, cr) in self.crossings.iter().enumerate() {
            if (0..4).any(|s| cr[s] == cr[(s + 1) % 4]) {
                out.push(LoopReport { crossing_id: c, loop_length: 1 });
            }
        }
        out
    }

    pub fn is_minimal(&self) -> bool {
        self.find_length_one_loops().is_empty()
    }

    /// Insert one crossing forming a loop of length one on `arc`.
    pub fn add_kink(&self, arc: u32) -> Result<Self, DiagramError> {
        if self.crossings.is_empty() {
            if arc != 1 {
                return Err(DiagramError::UnknownArc(arc));
            }
            // kinked circle: one crossing, loop on slots 1-2, closing arc on 0-3
            return Self::from_crossings(vec![[1, 2, 2, 1]]);
        }
        let mut crossings = self.crossings.clone();
        let n = crossings.len();
        let mut ends = Vec::new();
        for d in 0..4 * n {
            if self.arc_at(d) == arc {
                ends.push(d);
            }
        }
        if ends.len() != 2 {
            return Err(DiagramError::UnknownArc(arc));
        }
        let loop_arc = self.arc_count + 1;
        let tail_arc = self.arc_count + 2;
        // split `arc` into arc .. new crossing .. tail_arc, loop on slots 1,2
        crossings[ends[1] / 4][ends[1] % 4] = tail_arc;
        crossings.push([arc, loop_arc, loop_arc, tail_arc]);
        Self::from_crossings(crossings)
    }

    /// Splice two diagrams along one arc of each. All splice choices give the
    /// same resultant distribution; the arcs are caller-specified for
    /// determinism.
    pub fn connected_sum(&self, other: &Self, arc1: u32, arc2: u32) -> Result<Self, DiagramError> {
        if other.crossings.is_empty() {
            if arc2 != 1 {
                return Err(DiagramError::UnknownArc(arc2));
            }
            if self.crossings.is_empty() {
                return Ok(Self::circle());
            }
            let mut ends = 0;
            for d in 0..4 * self.crossings.len() {
                if self.arc_at(d) == arc1 {
                    ends += 1;
                }
            }
            if ends != 2 {
                return Err(DiagramError::UnknownArc(arc1));
            }
            return Ok(self.clone());
        }
        if self.crossings.is_empty() {
            return other.connected_sum(self, arc2, arc1);
        }
        let mut crossings = self.crossings.clone();
        let offset = self.arc_count;
        for cr in &other.crossings {
            crossings.push([cr[0] + offset, cr[1] + offset, cr[2] + offset, cr[3] + offset]);
        }
        let (mut e1, mut e2) = (Vec::new(), Vec::new());
        let n1 = self.crossings.len();
        for (d, cr) in crossings.iter().enumerate().flat_map(|(c, cr)| {
            (0..4).map(move |s| (c * 4 + s, cr[s]))
        }) {
            if d / 4 < n1 && cr == arc1 {
                e1.push(d);
            }
            if d / 4 >= n1 && cr == arc2 + offset {
                e2.push(d);
            }
        }
        if e1.len() != 2 {
            return Err(DiagramError::UnknownArc(arc1));
        }
        if e2.len() != 2 {
            return Err(DiagramError::UnknownArc(arc2));
        }
        // cut arc1 = {e1[0], e1[1]} and arc2 = {e2[0], e2[1]}, rejoin as
        // {e1[0], e2[0]} and {e1[1], e2[1]}
        crossings[e2[0] / 4][e2[0] % 4] = arc1;
        crossings[e1[1] / 4][e1[1] % 4] = arc2 + offset;
        Self::from_crossings(crossings)
    }

    /// One of the two checkerboard (alternating) assignments: the strand
    /// passing a crossing at an even traversal step goes over.
    pub fn alternating_assignment(&self) -> Assignment {
        let seq = self.traversal();
        let mut mask = 0u64;
        let mut seen = vec![false; self.crossings.len()];
        for (pos, &d) in seq.iter().enumerate() {
            let c = d / 4;
            if !seen[c] {
                seen[c] = true;
                if pos % 2 == 0 && (d % 4 == 1 || d % 4 == 3) {
                    mask |= 1 << c;
                } else if pos % 2 == 1 && (d % 4 == 0 || d % 4 == 2) {
                    mask |= 1 << c;
                }
            }
        }
        Assignment::new(mask, self.crossings.len())
    }

    /// Canonical textual encoding of the stored (already arc-canonical) map.
    pub fn encode(&self) -> String {
        let mut s = format!("crossings:{}", self.crossings.len());
        for cr in &self.crossings {
            s.push_str(&format!(";{},{},{},{}", cr[0], cr[1], cr[2], cr[3]));
        }
        s
    }

    /// Encoding invariant under relabeling, traversal start, and reflection:
    /// the lexicographically smallest re-encoding over all starts and both
    /// chiralities. Two diagrams are isomorphic shapes iff these agree.
    pub fn canonical_form(&self) -> String {
        if self.crossings.is_empty() {
            return "crossings:0".to_string();
        }
        let mut best: Option<Vec<[u32; 4]>> = None;
        for reflect in [false, true] {
            let view = self.reflected_view(reflect);
            let pairing = view.arc_pairing();
            for start in 0..view.crossings.len() * 4 {
                let seq = view.traversal_with(&pairing, start);
                if seq.len() != 2 * view.crossings.len() {
                    continue;
                }
                let cand = view.relabel_along(&seq);
                if best.as_ref().map_or(true, |b| &cand < b) {
                    best = Some(cand);
                }
            }
        }
        let d = Self { crossings: best.unwrap(), arc_count: self.arc_count };
        d.encode()
    }

    fn reflected_view(&self, reflect: bool) -> Self {
        if !reflect {
            return self.clone();
        }
        let crossings = self.crossings.iter().map(|cr| [cr[0], cr[3], cr[2], cr[1]]).collect();
        Self { crossings, arc_count: self.arc_count }
    }

    /// Rebuild the crossing list with crossings in first-visit order along
    /// `seq`, slots rotated so each crossing's first entry is slot 0, and
    /// arcs named by traversal order.
    fn relabel_along(&self, seq: &[Dart]) -> Vec<[u32; 4]> {
        let n = self.crossings.len();
        let mut cross_order = vec![usize::MAX; n];
        let mut slot_rot = vec![0usize; n];
        let mut next_c = 0;
        for &d in seq {
            let c = d / 4;
            if cross_order[c] == usize::MAX {
                cross_order[c] = next_c;
                slot_rot[c] = d % 4;
                next_c += 1;
            }
        }
        let mut arc_label = std::collections::HashMap::new();
        for (k, &d) in seq.iter().enumerate() {
            arc_label.insert(self.arc_at(d), (k + 1) as u32);
        }
        let mut out = vec![[0u32; 4]; n];
        for (c, cr) in self.crossings.iter().enumerate() {
            for s in 0..4 {
                out[cross_order[c]][s] = arc_label[&cr[(slot_rot[c] + s) % 4]];
            }
        }
        out
    }
}

/// A knot diagram: a free diagram plus the erased over/under data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedPdCode {
    pub crossings: Vec<[u32; 4]>,
    pub overs: Vec<OverPair>,
}

impl SignedPdCode {
    /// Erase over/under data: the shape, plus the assignment that restores it.
    pub fn shape_of(&self) -> Result<(FreeDiagram, Assignment), DiagramError> {
        let d = FreeDiagram::from_crossings(self.crossings.clone())?;
        Ok((d, Assignment::from_overs(&self.overs)))
    }
}

/// Reapply an assignment to a shape, inverting `shape_of`.
pub fn assign(d: &FreeDiagram, a: &Assignment) -> SignedPdCode {
    assert_eq!(a.len(), d.crossing_count(), "assignment length mismatch");
    SignedPdCode {
        crossings: d.crossings().to_vec(),
        overs: (0..d.crossing_count()).map(|c| a.over(c)).collect(),
    }
}

/// A parsed diagram file: shape, optional crossing data, optional name.
#[derive(Debug, Clone)]
pub struct ParsedDiagram {
    pub name: Option<String>,
    pub diagram: FreeDiagram,
    pub assignment: Option<Assignment>,
}

fn parse_over(tok: &str, line: usize) -> Result<OverPair, DiagramError> {
    match tok {
        "02" => Ok(OverPair::Slots02),
        "13" => Ok(OverPair::Slots13),
        _ => Err(DiagramError::Parse { line, msg: format!("bad over spec {tok:?}, expected 02 or 13") }),
    }
}

/// Parse the diagram file format:
///
/// ```text
/// crossings: n
/// c0: a b c d [/over=02|13]
/// ...
/// ```
///
/// A 0-crossing file (`crossings: 0` and no crossing lines) is the circle.
pub fn parse_diagram_file(text: &str) -> Result<ParsedDiagram, DiagramError> {
    let mut n: Option<usize> = None;
    let mut rows: Vec<(usize, [u32; 4], Option<OverPair>)> = Vec::new();
    let mut name = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("name:") {
            name = Some(rest.trim().to_string());
            continue;
        }
        if let Some(rest) = line.strip_prefix("crossings:") {
            let k = rest.trim().parse().map_err(|_| DiagramError::Parse {
                line: line_no,
                msg: format!("bad crossing count {rest:?}"),
            })?;
            n = Some(k);
            continue;
        }
        let (head, rest) = line.split_once(':').ok_or_else(|| DiagramError::Parse {
            line: line_no,
            msg: "expected `c<i>: a b c d`".into(),
        })?;
        let idx: usize = head.trim().strip_prefix('c').and_then(|s| s.parse().ok()).ok_or_else(|| {
            DiagramError::Parse { line: line_no, msg: format!("bad crossing id {head:?}") }
        })?;
        let (arcs_part, over_part) = match rest.split_once("/over=") {
            Some((a, o)) => (a, Some(o.trim())),
            None => (rest, None),
        };
        let arcs: Vec<u32> = arcs_part
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| DiagramError::Parse {
                line: line_no,
                msg: format!("bad arc label {t:?}"),
            }))
            .collect::<Result<_, _>>()?;
        if arcs.len() != 4 {
            return Err(DiagramError::Parse {
                line: line_no,
                msg: format!("expected 4 arc labels, got {}", arcs.len()),
            });
        }
        let over = over_part.map(|t| parse_over(t, line_no)).transpose()?;
        rows.push((idx, [arcs[0], arcs[1], arcs[2], arcs[3]], over));
    }
    let n = n.ok_or(DiagramError::Parse { line: 0, msg: "missing `crossings: n` header".into() })?;
    if rows.len() != n {
        return Err(DiagramError::Parse {
            line: 0,
            msg: format!("header says {n} crossings, found {}", rows.len()),
        });
    }
    rows.sort_by_key(|r| r.0);
    for (want, row) in rows.iter().enumerate() {
        if row.0 != want {
            return Err(DiagramError::Parse {
                line: 0,
                msg: format!("crossing ids must be 0..{}, missing c{want}", n),
            });
        }
    }
    let crossings: Vec<[u32; 4]> = rows.iter().map(|r| r.1).collect();
    let overs: Option<Vec<OverPair>> = rows.iter().map(|r| r.2).collect();
    let diagram = FreeDiagram::from_crossings(crossings)?;
    let assignment = overs.map(|o| Assignment::from_overs(&o));
    Ok(ParsedDiagram { name, diagram, assignment })
}

/// Render a diagram (optionally signed) in the diagram file format.
pub fn render_diagram_file(d: &FreeDiagram, a: Option<&Assignment>, name: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(name) = name {
        out.push_str(&format!("name: {name}\n"));
    }
    out.push_str(&format!("crossings: {}\n", d.crossing_count()));
    for (c, cr) in d.crossings().iter().enumerate() {
        out.push_str(&format!("c{c}: {} {} {} {}", cr[0], cr[1], cr[2], cr[3]));
        if let Some(a) = a {
            out.push_str(match a.over(c) {
                OverPair::Slots02 => "/over=02",
                OverPair::Slots13 => "/over=13",
            });
        }
        out.push('\n');
    }
    out
}

/// Parse the one-knot-per-line PD format:
/// `name: (a,b,c,d)(e,f,g,h)...[/over=02,13,...]`
pub fn parse_pd_line(line: &str, line_no: usize) -> Result<ParsedDiagram, DiagramError> {
    let (name, rest) = line.split_once(':').ok_or_else(|| DiagramError::Parse {
        line: line_no,
        msg: "expected `name: (a,b,c,d)...`".into(),
    })?;
    let (tuples_part, over_part) = match rest.split_once("/over=") {
        Some((a, o)) => (a.trim(), Some(o.trim())),
        None => (rest.trim(), None),
    };
    let mut crossings = Vec::new();
    let mut cur = tuples_part;
    while let Some(open) = cur.find('(') {
        let close = cur[open..].find(')').ok_or_else(|| DiagramError::Parse {
            line: line_no,
            msg: "unclosed tuple".into(),
        })? + open;
        let arcs: Vec<u32> = cur[open + 1..close]
            .split(',')
            .map(|t| t.trim().parse().map_err(|_| DiagramError::Parse {
                line: line_no,
                msg: format!("bad arc label {t:?}"),
            }))
            .collect::<Result<_, _>>()?;
        if arcs.len() != 4 {
            return Err(DiagramError::Parse {
                line: line_no,
                msg: format!("expected 4 arc labels per tuple, got {}", arcs.len()),
            });
        }
        crossings.push([arcs[0], arcs[1], arcs[2], arcs[3]]);
        cur = &cur[close + 1..];
    }
    let assignment = match over_part {
        None => None,
        Some(list) => {
            let overs: Vec<OverPair> = if list.is_empty() {
                Vec::new()
            } else {
                list.split(',')
                    .map(|t| parse_over(t.trim(), line_no))
                    .collect::<Result<_, _>>()?
            };
            if overs.len() != crossings.len() {
                return Err(DiagramError::Parse {
                    line: line_no,
                    msg: format!("{} over specs for {} crossings", overs.len(), crossings.len()),
                });
            }
            Some(Assignment::from_overs(&overs))
        }
    };
    let diagram = FreeDiagram::from_crossings(crossings)?;
    Ok(ParsedDiagram { name: Some(name.trim().to_string()), diagram, assignment })
}

/// Render one knot as a PD line.
pub fn render_pd_line(name: &str, d: &FreeDiagram, a: Option<&Assignment>) -> String {
    let mut out = format!("{name}:");
    for cr in d.crossings() {
        out.push_str(&format!(" ({},{},{},{})", cr[0], cr[1], cr[2], cr[3]));
    }
    if let Some(a) = a {
        out.push_str("/over=");
        let overs: Vec<&str> = (0..d.crossing_count())
            .map(|c| match a.over(c) {
                OverPair::Slots02 => "02",
                OverPair::Slots13 => "13",
            })
            .collect();
        out.push_str(&overs.join(","));
    }
    out
}

/// The standard free trefoil map, used throughout the tests.
#[cfg(test)]
pub(crate) fn free_trefoil() -> FreeDiagram {
    FreeDiagram::from_crossings(vec![[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]]).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trefoil_is_valid() {
        let d = free_trefoil();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.arc_count(), 6);
        assert_eq!(d.face_count(), 5);
        assert!(d.is_minimal());
    }

    #[test]
    fn circle_is_valid() {
        let d = FreeDiagram::circle();
        assert!(d.validate().is_ok());
        assert_eq!(d.arc_count(), 1);
        assert_eq!(d.face_count(), 2);
        assert!(d.find_length_one_loops().is_empty());
    }

    #[test]
    fn hopf_shape_is_multicomponent() {
        let err = FreeDiagram::from_crossings(vec![[1, 3, 2, 4], [3, 1, 4, 2]]).unwrap_err();
        assert_eq!(err, DiagramError::MultiComponent);
    }

    #[test]
    fn repeated_arc_label_is_rejected() {
        let err = FreeDiagram::from_crossings(vec![[1, 1, 1, 2], [2, 3, 3, 1]]).unwrap_err();
        assert!(matches!(err, DiagramError::ArcMultiplicity(..)));
    }

    #[test]
    fn kink_detection() {
        let d = free_trefoil();
        let kinked = d.add_kink(1).unwrap();
        assert_eq!(kinked.crossing_count(), 4);
        let loops = kinked.find_length_one_loops();
        assert_eq!(loops.len(), 1);
        assert_eq!(loops[0].loop_length, 1);

        let kinked_circle = FreeDiagram::circle().add_kink(1).unwrap();
        assert_eq!(kinked_circle.crossing_count(), 1);
        assert_eq!(kinked_circle.find_length_one_loops().len(), 1);
    }

    #[test]
    fn kink_unknown_arc() {
        assert_eq!(free_trefoil().add_kink(99).unwrap_err(), DiagramError::UnknownArc(99));
    }

    #[test]
    fn connected_sum_counts() {
        let t = free_trefoil();
        let s = t.connected_sum(&t, 1, 1).unwrap();
        assert_eq!(s.crossing_count(), 6);
        assert!(s.validate().is_ok());

        let with_circle = t.connected_sum(&FreeDiagram::circle(), 1, 1).unwrap();
        assert_eq!(with_circle.canonical_form(), t.canonical_form());
    }

    #[test]
    fn canonical_form_is_start_invariant() {
        let d = free_trefoil();
        // same map with crossings listed in a different order and other labels
        let d2 = FreeDiagram::from_crossings(vec![[6, 3, 5, 2], [2, 5, 1, 4], [4, 1, 3, 6]]).unwrap();
        assert_eq!(d.canonical_form(), d2.canonical_form());
    }

    #[test]
    fn diagram_file_round_trip() {
        let d = free_trefoil();
        let a = d.alternating_assignment();
        let text = render_diagram_file(&d, Some(&a), Some("3_1"));
        let parsed = parse_diagram_file(&text).unwrap();
        assert_eq!(parsed.name.as_deref(), Some("3_1"));
        assert_eq!(parsed.diagram, d);
        assert_eq!(parsed.assignment, Some(a));
    }

    #[test]
    fn pd_line_round_trip() {
        let d = free_trefoil();
        let a = d.alternating_assignment();
        let line = render_pd_line("3_1", &d, Some(&a));
        let parsed = parse_pd_line(&line, 1).unwrap();
        assert_eq!(parsed.name.as_deref(), Some("3_1"));
        assert_eq!(parsed.diagram, d);
        assert_eq!(parsed.assignment, Some(a));
    }

    #[test]
    fn shape_of_round_trip() {
        let d = free_trefoil();
        let a = d.alternating_assignment();
        let pd = assign(&d, &a);
        let (shape, got) = pd.shape_of().unwrap();
        assert_eq!(shape, d);
        assert_eq!(got, a);
        assert_eq!(assign(&shape, &got), pd);
    }

    #[test]
    fn alternating_assignment_alternates() {
        let d = free_trefoil();
        let a = d.alternating_assignment();
        // along the traversal, over/under must alternate strictly
        let seq = d.traversal();
        let mut last_over = None;
        for &dart in &seq {
            let c = dart / 4;
            let slot = dart % 4;
            let on_13 = slot == 1 || slot == 3;
            let over = a.bit(c) == on_13;
            if let Some(prev) = last_over {
                assert_ne!(prev, over);
            }
            last_over = Some(over);
        }
    }
}
