//! Conway tangle words, rational fractions, Schubert equivalence of
//! 2-bridge closures, and free-diagram generators for the twist families.

use crate::diagram::{Assignment, DiagramError, FreeDiagram, OverPair};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TangleError {
    #[error("parity violation: {0}")]
    ParityViolation(String),
    #[error("fraction numerator must be positive")]
    NonpositiveP,
    #[error("word closes to a link, not a knot")]
    NotAKnot,
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// A reduced rational `p/q` with `q >= 0`; the infinity tangle is `1/0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fraction {
    pub p: i64,
    pub q: i64,
}

impl Fraction {
    pub fn new(p: i64, q: i64) -> Self {
        if p == 0 && q == 0 {
            return Self { p: 0, q: 0 };
        }
        let g = gcd(p.unsigned_abs(), q.unsigned_abs()) as i64;
        let (mut p, mut q) = (p / g, q / g);
        if q < 0 {
            p = -p;
            q = -q;
        }
        Self { p, q }
    }

    pub fn infinity() -> Self {
        Self { p: 1, q: 0 }
    }

    pub fn is_infinity(&self) -> bool {
        self.q == 0
    }
}

impl std::fmt::Display for Fraction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_infinity() {
            write!(f, "inf")
        } else {
            write!(f, "{}/{}", self.p, self.q)
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

/// Continued-fraction value of a Conway word: for `[a_1, ..., a_k]` this is
/// `a_k + 1/(a_{k-1} + 1/(... + 1/a_1))`, evaluated exactly.
pub fn fraction(word: &[i64]) -> Fraction {
    assert!(!word.is_empty(), "tangle word must be nonempty");
    let mut f = Fraction::new(word[0], 1);
    for &a in &word[1..] {
        // a + 1/f, with 1/(p/q) = q/p
        f = Fraction::new(a * f.p + f.q, f.p);
    }
    f
}

/// Schubert's criterion: the 2-bridge closures of `p/q` and `p'/q'` are the
/// same knot iff `p = p'` and (`q = q' mod p` or `q q' = 1 mod p`).
/// With `collapse_mirror`, `q'` is also tried as `p - q'`.
pub fn schubert_equivalent(
    f1: Fraction,
    f2: Fraction,
    collapse_mirror: bool,
) -> Result<bool, TangleError> {
    if f1.p <= 0 || f2.p <= 0 {
        return Err(TangleError::NonpositiveP);
    }
    if f1.p != f2.p {
        return Ok(false);
    }
    let p = f1.p;
    let q1 = f1.q.rem_euclid(p);
    let check = |q2: i64| -> bool {
        let q2 = q2.rem_euclid(p);
        (q1 - q2).rem_euclid(p) == 0 || (q1 * q2 - 1).rem_euclid(p) == 0
    };
    if check(f2.q) {
        return Ok(true);
    }
    if collapse_mirror && check(p - f2.q.rem_euclid(p)) {
        return Ok(true);
    }
    Ok(false)
}

/// A tangle under construction: crossings plus the four dangling corner
/// arcs. Slots at every crossing are stored counterclockwise as
/// (SW, SE, NE, NW) of the crossing's own little square.
#[derive(Debug, Clone)]
pub(crate) struct TangleBuilder {
    pub(crate) crossings: Vec<[u32; 4]>,
    pub(crate) overs: Vec<OverPair>,
    pub(crate) next_arc: u32,
    pub(crate) nw: u32,
    pub(crate) ne: u32,
    pub(crate) sw: u32,
    pub(crate) se: u32,
}

const SW: usize = 0;
const SE: usize = 1;
const NE: usize = 2;
const NW: usize = 3;

impl TangleBuilder {
    /// Two horizontal strands: fraction 0.
    pub fn zero() -> Self {
        Self { crossings: Vec::new(), overs: Vec::new(), next_arc: 3, nw: 1, ne: 1, sw: 2, se: 2 }
    }

    /// Two vertical strands: fraction infinity.
    pub fn infinity() -> Self {
        Self { crossings: Vec::new(), overs: Vec::new(), next_arc: 3, nw: 1, ne: 2, sw: 1, se: 2 }
    }

    fn fresh(&mut self) -> u32 {
        let a = self.next_arc;
        self.next_arc += 1;
        a
    }

    fn over_for(sign: i64) -> OverPair {
        // positive twist: the overstrand runs along the positive-slope
        // diagonal, i.e. through slots (SW, NE) = (0, 2)
        if sign > 0 {
            OverPair::Slots02
        } else {
            OverPair::Slots13
        }
    }

    /// Append one crossing on the right (horizontal twist of the east ends).
    pub fn twist_right(&mut self, sign: i64) {
        let (a, b) = (self.fresh(), self.fresh());
        let mut cr = [0u32; 4];
        cr[NW] = self.ne;
        cr[SW] = self.se;
        cr[NE] = a;
        cr[SE] = b;
        self.crossings.push(cr);
        self.overs.push(Self::over_for(sign));
        self.ne = a;
        self.se = b;
    }

    /// Append one crossing below (vertical twist of the south ends).
    pub fn twist_bottom(&mut self, sign: i64) {
        let (a, b) = (self.fresh(), self.fresh());
        let mut cr = [0u32; 4];
        cr[NW] = self.sw;
        cr[NE] = self.se;
        cr[SW] = a;
        cr[SE] = b;
        self.crossings.push(cr);
        self.overs.push(Self::over_for(sign));
        self.sw = a;
        self.se = b;
    }

    /// Rotate the whole tangle a quarter turn counterclockwise.
    pub fn rotate_ccw(&mut self) {
        let (nw, ne, sw, se) = (self.nw, self.ne, self.sw, self.se);
        self.nw = ne;
        self.sw = nw;
        self.se = sw;
        self.ne = se;
    }

    /// Rotate the whole tangle by 180 degrees.
    pub fn rotate_180(&mut self) {
        self.rotate_ccw();
        self.rotate_ccw();
    }

    pub(crate) fn shift_labels(&mut self, offset: u32) {
        for cr in &mut self.crossings {
            for a in cr.iter_mut() {
                *a += offset;
            }
        }
        self.nw += offset;
        self.ne += offset;
        self.sw += offset;
        self.se += offset;
        self.next_arc += offset;
    }

    fn rename(&mut self, from: u32, to: u32) {
        for cr in &mut self.crossings {
            for a in cr.iter_mut() {
                if *a == from {
                    *a = to;
                }
            }
        }
        for corner in [&mut self.nw, &mut self.ne, &mut self.sw, &mut self.se] {
            if *corner == from {
                *corner = to;
            }
        }
    }

    pub(crate) fn join(&mut self, a: u32, b: u32) {
        if a != b {
            self.rename(a.max(b), a.min(b));
        }
    }

    /// Tangle addition: glue `other` to the east side of `self`.
    pub fn add(mut self, mut other: TangleBuilder) -> TangleBuilder {
        other.shift_labels(self.next_arc);
        let mut crossings = std::mem::take(&mut self.crossings);
        crossings.append(&mut other.crossings);
        let mut overs = std::mem::take(&mut self.overs);
        overs.append(&mut other.overs);
        let mut joined = TangleBuilder {
            crossings,
            overs,
            next_arc: other.next_arc,
            nw: self.nw,
            ne: other.ne,
            sw: self.sw,
            se: other.se,
        };
        joined.join(self.ne, other.nw);
        joined.join(self.se, other.sw);
        joined
    }

    /// Numerator closure: join the two upper ends and the two lower ends.
    pub fn close(mut self) -> Result<(FreeDiagram, Assignment), TangleError> {
        self.join(self.nw, self.ne);
        self.join(self.sw, self.se);
        if self.crossings.is_empty() {
            return Ok((FreeDiagram::circle(), Assignment::new(0, 0)));
        }
        compact_labels(&mut self.crossings);
        let d = FreeDiagram::from_crossings(self.crossings).map_err(|e| match e {
            DiagramError::MultiComponent => TangleError::NotAKnot,
            other => TangleError::Diagram(other),
        })?;
        Ok((d, Assignment::from_overs(&self.overs)))
    }
}

fn compact_labels(crossings: &mut [[u32; 4]]) {
    let mut labels: Vec<u32> = crossings.iter().flatten().copied().collect();
    labels.sort_unstable();
    labels.dedup();
    for cr in crossings {
        for a in cr.iter_mut() {
            *a = labels.binary_search(a).unwrap() as u32 + 1;
        }
    }
}

/// Build the rational tangle of a Conway word in standard form: batches are
/// laid out alternately (the last batch horizontal, the one before it
/// vertical, and so on), matching the continued-fraction evaluation order.
pub(crate) fn rational_tangle(word: &[i64]) -> TangleBuilder {
    assert!(!word.is_empty());
    let k = word.len();
    let mut t = if (k - 1) % 2 == 0 { TangleBuilder::zero() } else { TangleBuilder::infinity() };
    for (i, &a) in word.iter().enumerate() {
        let horizontal = (k - 1 - i) % 2 == 0;
        for _ in 0..a.unsigned_abs() {
            if horizontal {
                t.twist_right(a.signum());
            } else {
                t.twist_bottom(a.signum());
            }
        }
    }
    t
}

/// Numerator closure of a rational tangle word, with the crossing data the
/// word's signs dictate. Fails with `NotAKnot` when the closure has two
/// components (even fraction numerator).
pub fn rational_closure(word: &[i64]) -> Result<(FreeDiagram, Assignment), TangleError> {
    rational_tangle(word).close()
}

/// Closure of a sum of quarter-turned rational tangles (Conway's comma
/// notation, e.g. `3,3,2` or `3,-3,2`). Realizes the pretzel-like knots
/// that the twist families do not cover.
pub fn montesinos_closure(words: &[Vec<i64>]) -> Result<(FreeDiagram, Assignment), TangleError> {
    assert!(!words.is_empty());
    let mut acc: Option<TangleBuilder> = None;
    for w in words {
        let mut t = rational_tangle(w);
        t.rotate_ccw();
        acc = Some(match acc {
            None => t,
            Some(prev) => prev.add(t),
        });
    }
    acc.unwrap().close()
}

fn ensure(cond: bool, msg: &str) -> Result<(), TangleError> {
    if cond {
        Ok(())
    } else {
        Err(TangleError::ParityViolation(msg.to_string()))
    }
}

/// The free n-foil: closure of the `n` tangle. `n` must be odd.
pub fn make_foil(n: i64) -> Result<FreeDiagram, TangleError> {
    ensure(n >= 1 && n % 2 == 1, "foil requires odd n >= 1")?;
    Ok(rational_closure(&[n])?.0)
}

/// The free 2 n knot: closure of the `2 n` tangle, `n + 2` crossings.
pub fn make_2n(n: i64) -> Result<FreeDiagram, TangleError> {
    ensure(n >= 1, "2 n requires n >= 1")?;
    Ok(rational_closure(&[2, n])?.0)
}

/// The free k n knot: closure of the `k n` tangle; at least one of `k`, `n`
/// must be even, else the closure is a link.
pub fn make_kn(k: i64, n: i64) -> Result<FreeDiagram, TangleError> {
    ensure(k >= 1 && n >= 1, "k n requires k, n >= 1")?;
    ensure(k % 2 == 0 || n % 2 == 0, "k n requires at least one of k, n even")?;
    Ok(rational_closure(&[k, n])?.0)
}

/// The free 2 1 n knot: closure of the `2 1 n` tangle, `n` odd, `n + 3`
/// crossings.
pub fn make_21n(n: i64) -> Result<FreeDiagram, TangleError> {
    ensure(n >= 1 && n % 2 == 1, "2 1 n requires odd n >= 1")?;
    Ok(rational_closure(&[2, 1, n])?.0)
}

/// The four-tangle composite used for the rotation-invariance check: T1 and
/// T2 side by side on top, T3 between them, T4 below, wired as in the
/// reference layout. With `rotate_t3`, T3 is inserted turned by 180 degrees.
pub fn four_tangle_diagram(
    words: [&[i64]; 4],
    rotate_t3: bool,
) -> Result<FreeDiagram, TangleError> {
    let t1 = rational_tangle(words[0]);
    let mut t2 = rational_tangle(words[1]);
    let mut t3 = rational_tangle(words[2]);
    let mut t4 = rational_tangle(words[3]);
    if rotate_t3 {
        t3.rotate_180();
    }
    t2.shift_labels(t1.next_arc);
    t3.shift_labels(t2.next_arc);
    t4.shift_labels(t3.next_arc);
    let mut crossings = Vec::new();
    let mut overs = Vec::new();
    for t in [&t1, &t2, &t3, &t4] {
        crossings.extend_from_slice(&t.crossings);
        overs.extend_from_slice(&t.overs);
    }
    let mut all =
        TangleBuilder { crossings, overs, next_arc: t4.next_arc, nw: 0, ne: 0, sw: 0, se: 0 };
    for (a, b) in [
        (t1.ne, t2.nw),
        (t1.se, t2.sw),
        (t1.nw, t4.sw),
        (t1.sw, t3.nw),
        (t2.se, t3.ne),
        (t2.ne, t4.se),
        (t3.sw, t4.nw),
        (t3.se, t4.ne),
    ] {
        all.join(a, b);
    }
    compact_labels(&mut all.crossings);
    FreeDiagram::from_crossings(all.crossings).map_err(|e| match e {
        DiagramError::MultiComponent => TangleError::NotAKnot,
        other => TangleError::Diagram(other),
    })
}

/// The two sides of a flype: closure of `T` followed by one crossing,
/// versus one crossing followed by `T` rotated 180 degrees.
pub fn flype_pair(word: &[i64]) -> Result<(FreeDiagram, FreeDiagram), TangleError> {
    let mut lhs = rational_tangle(word);
    lhs.twist_right(1);
    let (left, _) = lhs.close()?;

    let mut crossing = TangleBuilder::zero();
    crossing.twist_right(1);
    let mut rotated = rational_tangle(word);
    rotated.rotate_180();
    let (right, _) = crossing.add(rotated).close()?;
    Ok((left, right))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::free_trefoil;

    #[test]
    fn fraction_examples() {
        assert_eq!(fraction(&[3, -1, 2]), Fraction::new(1, 2));
        assert_eq!(fraction(&[0]), Fraction::new(0, 1));
        for n in 1..=8 {
            assert_eq!(fraction(&[2, n]), Fraction::new(2 * n + 1, 2));
        }
        assert_eq!(fraction(&[2, 1, 5]), Fraction::new(17, 3));
    }

    #[test]
    fn schubert_examples() {
        let f = Fraction::new;
        assert!(schubert_equivalent(f(5, 2), f(5, 3), false).unwrap());
        assert!(!schubert_equivalent(f(3, 1), f(3, 2), false).unwrap());
        assert!(schubert_equivalent(f(3, 1), f(3, 2), true).unwrap());
        // (3m+2)/3 closures are never foils k/1
        for m in [1i64, 3, 5, 7] {
            let tangle = f(3 * m + 2, 3);
            let foil = f(3 * m + 2, 1);
            assert!(!schubert_equivalent(tangle, foil, true).unwrap());
        }
        assert_eq!(
            schubert_equivalent(f(-3, 1), f(3, 1), false).unwrap_err(),
            TangleError::NonpositiveP
        );
    }

    #[test]
    fn foil_three_is_the_free_trefoil() {
        let d = make_foil(3).unwrap();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.canonical_form(), free_trefoil().canonical_form());
    }

    #[test]
    fn generator_crossing_counts() {
        assert_eq!(make_foil(7).unwrap().crossing_count(), 7);
        assert_eq!(make_2n(4).unwrap().crossing_count(), 6);
        assert_eq!(make_kn(3, 4).unwrap().crossing_count(), 7);
        assert_eq!(make_21n(5).unwrap().crossing_count(), 8);
    }

    #[test]
    fn generator_parity_checks() {
        assert!(matches!(make_foil(4), Err(TangleError::ParityViolation(_))));
        assert!(matches!(make_21n(2), Err(TangleError::ParityViolation(_))));
        assert!(matches!(make_kn(3, 5), Err(TangleError::ParityViolation(_))));
        assert!(matches!(make_2n(0), Err(TangleError::ParityViolation(_))));
    }

    #[test]
    fn even_numerator_words_are_links() {
        // fraction 2/1: the Hopf link
        assert_eq!(rational_closure(&[2]).unwrap_err(), TangleError::NotAKnot);
        assert_eq!(fraction(&[2]), Fraction::new(2, 1));
    }

    #[test]
    fn closures_are_valid_knots() {
        for word in [
            vec![3],
            vec![5],
            vec![2, 2],
            vec![2, 3],
            vec![4, 3],
            vec![2, 1, 1],
            vec![2, 1, 3],
            vec![3, -1, 2],
            vec![2, 2, 2, 2],
        ] {
            let f = fraction(&word);
            assert!(f.p % 2 != 0, "word {word:?} has even numerator {f}");
            let (d, a) = rational_closure(&word).unwrap();
            assert!(d.validate().is_ok(), "word {word:?}");
            assert_eq!(a.len(), d.crossing_count());
            let n: u64 = word.iter().map(|x| x.unsigned_abs()).sum();
            assert_eq!(d.crossing_count() as u64, n);
        }
    }

    #[test]
    fn montesinos_pretzel_is_valid() {
        let (d, _) = montesinos_closure(&[vec![3], vec![3], vec![2]]).unwrap();
        assert_eq!(d.crossing_count(), 8);
        assert!(d.validate().is_ok());
        let (d2, _) = montesinos_closure(&[vec![2, 1], vec![2, 1], vec![2]]).unwrap();
        assert_eq!(d2.crossing_count(), 8);
    }

    #[test]
    fn four_tangle_diagram_is_valid() {
        let words: [&[i64]; 4] = [&[2], &[3], &[2, 1], &[2]];
        let d = four_tangle_diagram(words, false).unwrap();
        let r = four_tangle_diagram(words, true).unwrap();
        assert_eq!(d.crossing_count(), 10);
        assert_eq!(r.crossing_count(), 10);
    }

    #[test]
    fn flype_pair_is_valid() {
        let (a, b) = flype_pair(&[2, 1]).unwrap();
        assert_eq!(a.crossing_count(), 4);
        assert_eq!(b.crossing_count(), 4);
    }
}
