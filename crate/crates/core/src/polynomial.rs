//! Exact integer-coefficient Laurent polynomials in the bracket variable `A`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// A Laurent polynomial over the integers, stored as a sparse map from
/// exponent to nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    // invariant: no zero coefficients are stored
    coeffs: BTreeMap<i64, i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// The monomial `c * A^e`.
    pub fn monomial(c: i64, e: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if c != 0 {
            coeffs.insert(e, c);
        }
        Self { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0) == Some(&1)
    }

    /// Iterate `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    pub fn coeff(&self, e: i64) -> i64 {
        self.coeffs.get(&e).copied().unwrap_or(0)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn add_term(&mut self, c: i64, e: i64) {
        if c == 0 {
            return;
        }
        let entry = self.coeffs.entry(e).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.coeffs.remove(&e);
        }
    }

    /// Substitutes `A -> A^{-1}`, i.e. negates every exponent. This is the
    /// effect of mirroring a knot on its bracket and Jones polynomials.
    pub fn mirror(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|(&e, &c)| (-e, c)).collect();
        Self { coeffs }
    }

    /// The lexicographically smaller of `self` and `self.mirror()` under the
    /// total order on coefficient maps. Mirror pairs share a canonical key,
    /// which is what classification by knot-up-to-mirror needs.
    pub fn canonical_key(&self) -> Self {
        let m = self.mirror();
        if poly_cmp(self, &m) == std::cmp::Ordering::Greater {
            m
        } else {
            self.clone()
        }
    }

    /// Multiply by the monomial `c * A^e` in place.
    pub fn scale(&mut self, c: i64, e: i64) {
        if c == 0 {
            self.coeffs.clear();
            return;
        }
        let coeffs = self.coeffs.iter().map(|(&k, &v)| (k + e, v * c)).collect();
        self.coeffs = coeffs;
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Render in the Jones variable `t = A^{-4}`. Returns `None` when some
    /// exponent is not a multiple of 4 (never the case for knot Jones
    /// polynomials computed by this crate).
    pub fn to_t_string(&self) -> Option<String> {
        if self.coeffs.keys().any(|e| e % 4 != 0) {
            return None;
        }
        let terms: BTreeMap<i64, i64> = self.coeffs.iter().map(|(&e, &c)| (-e / 4, c)).collect();
        Some(render_terms(terms.iter().rev().map(|(&e, &c)| (e, c)), "t"))
    }
}

/// Fixed total order used by `canonical_key`: compare term lists
/// (highest exponent first) lexicographically by exponent, then coefficient.
fn poly_cmp(a: &LaurentPoly, b: &LaurentPoly) -> std::cmp::Ordering {
    let mut xs = a.coeffs.iter().rev();
    let mut ys = b.coeffs.iter().rev();
    loop {
        match (xs.next(), ys.next()) {
            (None, None) => return std::cmp::Ordering::Equal,
            (None, Some(_)) => return std::cmp::Ordering::Less,
            (Some(_), None) => return std::cmp::Ordering::Greater,
            (Some((ea, ca)), Some((eb, cb))) => {
                let ord = ea.cmp(eb).then(ca.cmp(cb));
                if ord != std::cmp::Ordering::Equal {
                    return ord;
                }
            }
        }
    }
}

impl PartialOrd for LaurentPoly {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LaurentPoly {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        poly_cmp(self, other)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: Self) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(c, e);
        }
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: Self) -> LaurentPoly {
        &self + &rhs
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in rhs.terms() {
            self.add_term(c, e);
        }
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: Self) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(-c, e);
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        let coeffs = self.coeffs.iter().map(|(&e, &c)| (e, -c)).collect();
        LaurentPoly { coeffs }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: Self) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ea, ca) in self.terms() {
            for (eb, cb) in rhs.terms() {
                out.add_term(ca * cb, ea + eb);
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: Self) -> LaurentPoly {
        &self * &rhs
    }
}

fn render_terms<I: Iterator<Item = (i64, i64)>>(terms: I, var: &str) -> String {
    let mut out = String::new();
    for (e, c) in terms {
        let first = out.is_empty();
        let mag = c.abs();
        if first {
            if c < 0 {
                out.push('-');
            }
        } else if c < 0 {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        if e == 0 {
            out.push_str(&mag.to_string());
        } else {
            if mag != 1 {
                out.push_str(&mag.to_string());
                out.push('*');
            }
            out.push_str(var);
            if e != 1 {
                out.push('^');
                out.push_str(&e.to_string());
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for LaurentPoly {
    /// Terms in decreasing exponent order, e.g. `A^2 - 2 + A^-2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_terms(self.coeffs.iter().rev().map(|(&e, &c)| (e, c)), "A"))
    }
}

/// Parse the `Display` rendering back into a polynomial.
pub fn parse_poly(s: &str) -> Result<LaurentPoly, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty polynomial".into());
    }
    let mut out = LaurentPoly::zero();
    // tokenize into sign-prefixed terms
    let normalized = s.replace(" - ", " + -").replace('−', "-");
    for raw in normalized.split(" + ") {
        let term = raw.trim();
        if term.is_empty() {
            return Err(format!("bad term in {s:?}"));
        }
        let (sign, body) = match term.strip_prefix('-') {
            Some(rest) => (-1i64, rest.trim()),
            None => (1i64, term),
        };
        let (coeff_str, exp_str) = match body.find('A') {
            None => (body, None),
            Some(i) => {
                let c = body[..i].trim().trim_end_matches('*').trim();
                let rest = &body[i + 1..];
                let e = match rest.strip_prefix('^') {
                    Some(e) => e.trim(),
                    None if rest.trim().is_empty() => "1",
                    None => return Err(format!("bad exponent in {term:?}")),
                };
                (c, Some(e))
            }
        };
        let c: i64 = if coeff_str.is_empty() {
            1
        } else {
            coeff_str.parse().map_err(|_| format!("bad coefficient {coeff_str:?}"))?
        };
        let e: i64 = match exp_str {
            None => 0,
            Some(e) => e.parse().map_err(|_| format!("bad exponent {e:?}"))?,
        };
        out.add_term(sign * c, e);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn a(e: i64) -> LaurentPoly {
        LaurentPoly::monomial(1, e)
    }

    /// `-A^2 - A^-2`, the value of a closed loop in the bracket state sum.
    fn loop_value() -> LaurentPoly {
        &-&a(2) + &-&a(-2)
    }

    #[test]
    fn monomial_mul_cancels_exponents() {
        assert_eq!(&a(1) * &a(-1), LaurentPoly::one());
    }

    #[test]
    fn additive_identity() {
        let p = loop_value();
        assert_eq!(&p + &LaurentPoly::zero(), p);
    }

    #[test]
    fn bracket_example_final_step() {
        // A + A^-1 (-A^2 - A^-2) = -A^-3, then times -A^4 gives A.
        let inner = &a(1) + &(&a(-1) * &loop_value());
        assert_eq!(inner, LaurentPoly::monomial(-1, -3));
        let product = &LaurentPoly::monomial(-1, 4) * &inner;
        assert_eq!(product, a(1));
    }

    #[test]
    fn mirror_negates_exponents() {
        assert_eq!(LaurentPoly::monomial(-1, -3).mirror(), LaurentPoly::monomial(-1, 3));
        assert_eq!(LaurentPoly::one().mirror(), LaurentPoly::one());
    }

    #[test]
    fn canonical_key_identifies_mirror_pairs() {
        let p = LaurentPoly::monomial(-1, -3);
        assert_eq!(p.canonical_key(), p.mirror().canonical_key());
        assert_eq!(LaurentPoly::one().canonical_key(), LaurentPoly::one());
    }

    #[test]
    fn display_ordering() {
        let p = &(&a(2) - &LaurentPoly::monomial(2, 0)) + &a(-2);
        assert_eq!(p.to_string(), "A^2 - 2 + A^-2");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!(LaurentPoly::monomial(-1, -3).to_string(), "-A^-3");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["-A^-3", "A^2 - 2 + A^-2", "0", "1", "3*A^4 + A - 7"] {
            let p = parse_poly(s).unwrap();
            assert_eq!(p.to_string(), s);
        }
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        proptest::collection::vec((-6i64..6, -4i64..4), 0..6).prop_map(|terms| {
            let mut p = LaurentPoly::zero();
            for (c, e) in terms {
                p.add_term(c, e);
            }
            p
        })
    }

    proptest! {
        #[test]
        fn ring_laws(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
            prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
            prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
            prop_assert_eq!(&p * &q, &q * &p);
            prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        }

        #[test]
        fn mirror_is_involutive_ring_hom(p in arb_poly(), q in arb_poly()) {
            prop_assert_eq!(p.mirror().mirror(), p.clone());
            prop_assert_eq!((&p * &q).mirror(), &p.mirror() * &q.mirror());
            prop_assert_eq!((&p + &q).mirror(), &p.mirror() + &q.mirror());
        }

        #[test]
        fn display_parse_round_trip(p in arb_poly()) {
            prop_assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
        }
    }
}
