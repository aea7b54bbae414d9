//! Closed-form resultant counts and probability laws for the twist
//! families and connected sums, all in exact big-integer arithmetic so the
//! series remain exact out to large crossing numbers.

use num::{BigInt, BigRational, One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("parity violation: {0}")]
    ParityViolation(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

/// `C(n, k)` with out-of-range `k` giving 0.
pub fn binom(n: i64, k: i64) -> BigInt {
    if k < 0 || k > n || n < 0 {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `C(n, x)` where `x = half/2`; half-integer and out-of-range arguments
/// give 0, which the family formulas rely on at small `n`.
pub fn choose_half(n: i64, half: i64) -> BigInt {
    if half % 2 != 0 {
        return BigInt::zero();
    }
    binom(n, half / 2)
}

fn pow2(n: i64) -> BigInt {
    assert!(n >= 0);
    BigInt::one() << (n as usize)
}

fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

fn ensure(cond: bool, msg: &str) -> Result<(), FormulaError> {
    if cond {
        Ok(())
    } else {
        Err(FormulaError::ParityViolation(msg.to_string()))
    }
}

/// Total k-foil resultants (left plus right) of the free n-foil:
/// `2 C(n, (n-k)/2)`. `k = 1` counts the unknots.
pub fn foil_count(n: i64, k: i64) -> Result<BigInt, FormulaError> {
    ensure(n % 2 == 1 && k % 2 == 1 && (1..=n).contains(&k), "foil_count needs odd 1 <= k <= n")?;
    Ok(BigInt::from(2) * choose_half(n, n - k))
}

/// Expected crossing number of an n-foil resultant:
/// `2^(1-n) * sum over odd k in 3..=n of k C(n, (n-k)/2)`.
pub fn foil_expectation(n: i64) -> Result<BigRational, FormulaError> {
    ensure(n % 2 == 1 && n >= 3, "foil_expectation needs odd n >= 3")?;
    let mut acc = BigInt::zero();
    let mut k = 3;
    while k <= n {
        acc += BigInt::from(k) * choose_half(n, n - k);
        k += 2;
    }
    Ok(ratio(BigInt::from(2) * acc, pow2(n)))
}

/// The absolute maximum k-foil probability over the foil family:
/// `2^(1-k^2) C(k^2, (k^2-k)/2)`, attained at n = k^2 - 2 and n = k^2.
pub fn max_kfoil_probability(k: i64) -> Result<BigRational, FormulaError> {
    ensure(k % 2 == 1 && k >= 3, "max_kfoil_probability needs odd k >= 3")?;
    let k2 = k * k;
    Ok(ratio(BigInt::from(2) * choose_half(k2, k2 - k), pow2(k2)))
}

/// Unknots produced by the free 2 n knot: `2^(n+1) + 2 C(n, (n-1)/2)` for
/// odd n, `2^(n+1) + 2 C(n, n/2)` for even n.
pub fn two_n_unknot_count(n: i64) -> Result<BigInt, FormulaError> {
    ensure(n >= 1, "two_n_unknot_count needs n >= 1")?;
    let extra = if n % 2 == 1 { choose_half(n, n - 1) } else { choose_half(n, n) };
    Ok(pow2(n + 1) + BigInt::from(2) * extra)
}

/// Trefoils produced by the free 2 n knot: for odd n directly from the
/// unknot/trefoil theorem; for even n the trefoil is the 2 1 knot, i.e.
/// the k = 2 pairing of the family-count rule.
pub fn two_n_trefoil_count(n: i64) -> Result<BigInt, FormulaError> {
    ensure(n >= 1, "two_n_trefoil_count needs n >= 1")?;
    if n % 2 == 1 {
        Ok(BigInt::from(2) * choose_half(n, n - 1))
    } else {
        Ok(BigInt::from(2) * choose_half(n, n - 2))
    }
}

/// Resultant 2 k and 2 (k-1) knots of the free 2 n knot; both counts are
/// `2 C(n, (n-k)/2)`. `n` and `k` must share parity.
pub fn two_n_family_count(n: i64, k: i64) -> Result<(BigInt, BigInt), FormulaError> {
    ensure(n >= 1 && (0..=n).contains(&k) && n % 2 == k % 2, "two_n_family_count needs n = k mod 2, 0 <= k <= n")?;
    let c = BigInt::from(2) * choose_half(n, n - k);
    Ok((c.clone(), c))
}

/// Expected crossing number of a 2 n resultant, split by parity of n.
pub fn two_n_expectation(n: i64) -> Result<BigRational, FormulaError> {
    ensure(n >= 1, "two_n_expectation needs n >= 1")?;
    let mut acc = BigInt::zero();
    if n % 2 == 0 {
        let mut k = 2;
        while k <= n {
            acc += BigInt::from(2 * k + 3) * choose_half(n, n - k);
            k += 2;
        }
    } else {
        acc += BigInt::from(3) * choose_half(n, n - 1);
        let mut k = 3;
        while k <= n {
            acc += BigInt::from(2 * k + 3) * choose_half(n, n - k);
            k += 2;
        }
    }
    Ok(ratio(acc, pow2(n + 1)))
}

/// Unknots produced by the free k n knot. Even/even:
/// `2^k C(n, n/2) + 2^n C(k, k/2) - C(n, n/2) C(k, k/2)`; odd k, even n:
/// `2^k C(n, n/2) + 2 C(k, (k-1)/2) C(n, (n-2)/2)`.
pub fn kn_unknot_count(k: i64, n: i64) -> Result<BigInt, FormulaError> {
    ensure(k >= 1 && n >= 1, "kn_unknot_count needs k, n >= 1")?;
    match (k % 2, n % 2) {
        (0, 0) => Ok(pow2(k) * choose_half(n, n) + pow2(n) * choose_half(k, k)
            - choose_half(n, n) * choose_half(k, k)),
        (1, 0) => Ok(pow2(k) * choose_half(n, n)
            + BigInt::from(2) * choose_half(k, k - 1) * choose_half(n, n - 2)),
        (0, 1) => kn_unknot_count(n, k),
        _ => Err(FormulaError::ParityViolation("k n requires at least one of k, n even".into())),
    }
}

/// Formula counts for the free 2 1 n knot (n odd): unknots, k-foils for odd
/// k up to n + 2, figure eights, and 2 1 k knots for odd k in 3..=n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoOneNCounts {
    pub unknots: BigInt,
    pub kfoils: BTreeMap<i64, BigInt>,
    pub fig8: BigInt,
    pub two_one_k: BTreeMap<i64, BigInt>,
}

impl TwoOneNCounts {
    /// Number of assignments the formulas account for.
    pub fn classified_total(&self) -> BigInt {
        let mut acc = self.unknots.clone() + &self.fig8;
        for v in self.kfoils.values() {
            acc += v;
        }
        for v in self.two_one_k.values() {
            acc += v;
        }
        acc
    }
}

pub fn twoonen_counts(n: i64) -> Result<TwoOneNCounts, FormulaError> {
    ensure(n >= 1 && n % 2 == 1, "2 1 n requires odd n >= 1")?;
    let two = BigInt::from(2);
    let unknots = BigInt::from(12) * choose_half(n, n - 1) + &two * choose_half(n, n - 3);
    let mut kfoils = BTreeMap::new();
    let mut k = 3;
    // the +-2 tangle against an all-same n tangle reaches k = n + 2
    while k <= n + 2 {
        let count = BigInt::from(8) * choose_half(n, n - k)
            + &two * choose_half(n, n - k + 2)
            + &two * choose_half(n, n - k - 2);
        if !count.is_zero() {
            kfoils.insert(k, count);
        }
        k += 2;
    }
    let fig8 = &two * choose_half(n, n - 1);
    let mut two_one_k = BTreeMap::new();
    let mut k = 3;
    while k <= n {
        let count = &two * choose_half(n, n - k);
        if !count.is_zero() {
            two_one_k.insert(k, count);
        }
        k += 2;
    }
    Ok(TwoOneNCounts { unknots, kfoils, fig8, two_one_k })
}

/// `P(S1 # S2 -> U) = P(S1 -> U) P(S2 -> U)`.
pub fn sum_unknot_law(p1: &BigRational, p2: &BigRational) -> BigRational {
    p1 * p2
}

/// For prime K3:
/// `P = P(S1 -> U) P(S2 -> K3) + P(S1 -> K3) P(S2 -> U)`.
pub fn sum_prime_law(
    u1: &BigRational,
    k1: &BigRational,
    u2: &BigRational,
    k2: &BigRational,
) -> BigRational {
    u1 * k2 + k1 * u2
}

/// For composite K3 # K4, with `a_i = P(S_i -> K3)`, `b_i = P(S_i -> K4)`,
/// `c_i = P(S_i -> K3 # K4)`:
/// `P = u1 c2 + c1 u2 + a1 b2 + a2 b1`.
#[allow(clippy::too_many_arguments)]
pub fn sum_composite_law(
    u1: &BigRational,
    u2: &BigRational,
    a1: &BigRational,
    b1: &BigRational,
    a2: &BigRational,
    b2: &BigRational,
    c1: &BigRational,
    c2: &BigRational,
) -> BigRational {
    u1 * c2 + c1 * u2 + a1 * b2 + a2 * b1
}

/// Parameters of the recursive-sum law: `alpha = P(S -> U)`,
/// `beta = P(S -> K2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecursiveSumParams {
    alpha: BigRational,
    beta: BigRational,
    pub steps: u32,
}

impl RecursiveSumParams {
    pub fn new(alpha: BigRational, beta: BigRational, steps: u32) -> Result<Self, FormulaError> {
        let zero = BigRational::zero();
        let one = BigRational::one();
        if alpha <= zero || alpha > one {
            return Err(FormulaError::InvalidParams("alpha must be in (0, 1]".into()));
        }
        if beta < zero || &alpha + &beta > one {
            return Err(FormulaError::InvalidParams("need beta >= 0 and alpha + beta <= 1".into()));
        }
        Ok(Self { alpha, beta, steps })
    }
}

/// Closed form for the recursive sum: `P(S^N -> K2) = N alpha^(N-1) beta`.
pub fn recursive_prob(params: &RecursiveSumParams) -> BigRational {
    let n = params.steps;
    if n == 0 {
        return BigRational::zero();
    }
    let mut acc = BigRational::from(BigInt::from(n));
    for _ in 0..n - 1 {
        acc *= &params.alpha;
    }
    acc * &params.beta
}

/// The step(s) maximizing `N alpha^(N-1)`: `{N}` when
/// `(N-1)/N < alpha < N/(N+1)`, and the tied pair `{N, N+1}` when
/// `alpha = N/(N+1)` exactly.
pub fn recursive_max_step(alpha: &BigRational) -> Result<(u32, u32), FormulaError> {
    let zero = BigRational::zero();
    let one = BigRational::one();
    if alpha <= &zero || alpha >= &one {
        return Err(FormulaError::InvalidParams("alpha must be in (0, 1)".into()));
    }
    // N(alpha) = alpha / (1 - alpha)
    let t = alpha / (&one - alpha);
    if t.is_integer() {
        let n = t.to_integer();
        let n = u32::try_from(n.magnitude().clone()).unwrap_or(u32::MAX);
        Ok((n.max(1), n.max(1) + 1))
    } else {
        let n = t.floor().to_integer();
        let n = u32::try_from(n.magnitude().clone()).unwrap_or(u32::MAX);
        let n = n + 1;
        Ok((n, n))
    }
}

/// One row of the conjectured trefoil-probability envelope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsRow {
    pub n: i64,
    /// trefoil probability of the n-foil (n odd) or (n-1)-foil (n even)
    pub upper: BigRational,
    /// trefoil probability of the 2 (n-2) knot shape
    pub lower: BigRational,
}

/// The conjectured upper (foil) and lower (2 n) trefoil-probability curves,
/// as exact rationals for plot reproduction.
pub fn bounds_series(n_max: i64) -> Result<Vec<BoundsRow>, FormulaError> {
    ensure(n_max >= 3, "bounds_series needs n_max >= 3")?;
    let mut out = Vec::new();
    for n in 3..=n_max {
        let m = if n % 2 == 1 { n } else { n - 1 };
        let upper = ratio(foil_count(m, 3.min(m))?, pow2(m));
        let lower = ratio(two_n_trefoil_count(n - 2)?, pow2(n));
        out.push(BoundsRow { n, upper, lower });
    }
    Ok(out)
}

/// Probability as an exact rational from an integer count over `2^n`.
pub fn count_over_pow2(count: BigInt, n: i64) -> BigRational {
    ratio(count, pow2(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::ToPrimitive;

    fn rat(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn binomial_basics() {
        assert_eq!(binom(5, 2), BigInt::from(10));
        assert_eq!(binom(5, -1), BigInt::zero());
        assert_eq!(binom(5, 6), BigInt::zero());
        assert_eq!(choose_half(5, 3), BigInt::zero());
        assert_eq!(choose_half(5, 4), BigInt::from(10));
        // symmetry and row sums
        for n in 0..12 {
            let total: BigInt = (0..=n).map(|k| binom(n, k)).sum();
            assert_eq!(total, BigInt::one() << (n as usize));
            for k in 0..=n {
                assert_eq!(binom(n, k), binom(n, n - k));
            }
        }
    }

    #[test]
    fn foil_counts() {
        assert_eq!(foil_count(5, 3).unwrap(), BigInt::from(10));
        assert_eq!(foil_count(5, 1).unwrap(), BigInt::from(20));
        assert_eq!(foil_count(3, 3).unwrap(), BigInt::from(2));
        assert!(foil_count(4, 3).is_err());
        // totals over odd k sum to 2^n
        for n in [3i64, 5, 7, 9, 11] {
            let mut total = BigInt::zero();
            let mut k = 1;
            while k <= n {
                total += foil_count(n, k).unwrap();
                k += 2;
            }
            assert_eq!(total, BigInt::one() << (n as usize));
        }
    }

    #[test]
    fn foil_expectations() {
        assert_eq!(foil_expectation(3).unwrap(), rat(3, 4));
        assert_eq!(foil_expectation(5).unwrap(), rat(5, 4));
        assert_eq!(foil_expectation(9).unwrap(), rat(63, 32)); // 1.96875
    }

    #[test]
    fn max_trefoil_probability() {
        let p = max_kfoil_probability(3).unwrap();
        assert_eq!(p, rat(21, 64)); // 0.328125
        // attained at n = k^2 - 2 and n = k^2
        let at7 = BigRational::new(foil_count(7, 3).unwrap(), BigInt::from(128));
        let at9 = BigRational::new(foil_count(9, 3).unwrap(), BigInt::from(512));
        assert_eq!(at7, p);
        assert_eq!(at9, p);
        let at5 = BigRational::new(foil_count(5, 3).unwrap(), BigInt::from(32));
        assert!(at5 < p);
    }

    #[test]
    fn two_n_counts() {
        assert_eq!(two_n_unknot_count(2).unwrap(), BigInt::from(12));
        assert_eq!(two_n_unknot_count(3).unwrap(), BigInt::from(22));
        assert_eq!(two_n_unknot_count(1).unwrap(), BigInt::from(6));
        let (a, b) = two_n_family_count(2, 2).unwrap();
        assert_eq!((a, b), (BigInt::from(2), BigInt::from(2)));
        let (a, b) = two_n_family_count(3, 1).unwrap();
        assert_eq!((a, b), (BigInt::from(6), BigInt::from(6)));
        assert!(two_n_family_count(3, 2).is_err());
    }

    #[test]
    fn two_n_expectations() {
        assert_eq!(two_n_expectation(2).unwrap(), rat(7, 8));
        assert_eq!(two_n_expectation(3).unwrap(), rat(9, 8));
        assert_eq!(two_n_expectation(6).unwrap(), rat(186, 128)); // 1.453125
    }

    #[test]
    fn kn_unknots() {
        assert_eq!(kn_unknot_count(2, 2).unwrap(), BigInt::from(12));
        assert_eq!(kn_unknot_count(4, 2).unwrap(), BigInt::from(44));
        assert_eq!(kn_unknot_count(3, 2).unwrap(), BigInt::from(22));
        // even/even symmetry
        assert_eq!(kn_unknot_count(2, 4).unwrap(), kn_unknot_count(4, 2).unwrap());
        assert!(kn_unknot_count(3, 5).is_err());
    }

    #[test]
    fn twoonen_small_cases() {
        let c1 = twoonen_counts(1).unwrap();
        assert_eq!(c1.unknots, BigInt::from(12));
        assert_eq!(c1.kfoils[&3], BigInt::from(2));
        assert_eq!(c1.fig8, BigInt::from(2));
        assert!(c1.two_one_k.is_empty());
        assert_eq!(c1.classified_total(), BigInt::from(16));

        let c3 = twoonen_counts(3).unwrap();
        assert_eq!(c3.unknots, BigInt::from(38)); // 12*3 + 2*1

        let c7 = twoonen_counts(7).unwrap();
        assert_eq!(c7.classified_total(), BigInt::from(966));
    }

    #[test]
    fn connected_sum_laws() {
        let u = rat(3, 4);
        assert_eq!(sum_unknot_law(&u, &u), rat(9, 16)); // 56.25%
        let t = rat(1, 4);
        assert_eq!(sum_prime_law(&u, &t, &u, &t), rat(3, 8)); // 37.5%
        // P(S#3_1 -> U) = P(S#4_1 -> U) since both partners have u = 3/4
        let s = rat(5, 8);
        assert_eq!(sum_unknot_law(&s, &u), sum_unknot_law(&s, &rat(12, 16)));
    }

    #[test]
    fn recursive_sum_values() {
        let p = |n| {
            recursive_prob(&RecursiveSumParams::new(rat(3, 4), rat(1, 4), n).unwrap())
        };
        assert_eq!(p(0), rat(0, 1));
        assert_eq!(p(1), rat(1, 4));
        assert_eq!(p(2), rat(3, 8)); // 0.375
        assert_eq!(p(3), rat(27, 64)); // 0.421875
    }

    #[test]
    fn recursive_max_steps() {
        assert_eq!(recursive_max_step(&rat(3, 4)).unwrap(), (3, 4));
        assert_eq!(recursive_max_step(&rat(2, 5)).unwrap(), (1, 1));
        assert_eq!(recursive_max_step(&rat(3, 5)).unwrap(), (2, 2));
        assert!(recursive_max_step(&rat(1, 1)).is_err());
    }

    #[test]
    fn recursive_sequence_rises_then_falls() {
        for (num, den) in [(3i64, 10i64), (3, 5), (7, 10), (3, 4)] {
            let alpha = rat(num, den);
            let beta = (BigRational::one() - &alpha).min(rat(1, 4));
            let seq: Vec<BigRational> = (0..12)
                .map(|n| {
                    recursive_prob(&RecursiveSumParams::new(alpha.clone(), beta.clone(), n).unwrap())
                })
                .collect();
            let (lo, hi) = recursive_max_step(&alpha).unwrap();
            for w in 1..seq.len() - 1 {
                let (a, b) = (&seq[w], &seq[w + 1]);
                if (w as u32) < lo {
                    assert!(a < b, "alpha={alpha} step {w}");
                } else if (w as u32) >= hi {
                    assert!(a > b, "alpha={alpha} step {w}");
                } else {
                    assert_eq!(a, b, "alpha={alpha} tie at {w}");
                }
            }
        }
    }

    #[test]
    fn bounds_series_values() {
        let rows = bounds_series(75).unwrap();
        let row7 = rows.iter().find(|r| r.n == 7).unwrap();
        assert_eq!(row7.upper, rat(21, 64)); // 0.328125
        assert_eq!(row7.lower, rat(1, 64).reduced() * BigRational::from(BigInt::from(10))); // 20/128
        assert_eq!(row7.lower, rat(20, 128));
        let row3 = rows.iter().find(|r| r.n == 3).unwrap();
        assert_eq!(row3.upper, rat(1, 4));
        assert_eq!(row3.lower, rat(2, 8));
        // exact big rationals at n = 75, no overflow; both curves in (0, 1)
        let row75 = rows.last().unwrap();
        assert!(row75.upper.to_f64().unwrap() > 0.0);
        assert!(row75.lower < row75.upper);
    }

    #[test]
    fn foil_trefoil_probability_monotone_after_seven() {
        let mut prev: Option<BigRational> = None;
        let mut n = 9;
        while n <= 41 {
            let p = count_over_pow2(foil_count(n, 3).unwrap(), n);
            if let Some(prev) = prev {
                assert!(p < prev, "n={n}");
            }
            prev = Some(p);
            n += 2;
        }
    }

    #[test]
    fn two_n_unknot_probability_decreasing_above_half() {
        let half = rat(1, 2);
        let mut prev: Option<BigRational> = None;
        for n in 1..=40 {
            let p = count_over_pow2(two_n_unknot_count(n).unwrap(), n + 2);
            assert!(p > half, "n={n}");
            if let Some(prev) = prev {
                assert!(p <= prev, "n={n}");
            }
            prev = Some(p);
        }
    }
}
