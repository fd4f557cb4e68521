//! Desk-scale checks of the infinite examples in exact arithmetic.
//!
//! Everything here is generic over [`ExactScalar`]; the crate root exports
//! `Rational` (`i64` fractions), `Rational128` and `BigRational`.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::multifunction::PointMap;
use crate::splithomeo::{validate_reglue, ReglueDatum};
use crate::topology::{quotient_space, FinSpace};

/// An ordered field element with exact arithmetic.
pub trait ExactScalar: Clone + Ord + num_traits::Num + fmt::Debug {
    fn from_u64(n: u64) -> Self;
    /// The value as a `u64` if it is a non-negative integer that fits.
    fn as_whole(&self) -> Option<u64>;
    /// `"p/q"` in lowest terms.
    fn to_pq(&self) -> String;
}

impl<I> ExactScalar for Ratio<I>
where
    I: Integer + Clone + fmt::Display + fmt::Debug + FromPrimitive + ToPrimitive,
{
    fn from_u64(n: u64) -> Self {
        Ratio::from_integer(I::from_u64(n).expect("integer type holds u64 inputs"))
    }

    fn as_whole(&self) -> Option<u64> {
        if self.denom().is_one() {
            self.numer().to_u64()
        } else {
            None
        }
    }

    fn to_pq(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }
}

fn int<T: ExactScalar>(n: u64) -> T {
    T::from_u64(n)
}

fn frac<T: ExactScalar>(p: u64, q: u64) -> T {
    int::<T>(p) / int::<T>(q)
}

fn abs_diff<T: ExactScalar>(a: &T, b: &T) -> T {
    if a >= b {
        a.clone() - b.clone()
    } else {
        b.clone() - a.clone()
    }
}

fn pair<T: ExactScalar>(a: &T, b: &T) -> String {
    format!("({}, {})", a.to_pq(), b.to_pq())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Evidence {
    pub input: String,
    pub output: String,
    pub check: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WitnessVerdict {
    /// Every check up to the requested depth agrees with the claim. A finite
    /// depth never proves an asymptotic statement.
    #[serde(rename = "consistent at depth")]
    ConsistentAtDepth,
    #[serde(rename = "fail")]
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub claim: String,
    pub depth: u64,
    pub verdict: WitnessVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub star_size: Option<usize>,
    pub evidence: Vec<Evidence>,
}

impl WitnessReport {
    pub fn passes(&self) -> bool {
        self.verdict == WitnessVerdict::ConsistentAtDepth
    }
}

struct Collector {
    ok: bool,
    evidence: Vec<Evidence>,
}

impl Collector {
    fn new() -> Self {
        Collector {
            ok: true,
            evidence: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, input: String, output: String, check: impl Into<String>) {
        let check = check.into();
        self.ok &= ok;
        let check = if ok { check } else { format!("FAILED: {check}") };
        self.evidence.push(Evidence { input, output, check });
    }

    fn finish(self, claim: &str, depth: u64, star_size: Option<usize>) -> WitnessReport {
        WitnessReport {
            claim: claim.to_string(),
            depth,
            verdict: if self.ok {
                WitnessVerdict::ConsistentAtDepth
            } else {
                WitnessVerdict::Fail
            },
            star_size,
            evidence: self.evidence,
        }
    }
}

/// Offset in the sequence index; `k ≥ 1` with `m = (n+1)(k+c) + i`.
const WEIRD_OFFSET: u64 = 1;

/// `x_k^{n,i} = 1/n − 1/((n+1)·m)` with `m = (n+1)(k+1) + i`.
///
/// `m` determines `(k, i)` by division with remainder, and every value lies
/// strictly between `1/n − 1/(2(n+1)²)` and `1/n`, so the blocks for
/// different `n` are disjoint and stay inside `(1/(n+1), 1/n)`.
pub fn f_weird_x<T: ExactScalar>(n: u64, i: u64, k: u64) -> T {
    assert!(n >= 1 && i <= n && k >= 1, "index out of range");
    let m = (n + 1) * (k + WEIRD_OFFSET) + i;
    frac::<T>(1, n) - frac::<T>(1, (n + 1) * m)
}

/// `(n, i, k)` with `q = x_k^{n,i}` and `n ≤ depth`, if any.
pub fn f_weird_index<T: ExactScalar>(q: &T, depth: u64) -> Option<(u64, u64, u64)> {
    for n in 1..=depth {
        let gap = frac::<T>(1, n) - q.clone();
        if gap <= T::zero() {
            continue;
        }
        let m = T::one() / (int::<T>(n + 1) * gap);
        let Some(m) = m.as_whole() else { continue };
        let (block, i) = (m / (n + 1), m % (n + 1));
        if block > WEIRD_OFFSET {
            return Some((n, i, block - WEIRD_OFFSET));
        }
    }
    None
}

/// `f_weird(q) = (q, i/n²)` on the chosen sequences and `(q, 0)` elsewhere.
pub fn f_weird_eval<T: ExactScalar>(q: &T, depth: u64) -> Result<(T, T)> {
    if *q < T::zero() || *q > T::one() {
        return Err(Error::OutOfRange(format!("{} is not in [0, 1]", q.to_pq())));
    }
    let height = match f_weird_index(q, depth) {
        Some((n, i, _)) => frac::<T>(i, n * n),
        None => T::zero(),
    };
    Ok((q.clone(), height))
}

/// Whether `x` lies in the open ball of radius `1/n` around `1/(n(n+1))`,
/// and in the one of radius `1/(n(n+1))` around `1/n`.
pub fn in_weird_balls<T: ExactScalar>(n: u64, x: &T) -> bool {
    let wide = abs_diff(x, &frac::<T>(1, n * (n + 1))) < frac::<T>(1, n);
    let narrow = abs_diff(x, &frac::<T>(1, n)) < frac::<T>(1, n * (n + 1));
    wide && narrow
}

/// Whether all `x_k^{n,i}` with `n ≤ depth_n`, `k ≤ depth_k` are distinct.
pub fn f_weird_distinct<T: ExactScalar>(depth_n: u64, depth_k: u64) -> bool {
    let mut all: Vec<T> = Vec::new();
    for n in 1..=depth_n {
        for i in 0..=n {
            for k in 1..=depth_k {
                all.push(f_weird_x(n, i, k));
            }
        }
    }
    let len = all.len();
    all.sort();
    all.dedup();
    all.len() == len
}

/// Checks `f*_weird(1/n) = {(1/n, i/n²) : i = 0..n}` through the sequences
/// `k = 1..K`: each lies in the required balls, approaches `1/n` strictly
/// monotonically and carries the height `i/n²`.
pub fn f_weird_star_check<T: ExactScalar>(n: u64, depth: u64) -> WitnessReport {
    let mut c = Collector::new();
    let claim = format!("|f*_weird(1/{n})| = {}", n + 1);
    if n == 0 || depth == 0 {
        c.record(false, format!("n = {n}, K = {depth}"), "-".into(), "n and K must be at least 1");
        return c.finish(&claim, depth, None);
    }
    let target = frac::<T>(1, n);
    let mut heights: Vec<T> = Vec::new();
    for i in 0..=n {
        let height = frac::<T>(i, n * n);
        let mut ok = true;
        let mut prev: Option<T> = None;
        let mut last = (T::zero(), T::zero(), T::zero());
        for k in 1..=depth {
            let x: T = f_weird_x(n, i, k);
            ok &= in_weird_balls(n, &x);
            let (fx, fy) = f_weird_eval(&x, n).expect("sequence lies in [0, 1]");
            ok &= fx == x && fy == height;
            let dist = target.clone() - x.clone();
            ok &= dist > T::zero();
            if let Some(p) = &prev {
                ok &= dist < *p;
            }
            prev = Some(dist.clone());
            last = (x, fy, dist);
        }
        // 1/n − x_K < 1/K: the tail is within any prescribed distance.
        ok &= last.2 < frac::<T>(1, depth);
        heights.push(height.clone());
        c.record(
            ok,
            format!("x_{depth}^({n},{i}) = {}", last.0.to_pq()),
            pair(&last.0, &last.1),
            format!(
                "in both balls, 1/n - x strictly decreasing to {}, height {}",
                last.2.to_pq(),
                height.to_pq()
            ),
        );
    }
    let (fx, fy) = f_weird_eval(&target, n).expect("1/n lies in [0, 1]");
    c.record(
        fy == T::zero(),
        format!("1/{n}"),
        pair(&fx, &fy),
        "f_weird(1/n) is the i = 0 member of the star",
    );
    heights.sort();
    heights.dedup();
    let size = heights.len();
    c.record(
        size as u64 == n + 1,
        format!("n = {n}"),
        size.to_string(),
        format!("star has n + 1 = {} distinct points", n + 1),
    );
    c.finish(&claim, depth, Some(size))
}

pub const DIVERGENCE_EXAMPLES: [&str; 3] = ["one_over_n", "quotient_line", "comb_space"];

/// Finite-depth witnesses for the three named non-multi-split examples.
pub fn divergence_witness<T: ExactScalar>(example: &str, depth: u64) -> Result<WitnessReport> {
    match example {
        "one_over_n" => Ok(one_over_n::<T>(depth)),
        "quotient_line" => Ok(quotient_line::<T>(depth)),
        "comb_space" => Ok(comb_space::<T>(depth)),
        other => Err(Error::UnknownExample(other.to_string())),
    }
}

/// `f(1/n) = 1/n` in `(0, 1]`: strictly decreasing with every term
/// positive and the tail past `m` below `1/m`, so no point of `(0, 1]`
/// attracts it.
fn one_over_n<T: ExactScalar>(depth: u64) -> WitnessReport {
    let mut c = Collector::new();
    let mut ok = depth >= 2;
    let mut prev: Option<T> = None;
    for n in 1..=depth {
        let v = frac::<T>(1, n);
        ok &= v > T::zero() && v <= T::one();
        if let Some(p) = &prev {
            ok &= v < *p;
        }
        prev = Some(v);
    }
    for m in 1..depth {
        // Every later term sits below 1/m, hence escapes [1/m, 1].
        ok &= frac::<T>(1, m + 1) < frac::<T>(1, m);
    }
    let tail = prev.unwrap_or_else(T::one);
    c.record(
        ok,
        format!("n = 1..{depth}"),
        tail.to_pq(),
        "f(1/n) = 1/n positive, strictly decreasing, tail below every 1/m; 0 is not in (0, 1]",
    );
    c.finish("f(1/n) has no cluster point in (0, 1]", depth, None)
}

/// The class `[1/n] = {1/n, n}` is sent to `n`: strictly increasing and past
/// every bound below the depth.
fn quotient_line<T: ExactScalar>(depth: u64) -> WitnessReport {
    let mut c = Collector::new();
    let mut ok = depth >= 2;
    let mut prev: Option<T> = None;
    for n in 1..=depth {
        let small = frac::<T>(1, n);
        let big = int::<T>(n);
        let v = if small > big { small.clone() } else { big.clone() };
        ok &= small * big.clone() == T::one() && v == big;
        if let Some(p) = &prev {
            ok &= v > *p;
        }
        prev = Some(v);
    }
    let last = prev.unwrap_or_else(T::zero);
    for bound in 1..depth {
        ok &= last > int::<T>(bound);
    }
    c.record(
        ok,
        format!("[1/{depth}]"),
        last.to_pq(),
        format!("f([1/n]) = n strictly increasing, exceeds every bound up to {}", depth.saturating_sub(1)),
    );
    c.finish("f([1/n]) has no cluster point", depth, None)
}

/// Cantor pairing; injective on pairs of naturals.
fn cantor(n: u64, k: u64) -> u64 {
    (n + k) * (n + k + 1) / 2 + k
}

/// `x_k^n = 1/π(n, k)` with `π` the Cantor pairing: distinct across all
/// `(n, k)`, inside `(0, 1/n)` and tending to 0 in `k`.
pub fn comb_x<T: ExactScalar>(n: u64, k: u64) -> T {
    frac::<T>(1, cantor(n, k))
}

/// The net `f([(x_k^n, 1)]) = (x_k^n, 1/n)` for `n, k ≤ N`: every value is
/// a legitimate representative of its class, the values are distinct, and
/// each `(0, 1/n)` is approached within `1/m` for every `m ≤ N`.
fn comb_space<T: ExactScalar>(depth: u64) -> WitnessReport {
    let mut c = Collector::new();
    let mut all: Vec<T> = Vec::new();
    let mut ok_rep = true;
    for n in 1..=depth {
        for k in 1..=depth {
            let x: T = comb_x(n, k);
            let h = frac::<T>(1, n);
            // [(x, 1)] = {(x, 1/j) : x ≤ 1/j}; both (x, 1) and (x, 1/n) belong.
            ok_rep &= x > T::zero() && x < h && x <= T::one();
            all.push(x);
        }
    }
    let len = all.len();
    all.sort();
    all.dedup();
    c.record(
        ok_rep && all.len() == len,
        format!("n, k = 1..{depth}"),
        format!("{len} values"),
        "x_k^n in (0, 1/n), pairwise distinct, (x_k^n, 1/n) represents [(x_k^n, 1)]",
    );
    for n in 1..=depth {
        let h = frac::<T>(1, n);
        let x: T = comb_x(n, depth);
        let mut ok = true;
        for m in 1..=depth {
            // Distance from (x, 1/n) to (0, 1/n) is x.
            ok &= x < frac::<T>(1, m);
        }
        c.record(
            ok,
            format!("(0, {})", h.to_pq()),
            pair(&x, &h),
            format!("approached within 1/m for every m up to {depth}"),
        );
    }
    c.finish(
        "every (0, 1/n) is a cluster point of f([(x_k^n, 1)])",
        depth,
        None,
    )
}

/// Two chains of `n` points cut from a circle model; `X` glues the chains
/// at both ends into one circle, `Y` closes each chain into its own circle.
pub fn circle_reglue_demo(n: usize) -> Result<ReglueDatum> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::BadSize(format!("n must be even and at least 4, got {n}")));
    }
    let top = |j: usize| j;
    let bottom = |j: usize| n + j;
    let labels: Vec<String> = (0..n)
        .map(|j| format!("t{j}"))
        .chain((0..n).map(|j| format!("b{j}")))
        .collect();
    let z = Arc::new(FinSpace::discrete_labeled("Z", labels)?);

    let interior = || (1..n - 1).flat_map(|j| [vec![top(j)], vec![bottom(j)]]);
    let mut x_classes = vec![vec![top(0), bottom(0)], vec![top(n - 1), bottom(n - 1)]];
    x_classes.extend(interior());
    let mut y_classes = vec![vec![top(0), top(n - 1)], vec![bottom(0), bottom(n - 1)]];
    y_classes.extend(interior());

    let (x, px) = quotient_space(&z, &x_classes)?;
    let (_, py) = quotient_space(&z, &y_classes)?;
    // Left end from the top chain, right end from the bottom chain.
    let pick: Vec<usize> = x_classes
        .iter()
        .enumerate()
        .map(|(c, members)| if c == 1 { members[1] } else { members[0] })
        .collect();
    let pxinv = PointMap::new(x, z.clone(), pick)?;
    let d = ReglueDatum::new(z, px, py, pxinv)?;
    let report = validate_reglue(&d);
    if !report.passes() {
        return Err(Error::InternalMismatch(format!("circle datum fails validation: {report:?}")));
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type R = Ratio<i64>;

    #[test]
    fn eval_examples() {
        let half = frac::<R>(1, 2);
        assert_eq!(f_weird_eval(&half, 40).unwrap(), (half, int::<R>(0)));
        let x: R = f_weird_x(2, 1, 1);
        assert_eq!(x, R::new(19, 42));
        assert_eq!(f_weird_eval(&x, 40).unwrap().1, R::new(1, 4));
        assert_eq!(f_weird_eval(&int::<R>(0), 40).unwrap(), (int::<R>(0), int::<R>(0)));
        assert!(matches!(f_weird_eval(&R::new(3, 2), 5), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn index_inverts_formula() {
        for n in 1..=6 {
            for i in 0..=n {
                for k in 1..=8 {
                    let x: R = f_weird_x(n, i, k);
                    assert_eq!(f_weird_index(&x, 6), Some((n, i, k)));
                }
            }
        }
    }

    #[test]
    fn star_check_small() {
        let r = f_weird_star_check::<R>(1, 100);
        assert!(r.passes(), "{r:?}");
        assert_eq!(r.star_size, Some(2));
        let r = f_weird_star_check::<R>(5, 100);
        assert_eq!(r.star_size, Some(6));
        assert!(r.passes());
    }

    #[test]
    fn scalar_types_agree() {
        let a = f_weird_star_check::<R>(7, 20);
        let b = f_weird_star_check::<Ratio<i128>>(7, 20);
        let c = f_weird_star_check::<BigRational>(7, 20);
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn divergence_examples() {
        for ex in DIVERGENCE_EXAMPLES {
            let r = divergence_witness::<R>(ex, 30).unwrap();
            assert!(r.passes(), "{ex}: {r:?}");
            assert!(!r.evidence.is_empty());
        }
        assert!(matches!(
            divergence_witness::<R>("nope", 3),
            Err(Error::UnknownExample(_))
        ));
    }

    #[test]
    fn pq_serialization() {
        assert_eq!(int::<R>(3).to_pq(), "3/1");
        assert_eq!(R::new(2, 4).to_pq(), "1/2");
    }

    #[test]
    fn circle_counts() {
        let d = circle_reglue_demo(4).unwrap();
        assert_eq!((d.z().len(), d.x().len(), d.y().len()), (8, 6, 6));
        assert!(d.derived().is_bijective());
        let d = circle_reglue_demo(10).unwrap();
        assert_eq!((d.x().len(), d.y().len()), (18, 18));
        assert!(matches!(circle_reglue_demo(3), Err(Error::BadSize(_))));
        assert!(matches!(circle_reglue_demo(2), Err(Error::BadSize(_))));
    }
}
