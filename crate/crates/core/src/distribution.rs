//! Exact summand-count distributions `p_{n,k}`.
//!
//! Tables are built by the depth-L recurrence
//! `p_{n+1,k} = sum_{m=0}^{L-1} sum_{j=s_m}^{s_{m+1}-1} p_{n-m,k-j}`,
//! seeded from the exhaustive oracle for the first few levels so no
//! analytically derived seed is ever trusted. An independent route expands
//! the bivariate generating function as a truncated power series. Counts and
//! raw/centered moments are exact; floats appear only in standardized views
//! and the KS distance.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::num_util::{
    binomial, central_from_raw, normal_cdf, odd_double_factorial, ratio_to_f64,
};
use crate::plrs::{enumerate_legal_with_budget, PlrsSequence, PlrsSpec, ENUM_BUDGET};

/// Oracle budget for the recurrence-vs-oracle overlap window run on every
/// table build; deliberately smaller than the general enumeration budget so
/// large builds stay fast.
const OVERLAP_BUDGET: u64 = 20_000;

/// Exact counts `p_{n,k}` for one level, with `delta_n` attached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistributionTable {
    level: usize,
    counts: Vec<BigUint>, // counts[k] = p_{n,k}
    delta: BigUint,
}

impl DistributionTable {
    pub fn level(&self) -> usize {
        self.level
    }

    /// `p_{n,k}`, zero off support.
    pub fn count(&self, k: usize) -> BigUint {
        self.counts.get(k).cloned().unwrap_or_default()
    }

    /// Counts indexed by k from 0; trailing zeros trimmed.
    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn delta(&self) -> &BigUint {
        &self.delta
    }

    /// (k, count) pairs over the nonzero support, increasing k.
    pub fn support(&self) -> impl Iterator<Item = (usize, &BigUint)> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
    }
}

fn histogram(decomps: &[crate::plrs::Decomposition]) -> Vec<BigUint> {
    let mut row: Vec<BigUint> = Vec::new();
    for d in decomps {
        let k = d.summands() as usize;
        if row.len() <= k {
            row.resize(k + 1, BigUint::zero());
        }
        row[k] += 1u32;
    }
    row
}

fn trim(mut row: Vec<BigUint>) -> Vec<BigUint> {
    while row.last().map_or(false, |c| c.is_zero()) {
        row.pop();
    }
    row
}

fn row_sum(row: &[BigUint]) -> BigUint {
    row.iter().sum()
}

/// Streams exact rows `p_{1,*} .. p_{n_max,*}` to `on_row`, keeping only the
/// last L rows in memory. Seeds levels `<= L+2` from the oracle, then runs
/// the recurrence; on the overlap window `L+3 .. L+8` the recurrence output
/// is checked against the oracle wherever that fits the overlap budget.
/// `sum_k p_{n,k} = delta_n` is asserted at every level.
fn build_rows(
    spec: &PlrsSpec,
    n_max: usize,
    mut on_row: impl FnMut(usize, &[BigUint], &BigUint),
) -> Result<()> {
    assert!(n_max >= 1);
    let l = spec.depth();
    let seq = PlrsSequence::build(spec.clone(), n_max + 2)?;
    let seed_max = n_max.min(l + 2);
    let mut recent: Vec<Vec<BigUint>> = Vec::new(); // recent[0] = latest level
    for t in 1..=seed_max {
        let row = histogram(&enumerate_legal_with_budget(&seq, t, ENUM_BUDGET)?);
        assert_eq!(row_sum(&row), seq.delta(t), "seed row sum != delta");
        on_row(t, &row, &seq.delta(t));
        recent.insert(0, row);
        recent.truncate(l);
    }
    let s = spec.partial_sums();
    for t in seed_max + 1..=n_max {
        let mut width = 0usize;
        for m in 0..l {
            width = width.max(recent[m].len() + s[m + 1].max(1) as usize);
        }
        let mut row = vec![BigUint::zero(); width];
        for m in 0..l {
            let prev = &recent[m];
            for j in s[m]..s[m + 1] {
                let j = j as usize;
                for (k, p) in prev.iter().enumerate() {
                    if !p.is_zero() {
                        row[k + j] += p;
                    }
                }
            }
        }
        let row = trim(row);
        let delta = seq.delta(t);
        assert_eq!(row_sum(&row), delta, "recurrence row sum != delta at {t}");
        if t <= l + 8 {
            // overlap check against the exhaustive oracle
            if let Ok(ds) = enumerate_legal_with_budget(&seq, t, OVERLAP_BUDGET) {
                assert_eq!(trim(histogram(&ds)), row, "recurrence != oracle at {t}");
            }
        }
        on_row(t, &row, &delta);
        recent.insert(0, row);
        recent.truncate(l);
    }
    Ok(())
}

/// Exact distribution table at a single level.
pub fn build_table(spec: &PlrsSpec, n: usize) -> Result<DistributionTable> {
    let mut out = None;
    build_rows(spec, n, |t, row, delta| {
        if t == n {
            out = Some(DistributionTable {
                level: n,
                counts: trim(row.to_vec()),
                delta: delta.clone(),
            });
        }
    })?;
    Ok(out.expect("target level not produced"))
}

/// Exact means `E[K_n]` for n = 1..=n_max (index 0 holds level 1).
pub fn exact_means(spec: &PlrsSpec, n_max: usize) -> Result<Vec<BigRational>> {
    let mut means = Vec::with_capacity(n_max);
    build_rows(spec, n_max, |_, row, delta| {
        let mut acc = BigUint::zero();
        for (k, p) in row.iter().enumerate() {
            acc += p * k;
        }
        means.push(BigRational::new(
            BigInt::from(acc),
            BigInt::from(delta.clone()),
        ));
    })?;
    Ok(means)
}

/// Number of integers in `[F_n, F_{n+1})` whose Zeckendorf decomposition has
/// exactly `j` summands: `binom(n-j, j-1)`, zero out of range. The closed
/// form counts `k+1` summands at parameter `k`; this function bridges that
/// shift so `j` is the total summand count used everywhere else.
pub fn fib_count_closed_form(n: u64, j: u64) -> BigUint {
    assert!(n >= 1 && j >= 1);
    if j > n {
        return BigUint::zero();
    }
    binomial(n - j, j - 1)
}

// ---------------------------------------------------------------------------
// generating-function route

type XPoly = Vec<BigInt>; // coefficient of x^k at index k

fn xp_add_mul(acc: &mut XPoly, a: &XPoly, b: &XPoly, scale: &BigInt) {
    if a.is_empty() || b.is_empty() || scale.is_zero() {
        return;
    }
    let need = a.len() + b.len() - 1;
    if acc.len() < need {
        acc.resize(need, BigInt::zero());
    }
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        let ai = ai * scale;
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                acc[i + j] += &ai * bj;
            }
        }
    }
}

fn xp_sub_assign(acc: &mut XPoly, other: &XPoly) {
    if acc.len() < other.len() {
        acc.resize(other.len(), BigInt::zero());
    }
    for (i, o) in other.iter().enumerate() {
        acc[i] -= o;
    }
}

/// `p_{n,k}` for all `n <= n_max` via truncated power-series expansion of the
/// bivariate generating function `B(x,y) / A(x,y)` with
/// `A = 1 - sum_{m,j} x^j y^{m+1}` and the numerator built from the
/// oracle-seeded levels `n <= L`. Row `r[n-1][k]` holds `p_{n,k}`.
///
/// This is an independent computational route from [`build_table`]: the
/// denominator is inverted as a formal series and multiplied by the
/// numerator, and all coefficients are asserted non-negative.
pub fn gf_series(spec: &PlrsSpec, n_max: usize) -> Result<Vec<Vec<BigUint>>> {
    assert!(n_max >= 1);
    let l = spec.depth();
    let s = spec.partial_sums();
    let seq = PlrsSequence::build(spec.clone(), l + 2)?;

    // t[m] = sum_{j=s_m}^{s_{m+1}-1} x^j, the coefficient of y^{m+1} in 1 - A
    let mut t: Vec<XPoly> = Vec::with_capacity(l);
    for m in 0..l {
        let mut p = vec![BigInt::zero(); s[m + 1] as usize];
        for j in s[m]..s[m + 1] {
            p[j as usize] = BigInt::one();
        }
        t.push(p);
    }

    // oracle-seeded g_n for n <= L
    let mut g_seed: Vec<XPoly> = vec![Vec::new()]; // g_0 = 0
    for n in 1..=l {
        let row = histogram(&enumerate_legal_with_budget(&seq, n, ENUM_BUDGET)?);
        g_seed.push(row.into_iter().map(BigInt::from).collect());
    }

    // numerator B: sum_{n<=L} g_n y^n - sum_m t_m y^{m+1} sum_{n<L-m} g_n y^n
    let mut b: Vec<XPoly> = vec![Vec::new(); l + 1];
    for n in 1..=l {
        b[n] = g_seed[n].clone();
    }
    let one = BigInt::one();
    for m in 0..l {
        for n in 1..l - m {
            let mut prod = XPoly::new();
            xp_add_mul(&mut prod, &t[m], &g_seed[n], &one);
            xp_sub_assign(&mut b[m + 1 + n], &prod);
        }
    }

    // series inverse of A: inv_0 = 1, inv_n = sum_m t_m inv_{n-m-1}
    let mut inv: Vec<XPoly> = Vec::with_capacity(n_max + 1);
    inv.push(vec![BigInt::one()]);
    for n in 1..=n_max {
        let mut row = XPoly::new();
        for m in 0..l.min(n) {
            xp_add_mul(&mut row, &t[m], &inv[n - m - 1], &one);
        }
        inv.push(row);
    }

    // G_n = sum_{i<=min(n,L)} B_i inv_{n-i}
    let mut rows = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut row = XPoly::new();
        for (i, bi) in b.iter().enumerate().take(n.min(l) + 1).skip(1) {
            xp_add_mul(&mut row, bi, &inv[n - i], &one);
        }
        let row: Vec<BigUint> = row
            .into_iter()
            .map(|c| {
                assert!(!c.is_negative(), "negative series coefficient");
                c.to_biguint().unwrap()
            })
            .collect();
        rows.push(trim(row));
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// moments

/// Exact moments of a summand-count distribution with float views.
#[derive(Clone, Debug)]
pub struct SummandStats {
    pub mean: BigRational,
    pub variance: BigRational,
    /// `E[(K - mean)^r]` for r = 0..=max_order.
    pub centered: Vec<BigRational>,
    /// Standardized moments for orders 3..=max_order; absent when the
    /// distribution is degenerate (zero variance).
    pub standardized: Option<Vec<f64>>,
}

impl SummandStats {
    pub fn mean_f64(&self) -> f64 {
        ratio_to_f64(&self.mean)
    }

    pub fn variance_f64(&self) -> f64 {
        ratio_to_f64(&self.variance)
    }

    pub fn standardized_moment(&self, order: usize) -> Option<f64> {
        assert!(order >= 2);
        if order == 2 {
            return self.standardized.as_ref().map(|_| 1.0);
        }
        self.standardized.as_ref().map(|v| v[order - 3])
    }
}

fn raw_moments_direct(table: &DistributionTable, max_order: usize) -> Vec<BigRational> {
    let delta = BigInt::from(table.delta.clone());
    let mut out = Vec::with_capacity(max_order + 1);
    for r in 0..=max_order {
        let mut acc = BigUint::zero();
        for (k, p) in table.counts.iter().enumerate() {
            if !p.is_zero() {
                acc += p * BigUint::from(k).pow(r as u32);
            }
        }
        out.push(BigRational::new(BigInt::from(acc), delta.clone()));
    }
    out
}

/// Raw moments via the differentiating-identities route: with
/// `g(x) = sum_k p_{n,k} x^k`, iterating `h_1 = g'`, `h_r = (x h_{r-1})'`
/// gives `h_r(1) = g(1) E[K^r]`.
fn raw_moments_diff_identities(table: &DistributionTable, max_order: usize) -> Vec<BigRational> {
    let delta = BigInt::from(table.delta.clone());
    let g: XPoly = table.counts.iter().cloned().map(BigInt::from).collect();
    let eval1 = |p: &XPoly| -> BigInt { p.iter().sum() };
    let deriv = |p: &XPoly| -> XPoly {
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigInt::from(k))
            .collect()
    };
    let shift = |p: &XPoly| -> XPoly {
        let mut q = vec![BigInt::zero()];
        q.extend_from_slice(p);
        q
    };
    let mut out = vec![BigRational::new(eval1(&g), delta.clone())];
    let mut h = g;
    for r in 1..=max_order {
        h = if r == 1 { deriv(&h) } else { deriv(&shift(&h)) };
        out.push(BigRational::new(eval1(&h), delta.clone()));
    }
    out
}

/// Exact raw/centered moments up to `max_order` with standardized float
/// views. Both raw-moment routes (direct power sums and differentiating
/// identities) are computed and asserted equal.
pub fn moments(table: &DistributionTable, max_order: usize) -> SummandStats {
    assert!(max_order >= 2);
    assert!(!table.delta.is_zero(), "empty table");
    let raw = raw_moments_direct(table, max_order);
    let raw2 = raw_moments_diff_identities(table, max_order);
    assert_eq!(raw, raw2, "moment routes disagree");

    let centered: Vec<BigRational> = (0..=max_order)
        .map(|r| central_from_raw(&raw, r))
        .collect();
    let mean = raw[1].clone();
    let variance = centered[2].clone();
    assert!(!variance.is_negative());
    let standardized = if variance.is_zero() {
        None
    } else {
        let sd = ratio_to_f64(&variance).sqrt();
        Some(
            (3..=max_order)
                .map(|r| ratio_to_f64(&centered[r]) / sd.powi(r as i32))
                .collect(),
        )
    };
    SummandStats {
        mean,
        variance,
        centered,
        standardized,
    }
}

// ---------------------------------------------------------------------------
// Gaussian-convergence diagnostics

#[derive(Clone, Debug)]
pub struct GaussianMetrics {
    pub skewness: f64,
    pub excess_kurtosis: f64,
    /// (order 2m, standardized moment, Gaussian target (2m-1)!!).
    pub standardized_even_moments: Vec<(usize, f64, f64)>,
    pub ks_distance: f64,
}

/// Convergence diagnostics against the standard normal. The KS distance is
/// the sup-norm gap between the standardized exact CDF and the normal CDF,
/// evaluated at the continuity-corrected half-integer jump points (K_n is
/// lattice-valued, so the comparison point choice is ours and fixed here).
pub fn gaussian_metrics(table: &DistributionTable, max_even_order: usize) -> Result<GaussianMetrics> {
    assert!(max_even_order >= 4 && max_even_order % 2 == 0);
    let stats = moments(table, max_even_order);
    if stats.standardized.is_none() {
        return Err(Error::ZeroVariance);
    }
    let skewness = stats.standardized_moment(3).unwrap();
    let excess_kurtosis = stats.standardized_moment(4).unwrap() - 3.0;
    let standardized_even_moments: Vec<(usize, f64, f64)> = (1..=max_even_order / 2)
        .map(|m| {
            let order = 2 * m;
            (
                order,
                stats.standardized_moment(order).unwrap(),
                odd_double_factorial(m as u32),
            )
        })
        .collect();

    let mu = stats.mean_f64();
    let sd = stats.variance_f64().sqrt();
    let delta = &table.delta;
    let mut cum = BigUint::zero();
    let mut ks: f64 = 0.0;
    for (k, p) in table.counts.iter().enumerate() {
        cum += p;
        let f = crate::num_util::big_ratio_f64(&cum, delta);
        let z = (k as f64 + 0.5 - mu) / sd;
        ks = ks.max((f - normal_cdf(z)).abs());
    }
    Ok(GaussianMetrics {
        skewness,
        excess_kurtosis,
        standardized_even_moments,
        ks_distance: ks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    #[test]
    fn fibonacci_level5_table() {
        let t = build_table(&PlrsSpec::fibonacci(), 5).unwrap();
        assert_eq!(t.count(1), BigUint::one());
        assert_eq!(t.count(2), BigUint::from(3u32));
        assert_eq!(t.count(3), BigUint::one());
        assert_eq!(t.count(0), BigUint::zero());
        assert_eq!(t.delta(), &BigUint::from(5u32));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(fib_count_closed_form(5, 2), BigUint::from(3u32));
        assert_eq!(fib_count_closed_form(5, 1), BigUint::one());
        let total: BigUint = (1..=5).map(|j| fib_count_closed_form(5, j)).sum();
        assert_eq!(total, BigUint::from(5u32));
    }

    #[test]
    fn closed_form_matches_tables_to_30() {
        let spec = PlrsSpec::fibonacci();
        for n in 1..=30usize {
            let t = build_table(&spec, n).unwrap();
            for k in 1..=n {
                assert_eq!(
                    t.count(k),
                    fib_count_closed_form(n as u64, k as u64),
                    "n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn decimal_level3_is_digit_convolution() {
        // [100, 1000): leading digit 1..9, two free digits 0..9
        let t = build_table(&PlrsSpec::decimal(), 3).unwrap();
        let mut expect = vec![0u64; 28];
        for lead in 1..=9usize {
            for d1 in 0..=9usize {
                for d2 in 0..=9usize {
                    expect[lead + d1 + d2] += 1;
                }
            }
        }
        for (k, e) in expect.iter().enumerate() {
            assert_eq!(t.count(k), BigUint::from(*e), "k={k}");
        }
    }

    #[test]
    fn gf_series_matches_tables() {
        for coeffs in [vec![1, 1], vec![10], vec![2, 3, 1], vec![1, 1, 1], vec![3, 1]] {
            let spec = PlrsSpec::new(coeffs.clone()).unwrap();
            let rows = gf_series(&spec, 12).unwrap();
            for n in 1..=12usize {
                let t = build_table(&spec, n).unwrap();
                assert_eq!(rows[n - 1], t.counts(), "spec {coeffs:?} n={n}");
            }
        }
    }

    #[test]
    fn gf_series_hand_expansion() {
        // general-form series for Fibonacci is x*y/(1-y-x y^2); the paper's
        // y/(1-y-x y^2) counts one summand fewer (the mandatory leading
        // term), so its coefficient of x^1 y^3 equals p_{3,2} = 1 here
        let rows = gf_series(&PlrsSpec::fibonacci(), 3).unwrap();
        assert_eq!(rows[2], vec![BigUint::zero(), BigUint::one(), BigUint::one()]);
        // p_{2,1} = 1: the paper's form puts that count at x^0 y^2
        assert_eq!(rows[1], vec![BigUint::zero(), BigUint::one()]);
        // no integers at level 0: series starts at y^1
        assert_eq!(rows[0], vec![BigUint::zero(), BigUint::one()]);
    }

    #[test]
    fn moments_fibonacci_level5() {
        let t = build_table(&PlrsSpec::fibonacci(), 5).unwrap();
        let m = moments(&t, 4);
        assert_eq!(m.mean, BigRational::from_u64(2).unwrap());
        assert!(m.standardized.is_some());
        assert_eq!(m.standardized_moment(2), Some(1.0));
    }

    #[test]
    fn moments_decimal_exact_mean_and_variance() {
        // level n covers n digit positions: leading digit mean 5 variance
        // 20/3, each of the n-1 free digits mean 9/2 variance 33/4
        for n in [2usize, 5, 9] {
            let t = build_table(&PlrsSpec::decimal(), n).unwrap();
            let m = moments(&t, 2);
            let nine_halves = BigRational::new(BigInt::from(9), BigInt::from(2));
            let expect_mean =
                nine_halves * BigInt::from(n as u64 - 1) + BigRational::from_u64(5).unwrap();
            assert_eq!(m.mean, expect_mean, "n={n}");
            let expect_var = BigRational::new(BigInt::from(33), BigInt::from(4))
                * BigInt::from(n as u64 - 1)
                + BigRational::new(BigInt::from(20), BigInt::from(3));
            assert_eq!(m.variance, expect_var, "n={n}");
        }
    }

    #[test]
    fn degenerate_table_has_no_standardized_moments() {
        let t = DistributionTable {
            level: 1,
            counts: vec![BigUint::zero(), BigUint::zero(), BigUint::zero(), BigUint::from(7u32)],
            delta: BigUint::from(7u32),
        };
        let m = moments(&t, 4);
        assert!(m.variance.is_zero());
        assert!(m.standardized.is_none());
        assert!(matches!(gaussian_metrics(&t, 4), Err(Error::ZeroVariance)));
    }

    #[test]
    fn mean_difference_approaches_lekkerkerker_constant() {
        let means = exact_means(&PlrsSpec::fibonacci(), 100).unwrap();
        let diff = ratio_to_f64(&(&means[99] - &means[98]));
        let phi = (1.0 + 5.0_f64.sqrt()) / 2.0;
        assert!((diff - 1.0 / (phi * phi + 1.0)).abs() < 1e-6);
    }
}
