//! Far-difference (signed Fibonacci) representations: every two terms of
//! the same sign differ in index by at least 4, opposite signs by at least
//! 3. Construction, validation, the exact trivariate count tables
//! `p_{n,k,l}` and their bivariate statistics.
//!
//! Fibonacci indexing follows the `F_1 = 1, F_2 = 2` normalization used by
//! the rest of the crate.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::num_util::ratio_to_f64;

const SAME_SIGN_GAP: u32 = 4;
const OPPOSITE_SIGN_GAP: u32 = 3;

/// Growing tables of `F_n` and `S_n = F_n + F_{n-4} + F_{n-8} + ...`.
struct FibTables {
    fibs: Vec<BigUint>, // fibs[i] = F_{i+1}
    s: Vec<BigUint>,    // s[i] = S_{i+1}
}

impl FibTables {
    fn new() -> Self {
        FibTables {
            fibs: vec![BigUint::one(), BigUint::from(2u32)],
            s: vec![BigUint::one(), BigUint::from(2u32)],
        }
    }

    fn grow_to(&mut self, n: usize) {
        while self.fibs.len() < n {
            let len = self.fibs.len();
            let next = &self.fibs[len - 1] + &self.fibs[len - 2];
            let s_next = if len >= 4 {
                &next + &self.s[len - 4]
            } else {
                next.clone()
            };
            self.fibs.push(next);
            self.s.push(s_next);
        }
    }

    fn fib(&mut self, n: usize) -> &BigUint {
        self.grow_to(n);
        &self.fibs[n - 1]
    }

    fn s_n(&mut self, n: usize) -> &BigUint {
        self.grow_to(n);
        &self.s[n - 1]
    }

    /// Smallest n with `S_n >= value` (value > 0).
    fn leading_index(&mut self, value: &BigUint) -> usize {
        while self.s.last().unwrap() < value {
            self.grow_to(self.fibs.len() + 8);
        }
        self.s.partition_point(|s| s < value) + 1
    }
}

/// `S_n` for any integer n; zero when n <= 0.
pub fn s_n(n: i64) -> BigUint {
    if n <= 0 {
        return BigUint::zero();
    }
    FibTables::new().s_n(n as usize).clone()
}

/// `F_n` under the crate's normalization.
pub fn fibonacci(n: usize) -> BigUint {
    assert!(n >= 1);
    FibTables::new().fib(n).clone()
}

/// A signed sum of Fibonacci numbers, indices strictly decreasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedDecomposition {
    terms: Vec<(u32, i8)>,
}

impl SignedDecomposition {
    /// Terms must be in strictly decreasing index order with signs in
    /// {-1, +1}; gap validity is deliberately not enforced here so that
    /// [`fd_is_valid`] has something to decide.
    pub fn from_terms(terms: Vec<(u32, i8)>) -> Self {
        assert!(terms.iter().all(|&(i, s)| i >= 1 && (s == 1 || s == -1)));
        assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        SignedDecomposition { terms }
    }

    pub fn empty() -> Self {
        SignedDecomposition { terms: Vec::new() }
    }

    pub fn terms(&self) -> &[(u32, i8)] {
        &self.terms
    }

    pub fn value(&self) -> BigInt {
        let mut tab = FibTables::new();
        let mut acc = BigInt::zero();
        for &(idx, sign) in &self.terms {
            let f = BigInt::from(tab.fib(idx as usize).clone());
            if sign > 0 {
                acc += f;
            } else {
                acc -= f;
            }
        }
        acc
    }

    pub fn positive_count(&self) -> u64 {
        self.terms.iter().filter(|&&(_, s)| s > 0).count() as u64
    }

    pub fn negative_count(&self) -> u64 {
        self.terms.iter().filter(|&&(_, s)| s < 0).count() as u64
    }
}

/// Gap constraints over all pairs; adjacent pairs suffice since indices are
/// sorted.
pub fn fd_is_valid(sd: &SignedDecomposition) -> bool {
    sd.terms.windows(2).all(|w| {
        let gap = w[0].0 - w[1].0;
        if w[0].1 == w[1].1 {
            gap >= SAME_SIGN_GAP
        } else {
            gap >= OPPOSITE_SIGN_GAP
        }
    })
}

/// Far-difference representation of any integer. The leading index n is
/// located by the interval `S_{n-1} < |N| <= S_n`, the leading Fibonacci
/// number is peeled off and the loop continues on the (possibly negated)
/// remainder; negative inputs fall out of the same loop by sign symmetry.
/// Gap constraints and exact value are asserted post hoc, turning the
/// uniqueness guarantee into a runtime check. `N = 0` is the empty
/// representation.
pub fn fd_decompose(value: &BigInt) -> SignedDecomposition {
    let mut tab = FibTables::new();
    let mut terms: Vec<(u32, i8)> = Vec::new();
    let mut rem = value.clone();
    while !rem.is_zero() {
        let sign: i8 = if rem.is_positive() { 1 } else { -1 };
        let n = tab.leading_index(rem.magnitude());
        terms.push((n as u32, sign));
        let f = BigInt::from(tab.fib(n).clone());
        if sign > 0 {
            rem -= f;
        } else {
            rem += f;
        }
    }
    let sd = SignedDecomposition::from_terms(terms);
    assert!(fd_is_valid(&sd), "constructed representation violates gaps");
    assert_eq!(&sd.value(), value, "round trip failed");
    sd
}

/// All valid far-difference representations whose leading term is `+F_n`
/// (exactly the integers in `(S_{n-1}, S_n]`).
pub fn enumerate_leading(n: usize) -> Vec<SignedDecomposition> {
    let mut out = Vec::new();
    let mut terms = vec![(n as u32, 1i8)];
    dfs_extend(&mut terms, &mut out);
    out
}

/// All valid representations with indices `<= max_index`, including the
/// empty representation of 0 and negative-leading ones.
pub fn enumerate_all(max_index: usize) -> Vec<SignedDecomposition> {
    let mut out = vec![SignedDecomposition::empty()];
    for lead in 1..=max_index {
        for sign in [1i8, -1] {
            let mut terms = vec![(lead as u32, sign)];
            dfs_extend(&mut terms, &mut out);
        }
    }
    out
}

fn dfs_extend(terms: &mut Vec<(u32, i8)>, out: &mut Vec<SignedDecomposition>) {
    out.push(SignedDecomposition {
        terms: terms.clone(),
    });
    let (last_idx, last_sign) = *terms.last().unwrap();
    for idx in (1..last_idx).rev() {
        let gap = last_idx - idx;
        for sign in [1i8, -1] {
            let need = if sign == last_sign {
                SAME_SIGN_GAP
            } else {
                OPPOSITE_SIGN_GAP
            };
            if gap >= need {
                terms.push((idx, sign));
                dfs_extend(terms, out);
                terms.pop();
            }
        }
    }
}

/// Exact counts `p_{n,k,l}` of representations in `(S_{n-1}, S_n]` with k
/// positive and l negative summands.
#[derive(Clone, Debug)]
pub struct FarDiffTable {
    level: usize,
    counts: Vec<Vec<BigUint>>, // counts[k][l]
    total: BigUint,
}

impl FarDiffTable {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn count(&self, k: usize, l: usize) -> BigUint {
        self.counts
            .get(k)
            .and_then(|row| row.get(l))
            .cloned()
            .unwrap_or_default()
    }

    pub fn counts(&self) -> &[Vec<BigUint>] {
        &self.counts
    }

    /// `S_n - S_{n-1}`.
    pub fn total(&self) -> &BigUint {
        &self.total
    }

    pub fn support(&self) -> impl Iterator<Item = (usize, usize, &BigUint)> {
        self.counts.iter().enumerate().flat_map(|(k, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(move |(l, c)| (k, l, c))
        })
    }
}

fn exhaustive_row(n: usize, dim: usize) -> Vec<Vec<BigUint>> {
    let mut row = vec![vec![BigUint::zero(); dim]; dim];
    for sd in enumerate_leading(n) {
        row[sd.positive_count() as usize][sd.negative_count() as usize] += 1u32;
    }
    row
}

/// Exact table at level n via the swap recurrence
/// `p_{n,k,l} = p_{n-1,k,l} + p_{n-4,k-1,l} + p_{n-3,l,k-1}` (n >= 5),
/// seeded exhaustively for `n <= 4`. The total is asserted equal to
/// `S_n - S_{n-1}` at every level, and `k = 0` stays empty: everything in
/// the interval leads with `+F_n`.
pub fn fd_table(n: usize) -> FarDiffTable {
    assert!(n >= 1);
    let dim = n / 4 + 2;
    let mut tab = FibTables::new();
    let mut recent: Vec<Vec<Vec<BigUint>>> = Vec::new(); // recent[0] = latest
    let mut current = Vec::new();
    for t in 1..=n {
        let row = if t <= 4 {
            exhaustive_row(t, dim)
        } else {
            let prev1 = &recent[0];
            let prev3 = &recent[2];
            let prev4 = &recent[3];
            let mut row = vec![vec![BigUint::zero(); dim]; dim];
            for k in 0..dim {
                for l in 0..dim {
                    let mut acc = prev1[k][l].clone();
                    if k >= 1 {
                        acc += &prev4[k - 1][l];
                        acc += &prev3[l][k - 1]; // note the k/l swap
                    }
                    row[k][l] = acc;
                }
            }
            row
        };
        let total: BigUint = row.iter().flatten().sum();
        let expect = tab.s_n(t).clone() - s_n(t as i64 - 1);
        assert_eq!(total, expect, "table total != S_n - S_(n-1) at {t}");
        assert!(row[0].iter().all(|c| c.is_zero()), "k = 0 must be empty");
        if t == n {
            current = row.clone();
        }
        recent.insert(0, row);
        recent.truncate(4);
    }
    let total = current.iter().flatten().sum();
    FarDiffTable {
        level: n,
        counts: current,
        total,
    }
}

/// Bivariate statistics of (K_n, L_n): exact rationals with float views.
#[derive(Clone, Debug)]
pub struct FarDiffStats {
    pub ek: BigRational,
    pub el: BigRational,
    pub var_k: BigRational,
    pub var_l: BigRational,
    pub cov_kl: BigRational,
    /// Pearson correlation of (K, L); absent when a variance is zero.
    pub corr_kl: Option<f64>,
    /// Pearson correlation of (K+L, K-L).
    pub corr_sum_diff: Option<f64>,
}

impl FarDiffStats {
    pub fn ek_f64(&self) -> f64 {
        ratio_to_f64(&self.ek)
    }

    pub fn el_f64(&self) -> f64 {
        ratio_to_f64(&self.el)
    }

    pub fn var_k_f64(&self) -> f64 {
        ratio_to_f64(&self.var_k)
    }

    pub fn var_l_f64(&self) -> f64 {
        ratio_to_f64(&self.var_l)
    }
}

pub fn fd_stats(table: &FarDiffTable) -> FarDiffStats {
    assert!(!table.total.is_zero());
    let total = BigInt::from(table.total.clone());
    let mut sums = [BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero()];
    // E[K], E[L], E[K^2], E[L^2], E[KL]
    for (k, l, c) in table.support() {
        let c = BigInt::from(c.clone());
        let (k, l) = (BigInt::from(k), BigInt::from(l));
        sums[0] += &c * &k;
        sums[1] += &c * &l;
        sums[2] += &c * &k * &k;
        sums[3] += &c * &l * &l;
        sums[4] += &c * &k * &l;
    }
    let m = |i: usize| BigRational::new(sums[i].clone(), total.clone());
    let (ek, el) = (m(0), m(1));
    let var_k = m(2) - &ek * &ek;
    let var_l = m(3) - &el * &el;
    let cov_kl = m(4) - &ek * &el;
    let corr_kl = if var_k.is_zero() || var_l.is_zero() {
        None
    } else {
        Some(ratio_to_f64(&cov_kl) / (ratio_to_f64(&var_k) * ratio_to_f64(&var_l)).sqrt())
    };
    // Cov(K+L, K-L) = Var K - Var L
    let var_sum = &var_k + &var_l + &cov_kl + &cov_kl;
    let var_diff = &var_k + &var_l - &cov_kl - &cov_kl;
    let corr_sum_diff = if var_sum.is_zero() || var_diff.is_zero() {
        None
    } else {
        Some(
            ratio_to_f64(&(&var_k - &var_l))
                / (ratio_to_f64(&var_sum) * ratio_to_f64(&var_diff)).sqrt(),
        )
    };
    FarDiffStats {
        ek,
        el,
        var_k,
        var_l,
        cov_kl,
        corr_kl,
        corr_sum_diff,
    }
}

// ---------------------------------------------------------------------------
// generating-function cross-check

type XyPoly = Vec<Vec<BigInt>>; // [k][l]

fn xy_zero(kd: usize, ld: usize) -> XyPoly {
    vec![vec![BigInt::zero(); ld]; kd]
}

fn xy_acc(acc: &mut XyPoly, p: &XyPoly, shift_k: usize, shift_l: usize, scale: i64) {
    for (k, row) in p.iter().enumerate() {
        for (l, c) in row.iter().enumerate() {
            if !c.is_zero() {
                acc[k + shift_k][l + shift_l] += c * scale;
            }
        }
    }
}

/// Rows `p_{n,k,l}` for n = 1..=n_max via the generating-function route.
///
/// Eliminating the k/l swap by pairing the recurrence with its own
/// x/y-swapped image yields a single linear recurrence of memory 8 with
/// symmetric polynomial coefficients (the denominator
/// `(1-z-xz^4)(1-z-yz^4) - xyz^6` of the trivariate generating function).
/// Seeds for n <= 8 come from exhaustive enumeration, so this path shares
/// no code with [`fd_table`]'s DP.
pub fn fd_gf_series(n_max: usize) -> Vec<Vec<Vec<BigUint>>> {
    assert!(n_max >= 1);
    let dim = n_max / 4 + 3;
    let mut g: Vec<XyPoly> = vec![xy_zero(dim, dim)]; // g[0] unused (level 0)
    for n in 1..=n_max.min(8) {
        let mut p = xy_zero(dim, dim);
        for sd in enumerate_leading(n) {
            p[sd.positive_count() as usize][sd.negative_count() as usize] += 1;
        }
        g.push(p);
    }
    for n in 9..=n_max {
        // G_n = 2 G_{n-1} - G_{n-2} + (x+y)(G_{n-4} - G_{n-5})
        //       + xy (G_{n-6} - G_{n-8})
        let mut p = xy_zero(dim, dim);
        xy_acc(&mut p, &g[n - 1], 0, 0, 2);
        xy_acc(&mut p, &g[n - 2], 0, 0, -1);
        xy_acc(&mut p, &g[n - 4], 1, 0, 1);
        xy_acc(&mut p, &g[n - 4], 0, 1, 1);
        xy_acc(&mut p, &g[n - 5], 1, 0, -1);
        xy_acc(&mut p, &g[n - 5], 0, 1, -1);
        xy_acc(&mut p, &g[n - 6], 1, 1, 1);
        xy_acc(&mut p, &g[n - 8], 1, 1, -1);
        g.push(p);
    }
    g.into_iter()
        .skip(1)
        .map(|p| {
            p.into_iter()
                .map(|row| {
                    row.into_iter()
                        .map(|c| {
                            assert!(!c.is_negative(), "negative series coefficient");
                            c.to_biguint().unwrap()
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sd(terms: &[(u32, i8)]) -> SignedDecomposition {
        SignedDecomposition::from_terms(terms.to_vec())
    }

    #[test]
    fn s_n_examples() {
        assert_eq!(s_n(5), BigUint::from(9u32)); // F_5 + F_1 = 8 + 1
        assert_eq!(s_n(4), BigUint::from(5u32));
        assert_eq!(s_n(0), BigUint::zero());
        assert_eq!(s_n(-3), BigUint::zero());
    }

    #[test]
    fn interval_identity() {
        // S_{n-1} = F_n - S_{n-3} - 1
        for n in 4..=60i64 {
            let lhs = s_n(n - 1);
            let rhs = fibonacci(n as usize) - s_n(n - 3) - BigUint::one();
            assert_eq!(lhs, rhs, "n={n}");
        }
    }

    #[test]
    fn decompose_examples() {
        assert_eq!(fd_decompose(&BigInt::from(4)).terms(), &[(4, 1), (1, -1)]);
        assert_eq!(fd_decompose(&BigInt::from(12)).terms(), &[(6, 1), (1, -1)]);
        assert_eq!(fd_decompose(&BigInt::from(2)).terms(), &[(2, 1)]);
        assert_eq!(fd_decompose(&BigInt::from(-4)).terms(), &[(4, -1), (1, 1)]);
        assert!(fd_decompose(&BigInt::zero()).terms().is_empty());
    }

    #[test]
    fn validity_examples() {
        assert!(fd_is_valid(&sd(&[(6, 1), (1, -1)])));
        assert!(!fd_is_valid(&sd(&[(5, 1), (2, 1)])));
        assert!(fd_is_valid(&sd(&[(5, 1), (2, -1)])));
        assert!(fd_is_valid(&SignedDecomposition::empty()));
    }

    #[test]
    fn table_base_levels() {
        let t1 = fd_table(1);
        assert_eq!(t1.count(1, 0), BigUint::one());
        assert_eq!(t1.total(), &BigUint::one());

        let t4 = fd_table(4);
        assert_eq!(t4.total(), &BigUint::from(2u32));
        assert_eq!(t4.count(1, 0), BigUint::one()); // N = 5
        assert_eq!(t4.count(1, 1), BigUint::one()); // N = 4 = 5 - 1
    }

    #[test]
    fn table_matches_exhaustive() {
        for n in 5..=14usize {
            let t = fd_table(n);
            let dim = n / 4 + 2;
            assert_eq!(t.counts(), &exhaustive_row(n, dim), "n={n}");
        }
    }

    #[test]
    fn gf_series_matches_tables() {
        let rows = fd_gf_series(20);
        for n in 1..=20usize {
            let t = fd_table(n);
            for (k, l, c) in t.support() {
                assert_eq!(&rows[n - 1][k][l], c, "n={n} k={k} l={l}");
            }
            let gf_total: BigUint = rows[n - 1].iter().flatten().sum();
            assert_eq!(&gf_total, t.total(), "n={n}");
        }
    }

    #[test]
    fn uniqueness_small_range() {
        // every |N| <= S_10 is hit by exactly one valid representation
        let bound = s_n(10);
        let mut seen = std::collections::HashMap::new();
        for sd in enumerate_all(10) {
            if fd_is_valid(&sd) {
                let v = sd.value();
                assert!(seen.insert(v.clone(), sd).is_none(), "duplicate for {v}");
            }
        }
        let bound = BigInt::from(bound);
        let mut v = -bound.clone();
        while v <= bound {
            let rep = seen.get(&v).unwrap_or_else(|| panic!("missing {v}"));
            assert_eq!(rep, &fd_decompose(&v));
            v += 1;
        }
    }

    #[test]
    fn stats_small_level() {
        let t = fd_table(5);
        let s = fd_stats(&t);
        // levels 5 counts: (1,0):1, (1,1):2, (2,0):1 — totals 4
        assert_eq!(s.ek, BigRational::new(BigInt::from(5), BigInt::from(4)));
        assert_eq!(s.el, BigRational::new(BigInt::from(1), BigInt::from(2)));
        assert!(s.corr_kl.is_some());
    }
}
