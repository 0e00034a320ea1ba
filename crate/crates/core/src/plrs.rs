//! Positive linear recurrence sequences: spec validation, exact term
//! generation, legality of coefficient strings, and the exhaustive
//! enumeration oracle.
//!
//! Indexing is 1-based throughout: `H_1 = 1` and a coefficient string
//! `a_1..a_m` denotes `sum a_i * H_{m+1-i}` (so `a_1` multiplies the
//! largest term).

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on `delta_n = H_{n+1} - H_n` for exhaustive enumeration.
pub const ENUM_BUDGET: u64 = 2_000_000;

/// Recurrence coefficients `c_1..c_L` with the cached partial sums
/// `s_0 = 0, s_m = c_1 + ... + c_m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SpecJson", into = "SpecJson")]
pub struct PlrsSpec {
    coeffs: Vec<u64>,
    partial_sums: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct SpecJson {
    coeffs: Vec<u64>,
}

impl TryFrom<SpecJson> for PlrsSpec {
    type Error = Error;
    fn try_from(j: SpecJson) -> Result<Self> {
        PlrsSpec::new(j.coeffs)
    }
}

impl From<PlrsSpec> for SpecJson {
    fn from(s: PlrsSpec) -> Self {
        SpecJson { coeffs: s.coeffs }
    }
}

impl PlrsSpec {
    pub fn new(coeffs: Vec<u64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidSpec("empty coefficient list".into()));
        }
        if coeffs[0] == 0 || *coeffs.last().unwrap() == 0 {
            return Err(Error::InvalidSpec(
                "c_1 and c_L must both be positive".into(),
            ));
        }
        let mut partial_sums = Vec::with_capacity(coeffs.len() + 1);
        partial_sums.push(0);
        let mut acc = 0u64;
        for &c in &coeffs {
            acc = acc
                .checked_add(c)
                .ok_or_else(|| Error::InvalidSpec("coefficient sum overflow".into()))?;
            partial_sums.push(acc);
        }
        Ok(PlrsSpec {
            coeffs,
            partial_sums,
        })
    }

    /// Fibonacci numbers under the `F_1 = 1, F_2 = 2` normalization.
    pub fn fibonacci() -> Self {
        PlrsSpec::new(vec![1, 1]).unwrap()
    }

    /// Powers of ten; legal decompositions are decimal expansions.
    pub fn decimal() -> Self {
        PlrsSpec::new(vec![10]).unwrap()
    }

    /// Recurrence depth L.
    pub fn depth(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// `s_0..s_L`.
    pub fn partial_sums(&self) -> &[u64] {
        &self.partial_sums
    }

    /// Decides legality of a coefficient string `a_1..a_m`.
    ///
    /// The scan commits to the maximal prefix matching `c_1..c_{s-1}`
    /// followed by a strict drop `a_s < c_s`, consumes the maximal zero run,
    /// and recurses on the remainder; a string that runs out while still
    /// matching the prefix is the `m < L` full-prefix case. Both choices are
    /// forced by the equality/strictness pattern, so the scan is
    /// deterministic.
    pub fn is_legal(&self, coeffs: &[u64]) -> bool {
        if coeffs.is_empty() {
            return false;
        }
        self.legal_block(coeffs)
    }

    fn legal_block(&self, a: &[u64]) -> bool {
        if a.is_empty() {
            return true;
        }
        if a[0] == 0 {
            return false;
        }
        let c = &self.coeffs;
        let l = c.len();
        let mut i = 0;
        loop {
            if i == a.len() {
                // matched c_1..c_m exactly with m < L (m = L is caught below)
                return a.len() < l;
            }
            if i == l {
                // a full c_1..c_L prefix could be replaced via the recurrence
                return false;
            }
            if a[i] < c[i] {
                let mut j = i + 1;
                while j < a.len() && a[j] == 0 {
                    j += 1;
                }
                return self.legal_block(&a[j..]);
            }
            if a[i] > c[i] {
                return false;
            }
            i += 1;
        }
    }
}

/// Exactly generated terms `H_1..H_count` of a PLRS. Immutable once built.
#[derive(Clone, Debug)]
pub struct PlrsSequence {
    spec: PlrsSpec,
    terms: Vec<BigUint>,
}

impl PlrsSequence {
    pub fn build(spec: PlrsSpec, count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidSpec("sequence length must be >= 1".into()));
        }
        let mut seq = PlrsSequence {
            spec,
            terms: vec![BigUint::one()],
        };
        while seq.terms.len() < count {
            seq.push_next();
        }
        Ok(seq)
    }

    fn push_next(&mut self) {
        let n = self.terms.len(); // computing H_{n+1}
        let c = self.spec.coeffs();
        let l = c.len();
        let mut next = BigUint::zero();
        if n < l {
            // H_{n+1} = c_1 H_n + ... + c_n H_1 + 1
            for i in 1..=n {
                next += &self.terms[n - i] * c[i - 1];
            }
            next += 1u32;
        } else {
            for i in 1..=l {
                next += &self.terms[n - i] * c[i - 1];
            }
        }
        debug_assert!(next > *self.terms.last().unwrap());
        self.terms.push(next);
    }

    pub fn spec(&self) -> &PlrsSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `H_n`, 1-based.
    pub fn term(&self, n: usize) -> &BigUint {
        &self.terms[n - 1]
    }

    pub fn terms(&self) -> &[BigUint] {
        &self.terms
    }

    /// `delta_n = H_{n+1} - H_n`; requires `n + 1 <= len`.
    pub fn delta(&self, n: usize) -> BigUint {
        self.term(n + 1) - self.term(n)
    }

    /// Largest `m` with `H_m <= value`, determined only when
    /// `value < H_len` so that the bracketing term is available.
    pub fn level_of(&self, value: &BigUint) -> Result<usize> {
        if value < self.term(1) {
            return Err(Error::OutOfRange(format!("{value} is below H_1 = 1")));
        }
        if value >= self.terms.last().unwrap() {
            return Err(Error::OutOfRange(format!(
                "{value} >= H_{}; extend the sequence first",
                self.len()
            )));
        }
        // partition_point gives the count of terms <= value
        let m = self.terms.partition_point(|t| t <= value);
        Ok(m)
    }
}

/// A legal decomposition: coefficient string, exact value and summand count.
/// Legality is enforced on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    coeffs: Vec<u64>,
    value: BigUint,
    summands: u64,
}

impl Decomposition {
    pub fn new(seq: &PlrsSequence, coeffs: Vec<u64>) -> Result<Self> {
        if coeffs.len() > seq.len() {
            return Err(Error::OutOfRange(format!(
                "level {} exceeds generated sequence length {}",
                coeffs.len(),
                seq.len()
            )));
        }
        if !seq.spec().is_legal(&coeffs) {
            return Err(Error::IllegalCoefficients(format!("{coeffs:?}")));
        }
        let value = value_of(seq, &coeffs);
        let summands = coeffs.iter().sum();
        Ok(Decomposition {
            coeffs,
            value,
            summands,
        })
    }

    /// The decomposition of 0: no coefficients, no summands.
    pub fn empty() -> Self {
        Decomposition {
            coeffs: Vec::new(),
            value: BigUint::zero(),
            summands: 0,
        }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn level(&self) -> usize {
        self.coeffs.len()
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn summands(&self) -> u64 {
        self.summands
    }
}

/// `sum a_i H_{m+1-i}` for a coefficient string of length m.
pub fn value_of(seq: &PlrsSequence, coeffs: &[u64]) -> BigUint {
    let m = coeffs.len();
    let mut acc = BigUint::zero();
    for (i, &a) in coeffs.iter().enumerate() {
        if a != 0 {
            acc += seq.term(m - i) * a;
        }
    }
    acc
}

/// Every legal coefficient string of length `n` (with `a_1 > 0`), each paired
/// with its exact value. Refuses outright when `delta_n` exceeds `budget`.
///
/// Generation follows the legality grammar directly: a block is the exact
/// prefix `c_1..c_{s-1}` followed by `a_s < c_s`, then a zero run, then the
/// next block (which must start nonzero so zero runs are never split two
/// ways); a terminal block of length `m < L` may match `c_1..c_m` exactly.
pub fn enumerate_legal_with_budget(
    seq: &PlrsSequence,
    n: usize,
    budget: u64,
) -> Result<Vec<Decomposition>> {
    assert!(n >= 1 && n + 1 <= seq.len(), "sequence too short for level");
    let delta = seq.delta(n);
    if delta.to_u64().map_or(true, |d| d > budget) {
        return Err(Error::BudgetExceeded {
            level: n,
            delta: delta.to_string(),
            budget,
        });
    }
    let mut out = Vec::new();
    let mut buf = Vec::with_capacity(n);
    gen_blocks(seq.spec(), n, &mut buf, &mut out, seq);
    // post-conditions of the oracle: count, range, distinctness
    assert_eq!(BigUint::from(out.len()), delta, "oracle count != delta_n");
    let lo = seq.term(n);
    let hi = seq.term(n + 1);
    let mut values: Vec<&BigUint> = out.iter().map(|d| d.value()).collect();
    values.sort();
    for w in values.windows(2) {
        assert!(w[0] != w[1], "duplicate value in oracle output");
    }
    assert!(values.first().map_or(true, |v| *v >= lo));
    assert!(values.last().map_or(true, |v| *v < hi));
    Ok(out)
}

/// [`enumerate_legal_with_budget`] at the default [`ENUM_BUDGET`].
pub fn enumerate_legal(seq: &PlrsSequence, n: usize) -> Result<Vec<Decomposition>> {
    enumerate_legal_with_budget(seq, n, ENUM_BUDGET)
}

fn gen_blocks(
    spec: &PlrsSpec,
    remaining: usize,
    buf: &mut Vec<u64>,
    out: &mut Vec<Decomposition>,
    seq: &PlrsSequence,
) {
    if remaining == 0 {
        let d = Decomposition::new(seq, buf.clone()).expect("grammar produced illegal string");
        out.push(d);
        return;
    }
    let c = spec.coeffs();
    let l = spec.depth();
    // terminal block: exact prefix c_1..c_m with m < L filling the rest
    if remaining < l {
        buf.extend_from_slice(&c[..remaining]);
        gen_blocks(spec, 0, buf, out, seq);
        buf.truncate(buf.len() - remaining);
    }
    // block with a break at position s
    for s in 1..=l.min(remaining) {
        buf.extend_from_slice(&c[..s - 1]);
        let lo = if s == 1 { 1 } else { 0 }; // block-leading coefficient must be nonzero
        for a in lo..c[s - 1] {
            buf.push(a);
            for zeros in 0..=(remaining - s) {
                buf.extend(std::iter::repeat(0).take(zeros));
                gen_blocks(spec, remaining - s - zeros, buf, out, seq);
                buf.truncate(buf.len() - zeros);
            }
            buf.pop();
        }
        buf.truncate(buf.len() - (s - 1));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(coeffs: Vec<u64>, count: usize) -> PlrsSequence {
        PlrsSequence::build(PlrsSpec::new(coeffs).unwrap(), count).unwrap()
    }

    #[test]
    fn rejects_invalid_specs() {
        assert!(PlrsSpec::new(vec![]).is_err());
        assert!(PlrsSpec::new(vec![0, 1]).is_err());
        assert!(PlrsSpec::new(vec![1, 2, 0]).is_err());
        assert!(PlrsSpec::new(vec![1, 0, 0, 2]).is_ok());
    }

    #[test]
    fn fibonacci_terms() {
        let s = seq(vec![1, 1], 10);
        let expect: Vec<u64> = vec![1, 2, 3, 5, 8, 13, 21, 34, 55, 89];
        let got: Vec<u64> = s.terms().iter().map(|t| t.to_u64().unwrap()).collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn decimal_terms() {
        let s = seq(vec![10], 4);
        let got: Vec<u64> = s.terms().iter().map(|t| t.to_u64().unwrap()).collect();
        assert_eq!(got, vec![1, 10, 100, 1000]);
    }

    #[test]
    fn depth_three_terms() {
        // hand-applied initial conditions: H_2 = 2*1+1 = 3, H_3 = 2*3+3*1+1 = 10
        let s = seq(vec![2, 3, 1], 5);
        let got: Vec<u64> = s.terms().iter().map(|t| t.to_u64().unwrap()).collect();
        assert_eq!(got, vec![1, 3, 10, 30, 93]);
    }

    #[test]
    fn legality_examples() {
        let spec = PlrsSpec::new(vec![2, 3, 1]).unwrap();
        assert!(spec.is_legal(&[1, 2, 3, 0, 1]));
        assert!(!spec.is_legal(&[1, 2, 3, 1, 0]));
        assert!(!spec.is_legal(&[7, 0, 0, 2, 0]));

        let fib = PlrsSpec::fibonacci();
        assert!(fib.is_legal(&[1, 0, 1]));
        assert!(!fib.is_legal(&[1, 1, 0]));
        assert!(!fib.is_legal(&[0, 1, 0]));
        assert!(!fib.is_legal(&[]));
        assert!(!fib.is_legal(&[2]));
        assert!(fib.is_legal(&[1]));
    }

    #[test]
    fn enumerate_fibonacci_level5() {
        let s = seq(vec![1, 1], 7);
        let ds = enumerate_legal(&s, 5).unwrap();
        assert_eq!(ds.len(), 5);
        let mut values: Vec<u64> = ds.iter().map(|d| d.value().to_u64().unwrap()).collect();
        values.sort();
        assert_eq!(values, vec![8, 9, 10, 11, 12]);
    }

    #[test]
    fn enumerate_level1() {
        let s = seq(vec![1, 1], 3);
        let ds = enumerate_legal(&s, 1).unwrap();
        assert_eq!(ds.len(), 1);
        assert_eq!(ds[0].value(), &BigUint::one());
    }

    #[test]
    fn enumerate_decimal_two_digits() {
        let s = seq(vec![10], 4);
        let ds = enumerate_legal(&s, 2).unwrap();
        assert_eq!(ds.len(), 90);
        let mut values: Vec<u64> = ds.iter().map(|d| d.value().to_u64().unwrap()).collect();
        values.sort();
        assert_eq!(values, (10..100).collect::<Vec<u64>>());
    }

    #[test]
    fn enumerate_budget_refusal() {
        let s = seq(vec![10], 12);
        match enumerate_legal_with_budget(&s, 10, 1000) {
            Err(Error::BudgetExceeded { level: 10, .. }) => {}
            other => panic!("expected budget refusal, got {other:?}"),
        }
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = PlrsSpec::new(vec![2, 3, 1]).unwrap();
        let js = serde_json::to_string(&spec).unwrap();
        assert_eq!(js, r#"{"coeffs":[2,3,1]}"#);
        let back: PlrsSpec = serde_json::from_str(&js).unwrap();
        assert_eq!(back, spec);
        assert_eq!(back.partial_sums(), &[0, 2, 5, 6]);
        assert!(serde_json::from_str::<PlrsSpec>(r#"{"coeffs":[0,1]}"#).is_err());
    }
}
