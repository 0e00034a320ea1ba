//! Greedy generalized Zeckendorf decomposition and exhaustive bijection
//! verification against the enumeration oracle.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::Result;
use crate::plrs::{enumerate_legal, Decomposition, PlrsSequence};

/// Greedy decomposition of `value` over the generated sequence.
///
/// At each position the coefficient taken is `min(floor(rem / H), cap)`
/// where the cap tracks the legal block pattern: `c_i` while the running
/// prefix still matches the recurrence coefficients exactly, strictly less
/// at the break. The output is validated (legal, value-exact) on
/// construction; agreement with the oracle's unique decomposition is
/// checked test-side over every exhaustively enumerable range.
///
/// `value = 0` yields the empty decomposition. Values at or above the last
/// generated term are an explicit range error; the sequence is never grown
/// silently.
pub fn decompose(seq: &PlrsSequence, value: &BigUint) -> Result<Decomposition> {
    if value.is_zero() {
        return Ok(Decomposition::empty());
    }
    let m = seq.level_of(value)?;
    let c = seq.spec().coeffs();
    let mut rem = value.clone();
    let mut coeffs = Vec::with_capacity(m);
    let mut prefix = 0usize;
    for pos in (1..=m).rev() {
        let h = seq.term(pos);
        // the quotient is bounded by c_1 + 1, so u64 is plenty
        let q = (&rem / h).to_u64().expect("quotient fits u64");
        // prefix == L would mean a full c_1..c_L block, whose value is a
        // whole H term and exceeds the remainder; unreachable by the greedy
        // invariant rem < H_{block_start + 1}
        let cap = c[prefix];
        let a = q.min(cap);
        if a == cap {
            prefix += 1;
        } else {
            prefix = 0;
        }
        if a != 0 {
            rem -= h * a;
        }
        coeffs.push(a);
    }
    debug_assert!(rem.is_zero());
    let d = Decomposition::new(seq, coeffs)?;
    debug_assert_eq!(d.value(), value);
    Ok(d)
}

/// Report of an exhaustive greedy-vs-oracle sweep over `[H_n, H_{n+1})`.
#[derive(Clone, Debug)]
pub struct BijectionReport {
    pub checked: u64,
    pub failures: Vec<String>,
}

impl BijectionReport {
    pub fn is_clean(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For every `N` in `[H_n, H_{n+1})`: the greedy decomposition must be
/// legal, have value `N` and level `n`, and match the oracle's coefficient
/// string exactly. Mismatches are collected, not panicked on.
pub fn verify_bijection(seq: &PlrsSequence, n: usize) -> Result<BijectionReport> {
    let oracle = enumerate_legal(seq, n)?;
    let by_value: std::collections::HashMap<&BigUint, &Decomposition> =
        oracle.iter().map(|d| (d.value(), d)).collect();
    let mut failures = Vec::new();
    let mut checked = 0u64;
    let mut value = seq.term(n).clone();
    let hi = seq.term(n + 1).clone();
    while value < hi {
        checked += 1;
        match decompose(seq, &value) {
            Err(e) => failures.push(format!("N={value}: greedy failed: {e}")),
            Ok(d) => {
                if d.value() != &value {
                    failures.push(format!("N={value}: value mismatch {}", d.value()));
                } else if d.level() != n {
                    failures.push(format!("N={value}: level {} != {n}", d.level()));
                } else {
                    match by_value.get(&value) {
                        None => failures.push(format!("N={value}: missing from oracle")),
                        Some(o) if o.coeffs() != d.coeffs() => failures.push(format!(
                            "N={value}: greedy {:?} != oracle {:?}",
                            d.coeffs(),
                            o.coeffs()
                        )),
                        Some(_) => {}
                    }
                }
            }
        }
        value += 1u32;
    }
    Ok(BijectionReport { checked, failures })
}
