//! Characteristic-root analysis of `A(y) = 1 - sum_{m,j} x^j y^{m+1}`:
//! companion-matrix root finding with residual polishing, growth-rate
//! cross-checks, and the linear fit of the asymptotic mean summand count.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::distribution::exact_means;
use crate::error::{Error, Result};
use crate::num_util::ratio_to_f64;
use crate::plrs::{PlrsSequence, PlrsSpec};

/// Newton polish target for root residuals.
pub const ROOT_POLISH_TOL: f64 = 1e-12;
/// Pairwise-gap threshold below which two roots are flagged as multiple.
pub const MULTIPLE_ROOT_GAP: f64 = 1e-8;

/// Exact coefficients of `A(y)` in ascending powers of y (degree L).
/// At x = 1 the coefficient of `y^{m+1}` is `-c_{m+1}`.
pub fn char_poly(spec: &PlrsSpec, x: &BigRational) -> Vec<BigRational> {
    assert!(x.is_positive());
    let s = spec.partial_sums();
    let l = spec.depth();
    let mut coeffs = Vec::with_capacity(l + 1);
    coeffs.push(BigRational::one());
    for m in 0..l {
        let mut acc = BigRational::zero();
        let mut xp = x.pow(s[m] as i32);
        for _ in s[m]..s[m + 1] {
            acc += &xp;
            xp *= x;
        }
        coeffs.push(-acc);
    }
    coeffs
}

/// All complex roots of a polynomial given in ascending coefficient order,
/// found as companion-matrix eigenvalues and Newton-polished.
#[derive(Clone, Debug)]
pub struct RootAnalysis {
    pub roots: Vec<Complex64>,
    pub residuals: Vec<f64>,
    /// Index of the smallest-modulus root.
    pub dominant: usize,
    pub min_pairwise_gap: f64,
    pub has_multiple_root: bool,
}

fn eval_poly(coeffs: &[f64], y: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * y + c;
    }
    acc
}

fn eval_poly_deriv(coeffs: &[f64], y: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, &c) in coeffs.iter().enumerate().skip(1).rev() {
        acc = acc * y + c * k as f64;
    }
    acc
}

pub fn find_roots(coeffs: &[f64], gap_tolerance: f64) -> Result<RootAnalysis> {
    let degree = coeffs.len().saturating_sub(1);
    if degree == 0 || coeffs[degree] == 0.0 {
        return Err(Error::DegeneratePolynomial(
            "degree must be >= 1 with nonzero leading coefficient".into(),
        ));
    }
    // companion matrix of the monic normalization
    let mut companion = DMatrix::<f64>::zeros(degree, degree);
    for i in 1..degree {
        companion[(i, i - 1)] = 1.0;
    }
    for i in 0..degree {
        companion[(i, degree - 1)] = -coeffs[i] / coeffs[degree];
    }
    let mut roots: Vec<Complex64> = companion
        .complex_eigenvalues()
        .iter()
        .map(|e| Complex64::new(e.re, e.im))
        .collect();

    // Newton polishing; degrees here are tiny so robustness beats speed
    for r in roots.iter_mut() {
        for _ in 0..50 {
            let f = eval_poly(coeffs, *r);
            if f.norm() < ROOT_POLISH_TOL {
                break;
            }
            let df = eval_poly_deriv(coeffs, *r);
            if df.norm() == 0.0 {
                break;
            }
            *r -= f / df;
        }
    }

    let residuals: Vec<f64> = roots.iter().map(|&r| eval_poly(coeffs, r).norm()).collect();
    let dominant = roots
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .map(|(i, _)| i)
        .unwrap();
    let mut min_gap = f64::INFINITY;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            min_gap = min_gap.min((roots[i] - roots[j]).norm());
        }
    }
    Ok(RootAnalysis {
        has_multiple_root: min_gap < gap_tolerance,
        roots,
        residuals,
        dominant,
        min_pairwise_gap: min_gap,
    })
}

/// Root analysis of `A(y)` for a spec at a sampled x.
#[derive(Clone, Debug)]
pub struct RootReport {
    pub x_value: f64,
    /// Exact coefficients of A(y), ascending.
    pub poly_coeffs: Vec<BigRational>,
    pub analysis: RootAnalysis,
}

pub fn root_report(spec: &PlrsSpec, x: &BigRational) -> Result<RootReport> {
    let poly_coeffs = char_poly(spec, x);
    let floats: Vec<f64> = poly_coeffs.iter().map(ratio_to_f64).collect();
    let analysis = find_roots(&floats, MULTIPLE_ROOT_GAP)?;
    // residual contract relative to coefficient magnitude
    let scale = 1.0 + floats.iter().fold(0.0f64, |a, c| a.max(c.abs()));
    for r in &analysis.residuals {
        assert!(*r < 1e-10 * scale, "root residual {r} too large");
    }
    Ok(RootReport {
        x_value: ratio_to_f64(x),
        poly_coeffs,
        analysis,
    })
}

#[derive(Clone, Debug)]
pub struct GrowthRate {
    /// Term ratio `H_n / H_{n-1}` at the probe level.
    pub lambda: f64,
    /// Gap to the reciprocal dominant-root modulus of `A(y)` at x = 1.
    pub ratio_residual: f64,
}

/// Two-path growth-rate estimate: exact term ratios against the dominant
/// root of the characteristic polynomial.
pub fn growth_rate(spec: &PlrsSpec, n_probe: usize) -> Result<GrowthRate> {
    assert!(n_probe >= 2);
    let seq = PlrsSequence::build(spec.clone(), n_probe)?;
    let ratio = BigRational::new(
        BigInt::from(seq.term(n_probe).clone()),
        BigInt::from(seq.term(n_probe - 1).clone()),
    );
    let lambda = ratio_to_f64(&ratio);
    let report = root_report(spec, &BigRational::one())?;
    let rho = report.analysis.roots[report.analysis.dominant].norm();
    Ok(GrowthRate {
        lambda,
        ratio_residual: (lambda - 1.0 / rho).abs(),
    })
}

/// Linear fit `mu_n ~ C n + d` of the exact mean summand counts.
#[derive(Clone, Debug)]
pub struct LekkerkerkerFit {
    pub c: f64,
    pub d: f64,
    pub c_exact: BigRational,
    pub d_exact: BigRational,
    /// `|mu_n - (C n + d)|` over the fit window, increasing n.
    pub residual_tail: Vec<f64>,
}

/// Fits C as the tail-averaged first difference `mu_n - mu_{n-1}` over the
/// top half of `[n_lo, n_hi]` (first differences cancel d exactly and the
/// error term decays geometrically), then d as the tail average of
/// `mu_n - C n`. All averaging is exact rational; floats only in the views.
pub fn lekkerkerker_fit(spec: &PlrsSpec, n_lo: usize, n_hi: usize) -> Result<LekkerkerkerFit> {
    if n_lo < 2 || n_hi < n_lo + 10 {
        return Err(Error::WindowTooSmall {
            need: 10,
            got: n_hi.saturating_sub(n_lo),
        });
    }
    let means = exact_means(spec, n_hi)?;
    let mu = |n: usize| -> &BigRational { &means[n - 1] };
    let mid = (n_lo + n_hi) / 2;
    let tail = (mid + 1..=n_hi).collect::<Vec<_>>();
    let mut c_exact = BigRational::zero();
    for &n in &tail {
        c_exact += mu(n) - mu(n - 1);
    }
    c_exact /= BigRational::from_integer(BigInt::from(tail.len() as u64));
    let mut d_exact = BigRational::zero();
    for &n in &tail {
        d_exact += mu(n) - &c_exact * BigRational::from_integer(BigInt::from(n as u64));
    }
    d_exact /= BigRational::from_integer(BigInt::from(tail.len() as u64));
    let residual_tail = (n_lo..=n_hi)
        .map(|n| {
            let fit = &c_exact * BigRational::from_integer(BigInt::from(n as u64)) + &d_exact;
            ratio_to_f64(&(mu(n) - fit).abs())
        })
        .collect();
    Ok(LekkerkerkerFit {
        c: ratio_to_f64(&c_exact),
        d: ratio_to_f64(&d_exact),
        c_exact,
        d_exact,
        residual_tail,
    })
}
