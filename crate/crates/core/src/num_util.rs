//! Small numeric helpers shared across modules.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Convert an exact rational to the nearest f64. Magnitudes here can run to
/// hundreds of digits, so this goes through `ToPrimitive`, which scales the
/// numerator and denominator before dividing.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().expect("rational to f64 conversion")
}

pub fn big_ratio_f64(num: &BigUint, den: &BigUint) -> f64 {
    let r = BigRational::new(BigInt::from(num.clone()), BigInt::from(den.clone()));
    ratio_to_f64(&r)
}

/// binom(a, b) with the usual convention binom(a, b) = 0 for b > a.
pub fn binomial(a: u64, b: u64) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    num_integer::binomial(BigUint::from(a), BigUint::from(b))
}

pub fn binomial_rational(a: u64, b: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(binomial(a, b)))
}

/// (2m - 1)!! — the 2m-th standardized moment of a standard Gaussian.
pub fn odd_double_factorial(m: u32) -> f64 {
    let mut acc = 1.0;
    let mut k = 2 * m as i64 - 1;
    while k > 1 {
        acc *= k as f64;
        k -= 2;
    }
    acc
}

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z * std::f64::consts::FRAC_1_SQRT_2)
}

/// E[(K - mu)^r] from raw moments E[K^0..K^r] via the binomial expansion.
/// `raw[i]` holds E[K^i]; raw[0] must be 1.
pub fn central_from_raw(raw: &[BigRational], order: usize) -> BigRational {
    assert!(raw.len() > order);
    assert!(raw[0].is_one());
    let mean = &raw[1];
    let mut acc = BigRational::zero();
    let mut neg_mean_pow = BigRational::one();
    // sum_{i=0}^{r} C(r, i) * E[K^{r-i}] * (-mu)^i
    for i in 0..=order {
        let c = binomial_rational(order as u64, i as u64);
        acc += c * &raw[order - i] * &neg_mean_pow;
        neg_mean_pow *= -mean.clone();
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn binomial_edges() {
        assert_eq!(binomial(3, 1), BigUint::from(3u32));
        assert_eq!(binomial(4, 0), BigUint::from(1u32));
        assert_eq!(binomial(2, 5), BigUint::zero());
    }

    #[test]
    fn double_factorial_values() {
        assert_eq!(odd_double_factorial(1), 1.0);
        assert_eq!(odd_double_factorial(2), 3.0);
        assert_eq!(odd_double_factorial(3), 15.0);
        assert_eq!(odd_double_factorial(4), 105.0);
    }

    #[test]
    fn normal_cdf_sanity() {
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-15);
        assert!((normal_cdf(1.959963984540054) - 0.975).abs() < 1e-9);
        assert!(normal_cdf(-8.0) < 1e-14);
    }

    #[test]
    fn large_ratio_to_f64() {
        // ~10^40 / ~10^39 should come out near 10 despite overflowing f64 parts
        let num = BigUint::from(10u32).pow(40);
        let den = BigUint::from(10u32).pow(39);
        assert!((big_ratio_f64(&num, &den) - 10.0).abs() < 1e-9);
    }

    #[test]
    fn central_moments_of_fair_coin() {
        // K in {0,1} uniform: raw moments all 1/2; Var = 1/4, third central = 0
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let raw = vec![
            BigRational::one(),
            half.clone(),
            half.clone(),
            half.clone(),
        ];
        assert_eq!(
            central_from_raw(&raw, 2),
            BigRational::new(BigInt::from(1), BigInt::from(4))
        );
        assert_eq!(central_from_raw(&raw, 3), BigRational::zero());
    }
}
