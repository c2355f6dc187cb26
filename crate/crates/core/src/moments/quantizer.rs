use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::MomentError;
use crate::exact::{decimal_from_parts, RMatrix, Rational};

/// Minimum number of digits of the decimal value when `G` is not a quadratic
/// irrational.
const MIN_INEXACT_DIGITS: usize = 30;

/// The normalized second moment `G = U / (n V^(1 + 2/n))`. When
/// `V^(2/n)` is rational the value is `coefficient * sqrt(radicand)`
/// exactly; otherwise only the truncated decimal is exact to its digits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuantizerConstant {
    pub coefficient: Option<Rational>,
    #[serde(serialize_with = "crate::serde_util::opt_display")]
    pub radicand: Option<BigInt>,
    pub exact: bool,
    pub decimal: String,
}

impl QuantizerConstant {
    pub fn to_f64(&self) -> f64 {
        self.decimal.parse().expect("decimal rendering")
    }
}

/// `G` from the second moment `u` (the trace of the second-moment tensor),
/// the volume `v` and the dimension `n`, with at least `digits` fractional
/// digits.
pub fn quantizer_constant(u: &Rational, v: &Rational, n: usize, digits: usize) -> Result<QuantizerConstant, MomentError> {
    if n == 0 || !v.is_positive() {
        return Err(MomentError::InvalidInput(format!("dimension {n} with volume {v}")));
    }
    if u.is_zero() {
        return Ok(QuantizerConstant {
            coefficient: Some(Rational::zero()),
            radicand: Some(BigInt::one()),
            exact: true,
            decimal: Rational::zero().to_decimal(digits),
        });
    }
    let nn = Rational::from(n as i64);
    if let Some(t) = v.pow(4).nth_root_exact(n as u32) {
        // V^(2/n) = sqrt(t) with t = p/q, and sqrt(t) = s sqrt(m) / q for p q = s^2 m.
        let pq = t.numer() * t.denom();
        let (s, m) = split_square(&pq);
        let sqrt_t_coeff = Rational::new(s, t.denom().clone());
        let coefficient = &(u * &sqrt_t_coeff) / &(&(&nn * v) * &t);
        let decimal = sqrt_decimal(&coefficient, &m, digits);
        return Ok(QuantizerConstant { coefficient: Some(coefficient), radicand: Some(m), exact: true, decimal });
    }
    // G^n = U^n / (n^n V^(n+2)).
    let gn = &u.pow(n as i32) / &(&nn.pow(n as i32) * &v.pow(n as i32 + 2));
    let digits = digits.max(MIN_INEXACT_DIGITS);
    let scale = BigInt::from(10u32).pow((digits * n) as u32);
    let root = ((gn.numer() * scale) / gn.denom()).nth_root(n as u32);
    let decimal = decimal_from_parts(&root, &BigInt::from(10u32).pow(digits as u32), digits);
    Ok(QuantizerConstant { coefficient: None, radicand: None, exact: false, decimal })
}

/// `x = s^2 m` with `m` free of squares of primes below a trial bound; a
/// remaining perfect-square cofactor is also extracted.
fn split_square(x: &BigInt) -> (BigInt, BigInt) {
    let mut m = x.abs();
    let mut s = BigInt::one();
    let mut p = 2u64;
    while p < 100_000 && BigInt::from(p * p) <= m {
        let pp = BigInt::from(p * p);
        while (&m % &pp).is_zero() {
            m /= &pp;
            s *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let r = m.sqrt();
    if &r * &r == m {
        s *= r;
        m = BigInt::one();
    }
    (s, m)
}

/// Truncated decimal of `c sqrt(m)`.
fn sqrt_decimal(c: &Rational, m: &BigInt, digits: usize) -> String {
    if m.is_one() {
        return c.to_decimal(digits);
    }
    let scale = BigInt::from(10u32).pow(2 * digits as u32);
    let num = c.numer().abs();
    let root = (&num * &num * m * scale).sqrt() / c.denom();
    let signed = if c.is_negative() { -root } else { root };
    decimal_from_parts(&signed, &BigInt::from(10u32).pow(digits as u32), digits)
}

/// True when the tensor is a multiple of the identity.
pub fn isotropy_check(m2: &RMatrix) -> bool {
    let n = m2.rows();
    if !m2.is_square() || n == 0 {
        return false;
    }
    let diag = &m2.trace() / &Rational::from(n as i64);
    let zero = Rational::zero();
    (0..n).all(|i| (0..n).all(|j| m2.get(i, j) == if i == j { &diag } else { &zero }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_and_bw16_values() {
        let g = quantizer_constant(&Rational::new(1, 4), &Rational::one(), 3, 20).unwrap();
        assert_eq!(g.coefficient, Some(Rational::new(1, 12)));
        assert_eq!(g.radicand, Some(BigInt::one()));
        assert_eq!(g.decimal, "0.08333333333333333333");

        let u = crate::bw16::second_moment();
        let g = quantizer_constant(&u, &Rational::new(1, 16), 16, 20).unwrap();
        assert_eq!(g.coefficient, Some(u));
        assert_eq!(g.radicand, Some(BigInt::from(2)));
        assert!(g.decimal.starts_with("0.068297622489318"));
        assert!((g.to_f64() - crate::bw16::QUANTIZER_CONSTANT).abs() < 1e-15);

        let z = quantizer_constant(&Rational::zero(), &Rational::one(), 4, 5).unwrap();
        assert_eq!(z.decimal, "0.00000");
        assert!(quantizer_constant(&Rational::one(), &Rational::zero(), 2, 5).is_err());
    }

    #[test]
    fn inexact_volumes_fall_back_to_roots() {
        // V = 2 in dimension 3: G = U / (3 * 2^(5/3)).
        let g = quantizer_constant(&Rational::one(), &Rational::from(2), 3, 10).unwrap();
        assert!(!g.exact);
        assert!(g.decimal.len() >= 32);
        let expected = 1.0 / (3.0 * 2f64.powf(5.0 / 3.0));
        assert!((g.to_f64() - expected).abs() < 1e-15);
    }

    #[test]
    fn isotropy() {
        assert!(isotropy_check(&RMatrix::identity(3).scale(&Rational::new(1, 12))));
        let mut m = RMatrix::identity(2);
        m.set(0, 1, Rational::new(1, 5));
        assert!(!isotropy_check(&m));
        assert!(!isotropy_check(&RMatrix::from_int_rows(&[vec![1, 0], vec![0, 2]])));
    }
}
