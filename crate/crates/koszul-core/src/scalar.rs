//! Exact rational scalars used as polynomial coefficients.

use num::{BigInt, BigRational, One, Signed};

/// Coefficient type: arbitrary-precision rational numbers.
pub type Coeff = BigRational;

/// Rational `n / d` as a [`Coeff`]. Panics if `d == 0`.
pub fn q(n: i64, d: i64) -> Coeff {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer `n` as a [`Coeff`].
pub fn qi(n: i64) -> Coeff {
    BigRational::from(BigInt::from(n))
}

/// `(-1)^n` as a [`Coeff`].
pub fn sign_pow(n: usize) -> Coeff {
    if n % 2 == 0 {
        Coeff::one()
    } else {
        -Coeff::one()
    }
}

/// Renders a coefficient the way the pretty-printer and the JSON encoder
/// need it: `"3"`, `"-3"`, `"3/2"`, `"-3/2"`.
pub fn coeff_string(c: &Coeff) -> String {
    c.to_string()
}

/// `true` when the coefficient is negative (used to pick `+`/`-` joiners).
pub fn is_negative(c: &Coeff) -> bool {
    c.is_negative()
}

/// `n!` as a [`Coeff`]; used for Taylor-coefficient calibration.
pub fn factorial(n: usize) -> Coeff {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    BigRational::from(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::Zero;

    #[test]
    fn rational_helpers() {
        assert_eq!(q(1, 2) + q(1, 2), qi(1));
        assert_eq!(q(2, 4), q(1, 2));
        assert!(qi(0).is_zero());
        assert_eq!(sign_pow(3), qi(-1));
        assert_eq!(sign_pow(4), qi(1));
        assert_eq!(factorial(4), qi(24));
        assert_eq!(coeff_string(&q(-3, 2)), "-3/2");
        assert_eq!(coeff_string(&qi(7)), "7");
    }
}
