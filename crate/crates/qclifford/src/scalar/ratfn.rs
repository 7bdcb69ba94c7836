//! Rational functions in `q` and `c` with exact normalization.
//!
//! A [`RationalFn`] is a reduced fraction of two integer polynomials. Every
//! constructor and arithmetic operation re-normalizes, so equality is plain
//! structural equality:
//!
//! * gcd(num, den) = 1 (polynomial gcd, including integer content),
//! * the denominator's leading coefficient is positive,
//! * the zero element is `0/1`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::Poly;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub(crate) struct RationalFn {
    num: Poly,
    den: Poly,
}

impl RationalFn {
    pub(crate) fn zero() -> Self {
        RationalFn {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub(crate) fn one() -> Self {
        RationalFn {
            num: Poly::one(),
            den: Poly::one(),
        }
    }

    pub(crate) fn from_int(n: i64) -> Self {
        RationalFn {
            num: Poly::constant(BigInt::from(n)),
            den: Poly::one(),
        }
    }

    pub(crate) fn from_big_rational(r: &BigRational) -> Self {
        RationalFn::new(
            Poly::constant(r.numer().clone()),
            Poly::constant(r.denom().clone()),
        )
    }

    /// `coeff * q^eq * c^ec` with integer exponents of either sign;
    /// negative powers go to the denominator.
    pub(crate) fn monomial(coeff: &BigRational, eq: i64, ec: i64) -> Self {
        let num = Poly::monomial(
            coeff.numer().clone(),
            eq.max(0) as u32,
            ec.max(0) as u32,
        );
        let den = Poly::monomial(
            coeff.denom().clone(),
            (-eq).max(0) as u32,
            (-ec).max(0) as u32,
        );
        RationalFn::new(num, den)
    }

    /// Builds and reduces; panics on a zero denominator (callers guard).
    pub(crate) fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        let mut rf = RationalFn { num, den };
        rf.reduce();
        rf
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = Poly::one();
            return;
        }
        let g = Poly::gcd(&self.num, &self.den);
        if !g.is_one() {
            self.num = self.num.div_exact(&g).expect("gcd divides numerator");
            self.den = self.den.div_exact(&g).expect("gcd divides denominator");
        }
        if self
            .den
            .leading_coeff()
            .is_some_and(|lc| lc.is_negative())
        {
            self.num = self.num.neg();
            self.den = self.den.neg();
        }
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub(crate) fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub(crate) fn num(&self) -> &Poly {
        &self.num
    }

    pub(crate) fn den(&self) -> &Poly {
        &self.den
    }

    pub(crate) fn add(&self, rhs: &RationalFn) -> RationalFn {
        RationalFn::new(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }

    pub(crate) fn sub(&self, rhs: &RationalFn) -> RationalFn {
        RationalFn::new(
            self.num.mul(&rhs.den).sub(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }

    pub(crate) fn mul(&self, rhs: &RationalFn) -> RationalFn {
        if self.is_zero() || rhs.is_zero() {
            return RationalFn::zero();
        }
        // Cross-reduce before multiplying to keep intermediate sizes down.
        let g1 = Poly::gcd(&self.num, &rhs.den);
        let g2 = Poly::gcd(&rhs.num, &self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = rhs.den.div_exact(&g1).expect("gcd divides");
        let n2 = rhs.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        RationalFn::new(n1.mul(&n2), d1.mul(&d2))
    }

    pub(crate) fn neg(&self) -> RationalFn {
        RationalFn {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub(crate) fn inv(&self) -> Result<RationalFn> {
        if self.is_zero() {
            return Err(Error::DivisionByZero(
                "inverse of the zero rational function".into(),
            ));
        }
        Ok(RationalFn::new(self.den.clone(), self.num.clone()))
    }

    /// Substitutes rational values for `q` and `c`; fails only when the
    /// denominator vanishes at the point.
    pub(crate) fn eval(&self, q: &BigRational, c: &BigRational) -> Result<BigRational> {
        let d = self.den.eval(q, c);
        if d.is_zero() {
            return Err(Error::DivisionByZero(format!(
                "denominator {} vanishes at q={q}, c={c}",
                self.den
            )));
        }
        Ok(self.num.eval(q, c) / d)
    }

    /// The fraction as an exact rational number, when it is constant.
    pub(crate) fn as_big_rational(&self) -> Option<BigRational> {
        if self.num.max_exponents() == (0, 0) && self.den.max_exponents() == (0, 0) {
            let n = self
                .num
                .terms()
                .next()
                .map(|(_, c)| c.clone())
                .unwrap_or_else(BigInt::zero);
            let d = self
                .den
                .terms()
                .next()
                .map(|(_, c)| c.clone())
                .unwrap_or_else(BigInt::one);
            Some(BigRational::new(n, d))
        } else {
            None
        }
    }
}

impl fmt::Debug for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            if self.num.num_terms() > 1 {
                write!(f, "({})", self.num)
            } else {
                write!(f, "{}", self.num)
            }
        } else {
            let num = if self.num.num_terms() > 1 {
                format!("({})", self.num)
            } else {
                format!("{}", self.num)
            };
            let den = if self.den.num_terms() > 1 {
                format!("({})", self.den)
            } else {
                format!("{}", self.den)
            };
            write!(f, "{num}/{den}")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> RationalFn {
        RationalFn::monomial(&BigRational::one(), 1, 0)
    }

    fn c() -> RationalFn {
        RationalFn::monomial(&BigRational::one(), 0, 1)
    }

    fn int(n: i64) -> RationalFn {
        RationalFn::from_int(n)
    }

    #[test]
    fn reduction_happens_on_construction() {
        // (q^2 - 1)/(q - 1) reduces to q + 1.
        let num = q().mul(&q()).sub(&int(1));
        let den = q().sub(&int(1));
        let r = num.mul(&den.inv().unwrap());
        assert_eq!(r, q().add(&int(1)));
    }

    #[test]
    fn negative_exponent_monomials_land_in_denominator() {
        let r = RationalFn::monomial(&BigRational::one(), -2, 1);
        assert_eq!(r.num().to_string(), "c");
        assert_eq!(r.den().to_string(), "q^2");
    }

    #[test]
    fn field_ops_roundtrip() {
        let a = q().add(&c()).mul(&int(3));
        let b = q().sub(&int(2));
        let s = a.add(&b);
        assert_eq!(s.sub(&b), a);
        let p = a.mul(&b);
        assert_eq!(p.mul(&b.inv().unwrap()), a);
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert!(RationalFn::zero().inv().is_err());
    }

    #[test]
    fn denominator_sign_is_normalized() {
        // 1/(-q + 1) should store denominator q - 1 with negated numerator.
        let r = int(1).mul(&int(1).sub(&q()).inv().unwrap());
        assert_eq!(r.den().to_string(), "q - 1");
        assert_eq!(r.num().to_string(), "-1");
    }

    #[test]
    fn eval_is_a_homomorphism() {
        let a = q().add(&c());
        let b = q().mul(&c()).sub(&int(7));
        let at = |r: &RationalFn| {
            r.eval(
                &BigRational::new(BigInt::from(5), BigInt::from(3)),
                &BigRational::from(BigInt::from(2)),
            )
            .unwrap()
        };
        assert_eq!(at(&a.mul(&b)), at(&a) * at(&b));
        assert_eq!(at(&a.add(&b)), at(&a) + at(&b));
    }

}
