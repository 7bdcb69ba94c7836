//! Exact coefficient arithmetic.
//!
//! All algebra in this crate happens over one of two interchangeable
//! coefficient fields:
//!
//! * [`Scalar`] — the symbolic field ℚ(q, c)(s) with s² = q + q⁻¹, stored
//!   as a pair `a + b·s` of reduced rational functions. This is the default
//!   and keeps every identity exact in the deformation parameter.
//! * [`QNum`] — the same tower specialized at a rational [`EvalPoint`],
//!   used where fully symbolic entries would blow up (large tensor powers).
//!
//! The [`CoeffCtx`] trait abstracts over the two so that the algebra
//! engines are written once. Constants are produced through the context;
//! arithmetic lives on the values themselves via [`Field`].
//!
//! The deformation integers used throughout are
//! `[m] = (1 − q^{−4m})/(1 − q^{−4}) = Σ_{k<m} q^{−4k}`, with factorials
//! and binomials built from them; the base-q variants replace q² by q,
//! i.e. use steps of q^{−2}.

mod eval;
mod poly;
mod ratfn;

pub use eval::{EvalPoint, QNum};

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use poly::Poly;
use ratfn::RationalFn;

/// Exact field operations, context-free: every value carries whatever it
/// needs (symbolic scalars are self-contained; specialized numbers carry
/// their quadratic modulus inline).
pub trait Field:
    Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool {
        *self == Self::one()
    }
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Fails only on zero.
    fn inv(&self) -> Result<Self>;
    fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.inv()?))
    }
}

/// Factory for coefficients in a fixed interpretation of `q`, `c`, `s`.
///
/// A context decides what the letters mean (symbolic indeterminates, a
/// rational specialization, or `c = 0` for the exterior-algebra limit);
/// the engines only ever ask it for constants.
pub trait CoeffCtx: Clone + Send + Sync + 'static {
    type F: Field;

    fn int(&self, n: i64) -> Self::F;
    fn big_rat(&self, r: &BigRational) -> Self::F;
    /// `q^e` for any integer exponent.
    fn q_pow(&self, e: i64) -> Self::F;
    /// `coeff · q^eq · c^ec`. Fails only when `ec < 0` in a context where
    /// `c` is zero.
    fn mono(&self, coeff: &BigRational, eq: i64, ec: i64) -> Result<Self::F>;
    /// `q + q⁻¹`.
    fn qp(&self) -> Self::F {
        self.q_pow(1).add(&self.q_pow(-1))
    }
    /// `q − q⁻¹`.
    fn qm(&self) -> Self::F {
        self.q_pow(1).sub(&self.q_pow(-1))
    }
    /// The adjoined square root `s` with `s² = q + q⁻¹`.
    fn sqrt_qp(&self) -> Self::F;
    /// The same context with `c` sent to zero.
    fn with_c_zero(&self) -> Self;
    /// Human-readable description for check reports.
    fn describe(&self) -> String;
    /// Short tag describing the interpretation of `c` (`"symbolic"`,
    /// `"zero"`, or the rational value); used in serialized headers.
    fn c_tag(&self) -> String;
}

// ---------------------------------------------------------------------------
// Symbolic scalars
// ---------------------------------------------------------------------------

/// An element `a + b·s` of ℚ(q, c)(s), `s² = q + q⁻¹`, with both parts
/// reduced rational functions. Structural equality is semantic equality.
#[derive(Clone, PartialEq, Eq)]
pub struct Scalar {
    a: RationalFn,
    b: RationalFn,
}

impl Scalar {
    fn from_ratfn(a: RationalFn) -> Scalar {
        Scalar {
            a,
            b: RationalFn::zero(),
        }
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar::from_ratfn(RationalFn::from_int(n))
    }

    pub fn from_big_rational(r: &BigRational) -> Scalar {
        Scalar::from_ratfn(RationalFn::from_big_rational(r))
    }

    /// `coeff · q^eq · c^ec`, exponents of either sign.
    pub fn monomial(coeff: &BigRational, eq: i64, ec: i64) -> Scalar {
        Scalar::from_ratfn(RationalFn::monomial(coeff, eq, ec))
    }

    pub fn q_pow(e: i64) -> Scalar {
        Scalar::monomial(&BigRational::from(BigInt::from(1)), e, 0)
    }

    /// The adjoined root `s` itself.
    pub fn sqrt_qp() -> Scalar {
        Scalar {
            a: RationalFn::zero(),
            b: RationalFn::one(),
        }
    }

    /// True when the `s`-part is nonzero (never the case in even-rank
    /// contexts, which stay inside ℚ(q, c)).
    pub fn has_radical_part(&self) -> bool {
        !self.b.is_zero()
    }

    /// `q + q⁻¹` as a rational function, the modulus of the extension.
    fn modulus() -> RationalFn {
        RationalFn::monomial(&BigRational::from(BigInt::from(1)), 1, 0).add(
            &RationalFn::monomial(&BigRational::from(BigInt::from(1)), -1, 0),
        )
    }

    /// Exact specialization at a rational point; a ring homomorphism into
    /// the quadratic extension attached to the point.
    pub fn evaluate(&self, at: &EvalPoint) -> Result<QNum> {
        let ea = self.a.eval(at.q(), at.c())?;
        let eb = self.b.eval(at.q(), at.c())?;
        if eb.is_zero() {
            return Ok(QNum::rational(ea));
        }
        match at.sqrt_v() {
            Some(t) => Ok(QNum::rational(ea + eb * t)),
            None => Ok(QNum::quadratic(ea, eb, at.v().clone())),
        }
    }

    /// True when both parts are Laurent polynomials in q and c, i.e. each
    /// denominator has reduced to a single monomial.
    pub fn is_laurent(&self) -> bool {
        self.a.den().is_monomial() && self.b.den().is_monomial()
    }

    /// The value as an exact rational number when it is constant
    /// (no q, no c, no s).
    pub fn as_big_rational(&self) -> Option<BigRational> {
        if self.b.is_zero() {
            self.a.as_big_rational()
        } else {
            None
        }
    }
}

/// Specializes a symbolic scalar at a rational point (free-function form
/// of [`Scalar::evaluate`]).
pub fn evaluate(x: &Scalar, at: &EvalPoint) -> Result<QNum> {
    x.evaluate(at)
}

impl Field for Scalar {
    fn zero() -> Self {
        Scalar::from_ratfn(RationalFn::zero())
    }

    fn one() -> Self {
        Scalar::from_ratfn(RationalFn::one())
    }

    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    fn add(&self, rhs: &Self) -> Self {
        Scalar {
            a: self.a.add(&rhs.a),
            b: self.b.add(&rhs.b),
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        Scalar {
            a: self.a.sub(&rhs.a),
            b: self.b.sub(&rhs.b),
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        // (a + bs)(a' + b's) = (aa' + bb'(q + q⁻¹)) + (ab' + ba')s
        let mut a = self.a.mul(&rhs.a);
        if !self.b.is_zero() && !rhs.b.is_zero() {
            a = a.add(&self.b.mul(&rhs.b).mul(&Scalar::modulus()));
        }
        Scalar {
            a,
            b: self.a.mul(&rhs.b).add(&self.b.mul(&rhs.a)),
        }
    }

    fn neg(&self) -> Self {
        Scalar {
            a: self.a.neg(),
            b: self.b.neg(),
        }
    }

    fn inv(&self) -> Result<Self> {
        if self.b.is_zero() {
            return Ok(Scalar::from_ratfn(self.a.inv()?));
        }
        // Conjugate: 1/(a + bs) = (a − bs)/(a² − b²(q + q⁻¹)). The norm
        // vanishes only at zero: a² = b²(q + q⁻¹) with b ≠ 0 would make
        // (a/b)² = (q² + 1)/q, impossible because the q-adic valuation of
        // the right side is odd while any square has even valuation.
        let norm = self
            .a
            .mul(&self.a)
            .sub(&self.b.mul(&self.b).mul(&Scalar::modulus()));
        let ninv = norm.inv().map_err(|_| {
            Error::DivisionByZero("inverse of zero".into())
        })?;
        Ok(Scalar {
            a: self.a.mul(&ninv),
            b: self.b.neg().mul(&ninv),
        })
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            if self.b.is_one() {
                write!(f, "s")
            } else {
                write!(f, "{} s", self.b)
            }
        } else {
            write!(f, "{} + {} s", self.a, self.b)
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

// ---------------------------------------------------------------------------
// JSON form: {"a":{"num":[[eq,ec,"coeff"],…],"den":[…]},"b":{…}}
// ---------------------------------------------------------------------------

type TermRepr = (u32, u32, String);

#[derive(Serialize, Deserialize)]
struct RatRepr {
    num: Vec<TermRepr>,
    den: Vec<TermRepr>,
}

#[derive(Serialize, Deserialize)]
struct ScalarRepr {
    a: RatRepr,
    b: RatRepr,
}

fn poly_to_terms(p: &Poly) -> Vec<TermRepr> {
    p.terms()
        .map(|(k, coeff)| {
            let (eq, ec) = poly::unpack(k);
            (eq, ec, coeff.to_string())
        })
        .collect()
}

fn poly_from_terms(terms: &[TermRepr]) -> std::result::Result<Poly, String> {
    let mut p = Poly::zero();
    for (eq, ec, coeff) in terms {
        let c: BigInt = coeff
            .parse()
            .map_err(|_| format!("bad integer coefficient {coeff:?}"))?;
        p.add_term(poly::pack(*eq, *ec), &c);
    }
    Ok(p)
}

fn ratfn_to_repr(r: &RationalFn) -> RatRepr {
    RatRepr {
        num: poly_to_terms(r.num()),
        den: poly_to_terms(r.den()),
    }
}

fn ratfn_from_repr(r: &RatRepr) -> std::result::Result<RationalFn, String> {
    let num = poly_from_terms(&r.num)?;
    let den = poly_from_terms(&r.den)?;
    if den.is_zero() {
        return Err("zero denominator".into());
    }
    Ok(RationalFn::new(num, den))
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ScalarRepr {
            a: ratfn_to_repr(&self.a),
            b: ratfn_to_repr(&self.b),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = ScalarRepr::deserialize(d)?;
        Ok(Scalar {
            a: ratfn_from_repr(&repr.a).map_err(D::Error::custom)?,
            b: ratfn_from_repr(&repr.b).map_err(D::Error::custom)?,
        })
    }
}

// ---------------------------------------------------------------------------
// Contexts
// ---------------------------------------------------------------------------

/// Interpretation of the parameter `c` in a symbolic context.
#[derive(Clone, Debug, PartialEq)]
pub enum CMode {
    /// `c` stays an indeterminate.
    Symbolic,
    /// `c` is a fixed nonzero rational.
    Rational(BigRational),
    /// `c = 0`: the exterior-algebra limit.
    Zero,
}

/// Symbolic coefficient context: `q` is always an indeterminate, `c`
/// according to the mode.
#[derive(Clone, Debug, PartialEq)]
pub struct SymCtx {
    c: CMode,
}

impl SymCtx {
    pub fn symbolic() -> SymCtx {
        SymCtx { c: CMode::Symbolic }
    }

    pub fn c_zero() -> SymCtx {
        SymCtx { c: CMode::Zero }
    }

    /// Fixes `c` to a rational value; zero degrades to [`CMode::Zero`].
    pub fn with_c(r: BigRational) -> SymCtx {
        if r.is_zero() {
            SymCtx::c_zero()
        } else {
            SymCtx {
                c: CMode::Rational(r),
            }
        }
    }

    pub fn c_mode(&self) -> &CMode {
        &self.c
    }
}

impl CoeffCtx for SymCtx {
    type F = Scalar;

    fn int(&self, n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn big_rat(&self, r: &BigRational) -> Scalar {
        Scalar::from_big_rational(r)
    }

    fn q_pow(&self, e: i64) -> Scalar {
        Scalar::q_pow(e)
    }

    fn mono(&self, coeff: &BigRational, eq: i64, ec: i64) -> Result<Scalar> {
        match &self.c {
            CMode::Symbolic => Ok(Scalar::monomial(coeff, eq, ec)),
            CMode::Zero => {
                if ec > 0 {
                    Ok(Scalar::zero())
                } else if ec == 0 {
                    Ok(Scalar::monomial(coeff, eq, 0))
                } else {
                    Err(Error::DivisionByZero(format!(
                        "c^{ec} requested in a context with c = 0"
                    )))
                }
            }
            CMode::Rational(r) => {
                let folded = coeff * r.pow(ec as i32);
                Ok(Scalar::monomial(&folded, eq, 0))
            }
        }
    }

    fn sqrt_qp(&self) -> Scalar {
        Scalar::sqrt_qp()
    }

    fn with_c_zero(&self) -> SymCtx {
        SymCtx::c_zero()
    }

    fn describe(&self) -> String {
        match &self.c {
            CMode::Symbolic => "symbolic (q, c indeterminate)".into(),
            CMode::Rational(r) => format!("symbolic q, c={r}"),
            CMode::Zero => "symbolic q, c=0".into(),
        }
    }

    fn c_tag(&self) -> String {
        match &self.c {
            CMode::Symbolic => "symbolic".into(),
            CMode::Rational(r) => r.to_string(),
            CMode::Zero => "zero".into(),
        }
    }
}

/// Numeric coefficient context attached to an [`EvalPoint`].
#[derive(Clone, Debug, PartialEq)]
pub struct NumCtx {
    point: EvalPoint,
    c_zero: bool,
}

impl NumCtx {
    pub fn new(point: EvalPoint) -> NumCtx {
        NumCtx {
            point,
            c_zero: false,
        }
    }

    pub fn point(&self) -> &EvalPoint {
        &self.point
    }
}

impl CoeffCtx for NumCtx {
    type F = QNum;

    fn int(&self, n: i64) -> QNum {
        QNum::rational(BigRational::from(BigInt::from(n)))
    }

    fn big_rat(&self, r: &BigRational) -> QNum {
        QNum::rational(r.clone())
    }

    fn q_pow(&self, e: i64) -> QNum {
        QNum::rational(rational_pow(self.point.q(), e))
    }

    fn mono(&self, coeff: &BigRational, eq: i64, ec: i64) -> Result<QNum> {
        let cpart = if self.c_zero {
            if ec > 0 {
                return Ok(QNum::rational(BigRational::zero()));
            } else if ec == 0 {
                BigRational::from(BigInt::from(1))
            } else {
                return Err(Error::DivisionByZero(format!(
                    "c^{ec} requested in a context with c = 0"
                )));
            }
        } else {
            rational_pow(self.point.c(), ec)
        };
        Ok(QNum::rational(
            coeff * rational_pow(self.point.q(), eq) * cpart,
        ))
    }

    fn sqrt_qp(&self) -> QNum {
        match self.point.sqrt_v() {
            Some(t) => QNum::rational(t.clone()),
            None => QNum::quadratic(
                BigRational::zero(),
                BigRational::from(BigInt::from(1)),
                self.point.v().clone(),
            ),
        }
    }

    fn with_c_zero(&self) -> NumCtx {
        NumCtx {
            point: self.point.clone(),
            c_zero: true,
        }
    }

    fn describe(&self) -> String {
        if self.c_zero {
            format!("specialized {}, with c sent to 0", self.point)
        } else {
            format!("specialized {}", self.point)
        }
    }

    fn c_tag(&self) -> String {
        if self.c_zero {
            "zero".into()
        } else {
            self.point.c().to_string()
        }
    }
}

fn rational_pow(base: &BigRational, e: i64) -> BigRational {
    debug_assert!(!base.is_zero() || e >= 0);
    base.pow(e as i32)
}

// ---------------------------------------------------------------------------
// Deformation integers
// ---------------------------------------------------------------------------

/// `[m] = Σ_{k<m} q^{−4k}`, the geometric form of (1 − q^{−4m})/(1 − q^{−4}).
pub fn qnum<C: CoeffCtx>(ctx: &C, m: i64) -> Result<C::F> {
    qnum_step(ctx, m, 4)
}

/// `[m]! = [1][2]⋯[m]`, with `[0]! = 1`.
pub fn qfact<C: CoeffCtx>(ctx: &C, m: i64) -> Result<C::F> {
    qfact_step(ctx, m, 4)
}

/// Deformed binomial `[m]! / ([p]! [m−p]!)`; requires `0 ≤ p ≤ m`.
pub fn qbinom<C: CoeffCtx>(ctx: &C, m: i64, p: i64) -> Result<C::F> {
    qbinom_step(ctx, m, p, 4)
}

/// The base-q variant: everywhere q² is replaced by q, so the underlying
/// integer is `Σ_{k<m} q^{−2k}`.
pub fn qbinom_base_q<C: CoeffCtx>(ctx: &C, m: i64, p: i64) -> Result<C::F> {
    qbinom_step(ctx, m, p, 2)
}

/// Base-q deformed integer `Σ_{k<m} q^{−2k}`.
pub fn qnum_base_q<C: CoeffCtx>(ctx: &C, m: i64) -> Result<C::F> {
    qnum_step(ctx, m, 2)
}

fn qnum_step<C: CoeffCtx>(ctx: &C, m: i64, step: i64) -> Result<C::F> {
    if m < 0 {
        return Err(Error::InvalidInput(format!(
            "deformed integer needs m ≥ 0, got {m}"
        )));
    }
    let mut acc = C::F::zero();
    for k in 0..m {
        acc = acc.add(&ctx.q_pow(-step * k));
    }
    Ok(acc)
}

fn qfact_step<C: CoeffCtx>(ctx: &C, m: i64, step: i64) -> Result<C::F> {
    if m < 0 {
        return Err(Error::InvalidInput(format!(
            "deformed factorial needs m ≥ 0, got {m}"
        )));
    }
    let mut acc = C::F::one();
    for k in 1..=m {
        acc = acc.mul(&qnum_step(ctx, k, step)?);
    }
    Ok(acc)
}

fn qbinom_step<C: CoeffCtx>(ctx: &C, m: i64, p: i64, step: i64) -> Result<C::F> {
    if p < 0 || p > m {
        return Err(Error::InvalidInput(format!(
            "deformed binomial needs 0 ≤ p ≤ m, got m={m}, p={p}"
        )));
    }
    qfact_step(ctx, m, step)?
        .div(&qfact_step(ctx, p, step)?.mul(&qfact_step(ctx, m - p, step)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sym() -> SymCtx {
        SymCtx::symbolic()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn qnum_small_values() {
        let ctx = sym();
        assert!(qnum(&ctx, 0).unwrap().is_zero());
        assert!(qnum(&ctx, 1).unwrap().is_one());
        assert!(qfact(&ctx, 0).unwrap().is_one());
        // [2] = 1 + q^{-4}
        let expect = Scalar::one().add(&Scalar::q_pow(-4));
        assert_eq!(qnum(&ctx, 2).unwrap(), expect);
    }

    #[test]
    fn qnum_matches_closed_form_quotient() {
        // Long-division oracle: (1 − q^{−4m})/(1 − q^{−4}) computed as an
        // actual quotient of field elements must agree with the sum form.
        let ctx = sym();
        let one = Scalar::one();
        let denom = one.sub(&Scalar::q_pow(-4));
        for m in 0..8i64 {
            let numer = one.sub(&Scalar::q_pow(-4 * m));
            let quotient = numer.div(&denom).unwrap();
            assert_eq!(qnum(&ctx, m).unwrap(), quotient, "m = {m}");
        }
    }

    #[test]
    fn qbinom_examples() {
        let ctx = sym();
        // (2 choose 1) = [2] = 1 + q^{-4}
        let expect = Scalar::one().add(&Scalar::q_pow(-4));
        assert_eq!(qbinom(&ctx, 2, 1).unwrap(), expect);
        assert!(qbinom(&ctx, 5, 0).unwrap().is_one());
        assert!(qbinom(&ctx, 5, 5).unwrap().is_one());
        assert!(qbinom(&ctx, 2, 3).is_err());
        assert!(qbinom(&ctx, 2, -1).is_err());
        assert!(qnum(&ctx, -1).is_err());
    }

    #[test]
    fn qbinom_satisfies_pascal_recurrence() {
        // Independent oracle: with x = q^{-4} the binomials obey
        // B(m,p) = B(m-1,p-1) + x^p B(m-1,p).
        let ctx = sym();
        for m in 1..=8i64 {
            for p in 1..m {
                let lhs = qbinom(&ctx, m, p).unwrap();
                let rhs = qbinom(&ctx, m - 1, p - 1).unwrap().add(
                    &ctx.q_pow(-4 * p).mul(&qbinom(&ctx, m - 1, p).unwrap()),
                );
                assert_eq!(lhs, rhs, "m={m} p={p}");
            }
        }
    }

    #[test]
    fn base_q_variant_replaces_q_squared_by_q() {
        // [2]_q = 1 + q^{-2}; binomial (2 choose 1) in base q.
        let ctx = sym();
        let expect = Scalar::one().add(&Scalar::q_pow(-2));
        assert_eq!(qbinom_base_q(&ctx, 2, 1).unwrap(), expect);
        assert_eq!(qnum_base_q(&ctx, 2).unwrap(), expect);
    }

    #[test]
    fn evaluate_frozen_values() {
        let pt = EvalPoint::from_fractions(2, 1, 1, 1).unwrap();
        // q + q^{-1} at q=2 -> 5/2
        let qp = sym().qp();
        assert_eq!(qp.evaluate(&pt).unwrap(), QNum::rational(rat(5, 2)));
        // s^2 at q=2 -> 5/2
        let s2 = Scalar::sqrt_qp().mul(&Scalar::sqrt_qp());
        assert_eq!(s2.evaluate(&pt).unwrap(), QNum::rational(rat(5, 2)));
        // [2] at q=2 -> 1 + 2^{-4} = 17/16
        let two = qnum(&sym(), 2).unwrap();
        assert_eq!(two.evaluate(&pt).unwrap(), QNum::rational(rat(17, 16)));
    }

    #[test]
    fn evaluate_reports_vanishing_denominator() {
        // 1/(q - 2) blows up at q = 2.
        let bad = Scalar::q_pow(1).sub(&Scalar::from_int(2)).inv().unwrap();
        let pt = EvalPoint::from_fractions(2, 1, 1, 1).unwrap();
        let err = bad.evaluate(&pt).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("q - 2"), "error should name the factor: {msg}");
    }

    #[test]
    fn c_zero_context_kills_positive_powers_and_rejects_negative() {
        let ctx = SymCtx::c_zero();
        assert!(ctx.mono(&rat(3, 1), 2, 1).unwrap().is_zero());
        assert_eq!(ctx.mono(&rat(3, 1), 2, 0).unwrap(), Scalar::monomial(&rat(3, 1), 2, 0));
        assert!(ctx.mono(&rat(3, 1), 0, -2).is_err());
    }

    #[test]
    fn rational_c_context_folds_constants() {
        let ctx = SymCtx::with_c(rat(2, 1));
        // c^{-2} -> 1/4
        let x = ctx.mono(&rat(1, 1), 0, -2).unwrap();
        assert_eq!(x, Scalar::from_big_rational(&rat(1, 4)));
    }

    #[test]
    fn numeric_context_matches_symbolic_evaluation() {
        let pt = EvalPoint::from_fractions(5, 3, 2, 1).unwrap();
        let num = NumCtx::new(pt.clone());
        let symv = qbinom(&sym(), 4, 2).unwrap().evaluate(&pt).unwrap();
        let numv = qbinom(&num, 4, 2).unwrap();
        assert_eq!(symv, numv);
        // and with the radical involved
        let s_sym = sym().sqrt_qp().mul(&sym().qp()).evaluate(&pt).unwrap();
        let s_num = num.sqrt_qp().mul(&num.qp());
        assert_eq!(s_sym, s_num);
    }

    #[test]
    fn scalar_json_roundtrip() {
        let x = qbinom(&sym(), 3, 1)
            .unwrap()
            .mul(&Scalar::monomial(&rat(-7, 3), 2, -1))
            .add(&Scalar::sqrt_qp());
        let text = serde_json::to_string(&x).unwrap();
        let back: Scalar = serde_json::from_str(&text).unwrap();
        assert_eq!(back, x);
        // shape sanity: top-level a/b with num/den triples
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(v.get("a").and_then(|a| a.get("num")).is_some());
        assert!(v.get("b").and_then(|b| b.get("den")).is_some());
    }

    // -- randomized field axioms --------------------------------------------

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        let term = (-3i64..4, -3i64..4, -4i64..5).prop_map(|(n, eq, ec)| {
            Scalar::monomial(&BigRational::from(BigInt::from(n)), eq, ec)
        });
        (proptest::collection::vec(term, 1..4), any::<bool>()).prop_map(
            |(terms, with_s)| {
                let mut acc = Scalar::zero();
                for (i, t) in terms.into_iter().enumerate() {
                    if with_s && i == 0 {
                        acc = acc.add(&t.mul(&Scalar::sqrt_qp()));
                    } else {
                        acc = acc.add(&t);
                    }
                }
                acc
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn field_axioms(x in arb_scalar(), y in arb_scalar(), z in arb_scalar()) {
            prop_assert_eq!(x.add(&y).add(&z), x.add(&y.add(&z)));
            prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
            prop_assert_eq!(x.mul(&y), y.mul(&x));
            prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
            prop_assert_eq!(x.sub(&x), Scalar::zero());
            if !x.is_zero() {
                prop_assert_eq!(x.mul(&x.inv().unwrap()), Scalar::one());
            }
        }

        #[test]
        fn evaluation_is_a_ring_homomorphism(x in arb_scalar(), y in arb_scalar()) {
            let pt = EvalPoint::from_fractions(5, 3, 2, 1).unwrap();
            let ex = x.evaluate(&pt).unwrap();
            let ey = y.evaluate(&pt).unwrap();
            prop_assert_eq!(x.mul(&y).evaluate(&pt).unwrap(), ex.mul(&ey));
            prop_assert_eq!(x.add(&y).evaluate(&pt).unwrap(), ex.add(&ey));
        }

        #[test]
        fn qbinom_is_laurent(m in 0i64..=8) {
            // Denominator reduces to a unit monomial for every 0 ≤ p ≤ m ≤ 8.
            let ctx = sym();
            for p in 0..=m {
                let b = qbinom(&ctx, m, p).unwrap();
                // A Laurent polynomial times a suitable q-power clears all
                // negative exponents: num/den with den a monomial.
                prop_assert!(b.is_laurent(), "m={} p={}: {}", m, p, b);
            }
        }

        #[test]
        fn json_roundtrip_random(x in arb_scalar()) {
            let text = serde_json::to_string(&x).unwrap();
            let back: Scalar = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(back, x);
        }
    }
}
