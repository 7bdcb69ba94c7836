//! Sparse two-variable integer polynomials.
//!
//! These are the raw material for the rational-function coefficients used
//! everywhere else: polynomials in `q` and `c` with arbitrary-precision
//! integer coefficients and non-negative exponents. Negative powers never
//! appear at this layer — a quotient of two `Poly` values (see `ratfn`)
//! represents them by putting the monomial in the denominator.
//!
//! Exponent pairs are packed into a `u64` key, `(eq << 32) | ec`, so the
//! natural key order is lexicographic in (q-exponent, c-exponent). That
//! order is the canonical monomial order of the crate: "leading term"
//! always means the term with the largest packed key.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Packs a (q-exponent, c-exponent) pair into the canonical key.
#[inline]
pub(crate) fn pack(eq: u32, ec: u32) -> u64 {
    ((eq as u64) << 32) | ec as u64
}

/// Splits a packed key back into (q-exponent, c-exponent).
#[inline]
pub(crate) fn unpack(key: u64) -> (u32, u32) {
    ((key >> 32) as u32, (key & 0xffff_ffff) as u32)
}

/// A sparse polynomial in `q` and `c` over the integers.
///
/// Invariant: no stored coefficient is zero.
#[derive(Clone, PartialEq, Eq, Default)]
pub(crate) struct Poly {
    terms: BTreeMap<u64, BigInt>,
}

impl Poly {
    pub(crate) fn zero() -> Self {
        Poly {
            terms: BTreeMap::new(),
        }
    }

    pub(crate) fn one() -> Self {
        Poly::constant(BigInt::one())
    }

    pub(crate) fn constant(n: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !n.is_zero() {
            terms.insert(0u64, n);
        }
        Poly { terms }
    }

    pub(crate) fn monomial(coeff: BigInt, eq: u32, ec: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(pack(eq, ec), coeff);
        }
        Poly { terms }
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|v| v.is_one())
    }

    /// True when the polynomial is a single term.
    pub(crate) fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub(crate) fn terms(&self) -> impl Iterator<Item = (u64, &BigInt)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub(crate) fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Largest packed key, i.e. the leading monomial in the canonical order.
    pub(crate) fn leading_key(&self) -> Option<u64> {
        self.terms.keys().next_back().copied()
    }

    pub(crate) fn leading_coeff(&self) -> Option<&BigInt> {
        self.terms.values().next_back()
    }

    pub(crate) fn add_term(&mut self, key: u64, coeff: &BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v += coeff;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, coeff.clone());
            }
        }
    }

    pub(crate) fn add(&self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (k, v) in rhs.terms.iter() {
            out.add_term(*k, v);
        }
        out
    }

    pub(crate) fn sub(&self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (k, v) in rhs.terms.iter() {
            out.add_term(*k, &(-v));
        }
        out
    }

    pub(crate) fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect(),
        }
    }

    pub(crate) fn mul(&self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        // Schoolbook sparse product; term counts stay small at desk scale.
        let mut out = Poly::zero();
        for (ka, va) in self.terms.iter() {
            for (kb, vb) in rhs.terms.iter() {
                out.add_term(ka + kb, &(va * vb));
            }
        }
        out
    }

    pub(crate) fn mul_bigint(&self, n: &BigInt) -> Poly {
        if n.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(k, v)| (*k, v * n)).collect(),
        }
    }

    /// Multiplies by the monomial `q^eq c^ec` (exponent shift).
    pub(crate) fn mul_monomial(&self, eq: u32, ec: u32) -> Poly {
        let shift = pack(eq, ec);
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k + shift, v.clone()))
                .collect(),
        }
    }

    /// Divides every exponent pair by the given monomial; panics if some
    /// term is not divisible (callers only strip known common factors).
    fn div_monomial(&self, eq: u32, ec: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| {
                    let (kq, kc) = unpack(*k);
                    debug_assert!(kq >= eq && kc >= ec);
                    (pack(kq - eq, kc - ec), v.clone())
                })
                .collect(),
        }
    }

    /// (min q-exponent, min c-exponent) over all terms — the monomial content.
    pub(crate) fn min_exponents(&self) -> (u32, u32) {
        let mut mq = u32::MAX;
        let mut mc = u32::MAX;
        for k in self.terms.keys() {
            let (eq, ec) = unpack(*k);
            mq = mq.min(eq);
            mc = mc.min(ec);
            if mq == 0 && mc == 0 {
                break;
            }
        }
        if self.terms.is_empty() {
            (0, 0)
        } else {
            (mq, mc)
        }
    }

    pub(crate) fn max_exponents(&self) -> (u32, u32) {
        let mut mq = 0;
        let mut mc = 0;
        for k in self.terms.keys() {
            let (eq, ec) = unpack(*k);
            mq = mq.max(eq);
            mc = mc.max(ec);
        }
        (mq, mc)
    }

    /// Positive gcd of all integer coefficients (zero for the zero polynomial).
    pub(crate) fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for v in self.terms.values() {
            g = g.gcd(v);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divides all coefficients by `n`; panics if not exact (internal use on
    /// known divisors such as the content).
    pub(crate) fn div_bigint_exact(&self, n: &BigInt) -> Poly {
        debug_assert!(!n.is_zero());
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| {
                    let (d, r) = v.div_rem(n);
                    debug_assert!(r.is_zero());
                    (*k, d)
                })
                .collect(),
        }
    }

    /// Exact polynomial division: returns `self / d` when the division holds
    /// in ℤ[q,c], otherwise `None`.
    pub(crate) fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let dk = d.leading_key().unwrap();
        let (dq, dc) = unpack(dk);
        let dl = d.leading_coeff().unwrap().clone();
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some(rk) = rem.leading_key() {
            let (rq, rc) = unpack(rk);
            if rq < dq || rc < dc {
                return None;
            }
            let rl = rem.leading_coeff().unwrap();
            let (qc, qr) = rl.div_rem(&dl);
            if !qr.is_zero() {
                return None;
            }
            let qkey = pack(rq - dq, rc - dc);
            let term = Poly {
                terms: BTreeMap::from([(qkey, qc.clone())]),
            };
            quot.add_term(qkey, &qc);
            rem = rem.sub(&term.mul(d));
        }
        Some(quot)
    }

    /// Evaluates at rational values of `q` and `c`.
    pub(crate) fn eval(&self, q: &BigRational, c: &BigRational) -> BigRational {
        let mut qpow: Vec<BigRational> = vec![BigRational::one()];
        let mut cpow: Vec<BigRational> = vec![BigRational::one()];
        let mut acc = BigRational::zero();
        for (k, v) in self.terms.iter() {
            let (eq, ec) = unpack(*k);
            while qpow.len() <= eq as usize {
                let next = qpow.last().unwrap() * q;
                qpow.push(next);
            }
            while cpow.len() <= ec as usize {
                let next = cpow.last().unwrap() * c;
                cpow.push(next);
            }
            acc += &qpow[eq as usize] * &cpow[ec as usize] * BigRational::from(v.clone());
        }
        acc
    }

    /// Greatest common divisor in ℤ[q,c], normalized to a positive leading
    /// coefficient. Includes the integer content and monomial factors.
    pub(crate) fn gcd(a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() {
            return normalize_sign(b.clone());
        }
        if b.is_zero() {
            return normalize_sign(a.clone());
        }
        // Split off monomial contents so the recursive core sees polynomials
        // not divisible by q or c.
        let (aq, ac) = a.min_exponents();
        let (bq, bc) = b.min_exponents();
        let (mq, mc) = (aq.min(bq), ac.min(bc));
        let a0 = a.div_monomial(aq, ac);
        let b0 = b.div_monomial(bq, bc);
        let ia = a0.content();
        let ib = b0.content();
        let ig = ia.gcd(&ib);
        let pa = a0.div_bigint_exact(&ia);
        let pb = b0.div_bigint_exact(&ib);
        let core = gcd_primitive(&pa, &pb);
        normalize_sign(core.mul_bigint(&ig).mul_monomial(mq, mc))
    }
}

fn normalize_sign(p: Poly) -> Poly {
    match p.leading_coeff() {
        Some(lc) if lc.is_negative() => p.neg(),
        _ => p,
    }
}

/// Gcd of two primitive polynomials with no monomial factor.
fn gcd_primitive(a: &Poly, b: &Poly) -> Poly {
    if a.is_one() || b.is_one() || a.is_monomial() || b.is_monomial() {
        // A primitive monomial with zero min-exponents is a unit.
        return Poly::one();
    }
    let (_, ac) = a.max_exponents();
    let (_, bc) = b.max_exponents();
    if ac == 0 && bc == 0 {
        // Both univariate in q.
        let g = gcd_uni(&to_uni_q(a), &to_uni_q(b));
        return from_uni_q(&g);
    }
    let (aq, _) = a.max_exponents();
    let (bq, _) = b.max_exponents();
    if aq == 0 && bq == 0 {
        // Both univariate in c.
        let g = gcd_uni(&to_uni_c(a), &to_uni_c(b));
        return from_uni_c(&g);
    }
    // Genuinely bivariate: primitive PRS in c over ℤ[q].
    from_cpoly(&gcd_bivariate(&to_cpoly(a), &to_cpoly(b)))
}

// ---------------------------------------------------------------------------
// Dense univariate helpers (coefficient vectors, index = exponent).
// ---------------------------------------------------------------------------

type Uni = Vec<BigInt>;

fn uni_trim(v: &mut Uni) {
    while v.last().is_some_and(|x| x.is_zero()) {
        v.pop();
    }
}

fn uni_deg(v: &Uni) -> usize {
    debug_assert!(!v.is_empty());
    v.len() - 1
}

fn uni_content(v: &Uni) -> BigInt {
    let mut g = BigInt::zero();
    for x in v {
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    g
}

fn uni_primitive(mut v: Uni) -> Uni {
    uni_trim(&mut v);
    if v.is_empty() {
        return v;
    }
    let c = uni_content(&v);
    for x in v.iter_mut() {
        let (d, r) = x.div_rem(&c);
        debug_assert!(r.is_zero());
        *x = d;
    }
    if v.last().unwrap().is_negative() {
        for x in v.iter_mut() {
            *x = -&*x;
        }
    }
    v
}

/// Pseudo-remainder of dense univariate polynomials:
/// `lc(b)^(deg a - deg b + 1) * a  mod  b`.
fn uni_pseudo_rem(a: &Uni, b: &Uni) -> Uni {
    let db = uni_deg(b);
    let lb = b.last().unwrap().clone();
    let mut r = a.clone();
    while r.len() > db {
        let dr = r.len() - 1;
        let lead = r.last().unwrap().clone();
        if lead.is_zero() {
            r.pop();
            continue;
        }
        for x in r.iter_mut() {
            *x = &*x * &lb;
        }
        let shift = dr - db;
        for (i, bx) in b.iter().enumerate() {
            let delta = &lead * bx;
            r[i + shift] = &r[i + shift] - delta;
        }
        debug_assert!(r.last().unwrap().is_zero());
        uni_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

/// Primitive-PRS gcd for dense univariate integer polynomials.
/// Returns the primitive gcd (positive leading coefficient); integer content
/// of the inputs is intentionally *not* included.
fn gcd_uni(a: &Uni, b: &Uni) -> Uni {
    let mut a = uni_primitive(a.clone());
    let mut b = uni_primitive(b.clone());
    if a.is_empty() {
        return if b.is_empty() { vec![] } else { b };
    }
    if b.is_empty() {
        return a;
    }
    if uni_deg(&a) < uni_deg(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        if b.is_empty() {
            return a;
        }
        if uni_deg(&b) == 0 {
            return vec![BigInt::one()];
        }
        let r = uni_pseudo_rem(&a, &b);
        a = b;
        b = uni_primitive(r);
    }
}

fn uni_div_exact(a: &Uni, d: &Uni) -> Option<Uni> {
    if d.is_empty() {
        return None;
    }
    if a.is_empty() {
        return Some(vec![]);
    }
    if a.len() < d.len() {
        return None;
    }
    let mut r = a.clone();
    let mut q = vec![BigInt::zero(); a.len() - d.len() + 1];
    let dl = d.last().unwrap();
    while !r.is_empty() && r.len() >= d.len() {
        let (qc, qr) = r.last().unwrap().div_rem(dl);
        if qr.is_zero() && !qc.is_zero() {
            let shift = r.len() - d.len();
            q[shift] = qc.clone();
            for (i, dx) in d.iter().enumerate() {
                let delta = &qc * dx;
                r[i + shift] = &r[i + shift] - delta;
            }
            uni_trim(&mut r);
        } else {
            return None;
        }
    }
    if r.is_empty() {
        Some(q)
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// Bivariate core: polynomials in c whose coefficients live in ℤ[q].
// ---------------------------------------------------------------------------

/// Index = c-degree; entries are dense polynomials in q.
type CPoly = Vec<Uni>;

fn cp_trim(v: &mut CPoly) {
    while v.last().is_some_and(|x| x.is_empty()) {
        v.pop();
    }
}

fn cp_content(v: &CPoly) -> Uni {
    let mut g: Uni = vec![];
    for coeff in v {
        if coeff.is_empty() {
            continue;
        }
        g = gcd_uni(&g, coeff);
        if g.len() == 1 && g[0].is_one() {
            break;
        }
    }
    g
}

fn cp_primitive(mut v: CPoly) -> (CPoly, Uni) {
    cp_trim(&mut v);
    if v.is_empty() {
        return (v, vec![]);
    }
    let cont = cp_content(&v);
    let mut content_scaled = cont.clone();
    // Fold the integer content of the leading coefficient's sign in, so the
    // primitive part has a sign-stable leading coefficient.
    let prim: CPoly = v
        .iter()
        .map(|cf| {
            if cf.is_empty() {
                vec![]
            } else {
                uni_div_exact(cf, &cont).expect("content divides every coefficient")
            }
        })
        .collect();
    let mut prim = prim;
    if prim
        .last()
        .and_then(|c| c.last())
        .is_some_and(|x| x.is_negative())
    {
        for cf in prim.iter_mut() {
            for x in cf.iter_mut() {
                *x = -&*x;
            }
        }
        for x in content_scaled.iter_mut() {
            *x = -&*x;
        }
    }
    (prim, content_scaled)
}

fn uni_mul(a: &Uni, b: &Uni) -> Uni {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + x * y;
        }
    }
    uni_trim(&mut out);
    out
}

fn uni_sub(a: &Uni, b: &Uni) -> Uni {
    let mut out = a.clone();
    if out.len() < b.len() {
        out.resize(b.len(), BigInt::zero());
    }
    for (i, y) in b.iter().enumerate() {
        out[i] = &out[i] - y;
    }
    uni_trim(&mut out);
    out
}

/// Pseudo-remainder in the variable c, coefficients in ℤ[q].
fn cp_pseudo_rem(a: &CPoly, b: &CPoly) -> CPoly {
    let db = b.len() - 1;
    let lb = b.last().unwrap().clone();
    let mut r = a.clone();
    cp_trim(&mut r);
    while r.len() > db {
        let dr = r.len() - 1;
        let lead = r.last().unwrap().clone();
        if lead.is_empty() {
            r.pop();
            continue;
        }
        for cf in r.iter_mut() {
            *cf = uni_mul(cf, &lb);
        }
        let shift = dr - db;
        for (i, bx) in b.iter().enumerate() {
            let delta = uni_mul(&lead, bx);
            r[i + shift] = uni_sub(&r[i + shift], &delta);
        }
        debug_assert!(r.last().unwrap().is_empty());
        cp_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

/// Primitive-PRS gcd of bivariate polynomials (primitive inputs assumed
/// handled by the caller at the integer level; q-content is handled here).
fn gcd_bivariate(a: &CPoly, b: &CPoly) -> CPoly {
    let (mut pa, ca) = cp_primitive(a.clone());
    let (mut pb, cb) = cp_primitive(b.clone());
    let gc = gcd_uni(&ca, &cb);
    if pa.is_empty() || pb.is_empty() {
        let other = if pa.is_empty() { pb } else { pa };
        let scaled: CPoly = other
            .iter()
            .map(|cf| {
                if cf.is_empty() {
                    vec![]
                } else {
                    uni_mul(cf, &gc)
                }
            })
            .collect();
        return scaled;
    }
    if pa.len() < pb.len() {
        std::mem::swap(&mut pa, &mut pb);
    }
    loop {
        if pb.is_empty() {
            break;
        }
        if pb.len() == 1 {
            // Degree zero in c; a primitive part of degree 0 is a q-poly of
            // content one times possibly-nontrivial q-part... by primitivity
            // in c the gcd of the pair divides it, so the c-degree of the gcd
            // is zero and the primitive gcd is the q-gcd of everything, which
            // the content pass already removed: unit.
            pa = vec![vec![BigInt::one()]];
            break;
        }
        let r = cp_pseudo_rem(&pa, &pb);
        pa = pb;
        let (prim, _) = cp_primitive(r);
        pb = prim;
    }
    // pa now holds the primitive gcd; multiply the q-content gcd back in.
    pa.iter()
        .map(|cf| {
            if cf.is_empty() {
                vec![]
            } else {
                uni_mul(cf, &gc)
            }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Conversions between sparse and dense forms.
// ---------------------------------------------------------------------------

fn to_uni_q(p: &Poly) -> Uni {
    let (dq, _) = p.max_exponents();
    let mut v = vec![BigInt::zero(); dq as usize + 1];
    for (k, coeff) in p.terms() {
        let (eq, _) = unpack(k);
        v[eq as usize] = coeff.clone();
    }
    uni_trim(&mut v);
    v
}

fn from_uni_q(v: &Uni) -> Poly {
    let mut p = Poly::zero();
    for (i, coeff) in v.iter().enumerate() {
        p.add_term(pack(i as u32, 0), coeff);
    }
    p
}

fn to_uni_c(p: &Poly) -> Uni {
    let (_, dc) = p.max_exponents();
    let mut v = vec![BigInt::zero(); dc as usize + 1];
    for (k, coeff) in p.terms() {
        let (_, ec) = unpack(k);
        v[ec as usize] = coeff.clone();
    }
    uni_trim(&mut v);
    v
}

fn from_uni_c(v: &Uni) -> Poly {
    let mut p = Poly::zero();
    for (i, coeff) in v.iter().enumerate() {
        p.add_term(pack(0, i as u32), coeff);
    }
    p
}

fn to_cpoly(p: &Poly) -> CPoly {
    let (dq, dc) = p.max_exponents();
    let mut v: CPoly = vec![vec![]; dc as usize + 1];
    for (k, coeff) in p.terms() {
        let (eq, ec) = unpack(k);
        let cf = &mut v[ec as usize];
        if cf.len() <= eq as usize {
            cf.resize(dq as usize + 1, BigInt::zero());
        }
        cf[eq as usize] = coeff.clone();
    }
    for cf in v.iter_mut() {
        uni_trim(cf);
    }
    cp_trim(&mut v);
    v
}

fn from_cpoly(v: &CPoly) -> Poly {
    let mut p = Poly::zero();
    for (ec, cf) in v.iter().enumerate() {
        for (eq, coeff) in cf.iter().enumerate() {
            p.add_term(pack(eq as u32, ec as u32), coeff);
        }
    }
    p
}

// ---------------------------------------------------------------------------
// Display
// ---------------------------------------------------------------------------

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    /// Renders terms in descending monomial order, `c` factor first
    /// (e.g. `2 c^2 q^3 - q + 1`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, coeff) in self.terms.iter().rev() {
            let (eq, ec) = unpack(*k);
            let neg = coeff.is_negative();
            let abs = coeff.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || (eq == 0 && ec == 0) {
                factors.push(abs.to_string());
            }
            if ec == 1 {
                factors.push("c".into());
            } else if ec > 1 {
                factors.push(format!("c^{ec}"));
            }
            if eq == 1 {
                factors.push("q".into());
            } else if eq > 1 {
                factors.push(format!("q^{eq}"));
            }
            write!(f, "{}", factors.join(" "))?;
        }
        Ok(())
    }
}
