//! The deformed Clifford algebra `Cl_q^N(c^2)` on generators `γ_1, …, γ_N`.
//!
//! Products are carried to the normal form spanned by the `2^N` strictly
//! increasing words `γ_{i_1} γ_{i_2} ⋯ γ_{i_k}` (`i_1 < i_2 < ⋯ < i_k`) by
//! repeatedly rewriting adjacent out-of-order pairs.  Writing `i' = N + 1 - i`
//! for the index reflection and `n = ⌊N/2⌋`, the rewrite rules are
//!
//! ```text
//! γ_i γ_i   = 0                                           (i ≠ i')
//! γ_j γ_i   = -q² γ_i γ_j                                 (j > i, j ≠ i')
//! γ_i' γ_i  = -γ_i γ_i'
//!             + (q² - q⁻²) Σ_{j<i} q^{2j-2i+2} γ_j γ_j'
//!             + c² q^{N-2i+1} (q + q⁻¹)                    (i < i')
//! γ_{n+1}²  = (q - q⁻¹) Σ_{j≤n} q^{2j-2n} γ_j γ_j' + c²    (N odd)
//! ```
//!
//! Every right-hand side is itself in normal form, so the two-letter products
//! form a finite table computed once per algebra context; general rewriting
//! only ever substitutes table rows.  Each substitution either shortens a word
//! by two letters or removes an inversion, so the scan (left to right, backing
//! up one position after each firing) terminates.
//!
//! Monomials are stored as `u32` bitmasks with bit `i-1` standing for `γ_i`,
//! which bounds the supported rank at `N ≤ 16` — far above the sizes where a
//! dense `2^N` basis is usable anyway.  Setting `c = 0` in the coefficient
//! context yields the q-exterior algebra `Λ_q(N)` with the same engine.

mod center;
mod ideals;
mod verify;

pub use center::{centralizer_solve, z0, z1, z_central};
pub use ideals::{
    coords_in_ideal, ideal_basis, minimal_idempotent, phi, psi, rho, two_sided_ideal_dim,
};
pub use verify::verify_defining_relations;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::RwLock;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{CoeffCtx, Field};

/// Largest supported number of generators (monomials are `u32` bitmasks).
pub const MAX_GENERATORS: usize = 16;

/// A grading of the algebra, selected when calling [`AlgebraContext::degree`].
///
/// * `Parity` — the ℤ₂-grading by word length mod 2 (the rewrite rules only
///   ever change word length by even amounts, so it survives multiplication).
/// * `Axis(k)` for `1 ≤ k ≤ n` — the ℤ-grading under which `γ_k` has degree
///   `+1`, `γ_k'` has degree `-1`, and every other generator degree `0`.
/// * `Middle` — for odd `N`, the ℤ₂-grading counting occurrences of the
///   self-paired middle generator `γ_{n+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grading {
    Parity,
    Axis(usize),
    Middle,
}

/// An element of `Cl_q^N(c^2)`, stored as a normal-form linear combination.
///
/// The `tag` fingerprints the algebra context (rank and coefficient
/// interpretation) that produced the element; operations in
/// [`AlgebraContext`] refuse to combine elements from different contexts.
#[derive(Clone, PartialEq)]
pub struct CliffordElement<F: Field> {
    terms: BTreeMap<u32, F>,
    tag: u64,
}

impl<F: Field> CliffordElement<F> {
    fn empty(tag: u64) -> Self {
        CliffordElement {
            terms: BTreeMap::new(),
            tag,
        }
    }

    /// True when the element is the zero vector.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of nonzero normal-form monomials.
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Iterate over `(mask, coefficient)` pairs in increasing mask order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &F)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    /// The coefficient of the monomial `mask` (zero when absent).
    pub fn coeff(&self, mask: u32) -> F {
        self.terms.get(&mask).cloned().unwrap_or_else(F::zero)
    }

    /// The raw term map, keyed by monomial mask.  Exposed for comparisons
    /// across coefficient contexts (for instance the `c`-rescaling check),
    /// where the context tags intentionally differ.
    pub fn term_map(&self) -> &BTreeMap<u32, F> {
        &self.terms
    }


    /// View the element as a sparse coordinate vector for linear algebra
    /// (monomial masks widened to `u64` keys).
    pub(crate) fn to_sparse(&self) -> crate::linalg::SparseVec<F> {
        self.terms
            .iter()
            .map(|(m, c)| (u64::from(*m), c.clone()))
            .collect()
    }

    fn assert_same(&self, other: &Self) {
        assert_eq!(
            self.tag, other.tag,
            "combined Clifford elements from different algebra contexts"
        );
    }

    pub(crate) fn add_term(&mut self, mask: u32, coeff: F) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(mask) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&coeff);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Sum of two elements of the same context.
    pub fn add(&self, other: &Self) -> Self {
        self.assert_same(other);
        let mut out = self.clone();
        for (m, c) in other.terms.iter() {
            out.add_term(*m, c.clone());
        }
        out
    }

    /// Difference of two elements of the same context.
    pub fn sub(&self, other: &Self) -> Self {
        self.assert_same(other);
        let mut out = self.clone();
        for (m, c) in other.terms.iter() {
            out.add_term(*m, c.neg());
        }
        out
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        let mut out = Self::empty(self.tag);
        for (m, c) in self.terms.iter() {
            out.terms.insert(*m, c.neg());
        }
        out
    }

    /// Multiply every coefficient by the scalar `factor`.
    pub fn scale(&self, factor: &F) -> Self {
        let mut out = Self::empty(self.tag);
        if factor.is_zero() {
            return out;
        }
        for (m, c) in self.terms.iter() {
            let p = c.mul(factor);
            if !p.is_zero() {
                out.terms.insert(*m, p);
            }
        }
        out
    }
}

impl<F: Field> fmt::Debug for CliffordElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_terms(&self.terms, u32::BITS as usize))
    }
}

/// Render a term map as `coeff g1g3 + …`, lowest monomial first.
fn render_terms<F: Field>(terms: &BTreeMap<u32, F>, width: usize) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (mask, coeff)) in terms.iter().enumerate() {
        let word = mask_to_word_string(*mask, width);
        let cs = format!("{coeff}");
        let piece = if word.is_empty() {
            if needs_group(&cs) {
                format!("({cs})")
            } else {
                cs
            }
        } else if cs == "1" {
            word
        } else if cs == "-1" {
            format!("-{word}")
        } else if needs_group(&cs) || cs.starts_with('-') {
            format!("({cs}) {word}")
        } else {
            format!("{cs} {word}")
        };
        if i == 0 {
            out.push_str(&piece);
        } else if let Some(rest) = piece.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&piece);
        }
    }
    out
}

/// A coefficient string needs grouping when it has additive structure that is
/// not already enclosed in one outer pair of parentheses.
fn needs_group(cs: &str) -> bool {
    if !cs.contains(|ch| ch == '+' || ch == ' ') {
        return false;
    }
    !wrapped_as_one_group(cs)
}

fn wrapped_as_one_group(cs: &str) -> bool {
    let bytes = cs.as_bytes();
    if bytes.first() != Some(&b'(') || bytes.last() != Some(&b')') {
        return false;
    }
    let mut depth = 0usize;
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => {
                depth -= 1;
                if depth == 0 {
                    return i == bytes.len() - 1;
                }
            }
            _ => {}
        }
    }
    false
}

fn mask_to_word_string(mask: u32, width: usize) -> String {
    let mut s = String::new();
    for i in 1..=width {
        if mask >> (i - 1) & 1 == 1 {
            s.push('g');
            s.push_str(&i.to_string());
        }
    }
    s
}

/// The algebra `Cl_q^N(c^2)` over a coefficient context `C`.
///
/// Construction validates `3 ≤ N ≤ 16`, precomputes the two-letter rewrite
/// table, and installs a cache of monomial-pair products that fills in as the
/// context is used.
pub struct AlgebraContext<C: CoeffCtx> {
    n_gens: usize,
    n: usize,
    epsilon: usize,
    coeff: C,
    tag: u64,
    /// Normal form of `γ_a γ_b` at index `(a-1) * N + (b-1)`.
    table: Vec<CliffordElement<C::F>>,
    /// Cache of normal-form products of basis monomials, keyed by
    /// `(mask_a << 16) | mask_b`.
    product_cache: RwLock<HashMap<u64, CliffordElement<C::F>>>,
}

impl<C: CoeffCtx> AlgebraContext<C> {
    /// Create the algebra on `n_gens` generators over the given coefficients.
    pub fn new(n_gens: usize, coeff: C) -> Result<Self> {
        if !(3..=MAX_GENERATORS).contains(&n_gens) {
            return Err(Error::InvalidInput(format!(
                "rank N={n_gens} outside supported range 3..={MAX_GENERATORS}"
            )));
        }
        let n = n_gens / 2;
        let epsilon = n_gens % 2;
        let tag = context_tag(n_gens, &coeff);
        let mut ctx = AlgebraContext {
            n_gens,
            n,
            epsilon,
            coeff,
            tag,
            table: Vec::new(),
            product_cache: RwLock::new(HashMap::new()),
        };
        let mut table = Vec::with_capacity(n_gens * n_gens);
        for a in 1..=n_gens {
            for b in 1..=n_gens {
                table.push(ctx.pair_product(a, b)?);
            }
        }
        ctx.table = table;
        Ok(ctx)
    }

    /// Number of generators `N`.
    pub fn n_gens(&self) -> usize {
        self.n_gens
    }

    /// The half-rank `n = ⌊N/2⌋`.
    pub fn half_rank(&self) -> usize {
        self.n
    }

    /// True when `N` is odd (there is a self-paired middle generator).
    pub fn is_odd(&self) -> bool {
        self.epsilon == 1
    }

    /// The coefficient context.
    pub fn coeff_ctx(&self) -> &C {
        &self.coeff
    }

    /// The reflected index `i' = N + 1 - i`.
    pub fn prime(&self, i: usize) -> usize {
        self.n_gens + 1 - i
    }

    /// The zero element.
    pub fn zero(&self) -> CliffordElement<C::F> {
        CliffordElement::empty(self.tag)
    }

    /// The unit element.
    pub fn one(&self) -> CliffordElement<C::F> {
        self.scalar(self.coeff.int(1))
    }

    /// A scalar multiple of the unit.
    pub fn scalar(&self, value: C::F) -> CliffordElement<C::F> {
        let mut el = self.zero();
        el.add_term(0, value);
        el
    }

    /// The generator `γ_i` (`1 ≤ i ≤ N`).
    pub fn gamma(&self, i: usize) -> Result<CliffordElement<C::F>> {
        self.check_index(i)?;
        Ok(self.basis_monomial(1 << (i - 1)))
    }

    /// The normal-form basis monomial for a bitmask (bit `i-1` ⇔ `γ_i`).
    pub fn basis_monomial(&self, mask: u32) -> CliffordElement<C::F> {
        debug_assert!(mask < (1u32 << self.n_gens));
        let mut el = self.zero();
        el.add_term(mask, self.coeff.int(1));
        el
    }

    /// Build an element from `(mask, coefficient)` pairs.
    pub fn element_from_terms(
        &self,
        pairs: impl IntoIterator<Item = (u32, C::F)>,
    ) -> Result<CliffordElement<C::F>> {
        let mut el = self.zero();
        for (mask, coeff) in pairs {
            if mask >= (1u32 << self.n_gens) {
                return Err(Error::InvalidInput(format!(
                    "monomial mask {mask:#b} uses generators beyond N={}",
                    self.n_gens
                )));
            }
            el.add_term(mask, coeff);
        }
        Ok(el)
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n_gens {
            return Err(Error::InvalidInput(format!(
                "generator index {i} outside 1..={}",
                self.n_gens
            )));
        }
        Ok(())
    }

    fn check_element(&self, el: &CliffordElement<C::F>) -> Result<()> {
        if el.tag != self.tag {
            return Err(Error::InvalidInput(
                "element belongs to a different algebra context".into(),
            ));
        }
        Ok(())
    }

    /// Normal form of the two-letter word `γ_a γ_b`.
    fn pair_product(&self, a: usize, b: usize) -> Result<CliffordElement<C::F>> {
        let bit = |i: usize| 1u32 << (i - 1);
        let pair_mask = |i: usize| bit(i) | bit(self.prime(i));
        if a < b {
            return Ok(self.basis_monomial(bit(a) | bit(b)));
        }
        if a == b {
            if self.epsilon == 1 && a == self.n + 1 {
                // Middle square: (q - q⁻¹) Σ_{j≤n} q^{2j-2n} γ_j γ_j' + c².
                let mut el = self.zero();
                for j in 1..=self.n {
                    let w = self
                        .coeff
                        .qm()
                        .mul(&self.coeff.q_pow(2 * j as i64 - 2 * self.n as i64));
                    el.add_term(pair_mask(j), w);
                }
                el.add_term(0, self.coeff.mono(&BigRational::from_integer(1.into()), 0, 2)?);
                return Ok(el);
            }
            return Ok(self.zero());
        }
        // a > b from here on.
        if a == self.prime(b) {
            // γ_i' γ_i with i = b < i':
            //   -γ_i γ_i' + (q² - q⁻²) Σ_{j<i} q^{2j-2i+2} γ_j γ_j'
            //   + c² q^{N-2i+1} (q + q⁻¹).
            let i = b;
            let mut el = self.zero();
            el.add_term(pair_mask(i), self.coeff.int(-1));
            let spread = self.coeff.q_pow(2).sub(&self.coeff.q_pow(-2));
            for j in 1..i {
                let w = spread.mul(&self.coeff.q_pow(2 * j as i64 - 2 * i as i64 + 2));
                el.add_term(pair_mask(j), w);
            }
            let constant = self
                .coeff
                .mono(
                    &BigRational::from_integer(1.into()),
                    self.n_gens as i64 - 2 * i as i64 + 1,
                    2,
                )?
                .mul(&self.coeff.qp());
            el.add_term(0, constant);
            return Ok(el);
        }
        // Plain transposition: γ_a γ_b = -q² γ_b γ_a.
        Ok(self
            .basis_monomial(bit(a) | bit(b))
            .scale(&self.coeff.q_pow(2).neg()))
    }

    /// Normal form of an arbitrary word in the generators (indices `1..=N`,
    /// repetitions allowed, empty word ⇒ unit).
    pub fn rewrite(&self, word: &[usize]) -> Result<CliffordElement<C::F>> {
        for &i in word {
            self.check_index(i)?;
        }
        let letters: Vec<u8> = word.iter().map(|&i| i as u8).collect();
        Ok(self.rewrite_letters(letters, self.coeff.int(1), 0))
    }

    /// Worklist rewriter.  Each stack entry carries a pending word, its
    /// accumulated coefficient, and the leftmost position that could still be
    /// out of order (everything before it is known sorted and strict).
    fn rewrite_letters(
        &self,
        word: Vec<u8>,
        coeff: C::F,
        hint: usize,
    ) -> CliffordElement<C::F> {
        let mut acc = self.zero();
        let mut stack: Vec<(C::F, Vec<u8>, usize)> = vec![(coeff, word, hint)];
        while let Some((c, w, start)) = stack.pop() {
            let mut p = start;
            let mut fired = false;
            while p + 1 < w.len() {
                let (x, y) = (w[p] as usize, w[p + 1] as usize);
                if x >= y {
                    let row = &self.table[(x - 1) * self.n_gens + (y - 1)];
                    for (mask, tc) in row.terms() {
                        let mut nw = Vec::with_capacity(w.len());
                        nw.extend_from_slice(&w[..p]);
                        for i in 1..=self.n_gens {
                            if mask >> (i - 1) & 1 == 1 {
                                nw.push(i as u8);
                            }
                        }
                        nw.extend_from_slice(&w[p + 2..]);
                        stack.push((c.mul(tc), nw, p.saturating_sub(1)));
                    }
                    fired = true;
                    break;
                }
                p += 1;
            }
            if !fired {
                let mut mask = 0u32;
                for &l in &w {
                    mask |= 1 << (l - 1);
                }
                acc.add_term(mask, c);
            }
        }
        acc
    }

    /// Normal-form product of two basis monomials, with caching.
    pub(crate) fn mul_monomials(&self, a: u32, b: u32) -> CliffordElement<C::F> {
        if a == 0 {
            return self.basis_monomial(b);
        }
        if b == 0 {
            return self.basis_monomial(a);
        }
        let key = (u64::from(a) << 16) | u64::from(b);
        if let Some(hit) = self.product_cache.read().unwrap().get(&key) {
            return hit.clone();
        }
        let mut word = Vec::with_capacity(self.n_gens * 2);
        for i in 1..=self.n_gens {
            if a >> (i - 1) & 1 == 1 {
                word.push(i as u8);
            }
        }
        let junction = word.len().saturating_sub(1);
        for i in 1..=self.n_gens {
            if b >> (i - 1) & 1 == 1 {
                word.push(i as u8);
            }
        }
        let result = self.rewrite_letters(word, self.coeff.int(1), junction);
        self.product_cache
            .write()
            .unwrap()
            .insert(key, result.clone());
        result
    }

    /// Product of two elements.
    pub fn multiply(
        &self,
        x: &CliffordElement<C::F>,
        y: &CliffordElement<C::F>,
    ) -> Result<CliffordElement<C::F>> {
        self.check_element(x)?;
        self.check_element(y)?;
        let mut acc = self.zero();
        for (ma, ca) in x.terms() {
            for (mb, cb) in y.terms() {
                let factor = ca.mul(cb);
                if factor.is_zero() {
                    continue;
                }
                for (m, c) in self.mul_monomials(ma, mb).terms() {
                    acc.add_term(m, c.mul(&factor));
                }
            }
        }
        Ok(acc)
    }

    /// Product of a list of elements, left to right (unit for an empty list).
    pub fn product(
        &self,
        factors: &[CliffordElement<C::F>],
    ) -> Result<CliffordElement<C::F>> {
        let mut acc = self.one();
        for f in factors {
            acc = self.multiply(&acc, f)?;
        }
        Ok(acc)
    }

    /// Commutator `xy - yx`.
    pub fn commutator(
        &self,
        x: &CliffordElement<C::F>,
        y: &CliffordElement<C::F>,
    ) -> Result<CliffordElement<C::F>> {
        Ok(self.multiply(x, y)?.sub(&self.multiply(y, x)?))
    }

    /// Degree of a homogeneous element under the chosen grading.
    ///
    /// Returns `Ok(None)` when the element mixes degrees, and `Ok(Some(0))`
    /// for the zero element (which is homogeneous of every degree).  `Parity`
    /// and `Middle` report a ℤ₂ representative in `{0, 1}`.
    pub fn degree(
        &self,
        el: &CliffordElement<C::F>,
        grading: Grading,
    ) -> Result<Option<i64>> {
        self.check_element(el)?;
        let measure: Box<dyn Fn(u32) -> i64> = match grading {
            Grading::Parity => Box::new(|m: u32| i64::from(m.count_ones() & 1)),
            Grading::Axis(k) => {
                if k == 0 || k > self.n {
                    return Err(Error::InvalidInput(format!(
                        "axis grading index {k} outside 1..={}",
                        self.n
                    )));
                }
                let lo = k - 1;
                let hi = self.n_gens - k;
                Box::new(move |m: u32| {
                    i64::from(m >> lo & 1) - i64::from(m >> hi & 1)
                })
            }
            Grading::Middle => {
                if self.epsilon == 0 {
                    return Err(Error::InvalidInput(
                        "middle grading requires odd N".into(),
                    ));
                }
                let mid = self.n;
                Box::new(move |m: u32| i64::from(m >> mid & 1))
            }
        };
        let mut found: Option<i64> = None;
        for (mask, _) in el.terms() {
            let d = measure(mask);
            match found {
                None => found = Some(d),
                Some(prev) if prev != d => return Ok(None),
                _ => {}
            }
        }
        Ok(Some(found.unwrap_or(0)))
    }

    /// The reversing antiautomorphism `τ`, determined by `τ(γ_i) = γ_i'` and
    /// `τ(xy) = τ(y) τ(x)`.
    ///
    /// On a normal-form monomial the image is again normal-form with the same
    /// coefficient: reflecting indices reverses the order of the (distinct,
    /// increasing) letters, and reversing the product restores it, so no
    /// rewriting occurs.  The mask is simply bit-reversed within `N` bits.
    pub fn tau(&self, el: &CliffordElement<C::F>) -> Result<CliffordElement<C::F>> {
        self.check_element(el)?;
        let mut out = self.zero();
        for (mask, coeff) in el.terms() {
            let mut rev = 0u32;
            for i in 0..self.n_gens {
                if mask >> i & 1 == 1 {
                    rev |= 1 << (self.n_gens - 1 - i);
                }
            }
            out.add_term(rev, coeff.clone());
        }
        Ok(out)
    }

    /// The rescaling automorphism `γ_i ↦ α_i γ_i`, defined whenever the
    /// scale factors satisfy `α_i α_i' = 1` for every `i` (and, for odd `N`,
    /// `α_{n+1}² = 1`), which is exactly the condition for the rewrite rules
    /// to be preserved.
    pub fn scale_auto(
        &self,
        el: &CliffordElement<C::F>,
        alphas: &[C::F],
    ) -> Result<CliffordElement<C::F>> {
        self.check_element(el)?;
        if alphas.len() != self.n_gens {
            return Err(Error::InvalidInput(format!(
                "expected {} scale factors, got {}",
                self.n_gens,
                alphas.len()
            )));
        }
        let one = self.coeff.int(1);
        for i in 1..=self.n_gens {
            let product = alphas[i - 1].mul(&alphas[self.prime(i) - 1]);
            if product != one {
                return Err(Error::InvalidInput(format!(
                    "scale factors violate α_{i} α_{}' = 1",
                    self.prime(i)
                )));
            }
        }
        let mut out = self.zero();
        for (mask, coeff) in el.terms() {
            let mut factor = one.clone();
            for i in 1..=self.n_gens {
                if mask >> (i - 1) & 1 == 1 {
                    factor = factor.mul(&alphas[i - 1]);
                }
            }
            out.add_term(mask, coeff.mul(&factor));
        }
        Ok(out)
    }

    /// Generators of the neutral subalgebra `Cl⁰` (kernel of every axis
    /// grading): the pair products `γ_i γ_i'` for `i = 1..n`, plus the middle
    /// generator `γ_{n+1}` when `N` is odd.
    pub fn neutral_generators(&self) -> Vec<CliffordElement<C::F>> {
        let mut gens = Vec::new();
        if self.epsilon == 1 {
            gens.push(self.basis_monomial(1 << self.n));
        }
        for i in 1..=self.n {
            let mask = (1u32 << (i - 1)) | (1u32 << (self.prime(i) - 1));
            gens.push(self.basis_monomial(mask));
        }
        gens
    }

    /// Render an element like `-g1g3 + c^2 q^2 (q + q^-1)`, lowest mask first.
    pub fn render(&self, el: &CliffordElement<C::F>) -> String {
        render_terms(&el.terms, self.n_gens)
    }

    /// Serialize an element together with its context header.
    pub fn to_json(&self, el: &CliffordElement<C::F>) -> Result<String>
    where
        C::F: Serialize,
    {
        self.check_element(el)?;
        let repr = ElementRepr {
            n_gens: self.n_gens,
            c: self.coeff.c_tag(),
            terms: el
                .terms()
                .map(|(mask, coeff)| TermEntry {
                    word: mask_bits_string(mask, self.n_gens),
                    coeff: coeff.clone(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&repr)
            .map_err(|e| Error::InvalidInput(format!("serialization failed: {e}")))
    }

    /// Parse an element serialized by [`Self::to_json`], validating that the
    /// header matches this context.
    pub fn from_json(&self, json: &str) -> Result<CliffordElement<C::F>>
    where
        C::F: for<'de> Deserialize<'de>,
    {
        let repr: ElementRepr<C::F> = serde_json::from_str(json)
            .map_err(|e| Error::InvalidInput(format!("malformed element JSON: {e}")))?;
        if repr.n_gens != self.n_gens {
            return Err(Error::InvalidInput(format!(
                "element has N={}, context has N={}",
                repr.n_gens, self.n_gens
            )));
        }
        if repr.c != self.coeff.c_tag() {
            return Err(Error::InvalidInput(format!(
                "element c-tag {:?} does not match context {:?}",
                repr.c,
                self.coeff.c_tag()
            )));
        }
        let mut el = self.zero();
        for entry in repr.terms {
            el.add_term(parse_mask_bits(&entry.word, self.n_gens)?, entry.coeff);
        }
        Ok(el)
    }
}

/// Wire format for one monomial: the word as a `0`/`1` string (leftmost
/// character ⇔ `γ_1`) plus its coefficient.
#[derive(Serialize, Deserialize)]
struct TermEntry<F> {
    word: String,
    coeff: F,
}

#[derive(Serialize, Deserialize)]
struct ElementRepr<F> {
    #[serde(rename = "N")]
    n_gens: usize,
    c: String,
    terms: Vec<TermEntry<F>>,
}

fn mask_bits_string(mask: u32, width: usize) -> String {
    (0..width)
        .map(|i| if mask >> i & 1 == 1 { '1' } else { '0' })
        .collect()
}

fn parse_mask_bits(s: &str, width: usize) -> Result<u32> {
    if s.len() != width || !s.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(Error::InvalidInput(format!(
            "monomial word {s:?} is not a {width}-character 0/1 string"
        )));
    }
    let mut mask = 0u32;
    for (i, b) in s.bytes().enumerate() {
        if b == b'1' {
            mask |= 1 << i;
        }
    }
    Ok(mask)
}

fn context_tag<C: CoeffCtx>(n_gens: usize, coeff: &C) -> u64 {
    // FNV-1a over the rank and the context description: cheap, stable within
    // a process, and distinct for distinct (N, coefficient) interpretations.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |bytes: &[u8]| {
        for &b in bytes {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    };
    eat(&(n_gens as u64).to_le_bytes());
    eat(coeff.describe().as_bytes());
    eat(coeff.c_tag().as_bytes());
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{NumCtx, Scalar, SymCtx};
    use num_rational::BigRational;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn sym(n: usize) -> AlgebraContext<SymCtx> {
        AlgebraContext::new(n, SymCtx::symbolic()).unwrap()
    }

    fn rat(num: i64, den: i64) -> BigRational {
        BigRational::new(num.into(), den.into())
    }

    fn mono(eq: i64, ec: i64) -> Scalar {
        Scalar::monomial(&BigRational::from_integer(1.into()), eq, ec)
    }

    #[test]
    fn rewrite_matches_pinned_examples() {
        // N=3: g3 g1 = -g1g3 + c^2 q^2 (q + q^-1).
        let ctx = sym(3);
        let got = ctx.rewrite(&[3, 1]).unwrap();
        let qp = Scalar::q_pow(1).add(&Scalar::q_pow(-1));
        let expected = ctx
            .element_from_terms([
                (0b101u32, Scalar::from_int(-1)),
                (0b000u32, mono(2, 2).mul(&qp)),
            ])
            .unwrap();
        assert_eq!(got, expected);

        // N=3: g2 g2 = (q - q^-1) g1g3 + c^2.
        let got = ctx.rewrite(&[2, 2]).unwrap();
        let qm = Scalar::q_pow(1).sub(&Scalar::q_pow(-1));
        let expected = ctx
            .element_from_terms([(0b101u32, qm), (0b000u32, mono(0, 2))])
            .unwrap();
        assert_eq!(got, expected);

        // N=4: g2 g1 = -q^2 g1g2, and g1 g1 = 0.
        let ctx4 = sym(4);
        let got = ctx4.rewrite(&[2, 1]).unwrap();
        let expected = ctx4
            .element_from_terms([(0b0011u32, Scalar::q_pow(2).neg())])
            .unwrap();
        assert_eq!(got, expected);
        assert!(ctx4.rewrite(&[1, 1]).unwrap().is_zero());
    }

    #[test]
    fn squares_vanish_except_middle() {
        for n in 3..=6 {
            let ctx = sym(n);
            for i in 1..=n {
                let sq = ctx.rewrite(&[i, i]).unwrap();
                if ctx.is_odd() && i == ctx.half_rank() + 1 {
                    assert!(!sq.is_zero(), "middle square should not vanish at N={n}");
                } else {
                    assert!(sq.is_zero(), "square of g{i} should vanish at N={n}");
                }
            }
        }
    }

    #[test]
    fn middle_square_matches_pinned_example() {
        // N=5: g3 g3 = (q - q^-1)(q^-2 g1g5 + g2g4) + c^2.
        let ctx = sym(5);
        let got = ctx.rewrite(&[3, 3]).unwrap();
        let qm = Scalar::q_pow(1).sub(&Scalar::q_pow(-1));
        let expected = ctx
            .element_from_terms([
                (0b10001u32, qm.mul(&Scalar::q_pow(-2))),
                (0b01010u32, qm),
                (0b00000u32, mono(0, 2)),
            ])
            .unwrap();
        assert_eq!(got, expected);
    }

    #[test]
    fn rewrite_is_a_fixed_point_on_normal_forms() {
        for n in 3..=5 {
            let ctx = sym(n);
            for a in 1..=n {
                for b in 1..=n {
                    let nf = ctx.rewrite(&[a, b]).unwrap();
                    let mut rebuilt = ctx.zero();
                    for (mask, coeff) in nf.terms() {
                        let word: Vec<usize> =
                            (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).collect();
                        rebuilt = rebuilt.add(&ctx.rewrite(&word).unwrap().scale(coeff));
                    }
                    assert_eq!(nf, rebuilt, "N={n}, word [{a}, {b}]");
                }
            }
        }
    }

    #[test]
    fn unit_and_annihilation() {
        let ctx = sym(3);
        let x = ctx.rewrite(&[1, 3]).unwrap();
        assert_eq!(ctx.multiply(&ctx.one(), &x).unwrap(), x);
        assert_eq!(ctx.multiply(&x, &ctx.one()).unwrap(), x);
        // (g1 g3) g3 = 0 because g3² = 0 strikes after the g3 g1 rewrite too.
        let g3 = ctx.gamma(3).unwrap();
        assert!(ctx.multiply(&x, &g3).unwrap().is_zero());
    }

    #[test]
    fn associativity_on_random_words() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for n in 3..=5 {
            let ctx = sym(n);
            for _ in 0..40 {
                let dim = 1u32 << n;
                let x = ctx.basis_monomial(rng.gen_range(0..dim));
                let y = ctx.basis_monomial(rng.gen_range(0..dim));
                let z = ctx.basis_monomial(rng.gen_range(0..dim));
                let left = ctx.multiply(&ctx.multiply(&x, &y).unwrap(), &z).unwrap();
                let right = ctx.multiply(&x, &ctx.multiply(&y, &z).unwrap()).unwrap();
                assert_eq!(left, right, "associativity failed at N={n}");
            }
        }
    }

    #[test]
    fn degree_examples() {
        let ctx = sym(3);
        let g1g2 = ctx.rewrite(&[1, 2]).unwrap();
        assert_eq!(ctx.degree(&g1g2, Grading::Parity).unwrap(), Some(0));
        let g1 = ctx.gamma(1).unwrap();
        assert_eq!(ctx.degree(&g1, Grading::Axis(1)).unwrap(), Some(1));
        let g3 = ctx.gamma(3).unwrap();
        assert_eq!(ctx.degree(&g3, Grading::Axis(1)).unwrap(), Some(-1));
        let g2 = ctx.gamma(2).unwrap();
        assert_eq!(ctx.degree(&g2, Grading::Axis(1)).unwrap(), Some(0));
        assert_eq!(ctx.degree(&g2, Grading::Middle).unwrap(), Some(1));
        let mixed = g1.add(&g1g2);
        assert_eq!(ctx.degree(&mixed, Grading::Parity).unwrap(), None);
        assert_eq!(ctx.degree(&ctx.zero(), Grading::Parity).unwrap(), Some(0));
        assert!(ctx.degree(&g1, Grading::Axis(2)).is_err());
        let ctx4 = sym(4);
        assert!(ctx4
            .degree(&ctx4.gamma(1).unwrap(), Grading::Middle)
            .is_err());
    }

    #[test]
    fn degree_is_additive_under_multiplication() {
        // Products of Axis-homogeneous elements add degrees (the rewrite
        // rules only produce terms of the same multidegree).
        let ctx = sym(4);
        let g1 = ctx.gamma(1).unwrap();
        let g4 = ctx.gamma(4).unwrap();
        let p = ctx.multiply(&g4, &g1).unwrap();
        assert_eq!(ctx.degree(&p, Grading::Axis(1)).unwrap(), Some(0));
        let sq = ctx.multiply(&g1, &ctx.rewrite(&[2, 3]).unwrap()).unwrap();
        assert_eq!(ctx.degree(&sq, Grading::Axis(1)).unwrap(), Some(1));
    }

    #[test]
    fn tau_reverses_products() {
        let ctx = sym(4);
        let g1 = ctx.gamma(1).unwrap();
        assert_eq!(ctx.tau(&g1).unwrap(), ctx.gamma(4).unwrap());
        // τ(g1 g2) = τ(g2) τ(g1) = g3 g4, already in order.
        let x = ctx.rewrite(&[1, 2]).unwrap();
        let expected = ctx.rewrite(&[3, 4]).unwrap();
        assert_eq!(ctx.tau(&x).unwrap(), expected);
        // τ² = id and τ(xy) = τ(y)τ(x) on random basis monomials.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..30 {
            let x = ctx.basis_monomial(rng.gen_range(0..16));
            let y = ctx.basis_monomial(rng.gen_range(0..16));
            assert_eq!(ctx.tau(&ctx.tau(&x).unwrap()).unwrap(), x);
            let lhs = ctx.tau(&ctx.multiply(&x, &y).unwrap()).unwrap();
            let rhs = ctx
                .multiply(&ctx.tau(&y).unwrap(), &ctx.tau(&x).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn scale_auto_is_an_algebra_map() {
        let ctx = sym(5);
        // α = (q², 1/7, 1, 7, q⁻²) satisfies α_i α_i' = 1 with α_3 = 1.
        let alphas = vec![
            Scalar::q_pow(2),
            Scalar::from_big_rational(&rat(1, 7)),
            Scalar::from_int(1),
            Scalar::from_int(7),
            Scalar::q_pow(-2),
        ];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..25 {
            let x = ctx.basis_monomial(rng.gen_range(0..32));
            let y = ctx.basis_monomial(rng.gen_range(0..32));
            let lhs = ctx
                .scale_auto(&ctx.multiply(&x, &y).unwrap(), &alphas)
                .unwrap();
            let rhs = ctx
                .multiply(
                    &ctx.scale_auto(&x, &alphas).unwrap(),
                    &ctx.scale_auto(&y, &alphas).unwrap(),
                )
                .unwrap();
            assert_eq!(lhs, rhs);
        }
        // Violating α_i α_i' = 1 is rejected.
        let bad = vec![
            Scalar::from_int(2),
            Scalar::from_int(1),
            Scalar::from_int(1),
            Scalar::from_int(1),
            Scalar::from_int(1),
        ];
        assert!(ctx.scale_auto(&ctx.one(), &bad).is_err());
    }

    #[test]
    fn rescaling_c_is_an_isomorphism_to_unit_c() {
        // γ_i ↦ c γ̃_i maps the algebra at parameter c² onto the algebra at
        // parameter 1: on normal forms, coeff_I · c^|I| in the symbolic
        // context must match c^ℓ · coeff'_I computed at c = 1, where ℓ is the
        // c-degree carried by the constant terms.  Checking all two-letter
        // words exercises every rewrite rule.
        for n in 3..=5 {
            let ctx_c = sym(n);
            let ctx_1 = AlgebraContext::new(
                n,
                SymCtx::with_c(BigRational::from_integer(1.into())),
            )
            .unwrap();
            for a in 1..=n {
                for b in 1..=n {
                    let at_c = ctx_c.rewrite(&[a, b]).unwrap();
                    let at_1 = ctx_1.rewrite(&[a, b]).unwrap();
                    // Map the c=1 result through γ̃_I ↦ c^{-|I|} γ_I · c².
                    let mut mapped: BTreeMap<u32, Scalar> = BTreeMap::new();
                    for (mask, coeff) in at_1.terms() {
                        let weight = 2 - mask.count_ones() as i64;
                        let lifted = coeff.mul(&mono_term(0, weight));
                        mapped.insert(mask, lifted);
                    }
                    let got: BTreeMap<u32, Scalar> = at_c
                        .terms()
                        .map(|(m, c)| (m, c.clone()))
                        .collect();
                    assert_eq!(got, mapped, "N={n}, word [{a}, {b}]");
                }
            }
        }
    }

    fn mono_term(eq: i64, ec: i64) -> Scalar {
        Scalar::monomial(&BigRational::from_integer(1.into()), eq, ec)
    }

    #[test]
    fn neutral_subalgebra_generators_commute() {
        for n in 3..=6 {
            let ctx = sym(n);
            let gens = ctx.neutral_generators();
            for x in &gens {
                for y in &gens {
                    assert!(
                        ctx.commutator(x, y).unwrap().is_zero(),
                        "neutral generators fail to commute at N={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn exterior_context_kills_constant_terms() {
        let ctx = AlgebraContext::new(3, SymCtx::c_zero()).unwrap();
        let got = ctx.rewrite(&[3, 1]).unwrap();
        let expected = ctx
            .element_from_terms([(0b101u32, Scalar::from_int(-1))])
            .unwrap();
        assert_eq!(got, expected);
        assert!(ctx.rewrite(&[2, 2]).unwrap().num_terms() == 1);
    }

    #[test]
    fn numeric_context_matches_symbolic_evaluation() {
        let point = crate::scalar::EvalPoint::from_fractions(5, 3, 2, 1).unwrap();
        let sym_ctx = sym(4);
        let num_ctx = AlgebraContext::new(4, NumCtx::new(point.clone())).unwrap();
        for a in 1..=4usize {
            for b in 1..=4usize {
                let s = sym_ctx.rewrite(&[a, b]).unwrap();
                let n = num_ctx.rewrite(&[a, b]).unwrap();
                for (mask, coeff) in s.terms() {
                    let evaluated = crate::scalar::evaluate(coeff, &point).unwrap();
                    assert_eq!(evaluated, n.coeff(mask), "entry [{a},{b}] mask {mask}");
                }
                assert_eq!(s.num_terms(), n.num_terms());
            }
        }
    }

    #[test]
    fn cross_context_operations_are_rejected() {
        let a = sym(3);
        let b = sym(4);
        let x = a.gamma(1).unwrap();
        let y = b.gamma(1).unwrap();
        assert!(a.multiply(&x, &y).is_err());
        let zero_c = AlgebraContext::new(3, SymCtx::c_zero()).unwrap();
        let z = zero_c.gamma(1).unwrap();
        assert!(a.multiply(&x, &z).is_err());
    }

    #[test]
    fn element_json_round_trips() {
        let ctx = sym(3);
        let el = ctx.rewrite(&[3, 1]).unwrap();
        let json = ctx.to_json(&el).unwrap();
        assert!(json.contains("\"N\": 3"));
        assert!(json.contains("\"c\": \"symbolic\""));
        let back = ctx.from_json(&json).unwrap();
        assert_eq!(el, back);
        // A mismatched context refuses to parse.
        let ctx4 = sym(4);
        assert!(ctx4.from_json(&json).is_err());
        let zero_c = AlgebraContext::new(3, SymCtx::c_zero()).unwrap();
        assert!(zero_c.from_json(&json).is_err());
    }

    #[test]
    fn render_is_stable() {
        let ctx = sym(3);
        let el = ctx.rewrite(&[3, 1]).unwrap();
        let text = ctx.render(&el);
        assert!(text.contains("g1g3"), "render: {text}");
        assert_eq!(ctx.render(&ctx.zero()), "0");
    }

    #[test]
    fn rank_bounds_are_enforced() {
        assert!(AlgebraContext::new(2, SymCtx::symbolic()).is_err());
        assert!(AlgebraContext::new(17, SymCtx::symbolic()).is_err());
        assert!(AlgebraContext::new(16, SymCtx::symbolic()).is_ok());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        /// Associativity on random 3-term elements at N=4.
        #[test]
        fn prop_associativity(seed in any::<u64>()) {
            let ctx = sym(4);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let random_el = |rng: &mut rand_chacha::ChaCha8Rng| {
                let mut el = ctx.zero();
                for _ in 0..2 {
                    let mask = rng.gen_range(0..16u32);
                    let num = rng.gen_range(-4i64..5);
                    if num != 0 {
                        el.add_term(mask, Scalar::from_big_rational(&rat(num, 1)));
                    }
                }
                el
            };
            let x = random_el(&mut rng);
            let y = random_el(&mut rng);
            let z = random_el(&mut rng);
            let left = ctx.multiply(&ctx.multiply(&x, &y).unwrap(), &z).unwrap();
            let right = ctx.multiply(&x, &ctx.multiply(&y, &z).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        /// τ is an involution on arbitrary masks at N=5.
        #[test]
        fn prop_tau_involution(mask in 0u32..32) {
            let ctx = sym(5);
            let x = ctx.basis_monomial(mask);
            prop_assert_eq!(ctx.tau(&ctx.tau(&x).unwrap()).unwrap(), x);
        }
    }
}
