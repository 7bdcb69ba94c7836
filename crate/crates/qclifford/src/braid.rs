//! Exact tensor-space operators on `V^⊗k` for the orthogonal R̂-matrix.
//!
//! With `i' = N + 1 - i` and `ρ_i = δ_{i<i'}(N/2 - i) - δ_{i'<i}(N/2 - i')`,
//! the two-site operators are
//!
//! ```text
//! R̂^{ij}_{kl} = q^{2δ^i_j - 2δ^i_{j'}} δ^i_l δ^j_k
//!               + (q² - q⁻²) δ_{i<l} (δ^i_k δ^j_l - K^{ij}_{kl}),
//! C^{ij} = C_{ij} = q^{-2ρ_i} δ^i_{j'},      K^{ij}_{kl} = C^{ij} C_{kl},
//! ```
//!
//! together with the spectral projectors
//!
//! ```text
//! P₊ = (q⁻² id + R̂ - (q̂₊q̂₋/(q^{2N}-1)) K) / (q² + q⁻²),
//! P₋ = (q²  id - R̂ - (q̂₊q̂₋/(q^{2N-4}+1)) K) / (q² + q⁻²),
//! P₀ = id - P₊ - P₋,
//! ```
//!
//! where `q̂₊ = q + q⁻¹` and `q̂₋ = q - q⁻¹`.  The assignment
//! `g_i ↦ R̂_{i,i+1}`, `e_i ↦ K_{i,i+1}` represents the
//! Birman–Wenzl–Murakami algebra `BWM(q^{2N-2}, q²)_{k+1}`, whose
//! distinguished elements
//!
//! ```text
//! d'⁻_{k+1,i} = K_{12} K_{23} ⋯ K_{k-i+1,k-i+2}
//!               Σ_{j=0}^{i-1} (-q⁻²)^j Π_{l=1}^j R̂_{k-i+1+l,k-i+2+l},
//! b⁻_{1,k}   = Σ_{i=0}^k (-q⁻²)^i R̂_{12} R̂_{23} ⋯ R̂_{i,i+1}
//!               - (q̂₊q̂₋/(1+q^{2N-4k})) Σ_{i=1}^k q^{4i-4k-2} d'⁻_{k+1,i}
//! ```
//!
//! build the antisymmetrizers `A₁ = id`, `A_{m+1} = (id ⊗ A_m) b⁻_{1,m} / [m+1]`
//! (so `A₂ = P₋`), with `[m] = Σ_{t<m} q^{-4t}`.  On top of these sit the
//! pairing `g(γ_i ⊗ γ_j) = c² q^{2N-3} q̂₊ C_{ij} / (q^{2N-4}+1)`, the
//! contraction maps, and the quotient coordinates identifying `V^{∧k}` with
//! span of the increasing wedge monomials.
//!
//! Operators are immutable lazy pipelines; applying one to a vector never
//! allocates a matrix.  Dense enumeration (materialization, ranks, operator
//! export) is gated by a dimension cap — `QCLIFFORD_MAX_DIM`, default
//! `10_000` — because `V^⊗6` at `N = 6` already has 46656 dimensions.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::clifford::{AlgebraContext, CliffordElement};
use crate::error::{Error, Result};
use crate::linalg::{with_tag, Eliminator};
use crate::scalar::{CoeffCtx, Field};

/// Default materialization cap (total tensor dimension).
pub const DEFAULT_MAX_DIM: u64 = 10_000;

/// Environment variable overriding the materialization cap.
pub const MAX_DIM_ENV: &str = "QCLIFFORD_MAX_DIM";

/// The metric data of the orthogonal R̂-matrix: the exponents `-2ρ_i`
/// defining `C^{ij} = C_{ij} = q^{-2ρ_i} δ^i_{j'}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricData {
    n_gens: usize,
    /// `2ρ_i` (always an integer, also for odd `N`), indexed by `i-1`.
    rho_twice: Vec<i64>,
}

impl MetricData {
    pub fn new(n_gens: usize) -> Self {
        let rho_twice = (1..=n_gens as i64)
            .map(|i| {
                let ip = n_gens as i64 + 1 - i;
                if i < ip {
                    n_gens as i64 - 2 * i
                } else if i == ip {
                    0
                } else {
                    n_gens as i64 + 2 - 2 * i
                }
            })
            .collect();
        MetricData { n_gens, rho_twice }
    }

    /// The exponent `e` with `C^{i i'} = q^e`, i.e. `e = -2ρ_i`.
    pub fn c_exponent(&self, i: usize) -> i64 {
        -self.rho_twice[i - 1]
    }

    /// `2ρ_i` as an integer.
    pub fn rho_twice(&self, i: usize) -> i64 {
        self.rho_twice[i - 1]
    }
}

/// A sparse vector on `V^⊗k`, entries keyed by packed base-`N` tuples
/// (leg 1 is the most significant digit; indices run `1..=N`).
#[derive(Clone, Debug, PartialEq)]
pub struct TensorVector<F: Field> {
    n_base: usize,
    legs: usize,
    entries: BTreeMap<u64, F>,
}

impl<F: Field> TensorVector<F> {
    pub fn zero(n_base: usize, legs: usize) -> Self {
        TensorVector {
            n_base,
            legs,
            entries: BTreeMap::new(),
        }
    }

    /// The scalar line `V^⊗0` with the given value at its single key.
    pub fn scalar(n_base: usize, value: F) -> Self {
        let mut v = Self::zero(n_base, 0);
        v.add_term(0, value);
        v
    }

    /// Basis vector `e_{i_1} ⊗ ⋯ ⊗ e_{i_k}`.
    pub fn basis(n_base: usize, indices: &[usize]) -> Result<Self> {
        let mut v = Self::zero(n_base, indices.len());
        let key = pack_key(n_base, indices)?;
        v.add_term(key, F::one());
        Ok(v)
    }

    pub fn legs(&self) -> usize {
        self.legs
    }

    pub fn n_base(&self) -> usize {
        self.n_base
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> impl Iterator<Item = (u64, &F)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    pub fn coeff(&self, key: u64) -> F {
        self.entries.get(&key).cloned().unwrap_or_else(F::zero)
    }

    pub fn add_term(&mut self, key: u64, value: F) {
        if value.is_zero() {
            return;
        }
        match self.entries.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(value);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&value);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.legs, other.legs, "leg mismatch in vector sum");
        let mut out = self.clone();
        for (k, v) in other.entries() {
            out.add_term(k, v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.legs, other.legs, "leg mismatch in vector difference");
        let mut out = self.clone();
        for (k, v) in other.entries() {
            out.add_term(k, v.neg());
        }
        out
    }

    pub fn scale(&self, factor: &F) -> Self {
        let mut out = Self::zero(self.n_base, self.legs);
        if factor.is_zero() {
            return out;
        }
        for (k, v) in self.entries() {
            let p = v.mul(factor);
            if !p.is_zero() {
                out.entries.insert(k, p);
            }
        }
        out
    }

    /// Tensor product: `self`'s legs become the leading legs.
    pub fn tensor(&self, other: &Self) -> Self {
        assert_eq!(self.n_base, other.n_base, "base mismatch in tensor product");
        let mut out = Self::zero(self.n_base, self.legs + other.legs);
        let shift = (self.n_base as u64).pow(other.legs as u32);
        for (ka, va) in self.entries() {
            for (kb, vb) in other.entries() {
                out.add_term(ka * shift + kb, va.mul(vb));
            }
        }
        out
    }

    /// Decode a packed key into 1-based indices.
    pub fn unpack(&self, key: u64) -> Vec<usize> {
        unpack_key(self.n_base, self.legs, key)
    }

    fn digit(&self, key: u64, leg: usize) -> usize {
        let p = (self.n_base as u64).pow((self.legs - leg) as u32);
        (key / p % self.n_base as u64) as usize + 1
    }

    /// Replace the indices at `leg` and `leg+1` (1-based) in a packed key.
    fn with_pair(&self, key: u64, leg: usize, a: usize, b: usize) -> u64 {
        let pb = (self.n_base as u64).pow((self.legs - leg - 1) as u32);
        let pa = pb * self.n_base as u64;
        let old_a = key / pa % self.n_base as u64;
        let old_b = key / pb % self.n_base as u64;
        key - old_a * pa - old_b * pb + (a as u64 - 1) * pa + (b as u64 - 1) * pb
    }
}

/// Pack 1-based indices into a base-`N` key, leg 1 most significant.
pub fn pack_key(n_base: usize, indices: &[usize]) -> Result<u64> {
    let mut key = 0u64;
    for &i in indices {
        if i == 0 || i > n_base {
            return Err(Error::InvalidInput(format!(
                "tensor index {i} outside 1..={n_base}"
            )));
        }
        key = key * n_base as u64 + (i as u64 - 1);
    }
    Ok(key)
}

/// Inverse of [`pack_key`].
pub fn unpack_key(n_base: usize, legs: usize, key: u64) -> Vec<usize> {
    let mut out = vec![0usize; legs];
    let mut k = key;
    for t in (0..legs).rev() {
        out[t] = (k % n_base as u64) as usize + 1;
        k /= n_base as u64;
    }
    out
}

/// A lazy operator pipeline on tensor vectors.  Primitive nodes carry the
/// 1-based position of their left leg; composite nodes own their parts.
/// `Compose` lists factors in writing order (the first entry acts last).
#[derive(Clone, Debug)]
pub enum TensorOp<F: Field> {
    Identity,
    /// R̂ on legs `(pos, pos+1)`.
    Rhat { pos: usize },
    /// K on legs `(pos, pos+1)`.
    Kmat { pos: usize },
    Scale(F, Arc<TensorOp<F>>),
    Sum(Vec<(F, Arc<TensorOp<F>>)>),
    Compose(Vec<Arc<TensorOp<F>>>),
    /// The inner operator shifted `delta` legs to the right (`id^{⊗delta} ⊗ op`).
    Shift(usize, Arc<TensorOp<F>>),
}

impl<F: Field> TensorOp<F> {
    fn arc(self) -> Arc<Self> {
        Arc::new(self)
    }
}

/// Dense (but sparsely stored) matrix of an operator on `V^⊗k`: one sparse
/// column per basis vector, exact entries.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<F: Field> {
    dim: u64,
    cols: Vec<BTreeMap<u64, F>>,
}

impl<F: Field> SparseMatrix<F> {
    pub fn dim(&self) -> u64 {
        self.dim
    }

    pub fn column(&self, col: u64) -> &BTreeMap<u64, F> {
        &self.cols[col as usize]
    }

    pub fn entry(&self, row: u64, col: u64) -> F {
        self.cols[col as usize]
            .get(&row)
            .cloned()
            .unwrap_or_else(F::zero)
    }

    pub fn is_identity(&self) -> bool {
        self.cols.iter().enumerate().all(|(t, col)| {
            col.len() == 1
                && col
                    .get(&(t as u64))
                    .map(|v| v.is_one())
                    .unwrap_or(false)
        })
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    /// Entries as `(row, col, value)` triples, sorted by row then column.
    pub fn triples(&self) -> Vec<(u64, u64, &F)> {
        let mut out = Vec::new();
        for (c, col) in self.cols.iter().enumerate() {
            for (r, v) in col.iter() {
                out.push((*r, c as u64, v));
            }
        }
        out.sort_by_key(|(r, c, _)| (*r, *c));
        out
    }
}

/// Context for tensor computations: rank, coefficients, metric, caps.
pub struct BraidContext<C: CoeffCtx> {
    n_gens: usize,
    coeff: C,
    metric: MetricData,
    max_dim: u64,
}

impl<C: CoeffCtx> BraidContext<C> {
    pub fn new(n_gens: usize, coeff: C) -> Result<Self> {
        if !(3..=crate::clifford::MAX_GENERATORS).contains(&n_gens) {
            return Err(Error::InvalidInput(format!(
                "rank N={n_gens} outside supported range 3..={}",
                crate::clifford::MAX_GENERATORS
            )));
        }
        let max_dim = std::env::var(MAX_DIM_ENV)
            .ok()
            .and_then(|s| s.parse::<u64>().ok())
            .unwrap_or(DEFAULT_MAX_DIM);
        Ok(BraidContext {
            n_gens,
            coeff,
            metric: MetricData::new(n_gens),
            max_dim,
        })
    }

    /// Override the materialization cap (tests, CLI flag).
    pub fn with_max_dim(mut self, max_dim: u64) -> Self {
        self.max_dim = max_dim;
        self
    }

    /// The active materialization cap on `dim(V^⊗k) = N^k`.
    pub fn max_dim(&self) -> u64 {
        self.max_dim
    }

    pub fn n_gens(&self) -> usize {
        self.n_gens
    }

    pub fn coeff_ctx(&self) -> &C {
        &self.coeff
    }

    pub fn metric(&self) -> &MetricData {
        &self.metric
    }

    pub fn prime(&self, i: usize) -> usize {
        self.n_gens + 1 - i
    }

    fn q_pow(&self, e: i64) -> C::F {
        self.coeff.q_pow(e)
    }

    /// `q² - q⁻²`.
    fn spread(&self) -> C::F {
        self.q_pow(2).sub(&self.q_pow(-2))
    }

    /// The deformation integer `[m] = Σ_{t<m} q^{-4t}` in the coefficient
    /// field.
    fn qnum_f(&self, m: usize) -> C::F {
        let mut acc = self.coeff.int(0);
        for t in 0..m as i64 {
            acc = acc.add(&self.q_pow(-4 * t));
        }
        acc
    }

    // ------------------------------------------------------------------
    // Two-site operators
    // ------------------------------------------------------------------

    /// R̂ acting on legs `(pos, pos+1)`.
    pub fn rhat_at(&self, pos: usize) -> TensorOp<C::F> {
        TensorOp::Rhat { pos }
    }

    /// R̂ on `V ⊗ V`.
    pub fn rhat(&self) -> TensorOp<C::F> {
        self.rhat_at(1)
    }

    /// K acting on legs `(pos, pos+1)`.
    pub fn kmat_at(&self, pos: usize) -> TensorOp<C::F> {
        TensorOp::Kmat { pos }
    }

    /// K on `V ⊗ V`.
    pub fn kmat(&self) -> TensorOp<C::F> {
        self.kmat_at(1)
    }

    /// `R̂⁻¹ = R̂ - (q² - q⁻²)(id - K)` on legs `(pos, pos+1)`.
    pub fn rhat_inv_at(&self, pos: usize) -> TensorOp<C::F> {
        let one = self.coeff.int(1);
        TensorOp::Sum(vec![
            (one, self.rhat_at(pos).arc()),
            (self.spread().neg(), TensorOp::Identity.arc()),
            (self.spread(), self.kmat_at(pos).arc()),
        ])
    }

    /// `R̂⁻¹` on `V ⊗ V`.
    pub fn rhat_inv(&self) -> TensorOp<C::F> {
        self.rhat_inv_at(1)
    }

    /// The spectral projectors `(P₊, P₋, P₀)` of R̂ on `V ⊗ V`.
    pub fn projectors(&self) -> Result<(TensorOp<C::F>, TensorOp<C::F>, TensorOp<C::F>)> {
        let norm = self.q_pow(2).add(&self.q_pow(-2)).inv()?;
        let top = self.q_pow(2 * self.n_gens as i64).sub(&self.coeff.int(1));
        let bottom = self
            .q_pow(2 * self.n_gens as i64 - 4)
            .add(&self.coeff.int(1));
        let spread = self.spread();
        let p_plus = TensorOp::Scale(
            norm.clone(),
            TensorOp::Sum(vec![
                (self.q_pow(-2), TensorOp::Identity.arc()),
                (self.coeff.int(1), self.rhat().arc()),
                (spread.mul(&top.inv()?).neg(), self.kmat().arc()),
            ])
            .arc(),
        );
        let p_minus = TensorOp::Scale(
            norm,
            TensorOp::Sum(vec![
                (self.q_pow(2), TensorOp::Identity.arc()),
                (self.coeff.int(-1), self.rhat().arc()),
                (spread.mul(&bottom.inv()?).neg(), self.kmat().arc()),
            ])
            .arc(),
        );
        let p_zero = TensorOp::Sum(vec![
            (self.coeff.int(1), TensorOp::Identity.arc()),
            (self.coeff.int(-1), p_plus.clone().arc()),
            (self.coeff.int(-1), p_minus.clone().arc()),
        ]);
        Ok((p_plus, p_minus, p_zero))
    }

    // ------------------------------------------------------------------
    // BWM elements and antisymmetrizers
    // ------------------------------------------------------------------

    /// `d'⁻_{k+1,i}`: the K-chain `K_{12}⋯K_{k-i+1,k-i+2}` composed with the
    /// alternating R̂-staircase sum, an element of `BWM_{k+1}`.
    pub fn d_prime_minus(&self, k_plus_1: usize, i: usize) -> Result<TensorOp<C::F>> {
        if k_plus_1 < 2 || k_plus_1 > self.n_gens {
            return Err(Error::InvalidInput(format!(
                "d'⁻ size {k_plus_1} outside 2..={}",
                self.n_gens
            )));
        }
        let k = k_plus_1 - 1;
        if i == 0 || i > k {
            return Err(Error::InvalidInput(format!(
                "d'⁻ index i={i} outside 1..={k}"
            )));
        }
        let mut chain: Vec<Arc<TensorOp<C::F>>> =
            (1..=k - i + 1).map(|p| self.kmat_at(p).arc()).collect();
        let mut terms = Vec::with_capacity(i);
        for j in 0..i {
            let stair: Vec<Arc<TensorOp<C::F>>> = (1..=j)
                .map(|l| self.rhat_at(k - i + 1 + l).arc())
                .collect();
            let op = if stair.is_empty() {
                TensorOp::Identity
            } else {
                TensorOp::Compose(stair)
            };
            terms.push((self.minus_q2_inv_pow(j), op.arc()));
        }
        chain.push(TensorOp::Sum(terms).arc());
        Ok(TensorOp::Compose(chain))
    }

    /// `(-q⁻²)^j` in the coefficient field.
    fn minus_q2_inv_pow(&self, j: usize) -> C::F {
        let base = self.q_pow(-2 * j as i64);
        if j % 2 == 1 {
            base.neg()
        } else {
            base
        }
    }

    /// `b⁻_{1,k}`: the alternating R̂-staircase sum minus the weighted
    /// `d'⁻`-sum, an element of `BWM_{k+1}` (so it acts on `k+1` legs).
    pub fn b_minus(&self, k: usize) -> Result<TensorOp<C::F>> {
        if k > self.n_gens - 1 {
            return Err(Error::InvalidInput(format!(
                "b⁻ index k={k} outside 0..={}",
                self.n_gens - 1
            )));
        }
        let mut terms: Vec<(C::F, Arc<TensorOp<C::F>>)> = Vec::new();
        for i in 0..=k {
            let stair: Vec<Arc<TensorOp<C::F>>> =
                (1..=i).map(|p| self.rhat_at(p).arc()).collect();
            let op = if stair.is_empty() {
                TensorOp::Identity
            } else {
                TensorOp::Compose(stair)
            };
            terms.push((self.minus_q2_inv_pow(i), op.arc()));
        }
        if k > 0 {
            let denom = self
                .coeff
                .int(1)
                .add(&self.q_pow(2 * self.n_gens as i64 - 4 * k as i64));
            let weight = self.q_pow(2).sub(&self.q_pow(-2)).mul(&denom.inv()?);
            for i in 1..=k {
                let factor = weight
                    .mul(&self.q_pow(4 * i as i64 - 4 * k as i64 - 2))
                    .neg();
                terms.push((factor, self.d_prime_minus(k + 1, i)?.arc()));
            }
        }
        Ok(TensorOp::Sum(terms))
    }

    /// The antisymmetrizer `A_k` on `V^⊗k`: `A₁ = id`,
    /// `A_{m+1} = (id ⊗ A_m) b⁻_{1,m} / [m+1]` (in particular `A₂ = P₋`).
    pub fn antisymmetrizer(&self, k: usize) -> Result<TensorOp<C::F>> {
        if k == 0 || k > self.n_gens {
            return Err(Error::InvalidInput(format!(
                "antisymmetrizer index {k} outside 1..={}",
                self.n_gens
            )));
        }
        let mut a = TensorOp::Identity;
        for m in 1..k {
            let shifted = TensorOp::Shift(1, a.arc());
            let pipeline = TensorOp::Compose(vec![shifted.arc(), self.b_minus(m)?.arc()]);
            a = TensorOp::Scale(self.qnum_f(m + 1).inv()?, pipeline.arc());
        }
        Ok(a)
    }

    // ------------------------------------------------------------------
    // Application and materialization
    // ------------------------------------------------------------------

    /// Apply an operator pipeline to a vector.
    pub fn apply(
        &self,
        op: &TensorOp<C::F>,
        v: &TensorVector<C::F>,
    ) -> Result<TensorVector<C::F>> {
        if v.n_base != self.n_gens {
            return Err(Error::InvalidInput(format!(
                "vector over N={} applied in context N={}",
                v.n_base, self.n_gens
            )));
        }
        self.apply_at(op, v, 0)
    }

    fn apply_at(
        &self,
        op: &TensorOp<C::F>,
        v: &TensorVector<C::F>,
        offset: usize,
    ) -> Result<TensorVector<C::F>> {
        match op {
            TensorOp::Identity => Ok(v.clone()),
            TensorOp::Rhat { pos } => self.apply_rhat(v, pos + offset),
            TensorOp::Kmat { pos } => self.apply_kmat(v, pos + offset),
            TensorOp::Scale(f, inner) => Ok(self.apply_at(inner, v, offset)?.scale(f)),
            TensorOp::Sum(parts) => {
                let mut acc = TensorVector::zero(v.n_base, v.legs);
                for (f, part) in parts {
                    let w = self.apply_at(part, v, offset)?.scale(f);
                    acc = acc.add(&w);
                }
                Ok(acc)
            }
            TensorOp::Compose(parts) => {
                let mut cur = v.clone();
                for part in parts.iter().rev() {
                    cur = self.apply_at(part, &cur, offset)?;
                }
                Ok(cur)
            }
            TensorOp::Shift(delta, inner) => self.apply_at(inner, v, offset + delta),
        }
    }

    fn check_pos(&self, v: &TensorVector<C::F>, pos: usize) -> Result<()> {
        if pos == 0 || pos + 1 > v.legs {
            return Err(Error::InvalidInput(format!(
                "two-site operator at legs ({pos}, {}) outside a {}-leg vector",
                pos + 1,
                v.legs
            )));
        }
        Ok(())
    }

    fn apply_rhat(&self, v: &TensorVector<C::F>, pos: usize) -> Result<TensorVector<C::F>> {
        self.check_pos(v, pos)?;
        let mut out = TensorVector::zero(v.n_base, v.legs);
        let spread = self.spread();
        for (key, coeff) in v.entries() {
            let x = v.digit(key, pos);
            let y = v.digit(key, pos + 1);
            // Swap term: q^{2δ^y_x - 2δ^y_{x'}} e_y ⊗ e_x.
            let e = 2 * i64::from(x == y) - 2 * i64::from(y == self.prime(x));
            out.add_term(v.with_pair(key, pos, y, x), coeff.mul(&self.q_pow(e)));
            // Diagonal term for x < y.
            if x < y {
                out.add_term(key, coeff.mul(&spread));
            }
            // Metric term for y = x': -(q²-q⁻²) C_{xy} Σ_{m<y} C^{m m'} e_m ⊗ e_{m'}.
            if y == self.prime(x) {
                let base = coeff
                    .mul(&spread)
                    .neg()
                    .mul(&self.q_pow(-self.metric.rho_twice(x)));
                for m in 1..y {
                    let value = base.mul(&self.q_pow(-self.metric.rho_twice(m)));
                    out.add_term(v.with_pair(key, pos, m, self.prime(m)), value);
                }
            }
        }
        Ok(out)
    }

    fn apply_kmat(&self, v: &TensorVector<C::F>, pos: usize) -> Result<TensorVector<C::F>> {
        self.check_pos(v, pos)?;
        let mut out = TensorVector::zero(v.n_base, v.legs);
        for (key, coeff) in v.entries() {
            let x = v.digit(key, pos);
            let y = v.digit(key, pos + 1);
            if y != self.prime(x) {
                continue;
            }
            let base = coeff.mul(&self.q_pow(-self.metric.rho_twice(x)));
            for m in 1..=self.n_gens {
                let value = base.mul(&self.q_pow(-self.metric.rho_twice(m)));
                out.add_term(v.with_pair(key, pos, m, self.prime(m)), value);
            }
        }
        Ok(out)
    }

    /// Total dimension `N^k`, checked against the materialization cap.
    fn checked_dim(&self, legs: usize) -> Result<u64> {
        let dim = (self.n_gens as u64)
            .checked_pow(legs as u32)
            .filter(|d| *d <= self.max_dim)
            .ok_or_else(|| {
                Error::ResourceCap(format!(
                    "dimension {}^{legs} exceeds the materialization cap {} \
                     (set {MAX_DIM_ENV} to raise it)",
                    self.n_gens, self.max_dim
                ))
            })?;
        Ok(dim)
    }

    /// Materialize an operator on `V^⊗k` as an exact sparse-column matrix.
    pub fn materialize(&self, op: &TensorOp<C::F>, legs: usize) -> Result<SparseMatrix<C::F>> {
        let dim = self.checked_dim(legs)?;
        let mut cols = Vec::with_capacity(dim as usize);
        for t in 0..dim {
            let mut e = TensorVector::zero(self.n_gens, legs);
            e.add_term(t, self.coeff.int(1));
            cols.push(self.apply(op, &e)?.entries);
        }
        Ok(SparseMatrix { dim, cols })
    }

    /// Exact rank of an operator on `V^⊗k` (materializes columns).
    pub fn rank(&self, op: &TensorOp<C::F>, legs: usize) -> Result<usize> {
        let dim = self.checked_dim(legs)?;
        let mut elim = Eliminator::new();
        for t in 0..dim {
            let mut e = TensorVector::zero(self.n_gens, legs);
            e.add_term(t, self.coeff.int(1));
            let col = self.apply(op, &e)?;
            if !col.is_zero() {
                let _ = elim.insert(col.entries);
            }
        }
        Ok(elim.rank())
    }

    /// Serialize a materialized operator as `{"k":…,"N":…,"entries":[[row,col,value],…]}`.
    pub fn operator_json(&self, op: &TensorOp<C::F>, legs: usize) -> Result<String>
    where
        C::F: Serialize,
    {
        let m = self.materialize(op, legs)?;
        let repr = OperatorRepr {
            legs,
            n_gens: self.n_gens,
            entries: m.triples(),
        };
        serde_json::to_string_pretty(&repr)
            .map_err(|e| Error::InvalidInput(format!("serialization failed: {e}")))
    }

    // ------------------------------------------------------------------
    // Pairing, contraction, wedge coordinates
    // ------------------------------------------------------------------

    /// The pairing value `g(γ_i ⊗ γ_j) = c² q^{2N-3} q̂₊ C_{ij} / (q^{2N-4}+1)`.
    pub fn g_entry(&self, i: usize, j: usize) -> Result<C::F> {
        if i == 0 || i > self.n_gens || j == 0 || j > self.n_gens {
            return Err(Error::InvalidInput(format!(
                "pairing indices ({i}, {j}) outside 1..={}",
                self.n_gens
            )));
        }
        if j != self.prime(i) {
            return Ok(self.coeff.int(0));
        }
        let exponent = 2 * self.n_gens as i64 - 3 - self.metric.rho_twice(i);
        let denom = self
            .q_pow(2 * self.n_gens as i64 - 4)
            .add(&self.coeff.int(1));
        Ok(self
            .coeff
            .mono(&BigRational::from_integer(1.into()), exponent, 2)?
            .mul(&self.coeff.qp())
            .mul(&denom.inv()?))
    }

    /// Linear extension of `g` to a two-leg vector.
    pub fn g_pair(&self, x: &TensorVector<C::F>) -> Result<C::F> {
        if x.legs != 2 {
            return Err(Error::InvalidInput(format!(
                "the pairing needs a 2-leg vector, got {} legs",
                x.legs
            )));
        }
        let mut acc = self.coeff.int(0);
        for (key, coeff) in x.entries() {
            let i = x.digit(key, 1);
            let j = x.digit(key, 2);
            acc = acc.add(&coeff.mul(&self.g_entry(i, j)?));
        }
        Ok(acc)
    }

    /// Contraction `⟨ρ_k, ρ'_l⟩ ∈ V^{⊗(l-k)}`: zero for `k > l`; for `ρ ∈ V`
    /// it is `g₁₂(ρ ⊗ b⁻_{1,l-1}(ρ'_l))` with `b⁻_{1,l-1}` acting on all `l`
    /// legs, and longer left arguments peel off their leftmost leg last:
    /// `⟨ρ ⊗ ρ_k, ρ'_l⟩ = ⟨ρ, ⟨ρ_k, ρ'_l⟩⟩`.
    pub fn contract(
        &self,
        rho_k: &TensorVector<C::F>,
        rho_l: &TensorVector<C::F>,
    ) -> Result<TensorVector<C::F>> {
        if rho_k.n_base != self.n_gens || rho_l.n_base != self.n_gens {
            return Err(Error::InvalidInput(
                "contraction arguments from a different base rank".into(),
            ));
        }
        let (k, l) = (rho_k.legs, rho_l.legs);
        if k > l {
            return Ok(TensorVector::zero(self.n_gens, 0));
        }
        if k == 0 {
            // A scalar factor: ⟨a·1, ρ'⟩ = a ρ'.
            return Ok(rho_l.scale(&rho_k.coeff(0)));
        }
        if k == 1 {
            let twisted = self.apply(&self.b_minus(l - 1)?, rho_l)?;
            let mut out = TensorVector::zero(self.n_gens, l - 1);
            let tail = (self.n_gens as u64).pow((l - 1) as u32);
            for (key_r, coeff_r) in rho_k.entries() {
                let i = (key_r as usize) + 1;
                for (key_t, coeff_t) in twisted.entries() {
                    let j = twisted.digit(key_t, 1);
                    let g = self.g_entry(i, j)?;
                    if g.is_zero() {
                        continue;
                    }
                    out.add_term(key_t % tail, coeff_r.mul(coeff_t).mul(&g));
                }
            }
            return Ok(out);
        }
        // Split ρ_k = Σ_i e_i ⊗ rest_i and recurse: tail first, head last.
        let head_weight = (self.n_gens as u64).pow((k - 1) as u32);
        let mut rests: BTreeMap<u64, TensorVector<C::F>> = BTreeMap::new();
        for (key, coeff) in rho_k.entries() {
            let head = key / head_weight;
            rests
                .entry(head)
                .or_insert_with(|| TensorVector::zero(self.n_gens, k - 1))
                .add_term(key % head_weight, coeff.clone());
        }
        let mut out = TensorVector::zero(self.n_gens, l - k);
        for (head, rest) in rests {
            let sigma = self.contract(&rest, rho_l)?;
            let mut head_vec = TensorVector::zero(self.n_gens, 1);
            head_vec.add_term(head, self.coeff.int(1));
            out = out.add(&self.contract(&head_vec, &sigma)?);
        }
        Ok(out)
    }

    /// Lift a homogeneous degree-`k` exterior element to `V^⊗k`: the
    /// ordered monomial `γ_{j_1} ∧ ⋯ ∧ γ_{j_k}` maps to `e_{j_1} ⊗ ⋯ ⊗ e_{j_k}`.
    pub fn wedge_lift(
        &self,
        exterior: &AlgebraContext<C>,
        x: &CliffordElement<C::F>,
    ) -> Result<TensorVector<C::F>> {
        self.check_exterior(exterior)?;
        let mut length: Option<usize> = None;
        for (mask, _) in x.terms() {
            let len = mask.count_ones() as usize;
            match length {
                None => length = Some(len),
                Some(prev) if prev != len => {
                    return Err(Error::Inhomogeneous(
                        "wedge lift needs a single word length".into(),
                    ))
                }
                _ => {}
            }
        }
        let k = length.unwrap_or(0);
        let mut out = TensorVector::zero(self.n_gens, k);
        for (mask, coeff) in x.terms() {
            let word: Vec<usize> = (1..=self.n_gens)
                .filter(|i| mask >> (i - 1) & 1 == 1)
                .collect();
            out.add_term(pack_key(self.n_gens, &word)?, coeff.clone());
        }
        Ok(out)
    }

    /// Coordinates of a tensor in the wedge quotient `V^{∧k} = V^{⊗k}/ker A_k`:
    /// solves `A_k(t) = Σ_J λ_J A_k(lift(J))` over increasing words `J` and
    /// returns `Σ_J λ_J γ^J` in the exterior algebra.
    pub fn wedge_coords(
        &self,
        exterior: &AlgebraContext<C>,
        t: &TensorVector<C::F>,
    ) -> Result<CliffordElement<C::F>> {
        self.check_exterior(exterior)?;
        let k = t.legs;
        if k > self.n_gens {
            return Err(Error::InvalidInput(format!(
                "wedge degree {k} exceeds N={}",
                self.n_gens
            )));
        }
        if k == 0 {
            return Ok(exterior.scalar(t.coeff(0)));
        }
        let a_k = self.antisymmetrizer(k)?;
        let mut elim = Eliminator::new();
        for mask in 0u32..(1 << self.n_gens) {
            if mask.count_ones() as usize != k {
                continue;
            }
            let word: Vec<usize> = (1..=self.n_gens)
                .filter(|i| mask >> (i - 1) & 1 == 1)
                .collect();
            let lifted = TensorVector::basis(self.n_gens, &word)?;
            let image = self.apply(&a_k, &lifted)?;
            elim.insert(with_tag(image.entries, u64::from(mask)))
                .map_err(|_| {
                    Error::InvalidInput(
                        "antisymmetrized wedge monomials are dependent".into(),
                    )
                })?;
        }
        let target = self.apply(&a_k, t)?;
        let solution = elim.solve(target.entries).ok_or_else(|| {
            Error::NonzeroResidual("tensor is outside the wedge span".into())
        })?;
        let mut out = exterior.zero();
        for (mask, value) in solution {
            out = out.add(&exterior.basis_monomial(mask as u32).scale(&value));
        }
        Ok(out)
    }

    fn check_exterior(&self, exterior: &AlgebraContext<C>) -> Result<()> {
        if exterior.n_gens() != self.n_gens {
            return Err(Error::InvalidInput(format!(
                "exterior context has N={}, braid context has N={}",
                exterior.n_gens(),
                self.n_gens
            )));
        }
        Ok(())
    }
}

struct OperatorRepr<'a, F: Field> {
    legs: usize,
    n_gens: usize,
    entries: Vec<(u64, u64, &'a F)>,
}

impl<F: Field + Serialize> Serialize for OperatorRepr<'_, F> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("Operator", 3)?;
        s.serialize_field("k", &self.legs)?;
        s.serialize_field("N", &self.n_gens)?;
        struct Entries<'a, F: Field>(&'a [(u64, u64, &'a F)]);
        impl<F: Field + Serialize> Serialize for Entries<'_, F> {
            fn serialize<S: Serializer>(
                &self,
                serializer: S,
            ) -> std::result::Result<S::Ok, S::Error> {
                let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
                for (r, c, v) in self.0 {
                    seq.serialize_element(&(r, c, v))?;
                }
                seq.end()
            }
        }
        s.serialize_field("entries", &Entries(&self.entries))?;
        s.end()
    }
}
