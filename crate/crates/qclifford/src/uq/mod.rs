//! The orthogonal quantum group `U_q(so_N)` and its Clifford embedding.
//!
//! For `N = 2n + ε` (`ε ∈ {0,1}`) the quantized enveloping algebra is
//! presented by generators `E_i, F_i, K_i, K_i⁻¹` (`i = 1..n`) and relations
//!
//! ```text
//!     K_i K_j = K_j K_i,                 K_i K_i⁻¹ = K_i⁻¹ K_i = 1,
//!     K_i E_j K_i⁻¹ = q_i^{a_ij} E_j,    K_i F_j K_i⁻¹ = q_i^{-a_ij} F_j,
//!     E_i F_j − F_j E_i = δ_ij (K_i − K_i⁻¹) / (q_i − q_i⁻¹),
//! ```
//!
//! together with the quantum Serre relations for `i ≠ j`.  Here `a` is the
//! Cartan matrix of type `B_n` (odd `N`) or `D_n` (even `N`) and
//! `q_i = q^{d_i}` with `d_i = 2` on long nodes and `d_n = 2 − ε` on the
//! last node.
//!
//! The embedding `π` realizes every generator inside `Cl_q^N(c²)`.  Writing
//! `j′ = N + 1 − j` and `w(j) = c² (q+q⁻¹) q^{N+1−2j}`, the Cartan images
//! are sums over strictly increasing index sets `j_1 < … < j_l`:
//!
//! ```text
//!     π(K_i) = pre_i · Σ_l Σ_{j_1<…<j_l} [ Π_r (λ_{i,j_r} − q^{4l−4r}) / w(j_r) ]
//!              γ_{j_1} ⋯ γ_{j_l} γ_{j_l′} ⋯ γ_{j_1′},
//! ```
//!
//! and `π(E_i K_i⁻¹)`, `π(F_i)` are the analogous sums with products
//! `Π_r (1 − q^{4r}) / w(j_r)`, a fixed quadratic middle word, and a global
//! prefactor; `π(E_i) := π(E_i K_i⁻¹) π(K_i)`.  The commutation scalars
//! `λ_{i,j}` are pure powers of `q` obeying `λ_{i,j} λ_{i,j′} = 1`, and the
//! Cartan matrix is recovered from them via
//! `q_i^{a_ij} = λ_{i,j+1} λ_{i,j′}` (`j < n`) and
//! `q_i^{a_in} = λ_{i,n+1} λ_{i,n+2}`.
//!
//! Every monomial in the images above is a strictly increasing word, so the
//! images are assembled directly in normal form; no rewriting is needed to
//! build them (only to multiply them).

mod relations;
mod reps;

pub use relations::{verify_pirels, verify_uq_relations, SerreReading};
pub use reps::{
    compare_t1_ad, matrix_algebra_span_dim, verify_ad_relations, verify_spin_relations,
    verify_t1_relations, Matrix, ModuleTag, RepMatrix, WeightData,
};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::One;

use crate::clifford::{AlgebraContext, CliffordElement};
use crate::error::{Error, Result};
use crate::scalar::{CoeffCtx, Field};

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

/// Kind of a Chevalley generator.  `EKinv` is the product `E_i K_i⁻¹`,
/// which has the simplest Clifford image and is the primitive the raising
/// images are built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GenKind {
    E,
    F,
    K,
    Kinv,
    EKinv,
}

impl GenKind {
    fn label(self) -> &'static str {
        match self {
            GenKind::E => "E",
            GenKind::F => "F",
            GenKind::K => "K",
            GenKind::Kinv => "Kinv",
            GenKind::EKinv => "EKinv",
        }
    }

    /// All five kinds, in the order used for cached images and reports.
    pub const ALL: [GenKind; 5] = [
        GenKind::K,
        GenKind::Kinv,
        GenKind::E,
        GenKind::F,
        GenKind::EKinv,
    ];
}

/// A Chevalley generator `kind_index` with `index ∈ 1..=n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub kind: GenKind,
    pub index: usize,
}

impl Generator {
    pub fn new(kind: GenKind, index: usize) -> Generator {
        Generator { kind, index }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.label(), self.index)
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Generator> {
        // Longest prefix first: "EKinv" before "E", "Kinv" before "K".
        for kind in [
            GenKind::EKinv,
            GenKind::Kinv,
            GenKind::E,
            GenKind::F,
            GenKind::K,
        ] {
            if let Some(rest) = s.strip_prefix(kind.label()) {
                let index: usize = rest.parse().map_err(|_| {
                    Error::InvalidInput(format!("bad generator index in {s:?}"))
                })?;
                return Ok(Generator { kind, index });
            }
        }
        Err(Error::InvalidInput(format!(
            "unknown generator {s:?} (expected E/F/K/Kinv/EKinv + index)"
        )))
    }
}

// ---------------------------------------------------------------------------
// Cartan data
// ---------------------------------------------------------------------------

/// Cartan matrix and symmetrizers for `so_N`: type `B_n` for odd `N`
/// (last node short, `d_n = 1`), type `D_n` for even `N` (fork at the end,
/// all `d_i = 2`; `D_2 = A_1 × A_1`, `N = 3` is the rank-one case `[[2]]`
/// with `d = [1]`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanData {
    n_gens: usize,
    rank: usize,
    a: Vec<Vec<i64>>,
    d: Vec<i64>,
}

impl CartanData {
    pub fn new(n_gens: usize) -> Result<CartanData> {
        if !(3..=crate::clifford::MAX_GENERATORS).contains(&n_gens) {
            return Err(Error::InvalidInput(format!(
                "rank N={n_gens} outside supported range 3..={}",
                crate::clifford::MAX_GENERATORS
            )));
        }
        let n = n_gens / 2;
        let eps = (n_gens % 2) as i64;
        let mut d = vec![2i64; n];
        d[n - 1] = 2 - eps;
        let mut a = vec![vec![0i64; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        if n >= 2 {
            if eps == 1 {
                // B_n: simple chain, doubled bond into the short last node.
                for i in 0..n - 1 {
                    a[i][i + 1] = -1;
                    a[i + 1][i] = -1;
                }
                a[n - 1][n - 2] = -2;
            } else if n >= 3 {
                // D_n: chain over 1..n-1, fork node n attached to n-2.
                for i in 0..n - 2 {
                    a[i][i + 1] = -1;
                    a[i + 1][i] = -1;
                }
                a[n - 1][n - 3] = -1;
                a[n - 3][n - 1] = -1;
            }
            // D_2 keeps the two nodes disconnected.
        }
        let data = CartanData {
            n_gens,
            rank: n,
            a,
            d,
        };
        debug_assert!(data.is_symmetrizable());
        Ok(data)
    }

    pub fn n_gens(&self) -> usize {
        self.n_gens
    }

    /// Rank `n` where `N = 2n + ε`.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Cartan matrix entry `a_ij` (1-based).
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.a[i - 1][j - 1]
    }

    /// Symmetrizer `d_i` with `q_i = q^{d_i}` (1-based).
    pub fn d(&self, i: usize) -> i64 {
        self.d[i - 1]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.a
    }

    /// `q_i^e = q^{d_i e}` in the given coefficient context.
    pub fn q_i_pow<C: CoeffCtx>(&self, coeff: &C, i: usize, e: i64) -> C::F {
        coeff.q_pow(self.d(i) * e)
    }

    /// `d_i a_ij = d_j a_ji` for every pair.
    pub fn is_symmetrizable(&self) -> bool {
        (1..=self.rank).all(|i| {
            (1..=self.rank).all(|j| self.d(i) * self.entry(i, j) == self.d(j) * self.entry(j, i))
        })
    }
}

// ---------------------------------------------------------------------------
// Lambda table
// ---------------------------------------------------------------------------

/// The commutation scalars `λ_{i,j}` (`i ∈ 1..=n`, `j ∈ 1..=N`): pure powers
/// of `q`, stored as exponents.
///
/// ```text
///     i ≤ n−1:        λ_{i,j} = q^{−2δ_{j,i} + 2δ_{j,i+1} − 2δ_{j,i′−1} + 2δ_{j,i′}}
///     i = n, odd N:   λ_{n,j} = q^{−2δ_{j,n} + 2δ_{j,n+2}}
///     i = n, even N:  λ_{n,j} = q^{−2δ_{j,n−1} − 2δ_{j,n} + 2δ_{j,n+1} + 2δ_{j,n+2}}
/// ```
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaTable {
    n_gens: usize,
    rank: usize,
    exps: Vec<Vec<i64>>,
}

impl LambdaTable {
    pub fn new(n_gens: usize) -> Result<LambdaTable> {
        // Share the range check (and rank arithmetic) with CartanData.
        let cartan = CartanData::new(n_gens)?;
        let n = cartan.rank();
        let odd = n_gens % 2 == 1;
        let delta = |a: usize, b: usize| if a == b { 1i64 } else { 0 };
        let mut exps = Vec::with_capacity(n);
        for i in 1..=n {
            let ip = n_gens + 1 - i;
            let row = (1..=n_gens)
                .map(|j| {
                    if i <= n - 1 {
                        -2 * delta(j, i) + 2 * delta(j, i + 1) - 2 * delta(j, ip - 1)
                            + 2 * delta(j, ip)
                    } else if odd {
                        -2 * delta(j, n) + 2 * delta(j, n + 2)
                    } else {
                        -2 * delta(j, n - 1) - 2 * delta(j, n)
                            + 2 * delta(j, n + 1)
                            + 2 * delta(j, n + 2)
                    }
                })
                .collect();
            exps.push(row);
        }
        Ok(LambdaTable {
            n_gens,
            rank: n,
            exps,
        })
    }

    /// Exponent `e` with `λ_{i,j} = q^e` (1-based indices).
    pub fn exponent(&self, i: usize, j: usize) -> i64 {
        self.exps[i - 1][j - 1]
    }

    /// `λ_{i,j}` as a coefficient.
    pub fn value<C: CoeffCtx>(&self, coeff: &C, i: usize, j: usize) -> C::F {
        coeff.q_pow(self.exponent(i, j))
    }

    pub fn n_gens(&self) -> usize {
        self.n_gens
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

// ---------------------------------------------------------------------------
// The embedding context
// ---------------------------------------------------------------------------

/// Clifford realization of `U_q(so_N)`: owns the algebra context, the Cartan
/// data, the `λ` table, and the precomputed images of all generators.
///
/// Construction fails when `c = 0` — every image divides by `c²`.
pub struct UqContext<C: CoeffCtx> {
    algebra: AlgebraContext<C>,
    cartan: CartanData,
    lambda: LambdaTable,
    images: BTreeMap<(GenKind, usize), CliffordElement<C::F>>,
}

impl<C: CoeffCtx> UqContext<C> {
    pub fn new(algebra: AlgebraContext<C>) -> Result<Self> {
        let cartan = CartanData::new(algebra.n_gens())?;
        let lambda = LambdaTable::new(algebra.n_gens())?;
        let mut images = BTreeMap::new();
        for i in 1..=cartan.rank() {
            let k = pi_cartan(&algebra, &lambda, i, false)?;
            let kinv = pi_cartan(&algebra, &lambda, i, true)?;
            let ekinv = pi_middle(&algebra, i, GenKind::EKinv)?;
            let f = pi_middle(&algebra, i, GenKind::F)?;
            let e = algebra.multiply(&ekinv, &k)?;
            images.insert((GenKind::K, i), k);
            images.insert((GenKind::Kinv, i), kinv);
            images.insert((GenKind::EKinv, i), ekinv);
            images.insert((GenKind::F, i), f);
            images.insert((GenKind::E, i), e);
        }
        Ok(UqContext {
            algebra,
            cartan,
            lambda,
            images,
        })
    }

    pub fn algebra(&self) -> &AlgebraContext<C> {
        &self.algebra
    }

    pub fn cartan(&self) -> &CartanData {
        &self.cartan
    }

    pub fn lambda(&self) -> &LambdaTable {
        &self.lambda
    }

    /// Rank `n` of the Cartan datum.
    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    pub fn n_gens(&self) -> usize {
        self.algebra.n_gens()
    }

    fn check_generator(&self, g: Generator) -> Result<()> {
        if g.index == 0 || g.index > self.rank() {
            return Err(Error::InvalidInput(format!(
                "generator index {} outside 1..={}",
                g.index,
                self.rank()
            )));
        }
        Ok(())
    }

    /// The image `π(g)` as a Clifford element.
    pub fn pi(&self, g: Generator) -> Result<CliffordElement<C::F>> {
        self.check_generator(g)?;
        Ok(self.images[&(g.kind, g.index)].clone())
    }

    /// Adjoint action `ad(g)` on a Clifford element, via the closed forms
    ///
    /// ```text
    ///     ad(K_i) v      = π(K_i) v π(K_i⁻¹)
    ///     ad(E_iK_i⁻¹) v = π(E_iK_i⁻¹) v − π(K_i⁻¹) v π(K_i) π(E_iK_i⁻¹)
    ///     ad(F_i) v      = π(F_i) v − π(K_i⁻¹) v π(K_i) π(F_i)
    ///     ad(E_i)        = ad(E_iK_i⁻¹) ∘ ad(K_i)
    /// ```
    pub fn ad(
        &self,
        g: Generator,
        v: &CliffordElement<C::F>,
    ) -> Result<CliffordElement<C::F>> {
        self.check_generator(g)?;
        let i = g.index;
        let img = |kind| &self.images[&(kind, i)];
        let chain = |factors: &[&CliffordElement<C::F>]| -> Result<CliffordElement<C::F>> {
            let mut acc = self.algebra.one();
            for f in factors {
                acc = self.algebra.multiply(&acc, f)?;
            }
            Ok(acc)
        };
        match g.kind {
            GenKind::K => chain(&[img(GenKind::K), v, img(GenKind::Kinv)]),
            GenKind::Kinv => chain(&[img(GenKind::Kinv), v, img(GenKind::K)]),
            GenKind::EKinv => {
                let lead = self.algebra.multiply(img(GenKind::EKinv), v)?;
                let twist = chain(&[
                    img(GenKind::Kinv),
                    v,
                    img(GenKind::K),
                    img(GenKind::EKinv),
                ])?;
                Ok(lead.sub(&twist))
            }
            GenKind::F => {
                let lead = self.algebra.multiply(img(GenKind::F), v)?;
                let twist =
                    chain(&[img(GenKind::Kinv), v, img(GenKind::K), img(GenKind::F)])?;
                Ok(lead.sub(&twist))
            }
            GenKind::E => {
                let kv = self.ad(Generator::new(GenKind::K, i), v)?;
                self.ad(Generator::new(GenKind::EKinv, i), &kv)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Image construction
// ---------------------------------------------------------------------------

/// `1 / (c² (q+q⁻¹) q^{N+1−2j})` — the per-index weight in every image.
fn inv_weight<C: CoeffCtx>(coeff: &C, n_gens: usize, j: usize) -> Result<C::F> {
    let qp_inv = coeff.qp().inv()?;
    let mono = coeff.mono(
        &BigRational::one(),
        -(n_gens as i64 + 1 - 2 * j as i64),
        -2,
    )?;
    Ok(mono.mul(&qp_inv))
}

/// Normal-form mask of the word `γ_{j_1} ⋯ γ_{j_l} [mid] γ_{j_l'} ⋯ γ_{j_1'}`:
/// bits for each `j ∈ js`, each prime `j′ = N+1−j`, and the optional middle
/// pair.  All those indices are pairwise distinct and the word is strictly
/// increasing, so the set of bits determines it.
fn word_mask(n_gens: usize, js: &[usize], mid: Option<(usize, usize)>) -> u32 {
    let mut mask = 0u32;
    for &j in js {
        mask |= 1 << (j - 1);
        mask |= 1 << (n_gens - j); // j' = N+1-j, bit index N-j
    }
    if let Some((a, b)) = mid {
        mask |= 1 << (a - 1);
        mask |= 1 << (b - 1);
    }
    mask
}

fn subsets(limit: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..(1 << limit)).map(move |mask| {
        (1..=limit)
            .filter(|j| mask & (1 << (j - 1)) != 0)
            .collect::<Vec<_>>()
    })
}

/// `π(K_i)` (or `π(K_i⁻¹)` with `inverse`): sum over index sets
/// `j_1 < … < j_l ≤ limit` of `pre · Π_r (λ^{±1}_{i,j_r} − q^{4l−4r}) / w(j_r)`
/// times the neutral word `γ_{j_1} ⋯ γ_{j_l} γ_{j_l'} ⋯ γ_{j_1'}`, where
/// `limit = i+1` and `pre = 1` for `i ≤ n−1`, while the last node has
/// `limit = n` and `pre = q^{±(2−ε)}`.
fn pi_cartan<C: CoeffCtx>(
    algebra: &AlgebraContext<C>,
    lambda: &LambdaTable,
    i: usize,
    inverse: bool,
) -> Result<CliffordElement<C::F>> {
    let n_gens = algebra.n_gens();
    let n = algebra.half_rank();
    let eps = if algebra.is_odd() { 1 } else { 0 };
    let coeff = algebra.coeff_ctx();
    let sign = if inverse { -1 } else { 1 };
    let (limit, pre) = if i <= n - 1 {
        (i + 1, coeff.int(1))
    } else {
        (n, coeff.q_pow(sign * (2 - eps)))
    };
    let mut terms = Vec::new();
    for js in subsets(limit) {
        let l = js.len() as i64;
        let mut factor = pre.clone();
        for (r0, &j) in js.iter().enumerate() {
            let r = r0 as i64 + 1;
            let lam = coeff.q_pow(sign * lambda.exponent(i, j));
            let num = lam.sub(&coeff.q_pow(4 * l - 4 * r));
            factor = factor.mul(&num).mul(&inv_weight(coeff, n_gens, j)?);
        }
        terms.push((word_mask(n_gens, &js, None), factor));
    }
    algebra.element_from_terms(terms)
}

/// `π(E_iK_i⁻¹)` and `π(F_i)`: sums over index sets `j_1 < … < j_l ≤ limit`
/// of `pre · Π_r (1 − q^{4r}) / w(j_r)` times the word with a quadratic
/// middle:
///
/// ```text
///     i ≤ n−1:   limit = i−1,  pre = q^{2i+1−N}/(c²q̂₊),
///                middle γ_{i+1} γ_{i′}   (E K⁻¹)   /   γ_i γ_{i′−1}   (F)
///     i = n odd: limit = n−1,  pre = q′/(c²q̂₊)     middle γ_{n+1} γ_{n+2}
///                              pre = q⁻¹q′/(c²q̂₊)  middle γ_n γ_{n+1}
///     i = n even: limit = n−2, pre = q⁻¹/(c²q̂₊)    middle γ_{n+1} γ_{n+2}
///                              pre = q⁻¹/(c²q̂₊)    middle γ_{n−1} γ_n
/// ```
fn pi_middle<C: CoeffCtx>(
    algebra: &AlgebraContext<C>,
    i: usize,
    kind: GenKind,
) -> Result<CliffordElement<C::F>> {
    debug_assert!(matches!(kind, GenKind::EKinv | GenKind::F));
    let n_gens = algebra.n_gens();
    let n = algebra.half_rank();
    let coeff = algebra.coeff_ctx();
    let qp_inv = coeff.qp().inv()?;
    let one = BigRational::one();
    let raising = kind == GenKind::EKinv;
    let (limit, mid, pre) = if i <= n - 1 {
        let pre = coeff
            .mono(&one, 2 * i as i64 + 1 - n_gens as i64, -2)?
            .mul(&qp_inv);
        let mid = if raising {
            (i + 1, n_gens + 1 - i)
        } else {
            (i, n_gens - i)
        };
        (i - 1, mid, pre)
    } else if algebra.is_odd() {
        let base = coeff.sqrt_qp().mul(&qp_inv);
        if raising {
            (n - 1, (n + 1, n + 2), base.mul(&coeff.mono(&one, 0, -2)?))
        } else {
            (n - 1, (n, n + 1), base.mul(&coeff.mono(&one, -1, -2)?))
        }
    } else {
        let pre = coeff.mono(&one, -1, -2)?.mul(&qp_inv);
        let mid = if raising { (n + 1, n + 2) } else { (n - 1, n) };
        (n - 2, mid, pre)
    };
    let mut terms = Vec::new();
    for js in subsets(limit) {
        let mut factor = pre.clone();
        for (r0, &j) in js.iter().enumerate() {
            let r = r0 as i64 + 1;
            let num = coeff.int(1).sub(&coeff.q_pow(4 * r));
            factor = factor.mul(&num).mul(&inv_weight(coeff, n_gens, j)?);
        }
        terms.push((word_mask(n_gens, &js, Some(mid)), factor));
    }
    algebra.element_from_terms(terms)
}
