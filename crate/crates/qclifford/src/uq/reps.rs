//! Representations of `U_q(so_N)`: the `N`-dimensional vector
//! representation (both as the printed matrix family `T₁` and as the
//! adjoint action restricted to the span of the generators) and the spin
//! representations on the minimal left ideals.
//!
//! The printed `T₁` family, with `E_{k,l}` the matrix units, `q′ = (q+q⁻¹)^{1/2}`
//! and `D_j = Σ_k q^{2δ_{k,j}} E_{k,k}`:
//!
//! ```text
//!     T₁(K_i)      = D_i⁻¹ D_{i+1} D_{i′−1}⁻¹ D_{i′}              (i ≤ n−1)
//!     T₁(E_iK_i⁻¹) = q² E_{i+1,i} − q² E_{i′,i′−1}
//!     T₁(F_i)      = E_{i,i+1} − E_{i′−1,i′}
//!     odd N:   T₁(K_n) = D_n⁻¹ D_{n+2}
//!              T₁(E_nK_n⁻¹) = q′(q² E_{n+1,n} − q E_{n+2,n+1})
//!              T₁(F_n)      = q′(q² E_{n,n+1} − q⁻¹ E_{n+1,n+2})
//!     even N:  T₁(K_n) = D_{n−1}⁻¹ D_n⁻¹ D_{n+1} D_{n+2}
//!              T₁(E_nK_n⁻¹) = q² E_{n+1,n−1} − q² E_{n+2,n}
//!              T₁(F_n)      = E_{n−1,n+1} − E_{n,n+2}
//! ```
//!
//! Every `D`-product above collapses to `diag_j(λ_{i,j})`.  The family is
//! implemented exactly as printed; comparing it entrywise against the
//! adjoint-induced matrices ([`compare_t1_ad`]) shows agreement except for
//! a single documented deviation: for odd `N` the printed `T₁(F_n)` carries
//! an extra `q²` on its first entry, which also makes the `[E_n, F_n]`
//! relation fail on the printed family ([`verify_t1_relations`] reports
//! that failure as an expected deviation).

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::clifford::{coords_in_ideal, ideal_basis};
use crate::error::{Error, Result};
use crate::linalg::{Eliminator, SparseVec};
use crate::report::CheckReport;
use crate::scalar::{CoeffCtx, Field};

use super::relations::{presentation_report, PresentationElement, SerreReading};
use super::{GenKind, Generator, UqContext};

// ---------------------------------------------------------------------------
// Dense matrices
// ---------------------------------------------------------------------------

/// Dense exact matrix, row-major, 0-based indexing.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Matrix::zeros(dim, dim);
        for i in 0..dim {
            m.set(i, i, F::one());
        }
        m
    }

    /// The matrix unit with a single one at `(r, c)` (0-based).
    pub fn unit(dim: usize, r: usize, c: usize) -> Self {
        let mut m = Matrix::zeros(dim, dim);
        m.set(r, c, F::one());
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.add(b))
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.sub(b))
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, f: &F) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.mul(f)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.cols, other.rows);
        let mut out = Matrix::<F>::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(r, c).add(&a.mul(b));
                    out.set(r, c, cur);
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero())
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|r| (0..self.cols).all(|c| r == c || self.get(r, c).is_zero()))
    }

    /// Nonzero entries `(row, col, value)` in row-major order.
    pub fn entries(&self) -> Vec<(usize, usize, &F)> {
        let mut out = Vec::new();
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = self.get(r, c);
                if !v.is_zero() {
                    out.push((r, c, v));
                }
            }
        }
        out
    }

    /// Flattens into a sparse vector keyed by `r·cols + c`, for elimination.
    fn to_sparse(&self) -> SparseVec<F> {
        let mut v = BTreeMap::new();
        for (r, c, value) in self.entries() {
            v.insert((r * self.cols + c) as u64, value.clone());
        }
        v
    }
}

impl<F: Field> PresentationElement for Matrix<F> {
    type Coeff = F;

    fn mul_el(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(other))
    }

    fn add_el(&self, other: &Self) -> Self {
        self.add(other)
    }

    fn sub_el(&self, other: &Self) -> Self {
        self.sub(other)
    }

    fn scale_el(&self, f: &Self::Coeff) -> Self {
        self.scale(f)
    }

    fn is_zero_el(&self) -> bool {
        self.is_zero()
    }
}

// ---------------------------------------------------------------------------
// Tagged representation matrices
// ---------------------------------------------------------------------------

/// A generator's matrix in a named module with a named basis.
#[derive(Clone, Debug, PartialEq)]
pub struct RepMatrix<F: Field> {
    pub n_gens: usize,
    /// `"vector"`, `"spin:+1"` or `"spin:-1"`.
    pub module: String,
    pub generator: Generator,
    /// `"gamma"` for the vector module, `"gamma-monomials*phi"` for spin
    /// modules (binary-counter order of the γ-monomial prefix).
    pub basis: String,
    pub matrix: Matrix<F>,
}

#[derive(Serialize)]
struct RepMatrixRepr<'a, F> {
    #[serde(rename = "N")]
    n_gens: usize,
    module: &'a str,
    generator: String,
    basis: &'a str,
    entries: Vec<(usize, usize, &'a F)>,
}

impl<F: Field> RepMatrix<F> {
    /// Deterministic JSON: nonzero entries as `[row, col, value]` triples
    /// (0-based), sorted row-major.
    pub fn to_json(&self) -> Result<String>
    where
        F: Serialize,
    {
        let repr = RepMatrixRepr {
            n_gens: self.n_gens,
            module: &self.module,
            generator: self.generator.to_string(),
            basis: &self.basis,
            entries: self.matrix.entries(),
        };
        serde_json::to_string_pretty(&repr)
            .map_err(|e| Error::InvalidInput(format!("serialization failed: {e}")))
    }
}

/// Module selector for [`UqContext::weights`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModuleTag {
    Vector,
    Spin(i64),
}

impl fmt::Display for ModuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleTag::Vector => write!(f, "vector"),
            ModuleTag::Spin(nu) => write!(f, "spin:{}", spin_sign(*nu)),
        }
    }
}

fn spin_sign(nu: i64) -> &'static str {
    if nu == 1 {
        "+1"
    } else {
        "-1"
    }
}

fn check_nu(nu: i64) -> Result<()> {
    if nu == 1 || nu == -1 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("ν must be ±1, got {nu}")))
    }
}

/// Simultaneous `K`-eigenvalues of a module basis and the highest weight
/// vectors (basis vectors annihilated by every raising matrix).
#[derive(Clone, Debug, PartialEq)]
pub struct WeightData<F: Field> {
    /// `eigenvalues[b][i-1]` is the `K_i`-eigenvalue of basis vector `b`.
    pub eigenvalues: Vec<Vec<F>>,
    /// Indices of basis vectors killed by every `E_iK_i⁻¹` matrix.
    pub highest: Vec<usize>,
}

// ---------------------------------------------------------------------------
// Representation constructors
// ---------------------------------------------------------------------------

impl<C: CoeffCtx> UqContext<C> {
    /// The printed vector-representation family (see the module docs).
    /// Every `T₁(K_i^{±1})` is `diag_j(λ_{i,j}^{±1})`; the `E/F` matrices
    /// are built from matrix units exactly as printed, and
    /// `T₁(E_i) = T₁(E_iK_i⁻¹) T₁(K_i)`.
    pub fn t1(&self, g: Generator) -> Result<RepMatrix<C::F>> {
        self.check_generator(g)?;
        let nn = self.n_gens();
        let n = self.rank();
        let odd = self.algebra().is_odd();
        let coeff = self.algebra().coeff_ctx();
        let i = g.index;
        let ip = nn + 1 - i;
        // 1-based matrix unit, matching the printed E_{k,l}.
        let e = |k: usize, l: usize| Matrix::unit(nn, k - 1, l - 1);
        let q2 = coeff.q_pow(2);
        let matrix = match g.kind {
            GenKind::K | GenKind::Kinv => {
                let sign = if g.kind == GenKind::K { 1 } else { -1 };
                let mut m = Matrix::zeros(nn, nn);
                for j in 1..=nn {
                    m.set(
                        j - 1,
                        j - 1,
                        coeff.q_pow(sign * self.lambda().exponent(i, j)),
                    );
                }
                m
            }
            GenKind::EKinv => {
                if i <= n - 1 {
                    e(i + 1, i).scale(&q2).sub(&e(ip, ip - 1).scale(&q2))
                } else if odd {
                    let s = coeff.sqrt_qp();
                    e(n + 1, n)
                        .scale(&s.mul(&q2))
                        .sub(&e(n + 2, n + 1).scale(&s.mul(&coeff.q_pow(1))))
                } else {
                    e(n + 1, n - 1).scale(&q2).sub(&e(n + 2, n).scale(&q2))
                }
            }
            GenKind::F => {
                if i <= n - 1 {
                    e(i, i + 1).sub(&e(ip - 1, ip))
                } else if odd {
                    let s = coeff.sqrt_qp();
                    e(n, n + 1)
                        .scale(&s.mul(&q2))
                        .sub(&e(n + 1, n + 2).scale(&s.mul(&coeff.q_pow(-1))))
                } else {
                    e(n - 1, n + 1).sub(&e(n, n + 2))
                }
            }
            GenKind::E => {
                let ek = self.t1(Generator::new(GenKind::EKinv, i))?;
                let k = self.t1(Generator::new(GenKind::K, i))?;
                ek.matrix.mul(&k.matrix)
            }
        };
        Ok(RepMatrix {
            n_gens: nn,
            module: "vector".into(),
            generator: g,
            basis: "gamma".into(),
            matrix,
        })
    }

    /// Matrix of the adjoint action restricted to `span{γ_1, …, γ_N}`
    /// (column `j` holds the coordinates of `ad(g)(γ_j)`).  Errors when an
    /// image leaves that span.
    pub fn ad_matrix(&self, g: Generator) -> Result<RepMatrix<C::F>> {
        self.check_generator(g)?;
        let nn = self.n_gens();
        let mut matrix = Matrix::zeros(nn, nn);
        for j in 1..=nn {
            let image = self.ad(g, &self.algebra().gamma(j)?)?;
            for (mask, value) in image.terms() {
                if mask.count_ones() != 1 {
                    return Err(Error::NonzeroResidual(format!(
                        "ad({g}) γ_{j} leaves the span of the generators"
                    )));
                }
                let row = mask.trailing_zeros() as usize;
                matrix.set(row, j - 1, value.clone());
            }
        }
        Ok(RepMatrix {
            n_gens: nn,
            module: "vector".into(),
            generator: g,
            basis: "gamma".into(),
            matrix,
        })
    }

    /// Spin representation matrix of `π(g)` acting by left multiplication.
    ///
    /// Odd `N`: the module is the minimal left ideal `Cl·φ^ν` with basis
    /// `γ^{mask} φ^ν` in binary-counter order; dimension `2^n`.
    ///
    /// Even `N`: the ideal `Cl·φ¹` splits into the spans of even
    /// (`ν = +1`) and odd (`ν = −1`) γ-monomial prefixes; each half has
    /// dimension `2^{n−1}` and is preserved because every image is parity
    /// even.
    pub fn spin_rep(&self, nu: i64, g: Generator) -> Result<RepMatrix<C::F>> {
        check_nu(nu)?;
        self.check_generator(g)?;
        let ctx = self.algebra();
        let x = self.pi(g)?;
        let module = format!("spin:{}", spin_sign(nu));
        let matrix = if ctx.is_odd() {
            let basis = ideal_basis(ctx, nu)?;
            let dim = basis.len();
            let mut m = Matrix::zeros(dim, dim);
            for (col, b) in basis.iter().enumerate() {
                let coords = coords_in_ideal(ctx, nu, &ctx.multiply(&x, b)?)?;
                for (row, v) in coords.into_iter().enumerate() {
                    if !v.is_zero() {
                        m.set(row, col, v);
                    }
                }
            }
            m
        } else {
            let basis = ideal_basis(ctx, 1)?;
            let parity = if nu == 1 { 0 } else { 1 };
            let sub: Vec<usize> = (0..basis.len())
                .filter(|t: &usize| t.count_ones() as usize % 2 == parity)
                .collect();
            let mut m = Matrix::zeros(sub.len(), sub.len());
            for (col, &t) in sub.iter().enumerate() {
                let coords =
                    coords_in_ideal(ctx, 1, &ctx.multiply(&x, &basis[t])?)?;
                for (full, v) in coords.into_iter().enumerate() {
                    if v.is_zero() {
                        continue;
                    }
                    match sub.binary_search(&full) {
                        Ok(row) => m.set(row, col, v),
                        Err(_) => {
                            return Err(Error::NonzeroResidual(format!(
                                "π({g}) mixes the parity halves of the ideal"
                            )))
                        }
                    }
                }
            }
            m
        };
        Ok(RepMatrix {
            n_gens: self.n_gens(),
            module,
            generator: g,
            basis: "gamma-monomials*phi".into(),
            matrix,
        })
    }

    fn module_matrix(&self, module: ModuleTag, g: Generator) -> Result<Matrix<C::F>> {
        match module {
            ModuleTag::Vector => Ok(self.ad_matrix(g)?.matrix),
            ModuleTag::Spin(nu) => Ok(self.spin_rep(nu, g)?.matrix),
        }
    }

    /// Simultaneous `K`-eigenvalue tuples of the module basis, plus the
    /// highest weight vectors (killed by every `E_iK_i⁻¹` matrix).  The
    /// vector module uses the adjoint-induced matrices.
    pub fn weights(&self, module: ModuleTag) -> Result<WeightData<C::F>> {
        let n = self.rank();
        let mut k_mats = Vec::with_capacity(n);
        let mut e_mats = Vec::with_capacity(n);
        for i in 1..=n {
            let k = self.module_matrix(module, Generator::new(GenKind::K, i))?;
            if !k.is_diagonal() {
                return Err(Error::InvalidInput(format!(
                    "K_{i} does not act diagonally on the {module} basis"
                )));
            }
            k_mats.push(k);
            e_mats.push(self.module_matrix(module, Generator::new(GenKind::EKinv, i))?);
        }
        let dim = k_mats[0].rows();
        let eigenvalues = (0..dim)
            .map(|b| k_mats.iter().map(|m| m.get(b, b).clone()).collect())
            .collect();
        let highest = (0..dim)
            .filter(|&b| {
                e_mats
                    .iter()
                    .all(|m| (0..m.rows()).all(|r| m.get(r, b).is_zero()))
            })
            .collect();
        Ok(WeightData {
            eigenvalues,
            highest,
        })
    }
}

// ---------------------------------------------------------------------------
// Relation checks on matrix families
// ---------------------------------------------------------------------------

fn matrix_images<C: CoeffCtx>(
    uq: &UqContext<C>,
    build: impl Fn(Generator) -> Result<RepMatrix<C::F>>,
) -> Result<BTreeMap<(GenKind, usize), Matrix<C::F>>> {
    let mut map = BTreeMap::new();
    for i in 1..=uq.rank() {
        for kind in GenKind::ALL {
            map.insert((kind, i), build(Generator::new(kind, i))?.matrix);
        }
    }
    Ok(map)
}

/// Checks the presentation on the printed `T₁` family, with the standard
/// (degree) Serre exponent.  For odd `N` the `[E_n, F_n]` check is expected
/// to fail (the documented deviation in the printed last-node lowering
/// matrix); the report passes exactly when that failure is present and
/// everything else holds.
pub fn verify_t1_relations<C: CoeffCtx>(uq: &UqContext<C>) -> Result<CheckReport> {
    let images = matrix_images(uq, |g| uq.t1(g))?;
    let mut raw = CheckReport::new();
    presentation_report(
        uq.algebra().coeff_ctx(),
        uq.cartan(),
        &|kind, i| images[&(kind, i)].clone(),
        &Matrix::identity(uq.n_gens()),
        &[SerreReading::SerreDegree],
        "t1",
        &mut raw,
    )?;
    let n = uq.rank();
    let deviation_key = format!("t1: E{n} F{n} match the Cartan combination");
    let mut report = CheckReport::new();
    for item in raw.items() {
        if uq.algebra().is_odd() && item.key == deviation_key {
            report.push(
                format!("{} (expected deviation)", item.key),
                !item.pass,
                if item.pass {
                    "the documented deviation in the printed matrix family is unexpectedly absent"
                } else {
                    "printed last-node lowering matrix misses this relation, as documented"
                },
            );
        } else {
            report.push(item.key.clone(), item.pass, item.detail.clone());
        }
    }
    Ok(report)
}

/// Checks the presentation on the adjoint-induced vector matrices with the
/// standard (degree) Serre exponent; no exceptions apply.  (The alternative
/// rank-exponent reading is a genuinely different relation on matrices:
/// the two readings agree on the Clifford images only because those are
/// nilpotent, so it is checked for `π` alone.)
pub fn verify_ad_relations<C: CoeffCtx>(uq: &UqContext<C>) -> Result<CheckReport> {
    let images = matrix_images(uq, |g| uq.ad_matrix(g))?;
    let mut report = CheckReport::new();
    presentation_report(
        uq.algebra().coeff_ctx(),
        uq.cartan(),
        &|kind, i| images[&(kind, i)].clone(),
        &Matrix::identity(uq.n_gens()),
        &[SerreReading::SerreDegree],
        "ad",
        &mut report,
    )?;
    Ok(report)
}

/// Checks the presentation on the spin matrices for one `ν`.
pub fn verify_spin_relations<C: CoeffCtx>(
    uq: &UqContext<C>,
    nu: i64,
) -> Result<CheckReport> {
    check_nu(nu)?;
    let images = matrix_images(uq, |g| uq.spin_rep(nu, g))?;
    let dim = images[&(GenKind::K, 1)].rows();
    let mut report = CheckReport::new();
    presentation_report(
        uq.algebra().coeff_ctx(),
        uq.cartan(),
        &|kind, i| images[&(kind, i)].clone(),
        &Matrix::identity(dim),
        &[SerreReading::SerreDegree],
        &format!("spin:{}", spin_sign(nu)),
        &mut report,
    )?;
    Ok(report)
}

/// Entrywise comparison of the printed `T₁` family against the
/// adjoint-induced matrices.  Agreement is asserted except for the odd-`N`
/// last-node lowering matrix, whose difference is reported informationally
/// with the offending entries (a change-of-basis candidate, not a failure).
pub fn compare_t1_ad<C: CoeffCtx>(uq: &UqContext<C>) -> Result<CheckReport> {
    let mut report = CheckReport::new();
    let odd = uq.algebra().is_odd();
    let n = uq.rank();
    for i in 1..=uq.rank() {
        for kind in GenKind::ALL {
            let g = Generator::new(kind, i);
            let t = uq.t1(g)?.matrix;
            let a = uq.ad_matrix(g)?.matrix;
            if t == a {
                report.push(
                    format!("t1 vs ad: {g}"),
                    true,
                    "entrywise equal",
                );
                continue;
            }
            let mut diffs = Vec::new();
            for r in 0..t.rows() {
                for c in 0..t.cols() {
                    if t.get(r, c) != a.get(r, c) {
                        diffs.push(format!(
                            "({},{}) printed {} vs adjoint {}",
                            r + 1,
                            c + 1,
                            t.get(r, c),
                            a.get(r, c)
                        ));
                    }
                }
            }
            let detail = format!("differing entries: {}", diffs.join("; "));
            if odd && i == n && kind == GenKind::F {
                report.push_info(
                    format!("t1 vs ad: {g} differs (documented deviation)"),
                    detail,
                );
            } else {
                report.push(format!("t1 vs ad: {g}"), false, detail);
            }
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Span saturation
// ---------------------------------------------------------------------------

/// Dimension of the matrix algebra generated by `mats` (with the identity):
/// the span of all products, computed by closing a word basis under right
/// multiplication.  All matrices must be square of one size.
pub fn matrix_algebra_span_dim<F: Field>(mats: &[Matrix<F>]) -> Result<usize> {
    let dim = match mats.first() {
        Some(m) => m.rows(),
        None => return Ok(0),
    };
    for m in mats {
        if m.rows() != dim || m.cols() != dim {
            return Err(Error::InvalidInput(
                "span computation needs square matrices of one size".into(),
            ));
        }
    }
    let mut elim = Eliminator::new();
    let identity = Matrix::<F>::identity(dim);
    elim.insert(identity.to_sparse())
        .map_err(|_| Error::InvalidInput("identity reduced to zero".into()))?;
    let mut worklist = vec![identity];
    while let Some(w) = worklist.pop() {
        for m in mats {
            let p = w.mul(m);
            if elim.insert(p.to_sparse()).is_ok() {
                worklist.push(p);
            }
        }
    }
    Ok(elim.rank())
}
