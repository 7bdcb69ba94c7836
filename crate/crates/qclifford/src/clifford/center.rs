//! Central and semi-central elements.
//!
//! For `μ = (μ_1, …, μ_n)` with all `μ_i ≠ 0` and a parity bit `η̂`, the
//! space `{z : z γ_i = μ_i γ_i z}` (with `μ` extended by `μ_{i'} = μ_i⁻¹`
//! and `μ_i = 1` at the self-paired index) intersected with the `η̂`-graded
//! half is at most one-dimensional, spanned by
//!
//! ```text
//! z_{μ,η̂} = Σ_{k=0}^n  Σ_{i_1<⋯<i_k≤n}
//!           ( Π_{r=1}^k (μ_{i_r} - (-q²)^η̂ q^{4k-4r}) / (c² (q+q⁻¹) q^{N+1-2i_r}) )
//!           γ_{i_1} ⋯ γ_{i_k} γ_{n+1}^η̂ γ_{i_k'} ⋯ γ_{i_1'} ,
//! ```
//!
//! a sum of normal-form monomials (each word is strictly increasing).  The
//! two distinguished specializations
//!
//! ```text
//! z_0 = Σ_k (-1)^k Π_{l=1}^k (q^{2l-2}+q^{2-2l})/(q (q+q⁻¹) c²) Σ_{|J|=k} q^{2L(J)-k(2n-k+1)} γ^J γ^{J'}
//! z_1 = (1/c) Σ_k Π_{l=1}^k (q^{2l-1}+q^{1-2l})/(q (q+q⁻¹) c²) Σ_{|J|=k} q^{2L(J)-k(2n-k+1)} γ^J γ_{n+1} γ^{J'}
//! ```
//!
//! (with `J ⊆ {1..n}`, `L(J) = Σ_{l∈J} l`) anticommute respectively commute
//! with every generator, square to `1`, and detect the ideal decompositions:
//! `z_1` acts by `η` on `Cl·φ^η` (odd `N`), while `z_0` acts by `±1` on the
//! even/odd halves of `Cl·φ¹` (even `N`).
//!
//! `centralizer_solve` finds the same spaces with no formula at all — exact
//! elimination on the commutation constraints over the `2^N` basis — which
//! is what makes the closed forms testable rather than assumed.

use num_rational::BigRational;

use super::{AlgebraContext, CliffordElement};
use crate::error::{Error, Result};
use crate::linalg::{with_tag, Eliminator, SparseVec};
use crate::scalar::{CoeffCtx, Field};

fn one_rat() -> BigRational {
    BigRational::from_integer(1.into())
}

fn validate_mu<C: CoeffCtx>(ctx: &AlgebraContext<C>, mu: &[C::F]) -> Result<()> {
    if mu.len() != ctx.half_rank() {
        return Err(Error::InvalidInput(format!(
            "expected {} μ-values, got {}",
            ctx.half_rank(),
            mu.len()
        )));
    }
    if mu.iter().any(|m| m.is_zero()) {
        return Err(Error::InvalidInput("μ-values must be nonzero".into()));
    }
    Ok(())
}

fn validate_eta_hat<C: CoeffCtx>(ctx: &AlgebraContext<C>, eta_hat: usize) -> Result<()> {
    match eta_hat {
        0 => Ok(()),
        1 if ctx.is_odd() => Ok(()),
        1 => Err(Error::InvalidInput(
            "the odd-parity space is zero for an even number of generators".into(),
        )),
        _ => Err(Error::InvalidInput(format!("η̂ must be 0 or 1, got {eta_hat}"))),
    }
}

/// Extend `(μ_1, …, μ_n)` to all `N` indices: `μ_{i'} = μ_i⁻¹`, and `1` at
/// the self-paired middle index.
fn extend_mu<C: CoeffCtx>(ctx: &AlgebraContext<C>, mu: &[C::F]) -> Result<Vec<C::F>> {
    let mut full = Vec::with_capacity(ctx.n_gens());
    for i in 1..=ctx.n_gens() {
        let ip = ctx.prime(i);
        if i < ip {
            full.push(mu[i - 1].clone());
        } else if i == ip {
            full.push(ctx.coeff_ctx().int(1));
        } else {
            full.push(mu[ip - 1].inv()?);
        }
    }
    Ok(full)
}

/// The closed-form generator `z_{μ,η̂}` of the `(μ, η̂)`-twisted center.
pub fn z_central<C: CoeffCtx>(
    ctx: &AlgebraContext<C>,
    mu: &[C::F],
    eta_hat: usize,
) -> Result<CliffordElement<C::F>> {
    validate_mu(ctx, mu)?;
    validate_eta_hat(ctx, eta_hat)?;
    let n = ctx.half_rank();
    let coeff = ctx.coeff_ctx();
    let qp_inv = coeff.qp().inv()?;
    let middle_bit = if eta_hat == 1 { 1u32 << n } else { 0 };
    let mut z = ctx.zero();
    for subset in 0..(1u32 << n) {
        let indices: Vec<usize> = (1..=n).filter(|i| subset >> (i - 1) & 1 == 1).collect();
        let k = indices.len() as i64;
        let mut factor = coeff.int(1);
        let mut mask = middle_bit;
        for (r0, &i) in indices.iter().enumerate() {
            let r = r0 as i64 + 1;
            // μ_i − (−q²)^η̂ q^{4k−4r}
            let twist = if eta_hat == 0 {
                coeff.q_pow(4 * k - 4 * r)
            } else {
                coeff.q_pow(4 * k - 4 * r + 2).neg()
            };
            let numer = mu[i - 1].sub(&twist);
            // 1 / (c² (q+q⁻¹) q^{N+1−2i})
            let denom_inv = coeff
                .mono(&one_rat(), 2 * i as i64 - (ctx.n_gens() as i64 + 1), -2)?
                .mul(&qp_inv);
            factor = factor.mul(&numer).mul(&denom_inv);
            mask |= (1u32 << (i - 1)) | (1u32 << (ctx.prime(i) - 1));
        }
        z.add_term(mask, factor);
    }
    Ok(z)
}

/// Shared shape of the two distinguished sums: subsets `J ⊆ {1..n}` with a
/// cumulative per-size prefactor and the balanced monomial `γ^J γ_m^ε γ^{J'}`.
fn corollary_sum<C: CoeffCtx>(
    ctx: &AlgebraContext<C>,
    middle: bool,
    size_factor: impl Fn(i64) -> Result<C::F>,
    sign: i64,
) -> Result<CliffordElement<C::F>> {
    let n = ctx.half_rank();
    let middle_bit = if middle { 1u32 << n } else { 0 };
    // Cumulative products Π_{l=1}^k size_factor(l), k = 0..n.
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(ctx.coeff_ctx().int(1));
    for l in 1..=n as i64 {
        let last = prefix.last().unwrap().clone();
        prefix.push(last.mul(&size_factor(l)?));
    }
    let mut z = ctx.zero();
    for subset in 0..(1u32 << n) {
        let k = i64::from(subset.count_ones());
        let l_sum: i64 = (1..=n as i64)
            .filter(|l| subset >> (l - 1) & 1 == 1)
            .sum();
        let exponent = 2 * l_sum - k * (2 * n as i64 - k + 1);
        let mut factor = prefix[k as usize].mul(&ctx.coeff_ctx().q_pow(exponent));
        if sign == -1 && k % 2 == 1 {
            factor = factor.neg();
        }
        let mut mask = middle_bit;
        for l in 1..=n {
            if subset >> (l - 1) & 1 == 1 {
                mask |= (1u32 << (l - 1)) | (1u32 << (ctx.prime(l) - 1));
            }
        }
        z.add_term(mask, factor);
    }
    Ok(z)
}

/// The grading involution `z_0` of an even-rank algebra: `z_0 γ_i = -γ_i z_0`
/// for every generator and `z_0² = 1`.
pub fn z0<C: CoeffCtx>(ctx: &AlgebraContext<C>) -> Result<CliffordElement<C::F>> {
    if ctx.is_odd() {
        return Err(Error::InvalidInput(
            "z_0 requires an even number of generators".into(),
        ));
    }
    let coeff = ctx.coeff_ctx().clone();
    let qp_inv = coeff.qp().inv()?;
    corollary_sum(
        ctx,
        false,
        move |l| {
            // (q^{2l-2} + q^{-2l+2}) / (q (q+q⁻¹) c²)
            let numer = coeff.q_pow(2 * l - 2).add(&coeff.q_pow(2 - 2 * l));
            Ok(numer
                .mul(&coeff.mono(&one_rat(), -1, -2)?)
                .mul(&qp_inv))
        },
        -1,
    )
}

/// The central involution `z_1` of an odd-rank algebra: `z_1 γ_i = γ_i z_1`
/// for every generator and `z_1² = 1`.
pub fn z1<C: CoeffCtx>(ctx: &AlgebraContext<C>) -> Result<CliffordElement<C::F>> {
    if !ctx.is_odd() {
        return Err(Error::InvalidInput(
            "z_1 requires an odd number of generators".into(),
        ));
    }
    let coeff = ctx.coeff_ctx().clone();
    let qp_inv = coeff.qp().inv()?;
    let sum = corollary_sum(
        ctx,
        true,
        move |l| {
            // (q^{2l-1} + q^{-2l+1}) / (q (q+q⁻¹) c²)
            let numer = coeff.q_pow(2 * l - 1).add(&coeff.q_pow(1 - 2 * l));
            Ok(numer
                .mul(&coeff.mono(&one_rat(), -1, -2)?)
                .mul(&qp_inv))
        },
        1,
    )?;
    let c_inv = ctx.coeff_ctx().mono(&one_rat(), 0, -1)?;
    Ok(sum.scale(&c_inv))
}

/// Solve the commutation constraints `z γ_i = μ_i γ_i z` (μ extended as in
/// [`z_central`]) together with the parity constraint `∂_0(z) = η̂`, by
/// exact elimination over the `2^N` monomial basis.  Returns a basis of the
/// solution space, each vector normalized so its lowest monomial has
/// coefficient one.
pub fn centralizer_solve<C: CoeffCtx>(
    ctx: &AlgebraContext<C>,
    mu: &[C::F],
    eta_hat: usize,
) -> Result<Vec<CliffordElement<C::F>>> {
    validate_mu(ctx, mu)?;
    if eta_hat > 1 {
        return Err(Error::InvalidInput(format!("η̂ must be 0 or 1, got {eta_hat}")));
    }
    let full_mu = extend_mu(ctx, mu)?;
    let dim = 1u32 << ctx.n_gens();
    let mut elim = Eliminator::new();
    let mut kernel = Vec::new();
    for m in 0..dim {
        if (m.count_ones() as usize & 1) != eta_hat {
            continue;
        }
        let b = ctx.basis_monomial(m);
        // Stack the N constraint vectors (z γ_i − μ_i γ_i z evaluated at
        // z = γ^m) into one sparse column, bucketed by generator index.
        let mut column: SparseVec<C::F> = SparseVec::new();
        for i in 1..=ctx.n_gens() {
            let g = ctx.gamma(i)?;
            let diff = ctx
                .multiply(&b, &g)?
                .sub(&ctx.multiply(&g, &b)?.scale(&full_mu[i - 1]));
            let offset = (i as u64) << 20;
            for (mask, value) in diff.terms() {
                column.insert(offset | u64::from(mask), value.clone());
            }
        }
        if let Err(residual) = elim.insert(with_tag(column, u64::from(m))) {
            // The residual's tag coordinates give an exact dependency among
            // the inserted columns — i.e. a solution of the system.
            let mut z = ctx.zero();
            for (key, value) in residual {
                z.add_term((key - crate::linalg::TAG_BASE) as u32, value);
            }
            let lead = z
                .terms()
                .next()
                .map(|(_, c)| c.clone())
                .expect("kernel vector is nonzero");
            kernel.push(z.scale(&lead.inv()?));
        }
    }
    Ok(kernel)
}
