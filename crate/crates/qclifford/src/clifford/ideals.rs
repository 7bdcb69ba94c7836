//! Canonical elements and minimal left ideals.
//!
//! With `n = ⌊N/2⌋`, the distinguished products are
//!
//! ```text
//! φ^ν = (νc + γ_{n+1}) γ_{n+2} ⋯ γ_N        (N odd,  ν = ±1)
//! φ¹  = γ_{n+1} γ_{n+2} ⋯ γ_N               (N even)
//! ψ^ν = γ_1 ⋯ γ_n (νc + γ_{n+1})            (N odd)
//! ψ¹  = γ_1 ⋯ γ_n                           (N even)
//! ρ_η = γ_1 ⋯ γ_n (ηc + γ_{n+1}) γ_{n+2} ⋯ γ_N     (N odd, η = ±1)
//! ```
//!
//! The left ideal `Cl·φ^ν` has the `2^n`-element basis
//! `{γ_1^{i_1} ⋯ γ_n^{i_n} φ^ν}` enumerated in binary-counter order of
//! `(i_1, …, i_n)`, and membership/coordinates are decided by exact
//! elimination.  For odd `N` the elements `ρ_±` square to multiples of
//! themselves (`ρ_η² = 2η c^{2n+1} q^{n(n+1)} (q+q⁻¹)^n ρ_η`), so their
//! normalizations are orthogonal idempotents whose two-sided ideals each
//! have dimension `2^{N-1}`.

use num_rational::BigRational;

use super::{AlgebraContext, CliffordElement};
use crate::error::{Error, Result};
use crate::linalg::{with_tag, Eliminator};
use crate::scalar::{CoeffCtx, Field};

fn check_sign(value: i64, name: &str) -> Result<()> {
    if value == 1 || value == -1 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} must be +1 or -1, got {value}")))
    }
}

/// Bitmask of the consecutive generators `γ_a, …, γ_b` (empty when `a > b`).
fn range_mask(a: usize, b: usize) -> u32 {
    if a > b {
        return 0;
    }
    ((1u64 << b) - (1u64 << (a - 1))) as u32
}

fn c_times<C: CoeffCtx>(ctx: &AlgebraContext<C>, sign: i64) -> Result<C::F> {
    ctx.coeff_ctx()
        .mono(&BigRational::from_integer(sign.into()), 0, 1)
}

/// The element `φ^ν` generating the minimal left ideal.  For even `N` only
/// `ν = 1` exists.
pub fn phi<C: CoeffCtx>(ctx: &AlgebraContext<C>, nu: i64) -> Result<CliffordElement<C::F>> {
    check_sign(nu, "ν")?;
    let (n_gens, n) = (ctx.n_gens(), ctx.half_rank());
    if ctx.is_odd() {
        let tail = range_mask(n + 2, n_gens);
        ctx.element_from_terms([
            (tail, c_times(ctx, nu)?),
            (range_mask(n + 1, n_gens), ctx.coeff_ctx().int(1)),
        ])
    } else if nu == 1 {
        Ok(ctx.basis_monomial(range_mask(n + 1, n_gens)))
    } else {
        Err(Error::InvalidInput(
            "ν = -1 requires an odd number of generators".into(),
        ))
    }
}

/// The right-handed counterpart `ψ^ν` (generator of the minimal right
/// ideal).  For even `N` only `ν = 1` exists.
pub fn psi<C: CoeffCtx>(ctx: &AlgebraContext<C>, nu: i64) -> Result<CliffordElement<C::F>> {
    check_sign(nu, "ν")?;
    let n = ctx.half_rank();
    if ctx.is_odd() {
        ctx.element_from_terms([
            (range_mask(1, n), c_times(ctx, nu)?),
            (range_mask(1, n + 1), ctx.coeff_ctx().int(1)),
        ])
    } else if nu == 1 {
        Ok(ctx.basis_monomial(range_mask(1, n)))
    } else {
        Err(Error::InvalidInput(
            "ν = -1 requires an odd number of generators".into(),
        ))
    }
}

/// The full product `ρ_η = γ_1 ⋯ γ_n (ηc + γ_{n+1}) γ_{n+2} ⋯ γ_N`
/// (odd `N` only).
pub fn rho<C: CoeffCtx>(ctx: &AlgebraContext<C>, eta: i64) -> Result<CliffordElement<C::F>> {
    check_sign(eta, "η")?;
    if !ctx.is_odd() {
        return Err(Error::InvalidInput(
            "ρ_η requires an odd number of generators".into(),
        ));
    }
    let (n_gens, n) = (ctx.n_gens(), ctx.half_rank());
    ctx.element_from_terms([
        (
            range_mask(1, n) | range_mask(n + 2, n_gens),
            c_times(ctx, eta)?,
        ),
        (range_mask(1, n_gens), ctx.coeff_ctx().int(1)),
    ])
}

/// The scalar `2η c^{2n+1} q^{n(n+1)} (q+q⁻¹)^n` with `ρ_η² = (…) ρ_η`.
fn rho_square_factor<C: CoeffCtx>(ctx: &AlgebraContext<C>, eta: i64) -> Result<C::F> {
    let n = ctx.half_rank() as i64;
    let mut f = ctx.coeff_ctx().mono(
        &BigRational::from_integer((2 * eta).into()),
        n * (n + 1),
        2 * n + 1,
    )?;
    for _ in 0..n {
        f = f.mul(&ctx.coeff_ctx().qp());
    }
    Ok(f)
}

/// The idempotent `e_η = ρ_η / (2η c^{2n+1} q^{n(n+1)} (q+q⁻¹)^n)`
/// (odd `N` only); `e_+` and `e_-` are orthogonal.
pub fn minimal_idempotent<C: CoeffCtx>(
    ctx: &AlgebraContext<C>,
    eta: i64,
) -> Result<CliffordElement<C::F>> {
    let r = rho(ctx, eta)?;
    let factor = rho_square_factor(ctx, eta)?.inv()?;
    Ok(r.scale(&factor))
}

/// Basis `{γ_1^{i_1} ⋯ γ_n^{i_n} φ^ν}` of the left ideal `Cl·φ^ν`, in
/// binary-counter order of `(i_1, …, i_n)` — entry `0` is `φ^ν`, entry `1`
/// is `γ_1 φ^ν`, entry `2` is `γ_2 φ^ν`, and so on.
pub fn ideal_basis<C: CoeffCtx>(
    ctx: &AlgebraContext<C>,
    nu: i64,
) -> Result<Vec<CliffordElement<C::F>>> {
    let f = phi(ctx, nu)?;
    let n = ctx.half_rank();
    let mut basis = Vec::with_capacity(1 << n);
    for t in 0..(1u32 << n) {
        // Bits of t select a strictly increasing product of γ_1..γ_n, so the
        // mask t itself is already the normal-form monomial.
        basis.push(ctx.multiply(&ctx.basis_monomial(t), &f)?);
    }
    Ok(basis)
}

/// Exact coordinates of `x` in [`ideal_basis`]; errors when `x` lies
/// outside the left ideal.
pub fn coords_in_ideal<C: CoeffCtx>(
    ctx: &AlgebraContext<C>,
    nu: i64,
    x: &CliffordElement<C::F>,
) -> Result<Vec<C::F>> {
    let basis = ideal_basis(ctx, nu)?;
    let mut elim = Eliminator::new();
    for (t, b) in basis.iter().enumerate() {
        elim.insert(with_tag(b.to_sparse(), t as u64))
            .map_err(|_| Error::InvalidInput("ideal basis is degenerate".into()))?;
    }
    let solution = elim.solve(x.to_sparse()).ok_or_else(|| {
        Error::NonzeroResidual("element lies outside the left ideal".into())
    })?;
    let mut coords = vec![C::F::zero(); basis.len()];
    for (t, value) in solution {
        coords[t as usize] = value;
    }
    Ok(coords)
}

/// Dimension of the two-sided ideal `Cl · e · Cl` generated by `e`,
/// computed by exact elimination over all `basis × e × basis` products.
pub fn two_sided_ideal_dim<C: CoeffCtx>(
    ctx: &AlgebraContext<C>,
    e: &CliffordElement<C::F>,
) -> Result<usize> {
    let dim = 1u32 << ctx.n_gens();
    let mut elim = Eliminator::new();
    for a in 0..dim {
        let left = ctx.multiply(&ctx.basis_monomial(a), e)?;
        if left.is_zero() {
            continue;
        }
        for b in 0..dim {
            let v = ctx.multiply(&left, &ctx.basis_monomial(b))?;
            if !v.is_zero() {
                let _ = elim.insert(v.to_sparse());
            }
        }
    }
    Ok(elim.rank())
}
