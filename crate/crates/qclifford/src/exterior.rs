//! The q-exterior algebra `Λ_q(N)` and the Fock-type representation of the
//! Clifford algebra on it.
//!
//! `Λ_q(N) = ⊕_{m=0}^N V^{∧m}` is the `c = 0` member of the Clifford
//! family, so exterior elements are ordinary [`CliffordElement`]s whose
//! context folds `c` to zero, and the wedge product is that engine's
//! multiplication.  The generators act on a homogeneous element `ρ_m` of
//! degree `m` by
//!
//! ```text
//! γ_i ⊳ ρ_m = γ_i ∧ ρ_m + ((1 + q^{2N-4})/(1 + q^{2N-4m})) ⟨γ_i, ρ_m⟩,
//! ```
//!
//! where the contraction `⟨·,·⟩` is computed on tensor representatives:
//! lift `ρ_m` to `V^{⊗m}`, contract in the tensor picture, and read the
//! result back through the wedge-quotient coordinates.  Extending along
//! normal-form words makes `⊳` a representation of the full algebra
//! `Cl(c²)`; the `c²`-dependence enters only through the pairing values in
//! the contraction term, so module coefficients stay in the same scalar
//! field.  The representation is faithful and triangular: `γ^I ⊳ 1` is the
//! wedge monomial of `I` plus strictly lower-degree terms.

use std::collections::BTreeMap;

use crate::braid::{BraidContext, TensorVector};
use crate::clifford::{AlgebraContext, CliffordElement};
use crate::error::{Error, Result};
use crate::scalar::{CoeffCtx, Field};

/// Exterior elements are Clifford elements over a `c = 0` context.
pub type ExteriorElement<F> = CliffordElement<F>;

/// The exterior algebra with its tensor-space machinery: a `c = 0` rewrite
/// engine for the wedge product and a full-`c` braid context for the
/// contraction term of the Fock action.
pub struct ExteriorAlgebra<C: CoeffCtx> {
    wedge_ctx: AlgebraContext<C>,
    braid: BraidContext<C>,
}

impl<C: CoeffCtx> ExteriorAlgebra<C> {
    /// Build the exterior algebra on `N = n_gens` generators.  The given
    /// coefficient context keeps its `c` for the pairing; the wedge engine
    /// runs its `c = 0` restriction.
    pub fn new(n_gens: usize, coeff: C) -> Result<Self> {
        let wedge_ctx = AlgebraContext::new(n_gens, coeff.with_c_zero())?;
        let braid = BraidContext::new(n_gens, coeff)?;
        Ok(ExteriorAlgebra { wedge_ctx, braid })
    }

    pub fn n_gens(&self) -> usize {
        self.wedge_ctx.n_gens()
    }

    /// The `c = 0` rewrite engine carrying the wedge product.
    pub fn wedge_ctx(&self) -> &AlgebraContext<C> {
        &self.wedge_ctx
    }

    /// The tensor-space context used for contractions.
    pub fn braid_ctx(&self) -> &BraidContext<C> {
        &self.braid
    }

    pub fn one(&self) -> ExteriorElement<C::F> {
        self.wedge_ctx.one()
    }

    pub fn gamma(&self, i: usize) -> Result<ExteriorElement<C::F>> {
        self.wedge_ctx.gamma(i)
    }

    /// The wedge product (multiplication in the `c = 0` engine).
    pub fn wedge(
        &self,
        x: &ExteriorElement<C::F>,
        y: &ExteriorElement<C::F>,
    ) -> Result<ExteriorElement<C::F>> {
        self.wedge_ctx.multiply(x, y)
    }

    /// Split an element into its graded parts, keyed by word length.
    pub fn grade_parts(
        &self,
        rho: &ExteriorElement<C::F>,
    ) -> BTreeMap<usize, ExteriorElement<C::F>> {
        let mut parts: BTreeMap<usize, ExteriorElement<C::F>> = BTreeMap::new();
        for (mask, coeff) in rho.terms() {
            let m = mask.count_ones() as usize;
            let part = parts.entry(m).or_insert_with(|| self.wedge_ctx.zero());
            *part = part.add(&self.wedge_ctx.basis_monomial(mask).scale(coeff));
        }
        parts
    }

    /// The generator action
    /// `γ_i ⊳ ρ_m = γ_i ∧ ρ_m + ((1+q^{2N-4})/(1+q^{2N-4m})) ⟨γ_i, ρ_m⟩`,
    /// applied per graded part for inhomogeneous input.
    pub fn fock_act(
        &self,
        i: usize,
        rho: &ExteriorElement<C::F>,
    ) -> Result<ExteriorElement<C::F>> {
        let n = self.n_gens() as i64;
        if i == 0 || i > self.n_gens() {
            return Err(Error::InvalidInput(format!(
                "generator index {i} outside 1..={}",
                self.n_gens()
            )));
        }
        let gamma_i = self.wedge_ctx.gamma(i)?;
        let e_i = TensorVector::basis(self.n_gens(), &[i])?;
        let coeff = self.braid.coeff_ctx();
        let mut out = self.wedge_ctx.zero();
        for (m, part) in self.grade_parts(rho) {
            out = out.add(&self.wedge_ctx.multiply(&gamma_i, &part)?);
            let numerator = coeff.int(1).add(&coeff.q_pow(2 * n - 4));
            let denominator = coeff.int(1).add(&coeff.q_pow(2 * n - 4 * m as i64));
            let weight = numerator.mul(&denominator.inv()?);
            let lifted = self.braid.wedge_lift(&self.wedge_ctx, &part)?;
            let contracted = self.braid.contract(&e_i, &lifted)?;
            let back = self.braid.wedge_coords(&self.wedge_ctx, &contracted)?;
            out = out.add(&back.scale(&weight));
        }
        Ok(out)
    }

    /// Extend the generator action along normal-form words: for
    /// `x = Σ α_I γ^I`, `act(x, ρ) = Σ α_I γ_{i_1} ⊳ (⋯ ⊳ (γ_{i_k} ⊳ ρ))`.
    pub fn act(
        &self,
        x: &CliffordElement<C::F>,
        rho: &ExteriorElement<C::F>,
    ) -> Result<ExteriorElement<C::F>> {
        let mut out = self.wedge_ctx.zero();
        for (mask, coeff) in x.terms() {
            let mut cur = rho.clone();
            for i in (1..=self.n_gens()).rev() {
                if mask >> (i - 1) & 1 == 1 {
                    cur = self.fock_act(i, &cur)?;
                }
            }
            out = out.add(&cur.scale(coeff));
        }
        Ok(out)
    }

    /// The images `{γ^I ⊳ 1}` of all `2^N` basis monomials, in mask order.
    /// Their linear independence witnesses faithfulness.
    pub fn basis_images(&self) -> Result<Vec<(u32, ExteriorElement<C::F>)>> {
        let mut out = Vec::with_capacity(1 << self.n_gens());
        for mask in 0u32..(1 << self.n_gens()) {
            let word = self.wedge_ctx.basis_monomial(mask);
            out.push((mask, self.act(&word, &self.one())?));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Eliminator;
    use crate::scalar::{Field, Scalar, SymCtx};
    use num_rational::BigRational;
    use rand::{Rng, SeedableRng};

    fn algebra(n: usize) -> ExteriorAlgebra<SymCtx> {
        ExteriorAlgebra::new(n, SymCtx::symbolic()).unwrap()
    }

    #[test]
    fn wedge_matches_pinned_examples() {
        let ext = algebra(3);
        let g1 = ext.gamma(1).unwrap();
        let g3 = ext.gamma(3).unwrap();
        assert!(ext.wedge(&g1, &g1).unwrap().is_zero());
        let expected = ext.wedge_ctx().basis_monomial(0b101).neg();
        assert_eq!(ext.wedge(&g3, &g1).unwrap(), expected);
    }

    #[test]
    fn degree_two_component_has_binomial_dimension() {
        let ext = algebra(4);
        let mut products = Vec::new();
        for i in 1..=4usize {
            for j in i + 1..=4 {
                let w = ext
                    .wedge(&ext.gamma(i).unwrap(), &ext.gamma(j).unwrap())
                    .unwrap();
                assert_eq!(w.num_terms(), 1, "γ_{i}∧γ_{j} stays a monomial");
                products.push(w);
            }
        }
        products.sort_by_key(|w| w.terms().next().map(|(m, _)| m));
        products.dedup_by_key(|w| w.terms().next().map(|(m, _)| m));
        assert_eq!(products.len(), 6);
    }

    #[test]
    fn generators_act_on_the_vacuum_as_themselves() {
        for n in 3..=4usize {
            let ext = algebra(n);
            for i in 1..=n {
                let got = ext.fock_act(i, &ext.one()).unwrap();
                assert_eq!(got, ext.gamma(i).unwrap(), "γ_{i} ⊳ 1 at N={n}");
            }
        }
    }

    #[test]
    fn fock_action_matches_the_pinned_degree_one_example() {
        let ext = algebra(3);
        let g3 = ext.gamma(3).unwrap();
        let got = ext.fock_act(1, &g3).unwrap();
        let pairing = Scalar::monomial(&BigRational::from_integer(1.into()), 1, 2);
        let expected = ext
            .wedge_ctx()
            .basis_monomial(0b101)
            .add(&ext.one().scale(&pairing));
        assert_eq!(got, expected, "γ₁ ⊳ γ₃ = γ₁∧γ₃ + c²q");
    }

    #[test]
    fn quadratic_casimir_acts_on_the_vacuum_by_its_trace() {
        // Σ C^{ij} γ_i ⊳ (γ_j ⊳ 1) = c² q⁻¹ (q^{2N} - 1)/(q - q⁻¹) · 1.
        for n in 3..=5usize {
            let ext = algebra(n);
            let braid = ext.braid_ctx();
            let mut acc = ext.wedge_ctx().zero();
            for i in 1..=n {
                let j = braid.prime(i);
                let weight = Scalar::q_pow(braid.metric().c_exponent(i));
                let inner = ext.fock_act(j, &ext.one()).unwrap();
                acc = acc.add(&ext.fock_act(i, &inner).unwrap().scale(&weight));
            }
            let value = Scalar::monomial(&BigRational::from_integer(1.into()), -1, 2)
                .mul(&Scalar::q_pow(2 * n as i64).sub(&Scalar::from_int(1)))
                .div(&Scalar::q_pow(1).sub(&Scalar::q_pow(-1)))
                .unwrap();
            assert_eq!(acc, ext.one().scale(&value), "N={n}");
        }
    }

    #[test]
    fn action_extends_multiplicatively_along_words() {
        // act(xy, ρ) = act(x, act(y, ρ)) with xy computed in the full engine.
        let ext = algebra(3);
        let full = AlgebraContext::new(3, SymCtx::symbolic()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..12 {
            let mut x = full.zero();
            let mut y = full.zero();
            for _ in 0..2 {
                let m = rng.gen_range(0..8u32);
                let a = rng.gen_range(-3i64..4);
                x = x.add(&full.basis_monomial(m).scale(&Scalar::from_big_rational(
                    &BigRational::new(a.into(), 1.into()),
                )));
                let m = rng.gen_range(0..8u32);
                let a = rng.gen_range(-3i64..4);
                y = y.add(&full.basis_monomial(m).scale(&Scalar::from_big_rational(
                    &BigRational::new(a.into(), 1.into()),
                )));
            }
            let rho = ext.wedge_ctx().basis_monomial(rng.gen_range(0..8u32));
            let xy = full.multiply(&x, &y).unwrap();
            let lhs = ext.act(&xy, &rho).unwrap();
            let rhs = ext.act(&x, &ext.act(&y, &rho).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn defining_relations_hold_as_operators_on_every_grade() {
        // P₊^{kl}_{ij} Γ_k Γ_l = 0 and C^{ij} Γ_i Γ_j = c²(q^{2N}-1)/(q²-1)·id
        // on each V^∧m, with the grade-dependent contraction coefficient.
        let n = 3usize;
        let ext = algebra(n);
        let braid = ext.braid_ctx();
        let (p_plus, _, _) = braid.projectors().unwrap();
        let pmat = braid.materialize(&p_plus, 2).unwrap();
        let casimir = Scalar::monomial(&BigRational::from_integer(1.into()), 0, 2)
            .mul(&Scalar::q_pow(2 * n as i64).sub(&Scalar::from_int(1)))
            .div(&Scalar::q_pow(2).sub(&Scalar::from_int(1)))
            .unwrap();
        for rho_mask in 0u32..(1 << n) {
            let rho = ext.wedge_ctx().basis_monomial(rho_mask);
            // Cache Γ_k Γ_l ρ for all pairs.
            let mut double = BTreeMap::new();
            for k in 1..=n {
                let inner = ext.fock_act(k, &rho).unwrap();
                for l in 1..=n {
                    // Γ_l is applied first: store under the column order (l first).
                    double.insert((l, k), ext.fock_act(l, &inner).unwrap());
                }
            }
            for col in 0..pmat.dim() {
                let i = col as usize / n + 1;
                let j = col as usize % n + 1;
                let mut sum = ext.wedge_ctx().zero();
                for (row, value) in pmat.column(col) {
                    let k = *row as usize / n + 1;
                    let l = *row as usize % n + 1;
                    sum = sum.add(&double[&(k, l)].scale(value));
                }
                assert!(sum.is_zero(), "P₊[{i}{j}] on mask {rho_mask:03b}");
            }
            let mut contraction = ext.wedge_ctx().zero();
            for i in 1..=n {
                let j = braid.prime(i);
                let weight = Scalar::q_pow(braid.metric().c_exponent(i));
                contraction = contraction.add(&double[&(i, j)].scale(&weight));
            }
            assert_eq!(
                contraction,
                rho.scale(&casimir),
                "C-contraction on mask {rho_mask:03b}"
            );
        }
    }

    #[test]
    fn representation_is_faithful_and_triangular() {
        let ext = algebra(3);
        let mut elim = Eliminator::new();
        for (mask, image) in ext.basis_images().unwrap() {
            // Triangular: the top coefficient is 1, everything else shorter.
            assert!(image.coeff(mask).is_one(), "top term of γ^{mask:03b} ⊳ 1");
            for (m, _) in image.terms() {
                assert!(
                    m == mask || m.count_ones() < mask.count_ones(),
                    "γ^{mask:03b} ⊳ 1 has non-top term {m:03b} of equal degree"
                );
            }
            // Faithful: the 2^N images are independent.
            assert!(
                elim.insert(image.to_sparse()).is_ok(),
                "image of γ^{mask:03b} is dependent"
            );
        }
        assert_eq!(elim.rank(), 8);
    }

    #[test]
    fn wedge_quotient_agrees_with_the_rewrite_engine() {
        // Same quotient, two realizations: coordinates of e_a ⊗ e_b in
        // V^∧2 must equal the c = 0 normal form of the word γ_a γ_b, and
        // likewise in degree three.
        for n in 3..=4usize {
            let ext = algebra(n);
            let braid = ext.braid_ctx();
            for a in 1..=n {
                for b in 1..=n {
                    let t = TensorVector::basis(n, &[a, b]).unwrap();
                    let got = braid.wedge_coords(ext.wedge_ctx(), &t).unwrap();
                    let expected = ext.wedge_ctx().rewrite(&[a, b]).unwrap();
                    assert_eq!(got, expected, "N={n}, word γ_{a}γ_{b}");
                }
            }
        }
        let ext = algebra(3);
        let braid = ext.braid_ctx();
        for word in [[2, 1, 3], [3, 2, 1], [2, 2, 1], [3, 1, 2]] {
            let t = TensorVector::basis(3, &word).unwrap();
            let got = braid.wedge_coords(ext.wedge_ctx(), &t).unwrap();
            let expected = ext.wedge_ctx().rewrite(&word).unwrap();
            assert_eq!(got, expected, "word {word:?}");
        }
    }

    #[test]
    fn exterior_elements_serialize_with_a_zero_c_tag() {
        let ext = algebra(3);
        let json = ext.wedge_ctx().to_json(&ext.gamma(1).unwrap()).unwrap();
        assert!(json.contains("\"c\": \"zero\""));
    }
}
