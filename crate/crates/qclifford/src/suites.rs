//! Cross-cutting verification suites.
//!
//! Each suite bundles the identity checks of one layer into a
//! [`CheckReport`]: the defining relations and basis arithmetic
//! (`clifford`), the braid/antisymmetrizer algebra (`bwm`), the Fock-type
//! action on the q-exterior algebra (`fock`), the quantum-group embedding
//! and its generator-level commutation families (`pi`, `pirels`), the
//! adjoint/vector and spin representations (`adjoint`, `spin`), and the
//! central and idempotent elements (`center`, `ideals`).  The same report
//! functions back both the CLI `verify` command and the integration tests,
//! so "the suite passes" means one thing everywhere.
//!
//! Randomized instances (associativity triples, contraction pairs, module
//! actions, twisted-center parameters) draw from a fixed-seed ChaCha
//! stream: reports are byte-identical across runs.  Instance lists are
//! generated sequentially, then checked in parallel; tensor powers beyond
//! the materialization cap are reported as informational skips rather than
//! failures.

use std::collections::BTreeMap;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::braid::{BraidContext, TensorVector};
use crate::clifford::{
    coords_in_ideal, ideal_basis, minimal_idempotent, rho, two_sided_ideal_dim,
    verify_defining_relations, z0, z1, z_central, AlgebraContext, CliffordElement,
};
use crate::error::{Error, Result};
use crate::exterior::ExteriorAlgebra;
use crate::linalg::Eliminator;
use crate::report::CheckReport;
use crate::scalar::{CoeffCtx, Field};
use crate::uq::{
    compare_t1_ad, matrix_algebra_span_dim, verify_ad_relations, verify_pirels,
    verify_spin_relations, verify_t1_relations, verify_uq_relations, GenKind, Generator,
    ModuleTag, UqContext,
};

/// Fixed default seed for the randomized instance streams.
const SUITE_SEED: u64 = 0x51f7_ed00;

// ---------------------------------------------------------------------------
// Suite selection
// ---------------------------------------------------------------------------

/// A named verification suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Clifford,
    Bwm,
    Fock,
    Pi,
    Pirels,
    Adjoint,
    Spin,
    Center,
    Ideals,
    All,
}

impl Suite {
    /// Every concrete suite, in report order (`All` expands to these).
    pub const CONCRETE: [Suite; 9] = [
        Suite::Clifford,
        Suite::Bwm,
        Suite::Fock,
        Suite::Pi,
        Suite::Pirels,
        Suite::Adjoint,
        Suite::Spin,
        Suite::Center,
        Suite::Ideals,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Clifford => "clifford",
            Suite::Bwm => "bwm",
            Suite::Fock => "fock",
            Suite::Pi => "pi",
            Suite::Pirels => "pirels",
            Suite::Adjoint => "adjoint",
            Suite::Spin => "spin",
            Suite::Center => "center",
            Suite::Ideals => "ideals",
            Suite::All => "all",
        }
    }
}

impl std::fmt::Display for Suite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "clifford" => Ok(Suite::Clifford),
            "bwm" => Ok(Suite::Bwm),
            "fock" => Ok(Suite::Fock),
            "pi" => Ok(Suite::Pi),
            "pirels" => Ok(Suite::Pirels),
            "adjoint" => Ok(Suite::Adjoint),
            "spin" => Ok(Suite::Spin),
            "center" => Ok(Suite::Center),
            "ideals" => Ok(Suite::Ideals),
            "all" => Ok(Suite::All),
            other => Err(Error::InvalidInput(format!(
                "unknown suite '{other}' (expected one of clifford, bwm, fock, pi, \
                 pirels, adjoint, spin, center, ideals, all)"
            ))),
        }
    }
}

/// Tuning knobs for the randomized parts of the suites.  The defaults are
/// the sample counts the integration gate uses.
#[derive(Clone, Copy, Debug)]
pub struct SuiteOptions {
    /// Random `(x·y)·z = x·(y·z)` instances in the `clifford` suite.
    pub associativity_samples: usize,
    /// Random kernel-against-class contraction instances in `fock`.
    pub contraction_samples: usize,
    /// Random `act(xy, ρ) = act(x, act(y, ρ))` instances in `fock`.
    pub module_samples: usize,
    /// Random twisted-center parameter vectors per parity in `center`.
    pub mu_samples: usize,
    /// Include the checks that are only feasible at a rational
    /// specialization of `q` (spin-matrix span saturation, two-sided
    /// ideal dimensions).
    pub specialized: bool,
    /// Override for the tensor materialization cap (`None` defers to the
    /// environment/default cap).
    pub max_dim: Option<u64>,
    /// Seed for the instance streams.
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            associativity_samples: 500,
            contraction_samples: 100,
            module_samples: 200,
            mu_samples: 20,
            specialized: false,
            max_dim: None,
            seed: SUITE_SEED,
        }
    }
}

/// Run one suite (or all of them, in parallel) and merge the reports.
pub fn run_suite<C: CoeffCtx>(
    suite: Suite,
    n_gens: usize,
    coeff: &C,
    opts: &SuiteOptions,
) -> Result<CheckReport> {
    match suite {
        Suite::Clifford => clifford_suite(n_gens, coeff, opts),
        Suite::Bwm => bwm_suite(n_gens, coeff, opts),
        Suite::Fock => fock_suite(n_gens, coeff, opts),
        Suite::Pi => pi_suite(n_gens, coeff),
        Suite::Pirels => pirels_suite(n_gens, coeff),
        Suite::Adjoint => adjoint_suite(n_gens, coeff),
        Suite::Spin => spin_suite(n_gens, coeff, opts),
        Suite::Center => center_suite(n_gens, coeff, opts),
        Suite::Ideals => ideals_suite(n_gens, coeff, opts),
        Suite::All => {
            let parts: Vec<Result<CheckReport>> = Suite::CONCRETE
                .par_iter()
                .map(|s| run_suite(*s, n_gens, coeff, opts))
                .collect();
            let mut merged = CheckReport::new();
            for part in parts {
                merged.merge(part?);
            }
            Ok(merged)
        }
    }
}

// ---------------------------------------------------------------------------
// Random instance helpers
// ---------------------------------------------------------------------------

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let mut num = rng.gen_range(-3i64..=3);
    if num == 0 {
        num = 1;
    }
    let den = rng.gen_range(1i64..=2);
    BigRational::new(num.into(), den.into())
}

/// A random scalar `r · q^{eq} · c^{ec}` with `0 ≤ ec ≤ max_ec` (use
/// `max_ec = 0` in contexts where `c` has been set to zero).
fn random_coeff<C: CoeffCtx>(coeff: &C, rng: &mut ChaCha8Rng, max_ec: i64) -> C::F {
    let r = random_rational(rng);
    let eq = rng.gen_range(-2i64..=2);
    let ec = rng.gen_range(0..=max_ec);
    coeff
        .mono(&r, eq, ec)
        .expect("nonnegative c-power monomials exist in every context")
}

/// A random element with up to `max_terms` scaled basis monomials.
fn random_element<C: CoeffCtx>(
    ctx: &AlgebraContext<C>,
    rng: &mut ChaCha8Rng,
    max_terms: usize,
    max_ec: i64,
) -> CliffordElement<C::F> {
    let mut out = ctx.zero();
    let terms = rng.gen_range(1..=max_terms);
    for _ in 0..terms {
        let mask = rng.gen_range(0..1u32 << ctx.n_gens());
        let factor = random_coeff(ctx.coeff_ctx(), rng, max_ec);
        out = out.add(&ctx.basis_monomial(mask).scale(&factor));
    }
    out
}

/// A random tensor with up to `max_terms` rational entries on `legs` legs.
fn random_tensor<C: CoeffCtx>(
    n_gens: usize,
    coeff: &C,
    rng: &mut ChaCha8Rng,
    legs: usize,
    max_terms: usize,
) -> TensorVector<C::F> {
    let dim = (n_gens as u64).pow(legs as u32);
    let mut out = TensorVector::zero(n_gens, legs);
    let terms = rng.gen_range(1..=max_terms);
    for _ in 0..terms {
        let key = rng.gen_range(0..dim);
        out.add_term(key, coeff.big_rat(&random_rational(rng)));
    }
    out
}

fn sparse_of<F: Field>(v: &TensorVector<F>) -> BTreeMap<u64, F> {
    v.entries().map(|(k, f)| (k, f.clone())).collect()
}

fn list_failures(failures: &[String]) -> String {
    if failures.is_empty() {
        String::new()
    } else {
        format!("failing instances: {}", failures.join(", "))
    }
}

// ---------------------------------------------------------------------------
// clifford
// ---------------------------------------------------------------------------

/// Defining relations, basis closure, and random associativity.
pub fn clifford_suite<C: CoeffCtx>(
    n_gens: usize,
    coeff: &C,
    opts: &SuiteOptions,
) -> Result<CheckReport> {
    let ctx = AlgebraContext::new(n_gens, coeff.clone())?;
    let mut report = verify_defining_relations(&ctx)?;

    let dim = 1u32 << n_gens;
    let pairs: Vec<(u32, u32)> = (0..dim)
        .flat_map(|a| (0..dim).map(move |b| (a, b)))
        .collect();
    let closure_failures: Vec<String> = pairs
        .par_iter()
        .filter_map(|&(a, b)| {
            let x = ctx.basis_monomial(a);
            let y = ctx.basis_monomial(b);
            match ctx.multiply(&x, &y) {
                Ok(_) => None,
                Err(e) => Some(format!("({a:#x},{b:#x}): {e}")),
            }
        })
        .collect();
    report.push(
        "closure: all basis products normalize",
        closure_failures.is_empty(),
        if closure_failures.is_empty() {
            format!("{} ordered pairs", pairs.len())
        } else {
            list_failures(&closure_failures)
        },
    );

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let triples: Vec<[CliffordElement<C::F>; 3]> = (0..opts.associativity_samples)
        .map(|_| {
            [
                random_element(&ctx, &mut rng, 2, 2),
                random_element(&ctx, &mut rng, 2, 2),
                random_element(&ctx, &mut rng, 2, 2),
            ]
        })
        .collect();
    let assoc_failures: Vec<String> = triples
        .par_iter()
        .enumerate()
        .map(|(idx, [x, y, z])| -> Result<Option<String>> {
            let left = ctx.multiply(&ctx.multiply(x, y)?, z)?;
            let right = ctx.multiply(x, &ctx.multiply(y, z)?)?;
            Ok((left != right).then(|| format!("#{idx}")))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    report.push(
        format!(
            "associativity: {} random triples",
            opts.associativity_samples
        ),
        assoc_failures.is_empty(),
        if assoc_failures.is_empty() {
            "(xy)z = x(yz) exactly".to_string()
        } else {
            list_failures(&assoc_failures)
        },
    );
    Ok(report)
}

// ---------------------------------------------------------------------------
// bwm
// ---------------------------------------------------------------------------

/// Antisymmetrizer algebra on tensor powers: `A₂ = P₋`, idempotence, the
/// braid eigenvalue, metric annihilation, and ranks, for every `k ≤ N`
/// within the materialization cap.
pub fn bwm_suite<C: CoeffCtx>(
    n_gens: usize,
    coeff: &C,
    opts: &SuiteOptions,
) -> Result<CheckReport> {
    let ctx = match opts.max_dim {
        Some(cap) => BraidContext::new(n_gens, coeff.clone())?.with_max_dim(cap),
        None => BraidContext::new(n_gens, coeff.clone())?,
    };
    let mut report = CheckReport::new();

    if (n_gens as u64).pow(2) <= ctx.max_dim() {
        let (_, p_minus, _) = ctx.projectors()?;
        let a2 = ctx.materialize(&ctx.antisymmetrizer(2)?, 2)?;
        let pm = ctx.materialize(&p_minus, 2)?;
        report.push(
            "bwm: A2 equals the skew projector",
            a2 == pm,
            "entrywise on two legs",
        );
    } else {
        report.push_info(
            "bwm: A2 comparison skipped",
            format!("two legs exceed the materialization cap {}", ctx.max_dim()),
        );
    }

    let minus_q2_inv = coeff.q_pow(-2).neg();
    for k in 1..=n_gens {
        let dim = (n_gens as u64).pow(k as u32);
        if dim > ctx.max_dim() {
            report.push_info(
                format!("bwm: A{k} skipped"),
                format!(
                    "dimension {dim} on {k} legs exceeds the materialization cap {}",
                    ctx.max_dim()
                ),
            );
            continue;
        }
        let a_k = ctx.antisymmetrizer(k)?;
        // One pass per basis column: image, idempotence, eigenvalue, and
        // annihilation; the images then feed the rank elimination.
        let columns: Vec<Result<(TensorVector<C::F>, Vec<String>)>> = (0..dim)
            .into_par_iter()
            .map(|col| {
                let mut failures = Vec::new();
                let mut basis_vec = TensorVector::zero(n_gens, k);
                basis_vec.add_term(col, coeff.int(1));
                let image = ctx.apply(&a_k, &basis_vec)?;
                if ctx.apply(&a_k, &image)? != image {
                    failures.push(format!("A{k}^2 column {col}"));
                }
                for pos in 1..k {
                    let braided = ctx.apply(&ctx.rhat_at(pos), &image)?;
                    if braided != image.scale(&minus_q2_inv) {
                        failures.push(format!("rhat_{pos} column {col}"));
                    }
                    if !ctx.apply(&ctx.kmat_at(pos), &image)?.is_zero() {
                        failures.push(format!("kmat_{pos} column {col}"));
                    }
                }
                Ok((image, failures))
            })
            .collect();

        let mut elim = Eliminator::new();
        let mut failures = Vec::new();
        for entry in columns {
            let (image, mut fails) = entry?;
            failures.append(&mut fails);
            if !image.is_zero() {
                let _ = elim.insert(sparse_of(&image));
            }
        }
        report.push(
            format!("bwm: A{k} idempotent with braid eigenvalue -q^-2 and K-kill"),
            failures.is_empty(),
            list_failures(&failures),
        );
        let expected_rank = num_integer::binomial(n_gens as u64, k as u64) as usize;
        report.push(
            format!("bwm: rank A{k} = C({n_gens},{k})"),
            elim.rank() == expected_rank,
            format!("rank {} vs {}", elim.rank(), expected_rank),
        );
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// fock
// ---------------------------------------------------------------------------

/// The Fock-type action: defining relations at the operator level on every
/// wedge monomial, the module property on random products, contraction
/// well-definedness on random kernel instances, and faithfulness.
pub fn fock_suite<C: CoeffCtx>(
    n_gens: usize,
    coeff: &C,
    opts: &SuiteOptions,
) -> Result<CheckReport> {
    let ext = ExteriorAlgebra::new(n_gens, coeff.clone())?;
    let braid = ext.braid_ctx();
    let wedge = ext.wedge_ctx();
    let full = AlgebraContext::new(n_gens, coeff.clone())?;
    let mut report = CheckReport::new();

    // Operator-level defining relations: for every wedge basis monomial,
    // precompute γ_k ⊳ (γ_l ⊳ ρ) and combine per projector column.
    let (p_plus, _, _) = braid.projectors()?;
    let pmat = braid.materialize(&p_plus, 2)?;
    let contraction_scalar = coeff
        .mono(&BigRational::from_integer(1.into()), 0, 2)?
        .mul(&coeff.q_pow(2 * n_gens as i64).sub(&coeff.int(1)))
        .mul(&coeff.q_pow(2).sub(&coeff.int(1)).inv()?);
    let monomials: Vec<u32> = (0..1u32 << n_gens).collect();
    let per_rho: Vec<Result<(Vec<String>, Option<String>)>> = monomials
        .par_iter()
        .map(|&mask| {
            let rho_el = wedge.basis_monomial(mask);
            let mut inner = Vec::with_capacity(n_gens);
            for l in 1..=n_gens {
                inner.push(ext.fock_act(l, &rho_el)?);
            }
            let mut outer = vec![Vec::with_capacity(n_gens); n_gens];
            for image in &inner {
                for (k, row) in outer.iter_mut().enumerate() {
                    row.push(ext.fock_act(k + 1, image)?);
                }
            }
            let mut column_failures = Vec::new();
            for col in 0..pmat.dim() {
                let i = col as usize / n_gens + 1;
                let j = col as usize % n_gens + 1;
                let mut sum = wedge.zero();
                for (row, value) in pmat.column(col) {
                    let k = *row as usize / n_gens;
                    let l = *row as usize % n_gens;
                    sum = sum.add(&outer[k][l].scale(value));
                }
                if !sum.is_zero() {
                    column_failures.push(format!("p_plus[{i}{j}] on {mask:#x}"));
                }
            }
            let mut contraction = wedge.zero();
            for i in 1..=n_gens {
                let j = braid.prime(i);
                let weight = coeff.q_pow(braid.metric().c_exponent(i));
                contraction = contraction.add(&outer[i - 1][j - 1].scale(&weight));
            }
            let c_failure = (contraction != rho_el.scale(&contraction_scalar))
                .then(|| format!("contraction on {mask:#x}"));
            Ok((column_failures, c_failure))
        })
        .collect();
    let mut relation_failures = Vec::new();
    let mut contraction_failures = Vec::new();
    for entry in per_rho {
        let (mut cols, c) = entry?;
        relation_failures.append(&mut cols);
        contraction_failures.extend(c);
    }
    report.push(
        "fock: symmetric projector relations act by zero on every wedge monomial",
        relation_failures.is_empty(),
        list_failures(&relation_failures),
    );
    report.push(
        "fock: quadratic contraction acts by its scalar",
        contraction_failures.is_empty(),
        list_failures(&contraction_failures),
    );

    // Module property on random products: x, y live in the full algebra,
    // ρ in the wedge span (c-free coefficients — the wedge engine sets c
    // to zero).
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let module_instances: Vec<(
        CliffordElement<C::F>,
        CliffordElement<C::F>,
        CliffordElement<C::F>,
    )> = (0..opts.module_samples)
        .map(|_| {
            (
                random_element(&full, &mut rng, 2, 2),
                random_element(&full, &mut rng, 2, 2),
                random_element(wedge, &mut rng, 2, 0),
            )
        })
        .collect();
    let module_failures: Vec<String> = module_instances
        .par_iter()
        .enumerate()
        .map(|(idx, (x, y, rho_el))| -> Result<Option<String>> {
            let product = full.multiply(x, y)?;
            let joint = ext.act(&product, rho_el)?;
            let nested = ext.act(x, &ext.act(y, rho_el)?)?;
            Ok((joint != nested).then(|| format!("#{idx}")))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    report.push(
        format!(
            "fock: module property on {} random products",
            opts.module_samples
        ),
        module_failures.is_empty(),
        list_failures(&module_failures),
    );

    // Contraction well-definedness: a kernel vector (in either slot,
    // alternating) contracted against a class representative lands in the
    // kernel on the remaining legs.
    let mut instances = Vec::with_capacity(opts.contraction_samples);
    for idx in 0..opts.contraction_samples {
        let l = rng.gen_range(3..=n_gens);
        let k = rng.gen_range(2..l);
        let kernel_first = idx % 2 == 0;
        let a = random_tensor(n_gens, coeff, &mut rng, k, 3);
        let b = random_tensor(n_gens, coeff, &mut rng, l, 3);
        instances.push((k, l, kernel_first, a, b));
    }
    let contraction_instance_failures: Vec<String> = instances
        .par_iter()
        .enumerate()
        .map(|(idx, (k, l, kernel_first, a, b))| -> Result<Option<String>> {
            let out = if *kernel_first {
                let kernel = a.sub(&braid.apply(&braid.antisymmetrizer(*k)?, a)?);
                let classed = braid.apply(&braid.antisymmetrizer(*l)?, b)?;
                braid.contract(&kernel, &classed)?
            } else {
                let classed = braid.apply(&braid.antisymmetrizer(*k)?, a)?;
                let kernel = b.sub(&braid.apply(&braid.antisymmetrizer(*l)?, b)?);
                braid.contract(&classed, &kernel)?
            };
            let residual = braid.apply(&braid.antisymmetrizer(*l - *k)?, &out)?;
            Ok((!residual.is_zero()).then(|| format!("#{idx} (k={k}, l={l})")))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    report.push(
        format!(
            "fock: contraction descends to wedge classes ({} random instances)",
            opts.contraction_samples
        ),
        contraction_instance_failures.is_empty(),
        list_failures(&contraction_instance_failures),
    );

    // Faithfulness: the basis images under the action on the vacuum are
    // independent.
    let images = ext.basis_images()?;
    let mut elim = Eliminator::new();
    let mut independent = 0usize;
    for (_, image) in &images {
        if elim.insert(image.to_sparse()).is_ok() {
            independent += 1;
        }
    }
    report.push(
        "fock: basis images under the vacuum are independent",
        independent == images.len(),
        format!("{} / {} images", independent, images.len()),
    );
    Ok(report)
}

// ---------------------------------------------------------------------------
// uq-backed suites
// ---------------------------------------------------------------------------

fn uq_context<C: CoeffCtx>(n_gens: usize, coeff: &C) -> Result<UqContext<C>> {
    UqContext::new(AlgebraContext::new(n_gens, coeff.clone())?)
}

/// The quantum-group presentation on the Clifford images.
pub fn pi_suite<C: CoeffCtx>(n_gens: usize, coeff: &C) -> Result<CheckReport> {
    verify_uq_relations(&uq_context(n_gens, coeff)?)
}

/// The generator-by-generator commutation families.
pub fn pirels_suite<C: CoeffCtx>(n_gens: usize, coeff: &C) -> Result<CheckReport> {
    verify_pirels(&uq_context(n_gens, coeff)?)
}

/// Adjoint action on the generator span, the printed vector family, their
/// entrywise comparison, and the highest weight structure of the vector
/// module.
pub fn adjoint_suite<C: CoeffCtx>(n_gens: usize, coeff: &C) -> Result<CheckReport> {
    let uq = uq_context(n_gens, coeff)?;
    let mut report = verify_ad_relations(&uq)?;
    report.merge(verify_t1_relations(&uq)?);
    report.merge(compare_t1_ad(&uq)?);

    let data = uq.weights(ModuleTag::Vector)?;
    report.push(
        "adjoint: top generator is the unique highest weight vector",
        data.highest == vec![n_gens - 1],
        format!("highest weight indices {:?}", data.highest),
    );
    let lambda_row: Vec<C::F> = (1..=uq.rank())
        .map(|i| uq.lambda().value(coeff, i, n_gens))
        .collect();
    report.push(
        "adjoint: highest weight K-eigenvalues match the lambda row",
        data.eigenvalues[n_gens - 1] == lambda_row,
        String::new(),
    );
    Ok(report)
}

/// Spin modules: dimensions, presentation relations, highest weight data,
/// and (at a rational point, odd rank) span saturation.
pub fn spin_suite<C: CoeffCtx>(
    n_gens: usize,
    coeff: &C,
    opts: &SuiteOptions,
) -> Result<CheckReport> {
    let uq = uq_context(n_gens, coeff)?;
    let odd = uq.algebra().is_odd();
    let n = uq.rank();
    let mut report = CheckReport::new();
    for nu in [1i64, -1] {
        let tag = if nu == 1 { "spin:+1" } else { "spin:-1" };
        let expected_dim = if odd { 1usize << n } else { 1usize << (n - 1) };
        let k1 = uq.spin_rep(nu, Generator::new(GenKind::K, 1))?;
        report.push(
            format!("{tag}: dimension"),
            k1.matrix.rows() == expected_dim,
            format!("{} vs {}", k1.matrix.rows(), expected_dim),
        );
        report.merge(verify_spin_relations(&uq, nu)?);

        let data = uq.weights(ModuleTag::Spin(nu))?;
        // Highest weight vector: the cyclic generator (index 0) for odd
        // rank and for the even half; the one-generator mask for the odd
        // half of even rank.
        let expected_index = if odd || nu == 1 {
            0
        } else {
            (0..1usize << n)
                .filter(|t| t.count_ones() % 2 == 1)
                .position(|t| t == 1 << (n - 1))
                .expect("the generator mask has odd weight")
        };
        let expected_eigs: Vec<C::F> = (1..=n)
            .map(|i| {
                if odd {
                    coeff.q_pow(i64::from(i == n))
                } else if nu == 1 {
                    coeff.q_pow(2 * i64::from(i == n))
                } else {
                    coeff.q_pow(2 * i64::from(i == n - 1))
                }
            })
            .collect();
        let hw_ok = data.highest == vec![expected_index]
            && data.eigenvalues[expected_index] == expected_eigs;
        report.push(
            format!("{tag}: highest weight vector and K-eigenvalues"),
            hw_ok,
            format!(
                "highest {:?}, expected index {expected_index}",
                data.highest
            ),
        );

        if odd && opts.specialized {
            let mut mats = Vec::new();
            for i in 1..=n {
                for kind in [GenKind::K, GenKind::Kinv, GenKind::E, GenKind::F] {
                    mats.push(uq.spin_rep(nu, Generator::new(kind, i))?.matrix);
                }
            }
            let span = matrix_algebra_span_dim(&mats)?;
            let target = 1usize << (2 * n);
            report.push(
                format!("{tag}: matrix span saturates the full matrix algebra"),
                span == target,
                format!("span {span} vs 4^{n} = {target}"),
            );
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// center
// ---------------------------------------------------------------------------

/// Central/semi-central elements: involutivity, the stated (anti)commutation
/// with the generators, the twisted-center law for random parameters, and
/// the ideal-separation actions.
pub fn center_suite<C: CoeffCtx>(
    n_gens: usize,
    coeff: &C,
    opts: &SuiteOptions,
) -> Result<CheckReport> {
    let ctx = AlgebraContext::new(n_gens, coeff.clone())?;
    let n = ctx.half_rank();
    let odd = ctx.is_odd();
    let mut report = CheckReport::new();

    let z = if odd { z1(&ctx)? } else { z0(&ctx)? };
    let z_name = if odd { "z1" } else { "z0" };
    report.push(
        format!("center: {z_name} squares to one"),
        ctx.multiply(&z, &z)? == ctx.one(),
        String::new(),
    );
    let mut commutation_failures = Vec::new();
    for i in 1..=n_gens {
        let g = ctx.gamma(i)?;
        let zg = ctx.multiply(&z, &g)?;
        let gz = ctx.multiply(&g, &z)?;
        let ok = if odd { zg == gz } else { zg == gz.neg() };
        if !ok {
            commutation_failures.push(format!("gamma_{i}"));
        }
    }
    report.push(
        if odd {
            "center: z1 commutes with every generator"
        } else {
            "center: z0 anticommutes with every generator"
        },
        commutation_failures.is_empty(),
        list_failures(&commutation_failures),
    );

    // Twisted center: z γ_i = μ_i γ_i z with μ extended by inversion.
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let eta_hats: &[usize] = if odd { &[0, 1] } else { &[0] };
    for &eta_hat in eta_hats {
        let mu_sets: Vec<Vec<C::F>> = (0..opts.mu_samples)
            .map(|_| {
                (0..n)
                    .map(|_| coeff.big_rat(&random_rational(&mut rng)))
                    .collect()
            })
            .collect();
        let failures: Vec<String> = mu_sets
            .par_iter()
            .enumerate()
            .map(|(idx, mu)| -> Result<Option<String>> {
                let zc = z_central(&ctx, mu, eta_hat)?;
                for i in 1..=n_gens {
                    let ip = ctx.prime(i);
                    let factor = if i < ip {
                        mu[i - 1].clone()
                    } else if i == ip {
                        coeff.int(1)
                    } else {
                        mu[ip - 1].inv()?
                    };
                    let lhs = ctx.multiply(&zc, &ctx.gamma(i)?)?;
                    let rhs = ctx.multiply(&ctx.gamma(i)?, &zc)?.scale(&factor);
                    if lhs != rhs {
                        return Ok(Some(format!("#{idx} gamma_{i}")));
                    }
                }
                Ok(None)
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        report.push(
            format!(
                "center: twisted commutation for {} random mu (parity {eta_hat})",
                opts.mu_samples
            ),
            failures.is_empty(),
            list_failures(&failures),
        );
    }

    // Ideal separation.
    if odd {
        let mut failures = Vec::new();
        for eta in [1i64, -1] {
            let basis = ideal_basis(&ctx, eta)?;
            let scalar = coeff.int(eta);
            for (t, b) in basis.iter().enumerate() {
                if ctx.multiply(&z, b)? != b.scale(&scalar) {
                    failures.push(format!("eta={eta} entry {t}"));
                }
            }
        }
        report.push(
            "center: z1 acts by eta on each minimal ideal",
            failures.is_empty(),
            list_failures(&failures),
        );
    } else {
        let basis = ideal_basis(&ctx, 1)?;
        let mut failures = Vec::new();
        for (t, b) in basis.iter().enumerate() {
            let expected = if (t as u32).count_ones() % 2 == 0 {
                b.clone()
            } else {
                b.neg()
            };
            if ctx.multiply(&z, b)? != expected {
                failures.push(format!("entry {t}"));
            }
        }
        report.push(
            "center: z0 separates the ideal halves by parity",
            failures.is_empty(),
            list_failures(&failures),
        );
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// ideals
// ---------------------------------------------------------------------------

/// Minimal-ideal structure: basis coordinates, the squaring law and the
/// idempotent decomposition (odd rank), and — at a rational point — the
/// two-sided ideal dimensions.
pub fn ideals_suite<C: CoeffCtx>(
    n_gens: usize,
    coeff: &C,
    opts: &SuiteOptions,
) -> Result<CheckReport> {
    let ctx = AlgebraContext::new(n_gens, coeff.clone())?;
    let n = ctx.half_rank() as i64;
    let odd = ctx.is_odd();
    let mut report = CheckReport::new();

    let nus: &[i64] = if odd { &[1, -1] } else { &[1] };
    for &nu in nus {
        let basis = ideal_basis(&ctx, nu)?;
        let mut failures = Vec::new();
        for (t, b) in basis.iter().enumerate() {
            let coords = coords_in_ideal(&ctx, nu, b)?;
            let ok = coords
                .iter()
                .enumerate()
                .all(|(s, v)| if s == t { v.is_one() } else { v.is_zero() });
            if !ok {
                failures.push(format!("entry {t}"));
            }
        }
        report.push(
            format!("ideals: basis coordinates round-trip (nu={nu})"),
            failures.is_empty(),
            format!("{} basis vectors", basis.len()),
        );
    }

    if odd {
        for eta in [1i64, -1] {
            let r = rho(&ctx, eta)?;
            // ρ_η² = 2η c^{2n+1} q^{n(n+1)} (q+q⁻¹)^n ρ_η.
            let mut factor = coeff.mono(
                &BigRational::from_integer((2 * eta).into()),
                n * (n + 1),
                2 * n + 1,
            )?;
            for _ in 0..n {
                factor = factor.mul(&coeff.qp());
            }
            report.push(
                format!("ideals: rho squares to its stated multiple (eta={eta})"),
                ctx.multiply(&r, &r)? == r.scale(&factor),
                String::new(),
            );
        }
        // The normalized generators are minimal (not central) idempotents:
        // they are orthogonal in both orders, so their sum is idempotent,
        // and each generates one of the two complementary simple ideals.
        let e_plus = minimal_idempotent(&ctx, 1)?;
        let e_minus = minimal_idempotent(&ctx, -1)?;
        let idempotent_ok = ctx.multiply(&e_plus, &e_plus)? == e_plus
            && ctx.multiply(&e_minus, &e_minus)? == e_minus;
        report.push(
            "ideals: the normalized generators are idempotent",
            idempotent_ok,
            String::new(),
        );
        let orthogonal_ok = ctx.multiply(&e_plus, &e_minus)?.is_zero()
            && ctx.multiply(&e_minus, &e_plus)?.is_zero();
        report.push(
            "ideals: opposite idempotents are orthogonal",
            orthogonal_ok,
            String::new(),
        );
        let sum = e_plus.add(&e_minus);
        report.push(
            "ideals: the idempotent sum is itself idempotent",
            ctx.multiply(&sum, &sum)? == sum,
            String::new(),
        );
        if opts.specialized {
            let expected = 1usize << (n_gens - 1);
            for (eta, e) in [(1i64, &e_plus), (-1, &e_minus)] {
                let dim = two_sided_ideal_dim(&ctx, e)?;
                report.push(
                    format!("ideals: two-sided ideal dimension (eta={eta})"),
                    dim == expected,
                    format!(
                        "dim {dim} vs 2^{} = {expected} (the two halves fill the algebra)",
                        n_gens - 1
                    ),
                );
            }
        }
    } else {
        report.push_info(
            "ideals: idempotent checks skipped",
            "the squaring law and idempotents exist for odd rank only",
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{EvalPoint, NumCtx, SymCtx};

    fn small_opts() -> SuiteOptions {
        SuiteOptions {
            associativity_samples: 25,
            contraction_samples: 10,
            module_samples: 10,
            mu_samples: 3,
            ..SuiteOptions::default()
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for suite in Suite::CONCRETE {
            assert_eq!(suite.name().parse::<Suite>().unwrap(), suite);
        }
        assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn every_suite_passes_symbolically_at_rank_three() {
        let coeff = SymCtx::symbolic();
        let opts = small_opts();
        for suite in Suite::CONCRETE {
            let report = run_suite(suite, 3, &coeff, &opts).unwrap();
            assert!(report.all_pass(), "suite {suite}:\n{report}");
            assert!(!report.is_empty(), "suite {suite} produced no items");
        }
    }

    #[test]
    fn the_merged_suite_passes_at_a_rational_point() {
        let point = EvalPoint::from_fractions(5, 3, 2, 1).unwrap();
        let coeff = NumCtx::new(point);
        let opts = SuiteOptions {
            associativity_samples: 50,
            contraction_samples: 20,
            module_samples: 20,
            mu_samples: 5,
            specialized: true,
            ..SuiteOptions::default()
        };
        let report = run_suite(Suite::All, 4, &coeff, &opts).unwrap();
        assert!(report.all_pass(), "{report}");
    }

    #[test]
    fn specialized_only_checks_appear_when_requested() {
        let point = EvalPoint::from_fractions(5, 3, 2, 1).unwrap();
        let coeff = NumCtx::new(point);
        let mut opts = small_opts();
        let without = run_suite(Suite::Spin, 3, &coeff, &opts).unwrap();
        assert!(!without
            .items()
            .iter()
            .any(|item| item.key.contains("span saturates")));
        opts.specialized = true;
        let with = run_suite(Suite::Spin, 3, &coeff, &opts).unwrap();
        assert!(with
            .items()
            .iter()
            .any(|item| item.key.contains("span saturates")));
        assert!(with.all_pass(), "{with}");
    }

    #[test]
    fn reports_are_deterministic() {
        let coeff = SymCtx::symbolic();
        let opts = small_opts();
        let a = run_suite(Suite::Clifford, 3, &coeff, &opts).unwrap();
        let b = run_suite(Suite::Clifford, 3, &coeff, &opts).unwrap();
        assert_eq!(format!("{a}"), format!("{b}"));
    }

    #[test]
    fn oversized_tensor_powers_are_skipped_not_failed() {
        let coeff = SymCtx::symbolic();
        let opts = SuiteOptions {
            max_dim: Some(30),
            ..small_opts()
        };
        // 4² = 16 fits under the forced cap, 4³ = 64 does not: the two-leg
        // checks run and the rest degrade to informational skips.
        let report = bwm_suite(4, &coeff, &opts).unwrap();
        assert!(report.all_pass(), "{report}");
        assert!(
            report
                .items()
                .iter()
                .any(|item| item.informational && item.key.contains("skipped")),
            "{report}"
        );
        assert!(report
            .items()
            .iter()
            .any(|item| item.key.contains("rank A2")));
    }
}
