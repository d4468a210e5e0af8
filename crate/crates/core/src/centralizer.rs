//! Centralizers in `Sym(V)` of subgroups `M = σ_W` of the translation group.
//!
//! `M` acts semiregularly with the cosets of `W` as orbits, so its centralizer
//! is the wreath product `M ≀ Sym(2^m)`, `m = n − dim W`: independent
//! translations by `W` on every coset, and arbitrary permutations of the
//! cosets that preserve the offset from the coset minimum.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::affine::Affinity;
use crate::error::{Error, Result};
use crate::gf2::Subspace;
use crate::oracle::VerificationReport;
use crate::perm::{generate_closure, Perm, PermGroup};
use crate::regular::{check_group_dim, translation_group};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WreathDescriptor {
    pub n: usize,
    pub base: Subspace,
    pub m: usize,
    pub top_degree: usize,
    pub predicted_order: BigUint,
}

/// `|C_{Sym(V)}(σ_W)| = (2^m)! · 2^{2^m (n−m)}`.
pub fn centralizer_order(n: usize, m: usize) -> BigUint {
    let k = 1usize << m;
    let factorial: BigUint = (1..=k).map(BigUint::from).product();
    factorial << (k * (n - m))
}

pub fn centralizer_descriptor(base: &Subspace, n: usize) -> Result<WreathDescriptor> {
    check_group_dim(n)?;
    if base.ambient_dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: base.ambient_dim() });
    }
    let m = n - base.dim();
    Ok(WreathDescriptor {
        n,
        base: base.clone(),
        m,
        top_degree: 1 << m,
        predicted_order: centralizer_order(n, m),
    })
}

/// Per-coset translations by a basis of `W`, then a transposition and a long
/// cycle on the cosets (ordered by minimum representative).
pub fn centralizer_generators(base: &Subspace, n: usize) -> Result<Vec<Perm>> {
    let desc = centralizer_descriptor(base, n)?;
    let reps = base.coset_representatives();
    let mut gens = Vec::new();
    for &r in &reps {
        for &w in base.basis() {
            gens.push(Perm::from_fn(n, |x| if base.reduce(x) == r { x + w } else { x })?);
        }
    }
    let k = desc.top_degree;
    let coset_map = |target: &dyn Fn(usize) -> usize| {
        Perm::from_fn(n, |x| {
            let r = base.reduce(x);
            let y = reps.binary_search(&r).expect("coset minimum");
            x + r + reps[target(y)]
        })
    };
    if k >= 2 {
        gens.push(coset_map(&|y| match y {
            0 => 1,
            1 => 0,
            _ => y,
        })?);
    }
    if k >= 3 {
        gens.push(coset_map(&|y| (y + 1) % k)?);
    }
    Ok(gens)
}

/// The generated centralizer, refusing when the predicted order exceeds `budget`.
pub fn centralizer_group(base: &Subspace, n: usize, budget: usize) -> Result<PermGroup> {
    let desc = centralizer_descriptor(base, n)?;
    let predicted = desc.predicted_order.to_usize().unwrap_or(usize::MAX);
    if predicted > budget {
        return Err(Error::BudgetExceeded(budget));
    }
    generate_closure(n, &centralizer_generators(base, n)?, budget)
}

/// For every hyperplane `W`, the generated centralizer of `σ_W` has order
/// `2^{2n−1}`, consists of affinities and normalizes `T`.
pub fn verify_maximal_centralizer_affine(n: usize) -> Result<Vec<VerificationReport>> {
    check_group_dim(n)?;
    if n > 6 {
        return Err(Error::ScaleGuard(format!("maximal centralizer closure at n = {n}")));
    }
    let t = translation_group(n)?;
    let expected = BigUint::one() << (2 * n - 1);
    let mut reports = Vec::new();
    for w in Subspace::all_of_dim(n, n - 1) {
        let group = centralizer_group(&w, n, usize::MAX)?;
        let elements = group.elements()?;
        let order = BigUint::from(elements.len());
        let affine = elements.iter().all(|p| Affinity::from_perm(p).is_some());
        let normalizes_t = group.generators().iter().all(|g| t.is_normalized_by(g));
        reports.push(VerificationReport::new(
            "maximal-centralizer-affine",
            n,
            format!("W={w}: order {expected}, affine, normalizes T"),
            format!(
                "W={w}: order {order}{}{}",
                if affine { ", affine" } else { ", not affine" },
                if normalizes_t { ", normalizes T" } else { ", does not normalize T" }
            ),
        ));
    }
    Ok(reports)
}
