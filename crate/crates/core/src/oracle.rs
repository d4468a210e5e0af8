//! Brute-force verifiers and the theorem registry.
//!
//! The searches here work directly on permutation tables (matchings,
//! commuting-involution extension, full scans of `Sym(F₂³)` and `AGL(F₂ⁿ)`)
//! and never call the parametrized constructions they are compared against.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Display;
use std::time::Instant;

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::affine::Affinity;
use crate::centralizer::{centralizer_group, centralizer_order, verify_maximal_centralizer_affine};
use crate::error::{check_dim, Error, Result};
use crate::gf2::{BitMatrix, BitVector, Flag, Subspace};
use crate::perm::{centralizer_in, generate_closure, normalizer_in, Perm, PermGroup, DEFAULT_BUDGET};
use crate::regular::{
    build_tb, count_t_n, dixon_conjugator, enumerate_second_maximal, tb_parameters, translation_group, weak_keys,
    check_group_dim, RegularGroup,
};
use crate::sylow::{
    agl_generators, agl_intersection_has_full_sylow, agl_orbit, all_sylows, canonical_sylow, count_flag_normalized, count_s_n,
    count_sylows, enumerate_flag_normalized, normal_regular_subgroups, outer_normalizer_element, sylows_with_normal,
    t_sigma, SylowAGL,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Verified,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub theorem_id: String,
    pub n: usize,
    pub claim: String,
    pub observed: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

impl VerificationReport {
    /// Verified exactly when `observed == claim`.
    pub fn new(theorem_id: &str, n: usize, claim: impl Into<String>, observed: impl Into<String>) -> Self {
        let (claim, observed) = (claim.into(), observed.into());
        let status = if claim == observed { Status::Verified } else { Status::Failed };
        VerificationReport { theorem_id: theorem_id.to_owned(), n, claim, observed, status, runtime_ms: None }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Verified
    }
}

/// `AGL(F₂ⁿ)` by listing every invertible matrix and translation (`n ≤ 4`).
pub fn agl_group(n: usize) -> Result<PermGroup> {
    if !(1..=4).contains(&n) {
        return Err(Error::ScaleGuard(format!("AGL(F_2^{n}) is only listed for n ≤ 4")));
    }
    let row_mask = (1u64 << n) - 1;
    let linear: Vec<BitMatrix> = (0u64..1 << (n * n))
        .into_par_iter()
        .filter_map(|mask| {
            let rows: Vec<BitVector> =
                (0..n).map(|i| BitVector::from_index(n, ((mask >> (i * n)) & row_mask) as usize)).collect();
            let m = BitMatrix::from_rows(&rows).expect("n rows of length n");
            m.is_invertible().then_some(m)
        })
        .collect();
    let elements: Vec<Perm> = linear
        .par_iter()
        .flat_map_iter(|m| BitVector::all(n).map(move |v| Perm::from_fn(n, |x| m.mul_vec(x) + v).expect("bijective")))
        .collect();
    PermGroup::from_elements(n, elements)
}

fn translation_perm(v: BitVector) -> Perm {
    Perm::from_fn(v.dim(), |x| x + v).expect("bijective")
}

fn is_translation(p: &Perm) -> bool {
    let c = p.apply(0);
    (0..p.degree()).all(|x| p.apply(x) ^ x == c)
}

/// How an involution centralizing `σ_W` may act on the cosets of `W`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CosetCondition {
    Any,
    FixesNone,
    FixesCount(usize),
}

fn fixed_cosets(p: &Perm, base: &Subspace) -> usize {
    base.coset_representatives().into_iter().filter(|&r| base.reduce(p.image(r)) == r).count()
}

/// All fixed-point-free involutions of `Sym(V)` commuting with every `σ_w`,
/// `w ∈ W`, by a matching search that pairs whole cosets at a time.
pub fn enumerate_fpf_involutions_centralizing(
    base: &Subspace,
    n: usize,
    condition: CosetCondition,
) -> Result<Vec<Perm>> {
    check_dim(n, base.ambient_dim())?;
    let cosets = 1usize << (n - base.dim());
    if n > 4 || cosets > 8 {
        return Err(Error::ScaleGuard(format!("involution search over {cosets} cosets in F_2^{n}")));
    }
    fn search(images: &mut [u16], w: &[BitVector], n: usize, out: &mut Vec<Perm>) {
        let Some(x) = images.iter().position(|&i| i == u16::MAX) else {
            out.push(Perm::from_images(images.to_vec()).expect("complete matching"));
            return;
        };
        let xv = BitVector::from_index(n, x);
        for y in (0..images.len()).filter(|&y| y != x) {
            if images[y] != u16::MAX {
                continue;
            }
            let yv = BitVector::from_index(n, y);
            for &m in w {
                images[(xv + m).index()] = (yv + m).index() as u16;
                images[(yv + m).index()] = (xv + m).index() as u16;
            }
            search(images, w, n, out);
            for &m in w {
                images[(xv + m).index()] = u16::MAX;
                images[(yv + m).index()] = u16::MAX;
            }
        }
    }
    let w = base.elements();
    let mut images = vec![u16::MAX; 1 << n];
    let mut all = Vec::new();
    search(&mut images, &w, n, &mut all);
    let mut out: Vec<Perm> = all
        .into_iter()
        .filter(|p| match condition {
            CosetCondition::Any => true,
            CosetCondition::FixesNone => fixed_cosets(p, base) == 0,
            CosetCondition::FixesCount(k) => fixed_cosets(p, base) == k,
        })
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// Adds `c` to the elementary abelian semiregular group `h` (sorted), keeping
/// every new element fixed-point-free and outside `T`.
fn extend_by(h: &[Perm], c: &Perm) -> Option<Vec<Perm>> {
    if h.binary_search(c).is_ok() || !h.iter().all(|x| x.commutes_with(c)) {
        return None;
    }
    let mut out = h.to_vec();
    for x in h {
        let y = x * c;
        if !y.is_fixed_point_free() || is_translation(&y) {
            return None;
        }
        out.push(y);
    }
    out.sort_unstable();
    Some(out)
}

/// Every elementary abelian regular subgroup of `ambient`, optionally only
/// those meeting `T` in a subgroup of the given dimension. Each is grown from
/// `σ_W` by adjoining commuting fixed-point-free involutions of `ambient`.
pub fn brute_enumerate_regular_ea(ambient: &PermGroup, intersection_dim: Option<usize>) -> Result<Vec<PermGroup>> {
    let n = ambient.dim();
    if n > 4 {
        return Err(Error::ScaleGuard(format!("regular subgroup search at n = {n}")));
    }
    let involutions: Vec<&Perm> =
        ambient.elements()?.iter().filter(|p| p.is_involution() && p.is_fixed_point_free()).collect();
    let dims: Vec<usize> = match intersection_dim {
        Some(k) if k <= n => vec![k],
        Some(_) => vec![],
        None => (0..=n).collect(),
    };
    let mut found: BTreeSet<Vec<Perm>> = BTreeSet::new();
    for k in dims {
        for w in Subspace::all_of_dim(n, k) {
            let sigma_w: Vec<Perm> = w.basis().iter().map(|&v| translation_perm(v)).collect();
            let candidates: Vec<&Perm> = involutions
                .iter()
                .copied()
                .filter(|c| !is_translation(c) && sigma_w.iter().all(|s| c.commutes_with(s)))
                .collect();
            let mut start: Vec<Perm> = w.elements().into_iter().map(translation_perm).collect();
            start.sort_unstable();
            let mut level: HashSet<Vec<Perm>> = HashSet::from([start]);
            for _ in k..n {
                level = level
                    .par_iter()
                    .flat_map_iter(|h| candidates.iter().filter_map(move |c| extend_by(h, c)))
                    .collect();
            }
            found.extend(level);
        }
    }
    found.into_iter().map(|e| PermGroup::from_elements(n, e)).collect()
}

/// `N_{Sym(V)}(H)` by scanning all 40320 permutations (`n = 3`).
pub fn brute_normalizer_sym(h: &PermGroup, n: usize) -> Result<PermGroup> {
    if n != 3 {
        return Err(Error::ScaleGuard(format!("Sym(F_2^{n}) scan")));
    }
    check_dim(n, h.dim())?;
    normalizer_in(&PermGroup::symmetric(3)?, h)
}

/// `C_{Sym(V)}(H)` by scanning all 40320 permutations (`n = 3`).
pub fn brute_centralizer_sym(h: &PermGroup, n: usize) -> Result<PermGroup> {
    if n != 3 {
        return Err(Error::ScaleGuard(format!("Sym(F_2^{n}) scan")));
    }
    check_dim(n, h.dim())?;
    centralizer_in(&PermGroup::symmetric(3)?, h)
}

/// Normal subgroups of `AGL(F₂³)` as joins of normal closures of conjugacy
/// classes; the claim is that they are exactly `1`, `T` and `AGL`.
pub fn verify_unique_normal_subgroup_lemma(n: usize) -> Result<VerificationReport> {
    if n != 3 {
        return Err(Error::ScaleGuard(format!("normal subgroup lattice of AGL(F_2^{n})")));
    }
    let agl = agl_group(n)?;
    let elements = agl.elements()?;
    let mut classified: HashSet<Perm> = HashSet::new();
    let mut classes: Vec<Vec<Perm>> = Vec::new();
    for x in elements {
        if classified.contains(x) {
            continue;
        }
        let class: BTreeSet<Perm> = elements.iter().map(|g| x.conj(g)).collect();
        classified.extend(class.iter().cloned());
        classes.push(class.into_iter().collect());
    }
    let mut normals: BTreeSet<Vec<Perm>> = BTreeSet::from([vec![Perm::identity(n)]]);
    for class in &classes {
        normals.insert(generate_closure(n, class, DEFAULT_BUDGET)?.elements()?.to_vec());
    }
    loop {
        let current: Vec<Vec<Perm>> = normals.iter().cloned().collect();
        let mut grew = false;
        for (i, a) in current.iter().enumerate() {
            for b in &current[i + 1..] {
                let gens: Vec<Perm> = a.iter().chain(b).cloned().collect();
                grew |= normals.insert(generate_closure(n, &gens, DEFAULT_BUDGET)?.elements()?.to_vec());
            }
        }
        if !grew {
            break;
        }
    }
    let mut orders: Vec<usize> = normals.iter().map(Vec::len).collect();
    orders.sort_unstable();
    let mut t: Vec<Perm> = BitVector::all(n).map(translation_perm).collect();
    t.sort_unstable();
    let t_is_normal = normals.contains(&t);
    let proper: Vec<&Vec<Perm>> = normals.iter().filter(|g| g.len() > 1 && g.len() < elements.len()).collect();
    let quotient = proper.first().map_or(0, |g| elements.len() / g.len());
    Ok(VerificationReport::new(
        "unique-normal-subgroup-lemma",
        n,
        "normal subgroup orders [1, 8, 1344]; the proper nontrivial one is T; quotient order 168",
        format!(
            "normal subgroup orders {orders:?}; the proper nontrivial one {} T; quotient order {quotient}",
            if t_is_normal && proper.len() == 1 { "is" } else { "is not" }
        ),
    ))
}

/// A uniformly random permutation of `V`.
pub fn random_perm(n: usize, rng: &mut impl Rng) -> Perm {
    let mut images: Vec<u16> = (0..1u16 << n).collect();
    images.shuffle(rng);
    Perm::from_images(images).expect("shuffle of the identity")
}

/// A uniformly random invertible `n × n` matrix (rejection sampling).
pub fn random_invertible(n: usize, rng: &mut impl Rng) -> BitMatrix {
    loop {
        let rows: Vec<BitVector> = (0..n).map(|_| BitVector::from_index(n, rng.gen_range(0..1 << n))).collect();
        let m = BitMatrix::from_rows(&rows).expect("n rows of length n");
        if m.is_invertible() {
            return m;
        }
    }
}

type Check = fn(usize) -> Result<Vec<VerificationReport>>;

/// A registered claim, runnable for `n` in `dims`.
pub struct Theorem {
    pub id: &'static str,
    pub dims: (usize, usize),
    check: Check,
}

pub const THEOREMS: &[Theorem] = &[
    Theorem { id: "second-maximal-count", dims: (3, 5), check: check_second_maximal_count },
    Theorem { id: "second-maximal-oracle", dims: (3, 4), check: check_second_maximal_oracle },
    Theorem { id: "no-maximal-intersection", dims: (3, 4), check: check_no_maximal_intersection },
    Theorem { id: "maximal-build-rejected", dims: (3, 8), check: check_maximal_build_rejected },
    Theorem { id: "second-maximal-affine", dims: (3, 5), check: check_second_maximal_affine },
    Theorem { id: "t-normalizes-second-maximal", dims: (3, 5), check: check_t_normalizes_second_maximal },
    Theorem { id: "unique-normal-tsigma", dims: (3, 4), check: check_unique_normal_tsigma },
    Theorem { id: "normalizer-index-2", dims: (3, 3), check: check_normalizer_index_2 },
    Theorem { id: "outer-normalizer-element", dims: (3, 8), check: check_outer_normalizer_element },
    Theorem { id: "even-normalizer", dims: (4, 8), check: check_even_normalizer },
    Theorem { id: "self-normalizing-sylow", dims: (3, 4), check: check_self_normalizing_sylow },
    Theorem { id: "sylow-count", dims: (3, 4), check: check_sylow_count },
    Theorem { id: "normal-regular-subgroups", dims: (3, 4), check: check_normal_regular_subgroups },
    Theorem { id: "flag-normalized-count", dims: (3, 5), check: check_flag_normalized_count },
    Theorem { id: "s-n-consistency", dims: (3, 5), check: check_s_n_consistency },
    Theorem { id: "agl-transitive", dims: (3, 5), check: check_agl_transitive },
    Theorem { id: "divisibility-criterion", dims: (3, 4), check: check_divisibility_criterion },
    Theorem { id: "centralizer-orders", dims: (3, 4), check: check_centralizer_orders },
    Theorem { id: "centralizer-brute", dims: (3, 3), check: check_centralizer_brute },
    Theorem { id: "maximal-centralizer-affine", dims: (3, 6), check: verify_maximal_centralizer_affine },
    Theorem { id: "coset-involution-lemma", dims: (3, 4), check: check_coset_involution_lemma },
    Theorem { id: "unique-normal-subgroup-lemma", dims: (3, 3), check: check_unique_normal_subgroup_lemma },
    Theorem { id: "normalizer-of-t", dims: (3, 3), check: check_normalizer_of_t },
    Theorem { id: "dixon-conjugator", dims: (3, 8), check: check_dixon_conjugator },
    Theorem { id: "weak-keys-circ-axioms", dims: (3, 5), check: check_weak_keys_circ_axioms },
    Theorem { id: "agl-even", dims: (3, 6), check: check_agl_even },
];

pub fn theorem_ids() -> Vec<&'static str> {
    THEOREMS.iter().map(|t| t.id).collect()
}

fn run(theorem: &Theorem, n: usize) -> Vec<VerificationReport> {
    let start = Instant::now();
    let mut reports = match (theorem.check)(n) {
        Ok(r) => r,
        Err(e) => vec![VerificationReport::new(theorem.id, n, "completes", format!("error: {e}"))],
    };
    let ms = start.elapsed().as_millis() as u64;
    for r in &mut reports {
        r.runtime_ms = Some(ms);
    }
    reports
}

/// Runs one registered claim. Failures inside the check become failed reports;
/// an unknown id or an unsupported `n` is an error.
pub fn verify(theorem_id: &str, n: usize) -> Result<Vec<VerificationReport>> {
    let theorem =
        THEOREMS.iter().find(|t| t.id == theorem_id).ok_or_else(|| Error::UnknownTheorem(theorem_id.to_owned()))?;
    let (lo, hi) = theorem.dims;
    if !(lo..=hi).contains(&n) {
        return Err(Error::ScaleGuard(format!("{theorem_id} runs for n in {lo}..={hi}")));
    }
    Ok(run(theorem, n))
}

/// Every registered claim that supports `n`, in registry order.
pub fn verify_all(n: usize) -> Vec<VerificationReport> {
    THEOREMS.iter().filter(|t| (t.dims.0..=t.dims.1).contains(&n)).flat_map(|t| run(t, n)).collect()
}

fn one(id: &str, n: usize, claim: impl Display, observed: impl Display) -> Result<Vec<VerificationReport>> {
    Ok(vec![VerificationReport::new(id, n, claim.to_string(), observed.to_string())])
}

fn element_set(groups: &[RegularGroup]) -> BTreeSet<Vec<Perm>> {
    groups.iter().map(RegularGroup::sorted_elements).collect()
}

fn sylow_group(s: &SylowAGL) -> Result<PermGroup> {
    generate_closure(s.dim(), &s.generators(), DEFAULT_BUDGET)
}

fn check_second_maximal_count(n: usize) -> Result<Vec<VerificationReport>> {
    let groups = enumerate_second_maximal(n)?;
    one("second-maximal-count", n, format!("{} groups", count_t_n(n)), format!("{} groups", groups.len()))
}

fn check_second_maximal_oracle(n: usize) -> Result<Vec<VerificationReport>> {
    let structural = element_set(&enumerate_second_maximal(n)?);
    let oracle: BTreeSet<Vec<Perm>> = brute_enumerate_regular_ea(&agl_group(n)?, Some(n - 2))?
        .iter()
        .map(|g| g.elements().map(<[Perm]>::to_vec))
        .collect::<Result<_>>()?;
    let claim = format!("oracle and construction agree on {} groups", count_t_n(n));
    let observed = if oracle == structural {
        format!("oracle and construction agree on {} groups", oracle.len())
    } else {
        format!("oracle found {} groups, construction {}, sets differ", oracle.len(), structural.len())
    };
    one("second-maximal-oracle", n, claim, observed)
}

fn check_no_maximal_intersection(n: usize) -> Result<Vec<VerificationReport>> {
    let (ambient, name) = if n == 3 { (PermGroup::symmetric(3)?, "Sym(V)") } else { (agl_group(n)?, "AGL(V)") };
    let found = brute_enumerate_regular_ea(&ambient, Some(n - 1))?;
    one(
        "no-maximal-intersection",
        n,
        format!("0 groups in {name} meet T in dimension {}", n - 1),
        format!("{} groups in {name} meet T in dimension {}", found.len(), n - 1),
    )
}

fn check_maximal_build_rejected(n: usize) -> Result<Vec<VerificationReport>> {
    let observed = match enumerate_flag_normalized(n, n - 1) {
        Err(Error::MaximalIntersection(_)) => "rejected".to_owned(),
        Err(e) => format!("error: {e}"),
        Ok(groups) => format!("accepted with {} groups", groups.len()),
    };
    one("maximal-build-rejected", n, "rejected", observed)
}

fn check_second_maximal_affine(n: usize) -> Result<Vec<VerificationReport>> {
    let groups = enumerate_second_maximal(n)?;
    let total = groups.len() << n;
    let affine: usize =
        groups.par_iter().map(|g| g.elements().iter().filter(|p| Affinity::from_perm(p).is_some()).count()).sum();
    one(
        "second-maximal-affine",
        n,
        format!("{total}/{total} elements affine"),
        format!("{affine}/{total} elements affine"),
    )
}

fn check_t_normalizes_second_maximal(n: usize) -> Result<Vec<VerificationReport>> {
    let groups = enumerate_second_maximal(n)?;
    let t = translation_group(n)?.generators();
    let ok = groups.iter().filter(|g| t.iter().all(|s| g.is_normalized_by(s))).count();
    let c = groups.len();
    one("t-normalizes-second-maximal", n, format!("{c}/{c} groups normalized by T"), format!("{ok}/{c} groups normalized by T"))
}

fn check_unique_normal_tsigma(n: usize) -> Result<Vec<VerificationReport>> {
    let groups = enumerate_second_maximal(n)?;
    let sylows = all_sylows(n)?;
    let ok = sylows
        .par_iter()
        .map(|s| {
            let normal: Vec<&RegularGroup> = groups.iter().filter(|g| s.has_normal_subgroup(g)).collect();
            Ok(normal.len() == 1 && *normal[0] == t_sigma(s)?)
        })
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .filter(|&b| b)
        .count();
    let c = sylows.len();
    one(
        "unique-normal-tsigma",
        n,
        format!("{c}/{c} Sylow subgroups have exactly one normal second-maximal group, equal to T_Σ"),
        format!("{ok}/{c} Sylow subgroups have exactly one normal second-maximal group, equal to T_Σ"),
    )
}

fn check_normalizer_index_2(n: usize) -> Result<Vec<VerificationReport>> {
    let s = canonical_sylow(n)?;
    let h = sylow_group(&s)?;
    let normalizer = brute_normalizer_sym(&h, n)?;
    let g = outer_normalizer_element(&s)?;
    let inside = if normalizer.contains(&g)? { "inside" } else { "outside" };
    one(
        "normalizer-index-2",
        n,
        format!("|N(Σ)| = {}, |Σ| = {}, outer element inside", 2 * h.order()?, h.order()?),
        format!("|N(Σ)| = {}, |Σ| = {}, outer element {inside}", normalizer.order()?, h.order()?),
    )
}

fn check_outer_normalizer_element(n: usize) -> Result<Vec<VerificationReport>> {
    let sylows = if n <= 4 { all_sylows(n)? } else { vec![canonical_sylow(n)?] };
    let t = translation_group(n)?;
    let ok = sylows
        .par_iter()
        .map(|s| {
            let Ok(g) = outer_normalizer_element(s) else { return Ok(false) };
            let ts = t_sigma(s)?;
            Ok(t.conjugate(&g)? == ts
                && ts.conjugate(&g)? == t
                && s.contains(&(&g * &g))
                && s.is_normalized_by(&g)
                && Affinity::from_perm(&g).is_none())
        })
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .filter(|&b| b)
        .count();
    let c = sylows.len();
    let what = "swaps T and T_Σ, squares into Σ, normalizes Σ, not affine";
    one("outer-normalizer-element", n, format!("{c}/{c} flags: {what}"), format!("{ok}/{c} flags: {what}"))
}

/// `N_{Sym(V)}(Σ) = ⟨Σ, g⟩` with `Σ` even, so the normalizer is even iff `g` is.
/// At `n = 3` the element `g` is a single transposition and the claim fails;
/// the check is registered from `n = 4`.
fn check_even_normalizer(n: usize) -> Result<Vec<VerificationReport>> {
    let sylows = if n <= 4 { all_sylows(n)? } else { vec![canonical_sylow(n)?] };
    let even = sylows
        .par_iter()
        .map(|s| Ok(outer_normalizer_element(s)?.is_even()))
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .filter(|&b| b)
        .count();
    let c = sylows.len();
    one(
        "even-normalizer",
        n,
        format!("{c}/{c} flags: N(Σ) = ⟨Σ, g⟩ with g even"),
        format!("{even}/{c} flags: N(Σ) = ⟨Σ, g⟩ with g even"),
    )
}

fn check_self_normalizing_sylow(n: usize) -> Result<Vec<VerificationReport>> {
    let h = sylow_group(&canonical_sylow(n)?)?;
    let normalizer = normalizer_in(&agl_group(n)?, &h)?;
    let same = if normalizer == h { "equals" } else { "differs from" };
    one(
        "self-normalizing-sylow",
        n,
        format!("|N_AGL(Σ)| = {}, equals Σ", h.order()?),
        format!("|N_AGL(Σ)| = {}, {same} Σ", normalizer.order()?),
    )
}

fn check_sylow_count(n: usize) -> Result<Vec<VerificationReport>> {
    let sets: HashSet<Vec<Perm>> =
        all_sylows(n)?.par_iter().map(SylowAGL::elements).collect::<Result<Vec<_>>>()?.into_iter().collect();
    one(
        "sylow-count",
        n,
        format!("{} distinct Sylow subgroups", count_sylows(n)),
        format!("{} distinct Sylow subgroups", sets.len()),
    )
}

fn check_normal_regular_subgroups(n: usize) -> Result<Vec<VerificationReport>> {
    let s = canonical_sylow(n)?;
    let found = normal_regular_subgroups(&s)?;
    let expected = vec![translation_group(n)?, t_sigma(&s)?];
    let observed = if found == expected { "{T, T_Σ}".to_owned() } else { format!("{} other groups", found.len()) };
    one("normal-regular-subgroups", n, "{T, T_Σ}", observed)
}

fn check_flag_normalized_count(n: usize) -> Result<Vec<VerificationReport>> {
    let t = translation_group(n)?;
    let flag = Flag::canonical(n);
    let mut reports = Vec::new();
    for d in (1..=n).filter(|&d| d != n - 1) {
        let groups = enumerate_flag_normalized(n, d)?;
        let v_d = flag.member(d);
        let good = groups
            .iter()
            .filter(|g| {
                t.generators().iter().all(|s| g.is_normalized_by(s))
                    && v_d.is_subspace_of(g.intersection_with_t())
                    && crate::perm::is_regular_elementary_abelian(&g.to_perm_group()).unwrap_or(false)
            })
            .count();
        let what = "regular elementary abelian, normalized by T, containing σ_V_d";
        reports.push(VerificationReport::new(
            "flag-normalized-count",
            n,
            format!("d={d}: {} groups, all {what}", count_flag_normalized(n, d)),
            if good == groups.len() {
                format!("d={d}: {} groups, all {what}", groups.len())
            } else {
                format!("d={d}: {} groups, {good} {what}", groups.len())
            },
        ));
    }
    Ok(reports)
}

fn check_s_n_consistency(n: usize) -> Result<Vec<VerificationReport>> {
    let s_n = count_s_n(n);
    let product = &s_n * count_t_n(n);
    let params = tb_parameters(n);
    let samples = [BitVector::unit(n, n), *params.last().expect("n ≥ 3")];
    let mut counts = Vec::new();
    for b in samples {
        counts.push(sylows_with_normal(&build_tb(n, b)?)?.len());
    }
    one(
        "s-n-consistency",
        n,
        format!("s_n = {s_n}; s_n·t_n = {}; Sylows with T_b normal: [{s_n}, {s_n}]", count_sylows(n)),
        format!("s_n = {s_n}; s_n·t_n = {product}; Sylows with T_b normal: [{}, {}]", counts[0], counts[1]),
    )
}

fn check_agl_transitive(n: usize) -> Result<Vec<VerificationReport>> {
    let orbit = element_set(&agl_orbit(&build_tb(n, BitVector::unit(n, n))?)?);
    let all = element_set(&enumerate_second_maximal(n)?);
    let observed = if orbit == all {
        format!("orbit of T_e_n is all {} second-maximal groups", all.len())
    } else {
        format!("orbit of size {} differs from the {} second-maximal groups", orbit.len(), all.len())
    };
    one("agl-transitive", n, format!("orbit of T_e_n is all {} second-maximal groups", count_t_n(n)), observed)
}

/// Samples `g ∉ AGL(V)` with `T^g` regular elementary abelian and compares
/// `|T ∩ T^g| = 2^{n−2}` with `AGL(V) ∩ AGL(V)^g` containing a Sylow 2-subgroup.
fn check_divisibility_criterion(n: usize) -> Result<Vec<VerificationReport>> {
    let t = translation_group(n)?;
    let id = BitMatrix::identity(n);
    let mut conjugators = Vec::new();
    if n == 3 {
        for g in brute_enumerate_regular_ea(&PermGroup::symmetric(3)?, None)? {
            let g = RegularGroup::from_elements(n, g.elements()?.to_vec())?;
            conjugators.push(dixon_conjugator(&t, &g, &id)?);
        }
    } else {
        for g in enumerate_second_maximal(n)?.iter().chain(&enumerate_flag_normalized(n, 1)?) {
            conjugators.push(dixon_conjugator(&t, g, &id)?);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        conjugators.extend((0..40).map(|_| random_perm(n, &mut rng)));
    }
    conjugators.retain(|g| Affinity::from_perm(g).is_none());
    let outcomes = conjugators
        .par_iter()
        .map(|g| {
            let lhs = t.conjugate(g)?.intersection_with_t().dim() == n - 2;
            Ok((lhs, lhs == agl_intersection_has_full_sylow(g)?))
        })
        .collect::<Result<Vec<(bool, bool)>>>()?;
    let total = outcomes.len();
    let positive = outcomes.iter().filter(|o| o.0).count();
    let agree = outcomes.iter().filter(|o| o.1).count();
    one(
        "divisibility-criterion",
        n,
        format!("{total}/{total} samples agree ({positive} second-maximal)"),
        format!("{agree}/{total} samples agree ({positive} second-maximal)"),
    )
}

fn check_centralizer_orders(n: usize) -> Result<Vec<VerificationReport>> {
    let mut reports = Vec::new();
    for k in (0..=n).rev() {
        let m = n - k;
        let predicted = centralizer_order(n, m);
        if predicted > BigUint::from(DEFAULT_BUDGET) {
            continue;
        }
        let subspaces = Subspace::all_of_dim(n, k);
        let orders: BTreeSet<usize> = subspaces
            .iter()
            .map(|w| centralizer_group(w, n, DEFAULT_BUDGET)?.order())
            .collect::<Result<_>>()?;
        let c = subspaces.len();
        reports.push(VerificationReport::new(
            "centralizer-orders",
            n,
            format!("m={m}: order {predicted} for all {c} subspaces"),
            match orders.iter().collect::<Vec<_>>()[..] {
                [o] => format!("m={m}: order {o} for all {c} subspaces"),
                _ => format!("m={m}: orders {orders:?}"),
            },
        ));
    }
    Ok(reports)
}

fn check_centralizer_brute(n: usize) -> Result<Vec<VerificationReport>> {
    let sym = PermGroup::symmetric(n)?;
    let mut total = 0;
    let mut equal = 0;
    for k in 0..=n {
        for w in Subspace::all_of_dim(n, k) {
            let gens: Vec<Perm> = w.basis().iter().map(|&v| translation_perm(v)).collect();
            let m = PermGroup::from_generators(n, gens)?;
            let brute = centralizer_in(&sym, &m)?;
            total += 1;
            equal += usize::from(brute == centralizer_group(&w, n, DEFAULT_BUDGET)?);
        }
    }
    let what = "brute-force centralizer equals the wreath product";
    one("centralizer-brute", n, format!("{total}/{total} subspaces: {what}"), format!("{equal}/{total} subspaces: {what}"))
}

fn check_coset_involution_lemma(n: usize) -> Result<Vec<VerificationReport>> {
    // n = 3 covers every coset pattern; larger n the coset-swapping case.
    let condition = if n == 3 { CosetCondition::Any } else { CosetCondition::FixesNone };
    let subspaces = Subspace::all_of_dim(n, n - 2);
    let mut total = 0;
    let mut affine = 0;
    for w in &subspaces {
        let found = enumerate_fpf_involutions_centralizing(w, n, condition)?;
        total += found.len();
        affine += found.iter().filter(|p| Affinity::from_perm(p).is_some()).count();
    }
    let c = subspaces.len();
    one(
        "coset-involution-lemma",
        n,
        format!("{total}/{total} involutions affine over {c} subspaces"),
        format!("{affine}/{total} involutions affine over {c} subspaces"),
    )
}

fn check_unique_normal_subgroup_lemma(n: usize) -> Result<Vec<VerificationReport>> {
    Ok(vec![verify_unique_normal_subgroup_lemma(n)?])
}

fn check_normalizer_of_t(n: usize) -> Result<Vec<VerificationReport>> {
    let gens: Vec<Perm> = (1..=n).map(|i| translation_perm(BitVector::unit(n, i))).collect();
    let t = generate_closure(n, &gens, DEFAULT_BUDGET)?;
    let normalizer = brute_normalizer_sym(&t, n)?;
    let agl = agl_group(n)?;
    let same = if normalizer == agl { "equals" } else { "differs from" };
    one(
        "normalizer-of-t",
        n,
        format!("|N(T)| = {}, equals AGL(V)", agl.order()?),
        format!("|N(T)| = {}, {same} AGL(V)", normalizer.order()?),
    )
}

/// Random `H = T^a`, `K = T^b` and `ζ`; half the triples take `H = T`.
fn check_dixon_conjugator(n: usize) -> Result<Vec<VerificationReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ n as u64);
    let t = translation_group(n)?;
    let trials = 20;
    let mut ok = 0;
    for i in 0..trials {
        let h = if i % 2 == 0 { t.clone() } else { t.conjugate(&random_perm(n, &mut rng))? };
        let k = t.conjugate(&random_perm(n, &mut rng))?;
        let zeta = random_invertible(n, &mut rng);
        let g = dixon_conjugator(&h, &k, &zeta)?;
        let origin = g.inverse().image(BitVector::zero(n));
        let labels_match = BitVector::all(n).all(|v| h.tau(v).conj(&g) == *k.tau(g.image(h.tau(v).image(origin))));
        ok += usize::from(h.conjugate(&g)? == k && labels_match);
    }
    one(
        "dixon-conjugator",
        n,
        format!("{trials}/{trials} triples: H^g = K and each τ_v^g has the predicted label"),
        format!("{ok}/{trials} triples: H^g = K and each τ_v^g has the predicted label"),
    )
}

fn circ_axioms_exhaustive(g: &RegularGroup) -> bool {
    let n = g.dim();
    let op = g.circ_op();
    let z = BitVector::zero(n);
    BitVector::all(n).all(|u| {
        op.eval(z, u) == u
            && op.eval(u, u) == z
            && BitVector::all(n).all(|v| {
                op.eval(u, v) == op.eval(v, u)
                    && (n > 4 || BitVector::all(n).all(|w| op.eval(op.eval(u, v), w) == op.eval(u, op.eval(v, w))))
            })
    })
}

fn check_weak_keys_circ_axioms(n: usize) -> Result<Vec<VerificationReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xc1c ^ n as u64);
    let t = translation_group(n)?;
    let mut groups = enumerate_second_maximal(n)?;
    for _ in 0..5 {
        groups.push(t.conjugate(&random_perm(n, &mut rng))?);
    }
    let c = groups.len();
    let weak_ok = groups.par_iter().filter(|g| weak_keys(g).subspace == *g.intersection_with_t()).count();
    let axioms_ok = groups.par_iter().filter(|g| circ_axioms_exhaustive(g)).count();
    let mut reports = vec![
        VerificationReport::new(
            "weak-keys-circ-axioms",
            n,
            format!("{c}/{c} groups: weak keys equal the intersection with T"),
            format!("{weak_ok}/{c} groups: weak keys equal the intersection with T"),
        ),
        VerificationReport::new(
            "weak-keys-circ-axioms",
            n,
            format!("{c}/{c} groups: ∘ is an elementary abelian group law"),
            format!("{axioms_ok}/{c} groups: ∘ is an elementary abelian group law"),
        ),
    ];
    if n > 4 {
        let samples = 100_000;
        let assoc = (0..samples)
            .filter(|_| {
                let g = &groups[rng.gen_range(0..c)];
                let [u, v, w] = [0; 3].map(|_| BitVector::from_index(n, rng.gen_range(0..1 << n)));
                g.circ_unchecked(g.circ_unchecked(u, v), w) == g.circ_unchecked(u, g.circ_unchecked(v, w))
            })
            .count();
        reports.push(VerificationReport::new(
            "weak-keys-circ-axioms",
            n,
            format!("{samples}/{samples} sampled triples associative"),
            format!("{assoc}/{samples} sampled triples associative"),
        ));
    }
    Ok(reports)
}

fn check_agl_even(n: usize) -> Result<Vec<VerificationReport>> {
    check_group_dim(n)?;
    let gens = agl_generators(n);
    let c = gens.len();
    let even = gens.iter().filter(|p| p.is_even()).count();
    let mut reports =
        vec![VerificationReport::new("agl-even", n, format!("{c}/{c} generators even"), format!("{even}/{c} generators even"))];
    if n <= 4 {
        let sylows = all_sylows(n)?;
        let odd = sylows
            .par_iter()
            .map(|s| Ok(s.elements()?.iter().filter(|p| !p.is_even()).count()))
            .collect::<Result<Vec<usize>>>()?
            .into_iter()
            .sum::<usize>();
        reports.push(VerificationReport::new(
            "agl-even",
            n,
            format!("0 odd elements across {} Sylow subgroups", sylows.len()),
            format!("{odd} odd elements across {} Sylow subgroups", sylows.len()),
        ));
    }
    Ok(reports)
}
