//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; exits nonzero if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use regulab::centralizer::{centralizer_group, centralizer_order, verify_maximal_centralizer_affine};
use regulab::oracle::{
    agl_group, brute_centralizer_sym, brute_enumerate_regular_ea, brute_normalizer_sym,
    enumerate_fpf_involutions_centralizing, random_invertible, random_perm, CosetCondition,
};
use regulab::perm::{generate_closure, is_regular_elementary_abelian, normalizer_in, DEFAULT_BUDGET};
use regulab::regular::{
    build_tb, count_t_n, dixon_conjugator, enumerate_second_maximal, tb_parameters, translation_group, weak_keys,
};
use regulab::sylow::{
    all_sylows, canonical_sylow, count_s_n, count_sylows, enumerate_flag_normalized, normal_regular_subgroups,
    outer_normalizer_element, sylows_with_normal, t_sigma, agl_generators, agl_order,
};
use regulab::{Affinity, BitVector, Error, Flag, Perm, PermGroup, RegularGroup, Subspace};

type Outcome = Result<String, String>;

// Wall-clock limits per criterion.
const LIMIT_SECOND_MAXIMAL_N4: Duration = Duration::from_secs(10);
const LIMIT_SECOND_MAXIMAL_N5: Duration = Duration::from_secs(300);
const LIMIT_NO_MAXIMAL: Duration = Duration::from_secs(30);
const LIMIT_UNIQUE_NORMAL_N4: Duration = Duration::from_secs(120);
const LIMIT_COSET_LEMMA: Duration = Duration::from_secs(60);

// Sampling sizes.
const DIXON_TRIPLES: usize = 100;
const ASSOCIATIVITY_SAMPLES_N5: usize = 100_000;
const SEED: u64 = 0x7265_6775;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(label: &str, start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("{label} took {took:.1?}, limit {limit:?}"))
}

fn err(e: Error) -> String {
    e.to_string()
}

fn element_set(groups: &[RegularGroup]) -> BTreeSet<Vec<Perm>> {
    groups.iter().map(RegularGroup::sorted_elements).collect()
}

fn perm_group_set(groups: &[PermGroup]) -> BTreeSet<Vec<Perm>> {
    groups.iter().map(|g| g.elements().expect("enumerated").to_vec()).collect()
}

fn sylow_perm_group(n: usize) -> PermGroup {
    let s = canonical_sylow(n).unwrap();
    generate_closure(n, &s.generators(), DEFAULT_BUDGET).unwrap()
}

fn c1_second_maximal_counts() -> Outcome {
    let mut sizes = Vec::new();
    for (n, expected) in [(3, 7usize), (4, 105), (5, 1085)] {
        let start = Instant::now();
        let groups = enumerate_second_maximal(n).map_err(err)?;
        match n {
            4 => within("n=4 enumeration", start, LIMIT_SECOND_MAXIMAL_N4)?,
            5 => within("n=5 enumeration", start, LIMIT_SECOND_MAXIMAL_N5)?,
            _ => {}
        }
        ensure(groups.len() == expected, || format!("n={n}: {} groups, expected {expected}", groups.len()))?;
        ensure(count_t_n(n) == BigUint::from(expected), || format!("n={n}: formula gives {}", count_t_n(n)))?;
        ensure(element_set(&groups).len() == expected, || format!("n={n}: duplicate groups"))?;
        if n <= 4 {
            let oracle = brute_enumerate_regular_ea(&agl_group(n).map_err(err)?, Some(n - 2)).map_err(err)?;
            ensure(perm_group_set(&oracle) == element_set(&groups), || {
                format!("n={n}: oracle found {} groups, sets differ", oracle.len())
            })?;
        }
        sizes.push(groups.len());
    }
    Ok(format!("t_n = {sizes:?}; oracle sets equal at n=3,4"))
}

fn c2_no_maximal_intersection() -> Outcome {
    let start = Instant::now();
    let sym = PermGroup::symmetric(3).map_err(err)?;
    let all = brute_enumerate_regular_ea(&sym, None).map_err(err)?;
    let maximal = all
        .iter()
        .filter(|g| {
            let t = RegularGroup::from_elements(3, g.elements().unwrap().to_vec()).unwrap();
            t.intersection_with_t().dim() == 2
        })
        .count();
    ensure(maximal == 0, || format!("{maximal} groups meet T in dimension 2"))?;
    let filtered = brute_enumerate_regular_ea(&sym, Some(2)).map_err(err)?;
    ensure(filtered.is_empty(), || format!("filtered scan found {}", filtered.len()))?;
    within("Sym(8) scan", start, LIMIT_NO_MAXIMAL)?;
    for n in 3..=8 {
        let r = enumerate_flag_normalized(n, n - 1);
        ensure(matches!(r, Err(Error::MaximalIntersection(_))), || format!("n={n}: dim W = n-1 not rejected"))?;
    }
    Ok(format!("0 of {} regular EA subgroups of Sym(8) meet T in dim 2; dim W = n-1 rejected for n=3..8", all.len()))
}

fn c3_second_maximal_affine() -> Outcome {
    let mut checked = 0;
    for n in 3..=5 {
        for g in enumerate_second_maximal(n).map_err(err)? {
            for p in g.elements() {
                ensure(Affinity::from_perm(p).is_some(), || format!("n={n}: non-affine element {p}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} elements at n=3,4,5 all affine"))
}

fn c4_unique_normal_tsigma() -> Outcome {
    let mut counts = Vec::new();
    for n in 3..=4 {
        let start = Instant::now();
        let groups = enumerate_second_maximal(n).map_err(err)?;
        let sylows = all_sylows(n).map_err(err)?;
        for s in &sylows {
            let normal: Vec<&RegularGroup> = groups.iter().filter(|g| s.has_normal_subgroup(g)).collect();
            ensure(normal.len() == 1, || format!("n={n} flag {}: {} normal groups", s.flag(), normal.len()))?;
            ensure(*normal[0] == t_sigma(s).map_err(err)?, || format!("n={n} flag {}: not T_Σ", s.flag()))?;
        }
        if n == 4 {
            within("n=4 scan", start, LIMIT_UNIQUE_NORMAL_N4)?;
        }
        counts.push(sylows.len());
    }
    Ok(format!("Sylows checked {counts:?}: each has exactly one normal second-maximal group, T_Σ"))
}

fn c5_normalizer_index_2() -> Outcome {
    let h = sylow_perm_group(3);
    let normalizer = brute_normalizer_sym(&h, 3).map_err(err)?;
    let order = normalizer.order().map_err(err)?;
    ensure(order == 128 && h.order().map_err(err)? == 64, || format!("|N(Σ)| = {order}"))?;
    let s = canonical_sylow(3).map_err(err)?;
    let g = outer_normalizer_element(&s).map_err(err)?;
    let t = translation_group(3).map_err(err)?;
    let ts = t_sigma(&s).map_err(err)?;
    ensure(t.conjugate(&g).map_err(err)? == ts && ts.conjugate(&g).map_err(err)? == t, || "g does not swap T, T_Σ".into())?;
    ensure(h.contains(&(&g * &g)).map_err(err)?, || "g² ∉ Σ".into())?;
    ensure(Affinity::from_perm(&g).is_none(), || "g is affine".into())?;
    ensure(normalizer.contains(&g).map_err(err)?, || "g ∉ N(Σ)".into())?;
    Ok(format!("|N_Sym(Σ)| = {order} = 2·64; g = {g} swaps T and T_Σ, g² ∈ Σ, g not affine"))
}

fn c6_self_normalizing() -> Outcome {
    let h = sylow_perm_group(3);
    let n_agl = normalizer_in(&agl_group(3).map_err(err)?, &h).map_err(err)?;
    ensure(n_agl == h, || format!("|N_AGL(Σ)| = {:?}", n_agl.order()))?;
    let mut counts = Vec::new();
    for (n, expected) in [(3, 21u32), (4, 315)] {
        let distinct: BTreeSet<Vec<Perm>> =
            all_sylows(n).map_err(err)?.iter().map(|s| s.elements().unwrap()).collect();
        ensure(distinct.len() as u32 == expected && count_sylows(n) == expected.into(), || {
            format!("n={n}: {} distinct Sylows, formula {}", distinct.len(), count_sylows(n))
        })?;
        counts.push(distinct.len());
    }
    Ok(format!("N_AGL(Σ) = Σ (order 64); distinct Sylows from flags {counts:?}"))
}

fn c7_centralizers() -> Outcome {
    let mut orders = BTreeSet::new();
    for k in 0..=3 {
        for w in Subspace::all_of_dim(3, k) {
            let generated = centralizer_group(&w, 3, DEFAULT_BUDGET).map_err(err)?;
            let order = generated.order().map_err(err)?;
            ensure(BigUint::from(order) == centralizer_order(3, 3 - k), || format!("W=[{w}]: order {order}"))?;
            let gens: Vec<Perm> = w.basis().iter().map(|&v| Affinity::translation(v).to_perm()).collect();
            let m = PermGroup::from_generators(3, gens).map_err(err)?;
            let brute = brute_centralizer_sym(&m, 3).map_err(err)?;
            ensure(brute == generated, || format!("W=[{w}]: brute-force centralizer differs"))?;
            orders.insert((3 - k, order));
        }
    }
    for n in 3..=4 {
        let reports = verify_maximal_centralizer_affine(n).map_err(err)?;
        ensure(reports.iter().all(|r| r.passed()), || format!("n={n}: maximal centralizer not affine"))?;
        ensure(reports.iter().all(|r| r.observed.contains(&format!("order {}", 1u32 << (2 * n - 1)))), || {
            format!("n={n}: maximal centralizer order")
        })?;
    }
    Ok(format!("n=3 (m, order) {orders:?} equal brute force in Sym(8); maximal M affine, orders 32, 128"))
}

fn c8_flag_normalized() -> Outcome {
    let mut counts = Vec::new();
    for (n, d, expected) in [(3, 1, 2usize), (4, 2, 4), (4, 1, 8)] {
        let groups = enumerate_flag_normalized(n, d).map_err(err)?;
        ensure(groups.len() == expected, || format!("n={n} d={d}: {} groups", groups.len()))?;
        let t = translation_group(n).map_err(err)?;
        let v_d = Flag::canonical(n).member(d).clone();
        for g in &groups {
            ensure(is_regular_elementary_abelian(&g.to_perm_group()).map_err(err)?, || "not regular EA".into())?;
            ensure(t.generators().iter().all(|s| g.is_normalized_by(s)), || "not normalized by T".into())?;
            ensure(v_d.is_subspace_of(g.intersection_with_t()), || "σ_V_d missing".into())?;
        }
        counts.push(groups.len());
    }
    for n in 3..=4 {
        let s = canonical_sylow(n).map_err(err)?;
        let normal = normal_regular_subgroups(&s).map_err(err)?;
        let expected = vec![translation_group(n).map_err(err)?, t_sigma(&s).map_err(err)?];
        ensure(normal == expected, || format!("n={n}: {} normal regular subgroups", normal.len()))?;
    }
    Ok(format!("counts {counts:?}; normal in Σ: exactly {{T, T_Σ}} at n=3,4"))
}

fn c9_s_n() -> Outcome {
    let values: Vec<BigUint> = (3..=5).map(count_s_n).collect();
    ensure(values == [3u32, 3, 9].map(BigUint::from), || format!("s_n = {values:?}"))?;
    for n in 3..=5 {
        ensure(count_s_n(n) * count_t_n(n) == count_sylows(n), || format!("n={n}: s_n·t_n ≠ Sylow count"))?;
    }
    let mut per_group = Vec::new();
    for n in 3..=4 {
        let mut groups = enumerate_second_maximal(n).map_err(err)?;
        for b in tb_parameters(n) {
            groups.push(build_tb(n, b).map_err(err)?);
        }
        for g in &groups {
            let k = sylows_with_normal(g).map_err(err)?.len();
            ensure(BigUint::from(k) == count_s_n(n), || format!("n={n} W=[{}]: {k} Sylows", g.intersection_with_t()))?;
        }
        per_group.push(groups.len());
    }
    Ok(format!("s_n = [3, 3, 9]; s_n·t_n = [21, 315, 9765]; direct count matches for {per_group:?} groups at n=3,4"))
}

fn c10_dixon() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for i in 0..DIXON_TRIPLES {
        let n = 3 + i % 3;
        let t = translation_group(n).map_err(err)?;
        let h = if i % 2 == 0 { t.clone() } else { t.conjugate(&random_perm(n, &mut rng)).map_err(err)? };
        let k = t.conjugate(&random_perm(n, &mut rng)).map_err(err)?;
        let zeta = random_invertible(n, &mut rng);
        let g = dixon_conjugator(&h, &k, &zeta).map_err(err)?;
        ensure(h.conjugate(&g).map_err(err)?.sorted_elements() == k.sorted_elements(), || {
            format!("triple {i}: H^g ≠ K")
        })?;
        let origin = g.inverse().image(BitVector::zero(n));
        for v in BitVector::all(n) {
            // For H = T this is (σ_v)^g = τ_{(0g⁻¹ + v)g}.
            let h_v = h.tau(v);
            let lhs = h_v.conjugate(&g).map_err(err)?;
            let rhs = k.tau(g.image(h_v.image(origin)));
            ensure(lhs == *rhs, || format!("triple {i}: label identity fails at v = {v}"))?;
            if i % 2 == 0 {
                ensure(*h_v == Affinity::translation(v).to_perm() && rhs == k.tau(g.image(origin + v)), || {
                    format!("triple {i}: σ form fails at v = {v}")
                })?;
            }
        }
    }
    Ok(format!("{DIXON_TRIPLES} seeded triples at n=3..5: H^g = K and the label identity hold for all v"))
}

fn circ_is_elementary_abelian(g: &RegularGroup) -> bool {
    let n = g.dim();
    let z = BitVector::zero(n);
    let op = g.circ_op();
    BitVector::all(n).all(|u| {
        op.eval(z, u) == u
            && op.eval(u, u) == z
            && BitVector::all(n).all(|v| {
                op.eval(u, v) == op.eval(v, u)
                    && BitVector::all(n).all(|w| op.eval(op.eval(u, v), w) == op.eval(u, op.eval(v, w)))
            })
    })
}

fn c11_weak_keys_and_axioms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 11);
    let mut checked = 0;
    for n in 3..=5 {
        let t = translation_group(n).map_err(err)?;
        let mut groups = enumerate_second_maximal(n).map_err(err)?;
        for d in (1..=n).filter(|&d| d != n - 1) {
            groups.extend(enumerate_flag_normalized(n, d).map_err(err)?);
        }
        for _ in 0..10 {
            groups.push(t.conjugate(&random_perm(n, &mut rng)).map_err(err)?);
        }
        for g in &groups {
            ensure(weak_keys(g).subspace == *g.intersection_with_t(), || format!("n={n}: weak keys ≠ W"))?;
            if n <= 4 {
                ensure(circ_is_elementary_abelian(g), || format!("n={n}: ∘ axioms fail"))?;
            }
        }
        if n == 5 {
            for _ in 0..ASSOCIATIVITY_SAMPLES_N5 {
                let g = &groups[rng.gen_range(0..groups.len())];
                let [u, v, w] = [0; 3].map(|_| BitVector::from_index(n, rng.gen_range(0..1 << n)));
                let op = g.circ_op();
                ensure(op.eval(op.eval(u, v), w) == op.eval(u, op.eval(v, w)), || "sampled triple fails".into())?;
            }
        }
        checked += groups.len();
    }
    Ok(format!(
        "weak keys = W for {checked} groups; ∘ exhaustive at n ≤ 4, {ASSOCIATIVITY_SAMPLES_N5} sampled triples at n=5"
    ))
}

fn c12_parity() -> Outcome {
    let mut counts = Vec::new();
    for n in 3..=6 {
        let gens = agl_generators(n);
        for p in &gens {
            ensure(p.is_even(), || format!("n={n}: odd generator {p}"))?;
        }
        let order = generate_closure(n, &gens, DEFAULT_BUDGET).ok().and_then(|g| g.order().ok());
        if let Some(order) = order {
            ensure(BigUint::from(order) == agl_order(n), || format!("n={n}: generators give order {order}"))?;
        }
        counts.push(gens.len());
    }
    Ok(format!("AGL generating sets (translations and all transvections) even for n = 3..6, sizes {counts:?}"))
}

fn c13_coset_lemma() -> Outcome {
    let start = Instant::now();
    let mut total = 0;
    for w in Subspace::all_of_dim(3, 1) {
        let found = enumerate_fpf_involutions_centralizing(&w, 3, CosetCondition::Any).map_err(err)?;
        for p in &found {
            ensure(Affinity::from_perm(p).is_some(), || format!("W=[{w}]: {p} not affine"))?;
        }
        total += found.len();
    }
    within("involution scan", start, LIMIT_COSET_LEMMA)?;
    Ok(format!("{total} fixed-point-free involutions centralizing σ_W (dim W = 1, 7 choices), all affine"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("second-maximal counts", c1_second_maximal_counts),
        ("no maximal intersection", c2_no_maximal_intersection),
        ("second-maximal groups are affine", c3_second_maximal_affine),
        ("unique normal T_Σ", c4_unique_normal_tsigma),
        ("normalizer index 2", c5_normalizer_index_2),
        ("Sylow self-normalizing in AGL", c6_self_normalizing),
        ("centralizer orders", c7_centralizers),
        ("flag-normalized enumeration", c8_flag_normalized),
        ("s_n consistency", c9_s_n),
        ("Dixon conjugator", c10_dixon),
        ("weak keys and ∘ axioms", c11_weak_keys_and_axioms),
        ("parity of AGL generators", c12_parity),
        ("coset-swapping involutions", c13_coset_lemma),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{took:.2}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{took:.2}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
