use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use regulab::oracle::{random_invertible, random_perm};
use regulab::regular::{build_tb, dixon_conjugator, tb_parameters, translation_group, weak_keys};
use regulab::sylow::{canonical_sylow, outer_normalizer_element, sylow_from_flag, t_sigma};
use regulab::{Affinity, BitVector, Flag, RegularGroup};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_conjugate_of_t(n: usize, seed: u64) -> RegularGroup {
    translation_group(n).unwrap().conjugate(&random_perm(n, &mut rng(seed))).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn circ_is_an_elementary_abelian_law(n in 3usize..=5, seed: u64, u: u64, v: u64, w: u64) {
        let g = random_conjugate_of_t(n, seed);
        let mask = (1u64 << n) - 1;
        let [u, v, w] = [u, v, w].map(|x| BitVector::from_index(n, (x & mask) as usize));
        let op = g.circ_op();
        let z = BitVector::zero(n);
        prop_assert_eq!(op.eval(u, v), op.eval(v, u));
        prop_assert_eq!(op.eval(op.eval(u, v), w), op.eval(u, op.eval(v, w)));
        prop_assert_eq!(op.eval(u, u), z);
        prop_assert_eq!(op.eval(z, u), u);
    }

    #[test]
    fn weak_keys_are_the_translation_intersection(n in 3usize..=5, seed: u64) {
        let g = random_conjugate_of_t(n, seed);
        let keys = weak_keys(&g).subspace;
        for v in BitVector::all(n) {
            let is_translation = *g.tau(v) == Affinity::translation(v).to_perm();
            prop_assert_eq!(keys.contains(v).unwrap(), is_translation);
        }
        prop_assert_eq!(&keys, g.intersection_with_t());
    }

    #[test]
    fn dixon_conjugator_maps_h_onto_k(n in 3usize..=5, s1: u64, s2: u64, s3: u64) {
        let h = random_conjugate_of_t(n, s1);
        let k = random_conjugate_of_t(n, s2);
        let zeta = random_invertible(n, &mut rng(s3));
        let g = dixon_conjugator(&h, &k, &zeta).unwrap();
        prop_assert_eq!(h.conjugate(&g).unwrap().sorted_elements(), k.sorted_elements());
    }

    #[test]
    fn tb_groups_are_affine_second_maximal(n in 3usize..=6, pick: prop::sample::Index) {
        let params = tb_parameters(n);
        let b = params[pick.index(params.len())];
        let g = build_tb(n, b).unwrap();
        prop_assert!(g.is_affine());
        prop_assert_eq!(g.intersection_with_t().dim(), n - 2);
        prop_assert_eq!(g.recovered_b(), Some(b));
    }

    #[test]
    fn record_round_trip(n in 3usize..=5, seed: u64) {
        let g = random_conjugate_of_t(n, seed);
        let json = serde_json::to_string(&g.to_record()).unwrap();
        let back = RegularGroup::from_record(&serde_json::from_str(&json).unwrap()).unwrap();
        prop_assert_eq!(back, g);
    }
}

#[test]
fn outer_element_for_every_flag_at_n4() {
    let t = translation_group(4).unwrap();
    for flag in Flag::all(4) {
        let s = sylow_from_flag(&flag).unwrap();
        let ts = t_sigma(&s).unwrap();
        let g = outer_normalizer_element(&s).unwrap();
        assert_eq!(t.conjugate(&g).unwrap(), ts);
        assert!(s.contains(&(&g * &g)));
        assert!(g.is_even());
    }
    assert!(canonical_sylow(4).unwrap().has_normal_subgroup(&t));
}
