use std::sync::OnceLock;

use fermat_actions::classify::{act, act_via_matrix, count_orbits_burnside, is_invariant, orbit_partition};
use fermat_actions::enumeration::{
    brute_force_oracle, classify_type, enumerate_actions, general_form, ActionParams, SubgroupKey,
};
use fermat_actions::fpalgebra::{FpMatrix, FpVector, PrimeModulus};
use fermat_actions::geometry::{jacobian_decomposition, quotient_genus, total_genus, MarkedPoints};
use fermat_actions::hgroup::{normalizer_in_symmetric, perm_to_matrix, PermGroup, Permutation};
use proptest::prelude::*;

const CONFIGS: [(u64, usize, usize); 8] = [
    (3, 3, 2),
    (5, 3, 2),
    (7, 3, 2),
    (2, 5, 2),
    (3, 4, 2),
    (3, 4, 3),
    (2, 6, 3),
    (5, 4, 1),
];

fn universe() -> &'static Vec<(ActionParams, Vec<SubgroupKey>)> {
    static U: OnceLock<Vec<(ActionParams, Vec<SubgroupKey>)>> = OnceLock::new();
    U.get_or_init(|| {
        CONFIGS
            .iter()
            .map(|&(p, n, m)| {
                let params = ActionParams::new(p, n, m).unwrap();
                (params, enumerate_actions(&params).unwrap())
            })
            .collect()
    })
}

fn perm(degree: usize) -> impl Strategy<Value = Permutation> {
    Just((1..=degree).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(&v).unwrap())
}

/// A configuration index, a key in it and two permutations of the right degree.
fn key_and_perms() -> impl Strategy<Value = (usize, SubgroupKey, Permutation, Permutation)> {
    (0..CONFIGS.len()).prop_flat_map(|c| {
        let (params, keys) = &universe()[c];
        let d = params.degree();
        let keys = keys.clone();
        (
            Just(c),
            (0..keys.len()).prop_map(move |i| keys[i].clone()),
            perm(d),
            perm(d),
        )
    })
}

fn matrix() -> impl Strategy<Value = FpMatrix> {
    (prop::sample::select(vec![2u64, 3, 5, 7, 11, 13]), 1usize..6, 1usize..7).prop_flat_map(|(p, r, c)| {
        prop::collection::vec(0..p as u16, r * c)
            .prop_map(move |d| FpMatrix::from_residues(PrimeModulus::new(p).unwrap(), r, c, d).unwrap())
    })
}

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(1000)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn rref_is_idempotent_and_keeps_row_space(a in matrix()) {
        let (r, rank) = a.rref();
        prop_assert!(r.is_rref());
        prop_assert_eq!(r.rref(), (r.clone(), rank));
        prop_assert_eq!(rank, a.rank());
        prop_assert_eq!(rank, a.transpose().rank());
        for i in 0..a.rows() {
            prop_assert!(r.row_space_contains(&a.row_vector(i)).unwrap());
        }
    }

    #[test]
    fn kernel_has_complementary_dimension(a in matrix()) {
        let k = a.kernel_basis();
        prop_assert_eq!(k.rows() + a.rank(), a.cols());
        for i in 0..k.rows() {
            prop_assert!(a.mul_vector(&k.row_vector(i)).unwrap().is_zero());
        }
    }

    #[test]
    fn action_axioms((c, key, s, t) in key_and_perms()) {
        let d = universe()[c].0.degree();
        prop_assert_eq!(act(&Permutation::identity(d), &key).unwrap(), key.clone());
        let composed = act(&s.compose(&t).unwrap(), &key).unwrap();
        let stepwise = act(&s, &act(&t, &key).unwrap()).unwrap();
        prop_assert_eq!(&composed, &stepwise);
        prop_assert_eq!(act(&s, &key).unwrap(), act_via_matrix(&s, &key).unwrap());
        let back = act(&s.inverse(), &act(&s, &key).unwrap()).unwrap();
        prop_assert_eq!(back, key);
    }

    #[test]
    fn action_preserves_admissibility((c, key, s, _t) in key_and_perms()) {
        let (params, keys) = &universe()[c];
        let image = act(&s, &key).unwrap();
        prop_assert!(SubgroupKey::from_theta(*params, image.theta()).is_ok());
        prop_assert!(keys.binary_search(&image).is_ok());
    }

    #[test]
    fn action_matrices_are_homomorphic((c, _key, s, t) in key_and_perms()) {
        let params = universe()[c].0;
        let (p, n) = (params.modulus(), params.n());
        let ms = perm_to_matrix(&s, p, n).unwrap().matrix;
        let mt = perm_to_matrix(&t, p, n).unwrap().matrix;
        let mst = perm_to_matrix(&s.compose(&t).unwrap(), p, n).unwrap().matrix;
        prop_assert_eq!(ms.mul(&mt).unwrap(), mst);
    }

    #[test]
    fn key_text_round_trips((_c, key, _s, _t) in key_and_perms()) {
        prop_assert_eq!(SubgroupKey::parse(&key.to_string()).unwrap(), key);
    }

    #[test]
    fn normal_forms_rebuild_the_key((c, key, _s, _t) in key_and_perms()) {
        let params = universe()[c].0;
        prop_assert_eq!(classify_type(&key).rebuild(&params).unwrap(), key.clone());
        let g = general_form(&key);
        g.validate(params.modulus()).unwrap();
        prop_assert_eq!(g.rebuild(&params).unwrap(), key);
    }

    #[test]
    fn quotient_genus_is_integral_and_bounded(
        (c, key, _s, _t) in key_and_perms(),
        rows in prop::collection::vec(prop::collection::vec(0i64..13, 3), 0..3),
    ) {
        let params = universe()[c].0;
        let m = params.m();
        let rows: Vec<Vec<i64>> = rows.into_iter().take(m.saturating_sub(1)).map(|mut r| { r.truncate(m); r }).collect();
        let sub = if rows.is_empty() {
            FpMatrix::zeros(params.modulus(), 0, m)
        } else {
            FpMatrix::from_rows(params.modulus(), &rows).unwrap()
        };
        let g = quotient_genus(&key, &sub).unwrap();
        let total = total_genus(params.p() as u64, params.n() as u64, m as u64).unwrap();
        prop_assert!(g <= total);
        if sub.rank() == 0 {
            prop_assert_eq!(g, total);
        }
    }

    #[test]
    fn genus_is_integral_or_rejected(k in 2u64..40, n in 2u64..9, m in 1u64..9) {
        prop_assume!(m <= n && (n - 1) * (k - 1) > 2);
        let twice = k.pow(m as u32 - 1) * ((n - 1) * (k - 1) - 2);
        match total_genus(k, n, m) {
            Ok(g) => prop_assert_eq!(2 * g, twice + 2),
            Err(_) => prop_assert!(twice % 2 == 1),
        }
    }

    #[test]
    fn burnside_matches_partition(c in 0..CONFIGS.len(), ngens in 0usize..3, seed in any::<u64>()) {
        let (params, keys) = &universe()[c];
        let d = params.degree();
        let mut all: Vec<Permutation> = Vec::new();
        let mut images: Vec<usize> = (1..=d).collect();
        let mut x = seed | 1;
        for _ in 0..ngens {
            for i in (1..d).rev() {
                x ^= x << 13; x ^= x >> 7; x ^= x << 17;
                images.swap(i, (x % (i as u64 + 1)) as usize);
            }
            all.push(Permutation::from_images(&images).unwrap());
        }
        let g = PermGroup::generate(d, &all).unwrap();
        let report = orbit_partition(keys, &g).unwrap();
        prop_assert_eq!(report.count, count_orbits_burnside(keys, &g).unwrap());
        prop_assert_eq!(report.key_count(), keys.len());
        for o in &report.orbits {
            prop_assert_eq!(&o.representative, o.members.iter().min().unwrap());
            prop_assert_eq!(g.order() % o.size(), 0);
        }
    }

    #[test]
    fn permutation_inverse_and_text((c, _key, s, t) in key_and_perms()) {
        let d = universe()[c].0.degree();
        prop_assert!(s.compose(&s.inverse()).unwrap().is_identity());
        prop_assert_eq!(Permutation::parse_cycles(&s.to_string(), d).unwrap(), s.clone());
        prop_assert_eq!(s.compose(&t).unwrap().inverse(), t.inverse().compose(&s.inverse()).unwrap());
    }

    #[test]
    fn invariance_is_stable_under_group_closure((c, key, s, _t) in key_and_perms()) {
        let d = universe()[c].0.degree();
        let g = PermGroup::generate(d, std::slice::from_ref(&s)).unwrap();
        let fixed = act(&s, &key).unwrap() == key;
        prop_assert_eq!(is_invariant(&key, &g), fixed);
        if fixed {
            prop_assert!(g.elements().iter().all(|e| act(e, &key).unwrap() == key));
        }
    }

    #[test]
    fn vector_operations_are_linear(
        p in prop::sample::select(vec![2u64, 3, 5, 7, 11]),
        xs in prop::collection::vec(-50i64..50, 4),
        ys in prop::collection::vec(-50i64..50, 4),
        c in 0u16..11,
    ) {
        let pm = PrimeModulus::new(p).unwrap();
        let (x, y) = (FpVector::from_i64(pm, &xs), FpVector::from_i64(pm, &ys));
        let c = c % pm.value();
        let lhs = x.add(&y).unwrap().scale(c);
        prop_assert_eq!(lhs, x.scale(c).add(&y.scale(c)).unwrap());
        prop_assert!(x.add(&x.neg()).unwrap().is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn enumeration_equals_oracle(c in 0..CONFIGS.len()) {
        let (params, keys) = &universe()[c];
        prop_assert_eq!(&brute_force_oracle(params).unwrap(), keys);
    }

    #[test]
    fn jacobian_sums_to_total_genus(p in prop::sample::select(vec![3u64, 5, 7, 11]), i in any::<prop::sample::Index>()) {
        let params = ActionParams::new(p, 3, 2).unwrap();
        let keys = enumerate_actions(&params).unwrap();
        let key = &keys[i.index(keys.len())];
        let r = jacobian_decomposition(key, &MarkedPoints::quartic()).unwrap();
        prop_assert_eq!(r.genus_sum, r.total_genus);
        prop_assert_eq!(r.fixed_counts().iter().sum::<u64>(), 4 * p);
        prop_assert_eq!(r.lines.len() as u64, p + 1);
    }

    #[test]
    fn normalizer_contains_and_normalizes(gens in prop::collection::vec(perm(5), 1..3)) {
        let q = PermGroup::generate(5, &gens).unwrap();
        let n = normalizer_in_symmetric(&q).unwrap();
        prop_assert!(q.is_subgroup_of(&n));
        prop_assert!(n.elements().iter().all(|t| q.is_normalized_by(t)));
        let s5 = PermGroup::symmetric(5).unwrap();
        let count = s5.elements().iter().filter(|t| q.is_normalized_by(t)).count();
        prop_assert_eq!(n.order(), count);
    }
}
