use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lawvere::cauchy::{are_equivalent, ell};
use lawvere::karoubi::{classify_karoubian, envelope, factorize_karoubian_m5, idempotents, is_equivalence, split_idempotent, Functor};
use lawvere::model::{classify, factorize, Axiom, ModelId};
use lawvere::presheaf::{candidate_dual, has_dual, presheaf_dist, yoneda};
use lawvere::random as gen;
use lawvere::space::closure;
use lawvere::{ExtNN, SpaceMap};

fn extnn() -> impl Strategy<Value = ExtNN> {
    prop_oneof![
        8 => (0u64..50, 1u64..8).prop_map(|(p, q)| ExtNN::ratio(p, q)),
        1 => Just(ExtNN::Infinite),
    ]
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #[test]
    fn addition_is_a_commutative_monoid(a in extnn(), b in extnn(), c in extnn()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.add(&ExtNN::zero()), a);
    }

    #[test]
    fn hom_is_right_adjoint_to_addition(a in extnn(), b in extnn(), c in extnn()) {
        prop_assert_eq!(a.add(&b) >= c, a >= ExtNN::hom(&b, &c));
    }

    #[test]
    fn hom_obeys_the_triangle_inequality(a in extnn(), b in extnn(), c in extnn()) {
        prop_assert!(ExtNN::hom(&a, &b).add(&ExtNN::hom(&b, &c)) >= ExtNN::hom(&a, &c));
        prop_assert!(ExtNN::hom(&a, &a).is_zero());
    }

    #[test]
    fn absdiff_is_symmetric(a in extnn(), b in extnn()) {
        prop_assert_eq!(ExtNN::absdiff(&a, &b), ExtNN::absdiff(&b, &a));
        prop_assert_eq!(ExtNN::absdiff(&a, &b).is_zero(), a == b);
    }

    #[test]
    fn values_survive_text(a in extnn()) {
        let back: ExtNN = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn closure_is_a_space_and_idempotent(seed in any::<u64>(), n in 1usize..7) {
        let g = gen::random_graph(&mut rng(seed), n, false);
        let s = closure(&g);
        for i in 0..n {
            prop_assert!(s.d(i, i).is_zero());
            for j in 0..n {
                for k in 0..n {
                    prop_assert!(s.d(i, j).add(s.d(j, k)) >= *s.d(i, k));
                }
            }
        }
        let mut again = lawvere::WeightedGraph::new(s.objects().to_vec()).unwrap();
        for i in 0..n {
            for j in 0..n {
                again.add_edge(i, j, s.d(i, j).clone());
            }
        }
        prop_assert_eq!(closure(&again), s);
    }

    #[test]
    fn opposite_is_an_involution(seed in any::<u64>()) {
        let s = gen::random_space(&mut rng(seed), 6, false);
        prop_assert_eq!(s.opposite().opposite(), s);
    }

    #[test]
    fn gaunt_quotient_is_gaunt_and_an_equivalence(seed in any::<u64>()) {
        let s = gen::random_space(&mut rng(seed), 6, false);
        let (q, map) = s.gaunt_quotient();
        prop_assert!(q.is_gaunt());
        prop_assert!(map.is_fully_faithful() && map.is_surjective());
        prop_assert_eq!(q.len(), s.iso_partition().len());
    }

    #[test]
    fn yoneda_embedding_is_isometric(seed in any::<u64>()) {
        let s = gen::random_space(&mut rng(seed), 6, false);
        for x in 0..s.len() {
            for y in 0..s.len() {
                prop_assert_eq!(&presheaf_dist(&yoneda(&s, x), &yoneda(&s, y)).unwrap(), s.d(x, y));
            }
        }
    }

    #[test]
    fn representables_have_duals(seed in any::<u64>()) {
        let s = gen::random_space(&mut rng(seed), 6, true);
        for x in 0..s.len() {
            let v = has_dual(&yoneda(&s, x));
            prop_assert!(v.has_dual);
            prop_assert_eq!(v.witness, candidate_dual(&yoneda(&s, x)));
        }
    }

    #[test]
    fn identity_is_a_unit(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = gen::random_space(&mut r, 5, false);
        let b = gen::random_space(&mut r, 5, false);
        let f = gen::random_short_map(&mut r, &a, &b);
        prop_assert_eq!(SpaceMap::compose(&f, &SpaceMap::identity(&a)).unwrap(), f.clone());
        prop_assert_eq!(SpaceMap::compose(&SpaceMap::identity(&b), &f).unwrap(), f);
    }

    #[test]
    fn factorizations_compose_back(seed in any::<u64>(), model in 0usize..3, m5 in any::<bool>()) {
        let m = ModelId::ALL[model];
        let mut r = rng(seed);
        let a = gen::random_space(&mut r, 5, m.requires_symmetry());
        let b = gen::random_space(&mut r, 5, m.requires_symmetry());
        let f = gen::random_short_map(&mut r, &a, &b);
        let axiom = if m5 { Axiom::M5 } else { Axiom::M4 };
        let fac = factorize(&f, m, axiom).unwrap();
        prop_assert_eq!(SpaceMap::compose(&fac.second, &fac.first).unwrap(), f);
        let (c1, c2) = (classify(&fac.first, m).unwrap(), classify(&fac.second, m).unwrap());
        if m5 {
            prop_assert!(c1.is_trivial_cof && c2.is_fib);
        } else {
            prop_assert!(c1.is_cof && c2.is_trivial_fib);
        }
    }

    #[test]
    fn sequence_equivalence_matches_limit_presheaves(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = gen::random_space(&mut r, 5, true);
        let a = gen::random_epseq(&mut r, &s, 1.0);
        let b = gen::random_epseq(&mut r, &s, 1.0);
        prop_assert_eq!(are_equivalent(&a, &b).unwrap(), ell(&a).unwrap() == ell(&b).unwrap());
        prop_assert!(are_equivalent(&a, &a.shift(3)).unwrap());
    }

    #[test]
    fn envelopes_split_every_idempotent(seed in any::<u64>()) {
        let c = gen::random_category(&mut rng(seed), 3, 9);
        let env = envelope(&c);
        for e in idempotents(&env.cat) {
            prop_assert!(split_idempotent(&env.cat, e).unwrap().is_some());
        }
        prop_assert!(is_equivalence(&envelope(&env.cat).inclusion));
    }

    #[test]
    fn karoubian_factorizations_compose_back(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = gen::random_category(&mut r, 3, 9);
        let d = gen::random_category(&mut r, 3, 9);
        let f = gen::random_functor(&mut r, &c, &d);
        let fac = factorize_karoubian_m5(&f);
        prop_assert_eq!(Functor::compose(&fac.second, &fac.first).unwrap(), f);
        prop_assert!(classify_karoubian(&fac.first).is_trivial_cof);
        prop_assert!(classify_karoubian(&fac.second).is_fib);
    }
}
