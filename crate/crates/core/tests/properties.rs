use std::sync::OnceLock;

use proptest::prelude::*;

use frieze_core::folding::{rotation_action, tag_swap_action};
use frieze_core::frieze::Frieze;
use frieze_core::frieze_a::{enumerate_nonzero_a, sigma, AFrieze};
use frieze_core::frieze_d::{enumerate_nonzero_d, sigma1, DFrieze};
use frieze_core::oracle::{exchange_matrix, mutation_closure, CartanType, ExchangeSeed};
use frieze_core::render::band;
use frieze_core::ring::{Ring, RingElement};

fn a_sets() -> &'static Vec<Vec<AFrieze>> {
    static SETS: OnceLock<Vec<Vec<AFrieze>>> = OnceLock::new();
    SETS.get_or_init(|| (4..=9).map(|n| enumerate_nonzero_a(n, Ring::Z).unwrap()).collect())
}

fn d_sets() -> &'static Vec<Vec<DFrieze>> {
    static SETS: OnceLock<Vec<Vec<DFrieze>>> = OnceLock::new();
    SETS.get_or_init(|| (2..=5).map(|n| enumerate_nonzero_d(n).unwrap()).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn frieze_json_round_trips(a in any::<bool>(), set in any::<prop::sample::Index>(), pick in any::<prop::sample::Index>()) {
        let f = if a {
            let s = set.get(a_sets());
            Frieze::A(pick.get(s).clone())
        } else {
            let s = set.get(d_sets());
            Frieze::D(pick.get(s).clone())
        };
        let text = serde_json::to_string(&f.to_json()).unwrap();
        let back = Frieze::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn positive_bands_obey_the_diamond_rule(set in any::<prop::sample::Index>(), pick in any::<prop::sample::Index>()) {
        let positive: Vec<_> = set.get(a_sets()).iter().filter(|f| f.is_positive()).collect();
        let f = pick.get(&positive);
        prop_assert!(band(f).diamond_violations().is_empty());
    }

    #[test]
    fn sigma_commutes_with_the_half_turn(k in 2usize..4, pick in any::<prop::sample::Index>()) {
        // the (2k+2)-gon is set index 2k-2
        let f = pick.get(&a_sets()[2 * k - 2]);
        let rot = rotation_action(k).unwrap();
        let lhs = rot.act(&Frieze::A(sigma(f).unwrap())).unwrap();
        let Frieze::A(turned) = rot.act(&Frieze::A(f.clone())).unwrap() else { unreachable!() };
        prop_assert_eq!(lhs, Frieze::A(sigma(&turned).unwrap()));
    }

    #[test]
    fn sigma1_commutes_with_tag_swap(set in 1usize..4, pick in any::<prop::sample::Index>()) {
        let f = pick.get(&d_sets()[set]);
        let swap = tag_swap_action(f.n()).unwrap();
        let lhs = swap.act(&Frieze::D(sigma1(f))).unwrap();
        let Frieze::D(swapped) = swap.act(&Frieze::D(f.clone())).unwrap() else { unreachable!() };
        prop_assert_eq!(lhs, Frieze::D(sigma1(&swapped)));
    }

    #[test]
    fn closure_fingerprint_ignores_variable_order(values in prop::collection::vec(1i64..4, 3), rot in 0usize..3) {
        let b = exchange_matrix(CartanType::A, 3).unwrap();
        let seed = ExchangeSeed::new(b, values.iter().map(|&v| RingElement::integer(v)).collect()).unwrap();
        let perm: Vec<usize> = (0..3).map(|i| (i + rot) % 3).collect();
        let x = mutation_closure(&seed).ok();
        let y = mutation_closure(&seed.permuted(&perm)).ok();
        prop_assert_eq!(x, y);
    }
}
