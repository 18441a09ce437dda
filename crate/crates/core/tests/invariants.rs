use num_bigint::BigInt;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use sftkit::complex::{double_complex, SUPair, SftPair};
use sftkit::dimension::{dimension_group, hom_compose, hom_equal, induced_map, Kind, LimitElement, LimitGroup, Side};
use sftkit::graph_core::smith_normal_form;
use sftkit::io::{code_json, load_code};
use sftkit::sft::{code_equal, is_injective};
use sftkit::verify::generate::{random_code, random_composable_pair, random_irreducible_graph, random_sft};
use sftkit::{BlockCode, IntMatrix, Sft};

fn matrix(n: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(0i64..3, n * n)
        .prop_map(move |xs| IntMatrix::from_rows(&xs.chunks(n).map(<[i64]>::to_vec).collect::<Vec<_>>()))
}

fn group_and_elements() -> impl Strategy<Value = (LimitGroup, Vec<LimitElement>)> {
    (1usize..=3).prop_flat_map(|n| {
        let element = (prop::collection::vec(-3i64..=3, n), 0i64..3).prop_map(|(v, k)| LimitElement::new(v, k));
        (matrix(n), prop::collection::vec(element, 3))
            .prop_map(|(b, xs)| (LimitGroup::new(b, "G").unwrap(), xs))
    })
}

fn sft_from_seed(seed: u64) -> Sft {
    let mut rng = StdRng::seed_from_u64(seed);
    random_sft(&mut rng, 3, 6, "A")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn element_equality_is_an_equivalence((g, xs) in group_and_elements()) {
        let (x, y, z) = (&xs[0], &xs[1], &xs[2]);
        prop_assert!(g.elem_equal(x, x).unwrap());
        prop_assert_eq!(g.elem_equal(x, y).unwrap(), g.elem_equal(y, x).unwrap());
        if g.elem_equal(x, y).unwrap() && g.elem_equal(y, z).unwrap() {
            prop_assert!(g.elem_equal(x, z).unwrap());
        }
    }

    #[test]
    fn pushing_an_element_one_level_up_keeps_its_class((g, xs) in group_and_elements()) {
        let x = &xs[0];
        let up = LimitElement { vector: g.connecting.mul_vec(&x.vector), level: x.level + 1 };
        prop_assert!(g.elem_equal(x, &up).unwrap());
    }

    #[test]
    fn smith_form_factors_reassemble(m in (1usize..=4).prop_flat_map(matrix)) {
        let snf = smith_normal_form(&m);
        prop_assert_eq!(&(&(&snf.u * &m) * &snf.v), &snf.d);
        let n = m.rows();
        prop_assert_eq!(&snf.u * &snf.u_inv, IntMatrix::identity(n));
        prop_assert_eq!(&snf.v * &snf.v_inv, IntMatrix::identity(n));
        let ds = snf.divisors();
        for w in ds.windows(2) {
            prop_assert!(w[1].clone() % &w[0] == BigInt::from(0));
        }
        prop_assert_eq!(snf.rank, m.rank());
    }

    #[test]
    fn rational_dimension_is_bounded_by_the_vertex_count(seed in any::<u64>()) {
        let s = sft_from_seed(seed);
        for side in [Side::S, Side::U] {
            let g = dimension_group(&s, side);
            prop_assert_eq!(g.rank, s.graph().n_vertices());
            prop_assert!(g.rational_dimension() <= g.rank);
        }
    }

    #[test]
    fn identity_and_shift_codes_are_injective(seed in any::<u64>(), k in -2i64..=2) {
        let s = sft_from_seed(seed);
        prop_assert!(is_injective(&BlockCode::identity(&s)));
        prop_assert!(is_injective(&BlockCode::shift_power(&s, k)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn induced_maps_are_functorial(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (c1, c2) = random_composable_pair(&mut rng).unwrap();
        let c = c1.then(&c2).unwrap();
        for kind in [Kind::S, Kind::U, Kind::SStar, Kind::UStar] {
            let (f1, f2) = (induced_map(&c1, kind, 8).unwrap(), induced_map(&c2, kind, 8).unwrap());
            let parts = match kind {
                Kind::S | Kind::U => hom_compose(&f2, &f1).unwrap(),
                Kind::SStar | Kind::UStar => hom_compose(&f1, &f2).unwrap(),
            };
            prop_assert!(hom_equal(&induced_map(&c, kind, 8).unwrap(), &parts).unwrap(), "kind {}", kind.as_str());
        }
    }

    #[test]
    fn codes_survive_a_json_round_trip(seed in any::<u64>(), window in 1usize..=2) {
        let mut rng = StdRng::seed_from_u64(seed);
        let src = Sft::new("A", &random_irreducible_graph(&mut rng, 2, 4));
        let tgt = Sft::new("B", &random_irreducible_graph(&mut rng, 2, 4));
        if let Some(c) = random_code(&mut rng, &src, &tgt, window, 0) {
            let dir = tempfile::tempdir().unwrap();
            let path = dir.path().join("code.json");
            std::fs::write(&path, serde_json::to_string(&code_json(&c)).unwrap()).unwrap();
            let back = load_code(&path).unwrap();
            prop_assert!(code_equal(&c, &back));
        }
    }

    #[test]
    fn boundaries_square_to_zero_on_trivial_pairs(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let s = Sft::new("X", &random_irreducible_graph(&mut rng, 2, 4));
        let p = SftPair::trivial(&s);
        for side in [Side::S, Side::U] {
            let (_, dc) = double_complex(&SUPair::Sft(p.clone()), side, Default::default()).unwrap();
            prop_assert!(dc.check_d_squared().is_ok());
        }
    }
}
