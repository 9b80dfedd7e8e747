mod common;

use common::{random_config, shape, stable_sorted};
use kmn_sandpile::oracle::{
    self, is_parking_by_definition, is_recurrent_by_definition, phi_by_definition, psi_by_definition,
    DefinitionOracle,
};
use kmn_sandpile::rank;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SMALL: [(usize, usize); 7] = [(1, 3), (2, 1), (2, 2), (3, 2), (2, 3), (3, 3), (4, 2)];

#[test]
fn parking_and_recurrent_predicates_match_definitions() {
    for (m, n) in SMALL {
        for u in stable_sorted(shape(m, n), None) {
            assert_eq!(rank::is_parking_sorted(&u).unwrap(), is_parking_by_definition(&u).unwrap(), "{u}");
            assert_eq!(rank::is_recurrent_sorted(&u).unwrap(), is_recurrent_by_definition(&u).unwrap(), "{u}");
        }
    }
}

#[test]
fn phi_and_psi_match_minimal_subset_definitions() {
    for (m, n) in SMALL {
        for u in stable_sorted(shape(m, n), None) {
            assert_eq!(rank::phi(&u).unwrap(), phi_by_definition(&u).unwrap(), "phi {u}");
            assert_eq!(rank::psi(&u).unwrap(), psi_by_definition(&u).unwrap(), "psi {u}");
        }
    }
}

#[test]
fn park_sort_fast_matches_sorted_definition_park() {
    for (m, n) in SMALL {
        let s = shape(m, n);
        let mut oracle = DefinitionOracle::new(s).unwrap();
        for u in stable_sorted(s, Some(0)) {
            let expected = oracle.park(&u).unwrap().sort_config().unwrap();
            assert_eq!(rank::park_sort_fast(&u).unwrap(), expected, "{u}");
            assert_eq!(rank::park(&u).unwrap(), oracle.park(&u).unwrap(), "labelled {u}");
        }
    }
}

#[test]
fn labelled_park_and_stabilize_match_oracle_on_random_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (m, n) in SMALL {
        let s = shape(m, n);
        let mut oracle = DefinitionOracle::new(s).unwrap();
        for _ in 0..200 {
            let u = random_config(&mut rng, s, -12, 12);
            let st = u.stabilize_equiv().unwrap();
            assert!(st.is_stable());
            assert_eq!(oracle.park(&st).unwrap(), oracle.park(&u).unwrap(), "stabilize {u}");
            assert_eq!(rank::park(&u).unwrap(), oracle.park(&u).unwrap(), "park {u}");
        }
    }
}

#[test]
fn psi0_matches_pipeline() {
    for (m, n) in SMALL {
        for u in stable_sorted(shape(m, n), Some(3)) {
            if !rank::is_parking_sorted(&u).unwrap() {
                continue;
            }
            let mut v = u.clone().with_sink(Some(3));
            v = v.with_value(kmn_sandpile::Vertex::B(0), u.b()[0] - 1).unwrap();
            assert_eq!(rank::psi0(&u).unwrap(), rank::park_sort(&v).unwrap(), "{u}");
        }
    }
}

#[test]
fn ranks_agree_with_definition_on_small_shapes() {
    for (m, n) in SMALL {
        let s = shape(m, n);
        let mut oracle = DefinitionOracle::new(s).unwrap();
        for sink in -3..=(3 * m * n) as i64 {
            for u in stable_sorted(s, Some(sink)) {
                let expected = oracle.rank(&u, false).unwrap().0;
                assert_eq!(rank::rank_of(&u).unwrap(), expected, "rank_of {u}");
                assert_eq!(rank::rank_scan(&u).unwrap(), expected, "rank_scan {u}");
                assert_eq!(rank::rank_greedy(&u).unwrap().0, expected, "rank_greedy {u}");
            }
        }
    }
}

#[test]
fn oracle_rank_restricted_to_b_agrees() {
    let s = shape(3, 2);
    let mut oracle = DefinitionOracle::new(s).unwrap();
    for sink in -2..=8 {
        for u in stable_sorted(s, Some(sink)) {
            let full = oracle.rank(&u, false).unwrap();
            let only_b = oracle.rank(&u, true).unwrap();
            assert_eq!(full.0, only_b.0, "{u}");
            assert!(only_b.1.a().iter().all(|&x| x == 0));
        }
    }
    assert_eq!(oracle::rank_by_definition(&common::cfg("<0;-1|0,0>")).unwrap(), -1);
}
