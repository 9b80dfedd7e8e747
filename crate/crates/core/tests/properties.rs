mod common;

use std::cmp::Ordering;

use kmn_sandpile::cylindric::{xpara, ypara};
use kmn_sandpile::rank::*;
use kmn_sandpile::series::{Caps, TruncatedSeries};
use kmn_sandpile::{counting_sort, Configuration, GraphShape, Vertex};
use proptest::prelude::*;

fn config_in(max_side: usize, lo: i64, hi: i64, sink_hi: i64) -> impl Strategy<Value = Configuration> {
    (1..=max_side, 1..=max_side).prop_flat_map(move |(m, n)| {
        (
            prop::collection::vec(lo..=hi, m - 1),
            lo..=sink_hi,
            prop::collection::vec(lo..=hi, n),
        )
            .prop_map(move |(a, s, b)| Configuration::new(GraphShape::new(m, n).unwrap(), a, Some(s), b).unwrap())
    })
}

fn parking_sorted(max_side: usize) -> impl Strategy<Value = Configuration> {
    config_in(max_side, -10, 10, 40).prop_map(|u| park_sort(&u).unwrap())
}

/// Reverse degree-lexicographic comparison of r-vectors.
fn rev_deglex(r: &[i64], s: &[i64]) -> Ordering {
    let (sr, ss): (i64, i64) = (r.iter().sum(), s.iter().sum());
    sr.cmp(&ss).then_with(|| {
        r.iter().zip(s).rev().find(|(x, y)| x != y).map_or(Ordering::Equal, |(x, y)| x.cmp(y))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn toppling_conserves_degree(u in config_in(6, -20, 20, 40), pick in 0usize..64) {
        let vertices: Vec<Vertex> = u.vertices().collect();
        let v = vertices[pick % vertices.len()];
        prop_assert_eq!(u.topple(v).unwrap().degree().unwrap(), u.degree().unwrap());
    }

    #[test]
    fn stabilize_is_stable_and_conservative(u in config_in(8, -50, 50, 50)) {
        let s = u.stabilize_equiv().unwrap();
        prop_assert!(s.is_stable());
        prop_assert_eq!(s.degree().unwrap(), u.degree().unwrap());
        let p = park_sort(&u).unwrap();
        prop_assert_eq!(p.degree().unwrap(), u.degree().unwrap());
        prop_assert!(is_parking_sorted(&p).unwrap());
    }

    #[test]
    fn counting_sort_agrees_with_std(values in prop::collection::vec(0i64..=30, 0..60)) {
        let mut expected = values.clone();
        expected.sort();
        prop_assert_eq!(counting_sort(30, &values).unwrap(), expected);
    }

    #[test]
    fn parking_sorted_starts_with_empty_b(p in parking_sorted(8)) {
        prop_assert_eq!(p.b()[0], 0);
    }

    #[test]
    fn grid_shifts_invert(p in parking_sorted(6), ka in -4i64..=4, kb in -4i64..=4) {
        let u = shift(&p, ka, kb).unwrap();
        prop_assert_eq!(t_a_inv(&t_a(&u).unwrap()).unwrap(), u.clone());
        prop_assert_eq!(t_a(&t_a_inv(&u).unwrap()).unwrap(), u.clone());
        prop_assert_eq!(t_b_inv(&t_b(&u).unwrap()).unwrap(), u.clone());
        prop_assert_eq!(t_b(&t_b_inv(&u).unwrap()).unwrap(), u.clone());
        prop_assert_eq!(shift(&u, 1, 0).unwrap(), t_a(&u).unwrap());
        prop_assert_eq!(shift(&u, 0, 1).unwrap(), t_b(&u).unwrap());
    }

    #[test]
    fn decompose_round_trip(p in parking_sorted(5), ka in -3i64..=3, kb in -3i64..=3) {
        // with m = 1 there is no non-sink a-vertex, so T_a is not a toppling
        prop_assume!(p.shape().m >= 2);
        let u = shift(&p, ka, kb).unwrap();
        let g = decompose_compact(&u).unwrap();
        prop_assert_eq!(shift(&p, g.k_a, g.k_b).unwrap(), u);
        prop_assert_eq!((g.k_a, g.k_b), (ka, kb));
    }

    #[test]
    fn greedy_proof_is_a_witness(u in config_in(6, -8, 8, 30)) {
        let (rank, proof) = rank_greedy(&u).unwrap();
        let f = &proof.f;
        prop_assert!(f.a().iter().all(|&x| x == 0) && f.sink() == Some(0));
        prop_assert!(f.b().iter().all(|&x| x >= 0));
        prop_assert_eq!(f.degree().unwrap(), rank + 1);
        prop_assert!(!u.checked_sub(f).unwrap().is_effective().unwrap());
        // any single chip fewer leaves an effective configuration
        if let Some(j) = f.b().iter().position(|&x| x > 0) {
            let smaller = f.with_value(Vertex::B(j), f.b()[j] - 1).unwrap();
            prop_assert!(u.checked_sub(&smaller).unwrap().is_effective().unwrap());
        }
    }

    #[test]
    fn three_rank_algorithms_agree(u in config_in(8, -10, 10, 80)) {
        let r = rank_of(&u).unwrap();
        prop_assert_eq!(rank_scan(&u).unwrap(), r);
        prop_assert_eq!(rank_greedy(&u).unwrap().0, r);
    }

    #[test]
    fn rank_ignores_vertex_order(u in config_in(7, -10, 10, 60), rot_a in 0usize..8, rot_b in 0usize..8) {
        let mut a = u.a().to_vec();
        let mut b = u.b().to_vec();
        if !a.is_empty() {
            let k = rot_a % a.len();
            a.rotate_left(k);
        }
        let k = rot_b % b.len();
        b.rotate_left(k);
        b.reverse();
        let v = Configuration::new(u.shape(), a, u.sink(), b).unwrap();
        prop_assert_eq!(rank_of(&v).unwrap(), rank_of(&u).unwrap());
    }

    #[test]
    fn riemann_roch(u in config_in(6, -15, 15, 60)) {
        let s = u.shape();
        let k = canonical_divisor(s);
        let (m, n) = (s.m as i64, s.n as i64);
        let lhs = rank_of(&u).unwrap() - rank_of(&k.checked_sub(&u).unwrap()).unwrap();
        prop_assert_eq!(lhs, u.degree().unwrap() - m * n + m + n);
    }

    #[test]
    fn psi0_acts_on_r_vectors(p in parking_sorted(7)) {
        let r = r_vector(&p.with_sink(None)).unwrap();
        let next = psi0(&p.with_sink(None)).unwrap();
        let h = (2..=r.entries().len()).find(|&i| r.entries()[i - 1] == 1).unwrap_or(r.entries().len() + 1);
        let mut expected = r.clone();
        for _ in 0..h - 1 {
            expected = psi0_tilde(&expected).unwrap();
        }
        let got = r_vector(&next).unwrap();
        prop_assert_eq!(got.entries(), expected.entries());
        let all_ones = r.entries().iter().all(|&x| x == 1);
        let order = rev_deglex(got.entries(), r.entries());
        prop_assert_eq!(order, if all_ones { Ordering::Equal } else { Ordering::Greater });
    }

    #[test]
    fn para_statistics_move_monotonically(p in parking_sorted(6)) {
        let sink = p.sink().unwrap();
        let (x0, y0) = (xpara(&p).unwrap(), ypara(&p).unwrap());
        let q = p.with_sink(Some(sink + 1));
        let (x1, y1) = (xpara(&q).unwrap(), ypara(&q).unwrap());
        // one more sink chip moves exactly one of the two statistics
        prop_assert!((x1 == x0 - 1 && y1 == y0) || (x1 == x0 && y1 == y0 + 1));
        prop_assert!(x0 >= 0 && y0 >= 0);
    }

    #[test]
    fn series_ring_axioms(
        a in prop::collection::vec(-5i64..=5, 36),
        b in prop::collection::vec(-5i64..=5, 36),
        c in prop::collection::vec(-5i64..=5, 36),
    ) {
        let caps = Caps::new(2, 2, 1, 1);
        let build = |coeffs: &[i64]| {
            let mut s = TruncatedSeries::zero(caps);
            for (i, &c) in coeffs.iter().enumerate() {
                let e = [(i / 12) as u32, (i / 4 % 3) as u32, (i / 2 % 2) as u32, (i % 2) as u32];
                s.accumulate(e, c);
            }
            s
        };
        let (a, b, c) = (build(&a), build(&b), build(&c));
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b.add(&c).unwrap()).unwrap(), a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.add(&b).unwrap().add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
        let unit = TruncatedSeries::one(caps).add(&a.mul(&TruncatedSeries::var(caps, kmn_sandpile::series::Var::W)).unwrap()).unwrap();
        let inv = unit.geom_inverse().unwrap();
        prop_assert_eq!(unit.mul(&inv).unwrap(), TruncatedSeries::one(caps));
        prop_assert_eq!(inv.mul(&unit).unwrap(), TruncatedSeries::one(caps));
    }
}

#[test]
fn reverse_deglex_examples() {
    assert_eq!(rev_deglex(&[1, 0], &[0, 1]), Ordering::Less);
    assert_eq!(rev_deglex(&[1, 1], &[0, 1]), Ordering::Greater);
    assert_eq!(rev_deglex(&[1, -2], &[1, -2]), Ordering::Equal);
}
