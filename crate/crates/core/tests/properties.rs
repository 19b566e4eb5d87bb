use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use trigonal_core::census::poly;
use trigonal_core::census::{profile_range, Histogram, ProfileEngine, Strategy as CensusStrategy};
use trigonal_core::combinat::{
    mobius_orbit_counts, partitions_up_to, pi_w, point_counts_from_orbits, sigma, sigma_complement, Partition,
};
use trigonal_core::ff::{is_prime, make_field, FieldDesc, FieldElem};
use trigonal_core::par::Exec;
use trigonal_core::plane::{Family, FamilyKind};
use trigonal_core::symbolic::{zeta_inverse_pi, QPoly, Space};

fn small_fields() -> Vec<FieldDesc> {
    let mut out = Vec::new();
    for p in (2u64..=64).filter(|&p| is_prime(p)) {
        let mut m = 1;
        while p.pow(m) <= 64 {
            out.push(make_field(p, 1, m).unwrap());
            m += 1;
        }
    }
    out
}

#[test]
fn field_axioms_hold_exhaustively_up_to_64_elements() {
    let fields = small_fields();
    assert_eq!(fields.len(), 27);
    for fd in &fields {
        let all: Vec<FieldElem> = fd.elements().collect();
        assert_eq!(all.len() as u64, fd.size());
        let (zero, one) = (fd.zero(), fd.one());
        for &a in &all {
            assert_eq!(fd.add(a, zero), a);
            assert_eq!(fd.mul(a, one), a);
            assert_eq!(fd.add(a, fd.neg(a)), zero);
            if a != zero {
                assert_eq!(fd.mul(a, fd.inv(a)), one, "inverse in GF({})", fd.size());
                assert_eq!(fd.pow(a, fd.size() - 1), one);
            }
            for &b in &all {
                assert_eq!(fd.add(a, b), fd.add(b, a));
                assert_eq!(fd.mul(a, b), fd.mul(b, a));
                assert_eq!(fd.sub(fd.add(a, b), b), a);
                for &c in &all {
                    assert_eq!(fd.mul(fd.mul(a, b), c), fd.mul(a, fd.mul(b, c)));
                    assert_eq!(fd.mul(a, fd.add(b, c)), fd.add(fd.mul(a, b), fd.mul(a, c)));
                }
            }
        }
    }
}

fn counts(space: Space, q: u64, up_to: u32) -> Vec<u64> {
    let (lo, hi) = match space {
        Space::Pn(n) => (0, n),
        Space::PnMinusPoint(n) => (1, n),
    };
    (1..=up_to).map(|d| (lo..=hi).map(|i| q.pow(d * i)).sum()).collect()
}

#[test]
fn pi_matches_inverse_zeta() {
    for q in [2u64, 3] {
        for space in [Space::Pn(1), Space::Pn(2), Space::PnMinusPoint(2)] {
            let n = counts(space, q, 6);
            for w in 0..=6 {
                let direct = BigRational::from_integer(pi_w(&n, w).unwrap());
                assert_eq!(direct, zeta_inverse_pi(space, w).eval_int(q as i64), "{space:?} q={q} w={w}");
            }
        }
    }
    for n in [1u32, 2] {
        let sum: QPoly = (0..=n + 1).map(|w| zeta_inverse_pi(Space::Pn(n), w)).sum();
        assert!(sum.is_zero());
    }
}

#[test]
fn sigma_vanishes_below_threshold_and_matches_complement() {
    let all = partitions_up_to(12);
    assert_eq!(all.len(), 272);
    for lambda in &all {
        let direct = sigma(lambda, 5);
        assert_eq!(direct, sigma_complement(lambda, 5), "{lambda}");
        if !lambda.is_empty() && lambda.weight() <= 5 {
            assert_eq!(direct, BigInt::from(0), "{lambda}");
        }
    }
}

#[test]
fn census_block_is_thread_invariant() {
    let family = Family::new(FamilyKind::NonSplit, 3).unwrap();
    let engine = ProfileEngine::new(3, CensusStrategy::Eliminate).unwrap();
    let start = 4_000_000u64;
    let run = |exec: Exec| {
        let parts = exec.map(8, |i| {
            let lo = start + i as u64 * 256;
            profile_range(&family, &engine, lo..lo + 256).unwrap()
        });
        parts.iter().fold(Histogram::default(), |mut acc, h| {
            acc.merge(h);
            acc
        })
    };
    let one = run(Exec::Sequential);
    assert_eq!(one.total(), 2048);
    assert_eq!(one, run(Exec::with_threads(4)));
    assert_eq!(one, run(Exec::with_threads(8)));
}

fn partition_strategy() -> impl Strategy<Value = Partition> {
    prop::collection::vec(0u64..4, 1..=8).prop_map(|m| Partition::from_multiplicities(&m))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn family_indices_round_trip(kind in prop::sample::select(FamilyKind::ALL.to_vec()), q in prop::sample::select(vec![2u64, 3, 5]), seed in any::<u64>()) {
        let family = Family::new(kind, q).unwrap();
        let idx = seed % family.size();
        let form = family.curve(idx).unwrap();
        prop_assert!(family.contains(&form));
        prop_assert_eq!(family.index_of(&form).unwrap(), idx);
    }

    #[test]
    fn orbit_and_point_counts_are_inverse(orbits in prop::collection::vec(0u64..50, 1..8)) {
        let points = point_counts_from_orbits(&orbits);
        prop_assert_eq!(mobius_orbit_counts(&points).unwrap(), orbits);
    }

    #[test]
    fn partitions_serialize_as_ascending_pairs(lambda in partition_strategy()) {
        let text = serde_json::to_string(&lambda).unwrap();
        let back: Partition = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &lambda);
        let pairs = lambda.pairs();
        prop_assert!(pairs.windows(2).all(|w| w[0].0 < w[1].0));
        prop_assert!(pairs.iter().all(|&(_, m)| m > 0));
    }

    #[test]
    fn qpoly_evaluation_is_a_ring_map(a in prop::collection::vec((0u32..6, -9i64..9), 0..5), b in prop::collection::vec((0u32..6, -9i64..9), 0..5), q in -5i64..6) {
        let (pa, pb) = (QPoly::from_int_terms(&a), QPoly::from_int_terms(&b));
        let (ea, eb) = (pa.eval_int(q), pb.eval_int(q));
        prop_assert_eq!((pa.clone() * pb.clone()).eval_int(q), &ea * &eb);
        prop_assert_eq!((pa - pb).eval_int(q), ea - eb);
    }

    #[test]
    fn polynomial_division_reconstructs(
        field in prop::sample::select(vec![(2u64, 3u32), (3, 2), (5, 1), (7, 1)]),
        a in prop::collection::vec(0u64..49, 0..10),
        b in prop::collection::vec(0u64..49, 1..6),
    ) {
        let fd = make_field(field.0, 1, field.1).unwrap();
        let elem = |v: &u64| FieldElem(v % fd.size());
        let a: poly::Poly = a.iter().map(elem).collect();
        let mut b: poly::Poly = b.iter().map(elem).collect();
        poly::trim(&mut b);
        prop_assume!(!b.is_empty());
        let (quot, rem) = poly::divrem(&fd, &a, &b);
        let back = poly::add(&fd, &poly::mul(&fd, &quot, &b), &rem);
        let mut a_trim = a.clone();
        poly::trim(&mut a_trim);
        prop_assert_eq!(back, a_trim);
        prop_assert!(poly::degree(&rem).is_none_or(|d| d < poly::degree(&b).unwrap()));
    }
}
