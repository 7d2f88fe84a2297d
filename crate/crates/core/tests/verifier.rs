mod common;

use epsnet_core::rational::{rat, Rational};
use epsnet_core::verifier::{brute_force_unpierced, is_weak_eps_net, max_unpierced_subset};
use epsnet_core::{convex_hull, point_in_hull, Containment, Net, Point, PointSet, Tag};
use proptest::prelude::*;

/// Exhaustive maximum written from scratch: largest subset whose closed hull
/// avoids every query point.
fn oracle(ps: &PointSet, q: &[Point]) -> usize {
    let n = ps.len();
    let mut best = 0;
    for mask in 1u32..(1 << n) {
        let k = mask.count_ones() as usize;
        if k <= best {
            continue;
        }
        let sub: Vec<Point> = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| ps[i].clone())
            .collect();
        let hull = convex_hull(&sub);
        let clear = q.iter().all(|x| match hull.len() {
            0 | 1 => hull.first() != Some(x),
            2 => !on_segment(&hull[0], &hull[1], x),
            _ => point_in_hull(x, &hull) == Containment::Outside,
        });
        if clear {
            best = k;
        }
    }
    best
}

fn on_segment(a: &Point, b: &Point, x: &Point) -> bool {
    let cross = (&b.x - &a.x) * (&x.y - &a.y) - (&b.y - &a.y) * (&x.x - &a.x);
    cross == Rational::from_integer(0.into())
        && x.x >= a.x.clone().min(b.x.clone())
        && x.x <= a.x.clone().max(b.x.clone())
        && x.y >= a.y.clone().min(b.y.clone())
        && x.y <= a.y.clone().max(b.y.clone())
}

fn square_and_center() -> (PointSet, Vec<Point>) {
    let ps = PointSet::new(vec![
        Point::from_ints(0, 0),
        Point::from_ints(2, 0),
        Point::from_ints(2, 2),
        Point::from_ints(0, 2),
    ]);
    (ps, vec![Point::from_ints(1, 1)])
}

#[test]
fn square_with_center() {
    let (ps, q) = square_and_center();
    assert_eq!(max_unpierced_subset(&ps, &q).0, 2);
    assert_eq!(brute_force_unpierced(&ps, &q).unwrap(), 2);
    assert_eq!(oracle(&ps, &q), 2);
}

#[test]
fn dp_matches_brute_force_on_random_instances() {
    let mut checked = 0;
    for seed in 0..220u64 {
        let n = 3 + (seed % 10) as usize;
        let k = (seed % 6) as usize;
        let (ps, q) = common::points_and_queries(n, k, seed);
        let dp = max_unpierced_subset(&ps, &q).0;
        assert_eq!(dp, brute_force_unpierced(&ps, &q).unwrap(), "seed {seed}");
        assert_eq!(dp, oracle(&ps, &q), "seed {seed}");
        checked += 1;
    }
    assert!(checked >= 200);
}

#[test]
fn query_points_on_the_set() {
    // Net points drawn from P itself.
    for seed in 0..40u64 {
        let ps = common::random_points(9, seed);
        let q: Vec<Point> = (0..9)
            .filter(|i| (seed >> (i % 5)) & 1 == 1)
            .map(|i| ps[i].clone())
            .collect();
        assert_eq!(
            max_unpierced_subset(&ps, &q).0,
            oracle(&ps, &q),
            "seed {seed}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn witness_is_valid_and_adding_queries_never_helps(seed in 0u64..10_000, n in 4usize..11, k in 0usize..4) {
        let (ps, q) = common::points_and_queries(n, k + 1, seed);
        let (best, witness) = max_unpierced_subset(&ps, &q[..k]);
        prop_assert_eq!(witness.len(), best);
        let hull = convex_hull(&witness.iter().map(|&i| ps[i].clone()).collect::<Vec<_>>());
        if hull.len() >= 3 {
            for x in &q[..k] {
                prop_assert_eq!(point_in_hull(x, &hull), Containment::Outside);
            }
        }
        let (more, _) = max_unpierced_subset(&ps, &q);
        prop_assert!(more <= best);
    }
}

#[test]
fn net_decision_uses_ceiling_threshold() {
    let ps = common::random_points(10, 3);
    let empty = Net::new();
    // ⌈0.25·10⌉ = 3: the empty net leaves all 10 unpierced.
    let r = is_weak_eps_net(&ps, &empty, &rat(1, 4));
    assert_eq!((r.max_unpierced, r.threshold, r.is_net), (10, 3, false));
    let all = Net::from_points(ps.points().to_vec(), Tag::Trivial);
    let r = is_weak_eps_net(&ps, &all, &rat(1, 4));
    assert_eq!((r.max_unpierced, r.is_net), (0, true));
    assert!(r.max_unpierced < r.threshold as usize);
}

#[test]
fn brute_force_has_a_size_limit() {
    let ps = common::random_points(17, 1);
    assert!(brute_force_unpierced(&ps, &[]).is_err());
}
