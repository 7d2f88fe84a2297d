mod common;

use std::collections::HashMap;

use epsnet_core::arrangement::zone_brute_force;
use epsnet_core::geometry::Segment;
use epsnet_core::improved::{
    build_instance, build_weak_net_traced, nudged_line, radial_order, sectors_from_order,
    sparse_case_net, Config, Dispatch, Instance, RestrictionGraph, StageParams,
};
use epsnet_core::rational::{ceil, int, rat, to_f64, Rational};
use epsnet_core::verifier::{brute_force_unpierced, is_weak_eps_net};
use epsnet_core::{convex_hull, point_in_hull, Containment, Line, Net, Point, PointSet, Tag};
use num_bigint::BigInt;
use num_traits::{One, Pow, ToPrimitive, Zero};
use rand::Rng;

fn two_pow(k: i64) -> Rational {
    if k >= 0 {
        Rational::from_integer(BigInt::one() << k as usize)
    } else {
        Rational::new(BigInt::one(), BigInt::one() << (-k) as usize)
    }
}

/// Largest k with 2^k ≤ x.
fn floor_lg(x: &Rational) -> i64 {
    let mut k = 0i64;
    while two_pow(k) > *x {
        k -= 1;
    }
    while two_pow(k + 1) <= *x {
        k += 1;
    }
    k
}

/// Smallest k with 2^k ≥ x.
fn ceil_lg(x: &Rational) -> i64 {
    let k = floor_lg(x);
    if two_pow(k) == *x {
        k
    } else {
        k + 1
    }
}

fn ceil_pow(base: f64, e: f64) -> usize {
    let v = base.powf(e);
    let r = v.round();
    if (v - r).abs() < 1e-9 {
        r as usize
    } else {
        v.ceil() as usize
    }
}

#[test]
fn stage_params_identities() {
    let cfg = Config::default();
    for (p, q) in [
        (3, 20),
        (1, 4),
        (2, 5),
        (1, 10),
        (1, 100),
        (1, 1000),
        (7, 16),
    ] {
        for sigma in [rat(1, 1), rat(1, 2), rat(1, 8)] {
            let eps = rat(p, q);
            let sp = StageParams::derive(&eps, &sigma, &cfg, 5);
            let inv = Rational::one() / &eps;
            let inv_f = to_f64(&inv);
            let eta = to_f64(&cfg.eta);
            assert_eq!(sp.r0, ceil_pow(inv_f, eta).max(2));
            assert_eq!(sp.t, ceil_pow(inv_f, 2.0 * eta));
            assert_eq!(sp.r_sparse, ceil_pow(inv_f, 4.0 * eta));
            let mut r1 = 1usize;
            while int((r1 * r1) as i64) < inv {
                r1 += 1;
            }
            assert_eq!(sp.r1, r1);
            assert_eq!(
                sp.s0,
                ceil_pow(inv_f, 3.0 * eta).clamp(sp.r0, sp.r0.max(r1))
            );
            assert!(sp.r0 <= sp.s0 && (sp.s0 <= sp.r1 || sp.s0 == sp.r0));

            // Logarithms: at least 1, within 2^-24 below the true value.
            for (lg, x) in [(&sp.log_inv_eps, inv_f), (&sp.log_r1, r1 as f64)] {
                let truth = x.log2().max(1.0);
                let v = to_f64(lg);
                assert!(v <= truth + 1e-12 && truth - v < 1e-6, "{v} vs {truth}");
            }

            assert_eq!(sp.eps0, &sigma * &eps / int(100 * sp.r0 as i64));
            assert_eq!(sp.eps1, &sp.eps0 / (int(80) * &sp.log_inv_eps));
            assert_eq!(
                sp.eps_hat,
                &sp.eps0 / (int(8 * (sp.t * sp.r1) as i64) * &sp.log_r1)
            );
            for i in [0i64, 1, 5, 17] {
                assert_eq!(sp.delta(i), two_pow(i) * &sp.eps1 / int(4));
            }
            assert_eq!(
                sp.i_lo,
                floor_lg(&(int(2) * &sp.eps_hat / (int(5) * &sp.eps1))).max(0)
            );
            assert_eq!(sp.i_hi, ceil_lg(&(int(4) / &sp.eps1)));

            // ⌊t·r1·max(1, log₂ r1)⌋ = z  ⇔  2^z ≤ r1^(t·r1) < 2^(z+1) for r1 > 2.
            let a = (sp.t * sp.r1) as u64;
            if r1 > 2 {
                let big = BigInt::from(r1).pow(a as u32);
                assert!(BigInt::one() << sp.zone_threshold as usize <= big);
                assert!(BigInt::one() << (sp.zone_threshold + 1) as usize > big);
            } else {
                assert_eq!(sp.zone_threshold, a);
            }

            let n = 64;
            assert_eq!(
                sp.stage2_step(n),
                ceil(&(&cfg.c1 * &eps * int(n as i64)))
                    .to_usize()
                    .unwrap()
                    .max(1)
            );
            assert_eq!(sp.capacity(n), n.div_ceil(r1 * r1).max(1));
        }
    }
}

#[test]
fn config_validation() {
    assert!(Config::default().validate().is_ok());
    let bad = [
        Config {
            c0: rat(1, 4),
            ..Config::default()
        },
        Config {
            c_hat: rat(1, 40),
            ..Config::default()
        },
        Config {
            eta: int(0),
            ..Config::default()
        },
        Config {
            max_attempts: 0,
            ..Config::default()
        },
    ];
    for c in bad {
        assert!(c.validate().is_err());
    }
}

#[test]
fn radial_order_is_clockwise_from_up() {
    for seed in 0..10u64 {
        let ps = common::random_points(15, seed);
        let others: Vec<usize> = (1..15).collect();
        let got = radial_order(&ps, 0, &others);
        let c = (to_f64(&ps[0].x), to_f64(&ps[0].y));
        let angle = |q: usize| {
            let (dx, dy) = (to_f64(&ps[q].x) - c.0, to_f64(&ps[q].y) - c.1);
            let a = dx.atan2(dy);
            if a < 0.0 {
                a + std::f64::consts::TAU
            } else {
                a
            }
        };
        let mut expect = others.clone();
        expect.sort_by(|&a, &b| angle(a).partial_cmp(&angle(b)).unwrap());
        assert_eq!(got, expect, "seed {seed}");
    }
}

#[test]
fn sectors_cover_each_neighbour_three_times() {
    let order: Vec<usize> = (1..=27).collect();
    let cell_of: Vec<usize> = (0..=27).map(|i| i % 2).collect();
    // ⌈2·(1/10)·27⌉ = 6 → blocks 6,6,6,6,3.
    let part = sectors_from_order(0, order.clone(), &cell_of, &rat(1, 10), 27, &rat(1, 2));
    assert_eq!(part.block_size, 6);
    assert_eq!(part.z, 5);
    let mut hits: HashMap<usize, usize> = HashMap::new();
    for s in &part.sectors {
        for &q in s {
            *hits.entry(q).or_default() += 1;
        }
    }
    assert!(order.iter().all(|q| hits[q] == 3));
    for (s, &rich) in part.sectors.iter().zip(&part.rich) {
        let short = s.iter().filter(|&&q| cell_of[q] == cell_of[0]).count();
        assert_eq!(rich, 10 * short * 2 >= 27);
    }
    let whole = sectors_from_order(0, order.clone(), &cell_of, &rat(1, 2), 27, &rat(1, 2));
    assert_eq!(whole.sectors, vec![order]);
}

#[test]
fn nudged_lines_are_parallel_and_empty() {
    let ps = common::random_points(20, 12);
    for a in 0..20 {
        for b in a + 1..20 {
            let base = Line::through(&ps[a], &ps[b]);
            let l = nudged_line(&ps, Segment::new(a, b));
            assert_eq!((&l.a, &l.b), (&base.a, &base.b));
            assert_ne!(l.c, base.c);
            for (s, p) in ps.points().iter().enumerate() {
                assert!(!l.contains(p));
                if s != a && s != b {
                    assert_eq!(l.side(p), base.side(p), "no point between the lines");
                }
            }
        }
    }
}

#[test]
fn rich_graphs_repeat_exactly() {
    let ps = common::random_points(40, 77);
    let cfg = Config {
        seed: 3,
        ..Config::default()
    };
    let (_, t1) = build_weak_net_traced(&ps, &rat(3, 20), &cfg).unwrap();
    let (_, t2) = build_weak_net_traced(&ps, &rat(3, 20), &cfg).unwrap();
    assert_eq!(t1.rich_graphs, t2.rich_graphs);
    assert_eq!(t1, t2);
}

fn check_trace(ps: &PointSet, eps: &Rational, cfg: &Config) {
    let (net, trace) = build_weak_net_traced(ps, eps, cfg).unwrap();
    assert!(is_weak_eps_net(ps, &net, eps).is_net);
    assert!(net.len() <= ps.len() || trace.calls[0].dispatch != Dispatch::Stages);
    let by_id: HashMap<usize, _> = trace.calls.iter().map(|c| (c.id, c)).collect();
    for c in &trace.calls {
        assert!(c.depth <= cfg.depth_cap);
        if let Some(p) = c.parent {
            let parent = by_id[&p];
            assert!(
                c.eps > parent.eps || c.lambda < parent.lambda,
                "call {} made no progress",
                c.id
            );
            assert_eq!(c.depth, parent.depth + 1);
        }
    }
    for f in &trace.fallbacks {
        let parent = by_id[&f.parent];
        assert!(f.eps <= parent.eps && f.lambda >= parent.lambda);
    }
    let params: HashMap<usize, &StageParams> = trace.params.iter().map(|(c, p)| (*c, p)).collect();
    for s in &trace.stage1 {
        assert_eq!(s.threshold, params[&s.call].zone_threshold);
        for e in &s.remaining {
            let l = Line::through(&s.ps[e.a], &s.ps[e.b]);
            assert!(zone_brute_force(&s.decomposition, &l, None, None).len() as u64 <= s.threshold);
        }
        for e in &s.removed {
            let l = Line::through(&s.ps[e.a], &s.ps[e.b]);
            assert!(zone_brute_force(&s.decomposition, &l, None, None).len() as u64 > s.threshold);
        }
    }
}

#[test]
fn build_traces_satisfy_invariants() {
    for seed in 1..=2u64 {
        for n in [24usize, 40] {
            let ps = common::random_points(n, seed * 1000 + n as u64);
            for eps in [rat(3, 20), rat(1, 4), rat(2, 5)] {
                check_trace(
                    &ps,
                    &eps,
                    &Config {
                        seed,
                        ..Config::default()
                    },
                );
            }
        }
    }
}

#[test]
fn small_nets_pass_the_exhaustive_oracle() {
    for seed in 0..4u64 {
        let ps = common::random_points(13, seed);
        for eps in [rat(1, 4), rat(3, 10), rat(2, 5), rat(1, 1)] {
            let net = epsnet_core::improved::build_weak_net(&ps, &eps, &Config::default()).unwrap();
            let q: Vec<Point> = net.iter().map(|(p, _)| p.clone()).collect();
            let threshold = ceil(&(&eps * int(13))).to_usize().unwrap();
            assert!(
                brute_force_unpierced(&ps, &q).unwrap() < threshold,
                "seed {seed} eps {eps}"
            );
        }
    }
    let one = epsnet_core::improved::build_weak_net(
        &common::random_points(9, 1),
        &int(1),
        &Config::default(),
    )
    .unwrap();
    assert_eq!(one.len(), 1);
}

fn random_graph(n: usize, density: f64, seed: u64) -> RestrictionGraph {
    let mut g = common::rng(seed);
    let edges = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| Segment::new(i, j)))
        .filter(|_| g.gen_bool(density))
        .collect();
    RestrictionGraph::new(n, edges)
}

/// Every ⌈εn⌉-subset spanning at least σ·C(⌈εn⌉, 2) edges of Π has a net
/// point in its closed hull.
fn restricted_ok(inst: &Instance, net: &Net) -> bool {
    let n = inst.ps.len();
    let k = ceil(&(&inst.eps * int(n as i64))).to_usize().unwrap();
    let need = &inst.sigma * int((k * (k - 1) / 2) as i64);
    let adj: std::collections::HashSet<(usize, usize)> =
        inst.pi.edges().iter().map(|e| (e.a, e.b)).collect();
    let q: Vec<&Point> = net.iter().map(|(p, _)| p).collect();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let s: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let spanned = s
            .iter()
            .flat_map(|&a| s.iter().map(move |&b| (a, b)))
            .filter(|(a, b)| a < b && adj.contains(&(*a, *b)))
            .count();
        if int(spanned as i64) < need {
            continue;
        }
        let hull = convex_hull(&s.iter().map(|&i| inst.ps[i].clone()).collect::<Vec<_>>());
        if !q
            .iter()
            .any(|x| point_in_hull(x, &hull) != Containment::Outside)
        {
            return false;
        }
    }
    true
}

#[test]
fn sparse_case_pierces_restricted_sets() {
    for seed in 0..6u64 {
        let n = 12 + (seed % 3) as usize;
        let ps = common::random_points(n, 500 + seed);
        for (density, sigma) in [(0.5, rat(1, 2)), (0.3, rat(1, 4)), (0.5, rat(1, 1))] {
            let inst = Instance {
                ps: ps.clone(),
                pi: random_graph(n, density, seed),
                eps: rat(2, 5),
                sigma,
                depth: 0,
            };
            for r in [2usize, 3] {
                let net = sparse_case_net(&inst, r, &Config::default()).unwrap();
                assert!(restricted_ok(&inst, &net), "seed {seed} r {r}");
                assert!(net
                    .iter()
                    .all(|(_, t)| matches!(t, Tag::Stage0 | Tag::Stage1 | Tag::Trivial)));
            }
            let (net, _) = build_instance(&inst, &Config::default()).unwrap();
            assert!(restricted_ok(&inst, &net), "dispatch seed {seed}");
        }
    }
}

#[test]
fn empty_restriction_graph() {
    let ps = common::random_points(30, 4);
    let inst = Instance {
        ps: ps.clone(),
        pi: RestrictionGraph::new(30, Vec::new()),
        eps: rat(2, 5),
        sigma: rat(1, 2),
        depth: 0,
    };
    let (_, trace) = build_instance(&inst, &Config::default()).unwrap();
    assert_eq!(trace.calls[0].dispatch, Dispatch::Sparse);
    assert!(trace.calls[0].lambda.is_zero());
}
