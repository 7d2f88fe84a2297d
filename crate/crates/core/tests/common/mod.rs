#![allow(dead_code)]

use epsnet_core::rational::{rat, Rational};
use epsnet_core::{ensure_general_position, Line, Point, PointSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` random points on a `1/1000` grid, perturbed into general position.
pub fn random_points(n: usize, seed: u64) -> PointSet {
    let mut r = rng(seed);
    let mut pts = Vec::new();
    while pts.len() < n {
        let p = Point::new(
            rat(r.gen_range(0..1000), 1000),
            rat(r.gen_range(0..1000), 1000),
        );
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    ensure_general_position(PointSet::new(pts), seed).unwrap()
}

/// `n` points in general position, plus `k` query points, all jointly generic.
pub fn points_and_queries(n: usize, k: usize, seed: u64) -> (PointSet, Vec<Point>) {
    let all = random_points(n + k, seed).into_points();
    let (p, q) = all.split_at(n);
    (PointSet::new(p.to_vec()), q.to_vec())
}

/// Non-vertical lines with no two parallel, no three concurrent and
/// pairwise intersections at distinct abscissae.
pub fn generic_lines(r: usize, seed: u64) -> Vec<Line> {
    let mut g = rng(seed);
    'retry: loop {
        let lines: Vec<Line> = (0..r)
            .map(|_| Line::from_slope(rat(g.gen_range(-40..40), 7), rat(g.gen_range(-60..60), 11)))
            .collect();
        let mut xs: Vec<Rational> = Vec::new();
        for i in 0..r {
            for j in i + 1..r {
                match lines[i].intersection(&lines[j]) {
                    Some(p) if !xs.contains(&p.x) => xs.push(p.x),
                    _ => continue 'retry,
                }
            }
        }
        return lines;
    }
}
