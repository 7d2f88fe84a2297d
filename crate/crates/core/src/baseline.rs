//! The trivial net and the quadratic divide-and-conquer net.

use num_traits::One;

use crate::geometry::{Line, Point, PointSet};
use crate::net::{Net, Tag};
use crate::rational::{big_to_u64, floor, heavy_threshold, int, midpoint, Rational};
use crate::slab::line_crossing_net;

pub fn trivial_net(ps: &PointSet) -> Net {
    Net::from_points(ps.points().to_vec(), Tag::Trivial)
}

/// Lowest point, ties broken by smaller x.
pub fn lowest_point(ps: &PointSet) -> Option<&Point> {
    ps.points()
        .iter()
        .min_by(|a, b| a.y.cmp(&b.y).then(a.x.cmp(&b.x)))
}

/// Splits at the vertical median, takes every `⌊ε²n²/16⌋`-th crossing of the
/// median with the edges, and recurses on both halves with `4ε/3`.
pub fn quadratic_net(ps: &PointSet, eps: &Rational) -> Net {
    let n = ps.len();
    if n == 0 {
        return Net::new();
    }
    if *eps >= Rational::one() {
        return Net::from_points(vec![lowest_point(ps).unwrap().clone()], Tag::Trivial);
    }
    if heavy_threshold(eps, n) <= 1 {
        return trivial_net(ps);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| ps[a].x.cmp(&ps[b].x));
    let half = n / 2;
    let median = Line::vertical(midpoint(&ps[order[half - 1]].x, &ps[order[half]].x));
    let (left, right) = order.split_at(half);

    let nn = int(n as i64);
    let step = big_to_u64(&floor(&(eps * eps * &nn * &nn / int(16)))).max(1) as usize;
    let segments: Vec<(Point, Point)> = left
        .iter()
        .flat_map(|&a| right.iter().map(move |&b| (a, b)))
        .map(|(a, b)| (ps[a].clone(), ps[b].clone()))
        .collect();
    let mut out = Net::from_points(
        line_crossing_net(&median, &segments, step).picks,
        Tag::QuadLine,
    );

    let sub_eps = eps * int(4) / int(3);
    for side in [left, right] {
        let mut idx = side.to_vec();
        idx.sort_unstable();
        out.extend_tagged(quadratic_net(&ps.subset(&idx), &sub_eps), Tag::QuadRecurse);
    }
    out
}

/// `B(ε) = 1` for `ε ≥ 1`, else `2·B(4ε/3) + ⌈16/ε²⌉`.
pub fn quadratic_bound(eps: &Rational) -> u64 {
    if *eps >= Rational::one() {
        return 1;
    }
    let add = big_to_u64(&crate::rational::ceil(&(int(16) / (eps * eps))));
    2 * quadratic_bound(&(eps * int(4) / int(3))) + add
}
