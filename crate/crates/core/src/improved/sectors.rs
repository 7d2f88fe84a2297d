//! Radial sectors around a point and the rich-edge graphs built from them.

use std::cmp::Ordering;

use num_traits::ToPrimitive;

use crate::geometry::{orient, Orientation, PointSet, Segment};
use crate::rational::{ceil, int, Rational};

use super::params::StageParams;
use super::RestrictionGraph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorPartition {
    pub center: usize,
    /// Neighbours in clockwise order, starting from the upward vertical.
    pub radial_order: Vec<usize>,
    pub block_size: usize,
    pub z: usize,
    pub sectors: Vec<Vec<usize>>,
    pub rich: Vec<bool>,
}

/// Clockwise order of `others` around `p`, starting from straight up.
pub fn radial_order(ps: &PointSet, p: usize, others: &[usize]) -> Vec<usize> {
    let c = &ps[p];
    // Half 0: directions with angle in [0, π) measured clockwise from up.
    let half = |q: usize| {
        let d = &ps[q];
        if d.x > c.x || (d.x == c.x && d.y > c.y) {
            0
        } else {
            1
        }
    };
    let mut order: Vec<usize> = others.iter().copied().filter(|&q| q != p).collect();
    order.sort_by(|&a, &b| {
        half(a)
            .cmp(&half(b))
            .then_with(|| match orient(c, &ps[a], &ps[b]) {
                Orientation::Clockwise => Ordering::Less,
                Orientation::CounterClockwise => Ordering::Greater,
                Orientation::Collinear => a.cmp(&b),
            })
    });
    order
}

/// Blocks of `⌈2δn⌉` consecutive neighbours; each sector spans three
/// consecutive blocks cyclically, or the whole plane when there are fewer
/// than three blocks.
pub fn sectors_from_order(
    center: usize,
    radial_order: Vec<usize>,
    cell_of: &[usize],
    delta: &Rational,
    n: usize,
    eps_hat: &Rational,
) -> SectorPartition {
    let block_size = ceil(&(int(2) * delta * int(n as i64)))
        .to_usize()
        .unwrap_or(usize::MAX)
        .max(1);
    let blocks: Vec<&[usize]> = radial_order.chunks(block_size).collect();
    let z = blocks.len();
    let sectors: Vec<Vec<usize>> = if z < 3 {
        vec![radial_order.clone()]
    } else {
        (0..z)
            .map(|j| {
                (0..3)
                    .flat_map(|d| blocks[(j + d) % z].iter().copied())
                    .collect()
            })
            .collect()
    };
    let need = eps_hat * int(n as i64);
    let rich = sectors
        .iter()
        .map(|s| {
            let short = s.iter().filter(|&&q| cell_of[q] == cell_of[center]).count();
            int(10 * short as i64) >= need
        })
        .collect();
    SectorPartition {
        center,
        radial_order,
        block_size,
        z,
        sectors,
        rich,
    }
}

pub fn sector_partition(
    ps: &PointSet,
    p: usize,
    tau_points: &[usize],
    cell_of: &[usize],
    delta: &Rational,
    n: usize,
    eps_hat: &Rational,
) -> SectorPartition {
    sectors_from_order(
        p,
        radial_order(ps, p, tau_points),
        cell_of,
        delta,
        n,
        eps_hat,
    )
}

/// Precomputed radial orders of every point of a slab.
pub struct RadialOrders {
    orders: Vec<(usize, Vec<usize>)>,
}

impl RadialOrders {
    pub fn new(ps: &PointSet, tau_points: &[usize]) -> Self {
        RadialOrders {
            orders: tau_points
                .iter()
                .map(|&p| (p, radial_order(ps, p, tau_points)))
                .collect(),
        }
    }
}

/// `Π(i)`: every edge `pq` with `q` in a rich sector of `p` (either endpoint).
pub fn build_rich_graph(
    ps: &PointSet,
    tau_points: &[usize],
    cell_of: &[usize],
    i: i64,
    params: &StageParams,
    n: usize,
) -> RestrictionGraph {
    rich_graph_from_orders(
        &RadialOrders::new(ps, tau_points),
        ps.len(),
        cell_of,
        i,
        params,
        n,
    )
}

pub fn rich_graph_from_orders(
    orders: &RadialOrders,
    universe: usize,
    cell_of: &[usize],
    i: i64,
    params: &StageParams,
    n: usize,
) -> RestrictionGraph {
    let delta = params.delta(i);
    let mut edges = Vec::new();
    for (p, order) in &orders.orders {
        let part = sectors_from_order(*p, order.clone(), cell_of, &delta, n, &params.eps_hat);
        for (s, rich) in part.sectors.iter().zip(&part.rich) {
            if *rich {
                edges.extend(s.iter().map(|&q| Segment::new(*p, q)));
            }
        }
    }
    RestrictionGraph::new(universe, edges)
}
