//! Equal-count vertical slabs, crowded-set nets and crossing nets on lines.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::geometry::{segment_line_crossing, Line, Point, PointSet, Segment};
use crate::net::{Net, Tag};
use crate::rational::{int, midpoint, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slab {
    /// `None` is −∞.
    pub left_x: Option<Rational>,
    /// `None` is +∞.
    pub right_x: Option<Rational>,
    /// Point indices, in increasing x.
    pub points: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlabDecomposition {
    pub lines: Vec<Line>,
    pub slabs: Vec<Slab>,
    pub r: usize,
}

impl SlabDecomposition {
    pub fn separators(&self) -> Vec<&Rational> {
        self.lines.iter().filter_map(|l| l.vertical_x()).collect()
    }

    /// Index of the slab whose open x-range contains `x`.
    pub fn slab_of_x(&self, x: &Rational) -> Option<usize> {
        self.slabs.iter().position(|s| {
            s.left_x.as_ref().is_none_or(|l| x > l) && s.right_x.as_ref().is_none_or(|r| x < r)
        })
    }
}

fn sorted_by_x(ps: &PointSet, indices: &[usize]) -> Vec<usize> {
    let mut idx = indices.to_vec();
    idx.sort_by(|&a, &b| ps[a].x.cmp(&ps[b].x));
    idx
}

/// Splits an x-sorted run into `groups` balanced consecutive groups.
fn balanced(run: &[usize], groups: usize) -> Vec<&[usize]> {
    let (q, extra) = (run.len() / groups, run.len() % groups);
    let mut out = Vec::with_capacity(groups);
    let mut at = 0;
    for g in 0..groups {
        let size = q + usize::from(g < extra);
        out.push(&run[at..at + size]);
        at += size;
    }
    out
}

fn assemble(ps: &PointSet, groups: Vec<Vec<usize>>) -> SlabDecomposition {
    let mut slabs: Vec<Slab> = Vec::with_capacity(groups.len());
    let mut lines = Vec::new();
    for (g, pts) in groups.iter().enumerate() {
        let left_x = slabs.last().and_then(|s: &Slab| s.right_x.clone());
        let right_x = groups.get(g + 1).map(|next| {
            let x = midpoint(&ps[*pts.last().unwrap()].x, &ps[next[0]].x);
            lines.push(Line::vertical(x.clone()));
            x
        });
        slabs.push(Slab {
            left_x,
            right_x,
            points: pts.clone(),
        });
    }
    let r = lines.len();
    SlabDecomposition { lines, slabs, r }
}

/// `r` vertical lines splitting `ps` into `r + 1` slabs of
/// `⌊n/(r+1)⌋..=⌈n/(r+1)⌉` points; `r` is clamped to `n − 1`.
pub fn build_slabs(ps: &PointSet, r: usize) -> Result<SlabDecomposition> {
    if ps.is_empty() {
        return Err(Error::TooFewPoints);
    }
    if r == 0 {
        return Err(Error::InvalidParameter(
            "slab count r must be positive".into(),
        ));
    }
    let r = r.min(ps.len() - 1);
    let all: Vec<usize> = (0..ps.len()).collect();
    let run = sorted_by_x(ps, &all);
    let groups = balanced(&run, r + 1)
        .into_iter()
        .map(<[usize]>::to_vec)
        .collect();
    Ok(assemble(ps, groups))
}

/// Splits every slab of `coarse` into `k` balanced sub-slabs, so the result's
/// lines contain the lines of `coarse`.
pub fn refine_slabs(ps: &PointSet, coarse: &SlabDecomposition, k: usize) -> SlabDecomposition {
    let k = k.max(1);
    let mut groups = Vec::new();
    for s in &coarse.slabs {
        let parts = k.min(s.points.len().max(1));
        for g in balanced(&s.points, parts) {
            groups.push(g.to_vec());
        }
    }
    assemble(ps, groups)
}

/// Builds a sub-net on one instance: `(points, eps) -> net`.
pub type Recurse<'a> = dyn Fn(&PointSet, &Rational) -> Result<Net> + 'a;

/// Pierces every convex set holding `≥ eps_prime·n` points of one slab of
/// `Λ(r)` by recursing into each slab with `min(1, eps_prime·n/n_τ)`.
pub fn crowded_net(
    ps: &PointSet,
    r: usize,
    eps_prime: &Rational,
    tag: Tag,
    recurse: &Recurse<'_>,
) -> Result<Net> {
    let slabs = build_slabs(ps, r)?;
    crowded_net_on(ps, &slabs, eps_prime, tag, recurse)
}

/// [`crowded_net`] over a prebuilt slab decomposition.
pub fn crowded_net_on(
    ps: &PointSet,
    slabs: &SlabDecomposition,
    eps_prime: &Rational,
    tag: Tag,
    recurse: &Recurse<'_>,
) -> Result<Net> {
    if *eps_prime <= Rational::zero() {
        return Err(Error::InvalidParameter(
            "crowded-net parameter must be positive".into(),
        ));
    }
    let n = ps.len();
    if n <= 2 * slabs.r {
        return Ok(Net::from_points(ps.points().to_vec(), tag));
    }
    let mut out = Net::new();
    for s in &slabs.slabs {
        if s.points.is_empty() {
            continue;
        }
        let eps_tau = (eps_prime * int(n as i64) / int(s.points.len() as i64)).min(Rational::one());
        let sub = ps.subset(&s.points);
        out.extend_tagged(recurse(&sub, &eps_tau)?, tag);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossingNet {
    pub line: Line,
    pub picks: Vec<Point>,
    pub step: usize,
}

/// Height at which the open segment `pq` crosses the vertical `x = c`.
fn vertical_crossing_y(p: &Point, q: &Point, c: &Rational) -> Option<Rational> {
    let lp = &p.x < c;
    let lq = &q.x < c;
    if &p.x == c || &q.x == c || lp == lq {
        return None;
    }
    Some(&p.y + (c - &p.x) * (&q.y - &p.y) / (&q.x - &p.x))
}

/// Every `step`-th (1-indexed) crossing of `line` with the open segments,
/// in increasing y; ties are broken by segment position.
pub fn line_crossing_net(line: &Line, segments: &[(Point, Point)], step: usize) -> CrossingNet {
    let mut crossings: Vec<(Point, usize)> = Vec::new();
    if step > 0 {
        for (i, (p, q)) in segments.iter().enumerate() {
            let hit = match line.vertical_x() {
                Some(c) => vertical_crossing_y(p, q, c).map(|y| Point::new(c.clone(), y)),
                None => segment_line_crossing(p, q, line),
            };
            if let Some(h) = hit {
                crossings.push((h, i));
            }
        }
        crossings.sort_by(|a, b| {
            a.0.y
                .cmp(&b.0.y)
                .then(a.0.x.cmp(&b.0.x))
                .then(a.1.cmp(&b.1))
        });
    }
    let picks = crossings
        .into_iter()
        .skip(step.saturating_sub(1))
        .step_by(step.max(1))
        .map(|(p, _)| p)
        .collect();
    CrossingNet {
        line: line.clone(),
        picks,
        step,
    }
}

/// [`line_crossing_net`] over edges of a point set.
pub fn line_crossing_net_edges(
    line: &Line,
    ps: &PointSet,
    edges: &[Segment],
    step: usize,
) -> CrossingNet {
    let segs: Vec<(Point, Point)> = edges
        .iter()
        .map(|e| (ps[e.a].clone(), ps[e.b].clone()))
        .collect();
    line_crossing_net(line, &segs, step)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(n: i64) -> PointSet {
        PointSet::new((1..=n).map(|i| Point::from_ints(i, i * i % 7)).collect())
    }

    fn counts(d: &SlabDecomposition) -> Vec<usize> {
        d.slabs.iter().map(|s| s.points.len()).collect()
    }

    #[test]
    fn slab_examples() {
        assert_eq!(counts(&build_slabs(&row(10), 4).unwrap()), vec![2; 5]);
        let c = counts(&build_slabs(&row(10), 3).unwrap());
        assert_eq!(c.iter().sum::<usize>(), 10);
        assert!(c.iter().all(|&k| k == 2 || k == 3));
        let d = build_slabs(&row(3), 5).unwrap();
        assert_eq!(d.r, 2);
        assert_eq!(counts(&d), vec![1, 1, 1]);
        assert_eq!(
            build_slabs(&PointSet::new(vec![]), 2),
            Err(Error::TooFewPoints)
        );
    }

    #[test]
    fn refinement_keeps_coarse_lines() {
        let ps = row(20);
        let coarse = build_slabs(&ps, 2).unwrap();
        let fine = refine_slabs(&ps, &coarse, 3);
        for l in &coarse.lines {
            assert!(fine.lines.contains(l));
        }
        assert_eq!(fine.slabs.len(), 9);
    }

    fn single(ps: &PointSet, _eps: &Rational) -> Result<Net> {
        Ok(Net::from_points(vec![ps[0].clone()], Tag::Trivial))
    }

    #[test]
    fn crowded_base_case() {
        let ps = row(10);
        let q = crowded_net(&ps, 4, &crate::rational::rat(1, 5), Tag::Stage0, &single).unwrap();
        assert_eq!(q.len(), 5);
        assert!(q.tags.iter().all(|&t| t == Tag::Stage0));
        assert!(matches!(
            crowded_net(&ps, 4, &Rational::zero(), Tag::Stage0, &single),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn crossing_indexing() {
        let segs: Vec<(Point, Point)> = (1..=10)
            .map(|y| (Point::from_ints(-1, y), Point::from_ints(1, y)))
            .collect();
        let l = Line::vertical(int(0));
        let ys = |n: CrossingNet| n.picks.into_iter().map(|p| p.y).collect::<Vec<_>>();
        assert_eq!(
            ys(line_crossing_net(&l, &segs, 3)),
            vec![int(3), int(6), int(9)]
        );
        assert!(line_crossing_net(&l, &segs, 0).picks.is_empty());
        assert_eq!(line_crossing_net(&l, &segs, 1).picks.len(), 10);
    }
}
