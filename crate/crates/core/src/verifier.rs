//! Exact weak-net verification: the largest subset of `P` whose closed convex
//! hull contains no net point.

use num_bigint::Sign;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{
    convex_hull, point_in_hull, Containment, HomPoint, OrientationTable, Point, PointSet,
};
use crate::net::Net;
use crate::rational::{heavy_threshold, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub max_unpierced: usize,
    pub witness: Vec<usize>,
    pub threshold: u64,
    pub is_net: bool,
}

/// Orientation of every P-triple and of every P-pair against every Q point.
struct Tables {
    n: usize,
    nq: usize,
    p3: OrientationTable,
    pq: Vec<i8>,
}

impl Tables {
    fn new(ps: &[Point], q: &[Point]) -> Self {
        let n = ps.len();
        let nq = q.len();
        let hp: Vec<HomPoint> = ps.iter().map(HomPoint::from_point).collect();
        let hq: Vec<HomPoint> = q.iter().map(HomPoint::from_point).collect();
        let p3 = OrientationTable::new(ps);
        let mut pq = vec![0i8; n * n * nq];
        let rows: Vec<(usize, usize, Vec<i8>)> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|(a, b)| {
                // The triple product a·(b×q) equals q·(a×b).
                let (pa, pb) = (&hp[a], &hp[b]);
                let cx = &pa.y * &pb.w - &pa.w * &pb.y;
                let cy = &pa.w * &pb.x - &pa.x * &pb.w;
                let cw = &pa.x * &pb.y - &pa.y * &pb.x;
                let signs = hq
                    .iter()
                    .map(|h| match (&cx * &h.x + &cy * &h.y + &cw * &h.w).sign() {
                        Sign::Plus => 1,
                        Sign::NoSign => 0,
                        Sign::Minus => -1,
                    })
                    .collect();
                (a, b, signs)
            })
            .collect();
        for (a, b, signs) in rows {
            for (k, s) in signs.into_iter().enumerate() {
                pq[(a * n + b) * nq + k] = s;
                pq[(b * n + a) * nq + k] = -s;
            }
        }
        Tables { n, nq, p3, pq }
    }

    fn o(&self, a: usize, b: usize, c: usize) -> i8 {
        self.p3.get(a, b, c)
    }

    fn oq(&self, a: usize, b: usize, k: usize) -> i8 {
        self.pq[(a * self.n + b) * self.nq + k]
    }

    /// Closed triangle `abc` (counterclockwise) contains no Q point.
    fn triangle_clear(&self, a: usize, b: usize, c: usize) -> bool {
        (0..self.nq).all(|k| self.oq(a, b, k) < 0 || self.oq(b, c, k) < 0 || self.oq(c, a, k) < 0)
    }

    /// Closed segment `ab` contains no Q point.
    fn segment_clear(&self, ps: &[Point], q: &[Point], a: usize, b: usize) -> bool {
        (0..self.nq).all(|k| {
            self.oq(a, b, k) != 0
                || point_in_hull(&q[k], &[ps[a].clone(), ps[b].clone()]) == Containment::Outside
        })
    }
}

/// Best convex polygon anchored at its lowest vertex `v`: (count, vertices).
fn best_with_anchor(t: &Tables, ps: &[Point], v: usize) -> (usize, Vec<usize>) {
    let n = t.n;
    let pv = &ps[v];
    let mut above: Vec<usize> = (0..n)
        .filter(|&u| u != v && (ps[u].y > pv.y || (ps[u].y == pv.y && ps[u].x > pv.x)))
        .collect();
    above.sort_by(|&a, &b| 0.cmp(&t.o(v, a, b)));
    let m = above.len();
    let mut f = vec![0usize; m * m];
    let mut parent = vec![usize::MAX; m * m];
    let mut best = (0usize, Vec::new());
    for j in 0..m {
        for i in 0..j {
            let (a, b) = (above[i], above[j]);
            if !t.triangle_clear(v, a, b) {
                continue;
            }
            let inside = (0..n)
                .filter(|&u| u != v && u != a && u != b)
                .filter(|&u| t.o(v, a, u) > 0 && t.o(a, b, u) > 0 && t.o(b, v, u) > 0)
                .count();
            let mut base = 2;
            let mut from = usize::MAX;
            for k in 0..i {
                let fk = f[k * m + i];
                if fk > base && t.o(above[k], a, b) > 0 {
                    base = fk;
                    from = k;
                }
            }
            let val = base + 1 + inside;
            f[i * m + j] = val;
            parent[i * m + j] = from;
            if val > best.0 {
                let mut chain = vec![b, a];
                let (mut ci, mut cj) = (i, j);
                while parent[ci * m + cj] != usize::MAX {
                    let k = parent[ci * m + cj];
                    chain.push(above[k]);
                    cj = ci;
                    ci = k;
                }
                chain.push(v);
                chain.reverse();
                best = (val, chain);
            }
        }
    }
    best
}

/// Largest `S ⊆ P` with `conv(S) ∩ Q = ∅` (closed hull), with a witness.
///
/// No three points of `P` may be collinear; `Q` is arbitrary.
pub fn max_unpierced_subset(ps: &PointSet, q: &[Point]) -> (usize, Vec<usize>) {
    let pts = ps.points();
    let n = pts.len();
    if q.is_empty() {
        return (n, (0..n).collect());
    }
    let t = Tables::new(pts, q);

    let mut best: (usize, Vec<usize>) = (0, Vec::new());
    if let Some(p) = (0..n).find(|&p| !q.contains(&pts[p])) {
        best = (1, vec![p]);
    }
    'pairs: for a in 0..n {
        for b in a + 1..n {
            if t.segment_clear(pts, q, a, b) {
                best = (2, vec![a, b]);
                break 'pairs;
            }
        }
    }
    let per_anchor: Vec<(usize, Vec<usize>)> = (0..n)
        .into_par_iter()
        .map(|v| best_with_anchor(&t, pts, v))
        .collect();
    for cand in per_anchor {
        if cand.0 > best.0 {
            best = cand;
        }
    }

    let (size, vertices) = best;
    let witness = if size <= 2 {
        vertices
    } else {
        let hull = convex_hull(&vertices.iter().map(|&i| pts[i].clone()).collect::<Vec<_>>());
        (0..n)
            .filter(|&u| point_in_hull(&pts[u], &hull) != Containment::Outside)
            .collect()
    };
    let hull = convex_hull(&witness.iter().map(|&i| pts[i].clone()).collect::<Vec<_>>());
    assert_eq!(
        witness.len(),
        size,
        "witness recount disagrees with the fan DP"
    );
    assert!(
        q.iter()
            .all(|x| point_in_hull(x, &hull) == Containment::Outside),
        "witness hull contains a net point"
    );
    (size, witness)
}

pub const BRUTE_FORCE_LIMIT: usize = 16;

/// Exhaustive maximum over all `2^n` subsets.
pub fn brute_force_unpierced(ps: &PointSet, q: &[Point]) -> Result<usize> {
    let n = ps.len();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let mut best = 0usize;
    for mask in 1u32..(1u32 << n) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let sub: Vec<Point> = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| ps[i].clone())
            .collect();
        let hull = convex_hull(&sub);
        if q.iter()
            .all(|x| point_in_hull(x, &hull) == Containment::Outside)
        {
            best = size;
        }
    }
    Ok(best)
}

pub fn is_weak_eps_net(ps: &PointSet, net: &Net, eps: &Rational) -> VerifyReport {
    let (max_unpierced, witness) = max_unpierced_subset(ps, &net.points);
    let threshold = heavy_threshold(eps, ps.len());
    VerifyReport {
        max_unpierced,
        witness,
        threshold,
        is_net: (max_unpierced as u64) < threshold,
    }
}
