//! Strong ε-nets for triangles by sampling and exhaustive verification.

use num_traits::Signed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{OrientationTable, PointSet};
use crate::rational::{heavy_threshold, to_f64, Rational};

/// Default constant `c` in the sample size `⌈(c/ε̂)·log₂(2/ε̂)⌉`.
pub const DEFAULT_SAMPLE_CONSTANT: f64 = 8.0;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleNet {
    pub picks: Vec<usize>,
    pub eps_hat: Rational,
    pub attempts: usize,
}

pub fn triangle_sample_size(n: usize, eps_hat: &Rational, c: f64) -> usize {
    let e = to_f64(eps_hat);
    let r = ((c / e) * (2.0 / e).log2()).ceil();
    if !r.is_finite() || r >= n as f64 {
        n
    } else {
        (r as usize).max(1)
    }
}

/// True iff every triangle spanned by three points of `ps` whose closed hull
/// holds at least `⌈ε̂n⌉` points of `ps` also holds a pick.
pub fn verify_strong_triangle_net(ps: &PointSet, picks: &[usize], eps_hat: &Rational) -> bool {
    let t = OrientationTable::new(ps.points());
    verify_with_table(&t, picks, eps_hat)
}

fn verify_with_table(t: &OrientationTable, picks: &[usize], eps_hat: &Rational) -> bool {
    let n = t.len();
    let need = heavy_threshold(eps_hat, n) as usize;
    let mut is_pick = vec![false; n];
    for &p in picks {
        is_pick[p] = true;
    }
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let mut count = 0;
                let mut hit = false;
                for (u, &pick) in is_pick.iter().enumerate() {
                    if t.in_closed_triangle(a, b, c, u) {
                        count += 1;
                        hit |= pick;
                    }
                }
                if count >= need && !hit {
                    return false;
                }
            }
        }
    }
    true
}

/// Samples `r` points of `ps` until the sample verifies as a strong
/// `ε̂`-net for triangles.
pub fn build_strong_triangle_net(
    ps: &PointSet,
    eps_hat: &Rational,
    c: f64,
    seed: u64,
    max_attempts: usize,
) -> Result<TriangleNet> {
    if !eps_hat.is_positive() {
        return Err(Error::InvalidParameter("eps_hat must be positive".into()));
    }
    let n = ps.len();
    let r = triangle_sample_size(n, eps_hat, c);
    if r >= n {
        return Ok(TriangleNet {
            picks: (0..n).collect(),
            eps_hat: eps_hat.clone(),
            attempts: 1,
        });
    }
    let t = OrientationTable::new(ps.points());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=max_attempts {
        let mut picks = rand::seq::index::sample(&mut rng, n, r).into_vec();
        picks.sort_unstable();
        if verify_with_table(&t, &picks, eps_hat) {
            return Ok(TriangleNet {
                picks,
                eps_hat: eps_hat.clone(),
                attempts: attempt,
            });
        }
    }
    Err(Error::NetNotFound {
        attempts: max_attempts,
        sample_size: r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use crate::rational::{int, rat};

    fn pts(n: i64) -> PointSet {
        PointSet::new(
            (0..n)
                .map(|i| Point::from_ints(i, (i * i * 5) % 17))
                .collect(),
        )
    }

    #[test]
    fn all_points_verify() {
        let ps = pts(9);
        let all: Vec<usize> = (0..9).collect();
        assert!(verify_strong_triangle_net(&ps, &all, &rat(1, 9)));
        assert!(!verify_strong_triangle_net(&ps, &[], &rat(3, 9)));
        assert!(verify_strong_triangle_net(&ps, &[4], &int(1)));
    }

    #[test]
    fn large_sample_takes_everything() {
        let ps = pts(10);
        let net = build_strong_triangle_net(&ps, &rat(1, 2), 8.0, 1, 5).unwrap();
        assert_eq!(net.picks.len(), 10);
    }
}
