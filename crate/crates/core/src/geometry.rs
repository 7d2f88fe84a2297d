//! Exact planar primitives.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rational::{int, pow2, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(int(x), int(y))
    }

    /// `(xn/xd, yn/yd)` from four integers.
    pub fn from_fracs(xn: i64, xd: i64, yn: i64, yd: i64) -> Self {
        Point::new(crate::rational::rat(xn, xd), crate::rational::rat(yn, yd))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    CounterClockwise,
    Collinear,
    Clockwise,
}

impl Orientation {
    fn from_sign(s: Sign) -> Self {
        match s {
            Sign::Plus => Orientation::CounterClockwise,
            Sign::NoSign => Orientation::Collinear,
            Sign::Minus => Orientation::Clockwise,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Orientation::CounterClockwise => 1,
            Orientation::Collinear => 0,
            Orientation::Clockwise => -1,
        }
    }
}

fn sign_of(r: &Rational) -> Sign {
    if r.is_positive() {
        Sign::Plus
    } else if r.is_negative() {
        Sign::Minus
    } else {
        Sign::NoSign
    }
}

pub fn orient(a: &Point, b: &Point, c: &Point) -> Orientation {
    let det = (&b.x - &a.x) * (&c.y - &a.y) - (&b.y - &a.y) * (&c.x - &a.x);
    Orientation::from_sign(sign_of(&det))
}

/// A point in homogeneous integer coordinates `(x/w, y/w)` with `w > 0`.
///
/// Orientation on these avoids the gcd normalisation of rational arithmetic,
/// which dominates the verifier's running time.
#[derive(Clone, Debug)]
pub struct HomPoint {
    pub x: BigInt,
    pub y: BigInt,
    pub w: BigInt,
}

impl HomPoint {
    pub fn from_point(p: &Point) -> Self {
        let (xn, xd) = (p.x.numer(), p.x.denom());
        let (yn, yd) = (p.y.numer(), p.y.denom());
        if xd == yd {
            return HomPoint {
                x: xn.clone(),
                y: yn.clone(),
                w: xd.clone(),
            };
        }
        HomPoint {
            x: xn * yd,
            y: yn * xd,
            w: xd * yd,
        }
    }
}

/// The 3×3 homogeneous determinant: `w_a·w_b·w_c` times the affine one.
pub fn det_h(a: &HomPoint, b: &HomPoint, c: &HomPoint) -> BigInt {
    let m1 = &b.x * &c.y - &c.x * &b.y;
    let m2 = &b.x * &c.w - &c.x * &b.w;
    let m3 = &b.y * &c.w - &c.y * &b.w;
    &a.x * &m3 - &a.y * &m2 + &a.w * &m1
}

/// Sign of the 3×3 homogeneous determinant; agrees with [`orient`].
pub fn orient_h(a: &HomPoint, b: &HomPoint, c: &HomPoint) -> i8 {
    match det_h(a, b, c).sign() {
        Sign::Plus => 1,
        Sign::NoSign => 0,
        Sign::Minus => -1,
    }
}

/// Orientation of every ordered triple of a point set, precomputed.
#[derive(Clone, Debug)]
pub struct OrientationTable {
    n: usize,
    signs: Vec<i8>,
}

impl OrientationTable {
    pub fn new(ps: &[Point]) -> Self {
        let n = ps.len();
        let hp: Vec<HomPoint> = ps.iter().map(HomPoint::from_point).collect();
        let mut signs = vec![0i8; n * n * n];
        let at = |a: usize, b: usize, c: usize| (a * n + b) * n + c;
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let s = orient_h(&hp[a], &hp[b], &hp[c]);
                    for (x, y, z, sign) in [
                        (a, b, c, s),
                        (b, c, a, s),
                        (c, a, b, s),
                        (b, a, c, -s),
                        (a, c, b, -s),
                        (c, b, a, -s),
                    ] {
                        signs[at(x, y, z)] = sign;
                    }
                }
            }
        }
        OrientationTable { n, signs }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `1`, `0` or `-1` for counterclockwise, collinear, clockwise.
    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> i8 {
        self.signs[(a * self.n + b) * self.n + c]
    }

    /// Whether `u` lies in the closed triangle `abc` (any orientation).
    #[inline]
    pub fn in_closed_triangle(&self, a: usize, b: usize, c: usize, u: usize) -> bool {
        let s = self.get(a, b, c);
        let (b, c) = if s < 0 { (c, b) } else { (b, c) };
        self.get(a, b, u) >= 0 && self.get(b, c, u) >= 0 && self.get(c, a, u) >= 0
    }
}

/// The locus `a·x + b·y = c`, scaled so the first nonzero of `(a, b)` is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl Line {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Self {
        assert!(!(a.is_zero() && b.is_zero()), "line needs a nonzero normal");
        let lead = if a.is_zero() { b.clone() } else { a.clone() };
        Line {
            a: a / &lead,
            b: b / &lead,
            c: c / &lead,
        }
    }

    pub fn through(p: &Point, q: &Point) -> Self {
        let a = &q.y - &p.y;
        let b = &p.x - &q.x;
        let c = &a * &p.x + &b * &p.y;
        Line::new(a, b, c)
    }

    pub fn vertical(x: Rational) -> Self {
        Line {
            a: Rational::one(),
            b: Rational::zero(),
            c: x,
        }
    }

    /// `y = slope·x + intercept`.
    pub fn from_slope(slope: Rational, intercept: Rational) -> Self {
        Line::new(-slope, Rational::one(), intercept)
    }

    pub fn is_vertical(&self) -> bool {
        self.b.is_zero()
    }

    /// For a vertical line, its abscissa.
    pub fn vertical_x(&self) -> Option<&Rational> {
        if self.is_vertical() {
            Some(&self.c)
        } else {
            None
        }
    }

    /// `a·x + b·y − c`.
    pub fn eval(&self, p: &Point) -> Rational {
        &self.a * &p.x + &self.b * &p.y - &self.c
    }

    pub fn side(&self, p: &Point) -> Ordering {
        self.eval(p).cmp(&Rational::zero())
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.eval(p).is_zero()
    }

    /// Slope of a non-vertical line.
    pub fn slope(&self) -> Rational {
        -(&self.a / &self.b)
    }

    /// Height at `x` of a non-vertical line.
    pub fn y_at(&self, x: &Rational) -> Rational {
        (&self.c - &self.a * x) / &self.b
    }

    pub fn intersection(&self, other: &Line) -> Option<Point> {
        let det = &self.a * &other.b - &self.b * &other.a;
        if det.is_zero() {
            return None;
        }
        let x = (&self.c * &other.b - &self.b * &other.c) / &det;
        let y = (&self.a * &other.c - &self.c * &other.a) / &det;
        Some(Point::new(x, y))
    }

    /// Same line shifted so that its `c` grows by `delta`.
    pub fn shifted(&self, delta: &Rational) -> Line {
        Line {
            a: self.a.clone(),
            b: self.b.clone(),
            c: &self.c + delta,
        }
    }
}

/// An edge of the complete graph on a point set, by index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Segment {
    pub a: usize,
    pub b: usize,
}

impl Segment {
    /// Stored with `a < b`.
    pub fn new(a: usize, b: usize) -> Self {
        assert_ne!(a, b, "segment endpoints must differ");
        if a < b {
            Segment { a, b }
        } else {
            Segment { a: b, b: a }
        }
    }
}

/// Crossing of the open segment `pq` with `line`, if transversal.
pub fn segment_line_crossing(p: &Point, q: &Point, line: &Line) -> Option<Point> {
    let sp = line.eval(p);
    let sq = line.eval(q);
    if sp.is_zero() || sq.is_zero() || sp.is_positive() == sq.is_positive() {
        return None;
    }
    let t = &sp / (&sp - &sq);
    Some(Point::new(
        &p.x + &t * (&q.x - &p.x),
        &p.y + &t * (&q.y - &p.y),
    ))
}

/// Counterclockwise hull without collinear vertices (monotone chain).
pub fn convex_hull(ps: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = ps.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && orient(&lower[lower.len() - 2], &lower[lower.len() - 1], p)
                != Orientation::CounterClockwise
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && orient(&upper[upper.len() - 2], &upper[upper.len() - 1], p)
                != Orientation::CounterClockwise
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Containment {
    Interior,
    Boundary,
    Outside,
}

fn on_closed_segment(q: &Point, a: &Point, b: &Point) -> bool {
    orient(a, b, q) == Orientation::Collinear
        && q.x >= a.x.clone().min(b.x.clone())
        && q.x <= a.x.clone().max(b.x.clone())
        && q.y >= a.y.clone().min(b.y.clone())
        && q.y <= a.y.clone().max(b.y.clone())
}

pub fn point_in_hull(q: &Point, hull: &[Point]) -> Containment {
    match hull.len() {
        0 => Containment::Outside,
        1 => {
            if *q == hull[0] {
                Containment::Boundary
            } else {
                Containment::Outside
            }
        }
        2 => {
            if on_closed_segment(q, &hull[0], &hull[1]) {
                Containment::Boundary
            } else {
                Containment::Outside
            }
        }
        k => {
            let mut boundary = false;
            for i in 0..k {
                match orient(&hull[i], &hull[(i + 1) % k], q) {
                    Orientation::Clockwise => return Containment::Outside,
                    Orientation::Collinear => boundary = true,
                    Orientation::CounterClockwise => {}
                }
            }
            if boundary {
                Containment::Boundary
            } else {
                Containment::Interior
            }
        }
    }
}

/// Points plus a certificate that no three are collinear and all
/// x-coordinates differ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointSet {
    points: Vec<Point>,
    general_position: bool,
}

impl PointSet {
    /// Wraps points without certifying them.
    pub fn new(points: Vec<Point>) -> Self {
        PointSet {
            points,
            general_position: false,
        }
    }

    /// Wraps points, certifying them if they pass the exact check.
    pub fn checked(points: Vec<Point>) -> Self {
        let general_position = is_general_position(&points);
        PointSet {
            points,
            general_position,
        }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_general_position(&self) -> bool {
        self.general_position
    }

    /// The subset at `indices`; general position is inherited.
    pub fn subset(&self, indices: &[usize]) -> PointSet {
        PointSet {
            points: indices.iter().map(|&i| self.points[i].clone()).collect(),
            general_position: self.general_position,
        }
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }
}

impl std::ops::Index<usize> for PointSet {
    type Output = Point;
    fn index(&self, i: usize) -> &Point {
        &self.points[i]
    }
}

/// Exact check: distinct x-coordinates and no collinear triple.
pub fn is_general_position(ps: &[Point]) -> bool {
    let mut xs: Vec<&Rational> = ps.iter().map(|p| &p.x).collect();
    xs.sort();
    if xs.windows(2).any(|w| w[0] == w[1]) {
        return false;
    }
    let hs: Vec<HomPoint> = ps.iter().map(HomPoint::from_point).collect();
    let n = hs.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if orient_h(&hs[i], &hs[j], &hs[k]) == 0 {
                    return false;
                }
            }
        }
    }
    true
}

const PERTURB_RETRIES: usize = 16;
const PERTURB_BITS: usize = 20;

fn min_positive_gap(vals: &mut [Rational]) -> Option<Rational> {
    vals.sort();
    vals.windows(2)
        .map(|w| &w[1] - &w[0])
        .filter(|d| d.is_positive())
        .min()
}

/// Returns `ps` certified, perturbing it by a seeded amount below
/// `2^-40` times the smallest nonzero coordinate gap when needed.
pub fn ensure_general_position(ps: PointSet, seed: u64) -> Result<PointSet> {
    if ps.general_position || is_general_position(&ps.points) {
        return Ok(PointSet {
            points: ps.points,
            general_position: true,
        });
    }
    let mut sorted = ps.points.clone();
    sorted.sort();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::PerturbationFailed {
            reason: "input contains duplicate points".into(),
        });
    }
    let mut coords: Vec<Rational> = ps.points.iter().map(|p| p.x.clone()).collect();
    let gx = min_positive_gap(&mut coords);
    let mut coords: Vec<Rational> = ps.points.iter().map(|p| p.y.clone()).collect();
    let gy = min_positive_gap(&mut coords);
    let gap = match (gx, gy) {
        (Some(a), Some(b)) => a.min(b),
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => Rational::one(),
    };
    // Each offset is k/2^20 · gap/2^40 with |k| < 2^20, so strictly below gap/2^40.
    let unit = gap * pow2(-40) * pow2(-(PERTURB_BITS as i64));
    let bound: i64 = (1 << PERTURB_BITS) - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..PERTURB_RETRIES {
        let pts: Vec<Point> = ps
            .points
            .iter()
            .map(|p| {
                let kx = rng.gen_range(-bound..=bound);
                let ky = rng.gen_range(-bound..=bound);
                Point::new(
                    &p.x + &unit * Rational::from_integer(BigInt::from(kx)),
                    &p.y + &unit * Rational::from_integer(BigInt::from(ky)),
                )
            })
            .collect();
        if is_general_position(&pts) {
            return Ok(PointSet {
                points: pts,
                general_position: true,
            });
        }
    }
    Err(Error::PerturbationFailed {
        reason: format!("still degenerate after {PERTURB_RETRIES} attempts"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn p(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    fn square() -> Vec<Point> {
        vec![p(0, 0), p(1, 0), p(1, 1), p(0, 1)]
    }

    #[test]
    fn orientation_examples() {
        assert_eq!(
            orient(&p(0, 0), &p(1, 0), &p(0, 1)),
            Orientation::CounterClockwise
        );
        assert_eq!(orient(&p(0, 0), &p(1, 1), &p(2, 2)), Orientation::Collinear);
        assert_eq!(orient(&p(0, 0), &p(0, 1), &p(1, 0)), Orientation::Clockwise);
    }

    #[test]
    fn homogeneous_orientation_agrees() {
        let a = Point::from_fracs(1, 3, -2, 7);
        let b = Point::from_fracs(5, 2, 1, 9);
        let c = Point::from_fracs(-4, 5, 3, 4);
        let h = |q: &Point| HomPoint::from_point(q);
        assert_eq!(orient_h(&h(&a), &h(&b), &h(&c)), orient(&a, &b, &c).as_i8());
        assert_eq!(orient_h(&h(&a), &h(&c), &h(&b)), orient(&a, &c, &b).as_i8());
    }

    #[test]
    fn crossing_examples() {
        let v = Line::vertical(int(0));
        assert_eq!(
            segment_line_crossing(&p(-1, 0), &p(1, 0), &v),
            Some(p(0, 0))
        );
        assert_eq!(segment_line_crossing(&p(1, 0), &p(2, 0), &v), None);
        assert_eq!(segment_line_crossing(&p(0, 0), &p(0, 1), &v), None);
        assert_eq!(segment_line_crossing(&p(0, 0), &p(1, 1), &v), None);
    }

    #[test]
    fn lines_are_canonical() {
        let l1 = Line::through(&p(0, 0), &p(2, 2));
        let l2 = Line::through(&p(3, 3), &p(-1, -1));
        assert_eq!(l1, l2);
        assert_eq!(l1.a, int(1));
        let v = Line::through(&p(4, 0), &p(4, 9));
        assert_eq!(v, Line::vertical(int(4)));
        assert_eq!(Line::from_slope(int(1), int(0)).y_at(&int(3)), int(3));
    }

    #[test]
    fn hull_examples() {
        let mut pts = square();
        pts.push(Point::from_fracs(1, 2, 1, 2));
        let h = convex_hull(&pts);
        assert_eq!(h.len(), 4);
        for i in 0..4 {
            assert_eq!(
                orient(&h[i], &h[(i + 1) % 4], &h[(i + 2) % 4]),
                Orientation::CounterClockwise
            );
        }
        assert_eq!(
            convex_hull(&[p(0, 0), p(1, 1), p(2, 2)]),
            vec![p(0, 0), p(2, 2)]
        );
        assert_eq!(convex_hull(&[p(3, 4)]), vec![p(3, 4)]);
    }

    #[test]
    fn containment_examples() {
        let h = convex_hull(&square());
        assert_eq!(
            point_in_hull(&Point::from_fracs(1, 2, 1, 2), &h),
            Containment::Interior
        );
        assert_eq!(
            point_in_hull(&Point::new(rat(1, 2), int(0)), &h),
            Containment::Boundary
        );
        assert_eq!(point_in_hull(&p(2, 2), &h), Containment::Outside);
        assert_eq!(point_in_hull(&p(0, 0), &h), Containment::Boundary);
        let seg = convex_hull(&[p(0, 0), p(2, 2)]);
        assert_eq!(point_in_hull(&p(1, 1), &seg), Containment::Boundary);
        assert_eq!(point_in_hull(&p(3, 3), &seg), Containment::Outside);
    }

    #[test]
    fn general_position_examples() {
        let ps = ensure_general_position(PointSet::new(square()), 1).unwrap();
        assert!(ps.is_general_position());
        assert!(is_general_position(ps.points()));
        assert_ne!(ps.points(), &square()[..]);

        let generic = vec![p(0, 0), p(1, 1), p(2, 3)];
        let out = ensure_general_position(PointSet::new(generic.clone()), 1).unwrap();
        assert_eq!(out.points(), &generic[..]);
        assert!(out.is_general_position());

        let dup = vec![p(0, 0), p(0, 0), p(1, 1)];
        assert!(matches!(
            ensure_general_position(PointSet::new(dup), 1),
            Err(Error::PerturbationFailed { .. })
        ));
    }

    #[test]
    fn perturbation_is_tiny_and_seeded() {
        let a = ensure_general_position(PointSet::new(square()), 9).unwrap();
        let b = ensure_general_position(PointSet::new(square()), 9).unwrap();
        assert_eq!(a, b);
        let limit = pow2(-40);
        for (orig, moved) in square().iter().zip(a.points()) {
            assert!((&moved.x - &orig.x).abs() < limit);
            assert!((&moved.y - &orig.y).abs() < limit);
        }
    }
}
