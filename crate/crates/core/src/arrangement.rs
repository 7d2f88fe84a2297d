//! Vertical decompositions of line arrangements, zone queries and cuttings.
//!
//! The decomposition is stored as a table of columns. Column `k` is the open
//! strip between consecutive wall abscissas; inside it the non-vertical lines
//! keep a fixed bottom-to-top order, and `cells[g]` names the trapezoid that
//! owns the gap above the `g` lowest lines. Point location and zone walks use
//! that table directly.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{Line, Point, PointSet};
use crate::rational::{int, midpoint, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trapezoid {
    pub id: usize,
    /// `None` is −∞.
    pub left_x: Option<Rational>,
    /// `None` is +∞.
    pub right_x: Option<Rational>,
    /// Index into `source_lines`; `None` is −∞.
    pub floor: Option<usize>,
    /// Index into `source_lines`; `None` is +∞.
    pub ceiling: Option<usize>,
    pub contained_points: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Column {
    order: Vec<usize>,
    cells: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trapezoidation {
    pub cells: Vec<Trapezoid>,
    pub source_lines: Vec<Line>,
    pub vertices: Vec<Point>,
    /// Cell of each point of the ambient set. A point that sits on a wall
    /// (never on a source line) is charged to the cell on its right.
    pub point_to_cell: Vec<usize>,
    walls: Vec<Rational>,
    columns: Vec<Column>,
    exact: ExactCache,
}

/// A non-vertical line `a·x + b·y = c` with integer coefficients and `b > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct IntLine {
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

impl IntLine {
    fn new(l: &Line) -> Self {
        let den = [&l.a, &l.b, &l.c]
            .iter()
            .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let scale = |r: &Rational| r.numer() * (&den / r.denom());
        let (mut a, mut b, mut c) = (scale(&l.a), scale(&l.b), scale(&l.c));
        if b.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        IntLine { a, b, c }
    }

    /// `y(x)·b·d` for `x = n/d`; comparable across lines after cross-scaling by `b`.
    fn value(&self, x: &(BigInt, BigInt)) -> BigInt {
        &self.c * &x.1 - &self.a * &x.0
    }

    fn slope_cmp(&self, other: &IntLine) -> Ordering {
        // −a/b against −a'/b'.
        (&other.a * &self.b).cmp(&(&self.a * &other.b))
    }

    fn intercept_cmp(&self, other: &IntLine) -> Ordering {
        (&self.c * &other.b).cmp(&(&other.c * &self.b))
    }
}

/// Integer images of the source lines and of every line's height at every wall.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct ExactCache {
    lines: Vec<Option<IntLine>>,
    walls: Vec<(BigInt, BigInt)>,
    values: Vec<Vec<BigInt>>,
}

impl ExactCache {
    fn new(source: &[Line], walls: &[Rational]) -> Self {
        let lines: Vec<Option<IntLine>> = source
            .iter()
            .map(|l| (!l.is_vertical()).then(|| IntLine::new(l)))
            .collect();
        let walls: Vec<(BigInt, BigInt)> = walls
            .iter()
            .map(|w| (w.numer().clone(), w.denom().clone()))
            .collect();
        let values = walls
            .iter()
            .map(|w| {
                lines
                    .iter()
                    .map(|l| l.as_ref().map_or_else(BigInt::zero, |l| l.value(w)))
                    .collect()
            })
            .collect();
        ExactCache {
            lines,
            walls,
            values,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Right,
    Left,
}

enum Probe<'a> {
    NegInf,
    PosInf,
    Wall(usize, Side),
    At(&'a (BigInt, BigInt), Side),
}

fn column_rep(walls: &[Rational], k: usize) -> Rational {
    if walls.is_empty() {
        Rational::zero()
    } else if k == 0 {
        &walls[0] - int(1)
    } else if k == walls.len() {
        &walls[k - 1] + int(1)
    } else {
        midpoint(&walls[k - 1], &walls[k])
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

impl Trapezoidation {
    pub fn walls(&self) -> &[Rational] {
        &self.walls
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Number of walls strictly left of `x`, and whether `x` is itself a wall.
    fn column_of(&self, x: &Rational) -> (usize, bool) {
        match self.walls.binary_search(x) {
            Ok(i) => (i, true),
            Err(i) => (i, false),
        }
    }

    /// Number of lines of `order` strictly below `p`, or `None` if `p` lies on one.
    fn gap_in(&self, order: &[usize], p: &Point) -> Option<usize> {
        let (mut lo, mut hi) = (0usize, order.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.source_lines[order[mid]].y_at(&p.x) < p.y {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        if lo < order.len() && self.source_lines[order[lo]].y_at(&p.x) == p.y {
            return None;
        }
        Some(lo)
    }

    /// The open cell containing `p`, or `None` if `p` is on a line or wall.
    pub fn locate(&self, p: &Point) -> Option<usize> {
        let (k, on_wall) = self.column_of(&p.x);
        let g = self.gap_in(&self.columns[k].order, p)?;
        let right = self.columns[if on_wall { k + 1 } else { k }].cells[g];
        if on_wall && self.columns[k].cells[g] != right {
            return None;
        }
        Some(right)
    }

    fn locate_half_open(&self, p: &Point) -> Option<usize> {
        let (k, on_wall) = self.column_of(&p.x);
        let k = if on_wall { k + 1 } else { k };
        let g = self.gap_in(&self.columns[k].order, p)?;
        Some(self.columns[k].cells[g])
    }

    /// A point strictly inside cell `id`.
    pub fn cell_witness(&self, id: usize) -> Point {
        let (k, g) = self
            .columns
            .iter()
            .enumerate()
            .find_map(|(k, c)| c.cells.iter().position(|&c| c == id).map(|g| (k, g)))
            .expect("cell id out of range");
        let x = column_rep(&self.walls, k);
        let order = &self.columns[k].order;
        let below = (g > 0).then(|| self.source_lines[order[g - 1]].y_at(&x));
        let above = (g < order.len()).then(|| self.source_lines[order[g]].y_at(&x));
        let y = match (below, above) {
            (None, None) => Rational::zero(),
            (Some(b), None) => b + int(1),
            (None, Some(a)) => a - int(1),
            (Some(b), Some(a)) => midpoint(&b, &a),
        };
        Point::new(x, y)
    }

    /// Cells whose open interior meets the closed segment `pq`.
    pub fn zone_of_segment(&self, p: &Point, q: &Point) -> BTreeSet<usize> {
        if p.x == q.x {
            let (lo, hi) = if p.y <= q.y {
                (&p.y, &q.y)
            } else {
                (&q.y, &p.y)
            };
            return self.zone_vertical(&p.x, Some(lo), Some(hi));
        }
        let line = Line::through(p, q);
        let (lo, hi) = if p.x < q.x {
            (&p.x, &q.x)
        } else {
            (&q.x, &p.x)
        };
        self.zone_nonvertical(&line, Some(lo), Some(hi))
    }

    /// Cells whose open interior meets `line`.
    pub fn zone_of_line(&self, line: &Line) -> BTreeSet<usize> {
        match line.vertical_x() {
            Some(x) => self.zone_vertical(x, None, None),
            None => self.zone_nonvertical(line, None, None),
        }
    }

    fn zone_vertical(
        &self,
        x: &Rational,
        lo: Option<&Rational>,
        hi: Option<&Rational>,
    ) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        if self.source_lines.iter().any(|l| l.vertical_x() == Some(x)) {
            return out;
        }
        let (k, _) = self.column_of(x);
        let mut events: Vec<Rational> = self.columns[k]
            .order
            .iter()
            .map(|&i| self.source_lines[i].y_at(x))
            .filter(|y| lo.is_none_or(|l| y > l) && hi.is_none_or(|h| y < h))
            .collect();
        events.dedup();
        for y in piece_reps(&events, lo, hi) {
            if let Some(c) = self.locate(&Point::new(x.clone(), y)) {
                out.insert(c);
            }
        }
        out
    }

    /// Number of lines of column `k` below `l` just beside the probe.
    fn gap_at(&self, k: usize, l: &IntLine, probe: &Probe<'_>) -> usize {
        let order = &self.columns[k].order;
        let ex = &self.exact;
        let lv = match probe {
            Probe::Wall(w, _) => Some(l.value(&ex.walls[*w])),
            Probe::At(x, _) => Some(l.value(x)),
            _ => None,
        };
        order.partition_point(|&ai| {
            let a = ex.lines[ai]
                .as_ref()
                .expect("column lines are non-vertical");
            let by_slope = |side: Side| match (side, a.slope_cmp(l)) {
                (_, Ordering::Equal) => a.intercept_cmp(l) == Ordering::Less,
                (Side::Right, o) => o == Ordering::Less,
                (Side::Left, o) => o == Ordering::Greater,
            };
            match probe {
                Probe::NegInf => by_slope(Side::Left),
                Probe::PosInf => by_slope(Side::Right),
                Probe::Wall(w, side) => {
                    let av = &ex.values[*w][ai];
                    match (av * &l.b).cmp(&(lv.as_ref().unwrap() * &a.b)) {
                        Ordering::Less => true,
                        Ordering::Greater => false,
                        Ordering::Equal => by_slope(*side),
                    }
                }
                Probe::At(x, side) => {
                    let av = a.value(x);
                    match (av * &l.b).cmp(&(lv.as_ref().unwrap() * &a.b)) {
                        Ordering::Less => true,
                        Ordering::Greater => false,
                        Ordering::Equal => by_slope(*side),
                    }
                }
            }
        })
    }

    fn zone_nonvertical(
        &self,
        line: &Line,
        lo: Option<&Rational>,
        hi: Option<&Rational>,
    ) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        if self.source_lines.contains(line) {
            return out;
        }
        if let (Some(l), Some(h)) = (lo, hi) {
            if l == h {
                out.extend(self.locate(&Point::new(l.clone(), line.y_at(l))));
                return out;
            }
        }
        let il = IntLine::new(line);
        let w = self.walls.len();
        let frac = |r: &Rational| (r.numer().clone(), r.denom().clone());
        let lo_f = lo.map(frac);
        let hi_f = hi.map(frac);
        let lo_wall = lo.is_some_and(|x| self.walls.binary_search(x).is_ok());
        let hi_wall = hi.is_some_and(|x| self.walls.binary_search(x).is_ok());
        let kl = lo.map_or(0, |x| self.walls.partition_point(|v| v <= x));
        let kh = hi.map_or(w, |x| self.walls.partition_point(|v| v < x));
        for k in kl..=kh {
            let left = match &lo_f {
                Some(x) if k == kl && !lo_wall => Probe::At(x, Side::Right),
                _ if k == 0 => Probe::NegInf,
                _ => Probe::Wall(k - 1, Side::Right),
            };
            let right = match &hi_f {
                Some(x) if k == kh && !hi_wall => Probe::At(x, Side::Left),
                _ if k == w => Probe::PosInf,
                _ => Probe::Wall(k, Side::Left),
            };
            let g1 = self.gap_at(k, &il, &left);
            let g2 = self.gap_at(k, &il, &right);
            out.extend(
                self.columns[k].cells[g1.min(g2)..=g1.max(g2)]
                    .iter()
                    .copied(),
            );
        }
        out
    }

    /// For every cell, how many of `lines` cross its open interior.
    pub fn crossing_counts(&self, lines: &[Line]) -> Vec<usize> {
        let mut counts = vec![0usize; self.cells.len()];
        for l in lines {
            for c in self.zone_of_line(l) {
                counts[c] += 1;
            }
        }
        counts
    }
}

/// Representatives of the open pieces cut from `(lo, hi)` by sorted `events`.
fn piece_reps(events: &[Rational], lo: Option<&Rational>, hi: Option<&Rational>) -> Vec<Rational> {
    if let (Some(l), Some(h)) = (lo, hi) {
        if l == h {
            return vec![l.clone()];
        }
    }
    let mut reps = Vec::with_capacity(events.len() + 1);
    let first = match (events.first(), lo) {
        (Some(e), Some(l)) => midpoint(l, e),
        (Some(e), None) => e - int(1),
        (None, Some(l)) => match hi {
            Some(h) => midpoint(l, h),
            None => l + int(1),
        },
        (None, None) => match hi {
            Some(h) => h - int(1),
            None => Rational::zero(),
        },
    };
    reps.push(first);
    for w in events.windows(2) {
        reps.push(midpoint(&w[0], &w[1]));
    }
    if let Some(e) = events.last() {
        reps.push(match hi {
            Some(h) => midpoint(e, h),
            None => e + int(1),
        });
    }
    reps
}

fn corners(cells: &[Trapezoid], lines: &[Line]) -> Vec<Point> {
    let mut vs = BTreeSet::new();
    for c in cells {
        for x in [&c.left_x, &c.right_x].into_iter().flatten() {
            for l in [c.floor, c.ceiling].into_iter().flatten() {
                vs.insert(Point::new(x.clone(), lines[l].y_at(x)));
            }
        }
    }
    vs.into_iter().collect()
}

/// Vertical decomposition of the arrangement of `lines`, with the points of
/// `ps` assigned to their cells.
pub fn build_trapezoidation(lines: &[Line], ps: &PointSet) -> Result<Trapezoidation> {
    for (li, l) in lines.iter().enumerate() {
        if let Some(pi) = ps.points().iter().position(|p| l.contains(p)) {
            return Err(Error::LineThroughPoint {
                line: li,
                point: pi,
            });
        }
    }
    let source_lines = lines.to_vec();
    let nonvertical: Vec<usize> = (0..lines.len())
        .filter(|&i| !lines[i].is_vertical())
        .collect();
    let verticals: BTreeSet<Rational> = lines
        .iter()
        .filter_map(|l| l.vertical_x().cloned())
        .collect();

    let mut walls: Vec<Rational> = verticals.iter().cloned().collect();
    for (a, &i) in nonvertical.iter().enumerate() {
        for &j in &nonvertical[a + 1..] {
            if let Some(p) = lines[i].intersection(&lines[j]) {
                walls.push(p.x);
            }
        }
    }
    walls.sort();
    walls.dedup();

    let orders: Vec<Vec<usize>> = (0..=walls.len())
        .map(|k| {
            let x = column_rep(&walls, k);
            let mut keyed: Vec<(Rational, usize)> = nonvertical
                .iter()
                .map(|&i| (lines[i].y_at(&x), i))
                .collect();
            keyed.sort();
            keyed.into_iter().map(|(_, i)| i).collect()
        })
        .collect();

    let gaps = nonvertical.len() + 1;
    let piece = |k: usize, g: usize| k * gaps + g;
    let mut parent: Vec<usize> = (0..(walls.len() + 1) * gaps).collect();
    for (k, xb) in walls.iter().enumerate() {
        if verticals.contains(xb) {
            continue;
        }
        let ys: Vec<Rational> = orders[k].iter().map(|&i| lines[i].y_at(xb)).collect();
        let simple =
            |j: usize| (j == 0 || ys[j - 1] != ys[j]) && (j + 1 == ys.len() || ys[j + 1] != ys[j]);
        for g in 0..gaps {
            let bottom_ok = g == 0 || simple(g - 1);
            let top_ok = g == gaps - 1 || simple(g);
            if bottom_ok && top_ok {
                let a = find(&mut parent, piece(k, g));
                let b = find(&mut parent, piece(k + 1, g));
                if a != b {
                    parent[b.max(a)] = a.min(b);
                }
            }
        }
    }

    let mut id_of_root = vec![usize::MAX; parent.len()];
    let mut cells: Vec<Trapezoid> = Vec::new();
    let mut columns: Vec<Column> = Vec::with_capacity(walls.len() + 1);
    for (k, order) in orders.into_iter().enumerate() {
        let mut col_cells = Vec::with_capacity(gaps);
        for g in 0..gaps {
            let root = find(&mut parent, piece(k, g));
            if id_of_root[root] == usize::MAX {
                id_of_root[root] = cells.len();
                cells.push(Trapezoid {
                    id: cells.len(),
                    left_x: (k > 0).then(|| walls[k - 1].clone()),
                    right_x: None,
                    floor: (g > 0).then(|| order[g - 1]),
                    ceiling: (g < gaps - 1).then(|| order[g]),
                    contained_points: Vec::new(),
                });
            }
            let id = id_of_root[root];
            cells[id].right_x = walls.get(k).cloned();
            col_cells.push(id);
        }
        columns.push(Column {
            order,
            cells: col_cells,
        });
    }

    let vertices = corners(&cells, &source_lines);
    let mut t = Trapezoidation {
        cells,
        source_lines,
        vertices,
        point_to_cell: Vec::new(),
        exact: ExactCache::new(lines, &walls),
        walls,
        columns,
    };
    t.assign_points(ps);
    Ok(t)
}

impl Trapezoidation {
    fn assign_points(&mut self, ps: &PointSet) {
        for c in &mut self.cells {
            c.contained_points.clear();
        }
        self.point_to_cell = ps
            .points()
            .iter()
            .map(|p| {
                self.locate_half_open(p)
                    .expect("point lies on a source line")
            })
            .collect();
        for (i, &c) in self.point_to_cell.iter().enumerate() {
            self.cells[c].contained_points.push(i);
        }
    }
}

/// Splits every cell holding more than `capacity` points of `ps` by vertical
/// walls placed midway between consecutive point abscissas.
pub fn refine_to_capacity(t: &Trapezoidation, ps: &PointSet, capacity: usize) -> Trapezoidation {
    assert!(capacity >= 1, "capacity must be positive");
    // splits[c] = cut abscissas inside cell c (sorted).
    let mut splits: Vec<Vec<Rational>> = vec![Vec::new(); t.cells.len()];
    for c in &t.cells {
        if c.contained_points.len() <= capacity {
            continue;
        }
        let mut xs: Vec<&Rational> = c.contained_points.iter().map(|&i| &ps[i].x).collect();
        xs.sort();
        let mut k = capacity;
        while k < xs.len() {
            splits[c.id].push(midpoint(xs[k - 1], xs[k]));
            k += capacity;
        }
    }
    if splits.iter().all(|s| s.is_empty()) {
        return t.clone();
    }

    let mut new_cells: Vec<Trapezoid> = Vec::new();
    // first new id of each old cell; its pieces are consecutive.
    let mut first_id = vec![0usize; t.cells.len()];
    for c in &t.cells {
        first_id[c.id] = new_cells.len();
        let mut left = c.left_x.clone();
        for x in &splits[c.id] {
            new_cells.push(Trapezoid {
                id: new_cells.len(),
                left_x: left.clone(),
                right_x: Some(x.clone()),
                floor: c.floor,
                ceiling: c.ceiling,
                contained_points: Vec::new(),
            });
            left = Some(x.clone());
        }
        new_cells.push(Trapezoid {
            id: new_cells.len(),
            left_x: left,
            right_x: c.right_x.clone(),
            floor: c.floor,
            ceiling: c.ceiling,
            contained_points: Vec::new(),
        });
    }

    let mut walls: Vec<Rational> = t.walls.clone();
    for s in &splits {
        walls.extend(s.iter().cloned());
    }
    walls.sort();
    walls.dedup();

    let columns: Vec<Column> = (0..=walls.len())
        .map(|k| {
            let x = column_rep(&walls, k);
            let (old_k, _) = t.column_of(&x);
            let old = &t.columns[old_k];
            let cells = old
                .cells
                .iter()
                .map(|&c| first_id[c] + splits[c].partition_point(|s| *s < x))
                .collect();
            Column {
                order: old.order.clone(),
                cells,
            }
        })
        .collect();

    let vertices = corners(&new_cells, &t.source_lines);
    let mut out = Trapezoidation {
        cells: new_cells,
        source_lines: t.source_lines.clone(),
        vertices,
        point_to_cell: Vec::new(),
        exact: ExactCache::new(&t.source_lines, &walls),
        walls,
        columns,
    };
    out.assign_points(ps);
    out
}

/// Independent oracle: does the closed segment of `line` over `[lo, hi]`
/// (`None` = unbounded) meet the open interior of `cell`?
pub fn cell_meets_line_piece(
    t: &Trapezoidation,
    cell: &Trapezoid,
    line: &Line,
    lo: Option<&Rational>,
    hi: Option<&Rational>,
) -> bool {
    if let Some(x) = line.vertical_x() {
        if cell.left_x.as_ref().is_some_and(|l| x <= l)
            || cell.right_x.as_ref().is_some_and(|r| x >= r)
        {
            return false;
        }
        // Interval of y strictly between floor and ceiling at x, against [lo, hi].
        let fy = cell.floor.map(|f| t.source_lines[f].y_at(x));
        let cy = cell.ceiling.map(|c| t.source_lines[c].y_at(x));
        let low_ok = match (&cy, lo) {
            (Some(c), Some(l)) => l < c,
            _ => true,
        };
        let high_ok = match (&fy, hi) {
            (Some(f), Some(h)) => h > f,
            _ => true,
        };
        return low_ok && high_ok && fy.as_ref().zip(cy.as_ref()).is_none_or(|(f, c)| f < c);
    }
    // Feasible x form an interval; each bound carries a "closed" flag.
    let mut lower: Option<(Rational, bool)> = cell.left_x.clone().map(|x| (x, false));
    let mut upper: Option<(Rational, bool)> = cell.right_x.clone().map(|x| (x, false));
    let raise = |b: &mut Option<(Rational, bool)>, v: Rational, closed: bool| match b {
        Some((cur, flag)) if v == *cur => *flag = *flag && closed,
        Some((cur, _)) if v < *cur => {}
        _ => *b = Some((v, closed)),
    };
    let drop = |b: &mut Option<(Rational, bool)>, v: Rational, closed: bool| match b {
        Some((cur, flag)) if v == *cur => *flag = *flag && closed,
        Some((cur, _)) if v > *cur => {}
        _ => *b = Some((v, closed)),
    };
    if let Some(l) = lo {
        raise(&mut lower, l.clone(), true);
    }
    if let Some(h) = hi {
        drop(&mut upper, h.clone(), true);
    }
    // line − floor > 0 and ceiling − line > 0, each of the form s·x + k > 0.
    let lin = |l: &Line| (l.slope(), l.y_at(&Rational::zero()));
    let (ms, mk) = lin(line);
    let mut constraints: Vec<(Rational, Rational)> = Vec::new();
    if let Some(f) = cell.floor {
        let (fs, fk) = lin(&t.source_lines[f]);
        constraints.push((&ms - fs, &mk - fk));
    }
    if let Some(c) = cell.ceiling {
        let (cs, ck) = lin(&t.source_lines[c]);
        constraints.push((cs - &ms, ck - &mk));
    }
    for (s, k) in constraints {
        if s.is_zero() {
            if !k.is_positive() {
                return false;
            }
            continue;
        }
        let root = -k / &s;
        if s.is_positive() {
            raise(&mut lower, root, false);
        } else {
            drop(&mut upper, root, false);
        }
    }
    match (lower, upper) {
        (Some((a, ca)), Some((b, cb))) => a < b || (a == b && ca && cb),
        _ => true,
    }
}

/// Brute-force zone of the closed segment `pq` (or a full line), cell by cell.
pub fn zone_brute_force(
    t: &Trapezoidation,
    line: &Line,
    lo: Option<&Rational>,
    hi: Option<&Rational>,
) -> BTreeSet<usize> {
    t.cells
        .iter()
        .filter(|c| cell_meets_line_piece(t, c, line, lo, hi))
        .map(|c| c.id)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuttingSample {
    pub sample: Vec<Line>,
    /// Positions of the sample inside the deduplicated source list.
    pub indices: Vec<usize>,
    pub threshold: u64,
    pub attempts: usize,
    pub max_crossing: usize,
}

/// `⌊a · max(1, log₂ r)⌋` computed exactly for `a ≥ 0`.
pub fn floor_times_log2(a: &Rational, r: u64) -> u64 {
    if !a.is_positive() {
        return 0;
    }
    if r <= 2 {
        return crate::rational::big_to_u64(&crate::rational::floor(a));
    }
    // Largest k with k ≤ a·log₂ r, i.e. 2^(k·q) ≤ r^p where a = p/q.
    let p = a.numer().to_u64().expect("coefficient too large");
    let q = a.denom().to_u64().expect("coefficient too large");
    let rp = num_traits::pow(BigInt::from(r), p as usize);
    let fits = |k: u64| (BigInt::one() << ((k * q) as usize)) <= rp;
    let mut k = (crate::rational::to_f64(a) * (r as f64).log2())
        .floor()
        .max(0.0) as u64;
    while k > 0 && !fits(k) {
        k -= 1;
    }
    while fits(k + 1) {
        k += 1;
    }
    k
}

/// Crossing bound `⌊4C(m/r)·max(1, log₂ r)⌋`.
pub fn cutting_threshold(m: usize, r: usize, c: &Rational) -> u64 {
    let a = c * int(4) * Rational::new(BigInt::from(m), BigInt::from(r));
    floor_times_log2(&a, r as u64)
}

pub fn dedup_lines(lines: &[Line]) -> Vec<Line> {
    let mut seen = BTreeSet::new();
    lines
        .iter()
        .filter(|l| seen.insert((*l).clone()))
        .cloned()
        .collect()
}

/// Draws uniform `r`-subsets of `source` until one is a verified cutting.
pub fn sample_cutting(
    source: &[Line],
    r: usize,
    c: &Rational,
    seed: u64,
    max_attempts: usize,
) -> Result<CuttingSample> {
    let lines = dedup_lines(source);
    let m = lines.len();
    if r == 0 || r > m {
        return Err(Error::InvalidParameter(format!(
            "cutting sample size {r} outside 1..={m}"
        )));
    }
    let threshold = cutting_threshold(m, r, c);
    let empty = PointSet::new(Vec::new());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=max_attempts {
        let mut indices = rand::seq::index::sample(&mut rng, m, r).into_vec();
        indices.sort_unstable();
        let sample: Vec<Line> = indices.iter().map(|&i| lines[i].clone()).collect();
        let t = build_trapezoidation(&sample, &empty)?;
        let max_crossing = t.crossing_counts(&lines).into_iter().max().unwrap_or(0);
        if max_crossing as u64 <= threshold {
            return Ok(CuttingSample {
                sample,
                indices,
                threshold,
                attempts: attempt,
                max_crossing,
            });
        }
    }
    Err(Error::CuttingNotFound {
        attempts: max_attempts,
        r,
        threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn empty() -> PointSet {
        PointSet::new(Vec::new())
    }

    fn cross() -> Vec<Line> {
        vec![
            Line::from_slope(int(1), int(0)),
            Line::from_slope(int(-1), int(0)),
        ]
    }

    #[test]
    fn no_lines_one_cell() {
        let ps = PointSet::new(vec![Point::from_ints(1, 2), Point::from_ints(3, -1)]);
        let t = build_trapezoidation(&[], &ps).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.cells[0].contained_points, vec![0, 1]);
    }

    #[test]
    fn one_line_two_cells() {
        let t = build_trapezoidation(&[Line::from_slope(rat(1, 2), int(3))], &empty()).unwrap();
        assert_eq!(t.len(), 2);
    }

    #[test]
    fn two_crossing_lines_six_cells() {
        let t = build_trapezoidation(&cross(), &empty()).unwrap();
        assert_eq!(t.len(), 6);
        assert_eq!(t.vertices, vec![Point::from_ints(0, 0)]);
    }

    #[test]
    fn line_through_point_rejected() {
        let ps = PointSet::new(vec![Point::from_ints(2, 2)]);
        assert_eq!(
            build_trapezoidation(&cross(), &ps),
            Err(Error::LineThroughPoint { line: 0, point: 0 })
        );
    }

    #[test]
    fn horizontal_line_zone() {
        let t = build_trapezoidation(&cross(), &empty()).unwrap();
        let z = t.zone_of_line(&Line::from_slope(int(0), int(1)));
        assert_eq!(z.len(), 4);
        assert_eq!(
            z,
            zone_brute_force(&t, &Line::from_slope(int(0), int(1)), None, None)
        );
        assert!(t.zone_of_line(&cross()[0]).is_empty());
    }

    #[test]
    fn segment_inside_one_cell() {
        let t = build_trapezoidation(&cross(), &empty()).unwrap();
        let z = t.zone_of_segment(&Point::from_ints(-1, 5), &Point::from_ints(-1, 6));
        assert_eq!(z.len(), 1);
        let z = t.zone_of_segment(&Point::from_ints(-1, 5), &Point::from_ints(1, 6));
        assert_eq!(z.len(), 2);
    }

    #[test]
    fn refine_splits_overfull_cell() {
        let pts: Vec<Point> = (1..=10).map(|i| Point::from_ints(i, 100 + i * i)).collect();
        let ps = PointSet::new(pts);
        let t = build_trapezoidation(&cross(), &ps).unwrap();
        let r = refine_to_capacity(&t, &ps, 5);
        assert_eq!(r.len(), 7);
        for c in &r.cells {
            assert!(c.contained_points.len() <= 5);
        }
        let same = refine_to_capacity(&t, &ps, 10);
        assert_eq!(same, t);
        let ones = refine_to_capacity(&t, &ps, 1);
        assert_eq!(ones.len(), 6 + 9);
    }

    #[test]
    fn threshold_is_exact_floor() {
        // 4·2·(50/10)·log₂10 = 132.87…
        assert_eq!(cutting_threshold(50, 10, &int(2)), 132);
        assert_eq!(cutting_threshold(2, 2, &int(2)), 8);
        assert_eq!(cutting_threshold(8, 8, &int(1)), 12);
    }

    #[test]
    fn full_sample_has_no_crossings() {
        let s = sample_cutting(&cross(), 2, &int(0), 5, 3).unwrap();
        assert_eq!(s.max_crossing, 0);
        assert_eq!(s.attempts, 1);
        assert_eq!(s.threshold, 0);
    }
}
