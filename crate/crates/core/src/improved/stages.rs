//! Stages 0–3 of one recursive instance, and the sparse-case net.

use std::cell::Cell;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::arrangement::{
    build_trapezoidation, refine_to_capacity, sample_cutting, Trapezoidation,
};
use crate::error::Result;
use crate::geometry::{det_h, HomPoint, Line, Point, PointSet, Segment};
use crate::net::{Net, Tag};
use crate::rational::{floor, heavy_threshold, int, Rational};
use crate::slab::{
    build_slabs, crowded_net_on, line_crossing_net, line_crossing_net_edges, refine_slabs,
    SlabDecomposition,
};
use crate::triangle_net::build_strong_triangle_net;

use super::params::{mix, StageParams};
use super::sectors::{rich_graph_from_orders, RadialOrders};
use super::{Builder, Instance, Origin, RestrictionGraph, RichGraphRecord, Stage1Record};

const SALT_STAGE0: u64 = 1;
const SALT_STAGE1: u64 = 2;
const SALT_CUTTING: u64 = 3;
const SALT_QS0: u64 = 4;
const SALT_TRIANGLE: u64 = 5;
const SALT_SPARSE: u64 = 6;

/// Runs a crowded net whose slab recursions go through `b.child`.
fn crowded(
    b: &Builder<'_>,
    inst: &Instance,
    call: usize,
    slabs: &SlabDecomposition,
    eps_prime: &Rational,
    tag: Tag,
    seed: u64,
) -> Result<Net> {
    let k = Cell::new(0u64);
    let recurse = |sub: &PointSet, e: &Rational| {
        let idx = k.get();
        k.set(idx + 1);
        let child = Instance::top(sub.clone(), e.clone());
        let child = Instance {
            depth: inst.depth + 1,
            ..child
        };
        b.child(call, inst, child, Origin::Crowded, mix(seed, idx))
    };
    crowded_net_on(&inst.ps, slabs, eps_prime, tag, &recurse)
}

/// `Λ(r0)` and the net `Q0` piercing `(C0·σ·ε)`-crowded sets.
pub fn stage0(
    b: &Builder<'_>,
    inst: &Instance,
    params: &StageParams,
    call: usize,
) -> Result<(Net, SlabDecomposition)> {
    let slabs = build_slabs(&inst.ps, params.r0)?;
    let eps_prime = &params.c0 * &inst.sigma * &inst.eps;
    let q0 = crowded(
        b,
        inst,
        call,
        &slabs,
        &eps_prime,
        Tag::Stage0,
        params.sample_seed(SALT_STAGE0),
    )?;
    Ok((q0, slabs))
}

/// The line through an edge, shifted parallel by half the smallest gap to
/// any other point so that it passes through no point of `ps`.
pub fn nudged_line(ps: &PointSet, e: Segment) -> Line {
    let hs: Vec<HomPoint> = ps.points().iter().map(HomPoint::from_point).collect();
    nudged_line_h(ps, &hs, e)
}

/// [`nudged_line`] for every edge, sharing the integer point images.
pub fn nudged_lines(ps: &PointSet, edges: &[Segment]) -> Vec<Line> {
    let hs: Vec<HomPoint> = ps.points().iter().map(HomPoint::from_point).collect();
    edges.iter().map(|&e| nudged_line_h(ps, &hs, e)).collect()
}

fn nudged_line_h(ps: &PointSet, hs: &[HomPoint], e: Segment) -> Line {
    let line = Line::through(&ps[e.a], &ps[e.b]);
    // |line.eval(s)| is proportional to |det(a, b, s)| / w_s, so the closest
    // point is found with integer arithmetic and evaluated exactly once.
    let (ha, hb) = (&hs[e.a], &hs[e.b]);
    let mut best: Option<(usize, BigInt)> = None;
    for s in (0..ps.len()).filter(|&s| s != e.a && s != e.b) {
        let d = det_h(ha, hb, &hs[s]).abs();
        let closer = match &best {
            None => true,
            Some((t, dt)) => &d * &hs[*t].w < dt * &hs[s].w,
        };
        if closer {
            best = Some((s, d));
        }
    }
    let delta = match best {
        Some((s, _)) => line.eval(&ps[s]).abs() / int(2),
        None => int(1),
    };
    line.shifted(&delta)
}

#[derive(Clone, Debug)]
pub struct Stage1Output {
    pub q1: Net,
    pub pi_remaining: RestrictionGraph,
    pub sample: Vec<Line>,
    pub decomposition: Trapezoidation,
}

/// Samples `R1`, builds `Σ(r1)` from `R1 ∪ Y(s0)` refined to `⌈n/r1²⌉` points
/// per cell, removes the edges whose lines cross too many cells, and recurses
/// on them with `σ/2`.
pub fn stage1(
    b: &Builder<'_>,
    inst: &Instance,
    params: &StageParams,
    call: usize,
    slabs_s0: &SlabDecomposition,
) -> Result<Stage1Output> {
    let ps = &inst.ps;
    let n = ps.len();
    let edges = inst.pi.edges();
    let source = nudged_lines(ps, edges);
    let sample = if source.is_empty() {
        Vec::new()
    } else {
        let r = params.r1.min(source.len());
        sample_cutting(
            &source,
            r,
            &params.c_cut,
            params.sample_seed(SALT_CUTTING),
            b.config().max_attempts,
        )?
        .sample
    };
    let mut lines = sample.clone();
    lines.extend(slabs_s0.lines.iter().cloned());
    let coarse = build_trapezoidation(&lines, ps)?;
    let sigma = refine_to_capacity(&coarse, ps, params.capacity(n));

    let threshold = params.zone_threshold;
    let (mut removed, mut remaining) = (Vec::new(), Vec::new());
    for &e in edges {
        let zone = sigma.zone_of_line(&Line::through(&ps[e.a], &ps[e.b])).len();
        if zone as u64 > threshold {
            removed.push(e);
        } else {
            remaining.push(e);
        }
    }
    b.record_stage1(Stage1Record {
        call,
        threshold,
        sample: sample.clone(),
        decomposition: sigma.clone(),
        ps: ps.clone(),
        removed: removed.clone(),
        remaining: remaining.clone(),
    });

    let sub = Instance {
        ps: ps.clone(),
        pi: RestrictionGraph::new(n, removed),
        eps: inst.eps.clone(),
        sigma: &inst.sigma / int(2),
        depth: inst.depth + 1,
    };
    let q1 = b.child(
        call,
        inst,
        sub,
        Origin::Stage1,
        params.sample_seed(SALT_STAGE1),
    )?;
    Ok(Stage1Output {
        q1: Net::from_points(q1.points, Tag::Stage1),
        pi_remaining: RestrictionGraph::new(n, remaining),
        sample,
        decomposition: sigma,
    })
}

/// Trapezoid corners of `Σ(r1)`, the crossings `X` of `Y(r0)` with the sample,
/// and every `⌈C1·ε·n⌉`-th crossing of each `Y(r0)` line with `P × X`.
pub fn stage2(
    params: &StageParams,
    slabs_r0: &SlabDecomposition,
    sample: &[Line],
    sigma: &Trapezoidation,
    ps: &PointSet,
) -> Net {
    let mut q2 = Net::from_points(sigma.vertices.clone(), Tag::Stage2);
    let mut x_pts: Vec<Point> = Vec::new();
    for l0 in &slabs_r0.lines {
        for s in sample {
            if let Some(p) = l0.intersection(s) {
                x_pts.push(p);
            }
        }
    }
    for p in &x_pts {
        q2.push(p.clone(), Tag::Stage2);
    }
    let segments: Vec<(Point, Point)> = ps
        .points()
        .iter()
        .flat_map(|p| x_pts.iter().map(move |x| (p.clone(), x.clone())))
        .collect();
    let step = params.stage2_step(ps.len());
    for l0 in &slabs_r0.lines {
        for p in line_crossing_net(l0, &segments, step).picks {
            q2.push(p, Tag::Stage2);
        }
    }
    q2
}

/// `Q(s0)`, the strong triangle net, and the rich-graph crossing nets
/// `Q_L(i)` for every slab of `Λ(r0)` and every `i ∈ I`.
pub fn stage3(
    b: &Builder<'_>,
    inst: &Instance,
    params: &StageParams,
    call: usize,
    slabs_r0: &SlabDecomposition,
    slabs_s0: &SlabDecomposition,
    sigma: &Trapezoidation,
) -> Result<Net> {
    let ps = &inst.ps;
    let n = ps.len();
    let eps_qs0 = &params.c_hat * &params.eps1;
    let mut q3 = crowded(
        b,
        inst,
        call,
        slabs_s0,
        &eps_qs0,
        Tag::Stage3Qs0,
        params.sample_seed(SALT_QS0),
    )?;

    let tri = build_strong_triangle_net(
        ps,
        &(&params.c_hat * &params.eps_hat),
        f64::from(b.config().triangle_c),
        params.sample_seed(SALT_TRIANGLE),
        b.config().max_attempts,
    )?;
    for i in tri.picks {
        q3.push(ps[i].clone(), Tag::Stage3Triangle);
    }

    for (ti, tau) in slabs_r0.slabs.iter().enumerate() {
        let inside: Vec<&Line> = slabs_s0
            .lines
            .iter()
            .filter(|l| {
                let x = l.vertical_x().expect("slab lines are vertical");
                tau.left_x.as_ref().is_none_or(|a| x > a)
                    && tau.right_x.as_ref().is_none_or(|c| x < c)
            })
            .collect();
        let orders = RadialOrders::new(ps, &tau.points);
        for i in params.interval() {
            let g = rich_graph_from_orders(&orders, n, &sigma.point_to_cell, i, params, n);
            b.record_rich(RichGraphRecord {
                call,
                slab: ti,
                i,
                edges: g.len(),
                digest: g.digest(),
            });
            if g.is_empty() {
                continue;
            }
            let step = params.stage3_step(i, n);
            for l in &inside {
                for p in line_crossing_net_edges(l, ps, g.edges(), step).picks {
                    q3.push(p, Tag::Stage3QLi);
                }
            }
        }
    }
    Ok(q3)
}

pub(crate) fn run_stages(b: &Builder<'_>, inst: &Instance, call: usize, seed: u64) -> Result<Net> {
    let params = StageParams::derive(&inst.eps, &inst.sigma, b.config(), seed);
    b.record_params(call, &params);
    let (q0, slabs_r0) = stage0(b, inst, &params, call)?;
    let per = (params.s0 + 1).div_ceil(params.r0 + 1);
    let slabs_s0 = refine_slabs(&inst.ps, &slabs_r0, per);
    let s1 = stage1(b, inst, &params, call, &slabs_s0)?;
    let q2 = stage2(&params, &slabs_r0, &s1.sample, &s1.decomposition, &inst.ps);
    let q3 = stage3(
        b,
        inst,
        &params,
        call,
        &slabs_r0,
        &slabs_s0,
        &s1.decomposition,
    )?;

    let mut q = q0;
    q.extend(s1.q1);
    q.extend(q2);
    q.extend(q3);
    Ok(q)
}

/// Net for a sparse restriction graph: a crowded net for `Λ(r)` with `σε/4`, plus every
/// `⌊σ·C(⌈εn⌉, 2)/(2r)⌋`-th crossing of each slab line with `Π`.
pub fn sparse_case_net(inst: &Instance, r: usize, cfg: &super::Config) -> Result<Net> {
    let b = Builder::new(cfg);
    sparse_in(&b, inst, r, 0, cfg.seed)
}

pub(crate) fn sparse_in(
    b: &Builder<'_>,
    inst: &Instance,
    r: usize,
    call: usize,
    seed: u64,
) -> Result<Net> {
    let ps = &inst.ps;
    let n = ps.len();
    if n <= 2 * r {
        return Ok(Net::from_points(ps.points().to_vec(), Tag::Trivial));
    }
    let slabs = build_slabs(ps, r)?;
    let eps_prime = &inst.sigma * &inst.eps / int(4);
    let mut q = crowded(
        b,
        inst,
        call,
        &slabs,
        &eps_prime,
        Tag::Stage0,
        mix(seed, SALT_SPARSE),
    )?;
    let k = heavy_threshold(&inst.eps, n);
    let pairs = int((k * k.saturating_sub(1) / 2) as i64);
    let quota = &inst.sigma * pairs / int(2 * slabs.r as i64);
    // A positive quota below 1 still forces one crossing: take all of them.
    let step = if quota.is_positive() {
        floor(&quota).to_usize().unwrap_or(usize::MAX).max(1)
    } else {
        0
    };
    for l in &slabs.lines {
        for p in line_crossing_net_edges(l, ps, inst.pi.edges(), step).picks {
            q.push(p, Tag::Stage1);
        }
    }
    Ok(q)
}
