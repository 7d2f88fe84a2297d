//! The improved recursive construction over instances `(P, Π, ε, σ)`.

mod params;
mod sectors;
mod stages;

use std::cell::RefCell;
use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arrangement::Trapezoidation;
use crate::baseline::{quadratic_net, trivial_net};
use crate::error::{Error, Result};
use crate::geometry::{Line, PointSet, Segment};
use crate::net::{Net, Tag};
use crate::rational::{heavy_threshold, int, Rational};

pub use params::{mix, Config, StageParams};
pub use sectors::{
    build_rich_graph, radial_order, rich_graph_from_orders, sector_partition, sectors_from_order,
    RadialOrders, SectorPartition,
};
pub use stages::{
    nudged_line, nudged_lines, sparse_case_net, stage0, stage1, stage2, stage3, Stage1Output,
};

/// The edge set `Π` of an instance, over point indices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RestrictionGraph {
    n: usize,
    edges: Vec<Segment>,
}

impl RestrictionGraph {
    /// Sorted and deduplicated.
    pub fn new(n: usize, mut edges: Vec<Segment>) -> Self {
        assert!(edges.iter().all(|e| e.b < n), "edge endpoint out of range");
        edges.sort_unstable();
        edges.dedup();
        RestrictionGraph { n, edges }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| Segment { a, b }))
            .collect();
        RestrictionGraph { n, edges }
    }

    pub fn edges(&self) -> &[Segment] {
        &self.edges
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// `λ = |Π| / C(n, 2)`; zero when `n < 2`.
    pub fn density(&self) -> Rational {
        let pairs = self.n * self.n.saturating_sub(1) / 2;
        if pairs == 0 {
            return Rational::zero();
        }
        Rational::new(BigInt::from(self.edges.len()), BigInt::from(pairs))
    }

    pub fn digest(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.hash(&mut h);
        h.finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub ps: PointSet,
    pub pi: RestrictionGraph,
    pub eps: Rational,
    pub sigma: Rational,
    pub depth: usize,
}

impl Instance {
    /// The top-level instance: `Π` complete, `σ = 1`.
    pub fn top(ps: PointSet, eps: Rational) -> Self {
        let pi = RestrictionGraph::complete(ps.len());
        Instance {
            ps,
            pi,
            eps,
            sigma: Rational::one(),
            depth: 0,
        }
    }

    fn validate(&self) -> Result<()> {
        if !self.eps.is_positive() {
            return Err(Error::InvalidParameter("eps must be positive".into()));
        }
        if !self.sigma.is_positive() || self.sigma > Rational::one() {
            return Err(Error::InvalidParameter("sigma must lie in (0, 1]".into()));
        }
        if self.pi.universe() != self.ps.len() {
            return Err(Error::InvalidParameter(
                "restriction graph size differs from |P|".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dispatch {
    Empty,
    Quadratic,
    Trivial,
    Sparse,
    DepthCap,
    Stages,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Origin {
    Root,
    Crowded,
    Stage1,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CallRecord {
    pub id: usize,
    pub parent: Option<usize>,
    pub origin: Origin,
    pub eps: Rational,
    pub lambda: Rational,
    pub sigma: Rational,
    pub n: usize,
    pub depth: usize,
    pub dispatch: Dispatch,
    pub clamped: bool,
}

/// A sub-instance that would not have made progress, served by the quadratic net.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FallbackRecord {
    pub parent: usize,
    pub origin: Origin,
    pub eps: Rational,
    pub lambda: Rational,
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stage1Record {
    pub call: usize,
    pub threshold: u64,
    pub sample: Vec<Line>,
    pub decomposition: Trapezoidation,
    pub ps: PointSet,
    pub removed: Vec<Segment>,
    pub remaining: Vec<Segment>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RichGraphRecord {
    pub call: usize,
    pub slab: usize,
    pub i: i64,
    pub edges: usize,
    pub digest: u64,
}

/// Everything a build did, for invariant checks and reporting.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BuildTrace {
    pub calls: Vec<CallRecord>,
    pub params: Vec<(usize, StageParams)>,
    pub stage1: Vec<Stage1Record>,
    pub rich_graphs: Vec<RichGraphRecord>,
    pub fallbacks: Vec<FallbackRecord>,
}

pub struct Builder<'c> {
    cfg: &'c Config,
    trace: RefCell<BuildTrace>,
}

impl<'c> Builder<'c> {
    pub fn new(cfg: &'c Config) -> Self {
        Builder {
            cfg,
            trace: RefCell::new(BuildTrace::default()),
        }
    }

    pub fn config(&self) -> &Config {
        self.cfg
    }

    pub fn into_trace(self) -> BuildTrace {
        self.trace.into_inner()
    }

    pub fn build(&self, inst: &Instance) -> Result<Net> {
        self.cfg.validate()?;
        inst.validate()?;
        self.build_call(inst, None, Origin::Root, self.cfg.seed)
    }

    fn build_call(
        &self,
        inst: &Instance,
        parent: Option<usize>,
        origin: Origin,
        seed: u64,
    ) -> Result<Net> {
        let n = inst.ps.len();
        let id = {
            let mut tr = self.trace.borrow_mut();
            let id = tr.calls.len();
            tr.calls.push(CallRecord {
                id,
                parent,
                origin,
                eps: inst.eps.clone(),
                lambda: inst.pi.density(),
                sigma: inst.sigma.clone(),
                n,
                depth: inst.depth,
                dispatch: Dispatch::Empty,
                clamped: false,
            });
            id
        };
        let set_dispatch = |d: Dispatch| self.trace.borrow_mut().calls[id].dispatch = d;

        if n == 0 {
            return Ok(Net::new());
        }
        let mut net = if inst.eps >= self.cfg.eps_tilde {
            set_dispatch(Dispatch::Quadratic);
            quadratic_net(&inst.ps, &inst.eps)
        } else if heavy_threshold(&inst.eps, n) <= 1 || &inst.eps * int(n as i64) < Rational::one()
        {
            set_dispatch(Dispatch::Trivial);
            return Ok(trivial_net(&inst.ps));
        } else if inst.pi.density() <= inst.eps {
            set_dispatch(Dispatch::Sparse);
            let params = StageParams::derive(&inst.eps, &inst.sigma, self.cfg, seed);
            stages::sparse_in(self, inst, params.r_sparse, id, seed)?
        } else if inst.depth >= self.cfg.depth_cap {
            set_dispatch(Dispatch::DepthCap);
            quadratic_net(&inst.ps, &inst.eps)
        } else {
            set_dispatch(Dispatch::Stages);
            stages::run_stages(self, inst, id, seed)?
        };
        net.dedup();
        if net.len() >= n {
            self.trace.borrow_mut().calls[id].clamped = true;
            net = Net::from_points(inst.ps.points().to_vec(), Tag::Clamp);
        }
        Ok(net)
    }

    /// Recurses into `sub` if it strictly increases ε or strictly decreases λ
    /// relative to `parent`; otherwise serves it with the quadratic net.
    pub(crate) fn child(
        &self,
        parent_id: usize,
        parent: &Instance,
        sub: Instance,
        origin: Origin,
        seed: u64,
    ) -> Result<Net> {
        let lambda = sub.pi.density();
        if sub.eps > parent.eps || lambda < parent.pi.density() {
            self.build_call(&sub, Some(parent_id), origin, seed)
        } else {
            self.trace.borrow_mut().fallbacks.push(FallbackRecord {
                parent: parent_id,
                origin,
                eps: sub.eps.clone(),
                lambda,
                n: sub.ps.len(),
            });
            Ok(quadratic_net(&sub.ps, &sub.eps))
        }
    }

    pub(crate) fn record_params(&self, call: usize, p: &StageParams) {
        self.trace.borrow_mut().params.push((call, p.clone()));
    }

    pub(crate) fn record_stage1(&self, r: Stage1Record) {
        self.trace.borrow_mut().stage1.push(r);
    }

    pub(crate) fn record_rich(&self, r: RichGraphRecord) {
        self.trace.borrow_mut().rich_graphs.push(r);
    }
}

/// Weak ε-net of `ps` with the improved construction.
pub fn build_weak_net(ps: &PointSet, eps: &Rational, cfg: &Config) -> Result<Net> {
    build_weak_net_traced(ps, eps, cfg).map(|(net, _)| net)
}

pub fn build_weak_net_traced(
    ps: &PointSet,
    eps: &Rational,
    cfg: &Config,
) -> Result<(Net, BuildTrace)> {
    build_instance(&Instance::top(ps.clone(), eps.clone()), cfg)
}

pub fn build_instance(inst: &Instance, cfg: &Config) -> Result<(Net, BuildTrace)> {
    let b = Builder::new(cfg);
    let net = b.build(inst)?;
    Ok((net, b.into_trace()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use crate::rational::rat;

    fn pts(n: i64) -> PointSet {
        PointSet::checked(
            (0..n)
                .map(|i| Point::from_ints(i, (i * i * 7 + 3 * i) % 101))
                .collect(),
        )
    }

    #[test]
    fn density_of_complete_graph() {
        assert_eq!(RestrictionGraph::complete(5).density(), int(1));
        assert_eq!(RestrictionGraph::complete(5).len(), 10);
        let g = RestrictionGraph::new(4, vec![Segment::new(2, 1), Segment::new(1, 2)]);
        assert_eq!(g.len(), 1);
        assert_eq!(g.density(), rat(1, 6));
    }

    #[test]
    fn eps_one_gives_one_point() {
        let net = build_weak_net(&pts(12), &int(1), &Config::default()).unwrap();
        assert_eq!(net.len(), 1);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(build_weak_net(&pts(5), &int(0), &Config::default()).is_err());
    }
}
