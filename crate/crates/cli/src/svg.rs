//! SVG scatter of a point set, a net and optionally a trapezoidation.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use epsnet_core::arrangement::Trapezoidation;
use epsnet_core::rational::to_f64;
use epsnet_core::{Net, Point, PointSet, Tag};

const SIZE: f64 = 800.0;
const MARGIN: f64 = 20.0;

fn tag_color(tag: Tag) -> &'static str {
    match tag {
        Tag::Trivial => "#7f7f7f",
        Tag::QuadLine => "#1f77b4",
        Tag::QuadRecurse => "#17becf",
        Tag::Stage0 => "#2ca02c",
        Tag::Stage1 => "#d62728",
        Tag::Stage2 => "#9467bd",
        Tag::Stage3Qs0 => "#8c564b",
        Tag::Stage3Triangle => "#e377c2",
        Tag::Stage3QLi => "#bcbd22",
        Tag::Clamp => "#ff7f0e",
    }
}

pub fn tag_class(tag: Tag) -> String {
    format!("tag-{}", tag.as_str())
}

struct View {
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
    scale: f64,
}

impl View {
    fn fit<'a>(pts: impl Iterator<Item = &'a Point>) -> View {
        let (mut x0, mut y0, mut x1, mut y1) = (
            f64::INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::NEG_INFINITY,
        );
        for p in pts {
            let (x, y) = (to_f64(&p.x), to_f64(&p.y));
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if !x0.is_finite() {
            (x0, y0, x1, y1) = (0.0, 0.0, 1.0, 1.0);
        }
        let span = (x1 - x0).max(y1 - y0).max(1e-9);
        let pad = span * 0.05;
        let (x0, y0) = (x0 - pad, y0 - pad);
        let span = span + 2.0 * pad;
        View {
            x0,
            y0,
            x1: x0 + span,
            y1: y0 + span,
            scale: (SIZE - 2.0 * MARGIN) / span,
        }
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        (
            MARGIN + (x - self.x0) * self.scale,
            SIZE - MARGIN - (y - self.y0) * self.scale,
        )
    }
}

/// Rounds for display; collapses `-0.000` to `0.000`.
fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

/// Keeps the part of `poly` where `f(x, y) = α·x + β·y + γ ≥ 0`.
fn clip(poly: &[(f64, f64)], (alpha, beta, gamma): (f64, f64, f64)) -> Vec<(f64, f64)> {
    let f = |p: &(f64, f64)| alpha * p.0 + beta * p.1 + gamma;
    let mut out = Vec::new();
    for i in 0..poly.len() {
        let (p, q) = (poly[i], poly[(i + 1) % poly.len()]);
        let (fp, fq) = (f(&p), f(&q));
        if fp >= 0.0 {
            out.push(p);
        }
        if (fp >= 0.0) != (fq >= 0.0) {
            let t = fp / (fp - fq);
            out.push((p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1)));
        }
    }
    out
}

fn cell_polygon(t: &Trapezoidation, id: usize, view: &View) -> Vec<(f64, f64)> {
    let cell = &t.cells[id];
    let mut poly = vec![
        (view.x0, view.y0),
        (view.x1, view.y0),
        (view.x1, view.y1),
        (view.x0, view.y1),
    ];
    if let Some(l) = &cell.left_x {
        poly = clip(&poly, (1.0, 0.0, -to_f64(l)));
    }
    if let Some(r) = &cell.right_x {
        poly = clip(&poly, (-1.0, 0.0, to_f64(r)));
    }
    let height = |idx: usize| {
        let line = &t.source_lines[idx];
        let b = to_f64(&line.b);
        (-to_f64(&line.a) / b, to_f64(&line.c) / b)
    };
    if let Some(f) = cell.floor {
        let (m, k) = height(f);
        poly = clip(&poly, (-m, 1.0, -k));
    }
    if let Some(c) = cell.ceiling {
        let (m, k) = height(c);
        poly = clip(&poly, (m, -1.0, k));
    }
    poly
}

/// The SVG document. Identical inputs give identical bytes.
pub fn render_svg(
    ps: &PointSet,
    net: Option<&Net>,
    decomposition: Option<&Trapezoidation>,
) -> String {
    let net_points = net.into_iter().flat_map(|n| n.iter().map(|(p, _)| p));
    let corners = decomposition.into_iter().flat_map(|t| t.vertices.iter());
    let view = View::fit(ps.points().iter().chain(net_points).chain(corners));
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    s.push_str("<style>\n");
    s.push_str(".point { fill: #222; }\n.trap { fill: none; stroke: #bbb; stroke-width: 0.5; }\n");
    let tags: BTreeSet<Tag> = net
        .map(|n| n.iter().map(|(_, t)| t).collect())
        .unwrap_or_default();
    for &tag in &tags {
        let _ = writeln!(
            s,
            ".{} {{ fill: {}; fill-opacity: 0.8; }}",
            tag_class(tag),
            tag_color(tag)
        );
    }
    s.push_str("</style>\n");
    if let Some(t) = decomposition {
        s.push_str("<g class=\"decomposition\">\n");
        for id in 0..t.cells.len() {
            let poly = cell_polygon(t, id, &view);
            if poly.len() < 3 {
                continue;
            }
            let pts: Vec<String> = poly
                .iter()
                .map(|&(x, y)| {
                    let (u, v) = view.map(x, y);
                    format!("{},{}", num(u), num(v))
                })
                .collect();
            let _ = writeln!(s, r#"<polygon class="trap" points="{}"/>"#, pts.join(" "));
        }
        s.push_str("</g>\n");
    }
    s.push_str("<g class=\"points\">\n");
    for p in ps.points() {
        let (u, v) = view.map(to_f64(&p.x), to_f64(&p.y));
        let _ = writeln!(
            s,
            r#"<circle class="point" cx="{}" cy="{}" r="3"/>"#,
            num(u),
            num(v)
        );
    }
    s.push_str("</g>\n");
    if let Some(net) = net {
        s.push_str("<g class=\"net\">\n");
        for (p, tag) in net.iter() {
            let (u, v) = view.map(to_f64(&p.x), to_f64(&p.y));
            let _ = writeln!(
                s,
                r#"<rect class="net {}" x="{}" y="{}" width="7" height="7"/>"#,
                tag_class(tag),
                num(u - 3.5),
                num(v - 3.5)
            );
        }
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    s
}

pub fn write_svg(
    path: &Path,
    ps: &PointSet,
    net: Option<&Net>,
    decomposition: Option<&Trapezoidation>,
) -> Result<()> {
    std::fs::write(path, render_svg(ps, net, decomposition))
        .with_context(|| format!("writing {}", path.display()))
}
