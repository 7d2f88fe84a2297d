//! Point files, net JSON and constants files.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};
use epsnet_core::improved::Config;
use epsnet_core::rational::{format_rational, parse_rational, Rational};
use epsnet_core::{Net, Point, Tag};
use serde::{Deserialize, Serialize};

/// Parses "x y" lines. `#` starts a comment; blank lines are skipped.
pub fn parse_points(text: &str) -> Result<Vec<Point>> {
    let mut out = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            bail!("line {}: expected two coordinates, got {:?}", no + 1, raw);
        }
        let x = parse_rational(fields[0]).map_err(|e| anyhow!("line {}: {e}", no + 1))?;
        let y = parse_rational(fields[1]).map_err(|e| anyhow!("line {}: {e}", no + 1))?;
        out.push(Point::new(x, y));
    }
    Ok(out)
}

pub fn format_points(points: &[Point]) -> String {
    let mut s = String::new();
    for p in points {
        s.push_str(&format_rational(&p.x));
        s.push(' ');
        s.push_str(&format_rational(&p.y));
        s.push('\n');
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetPointJson {
    pub x: String,
    pub y: String,
    pub stage: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetJson {
    pub epsilon: String,
    pub algorithm: String,
    pub params: BTreeMap<String, String>,
    pub points: Vec<NetPointJson>,
    pub size: usize,
}

impl NetJson {
    pub fn new(
        net: &Net,
        eps: &Rational,
        algorithm: &str,
        params: BTreeMap<String, String>,
    ) -> Self {
        let points: Vec<NetPointJson> = net
            .iter()
            .map(|(p, tag)| NetPointJson {
                x: format_rational(&p.x),
                y: format_rational(&p.y),
                stage: tag.as_str().to_string(),
            })
            .collect();
        NetJson {
            epsilon: format_rational(eps),
            algorithm: algorithm.to_string(),
            params,
            size: points.len(),
            points,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("net json");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let nj: NetJson = serde_json::from_str(text).context("malformed net JSON")?;
        if nj.size != nj.points.len() {
            bail!(
                "net JSON size {} disagrees with {} points",
                nj.size,
                nj.points.len()
            );
        }
        Ok(nj)
    }

    pub fn epsilon(&self) -> Result<Rational> {
        parse_rational(&self.epsilon).map_err(|e| anyhow!("epsilon: {e}"))
    }

    pub fn net(&self) -> Result<Net> {
        let mut net = Net::new();
        for (i, p) in self.points.iter().enumerate() {
            let x = parse_rational(&p.x).map_err(|e| anyhow!("point {i}: {e}"))?;
            let y = parse_rational(&p.y).map_err(|e| anyhow!("point {i}: {e}"))?;
            let tag: Tag = p.stage.parse()?;
            net.push(Point::new(x, y), tag);
        }
        Ok(net)
    }
}

/// Applies `key = value` lines onto `cfg`. Keys: C0, C_hat, C1, C_prime,
/// C_cut, depth_cap, and also eta, eps_tilde, triangle_c, max_attempts.
pub fn apply_constants(cfg: &mut Config, text: &str) -> Result<()> {
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("line {}: expected key = value", no + 1))?;
        let key = key.trim();
        let value = value.trim().trim_matches('"');
        let r = || parse_rational(value).map_err(|e| anyhow!("line {}: {key}: {e}", no + 1));
        let u = || {
            value
                .parse::<usize>()
                .with_context(|| format!("line {}: {key}", no + 1))
        };
        match key {
            "C0" => cfg.c0 = r()?,
            "C_hat" => cfg.c_hat = r()?,
            "C1" => cfg.c1 = r()?,
            "C_prime" => cfg.c_prime = r()?,
            "C_cut" => cfg.c_cut = r()?,
            "eta" => cfg.eta = r()?,
            "eps_tilde" => cfg.eps_tilde = r()?,
            "depth_cap" | "depth" => cfg.depth_cap = u()?,
            "triangle_c" => cfg.triangle_c = u()? as u32,
            "max_attempts" => cfg.max_attempts = u()?,
            _ => bail!("line {}: unknown constant {key:?}", no + 1),
        }
    }
    Ok(())
}

/// The configuration as JSON `params`.
pub fn config_params(cfg: &Config) -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    m.insert("eta".into(), format_rational(&cfg.eta));
    m.insert("eps_tilde".into(), format_rational(&cfg.eps_tilde));
    m.insert("C0".into(), format_rational(&cfg.c0));
    m.insert("C_hat".into(), format_rational(&cfg.c_hat));
    m.insert("C1".into(), format_rational(&cfg.c1));
    m.insert("C_prime".into(), format_rational(&cfg.c_prime));
    m.insert("C_cut".into(), format_rational(&cfg.c_cut));
    m.insert("depth_cap".into(), cfg.depth_cap.to_string());
    m.insert("triangle_c".into(), cfg.triangle_c.to_string());
    m.insert("max_attempts".into(), cfg.max_attempts.to_string());
    m.insert("seed".into(), cfg.seed.to_string());
    m
}
