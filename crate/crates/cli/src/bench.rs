//! Net construction by algorithm name, and ε-sweeps with CSV output.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;
use std::time::Instant;

use anyhow::{anyhow, Result};
use epsnet_core::baseline::{quadratic_net, trivial_net};
use epsnet_core::improved::{build_weak_net_traced, Config};
use epsnet_core::rational::{format_rational, to_decimal_string, Rational};
use epsnet_core::verifier::is_weak_eps_net;
use epsnet_core::{Net, PointSet};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::generate::{generate_points, Generator};
use crate::io::config_params;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Trivial,
    Quadratic,
    Improved,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [
        Algorithm::Trivial,
        Algorithm::Quadratic,
        Algorithm::Improved,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Trivial => "trivial",
            Algorithm::Quadratic => "quadratic",
            Algorithm::Improved => "improved",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| anyhow!("unknown algorithm {s:?} (trivial, quadratic, improved)"))
    }
}

/// Builds a net and the `params` map describing how it was built.
pub fn build_net(
    algo: Algorithm,
    ps: &PointSet,
    eps: &Rational,
    cfg: &Config,
) -> Result<(Net, BTreeMap<String, String>)> {
    match algo {
        Algorithm::Trivial => Ok((trivial_net(ps), BTreeMap::new())),
        Algorithm::Quadratic => Ok((quadratic_net(ps, eps), BTreeMap::new())),
        Algorithm::Improved => {
            let (net, trace) = build_weak_net_traced(ps, eps, cfg)?;
            let mut params = config_params(cfg);
            params.insert("calls".into(), trace.calls.len().to_string());
            params.insert("fallbacks".into(), trace.fallbacks.len().to_string());
            if let Some((_, sp)) = trace.params.iter().find(|(call, _)| *call == 0) {
                for (k, v) in [
                    ("r0", sp.r0.to_string()),
                    ("s0", sp.s0.to_string()),
                    ("t", sp.t.to_string()),
                    ("r1", sp.r1.to_string()),
                    ("r_sparse", sp.r_sparse.to_string()),
                    ("eps0", format_rational(&sp.eps0)),
                    ("eps1", format_rational(&sp.eps1)),
                    ("eps_hat", format_rational(&sp.eps_hat)),
                    ("i_lo", sp.i_lo.to_string()),
                    ("i_hi", sp.i_hi.to_string()),
                ] {
                    params.insert(format!("root.{k}"), v);
                }
            }
            Ok((net, params))
        }
    }
}

/// One bench row. Column order is the CSV header order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub n: usize,
    pub eps: String,
    pub algorithm: String,
    pub seed: u64,
    pub net_size: Option<usize>,
    pub max_unpierced: Option<usize>,
    pub threshold: Option<u64>,
    pub is_net: bool,
    pub build_ms: f64,
    pub verify_ms: f64,
    pub generator: String,
    pub error: String,
}

pub const CSV_HEADER: [&str; 12] = [
    "n",
    "eps",
    "algorithm",
    "seed",
    "net_size",
    "max_unpierced",
    "threshold",
    "is_net",
    "build_ms",
    "verify_ms",
    "generator",
    "error",
];

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub algorithms: Vec<Algorithm>,
    pub eps: Vec<Rational>,
    pub ns: Vec<usize>,
    pub seeds: Vec<u64>,
    pub generators: Vec<Generator>,
    pub base: Config,
}

fn millis(start: Instant) -> f64 {
    (start.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

fn run_row(
    algo: Algorithm,
    eps: &Rational,
    n: usize,
    seed: u64,
    generator: Generator,
    base: &Config,
) -> BenchRecord {
    let mut rec = BenchRecord {
        n,
        eps: to_decimal_string(eps),
        algorithm: algo.name().to_string(),
        seed,
        net_size: None,
        max_unpierced: None,
        threshold: None,
        is_net: false,
        build_ms: 0.0,
        verify_ms: 0.0,
        generator: generator.name().to_string(),
        error: String::new(),
    };
    let ps = match generate_points(generator, n, seed) {
        Ok(ps) => ps,
        Err(e) => {
            rec.error = e.to_string();
            return rec;
        }
    };
    let cfg = Config {
        seed,
        ..base.clone()
    };
    let start = Instant::now();
    let built = build_net(algo, &ps, eps, &cfg);
    rec.build_ms = millis(start);
    match built {
        Ok((net, _)) => {
            rec.net_size = Some(net.len());
            let start = Instant::now();
            let report = is_weak_eps_net(&ps, &net, eps);
            rec.verify_ms = millis(start);
            rec.max_unpierced = Some(report.max_unpierced);
            rec.threshold = Some(report.threshold);
            rec.is_net = report.is_net;
        }
        Err(e) => rec.error = e.to_string(),
    }
    rec
}

/// Runs every (algorithm, eps, n, seed, generator) combination in parallel.
/// Rows come back in the nested order of the config lists.
pub fn run_bench(config: &BenchConfig) -> Vec<BenchRecord> {
    let mut jobs = Vec::new();
    for &algo in &config.algorithms {
        for eps in &config.eps {
            for &n in &config.ns {
                for &seed in &config.seeds {
                    for &g in &config.generators {
                        jobs.push((algo, eps.clone(), n, seed, g));
                    }
                }
            }
        }
    }
    jobs.par_iter()
        .map(|(algo, eps, n, seed, g)| run_row(*algo, eps, *n, *seed, *g, &config.base))
        .collect()
}

pub fn write_csv<W: Write>(out: W, records: &[BenchRecord]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<BenchRecord>> {
    let mut rd = csv::Reader::from_reader(input);
    let header: Vec<String> = rd.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(anyhow!("unexpected CSV header {header:?}"));
    }
    rd.deserialize().map(|r| r.map_err(Into::into)).collect()
}

/// Least-squares slope of `ln(mean size)` against `ln(1/ε)`, per algorithm.
pub fn loglog_slopes(records: &[BenchRecord]) -> Vec<(String, Option<f64>)> {
    let mut algos: Vec<&str> = Vec::new();
    for r in records {
        if !algos.contains(&r.algorithm.as_str()) {
            algos.push(&r.algorithm);
        }
    }
    algos
        .into_iter()
        .map(|a| {
            let mut by_eps: BTreeMap<String, (f64, usize)> = BTreeMap::new();
            for r in records.iter().filter(|r| r.algorithm == a) {
                if let Some(size) = r.net_size {
                    let e = by_eps.entry(r.eps.clone()).or_insert((0.0, 0));
                    e.0 += size as f64;
                    e.1 += 1;
                }
            }
            let pts: Vec<(f64, f64)> = by_eps
                .iter()
                .filter_map(|(eps, (sum, cnt))| {
                    let eps: f64 = eps.parse().ok()?;
                    let mean = sum / *cnt as f64;
                    (eps > 0.0 && mean > 0.0).then(|| ((1.0 / eps).ln(), mean.ln()))
                })
                .collect();
            (a.to_string(), slope(&pts))
        })
        .collect()
}

fn slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use epsnet_core::rational::rat;

    fn small_config() -> BenchConfig {
        BenchConfig {
            algorithms: vec![Algorithm::Trivial, Algorithm::Quadratic],
            eps: vec![rat(1, 2), rat(2, 5), rat(3, 10)],
            ns: vec![10],
            seeds: vec![1, 2],
            generators: vec![Generator::Uniform],
            base: Config::default(),
        }
    }

    #[test]
    fn cartesian_rows_all_verified() {
        let rows = run_bench(&small_config());
        assert_eq!(rows.len(), 12);
        assert!(rows.iter().all(|r| r.is_net && r.error.is_empty()));
        assert!(rows
            .iter()
            .all(|r| r.is_net == (r.max_unpierced.unwrap() < r.threshold.unwrap() as usize)));
    }

    #[test]
    fn csv_round_trip() {
        let rows = run_bench(&small_config());
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(&CSV_HEADER.join(",")));
        assert_eq!(read_csv(buf.as_slice()).unwrap(), rows);
    }

    #[test]
    fn failed_row_round_trips() {
        let rec = BenchRecord {
            n: 3,
            eps: "0.5".into(),
            algorithm: "improved".into(),
            seed: 9,
            net_size: None,
            max_unpierced: None,
            threshold: None,
            is_net: false,
            build_ms: 1.25,
            verify_ms: 0.0,
            generator: "grid".into(),
            error: "cutting not found, \"quoted\"".into(),
        };
        let mut buf = Vec::new();
        write_csv(&mut buf, std::slice::from_ref(&rec)).unwrap();
        assert_eq!(read_csv(buf.as_slice()).unwrap(), vec![rec]);
    }

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = [2.0f64, 4.0, 8.0]
            .iter()
            .map(|x| (x.ln(), 2.0 * x.ln() + 1.0))
            .collect();
        assert!((slope(&pts).unwrap() - 2.0).abs() < 1e-9);
    }
}
