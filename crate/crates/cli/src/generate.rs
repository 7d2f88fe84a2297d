//! Deterministic point generators.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use anyhow::{bail, Result};
use epsnet_core::improved::mix;
use epsnet_core::rational::{rat, Rational};
use epsnet_core::{ensure_general_position, Point, PointSet};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const UNIT_BITS: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    Uniform,
    Grid,
    Convex,
    Clusters,
}

impl Generator {
    pub const ALL: [Generator; 4] = [
        Generator::Uniform,
        Generator::Grid,
        Generator::Convex,
        Generator::Clusters,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Generator::Uniform => "uniform",
            Generator::Grid => "grid",
            Generator::Convex => "convex",
            Generator::Clusters => "clusters",
        }
    }

    fn salt(self) -> u64 {
        match self {
            Generator::Uniform => 11,
            Generator::Grid => 12,
            Generator::Convex => 13,
            Generator::Clusters => 14,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Generator {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        Generator::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| {
                anyhow::anyhow!("unknown generator {s:?} (uniform, grid, convex, clusters)")
            })
    }
}

fn unit(k: u64) -> Rational {
    Rational::new(BigInt::from(k), BigInt::from(1u64) << UNIT_BITS)
}

/// `v` rounded to a multiple of `2^-32`.
fn dyadic(v: f64) -> Rational {
    let scaled = (v * (1u64 << UNIT_BITS) as f64).round() as i64;
    Rational::new(BigInt::from(scaled), BigInt::from(1u64) << UNIT_BITS)
}

pub fn generate_points(kind: Generator, n: usize, seed: u64) -> Result<PointSet> {
    if n == 0 {
        bail!("need at least one point");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, kind.salt()));
    let pts: Vec<Point> = match kind {
        Generator::Uniform => (0..n)
            .map(|_| {
                let x = rng.gen_range(0..1u64 << UNIT_BITS);
                let y = rng.gen_range(0..1u64 << UNIT_BITS);
                Point::new(unit(x), unit(y))
            })
            .collect(),
        Generator::Grid => {
            let side = (n as f64).sqrt().ceil() as usize;
            let side = if side * side < n { side + 1 } else { side };
            (0..n)
                .map(|i| {
                    Point::new(
                        rat((i % side) as i64, side as i64),
                        rat((i / side) as i64, side as i64),
                    )
                })
                .collect()
        }
        Generator::Convex => {
            // Exact points of the unit circle: ((1−t²)/(1+t²), 2t/(1+t²)).
            let offset: f64 = rng.gen_range(0.0..1.0);
            (0..n)
                .map(|k| {
                    let theta = -PI + 2.0 * PI * (k as f64 + offset) / n as f64;
                    let t = dyadic((theta / 2.0).tan().clamp(-1e6, 1e6));
                    let one = Rational::from_integer(1.into());
                    let d = &one + &t * &t;
                    Point::new((&one - &t * &t) / &d, rat(2, 1) * &t / d)
                })
                .collect()
        }
        Generator::Clusters => {
            let centers: Vec<(f64, f64)> = (0..4)
                .map(|_| (rng.gen_range(0.2..0.8), rng.gen_range(0.2..0.8)))
                .collect();
            (0..n)
                .map(|i| {
                    let (cx, cy) = centers[i % 4];
                    let mut blob = || (0..3).map(|_| rng.gen_range(-0.5..0.5)).sum::<f64>() * 0.06;
                    let (dx, dy) = (blob(), blob());
                    Point::new(dyadic(cx + dx), dyadic(cy + dy))
                })
                .collect()
        }
    };
    Ok(ensure_general_position(PointSet::new(pts), seed)?)
}
