//! Derived parameter schedule for one recursive instance.

use num_traits::{One, ToPrimitive};

use crate::arrangement::floor_times_log2;
use crate::error::{Error, Result};
use crate::rational::{
    ceil_log2, ceil_sqrt, floor_log2, int, log2_dyadic, pow2, rat, to_f64, Rational,
};

/// Tunable constants and limits of the construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub eta: Rational,
    /// Instances with `ε ≥ eps_tilde` use the quadratic net directly.
    pub eps_tilde: Rational,
    pub c0: Rational,
    pub c_hat: Rational,
    pub c1: Rational,
    pub c_prime: Rational,
    pub c_cut: Rational,
    pub depth_cap: usize,
    /// Sample-size constant of the strong triangle net.
    pub triangle_c: u32,
    pub max_attempts: usize,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            eta: rat(1, 10),
            eps_tilde: rat(1, 2),
            c0: rat(1, 8),
            c_hat: rat(1, 64),
            c1: rat(1, 4),
            c_prime: rat(1, 4),
            c_cut: int(2),
            depth_cap: 12,
            triangle_c: 8,
            max_attempts: 20,
            seed: 0,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("eta", &self.eta),
            ("eps_tilde", &self.eps_tilde),
            ("C0", &self.c0),
            ("C_hat", &self.c_hat),
            ("C1", &self.c1),
            ("C_prime", &self.c_prime),
            ("C_cut", &self.c_cut),
        ];
        for (name, v) in positive {
            if *v <= int(0) {
                return Err(Error::InvalidParameter(format!("{name} must be positive")));
            }
        }
        if self.c0 >= rat(1, 4) {
            return Err(Error::InvalidParameter("C0 must be below 1/4".into()));
        }
        if self.c_hat >= rat(1, 40) {
            return Err(Error::InvalidParameter("C_hat must be below 1/40".into()));
        }
        if self.max_attempts == 0 {
            return Err(Error::InvalidParameter(
                "max_attempts must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageParams {
    pub eps: Rational,
    pub sigma: Rational,
    pub eta: Rational,
    pub eps_tilde: Rational,
    pub r0: usize,
    pub s0: usize,
    pub t: usize,
    pub r1: usize,
    pub r_sparse: usize,
    /// `max(1, log₂(1/ε))`, as the dyadic value actually used.
    pub log_inv_eps: Rational,
    /// `max(1, log₂ r1)`, as the dyadic value actually used.
    pub log_r1: Rational,
    pub eps0: Rational,
    pub eps1: Rational,
    pub eps_hat: Rational,
    /// `I = [i_lo, i_hi]`; empty when `i_lo > i_hi`.
    pub i_lo: i64,
    pub i_hi: i64,
    /// `⌊t·r1·max(1, log₂ r1)⌋`, exact.
    pub zone_threshold: u64,
    pub c0: Rational,
    pub c_hat: Rational,
    pub c1: Rational,
    pub c_prime: Rational,
    pub c_cut: Rational,
    pub seed: u64,
}

fn ceil_pow(base: f64, exp: f64) -> usize {
    crate::rational::ceil_f64(base.powf(exp)) as usize
}

impl StageParams {
    pub fn derive(eps: &Rational, sigma: &Rational, cfg: &Config, seed: u64) -> Self {
        let inv = Rational::one() / eps;
        let inv_f = to_f64(&inv);
        let eta = to_f64(&cfg.eta);
        let r0 = ceil_pow(inv_f, eta).max(2);
        let t = ceil_pow(inv_f, 2.0 * eta).max(1);
        let r1 = (ceil_sqrt(&inv) as usize).max(1);
        let s0 = ceil_pow(inv_f, 3.0 * eta).clamp(r0, r0.max(r1));
        let r_sparse = ceil_pow(inv_f, 4.0 * eta).max(1);

        let one = Rational::one();
        let log_inv_eps = log2_dyadic(&inv).max(one.clone());
        let log_r1 = log2_dyadic(&int(r1 as i64)).max(one);
        let eps0 = sigma * eps / int(100 * r0 as i64);
        let eps1 = &eps0 / (int(80) * &log_inv_eps);
        let eps_hat = &eps0 / (int(8 * (t * r1) as i64) * &log_r1);
        let i_lo = floor_log2(&(int(2) * &eps_hat / (int(5) * &eps1))).max(0);
        let i_hi = ceil_log2(&(int(4) / &eps1));
        let zone_threshold = floor_times_log2(&int((t * r1) as i64), r1 as u64);

        StageParams {
            eps: eps.clone(),
            sigma: sigma.clone(),
            eta: cfg.eta.clone(),
            eps_tilde: cfg.eps_tilde.clone(),
            r0,
            s0,
            t,
            r1,
            r_sparse,
            log_inv_eps,
            log_r1,
            eps0,
            eps1,
            eps_hat,
            i_lo,
            i_hi,
            zone_threshold,
            c0: cfg.c0.clone(),
            c_hat: cfg.c_hat.clone(),
            c1: cfg.c1.clone(),
            c_prime: cfg.c_prime.clone(),
            c_cut: cfg.c_cut.clone(),
            seed,
        }
    }

    /// `δᵢ = 2^i·ε₁/4`.
    pub fn delta(&self, i: i64) -> Rational {
        pow2(i) * &self.eps1 / int(4)
    }

    pub fn interval(&self) -> std::ops::RangeInclusive<i64> {
        self.i_lo..=self.i_hi
    }

    /// Stage-3 crossing-net step `⌈C′·ε₁·δᵢ·n²⌉`.
    pub fn stage3_step(&self, i: i64, n: usize) -> usize {
        let v = &self.c_prime * &self.eps1 * self.delta(i) * int((n * n) as i64);
        crate::rational::ceil(&v)
            .to_usize()
            .unwrap_or(usize::MAX)
            .max(1)
    }

    /// Stage-2 crossing-net step `⌈C₁·ε·n⌉`.
    pub fn stage2_step(&self, n: usize) -> usize {
        let v = &self.c1 * &self.eps * int(n as i64);
        crate::rational::ceil(&v)
            .to_usize()
            .unwrap_or(usize::MAX)
            .max(1)
    }

    /// Point capacity `⌈n/r1²⌉` of the refined decomposition.
    pub fn capacity(&self, n: usize) -> usize {
        n.div_ceil(self.r1 * self.r1).max(1)
    }

    pub fn sample_seed(&self, salt: u64) -> u64 {
        mix(self.seed, salt)
    }
}

/// Splitmix-style seed derivation for independent sub-streams.
pub fn mix(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
