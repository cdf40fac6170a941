//! Tolerances, seeds and limits in a `key = value` text file.

use std::fmt::Write as _;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::rays::RayConfig;
use crate::verify::words::SearchOptions;

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub newton_tol: f64,
    pub land_tol: f64,
    pub cluster_eps: f64,
    pub arc_tol: f64,
    pub h_big: f64,
    pub ratio: f64,
    pub h_max: f64,
    pub h_min: f64,
    pub seed: u64,
    /// 0 lets rayon decide.
    pub threads: usize,
    pub search_start_bits: u32,
    pub search_end_bits: u32,
}

impl Default for Config {
    fn default() -> Self {
        let r = RayConfig::default();
        let s = SearchOptions::default();
        Config {
            newton_tol: r.newton_tol,
            land_tol: r.land_tol,
            cluster_eps: r.cluster_eps,
            arc_tol: 1e-3,
            h_big: r.h_big,
            ratio: r.ratio,
            h_max: r.h_max,
            h_min: r.h_min,
            seed: 1,
            threads: 0,
            search_start_bits: s.start_bits,
            search_end_bits: s.end_bits,
        }
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = Config::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", n + 1)))?;
            c.set(k.trim(), v.trim())?;
        }
        c.check()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Config::parse(&std::fs::read_to_string(path)?)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse().map_err(|_| Error::Config(format!("bad value for {key}: {v:?}")))
        }
        match key {
            "newton_tol" => self.newton_tol = num(key, value)?,
            "land_tol" => self.land_tol = num(key, value)?,
            "cluster_eps" => self.cluster_eps = num(key, value)?,
            "arc_tol" => self.arc_tol = num(key, value)?,
            "h_big" => self.h_big = num(key, value)?,
            "ratio" => self.ratio = num(key, value)?,
            "h_max" => self.h_max = num(key, value)?,
            "h_min" => self.h_min = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "threads" => self.threads = num(key, value)?,
            "search_start_bits" => self.search_start_bits = num(key, value)?,
            "search_end_bits" => self.search_end_bits = num(key, value)?,
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    pub fn check(&self) -> Result<()> {
        let positive = [
            ("newton_tol", self.newton_tol),
            ("land_tol", self.land_tol),
            ("cluster_eps", self.cluster_eps),
            ("arc_tol", self.arc_tol),
            ("h_big", self.h_big),
            ("h_min", self.h_min),
        ];
        for (k, v) in positive {
            if !(v > 0.0) {
                return Err(Error::Config(format!("{k} must be positive, got {v}")));
            }
        }
        if !(self.ratio > 0.0 && self.ratio < 1.0) {
            return Err(Error::Config(format!("ratio must lie in (0, 1), got {}", self.ratio)));
        }
        if !(self.h_max > self.h_min) {
            return Err(Error::Config("h_max must exceed h_min".into()));
        }
        if self.search_start_bits < 3 || self.search_end_bits < self.search_start_bits || self.search_end_bits > 60 {
            return Err(Error::Config("need 3 ≤ search_start_bits ≤ search_end_bits ≤ 60".into()));
        }
        Ok(())
    }

    /// Canonical text: every key, fixed order, round-trippable.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "newton_tol = {:e}", self.newton_tol);
        let _ = writeln!(s, "land_tol = {:e}", self.land_tol);
        let _ = writeln!(s, "cluster_eps = {:e}", self.cluster_eps);
        let _ = writeln!(s, "arc_tol = {:e}", self.arc_tol);
        let _ = writeln!(s, "h_big = {}", self.h_big);
        let _ = writeln!(s, "ratio = {}", self.ratio);
        let _ = writeln!(s, "h_max = {}", self.h_max);
        let _ = writeln!(s, "h_min = {:e}", self.h_min);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "threads = {}", self.threads);
        let _ = writeln!(s, "search_start_bits = {}", self.search_start_bits);
        let _ = writeln!(s, "search_end_bits = {}", self.search_end_bits);
        s
    }

    /// First 16 hex digits of SHA-256 of the canonical text.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_text().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    pub fn ray_config(&self) -> RayConfig {
        RayConfig {
            h_max: self.h_max,
            h_min: self.h_min,
            ratio: self.ratio,
            h_big: self.h_big,
            newton_tol: self.newton_tol,
            land_tol: self.land_tol,
            cluster_eps: self.cluster_eps,
            ..RayConfig::default()
        }
    }

    pub fn search_options(&self) -> SearchOptions {
        SearchOptions { start_bits: self.search_start_bits, end_bits: self.search_end_bits, ..SearchOptions::default() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_hash() {
        let c = Config::default();
        let back = Config::parse(&c.to_text()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.hash(), c.hash());
        assert_eq!(c.hash().len(), 16);
        let mut d = c.clone();
        d.seed = 2;
        assert_ne!(d.hash(), c.hash());
    }

    #[test]
    fn comments_and_errors() {
        let c = Config::parse("# tolerances\nland_tol = 1e-7  # tighter\n\nseed=9\n").unwrap();
        assert_eq!((c.land_tol, c.seed), (1e-7, 9));
        assert!(Config::parse("land_tol = -1").is_err());
        assert!(Config::parse("bogus = 1").is_err());
        assert!(Config::parse("land_tol 1").is_err());
        assert!(Config::parse("ratio = 1.5").is_err());
    }
}
