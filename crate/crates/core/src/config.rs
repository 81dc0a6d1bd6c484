//! Flat `key = value` experiment configuration.
//!
//! Lines are `key = value`; `#` starts a comment. Lists are comma separated.
//! Unknown keys and malformed values are rejected. The same keys are accepted
//! as command-line overrides, and [`RunConfig::to_kv`] writes the resolved
//! configuration back out in the same format.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PredecoderKind {
    Pinball,
    Clique,
    None,
}

impl PredecoderKind {
    pub fn name(self) -> &'static str {
        match self {
            PredecoderKind::Pinball => "pinball",
            PredecoderKind::Clique => "clique",
            PredecoderKind::None => "none",
        }
    }
}

impl FromStr for PredecoderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pinball" => Ok(Self::Pinball),
            "clique" => Ok(Self::Clique),
            "none" | "mwpm" => Ok(Self::None),
            other => Err(Error::Config(format!("unknown predecoder {other:?}"))),
        }
    }
}

/// Parameters of the transmission and predecoder power model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyParams {
    pub e_tx_pj_per_bit: f64,
    pub packet_bits: u32,
    pub header_bits: u32,
    /// Fixed high-performance predecoder power. When absent the power is
    /// interpolated from the distance.
    pub p_hp_mw: Option<f64>,
    pub hp_voltage: f64,
    pub hp_freq_mhz: f64,
    pub lp_voltage: f64,
    pub lp_freq_mhz: f64,
    pub budget_w: f64,
    pub round_time_us: f64,
}

impl Default for EnergyParams {
    fn default() -> Self {
        Self {
            e_tx_pj_per_bit: 2.46,
            packet_bits: 64,
            header_bits: 32,
            p_hp_mw: None,
            hp_voltage: 0.8,
            hp_freq_mhz: 100.0,
            lp_voltage: 0.48,
            lp_freq_mhz: 12.5,
            budget_w: 1.5,
            round_time_us: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub distances: Vec<usize>,
    pub rates: Vec<f64>,
    pub shots: u64,
    pub predecoders: Vec<PredecoderKind>,
    pub seed: u64,
    /// Worker threads; `None` lets the thread pool decide.
    pub threads: Option<usize>,
    pub energy: EnergyParams,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            distances: vec![3],
            rates: vec![1e-3],
            shots: 10_000,
            predecoders: vec![PredecoderKind::Pinball],
            seed: 1,
            threads: None,
            energy: EnergyParams::default(),
        }
    }
}

pub const KEYS: &[&str] = &[
    "d",
    "p",
    "shots",
    "predecoder",
    "seed",
    "threads",
    "e_tx_pj_per_bit",
    "packet_bits",
    "header_bits",
    "p_hp_mw",
    "hp_voltage",
    "hp_freq_mhz",
    "lp_voltage",
    "lp_freq_mhz",
    "budget_w",
    "round_time_us",
];

fn parse<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim().parse().map_err(|_| Error::Config(format!("{key}: cannot parse {v:?}")))
}

fn parse_list<T: FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
    let out: Vec<T> = v.split(',').filter(|s| !s.trim().is_empty()).map(|s| parse(key, s)).collect::<Result<_>>()?;
    if out.is_empty() {
        return Err(Error::Config(format!("{key}: empty list")));
    }
    Ok(out)
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl RunConfig {
    /// Set one key. Used for both file lines and overrides.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        let e = &mut self.energy;
        match key.trim() {
            "d" => self.distances = parse_list(key, value)?,
            "p" => self.rates = parse_list(key, value)?,
            "shots" => self.shots = parse(key, value)?,
            "predecoder" => {
                self.predecoders = value.split(',').filter(|s| !s.trim().is_empty()).map(str::parse).collect::<Result<_>>()?
            }
            "seed" => self.seed = parse(key, value)?,
            "threads" => self.threads = Some(parse(key, value)?),
            "e_tx_pj_per_bit" => e.e_tx_pj_per_bit = parse(key, value)?,
            "packet_bits" => e.packet_bits = parse(key, value)?,
            "header_bits" => e.header_bits = parse(key, value)?,
            "p_hp_mw" => e.p_hp_mw = Some(parse(key, value)?),
            "hp_voltage" => e.hp_voltage = parse(key, value)?,
            "hp_freq_mhz" => e.hp_freq_mhz = parse(key, value)?,
            "lp_voltage" => e.lp_voltage = parse(key, value)?,
            "lp_freq_mhz" => e.lp_freq_mhz = parse(key, value)?,
            "budget_w" => e.budget_w = parse(key, value)?,
            "round_time_us" => e.round_time_us = parse(key, value)?,
            other => return Err(Error::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    pub fn parse_str(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Config(format!("line {}: expected key = value", n + 1)))?;
            cfg.apply(k, v).map_err(|e| Error::Config(format!("line {}: {e}", n + 1)))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse_str(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.shots == 0 {
            return Err(Error::Config("shots must be at least 1".into()));
        }
        for &d in &self.distances {
            if !(3..=25).contains(&d) || d % 2 == 0 {
                return Err(Error::Config(format!("distance {d} must be odd and in 3..=25")));
            }
        }
        for &p in &self.rates {
            if !(p > 0.0 && p < 0.5) {
                return Err(Error::Config(format!("rate {p} must lie in (0, 0.5)")));
            }
        }
        if self.predecoders.is_empty() {
            return Err(Error::Config("no predecoder selected".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be positive".into()));
        }
        let e = &self.energy;
        if e.header_bits >= e.packet_bits {
            return Err(Error::Config("header_bits must be smaller than packet_bits".into()));
        }
        let positive = [e.e_tx_pj_per_bit, e.hp_voltage, e.hp_freq_mhz, e.lp_voltage, e.lp_freq_mhz, e.round_time_us];
        if !positive.iter().all(|x| *x > 0.0) || e.budget_w < 0.0 || !e.p_hp_mw.is_none_or(|p| p > 0.0) {
            return Err(Error::Config("energy parameters must be positive".into()));
        }
        Ok(())
    }

    /// The resolved configuration in file syntax, keys in canonical order.
    pub fn to_kv(&self) -> String {
        let e = &self.energy;
        let preds: Vec<&str> = self.predecoders.iter().map(|p| p.name()).collect();
        let mut out = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        put("d", join(&self.distances));
        put("p", join(&self.rates));
        put("shots", self.shots.to_string());
        put("predecoder", preds.join(","));
        put("seed", self.seed.to_string());
        if let Some(t) = self.threads {
            put("threads", t.to_string());
        }
        put("e_tx_pj_per_bit", e.e_tx_pj_per_bit.to_string());
        put("packet_bits", e.packet_bits.to_string());
        put("header_bits", e.header_bits.to_string());
        if let Some(p) = e.p_hp_mw {
            put("p_hp_mw", p.to_string());
        }
        put("hp_voltage", e.hp_voltage.to_string());
        put("hp_freq_mhz", e.hp_freq_mhz.to_string());
        put("lp_voltage", e.lp_voltage.to_string());
        put("lp_freq_mhz", e.lp_freq_mhz.to_string());
        put("budget_w", e.budget_w.to_string());
        put("round_time_us", e.round_time_us.to_string());
        out
    }
}
