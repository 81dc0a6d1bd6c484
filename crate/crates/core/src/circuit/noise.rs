use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Kind of noise channel in the syndrome-extraction circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChannelKind {
    Measurement,
    Reset,
    SingleQubit,
    TwoQubit,
    Idle,
    ResonatorIdle,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 6] = [
        ChannelKind::Measurement,
        ChannelKind::Reset,
        ChannelKind::SingleQubit,
        ChannelKind::TwoQubit,
        ChannelKind::Idle,
        ChannelKind::ResonatorIdle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ChannelKind::Measurement => "measurement",
            ChannelKind::Reset => "reset",
            ChannelKind::SingleQubit => "single_qubit",
            ChannelKind::TwoQubit => "two_qubit",
            ChannelKind::Idle => "idle",
            ChannelKind::ResonatorIdle => "resonator_idle",
        }
    }
}

/// SI1000 circuit noise: every channel rate is a fixed multiple of `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub p: f64,
    pub measurement: f64,
    pub reset: f64,
    pub single_qubit: f64,
    pub two_qubit: f64,
    pub idle: f64,
    pub resonator_idle: f64,
}

impl NoiseModel {
    pub fn si1000(p: f64) -> Result<Self> {
        let m = Self { p, measurement: 5.0, reset: 2.0, single_qubit: 0.1, two_qubit: 1.0, idle: 0.1, resonator_idle: 2.0 };
        m.validate()?;
        Ok(m)
    }

    pub fn noiseless() -> Self {
        Self::si1000(0.0).expect("zero noise is valid")
    }

    pub fn multiplier(&self, kind: ChannelKind) -> f64 {
        match kind {
            ChannelKind::Measurement => self.measurement,
            ChannelKind::Reset => self.reset,
            ChannelKind::SingleQubit => self.single_qubit,
            ChannelKind::TwoQubit => self.two_qubit,
            ChannelKind::Idle => self.idle,
            ChannelKind::ResonatorIdle => self.resonator_idle,
        }
    }

    /// Total rate of a channel instance.
    pub fn rate(&self, kind: ChannelKind) -> f64 {
        self.p * self.multiplier(kind)
    }

    /// Probability of each Z-relevant outcome of a channel after projecting
    /// away X components. Measurement and reset channels have a single flip
    /// outcome; depolarizing channels keep the Z and Y terms (2/3 of the
    /// rate); the two-qubit channel keeps the Z-part patterns ZI, IZ and ZZ,
    /// each carried by 4 of the 15 Pauli terms.
    pub fn outcome_probability(&self, kind: ChannelKind) -> f64 {
        let r = self.rate(kind);
        match kind {
            ChannelKind::Measurement | ChannelKind::Reset => r,
            ChannelKind::SingleQubit | ChannelKind::Idle | ChannelKind::ResonatorIdle => 2.0 * r / 3.0,
            ChannelKind::TwoQubit => 4.0 * r / 15.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.p.is_finite() || self.p < 0.0 {
            return Err(Error::InvalidRate(format!("p = {}", self.p)));
        }
        for kind in ChannelKind::ALL {
            let m = self.multiplier(kind);
            let r = self.rate(kind);
            if !m.is_finite() || m < 0.0 || !(0.0..=1.0).contains(&r) {
                return Err(Error::InvalidRate(format!("{} rate {r}", kind.name())));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn si1000_table() {
        let n = NoiseModel::si1000(1e-3).unwrap();
        let close = |a: f64, b: f64| (a - b).abs() < 1e-15;
        assert!(close(n.rate(ChannelKind::Measurement), 5e-3));
        assert!(close(n.rate(ChannelKind::Reset), 2e-3));
        assert!(close(n.rate(ChannelKind::SingleQubit), 1e-4));
        assert!(close(n.rate(ChannelKind::TwoQubit), 1e-3));
        assert!(close(n.rate(ChannelKind::Idle), 1e-4));
        assert!(close(n.rate(ChannelKind::ResonatorIdle), 2e-3));
        // three exclusive Z patterns carry 12/15 of the two-qubit rate
        assert!(close(3.0 * n.outcome_probability(ChannelKind::TwoQubit), 0.8e-3));
    }

    #[test]
    fn rejects_rates_above_one() {
        assert!(NoiseModel::si1000(0.3).is_err());
        assert!(NoiseModel::si1000(-1e-3).is_err());
        assert!(NoiseModel::si1000(f64::NAN).is_err());
        assert!(NoiseModel::si1000(0.2).is_ok());
    }
}
