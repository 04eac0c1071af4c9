use std::f64::consts::FRAC_PI_8;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::channel::NoiseModel;
use crate::distill::{ReconcileParams, DEFAULT_LEAK_FACTOR};
use crate::error::ProtocolError;
use crate::eve::EveStrategy;
use crate::quantum::povm::check_theta;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Protocol {
    #[serde(rename = "bb84")]
    Bb84,
    #[serde(rename = "b92")]
    B92,
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Protocol::Bb84 => "bb84",
            Protocol::B92 => "b92",
        })
    }
}

impl FromStr for Protocol {
    type Err = ProtocolError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "bb84" => Ok(Protocol::Bb84),
            "b92" => Ok(Protocol::B92),
            _ => Err(ProtocolError::InvalidConfig(format!("unknown protocol {s:?}"))),
        }
    }
}

/// Everything that determines a session. Two sessions with equal configs
/// produce identical reports.
#[derive(Debug, Clone, PartialEq)]
pub struct SessionConfig {
    pub protocol: Protocol,
    pub n_pulses: usize,
    /// Half-angle between the B92 code states; ignored by BB84.
    pub theta: f64,
    pub noise: NoiseModel,
    pub eve: EveStrategy,
    /// Fraction `f` of the raw key disclosed for error estimation.
    pub sample_fraction: f64,
    /// Estimated error rates above this abort the session.
    pub r_max: f64,
    pub reconcile: ReconcileParams,
    /// Security parameter `s` of privacy amplification.
    pub s: usize,
    /// Factor `c` of the leak bound `k = ⌈c·R·n⌉`.
    pub leak_factor: f64,
    pub seed: u64,
}

impl Default for SessionConfig {
    fn default() -> Self {
        Self {
            protocol: Protocol::Bb84,
            n_pulses: 10_000,
            theta: FRAC_PI_8,
            noise: NoiseModel::NONE,
            eve: EveStrategy::NoEve,
            sample_fraction: 0.1,
            r_max: 0.12,
            reconcile: ReconcileParams::default(),
            s: 10,
            leak_factor: DEFAULT_LEAK_FACTOR,
            seed: 0,
        }
    }
}

fn invalid(msg: impl Into<String>) -> ProtocolError {
    ProtocolError::InvalidConfig(msg.into())
}

impl SessionConfig {
    pub fn validate(&self) -> Result<(), ProtocolError> {
        if self.n_pulses < 1 {
            return Err(invalid("n_pulses must be at least 1"));
        }
        self.noise.validate()?;
        if !(self.sample_fraction > 0.0 && self.sample_fraction <= 1.0) {
            return Err(invalid(format!(
                "sample fraction {} is outside (0, 1]",
                self.sample_fraction
            )));
        }
        if !(0.0..=1.0).contains(&self.r_max) {
            return Err(invalid(format!("r_max {} is outside [0, 1]", self.r_max)));
        }
        if !(self.leak_factor >= 0.0 && self.leak_factor.is_finite()) {
            return Err(invalid("leak factor must be a non-negative number"));
        }
        self.reconcile.validate()?;
        if self.protocol == Protocol::B92 {
            check_theta(self.theta)?;
        }
        match self.eve {
            EveStrategy::Opaque { fraction } if !(0.0..=1.0).contains(&fraction) => {
                Err(invalid(format!("eve fraction {fraction} is outside [0, 1]")))
            }
            ref s if s.is_translucent() => {
                if self.protocol != Protocol::B92 {
                    return Err(invalid(
                        "translucent eavesdropping is defined on the B92 code states only",
                    ));
                }
                if self.noise.multi_p != 0.0 {
                    return Err(invalid(
                        "translucent eavesdropping needs single-photon pulses (multi = 0)",
                    ));
                }
                let theta = match s {
                    EveStrategy::TranslucentUnitary(u) => u.theta,
                    EveStrategy::TranslucentEntangling(e) => e.theta,
                    _ => unreachable!(),
                };
                if (theta - self.theta).abs() > 1e-12 {
                    return Err(invalid(format!(
                        "probe built for theta {theta}, session uses {}",
                        self.theta
                    )));
                }
                crate::eve::validate_interaction(s)?;
                Ok(())
            }
            _ => Ok(()),
        }
    }
}
