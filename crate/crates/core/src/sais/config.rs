use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Operator {
    Mutualism,
    Commensalism,
    Parasitism,
}

impl Operator {
    pub const ALL: [Operator; 3] = [
        Operator::Mutualism,
        Operator::Commensalism,
        Operator::Parasitism,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Operator::Mutualism => "mutualism",
            Operator::Commensalism => "commensalism",
            Operator::Parasitism => "parasitism",
        }
    }
}

/// Non-empty set of enabled operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OperatorMask {
    bits: u8,
}

impl OperatorMask {
    pub const ALL: OperatorMask = OperatorMask { bits: 0b111 };

    pub fn only(op: Operator) -> Self {
        Self {
            bits: Self::bit(op),
        }
    }

    pub fn from_operators(ops: &[Operator]) -> Result<Self> {
        let bits = ops.iter().fold(0, |b, &op| b | Self::bit(op));
        if bits == 0 {
            return Err(Error::Config("operator mask must not be empty".into()));
        }
        Ok(Self { bits })
    }

    fn bit(op: Operator) -> u8 {
        match op {
            Operator::Mutualism => 0b001,
            Operator::Commensalism => 0b010,
            Operator::Parasitism => 0b100,
        }
    }

    pub fn contains(self, op: Operator) -> bool {
        self.bits & Self::bit(op) != 0
    }

    /// Enabled operators in canonical order.
    pub fn operators(self) -> Vec<Operator> {
        Operator::ALL
            .into_iter()
            .filter(|&op| self.contains(op))
            .collect()
    }

    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    /// Masks used by the single-operator ablation, full mask first.
    pub fn ablation_set() -> [OperatorMask; 4] {
        [
            OperatorMask::ALL,
            OperatorMask::only(Operator::Mutualism),
            OperatorMask::only(Operator::Commensalism),
            OperatorMask::only(Operator::Parasitism),
        ]
    }
}

impl Default for OperatorMask {
    fn default() -> Self {
        Self::ALL
    }
}

impl fmt::Display for OperatorMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == Self::ALL {
            return f.write_str("all");
        }
        let names: Vec<_> = self.operators().into_iter().map(Operator::name).collect();
        f.write_str(&names.join("+"))
    }
}

impl FromStr for OperatorMask {
    type Err = Error;

    /// Accepts `all`, or operator names (or their first letter) joined by
    /// `+` or `,`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        if s == "all" {
            return Ok(Self::ALL);
        }
        let ops = s
            .split(['+', ','])
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| match t {
                "mutualism" | "m" => Ok(Operator::Mutualism),
                "commensalism" | "c" => Ok(Operator::Commensalism),
                "parasitism" | "p" => Ok(Operator::Parasitism),
                other => Err(Error::Config(format!(
                    "unknown operator `{other}` (expected mutualism, commensalism, parasitism or all)"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_operators(&ops)
    }
}

impl Serialize for OperatorMask {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for OperatorMask {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// How the random factors of the mutualism and commensalism moves are drawn.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepScaling {
    /// One scalar per move, multiplying the whole step vector.
    Scalar,
    /// An independent factor for every coordinate.
    #[default]
    PerCoordinate,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseSchedule {
    /// Run the sub-population phases one after another.
    #[default]
    Sequential,
    /// Run the sub-population phases on the rayon pool. Results are
    /// bit-identical to `Sequential`.
    Concurrent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaisConfig {
    pub population_size: usize,
    pub max_iterations: usize,
    /// Overrides the problem's own tolerance when set.
    #[serde(default)]
    pub tolerance: Option<f64>,
    #[serde(default)]
    pub operator_mask: OperatorMask,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub step_scaling: StepScaling,
    #[serde(default)]
    pub schedule: PhaseSchedule,
}

impl SaisConfig {
    pub fn new(population_size: usize, max_iterations: usize) -> Self {
        Self {
            population_size,
            max_iterations,
            tolerance: None,
            operator_mask: OperatorMask::ALL,
            seed: 0,
            step_scaling: StepScaling::default(),
            schedule: PhaseSchedule::Sequential,
        }
    }

    pub fn with_mask(mut self, mask: OperatorMask) -> Self {
        self.operator_mask = mask;
        self
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = Some(tolerance);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.operator_mask.is_empty() {
            return Err(Error::Config("operator mask must not be empty".into()));
        }
        let parts = self.operator_mask.len();
        if self.population_size < parts.max(1) {
            return Err(Error::Config(format!(
                "population size {} is too small for {} operator group(s)",
                self.population_size, parts
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::Config("max_iterations must be positive".into()));
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0) {
                return Err(Error::Config(format!("tolerance must be > 0, got {t}")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mask_parse_and_display() {
        assert_eq!("all".parse::<OperatorMask>().unwrap(), OperatorMask::ALL);
        assert_eq!("m+c+p".parse::<OperatorMask>().unwrap().to_string(), "all");
        let mp: OperatorMask = "parasitism,mutualism".parse().unwrap();
        assert_eq!(mp.to_string(), "mutualism+parasitism");
        assert_eq!(
            mp.operators(),
            vec![Operator::Mutualism, Operator::Parasitism]
        );
        assert!("".parse::<OperatorMask>().is_err());
        assert!("x".parse::<OperatorMask>().is_err());
    }

    #[test]
    fn config_validation() {
        assert!(SaisConfig::new(3, 1).validate().is_ok());
        assert!(SaisConfig::new(2, 1).validate().is_err());
        assert!(SaisConfig::new(1, 1)
            .with_mask(OperatorMask::only(Operator::Parasitism))
            .validate()
            .is_ok());
        assert!(SaisConfig::new(3, 0).validate().is_err());
        assert!(SaisConfig::new(3, 1)
            .with_tolerance(0.0)
            .validate()
            .is_err());
        assert!(SaisConfig::new(3, 1)
            .with_tolerance(f64::INFINITY)
            .validate()
            .is_ok());
    }

    #[test]
    fn mask_serde_as_string() {
        let m = OperatorMask::only(Operator::Commensalism);
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, "\"commensalism\"");
        assert_eq!(serde_json::from_str::<OperatorMask>(&json).unwrap(), m);
    }
}
