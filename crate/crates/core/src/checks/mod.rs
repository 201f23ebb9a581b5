//! Named verification checks, one per acceptance criterion, each producing
//! a [`CheckReport`] with measured and expected values.

mod criteria;
pub mod oracle;

use std::fmt;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::guards::Guards;

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Stated in the source theory.
    Paper,
    /// Computed by an independent method.
    Derived,
    /// Immediate from the definitions.
    Trivial,
}

#[derive(Clone, Debug, Serialize)]
pub struct Measurement {
    pub quantity: String,
    pub measured: String,
    pub expected: String,
    pub provenance: Provenance,
    /// `None` when the measurement is inconclusive.
    pub agrees: Option<bool>,
}

impl Measurement {
    pub fn new(quantity: impl Into<String>, measured: impl fmt::Display, expected: impl fmt::Display, provenance: Provenance) -> Self {
        let (measured, expected) = (measured.to_string(), expected.to_string());
        Measurement {
            quantity: quantity.into(),
            agrees: Some(measured == expected),
            measured,
            expected,
            provenance,
        }
    }

    pub fn boolean(quantity: impl Into<String>, holds: bool, provenance: Provenance) -> Self {
        Measurement::new(quantity, holds, true, provenance)
    }

    /// A three-valued outcome: `Some(true)`, `Some(false)` or inconclusive.
    pub fn verdict(quantity: impl Into<String>, holds: Option<bool>, detail: &str, provenance: Provenance) -> Self {
        let measured = match holds {
            Some(true) => "true".to_string(),
            Some(false) => format!("false: {detail}"),
            None => format!("inconclusive: {detail}"),
        };
        Measurement {
            quantity: quantity.into(),
            measured,
            expected: "true".into(),
            provenance,
            agrees: holds,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail { witness: String },
    Inconclusive { reason: String },
}

impl Outcome {
    pub fn is_pass(&self) -> bool {
        matches!(self, Outcome::Pass)
    }

    fn from_measurements(ms: &[Measurement]) -> Outcome {
        if let Some(m) = ms.iter().find(|m| m.agrees == Some(false)) {
            return Outcome::Fail {
                witness: format!("{}: measured {}, expected {}", m.quantity, m.measured, m.expected),
            };
        }
        if let Some(m) = ms.iter().find(|m| m.agrees.is_none()) {
            return Outcome::Inconclusive {
                reason: format!("{}: {}", m.quantity, m.measured),
            };
        }
        Outcome::Pass
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Pass => write!(f, "pass"),
            Outcome::Fail { witness } => write!(f, "FAIL ({witness})"),
            Outcome::Inconclusive { reason } => write!(f, "inconclusive ({reason})"),
        }
    }
}

/// Parameters of one check run; unused fields stay `None`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Instance {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ring: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl Instance {
    pub fn ring_n(ring: &str, n: usize) -> Self {
        Instance {
            ring: Some(ring.into()),
            n: Some(n),
            ..Default::default()
        }
    }

    pub fn with_depth(mut self, d: usize) -> Self {
        self.depth = Some(d);
        self
    }

    pub fn labelled(label: &str) -> Self {
        Instance {
            label: Some(label.into()),
            ..Default::default()
        }
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(l) = &self.label {
            parts.push(l.clone());
        }
        if let Some(r) = &self.ring {
            parts.push(format!("ring={r}"));
        }
        if let Some(n) = self.n {
            parts.push(format!("n={n}"));
        }
        if let Some(d) = self.depth {
            parts.push(format!("D={d}"));
        }
        if let Some(c) = self.cap {
            parts.push(format!("cap={c}"));
        }
        if let Some(l) = self.ell {
            parts.push(format!("ell={l}"));
        }
        write!(f, "{}", parts.join(" "))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub criterion: u8,
    pub instance: Instance,
    pub outcome: Outcome,
    pub measurements: Vec<Measurement>,
    /// Wall-clock time; left out of JSON unless requested, so that reports
    /// stay byte-stable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Profile {
    /// Every instance named by the acceptance criteria.
    Desk,
    /// The first instance of each check.
    Quick,
}

impl std::str::FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "desk" => Ok(Profile::Desk),
            "quick" => Ok(Profile::Quick),
            _ => Err(Error::InvalidInput(format!("unknown profile `{s}` (expected desk or quick)"))),
        }
    }
}

type Runner = fn(&Instance, &Guards) -> Result<Vec<Measurement>>;

pub struct CheckDef {
    pub name: &'static str,
    pub criterion: u8,
    pub title: &'static str,
    pub instances: fn() -> Vec<Instance>,
    run: Runner,
}

impl CheckDef {
    pub fn profile_instances(&self, profile: Profile) -> Vec<Instance> {
        let all = (self.instances)();
        match profile {
            Profile::Desk => all,
            Profile::Quick => all.into_iter().take(1).collect(),
        }
    }

    /// Runs one instance. Guard and input errors propagate; a violated
    /// consistency condition becomes a failing report.
    pub fn run(&self, inst: &Instance, guards: &Guards) -> Result<CheckReport> {
        let start = Instant::now();
        let measurements = match (self.run)(inst, guards) {
            Ok(ms) => ms,
            Err(e @ (Error::Consistency(_) | Error::Axiom(_) | Error::Regularity { .. } | Error::Morse(_))) => {
                vec![Measurement {
                    quantity: "construction".into(),
                    measured: e.to_string(),
                    expected: "no violation".into(),
                    provenance: Provenance::Paper,
                    agrees: Some(false),
                }]
            }
            Err(e) => return Err(e),
        };
        Ok(CheckReport {
            check: self.name.into(),
            criterion: self.criterion,
            instance: inst.clone(),
            outcome: Outcome::from_measurements(&measurements),
            measurements,
            elapsed_ms: Some(start.elapsed().as_millis() as u64),
        })
    }
}

pub fn registry() -> &'static [CheckDef] {
    criteria::REGISTRY
}

pub fn find(name: &str) -> Option<&'static CheckDef> {
    registry().iter().find(|c| c.name == name)
}

pub fn by_criterion(k: u8) -> Option<&'static CheckDef> {
    registry().iter().find(|c| c.criterion == k)
}
