//! Dynamical total-coherence measures of quantum channels.
//!
//! Two families: the largest increase of a static measure over input states
//! ([`t2_closed_form`], [`delta_c_max`]) and the distance to the unital channels
//! ([`t_diamond`], [`t_one`], [`t_re`]).

mod analytic;
mod distance;
pub mod unital;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub use analytic::{delta_c_max, t2_closed_form, t2_decomposition, T2Decomposition};
pub use distance::{channel_divergence, t_diamond, t_diamond_with, t_one, t_re};
pub(crate) use distance::sphere_max;

use crate::channels::{DensityMatrix, KrausChannel};
use crate::error::{Error, Result};
use crate::static_coherence::StaticMeasureId;

/// Multistart settings shared by the numeric measures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimizerConfig {
    pub multistart_count: usize,
    pub max_iterations: usize,
    pub step_tolerance: f64,
    pub value_tolerance: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            multistart_count: 32,
            max_iterations: 500,
            step_tolerance: 1e-10,
            value_tolerance: 1e-12,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn check(&self) -> Result<()> {
        if self.multistart_count == 0 || self.max_iterations == 0 {
            return Err(Error::InvalidArgument("optimizer counts must be at least 1".into()));
        }
        if !(self.step_tolerance > 0.0 && self.value_tolerance > 0.0) {
            return Err(Error::InvalidArgument("optimizer tolerances must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Numeric,
    Sdp,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ClosedForm => "closed_form",
            Method::Numeric => "numeric",
            Method::Sdp => "sdp",
        })
    }
}

/// A measure value with its witnesses and solver diagnostics.
#[derive(Debug, Clone)]
pub struct MeasureReport {
    pub value: f64,
    /// Maximising input state, when the measure has one.
    pub witness_state: Option<DensityMatrix>,
    /// Nearest free channel, when the measure has one.
    pub witness_channel: Option<KrausChannel>,
    pub method: Method,
    pub diagnostics: BTreeMap<String, f64>,
}

impl MeasureReport {
    pub(crate) fn new(value: f64, method: Method) -> Self {
        Self {
            value: value.max(0.0),
            witness_state: None,
            witness_channel: None,
            method,
            diagnostics: BTreeMap::new(),
        }
    }

    pub(crate) fn diag(mut self, key: &str, value: f64) -> Self {
        self.diagnostics.insert(key.to_string(), value);
        self
    }

    /// Duality gap for SDP values, multistart spread for numeric ones, 0 for closed forms.
    pub fn gap_or_spread(&self) -> f64 {
        self.diagnostics
            .get("gap")
            .or_else(|| self.diagnostics.get("spread"))
            .copied()
            .unwrap_or(0.0)
    }
}

/// Every measure the command line can evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MeasureId {
    T2,
    TDiamond,
    T1,
    TRe,
    TReTilde,
}

impl MeasureId {
    pub const ALL: [MeasureId; 5] = [
        MeasureId::T2,
        MeasureId::TDiamond,
        MeasureId::T1,
        MeasureId::TRe,
        MeasureId::TReTilde,
    ];

    pub fn qubit_only(self) -> bool {
        matches!(self, MeasureId::T2 | MeasureId::T1 | MeasureId::TRe)
    }

    pub fn evaluate(self, ch: &KrausChannel, cfg: &OptimizerConfig, gap_tol: f64) -> Result<MeasureReport> {
        match self {
            MeasureId::T2 => t2_closed_form(ch),
            MeasureId::TDiamond => t_diamond_with(ch, gap_tol),
            MeasureId::T1 => t_one(ch, cfg),
            MeasureId::TRe => t_re(ch, cfg),
            MeasureId::TReTilde => delta_c_max(ch, StaticMeasureId::CRE, cfg),
        }
    }
}

impl fmt::Display for MeasureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MeasureId::T2 => "t2",
            MeasureId::TDiamond => "tdiamond",
            MeasureId::T1 => "t1",
            MeasureId::TRe => "tre",
            MeasureId::TReTilde => "tre-tilde",
        })
    }
}

impl FromStr for MeasureId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        MeasureId::ALL
            .into_iter()
            .find(|m| m.to_string() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown measure {s:?}")))
    }
}

pub(crate) fn require_qubit(ch: &KrausChannel, what: &str) -> Result<()> {
    if ch.is_qubit() {
        Ok(())
    } else {
        Err(Error::Dimension(format!(
            "{what} needs a qubit channel, got {}->{}",
            ch.dim_in(),
            ch.dim_out()
        )))
    }
}
