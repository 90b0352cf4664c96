//! Backward-in-time collapse analysis.
//!
//! Reverse-evolves a collapsed post-measurement state through the optical
//! circuit and splits the result into amplitude on configurations the source
//! could have prepared versus amplitude on source-forbidden configurations.
//! A nonzero forbidden component is the inconsistency of applying the
//! collapse rule into the past.

use std::collections::BTreeSet;

use crate::error::{Result, SimError};
use crate::measure::{collapse, Projector, PROBABILITY_THRESHOLD};
use crate::optics::{apply_circuit, Circuit, Direction};
use crate::state::{Amplitude, BasisConfig, ModeLabel, PureState};

/// The set of basis configurations a physical source can actually emit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceSupport {
    allowed: BTreeSet<BasisConfig>,
}

impl SourceSupport {
    pub fn new(allowed: impl IntoIterator<Item = BasisConfig>) -> Result<Self> {
        let allowed: BTreeSet<BasisConfig> = allowed.into_iter().collect();
        let mut iter = allowed.iter();
        let first = iter
            .next()
            .ok_or_else(|| SimError::ConfigurationMismatch("empty source support".into()))?;
        let modes: BTreeSet<&ModeLabel> = first.modes().collect();
        for config in iter {
            if config.modes().collect::<BTreeSet<_>>() != modes {
                return Err(SimError::ConfigurationMismatch(
                    "source support configs do not share one mode set".into(),
                ));
            }
        }
        Ok(SourceSupport { allowed })
    }

    pub fn modes(&self) -> BTreeSet<ModeLabel> {
        self.allowed
            .iter()
            .next()
            .map(|c| c.modes().cloned().collect())
            .unwrap_or_default()
    }

    pub fn allowed(&self) -> impl Iterator<Item = &BasisConfig> {
        self.allowed.iter()
    }

    pub fn contains(&self, config: &BasisConfig) -> bool {
        self.allowed.contains(config)
    }

    /// Equal superposition over the allowed configurations.
    fn uniform_state(&self) -> Result<PureState> {
        let amp = Amplitude::new(1.0 / (self.allowed.len() as f64).sqrt(), 0.0);
        PureState::superpose(self.allowed.iter().map(|c| (c.clone(), amp)))
    }
}

/// Decomposition of a backward-evolved collapsed state against the source.
#[derive(Debug, Clone, PartialEq)]
pub struct ReversalReport {
    pub reversed_state: PureState,
    pub allowed_component: Vec<(BasisConfig, Amplitude)>,
    pub forbidden_component: Vec<(BasisConfig, Amplitude)>,
    pub forbidden_probability: f64,
}

/// Scalar extraction used by the CLI and audits.
pub fn forbidden_probability(report: &ReversalReport) -> f64 {
    report.forbidden_probability
}

/// The headline check: collapse at the circuit output, run the circuit
/// backward, and look for amplitude outside the source support.
///
/// The collapsed state fed backward is the bare projected configuration:
/// the projector's constrained modes take their required occupation and
/// every unconstrained output mode is empty.
pub fn reverse_collapse_analysis(
    initial_support: &SourceSupport,
    circuit: &Circuit,
    projector: &Projector,
) -> Result<ReversalReport> {
    let output_modes = circuit.output_modes(&initial_support.modes())?;
    for (mode, _) in projector.constraints() {
        if !output_modes.contains(mode) {
            return Err(SimError::ConfigurationMismatch(format!(
                "projector constrains `{mode}`, which is not a circuit output mode"
            )));
        }
    }
    // the projector must select a nonzero-probability event on the
    // forward-evolved uniform test state
    let forward = apply_circuit(&initial_support.uniform_state()?, circuit, Direction::Forward)?;
    let (_, probability) = collapse(&forward, projector)?;
    if probability < PROBABILITY_THRESHOLD {
        return Err(SimError::EmptyPostselection);
    }
    let collapsed_config = BasisConfig::new(output_modes.iter().map(|m| {
        let value = projector
            .constraints()
            .iter()
            .find(|(cm, _)| cm == m)
            .map(|(_, v)| *v)
            .unwrap_or(false);
        (m.clone(), value)
    }));
    let collapsed = PureState::basis_state(output_modes, collapsed_config)?;
    reverse_state_analysis(initial_support, circuit, &collapsed)
}

/// Reverse-evolves an arbitrary output-side state and partitions the result
/// against the support. Used directly for the consistency baseline, where
/// the uncollapsed forward image must come back entirely allowed.
pub fn reverse_state_analysis(
    initial_support: &SourceSupport,
    circuit: &Circuit,
    output_state: &PureState,
) -> Result<ReversalReport> {
    if output_state.is_zero() {
        return Err(SimError::UndefinedState);
    }
    let reversed = apply_circuit(output_state, circuit, Direction::Reverse)?;
    let mut allowed_component = Vec::new();
    let mut forbidden_component = Vec::new();
    let mut forbidden_sq = 0.0;
    for (config, amp) in reversed.terms() {
        if initial_support.contains(config) {
            allowed_component.push((config.clone(), *amp));
        } else {
            forbidden_sq += amp.norm_sqr();
            forbidden_component.push((config.clone(), *amp));
        }
    }
    let forbidden_probability = forbidden_sq / reversed.norm_sq();
    Ok(ReversalReport {
        reversed_state: reversed,
        allowed_component,
        forbidden_component,
        forbidden_probability,
    })
}
