//! Projective measurement, collapse, pointer entanglement and dephasing.
//!
//! Mixtures are explicit branch ensembles rather than density matrices:
//! feed-forward needs the classical record that rides along each branch.

use std::collections::BTreeMap;

use crate::error::{Result, SimError};
use crate::record::{EventPredicate, OutcomeRecord, Pattern};
use crate::state::{BasisConfig, ModeLabel, PureState, PRUNE_TOLERANCE};

/// Probabilities below this are treated as zero-probability outcomes and
/// dropped from measurement output; keeps branch trees finite.
pub const PROBABILITY_THRESHOLD: f64 = 1e-14;

/// Conjunction of per-mode occupation constraints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Projector {
    constraints: Vec<(ModeLabel, bool)>,
}

impl Projector {
    pub fn new(constraints: impl IntoIterator<Item = (ModeLabel, bool)>) -> Result<Self> {
        let mut seen: BTreeMap<ModeLabel, bool> = BTreeMap::new();
        for (mode, value) in constraints {
            match seen.get(&mode) {
                Some(&prev) if prev != value => {
                    return Err(SimError::ConfigurationMismatch(format!(
                        "contradictory constraints on mode `{mode}`"
                    )))
                }
                _ => {
                    seen.insert(mode, value);
                }
            }
        }
        Ok(Projector {
            constraints: seen.into_iter().collect(),
        })
    }

    pub fn from_pattern(pattern: &Pattern) -> Self {
        Projector {
            constraints: pattern.entries().map(|(m, v)| (m.clone(), v)).collect(),
        }
    }

    pub fn constraints(&self) -> &[(ModeLabel, bool)] {
        &self.constraints
    }

    pub fn matches(&self, config: &BasisConfig) -> bool {
        self.constraints
            .iter()
            .all(|(m, v)| config.occupation(m) == Some(*v))
    }

    fn check_modes(&self, state: &PureState) -> Result<()> {
        for (mode, _) in &self.constraints {
            if !state.modes().contains(mode) {
                return Err(SimError::ConfigurationMismatch(format!(
                    "projector constrains unknown mode `{mode}`"
                )));
            }
        }
        Ok(())
    }
}

/// One classical branch of a mixture: a unit state, its weight, and the
/// records accumulated along the way.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub weight: f64,
    pub state: PureState,
    pub record: OutcomeRecord,
}

/// FAPP mixture: a list of weighted pure branches.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Ensemble {
    pub branches: Vec<Branch>,
}

impl Ensemble {
    pub fn total_weight(&self) -> f64 {
        self.branches.iter().map(|b| b.weight).sum()
    }

    /// Marginal occupation distribution over `modes`, weighted by branch.
    pub fn marginal(&self, modes: &[ModeLabel]) -> Result<BTreeMap<Pattern, f64>> {
        let mut out: BTreeMap<Pattern, f64> = BTreeMap::new();
        for branch in &self.branches {
            for (pattern, p) in marginal(&branch.state, modes)? {
                *out.entry(pattern).or_insert(0.0) += branch.weight * p;
            }
        }
        Ok(out)
    }
}

/// Result of post-selection: surviving branches renormalized to unit weight,
/// plus the probability mass that was thrown away.
#[derive(Debug, Clone, PartialEq)]
pub struct Postselected {
    pub ensemble: Ensemble,
    pub discarded_weight: f64,
}

/// Born-rule collapse: renormalized projection and its probability.
///
/// A probability-zero projection returns the zero-state sentinel with 0.0
/// rather than an error; only a zero-norm input is undefined.
pub fn collapse(state: &PureState, projector: &Projector) -> Result<(PureState, f64)> {
    if state.is_zero() {
        return Err(SimError::UndefinedState);
    }
    projector.check_modes(state)?;
    let projected: BTreeMap<BasisConfig, _> = state
        .terms()
        .filter(|(config, _)| projector.matches(config))
        .map(|(c, a)| (c.clone(), *a))
        .collect();
    let projected = PureState::from_term_map(state.modes().clone(), projected, PRUNE_TOLERANCE);
    let probability = projected.norm_sq() / state.norm_sq();
    if probability < PROBABILITY_THRESHOLD {
        return Ok((PureState::zero(state.modes().clone()), 0.0));
    }
    Ok((projected.normalized()?, probability))
}

/// Projective measurement of a mode group: one entry per occupation pattern
/// with nonzero probability, each with its collapsed unit-norm state.
pub fn measure(
    state: &PureState,
    modes: &[ModeLabel],
    name: &str,
) -> Result<Vec<(OutcomeRecord, f64, PureState)>> {
    if state.is_zero() {
        return Err(SimError::UndefinedState);
    }
    if modes.is_empty() {
        return Err(SimError::ConfigurationMismatch(
            "measurement needs at least one mode".into(),
        ));
    }
    for mode in modes {
        if !state.modes().contains(mode) {
            return Err(SimError::ConfigurationMismatch(format!(
                "measured mode `{mode}` is not part of the state"
            )));
        }
    }
    let mut partitions: BTreeMap<Pattern, BTreeMap<BasisConfig, _>> = BTreeMap::new();
    for (config, amp) in state.terms() {
        let pattern = Pattern::from_config(config, modes);
        partitions
            .entry(pattern)
            .or_default()
            .insert(config.clone(), *amp);
    }
    let total = state.norm_sq();
    let mut out = Vec::new();
    for (pattern, terms) in partitions {
        let part = PureState::from_term_map(state.modes().clone(), terms, PRUNE_TOLERANCE);
        let probability = part.norm_sq() / total;
        if probability < PROBABILITY_THRESHOLD {
            continue;
        }
        let record = OutcomeRecord::new().with_entry(name, pattern);
        out.push((record, probability, part.normalized()?));
    }
    Ok(out)
}

/// Von Neumann pointer coupling: flips a fresh 0-occupied ancilla on every
/// term where `watched` is occupied. Unitary, and an involution.
pub fn entangle_pointer(
    state: &PureState,
    watched: &ModeLabel,
    pointer: &ModeLabel,
) -> Result<PureState> {
    for mode in [watched, pointer] {
        if !state.modes().contains(mode) {
            return Err(SimError::ConfigurationMismatch(format!(
                "mode `{mode}` is not part of the state"
            )));
        }
    }
    if state
        .terms()
        .any(|(config, _)| config.occupation(pointer) == Some(true))
    {
        return Err(SimError::AncillaNotFresh(pointer.to_string()));
    }
    let terms = state
        .terms()
        .map(|(config, amp)| {
            let config = if config.occupation(watched) == Some(true) {
                config.with(pointer, true)
            } else {
                config.clone()
            };
            (config, *amp)
        })
        .collect();
    Ok(PureState::from_term_map(
        state.modes().clone(),
        terms,
        PRUNE_TOLERANCE,
    ))
}

/// Decoherence in the pointer basis: partitions the state by its occupation
/// pattern on `pointer_modes` and returns the resulting classical mixture.
/// Branch records are empty; the pointer pattern is definite within each
/// branch state and is read out by a later measurement.
pub fn dephase(state: &PureState, pointer_modes: &[ModeLabel]) -> Result<Ensemble> {
    if pointer_modes.is_empty() {
        return Err(SimError::ConfigurationMismatch(
            "dephase needs at least one pointer mode".into(),
        ));
    }
    let outcomes = measure(state, pointer_modes, "__dephase")?;
    let branches = outcomes
        .into_iter()
        .map(|(_, weight, state)| Branch {
            weight,
            state,
            record: OutcomeRecord::new(),
        })
        .collect();
    Ok(Ensemble { branches })
}

/// Marginal occupation distribution of a pure state over `modes`.
/// Sums to the state's squared norm (1 for unit states).
pub fn marginal(state: &PureState, modes: &[ModeLabel]) -> Result<BTreeMap<Pattern, f64>> {
    for mode in modes {
        if !state.modes().contains(mode) {
            return Err(SimError::ConfigurationMismatch(format!(
                "marginal mode `{mode}` is not part of the state"
            )));
        }
    }
    let mut out: BTreeMap<Pattern, f64> = BTreeMap::new();
    for (config, amp) in state.terms() {
        *out.entry(Pattern::from_config(config, modes)).or_insert(0.0) += amp.norm_sqr();
    }
    Ok(out)
}

/// Discards branches whose record fails `keep` and renormalizes the rest.
pub fn postselect(ensemble: &Ensemble, keep: &EventPredicate) -> Result<Postselected> {
    let total = ensemble.total_weight();
    let kept: Vec<Branch> = ensemble
        .branches
        .iter()
        .filter(|b| keep.eval(&b.record))
        .cloned()
        .collect();
    let kept_weight: f64 = kept.iter().map(|b| b.weight).sum();
    if kept.is_empty() || kept_weight < PROBABILITY_THRESHOLD {
        return Err(SimError::EmptyPostselection);
    }
    let branches = kept
        .into_iter()
        .map(|b| Branch {
            weight: b.weight / kept_weight,
            state: b.state,
            record: b.record,
        })
        .collect();
    Ok(Postselected {
        ensemble: Ensemble { branches },
        discarded_weight: total - kept_weight,
    })
}
