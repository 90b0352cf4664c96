//! Unitary optical elements and their forward / inverse application.
//!
//! The symmetric beam splitter follows the convention of the single-photon
//! rule |a⟩ → (1/√2)|a⟩ + (i/√2)|b⟩, with the factor i on the reflected
//! amplitude in both inputs. Mirrors are plain relabelings; a scenario that
//! wants a mirror phase adds an explicit [`Element::Phase`].

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Result, SimError};
use crate::state::{Amplitude, BasisConfig, ModeLabel, PureState, PRUNE_TOLERANCE};

/// One lossless optical element acting in place on labeled modes.
#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    /// Symmetric beam splitter coupling rails `a` and `b`.
    BeamSplitter { a: ModeLabel, b: ModeLabel },
    /// Phase e^{iθ} on terms where `mode` is occupied.
    Phase { mode: ModeLabel, theta: f64 },
    /// Bijective renaming of modes (old → new).
    Relabel { pairs: Vec<(ModeLabel, ModeLabel)> },
}

impl Element {
    /// Modes this element touches (for wing membership and audit diffing).
    pub fn touched_modes(&self) -> BTreeSet<ModeLabel> {
        match self {
            Element::BeamSplitter { a, b } => [a.clone(), b.clone()].into_iter().collect(),
            Element::Phase { mode, .. } => [mode.clone()].into_iter().collect(),
            Element::Relabel { pairs } => pairs
                .iter()
                .flat_map(|(o, n)| [o.clone(), n.clone()])
                .collect(),
        }
    }
}

/// Ordered sequence of elements.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    pub steps: Vec<Element>,
}

impl Circuit {
    pub fn new(steps: Vec<Element>) -> Self {
        Circuit { steps }
    }

    /// Image of a mode set under the circuit's relabelings.
    pub fn output_modes(&self, input: &BTreeSet<ModeLabel>) -> Result<BTreeSet<ModeLabel>> {
        let mut modes = input.clone();
        for step in &self.steps {
            if let Element::Relabel { pairs } = step {
                let map = relabel_map(pairs, &modes, Direction::Forward)?;
                modes = modes
                    .into_iter()
                    .map(|m| map.get(&m).cloned().unwrap_or(m))
                    .collect();
            }
        }
        Ok(modes)
    }
}

/// Whether an element is applied as written or as its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Reverse,
}

/// Applies one element to a state, forward or as the conjugate transpose.
pub fn apply_element(state: &PureState, element: &Element, dir: Direction) -> Result<PureState> {
    match element {
        Element::BeamSplitter { a, b } => apply_beam_splitter(state, a, b, dir),
        Element::Phase { mode, theta } => apply_phase(state, mode, *theta, dir),
        Element::Relabel { pairs } => apply_relabel(state, pairs, dir),
    }
}

/// Applies a circuit; `Reverse` applies inverted steps in reversed order, so
/// Forward-then-Reverse is the identity up to floating point.
pub fn apply_circuit(state: &PureState, circuit: &Circuit, dir: Direction) -> Result<PureState> {
    let mut current = state.clone();
    match dir {
        Direction::Forward => {
            for step in &circuit.steps {
                current = apply_element(&current, step, Direction::Forward)?;
            }
        }
        Direction::Reverse => {
            for step in circuit.steps.iter().rev() {
                current = apply_element(&current, step, Direction::Reverse)?;
            }
        }
    }
    Ok(current)
}

fn check_mode(state: &PureState, mode: &ModeLabel) -> Result<()> {
    if state.modes().contains(mode) {
        Ok(())
    } else {
        Err(SimError::ConfigurationMismatch(format!(
            "mode `{mode}` is not part of the state's mode set"
        )))
    }
}

fn apply_beam_splitter(
    state: &PureState,
    a: &ModeLabel,
    b: &ModeLabel,
    dir: Direction,
) -> Result<PureState> {
    if a == b {
        return Err(SimError::ConfigurationMismatch(
            "beam splitter needs two distinct modes".into(),
        ));
    }
    check_mode(state, a)?;
    check_mode(state, b)?;
    let stay = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let cross = match dir {
        Direction::Forward => Complex64::new(0.0, FRAC_1_SQRT_2),
        Direction::Reverse => Complex64::new(0.0, -FRAC_1_SQRT_2),
    };
    let mut terms: BTreeMap<BasisConfig, Amplitude> = BTreeMap::new();
    let mut add = |config: BasisConfig, amp: Amplitude| {
        *terms.entry(config).or_insert(Amplitude::new(0.0, 0.0)) += amp;
    };
    for (config, amp) in state.terms() {
        let occ_a = config.occupation(a).unwrap_or(false);
        let occ_b = config.occupation(b).unwrap_or(false);
        match (occ_a, occ_b) {
            (false, false) => add(config.clone(), *amp),
            (true, true) => {
                return Err(SimError::MultiPhotonUnsupported {
                    a: a.to_string(),
                    b: b.to_string(),
                })
            }
            (true, false) => {
                add(config.clone(), amp * stay);
                add(config.with(a, false).with(b, true), amp * cross);
            }
            (false, true) => {
                add(config.with(a, true).with(b, false), amp * cross);
                add(config.clone(), amp * stay);
            }
        }
    }
    Ok(PureState::from_term_map(
        state.modes().clone(),
        terms,
        PRUNE_TOLERANCE,
    ))
}

fn apply_phase(state: &PureState, mode: &ModeLabel, theta: f64, dir: Direction) -> Result<PureState> {
    check_mode(state, mode)?;
    let angle = match dir {
        Direction::Forward => theta,
        Direction::Reverse => -theta,
    };
    let factor = Complex64::from_polar(1.0, angle);
    let terms = state
        .terms()
        .map(|(config, amp)| {
            let amp = if config.occupation(mode).unwrap_or(false) {
                amp * factor
            } else {
                *amp
            };
            (config.clone(), amp)
        })
        .collect();
    Ok(PureState::from_term_map(
        state.modes().clone(),
        terms,
        PRUNE_TOLERANCE,
    ))
}

/// Validated old→new map for the requested direction.
fn relabel_map(
    pairs: &[(ModeLabel, ModeLabel)],
    ambient: &BTreeSet<ModeLabel>,
    dir: Direction,
) -> Result<BTreeMap<ModeLabel, ModeLabel>> {
    let oriented: Vec<(ModeLabel, ModeLabel)> = match dir {
        Direction::Forward => pairs.to_vec(),
        Direction::Reverse => pairs.iter().map(|(o, n)| (n.clone(), o.clone())).collect(),
    };
    let mut map = BTreeMap::new();
    let mut targets = BTreeSet::new();
    for (old, new) in &oriented {
        if !ambient.contains(old) {
            return Err(SimError::ConfigurationMismatch(format!(
                "relabel source `{old}` is not part of the state's mode set"
            )));
        }
        if map.insert(old.clone(), new.clone()).is_some() {
            return Err(SimError::LabelCollision(format!(
                "mode `{old}` relabeled twice"
            )));
        }
        if !targets.insert(new.clone()) {
            return Err(SimError::LabelCollision(format!(
                "relabel target `{new}` used twice"
            )));
        }
    }
    // targets must not collide with labels the relabel leaves untouched
    for new in &targets {
        if ambient.contains(new) && !map.contains_key(new) {
            return Err(SimError::LabelCollision(format!(
                "relabel target `{new}` collides with an untouched mode"
            )));
        }
    }
    Ok(map)
}

fn apply_relabel(
    state: &PureState,
    pairs: &[(ModeLabel, ModeLabel)],
    dir: Direction,
) -> Result<PureState> {
    let map = relabel_map(pairs, state.modes(), dir)?;
    let modes: BTreeSet<ModeLabel> = state
        .modes()
        .iter()
        .map(|m| map.get(m).cloned().unwrap_or_else(|| m.clone()))
        .collect();
    let terms = state
        .terms()
        .map(|(config, amp)| (config.rename(&map), *amp))
        .collect();
    Ok(PureState::from_term_map(modes, terms, PRUNE_TOLERANCE))
}
