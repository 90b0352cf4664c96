//! Shared randomized generators for the integration suites.

#![allow(dead_code)]

use erasim::optics::{Circuit, Element};
use erasim::state::{Amplitude, BasisConfig, ModeLabel, PureState};
use rand::prelude::*;
use rand::seq::SliceRandom;

pub fn mode(name: &str) -> ModeLabel {
    ModeLabel::new(name).unwrap()
}

/// The six rails the randomized circuit suites run on.
pub fn six_modes() -> Vec<ModeLabel> {
    (0..6).map(|i| mode(&format!("m{i}"))).collect()
}

/// Configuration with exactly rail `hot` occupied.
pub fn one_hot(modes: &[ModeLabel], hot: usize) -> BasisConfig {
    BasisConfig::new(
        modes
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i == hot)),
    )
}

/// Random unit superposition over the given one-hot rails.
pub fn random_state(rng: &mut impl Rng, modes: &[ModeLabel], rails: &[usize]) -> PureState {
    let raw: Vec<Amplitude> = rails
        .iter()
        .map(|_| Amplitude::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm: f64 = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    PureState::superpose(
        rails
            .iter()
            .zip(&raw)
            .map(|(&hot, a)| (one_hot(modes, hot), a / norm)),
    )
    .unwrap()
}

/// Random circuit of up to `max_elements` beam splitters and phase shifts
/// over the given modes (mode names are left alone so source-support
/// comparisons stay direct).
pub fn random_circuit(rng: &mut impl Rng, modes: &[ModeLabel], max_elements: usize) -> Circuit {
    let count = rng.gen_range(1..=max_elements);
    let steps = (0..count).map(|_| random_element(rng, modes)).collect();
    Circuit::new(steps)
}

pub fn random_element(rng: &mut impl Rng, modes: &[ModeLabel]) -> Element {
    if rng.gen_bool(0.5) {
        let picked: Vec<&ModeLabel> = modes.choose_multiple(rng, 2).collect();
        Element::BeamSplitter { a: picked[0].clone(), b: picked[1].clone() }
    } else {
        Element::Phase {
            mode: modes.choose(rng).unwrap().clone(),
            theta: rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
        }
    }
}

/// Random valid scenario text: a handful of rails, a one- or two-term unit
/// state, some optics, a full readout, sometimes an event-probability audit.
pub fn random_scenario_text(rng: &mut impl Rng) -> String {
    let n = rng.gen_range(2..=5usize);
    let modes: Vec<String> = (0..n).map(|i| format!("m{i}")).collect();
    let pattern = |hot: usize| -> String {
        modes
            .iter()
            .enumerate()
            .map(|(i, m)| format!("{m}={}", usize::from(i == hot)))
            .collect::<Vec<_>>()
            .join(",")
    };
    let mut text = String::new();
    text.push_str(&format!("scenario random-{}\n", rng.gen_range(0..1_000_000)));
    text.push_str(&format!("modes {}\n", modes.join(" ")));
    if rng.gen_bool(0.4) {
        text.push_str(&format!("state 1 |{}>\n", pattern(rng.gen_range(0..n))));
    } else {
        let a = rng.gen_range(0..n);
        let b = (a + rng.gen_range(1..n)) % n;
        let coeffs = ["1/sqrt2", "i/sqrt2", "-1/sqrt2", "-i/sqrt2"];
        text.push_str(&format!(
            "state {} |{}> + {} |{}>\n",
            coeffs.choose(rng).unwrap(),
            pattern(a),
            coeffs.choose(rng).unwrap(),
            pattern(b)
        ));
    }
    for _ in 0..rng.gen_range(0..4usize) {
        if rng.gen_bool(0.6) {
            let picked: Vec<&String> = modes.choose_multiple(rng, 2).collect();
            text.push_str(&format!("step bs {} {}\n", picked[0], picked[1]));
        } else {
            text.push_str(&format!(
                "step phase {} {}\n",
                modes.choose(rng).unwrap(),
                rng.gen_range(-3.0..3.0)
            ));
        }
    }
    text.push_str(&format!("step measure {} as D\n", modes.join(" ")));
    if rng.gen_bool(0.5) {
        text.push_str(&format!("audit consistency D=={}\n", pattern(rng.gen_range(0..n))));
    }
    text
}
