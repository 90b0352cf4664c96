//! The four protocol-level audits: no-signaling, quantum–classical-cut
//! invariance, causal consistency, and the filtering-vs-switching
//! equivalence for contingent detection.

use std::collections::BTreeMap;

use crate::error::{Result, SimError};
use crate::measure::PROBABILITY_THRESHOLD;
use crate::protocol::{run_protocol, JointDistribution, Protocol, Step};
use crate::record::{EventPredicate, OutcomeRecord};
use crate::state::{BasisConfig, ModeLabel, PureState};

/// Marginal statistics on one wing must not depend on what the other wing
/// does. Returns the maximum absolute difference between the two protocols'
/// marginal distributions over the wing's records.
///
/// Precondition: the protocols share initial state and wing partition, and
/// differ only in steps whose modes lie entirely outside `wing`.
pub fn no_signaling_audit(pa: &Protocol, pb: &Protocol, wing: &str) -> Result<f64> {
    if pa.initial != pb.initial {
        return Err(SimError::AuditPrecondition(
            "protocols do not share an initial state".into(),
        ));
    }
    if pa.wings != pb.wings {
        return Err(SimError::AuditPrecondition(
            "protocols do not share a wing partition".into(),
        ));
    }
    let members = pa
        .wings
        .get(wing)
        .ok_or_else(|| SimError::AuditPrecondition(format!("no wing named `{wing}`")))?;
    let touching = |p: &Protocol| -> Vec<Step> {
        p.steps
            .iter()
            .filter(|s| !s.touched_modes().is_disjoint(members))
            .cloned()
            .collect()
    };
    if touching(pa) != touching(pb) {
        return Err(SimError::AuditPrecondition(format!(
            "protocols differ in steps that touch wing `{wing}`"
        )));
    }
    let names = pa.wing_records(wing)?;
    let (da, _) = run_protocol(pa)?;
    let (db, _) = run_protocol(pb)?;
    Ok(da
        .marginal_records(&names)
        .max_deviation(&db.marginal_records(&names)))
}

/// Replaces the Measure at step `k` by pointer entanglement with dephasing
/// and readout at the very end, and compares joint distributions. Standard
/// theory predicts the cut placement is irrelevant, so the deviation should
/// vanish for every measurement not consumed by a later conditional.
pub fn cut_invariance_audit(protocol: &Protocol, k: usize) -> Result<f64> {
    let Some(Step::Measure { modes, name }) = protocol.steps.get(k) else {
        return Err(SimError::AuditPrecondition(format!(
            "step {k} is not a measurement"
        )));
    };
    for (i, step) in protocol.steps.iter().enumerate().skip(k + 1) {
        if let Step::Conditional { condition, .. } = step {
            if condition.referenced_records().contains(name) {
                return Err(SimError::CausalityViolation(format!(
                    "record `{name}` is consumed by the conditional at step {i}; \
                     its measurement cannot be deferred"
                )));
            }
        }
    }
    // fresh pointer rails, one per measured mode
    let mut pointer_of: BTreeMap<ModeLabel, ModeLabel> = BTreeMap::new();
    for mode in modes {
        let pointer = ModeLabel::new(&format!("__cut_{name}_{mode}"))?;
        if protocol.modes().contains(&pointer) {
            return Err(SimError::LabelCollision(pointer.to_string()));
        }
        pointer_of.insert(mode.clone(), pointer);
    }
    let pointers: Vec<ModeLabel> = pointer_of.values().cloned().collect();
    let mut initial = protocol.initial.clone();
    for pointer in &pointers {
        let fresh = PureState::basis_state(
            [pointer.clone()],
            BasisConfig::new([(pointer.clone(), false)]),
        )?;
        initial = initial.tensor(&fresh)?;
    }
    let mut steps = Vec::with_capacity(protocol.steps.len() + pointers.len() + 2);
    for (i, step) in protocol.steps.iter().enumerate() {
        if i == k {
            for mode in modes {
                steps.push(Step::Pointer {
                    watched: mode.clone(),
                    pointer: pointer_of[mode].clone(),
                });
            }
        } else {
            steps.push(step.clone());
        }
    }
    steps.push(Step::Dephase { pointers: pointers.clone() });
    steps.push(Step::Measure { modes: pointers, name: name.clone() });
    let deferred = Protocol::new(initial, steps, protocol.wings.clone())?;

    let (direct, _) = run_protocol(protocol)?;
    let (shifted, _) = run_protocol(&deferred)?;
    // express the deferred readout under the original mode names
    let reverse_map: BTreeMap<ModeLabel, ModeLabel> = pointer_of
        .into_iter()
        .map(|(mode, pointer)| (pointer, mode))
        .collect();
    let translated: BTreeMap<OutcomeRecord, f64> = shifted
        .entries()
        .map(|(record, p)| (record.rename_pattern_modes(name, &reverse_map), p))
        .collect();
    Ok(direct.max_deviation(&JointDistribution::from_entries(translated)))
}

/// Joint probability the protocol assigns to a (purportedly paradoxical)
/// event. The unitary prediction for a genuine causal loop is zero.
pub fn causal_consistency_audit(protocol: &Protocol, forbidden: &EventPredicate) -> Result<f64> {
    let (distribution, _) = run_protocol(protocol)?;
    Ok(distribution.probability_of(forbidden))
}

/// Outcome of [`filtering_vs_switching_equivalence`].
#[derive(Debug, Clone, PartialEq)]
pub struct FilterEquivalenceReport {
    /// Max difference between the switched protocol conditioned on the gate
    /// and the filtered protocol after post-selection.
    pub deviation: f64,
    /// Probability of the gating event.
    pub gate_probability: f64,
    /// Weight discarded by the post-selection, 1 − P(gate).
    pub discarded_weight: f64,
}

/// Compares contingent switching against collect-everything-then-filter.
///
/// `p_switch` must contain a Conditional gated on `gate`; `p_filter` must be
/// `p_switch` with that Conditional's `then` element applied unconditionally.
pub fn filtering_vs_switching_equivalence(
    p_switch: &Protocol,
    p_filter: &Protocol,
    gate: &EventPredicate,
) -> Result<FilterEquivalenceReport> {
    if p_switch.initial != p_filter.initial || p_switch.wings != p_filter.wings {
        return Err(SimError::AuditPrecondition(
            "protocols do not share initial state and wings".into(),
        ));
    }
    if p_switch.steps.len() != p_filter.steps.len() {
        return Err(SimError::AuditPrecondition(
            "filtered protocol must have the same number of steps".into(),
        ));
    }
    let mut gated = None;
    for (i, (a, b)) in p_switch.steps.iter().zip(&p_filter.steps).enumerate() {
        match a {
            Step::Conditional { condition, then, .. } if condition == gate => {
                if *b != Step::Unitary(then.clone()) {
                    return Err(SimError::AuditPrecondition(format!(
                        "filtered protocol step {i} is not the unconditional `then` element"
                    )));
                }
                if gated.replace(i).is_some() {
                    return Err(SimError::AuditPrecondition(
                        "more than one conditional gated on the given event".into(),
                    ));
                }
            }
            _ if a != b => {
                return Err(SimError::AuditPrecondition(format!(
                    "protocols differ at step {i} outside the gated conditional"
                )));
            }
            _ => {}
        }
    }
    if gated.is_none() {
        return Err(SimError::AuditPrecondition(
            "switch protocol has no conditional gated on the given event".into(),
        ));
    }
    let (switch_dist, _) = run_protocol(p_switch)?;
    let (filter_dist, _) = run_protocol(p_filter)?;
    let gate_probability = switch_dist.probability_of(gate);
    if gate_probability < PROBABILITY_THRESHOLD {
        return Err(SimError::ConditioningOnNull);
    }
    let switched = switch_dist.conditioned(gate)?;
    let filtered = filter_dist.conditioned(gate)?;
    Ok(FilterEquivalenceReport {
        deviation: switched.max_deviation(&filtered),
        gate_probability,
        discarded_weight: 1.0 - filter_dist.probability_of(gate),
    })
}
