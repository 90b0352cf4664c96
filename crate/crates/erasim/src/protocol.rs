//! Protocol timelines: unitary steps, measurements, pointer coupling,
//! dephasing and classically-conditioned elements (feed-forward).
//!
//! Execution is exact branch enumeration, no sampling: every measurement
//! forks the current branch with its Born weight, a conditional element is
//! applied on branches whose record satisfies its condition, and leaf
//! weights aggregate into a joint outcome distribution.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Result, SimError};
use crate::measure::{entangle_pointer, measure, Branch, PROBABILITY_THRESHOLD};
use crate::optics::{apply_element, Direction, Element};
use crate::record::{EventPredicate, OutcomeRecord, Pattern};
use crate::state::{ModeLabel, PureState, NORM_TOLERANCE};

/// One entry of a protocol timeline.
#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    Unitary(Element),
    Measure { modes: Vec<ModeLabel>, name: String },
    Conditional {
        condition: EventPredicate,
        then: Element,
        otherwise: Option<Element>,
    },
    Pointer { watched: ModeLabel, pointer: ModeLabel },
    Dephase { pointers: Vec<ModeLabel> },
}

impl Step {
    /// Modes the step acts on (records it *reads* do not count).
    pub fn touched_modes(&self) -> BTreeSet<ModeLabel> {
        match self {
            Step::Unitary(e) => e.touched_modes(),
            Step::Measure { modes, .. } => modes.iter().cloned().collect(),
            Step::Conditional { then, otherwise, .. } => {
                let mut out = then.touched_modes();
                if let Some(e) = otherwise {
                    out.extend(e.touched_modes());
                }
                out
            }
            Step::Pointer { watched, pointer } => {
                [watched.clone(), pointer.clone()].into_iter().collect()
            }
            Step::Dephase { pointers } => pointers.iter().cloned().collect(),
        }
    }
}

/// A timeline over a fixed mode set, with an optional partition of the modes
/// into named wings (used by the locality audits).
#[derive(Debug, Clone, PartialEq)]
pub struct Protocol {
    pub initial: PureState,
    pub steps: Vec<Step>,
    pub wings: BTreeMap<String, BTreeSet<ModeLabel>>,
}

impl Protocol {
    pub fn new(
        initial: PureState,
        steps: Vec<Step>,
        wings: BTreeMap<String, BTreeSet<ModeLabel>>,
    ) -> Result<Self> {
        if (initial.norm_sq() - 1.0).abs() > NORM_TOLERANCE {
            return Err(SimError::ConfigurationMismatch(format!(
                "initial state is not unit-norm (norm^2 = {})",
                initial.norm_sq()
            )));
        }
        // record names are unique, and conditions only read earlier records
        let mut recorded: BTreeSet<String> = BTreeSet::new();
        for (i, step) in steps.iter().enumerate() {
            match step {
                Step::Measure { name, .. } => {
                    if !recorded.insert(name.clone()) {
                        return Err(SimError::ConfigurationMismatch(format!(
                            "record name `{name}` measured twice"
                        )));
                    }
                }
                Step::Conditional { condition, .. } => {
                    for name in condition.referenced_records() {
                        if !recorded.contains(&name) {
                            return Err(SimError::CausalityViolation(format!(
                                "step {i} conditions on record `{name}` before it is measured"
                            )));
                        }
                    }
                }
                _ => {}
            }
        }
        // wings are disjoint subsets of the mode set
        let modes = initial.modes();
        let mut claimed: BTreeSet<ModeLabel> = BTreeSet::new();
        for (wing, members) in &wings {
            for mode in members {
                if !modes.contains(mode) {
                    return Err(SimError::ConfigurationMismatch(format!(
                        "wing `{wing}` lists unknown mode `{mode}`"
                    )));
                }
                if !claimed.insert(mode.clone()) {
                    return Err(SimError::ConfigurationMismatch(format!(
                        "mode `{mode}` assigned to more than one wing"
                    )));
                }
            }
        }
        Ok(Protocol { initial, steps, wings })
    }

    pub fn modes(&self) -> &BTreeSet<ModeLabel> {
        self.initial.modes()
    }

    /// Record names whose measured modes lie entirely inside `wing`.
    pub fn wing_records(&self, wing: &str) -> Result<BTreeSet<String>> {
        let members = self.wings.get(wing).ok_or_else(|| {
            SimError::AuditPrecondition(format!("no wing named `{wing}`"))
        })?;
        Ok(self
            .steps
            .iter()
            .filter_map(|s| match s {
                Step::Measure { modes, name } if modes.iter().all(|m| members.contains(m)) => {
                    Some(name.clone())
                }
                _ => None,
            })
            .collect())
    }
}

/// Probability-weighted classical outcomes over the protocol's records.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct JointDistribution {
    entries: BTreeMap<OutcomeRecord, f64>,
}

impl JointDistribution {
    pub fn from_entries(entries: BTreeMap<OutcomeRecord, f64>) -> Self {
        JointDistribution { entries }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&OutcomeRecord, f64)> {
        self.entries.iter().map(|(r, &p)| (r, p))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.entries.values().sum()
    }

    pub fn probability_of(&self, event: &EventPredicate) -> f64 {
        self.entries
            .iter()
            .filter(|(r, _)| event.eval(r))
            .map(|(_, p)| p)
            .sum()
    }

    /// Distribution conditioned on `given`.
    pub fn conditioned(&self, given: &EventPredicate) -> Result<JointDistribution> {
        let p_given = self.probability_of(given);
        if p_given < PROBABILITY_THRESHOLD {
            return Err(SimError::ConditioningOnNull);
        }
        let entries = self
            .entries
            .iter()
            .filter(|(r, _)| given.eval(r))
            .map(|(r, p)| (r.clone(), p / p_given))
            .collect();
        Ok(JointDistribution { entries })
    }

    /// Marginal over a subset of record names.
    pub fn marginal_records(&self, names: &BTreeSet<String>) -> JointDistribution {
        let mut entries: BTreeMap<OutcomeRecord, f64> = BTreeMap::new();
        for (record, p) in &self.entries {
            *entries.entry(record.restrict(names)).or_insert(0.0) += p;
        }
        JointDistribution { entries }
    }

    /// Largest absolute probability difference over the union of records.
    pub fn max_deviation(&self, other: &JointDistribution) -> f64 {
        let mut keys: BTreeSet<&OutcomeRecord> = self.entries.keys().collect();
        keys.extend(other.entries.keys());
        keys.into_iter()
            .map(|k| {
                let a = self.entries.get(k).copied().unwrap_or(0.0);
                let b = other.entries.get(k).copied().unwrap_or(0.0);
                (a - b).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// P(event | given) = P(event ∧ given) / P(given).
pub fn conditional_probability(
    distribution: &JointDistribution,
    event: &EventPredicate,
    given: &EventPredicate,
) -> Result<f64> {
    let p_given = distribution.probability_of(given);
    if p_given < PROBABILITY_THRESHOLD {
        return Err(SimError::ConditioningOnNull);
    }
    let joint = EventPredicate::All(vec![event.clone(), given.clone()]);
    Ok(distribution.probability_of(&joint) / p_given)
}

/// Tree of measurement (and dephasing) forks produced by a protocol run.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchTree {
    pub root: BranchNode,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BranchNode {
    Leaf(Branch),
    Fork {
        /// Record name for measurement forks, `"(dephase)"` for dephasing.
        label: String,
        /// Unit state just before the fork.
        state: PureState,
        children: Vec<(Pattern, BranchNode)>,
    },
}

impl BranchTree {
    pub fn leaves(&self) -> Vec<&Branch> {
        fn walk<'a>(node: &'a BranchNode, out: &mut Vec<&'a Branch>) {
            match node {
                BranchNode::Leaf(b) => out.push(b),
                BranchNode::Fork { children, .. } => {
                    for (_, child) in children {
                        walk(child, out);
                    }
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut out);
        out
    }

    /// State at the first fork — the fully evolved state before any collapse
    /// when all measurements are terminal.
    pub fn first_fork_state(&self) -> Option<&PureState> {
        match &self.root {
            BranchNode::Fork { state, .. } => Some(state),
            BranchNode::Leaf(_) => None,
        }
    }
}

/// Runs the timeline by exact depth-first branch enumeration.
pub fn run_protocol(protocol: &Protocol) -> Result<(JointDistribution, BranchTree)> {
    let root = eval_steps(
        protocol.initial.clone(),
        1.0,
        OutcomeRecord::new(),
        &protocol.steps,
    )?;
    let tree = BranchTree { root };
    let mut entries: BTreeMap<OutcomeRecord, f64> = BTreeMap::new();
    for leaf in tree.leaves() {
        *entries.entry(leaf.record.clone()).or_insert(0.0) += leaf.weight;
    }
    Ok((JointDistribution { entries }, tree))
}

fn eval_steps(
    state: PureState,
    weight: f64,
    record: OutcomeRecord,
    steps: &[Step],
) -> Result<BranchNode> {
    let Some((step, rest)) = steps.split_first() else {
        return Ok(BranchNode::Leaf(Branch { weight, state, record }));
    };
    match step {
        Step::Unitary(element) => {
            let state = apply_element(&state, element, Direction::Forward)?;
            eval_steps(state, weight, record, rest)
        }
        Step::Conditional { condition, then, otherwise } => {
            let state = if condition.eval(&record) {
                apply_element(&state, then, Direction::Forward)?
            } else if let Some(element) = otherwise {
                apply_element(&state, element, Direction::Forward)?
            } else {
                state
            };
            eval_steps(state, weight, record, rest)
        }
        Step::Pointer { watched, pointer } => {
            let state = entangle_pointer(&state, watched, pointer)?;
            eval_steps(state, weight, record, rest)
        }
        Step::Measure { modes, name } => {
            let outcomes = measure(&state, modes, name)?;
            let mut children = Vec::with_capacity(outcomes.len());
            for (outcome_record, probability, collapsed) in outcomes {
                let child_weight = weight * probability;
                if child_weight < PROBABILITY_THRESHOLD {
                    continue;
                }
                let pattern = outcome_record
                    .get(name)
                    .cloned()
                    .unwrap_or_default();
                let child_record = record.with_entry(name, pattern.clone());
                children.push((
                    pattern,
                    eval_steps(collapsed, child_weight, child_record, rest)?,
                ));
            }
            Ok(BranchNode::Fork {
                label: name.clone(),
                state,
                children,
            })
        }
        Step::Dephase { pointers } => {
            let outcomes = measure(&state, pointers, "__dephase")?;
            if outcomes.len() == 1 {
                // single pointer pattern: no fork, state unchanged in law
                let (_, _, collapsed) = outcomes.into_iter().next().unwrap();
                return eval_steps(collapsed, weight, record, rest);
            }
            let mut children = Vec::with_capacity(outcomes.len());
            for (outcome_record, probability, collapsed) in outcomes {
                let child_weight = weight * probability;
                if child_weight < PROBABILITY_THRESHOLD {
                    continue;
                }
                let pattern = outcome_record.get("__dephase").cloned().unwrap_or_default();
                children.push((
                    pattern,
                    eval_steps(collapsed, child_weight, record.clone(), rest)?,
                ));
            }
            Ok(BranchNode::Fork {
                label: "(dephase)".into(),
                state,
                children,
            })
        }
    }
}
