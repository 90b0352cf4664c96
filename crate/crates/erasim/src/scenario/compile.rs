//! Lowers a parsed [`ScenarioDoc`] into an executable [`Protocol`] plus the
//! pieces the audits need (source support, unitary prefix circuit).

use std::collections::{BTreeMap, BTreeSet};

use crate::error::Result;
use crate::optics::{Circuit, Element};
use crate::protocol::{Protocol, Step};
use crate::record::{EventPredicate, Pattern};
use crate::retro::SourceSupport;
use crate::state::{BasisConfig, ModeLabel, PureState};

use super::ast::{AuditDirective, ElementSyntax, ScenarioDoc, StepSyntax};

/// Executable form of a scenario document.
#[derive(Debug, Clone)]
pub struct CompiledScenario {
    pub name: String,
    pub protocol: Protocol,
    pub support: Option<SourceSupport>,
    pub audits: Vec<AuditDirective>,
}

impl CompiledScenario {
    /// The leading run of unitary steps, as a circuit. This is what the
    /// backward-collapse audit reverse-evolves through.
    pub fn unitary_prefix(&self) -> Circuit {
        let elements = self
            .protocol
            .steps
            .iter()
            .map_while(|s| match s {
                Step::Unitary(e) => Some(e.clone()),
                _ => None,
            })
            .collect();
        Circuit::new(elements)
    }
}

fn lower_element(e: &ElementSyntax) -> Element {
    match e {
        ElementSyntax::Bs(a, b) => Element::BeamSplitter { a: a.clone(), b: b.clone() },
        ElementSyntax::Phase(m, theta) => Element::Phase { mode: m.clone(), theta: *theta },
        ElementSyntax::Relabel(pairs) => Element::Relabel { pairs: pairs.clone() },
    }
}

fn lower_step(s: &StepSyntax) -> Step {
    match s {
        StepSyntax::Element(e) => Step::Unitary(lower_element(e)),
        StepSyntax::Measure { modes, name } => {
            Step::Measure { modes: modes.clone(), name: name.clone() }
        }
        StepSyntax::If { name, pattern, then, otherwise } => Step::Conditional {
            condition: EventPredicate::RecordEquals {
                name: name.clone(),
                pattern: pattern.clone(),
            },
            then: lower_element(then),
            otherwise: otherwise.as_ref().map(lower_element),
        },
        StepSyntax::Pointer { watched, pointer } => {
            Step::Pointer { watched: watched.clone(), pointer: pointer.clone() }
        }
        StepSyntax::Dephase { pointers } => Step::Dephase { pointers: pointers.clone() },
    }
}

fn pattern_config(pattern: &Pattern) -> BasisConfig {
    BasisConfig::new(pattern.entries().map(|(m, v)| (m.clone(), v)))
}

/// Builds the runnable protocol. The document is assumed validated (it came
/// out of the parser), so the only errors left are numeric edge cases.
pub fn compile(doc: &ScenarioDoc) -> Result<CompiledScenario> {
    let initial = PureState::superpose(
        doc.state_terms
            .iter()
            .map(|t| (pattern_config(&t.ket), t.coeff.value())),
    )?
    .normalized()?;
    let steps: Vec<Step> = doc.steps.iter().map(lower_step).collect();
    let wings: BTreeMap<String, BTreeSet<ModeLabel>> = doc
        .wings
        .iter()
        .map(|(name, members)| (name.clone(), members.iter().cloned().collect()))
        .collect();
    let protocol = Protocol::new(initial, steps, wings)?;
    let support = if doc.support.is_empty() {
        None
    } else {
        Some(SourceSupport::new(doc.support.iter().map(pattern_config))?)
    };
    Ok(CompiledScenario {
        name: doc.name.clone(),
        protocol,
        support,
        audits: doc.audits.clone(),
    })
}
