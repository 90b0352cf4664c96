//! Syntax tree for the line-oriented scenario format, plus the canonical
//! printer. Parsing a printed document yields an equal document.

use std::fmt;

use num_complex::Complex64;

use crate::record::{EventPredicate, Pattern};
use crate::state::ModeLabel;

/// Amplitude coefficient as written in a `state` line. `1/sqrt2` stays
/// symbolic so the usual interferometer coefficients are exact to the last bit.
#[derive(Debug, Clone, PartialEq)]
pub struct Coeff {
    pub negated: bool,
    pub imaginary: bool,
    pub magnitude: Magnitude,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Magnitude {
    Decimal(f64),
    InvSqrt2,
}

impl Coeff {
    pub fn value(&self) -> Complex64 {
        let base = match self.magnitude {
            Magnitude::Decimal(d) => d,
            Magnitude::InvSqrt2 => std::f64::consts::FRAC_1_SQRT_2,
        };
        let signed = if self.negated { -base } else { base };
        if self.imaginary {
            Complex64::new(0.0, signed)
        } else {
            Complex64::new(signed, 0.0)
        }
    }

    /// Parses a coefficient token; `None` means not a coefficient.
    pub fn parse(token: &str) -> Option<Coeff> {
        let (negated, rest) = match token.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, token),
        };
        let (imaginary, magnitude) = match rest {
            "1/sqrt2" => (false, Magnitude::InvSqrt2),
            "i/sqrt2" => (true, Magnitude::InvSqrt2),
            "i" => (true, Magnitude::Decimal(1.0)),
            other => {
                let (imaginary, digits) = match other.strip_suffix('i') {
                    Some(digits) => (true, digits),
                    None => (false, other),
                };
                let value: f64 = digits.parse().ok()?;
                if !value.is_finite() || value < 0.0 || digits.contains(['i', 'n', 'N']) {
                    return None;
                }
                (imaginary, Magnitude::Decimal(value))
            }
        };
        Some(Coeff { negated, imaginary, magnitude })
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("-")?;
        }
        match (&self.magnitude, self.imaginary) {
            (Magnitude::InvSqrt2, false) => f.write_str("1/sqrt2"),
            (Magnitude::InvSqrt2, true) => f.write_str("i/sqrt2"),
            (Magnitude::Decimal(d), false) => write!(f, "{d}"),
            (Magnitude::Decimal(d), true) => write!(f, "{d}i"),
        }
    }
}

/// One `<coeff> |<config>>` term of the initial state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateTerm {
    pub coeff: Coeff,
    pub ket: Pattern,
}

/// Unitary element bodies usable both as plain steps and inside `step if`.
#[derive(Debug, Clone, PartialEq)]
pub enum ElementSyntax {
    Bs(ModeLabel, ModeLabel),
    Phase(ModeLabel, f64),
    Relabel(Vec<(ModeLabel, ModeLabel)>),
}

impl fmt::Display for ElementSyntax {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementSyntax::Bs(a, b) => write!(f, "bs {a} {b}"),
            ElementSyntax::Phase(m, theta) => write!(f, "phase {m} {theta}"),
            ElementSyntax::Relabel(pairs) => {
                f.write_str("relabel")?;
                for (old, new) in pairs {
                    write!(f, " {old}->{new}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StepSyntax {
    Element(ElementSyntax),
    Measure { modes: Vec<ModeLabel>, name: String },
    If {
        name: String,
        pattern: Pattern,
        then: ElementSyntax,
        otherwise: Option<ElementSyntax>,
    },
    Pointer { watched: ModeLabel, pointer: ModeLabel },
    Dephase { pointers: Vec<ModeLabel> },
}

impl fmt::Display for StepSyntax {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("step ")?;
        match self {
            StepSyntax::Element(e) => write!(f, "{e}"),
            StepSyntax::Measure { modes, name } => {
                f.write_str("measure")?;
                for m in modes {
                    write!(f, " {m}")?;
                }
                write!(f, " as {name}")
            }
            StepSyntax::If { name, pattern, then, otherwise } => {
                write!(f, "if {name} == {pattern} then {then}")?;
                if let Some(e) = otherwise {
                    write!(f, " else {e}")?;
                }
                Ok(())
            }
            StepSyntax::Pointer { watched, pointer } => write!(f, "pointer {watched} {pointer}"),
            StepSyntax::Dephase { pointers } => {
                f.write_str("dephase")?;
                for m in pointers {
                    write!(f, " {m}")?;
                }
                Ok(())
            }
        }
    }
}

/// One `audit` line.
#[derive(Debug, Clone, PartialEq)]
pub enum AuditDirective {
    NoSignaling { other: String, wing: String },
    CutInvariance { step: usize },
    Consistency { event: EventPredicate },
    FilterEquivalence { other: String, gate: EventPredicate },
    Retro { projector: Pattern },
}

impl AuditDirective {
    pub fn kind(&self) -> &'static str {
        match self {
            AuditDirective::NoSignaling { .. } => "no-signaling",
            AuditDirective::CutInvariance { .. } => "cut-invariance",
            AuditDirective::Consistency { .. } => "consistency",
            AuditDirective::FilterEquivalence { .. } => "filter-equivalence",
            AuditDirective::Retro { .. } => "retro",
        }
    }
}

impl fmt::Display for AuditDirective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("audit ")?;
        match self {
            AuditDirective::NoSignaling { other, wing } => write!(f, "no-signaling {other} {wing}"),
            AuditDirective::CutInvariance { step } => write!(f, "cut-invariance {step}"),
            AuditDirective::Consistency { event } => write!(f, "consistency {event}"),
            AuditDirective::FilterEquivalence { other, gate } => {
                write!(f, "filter-equivalence {other} {gate}")
            }
            AuditDirective::Retro { projector } => write!(f, "retro {projector}"),
        }
    }
}

/// A parsed scenario document, with everything canonically ordered.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioDoc {
    pub name: String,
    /// Sorted, unique.
    pub modes: Vec<ModeLabel>,
    pub state_terms: Vec<StateTerm>,
    pub steps: Vec<StepSyntax>,
    /// Sorted by wing name; member lists sorted.
    pub wings: Vec<(String, Vec<ModeLabel>)>,
    /// Sorted source-support configurations (each covers every mode).
    pub support: Vec<Pattern>,
    pub audits: Vec<AuditDirective>,
}

impl fmt::Display for ScenarioDoc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scenario {}", self.name)?;
        f.write_str("modes")?;
        for m in &self.modes {
            write!(f, " {m}")?;
        }
        f.write_str("\nstate ")?;
        for (i, term) in self.state_terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{} |{}>", term.coeff, term.ket)?;
        }
        f.write_str("\n")?;
        for step in &self.steps {
            writeln!(f, "{step}")?;
        }
        for (name, members) in &self.wings {
            write!(f, "wing {name}:")?;
            for m in members {
                write!(f, " {m}")?;
            }
            f.write_str("\n")?;
        }
        if !self.support.is_empty() {
            f.write_str("support")?;
            for config in &self.support {
                write!(f, " {config}")?;
            }
            f.write_str("\n")?;
        }
        for audit in &self.audits {
            writeln!(f, "{audit}")?;
        }
        Ok(())
    }
}
