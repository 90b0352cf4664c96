//! Classical outcome records and predicates over them.
//!
//! A [`Pattern`] is the observed occupation pattern of a measured mode group;
//! an [`OutcomeRecord`] maps record names ("D1", "U4") to patterns. Feed-forward
//! conditions, post-selection and the audits all speak [`EventPredicate`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Result, SimError};
use crate::state::{BasisConfig, ModeLabel};

/// Occupation pattern on a named subset of modes, e.g. `g0=1,g1=0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Pattern(BTreeMap<ModeLabel, bool>);

impl Pattern {
    pub fn new(entries: impl IntoIterator<Item = (ModeLabel, bool)>) -> Self {
        Pattern(entries.into_iter().collect())
    }

    pub fn from_config(config: &BasisConfig, modes: &[ModeLabel]) -> Self {
        Pattern(
            modes
                .iter()
                .filter_map(|m| config.occupation(m).map(|v| (m.clone(), v)))
                .collect(),
        )
    }

    pub fn entries(&self) -> impl Iterator<Item = (&ModeLabel, bool)> {
        self.0.iter().map(|(m, &v)| (m, v))
    }

    pub fn occupation(&self, mode: &ModeLabel) -> Option<bool> {
        self.0.get(mode).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Renames the pattern's modes; entries without a mapping keep theirs.
    pub fn rename(&self, map: &BTreeMap<ModeLabel, ModeLabel>) -> Self {
        Pattern(
            self.0
                .iter()
                .map(|(m, &v)| (map.get(m).cloned().unwrap_or_else(|| m.clone()), v))
                .collect(),
        )
    }

    /// Parses `m0=0,m1=1`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for part in text.split(',') {
            let (name, value) = part.split_once('=').ok_or_else(|| {
                SimError::ConfigurationMismatch(format!("bad pattern entry `{part}`"))
            })?;
            let mode = ModeLabel::new(name)?;
            let occ = match value {
                "0" => false,
                "1" => true,
                other => {
                    return Err(SimError::ConfigurationMismatch(format!(
                        "occupation must be 0 or 1, got `{other}`"
                    )))
                }
            };
            if entries.insert(mode, occ).is_some() {
                return Err(SimError::ConfigurationMismatch(format!(
                    "mode `{name}` constrained twice in pattern"
                )));
            }
        }
        Ok(Pattern(entries))
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (m, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}={}", m, if *v { 1 } else { 0 })?;
        }
        Ok(())
    }
}

/// Classical record of every measurement a branch has seen so far.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct OutcomeRecord(BTreeMap<String, Pattern>);

impl OutcomeRecord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, name: &str) -> Option<&Pattern> {
        self.0.get(name)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&String, &Pattern)> {
        self.0.iter()
    }

    pub fn names(&self) -> impl Iterator<Item = &String> {
        self.0.keys()
    }

    pub fn with_entry(&self, name: &str, pattern: Pattern) -> Self {
        let mut map = self.0.clone();
        map.insert(name.to_owned(), pattern);
        OutcomeRecord(map)
    }

    /// Keeps only the named records (used when marginalizing a wing).
    pub fn restrict(&self, names: &BTreeSet<String>) -> Self {
        OutcomeRecord(
            self.0
                .iter()
                .filter(|(n, _)| names.contains(*n))
                .map(|(n, p)| (n.clone(), p.clone()))
                .collect(),
        )
    }

    /// Renames the modes inside one record's pattern.
    pub fn rename_pattern_modes(&self, name: &str, map: &BTreeMap<ModeLabel, ModeLabel>) -> Self {
        let mut out = self.0.clone();
        if let Some(p) = out.get_mut(name) {
            *p = p.rename(map);
        }
        OutcomeRecord(out)
    }
}

impl fmt::Display for OutcomeRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("(empty)");
        }
        for (i, (name, pattern)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{name}={{{pattern}}}")?;
        }
        Ok(())
    }
}

/// Boolean predicate over outcome records.
///
/// Textual form: `true`, `false`, `D==g0=1,g1=0`, `D.g0=1`, combined with
/// `&&`, `||`, `!` and parentheses (all whitespace-separated tokens).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EventPredicate {
    True,
    False,
    /// Record `name` was observed exactly as `pattern`.
    RecordEquals { name: String, pattern: Pattern },
    /// Record `name` observed mode `mode` with the given occupation.
    ModeIs { name: String, mode: ModeLabel, value: bool },
    All(Vec<EventPredicate>),
    Any(Vec<EventPredicate>),
    Not(Box<EventPredicate>),
}

impl EventPredicate {
    pub fn eval(&self, record: &OutcomeRecord) -> bool {
        match self {
            EventPredicate::True => true,
            EventPredicate::False => false,
            EventPredicate::RecordEquals { name, pattern } => {
                record.get(name).map(|p| p == pattern).unwrap_or(false)
            }
            EventPredicate::ModeIs { name, mode, value } => record
                .get(name)
                .and_then(|p| p.occupation(mode))
                .map(|v| v == *value)
                .unwrap_or(false),
            EventPredicate::All(parts) => parts.iter().all(|p| p.eval(record)),
            EventPredicate::Any(parts) => parts.iter().any(|p| p.eval(record)),
            EventPredicate::Not(inner) => !inner.eval(record),
        }
    }

    /// Record names the predicate reads (for causality checks).
    pub fn referenced_records(&self) -> BTreeSet<String> {
        match self {
            EventPredicate::True | EventPredicate::False => BTreeSet::new(),
            EventPredicate::RecordEquals { name, .. } | EventPredicate::ModeIs { name, .. } => {
                [name.clone()].into_iter().collect()
            }
            EventPredicate::All(parts) | EventPredicate::Any(parts) => parts
                .iter()
                .flat_map(|p| p.referenced_records())
                .collect(),
            EventPredicate::Not(inner) => inner.referenced_records(),
        }
    }

    /// Parses the whitespace-tokenized textual form.
    pub fn parse(text: &str) -> Result<Self> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.is_empty() {
            return Err(SimError::ConfigurationMismatch(
                "empty event predicate".into(),
            ));
        }
        let mut pos = 0usize;
        let pred = parse_or(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(SimError::ConfigurationMismatch(format!(
                "unexpected token `{}` in event predicate",
                tokens[pos]
            )));
        }
        Ok(pred)
    }
}

fn parse_or(tokens: &[&str], pos: &mut usize) -> Result<EventPredicate> {
    let mut parts = vec![parse_and(tokens, pos)?];
    while *pos < tokens.len() && tokens[*pos] == "||" {
        *pos += 1;
        parts.push(parse_and(tokens, pos)?);
    }
    Ok(if parts.len() == 1 {
        parts.pop().unwrap()
    } else {
        EventPredicate::Any(parts)
    })
}

fn parse_and(tokens: &[&str], pos: &mut usize) -> Result<EventPredicate> {
    let mut parts = vec![parse_term(tokens, pos)?];
    while *pos < tokens.len() && tokens[*pos] == "&&" {
        *pos += 1;
        parts.push(parse_term(tokens, pos)?);
    }
    Ok(if parts.len() == 1 {
        parts.pop().unwrap()
    } else {
        EventPredicate::All(parts)
    })
}

fn parse_term(tokens: &[&str], pos: &mut usize) -> Result<EventPredicate> {
    let token = *tokens.get(*pos).ok_or_else(|| {
        SimError::ConfigurationMismatch("event predicate ended unexpectedly".into())
    })?;
    match token {
        "!" => {
            *pos += 1;
            Ok(EventPredicate::Not(Box::new(parse_term(tokens, pos)?)))
        }
        "(" => {
            *pos += 1;
            let inner = parse_or(tokens, pos)?;
            if tokens.get(*pos) != Some(&")") {
                return Err(SimError::ConfigurationMismatch(
                    "missing `)` in event predicate".into(),
                ));
            }
            *pos += 1;
            Ok(inner)
        }
        "true" => {
            *pos += 1;
            Ok(EventPredicate::True)
        }
        "false" => {
            *pos += 1;
            Ok(EventPredicate::False)
        }
        atom => {
            *pos += 1;
            parse_atom(atom)
        }
    }
}

fn parse_atom(token: &str) -> Result<EventPredicate> {
    if let Some((name, pattern)) = token.split_once("==") {
        return Ok(EventPredicate::RecordEquals {
            name: name.to_owned(),
            pattern: Pattern::parse(pattern)?,
        });
    }
    if let Some((head, value)) = token.rsplit_once('=') {
        if let Some((name, mode)) = head.split_once('.') {
            let value = match value {
                "0" => false,
                "1" => true,
                other => {
                    return Err(SimError::ConfigurationMismatch(format!(
                        "occupation must be 0 or 1, got `{other}`"
                    )))
                }
            };
            return Ok(EventPredicate::ModeIs {
                name: name.to_owned(),
                mode: ModeLabel::new(mode)?,
                value,
            });
        }
    }
    Err(SimError::ConfigurationMismatch(format!(
        "cannot parse event predicate atom `{token}`"
    )))
}

impl fmt::Display for EventPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn needs_parens_in_and(p: &EventPredicate) -> bool {
            matches!(p, EventPredicate::Any(_))
        }
        fn needs_parens_in_not(p: &EventPredicate) -> bool {
            matches!(p, EventPredicate::Any(_) | EventPredicate::All(_))
        }
        match self {
            EventPredicate::True => f.write_str("true"),
            EventPredicate::False => f.write_str("false"),
            EventPredicate::RecordEquals { name, pattern } => write!(f, "{name}=={pattern}"),
            EventPredicate::ModeIs { name, mode, value } => {
                write!(f, "{name}.{mode}={}", if *value { 1 } else { 0 })
            }
            EventPredicate::All(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" && ")?;
                    }
                    if needs_parens_in_and(p) {
                        write!(f, "( {p} )")?;
                    } else {
                        write!(f, "{p}")?;
                    }
                }
                Ok(())
            }
            EventPredicate::Any(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" || ")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
            EventPredicate::Not(inner) => {
                if needs_parens_in_not(inner) {
                    write!(f, "! ( {inner} )")
                } else {
                    write!(f, "! {inner}")
                }
            }
        }
    }
}
