//! Total, diagnostic-bearing parser for the scenario format.
//!
//! Line-oriented; `#` starts a comment. Every failure is reported with a
//! line and column, and semantic failures (unknown modes, records referenced
//! before their measurement, non-unit initial states) name both offending
//! positions where that helps.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::record::{EventPredicate, Pattern};
use crate::state::{ModeLabel, PureState};

use super::ast::{
    AuditDirective, Coeff, ElementSyntax, ScenarioDoc, StateTerm, StepSyntax,
};

/// Maximum |norm² − 1| accepted for the declared initial state.
pub const STATE_NORM_TOLERANCE: f64 = 1e-9;

/// Positioned parse or semantic diagnostic.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ScenarioError {
    fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        ScenarioError { line, col, message: message.into() }
    }
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, col {}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ScenarioError {}

type ParseResult<T> = std::result::Result<T, ScenarioError>;

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    col: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let body = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut tokens = Vec::new();
    let mut offset = 0;
    for piece in body.split_whitespace() {
        let start = body[offset..].find(piece).unwrap() + offset;
        tokens.push(Token { text: piece, col: start + 1 });
        offset = start + piece.len();
    }
    tokens
}

/// Cursor over one line's tokens.
struct Cursor<'a> {
    line: usize,
    tokens: Vec<Token<'a>>,
    idx: usize,
}

impl<'a> Cursor<'a> {
    fn next(&mut self, what: &str) -> ParseResult<Token<'a>> {
        match self.tokens.get(self.idx) {
            Some(&tok) => {
                self.idx += 1;
                Ok(tok)
            }
            None => Err(self.err_here(format!("expected {what}"))),
        }
    }

    fn peek(&self) -> Option<Token<'a>> {
        self.tokens.get(self.idx).copied()
    }

    fn rest(&mut self) -> Vec<Token<'a>> {
        let rest = self.tokens[self.idx..].to_vec();
        self.idx = self.tokens.len();
        rest
    }

    fn end_col(&self) -> usize {
        self.tokens
            .last()
            .map(|t| t.col + t.text.len())
            .unwrap_or(1)
    }

    fn err_here(&self, message: impl Into<String>) -> ScenarioError {
        let col = self
            .tokens
            .get(self.idx)
            .map(|t| t.col)
            .unwrap_or_else(|| self.end_col());
        ScenarioError::new(self.line, col, message)
    }

    fn err_at(&self, tok: Token<'a>, message: impl Into<String>) -> ScenarioError {
        ScenarioError::new(self.line, tok.col, message)
    }

    fn expect_end(&self) -> ParseResult<()> {
        match self.tokens.get(self.idx) {
            Some(tok) => Err(ScenarioError::new(
                self.line,
                tok.col,
                format!("unexpected trailing token `{}`", tok.text),
            )),
            None => Ok(()),
        }
    }
}

fn parse_mode(cur: &Cursor<'_>, tok: Token<'_>) -> ParseResult<ModeLabel> {
    ModeLabel::new(tok.text)
        .map_err(|_| cur.err_at(tok, format!("`{}` is not a valid mode identifier", tok.text)))
}

fn parse_record_name(cur: &Cursor<'_>, tok: Token<'_>) -> ParseResult<String> {
    // record names follow the same identifier rule as modes
    ModeLabel::new(tok.text)
        .map(|m| m.as_str().to_owned())
        .map_err(|_| cur.err_at(tok, format!("`{}` is not a valid record name", tok.text)))
}

fn parse_pattern(cur: &Cursor<'_>, tok: Token<'_>) -> ParseResult<Pattern> {
    Pattern::parse(tok.text).map_err(|e| cur.err_at(tok, e.to_string()))
}

fn parse_f64(cur: &Cursor<'_>, tok: Token<'_>, what: &str) -> ParseResult<f64> {
    match tok.text.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(cur.err_at(tok, format!("`{}` is not a finite {what}", tok.text))),
    }
}

fn parse_element(cur: &mut Cursor<'_>) -> ParseResult<ElementSyntax> {
    let head = cur.next("an element (`bs`, `phase` or `relabel`)")?;
    match head.text {
        "bs" => {
            let a = cur.next("a mode")?;
            let b = cur.next("a mode")?;
            Ok(ElementSyntax::Bs(parse_mode(cur, a)?, parse_mode(cur, b)?))
        }
        "phase" => {
            let m = cur.next("a mode")?;
            let theta = cur.next("an angle in radians")?;
            Ok(ElementSyntax::Phase(
                parse_mode(cur, m)?,
                parse_f64(cur, theta, "angle")?,
            ))
        }
        "relabel" => {
            let mut pairs = Vec::new();
            while let Some(tok) = cur.peek() {
                if tok.text == "else" {
                    break;
                }
                cur.idx += 1;
                let (old, new) = tok.text.split_once("->").ok_or_else(|| {
                    cur.err_at(tok, format!("expected `old->new`, got `{}`", tok.text))
                })?;
                let old = ModeLabel::new(old)
                    .map_err(|_| cur.err_at(tok, format!("`{old}` is not a valid mode identifier")))?;
                let new = ModeLabel::new(new)
                    .map_err(|_| cur.err_at(tok, format!("`{new}` is not a valid mode identifier")))?;
                pairs.push((old, new));
            }
            if pairs.is_empty() {
                return Err(cur.err_here("expected at least one `old->new` pair"));
            }
            Ok(ElementSyntax::Relabel(pairs))
        }
        other => Err(cur.err_at(head, format!("unknown element `{other}`"))),
    }
}

fn parse_step(cur: &mut Cursor<'_>) -> ParseResult<StepSyntax> {
    let head = cur.next("a step kind")?;
    match head.text {
        "bs" | "phase" | "relabel" => {
            cur.idx -= 1;
            Ok(StepSyntax::Element(parse_element(cur)?))
        }
        "measure" => {
            let mut modes = Vec::new();
            loop {
                let tok = cur.next("a mode or `as`")?;
                if tok.text == "as" {
                    break;
                }
                modes.push(parse_mode(cur, tok)?);
            }
            if modes.is_empty() {
                return Err(cur.err_here("measure needs at least one mode"));
            }
            let name_tok = cur.next("a record name")?;
            let name = parse_record_name(cur, name_tok)?;
            Ok(StepSyntax::Measure { modes, name })
        }
        "if" => {
            let name_tok = cur.next("a record name")?;
            let name = parse_record_name(cur, name_tok)?;
            let eq = cur.next("`==`")?;
            if eq.text != "==" {
                return Err(cur.err_at(eq, format!("expected `==`, got `{}`", eq.text)));
            }
            let pat_tok = cur.next("an occupation pattern")?;
            let pattern = parse_pattern(cur, pat_tok)?;
            let then_kw = cur.next("`then`")?;
            if then_kw.text != "then" {
                return Err(cur.err_at(then_kw, format!("expected `then`, got `{}`", then_kw.text)));
            }
            let then = parse_element(cur)?;
            let otherwise = match cur.peek() {
                Some(tok) if tok.text == "else" => {
                    cur.idx += 1;
                    Some(parse_element(cur)?)
                }
                _ => None,
            };
            Ok(StepSyntax::If { name, pattern, then, otherwise })
        }
        "pointer" => {
            let w = cur.next("the watched mode")?;
            let p = cur.next("the pointer mode")?;
            Ok(StepSyntax::Pointer {
                watched: parse_mode(cur, w)?,
                pointer: parse_mode(cur, p)?,
            })
        }
        "dephase" => {
            let mut pointers = Vec::new();
            while let Some(tok) = cur.peek() {
                cur.idx += 1;
                pointers.push(parse_mode(cur, tok)?);
            }
            if pointers.is_empty() {
                return Err(cur.err_here("dephase needs at least one pointer mode"));
            }
            Ok(StepSyntax::Dephase { pointers })
        }
        other => Err(cur.err_at(
            head,
            format!("unknown step `{other}` (expected bs, phase, relabel, measure, if, pointer or dephase)"),
        )),
    }
}

fn parse_predicate_rest(cur: &mut Cursor<'_>, what: &str) -> ParseResult<EventPredicate> {
    let tokens = cur.rest();
    let first = tokens
        .first()
        .copied()
        .ok_or_else(|| cur.err_here(format!("expected {what}")))?;
    let text: String = tokens
        .iter()
        .map(|t| t.text)
        .collect::<Vec<_>>()
        .join(" ");
    EventPredicate::parse(&text).map_err(|e| cur.err_at(first, e.to_string()))
}

fn parse_audit(cur: &mut Cursor<'_>) -> ParseResult<AuditDirective> {
    let head = cur.next("an audit kind")?;
    match head.text {
        "no-signaling" => {
            let other = cur.next("a scenario reference")?.text.to_owned();
            let wing = cur.next("a wing name")?.text.to_owned();
            Ok(AuditDirective::NoSignaling { other, wing })
        }
        "cut-invariance" => {
            let tok = cur.next("a step index")?;
            let step = tok.text.parse::<usize>().map_err(|_| {
                cur.err_at(tok, format!("`{}` is not a step index", tok.text))
            })?;
            Ok(AuditDirective::CutInvariance { step })
        }
        "consistency" => Ok(AuditDirective::Consistency {
            event: parse_predicate_rest(cur, "an event predicate")?,
        }),
        "filter-equivalence" => {
            let other = cur.next("a scenario reference")?.text.to_owned();
            Ok(AuditDirective::FilterEquivalence {
                other,
                gate: parse_predicate_rest(cur, "a gate predicate")?,
            })
        }
        "retro" => {
            let tok = cur.next("a projector pattern")?;
            Ok(AuditDirective::Retro { projector: parse_pattern(cur, tok)? })
        }
        other => Err(cur.err_at(head, format!("unknown audit kind `{other}`"))),
    }
}

#[derive(Default)]
struct RawDoc {
    name: Option<(String, usize)>,
    modes: Option<(Vec<ModeLabel>, usize)>,
    state: Option<(Vec<StateTerm>, usize)>,
    steps: Vec<(StepSyntax, usize)>,
    wings: Vec<(String, Vec<ModeLabel>, usize)>,
    support: Option<(Vec<Pattern>, usize)>,
    audits: Vec<(AuditDirective, usize)>,
}

/// Parses scenario text into a validated document.
pub fn parse_scenario(text: &str) -> ParseResult<ScenarioDoc> {
    let mut raw = RawDoc::default();
    for (line_idx, line) in text.lines().enumerate() {
        let tokens = tokenize(line);
        if tokens.is_empty() {
            continue;
        }
        let mut cur = Cursor { line: line_idx + 1, tokens, idx: 0 };
        let head = cur.next("a directive")?;
        match head.text {
            "scenario" => {
                let tok = cur.next("a scenario name")?;
                if !is_scenario_name(tok.text) {
                    return Err(cur.err_at(tok, format!("`{}` is not a valid scenario name", tok.text)));
                }
                if let Some((_, prev)) = &raw.name {
                    return Err(cur.err_at(head, format!("duplicate `scenario` line (first at line {prev})")));
                }
                raw.name = Some((tok.text.to_owned(), cur.line));
            }
            "modes" => {
                if let Some((_, prev)) = &raw.modes {
                    return Err(cur.err_at(head, format!("duplicate `modes` line (first at line {prev})")));
                }
                let mut modes = Vec::new();
                while let Some(tok) = cur.peek() {
                    cur.idx += 1;
                    let mode = parse_mode(&cur, tok)?;
                    if modes.contains(&mode) {
                        return Err(cur.err_at(tok, format!("mode `{mode}` declared twice")));
                    }
                    modes.push(mode);
                }
                if modes.is_empty() {
                    return Err(cur.err_here("expected at least one mode"));
                }
                modes.sort();
                raw.modes = Some((modes, cur.line));
            }
            "state" => {
                if let Some((_, prev)) = &raw.state {
                    return Err(cur.err_at(head, format!("duplicate `state` line (first at line {prev})")));
                }
                let mut terms = Vec::new();
                loop {
                    let coeff_tok = cur.next("a coefficient")?;
                    let coeff = Coeff::parse(coeff_tok.text).ok_or_else(|| {
                        cur.err_at(coeff_tok, format!("`{}` is not a coefficient", coeff_tok.text))
                    })?;
                    let ket_tok = cur.next("a ket `|...>`")?;
                    let inner = ket_tok
                        .text
                        .strip_prefix('|')
                        .and_then(|s| s.strip_suffix('>'))
                        .ok_or_else(|| {
                            cur.err_at(ket_tok, format!("expected `|config>`, got `{}`", ket_tok.text))
                        })?;
                    let ket = Pattern::parse(inner).map_err(|e| cur.err_at(ket_tok, e.to_string()))?;
                    terms.push(StateTerm { coeff, ket });
                    match cur.peek() {
                        Some(tok) if tok.text == "+" => {
                            cur.idx += 1;
                        }
                        Some(tok) => {
                            return Err(cur.err_at(tok, format!("expected `+` or end of line, got `{}`", tok.text)))
                        }
                        None => break,
                    }
                }
                raw.state = Some((terms, cur.line));
            }
            "step" => {
                let step = parse_step(&mut cur)?;
                cur.expect_end()?;
                raw.steps.push((step, cur.line));
            }
            "wing" => {
                let name_tok = cur.next("a wing name followed by `:`")?;
                let name = name_tok.text.strip_suffix(':').ok_or_else(|| {
                    cur.err_at(name_tok, format!("expected `name:`, got `{}`", name_tok.text))
                })?;
                if name.is_empty() {
                    return Err(cur.err_at(name_tok, "empty wing name"));
                }
                let mut members = Vec::new();
                while let Some(tok) = cur.peek() {
                    cur.idx += 1;
                    members.push(parse_mode(&cur, tok)?);
                }
                if members.is_empty() {
                    return Err(cur.err_here("wing needs at least one mode"));
                }
                members.sort();
                raw.wings.push((name.to_owned(), members, cur.line));
            }
            "support" => {
                if let Some((_, prev)) = &raw.support {
                    return Err(cur.err_at(head, format!("duplicate `support` line (first at line {prev})")));
                }
                let mut configs = Vec::new();
                while let Some(tok) = cur.peek() {
                    cur.idx += 1;
                    configs.push(parse_pattern(&cur, tok)?);
                }
                if configs.is_empty() {
                    return Err(cur.err_here("support needs at least one configuration"));
                }
                configs.sort();
                configs.dedup();
                raw.support = Some((configs, cur.line));
            }
            "audit" => {
                let audit = parse_audit(&mut cur)?;
                cur.expect_end()?;
                raw.audits.push((audit, cur.line));
            }
            other => {
                return Err(cur.err_at(
                    head,
                    format!("unknown directive `{other}` (expected scenario, modes, state, step, wing, support or audit)"),
                ))
            }
        }
        match head.text {
            "step" | "audit" => {}
            _ => cur.expect_end()?,
        }
    }
    validate(raw)
}

fn is_scenario_name(text: &str) -> bool {
    !text.is_empty()
        && text
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

fn covers_exactly(pattern: &Pattern, modes: &[ModeLabel]) -> bool {
    pattern.len() == modes.len() && modes.iter().all(|m| pattern.occupation(m).is_some())
}

fn validate(raw: RawDoc) -> ParseResult<ScenarioDoc> {
    let (modes, modes_line) = raw
        .modes
        .ok_or_else(|| ScenarioError::new(1, 1, "missing `modes` line"))?;
    let (state_terms, state_line) = raw
        .state
        .ok_or_else(|| ScenarioError::new(modes_line, 1, "missing `state` line"))?;

    for term in &state_terms {
        if !covers_exactly(&term.ket, &modes) {
            return Err(ScenarioError::new(
                state_line,
                1,
                format!("ket |{}> must assign every declared mode exactly once", term.ket),
            ));
        }
    }
    let initial = PureState::superpose(state_terms.iter().map(|t| {
        (
            crate::state::BasisConfig::new(t.ket.entries().map(|(m, v)| (m.clone(), v))),
            t.coeff.value(),
        )
    }))
    .map_err(|e| ScenarioError::new(state_line, 1, e.to_string()))?;
    if (initial.norm_sq() - 1.0).abs() > STATE_NORM_TOLERANCE {
        return Err(ScenarioError::new(
            state_line,
            1,
            format!("initial state is not unit-norm (norm² = {})", initial.norm_sq()),
        ));
    }

    // walk the steps, tracking the live mode set and the measured records
    let mut live: BTreeSet<ModeLabel> = modes.iter().cloned().collect();
    let mut measured: BTreeMap<String, (usize, Vec<ModeLabel>)> = BTreeMap::new();
    let mut measure_lines_ahead: BTreeMap<String, usize> = BTreeMap::new();
    for (step, line) in &raw.steps {
        if let StepSyntax::Measure { name, .. } = step {
            measure_lines_ahead.entry(name.clone()).or_insert(*line);
        }
    }
    let check_live = |live: &BTreeSet<ModeLabel>, mode: &ModeLabel, line: usize| {
        if live.contains(mode) {
            Ok(())
        } else {
            Err(ScenarioError::new(
                line,
                1,
                format!("unknown mode `{mode}` (not declared, or renamed by an earlier relabel)"),
            ))
        }
    };
    let check_element = |live: &mut BTreeSet<ModeLabel>,
                         element: &ElementSyntax,
                         line: usize,
                         conditional: bool|
     -> ParseResult<()> {
        match element {
            ElementSyntax::Bs(a, b) => {
                check_live(live, a, line)?;
                check_live(live, b, line)?;
                if a == b {
                    return Err(ScenarioError::new(
                        line,
                        1,
                        "beam splitter needs two distinct modes",
                    ));
                }
            }
            ElementSyntax::Phase(m, _) => check_live(live, m, line)?,
            ElementSyntax::Relabel(pairs) => {
                if conditional {
                    return Err(ScenarioError::new(
                        line,
                        1,
                        "relabel cannot be applied conditionally",
                    ));
                }
                let mut sources = BTreeSet::new();
                let mut targets = BTreeSet::new();
                for (old, new) in pairs {
                    check_live(live, old, line)?;
                    if !sources.insert(old.clone()) {
                        return Err(ScenarioError::new(line, 1, format!("mode `{old}` relabeled twice")));
                    }
                    if !targets.insert(new.clone()) {
                        return Err(ScenarioError::new(line, 1, format!("relabel target `{new}` used twice")));
                    }
                }
                for new in &targets {
                    if live.contains(new) && !sources.contains(new) {
                        return Err(ScenarioError::new(
                            line,
                            1,
                            format!("relabel target `{new}` collides with an existing mode"),
                        ));
                    }
                }
                for old in &sources {
                    live.remove(old);
                }
                live.extend(targets);
            }
        }
        Ok(())
    };

    for (step, line) in &raw.steps {
        match step {
            StepSyntax::Element(e) => check_element(&mut live, e, *line, false)?,
            StepSyntax::Measure { modes: measured_modes, name } => {
                let mut seen = BTreeSet::new();
                for m in measured_modes {
                    check_live(&live, m, *line)?;
                    if !seen.insert(m.clone()) {
                        return Err(ScenarioError::new(*line, 1, format!("mode `{m}` measured twice in one step")));
                    }
                }
                if let Some((prev_line, _)) = measured.get(name) {
                    return Err(ScenarioError::new(
                        *line,
                        1,
                        format!("record `{name}` already measured at line {prev_line}"),
                    ));
                }
                measured.insert(name.clone(), (*line, measured_modes.clone()));
            }
            StepSyntax::If { name, pattern, then, otherwise } => {
                match measured.get(name) {
                    Some((_, record_modes)) => {
                        for (m, _) in pattern.entries() {
                            if !record_modes.contains(m) {
                                return Err(ScenarioError::new(
                                    *line,
                                    1,
                                    format!("pattern mode `{m}` is not part of record `{name}`"),
                                ));
                            }
                        }
                    }
                    None => {
                        let message = match measure_lines_ahead.get(name) {
                            Some(future) => format!(
                                "record `{name}` referenced at line {line} before its measurement at line {future}"
                            ),
                            None => format!("record `{name}` is never measured"),
                        };
                        return Err(ScenarioError::new(*line, 1, message));
                    }
                }
                check_element(&mut live, then, *line, true)?;
                if let Some(e) = otherwise {
                    check_element(&mut live, e, *line, true)?;
                }
            }
            StepSyntax::Pointer { watched, pointer } => {
                check_live(&live, watched, *line)?;
                check_live(&live, pointer, *line)?;
                if watched == pointer {
                    return Err(ScenarioError::new(*line, 1, "pointer must differ from the watched mode"));
                }
            }
            StepSyntax::Dephase { pointers } => {
                for m in pointers {
                    check_live(&live, m, *line)?;
                }
            }
        }
    }

    // wings partition (a subset of) the declared modes
    let mut wings: Vec<(String, Vec<ModeLabel>)> = Vec::new();
    let mut claimed: BTreeSet<ModeLabel> = BTreeSet::new();
    let declared: BTreeSet<ModeLabel> = modes.iter().cloned().collect();
    for (name, members, line) in &raw.wings {
        if wings.iter().any(|(n, _)| n == name) {
            return Err(ScenarioError::new(*line, 1, format!("wing `{name}` declared twice")));
        }
        for m in members {
            if !declared.contains(m) {
                return Err(ScenarioError::new(*line, 1, format!("wing `{name}` lists unknown mode `{m}`")));
            }
            if !claimed.insert(m.clone()) {
                return Err(ScenarioError::new(*line, 1, format!("mode `{m}` assigned to more than one wing")));
            }
        }
        wings.push((name.clone(), members.clone()));
    }
    wings.sort_by(|a, b| a.0.cmp(&b.0));

    let support = match &raw.support {
        Some((configs, line)) => {
            for config in configs {
                if !covers_exactly(config, &modes) {
                    return Err(ScenarioError::new(
                        *line,
                        1,
                        format!("support configuration `{config}` must assign every declared mode"),
                    ));
                }
            }
            configs.clone()
        }
        None => Vec::new(),
    };

    // audit directives must resolve against what the document declares
    for (audit, line) in &raw.audits {
        match audit {
            AuditDirective::Retro { projector } => {
                if support.is_empty() {
                    return Err(ScenarioError::new(*line, 1, "retro audit requires a `support` line"));
                }
                for (m, _) in projector.entries() {
                    if !live.contains(m) {
                        return Err(ScenarioError::new(
                            *line,
                            1,
                            format!("retro projector constrains unknown output mode `{m}`"),
                        ));
                    }
                }
            }
            AuditDirective::CutInvariance { step } => match raw.steps.get(*step) {
                Some((StepSyntax::Measure { .. }, _)) => {}
                Some((_, step_line)) => {
                    return Err(ScenarioError::new(
                        *line,
                        1,
                        format!("step {step} (line {step_line}) is not a measurement"),
                    ))
                }
                None => {
                    return Err(ScenarioError::new(
                        *line,
                        1,
                        format!("step index {step} is out of range ({} steps)", raw.steps.len()),
                    ))
                }
            },
            AuditDirective::Consistency { event } => {
                check_predicate_records(event, &measured, &measure_lines_ahead, *line)?;
            }
            AuditDirective::FilterEquivalence { gate, .. } => {
                check_predicate_records(gate, &measured, &measure_lines_ahead, *line)?;
            }
            AuditDirective::NoSignaling { wing, .. } => {
                if !wings.iter().any(|(n, _)| n == wing) {
                    return Err(ScenarioError::new(*line, 1, format!("no wing named `{wing}`")));
                }
            }
        }
    }

    Ok(ScenarioDoc {
        name: raw.name.map(|(n, _)| n).unwrap_or_else(|| "unnamed".to_owned()),
        modes,
        state_terms,
        steps: raw.steps.into_iter().map(|(s, _)| s).collect(),
        wings,
        support,
        audits: raw.audits.into_iter().map(|(a, _)| a).collect(),
    })
}

fn check_predicate_records(
    predicate: &EventPredicate,
    measured: &BTreeMap<String, (usize, Vec<ModeLabel>)>,
    ahead: &BTreeMap<String, usize>,
    line: usize,
) -> ParseResult<()> {
    for name in predicate.referenced_records() {
        if !measured.contains_key(&name) && !ahead.contains_key(&name) {
            return Err(ScenarioError::new(
                line,
                1,
                format!("record `{name}` is never measured"),
            ));
        }
    }
    Ok(())
}
