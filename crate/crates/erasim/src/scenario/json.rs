//! Hand-rolled JSON emission for run results.
//!
//! Written by hand (rather than via a serialization framework) so the byte
//! output is fully pinned down: keys in a fixed order, floats rounded to 15
//! significant digits and printed with the shortest plain-decimal form.

use std::fmt::Write as _;

use super::runner::{AuditOutcome, RunOutput};

/// Rounds to 15 significant digits, then prints the shortest decimal that
/// recovers the rounded value. `0` for both signed zeros.
pub fn fmt_f64(value: f64) -> String {
    if value == 0.0 {
        return "0".to_owned();
    }
    let rounded: f64 = format!("{value:.14e}").parse().unwrap();
    if rounded == 0.0 {
        return "0".to_owned();
    }
    let mut out = format!("{rounded}");
    // Display falls back to scientific notation for extreme magnitudes;
    // JSON consumers accept it, but keep the exponent marker lowercase.
    if let Some(pos) = out.find('E') {
        out.replace_range(pos..pos + 1, "e");
    }
    out
}

/// JSON string literal with the mandatory escapes.
pub fn json_string(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn audit_json(audit: &AuditOutcome) -> String {
    format!(
        "{{\"kind\":{},\"detail\":{},\"value\":{},\"pass\":{}}}",
        json_string(&audit.kind),
        json_string(&audit.detail),
        fmt_f64(audit.value),
        audit.pass
    )
}

/// The full run result on one line:
/// `{"scenario":…,"distribution":[{"record":{…},"p":…},…],"audits":[…],"discarded_weight":…}`.
pub fn run_output_json(out: &RunOutput) -> String {
    let mut s = String::new();
    let _ = write!(s, "{{\"scenario\":{},\"distribution\":[", json_string(&out.name));
    for (i, (record, p)) in out.distribution.entries().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str("{\"record\":{");
        for (j, (name, pattern)) in record.entries().enumerate() {
            if j > 0 {
                s.push(',');
            }
            let _ = write!(s, "{}:{}", json_string(name), json_string(&pattern.to_string()));
        }
        let _ = write!(s, "}},\"p\":{}}}", fmt_f64(p));
    }
    s.push_str("],\"audits\":[");
    for (i, audit) in out.audits.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str(&audit_json(audit));
    }
    let _ = write!(s, "],\"discarded_weight\":{}}}", fmt_f64(out.discarded_weight));
    s
}
