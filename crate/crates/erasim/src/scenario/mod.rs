//! The line-oriented scenario format: syntax tree, parser, compiler to
//! protocols, canned scenarios, the runner and JSON output.

pub mod ast;
pub mod builtins;
pub mod compile;
pub mod json;
pub mod parse;
pub mod runner;

pub use ast::{AuditDirective, Coeff, ElementSyntax, Magnitude, ScenarioDoc, StateTerm, StepSyntax};
pub use builtins::{builtin_scenario, builtin_text, BUILTIN_NAMES};
pub use compile::{compile, CompiledScenario};
pub use json::{fmt_f64, run_output_json};
pub use parse::{parse_scenario, ScenarioError, STATE_NORM_TOLERANCE};
pub use runner::{
    builtin_resolver, evaluate_audit, run_scenario, AuditOutcome, Resolver, RunOutput,
    DEFAULT_TOLERANCE,
};

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_errors_carry_positions() {
        let cases: &[(&str, usize)] = &[
            ("modes g0 g1\nstate 1 |g0=1,g1=0>\nstep bogus g0\n", 3),
            ("modes g0 g0\n", 1),
            ("modes g0 g1\nstate 1 |g0=1>\n", 2),
            ("modes g0 g1\nstate 0.5 |g0=1,g1=0>\n", 2),
            ("modes g0 g1\nstate 1 |g0=1,g1=0>\nstep bs g0 g2\n", 3),
            ("modes g0 g1\nstate 1 |g0=1,g1=0>\naudit cut-invariance 0\n", 3),
        ];
        for (text, line) in cases {
            let err = parse_scenario(text).unwrap_err();
            assert_eq!(err.line, *line, "text: {text:?}, err: {err}");
        }
    }

    #[test]
    fn forward_record_reference_names_both_lines() {
        let text = "modes i0 i1 s0 s1\n\
                    state 1/sqrt2 |i0=1,i1=0,s0=1,s1=0> + 1/sqrt2 |i0=0,i1=1,s0=0,s1=1>\n\
                    step if D == s0=1,s1=0 then bs i0 i1\n\
                    step measure s0 s1 as D\n";
        let err = parse_scenario(text).unwrap_err();
        assert_eq!(err.line, 3);
        assert!(err.message.contains("line 3"));
        assert!(err.message.contains("line 4"), "message: {}", err.message);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored(){
        let text = "# leading comment\n\
                    \n\
                    modes g0 g1   # trailing comment\n\
                    state 1 |g0=1,g1=0>\n";
        let doc = parse_scenario(text).unwrap();
        assert_eq!(doc.name, "unnamed");
        assert_eq!(doc.modes.len(), 2);
    }

    #[test]
    fn compiled_builtins_expose_their_structure() {
        let doc = builtin_scenario("penrose-reverse").unwrap();
        let compiled = compile(&doc).unwrap();
        assert!(compiled.support.is_some());
        assert_eq!(compiled.unitary_prefix().steps.len(), 2);
    }

    #[test]
    fn printer_output_reparses_to_the_same_document() {
        let text = "scenario demo\n\
                    modes a b p\n\
                    state i/sqrt2 |a=1,b=0,p=0> + -1/sqrt2 |a=0,b=1,p=0>\n\
                    step phase a 0.25\n\
                    step bs a b\n\
                    step pointer a p\n\
                    step dephase p\n\
                    step measure a b as D\n\
                    wing left: a\n\
                    support a=1,b=0,p=0\n\
                    audit retro a=1\n\
                    audit consistency D==a=1,b=1\n";
        let doc = parse_scenario(text).unwrap();
        let printed = doc.to_string();
        assert_eq!(parse_scenario(&printed).unwrap(), doc);
        // printing is idempotent
        assert_eq!(parse_scenario(&printed).unwrap().to_string(), printed);
    }
}
