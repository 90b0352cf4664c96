//! Canned scenarios: the single-photon interferometer, the entangled pair
//! with one or two analyzing beam splitters, the backward-collapse setup,
//! and the three eraser variants (which-path, contingent, filtered).

use crate::error::{Result, SimError};

use super::ast::ScenarioDoc;
use super::parse::parse_scenario;

pub const BUILTIN_NAMES: [&str; 7] = [
    "bs-single",
    "epr-bs",
    "penrose-reverse",
    "epr-bs-both",
    "eraser-contingent",
    "eraser-filtered",
    "eraser-whichpath",
];

/// Source text of a builtin scenario, if the name is known.
pub fn builtin_text(name: &str) -> Option<&'static str> {
    match name {
        "bs-single" => Some(BS_SINGLE),
        "epr-bs" => Some(EPR_BS),
        "penrose-reverse" => Some(PENROSE_REVERSE),
        "epr-bs-both" => Some(EPR_BS_BOTH),
        "eraser-contingent" => Some(ERASER_CONTINGENT),
        "eraser-filtered" => Some(ERASER_FILTERED),
        "eraser-whichpath" => Some(ERASER_WHICHPATH),
        _ => None,
    }
}

/// Parsed builtin scenario; unknown names report the available set.
pub fn builtin_scenario(name: &str) -> Result<ScenarioDoc> {
    let text = builtin_text(name).ok_or_else(|| SimError::UnknownBuiltin {
        name: name.to_owned(),
        available: BUILTIN_NAMES.join(", "),
    })?;
    parse_scenario(text).map_err(|e| {
        // builtins are tested to parse; keep a diagnostic path anyway
        SimError::ConfigurationMismatch(format!("builtin `{name}` failed to parse: {e}"))
    })
}

const BS_SINGLE: &str = "\
# One photon on a symmetric beam splitter: 50/50 between the output ports.
scenario bs-single
modes g0 g1
state 1 |g0=1,g1=0>
step bs g0 g1
step measure g0 g1 as D
audit cut-invariance 1
";

const EPR_BS: &str = "\
# Path-entangled pair; the g photon meets a beam splitter whose outputs are
# the transmitted (gt) and reflected (gr) ports. All four coincidences are 1/4.
scenario epr-bs
modes G0 G1 g0 g1
state 1/sqrt2 |G0=1,G1=0,g0=1,g1=0> + 1/sqrt2 |G0=0,G1=1,g0=0,g1=1>
step bs g0 g1
step relabel g0->gt g1->gr
step measure gt gr G0 G1 as D
audit cut-invariance 2
";

const PENROSE_REVERSE: &str = "\
# Same optics as epr-bs, but the analysis collapses the state at the
# reflected-port detection and runs it backward through the beam splitter.
# The source only ever emits the two correlated configurations listed under
# `support`; the reversed state puts probability 1/2 outside that support.
scenario penrose-reverse
modes G0 G1 g0 g1
state 1/sqrt2 |G0=1,G1=0,g0=1,g1=0> + 1/sqrt2 |G0=0,G1=1,g0=0,g1=1>
step bs g0 g1
step relabel g0->gt g1->gr
step measure gt gr G0 G1 as D
support G0=1,G1=0,g0=1,g1=0 G0=0,G1=1,g0=0,g1=1
audit retro G0=1,gr=1
";

const EPR_BS_BOTH: &str = "\
# Both photons of the pair meet their own beam splitter. The final state is
# (i/sqrt2)(|s0 i1> + |s1 i0>): same-port coincidences never happen, which is
# what the consistency audits pin down.
scenario epr-bs-both
modes i0 i1 s0 s1
state 1/sqrt2 |i0=1,i1=0,s0=1,s1=0> + 1/sqrt2 |i0=0,i1=1,s0=0,s1=1>
step bs s0 s1
step bs i0 i1
step measure s0 s1 as S
step measure i0 i1 as I
wing idler: i0 i1
wing signal: s0 s1
audit consistency S==s0=1,s1=0 && I==i0=1,i1=0
audit consistency S==s0=0,s1=1 && I==i0=0,i1=1
audit cut-invariance 2
audit cut-invariance 3
";

const ERASER_WHICHPATH: &str = "\
# Eraser baseline: the idler keeps full which-path information, so every
# signal/idler coincidence cell has probability 1/4.
scenario eraser-whichpath
modes i0 i1 s0 s1
state 1/sqrt2 |i0=1,i1=0,s0=1,s1=0> + 1/sqrt2 |i0=0,i1=1,s0=0,s1=1>
step bs s0 s1
step measure s0 s1 as D
step measure i0 i1 as U
wing idler: i0 i1
wing signal: s0 s1
audit no-signaling eraser-contingent signal
audit cut-invariance 1
audit cut-invariance 2
";

const ERASER_CONTINGENT: &str = "\
# Feed-forward eraser: the idler-side erasing beam splitter is switched in
# only when the signal detector fired at the s0 port. On the gated runs the
# idler lands at i1 with certainty; discarded runs carry the other half of
# the weight. The audits check that this signaling-free switching is
# indistinguishable from unconditional erasure plus post-selection.
scenario eraser-contingent
modes i0 i1 s0 s1
state 1/sqrt2 |i0=1,i1=0,s0=1,s1=0> + 1/sqrt2 |i0=0,i1=1,s0=0,s1=1>
step bs s0 s1
step measure s0 s1 as D
step if D == s0=1,s1=0 then bs i0 i1
step measure i0 i1 as U
wing idler: i0 i1
wing signal: s0 s1
audit no-signaling eraser-whichpath signal
audit filter-equivalence eraser-filtered D==s0=1,s1=0
audit cut-invariance 3
";

const ERASER_FILTERED: &str = "\
# Unconditional erasure: the idler beam splitter is always in place. Filtering
# this scenario on the D==s0 runs must reproduce eraser-contingent's gated
# statistics exactly.
scenario eraser-filtered
modes i0 i1 s0 s1
state 1/sqrt2 |i0=1,i1=0,s0=1,s1=0> + 1/sqrt2 |i0=0,i1=1,s0=0,s1=1>
step bs s0 s1
step measure s0 s1 as D
step bs i0 i1
step measure i0 i1 as U
wing idler: i0 i1
wing signal: s0 s1
audit cut-invariance 1
audit cut-invariance 3
";
