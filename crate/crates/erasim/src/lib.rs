//! Sparse state-vector simulator for single-photon linear optics with
//! classical feed-forward, projective collapse and pointer decoherence.
//!
//! The crate is organized bottom-up:
//!
//! - [`state`]: which-path basis configurations and sparse pure states;
//! - [`optics`]: beam splitters, phase shifters and relabelings, applied
//!   forward or reversed;
//! - [`record`]: classical outcome records and event predicates;
//! - [`measure`]: projective collapse, measurement branching, pointer
//!   entanglement, dephasing and post-selection;
//! - [`retro`]: reverse evolution of collapsed states against a source
//!   support — the backward-collapse consistency check;
//! - [`protocol`]: step timelines with feed-forward, executed by exact
//!   branch enumeration into joint outcome distributions;
//! - [`audits`]: no-signaling, cut invariance, causal consistency and
//!   filtering-vs-switching equivalence;
//! - [`scenario`]: the textual scenario format, canned scenarios, the
//!   runner and JSON output.

pub mod audits;
pub mod error;
pub mod measure;
pub mod optics;
pub mod protocol;
pub mod record;
pub mod retro;
pub mod scenario;
pub mod state;

pub use error::{Result, SimError};
pub use state::{Amplitude, BasisConfig, ModeLabel, PureState};
