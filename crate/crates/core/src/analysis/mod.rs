//! Sweeps over state families and the studies built on them.

pub mod inequivalence;
pub mod maccone;
pub mod mixed;
pub mod monotone;
pub mod quantity;
pub mod sampling;
pub mod scan;
pub mod table;

pub use inequivalence::{evaluate_pair, find_inequivalence_pairs, InequivalenceKind, InequivalencePair, PairValues};
pub use maccone::{maccone_family, FamilyMacconeReport};
pub use mixed::mixed_state_study;
pub use monotone::{check_monotonic, MonotoneMode, MonotonicityVerdict};
pub use quantity::{parse_quantities, Axis, Quantity};
pub use sampling::{sample_correlators, SampleEstimate, SampleTarget};
pub use scan::{argmax, argmin, default_grid, parse_grid, scan_family, ScanRecord};
pub use table::{emit_table, TableFormat};
