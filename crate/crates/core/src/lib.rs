//! Three-qubit genuine entanglement measures and statistical correlators.
//!
//! States are 8×8 density matrices with qubit 1 as the leftmost tensor
//! factor, so basis index `b₁·4 + b₂·2 + b₃` labels `|b₁b₂b₃⟩`.

pub mod analysis;
pub mod cli;
pub mod correlators;
pub mod density;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod measures;
pub mod states;

pub use num_complex;

pub use correlators::{
    maccone_sum, mi_bipartite, mi_tripartite, mp_tripartite, named_basis, named_observable,
    pcc_bipartite, pcc_tripartite, Bipartition, CorrelatorReport, NamedOperator, ObservableSpec, PccValue,
    ProductBasis,
};
pub use density::{partial_trace, validate_density, DensityMatrix3Q, ValidationReport};
pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
pub use measures::{concurrence_fill, gmc, global_measure, measure_report, triangle_edges, MeasureReport};
pub use states::{make_ghz, make_w, make_x_family, mix_ghz_w, FamilyKind, PureState3Q, State3Q, StateFamily};
