//! A one-parameter deformation of the hydrogen atom.
//!
//! The crate builds everything from the symmetric bracket
//! `[x] = (q^x - q^-x)/(q - q^-1)`:
//!
//! - [`qnum`] — bracket evaluation with an exact q -> 1 limit and validated
//!   parameter regimes;
//! - [`basis`] — the truncated two-mode occupation basis and its
//!   angular-momentum relabeling;
//! - [`operators`] — matrix realizations of the deformed boson modes, the
//!   compact and non-compact bilinear triples, the four quadratic shifts,
//!   and numerical checks of their algebra;
//! - [`spectrum`] — the two deformed level models and the explicit content
//!   of the first excited shell;
//! - [`units`] — physical scale attachment and unit conversion;
//! - [`fit`] — the shell splitting, its small-deformation law, and the
//!   inverse fit of q.
//!
//! Energies are handled as dimensionless ratios `E/E0` until a unit is
//! attached. Everything is invariant under q -> 1/q; fits report the
//! representative root with q >= 1.

pub mod basis;
pub mod error;
pub mod fit;
pub mod operators;
pub mod qnum;
pub mod spectrum;
pub mod units;

pub use basis::{jm_to_modes, modes_to_jm, AngularLabel, TruncatedBasis, TwoModeState};
pub use error::{Error, Result};
pub use fit::{
    fit_q, splitting, splitting_exact_ratio, splitting_quadratic_ratio, FitResult, SplittingResult,
    DEFAULT_FIT_TOL,
};
pub use operators::{
    casimir_block_spectrum, check_qboson_relations, check_su11_relations, check_su2_relations,
    commutator, max_abs_difference, so32_closure_residual, CasimirBlock, LabeledOperator, Mode,
    RelationReport,
};
pub use qnum::{q_bracket_diagonal, q_integer, q_number, QParam, QRegime, Scalar};
pub use spectrum::{
    doublet_table, ks_energy_ratio, ks_nu, ks_shell_levels, pauli_energy_ratio, pauli_spectrum,
    DoubletTable, KSLevel, KSQuadruple, PauliLevel, SpectrumRow, SpectrumTable,
    DEFAULT_GROUPING_TOL,
};
pub use units::{
    constants_table, convert, ground_energy, AtomConfig, ConstantEntry, EnergyUnit, ReducedMass,
    CONSTANTS_VERSION,
};
