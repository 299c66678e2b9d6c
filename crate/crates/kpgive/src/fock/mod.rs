//! Energy-truncated semi-infinite wedge space and its operators.

pub mod ops;
pub mod state;
pub mod vector;

pub use ops::{alpha_state, apply_alpha, apply_psi, apply_q, charged_vacuum, psi_state, q_state, Pm};
pub use state::{enumerate_states, FockState};
pub use vector::{Coeff, FockVector};
pub mod loops;

pub use loops::{apply_exp, apply_group_word, apply_loop_algebra, apply_loop_group, GroupAction};
pub mod gamma;

pub use gamma::{apply_boson_exp, apply_gamma_minus, apply_gamma_plus, extract_coefficient, VacuumPairing};
pub mod bilinear;

pub use bilinear::{bilinear_defect, BilinearDefect};
pub mod checks;

pub use checks::{clifford_check, gamma_check, oscillator_check, q_relations_check, vertex_check, CheckSummary};
