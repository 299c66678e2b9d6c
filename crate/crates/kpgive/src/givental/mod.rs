//! Twisted loop group elements, the genus-zero flows and the main theorem.

pub mod element;

pub use element::{LoopAlgebraElement, LoopGroupElement, LoopSign};
pub mod kp;
pub mod lee;
pub mod oracle;
pub mod theorem;

pub use kp::{flat_derivative, kp_dpsi, uniform_dpsi};
pub use lee::{ignored_levels, lee_df_psi, lee_f, lee_r_f, lee_s_f};
pub use oracle::{dual_derivative, DualDerivative};
pub use theorem::{derive, main_theorem_report, verify_main_theorem, DerivativeReport, MainTheoremReport, Side};
