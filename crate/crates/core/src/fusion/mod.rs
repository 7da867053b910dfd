//! The fusion calculus: closed-form local coefficients, recoupling, and the
//! assembled sparse operators `T_r^γ`.

pub mod closed_form;
pub mod coeffs;
pub mod operator;
pub mod recoupling;
pub mod row;

pub use coeffs::{
    bigon_factor, candlestick_glue, coeff_annulus, coeff_f, pants_reduce, AnnulusFamily, Shift,
};
pub use operator::{
    assemble_operator, compose, graph_hash, sturm_norm, CurveOperator, Entry, OperatorContext,
};
pub use recoupling::Recoupler;
pub use row::{LevelContext, OperatorRow};
