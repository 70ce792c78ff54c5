//! Special functions for the closed-form eigenfunctions: log-gamma,
//! log-space products of gamma ratios, and terminating hypergeometric
//! polynomials `₂F₁(−n, b; c; x)` and `₁F₁(−n; c; x)`.

mod gamma;
mod hypergeometric;
mod log_value;

pub use gamma::{ln_factorial, log_gamma, log_ratio_product};
pub use hypergeometric::{
    hyp1f1_terminating, hyp1f1_terms, hyp2f1_terminating, hyp2f1_terms, pochhammer,
    TerminatingSeries,
};
pub use log_value::LogValue;
