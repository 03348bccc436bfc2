//! Continuous distributions: particle-in-a-box eigenstates, oscillator
//! x-quadrature densities and the Planck spectrum.

pub mod blackbody;
pub mod oscillator;
pub mod pbox;

pub use blackbody::{
    blackbody_w1, mean_constant, planck_mean, planck_pdf, BlackbodyParams, Representation,
};
pub use oscillator::{
    osc_bhatt_vacuum, osc_bhatt_vacuum_routes, osc_cdf, osc_kl_vacuum, osc_kl_vacuum_routes,
    osc_pdf, osc_w1_vacuum, osc_w1_vacuum_with_tail, DualRoute, OscState,
};
pub use pbox::{
    classical_cdf, classical_pdf, pbox_bhatt_classical, pbox_cdf, pbox_kl_classical,
    pbox_pair_w1, pbox_pair_w1_numeric, pbox_pdf, pbox_w1_classical, pbox_w1_classical_exact,
    BoxState, KlDirection,
};
