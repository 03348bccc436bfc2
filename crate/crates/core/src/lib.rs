pub mod dist;
pub mod error;
pub mod numerics;
pub mod constants;
pub mod photon;
pub mod wavefunctions;
pub mod experiments;
pub mod acceptance;
