//! Approximation machinery: staircases, mollification, gluing and
//! recovery families.

pub mod family;
pub mod glue;
pub mod mollify;
pub mod staircase;

pub use crate::bvcalc::truncate;
pub use family::{build_recovery_family, RecoveryFamily, RecoveryMode, RecoveryOptions, Stage};
pub use glue::{glue, Cutoff, GlueResult};
pub use mollify::{bump_cdf, bump_density, mollify};
pub use staircase::{staircase, staircase_2d, staircase_levels, StaircaseParams};
