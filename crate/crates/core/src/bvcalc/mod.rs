//! Exact one-dimensional BV calculus.

pub mod bv1d;
pub mod cantor;
pub mod levelset;
pub mod ops;
pub mod openset;
pub(crate) mod segtree;
pub mod smooth;

pub use bv1d::{Bv1d, CantorComponent, JumpSet};
pub use cantor::{cantor, cantor_integral, eval_cantor};
pub use levelset::{level_crossings, superlevel_intervals, truncate};
pub use ops::{area_functional, area_strict_gap, signed_measure, variation_decomposition, DerivDecomp};
pub use openset::OpenSet1D;
pub use smooth::{PieceForm, SmoothPiece};
