//! Base graphs, exponent matrices, cyclic lifting and girth.

pub mod girth;
pub mod matrix;
pub mod tanner;

pub use girth::{bfs_girth, walk_girth, walk_girth_through, Girth, DEFAULT_GIRTH_CAP};
pub use matrix::{BaseGraph, ExponentMatrix};
pub use tanner::{gf2_rank, lift, lift_matrix, TannerGraph};
