//! Optimal filling of simple polygons with overlapping maximal discs.
//!
//! The crate computes the medial axis of a polygon, evaluates the covered fraction of
//! a disc set exactly, searches for the best distribution of discs over the pieces of
//! the axis (heuristic and genetic), and predicts large-N behavior from a continuum
//! model.

pub mod continuum;
pub mod coverage;
pub mod error;
pub mod genetic;
pub mod geom;
pub mod heuristic;
pub mod io;
pub mod local_opt;
pub mod medial_axis;
pub mod way;

pub use error::{FillError, Result};
pub use geom::{Disc, Point, Polygon};
pub use coverage::{FillingSolution, Placement};
pub use medial_axis::{compute_medial_axis, MedialAxis};
pub use way::Way;
