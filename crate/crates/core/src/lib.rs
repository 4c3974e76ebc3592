//! Exact-arithmetic tools for collinear subsets, convex position, k-holes and
//! visibility cliques in planar integer point sets.

pub mod bounds;
pub mod cli;
pub mod convexity;
pub mod error;
pub mod extractor;
pub mod generators;
pub mod geometry;
pub mod holes;
pub mod oracle;

pub use error::{Error, Result};
pub use geometry::{Point, PointSet};
