//! Metric geometry of κ-cones over model direction spaces, their boundary
//! self-gluings, and numerical checks of the volume comparison estimates that
//! govern them.

pub mod cli;
pub mod comparison;
pub mod cone;
pub mod dirspace;
pub mod error;
pub mod estimate;
pub mod glue;
pub mod mc;
pub mod quad;
pub mod spaceform;
pub mod spec;
pub mod suite;
pub mod tube;

pub use cone::{ConePoint, ConeSpace};
pub use dirspace::{DirPoint, DirectionSpace};
pub use error::{Error, Result};
pub use estimate::{VolumeError, VolumeEstimate};
pub use glue::{GluedSpace, Involution, PolygonGluing};
pub use spaceform::{comparison_angle, cosine_law_side, half_chord_value, sn, Curvature, Triangle};
