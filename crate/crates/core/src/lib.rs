//! Spherical antiprisms in the 3-sphere: existence, dihedral angles and
//! volumes, with an explicit coordinate model in 4-space to check them
//! against.
//!
//! All lengths and angles are in radians; volumes are measured on the unit
//! 3-sphere, whose total volume is `2 pi^2`.

pub mod antiprism;
pub mod cli;
pub mod embedding;
pub mod error;
pub mod trig;
pub mod volume;

pub use antiprism::{
    c_lower_bound, c_upper_bound, center_distance, circumradius, dihedral_angles,
    dihedral_angles_from_vertex_figure, existence_margins, exists, octa_angle_from_edge,
    octa_edge_from_angle, tetra_angle_from_edge, tetra_edge_from_angle, AntiprismSpec,
    DihedralAngles, EmbeddingFrame, ExistenceMargins,
};
pub use embedding::{
    embed, face_halfspaces, measured_dihedrals, monte_carlo_volume, vertex_figure_trapezoid,
    EmbeddedPolytope, McConfig, UnitPoint4,
};
pub use error::{Error, Result};
pub use trig::{trapezoid_angles, TrapezoidShape};
pub use volume::{
    antiprism_integrand, antiprism_volume, octa_volume_by_angle, octa_volume_by_edge,
    schlafli_residual, tetra_volume_by_angle, tetra_volume_by_edge, IntegrandTerms, Method,
    QuadratureConfig, VolumeEstimate,
};
