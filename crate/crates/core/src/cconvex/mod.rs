//! Numerical certificates for ℂ-convexity: raster slices by complex lines,
//! their topology, and transversality of the lines to the boundary.

mod certificate;
mod slice;
mod transversal;

pub use certificate::{
    check_cconvex, check_line, sample_lines, CConvexOptions, CConvexReport, LineCheck, LineFailure,
    Verdict, Witness,
};
pub use slice::{
    is_connected, is_simply_connected, slice, topology, SliceRegion, Topology,
    MIN_COMPONENT_PIXELS, MIN_RESOLUTION,
};
pub use transversal::{
    check_transversality, crossings, transversality_of, Crossing, TransversalityReport,
    CROSSING_TOLERANCE, TANGENCY_THRESHOLD,
};
