//! Octilinear graph drawing: representations, flow-based realization,
//! compaction and the fixed-parameter shadow pipeline.

pub mod compact;
pub mod corpus;
pub mod drawing;
pub mod fixtures;
pub mod flow;
pub mod format;
pub mod hardgen;
pub mod lp;
pub mod oracle;
pub mod rep;
pub mod shadow;

pub use drawing::{bbox_area, validate_drawing, DrawingViolation, GridDrawing};
pub use format::{parse_drawing, parse_rep, serialize_drawing, serialize_rep, ParseError};
pub use rep::{
    compute_params, derive_faces, validate_rep, Direction, FaceSet, OctiRep, ParamStats, RepBuilder, RepViolation,
};
