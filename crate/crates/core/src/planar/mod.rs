//! Plane graphs, duals, r-divisions and the planar pipeline.
mod division;
mod dual;
mod embedding;
mod igl;
mod isw;
mod voronoi;

pub use division::{check_division, r_division, DivisionStats, Piece, RDivision, BOUNDARY_C, HOLE_BUDGET};
pub use dual::{cut_cycles, exterior, CutCycle, DualCycle, DualGraph};
pub use embedding::{edge_of, rev, ArcId, FaceId, PlaneGraph};
pub use igl::{
    default_r, igl_per_piece, igl_planar, igl_planar_all_sources, igl_planar_with, ChannelAudit, PieceCounters,
    PieceResult, PlanarOptions, PlanarOutcome, PlanarStats, PlanarSummary,
};
pub use isw::{
    isw_star_cycles, whole_piece_sums, ArcSubtreeMap, CycleSegmentTree, PartsumStats, StarCycleQuery, SubPath,
};
pub use voronoi::{
    dual_description, extract_patches, families_for, patch_arcs, voronoi, Bisector, BisectorFamily, Patch,
    VoronoiDiagram,
};
