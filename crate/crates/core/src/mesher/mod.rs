//! Watertight meshes for the vessels, cutting outlines and diagnostics.

mod clip;
mod helix;
mod mesh;
mod perforate;
mod pie;
mod revolve;
mod stl;
mod svg;
mod triangulate;
mod vessels;

pub use clip::{tilt_cut, ClipError, TiltPlane};
pub use helix::{spiral_points, SpiralError};
pub use mesh::{mesh_stats, MeshStats, Point3, TriangleMesh};
pub use perforate::{perforate, CupShell, PerforateError, HOLE_SEGMENTS};
pub use pie::{pie_segment, PieError, PIE_SEGMENTS_PER_TURN};
pub use revolve::{revolve, Profile2D, ProfileError};
pub use stl::{export_obj, export_stl, parse_stl, StlError, STL_HEADER};
pub use svg::export_svg_outline;
pub use triangulate::{triangulate, TriangulateError};
pub use vessels::{
    deep_plate_mesh, deep_plate_plane, deep_plate_uncut_mesh, flat_plate_mesh, jug_concrete_mesh,
    jug_mesh, jug_shell, mug_mesh, mug_shell, segment_plate_concrete_mesh, segment_plate_mesh,
    tray_profile, FabricationConfig, VesselMeshError,
};
