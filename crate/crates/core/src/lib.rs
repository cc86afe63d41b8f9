//! Simulation and analysis of seeded tile self-assembly.

pub mod assembly;
pub mod catalog;
pub mod decompose;
pub mod document;
pub mod engine;
pub mod model;
pub mod pump;
pub mod render;
pub mod sdp;
pub mod tm;

pub use assembly::{Assembly, Sides, Window};
pub use model::{Glue, Position, Side, TileAssemblySystem, TileId, TileType, Vector};
