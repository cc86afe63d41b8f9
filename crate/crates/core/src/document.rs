//! Text format for tile assembly systems.
//!
//! Documents are TOML:
//!
//! ```toml
//! temperature = 2
//!
//! [[tiles]]
//! name = "corner"
//! north = ["col", 2]
//! east = ["row", 2]
//! black = true
//!
//! [[seed]]
//! x = 0
//! y = 0
//! tile = "corner"
//! ```
//!
//! Glues are `[label, strength]`; an omitted side carries the null glue.
//! Unknown keys are rejected. [`serialize_tas`] writes the canonical form:
//! tiles sorted by name, seed sorted bottom row first, keys in the order
//! above, null glues omitted.

use serde::Deserialize;
use thiserror::Error;

use crate::model::{Glue, ModelError, Position, Side, TileAssemblySystem, TileType};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DocumentError {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid system: {0}")]
    Validation(#[from] ModelError),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    temperature: i32,
    #[serde(default)]
    tiles: Vec<RawTile>,
    #[serde(default)]
    seed: Vec<RawSeed>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTile {
    name: String,
    north: Option<(String, i32)>,
    east: Option<(String, i32)>,
    south: Option<(String, i32)>,
    west: Option<(String, i32)>,
    #[serde(default)]
    black: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSeed {
    x: i64,
    y: i64,
    tile: String,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

pub fn parse_tas(text: &str) -> Result<TileAssemblySystem, DocumentError> {
    let raw: RawDocument = toml::from_str(text).map_err(|e| DocumentError::Parse {
        line: e.span().map(|s| line_of(text, s.start)).unwrap_or(0),
        message: e.message().to_string(),
    })?;
    let mut tiles = Vec::with_capacity(raw.tiles.len());
    for t in raw.tiles {
        let mut tile = TileType::new(t.name).with_black(t.black);
        for (side, glue) in [
            (Side::North, t.north),
            (Side::East, t.east),
            (Side::South, t.south),
            (Side::West, t.west),
        ] {
            if let Some((label, strength)) = glue {
                *tile.glue_mut(side) = Glue::new(label, strength)?;
            }
        }
        tiles.push(tile);
    }
    let seed = raw
        .seed
        .into_iter()
        .map(|s| (Position::new(s.x, s.y), s.tile));
    Ok(TileAssemblySystem::new(tiles, seed, raw.temperature)?)
}

fn quote(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

pub fn serialize_tas(sys: &TileAssemblySystem) -> String {
    let mut out = format!("temperature = {}\n", sys.temperature());
    for t in sys.tiles() {
        out.push_str("\n[[tiles]]\n");
        out.push_str(&format!("name = {}\n", quote(&t.name)));
        for (side, key) in [
            (Side::North, "north"),
            (Side::East, "east"),
            (Side::South, "south"),
            (Side::West, "west"),
        ] {
            let g = t.glue(side);
            if !g.is_null() {
                out.push_str(&format!("{key} = [{}, {}]\n", quote(g.label()), g.strength()));
            }
        }
        out.push_str(&format!("black = {}\n", t.black));
    }
    let mut seed: Vec<_> = sys.seed().iter().collect();
    seed.sort_by_key(|(p, _)| p.row_major());
    for (p, id) in seed {
        out.push_str("\n[[seed]]\n");
        out.push_str(&format!(
            "x = {}\ny = {}\ntile = {}\n",
            p.x,
            p.y,
            quote(&sys.tile(*id).name)
        ));
    }
    out
}
