//! Tile types, glues and the attachment rule.
//!
//! A glue is a `(label, strength)` pair. Two abutting glues interact only
//! when both label and strength agree; a matched pair contributes its
//! strength, which may be zero or negative. The null glue (empty label,
//! strength 0) never interacts, not even with another null glue.
//!
//! A tile attaches at an empty position when the net matched strength over
//! its four sides reaches the temperature. Tiles never detach, so a negative
//! glue can only veto attachments that would otherwise happen.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("position {0} is already occupied")]
    OccupiedPosition(Position),
    #[error("position {0} has no occupied neighbor")]
    IsolatedPosition(Position),
    #[error("glue with empty label must have strength 0, found {0}")]
    UnlabelledGlue(i32),
    #[error("duplicate tile name `{0}`")]
    DuplicateTile(String),
    #[error("empty tile name")]
    EmptyTileName,
    #[error("seed references unknown tile `{0}`")]
    UnknownSeedTile(String),
    #[error("seed assembly is empty")]
    EmptySeed,
    #[error("temperature must be at least 1, found {0}")]
    BadTemperature(i32),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Glue {
    label: String,
    strength: i32,
}

impl Glue {
    pub fn new(label: impl Into<String>, strength: i32) -> Result<Self, ModelError> {
        let label = label.into();
        if label.is_empty() && strength != 0 {
            return Err(ModelError::UnlabelledGlue(strength));
        }
        Ok(Glue { label, strength })
    }

    /// The null glue.
    pub fn null() -> Self {
        Glue {
            label: String::new(),
            strength: 0,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn strength(&self) -> i32 {
        self.strength
    }

    pub fn is_null(&self) -> bool {
        self.label.is_empty()
    }
}

impl Default for Glue {
    fn default() -> Self {
        Glue::null()
    }
}

/// Strength contributed by two abutting glues. Symmetric.
pub fn glue_interaction(a: &Glue, b: &Glue) -> i32 {
    if !a.is_null() && a.label == b.label && a.strength == b.strength {
        a.strength
    } else {
        0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    North,
    East,
    South,
    West,
}

impl Side {
    /// Visiting order used wherever neighbors are enumerated.
    pub const ALL: [Side; 4] = [Side::North, Side::East, Side::South, Side::West];

    pub fn opposite(self) -> Side {
        match self {
            Side::North => Side::South,
            Side::East => Side::West,
            Side::South => Side::North,
            Side::West => Side::East,
        }
    }

    pub fn offset(self) -> (i64, i64) {
        match self {
            Side::North => (0, 1),
            Side::East => (1, 0),
            Side::South => (0, -1),
            Side::West => (-1, 0),
        }
    }
}

/// A lattice point. Ordered by `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Position {
    pub x: i64,
    pub y: i64,
}

impl Position {
    pub const fn new(x: i64, y: i64) -> Self {
        Position { x, y }
    }

    pub fn step(self, side: Side) -> Position {
        let (dx, dy) = side.offset();
        Position::new(self.x + dx, self.y + dy)
    }

    pub fn neighbors(self) -> [(Side, Position); 4] {
        Side::ALL.map(|s| (s, self.step(s)))
    }

    /// The side of `self` facing `other`, if the two are 4-adjacent.
    pub fn side_towards(self, other: Position) -> Option<Side> {
        Side::ALL.into_iter().find(|&s| self.step(s) == other)
    }

    pub fn translate(self, d: Vector) -> Position {
        Position::new(self.x + d.x, self.y + d.y)
    }

    pub fn offset_from(self, origin: Position) -> Vector {
        Vector::new(self.x - origin.x, self.y - origin.y)
    }

    /// Sort key for row-major order: bottom row first, west to east.
    pub fn row_major(self) -> (i64, i64) {
        (self.y, self.x)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// An integer displacement on the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Vector {
    pub x: i64,
    pub y: i64,
}

impl Vector {
    pub const ZERO: Vector = Vector { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        Vector { x, y }
    }

    pub fn is_zero(self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn scale(self, k: i64) -> Vector {
        Vector::new(self.x * k, self.y * k)
    }

    pub fn cross(self, other: Vector) -> i64 {
        self.x * other.y - self.y * other.x
    }

    pub fn l1(self) -> i64 {
        self.x.abs() + self.y.abs()
    }

    pub fn linf(self) -> i64 {
        self.x.abs().max(self.y.abs())
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}>", self.x, self.y)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TileType {
    pub name: String,
    pub north: Glue,
    pub east: Glue,
    pub south: Glue,
    pub west: Glue,
    pub black: bool,
}

impl TileType {
    pub fn new(name: impl Into<String>) -> Self {
        TileType {
            name: name.into(),
            north: Glue::null(),
            east: Glue::null(),
            south: Glue::null(),
            west: Glue::null(),
            black: false,
        }
    }

    pub fn with_glue(mut self, side: Side, glue: Glue) -> Self {
        *self.glue_mut(side) = glue;
        self
    }

    pub fn with_black(mut self, black: bool) -> Self {
        self.black = black;
        self
    }

    pub fn glue(&self, side: Side) -> &Glue {
        match side {
            Side::North => &self.north,
            Side::East => &self.east,
            Side::South => &self.south,
            Side::West => &self.west,
        }
    }

    pub fn glue_mut(&mut self, side: Side) -> &mut Glue {
        match side {
            Side::North => &mut self.north,
            Side::East => &mut self.east,
            Side::South => &mut self.south,
            Side::West => &mut self.west,
        }
    }

    pub fn glues(&self) -> impl Iterator<Item = (Side, &Glue)> {
        Side::ALL.into_iter().map(move |s| (s, self.glue(s)))
    }
}

/// Index of a tile type inside its system. Indices follow tile-name order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TileId(pub usize);

/// Read access to a partial placement of tiles on the lattice.
pub trait Occupancy {
    fn tile_at(&self, p: Position) -> Option<TileId>;
}

impl Occupancy for BTreeMap<Position, TileId> {
    fn tile_at(&self, p: Position) -> Option<TileId> {
        self.get(&p).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileAssemblySystem {
    tiles: Vec<TileType>,
    seed: BTreeMap<Position, TileId>,
    temperature: i32,
}

impl TileAssemblySystem {
    /// Validates and builds a system. Tile order in the input does not matter.
    pub fn new(
        tiles: Vec<TileType>,
        seed: impl IntoIterator<Item = (Position, String)>,
        temperature: i32,
    ) -> Result<Self, ModelError> {
        if temperature < 1 {
            return Err(ModelError::BadTemperature(temperature));
        }
        let mut tiles = tiles;
        tiles.sort_by(|a, b| a.name.cmp(&b.name));
        let mut seen = BTreeSet::new();
        for t in &tiles {
            if t.name.is_empty() {
                return Err(ModelError::EmptyTileName);
            }
            if !seen.insert(t.name.as_str()) {
                return Err(ModelError::DuplicateTile(t.name.clone()));
            }
            for (_, g) in t.glues() {
                if g.label.is_empty() && g.strength != 0 {
                    return Err(ModelError::UnlabelledGlue(g.strength));
                }
            }
        }
        let mut placed = BTreeMap::new();
        for (p, name) in seed {
            let id = tiles
                .binary_search_by(|t| t.name.as_str().cmp(&name))
                .map_err(|_| ModelError::UnknownSeedTile(name.clone()))?;
            placed.insert(p, TileId(id));
        }
        if placed.is_empty() {
            return Err(ModelError::EmptySeed);
        }
        Ok(TileAssemblySystem {
            tiles,
            seed: placed,
            temperature,
        })
    }

    pub fn tiles(&self) -> &[TileType] {
        &self.tiles
    }

    pub fn tile(&self, id: TileId) -> &TileType {
        &self.tiles[id.0]
    }

    pub fn tile_ids(&self) -> impl Iterator<Item = TileId> {
        (0..self.tiles.len()).map(TileId)
    }

    pub fn tile_id(&self, name: &str) -> Option<TileId> {
        self.tiles
            .binary_search_by(|t| t.name.as_str().cmp(name))
            .ok()
            .map(TileId)
    }

    pub fn seed(&self) -> &BTreeMap<Position, TileId> {
        &self.seed
    }

    pub fn temperature(&self) -> i32 {
        self.temperature
    }

    /// Same tiles and seed at a different temperature.
    pub fn with_temperature(&self, temperature: i32) -> Result<Self, ModelError> {
        if temperature < 1 {
            return Err(ModelError::BadTemperature(temperature));
        }
        Ok(TileAssemblySystem {
            temperature,
            ..self.clone()
        })
    }

    /// Rebuild with every tile passed through `f`. Names must stay unique.
    pub fn map_tiles(&self, mut f: impl FnMut(&TileType) -> TileType) -> Result<Self, ModelError> {
        let tiles = self.tiles.iter().map(&mut f).collect::<Vec<_>>();
        let seed = self
            .seed
            .iter()
            .map(|(p, id)| (*p, f(self.tile(*id)).name))
            .collect::<Vec<_>>();
        TileAssemblySystem::new(tiles, seed, self.temperature)
    }
}

/// Net matched strength `t` would receive at the empty position `p`.
pub fn binding_strength(
    sys: &TileAssemblySystem,
    occ: &impl Occupancy,
    p: Position,
    t: &TileType,
) -> Result<i32, ModelError> {
    if occ.tile_at(p).is_some() {
        return Err(ModelError::OccupiedPosition(p));
    }
    let mut any = false;
    let mut total = 0;
    for (side, q) in p.neighbors() {
        if let Some(id) = occ.tile_at(q) {
            any = true;
            total += glue_interaction(t.glue(side), sys.tile(id).glue(side.opposite()));
        }
    }
    if !any {
        return Err(ModelError::IsolatedPosition(p));
    }
    Ok(total)
}

pub fn can_attach(
    sys: &TileAssemblySystem,
    occ: &impl Occupancy,
    p: Position,
    t: &TileType,
    temperature: i32,
) -> Result<bool, ModelError> {
    Ok(binding_strength(sys, occ, p, t)? >= temperature)
}

/// Like [`can_attach`] but treats occupied and isolated positions as
/// non-attachable instead of erroring.
pub(crate) fn attachable(sys: &TileAssemblySystem, occ: &impl Occupancy, p: Position, t: &TileType) -> bool {
    matches!(binding_strength(sys, occ, p, t), Ok(s) if s >= sys.temperature)
}
