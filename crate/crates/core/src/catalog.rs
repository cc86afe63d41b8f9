//! Bundled example systems.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::assembly::Window;
use crate::document::parse_tas;
use crate::model::{Position, TileAssemblySystem};
use crate::pump::TilePath;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown example `{0}` (known: {known})", known = IDS.join(", "))]
pub struct UnknownExample(pub String);

/// Black set an entry is expected to produce inside its window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlackOracle {
    /// Every position is black.
    Everywhere,
    /// Columns with even x are black.
    EvenColumns,
    /// Odd entries of Pascal's triangle, rows along the diagonals: (x, y)
    /// with x, y >= 0 is black iff C(x + y, x) is odd.
    PascalMod2,
    /// Exactly these positions.
    Finite(&'static [(i64, i64)]),
}

impl BlackOracle {
    pub fn id(&self) -> &'static str {
        match self {
            BlackOracle::Everywhere => "everywhere",
            BlackOracle::EvenColumns => "even-columns",
            BlackOracle::PascalMod2 => "pascal-mod-2",
            BlackOracle::Finite(_) => "finite",
        }
    }

    pub fn is_black(&self, p: Position) -> bool {
        match self {
            BlackOracle::Everywhere => true,
            BlackOracle::EvenColumns => p.x.rem_euclid(2) == 0,
            BlackOracle::PascalMod2 => p.x >= 0 && p.y >= 0 && p.x & p.y == 0,
            BlackOracle::Finite(list) => list.contains(&(p.x, p.y)),
        }
    }

    pub fn within(&self, w: &Window) -> BTreeSet<Position> {
        w.points().filter(|&p| self.is_black(p)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expected {
    pub directed: bool,
    pub temperature: i32,
    pub black: Option<BlackOracle>,
}

/// A path through the terminal assembly together with the repeat pair that
/// exhibits the expected pumping behaviour.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PumpExample {
    pub path: &'static [(i64, i64, &'static str)],
    pub i: usize,
    pub j: usize,
    /// `None` when the segment pumps, otherwise the first colliding copy and
    /// the collision position.
    pub blocked: Option<(u64, (i64, i64))>,
}

impl PumpExample {
    pub fn tile_path(&self) -> TilePath {
        TilePath::new(
            self.path
                .iter()
                .map(|&(x, y, t)| (Position::new(x, y), t.to_string()))
                .collect(),
        )
        .expect("bundled path is simple")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub description: &'static str,
    pub document: &'static str,
    pub window: Window,
    pub expected: Expected,
    pub pump: Option<PumpExample>,
}

impl CatalogEntry {
    pub fn system(&self) -> TileAssemblySystem {
        parse_tas(self.document).expect("bundled document is valid")
    }
}

pub const IDS: [&str; 6] = [
    "filler",
    "stripes",
    "race",
    "sierpinski2",
    "blocked-pump",
    "negative-glue-demo",
];

fn window(x0: i64, x1: i64, y0: i64, y1: i64) -> Window {
    Window::new(x0, x1, y0, y1).expect("bundled window is well formed")
}

pub fn catalog(id: &str) -> Result<CatalogEntry, UnknownExample> {
    let entry = match id {
        "filler" => CatalogEntry {
            id: "filler",
            description: "one black tile bonding on all sides; fills every position",
            document: include_str!("../catalog/filler.toml"),
            window: Window::square(128),
            expected: Expected { directed: true, temperature: 1, black: Some(BlackOracle::Everywhere) },
            pump: Some(PumpExample {
                path: &[(0, 0, "fill"), (1, 0, "fill"), (2, 0, "fill")],
                i: 0,
                j: 1,
                blocked: None,
            }),
        },
        "stripes" => CatalogEntry {
            id: "stripes",
            description: "alternating column tiles; even columns are black",
            document: include_str!("../catalog/stripes.toml"),
            window: Window::square(128),
            expected: Expected { directed: true, temperature: 1, black: Some(BlackOracle::EvenColumns) },
            pump: Some(PumpExample {
                path: &[(0, 0, "even"), (1, 0, "odd"), (2, 0, "even"), (2, 1, "even")],
                i: 0,
                j: 2,
                blocked: None,
            }),
        },
        "race" => CatalogEntry {
            id: "race",
            description: "two tile types compete for the same position through the same glue",
            document: include_str!("../catalog/race.toml"),
            window: window(0, 1, 0, 0),
            expected: Expected { directed: false, temperature: 1, black: None },
            pump: None,
        },
        "sierpinski2" => CatalogEntry {
            id: "sierpinski2",
            description: "temperature 2 XOR tiles on an L-shaped seed frame; black where C(x+y, x) is odd",
            document: include_str!("../catalog/sierpinski2.toml"),
            window: Window::square(64),
            expected: Expected { directed: true, temperature: 2, black: Some(BlackOracle::PascalMod2) },
            pump: None,
        },
        "blocked-pump" => CatalogEntry {
            id: "blocked-pump",
            description: "a hook returning one column east of the seed; its first copy hits the path",
            document: include_str!("../catalog/blocked-pump.toml"),
            window: window(-3, 3, -3, 3),
            expected: Expected {
                directed: true,
                temperature: 1,
                black: Some(BlackOracle::Finite(&[(0, 0), (1, 0)])),
            },
            pump: Some(PumpExample {
                path: &[
                    (0, 0, "t"),
                    (0, 1, "a"),
                    (-1, 1, "b"),
                    (-1, 0, "c"),
                    (-1, -1, "d"),
                    (-1, -2, "d2"),
                    (0, -2, "e"),
                    (1, -2, "f1"),
                    (1, -1, "f"),
                    (1, 0, "t"),
                    (1, 1, "a"),
                ],
                i: 0,
                j: 9,
                blocked: Some((1, (0, 1))),
            }),
        },
        "negative-glue-demo" => CatalogEntry {
            id: "negative-glue-demo",
            description: "temperature 2; a -1 glue on the west of t cancels one unit of its support so (1,1) never fills",
            document: include_str!("../catalog/negative-glue-demo.toml"),
            window: window(-2, 3, -2, 3),
            expected: Expected { directed: true, temperature: 2, black: Some(BlackOracle::Finite(&[])) },
            pump: None,
        },
        other => return Err(UnknownExample(other.to_string())),
    };
    Ok(entry)
}

pub fn entries() -> Vec<CatalogEntry> {
    IDS.iter().map(|id| catalog(id).expect("listed id")).collect()
}
