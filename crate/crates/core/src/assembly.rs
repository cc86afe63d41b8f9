use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::model::{Occupancy, Position, TileAssemblySystem, TileId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WindowError {
    #[error("empty window: need x_min <= x_max and y_min <= y_max")]
    Empty,
    #[error("window must be `x0,x1,y0,y1`, got `{0}`")]
    Syntax(String),
}

/// A closed rectangle of lattice points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Window {
    pub x_min: i64,
    pub x_max: i64,
    pub y_min: i64,
    pub y_max: i64,
}

impl Window {
    pub fn new(x_min: i64, x_max: i64, y_min: i64, y_max: i64) -> Result<Self, WindowError> {
        if x_min > x_max || y_min > y_max {
            return Err(WindowError::Empty);
        }
        Ok(Window {
            x_min,
            x_max,
            y_min,
            y_max,
        })
    }

    /// `[0, size-1]` on both axes.
    pub fn square(size: i64) -> Self {
        Window::new(0, size - 1, 0, size - 1).expect("positive size")
    }

    pub fn width(&self) -> i64 {
        self.x_max - self.x_min + 1
    }

    pub fn height(&self) -> i64 {
        self.y_max - self.y_min + 1
    }

    pub fn area(&self) -> usize {
        (self.width() * self.height()) as usize
    }

    pub fn contains(&self, p: Position) -> bool {
        (self.x_min..=self.x_max).contains(&p.x) && (self.y_min..=self.y_max).contains(&p.y)
    }

    pub fn contains_window(&self, other: &Window) -> bool {
        self.x_min <= other.x_min
            && other.x_max <= self.x_max
            && self.y_min <= other.y_min
            && other.y_max <= self.y_max
    }

    /// Row-major (`y`, then `x`) iteration over every point.
    pub fn points(&self) -> impl Iterator<Item = Position> + '_ {
        (self.y_min..=self.y_max)
            .flat_map(move |y| (self.x_min..=self.x_max).map(move |x| Position::new(x, y)))
    }

    /// Dense index of `p`, if inside.
    pub fn index(&self, p: Position) -> Option<usize> {
        if self.contains(p) {
            Some(((p.y - self.y_min) * self.width() + (p.x - self.x_min)) as usize)
        } else {
            None
        }
    }

    pub fn shift(&self, dx: i64, dy: i64) -> Window {
        Window {
            x_min: self.x_min + dx,
            x_max: self.x_max + dx,
            y_min: self.y_min + dy,
            y_max: self.y_max + dy,
        }
    }

    /// Shrink each flagged side by `margin`; `None` if nothing is left.
    pub fn shrink(&self, margin: i64, sides: Sides) -> Option<Window> {
        let m = |flag: bool| if flag { margin } else { 0 };
        Window::new(
            self.x_min + m(sides.west),
            self.x_max - m(sides.east),
            self.y_min + m(sides.south),
            self.y_max - m(sides.north),
        )
        .ok()
    }

    /// Smallest window holding every point, `None` for an empty input.
    pub fn bounding<'a>(points: impl IntoIterator<Item = &'a Position>) -> Option<Window> {
        let mut it = points.into_iter();
        let first = it.next()?;
        let mut w = Window {
            x_min: first.x,
            x_max: first.x,
            y_min: first.y,
            y_max: first.y,
        };
        for p in it {
            w.x_min = w.x_min.min(p.x);
            w.x_max = w.x_max.max(p.x);
            w.y_min = w.y_min.min(p.y);
            w.y_max = w.y_max.max(p.y);
        }
        Some(w)
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]x[{},{}]", self.x_min, self.x_max, self.y_min, self.y_max)
    }
}

/// Parses the CLI form `x0,x1,y0,y1`.
impl FromStr for Window {
    type Err = WindowError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts = s
            .split(',')
            .map(|t| t.trim().parse::<i64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| WindowError::Syntax(s.to_string()))?;
        match parts[..] {
            [x0, x1, y0, y1] => Window::new(x0, x1, y0, y1),
            _ => Err(WindowError::Syntax(s.to_string())),
        }
    }
}

/// A set of window sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Sides {
    pub north: bool,
    pub east: bool,
    pub south: bool,
    pub west: bool,
}

impl Sides {
    pub const ALL: Sides = Sides {
        north: true,
        east: true,
        south: true,
        west: true,
    };
    pub const NONE: Sides = Sides {
        north: false,
        east: false,
        south: false,
        west: false,
    };
}

/// A finite placement of tile types, optionally with the order in which
/// non-seed tiles attached.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Assembly {
    placements: BTreeMap<Position, TileId>,
    provenance: Option<Vec<Position>>,
}

impl Assembly {
    pub fn new(placements: BTreeMap<Position, TileId>) -> Self {
        Assembly {
            placements,
            provenance: None,
        }
    }

    pub fn seed_of(sys: &TileAssemblySystem) -> Self {
        Assembly::new(sys.seed().clone())
    }

    pub(crate) fn with_provenance(placements: BTreeMap<Position, TileId>, order: Vec<Position>) -> Self {
        Assembly {
            placements,
            provenance: Some(order),
        }
    }

    pub fn placements(&self) -> &BTreeMap<Position, TileId> {
        &self.placements
    }

    /// Non-seed positions in attachment order; index = step.
    pub fn provenance(&self) -> Option<&[Position]> {
        self.provenance.as_deref()
    }

    pub fn len(&self) -> usize {
        self.placements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.placements.is_empty()
    }

    pub fn get(&self, p: Position) -> Option<TileId> {
        self.placements.get(&p).copied()
    }

    pub fn positions(&self) -> impl Iterator<Item = &Position> {
        self.placements.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Position, TileId)> + '_ {
        self.placements.iter().map(|(p, t)| (*p, *t))
    }

    pub fn place(&mut self, p: Position, t: TileId) {
        self.placements.insert(p, t);
        self.provenance = None;
    }

    /// Names instead of ids, for display and comparison across systems.
    pub fn named<'a>(&'a self, sys: &'a TileAssemblySystem) -> impl Iterator<Item = (Position, &'a str)> + 'a {
        self.iter().map(|(p, t)| (p, sys.tile(t).name.as_str()))
    }

    pub fn bounds(&self) -> Option<Window> {
        Window::bounding(self.placements.keys())
    }

    /// First position (row-major) where the two assemblies differ.
    pub fn first_difference(&self, other: &Assembly) -> Option<Position> {
        let mut diffs: Vec<Position> = self
            .placements
            .iter()
            .filter(|(p, t)| other.placements.get(p) != Some(t))
            .map(|(p, _)| *p)
            .chain(
                other
                    .placements
                    .keys()
                    .filter(|p| !self.placements.contains_key(p))
                    .copied(),
            )
            .collect();
        diffs.sort_by_key(|p| p.row_major());
        diffs.first().copied()
    }
}

impl Occupancy for Assembly {
    fn tile_at(&self, p: Position) -> Option<TileId> {
        self.get(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_parse_and_shape() {
        let w: Window = "0,3,-1,2".parse().unwrap();
        assert_eq!((w.width(), w.height(), w.area()), (4, 4, 16));
        assert!(w.contains(Position::new(0, -1)));
        assert!(!w.contains(Position::new(4, 0)));
        assert!("1,0,0,0".parse::<Window>().is_err());
        assert!("1,2,3".parse::<Window>().is_err());
        assert_eq!(w.points().count(), 16);
        assert_eq!(w.points().next(), Some(Position::new(0, -1)));
    }

    #[test]
    fn shrink_only_flagged_sides() {
        let w = Window::square(10);
        let s = Sides {
            north: true,
            east: true,
            ..Sides::NONE
        };
        assert_eq!(w.shrink(3, s), Some(Window::new(0, 6, 0, 6).unwrap()));
        assert_eq!(w.shrink(5, Sides::ALL), None);
    }

    #[test]
    fn dense_index_is_row_major() {
        let w = Window::new(-2, 1, 5, 6).unwrap();
        let idx: Vec<_> = w.points().map(|p| w.index(p).unwrap()).collect();
        assert_eq!(idx, (0..8).collect::<Vec<_>>());
    }
}
