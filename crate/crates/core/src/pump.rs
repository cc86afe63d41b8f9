//! Paths in the binding graph and exact pumping decisions on finite paths.
//!
//! Take a simple path `p_0 .. p_n` and indices `i < j` carrying the same tile
//! type. Let `S = {p_i .. p_{j-1}}`, `d = p_j - p_i` and `P = {p_0 .. p_{j-1}}`.
//! Copy `k >= 1` of the segment occupies `S + k*d`. The segment is blocked if
//! some copy cell lands on `P` or on an earlier copy, and pumpable otherwise.
//!
//! Pick the axis `a` of the larger component of `d` (x on ties) and let `K`
//! be the smallest `k >= 1` such that `S + k*d` lies strictly beyond the
//! extent of `P` along `a`. Then only copies `1..=K` need checking:
//!
//! * copies `k >= K` are beyond `P` along `a`, and move further with each `k`,
//!   so they never meet `P`;
//! * copy `k` meets copy `k' < k` iff `S` meets `S + (k - k')*d`. Since
//!   `S` is inside `P`, that is already a collision of copy `k - k'` with
//!   `P`, which is either found among copies `1..=K` or impossible because
//!   `k - k' > K`.
//!
//! Pumped copies also stay glue-consistent: the junction between copy `k`
//! and copy `k + 1` joins tile `j - 1` to the tile at `i`, which equals the
//! tile at `j`, across the same side as the original `j - 1 -> j` bond.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use crate::assembly::Assembly;
use crate::model::{glue_interaction, Position, TileAssemblySystem, Vector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathError {
    #[error("step {0} revisits position {1}")]
    NotSimple(usize, Position),
    #[error("steps {0} and {1} are not 4-adjacent")]
    NotAdjacent(usize, usize),
    #[error("steps {0} and {1} do not bind (strength {2})")]
    NoBond(usize, usize, i32),
    #[error("unknown tile `{0}`")]
    UnknownTile(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PumpError {
    #[error("invalid segment ({i}, {j}): {reason}")]
    InvalidSegment { i: usize, j: usize, reason: &'static str },
}

/// A simple path of tiles, each step 4-adjacent to the previous one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TilePath {
    steps: Vec<(Position, String)>,
}

impl TilePath {
    pub fn new(steps: Vec<(Position, String)>) -> Result<Self, PathError> {
        let mut seen = HashSet::new();
        for (k, (p, _)) in steps.iter().enumerate() {
            if !seen.insert(*p) {
                return Err(PathError::NotSimple(k, *p));
            }
            if k > 0 && steps[k - 1].0.side_towards(*p).is_none() {
                return Err(PathError::NotAdjacent(k - 1, k));
            }
        }
        Ok(TilePath { steps })
    }

    pub fn steps(&self) -> &[(Position, String)] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn position(&self, k: usize) -> Position {
        self.steps[k].0
    }

    pub fn tile(&self, k: usize) -> &str {
        &self.steps[k].1
    }

    pub fn translate(&self, d: Vector) -> TilePath {
        TilePath {
            steps: self
                .steps
                .iter()
                .map(|(p, t)| (p.translate(d), t.clone()))
                .collect(),
        }
    }

    /// Check every consecutive pair binds with positive strength in `sys`.
    pub fn check_bonds(&self, sys: &TileAssemblySystem) -> Result<(), PathError> {
        for k in 1..self.steps.len() {
            let s = bond(sys, self.tile(k - 1), self.position(k - 1), self.tile(k), self.position(k))?;
            if s < 1 {
                return Err(PathError::NoBond(k - 1, k, s));
            }
        }
        Ok(())
    }
}

/// Interaction strength between tile `a` at `pa` and tile `b` at the adjacent `pb`.
pub fn bond(sys: &TileAssemblySystem, a: &str, pa: Position, b: &str, pb: Position) -> Result<i32, PathError> {
    let ta = sys.tile_id(a).ok_or_else(|| PathError::UnknownTile(a.to_string()))?;
    let tb = sys.tile_id(b).ok_or_else(|| PathError::UnknownTile(b.to_string()))?;
    let side = pa.side_towards(pb).ok_or(PathError::NotAdjacent(0, 1))?;
    Ok(glue_interaction(
        sys.tile(ta).glue(side),
        sys.tile(tb).glue(side.opposite()),
    ))
}

/// Adjacency between occupied positions whose facing glues bind with
/// strength at least 1. Neighbor lists follow N, E, S, W order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BindingGraph {
    adjacency: BTreeMap<Position, Vec<Position>>,
}

impl BindingGraph {
    pub fn neighbors(&self, p: Position) -> &[Position] {
        self.adjacency.get(&p).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.values().map(Vec::len).sum::<usize>() / 2
    }

    pub fn edges(&self) -> impl Iterator<Item = (Position, Position)> + '_ {
        self.adjacency
            .iter()
            .flat_map(|(p, ns)| ns.iter().filter(move |q| p < q).map(move |q| (*p, *q)))
    }
}

pub fn binding_graph(sys: &TileAssemblySystem, a: &Assembly) -> BindingGraph {
    let mut adjacency = BTreeMap::new();
    for (p, t) in a.iter() {
        let tile = sys.tile(t);
        let ns = p
            .neighbors()
            .into_iter()
            .filter_map(|(side, q)| {
                let u = a.get(q)?;
                (glue_interaction(tile.glue(side), sys.tile(u).glue(side.opposite())) >= 1).then_some(q)
            })
            .collect();
        adjacency.insert(p, ns);
    }
    BindingGraph { adjacency }
}

#[derive(Debug, Clone)]
pub struct PathEnumeration {
    /// Maximal simple paths: each either cannot be extended or has `max_len` edges.
    pub paths: Vec<TilePath>,
    pub hit_length_cap: bool,
    pub hit_path_cap: bool,
}

/// Depth-first enumeration of maximal simple paths from `start`.
pub fn paths_from_seed(
    sys: &TileAssemblySystem,
    a: &Assembly,
    start: Position,
    max_len: usize,
    max_paths: usize,
) -> PathEnumeration {
    let graph = binding_graph(sys, a);
    let mut out = PathEnumeration {
        paths: Vec::new(),
        hit_length_cap: false,
        hit_path_cap: false,
    };
    if a.get(start).is_none() || max_paths == 0 {
        out.hit_path_cap = max_paths == 0;
        return out;
    }
    let mut stack = vec![start];
    let mut on_path: HashSet<Position> = HashSet::from([start]);
    extend(sys, a, &graph, &mut stack, &mut on_path, max_len, max_paths, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn extend(
    sys: &TileAssemblySystem,
    a: &Assembly,
    graph: &BindingGraph,
    stack: &mut Vec<Position>,
    on_path: &mut HashSet<Position>,
    max_len: usize,
    max_paths: usize,
    out: &mut PathEnumeration,
) {
    if out.paths.len() >= max_paths {
        out.hit_path_cap = true;
        return;
    }
    let last = *stack.last().expect("nonempty");
    let next: Vec<Position> = graph
        .neighbors(last)
        .iter()
        .filter(|q| !on_path.contains(q))
        .copied()
        .collect();
    if next.is_empty() || stack.len() > max_len {
        if !next.is_empty() {
            out.hit_length_cap = true;
        }
        let steps = stack
            .iter()
            .map(|p| (*p, sys.tile(a.get(*p).expect("occupied")).name.clone()))
            .collect();
        out.paths.push(TilePath { steps });
        return;
    }
    for q in next {
        if out.paths.len() >= max_paths {
            out.hit_path_cap = true;
            return;
        }
        stack.push(q);
        on_path.insert(q);
        extend(sys, a, graph, stack, on_path, max_len, max_paths, out);
        on_path.remove(&q);
        stack.pop();
    }
}

/// All index pairs `i < j` with the same tile type, lexicographically.
pub fn find_repeats(p: &TilePath) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p.tile(i) == p.tile(j) {
                out.push((i, j));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PumpVerdict {
    /// Copies `1..=checked_bound` are collision-free and no later copy can collide.
    Pumpable { checked_bound: u64 },
    /// Copy `first_bad_copy` is the first to hit the path prefix or an earlier copy.
    Blocked { first_bad_copy: u64, collision_at: Position },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PumpReport {
    pub segment: (usize, usize),
    pub displacement: Vector,
    pub verdict: PumpVerdict,
    /// Copy cells already holding a different tile in a surrounding assembly.
    pub warnings: Vec<Position>,
}

impl fmt::Display for PumpReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, j) = self.segment;
        write!(f, "segment ({i}, {j}) d={} ", self.displacement)?;
        match self.verdict {
            PumpVerdict::Pumpable { checked_bound } => write!(f, "pumpable (checked {checked_bound} copies)")?,
            PumpVerdict::Blocked {
                first_bad_copy,
                collision_at,
            } => write!(f, "blocked at copy {first_bad_copy}, cell {collision_at}")?,
        }
        if !self.warnings.is_empty() {
            write!(f, " [{} assembly conflicts]", self.warnings.len())?;
        }
        Ok(())
    }
}

struct Segment {
    cells: Vec<Position>,
    prefix: Vec<Position>,
    d: Vector,
}

fn segment(p: &TilePath, i: usize, j: usize) -> Result<Segment, PumpError> {
    let invalid = |reason| PumpError::InvalidSegment { i, j, reason };
    if i >= j {
        return Err(invalid("need i < j"));
    }
    if j >= p.len() {
        return Err(invalid("index past end of path"));
    }
    if p.tile(i) != p.tile(j) {
        return Err(invalid("tile types differ"));
    }
    let d = p.position(j).offset_from(p.position(i));
    if d.is_zero() {
        return Err(invalid("zero displacement"));
    }
    Ok(Segment {
        cells: (i..j).map(|k| p.position(k)).collect(),
        prefix: (0..j).map(|k| p.position(k)).collect(),
        d,
    })
}

/// Number of copies that must be checked before every later copy is
/// provably clear of the prefix.
fn sufficiency_bound(seg: &Segment) -> u64 {
    let along_x = seg.d.x.abs() >= seg.d.y.abs();
    let (step, coord): (i64, fn(&Position) -> i64) = if along_x {
        (seg.d.x, |p| p.x)
    } else {
        (seg.d.y, |p| p.y)
    };
    let sign = step.signum();
    let lo = seg.cells.iter().map(|p| sign * coord(p)).min().expect("nonempty segment");
    let hi = seg.prefix.iter().map(|p| sign * coord(p)).max().expect("nonempty prefix");
    ((hi - lo) / step.abs() + 1) as u64
}

pub fn pump_check(p: &TilePath, i: usize, j: usize) -> Result<PumpReport, PumpError> {
    let seg = segment(p, i, j)?;
    let bound = sufficiency_bound(&seg);
    let mut occupied: HashSet<Position> = seg.prefix.iter().copied().collect();
    for k in 1..=bound {
        let shift = seg.d.scale(k as i64);
        for c in &seg.cells {
            let q = c.translate(shift);
            if !occupied.insert(q) {
                return Ok(PumpReport {
                    segment: (i, j),
                    displacement: seg.d,
                    verdict: PumpVerdict::Blocked {
                        first_bad_copy: k,
                        collision_at: q,
                    },
                    warnings: Vec::new(),
                });
            }
        }
    }
    Ok(PumpReport {
        segment: (i, j),
        displacement: seg.d,
        verdict: PumpVerdict::Pumpable { checked_bound: bound },
        warnings: Vec::new(),
    })
}

/// [`pump_check`], plus warnings for copy cells that `a` already fills with
/// a different tile type. Warnings never change the verdict.
pub fn pump_check_in(p: &TilePath, i: usize, j: usize, sys: &TileAssemblySystem, a: &Assembly) -> Result<PumpReport, PumpError> {
    let mut report = pump_check(p, i, j)?;
    let copies = match report.verdict {
        PumpVerdict::Pumpable { checked_bound } => checked_bound,
        PumpVerdict::Blocked { first_bad_copy, .. } => first_bad_copy - 1,
    };
    for k in 1..=copies {
        for s in i..j {
            let q = p.position(s).translate(report.displacement.scale(k as i64));
            if let Some(t) = a.get(q) {
                if sys.tile(t).name != p.tile(s) {
                    report.warnings.push(q);
                }
            }
        }
    }
    Ok(report)
}

/// The prefix `P` together with copies `1..=k`, as a plain point set.
pub fn pump_expand(p: &TilePath, i: usize, j: usize, k: u64) -> Result<BTreeSet<Position>, PumpError> {
    let seg = segment(p, i, j)?;
    let mut out: BTreeSet<Position> = seg.prefix.iter().copied().collect();
    for c in 1..=k {
        let shift = seg.d.scale(c as i64);
        out.extend(seg.cells.iter().map(|q| q.translate(shift)));
    }
    Ok(out)
}
