//! Seeded growth inside a finite window.
//!
//! Growth is sequential: each step attaches one element of the frontier,
//! chosen either canonically (smallest `(y, x, tile name)`) or by a seeded
//! linear congruential generator. Positions outside the window are never
//! considered, so every result describes the window only.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::assembly::{Assembly, Sides, Window};
use crate::model::{attachable, binding_strength, Occupancy, Position, TileAssemblySystem, TileId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("seed position {0} lies outside window {1}")]
    SeedOutsideWindow(Position, Window),
    #[error("need at least 2 trials, got {0}")]
    TooFewTrials(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReplayError {
    #[error("assembly carries no provenance")]
    MissingProvenance,
    #[error("seed tile missing or changed at {0}")]
    SeedMismatch(Position),
    #[error("step {step}: tile at {position} was not attachable (strength {strength})")]
    NotAttachable {
        step: usize,
        position: Position,
        strength: i32,
    },
    #[error("provenance does not cover placement at {0}")]
    Unaccounted(Position),
}

/// Knuth's MMIX linear congruential generator.
///
/// `state' = state * 6364136223846793005 + 1442695040888963407 (mod 2^64)`;
/// each draw advances once and yields the high 32 bits of the new state.
#[derive(Debug, Clone)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub const MULTIPLIER: u64 = 6364136223846793005;
    pub const INCREMENT: u64 = 1442695040888963407;

    pub fn new(seed: u64) -> Self {
        Lcg { state: seed }
    }

    pub fn next_u32(&mut self) -> u32 {
        self.state = self
            .state
            .wrapping_mul(Self::MULTIPLIER)
            .wrapping_add(Self::INCREMENT);
        (self.state >> 32) as u32
    }

    /// Uniform-ish index in `0..len` by multiply-shift. `len` must be nonzero.
    pub fn below(&mut self, len: usize) -> usize {
        ((self.next_u32() as u64 * len as u64) >> 32) as usize
    }
}

/// Seed of the `trial`-th run in a directedness probe.
pub fn trial_seed(rng_seed: u64, trial: usize) -> u64 {
    rng_seed ^ (trial as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderPolicy {
    Canonical,
    Random(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    /// Frontier empty: nothing more can attach inside the window.
    Terminal,
    StepLimitReached,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub assembly: Assembly,
    pub steps: usize,
    pub status: RunStatus,
    pub window: Window,
}

/// Dense occupancy grid over a window.
struct Grid {
    window: Window,
    cells: Vec<Option<TileId>>,
}

impl Grid {
    fn new(window: Window) -> Self {
        Grid {
            window,
            cells: vec![None; window.area()],
        }
    }

    fn set(&mut self, p: Position, t: TileId) {
        let i = self.window.index(p).expect("inside window");
        self.cells[i] = Some(t);
    }
}

impl Occupancy for Grid {
    fn tile_at(&self, p: Position) -> Option<TileId> {
        self.window.index(p).and_then(|i| self.cells[i])
    }
}

type FrontierKey = (i64, i64, TileId);

fn key(p: Position, t: TileId) -> FrontierKey {
    (p.y, p.x, t)
}

fn refresh(sys: &TileAssemblySystem, grid: &Grid, frontier: &mut BTreeSet<FrontierKey>, p: Position) {
    let stale: Vec<_> = frontier
        .range((p.y, p.x, TileId(0))..=(p.y, p.x, TileId(usize::MAX)))
        .copied()
        .collect();
    for k in stale {
        frontier.remove(&k);
    }
    if !grid.window.contains(p) || grid.tile_at(p).is_some() {
        return;
    }
    for id in sys.tile_ids() {
        if attachable(sys, grid, p, sys.tile(id)) {
            frontier.insert(key(p, id));
        }
    }
}

/// Every `(position, tile)` that could attach to `a` inside `w`, in
/// canonical `(y, x, tile name)` order.
pub fn frontier(sys: &TileAssemblySystem, a: &Assembly, w: &Window) -> Vec<(Position, TileId)> {
    let mut candidates = BTreeSet::new();
    for p in a.positions() {
        for (_, q) in p.neighbors() {
            if w.contains(q) && a.get(q).is_none() {
                candidates.insert(q.row_major());
            }
        }
    }
    let mut out = Vec::new();
    for (y, x) in candidates {
        let q = Position::new(x, y);
        for id in sys.tile_ids() {
            if attachable(sys, a, q, sys.tile(id)) {
                out.push((q, id));
            }
        }
    }
    out
}

/// Grow from the seed until the frontier is empty or `max_steps` attachments
/// have been made. Deterministic for a given system, window and policy.
pub fn run(
    sys: &TileAssemblySystem,
    w: &Window,
    order: OrderPolicy,
    max_steps: usize,
) -> Result<RunOutcome, EngineError> {
    let mut grid = Grid::new(*w);
    for (p, t) in sys.seed() {
        if !w.contains(*p) {
            return Err(EngineError::SeedOutsideWindow(*p, *w));
        }
        grid.set(*p, *t);
    }
    let mut frontier = BTreeSet::new();
    let mut touched = BTreeSet::new();
    for p in sys.seed().keys() {
        for (_, q) in p.neighbors() {
            touched.insert(q);
        }
    }
    for q in touched {
        refresh(sys, &grid, &mut frontier, q);
    }

    let mut rng = match order {
        OrderPolicy::Random(seed) => Some(Lcg::new(seed)),
        OrderPolicy::Canonical => None,
    };
    let mut placements: BTreeMap<Position, TileId> = sys.seed().clone();
    let mut history = Vec::new();
    let status = loop {
        if frontier.is_empty() {
            break RunStatus::Terminal;
        }
        if history.len() >= max_steps {
            break RunStatus::StepLimitReached;
        }
        let chosen = match rng.as_mut() {
            None => *frontier.first().expect("nonempty"),
            Some(rng) => {
                let i = rng.below(frontier.len());
                *frontier.iter().nth(i).expect("index in range")
            }
        };
        let (y, x, t) = chosen;
        let p = Position::new(x, y);
        grid.set(p, t);
        placements.insert(p, t);
        history.push(p);
        refresh(sys, &grid, &mut frontier, p);
        for (_, q) in p.neighbors() {
            refresh(sys, &grid, &mut frontier, q);
        }
    };
    Ok(RunOutcome {
        steps: history.len(),
        assembly: Assembly::with_provenance(placements, history),
        status,
        window: *w,
    })
}

/// Positions holding black tiles.
pub fn black_set(sys: &TileAssemblySystem, a: &Assembly) -> BTreeSet<Position> {
    a.iter()
        .filter(|(_, t)| sys.tile(*t).black)
        .map(|(p, _)| p)
        .collect()
}

/// Re-attach the recorded steps in order, checking each was legal.
pub fn replay(sys: &TileAssemblySystem, a: &Assembly) -> Result<(), ReplayError> {
    let order = a.provenance().ok_or(ReplayError::MissingProvenance)?;
    let mut current = sys.seed().clone();
    for (p, t) in sys.seed() {
        if a.get(*p) != Some(*t) {
            return Err(ReplayError::SeedMismatch(*p));
        }
    }
    for (step, p) in order.iter().enumerate() {
        let t = a.get(*p).ok_or(ReplayError::Unaccounted(*p))?;
        let strength = binding_strength(sys, &current, *p, sys.tile(t)).unwrap_or(i32::MIN);
        if strength < sys.temperature() {
            return Err(ReplayError::NotAttachable {
                step,
                position: *p,
                strength,
            });
        }
        current.insert(*p, t);
    }
    match a.positions().find(|p| !current.contains_key(p)) {
        Some(p) => Err(ReplayError::Unaccounted(*p)),
        None => Ok(()),
    }
}

/// Window sides across which the assembly could still grow if the window
/// were larger.
pub fn truncated_sides(sys: &TileAssemblySystem, a: &Assembly, w: &Window) -> Sides {
    let mut sides = Sides::NONE;
    for p in a.positions() {
        for (_, q) in p.neighbors() {
            if w.contains(q) || a.get(q).is_some() {
                continue;
            }
            if sys.tile_ids().any(|id| attachable(sys, a, q, sys.tile(id))) {
                if q.y > w.y_max {
                    sides.north = true;
                }
                if q.y < w.y_min {
                    sides.south = true;
                }
                if q.x > w.x_max {
                    sides.east = true;
                }
                if q.x < w.x_min {
                    sides.west = true;
                }
            }
        }
    }
    sides
}

#[derive(Debug, Clone)]
pub struct DirectednessWitness {
    pub position: Position,
    pub first_trial: usize,
    pub second_trial: usize,
    pub first: Assembly,
    pub second: Assembly,
}

/// Outcome of an order-randomization probe. `consistent` only means the
/// sampled orders agreed within the window.
#[derive(Debug, Clone)]
pub struct DirectednessReport {
    pub trials: usize,
    pub window: Window,
    pub consistent: bool,
    pub witness: Option<DirectednessWitness>,
}

impl DirectednessReport {
    pub fn summary(&self) -> String {
        match &self.witness {
            None => format!(
                "consistent within window {} over {} random orders",
                self.window, self.trials
            ),
            Some(w) => format!(
                "inconsistent within window {}: trials {} and {} differ at {}",
                self.window, w.first_trial, w.second_trial, w.position
            ),
        }
    }
}

/// Run `trials` random orders to completion and compare the placement maps.
pub fn probe_directedness(
    sys: &TileAssemblySystem,
    w: &Window,
    trials: usize,
    rng_seed: u64,
) -> Result<DirectednessReport, EngineError> {
    if trials < 2 {
        return Err(EngineError::TooFewTrials(trials));
    }
    let budget = w.area();
    let reference = run(sys, w, OrderPolicy::Random(trial_seed(rng_seed, 0)), budget)?.assembly;
    for trial in 1..trials {
        let other = run(sys, w, OrderPolicy::Random(trial_seed(rng_seed, trial)), budget)?.assembly;
        if other.placements() != reference.placements() {
            let position = reference
                .first_difference(&other)
                .expect("maps differ somewhere");
            return Ok(DirectednessReport {
                trials,
                window: *w,
                consistent: false,
                witness: Some(DirectednessWitness {
                    position,
                    first_trial: 0,
                    second_trial: trial,
                    first: reference,
                    second: other,
                }),
            });
        }
    }
    Ok(DirectednessReport {
        trials,
        window: *w,
        consistent: true,
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Glue, Side, TileType};

    fn g(l: &str, s: i32) -> Glue {
        Glue::new(l, s).unwrap()
    }

    fn filler() -> TileAssemblySystem {
        let t = TileType::new("f")
            .with_glue(Side::North, g("v", 1))
            .with_glue(Side::South, g("v", 1))
            .with_glue(Side::East, g("h", 1))
            .with_glue(Side::West, g("h", 1))
            .with_black(true);
        TileAssemblySystem::new(vec![t], [(Position::new(0, 0), "f".into())], 1).unwrap()
    }

    fn eastward() -> TileAssemblySystem {
        let t = TileType::new("e")
            .with_glue(Side::East, g("h", 1))
            .with_glue(Side::West, g("h", 1));
        let s = TileType::new("s").with_glue(Side::East, g("h", 1));
        TileAssemblySystem::new(vec![s, t], [(Position::new(2, 3), "s".into())], 1).unwrap()
    }

    #[test]
    fn frontier_of_seed_only_row() {
        let sys = eastward();
        let a = Assembly::seed_of(&sys);
        let f = frontier(&sys, &a, &Window::new(0, 9, 0, 9).unwrap());
        assert_eq!(f, vec![(Position::new(3, 3), sys.tile_id("e").unwrap())]);
    }

    #[test]
    fn frontier_needs_cooperation_at_temperature_two() {
        let sys = filler().with_temperature(2).unwrap();
        let a = Assembly::seed_of(&sys);
        assert!(frontier(&sys, &a, &Window::square(4)).is_empty());
        let out = run(&sys, &Window::square(4), OrderPolicy::Canonical, 100).unwrap();
        assert_eq!(out.assembly.len(), 1);
        assert_eq!(out.status, RunStatus::Terminal);
    }

    #[test]
    fn filler_fills_window() {
        let sys = filler();
        let w = Window::square(4);
        let out = run(&sys, &w, OrderPolicy::Canonical, 1000).unwrap();
        assert_eq!(out.assembly.len(), 16);
        assert_eq!(out.status, RunStatus::Terminal);
        assert_eq!(black_set(&sys, &out.assembly).len(), 16);
        assert!(frontier(&sys, &out.assembly, &w).is_empty());
        replay(&sys, &out.assembly).unwrap();
    }

    #[test]
    fn step_limit_is_a_status() {
        let out = run(&filler(), &Window::square(4), OrderPolicy::Canonical, 5).unwrap();
        assert_eq!(out.status, RunStatus::StepLimitReached);
        assert_eq!(out.steps, 5);
        assert_eq!(out.assembly.len(), 6);
    }

    #[test]
    fn canonical_order_is_row_major() {
        let out = run(&filler(), &Window::square(3), OrderPolicy::Canonical, 100).unwrap();
        let order = out.assembly.provenance().unwrap();
        assert_eq!(order[0], Position::new(1, 0));
        assert_eq!(order[1], Position::new(2, 0));
        assert_eq!(order[2], Position::new(0, 1));
    }

    #[test]
    fn seed_outside_window_rejected() {
        let err = run(&eastward(), &Window::square(2), OrderPolicy::Canonical, 10).unwrap_err();
        assert!(matches!(err, EngineError::SeedOutsideWindow(..)));
    }

    #[test]
    fn frontier_matches_direct_attachment_check() {
        let sys = filler();
        let w = Window::square(4);
        for steps in 0..12 {
            let a = run(&sys, &w, OrderPolicy::Random(steps as u64), steps).unwrap().assembly;
            let f: BTreeSet<_> = frontier(&sys, &a, &w).into_iter().collect();
            for p in w.points() {
                for id in sys.tile_ids() {
                    let direct = a.get(p).is_none()
                        && matches!(
                            crate::model::can_attach(&sys, &a, p, sys.tile(id), sys.temperature()),
                            Ok(true)
                        );
                    assert_eq!(f.contains(&(p, id)), direct, "{p} {id:?}");
                }
            }
        }
    }

    #[test]
    fn growth_is_monotone_in_steps() {
        let sys = filler();
        let w = Window::square(5);
        let mut prev = Assembly::seed_of(&sys);
        for k in 1..25 {
            let a = run(&sys, &w, OrderPolicy::Random(9), k).unwrap().assembly;
            assert!(prev.iter().all(|(p, t)| a.get(p) == Some(t)));
            assert_eq!(a.len(), prev.len() + 1);
            prev = a;
        }
    }

    #[test]
    fn replay_rejects_tampering() {
        let sys = eastward();
        let out = run(&sys, &Window::new(0, 6, 3, 3).unwrap(), OrderPolicy::Canonical, 100).unwrap();
        assert_eq!(out.assembly.len(), 5);
        replay(&sys, &out.assembly).unwrap();
        let mut placements = out.assembly.placements().clone();
        let order: Vec<_> = out.assembly.provenance().unwrap().iter().rev().copied().collect();
        placements.insert(Position::new(9, 9), TileId(1));
        let bad = Assembly::with_provenance(placements, order);
        assert!(matches!(replay(&sys, &bad), Err(ReplayError::NotAttachable { .. })));
    }

    #[test]
    fn lcg_is_reproducible() {
        let mut a = Lcg::new(42);
        let mut b = Lcg::new(42);
        let xs: Vec<_> = (0..8).map(|_| a.next_u32()).collect();
        let ys: Vec<_> = (0..8).map(|_| b.next_u32()).collect();
        assert_eq!(xs, ys);
        // first draw from seed 0 is the high half of the increment
        assert_eq!(Lcg::new(0).next_u32(), (Lcg::INCREMENT >> 32) as u32);
        let mut c = Lcg::new(7);
        assert!((0..1000).all(|_| c.below(3) < 3));
    }

    #[test]
    fn probe_on_seed_only_system() {
        let sys = filler().with_temperature(2).unwrap();
        let r = probe_directedness(&sys, &Window::square(3), 2, 1).unwrap();
        assert!(r.consistent);
        assert!(r.witness.is_none());
        assert!(r.summary().starts_with("consistent within window"));
        assert!(matches!(
            probe_directedness(&sys, &Window::square(3), 1, 1),
            Err(EngineError::TooFewTrials(1))
        ));
    }

    #[test]
    fn truncation_detects_open_sides() {
        let sys = eastward();
        let w = Window::new(0, 5, 3, 3).unwrap();
        let a = run(&sys, &w, OrderPolicy::Canonical, 100).unwrap().assembly;
        assert_eq!(
            truncated_sides(&sys, &a, &w),
            Sides {
                east: true,
                ..Sides::NONE
            }
        );
    }
}
