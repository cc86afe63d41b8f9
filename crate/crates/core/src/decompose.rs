//! Greedy search for a finite union of semi-doubly periodic sets matching a
//! point set on a window.
//!
//! Each round takes the extreme uncovered points in the eight lexicographic
//! orders as base candidates. Candidate periods from a base are the nearby
//! offsets whose ray stays inside the set, ranked two ways: by how well the
//! set agrees with its own translate (the normalized autocorrelation of its
//! indicator) and by how many uncovered points the ray reaches. Every point,
//! ray and plane built from those periods is tried, both from the base and
//! from the point reached by stepping back along the periods, and the one
//! adding the most uncovered points without touching a point outside the
//! set is kept. Results are reproducible; the union is not minimal.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::assembly::{Sides, Window};
use crate::engine::{self, DirectednessReport, EngineError, OrderPolicy};
use crate::model::{Position, TileAssemblySystem, Vector};
use crate::sdp::{plane_coefficients, union_enumerate, SdpSet, SdpUnion};

/// Periods considered per base point.
const PERIODS_PER_BASE: usize = 24;

/// `(x sign, y sign, x compared first)`.
const EXTREME_ORDERS: [(i64, i64, bool); 8] = [
    (1, 1, false),
    (1, 1, true),
    (-1, 1, false),
    (-1, 1, true),
    (1, -1, false),
    (1, -1, true),
    (-1, -1, false),
    (-1, -1, true),
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{} points left uncovered after {} components", uncovered.len(), partial.len())]
pub struct DecompositionFailure {
    pub uncovered: Vec<Position>,
    pub partial: SdpUnion,
}

/// Longest period (sup norm) worth proposing on a window: at least three
/// repetitions must fit.
pub fn period_cap(w: &Window) -> i64 {
    (w.width().min(w.height()) / 3).max(1)
}

/// Margin used when none is given: the period cap of the full window.
pub fn default_margin(w: &Window) -> i64 {
    period_cap(w)
}

/// Decompose `black` on `w` shrunk by `margin` on every side.
pub fn decompose(
    black: &BTreeSet<Position>,
    w: &Window,
    margin: i64,
    max_components: usize,
) -> Result<SdpUnion, DecompositionFailure> {
    decompose_truncated(black, w, margin, Sides::ALL, max_components)
}

/// Decompose `black` on `w` shrunk by `margin` on the `truncated` sides only,
/// the sides where growth was cut off by the window (see
/// [`engine::truncated_sides`]).
pub fn decompose_truncated(
    black: &BTreeSet<Position>,
    w: &Window,
    margin: i64,
    truncated: Sides,
    max_components: usize,
) -> Result<SdpUnion, DecompositionFailure> {
    match w.shrink(margin, truncated) {
        Some(inner) => decompose_within(black, &inner, max_components),
        None => Err(DecompositionFailure {
            uncovered: black.iter().copied().collect(),
            partial: SdpUnion::default(),
        }),
    }
}

struct Bitmap {
    window: Window,
    bits: Vec<bool>,
}

impl Bitmap {
    fn new(window: Window) -> Self {
        Bitmap {
            window,
            bits: vec![false; window.area()],
        }
    }

    fn get(&self, p: Position) -> bool {
        self.window.index(p).is_some_and(|i| self.bits[i])
    }

    fn set(&mut self, p: Position, v: bool) {
        if let Some(i) = self.window.index(p) {
            self.bits[i] = v;
        }
    }
}

/// Fraction of points `p` with `p + d` still in the window for which `p + d`
/// is also in the set.
fn autocorrelation(points: &[Position], set: &Bitmap, d: Vector) -> f64 {
    let mut support = 0u32;
    let mut hits = 0u32;
    for p in points {
        let q = p.translate(d);
        if set.window.contains(q) {
            support += 1;
            if set.get(q) {
                hits += 1;
            }
        }
    }
    if support == 0 {
        0.0
    } else {
        f64::from(hits) / f64::from(support)
    }
}

/// Points of `s` inside the bitmap window, or `None` as soon as one falls
/// outside the target set.
fn exact_points(s: &SdpSet, target: &Bitmap) -> Option<Vec<Position>> {
    let w = &target.window;
    let mut out = Vec::new();
    let mut take = |p: Position| -> Option<()> {
        if w.contains(p) {
            if !target.get(p) {
                return None;
            }
            out.push(p);
        }
        Some(())
    };
    match (s.period_u.is_zero(), s.period_v.is_zero()) {
        (true, true) => take(s.base)?,
        (false, true) => {
            let mut p = s.base;
            while w.contains(p) {
                take(p)?;
                p = p.translate(s.period_u);
            }
        }
        _ => {
            for (n, m) in plane_coefficients(s, w) {
                take(s.base.translate(s.period_u.scale(n)).translate(s.period_v.scale(m)))?;
            }
        }
    }
    Some(out)
}

/// Uncovered points on `p + N d`, or `None` when the ray leaves the target
/// inside the window.
fn ray_gain(mut p: Position, d: Vector, target: &Bitmap, uncovered: &Bitmap) -> Option<usize> {
    let mut gain = 0;
    while target.window.contains(p) {
        if !target.get(p) {
            return None;
        }
        gain += usize::from(uncovered.get(p));
        p = p.translate(d);
    }
    Some(gain)
}

/// Step from `p` by `-u` or `-v` while the target contains the next point.
fn descend(mut p: Position, u: Vector, v: Vector, target: &Bitmap) -> Position {
    let back = |d: Vector| Vector::new(-d.x, -d.y);
    loop {
        if !u.is_zero() && target.get(p.translate(back(u))) {
            p = p.translate(back(u));
        } else if !v.is_zero() && target.get(p.translate(back(v))) {
            p = p.translate(back(v));
        } else {
            return p;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Pick {
    gain: usize,
    set: SdpSet,
    rank: (usize, usize),
}

impl Pick {
    /// More new points, then shorter periods, then smaller base, then
    /// better-ranked periods.
    fn beats(&self, other: &Pick) -> bool {
        let key = |p: &Pick| {
            (
                std::cmp::Reverse(p.gain),
                p.set.period_u.l1() + p.set.period_v.l1(),
                p.set.base,
                p.rank,
            )
        };
        key(self) < key(other)
    }
}

/// Decompose `black` restricted to `inner`.
pub fn decompose_within(
    black: &BTreeSet<Position>,
    inner: &Window,
    max_components: usize,
) -> Result<SdpUnion, DecompositionFailure> {
    let mut target = Bitmap::new(*inner);
    let points: Vec<Position> = black.iter().filter(|p| inner.contains(**p)).copied().collect();
    for p in &points {
        target.set(*p, true);
    }
    let cap = period_cap(inner);

    let mut score: HashMap<Vector, f64> = HashMap::new();
    let mut score_of = |d: Vector| *score.entry(d).or_insert_with(|| autocorrelation(&points, &target, d));

    let mut uncovered = Bitmap::new(*inner);
    for p in &points {
        uncovered.set(*p, true);
    }
    let mut remaining = points.len();
    let mut components = Vec::new();

    while remaining > 0 && components.len() < max_components {
        // Extreme uncovered points in the eight lexicographic orders.
        let mut bases: Vec<Position> = Vec::new();
        for (sx, sy, x_major) in EXTREME_ORDERS {
            let first = points
                .iter()
                .filter(|p| uncovered.get(**p))
                .min_by_key(|p| if x_major { (sx * p.x, sy * p.y) } else { (sy * p.y, sx * p.x) })
                .copied()
                .expect("something uncovered");
            if !bases.contains(&first) {
                bases.push(first);
            }
        }

        let mut best: Option<Pick> = None;
        for &b in &bases {
            let mut found: Vec<(Vector, f64, usize)> = Vec::new();
            for dy in -cap..=cap {
                for dx in -cap..=cap {
                    let d = Vector::new(dx, dy);
                    if d.is_zero() || !target.get(b.translate(d)) {
                        continue;
                    }
                    if let Some(gain) = ray_gain(b, d, &target, &uncovered) {
                        found.push((d, score_of(d), gain));
                    }
                }
            }
            // The best-correlated periods, then the rays covering the most
            // uncovered points.
            found.sort_by(|(d1, s1, _), (d2, s2, _)| {
                s2.total_cmp(s1)
                    .then(d1.l1().cmp(&d2.l1()))
                    .then(d1.cmp(d2))
            });
            let mut periods: Vec<Vector> = found.iter().take(PERIODS_PER_BASE).map(|f| f.0).collect();
            found.sort_by(|(d1, _, g1), (d2, _, g2)| g2.cmp(g1).then(d1.l1().cmp(&d2.l1())).then(d1.cmp(d2)));
            for (d, _, _) in &found {
                if periods.len() == 2 * PERIODS_PER_BASE {
                    break;
                }
                if !periods.contains(d) {
                    periods.push(*d);
                }
            }

            let mut consider = |set: SdpSet, rank: (usize, usize)| {
                if let Some(pts) = exact_points(&set, &target) {
                    let gain = pts.iter().filter(|p| uncovered.get(**p)).count();
                    let pick = Pick { gain, set, rank };
                    if best.as_ref().is_none_or(|cur| pick.beats(cur)) {
                        best = Some(pick);
                    }
                }
            };
            // Each triple is tried from `b` and from the point reached by
            // stepping back along the periods inside the target, which is
            // where a set whose periods point towards `b` has its base.
            let mut consider_both = |u: Vector, v: Vector, rank: (usize, usize)| {
                consider(SdpSet::new(b, u, v), rank);
                let back = descend(b, u, v, &target);
                if back != b {
                    consider(SdpSet::new(back, u, v), rank);
                }
            };
            let none = periods.len();
            consider_both(Vector::ZERO, Vector::ZERO, (none, none));
            for (i, u) in periods.iter().enumerate() {
                consider_both(*u, Vector::ZERO, (i, none));
                for (k, v) in periods.iter().enumerate().skip(i + 1) {
                    if u.cross(*v) != 0 {
                        consider_both(*u, *v, (i, k));
                    }
                }
            }
        }

        let pick = best.expect("a single point is always exact");
        for p in exact_points(&pick.set, &target).expect("chosen set is exact") {
            if uncovered.get(p) {
                uncovered.set(p, false);
                remaining -= 1;
            }
        }
        let mut set = pick.set;
        if !set.period_v.is_zero() && (set.period_v.y, set.period_v.x) < (set.period_u.y, set.period_u.x) {
            std::mem::swap(&mut set.period_u, &mut set.period_v);
        }
        components.push(set);
    }

    if remaining > 0 {
        return Err(DecompositionFailure {
            uncovered: points.into_iter().filter(|p| uncovered.get(*p)).collect(),
            partial: SdpUnion::new(components),
        });
    }
    Ok(SdpUnion::new(components))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TheoremError {
    #[error("the theorem check applies to temperature 1 only, system has temperature {0}")]
    NotTemperatureOne(i32),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Parameters for [`verify_main_theorem`].
#[derive(Debug, Clone, Copy)]
pub struct TheoremCheck {
    pub window: Window,
    /// `None` selects [`default_margin`].
    pub margin: Option<i64>,
    pub trials: usize,
    pub rng_seed: u64,
    pub max_components: usize,
}

#[derive(Debug, Clone)]
pub struct TheoremReport {
    pub system_id: String,
    pub window: Window,
    pub margin: i64,
    pub truncated: Sides,
    pub inner_window: Option<Window>,
    pub black_count: usize,
    pub directedness: DirectednessReport,
    pub union: Result<SdpUnion, String>,
    pub matched: bool,
    pub mismatches: Vec<Position>,
}

impl fmt::Display for TheoremReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "system: {}", self.system_id)?;
        writeln!(f, "window: {}", self.window)?;
        writeln!(f, "margin: {}", self.margin)?;
        match self.inner_window {
            Some(w) => writeln!(f, "inner window: {w}")?,
            None => writeln!(f, "inner window: empty")?,
        }
        writeln!(f, "black points in window: {}", self.black_count)?;
        writeln!(f, "directedness: {}", self.directedness.summary())?;
        match &self.union {
            Ok(u) => {
                writeln!(f, "union: {} component(s)", u.len())?;
                for (i, s) in u.components.iter().enumerate() {
                    writeln!(f, "  {i}: {s}")?;
                }
            }
            Err(reason) => writeln!(f, "union: not found ({reason})")?,
        }
        writeln!(f, "match: {}", self.matched)?;
        write!(f, "mismatches: {}", self.mismatches.len())
    }
}

/// Simulate a temperature-1 system, decompose its black set and check the
/// union reproduces it exactly on the interior window.
pub fn verify_main_theorem(
    system_id: &str,
    sys: &TileAssemblySystem,
    check: &TheoremCheck,
) -> Result<TheoremReport, TheoremError> {
    if sys.temperature() != 1 {
        return Err(TheoremError::NotTemperatureOne(sys.temperature()));
    }
    let w = check.window;
    let margin = check.margin.unwrap_or_else(|| default_margin(&w));
    let directedness = engine::probe_directedness(sys, &w, check.trials, check.rng_seed)?;
    let grown = engine::run(sys, &w, OrderPolicy::Canonical, w.area())?.assembly;
    let black = engine::black_set(sys, &grown);
    let truncated = engine::truncated_sides(sys, &grown, &w);
    let inner = w.shrink(margin, truncated);

    let (union, mismatches) = match inner {
        None => (Err("inner window is empty".to_string()), Vec::new()),
        Some(inner) => match decompose_within(&black, &inner, check.max_components) {
            Ok(u) => {
                let expected: BTreeSet<_> = black.iter().filter(|p| inner.contains(**p)).copied().collect();
                let found = union_enumerate(&u, &inner);
                let mismatches = expected.symmetric_difference(&found).copied().collect();
                (Ok(u), mismatches)
            }
            Err(fail) => {
                let reason = fail.to_string();
                (Err(reason), fail.uncovered)
            }
        },
    };
    let matched = union.is_ok() && mismatches.is_empty();
    Ok(TheoremReport {
        system_id: system_id.to_string(),
        window: w,
        margin,
        truncated,
        inner_window: inner,
        black_count: black.len(),
        directedness,
        union,
        matched,
        mismatches,
    })
}
