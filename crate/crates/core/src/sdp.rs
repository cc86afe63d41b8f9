//! Semi-doubly periodic sets `{b + n*u + m*v | n, m >= 0}` and finite unions
//! of them.
//!
//! Membership is decided exactly. With independent periods it is a 2x2
//! integer solve; with dependent periods the set lives on one line through
//! `b` and membership reduces to a one-dimensional question about which
//! multiples of the primitive direction are reachable.

use std::collections::BTreeSet;
use std::fmt;

use crate::assembly::Window;
use crate::model::{Position, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SdpSet {
    pub base: Position,
    pub period_u: Vector,
    pub period_v: Vector,
}

impl SdpSet {
    pub const fn new(base: Position, period_u: Vector, period_v: Vector) -> Self {
        SdpSet {
            base,
            period_u,
            period_v,
        }
    }

    pub fn point(base: Position) -> Self {
        SdpSet::new(base, Vector::ZERO, Vector::ZERO)
    }

    pub fn translate(&self, d: Vector) -> Self {
        SdpSet {
            base: self.base.translate(d),
            ..*self
        }
    }

    fn shape(&self) -> Shape {
        let (u, v) = (self.period_u, self.period_v);
        if u.cross(v) != 0 {
            return Shape::Plane;
        }
        match (u.is_zero(), v.is_zero()) {
            (true, true) => Shape::Point,
            (false, true) => Shape::line(u, None),
            (true, false) => Shape::line(v, None),
            (false, false) => Shape::line(u, Some(v)),
        }
    }
}

impl fmt::Display for SdpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b={} u={} v={}", self.base, self.period_u, self.period_v)
    }
}

/// Which multiples `t` of a primitive direction are reachable as
/// `n*a + m*c` with `n, m >= 0`.
#[derive(Debug, Clone, Copy)]
enum Reach {
    /// `t = n*a`, `a > 0`.
    Ray(i64),
    /// Numerical semigroup generated by `a, c > 0`.
    Semigroup(i64, i64),
    /// Opposite directions: every multiple of `g`.
    Lattice(i64),
}

impl Reach {
    fn contains(self, t: i64) -> bool {
        match self {
            Reach::Ray(a) => t >= 0 && t % a == 0,
            Reach::Lattice(g) => t % g == 0,
            Reach::Semigroup(a, c) => {
                t >= 0 && (0..a).any(|m| {
                    let rest = t - m * c;
                    rest >= 0 && rest % a == 0
                })
            }
        }
    }

    fn unbounded_below(self) -> bool {
        matches!(self, Reach::Lattice(_))
    }
}

#[derive(Debug, Clone, Copy)]
enum Shape {
    Point,
    Line { dir: Vector, reach: Reach },
    Plane,
}

impl Shape {
    fn line(first: Vector, second: Option<Vector>) -> Shape {
        let g = gcd(first.x, first.y);
        let dir = Vector::new(first.x / g, first.y / g);
        let reach = match second {
            None => Reach::Ray(g),
            Some(v) => {
                let c = if dir.x != 0 { v.x / dir.x } else { v.y / dir.y };
                if c > 0 {
                    Reach::Semigroup(g, c)
                } else {
                    Reach::Lattice(gcd(g, c))
                }
            }
        };
        Shape::Line { dir, reach }
    }
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The multiple `t` with `r = t*dir`, if `r` lies on the line.
fn along(r: Vector, dir: Vector) -> Option<i64> {
    if r.cross(dir) != 0 {
        return None;
    }
    Some(if dir.x != 0 { r.x / dir.x } else { r.y / dir.y })
}

pub fn sdp_member(s: &SdpSet, p: Position) -> bool {
    let r = p.offset_from(s.base);
    match s.shape() {
        Shape::Point => r.is_zero(),
        Shape::Line { dir, reach } => along(r, dir).is_some_and(|t| reach.contains(t)),
        Shape::Plane => {
            let (u, v) = (s.period_u, s.period_v);
            let det = u.cross(v);
            let n_num = r.cross(v);
            let m_num = u.cross(r);
            n_num % det == 0 && m_num % det == 0 && n_num / det >= 0 && m_num / det >= 0
        }
    }
}

/// Inclusive range of integers `t` with `lo <= a*t <= hi`, or `None` if `a == 0`
/// (caller handles that axis separately).
fn solve_range(a: i64, lo: i64, hi: i64) -> Option<(i64, i64)> {
    if a == 0 {
        return None;
    }
    let (lo, hi) = if a > 0 { (lo, hi) } else { (-hi, -lo) };
    let a = a.abs();
    Some((lo.div_euclid(a) + i64::from(lo.rem_euclid(a) != 0), hi.div_euclid(a)))
}

/// Every member of `s` inside `w`.
pub fn sdp_enumerate(s: &SdpSet, w: &Window) -> BTreeSet<Position> {
    let mut out = BTreeSet::new();
    match s.shape() {
        Shape::Point => {
            if w.contains(s.base) {
                out.insert(s.base);
            }
        }
        Shape::Line { dir, reach } => {
            let mut lo = i64::MIN;
            let mut hi = i64::MAX;
            let axes = [
                (dir.x, w.x_min - s.base.x, w.x_max - s.base.x, s.base.x, w.x_min, w.x_max),
                (dir.y, w.y_min - s.base.y, w.y_max - s.base.y, s.base.y, w.y_min, w.y_max),
            ];
            for (a, rlo, rhi, b, wlo, whi) in axes {
                match solve_range(a, rlo, rhi) {
                    Some((l, h)) => {
                        lo = lo.max(l);
                        hi = hi.min(h);
                    }
                    None if !(wlo..=whi).contains(&b) => return out,
                    None => {}
                }
            }
            if !reach.unbounded_below() {
                lo = lo.max(0);
            }
            for t in lo..=hi {
                if reach.contains(t) {
                    out.insert(s.base.translate(dir.scale(t)));
                }
            }
        }
        Shape::Plane => {
            for (n, m) in plane_coefficients(s, w) {
                let p = s.base.translate(s.period_u.scale(n)).translate(s.period_v.scale(m));
                if w.contains(p) {
                    out.insert(p);
                }
            }
        }
    }
    out
}

/// Rectangle of `(n, m)` that can reach the window when the periods are
/// independent. `n` and `m` are affine in the target point, so their
/// extremes over the window sit at its corners.
pub(crate) fn plane_coefficients(s: &SdpSet, w: &Window) -> impl Iterator<Item = (i64, i64)> {
    let (u, v) = (s.period_u, s.period_v);
    let det = u.cross(v) as f64;
    let corners = [
        Position::new(w.x_min, w.y_min),
        Position::new(w.x_min, w.y_max),
        Position::new(w.x_max, w.y_min),
        Position::new(w.x_max, w.y_max),
    ];
    let mut n_range = (f64::INFINITY, f64::NEG_INFINITY);
    let mut m_range = (f64::INFINITY, f64::NEG_INFINITY);
    for c in corners {
        let r = c.offset_from(s.base);
        let n = r.cross(v) as f64 / det;
        let m = u.cross(r) as f64 / det;
        n_range = (n_range.0.min(n), n_range.1.max(n));
        m_range = (m_range.0.min(m), m_range.1.max(m));
    }
    let n_lo = (n_range.0.ceil() as i64 - 1).max(0);
    let n_hi = n_range.1.floor() as i64 + 1;
    let m_lo = (m_range.0.ceil() as i64 - 1).max(0);
    let m_hi = m_range.1.floor() as i64 + 1;
    (n_lo..=n_hi).flat_map(move |n| (m_lo..=m_hi).map(move |m| (n, m)))
}

/// A finite union; no components is the empty set.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SdpUnion {
    pub components: Vec<SdpSet>,
}

impl SdpUnion {
    pub fn new(components: Vec<SdpSet>) -> Self {
        SdpUnion { components }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn contains(&self, p: Position) -> bool {
        self.components.iter().any(|s| sdp_member(s, p))
    }
}

impl fmt::Display for SdpUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.components.iter().enumerate() {
            writeln!(f, "{i}: {s}")?;
        }
        Ok(())
    }
}

pub fn union_enumerate(u: &SdpUnion, w: &Window) -> BTreeSet<Position> {
    u.components.iter().flat_map(|s| sdp_enumerate(s, w)).collect()
}
