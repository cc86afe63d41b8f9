//! Text renderings of assemblies and point sets.
//!
//! * `ascii`: one character per cell, `#` black tile, `o` other tile, `.`
//!   empty; the top line is the largest y.
//! * `svg`: one unit square per tile, top row first, left to right.
//! * `points`: black positions as `x y` lines sorted by x then y.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::assembly::{Assembly, Window};
use crate::model::{Position, TileAssemblySystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Ascii,
    Svg,
    Points,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ascii" => Ok(Format::Ascii),
            "svg" => Ok(Format::Svg),
            "points" => Ok(Format::Points),
            _ => Err(format!("unknown format `{s}` (expected ascii, svg or points)")),
        }
    }
}

/// Render `a`, clipped to `w` when given and to its own bounding box otherwise.
pub fn render(a: &Assembly, sys: &TileAssemblySystem, format: Format, w: Option<&Window>) -> String {
    let Some(frame) = w.copied().or_else(|| a.bounds()) else {
        return match format {
            Format::Svg => svg_header(0, 0, 0, 0) + "</svg>\n",
            _ => String::new(),
        };
    };
    let black = |p: Position| a.get(p).map(|t| sys.tile(t).black);
    match format {
        Format::Ascii => {
            let mut out = String::with_capacity(frame.area() + frame.height() as usize);
            for y in (frame.y_min..=frame.y_max).rev() {
                for x in frame.x_min..=frame.x_max {
                    out.push(match black(Position::new(x, y)) {
                        Some(true) => '#',
                        Some(false) => 'o',
                        None => '.',
                    });
                }
                out.push('\n');
            }
            out
        }
        Format::Svg => {
            let mut out = svg_header(frame.x_min, frame.y_max, frame.width(), frame.height());
            for y in (frame.y_min..=frame.y_max).rev() {
                for x in frame.x_min..=frame.x_max {
                    if let Some(b) = black(Position::new(x, y)) {
                        let fill = if b { "black" } else { "white" };
                        let _ = writeln!(
                            out,
                            "<rect x=\"{x}\" y=\"{}\" width=\"1\" height=\"1\" fill=\"{fill}\"/>",
                            -y
                        );
                    }
                }
            }
            out.push_str("</svg>\n");
            out
        }
        Format::Points => {
            let set: BTreeSet<Position> = a
                .iter()
                .filter(|&(p, t)| frame.contains(p) && sys.tile(t).black)
                .map(|(p, _)| p)
                .collect();
            points(&set)
        }
    }
}

fn svg_header(x_min: i64, y_max: i64, width: i64, height: i64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{x_min} {} {width} {height}\" stroke=\"gray\" stroke-width=\"0.05\">\n",
        -y_max
    )
}

pub fn points(set: &BTreeSet<Position>) -> String {
    let mut out = String::new();
    for p in set {
        let _ = writeln!(out, "{} {}", p.x, p.y);
    }
    out
}

/// Inverse of [`points`]. Blank lines and lines starting with `#` are skipped.
pub fn parse_points(text: &str) -> Result<BTreeSet<Position>, String> {
    let mut set = BTreeSet::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace().map(str::parse::<i64>);
        match (parts.next(), parts.next(), parts.next()) {
            (Some(Ok(x)), Some(Ok(y)), None) => {
                set.insert(Position::new(x, y));
            }
            _ => return Err(format!("line {}: expected `x y`, got `{line}`", n + 1)),
        }
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog;
    use crate::engine::{run, OrderPolicy};
    use crate::model::{Glue, Side, TileType};

    fn single(black: bool) -> (TileAssemblySystem, Assembly) {
        let sys = TileAssemblySystem::new(
            vec![TileType::new("s").with_black(black)],
            [(Position::new(3, -2), "s".to_string())],
            1,
        )
        .unwrap();
        let a = Assembly::seed_of(&sys);
        (sys, a)
    }

    #[test]
    fn seed_only() {
        let (sys, a) = single(true);
        assert_eq!(render(&a, &sys, Format::Ascii, None), "#\n");
        assert_eq!(render(&a, &sys, Format::Points, None), "3 -2\n");
        let w = Window::new(2, 4, -2, -1).unwrap();
        assert_eq!(render(&a, &sys, Format::Ascii, Some(&w)), "...\n.#.\n");
    }

    #[test]
    fn small_filler_without_black() {
        let g = |l: &str| Glue::new(l, 1).unwrap();
        let sys = TileAssemblySystem::new(
            vec![TileType::new("f")
                .with_glue(Side::North, g("v"))
                .with_glue(Side::South, g("v"))
                .with_glue(Side::East, g("h"))
                .with_glue(Side::West, g("h"))],
            [(Position::new(0, 0), "f".to_string())],
            1,
        )
        .unwrap();
        let w = Window::square(2);
        let a = run(&sys, &w, OrderPolicy::Canonical, 10).unwrap().assembly;
        assert_eq!(render(&a, &sys, Format::Ascii, None), "oo\noo\n");
        assert_eq!(render(&a, &sys, Format::Points, None), "");
    }

    #[test]
    fn sierpinski_ascii_count() {
        let e = catalog("sierpinski2").unwrap();
        let sys = e.system();
        let w = Window::square(8);
        let a = run(&sys, &w, OrderPolicy::Canonical, 1000).unwrap().assembly;
        let text = render(&a, &sys, Format::Ascii, None);
        assert_eq!(text.matches('#').count(), 27);
        assert_eq!(text.lines().last(), Some("########"));
        assert_eq!(text.lines().next(), Some("#ooooooo"));
    }

    #[test]
    fn svg_is_deterministic_and_complete() {
        let e = catalog("stripes").unwrap();
        let sys = e.system();
        let w = Window::square(3);
        let a = run(&sys, &w, OrderPolicy::Random(5), 100).unwrap().assembly;
        let b = run(&sys, &w, OrderPolicy::Canonical, 100).unwrap().assembly;
        let text = render(&a, &sys, Format::Svg, None);
        assert_eq!(text, render(&b, &sys, Format::Svg, None));
        assert_eq!(text.matches("<rect").count(), 9);
        assert_eq!(text.matches("fill=\"black\"").count(), 6);
        assert!(text.starts_with("<svg") && text.ends_with("</svg>\n"));
    }

    #[test]
    fn empty_assembly() {
        let sys = single(true).0;
        let a = Assembly::new(Default::default());
        assert_eq!(render(&a, &sys, Format::Ascii, None), "");
        assert!(render(&a, &sys, Format::Svg, None).ends_with("</svg>\n"));
    }

    #[test]
    fn points_round_trip() {
        let set: BTreeSet<Position> = [(0, 1), (-3, 2), (0, -1)].iter().map(|&(x, y)| Position::new(x, y)).collect();
        let text = points(&set);
        assert_eq!(text, "-3 2\n0 -1\n0 1\n");
        assert_eq!(parse_points(&text).unwrap(), set);
        assert!(parse_points("1 2 3\n").is_err());
        assert!(parse_points("1\n").is_err());
    }
}
