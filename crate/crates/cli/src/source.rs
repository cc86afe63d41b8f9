use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use tilework::catalog::{catalog, CatalogEntry};
use tilework::document::parse_tas;
use tilework::model::Position;
use tilework::pump::TilePath;
use tilework::tm::{bundled_machine, TmSpec};
use tilework::{TileAssemblySystem, Window};

pub struct Source {
    pub id: String,
    pub system: TileAssemblySystem,
    pub entry: Option<CatalogEntry>,
}

/// A catalog id, or else a path to a document.
pub fn load(source: &str) -> Result<Source> {
    if let Ok(entry) = catalog(source) {
        return Ok(Source {
            id: source.to_string(),
            system: entry.system(),
            entry: Some(entry),
        });
    }
    let path = Path::new(source);
    if !path.exists() {
        bail!("`{source}` is neither a catalog id nor a file");
    }
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {source}"))?;
    let system = parse_tas(&text).with_context(|| format!("in {source}"))?;
    Ok(Source {
        id: source.to_string(),
        system,
        entry: None,
    })
}

/// Explicit window, else the catalog window, else the seed's bounding box
/// grown by 32 on every side.
pub fn window(src: &Source, explicit: Option<Window>) -> Window {
    explicit
        .or_else(|| src.entry.as_ref().map(|e| e.window))
        .unwrap_or_else(|| {
            let b = Window::bounding(src.system.seed().keys()).expect("validated systems have a seed");
            Window::new(b.x_min - 32, b.x_max + 32, b.y_min - 32, b.y_max + 32).expect("grown window")
        })
}

pub fn machine(name: &str) -> Result<TmSpec> {
    let text = match bundled_machine(name) {
        Some(text) => text.to_string(),
        None => {
            let path = Path::new(name);
            if !path.exists() {
                bail!("`{name}` is neither a bundled machine nor a file");
            }
            std::fs::read_to_string(path).with_context(|| format!("reading {name}"))?
        }
    };
    TmSpec::parse(&text).with_context(|| format!("in {name}"))
}

/// Lines of `x y tile`; blank lines and `#` comments skipped.
pub fn path_file(path: &Path) -> Result<TilePath> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut steps = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [x, y, tile] = parts[..] else {
            bail!("{}:{}: expected `x y tile`", path.display(), n + 1);
        };
        let coord = |s: &str| s.parse::<i64>().map_err(|e| anyhow!("{}:{}: {e}", path.display(), n + 1));
        steps.push((Position::new(coord(x)?, coord(y)?), tile.to_string()));
    }
    TilePath::new(steps).map_err(|e| anyhow!("{}: {e}", path.display()))
}
