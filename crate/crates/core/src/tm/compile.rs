//! Temperature 2 tile systems simulating a machine on one input.
//!
//! Layout (tape cell `k` sits in column `origin + k`):
//!
//! * Row 0 is the seed: input cells, the head cell in the start state, a
//!   left boundary tile in column `origin - 1` and a right boundary tile just
//!   past the input.
//! * Row `r + 1` holds the configuration after `r + 1` steps. The tile above
//!   the head attaches through the head's strength 2 `state|symbol` glue,
//!   writes the new symbol and sends a strength 1 signal sideways: the new
//!   state towards the move, `go` the other way. Every other cell of the row
//!   attaches cooperatively, from the symbol glue below plus the signal from
//!   the neighbour nearer the head. The cell receiving the state becomes the
//!   new head.
//! * Each row is one cell wider than the previous one on both sides: a
//!   signal reaching the boundary tile below turns into a blank cell, which
//!   places the next boundary tile with a strength 2 bond.
//! * When the head is in a stopping configuration the row above it is the
//!   result row and nothing grows above it. In `FunctionBits` mode its tiles
//!   are black exactly over cells holding `1`. In `SetProjection` mode tape
//!   cell 0 carries a mark and only the marked cell of an accepting run is
//!   black, so instance `x` puts a black tile at `(x, result row)` iff the
//!   machine accepts `x`.
//!
//! Glue labels: `s:<symbol>` tape symbols (a trailing `*` marks cell 0),
//! `<state>|<symbol>` heads, `<go`/`go>` and `<h:<state>`/`h:<state>>`
//! signals, `<fin`/`fin>` result sweep (`+`/`-` after `fin` carries the
//! verdict in `SetProjection` mode), `lb`/`rb`/`lbext`/`rbext` boundaries.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::machine::{TmError, TmSpec, BLANK};
use super::oracle::OracleRun;
use crate::assembly::Assembly;
use crate::model::{Glue, ModelError, Position, Side, TileAssemblySystem, TileType};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompileError {
    #[error(transparent)]
    Machine(#[from] TmError),
    #[error("emitted tile set is invalid: {0}")]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Black cells spell the output tape, bit `k` in column `k`.
    FunctionBits,
    /// Instance for the number `x`: black at column `x` iff accepted.
    SetProjection { x: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Role {
    Boundary,
    Cell { symbol: String, marked: bool },
    Head { state: String, symbol: String, marked: bool },
    Result { symbol: String },
    ResultBoundary,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    pub mode: Mode,
    /// Column of tape cell 0.
    pub origin: i64,
    pub input_len: usize,
    /// Indexed by tile id.
    pub roles: Vec<Role>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompiledSystem {
    pub tas: TileAssemblySystem,
    pub layout: Layout,
}

/// One row of an assembly read back as a machine configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowConfig {
    pub state: String,
    /// Tape index of the head.
    pub head: i64,
    pub tape: BTreeMap<i64, String>,
}

fn label(symbol: &str, marked: bool) -> String {
    if marked {
        format!("{symbol}*")
    } else {
        symbol.to_string()
    }
}

struct Builder {
    tiles: Vec<(TileType, Role)>,
}

impl Builder {
    fn add(&mut self, name: String, glues: [Option<(String, i32)>; 4], black: bool, role: Role) -> Result<(), ModelError> {
        let mut t = TileType::new(name).with_black(black);
        for (side, g) in Side::ALL.into_iter().zip(glues) {
            if let Some((l, s)) = g {
                t = t.with_glue(side, Glue::new(l, s)?);
            }
        }
        self.tiles.push((t, role));
        Ok(())
    }
}

fn weak(l: impl Into<String>) -> Option<(String, i32)> {
    Some((l.into(), 1))
}

fn strong(l: impl Into<String>) -> Option<(String, i32)> {
    Some((l.into(), 2))
}

pub fn compile_tm(m: &TmSpec, input: &[String], mode: Mode) -> Result<CompiledSystem, CompileError> {
    for s in input {
        if !m.alphabet().contains(s) {
            return Err(TmError::UnknownSymbol(s.clone()).into());
        }
    }
    let mut tape: Vec<String> = input.to_vec();
    if tape.is_empty() {
        tape.push(BLANK.to_string());
    }
    let (origin, marks, flags): (i64, &[bool], &[&str]) = match mode {
        Mode::FunctionBits => (0, &[false], &[""]),
        Mode::SetProjection { x } => (x, &[false, true], &["+", "-"]),
    };
    let marking = matches!(mode, Mode::SetProjection { .. });
    let contents: Vec<(String, bool)> = m
        .alphabet()
        .iter()
        .flat_map(|s| marks.iter().map(move |&k| (s.clone(), k)))
        .collect();
    let sym = |s: &str, k: bool| format!("s:{}", label(s, k));
    let head = |q: &str, s: &str, k: bool| format!("{q}|{}", label(s, k));
    let black_for = |s: &str, k: bool, flag: &str| match mode {
        Mode::FunctionBits => s == "1",
        Mode::SetProjection { .. } => k && flag == "+",
    };

    let mut b = Builder { tiles: Vec::new() };
    b.add("lb".into(), [weak("lb"), strong("lbext"), None, None], false, Role::Boundary)?;
    b.add("rb".into(), [weak("rb"), None, None, strong("rbext")], false, Role::Boundary)?;

    let mut seed = vec![
        (Position::new(origin - 1, 0), "lb".to_string()),
        (Position::new(origin + tape.len() as i64, 0), "rb".to_string()),
    ];
    let mut seed_tiles = BTreeSet::new();
    for (k, s) in tape.iter().enumerate() {
        let marked = marking && k == 0;
        let (name, north, role) = if k == 0 {
            (
                format!("seed:{}", head(m.start(), s, marked)),
                strong(head(m.start(), s, marked)),
                Role::Head { state: m.start().to_string(), symbol: s.clone(), marked },
            )
        } else {
            (
                format!("seed:{}", label(s, marked)),
                weak(sym(s, marked)),
                Role::Cell { symbol: s.clone(), marked },
            )
        };
        if seed_tiles.insert(name.clone()) {
            b.add(name.clone(), [north, None, None, None], false, role)?;
        }
        seed.push((Position::new(origin + k as i64, 0), name));
    }

    for (s, k) in &contents {
        let c = label(s, *k);
        let cell = Role::Cell { symbol: s.clone(), marked: *k };
        b.add(format!("cell<:{c}"), [weak(sym(s, *k)), weak("<go"), weak(sym(s, *k)), weak("<go")], false, cell.clone())?;
        b.add(format!("cell>:{c}"), [weak(sym(s, *k)), weak("go>"), weak(sym(s, *k)), weak("go>")], false, cell)?;
        for flag in flags {
            let result = Role::Result { symbol: s.clone() };
            let black = black_for(s, *k, flag);
            let west = format!("<fin{flag}");
            let east = format!("fin{flag}>");
            b.add(format!("result<{flag}:{c}"), [None, weak(west.clone()), weak(sym(s, *k)), weak(west)], black, result.clone())?;
            b.add(format!("result>{flag}:{c}"), [None, weak(east.clone()), weak(sym(s, *k)), weak(east)], black, result)?;
        }
    }
    for flag in flags {
        b.add(format!("lbresult{flag}"), [None, weak(format!("<fin{flag}")), weak("lb"), None], false, Role::ResultBoundary)?;
        b.add(format!("rbresult{flag}"), [None, None, weak("rb"), weak(format!("fin{flag}>"))], false, Role::ResultBoundary)?;
    }
    b.add("lbcell".into(), [weak(sym(BLANK, false)), weak("<go"), weak("lb"), strong("lbext")], false, Role::Cell { symbol: BLANK.into(), marked: false })?;
    b.add("rbcell".into(), [weak(sym(BLANK, false)), strong("rbext"), weak("rb"), weak("go>")], false, Role::Cell { symbol: BLANK.into(), marked: false })?;

    for q in m.states() {
        let from_east = format!("<h:{q}");
        let from_west = format!("h:{q}>");
        let blank_head = Role::Head { state: q.clone(), symbol: BLANK.into(), marked: false };
        b.add(format!("lbhead:{q}"), [strong(head(q, BLANK, false)), weak(from_east.clone()), weak("lb"), strong("lbext")], false, blank_head.clone())?;
        b.add(format!("rbhead:{q}"), [strong(head(q, BLANK, false)), strong("rbext"), weak("rb"), weak(from_west.clone())], false, blank_head)?;
        for (s, k) in &contents {
            let c = label(s, *k);
            let role = Role::Head { state: q.clone(), symbol: s.clone(), marked: *k };
            b.add(format!("head<:{q}|{c}"), [strong(head(q, s, *k)), weak(from_east.clone()), weak(sym(s, *k)), weak("<go")], false, role.clone())?;
            b.add(format!("head>:{q}|{c}"), [strong(head(q, s, *k)), weak("go>"), weak(sym(s, *k)), weak(from_west.clone())], false, role)?;
            match m.transition(q, s) {
                Some(t) => {
                    let (east, west) = match t.moves {
                        super::machine::Move::R => (weak(format!("h:{}>", t.next)), weak("<go")),
                        super::machine::Move::L => (weak("go>"), weak(format!("<h:{}", t.next))),
                    };
                    let role = Role::Cell { symbol: t.write.clone(), marked: *k };
                    b.add(format!("write:{q}|{c}"), [weak(sym(&t.write, *k)), east, strong(head(q, s, *k)), west], false, role)?;
                }
                None => {
                    let flag = match mode {
                        Mode::FunctionBits => "",
                        Mode::SetProjection { .. } if m.accepts_in(q) => "+",
                        Mode::SetProjection { .. } => "-",
                    };
                    b.add(
                        format!("result:{q}|{c}"),
                        [None, weak(format!("fin{flag}>")), strong(head(q, s, *k)), weak(format!("<fin{flag}"))],
                        black_for(s, *k, flag),
                        Role::Result { symbol: s.clone() },
                    )?;
                }
            }
        }
    }

    let names: Vec<(String, Role)> = b.tiles.iter().map(|(t, r)| (t.name.clone(), r.clone())).collect();
    let tas = TileAssemblySystem::new(b.tiles.into_iter().map(|(t, _)| t).collect(), seed, 2)?;
    let mut roles = vec![Role::Boundary; tas.tiles().len()];
    for (name, role) in names {
        roles[tas.tile_id(&name).expect("tile was emitted").0] = role;
    }
    Ok(CompiledSystem {
        tas,
        layout: Layout {
            mode,
            origin,
            input_len: input.len(),
            roles,
        },
    })
}

impl CompiledSystem {
    pub fn role_at(&self, a: &Assembly, p: Position) -> Option<&Role> {
        a.get(p).map(|t| &self.layout.roles[t.0])
    }

    /// Row holding the result sweep, if it has started.
    pub fn result_row(&self, a: &Assembly) -> Option<i64> {
        a.iter()
            .find(|(_, t)| matches!(self.layout.roles[t.0], Role::Result { .. } | Role::ResultBoundary))
            .map(|(p, _)| p.y)
    }

    /// Black positions of the result row, moved so that row is `y = 0`.
    pub fn result_black_set(&self, a: &Assembly) -> Option<BTreeSet<Position>> {
        let row = self.result_row(a)?;
        Some(
            a.iter()
                .filter(|(p, t)| p.y == row && self.tas.tile(*t).black)
                .map(|(p, _)| Position::new(p.x, 0))
                .collect(),
        )
    }

    /// Read row `y` as a configuration; `None` unless it has exactly one head.
    pub fn decode_row(&self, a: &Assembly, y: i64) -> Option<RowConfig> {
        let mut tape = BTreeMap::new();
        let mut head = None;
        for (p, t) in a.iter().filter(|(p, _)| p.y == y) {
            let k = p.x - self.layout.origin;
            match &self.layout.roles[t.0] {
                Role::Cell { symbol, .. } => {
                    tape.insert(k, symbol.clone());
                }
                Role::Head { state, symbol, .. } => {
                    if head.replace((k, state.clone())).is_some() {
                        return None;
                    }
                    tape.insert(k, symbol.clone());
                }
                _ => {}
            }
        }
        let (head, state) = head?;
        Some(RowConfig { state, head, tape })
    }
}

/// The set the result row should show, in the coordinates of
/// [`CompiledSystem::result_black_set`].
pub fn expected_black_set(run: &OracleRun, mode: Mode) -> BTreeSet<Position> {
    match mode {
        Mode::FunctionBits => run
            .config
            .tape
            .iter()
            .filter(|(_, s)| s.as_str() == "1")
            .map(|(&k, _)| Position::new(k, 0))
            .collect(),
        Mode::SetProjection { x } => {
            if run.halted && run.accepted {
                BTreeSet::from([Position::new(x, 0)])
            } else {
                BTreeSet::new()
            }
        }
    }
}
