//! Deterministic single-tape machines and their text format.
//!
//! ```text
//! # binary increment, least significant bit first
//! STATES carry done
//! ALPHABET 0 1 _
//! START carry
//! HALT done
//! TRANSITIONS
//! carry 1 -> carry 0 R
//! carry 0 -> done 1 R
//! carry _ -> done 1 R
//! ```
//!
//! A section starts with its keyword (`STATES`, `ALPHABET`, `START`, `HALT`,
//! `ACCEPT`, `TRANSITIONS`) at the beginning of a line; its items follow on
//! the same line and/or the following lines, separated by whitespace. Each
//! section appears at most once; all but `ACCEPT` are required. `#` starts a
//! comment. `TRANSITIONS` holds one `state symbol -> state symbol L|R` rule
//! per line.
//!
//! `_` is the blank symbol and belongs to every alphabet. Names consist of
//! ASCII letters, digits, `_`, `-` and `.`.
//!
//! The machine stops in a state listed under `HALT` or `ACCEPT`, or when no
//! rule applies. It accepts when it stops in an `ACCEPT` state; without an
//! `ACCEPT` section every `HALT` state accepts.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

pub const BLANK: &str = "_";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TmError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing section {0}")]
    MissingSection(&'static str),
    #[error("invalid name `{0}`")]
    BadName(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("more than one rule for state `{0}` reading `{1}`")]
    Nondeterministic(String, String),
    #[error("halting state `{0}` has an outgoing rule")]
    HaltingStateMoves(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Move {
    L,
    R,
}

impl Move {
    pub fn delta(self) -> i64 {
        match self {
            Move::L => -1,
            Move::R => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub next: String,
    pub write: String,
    pub moves: Move,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TmSpec {
    states: BTreeSet<String>,
    alphabet: BTreeSet<String>,
    start: String,
    halt: BTreeSet<String>,
    accept: Option<BTreeSet<String>>,
    transitions: BTreeMap<(String, String), Transition>,
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

impl TmSpec {
    pub fn new(
        states: impl IntoIterator<Item = String>,
        alphabet: impl IntoIterator<Item = String>,
        start: String,
        halt: impl IntoIterator<Item = String>,
        accept: Option<Vec<String>>,
        rules: impl IntoIterator<Item = (String, String, Transition)>,
    ) -> Result<Self, TmError> {
        let states: BTreeSet<String> = states.into_iter().collect();
        let mut alphabet: BTreeSet<String> = alphabet.into_iter().collect();
        alphabet.insert(BLANK.to_string());
        for name in states.iter().chain(&alphabet) {
            if !valid_name(name) {
                return Err(TmError::BadName(name.clone()));
            }
        }
        let known_state = |s: &String| {
            if states.contains(s) {
                Ok(())
            } else {
                Err(TmError::UnknownState(s.clone()))
            }
        };
        let known_symbol = |s: &String| {
            if alphabet.contains(s) {
                Ok(())
            } else {
                Err(TmError::UnknownSymbol(s.clone()))
            }
        };
        known_state(&start)?;
        let halt: BTreeSet<String> = halt.into_iter().collect();
        halt.iter().try_for_each(known_state)?;
        let accept: Option<BTreeSet<String>> = accept.map(|a| a.into_iter().collect());
        if let Some(a) = &accept {
            a.iter().try_for_each(known_state)?;
        }
        let mut transitions = BTreeMap::new();
        for (state, read, t) in rules {
            known_state(&state)?;
            known_state(&t.next)?;
            known_symbol(&read)?;
            known_symbol(&t.write)?;
            if halt.contains(&state) || accept.as_ref().is_some_and(|a| a.contains(&state)) {
                return Err(TmError::HaltingStateMoves(state));
            }
            if transitions.contains_key(&(state.clone(), read.clone())) {
                return Err(TmError::Nondeterministic(state, read));
            }
            transitions.insert((state, read), t);
        }
        Ok(TmSpec {
            states,
            alphabet,
            start,
            halt,
            accept,
            transitions,
        })
    }

    pub fn states(&self) -> &BTreeSet<String> {
        &self.states
    }

    pub fn alphabet(&self) -> &BTreeSet<String> {
        &self.alphabet
    }

    pub fn start(&self) -> &str {
        &self.start
    }

    /// The rule to apply, or `None` when the machine stops here.
    pub fn transition(&self, state: &str, symbol: &str) -> Option<&Transition> {
        if self.is_halt_state(state) {
            return None;
        }
        self.transitions.get(&(state.to_string(), symbol.to_string()))
    }

    pub fn is_halt_state(&self, state: &str) -> bool {
        self.halt.contains(state) || self.accept.as_ref().is_some_and(|a| a.contains(state))
    }

    pub fn accepts_in(&self, state: &str) -> bool {
        match &self.accept {
            Some(a) => a.contains(state),
            None => self.halt.contains(state),
        }
    }

    pub fn rules(&self) -> impl Iterator<Item = (&str, &str, &Transition)> {
        self.transitions.iter().map(|((q, a), t)| (q.as_str(), a.as_str(), t))
    }

    pub fn parse(text: &str) -> Result<Self, TmError> {
        const SECTIONS: [&str; 6] = ["STATES", "ALPHABET", "START", "HALT", "ACCEPT", "TRANSITIONS"];
        let mut items: BTreeMap<&str, Vec<(usize, &str)>> = BTreeMap::new();
        let mut current: Option<&str> = None;
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let first = line.split_whitespace().next().unwrap_or("");
            let rest = if let Some(&section) = SECTIONS.iter().find(|s| **s == first) {
                if items.contains_key(section) {
                    return Err(TmError::Syntax {
                        line: line_no,
                        message: format!("section {section} repeated"),
                    });
                }
                items.insert(section, Vec::new());
                current = Some(section);
                line[first.len()..].trim()
            } else {
                line
            };
            let Some(section) = current else {
                return Err(TmError::Syntax {
                    line: line_no,
                    message: format!("expected a section keyword, found `{first}`"),
                });
            };
            if rest.is_empty() {
                continue;
            }
            let entry = items.get_mut(section).expect("section registered");
            if section == "TRANSITIONS" {
                entry.push((line_no, rest));
            } else {
                entry.extend(rest.split_whitespace().map(|w| (line_no, w)));
            }
        }
        let mut take = |name: &'static str| items.remove(name).ok_or(TmError::MissingSection(name));
        let words = |v: Vec<(usize, &str)>| v.into_iter().map(|(_, w)| w.to_string()).collect::<Vec<_>>();
        let states = words(take("STATES")?);
        let alphabet = words(take("ALPHABET")?);
        let start = take("START")?;
        let start = match start.as_slice() {
            [(_, s)] => s.to_string(),
            [] => return Err(TmError::Syntax { line: 0, message: "START names no state".into() }),
            [_, (line, _), ..] => {
                return Err(TmError::Syntax {
                    line: *line,
                    message: "START names more than one state".into(),
                })
            }
        };
        let halt = words(take("HALT")?);
        let accept = take("ACCEPT").ok().map(words);
        let mut rules = Vec::new();
        for (line, rule) in take("TRANSITIONS")? {
            let parts: Vec<&str> = rule.split_whitespace().collect();
            let moves = match parts.get(5) {
                Some(&"L") => Some(Move::L),
                Some(&"R") => Some(Move::R),
                _ => None,
            };
            match (parts.len(), parts.get(2), moves) {
                (6, Some(&"->"), Some(moves)) => rules.push((
                    parts[0].to_string(),
                    parts[1].to_string(),
                    Transition {
                        next: parts[3].to_string(),
                        write: parts[4].to_string(),
                        moves,
                    },
                )),
                _ => {
                    return Err(TmError::Syntax {
                        line,
                        message: format!("expected `state symbol -> state symbol L|R`, found `{rule}`"),
                    })
                }
            }
        }
        TmSpec::new(states, alphabet, start, halt, accept, rules)
    }
}

impl fmt::Display for TmSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |s: &BTreeSet<String>| s.iter().cloned().collect::<Vec<_>>().join(" ");
        writeln!(f, "STATES {}", join(&self.states))?;
        writeln!(f, "ALPHABET {}", join(&self.alphabet))?;
        writeln!(f, "START {}", self.start)?;
        writeln!(f, "HALT {}", join(&self.halt))?;
        if let Some(a) = &self.accept {
            writeln!(f, "ACCEPT {}", join(a))?;
        }
        writeln!(f, "TRANSITIONS")?;
        for ((q, a), t) in &self.transitions {
            writeln!(f, "{q} {a} -> {} {} {:?}", t.next, t.write, t.moves)?;
        }
        Ok(())
    }
}

/// Split an input argument into symbols: comma separated when it contains a
/// comma, one symbol per character otherwise.
pub fn split_input(text: &str) -> Vec<String> {
    if text.contains(',') {
        text.split(',').map(|s| s.trim().to_string()).collect()
    } else {
        text.chars().map(String::from).collect()
    }
}

/// `n` in binary, least significant bit first, padded with `0` to `width`.
pub fn binary_input(n: u64, width: usize) -> Vec<String> {
    let bits = (64 - n.leading_zeros() as usize).max(width).max(1);
    (0..bits).map(|k| if n >> k & 1 == 1 { "1" } else { "0" }.to_string()).collect()
}
