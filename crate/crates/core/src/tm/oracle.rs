//! Direct interpreter, used as ground truth for compiled systems.

use std::collections::BTreeMap;

use super::machine::{TmError, TmSpec, BLANK};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub state: String,
    pub head: i64,
    /// Every cell that held input or was visited; absent cells are blank.
    pub tape: BTreeMap<i64, String>,
}

impl Config {
    pub fn initial(m: &TmSpec, input: &[String]) -> Result<Config, TmError> {
        let mut tape = BTreeMap::new();
        for (k, s) in input.iter().enumerate() {
            if !m.alphabet().contains(s) {
                return Err(TmError::UnknownSymbol(s.clone()));
            }
            tape.insert(k as i64, s.clone());
        }
        tape.entry(0).or_insert_with(|| BLANK.to_string());
        Ok(Config {
            state: m.start().to_string(),
            head: 0,
            tape,
        })
    }

    pub fn symbol(&self, x: i64) -> &str {
        self.tape.get(&x).map(String::as_str).unwrap_or(BLANK)
    }

    /// Tape contents from the leftmost to the rightmost non-blank cell.
    pub fn tape_string(&self) -> String {
        let mut used = self.tape.iter().filter(|(_, s)| s.as_str() != BLANK).map(|(&x, _)| x);
        match (used.next(), used.next_back()) {
            (Some(lo), hi) => (lo..=hi.unwrap_or(lo)).map(|x| self.symbol(x)).collect(),
            _ => String::new(),
        }
    }

    /// Apply one rule; `false` when the machine has stopped.
    pub fn step(&mut self, m: &TmSpec) -> bool {
        let Some(t) = m.transition(&self.state, self.symbol(self.head)) else {
            return false;
        };
        self.tape.insert(self.head, t.write.clone());
        self.state = t.next.clone();
        self.head += t.moves.delta();
        self.tape.entry(self.head).or_insert_with(|| BLANK.to_string());
        true
    }

    pub fn is_stopped(&self, m: &TmSpec) -> bool {
        m.transition(&self.state, self.symbol(self.head)).is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleRun {
    pub halted: bool,
    pub accepted: bool,
    pub steps: usize,
    pub config: Config,
}

/// Run at most `max_steps` rules. `halted` is false when the limit was hit
/// with a rule still applicable.
pub fn tm_oracle(m: &TmSpec, input: &[String], max_steps: usize) -> Result<OracleRun, TmError> {
    let (trace, halted) = tm_trace(m, input, max_steps)?;
    let steps = trace.len() - 1;
    let config = trace.into_iter().next_back().expect("trace holds the initial configuration");
    Ok(OracleRun {
        halted,
        accepted: halted && m.accepts_in(&config.state),
        steps,
        config,
    })
}

/// Configurations after 0, 1, ... steps, and whether the last one is stopped.
pub fn tm_trace(m: &TmSpec, input: &[String], max_steps: usize) -> Result<(Vec<Config>, bool), TmError> {
    let mut config = Config::initial(m, input)?;
    let mut trace = vec![config.clone()];
    while trace.len() <= max_steps {
        if !config.step(m) {
            break;
        }
        trace.push(config.clone());
    }
    let halted = config.is_stopped(m);
    Ok((trace, halted))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tm::machine::{binary_input, split_input};

    fn machine(name: &str) -> TmSpec {
        let text = match name {
            "increment" => include_str!("../../machines/increment.tm"),
            "identity" => include_str!("../../machines/identity.tm"),
            "loop" => include_str!("../../machines/loop.tm"),
            "rewind" => include_str!("../../machines/rewind.tm"),
            "odd-ones" => include_str!("../../machines/odd-ones.tm"),
            _ => unreachable!(),
        };
        TmSpec::parse(text).unwrap()
    }

    #[test]
    fn identity_halts_at_once() {
        let run = tm_oracle(&machine("identity"), &split_input("101"), 10).unwrap();
        assert!(run.halted);
        assert_eq!(run.steps, 0);
        assert_eq!(run.config.tape_string(), "101");
    }

    #[test]
    fn increment_carries() {
        let run = tm_oracle(&machine("increment"), &split_input("111"), 100).unwrap();
        assert!(run.halted);
        assert_eq!(run.steps, 4);
        assert_eq!(run.config.tape_string(), "0001");
        let m = machine("increment");
        for n in 0..64u64 {
            let run = tm_oracle(&m, &binary_input(n, 6), 100).unwrap();
            let value: u64 = (0..)
                .zip(run.config.tape_string().chars())
                .map(|(k, c)| if c == '1' { 1 << k } else { 0 })
                .sum();
            assert_eq!(value, n + 1);
        }
    }

    #[test]
    fn loop_hits_the_limit() {
        let run = tm_oracle(&machine("loop"), &[], 100).unwrap();
        assert!(!run.halted);
        assert!(!run.accepted);
        assert_eq!(run.steps, 100);
        assert_eq!(run.config.head, 100);
    }

    #[test]
    fn rewind_visits_both_sides() {
        let (trace, halted) = tm_trace(&machine("rewind"), &split_input("10"), 100).unwrap();
        assert!(halted);
        assert_eq!(trace.len(), 7);
        let last = trace.last().unwrap();
        assert_eq!(last.head, 0);
        assert_eq!(last.tape_string(), "110");
        assert_eq!(last.tape.keys().next(), Some(&-1));
    }

    #[test]
    fn acceptance() {
        let m = machine("odd-ones");
        for n in 0..32u64 {
            let run = tm_oracle(&m, &binary_input(n, 0), 100).unwrap();
            assert!(run.halted);
            assert_eq!(run.accepted, n.count_ones() % 2 == 1, "{n}");
        }
    }

    #[test]
    fn unknown_input_symbol() {
        assert_eq!(
            tm_oracle(&machine("identity"), &split_input("12"), 1),
            Err(TmError::UnknownSymbol("2".into()))
        );
    }
}
