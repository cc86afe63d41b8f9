//! Checking a compiled system against the interpreter.

use std::collections::BTreeSet;
use std::fmt;

use super::compile::{expected_black_set, CompiledSystem, Role};
use super::machine::{TmSpec, BLANK};
use super::oracle::tm_trace;
use crate::assembly::{Assembly, Window};
use crate::engine::{probe_directedness, run, DirectednessReport, EngineError, OrderPolicy};
use crate::model::{glue_interaction, Position};

/// Bond structure of a compiled system: every glue has strength 1 or 2, and
/// each attachment in a run used a strength 2 bond or at least two
/// strength 1 bonds.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CooperationAudit {
    /// Tiles with a glue of strength other than 1 or 2, or black tiles
    /// outside the result row.
    pub tile_violations: Vec<String>,
    pub attachments: usize,
    pub strong: usize,
    pub cooperative: usize,
    /// Attachments that held by a single strength 1 bond.
    pub runtime_violations: Vec<Position>,
}

impl CooperationAudit {
    pub fn ok(&self) -> bool {
        self.tile_violations.is_empty() && self.runtime_violations.is_empty()
    }
}

pub fn audit_tiles(c: &CompiledSystem) -> Vec<String> {
    let mut bad = Vec::new();
    for (id, t) in c.tas.tile_ids().zip(c.tas.tiles()) {
        let strengths_ok = t.glues().all(|(_, g)| g.is_null() || matches!(g.strength(), 1 | 2));
        let black_ok = !t.black || matches!(c.layout.roles[id.0], Role::Result { .. });
        if !strengths_ok || !black_ok {
            bad.push(t.name.clone());
        }
    }
    bad
}

/// Replay the recorded attachment order of `a` and classify every bond set.
pub fn audit_cooperation(c: &CompiledSystem, a: &Assembly) -> CooperationAudit {
    let mut audit = CooperationAudit {
        tile_violations: audit_tiles(c),
        ..Default::default()
    };
    let Some(order) = a.provenance() else {
        return audit;
    };
    let mut placed = c.tas.seed().clone();
    for &p in order {
        let t = a.get(p).expect("recorded position is occupied");
        let tile = c.tas.tile(t);
        let bonds: Vec<i32> = p
            .neighbors()
            .into_iter()
            .filter_map(|(side, q)| {
                let other = c.tas.tile(*placed.get(&q)?);
                Some(glue_interaction(tile.glue(side), other.glue(side.opposite())))
            })
            .filter(|&s| s > 0)
            .collect();
        audit.attachments += 1;
        if bonds.iter().any(|&s| s >= 2) {
            audit.strong += 1;
        } else if bonds.len() >= 2 {
            audit.cooperative += 1;
        } else {
            audit.runtime_violations.push(p);
        }
        placed.insert(p, t);
    }
    audit
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidationStatus {
    Match,
    Mismatch,
    /// The window cannot hold the computation; nothing was compared.
    StepBudget(String),
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub status: ValidationStatus,
    pub steps: Option<usize>,
    pub expected: BTreeSet<Position>,
    pub observed: Option<BTreeSet<Position>>,
    /// First row whose decoded configuration differs from the interpreter.
    pub row_mismatch: Option<usize>,
    pub directedness: Option<DirectednessReport>,
    pub audit: CooperationAudit,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fmt_set = |s: &BTreeSet<Position>| s.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ");
        match &self.status {
            ValidationStatus::Match => write!(f, "match")?,
            ValidationStatus::Mismatch => write!(f, "MISMATCH")?,
            ValidationStatus::StepBudget(why) => return write!(f, "step budget: {why}"),
        }
        if let Some(steps) = self.steps {
            write!(f, "; halted after {steps} steps")?;
        }
        write!(f, "; expected {{{}}}", fmt_set(&self.expected))?;
        if let Some(o) = &self.observed {
            write!(f, "; observed {{{}}}", fmt_set(o))?;
        }
        if let Some(r) = self.row_mismatch {
            write!(f, "; row {r} disagrees with the interpreter")?;
        }
        if let Some(d) = &self.directedness {
            write!(f, "; {}", d.summary())?;
        }
        write!(
            f,
            "; {} attachments ({} strong, {} cooperative, {} single weak bonds)",
            self.audit.attachments,
            self.audit.strong,
            self.audit.cooperative,
            self.audit.runtime_violations.len()
        )?;
        if !self.audit.tile_violations.is_empty() {
            write!(f, "; bad tiles: {}", self.audit.tile_violations.join(" "))?;
        }
        Ok(())
    }
}

/// Run the compiled system on `w` and compare it with the interpreter.
/// `trials` random orders are probed for directedness when `trials >= 2`.
pub fn validate_compilation(
    c: &CompiledSystem,
    m: &TmSpec,
    input: &[String],
    w: &Window,
    trials: usize,
    rng_seed: u64,
) -> Result<ValidationReport, EngineError> {
    let budget_report = |why: String, steps: Option<usize>| ValidationReport {
        status: ValidationStatus::StepBudget(why),
        steps,
        expected: BTreeSet::new(),
        observed: None,
        row_mismatch: None,
        directedness: None,
        audit: CooperationAudit {
            tile_violations: audit_tiles(c),
            ..Default::default()
        },
    };
    if w.y_min > 0 || w.y_max < 1 {
        return Ok(budget_report(format!("window {w} has no room above the seed row"), None));
    }
    let max_steps = (w.y_max - 1) as usize;
    let (trace, halted) = tm_trace(m, input, max_steps).expect("compiled input is over the alphabet");
    let steps = trace.len() - 1;
    if !halted {
        return Ok(budget_report(
            format!("no halt within {max_steps} steps; the result row needs y_max >= steps + 1"),
            None,
        ));
    }
    let origin = c.layout.origin;
    let last = trace.last().expect("nonempty trace");
    let lo = origin + *last.tape.keys().next().expect("tape has a cell") - 1;
    let hi = origin + *last.tape.keys().next_back().expect("tape has a cell") + 1;
    if lo < w.x_min || hi > w.x_max {
        return Ok(budget_report(
            format!("tape with boundaries spans columns {lo}..={hi}, outside window {w}"),
            Some(steps),
        ));
    }

    let outcome = run(&c.tas, w, OrderPolicy::Canonical, w.area())?;
    let a = &outcome.assembly;
    let row_mismatch = trace.iter().enumerate().find_map(|(r, config)| {
        let row = c.decode_row(a, r as i64)?;
        let keys: BTreeSet<i64> = row.tape.keys().chain(config.tape.keys()).copied().collect();
        let symbol = |t: &std::collections::BTreeMap<i64, String>, k| t.get(&k).map(String::as_str).unwrap_or(BLANK).to_string();
        let same = row.state == config.state
            && row.head == config.head
            && keys.iter().all(|&k| symbol(&row.tape, k) == symbol(&config.tape, k));
        (!same).then_some(r)
    });
    // A row that fails to decode at all also counts as a mismatch.
    let row_mismatch = row_mismatch.or_else(|| (0..=steps).find(|&r| c.decode_row(a, r as i64).is_none()));
    let observed = c.result_black_set(a);
    let row_ok = c.result_row(a) == Some(steps as i64 + 1);
    let run_summary = super::oracle::OracleRun {
        halted,
        accepted: halted && m.accepts_in(&last.state),
        steps,
        config: last.clone(),
    };
    let expected = expected_black_set(&run_summary, c.layout.mode);
    let directedness = if trials >= 2 {
        Some(probe_directedness(&c.tas, w, trials, rng_seed)?)
    } else {
        None
    };
    let audit = audit_cooperation(c, a);
    let matched = row_ok
        && observed.as_ref() == Some(&expected)
        && row_mismatch.is_none()
        && directedness.as_ref().is_none_or(|d| d.consistent)
        && audit.ok();
    Ok(ValidationReport {
        status: if matched { ValidationStatus::Match } else { ValidationStatus::Mismatch },
        steps: Some(steps),
        expected,
        observed,
        row_mismatch,
        directedness,
        audit,
    })
}
