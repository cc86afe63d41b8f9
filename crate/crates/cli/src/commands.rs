use std::fmt::Write as _;

use anyhow::{anyhow, bail, Context};
use rayon::prelude::*;
use tilework::catalog::{catalog as lookup, IDS};
use tilework::decompose::{decompose_truncated as cover, default_margin, verify_main_theorem, TheoremCheck};
use tilework::document::serialize_tas;
use tilework::engine::{black_set, probe_directedness, run, truncated_sides, OrderPolicy, RunOutcome};
use tilework::pump::{find_repeats, paths_from_seed, pump_check_in, TilePath};
use tilework::render::{parse_points, points, render as draw, Format};
use tilework::sdp::union_enumerate;
use tilework::tm::{
    binary_input, compile_tm as compile, split_input, tm_oracle, validate_compilation, CompiledSystem, Mode, TmSpec,
    ValidationStatus,
};
use tilework::{Sides, Window};

use crate::source::{self, Source};
use crate::{
    CatalogArgs, CompileArgs, DecomposeArgs, Failure, Order, PumpArgs, RenderArgs, SimulateArgs, TmMode, VerifyArgs,
};

type Outcome = Result<(), Failure>;

fn policy(order: Order, rng_seed: u64) -> OrderPolicy {
    match order {
        Order::Canonical => OrderPolicy::Canonical,
        Order::Random => OrderPolicy::Random(rng_seed),
    }
}

fn grow(src: &Source, w: &Window, order: OrderPolicy, max_steps: Option<usize>) -> anyhow::Result<RunOutcome> {
    Ok(run(&src.system, w, order, max_steps.unwrap_or(w.area()))?)
}

pub fn simulate(a: SimulateArgs, out: &mut String) -> Outcome {
    let src = source::load(&a.common.source)?;
    let w = source::window(&src, a.common.window);
    let grown = grow(&src, &w, policy(a.order, a.common.rng_seed), a.max_steps)?;
    match a.format {
        Some(f) => out.push_str(&draw(&grown.assembly, &src.system, f, Some(&w))),
        None => {
            let mut cells: Vec<_> = grown.assembly.named(&src.system).collect();
            cells.sort_by_key(|(p, _)| p.row_major());
            for (p, name) in cells {
                let _ = writeln!(out, "{} {} {name}", p.x, p.y);
            }
        }
    }
    eprintln!("{:?} after {} attachments in window {w}", grown.status, grown.steps);
    if let Some(trials) = a.trials {
        let report = probe_directedness(&src.system, &w, trials, a.common.rng_seed).map_err(anyhow::Error::from)?;
        eprintln!("{}", report.summary());
    }
    Ok(())
}

pub fn render(a: RenderArgs, out: &mut String) -> Outcome {
    let src = source::load(&a.common.source)?;
    let w = source::window(&src, a.common.window);
    let grown = grow(&src, &w, policy(a.order, a.common.rng_seed), a.max_steps)?;
    out.push_str(&draw(&grown.assembly, &src.system, a.format, Some(&w)));
    Ok(())
}

pub fn pump(a: PumpArgs, out: &mut String) -> Outcome {
    let src = source::load(&a.common.source)?;
    let w = source::window(&src, a.common.window);
    let grown = grow(&src, &w, OrderPolicy::Canonical, None)?;
    let bundled = src.entry.as_ref().and_then(|e| e.pump.clone());

    let mut paths: Vec<(TilePath, Option<(usize, usize)>)> = Vec::new();
    if let Some(file) = &a.path {
        paths.push((source::path_file(file)?, None));
    } else if a.enumerate {
        for &start in src.system.seed().keys() {
            let found = paths_from_seed(&src.system, &grown.assembly, start, a.max_len, a.max_paths);
            if found.hit_length_cap || found.hit_path_cap {
                eprintln!("enumeration from {start} stopped at a cap; the path list is partial");
            }
            paths.extend(found.paths.into_iter().map(|p| (p, None)));
        }
    } else if let Some(ex) = bundled {
        paths.push((ex.tile_path(), Some((ex.i, ex.j))));
    } else {
        return Err(anyhow!("no bundled path for `{}`; pass --path or --enumerate", src.id).into());
    }

    for (k, (path, default_segment)) in paths.iter().enumerate() {
        path.check_bonds(&src.system).map_err(|e| anyhow!("path {k}: {e}"))?;
        let segments = match (a.i.zip(a.j), default_segment) {
            (Some(seg), _) => vec![seg],
            (None, Some(seg)) => vec![*seg],
            (None, None) => find_repeats(path),
        };
        let _ = writeln!(
            out,
            "path {k}: {} tiles from {} to {}",
            path.len(),
            path.position(0),
            path.position(path.len() - 1)
        );
        for (i, j) in segments {
            let report = pump_check_in(path, i, j, &src.system, &grown.assembly).map_err(anyhow::Error::from)?;
            let _ = writeln!(out, "  {report}");
        }
    }
    Ok(())
}

pub fn decompose(a: DecomposeArgs, out: &mut String) -> Outcome {
    let (black, w, sides) = match (&a.points, &a.source) {
        (Some(file), _) => {
            let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
            let black = parse_points(&text).map_err(|e| anyhow!("{}: {e}", file.display()))?;
            let w = match a.window.or_else(|| Window::bounding(&black)) {
                Some(w) => w,
                None => return Err(anyhow!("empty points file needs --window").into()),
            };
            (black, w, Sides::ALL)
        }
        (None, Some(id)) => {
            let src = source::load(id)?;
            let w = source::window(&src, a.window);
            let grown = grow(&src, &w, OrderPolicy::Canonical, None)?;
            let sides = truncated_sides(&src.system, &grown.assembly, &w);
            (black_set(&src.system, &grown.assembly), w, sides)
        }
        (None, None) => unreachable!("clap requires one of them"),
    };
    let margin = a.margin.unwrap_or_else(|| default_margin(&w));
    let Some(inner) = w.shrink(margin, sides) else {
        return Err(anyhow!("margin {margin} leaves nothing of window {w}").into());
    };
    match cover(&black, &w, margin, sides, a.max_components) {
        Ok(u) => {
            match a.format {
                Some(Format::Points) => out.push_str(&points(&union_enumerate(&u, &inner))),
                Some(_) => return Err(anyhow!("decompose prints unions or points only").into()),
                None => {
                    let _ = writeln!(out, "inner window: {inner}");
                    let _ = writeln!(out, "components: {}", u.len());
                    out.push_str(&u.to_string());
                }
            }
            Ok(())
        }
        Err(fail) => {
            let _ = writeln!(out, "inner window: {inner}");
            let _ = writeln!(out, "no decomposition: {fail}");
            out.push_str(&fail.partial.to_string());
            Err(Failure::Mismatch)
        }
    }
}

pub fn verify(a: VerifyArgs, out: &mut String) -> Outcome {
    let src = source::load(&a.common.source)?;
    let check = TheoremCheck {
        window: source::window(&src, a.common.window),
        margin: a.margin,
        trials: a.trials,
        rng_seed: a.common.rng_seed,
        max_components: a.max_components,
    };
    let report = verify_main_theorem(&src.id, &src.system, &check).map_err(anyhow::Error::from)?;
    let _ = writeln!(out, "{report}");
    if report.matched && report.directedness.consistent {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

fn parse_range(text: &str) -> anyhow::Result<std::ops::Range<u64>> {
    let (a, b) = text
        .split_once("..")
        .ok_or_else(|| anyhow!("range `{text}` is not of the form a..b"))?;
    let a: u64 = a.trim().parse().with_context(|| format!("range start `{a}`"))?;
    let b: u64 = b.trim().parse().with_context(|| format!("range end `{b}`"))?;
    if a >= b {
        bail!("range `{text}` is empty");
    }
    Ok(a..b)
}

struct Instance {
    label: String,
    input: Vec<String>,
    mode: Mode,
}

/// Window holding the whole computation when the interpreter halts within
/// `max_steps`, with two spare columns on each side.
fn tm_window(m: &TmSpec, inst: &Instance, origin: i64, max_steps: usize) -> Window {
    let run = tm_oracle(m, &inst.input, max_steps).expect("input checked at compile time");
    let (lo, hi) = match (run.config.tape.keys().next(), run.config.tape.keys().next_back()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ => (0, 0),
    };
    let height = if run.halted { run.steps as i64 + 1 } else { 64 };
    Window::new(origin + lo - 3, origin + hi + 3, 0, height).expect("ordered bounds")
}

fn instance_window(a: &CompileArgs, m: &TmSpec, inst: &Instance, c: &CompiledSystem) -> Window {
    a.window
        .unwrap_or_else(|| tm_window(m, inst, c.layout.origin, a.max_steps))
}

pub fn compile_tm(a: CompileArgs, out: &mut String) -> Outcome {
    let m = source::machine(&a.machine)?;
    let mode_for = |n: u64| match a.mode {
        TmMode::FunctionBits => Mode::FunctionBits,
        TmMode::SetProjection => Mode::SetProjection { x: n as i64 },
    };
    let instances: Vec<Instance> = match (&a.input, a.n, &a.range) {
        (Some(text), _, _) => {
            if a.mode == TmMode::SetProjection {
                return Err(anyhow!("set-projection instances are numbered; use --n or --range").into());
            }
            vec![Instance {
                label: text.clone(),
                input: split_input(text),
                mode: Mode::FunctionBits,
            }]
        }
        (None, Some(n), _) => vec![Instance {
            label: n.to_string(),
            input: binary_input(n, a.bits),
            mode: mode_for(n),
        }],
        (None, None, Some(range)) => parse_range(range)?
            .map(|n| Instance {
                label: n.to_string(),
                input: binary_input(n, a.bits),
                mode: mode_for(n),
            })
            .collect(),
        (None, None, None) => return Err(anyhow!("give --input, --n or --range").into()),
    };
    if instances.len() > 1 && a.format.is_some() {
        return Err(anyhow!("--format renders a single instance").into());
    }

    let lines: Vec<Result<(String, bool), anyhow::Error>> = instances
        .par_iter()
        .map(|inst| {
            let c = compile(&m, &inst.input, inst.mode).with_context(|| format!("instance {}", inst.label))?;
            let w = instance_window(&a, &m, inst, &c);
            if a.validate {
                let report = validate_compilation(&c, &m, &inst.input, &w, a.trials, a.rng_seed)?;
                let ok = report.status == ValidationStatus::Match;
                return Ok((format!("{}: {report}\n", inst.label), ok));
            }
            if let Some(f) = a.format {
                let grown = run(&c.tas, &w, OrderPolicy::Canonical, w.area())?;
                return Ok((draw(&grown.assembly, &c.tas, f, Some(&w)), true));
            }
            if instances.len() == 1 {
                return Ok((serialize_tas(&c.tas), true));
            }
            let grown = run(&c.tas, &w, OrderPolicy::Canonical, w.area())?;
            let shown = match c.result_black_set(&grown.assembly) {
                Some(set) => set.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" "),
                None => "no result row in window".to_string(),
            };
            Ok((format!("{}: {{{shown}}}\n", inst.label), true))
        })
        .collect();

    let mut all_ok = true;
    for line in lines {
        let (text, ok) = line?;
        out.push_str(&text);
        all_ok &= ok;
    }
    if all_ok {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

pub fn catalog(a: CatalogArgs, out: &mut String) -> Outcome {
    match a.id {
        None => {
            for id in IDS {
                let e = lookup(id).expect("listed id");
                let _ = writeln!(out, "{id:<20} {}", e.description);
            }
        }
        Some(id) => {
            let e = lookup(&id).map_err(anyhow::Error::from)?;
            out.push_str(e.document);
        }
    }
    Ok(())
}
