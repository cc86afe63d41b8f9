//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Oracles here are written independently of the library code they
//! check.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use tilework::catalog::{catalog, entries};
use tilework::decompose::{decompose, decompose_truncated, verify_main_theorem, TheoremCheck};
use tilework::document::{parse_tas, serialize_tas};
use tilework::engine::{black_set, probe_directedness, run, truncated_sides, OrderPolicy};
use tilework::model::binding_strength;
use tilework::pump::{find_repeats, pump_check, pump_expand, PumpVerdict, TilePath};
use tilework::sdp::{union_enumerate, SdpSet, SdpUnion};
use tilework::tm::{binary_input, bundled_machine, compile_tm, validate_compilation, Mode, TmSpec, ValidationStatus};
use tilework::{Assembly, Glue, Position, Side, TileAssemblySystem, TileType, Vector, Window};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Option<Duration>, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn grow(sys: &TileAssemblySystem, w: &Window, order: OrderPolicy) -> Assembly {
    run(sys, w, order, w.area()).expect("seed inside window").assembly
}

/// Odd entries of Pascal's triangle by the additive recurrence, laid out
/// with C(x + y, x) at (x, y).
fn pascal_mod2(size: i64) -> BTreeSet<Position> {
    let n = size as usize;
    let mut v = vec![vec![0u8; n]; n];
    for x in 0..n {
        for y in 0..n {
            v[x][y] = if x == 0 || y == 0 { 1 } else { (v[x - 1][y] + v[x][y - 1]) % 2 };
        }
    }
    let mut out = BTreeSet::new();
    for x in 0..n {
        for y in 0..n {
            if v[x][y] == 1 {
                out.insert(Position::new(x as i64, y as i64));
            }
        }
    }
    out
}

fn sierpinski() -> Outcome {
    let sys = catalog("sierpinski2").unwrap().system();
    let w = Window::square(64);
    let out = run(&sys, &w, OrderPolicy::Canonical, 10_000).map_err(|e| e.to_string())?;
    let black = black_set(&sys, &out.assembly);
    let oracle = pascal_mod2(64);
    ensure(black == oracle, || {
        format!("black set differs from oracle in {} positions", black.symmetric_difference(&oracle).count())
    })?;
    let small = black.iter().filter(|p| p.x < 8 && p.y < 8).count();
    ensure(small == 27, || format!("{small} black points on 8x8"))?;
    Ok(format!("{} black points on 64x64 match the oracle, 27 on 8x8", black.len()))
}

fn theorem(id: &str) -> Outcome {
    let e = catalog(id).unwrap();
    let sys = e.system();
    let w = Window::square(128);
    ensure(e.window == w, || format!("catalog window is {}", e.window))?;
    let check = TheoremCheck {
        window: w,
        margin: None,
        trials: 20,
        rng_seed: 1,
        max_components: 8,
    };
    let report = verify_main_theorem(id, &sys, &check).map_err(|e| e.to_string())?;
    ensure(report.directedness.consistent, || "directedness probe failed".into())?;
    let union = report.union.clone()?;
    ensure(report.matched, || format!("{} mismatches", report.mismatches.len()))?;
    ensure(union.len() <= 2, || format!("{} components", union.len()))?;
    // Recheck interior equality from scratch.
    let inner = report.inner_window.ok_or("empty inner window")?;
    let black: BTreeSet<Position> = black_set(&sys, &grow(&sys, &w, OrderPolicy::Canonical))
        .into_iter()
        .filter(|p| inner.contains(*p))
        .collect();
    let brute: BTreeSet<Position> = inner.points().filter(|&p| member_brute(&union, p)).collect();
    ensure(black == brute, || "interior black set differs from the union".into())?;
    Ok(format!(
        "{id}: match with {} component(s) on interior {inner}, margin {}",
        union.len(),
        report.margin
    ))
}

/// Membership by trying every coefficient pair up to the window size, enough
/// for the axis-aligned periods these systems produce.
fn member_brute(u: &SdpUnion, p: Position) -> bool {
    u.components.iter().any(|s| {
        (0..=128i64).any(|n| {
            (0..=128i64).any(|m| s.base.translate(s.period_u.scale(n)).translate(s.period_v.scale(m)) == p)
        })
    })
}

fn sierpinski_does_not_decompose() -> Outcome {
    let sys = catalog("sierpinski2").unwrap().system();
    let w = Window::square(64);
    let grown = grow(&sys, &w, OrderPolicy::Canonical);
    let black = black_set(&sys, &grown);
    let margin = tilework::decompose::default_margin(&w);
    match decompose_truncated(&black, &w, margin, truncated_sides(&sys, &grown, &w), 16) {
        Ok(u) => Err(format!("unexpectedly decomposed into {} components", u.len())),
        Err(fail) => Ok(format!(
            "no union of <= 16 components; {} points uncovered after {} greedy picks",
            fail.uncovered.len(),
            fail.partial.len()
        )),
    }
}

/// First copy (and cell) of `S` that hits the prefix or an earlier copy,
/// found by expanding the point set one copy at a time.
fn brute_pump(p: &TilePath, i: usize, j: usize, max_k: u64) -> Option<(u64, Position)> {
    let d = p.position(j).offset_from(p.position(i));
    for k in 1..=max_k {
        let before = pump_expand(p, i, j, k - 1).unwrap();
        let after = pump_expand(p, i, j, k).unwrap();
        if after.len() == before.len() + (j - i) {
            continue;
        }
        let hit = (i..j)
            .map(|s| p.position(s).translate(d.scale(k as i64)))
            .find(|q| before.contains(q))
            .expect("a lost cell collides with an earlier one");
        return Some((k, hit));
    }
    None
}

fn verdicts_agree(p: &TilePath, i: usize, j: usize) -> Result<(), String> {
    let report = pump_check(p, i, j).map_err(|e| e.to_string())?;
    match report.verdict {
        PumpVerdict::Blocked { first_bad_copy, collision_at } => {
            let brute = brute_pump(p, i, j, 50.max(first_bad_copy));
            ensure(brute == Some((first_bad_copy, collision_at)), || {
                format!("({i},{j}): checker says blocked at {first_bad_copy} {collision_at}, brute force {brute:?}")
            })
        }
        PumpVerdict::Pumpable { checked_bound } => {
            let brute = brute_pump(p, i, j, 50.max(checked_bound + 10));
            ensure(brute.is_none(), || format!("({i},{j}): checker says pumpable, brute force {brute:?}"))
        }
    }
}

fn random_path(rng: &mut StdRng, bent: bool) -> TilePath {
    let labels = ["a", "b", "c"];
    loop {
        let len = rng.random_range(3..=20);
        let mut cells = vec![Position::new(0, 0)];
        let mut dir = rng.random_range(0..4usize);
        let mut ok = true;
        while cells.len() < len {
            if bent && rng.random_bool(0.4) {
                dir = rng.random_range(0..4usize);
            }
            let next = cells.last().unwrap().step(Side::ALL[dir]);
            if cells.contains(&next) {
                ok = false;
                break;
            }
            cells.push(next);
        }
        if !ok {
            continue;
        }
        let steps = cells
            .into_iter()
            .map(|c| (c, labels[rng.random_range(0..labels.len())].to_string()))
            .collect();
        let path = TilePath::new(steps).unwrap();
        if !find_repeats(&path).is_empty() {
            return path;
        }
    }
}

fn pump_exactness() -> Outcome {
    let e = catalog("blocked-pump").unwrap();
    let ex = e.pump.clone().unwrap();
    let path = ex.tile_path();
    let report = pump_check(&path, ex.i, ex.j).map_err(|e| e.to_string())?;
    let (k, q) = ex.blocked.unwrap();
    ensure(
        report.verdict == PumpVerdict::Blocked { first_bad_copy: k, collision_at: Position::new(q.0, q.1) },
        || format!("catalog path verdict {:?}", report.verdict),
    )?;
    verdicts_agree(&path, ex.i, ex.j)?;
    let expanded = pump_expand(&path, ex.i, ex.j, 1).unwrap();
    ensure(expanded.len() < ex.j + (ex.j - ex.i), || "first copy does not lose a cell".into())?;

    let mut rng = StdRng::seed_from_u64(0x5eed);
    let (mut segments, mut blocked) = (0, 0);
    for n in 0..100 {
        let path = random_path(&mut rng, n % 2 == 1);
        for (i, j) in find_repeats(&path) {
            if path.position(i) == path.position(j) {
                continue;
            }
            verdicts_agree(&path, i, j)?;
            segments += 1;
            if matches!(pump_check(&path, i, j).unwrap().verdict, PumpVerdict::Blocked { .. }) {
                blocked += 1;
            }
        }
    }
    Ok(format!(
        "catalog path blocked at copy {k} cell ({}, {}); 100 fuzzed paths, {segments} segments ({blocked} blocked) agree with brute force",
        q.0, q.1
    ))
}

fn placement_text(sys: &TileAssemblySystem, a: &Assembly) -> String {
    let mut s = String::new();
    for (p, name) in a.named(sys) {
        s.push_str(&format!("{} {} {name}\n", p.x, p.y));
    }
    s
}

fn directedness() -> Outcome {
    let mut checked = Vec::new();
    for e in entries().into_iter().filter(|e| e.expected.directed) {
        let sys = e.system();
        let reference = placement_text(&sys, &grow(&sys, &e.window, OrderPolicy::Canonical));
        for trial in 0..100u64 {
            let other = placement_text(&sys, &grow(&sys, &e.window, OrderPolicy::Random(trial * 7919 + 1)));
            ensure(other == reference, || format!("{}: random order {trial} differs", e.id))?;
        }
        checked.push(e.id);
    }
    let race = catalog("race").unwrap();
    let report = probe_directedness(&race.system(), &race.window, 100, 3).map_err(|e| e.to_string())?;
    let witness = report.witness.ok_or("race reported consistent")?;
    ensure(witness.position == Position::new(1, 0), || format!("witness at {}", witness.position))?;
    let sys = race.system();
    let (a, b) = (witness.first.get(witness.position), witness.second.get(witness.position));
    ensure(a.is_some() && b.is_some() && a != b, || "witness assemblies do not differ there".into())?;
    Ok(format!(
        "{} identical over 100 random orders each; race differs at {} ({} vs {})",
        checked.join(", "),
        witness.position,
        sys.tile(a.unwrap()).name,
        sys.tile(b.unwrap()).name
    ))
}

fn increment_compilation() -> Outcome {
    let m = TmSpec::parse(bundled_machine("increment").unwrap()).map_err(|e| e.to_string())?;
    let w = Window::new(-4, 9, 0, 8).unwrap();
    let mut attachments = 0;
    for n in 0..16u64 {
        let input = binary_input(n, 4);
        let c = compile_tm(&m, &input, Mode::FunctionBits).map_err(|e| e.to_string())?;
        ensure(c.tas.temperature() == 2, || "not temperature 2".into())?;
        let r = validate_compilation(&c, &m, &input, &w, 20, n).map_err(|e| e.to_string())?;
        let bits: BTreeSet<Position> = (0..8).filter(|k| (n + 1) >> k & 1 == 1).map(|k| Position::new(k, 0)).collect();
        ensure(r.observed.as_ref() == Some(&bits), || format!("n={n}: observed {:?}, want {bits:?}", r.observed))?;
        ensure(r.status == ValidationStatus::Match, || format!("n={n}: {r}"))?;
        ensure(r.audit.ok() && r.audit.runtime_violations.is_empty(), || format!("n={n}: audit {:?}", r.audit))?;
        ensure(r.audit.cooperative > 0, || format!("n={n}: no cooperative attachment"))?;
        attachments += r.audit.attachments;
    }
    Ok(format!(
        "16/16 result rows equal the bits of n+1; {attachments} attachments audited, none by a single strength-1 bond"
    ))
}

fn negative_glue() -> Outcome {
    let e = catalog("negative-glue-demo").unwrap();
    let sys = e.system();
    let target = Position::new(1, 1);
    for trial in 0..100u64 {
        let a = grow(&sys, &e.window, OrderPolicy::Random(trial + 1000));
        ensure(a.get(target).is_none(), || format!("order {trial} filled {target}"))?;
        ensure(a.get(Position::new(1, 0)).is_some(), || format!("order {trial} never placed the support tile"))?;
        let t = sys.tile(sys.tile_id("t").unwrap());
        let strength = binding_strength(&sys, &a, target, t).map_err(|e| e.to_string())?;
        ensure(strength == 1, || format!("net strength at the target is {strength}"))?;
    }
    let relaxed = sys
        .map_tiles(|t| {
            let mut t = t.clone();
            for side in Side::ALL {
                if t.glue(side).strength() < 0 {
                    *t.glue_mut(side) = Glue::null();
                }
            }
            t
        })
        .map_err(|e| e.to_string())?;
    for trial in 0..100u64 {
        let a = grow(&relaxed, &e.window, OrderPolicy::Random(trial + 5000));
        ensure(a.get(target) == relaxed.tile_id("t"), || format!("variant order {trial} left {target} empty"))?;
    }
    Ok(format!("{target} empty in 100 orders (net strength 2 - 1 = 1 < 2); filled in 100 orders without the -1 glue"))
}

fn random_system(rng: &mut StdRng) -> TileAssemblySystem {
    let label_chars: Vec<char> = "ab|:\"\\ -xy1".chars().collect();
    let label = |rng: &mut StdRng| -> String {
        (0..rng.random_range(1..5)).map(|_| label_chars[rng.random_range(0..label_chars.len())]).collect()
    };
    let count = rng.random_range(1..7);
    let mut names = BTreeSet::new();
    while names.len() < count {
        names.insert(format!("t{}{}", rng.random_range(0..50), ["", "-x", "'", "|q"][rng.random_range(0..4)]));
    }
    let tiles: Vec<TileType> = names
        .iter()
        .map(|name| {
            let mut t = TileType::new(name.clone()).with_black(rng.random_bool(0.5));
            for side in Side::ALL {
                if rng.random_bool(0.6) {
                    let l = label(rng);
                    t = t.with_glue(side, Glue::new(l, rng.random_range(-2..=3)).unwrap());
                }
            }
            t
        })
        .collect();
    let names: Vec<&String> = names.iter().collect();
    let seed: BTreeMap<Position, String> = (0..rng.random_range(1..5))
        .map(|_| {
            (
                Position::new(rng.random_range(-6..6), rng.random_range(-6..6)),
                names[rng.random_range(0..names.len())].clone(),
            )
        })
        .collect();
    TileAssemblySystem::new(tiles, seed, rng.random_range(1..4)).unwrap()
}

fn random_union(rng: &mut StdRng, w: &Window) -> SdpUnion {
    let small = |rng: &mut StdRng| loop {
        let v = Vector::new(rng.random_range(-4..=4), rng.random_range(-4..=4));
        if !v.is_zero() {
            return v;
        }
    };
    let count = rng.random_range(1..=3);
    let components = (0..count)
        .map(|_| {
            let base = Position::new(rng.random_range(w.x_min..=w.x_max), rng.random_range(w.y_min..=w.y_max));
            match rng.random_range(0..4) {
                0 => SdpSet::point(base),
                1 => SdpSet::new(base, small(rng), Vector::ZERO),
                _ => loop {
                    let (u, v) = (small(rng), small(rng));
                    if u.cross(v) != 0 {
                        break SdpSet::new(base, u, v);
                    }
                },
            }
        })
        .collect();
    SdpUnion::new(components)
}

fn round_trips() -> Outcome {
    for e in entries() {
        let sys = parse_tas(e.document).map_err(|err| format!("{}: {err}", e.id))?;
        let text = serialize_tas(&sys);
        ensure(text == e.document, || format!("{}: serialization differs from the bundled text", e.id))?;
        ensure(parse_tas(&text).as_ref() == Ok(&sys), || format!("{}: reparse differs", e.id))?;
    }
    let mut rng = StdRng::seed_from_u64(42);
    for n in 0..500 {
        let sys = random_system(&mut rng);
        let text = serialize_tas(&sys);
        let back = parse_tas(&text).map_err(|e| format!("generated system {n}: {e}\n{text}"))?;
        ensure(back == sys, || format!("generated system {n} changed"))?;
        ensure(serialize_tas(&back) == text, || format!("generated system {n}: text changed"))?;
    }
    let w = Window::new(0, 23, 0, 23).unwrap();
    let mut components = 0;
    for n in 0..200 {
        let u = random_union(&mut rng, &w);
        let black = union_enumerate(&u, &w);
        let found = decompose(&black, &w, 0, 12).map_err(|e| format!("union {n} ({u:?}): {e}"))?;
        ensure(union_enumerate(&found, &w) == black, || format!("union {n}: enumeration differs"))?;
        components += found.len();
    }
    Ok(format!(
        "{} catalog entries and 500 generated systems round-trip; 200 fuzzed unions re-enumerate exactly ({components} components found)",
        entries().len()
    ))
}

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("1 sierpinski weak self-assembly", Some(Duration::from_secs(5)), sierpinski),
        ("2a theorem check on filler", Some(Duration::from_secs(30)), || theorem("filler")),
        ("2b theorem check on stripes", Some(Duration::from_secs(30)), || theorem("stripes")),
        ("3 sierpinski has no small decomposition", Some(Duration::from_secs(60)), sierpinski_does_not_decompose),
        ("4 pump exactness", None, pump_exactness),
        ("5 directedness probing", None, directedness),
        ("6 increment compilation", Some(Duration::from_secs(60)), increment_compilation),
        ("7 negative glue veto", None, negative_glue),
        ("8 round trips", None, round_trips),
    ];
    let mut failed = 0;
    for (name, limit, check) in criteria {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let result = match (result, limit) {
            (Ok(_), Some(limit)) if took > limit => Err(format!("took {took:.2?}, limit {limit:?}")),
            (r, _) => r,
        };
        match result {
            Ok(detail) => println!("PASS criterion {name} ({took:.2?}): {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name} ({took:.2?}): {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
