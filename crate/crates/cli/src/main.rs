use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod source;

/// Simulate and analyse seeded tile assembly systems.
#[derive(Debug, Parser)]
#[command(name = "tilework", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Grow a system and print its placements (`x y tile`, bottom row first).
    Simulate(SimulateArgs),
    /// Check whether path segments between repeated tile types can be pumped.
    Pump(PumpArgs),
    /// Cover a black set by semi-doubly periodic sets.
    Decompose(DecomposeArgs),
    /// Check that a directed temperature 1 system's black set is a finite
    /// union of semi-doubly periodic sets on the window interior.
    VerifyTheorem(VerifyArgs),
    /// Compile a Turing machine and input into a temperature 2 system.
    CompileTm(CompileArgs),
    /// Grow a system and draw it.
    Render(RenderArgs),
    /// List the bundled examples, or print one as a document.
    Catalog(CatalogArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Order {
    Canonical,
    Random,
}

#[derive(Debug, Args)]
struct Common {
    /// Catalog id or path to a tile system document.
    source: String,
    /// Simulation window `x0,x1,y0,y1` (inclusive).
    #[arg(long, value_name = "x0,x1,y0,y1")]
    window: Option<tilework::Window>,
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum, default_value_t = Order::Canonical)]
    order: Order,
    /// Attachment budget; defaults to the window area.
    #[arg(long)]
    max_steps: Option<usize>,
    /// Also probe directedness with this many random orders.
    #[arg(long)]
    trials: Option<usize>,
    /// Print a rendering instead of the placement list.
    #[arg(long)]
    format: Option<tilework::render::Format>,
}

#[derive(Debug, Args)]
struct RenderArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum, default_value_t = Order::Canonical)]
    order: Order,
    #[arg(long)]
    max_steps: Option<usize>,
    #[arg(long, default_value = "ascii")]
    format: tilework::render::Format,
}

#[derive(Debug, Args)]
struct PumpArgs {
    #[command(flatten)]
    common: Common,
    /// Path file with one `x y tile` line per step; defaults to the catalog
    /// entry's bundled path.
    #[arg(long)]
    path: Option<std::path::PathBuf>,
    /// Enumerate maximal paths from each seed tile and check every repeat.
    #[arg(long)]
    enumerate: bool,
    /// Longest path (edges) to enumerate.
    #[arg(long, default_value_t = 64)]
    max_len: usize,
    /// Most paths to enumerate per seed tile.
    #[arg(long, default_value_t = 1000)]
    max_paths: usize,
    /// Check only this segment.
    #[arg(long, requires = "j")]
    i: Option<usize>,
    #[arg(long, requires = "i")]
    j: Option<usize>,
}

#[derive(Debug, Args)]
struct DecomposeArgs {
    /// Catalog id or document to simulate; omit when using --points.
    #[arg(required_unless_present = "points")]
    source: Option<String>,
    /// Read the black set from a points file instead of simulating.
    #[arg(long, conflicts_with = "source")]
    points: Option<std::path::PathBuf>,
    #[arg(long, value_name = "x0,x1,y0,y1")]
    window: Option<tilework::Window>,
    /// Interior margin, applied on the sides where growth was cut off (every
    /// side for --points); defaults to a third of the shorter window side.
    #[arg(long)]
    margin: Option<i64>,
    #[arg(long, default_value_t = 8)]
    max_components: usize,
    /// Print the covered points of the interior window instead of the union.
    #[arg(long)]
    format: Option<tilework::render::Format>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    margin: Option<i64>,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 8)]
    max_components: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TmMode {
    FunctionBits,
    SetProjection,
}

#[derive(Debug, Args)]
struct CompileArgs {
    /// Bundled machine name or path to a machine file.
    machine: String,
    /// Input symbols: one per character, or comma separated.
    #[arg(long, conflicts_with_all = ["n", "range"])]
    input: Option<String>,
    /// Use `n` in binary, least significant bit first.
    #[arg(long, conflicts_with = "range")]
    n: Option<u64>,
    /// Compile every n in `a..b`.
    #[arg(long, value_name = "a..b")]
    range: Option<String>,
    /// Minimum number of bits for --n and --range inputs.
    #[arg(long, default_value_t = 0)]
    bits: usize,
    #[arg(long, value_enum, default_value_t = TmMode::FunctionBits)]
    mode: TmMode,
    /// Run the compiled system and compare it with the interpreter.
    #[arg(long)]
    validate: bool,
    #[arg(long, value_name = "x0,x1,y0,y1")]
    window: Option<tilework::Window>,
    /// Random orders for the directedness probe during validation.
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    /// Interpreter step limit used to size the default window.
    #[arg(long, default_value_t = 10_000)]
    max_steps: usize,
    /// Render the grown assembly instead of printing the tile system.
    #[arg(long)]
    format: Option<tilework::render::Format>,
}

#[derive(Debug, Args)]
struct CatalogArgs {
    id: Option<String>,
}

/// Failure classes mapped to exit codes.
pub enum Failure {
    /// A checked property does not hold (exit 1).
    Mismatch,
    /// Bad arguments or unreadable input (exit 2).
    Usage(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let result = match cli.command {
        Command::Simulate(a) => commands::simulate(a, &mut out),
        Command::Render(a) => commands::render(a, &mut out),
        Command::Pump(a) => commands::pump(a, &mut out),
        Command::Decompose(a) => commands::decompose(a, &mut out),
        Command::VerifyTheorem(a) => commands::verify(a, &mut out),
        Command::CompileTm(a) => commands::compile_tm(a, &mut out),
        Command::Catalog(a) => commands::catalog(a, &mut out),
    };
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
