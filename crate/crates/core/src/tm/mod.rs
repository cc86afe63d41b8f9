//! Turing machines compiled into temperature 2 tile systems.

pub mod compile;
pub mod machine;
pub mod oracle;
pub mod validate;

pub use compile::{compile_tm, expected_black_set, CompileError, CompiledSystem, Layout, Mode, Role, RowConfig};
pub use machine::{binary_input, split_input, Move, TmError, TmSpec, Transition, BLANK};
pub use oracle::{tm_oracle, tm_trace, Config, OracleRun};
pub use validate::{audit_cooperation, validate_compilation, CooperationAudit, ValidationReport, ValidationStatus};

/// Machines shipped with the library, by name.
pub fn bundled_machine(name: &str) -> Option<&'static str> {
    Some(match name {
        "increment" => include_str!("../../machines/increment.tm"),
        "identity" => include_str!("../../machines/identity.tm"),
        "zero" => include_str!("../../machines/zero.tm"),
        "loop" => include_str!("../../machines/loop.tm"),
        "rewind" => include_str!("../../machines/rewind.tm"),
        "odd-ones" => include_str!("../../machines/odd-ones.tm"),
        _ => return None,
    })
}

pub const BUNDLED_MACHINES: [&str; 6] = ["increment", "identity", "zero", "loop", "rewind", "odd-ones"];
