use std::process::ExitCode;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    ExitCode::from(auditnet::cli::main_entry(&argv).clamp(0, 255) as u8)
}
