use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let out = hyperturan_cli::run_command(&args);
    print!("{}", out.stdout());
    let _ = std::io::stdout().flush();
    if let Some(e) = &out.error {
        eprintln!("{e}");
    }
    ExitCode::from(out.exit as u8)
}
