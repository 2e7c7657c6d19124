use std::path::PathBuf;
use std::process::ExitCode;

fn main() -> ExitCode {
    let env_config = std::env::var_os(a2ops::cli::CONFIG_ENV).map(PathBuf::from);
    let code =
        a2ops::cli::run(std::env::args_os(), env_config.as_deref(), &mut std::io::stdout(), &mut std::io::stderr());
    ExitCode::from(code as u8)
}
