use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (out, code) = dfstab_cli::run(std::env::args_os());
    let text = if out.ends_with('\n') { out } else { out + "\n" };
    let written = if code == dfstab_cli::EXIT_OK {
        std::io::stdout().lock().write_all(text.as_bytes())
    } else {
        std::io::stderr().lock().write_all(text.as_bytes())
    };
    if written.is_err() {
        return ExitCode::from(1);
    }
    ExitCode::from(code as u8)
}
