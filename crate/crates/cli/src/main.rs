use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let out = jbt::main_with(std::env::args_os());
    print!("{}", out.text);
    std::io::stdout().flush().ok();
    if let Some(note) = &out.note {
        eprintln!("{}", note.trim_end());
    }
    ExitCode::from(out.code as u8)
}
