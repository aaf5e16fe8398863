use std::io::Write;

fn main() {
    let (outcome, stderr) = zerotalk::cli::run_with_args(std::env::args_os());
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(outcome.stdout.as_bytes());
    let _ = out.flush();
    if !stderr.is_empty() {
        eprint!("{stderr}");
    }
    std::process::exit(outcome.exit_code);
}
