use std::io::Write;

fn main() {
    let (code, out) = rpq::cli::run_args(std::env::args_os());
    // A closed pipe is not an error worth reporting.
    let _ = if code == 2 {
        writeln!(std::io::stderr(), "{out}")
    } else {
        writeln!(std::io::stdout(), "{}", out.trim_end())
    };
    std::process::exit(code);
}
