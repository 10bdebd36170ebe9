use std::io::Write;

fn main() {
    let out = fairsack::run_args(std::env::args_os(), &mut std::io::stdin().lock());
    // Broken pipes on either stream should not turn into a panic.
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    std::process::exit(out.code);
}
