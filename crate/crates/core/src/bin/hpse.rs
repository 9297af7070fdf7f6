//! `hpse` — command-line front end; all logic lives in `hpse::cli`.

fn main() {
    let code = hpse::cli::main_with_args(std::env::args_os(), &mut std::io::stdout());
    std::process::exit(code);
}
