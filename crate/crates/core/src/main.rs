fn main() {
    let r = gauge_color::cli::run_from_args(std::env::args_os());
    print!("{}", r.stdout);
    eprint!("{}", r.stderr);
    std::process::exit(r.exit_code);
}
