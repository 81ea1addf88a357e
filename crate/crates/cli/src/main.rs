fn main() {
    let code = ibg_cli::run_from_args(std::env::args_os(), &mut std::io::stderr());
    std::process::exit(code);
}
