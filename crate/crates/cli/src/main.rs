fn main() {
    std::process::exit(qortho_cli::dispatch(std::env::args_os()));
}
