fn main() {
    std::process::exit(bmcert::harness::cli::run(std::env::args_os()));
}
