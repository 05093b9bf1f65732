fn main() {
    std::process::exit(klocal::commands::run_from(std::env::args_os()));
}
