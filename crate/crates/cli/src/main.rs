fn main() {
    std::process::exit(fueter_cli::app::run(std::env::args_os()));
}
