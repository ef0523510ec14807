fn main() {
    std::process::exit(subsevo_experiment::cli::cli_main(std::env::args_os()));
}
