fn main() {
    std::process::exit(newton_strata_cli::run());
}
