fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(dehnfill::harness::cli::cli_main(&argv));
}
