fn main() {
    std::process::exit(csgauge_cli::main_entry());
}
