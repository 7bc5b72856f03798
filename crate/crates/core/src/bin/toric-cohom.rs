fn main() {
    std::process::exit(toric_cohomology::cli::main_entry());
}
