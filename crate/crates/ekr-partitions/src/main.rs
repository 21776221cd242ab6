fn main() {
    std::process::exit(ekr_partitions::cli::run(std::env::args_os()));
}
