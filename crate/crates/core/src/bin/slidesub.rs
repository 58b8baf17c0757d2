fn main() {
    std::process::exit(slidesub::bench::cli::main());
}
