fn main() {
    std::process::exit(cat0knot::cli::main());
}
