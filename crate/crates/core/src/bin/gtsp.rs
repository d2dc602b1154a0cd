fn main() {
    std::process::exit(gtsp_kernel::cli::main());
}
