fn main() {
    std::process::exit(robreg::harness::cli(std::env::args_os()));
}
