fn main() {
    std::process::exit(lpa::run());
}
