fn main() {
    std::process::exit(torsion_cert::cli::run());
}
