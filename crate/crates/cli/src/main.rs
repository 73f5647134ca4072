fn main() {
    std::process::exit(sstdelay_cli::run());
}
