fn main() {
    std::process::exit(aloha_harness::main_with_args(std::env::args_os()));
}
