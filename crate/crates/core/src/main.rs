fn main() {
    std::process::exit(frame_qfi::cli::main_with_args(std::env::args_os()));
}
