fn main() {
    let stdout = std::io::stdout();
    let code = flatbst_cli::main_with_args(std::env::args_os(), &mut stdout.lock());
    std::process::exit(code);
}
