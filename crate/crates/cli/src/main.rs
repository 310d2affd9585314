fn main() {
    let code = biharm_cli::run(
        std::env::args_os(),
        None,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code);
}
