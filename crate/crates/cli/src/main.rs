fn main() {
    let code = hml::run(
        std::env::args_os(),
        std::env::var_os("HML_CONFIG"),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code);
}
