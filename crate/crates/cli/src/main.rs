use std::io;

fn main() {
    octi_cli::init_threads();
    let argv: Vec<String> = std::env::args().collect();
    let code = octi_cli::run(&argv, &mut io::stdout().lock(), &mut io::stderr().lock());
    std::process::exit(code);
}
