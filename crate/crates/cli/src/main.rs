use std::io;
use std::process::exit;

fn main() {
    let code = esmine_cli::run(std::env::args_os(), &mut io::stdout().lock(), &mut io::stderr().lock());
    exit(code);
}
