use std::io;

fn main() {
    affvir::par::init_thread_pool();
    let code = affvir::cli::main_with(std::env::args_os(), &mut io::stdout().lock(), &mut io::stderr().lock());
    std::process::exit(code);
}
