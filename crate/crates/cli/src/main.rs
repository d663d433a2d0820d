fn main() { std::process::exit(ancomb_cli::run(&std::env::args().collect::<Vec<_>>())) }
