use clap::Parser;

fn main() {
    let cli = hypercf::cli::Cli::parse();
    if let Err(err) = hypercf::cli::run(cli) {
        eprintln!("error: {}: {err}", err.category());
        std::process::exit(1);
    }
}
