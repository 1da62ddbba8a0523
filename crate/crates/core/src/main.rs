use clap::Parser;

fn main() {
    let cli = edsh::cli::Cli::parse();
    std::process::exit(edsh::cli::run(cli));
}
