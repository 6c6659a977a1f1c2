use clap::Parser;

fn main() {
    let cli = partiso::cli::Cli::parse();
    std::process::exit(partiso::cli::run(&cli));
}
