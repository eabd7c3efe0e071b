use clap::Parser;

fn main() {
    let cli = avcorrupt::cli::Cli::parse();
    std::process::exit(avcorrupt::cli::run(cli));
}
