use clap::Parser;

fn main() {
    let cli = gptmap::cli::Cli::parse();
    std::process::exit(gptmap::cli::run(cli));
}
