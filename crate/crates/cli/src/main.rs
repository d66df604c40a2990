use clap::Parser;

fn main() {
    let cli = dicke_cli::Cli::parse();
    std::process::exit(dicke_cli::run(&cli));
}
