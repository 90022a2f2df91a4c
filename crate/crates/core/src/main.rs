use clap::Parser;

fn main() {
    let cli = fibluc::cli::Cli::parse();
    std::process::exit(fibluc::cli::main_with(cli));
}
