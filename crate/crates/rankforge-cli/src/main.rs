use clap::Parser;

fn main() {
    let cli = rankforge_cli::Cli::parse();
    match rankforge_cli::run(cli) {
        Ok(out) => println!("{out}"),
        Err(e) => {
            eprintln!("error: {}", e.message());
            std::process::exit(e.exit_code());
        }
    }
}
