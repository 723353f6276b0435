use clap::Parser;

fn main() {
    let cli = adiaprep::cli::Cli::parse();
    let code = adiaprep::cli::execute(cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
