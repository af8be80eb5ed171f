use clap::Parser;

fn main() {
    // honor RAMANITON_THREADS before any parallel work spins up the pool
    let _ = ramaniton::parallel::configure_threads_from_env();
    let cli = ramaniton_cli::Cli::parse();
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = ramaniton_cli::execute(cli, &mut stdout) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
