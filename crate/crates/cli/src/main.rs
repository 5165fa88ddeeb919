use clap::error::ErrorKind;
use clap::Parser;
use lyricmood_cli::error::{EXIT_OK, EXIT_USAGE};
use lyricmood_cli::{exit_code, run, Cli};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            std::process::exit(code);
        }
    };
    if let Err(err) = run(cli) {
        // A closed downstream pipe (e.g. `| head`) is not a failure.
        let broken_pipe = err.chain().any(|c| {
            c.downcast_ref::<std::io::Error>()
                .is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
        });
        if broken_pipe {
            std::process::exit(EXIT_OK);
        }
        eprintln!("error: {err:#}");
        std::process::exit(exit_code(&err));
    }
}
