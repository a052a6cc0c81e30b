use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let mut stdout = std::io::stdout().lock();
    let mut stderr = std::io::stderr().lock();
    if let Err(e) = graphon_cpd::configure_threads_from_env() {
        let _ = writeln!(stderr, "graphon-cpd: {e}");
        return ExitCode::from(e.exit_code() as u8);
    }
    let code = graphon_cpd::app::run(std::env::args_os(), &mut stdout, &mut stderr);
    let _ = stdout.flush();
    ExitCode::from(code as u8)
}
