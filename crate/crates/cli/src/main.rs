use std::process::ExitCode;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("SCHED_LOG")).init();
    fjsched_cli::run(std::env::args_os())
}
