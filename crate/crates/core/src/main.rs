fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("UNITRACE_LOG", "warn")).init();
    std::process::exit(unitrace::cli::run_from(std::env::args_os()));
}
