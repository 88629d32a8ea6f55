use env_logger::Env;

fn main() {
    env_logger::Builder::from_env(Env::new().filter_or("CANTOR_FORGE_LOG", "warn")).init();
    let r = cantor_forge::cli::run(std::env::args_os());
    std::process::exit(r.exit_code);
}
