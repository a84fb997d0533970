use std::io::{stderr, stdout};

fn main() {
    let worker = std::thread::Builder::new()
        .stack_size(stlc::STACK_SIZE)
        .spawn(|| {
            rayon::ThreadPoolBuilder::new()
                .stack_size(64 << 20)
                .build_global()
                .ok();
            stlc::run(
                std::env::args_os(),
                &mut stdout().lock(),
                &mut stderr().lock(),
            )
        })
        .expect("failed to start worker thread");
    let code = worker.join().unwrap_or(stlc::cli::EXIT_INVARIANT);
    std::process::exit(code);
}
