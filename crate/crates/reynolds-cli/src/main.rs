fn main() {
    // Die quietly when stdout closes early (e.g. piping into `head`),
    // matching ordinary tool behavior instead of panicking on EPIPE.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(reynolds_cli::run());
}
