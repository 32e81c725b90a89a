use std::io::Read;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let stdin = if args.iter().any(|a| a == "-") {
        let mut buf = String::new();
        if std::io::stdin().read_to_string(&mut buf).is_err() {
            eprintln!("cannot read standard input");
            std::process::exit(lmv::cli::EXIT_USAGE);
        }
        buf
    } else {
        String::new()
    };
    let mut out = String::new();
    let mut err = String::new();
    let code = lmv::cli::run(&args, &stdin, &mut out, &mut err);
    print!("{}", out);
    eprint!("{}", err);
    std::process::exit(code);
}
