#![no_main]

use libfuzzer_sys::fuzz_target;
use qdbell_cli::parse_args;

// Arguments are NUL-separated; an optional config text follows a 0xFF byte.
fuzz_target!(|data: &[u8]| {
    let (args, config) = match data.iter().position(|&b| b == 0xff) {
        Some(k) => (&data[..k], std::str::from_utf8(&data[k + 1..]).ok()),
        None => (data, None),
    };
    let Ok(args) = std::str::from_utf8(args) else {
        return;
    };
    let argv = std::iter::once("qdbell").chain(args.split('\0').filter(|a| !a.is_empty()));
    let _ = parse_args(argv, config);
});
