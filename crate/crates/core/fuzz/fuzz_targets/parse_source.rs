#![no_main]

use libfuzzer_sys::fuzz_target;
use ltlfmt::parser::{parse, parse_source, print_source};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = parse_source(text);
    if let Ok((sig, phi)) = parse(text) {
        let printed = print_source(&sig, &phi);
        assert_eq!(parse(&printed).as_ref(), Ok(&(sig, phi)), "{printed}");
    }
});
