#![no_main]

use libfuzzer_sys::fuzz_target;
use ltlfmt::encoder::SteppedSymbol;

fuzz_target!(|data: &[u8]| {
    if let Ok(name) = std::str::from_utf8(data) {
        if let Some(s) = SteppedSymbol::parse(name) {
            assert_eq!(SteppedSymbol::parse(&s.to_string()), Some(s));
        }
    }
});
