#![no_main]

use libfuzzer_sys::fuzz_target;
use ltlfmt::bench::TransitionSystem;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(ts) = TransitionSystem::parse(text) {
            ts.compile().expect("a validated system compiles");
        }
    }
});
