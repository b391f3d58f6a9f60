#![no_main]

use libfuzzer_sys::fuzz_target;
use ltlfmt::semantics::{trace_from_json, trace_to_json};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(trace) = trace_from_json(text) {
        assert_eq!(trace_from_json(&trace_to_json(&trace)), Ok(trace));
    }
});
