#![no_main]

use libfuzzer_sys::fuzz_target;
use ltlfmt::smt::{parse_model_value, parse_sexprs, SExprReader};

fuzz_target!(|data: &[u8]| {
    let mut reader = SExprReader::new();
    for chunk in data.chunks(7) {
        reader.feed(chunk);
        while let Ok(Some(_)) = reader.next_expr() {}
    }
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(exprs) = parse_sexprs(text) {
            for e in &exprs {
                let _ = parse_model_value(e);
            }
        }
    }
});
