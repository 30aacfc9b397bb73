#![no_main]
use dfstab_core::parse::parse_operator;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(op) = parse_operator(data) {
        let printed = op.to_string();
        assert_eq!(parse_operator(&printed).as_ref(), Ok(&op), "{printed}");
    }
});
