#![no_main]
use dfstab_core::parse::parse_poly;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(p) = parse_poly(data) {
        let printed = p.to_string();
        assert_eq!(parse_poly(&printed).as_ref(), Ok(&p), "{printed}");
    }
});
