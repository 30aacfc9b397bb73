#![no_main]
use dfstab_core::parse::{fmt_d_poly, parse_d_poly};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(p) = parse_d_poly(data) {
        let printed = fmt_d_poly(&p);
        assert_eq!(parse_d_poly(&printed).as_ref(), Ok(&p), "{printed}");
    }
});
