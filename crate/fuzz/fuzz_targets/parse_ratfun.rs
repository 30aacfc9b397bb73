#![no_main]
use dfstab_core::parse::parse_ratfun;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(f) = parse_ratfun(data) {
        let printed = f.to_string();
        assert_eq!(parse_ratfun(&printed).as_ref(), Ok(&f), "{printed}");
    }
});
