#![no_main]

use libfuzzer_sys::fuzz_target;

// One argument per line; parsing and validation only, nothing is run.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let args = std::iter::once("kpchannel").chain(text.lines());
    if let Ok(cfg) = kpchannel_cli::parse_args(args) {
        let _ = cfg.validate();
    }
});
