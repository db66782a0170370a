#![no_main]

use kpchannel::io;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = io::read_grid_csv(text);
    let _ = io::read_curves_csv(text);
    let _ = io::read_roots_csv(text);
    let _ = io::read_kappa_csv(text);
    let _ = io::read_potential_csv(text);
    if let Ok(bands) = io::read_bands_csv(text) {
        assert!(bands.iter().all(|b| !(b.eta_lo > b.eta_hi)));
    }
});
