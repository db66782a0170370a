#![no_main]

use kpchannel::io::{read_results_json, write_results_json, ResultsDocument};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let parsed: kpchannel::Result<ResultsDocument> = read_results_json(text);
    if let Ok(doc) = parsed {
        // anything accepted must serialize again
        let again = write_results_json(&doc).expect("re-serialize");
        let _: ResultsDocument = read_results_json(&again).expect("re-parse");
    }
});
