#![no_main]

use libfuzzer_sys::fuzz_target;
use qdbell_cli::{Overrides, RunConfig};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(parsed) = Overrides::parse(text) else {
        return;
    };
    // Canonical text must parse back to the same settings.
    let canonical = parsed.serialize();
    let again = Overrides::parse(&canonical).expect("canonical config parses");
    assert_eq!(again.serialize(), canonical);
    if let Ok(cfg) = RunConfig::resolve(parsed) {
        let back = RunConfig::resolve(Overrides::parse(&cfg.to_string()).expect("resolved config parses"));
        assert_eq!(back.ok(), Some(cfg));
    }
});
