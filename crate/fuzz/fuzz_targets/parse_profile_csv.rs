//! The CSV profile importer is a hand-rolled line parser; fuzz it directly
//! and re-export whatever parses to confirm the round trip stays stable.

#![no_main]

use libfuzzer_sys::fuzz_target;
use starbody::bodyspec::{body_from_csv, profile_from_csv, profile_to_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok((dim, grid_spec, values)) = profile_from_csv(text) else { return };
    let exported = profile_to_csv(dim, grid_spec, &values);
    let (dim2, spec2, values2) = profile_from_csv(&exported).expect("round trip reparses");
    assert_eq!(dim, dim2);
    assert_eq!(grid_spec, spec2);
    assert_eq!(values, values2);
    let _ = body_from_csv(text);
});
