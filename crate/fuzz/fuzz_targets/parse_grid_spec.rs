//! Grid specs arrive embedded in body files and CLI flags. Building a grid
//! from hostile parameters must fail cleanly (no panic, no runaway
//! allocation) and deterministic construction must hold for whatever builds.

#![no_main]

use libfuzzer_sys::fuzz_target;
use starbody::bodyspec::GridSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(spec) = serde_json::from_str::<GridSpec>(text) else { return };
    for dim in [2usize, 3, 5] {
        if let Ok(grid) = spec.build(dim) {
            let again = spec.build(dim).expect("deterministic rebuild");
            assert_eq!(grid.len(), again.len());
            assert_eq!(
                grid.dirs()[grid.len() / 2].coords(),
                again.dirs()[again.len() / 2].coords()
            );
        }
    }
});
