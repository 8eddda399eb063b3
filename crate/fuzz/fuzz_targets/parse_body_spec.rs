//! Body-spec documents are the CLI's untrusted input surface. Parsing must
//! never panic, and a successfully parsed body must evaluate and answer
//! membership queries without panicking.

#![no_main]

use libfuzzer_sys::fuzz_target;
use starbody::bodyspec::parse_body_spec;
use starbody::direction::Direction;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(parsed) = parse_body_spec(text) else { return };
    let Ok(body) = parsed.star_body() else { return };
    let d = body.dim();
    for k in 0..d.min(3) {
        let theta = Direction::axis(d, k);
        let _ = body.eval_radial(&theta);
        let _ = body.membership(&theta.at(0.5));
        let _ = body.membership(&theta.at(2.0));
    }
    let _ = body.truncate(1.0).eval_radial(&Direction::axis(d, 0));
});
