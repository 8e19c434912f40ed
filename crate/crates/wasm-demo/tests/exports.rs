//! The exported bindings run unmodified on the host target, which is what
//! lets the demo's logic be tested without a wasm toolchain. Only the happy
//! path can run here: materializing a `JsError` needs a JS host, so the
//! error mapping is covered by the unit tests on the inner functions.

use holetrack_wasm_demo::{report_svg, simulate_network, track_network};

#[test]
fn exports_chain_together() {
    let config = r#"{ "n": 10, "radius": 0.25, "motion_scale": 0.02, "steps": 3, "seed": 4 }"#;
    let frames = simulate_network(config).ok().unwrap();
    let report = track_network(&frames, true).ok().unwrap();
    let svg = report_svg(&report).ok().unwrap();
    assert!(svg.contains("</svg>"));
}
