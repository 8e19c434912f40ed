//! Browser bindings for the hole tracker: simulate a network, track it,
//! render the barcode. The `*_inner` functions carry the logic and run on
//! any target; the `wasm_bindgen` exports wrap them for the demo page.

use wasm_bindgen::prelude::*;

use holetrack::hopsize::annotate_barcode;
use holetrack::io::{
    build_report, digest_hex, emit_report, parse_adjacency_sequence, parse_report,
    write_adjacency_sequence, InputKind, ReportParams,
};
use holetrack::netsim::{simulate_frames, NetworkConfig};
use holetrack::render::render_svg;
use holetrack::sequence::{build_stream, complexes_from_adjacency_sequence};
use holetrack::tracker::run;

const DIMS: [usize; 2] = [0, 1];

fn simulate_inner(config_json: &str) -> Result<String, String> {
    let cfg: NetworkConfig =
        serde_json::from_str(config_json).map_err(|e| format!("bad config: {e}"))?;
    let frames = simulate_frames(&cfg).map_err(|e| e.to_string())?;
    Ok(write_adjacency_sequence(&frames))
}

fn track_inner(frames_json: &str, with_sizes: bool) -> Result<String, String> {
    let frames = parse_adjacency_sequence(frames_json).map_err(|e| e.to_string())?;
    let complexes = complexes_from_adjacency_sequence(&frames).map_err(|e| e.to_string())?;
    let (stream, coarse) = build_stream(&complexes).map_err(|e| e.to_string())?;
    let barcode = run(&stream, &DIMS).map_err(|e| e.to_string())?;
    let profiles = if with_sizes {
        Some(annotate_barcode(&barcode, &coarse).map_err(|e| e.to_string())?)
    } else {
        None
    };
    let report = build_report(&ReportParams {
        barcode: &barcode,
        coarse: Some(&coarse),
        sizes: profiles.as_deref(),
        input_kind: InputKind::Adjacency,
        input_digest: digest_hex(frames_json.as_bytes()),
        seed: None,
        dims: &DIMS,
        collapse_zero_length: false,
    });
    Ok(emit_report(&report))
}

fn svg_inner(report_json: &str) -> Result<String, String> {
    let report = parse_report(report_json).map_err(|e| e.to_string())?;
    Ok(render_svg(&report))
}

/// Runs the seeded network simulation; takes a config JSON, returns the
/// adjacency-sequence JSON.
#[wasm_bindgen]
pub fn simulate_network(config_json: &str) -> Result<String, JsError> {
    simulate_inner(config_json).map_err(|e| JsError::new(&e))
}

/// Tracks an adjacency sequence in dimensions 0 and 1 and returns the run
/// report JSON, with hop-size annotations when `with_sizes` is set.
#[wasm_bindgen]
pub fn track_network(frames_json: &str, with_sizes: bool) -> Result<String, JsError> {
    track_inner(frames_json, with_sizes).map_err(|e| JsError::new(&e))
}

/// Renders a run report as an SVG barcode.
#[wasm_bindgen]
pub fn report_svg(report_json: &str) -> Result<String, JsError> {
    svg_inner(report_json).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const CONFIG: &str = r#"{
        "n": 16,
        "radius": 0.2,
        "motion_scale": 0.05,
        "steps": 4,
        "seed": 9,
        "failure": { "center": [0.5, 0.5], "initial_radius": 0.1, "growth": 0.05 }
    }"#;

    #[test]
    fn pipeline_runs_end_to_end() {
        let frames = simulate_inner(CONFIG).unwrap();
        assert_eq!(parse_adjacency_sequence(&frames).unwrap().len(), 4);

        let report_json = track_inner(&frames, true).unwrap();
        let report = parse_report(&report_json).unwrap();
        assert_eq!(report.dims, vec![0, 1]);
        assert_eq!(report.input_digest, digest_hex(frames.as_bytes()));
        assert!(report.coarse_ranges.is_some());

        let svg = svg_inner(&report_json).unwrap();
        assert!(svg.starts_with("<?xml"));
        assert!(svg.contains("<svg xmlns"));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn same_config_gives_identical_output() {
        let a = simulate_inner(CONFIG).unwrap();
        let b = simulate_inner(CONFIG).unwrap();
        assert_eq!(a, b);
        assert_eq!(track_inner(&a, false).unwrap(), track_inner(&b, false).unwrap());
    }

    #[test]
    fn errors_come_back_as_messages() {
        assert!(simulate_inner("not json").unwrap_err().starts_with("bad config"));
        assert!(track_inner("[]", false).is_err());
        assert!(svg_inner("{}").is_err());
    }
}
