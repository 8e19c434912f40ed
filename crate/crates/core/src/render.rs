//! Barcode rendering: plain text and SVG.
//!
//! Both renderers are pure functions of the report, with fixed float
//! formatting and no timestamps, so equal reports give equal bytes.

use crate::io::{ReportInterval, RunReport};

/// Sort order shared by both renderers: by birth, then dimension, closed
/// before open, then by death.
fn display_order(report: &RunReport) -> Vec<&ReportInterval> {
    let mut out: Vec<&ReportInterval> = report.intervals.iter().collect();
    out.sort_by_key(|iv| {
        (
            iv.birth,
            iv.dimension,
            iv.death.is_none(),
            iv.death.unwrap_or(usize::MAX),
        )
    });
    out
}

/// One `[b, d) dim=p` line per interval, sorted by birth. Still-open
/// intervals print `∞`. When the report carries size annotations, H_1
/// lines append `size_profile=coarse:size,...` (`-` when the interval was
/// never live at a coarse mark).
#[must_use]
pub fn render_text(report: &RunReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "# {} intervals over {} fine steps; [b, d) spans steps b..d-1 (closed form [b, d-1])\n",
        report.intervals.len(),
        report.events
    ));
    for iv in display_order(report) {
        let death = iv
            .death
            .map_or_else(|| "\u{221e}".to_string(), |d| d.to_string());
        out.push_str(&format!("[{}, {}) dim={}", iv.birth, death, iv.dimension));
        if let Some(sizes) = &iv.sizes {
            if sizes.is_empty() {
                out.push_str(" size_profile=-");
            } else {
                let parts: Vec<String> =
                    sizes.iter().map(|[j, s]| format!("{j}:{s}")).collect();
                out.push_str(&format!(" size_profile={}", parts.join(",")));
            }
        }
        out.push('\n');
    }
    out
}

const BASE_THICKNESS: f64 = 4.0;
const PLOT_WIDTH: f64 = 800.0;
const MARGIN_LEFT: f64 = 50.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 26.0;
const MARGIN_BOTTOM: f64 = 34.0;
const ROW_GAP: f64 = 6.0;

fn color(dimension: usize) -> &'static str {
    match dimension {
        0 => "#5577aa",
        1 => "#cc5544",
        2 => "#559955",
        _ => "#888888",
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.2}")
}

/// A horizontal bar per interval over a fine-step axis with coarse tick
/// marks. With size annotations, bar thickness is piecewise
/// `base * (1 + size)`, one piece per annotated coarse segment.
#[must_use]
pub fn render_svg(report: &RunReport) -> String {
    let last = report.events.max(1) as f64;
    let x = |step: f64| MARGIN_LEFT + (step / last) * PLOT_WIDTH;
    let marks: Vec<usize> = report
        .coarse_ranges
        .as_ref()
        .map_or_else(Vec::new, |rs| rs.iter().map(|r| r[1] - 1).collect());

    let ordered = display_order(report);
    // Row layout: each bar's row is as tall as its thickest piece.
    let mut rows = Vec::with_capacity(ordered.len());
    let mut y = MARGIN_TOP;
    for iv in &ordered {
        let max_size = iv
            .sizes
            .as_ref()
            .and_then(|s| s.iter().map(|[_, v]| *v).max())
            .unwrap_or(0);
        let h = BASE_THICKNESS * (1.0 + max_size as f64);
        rows.push((y + h / 2.0, h));
        y += h + ROW_GAP;
    }
    let height = y + MARGIN_BOTTOM;
    let width = MARGIN_LEFT + PLOT_WIDTH + MARGIN_RIGHT;

    let mut s = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
        fmt(width),
        fmt(height),
        fmt(width),
        fmt(height)
    ));
    s.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>\n",
        fmt(width),
        fmt(height)
    ));

    // Coarse tick marks behind the bars.
    for (j, &m) in marks.iter().enumerate() {
        let xm = x(m as f64);
        s.push_str(&format!(
            "<line class=\"tick\" x1=\"{x}\" y1=\"{}\" x2=\"{x}\" y2=\"{}\" stroke=\"#cccccc\" stroke-dasharray=\"3,3\"/>\n",
            fmt(MARGIN_TOP - 8.0),
            fmt(height - MARGIN_BOTTOM + 8.0),
            x = fmt(xm)
        ));
        s.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"9\" text-anchor=\"middle\" fill=\"#999999\">t{}</text>\n",
            fmt(xm),
            fmt(MARGIN_TOP - 12.0),
            j + 1
        ));
    }

    for (iv, &(mid, _)) in ordered.iter().zip(&rows) {
        let start = iv.birth as f64;
        let end = iv.death.map_or(last, |d| d as f64);
        let segments = thickness_segments(iv, start, end, &marks);
        for (from, to, size) in segments {
            let h = BASE_THICKNESS * (1.0 + size as f64);
            s.push_str(&format!(
                "<rect class=\"bar\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>\n",
                fmt(x(from)),
                fmt(mid - h / 2.0),
                fmt((x(to) - x(from)).max(0.5)),
                fmt(h),
                color(iv.dimension)
            ));
        }
        if iv.death.is_none() {
            // Open end: a small cap past the last step.
            s.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" font-size=\"10\" fill=\"{}\">\u{221e}</text>\n",
                fmt(x(end) + 4.0),
                fmt(mid + 3.0),
                color(iv.dimension)
            ));
        }
    }

    // Axis with a handful of step labels.
    let axis_y = height - MARGIN_BOTTOM + 12.0;
    s.push_str(&format!(
        "<line x1=\"{}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"#333333\"/>\n",
        fmt(MARGIN_LEFT),
        fmt(MARGIN_LEFT + PLOT_WIDTH),
        y = fmt(axis_y)
    ));
    let stride = (report.events / 8).max(1);
    let mut step = 0;
    while step <= report.events {
        s.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"9\" text-anchor=\"middle\" fill=\"#333333\">{step}</text>\n",
            fmt(x(step as f64)),
            fmt(axis_y + 12.0)
        ));
        step += stride;
    }
    s.push_str("</svg>\n");
    s
}

/// Splits a bar into `(from, to, size)` pieces. Unannotated bars are one
/// piece of size 0. Annotated bars hold each measured size from its coarse
/// mark to the next measured mark (the first measurement backfills to the
/// birth).
fn thickness_segments(
    iv: &ReportInterval,
    start: f64,
    end: f64,
    marks: &[usize],
) -> Vec<(f64, f64, usize)> {
    let Some(sizes) = iv.sizes.as_ref().filter(|s| !s.is_empty()) else {
        return vec![(start, end, 0)];
    };
    let mut out = Vec::new();
    let mut from = start;
    for (idx, [_, size]) in sizes.iter().enumerate() {
        let to = if idx + 1 < sizes.len() {
            marks[sizes[idx + 1][0]] as f64
        } else {
            end
        };
        out.push((from, to, *size));
        from = to;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{HistorySegment, InputKind};

    fn interval(
        dimension: usize,
        birth: usize,
        death: Option<usize>,
        sizes: Option<Vec<[usize; 2]>>,
    ) -> ReportInterval {
        ReportInterval {
            dimension,
            birth,
            death,
            history: vec![HistorySegment { step: birth, cycle: vec![] }],
            sizes,
        }
    }

    fn toy_report() -> RunReport {
        RunReport {
            version: "0.1.0".into(),
            input_kind: InputKind::Adjacency,
            input_digest: "00".into(),
            seed: None,
            dims: vec![0, 1],
            collapse_zero_length: false,
            with_sizes: true,
            events: 11,
            coarse_ranges: Some(vec![[1, 9], [9, 12]]),
            intervals: vec![
                interval(1, 8, Some(11), Some(vec![[0, 1]])),
                interval(0, 1, None, None),
                interval(1, 9, Some(10), Some(vec![])),
            ],
        }
    }

    #[test]
    fn text_output_is_sorted_and_annotated() {
        let text = render_text(&toy_report());
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with('#'));
        assert_eq!(lines[1], "[1, \u{221e}) dim=0");
        assert_eq!(lines[2], "[8, 11) dim=1 size_profile=0:1");
        assert_eq!(lines[3], "[9, 10) dim=1 size_profile=-");
        assert_eq!(lines.len(), 4);
    }

    #[test]
    fn text_omits_sizes_when_not_requested() {
        let mut report = toy_report();
        report.with_sizes = false;
        for iv in &mut report.intervals {
            iv.sizes = None;
        }
        let text = render_text(&report);
        assert!(!text.contains("size_profile"));
    }

    #[test]
    fn svg_bars_ticks_and_thickness() {
        let report = toy_report();
        let svg = render_svg(&report);
        assert_eq!(svg.matches("class=\"bar\"").count(), 3);
        assert_eq!(svg.matches("class=\"tick\"").count(), 2);
        // The annotated bar is drawn at base * (1 + 1).
        assert!(svg.contains("height=\"8.00\""));
        // Open interval gets the infinity cap.
        assert!(svg.contains('\u{221e}'));
        assert_eq!(render_svg(&report), svg);
    }

    #[test]
    fn svg_of_empty_barcode_has_axis_only() {
        let report = RunReport { intervals: vec![], ..toy_report() };
        let svg = render_svg(&report);
        assert_eq!(svg.matches("class=\"bar\"").count(), 0);
        assert!(svg.contains("<line"));
        assert!(svg.starts_with("<?xml"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn multi_segment_thickness_profile() {
        let iv = interval(1, 3, Some(20), Some(vec![[0, 1], [1, 2], [2, 4]]));
        let marks = [5usize, 10, 15];
        let segs = thickness_segments(&iv, 3.0, 20.0, &marks);
        assert_eq!(
            segs,
            vec![(3.0, 10.0, 1), (10.0, 15.0, 2), (15.0, 20.0, 4)]
        );
    }
}
