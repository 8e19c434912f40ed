//! File formats: the event text format, the adjacency-sequence JSON, and
//! the run report.
//!
//! Event files hold one event per line, `A 0,1` to add and `R 0,1` to
//! remove, with the line number serving as the step. Adjacency sequences
//! and reports are JSON. All writers are pure string builders with stable
//! field order, so identical inputs produce identical bytes.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::hopsize::SizeProfile;
use crate::sequence::{validate_frames, AdjacencyFrame, CoarseSequence};
use crate::simplicial::Simplex;
use crate::tracker::{Event, EventKind, EventStream, TrackedBarcode};
use crate::{Error, Result};

/// Parses the event text format. Steps are line numbers, starting at 1;
/// applicability is the tracker's concern, not the parser's.
pub fn parse_events(text: &str) -> Result<EventStream> {
    let mut events = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |msg: String| Error::Parse { line, msg };
        let mut parts = raw.split_whitespace();
        let kind = match parts.next() {
            Some("A") => EventKind::Add,
            Some("R") => EventKind::Remove,
            Some(other) => return Err(err(format!("unknown event kind {other:?}"))),
            None => return Err(err("empty line".into())),
        };
        let Some(list) = parts.next() else {
            return Err(err("missing vertex list".into()));
        };
        if let Some(extra) = parts.next() {
            return Err(err(format!("unexpected trailing token {extra:?}")));
        }
        let vertices = list
            .split(',')
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| err(format!("bad vertex {tok:?}")))
            })
            .collect::<Result<Vec<usize>>>()?;
        let simplex = Simplex::try_new(vertices).map_err(|e| err(e.to_string()))?;
        events.push(Event { kind, simplex, step: line });
    }
    EventStream::from_events(events)
}

/// Inverse of [`parse_events`] for streams with contiguous steps 1..=n
/// (what every builder in this crate produces). Steps are implied by line
/// position.
#[must_use]
pub fn format_events(stream: &EventStream) -> String {
    let mut out = String::new();
    for e in stream.events() {
        let kind = match e.kind {
            EventKind::Add => 'A',
            EventKind::Remove => 'R',
        };
        let verts: Vec<String> = e.simplex.vertices().iter().map(usize::to_string).collect();
        out.push(kind);
        out.push(' ');
        out.push_str(&verts.join(","));
        out.push('\n');
    }
    out
}

/// Parses and validates an adjacency-sequence JSON file: a top-level list
/// of frames, each `{n, present, rows}`.
pub fn parse_adjacency_sequence(text: &str) -> Result<Vec<AdjacencyFrame>> {
    let frames: Vec<AdjacencyFrame> = serde_json::from_str(text)?;
    validate_frames(&frames)?;
    Ok(frames)
}

#[must_use]
pub fn write_adjacency_sequence(frames: &[AdjacencyFrame]) -> String {
    let mut out = serde_json::to_string_pretty(frames).expect("frames serialize");
    out.push('\n');
    out
}

/// Lowercase hex SHA-256, used to tie reports to their input files.
#[must_use]
pub fn digest_hex(bytes: &[u8]) -> String {
    let d = Sha256::digest(bytes);
    d.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputKind {
    Events,
    Adjacency,
}

/// One held representative, from its change step until the next segment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistorySegment {
    pub step: usize,
    pub cycle: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportInterval {
    pub dimension: usize,
    pub birth: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub death: Option<usize>,
    pub history: Vec<HistorySegment>,
    /// `[coarse index, hop size]` pairs for H_1 intervals when sizing was
    /// requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sizes: Option<Vec<[usize; 2]>>,
}

/// Everything a run produced, self-contained enough that replaying the
/// referenced input file reproduces it byte for byte.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub version: String,
    pub input_kind: InputKind,
    pub input_digest: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub dims: Vec<usize>,
    pub collapse_zero_length: bool,
    pub with_sizes: bool,
    /// Total fine steps of the refined stream.
    pub events: usize,
    /// Half-open fine-step range of each coarse frame, when the input was
    /// an adjacency sequence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coarse_ranges: Option<Vec<[usize; 2]>>,
    pub intervals: Vec<ReportInterval>,
}

pub struct ReportParams<'a> {
    pub barcode: &'a TrackedBarcode,
    pub coarse: Option<&'a CoarseSequence>,
    pub sizes: Option<&'a [SizeProfile]>,
    pub input_kind: InputKind,
    pub input_digest: String,
    pub seed: Option<u64>,
    pub dims: &'a [usize],
    pub collapse_zero_length: bool,
}

/// Assembles a report from a finished run. With `collapse_zero_length` and
/// a coarse map, closed intervals that were never live at a coarse mark are
/// dropped.
#[must_use]
pub fn build_report(p: &ReportParams) -> RunReport {
    let mut sizes_of = std::collections::HashMap::new();
    if let Some(profiles) = p.sizes {
        for profile in profiles {
            let pairs: Vec<[usize; 2]> = profile.sizes.iter().map(|&(j, s)| [j, s]).collect();
            sizes_of.insert(profile.interval_index, pairs);
        }
    }
    let marks: Vec<usize> = p.coarse.map_or_else(Vec::new, |c| {
        (0..c.len()).map(|j| c.realized_step(j)).collect()
    });
    let mut intervals = Vec::new();
    for (i, iv) in p.barcode.intervals().enumerate() {
        if p.collapse_zero_length
            && p.coarse.is_some()
            && iv.death.is_some()
            && !marks.iter().any(|&m| iv.live_at(m))
        {
            continue;
        }
        let history = iv
            .history()
            .iter()
            .map(|(step, chain)| HistorySegment {
                step: *step,
                cycle: chain.support().iter().map(|s| s.vertices().to_vec()).collect(),
            })
            .collect();
        intervals.push(ReportInterval {
            dimension: iv.dimension,
            birth: iv.birth,
            death: iv.death,
            history,
            sizes: sizes_of.remove(&i),
        });
    }
    RunReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        input_kind: p.input_kind,
        input_digest: p.input_digest.clone(),
        seed: p.seed,
        dims: p.dims.to_vec(),
        collapse_zero_length: p.collapse_zero_length,
        with_sizes: p.sizes.is_some(),
        events: p.barcode.events,
        coarse_ranges: p
            .coarse
            .map(|c| c.ranges().iter().map(|r| [r.start, r.end]).collect()),
        intervals,
    }
}

#[must_use]
pub fn emit_report(report: &RunReport) -> String {
    let mut out = serde_json::to_string_pretty(report).expect("report serializes");
    out.push('\n');
    out
}

pub fn parse_report(text: &str) -> Result<RunReport> {
    Ok(serde_json::from_str(text)?)
}
