//! Zigzag persistence over single-simplex event streams, with representative
//! cycles picked and maintained for geometric legibility.
//!
//! A stream of `Add`/`Remove` events, each touching one simplex, induces a
//! zigzag sequence of complexes. The [`tracker`] walks the stream once,
//! classifies every event as a birth or a death in the affected homology
//! dimension, and keeps an explicit basis of representative cycles aligned
//! with the live intervals: new one-dimensional classes get a shortest cycle
//! through the new edge, classes born by removing a 2-simplex get exactly
//! that simplex's boundary, and deaths update the surviving representatives
//! by the minimal basis change. The [`oracle`] recomputes homology from
//! scratch so every tracker answer can be cross-checked; [`sequence`] refines
//! a coarse sequence of complexes (for instance Rips skeletons of a moving
//! sensor network from [`netsim`]) into an applicable stream; [`hopsize`]
//! sizes a cycle by how many hops of extra connectivity are needed to fill
//! it; [`io`] and [`render`] serialize runs and draw barcodes.
//!
//! ```
//! use holetrack::simplicial::Simplex;
//! use holetrack::tracker::{run, Event, EventKind, EventStream};
//!
//! // Build a hollow triangle, fill it, hollow it again.
//! let mut events = Vec::new();
//! for vs in [vec![0], vec![1], vec![2]] {
//!     events.push((EventKind::Add, Simplex::new(vs)));
//! }
//! for vs in [vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 1, 2]] {
//!     events.push((EventKind::Add, Simplex::new(vs)));
//! }
//! events.push((EventKind::Remove, Simplex::new(vec![0, 1, 2])));
//! let stream = EventStream::from_events(
//!     events
//!         .into_iter()
//!         .zip(1..)
//!         .map(|((kind, simplex), step)| Event { kind, simplex, step })
//!         .collect(),
//! )
//! .unwrap();
//!
//! let barcode = run(&stream, &[0, 1]).unwrap();
//! // The loop closed at step 6, died at step 7, and was reborn at step 8.
//! let h1: Vec<_> = barcode.intervals().filter(|i| i.dimension == 1).collect();
//! assert_eq!(h1.len(), 2);
//! assert_eq!((h1[0].birth, h1[0].death), (6, Some(7)));
//! assert_eq!((h1[1].birth, h1[1].death), (8, None));
//! assert_eq!(h1[1].cycle_at(8).unwrap().len(), 3);
//! ```

pub mod hopsize;
pub mod io;
pub mod netsim;
pub mod oracle;
pub mod render;
pub mod sequence;
pub mod simplicial;
pub mod tracker;
pub mod z2;

use simplicial::Simplex;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("empty vertex list")]
    EmptySimplex,
    #[error("vertices not strictly ascending: {vertices:?}")]
    UnsortedVertices { vertices: Vec<usize> },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("simplex {simplex} is already present")]
    AlreadyPresent { simplex: Simplex },
    #[error("cannot add {simplex}: face {face} is missing")]
    MissingFace { simplex: Simplex, face: Simplex },
    #[error("simplex {simplex} is not present")]
    NotPresent { simplex: Simplex },
    #[error("cannot remove {simplex}: live coface {coface}")]
    NotMaximal { simplex: Simplex, coface: Simplex },
    #[error("chain references {simplex}, which is not in the complex")]
    MissingSimplex { simplex: Simplex },
    #[error("adjacency matrix not symmetric at ({i}, {j})")]
    Asymmetric { i: usize, j: usize },
    #[error("adjacency row {row} has length {len}, expected {size}")]
    NotSquare { row: usize, len: usize, size: usize },
    #[error("chain is not a cycle")]
    NonCycle,
    #[error("event {index} has step {step}, not after its predecessor")]
    StepOrder { index: usize, step: usize },
    #[error("endpoints of {edge} lie in different components")]
    Disconnected { edge: Simplex },
    #[error("event at step {step} is not applicable: {source}")]
    Inapplicable {
        step: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("internal inconsistency at step {step}: {detail}")]
    Internal { step: usize, detail: String },
    #[error("invalid config: {0}")]
    Config(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("frame {index}: {msg}")]
    Frame { index: usize, msg: String },
    #[error("empty coarse sequence")]
    EmptySequence,
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
