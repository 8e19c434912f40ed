//! Refining a coarse sequence of complexes into a single-simplex zigzag
//! stream.
//!
//! Consecutive complexes are connected through their union: everything in
//! `K_{t+1} \ K_t` is added (ascending dimension, lexicographic within a
//! dimension), then everything in `K_t \ K_{t+1}` is removed (descending
//! dimension, lexicographic within a dimension). Every prefix of such a
//! segment is a valid complex, so the resulting stream is applicable from
//! start to end. The first complex is reached from the empty complex the
//! same way, making the whole run one uniform stream.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::simplicial::{rips_2skeleton_masked, Simplex, SimplicialComplex};
use crate::tracker::{Event, EventKind, EventStream};
use crate::{Error, Result};

/// One frame of a dynamic network: which nodes are up and who hears whom.
/// `rows` must be symmetric 0/1 with zero diagonal, and rows of absent
/// nodes all zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjacencyFrame {
    pub n: usize,
    pub present: Vec<u8>,
    pub rows: Vec<Vec<u8>>,
}

/// A coarse sequence together with the fine-step range each frame occupies
/// in the refined stream. The ranges are half-open, contiguous, and
/// partition `1..=last_step` (a frame identical to its predecessor gets an
/// empty range). Frame `j` is fully realized immediately after fine step
/// `ranges[j].end - 1`.
#[derive(Clone, Debug)]
pub struct CoarseSequence {
    complexes: Vec<SimplicialComplex>,
    ranges: Vec<Range<usize>>,
}

impl CoarseSequence {
    #[must_use]
    pub fn complexes(&self) -> &[SimplicialComplex] {
        &self.complexes
    }

    #[must_use]
    pub fn ranges(&self) -> &[Range<usize>] {
        &self.ranges
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.complexes.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.complexes.is_empty()
    }

    /// Fine step after which frame `j` holds exactly (0 only when every
    /// frame up to `j` is empty).
    #[must_use]
    pub fn realized_step(&self, j: usize) -> usize {
        self.ranges[j].end - 1
    }
}

/// The single-simplex moves turning `from` into `to` through their union:
/// additions in ascending dimension then lexicographic order, removals in
/// descending dimension then lexicographic order. Every prefix applied to
/// `from` is face-closed.
#[must_use]
pub fn union_refine(from: &SimplicialComplex, to: &SimplicialComplex) -> Vec<(EventKind, Simplex)> {
    let mut moves = Vec::new();
    let top_add = to.dimension().map_or(0, |d| d + 1);
    for d in 0..top_add {
        for s in to.simplices(d) {
            if !from.contains(s) {
                moves.push((EventKind::Add, s.clone()));
            }
        }
    }
    let top_rm = from.dimension().map_or(0, |d| d + 1);
    for d in (0..top_rm).rev() {
        for s in from.simplices(d) {
            if !to.contains(s) {
                moves.push((EventKind::Remove, s.clone()));
            }
        }
    }
    moves
}

/// Concatenates the refinement segments of a non-empty coarse sequence,
/// starting from the empty complex, and records the step range each frame
/// occupies.
pub fn build_stream(seq: &[SimplicialComplex]) -> Result<(EventStream, CoarseSequence)> {
    if seq.is_empty() {
        return Err(Error::EmptySequence);
    }
    let mut events = Vec::new();
    let mut ranges = Vec::with_capacity(seq.len());
    let mut prev = SimplicialComplex::new();
    let mut next_step = 1;
    for k in seq {
        let start = next_step;
        for (kind, simplex) in union_refine(&prev, k) {
            events.push(Event { kind, simplex, step: next_step });
            next_step += 1;
        }
        ranges.push(start..next_step);
        prev = k.clone();
    }
    let stream = EventStream::from_events(events).expect("steps assigned in order");
    Ok((stream, CoarseSequence { complexes: seq.to_vec(), ranges }))
}

/// One Rips 2-skeleton per frame, with absent nodes contributing nothing.
pub fn complexes_from_adjacency_sequence(frames: &[AdjacencyFrame]) -> Result<Vec<SimplicialComplex>> {
    frames
        .iter()
        .enumerate()
        .map(|(index, f)| {
            validate_frame(f).map_err(|msg| Error::Frame { index, msg })?;
            let present: Vec<bool> = f.present.iter().map(|&p| p == 1).collect();
            rips_2skeleton_masked(&f.rows, &present)
        })
        .collect()
}

/// Checks every frame's shape: square symmetric 0/1 rows, zero diagonal,
/// nothing incident to an absent node. Errors carry the frame index.
pub fn validate_frames(frames: &[AdjacencyFrame]) -> Result<()> {
    for (index, f) in frames.iter().enumerate() {
        validate_frame(f).map_err(|msg| Error::Frame { index, msg })?;
    }
    Ok(())
}

fn validate_frame(f: &AdjacencyFrame) -> std::result::Result<(), String> {
    let n = f.n;
    if f.present.len() != n {
        return Err(format!("present has length {}, expected {n}", f.present.len()));
    }
    if let Some(p) = f.present.iter().find(|&&p| p > 1) {
        return Err(format!("present entries must be 0 or 1, found {p}"));
    }
    if f.rows.len() != n {
        return Err(format!("{} rows, expected {n}", f.rows.len()));
    }
    for (i, row) in f.rows.iter().enumerate() {
        if row.len() != n {
            return Err(format!("row {i} has length {}, expected {n}", row.len()));
        }
        for (j, &x) in row.iter().enumerate() {
            if x > 1 {
                return Err(format!("entry ({i}, {j}) must be 0 or 1, found {x}"));
            }
            if x != f.rows[j][i] {
                return Err(format!("not symmetric at ({i}, {j})"));
            }
            if i == j && x != 0 {
                return Err(format!("nonzero diagonal at {i}"));
            }
            if x == 1 && (f.present[i] == 0 || f.present[j] == 0) {
                return Err(format!("edge ({i}, {j}) touches an absent node"));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn sx(vs: &[usize]) -> Simplex {
        Simplex::new(vs.to_vec())
    }

    fn complex_of(simplices: &[&[usize]]) -> SimplicialComplex {
        let mut k = SimplicialComplex::new();
        for vs in simplices {
            k.add_simplex(sx(vs)).unwrap();
        }
        k
    }

    fn simplex_set(k: &SimplicialComplex) -> Vec<Simplex> {
        let mut v: Vec<Simplex> = k.all_simplices().cloned().collect();
        v.sort_by(|a, b| (a.dimension(), a.vertices()).cmp(&(b.dimension(), b.vertices())));
        v
    }

    #[test]
    fn union_refine_examples() {
        let k = complex_of(&[&[0], &[1], &[0, 1]]);
        assert!(union_refine(&k, &k).is_empty());

        // {a, b, ab} to {b, c, bc} with a=0, b=1, c=2.
        let from = complex_of(&[&[0], &[1], &[0, 1]]);
        let to = complex_of(&[&[1], &[2], &[1, 2]]);
        let moves = union_refine(&from, &to);
        assert_eq!(
            moves,
            vec![
                (EventKind::Add, sx(&[2])),
                (EventKind::Add, sx(&[1, 2])),
                (EventKind::Remove, sx(&[0, 1])),
                (EventKind::Remove, sx(&[0])),
            ]
        );

        let hollow = complex_of(&[&[0], &[1], &[2], &[0, 1], &[0, 2], &[1, 2]]);
        let mut full = hollow.clone();
        full.add_simplex(sx(&[0, 1, 2])).unwrap();
        assert_eq!(union_refine(&hollow, &full), vec![(EventKind::Add, sx(&[0, 1, 2]))]);
    }

    #[test]
    fn build_stream_examples() {
        let (stream, coarse) = build_stream(&[complex_of(&[&[0]])]).unwrap();
        assert_eq!(stream.len(), 1);
        assert_eq!(coarse.ranges(), std::slice::from_ref(&(1..2)));

        let hollow = complex_of(&[&[0], &[1], &[2], &[0, 1], &[0, 2], &[1, 2]]);
        let mut full = hollow.clone();
        full.add_simplex(sx(&[0, 1, 2])).unwrap();
        let (stream, coarse) = build_stream(&[hollow.clone(), full]).unwrap();
        assert_eq!(stream.len(), 7);
        assert_eq!(coarse.ranges(), &[1..7, 7..8]);
        assert_eq!(coarse.realized_step(0), 6);
        assert_eq!(coarse.realized_step(1), 7);

        let (stream, coarse) = build_stream(&[hollow.clone(), hollow.clone(), hollow]).unwrap();
        assert_eq!(stream.len(), 6);
        assert_eq!(coarse.ranges(), &[1..7, 7..7, 7..7]);
        assert_eq!(coarse.realized_step(2), 6);

        assert!(matches!(build_stream(&[]), Err(Error::EmptySequence)));
    }

    #[test]
    fn adjacency_sequence_examples() {
        let complete3 = AdjacencyFrame {
            n: 3,
            present: vec![1, 1, 1],
            rows: vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]],
        };
        let ks = complexes_from_adjacency_sequence(std::slice::from_ref(&complete3)).unwrap();
        assert_eq!(ks[0].count(2), 1);

        let zero = AdjacencyFrame {
            n: 2,
            present: vec![1, 1],
            rows: vec![vec![0, 0], vec![0, 0]],
        };
        let ks = complexes_from_adjacency_sequence(&[zero]).unwrap();
        assert_eq!((ks[0].count(0), ks[0].count(1)), (2, 0));

        let masked = AdjacencyFrame {
            n: 3,
            present: vec![1, 1, 0],
            rows: vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 0]],
        };
        let ks = complexes_from_adjacency_sequence(&[masked]).unwrap();
        assert!(!ks[0].contains(&sx(&[2])));
        assert!(ks[0].contains(&sx(&[0, 1])));

        let mut bad = complete3;
        bad.rows[0][1] = 0;
        let err = complexes_from_adjacency_sequence(&[bad]);
        assert!(matches!(err, Err(Error::Frame { index: 0, .. })));
    }

    #[test]
    fn frame_validation_rejects_masked_edges_and_bad_entries() {
        let stale = AdjacencyFrame {
            n: 2,
            present: vec![1, 0],
            rows: vec![vec![0, 1], vec![1, 0]],
        };
        assert!(complexes_from_adjacency_sequence(&[stale]).is_err());

        let two = AdjacencyFrame {
            n: 2,
            present: vec![1, 1],
            rows: vec![vec![0, 2], vec![2, 0]],
        };
        assert!(complexes_from_adjacency_sequence(&[two]).is_err());

        let diag = AdjacencyFrame {
            n: 1,
            present: vec![1],
            rows: vec![vec![1]],
        };
        assert!(complexes_from_adjacency_sequence(&[diag]).is_err());
    }

    fn random_flag_complex(rng: &mut StdRng, n: usize) -> SimplicialComplex {
        let mut adj = vec![vec![0u8; n]; n];
        let present: Vec<bool> = (0..n).map(|_| rng.random_bool(0.85)).collect();
        for i in 0..n {
            for j in i + 1..n {
                if present[i] && present[j] && rng.random_bool(0.4) {
                    adj[i][j] = 1;
                    adj[j][i] = 1;
                }
            }
        }
        crate::simplicial::rips_2skeleton_masked(&adj, &present).unwrap()
    }

    #[test]
    fn replay_reaches_every_frame_through_the_union() {
        let mut rng = StdRng::seed_from_u64(20260813);
        for _ in 0..25 {
            let frames: Vec<SimplicialComplex> =
                (0..6).map(|_| random_flag_complex(&mut rng, 7)).collect();
            let (stream, coarse) = build_stream(&frames).unwrap();
            assert_eq!(stream.last_step() + 1, coarse.ranges().last().unwrap().end);

            // Replay segment by segment: adds come first and peak at the
            // union of the neighbouring frames, removals land on the frame.
            let mut k = SimplicialComplex::new();
            let mut events = stream.events().iter().peekable();
            for (j, cur) in coarse.complexes().iter().enumerate() {
                let range = &coarse.ranges()[j];
                let mut union = simplex_set(&k);
                union.extend(simplex_set(cur));
                union.sort_by(|a, b| (a.dimension(), a.vertices()).cmp(&(b.dimension(), b.vertices())));
                union.dedup();

                let mut in_removals = false;
                while events.peek().is_some_and(|e| range.contains(&e.step)) {
                    let e = events.next().unwrap();
                    match e.kind {
                        EventKind::Add => {
                            assert!(!in_removals, "addition after a removal in one segment");
                            k.add_simplex(e.simplex.clone()).expect("applicable add");
                        }
                        EventKind::Remove => {
                            if !in_removals {
                                assert_eq!(simplex_set(&k), union, "union maximum missed");
                                in_removals = true;
                            }
                            k.remove_simplex(&e.simplex).expect("applicable remove");
                        }
                    }
                }
                assert_eq!(simplex_set(&k), simplex_set(cur), "frame {j} not realized");
                assert_eq!(coarse.realized_step(j), range.end - 1);
            }
            assert!(events.next().is_none());
        }
    }

    #[test]
    fn build_stream_is_deterministic() {
        let mut rng = StdRng::seed_from_u64(7);
        let frames: Vec<SimplicialComplex> =
            (0..4).map(|_| random_flag_complex(&mut rng, 6)).collect();
        let (a, ca) = build_stream(&frames).unwrap();
        let (b, cb) = build_stream(&frames).unwrap();
        assert_eq!(a, b);
        assert_eq!(ca.ranges(), cb.ranges());
    }
}
