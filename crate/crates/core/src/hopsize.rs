//! Coordinate-free hole sizing through a hop-distance filtration.
//!
//! Given a complex `K`, level `h` of the filtration is the flag 2-skeleton
//! over the graph connecting every pair of vertices at most `h` hops apart
//! in `K`'s own 1-skeleton (level 1 is `K` itself). A 1-cycle's size is the
//! last level at which its class is nontrivial: small holes fill after one
//! thickening step, larger holes survive longer. Distances are measured in
//! `K` once; levels only grow edges, so triviality is monotone and the scan
//! can stop at the first trivial level.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::oracle;
use crate::simplicial::{boundary_of_chain, Simplex, SimplicialComplex, Z2Chain};
use crate::tracker::TrackedBarcode;
use crate::z2::{BitVec, Echelon};
use crate::sequence::CoarseSequence;
use crate::{Error, Result};

/// Nested thickenings `K¹ ⊆ K² ⊆ ... ⊆ K^max_depth` of a base complex.
#[derive(Clone, Debug)]
pub struct HopFiltration {
    pub base: SimplicialComplex,
    pub levels: Vec<SimplicialComplex>,
    pub max_depth: usize,
}

/// All-pairs hop counts in the 1-skeleton, keyed by vertex pairs `(v, w)`
/// with `v < w`. Unreachable pairs are absent.
#[must_use]
pub fn hop_distances(k: &SimplicialComplex) -> BTreeMap<(usize, usize), usize> {
    let verts: Vec<usize> = k.simplices(0).map(|s| s.vertices()[0]).collect();
    let mut out = BTreeMap::new();
    for &v in &verts {
        for (w, d) in bfs_from(k, v) {
            if v < w {
                out.insert((v, w), d);
            }
        }
    }
    out
}

fn bfs_from(k: &SimplicialComplex, start: usize) -> HashMap<usize, usize> {
    let mut dist = HashMap::from([(start, 0)]);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        let d = dist[&v];
        for w in k.neighbors(v) {
            dist.entry(w).or_insert_with(|| {
                queue.push_back(w);
                d + 1
            });
        }
    }
    dist
}

/// Largest finite hop distance, 0 for complexes with no two connected
/// vertices. The guaranteed-triviality bound for any 1-cycle: at this level
/// every component is complete, so its default is the natural `max_depth`.
#[must_use]
pub fn default_max_depth(k: &SimplicialComplex) -> usize {
    hop_distances(k).values().copied().max().unwrap_or(0).max(1)
}

/// Builds levels 1..=max_depth. Level 1 is the base complex itself
/// (including its own 2-simplices); deeper levels connect every pair within
/// `h` hops and fill in all flag triangles.
#[must_use]
pub fn build_hop_filtration(k: &SimplicialComplex, max_depth: usize) -> HopFiltration {
    assert!(max_depth >= 1, "max_depth must be at least 1");
    let dist = hop_distances(k);
    let mut levels = vec![k.clone()];
    for h in 2..=max_depth {
        let mut level = SimplicialComplex::new();
        let verts: Vec<usize> = k.simplices(0).map(|s| s.vertices()[0]).collect();
        for &v in &verts {
            level.add_simplex(Simplex::new(vec![v])).unwrap();
        }
        for (&(v, w), &d) in &dist {
            if d <= h {
                level.add_simplex(Simplex::new(vec![v, w])).unwrap();
            }
        }
        for (i, &u) in verts.iter().enumerate() {
            for (j, &v) in verts.iter().enumerate().skip(i + 1) {
                if !level.contains(&Simplex::new(vec![u, v])) {
                    continue;
                }
                for &w in &verts[j + 1..] {
                    if level.contains(&Simplex::new(vec![v, w]))
                        && level.contains(&Simplex::new(vec![u, w]))
                    {
                        level.add_simplex(Simplex::new(vec![u, v, w])).unwrap();
                    }
                }
            }
        }
        levels.push(level);
    }
    HopFiltration { base: k.clone(), levels, max_depth }
}

/// The largest `h` such that the cycle's class is nontrivial in `K^h`
/// (0 when it already bounds in the base complex). Scans every level up to
/// the guaranteed bound and checks that triviality, once reached, never
/// reverts.
pub fn cycle_hop_persistence(k: &SimplicialComplex, cycle: &Z2Chain) -> Result<usize> {
    if cycle.dimension() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: cycle.dimension() });
    }
    let filt = build_hop_filtration(k, default_max_depth(k));
    let mut last_nontrivial = 0;
    let mut seen_trivial = false;
    for (idx, level) in filt.levels.iter().enumerate() {
        // In level 1 this also validates that the input is a cycle of K.
        let trivial = oracle::is_boundary(level, cycle)?;
        if trivial {
            seen_trivial = true;
        } else {
            assert!(!seen_trivial, "triviality reverted between filtration levels");
            last_nontrivial = idx + 1;
        }
    }
    assert!(
        seen_trivial,
        "cycle still nontrivial at the completeness bound"
    );
    Ok(last_nontrivial)
}

/// Hop sizes per live interval per coarse frame.
///
/// `sizes` holds `(coarse index, size)` pairs, ascending by coarse index,
/// covering exactly the frames at which the interval is live. Only
/// one-dimensional intervals are profiled; `interval_index` refers to the
/// barcode's `intervals()` order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SizeProfile {
    pub interval_index: usize,
    pub sizes: Vec<(usize, usize)>,
}

/// Sizes every H_1 interval at every coarse frame where it is live, by the
/// hop persistence of the representative it held at that frame's step.
///
/// Equivalent to calling [`cycle_hop_persistence`] per (interval, frame)
/// pair, but the per-level boundary echelons are shared across the cycles
/// of a frame, and a level stops absorbing triangles once its boundary rank
/// saturates the cycle space.
pub fn annotate_barcode(barcode: &TrackedBarcode, coarse: &CoarseSequence) -> Result<Vec<SizeProfile>> {
    let mut profiles: Vec<SizeProfile> = Vec::new();
    let mut index_of: HashMap<usize, usize> = HashMap::new();
    for (i, interval) in barcode.intervals().enumerate() {
        if interval.dimension == 1 {
            index_of.insert(i, profiles.len());
            profiles.push(SizeProfile { interval_index: i, sizes: Vec::new() });
        }
    }
    if profiles.is_empty() {
        return Ok(Vec::new());
    }
    for (j, k) in coarse.complexes().iter().enumerate() {
        let mark = coarse.realized_step(j);
        if mark == 0 {
            continue;
        }
        let mut owners = Vec::new();
        let mut cycles = Vec::new();
        for (i, interval) in barcode.intervals().enumerate() {
            if interval.dimension != 1 || !interval.live_at(mark) {
                continue;
            }
            let cycle = interval.cycle_at(mark).ok_or_else(|| Error::Internal {
                step: mark,
                detail: format!("interval {i} is live but has no history at step {mark}"),
            })?;
            owners.push(index_of[&i]);
            cycles.push(cycle);
        }
        if owners.is_empty() {
            continue;
        }
        let sizes = hop_sizes(k, &cycles)?;
        for (&owner, size) in owners.iter().zip(sizes) {
            profiles[owner].sizes.push((j, size));
        }
    }
    Ok(profiles)
}

/// Hop persistence of several cycles of one complex in a single filtration
/// scan. Indexing of vertices and edges is local to each level, and the
/// level echelon is shared by all still-undecided cycles.
fn hop_sizes(k: &SimplicialComplex, cycles: &[&Z2Chain]) -> Result<Vec<usize>> {
    for c in cycles {
        if c.dimension() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, found: c.dimension() });
        }
        if !boundary_of_chain(c, k)?.is_empty() {
            return Err(Error::NonCycle);
        }
    }
    let verts: Vec<usize> = k.simplices(0).map(|s| s.vertices()[0]).collect();
    let vid: HashMap<usize, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let n = verts.len();

    // Hop distances as a dense local matrix; unreachable stays usize::MAX.
    let mut dist = vec![vec![usize::MAX; n]; n];
    for (i, &v) in verts.iter().enumerate() {
        for (w, d) in bfs_from(k, v) {
            dist[i][vid[&w]] = d;
        }
    }
    let bound = dist
        .iter()
        .flatten()
        .filter(|&&d| d != usize::MAX)
        .max()
        .copied()
        .unwrap_or(0)
        .max(1);
    let components = {
        let mut seen = vec![false; n];
        let mut c = 0;
        for i in 0..n {
            if !seen[i] {
                c += 1;
                seen[i] = true;
                for (j, row) in dist[i].iter().enumerate() {
                    if *row != usize::MAX {
                        seen[j] = true;
                    }
                }
            }
        }
        c
    };

    let mut sizes = vec![usize::MAX; cycles.len()];
    let mut undecided: Vec<usize> = (0..cycles.len()).collect();
    let mut prev_edge_count = usize::MAX;
    for h in 1..=bound {
        // Edges of this level, lexicographically indexed.
        let mut edge_id = HashMap::new();
        for i in 0..n {
            for j in i + 1..n {
                if dist[i][j] != usize::MAX && dist[i][j] <= h {
                    let id = edge_id.len();
                    edge_id.insert((i, j), id);
                }
            }
        }
        let e = edge_id.len();
        if e == prev_edge_count {
            continue; // identical graph, identical verdicts
        }
        prev_edge_count = e;
        let cycle_space = e + components - n;

        let mut image = Echelon::new();
        if h == 1 {
            // Level 1 is K itself, with exactly K's own 2-simplices.
            for t in k.simplices(2) {
                if image.len() == cycle_space {
                    break;
                }
                insert_triangle(&mut image, &edge_id, t.vertices().iter().map(|&v| vid[&v]));
            }
        } else {
            'fill: for a in 0..n {
                for b in a + 1..n {
                    if dist[a][b] > h {
                        continue;
                    }
                    for c in b + 1..n {
                        if dist[a][c] <= h && dist[b][c] <= h {
                            if image.len() == cycle_space {
                                break 'fill;
                            }
                            insert_triangle(&mut image, &edge_id, [a, b, c].into_iter());
                        }
                    }
                }
            }
        }

        undecided.retain(|&ci| {
            let mut bits = BitVec::new();
            for s in cycles[ci].support() {
                let vs = s.vertices();
                bits.set(edge_id[&(vid[&vs[0]], vid[&vs[1]])]);
            }
            let (residual, _) = image.reduce(&bits, BitVec::new());
            if residual.is_empty() {
                sizes[ci] = h - 1;
                false
            } else {
                true
            }
        });
        if undecided.is_empty() {
            break;
        }
    }
    if let Some(&ci) = undecided.first() {
        return Err(Error::Internal {
            step: 0,
            detail: format!("cycle {ci} still nontrivial at the completeness bound"),
        });
    }
    Ok(sizes)
}

fn insert_triangle(
    image: &mut Echelon,
    edge_id: &HashMap<(usize, usize), usize>,
    vertices: impl Iterator<Item = usize>,
) {
    let mut vs: Vec<usize> = vertices.collect();
    vs.sort_unstable();
    let mut bits = BitVec::new();
    bits.set(edge_id[&(vs[0], vs[1])]);
    bits.flip(edge_id[&(vs[0], vs[2])]);
    bits.flip(edge_id[&(vs[1], vs[2])]);
    let (residual, _) = image.reduce(&bits, BitVec::new());
    if !residual.is_empty() {
        image.insert_reduced(residual, BitVec::new());
    }
}
