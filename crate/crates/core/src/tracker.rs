//! Zigzag tracking of representative cycles over a single-simplex event
//! stream.
//!
//! The stream starts from the empty complex; each event adds or removes one
//! simplex. Every event is classified as a birth or a death in the affected
//! homology dimension, and for each tracked dimension `p` the tracker keeps a
//! basis `W` of representative cycles, column-aligned with the vector `b` of
//! birth steps, so that at every step the columns represent the live classes
//! in right-filtration order:
//!
//! * addition of a `d`-simplex whose boundary already bounds births a class
//!   in `H_d`; the new column contains the simplex, and for `d == 1` it is a
//!   shortest cycle through the new edge,
//! * addition whose boundary does not bound kills the last basis class whose
//!   combination matches it (column removed, interval emitted),
//! * removal of a `d`-simplex that sits in no `d`-cycle births a class in
//!   `H_{d-1}` represented by exactly the removed simplex's boundary; the
//!   column and its birth step are prepended,
//! * removal that breaks a `d`-cycle kills the first column supported on the
//!   simplex after folding that column into the other supported ones.
//!
//! Classification is backed by an incrementally maintained image echelon and
//! kernel basis of each boundary operator, kept in the complex's stable
//! ordinal coordinates. The answers are the same as re-solving the linear
//! systems from scratch at every event (which is what the oracle does when
//! cross-checking); the incremental form just makes long streams affordable.

use std::collections::{HashMap, VecDeque};

use crate::simplicial::{Simplex, SimplicialComplex, Z2Chain};
use crate::z2::{solve_in_span, BitVec, Echelon, Z2Matrix};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EventKind {
    Add,
    Remove,
}

/// One stream element. `step` is the 1-based position used in intervals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Event {
    pub kind: EventKind,
    pub simplex: Simplex,
    pub step: usize,
}

/// Events with strictly increasing positive steps.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EventStream {
    events: Vec<Event>,
}

impl EventStream {
    pub fn from_events(events: Vec<Event>) -> Result<Self> {
        let mut prev = 0;
        for (index, e) in events.iter().enumerate() {
            if e.step <= prev {
                return Err(Error::StepOrder { index, step: e.step });
            }
            prev = e.step;
        }
        Ok(Self { events })
    }

    #[must_use]
    pub fn events(&self) -> &[Event] {
        &self.events
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.events.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Step of the last event, 0 for an empty stream.
    #[must_use]
    pub fn last_step(&self) -> usize {
        self.events.last().map_or(0, |e| e.step)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Change {
    Birth,
    Death,
}

/// A (possibly still open) persistence interval with its representative
/// history. A closed interval `[birth, death]` was live at steps
/// `birth..death-1`; renderers print it half-open as `[birth, death)`.
///
/// The history stores change points: `(step, cycle)` meaning the interval
/// held `cycle` from `step` until the next change point. `cycle_at`
/// reconstructs the full per-step record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub dimension: usize,
    pub birth: usize,
    pub death: Option<usize>,
    history: Vec<(usize, Z2Chain)>,
}

impl Interval {
    #[must_use]
    pub fn new(dimension: usize, birth: usize, death: Option<usize>, history: Vec<(usize, Z2Chain)>) -> Self {
        Self { dimension, birth, death, history }
    }

    /// Change points of the held representative, ascending by step.
    #[must_use]
    pub fn history(&self) -> &[(usize, Z2Chain)] {
        &self.history
    }

    /// Whether the class is nontrivial in the complex at `step`.
    #[must_use]
    pub fn live_at(&self, step: usize) -> bool {
        step >= self.birth && self.death.is_none_or(|d| step < d)
    }

    /// The representative held at `step`, when live there.
    #[must_use]
    pub fn cycle_at(&self, step: usize) -> Option<&Z2Chain> {
        if !self.live_at(step) {
            return None;
        }
        let idx = self.history.partition_point(|(s, _)| *s <= step);
        idx.checked_sub(1).map(|i| &self.history[i].1)
    }
}

/// Output of a full run: intervals closed during the stream, intervals still
/// open at the end (in dimension order, columns in basis order), and the
/// number of events consumed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrackedBarcode {
    pub closed: Vec<Interval>,
    pub open: Vec<Interval>,
    pub events: usize,
}

impl TrackedBarcode {
    /// Closed intervals (in death order) followed by open ones.
    pub fn intervals(&self) -> impl Iterator<Item = &Interval> {
        self.closed.iter().chain(self.open.iter())
    }
}

/// Incremental view of one boundary operator `d_q` in ordinal coordinates:
/// an echelon basis of its image whose carries record which q-simplices sum
/// to each column, plus a basis of its kernel. Both survive arbitrary
/// interleavings of maximal additions and removals.
#[derive(Clone, Debug, Default)]
struct Differential {
    image: Echelon,
    kernel: Vec<BitVec>,
}

/// One live tracked class: its cycle in p-ordinal coordinates, its birth
/// step, and its history of held representatives.
#[derive(Clone, Debug)]
struct LiveColumn {
    cycle: BitVec,
    birth: usize,
    history: Vec<(usize, Z2Chain)>,
    snapshot: BitVec,
}

impl LiveColumn {
    fn new(cycle: BitVec, birth: usize) -> Self {
        Self { cycle, birth, history: Vec::new(), snapshot: BitVec::new() }
    }
}

/// Tracker state after some prefix of a stream.
#[derive(Clone, Debug)]
pub struct TrackerState {
    complex: SimplicialComplex,
    step: usize,
    diffs: Vec<Differential>,
    tracked: Vec<Option<Vec<LiveColumn>>>,
}

impl TrackerState {
    /// Fresh state over the empty complex, tracking the given homology
    /// dimensions.
    #[must_use]
    pub fn new(dims: &[usize]) -> Self {
        let top = dims.iter().copied().max().map_or(0, |d| d + 1);
        let mut tracked = Vec::new();
        tracked.resize_with(top, || None);
        for &d in dims {
            tracked[d] = Some(Vec::new());
        }
        Self { complex: SimplicialComplex::new(), step: 0, diffs: Vec::new(), tracked }
    }

    #[must_use]
    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    /// Step of the last applied event, 0 initially.
    #[must_use]
    pub fn current_step(&self) -> usize {
        self.step
    }

    #[must_use]
    pub fn tracked_dims(&self) -> Vec<usize> {
        self.tracked
            .iter()
            .enumerate()
            .filter(|(_, t)| t.is_some())
            .map(|(p, _)| p)
            .collect()
    }

    /// Number of live intervals in dimension `p` (the column count of `W`).
    #[must_use]
    pub fn live_interval_count(&self, p: usize) -> usize {
        self.tracked
            .get(p)
            .and_then(|t| t.as_ref())
            .map_or(0, Vec::len)
    }

    /// `(birth step, representative)` per live class in dimension `p`, in
    /// basis column order.
    #[must_use]
    pub fn current_representatives(&self, p: usize) -> Vec<(usize, Z2Chain)> {
        match self.tracked.get(p).and_then(|t| t.as_ref()) {
            None => Vec::new(),
            Some(cols) => cols
                .iter()
                .map(|c| (c.birth, self.chain_from_bits(p, &c.cycle)))
                .collect(),
        }
    }

    fn columns_mut(&mut self, p: usize) -> Option<&mut Vec<LiveColumn>> {
        self.tracked.get_mut(p).and_then(|t| t.as_mut())
    }

    fn diff_mut(&mut self, q: usize) -> &mut Differential {
        if self.diffs.len() <= q {
            self.diffs.resize_with(q + 1, Differential::default);
        }
        &mut self.diffs[q]
    }

    fn chain_from_bits(&self, p: usize, bits: &BitVec) -> Z2Chain {
        let mut c = Z2Chain::empty(p);
        for o in bits.ones() {
            let s = self
                .complex
                .simplex_with_ordinal(p, o)
                .expect("ordinal was assigned");
            debug_assert!(self.complex.contains(s), "representative references a removed simplex");
            c.toggle(s.clone());
        }
        c
    }

    /// Boundary of `s` as a bitvec over the (d-1)-ordinals of the current
    /// complex. All faces must be present.
    fn boundary_bits(&self, s: &Simplex) -> BitVec {
        let mut bits = BitVec::new();
        if s.dimension() == 0 {
            return bits;
        }
        for f in s.faces() {
            bits.set(self.complex.ordinal_of(&f).expect("face present"));
        }
        bits
    }

    fn check_applicable(&self, event: &Event) -> Result<()> {
        let wrap = |e: Error| Error::Inapplicable { step: event.step, source: Box::new(e) };
        let s = &event.simplex;
        match event.kind {
            EventKind::Add => {
                if self.complex.contains(s) {
                    return Err(wrap(Error::AlreadyPresent { simplex: s.clone() }));
                }
                for f in s.faces() {
                    if !self.complex.contains(&f) {
                        return Err(wrap(Error::MissingFace { simplex: s.clone(), face: f }));
                    }
                }
            }
            EventKind::Remove => {
                if !self.complex.contains(s) {
                    return Err(wrap(Error::NotPresent { simplex: s.clone() }));
                }
                if let Some(coface) = self.complex.coface_of(s) {
                    return Err(wrap(Error::NotMaximal { simplex: s.clone(), coface }));
                }
            }
        }
        Ok(())
    }

    /// Applies one event, returning the closed interval if it was a death in
    /// a tracked dimension. The event's step becomes the current step and
    /// every live tracked interval extends its history.
    pub fn step(&mut self, event: &Event) -> Result<Option<Interval>> {
        self.check_applicable(event)?;
        let i = event.step;
        let s = event.simplex.clone();
        let d = s.dimension();
        let mut emitted = None;

        match event.kind {
            EventKind::Add => {
                let b = self.boundary_bits(&s);
                self.diff_mut(d);
                let (residual, carry) = self.diffs[d].image.reduce(&b, BitVec::new());
                if residual.is_empty() {
                    // Birth in H_d: the new simplex completes a cycle.
                    let bfs_cycle = if d == 1 && self.is_tracked(d) {
                        Some(shortest_cycle_through(&self.complex, &s)?)
                    } else {
                        None
                    };
                    self.complex.add_simplex(s.clone()).expect("applicability checked");
                    let o = self.complex.ordinal_of(&s).expect("just added");
                    let mut kvec = carry;
                    kvec.set(o);
                    self.diffs[d].kernel.push(kvec.clone());
                    if self.is_tracked(d) {
                        let cycle = match bfs_cycle {
                            Some(chain) => {
                                let mut bits = self.bits_from_chain(&chain);
                                bits.set(o);
                                bits
                            }
                            None if d == 0 => BitVec::singleton(o),
                            // Kernel completion: the fresh kernel vector is a
                            // cycle through the new simplex.
                            None => kvec,
                        };
                        let cols = self.columns_mut(d).expect("tracked");
                        cols.push(LiveColumn::new(cycle, i));
                    }
                } else {
                    // Death in H_{d-1}: [boundary of s] was nontrivial and now
                    // bounds. Express it over the tracked basis before
                    // touching any state; the coefficient block is unique.
                    let p = d - 1;
                    if self.is_tracked(p) {
                        let alpha = self.express_over_basis(p, d, &residual, i)?;
                        let l = alpha.max_bit().ok_or_else(|| Error::Internal {
                            step: i,
                            detail: "death by addition with zero coefficients".into(),
                        })?;
                        emitted = Some(self.close_column(p, l, i));
                    }
                    self.complex.add_simplex(s.clone()).expect("applicability checked");
                    let o = self.complex.ordinal_of(&s).expect("just added");
                    let mut prov = carry;
                    prov.set(o);
                    self.diffs[d].image.insert_reduced(residual, prov);
                }
            }
            EventKind::Remove => {
                let o = self.complex.ordinal_of(&s).expect("applicability checked");
                self.diff_mut(d);
                let hit = self.diffs[d].kernel.iter().position(|k| k.get(o));
                match hit {
                    Some(k0_idx) => {
                        // Death in H_d: the simplex carried a d-cycle.
                        let k0 = self.diffs[d].kernel.remove(k0_idx);
                        for k in &mut self.diffs[d].kernel {
                            if k.get(o) {
                                k.xor_assign(&k0);
                            }
                        }
                        self.diffs[d].image.substitute_carry(o, &k0);
                        if self.is_tracked(d) {
                            let cols = self.columns_mut(d).expect("tracked");
                            let l = cols.iter().position(|c| c.cycle.get(o)).ok_or_else(|| {
                                Error::Internal {
                                    step: i,
                                    detail: format!("no tracked column supported on {s}"),
                                }
                            })?;
                            let lead = cols[l].cycle.clone();
                            for (j, col) in cols.iter_mut().enumerate() {
                                if j != l && col.cycle.get(o) {
                                    col.cycle.xor_assign(&lead);
                                }
                            }
                            emitted = Some(self.close_column(d, l, i));
                        }
                        self.complex.remove_simplex(&s).expect("applicability checked");
                    }
                    None => {
                        // Birth in H_{d-1}: the boundary of s stops bounding.
                        if d == 0 {
                            return Err(Error::Internal {
                                step: i,
                                detail: "vertex outside the kernel of the zero map".into(),
                            });
                        }
                        let p = d - 1;
                        let supported = self.diffs[d].image.with_carry_bit(o);
                        let (&c0, rest) = supported.split_first().ok_or_else(|| Error::Internal {
                            step: i,
                            detail: format!("image echelon lost the generator {s}"),
                        })?;
                        self.diffs[d].image.fold_and_remove(c0, rest);
                        if self.is_tracked(p) {
                            let bits = self.boundary_bits(&s);
                            let cols = self.columns_mut(p).expect("tracked");
                            cols.insert(0, LiveColumn::new(bits, i));
                        }
                        if self.is_tracked(d) {
                            let cols = self.columns_mut(d).expect("tracked");
                            debug_assert!(
                                cols.iter().all(|c| !c.cycle.get(o)),
                                "no d-cycle may contain a simplex whose removal births below"
                            );
                        }
                        self.complex.remove_simplex(&s).expect("applicability checked");
                    }
                }
            }
        }

        self.step = i;
        self.snapshot_histories(i);
        Ok(emitted)
    }

    fn is_tracked(&self, p: usize) -> bool {
        self.tracked.get(p).is_some_and(Option::is_some)
    }

    fn bits_from_chain(&self, chain: &Z2Chain) -> BitVec {
        let mut bits = BitVec::new();
        for s in chain.support() {
            bits.set(self.complex.ordinal_of(s).expect("chain simplex present"));
        }
        bits
    }

    /// Coefficients `alpha` with `[target] = sum alpha_k [w_k]` modulo the
    /// image echelon of `d_q`, where `target` is already image-reduced.
    /// Unique because the tracked classes are independent.
    fn express_over_basis(&self, p: usize, q: usize, target: &BitVec, step: usize) -> Result<BitVec> {
        let cols = self.tracked[p].as_ref().expect("tracked");
        let rows = self.complex.ordinal_space(p);
        let mut reduced = Z2Matrix::new(rows);
        for col in cols {
            let (r, _) = self.diffs[q].image.reduce(&col.cycle, BitVec::new());
            reduced.push_col(r);
        }
        solve_in_span(&reduced, target).ok_or_else(|| Error::Internal {
            step,
            detail: "death class not expressible over the tracked basis".into(),
        })
    }

    fn close_column(&mut self, p: usize, l: usize, death: usize) -> Interval {
        let col = self
            .tracked[p]
            .as_mut()
            .expect("tracked")
            .remove(l);
        Interval { dimension: p, birth: col.birth, death: Some(death), history: col.history }
    }

    fn snapshot_histories(&mut self, step: usize) {
        for p in 0..self.tracked.len() {
            let Some(cols) = self.tracked[p].as_ref() else { continue };
            let mut changed = Vec::new();
            for (idx, col) in cols.iter().enumerate() {
                if col.cycle != col.snapshot {
                    changed.push((idx, self.chain_from_bits(p, &col.cycle)));
                }
            }
            if changed.is_empty() {
                continue;
            }
            let cols = self.tracked[p].as_mut().expect("tracked");
            for (idx, chain) in changed {
                cols[idx].snapshot = cols[idx].cycle.clone();
                cols[idx].history.push((step, chain));
            }
        }
    }

    /// Consumes the live columns into open intervals, dimension-major.
    #[must_use]
    pub fn drain_open(mut self) -> Vec<Interval> {
        let mut out = Vec::new();
        for p in 0..self.tracked.len() {
            let Some(cols) = self.tracked[p].take() else { continue };
            for col in cols {
                out.push(Interval {
                    dimension: p,
                    birth: col.birth,
                    death: None,
                    history: col.history,
                });
            }
        }
        out
    }
}

/// Classifies one event against the current state without applying it:
/// `(Birth, d)` or `(Death, d-1)` for an addition of a d-simplex, `(Birth,
/// d-1)` or `(Death, d)` for a removal.
pub fn classify(state: &TrackerState, event: &Event) -> Result<(Change, usize)> {
    state.check_applicable(event)?;
    let s = &event.simplex;
    let d = s.dimension();
    let empty = Differential::default();
    let diff = state.diffs.get(d).unwrap_or(&empty);
    match event.kind {
        EventKind::Add => {
            let b = state.boundary_bits(s);
            let (residual, _) = diff.image.reduce(&b, BitVec::new());
            if residual.is_empty() {
                Ok((Change::Birth, d))
            } else {
                Ok((Change::Death, d - 1))
            }
        }
        EventKind::Remove => {
            let o = state.complex.ordinal_of(s).expect("applicability checked");
            if diff.kernel.iter().any(|k| k.get(o)) {
                Ok((Change::Death, d))
            } else if d == 0 {
                Err(Error::Internal {
                    step: event.step,
                    detail: "vertex outside the kernel of the zero map".into(),
                })
            } else {
                Ok((Change::Birth, d - 1))
            }
        }
    }
}

/// Shortest cycle through a not-yet-inserted edge: a breadth-first shortest
/// path between its endpoints in the current 1-skeleton, plus the edge. Ties
/// are broken by expanding neighbors in ascending vertex order and keeping
/// the first-found path.
pub fn shortest_cycle_through(k: &SimplicialComplex, edge: &Simplex) -> Result<Z2Chain> {
    if edge.dimension() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: edge.dimension() });
    }
    if k.contains(edge) {
        return Err(Error::AlreadyPresent { simplex: edge.clone() });
    }
    let (a, b) = (edge.vertices()[0], edge.vertices()[1]);
    for v in [a, b] {
        let vs = Simplex::new(vec![v]);
        if !k.contains(&vs) {
            return Err(Error::NotPresent { simplex: vs });
        }
    }
    let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
    for e in k.simplices(1) {
        let vs = e.vertices();
        adj.entry(vs[0]).or_default().push(vs[1]);
        adj.entry(vs[1]).or_default().push(vs[0]);
    }
    for nbrs in adj.values_mut() {
        nbrs.sort_unstable();
    }
    let mut parent: HashMap<usize, usize> = HashMap::new();
    let mut queue = VecDeque::from([a]);
    parent.insert(a, a);
    'bfs: while let Some(v) = queue.pop_front() {
        if let Some(nbrs) = adj.get(&v) {
            for &w in nbrs {
                if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(w) {
                    e.insert(v);
                    if w == b {
                        break 'bfs;
                    }
                    queue.push_back(w);
                }
            }
        }
    }
    if !parent.contains_key(&b) {
        return Err(Error::Disconnected { edge: edge.clone() });
    }
    let mut cycle = Z2Chain::empty(1);
    cycle.toggle(edge.clone());
    let mut v = b;
    while v != a {
        let u = parent[&v];
        cycle.toggle(Simplex::new(vec![u.min(v), u.max(v)]));
        v = u;
    }
    Ok(cycle)
}

/// Runs a whole stream from the empty complex, tracking the given homology
/// dimensions. The first inapplicable event aborts with its step in the
/// error.
pub fn run(stream: &EventStream, dims: &[usize]) -> Result<TrackedBarcode> {
    let mut state = TrackerState::new(dims);
    let mut closed = Vec::new();
    for event in stream.events() {
        if let Some(interval) = state.step(event)? {
            closed.push(interval);
        }
    }
    Ok(TrackedBarcode { closed, open: state.drain_open(), events: stream.len() })
}
