//! Simplices, Z2 chains, and the mutable complex.
//!
//! Vertices are externally supplied non-negative integers and are never
//! remapped. A complex keeps, per dimension, the live simplices plus a stable
//! ordinal for every simplex ever inserted; ordinals are handed out in
//! insertion order and never reused, which gives every matrix built during a
//! run a reproducible row and column indexing even as simplices come and go.

use std::collections::BTreeSet;
use std::fmt;

use crate::{Error, Result};

/// A simplex as its strictly increasing vertex list.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex {
    vertices: Vec<usize>,
}

impl Simplex {
    /// # Panics
    /// Panics unless the vertex list is non-empty and strictly increasing.
    #[must_use]
    pub fn new<V: Into<Vec<usize>>>(vertices: V) -> Self {
        Self::try_new(vertices.into()).expect("invalid simplex")
    }

    pub fn try_new(vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptySimplex);
        }
        if !vertices.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::UnsortedVertices { vertices });
        }
        Ok(Self { vertices })
    }

    #[must_use]
    pub fn dimension(&self) -> usize {
        self.vertices.len() - 1
    }

    #[must_use]
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Codimension-one faces, obtained by dropping one vertex at a time.
    /// A vertex has no faces.
    #[must_use]
    pub fn faces(&self) -> Vec<Simplex> {
        if self.vertices.len() == 1 {
            return Vec::new();
        }
        (0..self.vertices.len())
            .map(|skip| {
                let vs: Vec<usize> = self
                    .vertices
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != skip)
                    .map(|(_, v)| *v)
                    .collect();
                Simplex { vertices: vs }
            })
            .collect()
    }

    #[must_use]
    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.vertices.iter().all(|v| other.vertices.binary_search(v).is_ok())
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// Formal Z2 sum of simplices of one dimension. Addition is symmetric
/// difference of supports; the dimension is carried explicitly so the empty
/// chain stays typed.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Z2Chain {
    dimension: usize,
    support: BTreeSet<Simplex>,
}

impl Z2Chain {
    #[must_use]
    pub fn empty(dimension: usize) -> Self {
        Self { dimension, support: BTreeSet::new() }
    }

    pub fn from_simplices<I: IntoIterator<Item = Simplex>>(dimension: usize, simplices: I) -> Result<Self> {
        let mut c = Self::empty(dimension);
        for s in simplices {
            if s.dimension() != dimension {
                return Err(Error::DimensionMismatch { expected: dimension, found: s.dimension() });
            }
            c.toggle(s);
        }
        Ok(c)
    }

    #[must_use]
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    #[must_use]
    pub fn support(&self) -> &BTreeSet<Simplex> {
        &self.support
    }

    #[must_use]
    pub fn contains(&self, s: &Simplex) -> bool {
        self.support.contains(s)
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.support.len()
    }

    /// Adds one simplex mod 2.
    ///
    /// # Panics
    /// Panics on a dimension mismatch; use [`Self::from_simplices`] for
    /// fallible construction from unchecked input.
    pub fn toggle(&mut self, s: Simplex) {
        assert_eq!(s.dimension(), self.dimension, "chain dimension mismatch");
        if !self.support.remove(&s) {
            self.support.insert(s);
        }
    }

    pub fn add_assign(&mut self, other: &Z2Chain) {
        assert_eq!(other.dimension, self.dimension, "chain dimension mismatch");
        for s in &other.support {
            self.toggle(s.clone());
        }
    }
}

impl fmt::Debug for Z2Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Z2Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.support.is_empty() {
            return write!(f, "0_{}", self.dimension);
        }
        for (i, s) in self.support.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Boundary of a single simplex: the Z2 sum of its codimension-one faces.
/// The boundary of a vertex is the empty chain in dimension 0 by convention
/// (its "dimension -1" is represented as an empty support at dimension 0 only
/// when the simplex is a vertex; callers treat it as the zero chain).
#[must_use]
pub fn boundary(s: &Simplex) -> Z2Chain {
    let d = s.dimension();
    if d == 0 {
        // Empty chain; dimension field is unused downstream for this case.
        return Z2Chain::empty(0);
    }
    let mut c = Z2Chain::empty(d - 1);
    for f in s.faces() {
        c.toggle(f);
    }
    c
}

/// Boundary of a chain within a complex. Errors if any support simplex is
/// absent from the complex.
pub fn boundary_of_chain(c: &Z2Chain, k: &SimplicialComplex) -> Result<Z2Chain> {
    let mut out = Z2Chain::empty(c.dimension().saturating_sub(1));
    for s in c.support() {
        if !k.contains(s) {
            return Err(Error::MissingSimplex { simplex: s.clone() });
        }
        if s.dimension() > 0 {
            out.add_assign(&boundary(s));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Default)]
struct DimLevel {
    /// Live simplices with their ordinals, iterated in vertex order.
    live: std::collections::BTreeMap<Simplex, usize>,
    /// Every simplex ever assigned an ordinal in this dimension, by ordinal.
    by_ordinal: Vec<Simplex>,
}

/// A finite simplicial complex under single-simplex mutation.
#[derive(Clone, Debug, Default)]
pub struct SimplicialComplex {
    levels: Vec<DimLevel>,
}

impl SimplicialComplex {
    #[must_use]
    pub fn new() -> Self {
        Self::default()
    }

    /// Highest dimension with a live simplex, or `None` when empty.
    #[must_use]
    pub fn dimension(&self) -> Option<usize> {
        self.levels.iter().rposition(|l| !l.live.is_empty())
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.dimension().is_none()
    }

    #[must_use]
    pub fn contains(&self, s: &Simplex) -> bool {
        self.levels
            .get(s.dimension())
            .is_some_and(|l| l.live.contains_key(s))
    }

    #[must_use]
    pub fn count(&self, dimension: usize) -> usize {
        self.levels.get(dimension).map_or(0, |l| l.live.len())
    }

    /// Live simplices of one dimension in vertex order.
    pub fn simplices(&self, dimension: usize) -> impl Iterator<Item = &Simplex> {
        self.levels
            .get(dimension)
            .into_iter()
            .flat_map(|l| l.live.keys())
    }

    /// All live simplices, dimension-major then vertex order.
    pub fn all_simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.levels.iter().flat_map(|l| l.live.keys())
    }

    /// Ordinal of a live simplex. Ordinals count insertions per dimension and
    /// are never reused, so a re-added simplex gets a fresh one.
    #[must_use]
    pub fn ordinal_of(&self, s: &Simplex) -> Option<usize> {
        self.levels.get(s.dimension())?.live.get(s).copied()
    }

    /// Simplex once assigned this ordinal, live or not.
    #[must_use]
    pub fn simplex_with_ordinal(&self, dimension: usize, ordinal: usize) -> Option<&Simplex> {
        self.levels.get(dimension)?.by_ordinal.get(ordinal)
    }

    /// Number of ordinals handed out so far in a dimension.
    #[must_use]
    pub fn ordinal_space(&self, dimension: usize) -> usize {
        self.levels.get(dimension).map_or(0, |l| l.by_ordinal.len())
    }

    /// Inserts a simplex. Errors if it is already present or any of its
    /// codimension-one faces is missing.
    pub fn add_simplex(&mut self, s: Simplex) -> Result<()> {
        if self.contains(&s) {
            return Err(Error::AlreadyPresent { simplex: s });
        }
        for f in s.faces() {
            if !self.contains(&f) {
                return Err(Error::MissingFace { simplex: s, face: f });
            }
        }
        let d = s.dimension();
        if self.levels.len() <= d {
            self.levels.resize_with(d + 1, DimLevel::default);
        }
        let level = &mut self.levels[d];
        let ordinal = level.by_ordinal.len();
        level.by_ordinal.push(s.clone());
        level.live.insert(s, ordinal);
        Ok(())
    }

    /// Removes a simplex. Errors if it is absent or has a live coface.
    pub fn remove_simplex(&mut self, s: &Simplex) -> Result<()> {
        if !self.contains(s) {
            return Err(Error::NotPresent { simplex: s.clone() });
        }
        if let Some(coface) = self.coface_of(s) {
            return Err(Error::NotMaximal { simplex: s.clone(), coface });
        }
        self.levels[s.dimension()].live.remove(s);
        Ok(())
    }

    /// Some live codimension-plus-one coface of `s`, if any.
    #[must_use]
    pub fn coface_of(&self, s: &Simplex) -> Option<Simplex> {
        let d = s.dimension();
        self.levels
            .get(d + 1)
            .and_then(|l| l.live.keys().find(|c| s.is_face_of(c)).cloned())
    }

    /// Neighbors of a vertex in the 1-skeleton, ascending.
    #[must_use]
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for e in self.simplices(1) {
            let vs = e.vertices();
            if vs[0] == v {
                out.push(vs[1]);
            } else if vs[1] == v {
                out.push(vs[0]);
            }
        }
        out.sort_unstable();
        out
    }
}

/// Builds the 2-skeleton clique complex of a symmetric 0/1 adjacency matrix:
/// one vertex per index, edges where the matrix is 1, and a 2-simplex for
/// every triangle of the graph. Diagonal entries are ignored.
pub fn rips_2skeleton(adjacency: &[Vec<u8>]) -> Result<SimplicialComplex> {
    let all = vec![true; adjacency.len()];
    rips_2skeleton_masked(adjacency, &all)
}

/// As [`rips_2skeleton`], but indices with `present[i] == false` contribute
/// no vertex (and hence no edges or triangles).
pub fn rips_2skeleton_masked(adjacency: &[Vec<u8>], present: &[bool]) -> Result<SimplicialComplex> {
    let n = adjacency.len();
    if present.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: present.len() });
    }
    for (i, row) in adjacency.iter().enumerate() {
        if row.len() != n {
            return Err(Error::NotSquare { row: i, len: row.len(), size: n });
        }
        for (j, &x) in row.iter().enumerate() {
            if x != adjacency[j][i] {
                return Err(Error::Asymmetric { i, j });
            }
        }
    }
    let on = |i: usize, j: usize| present[i] && present[j] && i != j && adjacency[i][j] != 0;
    let mut k = SimplicialComplex::new();
    for (v, &p) in present.iter().enumerate() {
        if p {
            k.add_simplex(Simplex::new(vec![v]))?;
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if on(i, j) {
                k.add_simplex(Simplex::new(vec![i, j]))?;
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if !on(i, j) {
                continue;
            }
            for l in (j + 1)..n {
                if on(i, l) && on(j, l) {
                    k.add_simplex(Simplex::new(vec![i, j, l]))?;
                }
            }
        }
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sx(vs: &[usize]) -> Simplex {
        Simplex::new(vs.to_vec())
    }

    #[test]
    fn simplex_validation() {
        assert!(Simplex::try_new(vec![]).is_err());
        assert!(Simplex::try_new(vec![1, 0]).is_err());
        assert!(Simplex::try_new(vec![2, 2]).is_err());
        assert_eq!(sx(&[0, 3, 7]).dimension(), 2);
    }

    #[test]
    fn faces_and_incidence() {
        assert!(sx(&[4]).faces().is_empty());
        assert_eq!(sx(&[0, 1]).faces(), vec![sx(&[1]), sx(&[0])]);
        let t = sx(&[0, 1, 2]);
        assert_eq!(t.faces(), vec![sx(&[1, 2]), sx(&[0, 2]), sx(&[0, 1])]);
        assert!(sx(&[0, 2]).is_face_of(&t));
        assert!(!sx(&[0, 3]).is_face_of(&t));
    }

    #[test]
    fn boundary_examples() {
        assert!(boundary(&sx(&[5])).is_empty());
        let b = boundary(&sx(&[1, 4]));
        assert_eq!(b, Z2Chain::from_simplices(0, vec![sx(&[1]), sx(&[4])]).unwrap());
        let bt = boundary(&sx(&[0, 1, 2]));
        assert_eq!(
            bt,
            Z2Chain::from_simplices(1, vec![sx(&[0, 1]), sx(&[0, 2]), sx(&[1, 2])]).unwrap()
        );
    }

    #[test]
    fn chain_addition_is_symmetric_difference() {
        let mut a = Z2Chain::from_simplices(1, vec![sx(&[0, 1]), sx(&[1, 2])]).unwrap();
        let b = Z2Chain::from_simplices(1, vec![sx(&[1, 2]), sx(&[2, 3])]).unwrap();
        a.add_assign(&b);
        assert_eq!(a, Z2Chain::from_simplices(1, vec![sx(&[0, 1]), sx(&[2, 3])]).unwrap());
        a.add_assign(&a.clone());
        assert!(a.is_empty());
    }

    #[test]
    fn boundary_of_boundary_is_zero() {
        let mut k = SimplicialComplex::new();
        for v in 0..3 {
            k.add_simplex(sx(&[v])).unwrap();
        }
        for e in [[0, 1], [0, 2], [1, 2]] {
            k.add_simplex(sx(&e)).unwrap();
        }
        k.add_simplex(sx(&[0, 1, 2])).unwrap();
        let b = boundary(&sx(&[0, 1, 2]));
        let bb = boundary_of_chain(&b, &k).unwrap();
        assert!(bb.is_empty());
    }

    #[test]
    fn boundary_of_chain_requires_membership() {
        let k = SimplicialComplex::new();
        let c = Z2Chain::from_simplices(1, vec![sx(&[0, 1])]).unwrap();
        assert!(matches!(
            boundary_of_chain(&c, &k),
            Err(Error::MissingSimplex { .. })
        ));
    }

    #[test]
    fn add_remove_rules() {
        let mut k = SimplicialComplex::new();
        assert!(matches!(
            k.add_simplex(sx(&[0, 1])),
            Err(Error::MissingFace { .. })
        ));
        k.add_simplex(sx(&[0])).unwrap();
        k.add_simplex(sx(&[1])).unwrap();
        k.add_simplex(sx(&[0, 1])).unwrap();
        assert!(matches!(
            k.add_simplex(sx(&[0, 1])),
            Err(Error::AlreadyPresent { .. })
        ));
        assert!(matches!(
            k.remove_simplex(&sx(&[0])),
            Err(Error::NotMaximal { .. })
        ));
        k.remove_simplex(&sx(&[0, 1])).unwrap();
        k.remove_simplex(&sx(&[0])).unwrap();
        assert!(matches!(
            k.remove_simplex(&sx(&[0])),
            Err(Error::NotPresent { .. })
        ));
        assert!(k.contains(&sx(&[1])));
    }

    #[test]
    fn ordinals_are_stable_and_never_reused() {
        let mut k = SimplicialComplex::new();
        k.add_simplex(sx(&[0])).unwrap();
        k.add_simplex(sx(&[1])).unwrap();
        assert_eq!(k.ordinal_of(&sx(&[0])), Some(0));
        assert_eq!(k.ordinal_of(&sx(&[1])), Some(1));
        k.remove_simplex(&sx(&[1])).unwrap();
        assert_eq!(k.ordinal_of(&sx(&[1])), None);
        k.add_simplex(sx(&[1])).unwrap();
        assert_eq!(k.ordinal_of(&sx(&[1])), Some(2));
        assert_eq!(k.simplex_with_ordinal(0, 1), Some(&sx(&[1])));
        assert_eq!(k.ordinal_space(0), 3);
    }

    #[test]
    fn rips_examples() {
        // Complete graph on three vertices fills its triangle.
        let adj = vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]];
        let k = rips_2skeleton(&adj).unwrap();
        assert_eq!((k.count(0), k.count(1), k.count(2)), (3, 3, 1));

        // Zero matrix keeps isolated vertices.
        let k = rips_2skeleton(&vec![vec![0; 4]; 4]).unwrap();
        assert_eq!((k.count(0), k.count(1)), (4, 0));

        // Empty input gives the empty complex.
        let k = rips_2skeleton(&[]).unwrap();
        assert!(k.is_empty());

        // Masked node contributes nothing.
        let adj = vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]];
        let k = rips_2skeleton_masked(&adj, &[true, true, false]).unwrap();
        assert_eq!((k.count(0), k.count(1), k.count(2)), (2, 1, 0));

        let bad = vec![vec![0, 1], vec![0, 0]];
        assert!(matches!(rips_2skeleton(&bad), Err(Error::Asymmetric { .. })));
    }

    proptest! {
        #[test]
        fn rips_is_face_closed(entries in proptest::collection::vec(any::<bool>(), 15)) {
            // Build a random symmetric 6x6 matrix from the 15 upper entries.
            let n = 6;
            let mut adj = vec![vec![0u8; n]; n];
            let mut it = entries.into_iter();
            for i in 0..n {
                for j in (i + 1)..n {
                    let b = u8::from(it.next().unwrap());
                    adj[i][j] = b;
                    adj[j][i] = b;
                }
            }
            let k = rips_2skeleton(&adj).unwrap();
            for s in k.all_simplices() {
                for f in s.faces() {
                    prop_assert!(k.contains(&f));
                }
            }
            // Flag property: every triangle of the graph is filled.
            for i in 0..n {
                for j in (i + 1)..n {
                    for l in (j + 1)..n {
                        if adj[i][j] == 1 && adj[i][l] == 1 && adj[j][l] == 1 {
                            prop_assert!(k.contains(&Simplex::new(vec![i, j, l])));
                        }
                    }
                }
            }
        }

        #[test]
        fn add_then_remove_is_identity(seed in 0u64..500) {
            // Grow a small random complex, snapshot, add one applicable
            // simplex, remove it, and compare live contents.
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut k = SimplicialComplex::new();
            for v in 0..4 {
                k.add_simplex(sx(&[v])).unwrap();
            }
            for i in 0..4usize {
                for j in (i + 1)..4 {
                    if rng.random::<bool>() {
                        k.add_simplex(sx(&[i, j])).unwrap();
                    }
                }
            }
            let candidate = sx(&[4]);
            let before: Vec<Simplex> = k.all_simplices().cloned().collect();
            k.add_simplex(candidate.clone()).unwrap();
            k.remove_simplex(&candidate).unwrap();
            let after: Vec<Simplex> = k.all_simplices().cloned().collect();
            prop_assert_eq!(before, after);
        }
    }
}
