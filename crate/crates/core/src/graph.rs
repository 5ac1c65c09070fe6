//! Colored graphs: storage, validation, faces, degree, jackets and canonical encodings.
//!
//! A graph with `2k` vertices is stored as `D+1` permutations of `0..k`:
//! `matchings[c][b]` is the white vertex joined to black vertex `b` by the
//! edge of color `c`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("dimension must be at least 3, got {0}")]
    BadDimension(usize),
    #[error("expected {expected} matchings, got {got}")]
    WrongMatchingCount { expected: usize, got: usize },
    #[error("a graph needs at least one black vertex")]
    Empty,
    #[error("matching of color {0} is not a permutation")]
    NotAPermutation(usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("root out of range")]
    RootOutOfRange,
    #[error("graph is not rooted")]
    NotRooted,
    #[error("open half-edges must be one black and one white half-edge of the same color")]
    BadOpenSet,
    #[error("computed a negative degree ({0})")]
    NegativeDegree(i64),
    #[error("jacket with odd Euler defect")]
    OddEulerDefect,
}

/// The root edge, identified by its black endpoint and its color.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Root {
    pub black: usize,
    pub color: usize,
}

impl Root {
    pub fn new(black: usize, color: usize) -> Self {
        Root { black, color }
    }
}

/// An edge, identified like the root by its black endpoint and its color.
pub type Edge = Root;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Black,
    White,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HalfEdge {
    pub side: Side,
    pub vertex: usize,
    pub color: usize,
}

/// A connected bipartite `(D+1)`-regular edge-colored graph, optionally rooted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredGraph {
    dim: usize,
    matchings: Vec<Vec<usize>>,
    inverse: Vec<Vec<usize>>,
    root: Option<Root>,
}

pub(crate) fn invert(p: &[usize]) -> Vec<usize> {
    let mut q = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        q[x] = i;
    }
    q
}

pub(crate) fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &x in p {
        if x >= p.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

/// Number of cycles of a permutation given as a slice.
pub(crate) fn cycle_count(p: &[usize], seen: &mut Vec<bool>) -> usize {
    seen.clear();
    seen.resize(p.len(), false);
    let mut count = 0;
    for i in 0..p.len() {
        if !seen[i] {
            count += 1;
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                j = p[j];
            }
        }
    }
    count
}

fn cycle_lengths(p: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for i in 0..p.len() {
        if !seen[i] {
            let mut len = 0;
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                j = p[j];
                len += 1;
            }
            out.push(len);
        }
    }
    out
}

/// Connectivity of the bipartite graph given by full matchings (black `i` is node `i`,
/// white `j` is node `k + j`).
pub(crate) fn matchings_connected(matchings: &[Vec<usize>]) -> bool {
    let k = matchings[0].len();
    let mut parent: Vec<usize> = (0..2 * k).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut comps = 2 * k;
    for m in matchings {
        for (b, &w) in m.iter().enumerate() {
            let (x, y) = (find(&mut parent, b), find(&mut parent, k + w));
            if x != y {
                parent[x] = y;
                comps -= 1;
            }
        }
    }
    comps == 1
}

/// Total face count of full matchings.
pub(crate) fn face_count(matchings: &[Vec<usize>], scratch: &mut Vec<bool>) -> usize {
    let d1 = matchings.len();
    let k = matchings[0].len();
    let inverse: Vec<Vec<usize>> = matchings.iter().map(|m| invert(m)).collect();
    let mut p = vec![0; k];
    let mut faces = 0;
    for c in 0..d1 {
        for inv in &inverse[c + 1..d1] {
            for (b, slot) in p.iter_mut().enumerate() {
                *slot = inv[matchings[c][b]];
            }
            faces += cycle_count(&p, scratch);
        }
    }
    faces
}

/// `δ = D(D-1)k/2 + D - F` as a signed integer.
pub(crate) fn degree_from_faces(dim: usize, k: usize, faces: usize) -> i64 {
    (dim * (dim - 1) * k / 2 + dim) as i64 - faces as i64
}

/// Faces of a graph, grouped by color pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceProfile {
    /// For each pair `(c, c')` with `c < c'`, the lengths `2p` of its faces.
    pub pairs: BTreeMap<(usize, usize), Vec<usize>>,
}

impl FaceProfile {
    /// `F`, the total number of faces.
    pub fn total(&self) -> usize {
        self.pairs.values().map(Vec::len).sum()
    }

    /// `F^{cc'}`.
    pub fn count(&self, c: usize, c2: usize) -> usize {
        let key = if c < c2 { (c, c2) } else { (c2, c) };
        self.pairs.get(&key).map_or(0, Vec::len)
    }

    /// `F_p`: number of faces of length `2p`, keyed by `p`.
    pub fn by_half_length(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for len in self.pairs.values().flatten() {
            *out.entry(len / 2).or_insert(0) += 1;
        }
        out
    }
}

/// Outcome of checking the three face identities on one graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FaceIdentities {
    /// `D(D+1)k = Σ 2p F_p`.
    pub eq1: bool,
    /// `D(D-1)k = 2F + 2δ - 2D`, with `δ` taken from the jackets.
    pub eq2: bool,
    /// `(D+1)δ + 2F_1 = D(D+1) + Σ_{p≥2} ((D-1)p - D - 1) F_p`.
    pub eq3: bool,
}

impl FaceIdentities {
    pub fn all(&self) -> bool {
        self.eq1 && self.eq2 && self.eq3
    }
}

impl ColoredGraph {
    /// Validates raw matchings and an optional root.
    pub fn new(dim: usize, matchings: Vec<Vec<usize>>, root: Option<Root>) -> Result<Self, GraphError> {
        if dim < 3 {
            return Err(GraphError::BadDimension(dim));
        }
        if matchings.len() != dim + 1 {
            return Err(GraphError::WrongMatchingCount { expected: dim + 1, got: matchings.len() });
        }
        let k = matchings[0].len();
        if k == 0 {
            return Err(GraphError::Empty);
        }
        for (c, m) in matchings.iter().enumerate() {
            if m.len() != k || !is_permutation(m) {
                return Err(GraphError::NotAPermutation(c));
            }
        }
        if let Some(r) = root {
            if r.black >= k || r.color > dim {
                return Err(GraphError::RootOutOfRange);
            }
        }
        if !matchings_connected(&matchings) {
            return Err(GraphError::Disconnected);
        }
        let inverse = matchings.iter().map(|m| invert(m)).collect();
        Ok(ColoredGraph { dim, matchings, inverse, root })
    }

    /// The two-vertex graph Δ, rooted at color 0.
    pub fn elementary(dim: usize) -> Self {
        ColoredGraph::new(dim, vec![vec![0]; dim + 1], Some(Root::new(0, 0))).expect("valid Δ")
    }

    /// The four-vertex graph made of two `(D-q)`-dipoles and two `(q+1)`-dipoles:
    /// colors `0..D-q` match identically, the remaining `q+1` colors swap. Rooted at `(0, 0)`.
    pub fn square(dim: usize, q: usize) -> Self {
        assert!(q >= 1 && q < dim, "square graph needs 1 <= q <= D-1");
        let m = (0..=dim).map(|c| if c < dim - q { vec![0, 1] } else { vec![1, 0] }).collect();
        ColoredGraph::new(dim, m, Some(Root::new(0, 0))).expect("valid square graph")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of black vertices.
    pub fn k(&self) -> usize {
        self.matchings[0].len()
    }

    pub fn colors(&self) -> std::ops::RangeInclusive<usize> {
        0..=self.dim
    }

    pub fn matchings(&self) -> &[Vec<usize>] {
        &self.matchings
    }

    /// White neighbor of black `b` along color `c`.
    pub fn white(&self, c: usize, b: usize) -> usize {
        self.matchings[c][b]
    }

    /// Black neighbor of white `w` along color `c`.
    pub fn black(&self, c: usize, w: usize) -> usize {
        self.inverse[c][w]
    }

    pub fn root(&self) -> Option<Root> {
        self.root
    }

    pub fn is_root(&self, e: Edge) -> bool {
        self.root == Some(e)
    }

    pub fn with_root(&self, root: Option<Root>) -> Result<Self, GraphError> {
        if let Some(r) = root {
            if r.black >= self.k() || r.color > self.dim {
                return Err(GraphError::RootOutOfRange);
            }
        }
        Ok(ColoredGraph { root, ..self.clone() })
    }

    /// Colors of the edges joining black `b` and white `w`.
    pub fn colors_between(&self, b: usize, w: usize) -> Vec<usize> {
        self.colors().filter(|&c| self.matchings[c][b] == w).collect()
    }

    /// All edges, black endpoint first then color.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.k()).flat_map(move |b| self.colors().map(move |c| Root::new(b, c)))
    }

    pub fn face_profile(&self) -> FaceProfile {
        let mut pairs = BTreeMap::new();
        let k = self.k();
        for c in 0..=self.dim {
            for c2 in c + 1..=self.dim {
                let p: Vec<usize> = (0..k).map(|b| self.inverse[c2][self.matchings[c][b]]).collect();
                pairs.insert((c, c2), cycle_lengths(&p).into_iter().map(|l| 2 * l).collect());
            }
        }
        FaceProfile { pairs }
    }

    pub fn face_count(&self) -> usize {
        face_count(&self.matchings, &mut Vec::new())
    }

    /// The reduced degree `δ = D(D-1)k/2 + D - F`, or an error if it comes out negative.
    pub fn checked_degree(&self) -> Result<usize, GraphError> {
        let d = degree_from_faces(self.dim, self.k(), self.face_count());
        usize::try_from(d).map_err(|_| GraphError::NegativeDegree(d))
    }

    /// The reduced degree. Panics only if the graph data is corrupt, which validation rules out.
    pub fn degree(&self) -> usize {
        self.checked_degree().expect("validated graphs have nonnegative degree")
    }

    /// Degree as the normalized sum of the genera of the `D!` jackets.
    pub fn degree_via_jackets(&self) -> Result<usize, GraphError> {
        let d = self.dim;
        let k = self.k() as i64;
        let profile = self.face_profile();
        let mut genus_sum: i64 = 0;
        let mut jackets = 0usize;
        // cyclic permutations of 0..=D: start at 0, then an ordering of 1..=D
        let rest: Vec<usize> = (1..=d).collect();
        for order in itertools::Itertools::permutations(rest.into_iter(), d) {
            jackets += 1;
            let mut cycle = vec![0];
            cycle.extend(order);
            let faces: i64 = (0..=d).map(|i| profile.count(cycle[i], cycle[(i + 1) % (d + 1)]) as i64).sum();
            let twice_genus = (d as i64 + 1) * k + 2 - 2 * k - faces;
            if twice_genus % 2 != 0 || twice_genus < 0 {
                return Err(GraphError::OddEulerDefect);
            }
            genus_sum += twice_genus / 2;
        }
        debug_assert_eq!(jackets, (1..=d).product::<usize>());
        let norm: i64 = (1..d as i64).product();
        if genus_sum % norm != 0 {
            return Err(GraphError::OddEulerDefect);
        }
        usize::try_from(genus_sum / norm).map_err(|_| GraphError::NegativeDegree(genus_sum / norm))
    }

    pub fn face_identities(&self) -> FaceIdentities {
        let d = self.dim as i64;
        let k = self.k() as i64;
        let profile = self.face_profile();
        let fp = profile.by_half_length();
        let f = profile.total() as i64;
        let eq1 = d * (d + 1) * k == fp.iter().map(|(&p, &n)| 2 * p as i64 * n as i64).sum::<i64>();
        let eq2 = match self.degree_via_jackets() {
            Ok(delta) => d * (d - 1) * k == 2 * f + 2 * delta as i64 - 2 * d,
            Err(_) => false,
        };
        let delta = degree_from_faces(self.dim, self.k(), profile.total());
        let f1 = *fp.get(&1).unwrap_or(&0) as i64;
        let rhs: i64 = d * (d + 1)
            + fp.iter().filter(|(&p, _)| p >= 2).map(|(&p, &n)| ((d - 1) * p as i64 - d - 1) * n as i64).sum::<i64>();
        let eq3 = (d + 1) * delta + 2 * f1 == rhs;
        FaceIdentities { eq1, eq2, eq3 }
    }

    /// Relabels vertices: black `b` becomes `black_perm[b]`, white `w` becomes `white_perm[w]`.
    pub fn relabel(&self, black_perm: &[usize], white_perm: &[usize]) -> ColoredGraph {
        let k = self.k();
        let mut matchings = vec![vec![0; k]; self.dim + 1];
        for c in 0..=self.dim {
            for b in 0..k {
                matchings[c][black_perm[b]] = white_perm[self.matchings[c][b]];
            }
        }
        let inverse = matchings.iter().map(|m| invert(m)).collect();
        let root = self.root.map(|r| Root::new(black_perm[r.black], r.color));
        ColoredGraph { dim: self.dim, matchings, inverse, root }
    }

    /// Breadth-first discovery order from the root's black endpoint, exploring colors in
    /// increasing order. Returns the new index of every black and white vertex.
    pub fn discovery_labels(&self) -> Result<(Vec<usize>, Vec<usize>), GraphError> {
        let root = self.root.ok_or(GraphError::NotRooted)?;
        let k = self.k();
        let mut bid = vec![usize::MAX; k];
        let mut wid = vec![usize::MAX; k];
        let (mut nb, mut nw) = (1, 0);
        bid[root.black] = 0;
        let mut queue = VecDeque::from([(Side::Black, root.black)]);
        while let Some((side, v)) = queue.pop_front() {
            for c in 0..=self.dim {
                match side {
                    Side::Black => {
                        let w = self.matchings[c][v];
                        if wid[w] == usize::MAX {
                            wid[w] = nw;
                            nw += 1;
                            queue.push_back((Side::White, w));
                        }
                    }
                    Side::White => {
                        let b = self.inverse[c][v];
                        if bid[b] == usize::MAX {
                            bid[b] = nb;
                            nb += 1;
                            queue.push_back((Side::Black, b));
                        }
                    }
                }
            }
        }
        Ok((bid, wid))
    }

    /// The relabeled copy whose labels follow the canonical discovery order.
    pub fn canonical_form(&self) -> Result<ColoredGraph, GraphError> {
        let (bid, wid) = self.discovery_labels()?;
        Ok(self.relabel(&bid, &wid))
    }

    /// Relabeling-invariant encoding of a rooted graph. Two rooted graphs share an
    /// encoding iff they are isomorphic by a root- and color-preserving map.
    pub fn canonical_encoding(&self) -> Result<Vec<u8>, GraphError> {
        Ok(self.canonical_form()?.raw_encoding())
    }

    pub(crate) fn raw_encoding(&self) -> Vec<u8> {
        let k = self.k();
        let mut out = Vec::with_capacity(8 + 4 * k * (self.dim + 1));
        out.push(self.dim as u8);
        out.push(self.root.map_or(u8::MAX, |r| r.color as u8));
        out.extend_from_slice(&(k as u32).to_le_bytes());
        for m in &self.matchings {
            for &w in m {
                out.extend_from_slice(&(w as u32).to_le_bytes());
            }
        }
        out
    }

    /// Cuts the root edge into two open half-edges of the same color.
    pub fn open_root(&self) -> Result<PreGraph, GraphError> {
        let root = self.root.ok_or(GraphError::NotRooted)?;
        let mut partial: Vec<Vec<Option<usize>>> =
            self.matchings.iter().map(|m| m.iter().map(|&w| Some(w)).collect()).collect();
        partial[root.color][root.black] = None;
        PreGraph::new(self.dim, partial)
    }

    /// The open pre-graph induced on the given vertices; edges leaving the set become
    /// open half-edges. Vertices are renumbered in increasing order.
    pub fn induced(&self, blacks: &BTreeSet<usize>, whites: &BTreeSet<usize>) -> PreGraph {
        let wnew: BTreeMap<usize, usize> = whites.iter().enumerate().map(|(i, &w)| (w, i)).collect();
        let partial = (0..=self.dim)
            .map(|c| blacks.iter().map(|&b| wnew.get(&self.matchings[c][b]).copied()).collect())
            .collect();
        PreGraph::new(self.dim, partial).expect("induced subgraphs are valid pre-graphs")
    }
}

/// A colored graph with some unmatched half-edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreGraph {
    dim: usize,
    /// `partial[c][b]`: white joined to black `b` by color `c`, if matched.
    partial: Vec<Vec<Option<usize>>>,
    open: BTreeSet<HalfEdge>,
}

impl PreGraph {
    /// Builds a pre-graph from partial matchings; the open set is derived from the
    /// unmatched positions. The number of white vertices equals the number of black ones.
    pub fn new(dim: usize, partial: Vec<Vec<Option<usize>>>) -> Result<Self, GraphError> {
        if partial.len() != dim + 1 {
            return Err(GraphError::WrongMatchingCount { expected: dim + 1, got: partial.len() });
        }
        let k = partial[0].len();
        let mut open = BTreeSet::new();
        for (c, m) in partial.iter().enumerate() {
            if m.len() != k {
                return Err(GraphError::NotAPermutation(c));
            }
            let mut hit = vec![false; k];
            for (b, w) in m.iter().enumerate() {
                match *w {
                    Some(w) if w < k && !hit[w] => hit[w] = true,
                    Some(_) => return Err(GraphError::NotAPermutation(c)),
                    None => {
                        open.insert(HalfEdge { side: Side::Black, vertex: b, color: c });
                    }
                }
            }
            for (w, h) in hit.iter().enumerate() {
                if !h {
                    open.insert(HalfEdge { side: Side::White, vertex: w, color: c });
                }
            }
        }
        Ok(PreGraph { dim, partial, open })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn k(&self) -> usize {
        self.partial[0].len()
    }

    pub fn partial(&self) -> &[Vec<Option<usize>>] {
        &self.partial
    }

    pub fn open(&self) -> &BTreeSet<HalfEdge> {
        &self.open
    }

    /// The two open half-edges if they are one black and one white of the same color.
    pub fn open_pair(&self) -> Option<(HalfEdge, HalfEdge)> {
        if self.open.len() != 2 {
            return None;
        }
        let mut it = self.open.iter();
        let (a, b) = (*it.next()?, *it.next()?);
        let (black, white) = match (a.side, b.side) {
            (Side::Black, Side::White) => (a, b),
            (Side::White, Side::Black) => (b, a),
            _ => return None,
        };
        (black.color == white.color).then_some((black, white))
    }

    /// Joins the two open half-edges into the root edge.
    pub fn close(&self) -> Result<ColoredGraph, GraphError> {
        let (black, white) = self.open_pair().ok_or(GraphError::BadOpenSet)?;
        let mut matchings: Vec<Vec<usize>> =
            self.partial.iter().map(|m| m.iter().map(|w| w.unwrap_or(usize::MAX)).collect()).collect();
        matchings[black.color][black.vertex] = white.vertex;
        ColoredGraph::new(self.dim, matchings, Some(Root::new(black.vertex, black.color)))
    }
}

/// Structured-text form of a graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphRecord {
    pub dim: usize,
    pub k: usize,
    pub matchings: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<Root>,
}

impl GraphRecord {
    pub fn validate(self) -> Result<ColoredGraph, GraphError> {
        validate(self)
    }
}

impl From<&ColoredGraph> for GraphRecord {
    fn from(g: &ColoredGraph) -> Self {
        GraphRecord { dim: g.dim, k: g.k(), matchings: g.matchings.clone(), root: g.root }
    }
}

/// Validates candidate graph data.
pub fn validate(raw: GraphRecord) -> Result<ColoredGraph, GraphError> {
    if raw.matchings.iter().any(|m| m.len() != raw.k) {
        let c = raw.matchings.iter().position(|m| m.len() != raw.k).unwrap_or(0);
        return Err(GraphError::NotAPermutation(c));
    }
    ColoredGraph::new(raw.dim, raw.matchings, raw.root)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elementary_graph_has_degree_zero() {
        let g = ColoredGraph::elementary(3);
        let p = g.face_profile();
        assert_eq!(p.total(), 6);
        assert_eq!(p.by_half_length().get(&1), Some(&6));
        assert_eq!(g.degree(), 0);
        assert_eq!(g.degree_via_jackets().unwrap(), 0);
    }

    #[test]
    fn validation_errors() {
        let id = vec![0, 1];
        let r = ColoredGraph::new(3, vec![id.clone(); 4], None);
        assert_eq!(r, Err(GraphError::Disconnected));
        let r = ColoredGraph::new(3, vec![vec![0, 0], id.clone(), id.clone(), id.clone()], None);
        assert_eq!(r, Err(GraphError::NotAPermutation(0)));
        let r = ColoredGraph::new(3, vec![vec![0]; 4], Some(Root::new(1, 0)));
        assert_eq!(r, Err(GraphError::RootOutOfRange));
    }

    #[test]
    fn square_graph_faces_and_degree() {
        let g = ColoredGraph::square(3, 1);
        let p = g.face_profile();
        for (&(c, c2), lens) in &p.pairs {
            let same_block = (c < 2) == (c2 < 2);
            let expect = if same_block { vec![2, 2] } else { vec![4] };
            assert_eq!(lens, &expect, "pair ({c},{c2})");
        }
        assert_eq!(g.degree(), 1);
        assert_eq!(g.degree_via_jackets().unwrap(), 1);
        assert_eq!(ColoredGraph::square(4, 1).degree(), 2);
        assert!(g.face_identities().all());
    }

    #[test]
    fn open_and_close_round_trip() {
        let g = ColoredGraph::square(3, 1);
        let p = g.open_root().unwrap();
        assert_eq!(p.open().len(), 2);
        assert_eq!(p.close().unwrap(), g);
        let bad = PreGraph::new(3, vec![vec![None], vec![Some(0)], vec![Some(0)], vec![Some(0)]]).unwrap();
        assert_eq!(bad.open().len(), 2);
        assert_eq!(bad.close().unwrap(), ColoredGraph::elementary(3));
        let mixed = PreGraph::new(3, vec![vec![None], vec![Some(0)], vec![Some(0)], vec![Some(0)]])
            .map(|mut p| {
                p.open = [
                    HalfEdge { side: Side::Black, vertex: 0, color: 0 },
                    HalfEdge { side: Side::White, vertex: 0, color: 1 },
                ]
                .into();
                p
            })
            .unwrap();
        assert_eq!(mixed.close(), Err(GraphError::BadOpenSet));
    }

    #[test]
    fn encoding_ignores_labels() {
        let g = ColoredGraph::square(3, 1);
        let h = g.relabel(&[1, 0], &[1, 0]);
        assert_eq!(g.canonical_encoding().unwrap(), h.canonical_encoding().unwrap());
        let d = ColoredGraph::elementary(3);
        assert_eq!(d.canonical_encoding().unwrap(), d.canonical_form().unwrap().raw_encoding());
    }

    #[test]
    fn record_rejects_unknown_fields() {
        let ok: GraphRecord = serde_json::from_str(r#"{"dim":3,"k":1,"matchings":[[0],[0],[0],[0]]}"#).unwrap();
        assert!(ok.validate().is_ok());
        let bad = serde_json::from_str::<GraphRecord>(r#"{"dim":3,"k":1,"matchings":[[0],[0],[0],[0]],"x":1}"#);
        assert!(bad.is_err());
    }
}
