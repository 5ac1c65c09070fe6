//! Dipoles, chains of (D−1)-dipoles, twisters and schemes.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{ColoredGraph, GraphError, HalfEdge, Root, Side};
use crate::reduction::is_melon_free;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemeError {
    #[error("graph is not melon-free")]
    NotMelonFree,
    #[error("malformed scheme: {0}")]
    Malformed(String),
    #[error("chain {index}: color sequence {colors:?} does not realize {kind}")]
    BadSequence { index: usize, colors: Vec<usize>, kind: ChainKind },
    #[error("expected {expected} color sequences, got {got}")]
    SequenceCount { expected: usize, got: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A pair of vertices sharing exactly `D − q` parallel edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dipole {
    pub black: usize,
    pub white: usize,
    pub q: usize,
    /// The `q + 1` colors not carried by the parallel edges.
    pub external: Vec<usize>,
}

/// All `(D−q)`-dipoles of `g`.
pub fn find_dipoles(g: &ColoredGraph, q: usize) -> Vec<Dipole> {
    let d = g.dim();
    if q > d {
        return Vec::new();
    }
    let mut out = Vec::new();
    for b in 0..g.k() {
        let mut seen = BTreeSet::new();
        for c in g.colors() {
            let w = g.white(c, b);
            if !seen.insert(w) {
                continue;
            }
            let shared = g.colors_between(b, w);
            if shared.len() == d - q {
                let external = g.colors().filter(|x| !shared.contains(x)).collect();
                out.push(Dipole { black: b, white: w, q, external });
            }
        }
    }
    out
}

/// Shape of a maximal proper chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainKind {
    /// End colors `(i, j)`, possibly equal.
    Broken(usize, usize),
    /// End colors `i ≠ j`; odd length.
    UnbrokenDistinct(usize, usize),
    /// Both ends of color `color`; even length.
    UnbrokenEqual { color: usize, secondary: usize },
    /// Crossed external colors; never contracted.
    Twister(usize, usize),
}

impl ChainKind {
    /// Colors of the left and right external half-edge pairs.
    pub fn ends(&self) -> [usize; 2] {
        match *self {
            ChainKind::Broken(i, j) | ChainKind::UnbrokenDistinct(i, j) | ChainKind::Twister(i, j) => [i, j],
            ChainKind::UnbrokenEqual { color, .. } => [color, color],
        }
    }

    pub fn reversed(&self) -> ChainKind {
        match *self {
            ChainKind::Broken(i, j) => ChainKind::Broken(j, i),
            ChainKind::UnbrokenDistinct(i, j) => ChainKind::UnbrokenDistinct(j, i),
            ChainKind::Twister(i, j) => ChainKind::Twister(j, i),
            k @ ChainKind::UnbrokenEqual { .. } => k,
        }
    }

    pub fn is_broken(&self) -> bool {
        matches!(self, ChainKind::Broken(..))
    }

    /// Kind of a straight chain with link colors `c_0, …, c_p`.
    pub fn from_colors(colors: &[usize]) -> Option<ChainKind> {
        if colors.len() < 2 || colors.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        let (a, b) = (colors[0], colors[1]);
        let alternating = colors.iter().enumerate().all(|(t, &c)| c == if t % 2 == 0 { a } else { b });
        let last = *colors.last().expect("nonempty");
        Some(if !alternating {
            ChainKind::Broken(a, last)
        } else if colors.len().is_multiple_of(2) {
            ChainKind::UnbrokenDistinct(a, b)
        } else {
            ChainKind::UnbrokenEqual { color: a, secondary: b }
        })
    }

    /// Shortest link-color sequence of this kind in dimension `dim`.
    pub fn minimal_colors(&self, dim: usize) -> Vec<usize> {
        let others = |avoid: &[usize]| (0..=dim).filter(|c| !avoid.contains(c)).collect::<Vec<_>>().into_iter();
        match *self {
            ChainKind::Broken(i, j) if i != j => {
                let k = others(&[i, j]).next().expect("D >= 2");
                vec![i, k, j]
            }
            ChainKind::Broken(i, _) => {
                let mut o = others(&[i]);
                let (k, l) = (o.next().expect("D >= 2"), o.next().expect("D >= 2"));
                vec![i, k, l, i]
            }
            ChainKind::UnbrokenDistinct(i, j) => vec![i, j, i, j],
            ChainKind::UnbrokenEqual { color, secondary } => vec![color, secondary, color],
            ChainKind::Twister(i, j) => vec![i, j, i],
        }
    }

    fn code(&self) -> [u32; 4] {
        match *self {
            ChainKind::Broken(i, j) => [0, i as u32, j as u32, 0],
            ChainKind::UnbrokenDistinct(i, j) => [1, i as u32, j as u32, 0],
            ChainKind::UnbrokenEqual { color, secondary } => [2, color as u32, color as u32, secondary as u32],
            ChainKind::Twister(i, j) => [3, i as u32, j as u32, 0],
        }
    }
}

impl fmt::Display for ChainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainKind::Broken(i, j) => write!(f, "broken({i},{j})"),
            ChainKind::UnbrokenDistinct(i, j) => write!(f, "unbroken({i},{j})"),
            ChainKind::UnbrokenEqual { color, secondary } => write!(f, "unbroken({color},{color};{secondary})"),
            ChainKind::Twister(i, j) => write!(f, "twister({i},{j})"),
        }
    }
}

/// A sequence of (D−1)-dipoles, consecutive ones sharing two edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    /// `(black, white)` of `d_1, …, d_p`.
    pub dipoles: Vec<(usize, usize)>,
    /// `c_0, …, c_p`: `c_0` is the left external color, `c_t` links `d_t` to `d_{t+1}`,
    /// `c_p` the right external color. For twisters, only `c_0` and `c_1` alternate.
    pub colors: Vec<usize>,
    pub twister: bool,
}

impl Chain {
    pub fn len(&self) -> usize {
        self.dipoles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dipoles.is_empty()
    }

    /// `(ℓ∘, ℓ•)`.
    pub fn left(&self) -> (HalfEdge, HalfEdge) {
        let (b, w) = self.dipoles[0];
        let c = self.colors[0];
        (HalfEdge { side: Side::White, vertex: w, color: c }, HalfEdge { side: Side::Black, vertex: b, color: c })
    }

    /// `(r∘, r•)`.
    pub fn right(&self) -> (HalfEdge, HalfEdge) {
        let (b, w) = *self.dipoles.last().expect("nonempty chain");
        let c = *self.colors.last().expect("nonempty chain");
        (HalfEdge { side: Side::White, vertex: w, color: c }, HalfEdge { side: Side::Black, vertex: b, color: c })
    }

    pub fn kind(&self) -> ChainKind {
        if self.twister {
            return ChainKind::Twister(self.colors[0], self.colors[1]);
        }
        ChainKind::from_colors(&self.colors).expect("chain colors never repeat consecutively")
    }

    fn vertices(&self) -> impl Iterator<Item = (Side, usize)> + '_ {
        self.dipoles.iter().flat_map(|&(b, w)| [(Side::Black, b), (Side::White, w)])
    }
}

/// Whether two vertices lie on the same face of colors `(i, k)`.
pub fn same_face(g: &ColoredGraph, black: usize, white: usize, i: usize, k: usize) -> bool {
    let mut b = black;
    loop {
        let w = g.white(i, b);
        if w == white {
            return true;
        }
        let w2 = g.white(k, b);
        if w2 == white {
            return true;
        }
        b = g.black(k, w);
        if b == black {
            return false;
        }
    }
}

/// The face-based broken test: `ℓ∘` and `ℓ•` share every `(c_0, k)` face.
pub fn broken_by_faces(g: &ColoredGraph, chain: &Chain) -> bool {
    let (b, w) = chain.dipoles[0];
    let i = chain.colors[0];
    g.colors().filter(|&k| k != i).all(|k| same_face(g, b, w, i, k))
}

/// Classification read off the faces of the surrounding graph. Agrees with
/// [`Chain::kind`] on non-alternating chains; an alternating chain can pass the
/// broken test through faces that leave it and come back.
pub fn classify_by_faces(g: &ColoredGraph, chain: &Chain) -> ChainKind {
    if chain.twister {
        return chain.kind();
    }
    let [i, j] = [chain.colors[0], *chain.colors.last().expect("nonempty")];
    if broken_by_faces(g, chain) {
        return ChainKind::Broken(i, j);
    }
    if i != j {
        return ChainKind::UnbrokenDistinct(i, j);
    }
    let (b, w) = chain.dipoles[0];
    let secondary = g.colors().find(|&k| k != i && !same_face(g, b, w, i, k)).expect("not broken");
    ChainKind::UnbrokenEqual { color: i, secondary }
}

struct Candidates {
    pairs: Vec<(usize, usize)>,
    external: Vec<[usize; 2]>,
    index: HashMap<(usize, usize), usize>,
}

fn candidates(g: &ColoredGraph) -> Candidates {
    let root = g.root();
    let mut pairs = Vec::new();
    let mut external = Vec::new();
    for d in find_dipoles(g, 1) {
        if let Some(r) = root {
            if r.black == d.black && g.white(r.color, r.black) == d.white && !d.external.contains(&r.color) {
                continue;
            }
        }
        pairs.push((d.black, d.white));
        external.push([d.external[0], d.external[1]]);
    }
    let index = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    Candidates { pairs, external, index }
}

impl Candidates {
    /// Neighbor reached through black color `cb` and white color `cw`.
    fn link(&self, g: &ColoredGraph, i: usize, cb: usize, cw: usize) -> Option<usize> {
        let (b, w) = self.pairs[i];
        let w2 = g.white(cb, b);
        let b2 = g.black(cw, w);
        if g.is_root(Root::new(b, cb)) || g.is_root(Root::new(b2, cw)) {
            return None;
        }
        let j = *self.index.get(&(b2, w2))?;
        (j != i).then_some(j)
    }
}

/// Maximal paths in a graph of maximum degree two.
fn maximal_paths(n: usize, adj: &[Vec<(usize, usize)>]) -> Vec<Vec<usize>> {
    let mut used = vec![false; n];
    let mut paths = Vec::new();
    for start in 0..n {
        if used[start] || adj[start].len() == 2 {
            continue;
        }
        let mut path = vec![start];
        used[start] = true;
        let mut cur = start;
        while let Some(&(next, _)) = adj[cur].iter().find(|(x, _)| !used[*x]) {
            used[next] = true;
            path.push(next);
            cur = next;
        }
        paths.push(path);
    }
    assert!(used.iter().all(|&u| u), "a closed ring of dipoles cannot avoid the root");
    paths
}

/// All maximal proper chains of a melon-free rooted graph, pairwise vertex-disjoint.
pub fn find_maximal_proper_chains(g: &ColoredGraph) -> Vec<Chain> {
    straight_or_crossed(g, false)
}

/// Maximal twisters with at least two dipoles.
pub fn find_twisters(g: &ColoredGraph) -> Vec<Chain> {
    straight_or_crossed(g, true)
}

fn straight_or_crossed(g: &ColoredGraph, crossed: bool) -> Vec<Chain> {
    let cand = candidates(g);
    let n = cand.pairs.len();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (i, row) in adj.iter_mut().enumerate() {
        let [a, a2] = cand.external[i];
        let tries = if crossed { [(a, a2), (a2, a)] } else { [(a, a), (a2, a2)] };
        for (cb, cw) in tries {
            if let Some(j) = cand.link(g, i, cb, cw) {
                row.push((j, cb));
            }
        }
    }
    let mut chains = Vec::new();
    for path in maximal_paths(n, &adj) {
        let mut path = path;
        if !crossed {
            trim(g, &cand, &mut path);
        }
        if path.len() < 2 {
            continue;
        }
        chains.push(build_chain(g, &cand, &path, crossed));
    }
    let mut seen = BTreeSet::new();
    for ch in &chains {
        for v in ch.vertices() {
            assert!(seen.insert(v), "maximal proper chains share a vertex");
        }
    }
    chains
}

/// Left and right external colors of a path of straight-linked candidates.
fn end_colors(g: &ColoredGraph, cand: &Candidates, path: &[usize]) -> (usize, usize) {
    let other = |i: usize, used: usize| {
        let [a, b] = cand.external[i];
        if a == used { b } else { a }
    };
    if path.len() == 1 {
        let [a, b] = cand.external[path[0]];
        return (a, b);
    }
    let link = |x: usize, y: usize| link_color(g, cand.pairs[x], cand.pairs[y]);
    let first = other(path[0], link(path[0], path[1]));
    let p = path.len();
    let last = other(path[p - 1], link(path[p - 1], path[p - 2]));
    (first, last)
}

/// Color of the two edges joining consecutive dipoles of a straight chain.
fn link_color(g: &ColoredGraph, (bx, wx): (usize, usize), (by, wy): (usize, usize)) -> usize {
    g.colors().find(|&c| g.white(c, bx) == wy && g.black(c, wx) == by).expect("linked")
}

/// Drops end dipoles while two external half-edges are joined by a non-root edge.
fn trim(g: &ColoredGraph, cand: &Candidates, path: &mut Vec<usize>) {
    while path.len() >= 2 {
        let (c0, cp) = end_colors(g, cand, path);
        let (b1, w1) = cand.pairs[path[0]];
        let (bp, wp) = cand.pairs[*path.last().expect("nonempty")];
        if c0 == cp && g.black(c0, w1) == bp && !g.is_root(Root::new(bp, c0)) {
            path.pop();
        } else if c0 == cp && g.white(c0, b1) == wp && !g.is_root(Root::new(b1, c0)) {
            path.remove(0);
        } else {
            break;
        }
    }
}

fn build_chain(g: &ColoredGraph, cand: &Candidates, path: &[usize], crossed: bool) -> Chain {
    let dipoles: Vec<(usize, usize)> = path.iter().map(|&i| cand.pairs[i]).collect();
    let mut colors = Vec::with_capacity(path.len() + 1);
    let (c0, cp) = end_colors(g, cand, path);
    colors.push(c0);
    for t in 0..path.len() - 1 {
        colors.push(link_color(g, dipoles[t], dipoles[t + 1]));
    }
    colors.push(cp);
    Chain { dipoles, colors, twister: crossed }
}

/// A black endpoint in a scheme: a regular black vertex, or the black port at one
/// end of a chain-vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BlackEnd {
    Regular(usize),
    Port(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum WhiteEnd {
    Regular(usize),
    Port(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SchemeEdge {
    pub black: BlackEnd,
    pub white: WhiteEnd,
    pub color: usize,
}

/// Regular vertices and chain-vertices joined by colored edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scheme {
    dim: usize,
    regular: usize,
    chains: Vec<ChainKind>,
    edges: Vec<SchemeEdge>,
    root: (BlackEnd, usize),
}

/// `(p, b₌, b≠, c₌, c≠)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Signature {
    pub p: usize,
    pub broken_equal: usize,
    pub broken_distinct: usize,
    pub unbroken_equal: usize,
    pub unbroken_distinct: usize,
}

impl Signature {
    pub fn broken(&self) -> usize {
        self.broken_equal + self.broken_distinct
    }

    pub fn unbroken(&self) -> usize {
        self.unbroken_equal + self.unbroken_distinct
    }
}

impl Scheme {
    /// Builds and checks a scheme. Every black end carries exactly one edge of each of
    /// its colors, and likewise for white ends.
    pub fn new(
        dim: usize,
        regular: usize,
        chains: Vec<ChainKind>,
        mut edges: Vec<SchemeEdge>,
        root: (BlackEnd, usize),
    ) -> Result<Scheme, SchemeError> {
        let bad = |m: String| Err(SchemeError::Malformed(m));
        if dim < 2 {
            return Err(GraphError::BadDimension(dim).into());
        }
        if chains.iter().any(|k| matches!(k, ChainKind::Twister(..))) {
            return bad("twisters are not chain-vertices".into());
        }
        let mut expected_black: BTreeSet<(BlackEnd, usize)> = BTreeSet::new();
        let mut expected_white: BTreeSet<(WhiteEnd, usize)> = BTreeSet::new();
        for v in 0..regular {
            for c in 0..=dim {
                expected_black.insert((BlackEnd::Regular(v), c));
                expected_white.insert((WhiteEnd::Regular(v), c));
            }
        }
        for (v, kind) in chains.iter().enumerate() {
            let ends = kind.ends();
            if ends.iter().any(|&c| c > dim) {
                return bad(format!("chain-vertex {v} color out of range"));
            }
            for (e, &c) in ends.iter().enumerate() {
                expected_black.insert((BlackEnd::Port(v, e), c));
                expected_white.insert((WhiteEnd::Port(v, e), c));
            }
        }
        let mut got_black = BTreeSet::new();
        let mut got_white = BTreeSet::new();
        for e in &edges {
            if !got_black.insert((e.black, e.color)) || !got_white.insert((e.white, e.color)) {
                return bad(format!("duplicate edge end in {e:?}"));
            }
        }
        if got_black != expected_black || got_white != expected_white {
            return bad("edge ends do not match vertex colors".into());
        }
        if !expected_black.contains(&root) {
            return bad("root is not an edge".into());
        }
        edges.sort();
        let s = Scheme { dim, regular, chains, edges, root };
        s.realize_minimal()?;
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of regular black vertices.
    pub fn regular(&self) -> usize {
        self.regular
    }

    pub fn chains(&self) -> &[ChainKind] {
        &self.chains
    }

    pub fn edges(&self) -> &[SchemeEdge] {
        &self.edges
    }

    pub fn root(&self) -> (BlackEnd, usize) {
        self.root
    }

    pub fn signature(&self) -> Signature {
        let mut s = Signature { p: self.regular, broken_equal: 0, broken_distinct: 0, unbroken_equal: 0, unbroken_distinct: 0 };
        for k in &self.chains {
            match k {
                ChainKind::Broken(i, j) if i == j => s.broken_equal += 1,
                ChainKind::Broken(..) => s.broken_distinct += 1,
                ChainKind::UnbrokenEqual { .. } => s.unbroken_equal += 1,
                ChainKind::UnbrokenDistinct(..) => s.unbroken_distinct += 1,
                ChainKind::Twister(..) => unreachable!("rejected at construction"),
            }
        }
        s
    }

    /// Substitutes a chain with link colors `seqs[v]` for every chain-vertex `v`.
    /// Regular vertices keep their labels; chain dipoles follow in order.
    pub fn realize(&self, seqs: &[Vec<usize>]) -> Result<ColoredGraph, SchemeError> {
        if seqs.len() != self.chains.len() {
            return Err(SchemeError::SequenceCount { expected: self.chains.len(), got: seqs.len() });
        }
        let mut offsets = Vec::with_capacity(seqs.len());
        let mut k = self.regular;
        for (index, (seq, kind)) in seqs.iter().zip(&self.chains).enumerate() {
            if ChainKind::from_colors(seq) != Some(*kind) || seq.iter().any(|&c| c > self.dim) {
                return Err(SchemeError::BadSequence { index, colors: seq.clone(), kind: *kind });
            }
            offsets.push(k);
            k += seq.len() - 1;
        }
        let mut m = vec![vec![usize::MAX; k]; self.dim + 1];
        for (seq, &off) in seqs.iter().zip(&offsets) {
            let p = seq.len() - 1;
            for t in 0..p {
                let (ca, cb) = (seq[t], seq[t + 1]);
                for (c, row) in m.iter_mut().enumerate() {
                    if c != ca && c != cb {
                        row[off + t] = off + t;
                    }
                }
                if t + 1 < p {
                    m[cb][off + t] = off + t + 1;
                    m[cb][off + t + 1] = off + t;
                }
            }
        }
        let black_of = |e: BlackEnd| match e {
            BlackEnd::Regular(b) => b,
            BlackEnd::Port(v, 0) => offsets[v],
            BlackEnd::Port(v, _) => offsets[v] + seqs[v].len() - 2,
        };
        let white_of = |e: WhiteEnd| match e {
            WhiteEnd::Regular(w) => w,
            WhiteEnd::Port(v, 0) => offsets[v],
            WhiteEnd::Port(v, _) => offsets[v] + seqs[v].len() - 2,
        };
        for e in &self.edges {
            m[e.color][black_of(e.black)] = white_of(e.white);
        }
        let root = Root::new(black_of(self.root.0), self.root.1);
        Ok(ColoredGraph::new(self.dim, m, Some(root))?)
    }

    pub fn minimal_sequences(&self) -> Vec<Vec<usize>> {
        self.chains.iter().map(|k| k.minimal_colors(self.dim)).collect()
    }

    /// The realization with every chain-vertex replaced by a shortest chain.
    pub fn realize_minimal(&self) -> Result<ColoredGraph, SchemeError> {
        self.realize(&self.minimal_sequences())
    }

    /// Degree shared by all realizations.
    pub fn degree(&self) -> usize {
        self.realize_minimal().expect("validated at construction").degree()
    }

    /// Vertex count of the minimal realization.
    pub fn minimal_vertices(&self) -> usize {
        2 * (self.regular + self.chains.iter().map(|k| k.minimal_colors(self.dim).len() - 1).sum::<usize>())
    }

    /// Relabels so that labels follow breadth-first discovery from the root, with each
    /// chain-vertex oriented by the end through which it is first reached.
    pub fn canonical_form(&self) -> Scheme {
        let by_black: HashMap<(BlackEnd, usize), WhiteEnd> =
            self.edges.iter().map(|e| ((e.black, e.color), e.white)).collect();
        let by_white: HashMap<(WhiteEnd, usize), BlackEnd> =
            self.edges.iter().map(|e| ((e.white, e.color), e.black)).collect();
        let mut lab = Labeler::new(self.regular, self.chains.len());
        lab.black(self.root.0);
        while let Some(node) = lab.queue.pop_front() {
            match node {
                Node::B(b) => {
                    for c in 0..=self.dim {
                        lab.white(by_black[&(BlackEnd::Regular(b), c)]);
                    }
                }
                Node::W(w) => {
                    for c in 0..=self.dim {
                        lab.black(by_white[&(WhiteEnd::Regular(w), c)]);
                    }
                }
                Node::V(v) => {
                    let entry = lab.vid[v].expect("discovered").1;
                    let ends = self.chains[v].ends();
                    for end in [entry, 1 - entry] {
                        let c = ends[end];
                        lab.white(by_black[&(BlackEnd::Port(v, end), c)]);
                        lab.black(by_white[&(WhiteEnd::Port(v, end), c)]);
                    }
                }
            }
        }
        let Labeler { bid, wid, vid, .. } = lab;
        let vmap: Vec<(usize, usize)> = vid.iter().map(|x| x.expect("schemes are connected")).collect();
        let mut chains = vec![ChainKind::Broken(0, 0); self.chains.len()];
        for (v, &(nv, entry)) in vmap.iter().enumerate() {
            chains[nv] = if entry == 0 { self.chains[v] } else { self.chains[v].reversed() };
        }
        let map_b = |e: BlackEnd| match e {
            BlackEnd::Regular(b) => BlackEnd::Regular(bid[b]),
            BlackEnd::Port(v, end) => BlackEnd::Port(vmap[v].0, end ^ vmap[v].1),
        };
        let map_w = |e: WhiteEnd| match e {
            WhiteEnd::Regular(w) => WhiteEnd::Regular(wid[w]),
            WhiteEnd::Port(v, end) => WhiteEnd::Port(vmap[v].0, end ^ vmap[v].1),
        };
        let mut edges: Vec<SchemeEdge> =
            self.edges.iter().map(|e| SchemeEdge { black: map_b(e.black), white: map_w(e.white), color: e.color }).collect();
        edges.sort();
        Scheme { dim: self.dim, regular: self.regular, chains, edges, root: (map_b(self.root.0), self.root.1) }
    }

    /// Relabeling-invariant encoding: equal iff the schemes are isomorphic by a map
    /// preserving root, colors and chain kinds.
    pub fn canonical_encoding(&self) -> Vec<u8> {
        let c = self.canonical_form();
        let mut words: Vec<u32> = vec![c.dim as u32, c.regular as u32, c.chains.len() as u32];
        for k in &c.chains {
            words.extend(k.code());
        }
        let code_b = |e: BlackEnd| match e {
            BlackEnd::Regular(b) => [0, b as u32, 0],
            BlackEnd::Port(v, end) => [1, v as u32, end as u32],
        };
        let code_w = |e: WhiteEnd| match e {
            WhiteEnd::Regular(w) => [0, w as u32, 0],
            WhiteEnd::Port(v, end) => [1, v as u32, end as u32],
        };
        words.extend(code_b(c.root.0));
        words.push(c.root.1 as u32);
        for e in &c.edges {
            words.extend(code_b(e.black));
            words.extend(code_w(e.white));
            words.push(e.color as u32);
        }
        words.iter().flat_map(|w| w.to_le_bytes()).collect()
    }

    /// Interchange record: the minimal realization plus the chain dipoles in it.
    pub fn to_record(&self) -> SchemeRecord {
        let g = self.realize_minimal().expect("validated at construction");
        let mut off = self.regular;
        let chain_vertices = self
            .chains
            .iter()
            .map(|kind| {
                let seq = kind.minimal_colors(self.dim);
                let p = seq.len() - 1;
                let dipoles = (off..off + p).map(|i| [i, i]).collect();
                off += p;
                let (kind_name, secondary) = match kind {
                    ChainKind::Broken(..) => ("broken", None),
                    ChainKind::UnbrokenDistinct(..) => ("unbroken_distinct", None),
                    ChainKind::UnbrokenEqual { secondary, .. } => ("unbroken_equal", Some(*secondary)),
                    ChainKind::Twister(..) => unreachable!("rejected at construction"),
                };
                ChainVertexRecord { kind: kind_name.to_string(), colors: kind.ends(), secondary, dipoles }
            })
            .collect();
        SchemeRecord {
            dim: self.dim,
            k: g.k(),
            matchings: g.matchings().to_vec(),
            root: g.root(),
            chain_vertices,
        }
    }
}

#[derive(Clone, Copy)]
enum Node {
    B(usize),
    W(usize),
    V(usize),
}

/// Breadth-first discovery state for scheme canonicalization.
struct Labeler {
    bid: Vec<usize>,
    wid: Vec<usize>,
    /// New index and entry end of every chain-vertex.
    vid: Vec<Option<(usize, usize)>>,
    counts: [usize; 3],
    queue: VecDeque<Node>,
}

impl Labeler {
    fn new(regular: usize, chains: usize) -> Self {
        Labeler {
            bid: vec![usize::MAX; regular],
            wid: vec![usize::MAX; regular],
            vid: vec![None; chains],
            counts: [0; 3],
            queue: VecDeque::new(),
        }
    }

    fn chain(&mut self, v: usize, end: usize) {
        if self.vid[v].is_none() {
            self.vid[v] = Some((self.counts[2], end));
            self.counts[2] += 1;
            self.queue.push_back(Node::V(v));
        }
    }

    fn black(&mut self, e: BlackEnd) {
        match e {
            BlackEnd::Regular(b) if self.bid[b] == usize::MAX => {
                self.bid[b] = self.counts[0];
                self.counts[0] += 1;
                self.queue.push_back(Node::B(b));
            }
            BlackEnd::Port(v, end) => self.chain(v, end),
            _ => {}
        }
    }

    fn white(&mut self, e: WhiteEnd) {
        match e {
            WhiteEnd::Regular(w) if self.wid[w] == usize::MAX => {
                self.wid[w] = self.counts[1];
                self.counts[1] += 1;
                self.queue.push_back(Node::W(w));
            }
            WhiteEnd::Port(v, end) => self.chain(v, end),
            _ => {}
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainVertexRecord {
    pub kind: String,
    pub colors: [usize; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub secondary: Option<usize>,
    pub dipoles: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeRecord {
    pub dim: usize,
    pub k: usize,
    pub matchings: Vec<Vec<usize>>,
    pub root: Option<Root>,
    pub chain_vertices: Vec<ChainVertexRecord>,
}

impl SchemeRecord {
    /// Rebuilds the scheme from its realization and checks the listed chains.
    pub fn into_scheme(self) -> Result<Scheme, SchemeError> {
        let g = ColoredGraph::new(self.dim, self.matchings, self.root)?;
        if g.root().is_none() {
            return Err(GraphError::NotRooted.into());
        }
        let listed: BTreeSet<Vec<[usize; 2]>> = self.chain_vertices.iter().map(|c| c.dipoles.clone()).collect();
        let found: BTreeSet<Vec<[usize; 2]>> = find_maximal_proper_chains(&g)
            .iter()
            .map(|ch| {
                let mut d: Vec<[usize; 2]> = ch.dipoles.iter().map(|&(b, w)| [b, w]).collect();
                if d.first() > d.last() {
                    d.reverse();
                }
                d
            })
            .collect();
        let listed: BTreeSet<Vec<[usize; 2]>> = listed
            .into_iter()
            .map(|mut d| {
                if d.first() > d.last() {
                    d.reverse();
                }
                d
            })
            .collect();
        if listed != found {
            return Err(SchemeError::Malformed("chain_vertices do not match the maximal chains".into()));
        }
        scheme_of(&g)
    }
}

/// The scheme of a melon-free rooted graph: every maximal proper chain becomes a
/// chain-vertex, twisters stay as dipoles.
pub fn scheme_of(g: &ColoredGraph) -> Result<Scheme, SchemeError> {
    let root = g.root().ok_or(GraphError::NotRooted)?;
    if !is_melon_free(g) {
        return Err(SchemeError::NotMelonFree);
    }
    let chains = find_maximal_proper_chains(g);
    let k = g.k();
    let mut in_chain_b: BTreeMap<usize, (usize, Option<usize>)> = BTreeMap::new();
    let mut in_chain_w: BTreeMap<usize, (usize, Option<usize>)> = BTreeMap::new();
    for (v, ch) in chains.iter().enumerate() {
        let p = ch.len();
        for (t, &(b, w)) in ch.dipoles.iter().enumerate() {
            let end = if t == 0 { Some(0) } else if t == p - 1 { Some(1) } else { None };
            in_chain_b.insert(b, (v, end));
            in_chain_w.insert(w, (v, end));
        }
    }
    let reg_b: Vec<usize> = (0..k).filter(|b| !in_chain_b.contains_key(b)).collect();
    let reg_w: Vec<usize> = (0..k).filter(|w| !in_chain_w.contains_key(w)).collect();
    let bnew: HashMap<usize, usize> = reg_b.iter().enumerate().map(|(i, &b)| (b, i)).collect();
    let wnew: HashMap<usize, usize> = reg_w.iter().enumerate().map(|(i, &w)| (w, i)).collect();
    let white_end = |w: usize| match in_chain_w.get(&w) {
        None => WhiteEnd::Regular(wnew[&w]),
        Some(&(v, Some(end))) => WhiteEnd::Port(v, end),
        Some(_) => unreachable!("internal white vertices only meet their chain"),
    };
    let mut edges = Vec::new();
    for &b in &reg_b {
        for c in g.colors() {
            edges.push(SchemeEdge { black: BlackEnd::Regular(bnew[&b]), white: white_end(g.white(c, b)), color: c });
        }
    }
    for (v, ch) in chains.iter().enumerate() {
        let ends = [(ch.dipoles[0].0, ch.colors[0]), (ch.dipoles[ch.len() - 1].0, ch.colors[ch.len()])];
        for (end, &(b, c)) in ends.iter().enumerate() {
            edges.push(SchemeEdge { black: BlackEnd::Port(v, end), white: white_end(g.white(c, b)), color: c });
        }
    }
    let root_end = match in_chain_b.get(&root.black) {
        None => BlackEnd::Regular(bnew[&root.black]),
        Some(&(v, Some(_))) => {
            let ch = &chains[v];
            if ch.dipoles[0].0 == root.black && ch.colors[0] == root.color {
                BlackEnd::Port(v, 0)
            } else {
                BlackEnd::Port(v, 1)
            }
        }
        Some(_) => unreachable!("the root is never internal to a chain"),
    };
    let kinds = chains.iter().map(Chain::kind).collect();
    let s = Scheme::new(g.dim(), reg_b.len(), kinds, edges, (root_end, root.color))?;
    Ok(s.canonical_form())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `base` with the edges `e1` and `e2` cut open and joined through a chain with
    /// link colors `colors`.
    fn with_chain(base: &ColoredGraph, colors: &[usize], e1: Root, e2: Root) -> ColoredGraph {
        let n = base.k();
        let p = colors.len() - 1;
        let mut m: Vec<Vec<usize>> = base.matchings().to_vec();
        for row in m.iter_mut() {
            row.extend(n..n + p);
        }
        for t in 0..p {
            for (c, row) in m.iter_mut().enumerate() {
                if c == colors[t] || c == colors[t + 1] {
                    row[n + t] = usize::MAX;
                }
            }
        }
        for t in 0..p - 1 {
            m[colors[t + 1]][n + t] = n + t + 1;
            m[colors[t + 1]][n + t + 1] = n + t;
        }
        let (w1, w2) = (base.white(e1.color, e1.black), base.white(e2.color, e2.black));
        m[e1.color][e1.black] = n;
        m[e1.color][n] = w1;
        m[e2.color][e2.black] = n + p - 1;
        m[e2.color][n + p - 1] = w2;
        ColoredGraph::new(base.dim(), m, base.root()).unwrap()
    }

    fn fixture(dim: usize, colors: &[usize]) -> ColoredGraph {
        let base = ColoredGraph::square(dim, 1).with_root(Some(Root::new(0, dim))).unwrap();
        let (l, r) = (colors[0], *colors.last().unwrap());
        with_chain(&base, colors, Root::new(1, l), Root::new(if l == r { 0 } else { 1 }, r))
    }

    #[test]
    fn dipoles_of_squares() {
        assert_eq!(find_dipoles(&ColoredGraph::square(3, 1), 1).len(), 4);
        let sq4 = ColoredGraph::square(4, 1);
        assert_eq!(find_dipoles(&sq4, 1).len(), 2);
        assert_eq!(find_dipoles(&sq4, 2).len(), 2);
        assert!(find_dipoles(&ColoredGraph::elementary(3), 1).is_empty());
    }

    #[test]
    fn square_has_no_chain_and_is_its_own_scheme() {
        let sq = ColoredGraph::square(3, 1);
        assert!(find_maximal_proper_chains(&sq).is_empty());
        let s = scheme_of(&sq).unwrap();
        assert!(s.chains().is_empty());
        assert_eq!(s.signature(), Signature { p: 2, broken_equal: 0, broken_distinct: 0, unbroken_equal: 0, unbroken_distinct: 0 });
        assert_eq!(s.realize_minimal().unwrap().canonical_encoding(), sq.canonical_encoding());
    }

    #[test]
    fn kinds_from_colors() {
        assert_eq!(ChainKind::from_colors(&[0, 1, 0, 1]), Some(ChainKind::UnbrokenDistinct(0, 1)));
        assert_eq!(ChainKind::from_colors(&[0, 1, 0]), Some(ChainKind::UnbrokenEqual { color: 0, secondary: 1 }));
        assert_eq!(ChainKind::from_colors(&[0, 2, 1]), Some(ChainKind::Broken(0, 1)));
        assert_eq!(ChainKind::from_colors(&[0, 0]), None);
        for k in [ChainKind::Broken(1, 1), ChainKind::Broken(0, 3), ChainKind::UnbrokenDistinct(2, 0)] {
            assert_eq!(ChainKind::from_colors(&k.minimal_colors(3)), Some(k));
        }
    }

    #[test]
    fn length_three_unbroken_chain() {
        let g = fixture(3, &[0, 1, 0, 1]);
        assert!(is_melon_free(&g));
        let chains = find_maximal_proper_chains(&g);
        assert_eq!(chains.len(), 1);
        assert_eq!(chains[0].len(), 3);
        assert_eq!(chains[0].kind(), ChainKind::UnbrokenDistinct(0, 1));
        assert_eq!(classify_by_faces(&g, &chains[0]), ChainKind::UnbrokenDistinct(0, 1));
        let s = scheme_of(&g).unwrap();
        assert_eq!(s.chains().len(), 1);
        assert_eq!(s.regular() * 2 + 6, g.k() * 2);
        let longer = s.realize(&[vec![0, 1, 0, 1, 0, 1]]).unwrap();
        assert_eq!(longer.degree(), g.degree());
        assert_eq!(scheme_of(&longer).unwrap(), s);
    }

    #[test]
    fn broken_chain_round_trip() {
        let g = fixture(3, &[0, 2, 3, 0]);
        let s = scheme_of(&g).unwrap();
        assert_eq!(s.signature().broken_equal, 1);
        let alt = s.realize(&[vec![0, 1, 2, 3, 1, 0]]).unwrap();
        assert_eq!(alt.degree(), g.degree());
        assert_eq!(scheme_of(&alt).unwrap().canonical_encoding(), s.canonical_encoding());
        assert!(broken_by_faces(&alt, &find_maximal_proper_chains(&alt)[0]));
    }

    #[test]
    fn record_round_trip() {
        let s = scheme_of(&fixture(4, &[1, 0, 1])).unwrap();
        let json = serde_json::to_string(&s.to_record()).unwrap();
        let back: SchemeRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back.into_scheme().unwrap(), s);
    }
}
