//! Melons, cut-sets, melonic recognition and the core decomposition.

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::graph::{ColoredGraph, Edge, GraphError, PreGraph, Root, Side};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("the melon is the whole graph")]
    MelonIsWholeGraph,
    #[error("not a proper sub-melon")]
    NotAMelon,
    #[error("edge not in graph")]
    EdgeNotInGraph,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Two vertices joined by exactly `D` parallel edges, whose parallel edges avoid the root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MelonOccurrence {
    pub black: usize,
    pub white: usize,
    pub external_color: usize,
    /// One of the two external half-edges lies on the root edge.
    pub touches_root: bool,
}

/// A graph under destructive melon removal, keeping the original vertex labels.
struct Work {
    dim: usize,
    m: Vec<Vec<usize>>,
    inv: Vec<Vec<usize>>,
    alive_b: Vec<bool>,
    alive_w: Vec<bool>,
    alive: usize,
    root: Option<Root>,
}

impl Work {
    fn new(g: &ColoredGraph) -> Self {
        let k = g.k();
        Work {
            dim: g.dim(),
            m: g.matchings().to_vec(),
            inv: g.colors().map(|c| (0..k).map(|w| g.black(c, w)).collect()).collect(),
            alive_b: vec![true; k],
            alive_w: vec![true; k],
            alive: k,
            root: g.root(),
        }
    }

    fn melon_at(&self, b: usize) -> Option<MelonOccurrence> {
        if !self.alive_b[b] {
            return None;
        }
        let d = self.dim;
        for c in 0..=d {
            let w = self.m[c][b];
            let shared: Vec<usize> = (0..=d).filter(|&x| self.m[x][b] == w).collect();
            if shared.len() == d + 1 {
                let ext = self.root.map_or(0, |r| r.color);
                return Some(MelonOccurrence { black: b, white: w, external_color: ext, touches_root: true });
            }
            if shared.len() == d && shared[0] == c {
                let ext = (0..=d).find(|x| !shared.contains(x)).expect("one external color");
                if let Some(r) = self.root {
                    if r.black == b && r.color != ext {
                        continue;
                    }
                }
                let partner = self.inv[ext][w];
                let touches_root =
                    self.root.is_some_and(|r| r == Root::new(b, ext) || r == Root::new(partner, ext));
                return Some(MelonOccurrence { black: b, white: w, external_color: ext, touches_root });
            }
        }
        None
    }

    fn melons(&self) -> Vec<MelonOccurrence> {
        (0..self.m[0].len()).filter_map(|b| self.melon_at(b)).collect()
    }

    /// Removes a melon and returns the black endpoint of the new edge.
    fn remove(&mut self, mo: MelonOccurrence) -> usize {
        let c = mo.external_color;
        let wx = self.m[c][mo.black];
        let bx = self.inv[c][mo.white];
        self.m[c][bx] = wx;
        self.inv[c][wx] = bx;
        self.alive_b[mo.black] = false;
        self.alive_w[mo.white] = false;
        self.alive -= 1;
        if let Some(r) = self.root {
            if r == Root::new(mo.black, c) {
                self.root = Some(Root::new(bx, c));
            }
        }
        bx
    }

    /// Removes melons until none is left, picking with `choose` among the current ones.
    fn strip(&mut self, mut choose: impl FnMut(&[MelonOccurrence]) -> usize) {
        while self.alive > 1 {
            let found = self.melons();
            if found.is_empty() {
                break;
            }
            let mo = found[choose(&found) % found.len()];
            self.remove(mo);
        }
    }

    /// Greedy removal driven by a worklist of black vertices near each change.
    fn strip_local(&mut self) {
        let mut pending: Vec<usize> = (0..self.m[0].len()).rev().collect();
        loop {
            while let Some(b) = pending.pop() {
                if self.alive <= 1 {
                    return;
                }
                if let Some(mo) = self.melon_at(b) {
                    let c = mo.external_color;
                    let bx = self.remove(mo);
                    let wx = self.m[c][bx];
                    pending.push(bx);
                    pending.extend((0..=self.dim).map(|x| self.inv[x][wx]));
                }
            }
            if self.alive <= 1 {
                return;
            }
            let rest = self.melons();
            if rest.is_empty() {
                return;
            }
            pending.extend(rest.iter().map(|m| m.black));
        }
    }

    /// The remaining graph, or `None` when only Δ is left.
    fn compact_core(&self) -> Option<(ColoredGraph, Vec<usize>, Vec<usize>)> {
        (self.alive > 1).then(|| self.compact())
    }

    fn compact(&self) -> (ColoredGraph, Vec<usize>, Vec<usize>) {
        let k = self.m[0].len();
        let blacks: Vec<usize> = (0..k).filter(|&b| self.alive_b[b]).collect();
        let whites: Vec<usize> = (0..k).filter(|&w| self.alive_w[w]).collect();
        let mut wnew = vec![usize::MAX; k];
        for (i, &w) in whites.iter().enumerate() {
            wnew[w] = i;
        }
        let mut bnew = vec![usize::MAX; k];
        for (i, &b) in blacks.iter().enumerate() {
            bnew[b] = i;
        }
        let matchings = (0..=self.dim).map(|c| blacks.iter().map(|&b| wnew[self.m[c][b]]).collect()).collect();
        let root = self.root.map(|r| Root::new(bnew[r.black], r.color));
        let g = ColoredGraph::new(self.dim, matchings, root).expect("melon removal keeps graphs valid");
        (g, blacks, whites)
    }
}

/// All proper sub-melons. For Δ the single pair is reported with the root color as
/// external color; removing it would leave the empty graph.
pub fn find_melons(g: &ColoredGraph) -> Vec<MelonOccurrence> {
    Work::new(g).melons()
}

pub fn is_melon_free(g: &ColoredGraph) -> bool {
    let w = Work::new(g);
    (0..g.k()).all(|b| w.melon_at(b).is_none())
}

/// Deletes a proper sub-melon and glues its two external half-edges.
pub fn remove_melon(g: &ColoredGraph, m: MelonOccurrence) -> Result<ColoredGraph, ReductionError> {
    if g.k() == 1 {
        return Err(ReductionError::MelonIsWholeGraph);
    }
    let mut w = Work::new(g);
    if w.melon_at(m.black) != Some(m) {
        return Err(ReductionError::NotAMelon);
    }
    w.remove(m);
    Ok(w.compact().0)
}

/// Inserts a melon on edge `e`. When `e` is the root, the root stays on the half
/// incident to the original black endpoint if `root_at_black` is set.
pub fn insert_melon(g: &ColoredGraph, e: Edge, root_at_black: bool) -> ColoredGraph {
    let k = g.k();
    let c = e.color;
    let w = g.white(c, e.black);
    let mut m: Vec<Vec<usize>> = g.matchings().to_vec();
    for (x, row) in m.iter_mut().enumerate() {
        row.push(if x == c { w } else { k });
    }
    m[c][e.black] = k;
    let root = match g.root() {
        Some(r) if r == e && !root_at_black => Some(Root::new(k, c)),
        other => other,
    };
    ColoredGraph::new(g.dim(), m, root).expect("melon insertion keeps graphs valid")
}

/// Where an attachment sits in the core.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Slot {
    /// The whole graph, when the core is empty.
    Whole,
    /// Between the core root's black endpoint and the root edge.
    RootBlackSide,
    /// Between the root edge and the core root's white endpoint.
    RootWhiteSide,
    /// A non-root core edge, in canonical core labels.
    Edge(Edge),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreDecomposition {
    /// The melon-free core in canonical labels, `None` when empty.
    pub core: Option<ColoredGraph>,
    /// Root slots first, then core edges in canonical order.
    pub slots: Vec<(Slot, Option<PreGraph>)>,
}

impl CoreDecomposition {
    /// Vertices held by the attachments.
    pub fn attachment_vertices(&self) -> usize {
        self.slots.iter().filter_map(|(_, p)| p.as_ref()).map(|p| 2 * p.k()).sum()
    }

    /// Substitutes the attachments back into the core.
    pub fn reassemble(&self) -> Result<ColoredGraph, GraphError> {
        let Some(core) = &self.core else {
            let (_, whole) = self.slots.first().ok_or(GraphError::Empty)?;
            return whole.as_ref().ok_or(GraphError::Empty)?.close();
        };
        let dim = core.dim();
        let root = core.root().ok_or(GraphError::NotRooted)?;
        let mut m: Vec<Vec<usize>> = core.matchings().to_vec();
        // splice returns the (black, white) of the open half-edges after renumbering
        let splice = |m: &mut Vec<Vec<usize>>, p: &PreGraph| -> Result<(usize, usize), GraphError> {
            let off = m[0].len();
            let (ob, ow) = p.open_pair().ok_or(GraphError::BadOpenSet)?;
            for (c, row) in p.partial().iter().enumerate() {
                m[c].extend(row.iter().map(|w| w.map_or(usize::MAX, |w| w + off)));
            }
            Ok((ob.vertex + off, ow.vertex + off))
        };
        for (slot, att) in &self.slots {
            let (Slot::Edge(e), Some(p)) = (slot, att) else { continue };
            let w = m[e.color][e.black];
            let (xb, xw) = splice(&mut m, p)?;
            m[e.color][e.black] = xw;
            m[e.color][xb] = w;
        }
        let c = root.color;
        let core_white = m[c][root.black];
        let mut root_black = root.black;
        let mut root_white = core_white;
        for (slot, att) in &self.slots {
            match (slot, att) {
                (Slot::RootBlackSide, Some(p)) => {
                    let (xb, xw) = splice(&mut m, p)?;
                    m[c][root.black] = xw;
                    root_black = xb;
                }
                (Slot::RootWhiteSide, Some(p)) => {
                    let (yb, yw) = splice(&mut m, p)?;
                    m[c][yb] = core_white;
                    root_white = yw;
                }
                _ => {}
            }
        }
        m[c][root_black] = root_white;
        ColoredGraph::new(dim, m, Some(Root::new(root_black, c)))
    }
}

/// Canonical core reached by removing melons in the order given by `choose`.
pub fn core_graph_with(g: &ColoredGraph, choose: impl FnMut(&[MelonOccurrence]) -> usize) -> Option<ColoredGraph> {
    let mut w = Work::new(g);
    w.strip(choose);
    w.compact_core().map(|(c, _, _)| c.canonical_form().expect("core is rooted"))
}

/// Core decomposition of a rooted graph.
pub fn core(g: &ColoredGraph) -> Result<CoreDecomposition, ReductionError> {
    let root = g.root().ok_or(GraphError::NotRooted)?;
    let mut work = Work::new(g);
    work.strip_local();
    let Some((compact, blacks, whites)) = work.compact_core() else {
        return Ok(CoreDecomposition { core: None, slots: vec![(Slot::Whole, Some(g.open_root()?))] });
    };
    let core = compact.canonical_form()?;
    let k = g.k();
    let (bid, _) = compact.discovery_labels()?;
    let mut orig_b = vec![usize::MAX; core.k()];
    for (i, &b) in blacks.iter().enumerate() {
        orig_b[bid[i]] = b;
    }
    let mut is_core_b = vec![false; k];
    let mut is_core_w = vec![false; k];
    blacks.iter().for_each(|&b| is_core_b[b] = true);
    whites.iter().for_each(|&w| is_core_w[w] = true);

    // non-core component reached from a starting vertex, avoiding the root edge
    let component = |start: (Side, usize)| -> (BTreeSet<usize>, BTreeSet<usize>) {
        let mut bs = BTreeSet::new();
        let mut ws = BTreeSet::new();
        let mut queue = VecDeque::from([start]);
        match start {
            (Side::Black, b) => bs.insert(b),
            (Side::White, w) => ws.insert(w),
        };
        while let Some((side, v)) = queue.pop_front() {
            for c in g.colors() {
                match side {
                    Side::Black => {
                        if Root::new(v, c) == root {
                            continue;
                        }
                        let w = g.white(c, v);
                        if !is_core_w[w] && ws.insert(w) {
                            queue.push_back((Side::White, w));
                        }
                    }
                    Side::White => {
                        let b = g.black(c, v);
                        if Root::new(b, c) == root {
                            continue;
                        }
                        if !is_core_b[b] && bs.insert(b) {
                            queue.push_back((Side::Black, b));
                        }
                    }
                }
            }
        }
        (bs, ws)
    };

    let mut slots = Vec::new();
    let rw = g.white(root.color, root.black);
    let black_side = (!is_core_b[root.black]).then(|| {
        let (bs, ws) = component((Side::Black, root.black));
        g.induced(&bs, &ws)
    });
    let white_side = (!is_core_w[rw]).then(|| {
        let (bs, ws) = component((Side::White, rw));
        g.induced(&bs, &ws)
    });
    slots.push((Slot::RootBlackSide, black_side));
    slots.push((Slot::RootWhiteSide, white_side));
    let core_root = core.root().expect("core is rooted");
    for (i, &ob) in orig_b.iter().enumerate() {
        for c in core.colors() {
            let e = Root::new(i, c);
            if e == core_root {
                continue;
            }
            let w = g.white(c, ob);
            let att = (!is_core_w[w]).then(|| {
                let (bs, ws) = component((Side::White, w));
                g.induced(&bs, &ws)
            });
            slots.push((Slot::Edge(e), att));
        }
    }
    Ok(CoreDecomposition { core: Some(core), slots })
}

/// Melonic test via the inductive definition: the closed components of the root's
/// cut-set must all be prime melonic graphs.
pub fn is_melonic(g: &ColoredGraph) -> bool {
    let g = if g.root().is_some() { g.clone() } else { g.with_root(Some(Root::new(0, 0))).expect("in range") };
    melonic(&g)
}

fn melonic(g: &ColoredGraph) -> bool {
    let root = g.root().expect("rooted");
    let cs = cut_set(g, root).expect("root is an edge");
    if cs.edges.len() == 1 {
        return prime_melonic(g);
    }
    match cs.closed_components(g) {
        Ok(parts) => parts.iter().all(prime_melonic),
        Err(_) => false,
    }
}

fn prime_melonic(g: &ColoredGraph) -> bool {
    let root = g.root().expect("rooted");
    let x = root.black;
    let y = g.white(root.color, x);
    let k = g.k();
    let mut seen_b = vec![false; k];
    let mut seen_w = vec![false; k];
    seen_b[x] = true;
    seen_w[y] = true;
    for start in 0..k {
        if seen_b[start] {
            continue;
        }
        let (mut bs, mut ws) = (BTreeSet::from([start]), BTreeSet::new());
        seen_b[start] = true;
        let mut queue = VecDeque::from([(Side::Black, start)]);
        while let Some((side, v)) = queue.pop_front() {
            for c in g.colors() {
                match side {
                    Side::Black => {
                        let w = g.white(c, v);
                        if !seen_w[w] {
                            seen_w[w] = true;
                            ws.insert(w);
                            queue.push_back((Side::White, w));
                        }
                    }
                    Side::White => {
                        let b = g.black(c, v);
                        if !seen_b[b] {
                            seen_b[b] = true;
                            bs.insert(b);
                            queue.push_back((Side::Black, b));
                        }
                    }
                }
            }
        }
        let part = g.induced(&bs, &ws);
        match part.close() {
            Ok(closed) if melonic(&closed) => {}
            _ => return false,
        }
    }
    // whites unreachable from any black other than x would form no component
    seen_w.iter().all(|&s| s)
}

/// A cut-set with its cyclic order and the vertex parts between consecutive edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutSet {
    /// `e_0, …, e_ℓ`, starting from the queried edge.
    pub edges: Vec<Edge>,
    /// `X_0, …, X_ℓ` as (black, white) vertex sets; `e_i` joins a black vertex of
    /// `X_i` to a white vertex of `X_{i+1}`.
    pub parts: Vec<(BTreeSet<usize>, BTreeSet<usize>)>,
}

impl CutSet {
    /// The rooted graphs obtained by closing each open component.
    pub fn closed_components(&self, g: &ColoredGraph) -> Result<Vec<ColoredGraph>, GraphError> {
        self.parts.iter().map(|(bs, ws)| g.induced(bs, ws).close()).collect()
    }
}

fn components_without(g: &ColoredGraph, removed: &[Edge]) -> Vec<(BTreeSet<usize>, BTreeSet<usize>)> {
    let k = g.k();
    let mut comp_b = vec![usize::MAX; k];
    let mut comp_w = vec![usize::MAX; k];
    let mut out = Vec::new();
    for start in 0..k {
        if comp_b[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let (mut bs, mut ws) = (BTreeSet::from([start]), BTreeSet::new());
        comp_b[start] = id;
        let mut queue = VecDeque::from([(Side::Black, start)]);
        while let Some((side, v)) = queue.pop_front() {
            for c in g.colors() {
                match side {
                    Side::Black => {
                        if removed.contains(&Root::new(v, c)) {
                            continue;
                        }
                        let w = g.white(c, v);
                        if comp_w[w] == usize::MAX {
                            comp_w[w] = id;
                            ws.insert(w);
                            queue.push_back((Side::White, w));
                        }
                    }
                    Side::White => {
                        let b = g.black(c, v);
                        if removed.contains(&Root::new(b, c)) {
                            continue;
                        }
                        if comp_b[b] == usize::MAX {
                            comp_b[b] = id;
                            bs.insert(b);
                            queue.push_back((Side::Black, b));
                        }
                    }
                }
            }
        }
        out.push((bs, ws));
    }
    // a white vertex cut off from every black one would be its own component; that
    // cannot happen in a (D+1)-regular graph with D >= 1 remaining colors
    out
}

/// Two edges form a 2-edge-cut iff removing both disconnects the graph.
pub fn is_two_edge_cut(g: &ColoredGraph, e: Edge, f: Edge) -> bool {
    e != f && components_without(g, &[e, f]).len() > 1
}

/// The maximal proper cut-set containing `e` (or `{e}`), in cyclic order, with its parts.
pub fn cut_set(g: &ColoredGraph, e: Edge) -> Result<CutSet, ReductionError> {
    if e.black >= g.k() || e.color > g.dim() {
        return Err(ReductionError::EdgeNotInGraph);
    }
    let mut members = vec![e];
    members.extend(g.edges().filter(|&f| is_two_edge_cut(g, e, f)));
    let parts = components_without(g, &members);
    if members.len() == 1 {
        return Ok(CutSet { edges: members, parts });
    }
    let part_of_black = |b: usize| parts.iter().position(|(bs, _)| bs.contains(&b)).expect("covered");
    let part_of_white = |w: usize| parts.iter().position(|(_, ws)| ws.contains(&w)).expect("covered");
    let mut edges = vec![e];
    let mut ordered_parts = vec![parts[part_of_black(e.black)].clone()];
    let mut current = e;
    loop {
        let next_part = part_of_white(g.white(current.color, current.black));
        let next = *members
            .iter()
            .find(|f| part_of_black(f.black) == next_part)
            .expect("every part has an outgoing cut edge");
        if next == e {
            break;
        }
        ordered_parts.push(parts[next_part].clone());
        edges.push(next);
        current = next;
    }
    Ok(CutSet { edges, parts: ordered_parts })
}
