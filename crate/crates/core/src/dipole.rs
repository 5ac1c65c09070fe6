//! Dipole and chain-vertex removal with face accounting, and the marked iterative
//! deletion that bounds the number of chain-vertices and dipoles of a scheme.

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::graph::{ColoredGraph, Root};
use crate::scheme::{find_dipoles, same_face, ChainKind, Dipole, Scheme, SchemeError};
use crate::series::binomial;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DipoleError {
    #[error("({0}, {1}) is not a dipole")]
    NotADipole(usize, usize),
    #[error("q = {0} is outside 1..=D-1")]
    QOutOfRange(usize),
    #[error("no chain-vertex {0}")]
    NotAChainVertex(usize),
    #[error("deletion procedure stuck: {0}")]
    ProcedureStuck(String),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

/// A bipartite edge-colored graph under deletions, possibly disconnected, with marked edges.
#[derive(Clone, Debug)]
struct Work {
    dim: usize,
    m: Vec<Vec<usize>>,
    inv: Vec<Vec<usize>>,
    alive_b: Vec<bool>,
    alive_w: Vec<bool>,
    root: Option<Root>,
    marks: HashSet<(usize, usize)>,
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
            root: g.root(),
            marks: HashSet::new(),
        }
    }

    fn k(&self) -> usize {
        self.alive_b.iter().filter(|&&a| a).count()
    }

    fn shared(&self, b: usize, w: usize) -> Vec<usize> {
        (0..=self.dim).filter(|&c| self.m[c][b] == w).collect()
    }

    /// Components as (black, white) vertex sets.
    fn components(&self) -> Vec<(BTreeSet<usize>, BTreeSet<usize>)> {
        let k = self.m[0].len();
        let mut seen_b = vec![false; k];
        let mut seen_w = vec![false; k];
        let mut out = Vec::new();
        for start in 0..k {
            if !self.alive_b[start] || seen_b[start] {
                continue;
            }
            let (mut bs, mut ws) = (BTreeSet::from([start]), BTreeSet::new());
            seen_b[start] = true;
            let mut queue = VecDeque::from([(true, start)]);
            while let Some((black, v)) = queue.pop_front() {
                for c in 0..=self.dim {
                    if black {
                        let w = self.m[c][v];
                        if !seen_w[w] {
                            seen_w[w] = true;
                            ws.insert(w);
                            queue.push_back((false, w));
                        }
                    } else {
                        let b = self.inv[c][v];
                        if !seen_b[b] {
                            seen_b[b] = true;
                            bs.insert(b);
                            queue.push_back((true, b));
                        }
                    }
                }
            }
            out.push((bs, ws));
        }
        out
    }

    fn faces(&self) -> usize {
        let k = self.m[0].len();
        let mut total = 0;
        for c in 0..=self.dim {
            for c2 in c + 1..=self.dim {
                let mut seen = vec![false; k];
                for b in 0..k {
                    if !self.alive_b[b] || seen[b] {
                        continue;
                    }
                    total += 1;
                    let mut x = b;
                    while !seen[x] {
                        seen[x] = true;
                        x = self.inv[c2][self.m[c][x]];
                    }
                }
            }
        }
        total
    }

    /// `Σ δ` over components.
    fn degree_sum(&self) -> i64 {
        let d = self.dim as i64;
        let k = self.k() as i64;
        d * (d - 1) * k / 2 + d * self.components().len() as i64 - self.faces() as i64
    }

    /// Deletes vertices; the half-edges left dangling are returned as
    /// (outside black, color) and (outside white, color).
    fn delete(&mut self, blacks: &[usize], whites: &[usize]) {
        for &b in blacks {
            self.alive_b[b] = false;
            for c in 0..=self.dim {
                self.marks.remove(&(b, c));
            }
        }
        for &w in whites {
            self.alive_w[w] = false;
            for c in 0..=self.dim {
                let b = self.inv[c][w];
                self.marks.remove(&(b, c));
            }
        }
    }

    fn join(&mut self, b: usize, w: usize, c: usize) {
        self.m[c][b] = w;
        self.inv[c][w] = b;
        self.marks.insert((b, c));
    }

    /// Removes the pair `(b, w)` and joins the partners across each external color.
    /// Returns the new edges `(black, color)`.
    fn remove_pair(&mut self, b: usize, w: usize) -> Vec<(usize, usize)> {
        let shared = self.shared(b, w);
        let ext: Vec<usize> = (0..=self.dim).filter(|c| !shared.contains(c)).collect();
        let partners: Vec<(usize, usize, usize)> =
            ext.iter().map(|&a| (self.inv[a][w], self.m[a][b], a)).collect();
        let root = self.root;
        self.delete(&[b], &[w]);
        let mut new_edges = Vec::new();
        for &(bx, wx, a) in &partners {
            self.join(bx, wx, a);
            new_edges.push((bx, a));
        }
        if let Some(r) = root {
            let touches_w = self.inv[r.color][w] == r.black;
            self.root = if r.black == b && shared.contains(&r.color) {
                new_edges.first().map(|&(x, c)| Root::new(x, c))
            } else if r.black == b || touches_w {
                new_edges.iter().find(|e| e.1 == r.color).map(|&(x, c)| Root::new(x, c))
            } else {
                Some(r)
            };
        }
        new_edges
    }

    /// Removes a set of vertices forming a chain with port colors `ends` at
    /// `(b_first, w_first)` and `(b_last, w_last)`, joining the remaining half-edges
    /// end by end. Returns the new edges.
    fn remove_chain(&mut self, blacks: &[usize], whites: &[usize], ports: [(usize, usize, usize); 2]) -> Vec<(usize, usize)> {
        let inside_b: HashSet<usize> = blacks.iter().copied().collect();
        let inside_w: HashSet<usize> = whites.iter().copied().collect();
        let port_of_black = |b: usize| ports.iter().position(|p| p.0 == b);
        let port_of_white = |w: usize| ports.iter().position(|p| p.1 == w);
        let mut consumed = [false; 2];
        let mut joins = Vec::new();
        let root = self.root;
        let root_end = root.and_then(|r| {
            (0..2).find(|&e| r.color == ports[e].2 && (r.black == ports[e].0 || self.m[r.color][r.black] == ports[e].1))
        });
        let mut root_join = None;
        for e in 0..2 {
            if consumed[e] {
                continue;
            }
            consumed[e] = true;
            let (_, _, c) = ports[e];
            // outward from the white port: the black partner
            let mut x = self.inv[c][ports[e].1];
            let mut closed = false;
            while inside_b.contains(&x) {
                let e2 = port_of_black(x).expect("only ports meet the outside");
                if consumed[e2] {
                    closed = true;
                    break;
                }
                consumed[e2] = true;
                x = self.inv[c][ports[e2].1];
            }
            let mut y = self.m[c][ports[e].0];
            while !closed && inside_w.contains(&y) {
                let e2 = port_of_white(y).expect("only ports meet the outside");
                if consumed[e2] {
                    closed = true;
                    break;
                }
                consumed[e2] = true;
                y = self.m[c][ports[e2].0];
            }
            let before = consumed;
            if !closed {
                joins.push((x, y, c));
            }
            if let Some(re) = root_end {
                if before[re] && root_join.is_none() {
                    root_join = Some(if closed { None } else { Some((x, c)) });
                }
            }
        }
        self.delete(blacks, whites);
        let mut new_edges = Vec::new();
        for (x, y, c) in joins {
            self.join(x, y, c);
            new_edges.push((x, c));
        }
        if let Some(j) = root_join {
            self.root = j.map(|(x, c)| Root::new(x, c));
        }
        new_edges
    }

    fn component_graphs(&self) -> Vec<ColoredGraph> {
        self.components()
            .into_iter()
            .map(|(bs, ws)| {
                let wmap: std::collections::HashMap<usize, usize> = ws.iter().enumerate().map(|(i, &w)| (w, i)).collect();
                let bmap: std::collections::HashMap<usize, usize> = bs.iter().enumerate().map(|(i, &b)| (b, i)).collect();
                let m = (0..=self.dim).map(|c| bs.iter().map(|&b| wmap[&self.m[c][b]]).collect()).collect();
                let root = match self.root {
                    Some(r) if bmap.contains_key(&r.black) => Root::new(bmap[&r.black], r.color),
                    _ => Root::new(0, 0),
                };
                ColoredGraph::new(self.dim, m, Some(root)).expect("components are valid colored graphs")
            })
            .collect()
    }
}

/// Which faces of the two external colors `(a, a')` pass through the dipole.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FaceType {
    /// Black and white vertex of the dipole on the same `(a, a')` face: it splits.
    A,
    /// On two distinct faces: they merge.
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RemovalCase {
    /// `q + 1` components: the degree is distributed among them.
    CompletelySeparating,
    /// Fewer components: `δ(G) = Σδ(G_i) + D(q + 1 − C) − 2Σr_i`.
    NotCompletelySeparating,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RemovalReport {
    pub q: usize,
    pub components: usize,
    /// New edges per component.
    pub new_edges: Vec<usize>,
    /// Type-B external color pairs per component.
    pub type_b: Vec<usize>,
    pub type_a: usize,
    /// Faces of two parallel colors that disappear.
    pub removed_faces: usize,
    pub case: RemovalCase,
    /// `δ(G) − Σδ(G_i)` from the case table.
    pub predicted_delta: i64,
    /// `δ(G) − Σδ(G_i)` from face counts after removal.
    pub actual_delta: i64,
}

impl RemovalReport {
    pub fn consistent(&self) -> bool {
        self.predicted_delta == self.actual_delta
    }
}

/// Deletes a `(D−q)`-dipole and joins its external half-edges color by color.
pub fn remove_dipole(g: &ColoredGraph, dip: &Dipole) -> Result<(Vec<ColoredGraph>, RemovalReport), DipoleError> {
    let d = g.dim();
    let (b, w) = (dip.black, dip.white);
    if b >= g.k() || w >= g.k() {
        return Err(DipoleError::NotADipole(b, w));
    }
    let shared = g.colors_between(b, w);
    let q = d.checked_sub(shared.len()).ok_or(DipoleError::NotADipole(b, w))?;
    if q == 0 || q >= d || shared.is_empty() {
        return Err(DipoleError::QOutOfRange(q));
    }
    if q != dip.q {
        return Err(DipoleError::NotADipole(b, w));
    }
    let ext: Vec<usize> = g.colors().filter(|c| !shared.contains(c)).collect();
    let mut pair_types = Vec::new();
    for (i, &a) in ext.iter().enumerate() {
        for &a2 in &ext[i + 1..] {
            let t = if same_face(g, b, w, a, a2) { FaceType::A } else { FaceType::B };
            pair_types.push((a, a2, t));
        }
    }
    let mut work = Work::new(g);
    let faces_before = g.face_count();
    let new_edges = work.remove_pair(b, w);
    let comps = work.components();
    let comp_of = |x: usize| comps.iter().position(|(bs, _)| bs.contains(&x)).expect("alive");
    let c = comps.len();
    let mut per_new = vec![0; c];
    let mut type_b = vec![0; c];
    let color_comp: Vec<(usize, usize)> = new_edges.iter().map(|&(x, a)| (a, comp_of(x))).collect();
    for &(_, ci) in &color_comp {
        per_new[ci] += 1;
    }
    let type_a = pair_types.iter().filter(|p| p.2 == FaceType::A).count();
    for &(a, _, t) in &pair_types {
        if t == FaceType::B {
            let ci = color_comp.iter().find(|x| x.0 == a).expect("new edge per color").1;
            type_b[ci] += 1;
        }
    }
    let removed_faces: usize = binomial(d - q, 2).try_into().expect("small");
    let faces_after = work.faces();
    assert_eq!(
        faces_after as i64,
        faces_before as i64 - removed_faces as i64 + type_a as i64 - (pair_types.len() - type_a) as i64,
        "face accounting"
    );
    let r: usize = type_b.iter().sum();
    let predicted_delta = (d as i64) * (q as i64 + 1 - c as i64) - 2 * r as i64;
    let actual_delta = g.degree() as i64 - work.degree_sum();
    let case = if c == q + 1 { RemovalCase::CompletelySeparating } else { RemovalCase::NotCompletelySeparating };
    let report = RemovalReport {
        q,
        components: c,
        new_edges: per_new,
        type_b,
        type_a,
        removed_faces,
        case,
        predicted_delta,
        actual_delta,
    };
    Ok((work.component_graphs(), report))
}

/// Every (D−1)- and (D−2)-dipole removal of `g`.
pub fn audit_dipoles(g: &ColoredGraph) -> Vec<(Dipole, RemovalReport)> {
    let mut out = Vec::new();
    for q in 1..=2.min(g.dim() - 1) {
        for dip in find_dipoles(g, q) {
            let (_, rep) = remove_dipole(g, &dip).expect("found dipoles are removable");
            out.push((dip, rep));
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ChainRemovalCase {
    /// Separating: `δ = Σδ_i`.
    I,
    /// New edges on distinct faces: `δ = δ' + D`.
    II,
    /// Unbroken, single face: `δ = δ' + D − 2`.
    IIIa,
    /// Broken, single face: `δ = δ' + D`.
    IIIb,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainRemoval {
    pub case: ChainRemovalCase,
    pub predicted_delta: i64,
    pub actual_delta: i64,
}

/// Vertex ranges of the chain-vertices in a realization produced by [`Scheme::realize`].
pub fn chain_layout(s: &Scheme, seqs: &[Vec<usize>]) -> Vec<std::ops::Range<usize>> {
    let mut off = s.regular();
    seqs.iter()
        .map(|seq| {
            let r = off..off + seq.len() - 1;
            off = r.end;
            r
        })
        .collect()
}

/// Face colors used to decide between the single-face and two-face cases.
fn test_pairs(kind: ChainKind, dim: usize) -> Vec<(usize, usize)> {
    match kind {
        ChainKind::UnbrokenDistinct(i, j) => vec![(i, j)],
        ChainKind::Broken(i, j) if i != j => vec![(i, j)],
        ChainKind::UnbrokenEqual { color, secondary } => vec![(color, secondary)],
        ChainKind::Broken(i, _) => (0..=dim).filter(|&k| k != i).map(|k| (i, k)).collect(),
        ChainKind::Twister(i, j) => vec![(i, j)],
    }
}

fn blacks_on_same_face(work: &Work, b1: usize, b2: usize, x: usize, y: usize) -> bool {
    let mut b = b1;
    loop {
        if b == b2 {
            return true;
        }
        b = work.inv[y][work.m[x][b]];
        if b == b1 {
            return false;
        }
    }
}

fn remove_chain_in(work: &mut Work, s: &Scheme, v: usize, range: std::ops::Range<usize>) -> (Vec<(usize, usize)>, usize) {
    let ends = s.chains()[v].ends();
    let vs: Vec<usize> = range.clone().collect();
    let first = range.start;
    let last = range.end - 1;
    let before = work.components().len();
    let new_edges = work.remove_chain(&vs, &vs, [(first, first, ends[0]), (last, last, ends[1])]);
    let after = work.components().len();
    (new_edges, after + 1 - before)
}

fn classify_chain_removal(work: &Work, kind: ChainKind, new_edges: &[(usize, usize)], comps_delta: usize) -> ChainRemovalCase {
    if comps_delta >= 2 {
        return ChainRemovalCase::I;
    }
    let same = |x: usize, y: usize| match new_edges {
        [(b1, _), (b2, _)] => blacks_on_same_face(work, *b1, *b2, x, y),
        _ => true,
    };
    match kind {
        ChainKind::Broken(i, j) if i == j => {
            if test_pairs(kind, work.dim).iter().all(|&(x, y)| !same(x, y)) {
                ChainRemovalCase::II
            } else {
                ChainRemovalCase::IIIb
            }
        }
        _ => {
            let (x, y) = test_pairs(kind, work.dim)[0];
            if !same(x, y) {
                ChainRemovalCase::II
            } else if kind.is_broken() {
                ChainRemovalCase::IIIb
            } else {
                ChainRemovalCase::IIIa
            }
        }
    }
}

/// Deletes chain-vertex `v` from the minimal realization of `s` and joins the remaining
/// half-edges end by end.
pub fn remove_chain_vertex(s: &Scheme, v: usize) -> Result<(Vec<ColoredGraph>, ChainRemoval), DipoleError> {
    remove_chain_vertex_with(s, v, &s.minimal_sequences())
}

/// As [`remove_chain_vertex`], in the realization with link colors `seqs`.
pub fn remove_chain_vertex_with(s: &Scheme, v: usize, seqs: &[Vec<usize>]) -> Result<(Vec<ColoredGraph>, ChainRemoval), DipoleError> {
    if v >= s.chains().len() {
        return Err(DipoleError::NotAChainVertex(v));
    }
    let g = s.realize(seqs)?;
    let layout = chain_layout(s, seqs);
    let mut work = Work::new(&g);
    let (new_edges, comps_delta) = remove_chain_in(&mut work, s, v, layout[v].clone());
    let case = classify_chain_removal(&work, s.chains()[v], &new_edges, comps_delta);
    let d = s.dim() as i64;
    let predicted_delta = match case {
        ChainRemovalCase::I => 0,
        ChainRemovalCase::II | ChainRemovalCase::IIIb => d,
        ChainRemovalCase::IIIa => d - 2,
    };
    let actual_delta = g.degree() as i64 - work.degree_sum();
    Ok((work.component_graphs(), ChainRemoval { case, predicted_delta, actual_delta }))
}

/// Counters of the marked iterative deletion.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ReductionStats {
    pub degree: usize,
    /// Chain-vertices, (D−1)-dipoles and (D−2)-dipoles of the scheme.
    pub r: usize,
    pub s: usize,
    pub t: usize,
    /// Separating removals.
    pub p: usize,
    /// Non-separating chain-vertex removals lowering the degree by `D − 2`.
    pub q1: usize,
    /// Other non-separating chain-vertex removals (degree down by `D`).
    pub q2: usize,
    /// Non-separating (D−1)-dipole removals.
    pub q_prime: usize,
    /// Non-separating (D−2)-dipole removals.
    pub q_second: usize,
    /// Dipoles already destroyed by earlier removals.
    pub skipped: usize,
    /// Components of positive degree, plus the root component.
    pub c_plus: usize,
    /// Other components, including the copies of Δ.
    pub c_zero: usize,
    /// Marked edges of every non-root degree-0 component.
    pub c_zero_marks: Vec<usize>,
    pub root_marks: usize,
}

impl ReductionStats {
    /// Degree-0 components carrying fewer than three marks. Nonzero only when
    /// overlapping D=3 dipoles collapse into a whole Δ that is then skipped.
    pub fn thin_zero_components(&self) -> usize {
        self.c_zero_marks.iter().filter(|&&m| m < 3).count()
    }

    /// Failed checks, empty when all hold.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let removals = self.p + self.q1 + self.q2 + self.q_prime + self.q_second + self.skipped;
        if removals != self.r + self.s + self.t {
            out.push(format!("{removals} removals for {} items", self.r + self.s + self.t));
        }
        // an unmarked root component frees one mark in the count
        let slack = if self.root_marks == 0 { 1 } else { 2 };
        let lhs = 2 * (self.q1 + self.q2 + self.q_prime) + 3 * self.q_second + self.c_plus;
        if lhs < self.c_zero + slack {
            out.push(format!("2(q1+q2+q')+3q''+|C+|-{slack} = {} < |C0| = {}", lhs as i64 - slack as i64, self.c_zero));
        }
        if self.r + self.s + self.t > 5 * self.degree {
            out.push(format!("r+s+t = {} > 5δ = {}", self.r + self.s + self.t, 5 * self.degree));
        }
        out
    }
}

/// Runs the deletion procedure on the minimal realization of `s`: chain-vertices, then
/// (D−1)-dipoles, then for `D ≥ 4` the (D−2)-dipoles, marking every new edge.
pub fn iterative_reduction_stats(s: &Scheme) -> Result<ReductionStats, DipoleError> {
    let seqs = s.minimal_sequences();
    let g = s.realize(&seqs)?;
    let d = s.dim();
    let layout = chain_layout(s, &seqs);
    let regular = |x: usize| x < s.regular();
    let v_items: Vec<Dipole> = find_dipoles(&g, 1).into_iter().filter(|p| regular(p.black) && regular(p.white)).collect();
    let w_items: Vec<Dipole> = if d >= 4 {
        find_dipoles(&g, 2).into_iter().filter(|p| regular(p.black) && regular(p.white)).collect()
    } else {
        Vec::new()
    };
    let mut st = ReductionStats {
        degree: g.degree(),
        r: layout.len(),
        s: v_items.len(),
        t: w_items.len(),
        ..Default::default()
    };
    let mut work = Work::new(&g);
    let mut delta_copies = 0;

    for (v, range) in layout.iter().enumerate() {
        let before = work.degree_sum();
        let comps = work.components().len();
        remove_chain_in(&mut work, s, v, range.clone());
        if work.components().len() > comps {
            st.p += 1;
            continue;
        }
        let drop = before - work.degree_sum();
        if drop == d as i64 - 2 {
            st.q1 += 1;
        } else if drop == d as i64 {
            st.q2 += 1;
        } else {
            return Err(DipoleError::ProcedureStuck(format!("chain-vertex removal lowered the degree by {drop}")));
        }
    }
    for dip in &v_items {
        let (b, w) = (dip.black, dip.white);
        if !work.alive_b[b] || !work.alive_w[w] || work.shared(b, w).len() > d {
            st.skipped += 1;
            continue;
        }
        let comps = work.components().len();
        work.remove_pair(b, w);
        if work.components().len() > comps {
            st.p += 1;
        } else {
            st.q_prime += 1;
        }
    }
    for dip in &w_items {
        let (b, w) = (dip.black, dip.white);
        if !work.alive_b[b] || !work.alive_w[w] || work.shared(b, w).len() > d {
            st.skipped += 1;
            continue;
        }
        let comps = work.components().len();
        let mut trial = work.clone();
        trial.remove_pair(b, w);
        let split = trial.components().len() as i64 - comps as i64;
        let ext: Vec<usize> = (0..=d).filter(|c| work.m[*c][b] != w).collect();
        if split <= 0 {
            work = trial;
            st.q_second += 1;
        } else if split >= 2 || ext.len() < 3 {
            work = trial;
            delta_copies += 1;
            st.p += 1;
        } else {
            // break the separating pair of same-colored external edges
            let mut done = false;
            for &a in &ext {
                let (bx, wx) = (work.inv[a][w], work.m[a][b]);
                let mut cut = work.clone();
                cut.join(b, w, a);
                cut.join(bx, wx, a);
                if cut.components().len() > comps {
                    work = cut;
                    done = true;
                    break;
                }
            }
            if !done {
                return Err(DipoleError::ProcedureStuck("partially separating dipole without a separating pair".into()));
            }
            st.p += 1;
        }
    }

    let root_black = work.root.map(|r| r.black);
    let d64 = d as i64;
    for (bs, ws) in work.components() {
        let k = bs.len() as i64;
        let mut faces = 0i64;
        for c in 0..=d {
            for c2 in c + 1..=d {
                let mut seen = BTreeSet::new();
                for &b in &bs {
                    if seen.contains(&b) {
                        continue;
                    }
                    faces += 1;
                    let mut x = b;
                    while seen.insert(x) {
                        x = work.inv[c2][work.m[c][x]];
                    }
                }
            }
        }
        let _ = ws;
        let degree = d64 * (d64 - 1) * k / 2 + d64 - faces;
        let has_root = root_black.is_some_and(|r| bs.contains(&r));
        let marks: usize = bs.iter().map(|&b| (0..=d).filter(|&c| work.marks.contains(&(b, c))).count()).sum();
        if has_root {
            st.root_marks = marks;
        }
        if degree > 0 || has_root {
            st.c_plus += 1;
        } else {
            st.c_zero += 1;
            st.c_zero_marks.push(marks);
        }
    }
    if root_black.is_none() {
        // the root was deleted together with its whole component
        st.c_plus += 1;
    }
    st.c_zero += delta_copies;
    st.c_zero_marks.extend(std::iter::repeat_n(3, delta_copies));
    Ok(st)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::scheme_of;

    #[test]
    fn square_dipole_removal() {
        let sq = ColoredGraph::square(3, 1);
        for dip in find_dipoles(&sq, 1) {
            let (comps, rep) = remove_dipole(&sq, &dip).unwrap();
            assert_eq!(comps.len(), 1);
            assert_eq!(comps[0].degree(), 0);
            assert_eq!(rep.type_b, vec![1]);
            assert_eq!(rep.predicted_delta, 1);
            assert!(rep.consistent());
        }
    }

    #[test]
    fn d4_two_dipole() {
        let sq = ColoredGraph::square(4, 1);
        for dip in find_dipoles(&sq, 2) {
            let (_, rep) = remove_dipole(&sq, &dip).unwrap();
            assert!(rep.consistent(), "{rep:?}");
        }
        assert_eq!(remove_dipole(&sq, &Dipole { black: 0, white: 0, q: 3, external: vec![] }), Err(DipoleError::NotADipole(0, 0)));
    }

    #[test]
    fn square_scheme_stats() {
        let s = scheme_of(&ColoredGraph::square(3, 1)).unwrap();
        let st = iterative_reduction_stats(&s).unwrap();
        assert_eq!((st.r, st.s, st.t), (0, 4, 0));
        assert!(st.violations().is_empty(), "{st:?}");
    }
}
