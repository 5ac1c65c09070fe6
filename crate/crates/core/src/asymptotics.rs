//! Singular behaviour of the melonic series, the linear program selecting dominant
//! schemes, their explicit construction, and the double-scaling resummation.

use std::collections::BTreeSet;
use std::fmt;

use num::{BigInt, BigRational, One, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

use crate::scheme::{scheme_of, BlackEnd, ChainKind, Scheme, SchemeEdge, SchemeError, WhiteEnd};
use crate::series::{binomial, chain_gf, melonic_series, u_series, ChainGf, PowerSeries, Poly, RationalFunctionU};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AsymptoticsError {
    #[error("no pair (x, y) ≥ 0 with ({0}−2)x + {0}y = {1}")]
    Infeasible(usize, usize),
    #[error("double scaling is summable only for 3 ≤ D ≤ 5, got D = {0}")]
    OutsideSummabilityRange(usize),
    #[error("1 − 4y = {0} < 0: z lies beyond the shifted singularity")]
    SquareRootDomain(f64),
    #[error("z = {0} outside (0, z₀)")]
    OutsideDisk(f64),
    #[error("series did not converge within {0} terms")]
    NoConvergence(usize),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularData {
    pub dim: usize,
    #[serde(serialize_with = "ser_ratio")]
    pub z0: BigRational,
    #[serde(serialize_with = "ser_ratio")]
    pub t0: BigRational,
    #[serde(serialize_with = "ser_ratio")]
    pub u0: BigRational,
    /// `T(z) ≈ T(z₀) − √(sqrt_arg)·√(1 − z/z₀)`.
    #[serde(serialize_with = "ser_ratio")]
    pub sqrt_arg: BigRational,
}

fn ser_ratio<S: serde::Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&crate::series::fraction(r))
}

fn int(n: usize) -> BigInt {
    BigInt::from(n)
}

pub fn singular_data(dim: usize) -> SingularData {
    let d = int(dim);
    let d1 = int(dim + 1);
    SingularData {
        dim,
        z0: BigRational::new(num::pow(d.clone(), dim), num::pow(d1.clone(), dim + 1)),
        t0: BigRational::new(d1.clone(), d.clone()),
        u0: BigRational::new(BigInt::one(), d.clone()),
        sqrt_arg: BigRational::new(2 * d1, num::pow(d, 3)),
    }
}

/// Optimum of `max 2x + 3y − 1` subject to `(D−2)x + Dy = δ`, `x, y ≥ 0` integers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LpResult {
    pub dim: usize,
    pub degree: usize,
    pub beta: Option<usize>,
    /// Every optimal `(x, y)`.
    pub optimal: Vec<(usize, usize)>,
}

impl LpResult {
    pub fn feasible(&self) -> bool {
        self.beta.is_some()
    }

    /// `(β + 1)/δ`, the growth rate of the dominant singular exponent.
    pub fn ratio(&self) -> Option<BigRational> {
        self.beta.map(|b| BigRational::new(int(b + 1), int(self.degree)))
    }
}

pub fn beta(dim: usize, degree: usize) -> LpResult {
    let a = dim - 2;
    let mut best: Option<usize> = None;
    let mut optimal = Vec::new();
    for x in 0..=degree / a {
        let rest = degree - a * x;
        if !rest.is_multiple_of(dim) {
            continue;
        }
        let y = rest / dim;
        if x + y == 0 {
            continue;
        }
        let v = 2 * x + 3 * y - 1;
        match best {
            Some(b) if v < b => {}
            Some(b) if v == b => optimal.push((x, y)),
            _ => {
                best = Some(v);
                optimal = vec![(x, y)];
            }
        }
    }
    LpResult { dim, degree, beta: best, optimal }
}

/// Shape of the dominant schemes for one optimal `(c₊, q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FamilyCase {
    /// `q = 0`: binary trees whose leaves are the root melon and unbroken loops.
    Trees,
    /// `c₊ = 0`: rooted trivalent graphs of broken chains.
    Trivalent,
    Mixed,
}

#[derive(Clone, Debug, Serialize)]
pub struct DominantFamily {
    pub dim: usize,
    pub degree: usize,
    pub c_plus: usize,
    pub q: usize,
    pub case: FamilyCase,
    /// Trivalent (D−2)-dipoles.
    pub nodes: usize,
    /// `2c₊ + 3q − 1`.
    pub broken_chains: usize,
    #[serde(skip)]
    pub schemes: Vec<Scheme>,
}

impl fmt::Display for DominantFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shape = match self.case {
            FamilyCase::Trees => format!("binary trees with {} leaves (root melon and {} unbroken loops)", self.c_plus + 1, self.c_plus),
            FamilyCase::Trivalent => format!("rooted trivalent graphs with cycle rank {}", self.q),
            FamilyCase::Mixed => format!("trivalent graphs with cycle rank {} and {} unbroken loop leaves", self.q, self.c_plus),
        };
        write!(
            f,
            "(c+, q) = ({}, {}): {shape}; {} (D-2)-dipoles, {} broken chains",
            self.c_plus, self.q, self.nodes, self.broken_chains
        )
    }
}

/// A stub is a regular vertex with one external color.
type Stub = (usize, usize);

/// Regular pairs with a few external colors, wired by broken chains and unbroken loops.
struct Skeleton {
    dim: usize,
    externals: Vec<Vec<usize>>,
    links: Vec<(Stub, Stub)>,
    loops: Vec<usize>,
}

impl Skeleton {
    /// Starts from the root melon, regular vertex 0 with external color 1.
    fn new(dim: usize) -> Self {
        Skeleton { dim, externals: vec![vec![1]], links: Vec::new(), loops: Vec::new() }
    }

    fn node(&mut self) -> usize {
        self.externals.push(vec![1, 2, 3]);
        self.externals.len() - 1
    }

    fn loop_leaf(&mut self) -> usize {
        self.externals.push(vec![1, 2, 3]);
        self.loops.push(self.externals.len() - 1);
        self.externals.len() - 1
    }

    fn link(&mut self, a: Stub, b: Stub) {
        self.links.push((a, b));
    }

    fn build(&self) -> Result<Scheme, SchemeError> {
        let mut edges = Vec::new();
        let mut chains = Vec::new();
        for (v, ext) in self.externals.iter().enumerate() {
            for c in (0..=self.dim).filter(|c| !ext.contains(c)) {
                edges.push(SchemeEdge { black: BlackEnd::Regular(v), white: WhiteEnd::Regular(v), color: c });
            }
        }
        let attach = |edges: &mut Vec<SchemeEdge>, ch: usize, end: usize, (v, c): Stub| {
            edges.push(SchemeEdge { black: BlackEnd::Port(ch, end), white: WhiteEnd::Regular(v), color: c });
            edges.push(SchemeEdge { black: BlackEnd::Regular(v), white: WhiteEnd::Port(ch, end), color: c });
        };
        for &(a, b) in &self.links {
            let ch = chains.len();
            chains.push(ChainKind::Broken(a.1, b.1));
            attach(&mut edges, ch, 0, a);
            attach(&mut edges, ch, 1, b);
        }
        for &v in &self.loops {
            let ch = chains.len();
            chains.push(ChainKind::UnbrokenDistinct(2, 3));
            attach(&mut edges, ch, 0, (v, 2));
            attach(&mut edges, ch, 1, (v, 3));
        }
        Ok(Scheme::new(self.dim, self.externals.len(), chains, edges, (BlackEnd::Regular(0), 0))?.canonical_form())
    }
}

/// Binary trees with ordered children.
#[derive(Clone, Debug)]
enum Tree {
    Leaf,
    Node(Box<Tree>, Box<Tree>),
}

fn trees(leaves: usize) -> Vec<Tree> {
    if leaves == 1 {
        return vec![Tree::Leaf];
    }
    let mut out = Vec::new();
    for l in 1..leaves {
        for a in trees(l) {
            for b in trees(leaves - l) {
                out.push(Tree::Node(Box::new(a.clone()), Box::new(b)));
            }
        }
    }
    out
}

fn grow(sk: &mut Skeleton, parent: Stub, t: &Tree) {
    match t {
        Tree::Leaf => {
            let v = sk.loop_leaf();
            sk.link(parent, (v, 1));
        }
        Tree::Node(a, b) => {
            let v = sk.node();
            sk.link(parent, (v, 1));
            grow(sk, (v, 2), a);
            grow(sk, (v, 3), b);
        }
    }
}

/// The pure-tree schemes with `n` unbroken loops: one per binary tree whose children
/// hang off colors 2 and 3.
pub fn tree_schemes(dim: usize, n: usize) -> Result<Vec<Scheme>, AsymptoticsError> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for t in trees(n) {
        let mut sk = Skeleton::new(dim);
        grow(&mut sk, (0, 1), &t);
        let s = sk.build()?;
        if seen.insert(s.canonical_encoding()) {
            out.push(s);
        }
    }
    Ok(out)
}

/// One representative for `(c₊, q)`: a path from the root melon through `c₊ − 1`
/// loop-carrying nodes and `q` bubbles, closed by a loop leaf or, if `c₊ = 0`, a
/// node whose two free colors are joined.
pub fn representative(dim: usize, c_plus: usize, q: usize) -> Result<Scheme, AsymptoticsError> {
    let mut sk = Skeleton::new(dim);
    let mut at: Stub = (0, 1);
    for _ in 1..c_plus {
        let v = sk.node();
        sk.link(at, (v, 1));
        let leaf = sk.loop_leaf();
        sk.link((v, 2), (leaf, 1));
        at = (v, 3);
    }
    let bubbles = if c_plus == 0 { q - 1 } else { q };
    for _ in 0..bubbles {
        let (a, b) = (sk.node(), sk.node());
        sk.link(at, (a, 1));
        sk.link((a, 2), (b, 2));
        sk.link((a, 3), (b, 3));
        at = (b, 1);
    }
    if c_plus == 0 {
        let v = sk.node();
        sk.link(at, (v, 1));
        sk.link((v, 2), (v, 3));
    } else {
        let leaf = sk.loop_leaf();
        sk.link(at, (leaf, 1));
    }
    Ok(sk.build()?)
}

/// Largest `c₊` for which all tree shapes are generated explicitly.
pub const TREE_LIMIT: usize = 6;

pub fn dominant_scheme_family(dim: usize, degree: usize) -> Result<Vec<DominantFamily>, AsymptoticsError> {
    let lp = beta(dim, degree);
    if !lp.feasible() {
        return Err(AsymptoticsError::Infeasible(dim, degree));
    }
    lp.optimal
        .iter()
        .map(|&(c_plus, q)| {
            let case = match (c_plus, q) {
                (_, 0) => FamilyCase::Trees,
                (0, _) => FamilyCase::Trivalent,
                _ => FamilyCase::Mixed,
            };
            let schemes = if q == 0 && c_plus <= TREE_LIMIT {
                tree_schemes(dim, c_plus)?
            } else {
                vec![representative(dim, c_plus, q)?]
            };
            Ok(DominantFamily {
                dim,
                degree,
                c_plus,
                q,
                case,
                nodes: c_plus + 2 * q - 1,
                broken_chains: 2 * c_plus + 3 * q - 1,
                schemes,
            })
        })
        .collect()
}

/// Checks degree, broken-chain count and recognition for a constructed scheme.
pub fn verify_dominant(s: &Scheme, degree: usize, beta: usize) -> Result<bool, AsymptoticsError> {
    let g = s.realize_minimal()?;
    Ok(g.degree() == degree && s.signature().broken() == beta && &scheme_of(&g)? == s)
}

/// Coefficient in front of the `n`-loop tree sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CaseACoefficient {
    /// `C(2n−2, n−1)/n!`.
    Factorial,
    /// `Cat(n−1) = C(2n−2, n−1)/n`.
    Catalan,
}

impl CaseACoefficient {
    pub fn value(self, n: usize) -> BigRational {
        let c = binomial(2 * n - 2, n - 1);
        let den = match self {
            CaseACoefficient::Factorial => (1..=n).fold(BigInt::one(), |a, i| a * int(i)),
            CaseACoefficient::Catalan => int(n),
        };
        BigRational::new(c, den)
    }
}

/// `coef·T·u·D·(Du/(1−Du))^{2n−1}·u^{2n−1}·C(D,2)^{2n−1}·(u/(1−u²))ⁿ` with `u = U(z)`.
pub fn case_a_contribution(dim: usize, n: usize, order: usize, coef: CaseACoefficient) -> PowerSeries {
    assert!(n >= 1, "at least one loop");
    let cd2 = binomial(dim, 2);
    let lead = RationalFunctionU {
        num: Poly::monomial(int(dim) * num::pow(cd2, 2 * n - 1), 2 * n),
        den: Poly::one(),
    };
    let loops = RationalFunctionU { num: Poly::monomial(BigInt::one(), 1), den: Poly::from_i64(&[1, 0, -1]) };
    let f = &(&lead * &chain_gf(ChainGf::A, dim).pow(2 * n as u32 - 1)) * &loops.pow(n as u32);
    let u = u_series(dim, order);
    let t = melonic_series(dim, order);
    (&t * &f.substitute(&u).expect("U has no constant term")).scale(&coef.value(n))
}

/// Both coefficients next to the number of distinct tree schemes actually generated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseAArbiter {
    pub n: usize,
    pub factorial: String,
    pub catalan: String,
    pub generated: usize,
    pub agrees: Vec<CaseACoefficient>,
}

pub fn case_a_arbiter(dim: usize, n: usize) -> Result<CaseAArbiter, AsymptoticsError> {
    let generated = tree_schemes(dim, n)?.len();
    let g = BigRational::from_integer(int(generated));
    let agrees = [CaseACoefficient::Factorial, CaseACoefficient::Catalan]
        .into_iter()
        .filter(|c| c.value(n) == g)
        .collect();
    Ok(CaseAArbiter {
        n,
        factorial: crate::series::fraction(&CaseACoefficient::Factorial.value(n)),
        catalan: crate::series::fraction(&CaseACoefficient::Catalan.value(n)),
        generated,
        agrees,
    })
}

/// `T(z)` summed from the Fuss-Catalan series, doubling the truncation until two
/// successive orders agree to `tol`.
pub fn melonic_value(dim: usize, z: f64, tol: f64) -> Result<f64, AsymptoticsError> {
    let z0 = singular_data(dim).z0.to_f64().expect("finite");
    if !(0.0..=z0).contains(&z) {
        return Err(AsymptoticsError::OutsideDisk(z));
    }
    const MAX: usize = 1 << 24;
    let d = dim as f64;
    let (mut sum, mut term, mut k) = (0.0f64, 1.0f64, 0usize);
    let partial = |upto: usize, sum: &mut f64, term: &mut f64, k: &mut usize| {
        while *k < upto {
            *sum += *term;
            let kf = *k as f64;
            let mut r = z * (d * kf + 1.0) / ((kf + 1.0) * (d * (kf + 1.0) + 1.0));
            for i in 1..=dim + 1 {
                r *= (d + 1.0) * kf + i as f64;
            }
            for i in 1..=dim {
                r /= d * kf + i as f64;
            }
            *term *= r;
            *k += 1;
        }
    };
    let mut order = 64;
    partial(order, &mut sum, &mut term, &mut k);
    loop {
        let prev = sum;
        order *= 2;
        if order > MAX {
            return Err(AsymptoticsError::NoConvergence(MAX));
        }
        partial(order, &mut sum, &mut term, &mut k);
        if (sum - prev).abs() <= tol * sum.abs() {
            return Ok(sum);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DoubleScaling {
    pub dim: usize,
    pub n: f64,
    pub z: f64,
    pub t: f64,
    pub u: f64,
    /// `1 − 4y`, the distance to the square-root boundary.
    pub discriminant: f64,
    pub value: f64,
    pub z1: f64,
}

/// `T·(1 + X(1 − √(1 − 4y)))` with `X = (1−Du)/(D(D−1)u)` and
/// `y = N^{−(D−2)}·(Du/(1−Du))²·u²·C(D,2)²·u/(1−u²)`.
pub fn double_scaling(dim: usize, n: f64, z: f64) -> Result<DoubleScaling, AsymptoticsError> {
    if !(3..=5).contains(&dim) {
        return Err(AsymptoticsError::OutsideSummabilityRange(dim));
    }
    let z0 = singular_data(dim).z0.to_f64().expect("finite");
    if !(z > 0.0 && z < z0) {
        return Err(AsymptoticsError::OutsideDisk(z));
    }
    let t = melonic_value(dim, z, 1e-15)?;
    let u = t - 1.0;
    let d = dim as f64;
    let cd2 = d * (d - 1.0) / 2.0;
    let a = d * u / (1.0 - d * u);
    let y = n.powi(-(dim as i32 - 2)) * a * a * u * u * cd2 * cd2 * u / (1.0 - u * u);
    let disc = 1.0 - 4.0 * y;
    if disc < 0.0 {
        return Err(AsymptoticsError::SquareRootDomain(disc));
    }
    let x = (1.0 - d * u) / (d * (d - 1.0) * u);
    let value = t * (1.0 + x * (1.0 - disc.sqrt()));
    let z1 = z0 * (1.0 - d * d / (2.0 * n.powi(dim as i32 - 2) * (d + 1.0).powi(3)));
    Ok(DoubleScaling { dim, n, z, t, u, discriminant: disc, value, z1 })
}

/// `z₁ = z₀·(1 − D²/(2N^{D−2}(D+1)³))`.
pub fn shifted_critical(dim: usize, n: u64) -> BigRational {
    let z0 = singular_data(dim).z0;
    let shift = BigRational::new(
        int(dim * dim),
        2 * num::pow(BigInt::from(n), dim - 2) * num::pow(int(dim + 1), 3),
    );
    z0 * (BigRational::one() - shift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::ratio;

    #[test]
    fn singular_d3() {
        let s = singular_data(3);
        assert_eq!(s.z0, ratio(27, 256));
        assert_eq!(s.t0, ratio(4, 3));
        assert_eq!(s.u0, ratio(1, 3));
        assert_eq!(singular_data(4).z0, ratio(256, 3125));
    }

    #[test]
    fn lp_examples() {
        let r = beta(3, 1);
        assert_eq!((r.beta, r.optimal.clone()), (Some(1), vec![(1, 0)]));
        let r = beta(6, 12);
        assert_eq!((r.beta, r.optimal), (Some(5), vec![(0, 2), (3, 0)]));
        let r = beta(7, 7);
        assert_eq!((r.beta, r.optimal), (Some(2), vec![(0, 1)]));
        assert!(!beta(7, 1).feasible());
    }

    #[test]
    fn lollipop() {
        let fam = dominant_scheme_family(3, 1).unwrap();
        assert_eq!(fam.len(), 1);
        let s = &fam[0].schemes[0];
        assert_eq!(s.signature().broken(), 1);
        assert!(verify_dominant(s, 1, 1).unwrap());
    }

    #[test]
    fn conventions() {
        assert_eq!(CaseACoefficient::Factorial.value(2), CaseACoefficient::Catalan.value(2));
        assert_eq!(CaseACoefficient::Factorial.value(4), ratio(20, 24));
        assert_eq!(CaseACoefficient::Catalan.value(4), ratio(5, 1));
    }

    #[test]
    fn shifted() {
        assert_eq!(shifted_critical(3, 5), ratio(27, 256) * (BigRational::one() - ratio(9, 640)));
    }
}
