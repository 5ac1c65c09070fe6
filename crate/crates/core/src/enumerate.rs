//! Exhaustive search over permutation tuples, the scheme catalog and explicit size bounds.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num::{BigRational, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{face_count, matchings_connected, ColoredGraph, Root};
use crate::reduction::is_melon_free;
use crate::scheme::{scheme_of, Scheme, SchemeError, Signature};
use crate::series::binomial;

pub const DEFAULT_BUDGET: u128 = 1_000_000_000;
pub const BUDGET_ENV: &str = "MELONFORGE_BUDGET";
/// Largest `k` searched before a `D = 3` catalog is reported as empirically complete.
pub const DEFAULT_D3_CAP: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumError {
    #[error("search over {states} states exceeds the budget of {budget}")]
    SearchTooLarge { states: u128, budget: u128 },
    #[error("dimension {0} is not supported here")]
    UnsupportedDimension(usize),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

/// State budget from the environment, or the default.
pub fn budget_from_env() -> u128 {
    std::env::var(BUDGET_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_BUDGET)
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// `(k!)^D`, the number of tuples once color 0 is fixed to the identity.
pub fn search_states(dim: usize, k: usize) -> u128 {
    let f = factorial(k);
    (0..dim).try_fold(1u128, |acc, _| acc.checked_mul(f)).unwrap_or(u128::MAX)
}

fn check_budget(dim: usize, k: usize, budget: u128) -> Result<(), EnumError> {
    let states = search_states(dim, k);
    if states > budget {
        return Err(EnumError::SearchTooLarge { states, budget });
    }
    Ok(())
}

/// Calls `visit` on every connected tuple with `matchings[0]` the identity, in parallel
/// over the value of `matchings[1]`, and merges the per-branch results in order.
fn search<T, F, M>(dim: usize, k: usize, budget: u128, init: impl Fn() -> T + Sync, visit: F, merge: M) -> Result<T, EnumError>
where
    T: Send,
    F: Fn(&mut T, &[Vec<usize>], usize) + Sync,
    M: Fn(T, T) -> T + Sync,
{
    check_budget(dim, k, budget)?;
    let perms: Vec<Vec<usize>> = (0..k).permutations(k).collect();
    let results: Vec<T> = perms
        .par_iter()
        .map(|m1| {
            let mut acc = init();
            let mut tuple: Vec<Vec<usize>> = vec![(0..k).collect(), m1.clone()];
            let mut scratch = Vec::new();
            rec(dim, &perms, &mut tuple, &mut scratch, &mut acc, &visit);
            acc
        })
        .collect();
    Ok(results.into_iter().fold(init(), merge))
}

fn rec<T, F: Fn(&mut T, &[Vec<usize>], usize)>(
    dim: usize,
    perms: &[Vec<usize>],
    tuple: &mut Vec<Vec<usize>>,
    scratch: &mut Vec<bool>,
    acc: &mut T,
    visit: &F,
) {
    if tuple.len() == dim + 1 {
        if matchings_connected(tuple) {
            let faces = face_count(tuple, scratch);
            let k = tuple[0].len();
            let delta = dim * (dim - 1) * k / 2 + dim - faces;
            visit(acc, tuple, delta);
        }
        return;
    }
    for p in perms {
        tuple.push(p.clone());
        rec(dim, perms, tuple, scratch, acc, visit);
        tuple.pop();
    }
}

/// Rooted graphs (root color 0) with `k` black vertices, by degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeCountTable {
    pub dim: usize,
    pub k: usize,
    pub counts: BTreeMap<usize, u128>,
}

impl DegreeCountTable {
    pub fn total(&self) -> u128 {
        self.counts.values().sum()
    }

    pub fn get(&self, degree: usize) -> u128 {
        self.counts.get(&degree).copied().unwrap_or(0)
    }
}

fn merge_counts(mut a: BTreeMap<usize, u128>, b: BTreeMap<usize, u128>) -> BTreeMap<usize, u128> {
    for (d, n) in b {
        *a.entry(d).or_default() += n;
    }
    a
}

/// Brute-force counts. Each rooted graph is hit by exactly `(k−1)!` tuples with color 0
/// fixed to the identity and root at black 0: rooted graphs have no nontrivial
/// automorphism, and `(k−1)!` relabelings keep black 0 and the identity matching.
pub fn count_rooted(dim: usize, k: usize) -> Result<DegreeCountTable, EnumError> {
    count_rooted_with_budget(dim, k, budget_from_env())
}

pub fn count_rooted_with_budget(dim: usize, k: usize, budget: u128) -> Result<DegreeCountTable, EnumError> {
    let labeled = search(
        dim,
        k,
        budget,
        BTreeMap::new,
        |acc: &mut BTreeMap<usize, u128>, _, delta| *acc.entry(delta).or_default() += 1,
        merge_counts,
    )?;
    let orbit = factorial(k - 1);
    let counts = labeled
        .into_iter()
        .map(|(d, n)| {
            assert_eq!(n % orbit, 0, "labeled count not divisible by (k-1)!");
            (d, n / orbit)
        })
        .collect();
    Ok(DegreeCountTable { dim, k, counts })
}

/// One representative per rooted class (root `(0, 0)`), in canonical form, with
/// `k` black vertices, optionally filtered.
pub fn enumerate_rooted(
    dim: usize,
    k: usize,
    budget: u128,
    keep: impl Fn(&ColoredGraph) -> bool + Sync,
) -> Result<Vec<ColoredGraph>, EnumError> {
    enumerate_rooted_of_degree(dim, k, budget, |_| true, keep)
}

/// As [`enumerate_rooted`], skipping tuples whose degree fails `degree_ok` before any
/// graph is built.
pub fn enumerate_rooted_of_degree(
    dim: usize,
    k: usize,
    budget: u128,
    degree_ok: impl Fn(usize) -> bool + Sync,
    keep: impl Fn(&ColoredGraph) -> bool + Sync,
) -> Result<Vec<ColoredGraph>, EnumError> {
    let found = search(
        dim,
        k,
        budget,
        BTreeMap::new,
        |acc: &mut BTreeMap<Vec<u8>, ColoredGraph>, tuple, delta| {
            if !degree_ok(delta) {
                return;
            }
            let g = ColoredGraph::new(dim, tuple.to_vec(), Some(Root::new(0, 0))).expect("connected tuple");
            let canon = g.canonical_form().expect("rooted");
            let key = canon.canonical_encoding().expect("rooted");
            if !acc.contains_key(&key) && keep(&canon) {
                acc.insert(key, canon);
            }
        },
        |mut a, b| {
            a.extend(b);
            a
        },
    )?;
    Ok(found.into_values().collect())
}

/// Every melon-free rooted graph (root color 0) with `2 ≤ k ≤ k_max`, once each.
pub fn enumerate_melon_free(dim: usize, k_max: usize) -> Result<Vec<ColoredGraph>, EnumError> {
    enumerate_melon_free_with_budget(dim, k_max, budget_from_env())
}

pub fn enumerate_melon_free_with_budget(dim: usize, k_max: usize, budget: u128) -> Result<Vec<ColoredGraph>, EnumError> {
    let mut out = Vec::new();
    for k in 2..=k_max {
        out.extend(enumerate_rooted(dim, k, budget, is_melon_free)?);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Completeness {
    /// The search reached the proven size bound.
    Proven,
    /// `D = 3`: the search reached the configured cap; no proof of completeness.
    EmpiricalCap,
    /// Only schemes realizable with at most `k_max` black vertices are guaranteed.
    Partial,
}

#[derive(Clone, Debug)]
pub struct SchemeCatalog {
    pub dim: usize,
    pub degree: usize,
    pub k_max: usize,
    pub completeness: Completeness,
    /// Keyed by canonical scheme encoding.
    pub schemes: BTreeMap<Vec<u8>, Scheme>,
}

impl SchemeCatalog {
    pub fn schemes(&self) -> Vec<Scheme> {
        self.schemes.values().cloned().collect()
    }

    pub fn signatures(&self) -> BTreeMap<Signature, usize> {
        self.schemes.values().map(Scheme::signature).counts().into_iter().collect()
    }
}

/// Schemes of degree `degree` whose minimal realization has at most `k_max` black vertices.
pub fn scheme_catalog(dim: usize, degree: usize, k_max: usize) -> Result<SchemeCatalog, EnumError> {
    scheme_catalog_with(dim, degree, k_max, budget_from_env(), DEFAULT_D3_CAP)
}

pub fn scheme_catalog_with(
    dim: usize,
    degree: usize,
    k_max: usize,
    budget: u128,
    d3_cap: usize,
) -> Result<SchemeCatalog, EnumError> {
    let mut schemes = BTreeMap::new();
    for k in 2..=k_max {
        let graphs = enumerate_rooted_of_degree(dim, k, budget, |d| d == degree, is_melon_free)?;
        let found: Vec<Scheme> = graphs.par_iter().map(scheme_of).collect::<Result<_, _>>()?;
        for s in found {
            schemes.entry(s.canonical_encoding()).or_insert(s);
        }
    }
    let completeness = if dim == 3 {
        if k_max >= d3_cap { Completeness::EmpiricalCap } else { Completeness::Partial }
    } else {
        let horizon = size_bounds(dim, degree, 15 * degree, 10 * degree)?.k_max;
        if k_max as f64 >= horizon { Completeness::Proven } else { Completeness::Partial }
    };
    Ok(SchemeCatalog { dim, degree, k_max, completeness, schemes })
}

/// `α(D)`: 0, 3, 6 for `D = 4, 5, 6`, then `(D−3)(D−4)/2 + 6`.
pub fn alpha(dim: usize) -> usize {
    match dim {
        4 => 0,
        5 => 3,
        6 => 6,
        _ => (dim - 3) * (dim - 4) / 2 + 6,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SizeBounds {
    pub dim: usize,
    pub degree: usize,
    /// `κ(p)`: coefficient of `F_p` in the final inequality, as an exact fraction.
    pub kappa_slope: (i64, i64),
    pub kappa_offset: i64,
    /// Right-hand side `R` bounding `Σ_p κ(p)·F_p`.
    pub rhs: f64,
    /// `F_p ≤ bound` for `p = 2, …, max_face`.
    pub face_bounds: BTreeMap<usize, f64>,
    pub max_face: usize,
    /// Bound on the number of black vertices.
    pub k_max: f64,
}

/// Explicit bounds on the faces and size of a melon-free graph of degree `degree`
/// with `t1` (D−1)-dipoles and `t2` (D−2)-dipoles.
pub fn size_bounds(dim: usize, degree: usize, t1: usize, t2: usize) -> Result<SizeBounds, EnumError> {
    if dim < 4 {
        return Err(EnumError::UnsupportedDimension(dim));
    }
    let a = alpha(dim) as i64;
    let d = dim as i64;
    let n = d * (d + 1) - 2 * a;
    // κ(p) = (D − 1 − 4α/n)·p − D − 1
    let slope = BigRational::new(((d - 1) * n - 4 * a).into(), n.into());
    let kappa = |p: usize| (&slope * BigRational::from_integer((p as i64).into()) - BigRational::from_integer((d + 1).into())).to_f64().expect("finite");
    let dipole_faces = (t1 as u64 as f64) * binomial(dim - 1, 2).to_f64().expect("small") + (t2 as f64) * binomial(dim - 2, 2).to_f64().expect("small");
    let rhs = ((d + 1) * degree as i64 - d * (d + 1)) as f64 + (2.0 + 4.0 * a as f64 / n as f64) * dipole_faces;
    let mut face_bounds = BTreeMap::new();
    let mut max_face = 1;
    if rhs >= 0.0 {
        let mut p = 2;
        while kappa(p) <= rhs || kappa(p) <= 0.0 {
            let kp = kappa(p);
            face_bounds.insert(p, if kp > 0.0 { rhs / kp } else { f64::INFINITY });
            max_face = p;
            p += 1;
        }
    }
    let k_max = (2.0 * rhs.max(0.0) / kappa(2) + dipole_faces) / ((d * (d + 1) / 2 - a) as f64);
    let g = num::integer::gcd((d - 1) * n - 4 * a, n);
    Ok(SizeBounds {
        dim,
        degree,
        kappa_slope: (((d - 1) * n - 4 * a) / g, n / g),
        kappa_offset: -(d + 1),
        rhs,
        face_bounds,
        max_face,
        k_max,
    })
}

/// Distinct rooted classes counted by applying every relabeling, used to validate the
/// `(k−1)!` conversion at small sizes.
pub fn orbit_count(dim: usize, k: usize) -> Result<usize, EnumError> {
    Ok(enumerate_rooted(dim, k, budget_from_env(), |_| true)?.len())
}

/// Distinct rooted classes counted by canonical encodings of every labeled graph,
/// including those whose root is not at black 0.
pub fn orbit_count_unfixed(dim: usize, k: usize) -> usize {
    let perms: Vec<Vec<usize>> = (0..k).permutations(k).collect();
    let mut seen = BTreeSet::new();
    for tuple in (0..=dim).map(|_| perms.iter()).multi_cartesian_product() {
        let m: Vec<Vec<usize>> = tuple.into_iter().cloned().collect();
        if !matchings_connected(&m) {
            continue;
        }
        for b in 0..k {
            let g = ColoredGraph::new(dim, m.clone(), Some(Root::new(b, 0))).expect("connected");
            seen.insert(g.canonical_encoding().expect("rooted"));
        }
    }
    seen.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let t = count_rooted(3, 1).unwrap();
        assert_eq!(t.counts, BTreeMap::from([(0, 1)]));
        let t = count_rooted(3, 2).unwrap();
        assert_eq!(t.counts, BTreeMap::from([(0, 4), (1, 3)]));
        assert_eq!(t.total(), 7);
    }

    #[test]
    fn budget_refusal() {
        assert!(matches!(count_rooted_with_budget(3, 6, 1000), Err(EnumError::SearchTooLarge { .. })));
    }

    #[test]
    fn melon_free_k2() {
        let g = enumerate_melon_free(3, 2).unwrap();
        assert_eq!(g.len(), 3);
        assert!(g.iter().all(|g| g.degree() == 1));
        assert!(enumerate_melon_free(3, 1).unwrap().is_empty());
    }

    #[test]
    fn alpha_and_kappa() {
        assert_eq!(size_bounds(4, 1, 0, 0).unwrap().kappa_slope, (3, 1));
        assert_eq!(size_bounds(4, 1, 0, 0).unwrap().kappa_offset, -5);
        assert_eq!(size_bounds(5, 1, 0, 0).unwrap().kappa_slope, (7, 2));
        assert_eq!(size_bounds(6, 1, 0, 0).unwrap().kappa_slope, (21, 5));
        assert_eq!(6 * 7 / 2 - alpha(6), 15);
        assert_eq!(size_bounds(3, 1, 0, 0), Err(EnumError::UnsupportedDimension(3)));
    }

    #[test]
    fn rigidity_conversion() {
        for k in 1..=3 {
            let t = count_rooted(3, k).unwrap();
            assert_eq!(orbit_count(3, k).unwrap() as u128, t.total());
        }
        assert_eq!(orbit_count_unfixed(3, 2) as u128, count_rooted(3, 2).unwrap().total());
    }
}
