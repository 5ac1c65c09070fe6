use std::sync::OnceLock;

use melonforge::asymptotics::{
    beta, case_a_contribution, double_scaling, melonic_value, shifted_critical, singular_data, AsymptoticsError,
    CaseACoefficient,
};
use melonforge::dipole::{audit_dipoles, iterative_reduction_stats, remove_chain_vertex_with};
use melonforge::enumerate::scheme_catalog;
use melonforge::reduction::{core, find_melons, insert_melon, is_melonic, remove_melon};
use melonforge::scheme::{scheme_of, ChainKind, Scheme};
use melonforge::series::{binomial, melonic_series, ratio, u_series, PowerSeries};
use melonforge::{ColoredGraph, Root};
use num::{BigRational, ToPrimitive};
use proptest::prelude::*;
use proptest::sample::Index;

fn perm(k: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..k).collect::<Vec<_>>()).prop_shuffle()
}

/// Connected rooted graphs with up to `k_max` black vertices.
fn graph(dims: std::ops::RangeInclusive<usize>, k_max: usize) -> impl Strategy<Value = ColoredGraph> {
    (dims, 1..=k_max)
        .prop_flat_map(|(dim, k)| (Just(dim), prop::collection::vec(perm(k), dim + 1), 0..=dim))
        .prop_filter_map("disconnected", |(dim, m, c)| ColoredGraph::new(dim, m, Some(Root::new(0, c))).ok())
}

fn catalog() -> &'static [Scheme] {
    static CAT: OnceLock<Vec<Scheme>> = OnceLock::new();
    CAT.get_or_init(|| scheme_catalog(3, 1, 5).unwrap().schemes())
}

/// A random color sequence realizing `kind`, falling back to the minimal one.
fn sequence(kind: ChainKind, dim: usize, extra: usize, mut pick: impl FnMut(usize) -> usize) -> Vec<usize> {
    let mut base = kind.minimal_colors(dim);
    if !kind.is_broken() {
        for _ in 0..extra {
            let n = base.len();
            base.extend([base[n - 2], base[n - 1]]);
        }
        return base;
    }
    let ends = kind.ends();
    for _ in 0..50 {
        let len = base.len() + extra;
        let mut seq = vec![ends[0]];
        while seq.len() < len - 1 {
            let prev = *seq.last().unwrap();
            let c = (prev + 1 + pick(dim)) % (dim + 1);
            seq.push(c);
        }
        seq.push(ends[1]);
        if ChainKind::from_colors(&seq) == Some(kind) {
            return seq;
        }
    }
    base
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 300, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn encoding_invariant_under_relabelling(g in graph(3..=5, 5), seed in any::<u64>()) {
        let k = g.k();
        let mut bp: Vec<usize> = (0..k).collect();
        let mut wp: Vec<usize> = (0..k).collect();
        let mut s = seed;
        for i in (1..k).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            bp.swap(i, (s >> 33) as usize % (i + 1));
            wp.swap(i, (s >> 17) as usize % (i + 1));
        }
        let h = g.relabel(&bp, &wp);
        prop_assert_eq!(h.canonical_encoding().unwrap(), g.canonical_encoding().unwrap());
        let c = g.canonical_form().unwrap();
        prop_assert_eq!(c.canonical_form().unwrap(), c);
    }

    #[test]
    fn degree_identities(g in graph(3..=6, 5)) {
        prop_assert_eq!(g.degree_via_jackets().unwrap(), g.degree());
        prop_assert!(g.face_identities().all());
        prop_assert_eq!(g.checked_degree().unwrap(), g.degree());
    }

    #[test]
    fn melon_insertion_keeps_degree(g in graph(3..=5, 4), b in any::<Index>(), c in any::<Index>(), side in any::<bool>()) {
        let e = Root::new(b.index(g.k()), c.index(g.dim() + 1));
        let h = insert_melon(&g, e, side);
        prop_assert_eq!(h.degree(), g.degree());
        prop_assert_eq!(h.k(), g.k() + 1);
        for m in find_melons(&h) {
            if h.k() > 1 {
                prop_assert_eq!(remove_melon(&h, m).unwrap().degree(), g.degree());
            }
        }
    }

    #[test]
    fn core_reassembles(g in graph(3..=4, 4), inserts in prop::collection::vec((any::<Index>(), any::<Index>(), any::<bool>()), 0..8)) {
        let mut h = g;
        for (b, c, side) in inserts {
            let e = Root::new(b.index(h.k()), c.index(h.dim() + 1));
            h = insert_melon(&h, e, side);
        }
        let dec = core(&h).unwrap();
        prop_assert_eq!(dec.reassemble().unwrap().canonical_encoding().unwrap(), h.canonical_encoding().unwrap());
        prop_assert_eq!(dec.core.is_none(), is_melonic(&h));
        if let Some(c) = &dec.core {
            prop_assert_eq!(c.degree(), h.degree());
        }
    }

    #[test]
    fn dipole_removals_match_prediction(g in graph(3..=5, 5)) {
        for (dip, rep) in audit_dipoles(&g) {
            prop_assert!(rep.consistent(), "{:?} {:?}", dip, rep);
        }
    }

    #[test]
    fn substitution_keeps_degree_and_scheme(i in any::<Index>(), extra in prop::collection::vec(0usize..4, 8), picks in prop::collection::vec(0usize..64, 64)) {
        let s = &catalog()[i.index(catalog().len())];
        let mut it = picks.into_iter().cycle();
        let seqs: Vec<Vec<usize>> = s
            .chains()
            .iter()
            .zip(extra.iter().cycle())
            .map(|(&kind, &e)| sequence(kind, 3, e, |d| it.next().unwrap() % d))
            .collect();
        let g = s.realize(&seqs).unwrap();
        prop_assert_eq!(g.degree(), s.degree());
        prop_assert_eq!(&scheme_of(&g).unwrap(), s);
        for v in 0..s.chains().len() {
            let (_, r) = remove_chain_vertex_with(s, v, &seqs).unwrap();
            prop_assert_eq!(r.predicted_delta, r.actual_delta);
        }
    }

    #[test]
    fn series_reciprocal(coeffs in prop::collection::vec(-20i64..20, 1..10)) {
        let mut c = coeffs;
        c[0] = 1 + c[0].abs();
        let s = PowerSeries::from_integers(c, 9);
        let r = s.reciprocal().unwrap();
        prop_assert_eq!(&s * &r, PowerSeries::one(9));
    }

    #[test]
    fn lp_optimum_is_maximal(dim in 3usize..9, degree in 1usize..80) {
        let lp = beta(dim, degree);
        let mut best = None;
        for x in 0..=degree {
            for y in 0..=degree {
                if x + y > 0 && (dim - 2) * x + dim * y == degree {
                    best = best.max(Some(2 * x + 3 * y - 1));
                }
            }
        }
        prop_assert_eq!(lp.beta, best);
        for &(x, y) in &lp.optimal {
            prop_assert_eq!((dim - 2) * x + dim * y, degree);
            prop_assert_eq!(Some(2 * x + 3 * y - 1), lp.beta);
        }
    }

    #[test]
    fn shifted_point_is_below_critical(dim in 3usize..8, n in 1u64..1_000_000) {
        prop_assert!(shifted_critical(dim, n) < singular_data(dim).z0);
    }
}

#[test]
fn reduction_bounds_on_catalog() {
    for s in catalog() {
        let st = iterative_reduction_stats(s).unwrap();
        assert!(st.violations().is_empty(), "{st:?}");
        assert!(st.r + st.s + st.t <= 5 * st.degree);
        if st.skipped == 0 {
            assert_eq!(st.thin_zero_components(), 0, "{st:?}");
        }
    }
}

#[test]
fn lollipop_term() {
    let order = 8;
    let d = 3usize;
    let u = u_series(d, order);
    let t = melonic_series(d, order);
    let one = PowerSeries::one(order);
    let du = u.scale(&ratio(d as i64, 1));
    let a = &du * &(&one - &du).reciprocal().unwrap();
    let loop_ = &u * &(&one - &u.pow(2)).reciprocal().unwrap();
    let cd2 = BigRational::from_integer(binomial(d, 2));
    let expect = (&(&(&(&t * &u) * &a) * &u) * &loop_).scale(&(cd2 * ratio(d as i64, 1)));
    for coef in [CaseACoefficient::Factorial, CaseACoefficient::Catalan] {
        assert_eq!(case_a_contribution(d, 1, order, coef), expect);
    }
    let f = case_a_contribution(d, 3, order, CaseACoefficient::Factorial);
    let c = case_a_contribution(d, 3, order, CaseACoefficient::Catalan);
    assert_eq!(f.scale(&ratio(2, 1)), c);
}

#[test]
fn catalan_resummation() {
    let cat: Vec<f64> = (0..=30u64).map(|n| (binomial(2 * n as usize, n as usize) / (n + 1)).to_f64().unwrap()).collect();
    let mut x = 0.1f64;
    while x >= 1e-12 {
        let series: f64 = cat.iter().enumerate().map(|(n, c)| c * x.powi(n as i32)).sum();
        let closed = (1.0 - (1.0 - 4.0 * x).sqrt()) / (2.0 * x);
        // the closed form loses about log10(1/x) digits to cancellation
        assert!((series - closed).abs() <= 1e-15 / x, "x = {x}: {series} vs {closed}");
        x /= 10.0;
    }
}

#[test]
fn melonic_value_approaches_critical_value() {
    let z0 = singular_data(3).z0.to_f64().unwrap();
    let t60 = melonic_series(3, 60);
    let mut last_gap = f64::INFINITY;
    for eps in [1e-1, 1e-2, 1e-3, 1e-4] {
        let t = t60.eval_f64(z0 * (1.0 - eps));
        let gap = 4.0 / 3.0 - t;
        assert!(gap > 0.0 && gap < last_gap);
        last_gap = gap;
    }
    let adaptive = melonic_value(3, z0 * (1.0 - 1e-6), 1e-9).unwrap();
    assert!((4.0 / 3.0 - adaptive).abs() < 1e-2);
}

#[test]
fn double_scaling_domain() {
    assert_eq!(double_scaling(6, 10.0, 0.01), Err(AsymptoticsError::OutsideSummabilityRange(6)));
    let z0 = singular_data(3).z0.to_f64().unwrap();
    assert!(matches!(double_scaling(3, 1.0, z0 * 0.999), Err(AsymptoticsError::SquareRootDomain(_))));
    assert!(matches!(double_scaling(3, 10.0, z0 * 1.1), Err(AsymptoticsError::OutsideDisk(_))));
    let near = double_scaling(4, 1e4, 0.02).unwrap();
    assert!(near.discriminant > 0.0 && near.value > near.t);
}
