//! Face accounting for dipole and chain-vertex removal, and the marked deletion counts.
use melonforge::dipole::{audit_dipoles, iterative_reduction_stats, remove_chain_vertex};
use melonforge::enumerate::scheme_catalog;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cat = scheme_catalog(4, 4, 3)?;
    let s = cat.schemes().into_iter().find(|s| !s.chains().is_empty()).expect("a scheme with chains");
    let g = s.realize_minimal()?;
    println!("D = 4 scheme of degree {}, k = {}", s.degree(), g.k());

    for (dip, rep) in audit_dipoles(&g) {
        println!(
            "remove ({}, {}) q = {}: {} component(s), type-b {:?}, {:?}, predicted {} actual {}",
            dip.black, dip.white, rep.q, rep.components, rep.type_b, rep.case, rep.predicted_delta, rep.actual_delta
        );
    }
    for v in 0..s.chains().len() {
        let (parts, r) = remove_chain_vertex(&s, v)?;
        println!("chain-vertex {v} ({}): case {:?}, {} part(s), drop {}", s.chains()[v], r.case, parts.len(), r.actual_delta);
    }

    let st = iterative_reduction_stats(&s)?;
    println!(
        "r + s + t = {} <= 5δ = {}; p = {}, q1 = {}, q2 = {}, q' = {}, q'' = {}",
        st.r + st.s + st.t,
        5 * st.degree,
        st.p,
        st.q1,
        st.q2,
        st.q_prime,
        st.q_second
    );
    assert!(st.violations().is_empty());
    Ok(())
}
