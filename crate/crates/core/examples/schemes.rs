//! Chains of dipoles, scheme extraction and realization with longer chains.
use melonforge::scheme::{find_maximal_proper_chains, scheme_of, ChainKind};
use melonforge::series::scheme_gf;
use melonforge::enumerate::enumerate_rooted;
use melonforge::reduction::is_melon_free;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let graphs = enumerate_rooted(3, 5, u128::MAX, |g| g.degree() == 1 && is_melon_free(g))?;
    let g = graphs
        .iter()
        .find(|g| find_maximal_proper_chains(g).iter().any(|c| c.len() >= 3))
        .expect("a degree-1 core with a long chain");
    for c in find_maximal_proper_chains(g) {
        println!("chain of {} dipoles, colors {:?}: {}", c.len(), c.colors, c.kind());
    }

    let s = scheme_of(g)?;
    println!("scheme: {} regular pairs, chain-vertices {:?}", s.regular(), s.chains());
    println!("signature {:?}, degree {}", s.signature(), s.degree());
    println!("G_S as a series in u: {}", scheme_gf(&s.signature(), 3).expand(8));

    // every chain-vertex may be realized by any chain of its kind
    let mut seqs = s.minimal_sequences();
    for (seq, kind) in seqs.iter_mut().zip(s.chains()) {
        if !kind.is_broken() {
            let n = seq.len();
            seq.extend([seq[n - 2], seq[n - 1]]);
        }
        assert_eq!(ChainKind::from_colors(seq), Some(*kind));
    }
    let long = s.realize(&seqs)?;
    println!("longer realization: k = {}, degree = {}", long.k(), long.degree());
    assert_eq!(scheme_of(&long)?, s);
    Ok(())
}
