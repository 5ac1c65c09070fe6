//! Melon insertion, core extraction and reassembly.
use melonforge::reduction::{core, core_graph_with, find_melons, insert_melon, is_melonic};
use melonforge::{ColoredGraph, Root};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let base = ColoredGraph::square(3, 1);
    println!("base: k = {}, degree = {}, melons = {}", base.k(), base.degree(), find_melons(&base).len());

    let mut g = insert_melon(&base, Root::new(0, 2), false);
    g = insert_melon(&g, Root::new(1, 1), true);
    g = insert_melon(&g, Root::new(2, 0), false);
    println!("decorated: k = {}, degree = {}, melons = {}", g.k(), g.degree(), find_melons(&g).len());

    let dec = core(&g)?;
    let c = dec.core.as_ref().expect("the square survives");
    println!("core: k = {}, degree = {}", c.k(), c.degree());
    println!("vertices in attached melonic pieces: {}", dec.attachment_vertices());
    for (slot, piece) in &dec.slots {
        if let Some(p) = piece {
            println!("  {slot:?}: {} black vertices", p.k());
        }
    }
    assert_eq!(dec.reassemble()?.canonical_encoding()?, g.canonical_encoding()?);

    // removal order does not matter
    let first = core_graph_with(&g, |_| 0).map(|c| c.canonical_encoding());
    let last = core_graph_with(&g, |m| m.len() - 1).map(|c| c.canonical_encoding());
    println!("same core in both orders: {}", first == last);

    let tree = insert_melon(&ColoredGraph::elementary(3), Root::new(0, 1), true);
    println!("melonic: {} (square: {})", is_melonic(&tree), is_melonic(&base));
    Ok(())
}
