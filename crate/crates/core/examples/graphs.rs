//! Building colored graphs, reading off faces and degree, and canonical labels.
use melonforge::{ColoredGraph, GraphRecord, Root};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // two black and two white vertices; colors 0,1 parallel, 2,3 crossed
    let g = ColoredGraph::new(3, vec![vec![0, 1], vec![0, 1], vec![1, 0], vec![1, 0]], Some(Root::new(0, 0)))?;
    println!("k = {}, faces = {}, degree = {}", g.k(), g.face_count(), g.degree());
    println!("degree from jackets = {}", g.degree_via_jackets()?);
    println!("face identities hold: {}", g.face_identities().all());

    let same = g.relabel(&[1, 0], &[1, 0]);
    println!("relabelled copy has the same encoding: {}", same.canonical_encoding()? == g.canonical_encoding()?);

    let json = serde_json::to_string(&GraphRecord::from(&g))?;
    println!("{json}");
    let back: GraphRecord = serde_json::from_str(&json)?;
    assert_eq!(back.validate()?, g);

    let delta = ColoredGraph::elementary(4);
    println!("elementary melon at D=4: degree {}", delta.degree());
    Ok(())
}
