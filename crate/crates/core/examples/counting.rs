//! Brute-force counts of rooted connected graphs by degree.
use melonforge::enumerate::count_rooted;
use melonforge::series::fuss_catalan;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dim = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(3);
    for k in 1..=4 {
        let t = count_rooted(dim, k)?;
        let row: Vec<String> = t.counts.iter().map(|(d, n)| format!("{d}:{n}")).collect();
        println!("k = {k}: {}  (total {})", row.join(" "), t.total());
        assert_eq!(t.get(0), fuss_catalan(dim, k).try_into().unwrap_or(0u128));
    }
    Ok(())
}
