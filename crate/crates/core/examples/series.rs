//! Degree-1 generating function at D = 3 three ways: brute force, scheme catalog, closed form.
use melonforge::enumerate::{count_rooted, scheme_catalog};
use melonforge::series::{assemble_degree_series, closed_form_f_dminus2, melonic_series};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("T(z) = {}", melonic_series(3, 6));
    let cat = scheme_catalog(3, 1, 5)?;
    println!("{} schemes of degree 1 (k <= {}, {:?})", cat.schemes.len(), cat.k_max, cat.completeness);
    for (sig, n) in cat.signatures() {
        println!("  {sig:?}: {n}");
    }
    let assembled = assemble_degree_series(3, &cat.schemes(), 5)?;
    let closed = closed_form_f_dminus2(3, 5);
    println!("assembled   {assembled}");
    println!("closed form {closed}");
    for k in 2..=5 {
        let brute = count_rooted(3, k)?.get(1);
        println!("k = {k}: brute force {brute}, assembled {}, closed form {}", assembled.coeff(k), closed.coeff(k));
    }
    Ok(())
}
