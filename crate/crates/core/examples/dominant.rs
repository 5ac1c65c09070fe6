//! Which schemes dominate at large degree, and how many there are.
use melonforge::asymptotics::{beta, case_a_arbiter, dominant_scheme_family, verify_dominant};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (dim, degree) in [(3, 1), (3, 3), (4, 4), (6, 12), (7, 7)] {
        let lp = beta(dim, degree);
        println!("D = {dim}, δ = {degree}: β = {:?}, optimal {:?}", lp.beta, lp.optimal);
    }
    for fam in dominant_scheme_family(3, 4)? {
        println!("{fam}");
        let ok = fam.schemes.iter().all(|s| verify_dominant(s, 4, fam.broken_chains).unwrap_or(false));
        println!("  {} scheme(s) built, all verified: {ok}", fam.schemes.len());
    }
    for n in 1..=5 {
        let a = case_a_arbiter(3, n)?;
        println!("n = {n}: 1/n! form {}, Catalan form {}, trees built {}", a.factorial, a.catalan, a.generated);
    }
    Ok(())
}
