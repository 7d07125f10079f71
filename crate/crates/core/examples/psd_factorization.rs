//! Explicit psd factorization of a pattern matrix from a degree-4 sos
//! certificate, checked entry by entry.

use sosrank::cube::binomial;
use sosrank::liftmat::{explicit_psd_factorization, verify_psd_factorization, PatternMatrix};
use sosrank::pseudo::knapsack_function;
use sosrank::sos::sos_degree;

fn main() -> sosrank::Result<()> {
    let f = knapsack_function(3)?;
    let s = sos_degree(&f, 1e-7)?;
    println!("sos degree {}", s.degree);
    for n in [4, 6, 8, 10] {
        let fact = explicit_psd_factorization(&f, &s.certificate, n)?;
        let rep = verify_psd_factorization(&PatternMatrix::new(f.clone(), n)?, &fact, 1e-8);
        let formula: u64 = (0..=2).map(|i| binomial(n, i)).sum();
        println!(
            "n {n:>2}: r = {:>3} (sum C(n,i) = {formula}, 1 + n^2 = {})  entries {}  max residual {:.1e}  {}",
            fact.r,
            1 + n * n,
            rep.entries_checked,
            rep.max_residual,
            if rep.passed { "ok" } else { "FAILED" }
        );
    }
    Ok(())
}
