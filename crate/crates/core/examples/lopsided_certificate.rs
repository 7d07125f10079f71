//! Local pseudo-densities against `(1 − Σx)²` under the biased measure
//! `μ(1) = 2/m`.

use sosrank::pseudo::{
    lopsided_function, lopsided_pseudo_density, lopsided_rebalanced_pseudo_density, validate_local_pseudo_density,
    PseudoDensity,
};

fn describe(name: &str, d: &PseudoDensity) -> sosrank::Result<()> {
    let m = d.m();
    let mu = d.measure();
    let f = lopsided_function(m)?;
    let pair: f64 = d.function().values().iter().zip(f.values()).zip(mu.weights()).map(|((a, b), w)| a * b * w).sum();
    let degrees: Vec<String> = (1..=m)
        .map(|k| {
            let v = validate_local_pseudo_density(d, k, mu, 1e-10).unwrap();
            format!("{k}:{}", if v.passed { "ok" } else { "no" })
        })
        .collect();
    println!(
        "{name:<10} m {m}  claimed {}  E D f = {:+.4}  |D|_inf = {:.3}  local {}",
        d.claimed_degree(),
        pair,
        d.sup_norm(),
        degrees.join(" ")
    );
    Ok(())
}

fn main() -> sosrank::Result<()> {
    for m in 3..=8 {
        describe("original", &lopsided_pseudo_density(m)?)?;
        describe("rebalanced", &lopsided_rebalanced_pseudo_density(m)?)?;
    }
    Ok(())
}
