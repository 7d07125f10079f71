//! Gibbs states, squared Taylor approximations and low-degree squares.

use sosrank::learn::{gibbs_check, low_degree_square_approx, taylor_degree, taylor_error, taylor_square_approx};
use sosrank::rng::SplitMix64;
use sosrank::symmat::{DensityMatrix, SymMatrix};

fn main() -> sosrank::Result<()> {
    let mut rng = SplitMix64::new(11);
    let a = SymMatrix::from_fn(6, |_, _| rng.normal());
    let f = a.scale(3.0 / a.operator_norm()?);
    for eps in [0.1, 0.01] {
        let t = taylor_square_approx(&f, eps)?;
        println!("eps {eps}: k = {} error {:.2e}", t.k, t.error);
    }
    for k in [0, 2, 4, 8, 16] {
        println!("  k {k:>2}: error {:.3e}", taylor_error(&f, k)?);
    }
    println!("k for tau 10, eps 1e-3: {}", taylor_degree(10.0, 1e-3));

    let v: Vec<f64> = (0..6).map(|_| rng.normal()).collect();
    let q = DensityMatrix::normalized(SymMatrix::outer(&v).add(&SymMatrix::scalar(6, 0.05)))?;
    let c = gibbs_check(&f, 0.0, &q, 0.1)?;
    let c = gibbs_check(&f, c.lambda_required, &q, 0.1)?;
    println!("gibbs at λ = {:.2}: Tr(F X) {:.4} <= Tr(F Q) + ε = {:.4}", c.lambda_required, c.value, c.reference + 0.1);
    let s = low_degree_square_approx(&f, &q, 0.1)?;
    println!(
        "low-degree square: degree {} (bound {:.1}), Tr(F p²) {:.4} vs Tr(F Q) {:.4}",
        s.degree, s.degree_bound, s.value, s.reference
    );
    Ok(())
}
