//! Rescaling a psd factorization so the row factors average to the identity.

use sosrank::liftmat::{pre_balance, random_psd_factorization, rescale_factorization, EntryMatrix};
use sosrank::rng::SplitMix64;

fn main() -> sosrank::Result<()> {
    let mut rng = SplitMix64::new(42);
    let fact = random_psd_factorization(5, 3, 30, 40, &mut rng)?;
    let m = fact.to_dense()?;
    let b = pre_balance(&fact)?;
    println!("balance t = {:.4}, product {:.4} -> {:.4}", b.t, b.product_before, b.product_after);
    for eta in [0.1, 0.5, 1.0] {
        let rep = rescale_factorization(&m, &fact, eta)?.report;
        println!(
            "eta {eta}: item1 {:.1e}  item2 {:.1e}  |P| {:.3} <= {:.3} (rank form {:.1})  λmax(Q) {:.3} <= {:.3}  {:?}",
            rep.item1_violation,
            rep.item2_error,
            rep.max_p_norm,
            rep.p_bound_balanced,
            rep.p_bound_rank,
            rep.max_q_eigenvalue,
            rep.q_bound_balanced,
            rep.items
        );
    }
    Ok(())
}
