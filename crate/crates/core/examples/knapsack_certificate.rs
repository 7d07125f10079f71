//! The knapsack pseudo-density: mean one, psd moment matrix and zero mass on
//! `(Σx − m/2)²`, although that square is positive on the whole cube.

use sosrank::cube::{popcount, CubeFunction};
use sosrank::pseudo::{grigoriev_knapsack, knapsack_moment, validate_sos_pseudo_density};

fn main() -> sosrank::Result<()> {
    for m in [3, 5, 7, 9] {
        let d = grigoriev_knapsack(m)?;
        let half = m as f64 / 2.0;
        let sq = CubeFunction::from_fn(m, |x| (popcount(x) as f64 - half).powi(2))?;
        let v = validate_sos_pseudo_density(&d, m, 1e-8)?;
        println!(
            "m {m}: E D = {:.3e}  E D(Σx - m/2)^2 = {:.3e}  min eig = {:.3e}  |D|_inf = {:.4} <= {:.4}",
            d.mass(),
            d.pair(&sq)?,
            v.min_eigenvalue,
            d.sup_norm(),
            (m as f64).powf(1.5)
        );
        let moments = d.all_moments();
        for s in 0..=3 {
            let mask = (1u32 << s) - 1;
            println!("    E D x^[{s}] = {:.6}  want {:.6}", moments[mask as usize], knapsack_moment(m, s));
        }
    }
    Ok(())
}
