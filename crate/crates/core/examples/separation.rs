//! The functional `L_D` on the pattern matrix of `f` and on random
//! factorizations `N(S,x) = Tr(A_S² B_x²)` with low-degree `B`.

use sosrank::liftmat::{ld_functional, random_low_degree_square_matrix, LdOptions, PatternMatrix};
use sosrank::pseudo::{grigoriev_knapsack, knapsack_function};
use sosrank::rng::SplitMix64;

fn main() -> sosrank::Result<()> {
    let d = grigoriev_knapsack(3)?;
    let f = knapsack_function(3)?;
    println!("E D f = {} (-1/36 = {})", d.pair(&f)?, -1.0 / 36.0);
    for n in [6, 8, 10] {
        let pm = PatternMatrix::new(f.clone(), n)?;
        let ld = ld_functional(&d, &pm, n, LdOptions::default())?;
        println!("n {n}: L_D(M) = {:.12} over {} rows", ld.value, ld.rows_used);
    }

    let n = 8;
    let mut rng = SplitMix64::new(1);
    let mut worst = f64::INFINITY;
    for _ in 0..50 {
        let nm = random_low_degree_square_matrix(n, 3, 3, 1, &mut rng)?;
        worst = worst.min(ld_functional(&d, &nm, n, LdOptions::default())?.value);
    }
    println!("min L_D(N) over 50 random low-degree squares: {worst:.4}");

    let sampled = ld_functional(&d, &PatternMatrix::new(f, 16)?, 16, LdOptions { sample_rows: Some(64), seed: 9 })?;
    println!("n 16 sampled: {:.12} ± {:.1e}", sampled.value, sampled.stderr.unwrap_or(0.0));
    Ok(())
}
