//! High-degree Fourier mass of a random matrix-valued `B` seen from random
//! m-subsets, and the correlation lower bound it implies.

use sosrank::cube::binomial;
use sosrank::liftmat::{
    correlation_lower_bound_experiment, high_mass_experiment, random_low_degree_matrix_function, random_symmetric,
};
use sosrank::pseudo::grigoriev_knapsack;
use sosrank::rng::SplitMix64;

fn main() -> sosrank::Result<()> {
    let mut rng = SplitMix64::new(3);
    let (n, m, d) = (10, 3, 2);
    for ell in 1..=3 {
        let b = random_low_degree_matrix_function(n, 2, ell, &mut rng)?;
        let h = high_mass_experiment(&b, m, d)?;
        println!("degree {ell}: high mass {:.4} <= {:.4}  {}", h.ratio, h.bound, h.holds);
    }
    let dens = grigoriev_knapsack(m)?;
    let b = random_low_degree_matrix_function(n, 2, 2, &mut rng)?;
    let a: Vec<_> = (0..binomial(n, m)).map(|_| random_symmetric(2, &mut rng)).collect();
    let c = correlation_lower_bound_experiment(&a, &b, &dens, d)?;
    println!("lhs {:.4}  lemma rhs {:.4}  theorem rhs {:.4}", c.lhs, c.lemma_rhs, c.theorem_rhs);
    Ok(())
}
