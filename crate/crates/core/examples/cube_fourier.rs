//! Fourier and monomial expansions on the boolean cube.

use sosrank::cube::{lift_function, CubeFunction, ProductMeasure};

fn main() -> sosrank::Result<()> {
    // Majority on three bits.
    let maj = CubeFunction::from_fn(3, |x| if x.count_ones() >= 2 { 1.0 } else { 0.0 })?;
    println!("values   {:?}", maj.values());
    println!("fourier  {:?}", maj.fourier());
    println!("monomial {:?}", maj.monomial_coefficients());
    println!("degree {} mean {}", maj.degree(), maj.mean());

    // Parseval: E f² = Σ f̂(α)².
    let energy: f64 = maj.fourier().iter().map(|c| c * c).sum();
    println!("E f^2 {} sum f^2 {}", maj.inner(&maj)?, energy);

    let mu = ProductMeasure::biased(3, 0.25)?;
    println!("E_mu f under p = 1/4: {}", maj.mean_under(&mu)?);

    // Place majority on coordinates {1, 4, 5} of a 6-bit cube.
    let lifted = lift_function(&maj, &[1, 4, 5], 6)?;
    println!("lifted degree {} mean {}", lifted.degree(), lifted.mean());
    Ok(())
}
