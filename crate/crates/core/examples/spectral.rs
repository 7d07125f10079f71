//! Jacobi eigendecomposition, matrix functions and quantum relative entropy.

use sosrank::symmat::{quantum_relative_entropy, DensityMatrix, SymMatrix};

fn main() -> sosrank::Result<()> {
    let a = SymMatrix::from_fn(4, |i, j| 1.0 / (1 + i + j) as f64);
    println!("hilbert eigenvalues {:?}", a.eigenvalues()?);
    let n = a.norms()?;
    println!("operator {:e} trace {:e} frobenius {:e}", n.operator, n.trace, a.frobenius());

    let root = a.sqrt_psd()?;
    println!("|sqrt(A)^2 - A|_max = {:e}", root.square().sub(&a).max_abs());
    let e = a.exp()?;
    println!("exp(A) trace {}", e.trace());

    let rho = DensityMatrix::normalized(a)?;
    let u = DensityMatrix::uniform(4);
    println!("D(rho || U) = {}", quantum_relative_entropy(&rho, &u)?);
    Ok(())
}
