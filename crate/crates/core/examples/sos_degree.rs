//! Sos degree with certificates and dual witnesses.

use sosrank::cube::CubeFunction;
use sosrank::pseudo::knapsack_function;
use sosrank::sos::{sos_degree, sos_upper_bound, verify_certificate};

fn main() -> sosrank::Result<()> {
    let square = CubeFunction::from_fn(3, |x| {
        let l = 1.0 + (x & 1) as f64 - 2.0 * (x >> 2 & 1) as f64;
        l * l
    })?;
    let and3 = CubeFunction::from_fn(3, |x| if x == 7 { 1.0 } else { 0.0 })?;
    for (name, f) in [("linear^2", square), ("knapsack", knapsack_function(3)?), ("and3", and3)] {
        let s = sos_degree(&f, 1e-7)?;
        let rep = verify_certificate(&f.scale(-1.0), &s.certificate, 1e-7);
        println!("{name:<9} sos degree {}  squares {}  residual {:.1e}", s.degree, s.certificate.squares.len(), rep.max_residual);
        for (d, w) in &s.witnesses {
            println!("          degree {d} witness: E D f = {:.6}", w.value);
        }
    }

    let f = knapsack_function(5)?;
    for d in [2, 4, 6] {
        let sol = sos_upper_bound(&f.scale(-1.0), d, 1e-7)?;
        println!("knapsack m=5: sos_{d}(-f) = {:+.6} (gap {:.1e}, min f = {})", sol.certificate.c, sol.gap, f.min());
    }
    Ok(())
}
