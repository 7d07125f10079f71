//! Junta approximation of a density against dictator tests.

use sosrank::cube::{CubeFunction, ProductMeasure};
use sosrank::learn::{classical_relative_entropy, junta_approx, JuntaTest};

fn main() -> sosrank::Result<()> {
    let n = 12;
    for p in [0.5, 0.3] {
        let mu = ProductMeasure::biased(n, p)?;
        let g = CubeFunction::from_fn(n, |x| 0.6 * (x & 1) as f64 - 0.4 * (x >> 5 & 1) as f64 + 0.3 * (x >> 9 & 1) as f64)?;
        let e = g.map(f64::exp);
        let f = e.scale(1.0 / e.mean_under(&mu)?);
        let tests = (0..n)
            .flat_map(|i| [JuntaTest::dictator(n, i), JuntaTest::anti_dictator(n, i)])
            .collect::<sosrank::Result<Vec<_>>>()?;
        let a = junta_approx(&f, &mu, &tests, 0.05)?;
        println!(
            "p {p}: D(f||mu) {:.4}  steps {} of {}  support {:?}  max gap {:.4}",
            classical_relative_entropy(&f, &mu)?,
            a.mirror.selected.len(),
            a.mirror.h,
            a.support,
            a.gaps.iter().cloned().fold(f64::MIN, f64::max)
        );
    }
    Ok(())
}
