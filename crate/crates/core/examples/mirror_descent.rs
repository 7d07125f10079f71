//! Mirror descent against a test family, and the block operator built from a
//! pseudo-density and a psd factorization.

use sosrank::learn::{approx_against_family, block_operator, mirror_descent_approx, TestFamily};
use sosrank::liftmat::{explicit_psd_factorization, ld_functional, LdOptions, PatternMatrix};
use sosrank::pseudo::{grigoriev_knapsack, knapsack_function};
use sosrank::rng::SplitMix64;
use sosrank::sos::sos_degree;
use sosrank::symmat::{DensityMatrix, SymMatrix};

fn main() -> sosrank::Result<()> {
    let mut rng = SplitMix64::new(5);
    let dim = 8;
    let tests = (0..6)
        .map(|_| {
            let a = SymMatrix::from_fn(dim, |_, _| rng.normal());
            a.operator_norm().map(|s| a.scale(1.0 / s))
        })
        .collect::<sosrank::Result<Vec<_>>>()?;
    let family = TestFamily::new(tests, false)?;
    let v: Vec<f64> = (0..dim).map(|_| rng.normal()).collect();
    let q = DensityMatrix::normalized(SymMatrix::outer(&v).add(&SymMatrix::scalar(dim, 0.02)))?;
    let md = mirror_descent_approx(&q, &family, 0.1, &DensityMatrix::uniform(dim))?;
    println!("budget {} steps {} final gap {:.4}", md.h, md.selected.len(), md.final_gap);
    for s in md.trace.iter().take(5) {
        println!("  step {} test {} gap {:.4} entropy {:.4}", s.step, s.test, s.gap, s.entropy);
    }

    let f = knapsack_function(3)?;
    let n = 4;
    let fact = explicit_psd_factorization(&f, &sos_degree(&f, 1e-7)?.certificate, n)?;
    let d = grigoriev_knapsack(3)?;
    let bo = block_operator(&d, &fact, n)?;
    let ld = ld_functional(&d, &PatternMatrix::new(f, n)?, n, LdOptions::default())?;
    println!("Tr(F Q) = {:.6}, L_D / tau = {:.6}", bo.f.dot(bo.q.matrix()), ld.value / bo.tau);
    let fam = bo.block_family()?;
    let a = approx_against_family(&bo.q, &fam, 0.2)?;
    println!("family approximation: degree {}  gap {:.4}  steps {}", a.degree, a.gap, a.mirror.selected.len());
    Ok(())
}
