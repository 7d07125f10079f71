//! Nonnegative factorizations of pattern matrices from junta certificates.

use sosrank::cube::CubeFunction;
use sosrank::liftmat::{find_junta_certificate, junta_factorization, verify_nonneg_factorization, PatternMatrix};

fn main() -> sosrank::Result<()> {
    // Not-all-equal on three bits is a sum of nonnegative 2-juntas.
    let nae = CubeFunction::from_fn(3, |x| if x == 0 || x == 7 { 0.0 } else { 1.0 })?;
    for d in 1..=3 {
        match find_junta_certificate(&nae, d)? {
            None => println!("no {d}-junta certificate"),
            Some(cert) => {
                println!("{d}-junta certificate with {} terms, residual {:.1e}", cert.terms.len(), cert.residual(&nae)?);
                let n = 7;
                let jf = junta_factorization(&nae, &cert, n)?;
                let rep = verify_nonneg_factorization(&PatternMatrix::new(nae.clone(), n)?, &jf.factorization, 1e-9);
                println!(
                    "  n {n}: rank {} (bound {}), residual {:.1e}, min entry {}",
                    jf.factorization.r, jf.rank_bound, rep.max_residual, rep.min_entry
                );
                break;
            }
        }
    }
    Ok(())
}
