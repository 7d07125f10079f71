//! Text formats: write, read back, and compare.

use sosrank::io;
use sosrank::liftmat::{random_psd_factorization, PatternMatrix};
use sosrank::pseudo::{grigoriev_knapsack, knapsack_function};
use sosrank::rng::SplitMix64;
use sosrank::sos::sos_degree;

fn main() -> sosrank::Result<()> {
    let f = knapsack_function(3)?;
    let text = io::write_cube_function(&f);
    print!("{text}");
    assert_eq!(io::read_cube_function(&text)?, f);

    let d = grigoriev_knapsack(3)?;
    assert_eq!(io::read_pseudo_density(&io::write_pseudo_density(&d))?, d);

    let cert = sos_degree(&f, 1e-7)?.certificate;
    let ctext = io::write_certificate(&cert);
    println!("certificate: {} lines", ctext.lines().count());
    assert_eq!(io::read_certificate(&ctext)?, cert);

    let fact = random_psd_factorization(3, 2, 4, 5, &mut SplitMix64::new(1))?;
    assert_eq!(io::read_factorization(&io::write_factorization(&fact))?, fact);

    let dump = io::pattern_dump(&PatternMatrix::new(f, 5)?, "knapsack:3", Some(&[0, 3]))?;
    print!("{}", io::write_matrix_dump(&dump).lines().take(6).collect::<Vec<_>>().join("\n"));
    println!("\n...");

    let sat = io::parse_dimacs("p cnf 3 2\n1 -2 3 0\n-1 2 -3 0\n")?;
    print!("{}", io::write_instance(&sat));
    Ok(())
}
