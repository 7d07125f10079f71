//! Max-cut and 3-SAT: exact optima against sos relaxation values.

use sosrank::csp::{brute_opt, cycle_edges, lasserre_value, max3sat_instance, maxcut_instance, spectral_maxcut_bound};

fn main() -> sosrank::Result<()> {
    for n in [3, 5, 7] {
        let im = maxcut_instance(n, &cycle_edges(n))?;
        let opt = brute_opt(&im)?;
        let l2 = lasserre_value(&im, 2, 1e-7)?.value;
        let spec = spectral_maxcut_bound(n, &cycle_edges(n))?;
        print!("C{n}: opt {opt:.4}  sos_2 {l2:.6}  spectral {spec:.6}");
        if n <= 5 {
            print!("  sos_{} {:.6}", 2 * n, lasserre_value(&im, 2 * n, 1e-7)?.value);
        }
        println!();
    }
    let clauses = [[(0, false), (1, false), (2, false)], [(0, true), (1, true), (3, false)], [(2, true), (3, true), (1, false)]];
    let sat = max3sat_instance(4, &clauses)?;
    println!("3-SAT opt {}  sos_4 {:.6}", brute_opt(&sat)?, lasserre_value(&sat, 4, 1e-7)?.value);
    Ok(())
}
