// Real-valued sensing with a Gaussian matrix and orthogonal matching pursuit.

use ffcs::baseline::{error_free, omp_recover, recovery_probability, RealSensing, Variance};
use nalgebra::DVector;
use rand::seq::index::sample;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let (n, b) = (256, 4);
    for m in [16, 32, 64, 96] {
        let p = recovery_probability(100, 5, |rng| {
            let a = RealSensing::sample(m, n, Variance::InvSqrtM, rng).unwrap();
            let mut x = DVector::zeros(n);
            for j in sample(rng, n, b) {
                x[j] = 1.0;
            }
            omp_recover(&a, &a.measure(&x), b).is_ok_and(|xh| error_free(&x, &xh))
        });
        println!("m = {m:3}: success {p:.2}");
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
