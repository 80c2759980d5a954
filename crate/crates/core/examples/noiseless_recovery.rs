// Measure a sparse vector over F_256 and recover it exactly.

use ffcs::sensing::{l0_oracle, sample_complexity, SensingScheme, SparseSignal};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let scheme = SensingScheme::build(256, 1024, 4)?;
    println!("n = 1024, b = 4, s = {}, m = {}", scheme.lift_degree(), scheme.measurements());

    let x = SparseSignal::from_pairs(1024, [(7, 3), (300, 1), (301, 255), (1000, 42)])?;
    let y = scheme.measure(&x)?;
    let x_hat = scheme.recover(&y)?;
    assert_eq!(x_hat, x);
    println!("recovered support {:?}", x_hat.support());

    let c = sample_complexity(256, 1024, 4);
    println!(
        "lower bound {:.1} bits, finite storage {} bits, 32-bit reals {} bits",
        c.lower_bound_bits,
        c.storage_bits_finite,
        c.storage_bits_real(32)
    );

    let small = SensingScheme::build(2, 7, 1)?;
    let x = SparseSignal::from_pairs(7, [(4, 1)])?;
    let y = small.measure(&x)?;
    assert_eq!(l0_oracle(small.matrix(), &y, 2)?, small.recover(&y)?);
    println!("exhaustive search agrees with syndrome decoding");
    Ok(())
}

fn main() {
    run_example().unwrap();
}
