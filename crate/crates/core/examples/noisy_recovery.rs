// Recovery when some measurements are corrupted.

use ffcs::noisy::{h_q, AdversaryStrategy, NoiseModel, NoisyOptions, NoisyScheme};
use ffcs::sensing::SparseSignal;
use ffcs::trial_rng;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let model = NoiseModel::WorstCase { delta: 0.1 };
    let scheme = NoisyScheme::build(256, 255, 4, model, NoisyOptions::default())?;
    println!(
        "outer code: {} symbols of width {}, corrects {}, adversary budget {}",
        scheme.outer_len(),
        scheme.symbol_width(),
        scheme.radius(),
        scheme.adversary_budget()
    );
    let x = SparseSignal::from_pairs(255, [(1, 9), (80, 10), (81, 11), (254, 12)])?;
    let clean = scheme.measure(&x)?;
    let mut rng = trial_rng(3, 0);
    for strategy in AdversaryStrategy::ALL {
        let e = scheme.adversarial_noise(strategy, scheme.adversary_budget(), &mut rng);
        let y = clean.add(&e)?;
        assert_eq!(scheme.recover_noisy(&y)?, x);
        println!("{} corruption: recovered", strategy.name());
    }

    let lambda = 0.01;
    println!("H_256({lambda}) = {:.4}", h_q(lambda, 256)?);
    let model = NoiseModel::QSymmetric { lambda };
    let scheme = NoisyScheme::build(256, 255, 4, model, NoisyOptions { rate_margin: 1.5 })?;
    let y = scheme.measure_noisy(&x, &model, 11)?;
    match scheme.recover_noisy(&y) {
        Ok(x_hat) => println!("symmetric noise: exact = {}", x_hat == x),
        Err(e) => println!("symmetric noise: {e}"),
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
