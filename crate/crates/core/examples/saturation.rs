// Measurement count as the alphabet grows.

use ffcs::experiments::{run_measurement_saturation, Experiment, ExperimentConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut cfg = ExperimentConfig::defaults(Experiment::MeasurementSaturation);
    cfg.n = vec![2048];
    cfg.r = vec![0.4];
    for row in run_measurement_saturation(&cfg)? {
        println!("log2 q = {:2}  m = {}", row.log2_q, row.m);
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
