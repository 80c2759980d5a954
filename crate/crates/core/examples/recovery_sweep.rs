// A reduced recovery-probability sweep over the measurement factor.

use ffcs::experiments::{run_recovery_sweep, Experiment, ExperimentConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut cfg = ExperimentConfig::defaults(Experiment::RecoverySweep);
    cfg.n = vec![256];
    cfg.q = vec![16];
    cfg.r = vec![0.4];
    cfg.theta = vec![0.5, 1.0, 2.0];
    cfg.trials = 20;
    for row in run_recovery_sweep(&cfg)? {
        println!(
            "theta {:.1}  {:6}  b = {}  m = {:3}  success {:.2}",
            row.theta, row.method, row.b, row.m, row.success_fraction
        );
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
