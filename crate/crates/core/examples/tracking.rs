// Track a synthetic series with both pipelines at the same measurement count.

use ffcs::baseline::RealSensing;
use ffcs::sensing::SensingScheme;
use ffcs::tracking::{quantize, synthetic_series, track_finite, track_real};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let (n, t, b) = (256, 60, 4);
    let series = synthetic_series(n, t, b, 7);
    let tracked = quantize(&series, 256)?;
    println!("largest change weight {}", tracked.b_max());

    let scheme = SensingScheme::build(256, n, b)?;
    let finite = track_finite(&tracked, &scheme)?;
    let real = RealSensing::build(scheme.measurements(), n, 7)?;
    let real = track_real(&tracked, &real, b);
    let floor = tracked.quant_floor();
    for i in (0..t).step_by(10) {
        println!(
            "t = {:3}  finite {:.5}  real {:.5}  floor {:.5}",
            i + 1,
            finite.errors[i],
            real.errors[i],
            floor[i]
        );
    }
    assert_eq!(finite.estimates, tracked.frames());
    Ok(())
}

fn main() {
    run_example().unwrap();
}
