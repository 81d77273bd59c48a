//! Interpolate a strictly proper system from frequency samples and reduce
//! it to its true order.

use loewner::data::{partition, GridSpec, PartitionConfig};
use loewner::linalg::c64;
use loewner::pencil::{build_quadruple, reduce};
use loewner::synth::{make_synthetic, sample_system, PoleBand, SyntheticConfig};

fn main() -> Result<(), loewner::error::Error> {
    // order-5 resonator with poles between 0.3 and 12 rad/s, no growth at
    // high frequencies
    let sys = make_synthetic(&SyntheticConfig::siso(
        5,
        PoleBand::new(0.3, 12.0),
        0.0,
        0.0,
        true,
        42,
    ))?;

    // twice as many samples as the order, log-spaced across the band
    let samples = sample_system(&sys, &GridSpec::log(0.1, 30.0, 10))?;
    let config = PartitionConfig {
        conjugate_closure: true,
        ..PartitionConfig::default()
    };
    let dataset = partition(&samples, &config)?;

    let quad = build_quadruple(&dataset)?;
    let (syl, syl_shift) = quad.sylvester_residuals();
    println!("Sylvester residuals: {syl:.2e}, {syl_shift:.2e}");

    let (model, report) = reduce(&quad, 1e-10)?;
    println!("singular values of the row pencil:");
    for (i, sv) in report.singular_values_row.iter().enumerate() {
        println!("  sigma_{i} = {sv:.6e}");
    }
    println!("reduced order: {} (true order {})", model.order(), sys.rational_order);

    // the reduced model matches the system well beyond the sample points
    let mut worst = 0.0f64;
    for t in 0..20 {
        let w = 0.12 * (25.0f64 / 0.12).powf(t as f64 / 19.0);
        let s = c64(0.0, w);
        let err = (model.eval(s)? - sys.eval(s)?).norm();
        worst = worst.max(err);
    }
    println!("max error at 20 off-grid probes: {worst:.2e}");
    Ok(())
}
