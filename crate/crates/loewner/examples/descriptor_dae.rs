//! A descriptor system can hide polynomial growth inside a singular E
//! matrix instead of an explicit poly block. This example samples such a
//! system and shows that the implicit barycentric fit still recovers the
//! asymptotic coefficients from data alone.

use loewner::barycentric::fit_poly_aa;
use loewner::data::{GridSpec, PartitionConfig};
use loewner::linalg::c64;
use loewner::synth::{dae_block_example, sample_system};

fn main() -> Result<(), loewner::error::Error> {
    // H(s) = 1 + 2s + 1/(s+1), realized with a nilpotent block in E and
    // no explicit polynomial part
    let sys = dae_block_example(1.0, 2.0);
    let e = &sys.realization.e;
    println!("descriptor dimension {} with singular E (rank 2 of 4)", e.nrows());

    // the growth is visible in the response itself
    for w in [1.0, 10.0, 100.0] {
        let h = sys.eval(c64(0.0, w))?;
        println!("|H({w:>5}i)| = {:.4}", h[(0, 0)].norm());
    }

    let samples = sample_system(&sys, &GridSpec::log(1e-2, 1e2, 20))?;
    let fit = fit_poly_aa(&samples, &PartitionConfig::default(), 1e-13)?;

    println!("recovered P0 = {:.12} (true 1)", fit.poly.p0[(0, 0)].re);
    println!("recovered P1 = {:.12} (true 2)", fit.poly.p1[(0, 0)].re);

    // descriptor form of the fitted model, ready for the same evaluator
    let descriptor = fit.model.to_descriptor()?;
    println!("barycentric fit as a descriptor realization of order {}", descriptor.order());
    let mut worst = 0.0f64;
    for t in 0..20 {
        let w = 0.02 * (70.0f64 / 0.02).powf(t as f64 / 19.0);
        let s = c64(0.0, w);
        worst = worst.max((descriptor.eval(s)? - sys.eval(s)?).norm());
    }
    println!("max error of the descriptor form at 20 probes: {worst:.2e}");
    Ok(())
}
