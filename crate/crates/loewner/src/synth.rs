//! Synthetic ground-truth systems with a known strictly proper plus linear
//! polynomial decomposition, and intrusive oracles that certify the Loewner
//! construction against the generating realization.
//!
//! Everything here is deterministic for a fixed seed. The generated systems
//! are the test bed for the identification pipeline: their transfer function
//! is known in two independent forms (descriptor evaluation and partial
//! fractions), and for strictly proper systems the tangential projectors
//! give a third, intrusive check of the pencil entries.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::data::{FrequencySample, GridSpec, TangentialDataset};
use crate::error::{Error, Result};
use crate::linalg::{c64, cre, solve_guarded, CMatrix, CVector, RCOND_FLOOR};
use crate::pencil::{build_quadruple, DescriptorRealization};
use crate::poly::PolyCoefficients;

/// Magnitude band for generated pole placement; all poles land in the open
/// left half-plane with |λ| inside the band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleBand {
    pub omega_min: f64,
    pub omega_max: f64,
}

impl PoleBand {
    pub fn new(omega_min: f64, omega_max: f64) -> Self {
        PoleBand { omega_min, omega_max }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_min > 0.0 && self.omega_max >= self.omega_min)
            || !self.omega_min.is_finite()
            || !self.omega_max.is_finite()
        {
            return Err(Error::Config(format!(
                "pole band needs 0 < min <= max, got [{}, {}]",
                self.omega_min, self.omega_max
            )));
        }
        Ok(())
    }
}

/// Recipe for [`make_synthetic`].
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticConfig {
    /// Order of the strictly proper rational part.
    pub order: usize,
    pub outputs: usize,
    pub inputs: usize,
    pub band: PoleBand,
    /// Constant polynomial coefficient, outputs×inputs.
    pub p0: CMatrix,
    /// Linear polynomial coefficient, outputs×inputs.
    pub p1: CMatrix,
    /// Conjugate-pair poles and real realization matrices.
    pub symmetric: bool,
    pub seed: u64,
}

impl SyntheticConfig {
    pub fn siso(order: usize, band: PoleBand, p0: f64, p1: f64, symmetric: bool, seed: u64) -> Self {
        SyntheticConfig {
            order,
            outputs: 1,
            inputs: 1,
            band,
            p0: CMatrix::from_element(1, 1, cre(p0)),
            p1: CMatrix::from_element(1, 1, cre(p1)),
            symmetric,
            seed,
        }
    }
}

/// A generated system with its ground truth attached.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSystem {
    /// Descriptor form; the polynomial part rides along as its poly block
    /// except for DAE-style examples where the growth lives inside a
    /// singular pencil.
    pub realization: DescriptorRealization,
    /// True linear polynomial part, zero matrices when absent.
    pub poly_truth: PolyCoefficients,
    /// Order of the strictly proper rational part (not of the pencil).
    pub rational_order: usize,
    pub poles: Vec<Complex64>,
    /// Rank-one residue factors (c_t, b_t) aligned with `poles`:
    /// H_spr(s) = Σ c_t b_t^T / (s − λ_t).
    pub residues: Vec<(CVector, CVector)>,
    pub conjugate_symmetric: bool,
}

impl SyntheticSystem {
    /// Transfer function value, polynomial part included.
    pub fn eval(&self, s: Complex64) -> Result<CMatrix> {
        self.realization.eval(s)
    }

    /// Independent evaluation through the stored pole/residue list. Exact
    /// for the diagonalizable systems this module generates; used as a
    /// second oracle against the descriptor path.
    pub fn eval_partial_fraction(&self, s: Complex64) -> CMatrix {
        let p = self.poly_truth.outputs();
        let m = self.poly_truth.inputs();
        let mut h = &self.poly_truth.p0 + &self.poly_truth.p1 * s;
        for (t, &lambda) in self.poles.iter().enumerate() {
            let (ref cvec, ref bvec) = self.residues[t];
            let gain = c64(1.0, 0.0) / (s - lambda);
            for r in 0..p {
                for u in 0..m {
                    h[(r, u)] += gain * cvec[r] * bvec[u];
                }
            }
        }
        h
    }

    pub fn outputs(&self) -> usize {
        self.poly_truth.outputs()
    }

    pub fn inputs(&self) -> usize {
        self.poly_truth.inputs()
    }
}

fn random_complex_unit(rng: &mut ChaCha8Rng, dim: usize) -> CVector {
    loop {
        let v = CVector::from_fn(dim, |_, _| {
            c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let norm = v.norm();
        if norm > 1e-3 {
            return v / cre(norm);
        }
    }
}

fn random_real_unit(rng: &mut ChaCha8Rng, dim: usize) -> CVector {
    loop {
        let v = CVector::from_fn(dim, |_, _| cre(rng.gen_range(-1.0..1.0)));
        let norm = v.norm();
        if norm > 1e-3 {
            return v / cre(norm);
        }
    }
}

/// Generate a stable system of the given order with known polynomial part.
///
/// Pole magnitudes are log-spaced across the band with damping ratios drawn
/// uniformly from [0.1, 0.7]; residues are rank-one with overall magnitude
/// uniform in [0.5, 1.5]. With the symmetric flag, poles come in conjugate
/// pairs (plus one real pole for odd order) and the realization matrices
/// are real, so H(conj s) = conj H(s). Deterministic for a fixed seed.
pub fn make_synthetic(config: &SyntheticConfig) -> Result<SyntheticSystem> {
    let n = config.order;
    let (p, m) = (config.outputs, config.inputs);
    if p == 0 || m == 0 {
        return Err(Error::Config(format!(
            "system needs at least one output and input, got {p}x{m}"
        )));
    }
    config.band.validate()?;
    if config.p0.shape() != (p, m) || config.p1.shape() != (p, m) {
        return Err(Error::shape(
            "polynomial coefficients",
            format!("{p}x{m}"),
            format!(
                "{}x{} and {}x{}",
                config.p0.nrows(),
                config.p0.ncols(),
                config.p1.nrows(),
                config.p1.ncols()
            ),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut a = CMatrix::zeros(n, n);
    let mut b = CMatrix::zeros(n, m);
    let mut c = CMatrix::zeros(p, n);
    let mut poles = Vec::with_capacity(n);
    let mut residues = Vec::with_capacity(n);

    if config.symmetric {
        let pairs = n / 2;
        let units = pairs + n % 2;
        let mags = if units > 0 {
            GridSpec::log(config.band.omega_min, config.band.omega_max, units).points()
        } else {
            Vec::new()
        };
        for t in 0..pairs {
            let omega = mags[t];
            let zeta = rng.gen_range(0.1..0.7);
            let sigma = -zeta * omega;
            let nu = omega * (1.0 - zeta * zeta).sqrt();
            let mag = rng.gen_range(0.5..1.5);
            let cvec = random_complex_unit(&mut rng, p) * cre(mag);
            let bvec = random_complex_unit(&mut rng, m);
            poles.push(c64(sigma, nu));
            residues.push((cvec.clone(), bvec.clone()));
            poles.push(c64(sigma, -nu));
            residues.push((cvec.map(|z| z.conj()), bvec.map(|z| z.conj())));
            let r0 = 2 * t;
            a[(r0, r0)] = cre(sigma);
            a[(r0, r0 + 1)] = cre(-nu);
            a[(r0 + 1, r0)] = cre(nu);
            a[(r0 + 1, r0 + 1)] = cre(sigma);
            for u in 0..m {
                b[(r0, u)] = cre(bvec[u].re);
                b[(r0 + 1, u)] = cre(bvec[u].im);
            }
            for r in 0..p {
                c[(r, r0)] = cre(2.0 * cvec[r].re);
                c[(r, r0 + 1)] = cre(-2.0 * cvec[r].im);
            }
        }
        if n % 2 == 1 {
            let omega = mags[pairs];
            let mag = rng.gen_range(0.5..1.5);
            let cvec = random_real_unit(&mut rng, p) * cre(mag);
            let bvec = random_real_unit(&mut rng, m);
            poles.push(cre(-omega));
            residues.push((cvec.clone(), bvec.clone()));
            let r0 = n - 1;
            a[(r0, r0)] = cre(-omega);
            for u in 0..m {
                b[(r0, u)] = bvec[u];
            }
            for r in 0..p {
                c[(r, r0)] = cvec[r];
            }
        }
    } else {
        let mags = if n > 0 {
            GridSpec::log(config.band.omega_min, config.band.omega_max, n).points()
        } else {
            Vec::new()
        };
        for (t, &omega) in mags.iter().enumerate() {
            let zeta = rng.gen_range(0.1..0.7);
            let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            let lambda = c64(-zeta * omega, sign * omega * (1.0 - zeta * zeta).sqrt());
            let mag = rng.gen_range(0.5..1.5);
            let cvec = random_complex_unit(&mut rng, p) * cre(mag);
            let bvec = random_complex_unit(&mut rng, m);
            poles.push(lambda);
            residues.push((cvec.clone(), bvec.clone()));
            a[(t, t)] = lambda;
            for u in 0..m {
                b[(t, u)] = bvec[u];
            }
            for r in 0..p {
                c[(r, t)] = cvec[r];
            }
        }
    }

    let poly_truth = PolyCoefficients::new(config.p0.clone(), config.p1.clone())?;
    let poly_is_zero = poly_truth
        .p0
        .iter()
        .chain(poly_truth.p1.iter())
        .all(|z| z.norm() == 0.0);
    let poly = if poly_is_zero { None } else { Some(poly_truth.clone()) };
    let realization = DescriptorRealization::new(CMatrix::identity(n, n), a, b, c, poly)?;
    Ok(SyntheticSystem {
        realization,
        poly_truth,
        rational_order: n,
        poles,
        residues,
        conjugate_symmetric: config.symmetric,
    })
}

/// The canonical first-order test function H(s) = 1/(s+1).
pub fn canonical_first_order() -> SyntheticSystem {
    let one = CMatrix::from_element(1, 1, cre(1.0));
    let realization = DescriptorRealization::new(
        one.clone(),
        CMatrix::from_element(1, 1, cre(-1.0)),
        one.clone(),
        one,
        None,
    )
    .expect("static shapes");
    SyntheticSystem {
        realization,
        poly_truth: PolyCoefficients::zeros(1, 1),
        rational_order: 1,
        poles: vec![cre(-1.0)],
        residues: vec![(CVector::from_element(1, cre(1.0)), CVector::from_element(1, cre(1.0)))],
        conjugate_symmetric: true,
    }
}

/// A pre-assembled descriptor example whose non-properness lives inside a
/// singular pencil: H(s) = p0 + p1·s + 1/(s+1) with E nilpotent on the
/// polynomial block and no explicit poly term attached.
pub fn dae_block_example(p0: f64, p1: f64) -> SyntheticSystem {
    // blocks: [1/(s+1)] ⊕ [constant via E=0] ⊕ [linear via 2x2 nilpotent E]
    let mut e = CMatrix::zeros(4, 4);
    e[(0, 0)] = cre(1.0);
    e[(2, 3)] = cre(1.0);
    let mut a = CMatrix::zeros(4, 4);
    a[(0, 0)] = cre(-1.0);
    a[(1, 1)] = cre(-1.0);
    a[(2, 2)] = cre(1.0);
    a[(3, 3)] = cre(1.0);
    let b = CMatrix::from_column_slice(4, 1, &[cre(1.0), cre(1.0), cre(0.0), cre(1.0)]);
    let c = CMatrix::from_row_slice(1, 4, &[cre(1.0), cre(p0), cre(-p1), cre(0.0)]);
    let realization = DescriptorRealization::new(e, a, b, c, None).expect("static shapes");
    SyntheticSystem {
        realization,
        poly_truth: PolyCoefficients::new(
            CMatrix::from_element(1, 1, cre(p0)),
            CMatrix::from_element(1, 1, cre(p1)),
        )
        .expect("static shapes"),
        rational_order: 1,
        poles: vec![cre(-1.0)],
        residues: vec![(CVector::from_element(1, cre(1.0)), CVector::from_element(1, cre(1.0)))],
        conjugate_symmetric: true,
    }
}

/// Evaluate the system on the imaginary axis at the grid's frequencies.
pub fn sample_system(sys: &SyntheticSystem, grid: &GridSpec) -> Result<Vec<FrequencySample>> {
    grid.validate()?;
    let mut samples = Vec::with_capacity(grid.count);
    for omega in grid.points() {
        let s = c64(0.0, omega);
        if sys.poles.iter().any(|&lambda| lambda == s) {
            return Err(Error::Domain(format!(
                "grid point {s} collides with a system pole"
            )));
        }
        samples.push(FrequencySample::new(s, sys.eval(s)?));
    }
    Ok(samples)
}

/// Relative Frobenius residuals of the four projector identities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectorReport {
    /// ‖O E R + 𝕃‖ / ‖𝕃‖
    pub loewner: f64,
    /// ‖O A R + 𝕃s‖ / ‖𝕃s‖
    pub shifted: f64,
    /// ‖O B − 𝕍‖ / ‖𝕍‖
    pub left_values: f64,
    /// ‖C R − 𝕎‖ / ‖𝕎‖
    pub right_values: f64,
}

impl ProjectorReport {
    pub fn max(&self) -> f64 {
        self.loewner
            .max(self.shifted)
            .max(self.left_values)
            .max(self.right_values)
    }
}

fn relative_residual(actual: &CMatrix, target: &CMatrix) -> f64 {
    let diff = (actual - target).norm();
    let scale = target.norm();
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

/// Intrusive certification of the Loewner construction: build the tangential
/// projectors from the true realization,
///
/// ```text
/// R col i = (λ_i E − A)^{-1} B r_i,    O^T col j = (μ_j E^T − A^T)^{-1} C^T ℓ_j
/// ```
///
/// and compare O E R = −𝕃, O A R = −𝕃s, O B = 𝕍, C R = 𝕎 against the
/// data-driven quadruple. All four residuals stay at rounding level when the
/// dataset really came from the system; value perturbations show up first
/// in the 𝕍/𝕎 rows.
pub fn projector_oracle(sys: &SyntheticSystem, dataset: &TangentialDataset) -> Result<ProjectorReport> {
    let poly_norm = sys.poly_truth.p0.norm() + sys.poly_truth.p1.norm();
    if poly_norm > 0.0 {
        return Err(Error::Config(
            "projector identities hold for strictly proper systems only".into(),
        ));
    }
    let quad = build_quadruple(dataset)?;
    let n = sys.realization.order();
    let q = dataset.left_len();
    let k = dataset.right_len();
    let e = &sys.realization.e;
    let a = &sys.realization.a;
    let bmat = &sys.realization.b;
    let cmat = &sys.realization.c;

    let brd = bmat * dataset.right_directions();
    let mut rmat = CMatrix::zeros(n, k);
    for i in 0..k {
        let lambda = dataset.right_points()[i];
        let mut rhs = CMatrix::zeros(n, 1);
        for t in 0..n {
            rhs[(t, 0)] = brd[(t, i)];
        }
        let col = solve_guarded(&(e * lambda - a), &rhs, RCOND_FLOOR, lambda)?;
        for t in 0..n {
            rmat[(t, i)] = col[(t, 0)];
        }
    }

    let et = e.transpose();
    let at = a.transpose();
    let ctl = cmat.transpose() * dataset.left_directions().transpose();
    let mut omat = CMatrix::zeros(q, n);
    for j in 0..q {
        let mu = dataset.left_points()[j];
        let mut rhs = CMatrix::zeros(n, 1);
        for t in 0..n {
            rhs[(t, 0)] = ctl[(t, j)];
        }
        let col = solve_guarded(&(&et * mu - &at), &rhs, RCOND_FLOOR, mu)?;
        for t in 0..n {
            omat[(j, t)] = col[(t, 0)];
        }
    }

    let oer = &omat * e * &rmat;
    let oar = &omat * a * &rmat;
    let ob = &omat * bmat;
    let cr = cmat * &rmat;
    Ok(ProjectorReport {
        loewner: relative_residual(&oer, &(-quad.loewner())),
        shifted: relative_residual(&oar, &(-quad.shifted())),
        left_values: relative_residual(&ob, quad.left_values()),
        right_values: relative_residual(&cr, quad.right_values()),
    })
}

/// A named benchmark recipe for the command line.
pub struct BenchCase {
    pub id: &'static str,
    pub summary: &'static str,
    /// Frequency grid used by `bench emit` when none is given.
    pub default_grid: GridSpec,
    build: fn() -> Result<SyntheticSystem>,
}

impl BenchCase {
    pub fn build(&self) -> Result<SyntheticSystem> {
        (self.build)()
    }
}

/// The built-in benchmark registry, in listing order.
pub fn bench_cases() -> Vec<BenchCase> {
    vec![
        BenchCase {
            id: "msd_like_siso",
            summary: "order-6 lightly damped SISO resonator chain with P0 = 1, P1 = 0.1",
            default_grid: GridSpec::log(1e-1, 1e3, 40),
            build: || {
                make_synthetic(&SyntheticConfig::siso(
                    6,
                    PoleBand::new(1.0, 100.0),
                    1.0,
                    0.1,
                    true,
                    7,
                ))
            },
        },
        BenchCase {
            id: "msd_like_mimo2",
            summary: "order-6 symmetric 2x2 system with coupled constant and diagonal linear part",
            default_grid: GridSpec::log(1e-1, 1e3, 40),
            build: || {
                let p0 = CMatrix::from_row_slice(2, 2, &[cre(1.0), cre(0.2), cre(0.2), cre(1.0)]);
                let p1 = CMatrix::from_row_slice(2, 2, &[cre(0.1), cre(0.0), cre(0.0), cre(0.05)]);
                make_synthetic(&SyntheticConfig {
                    order: 6,
                    outputs: 2,
                    inputs: 2,
                    band: PoleBand::new(1.0, 100.0),
                    p0,
                    p1,
                    symmetric: true,
                    seed: 11,
                })
            },
        },
        BenchCase {
            id: "proper_order5",
            summary: "strictly proper order-5 SISO system, no polynomial part",
            default_grid: GridSpec::log(1e-2, 1e2, 30),
            build: || {
                make_synthetic(&SyntheticConfig::siso(
                    5,
                    PoleBand::new(0.1, 10.0),
                    0.0,
                    0.0,
                    true,
                    3,
                ))
            },
        },
        BenchCase {
            id: "linear_ramp",
            summary: "pure polynomial H(s) = 1 + 2s, empty rational part",
            default_grid: GridSpec::log(1e-1, 1e1, 10),
            build: || {
                make_synthetic(&SyntheticConfig::siso(
                    0,
                    PoleBand::new(1.0, 10.0),
                    1.0,
                    2.0,
                    true,
                    1,
                ))
            },
        },
        BenchCase {
            id: "dae_index2",
            summary: "descriptor block with H(s) = 1 + 2s + 1/(s+1), growth inside the pencil",
            default_grid: GridSpec::log(1e-2, 1e2, 20),
            build: || Ok(dae_block_example(1.0, 2.0)),
        },
    ]
}

/// Look up a benchmark by id.
pub fn bench_case(id: &str) -> Result<BenchCase> {
    bench_cases()
        .into_iter()
        .find(|case| case.id == id)
        .ok_or_else(|| {
            let known: Vec<&str> = bench_cases().iter().map(|c| c.id).collect();
            Error::Config(format!(
                "unknown benchmark '{id}', available: {}",
                known.join(", ")
            ))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{partition, PartitionConfig};
    use approx::assert_relative_eq;

    fn probe_points() -> Vec<Complex64> {
        (0..10)
            .map(|t| c64(0.1 * t as f64 - 0.3, 0.7 * t as f64 + 0.2))
            .collect()
    }

    #[test]
    fn generation_is_deterministic() {
        let config = SyntheticConfig::siso(5, PoleBand::new(0.5, 50.0), 0.3, 0.01, true, 42);
        let first = make_synthetic(&config).unwrap();
        let second = make_synthetic(&config).unwrap();
        assert_eq!(first.poles, second.poles);
        assert_eq!(first.realization.a, second.realization.a);
        assert_eq!(first.realization.b, second.realization.b);
        assert_eq!(first.realization.c, second.realization.c);
    }

    #[test]
    fn polynomial_only_system_evaluates_exactly() {
        let sys = make_synthetic(&SyntheticConfig::siso(
            0,
            PoleBand::new(1.0, 10.0),
            1.0,
            2.0,
            true,
            9,
        ))
        .unwrap();
        assert_eq!(sys.realization.order(), 0);
        let samples = sample_system(&sys, &GridSpec::log(0.1, 10.0, 7)).unwrap();
        assert_eq!(samples.len(), 7);
        for sample in &samples {
            let expected = cre(1.0) + cre(2.0) * sample.point;
            assert_eq!(sample.value[(0, 0)], expected);
        }
    }

    #[test]
    fn canonical_system_matches_hand_value() {
        let sys = canonical_first_order();
        // 1/(1+i) = 0.5 - 0.5i
        let h = sys.eval(c64(0.0, 1.0)).unwrap()[(0, 0)];
        assert_relative_eq!((h - c64(0.5, -0.5)).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn poles_are_stable_and_symmetric_systems_are_real() {
        for (order, symmetric) in [(4, true), (5, true), (3, false)] {
            let config = SyntheticConfig {
                order,
                outputs: 2,
                inputs: 2,
                band: PoleBand::new(0.2, 30.0),
                p0: CMatrix::zeros(2, 2),
                p1: CMatrix::zeros(2, 2),
                symmetric,
                seed: 17,
            };
            let sys = make_synthetic(&config).unwrap();
            assert_eq!(sys.poles.len(), order);
            assert!(sys.poles.iter().all(|lambda| lambda.re < 0.0));
            if symmetric {
                let imag = sys
                    .realization
                    .a
                    .iter()
                    .chain(sys.realization.b.iter())
                    .chain(sys.realization.c.iter())
                    .map(|z| z.im.abs())
                    .fold(0.0f64, f64::max);
                assert_eq!(imag, 0.0);
                for s in probe_points() {
                    let there = sys.eval(s).unwrap();
                    let mirrored = sys.eval(s.conj()).unwrap().map(|z| z.conj());
                    assert_relative_eq!((there - mirrored).norm(), 0.0, epsilon = 1e-10);
                }
            }
        }
    }

    #[test]
    fn partial_fraction_oracle_agrees_with_descriptor_path() {
        for symmetric in [true, false] {
            let config = SyntheticConfig {
                order: 6,
                outputs: 2,
                inputs: 3,
                band: PoleBand::new(0.5, 20.0),
                p0: CMatrix::from_fn(2, 3, |r, c| cre((r + c) as f64 * 0.1)),
                p1: CMatrix::from_fn(2, 3, |r, c| cre(if r == c { 0.05 } else { 0.0 })),
                symmetric,
                seed: 23,
            };
            let sys = make_synthetic(&config).unwrap();
            for s in probe_points() {
                let direct = sys.eval(s).unwrap();
                let pf = sys.eval_partial_fraction(s);
                let scale = pf.norm().max(1.0);
                assert!(
                    (direct - &pf).norm() <= 1e-12 * scale,
                    "partial fraction mismatch for symmetric={symmetric} at {s}"
                );
            }
        }
    }

    fn exact_dataset(sys: &SyntheticSystem, omegas: &[f64]) -> TangentialDataset {
        let samples: Vec<FrequencySample> = omegas
            .iter()
            .map(|&w| {
                let s = c64(0.0, w);
                FrequencySample::new(s, sys.eval(s).unwrap())
            })
            .collect();
        partition(&samples, &PartitionConfig::default()).unwrap()
    }

    #[test]
    fn projector_identities_hold_for_exact_data() {
        let sys = make_synthetic(&SyntheticConfig::siso(
            3,
            PoleBand::new(0.5, 5.0),
            0.0,
            0.0,
            false,
            31,
        ))
        .unwrap();
        let dataset = exact_dataset(&sys, &[0.3, 0.7, 1.3, 2.1, 3.4, 5.5]);
        let report = projector_oracle(&sys, &dataset).unwrap();
        assert!(report.max() <= 1e-10, "residuals {report:?}");
    }

    #[test]
    fn projector_oracle_flags_foreign_data() {
        let sys = make_synthetic(&SyntheticConfig::siso(
            3,
            PoleBand::new(0.5, 5.0),
            0.0,
            0.0,
            false,
            31,
        ))
        .unwrap();
        let samples: Vec<FrequencySample> = [0.3, 0.7, 1.3, 2.1, 3.4, 5.5]
            .iter()
            .map(|&w| {
                let s = c64(0.0, w);
                let mut value = sys.eval(s).unwrap();
                value[(0, 0)] += c64(0.05, -0.02);
                FrequencySample::new(s, value)
            })
            .collect();
        let dataset = partition(&samples, &PartitionConfig::default()).unwrap();
        let report = projector_oracle(&sys, &dataset).unwrap();
        assert!(report.left_values > 1e-3 || report.right_values > 1e-3);
    }

    #[test]
    fn projector_scalar_case_is_machine_exact() {
        let sys = canonical_first_order();
        let dataset = exact_dataset(&sys, &[0.5, 2.0]);
        let report = projector_oracle(&sys, &dataset).unwrap();
        assert!(report.max() <= 1e-14, "residuals {report:?}");
    }

    #[test]
    fn projector_oracle_rejects_nonproper_truth() {
        let sys = make_synthetic(&SyntheticConfig::siso(
            2,
            PoleBand::new(0.5, 5.0),
            1.0,
            0.0,
            true,
            5,
        ))
        .unwrap();
        let dataset = exact_dataset(&sys, &[0.3, 0.9, 1.7, 2.5]);
        assert!(matches!(
            projector_oracle(&sys, &dataset),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn dae_example_matches_closed_form() {
        let sys = dae_block_example(1.0, 2.0);
        assert!(sys.realization.poly.is_none());
        assert_eq!(sys.realization.order(), 4);
        for s in probe_points() {
            let expected = cre(1.0) + cre(2.0) * s + cre(1.0) / (s + cre(1.0));
            let got = sys.eval(s).unwrap()[(0, 0)];
            assert_relative_eq!((got - expected).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn sampling_rejects_pole_collision() {
        let mut sys = canonical_first_order();
        sys.poles = vec![c64(0.0, 1.0)];
        let grid = GridSpec::linear(1.0, 2.0, 3);
        assert!(matches!(
            sample_system(&sys, &grid),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn bench_registry_builds_every_case() {
        let cases = bench_cases();
        assert_eq!(cases.len(), 5);
        for case in &cases {
            let sys = case.build().unwrap();
            let samples = sample_system(&sys, &case.default_grid).unwrap();
            assert_eq!(samples.len(), case.default_grid.count);
        }
        assert!(bench_case("msd_like_siso").is_ok());
        assert!(matches!(bench_case("nope"), Err(Error::Config(_))));
    }
}
