//! Explicit identification of the linear polynomial part P0 + sP1 from
//! high-frequency samples, and the subtract-then-fit pipeline that combines
//! it with the rational Loewner fit.
//!
//! A non-proper transfer function splits as H(s) = H_spr(s) + P0 + sP1 with
//! H_spr strictly proper. At large |s| the strictly proper tail decays, so
//! P0 and P1 can be read off high-frequency values: one sample, a pair, or
//! a full tangential dataset (the pseudo-inverse estimator). Subtracting
//! the estimate leaves data a plain Loewner fit handles well.

use num_complex::Complex64;

use crate::data::{
    is_conjugate_symmetric, partition, DirectionRule, FrequencySample, GridSpec, PartitionConfig,
    PartitionScheme, Spacing, TangentialDataset,
};
use crate::error::{Error, Result};
use crate::linalg::{c64, max_imag, pseudo_inverse, real_part, CMatrix};
use crate::pencil::{build_quadruple, reduce, DescriptorRealization, ReductionReport};

/// Relative singular-value cutoff for the direction pseudo-inverses.
const PINV_TOL: f64 = 1e-12;

/// Residual scale below which the post-subtraction data counts as zero and
/// the rational part is skipped entirely.
const ZERO_RATIONAL_REL: f64 = 1e-13;

/// Coefficients of the linear polynomial part P0 + sP1, both p×m.
///
/// Stored complex: the estimators can only certify real coefficients when
/// the data is conjugate-symmetric, and any imaginary content is evidence
/// worth keeping until then.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyCoefficients {
    pub p0: CMatrix,
    pub p1: CMatrix,
}

impl PolyCoefficients {
    pub fn new(p0: CMatrix, p1: CMatrix) -> Result<Self> {
        if p0.nrows() != p1.nrows() || p0.ncols() != p1.ncols() {
            return Err(Error::shape(
                "polynomial coefficients",
                format!("{}x{}", p0.nrows(), p0.ncols()),
                format!("{}x{}", p1.nrows(), p1.ncols()),
            ));
        }
        Ok(PolyCoefficients { p0, p1 })
    }

    pub fn zeros(p: usize, m: usize) -> Self {
        PolyCoefficients {
            p0: CMatrix::zeros(p, m),
            p1: CMatrix::zeros(p, m),
        }
    }

    pub fn outputs(&self) -> usize {
        self.p0.nrows()
    }

    pub fn inputs(&self) -> usize {
        self.p0.ncols()
    }

    /// P0 + s·P1
    pub fn eval(&self, s: Complex64) -> CMatrix {
        &self.p0 + &self.p1 * s
    }

    /// Largest |Im| entry across both coefficients.
    pub fn max_imag(&self) -> f64 {
        max_imag(&self.p0).max(max_imag(&self.p1))
    }

    /// Drop imaginary parts; only justified on conjugate-symmetric data.
    pub fn realified(&self) -> Self {
        PolyCoefficients {
            p0: real_part(&self.p0),
            p1: real_part(&self.p1),
        }
    }
}

/// High-frequency band used for polynomial estimation, in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HighFreqWindow {
    pub omega_min: f64,
    pub omega_max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl Default for HighFreqWindow {
    /// 10 log-spaced points on [1e7, 1e9] rad/s.
    fn default() -> Self {
        HighFreqWindow {
            omega_min: 1e7,
            omega_max: 1e9,
            count: 10,
            spacing: Spacing::Log,
        }
    }
}

impl HighFreqWindow {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega_min > 0.0 && self.omega_max.is_finite()) || self.omega_min >= self.omega_max
        {
            return Err(Error::Config(format!(
                "high-frequency window needs 0 < omega_min < omega_max, got [{}, {}]",
                self.omega_min, self.omega_max
            )));
        }
        if self.count == 0 {
            return Err(Error::Config("high-frequency window needs count >= 1".into()));
        }
        Ok(())
    }

    pub fn grid(&self) -> GridSpec {
        GridSpec {
            start: self.omega_min,
            end: self.omega_max,
            count: self.count,
            spacing: self.spacing,
        }
    }

    /// True when |Im s| of an imaginary-axis point falls inside the window.
    pub fn contains(&self, point: Complex64) -> bool {
        let w = point.im.abs();
        w >= self.omega_min && w <= self.omega_max
    }
}

fn imaginary_axis_omega(sample: &FrequencySample) -> Result<f64> {
    if sample.point.re != 0.0 {
        return Err(Error::Domain(format!(
            "polynomial estimation needs imaginary-axis points, got {}",
            sample.point
        )));
    }
    let omega = sample.point.im;
    if omega == 0.0 {
        return Err(Error::Domain(
            "polynomial estimation needs a nonzero frequency".into(),
        ));
    }
    Ok(omega)
}

/// One-sample estimate at s = iω: P̂0 = Re H(iω), P̂1 = Im H(iω) / ω.
///
/// Exact on purely linear H; on H with a strictly proper tail the error
/// decays like ω^{-2} (P0) and ω^{-2} (P1).
pub fn estimate_single(sample: &FrequencySample) -> Result<PolyCoefficients> {
    let omega = imaginary_axis_omega(sample)?;
    let p0 = sample.value.map(|z| c64(z.re, 0.0));
    let p1 = sample.value.map(|z| c64(z.im / omega, 0.0));
    PolyCoefficients::new(p0, p1)
}

/// Two-sample estimate at s = iω1, iω2:
///
/// ```text
/// P̂1 = (H(iω1) − H(iω2)) / (iω1 − iω2)
/// P̂0 = Re((iω1 H(iω1) − iω2 H(iω2)) / (iω1 − iω2))
/// ```
///
/// Exact for any linear H regardless of the point pair.
pub fn estimate_pair(s1: &FrequencySample, s2: &FrequencySample) -> Result<PolyCoefficients> {
    if s1.outputs() != s2.outputs() || s1.inputs() != s2.inputs() {
        return Err(Error::shape(
            "sample pair",
            format!("{}x{}", s1.outputs(), s1.inputs()),
            format!("{}x{}", s2.outputs(), s2.inputs()),
        ));
    }
    let w1 = imaginary_axis_omega(s1)?;
    let w2 = imaginary_axis_omega(s2)?;
    if w1 == w2 {
        return Err(Error::Domain(format!(
            "pair estimate needs distinct frequencies, both are {w1}"
        )));
    }
    let denom = c64(0.0, w1) - c64(0.0, w2);
    let p1 = (&s1.value - &s2.value).map(|z| z / denom);
    let weighted = &s1.value * c64(0.0, w1) - &s2.value * c64(0.0, w2);
    let p0 = real_part(&weighted.map(|z| z / denom));
    PolyCoefficients::new(p0, p1)
}

/// Tangential estimator on a square high-frequency dataset:
///
/// ```text
/// P̂1 = L† 𝕃 R†,   P̂0 = Re(L† 𝕃s R†)
/// ```
///
/// with L the stacked left directions (q×p), R the right directions (m×k),
/// and † the Moore-Penrose pseudo-inverse (cutoff 1e-12 relative).
///
/// # Errors
/// Needs q = k ≥ max(p, m); directions whose pseudo-inverse fails the
/// identity check (rank deficiency) raise [`Error::IllPosedDirections`].
pub fn estimate_general(dataset: &TangentialDataset) -> Result<PolyCoefficients> {
    let q = dataset.left_len();
    let k = dataset.right_len();
    if q != k {
        return Err(Error::shape("general estimator needs q = k", q, k));
    }
    if k == 0 {
        return Err(Error::Degenerate(
            "general estimator got an empty dataset".into(),
        ));
    }
    let p = dataset.outputs();
    let m = dataset.inputs();
    if k < p.max(m) {
        return Err(Error::Config(format!(
            "general estimator needs at least max(p, m) = {} points per side, got {k}",
            p.max(m)
        )));
    }
    let quad = build_quadruple(dataset)?;
    let ldir = dataset.left_directions();
    let rdir = dataset.right_directions();
    let ldag = pseudo_inverse(ldir, PINV_TOL)?;
    let rdag = pseudo_inverse(rdir, PINV_TOL)?;
    if (&ldag * ldir - CMatrix::identity(p, p)).norm() > 1e-8 * (p as f64).sqrt() {
        return Err(Error::IllPosedDirections);
    }
    if (rdir * &rdag - CMatrix::identity(m, m)).norm() > 1e-8 * (m as f64).sqrt() {
        return Err(Error::IllPosedDirections);
    }
    let p1 = &ldag * quad.loewner() * &rdag;
    let p0 = real_part(&(&ldag * quad.shifted() * &rdag));
    PolyCoefficients::new(p0, p1)
}

/// Subtract P0 + s·P1 from every sample value; points are untouched.
pub fn subtract_poly(
    samples: &[FrequencySample],
    coeffs: &PolyCoefficients,
) -> Result<Vec<FrequencySample>> {
    samples
        .iter()
        .map(|s| {
            if s.outputs() != coeffs.outputs() || s.inputs() != coeffs.inputs() {
                return Err(Error::shape(
                    "sample vs polynomial coefficients",
                    format!("{}x{}", coeffs.outputs(), coeffs.inputs()),
                    format!("{}x{}", s.outputs(), s.inputs()),
                ));
            }
            Ok(FrequencySample::new(
                s.point,
                &s.value - coeffs.eval(s.point),
            ))
        })
        .collect()
}

/// Result of the subtract-then-fit pipeline.
#[derive(Debug, Clone)]
pub struct PolyLoewnerFit {
    /// Reduced rational part with the polynomial block attached.
    pub model: DescriptorRealization,
    pub poly: PolyCoefficients,
    /// Singular-value report of the rational reduction; `None` when the
    /// residual data was numerically zero and no pencil was built.
    pub reduction: Option<ReductionReport>,
    /// Largest imaginary coefficient entry dropped by the realification of
    /// conjugate-symmetric data; 0 when nothing was dropped.
    pub dropped_imag: f64,
}

fn max_sample_magnitude(samples: &[FrequencySample]) -> f64 {
    samples
        .iter()
        .flat_map(|s| s.value.iter())
        .fold(0.0, |acc: f64, z| acc.max(z.norm()))
}

/// Fit with known polynomial coefficients: subtract, then run the plain
/// Loewner pipeline on the remainder. When the remainder is numerically
/// zero (relative to the original data) the rational part is skipped and a
/// purely polynomial model returned.
pub fn fit_poly_loewner_with(
    samples_lo: &[FrequencySample],
    coeffs: &PolyCoefficients,
    config: &PartitionConfig,
    tol: f64,
) -> Result<PolyLoewnerFit> {
    let residual = subtract_poly(samples_lo, coeffs)?;
    let original_scale = max_sample_magnitude(samples_lo);
    let residual_scale = max_sample_magnitude(&residual);
    if residual_scale <= ZERO_RATIONAL_REL * original_scale {
        return Ok(PolyLoewnerFit {
            model: DescriptorRealization::from_poly(coeffs.clone()),
            poly: coeffs.clone(),
            reduction: None,
            dropped_imag: 0.0,
        });
    }
    let dataset = partition(&residual, config)?;
    let quad = build_quadruple(&dataset)?;
    let (model, report) = reduce(&quad, tol)?;
    Ok(PolyLoewnerFit {
        model: model.with_poly(Some(coeffs.clone()))?,
        poly: coeffs.clone(),
        reduction: Some(report),
        dropped_imag: 0.0,
    })
}

/// High-frequency sets are always split alternating; positional direction
/// rules cannot carry over from the low set, so `Given` falls back to
/// cycled identity columns there.
fn hi_partition_config(config: &PartitionConfig) -> PartitionConfig {
    PartitionConfig {
        scheme: PartitionScheme::Alternating,
        direction_rule: match &config.direction_rule {
            DirectionRule::Given { .. } => DirectionRule::CyclicIdentity,
            other => other.clone(),
        },
        conjugate_closure: config.conjugate_closure,
    }
}

/// Full explicit pipeline: estimate (P0, P1) from the high-frequency
/// samples via [`estimate_general`], subtract from the low-frequency
/// samples, and fit the remainder with the plain Loewner reduction.
///
/// When the combined sample set is conjugate-symmetric the coefficients
/// are realified and the dropped imaginary magnitude reported.
pub fn fit_poly_loewner(
    samples_lo: &[FrequencySample],
    samples_hi: &[FrequencySample],
    config: &PartitionConfig,
    tol: f64,
) -> Result<PolyLoewnerFit> {
    let mut hi_dataset = partition(samples_hi, &hi_partition_config(config))?;
    // the general estimator needs a square dataset; an odd unit count in
    // the window leaves the alternating split uneven, so square it up
    let square = hi_dataset.left_len().min(hi_dataset.right_len());
    if square == 0 {
        return Err(Error::Config(format!(
            "the high-frequency window needs enough samples for both sides \
             of the estimator, got {} left and {} right",
            hi_dataset.left_len(),
            hi_dataset.right_len()
        )));
    }
    if hi_dataset.left_len() != hi_dataset.right_len() {
        hi_dataset = hi_dataset.truncate(square, square)?;
    }
    let mut coeffs = estimate_general(&hi_dataset)?;
    let mut dropped = 0.0;
    let combined: Vec<FrequencySample> = samples_lo
        .iter()
        .chain(samples_hi)
        .cloned()
        .collect();
    if is_conjugate_symmetric(&combined) {
        dropped = coeffs.max_imag();
        coeffs = coeffs.realified();
    }
    let mut fit = fit_poly_loewner_with(samples_lo, &coeffs, config, tol)?;
    fit.dropped_imag = dropped;
    Ok(fit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn linear_siso(s: Complex64) -> Complex64 {
        c64(2.0, 0.0) + c64(3.0, 0.0) * s
    }

    fn nonproper_siso(s: Complex64) -> Complex64 {
        c64(1.0, 0.0) + s + c64(1.0, 0.0) / (s + c64(1.0, 0.0))
    }

    fn sample_at(h: impl Fn(Complex64) -> Complex64, omega: f64) -> FrequencySample {
        let s = c64(0.0, omega);
        FrequencySample::siso(s, h(s))
    }

    #[test]
    fn single_sample_exact_on_linear() {
        let est = estimate_single(&sample_at(linear_siso, 10.0)).unwrap();
        assert_eq!(est.p0[(0, 0)], c64(2.0, 0.0));
        assert_eq!(est.p1[(0, 0)], c64(3.0, 0.0));
    }

    #[test]
    fn single_sample_mimo_odd_even_split() {
        let s = c64(0.0, 5.0);
        let value = CMatrix::from_row_slice(2, 2, &[s, c64(0.0, 0.0), c64(0.0, 0.0), s * c64(2.0, 0.0)]);
        let est = estimate_single(&FrequencySample::new(s, value)).unwrap();
        assert_eq!(est.p0.norm(), 0.0);
        assert_eq!(est.p1[(0, 0)], c64(1.0, 0.0));
        assert_eq!(est.p1[(1, 1)], c64(2.0, 0.0));
        assert_eq!(est.p1[(0, 1)], c64(0.0, 0.0));
    }

    #[test]
    fn single_sample_decay_bounds() {
        let est = estimate_single(&sample_at(nonproper_siso, 1e6)).unwrap();
        assert!((est.p0[(0, 0)] - c64(1.0, 0.0)).norm() <= 1e-11);
        assert!((est.p1[(0, 0)] - c64(1.0, 0.0)).norm() <= 1e-7);
    }

    #[test]
    fn single_sample_rejects_bad_points() {
        let off_axis = FrequencySample::siso(c64(1.0, 2.0), c64(0.0, 0.0));
        assert!(matches!(estimate_single(&off_axis), Err(Error::Domain(_))));
        let zero = FrequencySample::siso(c64(0.0, 0.0), c64(0.0, 0.0));
        assert!(matches!(estimate_single(&zero), Err(Error::Domain(_))));
    }

    #[test]
    fn pair_exact_on_linear_and_constant() {
        let est = estimate_pair(&sample_at(linear_siso, 10.0), &sample_at(linear_siso, 20.0)).unwrap();
        assert_relative_eq!((est.p0[(0, 0)] - c64(2.0, 0.0)).norm(), 0.0, epsilon = 1e-14);
        assert_relative_eq!((est.p1[(0, 0)] - c64(3.0, 0.0)).norm(), 0.0, epsilon = 1e-14);

        let c = |_s: Complex64| c64(0.7, 0.0);
        let est = estimate_pair(&sample_at(c, 3.0), &sample_at(c, 11.0)).unwrap();
        assert_eq!(est.p0[(0, 0)], c64(0.7, 0.0));
        assert_eq!(est.p1[(0, 0)].norm(), 0.0);
    }

    #[test]
    fn pair_decay_bounds_and_errors() {
        let est = estimate_pair(&sample_at(nonproper_siso, 1e7), &sample_at(nonproper_siso, 2e7)).unwrap();
        assert!((est.p1[(0, 0)] - c64(1.0, 0.0)).norm() <= 1e-13);
        assert!((est.p0[(0, 0)] - c64(1.0, 0.0)).norm() <= 1e-6);
        assert!(matches!(
            estimate_pair(&sample_at(nonproper_siso, 5.0), &sample_at(nonproper_siso, 5.0)),
            Err(Error::Domain(_))
        ));
    }

    fn window_dataset(h: impl Fn(Complex64) -> Complex64 + Copy, window: &HighFreqWindow) -> TangentialDataset {
        let samples: Vec<_> = window.grid().points().iter().map(|&w| sample_at(h, w)).collect();
        partition(
            &samples,
            &PartitionConfig {
                scheme: PartitionScheme::Alternating,
                direction_rule: DirectionRule::SisoOnes,
                conjugate_closure: false,
            },
        )
        .unwrap()
    }

    #[test]
    fn general_exact_on_polynomial_data() {
        let window = HighFreqWindow {
            omega_min: 10.0,
            omega_max: 40.0,
            count: 4,
            spacing: Spacing::Linear,
        };
        let est = estimate_general(&window_dataset(linear_siso, &window)).unwrap();
        assert!((est.p1[(0, 0)] - c64(3.0, 0.0)).norm() <= 1e-12);
        assert!((est.p0[(0, 0)] - c64(2.0, 0.0)).norm() <= 1e-12);
    }

    #[test]
    fn general_default_window_bounds() {
        let est = estimate_general(&window_dataset(nonproper_siso, &HighFreqWindow::default())).unwrap();
        assert!((est.p1[(0, 0)] - c64(1.0, 0.0)).norm() <= 1e-7);
        assert!((est.p0[(0, 0)] - c64(1.0, 0.0)).norm() <= 1e-5);
    }

    #[test]
    fn general_matches_pair_for_scalar_square_one() {
        // single left/right points with unit directions reduce the estimator
        // to the two-point divided-difference formulas
        let a = sample_at(nonproper_siso, 1e7);
        let b = sample_at(nonproper_siso, 2e7);
        let ds = TangentialDataset::siso(
            &[(a.point, a.value[(0, 0)])],
            &[(b.point, b.value[(0, 0)])],
        )
        .unwrap();
        let gen = estimate_general(&ds).unwrap();
        let pair = estimate_pair(&a, &b).unwrap();
        assert_relative_eq!((gen.p1[(0, 0)] - pair.p1[(0, 0)]).norm(), 0.0, epsilon = 1e-14);
        assert_relative_eq!((gen.p0[(0, 0)] - pair.p0[(0, 0)]).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn general_mimo_against_least_squares_oracle() {
        let p1_true = CMatrix::from_row_slice(2, 2, &[c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(2.0, 0.0)]);
        let p0_true = CMatrix::from_row_slice(2, 2, &[c64(1.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0), c64(1.0, 0.0)]);
        let h = |s: Complex64| -> CMatrix {
            &p0_true + &p1_true * s + CMatrix::from_element(2, 2, c64(1.0, 0.0) / (s + c64(1.0, 0.0)))
        };
        let grid = GridSpec::log(1e7, 1e9, 8);
        let samples: Vec<_> = grid
            .points()
            .iter()
            .map(|&w| FrequencySample::new(c64(0.0, w), h(c64(0.0, w))))
            .collect();
        let ds = partition(&samples, &PartitionConfig::default()).unwrap();
        let est = estimate_general(&ds).unwrap();

        // oracle: solve the overdetermined system L_dir * P1 * R = Loewner
        // entrywise by least squares over the 4 unknowns
        let quad = build_quadruple(&ds).unwrap();
        let ldir = ds.left_directions();
        let rdir = ds.right_directions();
        let q = ds.left_len();
        let k = ds.right_len();
        let mut rows = CMatrix::zeros(q * k, 4);
        let mut rhs = CMatrix::zeros(q * k, 1);
        for j in 0..q {
            for i in 0..k {
                for a in 0..2 {
                    for b in 0..2 {
                        rows[(j * k + i, a * 2 + b)] = ldir[(j, a)] * rdir[(b, i)];
                    }
                }
                rhs[(j * k + i, 0)] = quad.loewner()[(j, i)];
            }
        }
        let sol = pseudo_inverse(&rows, 1e-12).unwrap() * rhs;
        for a in 0..2 {
            for b in 0..2 {
                assert!(
                    (est.p1[(a, b)] - sol[(a * 2 + b, 0)]).norm() <= 1e-6,
                    "entry ({a},{b}) disagrees with least-squares oracle"
                );
                assert!((est.p1[(a, b)] - p1_true[(a, b)]).norm() <= 1e-6);
            }
        }
    }

    #[test]
    fn general_rejects_bad_shapes_and_directions() {
        let ds = TangentialDataset::siso(
            &[(c64(0.0, 1.0), c64(1.0, 0.0)), (c64(0.0, 2.0), c64(1.0, 0.0))],
            &[(c64(0.0, 3.0), c64(1.0, 0.0))],
        )
        .unwrap();
        assert!(matches!(estimate_general(&ds), Err(Error::Shape { .. })));

        // 2x2 data with both left directions equal to e1: column rank 1 < p
        let h = |s: Complex64| CMatrix::from_fn(2, 2, |r, c| c64((r + c) as f64, 0.0) / s + s);
        let mk = |w: f64| FrequencySample::new(c64(0.0, w), h(c64(0.0, w)));
        let e1 = crate::linalg::CVector::from_column_slice(&[c64(1.0, 0.0), c64(0.0, 0.0)]);
        let config = PartitionConfig {
            scheme: PartitionScheme::Alternating,
            direction_rule: DirectionRule::Given {
                left: vec![e1.clone(), e1.clone()],
                right: vec![e1.clone(), e1.clone()],
            },
            conjugate_closure: false,
        };
        let ds = partition(&[mk(1.0), mk(2.0), mk(3.0), mk(4.0)], &config).unwrap();
        assert!(matches!(estimate_general(&ds), Err(Error::IllPosedDirections)));
    }

    #[test]
    fn subtract_poly_paths() {
        let samples: Vec<_> = [1.0, 2.0, 5.0].iter().map(|&w| sample_at(nonproper_siso, w)).collect();
        let zero = PolyCoefficients::zeros(1, 1);
        assert_eq!(subtract_poly(&samples, &zero).unwrap(), samples);

        let lin: Vec<_> = [1.0, 2.0].iter().map(|&w| sample_at(linear_siso, w)).collect();
        let exact = PolyCoefficients::new(
            CMatrix::from_element(1, 1, c64(2.0, 0.0)),
            CMatrix::from_element(1, 1, c64(3.0, 0.0)),
        )
        .unwrap();
        for s in subtract_poly(&lin, &exact).unwrap() {
            assert_eq!(s.value.norm(), 0.0);
        }

        let ones = PolyCoefficients::new(
            CMatrix::from_element(1, 1, c64(1.0, 0.0)),
            CMatrix::from_element(1, 1, c64(1.0, 0.0)),
        )
        .unwrap();
        for s in subtract_poly(&samples, &ones).unwrap() {
            let want = c64(1.0, 0.0) / (s.point + c64(1.0, 0.0));
            assert!((s.value[(0, 0)] - want).norm() <= 1e-14);
        }
    }

    #[test]
    fn full_pipeline_recovers_composite_model() {
        let lo: Vec<_> = GridSpec::log(0.1, 10.0, 8)
            .points()
            .iter()
            .map(|&w| sample_at(nonproper_siso, w))
            .collect();
        let hi: Vec<_> = HighFreqWindow::default()
            .grid()
            .points()
            .iter()
            .map(|&w| sample_at(nonproper_siso, w))
            .collect();
        let config = PartitionConfig {
            direction_rule: DirectionRule::SisoOnes,
            ..PartitionConfig::default()
        };
        let fit = fit_poly_loewner(&lo, &hi, &config, 1e-10).unwrap();
        assert_eq!(fit.model.order(), 1);
        assert!((fit.poly.p1[(0, 0)] - c64(1.0, 0.0)).norm() <= 1e-7);
        assert!((fit.poly.p0[(0, 0)] - c64(1.0, 0.0)).norm() <= 1e-5);
        for t in 0..20 {
            let s = c64(0.0, 0.15 + 0.45 * t as f64);
            let err = (fit.model.eval(s).unwrap()[(0, 0)] - nonproper_siso(s)).norm()
                / nonproper_siso(s).norm();
            assert!(err <= 1e-6, "composite error {err} at {s}");
        }
    }

    #[test]
    fn pure_polynomial_data_skips_rational_part() {
        let lo: Vec<_> = [0.5, 1.0, 2.0, 4.0].iter().map(|&w| sample_at(linear_siso, w)).collect();
        let hi: Vec<_> = [1e7, 3e7, 1e8, 3e8].iter().map(|&w| sample_at(linear_siso, w)).collect();
        let config = PartitionConfig {
            direction_rule: DirectionRule::SisoOnes,
            ..PartitionConfig::default()
        };
        let fit = fit_poly_loewner(&lo, &hi, &config, 1e-10).unwrap();
        assert_eq!(fit.model.order(), 0);
        assert!(fit.reduction.is_none());
        let s = c64(0.0, 3.0);
        assert!((fit.model.eval(s).unwrap()[(0, 0)] - linear_siso(s)).norm() <= 1e-10);
    }

    #[test]
    fn strictly_proper_truth_gives_tiny_p1() {
        let h = |s: Complex64| c64(1.0, 0.0) / (s + c64(1.0, 0.0));
        let lo: Vec<_> = GridSpec::log(0.1, 10.0, 8).points().iter().map(|&w| sample_at(h, w)).collect();
        let hi: Vec<_> = HighFreqWindow::default().grid().points().iter().map(|&w| sample_at(h, w)).collect();
        let config = PartitionConfig {
            direction_rule: DirectionRule::SisoOnes,
            ..PartitionConfig::default()
        };
        let fit = fit_poly_loewner(&lo, &hi, &config, 1e-10).unwrap();
        assert!(fit.poly.p1.norm() <= 1e-7);
        assert!(fit.poly.p0.norm() <= 1e-7);
        assert_eq!(fit.model.order(), 1);
    }

    #[test]
    fn forced_coefficients_match_plain_fit_of_presubtracted_data() {
        let lo: Vec<_> = GridSpec::log(0.1, 10.0, 8)
            .points()
            .iter()
            .map(|&w| sample_at(nonproper_siso, w))
            .collect();
        let truth = PolyCoefficients::new(
            CMatrix::from_element(1, 1, c64(1.0, 0.0)),
            CMatrix::from_element(1, 1, c64(1.0, 0.0)),
        )
        .unwrap();
        let config = PartitionConfig {
            direction_rule: DirectionRule::SisoOnes,
            ..PartitionConfig::default()
        };
        let fit = fit_poly_loewner_with(&lo, &truth, &config, 1e-10).unwrap();

        let presub = subtract_poly(&lo, &truth).unwrap();
        let ds = partition(&presub, &config).unwrap();
        let (plain, _) = reduce(&build_quadruple(&ds).unwrap(), 1e-10).unwrap();
        for t in 0..10 {
            let s = c64(0.0, 0.2 + 0.9 * t as f64);
            let composite = fit.model.eval(s).unwrap()[(0, 0)];
            let manual = plain.eval(s).unwrap()[(0, 0)] + truth.eval(s)[(0, 0)];
            assert_relative_eq!((composite - manual).norm(), 0.0, epsilon = 1e-12);
        }
    }
}
