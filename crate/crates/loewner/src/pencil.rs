//! Loewner pencil assembly, regularity probing, interpolants, and the
//! reduced descriptor realization.
//!
//! From a [`TangentialDataset`] the quadruple (𝕎, 𝕃, 𝕃s, 𝕍) is assembled
//! entrywise:
//!
//! ```text
//! 𝕃[j,i]  = (v_j^T r_i − ℓ_j^T w_i) / (μ_j − λ_i)
//! 𝕃s[j,i] = (μ_j v_j^T r_i − ℓ_j^T w_i λ_i) / (μ_j − λ_i)
//! ```
//!
//! With square data and a regular pencil, 𝕎(𝕃s − s𝕃)^{-1}𝕍 interpolates
//! every tangential condition. [`reduce`] projects the pencil onto its
//! numerical rank to obtain a small descriptor realization.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::data::{MatrixJson, TangentialDataset};
use crate::error::{Error, Result};
use crate::linalg::{c64, hcat, pivot_range, solve_guarded, thin_svd, vcat, CMatrix, RCOND_FLOOR};
use crate::poly::PolyCoefficients;

/// The Loewner data matrices 𝕃, 𝕃s (both q×k) together with the stacked
/// left responses 𝕍 (q×m) and right responses 𝕎 (p×k), plus the dataset
/// they came from.
#[derive(Debug, Clone)]
pub struct LoewnerQuadruple {
    loewner: CMatrix,
    shifted: CMatrix,
    left_values: CMatrix,
    right_values: CMatrix,
    dataset: TangentialDataset,
}

/// Outcome of probing det(𝕃s − ζ𝕃) (or det(A − ζE)) at deterministic
/// points off the imaginary axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularityCheck {
    pub regular: bool,
    /// First probe with a comfortably nonzero determinant.
    pub witness: Option<Complex64>,
}

/// Assemble the Loewner quadruple from tangential data.
///
/// Point collisions between the two sides are impossible by the dataset
/// invariant; an empty side leaves nothing to interpolate and is rejected.
pub fn build_quadruple(dataset: &TangentialDataset) -> Result<LoewnerQuadruple> {
    let q = dataset.left_len();
    let k = dataset.right_len();
    if q == 0 || k == 0 {
        return Err(Error::Degenerate(format!(
            "both sides need samples to build a Loewner pencil, got q={q} k={k}"
        )));
    }
    let ld = dataset.left_directions();
    let lv = dataset.left_responses();
    let rd = dataset.right_directions();
    let rv = dataset.right_responses();
    // vr[j,i] = v_j^T r_i, lw[j,i] = ℓ_j^T w_i
    let vr = lv * rd;
    let lw = ld * rv;
    let mut loewner = CMatrix::zeros(q, k);
    let mut shifted = CMatrix::zeros(q, k);
    for j in 0..q {
        let mu = dataset.left_points()[j];
        for i in 0..k {
            let la = dataset.right_points()[i];
            let denom = mu - la;
            loewner[(j, i)] = (vr[(j, i)] - lw[(j, i)]) / denom;
            shifted[(j, i)] = (mu * vr[(j, i)] - lw[(j, i)] * la) / denom;
        }
    }
    Ok(LoewnerQuadruple {
        loewner,
        shifted,
        left_values: lv.clone(),
        right_values: rv.clone(),
        dataset: dataset.clone(),
    })
}

impl LoewnerQuadruple {
    pub fn loewner(&self) -> &CMatrix {
        &self.loewner
    }

    pub fn shifted(&self) -> &CMatrix {
        &self.shifted
    }

    /// 𝕍, rows v_j^T (q×m).
    pub fn left_values(&self) -> &CMatrix {
        &self.left_values
    }

    /// 𝕎, columns w_i (p×k).
    pub fn right_values(&self) -> &CMatrix {
        &self.right_values
    }

    pub fn dataset(&self) -> &TangentialDataset {
        &self.dataset
    }

    pub fn rows(&self) -> usize {
        self.loewner.nrows()
    }

    pub fn cols(&self) -> usize {
        self.loewner.ncols()
    }

    /// Relative Frobenius residuals of the two Sylvester identities
    ///
    /// ```text
    /// M𝕃 − 𝕃Λ  = 𝕍R − L𝕎
    /// M𝕃s − 𝕃sΛ = M𝕍R − L𝕎Λ
    /// ```
    ///
    /// which hold exactly (up to rounding) for any quadruple built by
    /// [`build_quadruple`]. Each residual is normalized by the norm of its
    /// left-hand side when that is nonzero.
    pub fn sylvester_residuals(&self) -> (f64, f64) {
        let m = self.dataset.left_diag();
        let la = self.dataset.right_diag();
        let r = self.dataset.right_directions();
        let ldir = self.dataset.left_directions();
        let v = &self.left_values;
        let w = &self.right_values;

        let lhs1 = &m * &self.loewner - &self.loewner * &la;
        let rhs1 = v * r - ldir * w;
        let lhs2 = &m * &self.shifted - &self.shifted * &la;
        let rhs2 = &m * (v * r) - ldir * (w * &la);

        let rel = |lhs: &CMatrix, rhs: &CMatrix| {
            let diff = (lhs - rhs).norm();
            let scale = lhs.norm();
            if scale > 0.0 {
                diff / scale
            } else {
                diff
            }
        };
        (rel(&lhs1, &rhs1), rel(&lhs2, &rhs2))
    }

    /// Probe the pencil (𝕃s, 𝕃) for regularity; requires square data.
    pub fn check_regularity(&self, probes: usize) -> Result<RegularityCheck> {
        if self.rows() != self.cols() {
            return Err(Error::shape(
                "regularity check needs a square pencil",
                self.rows(),
                self.cols(),
            ));
        }
        Ok(probe_regularity(&self.shifted, &self.loewner, probes))
    }

    /// Shift the underlying responses by a constant: v̄_j^T = v_j^T − ℓ_j^T K
    /// and w̄_i = w_i − K r_i, i.e. the quadruple of the data of H(s) − K.
    ///
    /// 𝕃 is unchanged and 𝕃̄s = 𝕃s − L K R, so the Sylvester identities
    /// keep holding; any interpolant of the shifted quadruple plus the
    /// constant K interpolates the original data. This realizes the usual
    /// one-parameter family of interpolants indexed by K.
    pub fn apply_k_parameterization(&self, k_shift: &CMatrix) -> Result<LoewnerQuadruple> {
        let p = self.dataset.outputs();
        let m = self.dataset.inputs();
        if k_shift.nrows() != p || k_shift.ncols() != m {
            return Err(Error::shape(
                "K shape",
                format!("{p}x{m}"),
                format!("{}x{}", k_shift.nrows(), k_shift.ncols()),
            ));
        }
        let ldir = self.dataset.left_directions();
        let r = self.dataset.right_directions();
        let v_bar = &self.left_values - ldir * k_shift;
        let w_bar = &self.right_values - k_shift * r;
        let shifted_bar = &self.shifted - ldir * k_shift * r;
        let dataset = TangentialDataset::new(
            self.dataset.left_points().to_vec(),
            ldir.clone(),
            v_bar.clone(),
            self.dataset.right_points().to_vec(),
            r.clone(),
            w_bar.clone(),
        )?;
        Ok(LoewnerQuadruple {
            loewner: self.loewner.clone(),
            shifted: shifted_bar,
            left_values: v_bar,
            right_values: w_bar,
            dataset,
        })
    }
}

/// True when det(primary − ζ·secondary) is comfortably nonzero at one of
/// `probes` deterministic real points ζ = 0.5, 1.5, 2.5, ... (off the
/// imaginary axis where data usually lives). Nonzero means the smallest LU
/// pivot clears 1e-12 relative to the matrix norms; a pencil that is
/// singular as a pencil (e.g. redundant data) fails at every probe, since
/// the shared null direction kills one pivot regardless of ζ.
pub fn probe_regularity(primary: &CMatrix, secondary: &CMatrix, probes: usize) -> RegularityCheck {
    if primary.nrows() == 0 {
        // an empty pencil has det = 1 by convention
        return RegularityCheck {
            regular: true,
            witness: Some(c64(0.5, 0.0)),
        };
    }
    for t in 0..probes {
        let zeta = c64(0.5 + t as f64, 0.0);
        let scale = primary.norm() + zeta.norm().max(1.0) * secondary.norm();
        if scale == 0.0 {
            return RegularityCheck {
                regular: false,
                witness: None,
            };
        }
        let shifted = primary - &(secondary * zeta);
        let (dmin, _) = pivot_range(&shifted);
        if dmin > 1e-12 * scale {
            return RegularityCheck {
                regular: true,
                witness: Some(zeta),
            };
        }
    }
    RegularityCheck {
        regular: false,
        witness: None,
    }
}

/// The full-size interpolant of square data: E = −𝕃, A = −𝕃s, B = 𝕍,
/// C = 𝕎, so that C(sE − A)^{-1}B = 𝕎(𝕃s − s𝕃)^{-1}𝕍.
///
/// # Errors
/// Non-square data is rejected; a singular pencil (e.g. from redundant
/// data) returns [`Error::SingularPencil`], in which case [`reduce`] is the
/// right tool.
pub fn direct_interpolant(quad: &LoewnerQuadruple) -> Result<DescriptorRealization> {
    if quad.rows() != quad.cols() {
        return Err(Error::shape(
            "direct interpolant needs q = k",
            quad.rows(),
            quad.cols(),
        ));
    }
    let check = quad.check_regularity(8)?;
    if !check.regular {
        return Err(Error::SingularPencil);
    }
    DescriptorRealization::new(
        -&quad.loewner,
        -&quad.shifted,
        quad.left_values.clone(),
        quad.right_values.clone(),
        None,
    )
}

/// Singular values of the row/column compressions and the rank actually
/// used by [`reduce`].
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionReport {
    /// Singular values of [𝕃, 𝕃s] (row space).
    pub singular_values_row: Vec<f64>,
    /// Singular values of [𝕃; 𝕃s] (column space).
    pub singular_values_col: Vec<f64>,
    pub rank: usize,
    pub tolerance: f64,
}

impl ReductionReport {
    /// Rows `index,sigma_row,sigma_col`; the shorter list leaves blanks.
    pub fn write_csv<W: Write>(&self, writer: &mut W) -> Result<()> {
        writeln!(writer, "index,sigma_row,sigma_col")?;
        let n = self.singular_values_row.len().max(self.singular_values_col.len());
        for i in 0..n {
            let row = self
                .singular_values_row
                .get(i)
                .map(|s| s.to_string())
                .unwrap_or_default();
            let col = self
                .singular_values_col
                .get(i)
                .map(|s| s.to_string())
                .unwrap_or_default();
            writeln!(writer, "{i},{row},{col}")?;
        }
        Ok(())
    }
}

/// Project the pencil onto its numerical rank.
///
/// Y spans the leading left singular vectors of [𝕃, 𝕃s], X the leading
/// right singular vectors of [𝕃; 𝕃s]. The rank r is the larger of the two
/// counts of singular values ≥ τ·σ_max (clamped into [1, min(q, k)]), and
/// the projected realization is Ê = −Y^H𝕃X, Â = −Y^H𝕃sX, B̂ = Y^H𝕍,
/// Ĉ = 𝕎X. Interpolation errors scale with the first neglected singular
/// value.
pub fn reduce(quad: &LoewnerQuadruple, tol: f64) -> Result<(DescriptorRealization, ReductionReport)> {
    if !(tol >= 0.0) {
        return Err(Error::Config(format!("reduction tolerance must be >= 0, got {tol}")));
    }
    let row_svd = thin_svd(&hcat(&quad.loewner, &quad.shifted))?;
    let col_svd = thin_svd(&vcat(&quad.loewner, &quad.shifted))?;
    let sigma_max = row_svd.sigma.first().copied().unwrap_or(0.0);
    if sigma_max <= 1e-250 {
        return Err(Error::Degenerate(
            "Loewner matrices are numerically zero; nothing to reduce".into(),
        ));
    }
    let r_row = crate::linalg::count_above(&row_svd.sigma, tol);
    let r_col = crate::linalg::count_above(&col_svd.sigma, tol);
    let max_rank = quad.rows().min(quad.cols());
    let rank = r_row.max(r_col).clamp(1, max_rank);

    let y = row_svd.u.columns(0, rank).into_owned();
    let x = col_svd.v.columns(0, rank).into_owned();
    let yh = y.adjoint();
    let e = -(&yh * &quad.loewner * &x);
    let a = -(&yh * &quad.shifted * &x);
    let b = &yh * &quad.left_values;
    let c = &quad.right_values * &x;
    let report = ReductionReport {
        singular_values_row: row_svd.sigma,
        singular_values_col: col_svd.sigma,
        rank,
        tolerance: tol,
    };
    Ok((DescriptorRealization::new(e, a, b, c, None)?, report))
}

// ---------------------------------------------------------------------------
// Descriptor realization

/// Descriptor model H(s) = C(sE − A)^{-1}B, optionally plus P0 + sP1.
///
/// E and A are r×r (E may be singular), B is r×m, C is p×r. A present
/// `poly` block must be p×m. r = 0 with a poly block is a purely
/// polynomial model.
#[derive(Debug, Clone, PartialEq)]
pub struct DescriptorRealization {
    pub e: CMatrix,
    pub a: CMatrix,
    pub b: CMatrix,
    pub c: CMatrix,
    pub poly: Option<PolyCoefficients>,
}

impl DescriptorRealization {
    pub fn new(
        e: CMatrix,
        a: CMatrix,
        b: CMatrix,
        c: CMatrix,
        poly: Option<PolyCoefficients>,
    ) -> Result<Self> {
        let r = e.nrows();
        if e.ncols() != r || a.nrows() != r || a.ncols() != r {
            return Err(Error::shape(
                "pencil matrices",
                format!("{r}x{r}"),
                format!("{}x{}", a.nrows(), a.ncols()),
            ));
        }
        if b.nrows() != r {
            return Err(Error::shape("B rows", r, b.nrows()));
        }
        if c.ncols() != r {
            return Err(Error::shape("C columns", r, c.ncols()));
        }
        if let Some(p) = &poly {
            if p.p0.nrows() != c.nrows() || p.p0.ncols() != b.ncols() {
                return Err(Error::shape(
                    "polynomial block",
                    format!("{}x{}", c.nrows(), b.ncols()),
                    format!("{}x{}", p.p0.nrows(), p.p0.ncols()),
                ));
            }
            if p.p1.nrows() != p.p0.nrows() || p.p1.ncols() != p.p0.ncols() {
                return Err(Error::shape(
                    "polynomial degree-1 block",
                    format!("{}x{}", p.p0.nrows(), p.p0.ncols()),
                    format!("{}x{}", p.p1.nrows(), p.p1.ncols()),
                ));
            }
        }
        Ok(DescriptorRealization { e, a, b, c, poly })
    }

    /// Purely polynomial model (empty pencil): H(s) = P0 + sP1.
    pub fn from_poly(poly: PolyCoefficients) -> Self {
        let p = poly.p0.nrows();
        let m = poly.p0.ncols();
        DescriptorRealization {
            e: CMatrix::zeros(0, 0),
            a: CMatrix::zeros(0, 0),
            b: CMatrix::zeros(0, m),
            c: CMatrix::zeros(p, 0),
            poly: Some(poly),
        }
    }

    /// State-space order r.
    pub fn order(&self) -> usize {
        self.e.nrows()
    }

    pub fn outputs(&self) -> usize {
        self.c.nrows()
    }

    pub fn inputs(&self) -> usize {
        self.b.ncols()
    }

    /// Evaluate H(s) = C(sE − A)^{-1}B (+ P0 + sP1) via a dense LU solve.
    ///
    /// # Errors
    /// [`Error::EvalSingular`] when s is (numerically) an eigenvalue of the
    /// pencil.
    pub fn eval(&self, s: Complex64) -> Result<CMatrix> {
        let mut h = if self.order() == 0 {
            CMatrix::zeros(self.outputs(), self.inputs())
        } else {
            let pencil = &self.e * s - &self.a;
            let x = solve_guarded(&pencil, &self.b, RCOND_FLOOR, s)?;
            &self.c * x
        };
        if let Some(p) = &self.poly {
            h += &p.p0 + &p.p1 * s;
        }
        Ok(h)
    }

    /// Probe det(A − ζE) at deterministic off-axis points.
    pub fn check_regularity(&self, probes: usize) -> RegularityCheck {
        probe_regularity(&self.a, &self.e, probes)
    }

    /// Attach (or replace) the polynomial block.
    pub fn with_poly(self, poly: Option<PolyCoefficients>) -> Result<Self> {
        DescriptorRealization::new(self.e, self.a, self.b, self.c, poly)
    }

    pub fn write_json<W: Write>(&self, writer: &mut W) -> Result<()> {
        let json = ModelJson {
            e: MatrixJson::from_matrix(&self.e),
            a: MatrixJson::from_matrix(&self.a),
            b: MatrixJson::from_matrix(&self.b),
            c: MatrixJson::from_matrix(&self.c),
            poly: self.poly.as_ref().map(|p| PolyJson {
                p0: MatrixJson::from_matrix(&p.p0),
                p1: MatrixJson::from_matrix(&p.p1),
            }),
        };
        serde_json::to_writer_pretty(writer, &json)?;
        Ok(())
    }

    pub fn read_json<R: Read>(reader: R) -> Result<Self> {
        let json: ModelJson = serde_json::from_reader(reader)?;
        let poly = match json.poly {
            Some(p) => Some(PolyCoefficients::new(
                p.p0.to_matrix("poly.p0")?,
                p.p1.to_matrix("poly.p1")?,
            )?),
            None => None,
        };
        DescriptorRealization::new(
            json.e.to_matrix("e")?,
            json.a.to_matrix("a")?,
            json.b.to_matrix("b")?,
            json.c.to_matrix("c")?,
            poly,
        )
    }
}

#[derive(Serialize, Deserialize)]
struct ModelJson {
    e: MatrixJson,
    a: MatrixJson,
    b: MatrixJson,
    c: MatrixJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    poly: Option<PolyJson>,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    p0: MatrixJson,
    p1: MatrixJson,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{partition, FrequencySample, PartitionConfig};
    use approx::assert_relative_eq;

    fn hand_dataset() -> TangentialDataset {
        TangentialDataset::siso(
            &[(c64(1.0, 0.0), c64(2.0, 0.0))],
            &[(c64(2.0, 0.0), c64(3.0, 0.0))],
        )
        .unwrap()
    }

    fn siso_rational(points_left: &[Complex64], points_right: &[Complex64], h: impl Fn(Complex64) -> Complex64) -> TangentialDataset {
        let lp: Vec<_> = points_left.iter().map(|&s| (s, h(s))).collect();
        let rp: Vec<_> = points_right.iter().map(|&s| (s, h(s))).collect();
        TangentialDataset::siso(&lp, &rp).unwrap()
    }

    #[test]
    fn hand_example_matrices() {
        let quad = build_quadruple(&hand_dataset()).unwrap();
        assert_eq!(quad.loewner()[(0, 0)], c64(1.0, 0.0));
        assert_eq!(quad.shifted()[(0, 0)], c64(4.0, 0.0));
        assert_eq!(quad.left_values()[(0, 0)], c64(2.0, 0.0));
        assert_eq!(quad.right_values()[(0, 0)], c64(3.0, 0.0));
    }

    #[test]
    fn constant_data_gives_zero_loewner_and_singular_pencil() {
        let c = c64(2.5, 0.0);
        let ds = siso_rational(
            &[c64(0.0, 1.0), c64(0.0, 2.0)],
            &[c64(0.0, 3.0), c64(0.0, 4.0)],
            |_| c,
        );
        let quad = build_quadruple(&ds).unwrap();
        assert_eq!(quad.loewner().norm(), 0.0);
        assert!(matches!(direct_interpolant(&quad), Err(Error::SingularPencil)));
    }

    #[test]
    fn sylvester_identities_hold_and_detect_perturbation() {
        let h = |s: Complex64| {
            CMatrix::from_fn(2, 2, |r, c| {
                c64(1.0 + r as f64, 0.3 * c as f64) / (s + c64(1.0 + (r + c) as f64, 0.0))
            })
        };
        let samples: Vec<_> = (1..=8)
            .map(|t| FrequencySample::new(c64(0.0, t as f64), h(c64(0.0, t as f64))))
            .collect();
        let ds = partition(&samples, &PartitionConfig::default()).unwrap();
        let quad = build_quadruple(&ds).unwrap();
        let (r1, r2) = quad.sylvester_residuals();
        assert!(r1 <= 1e-12, "first residual {r1}");
        assert!(r2 <= 1e-12, "second residual {r2}");

        let mut bumped = quad.clone();
        let scale = bumped.loewner.norm();
        bumped.loewner[(0, 0)] += c64(1e-3 * scale, 0.0);
        let (p1, _) = bumped.sylvester_residuals();
        assert!(p1 > 1e-6, "perturbed residual {p1}");
    }

    #[test]
    fn direct_interpolant_one_point_each() {
        // H(s) = 1/(s+1): mu=1 gives 1/2, lambda=2 gives 1/3
        let ds = siso_rational(&[c64(1.0, 0.0)], &[c64(2.0, 0.0)], |s| {
            c64(1.0, 0.0) / (s + c64(1.0, 0.0))
        });
        let quad = build_quadruple(&ds).unwrap();
        assert_relative_eq!(quad.loewner()[(0, 0)].re, -1.0 / 6.0, max_relative = 1e-15);
        assert_relative_eq!(quad.shifted()[(0, 0)].re, 1.0 / 6.0, max_relative = 1e-15);
        let model = direct_interpolant(&quad).unwrap();
        let h2 = model.eval(c64(2.0, 0.0)).unwrap()[(0, 0)];
        assert_relative_eq!(h2.re, 1.0 / 3.0, max_relative = 1e-14);
        assert_relative_eq!(h2.im, 0.0, epsilon = 1e-16);
    }

    #[test]
    fn interpolation_conditions_hold_for_square_rational_data() {
        // order-2 truth with exactly q = k = 2 samples per side
        let h = |s: Complex64| c64(1.0, 0.0) / (s + c64(1.0, 0.0)) + c64(2.0, 0.0) / (s + c64(3.0, 0.0));
        let left: Vec<_> = [1.0, 2.0].iter().map(|&w| c64(0.0, w)).collect();
        let right: Vec<_> = [1.5, 2.5].iter().map(|&w| c64(0.0, w)).collect();
        let ds = siso_rational(&left, &right, h);
        let quad = build_quadruple(&ds).unwrap();
        let model = direct_interpolant(&quad).unwrap();
        for &s in left.iter().chain(&right) {
            let err = (model.eval(s).unwrap()[(0, 0)] - h(s)).norm() / h(s).norm();
            assert!(err <= 1e-8, "interpolation error {err} at {s}");
        }
        for t in 0..20 {
            let s = c64(0.0, 1.0 + 0.13 * t as f64);
            let err = (model.eval(s).unwrap()[(0, 0)] - h(s)).norm() / h(s).norm();
            assert!(err <= 1e-6, "probe error {err} at {s}");
        }
    }

    #[test]
    fn redundant_square_data_is_caught_as_singular_pencil() {
        // q = k = 3 samples of an order-2 function: the pencil shares a null
        // direction for every shift and must be routed to reduce()
        let h = |s: Complex64| c64(1.0, 0.0) / (s + c64(1.0, 0.0)) + c64(2.0, 0.0) / (s + c64(3.0, 0.0));
        let left: Vec<_> = [1.0, 2.0, 3.0].iter().map(|&w| c64(0.0, w)).collect();
        let right: Vec<_> = [1.5, 2.5, 3.5].iter().map(|&w| c64(0.0, w)).collect();
        let quad = build_quadruple(&siso_rational(&left, &right, h)).unwrap();
        assert!(matches!(direct_interpolant(&quad), Err(Error::SingularPencil)));
        let (model, report) = reduce(&quad, 1e-10).unwrap();
        assert_eq!(report.rank, 2);
        for t in 0..10 {
            let s = c64(0.0, 1.1 + 0.3 * t as f64);
            let err = (model.eval(s).unwrap()[(0, 0)] - h(s)).norm() / h(s).norm();
            assert!(err <= 1e-8, "reduced model error {err}");
        }
    }

    #[test]
    fn regularity_hand_cases() {
        let quad = build_quadruple(&hand_dataset()).unwrap();
        let check = quad.check_regularity(4).unwrap();
        assert!(check.regular);
        assert_eq!(check.witness, Some(c64(0.5, 0.0)));

        let zero = probe_regularity(&CMatrix::zeros(2, 2), &CMatrix::zeros(2, 2), 6);
        assert!(!zero.regular);
        assert_eq!(zero.witness, None);
    }

    #[test]
    fn regularity_requires_square() {
        let ds = siso_rational(
            &[c64(0.0, 1.0), c64(0.0, 2.0)],
            &[c64(0.0, 3.0)],
            |s| c64(1.0, 0.0) / (s + c64(1.0, 0.0)),
        );
        let quad = build_quadruple(&ds).unwrap();
        assert!(matches!(quad.check_regularity(4), Err(Error::Shape { .. })));
    }

    #[test]
    fn reduce_finds_rank_one_for_first_order_truth() {
        let h = |s: Complex64| c64(1.0, 0.0) / (s + c64(1.0, 0.0));
        let left: Vec<_> = (1..=4).map(|t| c64(0.0, t as f64)).collect();
        let right: Vec<_> = (1..=4).map(|t| c64(0.0, t as f64 + 0.5)).collect();
        let quad = build_quadruple(&siso_rational(&left, &right, h)).unwrap();
        let (model, report) = reduce(&quad, 1e-10).unwrap();
        assert_eq!(report.rank, 1);
        assert_eq!(model.order(), 1);
        assert!(report
            .singular_values_row
            .windows(2)
            .all(|w| w[0] >= w[1] && w[1] >= 0.0));
        for t in 0..10 {
            let s = c64(0.0, 0.7 + t as f64);
            let err = (model.eval(s).unwrap()[(0, 0)] - h(s)).norm() / h(s).norm();
            assert!(err <= 1e-8, "probe error {err}");
        }
        let mut csv = Vec::new();
        report.write_csv(&mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with("index,sigma_row,sigma_col\n"));
        assert_eq!(text.lines().count(), 1 + report.singular_values_row.len().max(report.singular_values_col.len()));
    }

    #[test]
    fn reduce_recovers_order_three_truth() {
        let h = |s: Complex64| {
            c64(1.0, 0.0) / (s + c64(1.0, 0.0))
                + c64(1.0, 0.0) / (s + c64(2.0, 0.0))
                + c64(1.0, 0.0) / (s + c64(3.0, 0.0))
        };
        let left: Vec<_> = (0..10).map(|t| c64(0.0, 0.3 + t as f64)).collect();
        let right: Vec<_> = (0..10).map(|t| c64(0.0, 0.8 + t as f64)).collect();
        let ds = siso_rational(&left, &right, h);
        let quad = build_quadruple(&ds).unwrap();
        let (model, report) = reduce(&quad, 1e-10).unwrap();
        assert_eq!(report.rank, 3);
        for &s in left.iter().chain(&right) {
            let err = (model.eval(s).unwrap()[(0, 0)] - h(s)).norm() / h(s).norm();
            assert!(err <= 1e-8, "data point error {err} at {s}");
        }
        // keep-one truncation: rank forced to 1
        let (_, top) = reduce(&quad, 1.0).unwrap();
        assert_eq!(top.rank, 1);
    }

    #[test]
    fn k_shift_matches_hand_values_and_preserves_interpolation() {
        let quad = build_quadruple(&hand_dataset()).unwrap();
        let k = CMatrix::from_element(1, 1, c64(1.0, 0.0));
        let bar = quad.apply_k_parameterization(&k).unwrap();
        // data of H - 1: v = 1, w = 2, Ls = (1*1 - 2*2)/(1-2) = 3, L unchanged
        assert_eq!(bar.loewner()[(0, 0)], c64(1.0, 0.0));
        assert_eq!(bar.shifted()[(0, 0)], c64(3.0, 0.0));
        assert_eq!(bar.left_values()[(0, 0)], c64(1.0, 0.0));
        assert_eq!(bar.right_values()[(0, 0)], c64(2.0, 0.0));
        // rebuilt from its own dataset the quadruple reproduces itself
        let rebuilt = build_quadruple(bar.dataset()).unwrap();
        assert_relative_eq!((rebuilt.shifted() - bar.shifted()).norm(), 0.0, epsilon = 1e-14);

        // zero shift is the identity
        let zero = quad.apply_k_parameterization(&CMatrix::zeros(1, 1)).unwrap();
        assert_eq!(zero.shifted()[(0, 0)], quad.shifted()[(0, 0)]);

        // shifted interpolant + K matches the original data at both points
        let model = direct_interpolant(&bar).unwrap();
        let kk = c64(1.0, 0.0);
        let at_mu = model.eval(c64(1.0, 0.0)).unwrap()[(0, 0)] + kk;
        let at_la = model.eval(c64(2.0, 0.0)).unwrap()[(0, 0)] + kk;
        assert_relative_eq!(at_mu.re, 2.0, max_relative = 1e-12);
        assert_relative_eq!(at_la.re, 3.0, max_relative = 1e-12);
    }

    #[test]
    fn eval_scalar_and_polynomial_paths() {
        let one = CMatrix::from_element(1, 1, c64(1.0, 0.0));
        let model = DescriptorRealization::new(one.clone(), one.clone(), one.clone(), one, None).unwrap();
        assert_eq!(model.eval(c64(2.0, 0.0)).unwrap()[(0, 0)], c64(1.0, 0.0));
        assert!(matches!(
            model.eval(c64(1.0, 0.0)),
            Err(Error::EvalSingular { .. })
        ));

        let poly = PolyCoefficients::new(
            CMatrix::from_element(1, 1, c64(1.0, 0.0)),
            CMatrix::from_element(1, 1, c64(2.0, 0.0)),
        )
        .unwrap();
        let pure = DescriptorRealization::from_poly(poly);
        assert_eq!(pure.order(), 0);
        assert_eq!(pure.eval(c64(0.0, 3.0)).unwrap()[(0, 0)], c64(1.0, 6.0));
        assert!(pure.check_regularity(3).regular);
    }

    #[test]
    fn model_json_roundtrip() {
        let h = |s: Complex64| c64(1.0, 0.0) / (s + c64(1.0, 0.0));
        let ds = siso_rational(&[c64(0.0, 1.0), c64(0.0, 2.0)], &[c64(0.0, 3.0), c64(0.0, 4.0)], h);
        let quad = build_quadruple(&ds).unwrap();
        let (model, _) = reduce(&quad, 1e-10).unwrap();
        let poly = PolyCoefficients::new(
            CMatrix::from_element(1, 1, c64(0.5, 0.0)),
            CMatrix::from_element(1, 1, c64(0.0, 0.0)),
        )
        .unwrap();
        let model = model.with_poly(Some(poly)).unwrap();
        let mut buf = Vec::new();
        model.write_json(&mut buf).unwrap();
        let back = DescriptorRealization::read_json(&buf[..]).unwrap();
        assert_eq!(back, model);
    }
}
