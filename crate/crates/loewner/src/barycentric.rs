//! Implicit fitting of non-proper SISO transfer functions in a modified
//! barycentric form, with the linear polynomial part recovered afterwards.
//!
//! The model is
//!
//! ```text
//!            b + Σ_i w_i h_i / (s − z_i)
//! Ĥ_mod(s) = ----------------------------
//!                Σ_i w_i / (s − z_i)
//! ```
//!
//! which interpolates every node (z_i, h_i) by structure and grows linearly
//! at infinity thanks to the free numerator term b. Requiring Ĥ_mod to also
//! match left samples (s_j, g_j) is a homogeneous linear condition on
//! a = (w_1..w_k, b): the null space of an augmented Loewner matrix. All
//! unknowns are therefore found in one SVD, with no separate high-frequency
//! estimation pass.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::data::{pair, partition, unpair, FrequencySample, GridSpec, PartitionConfig};
use crate::error::{Error, Result};
use crate::linalg::{c64, thin_svd, vcat, CMatrix, CVector};
use crate::pencil::DescriptorRealization;
use crate::poly::PolyCoefficients;

/// Modified barycentric rational model with free numerator term.
#[derive(Debug, Clone, PartialEq)]
pub struct BarycentricModel {
    pub nodes: Vec<Complex64>,
    pub node_values: Vec<Complex64>,
    pub weights: Vec<Complex64>,
    pub free_term: Complex64,
}

impl BarycentricModel {
    pub fn new(
        nodes: Vec<Complex64>,
        node_values: Vec<Complex64>,
        weights: Vec<Complex64>,
        free_term: Complex64,
    ) -> Result<Self> {
        let k = nodes.len();
        if k == 0 {
            return Err(Error::Config("barycentric model needs at least one node".into()));
        }
        if node_values.len() != k || weights.len() != k {
            return Err(Error::shape(
                "barycentric vectors",
                k,
                format!("{}/{}", node_values.len(), weights.len()),
            ));
        }
        for i in 0..k {
            for j in i + 1..k {
                if nodes[i] == nodes[j] {
                    return Err(Error::DuplicatePoint {
                        point: nodes[i],
                        first: i,
                        second: j,
                    });
                }
            }
        }
        if weights.iter().all(|w| w.norm() == 0.0) {
            return Err(Error::Degenerate("all barycentric weights are zero".into()));
        }
        Ok(BarycentricModel {
            nodes,
            node_values,
            weights,
            free_term,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Denominator D(s) = Σ w_i/(s − z_i); infinite at nodes.
    fn denominator(&self, s: Complex64) -> Complex64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&z, &w)| w / (s - z))
            .sum()
    }

    /// Evaluate Ĥ_mod(s); at a node the interpolation limit h_i is returned
    /// exactly.
    ///
    /// # Errors
    /// A vanishing denominator off the nodes (a spurious pole crossing)
    /// raises [`Error::EvalSingular`].
    pub fn eval(&self, s: Complex64) -> Result<Complex64> {
        if let Some(i) = self.nodes.iter().position(|&z| z == s) {
            return Ok(self.node_values[i]);
        }
        let mut num = self.free_term;
        let mut den = c64(0.0, 0.0);
        for i in 0..self.len() {
            let phi = self.weights[i] / (s - self.nodes[i]);
            num += phi * self.node_values[i];
            den += phi;
        }
        if den.norm() == 0.0 {
            return Err(Error::EvalSingular { at: s });
        }
        Ok(num / den)
    }

    /// Linear polynomial part of the model from its Laurent expansion at
    /// infinity: with W0 = Σw_i, W1 = Σw_i z_i, N0 = Σw_i h_i,
    ///
    /// ```text
    /// P̂1 = b / W0,   P̂0 = N0/W0 − b·W1/W0²
    /// ```
    ///
    /// (for b = 0 this is the classical ratio N0/W0). Returned as 1×1
    /// coefficient matrices.
    ///
    /// # Errors
    /// W0 numerically zero means the model grows faster than linearly at
    /// infinity and has no linear polynomial part: [`Error::ImproperModel`].
    pub fn recover_poly_terms(&self) -> Result<PolyCoefficients> {
        let w0: Complex64 = self.weights.iter().sum();
        let w_scale: f64 = self.weights.iter().map(|w| w.norm()).sum();
        if w0.norm() <= 1e-14 * w_scale {
            return Err(Error::ImproperModel);
        }
        let w1: Complex64 = self.weights.iter().zip(&self.nodes).map(|(&w, &z)| w * z).sum();
        let n0: Complex64 = self
            .weights
            .iter()
            .zip(&self.node_values)
            .map(|(&w, &h)| w * h)
            .sum();
        let p1 = self.free_term / w0;
        let p0 = n0 / w0 - self.free_term * w1 / (w0 * w0);
        PolyCoefficients::new(
            CMatrix::from_element(1, 1, p0),
            CMatrix::from_element(1, 1, p1),
        )
    }

    /// Equivalent descriptor realization of size k+1.
    ///
    /// States are x_i = u/(D(s)(s − z_i)) plus v = u/D(s); the rows
    /// s·x_i = z_i x_i + v are differential, the row Σw_i x_i = u is the
    /// algebraic constraint (zero row of E), and y = Σw_i h_i x_i + b·v.
    /// The linear growth at infinity lives inside the singular pencil, so
    /// no explicit polynomial block is attached.
    pub fn to_descriptor(&self) -> Result<DescriptorRealization> {
        let k = self.len();
        let n = k + 1;
        let mut e = CMatrix::zeros(n, n);
        let mut a = CMatrix::zeros(n, n);
        for i in 0..k {
            e[(i, i)] = c64(1.0, 0.0);
            a[(i, i)] = self.nodes[i];
            a[(i, k)] = c64(1.0, 0.0);
            a[(k, i)] = self.weights[i];
        }
        let mut b = CMatrix::zeros(n, 1);
        b[(k, 0)] = c64(-1.0, 0.0);
        let mut c = CMatrix::zeros(1, n);
        for i in 0..k {
            c[(0, i)] = self.weights[i] * self.node_values[i];
        }
        c[(0, k)] = self.free_term;
        DescriptorRealization::new(e, a, b, c, None)
    }

    pub fn write_json<W: Write>(&self, writer: &mut W) -> Result<()> {
        let json = BaryJson {
            nodes: self.nodes.iter().map(|&z| pair(z)).collect(),
            values: self.node_values.iter().map(|&z| pair(z)).collect(),
            weights: self.weights.iter().map(|&z| pair(z)).collect(),
            b: pair(self.free_term),
        };
        serde_json::to_writer_pretty(writer, &json)?;
        Ok(())
    }

    pub fn read_json<R: Read>(reader: R) -> Result<Self> {
        let json: BaryJson = serde_json::from_reader(reader)?;
        BarycentricModel::new(
            json.nodes.into_iter().map(unpair).collect(),
            json.values.into_iter().map(unpair).collect(),
            json.weights.into_iter().map(unpair).collect(),
            unpair(json.b),
        )
    }
}

#[derive(Serialize, Deserialize)]
struct BaryJson {
    nodes: Vec<[f64; 2]>,
    values: Vec<[f64; 2]>,
    weights: Vec<[f64; 2]>,
    b: [f64; 2],
}

/// The q×(k+1) matrix of interpolation conditions 𝕃̃a = 0 together with the
/// data that built it.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedLoewner {
    /// `[ (g_j − h_i)/(s_j − z_i) | −1 ]`
    pub matrix: CMatrix,
    pub left_points: Vec<Complex64>,
    pub left_values: Vec<Complex64>,
    pub nodes: Vec<Complex64>,
    pub node_values: Vec<Complex64>,
}

/// Assemble the augmented Loewner matrix from nodes (z_i, h_i) and left
/// samples (s_j, g_j). Fewer than k+1 left rows leave a generically
/// nontrivial null space, which [`solve_null_vector`] handles but cannot
/// attribute to the data.
pub fn build_augmented(
    nodes: &[Complex64],
    node_values: &[Complex64],
    left_points: &[Complex64],
    left_values: &[Complex64],
) -> Result<AugmentedLoewner> {
    let k = nodes.len();
    let q = left_points.len();
    if node_values.len() != k {
        return Err(Error::shape("node values", k, node_values.len()));
    }
    if left_values.len() != q {
        return Err(Error::shape("left values", q, left_values.len()));
    }
    if k == 0 || q == 0 {
        return Err(Error::Config(format!(
            "augmented Loewner matrix needs nodes and left points, got k={k} q={q}"
        )));
    }
    for i in 0..k {
        for j in i + 1..k {
            if nodes[i] == nodes[j] {
                return Err(Error::DuplicatePoint {
                    point: nodes[i],
                    first: i,
                    second: j,
                });
            }
        }
    }
    for (j, &s) in left_points.iter().enumerate() {
        if let Some(i) = nodes.iter().position(|&z| z == s) {
            return Err(Error::PointCollision {
                left_index: j,
                right_index: i,
                point: s,
            });
        }
    }
    let mut matrix = CMatrix::zeros(q, k + 1);
    for j in 0..q {
        for i in 0..k {
            matrix[(j, i)] = (left_values[j] - node_values[i]) / (left_points[j] - nodes[i]);
        }
        matrix[(j, k)] = c64(-1.0, 0.0);
    }
    Ok(AugmentedLoewner {
        matrix,
        left_points: left_points.to_vec(),
        left_values: left_values.to_vec(),
        nodes: nodes.to_vec(),
        node_values: node_values.to_vec(),
    })
}

/// The coefficient vector a = (w_1..w_k, b) and the SVD evidence behind it.
#[derive(Debug, Clone)]
pub struct NullVector {
    pub weights: Vec<Complex64>,
    pub free_term: Complex64,
    pub sigma_min: f64,
    pub sigma_max: f64,
    /// σ_min ≤ τ·σ_max: the data is (numerically) exactly representable.
    pub has_approximate_null: bool,
    /// ‖𝕃̃a‖₂ against the unpadded matrix.
    pub residual: f64,
}

/// Smallest-singular-vector solve of 𝕃̃a = 0.
///
/// The returned a is always the right singular vector of the smallest
/// singular value, normalized to ‖a‖ = 1 with the largest entry made real
/// positive; τ only classifies whether that smallest value counts as an
/// approximate null (σ_min ≤ τ·σ_max), reported in the result. Wide
/// matrices (q < k+1) are zero-padded to square so the full right basis is
/// available.
pub fn solve_null_vector(aug: &AugmentedLoewner, tol: f64) -> Result<NullVector> {
    let cols = aug.matrix.ncols();
    let q = aug.matrix.nrows();
    if q == 0 || cols == 0 {
        return Err(Error::Degenerate("augmented matrix is empty".into()));
    }
    if aug.matrix.iter().all(|z| z.norm() == 0.0) {
        return Err(Error::Degenerate("augmented matrix is identically zero".into()));
    }
    let work = if q < cols {
        vcat(&aug.matrix, &CMatrix::zeros(cols - q, cols))
    } else {
        aug.matrix.clone()
    };
    let svd = thin_svd(&work)?;
    let sigma_max = svd.sigma[0];
    let last = svd.sigma.len() - 1;
    let sigma_min = svd.sigma[last];
    let mut a: CVector = svd.v.column(last).into_owned();
    a /= c64(a.norm(), 0.0);
    let mut best = 0;
    for (i, z) in a.iter().enumerate() {
        if z.norm() > a[best].norm() {
            best = i;
        }
    }
    let lead = a[best];
    a *= lead.conj() / c64(lead.norm(), 0.0);
    let residual = (&aug.matrix * &a).norm();
    Ok(NullVector {
        weights: a.iter().take(cols - 1).copied().collect(),
        free_term: a[cols - 1],
        sigma_min,
        sigma_max,
        has_approximate_null: sigma_min <= tol * sigma_max,
        residual,
    })
}

/// Intervals (σ_lo, σ_hi) on the real axis where Re D(σ) changes sign with
/// no node in between, i.e. where the denominator crosses zero and the
/// model has a real pole. Both the positive and the mirrored negative band
/// are scanned with `points` samples each. Meaningful mainly for
/// conjugate-symmetric models, whose D is real on the real axis.
pub fn scan_spurious_real_poles(
    model: &BarycentricModel,
    omega_lo: f64,
    omega_hi: f64,
    points: usize,
) -> Vec<(f64, f64)> {
    if !(omega_lo > 0.0) || !(omega_hi > omega_lo) || points < 2 {
        return Vec::new();
    }
    let grid = GridSpec::log(omega_lo, omega_hi, points).points();
    let mut hits = Vec::new();
    for side in [1.0, -1.0] {
        let sigmas: Vec<f64> = grid.iter().map(|&w| side * w).collect();
        for pair in sigmas.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            // a real node inside the segment flips Re D legitimately
            let node_inside = model
                .nodes
                .iter()
                .any(|z| z.im == 0.0 && z.re > lo && z.re < hi);
            if node_inside {
                continue;
            }
            let da = model.denominator(c64(a, 0.0)).re;
            let db = model.denominator(c64(b, 0.0)).re;
            if da == 0.0 || db == 0.0 || (da < 0.0) != (db < 0.0) {
                hits.push((lo, hi));
            }
        }
    }
    hits
}

/// A fitted barycentric model plus everything worth reporting about it.
#[derive(Debug, Clone)]
pub struct PolyAaFit {
    pub model: BarycentricModel,
    /// Linear polynomial part recovered from the model.
    pub poly: PolyCoefficients,
    /// SVD evidence from the null-vector solve.
    pub diagnostics: NullVector,
    /// max_j |Ĥ_mod(s_j) − g_j| over the left samples.
    pub achieved_residual: f64,
    /// Real-axis denominator sign changes inside the data band. A genuine
    /// real pole of the underlying system shows up here too; the scan
    /// reports, it does not judge.
    pub spurious_pole_intervals: Vec<(f64, f64)>,
}

/// Fit a SISO barycentric model: the partition's right-type points become
/// nodes, left-type points the interpolation conditions, and one SVD
/// determines weights and free term.
///
/// Needs at least 1 node and 2 left points after splitting (q ≥ k+1 for a
/// data-driven null space). MIMO data goes through
/// [`fit_poly_aa_channels`] instead.
pub fn fit_poly_aa(
    samples: &[FrequencySample],
    config: &PartitionConfig,
    tol: f64,
) -> Result<PolyAaFit> {
    if samples.iter().any(|s| s.outputs() != 1 || s.inputs() != 1) {
        return Err(Error::Config(
            "barycentric fitting is scalar; fit MIMO data per channel".into(),
        ));
    }
    let dataset = partition(samples, config)?;
    let k = dataset.right_len();
    let q = dataset.left_len();
    if k < 1 || q < 2 {
        return Err(Error::Config(format!(
            "barycentric fit needs at least 1 node and 2 left points, got k={k} q={q}"
        )));
    }
    let nodes = dataset.right_points().to_vec();
    let node_values: Vec<Complex64> = (0..k).map(|i| dataset.right_responses()[(0, i)]).collect();
    let left_points = dataset.left_points().to_vec();
    let left_values: Vec<Complex64> = (0..q).map(|j| dataset.left_responses()[(j, 0)]).collect();

    let aug = build_augmented(&nodes, &node_values, &left_points, &left_values)?;
    let null = solve_null_vector(&aug, tol)?;
    let model = BarycentricModel::new(nodes, node_values, null.weights.clone(), null.free_term)?;
    let poly = model.recover_poly_terms()?;

    let mut achieved: f64 = 0.0;
    for (j, &s) in left_points.iter().enumerate() {
        achieved = achieved.max((model.eval(s)? - left_values[j]).norm());
    }
    let band: Vec<f64> = samples
        .iter()
        .map(|s| s.point.im.abs())
        .filter(|&w| w > 0.0)
        .collect();
    let spurious = match (
        band.iter().cloned().reduce(f64::min),
        band.iter().cloned().reduce(f64::max),
    ) {
        (Some(lo), Some(hi)) if hi > lo => scan_spurious_real_poles(&model, lo, hi, 128),
        _ => Vec::new(),
    };
    Ok(PolyAaFit {
        model,
        poly,
        diagnostics: null,
        achieved_residual: achieved,
        spurious_pole_intervals: spurious,
    })
}

/// Entrywise barycentric fits of p×m data: result[r][c] models channel
/// (r, c). Channel fits always use scalar unit directions; the partition
/// scheme and conjugate closure carry over.
pub fn fit_poly_aa_channels(
    samples: &[FrequencySample],
    config: &PartitionConfig,
    tol: f64,
) -> Result<Vec<Vec<PolyAaFit>>> {
    let (p, m) = match samples.first() {
        Some(s) => (s.outputs(), s.inputs()),
        None => return Err(Error::Config("no samples to fit".into())),
    };
    let scalar_config = PartitionConfig {
        scheme: config.scheme.clone(),
        direction_rule: crate::data::DirectionRule::SisoOnes,
        conjugate_closure: config.conjugate_closure,
    };
    let mut rows = Vec::with_capacity(p);
    for r in 0..p {
        let mut cols = Vec::with_capacity(m);
        for c in 0..m {
            let channel: Vec<FrequencySample> = samples
                .iter()
                .map(|s| FrequencySample::siso(s.point, s.value[(r, c)]))
                .collect();
            cols.push(fit_poly_aa(&channel, &scalar_config, tol)?);
        }
        rows.push(cols);
    }
    Ok(rows)
}
