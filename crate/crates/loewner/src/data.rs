//! Frequency-response data: raw samples, left/right tangential partitioning,
//! frequency grids, and the CSV/JSON file formats.
//!
//! Raw measurements arrive as [`FrequencySample`] values (one complex point,
//! one p×m response matrix). Fitting consumes a [`TangentialDataset`]: the
//! samples split into a left set (points μ_j with row directions ℓ_j^T and
//! responses v_j^T = ℓ_j^T H(μ_j)) and a right set (points λ_i with column
//! directions r_i and responses w_i = H(λ_i) r_i). [`partition`] performs the
//! split according to a [`PartitionConfig`].

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Read, Write};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c64, CMatrix, CVector};

/// One evaluation point with its p×m transfer-function value.
///
/// Points usually sit on the imaginary axis (`i·omega` in rad/s) but any
/// complex value is admitted.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencySample {
    pub point: Complex64,
    pub value: CMatrix,
}

impl FrequencySample {
    pub fn new(point: Complex64, value: CMatrix) -> Self {
        FrequencySample { point, value }
    }

    pub fn siso(point: Complex64, value: Complex64) -> Self {
        FrequencySample {
            point,
            value: CMatrix::from_element(1, 1, value),
        }
    }

    /// Output count p.
    pub fn outputs(&self) -> usize {
        self.value.nrows()
    }

    /// Input count m.
    pub fn inputs(&self) -> usize {
        self.value.ncols()
    }
}

fn bits(z: Complex64) -> (u64, u64) {
    (z.re.to_bits(), z.im.to_bits())
}

/// Check that every point has its conjugate in the set with a conjugated
/// value (points compared exactly, values to 1e-10 relative). Real-point
/// samples must carry (numerically) real values.
pub fn is_conjugate_symmetric(samples: &[FrequencySample]) -> bool {
    let index: HashMap<(u64, u64), usize> = samples
        .iter()
        .enumerate()
        .map(|(i, s)| (bits(s.point), i))
        .collect();
    samples.iter().all(|s| {
        let partner = match index.get(&bits(s.point.conj())) {
            Some(&i) => &samples[i],
            None => return false,
        };
        s.value
            .iter()
            .zip(partner.value.iter())
            .all(|(a, b)| (a - b.conj()).norm() <= 1e-10 * (1.0 + a.norm()))
    })
}

// ---------------------------------------------------------------------------
// Frequency grids

/// How grid or window points are spread between the endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Spacing {
    Log,
    Linear,
}

/// A real frequency grid (rad/s); sampling maps each ω to the point i·ω.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub start: f64,
    pub end: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl GridSpec {
    pub fn log(start: f64, end: f64, count: usize) -> Self {
        GridSpec {
            start,
            end,
            count,
            spacing: Spacing::Log,
        }
    }

    pub fn linear(start: f64, end: f64, count: usize) -> Self {
        GridSpec {
            start,
            end,
            count,
            spacing: Spacing::Linear,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::Config("grid needs at least one point".into()));
        }
        if !(self.start.is_finite() && self.end.is_finite()) || self.start > self.end {
            return Err(Error::Config(format!(
                "grid endpoints must be finite with start <= end, got {}:{}",
                self.start, self.end
            )));
        }
        if self.spacing == Spacing::Log && self.start <= 0.0 {
            return Err(Error::Config(
                "log-spaced grid needs a positive start".into(),
            ));
        }
        Ok(())
    }

    /// Grid values, endpoints included.
    pub fn points(&self) -> Vec<f64> {
        let n = self.count;
        if n == 1 {
            return vec![self.start];
        }
        (0..n)
            .map(|t| {
                let frac = t as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Log => self.start * (self.end / self.start).powf(frac),
                    Spacing::Linear => self.start + frac * (self.end - self.start),
                }
            })
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Partitioning

/// How samples are assigned to the left/right sides. Samples are first sorted
/// by |Im point| (ties by real part) so both sides span the frequency range.
#[derive(Debug, Clone, PartialEq)]
pub enum PartitionScheme {
    /// 1st, 3rd, 5th, ... sample to the left side, the rest to the right.
    Alternating,
    /// First half (rounded up) to the left side.
    HalfSplit,
    /// Explicit disjoint index lists into the input sample vector; must
    /// cover it exactly.
    Custom { left: Vec<usize>, right: Vec<usize> },
}

/// How tangential directions are chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum DirectionRule {
    /// Scalar 1 directions; valid for SISO data only.
    SisoOnes,
    /// Cycle through identity columns e_1, e_2, ... per side; reduces to
    /// `SisoOnes` when p = m = 1.
    CyclicIdentity,
    /// Caller-supplied directions, one per final left/right sample
    /// (lengths p and m respectively).
    Given {
        left: Vec<CVector>,
        right: Vec<CVector>,
    },
    /// Unit directions with entries drawn uniformly, reproducible from the
    /// seed.
    RandomUnit { seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionConfig {
    pub scheme: PartitionScheme,
    pub direction_rule: DirectionRule,
    /// Keep each point and its conjugate on the same side (synthesizing the
    /// conjugate sample when absent) with conjugated directions/responses.
    pub conjugate_closure: bool,
}

impl Default for PartitionConfig {
    fn default() -> Self {
        PartitionConfig {
            scheme: PartitionScheme::Alternating,
            direction_rule: DirectionRule::CyclicIdentity,
            conjugate_closure: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

/// Apply a direction to a response matrix: `ℓ^T H` for the left side
/// (length-m result), `H r` for the right side (length-p result).
pub fn tangentialize(h: &CMatrix, direction: &CVector, side: TangentialSide) -> Result<CVector> {
    match side {
        TangentialSide::Left => {
            if direction.len() != h.nrows() {
                return Err(Error::shape("left direction", h.nrows(), direction.len()));
            }
            Ok(h.transpose() * direction)
        }
        TangentialSide::Right => {
            if direction.len() != h.ncols() {
                return Err(Error::shape("right direction", h.ncols(), direction.len()));
            }
            Ok(h * direction)
        }
    }
}

/// Side marker for [`tangentialize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TangentialSide {
    Left,
    Right,
}

fn sort_key(z: Complex64) -> (f64, f64, f64) {
    (z.im.abs(), z.re, -z.im)
}

fn cmp_key(a: Complex64, b: Complex64) -> std::cmp::Ordering {
    let (a0, a1, a2) = sort_key(a);
    let (b0, b1, b2) = sort_key(b);
    a0.total_cmp(&b0)
        .then(a1.total_cmp(&b1))
        .then(a2.total_cmp(&b2))
}

fn identity_column(dim: usize, idx: usize) -> CVector {
    let mut v = CVector::zeros(dim);
    v[idx % dim] = c64(1.0, 0.0);
    v
}

fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> CVector {
    loop {
        let v = CVector::from_fn(dim, |_, _| {
            c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let n = v.norm();
        if n > 1e-3 {
            return v / c64(n, 0.0);
        }
    }
}

/// Split samples into a left/right tangential dataset.
///
/// Samples are sorted by |Im point| and assigned by `config.scheme`; with
/// conjugate closure on, conjugate pairs move as one unit and a missing
/// conjugate partner is synthesized with the conjugated value. Directions
/// follow `config.direction_rule`, the conjugate member of a pair receiving
/// the conjugated direction.
pub fn partition(samples: &[FrequencySample], config: &PartitionConfig) -> Result<TangentialDataset> {
    if samples.len() < 2 {
        return Err(Error::Config(format!(
            "partition needs at least 2 samples, got {}",
            samples.len()
        )));
    }
    let p = samples[0].outputs();
    let m = samples[0].inputs();
    for (i, s) in samples.iter().enumerate() {
        if s.outputs() != p || s.inputs() != m {
            return Err(Error::shape(
                &format!("sample {i}"),
                format!("{p}x{m}"),
                format!("{}x{}", s.outputs(), s.inputs()),
            ));
        }
        if !(s.point.re.is_finite() && s.point.im.is_finite()) {
            return Err(Error::Domain(format!("sample {i} has a non-finite point")));
        }
    }
    let mut seen: HashMap<(u64, u64), usize> = HashMap::new();
    for (i, s) in samples.iter().enumerate() {
        if let Some(&first) = seen.get(&bits(s.point)) {
            return Err(Error::DuplicatePoint {
                point: s.point,
                first,
                second: i,
            });
        }
        seen.insert(bits(s.point), i);
    }
    if config.direction_rule == DirectionRule::SisoOnes && (p, m) != (1, 1) {
        return Err(Error::Config(format!(
            "siso_ones directions require SISO data, got {p}x{m}"
        )));
    }

    // Working set: input samples plus synthesized conjugates under closure.
    // `origin[i]` maps a working sample back to the input index it came from.
    let mut work: Vec<FrequencySample> = samples.to_vec();
    let mut origin: Vec<usize> = (0..samples.len()).collect();
    if config.conjugate_closure {
        for idx in 0..samples.len() {
            let s = &samples[idx];
            if s.point.im != 0.0 && !seen.contains_key(&bits(s.point.conj())) {
                work.push(FrequencySample::new(
                    s.point.conj(),
                    s.value.map(|z| z.conj()),
                ));
                origin.push(idx);
            }
        }
    }

    let mut order: Vec<usize> = (0..work.len()).collect();
    order.sort_by(|&a, &b| cmp_key(work[a].point, work[b].point));

    // Units move to one side as a whole: conjugate pairs under closure,
    // single samples otherwise. Representative (sort-first member) first.
    let units: Vec<Vec<usize>> = if config.conjugate_closure {
        let windex: HashMap<(u64, u64), usize> =
            work.iter().enumerate().map(|(i, s)| (bits(s.point), i)).collect();
        let mut visited = vec![false; work.len()];
        let mut units = Vec::new();
        for &i in &order {
            if visited[i] {
                continue;
            }
            visited[i] = true;
            let mut unit = vec![i];
            let conj_bits = bits(work[i].point.conj());
            if work[i].point.im != 0.0 {
                if let Some(&j) = windex.get(&conj_bits) {
                    if j != i && !visited[j] {
                        visited[j] = true;
                        unit.push(j);
                    }
                }
            }
            units.push(unit);
        }
        units
    } else {
        order.iter().map(|&i| vec![i]).collect()
    };

    // Assign each unit to a side.
    let unit_sides: Vec<Side> = match &config.scheme {
        PartitionScheme::Alternating => (0..units.len())
            .map(|t| if t % 2 == 0 { Side::Left } else { Side::Right })
            .collect(),
        PartitionScheme::HalfSplit => {
            let cut = units.len().div_ceil(2);
            (0..units.len())
                .map(|t| if t < cut { Side::Left } else { Side::Right })
                .collect()
        }
        PartitionScheme::Custom { left, right } => {
            let n = samples.len();
            let mut side_of_input: Vec<Option<Side>> = vec![None; n];
            for (list, side) in [(left, Side::Left), (right, Side::Right)] {
                for &idx in list {
                    if idx >= n {
                        return Err(Error::Config(format!(
                            "custom partition index {idx} out of range for {n} samples"
                        )));
                    }
                    if side_of_input[idx].is_some() {
                        return Err(Error::Config(format!(
                            "custom partition assigns sample {idx} twice"
                        )));
                    }
                    side_of_input[idx] = Some(side);
                }
            }
            if let Some(miss) = side_of_input.iter().position(|s| s.is_none()) {
                return Err(Error::Config(format!(
                    "custom partition leaves sample {miss} unassigned"
                )));
            }
            let mut sides = Vec::with_capacity(units.len());
            for unit in &units {
                let first = side_of_input[origin[unit[0]]].unwrap();
                for &member in unit {
                    if side_of_input[origin[member]] != Some(first) {
                        return Err(Error::Config(
                            "conjugate closure cannot split a conjugate pair across sides".into(),
                        ));
                    }
                }
                sides.push(first);
            }
            sides
        }
    };

    let left_units: Vec<usize> = (0..units.len()).filter(|&t| unit_sides[t] == Side::Left).collect();
    let right_units: Vec<usize> = (0..units.len()).filter(|&t| unit_sides[t] == Side::Right).collect();
    // A single conjugate-pair unit may legally fill one side only; with two
    // or more assignable units each side must receive at least one sample.
    if units.len() >= 2 && (left_units.is_empty() || right_units.is_empty()) {
        return Err(Error::Config(
            "partition left a side empty; each side needs at least 1 sample".into(),
        ));
    }

    // Directions per unit (conjugate member gets the conjugated direction);
    // DirectionRule::Given is indexed per final sample instead.
    let mut rng = match config.direction_rule {
        DirectionRule::RandomUnit { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut build_side = |unit_list: &[usize], side: Side| -> Result<(Vec<Complex64>, CMatrix, CMatrix)> {
        let dim = if side == Side::Left { p } else { m };
        let mut points = Vec::new();
        let mut directions: Vec<CVector> = Vec::new();
        for (u_pos, &u) in unit_list.iter().enumerate() {
            let base = match &config.direction_rule {
                DirectionRule::SisoOnes => CVector::from_element(1, c64(1.0, 0.0)),
                DirectionRule::CyclicIdentity => identity_column(dim, u_pos),
                DirectionRule::RandomUnit { .. } => random_unit(rng.as_mut().unwrap(), dim),
                DirectionRule::Given { .. } => CVector::zeros(dim), // replaced below
            };
            for (member_pos, &member) in units[u].iter().enumerate() {
                points.push(work[member].point);
                directions.push(if member_pos == 0 { base.clone() } else { base.map(|z| z.conj()) });
            }
        }
        if let DirectionRule::Given { left, right } = &config.direction_rule {
            let given = if side == Side::Left { left } else { right };
            if given.len() != points.len() {
                return Err(Error::shape(
                    if side == Side::Left { "given left directions" } else { "given right directions" },
                    points.len(),
                    given.len(),
                ));
            }
            for (slot, d) in directions.iter_mut().zip(given) {
                if d.len() != dim {
                    return Err(Error::shape("given direction length", dim, d.len()));
                }
                *slot = d.clone();
            }
        }
        // Responses: v_j^T = ℓ_j^T H(μ_j) rows (left), w_i = H(λ_i) r_i columns (right).
        let count = points.len();
        let (dir_mat, resp_mat) = match side {
            Side::Left => {
                let mut dirs = CMatrix::zeros(count, p);
                let mut resp = CMatrix::zeros(count, m);
                for (j, d) in directions.iter().enumerate() {
                    dirs.row_mut(j).copy_from(&d.transpose());
                    let sample = find_work(&work, points[j]);
                    let v = tangentialize(&sample.value, d, TangentialSide::Left)?;
                    resp.row_mut(j).copy_from(&v.transpose());
                }
                (dirs, resp)
            }
            Side::Right => {
                let mut dirs = CMatrix::zeros(m, count);
                let mut resp = CMatrix::zeros(p, count);
                for (i, d) in directions.iter().enumerate() {
                    dirs.column_mut(i).copy_from(d);
                    let sample = find_work(&work, points[i]);
                    let w = tangentialize(&sample.value, d, TangentialSide::Right)?;
                    resp.column_mut(i).copy_from(&w);
                }
                (dirs, resp)
            }
        };
        Ok((points, dir_mat, resp_mat))
    };

    let (lp, ld, lr) = build_side(&left_units, Side::Left)?;
    let (rp, rd, rr) = build_side(&right_units, Side::Right)?;
    TangentialDataset::new(lp, ld, lr, rp, rd, rr)
}

fn find_work(work: &[FrequencySample], point: Complex64) -> &FrequencySample {
    work.iter()
        .find(|s| bits(s.point) == bits(point))
        .expect("partition bookkeeping kept every point")
}

// ---------------------------------------------------------------------------
// Tangential dataset

/// Left/right tangential interpolation data.
///
/// Shapes: left side q points, directions q×p (rows ℓ_j^T), responses q×m
/// (rows v_j^T); right side k points, directions m×k (columns r_i),
/// responses p×k (columns w_i). Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentialDataset {
    left_points: Vec<Complex64>,
    left_directions: CMatrix,
    left_responses: CMatrix,
    right_points: Vec<Complex64>,
    right_directions: CMatrix,
    right_responses: CMatrix,
}

impl TangentialDataset {
    pub fn new(
        left_points: Vec<Complex64>,
        left_directions: CMatrix,
        left_responses: CMatrix,
        right_points: Vec<Complex64>,
        right_directions: CMatrix,
        right_responses: CMatrix,
    ) -> Result<Self> {
        let q = left_points.len();
        let k = right_points.len();
        if left_directions.nrows() != q || left_responses.nrows() != q {
            return Err(Error::shape(
                "left rows",
                q,
                format!("{}/{}", left_directions.nrows(), left_responses.nrows()),
            ));
        }
        if right_directions.ncols() != k || right_responses.ncols() != k {
            return Err(Error::shape(
                "right columns",
                k,
                format!("{}/{}", right_directions.ncols(), right_responses.ncols()),
            ));
        }
        if q > 0 && k > 0 {
            if left_directions.ncols() != right_responses.nrows() {
                return Err(Error::shape(
                    "output dimension p",
                    left_directions.ncols(),
                    right_responses.nrows(),
                ));
            }
            if left_responses.ncols() != right_directions.nrows() {
                return Err(Error::shape(
                    "input dimension m",
                    left_responses.ncols(),
                    right_directions.nrows(),
                ));
            }
        }
        for (j, row) in left_directions.row_iter().enumerate() {
            if row.norm() == 0.0 {
                return Err(Error::Config(format!("left direction {j} is zero")));
            }
        }
        for (i, col) in right_directions.column_iter().enumerate() {
            if col.norm() == 0.0 {
                return Err(Error::Config(format!("right direction {i} is zero")));
            }
        }
        for (j, &mu) in left_points.iter().enumerate() {
            for (i, &la) in right_points.iter().enumerate() {
                if mu == la {
                    return Err(Error::PointCollision {
                        left_index: j,
                        right_index: i,
                        point: mu,
                    });
                }
            }
        }
        Ok(TangentialDataset {
            left_points,
            left_directions,
            left_responses,
            right_points,
            right_directions,
            right_responses,
        })
    }

    /// SISO dataset from raw (point, H(point)) pairs; all directions 1.
    pub fn siso(left: &[(Complex64, Complex64)], right: &[(Complex64, Complex64)]) -> Result<Self> {
        let q = left.len();
        let k = right.len();
        let ones_q = CMatrix::from_element(q, 1, c64(1.0, 0.0));
        let ones_k = CMatrix::from_element(1, k, c64(1.0, 0.0));
        TangentialDataset::new(
            left.iter().map(|&(s, _)| s).collect(),
            ones_q,
            CMatrix::from_fn(q, 1, |j, _| left[j].1),
            right.iter().map(|&(s, _)| s).collect(),
            ones_k,
            CMatrix::from_fn(1, k, |_, i| right[i].1),
        )
    }

    pub fn left_len(&self) -> usize {
        self.left_points.len()
    }

    pub fn right_len(&self) -> usize {
        self.right_points.len()
    }

    pub fn outputs(&self) -> usize {
        self.left_directions.ncols()
    }

    pub fn inputs(&self) -> usize {
        self.right_directions.nrows()
    }

    pub fn is_siso(&self) -> bool {
        self.outputs() == 1 && self.inputs() == 1
    }

    pub fn left_points(&self) -> &[Complex64] {
        &self.left_points
    }

    pub fn right_points(&self) -> &[Complex64] {
        &self.right_points
    }

    pub fn left_directions(&self) -> &CMatrix {
        &self.left_directions
    }

    pub fn left_responses(&self) -> &CMatrix {
        &self.left_responses
    }

    pub fn right_directions(&self) -> &CMatrix {
        &self.right_directions
    }

    pub fn right_responses(&self) -> &CMatrix {
        &self.right_responses
    }

    /// Keep the first `left` left samples and `right` right samples,
    /// directions and responses included. Squares up auxiliary datasets
    /// whose split came out uneven.
    pub fn truncate(&self, left: usize, right: usize) -> Result<TangentialDataset> {
        if left > self.left_len() || right > self.right_len() {
            return Err(Error::shape(
                "dataset truncation",
                format!("at most {}x{}", self.left_len(), self.right_len()),
                format!("{left}x{right}"),
            ));
        }
        TangentialDataset::new(
            self.left_points[..left].to_vec(),
            self.left_directions.rows(0, left).into_owned(),
            self.left_responses.rows(0, left).into_owned(),
            self.right_points[..right].to_vec(),
            self.right_directions.columns(0, right).into_owned(),
            self.right_responses.columns(0, right).into_owned(),
        )
    }

    /// diag(μ_1..μ_q)
    pub fn left_diag(&self) -> CMatrix {
        CMatrix::from_fn(self.left_len(), self.left_len(), |r, c| {
            if r == c { self.left_points[r] } else { c64(0.0, 0.0) }
        })
    }

    /// diag(λ_1..λ_k)
    pub fn right_diag(&self) -> CMatrix {
        CMatrix::from_fn(self.right_len(), self.right_len(), |r, c| {
            if r == c { self.right_points[r] } else { c64(0.0, 0.0) }
        })
    }

    /// Reorder the right data columns; used to check that fitting is
    /// insensitive to right-sample order.
    pub fn permute_right(&self, perm: &[usize]) -> Result<Self> {
        let k = self.right_len();
        let mut hit = vec![false; k];
        for &i in perm {
            if i >= k || hit[i] {
                return Err(Error::Config("invalid right permutation".into()));
            }
            hit[i] = true;
        }
        if perm.len() != k {
            return Err(Error::shape("permutation length", k, perm.len()));
        }
        TangentialDataset::new(
            self.left_points.clone(),
            self.left_directions.clone(),
            self.left_responses.clone(),
            perm.iter().map(|&i| self.right_points[i]).collect(),
            CMatrix::from_fn(self.inputs(), k, |r, c| self.right_directions[(r, perm[c])]),
            CMatrix::from_fn(self.outputs(), k, |r, c| self.right_responses[(r, perm[c])]),
        )
    }
}

// ---------------------------------------------------------------------------
// Sample file formats

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleFormat {
    /// SISO rows `omega,re,im`: point = i·omega, H = re + i·im.
    Csv,
    /// General p×m format with explicit complex points.
    Json,
}

#[derive(Serialize, Deserialize)]
struct SampleFileJson {
    p: usize,
    m: usize,
    samples: Vec<SampleJson>,
}

#[derive(Serialize, Deserialize)]
struct SampleJson {
    point: [f64; 2],
    value_re: Vec<Vec<f64>>,
    value_im: Vec<Vec<f64>>,
}

const CSV_HEADER: &str = "omega,re,im";

/// Read samples from a byte stream in the given format.
///
/// # Errors
/// Malformed rows, inconsistent dimensions, and duplicate points are
/// rejected, naming the offending record.
pub fn load_samples<R: Read>(reader: R, format: SampleFormat) -> Result<Vec<FrequencySample>> {
    match format {
        SampleFormat::Csv => load_csv(reader),
        SampleFormat::Json => load_json(reader),
    }
}

fn parse_field(field: &str, line: usize, what: &str) -> Result<f64> {
    let v: f64 = field.trim().parse().map_err(|_| Error::Parse {
        record: format!("line {line}"),
        msg: format!("cannot parse {what} from {field:?}"),
    })?;
    if !v.is_finite() {
        return Err(Error::Parse {
            record: format!("line {line}"),
            msg: format!("{what} must be finite"),
        });
    }
    Ok(v)
}

fn load_csv<R: Read>(reader: R) -> Result<Vec<FrequencySample>> {
    let mut samples = Vec::new();
    let mut seen: HashMap<(u64, u64), usize> = HashMap::new();
    let mut header_done = false;
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if !header_done {
            if !line.eq_ignore_ascii_case(CSV_HEADER) {
                return Err(Error::Parse {
                    record: format!("line {lineno}"),
                    msg: format!("expected header {CSV_HEADER:?}, got {line:?}"),
                });
            }
            header_done = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                record: format!("line {lineno}"),
                msg: format!("expected 3 fields, got {}", fields.len()),
            });
        }
        let omega = parse_field(fields[0], lineno, "omega")?;
        let re = parse_field(fields[1], lineno, "re")?;
        let im = parse_field(fields[2], lineno, "im")?;
        let point = c64(0.0, omega);
        if let Some(&first) = seen.get(&bits(point)) {
            return Err(Error::DuplicatePoint {
                point,
                first,
                second: lineno,
            });
        }
        seen.insert(bits(point), lineno);
        samples.push(FrequencySample::siso(point, c64(re, im)));
    }
    Ok(samples)
}

fn load_json<R: Read>(reader: R) -> Result<Vec<FrequencySample>> {
    let file: SampleFileJson = serde_json::from_reader(reader)?;
    if file.p == 0 || file.m == 0 {
        return Err(Error::Parse {
            record: "header".into(),
            msg: format!("dimensions must be positive, got p={} m={}", file.p, file.m),
        });
    }
    let mut samples = Vec::with_capacity(file.samples.len());
    let mut seen: HashMap<(u64, u64), usize> = HashMap::new();
    for (idx, s) in file.samples.iter().enumerate() {
        let point = c64(s.point[0], s.point[1]);
        if !(point.re.is_finite() && point.im.is_finite()) {
            return Err(Error::Parse {
                record: format!("sample {idx}"),
                msg: "point must be finite".into(),
            });
        }
        let check = |grid: &Vec<Vec<f64>>, name: &str| -> Result<()> {
            if grid.len() != file.p || grid.iter().any(|row| row.len() != file.m) {
                return Err(Error::Parse {
                    record: format!("sample {idx}"),
                    msg: format!("{name} is not {}x{}", file.p, file.m),
                });
            }
            Ok(())
        };
        check(&s.value_re, "value_re")?;
        check(&s.value_im, "value_im")?;
        if let Some(&first) = seen.get(&bits(point)) {
            return Err(Error::DuplicatePoint {
                point,
                first,
                second: idx,
            });
        }
        seen.insert(bits(point), idx);
        let value = CMatrix::from_fn(file.p, file.m, |r, c| {
            c64(s.value_re[r][c], s.value_im[r][c])
        });
        samples.push(FrequencySample::new(point, value));
    }
    Ok(samples)
}

/// Write samples in the given format; the CSV form only represents SISO data
/// with purely imaginary points.
pub fn save_samples<W: Write>(
    writer: &mut W,
    samples: &[FrequencySample],
    format: SampleFormat,
) -> Result<()> {
    match format {
        SampleFormat::Csv => {
            writeln!(writer, "{CSV_HEADER}")?;
            for s in samples {
                if s.outputs() != 1 || s.inputs() != 1 {
                    return Err(Error::Config("CSV sample files are SISO only".into()));
                }
                if s.point.re != 0.0 {
                    return Err(Error::Config(
                        "CSV sample files store imaginary-axis points only".into(),
                    ));
                }
                let v = s.value[(0, 0)];
                writeln!(writer, "{},{},{}", s.point.im, v.re, v.im)?;
            }
            Ok(())
        }
        SampleFormat::Json => {
            let (p, m) = samples
                .first()
                .map(|s| (s.outputs(), s.inputs()))
                .unwrap_or((1, 1));
            let file = SampleFileJson {
                p,
                m,
                samples: samples
                    .iter()
                    .map(|s| SampleJson {
                        point: [s.point.re, s.point.im],
                        value_re: (0..p)
                            .map(|r| (0..m).map(|c| s.value[(r, c)].re).collect())
                            .collect(),
                        value_im: (0..p)
                            .map(|r| (0..m).map(|c| s.value[(r, c)].im).collect())
                            .collect(),
                    })
                    .collect(),
            };
            serde_json::to_writer_pretty(writer, &file)?;
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// Shared complex-matrix JSON encoding (model files)

/// Row-major matrix block of `[re, im]` pairs used by the model file format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let mut data = Vec::with_capacity(m.nrows() * m.ncols());
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                let z = m[(r, c)];
                data.push([z.re, z.im]);
            }
        }
        MatrixJson {
            rows: m.nrows(),
            cols: m.ncols(),
            data,
        }
    }

    pub fn to_matrix(&self, context: &str) -> Result<CMatrix> {
        if self.data.len() != self.rows * self.cols {
            return Err(Error::Parse {
                record: context.to_string(),
                msg: format!(
                    "matrix block claims {}x{} but holds {} entries",
                    self.rows,
                    self.cols,
                    self.data.len()
                ),
            });
        }
        Ok(CMatrix::from_fn(self.rows, self.cols, |r, c| {
            let [re, im] = self.data[r * self.cols + c];
            c64(re, im)
        }))
    }
}

pub(crate) fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

pub(crate) fn unpair(p: [f64; 2]) -> Complex64 {
    c64(p[0], p[1])
}
