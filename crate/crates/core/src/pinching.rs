//! Sectional and Ricci curvature extrema, and classification of a curvature
//! tensor against the pinching hypotheses used by the vanishing theorems.
//!
//! `α` is always the computed `sec_min` and `β` the computed `-sec_max`; the
//! verdicts are never taken from user-supplied constants.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curvature::CurvatureTensor;
use crate::error::{Error, Result};
use crate::linalg::{dot, orthonormalize, sym_eigen, unit, SymMatrix};
use crate::weitzenboeck::second_kind_matrix;

pub const DEFAULT_RESTARTS: usize = 64;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_SEED: u64 = 0x5ec7_0a11;
/// `x < y` is decided as `x <= y - STRICT_MARGIN`, `x <= y` as `x <= y + STRICT_MARGIN`.
pub const STRICT_MARGIN: f64 = 1e-9;

const MAX_ITERATIONS: usize = 20_000;
const ARMIJO: f64 = 1e-4;

/// Orthonormal 2-frame `[x, y]`.
pub type Plane = [Vec<f64>; 2];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SecExtrema {
    pub min: f64,
    pub max: f64,
    pub argmin: Plane,
    pub argmax: Plane,
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub restarts: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { restarts: DEFAULT_RESTARTS, tol: DEFAULT_TOL, seed: DEFAULT_SEED }
    }
}

impl SearchOptions {
    pub fn with_restarts(restarts: usize) -> Self {
        Self { restarts, ..Self::default() }
    }
}

/// Extrema of the sectional curvature over all 2-planes.
///
/// Every coordinate plane and `restarts` random frames seed a projected
/// gradient descent (and ascent) on orthonormal frames. The result is the best
/// local optimum found, ties going to the earliest seed.
pub fn sec_extrema(r: &CurvatureTensor, opts: SearchOptions) -> Result<SecExtrema> {
    if opts.restarts == 0 {
        return Err(Error::InvalidInput("restart budget must be at least 1".into()));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {}", opts.tol)));
    }
    let n = r.n();
    let mut seeds: Vec<Plane> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            seeds.push([unit(n, i), unit(n, j)]);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    while seeds.len() < n * (n - 1) / 2 + opts.restarts {
        let mut frame: Vec<Vec<f64>> = (0..2)
            .map(|_| (0..n).map(|_| StandardNormal.sample(&mut rng)).collect())
            .collect();
        if orthonormalize(&mut frame) {
            let y = frame.pop().unwrap();
            let x = frame.pop().unwrap();
            seeds.push([x, y]);
        }
    }

    let runs: Vec<((f64, Plane), (f64, Plane))> = seeds
        .par_iter()
        .map(|[x, y]| {
            let lo = descend(r, x, y, 1.0, opts.tol);
            let hi = descend(r, x, y, -1.0, opts.tol);
            (lo, hi)
        })
        .collect();

    let mut best_min = runs[0].0.clone();
    let mut best_max = runs[0].1.clone();
    for (lo, hi) in runs.into_iter().skip(1) {
        if lo.0 < best_min.0 {
            best_min = lo;
        }
        if hi.0 > best_max.0 {
            best_max = hi;
        }
    }
    Ok(SecExtrema { min: best_min.0, max: best_max.0, argmin: best_min.1, argmax: best_max.1 })
}

/// Projected gradient on orthonormal frames for `sign * sec`, with Armijo
/// backtracking; stops once the accepted step is shorter than `tol`.
fn descend(r: &CurvatureTensor, x0: &[f64], y0: &[f64], sign: f64, tol: f64) -> (f64, Plane) {
    let objective = |x: &[f64], y: &[f64]| sign * r.eval(x, y, x, y);
    let mut x = x0.to_vec();
    let mut y = y0.to_vec();
    let mut f = objective(&x, &y);
    let scale = r.raw().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return (0.0, [x, y]);
    }
    let mut t = 0.25 / scale;

    for _ in 0..MAX_ITERATIONS {
        let mut gx = r.contract_last3(&y, &x, &y);
        let mut gy = r.contract_last3(&x, &y, &x);
        for g in [&mut gx, &mut gy] {
            let (cx, cy) = (dot(g, &x), dot(g, &y));
            for ((gi, xi), yi) in g.iter_mut().zip(&x).zip(&y) {
                *gi = 2.0 * sign * (*gi - cx * xi - cy * yi);
            }
        }
        let gn2 = dot(&gx, &gx) + dot(&gy, &gy);
        let gn = gn2.sqrt();
        if gn <= tol {
            break;
        }
        let mut accepted = None;
        while t * gn >= tol {
            let mut frame = vec![
                x.iter().zip(&gx).map(|(a, g)| a - t * g).collect::<Vec<_>>(),
                y.iter().zip(&gy).map(|(a, g)| a - t * g).collect::<Vec<_>>(),
            ];
            if orthonormalize(&mut frame) {
                let fy = frame.pop().unwrap();
                let fx = frame.pop().unwrap();
                let fnew = objective(&fx, &fy);
                if fnew <= f - ARMIJO * t * gn2 {
                    accepted = Some((fx, fy, fnew, t * gn));
                    break;
                }
            }
            t *= 0.5;
        }
        match accepted {
            Some((fx, fy, fnew, step)) => {
                x = fx;
                y = fy;
                f = fnew;
                t *= 2.0;
                if step < tol {
                    break;
                }
            }
            None => break,
        }
    }
    (sign * f, [x, y])
}

/// Smallest and largest eigenvalues of the Ricci matrix.
pub fn ricci_extrema(r: &CurvatureTensor) -> (f64, f64) {
    let ric = SymMatrix::symmetrized(&r.ricci());
    let e = sym_eigen(&ric);
    (e.values[0], *e.values.last().unwrap())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdicts {
    /// `sec >= α > 0` and `Ric < nα`.
    pub lemma1_strict: bool,
    /// `sec >= α > 0` and `Ric <= nα`.
    pub lemma1_nonneg: bool,
    /// `0 < α <= sec < n/(n-1) α`.
    pub double_pinch_strict: bool,
    /// `0 < α <= sec <= n/(n-1) α`.
    pub double_pinch_nonneg: bool,
    /// `-n/(n-1) β < sec <= -β < 0`.
    pub lemma2_strict: bool,
    /// `-n/(n-1) β <= sec <= -β < 0`.
    pub lemma2_nonneg: bool,
}

impl Verdicts {
    /// Hypotheses of the positive-side vanishing and eigenvalue theorems.
    pub fn positive_strict(&self) -> bool {
        self.lemma1_strict || self.double_pinch_strict
    }
}

/// Signed slack of each inequality: positive means satisfied with room.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Margins {
    /// `α` itself (positivity of the minimum).
    pub sec_min_positive: f64,
    /// `nα - ric_max`.
    pub ricci_below_n_alpha: f64,
    /// `n/(n-1) α - sec_max`.
    pub double_pinch_upper: f64,
    /// `β = -sec_max`.
    pub sec_max_negative: f64,
    /// `sec_min + n/(n-1) β`.
    pub negative_pinch_lower: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PinchingReport {
    pub n: usize,
    pub sec_min: f64,
    pub sec_max: f64,
    pub argmin_plane: Plane,
    pub argmax_plane: Plane,
    pub ric_min: f64,
    pub ric_max: f64,
    pub second_kind_min: f64,
    pub second_kind_max: f64,
    pub verdicts: Verdicts,
    pub margins: Margins,
    pub restarts: usize,
    pub optimizer_tol: f64,
    pub strict_margin: f64,
}

impl PinchingReport {
    /// `α` for the positive-side theorems.
    pub fn alpha(&self) -> f64 {
        self.sec_min
    }

    /// `β` for the negative-side theorems.
    pub fn beta(&self) -> f64 {
        -self.sec_max
    }
}

pub fn verdicts_from(n: usize, sec_min: f64, sec_max: f64, ric_max: f64) -> (Verdicts, Margins) {
    let nf = n as f64;
    let ratio = nf / (nf - 1.0);
    let beta = -sec_max;
    let margins = Margins {
        sec_min_positive: sec_min,
        ricci_below_n_alpha: nf * sec_min - ric_max,
        double_pinch_upper: ratio * sec_min - sec_max,
        sec_max_negative: beta,
        negative_pinch_lower: sec_min + ratio * beta,
    };
    let strict = |m: f64| m >= STRICT_MARGIN;
    let weak = |m: f64| m >= -STRICT_MARGIN;
    let positive = strict(margins.sec_min_positive);
    let negative = strict(margins.sec_max_negative);
    let verdicts = Verdicts {
        lemma1_strict: positive && strict(margins.ricci_below_n_alpha),
        lemma1_nonneg: positive && weak(margins.ricci_below_n_alpha),
        double_pinch_strict: positive && strict(margins.double_pinch_upper),
        double_pinch_nonneg: positive && weak(margins.double_pinch_upper),
        lemma2_strict: negative && strict(margins.negative_pinch_lower),
        lemma2_nonneg: negative && weak(margins.negative_pinch_lower),
    };
    (verdicts, margins)
}

pub fn classify(r: &CurvatureTensor, opts: SearchOptions) -> Result<PinchingReport> {
    let sec = sec_extrema(r, opts)?;
    let (ric_min, ric_max) = ricci_extrema(r);
    let second = sym_eigen(second_kind_matrix(r)?.matrix());
    let (verdicts, margins) = verdicts_from(r.n(), sec.min, sec.max, ric_max);
    Ok(PinchingReport {
        n: r.n(),
        sec_min: sec.min,
        sec_max: sec.max,
        argmin_plane: sec.argmin,
        argmax_plane: sec.argmax,
        ric_min,
        ric_max,
        second_kind_min: second.values[0],
        second_kind_max: *second.values.last().unwrap(),
        verdicts,
        margins,
        restarts: opts.restarts,
        optimizer_tol: opts.tol,
        strict_margin: STRICT_MARGIN,
    })
}
