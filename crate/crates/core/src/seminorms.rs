//! Campanato, Lipschitz, and weighted Bloch seminorm estimators.
//!
//! Campanato values come from dyadic square sweeps: squares of side
//! side·2^{-j} at quarter-step shifted lattices, each scoring the
//! ω-normalized mean oscillation of the samples it covers (over Q ∩ Ω with
//! |Q| normalization when a domain is supplied). Lipschitz values are
//! suprema of |f(z)−f(w)|/ω(|z−w|) over sampled pairs; Bloch values are
//! suprema of |∇f|·ρ/ω(ρ) over cells in a boundary collar. None of these
//! claim exact suprema — experiments compare sweep values across scales and
//! resolutions instead.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{PlanarDomain, Square};
use crate::grid::GridFunction;
use crate::moduli::Modulus;

/// Above this many sample points the Lipschitz estimator switches from all
/// pairs to a fixed-seed random subsample of this many pairs.
const LIPSCHITZ_FULL_PAIR_LIMIT: usize = 2000;
const LIPSCHITZ_SUBSAMPLE_PAIRS: usize = 1_000_000;
const LIPSCHITZ_SUBSAMPLE_SEED: u64 = 0x5eed_11f7;

/// The constant subtracted inside each sweep square.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CenterRule {
    /// The integral mean over the covered cells (the definition).
    Mean,
    /// Component-wise median: a near-minimizer of the p=1 oscillation,
    /// realizing the "some constants b_Q" variant.
    Median,
}

/// Which side(s) of the boundary a collar sweep inspects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollarSide {
    Interior,
    Exterior,
    Both,
}

/// Supremum restricted to one scale, with the location that attained it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleEntry {
    pub scale: f64,
    pub sup: f64,
    /// Square center, cell center, or pair midpoint, depending on estimator.
    pub argmax: Complex64,
}

/// Where the global supremum was attained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArgmaxSite {
    None,
    Square(Square),
    Point(Complex64),
    Pair(Complex64, Complex64),
}

/// Result of a seminorm sweep: the global value, its witness, and the
/// per-scale suprema that compose it.
#[derive(Debug, Clone, PartialEq)]
pub struct SeminormEstimate {
    pub value: f64,
    pub argmax: ArgmaxSite,
    pub per_scale: Vec<ScaleEntry>,
}

impl SeminormEstimate {
    fn from_scales(per_scale: Vec<ScaleEntry>, argmax: ArgmaxSite) -> Self {
        let value = per_scale.iter().map(|e| e.sup).fold(0.0, f64::max);
        SeminormEstimate { value, argmax, per_scale }
    }

    /// CSV rows "scale,sup_at_scale,argmax_cx,argmax_cy", one per scale,
    /// preceded by that header line.
    pub fn per_scale_csv(&self) -> String {
        let mut out = String::from("scale,sup_at_scale,argmax_cx,argmax_cy\n");
        for e in &self.per_scale {
            out.push_str(&format!(
                "{},{},{},{}\n",
                e.scale, e.sup, e.argmax.re, e.argmax.im
            ));
        }
        out
    }
}

/// Cell indices (half-open) whose centers fall in [lo, hi) along one axis.
fn center_range(origin: f64, h: f64, n: usize, lo: f64, hi: f64) -> (usize, usize) {
    let first = ((lo - origin) / h - 0.5).ceil().max(0.0) as usize;
    let end = (((hi - origin) / h - 0.5).ceil().max(0.0) as usize).min(n);
    (first.min(end), end)
}

fn cells_in_square(f: &GridFunction, q: Square) -> (std::ops::Range<usize>, std::ops::Range<usize>) {
    let bbox = f.bounding_box();
    let h = f.spacing();
    let x0 = bbox.center.re - 0.5 * bbox.side;
    let y0 = bbox.center.im - 0.5 * bbox.side;
    let (i0, i1) = center_range(y0, h, f.n(), q.center.im - 0.5 * q.side, q.center.im + 0.5 * q.side);
    let (j0, j1) = center_range(x0, h, f.n(), q.center.re - 0.5 * q.side, q.center.re + 0.5 * q.side);
    (i0..i1, j0..j1)
}

/// Integral mean of the samples whose cell centers lie in Q.
pub fn square_mean(f: &GridFunction, q: Square) -> Result<Complex64> {
    let bbox = f.bounding_box();
    if (q.center.re - bbox.center.re).abs() + 1e-12 > 0.5 * (bbox.side - q.side)
        || (q.center.im - bbox.center.im).abs() + 1e-12 > 0.5 * (bbox.side - q.side)
    {
        return Err(Error::Precondition(format!(
            "square of side {} at {} leaves the grid box",
            q.side, q.center
        )));
    }
    let (rows, cols) = cells_in_square(f, q);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut count = 0usize;
    for i in rows {
        for j in cols.clone() {
            acc += f.get(i, j);
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::Resolution(format!(
            "square of side {} contains no cell centers (h = {})",
            q.side,
            f.spacing()
        )));
    }
    Ok(acc / count as f64)
}

/// Integral mean over Q ∩ Ω (cells with centers in both).
pub fn domain_mean(f: &GridFunction, q: Square, d: &PlanarDomain) -> Result<Complex64> {
    let (rows, cols) = cells_in_square(f, q);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut count = 0usize;
    for i in rows {
        for j in cols.clone() {
            if d.contains(f.cell_center(i, j)) {
                acc += f.get(i, j);
                count += 1;
            }
        }
    }
    if count == 0 {
        return Err(Error::Resolution(format!(
            "square of side {} meets the domain in no cell centers",
            q.side
        )));
    }
    Ok(acc / count as f64)
}

/// |square_mean(f, Q) − square_mean(f, 2Q)|: the concentric mean gap.
pub fn mean_gap(f: &GridFunction, q: Square) -> Result<f64> {
    Ok((square_mean(f, q)? - square_mean(f, q.dilate(2.0))?).norm())
}

/// Localized mean oscillation without the modulus weight:
/// (1/|Q|)·Σ_{Q∩Ω}|f − f_{Q|Ω}|·h² for p = 1, the root-mean analogue for
/// p = 2, and 0 when Q meets Ω in no cell.
pub fn square_oscillation(
    f: &GridFunction,
    q: Square,
    domain: Option<&PlanarDomain>,
    p: u8,
) -> Result<f64> {
    if p != 1 && p != 2 {
        return Err(Error::Domain(format!("p must be 1 or 2, got {p}")));
    }
    let n = f.n();
    let inside: Option<Vec<bool>> = domain.map(|d| {
        (0..n * n)
            .into_par_iter()
            .map(|idx| d.contains(f.cell_center(idx / n, idx % n)))
            .collect()
    });
    Ok(square_score(f, q, p, inside.as_deref(), CenterRule::Mean, 1.0, f.spacing()).unwrap_or(0.0))
}

/// Campanato seminorm sweep with integral-mean centers; see
/// [`campanato_seminorm_with_centers`].
pub fn campanato_seminorm(
    f: &GridFunction,
    m: &Modulus,
    p: u8,
    domain: Option<&PlanarDomain>,
    depth: u32,
    shifts: u32,
) -> Result<SeminormEstimate> {
    campanato_seminorm_with_centers(f, m, p, domain, depth, shifts, CenterRule::Mean)
}

/// Sweeps dyadic squares of side side·2^{-j}, j = 0..=depth, each lattice
/// repeated at shifts² fractional offsets (offset step ℓ/shifts; squares
/// leaving the box are dropped, never shrunk). Each square scores
///
/// * p=1: (1/(ω(ℓ)·|Q|)) · Σ_{cells in Q∩Ω} |f − c_Q| · h²,
/// * p=2: (1/ω(ℓ)) · sqrt((1/|Q|) · Σ_{cells in Q∩Ω} |f − c_Q|² · h²),
///
/// where c_Q is the center-rule constant and Ω is the whole plane when no
/// domain is given. Squares meeting Ω in no cell are skipped. ω is applied
/// to min(ℓ, cap): constant continuation beyond the modulus cap keeps
/// coarse scales meaningful without changing which scales dominate.
pub fn campanato_seminorm_with_centers(
    f: &GridFunction,
    m: &Modulus,
    p: u8,
    domain: Option<&PlanarDomain>,
    depth: u32,
    shifts: u32,
    rule: CenterRule,
) -> Result<SeminormEstimate> {
    if p != 1 && p != 2 {
        return Err(Error::Domain(format!("p must be 1 or 2, got {p}")));
    }
    if shifts == 0 {
        return Err(Error::Domain("shifts must be ≥ 1".into()));
    }
    let n = f.n();
    if (n as u64) < 4 * (1u64 << depth) {
        return Err(Error::Resolution(format!(
            "depth {depth} needs at least {} cells per side, grid has {n}",
            4u64 << depth
        )));
    }
    let inside: Option<Vec<bool>> = domain.map(|d| {
        (0..n * n)
            .into_par_iter()
            .map(|idx| d.contains(f.cell_center(idx / n, idx % n)))
            .collect()
    });

    let bbox = f.bounding_box();
    let h = f.spacing();
    let mut per_scale = Vec::new();
    let mut best = (f64::NEG_INFINITY, Square::new(bbox.center, bbox.side));
    for j in 0..=depth {
        let ell = bbox.side * f64::powi(0.5, j as i32);
        let omega = m.eval_capped(ell);
        let lattice = 1usize << j;
        let mut scale_best: Option<(f64, Square)> = None;
        for shift_y in 0..shifts {
            for shift_x in 0..shifts {
                // Shifted lattices lose their last square along each
                // shifted axis (it would leave the box).
                let count_y = if shift_y == 0 { lattice } else { lattice - 1 };
                let count_x = if shift_x == 0 { lattice } else { lattice - 1 };
                for qy in 0..count_y {
                    for qx in 0..count_x {
                        let corner_x = bbox.center.re - 0.5 * bbox.side
                            + (qx as f64 + shift_x as f64 / shifts as f64) * ell;
                        let corner_y = bbox.center.im - 0.5 * bbox.side
                            + (qy as f64 + shift_y as f64 / shifts as f64) * ell;
                        let q = Square::new(
                            Complex64::new(corner_x + 0.5 * ell, corner_y + 0.5 * ell),
                            ell,
                        );
                        if let Some(score) =
                            square_score(f, q, p, inside.as_deref(), rule, omega, h)
                        {
                            match &mut scale_best {
                                Some((s, sq)) if score > *s => {
                                    *s = score;
                                    *sq = q;
                                }
                                None => scale_best = Some((score, q)),
                                _ => {}
                            }
                        }
                    }
                }
            }
        }
        if let Some((sup, q)) = scale_best {
            per_scale.push(ScaleEntry { scale: ell, sup, argmax: q.center });
            if sup > best.0 {
                best = (sup, q);
            }
        }
    }
    if per_scale.is_empty() {
        return Err(Error::Resolution(
            "no sweep square covered any cell of the domain".into(),
        ));
    }
    Ok(SeminormEstimate::from_scales(per_scale, ArgmaxSite::Square(best.1)))
}

/// ω-normalized oscillation of one square, or None when Q ∩ Ω has no cells.
fn square_score(
    f: &GridFunction,
    q: Square,
    p: u8,
    inside: Option<&[bool]>,
    rule: CenterRule,
    omega: f64,
    h: f64,
) -> Option<f64> {
    let n = f.n();
    let (rows, cols) = cells_in_square(f, q);
    let mut count = 0usize;
    let mut mean = Complex64::new(0.0, 0.0);
    for i in rows.clone() {
        for j in cols.clone() {
            if inside.is_none_or(|mask| mask[i * n + j]) {
                mean += f.get(i, j);
                count += 1;
            }
        }
    }
    if count == 0 {
        return None;
    }
    mean /= count as f64;
    let center = match rule {
        CenterRule::Mean => mean,
        CenterRule::Median => {
            let mut re = Vec::with_capacity(count);
            let mut im = Vec::with_capacity(count);
            for i in rows.clone() {
                for j in cols.clone() {
                    if inside.is_none_or(|mask| mask[i * n + j]) {
                        let v = f.get(i, j);
                        re.push(v.re);
                        im.push(v.im);
                    }
                }
            }
            Complex64::new(median(&mut re), median(&mut im))
        }
    };
    let mut acc = 0.0f64;
    for i in rows {
        for j in cols.clone() {
            if inside.is_none_or(|mask| mask[i * n + j]) {
                let dev = (f.get(i, j) - center).norm();
                acc += if p == 1 { dev } else { dev * dev };
            }
        }
    }
    let q_area = q.side * q.side;
    let score = if p == 1 {
        acc * h * h / (q_area * omega)
    } else {
        (acc * h * h / q_area).sqrt() / omega
    };
    Some(score)
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let k = values.len();
    if k % 2 == 1 {
        values[k / 2]
    } else {
        0.5 * (values[k / 2 - 1] + values[k / 2])
    }
}

/// Supremum of |f(z)−f(w)| / ω(|z−w|) over pairs of samples `(point, value)`.
/// All pairs are scanned up to 2000 points; beyond that a fixed-seed random
/// subsample of 10⁶ pairs keeps the estimate deterministic. Distances beyond
/// the modulus cap use the constant continuation ω(cap) (for bounded
/// functions the seminorm with flat-capped ω defines the same class).
/// Per-scale entries are dyadic distance bands cap·2^{-j}.
pub fn lipschitz_seminorm(
    samples: &[(Complex64, Complex64)],
    m: &Modulus,
) -> Result<SeminormEstimate> {
    if samples.len() < 2 {
        return Err(Error::Precondition(format!(
            "Lipschitz estimation needs ≥ 2 samples, got {}",
            samples.len()
        )));
    }
    let cap = m.cap();
    let mut bands: Vec<(f64, Complex64, Complex64)> = Vec::new(); // (sup, z, w) per band
    let mut any_distinct = false;

    let mut visit = |a: (Complex64, Complex64), b: (Complex64, Complex64)| {
        let dist = (a.0 - b.0).norm();
        if dist == 0.0 {
            return;
        }
        any_distinct = true;
        let quot = (a.1 - b.1).norm() / m.eval_capped(dist);
        let band = if dist >= cap {
            0usize
        } else {
            (((cap / dist).log2().floor()) as usize).min(59)
        };
        if bands.len() <= band {
            bands.resize(band + 1, (f64::NEG_INFINITY, Complex64::default(), Complex64::default()));
        }
        if quot > bands[band].0 {
            bands[band] = (quot, a.0, b.0);
        }
    };

    if samples.len() <= LIPSCHITZ_FULL_PAIR_LIMIT {
        for i in 0..samples.len() {
            for j in (i + 1)..samples.len() {
                visit(samples[i], samples[j]);
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(LIPSCHITZ_SUBSAMPLE_SEED);
        for _ in 0..LIPSCHITZ_SUBSAMPLE_PAIRS {
            let i = rng.random_range(0..samples.len());
            let j = rng.random_range(0..samples.len());
            if i != j {
                visit(samples[i], samples[j]);
            }
        }
    }
    if !any_distinct {
        return Err(Error::Domain(
            "all sample points coincide; no pair has positive distance".into(),
        ));
    }
    let mut per_scale = Vec::new();
    let mut best = (f64::NEG_INFINITY, Complex64::default(), Complex64::default());
    for (band, &(sup, z, w)) in bands.iter().enumerate() {
        if sup.is_finite() && sup >= 0.0 {
            per_scale.push(ScaleEntry {
                scale: cap * f64::powi(0.5, band as i32),
                sup,
                argmax: 0.5 * (z + w),
            });
            if sup > best.0 {
                best = (sup, z, w);
            }
        }
    }
    Ok(SeminormEstimate::from_scales(per_scale, ArgmaxSite::Pair(best.1, best.2)))
}

/// Weighted Bloch sweep over interior collar cells; see
/// [`bloch_seminorm_sided`].
pub fn bloch_seminorm(
    f: &GridFunction,
    d: &PlanarDomain,
    m: &Modulus,
    collar: (f64, f64),
) -> Result<SeminormEstimate> {
    bloch_seminorm_sided(f, d, m, collar, CollarSide::Interior)
}

/// Supremum of |∇f(z)|·ρ(z)/ω(ρ(z)) over cells whose boundary distance ρ
/// lies in the collar, on the chosen side(s) of ∂Ω. The gradient is the
/// Euclidean norm of the Wirtinger pair (∂f, ∂̄f) from centered differences,
/// which equals |f′| for holomorphic f. Per-scale entries are dyadic bands
/// of ρ. Requires ρ_min ≥ 4h so every stencil stays on its side of the
/// boundary.
pub fn bloch_seminorm_sided(
    f: &GridFunction,
    d: &PlanarDomain,
    m: &Modulus,
    collar: (f64, f64),
    side: CollarSide,
) -> Result<SeminormEstimate> {
    let (rho_min, rho_max) = collar;
    let h = f.spacing();
    if !(rho_min > 0.0 && rho_min < rho_max) {
        return Err(Error::Domain(format!(
            "collar ({rho_min}, {rho_max}) is not an interval of positive distances"
        )));
    }
    if rho_min < 4.0 * h {
        return Err(Error::Precondition(format!(
            "collar inner radius {rho_min} is below 4h = {}; refine the grid",
            4.0 * h
        )));
    }
    let n = f.n();
    // ρ and membership per cell, in parallel (pure geometry).
    let rho: Vec<(f64, bool)> = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let z = f.cell_center(idx / n, idx % n);
            (d.boundary_distance(z), d.contains(z))
        })
        .collect();

    let mut bands: Vec<(f64, Complex64)> = Vec::new();
    let mut best = (f64::NEG_INFINITY, Complex64::default());
    let mut seen = false;
    for i in 1..n - 1 {
        for j in 1..n - 1 {
            let (r, inside) = rho[i * n + j];
            let wanted = match side {
                CollarSide::Interior => inside,
                CollarSide::Exterior => !inside,
                CollarSide::Both => true,
            };
            if !wanted || r < rho_min || r > rho_max {
                continue;
            }
            seen = true;
            let fx = (f.get(i, j + 1) - f.get(i, j - 1)) / (2.0 * h);
            let fy = (f.get(i + 1, j) - f.get(i - 1, j)) / (2.0 * h);
            let dz = 0.5 * Complex64::new(fx.re + fy.im, fx.im - fy.re);
            let dzbar = 0.5 * Complex64::new(fx.re - fy.im, fx.im + fy.re);
            let grad = (dz.norm_sqr() + dzbar.norm_sqr()).sqrt();
            let quot = grad * r / m.eval_capped(r);
            let band = (-r.log2()).floor().max(0.0) as usize;
            if bands.len() <= band {
                bands.resize(band + 1, (f64::NEG_INFINITY, Complex64::default()));
            }
            let z = f.cell_center(i, j);
            if quot > bands[band].0 {
                bands[band] = (quot, z);
            }
            if quot > best.0 {
                best = (quot, z);
            }
        }
    }
    if !seen {
        return Err(Error::Resolution(format!(
            "no cell has boundary distance in ({rho_min}, {rho_max})"
        )));
    }
    let per_scale = bands
        .iter()
        .enumerate()
        .filter(|(_, b)| b.0.is_finite())
        .map(|(band, &(sup, argmax))| ScaleEntry {
            scale: f64::powi(0.5, band as i32),
            sup,
            argmax,
        })
        .collect();
    Ok(SeminormEstimate::from_scales(per_scale, ArgmaxSite::Point(best.1)))
}
