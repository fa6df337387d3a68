//! Whole-plane extensions of functions given on a domain.
//!
//! The disk extension reflects through the unit circle, z ↦ 1/z̄, which is
//! its own inverse and keeps boundary values fixed. Star domains use the
//! radial quasi-reflection z ↦ (r(θ)²/|z|)·e^{iθ} in a collar of relative
//! width 1/4 outside the boundary, continued constantly along rays beyond
//! the collar: seminorm experiments read the extension only near ∂Ω and
//! through means of bounded values far away, so a bounded continuation is
//! all the far field needs.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{PlanarDomain, Square};
use crate::grid::GridFunction;

/// Relative width of the exterior collar the star reflection covers:
/// points with |z| up to r(θ)·(1 + 1/4) reflect inside, farther points
/// reuse the outer collar edge.
pub const COLLAR_RELATIVE_WIDTH: f64 = 0.25;

const BILIPSCHITZ_SAMPLE_PAIRS: usize = 4096;

/// Smallest power-of-two grid over `target_box` at least as fine as `f`,
/// reusing `f`'s exact grid when the boxes coincide.
fn target_resolution(f: &GridFunction, target_box: Square) -> usize {
    if target_box == f.bounding_box() {
        return f.n();
    }
    let mut n = 4usize;
    while target_box.side / n as f64 > f.spacing() {
        n *= 2;
    }
    n
}

fn fill_extension(
    f: &GridFunction,
    target_box: Square,
    reflect: impl Fn(Complex64) -> Complex64 + Sync,
    is_inside: impl Fn(Complex64) -> bool + Sync,
) -> Result<GridFunction> {
    let n_t = target_resolution(f, target_box);
    let aligned = target_box == f.bounding_box() && n_t == f.n();
    let mut out = GridFunction::zeros(target_box, n_t)?;
    let n = n_t;
    for i in 0..n {
        for j in 0..n {
            let z = out.cell_center(i, j);
            let v = if is_inside(z) {
                if aligned {
                    f.get(i, j)
                } else {
                    f.bilinear(z)
                }
            } else {
                f.bilinear(reflect(z))
            };
            out.set(i, j, v);
        }
    }
    Ok(out)
}

/// Extends a function given on the unit disk to `target_box` by the
/// reflection z ↦ 1/z̄. Reflected points that land closer to the origin
/// than one grid spacing (images of |z| beyond the innermost resolved
/// radius) reuse the sample nearest 0. When `target_box` equals `f`'s box
/// the interior is copied sample-for-sample.
pub fn disk_reflect_extend(f: &GridFunction, target_box: Square) -> Result<GridFunction> {
    let reach_re = 0.5 * target_box.side - target_box.center.re.abs();
    let reach_im = 0.5 * target_box.side - target_box.center.im.abs();
    if reach_re < 1.0 || reach_im < 1.0 {
        return Err(Error::Precondition(format!(
            "target box (center {}, side {}) does not contain the unit disk",
            target_box.center, target_box.side
        )));
    }
    let h = f.spacing();
    let n = f.n();
    let near_origin = (0..n * n)
        .min_by(|&a, &b| {
            let za = f.cell_center(a / n, a % n).norm();
            let zb = f.cell_center(b / n, b % n).norm();
            za.partial_cmp(&zb).expect("finite centers")
        })
        .expect("non-empty grid");
    let origin_sample = f.get(near_origin / n, near_origin % n);

    let n_t = target_resolution(f, target_box);
    let aligned = target_box == f.bounding_box() && n_t == f.n();
    let mut out = GridFunction::zeros(target_box, n_t)?;
    for i in 0..n_t {
        for j in 0..n_t {
            let z = out.cell_center(i, j);
            let v = if z.norm() < 1.0 {
                if aligned {
                    f.get(i, j)
                } else {
                    f.bilinear(z)
                }
            } else {
                let w = z / z.norm_sqr();
                if w.norm() < h {
                    origin_sample
                } else {
                    f.bilinear(w)
                }
            };
            out.set(i, j, v);
        }
    }
    Ok(out)
}

/// Extends a function given on a star-shaped domain by the radial
/// quasi-reflection ρe^{iθ} ↦ (r(θ)²/ρ)e^{iθ} for ρ in the exterior collar
/// r(θ) ≤ ρ ≤ r(θ)·(1+1/4); beyond the collar the outer-edge value
/// continues constantly along each ray. Inside Ω the values are `f`'s own
/// (sample-for-sample when `target_box` equals `f`'s box).
pub fn collar_reflect_extend(
    d: &PlanarDomain,
    f: &GridFunction,
    target_box: Square,
) -> Result<GridFunction> {
    if d.r_min() <= 0.0 {
        return Err(Error::Precondition(
            "domain must have positive inner radius".into(),
        ));
    }
    let db = d.bounding_box();
    if target_box.side < db.side
        || (target_box.center.re - db.center.re).abs() > 0.5 * (target_box.side - db.side)
        || (target_box.center.im - db.center.im).abs() > 0.5 * (target_box.side - db.side)
    {
        return Err(Error::Precondition(format!(
            "target box (side {}) does not contain the domain's bounding box (side {})",
            target_box.side, db.side
        )));
    }
    fill_extension(
        f,
        target_box,
        |z| {
            let rho = z.norm();
            if rho == 0.0 {
                return z;
            }
            let r = d.radius_at(z.im.atan2(z.re));
            let clamped = rho.min(r * (1.0 + COLLAR_RELATIVE_WIDTH));
            z * (r * r / (clamped * rho))
        },
        |z| d.contains(z),
    )
}

/// Empirical bilipschitz constant of the collar reflection: the largest
/// distance distortion, in either direction, over seeded random pairs of
/// exterior collar points. Reported alongside extensions so boundary
/// continuity checks can rescale distances by it.
pub fn collar_reflection_bilipschitz(d: &PlanarDomain, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sample = |rng: &mut ChaCha8Rng| -> (Complex64, Complex64) {
        let theta = rng.random_range(0.0..std::f64::consts::TAU);
        let r = d.radius_at(theta);
        let rho = r * (1.0 + rng.random_range(0.0..COLLAR_RELATIVE_WIDTH));
        let z = Complex64::from_polar(rho, theta);
        let w = z * (r * r / (rho * rho));
        (z, w)
    };
    let mut worst = 1.0f64;
    let mut prev = sample(&mut rng);
    for _ in 0..BILIPSCHITZ_SAMPLE_PAIRS {
        let cur = sample(&mut rng);
        let dz = (cur.0 - prev.0).norm();
        let dw = (cur.1 - prev.1).norm();
        if dz > 1e-9 && dw > 1e-9 {
            worst = worst.max(dw / dz).max(dz / dw);
        }
        prev = cur;
    }
    worst
}

/// The extension appropriate to the domain: exact circle inversion for
/// the unit disk, the collar quasi-reflection otherwise.
pub fn extend_for_domain(
    d: &PlanarDomain,
    f: &GridFunction,
    target_box: Square,
) -> Result<GridFunction> {
    if d.is_disk() && (d.r_max() - 1.0).abs() < 1e-12 {
        disk_reflect_extend(f, target_box)
    } else {
        collar_reflect_extend(d, f, target_box)
    }
}
