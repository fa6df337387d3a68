//! Axis-aligned squares and planar domains.
//!
//! Domains are either disks or star-shaped regions given by a radial profile
//! r(θ) = base + Σ (a_k cos(kθ) + b_k sin(kθ)) about the origin. Membership
//! is exact (compare |z| against r(arg z)); the distance to the boundary is
//! computed by a dense angular scan refined with Newton steps. A generator
//! produces star domains whose boundary normal has a prescribed modulus of
//! continuity, via lacunary profiles with coefficients 2^{-k}·ω(2^{-k}).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moduli::Modulus;

/// Angular resolution of the cached boundary polyline used to seed distance
/// refinement.
const SCAN_ANGLES: usize = 4096;

/// Angular resolution used to certify r_min/r_max and to build arclength
/// tables.
const FINE_ANGLES: usize = 1 << 16;

/// Boundary samples (equal arclength) for the normal-modulus estimate.
const NORMAL_SAMPLES: usize = 2048;

/// An axis-aligned square with center and side length ℓ(Q).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Square {
    pub center: Complex64,
    pub side: f64,
}

impl Square {
    pub fn new(center: Complex64, side: f64) -> Self {
        assert!(side > 0.0, "square side must be positive, got {side}");
        Square { center, side }
    }

    /// The concentric square aQ with side a·ℓ(Q).
    pub fn dilate(&self, a: f64) -> Square {
        Square::new(self.center, a * self.side)
    }

    /// Area |Q| = ℓ(Q)².
    pub fn area(&self) -> f64 {
        self.side * self.side
    }

    /// Closed membership test.
    pub fn contains(&self, z: Complex64) -> bool {
        (z.re - self.center.re).abs() <= 0.5 * self.side
            && (z.im - self.center.im).abs() <= 0.5 * self.side
    }
}

/// One Fourier component of a star profile: cos·cos(freq·θ) + sin·sin(freq·θ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Harmonic {
    pub freq: u32,
    pub cos: f64,
    pub sin: f64,
}

#[derive(Debug, Clone, PartialEq)]
enum DomainKind {
    Disk { radius: f64 },
    Star { base: f64, harmonics: Vec<Harmonic> },
}

/// A bounded planar domain, star-shaped about the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarDomain {
    kind: DomainKind,
    r_min: f64,
    r_max: f64,
    /// Boundary polyline at SCAN_ANGLES uniform angles (empty for disks,
    /// whose distance is closed-form).
    scan: Vec<Complex64>,
}

impl PlanarDomain {
    /// The open disk of the given radius about the origin.
    pub fn disk(radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Domain(format!(
                "disk radius must be positive and finite, got {radius}"
            )));
        }
        Ok(PlanarDomain {
            kind: DomainKind::Disk { radius },
            r_min: radius,
            r_max: radius,
            scan: Vec::new(),
        })
    }

    /// Star-shaped domain with radial profile base + Σ harmonics. The profile
    /// must stay strictly positive (checked on a dense angular sample).
    pub fn star(base: f64, harmonics: Vec<Harmonic>) -> Result<Self> {
        if !(base > 0.0 && base.is_finite()) {
            return Err(Error::Domain(format!(
                "star base radius must be positive, got {base}"
            )));
        }
        let kind = DomainKind::Star { base, harmonics };
        let (mut r_min, mut r_max) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..FINE_ANGLES {
            let r = profile(&kind, std::f64::consts::TAU * i as f64 / FINE_ANGLES as f64);
            r_min = r_min.min(r);
            r_max = r_max.max(r);
        }
        if !(r_min > 0.0) {
            return Err(Error::Amplitude(format!(
                "star profile reaches r_min = {r_min} ≤ 0; reduce the harmonic amplitudes"
            )));
        }
        let scan = (0..SCAN_ANGLES)
            .map(|i| {
                let theta = std::f64::consts::TAU * i as f64 / SCAN_ANGLES as f64;
                Complex64::from_polar(profile(&kind, theta), theta)
            })
            .collect();
        Ok(PlanarDomain { kind, r_min, r_max, scan })
    }

    /// Radial profile r(θ).
    pub fn radius_at(&self, theta: f64) -> f64 {
        profile(&self.kind, theta)
    }

    /// The boundary point r(θ)·e^{iθ}.
    pub fn boundary_point(&self, theta: f64) -> Complex64 {
        Complex64::from_polar(self.radius_at(theta), theta)
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    /// True for circular domains (for them the circle inversion is exact).
    pub fn is_disk(&self) -> bool {
        matches!(self.kind, DomainKind::Disk { .. })
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    /// Smallest centered square containing the closure.
    pub fn bounding_box(&self) -> Square {
        Square::new(Complex64::new(0.0, 0.0), 2.0 * self.r_max)
    }

    /// True iff z lies in the open domain.
    pub fn contains(&self, z: Complex64) -> bool {
        let r = z.norm();
        match &self.kind {
            DomainKind::Disk { radius } => r < *radius,
            kind => r < profile(kind, z.arg()),
        }
    }

    /// Distance ρ(z) from z to the boundary curve (defined on both sides).
    pub fn boundary_distance(&self, z: Complex64) -> f64 {
        match &self.kind {
            DomainKind::Disk { radius } => (radius - z.norm()).abs(),
            kind => {
                // Coarse polyline scan, then Newton refinement of the squared
                // distance g(θ) = |z − γ(θ)|² near the best sample.
                let mut best = 0usize;
                let mut best_d2 = f64::INFINITY;
                for (i, p) in self.scan.iter().enumerate() {
                    let d2 = (z - p).norm_sqr();
                    if d2 < best_d2 {
                        best_d2 = d2;
                        best = i;
                    }
                }
                let dtheta = std::f64::consts::TAU / SCAN_ANGLES as f64;
                let theta0 = best as f64 * dtheta;
                let (lo, hi) = (theta0 - 2.0 * dtheta, theta0 + 2.0 * dtheta);
                let mut theta = theta0;
                for _ in 0..20 {
                    let (g1, g2) = squared_distance_derivatives(kind, z, theta);
                    if g2 <= 0.0 {
                        break;
                    }
                    let next = (theta - g1 / g2).clamp(lo, hi);
                    if (next - theta).abs() < 1e-15 {
                        theta = next;
                        break;
                    }
                    theta = next;
                }
                let newton_d2 = (z - gamma(kind, theta)).norm_sqr();
                // Ternary-search fallback covers Newton escaping or a
                // non-convex stretch of g.
                let mut a = lo;
                let mut b = hi;
                for _ in 0..60 {
                    let m1 = a + (b - a) / 3.0;
                    let m2 = b - (b - a) / 3.0;
                    if (z - gamma(kind, m1)).norm_sqr() < (z - gamma(kind, m2)).norm_sqr() {
                        b = m2;
                    } else {
                        a = m1;
                    }
                }
                let ternary_d2 = (z - gamma(kind, 0.5 * (a + b))).norm_sqr();
                newton_d2.min(ternary_d2).min(best_d2).sqrt()
            }
        }
    }

    /// Area of the domain: ½∫r(θ)² dθ, exact for trigonometric-polynomial
    /// profiles (π·base² + (π/2)·Σ(a_k² + b_k²)).
    pub fn area(&self) -> f64 {
        match &self.kind {
            DomainKind::Disk { radius } => std::f64::consts::PI * radius * radius,
            DomainKind::Star { base, harmonics } => {
                let coeff_energy: f64 =
                    harmonics.iter().map(|h| h.cos * h.cos + h.sin * h.sin).sum();
                std::f64::consts::PI * (base * base + 0.5 * coeff_energy)
            }
        }
    }

    /// Empirical constant sup |n(s₁) − n(s₂)| / ω(d(s₁,s₂)) over 2048
    /// equal-arclength boundary samples, with d the geodesic arclength
    /// distance flat-capped at the modulus cap. A finite value certifies the
    /// outward normal's ω-continuity at sample resolution.
    pub fn normal_modulus_constant(&self, m: &Modulus) -> Result<f64> {
        let (thetas, total_len) = self.equal_arclength_angles(NORMAL_SAMPLES)?;
        let normals: Vec<Complex64> = thetas
            .iter()
            .map(|&theta| self.outward_normal(theta))
            .collect::<Result<_>>()?;
        let ds = total_len / NORMAL_SAMPLES as f64;
        // Geodesic index distance d ↦ ω value, shared across all pairs.
        let half = NORMAL_SAMPLES / 2;
        let omega_at: Vec<f64> = (0..=half)
            .map(|d| {
                if d == 0 {
                    f64::NAN
                } else {
                    m.eval_capped(d as f64 * ds)
                }
            })
            .collect();
        let mut c: f64 = 0.0;
        for d in 1..=half {
            let w = omega_at[d];
            for i in 0..NORMAL_SAMPLES {
                let j = (i + d) % NORMAL_SAMPLES;
                let gap = (normals[i] - normals[j]).norm();
                c = c.max(gap / w);
            }
        }
        if !c.is_finite() {
            return Err(Error::Numerical(
                "normal-modulus probe produced non-finite quotients".into(),
            ));
        }
        Ok(c)
    }

    /// Outward unit normal at parameter θ: the tangent γ′ rotated by −90°.
    fn outward_normal(&self, theta: f64) -> Result<Complex64> {
        let (r, r1) = profile_with_derivative(&self.kind, theta);
        let tangent = Complex64::new(r1, r) * Complex64::from_polar(1.0, theta);
        let speed = tangent.norm();
        if speed < 1e-12 {
            return Err(Error::Domain(format!(
                "degenerate boundary tangent at θ = {theta}"
            )));
        }
        Ok(-Complex64::i() * tangent / speed)
    }

    /// Angles of `count` boundary points spaced by equal arclength, plus the
    /// total boundary length.
    fn equal_arclength_angles(&self, count: usize) -> Result<(Vec<f64>, f64)> {
        let mut cumulative = Vec::with_capacity(FINE_ANGLES + 1);
        cumulative.push(0.0);
        let dtheta = std::f64::consts::TAU / FINE_ANGLES as f64;
        let speed = |theta: f64| {
            let (r, r1) = profile_with_derivative(&self.kind, theta);
            (r * r + r1 * r1).sqrt()
        };
        let mut prev = speed(0.0);
        let mut total = 0.0;
        for i in 1..=FINE_ANGLES {
            let cur = speed(i as f64 * dtheta);
            total += 0.5 * (prev + cur) * dtheta;
            cumulative.push(total);
            prev = cur;
        }
        if !(total > 0.0) {
            return Err(Error::Domain("boundary has zero length".into()));
        }
        let mut thetas = Vec::with_capacity(count);
        let mut idx = 0usize;
        for j in 0..count {
            let target = total * j as f64 / count as f64;
            while idx + 1 < cumulative.len() && cumulative[idx + 1] < target {
                idx += 1;
            }
            let seg = cumulative[idx + 1] - cumulative[idx];
            let frac = if seg > 0.0 { (target - cumulative[idx]) / seg } else { 0.0 };
            thetas.push((idx as f64 + frac) * dtheta);
        }
        Ok((thetas, total))
    }
}

/// Star domain at the exact smoothness class of ω: radial profile
/// r(θ) = 1 + amplitude·Σ_{k=1..depth} 2^{-k}·ω(2^{-k})·cos(2^k θ), whose
/// derivative is a lacunary series with coefficients ω(2^{-k}).
pub fn make_test_domain(m: &Modulus, amplitude: f64, depth: u32) -> Result<PlanarDomain> {
    if !amplitude.is_finite() {
        return Err(Error::Amplitude(format!("amplitude must be finite, got {amplitude}")));
    }
    if depth == 0 || depth > 14 {
        return Err(Error::Domain(format!(
            "depth must be in 1..=14 (profile frequencies up to 2^14), got {depth}"
        )));
    }
    if !m.dini_integral(m.cap())?.is_finite() {
        return Err(Error::Precondition(
            "test domains require a Dini-smooth modulus".into(),
        ));
    }
    let harmonics = (1..=depth)
        .map(|k| {
            let t = f64::powi(0.5, k as i32);
            Harmonic {
                freq: 1u32 << k,
                cos: amplitude * t * m.eval_capped(t),
                sin: 0.0,
            }
        })
        .collect();
    PlanarDomain::star(1.0, harmonics)
}

fn profile(kind: &DomainKind, theta: f64) -> f64 {
    match kind {
        DomainKind::Disk { radius } => *radius,
        DomainKind::Star { base, harmonics } => {
            let mut r = *base;
            for h in harmonics {
                let (s, c) = (h.freq as f64 * theta).sin_cos();
                r += h.cos * c + h.sin * s;
            }
            r
        }
    }
}

fn profile_with_derivative(kind: &DomainKind, theta: f64) -> (f64, f64) {
    match kind {
        DomainKind::Disk { radius } => (*radius, 0.0),
        DomainKind::Star { base, harmonics } => {
            let mut r = *base;
            let mut r1 = 0.0;
            for h in harmonics {
                let f = h.freq as f64;
                let (s, c) = (f * theta).sin_cos();
                r += h.cos * c + h.sin * s;
                r1 += f * (h.sin * c - h.cos * s);
            }
            (r, r1)
        }
    }
}

fn gamma(kind: &DomainKind, theta: f64) -> Complex64 {
    Complex64::from_polar(profile(kind, theta), theta)
}

/// First and second derivatives of g(θ) = |z − γ(θ)|², using
/// γ′ = (r′ + ir)e^{iθ} and γ″ = (r″ + 2ir′ − r)e^{iθ}.
fn squared_distance_derivatives(kind: &DomainKind, z: Complex64, theta: f64) -> (f64, f64) {
    let (r, r1, r2) = match kind {
        DomainKind::Disk { radius } => (*radius, 0.0, 0.0),
        DomainKind::Star { base, harmonics } => {
            let mut r = *base;
            let mut d1 = 0.0;
            let mut d2 = 0.0;
            for h in harmonics {
                let f = h.freq as f64;
                let (s, c) = (f * theta).sin_cos();
                r += h.cos * c + h.sin * s;
                d1 += f * (h.sin * c - h.cos * s);
                d2 -= f * f * (h.cos * c + h.sin * s);
            }
            (r, d1, d2)
        }
    };
    let rot = Complex64::from_polar(1.0, theta);
    let g = Complex64::new(r, 0.0) * rot;
    let g1 = Complex64::new(r1, r) * rot;
    let g2 = Complex64::new(r2 - r, 2.0 * r1) * rot;
    let diff = z - g;
    let dot = |a: Complex64, b: Complex64| a.re * b.re + a.im * b.im;
    (-2.0 * dot(diff, g1), -2.0 * dot(diff, g2) + 2.0 * g1.norm_sqr())
}

/// Serializable domain description used by config files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DomainSpec {
    Disk {
        radius: f64,
    },
    /// The lacunary test-domain family of [`make_test_domain`].
    Star {
        amplitude: f64,
        depth: u32,
        modulus: Modulus,
    },
}

impl DomainSpec {
    pub fn build(&self) -> Result<PlanarDomain> {
        match self {
            DomainSpec::Disk { radius } => PlanarDomain::disk(*radius),
            DomainSpec::Star { amplitude, depth, modulus } => {
                make_test_domain(modulus, *amplitude, *depth)
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("domain spec: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("domain serialization cannot fail")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn three_lobe() -> PlanarDomain {
        PlanarDomain::star(1.0, vec![Harmonic { freq: 3, cos: 0.1, sin: 0.0 }]).unwrap()
    }

    #[test]
    fn square_dilation_scales_side_and_keeps_center() {
        let q = Square::new(Complex64::new(0.5, -1.0), 2.0);
        let dq = q.dilate(3.0);
        assert_eq!(dq.center, q.center);
        assert_eq!(dq.side, 6.0);
        assert_eq!(dq.area(), 36.0);
    }

    #[test]
    fn disk_membership() {
        let d = PlanarDomain::disk(1.0).unwrap();
        assert!(d.contains(Complex64::new(0.0, 0.0)));
        assert!(!d.contains(Complex64::new(2.0, 0.0)));
        assert!(!d.contains(Complex64::new(1.0, 0.0))); // open domain
    }

    #[test]
    fn star_membership_uses_profile() {
        // r(0) = 1.1, so the point 1.05 on the positive axis is inside.
        let d = three_lobe();
        assert!(d.contains(Complex64::new(1.05, 0.0)));
        assert!(!d.contains(Complex64::new(1.15, 0.0)));
    }

    #[test]
    fn disk_boundary_distance_closed_form() {
        let d = PlanarDomain::disk(1.0).unwrap();
        assert_relative_eq!(d.boundary_distance(Complex64::new(0.5, 0.0)), 0.5);
        assert_relative_eq!(d.boundary_distance(Complex64::new(2.0, 0.0)), 1.0);
    }

    #[test]
    fn star_distance_from_center_is_min_radius() {
        let d = three_lobe();
        assert_relative_eq!(
            d.boundary_distance(Complex64::new(0.0, 0.0)),
            0.9,
            max_relative = 1e-6
        );
    }

    #[test]
    fn trivial_star_matches_disk_distance() {
        // A star with no harmonics must reproduce the disk's closed form:
        // two independent code paths for the same geometry.
        let star = PlanarDomain::star(1.0, vec![]).unwrap();
        let disk = PlanarDomain::disk(1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let z = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            assert_relative_eq!(
                star.boundary_distance(z),
                disk.boundary_distance(z),
                epsilon = 1e-9,
                max_relative = 1e-9
            );
        }
    }

    #[test]
    fn star_distance_matches_dense_sampling_oracle() {
        let d = PlanarDomain::star(
            1.0,
            vec![
                Harmonic { freq: 2, cos: 0.05, sin: 0.02 },
                Harmonic { freq: 5, cos: -0.03, sin: 0.04 },
            ],
        )
        .unwrap();
        let probes = [
            Complex64::new(0.3, -0.2),
            Complex64::new(1.4, 0.9),
            Complex64::new(-0.8, 0.1),
            Complex64::new(0.0, 1.02),
        ];
        for z in probes {
            // Brute-force minimum over 2^20 boundary points.
            let mut oracle = f64::INFINITY;
            for i in 0..(1 << 20) {
                let theta = std::f64::consts::TAU * i as f64 / (1 << 20) as f64;
                oracle = oracle.min((z - d.boundary_point(theta)).norm());
            }
            assert_relative_eq!(d.boundary_distance(z), oracle, max_relative = 1e-6);
        }
    }

    #[test]
    fn rho_is_one_lipschitz() {
        let d = make_test_domain(&Modulus::power(0.5).unwrap(), 0.2, 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let z = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let w = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let gap = (d.boundary_distance(z) - d.boundary_distance(w)).abs();
            assert!(
                gap <= (z - w).norm() + 1e-7,
                "distance jumped by {gap} over a step of {}",
                (z - w).norm()
            );
        }
    }

    #[test]
    fn interior_points_have_inscribed_disks() {
        let d = three_lobe();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut checked = 0;
        while checked < 200 {
            let z = Complex64::new(rng.random_range(-1.2..1.2), rng.random_range(-1.2..1.2));
            if !d.contains(z) {
                continue;
            }
            checked += 1;
            let rho = d.boundary_distance(z);
            assert!(rho > 0.0);
            for k in 0..64 {
                let dir = Complex64::from_polar(
                    rho * (1.0 - 1e-6),
                    std::f64::consts::TAU * k as f64 / 64.0,
                );
                assert!(
                    d.contains(z + dir),
                    "inscribed circle of radius {rho} at {z} escapes near direction {k}"
                );
            }
        }
    }

    #[test]
    fn disk_normal_constant_matches_circle_geometry() {
        // On the unit circle |n(s₁)−n(s₂)| = 2·sin(d/2) for geodesic
        // distance d ≤ π; with ω = t^{1/2} flat-capped at 1 the supremum sits
        // at antipodal pairs: 2/ω(1) = 2.
        let d = PlanarDomain::disk(1.0).unwrap();
        let c = d.normal_modulus_constant(&Modulus::power(0.5).unwrap()).unwrap();
        assert!((c - 2.0).abs() <= 1e-3, "disk constant {c} not ≈ 2");
    }

    #[test]
    fn normal_constant_is_deterministic_and_finite_for_smooth_star() {
        let d = PlanarDomain::star(1.0, vec![Harmonic { freq: 2, cos: 0.05, sin: 0.0 }]).unwrap();
        let m = Modulus::power(0.5).unwrap();
        let c1 = d.normal_modulus_constant(&m).unwrap();
        let c2 = d.normal_modulus_constant(&m).unwrap();
        assert!(c1.is_finite());
        assert_eq!(c1.to_bits(), c2.to_bits());
    }

    #[test]
    fn test_domain_with_zero_amplitude_is_unit_disk() {
        let d = make_test_domain(&Modulus::power(0.5).unwrap(), 0.0, 8).unwrap();
        assert_eq!(d.r_min(), 1.0);
        assert_eq!(d.r_max(), 1.0);
        assert_relative_eq!(d.area(), std::f64::consts::PI);
        let z = Complex64::new(0.25, 0.4);
        assert_relative_eq!(
            d.boundary_distance(z),
            1.0 - z.norm(),
            max_relative = 1e-9
        );
    }

    #[test]
    fn test_domain_profile_stays_above_coefficient_bound() {
        // r_min ≥ 1 − 0.2·Σ 2^{-k}·ω(2^{-k}) > 0.8 for ω = t^{1/2}.
        let d = make_test_domain(&Modulus::power(0.5).unwrap(), 0.2, 8).unwrap();
        assert!(d.r_min() > 0.8, "r_min = {}", d.r_min());
        assert!(d.r_max() < 1.2);
    }

    #[test]
    fn test_domain_normal_is_omega_continuous() {
        let m = Modulus::log_family(1.0).unwrap();
        let d = make_test_domain(&m, 0.2, 10).unwrap();
        let c = d.normal_modulus_constant(&m).unwrap();
        assert!(c.is_finite() && c > 0.0);
        assert!(c < 100.0, "normal constant {c} unexpectedly large");
    }

    #[test]
    fn test_domain_rejects_blowup_amplitude_and_rough_modulus() {
        let m = Modulus::power(0.5).unwrap();
        assert!(matches!(
            make_test_domain(&m, 5.0, 8),
            Err(Error::Amplitude(_))
        ));
        let rough: Vec<[f64; 2]> = (0..=45)
            .rev()
            .map(|j| {
                let t = f64::powi(0.5, j);
                [t, 1.0 / (1.0 - t.ln())]
            })
            .collect();
        let rough = Modulus::tabulated(rough).unwrap();
        assert!(matches!(
            make_test_domain(&rough, 0.2, 8),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn opposite_amplitudes_give_equal_areas_with_quadratic_defect() {
        // area(±a) = π + (π/2)·a²·Σc_k² exactly for trig-polynomial
        // profiles, so the two signs agree and the deviation from the disk
        // area is exactly quadratic in a.
        let m = Modulus::power(0.5).unwrap();
        let a = 0.2;
        let plus = make_test_domain(&m, a, 8).unwrap().area();
        let minus = make_test_domain(&m, -a, 8).unwrap().area();
        let base = make_test_domain(&m, 0.0, 8).unwrap().area();
        assert_relative_eq!(plus, minus, max_relative = 1e-12);
        let coeff_energy: f64 = (1..=8)
            .map(|k| {
                let t = f64::powi(0.5, k);
                let c = a * t * m.eval(t).unwrap();
                c * c
            })
            .sum();
        let defect = plus + minus - 2.0 * base;
        assert_relative_eq!(
            defect,
            std::f64::consts::PI * coeff_energy,
            max_relative = 1e-9
        );
        assert!(defect <= 0.5 * a * a);
    }

    #[test]
    fn domain_spec_json_round_trip() {
        let spec = DomainSpec::from_json(r#"{"kind":"disk","radius":1.0}"#).unwrap();
        let d = spec.build().unwrap();
        assert_eq!(d.r_max(), 1.0);

        let spec = DomainSpec::from_json(
            r#"{"kind":"star","amplitude":0.2,"depth":8,"modulus":{"family":"power","alpha":0.5}}"#,
        )
        .unwrap();
        let d = spec.build().unwrap();
        assert!(d.r_min() > 0.8);
        let round = DomainSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(spec, round);
    }
}
