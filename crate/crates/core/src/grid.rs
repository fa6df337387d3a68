//! Complex-valued samples on a uniform square grid.
//!
//! Values live at cell centers of an n×n partition (n a power of two) of an
//! axis-aligned box, in row-major order: index i·n + j addresses row i
//! (imaginary axis) and column j (real axis). The file format is CSV with a
//! header line carrying `n,side,center_re,center_im` followed by n² lines
//! `i,j,re,im` in row-major order.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{PlanarDomain, Square};

/// Samples of a complex-valued function at the cell centers of a square grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    bbox: Square,
    n: usize,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(bbox: Square, n: usize, values: Vec<Complex64>) -> Result<Self> {
        Self::validate_n(n)?;
        if values.len() != n * n {
            return Err(Error::Domain(format!(
                "value buffer holds {} samples, expected {}",
                values.len(),
                n * n
            )));
        }
        Ok(GridFunction { bbox, n, values })
    }

    pub fn zeros(bbox: Square, n: usize) -> Result<Self> {
        Self::validate_n(n)?;
        Ok(GridFunction {
            bbox,
            n,
            values: vec![Complex64::new(0.0, 0.0); n * n],
        })
    }

    /// Sample `f` at all cell centers.
    pub fn from_fn(
        bbox: Square,
        n: usize,
        f: impl Fn(Complex64) -> Complex64 + Sync,
    ) -> Result<Self> {
        Self::validate_n(n)?;
        let mut values = vec![Complex64::new(0.0, 0.0); n * n];
        let h = bbox.side / n as f64;
        let x0 = bbox.center.re - 0.5 * bbox.side;
        let y0 = bbox.center.im - 0.5 * bbox.side;
        values.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
            let y = y0 + (i as f64 + 0.5) * h;
            for (j, v) in row.iter_mut().enumerate() {
                *v = f(Complex64::new(x0 + (j as f64 + 0.5) * h, y));
            }
        });
        Ok(GridFunction { bbox, n, values })
    }

    fn validate_n(n: usize) -> Result<()> {
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::Domain(format!(
                "grid resolution must be a power of two ≥ 2, got {n}"
            )));
        }
        Ok(())
    }

    pub fn bounding_box(&self) -> Square {
        self.bbox
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Cell spacing h = side / n.
    pub fn spacing(&self) -> f64 {
        self.bbox.side / self.n as f64
    }

    /// Center of cell (row i, column j).
    pub fn cell_center(&self, i: usize, j: usize) -> Complex64 {
        let h = self.spacing();
        Complex64::new(
            self.bbox.center.re - 0.5 * self.bbox.side + (j as f64 + 0.5) * h,
            self.bbox.center.im - 0.5 * self.bbox.side + (i as f64 + 0.5) * h,
        )
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.values[i * self.n + j] = v;
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    /// χ_Ω f: zero all cells whose centers lie outside the domain.
    pub fn masked(&self, domain: &PlanarDomain) -> GridFunction {
        let mut out = self.clone();
        out.values
            .par_chunks_mut(self.n)
            .enumerate()
            .for_each(|(i, row)| {
                for (j, v) in row.iter_mut().enumerate() {
                    if !domain.contains(self.cell_center(i, j)) {
                        *v = Complex64::new(0.0, 0.0);
                    }
                }
            });
        out
    }

    /// True iff every nonzero sample sits in the concentric half-side box
    /// (the support condition required by the padded spectral transform).
    pub fn supported_in_middle_half(&self) -> bool {
        let quarter = 0.25 * self.bbox.side;
        for i in 0..self.n {
            for j in 0..self.n {
                let v = self.get(i, j);
                if v != Complex64::new(0.0, 0.0) {
                    let z = self.cell_center(i, j);
                    if (z.re - self.bbox.center.re).abs() > quarter
                        || (z.im - self.bbox.center.im).abs() > quarter
                    {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Discrete L² norm sqrt(Σ |f|²·h²).
    pub fn l2_norm(&self) -> f64 {
        let h = self.spacing();
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt() * h
    }

    /// Mean of the samples.
    pub fn mean(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.values.len() as f64
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// Bilinear interpolation between cell centers; queries outside the
    /// center lattice clamp to the nearest cell.
    pub fn bilinear(&self, z: Complex64) -> Complex64 {
        let h = self.spacing();
        let fx = (z.re - (self.bbox.center.re - 0.5 * self.bbox.side)) / h - 0.5;
        let fy = (z.im - (self.bbox.center.im - 0.5 * self.bbox.side)) / h - 0.5;
        let top = (self.n - 1) as f64;
        let fx = fx.clamp(0.0, top);
        let fy = fy.clamp(0.0, top);
        let j0 = (fx.floor() as usize).min(self.n - 2);
        let i0 = (fy.floor() as usize).min(self.n - 2);
        let tx = fx - j0 as f64;
        let ty = fy - i0 as f64;
        let v00 = self.get(i0, j0);
        let v01 = self.get(i0, j0 + 1);
        let v10 = self.get(i0 + 1, j0);
        let v11 = self.get(i0 + 1, j0 + 1);
        v00 * ((1.0 - tx) * (1.0 - ty))
            + v01 * (tx * (1.0 - ty))
            + v10 * ((1.0 - tx) * ty)
            + v11 * (tx * ty)
    }

    /// Serialize in the grid CSV format.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.n * self.n * 24 + 64);
        out.push_str(&format!(
            "{},{},{},{}\n",
            self.n, self.bbox.side, self.bbox.center.re, self.bbox.center.im
        ));
        for i in 0..self.n {
            for j in 0..self.n {
                let v = self.get(i, j);
                out.push_str(&format!("{i},{j},{},{}\n", v.re, v.im));
            }
        }
        out
    }

    /// Parse the grid CSV format. A literal column-name line
    /// (`n,side,center_re,center_im`) before the numeric header is tolerated.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let mut header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty grid file".into()))?;
        if header.trim().eq_ignore_ascii_case("n,side,center_re,center_im") {
            header = lines
                .next()
                .ok_or_else(|| Error::Parse("grid file has only a column-name line".into()))?;
        }
        let fields = split4(header)?;
        let n = fields[0]
            .parse::<usize>()
            .map_err(|e| Error::Parse(format!("grid header n: {e}")))?;
        let side = parse_f64(fields[1], "grid header side")?;
        let center = Complex64::new(
            parse_f64(fields[2], "grid header center_re")?,
            parse_f64(fields[3], "grid header center_im")?,
        );
        if !(side > 0.0) {
            return Err(Error::Parse(format!("grid side must be positive, got {side}")));
        }
        Self::validate_n(n)?;
        let mut values = vec![Complex64::new(f64::NAN, f64::NAN); n * n];
        let mut filled = 0usize;
        for line in lines {
            let fields = split4(line)?;
            let i = fields[0]
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("grid row index: {e}")))?;
            let j = fields[1]
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("grid column index: {e}")))?;
            if i >= n || j >= n {
                return Err(Error::Parse(format!(
                    "cell ({i},{j}) outside {n}×{n} grid"
                )));
            }
            let slot = &mut values[i * n + j];
            if !slot.re.is_nan() {
                return Err(Error::Parse(format!("cell ({i},{j}) listed twice")));
            }
            *slot = Complex64::new(
                parse_f64(fields[2], "cell re")?,
                parse_f64(fields[3], "cell im")?,
            );
            filled += 1;
        }
        if filled != n * n {
            return Err(Error::Parse(format!(
                "grid file lists {filled} cells, expected {}",
                n * n
            )));
        }
        GridFunction::new(Square::new(center, side), n, values)
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_csv(&text)
    }
}

fn split4(line: &str) -> Result<[&str; 4]> {
    let mut it = line.split(',');
    let out = [
        it.next().unwrap_or("").trim(),
        it.next().unwrap_or("").trim(),
        it.next()
            .ok_or_else(|| Error::Parse(format!("expected 4 comma-separated fields: {line:?}")))?
            .trim(),
        it.next()
            .ok_or_else(|| Error::Parse(format!("expected 4 comma-separated fields: {line:?}")))?
            .trim(),
    ];
    if it.next().is_some() {
        return Err(Error::Parse(format!(
            "expected exactly 4 comma-separated fields: {line:?}"
        )));
    }
    Ok(out)
}

fn parse_f64(field: &str, what: &str) -> Result<f64> {
    field
        .parse::<f64>()
        .map_err(|e| Error::Parse(format!("{what}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn centered_box(side: f64) -> Square {
        Square::new(Complex64::new(0.0, 0.0), side)
    }

    #[test]
    fn cell_centers_tile_the_box() {
        let g = GridFunction::zeros(centered_box(4.0), 4).unwrap();
        assert_eq!(g.spacing(), 1.0);
        assert_eq!(g.cell_center(0, 0), Complex64::new(-1.5, -1.5));
        assert_eq!(g.cell_center(3, 3), Complex64::new(1.5, 1.5));
        assert_eq!(g.cell_center(0, 3), Complex64::new(1.5, -1.5));
    }

    #[test]
    fn rejects_bad_resolutions_and_buffers() {
        assert!(GridFunction::zeros(centered_box(1.0), 3).is_err());
        assert!(GridFunction::zeros(centered_box(1.0), 0).is_err());
        assert!(GridFunction::new(centered_box(1.0), 4, vec![Complex64::new(0.0, 0.0); 15]).is_err());
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut g = GridFunction::zeros(centered_box(2.5), 8).unwrap();
        for v in g.values_mut() {
            *v = Complex64::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
        }
        let round = GridFunction::from_csv(&g.to_csv()).unwrap();
        assert_eq!(round.n(), g.n());
        assert_eq!(round.bounding_box(), g.bounding_box());
        for (a, b) in g.values().iter().zip(round.values()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }

    #[test]
    fn csv_parser_tolerates_column_name_line() {
        let g = GridFunction::zeros(centered_box(1.0), 2).unwrap();
        let named = format!("n,side,center_re,center_im\n{}", g.to_csv());
        let round = GridFunction::from_csv(&named).unwrap();
        assert_eq!(round, g);
    }

    #[test]
    fn csv_parser_rejects_malformed_input() {
        assert!(GridFunction::from_csv("").is_err());
        assert!(GridFunction::from_csv("2,1,0,0\n0,0,1,0\n").is_err()); // missing cells
        assert!(GridFunction::from_csv("2,1,0,0\n0,0,x,0\n").is_err());
        let g = GridFunction::zeros(centered_box(1.0), 2).unwrap();
        let dup = format!("{}0,0,0,0\n", g.to_csv());
        assert!(GridFunction::from_csv(&dup).is_err());
    }

    #[test]
    fn masking_zeroes_outside_the_domain() {
        let d = PlanarDomain::disk(1.0).unwrap();
        let ones = GridFunction::from_fn(centered_box(4.0), 64, |_| Complex64::new(1.0, 0.0))
            .unwrap();
        let masked = ones.masked(&d);
        for i in 0..64 {
            for j in 0..64 {
                let z = masked.cell_center(i, j);
                let expected = if z.norm() < 1.0 { 1.0 } else { 0.0 };
                assert_eq!(masked.get(i, j).re, expected, "cell ({i},{j}) at {z}");
            }
        }
    }

    #[test]
    fn middle_half_support_check() {
        let bump = GridFunction::from_fn(centered_box(4.0), 64, |z| {
            if z.norm() < 0.9 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .unwrap();
        assert!(bump.supported_in_middle_half());
        let shifted = GridFunction::from_fn(centered_box(4.0), 64, |z| {
            if (z - Complex64::new(1.5, 0.0)).norm() < 0.9 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .unwrap();
        assert!(!shifted.supported_in_middle_half());
    }

    #[test]
    fn l2_norm_of_unit_constant_is_box_side() {
        let g = GridFunction::from_fn(centered_box(1.0), 32, |_| Complex64::new(1.0, 0.0))
            .unwrap();
        assert_relative_eq!(g.l2_norm(), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn bilinear_reproduces_affine_functions() {
        let f = |z: Complex64| Complex64::new(2.0 * z.re + 3.0 * z.im + 0.5, z.re - z.im);
        let g = GridFunction::from_fn(centered_box(2.0), 32, f).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            // Stay inside the cell-center lattice where interpolation is exact.
            let z = Complex64::new(rng.random_range(-0.9..0.9), rng.random_range(-0.9..0.9));
            let v = g.bilinear(z);
            let want = f(z);
            assert_relative_eq!(v.re, want.re, epsilon = 1e-12);
            assert_relative_eq!(v.im, want.im, epsilon = 1e-12);
        }
    }
}
