//! Moduli of continuity: evaluation, Dini integrals, regularity
//! diagnostics, and the conjugate modulus.
//!
//! A modulus ω is a non-decreasing function on (0, T] with ω(t) → 0 as
//! t → 0⁺. Three families are supported:
//!
//! * `power`: ω(t) = t^α, 0 < α < 1;
//! * `log`: ω(t) = (log(e/t))^{-1-β}, β > 0;
//! * `tabulated`: monotone piecewise-linear interpolation of knot values,
//!   with a power law fitted to the two smallest knots below the knot range.
//!
//! Regularity is certified empirically: the Dini integral ∫₀ ω(t)/t dt, the
//! almost-decreasing constant of ω(t)/t^ε over a geometric probe grid, and
//! the weak integral constant sup_x x∫ₓ^T ω(t)/t² dt / ω(x).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Depth of the geometric probe grids t = T·2^{-j} used by the regularity
/// diagnostics.
pub const PROBE_DEPTH: u32 = 30;

/// Number of dyadic shells integrated before the Dini integral's tail is
/// classified as convergent or divergent.
const DINI_SHELLS: usize = 40;

/// Shell sequences whose empirical polynomial decay order falls at or below
/// this threshold are declared divergent: ω ≍ 1/log(e/t) produces shells
/// ~ k⁻¹ (order 1, divergent) while (log(e/t))^{-1-β} produces ~ k^{-1-β}.
const DINI_DIVERGENCE_ORDER: f64 = 1.10;

/// Relative tolerance for the convergent tail of improper integrals.
const QUAD_RTOL: f64 = 1e-9;

fn default_cap() -> f64 {
    1.0
}

/// A modulus of continuity on (0, cap].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Modulus {
    Power {
        alpha: f64,
        #[serde(default = "default_cap")]
        cap: f64,
    },
    Log {
        beta: f64,
        #[serde(default = "default_cap")]
        cap: f64,
    },
    Tabulated {
        /// `[t, value]` pairs with strictly increasing t > 0 and
        /// non-decreasing values ≥ 0.
        knots: Vec<[f64; 2]>,
    },
}

/// Empirical regularity certificate for a modulus at a given ε.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularityReport {
    /// ∫₀^T ω(t)/t dt, or +∞ when the shell integrals do not decay.
    pub dini_value: f64,
    /// The ε the almost-decreasing quotient ω(t)/t^ε was probed with.
    pub epsilon: f64,
    /// Smallest constant C with ω(t)/t^ε ≤ C·ω(s)/s^ε over the probe grid
    /// (≥ 1 by the coincidence limit t → s); +∞ when the grid constant keeps
    /// growing as the grid deepens.
    pub almost_dec_constant: f64,
    /// Smallest constant C with x∫ₓ^T ω(t)/t² dt ≤ C·ω(x) over the probe
    /// grid.
    pub weak_constant: f64,
    pub is_regular: bool,
}

impl Modulus {
    /// ω(t) = t^α on (0, 1].
    pub fn power(alpha: f64) -> Result<Self> {
        Self::power_with_cap(alpha, default_cap())
    }

    /// ω(t) = t^α on (0, cap].
    pub fn power_with_cap(alpha: f64, cap: f64) -> Result<Self> {
        let m = Modulus::Power { alpha, cap };
        m.validate()?;
        Ok(m)
    }

    /// ω(t) = (log(e/t))^{-1-β} on (0, 1].
    pub fn log_family(beta: f64) -> Result<Self> {
        Self::log_with_cap(beta, default_cap())
    }

    /// ω(t) = (log(e/t))^{-1-β} on (0, cap], cap < e (monotonicity fails
    /// beyond).
    pub fn log_with_cap(beta: f64, cap: f64) -> Result<Self> {
        let m = Modulus::Log { beta, cap };
        m.validate()?;
        Ok(m)
    }

    /// Piecewise-linear modulus through `[t, value]` knots.
    pub fn tabulated(knots: Vec<[f64; 2]>) -> Result<Self> {
        let m = Modulus::Tabulated { knots };
        m.validate()?;
        Ok(m)
    }

    /// Parse a `{"family": ...}` JSON spec and validate it.
    pub fn from_json(text: &str) -> Result<Self> {
        let m: Modulus =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("modulus spec: {e}")))?;
        m.validate()?;
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("modulus serialization cannot fail")
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Modulus::Power { alpha, cap } => {
                if !(*alpha > 0.0 && *alpha < 1.0) {
                    return Err(Error::Domain(format!(
                        "power modulus needs alpha in (0,1), got {alpha}"
                    )));
                }
                if !(*cap > 0.0 && cap.is_finite()) {
                    return Err(Error::Domain(format!("modulus cap must be positive, got {cap}")));
                }
            }
            Modulus::Log { beta, cap } => {
                if !(*beta > 0.0 && beta.is_finite()) {
                    return Err(Error::Domain(format!(
                        "log modulus needs beta > 0, got {beta}"
                    )));
                }
                if !(*cap > 0.0 && *cap < std::f64::consts::E) {
                    return Err(Error::Domain(format!(
                        "log modulus cap must lie in (0, e) to stay monotone, got {cap}"
                    )));
                }
            }
            Modulus::Tabulated { knots } => {
                if knots.len() < 2 {
                    return Err(Error::Domain(
                        "tabulated modulus needs at least 2 knots".into(),
                    ));
                }
                for w in knots.windows(2) {
                    if !(w[0][0] < w[1][0]) {
                        return Err(Error::Domain(format!(
                            "tabulated knots must have strictly increasing t: {} !< {}",
                            w[0][0], w[1][0]
                        )));
                    }
                    if w[0][1] > w[1][1] {
                        return Err(Error::Domain(format!(
                            "tabulated knot values must be non-decreasing: {} > {}",
                            w[0][1], w[1][1]
                        )));
                    }
                }
                if knots[0][0] <= 0.0 {
                    return Err(Error::Domain("tabulated knots need t > 0".into()));
                }
                if knots[0][1] < 0.0 {
                    return Err(Error::Domain("tabulated knot values must be ≥ 0".into()));
                }
            }
        }
        Ok(())
    }

    /// Upper end T of the evaluation domain (0, T].
    pub fn cap(&self) -> f64 {
        match self {
            Modulus::Power { cap, .. } | Modulus::Log { cap, .. } => *cap,
            Modulus::Tabulated { knots } => knots.last().expect("validated")[0],
        }
    }

    /// ω(t) for t ∈ (0, T].
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) || t > self.cap() {
            return Err(Error::Domain(format!(
                "modulus evaluated at t = {t} outside (0, {}]",
                self.cap()
            )));
        }
        Ok(self.eval_raw(t))
    }

    /// ω(min(t, T)) for t > 0: the flat extension used by square sweeps whose
    /// coarsest scale can exceed the cap. A modulus stays a modulus under
    /// constant continuation, and every supremum of interest lives at scales
    /// within the cap.
    pub fn eval_capped(&self, t: f64) -> f64 {
        assert!(t > 0.0, "eval_capped needs t > 0");
        self.eval_raw(t.min(self.cap()))
    }

    /// ω(t) without the domain check (t assumed in (0, T]).
    fn eval_raw(&self, t: f64) -> f64 {
        match self {
            Modulus::Power { alpha, .. } => t.powf(*alpha),
            // log(e/t) = 1 - ln t, exact at t = 1.
            Modulus::Log { beta, .. } => (1.0 - t.ln()).powf(-(1.0 + beta)),
            Modulus::Tabulated { knots } => tabulated_eval(knots, t),
        }
    }

    /// ω(e^{ln_t}): evaluation through the logarithm of the argument, for
    /// quadrature tails where t itself underflows f64.
    fn eval_ln_arg(&self, ln_t: f64) -> f64 {
        match self {
            Modulus::Power { alpha, .. } => (alpha * ln_t).exp(),
            Modulus::Log { beta, .. } => (1.0 - ln_t).powf(-(1.0 + beta)),
            Modulus::Tabulated { knots } => {
                let t0 = knots[0][0];
                if ln_t >= t0.ln() {
                    tabulated_eval(knots, ln_t.exp())
                } else {
                    let (p, v0) = tail_power_law(knots);
                    if v0 == 0.0 {
                        0.0
                    } else {
                        v0 * (p * (ln_t - t0.ln())).exp()
                    }
                }
            }
        }
    }

    /// ∫₀^upper ω(t)/t dt by dyadic shells with a 16-point Gauss-Legendre
    /// rule per shell. Returns +∞ when the shell sequence's decay order over
    /// the first 40 shells is too slow for a summable tail (order ≤ ~1.1,
    /// which catches ω ≍ 1/log(e/t) and anything flatter); otherwise the
    /// remaining tail is integrated over geometric shells in u = log(e·upper/t)
    /// until it is negligible at relative tolerance ~1e-9.
    pub fn dini_integral(&self, upper: f64) -> Result<f64> {
        if !(upper > 0.0) || upper > self.cap() {
            return Err(Error::Domain(format!(
                "Dini integral upper limit {upper} outside (0, {}]",
                self.cap()
            )));
        }
        let mut shells = [0.0f64; DINI_SHELLS];
        let mut total = 0.0;
        for (k, s) in shells.iter_mut().enumerate() {
            let b = upper * f64::powi(0.5, k as i32);
            let a = 0.5 * b;
            *s = gl16(a, b, |t| self.eval_raw(t) / t);
            total += *s;
        }
        if !total.is_finite() {
            return Err(Error::Numerical(
                "Dini shell quadrature produced non-finite values".into(),
            ));
        }
        let (k1, k2) = self.dini_fit_shells(upper);
        let (s1, s2) = (shells[k1], shells[k2]);
        if s2 > 0.0 {
            if s1 <= 0.0 {
                return Err(Error::Numerical(
                    "Dini shells are not monotone in sign".into(),
                ));
            }
            // Empirical decay order p of s_k ~ (a + k)^{-p} between two deep
            // shells, where a anchors the shell index to the absolute scale
            // log(e/t) (shell k lives at log(e/t) ≈ (a + k)·log 2). Without
            // the offset, slowly varying moduli integrated from a small upper
            // limit would look artificially flat.
            let a = (1.0 - upper.ln()) / std::f64::consts::LN_2 + 0.5;
            let order = (s1 / s2).ln() / ((a + k2 as f64) / (a + k1 as f64)).ln();
            if order <= DINI_DIVERGENCE_ORDER {
                return Ok(f64::INFINITY);
            }
            total += self.dini_tail(upper)?;
        }
        Ok(total)
    }

    /// Shell indices for the divergence-order fit. The analytic families are
    /// trustworthy at any depth, so the fit uses the deepest shells (30, 39).
    /// A tabulation only carries information down to its smallest knot;
    /// below it evaluation is a fitted power-law tail whose decay would mask
    /// a divergent data trend, so the fit stays within the knot range when
    /// the knots stop short of shell 39.
    fn dini_fit_shells(&self, upper: f64) -> (usize, usize) {
        if let Modulus::Tabulated { knots } = self {
            let depth = (upper / knots[0][0]).log2().floor() as i64 - 1;
            let k2 = depth.clamp(9, DINI_SHELLS as i64 - 1) as usize;
            return (k2 - 9, k2);
        }
        (30, DINI_SHELLS - 1)
    }

    /// Tail ∫ over t ∈ (0, upper·2^{-40}) via u = log(e·upper/t): geometric
    /// shells [u₀·2^j, u₀·2^{j+1}] on which both built-in families decay
    /// geometrically.
    fn dini_tail(&self, upper: f64) -> Result<f64> {
        let ln_upper = upper.ln();
        let u0 = 1.0 + DINI_SHELLS as f64 * std::f64::consts::LN_2;
        let g = |u: f64| self.eval_ln_arg(ln_upper + 1.0 - u);
        let mut tail = 0.0;
        let mut prev = f64::INFINITY;
        let mut non_decaying = 0u32;
        for j in 0..64 {
            let a = u0 * f64::powi(2.0, j);
            let b = 2.0 * a;
            let s = gl16(a, b, g);
            tail += s;
            if s >= prev && s > 0.0 {
                non_decaying += 1;
                if non_decaying >= 3 {
                    return Ok(f64::INFINITY);
                }
            } else {
                non_decaying = 0;
            }
            if s <= QUAD_RTOL * tail.max(f64::MIN_POSITIVE) && s < prev {
                return Ok(tail);
            }
            prev = s;
        }
        Err(Error::Numerical(
            "Dini tail did not converge within 64 geometric shells".into(),
        ))
    }

    /// Smallest empirical C with ω(t)/t^ε ≤ C·ω(s)/s^ε over the geometric
    /// probe grid {T·2^{-j}, 0 ≤ j ≤ depth}, pairs t > s. Always ≥ 1 (the
    /// coincidence limit).
    pub fn almost_dec_constant(&self, epsilon: f64, depth: u32) -> Result<f64> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::Domain(format!("epsilon must be in (0,1), got {epsilon}")));
        }
        let cap = self.cap();
        let q: Vec<f64> = (0..=depth)
            .map(|j| {
                let t = cap * f64::powi(0.5, j as i32);
                self.eval_raw(t) / t.powf(epsilon)
            })
            .collect();
        let mut c: f64 = 1.0;
        for j in 0..q.len() {
            for k in (j + 1)..q.len() {
                if q[k] > 0.0 {
                    c = c.max(q[j] / q[k]);
                }
            }
        }
        if !c.is_finite() {
            return Err(Error::Numerical(
                "almost-decreasing probe produced non-finite quotients".into(),
            ));
        }
        Ok(c)
    }

    /// Smallest empirical C with x·∫ₓ^T ω(t)/t² dt ≤ C·ω(x) over the probe
    /// grid x = T·2^{-j}, 1 ≤ j ≤ 30.
    pub fn weak_constant(&self) -> Result<f64> {
        let cap = self.cap();
        let mut c: f64 = 0.0;
        for j in 1..=PROBE_DEPTH {
            let x = cap * f64::powi(0.5, j as i32);
            let integral = self.integral_omega_over_t2(x, cap);
            c = c.max(x * integral / self.eval_raw(x));
        }
        if !c.is_finite() {
            return Err(Error::Numerical(
                "weak-constant probe produced non-finite quotients".into(),
            ));
        }
        Ok(c)
    }

    /// ∫_a^b ω(t)/t² dt over upward dyadic shells (proper integral, a > 0).
    fn integral_omega_over_t2(&self, a: f64, b: f64) -> f64 {
        let mut lo = a;
        let mut total = 0.0;
        while lo < b {
            let hi = (2.0 * lo).min(b);
            total += gl16(lo, hi, |t| self.eval_raw(t) / (t * t));
            lo = hi;
        }
        total
    }

    /// Regularity certificate: Dini value, almost-decreasing constant at ε,
    /// and the weak integral constant. The almost-decreasing constant is
    /// reported as +∞ when deepening the probe grid from 10 to 30 grows it
    /// by more than 10× (the empirical signature of an unbounded quotient).
    pub fn check_regular(&self, epsilon: f64) -> Result<RegularityReport> {
        let dini_value = self.dini_integral(self.cap())?;
        let c10 = self.almost_dec_constant(epsilon, 10)?;
        let c30 = self.almost_dec_constant(epsilon, PROBE_DEPTH)?;
        let almost_dec_constant = if c30 > 10.0 * c10 { f64::INFINITY } else { c30 };
        let weak_constant = self.weak_constant()?;
        Ok(RegularityReport {
            dini_value,
            epsilon,
            almost_dec_constant,
            weak_constant,
            is_regular: dini_value.is_finite() && almost_dec_constant.is_finite(),
        })
    }

    /// The conjugate modulus ω̃(x) = ∫₀ˣ ω(t)/t dt + x·∫ₓ¹ ω(t)/t² dt,
    /// tabulated on the geometric grid x = 2^{-j}, j = 0..30.
    ///
    /// Requires a Dini-smooth modulus with cap ≥ 1 (the second integral runs
    /// to 1).
    pub fn conjugate(&self) -> Result<Modulus> {
        if self.cap() < 1.0 {
            return Err(Error::Precondition(format!(
                "conjugate needs a modulus cap ≥ 1, got {}",
                self.cap()
            )));
        }
        if !self.dini_integral(self.cap())?.is_finite() {
            return Err(Error::Precondition(
                "conjugate needs a Dini-smooth modulus".into(),
            ));
        }
        let mut knots = Vec::with_capacity(PROBE_DEPTH as usize + 1);
        let mut prev = 0.0f64;
        for j in (0..=PROBE_DEPTH).rev() {
            let x = f64::powi(0.5, j as i32);
            let first = self.dini_integral(x)?;
            let second = x * self.integral_omega_over_t2(x, 1.0);
            // Monotone by construction; the max guards quadrature wobble.
            let v = (first + second).max(prev);
            knots.push([x, v]);
            prev = v;
        }
        Modulus::tabulated(knots)
    }
}

/// Piecewise-linear evaluation with power-law extrapolation below the
/// smallest knot.
fn tabulated_eval(knots: &[[f64; 2]], t: f64) -> f64 {
    let first = knots[0];
    if t < first[0] {
        let (p, v0) = tail_power_law(knots);
        if v0 == 0.0 {
            return 0.0;
        }
        return v0 * (t / first[0]).powf(p);
    }
    match knots.binary_search_by(|k| k[0].partial_cmp(&t).expect("finite knots")) {
        Ok(i) => knots[i][1],
        Err(i) => {
            // t sits between knots i-1 and i (t ≤ cap guarantees i < len).
            let (a, b) = (knots[i - 1], knots[i]);
            let s = (t - a[0]) / (b[0] - a[0]);
            a[1] + s * (b[1] - a[1])
        }
    }
}

/// Exponent and level of the power law v₀·(t/t₀)^p through the two smallest
/// knots; a flat pair degrades to a constant (p = 0).
fn tail_power_law(knots: &[[f64; 2]]) -> (f64, f64) {
    let (k0, k1) = (knots[0], knots[1]);
    if k0[1] <= 0.0 {
        return (0.0, 0.0);
    }
    let p = (k1[1] / k0[1]).ln() / (k1[0] / k0[0]).ln();
    if p.is_finite() {
        (p.max(0.0), k0[1])
    } else {
        (0.0, k0[1])
    }
}

/// 16-point Gauss-Legendre nodes on (0,1) (positive half mirrored) and
/// weights summing to 2 on [-1,1].
const GL16_NODES: [f64; 8] = [
    0.0950125098376374,
    0.2816035507792589,
    0.4580167776572274,
    0.6178762444026438,
    0.7554044083550030,
    0.8656312023878318,
    0.9445750230732326,
    0.9894009349916499,
];
const GL16_WEIGHTS: [f64; 8] = [
    0.1894506104550685,
    0.1826034150449236,
    0.1691565193950025,
    0.1495959888165767,
    0.1246289712555339,
    0.0951585116824928,
    0.0622535239386479,
    0.0271524594117541,
];

/// ∫_a^b f via the 16-point Gauss-Legendre rule.
fn gl16(a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for i in 0..8 {
        let dx = half * GL16_NODES[i];
        acc += GL16_WEIGHTS[i] * (f(mid - dx) + f(mid + dx));
    }
    acc * half
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Closed form of the conjugate of t^α: x^α/α + (x^α − x)/(1−α).
    fn power_conjugate_oracle(alpha: f64, x: f64) -> f64 {
        x.powf(alpha) / alpha + (x.powf(alpha) - x) / (1.0 - alpha)
    }

    #[test]
    fn power_eval_closed_form() {
        let m = Modulus::power(0.5).unwrap();
        assert_relative_eq!(m.eval(0.25).unwrap(), 0.5, max_relative = 1e-15);
        assert_relative_eq!(m.eval(1.0).unwrap(), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn log_eval_closed_form() {
        let m = Modulus::log_family(1.0).unwrap();
        // (log e)^{-2} = 1 exactly.
        assert_eq!(m.eval(1.0).unwrap(), 1.0);
        let t: f64 = 0.1;
        assert_relative_eq!(
            m.eval(t).unwrap(),
            (1.0 - t.ln()).powi(-2),
            max_relative = 1e-14
        );
    }

    #[test]
    fn tabulated_eval_is_monotone_interpolation() {
        let m = Modulus::tabulated(vec![[0.1, 0.3], [0.2, 0.5]]).unwrap();
        let v = m.eval(0.15).unwrap();
        assert!((0.3..=0.5).contains(&v), "interpolant {v} escaped knot range");
        assert_relative_eq!(v, 0.4, max_relative = 1e-12); // linear oracle
    }

    #[test]
    fn eval_domain_errors() {
        let m = Modulus::power(0.5).unwrap();
        assert!(matches!(m.eval(-1.0), Err(Error::Domain(_))));
        assert!(matches!(m.eval(0.0), Err(Error::Domain(_))));
        assert!(matches!(m.eval(m.cap() + 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn small_t_decay_of_built_in_families() {
        // ω(T·2^{-30}) ≪ ω(T) for representative instances. (The log family
        // with small β decays too slowly for any fixed 10⁻³-style bound;
        // β = 2 is the representative that clears it.)
        for m in [
            Modulus::power(0.5).unwrap(),
            Modulus::power(0.7).unwrap(),
            Modulus::log_family(2.0).unwrap(),
        ] {
            let cap = m.cap();
            let small = m.eval(cap * f64::powi(0.5, 30)).unwrap();
            assert!(
                small < 1e-3 * m.eval(cap).unwrap(),
                "{m:?}: ω at 2^-30 = {small} did not decay"
            );
        }
    }

    #[test]
    fn dini_integral_power_matches_antiderivative() {
        // ∫₀¹ t^{α-1} dt = 1/α.
        let m = Modulus::power(0.5).unwrap();
        let v = m.dini_integral(1.0).unwrap();
        assert_relative_eq!(v, 2.0, epsilon = 1e-6);

        let m = Modulus::power(0.3).unwrap();
        assert_relative_eq!(m.dini_integral(1.0).unwrap(), 1.0 / 0.3, max_relative = 1e-7);
        // Partial integrals too: ∫₀^x = x^α/α.
        assert_relative_eq!(
            m.dini_integral(0.125).unwrap(),
            0.125f64.powf(0.3) / 0.3,
            max_relative = 1e-7
        );
    }

    #[test]
    fn dini_integral_log_matches_antiderivative() {
        // ∫₀¹ (log(e/t))^{-1-β} dt/t = 1/β.
        let m = Modulus::log_family(1.0).unwrap();
        assert_relative_eq!(m.dini_integral(1.0).unwrap(), 1.0, epsilon = 1e-6);
        let m = Modulus::log_family(0.5).unwrap();
        assert_relative_eq!(m.dini_integral(1.0).unwrap(), 2.0, max_relative = 1e-6);
    }

    #[test]
    fn dini_integral_declares_divergence_for_inverse_log() {
        // Knots sampling ω(t) = 1/log(e/t) = 1/(1 - ln t) down to 2^{-45}:
        // the shell integrals decay like 1/k, which is not summable.
        let knots: Vec<[f64; 2]> = (0..=45)
            .rev()
            .map(|j| {
                let t = f64::powi(0.5, j);
                [t, 1.0 / (1.0 - t.ln())]
            })
            .collect();
        let m = Modulus::tabulated(knots).unwrap();
        assert_eq!(m.dini_integral(1.0).unwrap(), f64::INFINITY);
    }

    #[test]
    fn almost_decreasing_constant_power() {
        // t^{α-ε} is decreasing for ε > α, so the grid constant is the
        // coincidence value 1.
        let m = Modulus::power(0.5).unwrap();
        assert_eq!(m.almost_dec_constant(0.75, PROBE_DEPTH).unwrap(), 1.0);
    }

    #[test]
    fn almost_decreasing_negative_control_grows_with_depth() {
        // For ε < α the quotient t^{α-ε} increases without bound along the
        // probe grid, so deepening the grid must inflate the constant.
        let m = Modulus::power(0.5).unwrap();
        let c10 = m.almost_dec_constant(0.25, 10).unwrap();
        let c30 = m.almost_dec_constant(0.25, 30).unwrap();
        assert!(
            c30 > 10.0 * c10,
            "expected unbounded growth, got c10={c10}, c30={c30}"
        );
        let report = m.check_regular(0.25).unwrap();
        assert!(report.almost_dec_constant.is_infinite());
        assert!(!report.is_regular);
    }

    #[test]
    fn weak_constant_power_closed_form() {
        // x∫ₓ¹ t^{α-2} dt / x^α = (1 - x^{1-α})/(1-α) → 1/(1-α) = 2.
        let m = Modulus::power(0.5).unwrap();
        let w = m.weak_constant().unwrap();
        assert!((w - 2.0).abs() <= 0.01, "weak constant {w} not 2 ± 0.01");
    }

    #[test]
    fn check_regular_log_family() {
        let report = Modulus::log_family(1.0).unwrap().check_regular(0.5).unwrap();
        assert_relative_eq!(report.dini_value, 1.0, epsilon = 1e-6);
        assert!(report.almost_dec_constant.is_finite());
        assert!(report.is_regular);
        // The checkable direction of the (1.1) ⟺ (2.1) equivalence.
        assert!(
            report.weak_constant
                <= 4.0 * report.almost_dec_constant / (1.0 - report.epsilon)
        );
    }

    #[test]
    fn conjugate_power_matches_closed_form() {
        let m = Modulus::power(0.5).unwrap();
        let conj = m.conjugate().unwrap();
        assert_relative_eq!(conj.eval(0.25).unwrap(), 1.5, max_relative = 1e-5);
        for j in 0..=30 {
            let x = f64::powi(0.5, j);
            let expected = power_conjugate_oracle(0.5, x);
            assert_relative_eq!(conj.eval(x).unwrap(), expected, max_relative = 1e-5);
        }
    }

    #[test]
    fn conjugate_power_ratio_bounds() {
        // ω̃(x)/x^α = 1/α + (1 - x^{1-α})/(1-α) ∈ [1/α, 1/α + 1/(1-α)].
        for alpha in [0.3, 0.5, 0.7] {
            let conj = Modulus::power(alpha).unwrap().conjugate().unwrap();
            for j in 0..=30 {
                let x = f64::powi(0.5, j);
                let ratio = conj.eval(x).unwrap() / x.powf(alpha);
                assert!(
                    ratio >= 1.0 / alpha - 1e-5
                        && ratio <= 1.0 / alpha + 1.0 / (1.0 - alpha) + 1e-5,
                    "alpha={alpha}, x={x}: ratio {ratio} out of bounds"
                );
            }
        }
    }

    #[test]
    fn conjugate_log_comparable_to_inverse_log() {
        // For β = 1 the first summand integrates to (log(e/x))^{-1} and the
        // second is lower order.
        let conj = Modulus::log_family(1.0).unwrap().conjugate().unwrap();
        for j in 5..=20 {
            let x = f64::powi(0.5, j);
            let ratio = conj.eval(x).unwrap() * (1.0 - x.ln());
            assert!(
                (0.5..=4.0).contains(&ratio),
                "x=2^-{j}: ω̃(x)·log(e/x) = {ratio} escaped [0.5, 4]"
            );
        }
    }

    #[test]
    fn conjugate_vanishes_at_zero_for_fast_moduli() {
        // ω̃(0⁺) = 0; for power moduli (and log with larger β) the decay at
        // 2^{-30} is far below 1% of ω̃(1). Slow log moduli (β ≈ 1) decay
        // like 1/log and need exponentially small x for the same ratio, so
        // they are not asserted here.
        for m in [
            Modulus::power(0.3).unwrap(),
            Modulus::power(0.5).unwrap(),
            Modulus::log_family(2.0).unwrap(),
        ] {
            let conj = m.conjugate().unwrap();
            let tiny = conj.eval(f64::powi(0.5, 30)).unwrap();
            assert!(
                tiny < 1e-2 * conj.eval(1.0).unwrap(),
                "{m:?}: ω̃(2^-30) = {tiny} too large"
            );
        }
    }

    #[test]
    fn conjugate_dominates_partial_dini() {
        let m = Modulus::log_family(1.0).unwrap();
        let conj = m.conjugate().unwrap();
        for j in 0..=30 {
            let x = f64::powi(0.5, j);
            assert!(conj.eval(x).unwrap() >= m.dini_integral(x).unwrap() - 1e-12);
        }
    }

    #[test]
    fn conjugation_is_monotone() {
        // t^0.6 ≤ t^0.4 on (0,1] ⟹ the conjugates are ordered the same way.
        let lo = Modulus::power(0.6).unwrap().conjugate().unwrap();
        let hi = Modulus::power(0.4).unwrap().conjugate().unwrap();
        for j in 0..=30 {
            let x = f64::powi(0.5, j);
            assert!(lo.eval(x).unwrap() <= hi.eval(x).unwrap() + 1e-12);
        }
    }

    #[test]
    fn conjugate_rejects_non_dini_input() {
        let knots: Vec<[f64; 2]> = (0..=45)
            .rev()
            .map(|j| {
                let t = f64::powi(0.5, j);
                [t, 1.0 / (1.0 - t.ln())]
            })
            .collect();
        let m = Modulus::tabulated(knots).unwrap();
        assert!(matches!(m.conjugate(), Err(Error::Precondition(_))));
    }

    #[test]
    fn json_round_trip_and_config_shapes() {
        let m = Modulus::from_json(r#"{"family":"power","alpha":0.5}"#).unwrap();
        assert_eq!(m, Modulus::power(0.5).unwrap());
        let m = Modulus::from_json(r#"{"family":"log","beta":1.0}"#).unwrap();
        assert_eq!(m, Modulus::log_family(1.0).unwrap());
        let m =
            Modulus::from_json(r#"{"family":"tabulated","knots":[[0.1,0.3],[0.2,0.5]]}"#).unwrap();
        assert_eq!(m.cap(), 0.2);
        let round = Modulus::from_json(&m.to_json()).unwrap();
        assert_eq!(m, round);
        assert!(Modulus::from_json(r#"{"family":"power","alpha":1.5}"#).is_err());
    }
}
