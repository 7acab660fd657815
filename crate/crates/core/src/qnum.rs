//! Deformed numbers: the symmetric bracket `[x] = (q^x - q^-x)/(q - q^-1)`.
//!
//! Everything downstream (operator matrix elements, spectra, splittings) is a
//! function of these brackets, so the evaluation here is what makes the q -> 1
//! limit and the q <-> 1/q symmetry exact enough to assert at 1e-12.

use num_complex::Complex64;
use serde::ser::SerializeStruct;

use crate::error::{Error, Result};

/// Complex scalar used for bracket values and matrix entries.
pub type Scalar = Complex64;

/// Where on the complex plane the deformation parameter lives.
///
/// Real positive q is the regime for spectra and fits (brackets are positive
/// for positive arguments, square roots stay real). The unit circle is kept
/// only for scalar bracket identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QRegime {
    RealPositive,
    UnitCircle,
}

impl QRegime {
    pub fn as_str(&self) -> &'static str {
        match self {
            QRegime::RealPositive => "real-positive",
            QRegime::UnitCircle => "unit-circle",
        }
    }
}

/// Below this magnitude of `ln q` (or of the phase angle) the bracket is
/// evaluated by its series in `ln q`; the two paths agree to ~1e-15 relative
/// well on either side of the cut.
const SERIES_CUT: f64 = 1e-6;

/// Denominators up to this bound are scanned by the default root-of-unity
/// guard; higher-order roots pass silently.
pub const DEFAULT_ROOT_BOUND: u32 = 64;

const ROOT_GUARD_TOL: f64 = 1e-12;

/// A validated deformation parameter.
///
/// The bracket is invariant under q -> 1/q, so construction canonicalizes to
/// the representative with q >= 1 (respectively a non-negative phase); the
/// value as given is kept for display and reports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QParam {
    given: Complex64,
    canon: Complex64,
    regime: QRegime,
    /// |ln q| for the real regime, |theta| for the unit circle. Always >= 0.
    mag: f64,
}

impl QParam {
    /// Real positive deformation parameter. `q = 1` is the undeformed limit.
    pub fn real(q: f64) -> Result<Self> {
        if !q.is_finite() || q <= 0.0 {
            return Err(Error::InvalidQParam(format!(
                "real regime needs a finite q > 0, got {q}"
            )));
        }
        let canon = if q < 1.0 { 1.0 / q } else { q };
        Ok(QParam {
            given: Complex64::new(q, 0.0),
            canon: Complex64::new(canon, 0.0),
            regime: QRegime::RealPositive,
            mag: canon.ln(),
        })
    }

    /// The undeformed parameter q = 1.
    pub fn one() -> Self {
        QParam::real(1.0).expect("1.0 is a valid deformation parameter")
    }

    /// `q = exp(i theta)` with the default root-of-unity guard.
    pub fn unit_circle(theta: f64) -> Result<Self> {
        QParam::unit_circle_with_root_bound(theta, DEFAULT_ROOT_BOUND)
    }

    /// `q = exp(i theta)`, rejecting phases with `theta/pi = p/r` for any
    /// denominator `r <= root_bound` (within 1e-12). `root_bound = 0` disables
    /// the guard entirely; roots of order beyond the bound pass silently.
    pub fn unit_circle_with_root_bound(theta: f64, root_bound: u32) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::InvalidQParam(format!(
                "unit-circle regime needs a finite phase, got {theta}"
            )));
        }
        // Reduce to (-pi, pi].
        let tau = std::f64::consts::TAU;
        let mut reduced = theta - tau * (theta / tau).round();
        if reduced <= -std::f64::consts::PI {
            reduced += tau;
        }
        let frac = reduced / std::f64::consts::PI;
        for r in 1..=root_bound {
            let p = (frac * r as f64).round();
            if (frac - p / r as f64).abs() <= ROOT_GUARD_TOL {
                return Err(Error::InvalidQParam(format!(
                    "exp(i*{theta}) is a root of unity (theta/pi = {}/{ret}); brackets degenerate there",
                    p as i64,
                    ret = r
                )));
            }
        }
        let mag = reduced.abs();
        Ok(QParam {
            given: Complex64::from_polar(1.0, theta),
            canon: Complex64::from_polar(1.0, mag),
            regime: QRegime::UnitCircle,
            mag,
        })
    }

    /// The parameter exactly as constructed.
    pub fn value(&self) -> Complex64 {
        self.given
    }

    pub fn regime(&self) -> QRegime {
        self.regime
    }

    pub fn is_real(&self) -> bool {
        self.regime == QRegime::RealPositive
    }

    /// The given value for the real regime, an error otherwise.
    pub fn real_value(&self) -> Result<f64> {
        match self.regime {
            QRegime::RealPositive => Ok(self.given.re),
            QRegime::UnitCircle => Err(Error::UnsupportedRegime(
                "operation requires a real positive deformation parameter".into(),
            )),
        }
    }

    /// Canonical representative (q >= 1, or non-negative phase).
    pub(crate) fn canonical(&self) -> Complex64 {
        self.canon
    }
}

impl serde::Serialize for QParam {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("QParam", 3)?;
        st.serialize_field("re", &self.given.re)?;
        st.serialize_field("im", &self.given.im)?;
        st.serialize_field("regime", self.regime.as_str())?;
        st.end()
    }
}

/// `sum_k a^k / (2k+1)!`, i.e. `sinh(w)/w` at `w^2 = a` (valid for a < 0 too,
/// where it is `sin(w)/w`). Converges for every finite argument.
fn sinhc_ratio_series(a: f64) -> f64 {
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    for k in 1..=200u32 {
        term *= a / ((2 * k) as f64 * (2 * k + 1) as f64);
        sum += term;
        if term.abs() <= 1e-16 * sum.abs() {
            break;
        }
    }
    sum
}

/// Series form of the bracket: `x * S(x^2 u) / S(u)` with `u = (ln q)^2`
/// (negated for the unit circle). Exact at u = 0.
fn bracket_series(x: f64, u: f64) -> f64 {
    x * sinhc_ratio_series(x * x * u) / sinhc_ratio_series(u)
}

/// Direct form for real q: `sinh(x t)/sinh(t)`, rescaled through exponentials
/// once `x t` would overflow `sinh`.
fn bracket_real_direct(x: f64, t: f64) -> f64 {
    let a = x * t;
    if a.abs() <= 700.0 {
        a.sinh() / t.sinh()
    } else {
        // sinh(|a|)/sinh(t) = e^{|a|-t} (1 - e^{-2|a|})/(1 - e^{-2t})
        let ratio = (-2.0 * a.abs()).exp_m1() / (-2.0 * t).exp_m1();
        a.signum() * (a.abs() - t).exp() * ratio
    }
}

fn bracket_value(x: f64, q: &QParam) -> f64 {
    match q.regime {
        QRegime::RealPositive => {
            if q.mag < SERIES_CUT {
                bracket_series(x, q.mag * q.mag)
            } else {
                bracket_real_direct(x, q.mag)
            }
        }
        QRegime::UnitCircle => {
            if q.mag < SERIES_CUT {
                bracket_series(x, -q.mag * q.mag)
            } else {
                (x * q.mag).sin() / q.mag.sin()
            }
        }
    }
}

/// The symmetric bracket `[x] = (q^x - q^-x)/(q - q^-1)`.
///
/// Real for both supported regimes (for the unit circle it reduces to
/// `sin(x theta)/sin(theta)`); returned as a `Scalar` with zero imaginary
/// part. Exactly `x` at q = 1. Odd in x, and invariant under q -> 1/q.
pub fn q_number(x: f64, q: &QParam) -> Result<Scalar> {
    if !x.is_finite() {
        return Err(Error::ParameterDomain(format!(
            "bracket argument must be finite, got {x}"
        )));
    }
    let v = bracket_value(x, q);
    if !v.is_finite() {
        return Err(Error::NonFinite(format!("[{x}] overflows at this q")));
    }
    Ok(Scalar::new(v, 0.0))
}

/// The bracket of a non-negative integer in its polynomial form
/// `q^{n-1} + q^{n-3} + ... + q^{-(n-1)}` (exact at q = 1, manifestly
/// symmetric under q -> 1/q). Agrees with `q_number` to rounding.
pub fn q_integer(n: i64, q: &QParam) -> Result<Scalar> {
    if n < 0 {
        return Err(Error::ParameterDomain(format!(
            "q_integer takes n >= 0, got {n}"
        )));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    let mut e = n - 1;
    while e >= -(n - 1) && n > 0 {
        sum += q.canonical().powi(e as i32);
        e -= 2;
    }
    if !sum.re.is_finite() || !sum.im.is_finite() {
        return Err(Error::NonFinite(format!("[{n}] overflows at this q")));
    }
    Ok(sum)
}

/// Brackets of a list of (typically operator eigenvalue) arguments.
pub fn q_bracket_diagonal(eigenvalues: &[f64], q: &QParam) -> Result<Vec<Scalar>> {
    eigenvalues.iter().map(|&x| q_number(x, q)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn qr(q: f64) -> QParam {
        QParam::real(q).unwrap()
    }

    #[test]
    fn bracket_is_trivial_at_zero_and_one() {
        for q in [0.1, 0.5, 1.0, 1.3, 7.0] {
            let q = qr(q);
            assert_eq!(q_number(0.0, &q).unwrap().re, 0.0);
            assert_eq!(q_number(1.0, &q).unwrap().re, 1.0);
        }
        let circle = QParam::unit_circle(1.1).unwrap();
        assert_relative_eq!(q_number(1.0, &circle).unwrap().re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn undeformed_limit_is_exact() {
        let one = QParam::one();
        assert_eq!(q_number(7.5, &one).unwrap().re, 7.5);
        assert_eq!(q_number(-3.25, &one).unwrap().re, -3.25);
        assert_eq!(q_integer(40, &one).unwrap().re, 40.0);
    }

    #[test]
    fn hand_values() {
        // (q^2 - q^-2)/(q - q^-1) = q + 1/q
        assert_relative_eq!(q_number(2.0, &qr(2.0)).unwrap().re, 2.5, epsilon = 1e-15);
        assert_relative_eq!(q_integer(3, &qr(2.0)).unwrap().re, 5.25, epsilon = 1e-15);
        assert_relative_eq!(
            q_number(2.0, &qr(1.1)).unwrap().re,
            2.0090909090909090,
            epsilon = 1e-14
        );
        assert_relative_eq!(
            q_number(3.0, &qr(1.1)).unwrap().re,
            3.0364462809917355,
            epsilon = 1e-14
        );
    }

    #[test]
    fn unit_circle_bracket_is_a_sine_ratio() {
        let q = QParam::unit_circle(1.1).unwrap();
        assert_relative_eq!(
            q_number(3.0, &q).unwrap().re,
            (3.0f64 * 1.1).sin() / 1.1f64.sin(),
            epsilon = 1e-14
        );
        // Brackets on the circle may go negative; that is fine for scalars.
        let q = QParam::unit_circle(2.5).unwrap();
        assert!(q_number(2.0, &q).unwrap().re < 0.0);
    }

    #[test]
    fn fourteenth_root_rejected_by_default_allowed_with_relaxed_guard() {
        let theta = std::f64::consts::PI / 7.0;
        assert!(matches!(
            QParam::unit_circle(theta),
            Err(Error::InvalidQParam(_))
        ));
        let q = QParam::unit_circle_with_root_bound(theta, 6).unwrap();
        let two = q_integer(2, &q).unwrap();
        assert_relative_eq!(two.re, 2.0 * (theta).cos(), epsilon = 1e-14);
        assert!(two.im.abs() < 1e-14);
        assert_relative_eq!(two.re, 1.8019377358048383, epsilon = 1e-14);
    }

    #[test]
    fn root_of_unity_guard() {
        for theta in [
            0.0,
            std::f64::consts::PI,
            std::f64::consts::PI / 3.0,
            std::f64::consts::PI / 32.0,
            2.0 * std::f64::consts::PI / 5.0,
        ] {
            assert!(QParam::unit_circle(theta).is_err(), "theta = {theta}");
        }
        // Denominator 100 > 64: passes the default guard silently.
        assert!(QParam::unit_circle(0.37 * std::f64::consts::PI).is_ok());
    }

    #[test]
    fn invalid_real_parameters() {
        for q in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(QParam::real(q).is_err(), "q = {q}");
        }
        assert!(q_integer(-1, &QParam::one()).is_err());
        assert!(q_number(f64::NAN, &QParam::one()).is_err());
    }

    #[test]
    fn polynomial_and_ratio_forms_agree() {
        let mut params: Vec<QParam> = [0.1, 0.5, 0.99, 1.0, 1.0000001, 1.5, 2.0, 10.0]
            .iter()
            .map(|&q| qr(q))
            .collect();
        for theta in [0.37, 1.1, 2.5] {
            params.push(QParam::unit_circle(theta).unwrap());
        }
        for q in &params {
            for n in 0..=40i64 {
                let poly = q_integer(n, q).unwrap();
                let ratio = q_number(n as f64, q).unwrap();
                let scale = ratio.norm().max(1.0);
                assert!(
                    (poly - ratio).norm() <= 1e-12 * scale,
                    "n = {n}, q = {:?}: poly {poly} vs ratio {ratio}",
                    q.value()
                );
            }
        }
    }

    #[test]
    fn near_one_limit_bound() {
        for eps in [1e-3, 1e-4, 1e-5, 1e-7, -1e-3, -1e-4, -1e-7] {
            let q = qr(1.0 + eps);
            for x in [0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 10.0, 20.0] {
                let v = q_number(x, &q).unwrap().re;
                assert!(
                    (v - x).abs() <= 10.0 * x.powi(3) * eps.abs(),
                    "x = {x}, eps = {eps}, [x] = {v}"
                );
            }
        }
    }

    #[test]
    fn series_matches_direct_evaluation_across_the_cut() {
        for t in [1e-7, 1e-6, 1e-5, 1e-4] {
            for x in [0.5, 2.0, 7.5, 15.0] {
                let series = bracket_series(x, t * t);
                let direct = bracket_real_direct(x, t);
                assert_relative_eq!(series, direct, max_relative = 1e-13);
                let circle_series = bracket_series(x, -t * t);
                let circle_direct = (x * t).sin() / t.sin();
                assert_relative_eq!(circle_series, circle_direct, max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn overflow_is_reported_not_propagated() {
        let q = qr(10.0);
        assert!(q_number(300.0, &q).is_ok());
        assert!(matches!(q_number(400.0, &q), Err(Error::NonFinite(_))));
    }

    #[test]
    fn diagonal_helper_maps_brackets() {
        let q = qr(2.0);
        let vals = q_bracket_diagonal(&[0.0, 1.0, 2.0], &q).unwrap();
        assert_eq!(vals[0].re, 0.0);
        assert_eq!(vals[1].re, 1.0);
        assert_relative_eq!(vals[2].re, 2.5, epsilon = 1e-15);
    }

    proptest::proptest! {
        #[test]
        fn bracket_odd_in_x(x in -50.0f64..50.0, q in 0.1f64..10.0) {
            let q = qr(q);
            let plus = q_number(x, &q).unwrap().re;
            let minus = q_number(-x, &q).unwrap().re;
            proptest::prop_assert_eq!(plus, -minus);
        }

        #[test]
        fn bracket_invariant_under_inversion(x in -50.0f64..50.0, q in 0.1f64..10.0) {
            let direct = q_number(x, &qr(q)).unwrap().re;
            let inverted = q_number(x, &qr(1.0 / q)).unwrap().re;
            let scale = direct.abs().max(1.0);
            proptest::prop_assert!((direct - inverted).abs() <= 1e-12 * scale);
        }

        #[test]
        fn bracket_increasing_in_x_for_positive_arguments(
            x in 0.5f64..30.0, dx in 0.1f64..5.0, q in 0.2f64..5.0
        ) {
            let q = qr(q);
            let lo = q_number(x, &q).unwrap().re;
            let hi = q_number(x + dx, &q).unwrap().re;
            proptest::prop_assert!(hi > lo);
        }
    }
}
