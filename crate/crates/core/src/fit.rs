//! The ground-doublet splitting of the first excited oscillator shell, its
//! small-deformation law, and the inverse problem of reading q off a
//! measured splitting.

use crate::error::{Error, Result};
use crate::qnum::QParam;
use crate::spectrum::{ks_energy_ratio, KSQuadruple};
use crate::units::{convert, AtomConfig, EnergyUnit};

/// Default tolerance on `||delta(q)| - target|` in the target's unit.
pub const DEFAULT_FIT_TOL: f64 = 1e-10;

/// The solver never expands its bracket beyond this deformation.
pub const FIT_Q_CAP: f64 = 10.0;

/// Exact and small-deformation splittings of the first excited shell, in one
/// unit.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SplittingResult {
    pub q: f64,
    /// Level difference (pair-excited minus doubly-excited) in `unit`.
    pub delta_exact: f64,
    /// `(3/16) E0 (q-1)^2` evaluated at the canonical representative q >= 1.
    pub delta_quadratic: f64,
    #[serde(serialize_with = "serialize_unit")]
    pub unit: EnergyUnit,
}

fn serialize_unit<S: serde::Serializer>(
    unit: &EnergyUnit,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(unit.token())
}

impl SplittingResult {
    pub fn magnitude_exact(&self) -> f64 {
        self.delta_exact.abs()
    }

    pub fn magnitude_quadratic(&self) -> f64 {
        self.delta_quadratic.abs()
    }
}

/// Splitting as a ratio `delta E/E0` (positive for q != 1: the pair-excited
/// level binds deeper).
pub fn splitting_exact_ratio(q: &QParam) -> Result<f64> {
    let pair = ks_energy_ratio(&KSQuadruple([1, 1, 0, 0]), q)?;
    let double = ks_energy_ratio(&KSQuadruple([2, 0, 0, 0]), q)?;
    Ok(pair - double)
}

/// Small-deformation law as a ratio: `(3/16)(q-1)^2` with q canonicalized to
/// the representative >= 1 (the exact splitting is q <-> 1/q symmetric, so
/// the law is applied to the symmetric representative).
pub fn splitting_quadratic_ratio(q: &QParam) -> Result<f64> {
    q.real_value()?;
    let qc = q.canonical().re;
    Ok(3.0 / 16.0 * (qc - 1.0) * (qc - 1.0))
}

/// Both splittings of the first excited shell expressed in `unit`.
pub fn splitting(q: &QParam, config: &AtomConfig, unit: EnergyUnit) -> Result<SplittingResult> {
    let exact = convert(
        splitting_exact_ratio(q)?,
        EnergyUnit::RatioOfGround,
        unit,
        config,
    )?;
    let quadratic = convert(
        splitting_quadratic_ratio(q)?,
        EnergyUnit::RatioOfGround,
        unit,
        config,
    )?;
    Ok(SplittingResult {
        q: q.real_value()?,
        delta_exact: exact,
        delta_quadratic: quadratic,
        unit,
    })
}

/// Outcome of fitting the deformation to a splitting magnitude.
#[derive(Debug, Clone, serde::Serialize)]
pub struct FitResult {
    /// The representative root with q >= 1.
    pub q_fitted: f64,
    /// The mirror root `1/q`, equivalent by the bracket symmetry.
    pub conjugate_q: f64,
    /// `||delta(q_fitted)| - |target||` in the target's unit.
    pub residual: f64,
    pub iterations: u32,
    /// Bracket `[lo, hi]` the bisection started from.
    pub bracket: [f64; 2],
}

/// Finds q >= 1 whose exact splitting magnitude matches `target` (given in
/// `unit`) within `tol`, by bisection after geometric bracket expansion.
pub fn fit_q(target: f64, unit: EnergyUnit, config: &AtomConfig, tol: f64) -> Result<FitResult> {
    if !target.is_finite() || target <= 0.0 {
        return Err(Error::FitDomain(format!(
            "target splitting magnitude must be finite and positive, got {target}"
        )));
    }
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::FitDomain(format!(
            "tolerance must be finite and positive, got {tol}"
        )));
    }
    // Work on magnitudes in ratio units; conversions are linear.
    let target_ratio = convert(target, unit, EnergyUnit::RatioOfGround, config)?.abs();

    let gap = |qv: f64| -> Result<f64> {
        let q = QParam::real(qv)?;
        Ok(splitting_exact_ratio(&q)?.abs() - target_ratio)
    };

    let lo = 1.0 + 1e-9;
    // The bracket-difference route underflows near q = 1, so test the lower
    // resolvability limit against the quadratic law instead.
    let floor = splitting_quadratic_ratio(&QParam::real(lo)?)?;
    if target_ratio <= floor || gap(lo)? >= 0.0 {
        return Err(Error::FitDomain(format!(
            "target {target} is below the splitting already present at q = {lo}"
        )));
    }
    let mut hi = 1.5;
    loop {
        if gap(hi)? > 0.0 {
            break;
        }
        if hi >= FIT_Q_CAP {
            return Err(Error::FitDomain(format!(
                "target {target} is not reached by any q in (1, {FIT_Q_CAP}]"
            )));
        }
        hi = (hi * 2.0).min(FIT_Q_CAP);
    }
    let bracket = [lo, hi];

    let (mut a, mut b) = (lo, hi);
    let mut iterations = 0u32;
    while iterations < 200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break; // float exhaustion
        }
        iterations += 1;
        if gap(mid)? < 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    let q_fitted = 0.5 * (a + b);
    let residual_ratio = gap(q_fitted)?.abs();
    let residual = convert(residual_ratio, EnergyUnit::RatioOfGround, unit, config)?.abs();
    if residual > tol {
        return Err(Error::FitDomain(format!(
            "bisection stalled at residual {residual} > tolerance {tol}"
        )));
    }
    Ok(FitResult {
        q_fitted,
        conjugate_q: 1.0 / q_fitted,
        residual,
        iterations,
        bracket,
    })
}
