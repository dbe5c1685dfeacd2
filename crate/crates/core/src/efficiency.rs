//! Efficiency composition and the AFC echo decay model.
//!
//! The stored-and-retrieved efficiency factors into the bare AFC echo
//! efficiency, two optical and two spin control pulses, and spin dephasing;
//! the AFC echo efficiency itself decays with the echo delay with an
//! effective coherence time.

use std::io::BufRead;

use crate::error::{Error, Result};
use crate::float::Real;

/// Photon-echo convention for the echo decay exponent: eta(t) = eta0 e^(-4 t / T2).
pub const ECHO_DECAY_EXPONENT_PREFACTOR: f64 = 4.0;

/// Composed efficiencies of one storage-and-retrieval cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfficiencyResult<R> {
    /// Single optical control pulse efficiency.
    pub eta_oc: R,
    /// Single spin control pulse efficiency.
    pub eta_sc: R,
    /// Back-and-forth conversion: eta_oc^2 eta_sc^2.
    pub eta_opt_spin: R,
    /// Bare AFC echo efficiency (externally supplied).
    pub eta_afc: Option<R>,
    /// Spin dephasing factor (externally supplied, default 1).
    pub eta_spin: R,
    /// Total memory efficiency, when eta_afc is present.
    pub eta_tot: Option<R>,
}

impl<R: Real> EfficiencyResult<R> {
    /// Compose from the two control-pulse efficiencies and the optional
    /// external factors.
    pub fn compose(eta_oc: R, eta_sc: R, eta_afc: Option<R>, eta_spin: R) -> Result<Self> {
        let eta_opt_spin = compose_opt_spin(eta_oc, eta_sc)?;
        check_unit_interval("eta_spin", eta_spin)?;
        let eta_tot = match eta_afc {
            Some(afc) => Some(compose_total(afc, eta_oc, eta_sc, eta_spin)?),
            None => None,
        };
        Ok(EfficiencyResult {
            eta_oc,
            eta_sc,
            eta_opt_spin,
            eta_afc,
            eta_spin,
            eta_tot,
        })
    }
}

fn check_unit_interval<R: Real>(name: &'static str, x: R) -> Result<()> {
    if !(x >= R::zero() && x <= R::one()) {
        return Err(Error::invalid(name, "must lie in [0, 1]"));
    }
    Ok(())
}

/// Back-and-forth optical-to-spin conversion efficiency, eta_oc^2 eta_sc^2
/// (two optical and two spin inversion pulses).
pub fn compose_opt_spin<R: Real>(eta_oc: R, eta_sc: R) -> Result<R> {
    check_unit_interval("eta_oc", eta_oc)?;
    check_unit_interval("eta_sc", eta_sc)?;
    Ok(eta_oc * eta_oc * eta_sc * eta_sc)
}

/// Total storage efficiency eta_afc eta_oc^2 eta_sc^2 eta_spin.
pub fn compose_total<R: Real>(eta_afc: R, eta_oc: R, eta_sc: R, eta_spin: R) -> Result<R> {
    check_unit_interval("eta_afc", eta_afc)?;
    check_unit_interval("eta_spin", eta_spin)?;
    Ok(eta_afc * compose_opt_spin(eta_oc, eta_sc)? * eta_spin)
}

/// AFC echo decay model parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AfcDecayParams<R> {
    /// Extrapolated zero-delay efficiency.
    pub eta0: R,
    /// Effective AFC coherence time, seconds.
    pub t2_afc: R,
}

impl<R: Real> AfcDecayParams<R> {
    pub fn validate(&self) -> Result<()> {
        if !(self.eta0 > R::zero() && self.eta0 <= R::one()) {
            return Err(Error::invalid("eta0", "must lie in (0, 1]"));
        }
        if !(self.t2_afc > R::zero()) {
            return Err(Error::invalid("t2_afc", "must be > 0"));
        }
        Ok(())
    }
}

/// AFC echo efficiency at the given delay: `eta0 exp(-4 delay / t2_afc)`.
pub fn afc_decay<R: Real>(params: &AfcDecayParams<R>, delay: R) -> R {
    afc_decay_with_prefactor(params, delay, R::of(ECHO_DECAY_EXPONENT_PREFACTOR))
}

/// Decay with an explicit exponent prefactor, for other echo conventions.
pub fn afc_decay_with_prefactor<R: Real>(params: &AfcDecayParams<R>, delay: R, k: R) -> R {
    params.eta0 * (-k * delay / params.t2_afc).exp()
}

/// Least-squares fit of the decay model to `(delay_s, efficiency)` points.
///
/// A log-domain linear fit seeds a damped Gauss-Newton refinement of the
/// plain (linear-domain) least squares; for exactly two points this is the
/// exact two-point solution.
pub fn fit_afc_decay<R: Real>(points: &[(R, R)]) -> Result<AfcDecayParams<R>> {
    if points.len() < 2 {
        return Err(Error::FitDomain(format!(
            "need at least 2 points with distinct delays, got {}",
            points.len()
        )));
    }
    for &(delay, eta) in points {
        if !(eta > R::zero()) {
            return Err(Error::invalid("eta", "decay data must be positive"));
        }
        if !(delay >= R::zero()) {
            return Err(Error::invalid("delay", "must be >= 0"));
        }
    }
    let spread = points
        .iter()
        .map(|p| p.0)
        .fold(R::neg_infinity(), R::max)
        - points.iter().map(|p| p.0).fold(R::infinity(), R::min);
    if !(spread > R::zero()) {
        return Err(Error::FitDomain(
            "all points share the same delay; the decay rate is undetermined".into(),
        ));
    }

    // Seed: linear least squares of ln(eta) = ln(eta0) - (k / T2) t.
    let k = R::of(ECHO_DECAY_EXPONENT_PREFACTOR);
    let n = R::of(points.len() as f64);
    let (mut st, mut sy, mut stt, mut sty) = (R::zero(), R::zero(), R::zero(), R::zero());
    for &(t, eta) in points {
        let y = eta.ln();
        st += t;
        sy += y;
        stt += t * t;
        sty += t * y;
    }
    let slope = (n * sty - st * sy) / (n * stt - st * st);
    let intercept = (sy - slope * st) / n;
    if !(slope < R::zero()) {
        return Err(Error::FitDomain(
            "data do not decay; cannot fit a positive coherence time".into(),
        ));
    }
    let mut eta0 = intercept.exp();
    let mut t2 = -k / slope;

    // Damped Gauss-Newton on the linear-domain residuals.
    let mut sse = decay_sse(points, eta0, t2, k);
    for _ in 0..200 {
        let (mut jtj00, mut jtj01, mut jtj11) = (R::zero(), R::zero(), R::zero());
        let (mut jtr0, mut jtr1) = (R::zero(), R::zero());
        for &(t, y) in points {
            let e = (-k * t / t2).exp();
            let resid = eta0 * e - y;
            let d_eta0 = e;
            let d_t2 = eta0 * e * k * t / (t2 * t2);
            jtj00 += d_eta0 * d_eta0;
            jtj01 += d_eta0 * d_t2;
            jtj11 += d_t2 * d_t2;
            jtr0 += d_eta0 * resid;
            jtr1 += d_t2 * resid;
        }
        let det = jtj00 * jtj11 - jtj01 * jtj01;
        if det.abs() <= R::zero() {
            break;
        }
        let mut step0 = -(jtj11 * jtr0 - jtj01 * jtr1) / det;
        let mut step1 = -(jtj00 * jtr1 - jtj01 * jtr0) / det;

        let mut damping = R::one();
        let mut improved = false;
        for _ in 0..30 {
            let cand0 = eta0 + damping * step0;
            let cand1 = t2 + damping * step1;
            if cand0 > R::zero() && cand1 > R::zero() {
                let cand_sse = decay_sse(points, cand0, cand1, k);
                if cand_sse <= sse {
                    step0 = damping * step0;
                    step1 = damping * step1;
                    eta0 = cand0;
                    t2 = cand1;
                    sse = cand_sse;
                    improved = true;
                    break;
                }
            }
            damping *= R::of(0.5);
        }
        if !improved {
            break;
        }
        let rel = (step0 / eta0).abs().max((step1 / t2).abs());
        if rel < R::of(1e-10) {
            break;
        }
    }

    let params = AfcDecayParams { eta0, t2_afc: t2 };
    params.validate()?;
    Ok(params)
}

fn decay_sse<R: Real>(points: &[(R, R)], eta0: R, t2: R, k: R) -> R {
    points.iter().fold(R::zero(), |acc, &(t, y)| {
        let r = eta0 * (-k * t / t2).exp() - y;
        acc + r * r
    })
}

/// Root-mean-square residual of the model on the data.
pub fn fit_residual<R: Real>(points: &[(R, R)], params: &AfcDecayParams<R>) -> R {
    let k = R::of(ECHO_DECAY_EXPONENT_PREFACTOR);
    (decay_sse(points, params.eta0, params.t2_afc, k) / R::of(points.len() as f64)).sqrt()
}

/// Read decay data as two-column CSV `delay_us,efficiency`.
///
/// Lines starting with `#` are comments; a non-numeric first line is treated
/// as a header. Delays are converted from microseconds to seconds.
pub fn read_decay_csv<R: Real>(reader: impl BufRead) -> Result<Vec<(R, R)>> {
    let mut points = Vec::new();
    let mut header_seen = false;
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::invalid("decay_csv", format!("read error: {e}")))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut cols = trimmed.split(',').map(str::trim);
        let (a, b) = match (cols.next(), cols.next()) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(Error::invalid(
                    "decay_csv",
                    format!("line {}: expected `delay_us,efficiency`", lineno + 1),
                ))
            }
        };
        match (a.parse::<f64>(), b.parse::<f64>()) {
            (Ok(delay_us), Ok(eta)) => points.push((R::of(delay_us * 1e-6), R::of(eta))),
            _ if points.is_empty() && !header_seen => header_seen = true,
            _ => {
                return Err(Error::invalid(
                    "decay_csv",
                    format!("line {}: could not parse `{trimmed}`", lineno + 1),
                ))
            }
        }
    }
    Ok(points)
}
