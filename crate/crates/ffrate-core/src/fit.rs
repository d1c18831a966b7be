//! Multi-exponential fits of transient absorption decays.
//!
//! A hole-burning transient Δ(αL)(t) relaxes through a fixed optical lifetime
//! plus up to four spin components:
//!
//! Δ(αL)(t) = αL [ (1 − Σ aᵢ) e^(−t/T1_opt) + Σ aᵢ e^(−t/τᵢ) ],
//!
//! with T1_opt held fixed. For given lifetimes the amplitudes enter linearly,
//! so the solver is a variable projection: linear coefficients from a least
//! squares solve, lifetimes from Levenberg-Marquardt in log τ, started from a
//! deterministic grid of lifetime combinations. The component count N is
//! escalated from 1 until the normalized χ² drops below the target. Fits are
//! fully deterministic: fixed grids, fixed iteration caps, no randomness.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use nalgebra::{DMatrix, DVector};

/// Normalized χ² below which a fit counts as converged.
pub const CHI2_TARGET: f64 = 1e-3;

/// Largest component count the escalation will try.
pub const MAX_COMPONENTS: usize = 4;

/// Lifetimes shorter than this are flagged: the transient grid rarely
/// resolves them.
pub const UNRELIABLE_TAU_S: f64 = 10e-6;

/// Fixed optical lifetime used throughout.
pub const DEFAULT_T1_OPT_S: f64 = 11e-3;

#[derive(Debug, Error)]
pub enum FitError {
    #[error("trace needs at least {need} samples, got {got}")]
    TooFewPoints { got: usize, need: usize },
    #[error("trace time and value arrays differ in length ({t} vs {v})")]
    LengthMismatch { t: usize, v: usize },
    #[error("trace times must be strictly increasing (violated at index {0})")]
    NotIncreasing(usize),
    #[error("trace contains a non-finite number at index {0}")]
    NonFinite(usize),
    #[error("trace is identically zero; nothing to fit")]
    ZeroSignal,
    #[error("CSV line {line}: {reason}")]
    Csv { line: usize, reason: String },
    #[error("synthesis component {index} has non-positive lifetime {tau_s} s")]
    BadComponent { index: usize, tau_s: f64 },
    #[error("noise level must be finite and non-negative, got {0}")]
    BadNoise(f64),
    #[error("optical lifetime must be positive, got {0} s")]
    BadT1(f64),
    #[error("no admissible fit found for any start")]
    NoAdmissibleFit,
}

/// A measured or synthesized decay: times (s) and Δ(αL) values.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DecayTrace {
    pub t_s: Vec<f64>,
    pub delta_alpha_l: Vec<f64>,
}

impl DecayTrace {
    pub const MIN_POINTS: usize = 8;

    pub fn new(t_s: Vec<f64>, delta_alpha_l: Vec<f64>) -> Result<Self, FitError> {
        if t_s.len() != delta_alpha_l.len() {
            return Err(FitError::LengthMismatch {
                t: t_s.len(),
                v: delta_alpha_l.len(),
            });
        }
        if t_s.len() < Self::MIN_POINTS {
            return Err(FitError::TooFewPoints {
                got: t_s.len(),
                need: Self::MIN_POINTS,
            });
        }
        for (i, (&t, &v)) in t_s.iter().zip(&delta_alpha_l).enumerate() {
            if !(t.is_finite() && v.is_finite()) {
                return Err(FitError::NonFinite(i));
            }
            if i > 0 && t <= t_s[i - 1] {
                return Err(FitError::NotIncreasing(i));
            }
        }
        if delta_alpha_l.iter().all(|&v| v == 0.0) {
            return Err(FitError::ZeroSignal);
        }
        Ok(DecayTrace { t_s, delta_alpha_l })
    }

    /// Parses `t_s,delta_alpha_l` lines. `#` comments, blank lines, and one
    /// optional header line are allowed.
    pub fn from_csv_str(text: &str) -> Result<Self, FitError> {
        let mut t_s = Vec::new();
        let mut values = Vec::new();
        let mut header_allowed = true;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 2 {
                return Err(FitError::Csv {
                    line: idx + 1,
                    reason: format!("expected 2 comma-separated fields, got {}", fields.len()),
                });
            }
            match (fields[0].parse::<f64>(), fields[1].parse::<f64>()) {
                (Ok(t), Ok(v)) => {
                    t_s.push(t);
                    values.push(v);
                }
                _ if header_allowed => { /* skip one header line */ }
                _ => {
                    return Err(FitError::Csv {
                        line: idx + 1,
                        reason: format!("cannot parse {line:?} as two numbers"),
                    })
                }
            }
            header_allowed = false;
        }
        DecayTrace::new(t_s, values)
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("t_s,delta_alpha_l\n");
        for (t, v) in self.t_s.iter().zip(&self.delta_alpha_l) {
            out.push_str(&format!("{t},{v}\n"));
        }
        out
    }
}

/// Synthesizes a noisy trace of the fit model on the given time grid.
/// `components` are (amplitude, lifetime) pairs; noise is Gaussian with
/// standard deviation `noise_level · |alpha_l|`.
pub fn synthesize_trace(
    alpha_l: f64,
    components: &[(f64, f64)],
    t1_opt_s: f64,
    t_s: &[f64],
    noise_level: f64,
    seed: u64,
) -> Result<DecayTrace, FitError> {
    if !(t1_opt_s.is_finite() && t1_opt_s > 0.0) {
        return Err(FitError::BadT1(t1_opt_s));
    }
    if !(noise_level.is_finite() && noise_level >= 0.0) {
        return Err(FitError::BadNoise(noise_level));
    }
    for (index, &(_, tau_s)) in components.iter().enumerate() {
        if !(tau_s.is_finite() && tau_s > 0.0) {
            return Err(FitError::BadComponent { index, tau_s });
        }
    }
    let pool: f64 = 1.0 - components.iter().map(|&(a, _)| a).sum::<f64>();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, noise_level * alpha_l.abs()).expect("non-negative sigma");
    let values = t_s
        .iter()
        .map(|&t| {
            let mut v = pool * (-t / t1_opt_s).exp();
            for &(a, tau) in components {
                v += a * (-t / tau).exp();
            }
            let mut v = alpha_l * v;
            if noise_level > 0.0 {
                v += noise.sample(&mut rng);
            }
            v
        })
        .collect();
    DecayTrace::new(t_s.to_vec(), values)
}

/// One fitted spin component.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct FitComponent {
    pub amplitude: f64,
    pub tau_s: f64,
    /// Lifetime below [`UNRELIABLE_TAU_S`]: treat with suspicion.
    pub unreliable: bool,
}

/// Best fit found: component count, overall amplitude, components sorted by
/// lifetime, and the normalized χ².
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FitResult {
    pub n_components: usize,
    pub alpha_l: f64,
    pub t1_opt_s: f64,
    pub components: Vec<FitComponent>,
    /// Mean squared residual normalized by max |Δ(αL)|.
    pub chi2: f64,
    /// χ² reached [`CHI2_TARGET`] within the component budget.
    pub converged: bool,
}

/// The component with the largest amplitude magnitude.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct DominantTime {
    pub tau_s: f64,
    pub amplitude: f64,
    /// Two amplitudes tied to rounding; the smaller lifetime was chosen.
    pub tie: bool,
    pub unreliable: bool,
}

/// Picks the dominant spin component of a fit. Ties in |amplitude| (relative
/// difference below 1e-12) resolve to the smaller lifetime and are flagged.
pub fn dominant_time(fit: &FitResult) -> Option<DominantTime> {
    let first = fit.components.first()?;
    // Components are sorted by lifetime, so scanning in order and replacing
    // only on strictly larger magnitude keeps the smaller-τ member of a tie.
    let mut best = *first;
    let mut tie = false;
    for c in &fit.components[1..] {
        let scale = c.amplitude.abs().max(best.amplitude.abs());
        if scale > 0.0 && (c.amplitude.abs() - best.amplitude.abs()).abs() <= 1e-12 * scale {
            tie = true;
        } else if c.amplitude.abs() > best.amplitude.abs() {
            best = *c;
            tie = false;
        }
    }
    Some(DominantTime {
        tau_s: best.tau_s,
        amplitude: best.amplitude,
        tie,
        unreliable: best.unreliable,
    })
}

struct Problem<'a> {
    t: &'a [f64],
    y: DVector<f64>,
    t1_opt_s: f64,
    /// 1 / (y_scale * sqrt(M)): premultiplier making ‖r‖² the normalized χ².
    r_scale: f64,
}

struct Solved {
    /// Linear coefficients: [pool through T1, then one per lifetime].
    coeffs: DVector<f64>,
    residual: DVector<f64>,
    chi2: f64,
}

impl<'a> Problem<'a> {
    fn new(trace: &'a DecayTrace, t1_opt_s: f64) -> Result<Self, FitError> {
        if !(t1_opt_s.is_finite() && t1_opt_s > 0.0) {
            return Err(FitError::BadT1(t1_opt_s));
        }
        let y = DVector::from_column_slice(&trace.delta_alpha_l);
        let y_scale = trace
            .delta_alpha_l
            .iter()
            .fold(0.0_f64, |m, &v| m.max(v.abs()));
        Ok(Problem {
            t: &trace.t_s,
            y,
            t1_opt_s,
            r_scale: 1.0 / (y_scale * (trace.t_s.len() as f64).sqrt()),
        })
    }

    fn design(&self, taus: &[f64]) -> DMatrix<f64> {
        let m = self.t.len();
        DMatrix::from_fn(m, taus.len() + 1, |i, j| {
            let tau = if j == 0 { self.t1_opt_s } else { taus[j - 1] };
            (-self.t[i] / tau).exp()
        })
    }

    /// Solves the linear subproblem for fixed lifetimes.
    fn solve_linear(&self, taus: &[f64]) -> Option<Solved> {
        let x = self.design(taus);
        let svd = x.clone().svd(true, true);
        let coeffs = svd.solve(&self.y, 1e-12).ok()?;
        let residual = (x * &coeffs - &self.y) * self.r_scale;
        let chi2 = residual.norm_squared();
        chi2.is_finite().then_some(Solved {
            coeffs,
            residual,
            chi2,
        })
    }

    /// Rejects parameter sets the model treats as unphysical: non-finite
    /// numbers, vanishing overall amplitude, or total spin amplitude above 2.
    fn admissible(&self, solved: &Solved) -> bool {
        let alpha_l: f64 = solved.coeffs.iter().sum();
        if !alpha_l.is_finite() || alpha_l == 0.0 {
            return false;
        }
        let total: f64 = solved.coeffs.iter().skip(1).map(|c| (c / alpha_l).abs()).sum();
        total <= 2.0
    }

    /// Levenberg-Marquardt over log lifetimes, re-solving the linear part at
    /// every step. The Jacobian drops the derivative of the linear solution
    /// (Kaufman approximation), which is plenty for these well-separated
    /// exponentials.
    fn refine(&self, start: &[f64]) -> Option<(Vec<f64>, Solved)> {
        const MAX_ITER: usize = 120;
        const THETA_MIN: f64 = -18.4; // ln(1e-8)
        const THETA_MAX: f64 = 11.5; // ln(1e5)

        let n = start.len();
        let mut theta: Vec<f64> = start.iter().map(|t| t.ln()).collect();
        let mut taus: Vec<f64> = theta.iter().map(|t| t.exp()).collect();
        let mut solved = self.solve_linear(&taus)?;
        let mut lambda = 1e-3;
        for _ in 0..MAX_ITER {
            let m = self.t.len();
            let jac = DMatrix::from_fn(m, n, |i, j| {
                let tau = taus[j];
                let x = self.t[i] / tau;
                solved.coeffs[j + 1] * x * (-x).exp() * self.r_scale
            });
            let jtj = jac.transpose() * &jac;
            let grad = jac.transpose() * &solved.residual;
            if grad.amax() < 1e-16 {
                break;
            }
            let mut improved = false;
            for _ in 0..25 {
                let mut damped = jtj.clone();
                let floor = 1e-12 * (jtj.diagonal().amax() + f64::MIN_POSITIVE);
                for k in 0..n {
                    damped[(k, k)] += lambda * (jtj[(k, k)].max(floor));
                }
                let Some(delta) = damped.lu().solve(&(-&grad)) else {
                    lambda *= 3.0;
                    continue;
                };
                let trial_theta: Vec<f64> = theta
                    .iter()
                    .zip(delta.iter())
                    .map(|(&th, &d)| (th + d).clamp(THETA_MIN, THETA_MAX))
                    .collect();
                let trial_taus: Vec<f64> = trial_theta.iter().map(|t| t.exp()).collect();
                match self.solve_linear(&trial_taus) {
                    Some(trial) if trial.chi2 < solved.chi2 => {
                        let gain = solved.chi2 - trial.chi2;
                        theta = trial_theta;
                        taus = trial_taus;
                        solved = trial;
                        lambda = (lambda * 0.3).max(1e-12);
                        improved = true;
                        if gain < 1e-15 + 1e-12 * solved.chi2 {
                            return Some((taus, solved));
                        }
                        break;
                    }
                    _ => {
                        lambda *= 3.0;
                        if lambda > 1e12 {
                            return Some((taus, solved));
                        }
                    }
                }
            }
            if !improved {
                break;
            }
        }
        Some((taus, solved))
    }
}

/// Lexicographic k-combinations of 0..n.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut combo: Vec<usize> = (0..k).collect();
    if k == 0 || k > n {
        return out;
    }
    loop {
        out.push(combo.clone());
        // Advance the rightmost index that can still move.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if combo[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        combo[i] += 1;
        for j in i + 1..k {
            combo[j] = combo[j - 1] + 1;
        }
    }
}

fn tau_grid(t: &[f64]) -> Vec<f64> {
    const GRID: usize = 8;
    let dt_min = t
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    let lo = (0.1 * dt_min).max(1e-8);
    let hi = (10.0 * t[t.len() - 1]).max(lo * 10.0);
    let (llo, lhi) = (lo.ln(), hi.ln());
    (0..GRID)
        .map(|i| (llo + (lhi - llo) * i as f64 / (GRID - 1) as f64).exp())
        .collect()
}

fn build_result(n: usize, t1_opt_s: f64, taus: &[f64], solved: &Solved, converged: bool) -> FitResult {
    let alpha_l: f64 = solved.coeffs.iter().sum();
    let mut components: Vec<FitComponent> = taus
        .iter()
        .enumerate()
        .map(|(j, &tau_s)| FitComponent {
            amplitude: solved.coeffs[j + 1] / alpha_l,
            tau_s,
            unreliable: tau_s < UNRELIABLE_TAU_S,
        })
        .collect();
    components.sort_by(|a, b| a.tau_s.total_cmp(&b.tau_s));
    FitResult {
        n_components: n,
        alpha_l,
        t1_opt_s,
        components,
        chi2: solved.chi2,
        converged,
    }
}

/// Fits the decay model, escalating the component count from 1 to `n_max`
/// until χ² < [`CHI2_TARGET`]. Returns the smallest component count that
/// converges, or the best fit found with `converged = false`. Deterministic
/// multi-start: every combination of a fixed lifetime grid, plus starts built
/// from the previous component count's best lifetimes, whose unrefined
/// solutions are kept as candidates so χ² never increases with N.
pub fn fit_decay(trace: &DecayTrace, t1_opt_s: f64, n_max: usize) -> Result<FitResult, FitError> {
    let problem = Problem::new(trace, t1_opt_s)?;
    let grid = tau_grid(&trace.t_s);
    let n_max = n_max.clamp(1, MAX_COMPONENTS);

    let mut overall_best: Option<(usize, Vec<f64>, Solved)> = None;
    let mut prev_best_taus: Option<Vec<f64>> = None;
    for n in 1..=n_max {
        let mut starts: Vec<Vec<f64>> = combinations(grid.len(), n)
            .into_iter()
            .map(|combo| combo.into_iter().map(|i| grid[i]).collect())
            .collect();
        if let Some(prev) = &prev_best_taus {
            for &extra in &grid {
                let mut s = prev.clone();
                s.push(extra);
                s.sort_by(f64::total_cmp);
                starts.push(s);
            }
        }

        let mut best: Option<(Vec<f64>, Solved)> = None;
        let consider = |taus: Vec<f64>, solved: Solved, best: &mut Option<(Vec<f64>, Solved)>| {
            if !problem.admissible(&solved) {
                return;
            }
            // Strict inequality keeps the earliest start on ties.
            if best.as_ref().is_none_or(|(_, b)| solved.chi2 < b.chi2) {
                *best = Some((taus, solved));
            }
        };
        for start in starts {
            if let Some(solved) = problem.solve_linear(&start) {
                consider(start.clone(), solved, &mut best);
            }
            if let Some((taus, solved)) = problem.refine(&start) {
                consider(taus, solved, &mut best);
            }
        }

        let Some((taus, solved)) = best else { continue };
        prev_best_taus = Some(taus.clone());
        let done = solved.chi2 < CHI2_TARGET;
        let replace = overall_best
            .as_ref()
            .is_none_or(|(_, _, b)| solved.chi2 < b.chi2);
        if replace {
            overall_best = Some((n, taus, solved));
        }
        if done {
            break;
        }
    }

    let (n, taus, solved) = overall_best.ok_or(FitError::NoAdmissibleFit)?;
    let converged = solved.chi2 < CHI2_TARGET;
    Ok(build_result(n, t1_opt_s, &taus, &solved, converged))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn grid_ms(n: usize, span_s: f64) -> Vec<f64> {
        // Log-spaced from 2 us to span: resolves fast and slow components.
        let lo = 2e-6_f64.ln();
        let hi = span_s.ln();
        (0..n)
            .map(|i| (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp())
            .collect()
    }

    #[test]
    fn recovers_single_component_noiseless() {
        let t = grid_ms(120, 60e-3);
        let trace = synthesize_trace(0.8, &[(0.45, 3.2e-3)], DEFAULT_T1_OPT_S, &t, 0.0, 0).unwrap();
        let fit = fit_decay(&trace, DEFAULT_T1_OPT_S, 4).unwrap();
        assert!(fit.converged);
        assert_eq!(fit.n_components, 1);
        assert_relative_eq!(fit.alpha_l, 0.8, max_relative = 1e-6);
        assert_relative_eq!(fit.components[0].tau_s, 3.2e-3, max_relative = 1e-5);
        assert_relative_eq!(fit.components[0].amplitude, 0.45, max_relative = 1e-5);
        assert!(fit.chi2 < 1e-12);
    }

    #[test]
    fn recovers_two_components_with_noise() {
        let t = grid_ms(160, 80e-3);
        let trace = synthesize_trace(
            1.2,
            &[(0.35, 0.4e-3), (0.3, 40e-3)],
            DEFAULT_T1_OPT_S,
            &t,
            0.01,
            1234,
        )
        .unwrap();
        let fit = fit_decay(&trace, DEFAULT_T1_OPT_S, 4).unwrap();
        assert!(fit.converged);
        assert_eq!(fit.n_components, 2);
        assert_relative_eq!(fit.components[0].tau_s, 0.4e-3, max_relative = 0.1);
        assert_relative_eq!(fit.components[1].tau_s, 40e-3, max_relative = 0.1);
    }

    #[test]
    fn dominant_component_is_largest_amplitude() {
        let t = grid_ms(160, 80e-3);
        let trace = synthesize_trace(
            1.0,
            &[(0.5, 0.2e-3), (0.2, 50e-3)],
            DEFAULT_T1_OPT_S,
            &t,
            0.0,
            0,
        )
        .unwrap();
        let fit = fit_decay(&trace, DEFAULT_T1_OPT_S, 4).unwrap();
        let dom = dominant_time(&fit).unwrap();
        assert_relative_eq!(dom.tau_s, 0.2e-3, max_relative = 1e-3);
        assert!(!dom.unreliable);
        assert!(!dom.tie);
    }

    #[test]
    fn short_lifetimes_are_flagged() {
        let t = grid_ms(140, 40e-3);
        let trace =
            synthesize_trace(1.0, &[(0.5, 4e-6)], DEFAULT_T1_OPT_S, &t, 0.0, 0).unwrap();
        let fit = fit_decay(&trace, DEFAULT_T1_OPT_S, 4).unwrap();
        let dom = dominant_time(&fit).unwrap();
        assert!(dom.unreliable, "tau {} should be flagged", dom.tau_s);
    }

    #[test]
    fn amplitude_rescaling_only_scales_alpha_l() {
        let t = grid_ms(120, 60e-3);
        let a = synthesize_trace(0.6, &[(0.4, 2e-3)], DEFAULT_T1_OPT_S, &t, 0.005, 7).unwrap();
        let b = DecayTrace::new(
            a.t_s.clone(),
            a.delta_alpha_l.iter().map(|v| v * 12.5).collect(),
        )
        .unwrap();
        let fa = fit_decay(&a, DEFAULT_T1_OPT_S, 4).unwrap();
        let fb = fit_decay(&b, DEFAULT_T1_OPT_S, 4).unwrap();
        assert_relative_eq!(fb.alpha_l / fa.alpha_l, 12.5, max_relative = 1e-6);
        assert_relative_eq!(fa.components[0].tau_s, fb.components[0].tau_s, max_relative = 1e-8);
        assert_relative_eq!(fa.chi2, fb.chi2, max_relative = 1e-6);
    }

    #[test]
    fn csv_roundtrip_and_parsing() {
        let t = grid_ms(20, 10e-3);
        let trace = synthesize_trace(0.5, &[(0.3, 1e-3)], DEFAULT_T1_OPT_S, &t, 0.0, 0).unwrap();
        let text = trace.to_csv_string();
        let back = DecayTrace::from_csv_str(&text).unwrap();
        assert_eq!(trace, back);

        let with_comments = format!("# transient\n\n{text}");
        assert_eq!(DecayTrace::from_csv_str(&with_comments).unwrap(), trace);

        let bad = "t,v\n0.0,1.0\nnot,numbers\n";
        assert!(matches!(
            DecayTrace::from_csv_str(bad),
            Err(FitError::Csv { line: 3, .. })
        ));
    }

    #[test]
    fn degenerate_traces_are_rejected() {
        assert!(matches!(
            DecayTrace::new(vec![0.0, 1.0], vec![1.0, 0.5]),
            Err(FitError::TooFewPoints { .. })
        ));
        let t: Vec<f64> = (0..10).map(|i| i as f64).collect();
        assert!(matches!(
            DecayTrace::new(t.clone(), vec![0.0; 10]),
            Err(FitError::ZeroSignal)
        ));
        let mut bad_t = t.clone();
        bad_t[5] = bad_t[4];
        assert!(matches!(
            DecayTrace::new(bad_t, vec![1.0; 10]),
            Err(FitError::NotIncreasing(5))
        ));
        let mut bad_v = vec![1.0; 10];
        bad_v[3] = f64::NAN;
        assert!(matches!(
            DecayTrace::new(t, bad_v),
            Err(FitError::NonFinite(3))
        ));
    }

    #[test]
    fn combinations_enumerate_lexicographically() {
        assert_eq!(
            combinations(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(combinations(8, 1).len(), 8);
        assert_eq!(combinations(8, 4).len(), 70);
    }

    #[test]
    fn synthesis_validates_inputs() {
        let t = grid_ms(10, 1e-3);
        assert!(matches!(
            synthesize_trace(1.0, &[(0.5, -1.0)], DEFAULT_T1_OPT_S, &t, 0.0, 0),
            Err(FitError::BadComponent { index: 0, .. })
        ));
        assert!(matches!(
            synthesize_trace(1.0, &[], 0.0, &t, 0.0, 0),
            Err(FitError::BadT1(_))
        ));
        assert!(matches!(
            synthesize_trace(1.0, &[], DEFAULT_T1_OPT_S, &t, -0.1, 0),
            Err(FitError::BadNoise(_))
        ));
    }
}
