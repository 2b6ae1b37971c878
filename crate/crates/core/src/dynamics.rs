//! Time-dependent shutter solution.
//!
//! A cutoff plane wave `e^{ikx} − e^{−ikx}` (x ≤ 0, zero beyond) is released
//! at t = 0. Inside the structure the solution is expanded over the S-matrix
//! poles:
//!
//! ```text
//! Ψ(x, t) = Φ_k M(y_k) − Φ_k* M(y_{−k}) − Σ_{n=±1..±N} ρ_n M(y_{k_n})
//! ```
//!
//! where every fourth-quadrant pole k_n is paired with its third-quadrant
//! partner k_{−n} = −k_n*. Dropping the partners breaks the cancellation that
//! makes Ψ vanish at t → 0.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mfunc::{m_function, y_argument};
use crate::model::PotentialProfile;
use crate::poles::find_poles;
use crate::resonant::{solve_modes, ResonantMode};
use crate::scattering::{transmission, StationaryField};
use crate::two_level::{density_resonant_exponential, DoubletFrequencies, TwoLevel};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Incidence energy, stationary field and resonant modes for one run.
#[derive(Debug, Clone)]
pub struct ShutterProblem {
    profile: PotentialProfile,
    energy: f64,
    k: f64,
    field: StationaryField,
    modes: Vec<ResonantMode>,
}

/// Everything position dependent in the expansion, evaluated once per x.
#[derive(Debug, Clone)]
pub struct PointExpansion {
    pub x: f64,
    pub phi: Complex64,
    /// (ρ_n, ρ_{−n}) per mode.
    pub rho: Vec<(Complex64, Complex64)>,
}

impl ShutterProblem {
    /// Locates the `n_poles` lowest poles and builds their resonant states.
    pub fn new(profile: &PotentialProfile, energy: f64, n_poles: usize) -> Result<Self> {
        let poles = find_poles(profile, n_poles.max(1))?;
        let modes = solve_modes(profile, &poles)?;
        Self::with_modes(profile, energy, modes)
    }

    /// Assembles a problem from precomputed modes. An empty list is allowed
    /// for pole-free profiles.
    pub fn with_modes(profile: &PotentialProfile, energy: f64, mut modes: Vec<ResonantMode>) -> Result<Self> {
        if !(energy > 0.0) || !energy.is_finite() {
            return Err(Error::InvalidEnergy(energy));
        }
        modes.sort_by(|a, b| a.pole.position.total_cmp(&b.pole.position));
        let k = profile.wavenumber(Complex64::new(energy, 0.0)).re;
        let field = StationaryField::solve(profile, Complex64::new(k, 0.0))?;
        Ok(Self {
            profile: profile.clone(),
            energy,
            k,
            field,
            modes,
        })
    }

    /// Same problem keeping only the first `n` modes.
    pub fn truncated(&self, n: usize) -> Self {
        let mut out = self.clone();
        out.modes.truncate(n);
        out
    }

    pub fn profile(&self) -> &PotentialProfile {
        &self.profile
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn field(&self) -> &StationaryField {
        &self.field
    }

    pub fn modes(&self) -> &[ResonantMode] {
        &self.modes
    }

    /// T(E) at the incidence energy.
    pub fn transmission(&self) -> f64 {
        self.field.transmission_coefficient()
    }

    /// Lifetime of the lowest resonance, ps.
    pub fn tau1(&self) -> Option<f64> {
        self.modes.first().map(|m| m.pole.lifetime)
    }

    /// Ψ(x, k; t = 0).
    pub fn initial(&self, x: f64) -> Complex64 {
        if x > 0.0 {
            Complex64::default()
        } else {
            2.0 * I * (self.k * x).sin()
        }
    }

    pub fn expansion_at(&self, x: f64) -> Result<PointExpansion> {
        let phi = self.field.value(x)?;
        let rho = self
            .modes
            .iter()
            .map(|m| Ok((m.rho(self.k, x)?, m.rho_mirror(self.k, x)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(PointExpansion { x, phi, rho })
    }

    fn check_time(t: f64) -> Result<()> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::NonPositiveTime(t));
        }
        Ok(())
    }

    fn free_terms(&self, e: &PointExpansion, t: f64) -> Result<Complex64> {
        let c = self.profile.constants();
        let k = Complex64::new(self.k, 0.0);
        let mk = m_function(y_argument(k, t, c)?.y);
        let mmk = m_function(y_argument(-k, t, c)?.y);
        Ok(e.phi * mk - e.phi.conj() * mmk)
    }

    fn pole_terms(&self, e: &PointExpansion, t: f64, n: usize) -> Result<Complex64> {
        let c = self.profile.constants();
        let mut sum = Complex64::default();
        for (mode, &(rho, rho_mirror)) in self.modes.iter().zip(&e.rho).take(n) {
            sum += rho * m_function(y_argument(mode.k(), t, c)?.y);
            sum += rho_mirror * m_function(y_argument(mode.pole.mirror_k(), t, c)?.y);
        }
        Ok(sum)
    }

    /// Full pole expansion over all modes of the problem, at a precomputed
    /// point.
    pub fn psi_exact_at(&self, e: &PointExpansion, t: f64) -> Result<Complex64> {
        Self::check_time(t)?;
        Ok(self.free_terms(e, t)? - self.pole_terms(e, t, self.modes.len())?)
    }

    pub fn psi_exact(&self, x: f64, t: f64) -> Result<Complex64> {
        Self::check_time(t)?;
        self.psi_exact_at(&self.expansion_at(x)?, t)
    }

    fn require_doublet(&self) -> Result<()> {
        if self.modes.len() < 2 {
            return Err(Error::NeedDoublet(self.modes.len()));
        }
        Ok(())
    }

    /// Doublet-restricted M-function form: only n = ±1, ±2 are kept.
    pub fn psi_doublet_m_at(&self, e: &PointExpansion, t: f64) -> Result<Complex64> {
        Self::check_time(t)?;
        self.require_doublet()?;
        let c = self.profile.constants();
        let k = Complex64::new(self.k, 0.0);
        let mut psi =
            e.phi * m_function(y_argument(k, t, c)?.y) - e.phi.conj() * m_function(y_argument(-k, t, c)?.y);
        for (mode, &(rho, rho_mirror)) in self.modes.iter().zip(&e.rho).take(2) {
            let m_n = m_function(y_argument(mode.k(), t, c)?.y);
            let m_mirror = m_function(y_argument(mode.pole.mirror_k(), t, c)?.y);
            psi -= rho * m_n + rho_mirror * m_mirror;
        }
        Ok(psi)
    }

    pub fn psi_doublet_m(&self, x: f64, t: f64) -> Result<Complex64> {
        Self::check_time(t)?;
        self.psi_doublet_m_at(&self.expansion_at(x)?, t)
    }

    /// The exponential part Σ_{n=1,2} ρ_n [e^{y_k²} − e^{y_{k_n}²}] of the
    /// doublet solution.
    pub fn doublet_exponential_at(&self, e: &PointExpansion, t: f64) -> Result<Complex64> {
        self.require_doublet()?;
        let c = self.profile.constants();
        let k = Complex64::new(self.k, 0.0);
        let free = y_argument(k, t, c)?.exp_y2();
        let mut sum = Complex64::default();
        for (mode, &(rho, _)) in self.modes.iter().zip(&e.rho).take(2) {
            sum += rho * (free - y_argument(mode.k(), t, c)?.exp_y2());
        }
        Ok(sum)
    }

    /// (Φ_k − ρ₁ − ρ₂) e^{y_k²}: the part of the doublet solution that the
    /// two-pole approximation of Φ_k discards. It does not decay in time.
    pub fn truncation_term_at(&self, e: &PointExpansion, t: f64) -> Result<Complex64> {
        self.require_doublet()?;
        let c = self.profile.constants();
        let free = y_argument(Complex64::new(self.k, 0.0), t, c)?.exp_y2();
        Ok((e.phi - e.rho[0].0 - e.rho[1].0) * free)
    }

    /// Δ(x, t): the doublet terms left after rewriting M(y_k) and M(y_{k_n})
    /// through M(y) = e^{y²} − M(−y). Every piece is an M function of
    /// −k, −k_n or k_{−n} and decays as an inverse power of t.
    pub fn delta_term_at(&self, e: &PointExpansion, t: f64) -> Result<Complex64> {
        Self::check_time(t)?;
        self.require_doublet()?;
        let c = self.profile.constants();
        let k = Complex64::new(self.k, 0.0);
        let mut delta = -(e.phi + e.phi.conj()) * m_function(y_argument(-k, t, c)?.y);
        for (mode, &(rho, rho_mirror)) in self.modes.iter().zip(&e.rho).take(2) {
            delta += rho * m_function(y_argument(-mode.k(), t, c)?.y);
            delta -= rho_mirror * m_function(y_argument(mode.pole.mirror_k(), t, c)?.y);
        }
        Ok(delta)
    }

    pub fn delta_term(&self, x: f64, t: f64) -> Result<Complex64> {
        Self::check_time(t)?;
        self.delta_term_at(&self.expansion_at(x)?, t)
    }

    /// Closed-form two-level evaluator at position x.
    pub fn two_level_at(&self, x: f64) -> Result<TwoLevel> {
        self.require_doublet()?;
        let freqs = DoubletFrequencies::new(
            self.energy,
            &self.modes[0].pole,
            &self.modes[1].pole,
            self.profile.constants().hbar,
        )?;
        TwoLevel::new(&self.modes[0], &self.modes[1], freqs, x, self.k)
    }

    /// T(𝓔₁): transmission at the first resonance energy.
    pub fn peak_transmission(&self) -> Result<f64> {
        let first = self.modes.first().ok_or(Error::NeedDoublet(0))?;
        Ok(transmission(&self.profile, first.pole.position)?.1)
    }
}

/// Which formula produced a density curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    /// Pole expansion over all N modes of the problem.
    Exact,
    /// M-function form restricted to the doublet.
    DoubletM,
    /// Closed-form two-level density.
    TwoLevelClosed,
    /// T(𝓔₁)(1 − e^{−t/τ₁})².
    Exponential,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Exact,
        Method::DoubletM,
        Method::TwoLevelClosed,
        Method::Exponential,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::DoubletM => "two-level-M",
            Method::TwoLevelClosed => "two-level-closed",
            Method::Exponential => "exponential",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.tag() == tag)
    }
}

/// |Ψ(x, t)|² on a time grid, one curve per method.
#[derive(Debug, Clone, PartialEq)]
pub struct TransientTrace {
    pub x: f64,
    /// eV
    pub energy: f64,
    /// ps, strictly increasing
    pub times: Vec<f64>,
    pub densities: Vec<(Method, Vec<f64>)>,
}

impl TransientTrace {
    pub fn curve(&self, method: Method) -> Option<&[f64]> {
        self.densities
            .iter()
            .find(|(m, _)| *m == method)
            .map(|(_, d)| d.as_slice())
    }
}

/// Evenly spaced grid `[0, t_max]` with `points` samples.
pub fn uniform_grid(t_max: f64, points: usize) -> Vec<f64> {
    let n = points.max(2);
    (0..n).map(|i| t_max * i as f64 / (n - 1) as f64).collect()
}

pub fn evolve_trace(
    problem: &ShutterProblem,
    x: f64,
    times: &[f64],
    methods: &[Method],
) -> Result<TransientTrace> {
    if times.is_empty()
        || times[0] < 0.0
        || times.windows(2).any(|w| !(w[1] > w[0]))
        || times.iter().any(|t| !t.is_finite())
    {
        return Err(Error::InvalidTimeGrid);
    }
    let expansion = problem.expansion_at(x)?;
    let at_zero = problem.initial(x).norm_sqr();
    let mut densities = Vec::with_capacity(methods.len());
    for &method in methods {
        let curve: Vec<f64> = match method {
            Method::Exact | Method::DoubletM => times
                .iter()
                .map(|&t| {
                    if t == 0.0 {
                        return Ok(at_zero);
                    }
                    let psi = if method == Method::Exact {
                        problem.psi_exact_at(&expansion, t)?
                    } else {
                        problem.psi_doublet_m_at(&expansion, t)?
                    };
                    Ok(psi.norm_sqr())
                })
                .collect::<Result<_>>()?,
            Method::TwoLevelClosed => {
                let two = problem.two_level_at(x)?;
                times.iter().map(|&t| two.density(t)).collect::<Result<_>>()?
            }
            Method::Exponential => {
                let peak = problem.peak_transmission()?;
                let tau = problem.tau1().ok_or(Error::NeedDoublet(0))?;
                times
                    .iter()
                    .map(|&t| density_resonant_exponential(peak, tau, t))
                    .collect::<Result<_>>()?
            }
        };
        densities.push((method, curve));
    }
    Ok(TransientTrace {
        x,
        energy: problem.energy,
        times: times.to_vec(),
        densities,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{triple_barrier, MEV};

    fn centre_problem(n: usize) -> ShutterProblem {
        let p = triple_barrier(3.0).unwrap();
        let poles = find_poles(&p, n).unwrap();
        let e = 0.5 * (poles[0].position + poles[1].position);
        ShutterProblem::with_modes(&p, e, solve_modes(&p, &poles).unwrap()).unwrap()
    }

    #[test]
    fn time_domain_checks() {
        let prob = centre_problem(2);
        assert!(matches!(
            prob.psi_exact(41.0, 0.0),
            Err(Error::NonPositiveTime(_))
        ));
        assert!(matches!(
            prob.psi_exact(41.0, -1.0),
            Err(Error::NonPositiveTime(_))
        ));
        assert!(matches!(
            prob.psi_exact(42.0, 1.0),
            Err(Error::OutsideStructure { .. })
        ));
        assert_eq!(prob.initial(10.0), Complex64::default());
        let grid = [0.0, 1.0, 0.5];
        assert_eq!(
            evolve_trace(&prob, 41.0, &grid, &[Method::Exact]),
            Err(Error::InvalidTimeGrid)
        );
    }

    #[test]
    fn doublet_form_equals_truncated_exact() {
        let prob = centre_problem(4);
        let two = prob.truncated(2);
        for &x in &[0.0, 12.0, 41.0] {
            for &t in &[0.01, 0.3, 1.6, 9.0, 40.0] {
                let a = two.psi_exact(x, t).unwrap();
                let b = prob.psi_doublet_m(x, t).unwrap();
                assert!((a - b).norm() < 1e-12 * a.norm().max(1.0));
            }
        }
    }

    #[test]
    fn long_time_limit_is_stationary() {
        let prob = centre_problem(4);
        let l = prob.profile().length();
        let tau = prob.tau1().unwrap();
        let t_inf = 25.0 * tau;
        let rho = prob.psi_exact(l, t_inf).unwrap().norm_sqr();
        let t_e = prob.transmission();
        assert!((rho - t_e).abs() < 0.03 * t_e, "{rho} vs {t_e}");
    }

    #[test]
    fn doublet_splits_into_exponential_truncation_and_delta() {
        let prob = centre_problem(2);
        let l = prob.profile().length();
        let e = prob.expansion_at(l).unwrap();
        for &t in &[1e-4, 0.2, 1.6, 8.0, 40.0] {
            let whole = prob.psi_doublet_m_at(&e, t).unwrap();
            let parts = prob.doublet_exponential_at(&e, t).unwrap()
                + prob.truncation_term_at(&e, t).unwrap()
                + prob.delta_term_at(&e, t).unwrap();
            assert!((whole - parts).norm() < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn delta_decays_and_cancels_at_short_times() {
        let prob = centre_problem(2);
        let l = prob.profile().length();
        let tau = prob.tau1().unwrap();
        let d1 = prob.delta_term(l, tau).unwrap().norm();
        let d4 = prob.delta_term(l, 4.0 * tau).unwrap().norm();
        assert!(d4 < d1, "{d4} vs {d1}");
        let t0 = 1e-4 * tau;
        let e = prob.expansion_at(l).unwrap();
        let expo = prob.doublet_exponential_at(&e, t0).unwrap().norm();
        assert!(prob.delta_term(l, t0).unwrap().norm() > 0.5 * expo);
        for f in [0.5, 1.0, 2.0, 3.0, 4.0, 5.0] {
            let t = f * tau;
            let ratio = prob.delta_term(l, t).unwrap().norm() / prob.psi_exact(l, t).unwrap().norm();
            assert!(ratio < 0.05, "t = {f} tau: {ratio}");
        }
    }

    #[test]
    fn method_tags_round_trip() {
        for m in Method::ALL {
            assert_eq!(Method::from_tag(m.tag()), Some(m));
        }
        assert_eq!(Method::from_tag("nope"), None);
    }

    #[test]
    fn trace_is_finite_and_non_negative() {
        let p = triple_barrier(3.0).unwrap();
        let prob = ShutterProblem::new(&p, 12.33 * MEV, 4).unwrap();
        let tau = prob.tau1().unwrap();
        let grid = uniform_grid(10.0 * tau, 400);
        let trace = evolve_trace(&prob, p.length(), &grid, &Method::ALL).unwrap();
        assert_eq!(trace.densities.len(), 4);
        for (_, curve) in &trace.densities {
            assert_eq!(curve.len(), grid.len());
            assert!(curve.iter().all(|d| d.is_finite() && *d >= 0.0));
            assert_eq!(curve[0], 0.0);
        }
    }
}
