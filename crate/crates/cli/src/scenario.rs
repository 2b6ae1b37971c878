//! From a configuration to a solved problem and its density curves.

use std::thread;

use qshutter_core::dynamics::{evolve_trace, uniform_grid, Method, ShutterProblem};
use qshutter_core::model::{PotentialProfile, MEV};
use qshutter_core::poles::find_poles;
use qshutter_core::resonant::solve_modes;
use qshutter_core::ResonancePole;

use crate::checks::{num, Check, Manifest};
use crate::config::{parse_config, shipped, ScenarioConfig};
use crate::output::Curve;
use crate::{CliError, Result};

/// Asymptote check time, in units of τ₁.
pub const LONG_TIME: f64 = 25.0;

#[derive(Debug, Clone)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub problem: ShutterProblem,
    /// Observation point, nm.
    pub x: f64,
}

impl Scenario {
    pub fn prepare(config: &ScenarioConfig) -> Result<Self> {
        let profile = config.profile()?;
        let poles = find_poles(&profile, config.pole_count())?;
        let modes = solve_modes(&profile, &poles)?;
        let energy = config
            .incidence
            .resolve(&modes)
            .map_err(|m| CliError::Usage(format!("incidence `{}`: {m}", config.incidence)))?;
        let problem = ShutterProblem::with_modes(&profile, energy, modes)?;
        let x = config.x.unwrap_or(profile.length());
        Ok(Self {
            config: config.clone(),
            problem,
            x,
        })
    }

    pub fn profile(&self) -> &PotentialProfile {
        self.problem.profile()
    }

    pub fn poles(&self) -> Vec<ResonancePole> {
        self.problem.modes().iter().map(|m| m.pole).collect()
    }

    pub fn tau1(&self) -> f64 {
        self.problem.modes()[0].pole.lifetime
    }

    pub fn times(&self) -> Vec<f64> {
        uniform_grid(self.config.t_max * self.tau1(), self.config.points)
    }

    /// One curve per configured method, named `<output>_<method>`.
    pub fn curves(&self) -> Result<Vec<Curve>> {
        let specs: Vec<(String, Method)> = self
            .config
            .methods
            .iter()
            .map(|&m| (format!("{}_{}", self.config.output, m.tag()), m))
            .collect();
        run_curves(&self.problem, self.x, &self.times(), self.tau1(), &specs)
    }

    /// Resolved energy, poles and T(E) as manifest notes.
    pub fn describe(&self, prefix: &str, manifest: &mut Manifest) {
        let p = &self.problem;
        manifest.note(
            format!("{prefix}.structure"),
            describe_layers(&self.config.layers),
        );
        manifest.note(format!("{prefix}.incidence"), self.config.incidence.to_string());
        manifest.note(format!("{prefix}.E_meV"), num(p.energy() / MEV));
        manifest.note(format!("{prefix}.T"), num(p.transmission()));
        manifest.note(format!("{prefix}.x_nm"), num(self.x));
        for pole in self.poles() {
            manifest.note(
                format!("{prefix}.pole{}", pole.index),
                format!(
                    "E_meV {} Gamma_meV {} tau_ps {}",
                    num(pole.position / MEV),
                    num(pole.width / MEV),
                    num(pole.lifetime)
                ),
            );
        }
    }

    /// |Ψ(x, 25τ₁)|² within 3% of its stationary value |Φ(x)|², which is
    /// T(E) at x = L.
    pub fn long_time_check(&self, name: &str) -> Result<Check> {
        let t = LONG_TIME * self.tau1();
        let density = self.problem.psi_exact(self.x, t)?.norm_sqr();
        let stationary = self.problem.field().value(self.x)?.norm_sqr();
        Ok(Check::relative(name, stationary, density, 0.03))
    }
}

pub fn describe_layers(layers: &[(f64, f64)]) -> String {
    layers
        .iter()
        .map(|(w, h)| format!("{} nm/{} eV", num(*w), num(*h)))
        .collect::<Vec<_>>()
        .join(" | ")
}

/// A configuration compiled into the binary.
pub fn shipped_config(name: &str) -> Result<ScenarioConfig> {
    let text = shipped(name).ok_or_else(|| CliError::Usage(format!("no shipped config `{name}`")))?;
    Ok(parse_config(text)?)
}

/// Triple barrier with the central barrier set to `b2` nm.
pub fn with_central_width(config: &ScenarioConfig, b2: f64) -> ScenarioConfig {
    let mut out = config.clone();
    let mid = out.layers.len() / 2;
    out.layers[mid].0 = b2;
    out
}

/// Evaluates the curves concurrently; the output order follows `specs`.
pub fn run_curves(
    problem: &ShutterProblem,
    x: f64,
    times: &[f64],
    tau1: f64,
    specs: &[(String, Method)],
) -> Result<Vec<Curve>> {
    thread::scope(|scope| {
        let handles: Vec<_> = specs
            .iter()
            .map(|(label, method)| {
                scope.spawn(move || {
                    let trace = evolve_trace(problem, x, times, &[*method])?;
                    let (_, density) = trace.densities.into_iter().next().expect("one method");
                    Ok(Curve {
                        label: label.clone(),
                        method: *method,
                        times: trace.times,
                        tau1,
                        density,
                    })
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("curve worker panicked"))
            .collect()
    })
}

/// Largest |a − b|/|b| over samples whose time lies in `[from, to]`.
pub fn max_relative_deviation(times: &[f64], a: &[f64], b: &[f64], from: f64, to: f64) -> f64 {
    times
        .iter()
        .zip(a.iter().zip(b))
        .filter(|(t, _)| (from..=to).contains(*t))
        .map(|(_, (a, b))| (a - b).abs() / b.abs())
        .fold(0.0, f64::max)
}

/// Largest |a − b| over samples whose time lies in `[from, to]`.
pub fn max_abs_deviation(times: &[f64], a: &[f64], b: &[f64], from: f64, to: f64) -> f64 {
    times
        .iter()
        .zip(a.iter().zip(b))
        .filter(|(t, _)| (from..=to).contains(*t))
        .map(|(_, (a, b))| (a - b).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Incidence;

    #[test]
    fn fig1_incidence_resolves_near_the_published_energy() {
        let mut c = shipped_config("triple_barrier_paper").unwrap();
        c.incidence = Incidence::FirstResonance { offset: 2.0 };
        let s = Scenario::prepare(&c).unwrap();
        let e = s.problem.energy() / MEV;
        // 12.33 meV as published; the computed poles put it 0.011 meV lower
        assert!((e - 12.33).abs() < 0.02, "{e}");
        assert_eq!(s.x, 41.0);
        assert_eq!(s.poles().len(), 4);
    }

    #[test]
    fn central_width_is_replaced() {
        let c = shipped_config("triple_barrier_paper").unwrap();
        let wide = with_central_width(&c, 5.0);
        assert_eq!(wide.layers[2], (5.0, 0.12));
        assert_eq!(wide.profile().unwrap().length(), 43.0);
    }

    #[test]
    fn curves_come_back_in_request_order() {
        let mut c = shipped_config("triple_barrier_paper").unwrap();
        c.points = 50;
        c.methods = vec![Method::TwoLevelClosed, Method::Exact, Method::DoubletM];
        let s = Scenario::prepare(&c).unwrap();
        let curves = s.curves().unwrap();
        let order: Vec<_> = curves.iter().map(|c| c.method).collect();
        assert_eq!(order, c.methods);
        assert_eq!(curves[1].label, "triple_barrier_paper_exact");
        assert!(curves.iter().all(|c| c.density.len() == 50));
    }

    #[test]
    fn deviation_windows() {
        let t = [0.0, 1.0, 2.0];
        assert_eq!(
            max_relative_deviation(&t, &[1.0, 2.0, 9.0], &[1.0, 1.0, 1.0], 0.5, 1.5),
            1.0
        );
        assert_eq!(
            max_abs_deviation(&t, &[1.0, 2.0, 9.0], &[1.0, 1.0, 1.0], 0.0, 2.0),
            8.0
        );
    }
}
