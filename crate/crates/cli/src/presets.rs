//! Figure presets: curves, asymptotes and a manifest of tolerance checks.

use std::path::{Path, PathBuf};
use std::thread;

use qshutter_core::dynamics::Method;
use qshutter_core::model::MEV;
use qshutter_core::scattering::transmission;
use qshutter_core::two_level::dominant_frequency;

use crate::checks::{num, Check, Manifest};
use crate::config::Incidence;
use crate::output::{gnuplot_script, trace_csv, write_file, Curve};
use crate::reference as published;
use crate::scenario::{
    max_abs_deviation, max_relative_deviation, shipped_config, with_central_width, Scenario,
};
use crate::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Fig1,
    Fig2a,
    Fig2b,
    Fig3a,
    Fig3b,
}

impl Preset {
    pub const ALL: [Preset; 5] = [
        Preset::Fig1,
        Preset::Fig2a,
        Preset::Fig2b,
        Preset::Fig3a,
        Preset::Fig3b,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Fig1 => "fig1",
            Preset::Fig2a => "fig2a",
            Preset::Fig2b => "fig2b",
            Preset::Fig3a => "fig3a",
            Preset::Fig3b => "fig3b",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name).ok_or_else(|| {
            let known: Vec<_> = Self::ALL.iter().map(|p| p.name()).collect();
            CliError::Usage(format!("unknown preset `{name}` (known: {})", known.join(", ")))
        })
    }
}

#[derive(Debug, Clone)]
pub struct FigureOutput {
    pub name: String,
    pub curves: Vec<Curve>,
    /// (label, value) horizontal lines
    pub asymptotes: Vec<(String, f64)>,
    pub manifest: Manifest,
}

impl FigureOutput {
    /// (file name, contents) in a fixed order.
    pub fn files(&self) -> Vec<(String, String)> {
        let mut files: Vec<_> = self
            .curves
            .iter()
            .map(|c| (format!("{}.csv", c.label), trace_csv(c)))
            .collect();
        files.push((
            format!("{}.gp", self.name),
            gnuplot_script(&self.name, &self.curves, &self.asymptotes),
        ));
        files.push((format!("{}_manifest.txt", self.name), self.manifest.render()));
        files
    }

    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        self.files()
            .iter()
            .map(|(name, contents)| write_file(dir, name, contents))
            .collect()
    }
}

pub fn run_figure(preset: Preset) -> Result<FigureOutput> {
    match preset {
        Preset::Fig1 => fig1(),
        Preset::Fig2a => fig2a(),
        Preset::Fig2b => fig2b(),
        Preset::Fig3a => fig3a(),
        Preset::Fig3b => fig3b(),
    }
}

fn triple(incidence: Incidence, methods: &[Method], output: &str) -> Result<Scenario> {
    let mut config = shipped_config("triple_barrier_paper")?;
    config.incidence = incidence;
    config.methods = methods.to_vec();
    config.output = output.to_string();
    Scenario::prepare(&config)
}

fn note_window(s: &Scenario, manifest: &mut Manifest) {
    manifest.note(
        "window",
        format!(
            "t in [0, {} tau1], {} points",
            num(s.config.t_max),
            s.config.points
        ),
    );
}

/// Published doublet of the triple barrier plus τ₁.
fn triple_pole_checks(s: &Scenario, manifest: &mut Manifest) {
    let poles = s.poles();
    for (n, &(e, g)) in published::TRIPLE_POLES.iter().enumerate() {
        manifest.check(Check::within(
            format!("triple.E{}_meV", n + 1),
            e,
            poles[n].position / MEV,
            0.001,
        ));
        manifest.check(Check::within(
            format!("triple.Gamma{}_meV", n + 1),
            g,
            poles[n].width / MEV,
            0.001,
        ));
    }
    manifest.check(Check::within(
        "triple.tau1_ps",
        published::TRIPLE_TAU1,
        s.tau1(),
        0.01,
    ));
}

fn omega_21(s: &Scenario) -> f64 {
    let m = s.problem.modes();
    (m[1].pole.position - m[0].pole.position) / s.problem.profile().constants().hbar
}

fn take(curves: &mut Vec<Curve>, method: Method) -> Curve {
    let i = curves
        .iter()
        .position(|c| c.method == method)
        .expect("requested curve");
    curves.remove(i)
}

fn fig1() -> Result<FigureOutput> {
    let s = triple(
        Incidence::FirstResonance { offset: 2.0 },
        &[Method::Exact, Method::TwoLevelClosed, Method::DoubletM],
        "fig1",
    )?;
    let mut curves = s.curves()?;
    // the M-function doublet only feeds a check
    let doublet = take(&mut curves, Method::DoubletM);
    let (exact, closed) = (&curves[0], &curves[1]);
    let tau = s.tau1();

    let mut m = Manifest::default();
    s.describe("triple", &mut m);
    note_window(&s, &mut m);
    triple_pole_checks(&s, &mut m);
    m.check(Check::within(
        "fig1.E_meV",
        published::FIG1_ENERGY,
        s.problem.energy() / MEV,
        0.005,
    ));
    let closed_dev = max_relative_deviation(
        &exact.times,
        &closed.density,
        &exact.density,
        0.5 * tau,
        10.0 * tau,
    );
    m.check(Check::below(
        "fig1.two_level_closed_vs_exact_rel_0.5_10tau",
        0.05,
        closed_dev,
    ));
    let doublet_dev = max_relative_deviation(
        &exact.times,
        &doublet.density,
        &exact.density,
        0.1 * tau,
        10.0 * tau,
    );
    m.check(Check::below(
        "fig1.two_level_M_vs_exact_rel_0.1_10tau",
        0.05,
        doublet_dev,
    ));
    m.check(s.long_time_check("fig1.density_25tau_vs_T")?);
    let t = s.problem.transmission();
    Ok(FigureOutput {
        name: "fig1".into(),
        curves,
        asymptotes: vec![(format!("T = {}", num(t)), t)],
        manifest: m,
    })
}

fn fig2a() -> Result<FigureOutput> {
    let s = triple(
        Incidence::FirstResonance { offset: 0.0 },
        &[Method::DoubletM, Method::Exponential],
        "fig2a",
    )?;
    let curves = s.curves()?;
    let (doublet, exponential) = (&curves[0], &curves[1]);
    let tau = s.tau1();
    let peak = s.problem.peak_transmission()?;

    let mut m = Manifest::default();
    s.describe("triple", &mut m);
    note_window(&s, &mut m);
    triple_pole_checks(&s, &mut m);
    m.check(Check::at_least("fig2a.T_at_E1", 0.99, peak));
    let dev = max_abs_deviation(
        &doublet.times,
        &doublet.density,
        &exponential.density,
        0.0,
        10.0 * tau,
    );
    m.check(Check::below(
        "fig2a.two_level_M_vs_exponential_over_T_E1",
        0.05,
        dev / peak,
    ));
    let residual: Vec<f64> = doublet
        .density
        .iter()
        .zip(&exponential.density)
        .map(|(a, b)| a - b)
        .collect();
    let w21 = omega_21(&s);
    m.check(match dominant_frequency(&doublet.times, &residual) {
        Ok(w) => Check::relative("fig2a.residual_frequency_rad_per_ps", w21, w, 0.05),
        Err(e) => Check::new(
            "fig2a.residual_frequency_rad_per_ps",
            num(w21),
            format!("none ({e})"),
            "rel 0.05",
            false,
        ),
    });
    m.check(s.long_time_check("fig2a.density_25tau_vs_T")?);
    Ok(FigureOutput {
        name: "fig2a".into(),
        curves,
        asymptotes: vec![(format!("T(E1) = {}", num(peak)), peak)],
        manifest: m,
    })
}

fn fig2b() -> Result<FigureOutput> {
    let s = triple(
        Incidence::DoubletCenter,
        &[Method::Exact, Method::TwoLevelClosed],
        "fig2b",
    )?;
    let curves = s.curves()?;
    let exact = &curves[0];
    let poles = s.poles();
    let e_bar = s.problem.energy();
    let t = s.problem.transmission();

    let mut m = Manifest::default();
    s.describe("triple", &mut m);
    note_window(&s, &mut m);
    triple_pole_checks(&s, &mut m);
    m.check(Check::within(
        "fig2b.E_center_meV",
        published::TRIPLE_CENTER,
        e_bar / MEV,
        0.001,
    ));
    m.check(Check::within(
        "fig2b.center_offset_over_Gamma1",
        published::CENTER_OFFSET,
        (e_bar - poles[0].position) / poles[0].width,
        0.005,
    ));
    m.check(Check::within("fig2b.T_center", published::TRIPLE_T_CENTER, t, 0.001));
    m.note("fig2b.omega21_half_computed", num(0.5 * omega_21(&s)));
    let expected = 0.5 * published::OMEGA_21;
    m.check(match dominant_frequency(&exact.times, &exact.density) {
        Ok(w) => Check::relative("fig2b.dominant_frequency_rad_per_ps", expected, w, 0.03),
        Err(e) => Check::new(
            "fig2b.dominant_frequency_rad_per_ps",
            num(expected),
            format!("none ({e})"),
            "rel 0.03",
            false,
        ),
    });
    m.check(s.long_time_check("fig2b.density_25tau_vs_T")?);
    Ok(FigureOutput {
        name: "fig2b".into(),
        curves,
        asymptotes: vec![(format!("T = {}", num(t)), t)],
        manifest: m,
    })
}

/// Runs independent scenario builds on separate threads, keeping order.
fn prepare_all(configs: Vec<crate::config::ScenarioConfig>) -> Result<Vec<(Scenario, Vec<Curve>)>> {
    thread::scope(|scope| {
        let handles: Vec<_> = configs
            .iter()
            .map(|c| {
                scope.spawn(move || {
                    let s = Scenario::prepare(c)?;
                    let curves = s.curves()?;
                    Ok((s, curves))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("scenario worker panicked"))
            .collect()
    })
}

fn fig3a() -> Result<FigureOutput> {
    let mut tb = shipped_config("triple_barrier_paper")?;
    tb.incidence = Incidence::DoubletCenter;
    tb.methods = vec![Method::Exact];
    tb.output = "fig3a_triple".into();
    let mut db = shipped_config("double_barrier_paper")?;
    db.methods = vec![Method::Exact];
    db.output = "fig3a_double".into();
    let mut runs = prepare_all(vec![tb, db])?;
    let (d, d_curves) = runs.pop().expect("double");
    let (t, t_curves) = runs.pop().expect("triple");

    let mut m = Manifest::default();
    t.describe("triple", &mut m);
    d.describe("double", &mut m);
    note_window(&t, &mut m);
    m.note("time_axis", "t_over_tau1 uses each structure's own tau1");
    triple_pole_checks(&t, &mut m);
    let dp = d.poles()[0];
    m.check(Check::within(
        "double.E1_meV",
        published::DOUBLE_POLE.0,
        dp.position / MEV,
        0.01,
    ));
    m.check(Check::within(
        "double.Gamma1_meV",
        published::DOUBLE_POLE.1,
        dp.width / MEV,
        0.001,
    ));
    m.check(Check::flag(
        "double.tau1_ps",
        num(published::DOUBLE_TAU1_PRINTED),
        num(dp.lifetime),
        "printed value is 10x hbar/Gamma1",
    ));
    let (t_triple, t_double) = (t.problem.transmission(), d.problem.transmission());
    m.check(Check::within(
        "fig3a.T_triple_center",
        published::TRIPLE_T_CENTER,
        t_triple,
        0.001,
    ));
    m.check(Check::within("fig3a.T_double", published::DOUBLE_T, t_double, 0.0002));
    // the same value at the published incidence energy
    let published = transmission(d.profile(), published::DOUBLE_ENERGY * MEV)?.1;
    m.check(Check::within(
        "fig3a.T_double_at_83.740meV",
        published::DOUBLE_T,
        published,
        0.0002,
    ));
    m.check(t.long_time_check("fig3a.triple_density_25tau_vs_T")?);
    m.check(d.long_time_check("fig3a.double_density_25tau_vs_T")?);
    let mut curves = t_curves;
    curves.extend(d_curves);
    Ok(FigureOutput {
        name: "fig3a".into(),
        curves,
        asymptotes: vec![
            (format!("T = {}", num(t_triple)), t_triple),
            (format!("T = {}", num(t_double)), t_double),
        ],
        manifest: m,
    })
}

fn fig3b() -> Result<FigureOutput> {
    let base = shipped_config("triple_barrier_paper")?;
    let configs = published::CENTRAL_WIDTHS
        .iter()
        .map(|&b2| {
            let mut c = with_central_width(&base, b2);
            c.incidence = Incidence::DoubletCenter;
            c.methods = vec![Method::Exact];
            c.output = format!("fig3b_b2_{}nm", num(b2));
            c
        })
        .collect();
    let runs = prepare_all(configs)?;

    let mut m = Manifest::default();
    let mut curves = Vec::new();
    let mut asymptotes = Vec::new();
    let mut ts = Vec::new();
    for (&b2, (s, c)) in published::CENTRAL_WIDTHS.iter().zip(runs) {
        let prefix = format!("b2_{}nm", num(b2));
        s.describe(&prefix, &mut m);
        let t = s.problem.transmission();
        m.check(s.long_time_check(&format!("fig3b.{prefix}_density_25tau_vs_T"))?);
        asymptotes.push((format!("b2 = {} nm: T = {}", num(b2), num(t)), t));
        ts.push(t);
        curves.extend(c);
    }
    let increasing = ts.windows(2).all(|w| w[1] > w[0]);
    let measured: Vec<_> = ts.iter().map(|t| num(*t)).collect();
    m.check(Check::new(
        "fig3b.T_center_increasing_in_b2",
        "T(3nm) < T(4nm) < T(5nm)",
        measured.join(" < "),
        "strict",
        increasing,
    ));
    m.check(Check::above("fig3b.T_center_b2_5nm", 0.5, ts[2]));
    Ok(FigureOutput {
        name: "fig3b".into(),
        curves,
        asymptotes,
        manifest: m,
    })
}
