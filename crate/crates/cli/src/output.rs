//! CSV tables and the gnuplot script that draws them.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use qshutter_core::dynamics::Method;
use qshutter_core::model::MEV;
use qshutter_core::ResonancePole;

use crate::CliError;

pub const TRACE_HEADER: &str = "t_ps,t_over_tau1,density,method";
pub const POLES_HEADER: &str = "n,E_meV,Gamma_meV,Re_k_per_nm,Im_k_per_nm,tau_ps";
pub const TRANSMISSION_HEADER: &str = "E_meV,T";

/// One density curve ready to be written.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    /// File stem, also the plot title.
    pub label: String,
    pub method: Method,
    /// ps
    pub times: Vec<f64>,
    /// ps, the structure's own τ₁
    pub tau1: f64,
    pub density: Vec<f64>,
}

pub fn trace_csv(curve: &Curve) -> String {
    let mut out = String::with_capacity(48 * curve.times.len());
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for (t, d) in curve.times.iter().zip(&curve.density) {
        let _ = writeln!(
            out,
            "{t:.6},{:.6},{d:.10e},{}",
            t / curve.tau1,
            curve.method.tag()
        );
    }
    out
}

pub fn poles_csv(poles: &[ResonancePole]) -> String {
    let mut out = String::from(POLES_HEADER);
    out.push('\n');
    for p in poles {
        let _ = writeln!(
            out,
            "{},{:.6},{:.6},{:.9},{:.9},{:.6}",
            p.index,
            p.position / MEV,
            p.width / MEV,
            p.k.re,
            p.k.im,
            p.lifetime
        );
    }
    out
}

/// Rows of (energy eV, T).
pub fn transmission_csv(rows: &[(f64, f64)]) -> String {
    let mut out = String::from(TRANSMISSION_HEADER);
    out.push('\n');
    for (e, t) in rows {
        let _ = writeln!(out, "{:.6},{t:.10}", e / MEV);
    }
    out
}

/// Plots every curve against t/τ₁, with optional horizontal asymptotes.
pub fn gnuplot_script(title: &str, curves: &[Curve], asymptotes: &[(String, f64)]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# gnuplot -p {title}.gp");
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set key autotitle columnhead");
    let _ = writeln!(s, "set title '{title}'");
    let _ = writeln!(s, "set xlabel 't / tau1'");
    let _ = writeln!(s, "set ylabel '|Psi(x,t)|^2'");
    for (i, (label, value)) in asymptotes.iter().enumerate() {
        let _ = writeln!(
            s,
            "set arrow {} from graph 0, first {value} to graph 1, first {value} nohead dashtype 3",
            i + 1
        );
        let _ = writeln!(s, "set label {} '{label}' at graph 1.01, first {value}", i + 1);
    }
    let plots: Vec<String> = curves
        .iter()
        .map(|c| format!("'{}.csv' using 2:3 with lines title '{}'", c.label, c.label))
        .collect();
    let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
    s
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(path)
}
