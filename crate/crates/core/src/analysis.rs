//! Experiment drivers: convergence tables, instantaneous-residual fits of the
//! modified-equation coefficients, symbol spectra, the correction-term study
//! and the DG versus finite-volume comparison.
//!
//! Every study returns a value that renders to CSV deterministically and can
//! list its own pass/fail checks for `--assert` runs.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use num::ToPrimitive;
use rayon::prelude::*;

use crate::dg_operator::{correction_term, symbol_eigenvalues, DgOperator, FluxRule, RhsPath};
use crate::error::{Error, Result};
use crate::exact_taylor::{
    correction_series, derivative_name, modified_pde, term_at_h_power, time_rate_name,
    InterfaceMode, ModifiedPde, StencilSpec,
};
use crate::fv_reference::{average_error_norms, rhs_fv1, rhs_fv2, AverageField, SlopeChoice};
use crate::mesh_basis::{error_norms, project, ErrorNorms, Mesh1D, ModalBasis};
use crate::time_integrator::{Integrator, Method};

/// Formats a float the way every CSV column does.
pub fn sci(v: f64) -> String {
    format!("{v:.12e}")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    DgP1,
    DgP2,
    Fv1,
    Fv2Central,
    Fv2Upwind,
}

impl Scheme {
    pub const ALL: [Scheme; 5] = [
        Scheme::DgP1,
        Scheme::DgP2,
        Scheme::Fv1,
        Scheme::Fv2Central,
        Scheme::Fv2Upwind,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::DgP1 => "dg-p1",
            Scheme::DgP2 => "dg-p2",
            Scheme::Fv1 => "fv1",
            Scheme::Fv2Central => "fv2-central",
            Scheme::Fv2Upwind => "fv2-upwind",
        }
    }

    /// Band the asymptotic L2 order must fall in on smooth data.
    pub fn expected_order(self) -> (f64, f64) {
        match self {
            Scheme::DgP1 => (1.7, 2.3),
            Scheme::DgP2 => (2.7, 3.3),
            Scheme::Fv1 => (0.9, 1.1),
            Scheme::Fv2Central | Scheme::Fv2Upwind => (1.8, 2.2),
        }
    }
}

impl FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown scheme `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InitialCondition {
    Sine,
    /// Periodic bump centred at 1/2 with width `sigma`.
    Gauss(f64),
    /// 1 on [1/4, 3/4), 0 elsewhere.
    Step,
}

impl InitialCondition {
    pub fn eval(&self, x: f64) -> f64 {
        let x = x.rem_euclid(1.0);
        match *self {
            InitialCondition::Sine => (2.0 * PI * x).sin(),
            InitialCondition::Gauss(sigma) => {
                let d = x - 0.5;
                (-d * d / (2.0 * sigma * sigma)).exp()
            }
            InitialCondition::Step => {
                if (0.25..0.75).contains(&x) {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Exact solution of `u_t + u_x = 0` at time `t`.
    pub fn exact(&self, x: f64, t: f64) -> f64 {
        self.eval(x - t)
    }

    pub fn is_smooth(&self) -> bool {
        !matches!(self, InitialCondition::Step)
    }

    pub fn label(&self) -> String {
        match self {
            InitialCondition::Sine => "sine".into(),
            InitialCondition::Gauss(s) => format!("gauss:{s}"),
            InitialCondition::Step => "step".into(),
        }
    }
}

impl FromStr for InitialCondition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sine" => Ok(InitialCondition::Sine),
            "step" => Ok(InitialCondition::Step),
            _ => {
                let sigma = s
                    .strip_prefix("gauss:")
                    .and_then(|v| v.parse::<f64>().ok())
                    .ok_or_else(|| Error::Config(format!("unknown initial condition `{s}`")))?;
                if !(sigma > 0.0 && sigma.is_finite()) {
                    return Err(Error::Config(format!("gauss width must be positive, got {sigma}")));
                }
                Ok(InitialCondition::Gauss(sigma))
            }
        }
    }
}

/// `d^p/dx^p sin(2πx)`
pub fn sine_derivative(p: usize, x: f64) -> f64 {
    let w = 2.0 * PI;
    w.powi(p as i32) * (w * x + p as f64 * PI / 2.0).sin()
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub scheme: Scheme,
    pub grids: Vec<usize>,
    pub cfl: f64,
    /// Final time in periods of the unit domain.
    pub periods: f64,
    pub ic: InitialCondition,
    pub integrator: Method,
    pub out_dir: Option<PathBuf>,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            scheme: Scheme::DgP1,
            grids: vec![20, 40, 80, 160, 320],
            cfl: 0.1,
            periods: 1.0,
            ic: InitialCondition::Sine,
            integrator: Method::Ssprk3,
            out_dir: None,
            seed: 0,
        }
    }
}

/// Parses `20,40,80`.
pub fn parse_grids(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::Config(format!("bad grid size `{t}`")))
        })
        .collect()
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grids.is_empty() {
            return Err(Error::Config("grid list is empty".into()));
        }
        if self.grids.contains(&0) {
            return Err(Error::Config("grid sizes must be positive".into()));
        }
        if self.grids.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config(format!(
                "grid list must be strictly increasing: {:?}",
                self.grids
            )));
        }
        if !(self.cfl > 0.0 && self.cfl.is_finite()) {
            return Err(Error::Config(format!("cfl must be positive, got {}", self.cfl)));
        }
        if !(self.periods >= 0.0 && self.periods.is_finite()) {
            return Err(Error::Config(format!(
                "periods must be non-negative, got {}",
                self.periods
            )));
        }
        Ok(())
    }

    /// Applies one `key=value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let num = |v: &str| {
            v.parse::<f64>()
                .map_err(|_| Error::Config(format!("`{key}` expects a number, got `{v}`")))
        };
        match key {
            "scheme" => self.scheme = value.parse()?,
            "grids" => self.grids = parse_grids(value)?,
            "cfl" => self.cfl = num(value)?,
            "periods" => self.periods = num(value)?,
            "ic" => self.ic = value.parse()?,
            "integrator" => self.integrator = value.parse()?,
            "out" => self.out_dir = Some(PathBuf::from(value)),
            "seed" => {
                self.seed = value
                    .parse()
                    .map_err(|_| Error::Config(format!("`seed` expects an integer, got `{value}`")))?
            }
            other => return Err(Error::Config(format!("unknown config key `{other}`"))),
        }
        Ok(())
    }

    /// Reads a plain `key=value` file; `#` starts a comment.
    pub fn apply_kv_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key=value, got `{raw}`", lineno + 1))
            })?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }
}

/// Outcome of one named check in `--assert` mode.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn line(&self) -> String {
        format!(
            "[{}] {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub n: usize,
    pub dx: f64,
    pub norms: Option<ErrorNorms>,
    pub eoc: Option<[f64; 3]>,
    pub steps: usize,
    pub wall_time: f64,
}

impl ResultRow {
    pub fn failed(&self) -> bool {
        self.norms.is_none()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResultTable {
    pub scheme: Scheme,
    pub ic: InitialCondition,
    pub rows: Vec<ResultRow>,
}

/// `log(e_coarse/e_fine)/log(n_fine/n_coarse)`; `log2` of the ratio on
/// doubling grids.
pub fn eoc(e_coarse: f64, e_fine: f64, n_coarse: usize, n_fine: usize) -> f64 {
    (e_coarse / e_fine).ln() / (n_fine as f64 / n_coarse as f64).ln()
}

impl ResultTable {
    fn from_runs(scheme: Scheme, ic: InitialCondition, runs: Vec<(usize, Option<ErrorNorms>, usize, f64)>) -> Self {
        let mut rows: Vec<ResultRow> = Vec::with_capacity(runs.len());
        for (n, norms, steps, wall_time) in runs {
            let eoc_row = match (rows.last(), norms) {
                (Some(prev), Some(cur)) => prev.norms.map(|p| {
                    [
                        eoc(p.l1, cur.l1, prev.n, n),
                        eoc(p.l2, cur.l2, prev.n, n),
                        eoc(p.linf, cur.linf, prev.n, n),
                    ]
                })
                // zero errors on both grids leave the order undefined
                .filter(|e| e.iter().all(|v| v.is_finite())),
                _ => None,
            };
            rows.push(ResultRow {
                n,
                dx: 1.0 / n as f64,
                norms,
                eoc: eoc_row,
                steps,
                wall_time,
            });
        }
        Self { scheme, ic, rows }
    }

    /// EOC columns carry meaning only for smooth data.
    pub fn informational(&self) -> bool {
        !self.ic.is_smooth()
    }

    pub fn last_eoc_l2(&self) -> Option<f64> {
        self.rows.last().and_then(|r| r.eoc).map(|e| e[1])
    }

    pub const CSV_HEADER: &'static str = "N,dx,L1,L2,Linf,EOC_L1,EOC_L2,EOC_Linf,steps,status";

    /// CSV rendering. Wall time is left out so files stay byte-identical
    /// between runs; it appears in [`ResultTable::summary`].
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{}", Self::CSV_HEADER).unwrap();
        let status = if self.informational() { "informational" } else { "ok" };
        for r in &self.rows {
            let (norms, st) = match r.norms {
                Some(e) => ([sci(e.l1), sci(e.l2), sci(e.linf)], status),
                None => (["nan".into(), "nan".into(), "nan".into()], "failed"),
            };
            let eoc = match r.eoc {
                Some(e) => [sci(e[0]), sci(e[1]), sci(e[2])],
                None => [String::new(), String::new(), String::new()],
            };
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                r.n,
                sci(r.dx),
                norms[0],
                norms[1],
                norms[2],
                eoc[0],
                eoc[1],
                eoc[2],
                r.steps,
                st
            )
            .unwrap();
        }
        out
    }

    pub fn summary(&self) -> String {
        let mut out = format!(
            "scheme {} ic {}{}\n{:>6} {:>12} {:>12} {:>12} {:>7} {:>7} {:>7} {:>8} {:>9}\n",
            self.scheme.name(),
            self.ic.label(),
            if self.informational() { " (EOC informational)" } else { "" },
            "N",
            "L1",
            "L2",
            "Linf",
            "EOC1",
            "EOC2",
            "EOCinf",
            "steps",
            "wall[s]"
        );
        for r in &self.rows {
            let f = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.3}"));
            let (l1, l2, li) = match r.norms {
                Some(e) => (format!("{:.4e}", e.l1), format!("{:.4e}", e.l2), format!("{:.4e}", e.linf)),
                None => ("failed".into(), "failed".into(), "failed".into()),
            };
            writeln!(
                out,
                "{:>6} {:>12} {:>12} {:>12} {:>7} {:>7} {:>7} {:>8} {:>9.3}",
                r.n,
                l1,
                l2,
                li,
                f(r.eoc.map(|e| e[0])),
                f(r.eoc.map(|e| e[1])),
                f(r.eoc.map(|e| e[2])),
                r.steps,
                r.wall_time
            )
            .unwrap();
        }
        out
    }

    /// Finest-pair L2 order inside the scheme's expected band. No checks for
    /// discontinuous data.
    pub fn checks(&self) -> Vec<Check> {
        if self.informational() {
            return Vec::new();
        }
        let (lo, hi) = self.scheme.expected_order();
        let mut checks = Vec::new();
        for r in &self.rows {
            if r.failed() {
                checks.push(Check {
                    name: format!("{} N={} run", self.scheme.name(), r.n),
                    passed: false,
                    detail: "non-finite state".into(),
                });
            }
        }
        let eoc = self.last_eoc_l2();
        checks.push(Check {
            name: format!("{} EOC_L2", self.scheme.name()),
            passed: eoc.is_some_and(|e| (lo..=hi).contains(&e)),
            detail: format!(
                "{} in [{lo}, {hi}]",
                eoc.map_or("n/a".to_string(), |e| format!("{e:.4}"))
            ),
        });
        checks
    }
}

/// Integrates one scheme on one grid and measures the error against the
/// translated initial condition.
pub fn run_single(scheme: Scheme, n: usize, config: &RunConfig) -> Result<(ErrorNorms, usize)> {
    let mesh = Mesh1D::new(n)?;
    let integ = Integrator::new(config.integrator, config.cfl, config.periods)?;
    let ic = config.ic;
    let t_final = config.periods;
    let exact = |x: f64| ic.exact(x, t_final);
    match scheme {
        Scheme::DgP1 | Scheme::DgP2 => {
            let k = if scheme == Scheme::DgP1 { 1 } else { 2 };
            let op = DgOperator::new(k)?;
            let u0 = project(|x| ic.eval(x), mesh, ModalBasis::new(k)?)?;
            let (u, steps) = integ.integrate(u0, mesh.dx(), |u, _t| op.rhs(u, RhsPath::Matrix))?;
            Ok((error_norms(&u, exact), steps))
        }
        Scheme::Fv1 | Scheme::Fv2Central | Scheme::Fv2Upwind => {
            let u0 = AverageField::from_function(|x| ic.eval(x), mesh)?;
            let rhs = |u: &AverageField, _t: f64| -> Result<AverageField> {
                Ok(match scheme {
                    Scheme::Fv1 => rhs_fv1(u),
                    Scheme::Fv2Central => rhs_fv2(u, SlopeChoice::Central),
                    _ => rhs_fv2(u, SlopeChoice::UpwindBiased),
                })
            };
            let (u, steps) = integ.integrate(u0, mesh.dx(), rhs)?;
            Ok((average_error_norms(&u, exact)?, steps))
        }
    }
}

/// Convergence table for `config.scheme`. Grids run concurrently; rows come
/// back ordered by N. A grid that blows up is marked failed and the others
/// continue.
pub fn run_convergence(config: &RunConfig) -> Result<ResultTable> {
    config.validate()?;
    Integrator::new(config.integrator, config.cfl, config.periods)?;
    let runs: Vec<(usize, Option<ErrorNorms>, usize, f64)> = config
        .grids
        .par_iter()
        .map(|&n| {
            let start = Instant::now();
            let res = run_single(config.scheme, n, config);
            let wall = start.elapsed().as_secs_f64();
            match res {
                Ok((e, steps)) if e.l1.is_finite() && e.l2.is_finite() && e.linf.is_finite() => {
                    (n, Some(e), steps, wall)
                }
                _ => (n, None, 0, wall),
            }
        })
        .collect();
    Ok(ResultTable::from_runs(config.scheme, config.ic, runs))
}

/// One modified-equation coefficient to be re-measured numerically.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualCase {
    pub degree: usize,
    pub mode: InterfaceMode,
    pub coefficient: usize,
    pub h_power: i32,
    /// Relative tolerance (absolute when the exact value is zero).
    pub tolerance: f64,
}

impl ResidualCase {
    pub fn label(&self) -> String {
        format!(
            "k={} {} a{} {}",
            self.degree,
            self.mode.label(),
            self.coefficient,
            term_label(self.coefficient + 1 + self.h_power as usize, self.h_power)
        )
    }
}

fn term_label(derivative: usize, h_power: i32) -> String {
    match h_power {
        0 => derivative_name(derivative),
        1 => format!("h*{}", derivative_name(derivative)),
        e => format!("h^{e}*{}", derivative_name(derivative)),
    }
}

/// The coefficients checked by default.
pub fn default_residual_cases() -> Vec<ResidualCase> {
    let c = |degree, mode, coefficient, h_power, tolerance| ResidualCase {
        degree,
        mode,
        coefficient,
        h_power,
        tolerance,
    };
    use InterfaceMode::{ExactPoint, UpwindTrace};
    vec![
        c(1, UpwindTrace, 0, 0, 1e-3),
        c(1, UpwindTrace, 1, 0, 1e-2),
        c(1, UpwindTrace, 1, 1, 1e-2),
        c(1, ExactPoint, 1, 0, 1e-2),
        c(2, UpwindTrace, 1, 0, 1e-2),
        c(2, UpwindTrace, 1, 1, 1e-2),
        c(2, UpwindTrace, 2, 0, 1e-2),
        c(2, UpwindTrace, 2, 1, 1e-2),
        c(2, ExactPoint, 1, 0, 1e-2),
        c(2, ExactPoint, 2, 0, 1e-2),
    ]
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualRow {
    pub case: ResidualCase,
    pub n_coarse: usize,
    pub n_fine: usize,
    pub measured: f64,
    pub exact: f64,
}

impl ResidualRow {
    /// Relative error, or absolute error when the exact coefficient is zero.
    pub fn error(&self) -> f64 {
        let d = (self.measured - self.exact).abs();
        if self.exact == 0.0 {
            d
        } else {
            d / self.exact.abs()
        }
    }

    pub fn passed(&self) -> bool {
        self.error() <= self.case.tolerance
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    pub rows: Vec<ResidualRow>,
}

impl ResidualReport {
    pub const CSV_HEADER: &'static str =
        "degree,flux,coefficient,term,N_coarse,N_fine,measured,exact,error,tolerance,pass";

    pub fn to_csv(&self) -> String {
        let mut out = format!("{}\n", Self::CSV_HEADER);
        for r in &self.rows {
            writeln!(
                out,
                "{},{},a{},{},{},{},{},{},{},{},{}",
                r.case.degree,
                r.case.mode.label(),
                r.case.coefficient,
                term_label(r.case.coefficient + 1 + r.case.h_power as usize, r.case.h_power),
                r.n_coarse,
                r.n_fine,
                sci(r.measured),
                sci(r.exact),
                sci(r.error()),
                sci(r.case.tolerance),
                r.passed()
            )
            .unwrap();
        }
        out
    }

    /// Rows on the finest grid pair.
    pub fn finest(&self) -> Vec<&ResidualRow> {
        let top = self.rows.iter().map(|r| r.n_fine).max().unwrap_or(0);
        self.rows.iter().filter(|r| r.n_fine == top).collect()
    }

    pub fn checks(&self) -> Vec<Check> {
        self.finest()
            .into_iter()
            .map(|r| Check {
                name: format!("residual {} (N={}/{})", r.case.label(), r.n_coarse, r.n_fine),
                passed: r.passed(),
                detail: format!(
                    "measured {:.6} exact {:.6} err {:.2e} tol {:.0e}",
                    r.measured,
                    r.exact,
                    r.error(),
                    r.case.tolerance
                ),
            })
            .collect()
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            writeln!(
                out,
                "{:<32} N={:>4}/{:<4} measured {:>+.8} exact {:>+.8} err {:.2e}",
                r.case.label(),
                r.n_coarse,
                r.n_fine,
                r.measured,
                r.exact,
                r.error()
            )
            .unwrap();
        }
        out
    }
}

fn require_doubling(grids: &[usize]) -> Result<()> {
    if grids.len() < 2 {
        return Err(Error::Config("need at least two grids".into()));
    }
    if grids.iter().any(|&n| n < 3) {
        return Err(Error::Config("grids must have at least three cells".into()));
    }
    if grids.windows(2).any(|w| w[1] != 2 * w[0]) {
        return Err(Error::Config(format!("grids must double: {grids:?}")));
    }
    Ok(())
}

/// Least-squares amplitude `c` in `values ≈ c · shape`.
fn fit_amplitude(values: &[f64], shape: &[f64]) -> f64 {
    let num: f64 = values.iter().zip(shape).map(|(v, s)| v * s).sum();
    let den: f64 = shape.iter().map(|s| s * s).sum();
    num / den
}

/// `c(h) = c + K h^order` from two grids, `h_fine = h_coarse/2`.
fn richardson(coarse: f64, fine: f64, order: i32) -> f64 {
    let f = 2f64.powi(order);
    (f * fine - coarse) / (f - 1.0)
}

/// Single-grid estimate of one modified-equation coefficient from the
/// scheme's instantaneous rate at the projection of `sin(2πx)`.
fn residual_estimate(case: &ResidualCase, pde: &ModifiedPde, scale: f64, n: usize) -> Result<f64> {
    let mesh = Mesh1D::new(n)?;
    let h = mesh.dx();
    let m = case.coefficient;
    let op = DgOperator::new(case.degree)?;
    let u0 = project(|x| sine_derivative(0, x), mesh, op.basis().clone())?;
    let exact_u = |x: f64, t: f64| sine_derivative(0, x - t);
    let flux = match case.mode {
        InterfaceMode::UpwindTrace => FluxRule::Upwind,
        InterfaceMode::ExactPoint => FluxRule::ExactInterface(&exact_u),
    };
    let rate = op.rhs_weak(&u0, flux, 0.0)?;
    let norm = scale * h.powi(m as i32);
    let mut residual = Vec::with_capacity(n);
    let mut shape = Vec::with_capacity(n);
    for j in 0..n {
        let x = mesh.center(j);
        let mut r = rate.cell(j)[m] / norm;
        for t in pde.terms.iter().filter(|t| t.h_power < case.h_power) {
            let c = t.coeff.to_f64().unwrap_or(f64::NAN);
            if c != 0.0 {
                r -= c * h.powi(t.h_power) * sine_derivative(t.derivative, x);
            }
        }
        residual.push(r / h.powi(case.h_power));
        shape.push(sine_derivative(m + 1 + case.h_power as usize, x));
    }
    Ok(fit_amplitude(&residual, &shape))
}

/// Re-measures modified-equation coefficients on doubling grids and compares
/// them with the exact values.
pub fn run_residual(grids: &[usize], cases: &[ResidualCase]) -> Result<ResidualReport> {
    require_doubling(grids)?;
    let mut rows = Vec::new();
    for case in cases {
        let pde = modified_pde(case.degree, case.mode, case.coefficient)?;
        let exact = pde
            .coeff_at_h(case.h_power)
            .and_then(|t| t.coeff.to_f64())
            .ok_or_else(|| Error::Config(format!("no exact term for {}", case.label())))?;
        let spec = StencilSpec::new(case.degree, case.mode)?;
        let scale = spec.moments[case.coefficient]
            .leading()
            .map(|(_, s)| s.to_f64())
            .ok_or_else(|| Error::Config(format!("zero moment for {}", case.label())))?;
        let estimates = grids
            .par_iter()
            .map(|&n| residual_estimate(case, &pde, scale, n))
            .collect::<Result<Vec<f64>>>()?;
        for (w, pair) in grids.windows(2).zip(estimates.windows(2)) {
            rows.push(ResidualRow {
                case: case.clone(),
                n_coarse: w[0],
                n_fine: w[1],
                // the first surviving contamination is two h powers up
                measured: richardson(pair[0], pair[1], 2),
                exact,
            });
        }
    }
    Ok(ResidualReport { rows })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumReport {
    pub degree: usize,
    /// `(θ, eigenvalues)` per sample.
    pub samples: Vec<(f64, Vec<crate::dg_operator::Complex64>)>,
}

impl SpectrumReport {
    pub fn max_real(&self) -> f64 {
        self.samples
            .iter()
            .flat_map(|(_, ev)| ev.iter().map(|e| e.re))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let n = self.degree + 1;
        let mut out = String::from("theta");
        for i in 0..n {
            write!(out, ",re_{i},im_{i}").unwrap();
        }
        out.push('\n');
        for (theta, ev) in &self.samples {
            out.push_str(&sci(*theta));
            for e in ev {
                write!(out, ",{},{}", sci(e.re), sci(e.im)).unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn summary(&self) -> String {
        format!(
            "k={} samples={} max Re(lambda) = {:.3e}",
            self.degree,
            self.samples.len(),
            self.max_real()
        )
    }

    pub fn checks(&self) -> Vec<Check> {
        let m = self.max_real();
        vec![Check {
            name: format!("spectrum k={} max Re", self.degree),
            passed: m <= 1e-12,
            detail: format!("{m:.3e} <= 1e-12"),
        }]
    }
}

/// Eigenvalues of `G(θ)` at `θ = 2πm/n_theta`.
pub fn run_spectrum(k: usize, n_theta: usize) -> Result<SpectrumReport> {
    if n_theta < 64 {
        return Err(Error::Config(format!("need at least 64 theta samples, got {n_theta}")));
    }
    let samples = (0..n_theta)
        .map(|m| {
            let theta = 2.0 * PI * m as f64 / n_theta as f64;
            symbol_eigenvalues(theta, k).map(|ev| (theta, ev))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumReport { degree: k, samples })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorrectionRow {
    pub n: usize,
    pub max_abs: f64,
    /// `c` in `C ≈ c · u'''' · h²`, single grid.
    pub fitted: f64,
    pub ratio: Option<f64>,
    pub richardson: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorrectionReport {
    pub exact: f64,
    pub rows: Vec<CorrectionRow>,
}

impl CorrectionReport {
    pub const CSV_HEADER: &'static str = "N,dx,max_abs_C,ratio,fitted_coeff,richardson_coeff,rel_err";

    pub fn rel_err(&self, v: f64) -> f64 {
        (v - self.exact).abs() / self.exact.abs()
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("{}\n", Self::CSV_HEADER);
        for r in &self.rows {
            let opt = |v: Option<f64>| v.map_or(String::new(), sci);
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.n,
                sci(1.0 / r.n as f64),
                sci(r.max_abs),
                opt(r.ratio),
                sci(r.fitted),
                opt(r.richardson),
                opt(r.richardson.map(|v| self.rel_err(v)))
            )
            .unwrap();
        }
        out
    }

    pub fn summary(&self) -> String {
        let mut out = format!("exact coefficient 1/96 = {:.10}\n", self.exact);
        for r in &self.rows {
            writeln!(
                out,
                "N={:>5} max|C|={:.6e} ratio={} fit={:.10} richardson={}",
                r.n,
                r.max_abs,
                r.ratio.map_or("-".into(), |v| format!("{v:.4}")),
                r.fitted,
                r.richardson.map_or("-".into(), |v| format!("{v:.10}"))
            )
            .unwrap();
        }
        out
    }

    pub fn checks(&self) -> Vec<Check> {
        let Some(last) = self.rows.last() else {
            return Vec::new();
        };
        let rich = last.richardson.unwrap_or(f64::NAN);
        let ratio = last.ratio.unwrap_or(f64::NAN);
        vec![
            Check {
                name: "correction coefficient".into(),
                passed: self.rel_err(rich) <= 1e-2,
                detail: format!("{rich:.10} vs 1/96, rel err {:.2e}", self.rel_err(rich)),
            },
            Check {
                name: "correction max ratio".into(),
                passed: (ratio - 4.0).abs() <= 0.1,
                detail: format!("{ratio:.4} in 4.0 ± 0.1"),
            },
        ]
    }
}

/// Measures `C` at cell centres of `sin(2πx)` and fits `C/h²` against
/// `u''''`. The expected coefficient comes from the exact series.
pub fn run_correction(grids: &[usize]) -> Result<CorrectionReport> {
    require_doubling(grids)?;
    let series = correction_series();
    let (_, lead) = term_at_h_power(&series, 2)?;
    let exact = lead.to_f64();
    let mut rows: Vec<CorrectionRow> = Vec::with_capacity(grids.len());
    for &n in grids {
        let mesh = Mesh1D::new(n)?;
        let h = mesh.dx();
        let (mut values, mut shape) = (Vec::with_capacity(n), Vec::with_capacity(n));
        for j in 0..n {
            let x = mesh.center(j);
            let c = correction_term(|y| sine_derivative(0, y), |y| sine_derivative(2, y), x, h);
            values.push(c / (h * h));
            shape.push(sine_derivative(4, x));
        }
        let max_abs = values.iter().fold(0.0f64, |m, v| m.max(v.abs())) * h * h;
        let fitted = fit_amplitude(&values, &shape);
        let (ratio, rich) = match rows.last() {
            Some(prev) => (
                Some(prev.max_abs / max_abs),
                Some(richardson(prev.fitted, fitted, 2)),
            ),
            None => (None, None),
        };
        rows.push(CorrectionRow {
            n,
            max_abs,
            fitted,
            ratio,
            richardson: rich,
        });
    }
    Ok(CorrectionReport { exact, rows })
}

/// Side-by-side table of the P1 DG scheme and both second-order FV variants.
#[derive(Clone, Debug, PartialEq)]
pub struct CompareTable {
    pub tables: Vec<ResultTable>,
}

pub const COMPARE_SCHEMES: [Scheme; 3] = [Scheme::DgP1, Scheme::Fv2Central, Scheme::Fv2Upwind];

impl CompareTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,dx");
        for t in &self.tables {
            let s = t.scheme.name();
            write!(out, ",{s}_L1,{s}_L2,{s}_Linf,{s}_EOC_L1,{s}_EOC_L2,{s}_EOC_Linf").unwrap();
        }
        out.push_str(",eoc_status\n");
        let informational = self.tables.iter().any(|t| t.informational());
        let rows = self.tables.first().map_or(0, |t| t.rows.len());
        for i in 0..rows {
            let n = self.tables[0].rows[i].n;
            write!(out, "{n},{}", sci(1.0 / n as f64)).unwrap();
            for t in &self.tables {
                let r = &t.rows[i];
                match r.norms {
                    Some(e) => write!(out, ",{},{},{}", sci(e.l1), sci(e.l2), sci(e.linf)).unwrap(),
                    None => out.push_str(",nan,nan,nan"),
                }
                match r.eoc {
                    Some(e) => write!(out, ",{},{},{}", sci(e[0]), sci(e[1]), sci(e[2])).unwrap(),
                    None => out.push_str(",,,"),
                }
            }
            out.push_str(if informational { ",informational\n" } else { ",ok\n" });
        }
        out
    }

    pub fn summary(&self) -> String {
        self.tables
            .iter()
            .map(ResultTable::summary)
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Runs the comparison schemes with the shared settings of `config`; the
/// `scheme` field is ignored.
pub fn run_compare(config: &RunConfig) -> Result<CompareTable> {
    let tables = COMPARE_SCHEMES
        .iter()
        .map(|&scheme| {
            let c = RunConfig {
                scheme,
                ..config.clone()
            };
            run_convergence(&c)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CompareTable { tables })
}

/// Every modified equation and the correction expansion, as exact fractions.
pub fn taylor_report() -> Result<String> {
    let mut out = String::new();
    for k in 1..=2 {
        for mode in [InterfaceMode::UpwindTrace, InterfaceMode::ExactPoint] {
            for m in 0..=k {
                let pde = modified_pde(k, mode, m)?;
                writeln!(out, "k={k} {} a{m}: {pde}", mode.label()).unwrap();
            }
        }
    }
    let c = correction_series();
    let mut terms = Vec::new();
    for power in 0..=2 {
        let (p, coeff) = term_at_h_power(&c, power)?;
        let q = coeff
            .as_rational()
            .map(crate::exact_taylor::format_rational)
            .unwrap_or_else(|| coeff.to_string());
        let h = match power {
            0 => String::new(),
            1 => "h*".into(),
            e => format!("h^{e}*"),
        };
        terms.push(format!("{q}*{h}{}", derivative_name(p)));
    }
    writeln!(out, "correction: C = {} + O(h^3)", terms.join(" + ")).unwrap();
    Ok(out)
}

/// Name of the left-hand side for coefficient `m` (`u_t`, `u_xt`, ...).
pub fn rate_name(m: usize) -> String {
    time_rate_name(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parsing_and_validation() {
        let mut c = RunConfig::default();
        c.apply_kv_text("scheme = dg-p2\n# comment\ngrids=10,20\ncfl=0.2\nic=gauss:0.05\nintegrator=ssprk2\nseed=9\n")
            .unwrap();
        assert_eq!(c.scheme, Scheme::DgP2);
        assert_eq!(c.grids, vec![10, 20]);
        assert_eq!(c.ic, InitialCondition::Gauss(0.05));
        assert_eq!(c.integrator, Method::Ssprk2);
        assert_eq!(c.seed, 9);
        assert!(c.apply_kv_text("colour=red").is_err());
        assert!(c.apply_kv_text("no equals sign").is_err());
        c.grids = vec![40, 20];
        assert!(c.validate().is_err());
        c.grids = vec![20, 40];
        c.cfl = -1.0;
        assert!(c.validate().is_err());
        assert!("gauss:-1".parse::<InitialCondition>().is_err());
        assert!("weno".parse::<Scheme>().is_err());
    }

    #[test]
    fn eoc_matches_its_definition() {
        let c = RunConfig {
            scheme: Scheme::Fv2Central,
            grids: vec![16, 32, 64],
            ..RunConfig::default()
        };
        let t = run_convergence(&c).unwrap();
        for w in t.rows.windows(2) {
            let (a, b) = (w[0].norms.unwrap(), w[1].norms.unwrap());
            let e = w[1].eoc.unwrap();
            assert!((e[1] - (a.l2 / b.l2).log2()).abs() < 1e-12);
            assert!((e[0] - (a.l1 / b.l1).log2()).abs() < 1e-12);
            assert!((e[2] - (a.linf / b.linf).log2()).abs() < 1e-12);
        }
        assert!(t.rows[0].eoc.is_none());
        let csv = t.to_csv();
        let first = csv.lines().nth(1).unwrap();
        assert!(first.contains(",,,"), "first row has blank EOC: {first}");
    }

    #[test]
    fn zero_time_gives_projection_error() {
        let c = RunConfig {
            scheme: Scheme::DgP1,
            grids: vec![10, 20],
            periods: 0.0,
            ..RunConfig::default()
        };
        let t = run_convergence(&c).unwrap();
        let mesh = Mesh1D::new(10).unwrap();
        let p = project(|x| sine_derivative(0, x), mesh, ModalBasis::new(1).unwrap()).unwrap();
        let e = error_norms(&p, |x| sine_derivative(0, x));
        assert_eq!(t.rows[0].norms.unwrap(), e);
        assert_eq!(t.rows[0].steps, 0);
    }

    #[test]
    fn blow_up_marks_row_failed() {
        // P2 with forward Euler is unconditionally unstable; a huge step count
        // at cfl 1 overflows on the finer grid only after many steps
        let c = RunConfig {
            scheme: Scheme::DgP2,
            grids: vec![8, 16],
            cfl: 1.0,
            periods: 200.0,
            integrator: Method::Euler,
            ..RunConfig::default()
        };
        let t = run_convergence(&c).unwrap();
        assert!(t.rows.iter().all(|r| r.failed()));
        assert!(t.to_csv().contains("failed"));
        assert!(!t.checks().iter().all(|c| c.passed));
    }

    #[test]
    fn residual_requires_doubling() {
        assert!(run_residual(&[20, 30], &default_residual_cases()).is_err());
        assert!(run_correction(&[20, 50]).is_err());
    }

    #[test]
    fn spectrum_sample_floor() {
        assert!(run_spectrum(1, 32).is_err());
        let s = run_spectrum(0, 64).unwrap();
        let half = &s.samples[32];
        assert!((half.1[0].re + 2.0).abs() < 1e-14);
    }

    #[test]
    fn correction_of_linear_data_vanishes() {
        for &n in &[10usize, 20] {
            let mesh = Mesh1D::new(n).unwrap();
            for j in 0..n {
                let c = correction_term(|y| 3.0 * y - 1.0, |_| 0.0, mesh.center(j), mesh.dx());
                assert!(c.abs() < 1e-9);
            }
        }
    }

    #[test]
    fn taylor_report_lines() {
        let r = taylor_report().unwrap();
        assert!(r.contains("k=1 upwind a1: u_xt = 0*u_xx + (-2/5)*h*u_xxx + O(h^2)"));
        assert!(r.contains("k=1 exact a1: u_xt = (-1)*u_xx + 0*h*u_xxx + O(h^2)"));
        assert!(r.contains("correction: C = 0*u_xx + 0*h*u_xxx + 1/96*h^2*u_xxxx + O(h^3)"));
        assert_eq!(rate_name(2), "u_xxt");
    }
}
