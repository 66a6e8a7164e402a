//! Taylor-table derivation of the modified equations obeyed by each modal
//! coefficient of the upwind DG update.

use std::fmt;

use num::{BigRational, Zero};

use super::basis::{basis_moments_with_order, exact_basis, mass_diagonal};
use super::qf::{format_rational, rat, Qf};
use super::series::{combine, DerivativeSeries, DEFAULT_ORDER};
use super::TaylorError;
use crate::dg_operator::UpdateMatrices;

/// Smallest truncation order that still resolves every claim checked here.
pub const MIN_ORDER: usize = 5;

/// Where the interface values in the boundary terms come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InterfaceMode {
    /// Right trace of the upwind (left) neighbour, i.e. the matrix form.
    UpwindTrace,
    /// The exact solution sampled at `x_{j±1/2}`.
    ExactPoint,
}

impl InterfaceMode {
    pub fn label(self) -> &'static str {
        match self {
            InterfaceMode::UpwindTrace => "upwind",
            InterfaceMode::ExactPoint => "exact",
        }
    }
}

/// Everything needed to expand one coefficient-update stencil.
#[derive(Clone, Debug)]
pub struct StencilSpec {
    pub degree: usize,
    pub a: Vec<Vec<Qf>>,
    pub b: Vec<Vec<Qf>>,
    pub moments: Vec<DerivativeSeries>,
    pub mode: InterfaceMode,
    pub right_trace: Vec<Qf>,
    pub left_trace: Vec<Qf>,
    pub mass: Vec<Qf>,
}

impl StencilSpec {
    pub fn new(degree: usize, mode: InterfaceMode) -> Result<Self, TaylorError> {
        Self::with_order(degree, mode, DEFAULT_ORDER)
    }

    pub fn with_order(degree: usize, mode: InterfaceMode, order: usize) -> Result<Self, TaylorError> {
        let m = UpdateMatrices::exact(degree).map_err(|_| TaylorError::UnsupportedDegree(degree))?;
        let basis = exact_basis(degree)?;
        Ok(Self {
            degree,
            a: m.a,
            b: m.b,
            moments: basis_moments_with_order(degree, order)?,
            mode,
            right_trace: basis.iter().map(|p| p.eval(&rat(1, 2))).collect(),
            left_trace: basis.iter().map(|p| p.eval(&rat(-1, 2))).collect(),
            mass: mass_diagonal(degree)?,
        })
    }

    fn order(&self) -> usize {
        self.moments.iter().map(|s| s.order()).min().unwrap_or(0)
    }

    /// `A − M⁻¹ r rᵀ`: the part of `A` that does not come from the own-cell
    /// right trace. It is `−M⁻¹ ∫ φ_m' φ_n dξ`.
    pub fn volume_matrix(&self) -> Result<Vec<Vec<Qf>>, TaylorError> {
        let n = self.degree + 1;
        let mut v = self.a.clone();
        for i in 0..n {
            for j in 0..n {
                let rr = (&self.right_trace[i] * &self.right_trace[j]).div_monomial(&self.mass[i])?;
                v[i][j] = &v[i][j] - &rr;
            }
        }
        Ok(v)
    }
}

/// Series for `d a_m/dt`, one per coefficient, in powers of `h`.
///
/// Upwind mode expands `−(1/h)[A a(x) − B a(x−h)]`. Exact-point mode
/// replaces the trace terms by the exact values `u(x ± h/2)`.
pub fn modified_equation(spec: &StencilSpec) -> Result<Vec<DerivativeSeries>, TaylorError> {
    let order = spec.order();
    if order < MIN_ORDER {
        return Err(TaylorError::TruncationExhausted {
            requested: MIN_ORDER,
            order,
        });
    }
    let n = spec.degree + 1;
    let here = &spec.moments;
    let mut out = Vec::with_capacity(n);
    match spec.mode {
        InterfaceMode::UpwindTrace => {
            let behind = here
                .iter()
                .map(|s| s.shift(&rat(-1, 1)))
                .collect::<Result<Vec<_>, _>>()?;
            for m in 0..n {
                let mut terms: Vec<(Qf, &DerivativeSeries)> = Vec::with_capacity(2 * n);
                for col in 0..n {
                    terms.push((-&spec.a[m][col], &here[col]));
                    terms.push((spec.b[m][col].clone(), &behind[col]));
                }
                out.push(combine(&terms)?.mul_h_pow(-1));
            }
        }
        InterfaceMode::ExactPoint => {
            let unit = DerivativeSeries::unit(order);
            let plus = unit.shift(&rat(1, 2))?;
            let minus = unit.shift(&rat(-1, 2))?;
            let vol = spec.volume_matrix()?;
            for m in 0..n {
                let inv_mass = spec.mass[m].recip_monomial()?;
                let mut terms: Vec<(Qf, &DerivativeSeries)> = Vec::with_capacity(n + 2);
                for col in 0..n {
                    terms.push((-&vol[m][col], &here[col]));
                }
                terms.push((-(&inv_mass * &spec.right_trace[m]), &plus));
                terms.push((&inv_mass * &spec.left_trace[m], &minus));
                out.push(combine(&terms)?.mul_h_pow(-1));
            }
        }
    }
    Ok(out)
}

/// One term `coeff · h^h_power · ∂_x^derivative u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PdeTerm {
    pub derivative: usize,
    pub coeff: BigRational,
    pub h_power: i32,
}

/// `∂_t ∂_x^time_derivative u = Σ terms`, normalised so that the left side
/// has unit coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModifiedPde {
    pub time_derivative: usize,
    pub terms: Vec<PdeTerm>,
    /// Highest h power whose coefficient is fully resolved by the truncation.
    pub resolved_through: i32,
}

impl ModifiedPde {
    pub fn coeff_at_h(&self, h_power: i32) -> Option<&PdeTerm> {
        self.terms.iter().find(|t| t.h_power == h_power)
    }

    /// Human-readable form with terms through `h^max_h_power`.
    pub fn display_through(&self, max_h_power: i32) -> String {
        let mut rhs = Vec::new();
        for t in &self.terms {
            if t.h_power > max_h_power || (t.h_power < 0 && t.coeff.is_zero()) {
                continue;
            }
            let h = match t.h_power {
                0 => String::new(),
                1 => "h*".to_string(),
                e => format!("h^{e}*"),
            };
            rhs.push(format!(
                "{}*{}{}",
                format_rational(&t.coeff),
                h,
                derivative_name(t.derivative)
            ));
        }
        format!(
            "{} = {} + O(h^{})",
            time_rate_name(self.time_derivative),
            rhs.join(" + "),
            max_h_power + 1
        )
    }
}

/// `u_t`, `u_xt`, `u_xxt`, ...
pub fn time_rate_name(m: usize) -> String {
    if m == 0 {
        "u_t".into()
    } else {
        format!("u_{}t", "x".repeat(m))
    }
}

/// `u`, `u_x`, `u_xx`, ...
pub fn derivative_name(p: usize) -> String {
    if p == 0 {
        "u".into()
    } else {
        format!("u_{}", "x".repeat(p))
    }
}

impl fmt::Display for ModifiedPde {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_through(1))
    }
}

/// Normalises `d a_m/dt` by the leading scale `s·h^m` of `a_m`, turning it
/// into a statement about `∂_t ∂_x^m u`.
///
/// Every coefficient must come out rational; a surviving surd means the
/// derivation is inconsistent and is reported as a failure.
pub fn as_modified_pde(
    rate: &DerivativeSeries,
    leading: (usize, &Qf),
) -> Result<ModifiedPde, TaylorError> {
    let (m, scale) = leading;
    if scale.is_zero() {
        return Err(TaylorError::DivisionByZero);
    }
    let inv = scale.recip_monomial()?;
    let mut terms = Vec::with_capacity(rate.order() + 1);
    for (p, c) in rate.coeffs().iter().enumerate() {
        let q = c * &inv;
        let coeff = q.as_rational().cloned().ok_or_else(|| TaylorError::IrrationalCoefficient {
            derivative: p,
            value: q.to_string(),
        })?;
        terms.push(PdeTerm {
            derivative: p,
            coeff,
            h_power: p as i32 + rate.h_shift() - m as i32,
        });
    }
    let resolved_through = rate.order() as i32 + rate.h_shift() - m as i32;
    Ok(ModifiedPde {
        time_derivative: m,
        terms,
        resolved_through,
    })
}

/// Convenience: modified PDE for coefficient `m` of degree `k` in `mode`.
pub fn modified_pde(k: usize, mode: InterfaceMode, m: usize) -> Result<ModifiedPde, TaylorError> {
    let spec = StencilSpec::new(k, mode)?;
    let rates = modified_equation(&spec)?;
    let rate = rates.get(m).ok_or(TaylorError::UnsupportedDegree(k))?;
    let lead = spec.moments[m]
        .leading()
        .ok_or(TaylorError::DivisionByZero)?;
    as_modified_pde(rate, lead)
}

/// Expansion of `C = 2(U(x+h/2) + U(x−h/2) − 2U(x))/h² − U''/2` about `x`.
/// The series is stored with `h_shift = −2`, so `c_p` multiplies `h^(p−2)`.
pub fn correction_series() -> DerivativeSeries {
    correction_series_with_order(DEFAULT_ORDER)
}

pub fn correction_series_with_order(order: usize) -> DerivativeSeries {
    let unit = DerivativeSeries::unit(order);
    let plus = unit.shift(&rat(1, 2)).expect("half-cell shift");
    let minus = unit.shift(&rat(-1, 2)).expect("half-cell shift");
    let two = Qf::int(2);
    let diff = combine(&[(two.clone(), &plus), (two, &minus), (Qf::int(-4), &unit)])
        .expect("matching bookkeeping")
        .mul_h_pow(-2);
    // U''/2 = (1/2) u'' h^2 · h^-2
    let half_uxx = DerivativeSeries::monomial(order, 2, Qf::frac(1, 2)).mul_h_pow(-2);
    diff.try_sub(&half_uxx).expect("matching bookkeeping")
}

/// Coefficient multiplying `h^power` in a series whose terms pair `u^(p)`
/// with `h^(p + shift)`, together with the derivative order it sits on.
pub fn term_at_h_power(series: &DerivativeSeries, power: i32) -> Result<(usize, &Qf), TaylorError> {
    let p = power - series.h_shift();
    if p < 0 {
        return Err(TaylorError::TruncationExhausted {
            requested: 0,
            order: series.order(),
        });
    }
    let p = p as usize;
    Ok((p, series.coeff(p)?))
}
