//! Exact modal bases on the reference cell ξ ∈ [-1/2, 1/2] and the
//! projection moments that express each coefficient as a derivative series.

use num::{BigInt, BigRational, One, Zero};

use super::qf::{rat, Qf};
use super::series::DerivativeSeries;
use super::TaylorError;

/// Polynomial in ξ with exact coefficients, lowest power first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactPoly(pub Vec<Qf>);

impl ExactPoly {
    pub fn eval(&self, xi: &BigRational) -> Qf {
        let mut acc = Qf::zero();
        for c in self.0.iter().rev() {
            acc = acc.scale(xi) + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> ExactPoly {
        if self.0.len() <= 1 {
            return ExactPoly(vec![Qf::zero()]);
        }
        ExactPoly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.scale(&rat(i as i64, 1)))
                .collect(),
        )
    }

    pub fn mul(&self, other: &ExactPoly) -> ExactPoly {
        let mut out = vec![Qf::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        ExactPoly(out)
    }

    /// ∫ p(ξ) dξ over [-1/2, 1/2].
    pub fn integrate_cell(&self) -> Qf {
        let mut acc = Qf::zero();
        for (i, c) in self.0.iter().enumerate() {
            acc += &c.scale(&monomial_integral(i));
        }
        acc
    }
}

/// ∫ ξ^p dξ over [-1/2, 1/2]: zero for odd p, `1/(2^p (p+1))` for even p.
pub fn monomial_integral(p: usize) -> BigRational {
    if p % 2 == 1 {
        return BigRational::zero();
    }
    let den = BigInt::from(2u32).pow(p as u32) * BigInt::from(p + 1);
    BigRational::new(BigInt::one(), den)
}

/// The modal basis for degree `k`:
/// `{1}`, `{1, ξ}` or `{1, 2√3 ξ, 6√5 ξ² − √5/2}`.
pub fn exact_basis(k: usize) -> Result<Vec<ExactPoly>, TaylorError> {
    Ok(match k {
        0 => vec![ExactPoly(vec![Qf::one()])],
        1 => vec![ExactPoly(vec![Qf::one()]), ExactPoly(vec![Qf::zero(), Qf::one()])],
        2 => vec![
            ExactPoly(vec![Qf::one()]),
            ExactPoly(vec![Qf::zero(), Qf::sqrt3(rat(2, 1))]),
            ExactPoly(vec![
                Qf::sqrt5(rat(-1, 2)),
                Qf::zero(),
                Qf::sqrt5(rat(6, 1)),
            ]),
        ],
        _ => return Err(TaylorError::UnsupportedDegree(k)),
    })
}

/// Diagonal of the mass matrix `∫ φ_m² dξ`.
pub fn mass_diagonal(k: usize) -> Result<Vec<Qf>, TaylorError> {
    Ok(exact_basis(k)?
        .iter()
        .map(|phi| phi.mul(phi).integrate_cell())
        .collect())
}

/// Expresses each L2-projection coefficient of a smooth `u` as a series in
/// the derivatives of `u` at the cell centre:
/// `a_m = Σ_p u^(p) h^p / p! · ∫ φ_m ξ^p / ∫ φ_m²`.
pub fn basis_moments_with_order(
    k: usize,
    order: usize,
) -> Result<Vec<DerivativeSeries>, TaylorError> {
    let basis = exact_basis(k)?;
    let mut out = Vec::with_capacity(basis.len());
    for phi in &basis {
        let norm = phi.mul(phi).integrate_cell();
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut inv_fact = BigRational::one();
        for p in 0..=order {
            if p > 0 {
                inv_fact /= BigRational::from_integer(p.into());
            }
            let mut xi_p = vec![Qf::zero(); p + 1];
            xi_p[p] = Qf::one();
            let moment = phi.mul(&ExactPoly(xi_p)).integrate_cell();
            coeffs.push(moment.div_monomial(&norm)?.scale(&inv_fact));
        }
        out.push(DerivativeSeries::from_coeffs(coeffs));
    }
    Ok(out)
}

pub fn basis_moments(k: usize) -> Result<Vec<DerivativeSeries>, TaylorError> {
    basis_moments_with_order(k, super::series::DEFAULT_ORDER)
}
