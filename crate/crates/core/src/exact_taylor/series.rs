use num::{BigRational, One, Signed, Zero};

use super::qf::{rat, Qf};
use super::TaylorError;

/// Truncation order used unless a caller asks for more.
pub const DEFAULT_ORDER: usize = 8;

/// Formal sum `Σ_p c_p · u^(p)(x_j) · h^(p + h_shift)` for `p = 0..=order`.
///
/// Terms above `order` are unknown, not zero: asking for one is an error.
/// `h_shift` starts at zero and moves by one every time the series is
/// divided or multiplied by the mesh width.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivativeSeries {
    coeffs: Vec<Qf>,
    h_shift: i32,
}

impl DerivativeSeries {
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![Qf::zero(); order + 1],
            h_shift: 0,
        }
    }

    /// The series of `u(x_j)` itself.
    pub fn unit(order: usize) -> Self {
        Self::monomial(order, 0, Qf::one())
    }

    /// `coeff · u^(p) h^p`
    pub fn monomial(order: usize, p: usize, coeff: Qf) -> Self {
        let mut s = Self::zero(order);
        if p <= order {
            s.coeffs[p] = coeff;
        }
        s
    }

    pub fn from_coeffs(coeffs: Vec<Qf>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least the order-0 term");
        Self { coeffs, h_shift: 0 }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn h_shift(&self) -> i32 {
        self.h_shift
    }

    /// Coefficient of `u^(p)`; errors once `p` passes the truncation order.
    pub fn coeff(&self, p: usize) -> Result<&Qf, TaylorError> {
        self.coeffs.get(p).ok_or(TaylorError::TruncationExhausted {
            requested: p,
            order: self.order(),
        })
    }

    pub fn coeffs(&self) -> &[Qf] {
        &self.coeffs
    }

    /// Smallest `p` with a nonzero coefficient.
    pub fn leading(&self) -> Option<(usize, &Qf)> {
        self.coeffs.iter().enumerate().find(|(_, c)| !c.is_zero())
    }

    pub fn scale(&self, k: &Qf) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
            h_shift: self.h_shift,
        }
    }

    pub fn scale_rational(&self, q: &BigRational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c.scale(q)).collect(),
            h_shift: self.h_shift,
        }
    }

    /// Multiplies by `h^power` (negative powers divide).
    pub fn mul_h_pow(&self, power: i32) -> Self {
        Self {
            coeffs: self.coeffs.clone(),
            h_shift: self.h_shift + power,
        }
    }

    /// Sum of two series with matching h bookkeeping. The result is exact only
    /// through the smaller truncation order, so it is cut there.
    pub fn try_add(&self, other: &Self) -> Result<Self, TaylorError> {
        if self.h_shift != other.h_shift {
            return Err(TaylorError::ShiftMismatch(self.h_shift, other.h_shift));
        }
        let order = self.order().min(other.order());
        Ok(Self {
            coeffs: (0..=order)
                .map(|p| &self.coeffs[p] + &other.coeffs[p])
                .collect(),
            h_shift: self.h_shift,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, TaylorError> {
        self.try_add(&other.scale_rational(&rat(-1, 1)))
    }

    /// Re-expands the series about `x_j` after moving the evaluation point to
    /// `x_j + offset·h`:
    /// `u^(p)(x + s h) = Σ_q u^(p+q)(x) (s h)^q / q!`.
    /// Only offsets with `|offset| ≤ 1` (whole and half cells) are accepted.
    pub fn shift(&self, offset: &BigRational) -> Result<Self, TaylorError> {
        if offset.abs() > BigRational::one() {
            return Err(TaylorError::OffsetOutOfRange(offset.to_string()));
        }
        let order = self.order();
        // (s^q / q!) for q = 0..=order
        let mut weights = Vec::with_capacity(order + 1);
        let mut w = BigRational::one();
        for q in 0..=order {
            if q > 0 {
                w = w * offset / BigRational::from_integer(q.into());
            }
            weights.push(w.clone());
        }
        let mut out = vec![Qf::zero(); order + 1];
        for (p, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (q, wq) in weights.iter().enumerate().take(order + 1 - p) {
                if !wq.is_zero() {
                    out[p + q] += &c.scale(wq);
                }
            }
        }
        Ok(Self {
            coeffs: out,
            h_shift: self.h_shift,
        })
    }

    /// Evaluates the series for concrete derivative values and mesh width.
    pub fn evaluate(&self, derivs: &[f64], h: f64) -> f64 {
        self.coeffs
            .iter()
            .zip(derivs)
            .enumerate()
            .filter(|(_, (c, _))| !c.is_zero())
            .map(|(p, (c, d))| c.to_f64() * d * h.powi(p as i32 + self.h_shift))
            .sum()
    }
}

/// Linear combination `Σ w_i s_i` of series sharing h bookkeeping.
pub fn combine(terms: &[(Qf, &DerivativeSeries)]) -> Result<DerivativeSeries, TaylorError> {
    let mut iter = terms.iter();
    let (w0, s0) = iter.next().ok_or(TaylorError::EmptyCombination)?;
    let mut acc = s0.scale(w0);
    for (w, s) in iter {
        if w.is_zero() {
            continue;
        }
        acc = acc.try_add(&s.scale(w))?;
    }
    Ok(acc)
}
