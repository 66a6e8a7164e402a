//! Semi-discrete upwind DG right-hand side for `u_t + u_x = 0`.
//!
//! Two independent routes compute `da/dt`: the weak form, tested against
//! every basis function with Gauss quadrature for the volume term, and the
//! closed-form update `Δx da^j/dt + A a^j − B a^{j−1} = 0`.

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};
use crate::exact_taylor::{rat, Qf};
use crate::mesh_basis::{ModalBasis, ModalField, GAUSS_NODES, GAUSS_WEIGHTS};

pub type Complex64 = Complex<f64>;

/// Interface value used in the boundary terms of the weak form.
#[derive(Clone, Copy)]
pub enum FluxRule<'a> {
    /// Right trace of the upwind cell.
    Upwind,
    /// Exact solution `u(x, t)` sampled at the interface coordinate. Only
    /// meant for consistency checks, not for time stepping.
    ExactInterface(&'a (dyn Fn(f64, f64) -> f64 + Sync)),
}

impl std::fmt::Debug for FluxRule<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FluxRule::Upwind => write!(f, "Upwind"),
            FluxRule::ExactInterface(_) => write!(f, "ExactInterface(..)"),
        }
    }
}

/// Exact `(A, B)` pair plus its floating-point image.
#[derive(Clone, Debug)]
pub struct UpdateMatrices {
    pub degree: usize,
    pub a: Vec<Vec<Qf>>,
    pub b: Vec<Vec<Qf>>,
    a_float: Vec<Vec<f64>>,
    b_float: Vec<Vec<f64>>,
}

impl UpdateMatrices {
    pub fn exact(degree: usize) -> Result<Self> {
        let q = |n: i64, d: i64| Qf::frac(n, d);
        let s3 = |n: i64| Qf::sqrt3(rat(n, 1));
        let s5 = |n: i64| Qf::sqrt5(rat(n, 1));
        let s15 = |n: i64| Qf::sqrt15(rat(n, 1));
        let (a, b) = match degree {
            0 => (vec![vec![q(1, 1)]], vec![vec![q(1, 1)]]),
            1 => (
                vec![vec![q(1, 1), q(1, 2)], vec![q(-6, 1), q(3, 1)]],
                vec![vec![q(1, 1), q(1, 2)], vec![q(-6, 1), q(-3, 1)]],
            ),
            2 => (
                vec![
                    vec![q(1, 1), s3(1), s5(1)],
                    vec![s3(-1), q(3, 1), s15(1)],
                    vec![s5(1), s15(-1), q(5, 1)],
                ],
                vec![
                    vec![q(1, 1), s3(1), s5(1)],
                    vec![s3(-1), q(-3, 1), s15(-1)],
                    vec![s5(1), s15(1), q(5, 1)],
                ],
            ),
            _ => return Err(Error::UnsupportedDegree(degree)),
        };
        let demote = |m: &Vec<Vec<Qf>>| -> Vec<Vec<f64>> {
            m.iter().map(|row| row.iter().map(Qf::to_f64).collect()).collect()
        };
        Ok(Self {
            degree,
            a_float: demote(&a),
            b_float: demote(&b),
            a,
            b,
        })
    }

    pub fn a_float(&self) -> &[Vec<f64>] {
        &self.a_float
    }

    pub fn b_float(&self) -> &[Vec<f64>] {
        &self.b_float
    }
}

/// Which route evaluates the right-hand side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RhsPath {
    Weak,
    Matrix,
}

#[derive(Clone, Debug)]
pub struct DgOperator {
    basis: ModalBasis,
    matrices: UpdateMatrices,
}

impl DgOperator {
    pub fn new(degree: usize) -> Result<Self> {
        Ok(Self {
            basis: ModalBasis::new(degree)?,
            matrices: UpdateMatrices::exact(degree)?,
        })
    }

    pub fn degree(&self) -> usize {
        self.basis.degree()
    }

    pub fn basis(&self) -> &ModalBasis {
        &self.basis
    }

    pub fn matrices(&self) -> &UpdateMatrices {
        &self.matrices
    }

    fn check(&self, field: &ModalField) -> Result<()> {
        if field.degree() != self.degree() {
            return Err(Error::DegreeMismatch {
                field: field.degree(),
                expected: self.degree(),
            });
        }
        Ok(())
    }

    /// Weak-form right-hand side.
    pub fn rhs_weak(&self, field: &ModalField, flux: FluxRule<'_>, t: f64) -> Result<ModalField> {
        self.check(field)?;
        let mesh = *field.mesh();
        let dx = mesh.dx();
        let n = self.basis.len();
        let right = self.basis.right_trace();
        let left = self.basis.left_trace();
        let mut out = ModalField::zeros(mesh, self.basis.clone());
        for j in 0..mesh.cells() {
            let (u_plus, u_minus) = match flux {
                FluxRule::Upwind => (
                    field.eval_cell(j, 0.5),
                    field.eval_cell(mesh.prev(j), 0.5),
                ),
                FluxRule::ExactInterface(u) => (u(mesh.right_face(j), t), u(mesh.left_face(j), t)),
            };
            let values: Vec<f64> = GAUSS_NODES.iter().map(|xi| field.eval_cell(j, *xi)).collect();
            let rate = out.cell_mut(j);
            for m in 0..n {
                let volume: f64 = GAUSS_NODES
                    .iter()
                    .zip(GAUSS_WEIGHTS)
                    .zip(&values)
                    .map(|((xi, w), v)| w * v * self.basis.dphi(m, *xi))
                    .sum();
                let boundary = u_plus * right[m] - u_minus * left[m];
                rate[m] = (volume - boundary) / (dx * self.basis.mass()[m]);
            }
        }
        Ok(out)
    }

    /// Closed-form right-hand side `−(A a^j − B a^{j−1})/Δx`.
    pub fn rhs_matrix(&self, field: &ModalField) -> Result<ModalField> {
        self.check(field)?;
        let mesh = *field.mesh();
        let dx = mesh.dx();
        let n = self.basis.len();
        let a = self.matrices.a_float();
        let b = self.matrices.b_float();
        let mut out = ModalField::zeros(mesh, self.basis.clone());
        for j in 0..mesh.cells() {
            let here = field.cell(j);
            let behind = field.cell(mesh.prev(j));
            let rate = out.cell_mut(j);
            for m in 0..n {
                let mut acc = 0.0;
                for c in 0..n {
                    acc += a[m][c] * here[c] - b[m][c] * behind[c];
                }
                rate[m] = -acc / dx;
            }
        }
        Ok(out)
    }

    /// Upwind right-hand side through the chosen path.
    pub fn rhs(&self, field: &ModalField, path: RhsPath) -> Result<ModalField> {
        match path {
            RhsPath::Weak => self.rhs_weak(field, FluxRule::Upwind, 0.0),
            RhsPath::Matrix => self.rhs_matrix(field),
        }
    }

    /// Fourier symbol `G(θ) = −(A − B e^{−iθ})` per unit mesh width.
    pub fn symbol(&self, theta: f64) -> DMatrix<Complex64> {
        symbol_of(&self.matrices, theta)
    }
}

fn symbol_of(m: &UpdateMatrices, theta: f64) -> DMatrix<Complex64> {
    let n = m.degree + 1;
    let phase = Complex64::from_polar(1.0, -theta);
    DMatrix::from_fn(n, n, |i, j| {
        -(Complex64::new(m.a_float()[i][j], 0.0) - phase * m.b_float()[i][j])
    })
}

/// `G(θ)` for degree `k`.
pub fn symbol(theta: f64, k: usize) -> Result<DMatrix<Complex64>> {
    Ok(symbol_of(&UpdateMatrices::exact(k)?, theta))
}

/// Eigenvalues of `G(θ)`, sorted by real then imaginary part.
pub fn symbol_eigenvalues(theta: f64, k: usize) -> Result<Vec<Complex64>> {
    let g = symbol(theta, k)?;
    let mut ev: Vec<Complex64> = if g.nrows() == 1 {
        vec![g[(0, 0)]]
    } else {
        g.schur()
            .eigenvalues()
            .map(|v| v.iter().copied().collect())
            .unwrap_or_default()
    };
    ev.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(ev)
}

/// `C = 2(U^{j+1/2} + U^{j−1/2} − 2U^j)/Δx² − U_xx^j/2`, the gap between the
/// slope update written in finite-volume form and a pure flux difference.
pub fn correction_term<U, Uxx>(u_exact: U, u_xx_exact: Uxx, x_j: f64, dx: f64) -> f64
where
    U: Fn(f64) -> f64,
    Uxx: Fn(f64) -> f64,
{
    let second = u_exact(x_j + 0.5 * dx) + u_exact(x_j - 0.5 * dx) - 2.0 * u_exact(x_j);
    2.0 * second / (dx * dx) - 0.5 * u_xx_exact(x_j)
}
