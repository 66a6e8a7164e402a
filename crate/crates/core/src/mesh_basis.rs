//! Uniform periodic mesh on [0, 1], the modal bases, L2 projection and
//! pointwise evaluation.
//!
//! Cells are indexed from zero. Cell `j` covers `[j dx, (j+1) dx]` and its
//! local coordinate is `ξ = (x − x_j)/dx ∈ [−1/2, 1/2]`.

use crate::error::{Error, Result};

/// Five-point Gauss–Legendre rule mapped to [−1/2, 1/2]; weights sum to one.
#[allow(clippy::excessive_precision)]
pub const GAUSS_NODES: [f64; 5] = [
    -0.453_089_922_969_331_996_398_813_439,
    -0.269_234_655_052_841_545_518_157_210,
    0.0,
    0.269_234_655_052_841_545_518_157_210,
    0.453_089_922_969_331_996_398_813_439,
];
#[allow(clippy::excessive_precision)]
pub const GAUSS_WEIGHTS: [f64; 5] = [
    0.118_463_442_528_094_543_757_132_020,
    0.239_314_335_249_683_234_020_645_757,
    0.284_444_444_444_444_444_444_444_444,
    0.239_314_335_249_683_234_020_645_757,
    0.118_463_442_528_094_543_757_132_020,
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mesh1D {
    cells: usize,
}

impl Mesh1D {
    pub fn new(cells: usize) -> Result<Self> {
        if cells == 0 {
            return Err(Error::EmptyMesh);
        }
        Ok(Self { cells })
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn dx(&self) -> f64 {
        1.0 / self.cells as f64
    }

    pub fn center(&self, j: usize) -> f64 {
        (j as f64 + 0.5) / self.cells as f64
    }

    /// `x_{j+1/2}`
    pub fn right_face(&self, j: usize) -> f64 {
        (j + 1) as f64 / self.cells as f64
    }

    /// `x_{j-1/2}`
    pub fn left_face(&self, j: usize) -> f64 {
        j as f64 / self.cells as f64
    }

    /// Periodic upwind neighbour.
    pub fn prev(&self, j: usize) -> usize {
        (j + self.cells - 1) % self.cells
    }

    pub fn next(&self, j: usize) -> usize {
        (j + 1) % self.cells
    }

    /// Owning cell and local coordinate of `x`. Points on an interface belong
    /// to the cell on their left; `x = 0` is the right face of the last cell.
    pub fn locate(&self, x: f64) -> Result<(usize, f64)> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::OutOfDomain(x));
        }
        let s = x * self.cells as f64;
        let nearest = s.round();
        let s = if (s - nearest).abs() <= 4.0 * f64::EPSILON * nearest.max(1.0) {
            nearest
        } else {
            s
        };
        if s == 0.0 {
            return Ok((self.cells - 1, 0.5));
        }
        let j = (s.ceil() as usize - 1).min(self.cells - 1);
        Ok((j, s - j as f64 - 0.5))
    }
}

/// One of the modal bases `{1}`, `{1, ξ}` or `{1, 2√3ξ, 6√5ξ² − √5/2}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModalBasis {
    degree: usize,
    /// Monomial coefficients of each basis function, lowest power first.
    poly: Vec<[f64; 3]>,
    mass: Vec<f64>,
}

impl ModalBasis {
    pub fn new(degree: usize) -> Result<Self> {
        let (poly, mass) = match degree {
            0 => (vec![[1.0, 0.0, 0.0]], vec![1.0]),
            1 => (vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]], vec![1.0, 1.0 / 12.0]),
            2 => {
                let s3 = 3f64.sqrt();
                let s5 = 5f64.sqrt();
                (
                    vec![
                        [1.0, 0.0, 0.0],
                        [0.0, 2.0 * s3, 0.0],
                        [-0.5 * s5, 0.0, 6.0 * s5],
                    ],
                    vec![1.0; 3],
                )
            }
            _ => return Err(Error::UnsupportedDegree(degree)),
        };
        Ok(Self { degree, poly, mass })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.degree + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `∫ φ_m² dξ`
    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn phi(&self, m: usize, xi: f64) -> f64 {
        let c = &self.poly[m];
        c[0] + xi * (c[1] + xi * c[2])
    }

    pub fn dphi(&self, m: usize, xi: f64) -> f64 {
        let c = &self.poly[m];
        c[1] + 2.0 * xi * c[2]
    }

    /// `Σ_m a_m φ_m(ξ)`
    pub fn combine(&self, coeffs: &[f64], xi: f64) -> f64 {
        coeffs
            .iter()
            .enumerate()
            .map(|(m, a)| a * self.phi(m, xi))
            .sum()
    }

    pub fn right_trace(&self) -> Vec<f64> {
        (0..self.len()).map(|m| self.phi(m, 0.5)).collect()
    }

    pub fn left_trace(&self) -> Vec<f64> {
        (0..self.len()).map(|m| self.phi(m, -0.5)).collect()
    }
}

/// Per-cell modal coefficients, stored cell-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ModalField {
    mesh: Mesh1D,
    basis: ModalBasis,
    coeffs: Vec<f64>,
}

impl ModalField {
    pub fn zeros(mesh: Mesh1D, basis: ModalBasis) -> Self {
        let coeffs = vec![0.0; mesh.cells() * basis.len()];
        Self { mesh, basis, coeffs }
    }

    /// Builds a field from per-cell coefficient vectors.
    pub fn from_cells(mesh: Mesh1D, basis: ModalBasis, cells: &[Vec<f64>]) -> Result<Self> {
        if cells.len() != mesh.cells() {
            return Err(Error::MeshMismatch(cells.len(), mesh.cells()));
        }
        let mut coeffs = Vec::with_capacity(mesh.cells() * basis.len());
        for c in cells {
            if c.len() != basis.len() {
                return Err(Error::DegreeMismatch {
                    field: c.len().saturating_sub(1),
                    expected: basis.degree(),
                });
            }
            coeffs.extend_from_slice(c);
        }
        Ok(Self { mesh, basis, coeffs })
    }

    pub fn mesh(&self) -> &Mesh1D {
        &self.mesh
    }

    pub fn basis(&self) -> &ModalBasis {
        &self.basis
    }

    pub fn degree(&self) -> usize {
        self.basis.degree()
    }

    pub fn cell(&self, j: usize) -> &[f64] {
        let n = self.basis.len();
        &self.coeffs[j * n..(j + 1) * n]
    }

    pub fn cell_mut(&mut self, j: usize) -> &mut [f64] {
        let n = self.basis.len();
        &mut self.coeffs[j * n..(j + 1) * n]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    /// Cell average of cell `j`, which is the mean-mode coefficient.
    pub fn average(&self, j: usize) -> f64 {
        self.cell(j)[0]
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    fn check_cell(&self, j: usize) -> Result<()> {
        if j >= self.mesh.cells() {
            return Err(Error::CellIndex {
                index: j,
                cells: self.mesh.cells(),
            });
        }
        Ok(())
    }

    /// `u_h` at local coordinate `xi` of cell `j`.
    pub fn eval_cell(&self, j: usize, xi: f64) -> f64 {
        self.basis.combine(self.cell(j), xi)
    }

    /// Value at `ξ = +1/2`.
    pub fn trace_right(&self, j: usize) -> Result<f64> {
        self.check_cell(j)?;
        Ok(self.eval_cell(j, 0.5))
    }

    /// Value at `ξ = −1/2`.
    pub fn trace_left(&self, j: usize) -> Result<f64> {
        self.check_cell(j)?;
        Ok(self.eval_cell(j, -0.5))
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let (j, xi) = self.mesh.locate(x)?;
        Ok(self.eval_cell(j, xi))
    }
}

/// Cell-wise L2 projection of `f` onto the basis.
pub fn project<F>(f: F, mesh: Mesh1D, basis: ModalBasis) -> Result<ModalField>
where
    F: Fn(f64) -> f64,
{
    let mut field = ModalField::zeros(mesh, basis);
    let dx = mesh.dx();
    let n = field.basis.len();
    for j in 0..mesh.cells() {
        let xc = mesh.center(j);
        let mut acc = vec![0.0; n];
        for (xi, w) in GAUSS_NODES.iter().zip(GAUSS_WEIGHTS) {
            let x = xc + xi * dx;
            let v = f(x);
            if !v.is_finite() {
                return Err(Error::NonFiniteSample { cell: j, x });
            }
            for (m, a) in acc.iter_mut().enumerate() {
                *a += w * v * field.basis.phi(m, *xi);
            }
        }
        for (m, a) in acc.into_iter().enumerate() {
            field.cell_mut(j)[m] = a / field.basis.mass()[m];
        }
    }
    Ok(field)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorNorms {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
}

/// Quadrature approximations of `‖u_h − f‖` in L1, L2 and the max over
/// quadrature points.
pub fn error_norms<F>(field: &ModalField, f_exact: F) -> ErrorNorms
where
    F: Fn(f64) -> f64,
{
    let mesh = field.mesh();
    let dx = mesh.dx();
    let (mut l1, mut l2, mut linf) = (0.0, 0.0, 0.0f64);
    for j in 0..mesh.cells() {
        let xc = mesh.center(j);
        let (mut c1, mut c2) = (0.0, 0.0);
        for (xi, w) in GAUSS_NODES.iter().zip(GAUSS_WEIGHTS) {
            let e = (field.eval_cell(j, *xi) - f_exact(xc + xi * dx)).abs();
            c1 += w * e;
            c2 += w * e * e;
            linf = linf.max(e);
        }
        l1 += c1 * dx;
        l2 += c2 * dx;
    }
    ErrorNorms {
        l1,
        l2: l2.sqrt(),
        linf,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sine(x: f64) -> f64 {
        (2.0 * PI * x).sin()
    }

    #[test]
    fn gauss_rule_integrates_degree_nine() {
        for p in 0..=9 {
            let q: f64 = GAUSS_NODES
                .iter()
                .zip(GAUSS_WEIGHTS)
                .map(|(x, w)| w * x.powi(p))
                .sum();
            let exact = if p % 2 == 1 {
                0.0
            } else {
                1.0 / (2f64.powi(p) * (p as f64 + 1.0))
            };
            assert!((q - exact).abs() < 1e-16, "p = {p}");
        }
    }

    #[test]
    fn gram_matrices_are_diagonal() {
        for k in 0..=2 {
            let b = ModalBasis::new(k).unwrap();
            for i in 0..b.len() {
                for j in 0..b.len() {
                    let g: f64 = GAUSS_NODES
                        .iter()
                        .zip(GAUSS_WEIGHTS)
                        .map(|(x, w)| w * b.phi(i, *x) * b.phi(j, *x))
                        .sum();
                    let want = if i == j { b.mass()[i] } else { 0.0 };
                    assert!((g - want).abs() < 1e-14, "k={k} ({i},{j}) {g}");
                }
            }
        }
    }

    #[test]
    fn trace_vectors() {
        assert_eq!(ModalBasis::new(1).unwrap().right_trace(), vec![1.0, 0.5]);
        let r = ModalBasis::new(2).unwrap().right_trace();
        assert!((r[1] - 3f64.sqrt()).abs() < 1e-15);
        assert!((r[2] - 5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn constant_projects_to_mean_mode() {
        let mesh = Mesh1D::new(7).unwrap();
        let f = project(|_| 2.5, mesh, ModalBasis::new(2).unwrap()).unwrap();
        for j in 0..7 {
            let c = f.cell(j);
            assert!((c[0] - 2.5).abs() < 1e-15);
            assert!(c[1].abs() < 1e-15 && c[2].abs() < 1e-14);
        }
    }

    #[test]
    fn identity_on_single_cell() {
        let mesh = Mesh1D::new(1).unwrap();
        let f = project(|x| x, mesh, ModalBasis::new(1).unwrap()).unwrap();
        assert!((f.cell(0)[0] - 0.5).abs() < 1e-15);
        assert!((f.cell(0)[1] - 1.0).abs() < 1e-15);
        assert!((f.eval(0.75).unwrap() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn sine_averages_match_antiderivative() {
        let mesh = Mesh1D::new(8).unwrap();
        let f = project(sine, mesh, ModalBasis::new(1).unwrap()).unwrap();
        let anti = |x: f64| -(2.0 * PI * x).cos() / (2.0 * PI);
        for j in 0..8 {
            let avg = (anti(mesh.right_face(j)) - anti(mesh.left_face(j))) / mesh.dx();
            assert!((f.average(j) - avg).abs() < 1e-12);
        }
    }

    #[test]
    fn non_finite_sample_names_cell() {
        let mesh = Mesh1D::new(4).unwrap();
        let err = project(
            |x| if x > 0.5 && x < 0.75 { f64::NAN } else { 1.0 },
            mesh,
            ModalBasis::new(1).unwrap(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonFiniteSample { cell: 2, .. }));
        assert!(err.to_string().contains("cell 2"));
    }

    #[test]
    fn traces_and_point_values() {
        let mesh = Mesh1D::new(3).unwrap();
        let p1 = ModalField::from_cells(
            mesh,
            ModalBasis::new(1).unwrap(),
            &[vec![1.0, 2.0], vec![0.0, 0.0], vec![0.0, 0.0]],
        )
        .unwrap();
        assert_eq!(p1.trace_right(0).unwrap(), 2.0);
        assert!(p1.trace_right(3).is_err());

        let b2 = ModalBasis::new(2).unwrap();
        let top = ModalField::from_cells(mesh, b2.clone(), &vec![vec![0.0, 0.0, 1.0]; 3]).unwrap();
        assert!((top.trace_right(1).unwrap() - 5f64.sqrt()).abs() < 1e-15);
        assert!((top.eval(mesh.center(1)).unwrap() + 0.5 * 5f64.sqrt()).abs() < 1e-15);
        let slope = ModalField::from_cells(mesh, b2, &vec![vec![0.0, 1.0, 0.0]; 3]).unwrap();
        assert!((slope.trace_left(2).unwrap() + 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn eval_rejects_outside_points() {
        let f = ModalField::zeros(Mesh1D::new(4).unwrap(), ModalBasis::new(0).unwrap());
        assert!(matches!(f.eval(1.5), Err(Error::OutOfDomain(_))));
        assert!(f.eval(-1e-9).is_err());
    }

    #[test]
    fn trace_matches_interface_eval_bitwise() {
        let mesh = Mesh1D::new(10).unwrap();
        let f = project(sine, mesh, ModalBasis::new(2).unwrap()).unwrap();
        for j in 0..10 {
            assert_eq!(f.trace_right(j).unwrap(), f.eval(mesh.right_face(j)).unwrap());
        }
        assert_eq!(f.eval(0.0).unwrap(), f.trace_right(9).unwrap());
    }

    #[test]
    fn polynomial_in_span_has_zero_error() {
        let mesh = Mesh1D::new(5).unwrap();
        let q = |x: f64| 1.0 - 3.0 * x + 2.0 * x * x;
        let f = project(q, mesh, ModalBasis::new(2).unwrap()).unwrap();
        let e = error_norms(&f, q);
        assert!(e.l1 < 1e-12 && e.l2 < 1e-12 && e.linf < 1e-12);
        let z = ModalField::zeros(mesh, ModalBasis::new(1).unwrap());
        let e = error_norms(&z, |_| 0.0);
        assert_eq!((e.l1, e.l2, e.linf), (0.0, 0.0, 0.0));
    }

    #[test]
    fn projection_error_is_second_order_for_p1() {
        let b = ModalBasis::new(1).unwrap();
        let e40 = error_norms(&project(sine, Mesh1D::new(40).unwrap(), b.clone()).unwrap(), sine);
        let e80 = error_norms(&project(sine, Mesh1D::new(80).unwrap(), b).unwrap(), sine);
        let ratio = e40.l2 / e80.l2;
        assert!((ratio - 4.0).abs() < 0.05, "ratio {ratio}");
    }

    #[test]
    fn reprojection_is_idempotent() {
        let mesh = Mesh1D::new(6).unwrap();
        for k in 0..=2 {
            let b = ModalBasis::new(k).unwrap();
            let f = project(sine, mesh, b.clone()).unwrap();
            let g = project(|x| f.eval(x).unwrap(), mesh, b).unwrap();
            for (a, c) in f.coeffs().iter().zip(g.coeffs()) {
                assert!((a - c).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn projection_matches_moment_expansion() {
        // a0 − (u + h² u''/24) = O(h⁴), a1 − (u' h + u''' h³/40) = O(h⁵)
        let w = 2.0 * PI;
        let defect = |n: usize| {
            let mesh = Mesh1D::new(n).unwrap();
            let h = mesh.dx();
            let f = project(sine, mesh, ModalBasis::new(1).unwrap()).unwrap();
            let (mut d0, mut d1) = (0.0f64, 0.0f64);
            for j in 0..n {
                let x = mesh.center(j);
                let (s, c) = ((w * x).sin(), (w * x).cos());
                let a0 = s - h * h * w * w * s / 24.0;
                let a1 = w * c * h - w.powi(3) * c * h.powi(3) / 40.0;
                d0 = d0.max((f.cell(j)[0] - a0).abs());
                d1 = d1.max((f.cell(j)[1] - a1).abs());
            }
            (d0, d1)
        };
        let (c0, c1) = defect(20);
        let (f0, f1) = defect(40);
        let r0 = (c0 / f0).log2();
        let r1 = (c1 / f1).log2();
        assert!((r0 - 4.0).abs() < 0.1, "a0 order {r0}");
        assert!((r1 - 5.0).abs() < 0.1, "a1 order {r1}");
    }
}
