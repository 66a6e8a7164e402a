//! First- and second-order upwind finite-volume baselines.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::mesh_basis::{ErrorNorms, Mesh1D, GAUSS_NODES, GAUSS_WEIGHTS};

/// Cell averages on a periodic mesh.
#[derive(Clone, Debug, PartialEq)]
pub struct AverageField {
    mesh: Mesh1D,
    values: Vec<f64>,
}

impl AverageField {
    pub fn new(mesh: Mesh1D, values: Vec<f64>) -> Result<Self> {
        if values.len() != mesh.cells() {
            return Err(Error::MeshMismatch(values.len(), mesh.cells()));
        }
        Ok(Self { mesh, values })
    }

    pub fn zeros(mesh: Mesh1D) -> Self {
        Self {
            mesh,
            values: vec![0.0; mesh.cells()],
        }
    }

    /// Cell averages of `f` by five-point Gauss quadrature.
    pub fn from_function<F: Fn(f64) -> f64>(f: F, mesh: Mesh1D) -> Result<Self> {
        let values = cell_averages(&f, mesh)?;
        Ok(Self { mesh, values })
    }

    pub fn mesh(&self) -> &Mesh1D {
        &self.mesh
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn total_variation(&self) -> f64 {
        let n = self.values.len();
        (0..n)
            .map(|j| (self.values[(j + 1) % n] - self.values[j]).abs())
            .sum()
    }
}

fn cell_averages<F: Fn(f64) -> f64>(f: &F, mesh: Mesh1D) -> Result<Vec<f64>> {
    let dx = mesh.dx();
    (0..mesh.cells())
        .map(|j| {
            let xc = mesh.center(j);
            let mut acc = 0.0;
            for (xi, w) in GAUSS_NODES.iter().zip(GAUSS_WEIGHTS) {
                let x = xc + xi * dx;
                let v = f(x);
                if !v.is_finite() {
                    return Err(Error::NonFiniteSample { cell: j, x });
                }
                acc += w * v;
            }
            Ok(acc)
        })
        .collect()
}

/// Discrete norms of `ū_j − (exact cell average)_j`.
pub fn average_error_norms<F: Fn(f64) -> f64>(field: &AverageField, f_exact: F) -> Result<ErrorNorms> {
    let exact = cell_averages(&f_exact, field.mesh)?;
    let dx = field.mesh.dx();
    let (mut l1, mut l2, mut linf) = (0.0, 0.0, 0.0f64);
    for (u, e) in field.values.iter().zip(exact) {
        let d = (u - e).abs();
        l1 += d * dx;
        l2 += d * d * dx;
        linf = linf.max(d);
    }
    Ok(ErrorNorms {
        l1,
        l2: l2.sqrt(),
        linf,
    })
}

/// Slope used by the unlimited second-order reconstruction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SlopeChoice {
    /// `(ū_{j+1} − ū_{j−1})/2`
    Central,
    /// `ū_j − ū_{j−1}`
    UpwindBiased,
}

impl FromStr for SlopeChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "central" => Ok(SlopeChoice::Central),
            "upwind" | "upwind-biased" => Ok(SlopeChoice::UpwindBiased),
            other => Err(Error::Config(format!("unknown slope choice `{other}`"))),
        }
    }
}

/// `dū_j/dt = −(ū_j − ū_{j−1})/Δx`
pub fn rhs_fv1(field: &AverageField) -> AverageField {
    let mesh = field.mesh;
    let dx = mesh.dx();
    let u = &field.values;
    let values = (0..mesh.cells())
        .map(|j| -(u[j] - u[mesh.prev(j)]) / dx)
        .collect();
    AverageField { mesh, values }
}

/// Unlimited MUSCL upwind update with the chosen slope.
pub fn rhs_fv2(field: &AverageField, slope: SlopeChoice) -> AverageField {
    let mesh = field.mesh;
    let u = &field.values;
    let slopes: Vec<f64> = (0..mesh.cells())
        .map(|j| match slope {
            SlopeChoice::Central => 0.5 * (u[mesh.next(j)] - u[mesh.prev(j)]),
            SlopeChoice::UpwindBiased => u[j] - u[mesh.prev(j)],
        })
        .collect();
    rhs_fv2_from_slopes(field, &slopes)
}

/// Upwind update with interface values `ū_j + s_j/2` for given slopes.
pub fn rhs_fv2_from_slopes(field: &AverageField, slopes: &[f64]) -> AverageField {
    let mesh = field.mesh;
    let dx = mesh.dx();
    let face: Vec<f64> = field
        .values
        .iter()
        .zip(slopes)
        .map(|(u, s)| u + 0.5 * s)
        .collect();
    let values = (0..mesh.cells())
        .map(|j| -(face[j] - face[mesh.prev(j)]) / dx)
        .collect();
    AverageField { mesh, values }
}
