//! Explicit strong-stability-preserving Runge–Kutta integration with a
//! fixed CFL step.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fv_reference::AverageField;
use crate::mesh_basis::ModalField;

/// Vector-space operations the integrator needs from a state.
pub trait State: Clone {
    /// `self += alpha · x`
    fn axpy(&mut self, alpha: f64, x: &Self);
    fn scale(&mut self, s: f64);
    fn is_finite(&self) -> bool;
}

impl State for ModalField {
    fn axpy(&mut self, alpha: f64, x: &Self) {
        for (a, b) in self.coeffs_mut().iter_mut().zip(x.coeffs()) {
            *a += alpha * b;
        }
    }
    fn scale(&mut self, s: f64) {
        self.coeffs_mut().iter_mut().for_each(|a| *a *= s);
    }
    fn is_finite(&self) -> bool {
        self.coeffs().iter().all(|v| v.is_finite())
    }
}

impl State for AverageField {
    fn axpy(&mut self, alpha: f64, x: &Self) {
        for (a, b) in self.values_mut().iter_mut().zip(x.values()) {
            *a += alpha * b;
        }
    }
    fn scale(&mut self, s: f64) {
        self.values_mut().iter_mut().for_each(|a| *a *= s);
    }
    fn is_finite(&self) -> bool {
        self.values().iter().all(|v| v.is_finite())
    }
}

impl State for Vec<f64> {
    fn axpy(&mut self, alpha: f64, x: &Self) {
        for (a, b) in self.iter_mut().zip(x) {
            *a += alpha * b;
        }
    }
    fn scale(&mut self, s: f64) {
        self.iter_mut().for_each(|a| *a *= s);
    }
    fn is_finite(&self) -> bool {
        self.iter().all(|v| v.is_finite())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Euler,
    Ssprk2,
    Ssprk3,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Euler => "euler",
            Method::Ssprk2 => "ssprk2",
            Method::Ssprk3 => "ssprk3",
        }
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euler" => Ok(Method::Euler),
            "ssprk2" => Ok(Method::Ssprk2),
            "ssprk3" => Ok(Method::Ssprk3),
            other => Err(Error::Config(format!("unknown integrator `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Integrator {
    pub method: Method,
    pub cfl: f64,
    pub t_final: f64,
}

impl Integrator {
    pub fn new(method: Method, cfl: f64, t_final: f64) -> Result<Self> {
        if !(cfl > 0.0 && cfl.is_finite()) {
            return Err(Error::Config(format!("cfl must be positive, got {cfl}")));
        }
        if !(t_final >= 0.0 && t_final.is_finite()) {
            return Err(Error::Config(format!("t_final must be non-negative, got {t_final}")));
        }
        Ok(Self { method, cfl, t_final })
    }

    /// One step of size `dt` from time `t`.
    pub fn step<S, F>(&self, state: &S, rhs: &F, t: f64, dt: f64) -> Result<S>
    where
        S: State,
        F: Fn(&S, f64) -> Result<S>,
    {
        step(self.method, state, rhs, t, dt)
    }

    /// Steps of `cfl·dx` until `t_final`, shortening the last one to land
    /// exactly. Returns the final state and the number of steps.
    pub fn integrate<S, F>(&self, initial: S, dx: f64, rhs: F) -> Result<(S, usize)>
    where
        S: State,
        F: Fn(&S, f64) -> Result<S>,
    {
        let dt_full = self.cfl * dx;
        let mut state = initial;
        let mut t = 0.0;
        let mut steps = 0;
        while t < self.t_final {
            let remaining = self.t_final - t;
            // absorb a sliver left over by round-off into the last step
            let dt = if remaining <= dt_full * (1.0 + 1e-10) {
                remaining
            } else {
                dt_full
            };
            state = step(self.method, &state, &rhs, t, dt).map_err(|e| match e {
                Error::NonFiniteState { .. } => Error::NonFiniteState { step: steps },
                other => other,
            })?;
            steps += 1;
            t = if dt == remaining { self.t_final } else { t + dt };
        }
        Ok((state, steps))
    }
}

/// One explicit step; SSPRK3 is the Shu–Osher convex form.
pub fn step<S, F>(method: Method, u: &S, rhs: &F, t: f64, dt: f64) -> Result<S>
where
    S: State,
    F: Fn(&S, f64) -> Result<S>,
{
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidTimeStep(dt));
    }
    let next = match method {
        Method::Euler => {
            let mut u1 = u.clone();
            u1.axpy(dt, &rhs(u, t)?);
            u1
        }
        Method::Ssprk2 => {
            let mut u1 = u.clone();
            u1.axpy(dt, &rhs(u, t)?);
            let l1 = rhs(&u1, t + dt)?;
            // u + 1/2 (u1 − u) + 1/2 dt L(u1)
            let mut out = u.clone();
            out.scale(0.5);
            out.axpy(0.5, &u1);
            out.axpy(0.5 * dt, &l1);
            out
        }
        Method::Ssprk3 => {
            let mut u1 = u.clone();
            u1.axpy(dt, &rhs(u, t)?);
            let l1 = rhs(&u1, t + dt)?;
            let mut u2 = u.clone();
            u2.scale(0.75);
            u2.axpy(0.25, &u1);
            u2.axpy(0.25 * dt, &l1);
            let l2 = rhs(&u2, t + 0.5 * dt)?;
            let mut out = u.clone();
            out.scale(1.0 / 3.0);
            out.axpy(2.0 / 3.0, &u2);
            out.axpy(2.0 / 3.0 * dt, &l2);
            out
        }
    };
    if !next.is_finite() {
        return Err(Error::NonFiniteState { step: 0 });
    }
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decay(lambda: f64) -> impl Fn(&Vec<f64>, f64) -> Result<Vec<f64>> {
        move |y: &Vec<f64>, _t| Ok(y.iter().map(|v| lambda * v).collect())
    }

    #[test]
    fn zero_rhs_leaves_state() {
        let zero = |y: &Vec<f64>, _t: f64| Ok(vec![0.0; y.len()]);
        for m in [Method::Euler, Method::Ssprk2, Method::Ssprk3] {
            let y = vec![1.0, -2.0];
            assert_eq!(step(m, &y, &zero, 0.0, 0.1).unwrap(), y);
        }
    }

    #[test]
    fn stability_polynomials() {
        let lambda = -1.7;
        let dt = 0.13;
        let z: f64 = lambda * dt;
        let y = vec![2.0];
        let e = step(Method::Euler, &y, &decay(lambda), 0.0, dt).unwrap()[0];
        assert!((e - 2.0 * (1.0 + z)).abs() < 1e-15);
        let r2 = step(Method::Ssprk2, &y, &decay(lambda), 0.0, dt).unwrap()[0];
        assert!((r2 - 2.0 * (1.0 + z + z * z / 2.0)).abs() < 1e-15);
        let r3 = step(Method::Ssprk3, &y, &decay(lambda), 0.0, dt).unwrap()[0];
        let want = 2.0 * (1.0 + z + z * z / 2.0 + z.powi(3) / 6.0);
        assert!((r3 - want).abs() < 1e-15);
    }

    #[test]
    fn temporal_orders() {
        let lambda: f64 = -1.0;
        for (m, order) in [(Method::Euler, 1.0), (Method::Ssprk2, 2.0), (Method::Ssprk3, 3.0)] {
            let err = |cfl: f64| {
                let (y, _) = Integrator::new(m, cfl, 1.0)
                    .unwrap()
                    .integrate(vec![1.0], 1.0, decay(lambda))
                    .unwrap();
                (y[0] - lambda.exp()).abs()
            };
            let measured = (err(0.02) / err(0.01)).log2();
            assert!((measured - order).abs() < 0.1, "{m:?}: {measured}");
        }
    }

    #[test]
    fn lands_on_final_time() {
        let clock = |_y: &Vec<f64>, _t: f64| Ok(vec![1.0]);
        let (y, steps) = Integrator::new(Method::Euler, 0.3, 1.0)
            .unwrap()
            .integrate(vec![0.0], 1.0, clock)
            .unwrap();
        assert_eq!(steps, 4);
        assert!((y[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_final_time_takes_no_steps() {
        let (y, steps) = Integrator::new(Method::Ssprk3, 0.1, 0.0)
            .unwrap()
            .integrate(vec![5.0], 0.1, decay(-1.0))
            .unwrap();
        assert_eq!((y, steps), (vec![5.0], 0));
    }

    #[test]
    fn blow_up_reports_step() {
        let grow = decay(1e200);
        let err = Integrator::new(Method::Euler, 1.0, 10.0)
            .unwrap()
            .integrate(vec![1e200], 1.0, grow)
            .unwrap_err();
        assert_eq!(err, Error::NonFiniteState { step: 0 });
        let err = step(Method::Euler, &vec![1.0], &decay(1.0), 0.0, -1.0).unwrap_err();
        assert!(matches!(err, Error::InvalidTimeStep(_)));
    }

    #[test]
    fn bad_parameters_rejected() {
        assert!(Integrator::new(Method::Euler, 0.0, 1.0).is_err());
        assert!(Integrator::new(Method::Euler, 0.1, -1.0).is_err());
        assert!("rk4".parse::<Method>().is_err());
    }
}
