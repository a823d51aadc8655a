//! Fixed-step integration of Hamiltonian systems on complex states.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

use crate::hamilton::HamiltonianSystem;
use crate::manifold::CoordSystem;
use crate::symcore::{CompiledExpr, Coord, Expr, SymError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    Rk4,
    Euler,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Rk4 => "rk4",
            Method::Euler => "euler",
        })
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "rk4" => Ok(Method::Rk4),
            "euler" => Ok(Method::Euler),
            other => Err(format!("unknown method `{other}` (expected rk4 or euler)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(String),
    #[error("initial condition does not bind {0}")]
    MissingInitial(Coord),
    #[error("evaluation failed at step {step}: {source}")]
    EvaluationFailure { step: usize, source: SymError },
    #[error("state became non-finite at step {step}")]
    NonFiniteState { step: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    method: Method,
    dt: f64,
    t_start: f64,
    t_end: f64,
}

impl IntegratorConfig {
    pub fn new(method: Method, dt: f64, t_start: f64, t_end: f64) -> Result<Self, FlowError> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(FlowError::InvalidConfig(format!("dt must be positive, got {dt}")));
        }
        if !(t_start.is_finite() && t_end.is_finite() && t_start < t_end) {
            return Err(FlowError::InvalidConfig(format!(
                "need t_start < t_end, got {t_start} and {t_end}"
            )));
        }
        if dt > t_end - t_start {
            return Err(FlowError::InvalidConfig(format!(
                "dt = {dt} exceeds the interval length {}",
                t_end - t_start
            )));
        }
        let steps = ((t_end - t_start) / dt).ceil();
        if steps >= (u32::MAX as f64) {
            return Err(FlowError::InvalidConfig(format!("{steps} steps is too many")));
        }
        Ok(IntegratorConfig { method, dt, t_start, t_end })
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    /// Sample times `t_start + j*dt`, with the last one clipped to `t_end`.
    pub fn times(&self) -> Vec<f64> {
        let span = self.t_end - self.t_start;
        let mut n = (span / self.dt).round() as usize;
        if (n as f64) * self.dt < span * (1.0 - 1e-12) {
            n += 1;
        }
        let mut times: Vec<f64> = (0..n).map(|j| self.t_start + j as f64 * self.dt).collect();
        times.push(self.t_end);
        times
    }
}

/// Samples of `(t, z^{ri}, zbar^{ri})` and the energy at each time.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    chart: CoordSystem,
    coords: Vec<Coord>,
    times: Vec<f64>,
    states: Vec<Vec<Complex64>>,
    energies: Vec<Complex64>,
}

impl Trajectory {
    pub fn chart(&self) -> CoordSystem {
        self.chart
    }

    /// Slot layout of every state: `t` first, then the fiber in canonical order.
    pub fn coords(&self) -> &[Coord] {
        &self.coords
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[Vec<Complex64>] {
        &self.states
    }

    pub fn energies(&self) -> &[Complex64] {
        &self.energies
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn value(&self, step: usize, c: Coord) -> Option<Complex64> {
        let slot = self.coords.iter().position(|x| *x == c)?;
        self.states.get(step).map(|s| s[slot])
    }

    pub fn state(&self, step: usize) -> Option<BTreeMap<Coord, Complex64>> {
        self.states
            .get(step)
            .map(|s| self.coords.iter().copied().zip(s.iter().copied()).collect())
    }

    pub fn final_state(&self) -> Option<BTreeMap<Coord, Complex64>> {
        self.state(self.len().checked_sub(1)?)
    }
}

struct Compiled {
    rhs: Vec<CompiledExpr>,
    energy: CompiledExpr,
}

impl Compiled {
    fn derivative(&self, state: &[Complex64], out: &mut [Complex64]) -> Result<(), SymError> {
        out[0] = Complex64::new(1.0, 0.0);
        for (slot, f) in self.rhs.iter().enumerate() {
            out[slot + 1] = f.eval(state)?;
        }
        Ok(())
    }
}

fn axpy(y: &[Complex64], h: f64, k: &[Complex64], out: &mut [Complex64]) {
    for ((o, a), b) in out.iter_mut().zip(y).zip(k) {
        *o = a + b * h;
    }
}

/// Integrates `dc/dt = rhs[c]` with `dt/dt = 1`. Coordinates without
/// dynamics have zero right-hand side and stay constant.
pub fn integrate(
    sys: &HamiltonianSystem,
    initial: &BTreeMap<Coord, Complex64>,
    cfg: &IntegratorConfig,
) -> Result<Trajectory, FlowError> {
    let chart = sys.chart;
    let coords = chart.enumerate();
    let slot_of = |c: Coord| coords.iter().position(|x| *x == c);
    let compile = |e| CompiledExpr::compile(e, &slot_of)
        .map_err(|source| FlowError::EvaluationFailure { step: 0, source });
    let zero_rhs = Expr::zero();
    let compiled = Compiled {
        rhs: coords[1..]
            .iter()
            .map(|c| compile(sys.rhs.get(c).unwrap_or(&zero_rhs)))
            .collect::<Result<_, _>>()?,
        energy: compile(&sys.h)?,
    };

    let times = cfg.times();
    let n = coords.len();
    let mut y = Vec::with_capacity(n);
    y.push(Complex64::new(times[0], 0.0));
    for c in &coords[1..] {
        y.push(*initial.get(c).ok_or(FlowError::MissingInitial(*c))?);
    }

    let fail = |step: usize| move |source| FlowError::EvaluationFailure { step, source };
    let mut states = Vec::with_capacity(times.len());
    let mut energies = Vec::with_capacity(times.len());
    energies.push(compiled.energy.eval(&y).map_err(fail(0))?);
    states.push(y.clone());

    let zero = Complex64::new(0.0, 0.0);
    let (mut k1, mut k2, mut k3, mut k4) = (vec![zero; n], vec![zero; n], vec![zero; n], vec![zero; n]);
    let mut tmp = vec![zero; n];
    for step in 1..times.len() {
        let h = times[step] - times[step - 1];
        match cfg.method {
            Method::Euler => {
                compiled.derivative(&y, &mut k1).map_err(fail(step))?;
                axpy(&y.clone(), h, &k1, &mut y);
            }
            Method::Rk4 => {
                compiled.derivative(&y, &mut k1).map_err(fail(step))?;
                axpy(&y, h / 2.0, &k1, &mut tmp);
                compiled.derivative(&tmp, &mut k2).map_err(fail(step))?;
                axpy(&y, h / 2.0, &k2, &mut tmp);
                compiled.derivative(&tmp, &mut k3).map_err(fail(step))?;
                axpy(&y, h, &k3, &mut tmp);
                compiled.derivative(&tmp, &mut k4).map_err(fail(step))?;
                for j in 0..n {
                    y[j] += (k1[j] + k2[j] * 2.0 + k3[j] * 2.0 + k4[j]) * (h / 6.0);
                }
            }
        }
        y[0] = Complex64::new(times[step], 0.0);
        if y.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(FlowError::NonFiniteState { step });
        }
        let e = compiled.energy.eval(&y).map_err(fail(step))?;
        if !e.re.is_finite() || !e.im.is_finite() {
            return Err(FlowError::NonFiniteState { step });
        }
        energies.push(e);
        states.push(y.clone());
    }

    Ok(Trajectory { chart, coords, times, states, energies })
}

/// `max_j |H_j - H_0| / max(|H_0|, 1e-12)`.
pub fn energy_drift(traj: &Trajectory) -> f64 {
    let Some(h0) = traj.energies.first() else {
        return 0.0;
    };
    let scale = h0.norm().max(1e-12);
    traj.energies
        .iter()
        .map(|h| (h - h0).norm() / scale)
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamilton::solve_hamiltonian_field;
    use crate::lifts::LiftKind;

    fn oscillator_system() -> HamiltonianSystem {
        let chart = CoordSystem::new(1, 0).unwrap();
        solve_hamiltonian_field(&(Expr::z(0, 1) * Expr::zbar(0, 1)), chart, LiftKind::complete(0)).unwrap()
    }

    fn unit_initial() -> BTreeMap<Coord, Complex64> {
        [
            (Coord::z(0, 1), Complex64::new(1.0, 0.0)),
            (Coord::zbar(0, 1), Complex64::new(1.0, 0.0)),
        ]
        .into_iter()
        .collect()
    }

    fn max_error(traj: &Trajectory) -> f64 {
        (0..traj.len())
            .map(|j| {
                let exact = Complex64::new(0.0, -traj.times()[j]).exp();
                (traj.value(j, Coord::z(0, 1)).unwrap() - exact).norm()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn oscillator_tracks_exact_solution() {
        let cfg = IntegratorConfig::new(Method::Rk4, 1e-3, 0.0, 10.0).unwrap();
        let traj = integrate(&oscillator_system(), &unit_initial(), &cfg).unwrap();
        assert_eq!(traj.len(), 10_001);
        assert!(max_error(&traj) <= 1e-6);
        assert!(energy_drift(&traj) <= 1e-8);
        for j in 0..traj.len() {
            assert_eq!(traj.value(j, Coord::Time).unwrap().re, traj.times()[j]);
        }
    }

    #[test]
    fn euler_drifts_more_than_rk4() {
        let rk4 = IntegratorConfig::new(Method::Rk4, 1e-2, 0.0, 10.0).unwrap();
        let euler = IntegratorConfig::new(Method::Euler, 1e-2, 0.0, 10.0).unwrap();
        let a = energy_drift(&integrate(&oscillator_system(), &unit_initial(), &rk4).unwrap());
        let b = energy_drift(&integrate(&oscillator_system(), &unit_initial(), &euler).unwrap());
        assert!(b > a);
    }

    #[test]
    fn step_halving_reduces_error() {
        let run = |dt| {
            let cfg = IntegratorConfig::new(Method::Rk4, dt, 0.0, 10.0).unwrap();
            max_error(&integrate(&oscillator_system(), &unit_initial(), &cfg).unwrap())
        };
        assert!(run(0.1) / run(0.05) >= 12.0);
    }

    #[test]
    fn zero_hamiltonian_is_constant() {
        let chart = CoordSystem::new(1, 0).unwrap();
        let sys = solve_hamiltonian_field(&Expr::zero(), chart, LiftKind::complete(0)).unwrap();
        let cfg = IntegratorConfig::new(Method::Rk4, 0.1, 0.0, 1.0).unwrap();
        let traj = integrate(&sys, &unit_initial(), &cfg).unwrap();
        assert!(traj.states().iter().all(|s| s[1] == Complex64::new(1.0, 0.0)));
        assert_eq!(energy_drift(&traj), 0.0);
    }

    #[test]
    fn clipped_last_step() {
        let cfg = IntegratorConfig::new(Method::Rk4, 0.3, 0.0, 1.0).unwrap();
        assert_eq!(cfg.times(), vec![0.0, 0.3, 0.6, 0.8999999999999999, 1.0]);
        assert!(IntegratorConfig::new(Method::Rk4, 2.0, 0.0, 1.0).is_err());
        assert!(IntegratorConfig::new(Method::Rk4, 0.1, 1.0, 1.0).is_err());
    }

    #[test]
    fn blow_up_is_reported() {
        let chart = CoordSystem::new(1, 0).unwrap();
        let h = Expr::z(0, 1).pow(4) * Expr::zbar(0, 1) * Expr::i();
        let sys = solve_hamiltonian_field(&h, chart, LiftKind::complete(0)).unwrap();
        let init = [
            (Coord::z(0, 1), Complex64::new(10.0, 0.0)),
            (Coord::zbar(0, 1), Complex64::new(10.0, 0.0)),
        ]
        .into_iter()
        .collect();
        let cfg = IntegratorConfig::new(Method::Euler, 0.5, 0.0, 10.0).unwrap();
        assert!(matches!(integrate(&sys, &init, &cfg), Err(FlowError::NonFiniteState { .. })));
    }

    #[test]
    fn missing_initial_value() {
        let cfg = IntegratorConfig::new(Method::Rk4, 0.1, 0.0, 1.0).unwrap();
        let init = [(Coord::z(0, 1), Complex64::new(1.0, 0.0))].into_iter().collect();
        assert_eq!(
            integrate(&oscillator_system(), &init, &cfg),
            Err(FlowError::MissingInitial(Coord::zbar(0, 1)))
        );
    }
}
