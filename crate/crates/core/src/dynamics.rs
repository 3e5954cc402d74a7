//! Local amplitude damping on all three qubits and the resulting decay of
//! genuine entanglement for `√(1−y)|000⟩ + √y|111⟩`.
//!
//! Time is measured in units of the damping time `τ`; the survival amplitude
//! is `p = e^{−t/2}` and the decay amplitude `q = √(1 − e^{−t})`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlators::{mi_tripartite, mp_tripartite, named_basis, named_observable, pcc_tripartite};
use crate::density::{embed_operator, DensityMatrix3Q, NUM_QUBITS};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ZERO};
use crate::measures::x_state_gmc;
use crate::states::{make_ghz_y, PureState3Q};

/// Upper end of the bracket searched for the sudden-death time.
pub const ESD_BRACKET: f64 = 50.0;
pub const ESD_RESIDUAL_TOL: f64 = 1e-12;
/// Slack allowed above the largest admissible `C₊` before it is rejected.
pub const PCC_RANGE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DampingParams {
    pub y: f64,
    pub t_over_tau: f64,
}

impl DampingParams {
    pub fn new(y: f64, t_over_tau: f64) -> Result<Self> {
        check_y_closed(y)?;
        check_time(t_over_tau)?;
        Ok(Self { y, t_over_tau })
    }

    pub fn p(&self) -> f64 {
        survival(self.t_over_tau)
    }

    pub fn q(&self) -> f64 {
        decay(self.t_over_tau)
    }
}

fn survival(t: f64) -> f64 {
    (-t / 2.0).exp()
}

fn decay(t: f64) -> f64 {
    (-(-t).exp_m1()).max(0.0).sqrt()
}

fn check_time(t: f64) -> Result<()> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::out_of_domain("t_over_tau", t, "[0, ∞)"));
    }
    Ok(())
}

fn check_y_closed(y: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&y) {
        return Err(Error::out_of_domain("y", y, "[0, 1]"));
    }
    Ok(())
}

fn check_y_open(y: f64) -> Result<()> {
    if !(y > 0.0 && y < 1.0) {
        return Err(Error::out_of_domain("y", y, "(0, 1)"));
    }
    Ok(())
}

/// Single-qubit Kraus pair `K₀ = diag(1, p)`, `K₁ = q|0⟩⟨1|`.
pub fn kraus_operators(t_over_tau: f64) -> Result<[ComplexMatrix; 2]> {
    check_time(t_over_tau)?;
    let p = Complex64::new(survival(t_over_tau), 0.0);
    let q = Complex64::new(decay(t_over_tau), 0.0);
    let one = Complex64::new(1.0, 0.0);
    Ok([
        ComplexMatrix::new(2, 2, vec![one, ZERO, ZERO, p])?,
        ComplexMatrix::new(2, 2, vec![ZERO, q, ZERO, ZERO])?,
    ])
}

/// Applies the damping channel independently to each qubit.
pub fn damp_density(rho: &DensityMatrix3Q, t_over_tau: f64) -> Result<DensityMatrix3Q> {
    let kraus = kraus_operators(t_over_tau)?;
    let mut m = rho.matrix().clone();
    for qubit in 1..=NUM_QUBITS {
        let mut next = ComplexMatrix::zeros(8, 8);
        for k in &kraus {
            let full = embed_operator(k, NUM_QUBITS, &[qubit])?;
            next = &next + &(&(&full * &m) * &full.adjoint());
        }
        m = next;
    }
    DensityMatrix3Q::new(m)
}

pub fn damp_state(psi0: &PureState3Q, t_over_tau: f64) -> Result<DensityMatrix3Q> {
    damp_density(&psi0.to_density(), t_over_tau)
}

/// `2 p³ max(0, √(y(1−y)) − 3 y q³)`.
///
/// Vanishes exactly where `√(1/y − 1) = 3 q³` and agrees with the X-state
/// concurrence of the damped state.
pub fn gmc_damped_closed(y: f64, t_over_tau: f64) -> Result<f64> {
    let d = DampingParams::new(y, t_over_tau)?;
    let inner = (y * (1.0 - y)).sqrt() - 3.0 * y * d.q().powi(3);
    Ok(2.0 * d.p().powi(3) * inner.max(0.0))
}

/// GMC of the simulated damped state through the X-state formula.
pub fn gmc_damped_numeric(y: f64, t_over_tau: f64) -> Result<f64> {
    x_state_gmc(&damp_state(&make_ghz_y(y)?, t_over_tau)?)
}

/// Sudden-death time `t/τ` solving `√(1/y − 1) = 3 (1 − e^{−t})^{3/2}` by
/// bisection on `[0, 50]`, or `None` when the left side exceeds what the
/// right side reaches inside the bracket.
pub fn esd_time(y: f64) -> Result<Option<f64>> {
    check_y_open(y)?;
    let target = (1.0 / y - 1.0).sqrt();
    let f = |t: f64| 3.0 * decay(t).powi(3) - target;
    let (mut lo, mut hi) = (0.0, ESD_BRACKET);
    if f(hi) < 0.0 {
        return Ok(None);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let v = f(mid);
        if v == 0.0 || hi - lo <= f64::EPSILON * hi {
            return Ok(Some(mid));
        }
        if v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = 0.5 * (lo + hi);
    if f(t).abs() > ESD_RESIDUAL_TOL {
        return Err(Error::Numerical(format!(
            "bisection for y = {y} stalled with residual {:e}",
            f(t)
        )));
    }
    Ok(Some(t))
}

/// `C₊ = 2 e^{−3t/2} √(y(1−y)) / √3`.
pub fn pcc_damped_closed(y: f64, t_over_tau: f64) -> Result<f64> {
    let d = DampingParams::new(y, t_over_tau)?;
    Ok(2.0 * d.p().powi(3) * (y * (1.0 - y)).sqrt() / 3f64.sqrt())
}

/// Recovers the GMC from a measured `C₊` and the known initial `y`.
pub fn gmc_from_pcc(c_plus: f64, y: f64) -> Result<f64> {
    check_y_open(y)?;
    let s = (y * (1.0 - y)).sqrt();
    let c_max = 2.0 * s / 3f64.sqrt();
    if !(c_plus >= -PCC_RANGE_SLACK && c_plus <= c_max + PCC_RANGE_SLACK) {
        return Err(Error::out_of_domain(
            "c_plus",
            c_plus,
            &format!("[0, {c_max}] for y = {y}"),
        ));
    }
    let c = c_plus.clamp(0.0, c_max);
    let p3 = 3f64.sqrt() * c / (2.0 * s);
    let q3 = (1.0 - p3.powf(2.0 / 3.0)).max(0.0).powf(1.5);
    let value = 2.0 * p3 * (s - 3.0 * y * q3);
    Ok(value.max(0.0))
}

/// One time step of a decay trajectory. `pcc_plus`, `mi_x` and `mp_z` come
/// from the simulated channel; `gmc_from_pcc` inverts the simulated `C₊`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub t_over_tau: f64,
    pub gmc_closed: f64,
    pub pcc_plus: f64,
    pub gmc_from_pcc: f64,
    pub mi_x: f64,
    pub mp_z: f64,
}

impl TrajectoryPoint {
    pub const COLUMNS: [&'static str; 6] = ["t_over_tau", "gmc_closed", "pcc_plus", "gmc_from_pcc", "mi_x", "mp_z"];

    pub fn values(&self) -> [f64; 6] {
        [
            self.t_over_tau,
            self.gmc_closed,
            self.pcc_plus,
            self.gmc_from_pcc,
            self.mi_x,
            self.mp_z,
        ]
    }
}

pub fn trajectory_point(y: f64, t_over_tau: f64) -> Result<TrajectoryPoint> {
    check_y_open(y)?;
    let rho = damp_state(&make_ghz_y(y)?, t_over_tau)?;
    let pcc_plus = pcc_tripartite(&rho, &named_observable("Pplus")?).tripartite;
    Ok(TrajectoryPoint {
        t_over_tau,
        gmc_closed: gmc_damped_closed(y, t_over_tau)?,
        pcc_plus,
        gmc_from_pcc: gmc_from_pcc(pcc_plus, y)?,
        mi_x: mi_tripartite(&rho, &named_basis("X")?)?.tripartite,
        mp_z: mp_tripartite(&rho, &named_basis("Z")?)?,
    })
}

/// `steps + 1` evenly spaced points on `[0, t_max]`.
pub fn esd_trajectory(y: f64, t_max: f64, steps: usize) -> Result<Vec<TrajectoryPoint>> {
    check_y_open(y)?;
    check_time(t_max)?;
    if steps == 0 {
        return Err(Error::InvalidInput("trajectory needs at least one step".into()));
    }
    (0..=steps)
        .into_par_iter()
        .map(|k| trajectory_point(y, t_max * k as f64 / steps as f64))
        .collect()
}
