use indexmap::IndexMap;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::quantity::Quantity;
use crate::error::{Error, Result};
use crate::states::FamilyKind;

/// Grid points per unit of the scan parameter (per unit of θ/π for the W
/// family).
pub const DEFAULT_POINTS_PER_UNIT: usize = 400;

/// One grid point of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub param_name: String,
    pub param: f64,
    pub quantities: IndexMap<String, f64>,
}

impl ScanRecord {
    pub fn new(param_name: impl Into<String>, param: f64) -> Self {
        Self {
            param_name: param_name.into(),
            param,
            quantities: IndexMap::new(),
        }
    }

    pub fn get(&self, id: &str) -> Result<f64> {
        self.quantities.get(id).copied().ok_or_else(|| Error::UnknownLabel {
            kind: "quantity",
            label: id.to_owned(),
        })
    }

    /// Inserts a value, rejecting NaN and infinities.
    pub fn insert(&mut self, id: impl Into<String>, value: f64) -> Result<()> {
        let id = id.into();
        if !value.is_finite() {
            return Err(Error::Numerical(format!(
                "{id} is not finite at {} = {}",
                self.param_name, self.param
            )));
        }
        self.quantities.insert(id, value);
        Ok(())
    }
}

/// Evaluates `quantities` at every grid point of a family.
pub fn scan_family(kind: FamilyKind, grid: &[f64], quantities: &[Quantity]) -> Result<Vec<ScanRecord>> {
    grid.par_iter()
        .map(|&value| {
            let state = kind.at(value)?.state()?;
            let pure = state.is_pure();
            let rho = state.density();
            let mut record = ScanRecord::new(kind.scan_parameter(), value);
            for &q in quantities {
                record.insert(q.id(), q.evaluate(&rho, pure)?)?;
            }
            Ok(record)
        })
        .collect()
}

/// `start, start + step, …` up to `stop`, which is included when it lies
/// within half a step of the last point. Values are rounded to 12 decimals
/// so that e.g. `0:1:0.05` yields `0.8` rather than `0.8000000000000002`.
pub fn grid_inclusive(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
        return Err(Error::InvalidInput("grid bounds must be finite".into()));
    }
    if step <= 0.0 {
        return Err(Error::InvalidInput(format!("grid step must be positive, got {step}")));
    }
    if stop < start {
        return Err(Error::InvalidInput(format!("grid stop {stop} is below start {start}")));
    }
    let n = ((stop - start) / step + 0.5).floor() as usize;
    if n > 10_000_000 {
        return Err(Error::InvalidInput(format!("grid of {n} points is too large")));
    }
    let snap = 1e-9 * step;
    Ok((0..=n)
        .map(|k| {
            let x = start + k as f64 * step;
            if (x - stop).abs() <= snap {
                stop
            } else {
                round12(x)
            }
        })
        .collect())
}

fn round12(x: f64) -> f64 {
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Parses `start:stop:step`.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::InvalidInput(format!(
            "grid `{spec}` must have the form start:stop:step"
        )));
    }
    let mut nums = [0.0; 3];
    for (slot, part) in nums.iter_mut().zip(&parts) {
        *slot = part.trim().parse().map_err(|_| {
            Error::InvalidInput(format!("grid `{spec}`: `{part}` is not a number"))
        })?;
    }
    grid_inclusive(nums[0], nums[1], nums[2])
}

/// Default sweep over the family's natural domain.
pub fn default_grid(kind: FamilyKind) -> Vec<f64> {
    let n = DEFAULT_POINTS_PER_UNIT;
    match kind {
        FamilyKind::GeneralizedW => (0..=n / 2)
            .map(|k| std::f64::consts::PI * k as f64 / n as f64)
            .collect(),
        _ => (0..=n).map(|k| k as f64 / n as f64).collect(),
    }
}

/// Index of the largest value; the first one wins ties.
pub fn argmax(records: &[ScanRecord], id: &str) -> Result<usize> {
    extremum(records, id, |a, b| a > b)
}

pub fn argmin(records: &[ScanRecord], id: &str) -> Result<usize> {
    extremum(records, id, |a, b| a < b)
}

fn extremum(records: &[ScanRecord], id: &str, better: impl Fn(f64, f64) -> bool) -> Result<usize> {
    if records.is_empty() {
        return Err(Error::InvalidInput("no records".into()));
    }
    let mut best = 0;
    let mut best_value = records[0].get(id)?;
    for (i, r) in records.iter().enumerate().skip(1) {
        let v = r.get(id)?;
        if better(v, best_value) {
            best = i;
            best_value = v;
        }
    }
    Ok(best)
}
