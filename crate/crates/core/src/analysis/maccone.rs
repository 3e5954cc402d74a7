use serde::{Deserialize, Serialize};

use crate::correlators::{maccone_sum, pcc_bipartite, Bipartition, CorrelatorReport, ObservableSpec, PccValue};
use crate::error::{Error, Result};
use crate::states::FamilyKind;

/// Inward offset used to extrapolate a degenerate cut along the family.
const LIMIT_STEP: f64 = 1e-3;
/// Two extrapolations of the same limit must agree this closely.
const LIMIT_AGREEMENT: f64 = 1e-6;

/// A Maccone sum evaluated on a family member. Cuts where an observable has
/// zero variance are replaced by their limit along the family parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyMacconeReport {
    pub family: FamilyKind,
    pub param: f64,
    pub terms: [CorrelatorReport; 2],
    pub sum: f64,
    /// Value with degenerate cuts counted as zero.
    pub raw_sum: f64,
    /// `(term, cut)` pairs that were resolved by continuity.
    pub continuity_resolved: Vec<(usize, Bipartition)>,
}

fn family_domain(kind: FamilyKind) -> (f64, f64) {
    match kind {
        FamilyKind::GeneralizedW => (0.0, std::f64::consts::FRAC_PI_2),
        FamilyKind::XFamily => (f64::NEG_INFINITY, f64::INFINITY),
        _ => (0.0, 1.0),
    }
}

fn cut_value(kind: FamilyKind, value: f64, cut: Bipartition, obs: &ObservableSpec) -> Result<Option<f64>> {
    let rho = kind.at(value)?.density()?;
    Ok(pcc_bipartite(&rho, cut, obs).value())
}

/// One-sided limit of a per-cut PCC, by Richardson extrapolation from the
/// interior of the family domain.
fn cut_limit(kind: FamilyKind, value: f64, cut: Bipartition, obs: &ObservableSpec) -> Result<f64> {
    let (lo, hi) = family_domain(kind);
    let dir = if value + 4.0 * LIMIT_STEP <= hi { 1.0 } else { -1.0 };
    if value - 4.0 * LIMIT_STEP < lo && dir < 0.0 {
        return Err(Error::Numerical("family domain too narrow for a limit".into()));
    }
    let at = |k: f64| -> Result<f64> {
        cut_value(kind, value + dir * k * LIMIT_STEP, cut, obs)?.ok_or_else(|| {
            Error::Numerical(format!("{cut} stays degenerate near {} = {value}", kind.scan_parameter()))
        })
    };
    let (v1, v2, v4) = (at(1.0)?, at(2.0)?, at(4.0)?);
    let fine = 2.0 * v1 - v2;
    let coarse = 2.0 * v2 - v4;
    if (fine - coarse).abs() > LIMIT_AGREEMENT {
        return Err(Error::Numerical(format!(
            "limit of {cut} near {} = {value} did not settle ({fine} vs {coarse})",
            kind.scan_parameter()
        )));
    }
    Ok(fine.clamp(0.0, 1.0))
}

pub fn maccone_family(
    kind: FamilyKind,
    value: f64,
    obs1: &ObservableSpec,
    obs2: &ObservableSpec,
) -> Result<FamilyMacconeReport> {
    let rho = kind.at(value)?.density()?;
    let raw = maccone_sum(&rho, obs1, obs2);
    let mut resolved = Vec::new();
    let mut terms = raw.terms.clone();
    for (t, obs) in [obs1, obs2].into_iter().enumerate() {
        if terms[t].degenerate_cuts.is_empty() {
            continue;
        }
        let mut values = Bipartition::ALL.map(|c| PccValue::Value(terms[t].per_cut[c.index()]));
        for &cut in &terms[t].degenerate_cuts {
            values[cut.index()] = PccValue::Value(cut_limit(kind, value, cut, obs)?);
            resolved.push((t, cut));
        }
        let degenerate = terms[t].degenerate_cuts.clone();
        terms[t] = CorrelatorReport::from_pcc_values(values);
        terms[t].degenerate_cuts = degenerate;
    }
    Ok(FamilyMacconeReport {
        family: kind,
        param: value,
        sum: terms[0].tripartite + terms[1].tripartite,
        raw_sum: raw.sum,
        terms,
        continuity_resolved: resolved,
    })
}
