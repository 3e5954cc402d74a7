use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::measures::{concurrence_fill, gmc};
use crate::states::make_x_family;

/// Default tolerance below which two measure values count as equal.
pub const DEFAULT_TIE_TOL: f64 = 1e-10;
/// A strict ordering needs at least this gap (or the tie tolerance, if larger).
pub const STRICT_GAP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InequivalenceKind {
    /// The two measures order the states oppositely.
    Opposite,
    /// One measure ties the states while the other strictly orders them.
    TieVersusStrict,
}

/// Values of both measures on a pair of x-family members.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairValues {
    pub a1: f64,
    pub a2: f64,
    pub gmc1: f64,
    pub gmc2: f64,
    pub cf1: f64,
    pub cf2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequivalencePair {
    #[serde(flatten)]
    pub values: PairValues,
    pub kind: InequivalenceKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Order {
    Tie,
    Strict(Ordering),
    Ambiguous,
}

fn classify(d: f64, tie_tol: f64) -> Order {
    if d.abs() <= tie_tol {
        Order::Tie
    } else if d.abs() > tie_tol.max(STRICT_GAP) {
        Order::Strict(d.total_cmp(&0.0))
    } else {
        Order::Ambiguous
    }
}

impl PairValues {
    /// Whether GMC and CF disagree on which state is more entangled.
    pub fn inequivalence(&self, tie_tol: f64) -> Option<InequivalenceKind> {
        let g = classify(self.gmc1 - self.gmc2, tie_tol);
        let f = classify(self.cf1 - self.cf2, tie_tol);
        match (g, f) {
            (Order::Strict(a), Order::Strict(b)) if a != b => Some(InequivalenceKind::Opposite),
            (Order::Tie, Order::Strict(_)) | (Order::Strict(_), Order::Tie) => {
                Some(InequivalenceKind::TieVersusStrict)
            }
            _ => None,
        }
    }
}

/// `(GMC, CF)` of the x-family member at `a`.
pub fn x_family_measures(a: f64) -> Result<(f64, f64)> {
    let rho = make_x_family(a)?.to_density();
    Ok((gmc(&rho), concurrence_fill(&rho)?))
}

pub fn evaluate_pair(a1: f64, a2: f64) -> Result<PairValues> {
    let (gmc1, cf1) = x_family_measures(a1)?;
    let (gmc2, cf2) = x_family_measures(a2)?;
    Ok(PairValues { a1, a2, gmc1, gmc2, cf1, cf2 })
}

/// All pairs `a1 < a2` (in grid order) of x-family members on which the two
/// measures are inequivalent.
pub fn find_inequivalence_pairs(grid: &[f64], tie_tol: f64) -> Result<Vec<InequivalencePair>> {
    let values: Vec<(f64, f64)> = grid.par_iter().map(|&a| x_family_measures(a)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for i in 0..grid.len() {
        for j in i + 1..grid.len() {
            let pv = PairValues {
                a1: grid[i],
                a2: grid[j],
                gmc1: values[i].0,
                gmc2: values[j].0,
                cf1: values[i].1,
                cf2: values[j].1,
            };
            if let Some(kind) = pv.inequivalence(tie_tol) {
                out.push(InequivalencePair { values: pv, kind });
            }
        }
    }
    Ok(out)
}
