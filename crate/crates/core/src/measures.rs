//! Tripartite entanglement measures built on the concurrence triangle.
//!
//! For a pure state each edge `D²_{i(jk)} = 2(1 − Tr ρ_i²)` is the squared
//! concurrence of qubit `i` against the other two. Concurrence fill is the
//! square root of the triangle's area (Heron on the squared edges), and GMC is
//! the shortest edge. Both vanish on product and biseparable pure states.
//!
//! For mixed inputs the same quantities are still computable, but the edges
//! are then linear-entropy edges and not concurrences; [`MeasureReport`]
//! records which case applies.

use serde::{Deserialize, Serialize};

use crate::correlators::ROUNDOFF_FLOOR;
use crate::density::{partial_trace, DensityMatrix3Q};
use crate::error::{Error, Result};
use crate::linalg::purity;
use crate::states::{quarter_sin_cos, StateFamily};

/// Purity deficit below which a density matrix counts as pure.
pub const PURE_TOL: f64 = 1e-10;
/// Negative radicands down to this size are roundoff and clamp to zero.
pub const RADICAND_CLAMP: f64 = 1e-12;
/// Edges closer than this are reported as exact ties.
pub const TIE_TOL: f64 = 1e-12;

/// Squared edges `D²_{i(jk)}` of the concurrence triangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangleEdges {
    pub d1_23: f64,
    pub d2_13: f64,
    pub d3_12: f64,
}

impl TriangleEdges {
    pub fn as_array(&self) -> [f64; 3] {
        [self.d1_23, self.d2_13, self.d3_12]
    }

    pub fn min(&self) -> f64 {
        self.d1_23.min(self.d2_13).min(self.d3_12)
    }

    /// Largest violation of the triangle inequality (≤ 0 when it holds).
    pub fn triangle_violation(&self) -> f64 {
        let e = self.as_array();
        (0..3)
            .map(|i| e[i] - (e[(i + 1) % 3] + e[(i + 2) % 3]))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Indices (0-based) of edges tied for the minimum within [`TIE_TOL`].
    pub fn minimal_edges(&self) -> Vec<usize> {
        let m = self.min();
        self.as_array()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e - m <= TIE_TOL)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Whether triangle edges are concurrences (pure input) or only
/// linear-entropy edges (mixed input).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeKind {
    Concurrence,
    LinearEntropyNotConcurrence,
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub edges: TriangleEdges,
    pub edge_kind: EdgeKind,
    pub concurrence_fill: f64,
    pub gmc: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub global_measure: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tangle: Option<f64>,
}

/// Purities of the three single-qubit reductions.
pub fn single_qubit_purities(rho: &DensityMatrix3Q) -> [f64; 3] {
    let discards: [&[usize]; 3] = [&[2, 3], &[1, 3], &[1, 2]];
    discards.map(|d| {
        let reduced = partial_trace(rho, d).expect("valid cut");
        purity(&reduced).expect("square")
    })
}

pub fn triangle_edges(rho: &DensityMatrix3Q) -> TriangleEdges {
    let [d1_23, d2_13, d3_12] = single_qubit_purities(rho).map(|p| {
        let d = 2.0 * (1.0 - p);
        if d.abs() <= ROUNDOFF_FLOOR {
            0.0
        } else {
            d
        }
    });
    TriangleEdges { d1_23, d2_13, d3_12 }
}

/// Concurrence fill from squared edges:
/// `[16/3 · Q(Q−e₁)(Q−e₂)(Q−e₃)]^{1/4}` with `Q` the half perimeter.
pub fn fill_from_edges(edges: &TriangleEdges) -> Result<f64> {
    let [e1, e2, e3] = edges.as_array();
    let q = 0.5 * (e1 + e2 + e3);
    let gaps = [q - e1, q - e2, q - e3];
    if let Some(g) = gaps.iter().find(|&&g| g < -RADICAND_CLAMP) {
        return Err(Error::Numerical(format!(
            "concurrence-fill triangle gap {g:e} is negative beyond roundoff"
        )));
    }
    // Degenerate triangles carry edge round-off that the fourth root would amplify.
    let [g1, g2, g3] = gaps.map(|g| if g <= ROUNDOFF_FLOOR { 0.0 } else { g });
    Ok((16.0 / 3.0 * q * g1 * g2 * g3).powf(0.25))
}

pub fn concurrence_fill(rho: &DensityMatrix3Q) -> Result<f64> {
    fill_from_edges(&triangle_edges(rho))
}

/// Genuine multipartite concurrence: the shortest squared edge.
pub fn gmc(rho: &DensityMatrix3Q) -> f64 {
    triangle_edges(rho).min()
}

/// `G = 2[1 − (P₁² + P₂² + P₃²)/3]` with `P_i²` the single-qubit purities.
pub fn global_measure(rho: &DensityMatrix3Q) -> f64 {
    let p = single_qubit_purities(rho);
    2.0 * (1.0 - p.iter().sum::<f64>() / 3.0)
}

/// Three-tangle, available only for the GHZ and W families in closed form.
pub fn tangle_closed(family: &StateFamily) -> Result<f64> {
    match *family {
        StateFamily::GeneralizedGhz { a, b } => Ok(4.0 * a * a * b * b),
        StateFamily::GeneralizedW { .. } => Ok(0.0),
        other => Err(Error::UnsupportedFamily(other.kind().id().to_owned())),
    }
}

/// Analytic triangle edges for the GHZ and W families.
pub fn closed_form_edges(family: &StateFamily) -> Result<TriangleEdges> {
    match *family {
        StateFamily::GeneralizedGhz { a, b } => {
            let e = 4.0 * a * a * b * b;
            Ok(TriangleEdges {
                d1_23: e,
                d2_13: e,
                d3_12: e,
            })
        }
        StateFamily::GeneralizedW { theta } => {
            let (s, c) = quarter_sin_cos(theta);
            let side = s * s * (1.0 + c * c);
            let s2 = 2.0 * s * c;
            Ok(TriangleEdges {
                d1_23: s2 * s2,
                d2_13: side,
                d3_12: side,
            })
        }
        other => Err(Error::UnsupportedFamily(other.kind().id().to_owned())),
    }
}

/// Closed-form CF for the two families.
pub fn concurrence_fill_closed(family: &StateFamily) -> Result<f64> {
    match *family {
        StateFamily::GeneralizedGhz { a, b } => Ok(4.0 * a * a * b * b),
        StateFamily::GeneralizedW { theta } => {
            let (s, c) = quarter_sin_cos(theta);
            let (s2, c2) = (s * s, c * c);
            let inner = 4.0 / 3.0 * (1.0 - c2 * (1.0 + s2)) * (1.0 + c2 * (3.0 * s2 - 1.0));
            Ok(2.0 * s * c * inner.max(0.0).powf(0.25))
        }
        other => Err(Error::UnsupportedFamily(other.kind().id().to_owned())),
    }
}

/// Closed-form GMC, including the two-branch W expression split at
/// `sin θ = √(2/3)`.
pub fn gmc_closed(family: &StateFamily) -> Result<f64> {
    match *family {
        StateFamily::GeneralizedGhz { a, b } => Ok(4.0 * a * a * b * b),
        StateFamily::GeneralizedW { theta } => {
            let (s, c) = quarter_sin_cos(theta);
            if s <= (2.0f64 / 3.0).sqrt() {
                Ok(s * s * (1.0 + c * c))
            } else {
                Ok((2.0 * s * c).powi(2))
            }
        }
        other => Err(Error::UnsupportedFamily(other.kind().id().to_owned())),
    }
}

/// Closed-form global measure for the two families.
pub fn global_measure_closed(family: &StateFamily) -> Result<f64> {
    match *family {
        StateFamily::GeneralizedGhz { a, b } => Ok(4.0 * a * a * b * b),
        StateFamily::GeneralizedW { theta } => {
            let (s, c) = quarter_sin_cos(theta);
            Ok(2.0 / 3.0 * (s * s * (1.0 + 3.0 * c * c)))
        }
        other => Err(Error::UnsupportedFamily(other.kind().id().to_owned())),
    }
}

/// Every closed form at once; the analytic oracle for the numeric path.
pub fn closed_form_measures(family: &StateFamily) -> Result<MeasureReport> {
    Ok(MeasureReport {
        edges: closed_form_edges(family)?,
        edge_kind: EdgeKind::ClosedForm,
        concurrence_fill: concurrence_fill_closed(family)?,
        gmc: gmc_closed(family)?,
        global_measure: Some(global_measure_closed(family)?),
        tangle: Some(tangle_closed(family)?),
    })
}

/// Numeric measures from a density matrix.
pub fn measure_report(rho: &DensityMatrix3Q) -> Result<MeasureReport> {
    let edges = triangle_edges(rho);
    let edge_kind = if rho.is_pure(PURE_TOL) {
        EdgeKind::Concurrence
    } else {
        EdgeKind::LinearEntropyNotConcurrence
    };
    Ok(MeasureReport {
        edges,
        edge_kind,
        concurrence_fill: fill_from_edges(&edges)?,
        gmc: edges.min(),
        global_measure: Some(global_measure(rho)),
        tangle: None,
    })
}

/// GMC of a three-qubit X state (nonzero entries only on the diagonal and
/// anti-diagonal): `2 max(0, max_i |z_i| − Σ_{j≠i} √(a_j b_j))`, where
/// `z_i = ρ_{i,7−i}` and `a_j, b_j` are the diagonal pair `ρ_jj, ρ_{7−j,7−j}`.
///
/// This is on the concurrence scale, not the squared-edge scale of [`gmc`]:
/// a pure `a|000⟩ + b|111⟩` gives `2ab` here and `4a²b²` there. The
/// damping-channel trajectories use this scale.
///
/// Returns an error if `rho` has weight outside the X pattern.
pub fn x_state_gmc(rho: &DensityMatrix3Q) -> Result<f64> {
    const X_TOL: f64 = 1e-12;
    let m = rho.matrix();
    for r in 0..8 {
        for c in 0..8 {
            if r != c && r + c != 7 && m[(r, c)].norm() > X_TOL {
                return Err(Error::InvalidInput(format!(
                    "state is not X-shaped: |ρ[{r},{c}]| = {:.3e}",
                    m[(r, c)].norm()
                )));
            }
        }
    }
    let pair_weight = |j: usize| (m[(j, j)].re * m[(7 - j, 7 - j)].re).max(0.0).sqrt();
    let best = (0..4)
        .map(|i| {
            let coherence = m[(i, 7 - i)].norm();
            let rest: f64 = (0..4).filter(|&j| j != i).map(pair_weight).sum();
            coherence - rest
        })
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(2.0 * best.max(0.0))
}
