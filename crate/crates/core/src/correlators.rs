//! Statistical correlators across the three one-versus-two cuts.
//!
//! Each cut `i-(jk)` is treated as a bipartite qubit ⊗ two-qubit system. The
//! tripartite correlator is the geometric mean of the three per-cut values,
//! so a single uncorrelated cut forces it to zero.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::density::{embed_operator, DensityMatrix3Q};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, tensor, tensor_vec, ComplexMatrix, ONE, ZERO};

pub const OBSERVABLE_HERMITIAN_TOL: f64 = 1e-12;
pub const BASIS_ORTHONORMAL_TOL: f64 = 1e-12;
/// `σ_A σ_B` at or below this makes a PCC degenerate.
pub const DEGENERATE_TOL: f64 = 1e-12;
/// Probabilities may stray this far outside `[0, 1]` before it is an error.
pub const PROBABILITY_SLACK: f64 = 1e-10;
/// Covariances and mutual informations at or below this are round-off and
/// are set to zero, since the geometric mean's root would amplify them.
pub const ROUNDOFF_FLOOR: f64 = 1e-14;
/// Geometric-mean factors at or below this collapse the mean to zero.
const GEO_MEAN_FLOOR: f64 = 1e-300;

/// One-versus-two split of the three qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Bipartition {
    #[serde(rename = "1-(23)")]
    One,
    #[serde(rename = "2-(13)")]
    Two,
    #[serde(rename = "3-(12)")]
    Three,
}

impl Bipartition {
    pub const ALL: [Bipartition; 3] = [Bipartition::One, Bipartition::Two, Bipartition::Three];

    /// The lone qubit (1-based).
    pub fn lone(self) -> usize {
        match self {
            Bipartition::One => 1,
            Bipartition::Two => 2,
            Bipartition::Three => 3,
        }
    }

    /// The complementary pair in ascending order.
    pub fn rest(self) -> [usize; 2] {
        match self {
            Bipartition::One => [2, 3],
            Bipartition::Two => [1, 3],
            Bipartition::Three => [1, 2],
        }
    }

    pub fn index(self) -> usize {
        self.lone() - 1
    }

    pub fn label(self) -> &'static str {
        match self {
            Bipartition::One => "1-(23)",
            Bipartition::Two => "2-(13)",
            Bipartition::Three => "3-(12)",
        }
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A single-qubit observable and the two-qubit observable measured on the
/// complementary pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableSpec {
    single: ComplexMatrix,
    pair: ComplexMatrix,
    label: String,
}

impl ObservableSpec {
    pub fn new(single: ComplexMatrix, pair: ComplexMatrix, label: impl Into<String>) -> Result<Self> {
        if (single.rows(), single.cols()) != (2, 2) || (pair.rows(), pair.cols()) != (4, 4) {
            return Err(Error::Dimension(
                "observable needs a 2x2 single and a 4x4 pair operator".into(),
            ));
        }
        for m in [&single, &pair] {
            let dev = m.hermiticity_deviation();
            if dev > OBSERVABLE_HERMITIAN_TOL {
                return Err(Error::NotHermitian(dev));
            }
        }
        Ok(Self {
            single,
            pair,
            label: label.into(),
        })
    }

    /// `A` on the lone qubit and `A ⊗ A` on the pair.
    pub fn self_paired(single: ComplexMatrix, label: impl Into<String>) -> Result<Self> {
        let pair = tensor(&single, &single);
        Self::new(single, pair, label)
    }

    pub fn single(&self) -> &ComplexMatrix {
        &self.single
    }

    pub fn pair(&self) -> &ComplexMatrix {
        &self.pair
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Full-space operators `(A_i, B_jk)` for a cut.
    pub fn embedded(&self, cut: Bipartition) -> (ComplexMatrix, ComplexMatrix) {
        let a = embed_operator(&self.single, 3, &[cut.lone()]).expect("2x2 on one qubit");
        let b = embed_operator(&self.pair, 3, &cut.rest()).expect("4x4 on two qubits");
        (a, b)
    }
}

/// Labels accepted by [`named_observable`] and [`named_basis`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NamedOperator {
    X,
    Y,
    Z,
    P0,
    P1,
    Pplus,
}

impl NamedOperator {
    pub const ALL: [NamedOperator; 6] = [
        NamedOperator::X,
        NamedOperator::Y,
        NamedOperator::Z,
        NamedOperator::P0,
        NamedOperator::P1,
        NamedOperator::Pplus,
    ];

    pub fn label(self) -> &'static str {
        match self {
            NamedOperator::X => "X",
            NamedOperator::Y => "Y",
            NamedOperator::Z => "Z",
            NamedOperator::P0 => "P0",
            NamedOperator::P1 => "P1",
            NamedOperator::Pplus => "Pplus",
        }
    }

    pub fn matrix(self) -> ComplexMatrix {
        let i = Complex64::new(0.0, 1.0);
        let h = Complex64::new(0.5, 0.0);
        let data = match self {
            NamedOperator::X => vec![ZERO, ONE, ONE, ZERO],
            NamedOperator::Y => vec![ZERO, -i, i, ZERO],
            NamedOperator::Z => vec![ONE, ZERO, ZERO, -ONE],
            NamedOperator::P0 => vec![ONE, ZERO, ZERO, ZERO],
            NamedOperator::P1 => vec![ZERO, ZERO, ZERO, ONE],
            NamedOperator::Pplus => vec![h, h, h, h],
        };
        ComplexMatrix::new(2, 2, data).expect("2x2")
    }
}

impl FromStr for NamedOperator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NamedOperator::ALL
            .into_iter()
            .find(|op| op.label() == s)
            .ok_or_else(|| Error::UnknownLabel {
                kind: "observable",
                label: s.to_owned(),
            })
    }
}

pub fn named_observable(label: &str) -> Result<ObservableSpec> {
    let op: NamedOperator = label.parse()?;
    ObservableSpec::self_paired(op.matrix(), op.label())
}

/// Per-qubit orthonormal measurement bases.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductBasis {
    qubit_bases: [[[Complex64; 2]; 2]; 3],
    label: String,
}

impl ProductBasis {
    pub fn new(qubit_bases: [[[Complex64; 2]; 2]; 3], label: impl Into<String>) -> Result<Self> {
        for basis in &qubit_bases {
            for (i, u) in basis.iter().enumerate() {
                for (j, v) in basis.iter().enumerate() {
                    let ip: Complex64 = u.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
                    let expect = if i == j { ONE } else { ZERO };
                    if (ip - expect).norm() > BASIS_ORTHONORMAL_TOL {
                        return Err(Error::InvalidInput(format!(
                            "basis vectors are not orthonormal (⟨{i}|{j}⟩ = {ip})"
                        )));
                    }
                }
            }
        }
        Ok(Self {
            qubit_bases,
            label: label.into(),
        })
    }

    /// The same single-qubit basis on all three qubits.
    pub fn uniform(basis: [[Complex64; 2]; 2], label: impl Into<String>) -> Result<Self> {
        Self::new([basis; 3], label)
    }

    pub fn qubit_basis(&self, qubit: usize) -> &[[Complex64; 2]; 2] {
        &self.qubit_bases[qubit - 1]
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// Eigenbasis of σ_X, σ_Y or σ_Z on every qubit (outcome +1 first).
pub fn named_basis(label: &str) -> Result<ProductBasis> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let r = |x: f64| Complex64::new(x, 0.0);
    let basis = match label {
        "X" => [[r(h), r(h)], [r(h), r(-h)]],
        "Y" => [[r(h), Complex64::new(0.0, h)], [r(h), Complex64::new(0.0, -h)]],
        "Z" => [[ONE, ZERO], [ZERO, ONE]],
        other => {
            return Err(Error::UnknownLabel {
                kind: "basis",
                label: other.to_owned(),
            })
        }
    };
    ProductBasis::uniform(basis, label)
}

/// Per-cut PCC: a number, or a flag that one side has zero variance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PccValue {
    Value(f64),
    Degenerate,
}

impl PccValue {
    pub fn value(self) -> Option<f64> {
        match self {
            PccValue::Value(v) => Some(v),
            PccValue::Degenerate => None,
        }
    }

    pub fn is_degenerate(self) -> bool {
        matches!(self, PccValue::Degenerate)
    }
}

/// Moments entering a Pearson coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PccMoments {
    pub mean_a: f64,
    pub mean_b: f64,
    pub mean_ab: f64,
    pub var_a: f64,
    pub var_b: f64,
}

impl PccMoments {
    /// `|cov / (σ_A σ_B)|`, or degenerate.
    pub fn abs_pcc(&self) -> PccValue {
        let denom = self.var_a.max(0.0).sqrt() * self.var_b.max(0.0).sqrt();
        if denom <= DEGENERATE_TOL {
            return PccValue::Degenerate;
        }
        let cov = self.mean_ab - self.mean_a * self.mean_b;
        if cov.abs() <= ROUNDOFF_FLOOR {
            return PccValue::Value(0.0);
        }
        PccValue::Value((cov / denom).abs())
    }
}

pub fn pcc_moments(rho: &DensityMatrix3Q, cut: Bipartition, obs: &ObservableSpec) -> PccMoments {
    let (a, b) = obs.embedded(cut);
    let ev = |m: &ComplexMatrix| rho.expectation(m).expect("8x8").re;
    let a2 = &a * &a;
    let b2 = &b * &b;
    let ab = &a * &b;
    let mean_a = ev(&a);
    let mean_b = ev(&b);
    PccMoments {
        mean_a,
        mean_b,
        mean_ab: ev(&ab),
        var_a: ev(&a2) - mean_a * mean_a,
        var_b: ev(&b2) - mean_b * mean_b,
    }
}

/// `|C_{A^i B^{jk}}|` from operator expectations.
pub fn pcc_bipartite(rho: &DensityMatrix3Q, cut: Bipartition, obs: &ObservableSpec) -> PccValue {
    pcc_moments(rho, cut, obs).abs_pcc()
}

/// Per-cut values and their geometric mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelatorReport {
    /// Indexed by cut 1-(23), 2-(13), 3-(12). Degenerate cuts hold 0.
    pub per_cut: [f64; 3],
    pub tripartite: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub degenerate_cuts: Vec<Bipartition>,
}

impl CorrelatorReport {
    pub fn from_per_cut(per_cut: [f64; 3]) -> Self {
        Self {
            per_cut,
            tripartite: geometric_mean(&per_cut),
            degenerate_cuts: Vec::new(),
        }
    }

    pub fn from_pcc_values(values: [PccValue; 3]) -> Self {
        let degenerate_cuts = Bipartition::ALL
            .into_iter()
            .zip(values)
            .filter(|(_, v)| v.is_degenerate())
            .map(|(c, _)| c)
            .collect();
        let per_cut = values.map(|v| v.value().unwrap_or(0.0));
        Self {
            per_cut,
            tripartite: geometric_mean(&per_cut),
            degenerate_cuts,
        }
    }
}

/// `(∏ x_i)^{1/n}` via the mean of logs; zero if any factor is ≤ 1e-300.
pub fn geometric_mean(values: &[f64]) -> f64 {
    if values.is_empty() || values.iter().any(|&v| v.is_nan() || v <= GEO_MEAN_FLOOR) {
        return 0.0;
    }
    let mean_log = values.iter().map(|v| v.ln()).sum::<f64>() / values.len() as f64;
    mean_log.exp()
}

pub fn pcc_tripartite(rho: &DensityMatrix3Q, obs: &ObservableSpec) -> CorrelatorReport {
    CorrelatorReport::from_pcc_values(Bipartition::ALL.map(|cut| pcc_bipartite(rho, cut, obs)))
}

/// 8-vector `u ⊗ v` placed so that `u` sits on the cut's lone qubit and the
/// 4-vector `v` on the complementary pair (in ascending qubit order).
pub fn cut_product_vector(cut: Bipartition, u: &[Complex64; 2], v: &[Complex64; 4]) -> [Complex64; 8] {
    let lone = cut.lone();
    let [j, k] = cut.rest();
    let mut out = [ZERO; 8];
    for (idx, slot) in out.iter_mut().enumerate() {
        let b = |q: usize| (idx >> (3 - q)) & 1;
        *slot = u[b(lone)] * v[2 * b(j) + b(k)];
    }
    out
}

fn clamp_probability(p: f64) -> Result<f64> {
    if !(-PROBABILITY_SLACK..=1.0 + PROBABILITY_SLACK).contains(&p) {
        return Err(Error::Numerical(format!("probability {p} outside [0, 1]")));
    }
    Ok(p.clamp(0.0, 1.0))
}

/// Joint outcome distribution `p(i, j)` on a cut: `i` indexes the lone qubit's
/// basis, `j = 2 j₁ + j₂` the pair's product basis.
pub fn joint_distribution(
    rho: &DensityMatrix3Q,
    cut: Bipartition,
    basis: &ProductBasis,
) -> Result<[[f64; 4]; 2]> {
    let [j, k] = cut.rest();
    let lone = basis.qubit_basis(cut.lone());
    let (bj, bk) = (basis.qubit_basis(j), basis.qubit_basis(k));
    let mut p = [[0.0; 4]; 2];
    for (i, u) in lone.iter().enumerate() {
        for (jj, row) in p[i].iter_mut().enumerate() {
            let v = tensor_vec(&[&bj[jj >> 1], &bk[jj & 1]]);
            let v: [Complex64; 4] = v.try_into().expect("4-vector");
            *row = clamp_probability(rho.probability(&cut_product_vector(cut, u, &v)))?;
        }
    }
    Ok(p)
}

/// Shannon mutual information (bits) of a joint distribution, `0·log 0 = 0`.
pub fn mutual_information<const A: usize, const B: usize>(joint: &[[f64; B]; A]) -> f64 {
    let pa: Vec<f64> = joint.iter().map(|row| row.iter().sum()).collect();
    let pb: Vec<f64> = (0..B).map(|j| joint.iter().map(|row| row[j]).sum()).collect();
    let mut mi = 0.0;
    for (i, row) in joint.iter().enumerate() {
        for (j, &p) in row.iter().enumerate() {
            if p > 0.0 {
                mi += p * (p / (pa[i] * pb[j])).log2();
            }
        }
    }
    if mi <= ROUNDOFF_FLOOR {
        0.0
    } else {
        mi
    }
}

pub fn mi_bipartite(rho: &DensityMatrix3Q, cut: Bipartition, basis: &ProductBasis) -> Result<f64> {
    Ok(mutual_information(&joint_distribution(rho, cut, basis)?))
}

pub fn mi_tripartite(rho: &DensityMatrix3Q, basis: &ProductBasis) -> Result<CorrelatorReport> {
    let mut per_cut = [0.0; 3];
    for cut in Bipartition::ALL {
        per_cut[cut.index()] = mi_bipartite(rho, cut, basis)?;
    }
    Ok(CorrelatorReport::from_per_cut(per_cut))
}

/// Joint distribution over all eight product-basis outcomes `(i₁, i₂, i₃)`.
pub fn full_distribution(rho: &DensityMatrix3Q, basis: &ProductBasis) -> Result<[f64; 8]> {
    let mut p = [0.0; 8];
    for (idx, slot) in p.iter_mut().enumerate() {
        let v = tensor_vec(&[
            &basis.qubit_basis(1)[idx >> 2],
            &basis.qubit_basis(2)[(idx >> 1) & 1],
            &basis.qubit_basis(3)[idx & 1],
        ]);
        *slot = clamp_probability(rho.probability(&v))?;
    }
    Ok(p)
}

/// Mutual predictability `Σ_i ⟨a_i b_i c_i|ρ|a_i b_i c_i⟩`.
pub fn mp_tripartite(rho: &DensityMatrix3Q, basis: &ProductBasis) -> Result<f64> {
    let p = full_distribution(rho, basis)?;
    Ok(p[0b000] + p[0b111])
}

/// Sum of the two tripartite PCCs for a complementary pair of observables.
pub fn maccone_sum(rho: &DensityMatrix3Q, obs1: &ObservableSpec, obs2: &ObservableSpec) -> MacconeReport {
    MacconeReport::new(pcc_tripartite(rho, obs1), pcc_tripartite(rho, obs2))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MacconeReport {
    pub terms: [CorrelatorReport; 2],
    pub sum: f64,
}

impl MacconeReport {
    pub fn new(first: CorrelatorReport, second: CorrelatorReport) -> Self {
        let sum = first.tripartite + second.tripartite;
        Self {
            terms: [first, second],
            sum,
        }
    }
}

/// Outcome-level description of a PCC measurement on one cut: eigenvalue of
/// `A`, eigenvalue of `B`, and their joint probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointOutcome {
    pub a: f64,
    pub b: f64,
    pub probability: f64,
}

/// Joint distribution of the eigenvalue outcomes of `A` (lone qubit) and `B`
/// (pair) in a product of their eigenbases.
pub fn pcc_outcome_distribution(
    rho: &DensityMatrix3Q,
    cut: Bipartition,
    obs: &ObservableSpec,
) -> Result<Vec<JointOutcome>> {
    let ea = hermitian_eigen(obs.single())?;
    let eb = hermitian_eigen(obs.pair())?;
    let mut out = Vec::with_capacity(8);
    for i in 0..2 {
        let u: [Complex64; 2] = ea.vector(i).try_into().expect("2-vector");
        for j in 0..4 {
            let v: [Complex64; 4] = eb.vector(j).try_into().expect("4-vector");
            let p = clamp_probability(rho.probability(&cut_product_vector(cut, &u, &v)))?;
            out.push(JointOutcome {
                a: ea.values[i],
                b: eb.values[j],
                probability: p,
            });
        }
    }
    Ok(out)
}

/// Analytic correlator values for the GHZ and W families.
pub mod closed {
    use std::f64::consts::{LN_2, SQRT_2};

    use crate::states::quarter_sin_cos;

    /// `p log₂ q` with `0 log 0 = 0`.
    fn plog(p: f64, q: f64) -> f64 {
        if p <= 0.0 {
            0.0
        } else {
            p * q.log2()
        }
    }

    /// GHZ `a|000⟩ + b|111⟩`, observable X: every cut equals `2ab`.
    pub fn ghz_pcc_x(a: f64, b: f64) -> f64 {
        2.0 * a * b
    }

    /// GHZ, X basis, each cut and hence the tripartite mean.
    pub fn ghz_mi_x(a: f64, b: f64) -> f64 {
        let c = 2.0 * a * b;
        plog((1.0 + c) / 2.0, 1.0 + c) + plog((1.0 - c) / 2.0, 1.0 - c)
    }

    pub fn ghz_mp_z() -> f64 {
        1.0
    }

    /// W family, observable |+⟩⟨+| on each qubit.
    pub fn w_pcc_plus(theta: f64) -> f64 {
        let (s, c) = quarter_sin_cos(theta);
        let s2t = 2.0 * s * c;
        let first = SQRT_2 * s2t / ((1.0 + s * s) * (2.0 + c * c)).sqrt();
        let second = (s2t + SQRT_2 * s * s) / (6.0 + 2.0 * SQRT_2 * s2t - s2t * s2t).sqrt();
        (first * second * second).cbrt()
    }

    /// W family, X basis: `(I^{1-23}, I^{2-13} = I^{3-12})`.
    pub fn w_mi_x_cuts(theta: f64) -> (f64, f64) {
        let (s, c) = quarter_sin_cos(theta);
        let s2t = 2.0 * s * c;
        let m2 = (c + SQRT_2 * s).powi(2);
        let n2 = (c - SQRT_2 * s).powi(2);
        let d = 1.0 + s * s;
        // m²/d = 1 + √2 sin2θ/d, kept in log1p form so the cut vanishes exactly at θ = π/2.
        let r = SQRT_2 * s2t / d;
        let first = (m2 / 4.0 * r.ln_1p() + if n2 > 0.0 { n2 / 4.0 * (-r).ln_1p() } else { 0.0 }) / LN_2;
        let plus = 2.0 + SQRT_2 * s2t;
        let minus = 2.0 - SQRT_2 * s2t;
        let c2 = c * c;
        let second = plog(m2 / 4.0, 2.0 * m2 / plus)
            + plog(n2 / 4.0, 2.0 * n2 / minus)
            + plog(c2 / 4.0, 4.0 * c2 * c2 / (plus * minus));
        (first, second)
    }

    pub fn w_mi_x(theta: f64) -> f64 {
        let (i1, i2) = w_mi_x_cuts(theta);
        geo3(i1, i2, i2)
    }

    /// W family, Z basis: `(I^{1-23}, I^{2-13} = I^{3-12})`.
    pub fn w_mi_z_cuts(theta: f64) -> (f64, f64) {
        let (s, c) = quarter_sin_cos(theta);
        let (s2, c2) = (s * s, c * c);
        let first = -plog(c2, c2) - plog(s2, s2);
        let r = 4.0 / (3.0 + c2 - s2);
        let second = plog(c2, r) + if s2 > 0.0 { s2 / 2.0 * (r.log2() - (s2 / 2.0).log2()) } else { 0.0 };
        (first, second)
    }

    pub fn w_mi_z(theta: f64) -> f64 {
        let (i1, i2) = w_mi_z_cuts(theta);
        geo3(i1, i2, i2)
    }

    /// W family, mutual predictability in the X basis.
    pub fn w_mp_x(theta: f64) -> f64 {
        let (s, c) = quarter_sin_cos(theta);
        (3.0 - (c * c - s * s) + 4.0 * SQRT_2 * s * c) / 8.0
    }

    /// GHZ, observables (X, |1⟩⟨1|).
    pub fn ghz_maccone(a: f64, b: f64) -> f64 {
        1.0 + 2.0 * (a * b).abs()
    }

    /// W, observables (|0⟩⟨0|, |+⟩⟨+|).
    pub fn w_maccone(theta: f64) -> f64 {
        1.0 + w_pcc_plus(theta)
    }

    fn geo3(x: f64, y: f64, z: f64) -> f64 {
        if x <= 0.0 || y <= 0.0 || z <= 0.0 {
            0.0
        } else {
            (x * y * z).cbrt()
        }
    }
}
