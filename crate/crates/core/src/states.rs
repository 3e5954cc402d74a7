//! Named three-qubit state families.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, FRAC_PI_8};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::density::{DensityMatrix3Q, DIM};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ZERO};

pub const NORM_TOL: f64 = 1e-12;
const GHZ_NORM_TOL: f64 = 1e-10;
const X_FAMILY_MIN_NORM: f64 = 1e-14;

/// A normalized three-qubit pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState3Q {
    amplitudes: [Complex64; DIM],
}

impl PureState3Q {
    /// Accepts amplitudes whose 2-norm is 1 within 1e-12.
    pub fn new(amplitudes: [Complex64; DIM]) -> Result<Self> {
        let norm = norm(&amplitudes);
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Unnormalized(norm));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales to unit norm; fails only for the zero vector.
    pub fn normalized(amplitudes: [Complex64; DIM]) -> Result<Self> {
        let norm = norm(&amplitudes);
        if !norm.is_finite() || norm <= X_FAMILY_MIN_NORM {
            return Err(Error::Unnormalized(norm));
        }
        Ok(Self {
            amplitudes: amplitudes.map(|z| z / norm),
        })
    }

    pub(crate) fn from_real(amplitudes: [f64; DIM]) -> Result<Self> {
        Self::new(amplitudes.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn amplitudes(&self) -> &[Complex64; DIM] {
        &self.amplitudes
    }

    pub fn to_density(&self) -> DensityMatrix3Q {
        DensityMatrix3Q::new_unchecked(ComplexMatrix::outer(&self.amplitudes, &self.amplitudes))
    }
}

fn norm(amplitudes: &[Complex64]) -> f64 {
    amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn to_density(psi: &PureState3Q) -> DensityMatrix3Q {
    psi.to_density()
}

fn check_range(name: &str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if !(lo..=hi).contains(&value) {
        return Err(Error::out_of_domain(name, value, &format!("[{lo}, {hi}]")));
    }
    Ok(())
}

/// `a|000⟩ + b|111⟩`.
pub fn make_ghz(a: f64, b: f64) -> Result<PureState3Q> {
    check_range("a", a, 0.0, 1.0)?;
    check_range("b", b, 0.0, 1.0)?;
    let n2 = a * a + b * b;
    if (n2 - 1.0).abs() > GHZ_NORM_TOL {
        return Err(Error::Unnormalized(n2.sqrt()));
    }
    // Inputs inside the 1e-10 slack but outside the stored-state tolerance
    // get rescaled.
    let s = n2.sqrt();
    let s = if (s - 1.0).abs() <= NORM_TOL { 1.0 } else { s };
    let mut amps = [0.0; DIM];
    amps[0b000] = a / s;
    amps[0b111] = b / s;
    PureState3Q::from_real(amps)
}

/// `(sin θ, cos θ)` on `[0, π/2]`, with `cos(π/2) = 0` exactly.
pub fn quarter_sin_cos(theta: f64) -> (f64, f64) {
    if theta > FRAC_PI_4 {
        let (c, s) = (FRAC_PI_2 - theta).sin_cos();
        (s, c)
    } else {
        theta.sin_cos()
    }
}

/// `cosθ|100⟩ + (sinθ/√2)(|010⟩ + |001⟩)`.
pub fn make_w(theta: f64) -> Result<PureState3Q> {
    check_range("theta", theta, 0.0, FRAC_PI_2)?;
    let (s, c) = quarter_sin_cos(theta);
    let side = s * FRAC_1_SQRT_2;
    let mut amps = [0.0; DIM];
    amps[0b100] = c;
    amps[0b010] = side;
    amps[0b001] = side;
    PureState3Q::from_real(amps)
}

/// Unnormalized amplitudes on |000⟩, |111⟩, |100⟩ of the one-parameter
/// family used to exhibit inequivalent rankings.
pub fn x_family_amplitudes(a: f64) -> (f64, f64, f64) {
    let r = 1.0 - std::f64::consts::SQRT_2 * a;
    (
        a * FRAC_1_SQRT_2 + FRAC_PI_8.cos() * r,
        a + FRAC_PI_8.sin() * r,
        a * FRAC_1_SQRT_2,
    )
}

/// Normalization `N` (squared norm) of the x-family at `a`.
pub fn x_family_norm(a: f64) -> f64 {
    let (c000, c111, c100) = x_family_amplitudes(a);
    c000 * c000 + c111 * c111 + c100 * c100
}

pub fn make_x_family(a: f64) -> Result<PureState3Q> {
    if !a.is_finite() {
        return Err(Error::out_of_domain("a", a, "finite reals"));
    }
    let n = x_family_norm(a);
    if n <= X_FAMILY_MIN_NORM {
        return Err(Error::Numerical(format!(
            "x-family normalization N = {n:e} vanishes at a = {a}"
        )));
    }
    let (c000, c111, c100) = x_family_amplitudes(a);
    let s = n.sqrt();
    let mut amps = [0.0; DIM];
    amps[0b000] = c000 / s;
    amps[0b111] = c111 / s;
    amps[0b100] = c100 / s;
    PureState3Q::from_real(amps)
}

/// `√(1−y)|000⟩ + √y|111⟩`.
pub fn make_ghz_y(y: f64) -> Result<PureState3Q> {
    check_range("y", y, 0.0, 1.0)?;
    make_ghz((1.0 - y).sqrt(), y.sqrt())
}

pub fn ghz_state() -> PureState3Q {
    make_ghz(FRAC_1_SQRT_2, FRAC_1_SQRT_2).expect("valid")
}

/// Equal-weight W state, θ = arctan √2.
pub fn w_state() -> PureState3Q {
    make_w(std::f64::consts::SQRT_2.atan()).expect("valid")
}

/// `p|GHZ⟩⟨GHZ| + (1−p)|W⟩⟨W|`.
pub fn mix_ghz_w(p: f64) -> Result<DensityMatrix3Q> {
    check_range("p", p, 0.0, 1.0)?;
    let g = ghz_state().to_density();
    let w = w_state().to_density();
    let m = &g.matrix().scale_real(p) + &w.matrix().scale_real(1.0 - p);
    DensityMatrix3Q::new(m)
}

/// The two states of the classic CF/GMC ranking-reversal example.
///
/// The second state is taken as `cos(π/8)|000⟩ + sin(π/8)|111⟩`, which is the
/// x-family at `a = 0`.
pub fn ranking_reversal_pair() -> (PureState3Q, PureState3Q) {
    let f = std::f64::consts::PI / 5.0;
    let mut amps = [0.0; DIM];
    amps[0b000] = f.sin() * FRAC_1_SQRT_2;
    amps[0b100] = f.cos() * FRAC_1_SQRT_2;
    amps[0b111] = FRAC_1_SQRT_2;
    let psi1 = PureState3Q::from_real(amps).expect("unit norm");
    let mut amps = [0.0; DIM];
    amps[0b000] = FRAC_PI_8.cos();
    amps[0b111] = FRAC_PI_8.sin();
    let psi2 = PureState3Q::from_real(amps).expect("unit norm");
    (psi1, psi2)
}

/// Identifier of a built-in family, as used on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    GeneralizedGhz,
    GeneralizedW,
    XFamily,
    GhzY,
    GhzWMixture,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 5] = [
        FamilyKind::GeneralizedGhz,
        FamilyKind::GeneralizedW,
        FamilyKind::XFamily,
        FamilyKind::GhzY,
        FamilyKind::GhzWMixture,
    ];

    pub fn id(self) -> &'static str {
        match self {
            FamilyKind::GeneralizedGhz => "generalized-ghz",
            FamilyKind::GeneralizedW => "generalized-w",
            FamilyKind::XFamily => "x-family",
            FamilyKind::GhzY => "ghz-y",
            FamilyKind::GhzWMixture => "ghz-w-mixture",
        }
    }

    /// The parameter swept by scans.
    pub fn scan_parameter(self) -> &'static str {
        match self {
            FamilyKind::GeneralizedGhz | FamilyKind::XFamily => "a",
            FamilyKind::GeneralizedW => "theta",
            FamilyKind::GhzY => "y",
            FamilyKind::GhzWMixture => "p",
        }
    }

    /// Family member at a single scan-parameter value. For the GHZ family
    /// `b = √(1 − a²)`.
    pub fn at(self, value: f64) -> Result<StateFamily> {
        let family = match self {
            FamilyKind::GeneralizedGhz => {
                check_range("a", value, 0.0, 1.0)?;
                StateFamily::GeneralizedGhz {
                    a: value,
                    b: (1.0 - value * value).max(0.0).sqrt(),
                }
            }
            FamilyKind::GeneralizedW => StateFamily::GeneralizedW { theta: value },
            FamilyKind::XFamily => StateFamily::XFamily { a: value },
            FamilyKind::GhzY => StateFamily::GhzY { y: value },
            FamilyKind::GhzWMixture => StateFamily::GhzWMixture { p: value },
        };
        family.validate()?;
        Ok(family)
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyKind::ALL
            .into_iter()
            .find(|k| k.id() == s)
            .ok_or_else(|| Error::UnknownLabel {
                kind: "family",
                label: s.to_owned(),
            })
    }
}

/// A family together with concrete parameter values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum StateFamily {
    GeneralizedGhz { a: f64, b: f64 },
    GeneralizedW { theta: f64 },
    XFamily { a: f64 },
    GhzY { y: f64 },
    GhzWMixture { p: f64 },
}

/// Either a pure state or a general density matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum State3Q {
    Pure(PureState3Q),
    Mixed(DensityMatrix3Q),
}

impl State3Q {
    pub fn density(&self) -> DensityMatrix3Q {
        match self {
            State3Q::Pure(psi) => psi.to_density(),
            State3Q::Mixed(rho) => rho.clone(),
        }
    }

    pub fn is_pure(&self) -> bool {
        matches!(self, State3Q::Pure(_))
    }
}

impl StateFamily {
    pub fn kind(&self) -> FamilyKind {
        match self {
            StateFamily::GeneralizedGhz { .. } => FamilyKind::GeneralizedGhz,
            StateFamily::GeneralizedW { .. } => FamilyKind::GeneralizedW,
            StateFamily::XFamily { .. } => FamilyKind::XFamily,
            StateFamily::GhzY { .. } => FamilyKind::GhzY,
            StateFamily::GhzWMixture { .. } => FamilyKind::GhzWMixture,
        }
    }

    /// Builds a family from its id and named parameters (`a`, `b`, `theta`,
    /// `y`, `p`). For the GHZ family a missing `b` defaults to `√(1 − a²)`.
    pub fn from_params(kind: FamilyKind, params: &BTreeMap<String, f64>) -> Result<Self> {
        let allowed: &[&str] = match kind {
            FamilyKind::GeneralizedGhz => &["a", "b"],
            FamilyKind::GeneralizedW => &["theta"],
            FamilyKind::XFamily => &["a"],
            FamilyKind::GhzY => &["y"],
            FamilyKind::GhzWMixture => &["p"],
        };
        if let Some(extra) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(Error::InvalidInput(format!(
                "parameter `{extra}` does not belong to family `{kind}` (expected {allowed:?})"
            )));
        }
        let get = |name: &str| -> Result<f64> {
            params.get(name).copied().ok_or_else(|| {
                Error::InvalidInput(format!("family `{kind}` needs parameter `{name}`"))
            })
        };
        let family = match kind {
            FamilyKind::GeneralizedGhz => {
                let a = get("a")?;
                let b = match params.get("b") {
                    Some(&b) => b,
                    None => (1.0 - a * a).max(0.0).sqrt(),
                };
                StateFamily::GeneralizedGhz { a, b }
            }
            FamilyKind::GeneralizedW => StateFamily::GeneralizedW {
                theta: get("theta")?,
            },
            FamilyKind::XFamily => StateFamily::XFamily { a: get("a")? },
            FamilyKind::GhzY => StateFamily::GhzY { y: get("y")? },
            FamilyKind::GhzWMixture => StateFamily::GhzWMixture { p: get("p")? },
        };
        family.validate()?;
        Ok(family)
    }

    pub fn validate(&self) -> Result<()> {
        self.state().map(|_| ())
    }

    pub fn state(&self) -> Result<State3Q> {
        Ok(match *self {
            StateFamily::GeneralizedGhz { a, b } => State3Q::Pure(make_ghz(a, b)?),
            StateFamily::GeneralizedW { theta } => State3Q::Pure(make_w(theta)?),
            StateFamily::XFamily { a } => State3Q::Pure(make_x_family(a)?),
            StateFamily::GhzY { y } => State3Q::Pure(make_ghz_y(y)?),
            StateFamily::GhzWMixture { p } => State3Q::Mixed(mix_ghz_w(p)?),
        })
    }

    pub fn density(&self) -> Result<DensityMatrix3Q> {
        Ok(self.state()?.density())
    }
}

/// Amplitude vector helper for tests and file loading.
pub fn amplitudes_from_pairs(pairs: &[[f64; 2]]) -> Result<[Complex64; DIM]> {
    if pairs.len() != DIM {
        return Err(Error::Dimension(format!(
            "expected {DIM} amplitudes, got {}",
            pairs.len()
        )));
    }
    let mut amps = [ZERO; DIM];
    for (slot, [re, im]) in amps.iter_mut().zip(pairs) {
        *slot = Complex64::new(*re, *im);
    }
    Ok(amps)
}
