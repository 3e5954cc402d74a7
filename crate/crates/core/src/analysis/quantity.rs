use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::correlators::{
    mi_tripartite, mp_tripartite, named_basis, pcc_tripartite, NamedOperator, ObservableSpec,
};
use crate::density::DensityMatrix3Q;
use crate::error::{Error, Result};
use crate::measures::{concurrence_fill, global_measure, triangle_edges};

/// Measurement axis for basis-dependent quantities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn label(self) -> &'static str {
        match self {
            Axis::X => "X",
            Axis::Y => "Y",
            Axis::Z => "Z",
        }
    }
}

/// A scalar that a scan can record at each grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    /// Concurrence fill.
    F123,
    CGmc,
    G123,
    /// Squared edge for the cut whose lone qubit is given (1-based).
    Edge(usize),
    Pcc(NamedOperator),
    Mi(Axis),
    Mp(Axis),
}

impl Quantity {
    pub const ALL: [Quantity; 18] = [
        Quantity::F123,
        Quantity::CGmc,
        Quantity::G123,
        Quantity::Edge(1),
        Quantity::Edge(2),
        Quantity::Edge(3),
        Quantity::Pcc(NamedOperator::X),
        Quantity::Pcc(NamedOperator::Y),
        Quantity::Pcc(NamedOperator::Z),
        Quantity::Pcc(NamedOperator::Pplus),
        Quantity::Pcc(NamedOperator::P0),
        Quantity::Pcc(NamedOperator::P1),
        Quantity::Mi(Axis::X),
        Quantity::Mi(Axis::Y),
        Quantity::Mi(Axis::Z),
        Quantity::Mp(Axis::X),
        Quantity::Mp(Axis::Y),
        Quantity::Mp(Axis::Z),
    ];

    pub fn id(self) -> String {
        match self {
            Quantity::F123 => "F123".into(),
            Quantity::CGmc => "C_GMC".into(),
            Quantity::G123 => "G123".into(),
            Quantity::Edge(i) => format!("D2_{i}"),
            Quantity::Pcc(op) => format!(
                "C123_{}",
                match op {
                    NamedOperator::Pplus => "plus",
                    NamedOperator::P0 => "0",
                    NamedOperator::P1 => "1",
                    other => other.label(),
                }
            ),
            Quantity::Mi(axis) => format!("I123_{}", axis.label()),
            Quantity::Mp(axis) => format!("P_{}", axis.label()),
        }
    }

    /// Whether the value is an entanglement measure that only means what it
    /// says on pure states.
    pub fn needs_pure_state(self) -> bool {
        matches!(self, Quantity::F123 | Quantity::CGmc | Quantity::G123 | Quantity::Edge(_))
    }

    pub fn evaluate(self, rho: &DensityMatrix3Q, pure: bool) -> Result<f64> {
        if self.needs_pure_state() && !pure {
            return Err(Error::UnsupportedFamily(format!(
                "{} is only defined here for pure states",
                self.id()
            )));
        }
        match self {
            Quantity::F123 => concurrence_fill(rho),
            Quantity::CGmc => Ok(triangle_edges(rho).min()),
            Quantity::G123 => Ok(global_measure(rho)),
            Quantity::Edge(i) => Ok(triangle_edges(rho).as_array()[i - 1]),
            Quantity::Pcc(op) => {
                let obs = ObservableSpec::self_paired(op.matrix(), op.label())?;
                Ok(pcc_tripartite(rho, &obs).tripartite)
            }
            Quantity::Mi(axis) => Ok(mi_tripartite(rho, &named_basis(axis.label())?)?.tripartite),
            Quantity::Mp(axis) => mp_tripartite(rho, &named_basis(axis.label())?),
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.id() == s)
            .ok_or_else(|| Error::UnknownLabel {
                kind: "quantity",
                label: s.to_owned(),
            })
    }
}

impl Serialize for Quantity {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.id())
    }
}

impl<'de> Deserialize<'de> for Quantity {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses a comma-separated list of quantity ids.
pub fn parse_quantities(list: &str) -> Result<Vec<Quantity>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect()
}
