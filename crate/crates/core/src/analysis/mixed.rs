use rayon::prelude::*;

use super::scan::ScanRecord;
use crate::correlators::{mi_tripartite, named_basis, named_observable, pcc_tripartite};
use crate::error::Result;
use crate::states::mix_ghz_w;

/// Metadata note attached to the `F123_quoted` column.
pub const F123_QUOTED_NOTE: &str =
    "quoted closed form from a convex-roof computation; not computed by this toolkit";

pub const MIXED_COLUMNS: [&str; 7] = [
    "C123_0",
    "C123_plus",
    "I123_Z",
    "C123_0_closed",
    "C123_plus_closed",
    "I123_Z_closed",
    "F123_quoted",
];

/// Closed forms for `p|GHZ⟩⟨GHZ| + (1−p)|W⟩⟨W|`.
pub mod closed {
    fn plog(w: f64, arg: f64) -> f64 {
        if w <= 0.0 {
            0.0
        } else {
            w * arg.log2()
        }
    }

    /// Signed; the numeric correlator is its absolute value.
    pub fn pcc_zero(p: f64) -> f64 {
        (p * p + 16.0 * p - 8.0) / ((2.0 + p) * (4.0 - p))
    }

    pub fn pcc_plus(p: f64) -> f64 {
        (4.0 - p) / ((5.0 - 2.0 * p) * (7.0 + 2.0 * p)).sqrt()
    }

    pub fn mi_z(p: f64) -> f64 {
        let q = 1.0 - p;
        plog(2.0 * q / 3.0, 6.0 / (4.0 - p))
            + plog(q / 3.0, 12.0 * q / (2.0 + p).powi(2))
            + plog(p / 2.0, 6.0 / (2.0 + p))
            + plog(p / 2.0, 18.0 * p / (8.0 + 2.0 * p - p * p))
    }

    /// Concurrence fill of the mixture as quoted, not computed.
    pub fn f123_quoted(p: f64) -> f64 {
        (5.0 * p * p - 4.0 * p + 8.0) / 9.0
    }
}

/// Numeric correlators of the GHZ/W mixture next to their closed forms.
pub fn mixed_state_study(p_grid: &[f64]) -> Result<Vec<ScanRecord>> {
    let zero = named_observable("P0")?;
    let plus = named_observable("Pplus")?;
    let z = named_basis("Z")?;
    p_grid
        .par_iter()
        .map(|&p| {
            let rho = mix_ghz_w(p)?;
            let mut r = ScanRecord::new("p", p);
            r.insert("C123_0", pcc_tripartite(&rho, &zero).tripartite)?;
            r.insert("C123_plus", pcc_tripartite(&rho, &plus).tripartite)?;
            r.insert("I123_Z", mi_tripartite(&rho, &z)?.tripartite)?;
            r.insert("C123_0_closed", closed::pcc_zero(p))?;
            r.insert("C123_plus_closed", closed::pcc_plus(p))?;
            r.insert("I123_Z_closed", closed::mi_z(p))?;
            r.insert("F123_quoted", closed::f123_quoted(p))?;
            Ok(r)
        })
        .collect()
}
