//! Where a parameterization sits relative to the proof's requirements.
//!
//! Graphs need `d·ln(2r)·α / ln(1/α) ≤ 1/2`. Hypergraphs need
//! `(r−1)·d·α^{r−1} / ln(1/(2α^{1+κ})) ≤ 1/r` and
//! `ln(1/α) / ln(1/(2α^{1+κ})) ≤ 1`. The upper and lower threshold cases of
//! the hypergraph procedure cannot meet once `α^{1+κ} ≤ 1/4`: a product `X'`
//! of weights at most 1/2 is either 1 or at most 1/2, so a weight above
//! `(1−X)/2` has `p(1−X') > (1−X)/4`.

use serde::Serialize;

use crate::graph_engine::alpha_graph_formula;
use crate::hyper_engine::{alpha_hyper_formula, kappa};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RegimeMode {
    Graph,
    Hyper,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeReport {
    pub mode: RegimeMode,
    pub d: f64,
    pub r: usize,
    pub eps: f64,
    pub alpha: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower: Option<f64>,
    /// The bad-set ratio: compared with 1/2 (graph) or 1/r (hypergraph).
    pub ratio: f64,
    pub bound: f64,
    /// Hypergraphs only: `ln(1/α) / ln(1/(2α^{1+κ}))`, compared with 1.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio2: Option<f64>,
    /// α lies in (0, 1) for graphs, (0, 1/2) for hypergraphs.
    pub domain_ok: bool,
    /// Hypergraphs only: the two threshold cases provably exclude each other.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exclusion_guaranteed: Option<bool>,
    pub inside: bool,
}

/// Evaluates the proof ratios. `eps = 0` takes the ε→0 limit of α.
pub fn check_regime(d: f64, r: usize, eps: f64, mode: RegimeMode) -> RegimeReport {
    let rf = r as f64;
    match mode {
        RegimeMode::Graph => {
            let alpha = alpha_graph_formula(d, rf, eps);
            let domain_ok = alpha > 0.0 && alpha < 1.0;
            let ratio = d * (2.0 * rf).ln() * alpha / (1.0 / alpha).ln();
            RegimeReport {
                mode,
                d,
                r,
                eps,
                alpha,
                kappa: None,
                lower: None,
                ratio,
                bound: 0.5,
                ratio2: None,
                domain_ok,
                exclusion_guaranteed: None,
                inside: domain_ok && ratio <= 0.5,
            }
        }
        RegimeMode::Hyper => {
            let alpha = alpha_hyper_formula(d, rf, eps);
            let k = kappa(eps, r);
            let lower = alpha.powf(1.0 + k);
            let domain_ok = alpha > 0.0 && alpha < 0.5 && r >= 2;
            let denom = (1.0 / (2.0 * lower)).ln();
            let ratio = (rf - 1.0) * d * alpha.powf(rf - 1.0) / denom;
            let ratio2 = (1.0 / alpha).ln() / denom;
            RegimeReport {
                mode,
                d,
                r,
                eps,
                alpha,
                kappa: Some(k),
                lower: Some(lower),
                ratio,
                bound: 1.0 / rf,
                ratio2: Some(ratio2),
                domain_ok,
                exclusion_guaranteed: Some(domain_ok && lower <= 0.25),
                inside: domain_ok && ratio <= 1.0 / rf && ratio2 <= 1.0,
            }
        }
    }
}
