//! Ranks of `C_r` over ℚ[∂] and Gelfand–Kirillov growth profiles.

use crate::algebra::{Basis, Polynomial};
use crate::conformal::{ConformalElement, NProduct};
use crate::constructions::{closure_layers, GeneratorSet};
use crate::error::{domain, Result};
use crate::linalg::bareiss_rank;
use std::collections::BTreeSet;
use std::fmt;

/// Rank of the ℚ[∂]-span, i.e. the dimension of the ℚ(∂)-span.
pub fn span_rank(elems: &[ConformalElement]) -> usize {
    let cols: Vec<Basis> = elems
        .iter()
        .flat_map(|e| e.support().copied())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if cols.is_empty() {
        return 0;
    }
    let rows = elems
        .iter()
        .filter(|e| !e.is_zero())
        .map(|e| {
            cols.iter()
                .map(|b| e.terms().get(b).cloned().unwrap_or_else(Polynomial::zero))
                .collect()
        })
        .collect();
    bareiss_rank(rows)
}

/// Whether `x` lies in the ℚ(∂)-span of `span`.
pub fn in_rational_span(span: &[ConformalElement], x: &ConformalElement) -> bool {
    let mut with = span.to_vec();
    with.push(x.clone());
    span_rank(&with) == span_rank(span)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Growth {
    Zero,
    Linear,
    Superlinear,
    Indeterminate,
}

impl Growth {
    pub fn as_str(self) -> &'static str {
        match self {
            Growth::Zero => "zero_growth",
            Growth::Linear => "linear_growth",
            Growth::Superlinear => "superlinear",
            Growth::Indeterminate => "indeterminate",
        }
    }
}

impl fmt::Display for Growth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankProfile {
    pub generators: Vec<String>,
    /// `(r, rank C_r)` for `r = 1..=rmax`.
    pub ranks: Vec<(u32, usize)>,
    /// Least-squares slope of `ln rank` against `ln r` on `[⌈rmax/2⌉, rmax]`.
    pub exponent: f64,
    pub classification: Growth,
}

/// The fitting window `[⌈rmax/2⌉, rmax]`.
fn window(ranks: &[(u32, usize)]) -> &[(u32, usize)] {
    let rmax = ranks.len() as u32;
    let from = rmax.div_ceil(2);
    &ranks[(from - 1) as usize..]
}

fn fit(ranks: &[(u32, usize)]) -> f64 {
    let pts: Vec<(f64, f64)> = window(ranks)
        .iter()
        .map(|&(r, k)| ((r as f64).ln(), (k as f64).ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

pub fn classify(ranks: &[(u32, usize)], exponent: f64) -> Growth {
    let w = window(ranks);
    let constant = w.windows(2).all(|p| p[0].1 == p[1].1);
    let increasing = w.windows(2).all(|p| p[0].1 < p[1].1);
    if exponent < 0.5 && constant {
        Growth::Zero
    } else if (exponent - 1.0).abs() <= 0.5 && increasing {
        Growth::Linear
    } else if exponent >= 1.5 {
        Growth::Superlinear
    } else {
        Growth::Indeterminate
    }
}

/// Ranks of `C_1, …, C_rmax`, the fitted exponent, and its classification.
pub fn gk_profile<P: NProduct + ?Sized>(
    p: &P,
    gens: &GeneratorSet,
    rmax: u32,
    cap: u32,
) -> Result<RankProfile> {
    if rmax < 4 {
        return Err(domain("gk profile needs rmax >= 4"));
    }
    let layers = closure_layers(p, gens, rmax, cap)?;
    let mut ranks = Vec::new();
    let mut acc = Vec::new();
    for (r, layer) in layers.iter().enumerate() {
        acc.extend(layer.iter().cloned());
        ranks.push((r as u32 + 1, span_rank(&acc)));
    }
    let (exponent, classification) = if ranks.iter().any(|&(_, k)| k == 0) {
        let all_zero = ranks.iter().all(|&(_, k)| k == 0);
        (0.0, if all_zero { Growth::Zero } else { Growth::Indeterminate })
    } else {
        let e = fit(&ranks);
        (e, classify(&ranks, e))
    };
    Ok(RankProfile {
        generators: gens.names().to_vec(),
        ranks,
        exponent,
        classification,
    })
}
