use serde::{Deserialize, Serialize};

use super::PatternGrid;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RidgeKind {
    /// Local maxima of `p00` along `ε₀`.
    Peaks,
    /// Local minima of `p00` along `ε₀`.
    Dips,
}

/// One extremum along an `ε₀` slice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ridge {
    /// Refined position, caption units (GHz).
    pub eps0: f64,
    /// Grid row of the discrete extremum.
    pub index: usize,
    pub height: f64,
}

/// Extrema of `p00` along `ε₀` at amplitude index `i_amp`, refined by a
/// three-point parabola. A plateau counts once, at its midpoint; NaN cells
/// break the slice.
pub fn ridge_locate(grid: &PatternGrid, i_amp: usize, kind: RidgeKind) -> Result<Vec<Ridge>> {
    if i_amp >= grid.n_amp() {
        return Err(Error::InvalidParameter(format!(
            "amplitude index {i_amp} outside 0..{}",
            grid.n_amp()
        )));
    }
    let sign = match kind {
        RidgeKind::Peaks => 1.0,
        RidgeKind::Dips => -1.0,
    };
    let y: Vec<f64> = grid.eps_slice(i_amp).into_iter().map(|v| sign * v).collect();
    let step = grid.eps_axis.step();
    let mut out = Vec::new();
    let mut i = 1;
    while i + 1 < y.len() {
        if y[i].is_nan() || y[i - 1].is_nan() || !(y[i] > y[i - 1]) {
            i += 1;
            continue;
        }
        // walk across a plateau
        let mut k = i;
        while k + 1 < y.len() && y[k + 1] == y[i] {
            k += 1;
        }
        if k + 1 < y.len() && y[k + 1] < y[i] {
            let offset = if k == i {
                let (a, b, c) = (y[i - 1], y[i], y[i + 1]);
                let curv = a - 2.0 * b + c;
                if curv < 0.0 {
                    (0.5 * (a - c) / curv).clamp(-0.5, 0.5)
                } else {
                    0.0
                }
            } else {
                0.5 * (k - i) as f64
            };
            out.push(Ridge {
                eps0: grid.eps_axis.value(i) + offset * step,
                index: i,
                height: sign * y[i],
            });
        }
        i = k + 1;
    }
    Ok(out)
}
