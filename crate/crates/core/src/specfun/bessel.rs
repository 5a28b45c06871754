use serde::Serialize;

use crate::error::{Error, Result};

/// Largest supported |x|.
pub const MAX_ABS_ARG: f64 = 1e4;
/// Largest supported |n|.
pub const MAX_ABS_ORDER: i64 = 1000;

// values above this are rescaled during the downward sweep
const RESCALE_AT: f64 = 1e250;

/// `J_n(x)` for every order `n` in `[-n_max, n_max]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BesselRow {
    x: f64,
    n_max: usize,
    values: Vec<f64>,
}

impl BesselRow {
    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Values ordered from `n = -n_max` to `n = n_max`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn orders(&self) -> std::ops::RangeInclusive<i64> {
        -(self.n_max as i64)..=self.n_max as i64
    }

    /// `J_n(x)`; zero outside the stored range.
    pub fn get(&self, n: i64) -> f64 {
        if n.unsigned_abs() as usize > self.n_max {
            return 0.0;
        }
        self.values[(n + self.n_max as i64) as usize]
    }

    /// Pairs `(n, J_n(x))`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.orders().zip(self.values.iter().copied())
    }

    pub fn sum_of_squares(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }
}

fn check_envelope(n_top: u64, x: f64) -> Result<()> {
    if !x.is_finite() || x.abs() > MAX_ABS_ARG {
        return Err(Error::UnsupportedRange(format!(
            "Bessel argument {x} outside |x| <= {MAX_ABS_ARG}"
        )));
    }
    if n_top > MAX_ABS_ORDER as u64 {
        return Err(Error::UnsupportedRange(format!(
            "Bessel order {n_top} outside |n| <= {MAX_ABS_ORDER}"
        )));
    }
    Ok(())
}

/// `J_0(ax) ..= J_{n_top}(ax)` for `ax >= 0` by Miller's downward recurrence,
/// normalized with `J_0 + 2 Σ J_{2k} = 1`.
fn nonnegative_orders(n_top: usize, ax: f64) -> Vec<f64> {
    let mut vals = vec![0.0; n_top + 1];
    if ax == 0.0 {
        vals[0] = 1.0;
        return vals;
    }
    let base = n_top.max(ax.ceil() as usize);
    let mut m = base + 20 + (10.0 * ax.cbrt()).ceil() as usize;
    m += m % 2;

    let two_over_x = 2.0 / ax;
    let mut above = 0.0_f64;
    let mut cur = 1.0_f64;
    let mut norm = 0.0_f64;
    for k in (1..=m).rev() {
        if k <= n_top {
            vals[k] = cur;
        }
        if k % 2 == 0 {
            norm += 2.0 * cur;
        }
        let below = k as f64 * two_over_x * cur - above;
        above = cur;
        cur = below;
        if cur.abs() > RESCALE_AT {
            let s = 1.0 / RESCALE_AT;
            cur *= s;
            above *= s;
            norm *= s;
            for v in vals.iter_mut().skip(k) {
                *v *= s;
            }
        }
    }
    vals[0] = cur;
    norm += cur;
    for v in &mut vals {
        *v /= norm;
    }
    vals
}

/// Bessel function of the first kind `J_n(x)` of integer order.
///
/// Supported envelope: `|x| <= 1e4`, `|n| <= 1000`.
pub fn bessel_j(n: i64, x: f64) -> Result<f64> {
    let n_top = n.unsigned_abs();
    check_envelope(n_top, x)?;
    let vals = nonnegative_orders(n_top as usize, x.abs());
    let mut v = vals[n_top as usize];
    // J_{-n}(x) = (-1)^n J_n(x) and J_n(-x) = (-1)^n J_n(x)
    let flips = (n < 0) as u64 + (x < 0.0) as u64;
    if n_top % 2 == 1 && flips % 2 == 1 {
        v = -v;
    }
    Ok(v)
}

/// All orders `-n_max ..= n_max` at `x` in one recurrence sweep.
pub fn bessel_row(x: f64, n_max: usize) -> Result<BesselRow> {
    check_envelope(n_max as u64, x)?;
    let pos = nonnegative_orders(n_max, x.abs());
    let mut values = vec![0.0; 2 * n_max + 1];
    for (n, &v) in pos.iter().enumerate() {
        let odd = n % 2 == 1;
        let at_pos_x = if odd && x < 0.0 { -v } else { v };
        values[n_max + n] = at_pos_x;
        values[n_max - n] = if odd { -at_pos_x } else { at_pos_x };
    }
    Ok(BesselRow { x, n_max, values })
}
