use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::partition_quadrature;
use crate::error::{Error, Result};
use crate::transform::Lambda;

const PRECISION: &str = "binary64";
const S_MIN: f64 = -0.5;
const S_MAX: f64 = 1.0;

/// Precomputed `log Z` on the compactified axis `s = λ/(1+|λ|) ∈ [−½, 1]`.
///
/// Lookups use a monotone piecewise cubic in `s` (three-point slopes with
/// Hyman's monotonicity filter), so they are exact at the nodes and
/// continuous everywhere.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZTable {
    s_grid: Vec<f64>,
    log_z: Vec<f64>,
    num_points: usize,
    precision: String,
    #[serde(skip)]
    slopes: Vec<f64>,
}

/// Node positions. `log Z` is not analytic at `λ = −1` or `λ = 0`, so nodes
/// are graded towards `s = −½` and `s = 0` from both sides. `[−½, 0]` gets
/// 60% of the intervals with the symmetric grading `tᵖ/(tᵖ + (1−t)ᵖ)`,
/// `p = 2.5`; `[0, 1]` gets the rest with `s = t³`.
fn grid(grid_size: usize) -> Vec<f64> {
    const NEG_SHARE: f64 = 0.6;
    const NEG_GRADING: f64 = 2.5;
    const POS_GRADING: i32 = 3;
    let intervals = grid_size - 1;
    let neg = ((intervals as f64) * NEG_SHARE).round() as usize;
    let pos = intervals - neg;
    let two_ended = |t: f64| {
        let a = t.powf(NEG_GRADING);
        a / (a + (1.0 - t).powf(NEG_GRADING))
    };
    let mut s = Vec::with_capacity(grid_size);
    s.extend((0..neg).map(|i| S_MIN - S_MIN * two_ended(i as f64 / neg as f64)));
    s.extend((0..pos).map(|i| S_MAX * (i as f64 / pos as f64).powi(POS_GRADING)));
    s.push(S_MAX);
    s
}

/// Builds a table of `grid_size` nodes, each integrated with `num_points`.
pub fn build_ztable(grid_size: usize, num_points: usize) -> Result<ZTable> {
    if grid_size < 16 {
        return Err(Error::InvalidArgument(format!(
            "grid size must be at least 16, got {grid_size}"
        )));
    }
    let s_grid = grid(grid_size);
    let log_z = s_grid
        .iter()
        .map(|&s| Ok(partition_quadrature(Lambda::from_compactified(s)?, num_points)?.ln()))
        .collect::<Result<Vec<_>>>()?;
    ZTable::from_parts(s_grid, log_z, num_points)
}

impl ZTable {
    pub fn from_parts(s_grid: Vec<f64>, log_z: Vec<f64>, num_points: usize) -> Result<Self> {
        let mut table = ZTable {
            s_grid,
            log_z,
            num_points,
            precision: PRECISION.to_string(),
            slopes: Vec::new(),
        };
        table.validate()?;
        table.slopes = table.compute_slopes();
        Ok(table)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(format!("malformed z-table: {msg}")));
        if self.s_grid.len() != self.log_z.len() {
            return bad(format!(
                "{} grid nodes but {} values",
                self.s_grid.len(),
                self.log_z.len()
            ));
        }
        if self.s_grid.len() < 2 {
            return bad("fewer than two nodes".into());
        }
        if self.s_grid.first() != Some(&S_MIN) || self.s_grid.last() != Some(&S_MAX) {
            return bad("grid must span [-0.5, 1]".into());
        }
        if self.s_grid.windows(2).any(|w| !(w[0] < w[1])) {
            return bad("grid is not strictly increasing".into());
        }
        if self.log_z.iter().any(|v| !v.is_finite()) {
            return bad("non-finite value".into());
        }
        Ok(())
    }

    fn compute_slopes(&self) -> Vec<f64> {
        let s = &self.s_grid;
        let y = &self.log_z;
        let n = s.len();
        let h: Vec<f64> = s.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
        if n == 2 {
            return vec![delta[0]; 2];
        }
        let mut d = vec![0.0; n];
        for i in 1..n - 1 {
            d[i] = (h[i] * delta[i - 1] + h[i - 1] * delta[i]) / (h[i - 1] + h[i]);
        }
        d[0] = ((2.0 * h[0] + h[1]) * delta[0] - h[0] * delta[1]) / (h[0] + h[1]);
        d[n - 1] = ((2.0 * h[n - 2] + h[n - 3]) * delta[n - 2] - h[n - 2] * delta[n - 3])
            / (h[n - 2] + h[n - 3]);
        // Hyman filter: keeps each cubic piece monotone on monotone data.
        for i in 0..n {
            let (lo, hi) = match i {
                0 => (delta[0], delta[0]),
                _ if i == n - 1 => (delta[n - 2], delta[n - 2]),
                _ => (delta[i - 1], delta[i]),
            };
            if lo * hi <= 0.0 || d[i] * lo <= 0.0 {
                d[i] = 0.0;
            } else {
                let bound = 3.0 * lo.abs().min(hi.abs());
                d[i] = d[i].signum() * d[i].abs().min(bound);
            }
        }
        d
    }

    pub fn s_grid(&self) -> &[f64] {
        &self.s_grid
    }

    pub fn log_z(&self) -> &[f64] {
        &self.log_z
    }

    pub fn num_points(&self) -> usize {
        self.num_points
    }

    pub fn len(&self) -> usize {
        self.s_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s_grid.is_empty()
    }

    /// Interpolated `log Z(λ)`.
    pub fn lookup_log(&self, lambda: Lambda) -> Result<f64> {
        if lambda.get() < -1.0 {
            return Err(Error::LambdaOutOfRange {
                lambda,
                reason: "the density is undefined for lambda < -1",
            });
        }
        let s = lambda.compactified();
        let n = self.s_grid.len();
        // Index of the interval [s_i, s_{i+1}] containing s.
        let i = match self.s_grid.partition_point(|&v| v <= s) {
            0 => 0,
            p if p >= n => return Ok(self.log_z[n - 1]),
            p => p - 1,
        };
        let h = self.s_grid[i + 1] - self.s_grid[i];
        let t = (s - self.s_grid[i]) / h;
        let (y0, y1) = (self.log_z[i], self.log_z[i + 1]);
        let (d0, d1) = (self.slopes[i], self.slopes[i + 1]);
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        Ok(h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1)
    }

    /// Interpolated `Z(λ)`.
    pub fn lookup(&self, lambda: Lambda) -> Result<f64> {
        Ok(self.lookup_log(lambda)?.exp())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("a validated table always serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: ZTable = serde_json::from_str(text)
            .map_err(|e| Error::InvalidArgument(format!("malformed z-table: {e}")))?;
        if raw.precision != PRECISION {
            return Err(Error::InvalidArgument(format!(
                "malformed z-table: unsupported precision `{}`",
                raw.precision
            )));
        }
        ZTable::from_parts(raw.s_grid, raw.log_z, raw.num_points)
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        w.write_all(self.to_json().as_bytes())?;
        w.write_all(b"\n")
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut text = String::new();
        r.read_to_string(&mut text)
            .map_err(|e| Error::InvalidArgument(format!("cannot read z-table: {e}")))?;
        ZTable::from_json(&text)
    }
}

/// Equivalent to [`ZTable::lookup`].
pub fn z_lookup(table: &ZTable, lambda: Lambda) -> Result<f64> {
    table.lookup(lambda)
}
