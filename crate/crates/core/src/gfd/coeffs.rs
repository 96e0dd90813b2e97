use super::TimeGrid;
use crate::error::{Error, Result};
use crate::funcs::gamma_fn;

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "alpha must lie in (0,1), got {alpha}"
        )))
    }
}

fn check_step(grid: &TimeGrid, j: usize) -> Result<()> {
    if j + 1 > grid.steps() {
        return Err(Error::Index(format!(
            "step j = {j} needs node j+1 <= M = {}",
            grid.steps()
        )));
    }
    Ok(())
}

/// d^{1−α} and d^{2−α}; exactly zero at d = 0.
#[inline]
fn kernel_powers(d: f64, alpha: f64) -> (f64, f64) {
    if d == 0.0 {
        (0.0, 0.0)
    } else {
        (d.powf(1.0 - alpha), d.powf(2.0 - alpha))
    }
}

/// p_k^j = (z_{j+1} − z_k)^{1−α} − (z_{j+1} − z_{k+1})^{1−α} and the matching
/// q_k^j with exponent 2 − α.
pub fn pq_increments(grid: &TimeGrid, j: usize, k: usize, alpha: f64) -> Result<(f64, f64)> {
    check_alpha(alpha)?;
    check_step(grid, j)?;
    if k > j {
        return Err(Error::Index(format!("k = {k} exceeds j = {j}")));
    }
    let z = grid.z_nodes();
    let (p_near, q_near) = kernel_powers(z[j + 1] - z[k], alpha);
    let (p_far, q_far) = kernel_powers(z[j + 1] - z[k + 1], alpha);
    Ok((p_near - p_far, q_near - q_far))
}

/// Quadratic-interpolation weights for interval k at step j, together with
/// the unscaled numerators A, B, C.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub big_a: f64,
    pub big_b: f64,
    pub big_c: f64,
}

struct Constants {
    alpha: f64,
    gamma_3: f64,
}

impl Constants {
    fn new(alpha: f64) -> Result<Self> {
        Ok(Self {
            alpha,
            gamma_3: gamma_fn(3.0 - alpha)?,
        })
    }
}

#[inline]
fn quad_from_pq(z: &[f64], w: &[f64], j: usize, k: usize, p: f64, q: f64, cst: &Constants) -> QuadCoeffs {
    let alpha = cst.alpha;
    let (zm, z0, zp, zt) = (z[k - 1], z[k], z[k + 1], z[j + 1]);
    // Distances to z_{j+1} first: each difference of nearby nodes is exact or
    // nearly so, which keeps the brackets accurate when they are small.
    let (dm, d0, dp) = (zt - zm, zt - z0, zt - zp);
    let big_a = (2.0 - alpha) * (d0 + dp) * p - 2.0 * (1.0 - alpha) * q;
    let big_b = (2.0 - alpha) * (dm + dp) * p - 2.0 * (1.0 - alpha) * q;
    let big_c = (2.0 - alpha) * (dm + d0) * p - 2.0 * (1.0 - alpha) * q;
    let scale = 1.0 / (w[j + 1] * cst.gamma_3);
    QuadCoeffs {
        a: w[k - 1] * big_a * scale / ((z0 - zm) * (zp - zm)),
        b: w[k] * big_b * scale / ((z0 - zm) * (zp - z0)),
        c: w[k + 1] * big_c * scale / ((zp - zm) * (zp - z0)),
        big_a,
        big_b,
        big_c,
    }
}

fn check_distinct(z: &[f64], k: usize) -> Result<()> {
    if z[k] > z[k - 1] && z[k + 1] > z[k] {
        Ok(())
    } else {
        Err(Error::DegenerateGrid(format!("duplicate z nodes around k = {k}")))
    }
}

/// a_k^j, b_k^j, c_k^j and A, B, C for 1 ≤ k ≤ j ≤ M − 1.
pub fn quad_coeffs(grid: &TimeGrid, j: usize, k: usize, alpha: f64) -> Result<QuadCoeffs> {
    if k == 0 {
        return Err(Error::Index("quadratic coefficients start at k = 1".into()));
    }
    let (p, q) = pq_increments(grid, j, k, alpha)?;
    check_distinct(grid.z_nodes(), k)?;
    let cst = Constants::new(alpha)?;
    Ok(quad_from_pq(grid.z_nodes(), grid.w_nodes(), j, k, p, q, &cst))
}

/// (p_j, q_j): weights of u_1 and u_0 from the first, linearly interpolated interval.
pub fn first_coeffs(grid: &TimeGrid, j: usize, alpha: f64) -> Result<(f64, f64)> {
    let (p0, _) = pq_increments(grid, j, 0, alpha)?;
    let z = grid.z_nodes();
    let w = grid.w_nodes();
    if !(z[1] > z[0]) {
        return Err(Error::DegenerateGrid("z_1 == z_0".into()));
    }
    let base = p0 / (w[j + 1] * gamma_fn(2.0 - alpha)? * (z[1] - z[0]));
    Ok((base * w[1], base * w[0]))
}

/// All weights of the discrete operator at t_{j+1}.
#[derive(Debug, Clone)]
pub struct StepCoefficients {
    pub j: usize,
    pub alpha: f64,
    pub p_first: f64,
    pub q_first: f64,
    /// Entry `k - 1` holds the interval-k coefficients, k = 1..=j.
    pub quad: Vec<QuadCoeffs>,
}

impl StepCoefficients {
    /// Coefficients of interval k (1-based).
    pub fn at(&self, k: usize) -> &QuadCoeffs {
        &self.quad[k - 1]
    }

    /// The operator as a linear functional: entry l multiplies u_l, l = 0..=j+1.
    pub fn level_weights(&self) -> Vec<f64> {
        let j = self.j;
        let mut out = vec![0.0; j + 2];
        out[0] -= self.q_first;
        out[1] += self.p_first;
        for (idx, qc) in self.quad.iter().enumerate() {
            let k = idx + 1;
            out[k - 1] += qc.a;
            out[k] -= qc.b;
            out[k + 1] += qc.c;
        }
        out
    }

    /// Weight multiplying the newest level u_{j+1}: p_j for j = 0, c_j^j otherwise.
    pub fn leading(&self) -> f64 {
        if self.j == 0 {
            self.p_first
        } else {
            self.quad[self.j - 1].c
        }
    }
}

/// Builds the full coefficient set for step j in O(j).
pub fn step_coefficients(grid: &TimeGrid, j: usize, alpha: f64) -> Result<StepCoefficients> {
    check_alpha(alpha)?;
    check_step(grid, j)?;
    let (p_first, q_first) = first_coeffs(grid, j, alpha)?;
    let z = grid.z_nodes();
    let w = grid.w_nodes();
    let cst = Constants::new(alpha)?;

    // Powers of z_{j+1} − z_k for k = 1..=j+1, shared by neighbouring intervals.
    let powers: Vec<(f64, f64)> = (1..=j + 1)
        .map(|k| kernel_powers(z[j + 1] - z[k], alpha))
        .collect();
    let mut quad = Vec::with_capacity(j);
    for k in 1..=j {
        check_distinct(z, k)?;
        let (p_near, q_near) = powers[k - 1];
        let (p_far, q_far) = powers[k];
        quad.push(quad_from_pq(z, w, j, k, p_near - p_far, q_near - q_far, &cst));
    }
    Ok(StepCoefficients {
        j,
        alpha,
        p_first,
        q_first,
        quad,
    })
}

/// Discrete GFD at t_{j+1} from the values u_0..u_{j+1} at one spatial point.
pub fn gfd_apply(series: &[f64], grid: &TimeGrid, j: usize, alpha: f64) -> Result<f64> {
    if series.len() != j + 2 {
        return Err(Error::Length {
            expected: j + 2,
            got: series.len(),
        });
    }
    let coeffs = step_coefficients(grid, j, alpha)?;
    Ok(coeffs
        .level_weights()
        .iter()
        .zip(series)
        .map(|(wt, u)| wt * u)
        .sum())
}
