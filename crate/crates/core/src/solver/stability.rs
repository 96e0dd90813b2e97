//! Per-step stability diagnostics for K_{j+1} U_{j+1} = h_j U_j + V_j.
//!
//! With gap g = min_i(|k_ii| − Σ|k_il|), ‖K⁻¹‖∞ ≤ 1/g, and the one-step
//! amplification of the previous level is bounded by |h_j|/g.

use super::tridiag::{thomas_solve, TridiagonalSystem};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityRow {
    /// Step index j (the system solves for level j + 1).
    pub step: usize,
    pub gap: f64,
    /// 1/gap, infinite for non-dominant systems.
    pub inverse_norm_bound: f64,
    /// Coefficient h_j of u_j: −q_0 at j = 0, p_1 − b_1^1 at j = 1,
    /// c_{j−1}^j − b_j^j afterwards.
    pub history_coefficient: f64,
    /// |h_j| / gap
    pub amplification: f64,
    pub within_bound: bool,
    pub dominant: bool,
    /// ‖K⁻¹‖∞ computed exactly as max(K⁻¹·1), valid for dominant Z-matrices.
    pub inverse_norm: Option<f64>,
    /// |h_j| ‖K⁻¹‖∞
    pub amplification_exact: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct StabilityReport {
    pub rows: Vec<StabilityRow>,
}

impl StabilityReport {
    /// Largest amplification over steps j >= `from_step`.
    pub fn max_amplification(&self, from_step: usize) -> Option<f64> {
        self.rows
            .iter()
            .filter(|r| r.step >= from_step)
            .map(|r| r.amplification)
            .reduce(f64::max)
    }

    pub fn max_amplification_exact(&self, from_step: usize) -> Option<f64> {
        self.rows
            .iter()
            .filter(|r| r.step >= from_step)
            .filter_map(|r| r.amplification_exact)
            .reduce(f64::max)
    }

    pub fn all_dominant(&self) -> bool {
        self.rows.iter().all(|r| r.dominant)
    }
}

fn is_z_matrix(sys: &TridiagonalSystem) -> bool {
    sys.diag.iter().all(|&d| d > 0.0)
        && sys.sub.iter().all(|&s| s <= 0.0)
        && sys.sup.iter().all(|&s| s <= 0.0)
}

/// Diagnostics for one assembled system and its history coefficient.
pub fn stability_diagnostics(sys: &TridiagonalSystem, history_coefficient: f64) -> StabilityRow {
    stability_row(0, sys, history_coefficient)
}

pub(crate) fn stability_row(step: usize, sys: &TridiagonalSystem, history_coefficient: f64) -> StabilityRow {
    let gap = sys.dominance_gap();
    let dominant = gap > 0.0;
    let inverse_norm_bound = if dominant { 1.0 / gap } else { f64::INFINITY };
    let amplification = history_coefficient.abs() * inverse_norm_bound;
    // The gap is a difference of row entries and carries their rounding; at
    // j = 0 with w ≡ 1 the ratio is exactly 1 and must not be flagged.
    // Row absolute sum |k_ii| + Σ|k_il| = 2|k_ii| − gap_i.
    let row_size = (0..sys.len())
        .map(|i| 2.0 * sys.diag[i].abs() - sys.row_gap(i))
        .fold(0.0, f64::max);
    let slack = 4.0 * f64::EPSILON * row_size * inverse_norm_bound;

    let inverse_norm = if dominant && is_z_matrix(sys) {
        let ones = TridiagonalSystem {
            rhs: vec![1.0; sys.len()],
            ..sys.clone()
        };
        thomas_solve(&ones)
            .ok()
            .map(|v| v.into_iter().fold(0.0, f64::max))
    } else {
        None
    };

    StabilityRow {
        step,
        gap,
        inverse_norm_bound,
        history_coefficient,
        amplification,
        within_bound: dominant && amplification <= 1.0 + slack,
        dominant,
        inverse_norm,
        amplification_exact: inverse_norm.map(|n| n * history_coefficient.abs()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_matrix() {
        let sys = TridiagonalSystem::constant(5, 0.0, 1.0, 0.0, vec![0.0; 5]).unwrap();
        let row = stability_diagnostics(&sys, 0.5);
        assert_eq!(row.gap, 1.0);
        assert_eq!(row.inverse_norm_bound, 1.0);
        assert_eq!(row.amplification, 0.5);
        assert!(row.within_bound && row.dominant);
        assert_eq!(row.inverse_norm, Some(1.0));
    }

    #[test]
    fn rounding_in_gap_is_tolerated_but_real_excess_is_not() {
        let mu = 1e8;
        let sys = TridiagonalSystem::constant(5, -mu, 3.0 + 2.0 * mu, -mu, vec![0.0; 5]).unwrap();
        let gap = sys.dominance_gap();
        assert!(stability_diagnostics(&sys, gap).within_bound);
        assert!(!stability_diagnostics(&sys, 1.01 * gap).within_bound);
    }

    #[test]
    fn laplacian_is_flagged_non_dominant() {
        let sys = TridiagonalSystem::constant(4, -1.0, 2.0, -1.0, vec![0.0; 4]).unwrap();
        let row = stability_diagnostics(&sys, 0.1);
        assert_eq!(row.gap, 0.0);
        assert!(!row.dominant);
        assert!(!row.within_bound);
        assert!(row.inverse_norm_bound.is_infinite());
        assert_eq!(row.inverse_norm, None);
    }

    #[test]
    fn exact_norm_never_exceeds_bound() {
        let sys = TridiagonalSystem::constant(30, -50.0, 103.0, -50.0, vec![0.0; 30]).unwrap();
        let row = stability_diagnostics(&sys, 2.0);
        let exact = row.inverse_norm.unwrap();
        assert!(exact <= row.inverse_norm_bound + 1e-15);
        assert!(row.amplification_exact.unwrap() <= row.amplification);
    }
}
