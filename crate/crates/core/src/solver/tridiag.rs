use crate::error::{Error, Result};

/// n×n tridiagonal system. `sub[i]` couples row i+1 to column i, `sup[i]`
/// couples row i to column i+1.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSystem {
    pub sub: Vec<f64>,
    pub diag: Vec<f64>,
    pub sup: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl TridiagonalSystem {
    pub fn new(sub: Vec<f64>, diag: Vec<f64>, sup: Vec<f64>, rhs: Vec<f64>) -> Result<Self> {
        let n = diag.len();
        if n == 0 {
            return Err(Error::Length { expected: 1, got: 0 });
        }
        for (len, want) in [(sub.len(), n - 1), (sup.len(), n - 1), (rhs.len(), n)] {
            if len != want {
                return Err(Error::Length {
                    expected: want,
                    got: len,
                });
            }
        }
        Ok(Self { sub, diag, sup, rhs })
    }

    /// Constant-coefficient system with the given diagonals.
    pub fn constant(n: usize, sub: f64, diag: f64, sup: f64, rhs: Vec<f64>) -> Result<Self> {
        let off = n.saturating_sub(1);
        Self::new(vec![sub; off], vec![diag; n], vec![sup; off], rhs)
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Row-wise excess |k_ii| − Σ_{l≠i} |k_il|.
    pub fn row_gap(&self, i: usize) -> f64 {
        let mut off = 0.0;
        if i > 0 {
            off += self.sub[i - 1].abs();
        }
        if i + 1 < self.len() {
            off += self.sup[i].abs();
        }
        self.diag[i].abs() - off
    }

    /// min_i (|k_ii| − Σ_{l≠i} |k_il|); positive iff strictly diagonally dominant.
    pub fn dominance_gap(&self) -> f64 {
        (0..self.len())
            .map(|i| self.row_gap(i))
            .fold(f64::INFINITY, f64::min)
    }

    /// K x
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut v = self.diag[i] * x[i];
                if i > 0 {
                    v += self.sub[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    v += self.sup[i] * x[i + 1];
                }
                v
            })
            .collect()
    }
}

/// Thomas elimination without pivoting; stable for diagonally dominant systems.
pub fn thomas_solve(sys: &TridiagonalSystem) -> Result<Vec<f64>> {
    let n = sys.len();
    let mut c_prime = vec![0.0; n];
    let mut x = vec![0.0; n];

    let mut pivot = sys.diag[0];
    if pivot == 0.0 || !pivot.is_finite() {
        return Err(Error::ZeroPivot { row: 0 });
    }
    if n > 1 {
        c_prime[0] = sys.sup[0] / pivot;
    }
    x[0] = sys.rhs[0] / pivot;
    for i in 1..n {
        pivot = sys.diag[i] - sys.sub[i - 1] * c_prime[i - 1];
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(Error::ZeroPivot { row: i });
        }
        if i + 1 < n {
            c_prime[i] = sys.sup[i] / pivot;
        }
        x[i] = (sys.rhs[i] - sys.sub[i - 1] * x[i - 1]) / pivot;
    }
    for i in (0..n.saturating_sub(1)).rev() {
        x[i] -= c_prime[i] * x[i + 1];
    }
    Ok(x)
}
