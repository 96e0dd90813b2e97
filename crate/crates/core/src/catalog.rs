//! Built-in benchmark problems with closed-form solutions, and the two
//! pointwise operator tests.

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::analysis::{operator_test, OperatorTest};
use crate::error::{Error, Result};
use crate::funcs::{gamma_fn, lower_incomplete_gamma, ScaleFamily, WeightFamily};
use crate::gfd::{gfd_reference, Differentiable};
use crate::solver::{ExactSolution, GfdeProblem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseId {
    Ex1,
    Ex2,
    Ex3,
    Ex4,
    Ex5,
    Op1,
    Op2,
    /// All data zero; the solution is identically zero.
    Null,
}

impl CaseId {
    pub const ALL: [CaseId; 8] = [
        CaseId::Ex1,
        CaseId::Ex2,
        CaseId::Ex3,
        CaseId::Ex4,
        CaseId::Ex5,
        CaseId::Op1,
        CaseId::Op2,
        CaseId::Null,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseId::Ex1 => "ex1",
            CaseId::Ex2 => "ex2",
            CaseId::Ex3 => "ex3",
            CaseId::Ex4 => "ex4",
            CaseId::Ex5 => "ex5",
            CaseId::Op1 => "op1",
            CaseId::Op2 => "op2",
            CaseId::Null => "null",
        }
    }

    pub fn default_alpha(self) -> f64 {
        match self {
            CaseId::Ex1 => 0.85,
            CaseId::Ex2 => 0.8,
            CaseId::Ex3 => 0.4,
            CaseId::Ex4 => 0.6,
            CaseId::Ex5 => 0.15,
            CaseId::Op1 => 0.5,
            CaseId::Op2 => 0.2,
            CaseId::Null => 0.5,
        }
    }

    pub fn is_operator(self) -> bool {
        matches!(self, CaseId::Op1 | CaseId::Op2)
    }

    pub fn summary(self) -> &'static str {
        match self {
            CaseId::Ex1 => "u = x(x-1)t^2 + sin(pi x), z = t, w = 1",
            CaseId::Ex2 => "u = x(x-1)t^2, z = t, w = 1",
            CaseId::Ex3 => "u = t^2 sin(pi x), z = t, w = 1",
            CaseId::Ex4 => "u = sin(pi x) e^-t, z = t, w = e^2t",
            CaseId::Ex5 => "u = e^x t^(4+alpha), z = t, w = 1",
            CaseId::Op1 | CaseId::Op2 => "operator test g = t - t^3 at t = 0.6, z = t^2, w = 1",
            CaseId::Null => "zero data, u = 0, z = t, w = 1",
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        CaseId::ALL
            .into_iter()
            .find(|id| id.as_str() == lower)
            .ok_or_else(|| Error::UnknownCase(s.to_string()))
    }
}

#[derive(Debug, Clone)]
pub enum Case {
    Pde(GfdeProblem),
    Operator(OperatorTest),
}

impl Case {
    pub fn into_problem(self) -> Result<GfdeProblem> {
        match self {
            Case::Pde(p) => Ok(p),
            Case::Operator(_) => Err(Error::InvalidParameter(
                "case is an operator test, not a PDE".into(),
            )),
        }
    }

    pub fn into_operator(self) -> Result<OperatorTest> {
        match self {
            Case::Operator(t) => Ok(t),
            Case::Pde(_) => Err(Error::InvalidParameter(
                "case is a PDE, not an operator test".into(),
            )),
        }
    }
}

/// Which Ex4 forcing to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Ex4Forcing {
    /// sin(πx) e^{−t} [γ(1−α, t)/Γ(1−α) + π²], consistent with the exact solution.
    #[default]
    Consistent,
    /// The variant with (Γ(1−α) − γ(1−α, t))/Γ(1−α) in place of γ/Γ.
    Printed,
}

pub fn get_case(id: CaseId, alpha: f64) -> Result<Case> {
    get_case_with(id, alpha, Ex4Forcing::Consistent)
}

pub fn get_case_with(id: CaseId, alpha: f64, ex4: Ex4Forcing) -> Result<Case> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie in (0,1), got {alpha}"
        )));
    }
    let case = match id {
        CaseId::Ex1 => Case::Pde(ex1(alpha)?),
        CaseId::Ex2 => Case::Pde(ex2(alpha)?),
        CaseId::Ex3 => Case::Pde(ex3(alpha)?),
        CaseId::Ex4 => Case::Pde(ex4_problem(alpha, ex4)?),
        CaseId::Ex5 => Case::Pde(ex5(alpha)?),
        CaseId::Op1 | CaseId::Op2 => Case::Operator(operator_test(
            |t: f64| t - t * t * t,
            |t: f64| 1.0 - 3.0 * t * t,
            ScaleFamily::Power { p: 2.0 },
            WeightFamily::One,
            alpha,
            0.6,
        )),
        CaseId::Null => Case::Pde(GfdeProblem::null(alpha)),
    };
    Ok(case)
}

/// Problem on [0, 1] × (0, 1] with φ read off the exact solution and zero
/// boundary values.
fn unit_problem(alpha: f64, exact: ExactSolution) -> GfdeProblem {
    let mut p = GfdeProblem::null(alpha);
    let u0 = exact.u.clone();
    p.initial = Arc::new(move |x| u0(x, 0.0));
    p.exact = Some(exact);
    p
}

fn ex1(alpha: f64) -> Result<GfdeProblem> {
    let g3 = gamma_fn(3.0 - alpha)?;
    let exact = ExactSolution::new(
        |x, t| x * (x - 1.0) * t * t + (PI * x).sin(),
        |x, t| 2.0 * x * (x - 1.0) * t,
        |x, t| 2.0 * t * t - PI * PI * (PI * x).sin(),
    );
    let mut p = unit_problem(alpha, exact);
    p.forcing = Arc::new(move |x, t| {
        2.0 * x * (x - 1.0) * t.powf(2.0 - alpha) / g3 - 2.0 * t * t + PI * PI * (PI * x).sin()
    });
    Ok(p)
}

fn ex2(alpha: f64) -> Result<GfdeProblem> {
    let g3 = gamma_fn(3.0 - alpha)?;
    let exact = ExactSolution::new(
        |x, t| x * (x - 1.0) * t * t,
        |x, t| 2.0 * x * (x - 1.0) * t,
        |_, t| 2.0 * t * t,
    );
    let mut p = unit_problem(alpha, exact);
    p.forcing = Arc::new(move |x, t| 2.0 * x * (x - 1.0) * t.powf(2.0 - alpha) / g3 - 2.0 * t * t);
    Ok(p)
}

fn ex3(alpha: f64) -> Result<GfdeProblem> {
    let g3 = gamma_fn(3.0 - alpha)?;
    let exact = ExactSolution::new(
        |x, t| t * t * (PI * x).sin(),
        |x, t| 2.0 * t * (PI * x).sin(),
        |x, t| -PI * PI * t * t * (PI * x).sin(),
    );
    let mut p = unit_problem(alpha, exact);
    p.forcing = Arc::new(move |x, t| (2.0 * t.powf(2.0 - alpha) / g3 + PI * PI * t * t) * (PI * x).sin());
    Ok(p)
}

fn ex4_problem(alpha: f64, forcing: Ex4Forcing) -> Result<GfdeProblem> {
    let g1 = gamma_fn(1.0 - alpha)?;
    let exact = ExactSolution::new(
        |x, t| (PI * x).sin() * (-t).exp(),
        |x, t| -(PI * x).sin() * (-t).exp(),
        |x, t| -PI * PI * (PI * x).sin() * (-t).exp(),
    );
    let mut p = unit_problem(alpha, exact);
    p.weight = WeightFamily::Exp { c: 2.0 };
    p.forcing = Arc::new(move |x, t| {
        let lower = lower_incomplete_gamma(1.0 - alpha, t).unwrap_or(f64::NAN);
        let ratio = match forcing {
            Ex4Forcing::Consistent => lower / g1,
            Ex4Forcing::Printed => (g1 - lower) / g1,
        };
        (PI * x).sin() * (-t).exp() * (ratio + PI * PI)
    });
    Ok(p)
}

fn ex5(alpha: f64) -> Result<GfdeProblem> {
    let g5 = gamma_fn(5.0 + alpha)?;
    let exact = ExactSolution::new(
        move |x, t| x.exp() * t.powf(4.0 + alpha),
        move |x, t| (4.0 + alpha) * x.exp() * t.powf(3.0 + alpha),
        move |x, t| x.exp() * t.powf(4.0 + alpha),
    );
    let mut p = unit_problem(alpha, exact);
    p.left = Arc::new(move |t| t.powf(4.0 + alpha));
    p.right = Arc::new(move |t| E * t.powf(4.0 + alpha));
    p.forcing = Arc::new(move |x, t| x.exp() * t.powi(4) * (g5 / 24.0 - t.powf(alpha)));
    Ok(p)
}

/// Largest |GFD(u) − δ u_xx − f| over a probe lattice, with the GFD of the
/// exact solution taken from the quadrature reference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConsistencyReport {
    pub max_residual: f64,
    /// (x, t) where the maximum occurs.
    pub worst_at: (f64, f64),
    pub probes: usize,
    pub tol: f64,
}

impl ConsistencyReport {
    pub fn consistent(&self) -> bool {
        self.max_residual <= self.tol
    }
}

/// Probe lattice: 9 interior x positions times 10 times in (0, T].
pub fn verify_case_consistency(problem: &GfdeProblem, tol: f64) -> Result<ConsistencyReport> {
    let exact = problem.exact.as_ref().ok_or(Error::MissingExact)?;
    let (a, b) = problem.domain;
    let mut report = ConsistencyReport {
        max_residual: 0.0,
        worst_at: (a, 0.0),
        probes: 0,
        tol,
    };
    for ix in 1..10 {
        let x = a + (b - a) * ix as f64 / 10.0;
        let u = Differentiable::new(|t| (exact.u)(x, t), |t| (exact.u_t)(x, t));
        for it in 1..=10 {
            let t = problem.horizon * it as f64 / 10.0;
            let gfd = gfd_reference(&u, &problem.scale, &problem.weight, problem.alpha, t, 1e-12)?;
            let residual = (gfd - problem.delta * (exact.u_xx)(x, t) - (problem.forcing)(x, t)).abs();
            report.probes += 1;
            if !(residual <= report.max_residual) {
                report.max_residual = residual;
                report.worst_at = (x, t);
            }
        }
    }
    Ok(report)
}
