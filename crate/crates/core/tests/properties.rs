use gfde_core::analysis::{convergence_order, operator_test, run_operator_study};
use gfde_core::funcs::{gamma_fn, ScaleFamily, WeightFamily};
use gfde_core::gfd::{first_coeffs, gfd_apply, pq_increments, quad_coeffs, step_coefficients, TimeGrid};
use gfde_core::solver::{march, thomas_solve, GfdeProblem, TridiagonalSystem};
use proptest::prelude::*;

fn scale() -> impl Strategy<Value = ScaleFamily> {
    prop_oneof![
        Just(ScaleFamily::Identity),
        (1.0..3.0f64).prop_map(|p| ScaleFamily::Power { p }),
        (0.0..1.0f64, 0.2..3.0f64).prop_map(|(a, b)| ScaleFamily::Linear { a, b }),
        (0.2..2.0f64, 0.0..1.0f64).prop_map(|(c, offset)| ScaleFamily::Exp { c, offset }),
    ]
}

fn increasing_weight() -> impl Strategy<Value = WeightFamily> {
    prop_oneof![
        Just(WeightFamily::One),
        (0.0..2.0f64).prop_map(|c| WeightFamily::Exp { c }),
        (0.0..2.0f64).prop_map(|p| WeightFamily::Power { p }),
    ]
}

/// (alpha, grid, j, k) with 1 <= k <= j <= M - 1.
fn draw(max_steps: usize) -> impl Strategy<Value = (f64, TimeGrid, usize, usize)> {
    (
        0.05..0.95f64,
        2..=max_steps,
        0.5..2.0f64,
        scale(),
        increasing_weight(),
    )
        .prop_flat_map(|(alpha, m, horizon, z, w)| {
            let grid = TimeGrid::new(z, w, horizon, m).unwrap();
            (Just(alpha), Just(grid), 1..m)
        })
        .prop_flat_map(|(alpha, grid, j)| (Just(alpha), Just(grid), Just(j), 1..=j))
}

#[allow(clippy::needless_range_loop)]
fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))
            .unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x
}

fn dominant_system() -> impl Strategy<Value = TridiagonalSystem> {
    (1usize..50).prop_flat_map(|n| {
        (
            prop::collection::vec(-1.0..1.0f64, n - 1),
            prop::collection::vec(-1.0..1.0f64, n - 1),
            prop::collection::vec((0.01..2.0f64, any::<bool>()), n),
            prop::collection::vec(-5.0..5.0f64, n),
        )
            .prop_map(move |(sub, sup, extra, rhs)| {
                let diag = (0..n)
                    .map(|i| {
                        let off = if i > 0 { sub[i - 1].abs() } else { 0.0 }
                            + if i + 1 < n { sup[i].abs() } else { 0.0 };
                        let (e, neg) = extra[i];
                        if neg {
                            -(off + e)
                        } else {
                            off + e
                        }
                    })
                    .collect();
                TridiagonalSystem::new(sub, diag, sup, rhs).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn coefficients_positive_and_ordered((alpha, grid, j, k) in draw(60)) {
        let q = quad_coeffs(&grid, j, k, alpha).unwrap();
        prop_assert!(q.big_c > q.big_b && q.big_b > q.big_a && q.big_a > 0.0);
        prop_assert!(q.a > 0.0 && q.b > 0.0 && q.c > 0.0);
        let (p_first, q_first) = first_coeffs(&grid, j, alpha).unwrap();
        prop_assert!(p_first > 0.0 && q_first > 0.0);
        let w = grid.w_nodes();
        prop_assert!(((p_first / q_first) - w[1] / w[0]).abs() <= 1e-14 * (w[1] / w[0]));
    }

    #[test]
    fn differences_of_brackets((alpha, grid, j, k) in draw(40)) {
        let q = quad_coeffs(&grid, j, k, alpha).unwrap();
        let (p, pq) = pq_increments(&grid, j, k, alpha).unwrap();
        let z = grid.z_nodes();
        let scale = (2.0 - alpha) * (2.0 * z[j + 1] - z[k - 1] - z[k]) * p + 2.0 * (1.0 - alpha) * pq;
        let ba = (2.0 - alpha) * (z[k] - z[k - 1]) * p;
        let cb = (2.0 - alpha) * (z[k + 1] - z[k]) * p;
        prop_assert!(((q.big_b - q.big_a) - ba).abs() <= 1e-13 * scale);
        prop_assert!(((q.big_c - q.big_b) - cb).abs() <= 1e-13 * scale);
    }

    #[test]
    fn exact_on_weighted_data_linear_in_scale(
        (alpha, grid, j, _k) in draw(60),
        c0 in -2.0..2.0f64,
        c1 in 0.5..3.0f64,
    ) {
        let (z, w) = (grid.z_nodes(), grid.w_nodes());
        let series: Vec<f64> = (0..=j + 1).map(|i| (c0 + c1 * z[i]) / w[i]).collect();
        let got = gfd_apply(&series, &grid, j, alpha).unwrap();
        let want = c1 * (z[j + 1] - z[0]).powf(1.0 - alpha) / (w[j + 1] * gamma_fn(2.0 - alpha).unwrap());
        let weights = step_coefficients(&grid, j, alpha).unwrap().level_weights();
        let size: f64 = weights.iter().zip(&series).map(|(c, u)| (c * u).abs()).sum();
        prop_assert!((got - want).abs() <= 1e-11 * size.max(want.abs()), "{got} vs {want}");
    }

    #[test]
    fn operator_is_linear(
        (alpha, grid, j, _k) in draw(30),
        a in -3.0..3.0f64,
        b in -3.0..3.0f64,
        seed in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 31),
    ) {
        let u: Vec<f64> = seed.iter().take(j + 2).map(|s| s.0).collect();
        let v: Vec<f64> = seed.iter().take(j + 2).map(|s| s.1).collect();
        let mix: Vec<f64> = u.iter().zip(&v).map(|(x, y)| a * x + b * y).collect();
        let lhs = gfd_apply(&mix, &grid, j, alpha).unwrap();
        let rhs = a * gfd_apply(&u, &grid, j, alpha).unwrap() + b * gfd_apply(&v, &grid, j, alpha).unwrap();
        let weights = step_coefficients(&grid, j, alpha).unwrap().level_weights();
        let size: f64 = weights.iter().map(|c| c.abs()).sum::<f64>() * (a.abs() + b.abs());
        prop_assert!((lhs - rhs).abs() <= 1e-13 * size.max(1.0));
    }

    #[test]
    fn thomas_matches_dense_elimination(sys in dominant_system()) {
        let n = sys.len();
        let mut dense = vec![vec![0.0; n]; n];
        for i in 0..n {
            dense[i][i] = sys.diag[i];
            if i > 0 {
                dense[i][i - 1] = sys.sub[i - 1];
            }
            if i + 1 < n {
                dense[i][i + 1] = sys.sup[i];
            }
        }
        let want = dense_solve(dense, sys.rhs.clone());
        let got = thomas_solve(&sys).unwrap();
        let scale = want.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for (g, w) in got.iter().zip(&want) {
            prop_assert!((g - w).abs() <= 1e-10 * scale);
        }
        prop_assert!(sys.dominance_gap() > 0.0);
    }

    #[test]
    fn orders_recover_power_laws(c in 1e-8..1.0f64, order in 0.5..4.0f64) {
        let fine = c / 2f64.powf(order);
        prop_assert!((convergence_order(c, fine).unwrap() - order).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn null_problem_stays_zero(alpha in 0.01..0.99f64, m in 1usize..30, n in 2usize..30) {
        let (field, _) = march(&GfdeProblem::null(alpha), m, n, false).unwrap();
        prop_assert!(field.rows().all(|row| row.iter().all(|&v| v == 0.0)));
    }
}

#[test]
fn operator_slope_approaches_three_minus_alpha() {
    for (alpha, z) in [
        (0.2, ScaleFamily::Power { p: 2.0 }),
        (0.5, ScaleFamily::Power { p: 2.0 }),
        (0.7, ScaleFamily::Identity),
    ] {
        let test = operator_test(
            |t: f64| t - t * t * t,
            |t: f64| 1.0 - 3.0 * t * t,
            z,
            WeightFamily::One,
            alpha,
            0.6,
        );
        let report = run_operator_study("slope", &test, 10, 6).unwrap();
        let maes = report.maes();
        let slope = (maes[0] / maes[5]).log2() / 5.0;
        let last = report.rows[5].co.unwrap();
        assert!(
            (last - (3.0 - alpha)).abs() <= 0.15,
            "alpha {alpha}: finest CO {last}, mean slope {slope}"
        );
    }
}
