use super::*;
use crate::discretize::{assemble, mesh_convex_2d, mesh_interval, mesh_interval_h, Mesh};
use crate::geometry::ConvexDomain;
use crate::hermite::hermite_eval;
use rand::{Rng, SeedableRng};

/// Neumann (`odd = true`, first odd mode) or Dirichlet (first even mode)
/// eigenvalue of `u'' − t u' + μ u = 0` on `(−a, a)` from the power series
/// `(n+2)(n+1) c_{n+2} = (n − μ) c_n`, located by bisection.
fn series_eigenvalue(a: f64, odd: bool) -> f64 {
    let boundary = |mu: f64| {
        let mut c = if odd { [0.0, 1.0] } else { [1.0, 0.0] };
        let (mut value, mut slope) = (0.0, 0.0);
        let mut coeffs = vec![c[0], c[1]];
        for n in 0..400 {
            let next = (n as f64 - mu) * coeffs[n] / ((n + 2) as f64 * (n + 1) as f64);
            coeffs.push(next);
        }
        for (n, &cn) in coeffs.iter().enumerate() {
            value += cn * a.powi(n as i32);
            if n > 0 {
                slope += n as f64 * cn * a.powi(n as i32 - 1);
            }
        }
        c[0] = value;
        if odd { slope } else { c[0] }
    };
    let (mut lo, mut hi) = (if odd { 1.0 } else { 0.0 } + 1e-9, 60.0);
    // walk up to the first sign change
    let mut step = lo;
    let mut prev = boundary(step);
    while step < hi {
        let next = step + 0.01;
        let v = boundary(next);
        if v.signum() != prev.signum() {
            lo = step;
            hi = next;
            break;
        }
        step = next;
        prev = v;
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if boundary(mid).signum() == boundary(lo).signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn system_1d(a: f64, b: f64, n: usize) -> (Mesh, AssembledSystem) {
    let mesh = mesh_interval(a, b, n).unwrap();
    let sys = assemble(&mesh).unwrap();
    (mesh, sys)
}

#[test]
fn series_oracle_matches_the_identity() {
    // derivative of the Neumann mode is the Dirichlet mode with eigenvalue one lower
    for a in [0.5, 1.0, 2.0] {
        let mu = series_eigenvalue(a, true);
        let lambda = series_eigenvalue(a, false);
        assert!((mu - lambda - 1.0).abs() < 1e-9, "a={a}: {mu} {lambda}");
    }
}

#[test]
fn truncated_real_line_mu1_is_one() {
    let (_, sys) = system_1d(-6.0, 6.0, 600);
    let r = solve_neumann_mu1(&sys, 3).unwrap();
    assert!(r.deflated_constant);
    assert!((r.eigenvalues[0] - 1.0).abs() < 1e-3, "{:?}", r.eigenvalues);
    assert!((r.eigenvalues[1] - 2.0).abs() < 3e-3);
    assert!(r.max_residual() < 1e-8);
}

#[test]
fn interval_matches_series_oracle() {
    let (mesh, sys) = system_1d(-1.0, 1.0, 400);
    let mu = solve_neumann_mu1(&sys, 1).unwrap().eigenvalues[0];
    let lambda = solve_dirichlet_lambda1(&sys, &mesh.boundary_vertices(), 1).unwrap().eigenvalues[0];
    let exact = series_eigenvalue(1.0, true);
    assert!((mu - exact).abs() < 1e-4 * exact, "{mu} vs {exact}");
    assert!(mu > exact, "conforming P1 approximates from above");
    assert!((mu - lambda - 1.0).abs() < 1e-3);
    assert!(lambda > 0.0);
}

#[test]
fn wide_dirichlet_interval_tends_to_zero() {
    let (mesh, sys) = system_1d(-6.0, 6.0, 600);
    let lambda = solve_dirichlet_lambda1(&sys, &mesh.boundary_vertices(), 1).unwrap().eigenvalues[0];
    assert!(lambda > 0.0 && lambda < 1e-3, "{lambda}");
}

#[test]
fn eigenvectors_are_m_orthonormal_and_mean_zero() {
    let mesh = mesh_convex_2d(&ConvexDomain::disk([0.2, 0.1], 1.0), 0.1).unwrap();
    let sys = assemble(&mesh).unwrap();
    for method in [Method::Dense, Method::Iterative] {
        let r = solve_neumann_mu1_with(&sys, 4, &SolverOptions::with_method(method)).unwrap();
        let ones = vec![1.0; sys.dof_count];
        for (i, v) in r.eigenvectors.iter().enumerate() {
            assert!(sys.mass.bilinear(&ones, v).abs() < 1e-8);
            for (j, w) in r.eigenvectors.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((sys.mass.bilinear(v, w) - expect).abs() < 1e-8, "{method:?} {i} {j}");
            }
        }
        assert!(r.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn iterative_matches_dense() {
    let mesh = mesh_convex_2d(&ConvexDomain::ellipse([0.0, 0.0], 1.5, 1.0), 0.08).unwrap();
    let sys = assemble(&mesh).unwrap();
    let d = solve_neumann_mu1_with(&sys, 3, &SolverOptions::with_method(Method::Dense)).unwrap();
    let it = solve_neumann_mu1_with(&sys, 3, &SolverOptions::with_method(Method::Iterative)).unwrap();
    for (a, b) in d.eigenvalues.iter().zip(&it.eigenvalues) {
        assert!((a - b).abs() <= 1e-9 * a.abs(), "{a} {b}");
    }
    assert!(it.max_residual() <= 1e-8 && d.max_residual() <= 1e-8);
    let bdofs = mesh.boundary_vertices();
    let dd = solve_dirichlet_lambda1_with(&sys, &bdofs, 2, &SolverOptions::with_method(Method::Dense)).unwrap();
    let di = solve_dirichlet_lambda1_with(&sys, &bdofs, 2, &SolverOptions::with_method(Method::Iterative)).unwrap();
    assert!((dd.eigenvalues[0] - di.eigenvalues[0]).abs() <= 1e-9 * dd.eigenvalues[0]);
}

#[test]
fn square_tensorizes() {
    let (_, s1) = system_1d(-1.0, 1.0, 40);
    let mu_1d = solve_neumann_mu1(&s1, 1).unwrap().eigenvalues[0];
    let sys = assemble(&mesh_convex_2d(&ConvexDomain::square(1.0), 0.05).unwrap()).unwrap();
    let r = solve_neumann_mu1(&sys, 2).unwrap();
    // the first eigenvalue is double on the square
    assert!((r.eigenvalues[0] - mu_1d).abs() < 5e-3 * mu_1d, "{:?} {mu_1d}", r.eigenvalues);
    assert!((r.eigenvalues[1] - r.eigenvalues[0]).abs() < 5e-3);
}

#[test]
fn dirichlet_input_errors() {
    let (mesh, sys) = system_1d(-1.0, 1.0, 4);
    assert!(solve_dirichlet_lambda1(&sys, &[], 1).is_err());
    let all: Vec<usize> = (0..mesh.num_vertices()).collect();
    assert!(solve_dirichlet_lambda1(&sys, &all, 1).is_err());
}

#[test]
fn rayleigh_quotient_cases() {
    let mesh = mesh_convex_2d(&ConvexDomain::square(1.0), 0.1).unwrap();
    let sys = assemble(&mesh).unwrap();
    assert!(rayleigh_quotient(&sys, &vec![3.0; sys.dof_count]).is_err());
    assert!(rayleigh_quotient(&sys, &vec![0.0; sys.dof_count]).is_err());
    let mu1 = solve_neumann_mu1(&sys, 1).unwrap().eigenvalues[0];
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let v: Vec<f64> = (0..sys.dof_count).map(|_| rng.random_range(-1.0..1.0)).collect();
        assert!(rayleigh_quotient(&sys, &v).unwrap() >= mu1 - 1e-9);
    }
    let x2 = mesh.interpolate(|x| x[1]);
    assert!(rayleigh_quotient(&sys, &x2).unwrap() >= mu1 - 1e-9);
}

#[test]
fn source_solve_reproduces_hermite_modes() {
    let mesh = mesh_interval_h(-6.0, 6.0, 0.01).unwrap();
    let sys = assemble(&mesh).unwrap();
    let zero = solve_neumann_source(&sys, &vec![2.0; sys.dof_count]).unwrap();
    assert!(zero.u.iter().all(|&v| v == 0.0));
    assert!((zero.c_k - 2.0).abs() < 1e-12);
    for (order, mu) in [(1usize, 1.0), (2, 2.0)] {
        let f = mesh.interpolate(|x| hermite_eval(order, x[0]));
        let s = solve_neumann_source(&sys, &f).unwrap();
        let target: Vec<f64> = f.iter().map(|v| (v - s.c_k) / mu).collect();
        let diff: Vec<f64> = s.u.iter().zip(&target).map(|(a, b)| a - b).collect();
        let err = sys.mass.quad_form(&diff).sqrt() / sys.mass.quad_form(&target).sqrt();
        assert!(err < 1e-3, "order {order}: {err}");
        assert!(sys.integral(&s.u).abs() < 1e-8);
        assert!(s.flux_residual < 1e-8);
    }
}

#[test]
fn disconnected_mesh_is_singular() {
    let mesh = Mesh::new(1, vec![[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [3.0, 0.0], [4.0, 0.0], [5.0, 0.0]], vec![
        vec![0, 1],
        vec![1, 2],
        vec![3, 4],
        vec![4, 5],
    ])
    .unwrap();
    let sys = assemble(&mesh).unwrap();
    let f = mesh.interpolate(|x| x[0]);
    assert!(matches!(solve_neumann_source(&sys, &f), Err(Error::Singular { .. })));
}

#[test]
fn study_with_zero_datum() {
    let t = operator_convergence_study(&ConvexDomain::strip(1.0), &|_| 0.0, &[2, 4], &StudyOptions { h: 0.1, tail_tol: 1e-6 }).unwrap();
    assert!(t.rows.iter().all(|r| r.error == 0.0 && r.c_k == 0.0));
}

#[test]
fn spectral_result_serializes() {
    let r = crate::hermite::spectral_solve_real_line(3).unwrap();
    let json = serde_json::to_string(&r).unwrap();
    let back: SpectralResult = serde_json::from_str(&json).unwrap();
    assert_eq!(r, back);
    assert!((r.mu1().unwrap() - 1.0).abs() < 1e-12);
}
