use cube_sobolev::ball::{ball_lambda_star, ball_minimizer, fk_rhs};
use cube_sobolev::cube::CubeFunction;
use cube_sobolev::special::{entropy_h, LN_2};
use cube_sobolev::spectral::{lambda_star, lambda_star_value, Method, SolverConfig};
use cube_sobolev::subset::SubsetSpec;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_mask(rng: &mut ChaCha8Rng, n: usize) -> SubsetSpec {
    let size = 1u32 << n;
    let density = rng.random_range(0.05..0.95);
    let mut vertices: Vec<u32> = (0..size).filter(|_| rng.random::<f64>() < density).collect();
    if vertices.is_empty() {
        vertices.push(rng.random_range(0..size));
    }
    SubsetSpec::mask(n, vertices).unwrap()
}

/// `lambda*` from the variation functional itself: polarize `D^2` on the
/// indicator basis of `A` and take the smallest eigenvalue relative to
/// `E f^2 = |f|^2 / 2^n`.
fn lambda_star_by_polarization(spec: &SubsetSpec) -> f64 {
    let n = spec.n();
    let vertices = spec.vertices().unwrap();
    let m = vertices.len();
    let d2_of = |pairs: &[(u32, f64)]| {
        let mut values = vec![0.0; 1 << n];
        for &(v, x) in pairs {
            values[v as usize] += x;
        }
        CubeFunction::new(n, values).unwrap().d2()
    };
    let diag: Vec<f64> = vertices.iter().map(|&v| d2_of(&[(v, 1.0)])).collect();
    let mut q = DMatrix::zeros(m, m);
    for i in 0..m {
        q[(i, i)] = diag[i];
        for j in 0..i {
            let both = d2_of(&[(vertices[i], 1.0), (vertices[j], 1.0)]);
            let off = 0.5 * (both - diag[i] - diag[j]);
            q[(i, j)] = off;
            q[(j, i)] = off;
        }
    }
    let scale = (1u64 << n) as f64;
    SymmetricEigen::new(q * scale)
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn adjacency_shortcut_matches_quadratic_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..50 {
        let n = rng.random_range(1..=6);
        let spec = random_mask(&mut rng, n);
        let direct = lambda_star_by_polarization(&spec);
        let fast = lambda_star_value(&spec).unwrap();
        assert!((direct - fast).abs() <= 1e-10, "{spec:?}: {direct} vs {fast}");
    }
}

#[test]
fn indicator_variation_is_edge_boundary() {
    for n in 1..=4 {
        let size = 1usize << n;
        for bits in 1u64..(1 << size) {
            let vertices: Vec<u32> = (0..size as u32).filter(|v| bits >> v & 1 == 1).collect();
            let f = CubeFunction::indicator(n, &vertices).unwrap();
            let spec = SubsetSpec::mask(n, vertices).unwrap();
            assert!((f.d2() - spec.edge_boundary().unwrap()).abs() < 1e-12);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..40 {
        let n = rng.random_range(5..=10);
        let spec = random_mask(&mut rng, n);
        let f = CubeFunction::indicator(n, &spec.vertices().unwrap()).unwrap();
        assert!((f.d2() - spec.edge_boundary().unwrap()).abs() < 1e-10);
    }
    for (n, r) in [(7, 3), (9, 2)] {
        let spec = SubsetSpec::ball(n, r).unwrap();
        let f = CubeFunction::indicator(n, &spec.vertices().unwrap()).unwrap();
        assert!((f.d2() - spec.edge_boundary().unwrap()).abs() < 1e-12);
    }
}

#[test]
fn larger_support_lowers_the_tone() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..40 {
        let n = rng.random_range(2..=6);
        let big = random_mask(&mut rng, n);
        let mut small: Vec<u32> = big
            .vertices()
            .unwrap()
            .into_iter()
            .filter(|_| rng.random::<f64>() < 0.6)
            .collect();
        if small.is_empty() {
            small.push(big.vertices().unwrap()[0]);
        }
        let small = SubsetSpec::mask(n, small).unwrap();
        assert!(lambda_star_value(&small).unwrap() >= lambda_star_value(&big).unwrap() - 1e-10);
    }
}

#[test]
fn tone_is_translation_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let n = rng.random_range(2..=7);
        let spec = random_mask(&mut rng, n);
        let shift = rng.random_range(0..1u32 << n);
        let moved = spec.translated(shift).unwrap();
        let (a, b) = (lambda_star_value(&spec).unwrap(), lambda_star_value(&moved).unwrap());
        assert!((a - b).abs() < 1e-10);
        let f = CubeFunction::indicator(n, &spec.vertices().unwrap()).unwrap();
        let g = CubeFunction::indicator(n, &moved.vertices().unwrap()).unwrap();
        assert!((f.d2() - g.d2()).abs() < 1e-12);
    }
}

#[test]
fn dense_and_iterative_agree_up_to_1024() {
    let iterative = SolverConfig {
        dense_threshold: 0,
        minimizer: false,
        ..SolverConfig::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut specs = vec![
        SubsetSpec::ball(10, 4).unwrap(),
        SubsetSpec::subcube(10, 0).unwrap(),
        SubsetSpec::subcube(9, 2).unwrap(),
    ];
    specs.extend((0..6).map(|_| random_mask(&mut rng, 10)));
    for spec in specs {
        let dense = lambda_star_value(&spec).unwrap();
        let it = lambda_star(&spec, &iterative).unwrap();
        assert_eq!(it.method, Method::Iterative);
        assert!((dense - it.lambda_star).abs() <= 1e-8, "{spec:?}");
        assert!(it.residual.unwrap() <= 1e-10);
    }
}

#[test]
fn minimizer_certificate() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut specs: Vec<SubsetSpec> = (0..10)
        .map(|_| {
            let n = rng.random_range(2..=8);
            random_mask(&mut rng, n)
        })
        .collect();
    specs.push(SubsetSpec::ball(13, 5).unwrap()); // iterative path
    for spec in specs {
        let n = spec.n();
        let res = lambda_star(&spec, &SolverConfig::default()).unwrap();
        let g = res.minimizer.unwrap();
        assert!((g.d2() / g.mean_sq() - res.lambda_star).abs() <= 1e-8 * n as f64);
        for (v, &x) in g.values().iter().enumerate() {
            if x != 0.0 {
                assert!(spec.contains(v as u64));
            }
        }
        let share = spec.cardinality().unwrap() as f64 / (1u64 << n) as f64;
        assert!((g.mean_sq() - share).abs() < 1e-10);
        assert!((res.frac_boundary - share * res.lambda_star).abs() < 1e-12);
        assert!(res.frac_boundary <= spec.edge_boundary().unwrap() + 1e-9);
    }
}

#[test]
fn radial_matches_iterative_above_dense_threshold() {
    let spec = SubsetSpec::ball(14, 5).unwrap();
    assert!(spec.cardinality().unwrap() > 2048);
    let full = lambda_star(&spec, &SolverConfig::default()).unwrap();
    assert_eq!(full.method, Method::Iterative);
    assert!((full.lambda_star - ball_lambda_star(14, 5).unwrap()).abs() < 1e-8);
}

#[test]
fn ball_tone_is_nonincreasing_in_radius() {
    for n in [5, 30, 400] {
        let tones: Vec<f64> = (0..=n).map(|r| ball_lambda_star(n, r).unwrap()).collect();
        assert!(tones.windows(2).all(|w| w[1] <= w[0] + 1e-9 * n as f64), "n = {n}");
    }
}

#[test]
fn faber_krahn_sandwich_for_balls() {
    for n in [20, 100, 500] {
        for r in (0..=n).step_by((n / 10).max(1)) {
            let log_card = SubsetSpec::ball(n, r).unwrap().log_cardinality();
            let lower = fk_rhs(n, log_card).unwrap();
            assert!(ball_lambda_star(n, r).unwrap() >= lower - 1e-9 * n as f64, "n={n} r={r}");
        }
    }
}

#[test]
fn large_ball_cardinality_tracks_entropy() {
    let n = 2000.0;
    let per_n = SubsetSpec::ball(2000, 220).unwrap().log_cardinality() / n;
    let h = entropy_h(0.11).unwrap();
    assert!(per_n < h);
    assert!(h - per_n < 2.0 * f64::ln(n) / n);
    let huge = SubsetSpec::ball(1_000_000, 1_000_000).unwrap().log_cardinality();
    assert!((huge - 1e6 * LN_2).abs() < 1e-6);
}

#[test]
fn radial_minimizer_certificate_at_n_20() {
    let f = ball_minimizer(20, 4).unwrap().to_cube_function().unwrap();
    let lambda = ball_lambda_star(20, 4).unwrap();
    assert!((f.mean_sq() - 1.0).abs() < 1e-12);
    assert!((f.d2() - lambda).abs() < 1e-8);
}
