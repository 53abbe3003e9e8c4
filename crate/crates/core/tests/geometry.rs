use std::f64::consts::PI;

use clustervol::braid::parse_braid_opts;
use clustervol::dilog::bloch_wigner;
use clustervol::geometry::{build_octahedron, complex_volume, complex_volume_with, crossing_dilog, reduce_cs, Label};
use clustervol::rop::{apply_r_closed, central_edge};
use clustervol::{parse_braid, run_pattern, Error};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_window(rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    (0..7).map(|_| Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(-PI..PI))).collect()
}

/// Shape moduli of the four tetrahedra (N, S, W, E), written out from the
/// crossing picture: X is the incoming window, T the outgoing one.
fn moduli(x: &[Complex64], t: &[Complex64], eps: i8) -> [(Label, f64, Complex64); 4] {
    let x = |k: usize| x[k - 1];
    let t = |k: usize| t[k - 1];
    if eps > 0 {
        let d = x(3) * x(5);
        [
            (Label::N, -1.0, -x(2) * x(6) / d),
            (Label::S, -1.0, -t(3) * t(5) / d),
            (Label::W, 1.0, x(2) * t(3) / d),
            (Label::E, 1.0, t(5) * x(6) / d),
        ]
    } else {
        let d = x(2) * x(6);
        [
            (Label::N, 1.0, -x(3) * x(5) / d),
            (Label::S, 1.0, -t(2) * t(6) / d),
            (Label::W, -1.0, t(2) * x(3) / d),
            (Label::E, -1.0, x(5) * t(6) / d),
        ]
    }
}

#[test]
fn moduli_follow_the_crossing_table() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..50 {
        let x = random_window(&mut rng);
        for eps in [1, -1] {
            let t = apply_r_closed(&x, 1, eps).unwrap();
            let xc = central_edge(&x, 1).unwrap();
            let oct = build_octahedron(&x, &t, &xc, eps).unwrap();
            for (tet, (label, sign, z)) in oct.tetrahedra.iter().zip(moduli(&x, &t, eps)) {
                assert_eq!(tet.label, label);
                assert_eq!(tet.sign as f64, sign);
                assert!((tet.z - z).norm() < 1e-12 * z.norm().max(1.0), "{label:?} ε={eps}");
                // Ptolemy-consistent windows flatten exactly.
                assert!(tet.residual < 1e-9, "{label:?} residual {}", tet.residual);
                assert!((tet.z * tet.z_prime() * tet.z_dprime() + 1.0).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn imaginary_part_is_signed_bloch_wigner_sum_at_the_trefoil_solution() {
    // x = (a, δ, δ, 1, aδ, a²δ, 1) at a = −(1+i)/2 is periodic for every δ.
    let braid = parse_braid("1 1 1").unwrap();
    let a = c(-0.5, -0.5);
    let one = c(1.0, 0.0);
    for d in [1e-2, 1e-3] {
        let x0 = vec![a, one * d, one * d, one, a * d, a * a * d, one];
        let v = complex_volume(&run_pattern(&braid, &x0).unwrap()).unwrap();
        let total: Complex64 = v.crossings.iter().map(crossing_dilog).sum();
        assert_eq!(total, v.total);
        let d_sum: f64 = v.tetrahedra().map(|t| t.sign as f64 * bloch_wigner(t.z).unwrap()).sum();
        assert!((v.total.im - d_sum).abs() < 1e-12);
        // Total is −5π²/6 ≈ −8.22467.
        assert!((v.total.re + 5.0 * PI * PI / 6.0).abs() < 1e-9, "{}", v.total);
        assert!((v.cs - 5.0 * PI * PI / 6.0).abs() < 1e-9);
        assert!((v.cs_reduced + PI * PI / 6.0).abs() < 1e-9);
    }
}

#[test]
fn crossings_are_labelled_in_order() {
    let braid = parse_braid("1 -2 1 -2").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let x0: Vec<Complex64> = (0..10).map(|_| Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(-PI..PI))).collect();
    let v = complex_volume_with(&run_pattern(&braid, &x0).unwrap(), 1.0).unwrap();
    let got: Vec<(usize, usize, i8)> = v.crossings.iter().map(|o| (o.j, o.i, o.eps)).collect();
    assert_eq!(got, vec![(1, 1, 1), (2, 2, -1), (3, 1, 1), (4, 2, -1)]);
    assert_eq!(v.tetrahedra().count(), 16);
}

#[test]
fn vanishing_central_edge_is_reported_per_crossing() {
    // x2 x6 + x3 x5 = 0 ⇒ x_c = 0 at the first crossing.
    let x0: Vec<Complex64> = [1.0, 1.0, 1.0, 1.0, -1.0, 1.0, 1.0].iter().map(|&r| c(r, 0.0)).collect();
    let braid = parse_braid_opts("1", None, false).unwrap();
    let traj = run_pattern(&braid, &x0).unwrap();
    match complex_volume(&traj) {
        Err(Error::Crossing { crossing: 1, source }) => assert!(matches!(*source, Error::DegenerateModulus { .. })),
        other => panic!("{other:?}"),
    }
}

#[test]
fn chern_simons_reduction() {
    let p2 = PI * PI;
    for cs in [-20.0, -p2 / 2.0, -1.0, 0.0, 1.0, p2 / 2.0, 5.0 * p2 / 6.0, 40.0] {
        let r = reduce_cs(cs);
        assert!(r > -p2 / 2.0 - 1e-12 && r <= p2 / 2.0 + 1e-12, "{cs} → {r}");
        let k = (cs - r) / p2;
        assert!((k - k.round()).abs() < 1e-12);
    }
    assert!((reduce_cs(5.0 * p2 / 6.0) + p2 / 6.0).abs() < 1e-12);
}
