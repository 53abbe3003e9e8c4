use clustervol::braid::parse_braid_opts;
use clustervol::rop::{central_edge, r_word, Op};
use clustervol::verify::random_point;
use clustervol::{
    apply_r_closed, apply_r_comp, apply_r_y, build_exchange_matrix, parse_braid, residual, run_pattern, y_from_x, ClusterSeed, Error,
};
use num_complex::Complex64;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Q = BigRational;

fn ints(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&k| Q::from_integer(k.into())).collect()
}

#[test]
fn all_ones_by_hand() {
    let ones = ints(&[1; 7]);
    assert_eq!(apply_r_closed(&ones, 1, 1).unwrap(), ints(&[1, 1, 3, 5, 3, 1, 1]));
    assert_eq!(apply_r_closed(&ones, 1, -1).unwrap(), ints(&[1, 3, 1, 5, 1, 3, 1]));
    let s = ClusterSeed::new(ones, build_exchange_matrix(2).unwrap()).unwrap();
    assert_eq!(apply_r_comp(&s, 1, 1).unwrap().x, ints(&[1, 1, 3, 5, 3, 1, 1]));
}

#[test]
fn words_have_seven_letters() {
    for e in [1, -1] {
        let w = r_word(2, e);
        assert_eq!(w.iter().filter(|o| matches!(o, Op::Mu(_))).count(), 4);
        assert_eq!(w.iter().filter(|o| matches!(o, Op::S(..))).count(), 3);
    }
}

#[test]
fn closed_form_matches_mutations_on_four_strands() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let b = build_exchange_matrix(4).unwrap();
    for _ in 0..5 {
        let x = random_point(&mut rng, 13);
        let s = ClusterSeed::new(x.clone(), b.clone()).unwrap();
        for i in 1..4 {
            for e in [1, -1] {
                let comp = apply_r_comp(&s, i, e).unwrap();
                assert_eq!(comp.b, b, "B must be invariant");
                assert_eq!(apply_r_closed(&x, i, e).unwrap(), comp.x, "i = {i}, ε = {e}");
            }
        }
    }
}

#[test]
fn inverse_undoes_and_only_the_window_moves() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let x = random_point(&mut rng, 13);
    for i in 1..4 {
        for e in [1, -1] {
            let r = apply_r_closed(&x, i, e).unwrap();
            assert_eq!(apply_r_closed(&r, i, -e).unwrap(), x);
            for k in 0..13 {
                if k + 3 < 3 * i || k > 3 * i + 3 {
                    assert_eq!(r[k], x[k], "coordinate {} outside window {i}", k + 1);
                }
            }
            // The window's end points are frozen too.
            assert_eq!(r[3 * i - 3], x[3 * i - 3]);
            assert_eq!(r[3 * i + 3], x[3 * i + 3]);
        }
    }
}

#[test]
fn y_closed_form_follows_x() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let b = build_exchange_matrix(3).unwrap();
    for _ in 0..5 {
        let x = random_point(&mut rng, 10);
        let y = y_from_x(&ClusterSeed::new(x.clone(), b.clone()).unwrap()).unwrap();
        for i in 1..3 {
            for e in [1, -1] {
                let rx = apply_r_closed(&x, i, e).unwrap();
                let expect = y_from_x(&ClusterSeed::new(rx, b.clone()).unwrap()).unwrap();
                assert_eq!(apply_r_y(&y, &b, i, e).unwrap(), expect, "i = {i}, ε = {e}");
            }
        }
    }
}

#[test]
fn central_edge_formula() {
    let x = ints(&[2, 3, 5, 7, 11, 13, 17]);
    assert_eq!(central_edge(&x, 1).unwrap(), Q::new((3 * 13 + 5 * 11).into(), 7.into()));
}

#[test]
fn trefoil_pattern_shape() {
    let braid = parse_braid("1 1 1").unwrap();
    let d = 1e-3;
    let a = Complex64::new(-0.5, -0.5);
    let one = Complex64::new(1.0, 0.0);
    let x0 = vec![a, one * d, one * d, one, a * d, a * a * d, one];
    let t = run_pattern(&braid, &x0).unwrap();
    assert_eq!(t.seeds.len(), 4);
    assert_eq!(t.xc.len(), 3);
    assert!(t.seeds.iter().flatten().all(|c| c.re.is_finite() && c.im.is_finite()));
    let (w_in, w_out) = t.windows(1);
    assert_eq!(w_in, &t.seeds[1][..]);
    assert_eq!(w_out, &t.seeds[2][..]);
    let r = residual(&x0, &braid).unwrap();
    assert!(r.iter().map(|c| c.norm()).fold(0.0, f64::max) < 10.0 * d);
}

#[test]
fn empty_word_echoes_the_seed() {
    let e = parse_braid_opts("", None, false).unwrap();
    let x = ints(&[1, 2, 3, 4, 5, 6, 7]);
    let t = run_pattern(&e, &x).unwrap();
    assert_eq!(t.seeds, vec![x]);
    assert!(t.xc.is_empty());
}

#[test]
fn degenerate_steps_are_located() {
    let braid = parse_braid("1 1 1").unwrap();
    // x4 divides in R_1, so the very first crossing fails.
    let mut x = ints(&[1; 7]);
    x[3] = Q::from_integer(0.into());
    match run_pattern(&braid, &x) {
        Err(Error::DegenerateStep { step, source }) => {
            assert_eq!(step, 1);
            assert!(matches!(*source, Error::DivisionByZero { index: 4 }));
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(run_pattern(&braid, &ints(&[1; 10])), Err(Error::LengthMismatch { expected: 7, got: 10 })));
}
