use orlicz_radius::ensembles::{draw_vectors, family_defect, generate, generate_pair, EnsembleSpec, Family};
use orlicz_radius::linalg::{operator_norm, vec_norm, CMatrix};
use orlicz_radius::numrad::{numerical_radius, RadiusOptions};

fn spec(family: &str, n: usize, count: usize, seed: u64) -> EnsembleSpec {
    format!(r#"{{"family":"{family}","n":{n},"count":{count},"seed":{seed}}}"#)
        .parse()
        .unwrap()
}

#[test]
fn family_predicates_hold_for_every_draw() {
    for family in Family::STANDARD {
        for n in 1..=8 {
            let s = spec(family, n, 40, 11);
            for i in 0..s.count {
                let m = generate(&s, i).unwrap();
                assert_eq!(m.n(), n);
                let d = family_defect(&s.family, &m);
                assert!(d <= 1e-10, "{family} n={n} draw {i}: defect {d:e}");
            }
        }
    }
}

#[test]
fn structural_examples() {
    let j = generate(&spec("nilpotent_jordan", 4, 3, 9), 2).unwrap();
    assert!(j.bit_identical(&CMatrix::jordan_nilpotent(4).unwrap()));
    assert!(j.pow(4).is_zero());
    let h = generate(&spec("hermitian", 3, 1, 1), 0).unwrap();
    assert_eq!(h.hermitian_defect(), 0.0);
    let u = generate(&spec("unitary", 5, 1, 1), 0).unwrap();
    let resid = (&u.adjoint() * &u).max_abs_diff(&CMatrix::identity(5).unwrap());
    assert!(resid <= 1e-12, "{resid:e}");
    let r = generate(&spec("nilpotent_random", 6, 1, 3), 0).unwrap();
    assert!(r.pow(6).max_abs() <= 1e-12 * operator_norm(&r).powi(6).max(1.0));
}

#[test]
fn draws_are_pure_functions_of_spec_and_index() {
    for family in Family::STANDARD {
        let s = spec(family, 5, 10, 42);
        let forward: Vec<CMatrix> = (0..10).map(|i| generate(&s, i).unwrap()).collect();
        let backward: Vec<CMatrix> = (0..10).rev().map(|i| generate(&s, i).unwrap()).collect();
        for (a, b) in forward.iter().zip(backward.iter().rev()) {
            assert!(a.bit_identical(b));
        }
        if family != "nilpotent_jordan" {
            assert!(!forward[0].bit_identical(&forward[1]));
            let other = generate(&spec(family, 5, 10, 43), 0).unwrap();
            assert!(!other.bit_identical(&forward[0]));
        }
    }
}

#[test]
fn pairs_use_an_independent_stream() {
    let s = spec("ginibre", 3, 4, 5);
    let (t, s2) = generate_pair(&s, 1).unwrap();
    assert!(t.bit_identical(&generate(&s, 1).unwrap()));
    assert!(!t.bit_identical(&s2));
}

#[test]
fn scaled_family_is_homogeneous() {
    let opts = RadiusOptions::default();
    for c in [-2.5f64, 0.3, 4.0] {
        let scaled: EnsembleSpec =
            format!(r#"{{"family":"scaled","n":4,"count":5,"seed":8,"params":{{"base":"ginibre","c":{c}}}}}"#)
                .parse()
                .unwrap();
        let base = spec("ginibre", 4, 5, 8);
        for i in 0..5 {
            let ws = numerical_radius(&generate(&scaled, i).unwrap(), &opts).unwrap().value;
            let wb = numerical_radius(&generate(&base, i).unwrap(), &opts).unwrap().value;
            assert!((ws - c.abs() * wb).abs() <= 2.0 * opts.tol, "{ws} vs {}", c.abs() * wb);
        }
    }
}

#[test]
fn normalized_draws_have_unit_norm() {
    let s = spec("ginibre", 5, 10, 2).normalized();
    for i in 0..10 {
        assert!((operator_norm(&generate(&s, i).unwrap()) - 1.0).abs() < 1e-13);
    }
}

#[test]
fn vector_draws() {
    let s = spec("ginibre", 6, 3, 2);
    let (v, e) = draw_vectors(&s, 1, 3);
    assert_eq!(v.len(), 3);
    assert!(v.iter().all(|x| x.len() == 6));
    assert!((vec_norm(&e) - 1.0).abs() < 1e-14);
    assert_eq!(draw_vectors(&s, 1, 3), (v, e));
}
