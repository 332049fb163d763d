use num_complex::Complex64;
use orlicz_radius::bounds::{
    check_vector_lemma, evaluate_bound, evaluate_with, nilpotent_constant, normalization, BoundCase, BoundError,
    EvalOptions, LinkStatus, Operands, Tolerance, VectorInputs,
};
use orlicz_radius::linalg::{abs_op, hermitian_norm, psd_fun, CMatrix, LinalgError};
use orlicz_radius::numrad::{numerical_radius, RadiusOptions};
use orlicz_radius::orlicz::OrliczFn;
use orlicz_radius::rng::CounterRng;

fn case(label: &str) -> BoundCase {
    label.parse().unwrap_or_else(|e| panic!("{label}: {e}"))
}

fn eval(label: &str, t: &CMatrix) -> Vec<f64> {
    evaluate_bound(&case(label), t, None, &EvalOptions::default()).unwrap().values()
}

fn eval2(label: &str, t: &CMatrix, s: &CMatrix) -> Vec<f64> {
    evaluate_bound(&case(label), t, Some(s), &EvalOptions::default()).unwrap().values()
}

fn ginibre(n: usize, key: u64) -> CMatrix {
    let mut rng = CounterRng::new(key, 0);
    let scale = 1.0 / (n as f64).sqrt();
    CMatrix::new(n, rng.complex_gaussian_vec(n * n).into_iter().map(|z| z * scale).collect()).unwrap()
}

fn hermitian(n: usize, key: u64) -> CMatrix {
    ginibre(n, key).hermitian_part()
}

fn jordan(n: usize) -> CMatrix {
    CMatrix::jordan_nilpotent(n).unwrap()
}

fn close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol * b.abs().max(1.0), "{a} vs {b}");
}

fn w(t: &CMatrix) -> f64 {
    numerical_radius(t, &RadiusOptions::default()).unwrap().value
}

#[test]
fn power_norm_on_jordan_two() {
    let c = eval("power_norm", &jordan(2));
    close(c[0], 0.5, 1e-12);
    close(c[1], ((1f64.exp() + 1.0) / 2.0).ln(), 1e-12);
    close(c[2], 1.0, 1e-12);
    assert!((c[1] - 0.6201).abs() < 1e-4);
}

#[test]
fn cor_n222_on_jordan_two() {
    let c = eval("cor_N222", &jordan(2));
    close(c[1], (0.5 + 0.5 * 1f64.exp()).ln().sqrt(), 1e-12);
    assert!((c[1] - 0.78747).abs() < 1e-5);
    close(c[0], 0.5, 1e-12);
}

#[test]
fn cor_1_1_hermitian_equality() {
    let t = CMatrix::diag_real(&[1.0, -1.0]).unwrap();
    for v in eval("cor_1_1", &t) {
        close(v, 1.0, 1e-12);
    }
}

#[test]
fn th7_power_linear_on_nilpotent_three() {
    let t = jordan(3);
    let e = evaluate_bound(&case("th7_power[phi=power:p=1,n=3]"), &t, None, &EvalOptions::default()).unwrap();
    let c = e.values();
    // brute force: w(T^3) = 0, ‖T‖ = ‖T²‖ = 1
    let t2 = &t * &t;
    let n1 = orlicz_radius::linalg::operator_norm(&t);
    let n2 = orlicz_radius::linalg::operator_norm(&t2);
    let mid = 0.5 * n1 * n1 * n1 + 0.25 * n2 * n1;
    close(c[1], mid, 1e-12);
    close(c[0], (std::f64::consts::FRAC_PI_4.cos()).powi(3), 1e-9);
    close(c[2], 0.75, 1e-12);
    assert!(e.holds());
}

/// Oracle for th6 built from scratch with public linear algebra only.
fn th6_oracle(t: &CMatrix, phi: &OrliczFn) -> (f64, f64) {
    let at = abs_op(t).unwrap();
    let ats = abs_op(&t.adjoint()).unwrap();
    let f = |x: f64| phi.eval(x).unwrap();
    let wt = w(t);
    let wp = w(&(&at * &ats));
    let w2 = w(&(t * t));
    let gram = &t.adjoint() * t;
    let gram_star = t * &t.adjoint();
    let fa = psd_fun::<LinalgError>(&gram, |l| Ok(f(l))).unwrap();
    let fb = psd_fun::<LinalgError>(&gram_star, |l| Ok(f(l))).unwrap();
    let rhs = 0.5 * f(wp).min(f(w2)) + 0.25 * hermitian_norm(&(&fa + &fb));
    (f(wt * wt), rhs)
}

#[test]
fn th6_matches_independent_oracle() {
    for (k, phi) in ["power:p=1", "power:p=2", "expm1", "powerlog:p=1"].iter().enumerate() {
        let t = ginibre(4, 100 + k as u64);
        let c = eval(&format!("th6[phi={phi}]"), &t);
        let (lhs, rhs) = th6_oracle(&t, &phi.parse().unwrap());
        close(c[0], lhs, 1e-10);
        close(c[1], rhs, 1e-10);
    }
}

#[test]
fn specialization_th1_to_cor_n1() {
    for key in 0..5 {
        let (t, s) = (ginibre(3, key), ginibre(3, 50 + key));
        let a = eval2("th1_product[phi=power:p=1,v=0.5]", &t, &s);
        let b = eval2("cor_N1", &t, &s);
        close(a[0], b[0], 1e-12);
        close(a[1], b[1], 1e-12);
    }
}

#[test]
fn specialization_th2_to_cor_22() {
    for key in 0..5 {
        let t = ginibre(4, key);
        let a = eval("th2_gh[phi=power:p=1,v=0.5,s=0.5]", &t);
        let b = eval("cor_22", &t);
        close(a[0], b[0], 1e-12);
        close(a[1], b[1], 1e-12);
    }
}

#[test]
fn specialization_th8_to_cor_1_x() {
    for key in 0..5 {
        let t = ginibre(3, 20 + key);
        let a = eval("th8[phi=expm1]", &t);
        let b1 = eval("cor_1_1", &t);
        let b2 = eval("cor_1_2", &t);
        close(a[0].ln_1p(), b1[0], 1e-12);
        close(a[1].ln_1p(), b1[1].min(b2[1]), 1e-12);
    }
}

#[test]
fn specialization_th7_to_cor_n222() {
    for key in 0..5 {
        let t = ginibre(3, 30 + key);
        let a = eval("th7_power[phi=expm1,n=2]", &t);
        let b = eval("cor_N222", &t);
        close(a[1].ln_1p().sqrt(), b[1], 1e-12);
        close(a[0].ln_1p().sqrt(), b[0], 1e-12);
    }
}

#[test]
fn cor_n1_refines_kittaneh_moradi() {
    for key in 0..20 {
        let (t, s) = (ginibre(4, key), ginibre(4, 1000 + key));
        let e = evaluate_bound(&case("cor_N1"), &t, Some(&s), &EvalOptions::default()).unwrap();
        assert!(e.holds());
        let c = e.values();
        assert!(c[1] <= c[2]);
        // the printed S*T form is identical up to rounding
        assert!(e.quantity("adjoint_form_gap").unwrap() < 1e-10);
    }
}

#[test]
fn th6_stronger_than_bhunia_when_abs_product_selected() {
    // on non-normal draws the min almost always picks w(T²); Hermitian draws
    // tie, so both branches are exercised
    for key in 0..40 {
        let t = if key % 2 == 0 { ginibre(3, key) } else { hermitian(3, key) };
        let e = evaluate_bound(&case("th6[phi=power:p=1]"), &t, None, &EvalOptions::default()).unwrap();
        let b = eval("base_bhunia", &t);
        if e.quantity("min_selects_abs_prod") == Some(1.0) {
            assert!(e.values()[1] <= b[1] + 1e-9);
        }
    }
}

#[test]
fn hermitian_chains_collapse() {
    for key in 0..20 {
        let t = hermitian(5, key);
        for label in ["power_norm", "cor_1_1", "cor_N222"] {
            let c = eval(label, &t);
            for v in &c[1..] {
                close(*v, c[0], 1e-8);
            }
        }
    }
}

#[test]
fn nilpotent_corollary() {
    for n in 2..=6 {
        let t = jordan(n);
        let c = eval(&format!("cor_nilpotent[n={n}]"), &t);
        let expected = (std::f64::consts::PI / (n as f64 + 1.0)).cos();
        close(c[0], expected, 1e-9);
        close(c[1], nilpotent_constant(n as u32), 1e-15);
        assert!(c[0] <= c[1] && c[1] <= c[2]);
    }
    close(nilpotent_constant(2), ((1.0 + 1f64.exp()) / 2.0).ln().sqrt(), 1e-15);
    let err = evaluate_bound(&case("cor_nilpotent[n=2]"), &ginibre(3, 1), None, &EvalOptions::default());
    assert!(matches!(err, Err(ref e) if e.is_not_applicable()));
}

#[test]
fn every_operator_case_holds_on_samples() {
    let labels = [
        "base_norm",
        "base_kittaneh",
        "base_elhaddad[r=1.5]",
        "base_abuomar",
        "base_bhunia",
        "power_norm",
        "power_norm_phi[phi=expsq]",
        "th2_gh[phi=power:p=2,v=0.75,s=0.25]",
        "cor_22",
        "th3_alpha[phi=expm1,alpha=0.75,variant=a]",
        "th3_alpha[phi=powerlog:p=1,alpha=0.25,variant=b]",
        "th4_gh_alpha[phi=power:p=1.5,alpha=0.5,s=0.25,variant=a]",
        "th4_gh_alpha[phi=expm1,alpha=0,s=0,variant=b]",
        "cor_halfsum_sq[phi=expsq]",
        "th5[phi=expm1]",
        "cor_halfsum[phi=power:p=2]",
        "th6[phi=expsq]",
        "th8[phi=powerlog:p=1]",
        "cor_1_1",
        "cor_1_2",
        "cor_prop1",
        "th7_power[phi=expm1,n=4]",
        "cor_nil[n=5]",
        "cor_N222",
    ];
    let opts = EvalOptions::default();
    for key in 0..6 {
        let t = ginibre(2 + key as usize, 7 + key);
        let ops = Operands::new(t, None, opts.radius).unwrap();
        for label in labels {
            let c = case(label);
            let scale = normalization(&c, ops.norm());
            let e = evaluate_with(&c, ops.view(scale), opts.tolerance).unwrap();
            assert!(e.holds(), "{label}: {:?}", e.values());
            if let Some(est) = e.w_estimate().unwrap() {
                assert!(est >= w(ops.t()) * (1.0 - 1e-7), "{label}");
            }
        }
    }
}

#[test]
fn two_operator_cases_hold() {
    for key in 0..6 {
        let (t, s) = (ginibre(3, key), ginibre(3, 90 + key));
        for label in [
            "dragomir_product[r=2]",
            "th1_product[phi=power:p=1.5,v=0.25]",
            "th1_power[v=1,r=1.5]",
            "cor_N1",
            "cor_11[v=0.75]",
        ] {
            let e = evaluate_bound(&case(label), &t, Some(&s), &EvalOptions::default()).unwrap();
            assert!(e.holds(), "{label}: {:?}", e.values());
        }
    }
}

#[test]
fn operator_count_is_checked() {
    let t = ginibre(2, 1);
    let opts = EvalOptions::default();
    assert!(matches!(
        evaluate_bound(&case("cor_N1"), &t, None, &opts),
        Err(BoundError::MissingSecondOperator)
    ));
    assert!(matches!(
        evaluate_bound(&case("th5[phi=expm1]"), &t, Some(&t), &opts),
        Err(BoundError::UnexpectedSecondOperator(_))
    ));
    assert!(matches!(
        evaluate_bound(&case("buzano_vec"), &t, None, &opts),
        Err(BoundError::VectorCase(_))
    ));
    assert!(matches!(
        evaluate_bound(&case("cor_N1"), &t, Some(&ginibre(3, 1)), &opts),
        Err(BoundError::DimensionMismatch { .. })
    ));
}

#[test]
fn overflow_is_untestable() {
    let t = ginibre(3, 5).scale_real(40.0);
    let err = evaluate_bound(&case("th5[phi=expm1]"), &t, None, &EvalOptions::default()).unwrap_err();
    assert!(err.is_untestable(), "{err}");
    // normalization brings the same matrix back into range
    let c = case("th5[phi=expm1]");
    let ops = Operands::new(t, None, RadiusOptions::default()).unwrap();
    let e = evaluate_with(&c, ops.view(normalization(&c, ops.norm())), Tolerance::default()).unwrap();
    assert!(e.holds());
    close(e.scale * ops.norm(), 4.0, 1e-12);
}

#[test]
fn corrupted_case_fails() {
    let t = ginibre(3, 2);
    let e = evaluate_bound(&case("corrupt:base_kittaneh"), &t, None, &EvalOptions::default()).unwrap();
    assert_eq!(e.violations(), 1);
    assert_eq!(e.links[0].status, LinkStatus::Fail);
    let clean = eval("base_kittaneh", &t);
    close(e.values()[1], 0.1 * clean[1], 1e-15);
}

#[test]
fn tolerance_semantics() {
    let tol = Tolerance::default();
    assert_eq!(tol.link(1.0, 1.0).status, LinkStatus::Pass);
    assert_eq!(tol.link(1.0 + 1e-7, 1.0).status, LinkStatus::Graze);
    assert_eq!(tol.link(1.0 + 3e-7, 1.0).status, LinkStatus::Fail);
    assert_eq!(tol.link(0.0, 0.0).ratio, None);
    assert_eq!(tol.link(0.5, 1.0).ratio, Some(0.5));
    assert_eq!(tol.link(f64::NAN, 1.0).status, LinkStatus::Fail);
}

#[test]
fn evaluation_serializes() {
    let e = evaluate_bound(
        &case("th4_gh_alpha[phi=expm1,alpha=0.5,s=0.25,variant=a]"),
        &ginibre(2, 3),
        None,
        &EvalOptions::default(),
    )
    .unwrap();
    let json = serde_json::to_string(&e).unwrap();
    let back: orlicz_radius::bounds::BoundEvaluation = serde_json::from_str(&json).unwrap();
    assert_eq!(back, e);
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn vec_inputs(vectors: Vec<Vec<Complex64>>, e: Option<Vec<Complex64>>, matrix: Option<CMatrix>) -> VectorInputs {
    VectorInputs { vectors, e, matrix }
}

#[test]
fn buzano_examples() {
    let bz = case("buzano_vec");
    let x = vec![c(1.0, 0.0), c(0.0, 0.0)];
    let r = check_vector_lemma(&bz, &vec_inputs(vec![x.clone(), x.clone()], Some(x.clone()), None), Tolerance::default())
        .unwrap();
    assert_eq!(r.values(), vec![1.0, 1.0]);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let y = vec![c(0.0, 0.0), c(1.0, 0.0)];
    let e = vec![c(h, 0.0), c(h, 0.0)];
    let r = check_vector_lemma(&bz, &vec_inputs(vec![x, y], Some(e), None), Tolerance::default()).unwrap();
    close(r.values()[0], 0.5, 1e-15);
    close(r.values()[1], 0.5, 1e-15);
}

#[test]
fn mccarthy_example() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let a = CMatrix::diag_real(&[1.0, 4.0]).unwrap();
    let inp = vec_inputs(vec![vec![c(h, 0.0), c(h, 0.0)]], None, Some(a));
    let r = check_vector_lemma(&case("mccarthy_vec[r=2]"), &inp, Tolerance::default()).unwrap();
    close(r.values()[0], 6.25, 1e-14);
    close(r.values()[1], 8.5, 1e-14);
    assert!(r.holds());
}

#[test]
fn vector_input_validation() {
    let x = vec![c(1.0, 0.0), c(0.0, 0.0)];
    let bad_e = vec![c(2.0, 0.0), c(0.0, 0.0)];
    let err = check_vector_lemma(
        &case("buzano_vec"),
        &vec_inputs(vec![x.clone(), x.clone()], Some(bad_e), None),
        Tolerance::default(),
    );
    assert!(matches!(err, Err(BoundError::BadVectorInput(_))));
    let not_psd = CMatrix::diag_real(&[1.0, -4.0]).unwrap();
    let err = check_vector_lemma(
        &case("mccarthy_vec[r=2]"),
        &vec_inputs(vec![x.clone()], None, Some(not_psd)),
        Tolerance::default(),
    );
    assert!(matches!(err, Err(BoundError::Linalg(LinalgError::NotPsd { .. }))));
    let err = check_vector_lemma(&case("base_norm"), &vec_inputs(vec![x], None, None), Tolerance::default());
    assert!(matches!(err, Err(BoundError::NotVectorCase(_))));
}

#[test]
fn vector_lemmas_hold_on_random_draws() {
    let tol = Tolerance::default();
    for key in 0..50u64 {
        let mut rng = CounterRng::new(key, 9);
        let n = 6;
        let x = rng.complex_gaussian_vec(n);
        let y = rng.complex_gaussian_vec(n);
        let e = orlicz_radius::linalg::normalized(&rng.complex_gaussian_vec(n)).unwrap();
        let unit = orlicz_radius::linalg::normalized(&rng.complex_gaussian_vec(n)).unwrap();
        let t = ginibre(n, 500 + key);
        let a = abs_op(&t).unwrap();
        let pair = vec_inputs(vec![x.clone(), y.clone()], Some(e.clone()), None);
        for label in [
            "buzano_vec",
            "gen_cauchy_vec[v=0.5]",
            "orlicz_buzano_vec[phi=expsq]",
            "orlicz_buzano_vec[phi=power:p=2]",
            "orlicz_buzano_log[phi=expm1]",
            "orlicz_buzano_log[phi=expsq]",
        ] {
            let r = check_vector_lemma(&case(label), &pair, tol).unwrap();
            assert!(r.holds(), "{label}: {:?}", r.values());
        }
        let r = check_vector_lemma(
            &case("mixed_schwarz_vec[s=0.25]"),
            &vec_inputs(vec![x.clone(), y.clone()], None, Some(t.clone())),
            tol,
        )
        .unwrap();
        assert!(r.holds());
        for label in ["mccarthy_vec[r=1.5]", "op_jensen_vec[phi=expm1]"] {
            let r = check_vector_lemma(&case(label), &vec_inputs(vec![unit.clone()], None, Some(a.clone())), tol)
                .unwrap();
            assert!(r.holds(), "{label}: {:?}", r.values());
        }
        let xs: Vec<_> = (0..4).map(|_| rng.complex_gaussian_vec(n)).collect();
        let r = check_vector_lemma(&case("ext_buzano_vec[n=4]"), &vec_inputs(xs, Some(e), None), tol).unwrap();
        assert!(r.holds());
    }
}
