use mtcalc::builtins;
use mtcalc::cardy::{
    build_cardy_case, check_triple, scale_iota, triple_from_json, triple_to_json, Brane,
};
use mtcalc::double::build_double;
use mtcalc::engine::{braid_words, cap_word, cup_word, trace, twist_word};
use mtcalc::hom::{tensor, HomMorphism};
use mtcalc::modular::s_action;
use mtcalc::numeric::{c64, C64};
use mtcalc::validate::check_pentagon;
use mtcalc::CategoryData;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cats() -> Vec<CategoryData> {
    builtins::all()
}

fn word(cat: &CategoryData, raw: &[usize]) -> Vec<usize> {
    raw.iter().map(|&x| x % cat.rank()).collect()
}

fn case() -> impl Strategy<Value = (usize, Vec<usize>, Vec<usize>)> {
    (
        0..4usize,
        prop::collection::vec(0..8usize, 1..3),
        prop::collection::vec(0..8usize, 1..3),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn braid_then_inverse_is_identity((k, u, v) in case()) {
        let cat = &cats()[k];
        let (x, y) = (word(cat, &u), word(cat, &v));
        let c = braid_words(cat, &x, &y, false).unwrap();
        let ci = braid_words(cat, &y, &x, true).unwrap();
        let mut xy = x.clone();
        xy.extend(&y);
        let back = ci.compose(&c).unwrap();
        prop_assert!(back.max_diff(&HomMorphism::identity(cat, &xy)).unwrap() < 1e-10);
    }

    #[test]
    fn twist_of_product_is_double_braiding((k, u, v) in case()) {
        let cat = &cats()[k];
        let (x, y) = (word(cat, &u), word(cat, &v));
        let mut xy = x.clone();
        xy.extend(&y);
        let lhs = twist_word(cat, &xy, 1);
        let mono = braid_words(cat, &y, &x, false).unwrap().compose(&braid_words(cat, &x, &y, false).unwrap()).unwrap();
        let rhs = mono.compose(&tensor(cat, &twist_word(cat, &x, 1), &twist_word(cat, &y, 1))).unwrap();
        prop_assert!(lhs.max_diff(&rhs).unwrap() < 1e-10);
    }

    #[test]
    fn loop_value_is_product_of_dims((k, u, _v) in case()) {
        let cat = &cats()[k];
        let x = word(cat, &u);
        let v = trace(cat, &HomMorphism::identity(cat, &x)).unwrap().scalar_value().unwrap();
        let want: f64 = x.iter().map(|&a| cat.dim(a)).product();
        prop_assert!((v - want).norm() < 1e-10);
    }

    #[test]
    fn zigzag((k, u, _v) in case()) {
        let cat = &cats()[k];
        let x = word(cat, &u);
        // (id_X ⊗ e_X) ∘ (i_X ⊗ id_X) = id_X
        let first = tensor(cat, &cup_word(cat, &x).unwrap(), &HomMorphism::identity(cat, &x));
        let second = tensor(cat, &HomMorphism::identity(cat, &x), &cap_word(cat, &x).unwrap());
        let z = second.compose(&first).unwrap();
        prop_assert_eq!(&z.src, &x);
        prop_assert!(z.max_diff(&HomMorphism::identity(cat, &x)).unwrap() < 1e-10);
    }

    #[test]
    fn perturbed_fibonacci_breaks_pentagon(seed in any::<u64>()) {
        let fib = builtins::fibonacci();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut parts = fib.parts();
        let mut keys: Vec<_> = parts.f.keys().copied().collect();
        keys.sort();
        let key = keys[rng.gen_range(0..keys.len())];
        let eps = if rng.gen_bool(0.5) { 0.1 } else { -0.1 };
        *parts.f.get_mut(&key).unwrap() += c64(eps, 0.0);
        if let Ok(bad) = CategoryData::from_parts(parts) {
            prop_assert!(check_pentagon(&bad, 1e-9).residual > 1e-3);
        }
    }
}

#[test]
fn verlinde() {
    for cat in cats() {
        let s = s_action(&cat, cat.unit());
        let u = cat.unit();
        let n = cat.rank();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let mut v = C64::new(0.0, 0.0);
                    for x in 0..n {
                        v += s[(a, x)] * s[(b, x)] * s[(c, x)].conj() / s[(u, x)];
                    }
                    assert!(
                        (v - cat.n(a, b, c) as f64).norm() < 1e-10,
                        "{} {a} {b} {c}: {v}",
                        cat.name
                    );
                }
            }
        }
    }
}

#[test]
fn s_is_unitary_and_symmetric() {
    for cat in cats() {
        let s = s_action(&cat, cat.unit());
        let id = s.adjoint() * &s;
        for i in 0..cat.rank() {
            for j in 0..cat.rank() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((id[(i, j)] - want).norm() < 1e-10);
                assert!((s[(i, j)] - s[(j, i)]).norm() < 1e-10);
            }
        }
    }
}

#[test]
fn cardy_triple_survives_json() {
    let ising = builtins::ising();
    let d = build_double(&ising);
    let t = build_cardy_case(&d, &Brane::parse(&ising, "1+sigma").unwrap()).unwrap();
    let back = triple_from_json(&d, &triple_to_json(&d, &t).unwrap()).unwrap();
    assert!(check_triple(&d, &back, 1e-9).pass);
    assert!(!check_triple(&d, &scale_iota(&back, 0, 2.0), 1e-9).pass);
}

#[test]
fn brane_parse_rejects_garbage() {
    let fib = builtins::fibonacci();
    assert!(Brane::parse(&fib, "2*tau+1").is_ok());
    assert!(Brane::parse(&fib, "sigma").is_err());
    assert!(Brane::parse(&fib, "0*tau").is_err());
    assert!(Brane::parse(&fib, "").is_err());
}
