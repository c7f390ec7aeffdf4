//! Identities of the graphical calculus checked on a category.

use crate::category::{CategoryData, Label};
use crate::engine::{after_gen, braid_words, generator, then, then_gen, Generator};
use crate::hom::HomMorphism;
use crate::numeric::re;
use crate::operators::{hat_a0, omega0, omega_minus1, sigma123, sigma132, tilde_a0};
use crate::report::{timed, CheckReport, Worst};

fn gen(cat: &CategoryData, g: Generator) -> HomMorphism {
    generator(cat, &g).expect("valid generator")
}

fn nm(cat: &CategoryData, ls: &[Label]) -> String {
    ls.iter()
        .map(|&l| cat.name_of(l))
        .collect::<Vec<_>>()
        .join(",")
}

/// Fusion vertices against splitting vertices: e^c_{ab;i} ∘ f^{ab}_{c;j} = δ_ij id_c.
pub fn check_biorthogonality(cat: &CategoryData, tol: f64) -> CheckReport {
    let n = cat.rank();
    let mut worst = Worst::default();
    for a in 0..n {
        for b in 0..n {
            for c in cat.channels(a, b) {
                let id = HomMorphism::identity(cat, &[c]);
                for i in 0..cat.n(a, b, c) {
                    for j in 0..cat.n(a, b, c) {
                        let p = gen(cat, Generator::BasisVertex(a, b, c, i))
                            .compose(&gen(cat, Generator::DualVertex(a, b, c, j)))
                            .unwrap();
                        let expect = if i == j {
                            id.clone()
                        } else {
                            id.scale(re(0.0))
                        };
                        worst.see(p.max_diff(&expect).unwrap(), || {
                            format!("{} i={i} j={j}", nm(cat, &[a, b, c]))
                        });
                    }
                }
            }
        }
    }
    worst.report("biorthogonality", tol)
}

/// Σ_{c,i} f^{ab}_{c;i} ∘ e^c_{ab;i} = id_{a⊗b}.
pub fn resolve_identity(cat: &CategoryData, a: Label, b: Label, tol: f64) -> CheckReport {
    let mut sum = HomMorphism::zero(cat, &[a, b], &[a, b]);
    for c in cat.channels(a, b) {
        for i in 0..cat.n(a, b, c) {
            let t = gen(cat, Generator::DualVertex(a, b, c, i))
                .compose(&gen(cat, Generator::BasisVertex(a, b, c, i)))
                .unwrap();
            sum = sum.add(&t).unwrap();
        }
    }
    let r = sum.max_diff(&HomMorphism::identity(cat, &[a, b])).unwrap();
    CheckReport::new(format!("resolve-identity[{}]", nm(cat, &[a, b])), r, tol)
}

pub fn check_resolution(cat: &CategoryData, tol: f64) -> CheckReport {
    let mut worst = Worst::default();
    for a in 0..cat.rank() {
        for b in 0..cat.rank() {
            let r = resolve_identity(cat, a, b, tol);
            worst.see(r.residual, || nm(cat, &[a, b]));
        }
    }
    worst.report("resolution-of-identity", tol)
}

/// The two twisted braided forms of the left evaluation e'_a : a⊗a' → 1,
/// e_a ∘ c_{a,a'} ∘ (θ_a⊗id) and e_a ∘ c⁻¹_{a',a} ∘ (θ_a⁻¹⊗id).
pub fn dual_twist_forms(cat: &CategoryData, a: Label) -> (HomMorphism, HomMorphism) {
    let ad = cat.dual(a);
    let cap = gen(cat, Generator::Cap(a));
    let over = after_gen(cat, &cap, 0, Generator::Braid(a, ad)).unwrap();
    let over = after_gen(cat, &over, 0, Generator::Twist(a)).unwrap();
    let under = after_gen(cat, &cap, 0, Generator::BraidInv(a, ad)).unwrap();
    let under = after_gen(cat, &under, 0, Generator::TwistInv(a)).unwrap();
    (over, under)
}

pub fn check_dual_twist(cat: &CategoryData, tol: f64) -> CheckReport {
    let mut worst = Worst::default();
    for a in 0..cat.rank() {
        let capl = gen(cat, Generator::CapL(a));
        let (f1, f2) = dual_twist_forms(cat, a);
        worst.see(capl.max_diff(&f1).unwrap(), || {
            format!("{} (over-crossing form)", cat.name_of(a))
        });
        worst.see(capl.max_diff(&f2).unwrap(), || {
            format!("{} (under-crossing form)", cat.name_of(a))
        });
    }
    worst.report("dual-twist", tol)
}

/// Σ_{a4,l} (dim a4/dim b) B_l ∘ C_l = id_{a3'⊗b}, where B_l : a4 → a3'⊗b bends the
/// a3 leg of the fusion vertex e^b_{a3a4;l} down and C_l : a3'⊗b → a4 bends the
/// a3 leg of the splitting vertex f^{a3a4}_{b;l} up.
pub fn dual_basis_lemma(cat: &CategoryData, a3: Label, b: Label, tol: f64) -> CheckReport {
    let a3d = cat.dual(a3);
    let mut sum = HomMorphism::zero(cat, &[a3d, b], &[a3d, b]);
    for a4 in 0..cat.rank() {
        for l in 0..cat.n(a3, a4, b) {
            let start = HomMorphism::identity(cat, &[a4]);
            let bl = then_gen(cat, &start, 0, Generator::CupL(a3)).unwrap();
            let bl = then_gen(cat, &bl, 1, Generator::BasisVertex(a3, a4, b, l)).unwrap();
            let start = HomMorphism::identity(cat, &[a3d, b]);
            let cl = then_gen(cat, &start, 1, Generator::DualVertex(a3, a4, b, l)).unwrap();
            let cl = then_gen(cat, &cl, 0, Generator::Cap(a3)).unwrap();
            let term = bl.compose(&cl).unwrap().scale(re(cat.dim(a4) / cat.dim(b)));
            sum = sum.add(&term).unwrap();
        }
    }
    let r = sum
        .max_diff(&HomMorphism::identity(cat, &[a3d, b]))
        .unwrap();
    CheckReport::new(format!("dual-basis-lemma[{}]", nm(cat, &[a3, b])), r, tol)
}

pub fn check_dual_basis(cat: &CategoryData, tol: f64) -> CheckReport {
    let mut worst = Worst::default();
    for a3 in 0..cat.rank() {
        for b in 0..cat.rank() {
            worst.see(dual_basis_lemma(cat, a3, b, tol).residual, || {
                nm(cat, &[a3, b])
            });
        }
    }
    worst.report("dual-basis-lemma", tol)
}

/// ω_a(W) : W → W, the closed a-loop linking the strands of W:
/// (id_W⊗e'_a)(c_{a,W} c_{W,a} ⊗ id_{a'})(id_W⊗i_a).
pub fn encircle(cat: &CategoryData, w: &[Label], a: Label) -> HomMorphism {
    let start = HomMorphism::identity(cat, w);
    let n = w.len();
    let h = then_gen(cat, &start, n, Generator::Cup(a)).unwrap();
    let mono = braid_words(cat, &[a], w, false)
        .unwrap()
        .compose(&braid_words(cat, w, &[a], false).unwrap())
        .unwrap();
    let h = then(cat, &h, 0, &mono).unwrap();
    then_gen(cat, &h, n, Generator::CapL(a)).unwrap()
}

/// Σ_a (dim a2 · dim a / D²) ω_a(a1⊗a2') = δ_{a1a2} i_{a1} ∘ e'_{a1}.
pub fn bk_lemma(cat: &CategoryData, a1: Label, a2: Label, tol: f64) -> CheckReport {
    let w = [a1, cat.dual(a2)];
    let mut sum = HomMorphism::zero(cat, &w, &w);
    for a in 0..cat.rank() {
        let s = cat.dim(a2) * cat.dim(a) / cat.dsq();
        sum = sum.add(&encircle(cat, &w, a).scale(re(s))).unwrap();
    }
    let expect = if a1 == a2 {
        gen(cat, Generator::Cup(a1))
            .compose(&gen(cat, Generator::CapL(a1)))
            .unwrap()
    } else {
        HomMorphism::zero(cat, &w, &w)
    };
    let r = sum.max_diff(&expect).unwrap();
    CheckReport::new(format!("bk-lemma[{}]", nm(cat, &[a1, a2])), r, tol)
}

pub fn check_bk(cat: &CategoryData, tol: f64) -> CheckReport {
    let mut worst = Worst::default();
    for a1 in 0..cat.rank() {
        for a2 in 0..cat.rank() {
            worst.see(bk_lemma(cat, a1, a2, tol).residual, || nm(cat, &[a1, a2]));
        }
    }
    worst.report("bk-lemma", tol)
}

/// Apply `f` to every basis vertex of every three-leg space.
fn over_all_vertices(cat: &CategoryData, mut f: impl FnMut(Label, Label, Label, &HomMorphism)) {
    let n = cat.rank();
    for a in 0..n {
        for b in 0..n {
            for c in cat.channels(a, b) {
                for i in 0..cat.n(a, b, c) {
                    f(a, b, c, &gen(cat, Generator::BasisVertex(a, b, c, i)));
                }
            }
        }
    }
}

/// Ω₀Ω₋₁ = Ω₋₁Ω₀ = id, Ã₀Â₀ = Â₀Ã₀ = id, σ₁₂₃³ = id and σ₁₃₂σ₁₂₃ = id on every
/// three-leg space. Linearity makes the basis vertices sufficient.
pub fn check_operator_algebra(cat: &CategoryData, tol: f64) -> CheckReport {
    let mut omega = Worst::default();
    let mut a_pair = Worst::default();
    let mut sigma = Worst::default();
    over_all_vertices(cat, |a, b, c, v| {
        let w = nm(cat, &[a, b, c]);
        let d1 = omega0(cat, &omega_minus1(cat, v).unwrap())
            .unwrap()
            .max_diff(v)
            .unwrap();
        let d2 = omega_minus1(cat, &omega0(cat, v).unwrap())
            .unwrap()
            .max_diff(v)
            .unwrap();
        omega.see(d1.max(d2), || w.clone());
        let d3 = tilde_a0(cat, &hat_a0(cat, v).unwrap())
            .unwrap()
            .max_diff(v)
            .unwrap();
        let d4 = hat_a0(cat, &tilde_a0(cat, v).unwrap())
            .unwrap()
            .max_diff(v)
            .unwrap();
        a_pair.see(d3.max(d4), || w.clone());
        let s1 = sigma123(cat, v).unwrap();
        let s3 = sigma123(cat, &sigma123(cat, &s1).unwrap()).unwrap();
        let d5 = s3.max_diff(v).unwrap();
        let d6 = sigma132(cat, &s1).unwrap().max_diff(v).unwrap();
        sigma.see(d5.max(d6), || w.clone());
    });
    CheckReport::aggregate(
        "operator-algebra",
        tol,
        vec![
            omega.report("omega0-omega-1", tol),
            a_pair.report("tildeA0-hatA0", tol),
            sigma.report("sigma123-cubed", tol),
        ],
    )
}

/// σ₁₂₃ = Ω₀ ∘ Ã₀, comparing the duality-move evaluation with the composite.
pub fn check_sigma_factorization(cat: &CategoryData, tol: f64) -> CheckReport {
    let mut worst = Worst::default();
    over_all_vertices(cat, |a, b, c, v| {
        let lhs = sigma123(cat, v).unwrap();
        let rhs = omega0(cat, &tilde_a0(cat, v).unwrap()).unwrap();
        worst.see(lhs.max_diff(&rhs).unwrap(), || nm(cat, &[a, b, c]));
    });
    worst.report("sigma123-factorization", tol)
}

/// The closed loop e'_a ∘ i_a evaluates to dim a.
pub fn check_loops(cat: &CategoryData, tol: f64) -> CheckReport {
    let mut worst = Worst::default();
    for a in 0..cat.rank() {
        let l = gen(cat, Generator::CapL(a))
            .compose(&gen(cat, Generator::Cup(a)))
            .unwrap();
        let v = l.scalar_value().unwrap_or_default();
        worst.see((v - re(cat.dim(a))).norm(), || cat.name_of(a).to_string());
    }
    worst.report("loop-dimension", tol)
}

/// Whole graphical-calculus suite.
pub fn check_calculus(cat: &CategoryData, tol: f64) -> CheckReport {
    let parts = vec![
        timed(|| check_biorthogonality(cat, tol)),
        timed(|| check_resolution(cat, tol)),
        timed(|| check_loops(cat, tol)),
        timed(|| check_dual_twist(cat, tol)),
        timed(|| check_dual_basis(cat, tol)),
        timed(|| check_bk(cat, tol)),
    ];
    CheckReport::aggregate(format!("calculus[{}]", cat.name), tol, parts)
}
