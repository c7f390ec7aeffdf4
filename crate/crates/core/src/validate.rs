//! Axiom checks for a category presentation. Failures are reported, never raised.

use rayon::prelude::*;

use crate::category::{CategoryData, Label};
use crate::engine::{generator, then, Generator};
use crate::hom::HomMorphism;
use crate::numeric::{eigenvalues, eye, max_abs_diff, re, zeros, Mat, C64};
use crate::report::{timed, CheckReport, Worst};

pub fn validate_category(cat: &CategoryData, tol: f64) -> CheckReport {
    let parts = vec![
        timed(|| check_fusion(cat, tol)),
        timed(|| check_unit_f(cat, tol)),
        timed(|| check_unit_r(cat, tol)),
        timed(|| check_pentagon(cat, tol)),
        timed(|| check_hexagon(cat, tol, false)),
        timed(|| check_hexagon(cat, tol, true)),
        timed(|| check_dims(cat, tol)),
        timed(|| check_balancing(cat, tol)),
        timed(|| check_scalars(cat, tol)),
        timed(|| check_rigidity(cat, tol)),
        timed(|| check_d_relation(cat, tol)),
    ];
    CheckReport::aggregate(format!("validate[{}]", cat.name), tol, parts)
}

fn names(cat: &CategoryData, ls: &[Label]) -> String {
    ls.iter()
        .map(|&l| cat.name_of(l))
        .collect::<Vec<_>>()
        .join(",")
}

/// Integer fusion rules: unit, duality and symmetry constraints, counted as violations.
pub fn check_fusion(cat: &CategoryData, tol: f64) -> CheckReport {
    let n = cat.rank();
    let e = cat.unit();
    let mut bad = Vec::new();
    if cat.dual(e) != e {
        bad.push("dual(e) != e".to_string());
    }
    for a in 0..n {
        if cat.dual(cat.dual(a)) != a {
            bad.push(format!("dual not involutive at {}", cat.name_of(a)));
        }
        for b in 0..n {
            if cat.n(e, a, b) != usize::from(a == b) || cat.n(a, e, b) != usize::from(a == b) {
                bad.push(format!("unit fusion at {}", names(cat, &[a, b])));
            }
            if cat.n(a, b, e) != usize::from(b == cat.dual(a)) {
                bad.push(format!("N_ab^e at {}", names(cat, &[a, b])));
            }
            for c in 0..n {
                let v = cat.n(a, b, c);
                if v != cat.n(b, a, c) || v != cat.n(cat.dual(b), cat.dual(a), cat.dual(c)) {
                    bad.push(format!("fusion symmetry at {}", names(cat, &[a, b, c])));
                }
            }
        }
    }
    let mut r = CheckReport::new("fusion-rules", bad.len() as f64, tol);
    r.witness = bad.into_iter().take(5).collect();
    r
}

/// F blocks with a unit leg are identities under the natural tree correspondence.
pub fn check_unit_f(cat: &CategoryData, tol: f64) -> CheckReport {
    let n = cat.rank();
    let e = cat.unit();
    let mut worst = Worst::default();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if a != e && b != e && c != e {
                    continue;
                }
                for d in 0..n {
                    let Some(blk) = cat.fblock(a, b, c, d) else {
                        continue;
                    };
                    let mut expect = zeros(blk.left.len(), blk.right.len());
                    for (r, &(_, i, j)) in blk.left.iter().enumerate() {
                        let target = if a == e {
                            (d, j, 0)
                        } else if b == e {
                            (c, 0, j)
                        } else {
                            (b, 0, i)
                        };
                        if let Some(&s) = blk.right_index.get(&target) {
                            expect[(r, s)] = re(1.0);
                        }
                    }
                    worst.see(max_abs_diff(&blk.m, &expect), || {
                        format!("F^{{{}}}", names(cat, &[a, b, c, d]))
                    });
                }
            }
        }
    }
    worst.report("unit-f", tol)
}

pub fn check_unit_r(cat: &CategoryData, tol: f64) -> CheckReport {
    let e = cat.unit();
    let mut worst = Worst::default();
    for a in 0..cat.rank() {
        for (x, y) in [(e, a), (a, e)] {
            let m = cat.r(x, y, a).expect("unit channel");
            worst.see(max_abs_diff(m, &eye(m.nrows())), || {
                format!("R^{{{}}}", names(cat, &[x, y]))
            });
        }
    }
    worst.report("unit-r", tol)
}

/// Pentagon with multiplicities, comparing both reassociation paths from ((ab)c)d to a(b(cd)).
pub fn check_pentagon(cat: &CategoryData, tol: f64) -> CheckReport {
    let n = cat.rank();
    let tuples: Vec<[Label; 5]> = (0..n.pow(5))
        .map(|mut x| {
            let mut t = [0; 5];
            for s in t.iter_mut().rev() {
                *s = x % n;
                x /= n;
            }
            t
        })
        .collect();
    let worst = tuples
        .par_iter()
        .map(|&t| {
            let mut w = Worst::default();
            pentagon_tuple(cat, t, &mut w);
            w
        })
        .reduce(Worst::default, |a, b| {
            if b.witness.is_some() && (a.witness.is_none() || b.residual > a.residual) {
                b
            } else {
                a
            }
        });
    worst.report("pentagon", tol)
}

fn pentagon_tuple(cat: &CategoryData, [a, b, c, d, e]: [Label; 5], worst: &mut Worst) {
    let n = cat.rank();
    let lefts: Vec<(Label, usize, Label, usize, usize)> = (0..n)
        .flat_map(|f| (0..n).map(move |g| (f, g)))
        .flat_map(|(f, g)| {
            let mut v = Vec::new();
            for al in 0..cat.n(a, b, f) {
                for be in 0..cat.n(f, c, g) {
                    for ga in 0..cat.n(g, d, e) {
                        v.push((f, al, g, be, ga));
                    }
                }
            }
            v
        })
        .collect();
    if lefts.is_empty() {
        return;
    }
    for l in 0..n {
        for k in 0..n {
            for de in 0..cat.n(c, d, l) {
                for ze in 0..cat.n(b, l, k) {
                    for et in 0..cat.n(a, k, e) {
                        for &(f, al, g, be, ga) in &lefts {
                            let mut p1 = C64::default();
                            for ep in 0..cat.n(f, l, e) {
                                p1 += cat.f([f, c, d, e], (g, be, ga), (l, de, ep))
                                    * cat.f([a, b, l, e], (f, al, ep), (k, ze, et));
                            }
                            let mut p2 = C64::default();
                            for h in 0..n {
                                for ka in 0..cat.n(b, c, h) {
                                    for la in 0..cat.n(a, h, g) {
                                        let x = cat.f([a, b, c, g], (f, al, be), (h, ka, la));
                                        if x.norm() == 0.0 {
                                            continue;
                                        }
                                        for zp in 0..cat.n(h, d, k) {
                                            p2 += x
                                                * cat.f([a, h, d, e], (g, la, ga), (k, zp, et))
                                                * cat.f([b, c, d, k], (h, ka, zp), (l, de, ze));
                                        }
                                    }
                                }
                            }
                            worst.see((p1 - p2).norm(), || {
                                format!(
                                    "{} f={} g={} k={} l={}",
                                    names(cat, &[a, b, c, d, e]),
                                    cat.name_of(f),
                                    cat.name_of(g),
                                    cat.name_of(k),
                                    cat.name_of(l)
                                )
                            });
                        }
                    }
                }
            }
        }
    }
}

/// Hexagon: braiding a past b⊗c strand by strand equals braiding it past the fused
/// channel. With `inverse` the reverse crossings are used.
pub fn check_hexagon(cat: &CategoryData, tol: f64, inverse_crossing: bool) -> CheckReport {
    let n = cat.rank();
    let mut worst = Worst::default();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let (g1, g2) = if inverse_crossing {
                    (Generator::BraidInv(a, b), Generator::BraidInv(a, c))
                } else {
                    (Generator::Braid(a, b), Generator::Braid(a, c))
                };
                let start = HomMorphism::identity(cat, &[a, b, c]);
                let strandwise = then(cat, &start, 0, &generator(cat, &g1).unwrap())
                    .and_then(|h| then(cat, &h, 1, &generator(cat, &g2).unwrap()))
                    .expect("braids fit");
                for d in 0..n {
                    let Some(blk) = cat.fblock(a, b, c, d) else {
                        continue;
                    };
                    let tgt = cat.trees(&[b, c, a], d);
                    let mut fused = zeros(tgt.len(), blk.left.len());
                    for (r, _) in blk.left.iter().enumerate() {
                        for (s, &(f, k, l)) in blk.right.iter().enumerate() {
                            let coef = blk.m[(r, s)];
                            if coef.norm() == 0.0 {
                                continue;
                            }
                            let rm: Mat = if inverse_crossing {
                                cat.r_inv(f, a, d).unwrap().clone()
                            } else {
                                cat.r(a, f, d).unwrap().clone()
                            };
                            for m in 0..rm.ncols() {
                                let t = crate::hom::FusionTree {
                                    y: vec![b, f, d],
                                    mu: vec![0, k, m],
                                };
                                fused[(tgt.position(&t), r)] += coef * rm[(l, m)];
                            }
                        }
                    }
                    let lhs = strandwise
                        .block(d)
                        .cloned()
                        .unwrap_or_else(|| zeros(fused.nrows(), fused.ncols()));
                    worst.see(max_abs_diff(&lhs, &fused), || {
                        format!("{} -> {}", names(cat, &[a, b, c]), cat.name_of(d))
                    });
                }
            }
        }
    }
    worst.report(
        if inverse_crossing {
            "hexagon-inverse"
        } else {
            "hexagon"
        },
        tol,
    )
}

/// dim a · dim b = Σ N_ab^c dim c, positivity, and agreement with the Perron root of N_a.
pub fn check_dims(cat: &CategoryData, tol: f64) -> CheckReport {
    let n = cat.rank();
    let mut worst = Worst::default();
    worst.see(0.0, || "none".into());
    for a in 0..n {
        if cat.dim(a) <= 0.0 {
            worst.see(f64::INFINITY, || {
                format!("dim {} not positive", cat.name_of(a))
            });
        }
        for b in 0..n {
            let rhs: f64 = (0..n).map(|c| cat.n(a, b, c) as f64 * cat.dim(c)).sum();
            worst.see((cat.dim(a) * cat.dim(b) - rhs).abs(), || {
                format!("dim product {}", names(cat, &[a, b]))
            });
        }
        let na = Mat::from_fn(n, n, |b, c| re(cat.n(a, b, c) as f64));
        let perron = eigenvalues(&na)
            .into_iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        worst.see((perron - cat.dim(a)).abs(), || {
            format!("Perron root of N_{}", cat.name_of(a))
        });
    }
    let mut r = worst.report("dims", tol);
    if r.witness == ["none"] {
        r.witness.clear();
    }
    r
}

/// Monodromy R^{ab} R^{ba} in channel c equals θ_c/(θ_a θ_b).
pub fn check_balancing(cat: &CategoryData, tol: f64) -> CheckReport {
    let n = cat.rank();
    let mut worst = Worst::default();
    for a in 0..n {
        for b in 0..n {
            for c in cat.channels(a, b) {
                let mono = cat.r(a, b, c).unwrap() * cat.r(b, a, c).unwrap();
                let expect = eye(mono.nrows()) * (cat.theta(c) / (cat.theta(a) * cat.theta(b)));
                worst.see(max_abs_diff(&mono, &expect), || names(cat, &[a, b, c]));
            }
        }
    }
    worst.report("balancing", tol)
}

/// dim e = 1, θ_e = 1, dim a = dim a', θ_a = θ_{a'}, |θ_a| = 1, κ_a = ±1 and, for
/// self-dual a, κ_a = dim a · F^{aaa}_{a;ee}.
pub fn check_scalars(cat: &CategoryData, tol: f64) -> CheckReport {
    let e = cat.unit();
    let mut worst = Worst::default();
    worst.see((cat.dim(e) - 1.0).abs(), || "dim e".into());
    worst.see((cat.theta(e) - re(1.0)).norm(), || "theta e".into());
    for a in 0..cat.rank() {
        let ad = cat.dual(a);
        let nm = cat.name_of(a);
        worst.see((cat.dim(a) - cat.dim(ad)).abs(), || {
            format!("dim {nm} vs dual")
        });
        worst.see((cat.theta(a) - cat.theta(ad)).norm(), || {
            format!("theta {nm} vs dual")
        });
        worst.see((cat.theta(a).norm() - 1.0).abs(), || {
            format!("|theta {nm}|")
        });
        if cat.fs(a).abs() != 1 {
            worst.see(f64::INFINITY, || format!("fs {nm}"));
        }
        if ad == a {
            let v = cat.pivotal(a).inv();
            worst.see((v - re(cat.fs(a) as f64)).norm(), || {
                format!("Frobenius-Schur {nm}")
            });
        }
    }
    worst.report("scalars", tol)
}

/// Both zigzag identities need F^{a'aa'}_{a'} inverse and F^{aa'a}_a to agree in the unit channel.
pub fn check_rigidity(cat: &CategoryData, tol: f64) -> CheckReport {
    let e = cat.unit();
    let mut worst = Worst::default();
    for a in 0..cat.rank() {
        let ad = cat.dual(a);
        let f1 = cat.f([a, ad, a, a], (e, 0, 0), (e, 0, 0));
        let blk = cat.fblock(ad, a, ad, ad).expect("dual block");
        let r = blk.right_index[&(e, 0, 0)];
        let l = blk.left_index[&(e, 0, 0)];
        let f2 = blk.inv[(r, l)];
        worst.see((f1 - f2).norm(), || cat.name_of(a).to_string());
    }
    worst.report("rigidity", tol)
}

/// |p_- e^{-2πic/8} - p_+ e^{2πic/8}| and |D² - Σ dim²|.
pub fn check_d_relation(cat: &CategoryData, tol: f64) -> CheckReport {
    let ph = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * cat.cmod8 / 8.0);
    let r1 = (cat.p_minus() / ph - cat.p_plus() * ph).norm();
    let d = cat.big_d();
    let r2 = (d * d - re(cat.dsq())).norm();
    let mut r = CheckReport::new("d-relation", r1.max(r2), tol);
    r.witness
        .push(format!("p-/p+ mismatch {r1:.2e}, D^2 mismatch {r2:.2e}"));
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    #[test]
    fn builtins_validate() {
        for cat in builtins::all() {
            let r = validate_category(&cat, 1e-9);
            for p in &r.parts {
                assert!(p.pass, "{}: {}", cat.name, p.line());
            }
        }
    }

    #[test]
    fn trivial_is_exact() {
        let r = validate_category(&builtins::trivial(), 1e-9);
        assert_eq!(r.residual, 0.0);
    }

    #[test]
    fn perturbed_pentagon_fails() {
        let cat = builtins::fibonacci();
        let mut p = cat.parts();
        let key = [1, 1, 1, 1, 0, 0, 0, 0, 0, 0];
        *p.f.get_mut(&key).unwrap() += re(0.1);
        let bad = CategoryData::from_parts(p).unwrap();
        let r = check_pentagon(&bad, 1e-9);
        assert!(r.residual > 1e-2, "{}", r.line());
    }
}
