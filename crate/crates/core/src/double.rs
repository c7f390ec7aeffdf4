//! The doubled category 𝓒 ⊠ 𝓒^rev and the tensor functor T to 𝓒.
//!
//! Doubled label (a, ā) is stored as a·n + ā. A doubled vertex with base indices (i, j)
//! has index i·N_{āb̄}^{c̄} + j. On words, T sends (x1,ȳ1)…(xk,ȳk) to x1…xk ȳ1…ȳk.

use std::collections::HashMap;

use crate::category::{CategoryData, CategoryParts, Label};
use crate::engine::braid_words;
use crate::error::Result;
use crate::hom::{tensor, FusionTree, HomMorphism};
use crate::modular::s_action;
use crate::numeric::{inverse, kron, max_abs_diff, C64};
use crate::object::{GenMorphism, Obj};
use crate::report::{timed, CheckReport};
use crate::validate::validate_category;

pub struct DoubledCategory {
    pub base: CategoryData,
    pub cat: CategoryData,
}

pub fn build_double(base: &CategoryData) -> DoubledCategory {
    let n = base.rank();
    let pair = |a: usize, b: usize| a * n + b;
    let bp = base.parts();
    let nn = n * n;

    let mut labels = Vec::with_capacity(nn);
    let mut dual = vec![0; nn];
    let mut dims = vec![0.0; nn];
    let mut twists = vec![C64::new(0.0, 0.0); nn];
    let mut fs = vec![0; nn];
    for a in 0..n {
        for b in 0..n {
            let x = pair(a, b);
            labels.push(format!("{}:{}", bp.labels[a], bp.labels[b]));
            dual[x] = pair(base.dual(a), base.dual(b));
            dims[x] = base.dim(a) * base.dim(b);
            twists[x] = base.theta(a) / base.theta(b);
            fs[x] = base.fs(a) * base.fs(b);
        }
    }
    let mut fusion = vec![0; nn * nn * nn];
    for x in 0..nn {
        for y in 0..nn {
            for z in 0..nn {
                let (a, ab) = (x / n, x % n);
                let (b, bb) = (y / n, y % n);
                let (c, cb) = (z / n, z % n);
                fusion[(x * nn + y) * nn + z] = base.n(a, b, c) * base.n(ab, bb, cb);
            }
        }
    }
    let flat = |i: usize, j: usize, a: usize, b: usize, c: usize| i * base.n(a, b, c) + j;

    let mut f = HashMap::new();
    let entries: Vec<(&[usize; 10], &C64)> = bp.f.iter().collect();
    for &(k1, v1) in &entries {
        for &(k2, v2) in &entries {
            let [a, b, c, d, e, ff, i, j, k, l] = *k1;
            let [ab, bb, cb, db, eb, fb, i2, j2, k2_, l2] = *k2;
            f.insert(
                [
                    pair(a, ab),
                    pair(b, bb),
                    pair(c, cb),
                    pair(d, db),
                    pair(e, eb),
                    pair(ff, fb),
                    flat(i, i2, ab, bb, eb),
                    flat(j, j2, eb, cb, db),
                    flat(k, k2_, bb, cb, fb),
                    flat(l, l2, ab, fb, db),
                ],
                v1 * v2,
            );
        }
    }

    // the reversed factor braids with c^{-1}_{b,a}, whose block is (R^{ba})^{-1}
    let mut r = HashMap::new();
    for a in 0..n {
        for b in 0..n {
            for c in base.channels(a, b) {
                let fwd = base.r(a, b, c).expect("R block");
                for ab in 0..n {
                    for bb in 0..n {
                        for cb in base.channels(ab, bb) {
                            let rev = inverse(base.r(bb, ab, cb).expect("R block"))
                                .expect("invertible R");
                            for i in 0..fwd.nrows() {
                                for j in 0..fwd.ncols() {
                                    for i2 in 0..rev.nrows() {
                                        for j2 in 0..rev.ncols() {
                                            let v = fwd[(i, j)] * rev[(i2, j2)];
                                            if v.norm() > 0.0 {
                                                r.insert(
                                                    [
                                                        pair(a, ab),
                                                        pair(b, bb),
                                                        pair(c, cb),
                                                        flat(i, i2, ab, bb, cb),
                                                        flat(j, j2, bb, ab, cb),
                                                    ],
                                                    v,
                                                );
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    let parts = CategoryParts {
        name: format!("{}-double", bp.name),
        labels,
        unit: pair(base.unit(), base.unit()),
        dual,
        fusion,
        dims,
        twists,
        fs,
        cmod8: 0.0,
        cmod24: Some(0.0),
        f,
        r,
    };
    DoubledCategory {
        base: CategoryData::from_parts(bp).expect("base rebuilds from its parts"),
        cat: CategoryData::from_parts(parts).expect("double assembles from consistent parts"),
    }
}

/// 𝓒^rev: braiding c^{-1}_{b,a}, twists inverted, central charge negated.
pub fn reversed(base: &CategoryData) -> CategoryData {
    let mut p = base.parts();
    let n = base.rank();
    let mut r = HashMap::new();
    for a in 0..n {
        for b in 0..n {
            for c in base.channels(a, b) {
                let m = inverse(base.r(b, a, c).expect("R block")).expect("invertible R");
                for i in 0..m.nrows() {
                    for j in 0..m.ncols() {
                        if m[(i, j)].norm() > 0.0 {
                            r.insert([a, b, c, i, j], m[(i, j)]);
                        }
                    }
                }
            }
        }
    }
    p.r = r;
    p.twists = p.twists.iter().map(|t| t.inv()).collect();
    p.cmod8 = -p.cmod8;
    p.cmod24 = p.cmod24.map(|c| -c);
    p.name = format!("{}-rev", p.name);
    CategoryData::from_parts(p).expect("reversal keeps the data consistent")
}

/// S of the double against S ⊗ S^rev, entrywise.
pub fn check_s_factorization(d: &DoubledCategory, tol: f64) -> CheckReport {
    timed(|| {
        let s = s_action(&d.base, d.base.unit());
        let srev = s_action(&reversed(&d.base), d.base.unit());
        let sd = s_action(&d.cat, d.cat.unit());
        CheckReport::new("s-factorization", max_abs_diff(&sd, &kron(&s, &srev)), tol)
    })
}

/// Axioms, modular relations and S factorization of the double.
pub fn check_double(base: &CategoryData, tol: f64) -> CheckReport {
    let d = build_double(base);
    let mut parts = validate_category(&d.cat, tol).parts;
    parts.push(check_s_factorization(&d, tol));
    CheckReport::aggregate(format!("double[{}]", base.name), tol, parts)
}

impl DoubledCategory {
    pub fn base_rank(&self) -> usize {
        self.base.rank()
    }

    pub fn pair(&self, a: Label, abar: Label) -> Label {
        a * self.base_rank() + abar
    }

    pub fn split(&self, x: Label) -> (Label, Label) {
        (x / self.base_rank(), x % self.base_rank())
    }

    /// The diagonal label (a, a').
    pub fn diagonal(&self, a: Label) -> Label {
        self.pair(a, self.base.dual(a))
    }

    pub fn t_word(&self, w: &[Label]) -> Vec<Label> {
        let mut out: Vec<Label> = w.iter().map(|&x| self.split(x).0).collect();
        out.extend(w.iter().map(|&x| self.split(x).1));
        out
    }

    pub fn t_obj(&self, x: &Obj) -> Obj {
        Obj(x.0.iter().map(|w| self.t_word(w)).collect())
    }

    /// Split a doubled tree into its two base trees.
    fn split_tree(&self, w: &[Label], t: &FusionTree) -> (FusionTree, FusionTree) {
        let e = self.cat.unit();
        let mut l = FusionTree {
            y: vec![],
            mu: vec![],
        };
        let mut r = FusionTree {
            y: vec![],
            mu: vec![],
        };
        for k in 0..t.y.len() {
            let (y1, y2) = self.split(t.y[k]);
            let (m1, m2) = if k == 0 {
                (0, 0)
            } else {
                let (_, prev) = self.split(t.at(k, e));
                let (_, x) = self.split(w[k]);
                let nb = self.base.n(prev, x, y2);
                (t.mu[k] / nb, t.mu[k] % nb)
            };
            l.y.push(y1);
            l.mu.push(m1);
            r.y.push(y2);
            r.mu.push(m2);
        }
        (l, r)
    }

    /// T on morphisms: the doubled tree pair (r, s) goes to (r_L ⊗ r_R) ∘ (s_L ⊗ s_R).
    pub fn t_morphism(&self, h: &HomMorphism) -> HomMorphism {
        let base = &self.base;
        let (src_l, src_r) = self.halves(&h.src);
        let (tgt_l, tgt_r) = self.halves(&h.tgt);
        let mut out = HomMorphism::zero(base, &self.t_word(&h.src), &self.t_word(&h.tgt));
        for (&cc, m) in &h.blocks {
            let (c, cb) = self.split(cc);
            let sb = self.cat.trees(&h.src, cc);
            let tb = self.cat.trees(&h.tgt, cc);
            let (sl, sr) = (base.trees(&src_l, c), base.trees(&src_r, cb));
            let (tl, tr) = (base.trees(&tgt_l, c), base.trees(&tgt_r, cb));
            for (row, tt) in tb.trees.iter().enumerate() {
                let (rl, rr) = self.split_tree(&h.tgt, tt);
                for (col, st) in sb.trees.iter().enumerate() {
                    let v = m[(row, col)];
                    if v.norm() == 0.0 {
                        continue;
                    }
                    let (ql, qr) = self.split_tree(&h.src, st);
                    let mut left = HomMorphism::zero(base, &src_l, &tgt_l);
                    left.blocks.get_mut(&c).expect("charge")
                        [(tl.position(&rl), sl.position(&ql))] = C64::new(1.0, 0.0);
                    let mut right = HomMorphism::zero(base, &src_r, &tgt_r);
                    right.blocks.get_mut(&cb).expect("charge")
                        [(tr.position(&rr), sr.position(&qr))] = C64::new(1.0, 0.0);
                    out = out
                        .add(&tensor(base, &left, &right).scale(v))
                        .expect("same shape");
                }
            }
        }
        out
    }

    fn halves(&self, w: &[Label]) -> (Vec<Label>, Vec<Label>) {
        (
            w.iter().map(|&x| self.split(x).0).collect(),
            w.iter().map(|&x| self.split(x).1).collect(),
        )
    }

    pub fn t_gen(&self, g: &GenMorphism) -> GenMorphism {
        let mut out = GenMorphism::zero(&self.t_obj(&g.src), &self.t_obj(&g.tgt));
        for (&(t, s), h) in &g.entries {
            out.put(t, s, self.t_morphism(h))
                .expect("T preserves shapes");
        }
        out
    }

    /// φ₂ : T(w1) ⊗ T(w2) → T(w1 ⊗ w2), crossing ȳ1 under x2 by c⁻¹_{x2,ȳ1}.
    pub fn phi2(&self, w1: &[Label], w2: &[Label]) -> Result<HomMorphism> {
        let base = &self.base;
        let (x1, y1) = self.halves(w1);
        let (x2, y2) = self.halves(w2);
        let cross = braid_words(base, &y1, &x2, true)?;
        let left = tensor(base, &HomMorphism::identity(base, &x1), &cross);
        Ok(tensor(base, &left, &HomMorphism::identity(base, &y2)))
    }

    pub fn phi2_obj(&self, x: &Obj, y: &Obj) -> Result<GenMorphism> {
        let src = self.t_obj(x).tensor(&self.t_obj(y));
        let tgt = self.t_obj(&x.tensor(y));
        let mut out = GenMorphism::zero(&src, &tgt);
        for (i, w1) in x.0.iter().enumerate() {
            for (j, w2) in y.0.iter().enumerate() {
                let k = i * y.len() + j;
                out.put(k, k, self.phi2(w1, w2)?)?;
            }
        }
        Ok(out)
    }

    pub fn summary(&self) -> String {
        format!(
            "{}: {} labels, D^2 = {:.12}, cmod8 = 0",
            self.cat.name,
            self.cat.rank(),
            self.cat.dsq()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::engine::{generator, Generator};
    use crate::validate::validate_category;

    #[test]
    fn fibonacci_double_shape() {
        let d = build_double(&builtins::fibonacci());
        assert_eq!(d.cat.rank(), 4);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((d.cat.dsq() - (2.0 + phi).powi(2)).abs() < 1e-12);
        let tt = d.diagonal(1);
        assert!((d.cat.theta(tt) - C64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn double_s_factorizes() {
        for cat in builtins::all() {
            let d = build_double(&cat);
            let r = check_s_factorization(&d, 1e-9);
            assert!(r.pass, "{}", r.line());
        }
    }

    #[test]
    fn reversal_is_an_involution_on_twists() {
        let cat = builtins::ising();
        let rr = reversed(&reversed(&cat));
        for a in 0..cat.rank() {
            assert!((rr.theta(a) - cat.theta(a)).norm() < 1e-15);
            for b in 0..cat.rank() {
                for c in cat.channels(a, b) {
                    assert!(max_abs_diff(rr.r(a, b, c).unwrap(), cat.r(a, b, c).unwrap()) < 1e-14);
                }
            }
        }
    }

    #[test]
    fn trivial_double_is_trivial() {
        let d = build_double(&builtins::trivial());
        assert_eq!(d.cat.rank(), 1);
        assert!(validate_category(&d.cat, 1e-9).pass);
    }

    #[test]
    fn t_of_unit_is_unit() {
        let d = build_double(&builtins::ising());
        let e = d.cat.unit();
        let h = HomMorphism::identity(&d.cat, &[e]);
        let t = d.t_morphism(&h);
        assert_eq!(t.src, vec![0, 0]);
        assert!(
            t.max_diff(&HomMorphism::identity(&d.base, &[0, 0]))
                .unwrap()
                < 1e-15
        );
    }

    #[test]
    fn t_is_monoidal_on_vertices() {
        let d = build_double(&builtins::ising());
        let s = 2;
        let v = |a, b, c, i| generator(&d.cat, &Generator::BasisVertex(a, b, c, i)).unwrap();
        let f = v(d.pair(s, s), d.pair(s, 1), d.pair(1, s), 0);
        let g = v(d.pair(s, 0), d.pair(1, s), d.pair(s, s), 0);
        let lhs = d
            .t_morphism(&tensor(&d.cat, &f, &g))
            .compose(&d.phi2(&f.src, &g.src).unwrap())
            .unwrap();
        let rhs = d
            .phi2(&f.tgt, &g.tgt)
            .unwrap()
            .compose(&tensor(&d.base, &d.t_morphism(&f), &d.t_morphism(&g)))
            .unwrap();
        assert!(lhs.max_diff(&rhs).unwrap() < 1e-10);
    }
}
