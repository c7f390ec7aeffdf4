//! Modular data and the graphical S and T actions on ⊕_{a1} hom(a⊗a1, a1).

use std::f64::consts::PI;

use crate::category::{CategoryData, Label};
use crate::engine::{generator, then, then_gen, Generator};
use crate::hom::HomMorphism;
use crate::numeric::{eye, inverse, max_abs_diff, mod8_centered, re, zeros, Mat, C64};
use crate::operators::{operator_matrix, tilde_a0};
use crate::report::{timed, CheckReport};

/// Basis of ⊕_{a1} V_{a a1}^{a1}: pairs (a1, multiplicity index).
pub fn block_basis(cat: &CategoryData, a: Label) -> Vec<(Label, usize)> {
    (0..cat.rank())
        .flat_map(|a1| (0..cat.n(a, a1, a1)).map(move |i| (a1, i)))
        .collect()
}

fn index_of(basis: &[(Label, usize)], a1: Label, i: usize) -> usize {
    basis
        .iter()
        .position(|&x| x == (a1, i))
        .expect("basis element")
}

/// Which closed-loop diagram to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Loop {
    Forward,
    Inverse,
}

/// S(a) applied to m : a⊗a1 → a1, returning its components in hom(a⊗a2, a2) for each a2.
///
/// The a1 strand is closed into a loop through i_{a1} and e'_{a1}; its dual leg is
/// linked with the a2 strand by a double crossing, weighted by dim a2 / D.
pub fn s_apply(
    cat: &CategoryData,
    m: &HomMorphism,
    inverse_loop: bool,
) -> Vec<(Label, HomMorphism)> {
    let kind = if inverse_loop {
        Loop::Inverse
    } else {
        Loop::Forward
    };
    let a = m.src[0];
    let a1 = m.tgt[0];
    let a1d = cat.dual(a1);
    let d = cat.big_d();
    (0..cat.rank())
        .map(|a2| {
            let start = HomMorphism::identity(cat, &[a, a2]);
            let h = then_gen(cat, &start, 1, Generator::Cup(a1)).unwrap();
            let h = then(cat, &h, 0, m).unwrap();
            let (g1, g2) = match kind {
                Loop::Forward => (Generator::Braid(a1d, a2), Generator::Braid(a2, a1d)),
                Loop::Inverse => (Generator::BraidInv(a1d, a2), Generator::BraidInv(a2, a1d)),
            };
            let h = then_gen(cat, &h, 1, g1).unwrap();
            let h = then_gen(cat, &h, 1, g2).unwrap();
            let h = then_gen(cat, &h, 0, Generator::CapL(a1)).unwrap();
            (a2, h.scale(re(cat.dim(a2)) / d))
        })
        .collect()
}

/// S*(a) applied to a splitting map f : a1 → a⊗a1, the vertical mirror of `s_apply`.
pub fn s_dual_apply(cat: &CategoryData, f: &HomMorphism) -> Vec<(Label, HomMorphism)> {
    let a1 = f.src[0];
    let a1d = cat.dual(a1);
    let d = cat.big_d();
    (0..cat.rank())
        .map(|a2| {
            let start = HomMorphism::identity(cat, &[a2]);
            let h = then_gen(cat, &start, 0, Generator::Cup(a1)).unwrap();
            let h = then_gen(cat, &h, 1, Generator::BraidInv(a1d, a2)).unwrap();
            let h = then_gen(cat, &h, 1, Generator::BraidInv(a2, a1d)).unwrap();
            let h = then(cat, &h, 0, f).unwrap();
            let h = then_gen(cat, &h, 1, Generator::CapL(a1)).unwrap();
            (a2, h.scale(re(cat.dim(a2)) / d))
        })
        .collect()
}

/// Matrix of S(a) (or of its inverse diagram) on the basis `block_basis(a)`;
/// column j is the image of the j-th basis vertex.
pub fn s_action(cat: &CategoryData, a: Label) -> Mat {
    s_matrix(cat, a, false)
}

pub fn s_inverse_action(cat: &CategoryData, a: Label) -> Mat {
    s_matrix(cat, a, true)
}

fn s_matrix(cat: &CategoryData, a: Label, inverse_loop: bool) -> Mat {
    let basis = block_basis(cat, a);
    let mut s = zeros(basis.len(), basis.len());
    for (col, &(a1, i)) in basis.iter().enumerate() {
        let v = generator(cat, &Generator::BasisVertex(a, a1, a1, i)).unwrap();
        for (a2, img) in s_apply(cat, &v, inverse_loop) {
            let coords = img.fusion_coords(cat).unwrap();
            for (j, x) in coords.into_iter().enumerate() {
                s[(index_of(&basis, a2, j), col)] += x;
            }
        }
    }
    s
}

/// Matrices (P, Q) of S(a) on basis vertices and S*(a) on the biorthogonal splitting
/// vertices. Compatibility of the two actions with the pairing reads PᵀQ = I.
pub fn s_dual_actions(cat: &CategoryData, a: Label) -> (Mat, Mat) {
    let basis = block_basis(cat, a);
    let p = s_action(cat, a);
    let mut q = zeros(basis.len(), basis.len());
    for (col, &(a1, i)) in basis.iter().enumerate() {
        let f = generator(cat, &Generator::DualVertex(a, a1, a1, i)).unwrap();
        for (a2, img) in s_dual_apply(cat, &f) {
            // coordinates against the splitting basis: pair with each fusion vertex
            for j in 0..cat.n(a, a2, a2) {
                let e = generator(cat, &Generator::BasisVertex(a, a2, a2, j)).unwrap();
                let x = e
                    .compose(&img)
                    .unwrap()
                    .block(a2)
                    .map_or(C64::default(), |m| m[(0, 0)]);
                q[(index_of(&basis, a2, j), col)] += x;
            }
        }
    }
    (p, q)
}

/// Ã₀ as a matrix on ⊕_{a1} V_{a a1}^{a1}; it sends the a1 block to the a1' block.
pub fn a0_action(cat: &CategoryData, a: Label) -> Mat {
    let basis = block_basis(cat, a);
    let mut m = zeros(basis.len(), basis.len());
    for a1 in 0..cat.rank() {
        if cat.n(a, a1, a1) == 0 {
            continue;
        }
        let blk = operator_matrix(cat, a, a1, a1, tilde_a0).unwrap();
        let a1d = cat.dual(a1);
        for i in 0..blk.ncols() {
            for j in 0..blk.nrows() {
                m[(index_of(&basis, a1d, j), index_of(&basis, a1, i))] = blk[(j, i)];
            }
        }
    }
    m
}

/// T on ⊕_{a1} V_{a a1}^{a1}: e^{2πi(h_{a1} - c/24)} = θ_{a1}⁻¹ e^{-2πic/24}.
pub fn t_action(cat: &CategoryData, a: Label, c: f64) -> Mat {
    let basis = block_basis(cat, a);
    let phase = C64::from_polar(1.0, -2.0 * PI * c / 24.0);
    let mut t = zeros(basis.len(), basis.len());
    for (k, &(a1, _)) in basis.iter().enumerate() {
        t[(k, k)] = cat.theta(a1).inv() * phase;
    }
    t
}

#[derive(Clone, Debug)]
pub struct ModularData {
    pub labels: Vec<String>,
    pub dsq: f64,
    pub p_plus: C64,
    pub p_minus: C64,
    pub d: C64,
    pub see: C64,
    /// S(a) for each label a, on `block_basis(a)`.
    pub s_blocks: Vec<Mat>,
}

pub fn modular_data(cat: &CategoryData) -> ModularData {
    let d = cat.big_d();
    ModularData {
        labels: cat.labels.clone(),
        dsq: cat.dsq(),
        p_plus: cat.p_plus(),
        p_minus: cat.p_minus(),
        d,
        see: d.inv(),
        s_blocks: (0..cat.rank()).map(|a| s_action(cat, a)).collect(),
    }
}

/// Candidate central-charge lifts for the T-relation. With a stored c mod 24 only that
/// value is used; otherwise the representative of c mod 8 in (-4, 4] and its shifts by ±8,
/// followed by the negated representative and its shifts.
pub fn c_lifts(cat: &CategoryData) -> Vec<f64> {
    if let Some(c) = cat.cmod24 {
        return vec![c];
    }
    let c0 = mod8_centered(cat.cmod8);
    let mut v = vec![c0, c0 + 8.0, c0 - 8.0];
    if c0 != 0.0 {
        v.extend([-c0, -c0 + 8.0, -c0 - 8.0]);
    }
    v
}

/// Residual of (T⁻¹S)³ = S² = T⁻¹S²T over all blocks for a given c.
pub fn st_residual(cat: &CategoryData, s_blocks: &[Mat], c: f64) -> f64 {
    let mut worst: f64 = 0.0;
    for (a, s) in s_blocks.iter().enumerate() {
        let t = t_action(cat, a, c);
        let tinv = inverse(&t).expect("diagonal unimodular");
        let ts = &tinv * s;
        let lhs = &ts * &ts * &ts;
        let s2 = s * s;
        worst = worst.max(max_abs_diff(&lhs, &s2));
        worst = worst.max(max_abs_diff(&(&tinv * &s2 * &t), &s2));
    }
    worst
}

pub fn check_modular_relations(cat: &CategoryData, tol: f64) -> CheckReport {
    let md = modular_data(cat);
    let n = cat.rank();
    let mut parts = Vec::new();

    parts.push(timed(|| {
        let mut worst: f64 = 0.0;
        let mut wit = String::new();
        for a in 0..n {
            let s2 = &md.s_blocks[a] * &md.s_blocks[a];
            let r = max_abs_diff(&s2, &a0_action(cat, a));
            if r >= worst {
                worst = r;
                wit = cat.name_of(a).to_string();
            }
        }
        CheckReport::new("s-squared-is-A0", worst, tol).with_witness(wit)
    }));

    parts.push(timed(|| {
        let mut worst: f64 = 0.0;
        for a in 0..n {
            let si = s_inverse_action(cat, a);
            let prod = &md.s_blocks[a] * &si;
            worst = worst.max(max_abs_diff(&prod, &eye(prod.nrows())));
        }
        CheckReport::new("s-inverse-diagram", worst, tol)
    }));

    parts.push(timed(|| {
        let mut worst: f64 = 0.0;
        for a in 0..n {
            let (p, q) = s_dual_actions(cat, a);
            let g = p.transpose() * q;
            worst = worst.max(max_abs_diff(&g, &eye(g.nrows())));
        }
        CheckReport::new("s-dual-pairing", worst, tol)
    }));

    parts.push(timed(|| {
        let r = (md.see * md.see - re(1.0 / cat.dsq())).norm();
        CheckReport::new("see-squared", r, tol)
    }));

    parts.push(timed(|| {
        let lifts = c_lifts(cat);
        let scored: Vec<(f64, f64)> = lifts
            .iter()
            .map(|&c| (c, st_residual(cat, &md.s_blocks, c)))
            .collect();
        let chosen = scored
            .iter()
            .find(|x| x.1 < tol)
            .or_else(|| scored.iter().min_by(|x, y| x.1.total_cmp(&y.1)))
            .copied()
            .unwrap_or((f64::NAN, f64::INFINITY));
        CheckReport::new("s-t-relation", chosen.1, tol)
            .with_witness(format!("c = {} (lifts tried {:?})", chosen.0, lifts))
    }));

    parts.push(timed(|| {
        let r = (md.p_plus * md.p_minus - md.d * md.d).norm();
        CheckReport::new("p-plus-p-minus", r, tol)
    }));

    CheckReport::aggregate(format!("modular[{}]", cat.name), tol, parts)
}
