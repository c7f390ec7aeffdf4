//! Fusion-tree bases and linear maps between hom-spaces of words of simples.
//!
//! A tree over the word (x1..xn) with charge c is left-associated: y1 = x1 and
//! vertices (y_{k-1}, x_k -> y_k, mu_k), with the virtual vertex (e, x1 -> x1, 0).
//! A `HomMorphism` stores, per charge, the matrix whose columns are images of the
//! source splitting trees expanded in the target splitting trees.

use std::collections::{BTreeMap, HashMap};

use crate::category::{CategoryData, Label};
use crate::error::{Error, Result};
use crate::numeric::{inverse, max_abs, zeros, Mat, C64};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FusionTree {
    /// y[k] is the charge after k+1 leaves.
    pub y: Vec<Label>,
    /// mu[k] is the multiplicity index of the vertex producing y[k].
    pub mu: Vec<usize>,
}

impl FusionTree {
    /// Charge after the first k leaves (k = 0 is the unit).
    pub fn at(&self, k: usize, unit: Label) -> Label {
        if k == 0 {
            unit
        } else {
            self.y[k - 1]
        }
    }
}

#[derive(Clone, Debug)]
pub struct TreeBasis {
    pub word: Vec<Label>,
    pub charge: Label,
    pub trees: Vec<FusionTree>,
    pub index: HashMap<FusionTree, usize>,
}

impl TreeBasis {
    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn position(&self, t: &FusionTree) -> usize {
        self.index[t]
    }
}

pub(crate) fn build_tree_basis(cat: &CategoryData, word: &[Label], charge: Label) -> TreeBasis {
    let e = cat.unit();
    let mut trees = Vec::new();
    if word.is_empty() {
        if charge == e {
            trees.push(FusionTree {
                y: vec![],
                mu: vec![],
            });
        }
    } else {
        let mut y = vec![word[0]];
        let mut mu = vec![0];
        extend(cat, word, charge, &mut y, &mut mu, &mut trees);
    }
    trees.sort();
    let index = trees
        .iter()
        .enumerate()
        .map(|(i, t)| (t.clone(), i))
        .collect();
    TreeBasis {
        word: word.to_vec(),
        charge,
        trees,
        index,
    }
}

fn extend(
    cat: &CategoryData,
    word: &[Label],
    charge: Label,
    y: &mut Vec<Label>,
    mu: &mut Vec<usize>,
    out: &mut Vec<FusionTree>,
) {
    let k = y.len();
    if k == word.len() {
        if y[k - 1] == charge {
            out.push(FusionTree {
                y: y.clone(),
                mu: mu.clone(),
            });
        }
        return;
    }
    let prev = y[k - 1];
    for z in 0..cat.rank() {
        for m in 0..cat.n(prev, word[k], z) {
            y.push(z);
            mu.push(m);
            extend(cat, word, charge, y, mu, out);
            y.pop();
            mu.pop();
        }
    }
}

/// Enumerate the left-associated trees of `word` with total charge `charge`.
pub fn enumerate_trees(cat: &CategoryData, word: &[Label], charge: Label) -> Vec<FusionTree> {
    cat.trees(word, charge).trees.clone()
}

/// Charges at which both words have trees.
fn common_charges(cat: &CategoryData, a: &[Label], b: &[Label]) -> Vec<Label> {
    (0..cat.rank())
        .filter(|&c| !cat.trees(a, c).is_empty() && !cat.trees(b, c).is_empty())
        .collect()
}

#[derive(Clone, Debug)]
pub struct HomMorphism {
    pub src: Vec<Label>,
    pub tgt: Vec<Label>,
    /// Missing charges are zero.
    pub blocks: BTreeMap<Label, Mat>,
}

impl HomMorphism {
    pub fn zero(cat: &CategoryData, src: &[Label], tgt: &[Label]) -> Self {
        let blocks = common_charges(cat, src, tgt)
            .into_iter()
            .map(|c| (c, zeros(cat.trees(tgt, c).len(), cat.trees(src, c).len())))
            .collect();
        HomMorphism {
            src: src.to_vec(),
            tgt: tgt.to_vec(),
            blocks,
        }
    }

    pub fn identity(cat: &CategoryData, word: &[Label]) -> Self {
        let mut h = Self::zero(cat, word, word);
        for m in h.blocks.values_mut() {
            m.fill_with_identity();
        }
        h
    }

    /// The scalar multiple of the identity of the empty word.
    pub fn scalar(cat: &CategoryData, v: C64) -> Self {
        let mut h = Self::identity(cat, &[]);
        h.blocks.values_mut().for_each(|m| m[(0, 0)] = v);
        h
    }

    /// Value of a closed diagram.
    pub fn scalar_value(&self) -> Option<C64> {
        if !self.src.is_empty() || !self.tgt.is_empty() {
            return None;
        }
        Some(
            self.blocks
                .values()
                .next()
                .map(|m| m[(0, 0)])
                .unwrap_or_default(),
        )
    }

    pub fn block(&self, c: Label) -> Option<&Mat> {
        self.blocks.get(&c)
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &HomMorphism) -> Result<HomMorphism> {
        if self.src != g.tgt {
            return Err(Error::Type(format!(
                "cannot compose: source {:?} does not match target {:?}",
                self.src, g.tgt
            )));
        }
        let mut blocks = BTreeMap::new();
        for (&c, gm) in &g.blocks {
            if let Some(fm) = self.blocks.get(&c) {
                blocks.insert(c, fm * gm);
            }
        }
        // charges with no trees in the middle word are absent, i.e. zero
        Ok(HomMorphism {
            src: g.src.clone(),
            tgt: self.tgt.clone(),
            blocks,
        })
    }

    pub fn add(&self, other: &HomMorphism) -> Result<HomMorphism> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (c, m) in &other.blocks {
            match out.blocks.get_mut(c) {
                Some(x) => *x += m,
                None => {
                    out.blocks.insert(*c, m.clone());
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &HomMorphism) -> Result<HomMorphism> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C64) -> HomMorphism {
        let mut out = self.clone();
        for m in out.blocks.values_mut() {
            *m *= s;
        }
        out
    }

    fn check_same_shape(&self, other: &HomMorphism) -> Result<()> {
        if self.src != other.src || self.tgt != other.tgt {
            return Err(Error::Type(format!(
                "shape mismatch: {:?}->{:?} vs {:?}->{:?}",
                self.src, self.tgt, other.src, other.tgt
            )));
        }
        Ok(())
    }

    /// Largest entrywise difference; charges missing on one side count as zero.
    pub fn max_diff(&self, other: &HomMorphism) -> Result<f64> {
        self.check_same_shape(other)?;
        let mut worst: f64 = 0.0;
        for (c, m) in &self.blocks {
            worst = worst.max(match other.blocks.get(c) {
                Some(o) => max_abs(&(m - o)),
                None => max_abs(m),
            });
        }
        for (c, o) in &other.blocks {
            if !self.blocks.contains_key(c) {
                worst = worst.max(max_abs(o));
            }
        }
        Ok(worst)
    }

    pub fn norm_max(&self) -> f64 {
        self.blocks.values().map(max_abs).fold(0.0, f64::max)
    }

    /// Quantum trace for an endomorphism: Σ_c dim c · tr(M_c).
    pub fn qtrace(&self, cat: &CategoryData) -> Result<C64> {
        if self.src != self.tgt {
            return Err(Error::Type("trace of a non-endomorphism".into()));
        }
        Ok(self
            .blocks
            .iter()
            .map(|(c, m)| m.trace() * cat.dim(*c))
            .sum())
    }

    /// Row vector of a morphism into a single simple: fusion coordinates at that charge.
    pub fn fusion_coords(&self, cat: &CategoryData) -> Option<Vec<C64>> {
        if self.tgt.len() != 1 {
            return None;
        }
        let c = self.tgt[0];
        let n = cat.trees(&self.src, c).len();
        Some(match self.blocks.get(&c) {
            Some(m) => (0..n).map(|j| m[(0, j)]).collect(),
            None => vec![C64::default(); n],
        })
    }

    /// Inverse of `fusion_coords`.
    pub fn from_fusion_coords(
        cat: &CategoryData,
        src: &[Label],
        c: Label,
        v: &[C64],
    ) -> HomMorphism {
        let mut h = HomMorphism::zero(cat, src, &[c]);
        if let Some(m) = h.blocks.get_mut(&c) {
            for (j, x) in v.iter().enumerate() {
                m[(0, j)] = *x;
            }
        }
        h
    }
}

/// Express the product tree (t1 over w1 at p) ⊗ (t2 over w2 at r) fused by (p,r->c,nu)
/// in the left-associated basis of w1·w2.
fn product_to_left(
    cat: &CategoryData,
    t1: &FusionTree,
    p: Label,
    w2: &[Label],
    t2: &FusionTree,
    nu: usize,
    c: Label,
) -> Vec<(FusionTree, C64)> {
    let e = cat.unit();
    let m = w2.len();
    if m == 0 {
        return if c == p {
            vec![(t1.clone(), C64::new(1.0, 0.0))]
        } else {
            vec![]
        };
    }
    let r = t2.y[m - 1];
    let r_prev = t2.at(m - 1, e);
    let z = w2[m - 1];
    let mu = t2.mu[m - 1];
    let blk = match cat.fblock(p, r_prev, z, c) {
        Some(b) => b,
        None => return vec![],
    };
    let s = match blk.right_index.get(&(r, mu, nu)) {
        Some(&s) => s,
        None => return vec![],
    };
    let t2_short = FusionTree {
        y: t2.y[..m - 1].to_vec(),
        mu: t2.mu[..m - 1].to_vec(),
    };
    let mut out = Vec::new();
    for (li, &(x, alpha, beta)) in blk.left.iter().enumerate() {
        let coef = blk.inv[(s, li)];
        if coef.norm() == 0.0 {
            continue;
        }
        for (mut t, v) in product_to_left(cat, t1, p, &w2[..m - 1], &t2_short, alpha, x) {
            t.y.push(c);
            t.mu.push(beta);
            out.push((t, v * coef));
        }
    }
    out
}

type ProductKey = (Label, usize, Label, usize, usize);

/// Product basis (p, t1, r, t2, nu) and its expansion matrix in left trees of w1·w2 at c.
fn product_basis(
    cat: &CategoryData,
    w1: &[Label],
    w2: &[Label],
    c: Label,
) -> (Vec<ProductKey>, Mat) {
    let mut keys = Vec::new();
    for p in 0..cat.rank() {
        let b1 = cat.trees(w1, p);
        if b1.is_empty() {
            continue;
        }
        for r in 0..cat.rank() {
            let nn = cat.n(p, r, c);
            if nn == 0 {
                continue;
            }
            let b2 = cat.trees(w2, r);
            for i1 in 0..b1.len() {
                for i2 in 0..b2.len() {
                    for nu in 0..nn {
                        keys.push((p, i1, r, i2, nu));
                    }
                }
            }
        }
    }
    let mut word = w1.to_vec();
    word.extend_from_slice(w2);
    let basis = cat.trees(&word, c);
    let mut m = zeros(basis.len(), keys.len());
    for (col, &(p, i1, r, i2, nu)) in keys.iter().enumerate() {
        let t1 = &cat.trees(w1, p).trees[i1];
        let t2 = &cat.trees(w2, r).trees[i2];
        for (t, v) in product_to_left(cat, t1, p, w2, t2, nu, c) {
            m[(basis.position(&t), col)] += v;
        }
    }
    (keys, m)
}

/// `f ⊗ id_w`.
pub fn tensor_id_right(cat: &CategoryData, f: &HomMorphism, w: &[Label]) -> HomMorphism {
    let e = cat.unit();
    let n1 = f.src.len();
    let mut src = f.src.clone();
    src.extend_from_slice(w);
    let mut tgt = f.tgt.clone();
    tgt.extend_from_slice(w);
    let mut out = HomMorphism::zero(cat, &src, &tgt);
    for (&c, blockm) in out.blocks.iter_mut() {
        let sb = cat.trees(&src, c);
        let tb = cat.trees(&tgt, c);
        for (col, t) in sb.trees.iter().enumerate() {
            let p = t.at(n1, e);
            let fm = match f.blocks.get(&p) {
                Some(m) => m,
                None => continue,
            };
            let prefix = FusionTree {
                y: t.y[..n1].to_vec(),
                mu: t.mu[..n1].to_vec(),
            };
            let pb = cat.trees(&f.src, p);
            let s = pb.position(&prefix);
            let qb = cat.trees(&f.tgt, p);
            for (row, tp) in qb.trees.iter().enumerate() {
                let v = fm[(row, s)];
                if v.norm() == 0.0 {
                    continue;
                }
                let mut nt = tp.clone();
                nt.y.extend_from_slice(&t.y[n1..]);
                nt.mu.extend_from_slice(&t.mu[n1..]);
                blockm[(tb.position(&nt), col)] += v;
            }
        }
    }
    out
}

/// `id_w ⊗ g`.
pub fn tensor_id_left(cat: &CategoryData, w: &[Label], g: &HomMorphism) -> HomMorphism {
    if w.is_empty() {
        return g.clone();
    }
    let mut src = w.to_vec();
    src.extend_from_slice(&g.src);
    let mut tgt = w.to_vec();
    tgt.extend_from_slice(&g.tgt);
    let mut out = HomMorphism::zero(cat, &src, &tgt);
    for (&c, blockm) in out.blocks.iter_mut() {
        let (skeys, ps) = product_basis(cat, w, &g.src, c);
        let (tkeys, pt) = product_basis(cat, w, &g.tgt, c);
        let ps_inv = inverse(&ps).expect("product basis change is invertible");
        let tindex: HashMap<ProductKey, usize> =
            tkeys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let mut gm = zeros(tkeys.len(), skeys.len());
        for (col, &(p, i1, r, i2, nu)) in skeys.iter().enumerate() {
            if let Some(m) = g.blocks.get(&r) {
                for row2 in 0..m.nrows() {
                    let v = m[(row2, i2)];
                    if v.norm() == 0.0 {
                        continue;
                    }
                    if let Some(&row) = tindex.get(&(p, i1, r, row2, nu)) {
                        gm[(row, col)] += v;
                    }
                }
            }
        }
        *blockm = pt * gm * ps_inv;
    }
    out
}

/// Horizontal juxtaposition `f ⊗ g`.
pub fn tensor(cat: &CategoryData, f: &HomMorphism, g: &HomMorphism) -> HomMorphism {
    let left = tensor_id_right(cat, f, &g.tgt);
    let right = tensor_id_left(cat, &f.src, g);
    left.compose(&right).expect("tensor shapes agree")
}

/// Apply `op` to the strands `word[k..k+|op.src|]`, identity elsewhere.
pub fn place(
    cat: &CategoryData,
    word: &[Label],
    k: usize,
    op: &HomMorphism,
) -> Result<HomMorphism> {
    let s = op.src.len();
    if k + s > word.len() || word[k..k + s] != op.src[..] {
        return Err(Error::Type(format!(
            "operator on {:?} does not fit word {:?} at position {}",
            op.src, word, k
        )));
    }
    if s <= 2 && op.tgt.len() <= 2 {
        return Ok(apply_local(cat, word, k, op));
    }
    let right = tensor_id_right(cat, op, &word[k + s..]);
    Ok(tensor_id_left(cat, &word[..k], &right))
}

/// Splice a local operator with at most two legs on each side into a word, using
/// F-moves to bring the affected leaves under a single vertex.
fn apply_local(cat: &CategoryData, word: &[Label], k: usize, op: &HomMorphism) -> HomMorphism {
    let e = cat.unit();
    let s = op.src.len();
    let t = op.tgt.len();
    let mut tgt_word = word[..k].to_vec();
    tgt_word.extend_from_slice(&op.tgt);
    tgt_word.extend_from_slice(&word[k + s..]);
    let mut out = HomMorphism::zero(cat, word, &tgt_word);
    for (&c, blockm) in out.blocks.iter_mut() {
        let sb = cat.trees(word, c);
        let tb = cat.trees(&tgt_word, c);
        for (col, tree) in sb.trees.iter().enumerate() {
            let p = tree.at(k, e);
            let q = tree.at(k + s, e);
            // (f, local source index, outer vertex index, coefficient)
            let mut right: Vec<(Label, usize, usize, C64)> = Vec::new();
            match s {
                0 => right.push((e, 0, 0, C64::new(1.0, 0.0))),
                1 => right.push((word[k], 0, tree.mu[k], C64::new(1.0, 0.0))),
                _ => {
                    let m = tree.y[k];
                    let key = (m, tree.mu[k], tree.mu[k + 1]);
                    let blk = cat
                        .fblock(p, word[k], word[k + 1], q)
                        .expect("tree implies F block");
                    let li = blk.left_index[&key];
                    for (ri, &(f, kk, l)) in blk.right.iter().enumerate() {
                        let v = blk.m[(li, ri)];
                        if v.norm() != 0.0 {
                            right.push((f, kk, l, v));
                        }
                    }
                }
            }
            for (f, sigma, delta, coef) in right {
                let lm = match op.blocks.get(&f) {
                    Some(m) => m,
                    None => continue,
                };
                for tau in 0..lm.nrows() {
                    let val = lm[(tau, sigma)] * coef;
                    if val.norm() == 0.0 {
                        continue;
                    }
                    let mut y = tree.y[..k].to_vec();
                    let mut mu = tree.mu[..k].to_vec();
                    let mut terms: Vec<(Vec<Label>, Vec<usize>, C64)> = Vec::new();
                    match t {
                        0 => {
                            if f != e || q != p || delta != 0 {
                                continue;
                            }
                            terms.push((y.clone(), mu.clone(), val));
                        }
                        1 => {
                            y.push(q);
                            mu.push(delta);
                            terms.push((y.clone(), mu.clone(), val));
                        }
                        _ => {
                            let blk = match cat.fblock(p, op.tgt[0], op.tgt[1], q) {
                                Some(b) => b,
                                None => continue,
                            };
                            let ltree = &cat.trees(&op.tgt, f).trees[tau];
                            let ri = blk.right_index[&(f, ltree.mu[1], delta)];
                            for (li, &(m2, a2, b2)) in blk.left.iter().enumerate() {
                                let w = blk.inv[(ri, li)];
                                if w.norm() == 0.0 {
                                    continue;
                                }
                                let mut y2 = y.clone();
                                let mut mu2 = mu.clone();
                                y2.push(m2);
                                mu2.push(a2);
                                y2.push(q);
                                mu2.push(b2);
                                terms.push((y2, mu2, val * w));
                            }
                        }
                    }
                    for (mut y, mut mu, v) in terms {
                        y.extend_from_slice(&tree.y[k + s..]);
                        mu.extend_from_slice(&tree.mu[k + s..]);
                        let nt = FusionTree { y, mu };
                        blockm[(tb.position(&nt), col)] += v;
                    }
                }
            }
        }
    }
    out
}
