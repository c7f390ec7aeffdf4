//! Direct sums of tensor words and morphisms between them.

use std::collections::BTreeMap;

use crate::category::{CategoryData, Label};
use crate::engine::{braid_words, cap_word, capl_word, cup_word, cupl_word, dual_word, twist_word};
use crate::error::{Error, Result};
use crate::hom::{tensor, HomMorphism};
use crate::numeric::{inverse, zeros, Mat, C64};

/// ⊕_k word_k. The empty word is the unit object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obj(pub Vec<Vec<Label>>);

impl Obj {
    pub fn unit() -> Obj {
        Obj(vec![vec![]])
    }

    pub fn simples(labels: &[Label]) -> Obj {
        Obj(labels.iter().map(|&a| vec![a]).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Summand order is lexicographic: index i·|other| + j.
    pub fn tensor(&self, other: &Obj) -> Obj {
        let mut v = Vec::with_capacity(self.len() * other.len());
        for a in &self.0 {
            for b in &other.0 {
                let mut w = a.clone();
                w.extend_from_slice(b);
                v.push(w);
            }
        }
        Obj(v)
    }

    /// Summand k of the dual is the dual word of summand k.
    pub fn dual(&self, cat: &CategoryData) -> Obj {
        Obj(self.0.iter().map(|w| dual_word(cat, w)).collect())
    }
}

/// A matrix of hom-space morphisms; entry (t, s) maps source summand s to target summand t.
#[derive(Clone, Debug)]
pub struct GenMorphism {
    pub src: Obj,
    pub tgt: Obj,
    pub entries: BTreeMap<(usize, usize), HomMorphism>,
}

impl GenMorphism {
    pub fn zero(src: &Obj, tgt: &Obj) -> Self {
        GenMorphism {
            src: src.clone(),
            tgt: tgt.clone(),
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(cat: &CategoryData, x: &Obj) -> Self {
        let mut g = Self::zero(x, x);
        for (k, w) in x.0.iter().enumerate() {
            g.entries.insert((k, k), HomMorphism::identity(cat, w));
        }
        g
    }

    /// A single hom-space morphism viewed between one-summand objects.
    pub fn single(h: HomMorphism) -> Self {
        let mut g = Self::zero(&Obj(vec![h.src.clone()]), &Obj(vec![h.tgt.clone()]));
        g.entries.insert((0, 0), h);
        g
    }

    pub fn entry(&self, t: usize, s: usize) -> Option<&HomMorphism> {
        self.entries.get(&(t, s))
    }

    /// Accumulate `h` into entry (t, s).
    pub fn put(&mut self, t: usize, s: usize, h: HomMorphism) -> Result<()> {
        if h.src != self.src.0[s] || h.tgt != self.tgt.0[t] {
            return Err(Error::Type(format!(
                "entry {:?}->{:?} does not fit summands {:?}->{:?}",
                h.src, h.tgt, self.src.0[s], self.tgt.0[t]
            )));
        }
        match self.entries.get_mut(&(t, s)) {
            Some(x) => *x = x.add(&h)?,
            None => {
                self.entries.insert((t, s), h);
            }
        }
        Ok(())
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &GenMorphism) -> Result<GenMorphism> {
        if self.src != g.tgt {
            return Err(Error::Type(format!(
                "cannot compose: {:?} vs {:?}",
                self.src.0, g.tgt.0
            )));
        }
        let mut out = GenMorphism::zero(&g.src, &self.tgt);
        for (&(t, m), f) in &self.entries {
            for (&(m2, s), h) in &g.entries {
                if m2 == m {
                    out.put(t, s, f.compose(h)?)?;
                }
            }
        }
        Ok(out)
    }

    pub fn tensor(&self, cat: &CategoryData, g: &GenMorphism) -> GenMorphism {
        let src = self.src.tensor(&g.src);
        let tgt = self.tgt.tensor(&g.tgt);
        let gs = g.src.len();
        let gt = g.tgt.len();
        let mut out = GenMorphism::zero(&src, &tgt);
        for (&(t1, s1), f) in &self.entries {
            for (&(t2, s2), h) in &g.entries {
                out.put(t1 * gt + t2, s1 * gs + s2, tensor(cat, f, h))
                    .expect("tensor shapes agree");
            }
        }
        out
    }

    pub fn add(&self, other: &GenMorphism) -> Result<GenMorphism> {
        if self.src != other.src || self.tgt != other.tgt {
            return Err(Error::Type("shape mismatch in sum".into()));
        }
        let mut out = self.clone();
        for (&(t, s), h) in &other.entries {
            out.put(t, s, h.clone())?;
        }
        Ok(out)
    }

    pub fn scale(&self, v: C64) -> GenMorphism {
        let mut out = self.clone();
        for h in out.entries.values_mut() {
            *h = h.scale(v);
        }
        out
    }

    pub fn max_diff(&self, other: &GenMorphism) -> Result<f64> {
        if self.src != other.src || self.tgt != other.tgt {
            return Err(Error::Type("shape mismatch in comparison".into()));
        }
        let mut worst: f64 = 0.0;
        for (k, h) in &self.entries {
            worst = worst.max(match other.entries.get(k) {
                Some(o) => h.max_diff(o)?,
                None => h.norm_max(),
            });
        }
        for (k, o) in &other.entries {
            if !self.entries.contains_key(k) {
                worst = worst.max(o.norm_max());
            }
        }
        Ok(worst)
    }

    pub fn norm_max(&self) -> f64 {
        self.entries
            .values()
            .map(|h| h.norm_max())
            .fold(0.0, f64::max)
    }

    /// Value of an endomorphism of the unit.
    pub fn scalar_value(&self) -> Option<C64> {
        if self.src != Obj::unit() || self.tgt != Obj::unit() {
            return None;
        }
        Some(
            self.entry(0, 0)
                .and_then(|h| h.scalar_value())
                .unwrap_or_default(),
        )
    }

    /// Per charge, the matrix over (summand, tree) pairs.
    fn charge_matrix(
        &self,
        cat: &CategoryData,
        c: Label,
    ) -> (Vec<(usize, usize)>, Vec<(usize, usize)>, Mat) {
        let index = |o: &Obj| -> Vec<(usize, usize)> {
            o.0.iter()
                .enumerate()
                .flat_map(|(k, w)| (0..cat.trees(w, c).len()).map(move |t| (k, t)))
                .collect()
        };
        let rows = index(&self.tgt);
        let cols = index(&self.src);
        let mut m = zeros(rows.len(), cols.len());
        for (&(t, s), h) in &self.entries {
            if let Some(b) = h.block(c) {
                let r0 = rows.iter().position(|x| x.0 == t).unwrap_or(0);
                let c0 = cols.iter().position(|x| x.0 == s).unwrap_or(0);
                for i in 0..b.nrows() {
                    for j in 0..b.ncols() {
                        m[(r0 + i, c0 + j)] += b[(i, j)];
                    }
                }
            }
        }
        (rows, cols, m)
    }

    /// Inverse of an isomorphism, computed charge by charge.
    pub fn inverse(&self, cat: &CategoryData) -> Result<GenMorphism> {
        let mut out = GenMorphism::zero(&self.tgt, &self.src);
        for c in 0..cat.rank() {
            let (rows, cols, m) = self.charge_matrix(cat, c);
            if rows.is_empty() && cols.is_empty() {
                continue;
            }
            if rows.len() != cols.len() {
                return Err(Error::Value(format!(
                    "not an isomorphism at charge {}",
                    cat.name_of(c)
                )));
            }
            let inv = inverse(&m)
                .ok_or_else(|| Error::Value(format!("singular at charge {}", cat.name_of(c))))?;
            for (i, &(s, ti)) in cols.iter().enumerate() {
                for (j, &(t, tj)) in rows.iter().enumerate() {
                    let v = inv[(i, j)];
                    if v.norm() == 0.0 {
                        continue;
                    }
                    let key = (s, t);
                    out.entries
                        .entry(key)
                        .or_insert_with(|| HomMorphism::zero(cat, &self.tgt.0[t], &self.src.0[s]));
                    let h = out.entries.get_mut(&key).unwrap();
                    if let Some(b) = h.blocks.get_mut(&c) {
                        b[(ti, tj)] += v;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Condition number estimate (ratio of extreme singular values) over all charges.
    pub fn condition(&self, cat: &CategoryData) -> f64 {
        let mut worst: f64 = 1.0;
        for c in 0..cat.rank() {
            let (_, _, m) = self.charge_matrix(cat, c);
            if m.nrows() == 0 || m.nrows() != m.ncols() {
                continue;
            }
            let sv = m.singular_values();
            let hi = sv.max();
            let lo = sv.min();
            worst = worst.max(if lo > 0.0 { hi / lo } else { f64::INFINITY });
        }
        worst
    }
}

fn diagonal_sum(
    src: &Obj,
    tgt: &Obj,
    pairs: impl Iterator<Item = (usize, usize, HomMorphism)>,
) -> GenMorphism {
    let mut g = GenMorphism::zero(src, tgt);
    for (t, s, h) in pairs {
        g.put(t, s, h).expect("summand shapes agree");
    }
    g
}

/// e_X : X'⊗X → 1.
pub fn cap_obj(cat: &CategoryData, x: &Obj) -> GenMorphism {
    let n = x.len();
    let src = x.dual(cat).tensor(x);
    diagonal_sum(
        &src,
        &Obj::unit(),
        x.0.iter()
            .enumerate()
            .map(|(k, w)| (0, k * n + k, cap_word(cat, w).unwrap())),
    )
}

/// i_X : 1 → X⊗X'.
pub fn cup_obj(cat: &CategoryData, x: &Obj) -> GenMorphism {
    let n = x.len();
    let tgt = x.tensor(&x.dual(cat));
    diagonal_sum(
        &Obj::unit(),
        &tgt,
        x.0.iter()
            .enumerate()
            .map(|(k, w)| (k * n + k, 0, cup_word(cat, w).unwrap())),
    )
}

/// e'_X : X⊗X' → 1.
pub fn capl_obj(cat: &CategoryData, x: &Obj) -> GenMorphism {
    let n = x.len();
    let src = x.tensor(&x.dual(cat));
    diagonal_sum(
        &src,
        &Obj::unit(),
        x.0.iter()
            .enumerate()
            .map(|(k, w)| (0, k * n + k, capl_word(cat, w).unwrap())),
    )
}

/// i'_X : 1 → X'⊗X.
pub fn cupl_obj(cat: &CategoryData, x: &Obj) -> GenMorphism {
    let n = x.len();
    let tgt = x.dual(cat).tensor(x);
    diagonal_sum(
        &Obj::unit(),
        &tgt,
        x.0.iter()
            .enumerate()
            .map(|(k, w)| (k * n + k, 0, cupl_word(cat, w).unwrap())),
    )
}

/// c_{X,Y} : X⊗Y → Y⊗X, or c⁻¹_{Y,X} when `inverse`.
pub fn braid_obj(cat: &CategoryData, x: &Obj, y: &Obj, inverse: bool) -> GenMorphism {
    let (nx, ny) = (x.len(), y.len());
    let mut g = GenMorphism::zero(&x.tensor(y), &y.tensor(x));
    for (i, a) in x.0.iter().enumerate() {
        for (j, b) in y.0.iter().enumerate() {
            g.put(
                j * nx + i,
                i * ny + j,
                braid_words(cat, a, b, inverse).unwrap(),
            )
            .unwrap();
        }
    }
    g
}

pub fn twist_obj(cat: &CategoryData, x: &Obj, power: i32) -> GenMorphism {
    diagonal_sum(
        x,
        x,
        x.0.iter()
            .enumerate()
            .map(|(k, w)| (k, k, twist_word(cat, w, power))),
    )
}

/// Categorical transpose f* : Y' → X' of f : X → Y.
pub fn transpose(cat: &CategoryData, f: &GenMorphism) -> GenMorphism {
    let xd = f.src.dual(cat);
    let yd = f.tgt.dual(cat);
    let id_yd = GenMorphism::identity(cat, &yd);
    let id_xd = GenMorphism::identity(cat, &xd);
    let step1 = id_yd.tensor(cat, &cup_obj(cat, &f.src));
    let step2 = id_yd.tensor(cat, &f.tensor(cat, &id_xd));
    let step3 = cap_obj(cat, &f.tgt).tensor(cat, &id_xd);
    let h = step3.compose(&step2).unwrap().compose(&step1).unwrap();
    // (Y'⊗1) and (1⊗X') carry the same words as Y' and X'
    relabel(h, &yd, &xd)
}

/// Reinterpret a morphism whose summands are word-for-word those of `src`/`tgt`.
pub fn relabel(h: GenMorphism, src: &Obj, tgt: &Obj) -> GenMorphism {
    assert_eq!(h.src.0, src.0);
    assert_eq!(h.tgt.0, tgt.0);
    GenMorphism {
        src: src.clone(),
        tgt: tgt.clone(),
        entries: h.entries,
    }
}

/// Splitting-tree embedding [c] → w for tree index t, and the dual fusion-tree projection.
pub fn tree_embedding(
    cat: &CategoryData,
    w: &[Label],
    c: Label,
    t: usize,
) -> (HomMorphism, HomMorphism) {
    let mut emb = HomMorphism::zero(cat, &[c], w);
    if let Some(b) = emb.blocks.get_mut(&c) {
        b[(t, 0)] = C64::new(1.0, 0.0);
    }
    let mut proj = HomMorphism::zero(cat, w, &[c]);
    if let Some(b) = proj.blocks.get_mut(&c) {
        b[(0, t)] = C64::new(1.0, 0.0);
    }
    (emb, proj)
}

/// Decomposition of an object into simples: labels of the simple components and the
/// mutually inverse maps E : ⊕[c] → X and P : X → ⊕[c].
pub struct Decomposition {
    pub labels: Vec<Label>,
    pub simple: Obj,
    pub embed: GenMorphism,
    pub project: GenMorphism,
}

pub fn decompose(cat: &CategoryData, x: &Obj) -> Decomposition {
    let mut labels = Vec::new();
    let mut parts = Vec::new();
    for (k, w) in x.0.iter().enumerate() {
        for c in 0..cat.rank() {
            for t in 0..cat.trees(w, c).len() {
                labels.push(c);
                parts.push((k, c, t));
            }
        }
    }
    let simple = Obj::simples(&labels);
    let mut embed = GenMorphism::zero(&simple, x);
    let mut project = GenMorphism::zero(x, &simple);
    for (i, &(k, c, t)) in parts.iter().enumerate() {
        let (e, p) = tree_embedding(cat, &x.0[k], c, t);
        embed.put(k, i, e).unwrap();
        project.put(i, k, p).unwrap();
    }
    Decomposition {
        labels,
        simple,
        embed,
        project,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    #[test]
    fn decomposition_is_inverse_pair() {
        let cat = builtins::fibonacci();
        let x = Obj(vec![vec![1, 1], vec![0, 1]]);
        let d = decompose(&cat, &x);
        assert_eq!(d.labels, vec![0, 1, 1]);
        let id = d.embed.compose(&d.project).unwrap();
        assert!(id.max_diff(&GenMorphism::identity(&cat, &x)).unwrap() < 1e-12);
        let id2 = d.project.compose(&d.embed).unwrap();
        assert!(
            id2.max_diff(&GenMorphism::identity(&cat, &d.simple))
                .unwrap()
                < 1e-12
        );
    }

    #[test]
    fn zigzag_on_sums() {
        let cat = builtins::ising();
        let x = Obj(vec![vec![2], vec![1], vec![2, 1]]);
        let id = GenMorphism::identity(&cat, &x);
        let xd = x.dual(&cat);
        let z = id
            .tensor(&cat, &cap_obj(&cat, &x))
            .compose(&cup_obj(&cat, &x).tensor(&cat, &id))
            .unwrap();
        let z = relabel(z, &x, &x);
        assert!(z.max_diff(&id).unwrap() < 1e-12);
        let loop_ = cap_obj(&cat, &x).compose(&relabel(
            braid_obj(&cat, &x, &xd, false)
                .compose(&cup_obj(&cat, &x))
                .unwrap(),
            &Obj::unit(),
            &xd.tensor(&x),
        ));
        assert!(loop_.is_ok());
    }

    #[test]
    fn inverse_of_braid() {
        let cat = builtins::z3();
        let x = Obj(vec![vec![1], vec![2, 1]]);
        let y = Obj(vec![vec![2]]);
        let b = braid_obj(&cat, &x, &y, false);
        let bi = b.inverse(&cat).unwrap();
        let back = braid_obj(&cat, &y, &x, true);
        assert!(bi.max_diff(&back).unwrap() < 1e-12);
    }
}
