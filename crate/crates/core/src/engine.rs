//! String-diagram evaluation: elementary generators as hom-space matrices, composition,
//! juxtaposition and closure, plus word-level duality and braiding helpers.
//!
//! Duality conventions: `Cap(a) = e_a : a'⊗a → 1` with coefficient 1, `Cup(a) = i_a : 1 → a⊗a'`
//! scaled so that the zigzag a → a⊗a'⊗a → a is the identity, `CupL(a) = i'_a : 1 → a'⊗a`
//! with coefficient dim a, and `CapL(a) = e'_a : a⊗a' → 1` scaled by the matching zigzag.
//! Consequently `e'_a ∘ i_a = e_a ∘ i'_a = dim a`.

use std::fmt;

use crate::category::{CategoryData, Label};
use crate::error::{Error, Result};
use crate::hom::{place, tensor, HomMorphism};
use crate::numeric::{re, C64};

#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    Id(Vec<Label>),
    Cup(Label),
    Cap(Label),
    CupL(Label),
    CapL(Label),
    Braid(Label, Label),
    BraidInv(Label, Label),
    Twist(Label),
    TwistInv(Label),
    /// Fusion vertex a⊗b → c with multiplicity index.
    BasisVertex(Label, Label, Label, usize),
    /// Splitting vertex c → a⊗b, biorthogonal to `BasisVertex`.
    DualVertex(Label, Label, Label, usize),
}

impl Generator {
    pub fn source(&self, cat: &CategoryData) -> Vec<Label> {
        use Generator::*;
        match *self {
            Id(ref w) => w.clone(),
            Cup(_) | CupL(_) => vec![],
            Cap(a) => vec![cat.dual(a), a],
            CapL(a) => vec![a, cat.dual(a)],
            Braid(a, b) | BraidInv(a, b) | BasisVertex(a, b, _, _) => vec![a, b],
            Twist(a) | TwistInv(a) => vec![a],
            DualVertex(_, _, c, _) => vec![c],
        }
    }

    pub fn target(&self, cat: &CategoryData) -> Vec<Label> {
        use Generator::*;
        match *self {
            Id(ref w) => w.clone(),
            Cap(_) | CapL(_) => vec![],
            Cup(a) => vec![a, cat.dual(a)],
            CupL(a) => vec![cat.dual(a), a],
            Braid(a, b) | BraidInv(a, b) => vec![b, a],
            Twist(a) | TwistInv(a) => vec![a],
            BasisVertex(_, _, c, _) => vec![c],
            DualVertex(a, b, _, _) => vec![a, b],
        }
    }
}

/// Coefficient F^{a a' a}_{a; e e}, the zigzag defect of the unit channel.
fn zigzag_f(cat: &CategoryData, a: Label) -> C64 {
    let e = cat.unit();
    let ad = cat.dual(a);
    cat.f([a, ad, a, a], (e, 0, 0), (e, 0, 0))
}

fn pair_scalar(cat: &CategoryData, src: Vec<Label>, tgt: Vec<Label>, v: C64) -> HomMorphism {
    let e = cat.unit();
    let mut h = HomMorphism::zero(cat, &src, &tgt);
    if let Some(m) = h.blocks.get_mut(&e) {
        m[(0, 0)] = v;
    }
    h
}

fn check_label(cat: &CategoryData, a: Label) -> Result<()> {
    if a >= cat.rank() {
        return Err(Error::Type(format!("label index {a} out of range")));
    }
    Ok(())
}

/// The matrix of a generator.
pub fn generator(cat: &CategoryData, g: &Generator) -> Result<HomMorphism> {
    use Generator::*;
    let labels: Vec<Label> = match *g {
        Id(ref w) => w.clone(),
        Cup(a) | Cap(a) | CupL(a) | CapL(a) | Twist(a) | TwistInv(a) => vec![a],
        Braid(a, b) | BraidInv(a, b) => vec![a, b],
        BasisVertex(a, b, c, _) | DualVertex(a, b, c, _) => vec![a, b, c],
    };
    for &l in &labels {
        check_label(cat, l)?;
    }
    let src = g.source(cat);
    let tgt = g.target(cat);
    Ok(match *g {
        Id(ref w) => HomMorphism::identity(cat, w),
        Cap(_) => pair_scalar(cat, src, tgt, re(1.0)),
        Cup(a) => pair_scalar(cat, src, tgt, zigzag_f(cat, a).inv()),
        CupL(a) => pair_scalar(cat, src, tgt, re(cat.dim(a))),
        CapL(a) => pair_scalar(cat, src, tgt, zigzag_f(cat, a) * cat.dim(a)),
        Braid(a, b) => {
            let mut h = HomMorphism::zero(cat, &src, &tgt);
            for (&c, m) in h.blocks.iter_mut() {
                *m = cat
                    .r(a, b, c)
                    .expect("R block for allowed channel")
                    .transpose();
            }
            h
        }
        BraidInv(a, b) => {
            let mut h = HomMorphism::zero(cat, &src, &tgt);
            for (&c, m) in h.blocks.iter_mut() {
                *m = cat
                    .r_inv(b, a, c)
                    .expect("R block for allowed channel")
                    .transpose();
            }
            h
        }
        Twist(a) => HomMorphism::identity(cat, &[a]).scale(cat.theta(a)),
        TwistInv(a) => HomMorphism::identity(cat, &[a]).scale(cat.theta(a).inv()),
        BasisVertex(a, b, c, i) => {
            if i >= cat.n(a, b, c) {
                return Err(Error::Type(format!(
                    "no vertex {} {} -> {} with index {i}",
                    cat.name_of(a),
                    cat.name_of(b),
                    cat.name_of(c)
                )));
            }
            let mut h = HomMorphism::zero(cat, &src, &tgt);
            h.blocks.get_mut(&c).expect("channel present")[(0, i)] = re(1.0);
            h
        }
        DualVertex(a, b, c, i) => {
            if i >= cat.n(a, b, c) {
                return Err(Error::Type(format!(
                    "no vertex {} -> {} {} with index {i}",
                    cat.name_of(c),
                    cat.name_of(a),
                    cat.name_of(b)
                )));
            }
            let mut h = HomMorphism::zero(cat, &src, &tgt);
            h.blocks.get_mut(&c).expect("channel present")[(i, 0)] = re(1.0);
            h
        }
    })
}

/// A well-typed expression over generators. `Compose([f, g, h])` is f∘g∘h.
#[derive(Clone, Debug)]
pub enum Diagram {
    Gen(Generator),
    Morph(HomMorphism),
    Compose(Vec<Diagram>),
    Tensor(Vec<Diagram>),
    /// Closes every strand of an endomorphism on the right.
    Trace(Box<Diagram>),
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

pub fn eval_diagram(cat: &CategoryData, d: &Diagram) -> Result<HomMorphism> {
    match d {
        Diagram::Gen(g) => generator(cat, g),
        Diagram::Morph(h) => Ok(h.clone()),
        Diagram::Compose(parts) => {
            let mut it = parts.iter().rev();
            let mut acc = match it.next() {
                Some(p) => eval_diagram(cat, p)?,
                None => return Err(Error::Type("empty composition".into())),
            };
            for p in it {
                let f = eval_diagram(cat, p)?;
                acc = f.compose(&acc).map_err(|e| match e {
                    Error::Type(m) => Error::Type(format!("{m} in {p:?}")),
                    other => other,
                })?;
            }
            Ok(acc)
        }
        Diagram::Tensor(parts) => {
            let mut acc = HomMorphism::identity(cat, &[]);
            for p in parts {
                acc = tensor(cat, &acc, &eval_diagram(cat, p)?);
            }
            Ok(acc)
        }
        Diagram::Trace(inner) => {
            let f = eval_diagram(cat, inner)?;
            trace(cat, &f)
        }
    }
}

/// `place(op at k) ∘ f`: apply `op` to the target strands of `f` starting at `k`.
pub fn then(
    cat: &CategoryData,
    f: &HomMorphism,
    k: usize,
    op: &HomMorphism,
) -> Result<HomMorphism> {
    place(cat, &f.tgt, k, op)?.compose(f)
}

/// `then` with a generator.
pub fn then_gen(
    cat: &CategoryData,
    f: &HomMorphism,
    k: usize,
    g: Generator,
) -> Result<HomMorphism> {
    then(cat, f, k, &generator(cat, &g)?)
}

/// `f ∘ place(op at k)`: feed `op` into the source strands of `f` starting at `k`.
pub fn after(
    cat: &CategoryData,
    f: &HomMorphism,
    k: usize,
    op: &HomMorphism,
) -> Result<HomMorphism> {
    let t = op.tgt.len();
    if k + t > f.src.len() || f.src[k..k + t] != op.tgt[..] {
        return Err(Error::Type(format!(
            "operator into {:?} does not fit source {:?} at {k}",
            op.tgt, f.src
        )));
    }
    let mut word = f.src[..k].to_vec();
    word.extend_from_slice(&op.src);
    word.extend_from_slice(&f.src[k + t..]);
    f.compose(&place(cat, &word, k, op)?)
}

pub fn after_gen(
    cat: &CategoryData,
    f: &HomMorphism,
    k: usize,
    g: Generator,
) -> Result<HomMorphism> {
    after(cat, f, k, &generator(cat, &g)?)
}

/// Dual word (x1..xn)' = (xn'..x1').
pub fn dual_word(cat: &CategoryData, w: &[Label]) -> Vec<Label> {
    w.iter().rev().map(|&x| cat.dual(x)).collect()
}

/// i_W : 1 → W⊗W', nested cups.
pub fn cup_word(cat: &CategoryData, w: &[Label]) -> Result<HomMorphism> {
    let mut h = HomMorphism::identity(cat, &[]);
    for (k, &x) in w.iter().enumerate() {
        h = then_gen(cat, &h, k, Generator::Cup(x))?;
    }
    Ok(h)
}

/// i'_W : 1 → W'⊗W.
pub fn cupl_word(cat: &CategoryData, w: &[Label]) -> Result<HomMorphism> {
    let mut h = HomMorphism::identity(cat, &[]);
    for (k, &x) in w.iter().rev().enumerate() {
        h = then_gen(cat, &h, k, Generator::CupL(x))?;
    }
    Ok(h)
}

/// e_W : W'⊗W → 1.
pub fn cap_word(cat: &CategoryData, w: &[Label]) -> Result<HomMorphism> {
    let mut h = HomMorphism::identity(cat, &[]);
    for (k, &x) in w.iter().rev().enumerate() {
        h = after_gen(cat, &h, k, Generator::Cap(x))?;
    }
    Ok(h)
}

/// e'_W : W⊗W' → 1.
pub fn capl_word(cat: &CategoryData, w: &[Label]) -> Result<HomMorphism> {
    let mut h = HomMorphism::identity(cat, &[]);
    for (k, &x) in w.iter().enumerate() {
        h = after_gen(cat, &h, k, Generator::CapL(x))?;
    }
    Ok(h)
}

/// Braiding of words, c_{W1,W2} : W1⊗W2 → W2⊗W1, built from adjacent crossings.
/// With `inverse`, the reverse crossing c^{-1}_{W2,W1} with the same source and target.
pub fn braid_words(
    cat: &CategoryData,
    w1: &[Label],
    w2: &[Label],
    inverse: bool,
) -> Result<HomMorphism> {
    let mut word = w1.to_vec();
    word.extend_from_slice(w2);
    let mut h = HomMorphism::identity(cat, &word);
    let n1 = w1.len();
    let n2 = w2.len();
    // move the strands of w1 to the right, last one first
    for i in (0..n1).rev() {
        for j in 0..n2 {
            let pos = i + j;
            let x = h.tgt[pos];
            let y = h.tgt[pos + 1];
            let g = if inverse {
                Generator::BraidInv(x, y)
            } else {
                Generator::Braid(x, y)
            };
            h = then_gen(cat, &h, pos, g)?;
        }
    }
    Ok(h)
}

/// θ_W, acting by θ_c on the charge-c sector.
pub fn twist_word(cat: &CategoryData, w: &[Label], power: i32) -> HomMorphism {
    let mut h = HomMorphism::identity(cat, w);
    for (&c, m) in h.blocks.iter_mut() {
        *m *= cat.theta(c).powi(power);
    }
    h
}

/// Right closure of an endomorphism: e'_W ∘ (f ⊗ id_{W'}) ∘ i_W.
pub fn trace(cat: &CategoryData, f: &HomMorphism) -> Result<HomMorphism> {
    if f.src != f.tgt {
        return Err(Error::Type(format!(
            "trace of a non-endomorphism {:?} -> {:?}",
            f.src, f.tgt
        )));
    }
    let w = f.src.clone();
    let open = then(cat, &cup_word(cat, &w)?, 0, f)?;
    capl_word(cat, &w)?.compose(&open)
}

/// Close the last `k` strands of f : U⊗W → V⊗W on the right, giving U → V.
pub fn partial_trace_right(cat: &CategoryData, f: &HomMorphism, k: usize) -> Result<HomMorphism> {
    let ns = f.src.len();
    let nt = f.tgt.len();
    if k > ns || k > nt || f.src[ns - k..] != f.tgt[nt - k..] {
        return Err(Error::Type("partial trace strands do not match".into()));
    }
    let w = f.src[ns - k..].to_vec();
    let u = f.src[..ns - k].to_vec();
    let v = f.tgt[..nt - k].to_vec();
    let start = tensor(cat, &HomMorphism::identity(cat, &u), &cup_word(cat, &w)?);
    let mid = then(cat, &start, 0, f)?;
    let close = tensor(cat, &HomMorphism::identity(cat, &v), &capl_word(cat, &w)?);
    close.compose(&mid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    fn close(a: C64, b: C64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn loops_give_dimensions() {
        for cat in builtins::all() {
            for a in 0..cat.rank() {
                let l1 = generator(&cat, &Generator::CapL(a))
                    .unwrap()
                    .compose(&generator(&cat, &Generator::Cup(a)).unwrap())
                    .unwrap();
                let l2 = generator(&cat, &Generator::Cap(a))
                    .unwrap()
                    .compose(&generator(&cat, &Generator::CupL(a)).unwrap())
                    .unwrap();
                assert!(close(l1.scalar_value().unwrap(), re(cat.dim(a))));
                assert!(close(l2.scalar_value().unwrap(), re(cat.dim(a))));
            }
        }
    }

    #[test]
    fn zigzags_are_identities() {
        for cat in builtins::all() {
            for a in 0..cat.rank() {
                let ad = cat.dual(a);
                let id = HomMorphism::identity(&cat, &[a]);
                let z1 = then_gen(
                    &cat,
                    &then_gen(&cat, &id, 0, Generator::Cup(a)).unwrap(),
                    1,
                    Generator::Cap(a),
                )
                .unwrap();
                assert!(z1.max_diff(&id).unwrap() < 1e-12);
                let z2 = then_gen(
                    &cat,
                    &then_gen(&cat, &id, 1, Generator::CupL(a)).unwrap(),
                    0,
                    Generator::CapL(a),
                )
                .unwrap();
                assert!(z2.max_diff(&id).unwrap() < 1e-12);
                let idd = HomMorphism::identity(&cat, &[ad]);
                let z3 = then_gen(
                    &cat,
                    &then_gen(&cat, &idd, 1, Generator::Cup(a)).unwrap(),
                    0,
                    Generator::Cap(a),
                )
                .unwrap();
                assert!(z3.max_diff(&idd).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn trace_matches_quantum_trace() {
        let cat = builtins::fibonacci();
        let t = 1;
        let w = [t, t, t];
        let b = braid_words(&cat, &[t], &[t, t], false).unwrap();
        let b2 = braid_words(&cat, &[t, t], &[t], false)
            .unwrap()
            .compose(&b)
            .unwrap();
        let tr = trace(&cat, &b2).unwrap().scalar_value().unwrap();
        assert!(close(tr, b2.qtrace(&cat).unwrap()));
        let id = HomMorphism::identity(&cat, &w);
        assert!(close(
            trace(&cat, &id).unwrap().scalar_value().unwrap(),
            re(cat.dim(t).powi(3))
        ));
    }

    #[test]
    fn word_braids_are_inverse() {
        let cat = builtins::ising();
        let w1 = [2, 1];
        let w2 = [2];
        let b = braid_words(&cat, &w1, &w2, false).unwrap();
        let bi = braid_words(&cat, &w2, &w1, true).unwrap();
        let id = HomMorphism::identity(&cat, &[2, 1, 2]);
        assert!(bi.compose(&b).unwrap().max_diff(&id).unwrap() < 1e-12);
    }

    #[test]
    fn twisted_loop() {
        let cat = builtins::fibonacci();
        let d = Diagram::Trace(Box::new(Diagram::Gen(Generator::Twist(1))));
        let v = eval_diagram(&cat, &d).unwrap().scalar_value().unwrap();
        assert!(close(v, cat.theta(1) * cat.dim(1)));
    }
}
