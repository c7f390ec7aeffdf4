//! The diagonal closed algebra, the Cardy-case open algebra X⊗X', the map
//! ι : T(A_cl) → A_op, and checks of modular invariance, the open-closed axioms and the
//! Cardy condition.

use std::fmt;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::category::{CategoryData, Label};
use crate::double::DoubledCategory;
use crate::engine::{braid_words, generator, then, then_gen, Generator};
use crate::error::{Error, Result};
use crate::frobenius::{
    algebra_from_json, algebra_to_json, check_algebra, check_commutative_trivial_twist,
    check_frobenius, check_symmetric, Algebra, Host,
};
use crate::hom::{tensor, HomMorphism};
use crate::modular::s_action;
use crate::numeric::{c64, inverse, kron, max_abs_diff, re, zeros, Mat, C64};
use crate::object::{
    braid_obj, cap_obj, capl_obj, cup_obj, cupl_obj, decompose, relabel, transpose, GenMorphism,
    Obj,
};
use crate::operators::{omega0, sigma123, sigma132};
use crate::report::{timed, CheckReport, Worst};
use crate::sl2z::{coords_of, s_first_factor, two_point_basis};

/// A boundary object X given as (label, multiplicity) pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Brane {
    pub components: Vec<(Label, usize)>,
}

impl Brane {
    pub fn new(components: Vec<(Label, usize)>) -> Result<Self> {
        let components: Vec<_> = components.into_iter().filter(|c| c.1 > 0).collect();
        if components.is_empty() {
            return Err(Error::Value("brane object is empty".into()));
        }
        Ok(Brane { components })
    }

    /// Parse `"tau"`, `"1+tau"`, `"2*sigma"` or `"1+1"`.
    pub fn parse(cat: &CategoryData, spec: &str) -> Result<Self> {
        let mut comps: Vec<(Label, usize)> = Vec::new();
        for term in spec.split('+').map(str::trim) {
            let (m, name) = match term.split_once('*') {
                Some((m, n)) => (
                    m.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad multiplicity in {term:?}")))?,
                    n.trim(),
                ),
                None => (1, term),
            };
            let x = cat.label_or_err(name)?;
            match comps.iter_mut().find(|c| c.0 == x) {
                Some(c) => c.1 += m,
                None => comps.push((x, m)),
            }
        }
        Brane::new(comps)
    }

    pub fn total(&self) -> usize {
        self.components.iter().map(|c| c.1).sum()
    }

    pub fn obj(&self) -> Obj {
        let labels: Vec<Label> = self
            .components
            .iter()
            .flat_map(|&(x, m)| std::iter::repeat_n(x, m))
            .collect();
        Obj::simples(&labels)
    }

    pub fn display(&self, cat: &CategoryData) -> String {
        self.components
            .iter()
            .map(|&(x, m)| {
                if m == 1 {
                    cat.name_of(x).to_string()
                } else {
                    format!("{m}*{}", cat.name_of(x))
                }
            })
            .collect::<Vec<_>>()
            .join("+")
    }
}

/// (A_op | A_cl, ι).
#[derive(Clone, Debug)]
pub struct CardyTriple {
    pub closed: Algebra,
    pub open: Algebra,
    /// T(A_cl) → A_op.
    pub iota: GenMorphism,
}

impl fmt::Display for CardyTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "closed {} summands, open {} summands",
            self.closed.obj.len(),
            self.open.obj.len()
        )
    }
}

// ---------------------------------------------------------------------------
// closed algebra

/// ⟨f^{ab}_{c;i}, f^{a'b'}_{c';j}⟩: the two splittings joined along c⊗c' by i_c, the a and b
/// strands closed against their duals by e', divided by dim c.
pub fn pairing(
    d: &DoubledCategory,
    a: Label,
    b: Label,
    c: Label,
    i: usize,
    j: usize,
) -> Result<C64> {
    let base = &d.base;
    let (ad, bd, cd) = (base.dual(a), base.dual(b), base.dual(c));
    let fi = generator(base, &Generator::DualVertex(a, b, c, i))?;
    let fj = generator(base, &Generator::DualVertex(ad, bd, cd, j))?;
    let h = generator(base, &Generator::Cup(c))?;
    let h = tensor(base, &fi, &fj).compose(&h)?;
    // [a, b, a', b'] → [a, a', b, b'], inverse of φ₂
    let h = then(base, &h, 1, &braid_words(base, &[b], &[ad], false)?)?;
    let h = then_gen(base, &h, 2, Generator::CapL(b))?;
    let h = then_gen(base, &h, 0, Generator::CapL(a))?;
    Ok(h.scalar_value().unwrap_or_default() / re(base.dim(c)))
}

/// V_cl = ⊕_a (a, a') with the pairing product, unit on (e, e) and
/// φ_cl = ⊕ (D / dim a) θ_a id.
pub fn build_diagonal_closed(d: &DoubledCategory) -> Result<Algebra> {
    let base = &d.base;
    let n = base.rank();
    let labels: Vec<Label> = (0..n).map(|a| d.diagonal(a)).collect();
    let obj = Obj::simples(&labels);
    let mut mu = GenMorphism::zero(&obj.tensor(&obj), &obj);
    for a in 0..n {
        for b in 0..n {
            for c in base.channels(a, b) {
                let (aa, bb, cc) = (labels[a], labels[b], labels[c]);
                let nr = base.n(base.dual(a), base.dual(b), base.dual(c));
                let mut h = HomMorphism::zero(&d.cat, &[aa, bb], &[cc]);
                let blk = h.blocks.get_mut(&cc).expect("diagonal channel");
                for i in 0..base.n(a, b, c) {
                    for j in 0..nr {
                        blk[(0, i * nr + j)] = pairing(d, a, b, c, i, j)?;
                    }
                }
                mu.put(c, a * n + b, h)?;
            }
        }
    }
    let e = base.unit();
    let mut iota = GenMorphism::zero(&Obj::unit(), &obj);
    let mut u = HomMorphism::zero(&d.cat, &[], &[labels[e]]);
    if let Some(b) = u.blocks.get_mut(&labels[e]) {
        b[(0, 0)] = c64(1.0, 0.0);
    }
    iota.put(e, 0, u)?;
    let big_d = base.big_d();
    let od = obj.dual(&d.cat);
    let mut phi = GenMorphism::zero(&obj, &od);
    for a in 0..n {
        let scale = big_d / re(base.dim(a)) * base.theta(a);
        phi.put(
            base.dual(a),
            a,
            HomMorphism::identity(&d.cat, &[labels[a]]).scale(scale),
        )?;
    }
    let alg = Algebra::new(Host::Double, obj, mu, iota).with_phi(phi);
    alg.complete(&d.cat)
}

/// The same algebra with φ_cl replaced by the plain identification (a,a') ≅ (a',a)'.
pub fn drop_phi_phases(d: &DoubledCategory, a: &Algebra) -> Result<Algebra> {
    let od = a.obj.dual(&d.cat);
    let mut phi = GenMorphism::zero(&a.obj, &od);
    for (s, w) in a.obj.0.iter().enumerate() {
        let t =
            od.0.iter()
                .position(|v| v == w)
                .ok_or_else(|| Error::Value("summand without dual".into()))?;
        phi.put(t, s, HomMorphism::identity(&d.cat, w))?;
    }
    let mut out = a.clone().with_phi(phi);
    out.delta = None;
    out.eps = None;
    out.complete(&d.cat)
}

/// Coefficient vector of m^{diag}_α over pairs ((b, i), (b̄, j)) of the block bases of r(α), r̄(α).
fn diag_vector(d: &DoubledCategory, a: &Algebra, alpha: usize) -> Vec<C64> {
    let base = &d.base;
    let (ra, rba) = d.split(a.obj.0[alpha][0]);
    let bl = crate::modular::block_basis(base, ra);
    let br = crate::modular::block_basis(base, rba);
    let n = a.obj.len();
    let mut v = vec![C64::default(); bl.len() * br.len()];
    for beta in 0..n {
        let lb = a.obj.0[beta][0];
        let (b, bb) = d.split(lb);
        let Some(h) = a.mu.entry(beta, alpha * n + beta) else {
            continue;
        };
        let Some(blk) = h.block(lb) else { continue };
        let nr = base.n(rba, bb, bb);
        for i in 0..base.n(ra, b, b) {
            for j in 0..nr {
                let p = bl.iter().position(|&x| x == (b, i)).expect("left block");
                let q = br.iter().position(|&x| x == (bb, j)).expect("right block");
                v[p * br.len() + q] += blk[(0, i * nr + j)];
            }
        }
    }
    v
}

/// S^L(r(α)) ⊗ S^R(r̄(α))⁻¹ m^{diag}_α = m^{diag}_α for every α, plus S N S⁻¹ = N on the
/// multiplicity matrix N_{a ā}.
pub fn check_modular_invariance(d: &DoubledCategory, a: &Algebra, tol: f64) -> CheckReport {
    timed(|| {
        let base = &d.base;
        let mut w = Worst::default();
        for alpha in 0..a.obj.len() {
            let (ra, rba) = d.split(a.obj.0[alpha][0]);
            let sl = s_action(base, ra);
            let sr = match inverse(&s_action(base, rba)) {
                Some(m) => m,
                None => {
                    w.see(f64::INFINITY, || "singular S block".into());
                    continue;
                }
            };
            let op = kron(&sl, &sr);
            let v = Mat::from_column_slice(op.ncols(), 1, &diag_vector(d, a, alpha));
            let r = max_abs_diff(&(&op * &v), &v);
            w.see(r, || {
                format!("alpha {alpha} = {}", d.cat.name_of(a.obj.0[alpha][0]))
            });
        }
        let n = base.rank();
        let mut nm = zeros(n, n);
        for wd in &a.obj.0 {
            let (x, y) = d.split(wd[0]);
            nm[(x, y)] += c64(1.0, 0.0);
        }
        let s = s_action(base, base.unit());
        let sn = max_abs_diff(&(&s * &nm), &(&nm * &s));
        CheckReport::aggregate(
            "modular-invariance",
            tol,
            vec![
                w.report("s-invariance", tol),
                CheckReport::new("s-commutes-with-n", sn, tol),
            ],
        )
    })
}

// ---------------------------------------------------------------------------
// open algebra and ι

/// X⊗X' with μ = id⊗e_X⊗id, ι = i_X, Δ = id⊗i'_X⊗id, ε = e'_X and φ the bent pairing.
pub fn build_open(cat: &CategoryData, x: &Obj) -> Result<Algebra> {
    let xd = x.dual(cat);
    let v = x.tensor(&xd);
    let id_x = GenMorphism::identity(cat, x);
    let id_xd = GenMorphism::identity(cat, &xd);
    let mu = id_x.tensor(cat, &cap_obj(cat, x)).tensor(cat, &id_xd);
    let mu = relabel(mu, &v.tensor(&v), &v);
    let iota = cup_obj(cat, x);
    let delta = id_x.tensor(cat, &cupl_obj(cat, x)).tensor(cat, &id_xd);
    let delta = relabel(delta, &v, &v.tensor(&v));
    let eps = capl_obj(cat, x);
    let mut alg = Algebra::new(Host::Base, v, mu, iota);
    alg.delta = Some(delta);
    alg.eps = Some(eps);
    let (phi, _) = alg.bent_pairings(cat)?;
    Ok(alg.with_phi(phi))
}

/// The crossing step of ι on [a, X, X', a']: c_{a,X} ⊗ c_{X',a'}, giving [X, a, a', X'].
fn iota_crossing(cat: &CategoryData, a: Label, x: &Obj) -> GenMorphism {
    let ao = Obj::simples(&[a]);
    let ado = Obj::simples(&[cat.dual(a)]);
    let xd = x.dual(cat);
    braid_obj(cat, &ao, x, false).tensor(cat, &braid_obj(cat, &xd, &ado, false))
}

/// ι_a : a⊗a' → X⊗X', closing a, a' after they cross into the X, X' strands.
pub fn iota_component(cat: &CategoryData, a: Label, x: &Obj) -> Result<GenMorphism> {
    let ao = Obj::simples(&[a]);
    let ado = Obj::simples(&[cat.dual(a)]);
    let xd = x.dual(cat);
    let v = x.tensor(&xd);
    let src = Obj(vec![vec![a, cat.dual(a)]]);
    let open = GenMorphism::identity(cat, &ao)
        .tensor(cat, &cup_obj(cat, x))
        .tensor(cat, &GenMorphism::identity(cat, &ado));
    let open = relabel(open.clone(), &src, &open.tgt);
    let close = GenMorphism::identity(cat, x)
        .tensor(cat, &capl_obj(cat, &ao))
        .tensor(cat, &GenMorphism::identity(cat, &xd));
    let h = close.compose(&iota_crossing(cat, a, x))?.compose(&open)?;
    Ok(relabel(h, &src, &v))
}

/// The mirror image of ι_a, X⊗X' → a⊗a', with inverse crossings.
pub fn iota_mirror(cat: &CategoryData, a: Label, x: &Obj) -> Result<GenMorphism> {
    let ao = Obj::simples(&[a]);
    let ado = Obj::simples(&[cat.dual(a)]);
    let xd = x.dual(cat);
    let v = x.tensor(&xd);
    let tgt = Obj(vec![vec![a, cat.dual(a)]]);
    let open = GenMorphism::identity(cat, x)
        .tensor(cat, &cup_obj(cat, &ao))
        .tensor(cat, &GenMorphism::identity(cat, &xd));
    let open = relabel(open.clone(), &v, &open.tgt);
    let cross = iota_crossing(cat, a, x).inverse(cat)?;
    let close = GenMorphism::identity(cat, &ao)
        .tensor(cat, &capl_obj(cat, x))
        .tensor(cat, &GenMorphism::identity(cat, &ado));
    let h = close.compose(&cross)?.compose(&open)?;
    Ok(relabel(h, &v, &tgt))
}

fn assemble_iota(d: &DoubledCategory, closed: &Obj, x: &Obj) -> Result<GenMorphism> {
    let base = &d.base;
    let src = d.t_obj(closed);
    let tgt = x.tensor(&x.dual(base));
    let mut out = GenMorphism::zero(&src, &tgt);
    for (s, w) in closed.0.iter().enumerate() {
        let (a, ab) = d.split(w[0]);
        if ab != base.dual(a) {
            return Err(Error::Value("closed algebra is not diagonal".into()));
        }
        let comp = iota_component(base, a, x)?;
        for (&(t, _), h) in &comp.entries {
            out.put(t, s, h.clone())?;
        }
    }
    Ok(out)
}

const K_INVERSE: bool = false;

/// K = c_{x',ȳ'} : T(w') → T(w)' for a doubled simple w = (x, ȳ).
pub fn t_dual_iso(d: &DoubledCategory, w: Label) -> Result<HomMorphism> {
    let base = &d.base;
    let (x, y) = d.split(w);
    braid_words(base, &[base.dual(x)], &[base.dual(y)], K_INVERSE)
}

/// ι* = T(φ_cl)⁻¹ ∘ K⁻¹ ∘ ι^t ∘ φ_op : A_op → T(A_cl).
pub fn iota_star(d: &DoubledCategory, t: &CardyTriple) -> Result<GenMorphism> {
    let base = &d.base;
    let phi_op = t
        .open
        .phi
        .as_ref()
        .ok_or_else(|| Error::Value("open algebra has no phi".into()))?;
    let phi_cl = t
        .closed
        .phi
        .as_ref()
        .ok_or_else(|| Error::Value("closed algebra has no phi".into()))?;
    let it = transpose(base, &t.iota);
    let tcl_dual = d.t_obj(&t.closed.obj).dual(base);
    let tcld = d.t_obj(&t.closed.obj.dual(&d.cat));
    let mut kinv = GenMorphism::zero(&tcl_dual, &tcld);
    for (k, w) in t.closed.obj.0.iter().enumerate() {
        let (x, y) = d.split(w[0]);
        let (xd, yd) = (base.dual(x), base.dual(y));
        kinv.put(k, k, braid_words(base, &[yd], &[xd], !K_INVERSE)?)?;
    }
    let tphi_inv = d.t_gen(&phi_cl.inverse(&d.cat)?);
    tphi_inv.compose(&kinv)?.compose(&it)?.compose(phi_op)
}

/// The closed form (dim a / D) · mirror(ι_a) on every closed summand.
pub fn iota_star_closed_form(d: &DoubledCategory, closed: &Obj, x: &Obj) -> Result<GenMorphism> {
    let base = &d.base;
    let v = x.tensor(&x.dual(base));
    let tgt = d.t_obj(closed);
    let mut out = GenMorphism::zero(&v, &tgt);
    for (s, w) in closed.0.iter().enumerate() {
        let (a, _) = d.split(w[0]);
        let m = iota_mirror(base, a, x)?.scale(re(base.dim(a)) / base.big_d());
        for (&(_, k), h) in &m.entries {
            out.put(s, k, h.clone())?;
        }
    }
    Ok(out)
}

pub fn check_iota_star(d: &DoubledCategory, brane: &Brane, tol: f64) -> CheckReport {
    timed(|| {
        let run = || -> Result<f64> {
            let x = brane.obj();
            let closed = build_diagonal_closed(d)?;
            let open = build_open(&d.base, &x)?;
            let iota = assemble_iota(d, &closed.obj, &x)?;
            let t = CardyTriple { closed, open, iota };
            let lhs = iota_star(d, &t)?;
            let rhs = iota_star_closed_form(d, &t.closed.obj, &x)?;
            lhs.max_diff(&rhs)
        };
        match run() {
            Ok(r) => CheckReport::new("iota-star-closed-form", r, tol),
            Err(e) => CheckReport::new("iota-star-closed-form", f64::INFINITY, tol)
                .with_witness(e.to_string()),
        }
    })
}

/// The Cardy-case triple in word form: A_op = X⊗X' with its literal summands.
pub fn build_cardy_words(d: &DoubledCategory, brane: &Brane) -> Result<CardyTriple> {
    let x = brane.obj();
    let closed = build_diagonal_closed(d)?;
    let open = build_open(&d.base, &x)?;
    let iota = assemble_iota(d, &closed.obj, &x)?;
    Ok(CardyTriple { closed, open, iota })
}

/// Transport A_op and ι to simple summands.
pub fn to_simple_form(d: &DoubledCategory, t: &CardyTriple) -> Result<CardyTriple> {
    let dec = decompose(&d.base, &t.open.obj);
    let open = t.open.transport(&d.base, &dec)?;
    let iota = dec.project.compose(&t.iota)?;
    Ok(CardyTriple {
        closed: t.closed.clone(),
        open,
        iota,
    })
}

/// The Cardy-case triple with A_op in simple form. Fails if ι* disagrees with its closed form.
pub fn build_cardy_case(d: &DoubledCategory, brane: &Brane) -> Result<CardyTriple> {
    let r = check_iota_star(d, brane, 1e-8);
    if !r.pass {
        return Err(Error::Value(format!(
            "iota* does not match its closed form: residual {:.3e}",
            r.residual
        )));
    }
    to_simple_form(d, &build_cardy_words(d, brane)?)
}

// ---------------------------------------------------------------------------
// open-closed axioms

/// T(A_cl)⊗B → B⊗T(A_cl): left halves cross by c, right halves by c⁻¹.
fn half_braiding(d: &DoubledCategory, ta: &Obj, b: &Obj) -> Result<GenMorphism> {
    let base = &d.base;
    let mut out = GenMorphism::zero(&ta.tensor(b), &b.tensor(ta));
    for (i, w) in ta.0.iter().enumerate() {
        let (x, y) = w.split_at(w.len() / 2);
        for (j, v) in b.0.iter().enumerate() {
            let step1 = tensor(
                base,
                &HomMorphism::identity(base, x),
                &braid_words(base, y, v, true)?,
            );
            let step2 = tensor(
                base,
                &braid_words(base, x, v, false)?,
                &HomMorphism::identity(base, y),
            );
            out.put(j * ta.len() + i, i * b.len() + j, step2.compose(&step1)?)?;
        }
    }
    Ok(out)
}

/// μ_{T(A)} = T(μ) ∘ φ₂ and ι_{T(A)} = T(ι).
pub fn t_algebra(d: &DoubledCategory, a: &Algebra) -> Result<(GenMorphism, GenMorphism)> {
    let mu = d.t_gen(&a.mu).compose(&d.phi2_obj(&a.obj, &a.obj)?)?;
    Ok((mu, d.t_gen(&a.iota)))
}

pub fn check_open_closed(d: &DoubledCategory, t: &CardyTriple, tol: f64) -> CheckReport {
    let base = &d.base;
    let run = || -> Result<Vec<CheckReport>> {
        let (mu_t, iota_t) = t_algebra(d, &t.closed)?;
        let unit = t.iota.compose(&iota_t)?.max_diff(&t.open.iota)?;
        let lhs = t.iota.compose(&mu_t)?;
        let rhs = t.open.mu.compose(&t.iota.tensor(base, &t.iota))?;
        let morph = lhs.max_diff(&rhs)?;
        let ta = d.t_obj(&t.closed.obj);
        let id_op = GenMorphism::identity(base, &t.open.obj);
        let c1 = t.open.mu.compose(&t.iota.tensor(base, &id_op))?;
        let c2 = t
            .open
            .mu
            .compose(&id_op.tensor(base, &t.iota))?
            .compose(&half_braiding(d, &ta, &t.open.obj)?)?;
        Ok(vec![
            CheckReport::new("iota-unit", unit, tol),
            CheckReport::new("iota-algebra-morphism", morph, tol),
            CheckReport::new("iota-center", c1.max_diff(&c2)?, tol),
        ])
    };
    timed(|| match run() {
        Ok(p) => CheckReport::aggregate("open-closed", tol, p),
        Err(e) => CheckReport::new("open-closed", f64::INFINITY, tol).with_witness(e.to_string()),
    })
}

// ---------------------------------------------------------------------------
// Cardy condition

/// Both sides of the Cardy condition for one pair of open summands (k1, k2), in two-point
/// coordinates over the external pair (r(k1), r(k2)).
struct CardySides {
    k1: usize,
    k2: usize,
    closed_side: Vec<C64>,
    /// Σ over traced open summands before S⁻¹, as morphisms [r(k1), r(k2), b] → [b].
    open_side: Vec<HomMorphism>,
}

fn simple_labels(a: &Algebra) -> Result<Vec<Label>> {
    a.obj
        .0
        .iter()
        .map(|w| {
            if w.len() == 1 {
                Ok(w[0])
            } else {
                Err(Error::Value("open algebra must be in simple form".into()))
            }
        })
        .collect()
}

fn acc(slot: &mut Option<HomMorphism>, h: HomMorphism) -> Result<()> {
    *slot = Some(match slot.take() {
        Some(x) => x.add(&h)?,
        None => h,
    });
    Ok(())
}

fn cardy_sides(d: &DoubledCategory, t: &CardyTriple) -> Result<Vec<CardySides>> {
    let base = &d.base;
    let lab = simple_labels(&t.open)?;
    let n = lab.len();
    let phi = t
        .open
        .phi
        .as_ref()
        .ok_or_else(|| Error::Value("open algebra has no phi".into()))?;
    let phi_cl = t
        .closed
        .phi
        .as_ref()
        .ok_or_else(|| Error::Value("closed algebra has no phi".into()))?;
    let iota_p = t.iota.compose(&d.t_gen(&phi_cl.inverse(&d.cat)?))?;
    let mu = &t.open.mu;
    let nc = t.closed.obj.len();

    // Y2_i(k2) : [x_k2, r_R(i)] → [r_L(i)'] and Y1_i(k1) : [x_k1, r_L(i)'] → [r_R(i)]
    let mut y2: Vec<Vec<Option<HomMorphism>>> = vec![vec![None; nc]; n];
    let mut y1: Vec<Vec<Option<HomMorphism>>> = vec![vec![None; nc]; n];
    for (&(tt, k), ph) in &phi.entries {
        for i in 0..nc {
            if let Some(m) = t.iota.entry(tt, i) {
                acc(
                    &mut y2[k][i],
                    omega0(base, &sigma132(base, m)?)?.compose(&tensor(
                        base,
                        ph,
                        &HomMorphism::identity(base, &[m.src[1]]),
                    ))?,
                )?;
            }
            if let Some(m) = iota_p.entry(tt, i) {
                let rr = base.dual(m.src[1]);
                let h = sigma123(base, m)?.compose(&tensor(
                    base,
                    ph,
                    &HomMorphism::identity(base, &[m.src[0]]),
                ))?;
                acc(&mut y1[k][i], h.scale(base.theta(rr)))?;
            }
        }
    }

    // W(k2, k → k3) = μ(k, k2 → k3) ∘ c_{x_k2, x_k} ∘ (θ ⊗ id)
    let mut out = Vec::new();
    for k1 in 0..n {
        for k2 in 0..n {
            let basis = two_point_basis(base, lab[k1], lab[k2]);
            let mut closed_side = vec![C64::default(); basis.len()];
            for i in 0..nc {
                if let (Some(a), Some(b)) = (&y1[k1][i], &y2[k2][i]) {
                    let h =
                        a.compose(&tensor(base, &HomMorphism::identity(base, &[lab[k1]]), b))?;
                    coords_of(base, &basis, &h, &mut closed_side, c64(1.0, 0.0));
                }
            }
            let mut open_side: Vec<Option<HomMorphism>> = vec![None; base.rank()];
            for k in 0..n {
                for k3 in 0..n {
                    let (Some(m1), Some(m2)) = (mu.entry(k, k1 * n + k3), mu.entry(k3, k * n + k2))
                    else {
                        continue;
                    };
                    let w = m2
                        .compose(&braid_words(base, &[lab[k2]], &[lab[k]], false)?)?
                        .scale(base.theta(lab[k2]));
                    let h =
                        m1.compose(&tensor(base, &HomMorphism::identity(base, &[lab[k1]]), &w))?;
                    acc(&mut open_side[lab[k]], h)?;
                }
            }
            out.push(CardySides {
                k1,
                k2,
                closed_side,
                open_side: open_side.into_iter().flatten().collect(),
            });
        }
    }
    Ok(out)
}

/// S⁻¹ drawn as a diagram on m : w⊗a1 → a1: close a1 into a loop through i_{a1} and e'_{a1},
/// link its dual leg with the a2 strand by inverse crossings, and weight by dim a2 / D.
pub fn s_inverse_diagram(cat: &CategoryData, m: &HomMorphism) -> Result<Vec<(Label, HomMorphism)>> {
    let l = m.src.len() - 1;
    let w = &m.src[..l];
    let a1 = m.tgt[0];
    let a1d = cat.dual(a1);
    let d = cat.big_d();
    (0..cat.rank())
        .map(|a2| {
            let mut word = w.to_vec();
            word.push(a2);
            let h = HomMorphism::identity(cat, &word);
            let h = then_gen(cat, &h, l, Generator::Cup(a1))?;
            let h = then(cat, &h, 0, m)?;
            let h = then_gen(cat, &h, 1, Generator::BraidInv(a1d, a2))?;
            let h = then_gen(cat, &h, 1, Generator::BraidInv(a2, a1d))?;
            let h = then_gen(cat, &h, 0, Generator::CapL(a1))?;
            Ok((a2, h.scale(re(cat.dim(a2)) / d)))
        })
        .collect()
}

/// Residuals of the Cardy condition: the coordinate form with the S blocks, and the
/// diagrammatic form with the S⁻¹ loop drawn on the open trace.
pub fn cardy_residuals(d: &DoubledCategory, t: &CardyTriple) -> Result<(f64, f64, String)> {
    let base = &d.base;
    let lab = simple_labels(&t.open)?;
    let mut w_norm = Worst::default();
    let mut w_diag = Worst::default();
    for s in cardy_sides(d, t)? {
        let (a2, a3) = (lab[s.k1], lab[s.k2]);
        let basis = two_point_basis(base, a2, a3);
        let mut open_vec = vec![C64::default(); basis.len()];
        let mut diag_vec = vec![C64::default(); basis.len()];
        for h in &s.open_side {
            coords_of(base, &basis, h, &mut open_vec, c64(1.0, 0.0));
            for (_, g) in s_inverse_diagram(base, h)? {
                coords_of(base, &basis, &g, &mut diag_vec, c64(1.0, 0.0));
            }
        }
        let sinv = inverse(&s_first_factor(base, a2, a3))
            .ok_or_else(|| Error::Value("singular S".into()))?;
        let rhs = &sinv * Mat::from_column_slice(basis.len(), 1, &open_vec);
        let lhs = Mat::from_column_slice(basis.len(), 1, &s.closed_side);
        let diag = Mat::from_column_slice(basis.len(), 1, &diag_vec);
        let wit = || format!("open summands ({}, {})", s.k1, s.k2);
        w_norm.see(max_abs_diff(&lhs, &rhs), wit);
        w_diag.see(max_abs_diff(&lhs, &diag), wit);
    }
    let wit = w_norm.witness.clone().unwrap_or_default();
    Ok((w_norm.residual, w_diag.residual, wit))
}

pub fn check_cardy(d: &DoubledCategory, t: &CardyTriple, tol: f64) -> CheckReport {
    timed(|| match cardy_residuals(d, t) {
        Ok((r1, r2, wit)) => CheckReport::aggregate(
            "cardy",
            tol,
            vec![
                CheckReport::new("cardy-ioa", r1, tol).with_witness(wit),
                CheckReport::new("cardy-diagram", r2, tol),
                CheckReport::new("cardy-formulations-agree", (r1 - r2).abs(), tol.max(1e-7)),
            ],
        ),
        Err(e) => CheckReport::new("cardy", f64::INFINITY, tol).with_witness(e.to_string()),
    })
}

/// Every check on a triple: both algebras, modular invariance, open-closed and Cardy.
pub fn check_triple(d: &DoubledCategory, t: &CardyTriple, tol: f64) -> CheckReport {
    let base = &d.base;
    let parts = vec![
        check_algebra(&d.cat, &t.closed, tol),
        check_frobenius(&d.cat, &t.closed, tol),
        check_symmetric(&d.cat, &t.closed, tol),
        check_commutative_trivial_twist(&d.cat, &t.closed, tol),
        check_modular_invariance(d, &t.closed, tol),
        check_algebra(base, &t.open, tol),
        check_frobenius(base, &t.open, tol),
        check_symmetric(base, &t.open, tol),
        check_open_closed(d, t, tol),
        check_cardy(d, t, tol),
    ];
    CheckReport::aggregate("cardy-triple", tol, parts)
}

/// Every nonzero multiset of simples with total multiplicity at most `max_mult`.
pub fn branes_up_to(cat: &CategoryData, max_mult: usize) -> Vec<Brane> {
    let n = cat.rank();
    let mut out = Vec::new();
    let mut counts = vec![0usize; n];
    loop {
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            counts[k] += 1;
            if counts.iter().sum::<usize>() <= max_mult {
                break;
            }
            counts[k] = 0;
            k += 1;
        }
        out.push(Brane::new(counts.iter().copied().enumerate().collect()).expect("nonzero"));
    }
}

/// Build and check the triple for one brane: open-closed, Cardy and the open algebra's axioms.
pub fn check_brane(d: &DoubledCategory, brane: &Brane, tol: f64) -> CheckReport {
    let name = format!("brane[{}]", brane.display(&d.base));
    timed(|| match build_cardy_case(d, brane) {
        Ok(t) => CheckReport::aggregate(
            name,
            tol,
            vec![
                check_algebra(&d.base, &t.open, tol),
                check_frobenius(&d.base, &t.open, tol),
                check_symmetric(&d.base, &t.open, tol),
                check_open_closed(d, &t, tol),
                check_cardy(d, &t, tol),
            ],
        ),
        Err(e) => CheckReport::new(name, f64::INFINITY, tol).with_witness(e.to_string()),
    })
}

/// All branes with total multiplicity 1..=max_mult, each with its report.
pub fn enumerate_branes(
    d: &DoubledCategory,
    max_mult: usize,
    tol: f64,
) -> Vec<(Brane, CheckReport)> {
    branes_up_to(&d.base, max_mult)
        .into_par_iter()
        .map(|b| {
            let r = check_brane(d, &b, tol);
            (b, r)
        })
        .collect()
}

/// The diagonal closed algebra against every closed-sector axiom.
pub fn check_closed(d: &DoubledCategory, tol: f64) -> CheckReport {
    let name = format!("closed[{}]", d.base.name);
    match build_diagonal_closed(d) {
        Ok(a) => CheckReport::aggregate(
            name,
            tol,
            vec![
                check_algebra(&d.cat, &a, tol),
                check_frobenius(&d.cat, &a, tol),
                check_symmetric(&d.cat, &a, tol),
                check_commutative_trivial_twist(&d.cat, &a, tol),
                check_modular_invariance(d, &a, tol),
            ],
        ),
        Err(e) => CheckReport::new(name, f64::INFINITY, tol).with_witness(e.to_string()),
    }
}

// ---------------------------------------------------------------------------
// perturbations

/// Conjugate μ by the automorphism scaling every summand of label `x` by `s`. The result is
/// still an associative unital algebra; φ, Δ and ε are regenerated from it.
pub fn perturb_open_channel(cat: &CategoryData, a: &Algebra, x: Label, s: f64) -> Result<Algebra> {
    let mut g = GenMorphism::identity(cat, &a.obj);
    for (k, w) in a.obj.0.iter().enumerate() {
        if w.len() == 1 && w[0] == x {
            g.entries
                .insert((k, k), HomMorphism::identity(cat, w).scale(re(s)));
        }
    }
    let gi = g.inverse(cat)?;
    let mu = gi.compose(&a.mu)?.compose(&g.tensor(cat, &g))?;
    let iota = gi.compose(&a.iota)?;
    let eps = a
        .eps
        .as_ref()
        .ok_or_else(|| Error::Value("no counit".into()))?
        .compose(&g)?;
    let mut out = Algebra::new(a.host, a.obj.clone(), mu, iota);
    out.eps = Some(eps);
    let (phi, _) = out.bent_pairings(cat)?;
    out.eps = None;
    out.with_phi(phi).complete(cat)
}

/// Scale ι on one closed summand.
pub fn scale_iota(t: &CardyTriple, summand: usize, s: f64) -> CardyTriple {
    let mut out = t.clone();
    for ((_, src), h) in out.iota.entries.iter_mut() {
        if *src == summand {
            *h = h.scale(re(s));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// JSON

pub fn triple_to_json(d: &DoubledCategory, t: &CardyTriple) -> Result<Value> {
    let base = &d.base;
    let lab = simple_labels(&t.open)?;
    let occ = |labels: &[Label], k: usize| labels[..k].iter().filter(|&&y| y == labels[k]).count();
    let cl: Vec<Label> = t.closed.obj.0.iter().map(|w| w[0]).collect();
    let mut entries = Vec::new();
    for (&(k, i), h) in &t.iota.entries {
        let (l, r) = d.split(cl[i]);
        if let Some(b) = h.block(lab[k]) {
            for c in 0..b.ncols() {
                let v = b[(0, c)];
                if v.norm() > 0.0 {
                    entries.push(json!({
                        "cl": [[base.name_of(l), base.name_of(r)], occ(&cl, i)],
                        "op": [base.name_of(lab[k]), occ(&lab, k)],
                        "t": c,
                        "v": [v.re, v.im],
                    }));
                }
            }
        }
    }
    Ok(json!({
        "closed": algebra_to_json(&d.cat, &t.closed)?,
        "open": algebra_to_json(base, &t.open)?,
        "iota": entries,
    }))
}

pub fn triple_from_json(d: &DoubledCategory, v: &Value) -> Result<CardyTriple> {
    let base = &d.base;
    let get = |k: &str| {
        v.get(k)
            .ok_or_else(|| Error::Schema(format!("missing {k}")))
    };
    let closed = algebra_from_json(&d.cat, get("closed")?)?;
    let open = algebra_from_json(base, get("open")?)?;
    let lab = simple_labels(&open)?;
    let cl: Vec<Label> = closed.obj.0.iter().map(|w| w[0]).collect();
    let find = |labels: &[Label], x: Label, idx: u64| {
        let mut seen = 0;
        for (k, &y) in labels.iter().enumerate() {
            if y == x {
                if seen == idx {
                    return Some(k);
                }
                seen += 1;
            }
        }
        None
    };
    let tcl = d.t_obj(&closed.obj);
    let mut iota = GenMorphism::zero(&tcl, &open.obj);
    let schema = |m: &str| Error::Schema(m.to_string());
    for e in get("iota")?
        .as_array()
        .ok_or_else(|| schema("iota must be an array"))?
    {
        let clr = e
            .get("cl")
            .and_then(Value::as_array)
            .filter(|a| a.len() == 2)
            .ok_or_else(|| schema("iota.cl"))?;
        let pair = clr[0]
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| schema("iota.cl label pair"))?;
        let name = |x: &Value| {
            x.as_str()
                .ok_or_else(|| schema("label name"))
                .and_then(|s| base.label_or_err(s))
        };
        let x = d.pair(name(&pair[0])?, name(&pair[1])?);
        let i = find(
            &cl,
            x,
            clr[1].as_u64().ok_or_else(|| schema("iota.cl index"))?,
        )
        .ok_or_else(|| schema("iota.cl component"))?;
        let opr = e
            .get("op")
            .and_then(Value::as_array)
            .filter(|a| a.len() == 2)
            .ok_or_else(|| schema("iota.op"))?;
        let y = name(&opr[0])?;
        let k = find(
            &lab,
            y,
            opr[1].as_u64().ok_or_else(|| schema("iota.op index"))?,
        )
        .ok_or_else(|| schema("iota.op component"))?;
        let c = e
            .get("t")
            .and_then(Value::as_u64)
            .ok_or_else(|| schema("iota.t"))? as usize;
        let vv = e
            .get("v")
            .and_then(Value::as_array)
            .filter(|a| a.len() == 2)
            .ok_or_else(|| schema("iota.v"))?;
        let val = c64(
            vv[0].as_f64().ok_or_else(|| schema("iota.v"))?,
            vv[1].as_f64().ok_or_else(|| schema("iota.v"))?,
        );
        let w = tcl.0[i].clone();
        let mut h = HomMorphism::zero(base, &w, &[y]);
        let blk = h
            .blocks
            .get_mut(&y)
            .ok_or_else(|| schema("iota entry outside a fusion channel"))?;
        if c >= blk.ncols() {
            return Err(schema("iota.t out of range"));
        }
        blk[(0, c)] = val;
        iota.put(k, i, h)?;
    }
    Ok(CardyTriple { closed, open, iota })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::double::build_double;
    use crate::engine::cap_word;

    const TOL: f64 = 1e-9;

    fn ising() -> (CategoryData, DoubledCategory) {
        let cat = builtins::ising();
        let d = build_double(&cat);
        (cat, d)
    }

    #[test]
    fn brane_parsing() {
        let cat = builtins::ising();
        let b = Brane::parse(&cat, "2*sigma + 1 + sigma").unwrap();
        assert_eq!(b.total(), 4);
        assert_eq!(b.display(&cat), "3*sigma+1");
        assert!(Brane::parse(&cat, "psi").is_err());
        assert!(Brane::new(vec![(0, 0)]).is_err());
    }

    #[test]
    fn closed_ising_components() {
        let (_, d) = ising();
        let cl = build_diagonal_closed(&d).unwrap();
        assert_eq!(cl.obj.len(), 3);
        for r in [
            check_algebra(&d.cat, &cl, TOL),
            check_frobenius(&d.cat, &cl, TOL),
            check_symmetric(&d.cat, &cl, TOL),
            check_commutative_trivial_twist(&d.cat, &cl, TOL),
            check_modular_invariance(&d, &cl, TOL),
        ] {
            assert!(r.pass, "{}", r.line());
        }
    }

    #[test]
    fn closed_phi_on_fib_tau() {
        let cat = builtins::fibonacci();
        let d = build_double(&cat);
        let cl = build_diagonal_closed(&d).unwrap();
        let phi = cl.phi.as_ref().unwrap();
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        let big_d = (2.0 + golden).sqrt();
        // θ = e^{-2πih} with h_τ = 2/5
        let theta = C64::from_polar(1.0, -4.0 * std::f64::consts::PI / 5.0);
        let h = phi.entry(1, 1).unwrap();
        let v = h.block(d.diagonal(1)).unwrap()[(0, 0)];
        assert!((v - theta * (big_d / golden)).norm() < 1e-12, "{v}");
    }

    #[test]
    fn trivial_closed_is_unit() {
        let cat = builtins::trivial();
        let d = build_double(&cat);
        let cl = build_diagonal_closed(&d).unwrap();
        assert_eq!(cl.obj.len(), 1);
        let v = cl
            .phi
            .as_ref()
            .unwrap()
            .entry(0, 0)
            .unwrap()
            .blocks
            .values()
            .next()
            .unwrap()[(0, 0)];
        assert!((v - c64(1.0, 0.0)).norm() < 1e-14);
        assert!(check_modular_invariance(&d, &cl, 0.0).residual == 0.0);
    }

    #[test]
    fn dropped_phases_break_symmetry_not_invariance() {
        let cat = builtins::fibonacci();
        let d = build_double(&cat);
        let cl = drop_phi_phases(&d, &build_diagonal_closed(&d).unwrap()).unwrap();
        assert!(!check_symmetric(&d.cat, &cl, TOL).pass);
        assert!(check_modular_invariance(&d, &cl, TOL).pass);
    }

    #[test]
    fn k_matches_cap() {
        // T(e_w) ∘ φ₂(w', w) = e_{T(w)} ∘ (K ⊗ id)
        for cat in builtins::all() {
            let d = build_double(&cat);
            for w in 0..d.cat.rank() {
                let wd = d.cat.dual(w);
                let lhs = d
                    .t_morphism(&generator(&d.cat, &Generator::Cap(w)).unwrap())
                    .compose(&d.phi2(&[wd], &[w]).unwrap())
                    .unwrap();
                let tw = d.t_word(&[w]);
                let k = tensor(
                    &cat,
                    &t_dual_iso(&d, w).unwrap(),
                    &HomMorphism::identity(&cat, &tw),
                );
                let rhs = cap_word(&cat, &tw).unwrap().compose(&k).unwrap();
                assert!(
                    lhs.max_diff(&rhs).unwrap() < 1e-12,
                    "{} {}",
                    cat.name,
                    d.cat.name_of(w)
                );
            }
        }
    }

    #[test]
    fn iota_star_matches_closed_form() {
        for cat in builtins::all() {
            let d = build_double(&cat);
            for x in 0..cat.rank() {
                let r = check_iota_star(&d, &Brane::new(vec![(x, 1)]).unwrap(), TOL);
                assert!(r.pass, "{} {}", cat.name, r.line());
            }
        }
    }

    #[test]
    fn ising_sigma_triple() {
        let (cat, d) = ising();
        let t = build_cardy_case(&d, &Brane::parse(&cat, "sigma").unwrap()).unwrap();
        assert_eq!(t.open.obj.len(), 2);
        let r = check_triple(&d, &t, TOL);
        assert!(
            r.pass,
            "{:#?}",
            r.leaves().iter().filter(|l| !l.pass).collect::<Vec<_>>()
        );
    }

    #[test]
    fn word_and_simple_forms_agree_on_open_closed() {
        let cat = builtins::fibonacci();
        let d = build_double(&cat);
        let t = build_cardy_words(&d, &Brane::parse(&cat, "1+tau").unwrap()).unwrap();
        assert!(check_open_closed(&d, &t, TOL).pass);
        assert!(check_open_closed(&d, &to_simple_form(&d, &t).unwrap(), TOL).pass);
    }

    #[test]
    fn cardy_formulations_agree() {
        let cat = builtins::z3();
        let d = build_double(&cat);
        let t = build_cardy_case(&d, &Brane::parse(&cat, "1+2").unwrap()).unwrap();
        let (a, b, _) = cardy_residuals(&d, &t).unwrap();
        assert!(a < TOL && b < TOL);
        let bad = scale_iota(&t, 1, 2.0);
        let (a, b, _) = cardy_residuals(&d, &bad).unwrap();
        assert!(a > 1e-3 && (a - b).abs() < 1e-7, "{a} {b}");
    }

    #[test]
    fn perturbed_open_product_breaks_cardy() {
        let cat = builtins::fibonacci();
        let d = build_double(&cat);
        let t = build_cardy_case(&d, &Brane::parse(&cat, "tau").unwrap()).unwrap();
        let mut p = t.clone();
        p.open = perturb_open_channel(&cat, &t.open, 1, 1.1).unwrap();
        assert!(check_algebra(&cat, &p.open, TOL).pass);
        assert!(check_cardy(&d, &p, TOL).residual > 1e-3);
    }

    #[test]
    fn scaled_iota_breaks_cardy() {
        let (cat, d) = ising();
        let t = build_cardy_case(&d, &Brane::parse(&cat, "sigma").unwrap()).unwrap();
        let p = scale_iota(&t, 2, 2.0);
        assert!(!check_cardy(&d, &p, TOL).pass);
        assert!(!check_open_closed(&d, &p, TOL).pass);
    }

    #[test]
    fn brane_enumeration() {
        let fib = build_double(&builtins::fibonacci());
        let all = enumerate_branes(&fib, 2, TOL);
        assert_eq!(all.len(), 5);
        assert!(all.iter().all(|(_, r)| r.pass));
        assert_eq!(
            enumerate_branes(&build_double(&builtins::trivial()), 2, TOL).len(),
            2
        );
    }

    #[test]
    fn triple_json_round_trip() {
        let (cat, d) = ising();
        let t = build_cardy_case(&d, &Brane::parse(&cat, "1+sigma").unwrap()).unwrap();
        let v = triple_to_json(&d, &t).unwrap();
        let back = triple_from_json(&d, &v).unwrap();
        let again = triple_to_json(&d, &back).unwrap();
        assert_eq!(
            again["iota"].as_array().unwrap().len(),
            v["iota"].as_array().unwrap().len()
        );
        assert!(check_open_closed(&d, &back, TOL).pass);
        assert!(check_cardy(&d, &back, TOL).pass);
        let mut broken = v.clone();
        broken["iota"][0]["op"] = json!(["psi", 0]);
        assert!(triple_from_json(&d, &broken).is_err());
    }
}
