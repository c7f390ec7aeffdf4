//! Algebra objects with optional coalgebra and bilinear-form data, and their checks.
//!
//! Conventions: ε = e_A ∘ (φ ⊗ ι) and Δ = (μ ⊗ φ⁻¹) ∘ (id ⊗ i_A) when generated from φ.
//! The two bent pairings are Φ_r = ((ε∘μ) ⊗ id_{A'}) ∘ (id ⊗ i_A) and
//! Φ_l = (id_{A'} ⊗ (ε∘μ)) ∘ (i'_A ⊗ id); the algebra is symmetric when Φ_r = Φ_l.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::category::{CategoryData, Label};
use crate::error::{Error, Result};
use crate::hom::HomMorphism;
use crate::numeric::{c64, C64};
use crate::object::{
    braid_obj, cap_obj, capl_obj, cup_obj, cupl_obj, relabel, transpose, twist_obj, Decomposition,
    GenMorphism, Obj,
};
use crate::report::{timed, CheckReport, Worst};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Host {
    Base,
    Double,
}

#[derive(Clone, Debug)]
pub struct Algebra {
    pub host: Host,
    pub obj: Obj,
    pub mu: GenMorphism,
    pub iota: GenMorphism,
    pub delta: Option<GenMorphism>,
    pub eps: Option<GenMorphism>,
    /// A → A'.
    pub phi: Option<GenMorphism>,
}

impl Algebra {
    pub fn new(host: Host, obj: Obj, mu: GenMorphism, iota: GenMorphism) -> Self {
        Algebra {
            host,
            obj,
            mu,
            iota,
            delta: None,
            eps: None,
            phi: None,
        }
    }

    /// The unit object with its canonical structure.
    pub fn unit(cat: &CategoryData, host: Host) -> Self {
        let u = Obj::unit();
        let id = GenMorphism::identity(cat, &u);
        let mut a = Algebra::new(host, u.clone(), id.clone(), id.clone());
        a.phi = Some(id);
        a
    }

    pub fn with_phi(mut self, phi: GenMorphism) -> Self {
        self.phi = Some(phi);
        self
    }

    fn id(&self, cat: &CategoryData) -> GenMorphism {
        GenMorphism::identity(cat, &self.obj)
    }

    /// ε = e_A ∘ (φ ⊗ ι).
    pub fn generated_counit(&self, cat: &CategoryData) -> Result<GenMorphism> {
        let phi = self
            .phi
            .as_ref()
            .ok_or_else(|| Error::Value("no bilinear form".into()))?;
        let lift = phi.tensor(cat, &self.iota);
        let tgt = lift.tgt.clone();
        let lift = relabel(lift, &self.obj, &tgt);
        cap_obj(cat, &self.obj).compose(&lift)
    }

    /// Δ = (μ ⊗ φ⁻¹) ∘ (id ⊗ i_A).
    pub fn generated_coproduct(&self, cat: &CategoryData) -> Result<GenMorphism> {
        let phi = self
            .phi
            .as_ref()
            .ok_or_else(|| Error::Value("no bilinear form".into()))?;
        let phi_inv = phi.inverse(cat)?;
        let open = self.id(cat).tensor(cat, &cup_obj(cat, &self.obj));
        let open = relabel(open.clone(), &self.obj, &open.tgt);
        self.mu.tensor(cat, &phi_inv).compose(&open)
    }

    /// Stored coalgebra, or the one generated from φ; the flag is true when generated.
    pub fn coalgebra(&self, cat: &CategoryData) -> Result<(GenMorphism, GenMorphism, bool)> {
        match (&self.delta, &self.eps) {
            (Some(d), Some(e)) => Ok((d.clone(), e.clone(), false)),
            _ => Ok((
                self.generated_coproduct(cat)?,
                self.generated_counit(cat)?,
                true,
            )),
        }
    }

    /// Fill in Δ and ε from φ when absent.
    pub fn complete(mut self, cat: &CategoryData) -> Result<Self> {
        if self.delta.is_none() || self.eps.is_none() {
            let (d, e, _) = self.coalgebra(cat)?;
            self.delta = Some(d);
            self.eps = Some(e);
        }
        Ok(self)
    }

    /// Φ_r and Φ_l built from ε∘μ.
    pub fn bent_pairings(&self, cat: &CategoryData) -> Result<(GenMorphism, GenMorphism)> {
        let eps = match &self.eps {
            Some(e) => e.clone(),
            None => self.generated_counit(cat)?,
        };
        let kappa = eps.compose(&self.mu)?;
        let ad = self.obj.dual(cat);
        let id_ad = GenMorphism::identity(cat, &ad);
        let open_r = self.id(cat).tensor(cat, &cup_obj(cat, &self.obj));
        let open_r = relabel(open_r.clone(), &self.obj, &open_r.tgt);
        let right = kappa.tensor(cat, &id_ad).compose(&open_r)?;
        let right = relabel(right, &self.obj, &ad);
        let open_l = cupl_obj(cat, &self.obj).tensor(cat, &self.id(cat));
        let open_l = relabel(open_l.clone(), &self.obj, &open_l.tgt);
        let left = id_ad.tensor(cat, &kappa).compose(&open_l)?;
        let left = relabel(left, &self.obj, &ad);
        Ok((right, left))
    }

    /// Transport all structure along a decomposition into simple summands.
    pub fn transport(&self, cat: &CategoryData, dec: &Decomposition) -> Result<Algebra> {
        let (e, p) = (&dec.embed, &dec.project);
        let s = &dec.simple;
        let mu = p.compose(&self.mu)?.compose(&e.tensor(cat, e))?;
        let iota = relabel(p.compose(&self.iota)?, &Obj::unit(), s);
        let mut out = Algebra::new(self.host, s.clone(), mu, iota);
        if let Some(phi) = &self.phi {
            out.phi = Some(transpose(cat, e).compose(phi)?.compose(e)?);
        }
        if let (Some(d), Some(eps)) = (&self.delta, &self.eps) {
            out.delta = Some(p.tensor(cat, p).compose(d)?.compose(e)?);
            out.eps = Some(eps.compose(e)?);
        }
        Ok(out)
    }
}

pub fn check_algebra(cat: &CategoryData, a: &Algebra, tol: f64) -> CheckReport {
    let run = || -> Result<Vec<CheckReport>> {
        let id = a.id(cat);
        let l = a.mu.compose(&a.mu.tensor(cat, &id))?;
        let r = a.mu.compose(&id.tensor(cat, &a.mu))?;
        let assoc = CheckReport::new("associativity", l.max_diff(&r)?, tol);
        let ul =
            a.mu.compose(&relabel(a.iota.tensor(cat, &id), &a.obj, &a.mu.src))?;
        let ur =
            a.mu.compose(&relabel(id.tensor(cat, &a.iota), &a.obj, &a.mu.src))?;
        let unit = CheckReport::new("unit", ul.max_diff(&id)?.max(ur.max_diff(&id)?), tol);
        Ok(vec![assoc, unit])
    };
    wrap("algebra", tol, run)
}

pub fn check_frobenius(cat: &CategoryData, a: &Algebra, tol: f64) -> CheckReport {
    let run = || -> Result<Vec<CheckReport>> {
        let (delta, eps, generated) = a.coalgebra(cat)?;
        let id = a.id(cat);
        let l = delta.tensor(cat, &id).compose(&delta)?;
        let r = id.tensor(cat, &delta).compose(&delta)?;
        let mut coassoc = CheckReport::new("coassociativity", l.max_diff(&r)?, tol);
        if generated {
            coassoc = coassoc.with_witness("coproduct generated from phi");
        }
        let cl = relabel(eps.tensor(cat, &id).compose(&delta)?, &a.obj, &a.obj);
        let cr = relabel(id.tensor(cat, &eps).compose(&delta)?, &a.obj, &a.obj);
        let counit = CheckReport::new("counit", cl.max_diff(&id)?.max(cr.max_diff(&id)?), tol);
        let mid = delta.compose(&a.mu)?;
        let f1 = id.tensor(cat, &a.mu).compose(&delta.tensor(cat, &id))?;
        let f2 = a.mu.tensor(cat, &id).compose(&id.tensor(cat, &delta))?;
        let frob = CheckReport::new("frobenius", f1.max_diff(&mid)?.max(f2.max_diff(&mid)?), tol);
        let mut parts = vec![coassoc, counit, frob];
        if let (Some(d), Some(e), Some(_)) = (&a.delta, &a.eps, &a.phi) {
            let gd = a.generated_coproduct(cat)?;
            let ge = a.generated_counit(cat)?;
            parts.push(CheckReport::new(
                "coalgebra-from-phi",
                gd.max_diff(d)?.max(ge.max_diff(e)?),
                tol,
            ));
        }
        Ok(parts)
    };
    wrap("frobenius", tol, run)
}

/// Right and left A-actions on A': ract = (e_A ⊗ id)(id ⊗ μ ⊗ id)(id ⊗ id ⊗ i_A) and
/// lact = (id ⊗ e'_A)(id ⊗ μ ⊗ id)(i'_A ⊗ id ⊗ id).
pub fn dual_actions(cat: &CategoryData, a: &Algebra) -> Result<(GenMorphism, GenMorphism)> {
    let ad = a.obj.dual(cat);
    let id = a.id(cat);
    let id_ad = GenMorphism::identity(cat, &ad);
    let s1 = id_ad.tensor(cat, &id).tensor(cat, &cup_obj(cat, &a.obj));
    let src = ad.tensor(&a.obj);
    let s1 = relabel(s1.clone(), &src, &s1.tgt);
    let s2 = id_ad.tensor(cat, &a.mu).tensor(cat, &id_ad);
    let s3 = cap_obj(cat, &a.obj).tensor(cat, &id_ad);
    let ract = relabel(s3.compose(&s2)?.compose(&s1)?, &src, &ad);

    let src = a.obj.tensor(&ad);
    let t1 = cupl_obj(cat, &a.obj).tensor(cat, &id).tensor(cat, &id_ad);
    let t1 = relabel(t1.clone(), &src, &t1.tgt);
    let t2 = id_ad.tensor(cat, &a.mu).tensor(cat, &id_ad);
    let t3 = id_ad.tensor(cat, &capl_obj(cat, &a.obj));
    let lact = relabel(t3.compose(&t2)?.compose(&t1)?, &src, &ad);
    Ok((ract, lact))
}

pub fn check_symmetric(cat: &CategoryData, a: &Algebra, tol: f64) -> CheckReport {
    let run = || -> Result<Vec<CheckReport>> {
        let phi = a
            .phi
            .as_ref()
            .ok_or_else(|| Error::Value("no bilinear form".into()))?;
        let (right, left) = a.bent_pairings(cat)?;
        let sym = CheckReport::new(
            "symmetry",
            right.max_diff(phi)?.max(left.max_diff(phi)?),
            tol,
        );
        let (ract, lact) = dual_actions(cat, a)?;
        let id = a.id(cat);
        let lhs = phi.compose(&a.mu)?;
        let r = ract.compose(&phi.tensor(cat, &id))?;
        let l = lact.compose(&id.tensor(cat, phi))?;
        let inv = CheckReport::new("invariance", lhs.max_diff(&r)?.max(lhs.max_diff(&l)?), tol);
        let cond = phi.condition(cat);
        let nondeg = CheckReport::new(
            "nondegenerate",
            if cond.is_finite() { 0.0 } else { f64::INFINITY },
            tol,
        )
        .with_witness(format!("condition {cond:.3e}"));
        Ok(vec![sym, inv, nondeg])
    };
    wrap("symmetric", tol, run)
}

/// μ ∘ c_{A,A} = μ and θ_A = id.
pub fn check_commutative_trivial_twist(cat: &CategoryData, a: &Algebra, tol: f64) -> CheckReport {
    let run = || -> Result<Vec<CheckReport>> {
        let c = braid_obj(cat, &a.obj, &a.obj, false);
        let comm = CheckReport::new("commutativity", a.mu.compose(&c)?.max_diff(&a.mu)?, tol);
        let th = twist_obj(cat, &a.obj, 1);
        let mut w = Worst::default();
        for k in 0..a.obj.len() {
            let d = th.entry(k, k).map(|h| {
                h.max_diff(&HomMorphism::identity(cat, &a.obj.0[k]))
                    .unwrap()
            });
            w.see(d.unwrap_or(0.0), || format!("summand {k}"));
        }
        Ok(vec![comm, w.report("trivial-twist", tol)])
    };
    wrap("commutative-trivial-twist", tol, run)
}

fn wrap(name: &str, tol: f64, run: impl FnOnce() -> Result<Vec<CheckReport>>) -> CheckReport {
    timed(|| match run() {
        Ok(parts) => CheckReport::aggregate(name, tol, parts),
        Err(e) => CheckReport::new(name, f64::INFINITY, tol).with_witness(e.to_string()),
    })
}

// ---------------------------------------------------------------------------
// JSON presentation over simple summands

fn label_json(cat: &CategoryData, host: Host, x: Label) -> Value {
    match host {
        Host::Base => json!(cat.name_of(x)),
        Host::Double => {
            let (l, r) = cat.name_of(x).split_once(':').expect("doubled label name");
            json!([l, r])
        }
    }
}

fn label_from_json(cat: &CategoryData, v: &Value) -> Result<Label> {
    let name = match v {
        Value::String(s) => s.clone(),
        Value::Array(xs) if xs.len() == 2 => {
            let s = |k: usize| {
                xs[k]
                    .as_str()
                    .map(str::to_string)
                    .ok_or_else(|| Error::Schema("label pair".into()))
            };
            format!("{}:{}", s(0)?, s(1)?)
        }
        _ => return Err(Error::Schema(format!("bad label {v}"))),
    };
    cat.label_or_err(&name)
}

fn cplx(v: C64) -> Value {
    json!([v.re, v.im])
}

fn cplx_from(v: &Value) -> Result<C64> {
    match v
        .as_array()
        .map(|a| a.iter().map(|x| x.as_f64()).collect::<Vec<_>>())
    {
        Some(xs) if xs.len() == 2 && xs.iter().all(Option::is_some) => {
            Ok(c64(xs[0].unwrap(), xs[1].unwrap()))
        }
        _ => Err(Error::Schema(format!("expected [re, im], got {v}"))),
    }
}

/// (label, index within label) for each summand of a simple object.
fn component_index(obj: &Obj) -> Vec<(Label, usize)> {
    let mut seen: Vec<(Label, usize)> = Vec::new();
    obj.0
        .iter()
        .map(|w| {
            let x = w[0];
            let k = seen.iter().filter(|(y, _)| *y == x).count();
            seen.push((x, k));
            (x, k)
        })
        .collect()
}

fn ref_json(cat: &CategoryData, host: Host, r: (Label, usize)) -> Value {
    json!([label_json(cat, host, r.0), r.1])
}

fn is_simple(obj: &Obj) -> bool {
    obj.0.iter().all(|w| w.len() == 1)
}

/// Serialize a simple-form algebra. Omitted entries are zero.
pub fn algebra_to_json(cat: &CategoryData, a: &Algebra) -> Result<Value> {
    if !is_simple(&a.obj) {
        return Err(Error::Value(
            "algebra must be transported to simple summands first".into(),
        ));
    }
    let idx = component_index(&a.obj);
    let n = a.obj.len();
    let mut comps: Vec<(Label, usize)> = Vec::new();
    for &(x, _) in &idx {
        match comps.iter_mut().find(|(y, _)| *y == x) {
            Some(c) => c.1 += 1,
            None => comps.push((x, 1)),
        }
    }
    let mut mu = Vec::new();
    for (&(t, s), h) in &a.mu.entries {
        let c = a.obj.0[t][0];
        if let Some(b) = h.block(c) {
            for k in 0..b.ncols() {
                if b[(0, k)].norm() > 0.0 {
                    mu.push(json!({
                        "a": ref_json(cat, a.host, idx[s / n]),
                        "b": ref_json(cat, a.host, idx[s % n]),
                        "c": ref_json(cat, a.host, idx[t]),
                        "t": k,
                        "v": cplx(b[(0, k)]),
                    }));
                }
            }
        }
    }
    let mut iota = Vec::new();
    for (&(t, _), h) in &a.iota.entries {
        if let Some(v) = h
            .block(cat.unit())
            .map(|b| b[(0, 0)])
            .filter(|v| v.norm() > 0.0)
        {
            iota.push(json!({"c": ref_json(cat, a.host, idx[t]), "v": cplx(v)}));
        }
    }
    let mut out = json!({
        "host": a.host,
        "components": comps.iter().map(|&(x, m)| json!([label_json(cat, a.host, x), m])).collect::<Vec<_>>(),
        "mu": mu,
        "iota": iota,
    });
    if let Some(phi) = &a.phi {
        let mut v = Vec::new();
        for (&(t, s), h) in &phi.entries {
            let c = h.tgt[0];
            if let Some(x) = h.block(c).map(|b| b[(0, 0)]).filter(|x| x.norm() > 0.0) {
                v.push(json!({"a": ref_json(cat, a.host, idx[s]), "b": ref_json(cat, a.host, idx[t]), "v": cplx(x)}));
            }
        }
        out["phi"] = json!(v);
    }
    if let (Some(d), Some(e)) = (&a.delta, &a.eps) {
        let mut dv = Vec::new();
        for (&(t, s), h) in &d.entries {
            let c = a.obj.0[s][0];
            if let Some(b) = h.block(c) {
                for k in 0..b.nrows() {
                    if b[(k, 0)].norm() > 0.0 {
                        dv.push(json!({
                            "c": ref_json(cat, a.host, idx[s]),
                            "a": ref_json(cat, a.host, idx[t / n]),
                            "b": ref_json(cat, a.host, idx[t % n]),
                            "t": k,
                            "v": cplx(b[(k, 0)]),
                        }));
                    }
                }
            }
        }
        let mut ev = Vec::new();
        for (&(_, s), h) in &e.entries {
            if let Some(x) = h
                .block(cat.unit())
                .map(|b| b[(0, 0)])
                .filter(|x| x.norm() > 0.0)
            {
                ev.push(json!({"a": ref_json(cat, a.host, idx[s]), "v": cplx(x)}));
            }
        }
        out["delta"] = json!(dv);
        out["eps"] = json!(ev);
    }
    Ok(out)
}

/// Parse the JSON presentation against the category hosting it.
pub fn algebra_from_json(cat: &CategoryData, v: &Value) -> Result<Algebra> {
    let host: Host = serde_json::from_value(v.get("host").cloned().unwrap_or(json!("base")))
        .map_err(|e| Error::Schema(format!("host: {e}")))?;
    let comps = v
        .get("components")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Schema("missing components".into()))?;
    let mut labels = Vec::new();
    for c in comps {
        let pair = c
            .as_array()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| Error::Schema("component".into()))?;
        let x = label_from_json(cat, &pair[0])?;
        let m = pair[1]
            .as_u64()
            .ok_or_else(|| Error::Schema("multiplicity".into()))? as usize;
        if m == 0 {
            return Err(Error::Schema("zero multiplicity".into()));
        }
        labels.extend(std::iter::repeat_n(x, m));
    }
    if labels.is_empty() {
        return Err(Error::Schema("empty algebra".into()));
    }
    let obj = Obj::simples(&labels);
    let idx = component_index(&obj);
    let n = obj.len();
    let summand = |r: &Value| -> Result<usize> {
        let p = r
            .as_array()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| Error::Schema(format!("reference {r}")))?;
        let x = label_from_json(cat, &p[0])?;
        let k = p[1].as_u64().ok_or_else(|| Error::Schema("index".into()))? as usize;
        idx.iter()
            .position(|&q| q == (x, k))
            .ok_or_else(|| Error::Schema(format!("no component {r}")))
    };
    let field = |e: &Value, k: &str| {
        e.get(k)
            .cloned()
            .ok_or_else(|| Error::Schema(format!("missing {k}")))
    };
    let entries = |k: &str| v.get(k).and_then(Value::as_array).cloned();

    let aa = obj.tensor(&obj);
    let mut mu = GenMorphism::zero(&aa, &obj);
    for e in entries("mu").ok_or_else(|| Error::Schema("missing mu".into()))? {
        let (sa, sb, sc) = (
            summand(&field(&e, "a")?)?,
            summand(&field(&e, "b")?)?,
            summand(&field(&e, "c")?)?,
        );
        let t = field(&e, "t")?
            .as_u64()
            .ok_or_else(|| Error::Schema("t".into()))? as usize;
        let (a, b, c) = (labels[sa], labels[sb], labels[sc]);
        if t >= cat.n(a, b, c) {
            return Err(Error::Schema(format!("no channel {t} for mu entry {e}")));
        }
        let mut h = HomMorphism::zero(cat, &[a, b], &[c]);
        h.blocks.get_mut(&c).expect("channel")[(0, t)] = cplx_from(&field(&e, "v")?)?;
        mu.put(sc, sa * n + sb, h)?;
    }
    let mut iota = GenMorphism::zero(&Obj::unit(), &obj);
    for e in entries("iota").unwrap_or_default() {
        let sc = summand(&field(&e, "c")?)?;
        if labels[sc] != cat.unit() {
            return Err(Error::Schema("iota must land on unit components".into()));
        }
        let mut h = HomMorphism::zero(cat, &[], &[labels[sc]]);
        h.blocks.get_mut(&cat.unit()).expect("unit")[(0, 0)] = cplx_from(&field(&e, "v")?)?;
        iota.put(sc, 0, h)?;
    }
    let mut alg = Algebra::new(host, obj.clone(), mu, iota);
    if let Some(ph) = entries("phi") {
        let od = obj.dual(cat);
        let mut phi = GenMorphism::zero(&obj, &od);
        for e in ph {
            let (s, t) = (summand(&field(&e, "a")?)?, summand(&field(&e, "b")?)?);
            if cat.dual(labels[t]) != labels[s] {
                return Err(Error::Schema(format!(
                    "phi entry {e} does not pair a with a'"
                )));
            }
            let mut h = HomMorphism::zero(cat, &[labels[s]], &od.0[t]);
            h.blocks.get_mut(&labels[s]).expect("charge")[(0, 0)] = cplx_from(&field(&e, "v")?)?;
            phi.put(t, s, h)?;
        }
        alg.phi = Some(phi);
    }
    if let (Some(dv), Some(ev)) = (entries("delta"), entries("eps")) {
        let mut delta = GenMorphism::zero(&obj, &aa);
        for e in dv {
            let (sa, sb, sc) = (
                summand(&field(&e, "a")?)?,
                summand(&field(&e, "b")?)?,
                summand(&field(&e, "c")?)?,
            );
            let t = field(&e, "t")?
                .as_u64()
                .ok_or_else(|| Error::Schema("t".into()))? as usize;
            let (a, b, c) = (labels[sa], labels[sb], labels[sc]);
            if t >= cat.n(a, b, c) {
                return Err(Error::Schema(format!("no channel {t} for delta entry {e}")));
            }
            let mut h = HomMorphism::zero(cat, &[c], &[a, b]);
            h.blocks.get_mut(&c).expect("channel")[(t, 0)] = cplx_from(&field(&e, "v")?)?;
            delta.put(sa * n + sb, sc, h)?;
        }
        let mut eps = GenMorphism::zero(&obj, &Obj::unit());
        for e in ev {
            let s = summand(&field(&e, "a")?)?;
            let mut h = HomMorphism::zero(cat, &[labels[s]], &[]);
            if let Some(b) = h.blocks.get_mut(&cat.unit()) {
                b[(0, 0)] = cplx_from(&field(&e, "v")?)?;
            }
            eps.put(0, s, h)?;
        }
        alg.delta = Some(delta);
        alg.eps = Some(eps);
    }
    Ok(alg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::cardy::{build_diagonal_closed, build_open, Brane};
    use crate::double::build_double;
    use crate::numeric::re;

    const TOL: f64 = 1e-9;

    fn all_pass(cat: &CategoryData, a: &Algebra) {
        for r in [
            check_algebra(cat, a, TOL),
            check_frobenius(cat, a, TOL),
            check_symmetric(cat, a, TOL),
        ] {
            assert!(r.pass, "{}", r.line());
        }
    }

    #[test]
    fn unit_algebra() {
        for cat in builtins::all() {
            let a = Algebra::unit(&cat, Host::Base).complete(&cat).unwrap();
            all_pass(&cat, &a);
            assert!(check_commutative_trivial_twist(&cat, &a, TOL).pass);
        }
    }

    #[test]
    fn x_tensor_x_dual() {
        let cat = builtins::fibonacci();
        let a = build_open(&cat, &Brane::parse(&cat, "1+tau").unwrap().obj()).unwrap();
        all_pass(&cat, &a);
        let dec = crate::object::decompose(&cat, &a.obj);
        all_pass(&cat, &a.transport(&cat, &dec).unwrap());
    }

    #[test]
    fn generated_counit_of_open() {
        let cat = builtins::ising();
        let a = build_open(&cat, &Brane::parse(&cat, "sigma").unwrap().obj()).unwrap();
        let e = a.generated_counit(&cat).unwrap();
        assert!(e.max_diff(a.eps.as_ref().unwrap()).unwrap() < 1e-12);
    }

    #[test]
    fn doubled_product_channel_breaks_associativity() {
        let d = build_double(&builtins::fibonacci());
        let mut a = build_diagonal_closed(&d).unwrap();
        let tt = a.mu.entries.get_mut(&(1, 3)).unwrap();
        *tt = tt.scale(re(2.0));
        let r = check_algebra(&d.cat, &a, TOL);
        assert!(!r.pass && r.residual > 1e-2, "{}", r.line());
    }

    #[test]
    fn twisted_coproduct_fails() {
        let cat = builtins::fibonacci();
        let mut a = build_open(&cat, &Brane::parse(&cat, "tau").unwrap().obj()).unwrap();
        let id = GenMorphism::identity(&cat, &a.obj);
        let tw = twist_obj(&cat, &a.obj, 1).tensor(&cat, &id);
        a.delta = Some(tw.compose(a.delta.as_ref().unwrap()).unwrap());
        assert!(!check_frobenius(&cat, &a, TOL).pass);
    }

    #[test]
    fn rescaled_form_is_not_symmetric() {
        let cat = builtins::ising();
        let a = build_open(&cat, &Brane::parse(&cat, "1+sigma").unwrap().obj()).unwrap();
        let a = a
            .transport(&cat, &crate::object::decompose(&cat, &a.obj))
            .unwrap();
        let mut phi = a.phi.clone().unwrap();
        let h = phi.entries.values_mut().next().unwrap();
        *h = h.scale(re(3.0));
        let b = a.with_phi(phi);
        let r = check_symmetric(&cat, &b, TOL);
        assert!(!r.pass, "{}", r.line());
    }

    #[test]
    fn tau_left_only_has_twist() {
        let d = build_double(&builtins::fibonacci());
        let x = d.pair(1, 0);
        let obj = Obj::simples(&[x]);
        let a = Algebra::new(
            Host::Double,
            obj.clone(),
            GenMorphism::zero(&obj.tensor(&obj), &obj),
            GenMorphism::zero(&Obj::unit(), &obj),
        );
        let r = check_commutative_trivial_twist(&d.cat, &a, TOL);
        assert!(!r.pass && r.residual > 0.5, "{}", r.line());
    }

    #[test]
    fn json_round_trip() {
        let d = build_double(&builtins::ising());
        let a = build_diagonal_closed(&d).unwrap();
        let v = algebra_to_json(&d.cat, &a).unwrap();
        let b = algebra_from_json(&d.cat, &v).unwrap();
        assert!(b.mu.max_diff(&a.mu).unwrap() < 1e-14);
        assert!(
            b.phi
                .as_ref()
                .unwrap()
                .max_diff(a.phi.as_ref().unwrap())
                .unwrap()
                < 1e-14
        );
        all_pass(&d.cat, &b);
        let cat = builtins::ising();
        assert!(matches!(
            algebra_from_json(&cat, &json!({"host": "base"})),
            Err(Error::Schema(_))
        ));
    }
}
