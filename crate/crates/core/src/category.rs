//! Skeletal presentation of a modular tensor category and its JSON form.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::{Arc, RwLock};

use serde::Deserialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::hom::{self, TreeBasis};
use crate::numeric::{inverse, mod8_centered, zeros, Mat, C64};

pub type Label = usize;

/// A basis element of a three-leg tree: intermediate label and the two vertex multiplicities.
pub type TreeKey = (Label, usize, usize);

/// F-move for fixed (a,b,c,d).
///
/// Left trees are `(a,b->e,i)(e,c->d,j)`, right trees `(b,c->f,k)(a,f->d,l)`, and
/// `left[r] = sum_s m[(r,s)] right[s]` as splitting trees.
#[derive(Clone, Debug)]
pub struct FBlock {
    pub left: Vec<TreeKey>,
    pub right: Vec<TreeKey>,
    pub left_index: HashMap<TreeKey, usize>,
    pub right_index: HashMap<TreeKey, usize>,
    pub m: Mat,
    pub inv: Mat,
}

/// Raw ingredients; `CategoryData::from_parts` indexes them.
#[derive(Clone, Debug)]
pub struct CategoryParts {
    pub name: String,
    pub labels: Vec<String>,
    pub unit: Label,
    pub dual: Vec<Label>,
    /// `fusion[(a*n+b)*n+c] = N_ab^c`
    pub fusion: Vec<usize>,
    pub dims: Vec<f64>,
    pub twists: Vec<C64>,
    pub fs: Vec<i32>,
    pub cmod8: f64,
    pub cmod24: Option<f64>,
    /// keys (a,b,c,d,e,f,i,j,k,l)
    pub f: HashMap<[usize; 10], C64>,
    /// keys (a,b,c,i,j)
    pub r: HashMap<[usize; 5], C64>,
}

pub struct CategoryData {
    pub name: String,
    pub labels: Vec<String>,
    unit: Label,
    dual: Vec<Label>,
    fusion: Vec<usize>,
    dims: Vec<f64>,
    twists: Vec<C64>,
    fs: Vec<i32>,
    pub cmod8: f64,
    pub cmod24: Option<f64>,
    fblocks: Vec<Option<FBlock>>,
    rblocks: Vec<Option<(Mat, Mat)>>,
    tree_cache: RwLock<HashMap<(Vec<Label>, Label), Arc<TreeBasis>>>,
}

impl Clone for CategoryData {
    fn clone(&self) -> Self {
        CategoryData {
            name: self.name.clone(),
            labels: self.labels.clone(),
            unit: self.unit,
            dual: self.dual.clone(),
            fusion: self.fusion.clone(),
            dims: self.dims.clone(),
            twists: self.twists.clone(),
            fs: self.fs.clone(),
            cmod8: self.cmod8,
            cmod24: self.cmod24,
            fblocks: self.fblocks.clone(),
            rblocks: self.rblocks.clone(),
            tree_cache: RwLock::new(HashMap::new()),
        }
    }
}

impl std::fmt::Debug for CategoryData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CategoryData")
            .field("name", &self.name)
            .field("labels", &self.labels)
            .finish()
    }
}

impl CategoryData {
    pub fn from_parts(p: CategoryParts) -> Result<Self> {
        let n = p.labels.len();
        if n == 0 {
            return Err(Error::Schema("no labels".into()));
        }
        if p.fusion.len() != n * n * n
            || p.dims.len() != n
            || p.twists.len() != n
            || p.fs.len() != n
            || p.dual.len() != n
        {
            return Err(Error::Schema("table sizes do not match label count".into()));
        }
        let nn = |a: usize, b: usize, c: usize| p.fusion[(a * n + b) * n + c];

        let mut fblocks = Vec::with_capacity(n * n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let mut left = Vec::new();
                        let mut right = Vec::new();
                        for e in 0..n {
                            for i in 0..nn(a, b, e) {
                                for j in 0..nn(e, c, d) {
                                    left.push((e, i, j));
                                }
                            }
                        }
                        for f in 0..n {
                            for k in 0..nn(b, c, f) {
                                for l in 0..nn(a, f, d) {
                                    right.push((f, k, l));
                                }
                            }
                        }
                        if left.is_empty() && right.is_empty() {
                            fblocks.push(None);
                            continue;
                        }
                        let name = |x: usize| p.labels[x].as_str();
                        if left.len() != right.len() {
                            return Err(Error::Value(format!(
                                "F block ({},{},{};{}) is not square: {} vs {} trees",
                                name(a),
                                name(b),
                                name(c),
                                name(d),
                                left.len(),
                                right.len()
                            )));
                        }
                        let mut m = zeros(left.len(), right.len());
                        for (r, &(e, i, j)) in left.iter().enumerate() {
                            for (s, &(f, k, l)) in right.iter().enumerate() {
                                if let Some(v) = p.f.get(&[a, b, c, d, e, f, i, j, k, l]) {
                                    m[(r, s)] = *v;
                                }
                            }
                        }
                        let inv = inverse(&m).ok_or_else(|| {
                            Error::Value(format!(
                                "F block ({},{},{};{}) is singular",
                                name(a),
                                name(b),
                                name(c),
                                name(d)
                            ))
                        })?;
                        let left_index = left.iter().enumerate().map(|(i, k)| (*k, i)).collect();
                        let right_index = right.iter().enumerate().map(|(i, k)| (*k, i)).collect();
                        fblocks.push(Some(FBlock {
                            left,
                            right,
                            left_index,
                            right_index,
                            m,
                            inv,
                        }));
                    }
                }
            }
        }
        for key in p.f.keys() {
            let [a, b, c, d, e, f, i, j, k, l] = *key;
            if [a, b, c, d, e, f].iter().any(|&x| x >= n)
                || i >= nn(a, b, e)
                || j >= nn(e, c, d)
                || k >= nn(b, c, f)
                || l >= nn(a, f, d)
            {
                return Err(Error::Schema(format!(
                    "F entry {:?} refers to a forbidden channel",
                    key
                )));
            }
        }

        let mut rblocks = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let m = nn(a, b, c);
                    if m == 0 {
                        rblocks.push(None);
                        continue;
                    }
                    if nn(b, a, c) != m {
                        return Err(Error::Value("fusion table is not commutative".into()));
                    }
                    let mut r = zeros(m, m);
                    for i in 0..m {
                        for j in 0..m {
                            if let Some(v) = p.r.get(&[a, b, c, i, j]) {
                                r[(i, j)] = *v;
                            }
                        }
                    }
                    let rinv = inverse(&r).ok_or_else(|| {
                        Error::Value(format!(
                            "R block ({},{};{}) is singular",
                            p.labels[a], p.labels[b], p.labels[c]
                        ))
                    })?;
                    rblocks.push(Some((r, rinv)));
                }
            }
        }
        for key in p.r.keys() {
            let [a, b, c, i, j] = *key;
            if a >= n || b >= n || c >= n || i >= nn(a, b, c) || j >= nn(a, b, c) {
                return Err(Error::Schema(format!(
                    "R entry {:?} refers to a forbidden channel",
                    key
                )));
            }
        }

        Ok(CategoryData {
            name: p.name,
            labels: p.labels,
            unit: p.unit,
            dual: p.dual,
            fusion: p.fusion,
            dims: p.dims,
            twists: p.twists,
            fs: p.fs,
            cmod8: p.cmod8,
            cmod24: p.cmod24,
            fblocks,
            rblocks,
            tree_cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn unit(&self) -> Label {
        self.unit
    }

    pub fn dual(&self, a: Label) -> Label {
        self.dual[a]
    }

    pub fn n(&self, a: Label, b: Label, c: Label) -> usize {
        let n = self.rank();
        self.fusion[(a * n + b) * n + c]
    }

    /// Labels c with N_ab^c > 0.
    pub fn channels(&self, a: Label, b: Label) -> Vec<Label> {
        (0..self.rank()).filter(|&c| self.n(a, b, c) > 0).collect()
    }

    pub fn dim(&self, a: Label) -> f64 {
        self.dims[a]
    }

    pub fn theta(&self, a: Label) -> C64 {
        self.twists[a]
    }

    pub fn fs(&self, a: Label) -> i32 {
        self.fs[a]
    }

    pub fn name_of(&self, a: Label) -> &str {
        &self.labels[a]
    }

    pub fn label(&self, name: &str) -> Option<Label> {
        self.labels.iter().position(|l| l == name)
    }

    pub fn label_or_err(&self, name: &str) -> Result<Label> {
        self.label(name).ok_or_else(|| {
            Error::Schema(format!(
                "unknown label '{}' in category {}",
                name, self.name
            ))
        })
    }

    pub fn fblock(&self, a: Label, b: Label, c: Label, d: Label) -> Option<&FBlock> {
        let n = self.rank();
        self.fblocks[((a * n + b) * n + c) * n + d].as_ref()
    }

    /// Single F entry, zero if the trees do not exist.
    pub fn f(&self, abcd: [Label; 4], left: TreeKey, right: TreeKey) -> C64 {
        let [a, b, c, d] = abcd;
        match self.fblock(a, b, c, d) {
            Some(blk) => match (blk.left_index.get(&left), blk.right_index.get(&right)) {
                (Some(&r), Some(&s)) => blk.m[(r, s)],
                _ => C64::new(0.0, 0.0),
            },
            None => C64::new(0.0, 0.0),
        }
    }

    /// R block: `c_{a,b} f^{ab}_{c;i} = sum_j R[(i,j)] f^{ba}_{c;j}`.
    pub fn r(&self, a: Label, b: Label, c: Label) -> Option<&Mat> {
        let n = self.rank();
        self.rblocks[(a * n + b) * n + c].as_ref().map(|x| &x.0)
    }

    pub fn r_inv(&self, a: Label, b: Label, c: Label) -> Option<&Mat> {
        let n = self.rank();
        self.rblocks[(a * n + b) * n + c].as_ref().map(|x| &x.1)
    }

    pub fn trees(&self, word: &[Label], charge: Label) -> Arc<TreeBasis> {
        let key = (word.to_vec(), charge);
        if let Some(t) = self.tree_cache.read().unwrap().get(&key) {
            return t.clone();
        }
        let basis = Arc::new(hom::build_tree_basis(self, word, charge));
        self.tree_cache.write().unwrap().insert(key, basis.clone());
        basis
    }

    /// Σ dim² a.
    pub fn dsq(&self) -> f64 {
        self.dims.iter().map(|d| d * d).sum()
    }

    /// p_+ = Σ θ_a^{-1} dim² a.
    pub fn p_plus(&self) -> C64 {
        (0..self.rank())
            .map(|a| self.theta(a).inv() * self.dims[a] * self.dims[a])
            .sum()
    }

    /// p_- = Σ θ_a dim² a.
    pub fn p_minus(&self) -> C64 {
        (0..self.rank())
            .map(|a| self.theta(a) * self.dims[a] * self.dims[a])
            .sum()
    }

    /// D = p_- e^{-2πic/8}.
    pub fn big_d(&self) -> C64 {
        self.p_minus() * C64::from_polar(1.0, -2.0 * std::f64::consts::PI * self.cmod8 / 8.0)
    }

    /// Pivotal coefficient p_a = 1/(dim a · F^{a a' a}_{a; e e}).
    pub fn pivotal(&self, a: Label) -> C64 {
        let e = self.unit;
        let ad = self.dual(a);
        let f = self.f([a, ad, a, a], (e, 0, 0), (e, 0, 0));
        C64::new(1.0, 0.0) / (f * self.dim(a))
    }

    pub fn parts(&self) -> CategoryParts {
        let n = self.rank();
        let mut f = HashMap::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        if let Some(blk) = self.fblock(a, b, c, d) {
                            for (r, &(e, i, j)) in blk.left.iter().enumerate() {
                                for (s, &(ff, k, l)) in blk.right.iter().enumerate() {
                                    let v = blk.m[(r, s)];
                                    if v.norm() > 0.0 {
                                        f.insert([a, b, c, d, e, ff, i, j, k, l], v);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        let mut r = HashMap::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if let Some(m) = self.r(a, b, c) {
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
        }
        CategoryParts {
            name: self.name.clone(),
            labels: self.labels.clone(),
            unit: self.unit,
            dual: self.dual.clone(),
            fusion: self.fusion.clone(),
            dims: self.dims.clone(),
            twists: self.twists.clone(),
            fs: self.fs.clone(),
            cmod8: self.cmod8,
            cmod24: self.cmod24,
            f,
            r,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let p = self.parts();
        let n = self.rank();
        let l = |x: usize| p.labels[x].clone();
        let cz = |z: &C64| json!([z.re, z.im]);
        let mut fusion = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let v = self.n(a, b, c);
                    if v > 0 {
                        fusion.push(json!([l(a), l(b), l(c), v]));
                    }
                }
            }
        }
        let mut fkeys: Vec<_> = p.f.keys().copied().collect();
        fkeys.sort();
        let fl: Vec<_> = fkeys
            .iter()
            .map(|k| {
                json!({"a": l(k[0]), "b": l(k[1]), "c": l(k[2]), "d": l(k[3]), "e": l(k[4]), "f": l(k[5]),
                       "i": k[6], "j": k[7], "k": k[8], "l": k[9], "v": cz(&p.f[k])})
            })
            .collect();
        let mut rkeys: Vec<_> = p.r.keys().copied().collect();
        rkeys.sort();
        let rl: Vec<_> = rkeys
            .iter()
            .map(|k| json!({"a": l(k[0]), "b": l(k[1]), "c": l(k[2]), "i": k[3], "j": k[4], "v": cz(&p.r[k])}))
            .collect();
        let mut doc = json!({
            "name": p.name,
            "labels": p.labels,
            "unit": l(p.unit),
            "dual": (0..n).map(|a| (l(a), l(p.dual[a]))).collect::<BTreeMap<_, _>>(),
            "fusion": fusion,
            "dims": (0..n).map(|a| (l(a), p.dims[a])).collect::<BTreeMap<_, _>>(),
            "twists": (0..n).map(|a| (l(a), cz(&p.twists[a]))).collect::<BTreeMap<_, _>>(),
            "fs": (0..n).map(|a| (l(a), p.fs[a])).collect::<BTreeMap<_, _>>(),
            "cmod8": p.cmod8,
            "F": fl,
            "R": rl,
        });
        if let Some(c24) = p.cmod24 {
            doc["cmod24"] = json!(c24);
        }
        doc
    }

    /// The c mod 8 for which p_- e^{-2πic/8} is real positive, in (-4, 4].
    pub fn mirror_charge_hint(&self) -> Option<f64> {
        let p = self.p_minus();
        if p.norm() < 1e-12 {
            return None;
        }
        Some(mod8_centered(4.0 * p.arg() / std::f64::consts::PI))
    }
}

#[derive(Deserialize)]
struct RawF {
    a: String,
    b: String,
    c: String,
    d: String,
    e: String,
    f: String,
    #[serde(default)]
    i: usize,
    #[serde(default)]
    j: usize,
    #[serde(default)]
    k: usize,
    #[serde(default)]
    l: usize,
    v: [f64; 2],
}

#[derive(Deserialize)]
struct RawR {
    a: String,
    b: String,
    c: String,
    #[serde(default)]
    i: usize,
    #[serde(default)]
    j: usize,
    v: [f64; 2],
}

#[derive(Deserialize)]
struct RawCategory {
    name: String,
    labels: Vec<String>,
    unit: String,
    dual: BTreeMap<String, String>,
    fusion: Vec<(String, String, String, usize)>,
    dims: BTreeMap<String, f64>,
    twists: BTreeMap<String, [f64; 2]>,
    fs: BTreeMap<String, i32>,
    cmod8: f64,
    #[serde(default)]
    cmod24: Option<f64>,
    #[serde(rename = "F")]
    f: Vec<RawF>,
    #[serde(rename = "R")]
    r: Vec<RawR>,
}

fn json_error(e: serde_json::Error) -> Error {
    use serde_json::error::Category;
    match e.classify() {
        Category::Data => Error::Schema(e.to_string()),
        _ => Error::Parse(e.to_string()),
    }
}

pub fn parse_category(src: &str) -> Result<CategoryData> {
    let raw: RawCategory = serde_json::from_str(src).map_err(json_error)?;
    let n = raw.labels.len();
    let mut index = HashMap::new();
    for (i, l) in raw.labels.iter().enumerate() {
        if index.insert(l.clone(), i).is_some() {
            return Err(Error::Schema(format!("duplicate label '{}'", l)));
        }
    }
    let lab = |s: &str| -> Result<usize> {
        index
            .get(s)
            .copied()
            .ok_or_else(|| Error::Schema(format!("dangling label reference '{}'", s)))
    };
    let unit = lab(&raw.unit)?;
    let per_label = |what: &str, keys: Vec<&String>| -> Result<()> {
        for k in &keys {
            lab(k)?;
        }
        if keys.len() != n {
            return Err(Error::Schema(format!(
                "'{}' must have one entry per label",
                what
            )));
        }
        Ok(())
    };
    per_label("dual", raw.dual.keys().collect())?;
    per_label("dims", raw.dims.keys().collect())?;
    per_label("twists", raw.twists.keys().collect())?;
    per_label("fs", raw.fs.keys().collect())?;

    let mut dual = vec![0; n];
    for (k, v) in &raw.dual {
        dual[lab(k)?] = lab(v)?;
    }
    for a in 0..n {
        if dual[dual[a]] != a {
            return Err(Error::Schema(format!(
                "dual is not an involution at '{}'",
                raw.labels[a]
            )));
        }
    }
    if dual[unit] != unit {
        return Err(Error::Schema("dual of the unit must be the unit".into()));
    }
    let mut fusion = vec![0; n * n * n];
    for (a, b, c, v) in &raw.fusion {
        fusion[(lab(a)? * n + lab(b)?) * n + lab(c)?] = *v;
    }
    let mut dims = vec![0.0; n];
    for (k, v) in &raw.dims {
        dims[lab(k)?] = *v;
    }
    let mut twists = vec![C64::new(0.0, 0.0); n];
    for (k, v) in &raw.twists {
        let z = C64::new(v[0], v[1]);
        if (z.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::Value(format!(
                "twist of '{}' is not unit-modulus: |θ| = {}",
                k,
                z.norm()
            )));
        }
        twists[lab(k)?] = z;
    }
    let mut fs = vec![1; n];
    for (k, v) in &raw.fs {
        if *v != 1 && *v != -1 {
            return Err(Error::Value(format!("fs indicator of '{}' must be ±1", k)));
        }
        fs[lab(k)?] = *v;
    }
    let mut f = HashMap::new();
    for e in &raw.f {
        f.insert(
            [
                lab(&e.a)?,
                lab(&e.b)?,
                lab(&e.c)?,
                lab(&e.d)?,
                lab(&e.e)?,
                lab(&e.f)?,
                e.i,
                e.j,
                e.k,
                e.l,
            ],
            C64::new(e.v[0], e.v[1]),
        );
    }
    let mut r = HashMap::new();
    for e in &raw.r {
        r.insert(
            [lab(&e.a)?, lab(&e.b)?, lab(&e.c)?, e.i, e.j],
            C64::new(e.v[0], e.v[1]),
        );
    }
    CategoryData::from_parts(CategoryParts {
        name: raw.name,
        labels: raw.labels,
        unit,
        dual,
        fusion,
        dims,
        twists,
        fs,
        cmod8: raw.cmod8,
        cmod24: raw.cmod24,
        f,
        r,
    })
}

pub fn load_category(path: impl AsRef<Path>) -> Result<CategoryData> {
    let src = std::fs::read_to_string(path)?;
    parse_category(&src)
}
