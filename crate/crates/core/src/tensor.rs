//! The bigraded algebra `S_l (x) M_q (x) S_r` and the embedding
//! `T^i_j -> l^j (x) t^i_j (x) r_i` of `M(P,Q)` into it.
//!
//! The outer slots have PBW bases of sorted words, so their normal forms
//! amount to sorting the label sequence and absorbing `zeta_l`/`zeta_r`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::labels::{zeta_l_in, zeta_r_in, Multilabel};
use crate::ncalg::{render_word, word, Generator, NCPoly, Preset, Reducer, RelationSystem, Tag, Word};
use crate::params::{Label, ParamSpec, Scalar};
use crate::Error;

/// Basis key `l^L (x) mid (x) r_R`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TensorKey {
    pub l: Multilabel,
    pub mid: Word,
    pub r: Multilabel,
}

impl TensorKey {
    pub fn new(l: Multilabel, mid: Word, r: Multilabel) -> Self {
        Self { l, mid, r }
    }

    fn concat(&self, other: &TensorKey) -> TensorKey {
        let mut mid = self.mid.clone();
        mid.extend_from_slice(&other.mid);
        TensorKey { l: self.l.concat(&other.l), mid, r: self.r.concat(&other.r) }
    }
}

impl fmt::Display for TensorKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let slot = |tag: char, m: &Multilabel| {
            if m.is_empty() {
                "1".to_string()
            } else {
                m.iter().map(|i| format!("{tag}[{i}]")).collect::<Vec<_>>().join("*")
            }
        };
        write!(f, "{} (x) {} (x) {}", slot('l', &self.l), render_word(&self.mid), slot('r', &self.r))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TensorPoly {
    terms: BTreeMap<TensorKey, Scalar>,
}

impl TensorPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(c: Scalar, key: TensorKey) -> Self {
        let mut p = Self::zero();
        p.add_term(key, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TensorKey, &Scalar)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, key: TensorKey, c: Scalar) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &TensorPoly, c: &Scalar) {
        for (k, d) in &other.terms {
            self.add_term(k.clone(), c * d);
        }
    }

    /// Slotwise concatenation, without normalization.
    pub fn concat(&self, other: &TensorPoly) -> TensorPoly {
        let mut out = TensorPoly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.concat(b), ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for TensorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::ncalg::write_signed_terms(f, self.terms.iter().map(|(k, c)| (c, k.to_string())))
    }
}

/// The `(I, J)` bidegree: `t^i_j` has `(+i, +j)`, `r_i` has `(-i, 0)`, `l^j` has `(0, -j)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Bidegree {
    pub rows: Vec<i64>,
    pub cols: Vec<i64>,
}

impl Bidegree {
    pub fn zero(n: usize) -> Self {
        Self { rows: vec![0; n], cols: vec![0; n] }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().chain(&self.cols).all(|&x| x == 0)
    }

    pub fn add(&self, other: &Bidegree) -> Bidegree {
        Bidegree {
            rows: self.rows.iter().zip(&other.rows).map(|(a, b)| a + b).collect(),
            cols: self.cols.iter().zip(&other.cols).map(|(a, b)| a + b).collect(),
        }
    }
}

pub fn bidegree(key: &TensorKey, n: usize) -> Bidegree {
    let mut d = Bidegree::zero(n);
    for g in &key.mid {
        d.rows[g.row as usize - 1] += 1;
        d.cols[g.col as usize - 1] += 1;
    }
    for &i in key.r.iter() {
        d.rows[i as usize - 1] -= 1;
    }
    for &j in key.l.iter() {
        d.cols[j as usize - 1] -= 1;
    }
    d
}

/// `S_l (x) M_q (x) S_r` for a fixed matrix size.
pub struct TensorAlgebra {
    spec: ParamSpec,
    middle: RelationSystem,
}

impl TensorAlgebra {
    pub fn new(n: usize) -> Self {
        let spec = ParamSpec::multi(n);
        Self { spec, middle: RelationSystem::new(Preset::OneParamMatrix, spec) }
    }

    pub fn n(&self) -> usize {
        self.spec.n()
    }

    pub fn spec(&self) -> &ParamSpec {
        &self.spec
    }

    pub fn middle(&self) -> &RelationSystem {
        &self.middle
    }

    pub fn reducer(&self) -> Reducer<'_> {
        Reducer::new(&self.middle)
    }

    pub fn tensor_nf(&self, tp: &TensorPoly) -> TensorPoly {
        self.tensor_nf_with(tp, &mut self.reducer())
    }

    pub fn tensor_nf_with(&self, tp: &TensorPoly, red: &mut Reducer<'_>) -> TensorPoly {
        let mut out = TensorPoly::zero();
        for (key, c) in tp.terms() {
            let outer = &zeta_l_in(&key.l, &self.spec) * &zeta_r_in(&key.r, &self.spec);
            let c = c * &outer;
            let (l, r) = (key.l.sorted(), key.r.sorted());
            for (w, d) in red.reduce_word(&key.mid).terms() {
                out.add_term(TensorKey::new(l.clone(), w.clone(), r.clone()), &c * d);
            }
        }
        out
    }

    pub fn mul(&self, a: &TensorPoly, b: &TensorPoly) -> TensorPoly {
        self.tensor_nf(&a.concat(b))
    }

    /// Image of a single `T`-word before normalization.
    pub fn iota_word(w: &[Generator]) -> TensorKey {
        TensorKey {
            l: Multilabel::new(w.iter().map(|g| g.col).collect()),
            mid: w.iter().map(|g| Generator::t(g.row, g.col)).collect(),
            r: Multilabel::new(w.iter().map(|g| g.row).collect()),
        }
    }

    pub fn iota(&self, p: &NCPoly) -> Result<TensorPoly, Error> {
        self.iota_with(p, &mut self.reducer())
    }

    pub fn iota_with(&self, p: &NCPoly, red: &mut Reducer<'_>) -> Result<TensorPoly, Error> {
        if p.tag() != Tag::MatrixMulti {
            return Err(Error::TagMismatch { expected: "T".into(), found: p.tag().letter().to_string() });
        }
        let mut raw = TensorPoly::zero();
        for (w, c) in p.terms() {
            if let Some(g) = w.iter().find(|g| g.row as usize > self.n() || g.col as usize > self.n()) {
                return Err(Error::LabelOutOfRange { label: g.row.max(g.col) as usize, n: self.n() });
            }
            raw.add_term(Self::iota_word(w), c.clone());
        }
        Ok(self.tensor_nf_with(&raw, red))
    }
}

/// Outcome of one instance of a mechanical check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceResult {
    pub instance: String,
    pub passed: bool,
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub results: Vec<InstanceResult>,
}

impl CheckReport {
    pub fn new(check: impl Into<String>, results: Vec<InstanceResult>) -> Self {
        Self { check: check.into(), results }
    }

    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> Vec<&InstanceResult> {
        self.results.iter().filter(|r| !r.passed).collect()
    }

    pub fn len(&self) -> usize {
        self.results.len()
    }

    pub fn is_empty(&self) -> bool {
        self.results.is_empty()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let failed = self.failures();
        write!(f, "{}: {}/{} passed", self.check, self.len() - failed.len(), self.len())?;
        for r in failed {
            write!(f, "\n  FAIL {}: {}", r.instance, r.residual)?;
        }
        Ok(())
    }
}

fn zero_result(instance: String, residual: &impl fmt::Display, is_zero: bool) -> InstanceResult {
    InstanceResult { instance, passed: is_zero, residual: if is_zero { String::new() } else { residual.to_string() } }
}

fn relation_family(a: Generator, b: Generator) -> &'static str {
    if a.row == b.row {
        "rel1"
    } else if a.col == b.col {
        "rel2"
    } else if a.col < b.col {
        "rel3"
    } else {
        "rel4"
    }
}

/// Checks that the image of every defining relation of `M(P,Q)` vanishes.
pub fn check_iota_homomorphism(n: usize) -> CheckReport {
    check_iota_homomorphism_for(&RelationSystem::new(Preset::MultiparamMatrix, ParamSpec::multi(n)))
}

/// As [`check_iota_homomorphism`], for the relations of an arbitrary (possibly corrupted) system.
pub fn check_iota_homomorphism_for(rs: &RelationSystem) -> CheckReport {
    let ta = TensorAlgebra::new(rs.spec().n());
    let lhs: Vec<_> = rs.rules().map(|(k, _)| *k).collect();
    let results = lhs
        .par_iter()
        .map(|&(a, b)| {
            let rel = rs.relation((a, b)).expect("rule exists");
            let img = ta.iota(&rel).expect("matrix relation");
            zero_result(format!("{} {a}*{b}", relation_family(a, b)), &img, img.is_zero())
        })
        .collect();
    CheckReport::new(format!("iota-homomorphism n={}", rs.spec().n()), results)
}

/// Images of distinct PBW words must be distinct pure tensors with nonzero coefficient.
pub fn check_injectivity(n: usize, max_deg: usize) -> CheckReport {
    let rs = RelationSystem::new(Preset::MultiparamMatrix, ParamSpec::multi(n));
    let ta = TensorAlgebra::new(n);
    let mut red = ta.reducer();
    let mut seen = BTreeSet::new();
    let mut results = Vec::new();
    for w in rs.pbw_basis(max_deg) {
        let img = ta.iota_with(&NCPoly::term(Tag::MatrixMulti, Scalar::one(), w.clone()), &mut red).expect("in range");
        let name = if w.is_empty() { "1".to_string() } else { render_word(&w) };
        let passed = img.len() == 1 && seen.insert(img.terms().next().expect("one term").0.mid.clone());
        results.push(InstanceResult {
            instance: name,
            passed,
            residual: if passed { String::new() } else { img.to_string() },
        });
    }
    CheckReport::new(format!("iota-injectivity n={n} deg<={max_deg}"), results)
}

/// `S_l (x) Lambda_q` elements keyed by `(l-labels, e-word)`.
type LeftExterior = BTreeMap<(Multilabel, Word), Scalar>;

/// Checks that `E^j -> l^j (x) e^j` sends every `Lambda_P` relation to zero in `S_l (x) Lambda_q`.
pub fn check_exterior_rescaling(n: usize) -> CheckReport {
    check_exterior_rescaling_for(&RelationSystem::new(Preset::ExtP, ParamSpec::multi(n)))
}

pub fn check_exterior_rescaling_for(ext_p: &RelationSystem) -> CheckReport {
    let spec = *ext_p.spec();
    let ext_q = RelationSystem::new(Preset::ExtP, spec.with_mode(crate::params::Mode::OneParam));
    let mut red = Reducer::new(&ext_q);
    let mut results = Vec::new();
    for (&(a, b), _) in ext_p.rules() {
        let rel = ext_p.relation((a, b)).expect("rule exists");
        let mut img = LeftExterior::new();
        for (w, c) in rel.terms() {
            let labels: Multilabel = w.iter().map(|g| g.index()).collect::<Vec<Label>>().into();
            let c = c * &zeta_l_in(&labels, &spec);
            for (v, d) in red.reduce_word(w).terms() {
                let key = (labels.sorted(), v.clone());
                let entry = img.entry(key).or_default();
                *entry += &c * d;
            }
        }
        img.retain(|_, c| !c.is_zero());
        let residual = img
            .iter()
            .map(|((l, v), c)| format!("({c})*l[{l}] (x) {}", render_word(v)))
            .collect::<Vec<_>>()
            .join(" + ");
        results.push(zero_result(format!("{a}*{b}"), &residual, img.is_empty()));
    }
    CheckReport::new(format!("exterior-rescaling n={}", spec.n()), results)
}

/// A pure tensor `l^L (x) mid (x) r_R` with coefficient 1.
pub fn pure(l: Multilabel, mid: NCPoly, r: Multilabel) -> TensorPoly {
    let mut out = TensorPoly::zero();
    for (w, c) in mid.terms() {
        out.add_term(TensorKey::new(l.clone(), w.clone(), r.clone()), c.clone());
    }
    out
}

pub fn gen_image(row: Label, col: Label) -> TensorKey {
    TensorAlgebra::iota_word(&word(&[Generator::T(row, col)]))
}
