//! Noncommutative polynomials and PBW normal forms by oriented rewriting.
//!
//! Every presented algebra here is quadratic: each strictly descending pair
//! of adjacent generators has exactly one rule rewriting it into ascending
//! two-letter words (exterior algebras additionally kill squares). Reduction
//! always rewrites the leftmost redex, so normal forms are deterministic.
//! Each rule application strictly decreases the word in the lexicographic
//! order on words of fixed length, or shortens it, which bounds reduction.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;

use crate::params::{Label, Mode, ParamSpec, Scalar};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    /// `T^i_j`, multiparametric matrix generators.
    MatrixMulti,
    /// `t^i_j`, one-parameter matrix generators.
    MatrixOne,
    /// `l^j` of `S_l`.
    Left,
    /// `r_i` of `S_r`.
    Right,
    /// `e^i` of `Lambda_P`.
    ExtP,
    /// `f_i` of `Lambda_Q`.
    ExtQ,
    /// `x^i` of the quantum Q-space.
    PlaneQ,
    /// `y_i` of the quantum P-space.
    PlaneP,
}

impl Tag {
    pub fn letter(self) -> char {
        match self {
            Tag::MatrixMulti => 'T',
            Tag::MatrixOne => 't',
            Tag::Left => 'l',
            Tag::Right => 'r',
            Tag::ExtP => 'e',
            Tag::ExtQ => 'f',
            Tag::PlaneQ => 'x',
            Tag::PlaneP => 'y',
        }
    }

    pub fn is_matrix(self) -> bool {
        matches!(self, Tag::MatrixMulti | Tag::MatrixOne)
    }

    pub fn is_exterior(self) -> bool {
        matches!(self, Tag::ExtP | Tag::ExtQ)
    }
}

/// A generator; vector-type generators keep their index in `row` and have `col == 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub tag: Tag,
    pub row: Label,
    pub col: Label,
}

impl Generator {
    pub fn matrix(tag: Tag, row: Label, col: Label) -> Self {
        debug_assert!(tag.is_matrix());
        Self { tag, row, col }
    }

    /// `T^row_col`.
    #[allow(non_snake_case)]
    pub fn T(row: Label, col: Label) -> Self {
        Self::matrix(Tag::MatrixMulti, row, col)
    }

    /// `t^row_col`.
    pub fn t(row: Label, col: Label) -> Self {
        Self::matrix(Tag::MatrixOne, row, col)
    }

    pub fn vector(tag: Tag, index: Label) -> Self {
        debug_assert!(!tag.is_matrix());
        Self { tag, row: index, col: 0 }
    }

    pub fn index(&self) -> Label {
        self.row
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.tag.is_matrix() {
            write!(f, "{}[{},{}]", self.tag.letter(), self.row, self.col)
        } else {
            write!(f, "{}[{}]", self.tag.letter(), self.row)
        }
    }
}

pub type Word = SmallVec<[Generator; 8]>;

pub fn word(gens: &[Generator]) -> Word {
    Word::from_slice(gens)
}

pub fn render_word(w: &[Generator]) -> String {
    if w.is_empty() {
        return "1".to_string();
    }
    w.iter().map(|g| g.to_string()).collect::<Vec<_>>().join("*")
}

/// A finite Scalar-weighted sum of words over one algebra tag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NCPoly {
    tag: Tag,
    terms: BTreeMap<Word, Scalar>,
}

impl NCPoly {
    pub fn zero(tag: Tag) -> Self {
        Self { tag, terms: BTreeMap::new() }
    }

    pub fn one(tag: Tag) -> Self {
        Self::scalar(tag, Scalar::one())
    }

    pub fn scalar(tag: Tag, c: Scalar) -> Self {
        Self::term(tag, c, Word::new())
    }

    pub fn term(tag: Tag, c: Scalar, w: Word) -> Self {
        debug_assert!(w.iter().all(|g| g.tag == tag));
        let mut p = Self::zero(tag);
        p.add_term(w, c);
        p
    }

    pub fn from_word(w: &[Generator]) -> Self {
        let tag = w.first().map(|g| g.tag).expect("nonempty word");
        Self::term(tag, Scalar::one(), word(w))
    }

    pub fn gen(g: Generator) -> Self {
        Self::term(g.tag, Scalar::one(), word(&[g]))
    }

    pub fn tag(&self) -> Tag {
        self.tag
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

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &[Generator]) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, w: Word, c: Scalar) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
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

    pub fn add_scaled(&mut self, other: &NCPoly, c: &Scalar) {
        assert_eq!(self.tag, other.tag, "tag mismatch");
        for (w, d) in &other.terms {
            self.add_term(w.clone(), c * d);
        }
    }

    pub fn add(&self, other: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::one());
        out
    }

    pub fn sub(&self, other: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::int(-1));
        out
    }

    pub fn scale(&self, c: &Scalar) -> NCPoly {
        let mut out = NCPoly::zero(self.tag);
        out.add_scaled(self, c);
        out
    }

    /// Free-algebra product: concatenation without reduction.
    pub fn concat(&self, other: &NCPoly) -> Result<NCPoly, Error> {
        check_tags(self.tag, other.tag)?;
        let mut out = NCPoly::zero(self.tag);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let mut w = a.clone();
                w.extend_from_slice(b);
                out.add_term(w, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> NCPoly {
        let mut out = NCPoly::zero(self.tag);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c));
        }
        out
    }

    /// Replaces the tag of every generator.
    pub fn retag(&self, tag: Tag) -> NCPoly {
        let mut out = NCPoly::zero(tag);
        for (w, c) in &self.terms {
            out.add_term(w.iter().map(|g| Generator { tag, ..*g }).collect(), c.clone());
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }
}

fn check_tags(expected: Tag, found: Tag) -> Result<(), Error> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::TagMismatch { expected: expected.letter().to_string(), found: found.letter().to_string() })
    }
}

/// Writes `c*w` terms joined with signs; shared by every sum-of-terms printer.
pub(crate) fn write_signed_terms<'a, I>(f: &mut impl fmt::Write, terms: I) -> fmt::Result
where
    I: IntoIterator<Item = (&'a Scalar, String)>,
{
    let mut first = true;
    for (c, body) in terms {
        let (negative, abs) = match c.as_monomial() {
            Some((r, _)) if num_traits::Signed::is_negative(r) => (true, -c),
            _ => (false, c.clone()),
        };
        match (first, negative) {
            (true, true) => f.write_str("-")?,
            (true, false) => {}
            (false, true) => f.write_str(" - ")?,
            (false, false) => f.write_str(" + ")?,
        }
        first = false;
        let coeff = if abs.len() > 1 { format!("({abs})") } else { abs.to_string() };
        if body.is_empty() {
            f.write_str(&coeff)?;
        } else if abs.is_one() {
            f.write_str(&body)?;
        } else {
            write!(f, "{coeff}*{body}")?;
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_signed_terms(
            f,
            self.terms.iter().map(|(w, c)| (c, if w.is_empty() { String::new() } else { render_word(w) })),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    MultiparamMatrix,
    OneParamMatrix,
    SRight,
    SLeft,
    ExtP,
    ExtQ,
    PlaneQ,
    PlaneP,
}

impl Preset {
    pub const ALL: [Preset; 8] = [
        Preset::MultiparamMatrix,
        Preset::OneParamMatrix,
        Preset::SRight,
        Preset::SLeft,
        Preset::ExtP,
        Preset::ExtQ,
        Preset::PlaneQ,
        Preset::PlaneP,
    ];

    pub fn tag(self) -> Tag {
        match self {
            Preset::MultiparamMatrix => Tag::MatrixMulti,
            Preset::OneParamMatrix => Tag::MatrixOne,
            Preset::SRight => Tag::Right,
            Preset::SLeft => Tag::Left,
            Preset::ExtP => Tag::ExtP,
            Preset::ExtQ => Tag::ExtQ,
            Preset::PlaneQ => Tag::PlaneQ,
            Preset::PlaneP => Tag::PlaneP,
        }
    }

    /// The matrix preset for a mode.
    pub fn matrix(mode: Mode) -> Preset {
        match mode {
            Mode::MultiParam => Preset::MultiparamMatrix,
            Mode::OneParam => Preset::OneParamMatrix,
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Ok(match s {
            "MultiparamMatrix" => Preset::MultiparamMatrix,
            "OneParamMatrix" => Preset::OneParamMatrix,
            "SRight" => Preset::SRight,
            "SLeft" => Preset::SLeft,
            "ExtP" => Preset::ExtP,
            "ExtQ" => Preset::ExtQ,
            "PlaneQ" => Preset::PlaneQ,
            "PlaneP" => Preset::PlaneP,
            other => return Err(Error::UnknownPreset(other.to_string())),
        })
    }
}

/// Right side of a rule: ascending two-letter words, or nothing for `g g -> 0`.
pub type RuleRhs = Vec<(Scalar, Word)>;

#[derive(Clone, Debug)]
pub struct RelationSystem {
    preset: Preset,
    spec: ParamSpec,
    generators: Vec<Generator>,
    rules: BTreeMap<(Generator, Generator), RuleRhs>,
}

impl RelationSystem {
    /// Builds the rewrite rules of a preset algebra.
    ///
    /// The matrix presets fix their own mode; the small algebras take it from `spec`.
    pub fn new(preset: Preset, spec: ParamSpec) -> Self {
        let spec = match preset {
            Preset::MultiparamMatrix => spec.with_mode(Mode::MultiParam),
            Preset::OneParamMatrix => spec.with_mode(Mode::OneParam),
            _ => spec,
        };
        let tag = preset.tag();
        let n = spec.n() as Label;
        let generators: Vec<Generator> = if tag.is_matrix() {
            (1..=n).flat_map(|a| (1..=n).map(move |b| Generator::matrix(tag, a, b))).collect()
        } else {
            (1..=n).map(|i| Generator::vector(tag, i)).collect()
        };
        let mut rules = BTreeMap::new();
        for &hi in &generators {
            for &lo in &generators {
                if hi > lo {
                    rules.insert((hi, lo), descending_rule(preset, &spec, hi, lo));
                } else if hi == lo && tag.is_exterior() {
                    rules.insert((hi, lo), Vec::new());
                }
            }
        }
        Self { preset, spec, generators, rules }
    }

    pub fn preset(&self) -> Preset {
        self.preset
    }

    pub fn spec(&self) -> &ParamSpec {
        &self.spec
    }

    pub fn tag(&self) -> Tag {
        self.preset.tag()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn rules(&self) -> impl Iterator<Item = (&(Generator, Generator), &RuleRhs)> {
        self.rules.iter()
    }

    pub fn rule(&self, a: Generator, b: Generator) -> Option<&RuleRhs> {
        self.rules.get(&(a, b))
    }

    /// Replaces one rule; used to build corrupted systems for negative controls.
    pub fn with_rule(mut self, lhs: (Generator, Generator), rhs: RuleRhs) -> Self {
        self.rules.insert(lhs, rhs);
        self
    }

    /// The relation `lhs - rhs` of a rule, as a free-algebra element.
    pub fn relation(&self, lhs: (Generator, Generator)) -> Option<NCPoly> {
        let rhs = self.rules.get(&lhs)?;
        let mut p = NCPoly::term(self.tag(), Scalar::one(), word(&[lhs.0, lhs.1]));
        for (c, w) in rhs {
            p.add_term(w.clone(), -c);
        }
        Some(p)
    }

    pub fn leftmost_redex(&self, w: &[Generator]) -> Option<usize> {
        (0..w.len().saturating_sub(1)).find(|&p| self.rules.contains_key(&(w[p], w[p + 1])))
    }

    /// One rewrite step at position `pos`, if a rule applies there.
    pub fn rewrite_at(&self, w: &[Generator], pos: usize) -> Option<Vec<(Scalar, Word)>> {
        if pos + 1 >= w.len() {
            return None;
        }
        let rhs = self.rules.get(&(w[pos], w[pos + 1]))?;
        Some(
            rhs.iter()
                .map(|(c, mid)| {
                    let mut out = Word::with_capacity(w.len());
                    out.extend_from_slice(&w[..pos]);
                    out.extend_from_slice(mid);
                    out.extend_from_slice(&w[pos + 2..]);
                    (c.clone(), out)
                })
                .collect(),
        )
    }

    pub fn is_normal(&self, w: &[Generator]) -> bool {
        self.leftmost_redex(w).is_none()
    }

    pub fn normal_form(&self, p: &NCPoly) -> NCPoly {
        Reducer::new(self).normal_form(p).expect("tag checked by caller")
    }

    pub fn mul(&self, a: &NCPoly, b: &NCPoly) -> Result<NCPoly, Error> {
        Reducer::new(self).mul(a, b)
    }

    pub fn is_zero(&self, p: &NCPoly) -> bool {
        self.normal_form(p).is_zero()
    }

    /// All normal words of degree at most `max_deg`, by degree then lexicographically.
    pub fn pbw_basis(&self, max_deg: usize) -> Vec<Word> {
        let strict = self.tag().is_exterior();
        let mut layer = vec![Word::new()];
        let mut out = layer.clone();
        for _ in 0..max_deg {
            let mut next = Vec::new();
            for w in &layer {
                for &g in &self.generators {
                    let ok = match w.last() {
                        None => true,
                        Some(&last) => {
                            if strict {
                                last < g
                            } else {
                                last <= g
                            }
                        }
                    };
                    if ok {
                        let mut v = w.clone();
                        v.push(g);
                        next.push(v);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    /// Three-letter words whose two overlapping pairs are both redexes.
    pub fn overlap_words(&self) -> Vec<Word> {
        let mut out = Vec::new();
        for &(a, b) in self.rules.keys() {
            for (&(b2, c), _) in self.rules.range((b, self.generators[0])..) {
                if b2 != b {
                    break;
                }
                out.push(word(&[a, b, c]));
            }
        }
        out
    }

    /// Overlaps whose two resolutions reduce to different normal forms.
    pub fn confluence_failures(&self) -> Vec<(Word, NCPoly)> {
        let mut red = Reducer::new(self);
        let mut failures = Vec::new();
        for w in self.overlap_words() {
            let sides = [0usize, 1].map(|pos| {
                let mut p = NCPoly::zero(self.tag());
                for (c, v) in self.rewrite_at(&w, pos).expect("overlap redex") {
                    p.add_scaled(&red.reduce_word(&v), &c);
                }
                p
            });
            let diff = sides[0].sub(&sides[1]);
            if !diff.is_zero() {
                failures.push((w, diff));
            }
        }
        failures
    }
}

fn descending_rule(preset: Preset, spec: &ParamSpec, hi: Generator, lo: Generator) -> RuleRhs {
    let q = |i, j| spec.q_param(i, j).expect("labels in range");
    let p = |i, j| spec.p_param(i, j).expect("labels in range");
    let inv = |s: Scalar| s.inv().expect("monomial");
    let tag = hi.tag;
    if tag.is_matrix() {
        let m = |r, c| Generator::matrix(tag, r, c);
        let (a, b, c, d) = (hi.row, hi.col, lo.row, lo.col);
        return if a == c {
            // T^k_j T^k_i = q_ij^-1 T^k_i T^k_j
            let (k, j, i) = (a, b, d);
            vec![(inv(q(i, j)), word(&[m(k, i), m(k, j)]))]
        } else if b == d {
            // T^l_i T^k_i = p_kl^-1 T^k_i T^l_i
            let (l, k, i) = (a, c, b);
            vec![(inv(p(k, l)), word(&[m(k, i), m(l, i)]))]
        } else if b < d {
            // T^l_i T^k_j = p_kl^-1 q_ij T^k_j T^l_i
            let (l, i, k, j) = (a, b, c, d);
            vec![(&inv(p(k, l)) * &q(i, j), word(&[m(k, j), m(l, i)]))]
        } else {
            // T^l_j T^k_i = q_ij^-1 q_kl (T^k_i T^l_j - (q_ij - p_ij^-1) T^k_j T^l_i)
            let (l, j, k, i) = (a, b, c, d);
            let f = &inv(q(i, j)) * &q(k, l);
            let cross = &q(i, j) - &inv(p(i, j));
            vec![(f.clone(), word(&[m(k, i), m(l, j)])), (-(&f * &cross), word(&[m(k, j), m(l, i)]))]
        };
    }
    let (j, i) = (hi.index(), lo.index());
    let v = |x| Generator::vector(tag, x);
    let c = match preset {
        // r_j r_i = q^-1 q_ij r_i r_j
        Preset::SRight => &Scalar::q_pow(-1) * &q(i, j),
        // l^j l^i = q q_ij^-1 l^i l^j
        Preset::SLeft => &Scalar::q() * &inv(q(i, j)),
        // e^j e^i = -p_ij e^i e^j
        Preset::ExtP => -p(i, j),
        // f_j f_i = -q_ij f_i f_j
        Preset::ExtQ => -q(i, j),
        // x^j x^i = q_ij^-1 x^i x^j
        Preset::PlaneQ => inv(q(i, j)),
        // y_j y_i = p_ij^-1 y_i y_j
        Preset::PlaneP => inv(p(i, j)),
        Preset::MultiparamMatrix | Preset::OneParamMatrix => unreachable!("matrix handled above"),
    };
    vec![(c, word(&[v(i), v(j)]))]
}

/// Memoizing normal-form evaluator bound to one relation system.
///
/// Memo tables are per reducer, so independent computations never share state.
pub struct Reducer<'a> {
    rs: &'a RelationSystem,
    memo: HashMap<Word, NCPoly>,
    steps: u64,
}

impl<'a> Reducer<'a> {
    pub fn new(rs: &'a RelationSystem) -> Self {
        Self { rs, memo: HashMap::new(), steps: 0 }
    }

    pub fn system(&self) -> &'a RelationSystem {
        self.rs
    }

    /// Rule applications performed so far (memo hits are free).
    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn reduce_word(&mut self, w: &[Generator]) -> NCPoly {
        if let Some(hit) = self.memo.get(w) {
            return hit.clone();
        }
        let out = match self.rs.leftmost_redex(w) {
            None => NCPoly::term(self.rs.tag(), Scalar::one(), word(w)),
            Some(pos) => {
                self.steps += 1;
                let mut acc = NCPoly::zero(self.rs.tag());
                for (c, v) in self.rs.rewrite_at(w, pos).expect("redex") {
                    let sub = self.reduce_word(&v);
                    acc.add_scaled(&sub, &c);
                }
                acc
            }
        };
        self.memo.insert(word(w), out.clone());
        out
    }

    pub fn normal_form(&mut self, p: &NCPoly) -> Result<NCPoly, Error> {
        check_tags(self.rs.tag(), p.tag())?;
        let mut out = NCPoly::zero(p.tag());
        for (w, c) in p.terms() {
            let r = self.reduce_word(w);
            out.add_scaled(&r, c);
        }
        Ok(out)
    }

    pub fn mul(&mut self, a: &NCPoly, b: &NCPoly) -> Result<NCPoly, Error> {
        check_tags(self.rs.tag(), a.tag())?;
        let prod = a.concat(b)?;
        self.normal_form(&prod)
    }
}
