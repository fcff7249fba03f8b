//! Translation of homogeneous minor identities between `M_q` and `M(P,Q)`,
//! and the normal-form verifier used to check both sides.
//!
//! A term `c * D^{K_1}_{L_1} ... D^{K_m}_{L_m}` of a one-parameter identity is
//! rescaled by `zeta_r(K_1...K_m)^-1 * zeta_l(L_1...L_m)^-1`, rows feeding
//! `zeta_r` and columns feeding `zeta_l`. Under `iota` every term of a
//! homogeneous identity then lands on the same pure tensor `l^{:L:} (x) - (x) r_{:K:}`.

use std::fmt;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::identity::{parse, MinorIdentity, MinorTerm};
use crate::labels::{zeta_l, zeta_r};
use crate::minors::{expand_product_with, matrix_system, MinorSymbol};
use crate::ncalg::{Generator, NCPoly, Reducer, RelationSystem, Tag};
use crate::params::{Label, Mode, Scalar};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub holds: bool,
    #[serde(serialize_with = "as_text")]
    pub residual: NCPoly,
    pub terms_expanded: usize,
    pub rewrite_steps: u64,
}

fn as_text<S: Serializer, T: fmt::Display>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.holds {
            write!(f, "holds")?;
        } else {
            write!(f, "fails, residual {}", self.residual)?;
        }
        write!(f, " ({} terms, {} rewrite steps)", self.terms_expanded, self.rewrite_steps)
    }
}

fn matrix_tag(mode: Mode) -> Tag {
    match mode {
        Mode::OneParam => Tag::MatrixOne,
        Mode::MultiParam => Tag::MatrixMulti,
    }
}

/// Verifies in the algebra of the identity's own size.
pub fn verify(id: &MinorIdentity) -> VerificationReport {
    verify_in(id, id.n.max(id.max_label())).expect("size covers all labels")
}

/// Verifies in the matrix algebra of size `n`, which must cover every label.
pub fn verify_in(id: &MinorIdentity, n: usize) -> Result<VerificationReport, Error> {
    if n < id.max_label() {
        return Err(Error::LabelOutOfRange { label: id.max_label(), n });
    }
    verify_with(id, &matrix_system(n, id.mode))
}

/// Verifies against an arbitrary matrix system, e.g. a corrupted one.
pub fn verify_with(id: &MinorIdentity, rs: &RelationSystem) -> Result<VerificationReport, Error> {
    let tag = matrix_tag(id.mode);
    if rs.tag() != tag {
        return Err(Error::TagMismatch { expected: tag.letter().to_string(), found: rs.tag().letter().to_string() });
    }
    if rs.spec().n() < id.max_label() {
        return Err(Error::LabelOutOfRange { label: id.max_label(), n: rs.spec().n() });
    }
    let mut red = Reducer::new(rs);
    let mut total = NCPoly::zero(tag);
    for t in &id.terms {
        let e = expand_product_with(&t.factors, &mut red)?;
        total.add_scaled(&e, &t.coeff);
    }
    Ok(VerificationReport {
        holds: total.is_zero(),
        residual: total,
        terms_expanded: id.terms.len(),
        rewrite_steps: red.steps(),
    })
}

/// `zeta_r(K_1...K_m)^-1 * zeta_l(L_1...L_m)^-1`.
pub fn translation_factor(t: &MinorTerm) -> Scalar {
    let z = &zeta_r(&t.rows_concat()) * &zeta_l(&t.cols_concat());
    z.inv().expect("zeta values are monomials")
}

fn check_input(id: &MinorIdentity, mode: Mode) -> Result<(), Error> {
    if id.mode != mode {
        return Err(Error::WrongMode { expected: mode, found: id.mode });
    }
    match id.homogeneity_witness() {
        Some(w) => Err(Error::NotHomogeneous(w.to_string())),
        None => Ok(()),
    }
}

pub fn translate_to_multiparam(id: &MinorIdentity) -> Result<MinorIdentity, Error> {
    check_input(id, Mode::OneParam)?;
    let terms = id.terms.iter().map(|t| MinorTerm::new(&t.coeff * &translation_factor(t), t.factors.clone())).collect();
    Ok(MinorIdentity { mode: Mode::MultiParam, n: id.n, terms })
}

pub fn translate_to_one_param(id: &MinorIdentity) -> Result<MinorIdentity, Error> {
    check_input(id, Mode::MultiParam)?;
    let terms = id
        .terms
        .iter()
        .map(|t| {
            let undo = translation_factor(t).inv().expect("monomial");
            MinorTerm::new((&t.coeff * &undo).specialize_one_param(), t.factors.clone())
        })
        .collect();
    Ok(MinorIdentity { mode: Mode::OneParam, n: id.n, terms })
}

/// Matrix system whose first relation-4 rule has its crossing term negated.
pub fn corrupted_system(n: usize, mode: Mode) -> RelationSystem {
    let rs = matrix_system(n.max(2), mode);
    let tag = matrix_tag(mode);
    let lhs = (Generator::matrix(tag, 2, 2), Generator::matrix(tag, 1, 1));
    let mut rhs = rs.rule(lhs.0, lhs.1).expect("relation 4 rule").clone();
    rhs[1].0 = -rhs[1].0.clone();
    rs.with_rule(lhs, rhs)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: String,
    pub identity: MinorIdentity,
}

const CORPUS_FILES: &[(&str, &str)] = &[
    ("rel1-n2", include_str!("../corpus/rel1-n2.qid")),
    ("laplace-2x2", include_str!("../corpus/laplace-2x2.qid")),
    ("laplace-3x3-row-1", include_str!("../corpus/laplace-3x3-row-1.qid")),
    ("det2-central-1-1", include_str!("../corpus/det2-central-1-1.qid")),
    ("det2-central-1-2", include_str!("../corpus/det2-central-1-2.qid")),
    ("det2-central-2-1", include_str!("../corpus/det2-central-2-1.qid")),
    ("det2-central-2-2", include_str!("../corpus/det2-central-2-2.qid")),
];

/// The shipped `.qid` sources as `(name, text)`.
pub fn corpus_files() -> &'static [(&'static str, &'static str)] {
    CORPUS_FILES
}

/// The four defining relation families of `M_q(n)` as 1x1-minor identities.
pub fn relation_identities(n: usize) -> Vec<CorpusEntry> {
    let n = n as Label;
    let pairs: Vec<(Label, Label)> = (1..=n).flat_map(|a| (a + 1..=n).map(move |b| (a, b))).collect();
    let mut out = Vec::new();
    let mut push = |name: String, body: String| {
        let id = parse(&format!("# mode: 1param\n# n: {n}\n{body} = 0")).expect("generated identity parses");
        out.push(CorpusEntry { name, identity: id });
    };
    for k in 1..=n {
        for &(i, j) in &pairs {
            push(format!("rel1-n{n}-k{k}-i{i}-j{j}"), format!("d[{k}|{i}]*d[{k}|{j}] - q*d[{k}|{j}]*d[{k}|{i}]"));
        }
    }
    for i in 1..=n {
        for &(k, l) in &pairs {
            push(format!("rel2-n{n}-k{k}-l{l}-i{i}"), format!("d[{k}|{i}]*d[{l}|{i}] - q*d[{l}|{i}]*d[{k}|{i}]"));
        }
    }
    for &(k, l) in &pairs {
        for &(i, j) in &pairs {
            push(format!("rel3-n{n}-k{k}-l{l}-i{i}-j{j}"), format!("d[{k}|{j}]*d[{l}|{i}] - d[{l}|{i}]*d[{k}|{j}]"));
        }
    }
    for &(k, l) in &pairs {
        for &(i, j) in &pairs {
            push(
                format!("rel4-n{n}-k{k}-l{l}-i{i}-j{j}"),
                format!("d[{k}|{i}]*d[{l}|{j}] - d[{l}|{j}]*d[{k}|{i}] - (q - q^-1)*d[{k}|{j}]*d[{l}|{i}]"),
            );
        }
    }
    out
}

/// Relation families at n = 2, 3 followed by the shipped files, in a fixed order.
pub fn corpus() -> Vec<CorpusEntry> {
    let mut out = relation_identities(2);
    out.extend(relation_identities(3));
    out.extend(CORPUS_FILES.iter().map(|(name, src)| CorpusEntry {
        name: name.to_string(),
        identity: parse(src).expect("shipped corpus parses"),
    }));
    out
}

fn random_minor(rng: &mut ChaCha8Rng, n: Label) -> MinorSymbol {
    let size = if rng.gen_bool(0.75) { 1 } else { 2 };
    let all: Vec<Label> = (1..=n).collect();
    let pick = |rng: &mut ChaCha8Rng| {
        let mut v: Vec<Label> = all.choose_multiple(rng, size).copied().collect();
        v.sort_unstable();
        v
    };
    let rows = pick(rng);
    let cols = pick(rng);
    MinorSymbol::new(rows, cols).expect("sorted distinct labels")
}

fn random_unit(rng: &mut ChaCha8Rng) -> Scalar {
    let s = Scalar::q_pow(rng.gen_range(-2..=2));
    if rng.gen_bool(0.5) {
        -s
    } else {
        s
    }
}

/// Homogeneous consequences `c1 X1 A F_B Y1 + c2 X2 F_A B Y2` of two verified
/// identities `A`, `B` at n = 3, where `F_A`, `F_B` are leading monomials of
/// `A`, `B` and `X1 Y1`, `X2 Y2` are two splits of one random minor monomial.
/// Each summand vanishes on its own, so the sum is an identity by construction.
pub fn random_consequences(seed: u64, count: usize) -> Vec<CorpusEntry> {
    let pool: Vec<MinorIdentity> =
        corpus().into_iter().map(|e| e.identity).filter(|id| id.degree() <= 2 && id.n <= 3).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let a = pool.choose(&mut rng).expect("nonempty pool").clone();
            let b = pool.choose(&mut rng).expect("nonempty pool").clone();
            let z: Vec<MinorSymbol> = if rng.gen_bool(0.5) {
                vec![random_minor(&mut rng, 3)]
            } else {
                let first = random_minor(&mut rng, 3);
                if first.size() == 1 {
                    vec![first, random_minor(&mut rng, 3)]
                } else {
                    vec![first]
                }
            };
            let (s1, s2) = (rng.gen_range(0..=z.len()), rng.gen_range(0..=z.len()));
            let (c1, c2) = (random_unit(&mut rng), random_unit(&mut rng));
            let fa = &a.terms[0].factors;
            let fb = &b.terms[0].factors;
            let mut terms = Vec::new();
            for t in &a.terms {
                let factors = [&z[..s1], &t.factors[..], &fb[..], &z[s1..]].concat();
                terms.push(MinorTerm::new(&c1 * &t.coeff, factors));
            }
            for t in &b.terms {
                let factors = [&z[..s2], &fa[..], &t.factors[..], &z[s2..]].concat();
                terms.push(MinorTerm::new(&c2 * &t.coeff, factors));
            }
            let identity = MinorIdentity::new(Mode::OneParam, 3, terms).expect("valid consequence");
            CorpusEntry { name: format!("random-{seed}-{k}"), identity }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryReport {
    pub name: String,
    pub one_param_holds: bool,
    pub multiparam_holds: bool,
    pub round_trip: bool,
    pub rewrite_steps: u64,
    /// The translated identity, when translation succeeded.
    pub translated: Option<String>,
    /// Residual of the first failing stage.
    pub residual: Option<String>,
    pub error: Option<String>,
}

impl EntryReport {
    pub fn passed(&self) -> bool {
        self.one_param_holds && self.multiparam_holds && self.round_trip && self.error.is_none()
    }
}

impl fmt::Display for EntryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |b: bool| if b { "ok" } else { "FAIL" };
        write!(
            f,
            "{} {}: 1param {}, multiparam {}, round trip {}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            mark(self.one_param_holds),
            mark(self.multiparam_holds),
            mark(self.round_trip)
        )?;
        if let Some(e) = &self.error {
            write!(f, "; error: {e}")?;
        }
        if let Some(r) = &self.residual {
            write!(f, "; residual: {r}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusReport {
    pub entries: Vec<EntryReport>,
    pub passed: usize,
    pub failed: usize,
    pub total_rewrite_steps: u64,
    /// Excluded from serialized output so that documents are reproducible.
    #[serde(skip)]
    pub wall_time_ms: u128,
}

impl CorpusReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &EntryReport> {
        self.entries.iter().filter(|e| !e.passed())
    }
}

impl fmt::Display for CorpusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "{e}")?;
        }
        write!(
            f,
            "{} entries, {} passed, {} failed, {} rewrite steps",
            self.entries.len(),
            self.passed,
            self.failed,
            self.total_rewrite_steps
        )
    }
}

/// Verify in `M_q`, translate, verify in `M(P,Q)`, translate back and compare.
pub fn run_entry_with<F>(entry: &CorpusEntry, systems: &F) -> EntryReport
where
    F: Fn(usize, Mode) -> RelationSystem + ?Sized,
{
    let id = &entry.identity;
    let mut rep = EntryReport {
        name: entry.name.clone(),
        one_param_holds: false,
        multiparam_holds: false,
        round_trip: false,
        rewrite_steps: 0,
        translated: None,
        residual: None,
        error: None,
    };
    let n = id.n.max(id.max_label());
    let stage = |id: &MinorIdentity, mode: Mode, rep: &mut EntryReport| -> bool {
        match verify_with(id, &systems(n, mode)) {
            Ok(v) => {
                rep.rewrite_steps += v.rewrite_steps;
                if !v.holds && rep.residual.is_none() {
                    rep.residual = Some(v.residual.to_string());
                }
                v.holds
            }
            Err(e) => {
                rep.error = Some(e.to_string());
                false
            }
        }
    };
    rep.one_param_holds = stage(id, Mode::OneParam, &mut rep);
    let multi = match translate_to_multiparam(id) {
        Ok(m) => m,
        Err(e) => {
            rep.error = Some(e.to_string());
            return rep;
        }
    };
    rep.translated = Some(multi.to_string());
    rep.multiparam_holds = stage(&multi, Mode::MultiParam, &mut rep);
    match translate_to_one_param(&multi) {
        Ok(back) => rep.round_trip = back == *id,
        Err(e) => rep.error = Some(e.to_string()),
    }
    rep
}

pub fn run_entry(entry: &CorpusEntry) -> EntryReport {
    run_entry_with(entry, &matrix_system)
}

/// Runs entries concurrently; the report keeps the input order.
pub fn run_entries_with<F>(entries: &[CorpusEntry], systems: &F) -> CorpusReport
where
    F: Fn(usize, Mode) -> RelationSystem + Sync + ?Sized,
{
    let start = Instant::now();
    let reports: Vec<EntryReport> = entries.par_iter().map(|e| run_entry_with(e, systems)).collect();
    let passed = reports.iter().filter(|r| r.passed()).count();
    CorpusReport {
        failed: reports.len() - passed,
        passed,
        total_rewrite_steps: reports.iter().map(|r| r.rewrite_steps).sum(),
        entries: reports,
        wall_time_ms: start.elapsed().as_millis(),
    }
}

pub fn run_entries(entries: &[CorpusEntry]) -> CorpusReport {
    run_entries_with(entries, &matrix_system)
}

pub fn run_corpus() -> CorpusReport {
    run_entries(&corpus())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identity::parse_expression;
    use crate::labels::complement;
    use crate::Multilabel;
    use proptest::prelude::*;

    fn id(src: &str) -> MinorIdentity {
        parse(src).unwrap()
    }

    #[test]
    fn translate_relation_one() {
        let t = translate_to_multiparam(&id("d[1|1]*d[1|2] - q*d[1|2]*d[1|1] = 0")).unwrap();
        assert_eq!(t.to_string(), "D[1|1]*D[1|2] - q12*D[1|2]*D[1|1] = 0");
        assert!(verify(&t).holds);
        assert_eq!(translate_to_one_param(&t).unwrap(), id("d[1|1]*d[1|2] - q*d[1|2]*d[1|1] = 0"));
    }

    #[test]
    fn translate_laplace_2x2() {
        let src = "d[1,2|1,2] - d[1|1]*d[2|2] + q*d[1|2]*d[2|1] = 0";
        let t = translate_to_multiparam(&id(src)).unwrap();
        assert_eq!(t.to_string(), "D[1,2|1,2] - D[1|1]*D[2|2] + q12*D[1|2]*D[2|1] = 0");
        assert!(verify(&t).holds);
    }

    #[test]
    fn singleton_term_unchanged() {
        let t = translate_to_multiparam(&id("3*q*d[2|1] = 0")).unwrap();
        assert_eq!(t.terms[0].coeff, &Scalar::int(3) * &Scalar::q());
        let back = translate_to_one_param(&id("q12*D[1|1] = 0")).unwrap();
        assert_eq!(back.terms[0].coeff, Scalar::q());
    }

    #[test]
    fn to_one_param_commutation() {
        // Valid form of the rel3 commutation; the q12^2 q^-2 variant specializes identically.
        let valid = id("D[1|2]*D[2|1] - q^2*q12^-2*D[2|1]*D[1|2] = 0");
        assert!(verify(&valid).holds);
        let other = id("D[1|2]*D[2|1] - q12^2*q^-2*D[2|1]*D[1|2] = 0");
        assert!(!verify(&other).holds);
        let want = id("d[1|2]*d[2|1] - d[2|1]*d[1|2] = 0");
        assert_eq!(translate_to_one_param(&valid).unwrap(), want);
        assert_eq!(translate_to_one_param(&other).unwrap(), want);
    }

    #[test]
    fn translation_rejects_bad_input() {
        let e = translate_to_multiparam(&id("d[1|1] - d[1|2] = 0")).unwrap_err();
        assert!(matches!(e, Error::NotHomogeneous(_)), "{e}");
        let e = translate_to_multiparam(&id("D[1|1] = 0")).unwrap_err();
        assert_eq!(e, Error::WrongMode { expected: Mode::OneParam, found: Mode::MultiParam });
        assert!(translate_to_one_param(&id("d[1|1] = 0")).is_err());
    }

    #[test]
    fn verify_detects_missing_factor() {
        let r = verify(&id("d[1|1]*d[1|2] - d[1|2]*d[1|1] = 0"));
        assert!(!r.holds);
        assert_eq!(r.residual.to_string(), "(-q^-1 + 1)*t[1,1]*t[1,2]");
        assert_eq!(r.terms_expanded, 2);
    }

    #[test]
    fn verify_in_larger_size() {
        let a = id("d[1|1]*d[1|2] - q*d[1|2]*d[1|1] = 0");
        assert!(verify_in(&a, 4).unwrap().holds);
        assert!(verify_in(&a, 1).is_err());
        assert!(verify_with(&a, &matrix_system(2, Mode::MultiParam)).is_err());
    }

    #[test]
    fn relation_family_sizes() {
        assert_eq!(relation_identities(2).len(), 6);
        assert_eq!(relation_identities(3).len(), 36);
        assert_eq!(corpus().len(), 42 + CORPUS_FILES.len());
    }

    #[test]
    fn corpus_passes() {
        let rep = run_corpus();
        assert!(rep.all_passed(), "{rep}");
        let names: Vec<_> = rep.entries.iter().map(|e| e.name.clone()).collect();
        let again: Vec<_> = corpus().into_iter().map(|e| e.name).collect();
        assert_eq!(names, again);
    }

    #[test]
    fn det2_translation_is_twisted_commutation() {
        let e = corpus().into_iter().find(|e| e.name == "det2-central-1-2").unwrap();
        let t = translate_to_multiparam(&e.identity).unwrap();
        assert_eq!(t.to_string(), "q*q12^-1*D[1,2|1,2]*D[1|2] - q^-1*q12*D[1|2]*D[1,2|1,2] = 0");
        assert!(verify(&t).holds);
    }

    /// Searches `c_j` in `{±q^e : |e| <= 3}` for
    /// `d[123|123] - sum_j c_j d[1|j] d[23|complement(j)] = 0`.
    #[test]
    fn laplace_3x3_coefficients_by_search() {
        let rs = matrix_system(3, Mode::OneParam);
        let mut red = Reducer::new(&rs);
        let full = MinorSymbol::new([1, 2, 3], [1, 2, 3]).unwrap();
        let det = expand_product_with(&[full], &mut red).unwrap();
        let parts: Vec<NCPoly> = (1..=3)
            .map(|j| {
                let rest = complement(&Multilabel::from([j]), 3).unwrap();
                let ms = [MinorSymbol::new([1], [j]).unwrap(), MinorSymbol::new([2, 3], rest).unwrap()];
                expand_product_with(&ms, &mut red).unwrap()
            })
            .collect();
        let ansatz: Vec<Scalar> = (-3..=3).flat_map(|e| [Scalar::q_pow(e), -Scalar::q_pow(e)]).collect();
        let mut found = Vec::new();
        for c1 in &ansatz {
            for c2 in &ansatz {
                for c3 in &ansatz {
                    let mut r = det.clone();
                    for (c, p) in [c1, c2, c3].into_iter().zip(&parts) {
                        r.add_scaled(p, &-c.clone());
                    }
                    if r.is_zero() {
                        found.push([c1.clone(), c2.clone(), c3.clone()]);
                    }
                }
            }
        }
        assert_eq!(found, vec![[Scalar::one(), -Scalar::q(), Scalar::q_pow(2)]]);
        let shipped = corpus().into_iter().find(|e| e.name == "laplace-3x3-row-1").unwrap().identity;
        let coeffs: Vec<Scalar> = shipped.terms[1..].iter().map(|t| -t.coeff.clone()).collect();
        assert_eq!(coeffs, found[0].to_vec());
    }

    #[test]
    fn negative_control_breaks_rel4_entries() {
        let entries: Vec<_> = corpus().into_iter().filter(|e| e.name.starts_with("rel4-n2")).collect();
        let rep = run_entries_with(&entries, &corrupted_system);
        assert_eq!(rep.failed, entries.len());
        assert!(rep.entries.iter().all(|e| !e.one_param_holds && !e.multiparam_holds));
    }

    #[test]
    fn random_consequences_are_deterministic_and_homogeneous() {
        let a = random_consequences(7, 10);
        assert_eq!(a, random_consequences(7, 10));
        assert!(a.iter().all(|e| e.identity.is_homogeneous()));
        let rep = run_entries(&a);
        assert!(rep.all_passed(), "{rep}");
    }

    #[test]
    fn structured_report_is_reproducible() {
        let entries: Vec<_> = corpus().into_iter().take(3).collect();
        let a = serde_json::to_string(&run_entries(&entries)).unwrap();
        let b = serde_json::to_string(&run_entries(&entries)).unwrap();
        assert_eq!(a, b);
        assert!(!a.contains("wall_time"));
    }

    #[test]
    fn expression_translation_reads_both_ways() {
        let e = parse_expression("d[1|2]*d[2|1]").unwrap();
        assert_eq!(translation_factor(&e.terms[0]), &Scalar::q_pow(-1) * &Scalar::qij(1, 2));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn factor_locality_and_homogeneity(k in 0usize..48, rot in 0usize..4) {
            let entries = corpus();
            let id = entries[k % entries.len()].identity.clone();
            let t = translate_to_multiparam(&id).unwrap();
            let mut rotated = id.clone();
            let len = rotated.terms.len();
            rotated.terms.rotate_left(rot % len);
            let tr = translate_to_multiparam(&rotated).unwrap();
            for (a, b) in t.terms.iter().zip(tr.terms.iter().cycle().skip(len - rot % len)) {
                prop_assert_eq!(a, b);
            }
            prop_assert!(t.is_homogeneous());
            prop_assert!(translate_to_one_param(&t).unwrap().is_homogeneous());
            prop_assert_eq!(translate_to_one_param(&t).unwrap(), id);
        }
    }
}
