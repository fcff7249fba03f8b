//! Quantum minors `D^K_L` and their expansions.
//!
//! The row expansion is the definition:
//! `D^K_L = sum_sigma row_sign(sigma, K) T^{k_sigma(1)}_{l_1} ... T^{k_sigma(m)}_{l_m}`.
//! The column expansion, with columns permuted and rows fixed, must agree
//! with it in the algebra; [`check_row_col_agreement`] verifies this.

use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;

use crate::labels::{col_sign_in, row_sign_in, Multilabel, Permutation};
use crate::ncalg::{Generator, NCPoly, Preset, Reducer, RelationSystem, Tag, Word};
use crate::params::{Label, Mode, ParamSpec, Scalar};
use crate::tensor::{pure, CheckReport, InstanceResult, TensorAlgebra};
use crate::Error;

/// The symbol `D^rows_cols`; both multilabels strictly ascending and of equal size.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MinorSymbol {
    rows: Multilabel,
    cols: Multilabel,
}

impl MinorSymbol {
    pub fn new(rows: impl Into<Multilabel>, cols: impl Into<Multilabel>) -> Result<Self, Error> {
        let (rows, cols) = (rows.into(), cols.into());
        if rows.is_empty() || rows.len() != cols.len() {
            return Err(Error::InvalidMinor(format!(
                "row and column multilabels must have the same positive size, got {} and {}",
                rows.len(),
                cols.len()
            )));
        }
        for (what, m) in [("rows", &rows), ("columns", &cols)] {
            if m.contains(&0) {
                return Err(Error::InvalidMinor(format!("{what} contain label 0")));
            }
            if !m.is_strictly_ascending() {
                return Err(Error::InvalidMinor(format!("{what} {m} must be strictly ascending")));
            }
        }
        Ok(Self { rows, cols })
    }

    pub fn rows(&self) -> &Multilabel {
        &self.rows
    }

    pub fn cols(&self) -> &Multilabel {
        &self.cols
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn max_label(&self) -> usize {
        self.rows.max_label().max(self.cols.max_label())
    }

    /// Text form, `D[..|..]` or `d[..|..]`.
    pub fn render(&self, mode: Mode) -> String {
        let letter = match mode {
            Mode::MultiParam => 'D',
            Mode::OneParam => 'd',
        };
        format!("{letter}[{}|{}]", self.rows, self.cols)
    }

    fn check_range(&self, n: usize) -> Result<(), Error> {
        match self.max_label() {
            m if m > n => Err(Error::LabelOutOfRange { label: m, n }),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for MinorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Mode::MultiParam))
    }
}

/// Every minor of an `n x n` matrix, by size, then rows, then columns.
pub fn all_minors(n: usize) -> Vec<MinorSymbol> {
    let labels: Vec<Label> = (1..=n as Label).collect();
    (1..=n)
        .flat_map(|m| {
            let subsets: Vec<Vec<Label>> = labels.iter().copied().combinations(m).collect();
            subsets
                .iter()
                .cartesian_product(subsets.iter())
                .map(|(r, c)| MinorSymbol::new(r.clone(), c.clone()).expect("valid"))
                .collect::<Vec<_>>()
        })
        .collect()
}

fn matrix_tag(rs: &RelationSystem) -> Result<Tag, Error> {
    let tag = rs.tag();
    if tag.is_matrix() {
        Ok(tag)
    } else {
        Err(Error::TagMismatch { expected: "T or t".into(), found: tag.letter().to_string() })
    }
}

/// Row expansion in the free algebra, with an auxiliary column permutation `tau`:
/// `sum_sigma row_sign(sigma, K) row_sign(tau, L)^-1 T^{k_sigma(1)}_{l_tau(1)} ...`.
pub fn row_expansion_free(m: &MinorSymbol, tau: &Permutation, spec: &ParamSpec, tag: Tag) -> Result<NCPoly, Error> {
    m.check_range(spec.n())?;
    let cols = m.cols.permuted(tau);
    let col_factor = row_sign_in(tau, &m.cols, spec)?.inv()?;
    let mut out = NCPoly::zero(tag);
    for sigma in Permutation::all(m.size()) {
        let rows = m.rows.permuted(&sigma);
        let c = &row_sign_in(&sigma, &m.rows, spec)? * &col_factor;
        let w: Word = rows.iter().zip(cols.iter()).map(|(&r, &c)| Generator::matrix(tag, r, c)).collect();
        out.add_term(w, c);
    }
    Ok(out)
}

/// Column expansion in the free algebra: `sum_sigma col_sign(sigma, L) T^{k_1}_{l_sigma(1)} ...`.
pub fn col_expansion_free(m: &MinorSymbol, spec: &ParamSpec, tag: Tag) -> Result<NCPoly, Error> {
    m.check_range(spec.n())?;
    let mut out = NCPoly::zero(tag);
    for sigma in Permutation::all(m.size()) {
        let cols = m.cols.permuted(&sigma);
        let c = col_sign_in(&sigma, &m.cols, spec)?;
        let w: Word = m.rows.iter().zip(cols.iter()).map(|(&r, &c)| Generator::matrix(tag, r, c)).collect();
        out.add_term(w, c);
    }
    Ok(out)
}

pub fn expand_minor_rows_with(m: &MinorSymbol, red: &mut Reducer<'_>) -> Result<NCPoly, Error> {
    let rs = red.system();
    let free = row_expansion_free(m, &Permutation::identity(m.size()), rs.spec(), matrix_tag(rs)?)?;
    red.normal_form(&free)
}

pub fn expand_minor_cols_with(m: &MinorSymbol, red: &mut Reducer<'_>) -> Result<NCPoly, Error> {
    let rs = red.system();
    let free = col_expansion_free(m, rs.spec(), matrix_tag(rs)?)?;
    red.normal_form(&free)
}

/// PBW normal form of the row expansion in the matrix algebra of `rs`.
pub fn expand_minor_rows(m: &MinorSymbol, rs: &RelationSystem) -> Result<NCPoly, Error> {
    expand_minor_rows_with(m, &mut Reducer::new(rs))
}

/// PBW normal form of the column expansion in the matrix algebra of `rs`.
pub fn expand_minor_cols(m: &MinorSymbol, rs: &RelationSystem) -> Result<NCPoly, Error> {
    expand_minor_cols_with(m, &mut Reducer::new(rs))
}

pub fn expand_product_with(ms: &[MinorSymbol], red: &mut Reducer<'_>) -> Result<NCPoly, Error> {
    let tag = matrix_tag(red.system())?;
    let mut acc = NCPoly::one(tag);
    for m in ms {
        let e = expand_minor_rows_with(m, red)?;
        acc = red.mul(&acc, &e)?;
    }
    Ok(acc)
}

/// Normal form of the ordered product of the minors' row expansions.
pub fn expand_product(ms: &[MinorSymbol], rs: &RelationSystem) -> Result<NCPoly, Error> {
    expand_product_with(ms, &mut Reducer::new(rs))
}

pub fn matrix_system(n: usize, mode: Mode) -> RelationSystem {
    RelationSystem::new(Preset::matrix(mode), ParamSpec::new(n, mode).expect("valid size"))
}

/// Row and column expansions agree for every minor of size `n`.
pub fn check_row_col_agreement(n: usize, mode: Mode) -> CheckReport {
    let rs = matrix_system(n, mode);
    let results = all_minors(n)
        .par_iter()
        .map(|m| {
            let mut red = Reducer::new(&rs);
            let rows = expand_minor_rows_with(m, &mut red).expect("valid minor");
            let cols = expand_minor_cols_with(m, &mut red).expect("valid minor");
            let diff = rows.sub(&cols);
            InstanceResult {
                instance: m.render(mode),
                passed: diff.is_zero(),
                residual: if diff.is_zero() { String::new() } else { diff.to_string() },
            }
        })
        .collect();
    CheckReport::new(format!("row-col-agreement {mode} n={n}"), results)
}

/// The multiparametric expansion specializes coefficientwise to the one-parameter one.
pub fn check_specialization(n: usize) -> CheckReport {
    let (multi, one) = (matrix_system(n, Mode::MultiParam), matrix_system(n, Mode::OneParam));
    let results = all_minors(n)
        .par_iter()
        .map(|m| {
            let big = expand_minor_rows(m, &multi).expect("valid minor");
            let small = expand_minor_rows(m, &one).expect("valid minor");
            let special = big.map_coeffs(Scalar::specialize_one_param).retag(Tag::MatrixOne);
            let diff = special.sub(&small);
            InstanceResult {
                instance: m.to_string(),
                passed: diff.is_zero(),
                residual: if diff.is_zero() { String::new() } else { diff.to_string() },
            }
        })
        .collect();
    CheckReport::new(format!("minor-specialization n={n}"), results)
}

/// `iota(D^K_L) = l^L (x) d^K_L (x) r_K` with coefficient exactly 1.
pub fn check_minor_images(n: usize, sizes: impl Fn(usize) -> bool + Sync) -> CheckReport {
    let multi = matrix_system(n, Mode::MultiParam);
    let ta = TensorAlgebra::new(n);
    let minors: Vec<_> = all_minors(n).into_iter().filter(|m| sizes(m.size())).collect();
    let results = minors
        .par_iter()
        .map(|m| {
            let mut mid = ta.reducer();
            let big = expand_minor_rows(m, &multi).expect("valid minor");
            let image = ta.iota_with(&big, &mut mid).expect("matrix poly");
            let small = expand_minor_rows_with(m, &mut mid).expect("valid minor");
            let want = pure(m.cols().clone(), small, m.rows().clone());
            let passed = image == want;
            let residual = if passed {
                String::new()
            } else {
                let mut diff = image.clone();
                diff.add_scaled(&want, &Scalar::int(-1));
                diff.to_string()
            };
            InstanceResult { instance: m.to_string(), passed, residual }
        })
        .collect();
    CheckReport::new(format!("minor-images n={n}"), results)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::word;

    #[allow(non_snake_case)]
    fn T(r: Label, c: Label) -> Generator {
        Generator::T(r, c)
    }

    fn t(r: Label, c: Label) -> Generator {
        Generator::t(r, c)
    }

    fn minor(rows: &[Label], cols: &[Label]) -> MinorSymbol {
        MinorSymbol::new(rows.to_vec(), cols.to_vec()).unwrap()
    }

    #[test]
    fn symbol_validation() {
        assert!(MinorSymbol::new(vec![1, 2], vec![1]).is_err());
        assert!(MinorSymbol::new(vec![2, 1], vec![1, 2]).is_err());
        assert!(MinorSymbol::new(vec![1, 1], vec![1, 2]).is_err());
        assert!(MinorSymbol::new(Vec::new(), Vec::new()).is_err());
        assert_eq!(minor(&[1, 3], &[2, 4]).render(Mode::OneParam), "d[1,3|2,4]");
    }

    #[test]
    fn singleton_minors() {
        let rs = matrix_system(3, Mode::MultiParam);
        assert_eq!(expand_minor_rows(&minor(&[2], &[3]), &rs).unwrap(), NCPoly::gen(T(2, 3)));
        assert_eq!(expand_minor_cols(&minor(&[1], &[2]), &rs).unwrap(), NCPoly::gen(T(1, 2)));
        assert!(expand_minor_rows(&minor(&[4], &[1]), &rs).is_err());
    }

    #[test]
    fn two_by_two_multiparam() {
        let rs = matrix_system(2, Mode::MultiParam);
        let spec = *rs.spec();
        let d = expand_minor_rows(&minor(&[1, 2], &[1, 2]), &rs).unwrap();
        // T11 T22 - p12 T21 T12, as an element
        let mut stated = NCPoly::from_word(&[T(1, 1), T(2, 2)]);
        stated.add_term(word(&[T(2, 1), T(1, 2)]), -spec.p_param(1, 2).unwrap());
        assert!(rs.is_zero(&d.sub(&stated)));
        // and in PBW form: T11 T22 - q12 T12 T21
        let mut pbw = NCPoly::from_word(&[T(1, 1), T(2, 2)]);
        pbw.add_term(word(&[T(1, 2), T(2, 1)]), -Scalar::qij(1, 2));
        assert_eq!(d, pbw);
        assert_eq!(d.to_string(), "T[1,1]*T[2,2] - q12*T[1,2]*T[2,1]");
        assert_eq!(expand_minor_cols(&minor(&[1, 2], &[1, 2]), &rs).unwrap(), pbw);
        let cols_free = col_expansion_free(&minor(&[1, 2], &[1, 2]), &spec, Tag::MatrixMulti).unwrap();
        assert_eq!(cols_free, pbw);
    }

    #[test]
    fn two_by_two_one_param() {
        let rs = matrix_system(2, Mode::OneParam);
        let d = expand_minor_rows(&minor(&[1, 2], &[1, 2]), &rs).unwrap();
        let mut want = NCPoly::from_word(&[t(1, 1), t(2, 2)]);
        want.add_term(word(&[t(1, 2), t(2, 1)]), -Scalar::q());
        assert_eq!(d, want);
        let mut stated = NCPoly::from_word(&[t(1, 1), t(2, 2)]);
        stated.add_term(word(&[t(2, 1), t(1, 2)]), -Scalar::q());
        assert!(rs.is_zero(&d.sub(&stated)));
        assert_eq!(expand_minor_cols(&minor(&[1, 2], &[1, 2]), &rs).unwrap(), want);
    }

    #[test]
    fn one_param_determinant_is_central() {
        let rs = matrix_system(2, Mode::OneParam);
        let d = expand_minor_rows(&minor(&[1, 2], &[1, 2]), &rs).unwrap();
        for g in rs.generators() {
            let x = NCPoly::gen(*g);
            let comm = rs.mul(&d, &x).unwrap().sub(&rs.mul(&x, &d).unwrap());
            assert!(comm.is_zero(), "[d, {g}] = {comm}");
        }
    }

    #[test]
    fn products() {
        let rs = matrix_system(2, Mode::MultiParam);
        let p = expand_product(&[minor(&[1], &[1]), minor(&[2], &[2])], &rs).unwrap();
        assert_eq!(p, NCPoly::from_word(&[T(1, 1), T(2, 2)]));
        let p = expand_product(&[minor(&[1], &[2]), minor(&[2], &[1])], &rs).unwrap();
        assert_eq!(p, NCPoly::from_word(&[T(1, 2), T(2, 1)]));
        // equal as elements to q12^-1 p12 T21 T12
        let spec = rs.spec();
        let c = &Scalar::qij(1, 2).inv().unwrap() * &spec.p_param(1, 2).unwrap();
        let stated = NCPoly::term(Tag::MatrixMulti, c, word(&[T(2, 1), T(1, 2)]));
        assert!(rs.is_zero(&p.sub(&stated)));
        assert_eq!(expand_product(&[], &rs).unwrap(), NCPoly::one(Tag::MatrixMulti));
    }

    #[test]
    fn auxiliary_column_permutation() {
        for mode in [Mode::MultiParam, Mode::OneParam] {
            let rs = matrix_system(2, mode);
            let m = minor(&[1, 2], &[1, 2]);
            let tau = Permutation::new(vec![1, 0]).unwrap();
            let free = row_expansion_free(&m, &tau, rs.spec(), rs.tag()).unwrap();
            assert_eq!(rs.normal_form(&free), expand_minor_rows(&m, &rs).unwrap());
        }
    }

    #[test]
    fn agreement_and_minor_images_small() {
        for n in 1..=3 {
            for mode in [Mode::MultiParam, Mode::OneParam] {
                let rep = check_row_col_agreement(n, mode);
                assert!(rep.passed(), "{rep}");
            }
            assert!(check_specialization(n).passed());
            let rep = check_minor_images(n, |_| true);
            assert!(rep.passed(), "{rep}");
        }
    }

    #[test]
    fn minor_counts() {
        assert_eq!(all_minors(2).len(), 4 + 1);
        assert_eq!(all_minors(3).len(), 9 + 9 + 1);
        assert_eq!(all_minors(4).len(), 16 + 36 + 16 + 1);
    }
}
