//! Multilabels, permutations and the reordering coefficients.
//!
//! `zeta_r(J)` is the scalar with `r_J = zeta_r(J) r_{:J:}` in `S_r`, where
//! `S_r` has `r_j r_i = q^-1 q_ij r_i r_j` for `i < j`. It is accumulated one
//! inversion at a time while bubble-sorting; each inversion contributes one
//! factor that does not depend on the order the inversions are removed in.

use std::fmt;
use std::ops::Deref;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::params::{Label, ParamSpec, Scalar};
use crate::Error;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multilabel(Vec<Label>);

impl Multilabel {
    pub fn new(labels: Vec<Label>) -> Self {
        Multilabel(labels)
    }

    pub fn empty() -> Self {
        Multilabel(Vec::new())
    }

    /// `1, 2, ..., n`.
    pub fn full(n: usize) -> Self {
        Multilabel((1..=n as Label).collect())
    }

    pub fn labels(&self) -> &[Label] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Label> {
        self.0
    }

    pub fn concat(&self, other: &Multilabel) -> Multilabel {
        Multilabel(self.0.iter().chain(&other.0).copied().collect())
    }

    /// The ascending version `:J:`.
    pub fn sorted(&self) -> Multilabel {
        let mut v = self.0.clone();
        v.sort_unstable();
        Multilabel(v)
    }

    pub fn is_sorted(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn is_strictly_ascending(&self) -> bool {
        self.0.windows(2).all(|w| w[0] < w[1])
    }

    pub fn has_repetition(&self) -> bool {
        !self.0.iter().all_unique()
    }

    /// Number of position pairs `a < b` with `J_a > J_b`.
    pub fn inversions(&self) -> usize {
        inversion_pairs(&self.0).count()
    }

    pub fn max_label(&self) -> usize {
        self.0.iter().copied().max().unwrap_or(0) as usize
    }

    /// Applies `sigma` to the positions: `(j_sigma(1), ..., j_sigma(m))`.
    pub fn permuted(&self, sigma: &Permutation) -> Multilabel {
        assert_eq!(sigma.len(), self.len(), "permutation degree mismatch");
        Multilabel(sigma.images().iter().map(|&s| self.0[s]).collect())
    }
}

impl Deref for Multilabel {
    type Target = [Label];
    fn deref(&self) -> &[Label] {
        &self.0
    }
}

impl From<Vec<Label>> for Multilabel {
    fn from(v: Vec<Label>) -> Self {
        Multilabel(v)
    }
}

impl From<&[Label]> for Multilabel {
    fn from(v: &[Label]) -> Self {
        Multilabel(v.to_vec())
    }
}

impl<const N: usize> From<[Label; N]> for Multilabel {
    fn from(v: [Label; N]) -> Self {
        Multilabel(v.to_vec())
    }
}

impl fmt::Display for Multilabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.iter().join(","))
    }
}

fn inversion_pairs(v: &[Label]) -> impl Iterator<Item = (Label, Label)> + '_ {
    v.iter().enumerate().flat_map(move |(a, &x)| v[a + 1..].iter().filter(move |&&y| x > y).map(move |&y| (x, y)))
}

/// A permutation of `{0, .., m-1}` with its inversion count cached.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
    length: usize,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, Error> {
        let m = images.len();
        let mut seen = vec![false; m];
        for &s in &images {
            if s >= m || std::mem::replace(&mut seen[s], true) {
                return Err(Error::Validation(format!("{images:?} is not a permutation")));
            }
        }
        let length = images.iter().enumerate().map(|(a, &x)| images[a + 1..].iter().filter(|&&y| x > y).count()).sum();
        Ok(Self { images, length })
    }

    pub fn identity(m: usize) -> Self {
        Self { images: (0..m).collect(), length: 0 }
    }

    /// All permutations of degree `m`, in lexicographic order.
    pub fn all(m: usize) -> impl Iterator<Item = Permutation> {
        (0..m).permutations(m).map(|p| Permutation::new(p).expect("valid"))
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// The inversion count `l(sigma)`.
    pub fn length(&self) -> usize {
        self.length
    }

    /// `(self o other)(a) = self(other(a))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation::new(other.images.iter().map(|&a| self.images[a]).collect()).expect("valid")
    }

    /// Adjacent transposition of positions `a` and `a+1`.
    pub fn adjacent(m: usize, a: usize) -> Permutation {
        let mut images: Vec<usize> = (0..m).collect();
        images.swap(a, a + 1);
        Permutation::new(images).expect("valid")
    }
}

/// Ascending merge of all parts, with multiplicity.
pub fn sorted_concat<'a>(parts: impl IntoIterator<Item = &'a Multilabel>) -> Multilabel {
    let mut v: Vec<Label> = parts.into_iter().flat_map(|p| p.0.iter().copied()).collect();
    v.sort_unstable();
    Multilabel(v)
}

/// Ascending complement of `j` in `1..=n`.
pub fn complement(j: &Multilabel, n: usize) -> Result<Multilabel, Error> {
    if j.has_repetition() {
        return Err(Error::RepeatedLabel(j.to_string()));
    }
    if let Some(&bad) = j.iter().find(|&&l| l == 0 || l as usize > n) {
        return Err(Error::LabelOutOfRange { label: bad as usize, n });
    }
    Ok(Multilabel((1..=n as Label).filter(|l| !j.contains(l)).collect()))
}

fn zeta_spec(j: &Multilabel) -> ParamSpec {
    ParamSpec::multi(j.max_label().max(1))
}

/// `zeta_r(J)`: one factor `q^-1 q_ab` (`a < b`) per inversion `(b, a)`.
pub fn zeta_r(j: &Multilabel) -> Scalar {
    zeta_r_in(j, &zeta_spec(j))
}

/// `zeta_r` evaluated in the given parameter setting.
pub fn zeta_r_in(j: &Multilabel, spec: &ParamSpec) -> Scalar {
    let qi = Scalar::q_pow(-1);
    inversion_pairs(j).fold(Scalar::one(), |acc, (hi, lo)| {
        let f = &qi * &spec.q_param(lo, hi).expect("labels in range");
        &acc * &f
    })
}

/// `zeta_l(J) = zeta_r(J)^-1`: one factor `q q_ab^-1` per inversion.
pub fn zeta_l(j: &Multilabel) -> Scalar {
    zeta_l_in(j, &zeta_spec(j))
}

pub fn zeta_l_in(j: &Multilabel, spec: &ParamSpec) -> Scalar {
    let q = Scalar::q();
    inversion_pairs(j).fold(Scalar::one(), |acc, (hi, lo)| {
        let f = &q * &spec.q_param(hi, lo).expect("labels in range");
        &acc * &f
    })
}

fn check_no_repetition(k: &Multilabel) -> Result<(), Error> {
    if k.has_repetition() {
        Err(Error::RepeatedLabel(k.to_string()))
    } else {
        Ok(())
    }
}

fn minus_q_pow(k: usize) -> Scalar {
    let s = Scalar::q_pow(k as i32);
    if k % 2 == 1 {
        -s
    } else {
        s
    }
}

/// Row coefficient of the minor expansion: `(-q)^l(sigma) zeta_l(sigma K)`.
pub fn row_sign(sigma: &Permutation, k: &Multilabel) -> Result<Scalar, Error> {
    row_sign_in(sigma, k, &zeta_spec(k))
}

pub fn row_sign_in(sigma: &Permutation, k: &Multilabel, spec: &ParamSpec) -> Result<Scalar, Error> {
    check_no_repetition(k)?;
    let sk = k.permuted(sigma);
    Ok(&minus_q_pow(sigma.length()) * &zeta_l_in(&sk, spec))
}

/// Column coefficient of the minor expansion: `(-q)^l(sigma) zeta_r(sigma L)`.
pub fn col_sign(sigma: &Permutation, l: &Multilabel) -> Result<Scalar, Error> {
    col_sign_in(sigma, l, &zeta_spec(l))
}

pub fn col_sign_in(sigma: &Permutation, l: &Multilabel, spec: &ParamSpec) -> Result<Scalar, Error> {
    check_no_repetition(l)?;
    let sl = l.permuted(sigma);
    Ok(&minus_q_pow(sigma.length()) * &zeta_r_in(&sl, spec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ml(v: &[Label]) -> Multilabel {
        Multilabel::from(v)
    }

    fn q12() -> Scalar {
        Scalar::qij(1, 2)
    }

    /// Reorders `r_J` one adjacent swap at a time using
    /// `r_j r_i = q^-1 q_ij r_i r_j`; the swap position is chosen by `pick`.
    fn reorder_r(j: &[Label], pick: impl Fn(&[usize]) -> usize) -> Scalar {
        let mut w = j.to_vec();
        let mut acc = Scalar::one();
        loop {
            let desc: Vec<usize> = (0..w.len().saturating_sub(1)).filter(|&a| w[a] > w[a + 1]).collect();
            if desc.is_empty() {
                return acc;
            }
            let a = desc[pick(&desc)];
            let (lo, hi) = (w[a + 1], w[a]);
            acc = &acc * &(&Scalar::q_pow(-1) * &Scalar::qij(lo, hi));
            w.swap(a, a + 1);
        }
    }

    #[test]
    fn sorted_concat_examples() {
        assert_eq!(sorted_concat([&ml(&[1, 2]), &ml(&[1, 3])]), ml(&[1, 1, 2, 3]));
        assert_eq!(sorted_concat([&ml(&[2, 1])]), ml(&[1, 2]));
        assert_eq!(sorted_concat([&ml(&[]), &ml(&[3])]), ml(&[3]));
    }

    #[test]
    fn complement_examples() {
        assert_eq!(complement(&ml(&[1, 3]), 4).unwrap(), ml(&[2, 4]));
        assert_eq!(complement(&ml(&[]), 2).unwrap(), ml(&[1, 2]));
        assert_eq!(complement(&ml(&[1, 2, 3]), 3).unwrap(), ml(&[]));
        assert!(matches!(complement(&ml(&[1, 1]), 3), Err(Error::RepeatedLabel(_))));
    }

    #[test]
    fn zeta_r_examples() {
        assert!(zeta_r(&ml(&[1, 2, 3])).is_one());
        let want = &Scalar::q_pow(-1) * &q12();
        assert_eq!(zeta_r(&ml(&[2, 1])), want);
        assert_eq!(reorder_r(&[2, 1], |_| 0), want);
        let want = &(&Scalar::q_pow(-2) * &Scalar::qij(1, 3)) * &Scalar::qij(2, 3);
        assert_eq!(zeta_r(&ml(&[3, 1, 2])), want);
        assert_eq!(reorder_r(&[3, 1, 2], |_| 0), want);
    }

    #[test]
    fn zeta_l_examples() {
        assert!(zeta_l(&ml(&[1, 2])).is_one());
        assert_eq!(zeta_l(&ml(&[2, 1])), &Scalar::q() * &q12().inv().unwrap());
    }

    #[test]
    fn row_sign_examples() {
        let swap = Permutation::new(vec![1, 0]).unwrap();
        assert!(row_sign(&Permutation::identity(3), &ml(&[1, 2, 3])).unwrap().is_one());
        let p12 = ParamSpec::multi(2).p_param(1, 2).unwrap();
        assert_eq!(row_sign(&swap, &ml(&[1, 2])).unwrap(), -p12);
        let one = row_sign_in(&swap, &ml(&[1, 2]), &ParamSpec::one(2)).unwrap();
        assert_eq!(one, -Scalar::q());
        assert!(row_sign(&swap, &ml(&[1, 1])).is_err());
    }

    #[test]
    fn col_sign_examples() {
        let swap = Permutation::new(vec![1, 0]).unwrap();
        assert!(col_sign(&Permutation::identity(2), &ml(&[2, 4])).unwrap().is_one());
        assert_eq!(col_sign(&swap, &ml(&[1, 2])).unwrap(), -q12());
        let one = col_sign_in(&swap, &ml(&[1, 2]), &ParamSpec::one(2)).unwrap();
        assert_eq!(one, -Scalar::q());
        assert!(col_sign(&swap, &ml(&[2, 2])).is_err());
    }

    #[test]
    fn permutation_lengths() {
        assert_eq!(Permutation::new(vec![2, 0, 1]).unwrap().length(), 2);
        assert_eq!(Permutation::all(4).map(|p| p.length()).max(), Some(6));
        assert_eq!(Permutation::all(3).count(), 6);
        assert!(Permutation::new(vec![0, 0]).is_err());
    }

    fn multilabel(max_len: usize, n: Label) -> impl Strategy<Value = Vec<Label>> {
        prop::collection::vec(1..=n, 0..=max_len)
    }

    fn distinct_multilabel(max_len: usize, n: Label) -> impl Strategy<Value = Vec<Label>> {
        Just((1..=n).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_flat_map(move |v| (0..=max_len.min(v.len())).prop_map(move |k| v[..k].to_vec()))
    }

    proptest! {
        #[test]
        fn zeta_is_one_iff_sorted(j in multilabel(6, 6)) {
            let j = Multilabel::from(j);
            prop_assert_eq!(zeta_r(&j).is_one(), j.is_sorted());
            prop_assert_eq!(zeta_l(&j).is_one(), j.is_sorted());
        }

        #[test]
        fn zeta_l_inverts_zeta_r(j in multilabel(6, 6)) {
            let j = Multilabel::from(j);
            prop_assert!((&zeta_l(&j) * &zeta_r(&j)).is_one());
        }

        #[test]
        fn zeta_independent_of_sorting_order(j in multilabel(6, 5)) {
            let first = reorder_r(&j, |_| 0);
            let last = reorder_r(&j, |d| d.len() - 1);
            prop_assert_eq!(&first, &last);
            prop_assert_eq!(zeta_r(&Multilabel::from(j)), first);
        }

        #[test]
        fn zeta_matches_normal_form_reduction(j in multilabel(6, 5)) {
            use crate::ncalg::{Generator, Preset, RelationSystem, Tag};
            let spec = ParamSpec::multi(5);
            let j = Multilabel::from(j);
            for (preset, tag, zeta) in [
                (Preset::SRight, Tag::Right, zeta_r_in(&j, &spec)),
                (Preset::SLeft, Tag::Left, zeta_l_in(&j, &spec)),
            ] {
                let rs = RelationSystem::new(preset, spec);
                let w: Vec<Generator> = j.iter().map(|&i| Generator::vector(tag, i)).collect();
                let sorted: Vec<Generator> = j.sorted().iter().map(|&i| Generator::vector(tag, i)).collect();
                let nf = rs.normal_form(&crate::NCPoly::term(tag, Scalar::one(), crate::ncalg::word(&w)));
                prop_assert_eq!(nf.len(), 1);
                prop_assert_eq!(nf.coeff(&sorted), zeta);
            }
        }

        #[test]
        fn zeta_specializes_to_one(j in multilabel(6, 6)) {
            let j = Multilabel::from(j);
            prop_assert!(zeta_r(&j).specialize_one_param().is_one());
            prop_assert!(zeta_l(&j).specialize_one_param().is_one());
        }

        #[test]
        fn signs_specialize_to_powers_of_minus_q(k in distinct_multilabel(5, 6), seed in any::<u64>()) {
            let k = Multilabel::from(k).sorted();
            let m = k.len();
            let perms: Vec<_> = Permutation::all(m).collect();
            let sigma = &perms[(seed % perms.len() as u64) as usize];
            let want = minus_q_pow(sigma.length());
            prop_assert_eq!(row_sign(sigma, &k).unwrap().specialize_one_param(), want.clone());
            prop_assert_eq!(col_sign(sigma, &k).unwrap().specialize_one_param(), want);
        }

        #[test]
        fn row_sign_is_product_of_minus_p(k in distinct_multilabel(5, 6), seed in any::<u64>()) {
            let k = Multilabel::from(k).sorted();
            let perms: Vec<_> = Permutation::all(k.len()).collect();
            let sigma = &perms[(seed % perms.len() as u64) as usize];
            let spec = ParamSpec::multi(6);
            let sk = k.permuted(sigma);
            let mut want = Scalar::one();
            for (hi, lo) in inversion_pairs(&sk) {
                want = &want * &(-spec.p_param(lo, hi).unwrap());
            }
            prop_assert_eq!(row_sign_in(sigma, &k, &spec).unwrap(), want);
        }

        #[test]
        fn row_sign_single_step(k in distinct_multilabel(5, 6), seed in any::<u64>(), pos in any::<usize>()) {
            let k = Multilabel::from(k).sorted();
            prop_assume!(k.len() >= 2);
            let m = k.len();
            let perms: Vec<_> = Permutation::all(m).collect();
            let sigma = &perms[(seed % perms.len() as u64) as usize];
            let a = pos % (m - 1);
            let tau = Permutation::adjacent(m, a);
            let st = sigma.compose(&tau);
            let spec = ParamSpec::multi(6);
            let before = row_sign_in(sigma, &k, &spec).unwrap();
            let after = row_sign_in(&st, &k, &spec).unwrap();
            let sk = k.permuted(sigma);
            let (x, y) = (sk[a], sk[a + 1]);
            let step = -spec.p_param(x.min(y), x.max(y)).unwrap();
            let step = if x < y { step } else { step.inv().unwrap() };
            prop_assert_eq!(after, &before * &step);
        }
    }
}
