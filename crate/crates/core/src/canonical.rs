//! Degree blocks of `F_q[s]`, their bar matrices, and the triangular
//! solver for the canonical bases `G±(λ; s)`.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::coeff::{Lattice, LaurentRat};
use crate::combinatorics::multipartitions_of;
use crate::error::{Error, Result};
use crate::fock::{FockContext, FockVector, MultiCharge};
use crate::wedge::{labels_to_word, prefix_ge, FockParams, WedgeVector, WedgeWord};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn lattice(self) -> Lattice {
        match self {
            Sign::Plus => Lattice::QPlus,
            Sign::Minus => Lattice::QMinusInverse,
        }
    }
}

impl std::str::FromStr for Sign {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "plus" | "+" => Ok(Sign::Plus),
            "minus" | "-" => Ok(Sign::Minus),
            _ => Err(format!("unknown sign {:?} (expected plus or minus)", s)),
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sign::Plus => "plus",
            Sign::Minus => "minus",
        })
    }
}

/// The degree-`N` part of `F_q[s]` with its bar matrix
/// `bar|λ⟩ = Σ_μ a_{λμ} |μ⟩`. Labels are stored dominance-smaller first.
#[derive(Clone, Debug)]
pub struct FockBlock {
    pub params: FockParams,
    pub charge: MultiCharge,
    pub degree: usize,
    labels: Vec<crate::Multipartition>,
    keys: Vec<WedgeWord>,
    index: HashMap<crate::Multipartition, usize>,
    bar: Vec<Vec<LaurentRat>>,
}

impl FockBlock {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[crate::Multipartition] {
        &self.labels
    }

    pub fn index_of(&self, lambda: &crate::Multipartition) -> Option<usize> {
        self.index.get(lambda).copied()
    }

    /// `a_{λμ}` by block positions.
    pub fn bar_entry(&self, lambda: usize, mu: usize) -> &LaurentRat {
        &self.bar[lambda][mu]
    }

    pub fn bar_matrix(&self) -> &[Vec<LaurentRat>] {
        &self.bar
    }

    /// `|λ; s⟩ ≥ |μ; s⟩` by block positions.
    pub fn dominates(&self, lambda: usize, mu: usize) -> bool {
        prefix_ge(&self.keys[lambda], &self.keys[mu])
    }

    /// Bar involution of a vector supported in this block.
    pub fn bar_vector(&self, v: &FockVector) -> Result<FockVector> {
        let mut out = FockVector::new(self.charge.clone());
        for (l, c) in v.iter() {
            let i = self
                .index_of(l)
                .ok_or_else(|| Error::Precondition(format!("label {} is not in the degree {} block", l, self.degree)))?;
            let cb = c.bar();
            for (j, a) in self.bar[i].iter().enumerate() {
                if !a.is_zero() {
                    out.add_term(self.labels[j].clone(), &cb * a);
                }
            }
        }
        Ok(out)
    }

    /// The stored order, which sorts by the padded index sequence.
    pub fn primary_order(&self) -> Vec<usize> {
        (0..self.len()).collect()
    }

    /// A second linear extension of dominance: repeatedly take, among the
    /// remaining minimal labels, the one largest as a multipartition.
    pub fn secondary_order(&self) -> Vec<usize> {
        let n = self.len();
        let mut placed = vec![false; n];
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let pick = (0..n)
                .filter(|&i| !placed[i])
                .filter(|&i| (0..n).all(|j| placed[j] || j == i || !self.dominates(i, j)))
                .max_by(|&a, &b| self.labels[a].cmp(&self.labels[b]))
                .expect("dominance is acyclic");
            placed[pick] = true;
            out.push(pick);
        }
        out
    }

    /// Checks `a_{λλ} = 1` and `a_{λμ} ≠ 0 ⟹ λ ≥ μ`.
    pub fn check_unitriangular(&self) -> Result<()> {
        for i in 0..self.len() {
            if !self.bar[i][i].is_one() {
                return Err(Error::NotUnitriangular(format!(
                    "diagonal entry at {} is {}",
                    self.labels[i], self.bar[i][i]
                )));
            }
            for j in 0..self.len() {
                if i != j && !self.bar[i][j].is_zero() && !self.dominates(i, j) {
                    return Err(Error::NotUnitriangular(format!(
                        "a[{}][{}] = {} but the labels are not comparable that way",
                        self.labels[i], self.labels[j], self.bar[i][j]
                    )));
                }
            }
        }
        Ok(())
    }
}

fn block_labels(params: FockParams, charge: &MultiCharge, degree: usize) -> Result<Vec<(crate::Multipartition, WedgeWord)>> {
    let mut entries = Vec::new();
    for lam in multipartitions_of(degree, params.l) {
        let w = labels_to_word(&lam, charge.as_slice(), params)?;
        entries.push((lam, w));
    }
    let len = entries.iter().map(|(_, w)| w.indices.len()).max().unwrap_or(0) + 1;
    // Lexicographic order on index sequences refines dominance.
    entries.sort_by_cached_key(|(_, w)| w.padded(len));
    Ok(entries)
}

/// Builds a block at the context's truncation without a stability check.
pub fn build_block_with(ctx: &FockContext, charge: &MultiCharge, degree: usize) -> Result<FockBlock> {
    let params = ctx.params();
    if charge.level() != params.l {
        return Err(Error::InvalidParams(format!("multicharge {} does not have level {}", charge, params.l)));
    }
    let entries = block_labels(params, charge, degree)?;
    let index: HashMap<_, _> = entries.iter().enumerate().map(|(i, (l, _))| (l.clone(), i)).collect();
    let r = ctx.truncation(degree, charge);
    let engine = ctx.engine();
    let mut bar = vec![vec![LaurentRat::zero(); entries.len()]; entries.len()];
    for (i, (_, w)) in entries.iter().enumerate() {
        let img = engine.bar(&WedgeVector::basis(w), r)?;
        let img = FockVector::from_wedge(&img, params, charge)?;
        for (mu, c) in img.iter() {
            let j = index[mu];
            bar[i][j] = c.clone();
        }
    }
    let (labels, keys) = entries.into_iter().unzip();
    let block = FockBlock { params, charge: charge.clone(), degree, labels, keys, index, bar };
    block.check_unitriangular()?;
    Ok(block)
}

/// Builds a block and checks that truncation `r + nℓ` gives the same bar
/// matrix.
pub fn build_block(params: FockParams, charge: &MultiCharge, degree: usize) -> Result<FockBlock> {
    let base = FockContext::new(params);
    let block = build_block_with(&base, charge, degree)?;
    let longer = FockContext::with_extra_truncation(params, 1);
    let again = build_block_with(&longer, charge, degree)?;
    if again.bar != block.bar {
        let r = base.truncation(degree, charge);
        return Err(Error::TruncationUnstable { r, r2: longer.truncation(degree, charge) });
    }
    Ok(block)
}

/// The matrix `Δ±` over a block: row `λ` holds the coefficients of
/// `G±(λ; s)`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DecompositionMatrix {
    pub sign: Sign,
    pub n: usize,
    pub l: usize,
    pub charge: MultiCharge,
    pub degree: usize,
    pub labels: Vec<crate::Multipartition>,
    pub entries: Vec<Vec<LaurentRat>>,
}

impl DecompositionMatrix {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn entry(&self, lambda: &crate::Multipartition, mu: &crate::Multipartition) -> Option<&LaurentRat> {
        let i = self.labels.iter().position(|x| x == lambda)?;
        let j = self.labels.iter().position(|x| x == mu)?;
        Some(&self.entries[i][j])
    }

    /// `G±(λ; s)` as a vector.
    pub fn basis_vector(&self, lambda: &crate::Multipartition) -> Option<FockVector> {
        let i = self.labels.iter().position(|x| x == lambda)?;
        let mut v = FockVector::new(self.charge.clone());
        for (j, c) in self.entries[i].iter().enumerate() {
            v.add_term(self.labels[j].clone(), c.clone());
        }
        Some(v)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("label");
        for l in &self.labels {
            write!(out, ",\"{}\"", l).unwrap();
        }
        out.push('\n');
        for (l, row) in self.labels.iter().zip(&self.entries) {
            write!(out, "\"{}\"", l).unwrap();
            for c in row {
                write!(out, ",{}", c).unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("matrix serializes")
    }

    /// Off-diagonal entries that lie outside the sign's lattice, or any
    /// entry with a non-integer coefficient.
    pub fn lattice_violations(&self) -> Vec<(usize, usize)> {
        let mut bad = Vec::new();
        for (i, row) in self.entries.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                let ok = if i == j {
                    c.is_one()
                } else {
                    c.is_zero() || c.lattice_member(self.sign.lattice())
                };
                if !ok || !c.lattice_member(Lattice::IntegerCoeffs) {
                    bad.push((i, j));
                }
            }
        }
        bad
    }

    /// Counts of positive and negative coefficients over all entries.
    pub fn coefficient_signs(&self) -> (usize, usize) {
        let (mut pos, mut neg) = (0, 0);
        for c in self.entries.iter().flatten() {
            for (_, x) in c.terms() {
                if x > &num_rational::BigRational::from_integer(0.into()) {
                    pos += 1;
                } else {
                    neg += 1;
                }
            }
        }
        (pos, neg)
    }
}

/// Splits `r` (bar-antisymmetric) into `d − bar d` with `d` in the sign's
/// lattice.
fn lattice_part(r: &LaurentRat, sign: Sign) -> LaurentRat {
    LaurentRat::from_terms(r.terms().iter().filter(|(e, _)| match sign {
        Sign::Minus => *e < 0,
        Sign::Plus => *e > 0,
    }).map(|(e, c)| (*e, c.clone())))
}

/// Solves for `G±` using the stored label order.
pub fn canonical_basis(block: &FockBlock, sign: Sign) -> Result<DecompositionMatrix> {
    canonical_basis_in_order(block, sign, &block.primary_order())
}

/// Solves for `G±` processing labels in `order`, which must be a linear
/// extension of dominance (smaller first).
pub fn canonical_basis_in_order(block: &FockBlock, sign: Sign, order: &[usize]) -> Result<DecompositionMatrix> {
    let n = block.len();
    let mut entries = vec![vec![LaurentRat::zero(); n]; n];
    for (pos, &lam) in order.iter().enumerate() {
        // d_ν − bar(d_ν) = Σ_{μ ≠ ν} bar(d_μ) a_{μν}, for ν from λ downwards.
        let mut d: Vec<(usize, LaurentRat)> = vec![(lam, LaurentRat::one())];
        for &nu in order[..pos].iter().rev() {
            if !block.dominates(lam, nu) {
                continue;
            }
            let mut r = LaurentRat::zero();
            for (mu, dm) in &d {
                let a = block.bar_entry(*mu, nu);
                if !a.is_zero() {
                    r = &r + &(&dm.bar() * a);
                }
            }
            if r.is_zero() {
                continue;
            }
            if r.bar() != -r.clone() {
                return Err(Error::NotUnitriangular(format!(
                    "bar matrix is not an involution: residual {} at {} for {}",
                    r, block.labels[nu], block.labels[lam]
                )));
            }
            let x = lattice_part(&r, sign);
            if !x.is_zero() {
                d.push((nu, x));
            }
        }
        for (mu, x) in d {
            entries[lam][mu] = x;
        }
    }
    Ok(DecompositionMatrix {
        sign,
        n: block.params.n,
        l: block.params.l,
        charge: block.charge.clone(),
        degree: block.degree,
        labels: block.labels.clone(),
        entries,
    })
}

/// `true` iff `bar(g) = g` exactly.
pub fn bar_invariance_check(ctx: &FockContext, g: &FockVector) -> Result<bool> {
    Ok(&ctx.bar(g)? == g)
}

/// `Δ̄ · a = Δ` entrywise.
pub fn matrix_bar_identity(block: &FockBlock, delta: &DecompositionMatrix) -> bool {
    let n = block.len();
    for i in 0..n {
        for k in 0..n {
            let mut acc = LaurentRat::zero();
            for j in 0..n {
                let d = &delta.entries[i][j];
                let a = block.bar_entry(j, k);
                if !d.is_zero() && !a.is_zero() {
                    acc = &acc + &(&d.bar() * a);
                }
            }
            if acc != delta.entries[i][k] {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::Multipartition;

    fn fp(n: usize, l: usize) -> FockParams {
        FockParams::new(n, l).unwrap()
    }

    fn mp(parts: &[&[usize]]) -> Multipartition {
        Multipartition::from_slices(parts)
    }

    fn lr(s: &str) -> LaurentRat {
        s.parse().unwrap()
    }

    #[test]
    fn vacuum_block() {
        let b = build_block(fp(2, 2), &MultiCharge(vec![1, -1]), 0).unwrap();
        assert_eq!(b.len(), 1);
        assert!(b.bar_entry(0, 0).is_one());
        let d = canonical_basis(&b, Sign::Minus).unwrap();
        assert_eq!(d.entries, vec![vec![LaurentRat::one()]]);
    }

    #[test]
    fn level_one_degree_four() {
        let b = build_block(fp(2, 1), &MultiCharge(vec![0]), 4).unwrap();
        let d = canonical_basis(&b, Sign::Minus).unwrap();
        let g = d.basis_vector(&mp(&[&[4]])).unwrap();
        let mut want = FockVector::new(MultiCharge(vec![0]));
        want.add_term(mp(&[&[4]]), lr("1"));
        want.add_term(mp(&[&[3, 1]]), lr("-q^-1"));
        want.add_term(mp(&[&[2, 2]]), lr("q^-2"));
        assert_eq!(g, want);
        let g = d.basis_vector(&mp(&[&[2, 2]])).unwrap();
        let mut want = FockVector::new(MultiCharge(vec![0]));
        want.add_term(mp(&[&[2, 2]]), lr("1"));
        want.add_term(mp(&[&[2, 1, 1]]), lr("-q^-1"));
        want.add_term(mp(&[&[1, 1, 1, 1]]), lr("q^-2"));
        assert_eq!(g, want);
        assert!(d.lattice_violations().is_empty());
        assert!(matrix_bar_identity(&b, &d));
    }

    #[test]
    fn minimal_label_is_its_own_canonical_vector() {
        let b = build_block(fp(2, 2), &MultiCharge(vec![2, -2]), 3).unwrap();
        let d = canonical_basis(&b, Sign::Minus).unwrap();
        let first = &b.labels()[0];
        assert_eq!(d.basis_vector(first).unwrap(), FockVector::basis(first.clone(), b.charge.clone()));
    }

    #[test]
    fn level_two_example_from_solver() {
        let b = build_block(fp(2, 2), &MultiCharge(vec![2, -2]), 4).unwrap();
        let d = canonical_basis(&b, Sign::Minus).unwrap();
        let lam = mp(&[&[2, 2], &[]]);
        assert_eq!(d.entry(&lam, &mp(&[&[1, 1], &[1, 1]])), Some(&lr("-q^-3")));
        assert_eq!(d.entry(&lam, &mp(&[&[], &[2, 2]])), Some(&lr("q^-4")));
        assert_eq!(d.basis_vector(&lam).unwrap().len(), 10);
        let ctx = FockContext::new(fp(2, 2));
        assert!(bar_invariance_check(&ctx, &d.basis_vector(&lam).unwrap()).unwrap());
        assert!(!bar_invariance_check(&ctx, &FockVector::basis(lam.clone(), b.charge.clone())).unwrap());
    }

    #[test]
    fn orders_agree_and_plus_sign_is_reduced() {
        for (l, s) in [(1usize, vec![0i64]), (2, vec![1, -1]), (2, vec![0, 3])] {
            for deg in 0..=3 {
                let b = build_block(fp(2, l), &MultiCharge(s.clone()), deg).unwrap();
                let order = b.secondary_order();
                for sign in [Sign::Minus, Sign::Plus] {
                    let a = canonical_basis(&b, sign).unwrap();
                    let c = canonical_basis_in_order(&b, sign, &order).unwrap();
                    assert_eq!(a, c);
                    assert!(a.lattice_violations().is_empty());
                    assert!(matrix_bar_identity(&b, &a));
                }
            }
        }
    }

    #[test]
    fn csv_and_json_export() {
        let b = build_block(fp(2, 1), &MultiCharge(vec![0]), 2).unwrap();
        let d = canonical_basis(&b, Sign::Minus).unwrap();
        let csv = d.to_csv();
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.contains("-q^-1"));
        let back: DecompositionMatrix = serde_json::from_str(&d.to_json()).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn sign_parsing() {
        assert_eq!("minus".parse::<Sign>().unwrap(), Sign::Minus);
        assert_eq!("plus".parse::<Sign>().unwrap(), Sign::Plus);
        assert!("up".parse::<Sign>().is_err());
    }
}
