//! Partitions, multipartitions and the symmetric-function combinatorics used
//! by the operators: `z_λ`, conjugation, `n`-restricted decomposition,
//! horizontal `n`-ribbon strips with spin, inverse Kostka numbers and
//! Littlewood–Richardson coefficients.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

/// A partition, stored as its positive parts in non-increasing order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

impl Partition {
    /// Builds a partition; trailing zeros are dropped. Fails if the parts
    /// are not non-increasing.
    pub fn new(mut parts: Vec<usize>) -> Result<Self, String> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(format!("parts not non-increasing: {:?}", parts));
        }
        if parts.contains(&0) {
            return Err(format!("zero part inside partition: {:?}", parts));
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn from_slice(parts: &[usize]) -> Self {
        Self::new(parts.to_vec()).expect("invalid partition literal")
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The `i`-th part (0-based), zero past the end.
    pub fn part(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn transpose(&self) -> Partition {
        let width = self.part(0);
        Partition(
            (0..width)
                .map(|j| self.0.iter().take_while(|&&p| p > j).count())
                .collect(),
        )
    }

    /// Diagram containment.
    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.0.iter().zip(&self.0).all(|(a, b)| a <= b)
    }

    /// Dominance order on partitions of the same size.
    pub fn dominates(&self, other: &Partition) -> bool {
        if self.size() != other.size() {
            return false;
        }
        let mut a = 0;
        let mut b = 0;
        for i in 0..self.len().max(other.len()) {
            a += self.part(i);
            b += other.part(i);
            if a < b {
                return false;
            }
        }
        true
    }

    /// Componentwise `self + k·other`.
    pub fn add_scaled(&self, other: &Partition, k: usize) -> Partition {
        let len = self.len().max(other.len());
        Partition((0..len).map(|i| self.part(i) + k * other.part(i)).collect())
    }

    /// Multiplicity of each part, as `(part, count)` ascending.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut m: BTreeMap<usize, usize> = BTreeMap::new();
        for &p in &self.0 {
            *m.entry(p).or_default() += 1;
        }
        m.into_iter().collect()
    }

    pub fn is_restricted(&self, n: usize) -> bool {
        (0..self.len()).all(|i| self.part(i) - self.part(i + 1) < n)
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = String;
    fn try_from(v: Vec<usize>) -> Result<Self, String> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Vec<usize> {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "∅");
        }
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", p)?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// An `ℓ`-tuple of partitions.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multipartition(pub Vec<Partition>);

impl Multipartition {
    pub fn empty(level: usize) -> Self {
        Multipartition(vec![Partition::empty(); level])
    }

    pub fn from_slices(parts: &[&[usize]]) -> Self {
        Multipartition(parts.iter().map(|p| Partition::from_slice(p)).collect())
    }

    pub fn level(&self) -> usize {
        self.0.len()
    }

    pub fn size(&self) -> usize {
        self.0.iter().map(Partition::size).sum()
    }

    pub fn components(&self) -> &[Partition] {
        &self.0
    }

    pub fn component(&self, i: usize) -> &Partition {
        &self.0[i]
    }

    pub fn with_component(&self, i: usize, p: Partition) -> Multipartition {
        let mut out = self.clone();
        out.0[i] = p;
        out
    }
}

impl fmt::Display for Multipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", p)?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Multipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// One horizontal ribbon strip `λ ⇝ μ` together with its total spin.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RibbonStep {
    pub target: Partition,
    pub spin: usize,
}

/// All partitions of `n`, optionally with at most `max_length` parts, in
/// reverse-lexicographic order (`(4), (3,1), (2,2), ...`).
pub fn partitions_of(n: usize, max_length: Option<usize>) -> Vec<Partition> {
    fn rec(
        rest: usize,
        max_part: usize,
        len_left: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Partition>,
    ) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        if len_left == 0 {
            return;
        }
        for p in (1..=max_part.min(rest)).rev() {
            cur.push(p);
            rec(rest - p, p, len_left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, max_length.unwrap_or(n), &mut Vec::new(), &mut out);
    out
}

/// All `level`-tuples of partitions with total size `n`, ordered by the
/// component sizes (lexicographically descending) and then by the
/// components' own reverse-lexicographic order.
pub fn multipartitions_of(n: usize, level: usize) -> Vec<Multipartition> {
    fn rec(rest: usize, slots: usize, cur: &mut Vec<Partition>, out: &mut Vec<Multipartition>) {
        if slots == 1 {
            for p in partitions_of(rest, None) {
                cur.push(p);
                out.push(Multipartition(cur.clone()));
                cur.pop();
            }
            return;
        }
        for k in (0..=rest).rev() {
            for p in partitions_of(k, None) {
                cur.push(p);
                rec(rest - k, slots - 1, cur, out);
                cur.pop();
            }
        }
    }
    assert!(level >= 1);
    let mut out = Vec::new();
    rec(n, level, &mut Vec::new(), &mut out);
    out
}

/// `z_λ = Π_i i^{α_i} α_i!` where `α_i` is the multiplicity of `i`.
pub fn z_factor(lambda: &Partition) -> BigRational {
    let mut z = BigInt::one();
    for (part, mult) in lambda.multiplicities() {
        for k in 1..=mult {
            z *= BigInt::from(part) * BigInt::from(k);
        }
    }
    BigRational::from_integer(z)
}

pub fn transpose(lambda: &Partition) -> Partition {
    lambda.transpose()
}

/// Splits `λ = λ̃ + n·λ̌` with `λ̃` `n`-restricted.
pub fn restricted_decompose(lambda: &Partition, n: usize) -> (Partition, Partition) {
    assert!(n >= 2, "n must be at least 2");
    let len = lambda.len();
    let mut tilde = vec![0; len];
    let mut check = vec![0; len];
    let (mut t_acc, mut c_acc) = (0, 0);
    for i in (0..len).rev() {
        let diff = lambda.part(i) - lambda.part(i + 1);
        t_acc += diff % n;
        c_acc += diff / n;
        tilde[i] = t_acc;
        check[i] = c_acc;
    }
    (
        Partition::new(tilde).expect("tilde is a partition"),
        Partition::new(check).expect("check is a partition"),
    )
}

pub fn multipartition_decompose(lambda: &Multipartition, n: usize) -> (Multipartition, Multipartition) {
    let (t, c): (Vec<_>, Vec<_>) = lambda
        .0
        .iter()
        .map(|p| restricted_decompose(p, n))
        .unzip();
    (Multipartition(t), Multipartition(c))
}

/// Beta-set of `λ` with `len` beads, descending: `β_i = λ_i + len - 1 - i`.
fn beta_set(lambda: &Partition, len: usize) -> Vec<usize> {
    (0..len).map(|i| lambda.part(i) + len - 1 - i).collect()
}

fn from_beta(beta: &[usize]) -> Partition {
    let len = beta.len();
    let mut b = beta.to_vec();
    b.sort_unstable_by(|x, y| y.cmp(x));
    Partition::new((0..len).map(|i| b[i] - (len - 1 - i)).collect()).expect("beta set")
}

/// Single `n`-ribbon additions to `mu` whose head satisfies the strip
/// condition relative to `base`. Returns `(new partition, spin)`.
fn one_ribbon_steps(mu: &Partition, base: &Partition, n: usize, beads: usize) -> Vec<(Partition, usize)> {
    let beta = beta_set(mu, beads);
    let mut out = Vec::new();
    for (i, &x) in beta.iter().enumerate() {
        let y = x + n;
        if beta.contains(&y) {
            continue;
        }
        // Beads strictly between x and x+n sit in rows head..i-1.
        let between = beta.iter().filter(|&&b| b > x && b < y).count();
        let head_row = i - between;
        let mut nb = beta.clone();
        nb[i] = y;
        let new = from_beta(&nb);
        let head_col = new.part(head_row);
        let ok = head_row == 0 || base.part(head_row - 1) >= head_col;
        if ok {
            out.push((new, between));
        }
    }
    out
}

/// All `μ` with `λ ⇝ μ` a horizontal strip of `m` `n`-ribbons, with spins.
///
/// Ribbons are placed one at a time; different placement orders of the
/// same strip must give the same spin, and that is asserted.
pub fn ribbon_successors(lambda: &Partition, n: usize, m: usize) -> Vec<RibbonStep> {
    assert!(n >= 2);
    let beads = lambda.len() + n * m + 1;
    let mut layer: BTreeMap<Partition, usize> = BTreeMap::new();
    layer.insert(lambda.clone(), 0);
    for _ in 0..m {
        let mut next: BTreeMap<Partition, usize> = BTreeMap::new();
        for (mu, spin) in &layer {
            for (nu, s) in one_ribbon_steps(mu, lambda, n, beads) {
                let total = spin + s;
                match next.get(&nu) {
                    Some(&prev) => assert_eq!(prev, total, "ribbon strip spin is not well defined"),
                    None => {
                        next.insert(nu, total);
                    }
                }
            }
        }
        layer = next;
    }
    let mut out: Vec<RibbonStep> = layer
        .into_iter()
        .map(|(target, spin)| RibbonStep { target, spin })
        .collect();
    out.sort_by(|a, b| b.target.cmp(&a.target));
    out
}

/// Number of semistandard tableaux of shape `lambda` and content `mu`
/// (any order of `mu`'s entries gives the same count).
fn kostka_number(lambda: &Partition, mu: &[usize], memo: &mut HashMap<(Partition, Vec<usize>), i64>) -> i64 {
    if mu.is_empty() {
        return if lambda.is_empty() { 1 } else { 0 };
    }
    if lambda.size() != mu.iter().sum::<usize>() {
        return 0;
    }
    let key = (lambda.clone(), mu.to_vec());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    // Remove a horizontal strip of size mu.last() holding the largest entry.
    let k = *mu.last().unwrap();
    let rest = &mu[..mu.len() - 1];
    let mut total = 0;
    let mut inner = vec![0; lambda.len()];
    fn strips(
        lambda: &Partition,
        row: usize,
        left: usize,
        inner: &mut Vec<usize>,
        rest: &[usize],
        total: &mut i64,
        memo: &mut HashMap<(Partition, Vec<usize>), i64>,
    ) {
        if row == lambda.len() {
            if left == 0 {
                let p = Partition::new(inner.clone()).unwrap();
                *total += kostka_number(&p, rest, memo);
            }
            return;
        }
        // inner row must lie between lambda_{row+1} and lambda_row.
        let hi = lambda.part(row);
        let lo = lambda.part(row + 1);
        for take in 0..=(hi - lo).min(left) {
            inner[row] = hi - take;
            strips(lambda, row + 1, left - take, inner, rest, total, memo);
        }
    }
    strips(lambda, 0, k, &mut inner, rest, &mut total, memo);
    memo.insert(key, total);
    total
}

/// The Kostka matrix on partitions of `n` in reverse-lexicographic order,
/// `k[λ][μ] = K_{λμ}`, with the label list.
pub fn kostka_matrix(n: usize) -> (Vec<Partition>, Vec<Vec<i64>>) {
    let labels = partitions_of(n, None);
    let mut memo = HashMap::new();
    let k = labels
        .iter()
        .map(|l| labels.iter().map(|m| kostka_number(l, m.parts(), &mut memo)).collect())
        .collect();
    (labels, k)
}

/// `K⁻¹` on partitions of `n`, indexed `[μ][λ]` so that
/// `s_λ = Σ_μ K⁻¹[μ][λ] h_μ`.
pub fn kostka_inverse(n: usize) -> (Vec<Partition>, Vec<Vec<i64>>) {
    let (labels, k) = kostka_matrix(n);
    let size = labels.len();
    // K is upper unitriangular in this order; solve K X = I column by column.
    let mut inv = vec![vec![0i64; size]; size];
    for col in 0..size {
        for row in (0..size).rev() {
            let mut v = if row == col { 1 } else { 0 };
            for j in row + 1..size {
                v -= k[row][j] * inv[j][col];
            }
            debug_assert_eq!(k[row][row], 1);
            inv[row][col] = v;
        }
    }
    (labels, inv)
}

/// The Littlewood–Richardson coefficient `LR^λ_{μν}`.
pub fn littlewood_richardson(lambda: &Partition, mu: &Partition, nu: &Partition) -> u64 {
    if lambda.size() != mu.size() + nu.size() || !lambda.contains(mu) || !lambda.contains(nu) {
        return 0;
    }
    // Cells of λ/μ in reading order: rows top to bottom, right to left.
    let cells: Vec<(usize, usize)> = (0..lambda.len())
        .flat_map(|r| (mu.part(r)..lambda.part(r)).rev().map(move |c| (r, c)))
        .collect();
    let mut fill: HashMap<(usize, usize), usize> = HashMap::new();
    let mut counts = vec![0usize; nu.len() + 1];
    fn rec(
        idx: usize,
        cells: &[(usize, usize)],
        mu: &Partition,
        nu: &Partition,
        fill: &mut HashMap<(usize, usize), usize>,
        counts: &mut Vec<usize>,
    ) -> u64 {
        if idx == cells.len() {
            return 1;
        }
        let (r, c) = cells[idx];
        let mut total = 0;
        for v in 1..=nu.len() {
            if counts[v] >= nu.part(v - 1) {
                continue;
            }
            if v > 1 && counts[v] + 1 > counts[v - 1] {
                continue;
            }
            if let Some(&right) = fill.get(&(r, c + 1)) {
                if v > right {
                    continue;
                }
            }
            if r > 0 && c >= mu.part(r - 1) {
                if let Some(&above) = fill.get(&(r - 1, c)) {
                    if v <= above {
                        continue;
                    }
                }
            }
            fill.insert((r, c), v);
            counts[v] += 1;
            total += rec(idx + 1, cells, mu, nu, fill, counts);
            counts[v] -= 1;
            fill.remove(&(r, c));
        }
        total
    }
    rec(0, &cells, mu, nu, &mut fill, &mut counts)
}

/// All nonzero `(μ, ν, LR^λ_{μν})`, with `μ` running over sub-diagrams of
/// `λ` in decreasing size.
pub fn lr_expansion(lambda: &Partition) -> Vec<(Partition, Partition, u64)> {
    let n = lambda.size();
    let mut out = Vec::new();
    for a in (0..=n).rev() {
        for mu in partitions_of(a, None) {
            if !lambda.contains(&mu) {
                continue;
            }
            for nu in partitions_of(n - a, None) {
                let c = littlewood_richardson(lambda, &mu, &nu);
                if c > 0 {
                    out.push((mu.clone(), nu, c));
                }
            }
        }
    }
    out
}
