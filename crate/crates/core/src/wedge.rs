//! The q-wedge engine.
//!
//! Index arithmetic `k = c + n(d-1) - nℓm`, the two-term straightening
//! rule, normal ordering of finite and truncated semi-infinite wedges, the
//! bijection between ordered wedges and charged multipartitions, dominance,
//! the size and ξ statistics, the bar involution and the bosons `B_m`.
//!
//! A semi-infinite ordered wedge `u_{k_1} ∧ u_{k_2} ∧ ⋯` of charge `s` is
//! stored trimmed: `indices` holds `k_1 > ⋯ > k_p` and the tail
//! `s-p, s-p-1, …` is implied, with `k_p ≠ s-p+1` so that the
//! representation is unique.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;

use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

use crate::coeff::LaurentRat;
use crate::combinatorics::{Multipartition, Partition};
use crate::error::{Error, Result};

/// The level data `(n, ℓ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FockParams {
    pub n: usize,
    pub l: usize,
}

impl FockParams {
    pub fn new(n: usize, l: usize) -> Result<Self> {
        if n < 2 || l < 1 {
            return Err(Error::InvalidParams(format!("need n >= 2 and l >= 1, got n={} l={}", n, l)));
        }
        Ok(FockParams { n, l })
    }

    /// Number of abacus runners, `nℓ`.
    pub fn runners(&self) -> i64 {
        (self.n * self.l) as i64
    }

    /// The level-one parameters `(n, 1)` used inside one sector.
    pub fn level_one(&self) -> FockParams {
        FockParams { n: self.n, l: 1 }
    }
}

/// The triple `(c, d, m)` with `k = c + n(d-1) - nℓm`, `1 ≤ c ≤ n`, `1 ≤ d ≤ ℓ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TripleIndex {
    pub c: i64,
    pub d: i64,
    pub m: i64,
}

impl TripleIndex {
    /// The level-one label `c - nm` of this index inside its sector.
    pub fn label(&self, params: FockParams) -> i64 {
        self.c - params.n as i64 * self.m
    }
}

pub fn index_decompose(k: i64, params: FockParams) -> TripleIndex {
    let n = params.n as i64;
    let big = params.runners();
    let t = k - 1;
    let m = -t.div_euclid(big);
    let rem = t.rem_euclid(big);
    TripleIndex { c: rem % n + 1, d: rem / n + 1, m }
}

pub fn index_compose(t: TripleIndex, params: FockParams) -> i64 {
    let n = params.n as i64;
    t.c + n * (t.d - 1) - params.runners() * t.m
}

/// The global index of level-one label `x` in sector `d` (1-based).
pub fn label_to_index(x: i64, d: i64, params: FockParams) -> i64 {
    let n = params.n as i64;
    let m = -(x - 1).div_euclid(n);
    let c = (x - 1).rem_euclid(n) + 1;
    index_compose(TripleIndex { c, d, m }, params)
}

/// Residue `c` of a level-one label.
pub fn label_residue(x: i64, n: usize) -> i64 {
    (x - 1).rem_euclid(n as i64) + 1
}

/// Terms `(x, y, coeff)` meaning `coeff · u_x ∧ u_y`.
pub type PairTerms = Vec<(i64, i64, LaurentRat)>;

/// One application of the exchange relation to `u_a ∧ u_b`.
///
/// Returns the expansion in which the first term is a multiple of
/// `u_b ∧ u_a`. The other terms are not necessarily ordered. For indices
/// in different sectors the relation holds in both directions; inside one
/// sector it is only a rewriting rule for `a < b`, so `None` is returned
/// for `a > b` there. `a == b` gives the empty expansion.
pub fn exchange_pair(a: i64, b: i64, params: FockParams) -> Option<PairTerms> {
    if a == b {
        return Some(Vec::new());
    }
    // Naming as in the rule: the left factor is k2, the right factor k1.
    let (k1, k2) = (b, a);
    let t1 = index_decompose(k1, params);
    let t2 = index_decompose(k2, params);
    if t1.d == t2.d && a > b {
        return None;
    }
    let same_d = t1.d == t2.d;
    let mut prefactor = if same_d { -LaurentRat::q_pow(-1) } else { LaurentRat::one() };
    let alpha = if t1.c != t2.c {
        0
    } else if k1 > k2 {
        1
    } else {
        -1
    };
    let mut out = Vec::new();
    out.push((k1, k2, &prefactor * &LaurentRat::q_pow(alpha)));

    // Equal m is broken by the index order: an unordered pair takes the
    // m1 < m2 branch, an ordered one the m1 > m2 branch. Only the fully
    // mixed case sees a difference (the j = 0 term).
    let le = t1.m < t2.m || (t1.m == t2.m && k1 > k2);
    let sgn: i64 = if le { 1 } else { -1 };
    let beta = if (t1.c > t2.c && le) || (t1.c < t2.c && !le) { 0 } else { 1 };
    // For equal sectors the rule leaves γ unspecified; γ = 1 drops the
    // self-term and matches every worked example.
    let gamma = if (t1.d < t2.d && le) || (t1.d > t2.d && !le) || same_d {
        1
    } else {
        0
    };
    let top = (t1.m - t2.m).abs() - gamma;
    let q_minus = LaurentRat::from_int_terms([(1, 1), (-1, -1)]);
    prefactor = &prefactor * &q_minus;
    if sgn < 0 {
        prefactor = -prefactor;
    }
    for j in beta..=top {
        let x = index_compose(TripleIndex { c: t2.c, d: t1.d, m: t1.m + sgn * j }, params);
        let y = index_compose(TripleIndex { c: t1.c, d: t2.d, m: t2.m - sgn * j }, params);
        out.push((x, y, prefactor.clone()));
    }
    Some(out)
}

/// The ordered expansion of the two-wedge `u_{k1} ∧ u_{k2}` as terms
/// `(g2, g1, coeff)` meaning `coeff · u_{g2} ∧ u_{g1}` with `g2 > g1`.
pub fn straighten_pair(k1: i64, k2: i64, params: FockParams) -> PairTerms {
    let engine = WedgeEngine::new(params);
    engine
        .normal_order_finite(&[k1, k2])
        .into_iter()
        .map(|(w, c)| (w[0], w[1], c))
        .collect()
}

type Terms = Vec<(Vec<i64>, LaurentRat)>;

fn accumulate(acc: &mut BTreeMap<Vec<i64>, LaurentRat>, key: Vec<i64>, c: LaurentRat) {
    use std::collections::btree_map::Entry;
    match acc.entry(key) {
        Entry::Vacant(v) => {
            if !c.is_zero() {
                v.insert(c);
            }
        }
        Entry::Occupied(mut o) => {
            let sum = o.get() + &c;
            if sum.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

type InsertMemo = HashMap<(i64, Vec<i64>), Rc<Terms>>;

/// Normal-ordering engine for fixed `(n, ℓ)` with a memo table.
///
/// The memo uses interior mutability and is confined to one thread; use
/// one engine per worker.
pub struct WedgeEngine {
    params: FockParams,
    insert_memo: RefCell<InsertMemo>,
    exchange_memo: RefCell<HashMap<(i64, i64), Rc<PairTerms>>>,
}

impl WedgeEngine {
    pub fn new(params: FockParams) -> Self {
        WedgeEngine {
            params,
            insert_memo: RefCell::new(HashMap::new()),
            exchange_memo: RefCell::new(HashMap::new()),
        }
    }

    pub fn params(&self) -> FockParams {
        self.params
    }

    pub fn clear_cache(&self) {
        self.insert_memo.borrow_mut().clear();
        self.exchange_memo.borrow_mut().clear();
    }

    pub fn cache_len(&self) -> usize {
        self.insert_memo.borrow().len()
    }

    fn exchange(&self, a: i64, b: i64) -> Rc<PairTerms> {
        if let Some(t) = self.exchange_memo.borrow().get(&(a, b)) {
            return t.clone();
        }
        let t = Rc::new(exchange_pair(a, b, self.params).expect("exchange needs a < b within a sector"));
        self.exchange_memo.borrow_mut().insert((a, b), t.clone());
        t
    }

    /// Normal form of `u_a ∧ w` for an ordered finite word `w`.
    fn insert(&self, a: i64, w: &[i64]) -> Rc<Terms> {
        if w.is_empty() || a > w[0] {
            let mut v = Vec::with_capacity(w.len() + 1);
            v.push(a);
            v.extend_from_slice(w);
            return Rc::new(vec![(v, LaurentRat::one())]);
        }
        if a == w[0] {
            return Rc::new(Vec::new());
        }
        // Every ordered word in the expansion has distinct entries between
        // the smallest and largest letters, so a too-narrow range is zero.
        let lo = a.min(*w.last().unwrap());
        if w[0] - lo + 1 < (w.len() + 1) as i64 {
            return Rc::new(Vec::new());
        }
        let key = (a, w.to_vec());
        if let Some(t) = self.insert_memo.borrow().get(&key) {
            return t.clone();
        }
        let mut acc: BTreeMap<Vec<i64>, LaurentRat> = BTreeMap::new();
        let rest = &w[1..];
        for (x, y, c) in self.exchange(a, w[0]).iter() {
            for (inner, c2) in self.insert(*y, rest).iter() {
                let c12 = c * c2;
                for (outer, c3) in self.insert(*x, inner).iter() {
                    accumulate(&mut acc, outer.clone(), &c12 * c3);
                }
            }
        }
        let out = Rc::new(acc.into_iter().collect::<Terms>());
        self.insert_memo.borrow_mut().insert(key, out.clone());
        out
    }

    /// Normal form of a finite wedge as ordered finite words.
    pub fn normal_order_finite(&self, word: &[i64]) -> BTreeMap<Vec<i64>, LaurentRat> {
        let mut cur: BTreeMap<Vec<i64>, LaurentRat> = BTreeMap::new();
        cur.insert(Vec::new(), LaurentRat::one());
        for &a in word.iter().rev() {
            let mut next = BTreeMap::new();
            for (w, c) in &cur {
                for (w2, c2) in self.insert(a, w).iter() {
                    accumulate(&mut next, w2.clone(), c * c2);
                }
            }
            cur = next;
        }
        cur
    }

    /// Normal form of the semi-infinite wedge `raw ∧ u_{s-p} ∧ u_{s-p-1} ∧ ⋯`
    /// computed at truncation length `r`.
    pub fn normal_order(&self, s: i64, raw: &[i64], r: usize) -> Result<WedgeVector> {
        let padded = pad(s, raw, r)?;
        let mut out = WedgeVector::new(s);
        for (w, c) in self.normal_order_finite(&padded) {
            out.add_term(trim(s, w), c);
        }
        Ok(out)
    }

    /// Bar involution of one ordered word, at truncation at least `r_min`.
    ///
    /// Short truncations give wrong answers, so `r` is raised to at least
    /// the policy length for the word's degree and charges.
    pub fn bar_word(&self, word: &WedgeWord, r_min: usize) -> Result<WedgeVector> {
        let (lam, charges) = word_to_labels(word, self.params);
        let r = r_min
            .max(word.indices.len() + 1)
            .max(truncation_length(self.params, lam.size(), &charges));
        let padded = pad(word.s, &word.indices, r)?;
        let ts: Vec<TripleIndex> = padded.iter().map(|&k| index_decompose(k, self.params)).collect();
        let kd = kappa(ts.iter().map(|t| t.d));
        let kc = kappa(ts.iter().map(|t| t.c));
        let prefactor = {
            let mut p = LaurentRat::from_int_terms([(kd as i32 - kc as i32, 1)]);
            if kd % 2 == 1 {
                p = -p;
            }
            p
        };
        let reversed: Vec<i64> = padded.iter().rev().copied().collect();
        let mut out = WedgeVector::new(word.s);
        for (w, c) in self.normal_order_finite(&reversed) {
            out.add_term(trim(word.s, w), &prefactor * &c);
        }
        Ok(out)
    }

    /// Bar involution (antilinear) at truncation at least `r_min`.
    pub fn bar(&self, v: &WedgeVector, r_min: usize) -> Result<WedgeVector> {
        let mut out = WedgeVector::new(v.s);
        for (w, c) in v.iter() {
            let img = self.bar_word(&WedgeWord { s: v.s, indices: w.clone() }, r_min)?;
            out.add_scaled(&img, &c.bar());
        }
        Ok(out)
    }

    /// The boson `B_m`, `m ≠ 0`, at truncation at least `r_min`.
    pub fn boson(&self, m: i64, v: &WedgeVector, r_min: usize) -> Result<WedgeVector> {
        if m == 0 {
            return Err(Error::InvalidParams("boson mode must be nonzero".into()));
        }
        let shift = self.params.runners() * m;
        let span = (self.params.runners() * m.abs()) as usize;
        let mut out = WedgeVector::new(v.s);
        for (w, c) in v.iter() {
            let p = w.len();
            let r = r_min.max(p + span);
            let padded = pad(v.s, w, r)?;
            // Creation modes can move tail beads up to p + span; annihilation
            // modes only see the p explicit beads (tail beads land on tail).
            let positions = if m < 0 { r } else { p };
            for i in 0..positions {
                let mut word = padded.clone();
                word[i] -= shift;
                if word[i] < v.s - r as i64 + 1 {
                    return Err(Error::TruncationTooShort(format!(
                        "shifted index {} below truncation window at r={}",
                        word[i], r
                    )));
                }
                for (w2, c2) in self.normal_order_finite(&word) {
                    out.add_term(trim(v.s, w2), c * &c2);
                }
            }
        }
        Ok(out)
    }
}

fn kappa<I: Iterator<Item = i64>>(it: I) -> usize {
    let mut counts: HashMap<i64, usize> = HashMap::new();
    for x in it {
        *counts.entry(x).or_default() += 1;
    }
    counts.values().map(|&c| c * (c - 1) / 2).sum()
}

/// `raw` followed by the tail `s-p, …, s-r+1`, checking the window.
fn pad(s: i64, raw: &[i64], r: usize) -> Result<Vec<i64>> {
    if raw.len() > r {
        return Err(Error::TruncationTooShort(format!("word of length {} exceeds r={}", raw.len(), r)));
    }
    let floor = s - r as i64 + 1;
    if let Some(&low) = raw.iter().min() {
        if low < floor {
            return Err(Error::TruncationTooShort(format!(
                "index {} below s-r+1={} at r={}",
                low, floor, r
            )));
        }
    }
    let mut out = raw.to_vec();
    for i in raw.len()..r {
        out.push(s - i as i64);
    }
    Ok(out)
}

/// Drops the consecutive tail from the end of an ordered word.
pub fn trim(s: i64, mut w: Vec<i64>) -> Vec<i64> {
    while let Some(&last) = w.last() {
        if last == s - w.len() as i64 + 1 {
            w.pop();
        } else {
            break;
        }
    }
    w
}

/// An ordered semi-infinite wedge of charge `s`, stored trimmed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WedgeWord {
    pub s: i64,
    pub indices: Vec<i64>,
}

impl WedgeWord {
    /// Builds an ordered word; the tail is trimmed if present.
    pub fn new(s: i64, indices: Vec<i64>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::NotOrdered(indices));
        }
        if let Some(&last) = indices.last() {
            if last <= s - indices.len() as i64 {
                return Err(Error::NotOrdered(indices));
            }
        }
        Ok(WedgeWord { s, indices: trim(s, indices) })
    }

    pub fn vacuum(s: i64) -> Self {
        WedgeWord { s, indices: Vec::new() }
    }

    /// The first `r` entries of the infinite sequence.
    pub fn padded(&self, r: usize) -> Vec<i64> {
        let mut out: Vec<i64> = self.indices.iter().copied().take(r).collect();
        for i in out.len()..r {
            out.push(self.s - i as i64);
        }
        out
    }
}

impl fmt::Display for WedgeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in &self.indices {
            write!(f, "u{}∧", k)?;
        }
        write!(f, "u{}∧…", self.s - self.indices.len() as i64)
    }
}

impl fmt::Debug for WedgeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// A finite linear combination of ordered words of a common charge.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct WedgeVector {
    pub s: i64,
    terms: BTreeMap<Vec<i64>, LaurentRat>,
}

impl WedgeVector {
    pub fn new(s: i64) -> Self {
        WedgeVector { s, terms: BTreeMap::new() }
    }

    pub fn basis(word: &WedgeWord) -> Self {
        let mut v = WedgeVector::new(word.s);
        v.add_term(word.indices.clone(), LaurentRat::one());
        v
    }

    /// Adds `c` times the trimmed ordered word `w`.
    pub fn add_term(&mut self, w: Vec<i64>, c: LaurentRat) {
        accumulate(&mut self.terms, w, c);
    }

    pub fn add_scaled(&mut self, other: &WedgeVector, c: &LaurentRat) {
        if c.is_zero() {
            return;
        }
        for (w, x) in &other.terms {
            accumulate(&mut self.terms, w.clone(), x * c);
        }
    }

    pub fn scale(&self, c: &LaurentRat) -> WedgeVector {
        let mut out = WedgeVector::new(self.s);
        out.add_scaled(self, c);
        out
    }

    pub fn sub(&self, other: &WedgeVector) -> WedgeVector {
        let mut out = self.clone();
        out.add_scaled(other, &LaurentRat::from_int(-1));
        out
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

    pub fn coeff(&self, w: &[i64]) -> LaurentRat {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<i64>, &LaurentRat)> {
        self.terms.iter()
    }

    pub fn words(&self) -> impl Iterator<Item = WedgeWord> + '_ {
        self.terms.keys().map(move |w| WedgeWord { s: self.s, indices: w.clone() })
    }
}

impl fmt::Display for WedgeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({}) {}", c, WedgeWord { s: self.s, indices: w.clone() })?;
        }
        Ok(())
    }
}

impl fmt::Debug for WedgeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// JSON form: `[{"word": {"s": .., "indices": [..]}, "coeff": ..}, ...]`.
impl Serialize for WedgeVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            word: WedgeWord,
            coeff: &'a LaurentRat,
        }
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (w, c) in &self.terms {
            seq.serialize_element(&Entry { word: WedgeWord { s: self.s, indices: w.clone() }, coeff: c })?;
        }
        seq.end()
    }
}

/// The charged multipartition `(λ, s)` of an ordered word.
pub fn word_to_labels(word: &WedgeWord, params: FockParams) -> (Multipartition, Vec<i64>) {
    let l = params.l;
    let p = word.indices.len() as i64;
    let below = word.s - p;
    let mut comps: Vec<Vec<i64>> = vec![Vec::new(); l];
    for &k in &word.indices {
        let t = index_decompose(k, params);
        comps[(t.d - 1) as usize].push(t.label(params));
    }
    let mut charges = Vec::with_capacity(l);
    let mut parts = Vec::with_capacity(l);
    for d in 1..=l as i64 {
        // Largest index at or below the tail start lying in sector d.
        let mut k = below;
        while index_decompose(k, params).d != d {
            k -= 1;
        }
        let b = index_decompose(k, params).label(params);
        let above = &mut comps[(d - 1) as usize];
        above.sort_unstable_by(|x, y| y.cmp(x));
        let sd = b + above.len() as i64;
        let lam: Vec<usize> = above
            .iter()
            .enumerate()
            .map(|(i, &x)| (x - sd + i as i64) as usize)
            .collect();
        charges.push(sd);
        parts.push(Partition::new(lam).expect("sector labels form a partition"));
    }
    (Multipartition(parts), charges)
}

/// The ordered word of `|λ; s⟩`.
pub fn labels_to_word(lambda: &Multipartition, charges: &[i64], params: FockParams) -> Result<WedgeWord> {
    if lambda.level() != params.l || charges.len() != params.l {
        return Err(Error::InvalidParams(format!(
            "multipartition and charge must have {} components",
            params.l
        )));
    }
    let s: i64 = charges.iter().sum();
    let mut cut = s + 1;
    loop {
        let mut above: Vec<i64> = Vec::new();
        for (d, (lam, &sd)) in lambda.components().iter().zip(charges).enumerate() {
            let mut r = 1i64;
            loop {
                let x = lam.part((r - 1) as usize) as i64 + sd - r + 1;
                let k = label_to_index(x, d as i64 + 1, params);
                if k < cut {
                    break;
                }
                above.push(k);
                r += 1;
            }
        }
        if above.len() as i64 == s - cut + 1 {
            above.sort_unstable_by(|x, y| y.cmp(x));
            return WedgeWord::new(s, above);
        }
        cut -= 1;
    }
}

/// Dominance `a ≥ b` on ordered words of the same charge.
pub fn dominance_ge(a: &WedgeWord, b: &WedgeWord, params: FockParams) -> bool {
    if a.s != b.s {
        return false;
    }
    if word_to_labels(a, params).0.size() != word_to_labels(b, params).0.size() {
        return false;
    }
    prefix_ge(a, b)
}

/// Prefix-sum comparison alone; on words of equal degree this is dominance.
pub fn prefix_ge(a: &WedgeWord, b: &WedgeWord) -> bool {
    let len = a.indices.len().max(b.indices.len()) + 1;
    let (pa, pb) = (a.padded(len), b.padded(len));
    let (mut sa, mut sb) = (0i64, 0i64);
    for i in 0..len {
        sa += pa[i];
        sb += pb[i];
        if sa < sb {
            return false;
        }
    }
    true
}

/// The size `Σ_i (k_i - s_d + i - 1)` of a simple fragment of labels.
pub fn size(fragment: &[i64], s_d: i64) -> i64 {
    fragment
        .iter()
        .enumerate()
        .map(|(i, &k)| k - s_d + i as i64)
        .sum()
}

/// A simple fragment: level-one labels in sector `d` (1-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fragment {
    pub d: i64,
    pub labels: Vec<i64>,
}

impl Fragment {
    pub fn new(d: i64, labels: Vec<i64>) -> Self {
        Fragment { d, labels }
    }

    pub fn indices(&self, params: FockParams) -> Vec<i64> {
        self.labels.iter().map(|&x| label_to_index(x, self.d, params)).collect()
    }
}

/// `ξ(u, v)`: pairs of equal residue with the `u` letter below the `v` letter.
pub fn xi(u: &Fragment, v: &Fragment, params: FockParams) -> Result<usize> {
    if u.d == v.d {
        return Err(Error::SharedSector(u.d as usize));
    }
    let n = params.n;
    let mut count = 0;
    for &a in &u.labels {
        for &b in &v.labels {
            if label_residue(a, n) == label_residue(b, n)
                && label_to_index(a, u.d, params) < label_to_index(b, v.d, params)
            {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Smallest multiple of `nℓ` that is at least `ℓ(N + max s - min s + 1)`.
pub fn truncation_length(params: FockParams, degree: usize, charges: &[i64]) -> usize {
    let hi = charges.iter().copied().max().unwrap_or(0);
    let lo = charges.iter().copied().min().unwrap_or(0);
    let need = params.l * (degree + (hi - lo) as usize + 1);
    let step = params.n * params.l;
    need.div_ceil(step) * step
}
