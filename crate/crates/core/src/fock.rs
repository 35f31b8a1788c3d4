//! Fock vectors labelled by multipartitions and the operators acting on
//! them: bosons, component and bracket bosons, and the `V`/`S` operators
//! built from them.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::coeff::LaurentRat;
use crate::combinatorics::{
    kostka_inverse, lr_expansion, partitions_of, ribbon_successors, z_factor, Multipartition, Partition,
};
use crate::error::{Error, Result};
use crate::wedge::{labels_to_word, truncation_length, word_to_labels, FockParams, WedgeEngine, WedgeVector, WedgeWord};

/// The sector charges `(s_1, …, s_ℓ)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiCharge(pub Vec<i64>);

impl MultiCharge {
    pub fn new(s: Vec<i64>) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::InvalidParams("multicharge must have at least one entry".into()));
        }
        Ok(MultiCharge(s))
    }

    pub fn level(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }
}

impl fmt::Display for MultiCharge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// An element of `F_q[s]`: a finite combination of `|λ; s⟩`.
#[derive(Clone, PartialEq, Eq)]
pub struct FockVector {
    pub charge: MultiCharge,
    terms: BTreeMap<Multipartition, LaurentRat>,
}

impl FockVector {
    pub fn new(charge: MultiCharge) -> Self {
        FockVector { charge, terms: BTreeMap::new() }
    }

    pub fn basis(lambda: Multipartition, charge: MultiCharge) -> Self {
        let mut v = FockVector::new(charge);
        v.add_term(lambda, LaurentRat::one());
        v
    }

    pub fn vacuum(charge: MultiCharge) -> Self {
        let l = charge.level();
        FockVector::basis(Multipartition::empty(l), charge)
    }

    pub fn add_term(&mut self, lambda: Multipartition, c: LaurentRat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(lambda) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &FockVector, c: &LaurentRat) {
        for (l, x) in &other.terms {
            self.add_term(l.clone(), x * c);
        }
    }

    pub fn scale(&self, c: &LaurentRat) -> FockVector {
        let mut out = FockVector::new(self.charge.clone());
        out.add_scaled(self, c);
        out
    }

    pub fn sub(&self, other: &FockVector) -> FockVector {
        let mut out = self.clone();
        out.add_scaled(other, &-LaurentRat::one());
        out
    }

    pub fn bar_coeffs(&self) -> FockVector {
        let mut out = FockVector::new(self.charge.clone());
        for (l, c) in &self.terms {
            out.add_term(l.clone(), c.bar());
        }
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

    pub fn coeff(&self, lambda: &Multipartition) -> LaurentRat {
        self.terms.get(lambda).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Multipartition, &LaurentRat)> {
        self.terms.iter()
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(Multipartition::size).max().unwrap_or(0)
    }

    pub fn to_wedge(&self, params: FockParams) -> Result<WedgeVector> {
        let mut out = WedgeVector::new(self.charge.total());
        for (l, c) in &self.terms {
            let w = labels_to_word(l, self.charge.as_slice(), params)?;
            out.add_term(w.indices, c.clone());
        }
        Ok(out)
    }

    /// Reads a wedge vector back as labels. Every word must carry `charge`.
    pub fn from_wedge(w: &WedgeVector, params: FockParams, charge: &MultiCharge) -> Result<FockVector> {
        let mut out = FockVector::new(charge.clone());
        for (word, c) in w.iter() {
            let ww = WedgeWord { s: w.s, indices: word.clone() };
            let (lam, ch) = word_to_labels(&ww, params);
            if ch != charge.0 {
                return Err(Error::Precondition(format!(
                    "word {} has multicharge {:?}, expected {}",
                    ww, ch, charge
                )));
            }
            out.add_term(lam, c.clone());
        }
        Ok(out)
    }
}

impl fmt::Display for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (l, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({}) {}", c, l)?;
        }
        Ok(())
    }
}

impl fmt::Debug for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[derive(Serialize)]
struct TermOut<'a> {
    label: &'a Multipartition,
    coeff: &'a LaurentRat,
}

impl Serialize for FockVector {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let terms: Vec<TermOut> = self.terms.iter().rev().map(|(label, coeff)| TermOut { label, coeff }).collect();
        let mut st = ser.serialize_struct("FockVector", 2)?;
        st.serialize_field("charge", &self.charge)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

/// One factor of an operator word. `m > 0` throughout and stands for the
/// creation mode `B_{-m}`; sectors are 1-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Generator {
    Plain { m: usize },
    Primed { m: usize, sector: usize },
    Bracket { m: usize, sector: usize },
    Ranged { m: usize, sector: usize },
}

impl Generator {
    pub fn mode(&self) -> usize {
        match *self {
            Generator::Plain { m } => m,
            Generator::Primed { m, .. } | Generator::Bracket { m, .. } | Generator::Ranged { m, .. } => m,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Plain { m } => write!(f, "B_-{}", m),
            Generator::Primed { m, sector } => write!(f, "B'_-{}[{}]", m, sector),
            Generator::Bracket { m, sector } => write!(f, "B_-{}[{}]", m, sector),
            Generator::Ranged { m, sector } => write!(f, "B_-{}[{},l]", m, sector),
        }
    }
}

/// Which boson family a `V` or `S` operator is built from.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Flavor {
    Plain,
    Primed(usize),
    Bracket(usize),
    Ranged(usize),
}

impl Flavor {
    fn generator(self, m: usize) -> Generator {
        match self {
            Flavor::Plain => Generator::Plain { m },
            Flavor::Primed(sector) => Generator::Primed { m, sector },
            Flavor::Bracket(sector) => Generator::Bracket { m, sector },
            Flavor::Ranged(sector) => Generator::Ranged { m, sector },
        }
    }
}

/// A formal combination of products of generators. Products are written
/// left to right and applied right to left.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct OperatorExpr {
    terms: BTreeMap<Vec<Generator>, LaurentRat>,
}

#[derive(Serialize, Deserialize)]
struct ExprTerm {
    coeff: LaurentRat,
    factors: Vec<Generator>,
}

impl Serialize for OperatorExpr {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<ExprTerm> = self
            .terms
            .iter()
            .map(|(f, c)| ExprTerm { coeff: c.clone(), factors: f.clone() })
            .collect();
        v.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for OperatorExpr {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<ExprTerm> = Vec::deserialize(de)?;
        let mut out = OperatorExpr::zero();
        for t in v {
            out.add_term(t.factors, t.coeff);
        }
        Ok(out)
    }
}

/// Generators of one product commute unless plain bosons are mixed with
/// sector bosons, so such products get a canonical order: higher modes
/// to the right, i.e. applied first.
fn canonical_order(mut word: Vec<Generator>) -> Vec<Generator> {
    let plain = word.iter().filter(|g| matches!(g, Generator::Plain { .. })).count();
    if plain == 0 || plain == word.len() {
        word.sort_by(|a, b| a.mode().cmp(&b.mode()).then_with(|| a.cmp(b)));
    }
    word
}

impl OperatorExpr {
    pub fn zero() -> Self {
        OperatorExpr::default()
    }

    pub fn identity() -> Self {
        let mut e = OperatorExpr::zero();
        e.add_term(Vec::new(), LaurentRat::one());
        e
    }

    pub fn generator(g: Generator) -> Self {
        let mut e = OperatorExpr::zero();
        e.add_term(vec![g], LaurentRat::one());
        e
    }

    pub fn add_term(&mut self, word: Vec<Generator>, c: LaurentRat) {
        if c.is_zero() {
            return;
        }
        let word = canonical_order(word);
        let e = self.terms.entry(word.clone()).or_default();
        *e = &*e + &c;
        if e.is_zero() {
            self.terms.remove(&word);
        }
    }

    pub fn add_scaled(&mut self, other: &OperatorExpr, c: &LaurentRat) {
        for (w, x) in &other.terms {
            self.add_term(w.clone(), x * c);
        }
    }

    pub fn scale(&self, c: &LaurentRat) -> OperatorExpr {
        let mut out = OperatorExpr::zero();
        out.add_scaled(self, c);
        out
    }

    /// The composite `self ∘ other`.
    pub fn compose(&self, other: &OperatorExpr) -> OperatorExpr {
        let mut out = OperatorExpr::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mut w = a.clone();
                w.extend(b.iter().cloned());
                out.add_term(w, x * y);
            }
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Generator>, &LaurentRat)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total mode of every product, if homogeneous.
    pub fn degree(&self) -> Option<usize> {
        let mut degs = self.terms.keys().map(|w| w.iter().map(Generator::mode).sum::<usize>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }
}

impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})", c)?;
            if w.is_empty() {
                write!(f, " id")?;
            }
            for g in w {
                write!(f, " {}", g)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

fn rational(r: BigRational) -> LaurentRat {
    LaurentRat::constant(r)
}

/// `V_m = Σ_{|ρ|=m} z_ρ⁻¹ B_{-ρ}` in the requested flavor.
pub fn v_operator(m: usize, flavor: Flavor) -> OperatorExpr {
    if m == 0 {
        return OperatorExpr::identity();
    }
    let mut out = OperatorExpr::zero();
    for rho in partitions_of(m, None) {
        let word: Vec<Generator> = rho.parts().iter().map(|&p| flavor.generator(p)).collect();
        out.add_term(word, rational(BigRational::one() / z_factor(&rho)));
    }
    out
}

/// `V_μ = V_{μ_1} V_{μ_2} ⋯`.
pub fn v_product(mu: &Partition, flavor: Flavor) -> OperatorExpr {
    mu.parts()
        .iter()
        .fold(OperatorExpr::identity(), |acc, &p| acc.compose(&v_operator(p, flavor)))
}

/// `S_λ = Σ_μ K⁻¹_{μλ} V_μ`.
pub fn s_operator(lambda: &Partition, flavor: Flavor) -> OperatorExpr {
    let n = lambda.size();
    if n == 0 {
        return OperatorExpr::identity();
    }
    let (labels, inv) = kostka_inverse(n);
    let col = labels.iter().position(|p| p == lambda).expect("partition of its own size");
    let mut out = OperatorExpr::zero();
    for (row, mu) in labels.iter().enumerate() {
        let k = inv[row][col];
        if k != 0 {
            out.add_scaled(&v_product(mu, flavor), &LaurentRat::from_int(k));
        }
    }
    out
}

/// `S_λ[j] = Σ (−q⁻¹)^{|ν|} LR^λ_{μν} S'_μ[j] S'_{νᵗ}[j+1]` for `j < ℓ`.
pub fn s_bracket_expand(lambda: &Partition, j: usize, level: usize) -> Result<OperatorExpr> {
    if j == 0 || j > level {
        return Err(Error::InvalidParams(format!("sector {} outside 1..={}", j, level)));
    }
    if j == level {
        return Err(Error::LastSector);
    }
    let mut out = OperatorExpr::zero();
    for (mu, nu, c) in lr_expansion(lambda) {
        let coeff = LaurentRat::from_int_terms([(-(nu.size() as i32), 1)]);
        let coeff = if nu.size() % 2 == 1 { -coeff } else { coeff };
        let term = s_operator(&mu, Flavor::Primed(j)).compose(&s_operator(&nu.transpose(), Flavor::Primed(j + 1)));
        out.add_scaled(&term, &(&coeff * &LaurentRat::from_int(c as i64)));
    }
    Ok(out)
}

/// `S_λ[j]` in primed generators: the bracket expansion for `j < ℓ` and
/// `S'_λ[ℓ]` for the last sector.
pub fn s_bracket_primed(lambda: &Partition, j: usize, level: usize) -> Result<OperatorExpr> {
    if j == level {
        Ok(s_operator(lambda, Flavor::Primed(level)))
    } else {
        s_bracket_expand(lambda, j, level)
    }
}

/// `S_λ = S_{λ⁽¹⁾}[1] ⋯ S_{λ⁽ℓ⁾}[ℓ]`, written in primed generators.
pub fn s_multi(lambda: &Multipartition) -> OperatorExpr {
    let level = lambda.level();
    let mut out = OperatorExpr::identity();
    for (i, p) in lambda.components().iter().enumerate() {
        let factor = s_bracket_primed(p, i + 1, level).expect("sector in range");
        out = out.compose(&factor);
    }
    out
}

type Expansion = Vec<(Partition, LaurentRat)>;

/// Evaluation context: wedge engines for level `ℓ` and level one, and a
/// memo of level-one boson actions on single partitions.
pub struct FockContext {
    params: FockParams,
    engine: WedgeEngine,
    level_one: WedgeEngine,
    extra_r: usize,
    component_memo: RefCell<HashMap<(Partition, i64, i64), Expansion>>,
}

impl FockContext {
    pub fn new(params: FockParams) -> Self {
        FockContext {
            params,
            engine: WedgeEngine::new(params),
            level_one: WedgeEngine::new(params.level_one()),
            extra_r: 0,
            component_memo: RefCell::new(HashMap::new()),
        }
    }

    /// A context whose truncations are all lengthened by `k·nℓ`.
    pub fn with_extra_truncation(params: FockParams, k: usize) -> Self {
        let mut c = FockContext::new(params);
        c.extra_r = k * params.runners() as usize;
        c
    }

    pub fn params(&self) -> FockParams {
        self.params
    }

    pub fn engine(&self) -> &WedgeEngine {
        &self.engine
    }

    pub fn level_one_engine(&self) -> &WedgeEngine {
        &self.level_one
    }

    /// Truncation used for vectors of degree at most `degree`.
    pub fn truncation(&self, degree: usize, charge: &MultiCharge) -> usize {
        truncation_length(self.params, degree, charge.as_slice()) + self.extra_r
    }

    fn check_charge(&self, charge: &MultiCharge) -> Result<()> {
        if charge.level() != self.params.l {
            return Err(Error::InvalidParams(format!(
                "multicharge {} has level {}, expected {}",
                charge,
                charge.level(),
                self.params.l
            )));
        }
        Ok(())
    }

    /// Bar involution on `F_q[s]`.
    pub fn bar(&self, v: &FockVector) -> Result<FockVector> {
        self.check_charge(&v.charge)?;
        let r = self.truncation(v.max_degree(), &v.charge);
        let w = v.to_wedge(self.params)?;
        FockVector::from_wedge(&self.engine.bar(&w, r)?, self.params, &v.charge)
    }

    /// The boson `B_m` (`m ≠ 0`) acting through wedges.
    pub fn boson(&self, m: i64, v: &FockVector) -> Result<FockVector> {
        self.check_charge(&v.charge)?;
        let lift = self.params.n * m.unsigned_abs() as usize;
        let degree = if m < 0 { v.max_degree() + lift } else { v.max_degree() };
        let r = self.truncation(degree, &v.charge);
        let w = v.to_wedge(self.params)?;
        FockVector::from_wedge(&self.engine.boson(m, &w, r)?, self.params, &v.charge)
    }

    /// Level-one `B_{-m}` on `|λ; s⟩`, memoized.
    fn level_one_boson(&self, lambda: &Partition, s: i64, m: usize) -> Result<Expansion> {
        let key = (lambda.clone(), s, m as i64);
        if let Some(hit) = self.component_memo.borrow().get(&key) {
            return Ok(hit.clone());
        }
        let p1 = self.params.level_one();
        let mp = Multipartition(vec![lambda.clone()]);
        let word = labels_to_word(&mp, &[s], p1)?;
        let degree = lambda.size() + self.params.n * m;
        let r = truncation_length(p1, degree, &[s]) + self.extra_r;
        let out = self.level_one.boson(-(m as i64), &WedgeVector::basis(&word), r)?;
        let mut res = Vec::new();
        for (w, c) in out.iter() {
            let (lab, ch) = word_to_labels(&WedgeWord { s, indices: w.clone() }, p1);
            debug_assert_eq!(ch, vec![s]);
            res.push((lab.0.into_iter().next().expect("level one"), c.clone()));
        }
        self.component_memo.borrow_mut().insert(key, res.clone());
        Ok(res)
    }

    /// `B'_{-m}[i]`: level-one `B_{-m}` on the `i`-th component.
    pub fn boson_component(&self, i: usize, m: usize, v: &FockVector) -> Result<FockVector> {
        self.check_charge(&v.charge)?;
        if i == 0 || i > self.params.l || m == 0 {
            return Err(Error::InvalidParams(format!("B'_-{}[{}] out of range", m, i)));
        }
        let s_i = v.charge.0[i - 1];
        let mut out = FockVector::new(v.charge.clone());
        for (lam, c) in v.iter() {
            for (mu, x) in self.level_one_boson(lam.component(i - 1), s_i, m)? {
                out.add_term(lam.with_component(i - 1, mu), c * &x);
            }
        }
        Ok(out)
    }

    /// `B_{-m}[j]` (`ranged = false`) or `B_{-m}[j,ℓ]` (`ranged = true`).
    pub fn boson_bracket(&self, j: usize, m: usize, v: &FockVector, ranged: bool) -> Result<FockVector> {
        let l = self.params.l;
        if j == 0 || j > l {
            return Err(Error::InvalidParams(format!("sector {} outside 1..={}", j, l)));
        }
        let mut out = self.boson_component(j, m, v)?;
        if ranged {
            for i in j + 1..=l {
                let w = LaurentRat::q_pow(((i - j) * m) as i32);
                out.add_scaled(&self.boson_component(i, m, v)?, &w);
            }
        } else if j < l {
            let w = -LaurentRat::q_pow(-(m as i32));
            out.add_scaled(&self.boson_component(j + 1, m, v)?, &w);
        }
        Ok(out)
    }

    pub fn apply_generator(&self, g: &Generator, v: &FockVector) -> Result<FockVector> {
        match *g {
            Generator::Plain { m } => self.boson(-(m as i64), v),
            Generator::Primed { m, sector } => self.boson_component(sector, m, v),
            Generator::Bracket { m, sector } => self.boson_bracket(sector, m, v, false),
            Generator::Ranged { m, sector } => self.boson_bracket(sector, m, v, true),
        }
    }

    /// Applies an operator expression; products act right to left, and
    /// common right-hand factors are evaluated once.
    pub fn apply(&self, expr: &OperatorExpr, v: &FockVector) -> Result<FockVector> {
        // Trie over reversed words, i.e. in application order.
        #[derive(Default)]
        struct Node {
            coeff: LaurentRat,
            children: BTreeMap<Generator, Node>,
        }
        let mut root = Node::default();
        for (w, c) in expr.terms() {
            let mut node = &mut root;
            for g in w.iter().rev() {
                node = node.children.entry(g.clone()).or_default();
            }
            node.coeff = &node.coeff + c;
        }
        fn walk(ctx: &FockContext, node: &Node, v: &FockVector, out: &mut FockVector) -> Result<()> {
            if !node.coeff.is_zero() {
                out.add_scaled(v, &node.coeff);
            }
            for (g, child) in &node.children {
                let next = ctx.apply_generator(g, v)?;
                if !next.is_zero() {
                    walk(ctx, child, &next, out)?;
                }
            }
            Ok(())
        }
        let mut out = FockVector::new(v.charge.clone());
        walk(self, &root, v, &mut out)?;
        Ok(out)
    }

    /// `V'_m[i]` through horizontal ribbon strips.
    pub fn ribbon_v_apply(&self, m: usize, i: usize, v: &FockVector) -> Result<FockVector> {
        self.check_charge(&v.charge)?;
        if i == 0 || i > self.params.l {
            return Err(Error::InvalidParams(format!("sector {} outside 1..={}", i, self.params.l)));
        }
        if m == 0 {
            return Ok(v.clone());
        }
        let mut out = FockVector::new(v.charge.clone());
        for (lam, c) in v.iter() {
            for step in ribbon_successors(lam.component(i - 1), self.params.n, m) {
                let mut w = LaurentRat::q_pow(-(step.spin as i32));
                if step.spin % 2 == 1 {
                    w = -w;
                }
                out.add_term(lam.with_component(i - 1, step.target), c * &w);
            }
        }
        Ok(out)
    }

    /// `S'_λ[i]` through ribbon strips: `Σ_μ K⁻¹_{μλ} V'_{μ_1}[i] V'_{μ_2}[i] ⋯`.
    pub fn ribbon_s_apply(&self, lambda: &Partition, i: usize, v: &FockVector) -> Result<FockVector> {
        let n = lambda.size();
        if n == 0 {
            return Ok(v.clone());
        }
        let (labels, inv) = kostka_inverse(n);
        let col = labels.iter().position(|p| p == lambda).expect("partition");
        let mut out = FockVector::new(v.charge.clone());
        for (row, mu) in labels.iter().enumerate() {
            let k = inv[row][col];
            if k == 0 {
                continue;
            }
            let mut cur = v.clone();
            for &p in mu.parts().iter().rev() {
                cur = self.ribbon_v_apply(p, i, &cur)?;
            }
            out.add_scaled(&cur, &LaurentRat::from_int(k));
        }
        Ok(out)
    }
}
