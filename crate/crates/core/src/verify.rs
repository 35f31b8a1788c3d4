//! Theorem checks and property batteries. Each check computes both
//! sides independently and reports the difference exactly.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::canonical::{build_block, build_block_with, canonical_basis, DecompositionMatrix, Sign};
use crate::coeff::LaurentRat;
use crate::combinatorics::{multipartition_decompose, multipartitions_of, partitions_of, Multipartition, Partition};
use crate::error::{Error, Result};
use crate::fock::{s_multi, s_operator, v_operator, Flavor, FockContext, FockVector, MultiCharge, OperatorExpr};
use crate::wedge::{
    exchange_pair, index_decompose, label_residue, label_to_index, labels_to_word, xi, FockParams, Fragment,
    WedgeEngine, WedgeVector,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DominanceReport {
    pub m: usize,
    pub holds: bool,
    /// `min_i (s_i − s_{i+1} − M − |λ|)`; `None` at level one.
    pub margin: Option<i64>,
}

/// `s_i − s_{i+1} ≥ M + |λ|` for all `i < ℓ`.
pub fn is_m_dominant(lambda: &Multipartition, s: &MultiCharge, m: usize) -> DominanceReport {
    let size = lambda.size() as i64;
    let margin = s.0.windows(2).map(|w| w[0] - w[1] - m as i64 - size).min();
    DominanceReport { m, holds: margin.is_none_or(|x| x >= 0), margin }
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub statement: String,
    pub instance: serde_json::Value,
    pub lhs: FockVector,
    pub rhs: FockVector,
    pub equal: bool,
    pub diff: FockVector,
    /// The statement's hypotheses fail for this instance; recorded only.
    pub exploratory: bool,
}

impl TheoremReport {
    fn new(statement: &str, instance: serde_json::Value, lhs: FockVector, rhs: FockVector, exploratory: bool) -> Self {
        let diff = lhs.sub(&rhs);
        TheoremReport { statement: statement.into(), instance, equal: diff.is_zero(), lhs, rhs, diff, exploratory }
    }

    /// Passing means equal, unless the instance is exploratory.
    pub fn passed(&self) -> bool {
        self.equal || self.exploratory
    }
}

type MatrixKey = (Vec<i64>, usize);

/// Holds a Fock context and the canonical-basis matrices computed so far.
pub struct Verifier {
    ctx: FockContext,
    matrices: RefCell<HashMap<MatrixKey, Rc<DecompositionMatrix>>>,
    stability_check: bool,
}

impl Verifier {
    pub fn new(params: FockParams) -> Self {
        Verifier { ctx: FockContext::new(params), matrices: RefCell::new(HashMap::new()), stability_check: true }
    }

    /// Skips the `r + nℓ` recomputation when building blocks.
    pub fn without_stability_check(mut self) -> Self {
        self.stability_check = false;
        self
    }

    pub fn params(&self) -> FockParams {
        self.ctx.params()
    }

    pub fn context(&self) -> &FockContext {
        &self.ctx
    }

    pub fn insert_matrix(&self, m: DecompositionMatrix) {
        self.matrices.borrow_mut().insert((m.charge.0.clone(), m.degree), Rc::new(m));
    }

    /// `Δ⁻` for the degree-`N` block at charge `s`.
    pub fn matrix(&self, s: &MultiCharge, degree: usize) -> Result<Rc<DecompositionMatrix>> {
        let key = (s.0.clone(), degree);
        if let Some(m) = self.matrices.borrow().get(&key) {
            return Ok(m.clone());
        }
        let block = if self.stability_check {
            build_block(self.params(), s, degree)?
        } else {
            build_block_with(&self.ctx, s, degree)?
        };
        let m = Rc::new(canonical_basis(&block, Sign::Minus)?);
        self.matrices.borrow_mut().insert(key, m.clone());
        Ok(m)
    }

    /// `G⁻(λ; s)` from the triangular solver.
    pub fn canonical(&self, lambda: &Multipartition, s: &MultiCharge) -> Result<FockVector> {
        let m = self.matrix(s, lambda.size())?;
        m.basis_vector(lambda)
            .ok_or_else(|| Error::Precondition(format!("{} is not a level-{} label", lambda, s.level())))
    }

    fn check_level(&self, lambda: &Multipartition, s: &MultiCharge) -> Result<()> {
        let l = self.params().l;
        if lambda.level() != l || s.level() != l {
            return Err(Error::InvalidParams(format!("expected level {} data", l)));
        }
        Ok(())
    }

    /// `S_λ[j] G⁻(μ; s) = G⁻(μ with μ⁽ʲ⁾ + nλ; s)`.
    pub fn check_theorem_49(&self, mu: &Multipartition, lambda: &Partition, j: usize, s: &MultiCharge) -> Result<TheoremReport> {
        self.check_level(mu, s)?;
        let params = self.params();
        let n = params.n;
        if j == 0 || j > params.l {
            return Err(Error::InvalidParams(format!("sector {} outside 1..={}", j, params.l)));
        }
        let dom = is_m_dominant(mu, s, n * lambda.size());
        if !dom.holds {
            return Err(Error::Precondition(format!(
                "|{}; {}⟩ is not {}-dominant (margin {:?})",
                mu,
                s,
                n * lambda.size(),
                dom.margin
            )));
        }
        if !mu.component(j - 1).is_restricted(n) {
            return Err(Error::Precondition(format!("component {} of {} is not {}-restricted", j, mu, n)));
        }
        let op = s_operator(lambda, Flavor::Bracket(j));
        let lhs = self.ctx.apply(&op, &self.canonical(mu, s)?)?;
        let target = mu.with_component(j - 1, mu.component(j - 1).add_scaled(lambda, n));
        let rhs = self.canonical(&target, s)?;
        let inst = json!({"n": n, "l": params.l, "charge": s, "mu": mu, "lambda": lambda, "j": j});
        Ok(TheoremReport::new("theorem-49", inst, lhs, rhs, false))
    }

    /// `G⁻(λ; s) = S_{λ̌} G⁻(λ̃; s)` on 0-dominant labels.
    pub fn check_theorem_412(&self, lambda: &Multipartition, s: &MultiCharge) -> Result<TheoremReport> {
        self.check_level(lambda, s)?;
        let params = self.params();
        let dom = is_m_dominant(lambda, s, 0);
        if !dom.holds {
            return Err(Error::Precondition(format!(
                "|{}; {}⟩ is not 0-dominant (margin {:?})",
                lambda, s, dom.margin
            )));
        }
        let (tilde, check) = multipartition_decompose(lambda, params.n);
        let lhs = self.canonical(lambda, s)?;
        let rhs = self.ctx.apply(&s_multi(&check), &self.canonical(&tilde, s)?)?;
        let inst = json!({"n": params.n, "l": params.l, "charge": s, "lambda": lambda, "tilde": tilde, "check": check});
        Ok(TheoremReport::new("theorem-412", inst, lhs, rhs, false))
    }

    /// `B_{-m} u = Σ_i q^{(i−1)m} B'_{-m}[i] u`.
    pub fn check_boson_split(&self, lambda: &Multipartition, s: &MultiCharge, m: usize) -> Result<TheoremReport> {
        self.check_level(lambda, s)?;
        let params = self.params();
        let u = FockVector::basis(lambda.clone(), s.clone());
        let lhs = self.ctx.boson(-(m as i64), &u)?;
        let mut rhs = FockVector::new(s.clone());
        for i in 1..=params.l {
            rhs.add_scaled(&self.ctx.boson_component(i, m, &u)?, &LaurentRat::q_pow(((i - 1) * m) as i32));
        }
        let exploratory = !is_m_dominant(lambda, s, params.n * m).holds;
        let inst = json!({"n": params.n, "l": params.l, "charge": s, "lambda": lambda, "m": m});
        Ok(TheoremReport::new("boson-split", inst, lhs, rhs, exploratory))
    }

    /// `B_{-m} u = Σ_j [(q^{jm} − q^{−jm})/(q^m − q^{−m})] B_{-m}[j] u`.
    pub fn check_bracket_sum(&self, lambda: &Multipartition, s: &MultiCharge, m: usize) -> Result<TheoremReport> {
        self.check_level(lambda, s)?;
        let params = self.params();
        let u = FockVector::basis(lambda.clone(), s.clone());
        let lhs = self.ctx.boson(-(m as i64), &u)?;
        let den = LaurentRat::from_int_terms([(m as i32, 1), (-(m as i32), -1)]);
        let mut rhs = FockVector::new(s.clone());
        for j in 1..=params.l {
            let e = (j * m) as i32;
            let num = LaurentRat::from_int_terms([(e, 1), (-e, -1)]);
            let w = num.div_exact(&den).expect("quantum integer");
            rhs.add_scaled(&self.ctx.boson_bracket(j, m, &u, false)?, &w);
        }
        let exploratory = !is_m_dominant(lambda, s, params.n * m).holds;
        let inst = json!({"n": params.n, "l": params.l, "charge": s, "lambda": lambda, "m": m});
        Ok(TheoremReport::new("bracket-sum", inst, lhs, rhs, exploratory))
    }

    /// `bar(B u) = B bar(u)` for `B = B_{-m}[j]` or `B_{-m}[j,ℓ]`.
    pub fn check_bracket_bar(&self, lambda: &Multipartition, s: &MultiCharge, m: usize, j: usize, ranged: bool) -> Result<TheoremReport> {
        self.check_level(lambda, s)?;
        let params = self.params();
        let u = FockVector::basis(lambda.clone(), s.clone());
        let lhs = self.ctx.bar(&self.ctx.boson_bracket(j, m, &u, ranged)?)?;
        let rhs = self.ctx.boson_bracket(j, m, &self.ctx.bar(&u)?, ranged)?;
        let exploratory = !is_m_dominant(lambda, s, params.n * m).holds;
        let inst = json!({"n": params.n, "l": params.l, "charge": s, "lambda": lambda, "m": m, "j": j, "ranged": ranged});
        Ok(TheoremReport::new("bar-bracket", inst, lhs, rhs, exploratory))
    }

    /// `bar(B_{-m} u) = B_{-m} bar(u)`.
    pub fn check_boson_bar(&self, lambda: &Multipartition, s: &MultiCharge, m: usize) -> Result<TheoremReport> {
        self.check_level(lambda, s)?;
        let params = self.params();
        let u = FockVector::basis(lambda.clone(), s.clone());
        let b = -(m as i64);
        let lhs = self.ctx.bar(&self.ctx.boson(b, &u)?)?;
        let rhs = self.ctx.boson(b, &self.ctx.bar(&u)?)?;
        let inst = json!({"n": params.n, "l": params.l, "charge": s, "lambda": lambda, "m": m});
        Ok(TheoremReport::new("bar-boson", inst, lhs, rhs, false))
    }

    /// `[B_a, B_b]` on the vacuum against the Heisenberg scalar.
    pub fn check_heisenberg(&self, a: i64, b: i64, s: &MultiCharge) -> Result<TheoremReport> {
        let params = self.params();
        let vac = FockVector::vacuum(s.clone());
        let ab = self.ctx.boson(a, &self.ctx.boson(b, &vac)?)?;
        let ba = self.ctx.boson(b, &self.ctx.boson(a, &vac)?)?;
        let lhs = ab.sub(&ba);
        let rhs = if a == -b {
            vac.scale(&heisenberg_scalar(params, a))
        } else {
            FockVector::new(s.clone())
        };
        let inst = json!({"n": params.n, "l": params.l, "charge": s, "a": a, "b": b});
        Ok(TheoremReport::new("heisenberg", inst, lhs, rhs, false))
    }

    /// The wedge-level sector action against the label-level `B'_{-m}[j]`.
    /// The word of `|λ; s⟩` is regrouped sector by sector, each sector
    /// cut at a common level-one label; the sector-`j` fragment is acted on
    /// by shifting one label at a time by `nm`, with prefactor `q^{-(j-1)m}`.
    pub fn check_sector_action(&self, lambda: &Multipartition, s: &MultiCharge, j: usize, m: usize) -> Result<TheoremReport> {
        self.check_level(lambda, s)?;
        let params = self.params();
        let n = params.n as i64;
        let nm = n * m as i64;
        let engine = self.ctx.engine();
        let lowest = *s.0.iter().min().expect("nonempty");
        // A cut at a multiple of n leaves every sector with a complete tail.
        let t0 = (lowest - (lambda.size() as i64 + nm + 2)).div_euclid(n) * n;
        let fragment = |p: &Partition, sd: i64| -> Vec<i64> {
            (0..(sd - t0)).map(|i| p.part(i as usize) as i64 + sd - i).collect()
        };
        let frags: Vec<Vec<i64>> = lambda
            .components()
            .iter()
            .zip(&s.0)
            .map(|(p, &sd)| fragment(p, sd))
            .collect();
        let assemble = |frags: &[Vec<i64>]| -> Vec<i64> {
            frags
                .iter()
                .enumerate()
                .flat_map(|(d, f)| f.iter().map(move |&x| label_to_index(x, d as i64 + 1, params)))
                .collect()
        };
        let total: usize = frags.iter().map(Vec::len).sum();
        // The regrouped word must be a scalar multiple of |λ; s⟩.
        let base = engine.normal_order_finite(&assemble(&frags));
        let word = labels_to_word(lambda, s.as_slice(), params)?.padded(total);
        let scale = match base.get(&word) {
            Some(c) if base.len() == 1 => c.clone(),
            _ => {
                return Err(Error::Precondition(format!(
                    "regrouped word of {} does not reduce to a single basis word",
                    lambda
                )))
            }
        };
        let mut acc: BTreeMap<Vec<i64>, LaurentRat> = BTreeMap::new();
        for i in 0..frags[j - 1].len() {
            let mut f = frags.clone();
            f[j - 1][i] += nm;
            for (w, c) in engine.normal_order_finite(&assemble(&f)) {
                let e = acc.entry(w).or_default();
                *e = &*e + &c;
            }
        }
        let pref = LaurentRat::q_pow(-(((j - 1) * m) as i32));
        let mut lhs = WedgeVector::new(s.total());
        for (w, c) in acc {
            let x = (&c * &pref).div_exact(&scale).ok_or_else(|| {
                Error::Precondition("sector action is not divisible by the regrouping scalar".into())
            })?;
            if !x.is_zero() {
                lhs.add_term(crate::wedge::trim(s.total(), w), x);
            }
        }
        let lhs = FockVector::from_wedge(&lhs, params, s)?;
        let rhs = self.ctx.boson_component(j, m, &FockVector::basis(lambda.clone(), s.clone()))?;
        let exploratory = !is_m_dominant(lambda, s, params.n * m).holds;
        let inst = json!({"n": params.n, "l": params.l, "charge": s, "lambda": lambda, "j": j, "m": m});
        Ok(TheoremReport::new("sector-action", inst, lhs, rhs, exploratory))
    }
}

/// `m·(1−q^{−2mn})/(1−q^{−2m})·(1−q^{2mℓ})/(1−q^{2m})`.
pub fn heisenberg_scalar(params: FockParams, m: i64) -> LaurentRat {
    let (n, l) = (params.n as i32, params.l as i32);
    let m32 = m as i32;
    let a = LaurentRat::from_int_terms([(0, 1), (-2 * m32 * n, -1)])
        .div_exact(&LaurentRat::from_int_terms([(0, 1), (-2 * m32, -1)]))
        .expect("geometric sum");
    let b = LaurentRat::from_int_terms([(0, 1), (2 * m32 * l, -1)])
        .div_exact(&LaurentRat::from_int_terms([(0, 1), (2 * m32, -1)]))
        .expect("geometric sum");
    &(&a * &b) * &LaurentRat::from_int(m)
}

/// All 0-dominant labels of degree at most `max_degree`.
pub fn sweep_labels(level: usize, s: &MultiCharge, max_degree: usize) -> Vec<Multipartition> {
    (0..=max_degree)
        .flat_map(|d| multipartitions_of(d, level))
        .filter(|l| is_m_dominant(l, s, 0).holds)
        .collect()
}

/// Runs the main theorem check on every 0-dominant label up to
/// `max_degree`, split over `jobs` threads. Reports come back in label order.
pub fn sweep_theorem_412(params: FockParams, s: &MultiCharge, max_degree: usize, jobs: usize) -> Result<Vec<TheoremReport>> {
    let labels = sweep_labels(params.l, s, max_degree);
    parallel_map(&labels, jobs, |chunk| {
        let v = Verifier::new(params);
        chunk.iter().map(|l| v.check_theorem_412(l, s)).collect()
    })
}

/// Splits `items` into `jobs` contiguous chunks, one worker each, and
/// concatenates the results in order.
pub fn parallel_map<T: Sync, R: Send>(
    items: &[T],
    jobs: usize,
    f: impl Fn(&[T]) -> Vec<Result<R>> + Sync,
) -> Result<Vec<R>> {
    let jobs = jobs.max(1).min(items.len().max(1));
    let chunk = items.len().div_ceil(jobs).max(1);
    let parts: Vec<Vec<Result<R>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = items.chunks(chunk).map(|c| scope.spawn(|| f(c))).collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    parts.into_iter().flatten().collect()
}

// ---------------------------------------------------------------------------
// Property batteries

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub case: String,
    pub message: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub cases: usize,
    pub passed: bool,
    pub failures: Vec<Counterexample>,
}

pub const SUITES: &[&str] = &[
    "straightening",
    "sector-exchange",
    "exchange-stability",
    "run-exchange",
    "bar-involution",
    "heisenberg",
    "bar-boson",
    "boson-split",
    "bracket-sum",
    "bar-bracket",
    "sector-action",
    "ribbon",
    "theorem-49",
    "theorem-412-sweep",
];

/// A generated case: a description, a size for shrinking, and a check.
trait Case: Clone + std::fmt::Debug {
    fn check(&self) -> std::result::Result<(), String>;
    /// Strictly simpler variants, tried in order when shrinking.
    fn shrink(&self) -> Vec<Self>;
}

fn run_cases<C: Case>(suite: &str, seed: u64, cases: Vec<C>) -> SuiteReport {
    let mut failures = Vec::new();
    let count = cases.len();
    for c in cases {
        if let Err(msg) = c.check() {
            let (c, msg) = minimize(c, msg);
            failures.push(Counterexample { case: format!("{:?}", c), message: msg });
        }
    }
    SuiteReport { suite: suite.into(), seed, cases: count, passed: failures.is_empty(), failures }
}

fn minimize<C: Case>(mut c: C, mut msg: String) -> (C, String) {
    'outer: for _ in 0..64 {
        for smaller in c.shrink() {
            if let Err(m) = smaller.check() {
                c = smaller;
                msg = m;
                continue 'outer;
            }
        }
        break;
    }
    (c, msg)
}

fn random_params(rng: &mut ChaCha8Rng) -> FockParams {
    FockParams::new(rng.gen_range(2..=4), rng.gen_range(1..=3)).expect("valid")
}

/// A finite word: orders into strictly decreasing words, and conserves
/// the index sum and the residue multiset.
#[derive(Clone, Debug)]
struct WordCase {
    n: usize,
    l: usize,
    word: Vec<i64>,
}

impl Case for WordCase {
    fn check(&self) -> std::result::Result<(), String> {
        let params = FockParams::new(self.n, self.l).map_err(|e| e.to_string())?;
        let engine = WedgeEngine::new(params);
        let nf = engine.normal_order_finite(&self.word);
        let sum: i64 = self.word.iter().sum();
        let residues = |w: &[i64]| {
            let mut r: Vec<i64> = w.iter().map(|&k| index_decompose(k, params).c).collect();
            r.sort_unstable();
            r
        };
        let want = residues(&self.word);
        for (w, c) in &nf {
            if c.is_zero() {
                return Err("zero coefficient stored".into());
            }
            if w.windows(2).any(|p| p[0] <= p[1]) {
                return Err(format!("output {:?} is not strictly decreasing", w));
            }
            if w.iter().sum::<i64>() != sum {
                return Err(format!("output {:?} changes the index sum", w));
            }
            if residues(w) != want {
                return Err(format!("output {:?} changes the residue multiset", w));
            }
            let again = engine.normal_order_finite(w);
            if again.len() != 1 || !again.get(w).is_some_and(LaurentRat::is_one) {
                return Err(format!("ordered word {:?} is not a fixed point", w));
            }
        }
        Ok(())
    }

    fn shrink(&self) -> Vec<Self> {
        (0..self.word.len())
            .map(|i| {
                let mut w = self.word.clone();
                w.remove(i);
                WordCase { word: w, ..self.clone() }
            })
            .collect()
    }
}

/// The one-step exchange between distinct sectors: sum and bounds on
/// labels, residues, and agreement of normal forms.
#[derive(Clone, Debug)]
struct ExchangeCase {
    n: usize,
    l: usize,
    k1: i64,
    d1: i64,
    k2: i64,
    d2: i64,
}

impl Case for ExchangeCase {
    fn check(&self) -> std::result::Result<(), String> {
        let params = FockParams::new(self.n, self.l).map_err(|e| e.to_string())?;
        let a = label_to_index(self.k1, self.d1, params);
        let b = label_to_index(self.k2, self.d2, params);
        let terms = exchange_pair(a, b, params).ok_or("no exchange across sectors")?;
        let (lo, hi) = (self.k1.min(self.k2), self.k1.max(self.k2));
        let mut res_in = vec![label_residue(self.k1, self.n), label_residue(self.k2, self.n)];
        res_in.sort_unstable();
        let engine = WedgeEngine::new(params);
        let mut rebuilt: BTreeMap<Vec<i64>, LaurentRat> = BTreeMap::new();
        for (x, y, c) in &terms {
            let (tx, ty) = (index_decompose(*x, params), index_decompose(*y, params));
            if tx.d != self.d2 || ty.d != self.d1 {
                return Err(format!("term ({}, {}) is not sector-swapped", x, y));
            }
            let (g2, g1) = (tx.label(params), ty.label(params));
            if g1 + g2 != self.k1 + self.k2 {
                return Err(format!("labels {} + {} do not conserve the sum", g1, g2));
            }
            if !(lo <= g1 && g1 <= hi && lo <= g2 && g2 <= hi) {
                return Err(format!("labels ({}, {}) leave [{}, {}]", g1, g2, lo, hi));
            }
            let mut res = vec![label_residue(g1, self.n), label_residue(g2, self.n)];
            res.sort_unstable();
            if res != res_in {
                return Err(format!("residues change at ({}, {})", g1, g2));
            }
            for (w, c2) in engine.normal_order_finite(&[*x, *y]) {
                let e = rebuilt.entry(w).or_default();
                *e = &*e + &(c * &c2);
            }
        }
        rebuilt.retain(|_, c| !c.is_zero());
        if rebuilt != engine.normal_order_finite(&[a, b]) {
            return Err("the expansion disagrees with the normal form".into());
        }
        Ok(())
    }

    fn shrink(&self) -> Vec<Self> {
        let mut out = Vec::new();
        for (dk1, dk2) in [(-1, 0), (1, 0), (0, -1), (0, 1)] {
            let c = ExchangeCase { k1: self.k1 + dk1, k2: self.k2 + dk2, ..self.clone() };
            if c.k1 != c.k2 && (c.k1 - c.k2).abs() < (self.k1 - self.k2).abs() {
                out.push(c);
            }
        }
        out
    }
}

/// Coefficients of `u_k ∧ u_g` and `u_k ∧ u_{g+nm}` agree for `j` below
/// `k − g − nm` (all `j` when `m = 0`).
#[derive(Clone, Debug)]
struct StabilityCase {
    n: usize,
    l: usize,
    k: i64,
    g: i64,
    m: i64,
    d1: i64,
    d2: i64,
}

impl StabilityCase {
    fn coeffs(&self, params: FockParams, g: i64) -> std::result::Result<BTreeMap<i64, LaurentRat>, String> {
        let a = label_to_index(self.k, self.d1, params);
        let b = label_to_index(g, self.d2, params);
        let mut out = BTreeMap::new();
        for (x, y, c) in exchange_pair(a, b, params).ok_or("no exchange across sectors")? {
            let tx = index_decompose(x, params);
            let ty = index_decompose(y, params);
            if tx.label(params) + ty.label(params) != self.k + g {
                return Err("label sum not conserved".into());
            }
            out.insert(tx.label(params) - g, c);
        }
        Ok(out)
    }

    /// Indices `j` at which the two expansions agree by the statement.
    fn range(&self) -> i64 {
        let nm = self.n as i64 * self.m;
        if self.m == 0 {
            self.k - self.g
        } else {
            self.k - self.g - nm - 1
        }
    }
}

impl Case for StabilityCase {
    fn check(&self) -> std::result::Result<(), String> {
        let params = FockParams::new(self.n, self.l).map_err(|e| e.to_string())?;
        let nm = self.n as i64 * self.m;
        let c = self.coeffs(params, self.g)?;
        let c2 = self.coeffs(params, self.g + nm)?;
        for j in 0..=self.range() {
            let (x, y) = (c.get(&j).cloned().unwrap_or_default(), c2.get(&j).cloned().unwrap_or_default());
            if x != y {
                return Err(format!("C_{} = {} but C'_{} = {}", j, x, j, y));
            }
        }
        Ok(())
    }

    fn shrink(&self) -> Vec<Self> {
        let nm = self.n as i64 * self.m;
        let mut out = Vec::new();
        if self.k > self.g + nm {
            out.push(StabilityCase { k: self.k - 1, ..self.clone() });
        }
        if self.m > 0 {
            out.push(StabilityCase { m: self.m - 1, ..self.clone() });
        }
        out
    }
}

/// Moving a letter past a run of consecutive letters of another sector
/// multiplies by `q^{∓ξ}`.
#[derive(Clone, Debug)]
struct RunCase {
    n: usize,
    l: usize,
    a: i64,
    i: i64,
    j: i64,
    t: i64,
    below: bool,
}

impl Case for RunCase {
    fn check(&self) -> std::result::Result<(), String> {
        let params = FockParams::new(self.n, self.l).map_err(|e| e.to_string())?;
        let ua = label_to_index(self.a, self.i, params);
        let idx = |x: i64| label_to_index(x, self.j, params);
        let labels: Vec<i64> = if self.below {
            // Largest k with u_k^{(j)} < u_a^{(i)}, then k, k−1, …, k−t.
            let mut k = self.a + 2 * self.n as i64;
            while idx(k) >= ua {
                k -= 1;
            }
            (0..=self.t).map(|x| k - x).collect()
        } else {
            // Smallest g with u_g^{(j)} > u_a^{(i)}, then g+t, …, g.
            let mut g = self.a - 2 * self.n as i64;
            while idx(g) <= ua {
                g += 1;
            }
            (0..=self.t).map(|x| g + self.t - x).collect()
        };
        let run = Fragment::new(self.j, labels.clone());
        let single = Fragment::new(self.i, vec![self.a]);
        let e = if self.below {
            -(xi(&run, &single, params).map_err(|e| e.to_string())? as i32)
        } else {
            xi(&single, &run, params).map_err(|e| e.to_string())? as i32
        };
        let engine = WedgeEngine::new(params);
        let mut left = vec![ua];
        left.extend(run.indices(params));
        let mut right = run.indices(params);
        right.push(ua);
        let lhs = engine.normal_order_finite(&left);
        let rhs: BTreeMap<Vec<i64>, LaurentRat> = engine
            .normal_order_finite(&right)
            .into_iter()
            .map(|(w, c)| (w, &c * &LaurentRat::q_pow(e)))
            .collect();
        if lhs != rhs {
            return Err(format!("run {:?}: expected factor q^{}", labels, e));
        }
        Ok(())
    }

    fn shrink(&self) -> Vec<Self> {
        if self.t > 0 {
            vec![RunCase { t: self.t - 1, ..self.clone() }]
        } else {
            Vec::new()
        }
    }
}

/// Bar is an involution on a basis vector, and unitriangular.
#[derive(Clone, Debug)]
struct BarCase {
    n: usize,
    l: usize,
    charge: Vec<i64>,
    lambda: Multipartition,
}

impl Case for BarCase {
    fn check(&self) -> std::result::Result<(), String> {
        let params = FockParams::new(self.n, self.l).map_err(|e| e.to_string())?;
        let ctx = FockContext::new(params);
        let s = MultiCharge(self.charge.clone());
        let u = FockVector::basis(self.lambda.clone(), s.clone());
        let b = ctx.bar(&u).map_err(|e| e.to_string())?;
        if !b.coeff(&self.lambda).is_one() {
            return Err(format!("diagonal coefficient {}", b.coeff(&self.lambda)));
        }
        let top = labels_to_word(&self.lambda, &self.charge, params).map_err(|e| e.to_string())?;
        for (mu, _) in b.iter() {
            let w = labels_to_word(mu, &self.charge, params).map_err(|e| e.to_string())?;
            if mu.size() != self.lambda.size() || !crate::wedge::prefix_ge(&top, &w) {
                return Err(format!("bar|{}⟩ has a term {} not below it", self.lambda, mu));
            }
        }
        let bb = ctx.bar(&b).map_err(|e| e.to_string())?;
        if bb != u {
            return Err(format!("bar is not an involution on {}", self.lambda));
        }
        Ok(())
    }

    fn shrink(&self) -> Vec<Self> {
        let mut out = Vec::new();
        for (i, p) in self.lambda.components().iter().enumerate() {
            if p.is_empty() {
                continue;
            }
            let mut parts = p.parts().to_vec();
            *parts.last_mut().expect("nonempty") -= 1;
            let smaller = Partition::new(parts).expect("partition");
            out.push(BarCase { lambda: self.lambda.with_component(i, smaller), ..self.clone() });
        }
        out
    }
}

fn random_multipartition(rng: &mut ChaCha8Rng, level: usize, max: usize) -> Multipartition {
    let size = rng.gen_range(0..=max);
    let all = multipartitions_of(size, level);
    all[rng.gen_range(0..all.len())].clone()
}

/// A deterministic check over a fixed grid.
#[derive(Clone)]
struct GridCase {
    name: String,
    run: Rc<dyn Fn() -> Result<TheoremReport>>,
}

impl std::fmt::Debug for GridCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.name)
    }
}

impl Case for GridCase {
    fn check(&self) -> std::result::Result<(), String> {
        match (self.run)() {
            Ok(r) if r.passed() => Ok(()),
            Ok(r) => Err(format!("lhs {} rhs {} diff {}", r.lhs, r.rhs, r.diff)),
            Err(e) => Err(e.to_string()),
        }
    }

    fn shrink(&self) -> Vec<Self> {
        Vec::new()
    }
}

fn grid(name: String, f: impl Fn() -> Result<TheoremReport> + 'static) -> GridCase {
    GridCase { name, run: Rc::new(f) }
}

fn fp(n: usize, l: usize) -> FockParams {
    FockParams::new(n, l).expect("valid")
}

/// Grid for `[B_a, B_b]` on the vacuum.
pub fn heisenberg_grid() -> Vec<(usize, usize, i64, i64)> {
    let mut out = Vec::new();
    for n in [2, 3] {
        for l in [1, 2] {
            for a in [1i64, 2] {
                for b in [-2i64, -1, 1, 2] {
                    out.push((n, l, a, b));
                }
            }
        }
    }
    out
}

/// Bar/boson commutation: `|λ| ≤ 3`, `m ≤ 2`, `n = 2`, `ℓ ∈ {1, 2}`.
pub fn boson_bar_grid() -> Vec<(usize, MultiCharge, Multipartition, usize)> {
    let mut out = Vec::new();
    for (l, s) in [(1usize, vec![0i64]), (2, vec![1, -1])] {
        for d in 0..=3 {
            for lam in multipartitions_of(d, l) {
                for m in [1, 2] {
                    out.push((l, MultiCharge(s.clone()), lam.clone(), m));
                }
            }
        }
    }
    out
}

/// Bracket-boson bar commutation: `n = ℓ = 2`, `m = 1`, `|λ| ≤ 2`,
/// spread charges, both flavors and both sectors.
pub fn bracket_bar_grid() -> Vec<(MultiCharge, Multipartition, usize, bool)> {
    let mut out = Vec::new();
    for s in [vec![6i64, 0], vec![5, -1]] {
        for d in 0..=2 {
            for lam in multipartitions_of(d, 2) {
                for j in [1, 2] {
                    for ranged in [false, true] {
                        out.push((MultiCharge(s.clone()), lam.clone(), j, ranged));
                    }
                }
            }
        }
    }
    out
}

/// Runs the named battery. Random suites use `budget` cases; grid suites
/// ignore it.
pub fn run_property_suite(suite: &str, seed: u64, budget: usize) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let report = match suite {
        "straightening" => {
            let cases = (0..budget)
                .map(|_| {
                    let p = random_params(&mut rng);
                    let len = rng.gen_range(1..=5);
                    WordCase { n: p.n, l: p.l, word: (0..len).map(|_| rng.gen_range(-10..=10)).collect() }
                })
                .collect();
            run_cases(suite, seed, cases)
        }
        "sector-exchange" => {
            let cases = (0..budget)
                .map(|_| loop {
                    let p = FockParams::new(rng.gen_range(2..=4), rng.gen_range(2..=3)).expect("valid");
                    let (d1, d2) = (rng.gen_range(1..=p.l as i64), rng.gen_range(1..=p.l as i64));
                    let (k1, k2) = (rng.gen_range(-15..=15), rng.gen_range(-15..=15));
                    if d1 != d2 {
                        break ExchangeCase { n: p.n, l: p.l, k1, d1, k2, d2 };
                    }
                })
                .collect();
            run_cases(suite, seed, cases)
        }
        "exchange-stability" => {
            let cases = (0..budget)
                .map(|_| loop {
                    let p = FockParams::new(rng.gen_range(2..=4), rng.gen_range(2..=3)).expect("valid");
                    let (d1, d2) = (rng.gen_range(1..=p.l as i64), rng.gen_range(1..=p.l as i64));
                    let m = rng.gen_range(0..=2);
                    let g = rng.gen_range(-12..=12);
                    let k = g + p.n as i64 * m + rng.gen_range(0..=8);
                    if d1 != d2 {
                        break StabilityCase { n: p.n, l: p.l, k, g, m, d1, d2 };
                    }
                })
                .collect();
            run_cases(suite, seed, cases)
        }
        "run-exchange" => {
            let cases = (0..budget)
                .map(|_| loop {
                    let p = FockParams::new(rng.gen_range(2..=4), rng.gen_range(2..=3)).expect("valid");
                    let (i, j) = (rng.gen_range(1..=p.l as i64), rng.gen_range(1..=p.l as i64));
                    if i != j {
                        break RunCase {
                            n: p.n,
                            l: p.l,
                            a: rng.gen_range(-10..=10),
                            i,
                            j,
                            t: rng.gen_range(0..=5),
                            below: rng.gen_bool(0.5),
                        };
                    }
                })
                .collect();
            run_cases(suite, seed, cases)
        }
        "bar-involution" => {
            let cases = (0..budget)
                .map(|_| {
                    let n = rng.gen_range(2..=3);
                    let l = rng.gen_range(1..=2);
                    let charge = (0..l).map(|_| rng.gen_range(-3..=3)).collect();
                    BarCase { n, l, charge, lambda: random_multipartition(&mut rng, l, 3) }
                })
                .collect();
            run_cases(suite, seed, cases)
        }
        "heisenberg" => {
            let cases = heisenberg_grid()
                .into_iter()
                .map(|(n, l, a, b)| {
                    grid(format!("n={} l={} [B_{}, B_{}]", n, l, a, b), move || {
                        let s = MultiCharge(vec![0; l]);
                        Verifier::new(fp(n, l)).check_heisenberg(a, b, &s)
                    })
                })
                .collect();
            run_cases(suite, seed, cases)
        }
        "bar-boson" => {
            let cases = boson_bar_grid()
                .into_iter()
                .map(|(l, s, lam, m)| {
                    grid(format!("l={} s={} {} m={}", l, s, lam, m), move || {
                        Verifier::new(fp(2, l)).check_boson_bar(&lam, &s, m)
                    })
                })
                .collect();
            run_cases(suite, seed, cases)
        }
        "boson-split" | "bracket-sum" | "sector-action" => {
            let s = MultiCharge(vec![6, 0]);
            let labels = [
                Multipartition::empty(2),
                Multipartition::from_slices(&[&[1], &[]]),
                Multipartition::from_slices(&[&[], &[1]]),
            ];
            let mut cases = Vec::new();
            for lam in labels {
                let s = s.clone();
                let name = suite.to_string();
                if name == "sector-action" {
                    for j in [1usize, 2] {
                        let (s, lam) = (s.clone(), lam.clone());
                        cases.push(grid(format!("{} j={}", lam, j), move || {
                            Verifier::new(fp(2, 2)).check_sector_action(&lam, &s, j, 1)
                        }));
                    }
                } else {
                    cases.push(grid(format!("{}", lam), move || {
                        let v = Verifier::new(fp(2, 2));
                        if name == "boson-split" {
                            v.check_boson_split(&lam, &s, 1)
                        } else {
                            v.check_bracket_sum(&lam, &s, 1)
                        }
                    }));
                }
            }
            run_cases(suite, seed, cases)
        }
        "bar-bracket" => {
            let cases = bracket_bar_grid()
                .into_iter()
                .map(|(s, lam, j, ranged)| {
                    grid(format!("s={} {} j={} ranged={}", s, lam, j, ranged), move || {
                        Verifier::new(fp(2, 2)).check_bracket_bar(&lam, &s, 1, j, ranged)
                    })
                })
                .collect();
            run_cases(suite, seed, cases)
        }
        "ribbon" => {
            let mut cases = Vec::new();
            for n in [2usize, 3] {
                for size in 0..=5 {
                    for lam in partitions_of(size, None) {
                        for m in 0..=3usize {
                            let lam = lam.clone();
                            cases.push(grid(format!("n={} {} m={}", n, lam, m), move || {
                                check_ribbon(n, &lam, m)
                            }));
                        }
                    }
                }
            }
            run_cases(suite, seed, cases)
        }
        "theorem-49" => {
            let mut cases = Vec::new();
            for (s, mu, lam, j) in theorem_49_grid() {
                cases.push(grid(format!("s={} mu={} lambda={} j={}", s, mu, lam, j), move || {
                    Verifier::new(fp(2, 2)).check_theorem_49(&mu, &lam, j, &s)
                }));
            }
            run_cases(suite, seed, cases)
        }
        "theorem-412-sweep" => {
            let mut reports = sweep_theorem_412(fp(2, 2), &MultiCharge(vec![6, 0]), 4, 1)?;
            reports.extend(sweep_theorem_412(fp(3, 2), &MultiCharge(vec![9, 0]), 3, 1)?);
            let failures = reports
                .iter()
                .filter(|r| !r.passed())
                .map(|r| Counterexample { case: r.instance.to_string(), message: format!("diff {}", r.diff) })
                .collect::<Vec<_>>();
            SuiteReport { suite: suite.into(), seed, cases: reports.len(), passed: failures.is_empty(), failures }
        }
        _ => return Err(Error::InvalidParams(format!("unknown suite {:?}", suite))),
    };
    Ok(report)
}

/// Instances of the single-sector theorem at `n = ℓ = 2`.
pub fn theorem_49_grid() -> Vec<(MultiCharge, Multipartition, Partition, usize)> {
    let mut out = Vec::new();
    let s = MultiCharge(vec![6, 0]);
    for d in 0..=1 {
        for mu in multipartitions_of(d, 2) {
            for size in 1..=2 {
                for lam in partitions_of(size, None) {
                    for j in [1, 2] {
                        if is_m_dominant(&mu, &s, 2 * lam.size()).holds && mu.component(j - 1).is_restricted(2) {
                            out.push((s.clone(), mu.clone(), lam.clone(), j));
                        }
                    }
                }
            }
        }
    }
    out
}

/// Level one: `V_m` through ribbons against `V_m` through bosons.
pub fn check_ribbon(n: usize, lambda: &Partition, m: usize) -> Result<TheoremReport> {
    let ctx = FockContext::new(fp(n, 1));
    let u = FockVector::basis(Multipartition(vec![lambda.clone()]), MultiCharge(vec![0]));
    let lhs = ctx.ribbon_v_apply(m, 1, &u)?;
    let rhs = ctx.apply(&v_operator(m, Flavor::Primed(1)), &u)?;
    let inst = json!({"n": n, "lambda": lambda, "m": m});
    Ok(TheoremReport::new("ribbon", inst, lhs, rhs, false))
}

/// `V_a V_b = V_b V_a` on a vector.
pub fn check_v_commute(ctx: &FockContext, a: usize, b: usize, flavor: Flavor, v: &FockVector) -> Result<bool> {
    let ab = v_operator(a, flavor).compose(&v_operator(b, flavor));
    let ba = v_operator(b, flavor).compose(&v_operator(a, flavor));
    let x = apply_in_order(ctx, &ab, v)?;
    let y = apply_in_order(ctx, &ba, v)?;
    Ok(x == y)
}

/// Applies each product factor by factor in its written order, without
/// the canonical reordering of `OperatorExpr`.
fn apply_in_order(ctx: &FockContext, e: &OperatorExpr, v: &FockVector) -> Result<FockVector> {
    let mut out = FockVector::new(v.charge.clone());
    for (w, c) in e.terms() {
        let mut cur = v.clone();
        for g in w.iter().rev() {
            cur = ctx.apply_generator(g, &cur)?;
        }
        out.add_scaled(&cur, c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mp(parts: &[&[usize]]) -> Multipartition {
        Multipartition::from_slices(parts)
    }

    #[test]
    fn dominance_examples() {
        let r = is_m_dominant(&mp(&[&[2, 2], &[]]), &MultiCharge(vec![2, -2]), 0);
        assert!(r.holds);
        assert_eq!(r.margin, Some(0));
        let r = is_m_dominant(&mp(&[&[2], &[2, 2]]), &MultiCharge(vec![3, -3]), 0);
        assert!(r.holds);
        assert_eq!(r.margin, Some(0));
        let r = is_m_dominant(&mp(&[&[5]]), &MultiCharge(vec![0]), 100);
        assert!(r.holds);
        assert_eq!(r.margin, None);
        assert!(!is_m_dominant(&mp(&[&[2, 2], &[]]), &MultiCharge(vec![0, 0]), 0).holds);
    }

    #[test]
    fn heisenberg_scalar_values() {
        assert_eq!(heisenberg_scalar(fp(2, 2), 1), "q^2+2+q^-2".parse().unwrap());
        assert_eq!(heisenberg_scalar(fp(2, 1), 1), "1+q^-2".parse().unwrap());
        assert_eq!(heisenberg_scalar(fp(3, 1), 2), "2+2*q^-4+2*q^-8".parse().unwrap());
    }

    #[test]
    fn theorem_49_examples() {
        let v = Verifier::new(fp(2, 2));
        let r = v.check_theorem_49(&Multipartition::empty(2), &Partition::from_slice(&[1, 1]), 1, &MultiCharge(vec![2, -2])).unwrap();
        assert!(r.equal, "{}", r.diff);
        assert_eq!(r.lhs.len(), 10);
        let r = v.check_theorem_49(&Multipartition::empty(2), &Partition::empty(), 1, &MultiCharge(vec![2, -2])).unwrap();
        assert!(r.equal);
        let r = v.check_theorem_49(&Multipartition::empty(2), &Partition::from_slice(&[1, 1]), 2, &MultiCharge(vec![3, -3])).unwrap();
        assert!(r.equal, "{}", r.diff);
        assert_eq!(r.rhs.coeff(&mp(&[&[], &[2, 2]])), LaurentRat::one());
        let bad = v.check_theorem_49(&Multipartition::empty(2), &Partition::from_slice(&[1, 1]), 1, &MultiCharge(vec![0, 0]));
        assert!(matches!(bad, Err(Error::Precondition(_))));
    }

    #[test]
    fn theorem_412_examples() {
        let v = Verifier::new(fp(2, 2));
        let r = v.check_theorem_412(&mp(&[&[2, 2], &[]]), &MultiCharge(vec![2, -2])).unwrap();
        assert!(r.equal, "{}", r.diff);
        let r = v.check_theorem_412(&mp(&[&[2], &[2, 2]]), &MultiCharge(vec![3, -3])).unwrap();
        assert!(r.equal, "{}", r.diff);
        assert_eq!(r.lhs.coeff(&mp(&[&[], &[2, 2, 2]])), "-q^-1-q^-3".parse().unwrap());
        let r = v.check_theorem_412(&mp(&[&[1], &[1]]), &MultiCharge(vec![3, -3])).unwrap();
        assert!(r.equal);
        let bad = v.check_theorem_412(&mp(&[&[2, 2], &[]]), &MultiCharge(vec![0, 0]));
        assert!(matches!(bad, Err(Error::Precondition(_))));
    }

    #[test]
    fn operator_identities_on_dominant_grid() {
        let v = Verifier::new(fp(2, 2));
        let s = MultiCharge(vec![6, 0]);
        for lam in [Multipartition::empty(2), mp(&[&[1], &[]]), mp(&[&[], &[1]])] {
            let r = v.check_boson_split(&lam, &s, 1).unwrap();
            assert!(r.equal && !r.exploratory, "{}", r.diff);
            let r = v.check_bracket_sum(&lam, &s, 1).unwrap();
            assert!(r.equal && !r.exploratory, "{}", r.diff);
        }
    }

    #[test]
    fn sector_action_matches_labels() {
        let v = Verifier::new(fp(2, 2));
        let s = MultiCharge(vec![6, 0]);
        for lam in [Multipartition::empty(2), mp(&[&[1], &[]]), mp(&[&[], &[1]])] {
            for j in [1, 2] {
                let r = v.check_sector_action(&lam, &s, j, 1).unwrap();
                assert!(r.equal, "{} j={}: {}", lam, j, r.diff);
            }
        }
    }

    #[test]
    fn v_operators_commute() {
        let ctx = FockContext::new(fp(2, 2));
        let u = FockVector::basis(mp(&[&[1], &[]]), MultiCharge(vec![5, 0]));
        assert!(check_v_commute(&ctx, 1, 2, Flavor::Primed(1), &u).unwrap());
        assert!(check_v_commute(&ctx, 1, 2, Flavor::Bracket(1), &u).unwrap());
        let one = FockContext::new(fp(2, 1));
        let w = FockVector::basis(mp(&[&[1]]), MultiCharge(vec![0]));
        assert!(check_v_commute(&one, 1, 2, Flavor::Plain, &w).unwrap());
    }

    #[test]
    fn small_random_suites_pass() {
        for suite in ["straightening", "sector-exchange", "exchange-stability", "run-exchange", "bar-involution"] {
            let r = run_property_suite(suite, 7, 40).unwrap();
            assert!(r.passed, "{}: {:?}", suite, r.failures);
            assert_eq!(r.cases, 40);
        }
        assert!(run_property_suite("nope", 1, 1).is_err());
    }

    #[test]
    fn shrinking_finds_smaller_case() {
        #[derive(Clone, Debug)]
        struct Big(u32);
        impl Case for Big {
            fn check(&self) -> std::result::Result<(), String> {
                if self.0 >= 3 {
                    Err(format!("{} too big", self.0))
                } else {
                    Ok(())
                }
            }
            fn shrink(&self) -> Vec<Self> {
                if self.0 > 0 {
                    vec![Big(self.0 - 1)]
                } else {
                    vec![]
                }
            }
        }
        let (c, msg) = minimize(Big(9), "9 too big".into());
        assert_eq!(c.0, 3);
        assert_eq!(msg, "3 too big");
    }
}
