//! Acceptance criteria. Each criterion prints one line with its timing;
//! the process exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qfock::canonical::{build_block, build_block_with, canonical_basis, FockBlock, Sign};
use qfock::combinatorics::partitions_of;
use qfock::fock::{s_multi, FockContext, FockVector, MultiCharge};
use qfock::verify::{
    bracket_bar_grid, boson_bar_grid, check_ribbon, run_property_suite, sweep_labels, sweep_theorem_412, Verifier,
};
use qfock::wedge::{labels_to_word, straighten_pair, word_to_labels, FockParams, WedgeEngine, WedgeWord};
use qfock::{LaurentRat, Multipartition};

fn fp(n: usize, l: usize) -> FockParams {
    FockParams::new(n, l).unwrap()
}

fn lr(s: &str) -> LaurentRat {
    s.parse().unwrap()
}

fn mp(parts: &[&[usize]]) -> Multipartition {
    Multipartition::from_slices(parts)
}

fn ch(s: &[i64]) -> MultiCharge {
    MultiCharge(s.to_vec())
}

fn vec_of(charge: &[i64], terms: &[(&[&[usize]], &str)]) -> FockVector {
    let mut v = FockVector::new(ch(charge));
    for (l, c) in terms {
        v.add_term(mp(l), lr(c));
    }
    v
}

fn unitriangular(block: &FockBlock) {
    block.check_unitriangular().unwrap_or_else(|e| panic!("block N={} s={}: {}", block.degree, block.charge, e));
}

fn straightening() {
    let got: BTreeMap<(i64, i64), LaurentRat> =
        straighten_pair(-2, 4, fp(2, 2)).into_iter().map(|(a, b, c)| ((a, b), c)).collect();
    let want: BTreeMap<(i64, i64), LaurentRat> = [((4, -2), lr("q")), ((2, 0), lr("q^2-1"))].into_iter().collect();
    assert_eq!(got, want);

    let got = WedgeEngine::new(fp(2, 2)).normal_order_finite(&[-1, -2, 4]);
    let want: BTreeMap<Vec<i64>, LaurentRat> = [
        (vec![4, -1, -2], lr("-1")),
        (vec![3, 0, -2], lr("-q+q^-1")),
        (vec![2, 0, -1], lr("-q+q^-1")),
    ]
    .into_iter()
    .collect();
    assert_eq!(got, want);
}

fn bijection() {
    let params = fp(2, 3);
    let w = WedgeWord::new(0, vec![6, 3, 2, 1, -2, -4, -5, -7]).unwrap();
    let (lam, s) = word_to_labels(&w, params);
    assert_eq!(s, vec![2, 0, -2]);
    assert_eq!(lam, mp(&[&[], &[1, 1], &[4]]));

    let mut rng = ChaCha8Rng::seed_from_u64(2026);
    for _ in 0..100 {
        let params = fp(rng.gen_range(2..=4), rng.gen_range(1..=4));
        let s: i64 = rng.gen_range(-6..=6);
        let head = rng.gen_range(0..=7usize);
        let mut set = std::collections::BTreeSet::new();
        while set.len() < head {
            set.insert(rng.gen_range(s - head as i64 + 1..=s + 10));
        }
        let w = WedgeWord::new(s, set.into_iter().rev().collect()).unwrap();
        let (lam, charges) = word_to_labels(&w, params);
        assert_eq!(charges.iter().sum::<i64>(), s);
        assert_eq!(labels_to_word(&lam, &charges, params).unwrap(), w, "round trip of {}", w);
    }
}

fn ribbon() {
    let ctx = FockContext::new(fp(3, 1));
    let v = vec_of(&[0], &[(&[&[2]], "1")]);
    // Spins 0, 1, 2, 2, 4, 3 in the order listed.
    let want = vec_of(
        &[0],
        &[
            (&[&[8]], "1"),
            (&[&[5, 2, 1]], "-q^-1"),
            (&[&[4, 3, 1]], "q^-2"),
            (&[&[5, 1, 1, 1]], "q^-2"),
            (&[&[2, 2, 2, 2]], "q^-4"),
            (&[&[3, 3, 1, 1]], "-q^-3"),
        ],
    );
    assert_eq!(ctx.ribbon_v_apply(2, 1, &v).unwrap(), want);
    for n in [2, 3] {
        for size in 0..=5 {
            for lam in partitions_of(size, None) {
                for m in 0..=3 {
                    let r = check_ribbon(n, &lam, m).unwrap();
                    assert!(r.passed(), "n={} {} m={}: diff {}", n, lam, m, r.diff);
                }
            }
        }
    }
}

fn level_one() {
    let params = fp(2, 1);
    let s = ch(&[0]);
    let block = build_block(params, &s, 4).unwrap();
    unitriangular(&block);
    let delta = canonical_basis(&block, Sign::Minus).unwrap();
    let g4 = vec_of(&[0], &[(&[&[4]], "1"), (&[&[3, 1]], "-q^-1"), (&[&[2, 2]], "q^-2")]);
    let g22 = vec_of(&[0], &[(&[&[2, 2]], "1"), (&[&[2, 1, 1]], "-q^-1"), (&[&[1, 1, 1, 1]], "q^-2")]);
    assert_eq!(delta.basis_vector(&mp(&[&[4]])).unwrap(), g4);
    assert_eq!(delta.basis_vector(&mp(&[&[2, 2]])).unwrap(), g22);

    let reports = sweep_theorem_412(params, &s, 6, 4).unwrap();
    assert_eq!(reports.len(), (0..=6).map(|d| partitions_of(d, None).len()).sum::<usize>());
    for r in &reports {
        assert!(r.passed(), "{}: diff {}", r.instance, r.diff);
    }
}

fn higher_level() {
    let params = fp(2, 2);
    let ctx = FockContext::new(params);
    let first = vec_of(
        &[2, -2],
        &[
            (&[&[2, 2], &[]], "1"),
            (&[&[2, 1, 1], &[]], "-q^-1"),
            (&[&[1, 1, 1, 1], &[]], "q^-2"),
            (&[&[2], &[2]], "-q^-1"),
            (&[&[2], &[1, 1]], "q^-2"),
            (&[&[1, 1], &[2]], "q^-2"),
            (&[&[1, 1], &[1, 1]], "-q^-3"),
            (&[&[], &[4]], "q^-2"),
            (&[&[], &[3, 1]], "-q^-3"),
            (&[&[], &[2, 2]], "q^-4"),
        ],
    );
    assert_eq!(first.len(), 10);
    let second = vec_of(
        &[3, -3],
        &[
            (&[&[2], &[2, 2]], "1"),
            (&[&[2], &[2, 1, 1]], "-q^-1"),
            (&[&[2], &[1, 1, 1, 1]], "q^-2"),
            (&[&[1, 1], &[2, 2]], "-q^-1"),
            (&[&[1, 1], &[2, 1, 1]], "q^-2"),
            (&[&[1, 1], &[1, 1, 1, 1]], "-q^-3"),
            (&[&[], &[4, 2]], "-q^-1"),
            (&[&[], &[4, 1, 1]], "q^-2"),
            (&[&[], &[3, 3]], "q^-2"),
            (&[&[], &[3, 1, 1, 1]], "-q^-3"),
            (&[&[], &[2, 2, 2]], "-q^-1-q^-3"),
            (&[&[], &[2, 2, 1, 1]], "q^-2+q^-4"),
            (&[&[], &[2, 1, 1, 1, 1]], "-q^-3"),
            (&[&[], &[1, 1, 1, 1, 1, 1]], "q^-4"),
        ],
    );
    for (check, lam, want) in [
        (mp(&[&[1, 1], &[]]), mp(&[&[2, 2], &[]]), &first),
        (mp(&[&[1], &[1, 1]]), mp(&[&[2], &[2, 2]]), &second),
    ] {
        let s = want.charge.clone();
        let by_operator = ctx.apply(&s_multi(&check), &FockVector::vacuum(s.clone())).unwrap();
        assert_eq!(&by_operator, want);
        let block = build_block(params, &s, lam.size()).unwrap();
        unitriangular(&block);
        let by_solver = canonical_basis(&block, Sign::Minus).unwrap().basis_vector(&lam).unwrap();
        assert_eq!(&by_solver, want);
    }
}

fn main_sweep() {
    let s = ch(&[6, 0]);
    let reports = sweep_theorem_412(fp(2, 2), &s, 4, 4).unwrap();
    assert_eq!(reports.len(), sweep_labels(2, &s, 4).len());
    // Every label of size at most 4 is 0-dominant at this charge.
    assert_eq!(reports.len(), (0..=4).map(|d| qfock::combinatorics::multipartitions_of(d, 2).len()).sum::<usize>());
    for r in &reports {
        assert!(r.passed(), "{}: diff {}", r.instance, r.diff);
    }
}

/// `m (1−q^{−2mn})/(1−q^{−2m}) (1−q^{2mℓ})/(1−q^{2m})`, expanded as finite sums.
fn heisenberg_expected(n: usize, l: usize, m: i32) -> LaurentRat {
    let mut a = LaurentRat::zero();
    for k in 0..n as i32 {
        a = &a + &LaurentRat::q_pow(-2 * m * k);
    }
    let mut b = LaurentRat::zero();
    for k in 0..l as i32 {
        b = &b + &LaurentRat::q_pow(2 * m * k);
    }
    &(&a * &b) * &LaurentRat::from_int_terms([(0, m as i64)])
}

fn heisenberg() {
    for n in [2, 3] {
        for l in [1, 2] {
            for m in [1i64, 2] {
                let s = MultiCharge(vec![0; l]);
                let r = Verifier::new(fp(n, l)).check_heisenberg(m, -m, &s).unwrap();
                assert!(r.passed(), "n={} l={} m={}: diff {}", n, l, m, r.diff);
                assert_eq!(r.lhs, FockVector::vacuum(s).scale(&heisenberg_expected(n, l, m as i32)));
            }
        }
    }
    let r = Verifier::new(fp(2, 2)).check_heisenberg(1, -1, &ch(&[0, 0])).unwrap();
    assert_eq!(r.lhs.coeff(&Multipartition::empty(2)), lr("q^2+2+q^-2"));
}

fn bar_commutation() {
    for (l, s, lam, m) in boson_bar_grid() {
        let r = Verifier::new(fp(2, l)).check_boson_bar(&lam, &s, m).unwrap();
        assert!(r.passed(), "boson: {}", r.instance);
    }
    for (s, lam, j, ranged) in bracket_bar_grid() {
        let r = Verifier::new(fp(2, 2)).check_bracket_bar(&lam, &s, 1, j, ranged).unwrap();
        assert!(r.passed(), "bracket: {}", r.instance);
    }
    for (n, l, s) in [(2, 1, vec![0]), (3, 1, vec![0]), (2, 2, vec![6, 0]), (2, 2, vec![0, 0]), (3, 2, vec![2, -1])] {
        for d in 0..=4 {
            unitriangular(&build_block(fp(n, l), &MultiCharge(s.clone()), d).unwrap());
        }
    }
}

fn section_batteries() {
    for suite in ["sector-exchange", "exchange-stability", "run-exchange"] {
        let a = run_property_suite(suite, 17, 200).unwrap();
        assert_eq!(a.cases, 200, "{}", suite);
        assert!(a.passed, "{}: {:?}", suite, a.failures);
        let b = run_property_suite(suite, 17, 200).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}

fn truncation_stability() {
    for (n, l, s, max) in [(2, 1, vec![0], 6), (3, 1, vec![0], 5), (2, 2, vec![6, 0], 4), (2, 2, vec![0, 0], 4), (3, 2, vec![9, 0], 3)] {
        let params = fp(n, l);
        let s = MultiCharge(s);
        let base = FockContext::new(params);
        let wide = FockContext::with_extra_truncation(params, 1);
        for d in 0..=max {
            let a = build_block_with(&base, &s, d).unwrap();
            let b = build_block_with(&wide, &s, d).unwrap();
            unitriangular(&a);
            unitriangular(&b);
            for sign in [Sign::Minus, Sign::Plus] {
                let x = canonical_basis(&a, sign).unwrap();
                let y = canonical_basis(&b, sign).unwrap();
                assert_eq!(x.to_json(), y.to_json(), "n={} l={} s={} N={} {}", n, l, s, d, sign);
                assert_eq!(x.to_csv(), y.to_csv());
            }
        }
    }
}

fn main() {
    let criteria: [(&str, fn(), Duration); 10] = [
        ("straightening ground truth", straightening, Duration::from_secs(1)),
        ("label bijection and round trips", bijection, Duration::MAX),
        ("ribbon expansion and ribbon = boson", ribbon, Duration::from_secs(10)),
        ("level-one canonical bases", level_one, Duration::from_secs(30)),
        ("higher-level ground truth, both routes", higher_level, Duration::from_secs(60)),
        ("product theorem sweep", main_sweep, Duration::from_secs(600)),
        ("Heisenberg scalar", heisenberg, Duration::from_secs(30)),
        ("bar commutation and unitriangularity", bar_commutation, Duration::MAX),
        ("wedge exchange batteries", section_batteries, Duration::MAX),
        ("truncation stability", truncation_stability, Duration::MAX),
    ];
    let mut failed = 0;
    for (i, (name, f, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f));
        let t = start.elapsed();
        let verdict = match outcome {
            Ok(()) if t <= limit => "PASS".to_string(),
            Ok(()) => format!("FAIL (over the {:?} budget)", limit),
            Err(_) => "FAIL".to_string(),
        };
        if verdict != "PASS" {
            failed += 1;
        }
        println!("criterion {:>2} {:<42} {} in {:.3}s", i + 1, name, verdict, t.as_secs_f64());
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
