//! The built-in verification suite: twelve criteria with exact expected values.
//!
//! Each criterion recomputes its values from scratch and compares them with
//! reference tables. Failures carry a description of every mismatch.

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::classify::{
    act, act_via_matrix, classify_triples, count_orbits_burnside, invariant_set, orbit_partition, TripleMode,
};
use crate::enumeration::{
    brute_force_oracle, count_actions, enumerate_actions, key_from_named, n3_name, ActionParams, NamedSubgroup,
    SubgroupKey, DEFAULT_CANDIDATE_CAP,
};
use crate::error::Result;
use crate::fpalgebra::{is_prime, FpMatrix, PrimeModulus};
use crate::geometry::{fiber_product_model, jacobian_decomposition, quotient_genus, total_genus, MarkedPoints};
use crate::hgroup::{normalizer_in_symmetric, PermGroup, Permutation};
use crate::predictions::{dihedral_terms, predicted_triple_count, FamilyCase};

/// Result of one criterion.
#[derive(Clone, Debug)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] C{:<2} {} ({:.2}s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

pub const CRITERIA: [(u8, &str); 12] = [
    (1, "orbit counts of F(p,3,2) under S4"),
    (2, "sizes of F(p,3,2)"),
    (3, "p=5 orbit representatives"),
    (4, "invariant sets C_p(Q1..Q8)"),
    (5, "dihedral triple counts"),
    (6, "dihedral count formula"),
    (7, "Klein triple counts"),
    (8, "dihedral examples at p=3 and p=2"),
    (9, "Jacobian genus and fixed-point sums"),
    (10, "fiber-product models"),
    (11, "oracle equivalence and randomized properties"),
    (12, "genus formulas"),
];

type Check = Result<(bool, String)>;

/// Runs the criteria with the given ids, in order.
pub fn run_selected(ids: &[u8]) -> Vec<CriterionOutcome> {
    CRITERIA
        .iter()
        .filter(|(id, _)| ids.contains(id))
        .map(|&(id, title)| {
            let start = Instant::now();
            let (mut passed, mut detail) = match run_check(id) {
                Ok(r) => r,
                Err(e) => (false, format!("error: {e}")),
            };
            let elapsed = start.elapsed();
            if let Some(budget) = budget(id) {
                if elapsed > budget {
                    passed = false;
                    detail = format!("{detail}; exceeded the {}s budget", budget.as_secs());
                }
            }
            CriterionOutcome {
                id,
                title,
                passed,
                detail,
                elapsed,
            }
        })
        .collect()
}

pub fn run_all() -> Vec<CriterionOutcome> {
    run_selected(&CRITERIA.map(|(id, _)| id))
}

fn budget(id: u8) -> Option<Duration> {
    match id {
        1 | 9 => Some(Duration::from_secs(10)),
        4 => Some(Duration::from_secs(5)),
        _ => None,
    }
}

fn run_check(id: u8) -> Check {
    match id {
        1 => c1_orbit_table(),
        2 => c2_sizes(),
        3 => c3_representatives(),
        4 => c4_invariant_sets(),
        5 => c5_dihedral(),
        6 => c6_dihedral_formula(),
        7 => c7_klein(),
        8 => c8_dihedral_examples(),
        9 => c9_jacobian(),
        10 => c10_models(),
        11 => c11_oracles(),
        12 => c12_genus(),
        _ => unreachable!("unknown criterion"),
    }
}

struct Mismatches(Vec<String>);

impl Mismatches {
    fn new() -> Self {
        Mismatches(Vec::new())
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.0.push(what());
        }
    }

    fn finish(self, summary: String) -> Check {
        if self.0.is_empty() {
            Ok((true, summary))
        } else {
            Ok((false, self.0.join("; ")))
        }
    }
}

fn n3(p: u64) -> Result<ActionParams> {
    ActionParams::new(p, 3, 2)
}

fn n5(p: u64) -> Result<ActionParams> {
    ActionParams::new(p, 5, 2)
}

fn named(params: &ActionParams, s: &str) -> Result<SubgroupKey> {
    key_from_named(params, &NamedSubgroup::parse(s, params.n())?)
}

fn names(keys: &[SubgroupKey]) -> String {
    let v: Vec<String> = keys
        .iter()
        .map(|k| n3_name(k).map_or_else(|| k.to_string(), |n| n.to_string()))
        .collect();
    format!("{{{}}}", v.join(", "))
}

fn c1_orbit_table() -> Check {
    const TABLE: [(u64, usize); 10] = [
        (3, 2),
        (5, 4),
        (7, 6),
        (11, 10),
        (13, 14),
        (17, 20),
        (19, 24),
        (23, 32),
        (29, 48),
        (113, 580),
    ];
    let s4 = PermGroup::symmetric(4)?;
    let mut bad = Mismatches::new();
    for (p, expected) in TABLE {
        let keys = enumerate_actions(&n3(p)?)?;
        let count = orbit_partition(&keys, &s4)?.count;
        let burnside = count_orbits_burnside(&keys, &s4)?;
        bad.check(count == expected && burnside == expected, || {
            format!("p={p}: partition {count}, Burnside {burnside}, expected {expected}")
        });
    }
    bad.finish("all 10 primes match, partition and Burnside agree".into())
}

fn c2_sizes() -> Check {
    let mut bad = Mismatches::new();
    let n5 = enumerate_actions(&n3(5)?)?.len();
    bad.check(n5 == 27, || format!("|F(5,3,2)| = {n5}, expected 27"));
    let mut tested = 0;
    for p in (3..=113u64).filter(|&p| is_prime(p)) {
        let count = count_actions(&n3(p)?, DEFAULT_CANDIDATE_CAP)?;
        let expected = p * p + p - 3;
        bad.check(count == expected, || format!("p={p}: {count}, expected {expected}"));
        tested += 1;
    }
    bad.finish(format!(
        "|F(5,3,2)| = 27 and p^2+p-3 holds for {tested} primes up to 113"
    ))
}

fn c3_representatives() -> Check {
    let params = n3(5)?;
    let keys = enumerate_actions(&params)?;
    let report = orbit_partition(&keys, &PermGroup::symmetric(4)?)?;
    let mut orbits = BTreeSet::new();
    for name in ["K(0,1)", "K(0,2)", "K(0,4)", "K(1,2)"] {
        let key = named(&params, name)?;
        if let Some(o) = report.orbit_of(&key) {
            orbits.insert(o.representative.clone());
        }
    }
    let ok = report.count == 4 && orbits.len() == 4;
    Ok((
        ok,
        format!(
            "{} orbits; the four named subgroups lie in {} distinct orbits",
            report.count,
            orbits.len()
        ),
    ))
}

/// The stated list for C_p(Q_j), or `Err` if it cannot be evaluated at this p.
fn stated_invariant_list(j: usize, p: i64) -> std::result::Result<Vec<NamedSubgroup>, String> {
    use NamedSubgroup::{Pair, Single};
    let pm = PrimeModulus::new(p as u64).expect("prime");
    let half = (p - 1) / 2;
    let quotient = |s: i64| -> std::result::Result<NamedSubgroup, String> {
        let d = pm.reduce(1 - s);
        let inv = pm.inv(d).ok_or_else(|| format!("s/(1-s) is undefined at s={s}"))?;
        Ok(Pair {
            r: pm.mul(pm.reduce(s), inv) as i64,
            s,
        })
    };
    let roots = |f: &dyn Fn(i64) -> i64| -> Vec<i64> { (1..p).filter(|&s| pm.reduce(f(s)) == 0).collect() };
    Ok(match j {
        1 => {
            let mut v: Vec<_> = (1..p).map(|l| Single { l }).collect();
            v.push(Pair { r: half, s: half });
            v
        }
        2 => {
            let mut v = vec![Single { l: 1 }, Single { l: p - 1 }];
            v.extend((0..p).map(|r| Pair { r, s: p - 1 - r }));
            v
        }
        3 => {
            if p == 3 || p % 3 == 2 {
                Vec::new()
            } else {
                roots(&|s| s * s + s + 1)
                    .into_iter()
                    .map(quotient)
                    .collect::<std::result::Result<_, _>>()?
            }
        }
        4 => {
            let mut v = vec![Pair { r: p - 1, s: 0 }];
            if p % 4 == 1 {
                for s in roots(&|s| s * s + 2 * s + 2) {
                    v.push(quotient(s)?);
                }
            }
            v
        }
        5 => vec![Single { l: p - 1 }, Pair { r: 0, s: p - 1 }, Pair { r: p - 1, s: 0 }],
        6 => vec![Single { l: 1 }, Single { l: p - 1 }, Pair { r: half, s: half }],
        7 => vec![Pair { r: p - 1, s: 0 }],
        _ => Vec::new(),
    })
}

fn c4_invariant_sets() -> Check {
    const CASES: [FamilyCase; 8] = [
        FamilyCase::N3Q1,
        FamilyCase::N3Q2,
        FamilyCase::N3Q3,
        FamilyCase::N3Q4,
        FamilyCase::N3Q5,
        FamilyCase::N3Q6,
        FamilyCase::N3Q7,
        FamilyCase::N3Q8,
    ];
    let mut bad = Mismatches::new();
    let mut cells = 0;
    for p in [3u64, 5, 7] {
        let params = n3(p)?;
        let keys = enumerate_actions(&params)?;
        for (j, case) in CASES.iter().enumerate() {
            let j = j + 1;
            let computed = invariant_set(&keys, &case.group())?;
            match stated_invariant_list(j, p as i64) {
                Err(why) => bad.check(false, || {
                    format!(
                        "p={p} Q{j}: stated list cannot be evaluated ({why}); computed {}",
                        names(&computed)
                    )
                }),
                Ok(list) => {
                    let mut stated = list
                        .iter()
                        .map(|n| key_from_named(&params, n))
                        .collect::<Result<Vec<_>>>()?;
                    stated.sort();
                    stated.dedup();
                    bad.check(stated == computed, || {
                        format!("p={p} Q{j}: stated {}, computed {}", names(&stated), names(&computed))
                    });
                }
            }
            if j == 3 {
                let expect_empty = p == 3 || p % 3 == 2;
                bad.check(computed.is_empty() == expect_empty, || {
                    format!(
                        "p={p} Q3: emptiness {} but expected {expect_empty}",
                        computed.is_empty()
                    )
                });
            }
            cells += 1;
        }
    }
    bad.finish(format!("{cells} (p, Q_j) cells match the stated lists"))
}

const DIHEDRAL_TABLE: [(u64, usize); 9] = [
    (5, 2),
    (7, 3),
    (11, 3),
    (13, 4),
    (17, 4),
    (19, 5),
    (23, 5),
    (29, 6),
    (31, 7),
];

/// Triple count by the exhaustive route where it is feasible, else predicted.
fn direct_count(params: &ActionParams, q: &PermGroup) -> Result<usize> {
    let mode = if params.p() <= 13 {
        TripleMode::Exhaustive
    } else {
        TripleMode::Predicted
    };
    Ok(classify_triples(params, q, mode)?.count)
}

fn c5_dihedral() -> Check {
    let q = FamilyCase::N5D3.group();
    let mut bad = Mismatches::new();
    let order = normalizer_in_symmetric(&q)?.order();
    bad.check(order == 36, || format!("normalizer order {order}, expected 36"));
    let mut exhaustive_time = Duration::ZERO;
    for (p, expected) in DIHEDRAL_TABLE {
        let params = n5(p)?;
        let predicted = classify_triples(&params, &q, TripleMode::Predicted)?;
        bad.check(predicted.count == expected, || {
            format!("p={p}: predicted mode {}, expected {expected}", predicted.count)
        });
        if p <= 13 {
            let start = Instant::now();
            let exhaustive = classify_triples(&params, &q, TripleMode::Exhaustive)?;
            let t = start.elapsed();
            if p == 13 {
                exhaustive_time = t;
            }
            bad.check(exhaustive.orbits == predicted.orbits, || {
                format!(
                    "p={p}: exhaustive mode {} orbits over {} keys, predicted {} over {}",
                    exhaustive.count,
                    exhaustive.key_count(),
                    predicted.count,
                    predicted.key_count()
                )
            });
        }
    }
    bad.check(exhaustive_time < Duration::from_secs(60), || {
        format!("exhaustive p=13 took {:.1}s", exhaustive_time.as_secs_f64())
    });
    bad.finish(format!(
        "9 primes match, modes agree for p <= 13, |N| = 36, exhaustive p=13 in {:.1}s",
        exhaustive_time.as_secs_f64()
    ))
}

fn c6_dihedral_formula() -> Check {
    let q = FamilyCase::N5D3.group();
    let mut bad = Mismatches::new();
    for (p, _) in DIHEDRAL_TABLE {
        let t = dihedral_terms(p)?;
        let formula = predicted_triple_count(FamilyCase::N5D3, p)? as usize;
        let direct = direct_count(&n5(p)?, &q)?;
        bad.check(formula == direct, || {
            format!(
                "p={p}: α+β+γ/3 = {}+{}+{}/3 = {formula}, direct {direct}",
                t.alpha, t.beta, t.gamma
            )
        });
    }
    bad.finish("α+β+γ/3 equals the direct count for all 9 primes".into())
}

fn c7_klein() -> Check {
    let q = FamilyCase::N5K4.group();
    let mut bad = Mismatches::new();
    let order = normalizer_in_symmetric(&q)?.order();
    bad.check(order == 16, || format!("normalizer order {order}, expected 16"));
    for p in [2u64, 3, 5, 7, 11, 13] {
        let params = n5(p)?;
        let expected = if p == 2 { 3 } else { p as usize + 4 };
        let exhaustive = classify_triples(&params, &q, TripleMode::Exhaustive)?;
        let predicted = classify_triples(&params, &q, TripleMode::Predicted)?;
        bad.check(exhaustive.count == expected, || {
            format!("p={p}: exhaustive {}, expected {expected}", exhaustive.count)
        });
        bad.check(exhaustive.orbits == predicted.orbits, || {
            format!("p={p}: exhaustive and predicted modes differ")
        });
    }
    bad.finish("counts 3 and p+4 hold, modes agree, |N| = 16".into())
}

fn c8_dihedral_examples() -> Check {
    let q = FamilyCase::N5D3.group();
    let mut bad = Mismatches::new();
    for (p, size, classes) in [(3u64, 7usize, 3usize), (2, 3, 1)] {
        let r = classify_triples(&n5(p)?, &q, TripleMode::Exhaustive)?;
        bad.check(r.key_count() == size && r.count == classes, || {
            format!(
                "p={p}: {} groups in {} classes, expected {size} in {classes}",
                r.key_count(),
                r.count
            )
        });
    }
    bad.finish("p=3: 7 groups in 3 classes; p=2: 3 groups in 1 class".into())
}

fn c9_jacobian() -> Check {
    let mut bad = Mismatches::new();
    let mut total = 0;
    let points = MarkedPoints::quartic();
    for p in [3u64, 5, 7] {
        for key in enumerate_actions(&n3(p)?)? {
            let r = jacobian_decomposition(&key, &points)?;
            let fixed: u64 = r.fixed_counts().iter().sum();
            let g = (p - 1) * (p - 1);
            bad.check(r.genus_sum == g && r.total_genus == g && fixed == 4 * p, || {
                format!("{key}: Σγ = {}, Σc = {fixed}", r.genus_sum)
            });
            total += 1;
        }
    }
    bad.finish(format!("Σγ = (p-1)^2 and Σc = 4p for all {total} keys"))
}

fn c10_models() -> Check {
    let mut bad = Mismatches::new();
    let points = MarkedPoints::quartic();
    let primes: Vec<u64> = (3..=31).filter(|&p| is_prime(p)).collect();
    for &p in &primes {
        let params = n3(p)?;
        let key = named(&params, &format!("K(0,{})", p - 1))?;
        let text = fiber_product_model(&key, &points)?.render();
        let expected = format!("y1^{p} = x*(x - 1)^{} ; y2^{p} = (x - λ)^{}", p - 1, p - 1);
        bad.check(text == expected, || format!("p={p}: '{text}'"));
    }
    let table = [
        ("K(0,1)", "y1^5 = x*(x - 1)*(x - λ)^3 ; y2^5 = (x - λ)^4"),
        ("K(0,2)", "y1^5 = x*(x - 1)^2*(x - λ)^2 ; y2^5 = (x - λ)^4"),
        ("K(0,4)", "y1^5 = x*(x - 1)^4 ; y2^5 = (x - λ)^4"),
        ("K(1,2)", "y1^5 = x*(x - 1)^2*(x - λ)^2 ; y2^5 = (x - 1)*(x - λ)^3"),
    ];
    let params = n3(5)?;
    for (name, expected) in table {
        let text = fiber_product_model(&named(&params, name)?, &points)?.render();
        bad.check(text == expected, || format!("{name}: '{text}', expected '{expected}'"));
    }
    bad.finish(format!(
        "K(0,p-1) for {} primes and the four p=5 rows match",
        primes.len()
    ))
}

fn random_perm(rng: &mut StdRng, degree: usize) -> Permutation {
    let mut images: Vec<usize> = (1..=degree).collect();
    for i in (1..degree).rev() {
        images.swap(i, rng.gen_range(0..=i));
    }
    Permutation::from_images(&images).expect("shuffle is a bijection")
}

fn c11_oracles() -> Check {
    const TRIALS: usize = 1000;
    let mut bad = Mismatches::new();
    for (p, n, m) in [(3u64, 3usize, 2usize), (5, 3, 2), (2, 5, 2), (3, 4, 2)] {
        let params = ActionParams::new(p, n, m)?;
        let fast = enumerate_actions(&params)?;
        let oracle = brute_force_oracle(&params)?;
        bad.check(fast == oracle, || {
            format!(
                "({p},{n},{m}): enumeration {} keys, oracle {}",
                fast.len(),
                oracle.len()
            )
        });
    }
    let configs: Vec<(ActionParams, Vec<SubgroupKey>)> = [
        (3u64, 3usize, 2usize),
        (5, 3, 2),
        (2, 5, 2),
        (3, 4, 2),
        (3, 4, 3),
        (7, 3, 2),
        (2, 6, 3),
    ]
    .iter()
    .map(|&(p, n, m)| {
        let params = ActionParams::new(p, n, m)?;
        Ok((params, enumerate_actions(&params)?))
    })
    .collect::<Result<_>>()?;
    for (params, keys) in configs.iter().take(6) {
        let d = params.degree();
        let groups = [
            PermGroup::symmetric(d)?,
            PermGroup::generate(d, &[Permutation::parse_cycles("(1 2)", d)?])?,
            PermGroup::generate(d, &[])?,
        ];
        for g in &groups {
            let part = orbit_partition(keys, g)?.count;
            let burn = count_orbits_burnside(keys, g)?;
            bad.check(part == burn, || {
                format!("{params}, |G|={}: partition {part}, Burnside {burn}", g.order())
            });
        }
    }
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut failures = [0usize; 4];
    for _ in 0..TRIALS {
        let (params, keys) = &configs[rng.gen_range(0..configs.len())];
        let key = &keys[rng.gen_range(0..keys.len())];
        let d = params.degree();
        let (s, t) = (random_perm(&mut rng, d), random_perm(&mut rng, d));
        let composed = act(&s.compose(&t)?, key)?;
        let stepwise = act(&s, &act(&t, key)?)?;
        let matrix = act_via_matrix(&s, key)?;
        if composed != stepwise || act(&Permutation::identity(d), key)? != *key || matrix != act(&s, key)? {
            failures[0] += 1;
        }
        let (rows, cols) = (rng.gen_range(1..=5), rng.gen_range(1..=6));
        let pm = params.modulus();
        let data: Vec<u16> = (0..rows * cols).map(|_| rng.gen_range(0..pm.value())).collect();
        let a = FpMatrix::from_residues(pm, rows, cols, data)?;
        let (r, rank) = a.rref();
        if r.rref() != (r.clone(), rank) || rank != a.rank() {
            failures[1] += 1;
        }
        let image = act(&s, key)?;
        if SubgroupKey::from_theta(*params, image.theta()).ok().as_ref() != Some(&image)
            || keys.binary_search(&image).is_err()
        {
            failures[2] += 1;
        }
        let dim = rng.gen_range(0..params.m());
        let sub: Vec<u16> = (0..dim * params.m()).map(|_| rng.gen_range(0..pm.value())).collect();
        let sub = FpMatrix::from_residues(pm, dim, params.m(), sub)?;
        if quotient_genus(key, &sub).is_err() {
            failures[3] += 1;
        }
    }
    let labels = [
        "action axioms",
        "rref idempotence",
        "admissibility under act",
        "genus integrality",
    ];
    for (label, &f) in labels.iter().zip(&failures) {
        bad.check(f == 0, || format!("{label}: {f} of {TRIALS} trials failed"));
    }
    bad.finish(format!(
        "oracle equals enumeration at 4 configurations; Burnside = partition; 4 properties x {TRIALS} trials clean"
    ))
}

fn c12_genus() -> Check {
    let mut bad = Mismatches::new();
    let primes: Vec<u64> = (2..=31).filter(|&p| is_prime(p)).collect();
    for &p in &primes {
        if p >= 3 {
            let g = total_genus(p, 3, 2)?;
            bad.check(g == (p - 1) * (p - 1), || format!("(p,3,2) p={p}: {g}"));
        }
        let g = total_genus(p, 5, 2)?;
        bad.check(g == (p - 1) * (2 * p - 1), || format!("(p,5,2) p={p}: {g}"));
        for n in 2..=6u64 {
            if (n - 1) * (p - 1) <= 2 {
                continue;
            }
            // Riemann–Hurwitz for H = Z_p^n over n+1 points of order p.
            let twice = p.pow(n as u32 - 1) as i128 * ((n as i128 + 1) * (p as i128 - 1) - 2 * p as i128) + 2;
            let g = total_genus(p, n, n)? as i128;
            bad.check(2 * g == twice, || {
                format!("Fermat p={p} n={n}: {g}, expected {}", twice / 2)
            });
        }
    }
    let g = total_genus(2, 5, 2)?;
    bad.check(g == 3, || format!("(2,5,2): {g}"));
    bad.finish(format!("all formulas hold for {} primes up to 31", primes.len()))
}
