//! Closed-form invariant families and triple counts for the n=3 and n=5 cases.
//!
//! Congruences are solved by scanning all residues.

use std::fmt;
use std::str::FromStr;

use crate::enumeration::{key_from_named, ActionParams, NamedSubgroup, SubgroupKey};
use crate::error::{Error, Result};
use crate::fpalgebra::PrimeModulus;
use crate::hgroup::PermGroup;

/// A permutation group with a known invariant family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyCase {
    N3Q1,
    N3Q2,
    N3Q3,
    N3Q4,
    N3Q5,
    N3Q6,
    N3Q7,
    N3Q8,
    N5D3,
    N5K4,
}

impl FamilyCase {
    pub const ALL: [FamilyCase; 10] = [
        FamilyCase::N3Q1,
        FamilyCase::N3Q2,
        FamilyCase::N3Q3,
        FamilyCase::N3Q4,
        FamilyCase::N3Q5,
        FamilyCase::N3Q6,
        FamilyCase::N3Q7,
        FamilyCase::N3Q8,
        FamilyCase::N5D3,
        FamilyCase::N5K4,
    ];

    pub fn n(self) -> usize {
        match self {
            FamilyCase::N5D3 | FamilyCase::N5K4 => 5,
            _ => 3,
        }
    }

    /// Generators in cycle notation on n+1 points.
    pub fn generators(self) -> &'static [&'static str] {
        match self {
            FamilyCase::N3Q1 => &["(3 4)"],
            FamilyCase::N3Q2 => &["(1 2)(3 4)"],
            FamilyCase::N3Q3 => &["(2 3 4)"],
            FamilyCase::N3Q4 => &["(1 2 3 4)"],
            FamilyCase::N3Q5 => &["(1 2)(3 4)", "(1 4)(2 3)"],
            FamilyCase::N3Q6 => &["(1 2)", "(3 4)"],
            FamilyCase::N3Q7 => &["(1 2 3 4)", "(2 4)"],
            FamilyCase::N3Q8 => &["(1 2)(3 4)", "(2 3 4)"],
            FamilyCase::N5D3 => &["(1 2 3)(4 5 6)", "(1 4)(2 6)(3 5)"],
            FamilyCase::N5K4 => &["(3 5)(4 6)", "(1 2)(3 4)(5 6)"],
        }
    }

    pub fn group(self) -> PermGroup {
        PermGroup::from_cycle_strings(self.n() + 1, self.generators()).expect("valid generators")
    }

    pub fn label(self) -> &'static str {
        match self {
            FamilyCase::N3Q1 => "N3_Q1",
            FamilyCase::N3Q2 => "N3_Q2",
            FamilyCase::N3Q3 => "N3_Q3",
            FamilyCase::N3Q4 => "N3_Q4",
            FamilyCase::N3Q5 => "N3_Q5",
            FamilyCase::N3Q6 => "N3_Q6",
            FamilyCase::N3Q7 => "N3_Q7",
            FamilyCase::N3Q8 => "N3_Q8",
            FamilyCase::N5D3 => "N5_D3",
            FamilyCase::N5K4 => "N5_K4",
        }
    }

    /// The case whose group equals `q` as a set of permutations, for m=2.
    pub fn identify(params: &ActionParams, q: &PermGroup) -> Option<FamilyCase> {
        if params.m() != 2 {
            return None;
        }
        Self::ALL
            .into_iter()
            .filter(|c| c.n() == params.n() && q.degree() == c.n() + 1)
            .find(|c| c.group() == *q)
    }
}

impl fmt::Display for FamilyCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for FamilyCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_uppercase().replace('_', "");
        Self::ALL
            .into_iter()
            .find(|c| c.label().replace('_', "") == norm)
            .ok_or_else(|| Error::Parse(format!("unknown case '{s}'")))
    }
}

/// The members of a predicted invariant family at one prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredictedFamily {
    pub case: FamilyCase,
    pub p: PrimeModulus,
    pub members: Vec<NamedSubgroup>,
}

impl PredictedFamily {
    pub fn params(&self) -> ActionParams {
        ActionParams::with_modulus(self.p, self.case.n(), 2).expect("validated at construction")
    }
}

fn roots(p: PrimeModulus, f: impl Fn(i64) -> i64) -> Vec<i64> {
    (1..p.value() as i64).filter(|&s| p.reduce(f(s)) == 0).collect()
}

/// The named members of the invariant family of `case` at `p`.
pub fn predicted_family(case: FamilyCase, p: u64) -> Result<PredictedFamily> {
    let params =
        ActionParams::new(p, case.n(), 2).map_err(|e| Error::InvalidParams(format!("{case} at p = {p}: {e}")))?;
    let pm = params.modulus();
    let p = pm.value() as i64;
    let half = (p - 1) / 2;
    use NamedSubgroup::*;
    let members = match case {
        FamilyCase::N3Q1 => {
            let mut v: Vec<_> = (1..p).map(|l| Single { l }).collect();
            v.push(Pair { r: half, s: half });
            v
        }
        FamilyCase::N3Q2 => {
            let mut v = vec![Single { l: 1 }, Single { l: p - 1 }];
            v.extend((0..p).map(|r| Pair { r, s: p - 1 - r }));
            v
        }
        FamilyCase::N3Q3 => {
            if p == 3 || p % 3 == 2 {
                Vec::new()
            } else {
                roots(pm, |s| s * s + s + 1)
                    .into_iter()
                    .map(|s| {
                        let inv = pm.inv(pm.reduce(1 - s)).expect("s != 1 for p > 3") as i64;
                        Pair { r: s * inv % p, s }
                    })
                    .collect()
            }
        }
        FamilyCase::N3Q4 => {
            let mut v = vec![Pair { r: p - 1, s: 0 }];
            if p % 4 == 1 {
                v.extend(
                    roots(pm, |s| s * s + 2 * s + 2)
                        .into_iter()
                        .map(|s| Pair { r: (s + 1) % p, s }),
                );
            }
            v
        }
        FamilyCase::N3Q5 => vec![Single { l: p - 1 }, Pair { r: 0, s: p - 1 }, Pair { r: p - 1, s: 0 }],
        FamilyCase::N3Q6 => vec![Single { l: 1 }, Single { l: p - 1 }, Pair { r: half, s: half }],
        FamilyCase::N3Q7 => vec![Pair { r: p - 1, s: 0 }],
        FamilyCase::N3Q8 => Vec::new(),
        FamilyCase::N5D3 => {
            let mut v: Vec<_> = roots(pm, |l| l * l + l + 1)
                .into_iter()
                .map(|l| DihedralSingle { l })
                .collect();
            for r in 0..p {
                for s in 0..p {
                    if pm.reduce(r * r + s * s - r * s) == 1 % pm.value() {
                        v.push(DihedralPair { r, s });
                    }
                }
            }
            v
        }
        FamilyCase::N5K4 => {
            if p == 2 {
                (1..=4).map(KleinBar).collect()
            } else {
                let mut v = Vec::new();
                for r in 0..p {
                    for s in 0..p {
                        if r + s == half || r + s == (3 * p - 1) / 2 {
                            v.push(KleinPair { r, s });
                        }
                    }
                }
                v.extend([1, 2, 5, 6].map(Klein));
                v.extend((0..p).map(|r| KleinThree { r }));
                v.extend((0..p).map(|r| KleinFour { r }));
                v
            }
        }
    };
    Ok(PredictedFamily { case, p: pm, members })
}

/// The predicted invariant set as sorted canonical keys.
pub fn predicted_invariant_set(case: FamilyCase, p: u64) -> Result<Vec<SubgroupKey>> {
    let fam = predicted_family(case, p)?;
    let params = fam.params();
    let mut keys = fam
        .members
        .iter()
        .map(|m| key_from_named(&params, m))
        .collect::<Result<Vec<_>>>()?;
    keys.sort_unstable();
    keys.dedup();
    Ok(keys)
}

/// The terms α, β, γ of the dihedral triple count α + β + γ/3.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DihedralTerms {
    pub alpha: u64,
    pub beta: u64,
    pub gamma: u64,
}

pub fn dihedral_terms(p: u64) -> Result<DihedralTerms> {
    let pm = PrimeModulus::new(p)?;
    let alpha = if p % 3 == 2 { 0 } else { 1 };
    let beta = if p == 2 { 1 } else { 2 };
    let p = p as i64;
    let mut gamma = 0;
    for r in 2..=p - 2 {
        for s in 2..r {
            if pm.reduce(r * r + s * s - r * s) == 1 {
                gamma += 1;
            }
        }
    }
    Ok(DihedralTerms { alpha, beta, gamma })
}

/// Closed-form number of inequivalent triples for the n=5 cases.
pub fn predicted_triple_count(case: FamilyCase, p: u64) -> Result<u64> {
    match case {
        FamilyCase::N5D3 => {
            let t = dihedral_terms(p)?;
            if t.gamma % 3 != 0 {
                return Err(Error::InvalidParams(format!("γ = {} is not divisible by 3", t.gamma)));
            }
            Ok(t.alpha + t.beta + t.gamma / 3)
        }
        FamilyCase::N5K4 => {
            PrimeModulus::new(p)?;
            Ok(if p == 2 { 3 } else { p + 4 })
        }
        other => Err(Error::Unsupported(format!("no closed-form triple count for {other}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn named(p: u64, n: usize, s: &str) -> SubgroupKey {
        let params = ActionParams::new(p, n, 2).unwrap();
        key_from_named(&params, &NamedSubgroup::parse(s, n).unwrap()).unwrap()
    }

    fn set(p: u64, n: usize, names: &[&str]) -> Vec<SubgroupKey> {
        let mut v: Vec<_> = names.iter().map(|s| named(p, n, s)).collect();
        v.sort();
        v
    }

    #[test]
    fn small_families() {
        assert_eq!(
            predicted_invariant_set(FamilyCase::N3Q4, 7).unwrap(),
            set(7, 3, &["K(6,0)"])
        );
        assert_eq!(
            predicted_invariant_set(FamilyCase::N3Q6, 5).unwrap(),
            set(5, 3, &["K(1)", "K(4)", "K(2,2)"])
        );
        assert_eq!(
            predicted_invariant_set(FamilyCase::N5D3, 2).unwrap(),
            set(2, 5, &["D3:K(0,1)", "D3:K(1,1)", "D3:K(1,0)"])
        );
        assert_eq!(
            predicted_invariant_set(FamilyCase::N3Q3, 7).unwrap(),
            set(7, 3, &["K(5,2)", "K(1,4)"])
        );
        assert!(predicted_invariant_set(FamilyCase::N3Q1, 2).is_err());
    }

    #[test]
    fn triple_counts() {
        assert_eq!(predicted_triple_count(FamilyCase::N5D3, 31).unwrap(), 7);
        assert_eq!(
            dihedral_terms(5).unwrap(),
            DihedralTerms {
                alpha: 0,
                beta: 2,
                gamma: 0
            }
        );
        assert_eq!(predicted_triple_count(FamilyCase::N5D3, 5).unwrap(), 2);
        assert_eq!(predicted_triple_count(FamilyCase::N5K4, 11).unwrap(), 15);
        assert_eq!(predicted_triple_count(FamilyCase::N5K4, 2).unwrap(), 3);
        assert!(predicted_triple_count(FamilyCase::N3Q1, 5).is_err());
    }

    #[test]
    fn alpha_matches_single_branch() {
        for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 31, 37, 43] {
            let fam = predicted_family(FamilyCase::N5D3, p).unwrap();
            let has_single = fam
                .members
                .iter()
                .any(|m| matches!(m, NamedSubgroup::DihedralSingle { .. }));
            assert_eq!(dihedral_terms(p).unwrap().alpha == 1, has_single, "p={p}");
        }
    }

    #[test]
    fn identify_cases() {
        for case in FamilyCase::ALL {
            let params = ActionParams::new(5, case.n(), 2).unwrap();
            assert_eq!(FamilyCase::identify(&params, &case.group()), Some(case));
            assert_eq!(case.label().parse::<FamilyCase>().unwrap(), case);
        }
        let params = ActionParams::new(5, 3, 2).unwrap();
        let other = PermGroup::from_cycle_strings(4, &["(1 2)"]).unwrap();
        assert_eq!(FamilyCase::identify(&params, &other), None);
    }
}
