//! Orbits of admissible subgroups under permutation groups.
//!
//! The group S_{n+1} acts on F(p,n,m) through Φ_σ. Orbits under S_{n+1}
//! count topologically inequivalent actions; orbits of the Q-invariant keys
//! under the normalizer of Q count inequivalent triples.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::enumeration::{enumerate_filtered, ActionParams, SubgroupKey};
use crate::error::{Error, Result};
use crate::hgroup::{normalizer_in_symmetric, perm_to_matrix, PermGroup, Permutation};
use crate::predictions::{predicted_invariant_set, FamilyCase};

/// Default candidate cap for exhaustive triple classification.
pub const TRIPLES_DEFAULT_CAP: u128 = 30_000_000;

/// Key of Φ_σ(K).
pub fn act(sigma: &Permutation, key: &SubgroupKey) -> Result<SubgroupKey> {
    key.act(sigma)
}

/// Key of Φ_σ(K) computed as rref(θ · M_σ^{-1}).
pub fn act_via_matrix(sigma: &Permutation, key: &SubgroupKey) -> Result<SubgroupKey> {
    let params = key.params();
    let m = perm_to_matrix(sigma, params.modulus(), params.n())?.matrix;
    let theta = key.theta().mul(&m.inverse()?)?;
    SubgroupKey::from_theta(params, &theta)
}

/// One orbit, with its least member as representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub representative: SubgroupKey,
    pub members: Vec<SubgroupKey>,
}

impl Orbit {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// A partition of a key set into orbits, ordered by representative.
#[derive(Clone, Debug)]
pub struct OrbitReport {
    pub params: ActionParams,
    pub group: PermGroup,
    pub orbits: Vec<Orbit>,
    pub count: usize,
}

impl OrbitReport {
    /// The orbit containing `key`, if any.
    pub fn orbit_of(&self, key: &SubgroupKey) -> Option<&Orbit> {
        self.orbits.iter().find(|o| o.members.binary_search(key).is_ok())
    }

    /// Total number of keys.
    pub fn key_count(&self) -> usize {
        self.orbits.iter().map(Orbit::size).sum()
    }
}

fn check_inputs(keys: &[SubgroupKey], group: &PermGroup) -> Result<Option<ActionParams>> {
    let Some(first) = keys.first() else {
        return Ok(None);
    };
    let params = first.params();
    if let Some(k) = keys.iter().find(|k| k.params() != params) {
        return Err(Error::InvalidParams(format!(
            "keys with different parameters: {params} and {}",
            k.params()
        )));
    }
    if group.degree() != params.degree() {
        return Err(Error::DegreeMismatch {
            expected: params.degree(),
            found: group.degree(),
        });
    }
    Ok(Some(params))
}

fn sorted_unique(keys: &[SubgroupKey]) -> Vec<SubgroupKey> {
    let mut v = keys.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// Partitions `keys` into orbits under `group`, applying generators only.
pub fn orbit_partition(keys: &[SubgroupKey], group: &PermGroup) -> Result<OrbitReport> {
    let params = match check_inputs(keys, group)? {
        Some(p) => p,
        None => {
            return Err(Error::InvalidParams("empty key set has no parameters".into()));
        }
    };
    orbit_partition_with(params, keys, group)
}

/// As [`orbit_partition`], accepting an empty set for known parameters.
pub fn orbit_partition_with(params: ActionParams, keys: &[SubgroupKey], group: &PermGroup) -> Result<OrbitReport> {
    if let Some(found) = check_inputs(keys, group)? {
        if found != params {
            return Err(Error::InvalidParams(format!("keys are for {found}, not {params}")));
        }
    } else if group.degree() != params.degree() {
        return Err(Error::DegreeMismatch {
            expected: params.degree(),
            found: group.degree(),
        });
    }
    let keys = sorted_unique(keys);
    let inverses: Vec<Permutation> = group.generators().iter().map(|g| g.inverse()).collect();
    let mut visited = vec![false; keys.len()];
    let mut orbits = Vec::new();
    for start in 0..keys.len() {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        let mut members = vec![keys[start].clone()];
        let mut i = 0;
        while i < members.len() {
            for inv in &inverses {
                let image = members[i].act_unchecked(inv);
                let idx = keys
                    .binary_search(&image)
                    .map_err(|_| Error::ActionLeavesSet(format!("{} is not in the input set", image)))?;
                if !visited[idx] {
                    visited[idx] = true;
                    members.push(image);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        orbits.push(Orbit {
            representative: members[0].clone(),
            members,
        });
    }
    let count = orbits.len();
    Ok(OrbitReport {
        params,
        group: group.clone(),
        orbits,
        count,
    })
}

/// Number of orbits by Burnside's lemma over all elements of `group`.
pub fn count_orbits_burnside(keys: &[SubgroupKey], group: &PermGroup) -> Result<usize> {
    if check_inputs(keys, group)?.is_none() {
        return Ok(0);
    }
    let keys = sorted_unique(keys);
    let set: HashSet<&SubgroupKey> = keys.iter().collect();
    for g in group.generators() {
        let inv = g.inverse();
        if let Some(k) = keys.par_iter().find_any(|k| !set.contains(&k.act_unchecked(&inv))) {
            return Err(Error::ActionLeavesSet(format!("{g} moves {k} outside the input set")));
        }
    }
    let fixed: usize = group
        .elements()
        .par_iter()
        .map(|g| {
            let inv = g.inverse();
            keys.iter().filter(|k| k.act_unchecked(&inv) == **k).count()
        })
        .sum();
    let order = group.order();
    if fixed % order != 0 {
        return Err(Error::ActionLeavesSet(format!(
            "fixed-point total {fixed} is not divisible by |G| = {order}"
        )));
    }
    Ok(fixed / order)
}

/// Whether every generator of `q` fixes `key`.
pub fn is_invariant(key: &SubgroupKey, q: &PermGroup) -> bool {
    q.generators().iter().all(|g| key.act_unchecked(&g.inverse()) == *key)
}

/// Keys fixed by every generator of `q`, sorted.
pub fn invariant_set(keys: &[SubgroupKey], q: &PermGroup) -> Result<Vec<SubgroupKey>> {
    check_inputs(keys, q)?;
    let mut out: Vec<SubgroupKey> = keys.par_iter().filter(|k| is_invariant(k, q)).cloned().collect();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Source of the invariant keys for [`classify_triples`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TripleMode {
    /// Filter the full enumeration of F(p,n,m).
    Exhaustive,
    /// Use the closed-form family matching `q`, re-verifying each member.
    Predicted,
}

/// Orbits of the `q`-invariant keys under the normalizer of `q`.
pub fn classify_triples(params: &ActionParams, q: &PermGroup, mode: TripleMode) -> Result<OrbitReport> {
    classify_triples_capped(params, q, mode, TRIPLES_DEFAULT_CAP)
}

pub fn classify_triples_capped(
    params: &ActionParams,
    q: &PermGroup,
    mode: TripleMode,
    cap: u128,
) -> Result<OrbitReport> {
    if q.degree() != params.degree() {
        return Err(Error::DegreeMismatch {
            expected: params.degree(),
            found: q.degree(),
        });
    }
    let normalizer = normalizer_in_symmetric(q)?;
    let invariant = match mode {
        TripleMode::Exhaustive => {
            let inverses: Vec<Permutation> = q.generators().iter().map(|g| g.inverse()).collect();
            enumerate_filtered(params, cap, |k| inverses.iter().all(|inv| k.act_unchecked(inv) == *k))?
        }
        TripleMode::Predicted => {
            let case = FamilyCase::identify(params, q)
                .ok_or_else(|| Error::Unsupported(format!("no predicted family for this group at {params}")))?;
            let keys = predicted_invariant_set(case, params.p() as u64)?;
            if let Some(bad) = keys.iter().find(|k| !is_invariant(k, q)) {
                return Err(Error::ActionLeavesSet(format!(
                    "predicted member {bad} is not invariant"
                )));
            }
            keys
        }
    };
    orbit_partition_with(*params, &invariant, &normalizer)
}
