//! The parameter set F(p,n,m) of admissible subgroups K ≤ H and its canonical keys.
//!
//! A subgroup K with H/K ≅ Z_p^m is stored through a quotient map
//! θ: H → Z_p^m with kernel K, written as an m×n matrix in reduced
//! row-echelon form. Two keys are equal exactly when the subgroups are.
//!
//! K is admissible when no generator a_j lies in K, that is, every column of
//! θ is nonzero and so is the implied column θ(a_{n+1}) = -(sum of columns).

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fpalgebra::{is_prime, FpMatrix, FpVector, PrimeModulus};
use crate::hgroup::{next_permutation, Permutation};

/// Default limit on the number of rref candidates an enumeration may visit.
pub const DEFAULT_CANDIDATE_CAP: u128 = 1_000_000_000;

/// Limit on the number of matrices scanned by [`brute_force_oracle`].
pub const ORACLE_CAP: u128 = 10_000_000;

/// The triple (p, n, m): Z_p^m-actions of signature (0; p^{n+1}).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActionParams {
    p: PrimeModulus,
    n: usize,
    m: usize,
}

impl ActionParams {
    pub fn new(p: u64, n: usize, m: usize) -> Result<Self> {
        if p >= 4 && !is_prime(p) {
            return Err(Error::CompositeModulus(p));
        }
        Self::with_modulus(PrimeModulus::new(p)?, n, m)
    }

    pub fn with_modulus(p: PrimeModulus, n: usize, m: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParams(format!("n = {n}, need n >= 2")));
        }
        if n >= u8::MAX as usize {
            return Err(Error::InvalidParams(format!("n = {n} is too large")));
        }
        if m == 0 || m > n {
            return Err(Error::InvalidParams(format!("m = {m}, need 1 <= m <= n = {n}")));
        }
        if (n - 1) * (p.value() as usize - 1) <= 2 {
            return Err(Error::InvalidParams(format!(
                "signature (0; {}^{}) is not hyperbolic",
                p.value(),
                n + 1
            )));
        }
        Ok(ActionParams { p, n, m })
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.p
    }

    pub fn p(&self) -> u16 {
        self.p.value()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of distinguished generators, n+1.
    pub fn degree(&self) -> usize {
        self.n + 1
    }
}

impl fmt::Display for ActionParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} n={} m={}", self.p(), self.n, self.m)
    }
}

/// Why a quotient matrix fails admissibility, if it does.
fn admissibility_violation(theta: &FpMatrix) -> Option<String> {
    let (m, n) = (theta.rows(), theta.cols());
    for c in 0..n {
        if (0..m).all(|r| theta.get(r, c) == 0) {
            return Some(format!("a{} lies in K", c + 1));
        }
    }
    if !admissible_implied(theta.data(), m, n, theta.modulus()) {
        return Some(format!("a{} lies in K", n + 1));
    }
    None
}

#[inline]
fn admissible_implied(data: &[u16], m: usize, n: usize, p: PrimeModulus) -> bool {
    (0..m).any(|r| data[r * n..(r + 1) * n].iter().fold(0u16, |acc, &x| p.add(acc, x)) != 0)
}

#[inline]
fn admissible_data(data: &[u16], m: usize, n: usize, p: PrimeModulus) -> bool {
    (0..n).all(|c| (0..m).any(|r| data[r * n + c] != 0)) && admissible_implied(data, m, n, p)
}

/// Canonical key of an admissible subgroup: θ in reduced row-echelon form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubgroupKey {
    params: ActionParams,
    theta: FpMatrix,
}

impl SubgroupKey {
    /// Canonicalizes `theta` and checks rank and admissibility.
    pub fn from_theta(params: ActionParams, theta: &FpMatrix) -> Result<Self> {
        if theta.modulus() != params.modulus() {
            return Err(Error::ModulusMismatch(params.p(), theta.modulus().value()));
        }
        if theta.rows() != params.m || theta.cols() != params.n {
            return Err(Error::DimensionMismatch(format!(
                "quotient matrix is {}x{}, expected {}x{}",
                theta.rows(),
                theta.cols(),
                params.m,
                params.n
            )));
        }
        let (r, rank) = theta.rref();
        if rank != params.m {
            return Err(Error::NotAdmissible(format!(
                "quotient matrix has rank {rank}, expected {}",
                params.m
            )));
        }
        if let Some(why) = admissibility_violation(&r) {
            return Err(Error::NotAdmissible(why));
        }
        Ok(SubgroupKey { params, theta: r })
    }

    pub(crate) fn from_canonical(params: ActionParams, theta: FpMatrix) -> Self {
        debug_assert!(theta.is_rref() && admissibility_violation(&theta).is_none());
        SubgroupKey { params, theta }
    }

    pub fn params(&self) -> ActionParams {
        self.params
    }

    pub fn theta(&self) -> &FpMatrix {
        &self.theta
    }

    /// Basis of K as rows, in reduced row-echelon form.
    pub fn kernel(&self) -> FpMatrix {
        self.theta.kernel_basis()
    }

    /// θ(a_j) for `1 <= j <= n+1`.
    pub fn image(&self, j: usize) -> FpVector {
        let n = self.params.n;
        if j <= n {
            self.theta.column(j - 1)
        } else {
            let p = self.params.p;
            let entries: Vec<i64> = (0..self.params.m)
                .map(|r| -(self.theta.row(r).iter().map(|&x| x as i64).sum::<i64>()))
                .collect();
            FpVector::from_i64(p, &entries)
        }
    }

    /// θ(a_1), …, θ(a_{n+1}).
    pub fn images(&self) -> Vec<FpVector> {
        (1..=self.params.n + 1).map(|j| self.image(j)).collect()
    }

    /// Key of Φ_σ(K): column i of the new quotient map is θ(a_{σ^{-1}(i)}).
    pub fn act(&self, sigma: &Permutation) -> Result<SubgroupKey> {
        if sigma.degree() != self.params.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.params.degree(),
                found: sigma.degree(),
            });
        }
        Ok(self.act_unchecked(&sigma.inverse()))
    }

    /// As [`SubgroupKey::act`], taking σ^{-1} directly.
    pub(crate) fn act_unchecked(&self, sigma_inv: &Permutation) -> SubgroupKey {
        let (m, n) = (self.params.m, self.params.n);
        let p = self.params.p;
        let inv = sigma_inv.zero_based();
        let mut data = vec![0u16; m * n];
        for r in 0..m {
            let row = self.theta.row(r);
            let implied = p.neg(row.iter().fold(0u16, |acc, &x| p.add(acc, x)));
            for i in 0..n {
                let src = inv[i] as usize;
                data[r * n + i] = if src == n { implied } else { row[src] };
            }
        }
        let mut theta = FpMatrix::from_residues(p, m, n, data).expect("residues in range");
        theta.rref_in_place();
        SubgroupKey {
            params: self.params,
            theta,
        }
    }

    /// Rows of θ joined by ';', entries by ','.
    pub fn theta_string(&self) -> String {
        self.theta.to_entry_string()
    }

    /// Parses a key from `p/n/m:theta`.
    pub fn parse(s: &str) -> Result<SubgroupKey> {
        let (head, body) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("missing ':' in key '{s}'")))?;
        let nums: Vec<usize> = head
            .split('/')
            .map(|x| {
                x.trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad parameter '{x}' in key '{s}'")))
            })
            .collect::<Result<_>>()?;
        let [p, n, m] = nums[..] else {
            return Err(Error::Parse(format!("expected p/n/m in key '{s}'")));
        };
        let params = ActionParams::new(p as u64, n, m)?;
        Self::parse_theta(params, body)
    }

    /// Parses the theta part of a key for known parameters.
    pub fn parse_theta(params: ActionParams, s: &str) -> Result<SubgroupKey> {
        let theta = FpMatrix::parse_entry_string(params.modulus(), s)?;
        let key = Self::from_theta(params, &theta)?;
        if key.theta != theta {
            return Err(Error::Parse(format!("'{s}' is not in reduced row-echelon form")));
        }
        Ok(key)
    }
}

impl fmt::Display for SubgroupKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{}/{}:{}",
            self.params.p(),
            self.params.n,
            self.params.m,
            self.theta_string()
        )
    }
}

impl fmt::Debug for SubgroupKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubgroupKey({self})")
    }
}

/// The Gaussian binomial [n, m]_p, saturating at `u128::MAX`.
pub fn gaussian_binomial(p: u64, n: usize, m: usize) -> u128 {
    if m > n {
        return 0;
    }
    // Sum over pivot sets of p^(free entries); avoids division.
    let mut total: u128 = 0;
    for_each_combination(n, m, |pivots| {
        let free: u32 = pivots
            .iter()
            .enumerate()
            .map(|(i, &c)| (n - c - 1 - (m - i - 1)) as u32)
            .sum();
        total = total.saturating_add((p as u128).saturating_pow(free));
    });
    total
}

fn for_each_combination(n: usize, m: usize, mut f: impl FnMut(&[usize])) {
    if m > n {
        return;
    }
    let mut c: Vec<usize> = (0..m).collect();
    loop {
        f(&c);
        let Some(i) = (0..m).rev().find(|&i| c[i] < i + n - m) else {
            return;
        };
        c[i] += 1;
        for j in i + 1..m {
            c[j] = c[j - 1] + 1;
        }
    }
}

/// Estimated number of candidates visited by [`enumerate_actions`].
pub fn candidate_estimate(params: &ActionParams) -> u128 {
    gaussian_binomial(params.p() as u64, params.n, params.m)
}

fn check_scale(params: &ActionParams, cap: u128) -> Result<()> {
    let estimate = candidate_estimate(params);
    if estimate > cap {
        return Err(Error::ScaleCap { estimate, cap });
    }
    Ok(())
}

/// A pivot pattern: pivot columns and the flat positions of free entries.
struct Pattern {
    pivots: Vec<usize>,
    free: Vec<usize>,
}

fn patterns(params: &ActionParams) -> Vec<Pattern> {
    let (n, m) = (params.n, params.m);
    let mut out = Vec::new();
    for_each_combination(n, m, |pivots| {
        // A zero first column is never admissible.
        if pivots[0] != 0 {
            return;
        }
        let free = (0..m)
            .flat_map(|r| {
                (pivots[r] + 1..n)
                    .filter(|c| !pivots.contains(c))
                    .map(move |c| r * n + c)
            })
            .collect();
        out.push(Pattern {
            pivots: pivots.to_vec(),
            free,
        });
    });
    out
}

/// Visits every admissible rref matrix of one pattern whose first free entry is `first`.
fn scan_block(params: &ActionParams, pat: &Pattern, first: Option<u16>, f: &mut impl FnMut(&[u16])) {
    let (n, m) = (params.n, params.m);
    let p = params.p;
    let pv = p.value();
    let mut data = vec![0u16; m * n];
    for (r, &c) in pat.pivots.iter().enumerate() {
        data[r * n + c] = 1;
    }
    let odometer: &[usize] = match first {
        Some(v) => {
            data[pat.free[0]] = v;
            &pat.free[1..]
        }
        None => &pat.free,
    };
    loop {
        if admissible_data(&data, m, n, p) {
            f(&data);
        }
        let mut i = odometer.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            let pos = odometer[i];
            data[pos] += 1;
            if data[pos] < pv {
                break;
            }
            data[pos] = 0;
        }
    }
}

fn blocks(params: &ActionParams, pats: &[Pattern]) -> Vec<(usize, Option<u16>)> {
    let mut out = Vec::new();
    for (i, pat) in pats.iter().enumerate() {
        if pat.free.is_empty() {
            out.push((i, None));
        } else {
            out.extend((0..params.p()).map(|v| (i, Some(v))));
        }
    }
    out
}

/// All of F(p,n,m), sorted, under the default candidate cap.
pub fn enumerate_actions(params: &ActionParams) -> Result<Vec<SubgroupKey>> {
    enumerate_filtered(params, DEFAULT_CANDIDATE_CAP, |_| true)
}

/// The keys of F(p,n,m) accepted by `keep`, sorted; the full set is never held in memory.
pub fn enumerate_filtered<F>(params: &ActionParams, cap: u128, keep: F) -> Result<Vec<SubgroupKey>>
where
    F: Fn(&SubgroupKey) -> bool + Sync,
{
    check_scale(params, cap)?;
    let pats = patterns(params);
    let params = *params;
    let parts: Vec<Vec<SubgroupKey>> = blocks(&params, &pats)
        .into_par_iter()
        .map(|(i, first)| {
            let mut out = Vec::new();
            scan_block(&params, &pats[i], first, &mut |data| {
                let theta =
                    FpMatrix::from_residues(params.p, params.m, params.n, data.to_vec()).expect("residues in range");
                let key = SubgroupKey::from_canonical(params, theta);
                if keep(&key) {
                    out.push(key);
                }
            });
            out
        })
        .collect();
    let mut keys: Vec<SubgroupKey> = parts.into_iter().flatten().collect();
    keys.sort_unstable();
    Ok(keys)
}

/// |F(p,n,m)| without materializing the keys.
pub fn count_actions(params: &ActionParams, cap: u128) -> Result<u64> {
    check_scale(params, cap)?;
    let pats = patterns(params);
    let params = *params;
    Ok(blocks(&params, &pats)
        .into_par_iter()
        .map(|(i, first)| {
            let mut count = 0u64;
            scan_block(&params, &pats[i], first, &mut |_| count += 1);
            count
        })
        .sum())
}

/// Independent enumeration over every m×n matrix; for cross-checking only.
pub fn brute_force_oracle(params: &ActionParams) -> Result<Vec<SubgroupKey>> {
    let (n, m) = (params.n, params.m);
    let p = params.p;
    let total = (p.value() as u128).saturating_pow((m * n) as u32);
    if total > ORACLE_CAP {
        return Err(Error::ScaleCap {
            estimate: total,
            cap: ORACLE_CAP,
        });
    }
    let mut seen = BTreeSet::new();
    let mut data = vec![0u16; m * n];
    loop {
        let theta = FpMatrix::from_residues(p, m, n, data.clone()).expect("residues in range");
        let (r, rank) = theta.rref();
        if rank == m && admissibility_violation(&r).is_none() {
            seen.insert(SubgroupKey {
                params: *params,
                theta: r,
            });
        }
        let mut i = data.len();
        loop {
            if i == 0 {
                return Ok(seen.into_iter().collect());
            }
            i -= 1;
            data[i] += 1;
            if data[i] < p.value() {
                break;
            }
            data[i] = 0;
        }
    }
}

/// A word in the generators a_1..a_{n+1}, as an exponent per generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    exponents: Vec<i64>,
}

impl Word {
    /// From exponents of a_1..a_{n+1}.
    pub fn new(exponents: Vec<i64>) -> Self {
        Word { exponents }
    }

    /// Parses a product like `a1^2 a2 a3^-1` over generators a_1..a_{n+1}.
    pub fn parse(s: &str, n: usize) -> Result<Word> {
        let mut exponents = vec![0i64; n + 1];
        let cleaned = s.replace(['*', '·'], " ");
        for tok in cleaned.split_whitespace() {
            let (gen, exp) = match tok.split_once('^') {
                Some((g, e)) => {
                    let e = e.trim_matches(|c| c == '{' || c == '}' || c == '(' || c == ')');
                    let e: i64 = e
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in '{tok}'")))?;
                    (g, e)
                }
                None => (tok, 1),
            };
            let idx: usize = gen
                .strip_prefix('a')
                .map(|x| x.trim_start_matches('_'))
                .and_then(|x| x.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad generator '{gen}'")))?;
            if idx == 0 || idx > n + 1 {
                return Err(Error::IndexOutOfRange { index: idx, max: n + 1 });
            }
            exponents[idx - 1] += exp;
        }
        Ok(Word { exponents })
    }

    pub fn exponents(&self) -> &[i64] {
        &self.exponents
    }

    /// Coordinates in the basis a_1..a_n, using a_{n+1} = (a_1⋯a_n)^{-1}.
    pub fn to_vector(&self, p: PrimeModulus) -> FpVector {
        let n = self.exponents.len() - 1;
        let last = self.exponents[n];
        let v: Vec<i64> = self.exponents[..n].iter().map(|&e| e - last).collect();
        FpVector::from_i64(p, &v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if e == 1 {
                write!(f, "a{}", i + 1)?;
            } else {
                write!(f, "a{}^{}", i + 1, e)?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// Subgroups by the names used for the n=3 and n=5 families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NamedSubgroup {
    /// n=3: K(r,s) = <a1^r a2^s a3^-1>.
    Pair { r: i64, s: i64 },
    /// n=3: K(l) = <a1^l a2^-1>.
    Single { l: i64 },
    /// n=5, dihedral case: <a1a2a3, a1^r a2^s a4^-1, a1^-s a2^(r-s) a5^-1>.
    DihedralPair { r: i64, s: i64 },
    /// n=5, dihedral case: <a1a2a3, a1^l a2^-1, a4^l a6^-1>.
    DihedralSingle { l: i64 },
    /// n=5, Klein case: <a1^r a2^s a3^-1, a3a5^-1, a4a6^-1>.
    KleinPair { r: i64, s: i64 },
    /// n=5, Klein case: K1, K2, K5 or K6.
    Klein(u8),
    /// n=5, Klein case: K3(r) = <a1^r a3^-1 a4, a1a2, a3a6>.
    KleinThree { r: i64 },
    /// n=5, Klein case: K4(r) = <a1^r a3^-1 a6, a1a2, a3a4>.
    KleinFour { r: i64 },
    /// n=5, Klein case at p=2: the barred subgroups 1..=4.
    KleinBar(u8),
    /// Explicit generating words.
    Words(Vec<Word>),
}

impl NamedSubgroup {
    /// The n the name belongs to, if fixed.
    pub fn required_n(&self) -> Option<usize> {
        match self {
            NamedSubgroup::Pair { .. } | NamedSubgroup::Single { .. } => Some(3),
            NamedSubgroup::Words(_) => None,
            _ => Some(5),
        }
    }

    /// Generating words over a_1..a_{n+1}.
    pub fn words(&self, n: usize) -> Result<Vec<Word>> {
        if let Some(req) = self.required_n() {
            if req != n {
                return Err(Error::InvalidParams(format!(
                    "{self} is defined for n = {req}, not {n}"
                )));
            }
        }
        let w = |s: String| Word::parse(&s, n);
        let fixed = |ws: &[&str]| ws.iter().map(|s| Word::parse(s, n)).collect::<Result<Vec<_>>>();
        match self {
            NamedSubgroup::Pair { r, s } => Ok(vec![w(format!("a1^{r} a2^{s} a3^-1"))?]),
            NamedSubgroup::Single { l } => Ok(vec![w(format!("a1^{l} a2^-1"))?]),
            NamedSubgroup::DihedralPair { r, s } => Ok(vec![
                w("a1 a2 a3".into())?,
                w(format!("a1^{r} a2^{s} a4^-1"))?,
                w(format!("a1^{} a2^{} a5^-1", -s, r - s))?,
            ]),
            NamedSubgroup::DihedralSingle { l } => Ok(vec![
                w("a1 a2 a3".into())?,
                w(format!("a1^{l} a2^-1"))?,
                w(format!("a4^{l} a6^-1"))?,
            ]),
            NamedSubgroup::KleinPair { r, s } => Ok(vec![
                w(format!("a1^{r} a2^{s} a3^-1"))?,
                w("a3 a5^-1".into())?,
                w("a4 a6^-1".into())?,
            ]),
            NamedSubgroup::Klein(i) => match i {
                1 => fixed(&["a1 a2^-1", "a3 a4^-1", "a5 a6^-1"]),
                2 => fixed(&["a1 a2^-1", "a3 a6^-1", "a4 a5^-1"]),
                5 => fixed(&["a1 a2^-1", "a3 a5^-1", "a4 a6^-1"]),
                6 => fixed(&["a1 a2", "a3 a5^-1", "a4 a6^-1"]),
                _ => Err(Error::Parse(format!("no Klein subgroup K{i}"))),
            },
            NamedSubgroup::KleinThree { r } => Ok(vec![
                w(format!("a1^{r} a3^-1 a4"))?,
                w("a1 a2".into())?,
                w("a3 a6".into())?,
            ]),
            NamedSubgroup::KleinFour { r } => Ok(vec![
                w(format!("a1^{r} a3^-1 a6"))?,
                w("a1 a2".into())?,
                w("a3 a4".into())?,
            ]),
            NamedSubgroup::KleinBar(i) => match i {
                1 => fixed(&["a1 a2", "a3 a4", "a3 a5"]),
                2 => fixed(&["a1 a2", "a3 a4", "a1 a3 a5"]),
                3 => fixed(&["a1 a2", "a3 a5", "a1 a3 a4"]),
                4 => fixed(&["a1 a2", "a4 a5", "a1 a3 a4"]),
                _ => Err(Error::Parse(format!("no barred Klein subgroup {i}"))),
            },
            NamedSubgroup::Words(ws) => {
                if let Some(bad) = ws.iter().find(|x| x.exponents.len() != n + 1) {
                    return Err(Error::DimensionMismatch(format!(
                        "word '{bad}' has {} exponents, expected {}",
                        bad.exponents.len(),
                        n + 1
                    )));
                }
                Ok(ws.clone())
            }
        }
    }

    /// Parses `K(r,s)`, `K(l)`, `D3:K(r,s)`, `D3:K(l)`, `Z22:K(r,s)`, `Z22:K1`,
    /// `Z22:K3(r)`, `Z22:K4(r)`, `Z22:Kbar1`, or `<word, word, …>` (words need `n`).
    pub fn parse(s: &str, n: usize) -> Result<NamedSubgroup> {
        if let Some(inner) = s.trim().strip_prefix('<').and_then(|x| x.strip_suffix('>')) {
            let words = inner
                .split(',')
                .filter(|w| !w.trim().is_empty())
                .map(|w| Word::parse(w, n))
                .collect::<Result<Vec<_>>>()?;
            return Ok(NamedSubgroup::Words(words));
        }
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let t = t.as_str();
        let bad = || Error::Parse(format!("unknown subgroup name '{s}'"));
        let args = |x: &str| -> Result<Vec<i64>> {
            let inner = x.strip_prefix('(').and_then(|y| y.strip_suffix(')')).ok_or_else(bad)?;
            inner
                .split(',')
                .map(|v| v.trim().parse::<i64>().map_err(|_| bad()))
                .collect()
        };
        let (family, name) = match t.split_once(':') {
            Some((f, x)) => (f, x),
            None => ("", t),
        };
        match family {
            "" | "D3" => {
                let rest = name.strip_prefix('K').ok_or_else(bad)?;
                let a = args(rest)?;
                match (family, a.as_slice()) {
                    ("", [r, s]) => Ok(NamedSubgroup::Pair { r: *r, s: *s }),
                    ("", [l]) => Ok(NamedSubgroup::Single { l: *l }),
                    ("D3", [r, s]) => Ok(NamedSubgroup::DihedralPair { r: *r, s: *s }),
                    ("D3", [l]) => Ok(NamedSubgroup::DihedralSingle { l: *l }),
                    _ => Err(bad()),
                }
            }
            "Z22" => {
                if let Some(i) = name.strip_prefix("Kbar") {
                    let i: u8 = i.parse().map_err(|_| bad())?;
                    return Ok(NamedSubgroup::KleinBar(i));
                }
                let rest = name.strip_prefix('K').ok_or_else(bad)?;
                if rest.starts_with('(') {
                    return match args(rest)?.as_slice() {
                        [r, s] => Ok(NamedSubgroup::KleinPair { r: *r, s: *s }),
                        _ => Err(bad()),
                    };
                }
                if let Some(x) = rest.strip_prefix('3').filter(|x| x.starts_with('(')) {
                    return match args(x)?.as_slice() {
                        [r] => Ok(NamedSubgroup::KleinThree { r: *r }),
                        _ => Err(bad()),
                    };
                }
                if let Some(x) = rest.strip_prefix('4').filter(|x| x.starts_with('(')) {
                    return match args(x)?.as_slice() {
                        [r] => Ok(NamedSubgroup::KleinFour { r: *r }),
                        _ => Err(bad()),
                    };
                }
                let i: u8 = rest.parse().map_err(|_| bad())?;
                Ok(NamedSubgroup::Klein(i))
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for NamedSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedSubgroup::Pair { r, s } => write!(f, "K({r},{s})"),
            NamedSubgroup::Single { l } => write!(f, "K({l})"),
            NamedSubgroup::DihedralPair { r, s } => write!(f, "D3:K({r},{s})"),
            NamedSubgroup::DihedralSingle { l } => write!(f, "D3:K({l})"),
            NamedSubgroup::KleinPair { r, s } => write!(f, "Z22:K({r},{s})"),
            NamedSubgroup::Klein(i) => write!(f, "Z22:K{i}"),
            NamedSubgroup::KleinThree { r } => write!(f, "Z22:K3({r})"),
            NamedSubgroup::KleinFour { r } => write!(f, "Z22:K4({r})"),
            NamedSubgroup::KleinBar(i) => write!(f, "Z22:Kbar{i}"),
            NamedSubgroup::Words(ws) => {
                let parts: Vec<String> = ws.iter().map(|w| w.to_string()).collect();
                write!(f, "<{}>", parts.join(", "))
            }
        }
    }
}

/// The name K(r,s) or K(l) of a key in F(p,3,2).
pub fn n3_name(key: &SubgroupKey) -> Option<NamedSubgroup> {
    let pr = key.params();
    if pr.n != 3 || pr.m != 2 {
        return None;
    }
    let t = key.theta();
    if t.get(1, 1) == 1 {
        Some(NamedSubgroup::Pair {
            r: t.get(0, 2) as i64,
            s: t.get(1, 2) as i64,
        })
    } else {
        Some(NamedSubgroup::Single { l: t.get(0, 1) as i64 })
    }
}

/// Key of the subgroup generated by `words`, which must have rank n-m.
pub fn key_from_words(params: &ActionParams, words: &[Word]) -> Result<SubgroupKey> {
    let p = params.modulus();
    let n = params.n;
    let vs: Vec<FpVector> = words
        .iter()
        .map(|w| {
            if w.exponents.len() != n + 1 {
                return Err(Error::DimensionMismatch(format!(
                    "word '{w}' has {} exponents, expected {}",
                    w.exponents.len(),
                    n + 1
                )));
            }
            Ok(w.to_vector(p))
        })
        .collect::<Result<_>>()?;
    let k = FpMatrix::from_vectors(p, n, &vs)?;
    let rank = k.rank();
    if rank != n - params.m {
        return Err(Error::NotAdmissible(format!(
            "generators span a subgroup of rank {rank}, expected {}",
            n - params.m
        )));
    }
    SubgroupKey::from_theta(*params, &k.kernel_basis())
}

/// Canonical key of a named subgroup.
pub fn key_from_named(params: &ActionParams, name: &NamedSubgroup) -> Result<SubgroupKey> {
    key_from_words(params, &name.words(params.n)?).map_err(|e| match e {
        Error::NotAdmissible(why) => Error::NotAdmissible(format!("{name}: {why}")),
        other => other,
    })
}

/// Normal forms of an admissible subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypePresentation {
    /// m=2, θ(a1), θ(a2) independent: θ(a_j) = θ(a1)^{r_j} θ(a2)^{s_j} for j = 3..n.
    Type1 { r: Vec<u16>, s: Vec<u16> },
    /// m=2, θ(a_i) = θ(a1)^{l_i} for i = 2..t, and θ(a_j) = θ(a1)^{r_j} θ(a_{t+1})^{s_j}
    /// for j = t+2..n.
    Type2 {
        t: usize,
        l: Vec<u16>,
        r: Vec<u16>,
        s: Vec<u16>,
    },
    /// Any m: after relabeling by σ, θ(a_j) = Π_i θ(a_i)^{l_{j,i}} for j = m+1..n+1.
    GeneralForm { sigma: Permutation, l: Vec<Vec<u16>> },
}

impl TypePresentation {
    /// Rebuilds the key this presentation describes.
    pub fn rebuild(&self, params: &ActionParams) -> Result<SubgroupKey> {
        let (n, m) = (params.n, params.m);
        let p = params.modulus();
        let mut theta = FpMatrix::zeros(p, m, n);
        let mut put = |c: usize, col: &[u16]| -> Result<()> {
            if c >= n || col.len() != m {
                return Err(Error::DimensionMismatch("presentation does not fit (p,n,m)".into()));
            }
            for (r, &x) in col.iter().enumerate() {
                theta.set(r, c, p.reduce(x as i64));
            }
            Ok(())
        };
        match self {
            TypePresentation::Type1 { r, s } => {
                if m != 2 || r.len() != n - 2 || s.len() != n - 2 {
                    return Err(Error::DimensionMismatch(
                        "type 1 presentation does not fit (p,n,m)".into(),
                    ));
                }
                put(0, &[1, 0])?;
                put(1, &[0, 1])?;
                for j in 0..n - 2 {
                    put(j + 2, &[r[j], s[j]])?;
                }
                SubgroupKey::from_theta(*params, &theta)
            }
            TypePresentation::Type2 { t, l, r, s } => {
                let t = *t;
                if m != 2 || t < 2 || t >= n || l.len() != t - 1 || r.len() != n - t - 1 || s.len() != r.len() {
                    return Err(Error::DimensionMismatch(
                        "type 2 presentation does not fit (p,n,m)".into(),
                    ));
                }
                put(0, &[1, 0])?;
                for (i, &li) in l.iter().enumerate() {
                    put(i + 1, &[li, 0])?;
                }
                put(t, &[0, 1])?;
                for j in 0..r.len() {
                    put(t + 1 + j, &[r[j], s[j]])?;
                }
                SubgroupKey::from_theta(*params, &theta)
            }
            TypePresentation::GeneralForm { sigma, l } => {
                if l.len() != n + 1 - m {
                    return Err(Error::DimensionMismatch(
                        "general presentation does not fit (p,n,m)".into(),
                    ));
                }
                for i in 0..m {
                    let mut e = vec![0u16; m];
                    e[i] = 1;
                    put(i, &e)?;
                }
                for (j, row) in l.iter().take(n - m).enumerate() {
                    put(m + j, row)?;
                }
                let relabeled = SubgroupKey::from_theta(*params, &theta)?;
                if relabeled.image(n + 1).entries() != l[n - m].as_slice() {
                    return Err(Error::NotAdmissible(
                        "general presentation violates the product relation".into(),
                    ));
                }
                relabeled.act(&sigma.inverse())
            }
        }
    }

    /// Checks the nondegeneracy conditions of the presentation.
    pub fn validate(&self, p: PrimeModulus) -> Result<()> {
        let fail = |why: &str| Err(Error::NotAdmissible(why.to_string()));
        match self {
            TypePresentation::Type1 { r, s } => {
                if r.iter().zip(s).any(|(&a, &b)| a == 0 && b == 0) {
                    return fail("some (r_j, s_j) is zero");
                }
                let sr = r.iter().fold(1u16, |acc, &x| p.add(acc, x));
                let ss = s.iter().fold(1u16, |acc, &x| p.add(acc, x));
                if sr == 0 && ss == 0 {
                    return fail("(1 + Σr, 1 + Σs) is zero");
                }
                Ok(())
            }
            TypePresentation::Type2 { l, r, s, .. } => {
                if l.contains(&0) {
                    return fail("some l_i is zero");
                }
                if r.iter().zip(s).any(|(&a, &b)| a == 0 && b == 0) {
                    return fail("some (r_j, s_j) is zero");
                }
                let sr = l.iter().chain(r).fold(1u16, |acc, &x| p.add(acc, x));
                let ss = s.iter().fold(1u16, |acc, &x| p.add(acc, x));
                if sr == 0 && ss == 0 {
                    return fail("implied image is zero");
                }
                Ok(())
            }
            TypePresentation::GeneralForm { l, .. } => {
                if l.iter().any(|row| row.iter().all(|&x| x == 0)) {
                    return fail("some l_j is zero");
                }
                let m = l.first().map_or(0, |row| row.len());
                for i in 0..m {
                    let total = l.iter().fold(1u16, |acc, row| p.add(acc, row[i]));
                    if total != 0 {
                        return fail("1 + Σ_j l_{j,i} is not zero");
                    }
                }
                Ok(())
            }
        }
    }
}

/// Type 1 or type 2 form for m=2, the general form otherwise.
pub fn classify_type(key: &SubgroupKey) -> TypePresentation {
    if key.params.m != 2 {
        return general_form(key);
    }
    let n = key.params.n;
    let theta = &key.theta;
    // θ(a1) = e1, and the second pivot column is θ(a_{t+1}) = e2.
    let t = (1..n).find(|&c| theta.get(1, c) != 0).expect("rank 2");
    let coords = |range: std::ops::Range<usize>, row: usize| -> Vec<u16> { range.map(|c| theta.get(row, c)).collect() };
    if t == 1 {
        TypePresentation::Type1 {
            r: coords(2..n, 0),
            s: coords(2..n, 1),
        }
    } else {
        TypePresentation::Type2 {
            t,
            l: coords(1..t, 0),
            r: coords(t + 1..n, 0),
            s: coords(t + 1..n, 1),
        }
    }
}

/// The general normal form with σ lexicographically least.
pub fn general_form(key: &SubgroupKey) -> TypePresentation {
    let (n, m) = (key.params.n, key.params.m);
    let p = key.params.modulus();
    let images = key.images();
    let mut a: Vec<u8> = (0..=n as u8).collect();
    loop {
        let sigma = Permutation::from_zero_based(a.clone());
        let inv = sigma.inverse();
        // Columns θ(a_{σ^{-1}(1)}), …, θ(a_{σ^{-1}(m)}).
        let basis: Vec<FpVector> = (1..=m).map(|i| images[inv.apply(i) - 1].clone()).collect();
        let b = FpMatrix::from_vectors(p, m, &basis).expect("m-vectors").transpose();
        if b.rank() == m {
            let l = (m + 1..=n + 1)
                .map(|j| {
                    let v = &images[inv.apply(j) - 1];
                    b.solve(v)
                        .expect("dimensions agree")
                        .expect("basis spans")
                        .entries()
                        .to_vec()
                })
                .collect();
            return TypePresentation::GeneralForm { sigma, l };
        }
        if !next_permutation(&mut a) {
            unreachable!("rank m images always contain a basis");
        }
    }
}
