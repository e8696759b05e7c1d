//! The group H = Z_p^n with generators a_1..a_{n+1}, and permutations of those generators.
//!
//! `a_j` is the standard basis vector `e_j` for `j <= n`, and
//! `a_{n+1} = -(e_1 + ... + e_n)`. A permutation `σ` of `{1..n+1}` acts by
//! `a_j -> a_{σ(j)}`; composition is `(σ∘τ)(j) = σ(τ(j))`.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::fpalgebra::{FpMatrix, FpVector, PrimeModulus};

/// Largest closure accepted by [`PermGroup::generate`].
pub const DEFAULT_GROUP_CAP: usize = 3_628_800;

/// Largest degree for which [`normalizer_in_symmetric`] scans all of S_d.
pub const MAX_NORMALIZER_DEGREE: usize = 9;

/// A permutation of `{1..d}`, stored 0-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u8).collect(),
        }
    }

    /// From 1-based images: `images[j-1] = σ(j)`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let d = images.len();
        if d > u8::MAX as usize {
            return Err(Error::InvalidPermutation(format!("degree {d} too large")));
        }
        let mut seen = vec![false; d];
        let mut out = Vec::with_capacity(d);
        for &x in images {
            if x == 0 || x > d || seen[x - 1] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
            seen[x - 1] = true;
            out.push((x - 1) as u8);
        }
        Ok(Permutation { images: out })
    }

    /// From 0-based images, unchecked beyond a debug assertion.
    pub(crate) fn from_zero_based(images: Vec<u8>) -> Self {
        debug_assert!({
            let mut s = images.clone();
            s.sort_unstable();
            s.iter().enumerate().all(|(i, &x)| i == x as usize)
        });
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// 1-based image of `j`.
    pub fn apply(&self, j: usize) -> usize {
        self.images[j - 1] as usize + 1
    }

    /// 1-based images.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize + 1).collect()
    }

    pub(crate) fn zero_based(&self) -> &[u8] {
        &self.images
    }

    /// `self ∘ other`, that is `j -> self(other(j))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.degree(),
                found: other.degree(),
            });
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&j| self.images[j as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.degree()];
        for (j, &x) in self.images.iter().enumerate() {
            inv[x as usize] = j as u8;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    pub fn order(&self) -> usize {
        self.cycles()
            .iter()
            .map(|c| c.len())
            .fold(1, |acc, l| acc / gcd(acc, l) * l)
    }

    /// Nontrivial cycles, 1-based, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                cycle.push(j + 1);
                j = self.images[j] as usize;
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Parses cycle notation such as `(1 2)(3 4)` or `(1,2,3)`; `()` or `id` is the identity.
    pub fn parse_cycles(s: &str, degree: usize) -> Result<Permutation> {
        if degree > u8::MAX as usize {
            return Err(Error::InvalidPermutation(format!("degree {degree} too large")));
        }
        let t = s.trim();
        let mut images: Vec<u8> = (0..degree as u8).collect();
        if t.is_empty() || t == "id" || t == "e" {
            return Ok(Permutation { images });
        }
        let mut used = vec![false; degree];
        let mut rest = t;
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .and_then(|r| r.split_once(')'))
                .ok_or_else(|| Error::InvalidPermutation(format!("malformed cycle string '{s}'")))?;
            let (inner, tail) = body;
            rest = tail.trim_start();
            let points: Vec<usize> = inner
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|x| !x.is_empty())
                .map(|x| {
                    x.parse::<usize>()
                        .map_err(|_| Error::InvalidPermutation(format!("bad point '{x}' in '{s}'")))
                })
                .collect::<Result<_>>()?;
            for &x in &points {
                if x == 0 || x > degree {
                    return Err(Error::IndexOutOfRange { index: x, max: degree });
                }
                if used[x - 1] {
                    return Err(Error::InvalidPermutation(format!("point {x} repeated in '{s}'")));
                }
                used[x - 1] = true;
            }
            for (i, &x) in points.iter().enumerate() {
                let y = points[(i + 1) % points.len()];
                images[x - 1] = (y - 1) as u8;
            }
        }
        Ok(Permutation { images })
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let pts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", pts.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{self}")
    }
}

/// Coordinates of `a_j` in Z_p^n, 1-based.
pub fn generator_vector(j: usize, n: usize, p: PrimeModulus) -> Result<FpVector> {
    if j == 0 || j > n + 1 {
        return Err(Error::IndexOutOfRange { index: j, max: n + 1 });
    }
    let mut v = vec![0i64; n];
    if j <= n {
        v[j - 1] = 1;
    } else {
        v.iter_mut().for_each(|x| *x = -1);
    }
    Ok(FpVector::from_i64(p, &v))
}

/// The automorphism `Φ_σ` of H as a permutation together with its matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionMatrix {
    pub sigma: Permutation,
    pub matrix: FpMatrix,
}

/// Matrix of `Φ_σ`: column `i` is the vector of `a_{σ(i)}`.
pub fn perm_to_matrix(sigma: &Permutation, p: PrimeModulus, n: usize) -> Result<ActionMatrix> {
    if sigma.degree() != n + 1 {
        return Err(Error::DegreeMismatch {
            expected: n + 1,
            found: sigma.degree(),
        });
    }
    let mut m = FpMatrix::zeros(p, n, n);
    for i in 1..=n {
        let col = generator_vector(sigma.apply(i), n, p)?;
        for r in 0..n {
            m.set(r, i - 1, col.get(r));
        }
    }
    Ok(ActionMatrix {
        sigma: sigma.clone(),
        matrix: m,
    })
}

/// A finite permutation group given by generators, with its elements listed.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
}

impl PermGroup {
    /// Closure of `gens` with the default cap.
    pub fn generate(degree: usize, gens: &[Permutation]) -> Result<Self> {
        Self::generate_capped(degree, gens, DEFAULT_GROUP_CAP)
    }

    pub fn generate_capped(degree: usize, gens: &[Permutation], cap: usize) -> Result<Self> {
        for g in gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        let id = Permutation::identity(degree);
        let mut seen: HashSet<Permutation> = HashSet::new();
        seen.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = g.compose_unchecked(&x);
                if !seen.contains(&y) {
                    if seen.len() >= cap {
                        return Err(Error::GroupTooLarge { cap });
                    }
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<Permutation> = seen.into_iter().collect();
        elements.sort_unstable();
        Ok(PermGroup {
            degree,
            generators: gens.to_vec(),
            elements,
        })
    }

    /// Parses generators in cycle notation.
    pub fn from_cycle_strings<S: AsRef<str>>(degree: usize, gens: &[S]) -> Result<Self> {
        let gens: Vec<Permutation> = gens
            .iter()
            .map(|g| Permutation::parse_cycles(g.as_ref(), degree))
            .collect::<Result<_>>()?;
        Self::generate(degree, &gens)
    }

    pub fn symmetric(degree: usize) -> Result<Self> {
        let mut gens = Vec::new();
        if degree >= 2 {
            let mut t: Vec<usize> = (1..=degree).collect();
            t.swap(0, 1);
            gens.push(Permutation::from_images(&t)?);
        }
        if degree >= 3 {
            let c: Vec<usize> = (1..=degree).map(|j| j % degree + 1).collect();
            gens.push(Permutation::from_images(&c)?);
        }
        Self::generate(degree, &gens)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// All elements in lexicographic order of their images.
    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    /// Whether `τ Q τ^{-1} = Q`, checked on generators.
    pub fn is_normalized_by(&self, tau: &Permutation) -> bool {
        let inv = tau.inverse();
        self.generators
            .iter()
            .all(|g| self.contains(&tau.compose_unchecked(g).compose_unchecked(&inv)))
    }

    /// Whether `self` is a subgroup of `other`.
    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.generators.iter().all(|g| other.contains(g))
    }
}

impl PartialEq for PermGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.elements == other.elements
    }
}

impl Eq for PermGroup {}

/// Advances to the next permutation in lexicographic order; false after the last.
pub(crate) fn next_permutation(a: &mut [u8]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// The normalizer of `q` in the full symmetric group, by exhaustive scan.
///
/// Generators are those of `q` followed by each scanned element not already
/// in the group generated so far.
pub fn normalizer_in_symmetric(q: &PermGroup) -> Result<PermGroup> {
    let d = q.degree();
    if d > MAX_NORMALIZER_DEGREE {
        return Err(Error::DegreeTooLarge(d));
    }
    let mut elements = Vec::new();
    let mut a: Vec<u8> = (0..d as u8).collect();
    loop {
        let tau = Permutation::from_zero_based(a.clone());
        if q.is_normalized_by(&tau) {
            elements.push(tau);
        }
        if !next_permutation(&mut a) {
            break;
        }
    }
    let mut gens: Vec<Permutation> = q.generators().to_vec();
    let mut current = PermGroup::generate(d, &gens)?;
    for x in &elements {
        if current.order() == elements.len() {
            break;
        }
        if !current.contains(x) {
            gens.push(x.clone());
            current = PermGroup::generate(d, &gens)?;
        }
    }
    Ok(PermGroup {
        degree: d,
        generators: gens,
        elements,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(s: &str, d: usize) -> Permutation {
        Permutation::parse_cycles(s, d).unwrap()
    }

    #[test]
    fn parse_and_display() {
        let g = perm("(1 2)(3 4)", 4);
        assert_eq!(g.images(), vec![2, 1, 4, 3]);
        assert_eq!(g.to_string(), "(1 2)(3 4)");
        assert_eq!(perm("(1,2,3)", 4).to_string(), "(1 2 3)");
        assert_eq!(perm("()", 4).to_string(), "()");
        assert!(Permutation::parse_cycles("(1 5)", 4).is_err());
        assert!(Permutation::parse_cycles("(1 2)(2 3)", 4).is_err());
        assert!(Permutation::parse_cycles("(1 2", 4).is_err());
    }

    #[test]
    fn composition_convention() {
        let s = perm("(1 2)", 3);
        let t = perm("(2 3)", 3);
        // (1 2)∘(2 3): 1->1->2, 2->3->3, 3->2->1
        assert_eq!(s.compose(&t).unwrap().images(), vec![2, 3, 1]);
        assert_eq!(
            s.compose(&perm("(1 2)", 4)).unwrap_err(),
            Error::DegreeMismatch { expected: 3, found: 4 }
        );
    }

    #[test]
    fn generator_vectors() {
        let p = PrimeModulus::new(5).unwrap();
        assert_eq!(generator_vector(4, 3, p).unwrap(), FpVector::from_i64(p, &[4, 4, 4]));
        assert_eq!(generator_vector(2, 3, p).unwrap(), FpVector::from_i64(p, &[0, 1, 0]));
        assert!(generator_vector(5, 3, p).is_err());
    }

    #[test]
    fn action_matrix_of_transposition() {
        let p = PrimeModulus::new(3).unwrap();
        let m = perm_to_matrix(&perm("(1 4)", 4), p, 3).unwrap().matrix;
        let expected = FpMatrix::from_rows(p, &[vec![2, 0, 0], vec![2, 1, 0], vec![2, 0, 1]]).unwrap();
        assert_eq!(m, expected);
    }

    #[test]
    fn action_is_a_homomorphism() {
        let p = PrimeModulus::new(7).unwrap();
        let s = perm("(1 2 3 4)", 4);
        let t = perm("(1 3)", 4);
        let ms = perm_to_matrix(&s, p, 3).unwrap().matrix;
        let mt = perm_to_matrix(&t, p, 3).unwrap().matrix;
        let mst = perm_to_matrix(&s.compose(&t).unwrap(), p, 3).unwrap().matrix;
        assert_eq!(ms.mul(&mt).unwrap(), mst);
    }

    #[test]
    fn group_orders() {
        assert_eq!(PermGroup::symmetric(4).unwrap().order(), 24);
        let k4 = PermGroup::from_cycle_strings(4, &["(1 2)(3 4)", "(1 3)(2 4)"]).unwrap();
        assert_eq!(k4.order(), 4);
        let d3 = PermGroup::from_cycle_strings(6, &["(1 2 3)(4 5 6)", "(1 4)(2 6)(3 5)"]).unwrap();
        assert_eq!(d3.order(), 6);
        let err = PermGroup::generate_capped(5, PermGroup::symmetric(5).unwrap().generators(), 100);
        assert_eq!(err.unwrap_err(), Error::GroupTooLarge { cap: 100 });
    }

    #[test]
    fn normalizers() {
        let k4 = PermGroup::from_cycle_strings(4, &["(1 2)(3 4)", "(1 3)(2 4)"]).unwrap();
        assert_eq!(normalizer_in_symmetric(&k4).unwrap().order(), 24);
        let c4 = PermGroup::from_cycle_strings(4, &["(1 2 3 4)"]).unwrap();
        assert_eq!(normalizer_in_symmetric(&c4).unwrap().order(), 8);
        let d3 = PermGroup::from_cycle_strings(6, &["(1 2 3)(4 5 6)", "(1 4)(2 6)(3 5)"]).unwrap();
        assert_eq!(normalizer_in_symmetric(&d3).unwrap().order(), 36);
        let z22 = PermGroup::from_cycle_strings(6, &["(3 5)(4 6)", "(1 2)(3 4)(5 6)"]).unwrap();
        let n = normalizer_in_symmetric(&z22).unwrap();
        assert_eq!(n.order(), 16);
        assert!(z22.is_subgroup_of(&n));
        assert_eq!(PermGroup::generate(6, n.generators()).unwrap(), n);
        let big = PermGroup::from_cycle_strings(10, &["(1 2)"]).unwrap();
        assert_eq!(normalizer_in_symmetric(&big).unwrap_err(), Error::DegreeTooLarge(10));
    }
}
