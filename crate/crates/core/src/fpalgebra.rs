//! Vectors and matrices over the prime field F_p.
//!
//! Entries are stored as `u16` residues in `0..p`. Products are formed in
//! `u32`, which cannot overflow for any 16-bit modulus.

use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

use crate::error::{Error, Result};

/// Largest prime that fits the 16-bit residue representation.
pub const MAX_PRIME: u64 = 65521;

/// Deterministic trial-division primality test.
pub fn is_prime(k: u64) -> bool {
    if k < 2 {
        return false;
    }
    if k < 4 {
        return true;
    }
    if k % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= k {
        if k % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn inverse_table(p: u16) -> &'static [u16] {
    static TABLES: OnceLock<RwLock<HashMap<u16, &'static [u16]>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(t) = tables.read().expect("inverse table lock").get(&p) {
        return t;
    }
    let mut guard = tables.write().expect("inverse table lock");
    guard.entry(p).or_insert_with(|| {
        let p32 = p as u32;
        let mut inv = vec![0u16; p as usize];
        if p > 1 {
            inv[1] = 1;
        }
        for a in 2..p32 {
            // inv[a] = -(p / a) * inv[p mod a]
            let q = p32 / a;
            let r = (p32 % a) as usize;
            inv[a as usize] = ((p32 - q) * inv[r] as u32 % p32) as u16;
        }
        Box::leak(inv.into_boxed_slice())
    })
}

/// A prime modulus with a cached table of inverses.
#[derive(Clone, Copy)]
pub struct PrimeModulus {
    p: u16,
    inv: &'static [u16],
}

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self> {
        if p > MAX_PRIME {
            return Err(Error::ModulusOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let p = p as u16;
        Ok(PrimeModulus {
            p,
            inv: inverse_table(p),
        })
    }

    #[inline]
    pub fn value(self) -> u16 {
        self.p
    }

    /// Reduces any integer into `0..p`.
    #[inline]
    pub fn reduce(self, x: i64) -> u16 {
        x.rem_euclid(self.p as i64) as u16
    }

    #[inline]
    pub fn add(self, a: u16, b: u16) -> u16 {
        let s = a as u32 + b as u32;
        let p = self.p as u32;
        (if s >= p { s - p } else { s }) as u16
    }

    #[inline]
    pub fn sub(self, a: u16, b: u16) -> u16 {
        if a >= b {
            a - b
        } else {
            (a as u32 + self.p as u32 - b as u32) as u16
        }
    }

    #[inline]
    pub fn neg(self, a: u16) -> u16 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u16, b: u16) -> u16 {
        (a as u32 * b as u32 % self.p as u32) as u16
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(self, a: u16) -> Option<u16> {
        match a {
            0 => None,
            _ => Some(self.inv[a as usize]),
        }
    }

    pub fn pow(self, mut base: u16, mut e: u64) -> u16 {
        let mut acc = 1u16 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// All `x` with `x^2 = a`.
    pub fn sqrt_all(self, a: u16) -> Vec<u16> {
        (0..self.p).filter(|&x| self.mul(x, x) == a).collect()
    }
}

impl PartialEq for PrimeModulus {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
    }
}

impl Eq for PrimeModulus {}

impl std::hash::Hash for PrimeModulus {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.p.hash(state)
    }
}

impl PartialOrd for PrimeModulus {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PrimeModulus {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.p.cmp(&other.p)
    }
}

impl fmt::Debug for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

/// A vector over F_p.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpVector {
    p: PrimeModulus,
    entries: Vec<u16>,
}

impl FpVector {
    pub fn zero(p: PrimeModulus, len: usize) -> Self {
        FpVector {
            p,
            entries: vec![0; len],
        }
    }

    pub fn from_i64(p: PrimeModulus, xs: &[i64]) -> Self {
        FpVector {
            p,
            entries: xs.iter().map(|&x| p.reduce(x)).collect(),
        }
    }

    /// Builds a vector from residues already in `0..p`.
    pub fn from_residues(p: PrimeModulus, entries: Vec<u16>) -> Result<Self> {
        if let Some(&bad) = entries.iter().find(|&&x| x >= p.value()) {
            return Err(Error::InvalidParams(format!(
                "entry {bad} is not a residue mod {}",
                p.value()
            )));
        }
        Ok(FpVector { p, entries })
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.p
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[u16] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> u16 {
        self.entries[i]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &FpVector) -> Result<FpVector> {
        self.check(other)?;
        let p = self.p;
        Ok(FpVector {
            p,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| p.add(a, b))
                .collect(),
        })
    }

    pub fn scale(&self, c: u16) -> FpVector {
        let p = self.p;
        FpVector {
            p,
            entries: self.entries.iter().map(|&a| p.mul(a, c)).collect(),
        }
    }

    pub fn neg(&self) -> FpVector {
        self.scale(self.p.neg(1))
    }

    pub fn dot(&self, other: &FpVector) -> Result<u16> {
        self.check(other)?;
        let p = self.p;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .fold(0, |acc, (&a, &b)| p.add(acc, p.mul(a, b))))
    }

    fn check(&self, other: &FpVector) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p.value(), other.p.value()));
        }
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch(format!(
                "vector lengths {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for FpVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// A dense row-major matrix over F_p.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpMatrix {
    p: PrimeModulus,
    rows: usize,
    cols: usize,
    data: Vec<u16>,
}

impl FpMatrix {
    pub fn zeros(p: PrimeModulus, rows: usize, cols: usize) -> Self {
        FpMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: PrimeModulus, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from residues in row-major order.
    pub fn from_residues(p: PrimeModulus, rows: usize, cols: usize, data: Vec<u16>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(&bad) = data.iter().find(|&&x| x >= p.value()) {
            return Err(Error::InvalidParams(format!(
                "entry {bad} is not a residue mod {}",
                p.value()
            )));
        }
        Ok(FpMatrix { p, rows, cols, data })
    }

    /// Builds a matrix from integer rows, reducing each entry mod p.
    pub fn from_rows(p: PrimeModulus, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(FpMatrix {
            p,
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().map(|&x| p.reduce(x)).collect(),
        })
    }

    /// Stacks vectors of equal length as rows.
    pub fn from_vectors(p: PrimeModulus, cols: usize, vs: &[FpVector]) -> Result<Self> {
        let mut data = Vec::with_capacity(vs.len() * cols);
        for v in vs {
            if v.modulus() != p {
                return Err(Error::ModulusMismatch(p.value(), v.modulus().value()));
            }
            if v.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row of length {} in a matrix with {cols} columns",
                    v.len()
                )));
            }
            data.extend_from_slice(v.entries());
        }
        Ok(FpMatrix {
            p,
            rows: vs.len(),
            cols,
            data,
        })
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u16] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u16 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, x: u16) {
        debug_assert!(x < self.p.value());
        self.data[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[u16] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vector(&self, r: usize) -> FpVector {
        FpVector {
            p: self.p,
            entries: self.row(r).to_vec(),
        }
    }

    pub fn column(&self, c: usize) -> FpVector {
        FpVector {
            p: self.p,
            entries: (0..self.rows).map(|r| self.get(r, c)).collect(),
        }
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = FpMatrix::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p.value(), other.p.value()));
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let p = self.p.value() as u64;
        let mut out = FpMatrix::zeros(self.p, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = 0u64;
                for k in 0..self.cols {
                    acc += self.get(i, k) as u64 * other.get(k, j) as u64;
                }
                out.data[i * other.cols + j] = (acc % p) as u16;
            }
        }
        Ok(out)
    }

    pub fn mul_vector(&self, v: &FpVector) -> Result<FpVector> {
        let col = FpMatrix::from_vectors(self.p, v.len(), std::slice::from_ref(v))?.transpose();
        Ok(self.mul(&col)?.transpose().row_vector(0))
    }

    /// Reduces in place to reduced row-echelon form and returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let p = self.p;
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if pr != r {
                for k in 0..cols {
                    self.data.swap(pr * cols + k, r * cols + k);
                }
            }
            let inv = p.inv(self.data[r * cols + c]).expect("nonzero pivot");
            if inv != 1 {
                for k in c..cols {
                    self.data[r * cols + k] = p.mul(self.data[r * cols + k], inv);
                }
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.data[i * cols + c];
                if f == 0 {
                    continue;
                }
                for k in c..cols {
                    let x = p.mul(f, self.data[r * cols + k]);
                    self.data[i * cols + k] = p.sub(self.data[i * cols + k], x);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Reduced row-echelon form and rank.
    pub fn rref(&self) -> (FpMatrix, usize) {
        let mut m = self.clone();
        let rank = m.rref_in_place().len();
        (m, rank)
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// Reduced row-echelon form with zero rows removed.
    pub fn row_basis(&self) -> FpMatrix {
        let (mut m, rank) = self.rref();
        m.data.truncate(rank * self.cols);
        m.rows = rank;
        m
    }

    pub fn is_rref(&self) -> bool {
        self.rref().0 == *self
    }

    /// Basis of `{x : A x = 0}` as the rows of a matrix in reduced row-echelon form.
    pub fn kernel_basis(&self) -> FpMatrix {
        let p = self.p;
        let (r, _) = self.rref();
        let pivots: Vec<usize> = (0..r.rows)
            .filter_map(|i| r.row(i).iter().position(|&x| x != 0))
            .collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = FpMatrix::zeros(p, free.len(), self.cols);
        for (row, &f) in free.iter().enumerate() {
            k.set(row, f, 1);
            for (i, &pc) in pivots.iter().enumerate() {
                k.set(row, pc, p.neg(r.get(i, f)));
            }
        }
        k.rref().0
    }

    /// Whether `v` lies in the row space.
    pub fn row_space_contains(&self, v: &FpVector) -> Result<bool> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let base = self.rank();
        let mut ext = self.clone();
        ext.data.extend_from_slice(v.entries());
        ext.rows += 1;
        Ok(ext.rank() == base)
    }

    /// Solves `A x = b`, returning one solution if any exists.
    pub fn solve(&self, b: &FpVector) -> Result<Option<FpVector>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let mut aug = FpMatrix::zeros(self.p, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, self.cols, b.get(r));
        }
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![0u16; self.cols];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(i, self.cols);
        }
        Ok(Some(FpVector { p: self.p, entries: x }))
    }

    pub fn inverse(&self) -> Result<FpMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "inverse of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut aug = FpMatrix::zeros(self.p, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, 1);
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Singular);
        }
        let mut inv = FpMatrix::zeros(self.p, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, aug.get(r, n + c));
            }
        }
        Ok(inv)
    }

    /// Rows joined by ';', entries by ','.
    pub fn to_entry_string(&self) -> String {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect::<Vec<_>>()
            .join(";")
    }

    /// Inverse of [`FpMatrix::to_entry_string`].
    pub fn parse_entry_string(p: PrimeModulus, s: &str) -> Result<FpMatrix> {
        let rows: Vec<Vec<i64>> = s
            .split(';')
            .map(|row| {
                row.split(',')
                    .map(|x| {
                        let x = x.trim();
                        let v: i64 = x.parse().map_err(|_| Error::Parse(format!("bad matrix entry '{x}'")))?;
                        if !(0..p.value() as i64).contains(&v) {
                            return Err(Error::Parse(format!("entry {v} is not a residue mod {}", p.value())));
                        }
                        Ok(v)
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        FpMatrix::from_rows(p, &rows)
    }
}

impl fmt::Display for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            if r > 0 {
                writeln!(f)?;
            }
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    #[test]
    fn primality_and_range() {
        assert!(PrimeModulus::new(2).is_ok());
        assert!(PrimeModulus::new(65521).is_ok());
        assert_eq!(PrimeModulus::new(4), Err(Error::NotPrime(4)));
        assert_eq!(PrimeModulus::new(1), Err(Error::NotPrime(1)));
        assert_eq!(PrimeModulus::new(65537), Err(Error::ModulusOutOfRange(65537)));
    }

    #[test]
    fn inverse_table_is_correct() {
        for p in [2u64, 3, 5, 7, 11, 13, 101, 65521] {
            let q = f(p);
            for a in 1..(p.min(2000) as u16) {
                assert_eq!(q.mul(a, q.inv(a).unwrap()), 1, "p={p} a={a}");
            }
            assert_eq!(q.inv(0), None);
        }
    }

    #[test]
    fn rref_of_zero_and_identity() {
        let p = f(7);
        let (r, rank) = FpMatrix::zeros(p, 2, 3).rref();
        assert_eq!(rank, 0);
        assert_eq!(r, FpMatrix::zeros(p, 2, 3));
        let i = FpMatrix::identity(p, 3);
        assert_eq!(i.rref(), (i.clone(), 3));
    }

    #[test]
    fn rref_mod_five() {
        let p = f(5);
        let a = FpMatrix::from_rows(p, &[vec![2, 4, 1], vec![1, 2, 4]]).unwrap();
        let (r, rank) = a.rref();
        assert_eq!(rank, 2);
        assert_eq!(r, FpMatrix::from_rows(p, &[vec![1, 2, 0], vec![0, 0, 1]]).unwrap());
    }

    #[test]
    fn kernel_of_zero_matrix_is_everything() {
        let p = f(3);
        let k = FpMatrix::zeros(p, 2, 3).kernel_basis();
        assert_eq!(k, FpMatrix::identity(p, 3));
    }

    #[test]
    fn kernel_of_key_matrix() {
        let p = f(7);
        let (r, s) = (2, 5);
        let a = FpMatrix::from_rows(p, &[vec![1, 0, r], vec![0, 1, s]]).unwrap();
        let k = a.kernel_basis();
        assert_eq!(k.rows(), 1);
        let expected = FpMatrix::from_rows(p, &[vec![r, s, -1]]).unwrap().rref().0;
        assert_eq!(k, expected);
        assert!(a.mul(&k.transpose()).unwrap().data().iter().all(|&x| x == 0));
    }

    #[test]
    fn inverse_and_singular() {
        let p = f(11);
        let a = FpMatrix::from_rows(p, &[vec![2, 3], vec![1, 4]]).unwrap();
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), FpMatrix::identity(p, 2));
        let s = FpMatrix::from_rows(p, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(s.inverse(), Err(Error::Singular));
    }

    #[test]
    fn solve_and_membership() {
        let p = f(5);
        let a = FpMatrix::from_rows(p, &[vec![1, 2], vec![3, 4]]).unwrap();
        let b = FpVector::from_i64(p, &[1, 1]);
        let x = a.solve(&b).unwrap().unwrap();
        assert_eq!(a.mul_vector(&x).unwrap(), b);
        let rowsp = FpMatrix::from_rows(p, &[vec![1, 1, 0]]).unwrap();
        assert!(rowsp.row_space_contains(&FpVector::from_i64(p, &[3, 3, 0])).unwrap());
        assert!(!rowsp.row_space_contains(&FpVector::from_i64(p, &[0, 1, 0])).unwrap());
    }

    #[test]
    fn entry_string_round_trip() {
        let p = f(13);
        let a = FpMatrix::from_rows(p, &[vec![1, 0, 12], vec![0, 1, 11]]).unwrap();
        let s = a.to_entry_string();
        assert_eq!(s, "1,0,12;0,1,11");
        assert_eq!(FpMatrix::parse_entry_string(p, &s).unwrap(), a);
        assert!(FpMatrix::parse_entry_string(p, "1,13").is_err());
    }
}
