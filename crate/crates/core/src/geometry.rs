//! Genus arithmetic, cyclic p-gonal models and the Jacobian genus decomposition.
//!
//! Marked point j carries θ(a_j). Point 1 is ∞ and is never written as a
//! factor; its exponent slot still counts towards Σ e_j ≡ 0 mod p.

use std::fmt;

use serde_json::{json, Value};

use crate::enumeration::{classify_type, SubgroupKey, TypePresentation};
use crate::error::{Error, Result};
use crate::fpalgebra::{FpMatrix, FpVector, PrimeModulus};

/// Display labels for the n+1 branch values, ∞ first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedPoints {
    labels: Vec<String>,
}

impl MarkedPoints {
    /// `inf, 0, 1, q4, …, q{n+1}`.
    pub fn standard(n: usize) -> Self {
        let mut labels = vec!["inf".to_string(), "0".into(), "1".into()];
        labels.extend((4..=n + 1).map(|j| format!("q{j}")));
        MarkedPoints { labels }
    }

    /// `inf, 0, 1, λ` for n=3.
    pub fn quartic() -> Self {
        Self::from_labels(&["inf", "0", "1", "λ"]).expect("distinct")
    }

    /// The dihedral configuration for n=5.
    pub fn dihedral() -> Self {
        Self::from_labels(&["inf", "0", "1", "λ", "1/(1-λ)", "(λ-1)/λ"]).expect("distinct")
    }

    /// The Klein configuration for n=5.
    pub fn klein() -> Self {
        Self::from_labels(&["inf", "0", "1", "λ", "-1", "-λ"]).expect("distinct")
    }

    pub fn from_labels<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().trim().to_string()).collect();
        if labels.len() < 3 {
            return Err(Error::InvalidParams("need at least three marked points".into()));
        }
        for (i, a) in labels.iter().enumerate() {
            if a.is_empty() {
                return Err(Error::InvalidParams("empty marked-point label".into()));
            }
            if labels[..i].contains(a) {
                return Err(Error::InvalidParams(format!("repeated marked-point label '{a}'")));
            }
        }
        Ok(MarkedPoints { labels })
    }

    /// Resolves a preset name or a comma-separated label list.
    pub fn preset(name: &str, n: usize) -> Result<Self> {
        let pts = match name {
            "standard" => Self::standard(n),
            "quartic" => Self::quartic(),
            "dihedral" => Self::dihedral(),
            "klein" => Self::klein(),
            list => Self::from_labels(&list.split(',').collect::<Vec<_>>())?,
        };
        if pts.len() != n + 1 {
            return Err(Error::DimensionMismatch(format!(
                "{} marked points for n = {n}",
                pts.len()
            )));
        }
        Ok(pts)
    }

    /// The natural labels for n: λ at n=3, standard otherwise.
    pub fn default_for(n: usize) -> Self {
        if n == 3 {
            Self::quartic()
        } else {
            Self::standard(n)
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// A cyclic cover y^p = Π (x - q_j)^{e_j}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveModel {
    pub p: PrimeModulus,
    pub points: MarkedPoints,
    pub exponents: Vec<u16>,
}

impl CurveModel {
    pub fn new(p: PrimeModulus, points: MarkedPoints, exponents: Vec<u16>) -> Result<Self> {
        if exponents.len() != points.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} exponents for {} points",
                exponents.len(),
                points.len()
            )));
        }
        if exponents.iter().any(|&e| e >= p.value()) {
            return Err(Error::InvalidParams("exponent is not a residue".into()));
        }
        if exponents.iter().fold(0u16, |acc, &e| p.add(acc, e)) != 0 {
            return Err(Error::InvalidParams("exponents do not sum to 0 mod p".into()));
        }
        Ok(CurveModel { p, points, exponents })
    }

    /// Number of branched points.
    pub fn branch_count(&self) -> usize {
        self.exponents.iter().filter(|&&e| e != 0).count()
    }

    /// Genus of the cyclic cover by Riemann–Hurwitz.
    pub fn genus(&self) -> u64 {
        let p = self.p.value() as u64;
        let b = self.branch_count() as u64;
        (b * (p - 1) + 2 - 2 * p) / 2
    }

    /// `y^p = x*(x - 1)^4`, with `var` in place of `y`.
    pub fn render(&self, var: &str) -> String {
        let factors: Vec<String> = self
            .points
            .labels()
            .iter()
            .zip(&self.exponents)
            .skip(1)
            .filter(|(_, &e)| e != 0)
            .map(|(label, &e)| {
                let base = factor(label);
                if e == 1 {
                    base
                } else {
                    format!("{base}^{e}")
                }
            })
            .collect();
        let rhs = if factors.is_empty() {
            "1".to_string()
        } else {
            factors.join("*")
        };
        format!("{var}^{} = {rhs}", self.p.value())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p.value(),
            "points": self.points.labels(),
            "exponents": self.exponents,
        })
    }
}

fn factor(label: &str) -> String {
    if label == "0" {
        "x".to_string()
    } else if let Some(rest) = label.strip_prefix('-') {
        format!("(x + {rest})")
    } else {
        format!("(x - {label})")
    }
}

impl fmt::Display for CurveModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("y"))
    }
}

/// The fiber product of two cyclic p-gonal curves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberProductModel {
    pub first: CurveModel,
    pub second: CurveModel,
}

impl FiberProductModel {
    pub fn render(&self) -> String {
        format!("{} ; {}", self.first.render("y1"), self.second.render("y2"))
    }

    pub fn to_json(&self) -> Value {
        json!({ "y1": self.first.to_json(), "y2": self.second.to_json() })
    }
}

impl fmt::Display for FiberProductModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Either kind of model, for rendering.
#[derive(Clone, Copy, Debug)]
pub enum AnyModel<'a> {
    Curve(&'a CurveModel),
    FiberProduct(&'a FiberProductModel),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderFormat {
    Text,
    Json,
}

pub fn render_model(model: AnyModel<'_>, format: RenderFormat) -> String {
    match (model, format) {
        (AnyModel::Curve(c), RenderFormat::Text) => c.render("y"),
        (AnyModel::Curve(c), RenderFormat::Json) => c.to_json().to_string(),
        (AnyModel::FiberProduct(f), RenderFormat::Text) => f.render(),
        (AnyModel::FiberProduct(f), RenderFormat::Json) => f.to_json().to_string(),
    }
}

/// g = 1 + k^{m-1}((n-1)(k-1) - 2)/2.
pub fn total_genus(k: u64, n: u64, m: u64) -> Result<u64> {
    if k < 2 || n < 2 || (n - 1) * (k - 1) <= 2 {
        return Err(Error::InvalidParams(format!(
            "signature (0; {k}^{}) is not hyperbolic",
            n + 1
        )));
    }
    if m == 0 || m > n {
        return Err(Error::InvalidParams(format!("m = {m}, need 1 <= m <= n = {n}")));
    }
    let overflow = || Error::InvalidParams("genus overflows".into());
    let power = k.checked_pow((m - 1) as u32).ok_or_else(overflow)?;
    let twice = power.checked_mul((n - 1) * (k - 1) - 2).ok_or_else(overflow)?;
    if twice % 2 != 0 {
        return Err(Error::NonIntegralGenus { k, n, m });
    }
    Ok(1 + twice / 2)
}

/// Genus of S/L for a proper subspace L of Z_p^m, given by spanning rows.
pub fn quotient_genus(key: &SubgroupKey, subspace: &FpMatrix) -> Result<u64> {
    let params = key.params();
    let m = params.m();
    if subspace.cols() != m || subspace.modulus() != params.modulus() {
        return Err(Error::DimensionMismatch(format!(
            "subspace of F_{}^{} for a key with m = {m}",
            subspace.modulus().value(),
            subspace.cols()
        )));
    }
    let basis = subspace.row_basis();
    let dim = basis.rows();
    if dim >= m {
        return Err(Error::InvalidParams("subspace is not proper".into()));
    }
    let outside = key
        .images()
        .iter()
        .map(|v| basis.row_space_contains(v).map(|inside| !inside))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|&x| x)
        .count() as i128;
    let p = params.p() as i128;
    let d = p.pow((m - dim) as u32);
    // 2γ = 2 - 2d + b·(d/p)·(p-1)
    let twice = 2 - 2 * d + outside * (d / p) * (p - 1);
    if twice < 0 || twice % 2 != 0 {
        return Err(Error::NonIntegralGenus {
            k: p as u64,
            n: params.n() as u64,
            m: m as u64,
        });
    }
    Ok((twice / 2) as u64)
}

/// The p+1 lines of Z_p^2 as generators: (1,0), (0,1), (1,1), …, (1,p-1).
pub fn lines_of_plane(p: PrimeModulus) -> Vec<FpVector> {
    let mut out = vec![FpVector::from_i64(p, &[1, 0]), FpVector::from_i64(p, &[0, 1])];
    out.extend((1..p.value() as i64).map(|k| FpVector::from_i64(p, &[1, k])));
    out
}

/// Model of the cyclic p-gonal curve S/L for a line L = ⟨w⟩ of Z_p^2.
pub fn pgonal_model(key: &SubgroupKey, line: &FpVector, points: &MarkedPoints) -> Result<CurveModel> {
    let params = key.params();
    if params.m() != 2 {
        return Err(Error::Unsupported(format!(
            "p-gonal models need m = 2, got m = {}",
            params.m()
        )));
    }
    let p = params.modulus();
    if line.len() != 2 || line.is_zero() || line.modulus() != p {
        return Err(Error::InvalidParams(
            "line must be spanned by a nonzero vector of F_p^2".into(),
        ));
    }
    if points.len() != params.degree() {
        return Err(Error::DimensionMismatch(format!(
            "{} marked points for n = {}",
            points.len(),
            params.n()
        )));
    }
    // f(x) = det[w, x] vanishes exactly on L.
    let (w0, w1) = (line.get(0), line.get(1));
    let mut exps: Vec<u16> = key
        .images()
        .iter()
        .map(|v| p.sub(p.mul(w0, v.get(1)), p.mul(w1, v.get(0))))
        .collect();
    let lead = exps[1..]
        .iter()
        .copied()
        .find(|&e| e != 0)
        .expect("at least two branched points");
    let scale = p.inv(lead).expect("nonzero");
    exps.iter_mut().for_each(|e| *e = p.mul(*e, scale));
    CurveModel::new(p, points.clone(), exps)
}

/// The fiber product y1^p, y2^p presenting S for m=2.
///
/// With φ1 = θ(a_1) and φ2 = θ(a_{t+1}), the y1 exponents are the φ2-coordinates
/// and the y2 exponents the φ1-coordinates of each θ(a_j).
pub fn fiber_product_model(key: &SubgroupKey, points: &MarkedPoints) -> Result<FiberProductModel> {
    let params = key.params();
    if params.m() != 2 {
        return Err(Error::Unsupported(format!(
            "fiber products need m = 2, got m = {}",
            params.m()
        )));
    }
    if points.len() != params.degree() {
        return Err(Error::DimensionMismatch(format!(
            "{} marked points for n = {}",
            points.len(),
            params.n()
        )));
    }
    let p = params.modulus();
    let t = match classify_type(key) {
        TypePresentation::Type1 { .. } => 1,
        TypePresentation::Type2 { t, .. } => t,
        TypePresentation::GeneralForm { .. } => unreachable!("m = 2"),
    };
    let images = key.images();
    let basis = FpMatrix::from_vectors(p, 2, &[images[0].clone(), images[t].clone()])?.transpose();
    let coords: Vec<FpVector> = images
        .iter()
        .map(|v| basis.solve(v).map(|x| x.expect("images span")))
        .collect::<Result<_>>()?;
    let first = CurveModel::new(p, points.clone(), coords.iter().map(|c| c.get(1)).collect())?;
    let second = CurveModel::new(p, points.clone(), coords.iter().map(|c| c.get(0)).collect())?;
    Ok(FiberProductModel { first, second })
}

/// One line L of Z_p^2 in the decomposition of the Jacobian.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineSummand {
    pub line: FpVector,
    pub genus: u64,
    pub fixed_count: u64,
    pub model: CurveModel,
}

/// Genera of the p+1 quotients S/L, which sum to the genus of S.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobianReport {
    pub key: SubgroupKey,
    pub lines: Vec<LineSummand>,
    pub genus_sum: u64,
    pub total_genus: u64,
}

impl JacobianReport {
    pub fn genera(&self) -> Vec<u64> {
        self.lines.iter().map(|l| l.genus).collect()
    }

    pub fn fixed_counts(&self) -> Vec<u64> {
        self.lines.iter().map(|l| l.fixed_count).collect()
    }
}

pub fn jacobian_decomposition(key: &SubgroupKey, points: &MarkedPoints) -> Result<JacobianReport> {
    let params = key.params();
    if params.m() != 2 {
        return Err(Error::Unsupported(format!(
            "Jacobian decomposition needs m = 2, got m = {}",
            params.m()
        )));
    }
    let p = params.modulus();
    let images = key.images();
    let mut lines = Vec::with_capacity(p.value() as usize + 1);
    for w in lines_of_plane(p) {
        let span = FpMatrix::from_vectors(p, 2, std::slice::from_ref(&w))?;
        let inside = images
            .iter()
            .map(|v| span.row_space_contains(v))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .filter(|&x| x)
            .count() as u64;
        lines.push(LineSummand {
            genus: quotient_genus(key, &span)?,
            fixed_count: p.value() as u64 * inside,
            model: pgonal_model(key, &w, points)?,
            line: w,
        });
    }
    let genus_sum = lines.iter().map(|l| l.genus).sum();
    Ok(JacobianReport {
        key: key.clone(),
        lines,
        genus_sum,
        total_genus: total_genus(p.value() as u64, params.n() as u64, 2)?,
    })
}

/// Both sides of the hyperplane genus-sum identity for any m.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConjectureProbe {
    pub sum: u64,
    pub genus: u64,
    pub equal: bool,
}

/// Sums quotient genera over the (p^m - 1)/(p - 1) hyperplanes of Z_p^m.
pub fn conjecture_probe(key: &SubgroupKey) -> Result<ConjectureProbe> {
    let params = key.params();
    let (p, m) = (params.modulus(), params.m());
    let mut sum = 0u64;
    let mut f = vec![0u16; m];
    // Functionals with first nonzero entry 1, one per hyperplane.
    for lead in 0..m {
        let free = m - lead - 1;
        let count = (p.value() as u64).pow(free as u32);
        for idx in 0..count {
            f.iter_mut().for_each(|x| *x = 0);
            f[lead] = 1;
            let mut rest = idx;
            for slot in f[lead + 1..].iter_mut().rev() {
                *slot = (rest % p.value() as u64) as u16;
                rest /= p.value() as u64;
            }
            let functional = FpMatrix::from_residues(p, 1, m, f.clone())?;
            sum += quotient_genus(key, &functional.kernel_basis())?;
        }
    }
    let genus = total_genus(p.value() as u64, params.n() as u64, m as u64)?;
    Ok(ConjectureProbe {
        sum,
        genus,
        equal: sum == genus,
    })
}
