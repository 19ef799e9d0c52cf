//! Weighted `g0`-modules, the induced actions on `⊗^k g-1* ⊗ V` and the
//! orthogonal tensor projectors of the conformal family.
//!
//! Tensor coordinates are laid out as `(i1, ..., ik, v)` in row-major order,
//! so the flat index of `φ(e_i1, ..., e_ik)_v` is `((i1·n + i2)·n + ...)·dim V + v`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graded_algebra::{Element, Family, GradedLieAlgebra};
use crate::linalg::Matrix;
use crate::rational::{frac, int, parse as parse_rational, to_display_string, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RepDescriptor {
    Density(Rational),
    Standard,
    DualStandard,
    Tensor(Box<RepDescriptor>, Box<RepDescriptor>),
    Shifted(Box<RepDescriptor>, Rational),
}

impl fmt::Display for RepDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepDescriptor::Density(w) => write!(f, "density:w={}", to_display_string(w)),
            RepDescriptor::Standard => write!(f, "standard"),
            RepDescriptor::DualStandard => write!(f, "dual_standard"),
            RepDescriptor::Tensor(a, b) => write!(f, "tensor({a},{b})"),
            RepDescriptor::Shifted(a, dw) => write!(f, "shifted({a},dw={})", to_display_string(dw)),
        }
    }
}

/// Splits `a,b` at the top-level comma.
fn split_top(s: &str) -> Result<(&str, &str)> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Ok((s[..i].trim(), s[i + 1..].trim())),
            _ => {}
        }
    }
    Err(Error::Parse(format!("expected two comma-separated arguments in {s:?}")))
}

impl FromStr for RepDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "standard" => return Ok(RepDescriptor::Standard),
            "dual_standard" => return Ok(RepDescriptor::DualStandard),
            "density" | "trivial" => return Ok(RepDescriptor::Density(Rational::zero())),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("density") {
            let rest = rest.trim_start_matches([':', '(']).trim_end_matches(')');
            let w = rest.trim().strip_prefix("w=").unwrap_or(rest.trim());
            return Ok(RepDescriptor::Density(parse_rational(w)?));
        }
        let inner = |name: &str| s.strip_prefix(name).and_then(|r| r.trim().strip_prefix('(')).and_then(|r| r.strip_suffix(')'));
        if let Some(args) = inner("tensor") {
            let (a, b) = split_top(args)?;
            return Ok(RepDescriptor::Tensor(Box::new(a.parse()?), Box::new(b.parse()?)));
        }
        if let Some(args) = inner("shifted") {
            let (a, b) = split_top(args)?;
            let dw = b.strip_prefix("dw=").unwrap_or(b);
            return Ok(RepDescriptor::Shifted(Box::new(a.parse()?), parse_rational(dw)?));
        }
        Err(Error::Parse(format!("unknown representation descriptor {s:?}")))
    }
}

impl Serialize for RepDescriptor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RepDescriptor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A `g0`-module with one action matrix per `g0` basis element.
#[derive(Clone, Debug)]
pub struct Representation {
    pub algebra: Arc<GradedLieAlgebra>,
    pub carrier_dim: usize,
    pub action: Vec<Matrix>,
    pub weight: Rational,
    pub label: String,
    pub descriptor: RepDescriptor,
}

impl Representation {
    pub fn new(algebra: Arc<GradedLieAlgebra>, desc: &RepDescriptor) -> Result<Self> {
        let n0 = algebra.dim_grade(0);
        let (action, weight) = match desc {
            RepDescriptor::Density(w) => {
                let mut action = vec![Matrix::zeros(1, 1); n0];
                action[0][(0, 0)] = -w.clone();
                (action, w.clone())
            }
            RepDescriptor::Standard => {
                let action = (0..n0).map(|k| algebra.ad_on_minus(&algebra.basis_element(0, k))).collect();
                (action, int(-1))
            }
            RepDescriptor::DualStandard => {
                let action = (0..n0)
                    .map(|k| algebra.ad_on_minus(&algebra.basis_element(0, k)).transpose().scale(&int(-1)))
                    .collect();
                (action, int(1))
            }
            RepDescriptor::Tensor(a, b) => {
                let ra = Representation::new(algebra.clone(), a)?;
                let rb = Representation::new(algebra.clone(), b)?;
                let (ia, ib) = (Matrix::identity(ra.carrier_dim), Matrix::identity(rb.carrier_dim));
                let action = ra.action.iter().zip(&rb.action).map(|(x, y)| x.kron(&ib).add(&ia.kron(y))).collect();
                (action, &ra.weight + &rb.weight)
            }
            RepDescriptor::Shifted(a, dw) => {
                let mut r = Representation::new(algebra.clone(), a)?;
                let id = Matrix::identity(r.carrier_dim);
                r.action[0].add_scaled(&-dw.clone(), &id);
                (r.action, &r.weight + dw)
            }
        };
        let carrier_dim = action[0].rows();
        Ok(Representation { algebra, carrier_dim, action, weight, label: desc.to_string(), descriptor: desc.clone() })
    }

    /// Action matrix of an arbitrary `g0` element (other grades are ignored).
    pub fn action_of(&self, a: &Element) -> Matrix {
        let mut m = Matrix::zeros(self.carrier_dim, self.carrier_dim);
        for (k, c) in a.part(0).iter().enumerate() {
            if !c.is_zero() {
                m.add_scaled(c, &self.action[k]);
            }
        }
        m
    }

    /// Dimension of `⊗^k g-1* ⊗ V`.
    pub fn tensor_dim(&self, k: usize) -> usize {
        self.algebra.dim_grade(-1).pow(k as u32) * self.carrier_dim
    }

    /// `λ^(k)(A)φ = λ(A)∘φ − Σ_slots φ(.., ad(A)·, ..)`.
    pub fn act(&self, k: usize, a: &Element, phi: &[Rational]) -> Result<Vec<Rational>> {
        if !a.is_pure(0) {
            return Err(Error::Grade("act needs a g0 element".into()));
        }
        if a.dims() != self.algebra.dims() {
            return Err(Error::Dimension("element from a different algebra".into()));
        }
        if phi.len() != self.tensor_dim(k) {
            return Err(Error::Dimension(format!("tensor has {} coordinates, expected {}", phi.len(), self.tensor_dim(k))));
        }
        let lam = self.action_of(a);
        let ad = self.algebra.ad_on_minus(a);
        Ok(apply_lambda_k(&lam, &ad, self.algebra.dim_grade(-1), k, phi))
    }

    /// Full matrix of `λ^(k)(A)`.
    pub fn lambda_k_matrix(&self, k: usize, a: &Element) -> Matrix {
        let lam = self.action_of(a);
        let ad = self.algebra.ad_on_minus(a);
        lambda_k_matrix(&lam, &ad, self.algebra.dim_grade(-1), k)
    }

    /// Basis pairs `(a, b)` of `g0` where the action fails to be a homomorphism.
    pub fn homomorphism_defects(&self) -> Vec<(usize, usize)> {
        let alg = &self.algebra;
        let n0 = alg.dim_grade(0);
        let mut bad = Vec::new();
        for a in 0..n0 {
            for b in a + 1..n0 {
                let br = alg.bracket_unchecked(&alg.basis_element(0, a), &alg.basis_element(0, b));
                if self.action_of(&br) != self.action[a].commutator(&self.action[b]) {
                    bad.push((a, b));
                }
            }
        }
        bad
    }
}

pub fn make_rep(algebra: Arc<GradedLieAlgebra>, desc: &RepDescriptor) -> Result<Representation> {
    Representation::new(algebra, desc)
}

/// Apply `λ^(k)` given the carrier action `lam` and `ad(A)` on `g-1` (size `n`).
pub fn apply_lambda_k(lam: &Matrix, ad: &Matrix, n: usize, k: usize, phi: &[Rational]) -> Vec<Rational> {
    let dv = lam.rows();
    let blocks = n.pow(k as u32);
    let mut out = vec![Rational::zero(); phi.len()];
    for blk in 0..blocks {
        let v = &phi[blk * dv..(blk + 1) * dv];
        let lv = lam.mul_vec(v);
        for (o, x) in out[blk * dv..(blk + 1) * dv].iter_mut().zip(lv) {
            *o += x;
        }
    }
    for s in 0..k {
        let stride = n.pow((k - 1 - s) as u32) * dv;
        for idx in 0..phi.len() {
            let i = (idx / stride) % n;
            let base = idx - i * stride;
            let mut acc = Rational::zero();
            for l in 0..n {
                let c = &ad[(l, i)];
                if !c.is_zero() {
                    acc += c * &phi[base + l * stride];
                }
            }
            if !acc.is_zero() {
                out[idx] -= acc;
            }
        }
    }
    out
}

pub fn lambda_k_matrix(lam: &Matrix, ad: &Matrix, n: usize, k: usize) -> Matrix {
    let mut m = Matrix::identity(1).kron(lam);
    for _ in 0..k {
        m = Matrix::identity(n).kron(&m);
    }
    let dv = lam.rows();
    let id_v = Matrix::identity(dv);
    let adt = ad.transpose();
    for s in 0..k {
        let left = Matrix::identity(n.pow(s as u32));
        let right = Matrix::identity(n.pow((k - 1 - s) as u32)).kron(&id_v);
        m = m.sub(&left.kron(&adt).kron(&right));
    }
    m
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProjectorKind {
    Sym0,
    Trace,
    Alt,
    #[serde(rename = "sym3_0")]
    Sym3_0,
}

impl ProjectorKind {
    pub fn order(&self) -> usize {
        match self {
            ProjectorKind::Sym3_0 => 3,
            _ => 2,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ProjectorKind::Sym0 => "sym0",
            ProjectorKind::Trace => "trace",
            ProjectorKind::Alt => "alt",
            ProjectorKind::Sym3_0 => "sym3_0",
        }
    }
}

impl fmt::Display for ProjectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProjectorKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "sym0" | "sym_traceless" | "pi1" => Ok(ProjectorKind::Sym0),
            "trace" | "pi2" => Ok(ProjectorKind::Trace),
            "alt" | "alternating" | "pi3" => Ok(ProjectorKind::Alt),
            "sym3_0" | "sym3_traceless" => Ok(ProjectorKind::Sym3_0),
            other => Err(Error::Parse(format!("unknown projector kind {other:?}"))),
        }
    }
}

/// Signature metric of the conformal family on `g-1`.
pub fn conformal_metric(alg: &GradedLieAlgebra) -> Result<Vec<Rational>> {
    match alg.family() {
        Family::Conformal { m, n } => Ok((0..m + n).map(|i| if i < m { int(1) } else { int(-1) }).collect()),
        f => Err(Error::Unsupported(format!("projectors need the conformal family, got {f}"))),
    }
}

/// Projector onto the `kind` component of `⊗^k g-1* ⊗ V`, acting on the
/// tensor indices only.
pub fn projections(alg: &GradedLieAlgebra, k: usize, kind: ProjectorKind, carrier_dim: usize) -> Result<Matrix> {
    let j = conformal_metric(alg)?;
    if kind.order() != k {
        return Err(Error::Unsupported(format!("projector {kind} is not defined on order {k}")));
    }
    let n = j.len();
    let nf = int(n as i64);
    let p = match kind {
        ProjectorKind::Alt | ProjectorKind::Sym0 | ProjectorKind::Trace => {
            let mut sym = Matrix::zeros(n * n, n * n);
            let mut alt = Matrix::zeros(n * n, n * n);
            let mut tr = Matrix::zeros(n * n, n * n);
            for a in 0..n {
                for b in 0..n {
                    let r = a * n + b;
                    sym[(r, r)] += frac(1, 2);
                    sym[(r, b * n + a)] += frac(1, 2);
                    alt[(r, r)] += frac(1, 2);
                    alt[(r, b * n + a)] -= frac(1, 2);
                    if a == b {
                        for c in 0..n {
                            tr[(r, c * n + c)] = &j[a] * &j[c] / &nf;
                        }
                    }
                }
            }
            match kind {
                ProjectorKind::Alt => alt,
                ProjectorKind::Trace => tr,
                _ => sym.sub(&tr),
            }
        }
        ProjectorKind::Sym3_0 => {
            let d = n * n * n;
            let idx = |a: usize, b: usize, c: usize| (a * n + b) * n + c;
            let mut s = Matrix::zeros(d, d);
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        for (x, y, z) in [(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                            s[(idx(a, b, c), idx(x, y, z))] += frac(1, 6);
                        }
                    }
                }
            }
            // T_c = Σ_a J^aa S_aac, then subtract 3/(n+2)·sym(J_ab T_c).
            let mut t = Matrix::zeros(n, d);
            for c in 0..n {
                for a in 0..n {
                    for col in 0..d {
                        let v = &s[(idx(a, a, c), col)];
                        if !v.is_zero() {
                            t[(c, col)] += &j[a] * v;
                        }
                    }
                }
            }
            let coef = frac(3, n as i64 + 2);
            let mut corr = Matrix::zeros(d, d);
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        let r = idx(a, b, c);
                        for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                            if x == y {
                                for col in 0..d {
                                    let v = &t[(z, col)];
                                    if !v.is_zero() {
                                        corr[(r, col)] += &j[x] * v * frac(1, 3);
                                    }
                                }
                            }
                        }
                    }
                }
            }
            s.sub(&corr.scale(&coef))
        }
    };
    Ok(p.kron(&Matrix::identity(carrier_dim)))
}

impl Representation {
    /// Convenience: the `λ^(k)` matrix of the grading element.
    pub fn grading_matrix(&self, k: usize) -> Matrix {
        self.lambda_k_matrix(k, &self.algebra.grading_element())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn conf(m: usize) -> Arc<GradedLieAlgebra> {
        Arc::new(GradedLieAlgebra::build(Family::Conformal { m, n: 0 }).unwrap())
    }

    #[test]
    fn descriptor_parse_and_display() {
        for s in ["density:w=-1", "standard", "dual_standard", "tensor(standard,density:w=3/2)", "shifted(dual_standard,dw=1)"] {
            let d: RepDescriptor = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
        }
        assert_eq!("density(w=2)".parse::<RepDescriptor>().unwrap(), RepDescriptor::Density(int(2)));
        assert!("tensor(standard)".parse::<RepDescriptor>().is_err());
        assert!("spinor".parse::<RepDescriptor>().is_err());
    }

    #[test]
    fn weights_and_homomorphism() {
        let alg = conf(4);
        for s in ["density:w=-1", "standard", "dual_standard", "tensor(standard,dual_standard)", "shifted(standard,dw=1/3)"] {
            let r = Representation::new(alg.clone(), &s.parse().unwrap()).unwrap();
            assert!(r.homomorphism_defects().is_empty(), "{s}");
            let id = Matrix::identity(r.carrier_dim).scale(&-r.weight.clone());
            assert_eq!(r.action[0], id, "{s}");
        }
    }

    #[test]
    fn density_tensor_adds_weights() {
        let alg = conf(3);
        let r = Representation::new(alg.clone(), &"tensor(density:w=2,density:w=-1/2)".parse().unwrap()).unwrap();
        let d = Representation::new(alg, &RepDescriptor::Density(frac(3, 2))).unwrap();
        assert_eq!(r.action, d.action);
        assert_eq!(r.weight, d.weight);
    }

    #[test]
    fn density_on_bracket() {
        // λ([X, Z]) s = (−w)⟨Z, X⟩ s
        let alg = conf(3);
        let w = frac(5, 2);
        let r = Representation::new(alg.clone(), &RepDescriptor::Density(w.clone())).unwrap();
        let x = alg.from_part(-1, vec![int(1), int(2), int(-1)]).unwrap();
        let z = alg.from_part(1, vec![int(3), int(0), int(4)]).unwrap();
        let a = alg.bracket(&x, &z).unwrap();
        let got = r.act(0, &a, &[int(1)]).unwrap();
        assert_eq!(got, vec![-w * int(3 - 4)]);
    }

    #[test]
    fn act_matches_matrix_and_is_representation() {
        let alg = conf(3);
        let r = Representation::new(alg.clone(), &"standard".parse().unwrap()).unwrap();
        let n0 = alg.dim_grade(0);
        for k in 0..=2 {
            let mats: Vec<Matrix> = (0..n0).map(|a| r.lambda_k_matrix(k, &alg.basis_element(0, a))).collect();
            for a in 0..n0 {
                let phi: Vec<Rational> = (0..r.tensor_dim(k)).map(|i| int((i * i % 7) as i64 - 3)).collect();
                assert_eq!(r.act(k, &alg.basis_element(0, a), &phi).unwrap(), mats[a].mul_vec(&phi));
                for b in 0..n0 {
                    let br = alg.bracket(&alg.basis_element(0, a), &alg.basis_element(0, b)).unwrap();
                    assert_eq!(r.lambda_k_matrix(k, &br), mats[a].commutator(&mats[b]));
                }
            }
        }
    }

    #[test]
    fn projector_ranks_m4() {
        let alg = conf(4);
        let ps: Vec<Matrix> = [ProjectorKind::Sym0, ProjectorKind::Trace, ProjectorKind::Alt]
            .iter()
            .map(|k| projections(&alg, 2, *k, 1).unwrap())
            .collect();
        assert_eq!(ps.iter().map(Matrix::rank).collect::<Vec<_>>(), vec![9, 1, 6]);
        assert_eq!(ps[0].add(&ps[1]).add(&ps[2]), Matrix::identity(16));
        for (i, p) in ps.iter().enumerate() {
            for (j, q) in ps.iter().enumerate() {
                let pq = p.mul(q);
                if i == j {
                    assert_eq!(&pq, p);
                } else {
                    assert!(pq.is_zero());
                }
            }
        }
        let s3 = projections(&alg, 3, ProjectorKind::Sym3_0, 1).unwrap();
        assert_eq!(s3.mul(&s3), s3);
        assert_eq!(s3.rank(), 16);
        assert!(projections(&alg, 3, ProjectorKind::Alt, 1).is_err());
    }

    #[test]
    fn projectors_commute_with_action() {
        let alg = conf(3);
        let r = Representation::new(alg.clone(), &RepDescriptor::Density(int(1))).unwrap();
        for kind in [ProjectorKind::Sym0, ProjectorKind::Trace, ProjectorKind::Alt, ProjectorKind::Sym3_0] {
            let k = kind.order();
            let p = projections(&alg, k, kind, 1).unwrap();
            for a in 0..alg.dim_grade(0) {
                let l = r.lambda_k_matrix(k, &alg.basis_element(0, a));
                assert_eq!(p.mul(&l), l.mul(&p), "{kind} {a}");
            }
        }
    }

    #[test]
    fn projectors_need_conformal() {
        let g = GradedLieAlgebra::build(Family::Grassmannian { p: 1, q: 3 }).unwrap();
        assert!(matches!(projections(&g, 2, ProjectorKind::Trace, 1), Err(Error::Unsupported(_))));
    }
}
