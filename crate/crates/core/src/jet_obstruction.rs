//! Semi-holonomic jet modules and the algebraic obstruction to invariance.
//!
//! The carrier of `J^k(V)` is `⊕_{i=0..k} ⊗^i g-1* ⊗ V`, components in
//! increasing order, each laid out as in [`crate::representation`].

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded_algebra::{Element, Family, GradedLieAlgebra};
use crate::linalg::Matrix;
use crate::poly::Poly;
use crate::rational::{frac, int, to_fraction_string, to_latex, Rational};
use crate::representation::{projections, RepDescriptor, Representation};
use crate::sample::Sampler;
use crate::term_engine::{evaluate, expand, filter_by_tau, render, Format};

pub use crate::representation::ProjectorKind;

/// A `b`-module: one matrix per `g0` and per `g1` basis element.
#[derive(Clone, Debug)]
pub struct JetModule {
    pub base_rep: Representation,
    pub order: usize,
    pub carrier_dim: usize,
    pub g0_action: Vec<Matrix>,
    pub g1_action: Vec<Matrix>,
    /// Drops the top component, mapping onto `J^(k-1)`.
    pub projection: Matrix,
}

fn combine(mats: &[Matrix], coords: &[Rational], dim: usize) -> Matrix {
    let mut m = Matrix::zeros(dim, dim);
    for (c, a) in coords.iter().zip(mats) {
        if !c.is_zero() {
            m.add_scaled(c, a);
        }
    }
    m
}

/// `J^1(W)` for a `b`-module `W` given by its `g0` and `g1` matrices.
fn first_jet(alg: &GradedLieAlgebra, g0: &[Matrix], g1: &[Matrix]) -> (Vec<Matrix>, Vec<Matrix>) {
    let n = alg.dim_grade(-1);
    let d = g0[0].rows();
    let idn = Matrix::identity(n);
    let idd = Matrix::identity(d);
    let total = d * (n + 1);
    let new_g0 = (0..g0.len())
        .map(|k| {
            let ad = alg.ad_on_minus(&alg.basis_element(0, k));
            let mut m = Matrix::zeros(total, total);
            m.set_block(0, 0, &g0[k]);
            m.set_block(d, d, &idn.kron(&g0[k]).sub(&ad.transpose().kron(&idd)));
            m
        })
        .collect();
    let new_g1 = (0..g1.len())
        .map(|z| {
            let ze = alg.basis_element(1, z);
            let mut m = Matrix::zeros(total, total);
            m.set_block(0, 0, &g1[z]);
            m.set_block(d, d, &idn.kron(&g1[z]));
            for x in 0..n {
                let br = alg.bracket_unchecked(&ze, &alg.basis_element(-1, x));
                m.set_block(d + x * d, 0, &combine(g0, br.part(0), d));
            }
            m
        })
        .collect();
    (new_g0, new_g1)
}

fn offsets(n: usize, dv: usize, k: usize) -> Vec<usize> {
    let mut off = vec![0];
    for i in 0..=k {
        off.push(off[i] + n.pow(i as u32) * dv);
    }
    off
}

impl JetModule {
    pub fn build(rep: &Representation, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("jet order must be at least 1".into()));
        }
        let alg = rep.algebra.clone();
        let n = alg.dim_grade(-1);
        let dv = rep.carrier_dim;
        let zero1 = vec![Matrix::zeros(dv, dv); alg.dim_grade(1)];
        let (mut g0, mut g1) = first_jet(&alg, &rep.action, &zero1);
        for order in 2..=k {
            let (big0, big1) = first_jet(&alg, &g0, &g1);
            let embed = Self::embedding(n, dv, order);
            let constraint = Self::constraint(n, dv, order);
            if !constraint.mul(&embed).is_zero() || constraint.nullspace().cols() != embed.cols() {
                return Err(Error::Inconsistent(format!("J^{order} is not the expected submodule")));
            }
            let left = Self::left_inverse(n, dv, order, embed.rows());
            let restrict = |m: &Matrix| -> Result<Matrix> {
                let image = m.mul(&embed);
                let r = left.mul(&image);
                if embed.mul(&r) != image {
                    return Err(Error::Inconsistent(format!("J^{order} is not invariant")));
                }
                Ok(r)
            };
            g0 = big0.iter().map(&restrict).collect::<Result<_>>()?;
            g1 = big1.iter().map(&restrict).collect::<Result<_>>()?;
        }
        let off = offsets(n, dv, k);
        let carrier_dim = off[k + 1];
        let projection = Matrix::from_fn(off[k], carrier_dim, |r, c| if r == c { Rational::one() } else { Rational::zero() });
        Ok(JetModule { base_rep: rep.clone(), order: k, carrier_dim, g0_action: g0, g1_action: g1, projection })
    }

    /// `J^k → J^1(J^(k-1))`, `u ↦ (w = (u_0..u_(k-1)), φ_i(x) = u_(i+1)(·, x))`.
    fn embedding(n: usize, dv: usize, k: usize) -> Matrix {
        let inner = offsets(n, dv, k - 1);
        let dw = inner[k];
        let outer = offsets(n, dv, k);
        let mut e = Matrix::zeros(dw * (n + 1), outer[k + 1]);
        for i in 0..=k {
            for idx in 0..n.pow(i as u32) * dv {
                let col = outer[i] + idx;
                if i < k {
                    e[(inner[i] + idx, col)] = Rational::one();
                }
                if i >= 1 {
                    let (head, v) = (idx / dv, idx % dv);
                    let (rest, x) = (head / n, head % n);
                    e[(dw + x * dw + inner[i - 1] + rest * dv + v, col)] = Rational::one();
                }
            }
        }
        e
    }

    /// Rows `φ_i(x) − w_(i+1)(·, x)` for `i = 0..k-2`.
    fn constraint(n: usize, dv: usize, k: usize) -> Matrix {
        let inner = offsets(n, dv, k - 1);
        let dw = inner[k];
        let mut rows = Vec::new();
        for i in 0..k.saturating_sub(1) {
            for x in 0..n {
                for idx in 0..n.pow(i as u32) * dv {
                    let mut r = vec![Rational::zero(); dw * (n + 1)];
                    r[dw + x * dw + inner[i] + idx] = Rational::one();
                    let (rest, v) = (idx / dv, idx % dv);
                    r[inner[i + 1] + (rest * n + x) * dv + v] = -Rational::one();
                    rows.push(r);
                }
            }
        }
        Matrix::from_rows(rows).unwrap_or_else(|_| Matrix::zeros(0, dw * (n + 1)))
    }

    fn left_inverse(n: usize, dv: usize, k: usize, big: usize) -> Matrix {
        let inner = offsets(n, dv, k - 1);
        let dw = inner[k];
        let outer = offsets(n, dv, k);
        let mut l = Matrix::zeros(outer[k + 1], big);
        for r in 0..outer[k] {
            l[(r, r)] = Rational::one();
        }
        for idx in 0..n.pow(k as u32) * dv {
            let (head, v) = (idx / dv, idx % dv);
            let (rest, x) = (head / n, head % n);
            l[(outer[k] + idx, dw + x * dw + inner[k - 1] + rest * dv + v)] = Rational::one();
        }
        l
    }

    pub fn algebra(&self) -> &Arc<GradedLieAlgebra> {
        &self.base_rep.algebra
    }

    /// Range of the `⊗^i` component.
    pub fn component(&self, i: usize) -> std::ops::Range<usize> {
        let off = offsets(self.algebra().dim_grade(-1), self.base_rep.carrier_dim, self.order);
        off[i]..off[i + 1]
    }

    pub fn g0_matrix(&self, a: &Element) -> Matrix {
        combine(&self.g0_action, a.part(0), self.carrier_dim)
    }

    pub fn g1_matrix(&self, z: &Element) -> Matrix {
        combine(&self.g1_action, z.part(1), self.carrier_dim)
    }

    /// Matrix of an element of `b = g0 ⊕ g1`.
    pub fn b_matrix(&self, x: &Element) -> Matrix {
        self.g0_matrix(x).add(&self.g1_matrix(x))
    }

    /// Basis pairs of `b` violating `[λ(W), λ(Z)] = λ([W, Z])`.
    pub fn action_law_defects(&self) -> Vec<(usize, usize)> {
        let alg = self.algebra();
        let (n0, n1) = (alg.dim_grade(0), alg.dim_grade(1));
        let basis: Vec<Element> =
            (0..n0).map(|a| alg.basis_element(0, a)).chain((0..n1).map(|z| alg.basis_element(1, z))).collect();
        let mats: Vec<Matrix> = basis.iter().map(|b| self.b_matrix(b)).collect();
        let mut bad = Vec::new();
        for a in 0..basis.len() {
            for b in a + 1..basis.len() {
                let br = alg.bracket_unchecked(&basis[a], &basis[b]);
                if mats[a].commutator(&mats[b]) != self.b_matrix(&br) {
                    bad.push((a, b));
                }
            }
        }
        bad
    }

    /// Whether every `g0` matrix is block diagonal in the grading of the carrier.
    pub fn g0_block_diagonal(&self) -> bool {
        let ranges: Vec<_> = (0..=self.order).map(|i| self.component(i)).collect();
        self.g0_action.iter().all(|m| {
            ranges.iter().enumerate().all(|(i, ri)| {
                ranges.iter().enumerate().all(|(j, rj)| {
                    i == j || m.block(ri.start, rj.start, ri.len(), rj.len()).is_zero()
                })
            })
        })
    }
}

pub fn build_jet_module(rep: &Representation, k: usize) -> Result<JetModule> {
    JetModule::build(rep, k)
}

/// Top block of the `g1` action on `J^k`, mapping `⊗^(k-1) g-1* ⊗ V` to
/// `⊗^k g-1* ⊗ V`:
/// `(Z·ψ)(X1..Xk) = Σ_i Σ_α η_α(X_i) (λ^(i-1)([Z, ξ_α]) ψ(·, X_(i+1)..X_k))(X1..X_(i-1))`.
pub fn g1_top_action(rep: &Representation, k: usize, z: &Element) -> Result<Matrix> {
    if k == 0 {
        return Err(Error::Domain("top action needs k ≥ 1".into()));
    }
    let alg = &rep.algebra;
    if z.dims() != alg.dims() || !z.is_pure(1) {
        return Err(Error::Grade("g1_top_action needs Z in g1".into()));
    }
    let n = alg.dim_grade(-1);
    let dv = rep.carrier_dim;
    let (xi, eta) = alg.killing_dual_bases();
    // pair[j][α] = η_α(e_j), the Killing pairing of e_j with η_α
    let p = alg.killing_pairing();
    let pair: Vec<Vec<Rational>> = (0..n)
        .map(|j| eta.iter().map(|e| (0..n).map(|b| &p[(j, b)] * &e.part(1)[b]).sum()).collect())
        .collect();
    let brackets: Vec<(Matrix, Matrix)> = xi
        .iter()
        .map(|x| {
            let a = alg.bracket_unchecked(z, x);
            (rep.action_of(&a), alg.ad_on_minus(&a))
        })
        .collect();
    let rows = n.pow(k as u32) * dv;
    let cols = n.pow(k as u32 - 1) * dv;
    let mut out = Matrix::zeros(rows, cols);
    let digits = |mut f: usize, len: usize| -> Vec<usize> {
        let mut d = vec![0; len];
        for p in (0..len).rev() {
            d[p] = f % n;
            f /= n;
        }
        d
    };
    let flat = |d: &[usize]| d.iter().fold(0, |acc, x| acc * n + x);
    for row_head in 0..n.pow(k as u32) {
        let js = digits(row_head, k);
        for i in 0..k {
            for (alpha, (lam, ad)) in brackets.iter().enumerate() {
                let c = &pair[js[i]][alpha];
                if c.is_zero() {
                    continue;
                }
                let mut rest: Vec<usize> = js.clone();
                rest.remove(i);
                for v in 0..dv {
                    let r = row_head * dv + v;
                    for v2 in 0..dv {
                        let l = &lam[(v, v2)];
                        if !l.is_zero() {
                            out[(r, flat(&rest) * dv + v2)] += c * l;
                        }
                    }
                    for s in 0..i {
                        for l in 0..n {
                            let a = &ad[(l, js[s])];
                            if a.is_zero() {
                                continue;
                            }
                            let mut moved = rest.clone();
                            moved[s] = l;
                            out[(r, flat(&moved) * dv + v)] -= c * a;
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `(Z, ψ) ↦ Φ(Z·ψ)` with columns indexed `z · dim ψ + p`.
pub fn obstruction_map(rep: &Representation, k: usize, phi: &Matrix) -> Result<Matrix> {
    let alg = &rep.algebra;
    let dim = rep.tensor_dim(k);
    if phi.cols() != dim {
        return Err(Error::Dimension(format!("Φ must have {dim} columns")));
    }
    if phi.rows() == dim {
        for a in 0..alg.dim_grade(0) {
            let l = rep.lambda_k_matrix(k, &alg.basis_element(0, a));
            if phi.mul(&l) != l.mul(phi) {
                return Err(Error::NotEquivariant(format!("Φ does not commute with {}", alg.label(0, a))));
            }
        }
    }
    let n1 = alg.dim_grade(1);
    let blocks: Vec<Matrix> =
        (0..n1).map(|z| g1_top_action(rep, k, &alg.basis_element(1, z)).map(|t| phi.mul(&t))).collect::<Result<_>>()?;
    let dpsi = rep.tensor_dim(k - 1);
    let mut out = Matrix::zeros(phi.rows(), n1 * dpsi);
    for (z, b) in blocks.iter().enumerate() {
        out.set_block(0, z * dpsi, b);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightSet {
    All,
    Finite(Vec<Rational>),
}

impl WeightSet {
    pub fn contains(&self, w: &Rational) -> bool {
        match self {
            WeightSet::All => true,
            WeightSet::Finite(v) => v.contains(w),
        }
    }
}

impl Serialize for WeightSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            WeightSet::All => s.serialize_str("all"),
            WeightSet::Finite(v) => v.iter().map(to_fraction_string).collect::<Vec<_>>().serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for WeightSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Tag(String),
            List(Vec<String>),
        }
        match Raw::deserialize(d)? {
            Raw::Tag(t) if t == "all" => Ok(WeightSet::All),
            Raw::Tag(t) => Err(serde::de::Error::custom(format!("unknown weight set {t:?}"))),
            Raw::List(v) => v
                .iter()
                .map(|s| crate::rational::parse(s).map_err(serde::de::Error::custom))
                .collect::<std::result::Result<_, _>>()
                .map(WeightSet::Finite),
        }
    }
}

/// The member of the weight family through `base` with weight `w`.
pub fn with_weight(alg: &Arc<GradedLieAlgebra>, base: &RepDescriptor, w: &Rational) -> Result<Representation> {
    let r = Representation::new(alg.clone(), base)?;
    if &r.weight == w {
        return Ok(r);
    }
    let desc = match base {
        RepDescriptor::Density(_) => RepDescriptor::Density(w.clone()),
        other => RepDescriptor::Shifted(Box::new(other.clone()), w - &r.weight),
    };
    Representation::new(alg.clone(), &desc)
}

/// Weights `w` for which the obstruction of `Φ` vanishes on the family
/// `rep(w)` obtained by shifting the conformal weight of `base`.
pub fn solve_weights(alg: &Arc<GradedLieAlgebra>, base: &RepDescriptor, k: usize, phi: &Matrix) -> Result<WeightSet> {
    let sample = |w: i64| -> Result<Matrix> { obstruction_map(&with_weight(alg, base, &int(w))?, k, phi) };
    let (m0, m1) = (sample(0)?, sample(1)?);
    let checks = [sample(2)?, sample(-3)?];
    let mut g = Poly::zero();
    for (idx, (a, b)) in m0.data().iter().zip(m1.data()).enumerate() {
        let p = Poly::interpolate(&[(int(0), a.clone()), (int(1), b.clone())]);
        for (w, m) in [2i64, -3].iter().zip(&checks) {
            if p.eval(&int(*w)) != m.data()[idx] {
                return Err(Error::Inconsistent("obstruction is not affine in the weight".into()));
            }
        }
        if !p.is_zero() {
            g = g.gcd(&p);
        }
    }
    if g.is_zero() {
        Ok(WeightSet::All)
    } else {
        Ok(WeightSet::Finite(g.rational_roots()?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub z: String,
    pub psi_index: usize,
    pub row: usize,
    #[serde(with = "crate::rational::as_str")]
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub invariant: bool,
    pub weights: WeightSet,
    pub formula_latex: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub obstruction_witness: Option<Witness>,
    /// Named coefficients of the curved formula, as `"num/den"`.
    pub coefficients: BTreeMap<String, String>,
}

fn first_nonzero(m: &Matrix, alg: &GradedLieAlgebra, dpsi: usize) -> Option<Witness> {
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let v = &m[(r, c)];
            if !v.is_zero() {
                return Some(Witness { z: alg.label(1, c / dpsi).to_string(), psi_index: c % dpsi, row: r, value: v.clone() });
            }
        }
    }
    None
}

struct Monomial {
    name: &'static str,
    eval: fn(&crate::term_engine::Bindings, usize, &[usize]) -> Rational,
}

fn monomials(k: usize) -> Vec<Monomial> {
    // Γ_ab = coefficient of e^a in Γ(e_b); (∇_a Γ)_bc likewise in direction a.
    match k {
        2 => vec![Monomial { name: "Gamma_ab s", eval: |b, n, i| &b.gamma[&0][i[1] * n + i[0]] * &b.jets[&0][0] }],
        3 => vec![
            Monomial {
                name: "Gamma_ab nabla_c s",
                eval: |b, n, i| &b.gamma[&0][i[1] * n + i[0]] * &b.jets[&1][i[2]],
            },
            Monomial {
                name: "(nabla_a Gamma_bc) s",
                eval: |b, n, i| &b.gamma[&1][(i[0] * n + i[2]) * n + i[1]] * &b.jets[&0][0],
            },
        ],
        _ => Vec::new(),
    }
}

/// Fits `Φ∘D_0` for a density against the monomials of its order.
fn fit_density_coefficients(rep: &Representation, k: usize, phi: &Matrix) -> Option<Vec<Rational>> {
    let mons = monomials(k);
    if mons.is_empty() || rep.carrier_dim != 1 {
        return None;
    }
    let n = rep.algebra.dim_grade(-1);
    let d0 = filter_by_tau(&expand(k, Some(0)), 0);
    let mut sampler = Sampler::new(0x5eed + k as u64);
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for _ in 0..3 {
        let b = sampler.bindings(rep, k);
        let target = phi.mul_vec(&evaluate(&d0, rep, &b).ok()?);
        let cols: Vec<Vec<Rational>> = mons
            .iter()
            .map(|m| {
                let raw: Vec<Rational> = (0..n.pow(k as u32))
                    .map(|f| {
                        let idx: Vec<usize> = (0..k).rev().map(|p| (f / n.pow(p as u32)) % n).collect();
                        (m.eval)(&b, n, &idx)
                    })
                    .collect();
                phi.mul_vec(&raw)
            })
            .collect();
        for (r, t) in target.iter().enumerate() {
            let mut row: Vec<Rational> = cols.iter().map(|c| c[r].clone()).collect();
            row.push(t.clone());
            rows.push(row);
        }
    }
    let aug = Matrix::from_rows(rows).ok()?;
    let (rref, pivots) = aug.rref();
    let nm = mons.len();
    if pivots.contains(&nm) {
        return None;
    }
    let mut coeffs = vec![Rational::zero(); nm];
    for (r, &p) in pivots.iter().enumerate() {
        coeffs[p] = rref[(r, nm)].clone();
    }
    Some(coeffs)
}

fn signed_term(c: &Rational, body: &str) -> String {
    if c.is_zero() {
        return String::new();
    }
    let sign = if c < &Rational::zero() { " - " } else { " + " };
    let mag = if c < &Rational::zero() { -c.clone() } else { c.clone() };
    if mag.is_one() {
        format!("{sign}{body}")
    } else {
        format!("{sign}{}{body}", to_latex(&mag))
    }
}

/// Decides invariance of `Φ∘(∇^ω)^k` on `rep`, returning the curved formula.
pub fn verify_operator(rep: &Representation, k: usize, kind: ProjectorKind) -> Result<Verdict> {
    if kind.order() != k {
        return Err(Error::Unsupported(format!("projector {kind} is not defined on order {k}")));
    }
    let alg = &rep.algebra;
    let phi = projections(alg, k, kind, rep.carrier_dim)?;
    let obs = obstruction_map(rep, k, &phi)?;
    let witness = first_nonzero(&obs, alg, rep.tensor_dim(k - 1));
    let weights = solve_weights(alg, &rep.descriptor, k, &phi)?;
    let mut coefficients = BTreeMap::new();
    let formula_latex = match fit_density_coefficients(rep, k, &phi) {
        Some(c) => {
            let mons = monomials(k);
            for (m, v) in mons.iter().zip(&c) {
                coefficients.insert(m.name.to_string(), to_fraction_string(v));
            }
            match (kind, k) {
                (ProjectorKind::Trace, 2) => {
                    let m = match alg.family() {
                        Family::Conformal { m, n } => (m + n) as i64,
                        _ => unreachable!("projectors are conformal"),
                    };
                    // tr Γ = −R/(2(m−1)) for the normalising Γ
                    let r = &c[0] * frac(-1, 2 * (m - 1));
                    coefficients.insert("R".into(), to_fraction_string(&r));
                    format!(r"\Delta s{}", signed_term(&r, "R\\,s"))
                }
                (ProjectorKind::Alt, _) => format!(r"\nabla_{{[a}}\nabla_{{b]}}s{}", signed_term(&c[0], r"\Gamma_{[ab]}s")),
                (ProjectorKind::Sym0, _) => format!(r"\nabla_{{(a}}\nabla_{{b)_0}}s{}", signed_term(&c[0], r"\Gamma_{(ab)_0}s")),
                _ => format!(
                    r"\nabla_{{(a}}\nabla_b\nabla_{{c)_0}}s{}{}",
                    signed_term(&c[0], r"\Gamma_{(ab}\nabla_{c)_0}s"),
                    signed_term(&c[1], r"(\nabla_{(a}\Gamma_{bc)_0})s")
                ),
            }
        }
        None => {
            let d0 = filter_by_tau(&expand(k, Some(0)), 0);
            format!(r"\Phi\circ\left(\nabla^{{{k}}}s + {}\right)", render(&d0, Format::Latex))
        }
    };
    Ok(Verdict { invariant: witness.is_none(), weights, formula_latex, obstruction_witness: witness, coefficients })
}

/// Scalar by which `I` acts on the `⊗^i` component of the jets of a density.
pub fn center_scalar(w: &Rational, i: usize) -> Rational {
    -w - int(i as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn conf(m: usize) -> Arc<GradedLieAlgebra> {
        Arc::new(GradedLieAlgebra::build(Family::Conformal { m, n: 0 }).unwrap())
    }

    fn density(alg: &Arc<GradedLieAlgebra>, w: Rational) -> Representation {
        Representation::new(alg.clone(), &RepDescriptor::Density(w)).unwrap()
    }

    #[test]
    fn jet_dimensions() {
        let alg = conf(4);
        let r = density(&alg, int(1));
        assert_eq!(JetModule::build(&r, 1).unwrap().carrier_dim, 5);
        assert_eq!(JetModule::build(&r, 2).unwrap().carrier_dim, 21);
        assert_eq!(JetModule::build(&r, 3).unwrap().carrier_dim, 85);
    }

    #[test]
    fn first_jet_of_density() {
        let alg = conf(3);
        let w = frac(2, 3);
        let r = density(&alg, w.clone());
        let j = JetModule::build(&r, 1).unwrap();
        assert!(j.action_law_defects().is_empty());
        assert!(j.g0_block_diagonal());
        // Z·(v, 0) = (0, X ↦ w⟨Z, X⟩v)
        let z = alg.from_part(1, vec![int(1), int(-2), int(3)]).unwrap();
        let img = j.g1_matrix(&z).mul_vec(&[int(1), int(0), int(0), int(0)]);
        assert_eq!(img, vec![int(0), w.clone(), -int(2) * &w, int(3) * &w]);
        let id = j.g0_matrix(&alg.grading_element());
        assert_eq!(id[(0, 0)], center_scalar(&w, 0));
        assert_eq!(id[(1, 1)], center_scalar(&w, 1));
    }

    #[test]
    fn second_jet_action_law() {
        let alg = conf(3);
        for rep in [density(&alg, frac(-1, 2)), Representation::new(alg.clone(), &RepDescriptor::Standard).unwrap()] {
            let j = JetModule::build(&rep, 2).unwrap();
            assert!(j.action_law_defects().is_empty());
            assert!(j.g0_block_diagonal());
        }
    }

    #[test]
    fn top_action_matches_jet_module() {
        let alg = conf(3);
        let rep = density(&alg, frac(5, 2));
        for k in 1..=3 {
            let j = JetModule::build(&rep, k).unwrap();
            let (top, below) = (j.component(k), j.component(k - 1));
            for z in 0..3 {
                let ze = alg.basis_element(1, z);
                let block = j.g1_matrix(&ze).block(top.start, below.start, top.len(), below.len());
                assert_eq!(block, g1_top_action(&rep, k, &ze).unwrap(), "k={k} z={z}");
            }
        }
        assert!(g1_top_action(&rep, 2, &alg.zero()).unwrap().is_zero());
    }

    #[test]
    fn weights_order_two() {
        let alg = conf(4);
        let base = RepDescriptor::Density(int(0));
        let solve = |kind| solve_weights(&alg, &base, 2, &projections(&alg, 2, kind, 1).unwrap()).unwrap();
        assert_eq!(solve(ProjectorKind::Sym0), WeightSet::Finite(vec![int(-1)]));
        assert_eq!(solve(ProjectorKind::Trace), WeightSet::Finite(vec![int(1)]));
        assert_eq!(solve(ProjectorKind::Alt), WeightSet::All);
    }

    #[test]
    fn non_equivariant_phi_rejected() {
        let alg = conf(3);
        let rep = density(&alg, int(0));
        let mut phi = Matrix::zeros(9, 9);
        phi[(0, 1)] = int(1);
        assert!(matches!(obstruction_map(&rep, 2, &phi), Err(Error::NotEquivariant(_))));
    }

    #[test]
    fn verdict_for_sym0() {
        let alg = conf(4);
        let v = verify_operator(&density(&alg, int(-1)), 2, ProjectorKind::Sym0).unwrap();
        assert!(v.invariant);
        assert_eq!(v.formula_latex, r"\nabla_{(a}\nabla_{b)_0}s + \Gamma_{(ab)_0}s");
        let v0 = verify_operator(&density(&alg, int(0)), 2, ProjectorKind::Sym0).unwrap();
        assert!(!v0.invariant);
        assert!(v0.obstruction_witness.is_some());
    }

    #[test]
    fn verdict_json_roundtrip() {
        let alg = conf(3);
        let v = verify_operator(&density(&alg, frac(1, 2)), 2, ProjectorKind::Trace).unwrap();
        let s = serde_json::to_string(&v).unwrap();
        let back: Verdict = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }
}
