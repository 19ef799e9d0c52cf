//! Curvature of conformal Cartan connections: deformation, traces and the
//! normalising deformation tensor.
//!
//! Conventions. `Γ(e_i) = Σ_j Γ_ji e^j`, so the matrix `gamma` acts on `g-1`
//! coordinates and returns `g1` coordinates. For `κ0(e_i, e_j) ∈ g0` with
//! `κ0(e_i, e_j)·e_k = Σ_l K^k_lij e_l` the Ricci-type trace is
//! `T_lj = Σ_i K^i_lij` and the `g0`-trace is `G_ij = Σ_k K^k_kij`. The round
//! sphere has `K^k_lij = δ_ik δ_jl − δ_il δ_jk` and `T = (m−1)δ`.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded_algebra::{Element, Family, GradedLieAlgebra};
use crate::linalg::Matrix;
use crate::rational::{frac, half, int, parse as parse_rational, to_fraction_string, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationTensor {
    pub gamma: Matrix,
    /// `nabla_gamma[d]` is `∇_{e_d}Γ` in the same convention as `gamma`.
    pub nabla_gamma: Option<Vec<Matrix>>,
}

impl DeformationTensor {
    /// `Γ` with vanishing covariant derivative.
    pub fn constant(gamma: Matrix) -> Self {
        let n = gamma.rows();
        DeformationTensor { gamma, nabla_gamma: Some(vec![Matrix::zeros(n, n); n]) }
    }

    pub fn apply(&self, alg: &GradedLieAlgebra, x: &Element) -> Element {
        alg.from_part(1, self.gamma.mul_vec(x.part(-1))).expect("g1 dims")
    }

    /// Flat tensors in the layout of [`crate::term_engine::Bindings`]:
    /// index `(d.., a, c)` holds the `e^c` coordinate of the image of `e_a`.
    pub fn to_bindings(&self) -> BTreeMap<usize, Vec<Rational>> {
        let n = self.gamma.rows();
        let flat = |m: &Matrix| (0..n * n).map(|f| m[(f % n, f / n)].clone()).collect::<Vec<_>>();
        let mut out = BTreeMap::new();
        out.insert(0, flat(&self.gamma));
        if let Some(ng) = &self.nabla_gamma {
            out.insert(1, ng.iter().flat_map(flat).collect());
        }
        out
    }
}

/// `κ(e_i, e_j)` split by grade, plus optional `(∇_{e_z} κ)(e_i, e_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvatureData {
    pub kappa_m1: Vec<Vec<Element>>,
    pub kappa_0: Vec<Vec<Element>>,
    pub kappa_1: Vec<Vec<Element>>,
    /// Indexed `[i][j][z]`.
    pub nabla_kappa: Option<Vec<Vec<Vec<Element>>>>,
}

fn table(alg: &GradedLieAlgebra) -> Vec<Vec<Element>> {
    let n = alg.dim_grade(-1);
    vec![vec![alg.zero(); n]; n]
}

impl CurvatureData {
    pub fn flat(alg: &GradedLieAlgebra) -> Self {
        let n = alg.dim_grade(-1);
        CurvatureData {
            kappa_m1: table(alg),
            kappa_0: table(alg),
            kappa_1: table(alg),
            nabla_kappa: Some(vec![vec![vec![alg.zero(); n]; n]; n]),
        }
    }

    /// `κ0` from a table `K^k_lij` given as `k(k, l, i, j)`.
    pub fn from_riemann(alg: &GradedLieAlgebra, k: impl Fn(usize, usize, usize, usize) -> Rational) -> Result<Self> {
        let n = alg.dim_grade(-1);
        let mut c = CurvatureData::flat(alg);
        c.nabla_kappa = None;
        for i in 0..n {
            for j in 0..n {
                let m = Matrix::from_fn(n, n, |l, kk| k(kk, l, i, j));
                c.kappa_0[i][j] = g0_from_ad(alg, &m)?;
            }
        }
        c.check_antisymmetric()?;
        Ok(c)
    }

    /// The round sphere of radius one in the normalisation above.
    pub fn sphere(alg: &GradedLieAlgebra) -> Result<Self> {
        let d = |a: usize, b: usize| if a == b { int(1) } else { int(0) };
        let mut c = Self::from_riemann(alg, |k, l, i, j| d(i, k) * d(j, l) - d(i, l) * d(j, k))?;
        let n = alg.dim_grade(-1);
        c.nabla_kappa = Some(vec![vec![vec![alg.zero(); n]; n]; n]);
        Ok(c)
    }

    pub fn total(&self, i: usize, j: usize) -> Element {
        self.kappa_m1[i][j].add(&self.kappa_0[i][j]).add(&self.kappa_1[i][j])
    }

    pub fn check_antisymmetric(&self) -> Result<()> {
        let n = self.kappa_0.len();
        for i in 0..n {
            for j in 0..n {
                if !self.total(i, j).add(&self.total(j, i)).is_zero() {
                    return Err(Error::Inconsistent(format!("κ(e_{}, e_{}) is not antisymmetric", i + 1, j + 1)));
                }
            }
        }
        Ok(())
    }

    fn check(&self, alg: &GradedLieAlgebra) -> Result<()> {
        let n = alg.dim_grade(-1);
        for (tab, g) in [(&self.kappa_m1, -1i8), (&self.kappa_0, 0), (&self.kappa_1, 1)] {
            if tab.len() != n || tab.iter().any(|r| r.len() != n) {
                return Err(Error::Dimension(format!("curvature tables must be {n}x{n}")));
            }
            for e in tab.iter().flatten() {
                if e.dims() != alg.dims() || !e.is_pure(g) {
                    return Err(Error::Grade(format!("κ{g} has a value outside grade {g}")));
                }
            }
        }
        Ok(())
    }

    /// `K^k_lij` as `[k][l][i][j]`.
    pub fn riemann(&self, alg: &GradedLieAlgebra) -> Vec<Vec<Vec<Vec<Rational>>>> {
        let n = alg.dim_grade(-1);
        let mats: Vec<Vec<Matrix>> =
            (0..n).map(|i| (0..n).map(|j| alg.ad_on_minus(&self.kappa_0[i][j])).collect()).collect();
        (0..n)
            .map(|k| (0..n).map(|l| (0..n).map(|i| (0..n).map(|j| mats[i][j][(l, k)].clone()).collect()).collect()).collect())
            .collect()
    }
}

/// The `g0` element acting on `g-1` by the matrix `m`.
pub fn g0_from_ad(alg: &GradedLieAlgebra, m: &Matrix) -> Result<Element> {
    let n0 = alg.dim_grade(0);
    let cols: Vec<Vec<Rational>> = (0..n0).map(|k| alg.ad_on_minus(&alg.basis_element(0, k)).data().to_vec()).collect();
    let sys = Matrix::from_columns(m.rows() * m.cols(), &cols);
    let x = sys.solve(m.data()).ok_or_else(|| Error::Membership("matrix is not the action of a g0 element".into()))?;
    alg.from_part(0, x)
}

fn conformal_dim(alg: &GradedLieAlgebra) -> Result<usize> {
    match alg.family() {
        Family::Conformal { m, n } => Ok(m + n),
        f => Err(Error::Unsupported(format!("conformal family required, got {f}"))),
    }
}

fn definite_dim(alg: &GradedLieAlgebra) -> Result<usize> {
    match alg.family() {
        Family::Conformal { m, n: 0 } if m >= 3 => Ok(m),
        Family::Conformal { n: 0, .. } => Err(Error::Domain("dimension must be at least 3".into())),
        Family::Conformal { .. } => Err(Error::Unsupported("normalisation is implemented for definite signature".into())),
        f => Err(Error::Unsupported(format!("conformal family required, got {f}"))),
    }
}

fn check_gamma(alg: &GradedLieAlgebra, g: &DeformationTensor) -> Result<()> {
    let n = alg.dim_grade(-1);
    if g.gamma.rows() != n || g.gamma.cols() != n {
        return Err(Error::Dimension(format!("Γ must be {n}x{n}")));
    }
    if let Some(ng) = &g.nabla_gamma {
        if ng.len() != n || ng.iter().any(|m| m.rows() != n || m.cols() != n) {
            return Err(Error::Dimension(format!("∇Γ must be {n} matrices of size {n}x{n}")));
        }
    }
    Ok(())
}

/// `κ̄0 − κ0 = −[X, Γ·Y] − [Γ·X, Y]` on basis pairs.
pub fn delta_kappa0(alg: &GradedLieAlgebra, g: &DeformationTensor) -> Vec<Vec<Element>> {
    let n = alg.dim_grade(-1);
    let xs: Vec<Element> = (0..n).map(|i| alg.basis_element(-1, i)).collect();
    let gx: Vec<Element> = xs.iter().map(|x| g.apply(alg, x)).collect();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| alg.bracket_unchecked(&xs[i], &gx[j]).add(&alg.bracket_unchecked(&gx[i], &xs[j])).neg())
                .collect()
        })
        .collect()
}

/// Curvature of the connection deformed by `Γ`.
pub fn deform_curvature(alg: &GradedLieAlgebra, g: &DeformationTensor, k: &CurvatureData) -> Result<CurvatureData> {
    check_gamma(alg, g)?;
    k.check(alg)?;
    let ng = g.nabla_gamma.as_ref().ok_or_else(|| Error::MissingBinding("∇Γ is needed for κ̄1".into()))?;
    let n = alg.dim_grade(-1);
    let d0 = delta_kappa0(alg, g);
    let mut out = k.clone();
    out.nabla_kappa = None;
    for i in 0..n {
        for j in 0..n {
            out.kappa_0[i][j] = k.kappa_0[i][j].add(&d0[i][j]);
            // −∇_XΓ·Y + ∇_YΓ·X − Γ(κ−1(X, Y))
            let mut c1 = ng[j].column(i);
            for (a, b) in c1.iter_mut().zip(ng[i].column(j)) {
                *a -= b;
            }
            let gk = g.gamma.mul_vec(k.kappa_m1[i][j].part(-1));
            for (a, b) in c1.iter_mut().zip(gk) {
                *a -= b;
            }
            out.kappa_1[i][j] = k.kappa_1[i][j].add(&alg.from_part(1, c1)?);
        }
    }
    Ok(out)
}

/// `T_lj = Σ_i K^i_lij`.
pub fn trace_curvature(alg: &GradedLieAlgebra, kappa_0: &[Vec<Element>]) -> Result<Matrix> {
    let n = conformal_dim(alg)?;
    let mats: Vec<Vec<Matrix>> = kappa_0.iter().map(|r| r.iter().map(|e| alg.ad_on_minus(e)).collect()).collect();
    Ok(Matrix::from_fn(n, n, |l, j| (0..n).map(|i| mats[i][j][(l, i)].clone()).sum()))
}

/// `G_ij = Σ_k K^k_kij`, the trace inside `g0`.
pub fn g0_trace(alg: &GradedLieAlgebra, kappa_0: &[Vec<Element>]) -> Result<Matrix> {
    let n = conformal_dim(alg)?;
    Ok(Matrix::from_fn(n, n, |i, j| alg.ad_on_minus(&kappa_0[i][j]).trace()))
}

/// Closed form of the change of `T_kj`: `(m−3)Γ_kj + Γ_jk + δ_kj Σ Γ_ii`.
pub fn delta_trace_closed(gamma: &Matrix) -> Matrix {
    let m = gamma.rows();
    let tr = gamma.trace();
    Matrix::from_fn(m, m, |k, j| {
        let mut v = int(m as i64 - 3) * &gamma[(k, j)] + &gamma[(j, k)];
        if k == j {
            v += &tr;
        }
        v
    })
}

/// Closed form of the change of `G_ij`: `m(Γ_ji − Γ_ij)`.
pub fn delta_g0_trace_closed(gamma: &Matrix) -> Matrix {
    let m = gamma.rows();
    Matrix::from_fn(m, m, |i, j| int(m as i64) * (&gamma[(j, i)] - &gamma[(i, j)]))
}

/// Closed form of the change of the full contraction: `2(m−1) Σ Γ_ii`.
pub fn delta_scalar_closed(gamma: &Matrix) -> Rational {
    int(2 * (gamma.rows() as i64 - 1)) * gamma.trace()
}

/// `Γ_ij = −(R_ij − δ_ij R/(2(m−1)))/(m−2)`.
pub fn rho_tensor(alg: &GradedLieAlgebra, ricci: &Matrix, scalar: &Rational) -> Result<DeformationTensor> {
    let m = definite_dim(alg)?;
    if ricci.rows() != m || ricci.cols() != m {
        return Err(Error::Dimension(format!("Ricci tensor must be {m}x{m}")));
    }
    if ricci.transpose() != *ricci {
        return Err(Error::Domain("Ricci tensor must be symmetric".into()));
    }
    let mi = m as i64;
    let shift = scalar * frac(1, 2 * (mi - 1));
    let g = Matrix::from_fn(m, m, |i, j| {
        let mut v = ricci[(i, j)].clone();
        if i == j {
            v -= &shift;
        }
        v * frac(-1, mi - 2)
    });
    Ok(DeformationTensor::constant(g))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalization {
    pub gamma: DeformationTensor,
    /// Rank of the homogeneous system; uniqueness means rank = m².
    pub rank: usize,
    pub unknowns: usize,
    pub unique: bool,
    pub deformed_trace_max_abs: Rational,
    /// Whether `κ̄0` and `κ̄1` vanish; known only when full curvature was given.
    pub deformed_curvature_vanishes: Option<bool>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct NormalizationReport {
    pub gamma: Vec<Vec<String>>,
    pub deformed_trace_max_abs: String,
    pub unique: bool,
    pub rank: usize,
    pub unknowns: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub deformed_curvature_vanishes: Option<bool>,
}

pub fn matrix_strings(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|r| m.row(r).iter().map(to_fraction_string).collect()).collect()
}

impl Normalization {
    pub fn report(&self) -> NormalizationReport {
        NormalizationReport {
            gamma: matrix_strings(&self.gamma.gamma),
            deformed_trace_max_abs: to_fraction_string(&self.deformed_trace_max_abs),
            unique: self.unique,
            rank: self.rank,
            unknowns: self.unknowns,
            deformed_curvature_vanishes: self.deformed_curvature_vanishes,
        }
    }
}

fn solve_normalization(alg: &GradedLieAlgebra, t: &Matrix, g: &Matrix) -> Result<(Matrix, usize)> {
    let m = t.rows();
    let unknowns = m * m;
    // Columns: response of (T, G) to the unit deformation Γ_ab.
    let cols: Vec<Vec<Rational>> = (0..unknowns)
        .map(|u| {
            let mut e = Matrix::zeros(m, m);
            e[(u / m, u % m)] = int(1);
            let d = delta_kappa0(alg, &DeformationTensor { gamma: e, nabla_gamma: None });
            let mut v = trace_curvature(alg, &d).expect("conformal").data().to_vec();
            v.extend(g0_trace(alg, &d).expect("conformal").data().iter().cloned());
            v
        })
        .collect();
    let sys = Matrix::from_columns(2 * unknowns, &cols);
    let rank = sys.rank();
    let rhs: Vec<Rational> = t.data().iter().chain(g.data()).map(|x| -x.clone()).collect();
    let x = sys.solve(&rhs).ok_or_else(|| Error::Inconsistent("trace equations have no solution".into()))?;
    Ok((Matrix::from_fn(m, m, |a, b| x[a * m + b].clone()), rank))
}

fn finish(alg: &GradedLieAlgebra, kappa: &CurvatureData, gamma: Matrix, rank: usize) -> Result<Normalization> {
    let m = gamma.rows();
    let gamma = DeformationTensor::constant(gamma);
    let bar = deform_curvature(alg, &gamma, kappa)?;
    let t = trace_curvature(alg, &bar.kappa_0)?;
    let max = t.data().iter().map(|x| x.abs()).max().unwrap_or_else(Rational::zero);
    let vanishes = bar.kappa_0.iter().chain(&bar.kappa_1).flatten().all(Element::is_zero);
    Ok(Normalization {
        gamma,
        rank,
        unknowns: m * m,
        unique: rank == m * m,
        deformed_trace_max_abs: max,
        deformed_curvature_vanishes: Some(vanishes),
    })
}

/// The unique `Γ` whose deformation makes both traces of `κ0` vanish.
pub fn normalize_connection(alg: &GradedLieAlgebra, kappa: &CurvatureData) -> Result<Normalization> {
    definite_dim(alg)?;
    kappa.check(alg)?;
    if kappa.kappa_m1.iter().flatten().any(|e| !e.is_zero()) {
        return Err(Error::Domain("normalisation needs a torsion-free connection (κ−1 = 0)".into()));
    }
    kappa.check_antisymmetric()?;
    let t = trace_curvature(alg, &kappa.kappa_0)?;
    let g = g0_trace(alg, &kappa.kappa_0)?;
    let (gamma, rank) = solve_normalization(alg, &t, &g)?;
    finish(alg, kappa, gamma, rank)
}

/// Normalisation from Ricci data alone (`T = Ric`, `G = 0`).
pub fn normalize_from_ricci(alg: &GradedLieAlgebra, ricci: &Matrix) -> Result<Normalization> {
    let m = definite_dim(alg)?;
    if ricci.rows() != m || ricci.cols() != m {
        return Err(Error::Dimension(format!("Ricci tensor must be {m}x{m}")));
    }
    let (gamma, rank) = solve_normalization(alg, ricci, &Matrix::zeros(m, m))?;
    let gamma = DeformationTensor::constant(gamma);
    let t = ricci.add(&trace_curvature(alg, &delta_kappa0(alg, &gamma))?);
    let max = t.data().iter().map(|x| x.abs()).max().unwrap_or_else(Rational::zero);
    Ok(Normalization {
        gamma,
        rank,
        unknowns: m * m,
        unique: rank == m * m,
        deformed_trace_max_abs: max,
        deformed_curvature_vanishes: None,
    })
}

/// Curvature at `σ(x)·exp(τ)` from curvature at `σ(x)`.
pub fn fiber_transport(alg: &GradedLieAlgebra, k: &CurvatureData, tau: &Element) -> Result<CurvatureData> {
    k.check(alg)?;
    if tau.dims() != alg.dims() || !tau.is_pure(1) {
        return Err(Error::Grade("τ must lie in g1".into()));
    }
    let n = alg.dim_grade(-1);
    let mut out = k.clone();
    out.nabla_kappa = None;
    for i in 0..n {
        for j in 0..n {
            let tm = alg.bracket_unchecked(tau, &k.kappa_m1[i][j]);
            out.kappa_0[i][j] = k.kappa_0[i][j].sub(&tm);
            let mut k1 = k.kappa_1[i][j].sub(&alg.bracket_unchecked(tau, &k.kappa_0[i][j]));
            k1.add_scaled(&half(), &alg.bracket_unchecked(tau, &tm));
            out.kappa_1[i][j] = k1;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionChange {
    pub gamma: DeformationTensor,
    /// `shift[i] = [e_i, υ]`: `∇^γ_{e_i} s = ∇^γ0_{e_i} s + λ(shift[i]) s`.
    pub shift: Vec<Element>,
}

/// Matrix of `X ↦ [υ, [υ, X]]` in the `Γ` convention.
pub fn double_bracket_matrix(alg: &GradedLieAlgebra, upsilon: &Element) -> Matrix {
    let n = alg.dim_grade(-1);
    let cols: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let x = alg.basis_element(-1, i);
            alg.bracket_unchecked(upsilon, &alg.bracket_unchecked(upsilon, &x)).part(1).to_vec()
        })
        .collect();
    Matrix::from_columns(n, &cols)
}

/// `Γ(X) = Γ0(X) − ∇υ(X) − ½[υ, [υ, X]]`, with `nabla_upsilon` in the `Γ` convention.
pub fn change_of_connection(
    alg: &GradedLieAlgebra,
    gamma0: &DeformationTensor,
    upsilon: &Element,
    nabla_upsilon: &Matrix,
) -> Result<ConnectionChange> {
    check_gamma(alg, gamma0)?;
    let n = alg.dim_grade(-1);
    if upsilon.dims() != alg.dims() || !upsilon.is_pure(1) {
        return Err(Error::Grade("υ must lie in g1".into()));
    }
    if nabla_upsilon.rows() != n || nabla_upsilon.cols() != n {
        return Err(Error::Dimension(format!("∇υ must be {n}x{n}")));
    }
    let g = gamma0.gamma.sub(nabla_upsilon).sub(&double_bracket_matrix(alg, upsilon).scale(&half()));
    let shift = (0..n).map(|i| alg.bracket_unchecked(&alg.basis_element(-1, i), upsilon)).collect();
    Ok(ConnectionChange { gamma: DeformationTensor { gamma: g, nabla_gamma: None }, shift })
}

/// `∇^γ1(−υ) = −(∇^γ0 υ + [[X, υ], υ])`, the data that undoes a change by `υ`.
pub fn reverse_change_derivative(alg: &GradedLieAlgebra, upsilon: &Element, nabla_upsilon: &Matrix) -> Matrix {
    // [[X, υ], υ] = [υ, [υ, X]]
    nabla_upsilon.add(&double_bracket_matrix(alg, upsilon)).scale(&int(-1))
}

/// `Σ_cycl [κ(X,Y), Z] − κ(κ−1(X,Y), Z) − ∇_Z κ(X,Y)` on basis triples, `[i][j][z]`.
pub fn bianchi_defect(alg: &GradedLieAlgebra, k: &CurvatureData) -> Result<Vec<Vec<Vec<Element>>>> {
    k.check(alg)?;
    let nk = k.nabla_kappa.as_ref().ok_or_else(|| Error::MissingBinding("∇κ is needed for the Bianchi defect".into()))?;
    let n = alg.dim_grade(-1);
    let kappa = |x: &[Rational], j: usize| -> Element {
        let mut e = alg.zero();
        for (i, c) in x.iter().enumerate() {
            if !c.is_zero() {
                e.add_scaled(c, &k.total(i, j));
            }
        }
        e
    };
    let term = |a: usize, b: usize, c: usize| -> Element {
        let z = alg.basis_element(-1, c);
        alg.bracket_unchecked(&k.total(a, b), &z).sub(&kappa(k.kappa_m1[a][b].part(-1), c)).sub(&nk[a][b][c])
    };
    Ok((0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|z| term(i, j, z).add(&term(j, z, i)).add(&term(z, i, j))).collect())
                .collect()
        })
        .collect())
}

/// A scalar given either as a JSON number or as a `"num/den"` string.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum Scalar {
    Int(i64),
    Text(String),
}

impl Scalar {
    fn value(&self) -> Result<Rational> {
        match self {
            Scalar::Int(i) => Ok(int(*i)),
            Scalar::Text(s) => parse_rational(s),
        }
    }
}

/// Curvature input document.
///
/// One of `{"m", "ricci", "scalar"?}`, `{"m", "riemann": {"k,l,i,j": value}}`
/// (indices from 1) or `{"m", "preset": "sphere" | "flat"}`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurvatureInput {
    pub m: usize,
    #[serde(default)]
    ricci: Option<Vec<Vec<Scalar>>>,
    #[serde(default)]
    scalar: Option<Scalar>,
    #[serde(default)]
    riemann: Option<BTreeMap<String, Scalar>>,
    #[serde(default)]
    preset: Option<String>,
}

#[derive(Clone, Debug)]
pub enum ParsedCurvature {
    Ricci { ricci: Matrix, scalar: Rational },
    Full(CurvatureData),
}

impl CurvatureInput {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn resolve(&self, alg: &GradedLieAlgebra) -> Result<ParsedCurvature> {
        let m = definite_dim(alg)?;
        if m != self.m {
            return Err(Error::Dimension(format!("input is for m = {}, algebra has m = {m}", self.m)));
        }
        let given = [self.ricci.is_some(), self.riemann.is_some(), self.preset.is_some()].iter().filter(|b| **b).count();
        if given != 1 {
            return Err(Error::Parse("exactly one of ricci, riemann, preset is required".into()));
        }
        if let Some(p) = &self.preset {
            return match p.as_str() {
                "sphere" => Ok(ParsedCurvature::Full(CurvatureData::sphere(alg)?)),
                "flat" => Ok(ParsedCurvature::Full(CurvatureData::flat(alg))),
                other => Err(Error::Parse(format!("unknown preset {other:?}"))),
            };
        }
        if let Some(rows) = &self.ricci {
            if rows.len() != m || rows.iter().any(|r| r.len() != m) {
                return Err(Error::Dimension(format!("ricci must be {m}x{m}")));
            }
            let vals = rows.iter().map(|r| r.iter().map(Scalar::value).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
            let ricci = Matrix::from_rows(vals)?;
            let scalar = match &self.scalar {
                Some(s) => s.value()?,
                None => ricci.trace(),
            };
            if scalar != ricci.trace() {
                return Err(Error::Inconsistent("scalar curvature is not the trace of ricci".into()));
            }
            return Ok(ParsedCurvature::Ricci { ricci, scalar });
        }
        let mut entries: BTreeMap<(usize, usize, usize, usize), Rational> = BTreeMap::new();
        for (key, v) in self.riemann.as_ref().expect("checked above") {
            let idx: Vec<usize> = key
                .split(',')
                .map(|p| p.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad index key {key:?}"))))
                .collect::<Result<_>>()?;
            if idx.len() != 4 || idx.iter().any(|&i| i == 0 || i > m) {
                return Err(Error::Parse(format!("index key {key:?} must be four indices in 1..={m}")));
            }
            entries.insert((idx[0] - 1, idx[1] - 1, idx[2] - 1, idx[3] - 1), v.value()?);
        }
        let data = CurvatureData::from_riemann(alg, |k, l, i, j| entries.get(&(k, l, i, j)).cloned().unwrap_or_else(Rational::zero))?;
        Ok(ParsedCurvature::Full(data))
    }
}
