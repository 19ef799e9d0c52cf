//! The four classical |1|-graded matrix Lie algebras `g = g-1 ⊕ g0 ⊕ g1`.
//!
//! Every algebra is realised by block matrices. Basis elements are stored in
//! the order `g-1`, `g0`, `g1`; the first `g0` basis element is always the
//! grading element `I`, normalised so that `[I, X] = X` on `g-1` and
//! `[I, Z] = -Z` on `g1`. The remaining `g0` basis elements span `[g0, g0]`,
//! so the `I`-coordinate of a `g0` element is its central part.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{vec_axpy, vec_is_zero, Matrix};
use crate::rational::{frac, half, int, to_fraction_string, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    Grassmannian { p: usize, q: usize },
    Conformal { m: usize, n: usize },
    Lagrangian { n: usize },
    Spinorial { n: usize },
}

impl Family {
    pub fn params(&self) -> Vec<usize> {
        match *self {
            Family::Grassmannian { p, q } => vec![p, q],
            Family::Conformal { m, n } => vec![m, n],
            Family::Lagrangian { n } | Family::Spinorial { n } => vec![n],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Grassmannian { .. } => "grassmannian",
            Family::Conformal { .. } => "conformal",
            Family::Lagrangian { .. } => "lagrangian",
            Family::Spinorial { .. } => "spinorial",
        }
    }

    pub fn from_parts(name: &str, params: &[usize]) -> Result<Self> {
        let f = match (name, params) {
            ("grassmannian", [p, q]) => Family::Grassmannian { p: *p, q: *q },
            ("conformal", [m]) => Family::Conformal { m: *m, n: 0 },
            ("conformal", [m, n]) => Family::Conformal { m: *m, n: *n },
            ("lagrangian", [n]) => Family::Lagrangian { n: *n },
            ("spinorial", [n]) => Family::Spinorial { n: *n },
            _ => return Err(Error::Parse(format!("unknown family {name}{params:?}"))),
        };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Family::Grassmannian { p, q } => p >= 1 && q >= 1,
            Family::Conformal { m, n } => m + n >= 3,
            Family::Lagrangian { n } | Family::Spinorial { n } => n >= 2,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("invalid parameters for {self}")))
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.params().iter().map(usize::to_string).collect();
        write!(f, "{}({})", self.name(), p.join(","))
    }
}

/// Parses `conformal(4,0)`, `conformal(4)`, `grassmannian(1,3)`, ...
impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, rest) = s.split_once('(').ok_or_else(|| Error::Parse(format!("expected family(params): {s:?}")))?;
        let inner = rest.strip_suffix(')').ok_or_else(|| Error::Parse(format!("missing ')': {s:?}")))?;
        let params = inner
            .split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad parameter {p:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Family::from_parts(name.trim(), &params)
    }
}

/// Grade-indexed coordinates: `parts[0]` is `g-1`, `parts[1]` is `g0`,
/// `parts[2]` is `g1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Element {
    pub parts: [Vec<Rational>; 3],
}

fn slot(grade: i8) -> usize {
    (grade + 1) as usize
}

impl Element {
    pub fn zero_with_dims(dims: [usize; 3]) -> Self {
        Element { parts: dims.map(|d| vec![Rational::zero(); d]) }
    }

    pub fn part(&self, grade: i8) -> &[Rational] {
        &self.parts[slot(grade)]
    }

    pub fn part_mut(&mut self, grade: i8) -> &mut Vec<Rational> {
        &mut self.parts[slot(grade)]
    }

    pub fn dims(&self) -> [usize; 3] {
        [self.parts[0].len(), self.parts[1].len(), self.parts[2].len()]
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(|p| vec_is_zero(p))
    }

    /// The single grade carrying nonzero coordinates, if there is exactly one.
    pub fn pure_grade(&self) -> Option<i8> {
        let nz: Vec<i8> = (-1..=1).filter(|&g| !vec_is_zero(self.part(g))).collect();
        match nz.as_slice() {
            [g] => Some(*g),
            _ => None,
        }
    }

    pub fn is_pure(&self, grade: i8) -> bool {
        (-1..=1).filter(|&g| g != grade).all(|g| vec_is_zero(self.part(g)))
    }

    pub fn grade_component(&self, grade: i8) -> Element {
        let mut e = Element::zero_with_dims(self.dims());
        e.parts[slot(grade)] = self.part(grade).to_vec();
        e
    }

    pub fn add(&self, o: &Element) -> Element {
        let mut e = self.clone();
        e.add_scaled(&Rational::one(), o);
        e
    }

    pub fn sub(&self, o: &Element) -> Element {
        let mut e = self.clone();
        e.add_scaled(&-Rational::one(), o);
        e
    }

    pub fn scale(&self, s: &Rational) -> Element {
        Element { parts: self.parts.clone().map(|p| p.iter().map(|x| x * s).collect()) }
    }

    pub fn neg(&self) -> Element {
        self.scale(&-Rational::one())
    }

    pub fn add_scaled(&mut self, s: &Rational, o: &Element) {
        assert_eq!(self.dims(), o.dims(), "element dimension mismatch");
        for g in 0..3 {
            vec_axpy(&mut self.parts[g], s, &o.parts[g]);
        }
    }

    /// Flat coordinates in basis order.
    pub fn coords(&self) -> Vec<Rational> {
        self.parts.iter().flatten().cloned().collect()
    }
}

#[derive(Clone, Debug)]
pub struct BasisElement {
    pub label: String,
    pub grade: i8,
    pub matrix: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupFactorization {
    pub b0_part: Matrix,
    pub g1_log: Element,
}

/// JSON view of an algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraDescriptor {
    pub family: String,
    pub params: Vec<usize>,
    pub dims: [usize; 3],
    pub basis: Vec<String>,
    pub grades: Vec<i8>,
    /// `(a, b, c, value)`: `[e_a, e_b]` has `value` as its `e_c` coordinate.
    pub structure_constants: Vec<(usize, usize, usize, String)>,
}

#[derive(Clone, Debug)]
pub struct GradedLieAlgebra {
    family: Family,
    size: usize,
    block_of: Vec<usize>,
    orientation: i64,
    basis: Vec<BasisElement>,
    dims: [usize; 3],
    structure: Vec<Vec<Vec<(usize, Rational)>>>,
    killing: Matrix,
    coord_rows: Vec<usize>,
    coord_inv: Matrix,
    ad_minus: Vec<Matrix>,
}

fn unit(n: usize, i: usize, j: usize) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    m[(i, j)] = Rational::one();
    m
}

fn sl_basis(n: usize, offset: usize, size: usize, label: &str, out: &mut Vec<(String, Matrix)>) {
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out.push((format!("{label}E{}{}", i + 1, j + 1), unit(size, offset + i, offset + j)));
            }
        }
    }
    for i in 0..n.saturating_sub(1) {
        let mut h = unit(size, offset + i, offset + i);
        h[(offset + i + 1, offset + i + 1)] = -Rational::one();
        out.push((format!("{label}H{}", i + 1), h));
    }
}

/// `[[A, 0], [0, -A^T]]` for each `A` in a basis of `sl(n)`.
fn gl_embedded_basis(n: usize, out: &mut Vec<(String, Matrix)>) {
    let mut raw = Vec::new();
    sl_basis(n, 0, n, "", &mut raw);
    for (label, a) in raw {
        let mut m = Matrix::zeros(2 * n, 2 * n);
        m.set_block(0, 0, &a);
        m.set_block(n, n, &a.transpose().scale(&-Rational::one()));
        out.push((label, m));
    }
}

impl GradedLieAlgebra {
    pub fn build(family: Family) -> Result<Self> {
        family.validate()?;
        let mut minus: Vec<(String, Matrix)> = Vec::new();
        let mut zero: Vec<(String, Matrix)> = Vec::new();
        let mut plus: Vec<(String, Matrix)> = Vec::new();
        let (size, block_of, orientation) = match family {
            Family::Grassmannian { p, q } => {
                let n = p + q;
                for a in 0..q {
                    for b in 0..p {
                        minus.push((format!("x{}{}", a + 1, b + 1), unit(n, p + a, b)));
                        plus.push((format!("z{}{}", b + 1, a + 1), unit(n, b, p + a)));
                    }
                }
                let mut g = Matrix::zeros(n, n);
                for i in 0..n {
                    g[(i, i)] = if i < p { frac(-(q as i64), n as i64) } else { frac(p as i64, n as i64) };
                }
                zero.push(("I".into(), g));
                sl_basis(p, 0, n, "a", &mut zero);
                sl_basis(q, p, n, "b", &mut zero);
                let blocks = (0..n).map(|i| usize::from(i >= p)).collect();
                (n, blocks, 1)
            }
            Family::Conformal { m, n } => {
                let d = m + n;
                let size = d + 2;
                let j = |i: usize| if i < m { int(1) } else { int(-1) };
                for i in 0..d {
                    let mut x = Matrix::zeros(size, size);
                    x[(1 + i, 0)] = Rational::one();
                    x[(d + 1, 1 + i)] = -j(i);
                    minus.push((format!("e_{}", i + 1), x));
                    let mut z = Matrix::zeros(size, size);
                    z[(0, 1 + i)] = Rational::one();
                    z[(1 + i, d + 1)] = -j(i);
                    plus.push((format!("e^{}", i + 1), z));
                }
                let mut g = Matrix::zeros(size, size);
                g[(0, 0)] = -Rational::one();
                g[(d + 1, d + 1)] = Rational::one();
                zero.push(("I".into(), g));
                for a in 0..d {
                    for b in a + 1..d {
                        let mut x = unit(size, 1 + a, 1 + b);
                        x[(1 + b, 1 + a)] = -(j(a) * j(b));
                        zero.push((format!("A_{}{}", a + 1, b + 1), x));
                    }
                }
                let blocks = (0..size).map(|i| if i == 0 { 0 } else if i <= d { 1 } else { 2 }).collect();
                (size, blocks, 1)
            }
            Family::Lagrangian { n } | Family::Spinorial { n } => {
                let sym = matches!(family, Family::Lagrangian { .. });
                let size = 2 * n;
                for a in 0..n {
                    let start = if sym { a } else { a + 1 };
                    for b in start..n {
                        let mut s = unit(n, a, b);
                        if a != b {
                            s[(b, a)] = if sym { int(1) } else { int(-1) };
                        }
                        let mut x = Matrix::zeros(size, size);
                        x.set_block(0, n, &s);
                        minus.push((format!("x{}{}", a + 1, b + 1), x));
                        let mut z = Matrix::zeros(size, size);
                        z.set_block(n, 0, &s);
                        plus.push((format!("z{}{}", a + 1, b + 1), z));
                    }
                }
                let mut g = Matrix::zeros(size, size);
                for i in 0..size {
                    g[(i, i)] = if i < n { half() } else { -half() };
                }
                zero.push(("I".into(), g));
                gl_embedded_basis(n, &mut zero);
                let blocks = (0..size).map(|i| usize::from(i >= n)).collect();
                (size, blocks, -1)
            }
        };

        let dims = [minus.len(), zero.len(), plus.len()];
        let mut basis = Vec::new();
        for (grade, list) in [(-1i8, minus), (0, zero), (1, plus)] {
            for (label, matrix) in list {
                basis.push(BasisElement { label, grade, matrix });
            }
        }
        let flat: Vec<Vec<Rational>> = basis.iter().map(|b| b.matrix.data().to_vec()).collect();
        let bm = Matrix::from_columns(size * size, &flat);
        let (coord_rows, coord_inv) = bm.left_inverse_rows()?;

        let mut alg = GradedLieAlgebra {
            family,
            size,
            block_of,
            orientation,
            basis,
            dims,
            structure: Vec::new(),
            killing: Matrix::zeros(0, 0),
            coord_rows,
            coord_inv,
            ad_minus: Vec::new(),
        };
        alg.check_block_grades()?;

        let d = alg.dim();
        let mut structure = vec![vec![Vec::new(); d]; d];
        for a in 0..d {
            for b in a + 1..d {
                let c = alg.basis[a].matrix.commutator(&alg.basis[b].matrix);
                let coords = alg.coords_of_matrix(&c)?;
                let sparse: Vec<(usize, Rational)> =
                    coords.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect();
                structure[b][a] = sparse.iter().map(|(i, v)| (*i, -v.clone())).collect();
                structure[a][b] = sparse;
            }
        }
        alg.structure = structure;

        let (n1, n0) = (dims[0], dims[1]);
        let ads: Vec<Matrix> = (0..d).map(|a| alg.ad_matrix_basis(a)).collect();
        alg.killing = Matrix::from_fn(n1, dims[2], |i, j| ads[i].mul(&ads[n1 + n0 + j]).trace());
        if alg.killing.rank() != n1 || n1 != dims[2] {
            return Err(Error::Inconsistent("Killing pairing is degenerate".into()));
        }
        alg.ad_minus = (0..n0)
            .map(|k| {
                let mut m = Matrix::zeros(n1, n1);
                for x in 0..n1 {
                    for (c, v) in &alg.structure[n1 + k][x] {
                        m[(*c, x)] = v.clone();
                    }
                }
                m
            })
            .collect();
        Ok(alg)
    }

    /// Each basis matrix must live exactly in the block positions of its grade.
    fn check_block_grades(&self) -> Result<()> {
        for b in &self.basis {
            for r in 0..self.size {
                for c in 0..self.size {
                    if !b.matrix[(r, c)].is_zero() && self.position_grade(r, c) != b.grade as i64 {
                        return Err(Error::Inconsistent(format!("{} leaves its block pattern", b.label)));
                    }
                }
            }
        }
        Ok(())
    }

    fn position_grade(&self, r: usize, c: usize) -> i64 {
        self.orientation * (self.block_of[c] as i64 - self.block_of[r] as i64)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Size of the defining matrices.
    pub fn matrix_size(&self) -> usize {
        self.size
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn dim_grade(&self, grade: i8) -> usize {
        self.dims[slot(grade)]
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    /// Global basis index of the `i`-th element of the given grade.
    pub fn index(&self, grade: i8, i: usize) -> usize {
        let off = match grade {
            -1 => 0,
            0 => self.dims[0],
            _ => self.dims[0] + self.dims[1],
        };
        off + i
    }

    fn split(&self, global: usize) -> (i8, usize) {
        if global < self.dims[0] {
            (-1, global)
        } else if global < self.dims[0] + self.dims[1] {
            (0, global - self.dims[0])
        } else {
            (1, global - self.dims[0] - self.dims[1])
        }
    }

    pub fn zero(&self) -> Element {
        Element::zero_with_dims(self.dims)
    }

    pub fn basis_element(&self, grade: i8, i: usize) -> Element {
        let mut e = self.zero();
        e.part_mut(grade)[i] = Rational::one();
        e
    }

    pub fn from_part(&self, grade: i8, coords: Vec<Rational>) -> Result<Element> {
        if coords.len() != self.dim_grade(grade) {
            return Err(Error::Dimension(format!("grade {grade} needs {} coordinates", self.dim_grade(grade))));
        }
        let mut e = self.zero();
        *e.part_mut(grade) = coords;
        Ok(e)
    }

    pub fn from_coords(&self, coords: &[Rational]) -> Result<Element> {
        if coords.len() != self.dim() {
            return Err(Error::Dimension(format!("expected {} coordinates", self.dim())));
        }
        let mut e = self.zero();
        for (i, c) in coords.iter().enumerate() {
            let (g, k) = self.split(i);
            e.part_mut(g)[k] = c.clone();
        }
        Ok(e)
    }

    fn check(&self, x: &Element) -> Result<()> {
        if x.dims() != self.dims {
            return Err(Error::Dimension(format!("element dims {:?} vs algebra {:?}", x.dims(), self.dims)));
        }
        Ok(())
    }

    pub fn grading_element(&self) -> Element {
        self.basis_element(0, 0)
    }

    /// Coefficient of `I` in the `g0` part of `a`.
    pub fn center_coefficient(&self, a: &Element) -> Rational {
        a.part(0)[0].clone()
    }

    pub fn bracket(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &Element, y: &Element) -> Element {
        let mut out = self.zero();
        let xs: Vec<(usize, &Rational)> = self.nonzero(x);
        let ys: Vec<(usize, &Rational)> = self.nonzero(y);
        for (a, xa) in &xs {
            for (b, yb) in &ys {
                for (c, v) in &self.structure[*a][*b] {
                    let (g, k) = self.split(*c);
                    out.part_mut(g)[k] += *xa * *yb * v;
                }
            }
        }
        out
    }

    fn nonzero<'a>(&self, x: &'a Element) -> Vec<(usize, &'a Rational)> {
        let mut v = Vec::new();
        for g in -1..=1i8 {
            for (i, c) in x.part(g).iter().enumerate() {
                if !c.is_zero() {
                    v.push((self.index(g, i), c));
                }
            }
        }
        v
    }

    /// Sparse structure constants of `[e_a, e_b]`.
    pub fn structure_constants(&self, a: usize, b: usize) -> &[(usize, Rational)] {
        &self.structure[a][b]
    }

    pub fn matrix_of(&self, x: &Element) -> Matrix {
        let mut m = Matrix::zeros(self.size, self.size);
        for (a, c) in self.nonzero(x) {
            m.add_scaled(c, &self.basis[a].matrix);
        }
        m
    }

    fn coords_of_matrix(&self, m: &Matrix) -> Result<Vec<Rational>> {
        let picked: Vec<Rational> = self.coord_rows.iter().map(|&r| m.data()[r].clone()).collect();
        let coords = self.coord_inv.mul_vec(&picked);
        let mut back = Matrix::zeros(self.size, self.size);
        for (a, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                back.add_scaled(c, &self.basis[a].matrix);
            }
        }
        if &back != m {
            return Err(Error::Membership("matrix is not in the algebra".into()));
        }
        Ok(coords)
    }

    /// Inverse of [`matrix_of`](Self::matrix_of); fails for matrices outside `g`.
    pub fn element_of_matrix(&self, m: &Matrix) -> Result<Element> {
        if m.rows() != self.size || m.cols() != self.size {
            return Err(Error::Dimension(format!("expected a {0}x{0} matrix", self.size)));
        }
        self.from_coords(&self.coords_of_matrix(m)?)
    }

    fn ad_matrix_basis(&self, a: usize) -> Matrix {
        let d = self.dim();
        let mut m = Matrix::zeros(d, d);
        for b in 0..d {
            for (c, v) in &self.structure[a][b] {
                m[(*c, b)] = v.clone();
            }
        }
        m
    }

    /// Matrix of `ad(x)` on the whole algebra, in basis order.
    pub fn ad_matrix(&self, x: &Element) -> Matrix {
        let d = self.dim();
        let mut m = Matrix::zeros(d, d);
        for (a, c) in self.nonzero(x) {
            m.add_scaled(c, &self.ad_matrix_basis(a));
        }
        m
    }

    /// `tr(ad x ∘ ad y)` on arbitrary elements.
    pub fn killing_form(&self, x: &Element, y: &Element) -> Rational {
        self.ad_matrix(x).mul(&self.ad_matrix(y)).trace()
    }

    /// Killing pairing matrix `B(e_i, e^j)` between the `g-1` and `g1` bases.
    pub fn killing_pairing(&self) -> &Matrix {
        &self.killing
    }

    /// `(ξ_α, η_α)` with `ξ_α` the `g-1` basis and `η_α ∈ g1` Killing-dual to it,
    /// so that `Σ_α B(ξ_α, Z) η_α = Z` for every `Z ∈ g1`.
    pub fn killing_dual_bases(&self) -> (Vec<Element>, Vec<Element>) {
        let n = self.dims[0];
        let inv = self.killing.inverse().expect("Killing pairing is nondegenerate");
        let xi = (0..n).map(|a| self.basis_element(-1, a)).collect();
        let eta = (0..n).map(|b| self.from_part(1, inv.column(b)).expect("dims")).collect();
        (xi, eta)
    }

    /// Matrix of `ad(A)` restricted to `g-1`, for `A ∈ g0` (coordinates in `g-1`).
    pub fn ad_on_minus(&self, a: &Element) -> Matrix {
        let n = self.dims[0];
        let mut m = Matrix::zeros(n, n);
        for (k, c) in a.part(0).iter().enumerate() {
            if !c.is_zero() {
                m.add_scaled(c, &self.ad_minus[k]);
            }
        }
        m
    }

    /// `X + [Z, X] + ½[Z, [Z, X]]`, the full adjoint series of `exp(Z)` on `X`.
    pub fn ad_exp(&self, z: &Element, x: &Element) -> Result<Element> {
        self.check(z)?;
        self.check(x)?;
        if !z.is_pure(1) {
            return Err(Error::Grade("ad_exp needs z in g1".into()));
        }
        if !x.is_pure(-1) {
            return Err(Error::Grade("ad_exp needs x in g-1".into()));
        }
        let zx = self.bracket_unchecked(z, x);
        let zzx = self.bracket_unchecked(z, &zx);
        let mut out = x.add(&zx);
        out.add_scaled(&half(), &zzx);
        Ok(out)
    }

    /// Exact exponential of a nilpotent matrix.
    pub fn exp_nilpotent(m: &Matrix) -> Result<Matrix> {
        let n = m.rows();
        let mut out = Matrix::identity(n);
        let mut term = Matrix::identity(n);
        for k in 1..=n {
            term = term.mul(m).scale(&frac(1, k as i64));
            if term.is_zero() {
                return Ok(out);
            }
            out = out.add(&term);
        }
        if term.is_zero() {
            Ok(out)
        } else {
            Err(Error::Inconsistent("matrix is not nilpotent".into()))
        }
    }

    fn log_unipotent(u: &Matrix) -> Result<Matrix> {
        let n = u.rows();
        let nil = u.sub(&Matrix::identity(n));
        let mut out = Matrix::zeros(n, n);
        let mut power = Matrix::identity(n);
        for k in 1..=n {
            power = power.mul(&nil);
            if power.is_zero() {
                return Ok(out);
            }
            let sign = if k % 2 == 1 { int(1) } else { int(-1) };
            out = out.add(&power.scale(&(sign * frac(1, k as i64))));
        }
        if power.mul(&nil).is_zero() {
            Ok(out)
        } else {
            Err(Error::Membership("unipotent factor expected".into()))
        }
    }

    pub fn exp_element(&self, z: &Element) -> Result<Matrix> {
        Self::exp_nilpotent(&self.matrix_of(z))
    }

    /// Splits `b = b0 · exp(Z)` with `b0` in the block-diagonal pattern of
    /// `B0` and `Z ∈ g1`.
    pub fn factor_group_element(&self, b: &Matrix) -> Result<GroupFactorization> {
        if b.rows() != self.size || b.cols() != self.size {
            return Err(Error::Dimension(format!("expected a {0}x{0} matrix", self.size)));
        }
        let mut b0 = Matrix::zeros(self.size, self.size);
        for r in 0..self.size {
            for c in 0..self.size {
                let g = self.position_grade(r, c);
                if g < 0 && !b[(r, c)].is_zero() {
                    return Err(Error::Membership(format!("entry ({r},{c}) lies in the g-1 pattern")));
                }
                if g == 0 {
                    b0[(r, c)] = b[(r, c)].clone();
                }
            }
        }
        let b0_inv = b0.inverse().map_err(|_| Error::Membership("block-diagonal part is singular".into()))?;
        for x in 0..self.dims[0] {
            let conj = b0.mul(&self.basis[x].matrix).mul(&b0_inv);
            match self.element_of_matrix(&conj) {
                Ok(e) if e.is_pure(-1) => {}
                _ => return Err(Error::Membership("block-diagonal part does not normalise g-1".into())),
            }
        }
        let log = Self::log_unipotent(&b0_inv.mul(b))?;
        let g1_log = self.element_of_matrix(&log).map_err(|_| Error::Membership("unipotent part is not exp(g1)".into()))?;
        if !g1_log.is_pure(1) {
            return Err(Error::Membership("unipotent part is not exp(g1)".into()));
        }
        Ok(GroupFactorization { b0_part: b0, g1_log })
    }

    /// Eigenvalue of `ad(I)` on each nonzero grade component of `v`.
    pub fn grading_scalars(&self, v: &Element) -> Result<BTreeMap<i8, Rational>> {
        self.check(v)?;
        let id = self.grading_element();
        let mut out = BTreeMap::new();
        for g in -1..=1i8 {
            let comp = v.grade_component(g);
            if comp.is_zero() {
                continue;
            }
            let img = self.bracket_unchecked(&id, &comp);
            let (k, c) = comp.part(g).iter().enumerate().find(|(_, c)| !c.is_zero()).unwrap();
            let s = &img.part(g)[k] / c;
            if img != comp.scale(&s) {
                return Err(Error::Inconsistent("grading element does not act by a scalar".into()));
            }
            let _ = k;
            out.insert(g, s);
        }
        Ok(out)
    }

    pub fn label(&self, grade: i8, i: usize) -> &str {
        &self.basis[self.index(grade, i)].label
    }

    pub fn descriptor(&self) -> AlgebraDescriptor {
        let mut sc = Vec::new();
        for a in 0..self.dim() {
            for b in 0..self.dim() {
                for (c, v) in &self.structure[a][b] {
                    sc.push((a, b, *c, to_fraction_string(v)));
                }
            }
        }
        AlgebraDescriptor {
            family: self.family.name().into(),
            params: self.family.params(),
            dims: self.dims,
            basis: self.basis.iter().map(|b| b.label.clone()).collect(),
            grades: self.basis.iter().map(|b| b.grade).collect(),
            structure_constants: sc,
        }
    }

    /// Every Jacobi defect over basis triples, as `(a, b, c)` with a nonzero sum.
    pub fn jacobi_defects(&self) -> Vec<(usize, usize, usize)> {
        let d = self.dim();
        let es: Vec<Element> = (0..d).map(|i| {
            let (g, k) = self.split(i);
            self.basis_element(g, k)
        }).collect();
        let mut bad = Vec::new();
        for a in 0..d {
            for b in a + 1..d {
                let ab = self.bracket_unchecked(&es[a], &es[b]);
                for c in b + 1..d {
                    let bc = self.bracket_unchecked(&es[b], &es[c]);
                    let ca = self.bracket_unchecked(&es[c], &es[a]);
                    let s = self
                        .bracket_unchecked(&es[a], &bc)
                        .add(&self.bracket_unchecked(&es[b], &ca))
                        .add(&self.bracket_unchecked(&es[c], &ab));
                    if !s.is_zero() {
                        bad.push((a, b, c));
                    }
                }
            }
        }
        bad
    }

    /// Basis-pair violations of `[g_i, g_j] ⊆ g_{i+j}`.
    pub fn grading_defects(&self) -> Vec<(usize, usize)> {
        let d = self.dim();
        let mut bad = Vec::new();
        for a in 0..d {
            for b in 0..d {
                let (ga, gb) = (self.split(a).0, self.split(b).0);
                let target = ga + gb;
                let ok = self.structure[a][b].iter().all(|(c, _)| self.split(*c).0 == target);
                if !ok || (target.abs() > 1 && !self.structure[a][b].is_empty()) {
                    bad.push((a, b));
                }
            }
        }
        bad
    }

    /// Basis element at a global index.
    pub fn element_at(&self, global: usize) -> Element {
        let (g, k) = self.split(global);
        self.basis_element(g, k)
    }

    pub fn grade_of(&self, global: usize) -> i8 {
        self.split(global).0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn conformal(m: usize) -> GradedLieAlgebra {
        GradedLieAlgebra::build(Family::Conformal { m, n: 0 }).unwrap()
    }

    #[test]
    fn dimensions_of_examples() {
        let g = GradedLieAlgebra::build(Family::Grassmannian { p: 1, q: 3 }).unwrap();
        assert_eq!(g.dim_grade(-1), 3);
        assert_eq!(g.dim(), 15);
        let c = conformal(3);
        assert_eq!(c.dims(), [3, 4, 3]);
        let l = GradedLieAlgebra::build(Family::Lagrangian { n: 2 }).unwrap();
        assert_eq!(l.dim_grade(-1), 3);
        assert_eq!(l.dim(), 10);
        let s = GradedLieAlgebra::build(Family::Spinorial { n: 3 }).unwrap();
        assert_eq!(s.dims(), [3, 9, 3]);
    }

    #[test]
    fn parameter_domain() {
        for f in [
            Family::Grassmannian { p: 0, q: 2 },
            Family::Conformal { m: 2, n: 0 },
            Family::Lagrangian { n: 1 },
            Family::Spinorial { n: 1 },
        ] {
            assert!(matches!(GradedLieAlgebra::build(f), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn family_parse_display() {
        let f: Family = "conformal(4)".parse().unwrap();
        assert_eq!(f, Family::Conformal { m: 4, n: 0 });
        assert_eq!(f.to_string(), "conformal(4,0)");
        assert!("conformal(4".parse::<Family>().is_err());
        assert!("torus(3)".parse::<Family>().is_err());
    }

    #[test]
    fn conformal_bracket_of_frames() {
        // [e_i, e^j] acts on g-1 as E_ij - E_ji + δ_ij id.
        let c = conformal(4);
        for i in 0..4 {
            for j in 0..4 {
                let br = c.bracket(&c.basis_element(-1, i), &c.basis_element(1, j)).unwrap();
                assert!(br.is_pure(0) || br.is_zero());
                let ad = c.ad_on_minus(&br);
                let mut expect = Matrix::zeros(4, 4);
                expect[(i, j)] += int(1);
                expect[(j, i)] -= int(1);
                if i == j {
                    expect = expect.add(&Matrix::identity(4));
                }
                assert_eq!(ad, expect, "i={i} j={j}");
                assert_eq!(c.center_coefficient(&br), if i == j { int(1) } else { int(0) });
            }
        }
    }

    #[test]
    fn antisymmetry_on_basis() {
        let c = conformal(3);
        for a in 0..c.dim() {
            let x = c.element_at(a);
            assert!(c.bracket(&x, &x).unwrap().is_zero());
        }
    }

    #[test]
    fn lagrangian_bracket_is_product() {
        let l = GradedLieAlgebra::build(Family::Lagrangian { n: 2 }).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let x = l.basis_element(-1, i);
                let z = l.basis_element(1, j);
                let xm = l.matrix_of(&x).block(0, 2, 2, 2);
                let zm = l.matrix_of(&z).block(2, 0, 2, 2);
                let br = l.matrix_of(&l.bracket(&x, &z).unwrap());
                assert_eq!(br.block(0, 0, 2, 2), xm.mul(&zm));
            }
        }
    }

    #[test]
    fn grading_signs() {
        for f in [
            Family::Grassmannian { p: 2, q: 3 },
            Family::Conformal { m: 3, n: 1 },
            Family::Lagrangian { n: 3 },
            Family::Spinorial { n: 3 },
        ] {
            let a = GradedLieAlgebra::build(f).unwrap();
            let s = a.grading_scalars(&a.basis_element(-1, 0)).unwrap();
            assert_eq!(s[&-1], int(1), "{f}");
            let s = a.grading_scalars(&a.basis_element(1, 0)).unwrap();
            assert_eq!(s[&1], int(-1), "{f}");
            let s = a.grading_scalars(&a.basis_element(0, a.dim_grade(0) - 1)).unwrap();
            assert_eq!(s[&0], int(0), "{f}");
        }
    }

    #[test]
    fn ad_exp_conformal_example() {
        let c = conformal(3);
        let z = c.basis_element(1, 0);
        let x = c.basis_element(-1, 0);
        let got = c.ad_exp(&z, &x).unwrap();
        let mut expect = x.sub(&c.grading_element());
        expect.add_scaled(&-half(), &z);
        assert_eq!(got, expect);
        assert_eq!(c.ad_exp(&c.zero(), &x).unwrap(), x);
        assert!(c.ad_exp(&x, &x).is_err());
    }

    #[test]
    fn killing_dual_normalisation_conformal() {
        // so(N) has B(x, y) = (N - 2) tr(xy), and tr(e_i e^j) = 2 δ_ij.
        for m in 3..=5 {
            let c = conformal(m);
            let (_, eta) = c.killing_dual_bases();
            for (a, e) in eta.iter().enumerate() {
                let expect = c.basis_element(1, a).scale(&frac(1, 2 * m as i64));
                assert_eq!(e, &expect);
            }
        }
    }

    #[test]
    fn factor_trivial_cases() {
        let c = conformal(3);
        let z = c.basis_element(1, 1).scale(&int(3));
        let f = c.factor_group_element(&c.exp_element(&z).unwrap()).unwrap();
        assert_eq!(f.b0_part, Matrix::identity(5));
        assert_eq!(f.g1_log, z);
        let mut b0 = Matrix::identity(5);
        b0[(0, 0)] = frac(1, 2);
        b0[(4, 4)] = int(2);
        let f = c.factor_group_element(&b0).unwrap();
        assert_eq!(f.b0_part, b0);
        assert!(f.g1_log.is_zero());
        let x = c.exp_element(&c.basis_element(-1, 0)).unwrap();
        assert!(matches!(c.factor_group_element(&x), Err(Error::Membership(_))));
    }

    #[test]
    fn descriptor_roundtrip_json() {
        let c = conformal(3);
        let d = c.descriptor();
        let s = serde_json::to_string(&d).unwrap();
        let back: AlgebraDescriptor = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
        assert_eq!(d.basis.len(), 10);
    }
}
