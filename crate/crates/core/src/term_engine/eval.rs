//! Evaluation of term sums on concrete data.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{Action, Beta, Expansion};
use crate::error::{Error, Result};
use crate::graded_algebra::{Element, GradedLieAlgebra};
use crate::rational::Rational;
use crate::representation::Representation;

/// Concrete values for the symbols of a term sum.
///
/// `gamma[r]` holds `(∇^γ)^r Γ` as a flat tensor indexed `(d1, ..., dr, a, c)`:
/// the `e^c` coordinate of `((∇^γ)^r Γ)(e_d1, ..., e_dr)·e_a`. In particular
/// `gamma[0][a·n + c] = Γ_ca`. `jets[j]` holds `(∇^γ)^j s` indexed
/// `(i1, ..., ij, v)`, the last direction being the outermost derivative.
#[derive(Clone, Debug)]
pub struct Bindings {
    pub tau: Element,
    pub gamma: BTreeMap<usize, Vec<Rational>>,
    pub jets: BTreeMap<usize, Vec<Rational>>,
}

/// Contracts a flat tensor `(i1, ..., ip, tail)` against `p` vectors.
pub(crate) fn contract(t: &[Rational], n: usize, vecs: &[&[Rational]], tail: usize) -> Vec<Rational> {
    fn rec(t: &[Rational], n: usize, vecs: &[&[Rational]], tail: usize, base: usize, c: &Rational, acc: &mut [Rational]) {
        match vecs.split_first() {
            None => {
                for (a, x) in acc.iter_mut().zip(&t[base..base + tail]) {
                    if !x.is_zero() {
                        *a += c * x;
                    }
                }
            }
            Some((v, rest)) => {
                let stride = n.pow(rest.len() as u32) * tail;
                for (i, vi) in v.iter().enumerate() {
                    if !vi.is_zero() {
                        rec(t, n, rest, tail, base + i * stride, &(c * vi), acc);
                    }
                }
            }
        }
    }
    let mut acc = vec![Rational::zero(); tail];
    rec(t, n, vecs, tail, 0, &Rational::one(), &mut acc);
    acc
}

struct Ctx<'a> {
    alg: &'a GradedLieAlgebra,
    rep: &'a Representation,
    b: &'a Bindings,
    n: usize,
}

impl Ctx<'_> {
    fn beta(&self, beta: &Beta, args: &[Element]) -> Element {
        match beta {
            Beta::Arg(i) => args[i - 1].clone(),
            Beta::Tau => self.b.tau.clone(),
            Beta::Gamma { args: idx } => {
                let t = &self.b.gamma[&(idx.len() - 1)];
                let vecs: Vec<&[Rational]> = idx.iter().map(|i| args[i - 1].part(-1)).collect();
                let c = contract(t, self.n, &vecs, self.n);
                self.alg.from_part(1, c).expect("g1 dims")
            }
            Beta::Bracket(l, r) => self.alg.bracket_unchecked(&self.beta(l, args), &self.beta(r, args)),
        }
    }

    fn chain(&self, actions: &[Action], slots: &[usize], args: &[Element]) -> Vec<Rational> {
        let Some((first, rest)) = actions.split_first() else {
            let t = &self.b.jets[&slots.len()];
            let vecs: Vec<&[Rational]> = slots.iter().map(|i| args[i - 1].part(-1)).collect();
            return contract(t, self.n, &vecs, self.rep.carrier_dim);
        };
        let a = self.beta(&first.beta, args);
        if a.is_zero() {
            return vec![Rational::zero(); self.rep.carrier_dim];
        }
        let inner = self.chain(rest, slots, args);
        let mut out = self.rep.action_of(&a).mul_vec(&inner);
        for i in 0..first.t {
            let moved = self.alg.bracket_unchecked(&a, &args[i]);
            if moved.is_zero() {
                continue;
            }
            let mut shifted = args.to_vec();
            shifted[i] = moved;
            for (o, x) in out.iter_mut().zip(self.chain(rest, slots, &shifted)) {
                *o -= x;
            }
        }
        out
    }
}

fn check_bindings(e: &Expansion, rep: &Representation, b: &Bindings) -> Result<()> {
    let alg = &rep.algebra;
    let n = alg.dim_grade(-1);
    if b.tau.dims() != alg.dims() || !b.tau.is_pure(1) {
        return Err(Error::Grade("τ must be an element of g1".into()));
    }
    if let Some(r_max) = e.max_gamma_order() {
        for r in 0..=r_max {
            let t = b.gamma.get(&r).ok_or_else(|| Error::MissingBinding(format!("(∇^γ)^{r}Γ")))?;
            if t.len() != n.pow(r as u32 + 2) {
                return Err(Error::Dimension(format!("(∇^γ)^{r}Γ needs {} entries", n.pow(r as u32 + 2))));
            }
        }
    }
    for t in &e.terms {
        let j = t.deriv_order;
        let v = b.jets.get(&j).ok_or_else(|| Error::MissingBinding(format!("(∇^γ)^{j}s")))?;
        if v.len() != rep.tensor_dim(j) {
            return Err(Error::Dimension(format!("(∇^γ)^{j}s needs {} entries", rep.tensor_dim(j))));
        }
    }
    Ok(())
}

/// Value of the term sum on every tuple of `g-1` basis vectors, laid out as
/// `(i1, ..., ik, v)` like the coordinates of `⊗^k g-1* ⊗ V`.
pub fn evaluate(e: &Expansion, rep: &Representation, b: &Bindings) -> Result<Vec<Rational>> {
    check_bindings(e, rep, b)?;
    let alg: &GradedLieAlgebra = &rep.algebra;
    let n = alg.dim_grade(-1);
    let dv = rep.carrier_dim;
    let k = e.order;
    let ctx = Ctx { alg, rep, b, n };
    let basis: Vec<Element> = (0..n).map(|i| alg.basis_element(-1, i)).collect();
    let tuples = n.pow(k as u32);
    let values: Vec<Vec<Rational>> = (0..tuples)
        .into_par_iter()
        .map(|flat| {
            let mut args = Vec::with_capacity(k);
            let mut rem = flat;
            for p in (0..k).rev() {
                let stride = n.pow(p as u32);
                args.push(basis[rem / stride].clone());
                rem %= stride;
            }
            let mut acc = vec![Rational::zero(); dv];
            for t in &e.terms {
                let v = ctx.chain(&t.actions, &t.slots, &args);
                for (a, x) in acc.iter_mut().zip(v) {
                    if !x.is_zero() {
                        *a += &t.coeff * x;
                    }
                }
            }
            acc
        })
        .collect();
    Ok(values.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded_algebra::Family;
    use crate::rational::{frac, int};
    use crate::representation::RepDescriptor;
    use crate::term_engine::{expand, filter_by_tau};
    use std::sync::Arc;

    fn density(m: usize, w: Rational) -> Representation {
        let alg = Arc::new(GradedLieAlgebra::build(Family::Conformal { m, n: 0 }).unwrap());
        Representation::new(alg, &RepDescriptor::Density(w)).unwrap()
    }

    fn sphere_bindings(rep: &Representation, k: usize) -> Bindings {
        let n = rep.algebra.dim_grade(-1);
        let mut g0 = vec![int(0); n * n];
        for a in 0..n {
            g0[a * n + a] = frac(-1, 2);
        }
        let mut gamma = BTreeMap::new();
        gamma.insert(0, g0);
        for r in 1..k {
            gamma.insert(r, vec![int(0); n.pow(r as u32 + 2)]);
        }
        let mut jets = BTreeMap::new();
        jets.insert(0, vec![int(1)]);
        for j in 1..=k {
            jets.insert(j, vec![int(0); n.pow(j as u32)]);
        }
        Bindings { tau: rep.algebra.zero(), gamma, jets }
    }

    #[test]
    fn constant_section_on_sphere() {
        let rep = density(4, int(-1));
        let b = sphere_bindings(&rep, 2);
        let v = evaluate(&expand(2, None), &rep, &b).unwrap();
        assert_eq!(v[0], frac(-1, 2));
        assert_eq!(v[1], int(0));
        assert_eq!(v[5], frac(-1, 2));
    }

    #[test]
    fn zero_tau_kills_obstruction_terms() {
        let rep = density(3, frac(3, 2));
        let mut b = sphere_bindings(&rep, 3);
        b.jets.insert(1, vec![int(2), int(-1), int(5)]);
        let e = expand(3, None);
        for j in 1..=3 {
            let v = evaluate(&filter_by_tau(&e, j), &rep, &b).unwrap();
            assert!(v.iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn missing_binding_reported() {
        let rep = density(3, int(0));
        let mut b = sphere_bindings(&rep, 3);
        b.gamma.remove(&1);
        assert!(matches!(evaluate(&expand(3, None), &rep, &b), Err(Error::MissingBinding(_))));
        b.gamma.insert(1, vec![int(0); 5]);
        assert!(matches!(evaluate(&expand(3, None), &rep, &b), Err(Error::Dimension(_))));
    }

    #[test]
    fn contraction_is_multilinear() {
        // t(i, j, tail) = i + 2j + 10·tail on n = 2, tail = 2
        let n = 2;
        let t: Vec<Rational> = (0..8).map(|f| int((f / 4 + 2 * ((f / 2) % 2) + 10 * (f % 2)) as i64)).collect();
        let u = [int(1), int(2)];
        let v = [int(3), int(-1)];
        let got = contract(&t, n, &[&u, &v], 2);
        let mut expect = [int(0), int(0)];
        for i in 0..2 {
            for j in 0..2 {
                for (c, e) in expect.iter_mut().enumerate() {
                    *e += &u[i] * &v[j] * int((i + 2 * j + 10 * c) as i64);
                }
            }
        }
        assert_eq!(got, expect.to_vec());
    }
}
