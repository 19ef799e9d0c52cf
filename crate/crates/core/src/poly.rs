//! Univariate polynomials over the rationals, just enough to intersect the
//! root sets of weight-dependent matrix entries.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Coefficients from the constant term upward, with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(Vec<Rational>);

impl Poly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Poly(c)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Lagrange interpolation through `(x_i, y_i)`.
    pub fn interpolate(points: &[(Rational, Rational)]) -> Self {
        let mut acc = vec![Rational::zero(); points.len()];
        for (i, (xi, yi)) in points.iter().enumerate() {
            if yi.is_zero() {
                continue;
            }
            let mut basis = vec![Rational::one()];
            let mut denom = Rational::one();
            for (j, (xj, _)) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                let mut next = vec![Rational::zero(); basis.len() + 1];
                for (k, b) in basis.iter().enumerate() {
                    next[k + 1] += b;
                    next[k] -= b * xj;
                }
                basis = next;
                denom *= xi - xj;
            }
            let s = yi / denom;
            for (a, b) in acc.iter_mut().zip(&basis) {
                *a += b * &s;
            }
        }
        Poly::new(acc)
    }

    fn monic(&self) -> Self {
        match self.0.last() {
            None => Poly::zero(),
            Some(lead) => Poly(self.0.iter().map(|c| c / lead).collect()),
        }
    }

    fn rem(&self, d: &Poly) -> Poly {
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.0.clone();
        let lead = d.0.last().unwrap().clone();
        while r.len() > dd && !r.is_empty() {
            let shift = r.len() - 1 - dd;
            let f = r.last().unwrap() / &lead;
            for (k, c) in d.0.iter().enumerate() {
                r[shift + k] -= &f * c;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        Poly::new(r)
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// All rational roots, sorted and without multiplicity. The zero
    /// polynomial has every number as a root and is rejected.
    pub fn rational_roots(&self) -> Result<Vec<Rational>> {
        if self.is_zero() {
            return Err(Error::Domain("zero polynomial has no finite root set".into()));
        }
        let mut roots = Vec::new();
        let mut c = self.0.clone();
        if c[0].is_zero() {
            roots.push(Rational::zero());
            while c[0].is_zero() {
                c.remove(0);
            }
        }
        if c.len() > 1 {
            let lcm = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let ints: Vec<BigInt> = c.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect();
            let p = Poly::new(c.clone());
            for num in divisors(&ints[0])? {
                for den in divisors(ints.last().unwrap())? {
                    for sign in [1i64, -1] {
                        let cand = Rational::new(BigInt::from(sign) * &num, den.clone());
                        if p.eval(&cand).is_zero() && !roots.contains(&cand) {
                            roots.push(cand);
                        }
                    }
                }
            }
        }
        roots.sort();
        Ok(roots)
    }
}

fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let n = n.abs().to_u64().ok_or_else(|| Error::Unsupported("coefficient too large for root search".into()))?;
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn interpolate_affine() {
        let p = Poly::interpolate(&[(int(0), int(3)), (int(1), int(5))]);
        assert_eq!(p, Poly::new(vec![int(3), int(2)]));
        assert_eq!(p.rational_roots().unwrap(), vec![frac(-3, 2)]);
    }

    #[test]
    fn gcd_of_products() {
        // (x - 1)(x + 2) and (x - 1)(2x - 3)
        let a = Poly::new(vec![int(-2), int(1), int(1)]);
        let b = Poly::new(vec![int(3), int(-5), int(2)]);
        assert_eq!(a.gcd(&b), Poly::new(vec![int(-1), int(1)]));
        assert_eq!(a.gcd(&Poly::zero()), a.monic());
    }

    #[test]
    fn roots_of_quadratic_and_constant() {
        let p = Poly::new(vec![int(0), int(-1), int(2)]);
        assert_eq!(p.rational_roots().unwrap(), vec![int(0), frac(1, 2)]);
        assert!(Poly::new(vec![int(4)]).rational_roots().unwrap().is_empty());
        assert!(Poly::zero().rational_roots().is_err());
    }
}
