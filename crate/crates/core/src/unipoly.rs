//! Univariate polynomials over `ℚ`: gcd, square-free part, rational roots,
//! and conversion to and from ring polynomials in one variable.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use crate::coeff::{Coeff, Rat};
use crate::mono::Mono;
use crate::poly::Poly;
use crate::ring::Ring;

/// Coefficients low to high, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly(pub Vec<Rat>);

impl UniPoly {
    pub fn zero() -> UniPoly {
        UniPoly(vec![])
    }

    pub fn from_ints(c: &[i64]) -> UniPoly {
        UniPoly(c.iter().map(|&x| Rat::from_int(x)).collect()).trim()
    }

    fn trim(mut self) -> UniPoly {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.0.is_empty() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }

    pub fn lc(&self) -> Rat {
        self.0.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lc().inv();
        UniPoly(self.0.iter().map(|c| c.mul_ref(&inv)).collect())
    }

    pub fn sub(&self, o: &UniPoly) -> UniPoly {
        let n = self.0.len().max(o.0.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.0.get(i).cloned().unwrap_or_else(Rat::zero);
            let b = o.0.get(i).cloned().unwrap_or_else(Rat::zero);
            v.push(a.add_ref(&b.neg_ref()));
        }
        UniPoly(v).trim()
    }

    pub fn mul(&self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut v = vec![Rat::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] = v[i + j].add_ref(&a.mul_ref(b));
            }
        }
        UniPoly(v).trim()
    }

    pub fn divrem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!d.is_zero(), "division by zero");
        let mut r = self.clone();
        let dd = d.0.len() - 1;
        let inv = d.lc().inv();
        if r.0.len() < d.0.len() {
            return (UniPoly::zero(), r);
        }
        let mut q = vec![Rat::zero(); r.0.len() - dd];
        while !r.is_zero() && r.0.len() > dd {
            let k = r.0.len() - 1 - dd;
            let c = r.lc().mul_ref(&inv);
            for (i, b) in d.0.iter().enumerate() {
                r.0[i + k] = r.0[i + k].add_ref(&c.mul_ref(b).neg_ref());
            }
            q[k] = c;
            r = r.trim();
        }
        (UniPoly(q).trim(), r)
    }

    pub fn gcd(&self, o: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn deriv(&self) -> UniPoly {
        UniPoly(self.0.iter().enumerate().skip(1).map(|(i, c)| c.mul_ref(&Rat::from_int(i as i64))).collect()).trim()
    }

    pub fn squarefree(&self) -> UniPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.deriv());
        self.divrem(&g).0.monic()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.0.iter().rev() {
            acc = acc.mul_ref(x).add_ref(c);
        }
        acc
    }

    /// Distinct rational roots, ascending.
    pub fn rational_roots(&self) -> Vec<Rat> {
        if self.is_zero() {
            return vec![];
        }
        let mut p = self.squarefree();
        let mut roots = Vec::new();
        // strip the root 0
        if p.0.first().is_some_and(|c| c.is_zero()) {
            roots.push(Rat::zero());
            p = p.divrem(&UniPoly(vec![Rat::zero(), Rat::one()])).0;
        }
        if p.degree().unwrap_or(0) == 0 {
            return roots;
        }
        // integer coefficients
        let den = p.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(&c.denom_big()));
        let ints: Vec<BigInt> = p.0.iter().map(|c| c.numer_big() * (&den / c.denom_big())).collect();
        let a0 = ints[0].abs();
        let an = ints.last().unwrap().abs();
        let (Some(d0), Some(dn)) = (small_divisors(&a0), small_divisors(&an)) else { return roots };
        for num in &d0 {
            for de in &dn {
                for s in [1i64, -1] {
                    let r = Rat::new(s * *num, *de);
                    if p.eval(&r).is_zero() && !roots.contains(&r) {
                        roots.push(r);
                    }
                }
            }
        }
        roots.sort();
        roots
    }

    /// View a ring polynomial in the single variable `v` (other variables must not occur).
    pub fn from_poly(p: &Poly, v: usize) -> Option<UniPoly> {
        let mut c: Vec<Rat> = Vec::new();
        for (m, k) in &p.terms {
            if m.exps().iter().enumerate().any(|(i, &e)| i != v && e > 0) {
                return None;
            }
            let e = m.exps()[v] as usize;
            if c.len() <= e {
                c.resize(e + 1, Rat::zero());
            }
            c[e] = k.as_rat()?.clone();
        }
        Some(UniPoly(c).trim())
    }

    pub fn to_poly(&self, ring: &Ring, v: usize) -> Poly {
        let terms = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (Mono::var(ring.nvars(), v, e as u16), Coeff::Q(c.clone())))
            .collect();
        Poly::from_terms(ring, terms)
    }
}

/// Positive divisors of a small integer (None if too large to factor by trial division).
fn small_divisors(n: &BigInt) -> Option<Vec<i64>> {
    let n = n.to_i64()?;
    if n == 0 || n > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1i64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
        if d > 2_000_000 {
            return None;
        }
    }
    out.sort();
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_and_squarefree() {
        let a = UniPoly::from_ints(&[-1, 0, 1]); // t^2 - 1
        let b = UniPoly::from_ints(&[1, 2, 1]); // (t+1)^2
        assert_eq!(a.gcd(&b), UniPoly::from_ints(&[1, 1]));
        assert_eq!(b.squarefree(), UniPoly::from_ints(&[1, 1]));
    }

    #[test]
    fn rational_roots_found() {
        // (2t - 1)(t + 3) t
        let p = UniPoly::from_ints(&[0, -3, 5, 2]);
        assert_eq!(p.rational_roots(), vec![Rat::from_int(-3), Rat::zero(), Rat::new(1, 2)]);
        assert!(UniPoly::from_ints(&[1, 0, 1]).rational_roots().is_empty());
    }
}
