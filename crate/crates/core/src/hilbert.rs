//! Hilbert series of standard graded quotients `k[x]/I` through the
//! leading-term ideal, with Krull dimension and degree.

use crate::error::{Error, Result};
use crate::groebner::ideal_gb;
use crate::mono::Mono;
use crate::poly::Poly;
use crate::ring::Ring;

/// `HS(t) = N(t) / (1 − t)^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertSeries {
    /// coefficients of `N(t)`, lowest degree first
    pub numerator: Vec<i64>,
    pub nvars: usize,
}

fn poly_sub_shifted(a: &mut Vec<i64>, b: &[i64], shift: usize) {
    if a.len() < b.len() + shift {
        a.resize(b.len() + shift, 0);
    }
    for (k, &c) in b.iter().enumerate() {
        a[k + shift] -= c;
    }
}

fn trim(mut v: Vec<i64>) -> Vec<i64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn minimalize(mut gens: Vec<Mono>) -> Vec<Mono> {
    gens.sort_by_key(|m| m.total_degree());
    let mut out: Vec<Mono> = Vec::new();
    for g in gens {
        if !out.iter().any(|h| h.divides(&g)) {
            out.push(g);
        }
    }
    out
}

/// Numerator of the Hilbert series of `k[x]/(gens)` for monomials `gens`.
pub fn monomial_numerator(gens: &[Mono]) -> Vec<i64> {
    numerator_rec(minimalize(gens.to_vec()))
}

fn numerator_rec(gens: Vec<Mono>) -> Vec<i64> {
    if gens.is_empty() {
        return vec![1];
    }
    if gens.iter().any(|g| g.is_one()) {
        return vec![];
    }
    let coprime = gens.iter().enumerate().all(|(i, a)| gens[i + 1..].iter().all(|b| a.is_coprime(b)));
    if coprime {
        let mut acc = vec![1i64];
        for g in &gens {
            let mut next = acc.clone();
            poly_sub_shifted(&mut next, &acc, g.total_degree() as usize);
            acc = next;
        }
        return trim(acc);
    }
    // N(I + (m)) = N(I) − t^{deg m} N(I : m)
    let mut rest = gens;
    let m = rest.pop().unwrap();
    let colon = minimalize(rest.iter().map(|g| g.gcd(&m).quotient_of(g)).collect());
    let mut out = numerator_rec(rest);
    let c = numerator_rec(colon);
    poly_sub_shifted(&mut out, &c, m.total_degree() as usize);
    trim(out)
}

fn binom(n: i64, k: i64) -> i128 {
    if k < 0 || n < k {
        return 0;
    }
    let mut r: i128 = 1;
    for i in 0..k {
        r = r * (n - i) as i128 / (i + 1) as i128;
    }
    r
}

impl HilbertSeries {
    /// Hilbert series of `R/I` for homogeneous `gens` in a standard graded ring.
    /// Over `k[z]` the result is that of `k(z)[x]/I`: base variables sit in the
    /// lowest block, so graded parts of leading monomials span the leading ideal
    /// over the fraction field.
    pub fn of_ideal(ring: &Ring, gens: &[Poly]) -> Result<HilbertSeries> {
        if !ring.is_standard_graded() || ring.is_bigraded() {
            return Err(Error::NotStandardGraded);
        }
        if ring.has_quotient_base() {
            return Err(Error::BaseNotField);
        }
        let gb = ideal_gb(ring, gens);
        let graded = ring.graded_indices();
        let leads: Vec<Mono> = gb
            .iter()
            .map(|g| {
                let e = g.lm().unwrap().exps();
                Mono::from_exps(&graded.iter().map(|&i| e[i]).collect::<Vec<_>>())
            })
            .collect();
        Ok(HilbertSeries { numerator: monomial_numerator(&leads), nvars: graded.len() })
    }

    /// `dim_k [R/I]_n`.
    pub fn value(&self, n: i64) -> i128 {
        let nv = self.nvars as i64;
        self.numerator
            .iter()
            .enumerate()
            .map(|(k, &c)| c as i128 * if nv == 0 { i128::from(n == k as i64) } else { binom(n - k as i64 + nv - 1, nv - 1) })
            .sum()
    }

    /// `N(t) = (1 − t)^s Q(t)` with `Q(1) ≠ 0`; returns `(s, Q(1))`.
    fn split_at_one(&self) -> Option<(usize, i64)> {
        if self.numerator.is_empty() {
            return None;
        }
        let mut q = self.numerator.clone();
        let mut s = 0;
        loop {
            let at_one: i64 = q.iter().sum();
            if at_one != 0 {
                return Some((s, at_one));
            }
            // synthetic division by (1 − t): q = (1 − t) q', q'_k = Σ_{j≤k} q_j
            let mut acc = 0;
            let mut next = Vec::with_capacity(q.len().saturating_sub(1));
            for &c in &q[..q.len() - 1] {
                acc += c;
                next.push(acc);
            }
            q = next;
            s += 1;
        }
    }

    /// `Σ_n (dim [R/I_self]_n − dim [R/I_other]_n)` when `I_other/I_self` has finite length.
    pub fn length_difference(&self, other: &HilbertSeries) -> i128 {
        let top = self.numerator.len().max(other.numerator.len()) as i64;
        (0..=top).map(|n| self.value(n) - other.value(n)).sum()
    }

    /// Krull dimension of `R/I`; `None` for the zero ring.
    pub fn dim(&self) -> Option<usize> {
        self.split_at_one().map(|(s, _)| self.nvars - s)
    }

    /// Degree (multiplicity) of `R/I`; `None` for the zero ring.
    pub fn degree(&self) -> Option<i64> {
        self.split_at_one().map(|(_, d)| d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingDescriptor;

    fn ring(n: usize) -> Ring {
        let names: Vec<String> = (0..n).map(|i| format!("y{i}")).collect();
        let v: Vec<(&str, i64)> = names.iter().map(|s| (s.as_str(), 1)).collect();
        Ring::new(&RingDescriptor::standard(&v)).unwrap()
    }

    #[test]
    fn conic_and_twisted_cubic() {
        let r = ring(3);
        let h = HilbertSeries::of_ideal(&r, &[r.parse_poly("y0*y2 - y1^2").unwrap()]).unwrap();
        assert_eq!((h.dim(), h.degree()), (Some(2), Some(2)));
        assert_eq!(h.value(5), 11);
        let r = ring(4);
        let gens: Vec<Poly> =
            ["y0*y2 - y1^2", "y0*y3 - y1*y2", "y1*y3 - y2^2"].iter().map(|s| r.parse_poly(s).unwrap()).collect();
        let h = HilbertSeries::of_ideal(&r, &gens).unwrap();
        assert_eq!((h.dim(), h.degree()), (Some(2), Some(3)));
        for n in 0..6 {
            assert_eq!(h.value(n), 3 * n as i128 + 1);
        }
    }

    #[test]
    fn artinian_and_unit() {
        let r = ring(2);
        let g: Vec<Poly> = ["y0^2", "y0*y1", "y1^3"].iter().map(|s| r.parse_poly(s).unwrap()).collect();
        let h = HilbertSeries::of_ideal(&r, &g).unwrap();
        assert_eq!((h.dim(), h.degree()), (Some(0), Some(4)));
        assert_eq!((0..5).map(|n| h.value(n)).collect::<Vec<_>>(), vec![1, 2, 1, 0, 0]);
        let h = HilbertSeries::of_ideal(&r, &[Poly::one(&r)]).unwrap();
        assert_eq!(h.dim(), None);
        let h = HilbertSeries::of_ideal(&r, &[]).unwrap();
        assert_eq!((h.dim(), h.degree()), (Some(2), Some(1)));
    }
}
