//! Sparse polynomials over a [`Ring`].

use std::cmp::Ordering;
use std::fmt;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::mono::Mono;
use crate::ring::{Degree, Ring, VarKind};

/// A polynomial: terms sorted strictly descending in the ring order, no zero coefficients.
#[derive(Clone)]
pub struct Poly {
    pub ring: Ring,
    pub terms: Vec<(Mono, Coeff)>,
}

impl PartialEq for Poly {
    fn eq(&self, o: &Poly) -> bool {
        self.ring == o.ring && self.terms == o.terms
    }
}

impl Eq for Poly {}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Poly {
    pub fn zero(ring: &Ring) -> Poly {
        Poly { ring: ring.clone(), terms: vec![] }
    }

    pub fn constant(ring: &Ring, c: Coeff) -> Poly {
        let c = c.in_char(ring.char_p);
        if c.is_zero() {
            return Poly::zero(ring);
        }
        Poly { ring: ring.clone(), terms: vec![(Mono::one(ring.nvars()), c)] }
    }

    pub fn one(ring: &Ring) -> Poly {
        Poly::constant(ring, Coeff::one())
    }

    pub fn from_int(ring: &Ring, n: i64) -> Poly {
        Poly::constant(ring, Coeff::from_int(n))
    }

    pub fn var(ring: &Ring, i: usize) -> Poly {
        Poly::monomial(ring, Mono::var(ring.nvars(), i, 1), Coeff::one())
    }

    pub fn monomial(ring: &Ring, m: Mono, c: Coeff) -> Poly {
        let c = c.in_char(ring.char_p);
        if c.is_zero() {
            return Poly::zero(ring);
        }
        Poly { ring: ring.clone(), terms: vec![(m, c)] }
    }

    /// Build from arbitrary terms: sorts, combines, drops zeros. No base reduction.
    pub fn from_terms(ring: &Ring, mut terms: Vec<(Mono, Coeff)>) -> Poly {
        let p = ring.char_p;
        terms.sort_by(|a, b| ring.cmp_mono(&b.0, &a.0));
        let mut out: Vec<(Mono, Coeff)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            let c = c.in_char(p);
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = lc.add_ref(&c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Poly { ring: ring.clone(), terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// Nonzero constant.
    pub fn is_unit_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    pub fn constant_value(&self) -> Option<Coeff> {
        if self.is_zero() {
            Some(Coeff::zero())
        } else if self.is_unit_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    /// Only base (z) variables occur.
    pub fn is_base_element(&self) -> bool {
        let bs = self.ring.base_start;
        self.terms.iter().all(|(m, _)| m.exps()[..bs].iter().all(|&e| e == 0))
    }

    pub fn lm(&self) -> Option<&Mono> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn lc(&self) -> Option<&Coeff> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn neg(&self) -> Poly {
        Poly { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg_ref())).collect() }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        assert!(self.ring == o.ring, "ring mismatch in add");
        let r = &self.ring;
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < o.terms.len() {
            match r.cmp_mono(&self.terms[i].0, &o.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(o.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = self.terms[i].1.add_ref(&o.terms[j].1);
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&o.terms[j..]);
        Poly { ring: r.clone(), terms: out }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Coeff) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d.mul_ref(c))).collect(),
        }
    }

    pub fn mul_term(&self, m: &Mono, c: &Coeff) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(n, d)| (n.mul(m), d.mul_ref(c))).collect(),
        }
    }

    /// Product without base reduction.
    pub fn mul_raw(&self, o: &Poly) -> Poly {
        assert!(self.ring == o.ring, "ring mismatch in mul");
        if self.is_zero() || o.is_zero() {
            return Poly::zero(&self.ring);
        }
        if o.terms.len() == 1 {
            return self.mul_term(&o.terms[0].0, &o.terms[0].1);
        }
        if self.terms.len() == 1 {
            return o.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        let mut terms = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (m, c) in &self.terms {
            for (n, d) in &o.terms {
                terms.push((m.mul(n), c.mul_ref(d)));
            }
        }
        Poly::from_terms(&self.ring, terms)
    }

    /// Product, in normal form modulo the base ideal `J`.
    pub fn mul(&self, o: &Poly) -> Poly {
        self.mul_raw(o).reduce_base()
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut r = Poly::one(&self.ring);
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Checked variant of [`Poly::add`].
    pub fn try_add(&self, o: &Poly) -> Result<Poly> {
        self.ring.check_same(&o.ring)?;
        Ok(self.add(o))
    }

    pub fn try_mul(&self, o: &Poly) -> Result<Poly> {
        self.ring.check_same(&o.ring)?;
        Ok(self.mul(o))
    }

    /// Normal form modulo `J` (identity when `A` is not a quotient).
    pub fn reduce_base(self) -> Poly {
        let base = self.ring.base();
        if base.j_gb.is_empty() {
            return self;
        }
        self.nf_by(&base.j_gb)
    }

    /// Full remainder of division by `divs` (assumed a Gröbner basis for uniqueness).
    pub fn nf_by(&self, divs: &[Poly]) -> Poly {
        let r = &self.ring;
        let mut rem: Vec<(Mono, Coeff)> = Vec::new();
        let mut p = self.clone();
        while let Some((m, c)) = p.terms.first().cloned() {
            let hit = divs.iter().find(|g| g.lm().is_some_and(|gm| gm.divides(&m)));
            match hit {
                Some(g) => {
                    let q = g.lm().unwrap().quotient_of(&m);
                    let f = c.div_ref(g.lc().unwrap());
                    p = p.sub(&g.mul_term(&q, &f));
                }
                None => {
                    rem.push((m, c));
                    p.terms.remove(0);
                }
            }
        }
        Poly { ring: r.clone(), terms: rem }
    }

    /// Exact quotient `self / d` in `k[vars]`, or `None` when `d` does not divide.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        let (dm, dc) = (d.lm().unwrap().clone(), d.lc().unwrap().clone());
        let mut q = Vec::new();
        let mut p = self.clone();
        while let Some((m, c)) = p.terms.first().cloned() {
            if !dm.divides(&m) {
                return None;
            }
            let t = dm.quotient_of(&m);
            let f = c.div_ref(&dc);
            p = p.sub(&d.mul_term(&t, &f));
            q.push((t, f));
        }
        Some(Poly::from_terms(&self.ring, q))
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.lc() {
            None => self.clone(),
            Some(c) => self.scale(&c.inv()),
        }
    }

    /// `G`-degree of a homogeneous polynomial (`None` for zero).
    pub fn degree(&self) -> Result<Option<Degree>> {
        let mut d = None;
        for (m, _) in &self.terms {
            let e = self.ring.degree_of_mono(m);
            match d {
                None => d = Some(e),
                Some(x) if x != e => return Err(Error::Inhomogeneous),
                _ => {}
            }
        }
        Ok(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree().is_ok()
    }

    pub fn deriv(&self, i: usize) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exps()[i] > 0)
            .map(|(m, c)| {
                let mut m2 = m.clone();
                let e = m2.exps()[i];
                m2.exps_mut()[i] = e - 1;
                (m2, c.mul_ref(&Coeff::from_int(e as i64)))
            })
            .collect();
        Poly::from_terms(&self.ring, terms)
    }

    /// Same exponent layout, reinterpreted in another ring with equally many variables.
    pub fn transfer(&self, target: &Ring) -> Poly {
        assert_eq!(self.ring.nvars(), target.nvars());
        Poly::from_terms(target, self.terms.clone())
    }

    /// Map into a ring with `offset` extra leading variables.
    pub fn embed_shifted(&self, target: &Ring, offset: usize) -> Poly {
        let n = target.nvars();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0u16; n];
                e[offset..offset + m.len()].copy_from_slice(m.exps());
                (Mono::from_exps(&e), c.clone())
            })
            .collect();
        Poly::from_terms(target, terms)
    }

    /// Drop `offset` leading variables (which must not occur).
    pub fn strip_leading(&self, target: &Ring, offset: usize) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                debug_assert!(m.exps()[..offset].iter().all(|&e| e == 0));
                (Mono::from_exps(&m.exps()[offset..]), c.clone())
            })
            .collect();
        Poly::from_terms(target, terms)
    }

    /// Reorder graded variables: `perm[new] = old`; base variables keep their slots.
    pub fn permute_vars(&self, target: &Ring, perm: &[usize]) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = m.exps().to_vec();
                for (newi, &oldi) in perm.iter().enumerate() {
                    e[newi] = m.exps()[oldi];
                }
                (Mono::from_exps(&e), c.clone())
            })
            .collect();
        Poly::from_terms(target, terms)
    }

    /// Inverse of [`Poly::permute_vars`].
    pub fn unpermute_vars(&self, target: &Ring, perm: &[usize]) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = m.exps().to_vec();
                for (newi, &oldi) in perm.iter().enumerate() {
                    e[oldi] = m.exps()[newi];
                }
                (Mono::from_exps(&e), c.clone())
            })
            .collect();
        Poly::from_terms(target, terms)
    }

    /// General variable map: `f` turns each exponent vector into one of `target`.
    pub fn map_monos(&self, target: &Ring, f: impl Fn(&[u16]) -> Vec<u16>) -> Poly {
        let terms = self.terms.iter().map(|(m, c)| (Mono::from_exps(&f(m.exps())), c.clone())).collect();
        Poly::from_terms(target, terms)
    }

    /// Substitute values for some variables (`None` keeps the variable), landing in `target`
    /// via `f` on the remaining exponents.
    pub fn substitute(&self, target: &Ring, values: &[Option<Coeff>], f: impl Fn(&[u16]) -> Vec<u16>) -> Poly {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut c = c.clone();
            let mut e = m.exps().to_vec();
            for (i, v) in values.iter().enumerate() {
                if let Some(v) = v {
                    if e[i] > 0 {
                        c = c.mul_ref(&v.pow(e[i] as u32));
                        e[i] = 0;
                    }
                }
            }
            if !c.is_zero() {
                terms.push((Mono::from_exps(&f(&e)), c));
            }
        }
        Poly::from_terms(target, terms)
    }

    /// Evaluate a base element at a point (all z-variables given).
    pub fn eval_base(&self, vals: &[Coeff]) -> Coeff {
        let bs = self.ring.base_start;
        let mut acc = Coeff::zero().in_char(self.ring.char_p);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (k, &e) in m.exps()[bs..].iter().enumerate() {
                if e > 0 {
                    t = t.mul_ref(&vals[k].pow(e as u32));
                }
            }
            acc = acc.add_ref(&t);
        }
        acc
    }

    /// Split by graded part: map from graded exponent (z zeroed) to base coefficient polynomial.
    pub fn split_graded(&self) -> Vec<(Mono, Poly)> {
        let bs = self.ring.base_start;
        let mut out: Vec<(Mono, Vec<(Mono, Coeff)>)> = Vec::new();
        for (m, c) in &self.terms {
            let mut g = m.clone();
            let mut z = m.clone();
            for i in 0..m.len() {
                if i < bs {
                    z.exps_mut()[i] = 0;
                } else {
                    g.exps_mut()[i] = 0;
                }
            }
            match out.iter_mut().find(|(gm, _)| *gm == g) {
                Some((_, v)) => v.push((z, c.clone())),
                None => out.push((g, vec![(z, c.clone())])),
            }
        }
        out.into_iter().map(|(g, v)| (g, Poly::from_terms(&self.ring, v))).collect()
    }

    /// Coefficient (a base element) of a graded monomial `g` (z-exponents zero).
    pub fn coeff_of_graded(&self, g: &Mono) -> Poly {
        let bs = self.ring.base_start;
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exps()[..bs] == g.exps()[..bs])
            .map(|(m, c)| {
                let mut z = m.clone();
                for e in &mut z.exps_mut()[..bs] {
                    *e = 0;
                }
                (z, c.clone())
            })
            .collect();
        Poly::from_terms(&self.ring, terms)
    }

    /// Largest power of variable `i` dividing every term.
    pub fn var_content(&self, i: usize) -> u16 {
        self.terms.iter().map(|(m, _)| m.exps()[i]).min().unwrap_or(0)
    }

    pub fn divide_by_var_power(&self, i: usize, k: u16) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut m2 = m.clone();
                m2.exps_mut()[i] -= k;
                (m2, c.clone())
            })
            .collect();
        Poly { ring: self.ring.clone(), terms }
    }

    pub fn involves_kind(&self, kind: VarKind) -> bool {
        let r = &self.ring;
        self.terms.iter().any(|(m, _)| m.exps().iter().enumerate().any(|(i, &e)| e > 0 && r.vars[i].kind == kind))
    }

    pub fn involves_var(&self, i: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exps()[i] > 0)
    }

    pub fn max_total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.total_degree()).max().unwrap_or(0)
    }
}

pub(crate) fn fmt_mono(ring: &Ring, m: &Mono) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exps().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(ring.vars[i].name.clone()),
            _ => parts.push(format!("{}^{}", ring.vars[i].name, e)),
        }
    }
    parts.join("*")
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let cs = c.to_string();
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let ms = fmt_mono(&self.ring, m);
            if ms.is_empty() {
                s.push_str(&mag);
            } else if mag == "1" {
                s.push_str(&ms);
            } else {
                s.push_str(&mag);
                s.push('*');
                s.push_str(&ms);
            }
        }
        write!(f, "{s}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingDescriptor;

    fn qxy() -> Ring {
        Ring::new(&RingDescriptor::standard(&[("x", 1), ("y", 1)])).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let r = qxy();
        let p = r.parse_poly("(x+y)*(x-y)").unwrap();
        assert_eq!(p, r.parse_poly("x^2-y^2").unwrap());
        assert_eq!(p.to_string(), "x^2 - y^2");
    }

    #[test]
    fn degree_rules() {
        let r = Ring::new(&RingDescriptor::standard(&[("x1", 1), ("x2", 1)]).over_params(&["t"])).unwrap();
        assert_eq!(r.parse_poly("x1^2*x2").unwrap().degree().unwrap(), Some(Degree(3, 0)));
        assert_eq!(r.parse_poly("t*x1^2").unwrap().degree().unwrap(), Some(Degree(2, 0)));
        assert!(matches!(r.parse_poly("x1 + x1^2").unwrap().degree(), Err(Error::Inhomogeneous)));
    }

    #[test]
    fn quotient_base_normal_form() {
        let r = Ring::new(&RingDescriptor::standard(&[("x", 1)]).over_quotient(&["t"], &["t*(t-1)"])).unwrap();
        let t = r.var("t");
        assert_eq!(t.mul(&t), t);
        let p = r.parse_poly("t^5*x + 3").unwrap();
        assert_eq!(p.clone().reduce_base(), p);
    }

    #[test]
    fn exact_division() {
        let r = qxy();
        let f = r.parse_poly("x^3 - y^3").unwrap();
        let d = r.parse_poly("x - y").unwrap();
        assert_eq!(f.div_exact(&d).unwrap(), r.parse_poly("x^2+x*y+y^2").unwrap());
        assert!(f.div_exact(&r.parse_poly("x+y").unwrap()).is_none());
    }
}
