//! Dense linear algebra over the coefficient field and fraction-free
//! elimination over a base domain `k[z]/P`.

use crate::coeff::Coeff;
use crate::groebner::{GbBuilder, MTerm, ModOrder};
use crate::poly::Poly;
use crate::ring::{Degree, Ring};

/// Dense matrix over `ℚ` or `GF(p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DMat {
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<Coeff>,
}

impl DMat {
    pub fn zero(rows: usize, cols: usize) -> DMat {
        DMat { rows, cols, a: vec![Coeff::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<Coeff>>) -> DMat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        DMat { rows: r, cols: c, a: rows.into_iter().flatten().collect() }
    }

    pub fn get(&self, i: usize, j: usize) -> &Coeff {
        &self.a[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, c: Coeff) {
        self.a[i * self.cols + j] = c;
    }

    pub fn transpose(&self) -> DMat {
        let mut t = DMat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else { continue };
            if p != r {
                for j in 0..self.cols {
                    self.a.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self.get(r, c).inv();
            for j in c..self.cols {
                let v = self.get(r, j).mul_ref(&inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || self.get(i, c).is_zero() {
                    continue;
                }
                let f = self.get(i, c).clone();
                for j in c..self.cols {
                    if self.get(r, j).is_zero() {
                        continue;
                    }
                    let v = self.get(i, j).sub_ref(&f.mul_ref(self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        // eliminate along the shorter side
        let mut m = if self.rows <= self.cols { self.clone() } else { self.transpose() };
        forward_rank(&mut m)
    }

    /// Basis of the right kernel `{v : A v = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Coeff>> {
        let mut m = self.clone();
        let piv = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        let mut out = Vec::new();
        for &f in &free {
            let mut v = vec![Coeff::zero(); self.cols];
            v[f] = Coeff::one();
            for (r, &pc) in piv.iter().enumerate() {
                v[pc] = m.get(r, f).neg_ref();
            }
            out.push(v);
        }
        out
    }
}

/// Row echelon (no back substitution) returning the rank.
fn forward_rank(m: &mut DMat) -> usize {
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
        if p != r {
            for j in 0..m.cols {
                m.a.swap(p * m.cols + j, r * m.cols + j);
            }
        }
        let inv = m.get(r, c).inv();
        for i in r + 1..m.rows {
            if m.get(i, c).is_zero() {
                continue;
            }
            let f = m.get(i, c).mul_ref(&inv);
            m.set(i, c, Coeff::zero());
            for j in c + 1..m.cols {
                if m.get(r, j).is_zero() {
                    continue;
                }
                let v = m.get(i, j).sub_ref(&f.mul_ref(m.get(r, j)));
                m.set(i, j, v);
            }
        }
        r += 1;
    }
    r
}

/// Result of fraction-free elimination over a base domain.
#[derive(Clone, Debug)]
pub struct BaseRank {
    pub rank: usize,
    /// successive Bareiss pivots; the last one is a nonzero `rank × rank` minor
    pub pivots: Vec<Poly>,
}

impl BaseRank {
    /// Nonzero minor of size `rank` (1 when the rank is 0).
    pub fn top_minor(&self, ring: &Ring) -> Poly {
        self.pivots.last().cloned().unwrap_or_else(|| Poly::one(ring))
    }
}

/// Exact division `n / d` in the domain `A = k[z]/J` of `ring` (`J` prime or zero).
pub fn base_div_exact(ring: &Ring, n: &Poly, d: &Poly) -> Poly {
    if n.is_zero() {
        return Poly::zero(ring);
    }
    if let Some(q) = n.div_exact(d) {
        return q.reduce_base();
    }
    assert!(ring.has_quotient_base(), "inexact division in a polynomial base");
    // lift: reduce (n, 0) against the module generated by (d, 1) and J·e_i
    let ord = ModOrder::with_ranks(ring, &[Degree::ZERO, Degree::ZERO], vec![1, 0]);
    let mut b = GbBuilder::with_base(ring, ord.clone(), 2);
    let mut v: Vec<MTerm> = d.terms.iter().map(|(m, c)| MTerm { pos: 0, m: m.clone(), c: c.clone() }).collect();
    v.push(MTerm { pos: 1, m: crate::mono::Mono::one(ring.nvars()), c: Coeff::one() });
    b.add(crate::groebner::sort_vector(ring, &ord, v));
    let nv = crate::groebner::sort_vector(
        ring,
        &ord,
        n.terms.iter().map(|(m, c)| MTerm { pos: 0, m: m.clone(), c: c.clone() }).collect(),
    );
    let r = b.reduce(nv, true);
    let parts = crate::groebner::from_vector(ring, 2, &r);
    assert!(parts[0].is_zero(), "division not exact in base domain");
    parts[1].neg().reduce_base()
}

/// Rank over the fraction field of `A = k[z]/J` (J prime) by Bareiss elimination.
/// Entries are base elements of `ring`.
pub fn base_rank(ring: &Ring, rows: &[Vec<Poly>]) -> BaseRank {
    let nr = rows.len();
    let nc = rows.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<Poly>> = rows.iter().map(|r| r.iter().map(|p| p.clone().reduce_base()).collect()).collect();
    let mut prev = Poly::one(ring);
    let mut pivots = Vec::new();
    let mut k = 0;
    while k < nr.min(nc) {
        // choose the nonzero entry with fewest terms
        let mut best: Option<(usize, usize, usize)> = None;
        for i in k..nr {
            for j in k..nc {
                let p = &m[i][j];
                if !p.is_zero() {
                    let score = p.nterms() * 4 + p.max_total_degree() as usize;
                    if best.is_none_or(|(_, _, s)| score < s) {
                        best = Some((i, j, score));
                    }
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        m.swap(k, pi);
        for row in m.iter_mut() {
            row.swap(k, pj);
        }
        let piv = m[k][k].clone();
        for i in k + 1..nr {
            for j in k + 1..nc {
                let a = piv.mul_raw(&m[i][j]);
                let b = m[i][k].mul_raw(&m[k][j]);
                let num = a.sub(&b).reduce_base();
                m[i][j] = if prev.is_unit_constant() {
                    num.scale(&prev.terms[0].1.inv())
                } else {
                    base_div_exact(ring, &num, &prev)
                };
            }
            m[i][k] = Poly::zero(ring);
        }
        pivots.push(piv.clone());
        prev = piv;
        k += 1;
    }
    BaseRank { rank: pivots.len(), pivots }
}

/// Determinant over `k[z]` (no quotient) by Bareiss.
pub fn base_det(ring: &Ring, rows: &[Vec<Poly>]) -> Poly {
    let n = rows.len();
    if n == 0 {
        return Poly::one(ring);
    }
    let br = base_rank(ring, rows);
    if br.rank < n {
        return Poly::zero(ring);
    }
    // sign from the permutations is irrelevant for locus computations
    br.top_minor(ring)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingDescriptor;

    fn q(n: i64) -> Coeff {
        Coeff::from_int(n)
    }

    #[test]
    fn rank_and_kernel() {
        let m = DMat::from_rows(vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(1), q(0), q(1)]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        for i in 0..3 {
            let s = (0..3).fold(Coeff::zero(), |acc, j| acc.add_ref(&m.get(i, j).mul_ref(&k[0][j])));
            assert!(s.is_zero());
        }
    }

    #[test]
    fn bareiss_generic_rank_and_pivot() {
        let r = Ring::new(&RingDescriptor::standard(&[("x", 1)]).over_params(&["t"])).unwrap();
        let p = |s: &str| r.parse_poly(s).unwrap();
        let rows = vec![vec![p("t"), p("1")], vec![p("t^2"), p("t")]];
        assert_eq!(base_rank(&r, &rows).rank, 1);
        let rows = vec![vec![p("t"), p("1")], vec![p("1"), p("t")]];
        let br = base_rank(&r, &rows);
        assert_eq!(br.rank, 2);
        let det = br.top_minor(&r);
        assert!(det == p("t^2-1") || det == p("1-t^2"));
    }

    #[test]
    fn quotient_domain_division() {
        let r = Ring::new(&RingDescriptor::standard(&[("x", 1)]).over_quotient(&["s", "t"], &["s^2+s*t+t^2"])).unwrap();
        let p = |s: &str| r.parse_poly(s).unwrap();
        // (s^2) / s = s, but s^2 is stored as -s*t - t^2
        let q = base_div_exact(&r, &p("s^2"), &p("s"));
        assert_eq!(q, p("s"));
    }
}
