//! Graded free resolutions, minimalization, duals, `Ext` modules and the
//! cokernel `D^{r+1}_M`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groebner::{kernel_unchecked, prune_generators, syzygies};
use crate::module::{FreeModule, Matrix, ModulePresentation};
use crate::poly::Poly;
use crate::ring::{Degree, Ring};

/// Chain complex of graded free modules `F_0 ← F_1 ← ⋯ ← F_n`.
#[derive(Clone, Debug)]
pub struct FreeComplex {
    pub ring: Ring,
    pub modules: Vec<FreeModule>,
    /// `maps[i] = φ_{i+1}: F_{i+1} → F_i`
    pub maps: Vec<Matrix>,
}

impl FreeComplex {
    /// Build and verify: shapes, homogeneity and `φ_i ∘ φ_{i+1} = 0`.
    pub fn new(ring: &Ring, modules: Vec<FreeModule>, maps: Vec<Matrix>) -> Result<FreeComplex> {
        if modules.is_empty() || maps.len() + 1 != modules.len() {
            return Err(Error::ShapeMismatch("a complex needs one map per consecutive pair".into()));
        }
        for (i, m) in maps.iter().enumerate() {
            m.check_homogeneous(&modules[i + 1], &modules[i])?;
        }
        for i in 1..maps.len() {
            if !maps[i - 1].mul(&maps[i])?.is_zero() {
                return Err(Error::Invalid(format!("d^2 != 0 at position {i}")));
            }
        }
        Ok(FreeComplex { ring: ring.clone(), modules, maps })
    }

    /// Largest index with a stored module.
    pub fn len(&self) -> usize {
        self.modules.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.modules.iter().all(|m| m.is_zero())
    }

    /// `F_i` (zero outside the stored range).
    pub fn module(&self, i: isize) -> FreeModule {
        if i < 0 || i as usize >= self.modules.len() {
            FreeModule::zero(&self.ring)
        } else {
            self.modules[i as usize].clone()
        }
    }

    /// `φ_i: F_i → F_{i−1}` (a zero matrix of the right shape outside the stored range).
    pub fn differential(&self, i: isize) -> Matrix {
        if i >= 1 && (i as usize) <= self.maps.len() {
            self.maps[i as usize - 1].clone()
        } else {
            Matrix::zero(&self.ring, self.module(i - 1).rank(), self.module(i).rank())
        }
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.modules.iter().map(|m| m.rank()).collect()
    }

    pub fn betti(&self) -> BettiTable {
        let mut t = BTreeMap::new();
        for (i, m) in self.modules.iter().enumerate() {
            for &d in &m.shifts {
                *t.entry((i, d)).or_insert(0) += 1;
            }
        }
        BettiTable { grading_rank: self.ring.grading_rank, psi: self.ring.psi, entries: t }
    }

    /// Direct sum of two complexes over the same ring (padded to the longer one).
    pub fn direct_sum(&self, o: &FreeComplex) -> FreeComplex {
        let n = self.len().max(o.len());
        let modules: Vec<FreeModule> =
            (0..=n as isize).map(|i| self.module(i).direct_sum(&o.module(i))).collect();
        let maps = (1..=n as isize)
            .map(|i| {
                let (a, b) = (self.differential(i), o.differential(i));
                let mut m = Matrix::zero(&self.ring, a.nrows + b.nrows, a.ncols + b.ncols);
                for r in 0..a.nrows {
                    for c in 0..a.ncols {
                        m.set(r, c, a.get(r, c).clone());
                    }
                }
                for r in 0..b.nrows {
                    for c in 0..b.ncols {
                        m.set(a.nrows + r, a.ncols + c, b.get(r, c).clone());
                    }
                }
                m
            })
            .collect();
        FreeComplex { ring: self.ring.clone(), modules, maps }
    }

    /// Drop trailing zero modules.
    pub fn trimmed(mut self) -> FreeComplex {
        while self.modules.len() > 1 && self.modules.last().unwrap().is_zero() {
            self.modules.pop();
            self.maps.pop();
        }
        self
    }
}

/// Graded Betti numbers `β_{i,d}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    pub grading_rank: u8,
    pub psi: (i64, i64),
    pub entries: BTreeMap<(usize, Degree), usize>,
}

#[derive(Serialize)]
struct BettiRow {
    i: usize,
    degree: Vec<i64>,
    count: usize,
}

impl BettiTable {
    pub fn get(&self, i: usize, d: Degree) -> usize {
        self.entries.get(&(i, d)).copied().unwrap_or(0)
    }

    pub fn total(&self, i: usize) -> usize {
        self.entries.iter().filter(|((j, _), _)| *j == i).map(|(_, c)| c).sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<BettiRow> = self
            .entries
            .iter()
            .map(|(&(i, d), &count)| BettiRow { i, degree: d.to_vec(self.grading_rank), count })
            .collect();
        serde_json::to_value(rows).unwrap()
    }

    /// Rows are homological degrees, columns `ψ`-degrees.
    pub fn to_csv(&self) -> String {
        let psi = |d: Degree| self.psi.0 * d.0 + self.psi.1 * d.1;
        let cols: Vec<i64> = {
            let mut c: Vec<i64> = self.entries.keys().map(|&(_, d)| psi(d)).collect();
            c.sort();
            c.dedup();
            c
        };
        let maxi = self.entries.keys().map(|&(i, _)| i).max().unwrap_or(0);
        let mut s = String::from("i");
        for c in &cols {
            s.push_str(&format!(",{c}"));
        }
        s.push('\n');
        if self.entries.is_empty() {
            return s;
        }
        for i in 0..=maxi {
            s.push_str(&i.to_string());
            for &c in &cols {
                let n: usize = self.entries.iter().filter(|((j, d), _)| *j == i && psi(*d) == c).map(|(_, n)| n).sum();
                s.push_str(&format!(",{n}"));
            }
            s.push('\n');
        }
        s
    }
}

/// Graded free resolution `F_0 ← ⋯ ← F_length` of `M`, by iterated syzygies.
/// Over a field base the result is minimalized.
pub fn free_resolution(m: &ModulePresentation, length: usize) -> Result<FreeComplex> {
    let ring = m.ring().clone();
    let f0 = m.target.clone();
    let mut modules = vec![f0.clone()];
    let mut maps = Vec::new();
    if length >= 1 {
        let gens: Vec<Vec<Poly>> =
            m.matrix.columns().into_iter().filter(|c| c.iter().any(|p| !p.clone().reduce_base().is_zero())).collect();
        let cols = prune_generators(&gens, &f0);
        let mut cur = ModulePresentation::from_matrix(f0, Matrix::from_columns(&ring, m.target.rank(), &cols))?;
        modules.push(cur.source.clone());
        maps.push(cur.matrix.clone());
        for _ in 2..=length {
            if cur.source.is_zero() {
                modules.push(FreeModule::zero(&ring));
                maps.push(Matrix::zero(&ring, 0, 0));
                continue;
            }
            let next = syzygies(&cur.matrix.columns(), &cur.target)?;
            let nm = next.matrix.clone();
            let ns = next.source.clone();
            // syzygies live in `cur.source`, which is `next.target`
            modules.push(ns.clone());
            maps.push(nm.clone());
            cur = ModulePresentation { target: next.target, source: ns, matrix: nm };
        }
    }
    // fix up zero-shape maps after zero modules
    for i in 0..maps.len() {
        let (r, c) = (modules[i].rank(), modules[i + 1].rank());
        if maps[i].nrows != r || maps[i].ncols != c {
            maps[i] = Matrix::zero(&ring, r, c);
        }
    }
    let c = FreeComplex::new(&ring, modules, maps)?;
    if ring.base_is_field() {
        minimalize(&c)
    } else {
        Ok(c)
    }
}

fn drop_row(m: &Matrix, a: usize) -> Matrix {
    let rows: Vec<usize> = (0..m.nrows).filter(|&i| i != a).collect();
    let cols: Vec<usize> = (0..m.ncols).collect();
    m.submatrix(&rows, &cols)
}

fn drop_col(m: &Matrix, b: usize) -> Matrix {
    let rows: Vec<usize> = (0..m.nrows).collect();
    let cols: Vec<usize> = (0..m.ncols).filter(|&j| j != b).collect();
    m.submatrix(&rows, &cols)
}

fn drop_shift(f: &FreeModule, k: usize) -> FreeModule {
    let mut s = f.shifts.clone();
    s.remove(k);
    FreeModule::new(&f.ring, s)
}

/// Eliminate one invertible entry `u = φ_i[a][b]`:
/// `φ_i ← u·φ_i[¬a,¬b] − φ_i[¬a,b]·φ_i[a,¬b]` (scaled by `u⁻¹` when `u` is a constant).
fn eliminate_pivot(c: &mut FreeComplex, i: usize, a: usize, b: usize) {
    let phi = c.maps[i - 1].clone();
    let u = phi.get(a, b).clone();
    let ring = c.ring.clone();
    let inv = u.constant_value().map(|k| k.inv());
    let mut out = Matrix::zero(&ring, phi.nrows - 1, phi.ncols - 1);
    let rows: Vec<usize> = (0..phi.nrows).filter(|&r| r != a).collect();
    let cols: Vec<usize> = (0..phi.ncols).filter(|&k| k != b).collect();
    for (ri, &r) in rows.iter().enumerate() {
        let left = phi.get(r, b);
        for (ci, &k) in cols.iter().enumerate() {
            let right = phi.get(a, k);
            let prod = if left.is_zero() || right.is_zero() { Poly::zero(&ring) } else { left.mul(right) };
            let v = match &inv {
                Some(iv) => phi.get(r, k).sub(&prod.scale(iv)),
                None => u.mul(phi.get(r, k)).sub(&prod),
            };
            out.set(ri, ci, v.reduce_base());
        }
    }
    c.maps[i - 1] = out;
    if i < c.maps.len() {
        c.maps[i] = drop_row(&c.maps[i], b);
    }
    if i >= 2 {
        c.maps[i - 2] = drop_col(&c.maps[i - 2], a);
    }
    c.modules[i - 1] = drop_shift(&c.modules[i - 1], a);
    c.modules[i] = drop_shift(&c.modules[i], b);
}

/// Find an entry of degree 0 that is invertible over the residue field.
fn find_pivot(c: &FreeComplex, over_fraction_field: bool) -> Option<(usize, usize, usize)> {
    let mut best: Option<(usize, usize, usize, usize)> = None;
    for (k, m) in c.maps.iter().enumerate() {
        for a in 0..m.nrows {
            for b in 0..m.ncols {
                let p = m.get(a, b);
                if p.is_zero() {
                    continue;
                }
                let ok = if over_fraction_field { p.is_base_element() } else { p.is_constant() };
                if ok {
                    let score = p.nterms();
                    if best.is_none_or(|x| score < x.3) {
                        best = Some((k + 1, a, b, score));
                        if score == 1 && p.is_constant() {
                            return Some((k + 1, a, b));
                        }
                    }
                }
            }
        }
    }
    best.map(|(i, a, b, _)| (i, a, b))
}

/// Homotopy-equivalent complex without invertible entries (field base only).
pub fn minimalize(c: &FreeComplex) -> Result<FreeComplex> {
    if !c.ring.base_is_field() {
        return Err(Error::BaseNotField);
    }
    Ok(minimalize_inner(c, false))
}

/// Minimalization over the fraction field of a domain base: nonzero base
/// elements count as units and are cleared fraction-free. The result has the
/// Betti numbers of `C ⊗ Frac(A)`, but is only a complex over `Frac(A)`.
pub fn minimalize_over_fraction_field(c: &FreeComplex) -> Result<FreeComplex> {
    if !c.ring.base_is_domain() {
        return Err(Error::BaseNotDomain);
    }
    Ok(minimalize_inner(c, true))
}

fn minimalize_inner(c: &FreeComplex, frac: bool) -> FreeComplex {
    let mut c = c.clone();
    while let Some((i, a, b)) = find_pivot(&c, frac) {
        eliminate_pivot(&mut c, i, a, b);
    }
    c
}

/// Minimal presentation over a field (or the fraction field of a domain base):
/// unit entries are eliminated and zero relations dropped.
pub fn minimal_presentation(m: &ModulePresentation) -> Result<ModulePresentation> {
    let ring = m.ring();
    let frac = !ring.base_is_field();
    if frac && !ring.base_is_domain() {
        return Err(Error::BaseNotDomain);
    }
    let c = FreeComplex {
        ring: ring.clone(),
        modules: vec![m.target.clone(), m.source.clone()],
        maps: vec![m.matrix.clone()],
    };
    let c = minimalize_inner(&c, frac);
    let keep: Vec<usize> = (0..c.maps[0].ncols).filter(|&j| (0..c.maps[0].nrows).any(|i| !c.maps[0].get(i, j).is_zero())).collect();
    let rows: Vec<usize> = (0..c.maps[0].nrows).collect();
    let src = FreeModule::new(ring, keep.iter().map(|&j| c.modules[1].shifts[j]).collect());
    Ok(ModulePresentation { target: c.modules[0].clone(), source: src, matrix: c.maps[0].submatrix(&rows, &keep) })
}

/// Cochain complex `D^0 → D^1 → ⋯`.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    pub ring: Ring,
    pub modules: Vec<FreeModule>,
    /// `maps[j] = d^j: D^j → D^{j+1}`
    pub maps: Vec<Matrix>,
}

impl CochainComplex {
    pub fn module(&self, j: isize) -> FreeModule {
        if j < 0 || j as usize >= self.modules.len() {
            FreeModule::zero(&self.ring)
        } else {
            self.modules[j as usize].clone()
        }
    }

    /// `d^j: D^j → D^{j+1}` (zero outside the stored range).
    pub fn differential(&self, j: isize) -> Matrix {
        if j >= 0 && (j as usize) < self.maps.len() {
            self.maps[j as usize].clone()
        } else {
            Matrix::zero(&self.ring, self.module(j + 1).rank(), self.module(j).rank())
        }
    }
}

/// `Hom_R(F_•, R(twist))`.
pub fn dual_complex(c: &FreeComplex, twist: Degree) -> CochainComplex {
    CochainComplex {
        ring: c.ring.clone(),
        modules: c.modules.iter().map(|f| f.dual(twist)).collect(),
        maps: c.maps.iter().map(|m| m.transpose()).collect(),
    }
}

/// Presentation of `ker(out) / im(inc)` where `out: F → G` and `inc: E → F`.
pub fn subquotient(f: &FreeModule, out: &Matrix, g: &FreeModule, inc: &Matrix) -> Result<ModulePresentation> {
    let ring = &f.ring;
    // generators of the kernel
    let kcols: Vec<Vec<Poly>> = if g.is_zero() || out.is_zero() {
        (0..f.rank()).map(|j| (0..f.rank()).map(|i| if i == j { Poly::one(ring) } else { Poly::zero(ring) }).collect()).collect()
    } else {
        let k = kernel_unchecked(out, f, g);
        prune_generators(&k.columns(), f)
    };
    let kmat = Matrix::from_columns(ring, f.rank(), &kcols);
    let kdeg = kmat.column_degrees(f)?;
    let gens = FreeModule::new(ring, kdeg.iter().map(|d| d.unwrap_or(Degree::ZERO)).collect());
    let p = gens.rank();
    // relations: kernel of [K | inc] projected to the K part
    let inc_cols: Vec<Vec<Poly>> = inc.columns().into_iter().filter(|c| c.iter().any(|e| !e.is_zero())).collect();
    let mut all = kcols.clone();
    all.extend(inc_cols.iter().cloned());
    let big = Matrix::from_columns(ring, f.rank(), &all);
    let bdeg = big.column_degrees(f)?;
    let bsrc = FreeModule::new(ring, bdeg.iter().map(|d| d.unwrap_or(Degree::ZERO)).collect());
    let rel = kernel_unchecked(&big, &bsrc, f);
    let mut rel_cols: Vec<Vec<Poly>> = rel
        .columns()
        .into_iter()
        .map(|c| c[..p].to_vec())
        .filter(|c| c.iter().any(|e| !e.is_zero()))
        .collect();
    if !rel_cols.is_empty() {
        rel_cols = prune_generators(&rel_cols, &gens);
    }
    let m = Matrix::from_columns(ring, p, &rel_cols);
    ModulePresentation::from_matrix(gens, m)
}

/// `H_i(C) = ker φ_i / im φ_{i+1}`.
pub fn homology_presentation(c: &FreeComplex, i: usize) -> Result<ModulePresentation> {
    let i = i as isize;
    subquotient(&c.module(i), &c.differential(i), &c.module(i - 1), &c.differential(i + 1))
}

/// `H^j(D) = ker d^j / im d^{j−1}`.
pub fn cohomology_presentation(d: &CochainComplex, j: usize) -> Result<ModulePresentation> {
    let j = j as isize;
    subquotient(&d.module(j), &d.differential(j), &d.module(j + 1), &d.differential(j - 1))
}

/// `Ext^j_R(M, R(twist))` for `j = 0..=max_j`, from a resolution of length `max_j + 1`.
pub fn ext_modules(m: &ModulePresentation, twist: Degree, max_j: usize) -> Result<Vec<ModulePresentation>> {
    let c = free_resolution(m, max_j + 1)?;
    let d = dual_complex(&c, twist);
    (0..=max_j).map(|j| cohomology_presentation(&d, j)).collect()
}

/// `D^{r+1}_M = coker(Hom(F_r, R) → Hom(F_{r+1}, R))`.
pub fn d_top_cokernel(c: &FreeComplex, r: usize) -> Result<ModulePresentation> {
    if c.len() < r + 1 {
        return Err(Error::TooShort(r + 1));
    }
    let fr1 = c.module(r as isize + 1).dual(Degree::ZERO);
    let phi = c.differential(r as isize + 1).transpose();
    ModulePresentation::from_matrix(fr1, phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingDescriptor;

    fn ring(vars: &[&str]) -> Ring {
        let v: Vec<(&str, i64)> = vars.iter().map(|&n| (n, 1)).collect();
        Ring::new(&RingDescriptor::standard(&v)).unwrap()
    }

    #[test]
    fn koszul_resolutions() {
        let r = ring(&["x", "y"]);
        let m = ModulePresentation::quotient(&r, &[r.var("x"), r.var("y")]).unwrap();
        let c = free_resolution(&m, 3).unwrap().trimmed();
        assert_eq!(c.ranks(), vec![1, 2, 1]);
        let b = c.betti();
        assert_eq!(b.get(1, Degree(1, 0)), 2);
        assert_eq!(b.get(2, Degree(2, 0)), 1);
        let r3 = ring(&["x", "y", "z"]);
        let m3 = ModulePresentation::quotient(&r3, &[r3.var("x"), r3.var("y"), r3.var("z")]).unwrap();
        assert_eq!(free_resolution(&m3, 4).unwrap().trimmed().ranks(), vec![1, 3, 3, 1]);
    }

    #[test]
    fn free_module_has_length_zero() {
        let r = ring(&["x", "y"]);
        let m = ModulePresentation::free(FreeModule::new(&r, vec![Degree::ZERO]));
        assert_eq!(free_resolution(&m, 3).unwrap().trimmed().ranks(), vec![1]);
    }

    #[test]
    fn minimalize_removes_trivial_summand() {
        let r = ring(&["x", "y"]);
        let unit = FreeComplex::new(
            &r,
            vec![FreeModule::new(&r, vec![Degree(1, 0)]), FreeModule::new(&r, vec![Degree(1, 0)])],
            vec![Matrix::identity(&r, 1)],
        )
        .unwrap();
        assert_eq!(minimalize(&unit).unwrap().trimmed().ranks(), vec![0]);
        let m = ModulePresentation::quotient(&r, &[r.var("x"), r.var("y")]).unwrap();
        let k = free_resolution(&m, 2).unwrap();
        let padded = k.direct_sum(&unit);
        assert_eq!(padded.ranks(), vec![2, 3, 1]);
        assert_eq!(minimalize(&padded).unwrap().ranks(), vec![1, 2, 1]);
    }

    #[test]
    fn ext_of_hypersurface_quotient() {
        let r = ring(&["x1", "x2"]);
        let m = ModulePresentation::quotient(&r, &[r.var("x1")]).unwrap();
        let ext = ext_modules(&m, Degree(-2, 0), 2).unwrap();
        assert_eq!(ext[0].target.rank(), 0);
        // Ext^1 = (R/(x1))(-1): one generator of degree 1, relation x1
        let e1 = minimal_presentation(&ext[1]).unwrap();
        assert_eq!(e1.target.shifts, vec![Degree(1, 0)]);
        assert_eq!(e1.matrix.get(0, 0).clone(), r.var("x1").scale(&e1.matrix.get(0, 0).lc().unwrap().clone()));
        let e2 = minimal_presentation(&ext[2]).unwrap();
        assert_eq!(e2.target.rank(), 0);
    }

    #[test]
    fn dual_of_multiplication_map() {
        let r = ring(&["x"]);
        let c = FreeComplex::new(
            &r,
            vec![FreeModule::new(&r, vec![Degree::ZERO]), FreeModule::new(&r, vec![Degree(1, 0)])],
            vec![Matrix::from_rows(&r, vec![vec![r.var("x")]])],
        )
        .unwrap();
        let d = dual_complex(&c, Degree(-1, 0));
        assert_eq!(d.modules[0].shifts, vec![Degree(1, 0)]);
        assert_eq!(d.modules[1].shifts, vec![Degree(0, 0)]);
        assert_eq!(d.maps[0].get(0, 0), &r.var("x"));
        let dd = dual_complex(
            &FreeComplex { ring: r.clone(), modules: d.modules.clone(), maps: d.maps.clone() },
            Degree::ZERO,
        );
        assert_eq!(dd.modules[0].shifts, vec![Degree(-1, 0)]);
    }

    #[test]
    fn d_top_of_short_resolution_vanishes() {
        let r = ring(&["x", "y"]);
        let m = ModulePresentation::quotient(&r, &[r.var("x"), r.var("y")]).unwrap();
        let c = free_resolution(&m, 3).unwrap();
        let d = d_top_cokernel(&c, 2).unwrap();
        assert_eq!(d.target.rank(), 0);
        assert!(matches!(d_top_cokernel(&c.clone().trimmed(), 2), Err(Error::TooShort(3))));
    }
}
