//! Graded strands of maps between free modules as explicit matrices over the
//! base, their ranks over a residue field, and strand homology of complexes.

use std::collections::HashMap;

use serde::Serialize;

use crate::coeff::Coeff;
use crate::error::Result;
use crate::fiber::Fiber;
use crate::linalg::{base_rank, BaseRank, DMat};
use crate::module::{FreeModule, Matrix, ModulePresentation};
use crate::mono::Mono;
use crate::poly::Poly;
use crate::resolution::{homology_presentation, FreeComplex};
use crate::ring::{Degree, Ring};

/// The degree-`μ` piece of a map `F → G`. Columns are indexed by the
/// source basis, rows by the target basis; entries are base elements.
#[derive(Clone, Debug)]
pub struct StrandMatrix {
    pub degree: Degree,
    pub source_basis: Vec<(usize, Mono)>,
    pub target_basis: Vec<(usize, Mono)>,
    /// `entries[row][col]`
    pub entries: Vec<Vec<Poly>>,
}

impl StrandMatrix {
    pub fn nrows(&self) -> usize {
        self.target_basis.len()
    }

    pub fn ncols(&self) -> usize {
        self.source_basis.len()
    }

    /// Rank over the fraction field of the base of `ring` (a field or a domain).
    pub fn rank(&self, ring: &Ring) -> usize {
        rank_over_residue_field(ring, &self.entries)
    }

    /// Fraction-free elimination with the pivot trail (certificate material).
    pub fn base_rank(&self, ring: &Ring) -> BaseRank {
        base_rank(ring, &self.entries)
    }

    /// Dense matrix of constants (entries must be constants).
    pub fn to_dense(&self) -> DMat {
        let rows = self
            .entries
            .iter()
            .map(|r| r.iter().map(|p| p.constant_value().unwrap_or_else(Coeff::zero)).collect())
            .collect();
        let mut m = DMat::from_rows(rows);
        if m.rows == 0 {
            m.cols = self.ncols();
        }
        m
    }
}

/// Rank of a matrix of base elements over `Frac(A)`.
pub fn rank_over_residue_field(ring: &Ring, rows: &[Vec<Poly>]) -> usize {
    if rows.is_empty() || rows[0].is_empty() {
        return 0;
    }
    if ring.nparams() == 0 {
        let d = DMat::from_rows(
            rows.iter().map(|r| r.iter().map(|p| p.constant_value().unwrap_or_else(Coeff::zero)).collect()).collect(),
        );
        d.rank()
    } else {
        base_rank(ring, rows).rank
    }
}

/// Monomial basis of `[F]_μ`: pairs `(i, m)` with `deg m = μ − d_i`.
pub fn free_strand_basis(f: &FreeModule, mu: Degree) -> Vec<(usize, Mono)> {
    let mut out = Vec::new();
    for (i, &d) in f.shifts.iter().enumerate() {
        for m in f.ring.monomials_of_degree(mu - d).iter() {
            out.push((i, m.clone()));
        }
    }
    out
}

/// The degree-`μ` strand of `φ: source → target`.
pub fn strand(phi: &Matrix, source: &FreeModule, target: &FreeModule, mu: Degree) -> StrandMatrix {
    let ring = &phi.ring;
    let sb = free_strand_basis(source, mu);
    let tb = free_strand_basis(target, mu);
    let index: HashMap<(usize, Mono), usize> = tb.iter().cloned().enumerate().map(|(k, x)| (x, k)).collect();
    let bs = ring.base_start;
    let mut cols: Vec<Vec<Vec<(Mono, Coeff)>>> = vec![vec![Vec::new(); tb.len()]; sb.len()];
    for (c, (j, m)) in sb.iter().enumerate() {
        for i in 0..target.rank() {
            let p = phi.get(i, *j);
            for (pm, pc) in &p.terms {
                let prod = m.mul(pm);
                let mut g = prod.clone();
                let mut z = prod;
                for k in 0..g.len() {
                    if k < bs {
                        z.exps_mut()[k] = 0;
                    } else {
                        g.exps_mut()[k] = 0;
                    }
                }
                let r = *index.get(&(i, g)).expect("strand target monomial outside basis (inhomogeneous map?)");
                cols[c][r].push((z, pc.clone()));
            }
        }
    }
    let mut entries = vec![vec![Poly::zero(ring); sb.len()]; tb.len()];
    for (c, col) in cols.into_iter().enumerate() {
        for (r, terms) in col.into_iter().enumerate() {
            if !terms.is_empty() {
                entries[r][c] = Poly::from_terms(ring, terms).reduce_base();
            }
        }
    }
    StrandMatrix { degree: mu, source_basis: sb, target_basis: tb, entries }
}

/// `dim [coker φ]_μ` over the residue field of the ring of `m`.
pub fn presentation_strand_dim(m: &ModulePresentation, mu: Degree) -> usize {
    let s = strand(&m.matrix, &m.source, &m.target, mu);
    s.nrows() - s.rank(m.ring())
}

/// Per-position strand homology data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrandHomologyRow {
    pub i: usize,
    pub degree: Vec<i64>,
    /// `dim [P_i]_μ`
    pub p: usize,
    pub z: usize,
    pub b: usize,
    pub h: usize,
    pub c: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrandHomologyReport {
    pub fiber: String,
    pub rows: Vec<StrandHomologyRow>,
}

impl StrandHomologyReport {
    pub fn h(&self, i: usize) -> usize {
        self.rows.iter().find(|r| r.i == i).map_or(0, |r| r.h)
    }
}

/// Evaluate a complex at a fiber.
pub fn evaluate_complex(c: &FreeComplex, fiber: &Fiber) -> FreeComplex {
    FreeComplex {
        ring: fiber.ring.clone(),
        modules: c.modules.iter().map(|f| fiber.free(f)).collect(),
        maps: c.maps.iter().map(|m| fiber.matrix(m)).collect(),
    }
}

/// Strand homology of `C ⊗ k(fiber)` at `μ`, by direct ranks and by the
/// four-term sequence `0 → H_i → C_i → P_{i−1} → C_{i−1} → 0`; the two must agree.
pub fn strand_homology(c: &FreeComplex, mu: Degree, fiber: &Fiber) -> StrandHomologyReport {
    let ev = evaluate_complex(c, fiber);
    let ring = &ev.ring;
    let n = ev.len();
    // rank of φ_i for i = 0..=n+1 (φ_0 and φ_{n+1} are zero)
    let mut ranks = vec![0usize; n + 2];
    let mut dims = vec![0usize; n + 1];
    for (i, d) in dims.iter_mut().enumerate() {
        *d = free_strand_basis(&ev.modules[i], mu).len();
    }
    for (i, rk) in ranks.iter_mut().enumerate().take(n + 1).skip(1) {
        let s = strand(&ev.maps[i - 1], &ev.modules[i], &ev.modules[i - 1], mu);
        *rk = s.rank(ring);
    }
    let mut rows = Vec::new();
    for i in 0..=n {
        let z = dims[i] - ranks[i];
        let b = ranks[i + 1];
        assert!(b <= z, "not a complex at position {i}");
        let h = z - b;
        let ci = dims[i] - b;
        // four-term sequence: h = C_i − P_{i−1} + C_{i−1}
        let (p_prev, c_prev) = if i == 0 { (0, 0) } else { (dims[i - 1], dims[i - 1] - ranks[i]) };
        let h4 = ci as i64 - p_prev as i64 + c_prev as i64;
        assert_eq!(h as i64, h4, "four-term sequence disagrees at position {i}");
        rows.push(StrandHomologyRow { i, degree: mu.to_vec(c.ring.grading_rank), p: dims[i], z, b, h, c: ci });
    }
    StrandHomologyReport { fiber: fiber.to_string(), rows }
}

/// One disagreement found by [`fiber_exactness_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessViolation {
    pub i: usize,
    pub degree: Vec<i64>,
    /// `dim H_i(P ⊗ k(𝔭))_μ`
    pub fiber_homology: usize,
    /// `dim (H_i(P) ⊗ k(𝔭))_μ`
    pub evaluated_homology: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessVerdict {
    pub fiber: String,
    pub commutes: bool,
    pub violations: Vec<ExactnessViolation>,
}

/// Compare `H_i(P ⊗ k(𝔭))` with `H_i(P) ⊗ k(𝔭)` strand by strand for `0 ≤ i ≤ s`.
pub fn fiber_exactness_check(p: &FreeComplex, fiber: &Fiber, window: &[Degree], s: usize) -> Result<ExactnessVerdict> {
    let mut hs = Vec::new();
    for i in 0..=s {
        hs.push(fiber.presentation(&homology_presentation(p, i)?));
    }
    let mut violations = Vec::new();
    for &mu in window {
        let rep = strand_homology(p, mu, fiber);
        for (i, h) in hs.iter().enumerate() {
            let a = rep.h(i);
            let b = presentation_strand_dim(h, mu);
            if a != b {
                violations.push(ExactnessViolation {
                    i,
                    degree: mu.to_vec(p.ring.grading_rank),
                    fiber_homology: a,
                    evaluated_homology: b,
                });
            }
        }
    }
    Ok(ExactnessVerdict { fiber: fiber.to_string(), commutes: violations.is_empty(), violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fiber::FiberPoint;
    use crate::resolution::free_resolution;
    use crate::ring::RingDescriptor;

    #[test]
    fn koszul_row_strand() {
        let r = Ring::new(&RingDescriptor::standard(&[("x", 1), ("y", 1)])).unwrap();
        let phi = Matrix::from_rows(&r, vec![vec![r.var("x"), r.var("y")]]);
        let src = FreeModule::new(&r, vec![Degree(1, 0); 2]);
        let tgt = FreeModule::new(&r, vec![Degree::ZERO]);
        let s = strand(&phi, &src, &tgt, Degree(2, 0));
        assert_eq!((s.nrows(), s.ncols()), (3, 4));
        assert_eq!(s.rank(&r), 3);
        let low = strand(&phi, &src, &tgt, Degree(-1, 0));
        assert_eq!((low.nrows(), low.ncols()), (0, 0));
    }

    fn tx_complex() -> (Ring, FreeComplex) {
        let r = Ring::new(&RingDescriptor::standard(&[("x", 1), ("y", 1)]).over_params(&["t"])).unwrap();
        let c = FreeComplex::new(
            &r,
            vec![FreeModule::new(&r, vec![Degree::ZERO]), FreeModule::new(&r, vec![Degree(1, 0)])],
            vec![Matrix::from_rows(&r, vec![vec![r.parse_poly("t*x").unwrap()]])],
        )
        .unwrap();
        (r, c)
    }

    #[test]
    fn tx_complex_homology_jumps_at_zero() {
        let (r, c) = tx_complex();
        let f0 = Fiber::new(&r, FiberPoint::at_ints(&r, &[0])).unwrap();
        let rep = strand_homology(&c, Degree(1, 0), &f0);
        assert_eq!((rep.h(0), rep.h(1)), (2, 1));
        let f1 = Fiber::new(&r, FiberPoint::at_ints(&r, &[1])).unwrap();
        let rep = strand_homology(&c, Degree(1, 0), &f1);
        assert_eq!((rep.h(0), rep.h(1)), (1, 0));
        let v0 = fiber_exactness_check(&c, &f0, &[Degree(1, 0)], 1).unwrap();
        assert!(!v0.commutes);
        assert_eq!(v0.violations[0].i, 1);
        assert!(fiber_exactness_check(&c, &f1, &[Degree(1, 0)], 1).unwrap().commutes);
    }

    #[test]
    fn koszul_is_acyclic_generically() {
        let r = Ring::new(&RingDescriptor::standard(&[("x", 1), ("y", 1)]).over_params(&["t"])).unwrap();
        let m = ModulePresentation::quotient(&r, &[r.var("x"), r.var("y")]).unwrap();
        let c = free_resolution(&m, 2).unwrap();
        let g = Fiber::generic(&r).unwrap();
        for d in 2..5 {
            assert_eq!(strand_homology(&c, Degree(d, 0), &g).h(1), 0);
        }
    }
}
