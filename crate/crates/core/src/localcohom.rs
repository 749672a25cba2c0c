//! Graded local cohomology `H^i_𝔪(M)` with `𝔪 = (x)`, strand by strand.
//!
//! Route A resolves `M` over the residue field of a fiber and takes homology
//! of `H^r_𝔪(F_•)`, modelled on inverse monomials `x^{−α} y^β` with `α ≥ 1`.
//! Route B uses graded local duality,
//! `dim [H^i_𝔪(M)]_μ = dim [Ext^{r−i}(M, R(−δ))]_{−μ}`, and is available when
//! there are no y-variables.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fiber::Fiber;
use crate::module::{FreeModule, Matrix, ModulePresentation};
use crate::mono::Mono;
use crate::poly::Poly;
use crate::resolution::{cohomology_presentation, dual_complex, free_resolution, minimal_presentation, CochainComplex, FreeComplex};
use crate::ring::{Degree, Ring};
use crate::strands::{free_strand_basis, rank_over_residue_field, strand};

/// Generators of the strands of `H^r_𝔪(R)`: inverse monomials `x^{−1−a} y^b`,
/// encoded as the monomial `x^a y^b`.
#[derive(Clone, Debug)]
pub struct InverseMonomialModule {
    pub ring: Ring,
}

impl InverseMonomialModule {
    pub fn new(ring: &Ring) -> InverseMonomialModule {
        InverseMonomialModule { ring: ring.clone() }
    }

    /// Basis of `[H^r_𝔪(R)]_ν` over the base.
    pub fn basis(&self, nu: Degree) -> Vec<Mono> {
        let ring = &self.ring;
        let shifted = nu + ring.delta();
        let xm = ring.x_mask();
        if !ring.is_bigraded() {
            return ring.monomials_of_degree_in(xm, -shifted).to_vec();
        }
        let b = shifted.1;
        if b < 0 {
            return vec![];
        }
        let gmax = ring.y_indices().iter().map(|&i| -ring.vars[i].deg.0).max().unwrap_or(0);
        let ym = ring.y_mask();
        let mut out = Vec::new();
        for g in -b * gmax..=0 {
            let ys = ring.monomials_of_degree_in(ym, Degree(g, b));
            if ys.is_empty() {
                continue;
            }
            let xs = ring.monomials_of_degree_in(xm, Degree(g - shifted.0, 0));
            for y in ys.iter() {
                for x in xs.iter() {
                    out.push(x.mul(y));
                }
            }
        }
        out
    }

    pub fn count(&self, nu: Degree) -> usize {
        self.basis(nu).len()
    }
}

/// Basis of `[H^r_𝔪(F)]_μ`: pairs `(i, code)` with code from [`InverseMonomialModule`].
fn top_strand_basis(im: &InverseMonomialModule, f: &FreeModule, mu: Degree) -> Vec<(usize, Mono)> {
    let mut out = Vec::new();
    for (i, &d) in f.shifts.iter().enumerate() {
        for m in im.basis(mu - d) {
            out.push((i, m));
        }
    }
    out
}

/// Strand at `μ` of `H^r_𝔪(φ): H^r_𝔪(F) → H^r_𝔪(G)`, entries in the base.
pub fn top_cohomology_strand(phi: &Matrix, f: &FreeModule, g: &FreeModule, mu: Degree) -> Vec<Vec<Poly>> {
    let ring = &phi.ring;
    let im = InverseMonomialModule::new(ring);
    let sb = top_strand_basis(&im, f, mu);
    let tb = top_strand_basis(&im, g, mu);
    let index: HashMap<(usize, Mono), usize> = tb.iter().cloned().enumerate().map(|(k, x)| (x, k)).collect();
    let xs = ring.x_indices();
    let bs = ring.base_start;
    let mut entries = vec![vec![Poly::zero(ring); sb.len()]; tb.len()];
    for (c, (k, code)) in sb.iter().enumerate() {
        for i in 0..g.rank() {
            let p = phi.get(i, *k);
            let mut acc: HashMap<usize, Vec<(Mono, crate::coeff::Coeff)>> = HashMap::new();
            'term: for (pm, pc) in &p.terms {
                let e = pm.exps();
                let mut ne = code.exps().to_vec();
                for &x in &xs {
                    if e[x] > ne[x] {
                        continue 'term;
                    }
                    ne[x] -= e[x];
                }
                let mut z = vec![0u16; e.len()];
                for v in 0..e.len() {
                    if v >= bs {
                        z[v] = e[v];
                    } else if !xs.contains(&v) {
                        ne[v] += e[v];
                    }
                }
                let r = *index.get(&(i, Mono::from_exps(&ne))).expect("inhomogeneous map in top cohomology strand");
                acc.entry(r).or_default().push((Mono::from_exps(&z), pc.clone()));
            }
            for (r, terms) in acc {
                let v = entries[r][c].add(&Poly::from_terms(ring, terms));
                entries[r][c] = v.reduce_base();
            }
        }
    }
    entries
}

/// Which computation produced an entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Route {
    A,
    B,
    #[serde(rename = "both")]
    Both,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyRow {
    pub i: usize,
    pub degree: Vec<i64>,
    pub dim: usize,
    pub route: Route,
}

/// `dim [H^i_𝔪(M ⊗ k(𝔭))]_μ` over a window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyTable {
    pub fiber: String,
    pub rows: Vec<CohomologyRow>,
}

impl CohomologyTable {
    pub fn get(&self, i: usize, degree: &[i64]) -> Option<usize> {
        self.rows.iter().find(|r| r.i == i && r.degree == degree).map(|r| r.dim)
    }

    /// Nonzero entries only, as `(i, degree, dim)`.
    pub fn support(&self) -> Vec<(usize, Vec<i64>, usize)> {
        self.rows.iter().filter(|r| r.dim > 0).map(|r| (r.i, r.degree.clone(), r.dim)).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("i,degree,dim,route\n");
        for r in &self.rows {
            let d = r.degree.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
            let route = match r.route {
                Route::A => "A",
                Route::B => "B",
                Route::Both => "both",
            };
            s.push_str(&format!("{},{},{},{}\n", r.i, d, r.dim, route));
        }
        s
    }
}

/// A module evaluated at a fiber together with its resolution there.
pub struct LocalCohomology {
    pub fiber: Fiber,
    pub module: ModulePresentation,
    pub resolution: FreeComplex,
    dual: CochainComplex,
    r: usize,
    ranks_a: HashMap<(usize, Degree), usize>,
    ranks_b: HashMap<(usize, Degree), usize>,
}

impl LocalCohomology {
    /// Evaluate `M` at the fiber first, then resolve over the residue field.
    pub fn new(m: &ModulePresentation, fiber: &Fiber) -> Result<LocalCohomology> {
        let ev = fiber.presentation(m);
        let r = ev.ring().r();
        let res = free_resolution(&ev, r + 1)?;
        let dual = dual_complex(&res, -ev.ring().delta());
        Ok(LocalCohomology {
            fiber: fiber.clone(),
            module: ev,
            resolution: res,
            dual,
            r,
            ranks_a: HashMap::new(),
            ranks_b: HashMap::new(),
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.fiber.ring
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn route_b_available(&self) -> bool {
        !self.ring().is_bigraded()
    }

    /// rank of `H^r_𝔪(φ_j)` at `μ`
    fn rank_a(&mut self, j: usize, mu: Degree) -> usize {
        if let Some(&v) = self.ranks_a.get(&(j, mu)) {
            return v;
        }
        let c = &self.resolution;
        let v = if j == 0 || j > c.len() {
            0
        } else {
            let e = top_cohomology_strand(&c.differential(j as isize), &c.module(j as isize), &c.module(j as isize - 1), mu);
            rank_over_residue_field(&self.fiber.ring, &e)
        };
        self.ranks_a.insert((j, mu), v);
        v
    }

    /// rank of `d^j = φ_{j+1}^T` at degree `ν`
    fn rank_b(&mut self, j: isize, nu: Degree) -> usize {
        if j < 0 {
            return 0;
        }
        if let Some(&v) = self.ranks_b.get(&(j as usize, nu)) {
            return v;
        }
        let d = &self.dual;
        let s = strand(&d.differential(j), &d.module(j), &d.module(j + 1), nu);
        let v = s.rank(&self.fiber.ring);
        self.ranks_b.insert((j as usize, nu), v);
        v
    }

    /// Route A: `dim [H^i_𝔪(M)]_μ = dim H_{r−i}(H^r_𝔪(F_•))_μ`.
    pub fn dim_route_a(&mut self, i: usize, mu: Degree) -> usize {
        if i > self.r {
            return 0;
        }
        let j = self.r - i;
        let im = InverseMonomialModule::new(self.ring());
        let dim = top_strand_basis(&im, &self.resolution.module(j as isize), mu).len();
        let out = self.rank_a(j, mu);
        let inc = self.rank_a(j + 1, mu);
        dim - out - inc
    }

    /// Route B: `dim [Ext^{r−i}(M, R(−δ))]_{−μ}`.
    pub fn dim_route_b(&mut self, i: usize, mu: Degree) -> Result<usize> {
        if !self.route_b_available() {
            return Err(Error::Unsupported("the duality route needs a ring without y-variables".into()));
        }
        if i > self.r {
            return Ok(0);
        }
        let j = (self.r - i) as isize;
        let nu = -mu;
        let dim = free_strand_basis(&self.dual.module(j), nu).len();
        let out = self.rank_b(j, nu);
        let inc = self.rank_b(j - 1, nu);
        Ok(dim - out - inc)
    }

    pub fn table_a(&mut self, window: &[Degree]) -> CohomologyTable {
        let gr = self.ring().grading_rank;
        let mut rows = Vec::new();
        for i in 0..=self.r {
            for &mu in window {
                rows.push(CohomologyRow { i, degree: mu.to_vec(gr), dim: self.dim_route_a(i, mu), route: Route::A });
            }
        }
        CohomologyTable { fiber: self.fiber.to_string(), rows }
    }

    pub fn table_b(&mut self, window: &[Degree]) -> Result<CohomologyTable> {
        let gr = self.ring().grading_rank;
        let mut rows = Vec::new();
        for i in 0..=self.r {
            for &mu in window {
                rows.push(CohomologyRow { i, degree: mu.to_vec(gr), dim: self.dim_route_b(i, mu)?, route: Route::B });
            }
        }
        Ok(CohomologyTable { fiber: self.fiber.to_string(), rows })
    }

    /// Both routes; any disagreement is an error.
    pub fn cross_validate(&mut self, window: &[Degree]) -> Result<CohomologyTable> {
        let gr = self.ring().grading_rank;
        let mut rows = Vec::new();
        for i in 0..=self.r {
            for &mu in window {
                let a = self.dim_route_a(i, mu);
                let b = self.dim_route_b(i, mu)?;
                if a != b {
                    return Err(Error::DualityMismatch { i, degree: format!("{:?}", mu.to_vec(gr)), a, b });
                }
                rows.push(CohomologyRow { i, degree: mu.to_vec(gr), dim: a, route: Route::Both });
            }
        }
        Ok(CohomologyTable { fiber: self.fiber.to_string(), rows })
    }

    /// Default window: from the lowest shift of `F_r` minus `ψ(δ) + 1` up to the
    /// highest shift of any `F_j`, `j ≤ r`, in `ψ`-degree. For `ℤ²` gradings the
    /// same bounds are applied coordinatewise.
    pub fn default_window(&self, slack: i64) -> Vec<Degree> {
        let ring = self.ring();
        let c = &self.resolution;
        let all: Vec<Degree> = (0..=self.r.min(c.len())).flat_map(|j| c.modules[j].shifts.clone()).collect();
        // every shift, not only those of F_r: non-CM modules put lower a^i there
        let low_from = &all;
        let delta = ring.delta();
        if all.is_empty() {
            return vec![];
        }
        if ring.grading_rank == 1 {
            let lo = low_from.iter().map(|d| d.0).min().unwrap() - delta.0 - 1 - slack;
            let hi = all.iter().map(|d| d.0).max().unwrap() + slack;
            (lo..=hi).map(|n| Degree(n, 0)).collect()
        } else {
            let lo0 = low_from.iter().map(|d| d.0).min().unwrap() - delta.0 - 1 - slack;
            let hi0 = all.iter().map(|d| d.0).max().unwrap() + slack;
            let lo1 = low_from.iter().map(|d| d.1).min().unwrap() - delta.1 - 1 - slack;
            let hi1 = all.iter().map(|d| d.1).max().unwrap() + slack;
            let mut out = Vec::new();
            for a in lo0..=hi0 {
                for b in lo1..=hi1 {
                    out.push(Degree(a, b));
                }
            }
            out
        }
    }

    /// `Ext^j(M, R(−δ))` over the residue field, minimally presented.
    pub fn ext(&self, j: usize) -> Result<ModulePresentation> {
        minimal_presentation(&cohomology_presentation(&self.dual, j)?)
    }

    /// `dim`, `depth`, `a^i` and regularity via `a^i = −indeg Ext^{r−i}(M, R(−δ))`.
    pub fn invariants(&mut self) -> Result<Invariants> {
        let ring = self.ring().clone();
        if ring.grading_rank != 1 || ring.is_bigraded() {
            return Err(Error::Unsupported("numerical invariants need a ZZ-graded ring without y-variables".into()));
        }
        if self.module.target.is_zero() || (0..=self.r).all(|j| self.ext(j).map(|e| e.target.is_zero()).unwrap_or(false)) {
            return Err(Error::ZeroModule);
        }
        let mut a = vec![None; self.r + 1];
        for (i, slot) in a.iter_mut().enumerate() {
            let e = self.ext(self.r - i)?;
            if let Some(indeg) = e.target.shifts.iter().map(|d| d.0).min() {
                *slot = Some(-indeg);
            }
        }
        let nonzero: Vec<usize> = (0..=self.r).filter(|&i| a[i].is_some()).collect();
        let dim = *nonzero.last().unwrap();
        let depth = nonzero[0];
        let reg = nonzero.iter().map(|&i| a[i].unwrap() + i as i64).max().unwrap();
        // the top degree found by duality must be visible to route A, and nothing above it
        for &i in &nonzero {
            let top = a[i].unwrap();
            assert!(self.dim_route_a(i, Degree(top, 0)) > 0, "H^{i} vanishes at its a-invariant {top}");
            assert_eq!(self.dim_route_a(i, Degree(top + 1, 0)), 0, "H^{i} nonzero above its a-invariant");
        }
        assert!(depth <= dim && dim <= self.r);
        Ok(Invariants { dim, depth, a, reg })
    }

    /// `dim H^i(X_𝔭, M~(n))` for `n` in `ns`, `X = Proj`, standard graded rings only.
    pub fn sheaf_cohomology(&mut self, ns: &[i64]) -> Result<Vec<SheafRow>> {
        if !self.ring().is_standard_graded() {
            return Err(Error::NotStandardGraded);
        }
        let mut out = Vec::new();
        for &n in ns {
            let mu = Degree(n, 0);
            let m_n = crate::strands::presentation_strand_dim(&self.module, mu);
            let h0 = m_n + self.dim_route_a(1, mu) - self.dim_route_a(0, mu);
            out.push(SheafRow { i: 0, n, dim: h0 });
            for i in 1..self.r {
                out.push(SheafRow { i, n, dim: self.dim_route_a(i + 1, mu) });
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Invariants {
    pub dim: usize,
    pub depth: usize,
    /// `a^i` for `i = 0..=r`; `None` stands for `−∞`
    pub a: Vec<Option<i64>>,
    pub reg: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SheafRow {
    pub i: usize,
    pub n: i64,
    pub dim: usize,
}

/// Route A table for `M` at a fiber.
pub fn local_cohomology_dims_dualcomplex(m: &ModulePresentation, window: &[Degree], fiber: &Fiber) -> Result<CohomologyTable> {
    Ok(LocalCohomology::new(m, fiber)?.table_a(window))
}

/// Route B table for `M` at a fiber.
pub fn local_cohomology_dims_extdual(m: &ModulePresentation, window: &[Degree], fiber: &Fiber) -> Result<CohomologyTable> {
    LocalCohomology::new(m, fiber)?.table_b(window)
}

pub fn cross_validate(m: &ModulePresentation, window: &[Degree], fiber: &Fiber) -> Result<CohomologyTable> {
    LocalCohomology::new(m, fiber)?.cross_validate(window)
}

pub fn invariants(m: &ModulePresentation, fiber: &Fiber) -> Result<Invariants> {
    LocalCohomology::new(m, fiber)?.invariants()
}

pub fn sheaf_cohomology_dims(m: &ModulePresentation, ns: &[i64], fiber: &Fiber) -> Result<Vec<SheafRow>> {
    LocalCohomology::new(m, fiber)?.sheaf_cohomology(ns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fiber::FiberPoint;
    use crate::ring::RingDescriptor;

    fn ring(vars: &[&str]) -> Ring {
        let v: Vec<(&str, i64)> = vars.iter().map(|&n| (n, 1)).collect();
        Ring::new(&RingDescriptor::standard(&v)).unwrap()
    }

    fn at_point(r: &Ring) -> Fiber {
        Fiber::new(r, FiberPoint::Closed(vec![])).unwrap()
    }

    #[test]
    fn top_cohomology_of_the_plane() {
        let r = ring(&["x1", "x2"]);
        let m = ModulePresentation::free(FreeModule::new(&r, vec![Degree::ZERO]));
        let mut lc = LocalCohomology::new(&m, &at_point(&r)).unwrap();
        assert_eq!(lc.dim_route_a(2, Degree(-2, 0)), 1);
        assert_eq!(lc.dim_route_a(2, Degree(-3, 0)), 2);
        assert_eq!(lc.dim_route_a(2, Degree(-1, 0)), 0);
        for n in -5..3 {
            assert_eq!(lc.dim_route_a(1, Degree(n, 0)), 0);
        }
        assert_eq!(lc.dim_route_b(2, Degree(-2, 0)).unwrap(), 1);
    }

    #[test]
    fn hyperplane_and_point() {
        let r = ring(&["x1", "x2"]);
        let m = ModulePresentation::quotient(&r, &[r.var("x1")]).unwrap();
        let mut lc = LocalCohomology::new(&m, &at_point(&r)).unwrap();
        let w: Vec<Degree> = (-6..3).map(|n| Degree(n, 0)).collect();
        let t = lc.cross_validate(&w).unwrap();
        for n in -6..3 {
            assert_eq!(t.get(1, &[n]).unwrap(), usize::from(n <= -1));
            assert_eq!(t.get(2, &[n]).unwrap(), 0);
        }
        let pt = ModulePresentation::quotient(&r, &[r.var("x1"), r.var("x2")]).unwrap();
        let t = cross_validate(&pt, &w, &at_point(&r)).unwrap();
        assert_eq!(t.support(), vec![(0, vec![0], 1)]);
    }

    #[test]
    fn invariants_examples() {
        let r = ring(&["x", "y"]);
        let f = at_point(&r);
        let free = ModulePresentation::free(FreeModule::new(&r, vec![Degree::ZERO]));
        assert_eq!(invariants(&free, &f).unwrap(), Invariants { dim: 2, depth: 2, a: vec![None, None, Some(-2)], reg: 0 });
        let line = ModulePresentation::quotient(&r, &[r.var("x")]).unwrap();
        assert_eq!(invariants(&line, &f).unwrap(), Invariants { dim: 1, depth: 1, a: vec![None, Some(-1), None], reg: 0 });
        let pt = ModulePresentation::quotient(&r, &[r.var("x"), r.var("y")]).unwrap();
        assert_eq!(invariants(&pt, &f).unwrap(), Invariants { dim: 0, depth: 0, a: vec![Some(0), None, None], reg: 0 });
    }

    #[test]
    fn projective_line_sheaf_cohomology() {
        let r = ring(&["x0", "x1"]);
        let f = at_point(&r);
        let free = ModulePresentation::free(FreeModule::new(&r, vec![Degree::ZERO]));
        let rows = sheaf_cohomology_dims(&free, &[-3, -2, -1, 0, 1, 2], &f).unwrap();
        let h = |i: usize, n: i64| rows.iter().find(|x| x.i == i && x.n == n).unwrap().dim;
        assert_eq!((h(0, 0), h(0, 1), h(0, 2)), (1, 2, 3));
        assert_eq!((h(1, -2), h(1, -3), h(1, -1)), (1, 2, 0));
        let point = ModulePresentation::quotient(&r, &[r.var("x0")]).unwrap();
        let rows = sheaf_cohomology_dims(&point, &[-2, 0, 3], &f).unwrap();
        assert!(rows.iter().all(|x| x.dim == usize::from(x.i == 0)));
    }

    #[test]
    fn shifted_free_module_bookkeeping() {
        let r = ring(&["x", "y", "z"]);
        let m = ModulePresentation::free(FreeModule::new(&r, vec![Degree(3, 0)]));
        let mut lc = LocalCohomology::new(&m, &at_point(&r)).unwrap();
        let w = lc.default_window(0);
        let t = lc.cross_validate(&w).unwrap();
        // H^3(R(-3)) starts in degree 0
        assert_eq!(t.get(3, &[0]).unwrap(), 1);
        assert_eq!(t.get(3, &[1]).unwrap(), 0);
    }
}

#[cfg(test)]
mod katzman {
    use super::*;
    use crate::fiber::FiberPoint;
    use crate::ring::RingDescriptor;

    pub(crate) fn ring() -> Ring {
        let mut d = RingDescriptor::standard(&[("u", 1), ("v", 1)]).over_params(&["s", "t"]);
        d.grading_rank = 2;
        d.xvars = vec![("u".into(), Degree(1, 0)), ("v".into(), Degree(1, 0))];
        d.yvars = vec![("x".into(), Degree(0, 1)), ("y".into(), Degree(0, 1))];
        Ring::new(&d).unwrap()
    }

    #[test]
    fn strand_jumps_on_the_curve() {
        let r = ring();
        let f = r.parse_poly("s*x^2*v^2 - (t+s)*x*y*u*v + t*y^2*u^2").unwrap();
        let m = ModulePresentation::quotient(&r, &[f]).unwrap();
        let h2 = |vals: &[i64], d: i64| {
            let fb = Fiber::new(&r, FiberPoint::at_ints(&r, vals)).unwrap();
            let mut lc = LocalCohomology::new(&m, &fb).unwrap();
            (lc.dim_route_a(1, Degree(-d, d)), lc.dim_route_a(2, Degree(-d, d)))
        };
        assert_eq!(h2(&[1, 2], 2), (0, 0));
        assert_eq!(h2(&[1, -1], 2), (1, 1));
        assert_eq!(h2(&[1, -1], 3), (0, 0));
        let mut g = LocalCohomology::new(&m, &Fiber::generic(&r).unwrap()).unwrap();
        assert_eq!(g.dim_route_a(2, Degree(-2, 2)), 0);
    }
}
