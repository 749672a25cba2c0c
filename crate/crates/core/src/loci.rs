//! Closed subsets of `Spec(A)` where graded strands stop being locally free,
//! degree windows, dense-open certificates, and a harness that checks a
//! fiberwise quantity is locally constant off a locus.
//!
//! Local freeness of a strand `coker(S)` over a reduced base is read off the
//! rank function of `S`: on the component `V(P)` the generic rank `ρ` is
//! computed over `Frac(A/P)`, and the strand fails to be free exactly on
//! `V(P + I_ρ(S))` together with the meets `V(P + Q)` of components whose
//! generic ranks differ.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::fiber::{Fiber, FiberPoint};
use crate::groebner::{ideal_gb, ideal_nf, intersect};
use crate::linalg::DMat;
use crate::localcohom::top_cohomology_strand;
use crate::module::ModulePresentation;
use crate::mono::Mono;
use crate::poly::Poly;
use crate::resolution::{cohomology_presentation, d_top_cokernel, dual_complex, free_resolution, FreeComplex};
use crate::ring::{Degree, Ring};
use crate::strands::{rank_over_residue_field, strand};
use crate::unipoly::UniPoly;

/// Above this many maximal minors the Fitting ideal is sampled instead.
const MINOR_LIMIT: u128 = 3000;
const RANDOM_MINORS: usize = 16;

/// A closed subset `V(I)` of `Spec(A)`; `I = (1)` is the empty locus.
#[derive(Clone, Debug)]
pub struct Locus {
    pub ring: Ring,
    /// Gröbner basis of `I`, base elements only
    pub generators: Vec<Poly>,
    pub radical: bool,
    pub provenance: Vec<String>,
}

#[derive(Serialize)]
struct LocusJson<'a> {
    generators: Vec<String>,
    radical: bool,
    provenance: &'a [String],
}

impl Locus {
    pub fn empty(ring: &Ring) -> Locus {
        Locus { ring: ring.clone(), generators: vec![Poly::one(ring)], radical: true, provenance: vec![] }
    }

    pub fn is_empty(&self) -> bool {
        self.generators.iter().any(|g| g.is_unit_constant())
    }

    /// Whether `V(I)` contains the whole component `V(P)`.
    pub fn contains_component(&self, prime: &[Poly]) -> bool {
        let gb = base_gb(&self.ring, prime);
        self.generators.iter().all(|g| ideal_nf(&gb, g).is_zero())
    }

    pub fn contains(&self, p: &FiberPoint) -> bool {
        p.lies_in(&self.ring, &self.generators)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let generators = self.generators.iter().map(|g| g.to_string()).collect();
        serde_json::to_value(LocusJson { generators, radical: self.radical, provenance: &self.provenance }).unwrap()
    }
}

/// Gröbner basis of `gens + J` in the ambient ring.
fn base_gb(ring: &Ring, gens: &[Poly]) -> Vec<Poly> {
    let mut all: Vec<Poly> = gens.iter().map(|g| g.clone().reduce_base()).filter(|g| !g.is_zero()).collect();
    all.extend(ring.base().j_gb.iter().cloned());
    ideal_gb(ring, &all)
}

fn is_unit_ideal(gb: &[Poly]) -> bool {
    gb.iter().any(|g| g.is_unit_constant())
}

/// `V(a) ⊆ V(b)` when `b ⊆ a`; exact when `a` is radical.
fn variety_within(a_gb: &[Poly], b: &[Poly]) -> bool {
    b.iter().all(|g| ideal_nf(a_gb, g).is_zero())
}

fn poly_gcd(ring: &Ring, a: &Poly, b: &Poly) -> Poly {
    if b.is_zero() {
        return a.monic();
    }
    if a.is_zero() {
        return b.monic();
    }
    let l = intersect(ring, std::slice::from_ref(a), std::slice::from_ref(b));
    let l = &l[0];
    a.mul(b).div_exact(l).expect("lcm divides the product").monic()
}

/// Squarefree part of a base polynomial over a field of characteristic zero.
pub fn squarefree_part(ring: &Ring, f: &Poly) -> Poly {
    let mut g = f.clone();
    for v in ring.z_indices() {
        let d = f.deriv(v);
        if !d.is_zero() {
            g = poly_gcd(ring, &g, &d);
        }
    }
    f.div_exact(&g).expect("gcd divides").monic()
}

fn is_zero_dimensional(ring: &Ring, gb: &[Poly]) -> bool {
    ring.z_indices().iter().all(|&v| {
        gb.iter().any(|g| {
            let e = g.lm().unwrap().exps();
            e[v] > 0 && e.iter().enumerate().all(|(i, &x)| i == v || x == 0)
        })
    })
}

/// Minimal polynomial of the variable `v` modulo a zero-dimensional ideal.
fn minimal_polynomial(ring: &Ring, gb: &[Poly], v: usize) -> Option<UniPoly> {
    let var = Poly::var(ring, v);
    let mut nfs: Vec<Poly> = vec![ideal_nf(gb, &Poly::one(ring))];
    let mut power = Poly::one(ring);
    loop {
        let mut monos: BTreeSet<Mono> = BTreeSet::new();
        for p in &nfs {
            monos.extend(p.terms.iter().map(|(m, _)| m.clone()));
        }
        let monos: Vec<Mono> = monos.into_iter().collect();
        let rows: Vec<Vec<Coeff>> = monos
            .iter()
            .map(|m| {
                nfs.iter()
                    .map(|p| p.terms.iter().find(|(pm, _)| pm == m).map(|(_, c)| c.clone()).unwrap_or_else(Coeff::zero))
                    .collect()
            })
            .collect();
        let ker = if rows.is_empty() { vec![vec![Coeff::one(); nfs.len()]] } else { DMat::from_rows(rows).kernel() };
        if let Some(k) = ker.first() {
            let rats: Option<Vec<_>> = k.iter().map(|c| c.as_rat().cloned()).collect();
            return rats.map(UniPoly);
        }
        if nfs.len() > 64 {
            return None;
        }
        power = power.mul(&var);
        nfs.push(ideal_nf(gb, &power));
    }
}

/// Radical of `gens + J`: exact for principal ideals over `k[z]` and for
/// zero-dimensional ideals in characteristic zero; otherwise the ideal itself
/// with `false`.
pub fn radical(ring: &Ring, gens: &[Poly]) -> (Vec<Poly>, bool) {
    let gb = base_gb(ring, gens);
    if gb.is_empty() || is_unit_ideal(&gb) {
        return (gb, true);
    }
    if ring.char_p != 0 {
        return (gb, false);
    }
    if !ring.has_quotient_base() && gb.len() == 1 {
        return (vec![squarefree_part(ring, &gb[0])], true);
    }
    if is_zero_dimensional(ring, &gb) {
        let mut all = gb.clone();
        for v in ring.z_indices() {
            match minimal_polynomial(ring, &gb, v) {
                Some(u) => all.push(u.squarefree().to_poly(ring, v)),
                None => return (gb, false),
            }
        }
        return (base_gb(ring, &all), true);
    }
    (gb, false)
}

/// Accumulates pieces `V(I_k)` of a union.
pub struct LocusBuilder {
    ring: Ring,
    pieces: Vec<(Vec<Poly>, bool)>,
    provenance: Vec<String>,
}

impl LocusBuilder {
    pub fn new(ring: &Ring) -> LocusBuilder {
        LocusBuilder { ring: ring.clone(), pieces: vec![], provenance: vec![] }
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.provenance.push(s.into());
    }

    /// Add `V(gens)`; returns false if it was empty or already covered.
    pub fn add(&mut self, gens: &[Poly], label: &str) -> bool {
        let (rad, ok) = radical(&self.ring, gens);
        if is_unit_ideal(&rad) {
            return false;
        }
        if self.pieces.iter().any(|(p, _)| variety_within(&rad, p)) {
            return false;
        }
        self.pieces.retain(|(p, _)| !variety_within(p, &rad));
        self.pieces.push((rad, ok));
        self.provenance.push(label.to_string());
        true
    }

    pub fn add_locus(&mut self, l: &Locus) {
        if !l.is_empty() {
            self.add(&l.generators, &l.provenance.join("; "));
        }
    }

    pub fn finish(self) -> Locus {
        let ring = self.ring;
        if self.pieces.is_empty() {
            let mut l = Locus::empty(&ring);
            l.provenance = self.provenance;
            return l;
        }
        let radical = self.pieces.iter().all(|(_, ok)| *ok);
        let mut it = self.pieces.into_iter();
        let mut acc = it.next().unwrap().0;
        for (p, _) in it {
            acc = base_gb(&ring, &intersect(&ring, &acc, &p));
        }
        Locus { ring, generators: acc, radical, provenance: self.provenance }
    }
}

fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut r: u128 = 1;
    for i in 0..k {
        r = r.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    r
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Determinant computed in `k[z]` by Bareiss, then reduced modulo `J`; valid
/// over any base since no division happens in the quotient.
pub fn lifted_det(ring: &Ring, rows: &[Vec<Poly>]) -> Poly {
    let n = rows.len();
    let mut m: Vec<Vec<Poly>> = rows.to_vec();
    let mut prev = Poly::one(ring);
    let mut sign = false;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else { return Poly::zero(ring) };
        if p != k {
            m.swap(k, p);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].mul_raw(&m[i][j]).sub(&m[i][k].mul_raw(&m[k][j]));
                m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let d = if n == 0 { Poly::one(ring) } else { m[n - 1][n - 1].clone() };
    if sign { d.neg() } else { d }.reduce_base()
}

/// Generators of the Fitting-style ideal `I_k(S)` of `k × k` minors.
/// Returns the generators and whether they were sampled at random.
pub fn minors_ideal(ring: &Ring, rows: &[Vec<Poly>], k: usize, rng: &mut ChaCha8Rng) -> (Vec<Poly>, bool) {
    let mut m: Vec<Vec<Poly>> = rows.to_vec();
    let mut k = k;
    // eliminating a unit entry lowers the minor size by one without changing the ideal
    while k > 0 {
        let pos = m.iter().enumerate().find_map(|(a, r)| {
            r.iter().position(|p| p.is_constant() && !p.is_zero()).map(|b| (a, b))
        });
        let Some((a, b)) = pos else { break };
        let u_inv = m[a][b].constant_value().unwrap().inv();
        let pivot_row = m[a].clone();
        let mut next = Vec::with_capacity(m.len() - 1);
        for (i, r) in m.iter().enumerate() {
            if i == a {
                continue;
            }
            let f = r[b].scale(&u_inv);
            let nr: Vec<Poly> = (0..r.len())
                .filter(|&j| j != b)
                .map(|j| if f.is_zero() { r[j].clone() } else { r[j].sub(&f.mul(&pivot_row[j])).reduce_base() })
                .collect();
            next.push(nr);
        }
        m = next;
        k -= 1;
    }
    if k == 0 {
        return (vec![Poly::one(ring)], false);
    }
    m.retain(|r| r.iter().any(|p| !p.is_zero()));
    let ncols = m.first().map_or(0, |r| r.len());
    let keep: Vec<usize> = (0..ncols).filter(|&j| m.iter().any(|r| !r[j].is_zero())).collect();
    let m: Vec<Vec<Poly>> = m.iter().map(|r| keep.iter().map(|&j| r[j].clone()).collect()).collect();
    let (n, c) = (m.len(), keep.len());
    if k > n.min(c) {
        return (vec![], false);
    }
    if binom(n, k).saturating_mul(binom(c, k)) <= MINOR_LIMIT {
        let mut out = Vec::new();
        let rsets = combinations(n, k);
        let csets = combinations(c, k);
        for rs in &rsets {
            for cs in &csets {
                let sub: Vec<Vec<Poly>> = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j].clone()).collect()).collect();
                let d = lifted_det(ring, &sub);
                if !d.is_zero() {
                    out.push(d);
                }
            }
        }
        return (out, false);
    }
    let mut out = Vec::new();
    for _ in 0..RANDOM_MINORS {
        let p: Vec<Vec<i64>> = (0..k).map(|_| (0..n).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let q: Vec<Vec<i64>> = (0..c).map(|_| (0..k).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let mq: Vec<Vec<Poly>> = (0..n)
            .map(|i| {
                (0..k)
                    .map(|b| {
                        let mut acc = Poly::zero(ring);
                        for j in 0..c {
                            if q[j][b] != 0 && !m[i][j].is_zero() {
                                acc = acc.add(&m[i][j].scale(&Coeff::from_int(q[j][b])));
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        let sub: Vec<Vec<Poly>> = (0..k)
            .map(|a| {
                (0..k)
                    .map(|b| {
                        let mut acc = Poly::zero(ring);
                        for i in 0..n {
                            if p[a][i] != 0 {
                                acc = acc.add(&mq[i][b].scale(&Coeff::from_int(p[a][i])));
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        let d = lifted_det(ring, &sub);
        if !d.is_zero() {
            out.push(d);
        }
    }
    (out, true)
}

/// The irreducible components of `Spec(A)` with their generic fibers.
pub fn component_fibers(ring: &Ring) -> Result<Vec<(Vec<Poly>, Fiber)>> {
    ring.base()
        .components
        .iter()
        .map(|p| Ok((p.clone(), Fiber::new(ring, FiberPoint::Prime(p.clone()))?)))
        .collect()
}

/// Shared state for building loci from strand matrices.
pub struct RankDropContext {
    pub ring: Ring,
    comps: Vec<(Vec<Poly>, Fiber)>,
    rng: ChaCha8Rng,
    pub randomized: bool,
}

impl RankDropContext {
    pub fn new(ring: &Ring, seed: u64) -> Result<RankDropContext> {
        Ok(RankDropContext { ring: ring.clone(), comps: component_fibers(ring)?, rng: ChaCha8Rng::seed_from_u64(seed), randomized: false })
    }

    /// Generic rank of a base matrix on each component.
    pub fn ranks(&self, rows: &[Vec<Poly>]) -> Vec<usize> {
        self.comps
            .iter()
            .map(|(_, f)| {
                let ev: Vec<Vec<Poly>> = rows.iter().map(|r| r.iter().map(|p| f.poly(p)).collect()).collect();
                rank_over_residue_field(&f.ring, &ev)
            })
            .collect()
    }

    /// Add the points where the rank of `rows` is not locally constant.
    pub fn add_matrix(&mut self, b: &mut LocusBuilder, rows: &[Vec<Poly>], label: &str) {
        if rows.is_empty() || rows[0].is_empty() {
            return;
        }
        let ranks = self.ranks(rows);
        let mut cache: HashMap<usize, Vec<Poly>> = HashMap::new();
        for (c, (prime, _)) in self.comps.iter().enumerate() {
            let rho = ranks[c];
            if rho == 0 {
                continue;
            }
            let minors = match cache.get(&rho) {
                Some(m) => m.clone(),
                None => {
                    let (m, rand) = minors_ideal(&self.ring, rows, rho, &mut self.rng);
                    if rand {
                        self.randomized = true;
                        b.note(format!("{label}: rank-{rho} minors sampled at random"));
                    }
                    cache.insert(rho, m.clone());
                    m
                }
            };
            let mut g = prime.clone();
            g.extend(minors);
            b.add(&g, &format!("{label}: rank below {rho}"));
        }
        for c in 0..self.comps.len() {
            for d in c + 1..self.comps.len() {
                if ranks[c] != ranks[d] {
                    let mut g = self.comps[c].0.clone();
                    g.extend(self.comps[d].0.iter().cloned());
                    b.add(&g, &format!("{label}: ranks {} and {} meet", ranks[c], ranks[d]));
                }
            }
        }
    }
}

/// Finite set of degrees examined for one homological index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeWindow {
    pub i: usize,
    pub degrees: Vec<Degree>,
    /// the window is a hull of resolution shifts, not a proven bound
    pub heuristic: bool,
}

/// Degrees `d + e` with `d` a shift of the given free modules, `e` a degree of
/// a monomial, and `λ(d + e)` at most the largest `λ`-shift plus `slack`. Here
/// `λ` is `ψ` for `ℤ`-gradings and the enumeration functional of the ring
/// (positive on y-degrees too) for `ℤ²`-gradings.
pub fn window_from_shifts(ring: &Ring, shifts: &[Degree], slack: i64) -> Vec<Degree> {
    if shifts.is_empty() {
        return vec![];
    }
    let lam = |d: Degree| ring.enum_weight_of(d).unwrap();
    let top = shifts.iter().map(|&d| lam(d)).max().unwrap() + slack;
    let mut steps: Vec<Degree> = ring.graded_indices().iter().map(|&i| ring.vars[i].deg).collect();
    steps.sort();
    steps.dedup();
    let mut out: BTreeSet<Degree> = BTreeSet::new();
    let mut frontier: Vec<Degree> = shifts.iter().copied().filter(|&d| lam(d) <= top).collect();
    while let Some(d) = frontier.pop() {
        if !out.insert(d) {
            continue;
        }
        for &s in &steps {
            let e = d + s;
            if lam(e) <= top && !out.contains(&e) {
                frontier.push(e);
            }
        }
    }
    out.into_iter().collect()
}

/// Hull of the shifts of `F_{i−1}, F_i, F_{i+1}` widened by `slack`.
pub fn degree_window(c: &FreeComplex, i: usize, slack: i64) -> DegreeWindow {
    let i = i as isize;
    let shifts: Vec<Degree> = (i - 1..=i + 1).flat_map(|j| c.module(j).shifts).collect();
    DegreeWindow { i: i as usize, degrees: window_from_shifts(&c.ring, &shifts, slack), heuristic: true }
}

/// Window for the strands of a presented module.
pub fn module_window(m: &ModulePresentation, slack: i64) -> Vec<Degree> {
    let mut shifts = m.target.shifts.clone();
    shifts.extend(m.source.shifts.iter().copied());
    window_from_shifts(m.ring(), &shifts, slack)
}

fn add_presentation(ctx: &mut RankDropContext, b: &mut LocusBuilder, m: &ModulePresentation, window: &[Degree], name: &str) {
    for &mu in window {
        let s = strand(&m.matrix, &m.source, &m.target, mu);
        ctx.add_matrix(b, &s.entries, &format!("{name} strand {}", m.ring().degree_display(mu)));
    }
}

/// `T_M`: points where some strand `[M]_μ`, `μ` in the window, is not locally free.
pub fn nonfree_locus(m: &ModulePresentation, window: &[Degree]) -> Result<Locus> {
    let mut ctx = RankDropContext::new(m.ring(), 0)?;
    let mut b = LocusBuilder::new(m.ring());
    add_presentation(&mut ctx, &mut b, m, window, "M");
    Ok(b.finish())
}

/// `T_M` over windows of growing slack until two consecutive answers agree.
pub fn nonfree_locus_stable(m: &ModulePresentation, slack: i64) -> Result<(Locus, i64)> {
    let mut s = slack.max(0);
    let mut prev = nonfree_locus(m, &module_window(m, s))?;
    for _ in 0..3 {
        let next_s = 2 * s + 1;
        let next = nonfree_locus(m, &module_window(m, next_s))?;
        if crate::groebner::ideals_equal(m.ring(), &prev.generators, &next.generators) {
            return Ok((prev, s));
        }
        prev = next;
        s = next_s;
    }
    Ok((prev, s))
}

/// Points where a strand of `φ_j`, `1 ≤ j ≤ s + 1`, has non-constant rank: off
/// this set the homology `H_i`, `i ≤ s`, commutes with passing to fibers.
pub fn complex_exclusion_locus(c: &FreeComplex, s: usize, window: &[Degree]) -> Result<Locus> {
    let mut ctx = RankDropContext::new(&c.ring, 0)?;
    let mut b = LocusBuilder::new(&c.ring);
    for j in 1..=(s + 1).min(c.len()) {
        let (src, tgt) = (c.module(j as isize), c.module(j as isize - 1));
        for &mu in window {
            let st = strand(&c.differential(j as isize), &src, &tgt, mu);
            ctx.add_matrix(&mut b, &st.entries, &format!("phi_{j} strand {}", c.ring.degree_display(mu)));
        }
    }
    Ok(b.finish())
}

/// The excluded set of the relative duality statement:
/// `T_M ∪ T_{D^{r+1}} ∪ ⋃_{j ≤ r} T_{Ext^j(M, R)}`, each on its own window.
pub fn duality_exclusion_locus(m: &ModulePresentation, slack: i64) -> Result<Locus> {
    let ring = m.ring();
    let r = ring.r();
    let res = free_resolution(m, r + 1)?;
    let dual = dual_complex(&res, Degree::ZERO);
    let mut ctx = RankDropContext::new(ring, 0)?;
    let mut b = LocusBuilder::new(ring);
    add_presentation(&mut ctx, &mut b, m, &module_window(m, slack), "M");
    let d = d_top_cokernel(&res, r)?;
    add_presentation(&mut ctx, &mut b, &d, &module_window(&d, slack), &format!("D^{}", r + 1));
    for j in 0..=r {
        let e = cohomology_presentation(&dual, j)?;
        add_presentation(&mut ctx, &mut b, &e, &module_window(&e, slack), &format!("Ext^{j}"));
    }
    Ok(b.finish())
}

/// Points off which the strands `[H^i_𝔪(M)]_μ`, `μ ∈ degrees`, are locally
/// constant: `T_M` together with the rank-drop loci of the two maps of
/// `H^r_𝔪(F_•)` around position `r − i`, over `A` itself.
pub fn local_cohomology_locus(m: &ModulePresentation, i: usize, degrees: &[Degree], slack: i64) -> Result<Locus> {
    let ring = m.ring();
    let r = ring.r();
    if i > r {
        return Ok(Locus::empty(ring));
    }
    let res = free_resolution(m, r + 1)?;
    let mut ctx = RankDropContext::new(ring, 0)?;
    let mut b = LocusBuilder::new(ring);
    add_presentation(&mut ctx, &mut b, m, &module_window(m, slack), "M");
    let j = r - i;
    for &mu in degrees {
        for k in [j, j + 1] {
            if k == 0 || k > res.len() {
                continue;
            }
            let e = top_cohomology_strand(&res.differential(k as isize), &res.module(k as isize), &res.module(k as isize - 1), mu);
            ctx.add_matrix(&mut b, &e, &format!("H^{r}(phi_{k}) strand {}", ring.degree_display(mu)));
        }
    }
    Ok(b.finish())
}

/// Per-component certificate `a` with `D(a) ∩ L = ∅` and `a ∉ P`.
#[derive(Clone, Debug)]
pub struct ComponentCertificate {
    pub prime: Vec<Poly>,
    pub a: Option<Poly>,
}

#[derive(Clone, Debug)]
pub struct Certificate {
    /// one element avoiding every minimal prime, when one was found
    pub global: Option<Poly>,
    pub components: Vec<ComponentCertificate>,
}

impl Certificate {
    pub fn to_json(&self) -> serde_json::Value {
        let show = |ps: &[Poly]| {
            if ps.is_empty() {
                "(0)".to_string()
            } else {
                format!("({})", ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", "))
            }
        };
        serde_json::json!({
            "global": self.global.as_ref().map(|a| a.to_string()),
            "components": self.components.iter().map(|c| serde_json::json!({
                "prime": show(&c.prime),
                "a": c.a.as_ref().map(|a| a.to_string()),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Find `a ∈ I(L)` outside the minimal primes of `A`.
pub fn dense_open_certificate(l: &Locus, seed: u64) -> Result<Certificate> {
    let ring = &l.ring;
    let comps = ring.base().components.clone();
    if l.is_empty() {
        return Ok(Certificate {
            global: Some(Poly::one(ring)),
            components: comps.into_iter().map(|p| ComponentCertificate { prime: p, a: Some(Poly::one(ring)) }).collect(),
        });
    }
    let mut gens = l.generators.clone();
    gens.sort_by_key(|g| (g.max_total_degree(), g.nterms()));
    let gbs: Vec<Vec<Poly>> = comps.iter().map(|p| base_gb(ring, p)).collect();
    let outside = |a: &Poly, gb: &[Poly]| !ideal_nf(gb, a).is_zero();
    let components: Vec<ComponentCertificate> = comps
        .iter()
        .zip(&gbs)
        .map(|(p, gb)| ComponentCertificate { prime: p.clone(), a: gens.iter().find(|g| outside(g, gb)).cloned() })
        .collect();
    if ring.base_is_domain() && components[0].a.is_none() {
        return Err(Error::LocusIsEverything);
    }
    let mut global = None;
    if components.iter().all(|c| c.a.is_some()) {
        let mut candidates = gens.clone();
        for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                candidates.push(gens[i].add(&gens[j]).reduce_base());
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..8 {
            let mut acc = Poly::zero(ring);
            for g in &gens {
                acc = acc.add(&g.scale(&Coeff::from_int(rng.gen_range(1..=20))));
            }
            candidates.push(acc.reduce_base());
        }
        global = candidates.into_iter().find(|a| !a.is_zero() && gbs.iter().all(|gb| outside(a, gb)));
    }
    Ok(Certificate { global, components })
}

/// Deterministic fiber sampling: a grid, seeded random integer points, the
/// rational points of univariate quotient components, and the generic points
/// of components without rational points.
#[derive(Clone, Debug)]
pub struct Sampler {
    pub grid: Vec<i64>,
    pub random: usize,
    pub range: i64,
    pub seed: u64,
    pub extra: Vec<FiberPoint>,
}

impl Default for Sampler {
    fn default() -> Sampler {
        Sampler { grid: vec![-1, 0, 1, 2], random: 8, range: 20, seed: 0, extra: vec![] }
    }
}

impl Sampler {
    pub fn points(&self, ring: &Ring) -> Vec<FiberPoint> {
        let m = ring.nparams();
        if m == 0 {
            return vec![FiberPoint::Closed(vec![])];
        }
        let mut cands: Vec<Vec<i64>> = Vec::new();
        if m <= 3 {
            let mut acc: Vec<Vec<i64>> = vec![vec![]];
            for _ in 0..m {
                acc = acc.into_iter().flat_map(|p| self.grid.iter().map(move |&g| [p.clone(), vec![g]].concat())).collect();
            }
            cands.extend(acc);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        for _ in 0..self.random {
            cands.push((0..m).map(|_| rng.gen_range(-self.range..=self.range)).collect());
        }
        let j = ring.base().j_gb.clone();
        let mut out: Vec<FiberPoint> = Vec::new();
        let push = |p: FiberPoint, out: &mut Vec<FiberPoint>| {
            if !out.contains(&p) {
                out.push(p);
            }
        };
        for c in cands {
            let p = FiberPoint::at_ints(ring, &c);
            if let FiberPoint::Closed(v) = &p {
                if j.iter().all(|g| g.eval_base(v).is_zero()) {
                    push(p, &mut out);
                }
            }
        }
        if ring.has_quotient_base() {
            let z = ring.z_indices();
            for prime in ring.base().components.iter() {
                let mut found = false;
                if z.len() == 1 && prime.len() == 1 && ring.char_p == 0 {
                    if let Some(u) = UniPoly::from_poly(&prime[0], z[0]) {
                        for root in u.rational_roots() {
                            push(FiberPoint::Closed(vec![Coeff::Q(root)]), &mut out);
                            found = true;
                        }
                    }
                }
                if !found {
                    push(FiberPoint::Prime(prime.clone()), &mut out);
                }
            }
        }
        for p in &self.extra {
            push(p.clone(), &mut out);
        }
        out
    }
}

/// Values of a fiberwise quantity, keyed by a label such as `H2@(-2,2)`.
pub type QuantityTable = BTreeMap<String, usize>;

#[derive(Clone, Debug, Serialize)]
pub struct FiberOutcome {
    pub fiber: String,
    pub group: usize,
    pub in_locus: bool,
    pub table: Option<QuantityTable>,
    pub error: Option<String>,
    pub agrees: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupReference {
    pub group: usize,
    pub components: Vec<String>,
    pub source: String,
    pub table: Option<QuantityTable>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HarnessVerdict {
    pub seed: u64,
    pub locus: serde_json::Value,
    pub references: Vec<GroupReference>,
    pub fibers: Vec<FiberOutcome>,
    /// in-locus fibers whose values differ from their group
    pub jumps: Vec<String>,
    /// out-of-locus fibers whose values differ from their group
    pub violations: Vec<String>,
    pub locally_constant: bool,
    pub constant: bool,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    if parent[x] != x {
        let r = find(parent, parent[x]);
        parent[x] = r;
    }
    parent[x]
}

/// Evaluate `quantity` at each point and compare with the value at the generic
/// point of the point's component group. Components are grouped when they meet
/// outside `L`.
pub fn locally_constant_harness(
    ring: &Ring,
    quantity: &dyn Fn(&Fiber) -> Result<QuantityTable>,
    l: &Locus,
    points: &[FiberPoint],
    seed: u64,
) -> Result<HarnessVerdict> {
    let comps = ring.base().components.clone();
    let n = comps.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for c in 0..n {
        for d in c + 1..n {
            let mut g = comps[c].clone();
            g.extend(comps[d].iter().cloned());
            let (meet, _) = radical(ring, &g);
            if !is_unit_ideal(&meet) && !variety_within(&meet, &l.generators) {
                let (a, b) = (find(&mut parent, c), find(&mut parent, d));
                parent[b] = a;
            }
        }
    }
    let groups: Vec<usize> = (0..n).map(|c| find(&mut parent, c)).collect();
    let mut references = Vec::new();
    let mut reference_of: HashMap<usize, Option<QuantityTable>> = HashMap::new();
    let mut violations = Vec::new();
    for c in 0..n {
        let g = groups[c];
        let fib = Fiber::new(ring, FiberPoint::Prime(comps[c].clone()))?;
        let t = quantity(&fib).ok();
        match reference_of.get(&g) {
            None => {
                reference_of.insert(g, t.clone());
            }
            Some(prev) if prev != &t => violations.push(format!("generic points of group {g} disagree")),
            _ => {}
        }
        references.push(GroupReference {
            group: g,
            components: vec![FiberPoint::Prime(comps[c].clone()).label(ring)],
            source: if t.is_some() { "generic".into() } else { "unavailable".into() },
            table: t,
        });
    }
    let mut fibers = Vec::new();
    let mut jumps = Vec::new();
    for p in points {
        let label = p.label(ring);
        let group = (0..n).find(|&c| p.lies_in(ring, &comps[c])).map(|c| groups[c]).unwrap_or(0);
        let in_locus = l.contains(p);
        let (table, error) = match Fiber::new(ring, p.clone()).and_then(|f| quantity(&f)) {
            Ok(t) => (Some(t), None),
            Err(e) => (None, Some(e.to_string())),
        };
        let reference = reference_of.entry(group).or_insert(None);
        if reference.is_none() && !in_locus && table.is_some() {
            *reference = table.clone();
        }
        let agrees = table.is_some() && *reference == table;
        if !agrees {
            if in_locus {
                jumps.push(label.clone());
            } else {
                violations.push(label.clone());
            }
        }
        fibers.push(FiberOutcome { fiber: label, group, in_locus, table, error, agrees });
    }
    let all: Vec<&Option<QuantityTable>> =
        references.iter().map(|r| &r.table).chain(fibers.iter().map(|f| &f.table)).collect();
    let constant = all.windows(2).all(|w| w[0] == w[1]);
    Ok(HarnessVerdict {
        seed,
        locus: l.to_json(),
        references,
        fibers,
        jumps,
        locally_constant: violations.is_empty(),
        violations,
        constant,
    })
}

/// Strand dimensions of a presented module at a fiber, as a harness quantity.
pub fn module_strand_table(m: &ModulePresentation, window: &[Degree], fiber: &Fiber) -> QuantityTable {
    let ev = fiber.presentation(m);
    window
        .iter()
        .map(|&mu| {
            let s = strand(&ev.matrix, &ev.source, &ev.target, mu);
            let dim = s.nrows() - s.rank(&fiber.ring);
            (format!("M@{}", m.ring().degree_display(mu)), dim)
        })
        .collect()
}

/// `[H^i_𝔪(M ⊗ k(𝔭))]_μ` for the given degrees, as a harness quantity.
pub fn local_cohomology_table(m: &ModulePresentation, indices: &[usize], degrees: &[Degree], fiber: &Fiber) -> Result<QuantityTable> {
    let mut lc = crate::localcohom::LocalCohomology::new(m, fiber)?;
    let mut out = QuantityTable::new();
    for &i in indices {
        for &mu in degrees {
            out.insert(format!("H{i}@{}", m.ring().degree_display(mu)), lc.dim_route_a(i, mu));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::FreeModule;
    use crate::ring::RingDescriptor;

    fn over_t(vars: &[(&str, i64)]) -> Ring {
        Ring::new(&RingDescriptor::standard(vars).over_params(&["t"])).unwrap()
    }

    fn smith() -> Ring {
        Ring::new(&RingDescriptor::standard(&[("x", 1)]).over_quotient(&["t"], &["t*(t-1)"])).unwrap()
    }

    #[test]
    fn squarefree_and_zero_dimensional_radicals() {
        let r = Ring::new(&RingDescriptor::standard(&[("x", 1)]).over_params(&["s", "t"])).unwrap();
        let f = r.parse_poly("s^3*t^2 + s^2*t^3").unwrap();
        let (g, ok) = radical(&r, &[f]);
        assert!(ok);
        assert!(crate::groebner::ideals_equal(&r, &g, &[r.parse_poly("s^2*t + s*t^2").unwrap()]));
        let (g, ok) = radical(&r, &[r.parse_poly("s^2").unwrap(), r.parse_poly("t^3 - t^2").unwrap()]);
        assert!(ok);
        assert!(crate::groebner::ideals_equal(&r, &g, &[r.parse_poly("s").unwrap(), r.parse_poly("t^2 - t").unwrap()]));
    }

    #[test]
    fn windows() {
        let r = Ring::new(&RingDescriptor::standard(&[("x", 1), ("y", 1)])).unwrap();
        let w = window_from_shifts(&r, &[Degree(0, 0), Degree(1, 0), Degree(2, 0)], 0);
        assert_eq!(w, vec![Degree(0, 0), Degree(1, 0), Degree(2, 0)]);
        assert!(window_from_shifts(&r, &[], 3).is_empty());
    }

    #[test]
    fn multiplication_by_t_is_nonfree_at_zero() {
        let r = over_t(&[("x", 1)]);
        let m = ModulePresentation::quotient(&r, &[r.parse_poly("t").unwrap()]).unwrap();
        let l = nonfree_locus(&m, &module_window(&m, 1)).unwrap();
        assert_eq!(l.generators, vec![r.parse_poly("t").unwrap()]);
        let free = ModulePresentation::free(FreeModule::new(&r, vec![Degree::ZERO]));
        assert!(nonfree_locus(&free, &module_window(&free, 2)).unwrap().is_empty());
        assert!(duality_exclusion_locus(&free, 1).unwrap().is_empty());
        let c = dense_open_certificate(&l, 0).unwrap();
        assert_eq!(c.global, Some(r.parse_poly("t").unwrap()));
    }

    #[test]
    fn exclusion_locus_of_tx_contains_zero() {
        let r = over_t(&[("x", 1)]);
        let m = ModulePresentation::quotient(&r, &[r.parse_poly("t*x").unwrap()]).unwrap();
        let l = duality_exclusion_locus(&m, 1).unwrap();
        assert!(l.contains(&FiberPoint::at_ints(&r, &[0])));
        assert!(!l.contains(&FiberPoint::at_ints(&r, &[3])));
    }

    #[test]
    fn smith_module_is_locally_free() {
        let r = smith();
        let m = ModulePresentation::quotient(&r, &[r.var("x"), r.parse_poly("t").unwrap()]).unwrap();
        let l = nonfree_locus_stable(&m, 1).unwrap().0;
        assert!(l.is_empty());
        let lt = Locus { ring: r.clone(), generators: vec![r.parse_poly("t").unwrap()], radical: true, provenance: vec![] };
        let c = dense_open_certificate(&lt, 0).unwrap();
        assert_eq!(c.global, None);
        assert_eq!(c.components[0].a, None);
        assert_eq!(c.components[1].a, Some(r.parse_poly("t").unwrap()));
        let pts = Sampler::default().points(&r);
        assert_eq!(pts, vec![FiberPoint::at_ints(&r, &[0]), FiberPoint::at_ints(&r, &[1])]);
        let q = |f: &Fiber| local_cohomology_table(&m, &[0], &[Degree::ZERO], f);
        let v = locally_constant_harness(&r, &q, &l, &pts, 0).unwrap();
        assert!(v.locally_constant && !v.constant);
        let h: Vec<usize> = v.fibers.iter().map(|f| f.table.as_ref().unwrap()["H0@0"]).collect();
        assert_eq!(h, vec![1, 0]);
    }

    #[test]
    fn domain_locus_everything() {
        let r = over_t(&[("x", 1)]);
        let all = Locus { ring: r.clone(), generators: vec![], radical: true, provenance: vec![] };
        assert!(matches!(dense_open_certificate(&all, 0), Err(Error::LocusIsEverything)));
        assert_eq!(dense_open_certificate(&Locus::empty(&r), 0).unwrap().global, Some(Poly::one(&r)));
    }
}

#[cfg(test)]
mod katzman {
    use super::*;
    use crate::ring::RingDescriptor;

    #[test]
    fn locus_is_the_determinant_curve() {
        let mut d = RingDescriptor::standard(&[("u", 1), ("v", 1)]).over_params(&["s", "t"]);
        d.grading_rank = 2;
        d.xvars = vec![("u".into(), Degree(1, 0)), ("v".into(), Degree(1, 0))];
        d.yvars = vec![("x".into(), Degree(0, 1)), ("y".into(), Degree(0, 1))];
        let r = Ring::new(&d).unwrap();
        let f = r.parse_poly("s*x^2*v^2 - (t+s)*x*y*u*v + t*y^2*u^2").unwrap();
        let m = ModulePresentation::quotient(&r, &[f]).unwrap();
        for (deg, tau) in [(2, "s*t*(s+t)"), (3, "s*t*(s^2+s*t+t^2)")] {
            let l = local_cohomology_locus(&m, 2, &[Degree(-deg, deg)], 0).unwrap();
            assert!(crate::groebner::ideals_equal(&r, &l.generators, &[r.parse_poly(tau).unwrap()]));
        }
    }
}
