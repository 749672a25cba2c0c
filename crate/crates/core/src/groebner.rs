//! Buchberger's algorithm for submodules of graded free modules, with
//! Gebauer–Möller pair criteria and the normal selection strategy, plus the
//! derived operations: syzygies, kernels, intersections, colons, saturation,
//! elimination and torsion.
//!
//! The base variables always sort last, after the position, so a basis over
//! `k[x, z]` is also a basis over `k(z)[x]`.

use std::cmp::Ordering;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::module::{FreeModule, Matrix, ModulePresentation};
use crate::mono::Mono;
use crate::poly::Poly;
use crate::ring::{BlockKind, Degree, Ring, VarKind};

/// One term `c · m · e_pos` of a module element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MTerm {
    pub pos: u32,
    pub m: Mono,
    pub c: Coeff,
}

/// Module element as a term list sorted descending in a [`ModOrder`].
pub type Vector = Vec<MTerm>;

/// Module order: position rank, then the graded blocks (shift-weighted),
/// then position index, then the base block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModOrder {
    pub pos_rank: Vec<i32>,
    pub shift_w: Vec<i64>,
    shift_block: Option<usize>,
}

impl ModOrder {
    /// Term-over-position order with shift weights for `F`.
    pub fn top(f: &FreeModule) -> ModOrder {
        ModOrder::with_ranks(&f.ring, &f.shifts, vec![0; f.rank()])
    }

    pub fn with_ranks(ring: &Ring, shifts: &[Degree], pos_rank: Vec<i32>) -> ModOrder {
        let shift_block = ring.blocks.iter().position(|b| {
            matches!(b.kind, BlockKind::Grevlex(_))
                && (b.start..b.end).any(|i| matches!(ring.vars[i].kind, VarKind::X | VarKind::Y))
        });
        let shift_w = shifts.iter().map(|&d| ring.enum_weight_of(d).unwrap()).collect();
        ModOrder { pos_rank, shift_w, shift_block }
    }

    /// Plain order for ideals (rank 1, no shift).
    pub fn ideal(ring: &Ring) -> ModOrder {
        ModOrder::with_ranks(ring, &[Degree::ZERO], vec![0])
    }

    pub fn cmp(&self, ring: &Ring, p: u32, a: &Mono, q: u32, b: &Mono) -> Ordering {
        let (pu, qu) = (p as usize, q as usize);
        let c = self.pos_rank[pu].cmp(&self.pos_rank[qu]);
        if c != Ordering::Equal {
            return c;
        }
        let (ea, eb) = (a.exps(), b.exps());
        for (k, blk) in ring.blocks.iter().enumerate() {
            if Some(k) == self.shift_block {
                if let BlockKind::Grevlex(w) = &blk.kind {
                    let wa: i64 = (blk.start..blk.end).map(|i| w[i - blk.start] * ea[i] as i64).sum::<i64>() + self.shift_w[pu];
                    let wb: i64 = (blk.start..blk.end).map(|i| w[i - blk.start] * eb[i] as i64).sum::<i64>() + self.shift_w[qu];
                    if wa != wb {
                        return wa.cmp(&wb);
                    }
                    for i in (blk.start..blk.end).rev() {
                        if ea[i] != eb[i] {
                            return eb[i].cmp(&ea[i]);
                        }
                    }
                    continue;
                }
            }
            let c = blk.cmp(ea, eb);
            if c != Ordering::Equal {
                return c;
            }
        }
        if p != q {
            return q.cmp(&p);
        }
        ring.cmp_base(ea, eb)
    }

    fn term_cmp(&self, ring: &Ring, a: &MTerm, b: &MTerm) -> Ordering {
        self.cmp(ring, a.pos, &a.m, b.pos, &b.m)
    }
}

pub(crate) fn sort_vector(ring: &Ring, ord: &ModOrder, mut v: Vec<MTerm>) -> Vector {
    v.sort_by(|a, b| ord.term_cmp(ring, b, a));
    let mut out: Vector = Vec::with_capacity(v.len());
    for t in v {
        match out.last_mut() {
            Some(l) if l.pos == t.pos && l.m == t.m => l.c = l.c.add_ref(&t.c),
            _ => out.push(t),
        }
    }
    out.retain(|t| !t.c.is_zero());
    out
}

/// Dense column of polys to a sorted vector.
pub fn to_vector(ring: &Ring, ord: &ModOrder, col: &[Poly]) -> Vector {
    let mut v = Vec::new();
    for (i, p) in col.iter().enumerate() {
        for (m, c) in &p.terms {
            v.push(MTerm { pos: i as u32, m: m.clone(), c: c.clone() });
        }
    }
    sort_vector(ring, ord, v)
}

pub fn from_vector(ring: &Ring, rank: usize, v: &Vector) -> Vec<Poly> {
    let mut buckets: Vec<Vec<(Mono, Coeff)>> = vec![Vec::new(); rank];
    for t in v {
        buckets[t.pos as usize].push((t.m.clone(), t.c.clone()));
    }
    buckets.into_iter().map(|b| Poly::from_terms(ring, b)).collect()
}

/// `f − c·m·g`, merged.
fn sub_mul(ring: &Ring, ord: &ModOrder, f: &[MTerm], g: &[MTerm], m: &Mono, c: &Coeff) -> Vector {
    let mut out = Vec::with_capacity(f.len() + g.len());
    let mut j = 0;
    let mut i = 0;
    let scaled = |t: &MTerm| MTerm { pos: t.pos, m: t.m.mul(m), c: t.c.mul_ref(c).neg_ref() };
    let mut gt = if j < g.len() { Some(scaled(&g[j])) } else { None };
    while i < f.len() {
        match &gt {
            None => {
                out.extend_from_slice(&f[i..]);
                return out;
            }
            Some(t) => match ord.term_cmp(ring, &f[i], t) {
                Ordering::Greater => {
                    out.push(f[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(gt.take().unwrap());
                    j += 1;
                    gt = if j < g.len() { Some(scaled(&g[j])) } else { None };
                }
                Ordering::Equal => {
                    let s = f[i].c.add_ref(&t.c);
                    if !s.is_zero() {
                        out.push(MTerm { pos: t.pos, m: t.m.clone(), c: s });
                    }
                    i += 1;
                    j += 1;
                    gt = if j < g.len() { Some(scaled(&g[j])) } else { None };
                }
            },
        }
    }
    if let Some(t) = gt {
        out.push(t);
        j += 1;
        while j < g.len() {
            out.push(scaled(&g[j]));
            j += 1;
        }
    }
    out
}

fn make_monic(v: &mut Vector) {
    if let Some(first) = v.first() {
        if !first.c.is_one() {
            let inv = first.c.inv();
            for t in v.iter_mut() {
                t.c = t.c.mul_ref(&inv);
            }
        }
    }
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    pos: u32,
    lcm: Mono,
    key: (i64, u32),
}

/// Incremental Buchberger state.
pub struct GbBuilder {
    pub ring: Ring,
    pub order: ModOrder,
    pub rank: usize,
    elems: Vec<Vector>,
    masks: Vec<u64>,
    pairs: Vec<Pair>,
    /// elements whose leading term became redundant
    dead: Vec<bool>,
}

impl GbBuilder {
    pub fn new(ring: &Ring, order: ModOrder, rank: usize) -> GbBuilder {
        GbBuilder { ring: ring.clone(), order, rank, elems: vec![], masks: vec![], pairs: vec![], dead: vec![] }
    }

    /// New builder seeded with the base relations `J·e_i` when the base is a quotient.
    pub fn with_base(ring: &Ring, order: ModOrder, rank: usize) -> GbBuilder {
        let mut b = GbBuilder::new(ring, order, rank);
        let j = ring.base().j_gb.clone();
        for p in 0..rank {
            for g in &j {
                let v = sort_vector(
                    ring,
                    &b.order,
                    g.terms.iter().map(|(m, c)| MTerm { pos: p as u32, m: m.clone(), c: c.clone() }).collect(),
                );
                b.insert(v);
            }
        }
        b.complete();
        b
    }

    fn key_of(&self, pos: u32, lcm: &Mono) -> (i64, u32) {
        let r = &self.ring;
        let w: i64 = lcm.exps().iter().enumerate().map(|(i, &e)| r.enum_weights[i] * e as i64).sum::<i64>()
            + self.order.shift_w[pos as usize];
        (w, lcm.total_degree())
    }

    fn find_reducer(&self, t: &MTerm) -> Option<usize> {
        let mask = t.m.support_mask();
        for (k, g) in self.elems.iter().enumerate() {
            if self.dead[k] {
                continue;
            }
            let lt = &g[0];
            if lt.pos == t.pos && self.masks[k] & !mask == 0 && lt.m.divides(&t.m) {
                return Some(k);
            }
        }
        None
    }

    /// Remainder of `f` (top- and tail-reduced when `full`).
    pub fn reduce(&self, f: Vector, full: bool) -> Vector {
        let mut f = f;
        let mut done: Vector = Vec::new();
        let mut start = 0usize;
        loop {
            if start >= f.len() {
                break;
            }
            let t = &f[start];
            match self.find_reducer(t) {
                Some(k) => {
                    let g = &self.elems[k];
                    let q = g[0].m.quotient_of(&t.m);
                    let c = t.c.div_ref(&g[0].c);
                    f = sub_mul(&self.ring, &self.order, &f[start..], g, &q, &c);
                    start = 0;
                }
                None => {
                    if !full {
                        done.extend(f.drain(start..));
                        return done;
                    }
                    done.push(f[start].clone());
                    start += 1;
                }
            }
        }
        done
    }

    /// Add an element known to be reduced; updates pairs (Gebauer–Möller).
    fn insert(&mut self, mut h: Vector) {
        make_monic(&mut h);
        let k = self.elems.len();
        let hpos = h[0].pos;
        let hm = h[0].m.clone();
        let ideal_case = self.rank == 1;
        // candidate new pairs
        let mut cands: Vec<Pair> = Vec::new();
        for (i, g) in self.elems.iter().enumerate() {
            if self.dead[i] || g[0].pos != hpos {
                continue;
            }
            let lcm = g[0].m.lcm(&hm);
            cands.push(Pair { i, j: k, pos: hpos, key: self.key_of(hpos, &lcm), lcm });
        }
        // chain criterion on old pairs
        let elems = &self.elems;
        self.pairs.retain(|p| {
            if p.pos != hpos || !hm.divides(&p.lcm) {
                return true;
            }
            let li = elems[p.i][0].m.lcm(&hm);
            let lj = elems[p.j][0].m.lcm(&hm);
            li == p.lcm || lj == p.lcm
        });
        // M criterion: drop (i,k) if some (j,k) has lcm properly dividing
        let mut keep = vec![true; cands.len()];
        for a in 0..cands.len() {
            for b in 0..cands.len() {
                if a != b && keep[b] && cands[b].lcm != cands[a].lcm && cands[b].lcm.divides(&cands[a].lcm) {
                    keep[a] = false;
                    break;
                }
            }
        }
        // F criterion: among equal lcms keep one; product criterion drops the whole class
        let mut chosen: Vec<Pair> = Vec::new();
        let mut seen: Vec<(Mono, bool)> = Vec::new();
        for (a, p) in cands.into_iter().enumerate() {
            if !keep[a] {
                continue;
            }
            let coprime = ideal_case && elems[p.i][0].m.is_coprime(&hm);
            if let Some(s) = seen.iter_mut().find(|(l, _)| *l == p.lcm) {
                if coprime {
                    s.1 = true;
                }
                continue;
            }
            seen.push((p.lcm.clone(), coprime));
            chosen.push(p);
        }
        for p in chosen {
            let bad = seen.iter().any(|(l, c)| *l == p.lcm && *c);
            if !bad {
                self.pairs.push(p);
            }
        }
        // old elements whose leading term is divisible by the new one become redundant
        for i in 0..self.elems.len() {
            if !self.dead[i] && self.elems[i][0].pos == hpos && hm.divides(&self.elems[i][0].m) {
                self.dead[i] = true;
            }
        }
        self.masks.push(hm.support_mask());
        self.elems.push(h);
        self.dead.push(false);
    }

    fn spoly(&self, p: &Pair) -> Vector {
        let (f, g) = (&self.elems[p.i], &self.elems[p.j]);
        let mf = f[0].m.quotient_of(&p.lcm);
        let mg = g[0].m.quotient_of(&p.lcm);
        let one = Coeff::one();
        let fm: Vector = f.iter().map(|t| MTerm { pos: t.pos, m: t.m.mul(&mf), c: t.c.mul_ref(&one) }).collect();
        // f, g monic
        sub_mul(&self.ring, &self.order, &fm, g, &mg, &Coeff::one())
    }

    fn next_pair(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let mut best = 0;
        for k in 1..self.pairs.len() {
            let (a, b) = (&self.pairs[k], &self.pairs[best]);
            if (a.key, a.j, a.i) < (b.key, b.j, b.i) {
                best = k;
            }
        }
        Some(self.pairs.swap_remove(best))
    }

    /// Process all pending pairs.
    pub fn complete(&mut self) {
        while let Some(p) = self.next_pair() {
            let s = self.spoly(&p);
            let h = self.reduce(s, false);
            if !h.is_empty() {
                let h = self.reduce(h, true);
                self.insert(h);
            }
        }
    }

    /// Add a generator and complete. Returns false when it already lay in the submodule.
    pub fn add(&mut self, v: Vector) -> bool {
        let h = self.reduce(v, true);
        if h.is_empty() {
            return false;
        }
        self.insert(h);
        self.complete();
        true
    }

    /// Add several generators, then complete once.
    pub fn add_all(&mut self, vs: Vec<Vector>) {
        for v in vs {
            let h = self.reduce(v, true);
            if !h.is_empty() {
                self.insert(h);
            }
        }
        self.complete();
    }

    /// Reduced Gröbner basis (monic, sorted ascending by leading term).
    pub fn reduced(&self) -> Vec<Vector> {
        let live: Vec<usize> = (0..self.elems.len()).filter(|&k| !self.dead[k]).collect();
        // minimal leading terms
        let mut min: Vec<usize> = Vec::new();
        for &a in &live {
            let la = &self.elems[a][0];
            let redundant = live.iter().any(|&b| {
                let lb = &self.elems[b][0];
                b != a && lb.pos == la.pos && lb.m.divides(&la.m) && (lb.m != la.m || b < a)
            });
            if !redundant {
                min.push(a);
            }
        }
        let sub = GbBuilder {
            ring: self.ring.clone(),
            order: self.order.clone(),
            rank: self.rank,
            elems: min.iter().map(|&k| self.elems[k].clone()).collect(),
            masks: min.iter().map(|&k| self.masks[k]).collect(),
            pairs: vec![],
            dead: vec![false; min.len()],
        };
        let mut out: Vec<Vector> = Vec::new();
        for (idx, g) in sub.elems.iter().enumerate() {
            let head = g[0].clone();
            // tail-reduce against all the others
            let mut other = GbBuilder {
                ring: sub.ring.clone(),
                order: sub.order.clone(),
                rank: sub.rank,
                elems: sub.elems.clone(),
                masks: sub.masks.clone(),
                pairs: vec![],
                dead: sub.dead.clone(),
            };
            other.dead[idx] = true;
            let tail = other.reduce(g[1..].to_vec(), true);
            let mut v = vec![head];
            v.extend(tail);
            make_monic(&mut v);
            out.push(v);
        }
        out.sort_by(|a, b| self.order.term_cmp(&self.ring, &a[0], &b[0]));
        #[cfg(debug_assertions)]
        self.debug_check(&out);
        out
    }

    #[cfg(debug_assertions)]
    fn debug_check(&self, gb: &[Vector]) {
        let total: usize = gb.iter().map(|g| g.len()).sum();
        if gb.len() > 30 || total > 600 {
            return;
        }
        let b = GbBuilder {
            ring: self.ring.clone(),
            order: self.order.clone(),
            rank: self.rank,
            elems: gb.to_vec(),
            masks: gb.iter().map(|g| g[0].m.support_mask()).collect(),
            pairs: vec![],
            dead: vec![false; gb.len()],
        };
        for i in 0..gb.len() {
            for j in i + 1..gb.len() {
                if gb[i][0].pos != gb[j][0].pos {
                    continue;
                }
                let lcm = gb[i][0].m.lcm(&gb[j][0].m);
                let p = Pair { i, j, pos: gb[i][0].pos, key: (0, 0), lcm };
                let s = b.spoly(&p);
                assert!(b.reduce(s, false).is_empty(), "Buchberger criterion violated");
            }
        }
    }

    pub fn elements(&self) -> Vec<Vector> {
        (0..self.elems.len()).filter(|&k| !self.dead[k]).map(|k| self.elems[k].clone()).collect()
    }
}

/// Reduced GB of vectors, with base relations added.
pub fn gb_vectors(ring: &Ring, order: &ModOrder, rank: usize, gens: Vec<Vector>) -> Vec<Vector> {
    let mut b = GbBuilder::with_base(ring, order.clone(), rank);
    b.add_all(gens);
    b.reduced()
}

/// GB of an ideal given by polys, ignoring any base quotient (used while building rings).
pub(crate) fn ideal_gb_raw(gens: &[Poly]) -> Vec<Poly> {
    let Some(first) = gens.first() else { return vec![] };
    let ring = first.ring.clone();
    let ord = ModOrder::ideal(&ring);
    let mut b = GbBuilder::new(&ring, ord.clone(), 1);
    b.add_all(gens.iter().map(|g| to_vector(&ring, &ord, std::slice::from_ref(g))).collect());
    b.reduced().iter().map(|v| from_vector(&ring, 1, v).remove(0)).collect()
}

/// Reduced GB of an ideal (base relations included).
pub fn ideal_gb(ring: &Ring, gens: &[Poly]) -> Vec<Poly> {
    let ord = ModOrder::ideal(ring);
    let vs = gens.iter().filter(|g| !g.is_zero()).map(|g| to_vector(ring, &ord, std::slice::from_ref(g))).collect();
    gb_vectors(ring, &ord, 1, vs).iter().map(|v| from_vector(ring, 1, v).remove(0)).collect()
}

/// Normal form of `p` modulo an ideal GB produced by [`ideal_gb`].
pub fn ideal_nf(gb: &[Poly], p: &Poly) -> Poly {
    p.clone().reduce_base().nf_by(gb)
}

/// A Gröbner basis of a submodule of a graded free module.
#[derive(Clone, Debug)]
pub struct SubmoduleGB {
    pub ambient: FreeModule,
    pub order: ModOrder,
    pub basis: Vec<Vector>,
}

impl SubmoduleGB {
    fn builder(&self) -> GbBuilder {
        GbBuilder {
            ring: self.ambient.ring.clone(),
            order: self.order.clone(),
            rank: self.ambient.rank(),
            elems: self.basis.clone(),
            masks: self.basis.iter().map(|g| g[0].m.support_mask()).collect(),
            pairs: vec![],
            dead: vec![false; self.basis.len()],
        }
    }

    /// Remainder of `v` (dense column) against the basis.
    pub fn normal_form(&self, v: &[Poly]) -> Result<Vec<Poly>> {
        if v.len() != self.ambient.rank() || v.iter().any(|p| p.ring != self.ambient.ring) {
            return Err(Error::AmbientMismatch);
        }
        let ring = &self.ambient.ring;
        let vec = to_vector(ring, &self.order, v);
        let r = self.builder().reduce(vec, true);
        Ok(from_vector(ring, self.ambient.rank(), &r))
    }

    pub fn contains(&self, v: &[Poly]) -> Result<bool> {
        Ok(self.normal_form(v)?.iter().all(|p| p.is_zero()))
    }

    /// Basis elements as dense columns, with entries reduced modulo `J` and zero columns dropped.
    pub fn columns(&self) -> Vec<Vec<Poly>> {
        let ring = &self.ambient.ring;
        self.basis
            .iter()
            .map(|v| from_vector(ring, self.ambient.rank(), v).into_iter().map(|p| p.reduce_base()).collect::<Vec<_>>())
            .filter(|c: &Vec<Poly>| c.iter().any(|p| !p.is_zero()))
            .collect()
    }

    pub fn leading_terms(&self) -> Vec<(usize, Mono)> {
        self.basis.iter().map(|v| (v[0].pos as usize, v[0].m.clone())).collect()
    }

    /// True when the submodule is everything mod `J` (only trivially true for rank 0).
    pub fn is_zero_submodule(&self) -> bool {
        self.columns().is_empty()
    }
}

fn check_gens(gens: &[Vec<Poly>], ambient: &FreeModule) -> Result<()> {
    for g in gens {
        if g.len() != ambient.rank() {
            return Err(Error::ShapeMismatch("generator length".into()));
        }
        if g.iter().any(|p| p.ring != ambient.ring) {
            return Err(Error::RingMismatch);
        }
    }
    let m = Matrix::from_columns(&ambient.ring, ambient.rank(), gens);
    m.column_degrees(ambient)?;
    Ok(())
}

/// Reduced Gröbner basis of the submodule generated by `gens` (dense columns).
pub fn groebner_basis(gens: &[Vec<Poly>], ambient: &FreeModule) -> Result<SubmoduleGB> {
    check_gens(gens, ambient)?;
    let ring = &ambient.ring;
    let ord = ModOrder::top(ambient);
    let vs = gens.iter().map(|g| to_vector(ring, &ord, g)).collect();
    let basis = gb_vectors(ring, &ord, ambient.rank(), vs);
    Ok(SubmoduleGB { ambient: ambient.clone(), order: ord, basis })
}

/// Kernel of `φ: source → target` as a GB in `source`.
pub fn kernel(phi: &Matrix, source: &FreeModule, target: &FreeModule) -> Result<SubmoduleGB> {
    phi.check_homogeneous(source, target)?;
    Ok(kernel_unchecked(phi, source, target))
}

pub(crate) fn kernel_unchecked(phi: &Matrix, source: &FreeModule, target: &FreeModule) -> SubmoduleGB {
    let ring = &source.ring;
    let (m0, m1) = (target.rank(), source.rank());
    let mut shifts = target.shifts.clone();
    shifts.extend_from_slice(&source.shifts);
    let mut ranks = vec![1; m0];
    ranks.extend(vec![0; m1]);
    let ord = ModOrder::with_ranks(ring, &shifts, ranks);
    let mut gens = Vec::with_capacity(m1);
    for j in 0..m1 {
        let mut col = phi.column(j);
        col.extend((0..m1).map(|k| if k == j { Poly::one(ring) } else { Poly::zero(ring) }));
        gens.push(to_vector(ring, &ord, &col));
    }
    let gb = gb_vectors(ring, &ord, m0 + m1, gens);
    let sub_ord = ModOrder::top(source);
    let mut basis = Vec::new();
    for v in gb {
        if (v[0].pos as usize) < m0 {
            continue;
        }
        let w: Vector = v.into_iter().map(|t| MTerm { pos: t.pos - m0 as u32, m: t.m, c: t.c }).collect();
        basis.push(w);
    }
    // restricted order agrees with the TOP order of `source` on these terms
    SubmoduleGB { ambient: source.clone(), order: sub_ord, basis }
}

/// Select generators of a submodule one degree at a time, skipping those
/// already in the span of earlier ones. Over a field this yields minimal generators.
pub fn prune_generators(gens: &[Vec<Poly>], ambient: &FreeModule) -> Vec<Vec<Poly>> {
    let ring = &ambient.ring;
    let ord = ModOrder::top(ambient);
    let mut items: Vec<(i64, u32, usize)> = Vec::new();
    let cols = Matrix::from_columns(ring, ambient.rank(), gens);
    let degs = cols.column_degrees(ambient).expect("homogeneous generators");
    for (k, g) in gens.iter().enumerate() {
        if let Some(d) = degs[k] {
            let td = g.iter().map(|p| p.max_total_degree()).max().unwrap_or(0);
            items.push((ring.enum_weight_of(d).unwrap(), td, k));
        }
    }
    items.sort();
    let mut b = GbBuilder::with_base(ring, ord.clone(), ambient.rank());
    let mut out = Vec::new();
    for (_, _, k) in items {
        let v = to_vector(ring, &ord, &gens[k]);
        if b.add(v) {
            out.push(gens[k].iter().map(|p| p.clone().reduce_base()).collect());
        }
    }
    out
}

/// First syzygies of `gens`: a presentation whose matrix maps onto the kernel of `[gens]`.
pub fn syzygies(gens: &[Vec<Poly>], ambient: &FreeModule) -> Result<ModulePresentation> {
    check_gens(gens, ambient)?;
    let ring = &ambient.ring;
    let phi = Matrix::from_columns(ring, ambient.rank(), gens);
    let degs = phi.column_degrees(ambient)?;
    let src = FreeModule::new(ring, degs.iter().map(|d| d.unwrap_or(Degree::ZERO)).collect());
    let k = kernel_unchecked(&phi, &src, ambient);
    let cols = prune_generators(&k.columns(), &src);
    let m = Matrix::from_columns(ring, src.rank(), &cols);
    ModulePresentation::from_matrix(src, m)
}

// ---------------------------------------------------------------- ideals

/// Ring with the graded variables `lead` moved into a dominating first block.
/// Returns the new ring and `perm[new] = old` over the graded part.
pub(crate) fn ring_with_lead(ring: &Ring, lead: &[usize]) -> (Ring, Vec<usize>) {
    let ng = ring.base_start;
    let mut perm: Vec<usize> = lead.to_vec();
    perm.extend((0..ng).filter(|i| !lead.contains(i)));
    let mut raw = ring.raw_clone();
    let old = raw.vars.clone();
    for (newi, &oldi) in perm.iter().enumerate() {
        raw.vars[newi] = old[oldi].clone();
    }
    let w: Vec<i64> = perm.iter().map(|&o| ring.enum_weights[o].max(1)).collect();
    let k = lead.len();
    raw.blocks = vec![
        crate::ring::Block { start: 0, end: k, kind: BlockKind::Grevlex(w[..k].to_vec()) },
        crate::ring::Block { start: k, end: ng, kind: BlockKind::Grevlex(w[k..].to_vec()) },
    ];
    let nr = Ring::from_raw(raw);
    let b = ring.base();
    nr.set_base(crate::ring::BaseData {
        nparams: b.nparams,
        j_gb: b.j_gb.iter().map(|p| p.permute_vars(&nr, &perm)).collect(),
        components: b.components.iter().map(|c| c.iter().map(|p| p.permute_vars(&nr, &perm)).collect()).collect(),
        components_certified: b.components_certified,
    });
    (nr, perm)
}

/// `I ∩ k[remaining variables]` for graded variables `vars`.
pub fn eliminate(ring: &Ring, gens: &[Poly], vars: &[usize]) -> Result<Vec<Poly>> {
    if vars.iter().any(|&v| v >= ring.base_start) {
        return Err(Error::OrderNotEliminating);
    }
    if vars.is_empty() {
        return Ok(ideal_gb(ring, gens));
    }
    let (nr, perm) = ring_with_lead(ring, vars);
    let g: Vec<Poly> = gens.iter().map(|p| p.permute_vars(&nr, &perm)).collect();
    let gb = ideal_gb(&nr, &g);
    let k = vars.len();
    Ok(gb
        .into_iter()
        .filter(|p| p.terms.iter().all(|(m, _)| m.exps()[..k].iter().all(|&e| e == 0)))
        .map(|p| p.unpermute_vars(ring, &perm))
        .collect())
}

/// Ring with one leading auxiliary variable `t` of the given degree.
fn ring_with_t(ring: &Ring, deg: Degree) -> Ring {
    ring.with_leading_block(&["__t".to_string()], &[deg], &[VarKind::Aux], false)
}

/// `I ∩ J`.
pub fn intersect(ring: &Ring, i: &[Poly], j: &[Poly]) -> Vec<Poly> {
    if i.iter().all(|p| p.is_zero()) || j.iter().all(|p| p.is_zero()) {
        return vec![];
    }
    let tr = ring_with_t(ring, Degree::ZERO);
    let t = Poly::var(&tr, 0);
    let one_minus_t = Poly::one(&tr).sub(&t);
    let mut gens = Vec::new();
    for p in i {
        gens.push(t.mul_raw(&p.embed_shifted(&tr, 1)));
    }
    for p in j {
        gens.push(one_minus_t.mul_raw(&p.embed_shifted(&tr, 1)));
    }
    let gb = ideal_gb(&tr, &gens);
    let out: Vec<Poly> = gb.into_iter().filter(|p| !p.involves_var(0)).map(|p| p.strip_leading(ring, 1)).collect();
    ideal_gb(ring, &out)
}

/// `I : f`.
pub fn colon_poly(ring: &Ring, i: &[Poly], f: &Poly) -> Vec<Poly> {
    if f.is_zero() {
        return vec![Poly::one(ring)];
    }
    let inter = intersect(ring, i, std::slice::from_ref(f));
    let q: Vec<Poly> = inter.iter().map(|g| g.div_exact(f).expect("intersection element divisible by f")).collect();
    ideal_gb(ring, &q)
}

/// `I : J`.
pub fn colon(ring: &Ring, i: &[Poly], j: &[Poly]) -> Result<Vec<Poly>> {
    check_ring(ring, i)?;
    check_ring(ring, j)?;
    let mut acc: Option<Vec<Poly>> = None;
    for f in j.iter().filter(|f| !f.is_zero()) {
        let c = colon_poly(ring, i, f);
        acc = Some(match acc {
            None => c,
            Some(a) => intersect(ring, &a, &c),
        });
    }
    Ok(acc.unwrap_or_else(|| vec![Poly::one(ring)]))
}

fn check_ring(ring: &Ring, ps: &[Poly]) -> Result<()> {
    if ps.iter().any(|p| p.ring != *ring) {
        Err(Error::RingMismatch)
    } else {
        Ok(())
    }
}

/// `I : x_v^∞` for a graded variable, via reverse-lexicographic order with `x_v` last.
pub fn saturate_var(ring: &Ring, i: &[Poly], v: usize) -> Vec<Poly> {
    let ng = ring.base_start;
    let mut perm: Vec<usize> = (0..ng).filter(|&k| k != v).collect();
    perm.push(v);
    let pr = ring.permuted_grevlex(&perm);
    let g: Vec<Poly> = i.iter().map(|p| p.permute_vars(&pr, &perm)).collect();
    let gb = ideal_gb(&pr, &g);
    let last = ng - 1;
    let out: Vec<Poly> = gb
        .into_iter()
        .map(|p| {
            let k = p.var_content(last);
            p.divide_by_var_power(last, k).unpermute_vars(ring, &perm)
        })
        .collect();
    ideal_gb(ring, &out)
}

/// `I : f^∞` via `I + (t·f − 1)` with `t` of degree `−deg f`.
pub fn saturate_poly(ring: &Ring, i: &[Poly], f: &Poly) -> Result<Vec<Poly>> {
    let d = f.degree().map_err(|_| Error::InhomogeneousInput)?.unwrap_or(Degree::ZERO);
    if let Some(v) = single_graded_var(f) {
        return Ok(saturate_var(ring, i, v));
    }
    let tr = ring_with_t(ring, -d);
    let t = Poly::var(&tr, 0);
    let mut gens: Vec<Poly> = i.iter().map(|p| p.embed_shifted(&tr, 1)).collect();
    gens.push(t.mul_raw(&f.embed_shifted(&tr, 1)).sub(&Poly::one(&tr)));
    let gb = ideal_gb(&tr, &gens);
    let out: Vec<Poly> = gb.into_iter().filter(|p| !p.involves_var(0)).map(|p| p.strip_leading(ring, 1)).collect();
    Ok(ideal_gb(ring, &out))
}

fn single_graded_var(f: &Poly) -> Option<usize> {
    if f.terms.len() != 1 || !f.terms[0].1.is_one() {
        return None;
    }
    let e = f.terms[0].0.exps();
    let nz: Vec<usize> = (0..e.len()).filter(|&k| e[k] > 0).collect();
    if nz.len() == 1 && e[nz[0]] == 1 && nz[0] < f.ring.base_start {
        Some(nz[0])
    } else {
        None
    }
}

/// `I : J^∞ = ∩_f I : f^∞` over generators `f` of `J`.
pub fn saturate(ring: &Ring, i: &[Poly], j: &[Poly]) -> Result<Vec<Poly>> {
    check_ring(ring, i)?;
    check_ring(ring, j)?;
    let mut acc: Option<Vec<Poly>> = None;
    for f in j.iter().filter(|f| !f.is_zero()) {
        let s = saturate_poly(ring, i, f)?;
        acc = Some(match acc {
            None => s,
            Some(a) => intersect(ring, &a, &s),
        });
    }
    Ok(acc.unwrap_or_else(|| vec![Poly::one(ring)]))
}

/// `I : 𝔪^∞` with `𝔪` generated by the x-variables.
pub fn saturate_irrelevant(ring: &Ring, i: &[Poly]) -> Vec<Poly> {
    let mut acc: Option<Vec<Poly>> = None;
    for v in ring.x_indices() {
        let s = saturate_var(ring, i, v);
        acc = Some(match acc {
            None => s,
            Some(a) => intersect(ring, &a, &s),
        });
    }
    acc.unwrap_or_else(|| ideal_gb(ring, i))
}

/// Products of generators: `I·J`.
pub fn ideal_product(ring: &Ring, i: &[Poly], j: &[Poly]) -> Vec<Poly> {
    let mut out = Vec::new();
    for a in i {
        for b in j {
            let p = a.mul(b);
            if !p.is_zero() {
                out.push(p);
            }
        }
    }
    ideal_gb(ring, &out)
}

/// Generators of `I^k` (products of generators, not reduced).
pub fn ideal_power_gens(ring: &Ring, gens: &[Poly], k: u32) -> Vec<Poly> {
    if k == 0 {
        return vec![Poly::one(ring)];
    }
    let mut cur: Vec<Poly> = gens.to_vec();
    for _ in 1..k {
        let mut next = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for a in &cur {
            for b in gens {
                let p = a.mul(b);
                if !p.is_zero() && seen.insert(p.to_string()) {
                    next.push(p);
                }
            }
        }
        cur = next;
    }
    cur
}

/// Equality of ideals via reduced GBs.
pub fn ideals_equal(ring: &Ring, a: &[Poly], b: &[Poly]) -> bool {
    ideal_gb(ring, a) == ideal_gb(ring, b)
}

/// Membership test `f ∈ I`.
pub fn ideal_contains(gb: &[Poly], f: &Poly) -> bool {
    ideal_nf(gb, f).is_zero()
}

// ---------------------------------------------------------------- torsion

/// Torsion submodule of `M = coker φ` over a domain base, as generators in `F₀`
/// (modulo the image of `φ`), together with the map `K^T: F₀ → R^p` whose image is `M/τ(M)`.
pub struct Torsion {
    /// generators of `τ(M)` as columns in `F₀` (already including `im φ`)
    pub generators: Vec<Vec<Poly>>,
    /// `M → M**` realised as `F₀ → R^p`
    pub to_double_dual: Matrix,
    /// shifts of `R^p` making `to_double_dual` homogeneous
    pub dd_target: FreeModule,
}

impl Torsion {
    /// Whether `τ(M) = 0`, i.e. every generator lies in `im φ`.
    pub fn is_zero(&self, m: &ModulePresentation) -> Result<bool> {
        let im = groebner_basis(&m.matrix.columns(), &m.target)?;
        for g in &self.generators {
            if !im.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn torsion_submodule(m: &ModulePresentation) -> Result<Torsion> {
    let ring = m.ring();
    if !ring.base_is_domain() {
        return Err(Error::BaseNotDomain);
    }
    let f0 = &m.target;
    // M* = ker(φ^T: F0* → F1*)
    let f0d = f0.dual(Degree::ZERO);
    let f1d = m.source.dual(Degree::ZERO);
    let phit = m.matrix.transpose();
    let kgb = kernel_unchecked(&phit, &f0d, &f1d);
    let kcols = prune_generators(&kgb.columns(), &f0d);
    let p = kcols.len();
    // K^T : F0 → R^p ; row a is the functional k_a
    let mut kt = Matrix::zero(ring, p, f0.rank());
    for (a, col) in kcols.iter().enumerate() {
        for (i, e) in col.iter().enumerate() {
            kt.set(a, i, e.clone());
        }
    }
    let degs: Vec<Degree> = kcols
        .iter()
        .map(|c| {
            let mm = Matrix::from_columns(ring, f0d.rank(), std::slice::from_ref(c));
            mm.column_degrees(&f0d).unwrap()[0].unwrap_or(Degree::ZERO)
        })
        .collect();
    // functional of degree d sends e_i (deg d_i) to degree d_i - (-(d))... basis of R^p gets degree -d
    let ddt = FreeModule::new(ring, degs.iter().map(|&d| -d).collect());
    let tor = kernel_unchecked(&kt, f0, &ddt);
    let gens = prune_generators(&tor.columns(), f0);
    Ok(Torsion { generators: gens, to_double_dual: kt, dd_target: ddt })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{OrderKind, RingDescriptor};

    fn ring(vars: &[&str], order: OrderKind) -> Ring {
        let mut d = RingDescriptor::standard(&vars.iter().map(|v| (*v, 1)).collect::<Vec<_>>());
        d.order = order;
        Ring::new(&d).unwrap()
    }

    fn ps(r: &Ring, s: &[&str]) -> Vec<Poly> {
        s.iter().map(|x| r.parse_poly(x).unwrap()).collect()
    }

    #[test]
    fn lex_example_already_basis() {
        let r = ring(&["x", "y"], OrderKind::Lex);
        // not homogeneous: use the raw ideal engine
        let gb = ideal_gb(&r, &ps(&r, &["x^2-y", "y^2"]));
        let mut got: Vec<String> = gb.iter().map(|p| p.to_string()).collect();
        got.sort();
        assert_eq!(got, vec!["x^2 - y", "y^2"]);
    }

    #[test]
    fn normal_form_examples() {
        let r = ring(&["x", "y"], OrderKind::Lex);
        let gb = ideal_gb(&r, &ps(&r, &["x^2-y"]));
        assert_eq!(r.parse_poly("x^2*y").unwrap().nf_by(&gb).to_string(), "y^2");
        let r2 = ring(&["x", "y"], OrderKind::Grevlex);
        let m = ideal_gb(&r2, &ps(&r2, &["x", "y"]));
        assert_eq!(Poly::one(&r2).nf_by(&m), Poly::one(&r2));
    }

    #[test]
    fn module_gb_leading_terms() {
        let r = ring(&["x", "y"], OrderKind::Grevlex);
        let f = FreeModule::new(&r, vec![Degree::ZERO, Degree::ZERO]);
        let z = Poly::zero(&r);
        let gens = vec![
            vec![r.var("x"), z.clone()],
            vec![r.var("y"), z.clone()],
            vec![z.clone(), r.var("x")],
        ];
        let gb = groebner_basis(&gens, &f).unwrap();
        let mut lts: Vec<(usize, String)> =
            gb.leading_terms().into_iter().map(|(p, m)| (p, crate::poly::fmt_mono(&r, &m))).collect();
        lts.sort();
        assert_eq!(lts, vec![(0, "x".into()), (0, "y".into()), (1, "x".into())]);
    }

    #[test]
    fn koszul_and_veronese_syzygies() {
        let r = ring(&["x", "y"], OrderKind::Grevlex);
        let f = FreeModule::new(&r, vec![Degree::ZERO]);
        let s = syzygies(&[vec![r.var("x")], vec![r.var("y")]], &f).unwrap();
        assert_eq!(s.matrix.ncols, 1);
        assert_eq!(s.source.shifts, vec![Degree(2, 0)]);
        let g: Vec<Vec<Poly>> = ps(&r, &["x^2", "x*y", "y^2"]).into_iter().map(|p| vec![p]).collect();
        let s = syzygies(&g, &f).unwrap();
        assert_eq!(s.matrix.ncols, 2);
        // φ ∘ syz = 0
        let phi = Matrix::from_columns(&r, 1, &g);
        assert!(phi.mul(&s.matrix).unwrap().is_zero());
        let single = syzygies(&[vec![r.parse_poly("x^2+y^2").unwrap()]], &f).unwrap();
        assert_eq!(single.matrix.ncols, 0);
    }

    #[test]
    fn kernel_of_unit_is_zero() {
        let r = ring(&["x"], OrderKind::Grevlex);
        let f = FreeModule::new(&r, vec![Degree::ZERO]);
        let k = kernel(&Matrix::identity(&r, 1), &f, &f).unwrap();
        assert!(k.is_zero_submodule());
    }

    #[test]
    fn colon_and_saturation_examples() {
        let r = ring(&["x", "y"], OrderKind::Grevlex);
        let c = colon(&r, &ps(&r, &["x^2*y"]), &ps(&r, &["x"])).unwrap();
        assert!(ideals_equal(&r, &c, &ps(&r, &["x*y"])));
        let s = saturate(&r, &ps(&r, &["x^2", "x*y"]), &ps(&r, &["x", "y"])).unwrap();
        assert!(ideals_equal(&r, &s, &ps(&r, &["x"])));
        let s = saturate_irrelevant(&r, &ps(&r, &["x^2", "y^3"]));
        assert!(ideals_equal(&r, &s, &ps(&r, &["1"])));
        // saturation stabilises
        let s2 = colon(&r, &s, &ps(&r, &["x", "y"])).unwrap();
        assert!(ideals_equal(&r, &s, &s2));
    }

    #[test]
    fn elimination_substitution_oracle() {
        let r = ring(&["x", "y"], OrderKind::Grevlex);
        let i = ps(&r, &["y - x^2", "x^3"]);
        // inhomogeneous, but elimination does not need homogeneity
        let e = eliminate(&r, &i, &[0]).unwrap();
        let gb = ideal_gb(&r, &e);
        assert!(ideal_contains(&gb, &r.parse_poly("y^3").unwrap()));
        assert!(e.iter().all(|p| !p.involves_var(0)));
    }

    #[test]
    fn torsion_of_mixed_module() {
        let r = ring(&["x"], OrderKind::Grevlex);
        // R/(x) ⊕ R
        let m = ModulePresentation::quotient(&r, &[r.var("x")])
            .unwrap()
            .direct_sum(&ModulePresentation::free(FreeModule::new(&r, vec![Degree::ZERO])));
        let t = torsion_submodule(&m).unwrap();
        assert!(!t.is_zero(&m).unwrap());
        // the torsion is generated by e_1 (modulo im φ)
        let im = groebner_basis(&m.matrix.columns(), &m.target).unwrap();
        let nonzero: Vec<_> = t.generators.iter().filter(|g| !im.contains(g).unwrap()).collect();
        assert_eq!(nonzero.len(), 1);
        assert!(nonzero[0][1].is_zero());
    }

    #[test]
    fn ideal_is_torsion_free() {
        let r = ring(&["x", "y"], OrderKind::Grevlex);
        let m = ModulePresentation::ideal(&r, &ps(&r, &["x", "y"])).unwrap();
        assert!(torsion_submodule(&m).unwrap().is_zero(&m).unwrap());
    }
}
