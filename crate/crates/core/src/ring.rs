//! Multigraded polynomial rings `A[x, y]` over a base `A` that is a field,
//! a polynomial ring `k[z]`, or a reduced quotient `k[z]/J`.
//!
//! Base variables are stored as ordinary (weightless) ring variables and
//! always sort last in the monomial order, so one Buchberger engine over
//! `k[x, y, z]` serves both closed fibers and the generic point.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::{Arc, RwLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mono::Mono;
use crate::poly::Poly;

/// A degree in `ℤ` or `ℤ²`. For `ℤ`-graded rings the second slot is zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Degree(pub i64, pub i64);

impl Degree {
    pub const ZERO: Degree = Degree(0, 0);

    pub fn scale(self, k: i64) -> Degree {
        Degree(self.0 * k, self.1 * k)
    }

    pub fn to_vec(self, rank: u8) -> Vec<i64> {
        if rank == 1 {
            vec![self.0]
        } else {
            vec![self.0, self.1]
        }
    }
}

impl Add for Degree {
    type Output = Degree;
    fn add(self, o: Degree) -> Degree {
        Degree(self.0 + o.0, self.1 + o.1)
    }
}

impl Sub for Degree {
    type Output = Degree;
    fn sub(self, o: Degree) -> Degree {
        Degree(self.0 - o.0, self.1 - o.1)
    }
}

impl Neg for Degree {
    type Output = Degree;
    fn neg(self) -> Degree {
        Degree(-self.0, -self.1)
    }
}

impl Mul<i64> for Degree {
    type Output = Degree;
    fn mul(self, k: i64) -> Degree {
        self.scale(k)
    }
}

impl Serialize for Degree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        // ring-independent: always a pair; callers wanting ℤ output use `to_vec`
        [self.0, self.1].serialize(s)
    }
}

/// Role of a variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum VarKind {
    /// generates the irrelevant ideal `𝔪`
    X,
    /// bigraded companion variable, not in `𝔪`
    Y,
    /// base parameter, degree zero
    Z,
    /// internal auxiliary variable (elimination tags), degree zero
    Aux,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Var {
    pub name: String,
    pub kind: VarKind,
    pub deg: Degree,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BlockKind {
    /// weighted degree first, then reverse lexicographic
    Grevlex(Vec<i64>),
    Lex,
}

/// A contiguous block of variables `start..end` with its own order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Block {
    pub start: usize,
    pub end: usize,
    pub kind: BlockKind,
}

impl Block {
    pub fn cmp(&self, a: &[u16], b: &[u16]) -> Ordering {
        match &self.kind {
            BlockKind::Grevlex(w) => {
                let wa: i64 = (self.start..self.end).map(|i| w[i - self.start] * a[i] as i64).sum();
                let wb: i64 = (self.start..self.end).map(|i| w[i - self.start] * b[i] as i64).sum();
                if wa != wb {
                    return wa.cmp(&wb);
                }
                for i in (self.start..self.end).rev() {
                    if a[i] != b[i] {
                        return b[i].cmp(&a[i]);
                    }
                }
                Ordering::Equal
            }
            BlockKind::Lex => {
                for i in self.start..self.end {
                    if a[i] != b[i] {
                        return a[i].cmp(&b[i]);
                    }
                }
                Ordering::Equal
            }
        }
    }
}

/// User-facing order choice for the graded block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum OrderKind {
    Grevlex,
    Lex,
    Block,
}

/// Coefficient field and base-ring description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseKind {
    /// `QQ` (p = 0) or `GF(p)`
    Field { p: u64 },
    /// `k[z1..zm]`
    Poly { p: u64, params: Vec<String> },
    /// `k[z]/J`; `J` as polynomial strings, optional explicit minimal primes
    Quotient { p: u64, params: Vec<String>, ideal: Vec<String>, components: Option<Vec<Vec<String>>> },
}

impl BaseKind {
    pub fn characteristic(&self) -> u64 {
        match self {
            BaseKind::Field { p } | BaseKind::Poly { p, .. } | BaseKind::Quotient { p, .. } => *p,
        }
    }

    pub fn params(&self) -> &[String] {
        match self {
            BaseKind::Field { .. } => &[],
            BaseKind::Poly { params, .. } | BaseKind::Quotient { params, .. } => params,
        }
    }
}

/// Everything needed to build a ring.
#[derive(Clone, Debug)]
pub struct RingDescriptor {
    pub base: BaseKind,
    /// x-variables with degrees; for `ℤ` grading use `Degree(d, 0)`
    pub xvars: Vec<(String, Degree)>,
    /// y-variables (bigraded case only)
    pub yvars: Vec<(String, Degree)>,
    /// 1 for `ℤ`, 2 for `ℤ²`
    pub grading_rank: u8,
    /// positivity covector; defaults to `(1, 0)` when `None`
    pub psi: Option<(i64, i64)>,
    pub order: OrderKind,
}

impl RingDescriptor {
    /// `ℤ`-graded ring over `QQ` with the given variable degrees.
    pub fn standard(vars: &[(&str, i64)]) -> Self {
        RingDescriptor {
            base: BaseKind::Field { p: 0 },
            xvars: vars.iter().map(|(n, d)| (n.to_string(), Degree(*d, 0))).collect(),
            yvars: vec![],
            grading_rank: 1,
            psi: None,
            order: OrderKind::Grevlex,
        }
    }

    pub fn over_params(mut self, params: &[&str]) -> Self {
        let p = self.base.characteristic();
        self.base = BaseKind::Poly { p, params: params.iter().map(|s| s.to_string()).collect() };
        self
    }

    pub fn over_quotient(mut self, params: &[&str], ideal: &[&str]) -> Self {
        let p = self.base.characteristic();
        self.base = BaseKind::Quotient {
            p,
            params: params.iter().map(|s| s.to_string()).collect(),
            ideal: ideal.iter().map(|s| s.to_string()).collect(),
            components: None,
        };
        self
    }
}

/// Base-ring data: the defining ideal `J` (reduced GB) and its minimal primes.
#[derive(Clone, Debug)]
pub struct BaseData {
    pub nparams: usize,
    /// reduced Gröbner basis of `J` (polys in the z-variables); empty for `k[z]`
    pub j_gb: Vec<Poly>,
    /// minimal primes of `J`, each as a reduced GB; a single `(0)` entry for `k[z]`
    pub components: Vec<Vec<Poly>>,
    /// false when the components were assumed rather than derived
    pub components_certified: bool,
}

static RING_IDS: AtomicU64 = AtomicU64::new(1);

pub struct RingData {
    pub id: u64,
    pub vars: Vec<Var>,
    /// non-base blocks, in priority order
    pub blocks: Vec<Block>,
    /// first base (z) variable; z-variables occupy `base_start..nvars`
    pub base_start: usize,
    pub grading_rank: u8,
    pub psi: (i64, i64),
    pub char_p: u64,
    /// positive weights on all graded variables used to bound enumeration
    pub enum_weights: Vec<i64>,
    pub order_kind: OrderKind,
    pub base_kind: BaseKind,
    base: RwLock<Option<Arc<BaseData>>>,
    mono_cache: RwLock<HashMap<(u64, Degree), Arc<Vec<Mono>>>>,
}

/// Shared handle to an immutable ring.
#[derive(Clone)]
pub struct Ring(pub Arc<RingData>);

impl PartialEq for Ring {
    fn eq(&self, o: &Ring) -> bool {
        self.0.id == o.0.id
    }
}

impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.0.vars.iter().map(|v| v.name.as_str()).collect();
        write!(f, "Ring#{}[{}]", self.0.id, names.join(","))
    }
}

impl std::ops::Deref for Ring {
    type Target = RingData;
    fn deref(&self) -> &RingData {
        &self.0
    }
}

fn psi_apply(psi: (i64, i64), d: Degree) -> i64 {
    psi.0 * d.0 + psi.1 * d.1
}

/// Internal constructor arguments for rings built by algorithms.
pub(crate) struct RawRing {
    pub vars: Vec<Var>,
    pub blocks: Vec<Block>,
    pub base_start: usize,
    pub grading_rank: u8,
    pub psi: (i64, i64),
    pub char_p: u64,
    pub order_kind: OrderKind,
    pub base_kind: BaseKind,
}

impl Ring {
    /// Validate a descriptor and build the ring.
    pub fn new(desc: &RingDescriptor) -> Result<Ring> {
        let rank = desc.grading_rank;
        if rank != 1 && rank != 2 {
            return Err(Error::Invalid(format!("grading rank {rank} unsupported (use 1 or 2)")));
        }
        if desc.xvars.is_empty() {
            return Err(Error::Invalid("ring needs at least one x-variable".into()));
        }
        let psi = desc.psi.unwrap_or((1, 0));
        let bigraded = !desc.yvars.is_empty();
        if bigraded && rank != 2 {
            return Err(Error::BadBigrading("y-variables need a ZZ^2 grading".into()));
        }
        let mut names = std::collections::HashSet::new();
        for (n, _) in desc.xvars.iter().chain(desc.yvars.iter()) {
            if !names.insert(n.clone()) {
                return Err(Error::Invalid(format!("duplicate variable {n}")));
            }
        }
        for n in desc.base.params() {
            if !names.insert(n.clone()) {
                return Err(Error::Invalid(format!("duplicate variable {n}")));
            }
        }
        for (n, d) in &desc.xvars {
            if rank == 1 && d.1 != 0 {
                return Err(Error::Invalid(format!("variable {n} has a ZZ^2 degree in a ZZ-graded ring")));
            }
            if bigraded {
                if d.1 != 0 || d.0 <= 0 {
                    return Err(Error::BadBigrading(format!(
                        "x-variable {n} must have bidegree (delta, 0) with delta > 0, got ({}, {})",
                        d.0, d.1
                    )));
                }
            } else if psi_apply(psi, *d) <= 0 {
                return Err(Error::PositivityViolation(format!(
                    "psi(deg {n}) = {} <= 0",
                    psi_apply(psi, *d)
                )));
            }
        }
        for (n, d) in &desc.yvars {
            if d.1 != 1 || d.0 > 0 {
                return Err(Error::BadBigrading(format!(
                    "y-variable {n} must have bidegree (-gamma, 1) with gamma >= 0, got ({}, {})",
                    d.0, d.1
                )));
            }
        }
        if bigraded && psi_apply(psi, Degree(1, 0)) <= 0 {
            return Err(Error::PositivityViolation("psi must be positive on x-degrees".into()));
        }
        let mut vars = Vec::new();
        for (n, d) in &desc.xvars {
            vars.push(Var { name: n.clone(), kind: VarKind::X, deg: *d });
        }
        for (n, d) in &desc.yvars {
            vars.push(Var { name: n.clone(), kind: VarKind::Y, deg: *d });
        }
        let ngraded = vars.len();
        for n in desc.base.params() {
            vars.push(Var { name: n.clone(), kind: VarKind::Z, deg: Degree::ZERO });
        }
        let weights = enumeration_weights(&vars[..ngraded], psi, bigraded);
        let kind = match desc.order {
            OrderKind::Lex => BlockKind::Lex,
            _ => BlockKind::Grevlex(weights.clone()),
        };
        let raw = RawRing {
            vars,
            blocks: vec![Block { start: 0, end: ngraded, kind }],
            base_start: ngraded,
            grading_rank: rank,
            psi,
            char_p: desc.base.characteristic(),
            order_kind: desc.order,
            base_kind: desc.base.clone(),
        };
        let ring = Ring::from_raw(raw);
        ring.init_base()?;
        Ok(ring)
    }

    pub(crate) fn from_raw(raw: RawRing) -> Ring {
        let ngraded = raw.vars.iter().filter(|v| matches!(v.kind, VarKind::X | VarKind::Y)).count();
        let bigraded = raw.vars.iter().any(|v| v.kind == VarKind::Y);
        let graded: Vec<Var> = raw.vars.iter().filter(|v| matches!(v.kind, VarKind::X | VarKind::Y)).cloned().collect();
        let mut w = enumeration_weights(&graded, raw.psi, bigraded);
        debug_assert_eq!(w.len(), ngraded);
        // spread back over all variables: weightless for z/aux
        let mut ew = Vec::with_capacity(raw.vars.len());
        let mut it = w.drain(..);
        for v in &raw.vars {
            if matches!(v.kind, VarKind::X | VarKind::Y) {
                ew.push(it.next().unwrap());
            } else {
                ew.push(0);
            }
        }
        Ring(Arc::new(RingData {
            id: RING_IDS.fetch_add(1, AtomicOrdering::Relaxed),
            vars: raw.vars,
            blocks: raw.blocks,
            base_start: raw.base_start,
            grading_rank: raw.grading_rank,
            psi: raw.psi,
            char_p: raw.char_p,
            enum_weights: ew,
            order_kind: raw.order_kind,
            base_kind: raw.base_kind,
            base: RwLock::new(None),
            mono_cache: RwLock::new(HashMap::new()),
        }))
    }

    pub(crate) fn raw_clone(&self) -> RawRing {
        RawRing {
            vars: self.vars.clone(),
            blocks: self.blocks.clone(),
            base_start: self.base_start,
            grading_rank: self.grading_rank,
            psi: self.psi,
            char_p: self.char_p,
            order_kind: self.order_kind,
            base_kind: self.base_kind.clone(),
        }
    }

    /// Parse `J`, compute its GB and minimal primes.
    fn init_base(&self) -> Result<()> {
        let nparams = self.nvars() - self.base_start;
        let data = match &self.base_kind {
            BaseKind::Field { .. } | BaseKind::Poly { .. } => BaseData {
                nparams,
                j_gb: vec![],
                components: vec![vec![]],
                components_certified: true,
            },
            BaseKind::Quotient { ideal, components, .. } => {
                let mut gens = Vec::new();
                for s in ideal {
                    let p = self.parse_poly_raw(s)?;
                    if !p.is_base_element() {
                        return Err(Error::Invalid(format!("base ideal generator {s} involves graded variables")));
                    }
                    gens.push(p);
                }
                let j_gb = crate::groebner::ideal_gb_raw(&gens);
                if j_gb.iter().any(|g| g.is_unit_constant()) {
                    return Err(Error::Invalid("base ideal is the unit ideal".into()));
                }
                let (components, certified) = match components {
                    Some(cs) => {
                        let mut out = Vec::new();
                        for c in cs {
                            let mut g = Vec::new();
                            for s in c {
                                g.push(self.parse_poly_raw(s)?);
                            }
                            out.push(crate::groebner::ideal_gb_raw(&g));
                        }
                        (out, true)
                    }
                    None => crate::baseprimes::minimal_primes(self, &j_gb),
                };
                BaseData { nparams, j_gb, components, components_certified: certified }
            }
        };
        *self.base.write().unwrap() = Some(Arc::new(data));
        Ok(())
    }

    pub(crate) fn set_base(&self, data: BaseData) {
        *self.base.write().unwrap() = Some(Arc::new(data));
    }

    pub fn base(&self) -> Arc<BaseData> {
        self.base.read().unwrap().clone().expect("ring base not initialised")
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn nparams(&self) -> usize {
        self.nvars() - self.base_start
    }

    pub fn has_quotient_base(&self) -> bool {
        !self.base().j_gb.is_empty()
    }

    /// True when `A` is a field (no parameters).
    pub fn base_is_field(&self) -> bool {
        self.nparams() == 0 && !self.has_quotient_base()
    }

    pub fn base_is_domain(&self) -> bool {
        self.base().components.len() == 1
    }

    pub fn x_indices(&self) -> Vec<usize> {
        (0..self.nvars()).filter(|&i| self.vars[i].kind == VarKind::X).collect()
    }

    pub fn y_indices(&self) -> Vec<usize> {
        (0..self.nvars()).filter(|&i| self.vars[i].kind == VarKind::Y).collect()
    }

    pub fn z_indices(&self) -> Vec<usize> {
        (self.base_start..self.nvars()).collect()
    }

    pub fn graded_indices(&self) -> Vec<usize> {
        (0..self.nvars()).filter(|&i| matches!(self.vars[i].kind, VarKind::X | VarKind::Y)).collect()
    }

    /// Number of x-variables, `r`.
    pub fn r(&self) -> usize {
        self.x_indices().len()
    }

    pub fn is_bigraded(&self) -> bool {
        self.vars.iter().any(|v| v.kind == VarKind::Y)
    }

    /// `δ = Σ deg(x_i)`.
    pub fn delta(&self) -> Degree {
        self.x_indices().iter().fold(Degree::ZERO, |a, &i| a + self.vars[i].deg)
    }

    pub fn psi_of(&self, d: Degree) -> i64 {
        psi_apply(self.psi, d)
    }

    /// Standard graded: `ℤ`-graded, every x-variable of degree 1, no y.
    pub fn is_standard_graded(&self) -> bool {
        self.grading_rank == 1 && !self.is_bigraded() && self.x_indices().iter().all(|&i| self.vars[i].deg == Degree(1, 0))
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn var(&self, name: &str) -> Poly {
        let i = self.var_index(name).unwrap_or_else(|| panic!("no variable {name}"));
        Poly::var(self, i)
    }

    pub fn degree_of_mono(&self, m: &Mono) -> Degree {
        let mut d = Degree::ZERO;
        for (i, &e) in m.exps().iter().enumerate() {
            if e > 0 {
                d = d + self.vars[i].deg.scale(e as i64);
            }
        }
        d
    }

    /// Enumeration weight of a degree: the linear form behind `enum_weights`.
    pub fn enum_weight_of(&self, d: Degree) -> Option<i64> {
        let lam = self.enum_functional();
        Some(lam.0 * d.0 + lam.1 * d.1)
    }

    fn enum_functional(&self) -> (i64, i64) {
        if self.is_bigraded() {
            let gmax = self.vars.iter().filter(|v| v.kind == VarKind::Y).map(|v| -v.deg.0).max().unwrap_or(0);
            (self.psi.0, self.psi.0 * gmax + 1)
        } else {
            self.psi
        }
    }

    /// Order comparison of monomials (all blocks, base last).
    pub fn cmp_mono(&self, a: &Mono, b: &Mono) -> Ordering {
        let (ea, eb) = (a.exps(), b.exps());
        for blk in &self.blocks {
            let c = blk.cmp(ea, eb);
            if c != Ordering::Equal {
                return c;
            }
        }
        self.cmp_base(ea, eb)
    }

    /// Comparison restricted to the non-base blocks.
    pub fn cmp_graded(&self, ea: &[u16], eb: &[u16]) -> Ordering {
        for blk in &self.blocks {
            let c = blk.cmp(ea, eb);
            if c != Ordering::Equal {
                return c;
            }
        }
        Ordering::Equal
    }

    /// Base block: graded reverse lexicographic on the z-variables.
    pub fn cmp_base(&self, ea: &[u16], eb: &[u16]) -> Ordering {
        let n = self.nvars();
        let da: u32 = ea[self.base_start..n].iter().map(|&e| e as u32).sum();
        let db: u32 = eb[self.base_start..n].iter().map(|&e| e as u32).sum();
        if da != db {
            return da.cmp(&db);
        }
        for i in (self.base_start..n).rev() {
            if ea[i] != eb[i] {
                return eb[i].cmp(&ea[i]);
            }
        }
        Ordering::Equal
    }

    /// All monomials in the variables selected by `mask` of the exact degree `d`.
    /// Only graded variables may be selected (z/aux are weightless).
    pub fn monomials_of_degree_in(&self, mask: u64, d: Degree) -> Arc<Vec<Mono>> {
        if let Some(v) = self.mono_cache.read().unwrap().get(&(mask, d)) {
            return v.clone();
        }
        let vars: Vec<usize> = (0..self.nvars()).filter(|&i| mask >> i & 1 == 1).collect();
        let target = self.enum_weight_of(d).unwrap();
        let mut out = Vec::new();
        if target >= 0 {
            let mut cur = vec![0u16; self.nvars()];
            self.enum_rec(&vars, 0, target, d, &mut cur, &mut out);
        }
        out.sort_by(|a, b| self.cmp_mono(b, a));
        let arc = Arc::new(out);
        self.mono_cache.write().unwrap().insert((mask, d), arc.clone());
        arc
    }

    fn enum_rec(&self, vars: &[usize], k: usize, remaining: i64, d: Degree, cur: &mut Vec<u16>, out: &mut Vec<Mono>) {
        if k == vars.len() {
            if remaining == 0 {
                let m = Mono::from_exps(cur);
                if self.degree_of_mono(&m) == d {
                    out.push(m);
                }
            }
            return;
        }
        let i = vars[k];
        let w = self.enum_weights[i];
        assert!(w > 0, "enumeration over a weightless variable");
        let mut e = 0i64;
        while e * w <= remaining {
            cur[i] = e as u16;
            self.enum_rec(vars, k + 1, remaining - e * w, d, cur, out);
            e += 1;
        }
        cur[i] = 0;
    }

    /// Monomials in all graded (x and y) variables of degree `d`, descending.
    pub fn monomials_of_degree(&self, d: Degree) -> Arc<Vec<Mono>> {
        self.monomials_of_degree_in(self.graded_mask(), d)
    }

    pub fn graded_mask(&self) -> u64 {
        self.graded_indices().iter().fold(0u64, |m, &i| m | 1 << i)
    }

    pub fn x_mask(&self) -> u64 {
        self.x_indices().iter().fold(0u64, |m, &i| m | 1 << i)
    }

    pub fn y_mask(&self) -> u64 {
        self.y_indices().iter().fold(0u64, |m, &i| m | 1 << i)
    }

    pub fn degree_display(&self, d: Degree) -> String {
        if self.grading_rank == 1 {
            d.0.to_string()
        } else {
            format!("({},{})", d.0, d.1)
        }
    }

    pub fn check_same(&self, other: &Ring) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    /// Same variables and order, but base `k[z]/P` with the single component `P`
    /// (a prime of the current base). Used for evaluation at non-closed points.
    pub fn with_prime_base(&self, prime_gb: Vec<Poly>) -> Ring {
        let mut raw = self.raw_clone();
        let p = self.char_p;
        let params: Vec<String> = self.z_indices().iter().map(|&i| self.vars[i].name.clone()).collect();
        let ideal: Vec<String> = prime_gb.iter().map(|g| g.to_string()).collect();
        raw.base_kind = BaseKind::Quotient { p, params, ideal, components: None };
        let ring = Ring::from_raw(raw);
        let j: Vec<Poly> = prime_gb.iter().map(|g| g.transfer(&ring)).collect();
        let data = BaseData {
            nparams: self.nparams(),
            j_gb: j.clone(),
            components: vec![j],
            components_certified: true,
        };
        ring.set_base(data);
        ring
    }

    /// Ring over the field `k` obtained by deleting the base variables.
    pub fn fiber_ring(&self) -> Ring {
        let mut raw = self.raw_clone();
        raw.vars.truncate(self.base_start);
        raw.base_kind = BaseKind::Field { p: self.char_p };
        let ring = Ring::from_raw(raw);
        ring.set_base(BaseData { nparams: 0, j_gb: vec![], components: vec![vec![]], components_certified: true });
        ring
    }

    /// Ring with extra variables prepended in a block of their own that
    /// dominates the existing order. New variables get degree `degs[i]` and kind `Aux`
    /// unless a kind is given.
    pub fn with_leading_block(&self, names: &[String], degs: &[Degree], kinds: &[VarKind], lex: bool) -> Ring {
        let k = names.len();
        let mut raw = self.raw_clone();
        let mut vars: Vec<Var> = names
            .iter()
            .zip(degs)
            .zip(kinds)
            .map(|((n, d), kd)| Var { name: n.clone(), kind: *kd, deg: *d })
            .collect();
        vars.append(&mut raw.vars);
        let mut blocks = vec![Block {
            start: 0,
            end: k,
            kind: if lex { BlockKind::Lex } else { BlockKind::Grevlex(vec![1; k]) },
        }];
        for b in &self.blocks {
            blocks.push(Block { start: b.start + k, end: b.end + k, kind: b.kind.clone() });
        }
        raw.vars = vars;
        raw.blocks = blocks;
        raw.base_start = self.base_start + k;
        let ring = Ring::from_raw(raw);
        self.copy_base_into(&ring, k);
        ring
    }

    /// Copy `J` and components, shifting exponent vectors by `offset` leading variables.
    pub(crate) fn copy_base_into(&self, target: &Ring, offset: usize) {
        let b = self.base();
        let map = |p: &Poly| p.embed_shifted(target, offset);
        target.set_base(BaseData {
            nparams: b.nparams,
            j_gb: b.j_gb.iter().map(map).collect(),
            components: b.components.iter().map(|c| c.iter().map(map).collect()).collect(),
            components_certified: b.components_certified,
        });
    }

    /// Same variables with the graded block reordered by `perm` (new position -> old index)
    /// and graded reverse lexicographic order. Base variables are untouched.
    pub(crate) fn permuted_grevlex(&self, perm: &[usize]) -> Ring {
        let mut raw = self.raw_clone();
        let ng = self.base_start;
        assert_eq!(perm.len(), ng);
        let old = raw.vars.clone();
        for (newi, &oldi) in perm.iter().enumerate() {
            raw.vars[newi] = old[oldi].clone();
        }
        let w: Vec<i64> = perm.iter().map(|&o| self.enum_weights[o].max(1)).collect();
        raw.blocks = vec![Block { start: 0, end: ng, kind: BlockKind::Grevlex(w) }];
        let ring = Ring::from_raw(raw);
        let b = self.base();
        ring.set_base(BaseData {
            nparams: b.nparams,
            j_gb: b.j_gb.iter().map(|p| p.permute_vars(&ring, perm)).collect(),
            components: b.components.iter().map(|c| c.iter().map(|p| p.permute_vars(&ring, perm)).collect()).collect(),
            components_certified: b.components_certified,
        });
        ring
    }

    /// Parse a polynomial in this ring (normal form modulo `J` applied).
    pub fn parse_poly(&self, s: &str) -> Result<Poly> {
        let p = self.parse_poly_raw(s)?;
        Ok(p.reduce_base())
    }

    pub(crate) fn parse_poly_raw(&self, s: &str) -> Result<Poly> {
        crate::parse::parse_poly_str(self, s)
    }
}

/// Positive weights on graded variables: `ψ(deg v)` in the singly graded
/// or all-x case; for the bigraded case `λ = (ψ₁, ψ₁·γ_max + 1)`.
fn enumeration_weights(graded: &[Var], psi: (i64, i64), bigraded: bool) -> Vec<i64> {
    let lam = if bigraded {
        let gmax = graded.iter().filter(|v| v.kind == VarKind::Y).map(|v| -v.deg.0).max().unwrap_or(0);
        (psi.0, psi.0 * gmax + 1)
    } else {
        psi
    };
    graded.iter().map(|v| lam.0 * v.deg.0 + lam.1 * v.deg.1).collect()
}
