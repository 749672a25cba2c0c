//! The session script language: a ring, named ideals, modules and fibers,
//! then commands. Parsing resolves names; [`Session`] builds the objects and
//! runs commands into JSON values.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde_json::{json, Value};

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::fiber::{Fiber, FiberPoint};
use crate::groebner::{ideal_gb, ideal_power_gens, ideals_equal};
use crate::localcohom::LocalCohomology;
use crate::loci::{
    dense_open_certificate, duality_exclusion_locus, local_cohomology_locus, local_cohomology_table,
    locally_constant_harness, nonfree_locus_stable, Sampler,
};
use crate::module::{FreeModule, Matrix, ModulePresentation};
use crate::parse::{parse_poly_tokens, tokenize, Cursor, Tok, Token};
use crate::poly::Poly;
use crate::ratmap::{constancy_report, FiberMap, RationalMapData};
use crate::resolution::{free_resolution, minimalize};
use crate::ring::{BaseKind, Degree, OrderKind, Ring, RingDescriptor};
use crate::specialize::{specialize_power, PowersBundle};

/// Polynomial source text with the tokens it came from (for error positions).
#[derive(Clone, Debug)]
pub struct Expr {
    pub text: String,
    toks: Vec<Token>,
}

impl PartialEq for Expr {
    fn eq(&self, o: &Expr) -> bool {
        self.text == o.text
    }
}

impl Eq for Expr {}

impl Expr {
    fn from_tokens(toks: Vec<Token>) -> Expr {
        let text = toks
            .iter()
            .map(|t| match &t.tok {
                Tok::Ident(s) | Tok::Int(s) => s.clone(),
                Tok::Sym(c) => c.to_string(),
                Tok::Eof => String::new(),
            })
            .collect();
        Expr { text, toks }
    }

    fn poly(&self, ring: &Ring) -> Result<Poly> {
        parse_poly_tokens(ring, &self.toks)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegLit {
    Z(i64),
    Z2(i64, i64),
}

impl DegLit {
    fn degree(self) -> Degree {
        match self {
            DegLit::Z(a) => Degree(a, 0),
            DegLit::Z2(a, b) => Degree(a, b),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    QQ,
    GF(u64),
}

impl Field {
    fn p(self) -> u64 {
        match self {
            Field::QQ => 0,
            Field::GF(p) => p,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseDecl {
    Field(Field),
    Poly(Field, Vec<String>),
    Quotient(Field, Vec<String>, Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingDecl {
    pub name: String,
    pub base: BaseDecl,
    pub vars: Vec<(String, DegLit)>,
    pub vars2: Vec<(String, DegLit)>,
    pub psi: Option<(i64, i64)>,
    pub order: OrderKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleDef {
    Coker { rows: Vec<Vec<Expr>>, shifts: Vec<DegLit> },
    Quotient(String),
    Ideal(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiberDef {
    Point(Vec<(String, Expr)>),
    Generic,
    Prime(Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decl {
    Ring(RingDecl),
    Ideal { name: String, gens: Vec<Expr> },
    Module { name: String, def: ModuleDef },
    Fiber { name: String, def: FiberDef },
}

/// A fiber reference: a declared name or the inline generic point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiberRef {
    Named(String),
    Generic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Window {
    Default,
    Range(DegLit, DegLit),
    Degrees(Vec<DegLit>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RatmapAt {
    Fiber(FiberRef),
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    LocalCoh { module: String, window: Window, at: FiberRef },
    Loci { module: String, index: Option<(usize, Vec<DegLit>)> },
    Specialize { name: String, power: usize, at: FiberRef },
    Ratmap { forms: Vec<Expr>, at: RatmapAt },
    Invariants { module: String, at: FiberRef },
    Harness { module: String, index: usize, degrees: Vec<DegLit>, over: Vec<FiberRef>, random: usize },
    Betti { module: String, at: FiberRef },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::LocalCoh { .. } => "localcoh",
            Command::Loci { .. } => "loci",
            Command::Specialize { .. } => "specialize",
            Command::Ratmap { .. } => "ratmap",
            Command::Invariants { .. } => "invariants",
            Command::Harness { .. } => "harness",
            Command::Betti { .. } => "betti",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Script {
    pub decls: Vec<Decl>,
    pub commands: Vec<Command>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Ideal,
    Module,
    Fiber,
}

struct Parser<'a> {
    c: Cursor<'a>,
    names: HashMap<String, Kind>,
    have_ring: bool,
    nvars: usize,
}

impl Script {
    pub fn parse(src: &str) -> Result<Script> {
        let toks = tokenize(src)?;
        let mut p = Parser { c: Cursor::new(&toks), names: HashMap::new(), have_ring: false, nvars: 0 };
        let mut s = Script::default();
        while *p.c.peek() != Tok::Eof {
            if p.c.eat_kw("cmd") {
                if !p.have_ring {
                    return p.c.err("commands need a ring declaration first");
                }
                s.commands.push(p.command()?);
            } else {
                s.decls.push(p.decl()?);
            }
            p.c.expect_sym(';')?;
        }
        Ok(s)
    }
}

impl Parser<'_> {
    fn decl(&mut self) -> Result<Decl> {
        let kw = match self.c.peek() {
            Tok::Ident(s) => s.clone(),
            _ => return self.c.err("expected a declaration or 'cmd'"),
        };
        if kw != "ring" && !self.have_ring {
            return self.c.err("the ring must be declared first");
        }
        match kw.as_str() {
            "ring" => {
                if self.have_ring {
                    return self.c.err("only one ring per script");
                }
                self.c.bump();
                let r = self.ring()?;
                self.have_ring = true;
                self.nvars = r.vars.len() + r.vars2.len();
                Ok(Decl::Ring(r))
            }
            "ideal" => {
                self.c.bump();
                let name = self.fresh(Kind::Ideal)?;
                self.c.expect_sym('=')?;
                let gens = self.expr_list('(', ')')?;
                Ok(Decl::Ideal { name, gens })
            }
            "module" => {
                self.c.bump();
                let name = self.fresh(Kind::Module)?;
                self.c.expect_sym('=')?;
                let def = if self.c.eat_kw("coker") {
                    self.c.expect_sym('[')?;
                    let mut rows = vec![self.exprs_until(&[';', ']'])?];
                    while self.c.eat_sym(';') {
                        rows.push(self.exprs_until(&[';', ']'])?);
                    }
                    self.c.expect_sym(']')?;
                    if rows.iter().any(|r| r.len() != rows[0].len()) {
                        return self.c.err("matrix rows have different lengths");
                    }
                    let shifts = if self.c.eat_kw("shifts") { self.deg_list('(', ')')? } else { vec![] };
                    if !shifts.is_empty() && shifts.len() != rows.len() {
                        return self.c.err("one shift per matrix row expected");
                    }
                    ModuleDef::Coker { rows, shifts }
                } else if self.c.eat_kw("quotient") {
                    ModuleDef::Quotient(self.use_name(Kind::Ideal)?)
                } else if self.c.eat_kw("ideal") {
                    ModuleDef::Ideal(self.use_name(Kind::Ideal)?)
                } else {
                    return self.c.err("expected 'coker', 'quotient' or 'ideal'");
                };
                Ok(Decl::Module { name, def })
            }
            "fiber" => {
                self.c.bump();
                let name = self.fresh(Kind::Fiber)?;
                self.c.expect_sym('=')?;
                let def = if self.c.eat_kw("generic") {
                    FiberDef::Generic
                } else if self.c.eat_kw("point") {
                    self.c.expect_sym('(')?;
                    let mut vals = Vec::new();
                    if !self.c.is_sym(')') {
                        loop {
                            let z = self.c.ident()?;
                            self.c.expect_sym('=')?;
                            vals.push((z, Expr::from_tokens(self.c.expr_tokens()?)));
                            if !self.c.eat_sym(',') {
                                break;
                            }
                        }
                    }
                    self.c.expect_sym(')')?;
                    FiberDef::Point(vals)
                } else if self.c.eat_kw("prime") {
                    FiberDef::Prime(self.expr_list('(', ')')?)
                } else {
                    return self.c.err("expected 'point', 'generic' or 'prime'");
                };
                Ok(Decl::Fiber { name, def })
            }
            _ => self.c.err(format!("unknown declaration '{kw}'")),
        }
    }

    fn fresh(&mut self, kind: Kind) -> Result<String> {
        let t = self.c.here().clone();
        let n = self.c.ident()?;
        if self.names.contains_key(&n) {
            return Err(Error::Parse { line: t.line, col: t.col, offset: t.offset, msg: format!("'{n}' is already declared") });
        }
        self.names.insert(n.clone(), kind);
        Ok(n)
    }

    fn use_name(&mut self, kind: Kind) -> Result<String> {
        let n = self.c.ident()?;
        match self.names.get(&n) {
            Some(k) if *k == kind => Ok(n),
            _ => Err(Error::UndeclaredName(n)),
        }
    }

    fn use_any(&mut self, kinds: &[Kind]) -> Result<String> {
        let n = self.c.ident()?;
        match self.names.get(&n) {
            Some(k) if kinds.contains(k) => Ok(n),
            _ => Err(Error::UndeclaredName(n)),
        }
    }

    fn fiber_ref(&mut self) -> Result<FiberRef> {
        if self.c.is_kw("generic") && !self.names.contains_key("generic") {
            self.c.bump();
            return Ok(FiberRef::Generic);
        }
        Ok(FiberRef::Named(self.use_name(Kind::Fiber)?))
    }

    fn at(&mut self) -> Result<FiberRef> {
        if self.c.eat_kw("at") {
            self.fiber_ref()
        } else {
            Ok(FiberRef::Generic)
        }
    }

    fn field(&mut self) -> Result<Field> {
        if self.c.eat_kw("QQ") {
            return Ok(Field::QQ);
        }
        if self.c.eat_kw("GF") {
            self.c.expect_sym('(')?;
            let p = self.c.int()?;
            self.c.expect_sym(')')?;
            if p < 2 {
                return self.c.err("GF(p) needs a prime p");
            }
            return Ok(Field::GF(p as u64));
        }
        self.c.err("expected 'QQ' or 'GF(p)'")
    }

    fn poly_base(&mut self) -> Result<(Field, Vec<String>)> {
        self.c.expect_kw("poly")?;
        self.c.expect_sym('(')?;
        let f = self.field()?;
        let mut params = Vec::new();
        while self.c.eat_sym(',') {
            params.push(self.c.ident()?);
        }
        self.c.expect_sym(')')?;
        Ok((f, params))
    }

    fn ring(&mut self) -> Result<RingDecl> {
        let name = self.c.ident()?;
        self.c.expect_kw("base")?;
        let base = if self.c.is_kw("poly") {
            let (f, ps) = self.poly_base()?;
            BaseDecl::Poly(f, ps)
        } else if self.c.eat_kw("quotient") {
            self.c.expect_sym('(')?;
            let (f, ps) = self.poly_base()?;
            self.c.expect_sym(',')?;
            self.c.expect_kw("ideal")?;
            let gens = self.expr_list('(', ')')?;
            self.c.expect_sym(')')?;
            BaseDecl::Quotient(f, ps, gens)
        } else {
            BaseDecl::Field(self.field()?)
        };
        self.c.expect_kw("vars")?;
        let vars = self.var_list()?;
        let vars2 = if self.c.eat_kw("vars2") { self.var_list()? } else { vec![] };
        let psi = if self.c.eat_kw("psi") {
            self.c.expect_sym('(')?;
            let a = self.c.int()?;
            self.c.expect_sym(',')?;
            let b = self.c.int()?;
            self.c.expect_sym(')')?;
            Some((a, b))
        } else {
            None
        };
        let order = if self.c.eat_kw("order") {
            if self.c.eat_kw("grevlex") {
                OrderKind::Grevlex
            } else if self.c.eat_kw("lex") {
                OrderKind::Lex
            } else if self.c.eat_kw("block") {
                OrderKind::Block
            } else {
                return self.c.err("expected 'grevlex', 'lex' or 'block'");
            }
        } else {
            OrderKind::Grevlex
        };
        Ok(RingDecl { name, base, vars, vars2, psi, order })
    }

    fn var_list(&mut self) -> Result<Vec<(String, DegLit)>> {
        let mut out = Vec::new();
        loop {
            let n = self.c.ident()?;
            self.c.expect_sym(':')?;
            out.push((n, self.deg()?));
            if !self.c.eat_sym(',') {
                return Ok(out);
            }
        }
    }

    fn deg(&mut self) -> Result<DegLit> {
        if self.c.eat_sym('(') {
            let a = self.c.int()?;
            self.c.expect_sym(',')?;
            let b = self.c.int()?;
            self.c.expect_sym(')')?;
            Ok(DegLit::Z2(a, b))
        } else {
            Ok(DegLit::Z(self.c.int()?))
        }
    }

    fn deg_list(&mut self, open: char, close: char) -> Result<Vec<DegLit>> {
        self.c.expect_sym(open)?;
        let mut out = Vec::new();
        if !self.c.is_sym(close) {
            loop {
                out.push(self.deg()?);
                if !self.c.eat_sym(',') {
                    break;
                }
            }
        }
        self.c.expect_sym(close)?;
        Ok(out)
    }

    fn exprs_until(&mut self, stops: &[char]) -> Result<Vec<Expr>> {
        let mut out = Vec::new();
        if stops.iter().any(|&s| self.c.is_sym(s)) {
            return Ok(out);
        }
        loop {
            out.push(Expr::from_tokens(self.c.expr_tokens()?));
            if !self.c.eat_sym(',') {
                return Ok(out);
            }
        }
    }

    fn expr_list(&mut self, open: char, close: char) -> Result<Vec<Expr>> {
        self.c.expect_sym(open)?;
        let out = self.exprs_until(&[close])?;
        self.c.expect_sym(close)?;
        Ok(out)
    }

    fn usize_arg(&mut self) -> Result<usize> {
        let v = self.c.int()?;
        if v < 0 {
            return self.c.err("expected a nonnegative integer");
        }
        Ok(v as usize)
    }

    fn index_clause(&mut self) -> Result<(usize, Vec<DegLit>)> {
        self.c.expect_kw("index")?;
        let i = self.usize_arg()?;
        self.c.expect_kw("degrees")?;
        Ok((i, self.deg_list('[', ']')?))
    }

    fn command(&mut self) -> Result<Command> {
        let kw = self.c.ident()?;
        let cmd = match kw.as_str() {
            "localcoh" => {
                let module = self.use_name(Kind::Module)?;
                let window = if self.c.eat_kw("window") {
                    if self.c.eat_kw("default") {
                        Window::Default
                    } else {
                        let d = self.deg_list('[', ']')?;
                        if d.len() != 2 {
                            return self.c.err("window takes [lo, hi]");
                        }
                        Window::Range(d[0], d[1])
                    }
                } else if self.c.eat_kw("degrees") {
                    Window::Degrees(self.deg_list('[', ']')?)
                } else {
                    Window::Default
                };
                Command::LocalCoh { module, window, at: self.at()? }
            }
            "loci" => {
                let module = self.use_name(Kind::Module)?;
                let index = if self.c.is_kw("index") { Some(self.index_clause()?) } else { None };
                Command::Loci { module, index }
            }
            "specialize" => {
                let name = self.use_any(&[Kind::Ideal, Kind::Module])?;
                self.c.expect_kw("power")?;
                let power = self.usize_arg()?;
                if power == 0 {
                    return self.c.err("power must be positive");
                }
                Command::Specialize { name, power, at: self.at()? }
            }
            "ratmap" => {
                let forms = self.expr_list('(', ')')?;
                let at = if self.c.eat_kw("sampled") { RatmapAt::Sampled } else { RatmapAt::Fiber(self.at()?) };
                Command::Ratmap { forms, at }
            }
            "invariants" => {
                let module = self.use_name(Kind::Module)?;
                Command::Invariants { module, at: self.at()? }
            }
            "betti" => {
                let module = self.use_name(Kind::Module)?;
                Command::Betti { module, at: self.at()? }
            }
            "harness" => {
                let module = self.use_name(Kind::Module)?;
                let (index, degrees) = self.index_clause()?;
                let mut over = Vec::new();
                if self.c.eat_kw("over") {
                    self.c.expect_sym('[')?;
                    if !self.c.is_sym(']') {
                        loop {
                            over.push(self.fiber_ref()?);
                            if !self.c.eat_sym(',') {
                                break;
                            }
                        }
                    }
                    self.c.expect_sym(']')?;
                }
                let random = if self.c.eat_kw("random") { self.usize_arg()? } else { 8 };
                Command::Harness { module, index, degrees, over, random }
            }
            _ => return self.c.err(format!("unknown command '{kw}'")),
        };
        Ok(cmd)
    }
}

fn join<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl fmt::Display for DegLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegLit::Z(a) => write!(f, "{a}"),
            DegLit::Z2(a, b) => write!(f, "({a}, {b})"),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::QQ => f.write_str("QQ"),
            Field::GF(p) => write!(f, "GF({p})"),
        }
    }
}

impl fmt::Display for FiberRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberRef::Named(n) => f.write_str(n),
            FiberRef::Generic => f.write_str("generic"),
        }
    }
}

fn poly_base(field: &Field, params: &[String]) -> String {
    let mut s = format!("poly({field}");
    for p in params {
        s.push_str(&format!(", {p}"));
    }
    s.push(')');
    s
}

fn vars_text(vs: &[(String, DegLit)]) -> String {
    vs.iter().map(|(n, d)| format!("{n}:{d}")).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for Decl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decl::Ring(r) => {
                let base = match &r.base {
                    BaseDecl::Field(k) => k.to_string(),
                    BaseDecl::Poly(k, ps) => poly_base(k, ps),
                    BaseDecl::Quotient(k, ps, gens) => format!("quotient({}, ideal({}))", poly_base(k, ps), join(gens)),
                };
                write!(f, "ring {} base {base} vars {}", r.name, vars_text(&r.vars))?;
                if !r.vars2.is_empty() {
                    write!(f, " vars2 {}", vars_text(&r.vars2))?;
                }
                if let Some((a, b)) = r.psi {
                    write!(f, " psi ({a}, {b})")?;
                }
                let order = match r.order {
                    OrderKind::Grevlex => "grevlex",
                    OrderKind::Lex => "lex",
                    OrderKind::Block => "block",
                };
                write!(f, " order {order}")
            }
            Decl::Ideal { name, gens } => write!(f, "ideal {name} = ({})", join(gens)),
            Decl::Module { name, def } => match def {
                ModuleDef::Coker { rows, shifts } => {
                    let rows: Vec<String> = rows.iter().map(|r| join(r)).collect();
                    write!(f, "module {name} = coker [{}]", rows.join("; "))?;
                    if !shifts.is_empty() {
                        write!(f, " shifts ({})", join(shifts))?;
                    }
                    Ok(())
                }
                ModuleDef::Quotient(i) => write!(f, "module {name} = quotient {i}"),
                ModuleDef::Ideal(i) => write!(f, "module {name} = ideal {i}"),
            },
            Decl::Fiber { name, def } => match def {
                FiberDef::Generic => write!(f, "fiber {name} = generic"),
                FiberDef::Point(vals) => {
                    let v: Vec<String> = vals.iter().map(|(z, e)| format!("{z}={e}")).collect();
                    write!(f, "fiber {name} = point({})", v.join(", "))
                }
                FiberDef::Prime(gens) => write!(f, "fiber {name} = prime({})", join(gens)),
            },
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Command::LocalCoh { module, window, at } => {
                write!(f, "cmd localcoh {module}")?;
                match window {
                    Window::Default => {}
                    Window::Range(a, b) => write!(f, " window [{a}, {b}]")?,
                    Window::Degrees(ds) => write!(f, " degrees [{}]", join(ds))?,
                }
                write!(f, " at {at}")
            }
            Command::Loci { module, index } => {
                write!(f, "cmd loci {module}")?;
                if let Some((i, ds)) = index {
                    write!(f, " index {i} degrees [{}]", join(ds))?;
                }
                Ok(())
            }
            Command::Specialize { name, power, at } => write!(f, "cmd specialize {name} power {power} at {at}"),
            Command::Ratmap { forms, at } => {
                write!(f, "cmd ratmap ({})", join(forms))?;
                match at {
                    RatmapAt::Sampled => write!(f, " sampled"),
                    RatmapAt::Fiber(p) => write!(f, " at {p}"),
                }
            }
            Command::Invariants { module, at } => write!(f, "cmd invariants {module} at {at}"),
            Command::Betti { module, at } => write!(f, "cmd betti {module} at {at}"),
            Command::Harness { module, index, degrees, over, random } => {
                write!(f, "cmd harness {module} index {index} degrees [{}]", join(degrees))?;
                if !over.is_empty() {
                    write!(f, " over [{}]", join(over))?;
                }
                write!(f, " random {random}")
            }
        }
    }
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.decls {
            writeln!(f, "{d};")?;
        }
        for c in &self.commands {
            writeln!(f, "{c};")?;
        }
        Ok(())
    }
}

/// Knobs shared by every command of a run.
#[derive(Clone, Debug)]
#[derive(Default)]
pub struct RunOptions {
    pub seed: u64,
    pub window_slack: i64,
    pub power_cutoff: Option<usize>,
}


/// Result of one command: the JSON document and an optional CSV mirror.
#[derive(Clone, Debug)]
pub struct CommandOutput {
    /// file stem such as `01_localcoh`
    pub stem: String,
    pub json: Value,
    pub csv: Option<String>,
    pub error: Option<String>,
}

/// Built ring and named objects of a script.
pub struct Session {
    pub script: Script,
    pub ring: Ring,
    ideals: HashMap<String, Vec<Poly>>,
    modules: HashMap<String, ModulePresentation>,
    fibers: HashMap<String, FiberPoint>,
}

fn base_kind(b: &BaseDecl) -> BaseKind {
    match b {
        BaseDecl::Field(k) => BaseKind::Field { p: k.p() },
        BaseDecl::Poly(k, ps) => BaseKind::Poly { p: k.p(), params: ps.clone() },
        BaseDecl::Quotient(k, ps, gens) => BaseKind::Quotient {
            p: k.p(),
            params: ps.clone(),
            ideal: gens.iter().map(|g| g.text.clone()).collect(),
            components: None,
        },
    }
}

fn ring_from_decl(r: &RingDecl) -> Result<Ring> {
    let all = r.vars.iter().chain(&r.vars2);
    let rank2 = all.clone().any(|(_, d)| matches!(d, DegLit::Z2(..)));
    if rank2 && all.clone().any(|(_, d)| matches!(d, DegLit::Z(_))) {
        return Err(Error::BadBigrading("mix of ZZ and ZZ^2 degrees".into()));
    }
    if !r.vars2.is_empty() && !rank2 {
        return Err(Error::BadBigrading("vars2 needs bidegrees".into()));
    }
    let conv = |vs: &[(String, DegLit)]| vs.iter().map(|(n, d)| (n.clone(), d.degree())).collect();
    Ring::new(&RingDescriptor {
        base: base_kind(&r.base),
        xvars: conv(&r.vars),
        yvars: conv(&r.vars2),
        grading_rank: if rank2 { 2 } else { 1 },
        psi: r.psi,
        order: r.order,
    })
}

fn constant(ring: &Ring, e: &Expr) -> Result<Coeff> {
    e.poly(ring)?
        .constant_value()
        .ok_or_else(|| Error::Invalid(format!("'{}' is not a constant", e.text)))
}

impl Session {
    pub fn new(script: Script) -> Result<Session> {
        let Some(Decl::Ring(rd)) = script.decls.first() else {
            return Err(Error::Invalid("script declares no ring".into()));
        };
        let ring = ring_from_decl(rd)?;
        let mut s =
            Session { script: Script::default(), ring, ideals: HashMap::new(), modules: HashMap::new(), fibers: HashMap::new() };
        for d in &script.decls[1..] {
            s.declare(d)?;
        }
        s.script = script;
        Ok(s)
    }

    pub fn from_text(src: &str) -> Result<Session> {
        Session::new(Script::parse(src)?)
    }

    fn declare(&mut self, d: &Decl) -> Result<()> {
        let ring = self.ring.clone();
        match d {
            Decl::Ring(_) => return Err(Error::Invalid("only one ring per script".into())),
            Decl::Ideal { name, gens } => {
                let g = gens.iter().map(|e| e.poly(&ring)).collect::<Result<Vec<_>>>()?;
                self.ideals.insert(name.clone(), g);
            }
            Decl::Module { name, def } => {
                let m = match def {
                    ModuleDef::Coker { rows, shifts } => {
                        let rows = rows
                            .iter()
                            .map(|r| r.iter().map(|e| e.poly(&ring)).collect::<Result<Vec<_>>>())
                            .collect::<Result<Vec<_>>>()?;
                        let shifts: Vec<Degree> = if shifts.is_empty() {
                            vec![Degree::ZERO; rows.len()]
                        } else {
                            shifts.iter().map(|d| d.degree()).collect()
                        };
                        let target = FreeModule::new(&ring, shifts);
                        ModulePresentation::from_matrix(target, Matrix::from_rows(&ring, rows))?
                    }
                    ModuleDef::Quotient(i) => ModulePresentation::quotient(&ring, &self.ideals[i])?,
                    ModuleDef::Ideal(i) => ModulePresentation::ideal(&ring, &self.ideals[i])?,
                };
                self.modules.insert(name.clone(), m);
            }
            Decl::Fiber { name, def } => {
                let p = match def {
                    FiberDef::Generic => FiberPoint::Generic,
                    FiberDef::Point(vals) => {
                        let cs = vals.iter().map(|(_, e)| constant(&ring, e)).collect::<Result<Vec<_>>>()?;
                        let pairs: Vec<(&str, Coeff)> = vals.iter().map(|(z, _)| z.as_str()).zip(cs).collect();
                        FiberPoint::closed(&ring, &pairs)?
                    }
                    FiberDef::Prime(gens) => FiberPoint::Prime(gens.iter().map(|e| e.poly(&ring)).collect::<Result<_>>()?),
                };
                Fiber::new(&ring, p.clone())?;
                self.fibers.insert(name.clone(), p);
            }
        }
        Ok(())
    }

    fn point(&self, f: &FiberRef) -> FiberPoint {
        match f {
            FiberRef::Generic => FiberPoint::Generic,
            FiberRef::Named(n) => self.fibers[n].clone(),
        }
    }

    fn fiber(&self, f: &FiberRef) -> Result<Fiber> {
        Fiber::new(&self.ring, self.point(f))
    }

    /// Run every command in order. Errors are recorded per command.
    pub fn run(&self, opts: &RunOptions) -> Vec<CommandOutput> {
        self.script
            .commands
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let stem = format!("{:02}_{}", k + 1, c.name());
                let mut doc = json!({ "command": c.to_string(), "seed": opts.seed });
                let (csv, error) = match self.run_one(c, opts) {
                    Ok((v, csv)) => {
                        doc["result"] = v;
                        (csv, None)
                    }
                    Err(e) => {
                        doc["error"] = Value::String(e.to_string());
                        (None, Some(e.to_string()))
                    }
                };
                CommandOutput { stem, json: doc, csv, error }
            })
            .collect()
    }

    fn run_one(&self, c: &Command, opts: &RunOptions) -> Result<(Value, Option<String>)> {
        let ring = &self.ring;
        match c {
            Command::LocalCoh { module, window, at } => {
                let fib = self.fiber(at)?;
                let mut lc = LocalCohomology::new(&self.modules[module], &fib)?;
                let degrees = match window {
                    Window::Default => lc.default_window(opts.window_slack),
                    Window::Degrees(ds) => ds.iter().map(|d| d.degree()).collect(),
                    Window::Range(lo, hi) => {
                        let (lo, hi) = (lo.degree(), hi.degree());
                        let mut out = Vec::new();
                        for a in lo.0..=hi.0 {
                            for b in lo.1..=hi.1 {
                                out.push(Degree(a, b));
                            }
                        }
                        out
                    }
                };
                let table = if lc.route_b_available() { lc.cross_validate(&degrees)? } else { lc.table_a(&degrees) };
                let csv = table.to_csv();
                Ok((serde_json::to_value(&table).unwrap(), Some(csv)))
            }
            Command::Invariants { module, at } => {
                let fib = self.fiber(at)?;
                let inv = LocalCohomology::new(&self.modules[module], &fib)?.invariants()?;
                Ok((serde_json::to_value(inv).unwrap(), None))
            }
            Command::Betti { module, at } => {
                let fib = self.fiber(at)?;
                let ev = fib.presentation(&self.modules[module]);
                let res = free_resolution(&ev, ev.ring().nvars() + 1)?;
                let res = if fib.ring.base_is_field() { minimalize(&res)? } else { res };
                let b = res.betti();
                Ok((json!({ "fiber": fib.to_string(), "betti": b.to_json() }), Some(b.to_csv())))
            }
            Command::Loci { module, index } => {
                let m = &self.modules[module];
                let part = |r: Result<Value>| r.unwrap_or_else(|e| json!({ "error": e.to_string() }));
                let (nonfree, slack) = nonfree_locus_stable(m, opts.window_slack)?;
                let cert = part(dense_open_certificate(&nonfree, opts.seed).map(|c| c.to_json()));
                let mut v = json!({
                    "nonfree": nonfree.to_json(),
                    "window_slack": slack,
                    "certificate": cert,
                });
                if ring.grading_rank == 1 && !ring.is_bigraded() {
                    v["duality_exclusion"] = part(duality_exclusion_locus(m, opts.window_slack).map(|l| l.to_json()));
                }
                if let Some((i, ds)) = index {
                    let degs: Vec<Degree> = ds.iter().map(|d| d.degree()).collect();
                    v["local_cohomology"] = part(local_cohomology_locus(m, *i, &degs, opts.window_slack).map(|l| l.to_json()));
                }
                Ok((v, None))
            }
            Command::Specialize { name, power, at } => {
                let fib = self.fiber(at)?;
                if let Some(gens) = self.ideals.get(name) {
                    let bundle = PowersBundle::for_ideal(ring, gens)?;
                    let sp = specialize_power(&bundle, *power, &fib);
                    let spec = ideal_gb(&fib.ring, &sp.ideal_generators());
                    let evaluated: Vec<Poly> =
                        ideal_power_gens(ring, gens, *power as u32).iter().map(|g| fib.poly(g)).collect();
                    let evaluated = ideal_gb(&fib.ring, &evaluated);
                    let agrees = ideals_equal(&fib.ring, &spec, &evaluated);
                    Ok((
                        json!({
                            "fiber": fib.to_string(),
                            "k": power,
                            "specialized_power": spec.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                            "evaluated_power": evaluated.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                            "agrees": agrees,
                        }),
                        None,
                    ))
                } else {
                    let bundle = PowersBundle::new(&self.modules[name], opts.seed)?;
                    let sp = specialize_power(&bundle, *power, &fib);
                    let gens: Vec<Vec<String>> =
                        sp.generators().iter().map(|c| c.iter().map(|p| p.to_string()).collect()).collect();
                    Ok((
                        json!({
                            "fiber": fib.to_string(),
                            "k": power,
                            "rank": bundle.rank(),
                            "ambient_shifts": sp.ambient.shifts.iter().map(|d| d.to_vec(ring.grading_rank)).collect::<Vec<_>>(),
                            "generators": gens,
                        }),
                        None,
                    ))
                }
            }
            Command::Ratmap { forms, at } => {
                let g = forms.iter().map(|e| e.poly(ring)).collect::<Result<Vec<_>>>()?;
                let map = RationalMapData::new(ring, g)?;
                let cutoff = opts.power_cutoff.unwrap_or_else(|| map.default_cutoff());
                match at {
                    RatmapAt::Fiber(f) => {
                        let fm = FiberMap::new(&map, self.point(f))?;
                        let inv = fm.invariants(cutoff, opts.seed)?;
                        let image: Vec<String> = fm.image_ideal()?.iter().map(|p| p.to_string()).collect();
                        let mut v = serde_json::to_value(inv).unwrap();
                        v["image_ideal"] = json!(image);
                        v["cutoff"] = json!(cutoff);
                        Ok((v, None))
                    }
                    RatmapAt::Sampled => {
                        let sampler = Sampler { seed: opts.seed, ..Sampler::default() };
                        let pts: Vec<FiberPoint> = sampler.points(ring).into_iter().filter(|p| p.is_closed()).collect();
                        let rep = constancy_report(&map, &pts, cutoff, opts.seed)?;
                        Ok((serde_json::to_value(rep).unwrap(), None))
                    }
                }
            }
            Command::Harness { module, index, degrees, over, random } => {
                let m = &self.modules[module];
                let degs: Vec<Degree> = degrees.iter().map(|d| d.degree()).collect();
                let locus = local_cohomology_locus(m, *index, &degs, opts.window_slack)?;
                let sampler = Sampler {
                    random: *random,
                    seed: opts.seed,
                    extra: over.iter().map(|f| self.point(f)).collect(),
                    ..Sampler::default()
                };
                let pts = sampler.points(ring);
                let q = |f: &Fiber| local_cohomology_table(m, &[*index], &degs, f);
                let verdict = locally_constant_harness(ring, &q, &locus, &pts, opts.seed)?;
                let mut csv = String::from("fiber,in_locus,agrees,quantity,value\n");
                for fo in &verdict.fibers {
                    let t: BTreeMap<String, usize> = fo.table.clone().unwrap_or_default();
                    for (k, v) in &t {
                        csv.push_str(&format!("\"{}\",{},{},{},{}\n", fo.fiber, fo.in_locus, fo.agrees, k, v));
                    }
                }
                Ok((serde_json::to_value(verdict).unwrap(), Some(csv)))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const KATZMAN: &str = "
        # bigraded hypersurface over QQ[s,t]
        ring R base poly(QQ, s, t) vars u:(1,0), v:(1,0) vars2 x:(0,1), y:(0,1) order block;
        ideal F = (s*x^2*v^2 - (t+s)*x*y*u*v + t*y^2*u^2);
        module M = quotient F;
        fiber on = point(s=1, t=-1);
        fiber off = point(s=1, t=2);
        cmd localcoh M degrees [(-2, 2)] at on;
        cmd localcoh M degrees [(-2, 2)] at off;
    ";

    #[test]
    fn minimal_script() {
        let s = Script::parse("ring R base QQ vars x:1, y:1 order grevlex;\nmodule M = coker [0];\ncmd invariants M;").unwrap();
        assert_eq!((s.decls.len(), s.commands.len()), (2, 1));
    }

    #[test]
    fn katzman_parses_and_round_trips() {
        let s = Script::parse(KATZMAN).unwrap();
        assert_eq!(s.decls.len(), 5);
        assert_eq!(
            s.commands[0],
            Command::LocalCoh {
                module: "M".into(),
                window: Window::Degrees(vec![DegLit::Z2(-2, 2)]),
                at: FiberRef::Named("on".into())
            }
        );
        let text = s.to_string();
        assert!(text.contains("ideal F = (s*x^2*v^2-(t+s)*x*y*u*v+t*y^2*u^2);"));
        assert_eq!(Script::parse(&text).unwrap(), s);
    }

    #[test]
    fn katzman_runs() {
        let out = Session::from_text(KATZMAN).unwrap().run(&RunOptions::default());
        let dim = |o: &CommandOutput| {
            o.json["result"]["rows"].as_array().unwrap().iter().find(|r| r["i"] == 2).unwrap()["dim"].as_u64().unwrap()
        };
        assert_eq!((dim(&out[0]), dim(&out[1])), (1, 0));
        assert_eq!(out[0].stem, "01_localcoh");
    }

    #[test]
    fn missing_semicolon_location() {
        let src = "ring R base QQ vars x:1 order grevlex\nideal I = (x);";
        match Script::parse(src) {
            Err(Error::Parse { line, col, offset, .. }) => assert_eq!((line, col, offset), (2, 1, 38)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn undeclared_names() {
        let src = "ring R base QQ vars x:1;\ncmd invariants N;";
        assert_eq!(Script::parse(src), Err(Error::UndeclaredName("N".into())));
        let src = "ring R base QQ vars x:1;\nideal I = (x);\ncmd betti I;";
        assert_eq!(Script::parse(src), Err(Error::UndeclaredName("I".into())));
    }

    #[test]
    fn plane_invariants_json() {
        let out = Session::from_text("ring R base QQ vars x:1, y:1;\nmodule M = coker [0];\ncmd invariants M;")
            .unwrap()
            .run(&RunOptions::default());
        assert_eq!(out[0].json["result"], json!({"dim": 2, "depth": 2, "a": [null, null, -2], "reg": 0}));
    }

    #[test]
    fn empty_command_list() {
        let out = Session::from_text("ring R base QQ vars x:1;").unwrap().run(&RunOptions::default());
        assert!(out.is_empty());
    }
}
