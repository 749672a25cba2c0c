//! Exact coefficient arithmetic: rationals with a machine-word fast path and
//! word-size prime fields.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational in lowest terms with positive denominator.
///
/// Values that fit in `i64/i64` are kept unboxed; anything else spills to
/// a `BigRational`. A `Big` value never fits the small representation.
#[derive(Clone, Debug)]
pub enum Rat {
    Small(i64, i64),
    Big(Box<BigRational>),
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rat {
    pub fn zero() -> Self {
        Rat::Small(0, 1)
    }

    pub fn one() -> Self {
        Rat::Small(1, 1)
    }

    pub fn from_int(n: i64) -> Self {
        Rat::Small(n, 1)
    }

    pub fn new(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Self::from_i128(n as i128, d as i128)
    }

    fn from_i128(n: i128, d: i128) -> Self {
        let g = gcd_i128(n, d);
        let (mut n, mut d) = if g > 1 { (n / g, d / g) } else { (n, d) };
        if d < 0 {
            n = -n;
            d = -d;
        }
        if n == 0 {
            return Rat::Small(0, 1);
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(a), Ok(b)) if a != i64::MIN => Rat::Small(a, b),
            _ => Rat::Big(Box::new(BigRational::new(BigInt::from(n), BigInt::from(d)))),
        }
    }

    pub fn from_big(r: BigRational) -> Self {
        if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
            if n != i64::MIN {
                return Rat::Small(n, d);
            }
        }
        Rat::Big(Box::new(r))
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rat::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rat::Big(b) => (**b).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rat::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Rat::Small(1, 1))
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Rat::Small(_, d) => *d == 1,
            Rat::Big(b) => b.is_integer(),
        }
    }

    pub fn signum(&self) -> i32 {
        match self {
            Rat::Small(n, _) => n.signum() as i32,
            Rat::Big(b) => {
                if b.is_negative() {
                    -1
                } else {
                    1
                }
            }
        }
    }

    pub fn numer_big(&self) -> BigInt {
        match self {
            Rat::Small(n, _) => BigInt::from(*n),
            Rat::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom_big(&self) -> BigInt {
        match self {
            Rat::Small(_, d) => BigInt::from(*d),
            Rat::Big(b) => b.denom().clone(),
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Rat::Small(n, 1) => Some(*n),
            _ => None,
        }
    }

    pub fn inv(&self) -> Rat {
        match self {
            Rat::Small(0, _) => panic!("division by zero"),
            Rat::Small(n, d) => Self::from_i128(*d as i128, *n as i128),
            Rat::Big(b) => Self::from_big(b.recip()),
        }
    }

    pub fn add_ref(&self, o: &Rat) -> Rat {
        match (self, o) {
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    if let Some(s) = a.checked_add(*c) {
                        if s != i64::MIN {
                            return Rat::Small(s, 1);
                        }
                    }
                }
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                match a.checked_mul(d).zip(c.checked_mul(b)).and_then(|(x, y)| x.checked_add(y)) {
                    Some(n) => Self::from_i128(n, b * d),
                    None => Self::from_big(self.to_big() + o.to_big()),
                }
            }
            _ => Self::from_big(self.to_big() + o.to_big()),
        }
    }

    pub fn mul_ref(&self, o: &Rat) -> Rat {
        match (self, o) {
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    if let Some(p) = a.checked_mul(*c) {
                        if p != i64::MIN {
                            return Rat::Small(p, 1);
                        }
                    }
                }
                Self::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Self::from_big(self.to_big() * o.to_big()),
        }
    }

    pub fn neg_ref(&self) -> Rat {
        match self {
            Rat::Small(n, d) => Rat::Small(-n, *d),
            Rat::Big(b) => Self::from_big(-(**b).clone()),
        }
    }

    /// Residue modulo a word-size prime; panics when `p` divides the denominator.
    pub fn mod_p(&self, p: u64) -> u64 {
        let pb = BigInt::from(p);
        let n = self.numer_big().mod_floor(&pb).to_u64().unwrap();
        let d = self.denom_big().mod_floor(&pb).to_u64().unwrap();
        assert!(d != 0, "denominator vanishes modulo {p}");
        mulmod(n, powmod(d, p - 2, p), p)
    }
}

impl PartialEq for Rat {
    fn eq(&self, o: &Rat) -> bool {
        match (self, o) {
            (Rat::Small(a, b), Rat::Small(c, d)) => a == c && b == d,
            (Rat::Big(x), Rat::Big(y)) => x == y,
            _ => false,
        }
    }
}

impl Eq for Rat {}

impl PartialOrd for Rat {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Rat {
    fn cmp(&self, o: &Self) -> Ordering {
        match (self, o) {
            (Rat::Small(a, b), Rat::Small(c, d)) => (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128)),
            _ => self.to_big().cmp(&o.to_big()),
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rat::Small(n, 1) => write!(f, "{n}"),
            Rat::Small(n, d) => write!(f, "{n}/{d}"),
            Rat::Big(b) => {
                if b.is_integer() {
                    write!(f, "{}", b.numer())
                } else {
                    write!(f, "{}/{}", b.numer(), b.denom())
                }
            }
        }
    }
}

pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

/// A coefficient: rational, or an element of `GF(p)` for a word-size prime.
///
/// Mixed operations coerce the rational side into the prime field, so the
/// generic constants `Coeff::zero()` and `Coeff::one()` work in any ring.
#[derive(Clone, Debug)]
pub enum Coeff {
    Q(Rat),
    Zp { v: u64, p: u64 },
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff::Q(Rat::zero())
    }

    pub fn one() -> Self {
        Coeff::Q(Rat::one())
    }

    pub fn from_int(n: i64) -> Self {
        Coeff::Q(Rat::from_int(n))
    }

    pub fn rational(n: i64, d: i64) -> Self {
        Coeff::Q(Rat::new(n, d))
    }

    pub fn modp(n: i64, p: u64) -> Self {
        let v = (n as i128).rem_euclid(p as i128) as u64;
        Coeff::Zp { v, p }
    }

    /// Coerce into the field of the given characteristic (0 = rationals).
    pub fn in_char(self, p: u64) -> Self {
        match (self, p) {
            (c, 0) => c,
            (Coeff::Q(r), p) => Coeff::Zp { v: r.mod_p(p), p },
            (c @ Coeff::Zp { .. }, _) => c,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Q(r) => r.is_zero(),
            Coeff::Zp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coeff::Q(r) => r.is_one(),
            Coeff::Zp { v, .. } => *v == 1,
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Coeff::Q(_) => 0,
            Coeff::Zp { p, .. } => *p,
        }
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        match self {
            Coeff::Q(r) => Some(r),
            _ => None,
        }
    }

    fn lift_pair<'a>(a: &'a Coeff, b: &'a Coeff) -> (Coeff, Coeff) {
        match (a, b) {
            (Coeff::Q(_), Coeff::Zp { p, .. }) => (a.clone().in_char(*p), b.clone()),
            (Coeff::Zp { p, .. }, Coeff::Q(_)) => (a.clone(), b.clone().in_char(*p)),
            _ => (a.clone(), b.clone()),
        }
    }

    pub fn add_ref(&self, o: &Coeff) -> Coeff {
        match (self, o) {
            (Coeff::Q(a), Coeff::Q(b)) => Coeff::Q(a.add_ref(b)),
            (Coeff::Zp { v: a, p }, Coeff::Zp { v: b, p: q }) => {
                assert_eq!(p, q, "mixed characteristics");
                Coeff::Zp { v: ((*a as u128 + *b as u128) % *p as u128) as u64, p: *p }
            }
            _ => {
                let (a, b) = Self::lift_pair(self, o);
                a.add_ref(&b)
            }
        }
    }

    pub fn mul_ref(&self, o: &Coeff) -> Coeff {
        match (self, o) {
            (Coeff::Q(a), Coeff::Q(b)) => Coeff::Q(a.mul_ref(b)),
            (Coeff::Zp { v: a, p }, Coeff::Zp { v: b, p: q }) => {
                assert_eq!(p, q, "mixed characteristics");
                Coeff::Zp { v: mulmod(*a, *b, *p), p: *p }
            }
            _ => {
                let (a, b) = Self::lift_pair(self, o);
                a.mul_ref(&b)
            }
        }
    }

    pub fn neg_ref(&self) -> Coeff {
        match self {
            Coeff::Q(a) => Coeff::Q(a.neg_ref()),
            Coeff::Zp { v, p } => Coeff::Zp { v: if *v == 0 { 0 } else { p - v }, p: *p },
        }
    }

    pub fn sub_ref(&self, o: &Coeff) -> Coeff {
        self.add_ref(&o.neg_ref())
    }

    pub fn inv(&self) -> Coeff {
        match self {
            Coeff::Q(a) => Coeff::Q(a.inv()),
            Coeff::Zp { v, p } => {
                assert!(*v != 0, "division by zero");
                Coeff::Zp { v: powmod(*v, p - 2, *p), p: *p }
            }
        }
    }

    pub fn div_ref(&self, o: &Coeff) -> Coeff {
        self.mul_ref(&o.inv())
    }

    pub fn pow(&self, e: u32) -> Coeff {
        let mut r = Coeff::one();
        for _ in 0..e {
            r = r.mul_ref(self);
        }
        r
    }
}

impl PartialEq for Coeff {
    fn eq(&self, o: &Coeff) -> bool {
        match (self, o) {
            (Coeff::Q(a), Coeff::Q(b)) => a == b,
            (Coeff::Zp { v: a, p }, Coeff::Zp { v: b, p: q }) => p == q && a == b,
            _ => {
                let (a, b) = Self::lift_pair(self, o);
                a == b
            }
        }
    }
}

impl Eq for Coeff {}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Q(r) => write!(f, "{r}"),
            Coeff::Zp { v, p } => {
                // symmetric representative reads better in output
                if *v > p / 2 {
                    write!(f, "-{}", p - v)
                } else {
                    write!(f, "{v}")
                }
            }
        }
    }
}

impl Add for Coeff {
    type Output = Coeff;
    fn add(self, o: Coeff) -> Coeff {
        self.add_ref(&o)
    }
}

impl Sub for Coeff {
    type Output = Coeff;
    fn sub(self, o: Coeff) -> Coeff {
        self.sub_ref(&o)
    }
}

impl Mul for Coeff {
    type Output = Coeff;
    fn mul(self, o: Coeff) -> Coeff {
        self.mul_ref(&o)
    }
}

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        self.neg_ref()
    }
}

impl Zero for Rat {
    fn zero() -> Self {
        Rat::zero()
    }
    fn is_zero(&self) -> bool {
        Rat::is_zero(self)
    }
}

impl Add for Rat {
    type Output = Rat;
    fn add(self, o: Rat) -> Rat {
        self.add_ref(&o)
    }
}

impl Mul for Rat {
    type Output = Rat;
    fn mul(self, o: Rat) -> Rat {
        self.mul_ref(&o)
    }
}

impl One for Rat {
    fn one() -> Self {
        Rat::one()
    }
}
