//! Arithmetic in the finite field F_q with q = p^s, s <= 4.
//!
//! Elements are stored as base-p digit vectors packed into a small fixed
//! array, representing polynomials over the prime field modulo a fixed
//! monic irreducible of degree s. The modulus is found deterministically
//! at context construction, so element encodings are reproducible.
//!
//! The context also carries factorial tables modulo p, used for binomial
//! coefficients via the base-p digit product rule.

use alloc::vec::Vec;
use core::fmt;

/// Largest admissible characteristic (exclusive).
pub const MAX_P: u64 = 1 << 16;

/// Largest admissible extension degree.
pub const MAX_S: u32 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GfError {
    NotPrime(u64),
    BadExtensionDegree(u32),
    CharTooLarge(u64),
    NotAPowerOf { q: u64, p: u64 },
    CodeOutOfRange { code: u64, q: u64 },
}

impl fmt::Display for GfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GfError::NotPrime(p) => write!(f, "{} is not prime", p),
            GfError::BadExtensionDegree(s) => {
                write!(f, "extension degree {} not in 1..={}", s, MAX_S)
            }
            GfError::CharTooLarge(p) => write!(f, "characteristic {} exceeds {}", p, MAX_P - 1),
            GfError::NotAPowerOf { q, p } => {
                write!(f, "{} is not a power p^s of {} with s <= {}", q, p, MAX_S)
            }
            GfError::CodeOutOfRange { code, q } => {
                write!(f, "element code {} out of range for field of size {}", code, q)
            }
        }
    }
}

/// An element of F_q: digit i is the coefficient of x^i in the residue
/// polynomial. Only meaningful relative to the [`GfCtx`] that made it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GfEl {
    digits: [u16; MAX_S as usize],
}

impl GfEl {
    pub const ZERO: GfEl = GfEl { digits: [0; 4] };

    pub fn is_zero(&self) -> bool {
        self.digits == [0; 4]
    }
}

/// Field context: characteristic, extension degree, modulus polynomial,
/// and factorial tables for binomial coefficients modulo p.
#[derive(Debug, Clone)]
pub struct GfCtx {
    p: u64,
    s: u32,
    q: u64,
    /// Monic modulus of degree s: coefficients of 1, x, .., x^s.
    modulus: [u64; MAX_S as usize + 1],
    fact: Vec<u64>,
    inv_fact: Vec<u64>,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// Dense polynomial over F_p of low degree, used only for the modulus search.
type SmallPoly = Vec<u64>;

fn poly_trim(a: &mut SmallPoly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &SmallPoly, b: &SmallPoly, p: u64) -> SmallPoly {
    let mut r = a.clone();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = pow_mod(b[db], p - 2, p);
    while r.len() > db {
        let k = r.len() - 1;
        let c = r[k] * lead_inv % p;
        if c != 0 {
            for j in 0..=db {
                let idx = k - db + j;
                r[idx] = (r[idx] + c * (p - b[j] % p)) % p;
            }
        }
        r.pop();
        poly_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn poly_mul(a: &SmallPoly, b: &SmallPoly, p: u64) -> SmallPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = alloc::vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

fn poly_gcd(mut a: SmallPoly, mut b: SmallPoly, p: u64) -> SmallPoly {
    poly_trim(&mut a);
    poly_trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// x^p modulo f, by square-and-multiply.
fn x_pow_p_mod(f: &SmallPoly, p: u64) -> SmallPoly {
    let mut acc: SmallPoly = alloc::vec![1];
    let mut base: SmallPoly = alloc::vec![0, 1];
    let mut e = p;
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_rem(&poly_mul(&acc, &base, p), f, p);
        }
        base = poly_rem(&poly_mul(&base, &base, p), f, p);
        e >>= 1;
    }
    acc
}

/// Evaluate the polynomial u at the polynomial arg, modulo f.
fn poly_compose_mod(u: &SmallPoly, arg: &SmallPoly, f: &SmallPoly, p: u64) -> SmallPoly {
    let mut acc: SmallPoly = Vec::new();
    for &c in u.iter().rev() {
        acc = poly_rem(&poly_mul(&acc, arg, p), f, p);
        if c != 0 {
            if acc.is_empty() {
                acc = alloc::vec![c];
            } else {
                acc[0] = (acc[0] + c) % p;
            }
        }
    }
    acc
}

fn has_root(f: &SmallPoly, p: u64) -> bool {
    for a in 0..p {
        let mut v = 0u64;
        for &c in f.iter().rev() {
            v = (v * a + c) % p;
        }
        if v == 0 {
            return true;
        }
    }
    false
}

fn is_irreducible(f: &SmallPoly, p: u64) -> bool {
    let deg = f.len() - 1;
    if deg == 1 {
        return true;
    }
    if has_root(f, p) {
        return false;
    }
    if deg <= 3 {
        return true;
    }
    // Degree 4 with no roots: exclude a pair of quadratic factors by
    // checking that f has no root in the degree-2 extension.
    let xp = x_pow_p_mod(f, p);
    let mut xpp = poly_compose_mod(&xp, &xp, f, p);
    // xpp = x^(p^2) mod f; subtract x and take a gcd with f.
    if xpp.len() < 2 {
        xpp.resize(2, 0);
    }
    xpp[1] = (xpp[1] + p - 1) % p;
    let g = poly_gcd(f.clone(), xpp, p);
    g.len() == 1
}

impl GfCtx {
    /// Prime field context.
    pub fn prime(p: u64) -> Result<GfCtx, GfError> {
        GfCtx::new(p, 1)
    }

    /// Context for F_{p^s}. The modulus is the deterministically first
    /// monic irreducible of degree s in the base-p counting order of its
    /// lower coefficients.
    pub fn new(p: u64, s: u32) -> Result<GfCtx, GfError> {
        if p >= MAX_P {
            return Err(GfError::CharTooLarge(p));
        }
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if s == 0 || s > MAX_S {
            return Err(GfError::BadExtensionDegree(s));
        }
        let q = p.pow(s);
        let mut modulus = [0u64; MAX_S as usize + 1];
        modulus[s as usize] = 1;
        if s > 1 {
            let mut found = false;
            'search: for code in 0..q {
                let mut f: SmallPoly = alloc::vec![0; s as usize + 1];
                f[s as usize] = 1;
                let mut c = code;
                for item in f.iter_mut().take(s as usize) {
                    *item = c % p;
                    c /= p;
                }
                if is_irreducible(&f, p) {
                    for (i, &c) in f.iter().enumerate() {
                        modulus[i] = c;
                    }
                    found = true;
                    break 'search;
                }
            }
            debug_assert!(found, "an irreducible polynomial of each degree exists");
        }
        let mut fact = alloc::vec![1u64; p as usize];
        for i in 1..p as usize {
            fact[i] = fact[i - 1] * i as u64 % p;
        }
        let mut inv_fact = alloc::vec![1u64; p as usize];
        inv_fact[p as usize - 1] = pow_mod(fact[p as usize - 1], p - 2, p);
        for i in (1..p as usize).rev() {
            inv_fact[i - 1] = inv_fact[i] * i as u64 % p;
        }
        Ok(GfCtx { p, s, q, modulus, fact, inv_fact })
    }

    /// Context from a prescribed field size q = p^s.
    pub fn from_q(p: u64, q: u64) -> Result<GfCtx, GfError> {
        let mut s = 0u32;
        let mut acc = 1u64;
        while acc < q && s <= MAX_S {
            acc = acc.saturating_mul(p);
            s += 1;
        }
        if acc != q || s == 0 || s > MAX_S {
            return Err(GfError::NotAPowerOf { q, p });
        }
        GfCtx::new(p, s)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn zero(&self) -> GfEl {
        GfEl::ZERO
    }

    pub fn one(&self) -> GfEl {
        self.from_int(1)
    }

    /// Embed an integer through the prime field.
    pub fn from_int(&self, n: i64) -> GfEl {
        let r = n.rem_euclid(self.p as i64) as u16;
        let mut digits = [0u16; 4];
        digits[0] = r;
        GfEl { digits }
    }

    /// Decode an element from its canonical integer code in 0..q
    /// (base-p digits, least significant first).
    pub fn el_from_code(&self, code: u64) -> Result<GfEl, GfError> {
        if code >= self.q {
            return Err(GfError::CodeOutOfRange { code, q: self.q });
        }
        let mut digits = [0u16; 4];
        let mut c = code;
        for d in digits.iter_mut().take(self.s as usize) {
            *d = (c % self.p) as u16;
            c /= self.p;
        }
        Ok(GfEl { digits })
    }

    /// Canonical integer code of an element.
    pub fn code(&self, a: GfEl) -> u64 {
        let mut acc = 0u64;
        for i in (0..self.s as usize).rev() {
            acc = acc * self.p + a.digits[i] as u64;
        }
        acc
    }

    pub fn add(&self, a: GfEl, b: GfEl) -> GfEl {
        let mut digits = [0u16; 4];
        for i in 0..self.s as usize {
            let v = a.digits[i] as u64 + b.digits[i] as u64;
            digits[i] = (v % self.p) as u16;
        }
        GfEl { digits }
    }

    pub fn neg(&self, a: GfEl) -> GfEl {
        let mut digits = [0u16; 4];
        for i in 0..self.s as usize {
            digits[i] = ((self.p - a.digits[i] as u64) % self.p) as u16;
        }
        GfEl { digits }
    }

    pub fn sub(&self, a: GfEl, b: GfEl) -> GfEl {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: GfEl, b: GfEl) -> GfEl {
        let s = self.s as usize;
        let mut raw = [0u64; 2 * MAX_S as usize - 1];
        for i in 0..s {
            if a.digits[i] == 0 {
                continue;
            }
            for j in 0..s {
                raw[i + j] += a.digits[i] as u64 * b.digits[j] as u64;
            }
        }
        for r in raw.iter_mut() {
            *r %= self.p;
        }
        // Reduce modulo the monic modulus: x^s = -(lower coefficients).
        for k in (s..2 * s - 1).rev() {
            let c = raw[k];
            if c == 0 {
                continue;
            }
            raw[k] = 0;
            for j in 0..s {
                raw[k - s + j] = (raw[k - s + j] + c * ((self.p - self.modulus[j] % self.p) % self.p)) % self.p;
            }
        }
        let mut digits = [0u16; 4];
        for i in 0..s {
            digits[i] = raw[i] as u16;
        }
        GfEl { digits }
    }

    pub fn pow(&self, a: GfEl, mut e: u64) -> GfEl {
        let mut acc = self.one();
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: GfEl) -> GfEl {
        debug_assert!(!a.is_zero(), "inverse of zero");
        self.pow(a, self.q - 2)
    }

    /// The p-power Frobenius a -> a^p.
    pub fn frobenius(&self, a: GfEl) -> GfEl {
        self.pow(a, self.p)
    }

    /// The inverse of Frobenius: a -> a^(p^(s-1)).
    pub fn inv_frobenius(&self, a: GfEl) -> GfEl {
        let mut acc = a;
        for _ in 0..self.s - 1 {
            acc = self.frobenius(acc);
        }
        acc
    }

    /// Binomial coefficient C(a, b) modulo p for digit-sized arguments.
    fn binom_digit(&self, a: u64, b: u64) -> u64 {
        if b > a {
            return 0;
        }
        self.fact[a as usize] * self.inv_fact[b as usize] % self.p * self.inv_fact[(a - b) as usize]
            % self.p
    }

    /// Binomial coefficient C(m, k) modulo p by the base-p digit product rule.
    pub fn binom_mod_p(&self, m: u64, k: u64) -> u64 {
        if k > m {
            return 0;
        }
        let mut m = m;
        let mut k = k;
        let mut acc = 1u64;
        while k > 0 || m > 0 {
            let md = m % self.p;
            let kd = k % self.p;
            if kd > md {
                return 0;
            }
            acc = acc * self.binom_digit(md, kd) % self.p;
            m /= self.p;
            k /= self.p;
        }
        acc
    }

    /// Binomial coefficient as a field element.
    pub fn binom_el(&self, m: u64, k: u64) -> GfEl {
        self.from_int(self.binom_mod_p(m, k) as i64)
    }
}
