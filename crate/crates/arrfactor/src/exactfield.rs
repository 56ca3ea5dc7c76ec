//! Exact arithmetic in the cyclotomic fields Q(zeta_n) and exact linear
//! algebra (rank, kernel bases) over them.
//!
//! zeta_n is fixed as the residue class of x modulo the n-th cyclotomic
//! polynomial Phi_n. An element is its coefficient vector of length phi(n) on
//! the power basis 1, zeta, ..., zeta^(phi(n)-1), so equality of field
//! elements is plain coefficient comparison and nothing is ever rounded.

use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

/// Arbitrary-precision rational, kept in lowest terms with positive denominator.
pub type Rat = num_rational::BigRational;
/// Arbitrary-precision integer.
pub type Int = num_bigint::BigInt;

/// Rational `p/q` from machine integers. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(Int::from(p), Int::from(q))
}

/// Euler totient of `n`. Panics if `n == 0`.
pub fn phi(n: u32) -> usize {
    assert!(n > 0, "totient of 0");
    let mut m = u64::from(n);
    let mut result = m;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            result -= result / p;
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result as usize
}

/// Integer polynomial in one variable, coefficients in ascending degree order.
///
/// The zero polynomial is the empty vector; every other value keeps its
/// leading coefficient nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly(Vec<Int>);

impl IntPoly {
    /// Builds a polynomial, trimming trailing zero coefficients.
    pub fn new(mut coeffs: Vec<Int>) -> IntPoly {
        while coeffs.last().map_or(false, Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> IntPoly {
        IntPoly::new(coeffs.iter().map(|&c| Int::from(c)).collect())
    }

    pub fn zero() -> IntPoly {
        IntPoly(Vec::new())
    }

    pub fn one() -> IntPoly {
        IntPoly(vec![Int::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Ascending coefficients; empty exactly for the zero polynomial.
    pub fn coeffs(&self) -> &[Int] {
        &self.0
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// Coefficient of degree `k`, zero-padded past the end.
    pub fn coeff(&self, k: usize) -> Int {
        self.0.get(k).cloned().unwrap_or_else(Int::zero)
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![Int::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn eval(&self, x: &Int) -> Int {
        let mut acc = Int::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Exact quotient, or `None` if `d` is zero or does not divide `self`
    /// exactly over the integers.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        if self.0.len() < d.0.len() {
            return None;
        }
        let mut rem = self.0.clone();
        let lead = d.0.last().unwrap();
        let dlen = d.0.len();
        let mut quot = vec![Int::zero(); rem.len() - dlen + 1];
        for k in (0..quot.len()).rev() {
            let top = rem[k + dlen - 1].clone();
            if top.is_zero() {
                continue;
            }
            let (q, r) = num_integer::Integer::div_rem(&top, lead);
            if !r.is_zero() {
                return None;
            }
            for (j, dc) in d.0.iter().enumerate() {
                rem[k + j] -= &q * dc;
            }
            quot[k] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(IntPoly::new(quot))
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if k == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}")?;
                }
                if k == 1 {
                    write!(f, "t")?;
                } else {
                    write!(f, "t^{k}")?;
                }
            }
        }
        Ok(())
    }
}

/// `x^n - 1` as an integer polynomial.
fn power_minus_one(n: u32) -> IntPoly {
    let mut c = vec![Int::zero(); n as usize + 1];
    c[0] = -Int::one();
    c[n as usize] = Int::one();
    IntPoly::new(c)
}

/// The n-th cyclotomic polynomial Phi_n, monic of degree phi(n): the quotient
/// of x^n - 1 by the product of Phi_d over proper divisors d of n. Results
/// are cached per conductor.
pub fn cyclotomic_poly(n: u32) -> IntPoly {
    assert!(n > 0, "cyclotomic polynomial needs n >= 1");
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<IntPoly>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return (**p).clone();
    }
    let mut divisor_product = IntPoly::one();
    for d in 1..n {
        if n % d == 0 {
            divisor_product = divisor_product.mul(&cyclotomic_poly(d));
        }
    }
    let result = power_minus_one(n)
        .div_exact(&divisor_product)
        .expect("x^n - 1 is divisible by the product of proper cyclotomic factors");
    debug_assert_eq!(result.degree(), Some(phi(n)));
    cache
        .lock()
        .unwrap()
        .entry(n)
        .or_insert_with(|| Arc::new(result.clone()));
    result
}

/// Reduction data for one conductor. Row k holds the power-basis coefficients
/// of x^(phi+k) modulo Phi_n; rows cover every exponent up to
/// max(2*phi - 2, n - 1), which bounds what multiplication and embedding
/// can produce.
struct FieldTables {
    phi: usize,
    reductions: Vec<Vec<Rat>>,
}

fn field_tables(n: u32) -> Arc<FieldTables> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<FieldTables>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().unwrap().get(&n) {
        return Arc::clone(t);
    }
    let ph = phi(n);
    let minimal = cyclotomic_poly(n);
    // x^phi = -(lower-degree part of Phi_n) because Phi_n is monic.
    let base: Vec<Rat> = minimal.coeffs()[..ph]
        .iter()
        .map(|c| Rat::from_integer(-c.clone()))
        .collect();
    let max_exp = (2 * ph).saturating_sub(2).max(n as usize - 1).max(ph);
    let mut reductions: Vec<Vec<Rat>> = Vec::with_capacity(max_exp - ph + 1);
    reductions.push(base);
    for _ in ph + 1..=max_exp {
        let prev = reductions.last().unwrap();
        let carry = prev[ph - 1].clone();
        let mut next = vec![Rat::zero(); ph];
        for j in 1..ph {
            next[j] = prev[j - 1].clone();
        }
        if !carry.is_zero() {
            for (j, b) in reductions[0].iter().enumerate() {
                next[j] += &carry * b;
            }
        }
        reductions.push(next);
    }
    let tables = Arc::new(FieldTables {
        phi: ph,
        reductions,
    });
    Arc::clone(
        cache
            .lock()
            .unwrap()
            .entry(n)
            .or_insert_with(|| Arc::clone(&tables)),
    )
}

/// One element of Q(zeta_n), stored canonically modulo Phi_n.
///
/// Two values over the same conductor are equal exactly when their
/// coefficient vectors are equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycNum {
    conductor: u32,
    coeffs: Box<[Rat]>,
}

impl CycNum {
    pub fn zero(conductor: u32) -> CycNum {
        CycNum {
            conductor,
            coeffs: vec![Rat::zero(); phi(conductor)].into_boxed_slice(),
        }
    }

    pub fn one(conductor: u32) -> CycNum {
        CycNum::from_rat(conductor, Rat::one())
    }

    pub fn from_rat(conductor: u32, value: Rat) -> CycNum {
        let mut coeffs = vec![Rat::zero(); phi(conductor)];
        coeffs[0] = value;
        CycNum {
            conductor,
            coeffs: coeffs.into_boxed_slice(),
        }
    }

    pub fn from_int(conductor: u32, value: i64) -> CycNum {
        CycNum::from_rat(conductor, Rat::from_integer(Int::from(value)))
    }

    /// The canonical primitive root zeta of the conductor.
    pub fn zeta(conductor: u32) -> CycNum {
        CycNum::zeta_pow(conductor, 1)
    }

    /// zeta^k, with the exponent taken modulo the conductor.
    pub fn zeta_pow(conductor: u32, k: i64) -> CycNum {
        let e = k.rem_euclid(i64::from(conductor)) as usize;
        let mut coeffs = vec![Rat::zero(); e + 1];
        coeffs[e] = Rat::one();
        CycNum::from_coeffs(conductor, coeffs)
    }

    /// Element from ascending coefficients on powers of zeta; the vector is
    /// reduced modulo Phi_n, so its length may exceed phi(n) (up to the
    /// reduction-table bound max(2*phi - 2, n - 1)).
    pub fn from_coeffs(conductor: u32, mut coeffs: Vec<Rat>) -> CycNum {
        let tables = field_tables(conductor);
        assert!(
            coeffs.len() <= tables.phi + tables.reductions.len(),
            "coefficient vector of length {} exceeds the reduction table for conductor {}",
            coeffs.len(),
            conductor
        );
        for deg in (tables.phi..coeffs.len()).rev() {
            let c = std::mem::replace(&mut coeffs[deg], Rat::zero());
            if c.is_zero() {
                continue;
            }
            let row = &tables.reductions[deg - tables.phi];
            for (j, b) in row.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[j] += &c * b;
                }
            }
        }
        coeffs.truncate(tables.phi);
        coeffs.resize(tables.phi, Rat::zero());
        CycNum {
            conductor,
            coeffs: coeffs.into_boxed_slice(),
        }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Power-basis coefficients, length phi(conductor).
    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// `Some(r)` when the element is the rational number r.
    pub fn as_rat(&self) -> Option<&Rat> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit_coeff = mag.is_one() && k > 0;
            if !unit_coeff {
                if mag.is_integer() {
                    write!(f, "{}", mag.numer())?;
                } else {
                    write!(f, "({mag})")?;
                }
            }
            match k {
                0 => {}
                1 => write!(f, "z")?,
                _ => write!(f, "z^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over Q(z_{})", self, self.conductor)
    }
}

fn assert_same_conductor(a: &CycNum, b: &CycNum) {
    assert_eq!(
        a.conductor, b.conductor,
        "conductor mismatch: {} vs {}",
        a.conductor, b.conductor
    );
}

/// Exact sum. Panics on conductor mismatch.
pub fn cyc_add(a: &CycNum, b: &CycNum) -> CycNum {
    assert_same_conductor(a, b);
    let coeffs = a
        .coeffs
        .iter()
        .zip(b.coeffs.iter())
        .map(|(x, y)| x + y)
        .collect::<Vec<_>>()
        .into_boxed_slice();
    CycNum {
        conductor: a.conductor,
        coeffs,
    }
}

/// Exact difference. Panics on conductor mismatch.
pub fn cyc_sub(a: &CycNum, b: &CycNum) -> CycNum {
    assert_same_conductor(a, b);
    let coeffs = a
        .coeffs
        .iter()
        .zip(b.coeffs.iter())
        .map(|(x, y)| x - y)
        .collect::<Vec<_>>()
        .into_boxed_slice();
    CycNum {
        conductor: a.conductor,
        coeffs,
    }
}

pub fn cyc_neg(a: &CycNum) -> CycNum {
    let coeffs = a
        .coeffs
        .iter()
        .map(|x| -x)
        .collect::<Vec<_>>()
        .into_boxed_slice();
    CycNum {
        conductor: a.conductor,
        coeffs,
    }
}

/// Exact product, reduced to canonical form. Panics on conductor mismatch.
pub fn cyc_mul(a: &CycNum, b: &CycNum) -> CycNum {
    assert_same_conductor(a, b);
    // rational factors scale coefficientwise, no reduction needed
    if let Some(r) = a.as_rat() {
        return scale(b, r);
    }
    if let Some(r) = b.as_rat() {
        return scale(a, r);
    }
    let n = a.coeffs.len();
    let mut prod = vec![Rat::zero(); 2 * n - 1];
    for (i, x) in a.coeffs.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate() {
            if !y.is_zero() {
                prod[i + j] += x * y;
            }
        }
    }
    CycNum::from_coeffs(a.conductor, prod)
}

fn scale(a: &CycNum, r: &Rat) -> CycNum {
    if r.is_zero() {
        return CycNum::zero(a.conductor);
    }
    let coeffs = a
        .coeffs
        .iter()
        .map(|x| x * r)
        .collect::<Vec<_>>()
        .into_boxed_slice();
    CycNum {
        conductor: a.conductor,
        coeffs,
    }
}

// Polynomials over Q as trimmed ascending coefficient vectors; helpers for
// the extended Euclidean algorithm behind cyc_inv.

fn rp_trim(v: &mut Vec<Rat>) {
    while v.last().map_or(false, Zero::is_zero) {
        v.pop();
    }
}

fn rp_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    rp_trim(&mut out);
    out
}

fn rp_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    rp_trim(&mut out);
    out
}

fn rp_divmod(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    assert!(!b.is_empty(), "polynomial division by zero");
    if a.len() < b.len() {
        return (Vec::new(), a.to_vec());
    }
    let mut rem = a.to_vec();
    let lead = b.last().unwrap();
    let mut quot = vec![Rat::zero(); a.len() - b.len() + 1];
    for k in (0..quot.len()).rev() {
        let top = rem[k + b.len() - 1].clone();
        if top.is_zero() {
            continue;
        }
        let q = top / lead;
        for (j, bc) in b.iter().enumerate() {
            let t = &q * bc;
            rem[k + j] -= t;
        }
        quot[k] = q;
    }
    rp_trim(&mut rem);
    rp_trim(&mut quot);
    (quot, rem)
}

/// Multiplicative inverse. Panics on zero.
///
/// Runs the extended Euclidean algorithm on the representative polynomial and
/// Phi_n; the gcd is a nonzero constant because Phi_n is irreducible over Q.
pub fn cyc_inv(a: &CycNum) -> CycNum {
    assert!(!a.is_zero(), "inverse of zero");
    if let Some(r) = a.as_rat() {
        return CycNum::from_rat(a.conductor, r.recip());
    }
    let modulus: Vec<Rat> = cyclotomic_poly(a.conductor)
        .coeffs()
        .iter()
        .map(|c| Rat::from_integer(c.clone()))
        .collect();
    let mut r0 = modulus;
    let mut r1 = a.coeffs.to_vec();
    rp_trim(&mut r1);
    // invariant: r_i is congruent to t_i * a modulo Phi_n
    let mut t0: Vec<Rat> = Vec::new();
    let mut t1: Vec<Rat> = vec![Rat::one()];
    while !r1.is_empty() {
        let (q, r) = rp_divmod(&r0, &r1);
        let t_next = rp_sub(&t0, &rp_mul(&q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        t0 = std::mem::replace(&mut t1, t_next);
    }
    assert!(
        r0.len() == 1,
        "gcd with the minimal polynomial must be a constant"
    );
    let c = r0[0].recip();
    let inv: Vec<Rat> = t0.iter().map(|x| x * &c).collect();
    CycNum::from_coeffs(a.conductor, inv)
}

/// Image of `a` in Q(zeta_m) under zeta_n -> zeta_m^(m/n).
///
/// A ring homomorphism on every divisor pair. Panics unless conductor(a)
/// divides m.
pub fn embed(a: &CycNum, m: u32) -> CycNum {
    let n = a.conductor;
    assert!(
        n != 0 && m % n == 0,
        "conductor {n} does not divide target conductor {m}"
    );
    if m == n {
        return a.clone();
    }
    let stride = (m / n) as usize;
    let mut coeffs = vec![Rat::zero(); (a.coeffs.len() - 1) * stride + 1];
    for (j, v) in a.coeffs.iter().enumerate() {
        if !v.is_zero() {
            coeffs[j * stride] = v.clone();
        }
    }
    CycNum::from_coeffs(m, coeffs)
}

impl std::ops::Add for &CycNum {
    type Output = CycNum;
    fn add(self, rhs: &CycNum) -> CycNum {
        cyc_add(self, rhs)
    }
}

impl std::ops::Sub for &CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &CycNum) -> CycNum {
        cyc_sub(self, rhs)
    }
}

impl std::ops::Mul for &CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &CycNum) -> CycNum {
        cyc_mul(self, rhs)
    }
}

impl std::ops::Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        cyc_neg(self)
    }
}

/// Representation size of an element: nonzero coefficient count, then total
/// bit length of numerators and denominators. Pivoting on the smallest keeps
/// elimination entries from blowing up.
fn rep_size(c: &CycNum) -> (usize, u64) {
    let mut nonzero = 0;
    let mut bits = 0;
    for r in c.coeffs() {
        if !r.is_zero() {
            nonzero += 1;
            bits += r.numer().bits() + r.denom().bits();
        }
    }
    (nonzero, bits)
}

/// Incremental reduced row echelon form over one cyclotomic field.
///
/// Every stored row has 1 in its own pivot column and 0 in every other row's
/// pivot column, so reducing a vector against the rows in insertion order
/// fully eliminates it.
#[derive(Clone)]
pub struct Echelon {
    conductor: u32,
    cols: usize,
    rows: Vec<Vec<CycNum>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(conductor: u32, cols: usize) -> Echelon {
        Echelon {
            conductor,
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<CycNum>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Remainder of `v` after eliminating every pivot column.
    pub fn residue(&self, v: &[CycNum]) -> Vec<CycNum> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let mut cur = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = cur[p].clone();
            if c.is_zero() {
                continue;
            }
            for (j, rj) in row.iter().enumerate() {
                if !rj.is_zero() {
                    cur[j] = cyc_sub(&cur[j], &cyc_mul(&c, rj));
                }
            }
        }
        cur
    }

    /// Whether `v` lies in the row space.
    pub fn contains(&self, v: &[CycNum]) -> bool {
        self.residue(v).iter().all(CycNum::is_zero)
    }

    /// Adds `v` to the row space; returns false (and changes nothing) when
    /// `v` already lies in it.
    pub fn insert(&mut self, v: &[CycNum]) -> bool {
        let mut r = self.residue(v);
        let pivot = r
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .min_by_key(|(_, c)| rep_size(c))
            .map(|(j, _)| j);
        let Some(p) = pivot else {
            return false;
        };
        let inv = cyc_inv(&r[p]);
        for e in r.iter_mut() {
            if !e.is_zero() {
                *e = cyc_mul(e, &inv);
            }
        }
        for row in self.rows.iter_mut() {
            let c = row[p].clone();
            if c.is_zero() {
                continue;
            }
            for (j, rj) in r.iter().enumerate() {
                if !rj.is_zero() {
                    row[j] = cyc_sub(&row[j], &cyc_mul(&c, rj));
                }
            }
        }
        self.rows.push(r);
        self.pivots.push(p);
        true
    }

    /// Basis of the null space of the row space, one vector per free column,
    /// in ascending free-column order.
    pub fn kernel_basis(&self) -> Vec<Vec<CycNum>> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::with_capacity(self.cols - self.rows.len());
        for f in 0..self.cols {
            if is_pivot[f] {
                continue;
            }
            let mut v = vec![CycNum::zero(self.conductor); self.cols];
            v[f] = CycNum::one(self.conductor);
            for (row, &p) in self.rows.iter().zip(&self.pivots) {
                v[p] = cyc_neg(&row[f]);
            }
            basis.push(v);
        }
        basis
    }
}

/// Rectangular matrix over one cyclotomic field.
#[derive(Clone)]
pub struct CycMatrix {
    conductor: u32,
    rows: usize,
    cols: usize,
    entries: Vec<CycNum>,
}

impl CycMatrix {
    pub fn zero(conductor: u32, rows: usize, cols: usize) -> CycMatrix {
        CycMatrix {
            conductor,
            rows,
            cols,
            entries: vec![CycNum::zero(conductor); rows * cols],
        }
    }

    pub fn identity(conductor: u32, size: usize) -> CycMatrix {
        let mut m = CycMatrix::zero(conductor, size, size);
        for i in 0..size {
            m.set(i, i, CycNum::one(conductor));
        }
        m
    }

    /// Stacks row vectors. All rows must share the length `cols` and the
    /// conductor.
    pub fn from_rows(conductor: u32, cols: usize, rows: Vec<Vec<CycNum>>) -> CycMatrix {
        let nrows = rows.len();
        let mut entries = Vec::with_capacity(nrows * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix row");
            for e in &row {
                assert_eq!(e.conductor(), conductor, "conductor mismatch in matrix");
            }
            entries.extend(row);
        }
        CycMatrix {
            conductor,
            rows: nrows,
            cols,
            entries,
        }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &CycNum {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CycNum) {
        assert_eq!(v.conductor(), self.conductor, "conductor mismatch");
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[CycNum] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    fn echelon(&self) -> Echelon {
        let mut ech = Echelon::new(self.conductor, self.cols);
        for i in 0..self.rows {
            ech.insert(self.row(i));
        }
        ech
    }

    /// Rank over Q(zeta_n).
    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Basis of {x : M x = 0}, dimension ncols - rank.
    pub fn kernel_basis(&self) -> Vec<Vec<CycNum>> {
        self.echelon().kernel_basis()
    }
}
