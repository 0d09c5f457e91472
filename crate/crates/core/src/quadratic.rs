//! Arithmetic in `Z[√-d]` and in polynomials of low degree over it.
//!
//! Elements are written `a+bi d`, e.g. `5+2i14` for `5 + 2√-14`, and
//! polynomials as sums of terms like `2X`, `(1+i3)X^2` or `i3`.

use std::fmt;

use crate::{Error, Result};

/// `a + b·√(-d)` in the order `Z[√-d]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadraticInteger {
    a: i64,
    b: i64,
    d: i64,
}

fn is_squarefree(d: i64) -> bool {
    let mut k = 2;
    while k * k <= d {
        if d % (k * k) == 0 {
            return false;
        }
        k += 1;
    }
    true
}

impl QuadraticInteger {
    pub fn new(a: i64, b: i64, d: i64) -> Result<Self> {
        if d < 1 || !is_squarefree(d) {
            return Err(Error::InvalidParameter(format!("d = {d} must be a positive squarefree integer")));
        }
        Ok(QuadraticInteger { a, b, d })
    }

    pub fn integer(a: i64, d: i64) -> Result<Self> {
        Self::new(a, 0, d)
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn norm(&self) -> i64 {
        self.a * self.a + self.d * self.b * self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn is_unit(&self) -> bool {
        self.norm() == 1
    }

    pub fn conjugate(&self) -> Self {
        QuadraticInteger { b: -self.b, ..*self }
    }

    pub fn neg(&self) -> Self {
        QuadraticInteger { a: -self.a, b: -self.b, d: self.d }
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.d != other.d {
            return Err(Error::IncompatibleRing(self.d, other.d));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(QuadraticInteger { a: self.a + other.a, b: self.b + other.b, d: self.d })
    }

    /// Exact quotient, if `other` divides `self`.
    pub fn div_exact(&self, other: &Self) -> Result<Option<Self>> {
        self.same_ring(other)?;
        let n = other.norm();
        if n == 0 {
            return Ok(None);
        }
        // self · conj(other) / norm(other)
        let re = self.a * other.a + self.d * self.b * other.b;
        let im = self.b * other.a - self.a * other.b;
        if re % n != 0 || im % n != 0 {
            return Ok(None);
        }
        Ok(Some(QuadraticInteger { a: re / n, b: im / n, d: self.d }))
    }

    /// Every element of norm `n`.
    pub fn with_norm(n: i64, d: i64) -> Vec<Self> {
        let mut out = Vec::new();
        let mut b = 0;
        while d * b * b <= n {
            let rest = n - d * b * b;
            let a = (rest as f64).sqrt().round() as i64;
            for a in [a - 1, a, a + 1] {
                if a >= 0 && a * a == rest {
                    for (sa, sb) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                        let q = QuadraticInteger { a: sa * a, b: sb * b, d };
                        if !out.contains(&q) {
                            out.push(q);
                        }
                    }
                }
            }
            b += 1;
        }
        out.sort_by_key(|q| (q.a, q.b));
        out
    }

    pub fn units(d: i64) -> Vec<Self> {
        Self::with_norm(1, d)
    }

    /// Divisors of `self` (units included), by norm.
    pub fn divisors(&self) -> Vec<Self> {
        let n = self.norm();
        let mut out = Vec::new();
        for k in 1..=n {
            if n % k == 0 {
                for y in Self::with_norm(k, self.d) {
                    if matches!(self.div_exact(&y), Ok(Some(_))) {
                        out.push(y);
                    }
                }
            }
        }
        out
    }

    pub fn is_associate(&self, other: &Self) -> bool {
        self.d == other.d && Self::units(self.d).iter().any(|u| qi_mul(u, other).ok() == Some(*self))
    }
}

impl fmt::Display for QuadraticInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imag = |b: i64| match b.abs() {
            1 => format!("i{}", self.d),
            k => format!("{k}i{}", self.d),
        };
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, b) if b < 0 => write!(f, "-{}", imag(b)),
            (0, b) => write!(f, "{}", imag(b)),
            (a, b) if b < 0 => write!(f, "{a}-{}", imag(b)),
            (a, b) => write!(f, "{a}+{}", imag(b)),
        }
    }
}

pub fn qi_mul(x: &QuadraticInteger, y: &QuadraticInteger) -> Result<QuadraticInteger> {
    x.same_ring(y)?;
    Ok(QuadraticInteger { a: x.a * y.a - x.d * x.b * y.b, b: x.a * y.b + x.b * y.a, d: x.d })
}

/// Not a product of two nonunits, decided over every proper divisor norm.
pub fn qi_is_atom(x: &QuadraticInteger) -> Result<bool> {
    let n = x.norm();
    if n <= 1 {
        return Err(Error::ZeroOrUnit(x.to_string()));
    }
    for k in 2..n {
        if n % k != 0 {
            continue;
        }
        for y in QuadraticInteger::with_norm(k, x.d) {
            if x.div_exact(&y)?.is_some() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Polynomial over `Z[√-d]`, lowest degree first, without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticPolynomial {
    coefficients: Vec<QuadraticInteger>,
    d: i64,
}

impl QuadraticPolynomial {
    pub fn new(coefficients: Vec<QuadraticInteger>, d: i64) -> Result<Self> {
        if let Some(c) = coefficients.iter().find(|c| c.d != d) {
            return Err(Error::IncompatibleRing(d, c.d));
        }
        QuadraticInteger::new(0, 0, d)?;
        let mut p = QuadraticPolynomial { coefficients, d };
        p.trim();
        Ok(p)
    }

    pub fn constant(c: QuadraticInteger) -> Self {
        let mut p = QuadraticPolynomial { coefficients: vec![c], d: c.d };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coefficients.last().is_some_and(QuadraticInteger::is_zero) {
            self.coefficients.pop();
        }
    }

    pub fn coefficients(&self) -> &[QuadraticInteger] {
        &self.coefficients
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.coefficients.len() == 1 && self.coefficients[0].is_unit()
    }

    fn coefficient(&self, k: usize) -> QuadraticInteger {
        self.coefficients.get(k).copied().unwrap_or(QuadraticInteger { a: 0, b: 0, d: self.d })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.d != other.d {
            return Err(Error::IncompatibleRing(self.d, other.d));
        }
        if self.is_zero() || other.is_zero() {
            return Ok(QuadraticPolynomial { coefficients: Vec::new(), d: self.d });
        }
        let zero = QuadraticInteger { a: 0, b: 0, d: self.d };
        let mut out = vec![zero; self.coefficients.len() + other.coefficients.len() - 1];
        for (i, x) in self.coefficients.iter().enumerate() {
            for (j, y) in other.coefficients.iter().enumerate() {
                out[i + j] = out[i + j].add(&qi_mul(x, y)?)?;
            }
        }
        QuadraticPolynomial::new(out, self.d)
    }

    pub fn neg(&self) -> Self {
        QuadraticPolynomial { coefficients: self.coefficients.iter().map(QuadraticInteger::neg).collect(), d: self.d }
    }

    fn scale_divides(&self, c: &QuadraticInteger) -> bool {
        self.coefficients.iter().all(|x| matches!(x.div_exact(c), Ok(Some(_))))
    }

    /// Some nonunit constant divides every coefficient.
    fn has_constant_factor(&self) -> bool {
        let Some(smallest) = self.coefficients.iter().filter(|c| !c.is_zero()).min_by_key(|c| c.norm()) else {
            return false;
        };
        smallest.divisors().iter().any(|c| !c.is_unit() && self.scale_divides(c))
    }

    /// Atom test for degree at most 2: constants by norm search, degree 1 by
    /// common constant divisors, degree 2 additionally by all splittings into
    /// two linear factors.
    pub fn is_atom(&self) -> Result<bool> {
        match self.degree() {
            None => Err(Error::ZeroOrUnit(self.to_string())),
            Some(0) => qi_is_atom(&self.coefficients[0]),
            Some(1) => Ok(!self.has_constant_factor()),
            Some(2) => {
                if self.has_constant_factor() {
                    return Ok(false);
                }
                let (p0, p1, p2) = (self.coefficient(0), self.coefficient(1), self.coefficient(2));
                if p0.is_zero() {
                    return Ok(false);
                }
                // (aX + b)(cX + e) with ac = p2, be = p0, ae + bc = p1
                for a in p2.divisors() {
                    let c = p2.div_exact(&a)?.expect("a divides p2");
                    for b in p0.divisors() {
                        let e = p0.div_exact(&b)?.expect("b divides p0");
                        if qi_mul(&a, &e)?.add(&qi_mul(&b, &c)?)? == p1 {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
            Some(k) => Err(Error::InvalidParameter(format!("atom test covers degree at most 2, got {k}"))),
        }
    }
}

impl fmt::Display for QuadraticPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let monomial = match k {
                0 => String::new(),
                1 => "X".to_string(),
                k => format!("X^{k}"),
            };
            let (negative, body) = if c.b == 0 {
                let mag = c.a.abs();
                let body = if mag == 1 && k > 0 { monomial.clone() } else { format!("{mag}{monomial}") };
                (c.a < 0, body)
            } else if c.a == 0 {
                let mag = QuadraticInteger { b: c.b.abs(), ..*c };
                (c.b < 0, format!("{mag}{monomial}"))
            } else if k == 0 {
                (false, c.to_string())
            } else {
                (false, format!("({c}){monomial}"))
            };
            match (first, negative) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, "+{body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// Ring elements that can be checked for atomic equalities.
pub trait Factor: Clone + PartialEq + fmt::Display {
    fn ring(&self) -> i64;
    fn multiply(&self, other: &Self) -> Result<Self>;
    fn one(d: i64) -> Self;
    fn is_zero_or_unit(&self) -> bool;
    fn test_atom(&self) -> Result<bool>;
    fn associate_of(&self, other: &Self) -> bool;
}

impl Factor for QuadraticInteger {
    fn ring(&self) -> i64 {
        self.d
    }

    fn multiply(&self, other: &Self) -> Result<Self> {
        qi_mul(self, other)
    }

    fn one(d: i64) -> Self {
        QuadraticInteger { a: 1, b: 0, d }
    }

    fn is_zero_or_unit(&self) -> bool {
        self.norm() <= 1
    }

    fn test_atom(&self) -> Result<bool> {
        qi_is_atom(self)
    }

    fn associate_of(&self, other: &Self) -> bool {
        self.is_associate(other)
    }
}

impl Factor for QuadraticPolynomial {
    fn ring(&self) -> i64 {
        self.d
    }

    fn multiply(&self, other: &Self) -> Result<Self> {
        self.mul(other)
    }

    fn one(d: i64) -> Self {
        QuadraticPolynomial::constant(QuadraticInteger { a: 1, b: 0, d })
    }

    fn is_zero_or_unit(&self) -> bool {
        self.is_zero() || self.is_unit()
    }

    fn test_atom(&self) -> Result<bool> {
        self.is_atom()
    }

    fn associate_of(&self, other: &Self) -> bool {
        QuadraticInteger::units(self.d).into_iter().any(|u| {
            QuadraticPolynomial::constant(u).mul(other).ok().as_ref() == Some(self)
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EqualityCheck {
    pub equal: bool,
    pub all_atoms: bool,
    pub lengths: (usize, usize),
    pub irredundant: bool,
}

impl EqualityCheck {
    pub fn balanced(&self) -> bool {
        self.lengths.0 == self.lengths.1
    }
}

fn product<T: Factor>(items: &[T], mask: u64, d: i64) -> Result<T> {
    let mut acc = T::one(d);
    for (i, x) in items.iter().enumerate() {
        if mask >> i & 1 == 1 {
            acc = acc.multiply(x)?;
        }
    }
    Ok(acc)
}

/// Checks `lhs_1⋯lhs_n = rhs_1⋯rhs_m`: equality of products, atomicity of
/// every factor, and that no proper nonempty sub-product on one side is
/// associated to a proper nonempty sub-product on the other.
pub fn verify_atomic_equality<T: Factor>(lhs: &[T], rhs: &[T]) -> Result<EqualityCheck> {
    let d = match lhs.first().or(rhs.first()) {
        Some(x) => x.ring(),
        None => return Err(Error::InvalidParameter("both sides are empty".into())),
    };
    if let Some(x) = lhs.iter().chain(rhs).find(|x| x.ring() != d) {
        return Err(Error::IncompatibleRing(d, x.ring()));
    }
    if let Some(x) = lhs.iter().chain(rhs).find(|x| x.is_zero_or_unit()) {
        return Err(Error::ZeroOrUnit(x.to_string()));
    }
    if lhs.len() > 20 || rhs.len() > 20 {
        return Err(Error::InvalidParameter("at most 20 factors per side".into()));
    }
    let (n, m) = (lhs.len(), rhs.len());
    let equal = product(lhs, (1 << n) - 1, d)? == product(rhs, (1 << m) - 1, d)?;
    let mut all_atoms = true;
    for x in lhs.iter().chain(rhs) {
        all_atoms &= x.test_atom()?;
    }
    let right: Vec<T> = (1..(1u64 << m) - 1).map(|mask| product(rhs, mask, d)).collect::<Result<_>>()?;
    // a one-factor equality pairs associated factors and is trivial
    let mut irredundant = !(n == 1 && m == 1 && lhs[0].associate_of(&rhs[0]));
    'outer: for mask in 1..(1u64 << n) - 1 {
        let p = product(lhs, mask, d)?;
        for q in &right {
            if p.associate_of(q) {
                irredundant = false;
                break 'outer;
            }
        }
    }
    Ok(EqualityCheck { equal, all_atoms, lengths: (n, m), irredundant })
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Option<i64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse().unwrap())
    }

    fn error(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {} in {:?}", self.pos, String::from_utf8_lossy(self.s)))
    }
}

/// The `d` named by the first `i<d>` in `s`, if any.
pub fn detect_radicand(s: &str) -> Option<i64> {
    let bytes = s.as_bytes();
    let i = bytes.iter().position(|&c| c == b'i')?;
    let mut cur = Cursor { s: bytes, pos: i + 1 };
    cur.number()
}

/// Parses a polynomial such as `2X+1+i3` or `X^2+X+1` over `Z[√-d]`.
pub fn parse_polynomial(s: &str, d: i64) -> Result<QuadraticPolynomial> {
    let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut cur = Cursor { s: cleaned.as_bytes(), pos: 0 };
    let zero = QuadraticInteger::new(0, 0, d)?;
    let mut coeffs: Vec<QuadraticInteger> = Vec::new();
    let mut first = true;
    loop {
        let sign = if cur.eat(b'-') {
            -1
        } else if cur.eat(b'+') || first {
            1
        } else {
            break;
        };
        first = false;
        let (coef, explicit) = parse_coefficient(&mut cur, d)?;
        let degree = if cur.eat(b'X') || cur.eat(b'x') {
            if cur.eat(b'^') {
                cur.number().ok_or_else(|| cur.error("expected exponent"))? as usize
            } else {
                1
            }
        } else if explicit {
            0
        } else {
            return Err(cur.error("expected a term"));
        };
        if coeffs.len() <= degree {
            coeffs.resize(degree + 1, zero);
        }
        let term = QuadraticInteger { a: sign * coef.a, b: sign * coef.b, d };
        coeffs[degree] = coeffs[degree].add(&term)?;
    }
    if cur.pos != cur.s.len() {
        return Err(cur.error("unexpected character"));
    }
    QuadraticPolynomial::new(coeffs, d)
}

// coefficient of one term; the flag tells whether anything was written
fn parse_coefficient(cur: &mut Cursor<'_>, d: i64) -> Result<(QuadraticInteger, bool)> {
    if cur.eat(b'(') {
        let start = cur.pos;
        let mut depth = 1;
        while depth > 0 {
            match cur.peek() {
                Some(b'(') => depth += 1,
                Some(b')') => depth -= 1,
                None => return Err(cur.error("unclosed parenthesis")),
                _ => {}
            }
            cur.pos += 1;
        }
        let inner = std::str::from_utf8(&cur.s[start..cur.pos - 1]).unwrap();
        let p = parse_polynomial(inner, d)?;
        if p.degree().unwrap_or(0) > 0 {
            return Err(cur.error("parenthesized coefficient must be constant"));
        }
        cur.eat(b'*');
        return Ok((p.coefficient(0), true));
    }
    let n = cur.number();
    let value = if cur.eat(b'i') {
        let radicand = cur.number().ok_or_else(|| cur.error("expected radicand after i"))?;
        if radicand != d {
            return Err(Error::IncompatibleRing(d, radicand));
        }
        QuadraticInteger { a: 0, b: n.unwrap_or(1), d }
    } else {
        match n {
            Some(a) => QuadraticInteger { a, b: 0, d },
            None => QuadraticInteger { a: 1, b: 0, d },
        }
    };
    let explicit = n.is_some() || value.b != 0;
    cur.eat(b'*');
    Ok((value, explicit))
}

/// Parses an element such as `5+2i14`. A plain integer needs `d` from the
/// caller.
pub fn parse_quadratic(s: &str, d: i64) -> Result<QuadraticInteger> {
    let p = parse_polynomial(s, d)?;
    match p.degree() {
        None => QuadraticInteger::new(0, 0, d),
        Some(0) => Ok(p.coefficient(0)),
        Some(_) => Err(Error::Parse(format!("{s:?} is not a constant"))),
    }
}

/// Outcome of checking `2·2·(X²+X+1) = (2X+1+√-3)(2X+1-√-3)` in `Z[√-3][X]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolynomialExample {
    pub lhs: Vec<QuadraticPolynomial>,
    pub rhs: Vec<QuadraticPolynomial>,
    pub lhs_product: QuadraticPolynomial,
    pub rhs_product: QuadraticPolynomial,
    /// Each factor with its atom verdict.
    pub atoms: Vec<(QuadraticPolynomial, bool)>,
    pub check: EqualityCheck,
}

impl PolynomialExample {
    pub fn products_equal(&self) -> bool {
        self.lhs_product == self.rhs_product
    }

    pub fn all_atoms(&self) -> bool {
        self.atoms.iter().all(|(_, ok)| *ok)
    }

    /// An irredundant unbalanced equality among atoms containing the
    /// constant 2 makes 2 a bad atom.
    pub fn two_is_bad(&self) -> bool {
        let two = self.lhs.iter().any(|p| p.degree() == Some(0) && p.coefficient(0).a == 2 && p.coefficient(0).b == 0);
        two && self.check.equal && self.check.all_atoms && self.check.irredundant && !self.check.balanced()
    }

    pub fn passed(&self) -> bool {
        self.products_equal() && self.all_atoms() && self.check.irredundant && self.two_is_bad()
    }
}

pub fn verify_polynomial_example() -> Result<PolynomialExample> {
    let parse = |s: &str| parse_polynomial(s, 3);
    let lhs = vec![parse("2")?, parse("2")?, parse("X^2+X+1")?];
    let rhs = vec![parse("2X+1+i3")?, parse("2X+1-i3")?];
    let lhs_product = product(&lhs, 0b111, 3)?;
    let rhs_product = product(&rhs, 0b11, 3)?;
    let atoms = lhs.iter().chain(&rhs).map(|p| Ok((p.clone(), p.is_atom()?))).collect::<Result<_>>()?;
    let check = verify_atomic_equality(&lhs, &rhs)?;
    Ok(PolynomialExample { lhs, rhs, lhs_product, rhs_product, atoms, check })
}
