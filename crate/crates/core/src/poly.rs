//! Multivariate polynomials in the per-order success probabilities
//! `p_2, p_3, ...` with arbitrary-precision rational coefficients.
//!
//! Coefficients are exact, so overlap polynomials and witness expectations
//! can be compared coefficient-by-coefficient and evaluated without rounding.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A monomial: map from variable (edge order `k`) to its exponent.
/// No zero exponents are stored; the empty map is the constant monomial.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(BTreeMap<usize, u32>);

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(order: usize) -> Self {
        let mut m = BTreeMap::new();
        m.insert(order, 1);
        Self(m)
    }

    pub fn degree(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn exponent(&self, order: usize) -> u32 {
        self.0.get(&order).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().map(|(&k, &e)| (k, e))
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = self.0.clone();
        for (&k, &e) in &other.0 {
            *out.entry(k).or_insert(0) += e;
        }
        Self(out)
    }
}

/// Polynomial with exact rational coefficients; zero coefficients are never
/// stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RationalPolynomial {
    terms: BTreeMap<Monomial, BigRational>,
}

impl RationalPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Self { terms }
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(c)))
    }

    /// The variable `p_order`.
    pub fn var(order: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(order), BigRational::one());
        Self { terms }
    }

    /// `1 - p_order`.
    pub fn one_minus_var(order: usize) -> Self {
        Self::one() - Self::var(order)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Distinct variables present, ascending.
    pub fn variables(&self) -> Vec<usize> {
        let mut vars: Vec<usize> = self
            .terms
            .keys()
            .flat_map(|m| m.exponents().map(|(k, _)| k))
            .collect();
        vars.sort_unstable();
        vars.dedup();
        vars
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    fn insert(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Exact evaluation at rational points. Variables absent from `point`
    /// default to... nothing: every variable present in the polynomial must
    /// be given a value.
    pub fn eval_rational(&self, point: &BTreeMap<usize, BigRational>) -> BigRational {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (k, e) in m.exponents() {
                let v = point
                    .get(&k)
                    .unwrap_or_else(|| panic!("no value for variable p_{k}"));
                for _ in 0..e {
                    term *= v;
                }
            }
            acc += term;
        }
        acc
    }

    /// Floating-point evaluation.
    pub fn eval_f64(&self, point: &BTreeMap<usize, f64>) -> f64 {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut term = rational_to_f64(c);
            for (k, e) in m.exponents() {
                let v = *point
                    .get(&k)
                    .unwrap_or_else(|| panic!("no value for variable p_{k}"));
                term *= v.powi(e as i32);
            }
            acc += term;
        }
        acc
    }

    /// Evaluation of a univariate polynomial; panics if more than one
    /// variable is present.
    pub fn eval_univariate(&self, x: f64) -> f64 {
        let vars = self.variables();
        assert!(vars.len() <= 1, "polynomial is not univariate");
        let mut point = BTreeMap::new();
        if let Some(&k) = vars.first() {
            point.insert(k, x);
        }
        self.eval_f64(&point)
    }

    /// Exact univariate evaluation.
    pub fn eval_univariate_rational(&self, x: &BigRational) -> BigRational {
        let vars = self.variables();
        assert!(vars.len() <= 1, "polynomial is not univariate");
        let mut point = BTreeMap::new();
        if let Some(&k) = vars.first() {
            point.insert(k, x.clone());
        }
        self.eval_rational(&point)
    }

    /// Substitutes every variable by a single common variable `order`,
    /// e.g. to bind the uniform path `p_2 = p_3 = p`.
    pub fn bind_uniform(&self, order: usize) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut mono = BTreeMap::new();
            let d = m.degree();
            if d > 0 {
                mono.insert(order, d);
            }
            out.insert(Monomial(mono), c.clone());
        }
        out
    }

    /// Partial derivative with respect to `p_order`.
    pub fn derivative(&self, order: usize) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(order);
            if e == 0 {
                continue;
            }
            let mut mono = m.0.clone();
            if e == 1 {
                mono.remove(&order);
            } else {
                mono.insert(order, e - 1);
            }
            out.insert(
                Monomial(mono),
                c * BigRational::from_integer(BigInt::from(e)),
            );
        }
        out
    }

    /// Canonical text form `(c_0*m_0 + c_1*m_1 + ...)/d` with integer
    /// numerators over the least common denominator `d`; terms are ordered
    /// by descending total degree, then descending lexicographic monomial.
    /// A polynomial in a single variable prints its variable as plain `p`.
    pub fn canonical_string(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let vars = self.variables();
        let single_var = vars.len() == 1;
        let mut denom = BigInt::one();
        for c in self.terms.values() {
            denom = lcm(&denom, c.denom());
        }
        let mut items: Vec<(&Monomial, BigInt)> = self
            .terms
            .iter()
            .map(|(m, c)| (m, c.numer() * (&denom / c.denom())))
            .collect();
        items.sort_by(|a, b| {
            b.0.degree()
                .cmp(&a.0.degree())
                .then_with(|| a.0.cmp(b.0))
        });
        let mut body = String::new();
        for (i, (m, num)) in items.iter().enumerate() {
            let neg = num.is_negative();
            if i == 0 {
                if neg {
                    body.push('-');
                }
            } else {
                body.push_str(if neg { " - " } else { " + " });
            }
            let abs = num.abs();
            let mono = format_monomial(m, single_var);
            if mono.is_empty() {
                body.push_str(&abs.to_string());
            } else if abs.is_one() {
                body.push_str(&mono);
            } else {
                body.push_str(&format!("{abs}*{mono}"));
            }
        }
        if denom.is_one() {
            body
        } else {
            format!("({body})/{denom}")
        }
    }
}

fn format_monomial(m: &Monomial, single_var: bool) -> String {
    let mut parts = Vec::new();
    for (k, e) in m.exponents() {
        let name = if single_var {
            "p".to_string()
        } else {
            format!("p{k}")
        };
        if e == 1 {
            parts.push(name);
        } else {
            parts.push(format!("{name}^{e}"));
        }
    }
    parts.join("*")
}

fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    (a * b / gcd(a, b)).abs()
}

fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let mut a = a.abs();
    let mut b = b.abs();
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

/// Exact-to-float conversion; accurate to one rounding since BigRational's
/// own `to_f64` handles the scaling.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    num_traits::ToPrimitive::to_f64(r).expect("rational representable as f64")
}

/// Exact dyadic rational from a finite f64.
pub fn f64_to_rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

impl Add for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn add(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn sub(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn mul(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        let mut out = RationalPolynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.insert(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn neg(self) -> RationalPolynomial {
        &RationalPolynomial::zero() - self
    }
}

macro_rules! owned_ops {
    ($($trait:ident :: $f:ident),*) => {$(
        impl $trait for RationalPolynomial {
            type Output = RationalPolynomial;
            fn $f(self, rhs: RationalPolynomial) -> RationalPolynomial {
                $trait::$f(&self, &rhs)
            }
        }
    )*};
}
owned_ops!(Add::add, Sub::sub, Mul::mul);

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_string())
    }
}
