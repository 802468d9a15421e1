use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Integer Laurent polynomial in `A`, stored sparsely without zero terms.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LaurentPolynomial {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn monomial(coef: impl Into<BigInt>, exp: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(coef.into(), exp);
        p
    }

    /// Builds from `(coefficient, exponent)` pairs; repeated exponents add up.
    pub fn from_terms<C: Into<BigInt>>(terms: impl IntoIterator<Item = (C, i64)>) -> Self {
        let mut p = Self::zero();
        for (c, e) in terms {
            p.add_term(c.into(), e);
        }
        p
    }

    /// `δ = -A^2 - A^-2`.
    pub fn delta() -> Self {
        Self::from_terms([(-1, 2), (-1, -2)])
    }

    pub fn add_term(&mut self, coef: BigInt, exp: i64) {
        if coef.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *entry += coef;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    /// Terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// `A -> A^-1`.
    pub fn mirror(&self) -> Self {
        LaurentPolynomial {
            terms: self.terms.iter().map(|(&e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Multiplies by `A^shift`.
    pub fn shift(&self, shift: i64) -> Self {
        LaurentPolynomial {
            terms: self.terms.iter().map(|(&e, c)| (e + shift, c.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Rendering in `t = A^-4`. Exponents not divisible by 4 print as
    /// fractions of `t`.
    pub fn to_t_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<(i64, i64, &BigInt)> = self
            .terms
            .iter()
            .map(|(&e, c)| {
                let (num, den) = reduce(-e, 4);
                (num, den, c)
            })
            .collect();
        terms.sort_by(|a, b| (a.0 * b.1).cmp(&(b.0 * a.1)));
        render(terms.into_iter().map(|(num, den, c)| {
            let exp = if den == 1 {
                num.to_string()
            } else {
                format!("({num}/{den})")
            };
            (c, format!("t^{exp}"))
        }))
    }
}

fn reduce(num: i64, den: i64) -> (i64, i64) {
    let mut g = num.abs().max(1);
    let mut b = den;
    while b != 0 {
        let t = g % b;
        g = b;
        b = t;
    }
    if num == 0 {
        (0, 1)
    } else {
        (num / g, den / g)
    }
}

fn render<'a>(terms: impl Iterator<Item = (&'a BigInt, String)>) -> String {
    let mut out = String::new();
    for (i, (c, var)) in terms.enumerate() {
        if i == 0 {
            if c.is_negative() {
                out.push('-');
            }
        } else if c.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&format!("{}*{}", c.abs(), var));
    }
    out
}

impl fmt::Display for LaurentPolynomial {
    /// `coef*A^exp` terms sorted by exponent.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        f.write_str(&render(self.terms.iter().map(|(e, c)| (c, format!("A^{e}")))))
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(c.clone(), e);
        }
        out
    }
}

impl Add for LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn add(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
        &self + &rhs
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn neg(self) -> LaurentPolynomial {
        LaurentPolynomial {
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

impl Neg for LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn neg(self) -> LaurentPolynomial {
        -&self
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        self + &(-rhs)
    }
}

impl Sub for LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn sub(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
        &self - &rhs
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero();
        for (&e1, c1) in &self.terms {
            for (&e2, c2) in &rhs.terms {
                out.add_term(c1 * c2, e1 + e2);
            }
        }
        out
    }
}

impl Mul for LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn mul(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
        &self * &rhs
    }
}

impl One for LaurentPolynomial {
    fn one() -> Self {
        LaurentPolynomial::one()
    }
}

impl Zero for LaurentPolynomial {
    fn zero() -> Self {
        LaurentPolynomial::zero()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_terms_are_dropped() {
        let p = LaurentPolynomial::from_terms([(1, 2), (-1, 2), (3, -1)]);
        assert_eq!(p, LaurentPolynomial::monomial(3, -1));
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn delta_squared() {
        let d = LaurentPolynomial::delta();
        assert_eq!(d.pow(2), LaurentPolynomial::from_terms([(1, 4), (2, 0), (1, -4)]));
    }

    #[test]
    fn rendering() {
        let p = LaurentPolynomial::from_terms([(-1, 4), (-1, -4)]);
        assert_eq!(p.to_string(), "-1*A^-4 - 1*A^4");
        assert_eq!(p.to_t_string(), "-1*t^-1 - 1*t^1");
        assert_eq!(LaurentPolynomial::monomial(2, 2).to_t_string(), "2*t^(-1/2)");
        assert_eq!(LaurentPolynomial::zero().to_string(), "0");
    }

    #[test]
    fn big_coefficients_do_not_overflow() {
        let p = LaurentPolynomial::from_terms([(1, 1), (1, 0)]).pow(80);
        assert_eq!(p.coefficient(40).to_string(), "107507208733336176461620");
    }
}
