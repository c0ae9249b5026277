use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Exponent vector of a monomial.
pub type Monomial = Vec<u32>;

/// Polynomial with integer coefficients in a fixed number of variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(vec![0; nvars], BigInt::one())
    }

    pub fn monomial(m: Monomial, c: BigInt) -> Self {
        let nvars = m.len();
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// The variable with index `i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = vec![0; nvars];
        m[i] = 1;
        Self::monomial(m, BigInt::one())
    }

    /// `Σ c_i x_i`.
    pub fn linear(coeffs: &[BigInt]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(
                {
                    let mut m = vec![0; n];
                    m[i] = 1;
                    m
                },
                c.clone(),
            );
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &[u32]) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree of a homogeneous polynomial, `None` for zero or mixed degrees.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut degs = self.terms.keys().map(|m| m.iter().sum::<u32>() as usize);
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d)
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> Poly {
        let mut out = Poly::zero(self.nvars);
        if k.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect();
        out
    }

    pub fn neg(&self) -> Poly {
        self.scale(&BigInt::from(-1))
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m: Monomial = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                out.add_term(m, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Poly::one(self.nvars), |acc, _| acc.mul(self))
    }

    /// Substitutes `images[i]` for variable `i`; images share a variable count.
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        let nv = images.first().map_or(self.nvars, Poly::nvars);
        let mut out = Poly::zero(nv);
        for (m, c) in &self.terms {
            let mut t = Poly::monomial(vec![0; nv], c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&images[i].pow(e));
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Writes the polynomial with the given variable names.
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        // highest monomials first reads more naturally
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        names[i].clone()
                    } else {
                        format!("{}^{e}", names[i])
                    }
                })
                .collect();
            let mono = mono.join("*");
            let abs = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if k == 0 {
                if c.is_negative() {
                    s.push('-');
                }
            } else {
                s.push_str(&format!(" {sign} "));
            }
            if mono.is_empty() {
                s.push_str(&abs.to_string());
            } else if abs.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{abs}*{mono}"));
            }
        }
        s
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("t{i}")).collect();
        f.write_str(&self.render(&names))
    }
}

/// All exponent vectors of total degree `k` in `nvars` variables, in
/// lexicographic order.
pub fn monomials_of_degree(nvars: usize, k: usize) -> Vec<Monomial> {
    fn rec(nvars: usize, k: u32, prefix: &mut Monomial, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == nvars {
            prefix.push(k);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=k).rev() {
            prefix.push(e);
            rec(nvars, k - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if k == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(nvars, k as u32, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_of_degree(4, 0), vec![vec![0, 0, 0, 0]]);
    }

    #[test]
    fn arithmetic() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let s = x.add(&y);
        let sq = s.mul(&s);
        assert_eq!(sq.coefficient(&[1, 1]), 2.into());
        let sub = sq.substitute(&[y.clone(), x.neg()]);
        assert_eq!(sub.coefficient(&[1, 1]), (-2).into());
        let names = vec!["x".to_string(), "y".to_string()];
        assert_eq!(sq.render(&names), "x^2 + 2*x*y + y^2");
    }
}
