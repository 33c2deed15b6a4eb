//! Univariate polynomials over the exact scalars.
//!
//! This is the scalar machinery behind the spectral checks and the Levelt
//! reduction: monic division, gcd, Taylor shift, integer root extraction, and
//! Lagrange interpolation. Coefficients are stored in ascending order; the
//! zero polynomial is the empty coefficient list.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::{as_rational_integer, is_rational_integer, Exact, Scalar};

#[derive(Clone, PartialEq, Debug)]
pub struct CPoly {
    coeffs: Vec<Exact>,
}

impl CPoly {
    pub fn zero() -> Self {
        CPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        CPoly {
            coeffs: vec![Exact::one()],
        }
    }

    pub fn constant(c: Exact) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn from_coeffs(coeffs: Vec<Exact>) -> Self {
        let mut p = CPoly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, k: usize) -> Exact {
        self.coeffs.get(k).cloned().unwrap_or_else(Exact::zero)
    }

    pub fn coeffs(&self) -> &[Exact] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&Exact> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Self::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - other.coeff(k)).collect();
        Self::from_coeffs(coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Exact::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &Exact) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Euclidean division: `self = q * div + r` with `deg r < deg div`.
    /// Panics on division by the zero polynomial.
    pub fn div_rem(&self, div: &Self) -> (Self, Self) {
        let dd = div.degree().expect("division by zero polynomial");
        let lead = div.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Exact::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let factor = rem[k].clone() / lead.clone();
            if factor.is_zero() {
                continue;
            }
            quot[k - dd] = factor.clone();
            for (j, dc) in div.coeffs.iter().enumerate() {
                rem[k - dd + j] = rem[k - dd + j].clone() - factor.clone() * dc.clone();
            }
        }
        (Self::from_coeffs(quot), Self::from_coeffs(rem))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => self.scale(&(Exact::one() / l.clone())),
        }
    }

    /// Monic gcd by the Euclidean algorithm.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.clone() * Exact::from_i64(k as i64))
            .collect();
        Self::from_coeffs(coeffs)
    }

    pub fn eval(&self, x: &Exact) -> Exact {
        let mut acc = Exact::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    /// Taylor shift: the polynomial `p(x + c)`.
    pub fn shift(&self, c: &Exact) -> Self {
        let n = self.coeffs.len();
        if n == 0 || c.is_zero() {
            return self.clone();
        }
        // repeated synthetic division by (x - (-c))
        let mut coeffs = self.coeffs.clone();
        for i in 0..n - 1 {
            for k in (i..n - 1).rev() {
                let add = coeffs[k + 1].clone() * c.clone();
                coeffs[k] = coeffs[k].clone() + add;
            }
        }
        Self::from_coeffs(coeffs)
    }

    /// True when the squarefree test `gcd(p, p') = 1` holds.
    pub fn is_squarefree(&self) -> bool {
        if self.is_constant() {
            return true;
        }
        self.gcd(&self.derivative()).is_constant()
    }

    /// An integer bound on the modulus of every root of a monic polynomial
    /// (Cauchy bound, using |re| + |im| as an over-estimate of each modulus).
    pub fn root_bound(&self) -> BigInt {
        let Some(d) = self.degree() else {
            return BigInt::zero();
        };
        let lead = self.leading().unwrap().clone();
        let mut max = BigInt::one();
        for c in &self.coeffs[..d] {
            let q = c.clone() / lead.clone();
            let size = q.re.abs() + q.im.abs();
            // ceil of the rational bound
            let ceil = (size.numer() + size.denom() - BigInt::one()) / size.denom();
            if ceil > max {
                max = ceil;
            }
        }
        max + BigInt::one()
    }
}

/// Integer roots with multiplicity, or `None` if the polynomial does not
/// split over the integers. The input must be nonconstant; the root list has
/// `deg p` entries counted with multiplicity, sorted descending.
pub fn integer_roots(p: &CPoly) -> Option<Vec<BigInt>> {
    let monic = p.monic();
    let deg = monic.degree()?;
    if deg == 0 {
        return Some(Vec::new());
    }
    // a monic polynomial with integer roots has integer coefficients
    if !monic.coeffs().iter().all(is_rational_integer) {
        return None;
    }
    let mut current = monic;
    let mut roots = Vec::new();
    while current.degree().is_some_and(|d| d > 0) {
        let constant = current.coeff(0);
        let root = if constant.is_zero() {
            Some(BigInt::zero())
        } else {
            let a0 = as_rational_integer(&constant)?;
            divisors(&a0.abs())
                .into_iter()
                .flat_map(|d| [d.clone(), -d])
                .find(|cand| current.eval(&int_exact(cand)).is_zero())
        };
        let r = root?;
        let linear = CPoly::from_coeffs(vec![-int_exact(&r), Exact::one()]);
        let (q, rem) = current.div_rem(&linear);
        debug_assert!(rem.is_zero());
        // deflation can expose non-integer coefficients only through bugs:
        // dividing an integer polynomial by (x - r) stays integral
        current = q;
        roots.push(r);
    }
    roots.sort();
    roots.reverse();
    Some(roots)
}

/// Distinct positive integer roots of `p`, in ascending order. Unlike
/// [`integer_roots`], this does not require `p` to split over the integers.
pub fn positive_integer_roots(p: &CPoly) -> Vec<BigInt> {
    let mut current = p.monic();
    // strip the zero roots
    while current.degree().is_some_and(|d| d > 0) && current.coeff(0).is_zero() {
        let (q, _) = current.div_rem(&CPoly::from_coeffs(vec![Exact::zero(), Exact::one()]));
        current = q;
    }
    if current.degree().is_none_or(|d| d == 0) {
        return Vec::new();
    }
    // clear denominators: integer roots n then satisfy c0 = n * (...) in the
    // Gaussian integers, so n divides gcd(Re c0, Im c0)
    let mut lcm = BigInt::one();
    for c in current.coeffs() {
        lcm = num_integer::lcm(lcm.clone(), c.re.denom().clone());
        lcm = num_integer::lcm(lcm, c.im.denom().clone());
    }
    let c0 = current.coeff(0)
        * Exact::new(
            num_rational::BigRational::from_integer(lcm.clone()),
            num_rational::BigRational::zero(),
        );
    debug_assert!(c0.re.denom().is_one() && c0.im.denom().is_one());
    let g = num_integer::gcd(c0.re.numer().abs(), c0.im.numer().abs());
    if g.is_zero() {
        return Vec::new();
    }
    let mut roots: Vec<BigInt> = divisors(&g)
        .into_iter()
        .filter(|n| current.eval(&int_exact(n)).is_zero())
        .collect();
    roots.sort();
    roots
}

fn int_exact(n: &BigInt) -> Exact {
    Exact::new(
        num_rational::BigRational::from_integer(n.clone()),
        num_rational::BigRational::zero(),
    )
}

/// All positive divisors of `n > 0` by trial division.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut divs = Vec::new();
    if let Some(small) = n.to_u64() {
        let mut d = 1u64;
        while d.saturating_mul(d) <= small {
            if small % d == 0 {
                divs.push(BigInt::from(d));
                if d != small / d {
                    divs.push(BigInt::from(small / d));
                }
            }
            d += 1;
        }
    } else {
        let mut d = BigInt::one();
        while &d * &d <= *n {
            if (n % &d).is_zero() {
                divs.push(d.clone());
                let other = n / &d;
                if other != d {
                    divs.push(other);
                }
            }
            d += 1;
        }
    }
    divs.sort();
    divs
}

/// Lagrange interpolation through exact sample points with distinct abscissae.
pub fn interpolate(points: &[(Exact, Exact)]) -> CPoly {
    let mut acc = CPoly::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        let mut basis = CPoly::one();
        let mut denom = Exact::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            basis = basis.mul(&CPoly::from_coeffs(vec![-xj.clone(), Exact::one()]));
            denom *= xi.clone() - xj.clone();
        }
        acc = acc.add(&basis.scale(&(yi.clone() / denom)));
    }
    acc
}
