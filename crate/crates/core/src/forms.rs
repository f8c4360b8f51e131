//! Homogeneous ternary forms.
//!
//! A form of degree d is kept in one of two coordinate systems, tracked in
//! its type:
//!
//! * [`Monomial`]: f = sum_i a_i x^i, the plain coefficient of each monomial.
//! * [`ACoords`]: f = sum_i (d!/i!) A_i x^i, symmetric-tensor coordinates.
//!   In these coordinates the d-th power of l = l1 x1 + l2 x2 + l3 x3 has
//!   A_i = l1^i1 l2^i2 l3^i3, which is what the symbolic method substitutes.
//!
//! Products and substitutions only make sense on monomial coordinates, so
//! they are only implemented there.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::scalars::Ring;

/// Exponent vector (i1, i2, i3) of a monomial x1^i1 x2^i2 x3^i3.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MultiIndex(pub [u32; 3]);

impl MultiIndex {
    pub const fn new(i1: u32, i2: u32, i3: u32) -> Self {
        Self([i1, i2, i3])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn first(&self) -> u32 {
        self.0[0]
    }

    pub fn plus(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex([
            self.0[0] + other.0[0],
            self.0[1] + other.0[1],
            self.0[2] + other.0[2],
        ])
    }

    /// d! / (i1! i2! i3!) for d = |i|.
    pub fn multinomial(&self) -> BigInt {
        let [a, b, c] = self.0;
        crate::scalars::binom_exact((a + b + c) as u64, a as i64)
            * crate::scalars::binom_exact((b + c) as u64, b as i64)
    }

    /// Position of this index in [`basis`] of its degree.
    pub fn basis_position(&self) -> usize {
        let d = self.degree() as usize;
        let [a, b, _] = self.0;
        let (a, b) = (a as usize, b as usize);
        // Indices with first entry > a come first: sum_{k=a+1}^{d} (d - k + 1).
        let before: usize = (a + 1..=d).map(|k| d - k + 1).sum();
        before + (d - a - b)
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

/// All multi-indices of weight d, descending in i1 and then in i2.
///
/// This fixes the row order of every matrix built from forms.
pub fn basis(d: u32) -> Vec<MultiIndex> {
    let mut out = Vec::with_capacity(((d + 1) * (d + 2) / 2) as usize);
    for a in (0..=d).rev() {
        for b in (0..=d - a).rev() {
            out.push(MultiIndex::new(a, b, d - a - b));
        }
    }
    out
}

/// l1 x1 + l2 x2 + l3 x3.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinearForm<T>(pub [T; 3]);

impl<T: Ring> LinearForm<T> {
    pub fn new(l1: T, l2: T, l3: T) -> Self {
        Self([l1, l2, l3])
    }

    pub fn x(r: usize) -> Self {
        let mut c = [T::zero(), T::zero(), T::zero()];
        c[r] = T::one();
        Self(c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    /// l^i = l1^i1 l2^i2 l3^i3.
    pub fn monomial_value(&self, i: &MultiIndex) -> T {
        (0..3).fold(T::one(), |acc, r| acc * self.0[r].pow(i.0[r] as u64))
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> LinearForm<U> {
        LinearForm([f(&self.0[0]), f(&self.0[1]), f(&self.0[2])])
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|c| c.clone() * s.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        LinearForm([
            self.0[0].clone() + other.0[0].clone(),
            self.0[1].clone() + other.0[1].clone(),
            self.0[2].clone() + other.0[2].clone(),
        ])
    }

    /// The form l(M x), i.e. coefficient vector M^T l.
    pub fn pullback(&self, m: &[[T; 3]; 3]) -> Self {
        let c = |s: usize| {
            (0..3).fold(T::zero(), |acc, r| acc + self.0[r].clone() * m[r][s].clone())
        };
        LinearForm([c(0), c(1), c(2)])
    }
}

impl LinearForm<BigInt> {
    pub fn int(l1: i64, l2: i64, l3: i64) -> Self {
        Self([l1.into(), l2.into(), l3.into()])
    }
}

impl<T: fmt::Debug> fmt::Debug for LinearForm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}, {:?}]", self.0[0], self.0[1], self.0[2])
    }
}

/// Marker for a coordinate system of [`HomForm`].
pub trait Coordinates: Clone + Copy + fmt::Debug + PartialEq + Eq + Send + Sync {
    const NAME: &'static str;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Monomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ACoords;

impl Coordinates for Monomial {
    const NAME: &'static str = "monomial";
}

impl Coordinates for ACoords {
    const NAME: &'static str = "A";
}

/// A homogeneous ternary form, stored sparsely.
#[derive(Clone, PartialEq)]
pub struct HomForm<T, C: Coordinates = Monomial> {
    degree: u32,
    coeffs: BTreeMap<MultiIndex, T>,
    _coords: PhantomData<C>,
}

impl<T: Ring, C: Coordinates> HomForm<T, C> {
    pub fn zero(degree: u32) -> Self {
        Self {
            degree,
            coeffs: BTreeMap::new(),
            _coords: PhantomData,
        }
    }

    /// Builds a form from (index, coefficient) pairs, summing repeats.
    pub fn from_terms(degree: u32, terms: impl IntoIterator<Item = (MultiIndex, T)>) -> Self {
        let mut f = Self::zero(degree);
        for (i, c) in terms {
            f.add_term(i, c);
        }
        f
    }

    /// Coefficients listed in [`basis`] order.
    pub fn from_dense(degree: u32, values: Vec<T>) -> Self {
        let b = basis(degree);
        assert_eq!(b.len(), values.len(), "dense vector has wrong length");
        Self::from_terms(degree, b.into_iter().zip(values))
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn add_term(&mut self, i: MultiIndex, c: T) {
        assert_eq!(i.degree(), self.degree, "index {i:?} has wrong weight");
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&i) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_zero() {
                    self.coeffs.remove(&i);
                }
            }
            None => {
                self.coeffs.insert(i, c);
            }
        }
    }

    pub fn coeff(&self, i: &MultiIndex) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    /// Nonzero terms.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &T)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficients in [`basis`] order.
    pub fn dense(&self) -> Vec<T> {
        basis(self.degree).iter().map(|i| self.coeff(i)).collect()
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::from_terms(
            self.degree,
            self.coeffs.iter().map(|(i, c)| (*i, c.clone() * s.clone())),
        )
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> HomForm<U, C> {
        HomForm::from_terms(self.degree, self.coeffs.iter().map(|(i, c)| (*i, f(c))))
    }
}

impl<T: Ring, C: Coordinates> Add for HomForm<T, C> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        assert_eq!(self.degree, rhs.degree, "adding forms of different degree");
        for (i, c) in rhs.coeffs {
            self.add_term(i, c);
        }
        self
    }
}

impl<T: Ring, C: Coordinates> Neg for HomForm<T, C> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            degree: self.degree,
            coeffs: self.coeffs.into_iter().map(|(i, c)| (i, -c)).collect(),
            _coords: PhantomData,
        }
    }
}

impl<T: Ring, C: Coordinates> Sub for HomForm<T, C> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: Ring> HomForm<T, Monomial> {
    pub fn constant(c: T) -> Self {
        Self::from_terms(0, [(MultiIndex::new(0, 0, 0), c)])
    }

    pub fn from_linear(l: &LinearForm<T>) -> Self {
        Self::from_terms(
            1,
            (0..3).map(|r| {
                let mut e = [0; 3];
                e[r] = 1;
                (MultiIndex(e), l.0[r].clone())
            }),
        )
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero(self.degree + rhs.degree);
        for (i, a) in &self.coeffs {
            for (j, b) in &rhs.coeffs {
                out.add_term(i.plus(j), a.clone() * b.clone());
            }
        }
        out
    }

    /// A-coordinates: A_i = a_i * i! / d!.
    pub fn to_a_coords(&self) -> HomForm<T, ACoords>
    where
        T: DivExact,
    {
        HomForm::from_terms(
            self.degree,
            self.coeffs
                .iter()
                .map(|(i, c)| (*i, c.div_exact(&i.multinomial()))),
        )
    }

    /// The form f(M x).
    pub fn substitute(&self, m: &[[T; 3]; 3]) -> Self {
        let images: Vec<Self> = (0..3)
            .map(|r| Self::from_linear(&LinearForm(m[r].clone())))
            .collect();
        let mut out = Self::zero(self.degree);
        for (i, c) in &self.coeffs {
            let mut term = Self::constant(c.clone());
            for (image, &e) in images.iter().zip(&i.0) {
                for _ in 0..e {
                    term = term.mul(image);
                }
            }
            out = out + term;
        }
        out
    }
}

impl<T: Ring> HomForm<T, ACoords> {
    /// a_i = (d!/i!) A_i.
    pub fn to_monomial(&self) -> HomForm<T, Monomial> {
        HomForm::from_terms(
            self.degree,
            self.coeffs
                .iter()
                .map(|(i, c)| (*i, c.clone() * T::from_int(&i.multinomial()))),
        )
    }
}

/// Division that is known to be exact (rationals divide by anything nonzero).
pub trait DivExact {
    fn div_exact(&self, d: &BigInt) -> Self;
}

impl DivExact for BigRational {
    fn div_exact(&self, d: &BigInt) -> Self {
        self / BigRational::from_integer(d.clone())
    }
}

impl<T: Ring + fmt::Debug, C: Coordinates> fmt::Debug for HomForm<T, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HomForm<{}>(deg {}; ", C::NAME, self.degree)?;
        let mut first = true;
        for (i, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c:?}*x^{i:?}")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}

/// d-th power of a linear form in A-coordinates: A_i = l^i.
pub fn power_of_linear<T: Ring>(l: &LinearForm<T>, d: u32) -> HomForm<T, ACoords> {
    // Powers of each coordinate are shared across the whole basis.
    let pows: Vec<Vec<T>> = (0..3)
        .map(|r| {
            let mut v = Vec::with_capacity(d as usize + 1);
            let mut acc = T::one();
            for _ in 0..=d {
                v.push(acc.clone());
                acc = acc * l.0[r].clone();
            }
            v
        })
        .collect();
    HomForm::from_terms(
        d,
        basis(d).into_iter().map(|i| {
            let v = pows[0][i.0[0] as usize].clone()
                * pows[1][i.0[1] as usize].clone()
                * pows[2][i.0[2] as usize].clone();
            (i, v)
        }),
    )
}

/// One summand w * l^d of a form written as a sum of powers.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedPower<T> {
    pub weight: T,
    pub form: LinearForm<T>,
}

impl<T: Ring> WeightedPower<T> {
    pub fn new(weight: T, form: LinearForm<T>) -> Self {
        Self { weight, form }
    }

    pub fn unit(form: LinearForm<T>) -> Self {
        Self::new(T::one(), form)
    }
}

/// sum_k w_k l_k^d in A-coordinates.
pub fn sum_of_powers<T: Ring>(terms: &[WeightedPower<T>], d: u32) -> HomForm<T, ACoords> {
    terms.iter().fold(HomForm::zero(d), |acc, t| {
        acc + power_of_linear(&t.form, d).scale(&t.weight)
    })
}

/// Expanded product of linear forms, in monomial coordinates.
pub fn mul_linears<T: Ring>(ls: &[LinearForm<T>]) -> HomForm<T, Monomial> {
    ls.iter().fold(HomForm::constant(T::one()), |acc, l| {
        acc.mul(&HomForm::from_linear(l))
    })
}

/// Product of the squares of the given linear forms.
pub fn mul_linear_squares<T: Ring>(ls: &[LinearForm<T>]) -> HomForm<T, Monomial> {
    let p = mul_linears(ls);
    p.mul(&p)
}
