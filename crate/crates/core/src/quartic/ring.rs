//! Exact coefficient fields: `Q`, `Q(i)` and `Q[t]/(t⁴ - 8)`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// The operations quartic forms need from their coefficients. All three
/// implementations are fields, so `inv` fails only on zero.
pub trait Field: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(q: &BigRational) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    fn from_int(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(n)))
    }

    fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }
}

/// Formats a rational as `n` or `n/d`.
pub fn rational_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn neg(&self) -> Self {
        -self
    }

    fn inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
}

/// `re + im·i` with `i² = -1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gaussian {
    pub re: BigRational,
    pub im: BigRational,
}

impl Gaussian {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Gaussian { re, im }
    }

    pub fn i() -> Self {
        Gaussian::new(rat(0), rat(1))
    }

    /// `i^k`.
    pub fn i_pow(k: u32) -> Self {
        Gaussian::i().pow(k % 4)
    }
}

impl Field for Gaussian {
    fn zero() -> Self {
        Gaussian::new(rat(0), rat(0))
    }

    fn one() -> Self {
        Gaussian::new(rat(1), rat(0))
    }

    fn from_rational(q: &BigRational) -> Self {
        Gaussian::new(q.clone(), rat(0))
    }

    fn add(&self, rhs: &Self) -> Self {
        Gaussian::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }

    fn mul(&self, rhs: &Self) -> Self {
        Gaussian::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }

    fn neg(&self) -> Self {
        Gaussian::new(-&self.re, -&self.im)
    }

    fn inv(&self) -> Option<Self> {
        let norm = &self.re * &self.re + &self.im * &self.im;
        if Zero::is_zero(&norm) {
            return None;
        }
        Some(Gaussian::new(&self.re / &norm, -&self.im / &norm))
    }
}

impl fmt::Display for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (Zero::is_zero(&self.re), Zero::is_zero(&self.im)) {
            (_, true) => write!(f, "{}", rational_string(&self.re)),
            (true, false) => write!(f, "{}*i", rational_string(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { "-" } else { "+" };
                write!(f, "{} {} {}*i", rational_string(&self.re), sign, rational_string(&self.im.abs()))
            }
        }
    }
}

/// `c0 + c1 t + c2 t² + c3 t³` modulo `t⁴ = 8`, so `t` is a fourth root of 8.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FourthRootOf8 {
    pub c: [BigRational; 4],
}

impl FourthRootOf8 {
    pub fn new(c: [BigRational; 4]) -> Self {
        FourthRootOf8 { c }
    }

    pub fn t() -> Self {
        FourthRootOf8::new([rat(0), rat(1), rat(0), rat(0)])
    }

    // matrix of multiplication by self in the basis 1, t, t², t³
    fn mul_matrix(&self) -> [[BigRational; 4]; 4] {
        let mut m: [[BigRational; 4]; 4] = std::array::from_fn(|_| std::array::from_fn(|_| rat(0)));
        for j in 0..4 {
            let mut basis = [rat(0), rat(0), rat(0), rat(0)];
            basis[j] = rat(1);
            let col = self.mul(&FourthRootOf8::new(basis));
            for i in 0..4 {
                m[i][j] = col.c[i].clone();
            }
        }
        m
    }
}

impl Field for FourthRootOf8 {
    fn zero() -> Self {
        FourthRootOf8::new([rat(0), rat(0), rat(0), rat(0)])
    }

    fn one() -> Self {
        FourthRootOf8::new([rat(1), rat(0), rat(0), rat(0)])
    }

    fn from_rational(q: &BigRational) -> Self {
        FourthRootOf8::new([q.clone(), rat(0), rat(0), rat(0)])
    }

    fn add(&self, rhs: &Self) -> Self {
        FourthRootOf8::new(std::array::from_fn(|k| &self.c[k] + &rhs.c[k]))
    }

    fn mul(&self, rhs: &Self) -> Self {
        let mut out = [rat(0), rat(0), rat(0), rat(0)];
        for i in 0..4 {
            for j in 0..4 {
                let term = &self.c[i] * &rhs.c[j];
                if i + j < 4 {
                    out[i + j] += term;
                } else {
                    out[i + j - 4] += term * rat(8);
                }
            }
        }
        FourthRootOf8::new(out)
    }

    fn neg(&self) -> Self {
        FourthRootOf8::new(std::array::from_fn(|k| -&self.c[k]))
    }

    fn inv(&self) -> Option<Self> {
        // solve (mult. by self) x = 1 by Gauss-Jordan; singular iff self = 0
        let mut m = self.mul_matrix();
        let mut rhs = [rat(1), rat(0), rat(0), rat(0)];
        for col in 0..4 {
            let pivot = (col..4).find(|&r| !Zero::is_zero(&m[r][col]))?;
            m.swap(col, pivot);
            rhs.swap(col, pivot);
            let p = m[col][col].clone();
            for k in 0..4 {
                m[col][k] = &m[col][k] / &p;
            }
            rhs[col] = &rhs[col] / &p;
            for r in 0..4 {
                if r != col && !Zero::is_zero(&m[r][col]) {
                    let factor = m[r][col].clone();
                    for k in 0..4 {
                        let sub = &factor * &m[col][k];
                        m[r][k] -= sub;
                    }
                    let sub = &factor * &rhs[col];
                    rhs[r] -= sub;
                }
            }
        }
        Some(FourthRootOf8::new(rhs))
    }
}

impl fmt::Display for FourthRootOf8 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, c) in self.c.iter().enumerate() {
            if Zero::is_zero(c) {
                continue;
            }
            let power = if k == 1 { "t".to_string() } else { format!("t^{k}") };
            parts.push(match k {
                0 => rational_string(c),
                _ if c.is_one() => power,
                _ => format!("{}*{power}", rational_string(c)),
            });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}
