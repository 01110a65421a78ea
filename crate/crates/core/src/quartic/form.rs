//! Ternary quartic forms and linear substitutions.

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::ser::{Serialize, SerializeMap, Serializer};

use super::ring::{rat, Field};
use super::{QuarticError, QuarticParams};

/// Exponent triples `(i, j, k)` with `i + j + k = 4`, in lexicographically
/// descending order (`x⁴` first, `z⁴` last).
pub fn monomials() -> Vec<[u8; 3]> {
    let mut out = Vec::with_capacity(15);
    for i in (0..=4u8).rev() {
        for j in (0..=4 - i).rev() {
            out.push([i, j, 4 - i - j]);
        }
    }
    out
}

pub fn monomial_key(e: [u8; 3]) -> String {
    format!("{},{},{}", e[0], e[1], e[2])
}

// sparse homogeneous polynomial used during expansion
type Poly<F> = BTreeMap<[u8; 3], F>;

fn poly_mul<F: Field>(p: &Poly<F>, q: &Poly<F>) -> Poly<F> {
    let mut out: Poly<F> = BTreeMap::new();
    for (ea, ca) in p {
        for (eb, cb) in q {
            let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
            let term = ca.mul(cb);
            let slot = out.entry(e).or_insert_with(F::zero);
            *slot = slot.add(&term);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// A 3×3 matrix over a coefficient field, acting on column vectors `(x, y, z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat3<F> {
    pub m: [[F; 3]; 3],
}

impl<F: Field> Mat3<F> {
    pub fn new(m: [[F; 3]; 3]) -> Self {
        Mat3 { m }
    }

    pub fn identity() -> Self {
        Self::diag([F::one(), F::one(), F::one()])
    }

    pub fn diag(d: [F; 3]) -> Self {
        let [a, b, c] = d;
        Mat3::new([[a, F::zero(), F::zero()], [F::zero(), b, F::zero()], [F::zero(), F::zero(), c]])
    }

    pub fn from_ints(m: [[i64; 3]; 3]) -> Self {
        Mat3::new(m.map(|row| row.map(F::from_int)))
    }

    pub fn det(&self) -> F {
        let m = &self.m;
        let minor = |r1: usize, r2: usize, c1: usize, c2: usize| m[r1][c1].mul(&m[r2][c2]).sub(&m[r1][c2].mul(&m[r2][c1]));
        m[0][0]
            .mul(&minor(1, 2, 1, 2))
            .sub(&m[0][1].mul(&minor(1, 2, 0, 2)))
            .add(&m[0][2].mul(&minor(1, 2, 0, 1)))
    }

    pub fn mul(&self, rhs: &Mat3<F>) -> Mat3<F> {
        Mat3::new(std::array::from_fn(|i| {
            std::array::from_fn(|j| (0..3).fold(F::zero(), |acc, k| acc.add(&self.m[i][k].mul(&rhs.m[k][j]))))
        }))
    }
}

/// A homogeneous quartic `Σ c_e x^e0 y^e1 z^e2` with one coefficient per
/// monomial of degree 4.
#[derive(Clone, Debug, PartialEq)]
pub struct QuarticForm<F> {
    coeffs: BTreeMap<[u8; 3], F>,
}

impl<F: Field> QuarticForm<F> {
    pub fn zero() -> Self {
        QuarticForm { coeffs: monomials().into_iter().map(|e| (e, F::zero())).collect() }
    }

    /// Builds a form from `(exponents, coefficient)` pairs; every exponent
    /// triple must have degree 4. Unlisted monomials get coefficient zero.
    pub fn from_terms(terms: impl IntoIterator<Item = ([u8; 3], F)>) -> Result<Self, QuarticError> {
        let mut f = Self::zero();
        for (e, c) in terms {
            let slot = f.coeffs.get_mut(&e).ok_or(QuarticError::NotQuartic(e))?;
            *slot = slot.add(&c);
        }
        Ok(f)
    }

    /// `x⁴ + y⁴ + z⁴ + 2a x²y² + 2b x²z² + 2c y²z²`.
    pub fn family(p: &QuarticParams) -> Self {
        let two = rat(2);
        let terms = [
            ([4, 0, 0], rat(1)),
            ([0, 4, 0], rat(1)),
            ([0, 0, 4], rat(1)),
            ([2, 2, 0], &two * &p.a),
            ([2, 0, 2], &two * &p.b),
            ([0, 2, 2], &two * &p.c),
        ];
        Self::from_terms(terms.map(|(e, c)| (e, F::from_rational(&c)))).expect("degree-4 monomials")
    }

    pub fn coefficient(&self, e: [u8; 3]) -> F {
        self.coeffs.get(&e).cloned().unwrap_or_else(F::zero)
    }

    /// Coefficients in [`monomials`] order.
    pub fn coefficients(&self) -> Vec<F> {
        self.coeffs.iter().rev().map(|(_, c)| c.clone()).collect()
    }

    pub fn scale(&self, s: &F) -> Self {
        QuarticForm { coeffs: self.coeffs.iter().map(|(e, c)| (*e, c.mul(s))).collect() }
    }

    pub fn evaluate(&self, v: &[F; 3]) -> F {
        self.coeffs.iter().fold(F::zero(), |acc, (e, c)| {
            let term = c.mul(&v[0].pow(e[0] as u32)).mul(&v[1].pow(e[1] as u32)).mul(&v[2].pow(e[2] as u32));
            acc.add(&term)
        })
    }

    /// `f(M·(x, y, z))`, expanded exactly. Fails when `det M = 0`.
    pub fn transform(&self, m: &Mat3<F>) -> Result<Self, QuarticError> {
        if m.det().is_zero() {
            return Err(QuarticError::NotInvertible);
        }
        // the substituted coordinates as linear forms
        let linear: Vec<Poly<F>> = (0..3)
            .map(|row| {
                let mut p: Poly<F> = BTreeMap::new();
                for (col, e) in [[1, 0, 0], [0, 1, 0], [0, 0, 1]].into_iter().enumerate() {
                    if !m.m[row][col].is_zero() {
                        p.insert(e, m.m[row][col].clone());
                    }
                }
                p
            })
            .collect();
        let one: Poly<F> = BTreeMap::from([([0, 0, 0], F::one())]);
        // powers[v][k] = (linear form v)^k
        let powers: Vec<Vec<Poly<F>>> = linear
            .iter()
            .map(|l| {
                let mut ps = vec![one.clone()];
                for k in 1..=4 {
                    let next = poly_mul(&ps[k - 1], l);
                    ps.push(next);
                }
                ps
            })
            .collect();
        let mut out = Self::zero();
        for (e, c) in &self.coeffs {
            if c.is_zero() {
                continue;
            }
            let prod = poly_mul(
                &poly_mul(&powers[0][e[0] as usize], &powers[1][e[1] as usize]),
                &powers[2][e[2] as usize],
            );
            for (pe, pc) in prod {
                let slot = out.coeffs.get_mut(&pe).expect("substitution preserves degree");
                *slot = slot.add(&pc.mul(c));
            }
        }
        Ok(out)
    }

    /// The scalar `λ` with `self = λ · other`, if one exists (`other ≠ 0`).
    pub fn scalar_ratio(&self, other: &Self) -> Option<F> {
        let (e, pivot) = other.coeffs.iter().find(|(_, c)| !c.is_zero())?;
        let lambda = self.coefficient(*e).mul(&pivot.inv()?);
        (*self == other.scale(&lambda)).then_some(lambda)
    }
}

impl QuarticForm<BigRational> {
    /// Embeds a rational form into any coefficient field.
    pub fn lift<G: Field>(&self) -> QuarticForm<G> {
        QuarticForm { coeffs: self.coeffs.iter().map(|(e, c)| (*e, G::from_rational(c))).collect() }
    }
}

/// Serializes as a map from `"i,j,k"` to the coefficient's string form.
impl<F: Field> Serialize for QuarticForm<F> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.coeffs.len()))?;
        for (e, c) in &self.coeffs {
            map.serialize_entry(&monomial_key(*e), &c.to_string())?;
        }
        map.end()
    }
}
