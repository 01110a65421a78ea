//! The quartic family `C_abc: x⁴ + y⁴ + z⁴ + 2a x²y² + 2b x²z² + 2c y²z² = 0`.
//!
//! Everything here is exact: parameters are big rationals, forms live over
//! `Q`, `Q(i)` or `Q[t]/(t⁴ - 8)`, and the finite-field search works with
//! residues.

pub mod form;
pub mod ring;

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::modular::{inv_mod, is_prime};
pub use form::{monomial_key, monomials, Mat3, QuarticForm};
pub use ring::{rat, rational_string, Field, FourthRootOf8, Gaussian};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuarticError {
    #[error("modulus {0} is not an odd prime coprime to the parameter denominators")]
    BadModulus(u64),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("value {0} is excluded from the parameter domain")]
    ExcludedValue(String),
    #[error("exponents {0:?} do not form a degree-4 monomial")]
    NotQuartic([u8; 3]),
    #[error("not a signed slot permutation with sign product +1")]
    InvalidSymmetry,
    #[error("cannot parse {0:?} as a rational number")]
    BadRational(String),
}

pub fn parse_rational(s: &str) -> Result<BigRational, QuarticError> {
    BigRational::from_str(s.trim()).map_err(|_| QuarticError::BadRational(s.to_string()))
}

/// Parameters `(a, b, c)` of `C_abc`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuarticParams {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
}

impl QuarticParams {
    pub fn new(a: BigRational, b: BigRational, c: BigRational) -> Self {
        QuarticParams { a, b, c }
    }

    pub fn from_ints(a: i64, b: i64, c: i64) -> Self {
        QuarticParams::new(rat(a), rat(b), rat(c))
    }

    pub fn parse(a: &str, b: &str, c: &str) -> Result<Self, QuarticError> {
        Ok(QuarticParams::new(parse_rational(a)?, parse_rational(b)?, parse_rational(c)?))
    }

    pub fn as_array(&self) -> [&BigRational; 3] {
        [&self.a, &self.b, &self.c]
    }

    /// `a² + b² + c² - 2abc - 1`.
    pub fn criterion(&self) -> BigRational {
        let (a, b, c) = (&self.a, &self.b, &self.c);
        a * a + b * b + c * c - rat(2) * a * b * c - rat(1)
    }

    /// `(a² - 1)(b² - 1)(c² - 1)(a² + b² + c² - 2abc - 1)`; zero exactly
    /// when the curve is singular.
    pub fn discriminant_product(&self) -> BigRational {
        let lin = |x: &BigRational| x * x - rat(1);
        lin(&self.a) * lin(&self.b) * lin(&self.c) * self.criterion()
    }
}

impl fmt::Display for QuarticParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", rational_string(&self.a), rational_string(&self.b), rational_string(&self.c))
    }
}

impl Serialize for QuarticParams {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("QuarticParams", 3)?;
        st.serialize_field("a", &rational_string(&self.a))?;
        st.serialize_field("b", &rational_string(&self.b))?;
        st.serialize_field("c", &rational_string(&self.c))?;
        st.end()
    }
}

/// `C_abc` is singular iff one of `a, b, c` is `±1` or `a² + b² + c² - 2abc = 1`.
pub fn is_singular(p: &QuarticParams) -> bool {
    p.as_array().iter().any(|x| is_plus_minus_one(x)) || Zero::is_zero(&p.criterion())
}

fn is_plus_minus_one(x: &BigRational) -> bool {
    x.is_one() || (-x).is_one()
}

fn residue(x: &BigRational, q: u64) -> Result<u64, QuarticError> {
    let modulus = BigInt::from(q);
    let num = x.numer().mod_floor(&modulus).to_u64().expect("residue fits");
    let den = x.denom().mod_floor(&modulus).to_u64().expect("residue fits");
    let inv = inv_mod(den, q).ok_or(QuarticError::BadModulus(q))?;
    Ok(num * inv % q)
}

/// Whether the odd prime `q` divides the numerator of the discriminant product.
pub fn divides_discriminant(p: &QuarticParams, q: u64) -> Result<bool, QuarticError> {
    Ok(residue(&p.discriminant_product(), q)? == 0)
}

/// Points of `P²(F_q)` where `f` and its three partial derivatives vanish,
/// normalized so the first nonzero coordinate is 1.
pub fn singular_points_mod_q(p: &QuarticParams, q: u64) -> Result<Vec<[u64; 3]>, QuarticError> {
    if q == 2 || !is_prime(q) {
        return Err(QuarticError::BadModulus(q));
    }
    let [a, b, c] = [residue(&p.a, q)?, residue(&p.b, q)?, residue(&p.c, q)?];
    let mut points = Vec::new();
    for x in 0..q {
        for y in 0..q {
            points.push([1, x, y]);
        }
    }
    points.extend((0..q).map(|z| [0, 1, z]));
    points.push([0, 0, 1]);
    // f_x / 4x, f_y / 4y, f_z / 4z are the three quadrics below
    let vanishes = |[x, y, z]: [u64; 3]| {
        let (x2, y2, z2) = (x * x % q, y * y % q, z * z % q);
        let f = (x2 * x2 + y2 * y2 + z2 * z2 + 2 * (a * x2 % q * y2 + b * x2 % q * z2 + c * y2 % q * z2)) % q;
        let gx = x * ((x2 + a * y2 + b * z2) % q) % q;
        let gy = y * ((y2 + a * x2 + c * z2) % q) % q;
        let gz = z * ((z2 + b * x2 + c * y2) % q) % q;
        f == 0 && gx == 0 && gy == 0 && gz == 0
    };
    Ok(points.into_iter().filter(|&v| vanishes(v)).collect())
}

/// A signed permutation of the parameter slots: `g·(p0, p1, p2) = q` with
/// `q[i] = signs[i] · p[perm[i]]`. The sign product is always +1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ParamSymmetry {
    perm: [usize; 3],
    signs: [i8; 3],
}

impl ParamSymmetry {
    pub const IDENTITY: ParamSymmetry = ParamSymmetry { perm: [0, 1, 2], signs: [1, 1, 1] };

    pub fn new(perm: [usize; 3], signs: [i8; 3]) -> Result<Self, QuarticError> {
        let mut seen = [false; 3];
        for &i in &perm {
            if i > 2 || seen[i] {
                return Err(QuarticError::InvalidSymmetry);
            }
            seen[i] = true;
        }
        if signs.iter().any(|s| s.abs() != 1) || signs.iter().product::<i8>() != 1 {
            return Err(QuarticError::InvalidSymmetry);
        }
        Ok(ParamSymmetry { perm, signs })
    }

    /// `s: (a, b, c) ↦ (-a, -b, c)`.
    pub fn s() -> Self {
        ParamSymmetry { perm: [0, 1, 2], signs: [-1, -1, 1] }
    }

    pub fn swap(i: usize, j: usize) -> Self {
        let mut perm = [0, 1, 2];
        perm.swap(i, j);
        ParamSymmetry { perm, signs: [1, 1, 1] }
    }

    pub fn perm(&self) -> [usize; 3] {
        self.perm
    }

    pub fn signs(&self) -> [i8; 3] {
        self.signs
    }

    pub fn apply(&self, p: &QuarticParams) -> QuarticParams {
        let src = p.as_array();
        let slot = |i: usize| {
            let v = src[self.perm[i]].clone();
            if self.signs[i] < 0 {
                -v
            } else {
                v
            }
        };
        QuarticParams::new(slot(0), slot(1), slot(2))
    }

    /// `self ∘ other`, acting as `other` first.
    pub fn compose(&self, other: &ParamSymmetry) -> ParamSymmetry {
        ParamSymmetry {
            perm: std::array::from_fn(|i| other.perm[self.perm[i]]),
            signs: std::array::from_fn(|i| self.signs[i] * other.signs[self.perm[i]]),
        }
    }

    pub fn order(&self) -> usize {
        let mut g = *self;
        let mut k = 1;
        while g != ParamSymmetry::IDENTITY {
            g = g.compose(self);
            k += 1;
        }
        k
    }
}

fn generated_group(gens: &[ParamSymmetry]) -> Vec<ParamSymmetry> {
    let mut seen = BTreeSet::from([ParamSymmetry::IDENTITY]);
    let mut queue = VecDeque::from([ParamSymmetry::IDENTITY]);
    while let Some(g) = queue.pop_front() {
        for h in gens {
            let next = h.compose(&g);
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    seen.into_iter().collect()
}

/// The group `L ≅ S₄` generated by the slot permutations and `s`.
pub fn param_group_l() -> Vec<ParamSymmetry> {
    generated_group(&[ParamSymmetry::swap(0, 1), ParamSymmetry::swap(1, 2), ParamSymmetry::s()])
}

/// The order-8 subgroup generated by the `a ↔ b` swap and the sign maps.
pub fn subgroup_l_h() -> Vec<ParamSymmetry> {
    let sign = |signs| ParamSymmetry::new([0, 1, 2], signs).expect("product +1");
    generated_group(&[ParamSymmetry::swap(0, 1), sign([-1, -1, 1]), sign([-1, 1, -1])])
}

/// Counts of elements of order 1, 2, 3, 4 (other orders are not counted).
pub fn order_profile(group: &[ParamSymmetry]) -> [usize; 4] {
    let mut profile = [0; 4];
    for g in group {
        if let Some(slot) = profile.get_mut(g.order() - 1) {
            *slot += 1;
        }
    }
    profile
}

pub fn orbit_under(group: &[ParamSymmetry], p: &QuarticParams) -> BTreeSet<QuarticParams> {
    group.iter().map(|g| g.apply(p)).collect()
}

pub fn l_orbit(p: &QuarticParams) -> BTreeSet<QuarticParams> {
    orbit_under(&param_group_l(), p)
}

/// The 128 matrices `diag(v, r, u)` and `(v 0 0; 0 0 s; 0 t 0)` with entries
/// fourth roots of unity; up to the scalars `i^k` these are 32 projective
/// transformations commuting with `α: x ↦ -x`.
pub fn lh_matrix_family() -> Vec<Mat3<Gaussian>> {
    let root = Gaussian::i_pow;
    let zero = Gaussian::zero;
    let mut out = Vec::with_capacity(128);
    for v in 0..4 {
        for r in 0..4 {
            for u in 0..4 {
                out.push(Mat3::diag([root(v), root(r), root(u)]));
            }
        }
    }
    for v in 0..4 {
        for s in 0..4 {
            for t in 0..4 {
                out.push(Mat3::new([
                    [root(v), zero(), zero()],
                    [zero(), zero(), root(s)],
                    [zero(), root(t), zero()],
                ]));
            }
        }
    }
    out
}

/// The parameter map induced by a member of [`lh_matrix_family`]: `f_p ∘ M`
/// equals `f_{g·p}` for every `p`.
pub fn induced_symmetry(m: &Mat3<Gaussian>) -> Option<ParamSymmetry> {
    let sq = |x: &Gaussian| -> Option<i8> {
        let s = x.mul(x);
        if s == Gaussian::one() {
            Some(1)
        } else if s == Gaussian::from_int(-1) {
            Some(-1)
        } else {
            None
        }
    };
    let m = &m.m;
    let v = sq(&m[0][0])?;
    if !m[0][1].is_zero() || !m[0][2].is_zero() || !m[1][0].is_zero() || !m[2][0].is_zero() {
        return None;
    }
    if m[1][2].is_zero() && m[2][1].is_zero() {
        let (r, u) = (sq(&m[1][1])?, sq(&m[2][2])?);
        ParamSymmetry::new([0, 1, 2], [v * r, v * u, r * u]).ok()
    } else if m[1][1].is_zero() && m[2][2].is_zero() {
        let (s, t) = (sq(&m[1][2])?, sq(&m[2][1])?);
        ParamSymmetry::new([1, 0, 2], [v * t, v * s, s * t]).ok()
    } else {
        None
    }
}

/// A matrix of the family realizing `C_p ≅ C_{g·p}` by `transform`, up to
/// a scalar; `None` if there is none.
pub fn realize_symmetry(g: &ParamSymmetry, p: &QuarticParams) -> Option<Mat3<Gaussian>> {
    let f = QuarticForm::<BigRational>::family(p).lift::<Gaussian>();
    let target = QuarticForm::<BigRational>::family(&g.apply(p)).lift::<Gaussian>();
    lh_matrix_family()
        .into_iter()
        .find(|m| f.transform(m).ok().and_then(|h| h.scalar_ratio(&target)).is_some())
}

/// `(x, y, z) ↦ (x + z, t·y, x - z)` with `t⁴ = 8`.
pub fn fermat_transform() -> Mat3<FourthRootOf8> {
    let (o, z, t) = (FourthRootOf8::one(), FourthRootOf8::zero(), FourthRootOf8::t());
    Mat3::new([[o.clone(), z.clone(), o.clone()], [z.clone(), t, z.clone()], [o.clone(), z, o.neg()]])
}

/// Checks `f_{0,3,0}(x + z, t·y, x - z) = 8 · f_{0,0,0}` over `Q[t]/(t⁴ - 8)`.
pub fn fermat_identity_holds() -> bool {
    let f030 = QuarticForm::<BigRational>::family(&QuarticParams::from_ints(0, 3, 0)).lift::<FourthRootOf8>();
    let fermat = QuarticForm::<BigRational>::family(&QuarticParams::from_ints(0, 0, 0)).lift::<FourthRootOf8>();
    f030.transform(&fermat_transform()).map(|g| g == fermat.scale(&FourthRootOf8::from_int(8))).unwrap_or(false)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LambdaDirection {
    /// `a = (λ + 1)/(λ - 1)`.
    ToA,
    /// `λ = (a + 1)/(a - 1)`.
    ToLambda,
}

/// Converts between the Legendre parameter `λ` and the family parameter `a`.
/// The map is its own inverse; `λ ∈ {0, 1}` and `a ∈ {1, -1}` are excluded.
pub fn lambda_a_convert(value: &BigRational, direction: LambdaDirection) -> Result<BigRational, QuarticError> {
    let excluded = match direction {
        LambdaDirection::ToA => Zero::is_zero(value) || value.is_one(),
        LambdaDirection::ToLambda => is_plus_minus_one(value),
    };
    if excluded {
        return Err(QuarticError::ExcludedValue(rational_string(value)));
    }
    Ok((value + rat(1)) / (value - rat(1)))
}

/// `{λ, 1/λ, 1-λ, 1-1/λ, λ/(λ-1), 1/(1-λ)}`.
pub fn legendre_orbit(lambda: &BigRational) -> Result<BTreeSet<BigRational>, QuarticError> {
    if Zero::is_zero(lambda) || lambda.is_one() {
        return Err(QuarticError::ExcludedValue(rational_string(lambda)));
    }
    let one = rat(1);
    let l = lambda.clone();
    Ok(BTreeSet::from([
        l.clone(),
        l.recip(),
        &one - &l,
        &one - l.recip(),
        &l / (&l - &one),
        (&one - &l).recip(),
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn singularity_examples() {
        assert!(!is_singular(&QuarticParams::from_ints(0, 0, 0)));
        assert!(is_singular(&QuarticParams::from_ints(1, 2, 3)));
        assert!(is_singular(&QuarticParams::from_ints(2, -1, 3)));
        assert!(is_singular(&QuarticParams::from_ints(7, 2, 2)));
        assert!(!is_singular(&QuarticParams::from_ints(2, 3, 5)));
    }

    #[test]
    fn finite_field_witnesses() {
        assert!(singular_points_mod_q(&QuarticParams::from_ints(0, 0, 0), 5).unwrap().is_empty());
        assert!(singular_points_mod_q(&QuarticParams::from_ints(1, 2, 3), 13).unwrap().contains(&[1, 5, 0]));
        assert!(singular_points_mod_q(&QuarticParams::from_ints(7, 2, 2), 13).unwrap().contains(&[1, 1, 10]));
        assert_eq!(singular_points_mod_q(&QuarticParams::from_ints(0, 0, 0), 9), Err(QuarticError::BadModulus(9)));
        let third = QuarticParams::new(q(1, 3), rat(0), rat(0));
        assert_eq!(singular_points_mod_q(&third, 3), Err(QuarticError::BadModulus(3)));
    }

    #[test]
    fn symmetry_construction() {
        assert!(ParamSymmetry::new([0, 1, 2], [-1, 1, 1]).is_err());
        assert!(ParamSymmetry::new([0, 0, 2], [1, 1, 1]).is_err());
        let s = ParamSymmetry::s();
        assert_eq!(s.compose(&s), ParamSymmetry::IDENTITY);
        let p = QuarticParams::from_ints(2, 3, 5);
        assert_eq!(s.apply(&p), QuarticParams::from_ints(-2, -3, 5));
        let g = ParamSymmetry::swap(0, 2);
        assert_eq!(g.compose(&s).apply(&p), g.apply(&s.apply(&p)));
    }

    #[test]
    fn group_sizes() {
        let l = param_group_l();
        assert_eq!(l.len(), 24);
        assert_eq!(order_profile(&l), [1, 9, 8, 6]);
        assert_eq!(subgroup_l_h().len(), 8);
        assert!(subgroup_l_h().iter().all(|g| l.contains(g)));
    }

    #[test]
    fn orbits() {
        assert_eq!(l_orbit(&QuarticParams::from_ints(0, 0, 0)).len(), 1);
        assert_eq!(l_orbit(&QuarticParams::from_ints(2, 3, 5)).len(), 24);
        assert_eq!(l_orbit(&QuarticParams::from_ints(2, 2, 2)).len(), 4);
        assert_eq!(orbit_under(&subgroup_l_h(), &QuarticParams::from_ints(2, 3, 5)).len(), 8);
    }

    #[test]
    fn fermat() {
        assert!(fermat_identity_holds());
    }

    #[test]
    fn lambda_conversion() {
        use LambdaDirection::*;
        assert_eq!(lambda_a_convert(&rat(-1), ToA), Ok(rat(0)));
        assert_eq!(lambda_a_convert(&rat(2), ToA), Ok(rat(3)));
        assert_eq!(lambda_a_convert(&rat(3), ToLambda), Ok(rat(2)));
        assert_eq!(lambda_a_convert(&rat(1), ToLambda), Err(QuarticError::ExcludedValue("1".into())));
        assert!(lambda_a_convert(&rat(0), ToA).is_err());
    }

    #[test]
    fn legendre_orbits() {
        assert_eq!(legendre_orbit(&rat(2)).unwrap(), BTreeSet::from([rat(2), q(1, 2), rat(-1)]));
        let three = legendre_orbit(&rat(3)).unwrap();
        assert_eq!(three, BTreeSet::from([rat(3), q(1, 3), rat(-2), q(2, 3), q(3, 2), q(-1, 2)]));
        assert_eq!(legendre_orbit(&rat(-1)).unwrap(), legendre_orbit(&rat(2)).unwrap());
        assert!(legendre_orbit(&rat(1)).is_err());
    }

    #[test]
    fn lh_family_realizes_lh() {
        let family = lh_matrix_family();
        assert_eq!(family.len(), 128);
        let image: BTreeSet<ParamSymmetry> = family.iter().map(|m| induced_symmetry(m).unwrap()).collect();
        let lh: BTreeSet<ParamSymmetry> = subgroup_l_h().into_iter().collect();
        assert_eq!(image, lh);
    }
}
