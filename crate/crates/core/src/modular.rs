//! Arithmetic in SL2(Z/m), torsion configurations and the congruence-group
//! model of the Veech groups of `D_P`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::orbit::{CosetAction, CosetActionJson};
use crate::perm::Permutation;
use crate::sl2::{Generator, MatZ};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModularError {
    #[error("modulus {0} is too small")]
    ModulusTooSmall(u64),
    #[error("the torsion point (p, q) must be nonzero mod n")]
    ZeroPoint,
    #[error("n = {0} is even")]
    NotOdd(u64),
    #[error("p^2 + q^2 is not a unit mod n")]
    NotGeneralPosition,
    #[error("trace is {0}, expected 0")]
    BadTrace(u64),
    #[error("determinant is {0}, expected 1")]
    BadDet(u64),
    #[error("modulus 2 is not supported")]
    EvenModulus,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("vectors are linearly dependent")]
    Dependent,
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// Inverse of `x` modulo `m`, if it is a unit.
pub fn inv_mod(x: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (x % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(m as i128) as u64)
}

// smallest square root of x mod prime p
fn sqrt_mod(x: u64, p: u64) -> Option<u64> {
    (0..p).find(|r| r * r % p == x % p)
}

fn is_square_mod(x: u64, p: u64) -> bool {
    x % p != 0 && pow_mod(x, (p - 1) / 2, p) == 1
}

/// A 2×2 matrix over `Z/m` with determinant 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MatMod {
    pub modulus: u64,
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

impl MatMod {
    /// Reduces the entries; `None` unless the determinant is 1 mod `modulus`.
    pub fn new(modulus: u64, a: i64, b: i64, c: i64, d: i64) -> Option<MatMod> {
        let m = Self::from_entries_unchecked(modulus, a, b, c, d);
        (m.det() == 1 % modulus).then_some(m)
    }

    fn from_entries_unchecked(modulus: u64, a: i64, b: i64, c: i64, d: i64) -> MatMod {
        let r = |x: i64| x.rem_euclid(modulus as i64) as u64;
        MatMod { modulus, a: r(a), b: r(b), c: r(c), d: r(d) }
    }

    pub fn identity(modulus: u64) -> MatMod {
        Self::from_entries_unchecked(modulus, 1, 0, 0, 1)
    }

    pub fn s(modulus: u64) -> MatMod {
        Self::from_entries_unchecked(modulus, 0, -1, 1, 0)
    }

    pub fn t(modulus: u64) -> MatMod {
        Self::from_entries_unchecked(modulus, 1, 1, 0, 1)
    }

    pub fn reduce(m: &MatZ, modulus: u64) -> MatMod {
        Self::from_entries_unchecked(modulus, m.a, m.b, m.c, m.d)
    }

    pub fn det(&self) -> u64 {
        let m = self.modulus;
        (self.a * self.d % m + m - self.b * self.c % m) % m
    }

    pub fn trace(&self) -> u64 {
        (self.a + self.d) % self.modulus
    }

    pub fn neg(&self) -> MatMod {
        let m = self.modulus;
        let n = |x: u64| (m - x) % m;
        MatMod { modulus: m, a: n(self.a), b: n(self.b), c: n(self.c), d: n(self.d) }
    }

    /// Inverse via the adjugate (determinant 1).
    pub fn inverse(&self) -> MatMod {
        let m = self.modulus;
        MatMod { modulus: m, a: self.d, b: (m - self.b) % m, c: (m - self.c) % m, d: self.a }
    }

    pub fn mul(&self, rhs: &MatMod) -> MatMod {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let m = self.modulus;
        MatMod {
            modulus: m,
            a: (self.a * rhs.a + self.b * rhs.c) % m,
            b: (self.a * rhs.b + self.b * rhs.d) % m,
            c: (self.c * rhs.a + self.d * rhs.c) % m,
            d: (self.c * rhs.b + self.d * rhs.d) % m,
        }
    }

    pub fn apply(&self, v: [u64; 2]) -> [u64; 2] {
        let m = self.modulus;
        [(self.a * v[0] + self.b * v[1]) % m, (self.c * v[0] + self.d * v[1]) % m]
    }

    /// Reduction to a divisor of the modulus.
    pub fn project(&self, modulus: u64) -> MatMod {
        debug_assert_eq!(self.modulus % modulus, 0);
        MatMod {
            modulus,
            a: self.a % modulus,
            b: self.b % modulus,
            c: self.c % modulus,
            d: self.d % modulus,
        }
    }

    // dense index in 0..m^4
    fn code(&self) -> u64 {
        let m = self.modulus;
        ((self.a * m + self.b) * m + self.c) * m + self.d
    }
}

impl fmt::Display for MatMod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {}) mod {}", self.a, self.b, self.c, self.d, self.modulus)
    }
}

/// `|SL2(Z/m)| = m³ ∏_{p | m} (1 - p⁻²)`.
pub fn sl2_group_order(m: u64) -> u64 {
    prime_divisors(m)
        .into_iter()
        .fold(m * m * m, |acc, p| acc / (p * p) * (p * p - 1))
}

/// All of SL2(Z/m) by brute force, in lexicographic order of `(a, b, c, d)`.
pub fn enumerate_sl2(m: u64) -> Vec<MatMod> {
    let mut out = Vec::new();
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                for d in 0..m {
                    let x = MatMod { modulus: m, a, b, c, d };
                    if x.det() == 1 % m {
                        out.push(x);
                    }
                }
            }
        }
    }
    out
}

/// Least common multiple of the cusp widths (the cycle lengths of `T`).
pub fn wohlfahrt_level(action: &CosetAction) -> u64 {
    action.perm_t().cycle_type().into_iter().fold(1u64, |acc, len| {
        let len = len as u64;
        acc / gcd(acc, len) * len
    })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Whether the action factors through SL2(Z/m), i.e. the described group
/// contains the principal congruence subgroup of level `m`. Walks the Cayley
/// graph of SL2(Z/m), assigning each element its permutation and checking
/// consistency.
pub fn factors_through(action: &CosetAction, m: u64) -> bool {
    let size = action.size();
    let (ps, pt) = (action.perm_s(), action.perm_t());
    let identity: Vec<usize> = (0..size).collect();
    let mut image: HashMap<u64, Vec<usize>> = HashMap::new();
    image.insert(MatMod::identity(m).code(), identity);
    let mut queue = VecDeque::from([MatMod::identity(m)]);
    while let Some(g) = queue.pop_front() {
        let rho_g = image[&g.code()].clone();
        for (gen, perm) in [(MatMod::s(m), ps), (MatMod::t(m), pt)] {
            // left action: rho(g h) = rho(g) ∘ rho(h)
            let next = g.mul(&gen);
            let rho_next: Vec<usize> = (0..size).map(|i| rho_g[perm.apply(i)]).collect();
            match image.get(&next.code()) {
                Some(existing) if *existing != rho_next => return false,
                Some(_) => {}
                None => {
                    image.insert(next.code(), rho_next);
                    queue.push_back(next);
                }
            }
        }
    }
    true
}

/// The four branch points `(p,q), (-q,p), (-p,-q), (q,-p)` in `(Z/n)²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorsionConfig {
    n: u64,
    p: u64,
    q: u64,
}

impl TorsionConfig {
    pub fn new(n: u64, p: i64, q: i64) -> Result<Self, ModularError> {
        if n < 2 {
            return Err(ModularError::ModulusTooSmall(n));
        }
        let r = |x: i64| x.rem_euclid(n as i64) as u64;
        let (p, q) = (r(p), r(q));
        if p == 0 && q == 0 {
            return Err(ModularError::ZeroPoint);
        }
        Ok(TorsionConfig { n, p, q })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn points(&self) -> [[u64; 2]; 4] {
        let n = self.n;
        let neg = |x: u64| (n - x) % n;
        let (p, q) = (self.p, self.q);
        [[p, q], [neg(q), p], [neg(p), neg(q)], [q, neg(p)]]
    }

    /// How often `v` occurs among the four points.
    pub fn multiplicity(&self, v: [u64; 2]) -> usize {
        self.points().iter().filter(|&&w| w == v).count()
    }

    pub fn require_odd_general(&self) -> Result<(), ModularError> {
        if self.n % 2 == 0 {
            return Err(ModularError::NotOdd(self.n));
        }
        if !general_position(self) {
            return Err(ModularError::NotGeneralPosition);
        }
        Ok(())
    }
}

impl fmt::Display for TorsionConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, p={}, q={})", self.n, self.p, self.q)
    }
}

/// `(p -q; q p)` is invertible mod n.
pub fn general_position(cfg: &TorsionConfig) -> bool {
    let n = cfg.n;
    inv_mod((cfg.p * cfg.p + cfg.q * cfg.q) % n, n).is_some()
}

fn sorted_points(mut pts: [[u64; 2]; 4]) -> [[u64; 2]; 4] {
    pts.sort_unstable();
    pts
}

/// Elements of SL2(Z/n) mapping the branch multiset onto itself.
pub fn stab_of_config(cfg: &TorsionConfig) -> Vec<MatMod> {
    let target = sorted_points(cfg.points());
    enumerate_sl2(cfg.n)
        .into_iter()
        .filter(|g| sorted_points(cfg.points().map(|v| g.apply(v))) == target)
        .collect()
}

/// `A ≡ ±I or ±S (mod n)` and `A ≡ I or S (mod 2)`, for `A` mod `2n`.
pub fn in_predicted_group(a: &MatMod, n: u64) -> bool {
    let mod_n = a.project(n);
    let i = MatMod::identity(n);
    let s = MatMod::s(n);
    let mod_2 = a.project(2);
    [i, i.neg(), s, s.neg()].contains(&mod_n) && [MatMod::identity(2), MatMod::s(2)].contains(&mod_2)
}

/// A pointed action on cosets of a subgroup of SL2(Z/modulus).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteAction {
    pub modulus: u64,
    #[serde(flatten)]
    pub action: CosetActionJson,
}

impl FiniteAction {
    pub fn coset_action(&self) -> CosetAction {
        CosetAction::try_from(self.action.clone()).expect("finite action is a valid coset action")
    }
}

/// The action of SL2(Z) through SL2(Z/2n) on the right cosets `H x` of the
/// predicted Veech group `H`, via `H x ↦ H x g⁻¹` (a left action, so the base
/// stabilizer is `H` itself). Cosets are numbered in breadth-first order,
/// `S` before `T`.
pub fn predicted_veech_action(cfg: &TorsionConfig) -> Result<FiniteAction, ModularError> {
    cfg.require_odd_general()?;
    let n = cfg.n;
    let m = 2 * n;
    let subgroup: Vec<MatMod> = enumerate_sl2(m).into_iter().filter(|a| in_predicted_group(a, n)).collect();
    debug_assert_eq!(subgroup.len(), 8);
    let canonical = |x: &MatMod| subgroup.iter().map(|h| h.mul(x).code()).min().unwrap();
    let inverses = [MatMod::s(m).inverse(), MatMod::t(m).inverse()];

    let mut reps = vec![MatMod::identity(m)];
    let mut ids: HashMap<u64, usize> = HashMap::from([(canonical(&reps[0]), 0)]);
    let mut images: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for (g, g_inv) in inverses.iter().enumerate() {
            let y = reps[i].mul(g_inv);
            let next = reps.len();
            let j = *ids.entry(canonical(&y)).or_insert(next);
            if j == next {
                reps.push(y);
                queue.push_back(j);
            }
            images[g].push(j);
        }
    }
    // breadth-first discovery visits nodes in index order
    let [perm_s, perm_t] = images;
    let action = CosetAction::new(
        Permutation::from_images_unchecked(perm_s),
        Permutation::from_images_unchecked(perm_t),
    )
    .expect("coset action of a finite quotient");
    Ok(FiniteAction { modulus: m, action: action.to_json() })
}

/// Whether two pointed transitive actions are isomorphic (equivalently,
/// have the same base stabilizer).
pub fn pointed_equivalent(a1: &CosetAction, a2: &CosetAction) -> bool {
    if a1.size() != a2.size() {
        return false;
    }
    let k = a1.size();
    let mut map = vec![usize::MAX; k];
    let mut used = vec![false; k];
    map[0] = 0;
    used[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in [Generator::S, Generator::T] {
            let j = a1.perm(g).apply(i);
            let image = a2.perm(g).apply(map[i]);
            if map[j] == usize::MAX {
                if used[image] {
                    return false;
                }
                map[j] = image;
                used[image] = true;
                queue.push_back(j);
            } else if map[j] != image {
                return false;
            }
        }
    }
    true
}

/// `B` and a sign `ε` with `B T B⁻¹ = S^ε`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Conjugator {
    pub sign: i8,
    pub b: MatMod,
}

fn require_odd_prime(p: u64) -> Result<(), ModularError> {
    if p == 2 {
        return Err(ModularError::EvenModulus);
    }
    if !is_prime(p) {
        return Err(ModularError::NotPrime(p));
    }
    Ok(())
}

// row vector r with r T = lambda r
fn left_eigenvector(t: &MatMod, lambda: u64) -> [u64; 2] {
    let p = t.modulus;
    let r = [t.c, (lambda + p - t.a) % p];
    if r != [0, 0] {
        r
    } else {
        [(lambda + p - t.d) % p, t.b]
    }
}

// matrix with rows r1, r2, first row scaled so the determinant is 1
fn unimodular_rows(r1: [u64; 2], r2: [u64; 2], p: u64) -> MatMod {
    let det = (r1[0] * r2[1] % p + p - r1[1] * r2[0] % p) % p;
    let scale = inv_mod(det, p).expect("eigenvectors for distinct eigenvalues are independent");
    MatMod { modulus: p, a: r1[0] * scale % p, b: r1[1] * scale % p, c: r2[0], d: r2[1] }
}

/// Conjugates a trace-0 element of SL2(F_p) to `S` or `S⁻¹`.
///
/// For `p ≡ 3 (mod 4)` the basis `(v, Tv)` with `v = e₁` is rescaled to
/// determinant 1, flipping the second vector (and landing on `S⁻¹`) when the
/// determinant is a non-square. For `p ≡ 1 (mod 4)` both `T` and `S` are
/// diagonalized to `diag(α, -α)` with `α² = -1`.
pub fn conj_to_rotation(t: &MatMod) -> Result<Conjugator, ModularError> {
    let p = t.modulus;
    require_odd_prime(p)?;
    if t.det() != 1 {
        return Err(ModularError::BadDet(t.det()));
    }
    if t.trace() != 0 {
        return Err(ModularError::BadTrace(t.trace()));
    }
    let result = if p % 4 == 3 {
        // T e1 = (a, c); c != 0 since T has no eigenvalues over F_p
        let c = t.c;
        let (sign, target) = if is_square_mod(c, p) { (1i8, c) } else { (-1i8, p - c) };
        let lambda = sqrt_mod(inv_mod(target, p).unwrap(), p).unwrap();
        let flip = if sign == 1 { 1 } else { p - 1 };
        // columns λ e1 and ±λ T e1
        let basis = MatMod {
            modulus: p,
            a: lambda,
            b: flip * lambda % p * t.a % p,
            c: 0,
            d: flip * lambda % p * t.c % p,
        };
        Conjugator { sign, b: basis.inverse() }
    } else {
        let alpha = sqrt_mod(p - 1, p).unwrap();
        let eig = |m: &MatMod| {
            unimodular_rows(left_eigenvector(m, alpha), left_eigenvector(m, p - alpha), p)
        };
        let m_t = eig(t);
        let m_s = eig(&MatMod::s(p));
        Conjugator { sign: 1, b: m_s.inverse().mul(&m_t) }
    };
    debug_assert_eq!(result.b.det(), 1);
    Ok(result)
}

/// Result of checking the conjugator on every trace-0 element of SL2(F_p).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjLemmaReport {
    pub p: u64,
    pub matrices: usize,
    pub conjugate_to_s: usize,
    pub conjugate_to_s_inverse: usize,
    pub failures: Vec<MatMod>,
}

impl ConjLemmaReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty() && self.matrices > 0
    }
}

/// Runs [`conj_to_rotation`] on all trace-0 matrices of determinant 1 over
/// F_p and verifies `B T B⁻¹ = S^ε` for each.
pub fn check_conj_lemma(p: u64) -> Result<ConjLemmaReport, ModularError> {
    require_odd_prime(p)?;
    let mut report = ConjLemmaReport { p, matrices: 0, conjugate_to_s: 0, conjugate_to_s_inverse: 0, failures: Vec::new() };
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                let d = (p - a) % p;
                let Some(t) = MatMod::new(p, a as i64, b as i64, c as i64, d as i64) else {
                    continue;
                };
                report.matrices += 1;
                match conj_to_rotation(&t) {
                    Ok(Conjugator { sign, b }) if b.mul(&t).mul(&b.inverse()) == rotation(p, sign) => {
                        if sign == 1 {
                            report.conjugate_to_s += 1;
                        } else {
                            report.conjugate_to_s_inverse += 1;
                        }
                    }
                    _ => report.failures.push(t),
                }
            }
        }
    }
    Ok(report)
}

/// `S^sign` over F_p.
pub fn rotation(p: u64, sign: i8) -> MatMod {
    if sign >= 0 {
        MatMod::s(p)
    } else {
        MatMod::s(p).inverse()
    }
}

/// Output of [`find_alignment`]: `{B·P, B·Q} = {R, S·R}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Alignment {
    pub b: MatMod,
    pub aligned: [u64; 2],
    pub sign: i8,
}

/// Finds `B ∈ SL2(F_p)` moving the pair `{P, Q}` onto a pair `{R, S·R}`.
///
/// `M` sends `P` to `e₁`; the unique trace-0 matrix `S''` with first column
/// `M·Q` gives `S' = M⁻¹ S'' M` with `S'·P = Q`, and conjugating `S'` to
/// `S^±1` yields `B`. The aligned point is `B·P` for `S`, `B·Q` for `S⁻¹`.
pub fn find_alignment(pv: [u64; 2], qv: [u64; 2], p: u64) -> Result<Alignment, ModularError> {
    require_odd_prime(p)?;
    let pv = [pv[0] % p, pv[1] % p];
    let qv = [qv[0] % p, qv[1] % p];
    let det_pq = (pv[0] * qv[1] % p + p - pv[1] * qv[0] % p) % p;
    if det_pq == 0 {
        return Err(ModularError::Dependent);
    }
    // W = [P | w] with det 1, M = W⁻¹
    let w = if pv[0] != 0 {
        [0, inv_mod(pv[0], p).unwrap()]
    } else {
        [p - inv_mod(pv[1], p).unwrap(), 0]
    };
    let big_w = MatMod { modulus: p, a: pv[0], b: w[0], c: pv[1], d: w[1] };
    let m = big_w.inverse();
    let [u, v] = m.apply(qv);
    debug_assert_eq!(v, det_pq);
    let top_right = (p - (1 + u * u) % p) % p * inv_mod(v, p).unwrap() % p;
    let s2 = MatMod { modulus: p, a: u, b: top_right, c: v, d: (p - u) % p };
    let s1 = big_w.mul(&s2).mul(&m);
    debug_assert_eq!(s1.apply(pv), qv);
    let Conjugator { sign, b } = conj_to_rotation(&s1)?;
    let aligned = if sign == 1 { b.apply(pv) } else { b.apply(qv) };
    Ok(Alignment { b, aligned, sign })
}

/// `A ≡ I` or `A ≡ (0 1; 1 0)` mod 2, i.e. `a + c` and `b + d` odd.
pub fn in_gamma_uu(a: &MatZ) -> bool {
    let r = MatMod::reduce(a, 2);
    r == MatMod::identity(2) || r == MatMod::s(2)
}
