//! Integer matrices of determinant one and words in the generators
//! `S = (0 -1; 1 0)` and `T = (1 1; 0 1)`.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

/// A 2×2 integer matrix `(a b; c d)` with `ad - bc = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MatZ {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl MatZ {
    pub const IDENTITY: MatZ = MatZ { a: 1, b: 0, c: 0, d: 1 };
    pub const MINUS_IDENTITY: MatZ = MatZ { a: -1, b: 0, c: 0, d: -1 };
    pub const S: MatZ = MatZ { a: 0, b: -1, c: 1, d: 0 };
    pub const T: MatZ = MatZ { a: 1, b: 1, c: 0, d: 1 };

    /// Returns `None` unless the determinant is 1.
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Option<MatZ> {
        let m = MatZ { a, b, c, d };
        (m.det() == 1).then_some(m)
    }

    pub fn det(&self) -> i128 {
        self.a as i128 * self.d as i128 - self.b as i128 * self.c as i128
    }

    pub fn trace(&self) -> i64 {
        self.a + self.d
    }

    pub fn inverse(&self) -> MatZ {
        MatZ { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn neg(&self) -> MatZ {
        MatZ { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }

    pub fn t_pow(k: i64) -> MatZ {
        MatZ { a: 1, b: k, c: 0, d: 1 }
    }

    pub fn s_pow(k: i64) -> MatZ {
        match k.rem_euclid(4) {
            0 => MatZ::IDENTITY,
            1 => MatZ::S,
            2 => MatZ::MINUS_IDENTITY,
            _ => MatZ::S.inverse(),
        }
    }

    pub fn checked_mul(&self, rhs: &MatZ) -> Option<MatZ> {
        let e = |x: i64, y: i64, z: i64, w: i64| -> Option<i64> {
            (x as i128 * y as i128 + z as i128 * w as i128).try_into().ok()
        };
        Some(MatZ {
            a: e(self.a, rhs.a, self.b, rhs.c)?,
            b: e(self.a, rhs.b, self.b, rhs.d)?,
            c: e(self.c, rhs.a, self.d, rhs.c)?,
            d: e(self.c, rhs.b, self.d, rhs.d)?,
        })
    }
}

impl Mul for MatZ {
    type Output = MatZ;

    fn mul(self, rhs: MatZ) -> MatZ {
        self.checked_mul(&rhs).expect("integer matrix product overflows i64")
    }
}

impl fmt::Display for MatZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    S,
    T,
}

impl Generator {
    pub fn matrix(self) -> MatZ {
        match self {
            Generator::S => MatZ::S,
            Generator::T => MatZ::T,
        }
    }

    pub fn pow(self, k: i64) -> MatZ {
        match self {
            Generator::S => MatZ::s_pow(k),
            Generator::T => MatZ::t_pow(k),
        }
    }
}

/// One run `g^power` of a word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Syllable {
    pub generator: Generator,
    pub power: i64,
}

impl Serialize for Syllable {
    fn serialize<Ser: serde::Serializer>(&self, s: Ser) -> Result<Ser::Ok, Ser::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl fmt::Display for Syllable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = match self.generator {
            Generator::S => "S",
            Generator::T => "T",
        };
        if self.power == 1 {
            write!(f, "{g}")
        } else {
            write!(f, "{g}^{}", self.power)
        }
    }
}

/// A word in `S^±1, T^±1`, stored run-length encoded so that large powers
/// of `T` stay compact. The word `w1 w2 ... wk` denotes the matrix product
/// in that order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct GeneratorWord {
    syllables: Vec<Syllable>,
}

impl GeneratorWord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Appends `g^power`, merging with the last run and dropping trivial
    /// powers (`S^4 = I` is used to normalize `S`-runs into `1..=3`).
    pub fn push(&mut self, generator: Generator, power: i64) {
        let normalize = |p: i64| match generator {
            Generator::S => p.rem_euclid(4),
            Generator::T => p,
        };
        if let Some(last) = self.syllables.last_mut() {
            if last.generator == generator {
                last.power = normalize(last.power + power);
                if last.power == 0 {
                    self.syllables.pop();
                }
                return;
            }
        }
        let power = normalize(power);
        if power != 0 {
            self.syllables.push(Syllable { generator, power });
        }
    }

    pub fn inverse(&self) -> GeneratorWord {
        let mut w = GeneratorWord::new();
        for s in self.syllables.iter().rev() {
            w.push(s.generator, -s.power);
        }
        w
    }

    pub fn concat(&self, other: &GeneratorWord) -> GeneratorWord {
        let mut w = self.clone();
        for s in &other.syllables {
            w.push(s.generator, s.power);
        }
        w
    }

    /// Expands into single letters `(generator, ±1)`, `S^3` written as `S^-1`.
    pub fn letters(&self) -> Vec<(Generator, i64)> {
        let mut out = Vec::new();
        for s in &self.syllables {
            let (count, sign) = match (s.generator, s.power) {
                (Generator::S, 3) => (1, -1),
                (_, p) => (p.unsigned_abs(), p.signum()),
            };
            out.extend(std::iter::repeat_n((s.generator, sign), count as usize));
        }
        out
    }

    pub fn matrix(&self) -> MatZ {
        self.syllables
            .iter()
            .fold(MatZ::IDENTITY, |acc, s| acc * s.generator.pow(s.power))
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "I");
        }
        let parts: Vec<String> = self.syllables.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Writes `m` as a word in `S` and `T` whose product is exactly `m`.
///
/// Euclid on the first column: subtract the nearest multiple of `c` from `a`
/// with a power of `T`, then swap with `S⁻¹`; once `c = 0` the remainder is
/// `T^b` or `S² T^-b`.
pub fn decompose_word(m: &MatZ) -> GeneratorWord {
    debug_assert_eq!(m.det(), 1);
    let mut cur = *m;
    // factors f_i such that m = f_1 f_2 ... f_r * cur at every step
    let mut word = GeneratorWord::new();
    while cur.c != 0 {
        let k = nearest_quotient(cur.a, cur.c);
        if k != 0 {
            cur = MatZ::t_pow(-k) * cur;
            word.push(Generator::T, k);
        }
        cur = MatZ::s_pow(-1) * cur;
        word.push(Generator::S, 1);
    }
    if cur.a == 1 {
        word.push(Generator::T, cur.b);
    } else {
        debug_assert_eq!(cur.a, -1);
        word.push(Generator::S, 2);
        word.push(Generator::T, -cur.b);
    }
    word
}

// k minimizing |a - k c|
fn nearest_quotient(a: i64, c: i64) -> i64 {
    let (a, c) = (a as i128, c as i128);
    let q = a.div_euclid(c);
    let r = a - q * c;
    let k = if 2 * r.abs() > c.abs() { q + c.signum() } else { q };
    k as i64
}
