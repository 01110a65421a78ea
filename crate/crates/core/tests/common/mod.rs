//! Independent oracles and generators shared by the integration tests.
//!
//! Nothing here calls the library routine it is meant to check: vertices are
//! found by gluing square corners with a union-find, isomorphisms and
//! centralizers by exhaustive search over all permutations, and stabilizers
//! are compared through explicit matrix membership.

#![allow(dead_code)]

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use origami_veech::modular::MatMod;
use origami_veech::{CosetAction, MatZ, Origami, Permutation};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_permutation(rng: &mut impl Rng, d: usize) -> Permutation {
    let mut images: Vec<usize> = (0..d).collect();
    images.shuffle(rng);
    Permutation::from_images(images).unwrap()
}

/// A uniformly random pair of permutations, redrawn until connected.
pub fn random_origami(rng: &mut impl Rng, d: usize) -> Origami {
    loop {
        let x = random_permutation(rng, d);
        let y = random_permutation(rng, d);
        if let Ok(o) = Origami::new(x, y) {
            return o;
        }
    }
}

pub fn origami_strategy(max_degree: usize) -> impl Strategy<Value = Origami> {
    (1..=max_degree, any::<u64>()).prop_map(|(d, seed)| random_origami(&mut rng(seed), d))
}

pub fn relabel(o: &Origami, rho: &Permutation) -> Origami {
    Origami::new(o.sigma_x().conjugate_by(rho), o.sigma_y().conjugate_by(rho)).unwrap()
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
    }
}

// corner labels within a square
const LL: usize = 0;
const LR: usize = 1;
const UL: usize = 2;
const UR: usize = 3;

/// Vertex classes of the square tiling, each as the list of `(square,
/// corner)` pairs meeting there; found by gluing corners along edges.
pub fn corner_classes(o: &Origami) -> Vec<Vec<(usize, usize)>> {
    let d = o.degree();
    let id = |sq: usize, corner: usize| 4 * sq + corner;
    let mut uf = UnionFind((0..4 * d).collect());
    for i in 0..d {
        let r = o.sigma_x().apply(i);
        uf.union(id(i, LR), id(r, LL));
        uf.union(id(i, UR), id(r, UL));
        let t = o.sigma_y().apply(i);
        uf.union(id(i, UL), id(t, LL));
        uf.union(id(i, UR), id(t, LR));
    }
    let mut classes: std::collections::BTreeMap<usize, Vec<(usize, usize)>> = Default::default();
    for sq in 0..d {
        for corner in 0..4 {
            let root = uf.find(id(sq, corner));
            classes.entry(root).or_default().push((sq, corner));
        }
    }
    classes.into_values().collect()
}

/// Zero orders from cone angles: a vertex with `4k` corners has angle
/// `2πk` and order `k - 1`. Sorted, regular vertices omitted.
pub fn oracle_zero_orders(o: &Origami) -> Vec<usize> {
    let mut orders: Vec<usize> = corner_classes(o).iter().map(|c| c.len() / 4 - 1).filter(|&k| k > 0).collect();
    orders.sort_unstable();
    orders
}

/// Genus from Euler's formula `V - E + F` with `E = 2d`, `F = d`.
pub fn oracle_genus(o: &Origami) -> usize {
    let v = corner_classes(o).len() as i64;
    let chi = v - o.degree() as i64;
    ((2 - chi) / 2) as usize
}

/// Grid vertex (lower-left corner) of every square of a vertex class with
/// more than 4 corners.
pub fn cone_point_squares(o: &Origami) -> Vec<Vec<usize>> {
    corner_classes(o)
        .into_iter()
        .filter(|c| c.len() > 4)
        .map(|c| c.into_iter().filter(|&(_, corner)| corner == LL).map(|(sq, _)| sq).collect())
        .collect()
}

fn all_permutations(d: usize) -> Vec<Permutation> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Permutation>) {
        let d = used.len();
        if prefix.len() == d {
            out.push(Permutation::from_images(prefix.clone()).unwrap());
            return;
        }
        for i in 0..d {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; d], &mut out);
    out
}

/// Exhaustive isomorphism test over all `d!` relabelings.
pub fn brute_isomorphic(a: &Origami, b: &Origami) -> bool {
    a.degree() == b.degree()
        && all_permutations(a.degree()).iter().any(|rho| {
            a.sigma_x().conjugate_by(rho) == *b.sigma_x() && a.sigma_y().conjugate_by(rho) == *b.sigma_y()
        })
}

/// Exhaustive centralizer of `⟨sigma_x, sigma_y⟩`.
pub fn brute_translations(o: &Origami) -> Vec<Permutation> {
    all_permutations(o.degree())
        .into_iter()
        .filter(|t| t.compose(o.sigma_x()) == o.sigma_x().compose(t) && t.compose(o.sigma_y()) == o.sigma_y().compose(t))
        .collect()
}

/// Exhaustive search for permutations inverting both generators.
pub fn brute_minus_one_lifts(o: &Origami) -> Vec<Permutation> {
    let (xi, yi) = (o.sigma_x().inverse(), o.sigma_y().inverse());
    all_permutations(o.degree())
        .into_iter()
        .filter(|r| o.sigma_x().conjugate_by(r) == xi && o.sigma_y().conjugate_by(r) == yi)
        .collect()
}

/// A random matrix in SL2(Z) with entries of absolute value at most `bound`.
pub fn random_matz(rng: &mut impl Rng, bound: i64) -> MatZ {
    loop {
        let a = rng.gen_range(-bound..=bound);
        let c = rng.gen_range(-bound..=bound);
        let (g, x, y) = ext_gcd(a, c);
        if g != 1 {
            continue;
        }
        // a x + c y = 1, so (a, -y; c, x) has determinant 1
        let m = MatZ::new(a, -y, c, x).unwrap();
        if [m.a, m.b, m.c, m.d].iter().all(|e| e.abs() <= bound) {
            return m;
        }
    }
}

// (g, x, y) with a x + b y = g >= 0
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        // b x + (a mod b) y = g, a mod b = a - b * floor(a / b)
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// A random product of `len` letters `S^±1, T^±1`.
pub fn random_word_matrix(rng: &mut impl Rng, len: usize) -> MatZ {
    (0..len).fold(MatZ::IDENTITY, |acc, _| {
        let g = match rng.gen_range(0..4) {
            0 => MatZ::S,
            1 => MatZ::S.inverse(),
            2 => MatZ::T,
            _ => MatZ::T.inverse(),
        };
        acc * g
    })
}

/// Stabilizer equality through matrices: every generator of each group
/// lies in the other. Independent of the breadth-first bijection test.
pub fn same_stabilizer(a: &CosetAction, b: &CosetAction) -> bool {
    a.stabilizer_generators().iter().all(|m| b.contains(m)) && b.stabilizer_generators().iter().all(|m| a.contains(m))
}

/// `A·v` over Z/p for column vectors.
pub fn apply_mod(m: &MatMod, v: [u64; 2]) -> [u64; 2] {
    let p = m.modulus;
    [(m.a * v[0] + m.b * v[1]) % p, (m.c * v[0] + m.d * v[1]) % p]
}

/// Centralizer by propagation: on a connected origami a translation is
/// determined by the image of square 0, so try all `d` images.
pub fn propagated_translations(o: &Origami) -> Vec<Permutation> {
    let d = o.degree();
    let gens = [o.sigma_x(), o.sigma_y()];
    let mut out = Vec::new();
    'target: for t in 0..d {
        let mut map = vec![usize::MAX; d];
        map[0] = t;
        let mut stack = vec![0];
        while let Some(i) = stack.pop() {
            for g in gens {
                let (j, image) = (g.apply(i), g.apply(map[i]));
                if map[j] == usize::MAX {
                    map[j] = image;
                    stack.push(j);
                } else if map[j] != image {
                    continue 'target;
                }
            }
        }
        if let Some(p) = Permutation::from_images(map) {
            out.push(p);
        }
    }
    out
}
