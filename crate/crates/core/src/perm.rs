use serde::{Deserialize, Serialize};

/// A permutation of `{0, ..., d-1}` stored by its images.
///
/// Composition follows the function convention: `p.compose(&q)` is the map
/// `i -> p(q(i))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// Wraps an image vector without checking bijectivity.
    pub fn from_images_unchecked(images: Vec<usize>) -> Self {
        Permutation { images }
    }

    /// Returns `None` if `images` is not a bijection of `0..images.len()`.
    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let p = Permutation { images };
        p.is_bijection().then_some(p)
    }

    pub fn identity(d: usize) -> Self {
        Permutation {
            images: (0..d).collect(),
        }
    }

    /// The cycle `0 -> 1 -> ... -> d-1 -> 0`.
    pub fn cycle(d: usize) -> Self {
        Permutation {
            images: (0..d).map(|i| (i + 1) % d).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn into_images(self) -> Vec<usize> {
        self.images
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_bijection(&self) -> bool {
        let d = self.images.len();
        let mut seen = vec![false; d];
        for &j in &self.images {
            if j >= d || seen[j] {
                return false;
            }
            seen[j] = true;
        }
        true
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `i -> self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len(), "composing permutations of different degree");
        Permutation {
            images: other.images.iter().map(|&j| self.images[j]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Permutation { images }
    }

    /// Conjugate `rho * self * rho^-1`, i.e. the map `rho(i) -> rho(self(i))`.
    pub fn conjugate_by(&self, rho: &Permutation) -> Permutation {
        let mut images = vec![0; self.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[rho.apply(i)] = rho.apply(j);
        }
        Permutation { images }
    }

    /// Disjoint cycles, each starting at its smallest element, ordered by
    /// that element. Fixed points are included as 1-cycles.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let d = self.len();
        let mut seen = vec![false; d];
        let mut out = Vec::new();
        for start in 0..d {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut j = self.images[start];
            while j != start {
                seen[j] = true;
                cycle.push(j);
                j = self.images[j];
            }
            out.push(cycle);
        }
        out
    }

    /// Sorted cycle lengths.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable();
        t
    }

    pub fn fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|(i, j)| i == *j).count()
    }

    /// Order of the permutation (lcm of cycle lengths).
    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| {
            let l = c.len() as u64;
            acc / num_integer::gcd(acc, l) * l
        })
    }

    /// `self^k` for any integer `k`.
    pub fn pow(&self, k: i64) -> Permutation {
        let mut images = vec![0; self.len()];
        for cycle in self.cycles() {
            let l = cycle.len() as i64;
            let shift = k.rem_euclid(l) as usize;
            for (pos, &i) in cycle.iter().enumerate() {
                images[i] = cycle[(pos + shift) % cycle.len()];
            }
        }
        Permutation { images }
    }

    /// For each point, the index of the cycle that contains it.
    pub fn cycle_labels(&self) -> Vec<usize> {
        let mut labels = vec![usize::MAX; self.len()];
        for (c, cycle) in self.cycles().into_iter().enumerate() {
            for i in cycle {
                labels[i] = c;
            }
        }
        labels
    }
}

/// Evaluates `p^k(i)` without building the power, by precomputing cycle
/// positions once.
#[derive(Clone, Debug)]
pub struct CyclePowers {
    cycles: Vec<Vec<usize>>,
    // (cycle index, position in cycle)
    location: Vec<(usize, usize)>,
}

impl CyclePowers {
    pub fn new(p: &Permutation) -> Self {
        let cycles = p.cycles();
        let mut location = vec![(0, 0); p.len()];
        for (c, cycle) in cycles.iter().enumerate() {
            for (pos, &i) in cycle.iter().enumerate() {
                location[i] = (c, pos);
            }
        }
        CyclePowers { cycles, location }
    }

    pub fn apply_pow(&self, i: usize, k: i64) -> usize {
        let (c, pos) = self.location[i];
        let cycle = &self.cycles[c];
        let l = cycle.len() as i64;
        cycle[((pos as i64 + k).rem_euclid(l)) as usize]
    }
}

/// Whether the group generated by `gens` acts transitively on `0..d`.
pub fn is_transitive(d: usize, gens: &[&Permutation]) -> bool {
    if d == 0 {
        return false;
    }
    let mut seen = vec![false; d];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(i) = stack.pop() {
        for g in gens {
            // forward images suffice: every generator has finite order
            let j = g.apply(i);
            if !seen[j] {
                seen[j] = true;
                count += 1;
                stack.push(j);
            }
        }
    }
    count == d
}
