//! Origamis (square-tiled surfaces) as pairs of gluing permutations.
//!
//! Square `i` is glued on its right edge to `sigma_x(i)` and on its top edge
//! to `sigma_y(i)`. The lower-left corner of square `i` represents the vertex
//! class of `i`; vertex classes are the cycles of the commutator
//! `sigma_x ∘ sigma_y ∘ sigma_x⁻¹ ∘ sigma_y⁻¹`.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::{is_transitive, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrigamiError {
    #[error("gluing permutations have lengths {x} and {y}, expected degree {degree}")]
    LengthMismatch { degree: usize, x: usize, y: usize },
    #[error("{0} is not a bijection")]
    NotBijection(&'static str),
    #[error("the surface is not connected")]
    NotConnected,
    #[error("an origami needs at least one square")]
    Empty,
    #[error("a non-identity element fixes a square")]
    NotFreeAction,
    #[error("permutation does not commute with the gluing maps")]
    NotTranslation,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "OrigamiJson", into = "OrigamiJson")]
pub struct Origami {
    sigma_x: Permutation,
    sigma_y: Permutation,
}

/// Wire form: `{"degree": d, "sigma_x": [...], "sigma_y": [...]}`, 0-based.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrigamiJson {
    pub degree: usize,
    pub sigma_x: Vec<usize>,
    pub sigma_y: Vec<usize>,
}

impl TryFrom<OrigamiJson> for Origami {
    type Error = OrigamiError;

    fn try_from(raw: OrigamiJson) -> Result<Self, Self::Error> {
        validate(raw.degree, &raw.sigma_x, &raw.sigma_y)?;
        Ok(Origami {
            sigma_x: Permutation::from_images_unchecked(raw.sigma_x),
            sigma_y: Permutation::from_images_unchecked(raw.sigma_y),
        })
    }
}

impl From<Origami> for OrigamiJson {
    fn from(o: Origami) -> Self {
        OrigamiJson {
            degree: o.degree(),
            sigma_x: o.sigma_x.into_images(),
            sigma_y: o.sigma_y.into_images(),
        }
    }
}

/// Checks that the two image vectors are bijections of `0..degree` that
/// generate a transitive group.
pub fn validate(degree: usize, sigma_x: &[usize], sigma_y: &[usize]) -> Result<(), OrigamiError> {
    if sigma_x.len() != degree || sigma_y.len() != degree {
        return Err(OrigamiError::LengthMismatch {
            degree,
            x: sigma_x.len(),
            y: sigma_y.len(),
        });
    }
    if degree == 0 {
        return Err(OrigamiError::Empty);
    }
    let x = Permutation::from_images(sigma_x.to_vec()).ok_or(OrigamiError::NotBijection("sigma_x"))?;
    let y = Permutation::from_images(sigma_y.to_vec()).ok_or(OrigamiError::NotBijection("sigma_y"))?;
    if !is_transitive(degree, &[&x, &y]) {
        return Err(OrigamiError::NotConnected);
    }
    Ok(())
}

/// Cone-point data: one zero of order `k - 1` per vertex of total angle `2πk`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum {
    pub zero_orders: Vec<usize>,
    pub genus: usize,
}

/// A lift of `-I`: a permutation `rho` with `rho sigma_x rho⁻¹ = sigma_x⁻¹`
/// and `rho sigma_y rho⁻¹ = sigma_y⁻¹`, together with the fixed points of
/// the induced rotation by π.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinusOneLift {
    pub rho: Permutation,
    pub fixed_centers: usize,
    pub fixed_vertical_edge_midpoints: usize,
    pub fixed_horizontal_edge_midpoints: usize,
    pub fixed_vertices: usize,
    pub total_fixed: usize,
}

impl Origami {
    pub fn new(sigma_x: Permutation, sigma_y: Permutation) -> Result<Self, OrigamiError> {
        validate(sigma_x.len(), sigma_x.images(), sigma_y.images())?;
        Ok(Origami { sigma_x, sigma_y })
    }

    pub fn from_images(sigma_x: Vec<usize>, sigma_y: Vec<usize>) -> Result<Self, OrigamiError> {
        validate(sigma_x.len(), &sigma_x, &sigma_y)?;
        Ok(Origami {
            sigma_x: Permutation::from_images_unchecked(sigma_x),
            sigma_y: Permutation::from_images_unchecked(sigma_y),
        })
    }

    // Callers guarantee validity (images of valid origamis under relabeling
    // or the SL2 action).
    pub(crate) fn new_unchecked(sigma_x: Permutation, sigma_y: Permutation) -> Self {
        debug_assert!(validate(sigma_x.len(), sigma_x.images(), sigma_y.images()).is_ok());
        Origami { sigma_x, sigma_y }
    }

    /// The one-square torus.
    pub fn torus() -> Self {
        Origami {
            sigma_x: Permutation::identity(1),
            sigma_y: Permutation::identity(1),
        }
    }

    pub fn degree(&self) -> usize {
        self.sigma_x.len()
    }

    pub fn sigma_x(&self) -> &Permutation {
        &self.sigma_x
    }

    pub fn sigma_y(&self) -> &Permutation {
        &self.sigma_y
    }

    pub fn to_json(&self) -> OrigamiJson {
        self.clone().into()
    }

    /// `sigma_x ∘ sigma_y ∘ sigma_x⁻¹ ∘ sigma_y⁻¹`.
    pub fn commutator(&self) -> Permutation {
        self.sigma_x
            .compose(&self.sigma_y)
            .compose(&self.sigma_x.inverse())
            .compose(&self.sigma_y.inverse())
    }

    pub fn vertex_count(&self) -> usize {
        self.commutator().cycles().len()
    }

    /// From `2 - 2g = #vertices - #squares`.
    pub fn genus(&self) -> usize {
        let chi = self.vertex_count() as i64 - self.degree() as i64;
        let g = (2 - chi) / 2;
        debug_assert_eq!((2 - chi) % 2, 0);
        g as usize
    }

    pub fn stratum(&self) -> Stratum {
        let mut zero_orders: Vec<usize> = self
            .commutator()
            .cycle_type()
            .into_iter()
            .filter(|&k| k >= 2)
            .map(|k| k - 1)
            .collect();
        zero_orders.sort_unstable();
        Stratum {
            zero_orders,
            genus: self.genus(),
        }
    }

    /// Simultaneous conjugation: the same surface with square `i` renamed
    /// to `rho(i)`.
    pub fn relabel(&self, rho: &Permutation) -> Origami {
        Origami {
            sigma_x: self.sigma_x.conjugate_by(rho),
            sigma_y: self.sigma_y.conjugate_by(rho),
        }
    }

    /// A relabeling `rho` with `rho sigma_x rho⁻¹ = other.sigma_x` and
    /// `rho sigma_y rho⁻¹ = other.sigma_y`, if one exists.
    pub fn isomorphism_to(&self, other: &Origami) -> Option<Permutation> {
        if self.degree() != other.degree() {
            return None;
        }
        (0..self.degree()).find_map(|j| intertwiner(self, (&other.sigma_x, &other.sigma_y), j))
    }

    pub fn is_isomorphic(&self, other: &Origami) -> bool {
        self.isomorphism_to(other).is_some()
    }

    /// Lexicographically smallest breadth-first relabeling over all choices
    /// of base square, encoded as big-endian `u32`s (degree first).
    pub fn canonical_key(&self) -> Vec<u8> {
        let d = self.degree();
        let x_inv = self.sigma_x.inverse();
        let y_inv = self.sigma_y.inverse();
        let mut best: Option<Vec<u32>> = None;
        let mut label = vec![usize::MAX; d];
        let mut order = Vec::with_capacity(d);
        let mut candidate = vec![0u32; 2 * d];
        for base in 0..d {
            label.iter_mut().for_each(|l| *l = usize::MAX);
            order.clear();
            label[base] = 0;
            order.push(base);
            let mut head = 0;
            while head < order.len() {
                let i = order[head];
                head += 1;
                for j in [
                    self.sigma_x.apply(i),
                    x_inv.apply(i),
                    self.sigma_y.apply(i),
                    y_inv.apply(i),
                ] {
                    if label[j] == usize::MAX {
                        label[j] = order.len();
                        order.push(j);
                    }
                }
            }
            for (new, &old) in order.iter().enumerate() {
                candidate[new] = label[self.sigma_x.apply(old)] as u32;
                candidate[d + new] = label[self.sigma_y.apply(old)] as u32;
            }
            if best.as_ref().is_none_or(|b| candidate < *b) {
                best = Some(candidate.clone());
            }
        }
        let mut key = Vec::with_capacity(4 * (2 * d + 1));
        key.extend_from_slice(&(d as u32).to_be_bytes());
        for v in best.unwrap_or_default() {
            key.extend_from_slice(&v.to_be_bytes());
        }
        key
    }

    /// The breadth-first relabeling that realizes the canonical key.
    pub fn canonical_form(&self) -> Origami {
        let key = self.canonical_key();
        let d = self.degree();
        let word = |k: usize| {
            let b = &key[4 * (k + 1)..4 * (k + 2)];
            u32::from_be_bytes([b[0], b[1], b[2], b[3]]) as usize
        };
        let x = (0..d).map(word).collect();
        let y = (d..2 * d).map(word).collect();
        Origami::new_unchecked(
            Permutation::from_images_unchecked(x),
            Permutation::from_images_unchecked(y),
        )
    }

    /// All permutations commuting with both gluing maps (the translation
    /// automorphisms), identity first.
    pub fn translations(&self) -> Vec<Permutation> {
        (0..self.degree())
            .filter_map(|j| intertwiner(self, (&self.sigma_x, &self.sigma_y), j))
            .collect()
    }

    /// All lifts of `-I` with their fixed-point counts.
    pub fn minus_one_lifts(&self) -> Vec<MinusOneLift> {
        let x_inv = self.sigma_x.inverse();
        let y_inv = self.sigma_y.inverse();
        let vertex_class = self.commutator().cycle_labels();
        let vertex_reps = self.commutator().cycles();
        (0..self.degree())
            .filter_map(|j| intertwiner(self, (&x_inv, &y_inv), j))
            .map(|rho| {
                let d = self.degree();
                let fixed_centers = (0..d).filter(|&i| rho.apply(i) == i).count();
                let fixed_vertical_edge_midpoints =
                    (0..d).filter(|&i| rho.apply(i) == self.sigma_x.apply(i)).count();
                let fixed_horizontal_edge_midpoints =
                    (0..d).filter(|&i| rho.apply(i) == self.sigma_y.apply(i)).count();
                // lower-left corner of i goes to the upper-right corner of rho(i)
                let corner = |i: usize| self.sigma_y.apply(self.sigma_x.apply(rho.apply(i)));
                let fixed_vertices = vertex_reps
                    .iter()
                    .filter(|c| vertex_class[corner(c[0])] == vertex_class[c[0]])
                    .count();
                MinusOneLift {
                    fixed_centers,
                    fixed_vertical_edge_midpoints,
                    fixed_horizontal_edge_midpoints,
                    fixed_vertices,
                    total_fixed: fixed_centers
                        + fixed_vertical_edge_midpoints
                        + fixed_horizontal_edge_midpoints
                        + fixed_vertices,
                    rho,
                }
            })
            .collect()
    }

    /// Quotient by a group of translations acting freely on the squares.
    pub fn quotient_by_translations(&self, group: &[Permutation]) -> Result<Origami, OrigamiError> {
        let d = self.degree();
        for g in group {
            if g.len() != d {
                return Err(OrigamiError::LengthMismatch { degree: d, x: g.len(), y: g.len() });
            }
            if g.compose(&self.sigma_x) != self.sigma_x.compose(g)
                || g.compose(&self.sigma_y) != self.sigma_y.compose(g)
            {
                return Err(OrigamiError::NotTranslation);
            }
            if !g.is_identity() && g.fixed_points() > 0 {
                return Err(OrigamiError::NotFreeAction);
            }
        }
        let mut class = vec![usize::MAX; d];
        let mut count = 0;
        for i in 0..d {
            if class[i] != usize::MAX {
                continue;
            }
            // orbit of i under the group (closed under composition by assumption)
            for g in group {
                class[g.apply(i)] = count;
            }
            class[i] = count;
            count += 1;
        }
        let mut x = vec![usize::MAX; count];
        let mut y = vec![usize::MAX; count];
        for i in 0..d {
            x[class[i]] = class[self.sigma_x.apply(i)];
            y[class[i]] = class[self.sigma_y.apply(i)];
        }
        Origami::from_images(x, y)
    }
}

/// Builds the unique `rho` with `rho(0) = target`, `rho ∘ src.x = tgt.0 ∘ rho`
/// and `rho ∘ src.y = tgt.1 ∘ rho`, if it exists and is a bijection.
fn intertwiner(src: &Origami, tgt: (&Permutation, &Permutation), target: usize) -> Option<Permutation> {
    let d = src.degree();
    let mut rho = vec![usize::MAX; d];
    let mut used = vec![false; d];
    rho[0] = target;
    used[target] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for (s, t) in [(&src.sigma_x, tgt.0), (&src.sigma_y, tgt.1)] {
            let j = s.apply(i);
            let image = t.apply(rho[i]);
            if rho[j] == usize::MAX {
                if used[image] {
                    return None;
                }
                rho[j] = image;
                used[image] = true;
                queue.push_back(j);
            } else if rho[j] != image {
                return None;
            }
        }
    }
    Some(Permutation::from_images_unchecked(rho))
}
