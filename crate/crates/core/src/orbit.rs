//! The SL2(Z) action on origamis, orbit enumeration and Veech groups as
//! pointed coset actions.
//!
//! Generators act by
//!
//! ```text
//! T · (σx, σy) = (σx, σy ∘ σx⁻¹)
//! S · (σx, σy) = (σy⁻¹, σx)
//! ```
//!
//! `S⁴` is the identity on permutation pairs and `S²` sends `(σx, σy)` to
//! `(σx⁻¹, σy⁻¹)`. The remaining relation `(ST)³ = S²` holds only up to
//! relabeling: an exact version would need an automorphism of order 6 of
//! the free group of rank 2, and there is none.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::origami::Origami;
use crate::perm::{is_transitive, CyclePowers, Permutation};
use crate::sl2::{decompose_word, Generator, GeneratorWord, MatZ};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActionError {
    #[error("generator permutations have different sizes")]
    SizeMismatch,
    #[error("the action is empty")]
    Empty,
    #[error("generator permutation is not a bijection")]
    NotBijection,
    #[error("the action is not transitive")]
    NotTransitive,
    #[error("relation {0} fails")]
    RelationFails(&'static str),
}

/// Applies `g^power` for `power = ±1`.
pub fn act_generator(generator: Generator, inverse: bool, o: &Origami) -> Origami {
    let (x, y) = (o.sigma_x(), o.sigma_y());
    let (nx, ny) = match (generator, inverse) {
        (Generator::T, false) => (x.clone(), y.compose(&x.inverse())),
        (Generator::T, true) => (x.clone(), y.compose(x)),
        (Generator::S, false) => (y.inverse(), x.clone()),
        (Generator::S, true) => (y.clone(), x.inverse()),
    };
    Origami::new_unchecked(nx, ny)
}

/// Applies the matrix of `word` (as a left action: last letter first).
pub fn act_word(word: &GeneratorWord, o: &Origami) -> Origami {
    let mut cur = o.clone();
    for (g, sign) in word.letters().into_iter().rev() {
        cur = act_generator(g, sign < 0, &cur);
    }
    cur
}

/// A transitive action of `S` and `T` on `0..size` with base point 0.
///
/// The action is a left action: a word `w1 ... wk` moves a point by `wk`
/// first. The stabilizer of 0 is the subgroup it describes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CosetActionJson", into = "CosetActionJson")]
pub struct CosetAction {
    perm_s: Permutation,
    perm_t: Permutation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetActionJson {
    pub size: usize,
    #[serde(rename = "perm_S")]
    pub perm_s: Vec<usize>,
    #[serde(rename = "perm_T")]
    pub perm_t: Vec<usize>,
}

impl TryFrom<CosetActionJson> for CosetAction {
    type Error = ActionError;

    fn try_from(raw: CosetActionJson) -> Result<Self, ActionError> {
        if raw.perm_s.len() != raw.size || raw.perm_t.len() != raw.size {
            return Err(ActionError::SizeMismatch);
        }
        let s = Permutation::from_images(raw.perm_s).ok_or(ActionError::NotBijection)?;
        let t = Permutation::from_images(raw.perm_t).ok_or(ActionError::NotBijection)?;
        CosetAction::new(s, t)
    }
}

impl From<CosetAction> for CosetActionJson {
    fn from(a: CosetAction) -> Self {
        CosetActionJson {
            size: a.size(),
            perm_s: a.perm_s.into_images(),
            perm_t: a.perm_t.into_images(),
        }
    }
}

impl CosetAction {
    /// Checks transitivity and the relations `S⁴ = 1`, `(ST)³ = S²`.
    pub fn new(perm_s: Permutation, perm_t: Permutation) -> Result<Self, ActionError> {
        if perm_s.len() != perm_t.len() {
            return Err(ActionError::SizeMismatch);
        }
        if perm_s.is_empty() {
            return Err(ActionError::Empty);
        }
        if !perm_s.is_bijection() || !perm_t.is_bijection() {
            return Err(ActionError::NotBijection);
        }
        if !is_transitive(perm_s.len(), &[&perm_s, &perm_t]) {
            return Err(ActionError::NotTransitive);
        }
        if !perm_s.pow(4).is_identity() {
            return Err(ActionError::RelationFails("S^4 = 1"));
        }
        // (ST)^3 = S^2 implies (ST)^6 = 1 once S^4 = 1
        if perm_s.compose(&perm_t).pow(3) != perm_s.pow(2) {
            return Err(ActionError::RelationFails("(ST)^3 = S^2"));
        }
        Ok(CosetAction { perm_s, perm_t })
    }

    pub fn size(&self) -> usize {
        self.perm_s.len()
    }

    /// Index of the described subgroup in SL2(Z).
    pub fn index(&self) -> usize {
        self.size()
    }

    pub fn perm_s(&self) -> &Permutation {
        &self.perm_s
    }

    pub fn perm_t(&self) -> &Permutation {
        &self.perm_t
    }

    pub fn perm(&self, g: Generator) -> &Permutation {
        match g {
            Generator::S => &self.perm_s,
            Generator::T => &self.perm_t,
        }
    }

    pub fn to_json(&self) -> CosetActionJson {
        self.clone().into()
    }

    /// Image of `point` under the matrix of `word`.
    pub fn apply_word(&self, word: &GeneratorWord, point: usize) -> usize {
        let s = CyclePowers::new(&self.perm_s);
        let t = CyclePowers::new(&self.perm_t);
        word.syllables().iter().rev().fold(point, |p, syl| match syl.generator {
            Generator::S => s.apply_pow(p, syl.power),
            Generator::T => t.apply_pow(p, syl.power),
        })
    }

    pub fn apply_matrix(&self, m: &MatZ, point: usize) -> usize {
        self.apply_word(&decompose_word(m), point)
    }

    /// Membership of `m` in the stabilizer of the base point.
    pub fn contains(&self, m: &MatZ) -> bool {
        self.apply_matrix(m, 0) == 0
    }

    /// Breadth-first spanning tree words: `tree[i]` moves the base point to `i`.
    pub fn transversal(&self) -> Vec<GeneratorWord> {
        let mut tree: Vec<Option<GeneratorWord>> = vec![None; self.size()];
        tree[0] = Some(GeneratorWord::new());
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in [Generator::S, Generator::T] {
                let j = self.perm(g).apply(i);
                if tree[j].is_none() {
                    let mut w = GeneratorWord::new();
                    w.push(g, 1);
                    tree[j] = Some(w.concat(tree[i].as_ref().unwrap()));
                    queue.push_back(j);
                }
            }
        }
        tree.into_iter().map(|w| w.expect("action is transitive")).collect()
    }

    /// Schreier generators of the base-point stabilizer: `w_j⁻¹ g w_i` for
    /// every edge `i -g-> j` that is not a tree edge.
    pub fn stabilizer_generator_words(&self) -> Vec<GeneratorWord> {
        let tree = self.transversal();
        let mut out = Vec::new();
        for i in 0..self.size() {
            for g in [Generator::S, Generator::T] {
                let j = self.perm(g).apply(i);
                let mut step = GeneratorWord::new();
                step.push(g, 1);
                let through = step.concat(&tree[i]);
                // tree edges give the empty word
                let w = tree[j].inverse().concat(&through);
                if !w.is_empty() {
                    out.push(w);
                }
            }
        }
        out
    }

    pub fn stabilizer_generators(&self) -> Vec<MatZ> {
        self.stabilizer_generator_words().iter().map(GeneratorWord::matrix).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitNode {
    #[serde(serialize_with = "hex_key")]
    pub key: Vec<u8>,
    pub origami: Origami,
}

fn hex_key<Ser: serde::Serializer>(key: &[u8], s: Ser) -> Result<Ser::Ok, Ser::Error> {
    s.serialize_str(&to_hex(key))
}

fn to_hex(bytes: &[u8]) -> String {
    bytes.iter().fold(String::with_capacity(2 * bytes.len()), |mut acc, b| {
        let _ = write!(acc, "{b:02x}");
        acc
    })
}

/// Breadth-first orbit of an origami under `S` and `T`, deduplicated by
/// canonical key, nodes numbered in discovery order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitGraph {
    pub nodes: Vec<OrbitNode>,
    #[serde(rename = "perm_S")]
    pub s_edges: Vec<usize>,
    #[serde(rename = "perm_T")]
    pub t_edges: Vec<usize>,
}

pub fn orbit(o: &Origami) -> OrbitGraph {
    let mut nodes = vec![OrbitNode { key: o.canonical_key(), origami: o.clone() }];
    let mut index: HashMap<Vec<u8>, usize> = HashMap::from([(nodes[0].key.clone(), 0)]);
    let mut s_edges = Vec::new();
    let mut t_edges = Vec::new();
    let mut head = 0;
    while head < nodes.len() {
        for g in [Generator::S, Generator::T] {
            let image = act_generator(g, false, &nodes[head].origami);
            let key = image.canonical_key();
            let next = nodes.len();
            let j = *index.entry(key.clone()).or_insert(next);
            if j == next {
                nodes.push(OrbitNode { key, origami: image });
            }
            match g {
                Generator::S => s_edges.push(j),
                Generator::T => t_edges.push(j),
            }
        }
        head += 1;
    }
    OrbitGraph { nodes, s_edges, t_edges }
}

impl OrbitGraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn action(&self) -> CosetAction {
        CosetAction::new(
            Permutation::from_images_unchecked(self.s_edges.clone()),
            Permutation::from_images_unchecked(self.t_edges.clone()),
        )
        .expect("orbit graph defines an SL2(Z) action")
    }

    pub fn keys(&self) -> impl Iterator<Item = &[u8]> {
        self.nodes.iter().map(|n| n.key.as_slice())
    }

    /// Graphviz rendering; node labels carry the index and a 32-bit FNV-1a
    /// digest of the canonical key.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph orbit {\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let digest = n.key.iter().fold(0x811c_9dc5u32, |h, &b| (h ^ b as u32).wrapping_mul(0x0100_0193));
            let _ = writeln!(out, "  {i} [label=\"{i}: {digest:08x}\"];");
        }
        for (i, (&s, &t)) in self.s_edges.iter().zip(&self.t_edges).enumerate() {
            let _ = writeln!(out, "  {i} -> {s} [label=\"S\"];");
            let _ = writeln!(out, "  {i} -> {t} [label=\"T\"];");
        }
        out.push_str("}\n");
        out
    }
}

/// The pointed action whose base stabilizer is the Veech group of `o`.
pub fn veech_action(o: &Origami) -> CosetAction {
    orbit(o).action()
}

/// Generators of the Veech group (not reduced).
pub fn veech_generators(action: &CosetAction) -> Vec<MatZ> {
    action.stabilizer_generators()
}

pub fn veech_contains(action: &CosetAction, m: &MatZ) -> bool {
    action.contains(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l_shape() -> Origami {
        Origami::from_images(vec![1, 0, 2], vec![2, 1, 0]).unwrap()
    }

    #[test]
    fn torus_orbit_is_trivial() {
        let t = Origami::torus();
        assert_eq!(act_generator(Generator::T, false, &t), t);
        let g = orbit(&t);
        assert_eq!(g.len(), 1);
        let gens = veech_generators(&g.action());
        assert!(gens.contains(&MatZ::S));
        assert!(gens.contains(&MatZ::T));
    }

    #[test]
    fn inverse_letters_undo() {
        let o = l_shape();
        for g in [Generator::S, Generator::T] {
            let there = act_generator(g, false, &o);
            assert_eq!(act_generator(g, true, &there), o);
        }
    }

    #[test]
    fn l_shape_has_index_three() {
        // the 3-square L is a classical example with Veech group of index 3
        let a = veech_action(&l_shape());
        assert_eq!(a.size(), 3);
        for m in veech_generators(&a) {
            assert!(a.contains(&m), "{m}");
        }
        assert!(a.contains(&MatZ::MINUS_IDENTITY));
    }

    #[test]
    fn rejects_bad_actions() {
        let id = Permutation::identity(2);
        assert_eq!(CosetAction::new(id.clone(), id.clone()), Err(ActionError::NotTransitive));
        let swap = Permutation::from_images(vec![1, 0]).unwrap();
        // the sign character of SL2(Z) sends both S and T to the swap
        assert!(CosetAction::new(swap.clone(), swap.clone()).is_ok());
        assert_eq!(CosetAction::new(swap.clone(), id), Err(ActionError::RelationFails("(ST)^3 = S^2")));
        let c3 = Permutation::cycle(3);
        assert_eq!(
            CosetAction::new(c3.clone(), Permutation::identity(3)),
            Err(ActionError::RelationFails("S^4 = 1"))
        );
    }

    #[test]
    fn dot_export_mentions_every_edge() {
        let dot = orbit(&l_shape()).to_dot();
        assert_eq!(dot.matches("->").count(), 6);
        assert!(dot.starts_with("digraph orbit {"));
    }
}
