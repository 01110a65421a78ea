//! The quaternion origami `W` and the double covers `D_P` of the `n × n`
//! torus branched over a rotation-symmetric set of four `n`-torsion points.
//!
//! `D_P` has squares `(a, b, s)` with `a, b ∈ Z/n` and sheet `s ∈ Z/2`:
//!
//! ```text
//! sigma_x(a, b, s) = (a + 1, b, s + λx(a, b))
//! sigma_y(a, b, s) = (a, b + 1, s + λy(a, b))
//! ```
//!
//! The flip labels `λx` (right edges) and `λy` (top edges) form an edge
//! cocycle: going once around the grid vertex `(a, b)` (the lower-left corner
//! of square `(a, b)`) changes the sheet exactly when `(a, b)` is a branch
//! point, and the sheet changes along row 0 and column 0 are the flavor bits.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::gf2::Gf2System;
use crate::modular::{
    general_position, in_gamma_uu, pointed_equivalent, predicted_veech_action, sl2_group_order, stab_of_config,
    MatMod, ModularError, TorsionConfig,
};
use crate::orbit::{orbit, OrbitGraph};
use crate::origami::{Origami, OrigamiError};
use crate::perm::Permutation;
use crate::sl2::MatZ;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error(transparent)]
    Origami(#[from] OrigamiError),
    #[error(transparent)]
    Modular(#[from] ModularError),
    #[error("cocycle system has no solution")]
    Unsolvable,
    #[error("no flavor has a -I lift fixing the preimages of the half period")]
    NoDpFlavor,
    #[error("unknown flavor {0:?}, expected one of 11, 00, 10, 01")]
    UnknownFlavor(String),
}

/// Monodromy of `xⁿ` and `yⁿ` in `Z/2` (1 means the sheets are swapped).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Flavor {
    pub eps_x: u8,
    pub eps_y: u8,
}

impl Flavor {
    /// `μ₁ … μ₄` in order: `11, 00, 10, 01`.
    pub const ALL: [Flavor; 4] = [
        Flavor { eps_x: 1, eps_y: 1 },
        Flavor { eps_x: 0, eps_y: 0 },
        Flavor { eps_x: 1, eps_y: 0 },
        Flavor { eps_x: 0, eps_y: 1 },
    ];

    pub fn new(eps_x: u8, eps_y: u8) -> Flavor {
        Flavor { eps_x: eps_x & 1, eps_y: eps_y & 1 }
    }

    pub fn parse(s: &str) -> Result<Flavor, CoverError> {
        match s {
            "11" => Ok(Flavor::new(1, 1)),
            "00" => Ok(Flavor::new(0, 0)),
            "10" => Ok(Flavor::new(1, 0)),
            "01" => Ok(Flavor::new(0, 1)),
            other => Err(CoverError::UnknownFlavor(other.to_string())),
        }
    }

    pub fn label(&self) -> String {
        format!("{}{}", self.eps_x, self.eps_y)
    }

    /// 1-based index `i` of `μ_i`.
    pub fn mu_index(&self) -> usize {
        Flavor::ALL.iter().position(|f| f == self).unwrap() + 1
    }
}

/// Flip labels on the right and top edges of the `n × n` grid, indexed by
/// `b * n + a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeCocycle {
    pub n: usize,
    pub lambda_x: Vec<u8>,
    pub lambda_y: Vec<u8>,
}

impl EdgeCocycle {
    fn idx(&self, a: usize, b: usize) -> usize {
        (b % self.n) * self.n + a % self.n
    }

    pub fn x(&self, a: usize, b: usize) -> u8 {
        self.lambda_x[self.idx(a, b)]
    }

    pub fn y(&self, a: usize, b: usize) -> u8 {
        self.lambda_y[self.idx(a, b)]
    }

    /// Sheet change around the grid vertex `(a, b)`.
    pub fn vertex_flip(&self, a: usize, b: usize) -> u8 {
        let n = self.n;
        let (am, bm) = ((a + n - 1) % n, (b + n - 1) % n);
        (self.x(am, bm) + self.y(a, bm) + self.x(am, b) + self.y(am, bm)) % 2
    }

    pub fn row_flip(&self) -> u8 {
        (0..self.n).map(|a| self.x(a, 0)).sum::<u8>() % 2
    }

    pub fn column_flip(&self) -> u8 {
        (0..self.n).map(|b| self.y(0, b)).sum::<u8>() % 2
    }

    /// All vertex, row and column constraints hold.
    pub fn satisfies(&self, cfg: &TorsionConfig, flavor: Flavor) -> bool {
        let n = self.n;
        n as u64 == cfg.n()
            && (0..n).all(|a| {
                (0..n).all(|b| {
                    self.vertex_flip(a, b) as usize == cfg.multiplicity([a as u64, b as u64]) % 2
                })
            })
            && self.row_flip() == flavor.eps_x
            && self.column_flip() == flavor.eps_y
    }
}

fn cocycle_system(cfg: &TorsionConfig, flavor: Flavor) -> Gf2System {
    let n = cfg.n() as usize;
    let x = |a: usize, b: usize| (b % n) * n + a % n;
    let y = |a: usize, b: usize| n * n + (b % n) * n + a % n;
    let mut sys = Gf2System::new(2 * n * n);
    for a in 0..n {
        for b in 0..n {
            let (am, bm) = (a + n - 1, b + n - 1);
            let branched = cfg.multiplicity([a as u64, b as u64]) % 2 == 1;
            sys.add_equation(&[x(am, bm), y(a, bm), x(am, b), y(am, bm)], branched);
        }
    }
    let row: Vec<usize> = (0..n).map(|a| x(a, 0)).collect();
    sys.add_equation(&row, flavor.eps_x == 1);
    let col: Vec<usize> = (0..n).map(|b| y(0, b)).collect();
    sys.add_equation(&col, flavor.eps_y == 1);
    sys
}

fn cocycle_from_bits(n: usize, bits: &[bool]) -> EdgeCocycle {
    EdgeCocycle {
        n,
        lambda_x: bits[..n * n].iter().map(|&b| b as u8).collect(),
        lambda_y: bits[n * n..].iter().map(|&b| b as u8).collect(),
    }
}

/// A flip-label cocycle realizing the branch data of `cfg` and the flavor.
pub fn solve_cocycle(cfg: &TorsionConfig, flavor: Flavor) -> Result<EdgeCocycle, CoverError> {
    let n = cfg.n() as usize;
    let order: Vec<usize> = (0..2 * n * n).collect();
    solve_cocycle_with_order(cfg, flavor, &order)
}

/// As [`solve_cocycle`], preferring pivot variables in `order` (indices
/// `b*n + a` for `λx(a, b)`, `n² + b*n + a` for `λy(a, b)`).
pub fn solve_cocycle_with_order(
    cfg: &TorsionConfig,
    flavor: Flavor,
    order: &[usize],
) -> Result<EdgeCocycle, CoverError> {
    let n = cfg.n() as usize;
    let bits = cocycle_system(cfg, flavor)
        .solve_with_order(order)
        .ok_or(CoverError::Unsolvable)?;
    let cocycle = cocycle_from_bits(n, &bits);
    debug_assert!(cocycle.satisfies(cfg, flavor));
    Ok(cocycle)
}

/// Square index of `(a, b, s)` in `D_P`.
pub fn dp_square(n: usize, a: usize, b: usize, s: usize) -> usize {
    (s % 2) * n * n + (b % n) * n + a % n
}

/// The origami of a cocycle.
pub fn origami_from_cocycle(cocycle: &EdgeCocycle) -> Result<Origami, OrigamiError> {
    let n = cocycle.n;
    let d = 2 * n * n;
    let mut x = vec![0; d];
    let mut y = vec![0; d];
    for s in 0..2 {
        for b in 0..n {
            for a in 0..n {
                let i = dp_square(n, a, b, s);
                x[i] = dp_square(n, a + 1, b, s + cocycle.x(a, b) as usize);
                y[i] = dp_square(n, a, b + 1, s + cocycle.y(a, b) as usize);
            }
        }
    }
    Origami::from_images(x, y)
}

pub fn build_dp(cfg: &TorsionConfig, flavor: Flavor) -> Result<Origami, CoverError> {
    let cocycle = solve_cocycle(cfg, flavor)?;
    Ok(origami_from_cocycle(&cocycle)?)
}

// quaternion units as indices: 1, -1, i, -i, j, -j, k, -k
const QUATERNION_NAMES: [&str; 8] = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"];

fn quaternion_mul(x: usize, y: usize) -> usize {
    // unit part u in {1, i, j, k} = 0..4, sign bit
    let (ux, sx) = (x / 2, x % 2);
    let (uy, sy) = (y / 2, y % 2);
    // TABLE[ux][uy] = (unit, sign)
    const TABLE: [[(usize, usize); 4]; 4] = [
        [(0, 0), (1, 0), (2, 0), (3, 0)],
        [(1, 0), (0, 1), (3, 0), (2, 1)],
        [(2, 0), (3, 1), (0, 1), (1, 0)],
        [(3, 0), (2, 0), (1, 1), (0, 1)],
    ];
    let (u, s) = TABLE[ux][uy];
    2 * u + (s ^ sx ^ sy)
}

/// Names of the squares of [`build_w`] (elements of the quaternion group).
pub fn w_square_names() -> [&'static str; 8] {
    QUATERNION_NAMES
}

/// Squares are the quaternion group; right neighbour `g·i`, upper neighbour `g·j`.
pub fn build_w() -> Origami {
    let (i, j) = (2, 4);
    let x = (0..8).map(|g| quaternion_mul(g, i)).collect();
    let y = (0..8).map(|g| quaternion_mul(g, j)).collect();
    Origami::from_images(x, y).expect("the quaternion origami is connected")
}

/// Left multiplication by a quaternion, as a permutation of the squares of `W`.
pub fn w_left_multiplication(g: usize) -> Permutation {
    Permutation::from_images_unchecked((0..8).map(|h| quaternion_mul(g, h)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlavorReport {
    pub flavor: String,
    pub mu: usize,
    pub lift_totals: Vec<usize>,
    pub hyperelliptic: bool,
    pub translations: usize,
    pub veech_index: Option<usize>,
}

/// Fixed-point profile of the `-I` lifts of all four flavors.
pub fn classify_flavors(cfg: &TorsionConfig) -> Result<Vec<FlavorReport>, CoverError> {
    Flavor::ALL
        .iter()
        .map(|&f| {
            let o = build_dp(cfg, f)?;
            let mut lift_totals: Vec<usize> = o.minus_one_lifts().iter().map(|l| l.total_fixed).collect();
            lift_totals.sort_unstable_by(|a, b| b.cmp(a));
            Ok(FlavorReport {
                flavor: f.label(),
                mu: f.mu_index(),
                hyperelliptic: lift_totals.contains(&8),
                lift_totals,
                translations: o.translations().len(),
                veech_index: None,
            })
        })
        .collect()
}

/// Whether some `-I` lift of `o` (a `D_P` for odd `n`) fixes both squares
/// over the grid square `((n-1)/2, (n-1)/2)`, whose center is the 2-torsion
/// point `(n/2, n/2)`, and two vertices (the preimages of the origin).
pub fn lift_fixes_half_period(o: &Origami, n: usize) -> bool {
    let h = (n - 1) / 2;
    let over_m = [dp_square(n, h, h, 0), dp_square(n, h, h, 1)];
    o.minus_one_lifts()
        .iter()
        .any(|l| l.total_fixed == 4 && l.fixed_vertices == 2 && over_m.iter().all(|&i| l.rho.apply(i) == i))
}

/// The flavor realizing `D_P` itself for odd `n`: non-hyperelliptic, with a
/// `-I` lift fixing the preimages of `(0, 0)` and `(n/2, n/2)`.
pub fn dp_flavor(cfg: &TorsionConfig) -> Result<Flavor, CoverError> {
    cfg.require_odd_general()?;
    let n = cfg.n() as usize;
    for f in Flavor::ALL {
        let o = build_dp(cfg, f)?;
        let hyperelliptic = o.minus_one_lifts().iter().any(|l| l.total_fixed == 8);
        if !hyperelliptic && lift_fixes_half_period(&o, n) {
            return Ok(f);
        }
    }
    Err(CoverError::NoDpFlavor)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub config: TorsionConfig,
    pub flavor: String,
    pub flavor_reports: Vec<FlavorReport>,
    pub computed_index: usize,
    pub predicted_index: usize,
    pub pointed_equivalent: bool,
    pub stabilizer_order: usize,
    pub index3_value: usize,
    pub index3_check: bool,
    pub contains_minus_identity: bool,
    pub excludes_t: bool,
    pub generators_in_gamma_uu: bool,
    pub generators_mod_n_rotations: bool,
    /// The other two non-hyperelliptic flavors lie in the SL2(Z)-orbit of `D_P`.
    pub non_hyperelliptic_same_orbit: bool,
    /// The other two non-hyperelliptic flavors have the same Veech group as `D_P`.
    pub non_hyperelliptic_pointed_equivalent: bool,
    pub pass: bool,
}

fn rotation_mod(m: &MatZ, n: u64) -> bool {
    let r = MatMod::reduce(m, n);
    let i = MatMod::identity(n);
    let s = MatMod::s(n);
    [i, i.neg(), s, s.neg()].contains(&r)
}

/// Computes the Veech group of `D_P` and compares it with the level-`2n`
/// congruence model; also records how the four flavors relate.
pub fn verify_theorem(cfg: &TorsionConfig) -> Result<TheoremReport, CoverError> {
    cfg.require_odd_general()?;
    let n = cfg.n();
    let flavor = dp_flavor(cfg)?;
    let mut flavor_reports = classify_flavors(cfg)?;
    let mut computed = None;
    let mut others: Vec<OrbitGraph> = Vec::new();
    for report in flavor_reports.iter_mut() {
        let f = Flavor::parse(&report.flavor)?;
        let graph = orbit(&build_dp(cfg, f)?);
        report.veech_index = Some(graph.len());
        if f == flavor {
            computed = Some(graph);
        } else if !report.hyperelliptic {
            others.push(graph);
        }
    }
    let computed = computed.expect("dp_flavor is one of the four flavors");
    let keys: BTreeSet<&[u8]> = computed.keys().collect();
    let computed_action = computed.action();
    let predicted = predicted_veech_action(cfg)?.coset_action();
    let stabilizer_order = stab_of_config(cfg).len();
    let index3_value = 3 * sl2_group_order(n) as usize / stabilizer_order;
    let generators = computed_action.stabilizer_generators();
    let report = TheoremReport {
        config: *cfg,
        flavor: flavor.label(),
        computed_index: computed_action.size(),
        predicted_index: sl2_group_order(2 * n) as usize / 8,
        pointed_equivalent: pointed_equivalent(&computed_action, &predicted),
        stabilizer_order,
        index3_value,
        index3_check: computed_action.size() == index3_value,
        contains_minus_identity: computed_action.contains(&MatZ::MINUS_IDENTITY),
        excludes_t: !computed_action.contains(&MatZ::T),
        generators_in_gamma_uu: generators.iter().all(in_gamma_uu),
        generators_mod_n_rotations: generators.iter().all(|g| rotation_mod(g, n)),
        non_hyperelliptic_same_orbit: others.iter().all(|g| g.keys().collect::<BTreeSet<_>>() == keys),
        non_hyperelliptic_pointed_equivalent: others
            .iter()
            .all(|g| pointed_equivalent(&g.action(), &computed_action)),
        flavor_reports,
        pass: false,
    };
    let pass = report.computed_index == report.predicted_index
        && report.pointed_equivalent
        && report.index3_check
        && report.contains_minus_identity
        && report.excludes_t;
    Ok(TheoremReport { pass, ..report })
}

/// Whether the four branch points are pairwise distinct and the pair is in
/// general position, i.e. the hypotheses used by [`verify_theorem`].
pub fn theorem_applies(cfg: &TorsionConfig) -> bool {
    cfg.n() % 2 == 1 && general_position(cfg)
}
