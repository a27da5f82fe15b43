//! The four obstruction families that rule out a rainbow spanning copy of a
//! tree in `K_G`, each reported with a checkable witness.

use serde::Serialize;
use thiserror::Error;

use crate::group::GroupSpec;
use crate::tree::Tree;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("tree has {tree} vertices but the group has order {group}")]
    SizeMismatch { tree: usize, group: usize },
}

/// `d ≡ d' (mod G)`, i.e. `(d - d')·x = 0` for every `x`, i.e. the difference
/// is divisible by the characteristic.
pub fn mod_g_congruent(d: i64, d_prime: i64, spec: &GroupSpec) -> bool {
    (d - d_prime).rem_euclid(spec.characteristic() as i64) == 0
}

/// Four even-degree vertices inducing a perfect matching.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FourEvenWitness {
    pub vertices: [usize; 4],
    pub matching: [(usize, usize); 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionReport {
    pub group: GroupSpec,
    /// `G = Z_2^k` (`k >= 2`) and the tree is a path.
    pub o1_path_z2k: bool,
    /// `G = Z_2^k` (`k >= 2`) and exactly two vertices have even degree.
    pub o2_two_even: bool,
    /// An edge `uv` with `d(u) ≡ d(v) ≡ 0` and every other degree `≡ 1` mod `G`.
    pub o3_char_pair: Option<(usize, usize)>,
    /// `G = Z_2^k` (`k >= 2`) and exactly four even-degree vertices that
    /// induce a perfect matching.
    pub o4_four_even_pm: Option<FourEvenWitness>,
    pub obstructed: bool,
}

impl ObstructionReport {
    pub fn flags(&self) -> [bool; 4] {
        [
            self.o1_path_z2k,
            self.o2_two_even,
            self.o3_char_pair.is_some(),
            self.o4_four_even_pm.is_some(),
        ]
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Evaluates every obstruction for a spanning tree of `K_G`.
pub fn classify(tree: &Tree, spec: &GroupSpec) -> Result<ObstructionReport, ClassifyError> {
    if tree.n() != spec.order() {
        return Err(ClassifyError::SizeMismatch {
            tree: tree.n(),
            group: spec.order(),
        });
    }
    let z2k = spec.is_elementary_two_rank_at_least_two();
    let evens = tree.even_degree_vertices();

    let o1 = z2k && tree.is_path();
    let o2 = z2k && evens.len() == 2;
    let o3 = char_pair(tree, spec);
    let o4 = if z2k && evens.len() == 4 {
        four_even_matching(tree, &evens)
    } else {
        None
    };
    let obstructed = o1 || o2 || o3.is_some() || o4.is_some();
    Ok(ObstructionReport {
        group: spec.clone(),
        o1_path_z2k: o1,
        o2_two_even: o2,
        o3_char_pair: o3,
        o4_four_even_pm: o4,
        obstructed,
    })
}

fn char_pair(tree: &Tree, spec: &GroupSpec) -> Option<(usize, usize)> {
    let deg = |v: usize| tree.degree(v) as i64;
    let zero: Vec<usize> = (0..tree.n()).filter(|&v| mod_g_congruent(deg(v), 0, spec)).collect();
    if zero.len() != 2 || !tree.has_edge(zero[0], zero[1]) {
        return None;
    }
    let rest_ok = (0..tree.n())
        .filter(|v| !zero.contains(v))
        .all(|v| mod_g_congruent(deg(v), 1, spec));
    rest_ok.then_some((zero[0], zero[1]))
}

fn four_even_matching(tree: &Tree, evens: &[usize]) -> Option<FourEvenWitness> {
    let [a, b, c, d] = evens[..] else {
        return None;
    };
    for (x, y, z, w) in [(a, b, c, d), (a, c, b, d), (a, d, b, c)] {
        if tree.has_edge(x, y) && tree.has_edge(z, w) {
            return Some(FourEvenWitness {
                vertices: [a, b, c, d],
                matching: [(x, y), (z, w)],
            });
        }
    }
    None
}
