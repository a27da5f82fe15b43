//! Harmonious labellings of `(n+1)`-vertex trees from rainbow bijections of
//! a leaf-deleted tree onto `Z_n`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::cayley::{verify_rainbow, Embedding, TargetSets};
use crate::group::GroupSpec;
use crate::tree::Tree;

use super::HarnessError;

/// Labels in `Z_n` (as integers `0..n`) on the `n + 1` vertices of a tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HarmoniousLabelling {
    pub n: u64,
    pub labels: Vec<u64>,
    /// The one label carried by two vertices.
    pub repeated_label: u64,
}

/// Integer representative of every element of a cyclic group.
fn integer_of(spec: &GroupSpec) -> Vec<u64> {
    let mut table = vec![0u64; spec.order()];
    for a in 0..spec.order() as i64 {
        table[spec.from_integer(a).as_usize()] = a as u64;
    }
    table
}

/// Completes a rainbow bijection of `T - leaf` onto `Z_n` by giving the
/// leaf the label `c - f(w)`, where `c` is the unused colour and `w` the
/// leaf's neighbour, so the new edge takes colour `c`.
///
/// `f` is indexed as in [`Tree::remove_leaf`].
pub fn harmonious_from_rainbow(t_plus: &Tree, leaf: usize, f: &Embedding) -> Result<HarmoniousLabelling, HarnessError> {
    let spec = f.spec();
    let n = spec.order();
    if !spec.is_cyclic() || t_plus.n() != n + 1 {
        return Err(HarnessError::Invalid(format!(
            "need Z_n with n + 1 = {} vertices, got {spec}",
            t_plus.n()
        )));
    }
    let (t, old) = t_plus
        .remove_leaf(leaf)
        .ok_or_else(|| HarnessError::Invalid(format!("vertex {leaf} is not a leaf")))?;
    if !verify_rainbow(&t, f, &TargetSets::full(spec))?.verdict {
        return Err(HarnessError::Invalid("f is not a rainbow bijection".into()));
    }
    let images = f.total_images()?;
    let used: BTreeSet<_> = t.edges().iter().map(|&(u, v)| spec.add(images[u], images[v])).collect();
    let c = spec
        .elements()
        .find(|c| !used.contains(c))
        .expect("n - 1 edges leave a colour unused");
    let w = t_plus.neighbors(leaf)[0];
    let w_new = old.iter().position(|&v| v == w).expect("neighbour survives");
    let leaf_image = spec.sub(c, images[w_new]);

    let ints = integer_of(spec);
    let mut labels = vec![0u64; n + 1];
    for (i, &v) in old.iter().enumerate() {
        labels[v] = ints[images[i].as_usize()];
    }
    labels[leaf] = ints[leaf_image.as_usize()];
    let labelling = HarmoniousLabelling {
        n: n as u64,
        repeated_label: labels[leaf],
        labels,
    };
    if !check_harmonious(t_plus, &labelling.labels) {
        return Err(HarnessError::Invalid("labelling is not harmonious".into()));
    }
    Ok(labelling)
}

/// Labels on `n + 1` vertices in `0..n`: exactly one label used twice, the
/// rest once, and the `n` edge sums distinct mod `n`.
pub fn check_harmonious(tree: &Tree, labels: &[u64]) -> bool {
    if tree.n() < 2 || labels.len() != tree.n() {
        return false;
    }
    let n = (tree.n() - 1) as u64;
    if labels.iter().any(|&l| l >= n) {
        return false;
    }
    let mut counts = vec![0usize; n as usize];
    for &l in labels {
        counts[l as usize] += 1;
    }
    let repeated = counts.iter().filter(|&&k| k == 2).count();
    if repeated != 1 || counts.iter().any(|&k| k > 2) {
        return false;
    }
    let sums: BTreeSet<u64> = tree.edges().iter().map(|&(u, v)| (labels[u] + labels[v]) % n).collect();
    sums.len() == tree.edges().len()
}
