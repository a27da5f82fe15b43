//! Finite abelian groups presented as direct products of cyclic factors.
//!
//! A [`GroupSpec`] is always held in canonical form: prime-power factor
//! orders sorted by prime ascending and then by exponent descending, so that
//! isomorphic groups compare equal. Elements are dense mixed-radix indices
//! with factor 0 as the most significant digit.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("malformed group spec {0:?}")]
    Malformed(String),
    #[error("cyclic factor order {0} is smaller than 2")]
    FactorTooSmall(u64),
    #[error("group order {0} is too large")]
    TooLarge(u64),
    #[error("element does not belong to {0}")]
    SpecMismatch(String),
    #[error("group order must be at least 1")]
    ZeroOrder,
}

/// A group element, stored as its mixed-radix index.
///
/// Elements carry no reference to their group; every operation goes
/// through the [`GroupSpec`] that owns them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(u32);

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement(0);

    pub const fn from_index(index: u32) -> Self {
        GroupElement(index)
    }

    pub const fn index(self) -> u32 {
        self.0
    }

    pub const fn as_usize(self) -> usize {
        self.0 as usize
    }
}

/// Canonical finite abelian group `Z_{q1} x Z_{q2} x ...` with prime-power `q_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupSpec {
    factors: Vec<u32>,
    // strides[i] = product of factors[i+1..]
    strides: Vec<u32>,
    order: u32,
}

const MAX_ORDER: u64 = 1 << 24;

fn prime_powers(mut k: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= k {
        if k.is_multiple_of(p) {
            let mut e = 0;
            while k.is_multiple_of(p) {
                k /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if k > 1 {
        out.push((k, 1));
    }
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl GroupSpec {
    /// Builds the canonical form of `Z_{k1} x Z_{k2} x ...`.
    pub fn from_cyclic_factors(orders: &[u64]) -> Result<Self, GroupError> {
        let mut parts: Vec<(u64, u32)> = Vec::new();
        let mut total: u64 = 1;
        for &k in orders {
            if k < 2 {
                return Err(GroupError::FactorTooSmall(k));
            }
            total = total.saturating_mul(k);
            if total > MAX_ORDER {
                return Err(GroupError::TooLarge(total));
            }
            parts.extend(prime_powers(k));
        }
        // prime ascending, exponent descending
        parts.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        let factors: Vec<u32> = parts.iter().map(|&(p, e)| p.pow(e) as u32).collect();
        Ok(Self::from_canonical(factors))
    }

    fn from_canonical(factors: Vec<u32>) -> Self {
        let mut strides = vec![1u32; factors.len()];
        for i in (0..factors.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * factors[i + 1];
        }
        let order = factors.iter().product::<u32>();
        GroupSpec {
            factors,
            strides,
            order,
        }
    }

    /// The cyclic group of order `n` (the trivial group when `n = 1`).
    pub fn cyclic(n: u64) -> Result<Self, GroupError> {
        match n {
            0 => Err(GroupError::ZeroOrder),
            1 => Ok(Self::trivial()),
            _ => Self::from_cyclic_factors(&[n]),
        }
    }

    /// `Z_2^k`.
    pub fn elementary_two(k: usize) -> Result<Self, GroupError> {
        if k == 0 {
            return Ok(Self::trivial());
        }
        Self::from_cyclic_factors(&vec![2; k])
    }

    pub fn trivial() -> Self {
        Self::from_canonical(Vec::new())
    }

    pub fn factors(&self) -> &[u32] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.order as usize
    }

    /// Smallest `m > 0` with `m·a = 0` for every element (lcm of the factors).
    pub fn characteristic(&self) -> u64 {
        self.factors
            .iter()
            .fold(1u64, |acc, &f| acc / gcd(acc, f as u64) * f as u64)
    }

    /// `Some(rank)` when the group is `Z_2^rank` (rank 0 is the trivial group).
    pub fn elementary_two_rank(&self) -> Option<usize> {
        self.factors.iter().all(|&f| f == 2).then_some(self.factors.len())
    }

    /// `Z_2^k` with `k >= 2`: the groups where colour 0 never occurs and
    /// the whole group sums to zero.
    pub fn is_elementary_two_rank_at_least_two(&self) -> bool {
        matches!(self.elementary_two_rank(), Some(k) if k >= 2)
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors
            .windows(2)
            .all(|w| prime_powers(w[0] as u64)[0].0 != prime_powers(w[1] as u64)[0].0)
    }

    pub fn contains(&self, a: GroupElement) -> bool {
        a.0 < self.order
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::IDENTITY
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + Clone {
        (0..self.order).map(GroupElement)
    }

    pub fn residues(&self, a: GroupElement) -> Vec<u32> {
        self.factors
            .iter()
            .zip(&self.strides)
            .map(|(&f, &s)| (a.0 / s) % f)
            .collect()
    }

    /// Element with the given residues; each residue is reduced modulo its factor.
    pub fn element(&self, residues: &[i64]) -> Result<GroupElement, GroupError> {
        if residues.len() != self.factors.len() {
            return Err(GroupError::SpecMismatch(self.to_string()));
        }
        let mut idx = 0u32;
        for ((&r, &f), &s) in residues.iter().zip(&self.factors).zip(&self.strides) {
            idx += r.rem_euclid(f as i64) as u32 * s;
        }
        Ok(GroupElement(idx))
    }

    /// Unit vector `e_i`: residue 1 on factor `i`, 0 elsewhere.
    pub fn basis(&self, i: usize) -> GroupElement {
        GroupElement(self.strides[i])
    }

    /// `a · (1, 1, ..., 1)`; for a cyclic group this is the integer `a` under
    /// the Chinese remainder isomorphism with `Z_n`.
    pub fn from_integer(&self, a: i64) -> GroupElement {
        let all_ones = GroupElement(self.strides.iter().sum());
        self.scalar_mul(a, all_ones)
    }

    pub fn add(&self, a: GroupElement, b: GroupElement) -> GroupElement {
        debug_assert!(self.contains(a) && self.contains(b));
        let mut idx = 0;
        for (&f, &s) in self.factors.iter().zip(&self.strides) {
            let r = ((a.0 / s) % f + (b.0 / s) % f) % f;
            idx += r * s;
        }
        GroupElement(idx)
    }

    pub fn checked_add(&self, a: GroupElement, b: GroupElement) -> Result<GroupElement, GroupError> {
        if !self.contains(a) || !self.contains(b) {
            return Err(GroupError::SpecMismatch(self.to_string()));
        }
        Ok(self.add(a, b))
    }

    pub fn neg(&self, a: GroupElement) -> GroupElement {
        let mut idx = 0;
        for (&f, &s) in self.factors.iter().zip(&self.strides) {
            let r = (f - (a.0 / s) % f) % f;
            idx += r * s;
        }
        GroupElement(idx)
    }

    pub fn sub(&self, a: GroupElement, b: GroupElement) -> GroupElement {
        self.add(a, self.neg(b))
    }

    /// `d·a` for any integer `d`, negative values included.
    pub fn scalar_mul(&self, d: i64, a: GroupElement) -> GroupElement {
        let mut idx = 0;
        for (&f, &s) in self.factors.iter().zip(&self.strides) {
            let r = ((a.0 / s) % f) as i64;
            idx += ((d.rem_euclid(f as i64) * r) % f as i64) as u32 * s;
        }
        GroupElement(idx)
    }

    pub fn sum<I: IntoIterator<Item = GroupElement>>(&self, items: I) -> GroupElement {
        items.into_iter().fold(self.identity(), |acc, x| self.add(acc, x))
    }

    /// Sum of every element of the group.
    pub fn sum_all(&self) -> GroupElement {
        self.sum(self.elements())
    }

    /// Number of `y` with `2y = g`.
    pub fn two_torsion_count(&self, g: GroupElement) -> usize {
        self.elements().filter(|&y| self.add(y, y) == g).count()
    }

    /// Ordered pairs `(y1, y2)` with `y1 != y2` and `y1 + y2 = g`.
    pub fn ordered_pair_solutions(&self, g: GroupElement) -> usize {
        self.elements().filter(|&y| self.sub(g, y) != y).count()
    }

    /// Unordered pairs `{y1, y2}` with `y1 != y2` and `y1 + y2 = g`.
    pub fn count_pair_solutions(&self, g: GroupElement) -> usize {
        self.ordered_pair_solutions(g) / 2
    }

    /// Human-readable element, e.g. `3` or `(1,0,1)`.
    pub fn format_element(&self, a: GroupElement) -> String {
        let r = self.residues(a);
        match r.len() {
            0 => "0".to_string(),
            1 => r[0].to_string(),
            _ => format!("({})", r.iter().map(u32::to_string).collect::<Vec<_>>().join(",")),
        }
    }

    /// Parses `3` or `1,0,1` (optionally parenthesised) as an element.
    pub fn parse_element(&self, text: &str) -> Result<GroupElement, GroupError> {
        let inner = text.trim().trim_start_matches('(').trim_end_matches(')');
        let residues = if inner.is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|t| t.trim().parse::<i64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| GroupError::Malformed(text.to_string()))?
        };
        self.element(&residues)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "Z1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.factors.len() {
            let mut j = i;
            while j < self.factors.len() && self.factors[j] == self.factors[i] {
                j += 1;
            }
            if !first {
                write!(f, "x")?;
            }
            first = false;
            if j - i == 1 {
                write!(f, "Z{}", self.factors[i])?;
            } else {
                write!(f, "Z{}^{}", self.factors[i], j - i)?;
            }
            i = j;
        }
        Ok(())
    }
}

/// Parses `Z<k>` terms joined by `x`, each optionally raised to `^e`.
pub fn parse_group_spec(text: &str) -> Result<GroupSpec, GroupError> {
    let malformed = || GroupError::Malformed(text.to_string());
    let text = text.trim();
    if text.is_empty() {
        return Err(malformed());
    }
    let mut orders = Vec::new();
    for term in text.split(['x', 'X']) {
        let term = term.trim();
        let body = term.strip_prefix('Z').ok_or_else(malformed)?;
        let (base, exp) = match body.split_once('^') {
            Some((b, e)) => (b, e.parse::<u32>().map_err(|_| malformed())?),
            None => (body, 1),
        };
        let k: u64 = base.parse().map_err(|_| malformed())?;
        if exp == 0 {
            return Err(malformed());
        }
        if k < 2 {
            return Err(GroupError::FactorTooSmall(k));
        }
        for _ in 0..exp {
            orders.push(k);
        }
    }
    GroupSpec::from_cyclic_factors(&orders)
}

impl FromStr for GroupSpec {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_group_spec(s)
    }
}

impl Serialize for GroupSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GroupSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        if text == "Z1" {
            return Ok(GroupSpec::trivial());
        }
        parse_group_spec(&text).map_err(serde::de::Error::custom)
    }
}

// Partitions of `e` in reverse lexicographic order: [e], [e-1,1], ...
fn partitions(e: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            go(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(e, e, &mut Vec::new(), &mut out);
    out
}

/// One canonical spec per isomorphism class of abelian groups of order `n`.
pub fn enumerate_abelian_groups(n: u64) -> Result<Vec<GroupSpec>, GroupError> {
    if n == 0 {
        return Err(GroupError::ZeroOrder);
    }
    if n > MAX_ORDER {
        return Err(GroupError::TooLarge(n));
    }
    let mut specs: Vec<Vec<u64>> = vec![Vec::new()];
    for (p, e) in prime_powers(n) {
        let mut next = Vec::new();
        for prefix in &specs {
            for part in partitions(e) {
                let mut orders = prefix.clone();
                orders.extend(part.iter().map(|&k| p.pow(k)));
                next.push(orders);
            }
        }
        specs = next;
    }
    specs
        .into_iter()
        .map(|orders| {
            if orders.is_empty() {
                Ok(GroupSpec::trivial())
            } else {
                GroupSpec::from_cyclic_factors(&orders)
            }
        })
        .collect()
}
