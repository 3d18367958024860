//! Finite groups given by Cayley tables, together with the subgroup, coset,
//! complement and transversal machinery needed to lay out sampling matrices.
//!
//! Elements are plain indices `0..|G|`. Groups are value objects: two groups
//! with the same table are interchangeable, and all orderings derived from a
//! group are reproducible from the table alone.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

/// Index of a group element in its Cayley table.
pub type Element = usize;

/// Largest order accepted by [`FiniteGroup::from_cayley_table`]; the
/// associativity check is cubic in the order.
pub const MAX_ORDER: usize = 256;

/// Largest order for which [`find_complement`] searches subgroups.
pub const MAX_COMPLEMENT_SEARCH_ORDER: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroupError {
    #[error("cyclic group order must be at least 1")]
    ZeroOrder,
    #[error("dihedral group D_m needs m >= 2, got {0}")]
    DihedralTooSmall(usize),
    #[error("table is empty")]
    EmptyTable,
    #[error("group order {order} exceeds the limit of {limit}")]
    TooLarge { order: usize, limit: usize },
    #[error("table is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("table entry ({row}, {col}) = {value} is out of range")]
    EntryOutOfRange { row: usize, col: usize, value: usize },
    #[error("row {0} is not a permutation of the elements")]
    RowNotPermutation(usize),
    #[error("column {0} is not a permutation of the elements")]
    ColumnNotPermutation(usize),
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("associativity fails: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: Element, b: Element, c: Element },
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("unknown element {0}")]
    UnknownElement(String),
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("subgroup is not Abelian: {a} and {b} do not commute")]
    NotAbelian { a: Element, b: Element },
    #[error("complement search is limited to groups of order <= {limit}, got {order}")]
    SearchTooLarge { order: usize, limit: usize },
    #[error("|K| * |H| = {product} but |G| = {order}")]
    Cardinality { product: usize, order: usize },
    #[error("K and H intersect in the non-identity element {0}")]
    Intersect(Element),
    #[error("products collide: {k1}*{h1} = {k2}*{h2}")]
    ProductCollision { k1: Element, h1: Element, k2: Element, h2: Element },
    #[error("expected a vector of length {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
}

/// A finite group stored as its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    cayley: Vec<Vec<Element>>,
    identity: Element,
    inverses: Vec<Element>,
    labels: Option<Vec<String>>,
}

impl FiniteGroup {
    /// The cyclic group Z_M with `g * h = (g + h) mod M`.
    pub fn cyclic(m: usize) -> Result<Self, GroupError> {
        if m == 0 {
            return Err(GroupError::ZeroOrder);
        }
        let table = (0..m).map(|g| (0..m).map(|h| (g + h) % m).collect()).collect();
        Self::from_cayley_table(table, None)
    }

    /// The dihedral group D_m of order `2m`, elements ordered
    /// `e, g, ..., g^{m-1}, t, tg, ..., tg^{m-1}` where `g` is the rotation and
    /// `t` the reflection, with `g^m = t^2 = e` and `t g = g^{m-1} t`.
    pub fn dihedral(m: usize) -> Result<Self, GroupError> {
        if m < 2 {
            return Err(GroupError::DihedralTooSmall(m));
        }
        // element index f*m + r stands for t^f g^r
        let decode = |x: usize| (x / m, x % m);
        let table = (0..2 * m)
            .map(|x| {
                (0..2 * m)
                    .map(|y| {
                        let (f1, r1) = decode(x);
                        let (f2, r2) = decode(y);
                        // g^r t = t g^{-r}
                        let r1 = if f2 == 1 { (m - r1) % m } else { r1 };
                        ((f1 + f2) % 2) * m + (r1 + r2) % m
                    })
                    .collect()
            })
            .collect();
        let power = |r: usize| match r {
            0 => String::new(),
            1 => "g".to_string(),
            r => format!("g^{r}"),
        };
        let labels = (0..2 * m)
            .map(|x| {
                let (f, r) = decode(x);
                match (f, r) {
                    (0, 0) => "e".to_string(),
                    (0, r) => power(r),
                    (_, r) => format!("t{}", power(r)),
                }
            })
            .collect();
        Self::from_cayley_table(table, Some(labels))
    }

    /// Validates a multiplication table: square, Latin, with identity, and
    /// associative (checked exhaustively).
    pub fn from_cayley_table(
        table: Vec<Vec<Element>>,
        labels: Option<Vec<String>>,
    ) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::EmptyTable);
        }
        if n > MAX_ORDER {
            return Err(GroupError::TooLarge { order: n, limit: MAX_ORDER });
        }
        for (row, entries) in table.iter().enumerate() {
            if entries.len() != n {
                return Err(GroupError::NotSquare { row, len: entries.len(), expected: n });
            }
            for (col, &value) in entries.iter().enumerate() {
                if value >= n {
                    return Err(GroupError::EntryOutOfRange { row, col, value });
                }
            }
        }
        let mut seen = vec![false; n];
        for (row, entries) in table.iter().enumerate() {
            seen.iter_mut().for_each(|s| *s = false);
            for &v in entries {
                if std::mem::replace(&mut seen[v], true) {
                    return Err(GroupError::RowNotPermutation(row));
                }
            }
        }
        for col in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for entries in &table {
                if std::mem::replace(&mut seen[entries[col]], true) {
                    return Err(GroupError::ColumnNotPermutation(col));
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or(GroupError::NoIdentity)?;
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(GroupError::NotAssociative { a, b, c });
                    }
                }
            }
        }
        // Latin + identity: each row holds the identity exactly once
        let inverses = (0..n)
            .map(|g| table[g].iter().position(|&x| x == identity).expect("Latin row"))
            .collect();
        if let Some(labels) = &labels {
            if labels.len() != n {
                return Err(GroupError::LabelCount { expected: n, got: labels.len() });
            }
        }
        Ok(Self { cayley: table, identity, inverses, labels })
    }

    pub fn order(&self) -> usize {
        self.cayley.len()
    }

    pub fn identity(&self) -> Element {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        self.cayley[a][b]
    }

    #[inline]
    pub fn inv(&self, g: Element) -> Element {
        self.inverses[g]
    }

    pub fn inverses(&self) -> &[Element] {
        &self.inverses
    }

    pub fn cayley_table(&self) -> &[Vec<Element>] {
        &self.cayley
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Label of `g`, falling back to its index.
    pub fn label(&self, g: Element) -> String {
        match &self.labels {
            Some(labels) => labels[g].clone(),
            None => g.to_string(),
        }
    }

    /// Resolves either a label or a decimal index.
    pub fn element(&self, name: &str) -> Result<Element, GroupError> {
        if let Some(labels) = &self.labels {
            if let Some(pos) = labels.iter().position(|l| l == name) {
                return Ok(pos);
            }
        }
        match name.parse::<usize>() {
            Ok(g) if g < self.order() => Ok(g),
            _ => Err(GroupError::UnknownElement(name.to_string())),
        }
    }

    pub fn check_element(&self, g: Element) -> Result<Element, GroupError> {
        if g < self.order() {
            Ok(g)
        } else {
            Err(GroupError::UnknownElement(g.to_string()))
        }
    }

    pub fn is_abelian(&self) -> bool {
        self.non_commuting_pair(0..self.order()).is_none()
    }

    fn non_commuting_pair(
        &self,
        elements: impl Iterator<Item = Element> + Clone,
    ) -> Option<(Element, Element)> {
        for a in elements.clone() {
            for b in elements.clone() {
                if self.mul(a, b) != self.mul(b, a) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// Smallest subgroup containing `generators`.
    pub fn generate(&self, generators: &[Element]) -> Result<Subgroup, GroupError> {
        for &g in generators {
            self.check_element(g)?;
        }
        let mut members = vec![false; self.order()];
        members[self.identity] = true;
        let mut queue: VecDeque<Element> = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in generators {
                let y = self.mul(x, g);
                if !members[y] {
                    members[y] = true;
                    queue.push_back(y);
                }
            }
        }
        // finite group: closure under multiplication by generators is a subgroup
        let elements = (0..self.order()).filter(|&g| members[g]).collect();
        Ok(Subgroup { elements, parent_order: self.order() })
    }

    fn closure_mask(&self, base: u64, extra: Element) -> u64 {
        let mut mask = base | (1u64 << extra);
        let mut queue: VecDeque<Element> = (0..self.order()).filter(|&g| mask >> g & 1 == 1).collect();
        let gens: Vec<Element> = queue.iter().copied().collect();
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = self.mul(x, g);
                if mask >> y & 1 == 0 {
                    mask |= 1u64 << y;
                    queue.push_back(y);
                }
            }
        }
        mask
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "group of order {}", self.order())
    }
}

/// A subgroup, stored as its sorted element list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    elements: Vec<Element>,
    parent_order: usize,
}

impl Subgroup {
    /// Validates that `elements` contains the identity and is closed under
    /// products and inverses.
    pub fn new(group: &FiniteGroup, elements: &[Element]) -> Result<Self, GroupError> {
        let mut set = BTreeSet::new();
        for &g in elements {
            set.insert(group.check_element(g)?);
        }
        if !set.contains(&group.identity()) {
            return Err(GroupError::NotSubgroup("identity missing".into()));
        }
        for &a in &set {
            if !set.contains(&group.inv(a)) {
                return Err(GroupError::NotSubgroup(format!("inverse of {a} missing")));
            }
            for &b in &set {
                if !set.contains(&group.mul(a, b)) {
                    return Err(GroupError::NotSubgroup(format!("{a}*{b} not contained")));
                }
            }
        }
        Ok(Self { elements: set.into_iter().collect(), parent_order: group.order() })
    }

    pub fn trivial(group: &FiniteGroup) -> Self {
        Self { elements: vec![group.identity()], parent_order: group.order() }
    }

    pub fn whole(group: &FiniteGroup) -> Self {
        Self { elements: (0..group.order()).collect(), parent_order: group.order() }
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: Element) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn is_abelian(&self, group: &FiniteGroup) -> bool {
        group.non_commuting_pair(self.elements.iter().copied()).is_none()
    }

    fn check_parent(&self, group: &FiniteGroup) -> Result<(), GroupError> {
        if self.parent_order != group.order() {
            return Err(GroupError::NotSubgroup(format!(
                "subgroup belongs to a group of order {}, not {}",
                self.parent_order,
                group.order()
            )));
        }
        Ok(())
    }
}

/// Partition of `G` into left cosets `gH`; the coset of the identity comes
/// first, the rest are ordered by their smallest element.
pub fn left_cosets(group: &FiniteGroup, h: &Subgroup) -> Vec<Vec<Element>> {
    let mut assigned = vec![false; group.order()];
    let mut cosets = Vec::with_capacity(group.order() / h.order().max(1));
    let starts = std::iter::once(group.identity()).chain(0..group.order());
    for g in starts {
        if assigned[g] {
            continue;
        }
        let mut coset: Vec<Element> = h.elements().iter().map(|&x| group.mul(g, x)).collect();
        coset.sort_unstable();
        for &x in &coset {
            assigned[x] = true;
        }
        cosets.push(coset);
    }
    cosets
}

/// Every subgroup `H` with `K ∩ H = {e}` and `KH = G`, sorted by element list.
pub fn all_complements(group: &FiniteGroup, k: &Subgroup) -> Result<Vec<Subgroup>, GroupError> {
    k.check_parent(group)?;
    if let Some((a, b)) = group.non_commuting_pair(k.elements().iter().copied()) {
        return Err(GroupError::NotAbelian { a, b });
    }
    let n = group.order();
    if n > MAX_COMPLEMENT_SEARCH_ORDER {
        return Err(GroupError::SearchTooLarge { order: n, limit: MAX_COMPLEMENT_SEARCH_ORDER });
    }
    if !n.is_multiple_of(k.order()) {
        return Ok(Vec::new());
    }
    let target = n / k.order();
    let k_mask: u64 = k.elements().iter().fold(0, |m, &g| m | 1u64 << g);
    let e_mask = 1u64 << group.identity();

    // Grow subgroups one generator at a time, keeping only those whose order
    // divides the target and which meet K trivially.
    let mut visited: HashSet<u64> = HashSet::from([e_mask]);
    let mut stack = vec![e_mask];
    let mut found = BTreeSet::new();
    while let Some(mask) = stack.pop() {
        let size = mask.count_ones() as usize;
        if size == target {
            found.insert(mask_to_elements(mask, n));
            continue;
        }
        for g in 0..n {
            if mask >> g & 1 == 1 || k_mask >> g & 1 == 1 {
                continue;
            }
            let next = group.closure_mask(mask, g);
            let next_size = next.count_ones() as usize;
            if !target.is_multiple_of(next_size) || next & k_mask != e_mask {
                continue;
            }
            if visited.insert(next) {
                stack.push(next);
            }
        }
    }
    Ok(found
        .into_iter()
        .map(|elements| Subgroup { elements, parent_order: n })
        .collect())
}

fn mask_to_elements(mask: u64, n: usize) -> Vec<Element> {
    (0..n).filter(|&g| mask >> g & 1 == 1).collect()
}

/// First complement of the Abelian subgroup `K` in the order of
/// [`all_complements`], or `None` when no complement exists.
pub fn find_complement(group: &FiniteGroup, k: &Subgroup) -> Result<Option<Subgroup>, GroupError> {
    Ok(all_complements(group, k)?.into_iter().next())
}

/// The sampling subgroup `K = {tau_0 = e, tau_1, ...}`, its complement `H`,
/// and the multiplication table of `K` in terms of tau indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transversal {
    k: Subgroup,
    h: Subgroup,
    taus: Vec<Element>,
    // k_table[i][n] = k  with  tau_i * tau_n = tau_k
    k_table: Vec<Vec<usize>>,
}

impl Transversal {
    pub fn new(group: &FiniteGroup, k: &Subgroup, h: &Subgroup) -> Result<Self, GroupError> {
        k.check_parent(group)?;
        h.check_parent(group)?;
        if let Some((a, b)) = group.non_commuting_pair(k.elements().iter().copied()) {
            return Err(GroupError::NotAbelian { a, b });
        }
        if let Some(&x) = k.elements().iter().find(|&&x| x != group.identity() && h.contains(x)) {
            return Err(GroupError::Intersect(x));
        }
        let mut owner: Vec<Option<(Element, Element)>> = vec![None; group.order()];
        for &kk in k.elements() {
            for &hh in h.elements() {
                let p = group.mul(kk, hh);
                if let Some((k1, h1)) = owner[p] {
                    return Err(GroupError::ProductCollision { k1, h1, k2: kk, h2: hh });
                }
                owner[p] = Some((kk, hh));
            }
        }
        let product = k.order() * h.order();
        if product != group.order() {
            return Err(GroupError::Cardinality { product, order: group.order() });
        }

        let e = group.identity();
        let taus: Vec<Element> = std::iter::once(e)
            .chain(k.elements().iter().copied().filter(|&x| x != e))
            .collect();
        let mut position = vec![usize::MAX; group.order()];
        for (i, &t) in taus.iter().enumerate() {
            position[t] = i;
        }
        let k_table = taus
            .iter()
            .map(|&ti| taus.iter().map(|&tn| position[group.mul(ti, tn)]).collect())
            .collect();
        Ok(Self { k: k.clone(), h: h.clone(), taus, k_table })
    }

    pub fn k(&self) -> &Subgroup {
        &self.k
    }

    pub fn h(&self) -> &Subgroup {
        &self.h
    }

    pub fn taus(&self) -> &[Element] {
        &self.taus
    }

    pub fn tau(&self, n: usize) -> Element {
        self.taus[n]
    }

    /// `ell = |K|`, the number of sampling points per system.
    pub fn ell(&self) -> usize {
        self.taus.len()
    }

    /// Index `k` with `tau_i * tau_n = tau_k`.
    pub fn product_index(&self, i: usize, n: usize) -> usize {
        self.k_table[i][n]
    }

    pub fn product_table(&self) -> &[Vec<usize>] {
        &self.k_table
    }
}

/// Convenience wrapper for [`Transversal::new`].
pub fn build_transversal(
    group: &FiniteGroup,
    k: &Subgroup,
    h: &Subgroup,
) -> Result<Transversal, GroupError> {
    Transversal::new(group, k, h)
}

/// Element ordering `G = tau_0^{-1} H ∪ tau_1^{-1} H ∪ ...`, each block
/// enumerated with `H` in ascending index order. Every coefficient vector
/// over the group and every column of a cross-covariance matrix uses it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalOrdering {
    order: Vec<Element>,
    position: Vec<usize>,
    block_len: usize,
}

impl CanonicalOrdering {
    pub fn new(group: &FiniteGroup, transversal: &Transversal) -> Self {
        let h = transversal.h().elements();
        let order: Vec<Element> = transversal
            .taus()
            .iter()
            .flat_map(|&tau| {
                let tau_inv = group.inv(tau);
                h.iter().map(move |&x| group.mul(tau_inv, x))
            })
            .collect();
        let mut position = vec![0; order.len()];
        for (i, &g) in order.iter().enumerate() {
            position[g] = i;
        }
        Self { order, position, block_len: h.len() }
    }

    /// Elements in canonical order.
    pub fn order(&self) -> &[Element] {
        &self.order
    }

    /// Inverse permutation: `position(order()[i]) == i`.
    pub fn inverse_order(&self) -> &[usize] {
        &self.position
    }

    pub fn position(&self, g: Element) -> usize {
        self.position[g]
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// `|H|`, the length of each coset block.
    pub fn block_len(&self) -> usize {
        self.block_len
    }

    pub fn block(&self, p: usize) -> &[Element] {
        &self.order[p * self.block_len..(p + 1) * self.block_len]
    }

    /// Source positions of the left translation by `s`:
    /// `(L_s alpha)[i] = alpha[map[i]]`.
    pub fn left_translation_map(&self, group: &FiniteGroup, s: Element) -> Vec<usize> {
        let s_inv = group.inv(s);
        self.order.iter().map(|&g| self.position[group.mul(s_inv, g)]).collect()
    }

    /// `(L_s alpha)(g) = alpha(s^{-1} g)` on a vector laid out in this order.
    pub fn left_translate<T: Clone>(
        &self,
        group: &FiniteGroup,
        s: Element,
        alpha: &[T],
    ) -> Result<Vec<T>, GroupError> {
        if alpha.len() != self.order.len() {
            return Err(GroupError::LengthMismatch { expected: self.order.len(), got: alpha.len() });
        }
        group.check_element(s)?;
        Ok(self
            .left_translation_map(group, s)
            .into_iter()
            .map(|src| alpha[src].clone())
            .collect())
    }
}

pub fn canonical_ordering(group: &FiniteGroup, transversal: &Transversal) -> CanonicalOrdering {
    CanonicalOrdering::new(group, transversal)
}
