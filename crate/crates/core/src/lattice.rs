//! Subgroup lattice up to conjugacy by cyclic extension, maximal subgroups and
//! the Frattini subgroup.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use rustc_hash::{FxHashMap, FxHashSet};

use crate::error::{GroupError, Result};
use crate::group::GroupHandle;
use crate::perm::Permutation;
use crate::util::{is_prime, prime_power};

/// Sorted element list of a group with an index for lookups.
pub(crate) struct ElementIndex {
    pub elems: Vec<Permutation>,
    pub index: FxHashMap<Permutation, u32>,
}

impl ElementIndex {
    pub fn new(g: &GroupHandle) -> Result<Self> {
        let elems = g.sorted_elements()?;
        let index = elems
            .iter()
            .enumerate()
            .map(|(i, x)| (x.clone(), i as u32))
            .collect();
        Ok(ElementIndex { elems, index })
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn idx(&self, x: &Permutation) -> u32 {
        self.index[x]
    }

    /// Membership bitset of a subgroup.
    pub fn bits_of(&self, h: &GroupHandle) -> Result<FixedBitSet> {
        let mut b = FixedBitSet::with_capacity(self.len());
        for x in h.elements()?.iter() {
            let i = self.index.get(x).ok_or_else(|| {
                GroupError::Precondition("subgroup element outside the ambient group".to_string())
            })?;
            b.insert(*i as usize);
        }
        Ok(b)
    }
}

/// Element index plus full multiplication table.
pub(crate) struct ElementTable {
    pub index: ElementIndex,
    n: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

impl ElementTable {
    pub fn new(g: &GroupHandle) -> Result<Self> {
        let index = ElementIndex::new(g)?;
        let n = index.len();
        let mut mul = vec![0u32; n * n];
        for (i, a) in index.elems.iter().enumerate() {
            for (j, b) in index.elems.iter().enumerate() {
                mul[i * n + j] = index.idx(&a.then(b));
            }
        }
        let mut inv = vec![0u32; n];
        for i in 0..n {
            let row = &mul[i * n..(i + 1) * n];
            inv[i] = row
                .iter()
                .position(|&v| v == 0)
                .expect("identity is index 0") as u32;
        }
        Ok(ElementTable { index, n, mul, inv })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.n + b as usize]
    }

    #[inline]
    pub fn conj(&self, x: u32, g: u32) -> u32 {
        self.mul(self.mul(self.inv[g as usize], x), g)
    }

    pub fn elem(&self, i: u32) -> &Permutation {
        &self.index.elems[i as usize]
    }

    /// Order of the coset `xK`, given `x` normalises `K`.
    fn order_mod(&self, x: u32, k: &FixedBitSet) -> u64 {
        let mut y = x;
        let mut i = 1;
        while !k.contains(y as usize) {
            y = self.mul(y, x);
            i += 1;
        }
        i
    }

    /// Subgroup generated by `gens`, or `None` once it exceeds `limit` elements.
    pub fn closure(&self, gens: &[u32], limit: usize) -> Option<FixedBitSet> {
        let mut bits = FixedBitSet::with_capacity(self.n);
        bits.insert(0);
        let mut list = vec![0u32];
        let mut i = 0;
        while i < list.len() {
            for &g in gens {
                let y = self.mul(list[i], g);
                if !bits.contains(y as usize) {
                    bits.insert(y as usize);
                    list.push(y);
                    if list.len() > limit {
                        return None;
                    }
                }
            }
            i += 1;
        }
        Some(bits)
    }

    fn conjugate_bits(&self, h: &FixedBitSet, g: u32) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.n);
        for x in h.ones() {
            out.insert(self.conj(x as u32, g) as usize);
        }
        out
    }

    fn is_normalized_by(&self, h: &FixedBitSet, gens: &[u32], x: u32) -> bool {
        gens.iter().all(|&k| h.contains(self.conj(k, x) as usize))
    }
}

/// Lexicographic comparison of the sorted index lists.
fn cmp_sorted(a: &FixedBitSet, b: &FixedBitSet) -> Ordering {
    a.ones().cmp(b.ones())
}

/// One conjugacy class of subgroups.
#[derive(Debug, Clone)]
pub struct SubgroupClass {
    pub order: u64,
    /// Number of conjugates.
    pub size: usize,
    /// The conjugate whose sorted element list is lexicographically smallest.
    pub representative: GroupHandle,
}

struct ClassData {
    order: u64,
    gens: Vec<u32>,
    conjugates: Vec<FixedBitSet>,
}

/// All subgroups of a group up to conjugacy.
pub struct SubgroupLattice {
    group: GroupHandle,
    table: Arc<ElementTable>,
    data: Vec<ClassData>,
    classes: Vec<SubgroupClass>,
}

impl SubgroupLattice {
    pub fn group(&self) -> &GroupHandle {
        &self.group
    }

    /// Classes sorted by order, then by representative.
    pub fn classes(&self) -> &[SubgroupClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Total number of subgroups.
    pub fn subgroup_count(&self) -> usize {
        self.classes.iter().map(|c| c.size).sum()
    }

    /// Whether some conjugate of class `inner` lies in the representative of class `outer`.
    pub fn contains_conjugate(&self, outer: usize, inner: usize) -> bool {
        let o = &self.data[outer];
        let i = &self.data[inner];
        o.order.is_multiple_of(i.order) && i.conjugates.iter().any(|c| c.is_subset(&o.conjugates[0]))
    }

    /// Pairs `(outer, inner)` with a conjugate of `inner` inside `outer`'s representative.
    pub fn inclusion_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for o in 0..self.len() {
            for i in 0..self.len() {
                if i != o && self.contains_conjugate(o, i) {
                    out.push((o, i));
                }
            }
        }
        out
    }

    /// Indices of the maximal classes.
    pub fn maximal_class_indices(&self) -> Vec<usize> {
        let full = self.group.order();
        let mut maximal: Vec<usize> = Vec::new();
        let mut by_order: Vec<usize> = (0..self.len())
            .filter(|&i| self.data[i].order < full)
            .collect();
        by_order.sort_by(|&a, &b| self.data[b].order.cmp(&self.data[a].order).then(a.cmp(&b)));
        for i in by_order {
            let rep = &self.data[i].conjugates[0];
            let covered = maximal.iter().any(|&m| {
                let md = &self.data[m];
                md.order > self.data[i].order
                    && md.order.is_multiple_of(self.data[i].order)
                    && md.conjugates.iter().any(|c| rep.is_subset(c))
            });
            if !covered {
                maximal.push(i);
            }
        }
        maximal.sort();
        maximal
    }

    /// Intersection of all maximal subgroups.
    pub fn frattini(&self) -> GroupHandle {
        let mut acc = FixedBitSet::with_capacity(self.table.len());
        acc.insert_range(..);
        for m in self.maximal_class_indices() {
            for c in &self.data[m].conjugates {
                acc.intersect_with(c);
            }
        }
        let gens: Vec<Permutation> = generators_of(&self.table, &acc);
        self.group.subgroup_unchecked(gens)
    }

    /// Every conjugate of class `i`, as subgroups.
    pub fn conjugates(&self, i: usize) -> Vec<GroupHandle> {
        self.data[i]
            .conjugates
            .iter()
            .map(|c| self.group.subgroup_unchecked(generators_of(&self.table, c)))
            .collect()
    }
}

/// A small generating set: greedily adds the smallest element not yet generated.
fn generators_of(table: &ElementTable, set: &FixedBitSet) -> Vec<Permutation> {
    let mut gens: Vec<u32> = Vec::new();
    let mut span = FixedBitSet::with_capacity(table.len());
    span.insert(0);
    for x in set.ones() {
        if !span.contains(x) {
            gens.push(x as u32);
            span = table.closure(&gens, usize::MAX).expect("unbounded");
        }
    }
    gens.iter().map(|&i| table.elem(i).clone()).collect()
}

struct Builder<'a> {
    table: &'a ElementTable,
    group_gens: Vec<u32>,
    seen: FxHashMap<FixedBitSet, usize>,
    data: Vec<ClassData>,
}

impl Builder<'_> {
    /// Registers the class of `h` unless already known. Returns its index when new.
    fn register(&mut self, h: FixedBitSet, gens: Vec<u32>) -> Option<usize> {
        if self.seen.contains_key(&h) {
            return None;
        }
        let id = self.data.len();
        let order = h.count_ones(..) as u64;
        let mut orbit: Vec<(FixedBitSet, Vec<u32>)> = vec![(h.clone(), gens)];
        self.seen.insert(h, id);
        let mut i = 0;
        while i < orbit.len() {
            for &g in &self.group_gens {
                let c = self.table.conjugate_bits(&orbit[i].0, g);
                if !self.seen.contains_key(&c) {
                    self.seen.insert(c.clone(), id);
                    let cg = orbit[i].1.iter().map(|&k| self.table.conj(k, g)).collect();
                    orbit.push((c, cg));
                }
            }
            i += 1;
        }
        let best = (0..orbit.len())
            .min_by(|&a, &b| cmp_sorted(&orbit[a].0, &orbit[b].0))
            .expect("nonempty orbit");
        orbit.swap(0, best);
        let gens = orbit[0].1.clone();
        let conjugates = orbit.into_iter().map(|(b, _)| b).collect();
        self.data.push(ClassData {
            order,
            gens,
            conjugates,
        });
        Some(id)
    }
}

/// Full subgroup lattice up to conjugacy. Requires `|G|` within the lattice cap.
pub fn subgroup_lattice(g: &GroupHandle) -> Result<SubgroupLattice> {
    subgroup_lattice_filtered(g, &|_| true)
}

/// Lattice of the subgroups whose order satisfies `keep`.
///
/// `keep` must be closed under taking divisors (for instance "coprime to p"),
/// otherwise subgroups reached only through rejected orders are missed.
pub fn subgroup_lattice_filtered(
    g: &GroupHandle,
    keep: &dyn Fn(u64) -> bool,
) -> Result<SubgroupLattice> {
    let caps = g.caps();
    caps.check("subgroup lattice", caps.lattice, g.order())?;
    let table = Arc::new(ElementTable::new(g)?);
    let group_gens: Vec<u32> = g.generators().iter().map(|x| table.index.idx(x)).collect();
    let mut b = Builder {
        table: &table,
        group_gens,
        seen: FxHashMap::default(),
        data: Vec::new(),
    };
    let mut trivial = FixedBitSet::with_capacity(table.len());
    trivial.insert(0);
    let mut queue: BTreeMap<(u64, usize), ()> = BTreeMap::new();
    let id = b.register(trivial, Vec::new()).expect("first class");
    queue.insert((1, id), ());

    if !crate::series::is_solvable(g) {
        for id in perfect_subgroups(&mut b, g, keep)? {
            queue.insert((b.data[id].order, id), ());
        }
    }

    while let Some(((_, k), ())) = queue.pop_first() {
        let (k_bits, k_gens) = {
            let d = &b.data[k];
            (d.conjugates[0].clone(), d.gens.clone())
        };
        let k_order = b.data[k].order;
        let mut done = k_bits.clone();
        for x in 0..table.len() as u32 {
            if done.contains(x as usize) || !table.is_normalized_by(&k_bits, &k_gens, x) {
                continue;
            }
            let p = table.order_mod(x, &k_bits);
            if !is_prime(p) {
                continue;
            }
            let mut h = k_bits.clone();
            let mut xi = x;
            for _ in 1..p {
                for kk in k_bits.ones() {
                    h.insert(table.mul(xi, kk as u32) as usize);
                }
                xi = table.mul(xi, x);
            }
            done.union_with(&h);
            let order = p * k_order;
            if !keep(order) {
                continue;
            }
            let mut gens = k_gens.clone();
            gens.push(x);
            if let Some(id) = b.register(h, gens) {
                queue.insert((order, id), ());
            }
        }
    }

    let Builder { data, .. } = b;
    let mut order: Vec<usize> = (0..data.len()).collect();
    order.sort_by(|&a, &b| {
        data[a]
            .order
            .cmp(&data[b].order)
            .then_with(|| cmp_sorted(&data[a].conjugates[0], &data[b].conjugates[0]))
    });
    let mut slots: Vec<Option<ClassData>> = data.into_iter().map(Some).collect();
    let data: Vec<ClassData> = order
        .iter()
        .map(|&i| slots[i].take().expect("permutation"))
        .collect();
    let classes = data
        .iter()
        .map(|d| SubgroupClass {
            order: d.order,
            size: d.conjugates.len(),
            representative: g
                .subgroup_unchecked(d.gens.iter().map(|&i| table.elem(i).clone()).collect()),
        })
        .collect();
    Ok(SubgroupLattice {
        group: g.clone(),
        table,
        data,
        classes,
    })
}

/// Nontrivial perfect subgroups from two-element closures and their joins.
fn perfect_subgroups(
    b: &mut Builder<'_>,
    g: &GroupHandle,
    keep: &dyn Fn(u64) -> bool,
) -> Result<Vec<usize>> {
    let table = b.table;
    let limit = (1..=g.order())
        .rev()
        .find(|&m| g.order().is_multiple_of(m) && keep(m))
        .unwrap_or(1) as usize;
    let reps: Vec<u32> = g
        .conjugacy_classes()?
        .representatives
        .iter()
        .map(|x| table.index.idx(x))
        .collect();
    let mut tried: FxHashSet<FixedBitSet> = FxHashSet::default();
    let mut perfect: Vec<(FixedBitSet, Vec<u32>)> = Vec::new();
    let is_perfect = |bits: &FixedBitSet, gens: &[u32]| -> bool {
        let order = bits.count_ones(..) as u64;
        if order == 1 || prime_power(order).is_some() {
            return false;
        }
        let h = g.subgroup_unchecked(gens.iter().map(|&i| table.elem(i).clone()).collect());
        h.derived().order() == order
    };
    for &a in &reps {
        for y in 1..table.len() as u32 {
            let Some(bits) = table.closure(&[a, y], limit) else {
                continue;
            };
            if !keep(bits.count_ones(..) as u64) || !tried.insert(bits.clone()) {
                continue;
            }
            if is_perfect(&bits, &[a, y]) {
                perfect.push((bits, vec![a, y]));
            }
        }
    }
    // Joins of perfect subgroups are perfect.
    let mut i = 0;
    while i < perfect.len() {
        for j in 0..i {
            let mut gens = perfect[i].1.clone();
            gens.extend(perfect[j].1.iter().copied());
            let Some(bits) = table.closure(&gens, limit) else {
                continue;
            };
            if keep(bits.count_ones(..) as u64) && tried.insert(bits.clone()) {
                perfect.push((bits, gens));
            }
        }
        i += 1;
    }
    let mut ids = Vec::new();
    for (bits, gens) in perfect {
        if let Some(id) = b.register(bits, gens) {
            ids.push(id);
        }
    }
    Ok(ids)
}

/// Maximal subgroups up to conjugacy, with class sizes.
pub fn maximal_subgroups(g: &GroupHandle) -> Result<Vec<SubgroupClass>> {
    let l = subgroup_lattice(g)?;
    Ok(l.maximal_class_indices()
        .into_iter()
        .map(|i| l.classes[i].clone())
        .collect())
}

/// Frattini subgroup: `⟨G′, gᵖ⟩` for p-groups, otherwise the intersection of the maximal subgroups.
pub fn frattini(g: &GroupHandle) -> Result<GroupHandle> {
    let phi = match prime_power(g.order()) {
        Some((p, _)) => p_group_frattini(g, p),
        None if g.is_trivial() => g.clone(),
        None => subgroup_lattice(g)?.frattini(),
    };
    debug_assert!(phi.is_normal_in(g));
    Ok(phi)
}

/// `⟨P′, xᵖ : x ∈ gens⟩`, the Frattini subgroup of a p-group.
pub(crate) fn p_group_frattini(g: &GroupHandle, p: u64) -> GroupHandle {
    let mut seed: Vec<Permutation> = g.derived().generators().to_vec();
    seed.extend(g.generators().iter().map(|x| x.pow(p as i64)));
    g.normal_closure_unchecked(seed)
}
