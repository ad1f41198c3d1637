//! The group engine: immutable handles over a stabilizer chain.

use std::collections::VecDeque;
use std::fmt;
use std::sync::{Arc, OnceLock};

use rustc_hash::{FxHashMap, FxHashSet};

use crate::chain::StabChain;
use crate::config::Caps;
use crate::error::{input, GroupError, Result};
use crate::perm::Permutation;
use crate::util::{factorize, prime_divisors};

struct Inner {
    degree: usize,
    generators: Vec<Permutation>,
    chain: StabChain,
    order: u64,
    parent: Option<GroupHandle>,
    caps: Caps,
    provenance: Option<String>,
    elements: OnceLock<Arc<Vec<Permutation>>>,
}

/// A finite permutation group: generators plus a stabilizer chain.
///
/// Handles are cheap to clone and immutable; the element list is computed
/// lazily on first use and then shared.
#[derive(Clone)]
pub struct GroupHandle(Arc<Inner>);

/// Builds a group with default caps.
pub fn build_group(degree: usize, generators: Vec<Permutation>) -> Result<GroupHandle> {
    GroupHandle::new(degree, generators, Caps::default())
}

impl GroupHandle {
    pub fn new(degree: usize, generators: Vec<Permutation>, caps: Caps) -> Result<Self> {
        if degree == 0 {
            return Err(input("degree must be positive"));
        }
        if let Some(bad) = generators.iter().find(|g| g.degree() != degree) {
            return Err(input(format!(
                "generator of degree {} in a group of degree {degree}",
                bad.degree()
            )));
        }
        Self::assemble(degree, generators, caps, None)
    }

    fn assemble(
        degree: usize,
        generators: Vec<Permutation>,
        caps: Caps,
        parent: Option<GroupHandle>,
    ) -> Result<Self> {
        let generators: Vec<Permutation> = generators
            .into_iter()
            .filter(|g| !g.is_identity())
            .collect();
        let chain = StabChain::from_generators(degree, &generators);
        let order = chain.order()?;
        Ok(GroupHandle(Arc::new(Inner {
            degree,
            generators,
            chain,
            order,
            parent,
            caps,
            provenance: None,
            elements: OnceLock::new(),
        })))
    }

    pub fn trivial(degree: usize) -> Self {
        Self::assemble(degree, Vec::new(), Caps::default(), None).expect("trivial group")
    }

    /// Subgroup of `self` generated by `gens`, which must all be members.
    pub fn subgroup(&self, gens: Vec<Permutation>) -> Result<GroupHandle> {
        for g in &gens {
            if !self.contains(g)? {
                return Err(input(format!("{g} is not an element of the ambient group")));
            }
        }
        Ok(self.subgroup_unchecked(gens))
    }

    pub(crate) fn subgroup_unchecked(&self, gens: Vec<Permutation>) -> GroupHandle {
        Self::assemble(self.degree(), gens, self.caps(), Some(self.clone()))
            .expect("subgroup order fits")
    }

    /// Same group, different caps.
    pub fn with_caps(&self, caps: Caps) -> GroupHandle {
        let mut h = Self::assemble(
            self.degree(),
            self.generators().to_vec(),
            caps,
            self.0.parent.clone(),
        )
        .expect("rebuild");
        if let Some(p) = &self.0.provenance {
            h = h.with_provenance(p.clone());
        }
        h
    }

    pub fn with_provenance(self, provenance: impl Into<String>) -> GroupHandle {
        let inner = Inner {
            degree: self.0.degree,
            generators: self.0.generators.clone(),
            chain: self.0.chain.clone(),
            order: self.0.order,
            parent: self.0.parent.clone(),
            caps: self.0.caps,
            provenance: Some(provenance.into()),
            elements: OnceLock::new(),
        };
        GroupHandle(Arc::new(inner))
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.0.generators
    }

    pub fn order(&self) -> u64 {
        self.0.order
    }

    pub fn parent(&self) -> Option<&GroupHandle> {
        self.0.parent.as_ref()
    }

    pub fn caps(&self) -> Caps {
        self.0.caps
    }

    pub fn provenance(&self) -> Option<&str> {
        self.0.provenance.as_deref()
    }

    pub fn base(&self) -> Vec<u32> {
        self.0.chain.base()
    }

    pub(crate) fn chain(&self) -> &StabChain {
        &self.0.chain
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree())
    }

    /// The trivial subgroup, with `self` as parent.
    pub fn trivial_subgroup(&self) -> GroupHandle {
        self.subgroup_unchecked(Vec::new())
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn prime_divisors(&self) -> Vec<u64> {
        prime_divisors(self.order())
    }

    pub fn factorization(&self) -> Vec<(u64, u32)> {
        factorize(self.order())
    }

    /// Membership test by sifting.
    pub fn contains(&self, g: &Permutation) -> Result<bool> {
        if g.degree() != self.degree() {
            return Err(input(format!(
                "element of degree {} tested against a group of degree {}",
                g.degree(),
                self.degree()
            )));
        }
        Ok(self.0.chain.contains(g))
    }

    pub(crate) fn has(&self, g: &Permutation) -> bool {
        self.0.chain.contains(g)
    }

    pub fn is_subgroup_of(&self, other: &GroupHandle) -> bool {
        self.degree() == other.degree()
            && other.order().is_multiple_of(self.order())
            && self.generators().iter().all(|g| other.has(g))
    }

    /// Equality as subsets of the symmetric group.
    pub fn same_group(&self, other: &GroupHandle) -> bool {
        self.order() == other.order() && self.is_subgroup_of(other)
    }

    /// All elements, each exactly once. Fails with a resource error above the enumeration cap.
    pub fn elements(&self) -> Result<Arc<Vec<Permutation>>> {
        if let Some(e) = self.0.elements.get() {
            return Ok(e.clone());
        }
        self.caps()
            .check("element enumeration", self.caps().enumeration, self.order())?;
        let mut out = Vec::with_capacity(self.order() as usize);
        self.0.chain.for_each_element(|g| out.push(g.clone()));
        let arc = Arc::new(out);
        let _ = self.0.elements.set(arc.clone());
        Ok(self.0.elements.get().cloned().unwrap_or(arc))
    }

    /// Streams elements without caching; still subject to the enumeration cap.
    pub fn enumerate_elements(&self) -> Result<impl Iterator<Item = Permutation>> {
        let elems = self.elements()?;
        Ok((0..elems.len()).map(move |i| elems[i].clone()))
    }

    pub fn is_abelian(&self) -> bool {
        let g = self.generators();
        g.iter()
            .enumerate()
            .all(|(i, a)| g[i + 1..].iter().all(|b| a.then(b) == b.then(a)))
    }

    pub fn is_normal_in(&self, ambient: &GroupHandle) -> bool {
        self.is_subgroup_of(ambient)
            && ambient.generators().iter().all(|x| {
                self.generators()
                    .iter()
                    .all(|h| self.has(&h.conjugate_by(x)))
            })
    }

    fn check_subset(&self, s: &[Permutation]) -> Result<()> {
        for g in s {
            if !self.contains(g)? {
                return Err(input(format!("{g} is not an element of the group")));
            }
        }
        Ok(())
    }

    /// `{g ∈ G : gs = sg for all s ∈ S}`.
    pub fn centralizer(&self, s: &[Permutation]) -> Result<GroupHandle> {
        self.check_subset(s)?;
        if s.is_empty() {
            return Ok(self.clone());
        }
        let elems = self.elements()?;
        let mut chain = StabChain::new(self.degree());
        let mut gens = Vec::new();
        for g in elems.iter() {
            if chain.contains(g) {
                continue;
            }
            if s.iter().all(|x| g.then(x) == x.then(g)) {
                chain.extend(g);
                gens.push(g.clone());
            }
        }
        Ok(self.subgroup_unchecked(gens))
    }

    pub fn center(&self) -> Result<GroupHandle> {
        let gens = self.generators().to_vec();
        self.centralizer(&gens)
    }

    /// `{g ∈ G : Hᵍ = H}` for a subgroup `H` of `G`.
    pub fn normalizer(&self, h: &GroupHandle) -> Result<GroupHandle> {
        if !h.is_subgroup_of(self) {
            return Err(input("normalizer of a non-subgroup"));
        }
        let elems = self.elements()?;
        let mut chain = StabChain::from_generators(self.degree(), h.generators());
        let mut gens = h.generators().to_vec();
        for g in elems.iter() {
            if chain.contains(g) {
                continue;
            }
            if h.generators().iter().all(|x| h.has(&x.conjugate_by(g))) {
                chain.extend(g);
                gens.push(g.clone());
            }
        }
        Ok(self.subgroup_unchecked(gens))
    }

    /// Smallest subgroup containing `s` and closed under conjugation by `G`.
    pub fn normal_closure(&self, s: &[Permutation]) -> Result<GroupHandle> {
        self.check_subset(s)?;
        Ok(self.normal_closure_unchecked(s.to_vec()))
    }

    pub(crate) fn normal_closure_unchecked(&self, seed: Vec<Permutation>) -> GroupHandle {
        let mut chain = StabChain::new(self.degree());
        let mut gens: Vec<Permutation> = Vec::new();
        let mut queue: VecDeque<Permutation> = seed.into_iter().collect();
        while let Some(h) = queue.pop_front() {
            if chain.extend(&h) {
                for x in self.generators() {
                    queue.push_back(h.conjugate_by(x));
                }
                gens.push(h);
            }
        }
        self.subgroup_unchecked(gens)
    }

    /// `[A, B]`, the normal closure in `⟨A, B⟩` of all `[a, b]` over generator pairs.
    pub fn commutator_subgroup(a: &GroupHandle, b: &GroupHandle) -> Result<GroupHandle> {
        if a.degree() != b.degree() {
            return Err(input("commutator of groups with different degrees"));
        }
        let join = a.join(b)?;
        let mut seed = Vec::new();
        for x in a.generators() {
            for y in b.generators() {
                let c = Permutation::commutator(x, y);
                if !c.is_identity() {
                    seed.push(c);
                }
            }
        }
        Ok(join.normal_closure_unchecked(seed))
    }

    pub fn derived(&self) -> GroupHandle {
        GroupHandle::commutator_subgroup(self, self).expect("same degree")
    }

    /// `⟨A ∪ B⟩`.
    pub fn join(&self, other: &GroupHandle) -> Result<GroupHandle> {
        if self.degree() != other.degree() {
            return Err(input("join of groups with different degrees"));
        }
        if other.is_subgroup_of(self) {
            return Ok(self.clone());
        }
        if self.is_subgroup_of(other) {
            return Ok(other.clone());
        }
        let mut gens = self.generators().to_vec();
        gens.extend(other.generators().iter().cloned());
        let parent = self.parent().cloned();
        Self::assemble(self.degree(), gens, self.caps(), parent)
    }

    /// `A ∩ B`. Filters the smaller group's elements when it is small enough,
    /// otherwise runs a base-image backtrack over `A`.
    pub fn intersection(&self, other: &GroupHandle) -> Result<GroupHandle> {
        if self.degree() != other.degree() {
            return Err(input("intersection of groups with different degrees"));
        }
        let (small, large) = if self.order() <= other.order() {
            (self, other)
        } else {
            (other, self)
        };
        if small.is_subgroup_of(large) {
            return Ok(small.clone());
        }
        if small.order() <= self.caps().intersection_filter {
            let elems = small.elements()?;
            let mut chain = StabChain::new(self.degree());
            let mut gens = Vec::new();
            for g in elems.iter() {
                if !chain.contains(g) && large.has(g) {
                    chain.extend(g);
                    gens.push(g.clone());
                }
            }
            Ok(small.subgroup_unchecked(gens))
        } else {
            Ok(crate::backtrack::intersection(small, large))
        }
    }

    /// Orbit of the conjugacy class of every element, as representatives and sizes.
    pub fn conjugacy_classes(&self) -> Result<ConjugacyClassSet> {
        let elems = self.elements()?;
        let index: FxHashMap<&Permutation, usize> =
            elems.iter().enumerate().map(|(i, g)| (g, i)).collect();
        let mut class_of = vec![usize::MAX; elems.len()];
        let mut order_idx: Vec<usize> = (0..elems.len()).collect();
        order_idx.sort_by(|&a, &b| elems[a].cmp(&elems[b]));
        let mut reps = Vec::new();
        let mut sizes = Vec::new();
        for &start in &order_idx {
            if class_of[start] != usize::MAX {
                continue;
            }
            let id = reps.len();
            class_of[start] = id;
            let mut members = vec![start];
            let mut cursor = 0;
            while cursor < members.len() {
                let x = &elems[members[cursor]];
                for g in self.generators() {
                    let y = x.conjugate_by(g);
                    let j = index[&y];
                    if class_of[j] == usize::MAX {
                        class_of[j] = id;
                        members.push(j);
                    }
                }
                cursor += 1;
            }
            reps.push(elems[start].clone());
            sizes.push(members.len() as u64);
        }
        Ok(ConjugacyClassSet {
            representatives: reps,
            sizes,
        })
    }

    /// Exponent: lcm of all element orders.
    pub fn exponent(&self) -> Result<u64> {
        Ok(self
            .elements()?
            .iter()
            .fold(1, |acc, g| crate::util::lcm(acc, g.order())))
    }

    /// Counts of elements by order, ascending by order.
    pub fn order_histogram(&self) -> Result<Vec<(u64, u64)>> {
        let mut map = std::collections::BTreeMap::new();
        for g in self.elements()?.iter() {
            *map.entry(g.order()).or_insert(0u64) += 1;
        }
        Ok(map.into_iter().collect())
    }

    /// Elements in ascending order; the tie-break key for reproducible representative choices.
    pub fn sorted_elements(&self) -> Result<Vec<Permutation>> {
        let mut v = self.elements()?.as_ref().clone();
        v.sort();
        Ok(v)
    }

    /// `G/N` as the action on the cosets of the normal subgroup `N`.
    pub fn quotient(&self, n: &GroupHandle) -> Result<QuotientMap> {
        QuotientMap::new(self, n)
    }

    /// Closure of the generators by breadth-first multiplication, independent of the chain.
    pub fn closure_count(&self) -> Result<u64> {
        let cap = self.caps().enumeration;
        let id = self.identity();
        let mut seen: FxHashSet<Permutation> = FxHashSet::default();
        seen.insert(id.clone());
        let mut queue = vec![id];
        while let Some(x) = queue.pop() {
            for g in self.generators() {
                let y = x.then(g);
                if seen.insert(y.clone()) {
                    if seen.len() as u64 > cap {
                        return Err(GroupError::Resource {
                            what: "closure enumeration",
                            cap,
                            needed: seen.len() as u64,
                        });
                    }
                    queue.push(y);
                }
            }
        }
        Ok(seen.len() as u64)
    }
}

impl fmt::Debug for GroupHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupHandle")
            .field("degree", &self.degree())
            .field("order", &self.order())
            .field("generators", &self.generators())
            .finish()
    }
}

#[derive(Debug, Clone)]
pub struct ConjugacyClassSet {
    pub representatives: Vec<Permutation>,
    pub sizes: Vec<u64>,
}

impl ConjugacyClassSet {
    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }
}

/// `G → G/N` realised as the action of `G` on the cosets of `N`.
#[derive(Debug, Clone)]
pub struct QuotientMap {
    source: GroupHandle,
    kernel: GroupHandle,
    image: GroupHandle,
    coset_of: Arc<FxHashMap<Permutation, u32>>,
    representatives: Vec<Permutation>,
}

impl QuotientMap {
    fn new(g: &GroupHandle, n: &GroupHandle) -> Result<Self> {
        if !n.is_normal_in(g) {
            return Err(GroupError::Precondition(
                "quotient by a subgroup that is not normal".to_string(),
            ));
        }
        let index = g.order() / n.order();
        g.caps()
            .check("quotient degree", g.caps().quotient_degree, index)?;
        let elems = g.elements()?;
        let kernel_elems = n.elements()?;
        let mut coset_of: FxHashMap<Permutation, u32> = FxHashMap::default();
        coset_of.reserve(elems.len());
        let mut reps: Vec<Permutation> = Vec::with_capacity(index as usize);
        // Identity first so that coset 0 is the kernel.
        let mut order: Vec<&Permutation> = elems.iter().collect();
        order.sort();
        for x in order {
            if coset_of.contains_key(x) {
                continue;
            }
            let id = reps.len() as u32;
            for k in kernel_elems.iter() {
                coset_of.insert(k.then(x), id);
            }
            reps.push(x.clone());
        }
        debug_assert_eq!(reps.len() as u64, index);
        let image_gens: Vec<Permutation> = g
            .generators()
            .iter()
            .map(|s| Self::act(&coset_of, &reps, s))
            .collect();
        let image = GroupHandle::assemble(index as usize, image_gens, g.caps(), None)?;
        Ok(QuotientMap {
            source: g.clone(),
            kernel: n.clone(),
            image,
            coset_of: Arc::new(coset_of),
            representatives: reps,
        })
    }

    fn act(
        coset_of: &FxHashMap<Permutation, u32>,
        reps: &[Permutation],
        s: &Permutation,
    ) -> Permutation {
        Permutation::from_images_unchecked(reps.iter().map(|r| coset_of[&r.then(s)]).collect())
    }

    pub fn source(&self) -> &GroupHandle {
        &self.source
    }

    pub fn kernel(&self) -> &GroupHandle {
        &self.kernel
    }

    pub fn image(&self) -> &GroupHandle {
        &self.image
    }

    /// Image of a source element in the coset action.
    pub fn apply(&self, g: &Permutation) -> Result<Permutation> {
        if !self.source.contains(g)? {
            return Err(input("element outside the source group"));
        }
        Ok(Self::act(&self.coset_of, &self.representatives, g))
    }

    /// Index of the coset containing `g`.
    pub fn coset_index(&self, g: &Permutation) -> Option<u32> {
        self.coset_of.get(g).copied()
    }

    /// A source element mapping to the given coset.
    pub fn lift_coset(&self, coset: u32) -> &Permutation {
        &self.representatives[coset as usize]
    }

    /// Full preimage of a subgroup of the image.
    pub fn preimage(&self, sub: &GroupHandle) -> Result<GroupHandle> {
        let mut gens = self.kernel.generators().to_vec();
        for h in sub.generators() {
            if !self.image.contains(h)? {
                return Err(input("preimage of a non-subgroup of the image"));
            }
            // Image permutation sends coset 0 (the kernel) to the coset of any lift.
            gens.push(self.representatives[h.image(0) as usize].clone());
        }
        Ok(self.source.subgroup_unchecked(gens))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, s: &str) -> Permutation {
        Permutation::parse_cycles(n, s).unwrap()
    }

    fn s4() -> GroupHandle {
        build_group(4, vec![p(4, "(0 1 2 3)"), p(4, "(0 1)")]).unwrap()
    }

    fn a4() -> GroupHandle {
        build_group(4, vec![p(4, "(0 1 2)"), p(4, "(1 2 3)")]).unwrap()
    }

    #[test]
    fn orders_of_small_groups() {
        assert_eq!(s4().order(), 24);
        assert_eq!(a4().order(), 12);
        let g = build_group(5, vec![]).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.elements().unwrap().len(), 1);
    }

    #[test]
    fn mixed_degrees_rejected() {
        let err = build_group(4, vec![p(4, "(0 1)"), p(5, "(0 1)")]).unwrap_err();
        assert!(matches!(err, GroupError::Input(_)));
    }

    #[test]
    fn membership() {
        assert!(s4().contains(&p(4, "(0 1)")).unwrap());
        assert!(!a4().contains(&p(4, "(0 1)")).unwrap());
        assert!(a4().contains(&p(5, "(0 1)")).is_err());
    }

    #[test]
    fn enumeration_cap_is_a_resource_error() {
        let caps = Caps {
            enumeration: 10,
            ..Caps::default()
        };
        let g = s4().with_caps(caps);
        assert!(matches!(
            g.elements(),
            Err(GroupError::Resource { cap: 10, .. })
        ));
    }

    #[test]
    fn conjugacy_classes_of_s4() {
        let cc = s4().conjugacy_classes().unwrap();
        let mut sizes = cc.sizes.clone();
        sizes.sort();
        assert_eq!(sizes, vec![1, 3, 6, 6, 8]);
    }

    #[test]
    fn centres_and_centralizers() {
        assert_eq!(s4().center().unwrap().order(), 1);
        assert_eq!(s4().centralizer(&[]).unwrap().order(), 24);
        assert!(a4().centralizer(&[p(4, "(0 1)")]).is_err());
    }

    #[test]
    fn closures_and_commutators() {
        let g = s4();
        assert_eq!(g.normal_closure(&[p(4, "(0 1)")]).unwrap().order(), 24);
        assert_eq!(g.normal_closure(&[p(4, "(0 1)(2 3)")]).unwrap().order(), 4);
        assert_eq!(g.derived().order(), 12);
        assert_eq!(a4().derived().order(), 4);
        assert_eq!(a4().derived().derived().order(), 1);
    }

    #[test]
    fn intersections_and_joins() {
        let g = s4();
        let a = g.subgroup(vec![p(4, "(0 1)")]).unwrap();
        let b = g.subgroup(vec![p(4, "(2 3)")]).unwrap();
        assert_eq!(a.intersection(&b).unwrap().order(), 1);
        assert_eq!(a.join(&b).unwrap().order(), 4);
        assert!(a.intersection(&a).unwrap().same_group(&a));
        assert!(a.join(&a).unwrap().same_group(&a));
    }

    #[test]
    fn quotient_of_s4_by_v4() {
        let g = s4();
        let v4 = g.normal_closure(&[p(4, "(0 1)(2 3)")]).unwrap();
        let q = g.quotient(&v4).unwrap();
        assert_eq!(q.image().order(), 6);
        assert_eq!(q.image().center().unwrap().order(), 1);
        let whole = g.quotient(&g).unwrap();
        assert_eq!(whole.image().order(), 1);
        let not_normal = g.subgroup(vec![p(4, "(0 1)")]).unwrap();
        assert!(matches!(
            g.quotient(&not_normal),
            Err(GroupError::Precondition(_))
        ));
    }

    #[test]
    fn quotient_map_is_a_homomorphism() {
        let g = s4();
        let v4 = g.normal_closure(&[p(4, "(0 1)(2 3)")]).unwrap();
        let q = g.quotient(&v4).unwrap();
        for x in g.generators() {
            for y in g.generators() {
                let lhs = q.apply(&x.then(y)).unwrap();
                let rhs = q.apply(x).unwrap().then(&q.apply(y).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
        for k in v4.elements().unwrap().iter() {
            assert!(q.apply(k).unwrap().is_identity());
        }
        let whole = q.preimage(q.image()).unwrap();
        assert_eq!(whole.order(), 24);
    }
}
