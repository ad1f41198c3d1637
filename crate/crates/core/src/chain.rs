//! Deterministic Schreier–Sims stabilizer chains.
//!
//! Each level stores a base point, the generators of the corresponding point
//! stabilizer, and a Schreier vector for the orbit of the base point. Points
//! are chosen as the smallest point moved by the element that forces a new
//! level, unless a base prefix was requested.

use crate::error::{GroupError, Result};
use crate::perm::Permutation;

const NONE: u32 = u32::MAX;
const ROOT: u32 = u32::MAX - 1;

#[derive(Debug, Clone)]
struct Level {
    base: u32,
    gens: Vec<Permutation>,
    inv_gens: Vec<Permutation>,
    orbit: Vec<u32>,
    /// Generator index that reached each point, `ROOT` for the base, `NONE` outside the orbit.
    via: Vec<u32>,
    pred: Vec<u32>,
}

impl Level {
    fn new(base: u32, degree: usize) -> Self {
        let mut via = vec![NONE; degree];
        via[base as usize] = ROOT;
        Level {
            base,
            gens: Vec::new(),
            inv_gens: Vec::new(),
            orbit: vec![base],
            via,
            pred: vec![NONE; degree],
        }
    }

    fn in_orbit(&self, point: u32) -> bool {
        self.via[point as usize] != NONE
    }

    /// Element mapping the base point to `point`.
    fn transversal(&self, point: u32, degree: usize) -> Permutation {
        let mut u = Permutation::identity(degree);
        let mut beta = point;
        while self.via[beta as usize] != ROOT {
            let j = self.via[beta as usize] as usize;
            u = self.gens[j].then(&u);
            beta = self.pred[beta as usize];
        }
        u
    }

    /// Multiplies `x` on the right by the inverse transversal of `point`.
    fn strip(&self, mut x: Permutation, point: u32) -> Permutation {
        let mut beta = point;
        while self.via[beta as usize] != ROOT {
            let j = self.via[beta as usize] as usize;
            x = x.then(&self.inv_gens[j]);
            beta = self.pred[beta as usize];
        }
        x
    }
}

#[derive(Debug, Clone)]
pub(crate) struct StabChain {
    degree: usize,
    levels: Vec<Level>,
    base_prefix: Vec<u32>,
}

impl StabChain {
    pub fn new(degree: usize) -> Self {
        StabChain {
            degree,
            levels: Vec::new(),
            base_prefix: Vec::new(),
        }
    }

    pub fn with_base_prefix(degree: usize, prefix: Vec<u32>) -> Self {
        StabChain {
            degree,
            levels: Vec::new(),
            base_prefix: prefix,
        }
    }

    pub fn from_generators(degree: usize, gens: &[Permutation]) -> Self {
        let mut chain = StabChain::new(degree);
        for g in gens {
            chain.extend(g);
        }
        chain
    }

    /// Adds `g` to the group if it is not already a member. Returns whether the group grew.
    pub fn extend(&mut self, g: &Permutation) -> bool {
        if self.contains(g) {
            return false;
        }
        self.add_generator(0, g.clone());
        true
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn order(&self) -> Result<u64> {
        let mut order: u64 = 1;
        for level in &self.levels {
            order = order
                .checked_mul(level.orbit.len() as u64)
                .ok_or_else(|| GroupError::Input("group order exceeds 2^64".to_string()))?;
        }
        Ok(order)
    }

    /// Sifts `g` from level `start`; returns the residue and the level where sifting stopped.
    fn sift_from(&self, start: usize, mut g: Permutation) -> (Permutation, usize) {
        for (i, level) in self.levels.iter().enumerate().skip(start) {
            let beta = g.image(level.base);
            if !level.in_orbit(beta) {
                return (g, i);
            }
            g = level.strip(g, beta);
        }
        (g, self.levels.len())
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (residue, _) = self.sift_from(0, g.clone());
        residue.is_identity()
    }

    fn add_generator(&mut self, index: usize, g: Permutation) {
        if index == self.levels.len() {
            let base = match self.base_prefix.get(index) {
                Some(&b) => b,
                None => g
                    .first_moved_point()
                    .expect("identity never becomes a strong generator"),
            };
            self.levels.push(Level::new(base, self.degree));
        }
        let degree = self.degree;
        let level = &mut self.levels[index];
        level.inv_gens.push(g.inverse());
        level.gens.push(g);
        let new_gen = level.gens.len() - 1;
        let old_len = level.orbit.len();

        // Extend the orbit: old points under the new generator, new points under everything.
        let mut cursor = 0;
        while cursor < level.orbit.len() {
            let alpha = level.orbit[cursor];
            let gen_range = if cursor < old_len {
                new_gen..new_gen + 1
            } else {
                0..level.gens.len()
            };
            for j in gen_range {
                let beta = level.gens[j].image(alpha);
                if level.via[beta as usize] == NONE {
                    level.via[beta as usize] = j as u32;
                    level.pred[beta as usize] = alpha;
                    level.orbit.push(beta);
                }
            }
            cursor += 1;
        }

        let mut pairs: Vec<(u32, usize)> = level.orbit[..old_len]
            .iter()
            .map(|&a| (a, new_gen))
            .collect();
        for &alpha in &level.orbit[old_len..] {
            for j in 0..level.gens.len() {
                pairs.push((alpha, j));
            }
        }

        for (alpha, j) in pairs {
            let schreier = {
                let level = &self.levels[index];
                let u = level.transversal(alpha, degree);
                let moved = u.then(&level.gens[j]);
                let beta = moved.image(level.base);
                level.strip(moved, beta)
            };
            if schreier.is_identity() {
                continue;
            }
            let (residue, _) = self.sift_from(index + 1, schreier);
            if !residue.is_identity() {
                self.add_generator(index + 1, residue);
            }
        }
    }

    /// Calls `f` on every group element exactly once.
    pub fn for_each_element(&self, mut f: impl FnMut(&Permutation)) {
        let transversals: Vec<Vec<Permutation>> = self
            .levels
            .iter()
            .map(|l| {
                l.orbit
                    .iter()
                    .map(|&p| l.transversal(p, self.degree))
                    .collect()
            })
            .collect();
        let id = Permutation::identity(self.degree);
        fn rec(
            transversals: &[Vec<Permutation>],
            depth: usize,
            acc: &Permutation,
            f: &mut dyn FnMut(&Permutation),
        ) {
            // Elements factor as (deeper part) * (transversal at this level).
            if depth == 0 {
                f(acc);
                return;
            }
            for u in &transversals[depth - 1] {
                let next = acc.then(u);
                rec(transversals, depth - 1, &next, f);
            }
        }
        rec(&transversals, transversals.len(), &id, &mut f);
    }

    /// Orbit of the base point at `level` and the transversal element reaching each point.
    pub fn level_transversal(&self, level: usize) -> Vec<(u32, Permutation)> {
        let l = &self.levels[level];
        l.orbit
            .iter()
            .map(|&p| (p, l.transversal(p, self.degree)))
            .collect()
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Whether `point` lies in the base orbit of `level`.
    pub fn level_orbit_contains(&self, level: usize, point: u32) -> bool {
        self.levels[level].in_orbit(point)
    }

    /// Strips `x` by the transversal of `point` at `level` (so the result fixes that base point).
    pub fn level_strip(&self, level: usize, x: Permutation, point: u32) -> Permutation {
        self.levels[level].strip(x, point)
    }
}
