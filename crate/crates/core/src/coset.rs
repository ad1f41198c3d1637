//! Todd–Coxeter coset enumeration (HLT relator scanning, union-find coincidences).

use crate::config::Caps;
use crate::error::{GroupError, Result};
use crate::group::GroupHandle;
use crate::perm::Permutation;
use crate::presentation::{Letter, Presentation, Word};

const UNDEF: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableStatus {
    Incomplete,
    Closed,
}

/// Coset table: one row per coset, columns `2i` / `2i+1` for generator `i` and its inverse.
///
/// Row 0 is the coset of the subgroup. Entries are right actions: `entry(c, x)` is `c·x`.
#[derive(Debug, Clone)]
pub struct CosetTable {
    columns: usize,
    table: Vec<u32>,
    status: TableStatus,
}

impl CosetTable {
    pub fn num_cosets(&self) -> usize {
        self.table.len() / self.columns
    }

    pub fn status(&self) -> TableStatus {
        self.status
    }

    pub fn entry(&self, coset: usize, column: usize) -> Option<u32> {
        match self.table[coset * self.columns + column] {
            UNDEF => None,
            v => Some(v),
        }
    }

    /// Action of each generator on the cosets.
    pub fn generator_permutations(&self) -> Vec<Permutation> {
        (0..self.columns / 2)
            .map(|g| {
                Permutation::from_images_unchecked(
                    (0..self.num_cosets())
                        .map(|c| self.table[c * self.columns + 2 * g])
                        .collect(),
                )
            })
            .collect()
    }
}

struct Enumerator {
    columns: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    cap: u64,
    queue: Vec<u32>,
}

fn col(l: Letter) -> usize {
    2 * l.0 + l.1 as usize
}

impl Enumerator {
    fn get(&self, c: u32, x: usize) -> u32 {
        self.table[c as usize * self.columns + x]
    }

    fn set(&mut self, c: u32, x: usize, v: u32) {
        self.table[c as usize * self.columns + x] = v;
    }

    fn rows(&self) -> usize {
        self.parent.len()
    }

    fn alive(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn define(&mut self, c: u32, x: usize) -> Result<()> {
        let n = self.rows() as u32;
        if n as u64 >= self.cap {
            return Err(GroupError::Resource {
                what: "coset table rows",
                cap: self.cap,
                needed: n as u64 + 1,
            });
        }
        self.parent.push(n);
        self.table.extend(std::iter::repeat_n(UNDEF, self.columns));
        self.set(c, x, n);
        self.set(n, x ^ 1, c);
        Ok(())
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut root = c;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut x = c;
        while self.parent[x as usize] != root {
            let next = self.parent[x as usize];
            self.parent[x as usize] = root;
            x = next;
        }
        root
    }

    fn merge(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.rep(a), self.rep(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi as usize] = lo;
            self.queue.push(hi);
        }
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let gamma = self.queue[i];
            i += 1;
            for x in 0..self.columns {
                let delta = self.get(gamma, x);
                if delta == UNDEF {
                    continue;
                }
                self.set(delta, x ^ 1, UNDEF);
                let mu = self.rep(gamma);
                let nu = self.rep(delta);
                let mu_x = self.get(mu, x);
                if mu_x != UNDEF {
                    self.merge(nu, mu_x);
                } else {
                    let nu_inv = self.get(nu, x ^ 1);
                    if nu_inv != UNDEF {
                        self.merge(mu, nu_inv);
                    } else {
                        self.set(mu, x, nu);
                        self.set(nu, x ^ 1, mu);
                    }
                }
            }
        }
    }

    fn scan_and_fill(&mut self, alpha: u32, word: &[usize]) -> Result<()> {
        if word.is_empty() {
            return Ok(());
        }
        let mut f = alpha;
        let mut b = alpha;
        let mut i = 0usize;
        let mut j = word.len() as isize - 1;
        loop {
            while (i as isize) <= j && self.get(f, word[i]) != UNDEF {
                f = self.get(f, word[i]);
                i += 1;
            }
            if (i as isize) > j {
                if f != alpha {
                    self.coincidence(f, alpha);
                }
                return Ok(());
            }
            while j >= i as isize && self.get(b, word[j as usize] ^ 1) != UNDEF {
                b = self.get(b, word[j as usize] ^ 1);
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            } else if j == i as isize {
                self.set(f, word[i], b);
                self.set(b, word[i] ^ 1, f);
                return Ok(());
            } else {
                self.define(f, word[i])?;
            }
        }
    }
}

/// Enumerates the cosets of the subgroup generated by `subgroup_words`.
pub fn coset_enumerate(
    p: &Presentation,
    subgroup_words: &[Word],
    caps: &Caps,
) -> Result<CosetTable> {
    let columns = 2 * p.generators.len();
    if columns == 0 {
        return Err(GroupError::Input(
            "presentation without generators".to_string(),
        ));
    }
    let relators: Vec<Vec<usize>> = p
        .relators()?
        .into_iter()
        .map(|r| r.into_iter().map(col).collect())
        .collect();
    let subgroup: Vec<Vec<usize>> = subgroup_words
        .iter()
        .map(|w| Ok(w.letters(&p.generators)?.into_iter().map(col).collect()))
        .collect::<Result<_>>()?;

    let mut e = Enumerator {
        columns,
        table: vec![UNDEF; columns],
        parent: vec![0],
        cap: caps.coset_rows,
        queue: Vec::new(),
    };
    for w in &subgroup {
        e.scan_and_fill(0, w)?;
    }
    let mut alpha = 0u32;
    while (alpha as usize) < e.rows() {
        for r in &relators {
            if !e.alive(alpha) {
                break;
            }
            e.scan_and_fill(alpha, r)?;
        }
        if e.alive(alpha) {
            for x in 0..columns {
                if e.get(alpha, x) == UNDEF {
                    e.define(alpha, x)?;
                }
            }
        }
        alpha += 1;
    }

    // Compact the live rows.
    let live: Vec<u32> = (0..e.rows() as u32).filter(|&c| e.alive(c)).collect();
    let mut renumber = vec![UNDEF; e.rows()];
    for (i, &c) in live.iter().enumerate() {
        renumber[c as usize] = i as u32;
    }
    let mut table = Vec::with_capacity(live.len() * columns);
    for &c in &live {
        for x in 0..columns {
            let v = e.get(c, x);
            table.push(if v == UNDEF {
                UNDEF
            } else {
                renumber[e.rep(v) as usize]
            });
        }
    }
    let status = if table.iter().all(|&v| v != UNDEF) {
        TableStatus::Closed
    } else {
        TableStatus::Incomplete
    };
    Ok(CosetTable {
        columns,
        table,
        status,
    })
}

/// The permutation group induced on the cosets of the trivial subgroup.
pub fn regular_representation(p: &Presentation, caps: &Caps) -> Result<GroupHandle> {
    let table = coset_enumerate(p, &[], caps)?;
    if table.status() != TableStatus::Closed {
        return Err(GroupError::Input(
            "coset enumeration did not close".to_string(),
        ));
    }
    let gens = table.generator_permutations();
    GroupHandle::new(table.num_cosets(), gens, *caps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn enumerate(text: &str) -> CosetTable {
        coset_enumerate(&Presentation::parse(text).unwrap(), &[], &Caps::default()).unwrap()
    }

    #[test]
    fn cyclic_five() {
        let t = enumerate("<a | a^5>");
        assert_eq!(t.num_cosets(), 5);
        assert_eq!(t.status(), TableStatus::Closed);
    }

    #[test]
    fn dihedral_and_quaternion() {
        assert_eq!(enumerate("<r, s | r^6, s^2, (rs)^2>").num_cosets(), 12);
        assert_eq!(
            enumerate("<i, j | i^4, i^2 = j^2, j^-1 i j = i^-1>").num_cosets(),
            8
        );
    }

    #[test]
    fn nontrivial_subgroup_index() {
        let p = Presentation::parse("<a, b | a^3, b^2, (ab)^2>").unwrap();
        let w = p.parse_word("b").unwrap();
        let t = coset_enumerate(&p, &[w], &Caps::default()).unwrap();
        assert_eq!(t.num_cosets(), 3);
    }

    #[test]
    fn row_cap_is_reported() {
        let p = Presentation::parse("<a, b | a^2, b^3, (ab)^5>").unwrap();
        let caps = Caps {
            coset_rows: 20,
            ..Caps::default()
        };
        assert!(matches!(
            coset_enumerate(&p, &[], &caps),
            Err(GroupError::Resource { .. })
        ));
    }

    #[test]
    fn regular_rep_orders() {
        let caps = Caps::default();
        let a5 = regular_representation(
            &Presentation::parse("<a, b | a^2, b^3, (ab)^5>").unwrap(),
            &caps,
        )
        .unwrap();
        assert_eq!(a5.order(), 60);
    }
}
