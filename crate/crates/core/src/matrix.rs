//! Matrices over prime fields and their permutation actions.
//!
//! Vectors are rows; a matrix acts by `v ↦ vM`, so the action respects the
//! left-then-right composition convention. A vector `(v₀, …, v_{n-1})` is
//! encoded as the integer `Σ vᵢ pⁱ`; the linear action lives on the nonzero
//! codes shifted down by one (degree `pⁿ − 1`), the affine action on all codes.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::config::Caps;
use crate::error::{input, Result};
use crate::group::GroupHandle;
use crate::perm::Permutation;
use crate::util::is_prime;

/// Largest permitted linear action degree `pⁿ − 1`.
pub const MAX_ACTION_DEGREE: u64 = 342;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MatrixGF {
    p: u32,
    n: usize,
    entries: Vec<u32>,
}

impl MatrixGF {
    pub fn new(p: u32, rows: Vec<Vec<i64>>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(input(format!("field size {p} is not prime")));
        }
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(input("matrix must be square and non-empty"));
        }
        let entries = rows
            .into_iter()
            .flatten()
            .map(|x| x.rem_euclid(p as i64) as u32)
            .collect();
        Ok(MatrixGF { p, n, entries })
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        MatrixGF { p, n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.entries.chunks(self.n).map(|c| c.to_vec()).collect()
    }

    pub fn mul(&self, other: &MatrixGF) -> MatrixGF {
        let n = self.n;
        let p = self.p as u64;
        let mut entries = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                let s: u64 = (0..n)
                    .map(|k| self.get(i, k) as u64 * other.get(k, j) as u64)
                    .sum();
                entries[i * n + j] = (s % p) as u32;
            }
        }
        MatrixGF {
            p: self.p,
            n,
            entries,
        }
    }

    pub fn determinant(&self) -> u32 {
        // Gaussian elimination mod p.
        let n = self.n;
        let p = self.p as i64;
        let mut a: Vec<i64> = self.entries.iter().map(|&x| x as i64).collect();
        let mut det: i64 = 1;
        for c in 0..n {
            let Some(pivot) = (c..n).find(|&r| a[r * n + c] != 0) else {
                return 0;
            };
            if pivot != c {
                for k in 0..n {
                    a.swap(c * n + k, pivot * n + k);
                }
                det = (p - det) % p;
            }
            let pv = a[c * n + c];
            det = det * pv % p;
            let inv = mod_inverse(pv, p);
            for r in c + 1..n {
                let factor = a[r * n + c] * inv % p;
                for k in c..n {
                    a[r * n + k] = (a[r * n + k] - factor * a[c * n + k]).rem_euclid(p);
                }
            }
        }
        det as u32
    }

    /// Image of the vector with the given code.
    pub fn apply(&self, code: u32) -> u32 {
        let v = decode(code, self.p, self.n);
        let mut out = 0u32;
        let mut scale = 1u32;
        for j in 0..self.n {
            let s: u64 = (0..self.n)
                .map(|i| v[i] as u64 * self.get(i, j) as u64)
                .sum();
            out += (s % self.p as u64) as u32 * scale;
            scale *= self.p;
        }
        out
    }

    /// Permutation of the nonzero vectors (degree `pⁿ − 1`).
    pub fn to_linear_permutation(&self) -> Permutation {
        let size = self.p.pow(self.n as u32);
        Permutation::from_images_unchecked((1..size).map(|c| self.apply(c) - 1).collect())
    }

    /// Recovers the matrix from a linear permutation: row `i` is the image of `eᵢ`.
    pub fn from_linear_permutation(p: u32, n: usize, perm: &Permutation) -> Result<Self> {
        let size = p.pow(n as u32);
        if perm.degree() as u32 != size - 1 {
            return Err(input(format!(
                "permutation of degree {} is not an action on GF({p})^{n}",
                perm.degree()
            )));
        }
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let image = perm.image(p.pow(i as u32) - 1) + 1;
            rows.push(decode(image, p, n).into_iter().map(|x| x as i64).collect());
        }
        let m = MatrixGF::new(p, rows)?;
        if m.to_linear_permutation() != *perm {
            return Err(input("permutation is not induced by a linear map"));
        }
        Ok(m)
    }
}

impl fmt::Debug for MatrixGF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MatrixGF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.rows().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

fn decode(mut code: u32, p: u32, n: usize) -> Vec<u32> {
    let mut v = vec![0; n];
    for x in v.iter_mut() {
        *x = code % p;
        code /= p;
    }
    v
}

fn mod_inverse(a: i64, p: i64) -> i64 {
    let mut result = 1;
    let mut base = a.rem_euclid(p);
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

/// Smallest generator of the multiplicative group of GF(p).
pub fn primitive_root(p: u32) -> u32 {
    if p == 2 {
        return 1;
    }
    let phi = p as u64 - 1;
    let factors = crate::util::prime_divisors(phi);
    (2..p)
        .find(|&g| {
            factors.iter().all(|&q| {
                let mut r = 1u64;
                for _ in 0..phi / q {
                    r = r * g as u64 % p as u64;
                }
                r != 1
            })
        })
        .expect("prime fields have primitive roots")
}

/// Which standard linear group to generate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LinearFamily {
    GL,
    SL,
}

/// Elementary transvections `I + E_ij`, plus `diag(ω, 1, …)` for GL with ω primitive.
pub fn standard_generators(family: LinearFamily, n: usize, p: u32) -> Vec<MatrixGF> {
    let mut gens = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut m = MatrixGF::identity(p, n);
                m.entries[i * n + j] = 1;
                gens.push(m);
            }
        }
    }
    if family == LinearFamily::GL && p > 2 {
        let mut d = MatrixGF::identity(p, n);
        d.entries[0] = primitive_root(p);
        gens.push(d);
    }
    gens
}

/// A linear group over GF(p): its matrix generators and their permutation image.
#[derive(Debug, Clone)]
pub struct MatrixGroup {
    pub p: u32,
    pub n: usize,
    pub generators: Vec<MatrixGF>,
    pub group: GroupHandle,
}

fn check_field(n: usize, p: u32) -> Result<()> {
    if !is_prime(p as u64) {
        return Err(input(format!("p = {p} is not prime")));
    }
    if !(1..=4).contains(&n) {
        return Err(input(format!("dimension n = {n} outside 1..=4")));
    }
    let degree = (p as u64).pow(n as u32) - 1;
    if degree > MAX_ACTION_DEGREE {
        return Err(input(format!(
            "action degree {degree} = {p}^{n} - 1 exceeds {MAX_ACTION_DEGREE}"
        )));
    }
    Ok(())
}

impl MatrixGroup {
    pub fn standard(family: LinearFamily, n: usize, p: u32, caps: Caps) -> Result<Self> {
        check_field(n, p)?;
        Self::from_matrices(n, p, standard_generators(family, n, p), caps)
    }

    pub fn from_matrices(n: usize, p: u32, generators: Vec<MatrixGF>, caps: Caps) -> Result<Self> {
        check_field(n, p)?;
        for m in &generators {
            if m.dim() != n || m.modulus() != p {
                return Err(input(format!("matrix {m} is not {n}x{n} over GF({p})")));
            }
            if m.determinant() == 0 {
                return Err(input(format!("singular generator {m}")));
            }
        }
        let degree = p.pow(n as u32) as usize - 1;
        let perms = generators
            .iter()
            .map(|m| m.to_linear_permutation())
            .collect();
        let group = GroupHandle::new(degree, perms, caps)?;
        Ok(MatrixGroup {
            p,
            n,
            generators,
            group,
        })
    }

    /// Wraps a permutation group that acts linearly on the nonzero vectors of GF(p)ⁿ.
    pub fn from_linear_action(n: usize, p: u32, group: GroupHandle) -> Result<Self> {
        check_field(n, p)?;
        let generators = group
            .generators()
            .iter()
            .map(|g| MatrixGF::from_linear_permutation(p, n, g))
            .collect::<Result<Vec<_>>>()?;
        Ok(MatrixGroup {
            p,
            n,
            generators,
            group,
        })
    }

    /// Scalar matrices in the group, as a subgroup.
    pub fn scalars(&self) -> Result<GroupHandle> {
        let mut gens = Vec::new();
        for a in 1..self.p {
            let mut m = MatrixGF::identity(self.p, self.n);
            for i in 0..self.n {
                m.entries[i * self.n + i] = a;
            }
            let perm = m.to_linear_permutation();
            if self.group.contains(&perm)? {
                gens.push(perm);
            }
        }
        self.group.subgroup(gens)
    }
}

/// `[E_{pⁿ}]M` as the affine group `v ↦ vA + u` on all `pⁿ` vectors.
pub fn vector_semidirect(p: u32, n: usize, m: &MatrixGroup) -> Result<GroupHandle> {
    if m.p != p || m.n != n {
        return Err(input(format!(
            "matrix group over GF({})^{} used for a semidirect product with GF({p})^{n}",
            m.p, m.n
        )));
    }
    let size = p.pow(n as u32);
    let mut gens = Vec::new();
    for i in 0..n {
        let shift = p.pow(i as u32);
        let images = (0..size)
            .map(|c| {
                let digit = (c / shift) % p;
                if digit + 1 == p {
                    c + shift - p * shift
                } else {
                    c + shift
                }
            })
            .collect();
        gens.push(Permutation::from_images_unchecked(images));
    }
    for a in &m.generators {
        gens.push(Permutation::from_images_unchecked(
            (0..size).map(|c| a.apply(c)).collect(),
        ));
    }
    GroupHandle::new(size as usize, gens, m.group.caps())
}

/// Translation subgroup of an affine group built by [`vector_semidirect`].
pub fn translation_subgroup(g: &GroupHandle, n: usize) -> Result<GroupHandle> {
    g.subgroup(g.generators().iter().take(n).cloned().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_group_orders() {
        let caps = Caps::default();
        assert_eq!(
            MatrixGroup::standard(LinearFamily::GL, 2, 7, caps)
                .unwrap()
                .group
                .order(),
            2016
        );
        assert_eq!(
            MatrixGroup::standard(LinearFamily::GL, 3, 2, caps)
                .unwrap()
                .group
                .order(),
            168
        );
        assert_eq!(
            MatrixGroup::standard(LinearFamily::SL, 2, 3, caps)
                .unwrap()
                .group
                .order(),
            24
        );
        assert_eq!(
            MatrixGroup::standard(LinearFamily::GL, 2, 5, caps)
                .unwrap()
                .group
                .order(),
            480
        );
        assert_eq!(
            MatrixGroup::standard(LinearFamily::GL, 2, 3, caps)
                .unwrap()
                .group
                .order(),
            48
        );
    }

    #[test]
    fn permutation_round_trip_and_homomorphism() {
        let a = MatrixGF::new(7, vec![vec![1, 2], vec![3, 5]]).unwrap();
        let b = MatrixGF::new(7, vec![vec![0, 1], vec![6, 3]]).unwrap();
        let pa = a.to_linear_permutation();
        assert_eq!(MatrixGF::from_linear_permutation(7, 2, &pa).unwrap(), a);
        assert_eq!(
            a.mul(&b).to_linear_permutation(),
            pa.then(&b.to_linear_permutation())
        );
    }

    #[test]
    fn singular_generators_rejected() {
        let m = MatrixGF::new(5, vec![vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(m.determinant(), 0);
        assert!(MatrixGroup::from_matrices(2, 5, vec![m], Caps::default()).is_err());
    }

    #[test]
    fn affine_groups() {
        let caps = Caps::default();
        let sl23 = MatrixGroup::standard(LinearFamily::SL, 2, 3, caps).unwrap();
        let g = vector_semidirect(3, 2, &sl23).unwrap();
        assert_eq!(g.order(), 216);
        let t = translation_subgroup(&g, 2).unwrap();
        assert_eq!(t.order(), 9);
        assert!(t.is_normal_in(&g));
        assert!(t.is_abelian());
        assert!(vector_semidirect(5, 2, &sl23).is_err());
    }

    #[test]
    fn scalars_of_gl27() {
        let gl = MatrixGroup::standard(LinearFamily::GL, 2, 7, Caps::default()).unwrap();
        assert_eq!(gl.scalars().unwrap().order(), 6);
    }
}
