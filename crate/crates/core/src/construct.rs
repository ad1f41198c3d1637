//! Declarative group recipes and their text syntax.
//!
//! ```text
//! spec := cyclic(n) | elementary_abelian(p, k) | symmetric(n) | alternating(n)
//!       | dihedral(order) | quaternion8
//!       | permutations(degree, "cycles", ...)
//!       | presentation("<gens | relations>")
//!       | matrix_group(n, p, source)
//!       | vector_semidirect(p, n, matrix_group(...))
//!       | direct_product(spec, spec, ...)
//! source := GL | SL | [[row],[row],...] (one or more matrices)
//!         | search(source, order=k, center=c, quotient=NAME)
//! ```

use std::fmt;

use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::config::Caps;
use crate::coset::regular_representation;
use crate::error::{input, GroupError, Result};
use crate::group::GroupHandle;
use crate::matrix::{vector_semidirect, LinearFamily, MatrixGF, MatrixGroup};
use crate::perm::Permutation;
use crate::presentation::Presentation;
use crate::recognize::recognize_small;
use crate::util::is_prime;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatrixSource {
    Standard(LinearFamily),
    Matrices(Vec<Vec<Vec<i64>>>),
    Search {
        within: Box<MatrixSource>,
        order: u64,
        center: u64,
        quotient: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupSpec {
    Cyclic(u64),
    ElementaryAbelian {
        p: u64,
        k: u32,
    },
    Symmetric(usize),
    Alternating(usize),
    /// Dihedral group of the given order.
    Dihedral(u64),
    Quaternion8,
    Permutations {
        degree: usize,
        cycles: Vec<String>,
    },
    Presentation(Presentation),
    MatrixGroup {
        n: usize,
        p: u32,
        source: MatrixSource,
    },
    VectorSemidirect {
        p: u32,
        n: usize,
        matrices: Box<GroupSpec>,
    },
    DirectProduct(Vec<GroupSpec>),
}

const MAX_SMALL_DEGREE: usize = 20;

impl GroupSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            GroupSpec::Cyclic(_) => "cyclic",
            GroupSpec::ElementaryAbelian { .. } => "elementary_abelian",
            GroupSpec::Symmetric(_) => "symmetric",
            GroupSpec::Alternating(_) => "alternating",
            GroupSpec::Dihedral(_) => "dihedral",
            GroupSpec::Quaternion8 => "quaternion8",
            GroupSpec::Permutations { .. } => "permutations",
            GroupSpec::Presentation(_) => "presentation",
            GroupSpec::MatrixGroup { .. } => "matrix_group",
            GroupSpec::VectorSemidirect { .. } => "vector_semidirect",
            GroupSpec::DirectProduct(_) => "direct_product",
        }
    }

    pub fn parse(text: &str) -> Result<GroupSpec> {
        let mut p = TermParser::new(text);
        let term = p.term()?;
        p.skip_ws();
        if p.pos < p.chars.len() {
            return Err(p.error("trailing input after group spec"));
        }
        GroupSpec::from_term(&term)
    }
}

/// Builds the group described by `spec`, recording the canonical spec text as provenance.
pub fn construct(spec: &GroupSpec) -> Result<GroupHandle> {
    construct_with(spec, Caps::default())
}

pub fn construct_with(spec: &GroupSpec, caps: Caps) -> Result<GroupHandle> {
    Ok(build(spec, caps)?.with_provenance(spec.to_string()))
}

fn build(spec: &GroupSpec, caps: Caps) -> Result<GroupHandle> {
    match spec {
        GroupSpec::Cyclic(n) => {
            if *n == 0 || *n > MAX_ACTION as u64 {
                return Err(input(format!(
                    "cyclic: field n = {n} outside 1..={MAX_ACTION}"
                )));
            }
            let n = *n as usize;
            let cycle: Vec<u32> = (0..n as u32).collect();
            let g = Permutation::from_cycles(n, &[&cycle])?;
            GroupHandle::new(n, vec![g], caps)
        }
        GroupSpec::ElementaryAbelian { p, k } => {
            if !is_prime(*p) {
                return Err(input(format!(
                    "elementary_abelian: field p = {p} is not prime"
                )));
            }
            if *k == 0 || (*p as usize) * (*k as usize) > MAX_ACTION {
                return Err(input(format!(
                    "elementary_abelian: field k = {k} out of range"
                )));
            }
            let (p, k) = (*p as usize, *k as usize);
            let degree = p * k;
            let gens = (0..k)
                .map(|i| {
                    let cycle: Vec<u32> = (0..p as u32).map(|x| (i * p) as u32 + x).collect();
                    Permutation::from_cycles(degree, &[&cycle])
                })
                .collect::<Result<Vec<_>>>()?;
            GroupHandle::new(degree, gens, caps)
        }
        GroupSpec::Symmetric(n) | GroupSpec::Alternating(n) => {
            let alt = matches!(spec, GroupSpec::Alternating(_));
            if *n == 0 || *n > MAX_SMALL_DEGREE {
                return Err(input(format!(
                    "{}: field n = {n} outside 1..={MAX_SMALL_DEGREE}",
                    spec.kind()
                )));
            }
            let n = *n;
            let mut gens = Vec::new();
            if alt {
                for i in 0..n.saturating_sub(2) {
                    gens.push(Permutation::from_cycles(
                        n,
                        &[&[i as u32, i as u32 + 1, i as u32 + 2]],
                    )?);
                }
            } else if n >= 2 {
                let cycle: Vec<u32> = (0..n as u32).collect();
                gens.push(Permutation::from_cycles(n, &[&cycle])?);
                gens.push(Permutation::from_cycles(n, &[&[0, 1]])?);
            }
            GroupHandle::new(n, gens, caps)
        }
        GroupSpec::Dihedral(order) => {
            if *order < 4 || order % 2 == 1 || *order > 2 * MAX_ACTION as u64 {
                return Err(input(format!(
                    "dihedral: field order = {order} must be even and ≥ 4"
                )));
            }
            if *order == 4 {
                let a = Permutation::parse_cycles(4, "(0 1)(2 3)")?;
                let b = Permutation::parse_cycles(4, "(0 2)(1 3)")?;
                return GroupHandle::new(4, vec![a, b], caps);
            }
            let n = (*order / 2) as usize;
            let rot: Vec<u32> = (0..n as u32).collect();
            let r = Permutation::from_cycles(n, &[&rot])?;
            let s = Permutation::from_images(
                (0..n as u32).map(|i| (n as u32 - i) % n as u32).collect(),
            )?;
            GroupHandle::new(n, vec![r, s], caps)
        }
        GroupSpec::Quaternion8 => {
            let p = Presentation::parse("<i, j | i^4, i^2 = j^2, j^-1 i j = i^-1>")?;
            regular_representation(&p, &caps)
        }
        GroupSpec::Permutations { degree, cycles } => {
            if *degree == 0 {
                return Err(input("permutations: field degree must be positive"));
            }
            let gens = cycles
                .iter()
                .map(|c| Permutation::parse_cycles(*degree, c))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| input(format!("permutations: {e}")))?;
            GroupHandle::new(*degree, gens, caps)
        }
        GroupSpec::Presentation(p) => regular_representation(p, &caps),
        GroupSpec::MatrixGroup { .. } => Ok(build_matrix(spec, caps)?.group),
        GroupSpec::VectorSemidirect { p, n, matrices } => {
            let m = build_matrix(matrices, caps)?;
            vector_semidirect(*p, *n, &m)
        }
        GroupSpec::DirectProduct(factors) => {
            if factors.is_empty() {
                return Err(input("direct_product: needs at least one factor"));
            }
            let groups = factors
                .iter()
                .map(|f| build(f, caps))
                .collect::<Result<Vec<_>>>()?;
            direct_product(&groups, caps)
        }
    }
}

const MAX_ACTION: usize = 10_000;

/// Direct product acting on the disjoint union of the factors' points.
pub fn direct_product(groups: &[GroupHandle], caps: Caps) -> Result<GroupHandle> {
    let degree: usize = groups.iter().map(|g| g.degree()).sum();
    let mut gens = Vec::new();
    let mut offset = 0;
    for g in groups {
        for x in g.generators() {
            gens.push(x.shifted(offset, degree));
        }
        offset += g.degree();
    }
    GroupHandle::new(degree, gens, caps)
}

/// Builds a `matrix_group` spec, keeping the matrices.
pub fn build_matrix(spec: &GroupSpec, caps: Caps) -> Result<MatrixGroup> {
    let GroupSpec::MatrixGroup { n, p, source } = spec else {
        return Err(input(format!(
            "vector_semidirect: field matrices must be a matrix_group, got {}",
            spec.kind()
        )));
    };
    build_source(*n, *p, source, caps)
}

fn build_source(n: usize, p: u32, source: &MatrixSource, caps: Caps) -> Result<MatrixGroup> {
    match source {
        MatrixSource::Standard(family) => MatrixGroup::standard(*family, n, p, caps),
        MatrixSource::Matrices(ms) => {
            let mats = ms
                .iter()
                .map(|rows| MatrixGF::new(p, rows.clone()))
                .collect::<Result<Vec<_>>>()?;
            if mats.iter().any(|m| m.dim() != n) {
                return Err(input(format!(
                    "matrix_group: field generators must be {n}x{n}"
                )));
            }
            MatrixGroup::from_matrices(n, p, mats, caps)
        }
        MatrixSource::Search {
            within,
            order,
            center,
            quotient,
        } => {
            let ambient = build_source(n, p, within, caps)?;
            let found =
                find_subgroup_by_order_and_quotient(&ambient.group, *order, *center, quotient)?;
            MatrixGroup::from_linear_action(n, p, found)
        }
    }
}

/// Subgroup `S ≤ A` of the given order that contains the central subgroup `C`
/// generated by the first central element of order `center_sub_order`, with
/// `S/C` recognised as `quotient_name`.
///
/// Candidates `⟨C, x, y⟩` are tried with `x` over conjugacy-class
/// representatives and `y` over all elements, both in ascending order; if no
/// two-generated candidate qualifies and `A` is within the lattice cap, the
/// subgroup lattice is scanned as well.
pub fn find_subgroup_by_order_and_quotient(
    a: &GroupHandle,
    target_order: u64,
    center_sub_order: u64,
    quotient_name: &str,
) -> Result<GroupHandle> {
    if target_order == 0 || !a.order().is_multiple_of(target_order) {
        return Err(GroupError::NotFound(format!(
            "no subgroup of order {target_order} in a group of order {}",
            a.order()
        )));
    }
    if !target_order.is_multiple_of(center_sub_order.max(1)) {
        return Err(GroupError::NotFound(format!(
            "central subgroup order {center_sub_order} does not divide {target_order}"
        )));
    }
    let centre = a.center()?;
    let c_gen = if center_sub_order <= 1 {
        None
    } else {
        let z = centre
            .sorted_elements()?
            .into_iter()
            .find(|z| z.order() == center_sub_order)
            .ok_or_else(|| {
                GroupError::NotFound(format!("no central element of order {center_sub_order}"))
            })?;
        Some(z)
    };
    let c = a.subgroup(c_gen.iter().cloned().collect())?;
    let accept = |s: &GroupHandle| -> Result<bool> {
        let q = s.quotient(&c.clone().with_caps(s.caps()))?;
        Ok(recognize_small(q.image())?.name() == quotient_name)
    };

    let elems = a.sorted_elements()?;
    let reps = a.conjugacy_classes()?.representatives;
    let divides = |g: &Permutation| target_order.is_multiple_of(g.order());
    let mut tried: FxHashSet<Vec<Permutation>> = FxHashSet::default();
    for x in reps.iter().filter(|x| divides(x)) {
        for y in elems.iter().filter(|y| divides(y)) {
            let mut gens: Vec<Permutation> = c_gen.iter().cloned().collect();
            gens.push(x.clone());
            gens.push(y.clone());
            let Some(mut members) = bounded_closure(&gens, target_order as usize) else {
                continue;
            };
            if members.len() as u64 != target_order {
                continue;
            }
            members.sort();
            if !tried.insert(members) {
                continue;
            }
            let s = a.subgroup(gens)?;
            if s.is_subgroup_of(a) && accept(&s)? {
                return Ok(s);
            }
        }
    }
    if a.order() <= a.caps().lattice {
        let lattice = crate::lattice::subgroup_lattice(a)?;
        for class in lattice.classes() {
            if class.order == target_order
                && c.is_subgroup_of(&class.representative)
                && accept(&class.representative)?
            {
                return Ok(class.representative.clone());
            }
        }
    }
    Err(GroupError::NotFound(format!(
        "no subgroup of order {target_order} with quotient {quotient_name} by a central subgroup of order {center_sub_order}"
    )))
}

/// Closure of `gens` by right multiplication, abandoned once it exceeds `limit`.
fn bounded_closure(gens: &[Permutation], limit: usize) -> Option<Vec<Permutation>> {
    let degree = gens.first()?.degree();
    let id = Permutation::identity(degree);
    let mut seen: FxHashSet<Permutation> = FxHashSet::default();
    seen.insert(id.clone());
    let mut list = vec![id];
    let mut i = 0;
    while i < list.len() {
        for g in gens {
            let y = list[i].then(g);
            if seen.insert(y.clone()) {
                if seen.len() > limit {
                    return None;
                }
                list.push(y);
            }
        }
        i += 1;
    }
    Some(list)
}

// ---------------------------------------------------------------------------
// Text syntax

#[derive(Debug, Clone, PartialEq)]
enum Term {
    Int(i64),
    Str(String),
    Ident(String),
    List(Vec<Term>),
    Call(String, Vec<(Option<String>, Term)>),
}

impl Term {
    fn describe(&self) -> &'static str {
        match self {
            Term::Int(_) => "integer",
            Term::Str(_) => "string",
            Term::Ident(_) => "name",
            Term::List(_) => "list",
            Term::Call(..) => "call",
        }
    }
}

struct TermParser {
    chars: Vec<char>,
    pos: usize,
}

impl TermParser {
    fn new(text: &str) -> Self {
        TermParser {
            chars: text.chars().collect(),
            pos: 0,
        }
    }

    fn error(&self, msg: &str) -> GroupError {
        GroupError::Parse {
            line: 1,
            col: self.pos + 1,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self
            .chars
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_')
        {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn term(&mut self) -> Result<Term> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some('"') => {
                self.pos += 1;
                let start = self.pos;
                while self.chars.get(self.pos).is_some_and(|&c| c != '"') {
                    self.pos += 1;
                }
                if self.pos >= self.chars.len() {
                    return Err(self.error("unterminated string"));
                }
                let s: String = self.chars[start..self.pos].iter().collect();
                self.pos += 1;
                Ok(Term::Str(s))
            }
            Some('[') => {
                self.pos += 1;
                let mut items = Vec::new();
                if self.peek() == Some(']') {
                    self.pos += 1;
                    return Ok(Term::List(items));
                }
                loop {
                    items.push(self.term()?);
                    match self.peek() {
                        Some(',') => self.pos += 1,
                        Some(']') => {
                            self.pos += 1;
                            return Ok(Term::List(items));
                        }
                        _ => return Err(self.error("expected ',' or ']'")),
                    }
                }
            }
            Some(c) if c == '-' || c.is_ascii_digit() => {
                let start = self.pos;
                self.pos += 1;
                while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let s: String = self.chars[start..self.pos].iter().collect();
                s.parse()
                    .map(Term::Int)
                    .map_err(|_| self.error("bad integer"))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let name = self.ident();
                if self.chars.get(self.pos) != Some(&'(') {
                    return Ok(Term::Ident(name));
                }
                self.pos += 1;
                let mut args = Vec::new();
                if self.peek() == Some(')') {
                    self.pos += 1;
                    return Ok(Term::Call(name, args));
                }
                loop {
                    let save = self.pos;
                    let mut key = None;
                    if self.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
                        let k = self.ident();
                        if self.peek() == Some('=') {
                            self.pos += 1;
                            key = Some(k);
                        } else {
                            self.pos = save;
                        }
                    }
                    let value = self.term()?;
                    args.push((key, value));
                    match self.peek() {
                        Some(',') => self.pos += 1,
                        Some(')') => {
                            self.pos += 1;
                            return Ok(Term::Call(name, args));
                        }
                        _ => return Err(self.error("expected ',' or ')'")),
                    }
                }
            }
            Some(c) => Err(self.error(&format!("unexpected character {c:?}"))),
        }
    }
}

fn field_err(kind: &str, field: &str, msg: impl fmt::Display) -> GroupError {
    input(format!("{kind}: field {field}: {msg}"))
}

fn int_arg(kind: &str, field: &str, t: Option<&Term>) -> Result<i64> {
    match t {
        Some(Term::Int(v)) => Ok(*v),
        Some(other) => Err(field_err(
            kind,
            field,
            format!("expected integer, found {}", other.describe()),
        )),
        None => Err(field_err(kind, field, "missing")),
    }
}

fn uint_arg(kind: &str, field: &str, t: Option<&Term>) -> Result<u64> {
    let v = int_arg(kind, field, t)?;
    u64::try_from(v).map_err(|_| field_err(kind, field, "must be non-negative"))
}

fn matrix_term(kind: &str, t: &Term) -> Result<Vec<Vec<i64>>> {
    let Term::List(rows) = t else {
        return Err(field_err(kind, "generators", "expected a matrix [[..],..]"));
    };
    rows.iter()
        .map(|r| match r {
            Term::List(xs) => xs
                .iter()
                .map(|x| match x {
                    Term::Int(v) => Ok(*v),
                    _ => Err(field_err(
                        kind,
                        "generators",
                        "matrix entries must be integers",
                    )),
                })
                .collect(),
            _ => Err(field_err(kind, "generators", "matrix rows must be lists")),
        })
        .collect()
}

impl MatrixSource {
    fn from_terms(terms: &[&Term]) -> Result<MatrixSource> {
        match terms {
            [Term::Ident(name)] => match name.as_str() {
                "GL" => Ok(MatrixSource::Standard(LinearFamily::GL)),
                "SL" => Ok(MatrixSource::Standard(LinearFamily::SL)),
                other => Err(field_err(
                    "matrix_group",
                    "source",
                    format!("unknown family {other:?}"),
                )),
            },
            [Term::Call(name, args)] if name == "search" => {
                let positional: Vec<&Term> = args
                    .iter()
                    .filter(|(k, _)| k.is_none())
                    .map(|(_, t)| t)
                    .collect();
                let keyed = |key: &str| {
                    args.iter()
                        .find(|(k, _)| k.as_deref() == Some(key))
                        .map(|(_, t)| t)
                };
                let within = MatrixSource::from_terms(&positional)?;
                let order = uint_arg("search", "order", keyed("order"))?;
                let center = uint_arg("search", "center", keyed("center"))?;
                let quotient = match keyed("quotient") {
                    Some(Term::Ident(s)) | Some(Term::Str(s)) => s.clone(),
                    _ => {
                        return Err(field_err(
                            "search",
                            "quotient",
                            "expected a recognizer name",
                        ))
                    }
                };
                Ok(MatrixSource::Search {
                    within: Box::new(within),
                    order,
                    center,
                    quotient,
                })
            }
            [] => Err(field_err("matrix_group", "source", "missing")),
            ms => Ok(MatrixSource::Matrices(
                ms.iter()
                    .map(|t| matrix_term("matrix_group", t))
                    .collect::<Result<_>>()?,
            )),
        }
    }
}

impl GroupSpec {
    fn from_term(t: &Term) -> Result<GroupSpec> {
        let (name, args) = match t {
            Term::Ident(name) => (name.as_str(), &[][..]),
            Term::Call(name, args) => (name.as_str(), args.as_slice()),
            other => {
                return Err(input(format!(
                    "expected a group spec, found {}",
                    other.describe()
                )))
            }
        };
        let pos: Vec<&Term> = args.iter().map(|(_, t)| t).collect();
        let arg = |i: usize| pos.get(i).copied();
        let spec = match name {
            "cyclic" => GroupSpec::Cyclic(uint_arg(name, "n", arg(0))?),
            "elementary_abelian" => GroupSpec::ElementaryAbelian {
                p: uint_arg(name, "p", arg(0))?,
                k: uint_arg(name, "k", arg(1))? as u32,
            },
            "symmetric" => GroupSpec::Symmetric(uint_arg(name, "n", arg(0))? as usize),
            "alternating" => GroupSpec::Alternating(uint_arg(name, "n", arg(0))? as usize),
            "dihedral" => GroupSpec::Dihedral(uint_arg(name, "order", arg(0))?),
            "quaternion8" => GroupSpec::Quaternion8,
            "permutations" => {
                let degree = uint_arg(name, "degree", arg(0))? as usize;
                let cycles = pos[1.min(pos.len())..]
                    .iter()
                    .map(|t| match t {
                        Term::Str(s) => Ok(s.clone()),
                        _ => Err(field_err(name, "generators", "expected cycle strings")),
                    })
                    .collect::<Result<Vec<_>>>()?;
                GroupSpec::Permutations { degree, cycles }
            }
            "presentation" => match arg(0) {
                Some(Term::Str(s)) => GroupSpec::Presentation(Presentation::parse(s)?),
                _ => return Err(field_err(name, "text", "expected a quoted presentation")),
            },
            "matrix_group" => {
                let n = uint_arg(name, "n", arg(0))? as usize;
                let p = uint_arg(name, "p", arg(1))? as u32;
                let source = MatrixSource::from_terms(&pos[2.min(pos.len())..])?;
                GroupSpec::MatrixGroup { n, p, source }
            }
            "vector_semidirect" => {
                let p = uint_arg(name, "p", arg(0))? as u32;
                let n = uint_arg(name, "n", arg(1))? as usize;
                let m = arg(2).ok_or_else(|| field_err(name, "matrices", "missing"))?;
                let inner = GroupSpec::from_term(m)?;
                if !matches!(inner, GroupSpec::MatrixGroup { .. }) {
                    return Err(field_err(name, "matrices", "must be a matrix_group"));
                }
                GroupSpec::VectorSemidirect {
                    p,
                    n,
                    matrices: Box::new(inner),
                }
            }
            "direct_product" => GroupSpec::DirectProduct(
                pos.iter()
                    .map(|t| GroupSpec::from_term(t))
                    .collect::<Result<_>>()?,
            ),
            other => return Err(input(format!("unknown spec kind {other:?}"))),
        };
        Ok(spec)
    }
}

impl fmt::Display for MatrixSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixSource::Standard(LinearFamily::GL) => write!(f, "GL"),
            MatrixSource::Standard(LinearFamily::SL) => write!(f, "SL"),
            MatrixSource::Matrices(ms) => {
                for (i, m) in ms.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    let rows: Vec<String> = m
                        .iter()
                        .map(|r| {
                            format!(
                                "[{}]",
                                r.iter()
                                    .map(|x| x.to_string())
                                    .collect::<Vec<_>>()
                                    .join(",")
                            )
                        })
                        .collect();
                    write!(f, "[{}]", rows.join(","))?;
                }
                Ok(())
            }
            MatrixSource::Search {
                within,
                order,
                center,
                quotient,
            } => write!(
                f,
                "search({within}, order={order}, center={center}, quotient={quotient})"
            ),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyclic({n})"),
            GroupSpec::ElementaryAbelian { p, k } => write!(f, "elementary_abelian({p}, {k})"),
            GroupSpec::Symmetric(n) => write!(f, "symmetric({n})"),
            GroupSpec::Alternating(n) => write!(f, "alternating({n})"),
            GroupSpec::Dihedral(n) => write!(f, "dihedral({n})"),
            GroupSpec::Quaternion8 => write!(f, "quaternion8"),
            GroupSpec::Permutations { degree, cycles } => {
                write!(f, "permutations({degree}")?;
                for c in cycles {
                    write!(f, ", \"{c}\"")?;
                }
                write!(f, ")")
            }
            GroupSpec::Presentation(p) => write!(f, "presentation(\"{p}\")"),
            GroupSpec::MatrixGroup { n, p, source } => {
                write!(f, "matrix_group({n}, {p}, {source})")
            }
            GroupSpec::VectorSemidirect { p, n, matrices } => {
                write!(f, "vector_semidirect({p}, {n}, {matrices})")
            }
            GroupSpec::DirectProduct(fs) => {
                write!(f, "direct_product(")?;
                for (i, s) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{s}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order_of(text: &str) -> u64 {
        construct(&GroupSpec::parse(text).unwrap()).unwrap().order()
    }

    #[test]
    fn family_orders() {
        assert_eq!(order_of("cyclic(12)"), 12);
        assert_eq!(order_of("elementary_abelian(7, 2)"), 49);
        assert_eq!(order_of("symmetric(4)"), 24);
        assert_eq!(order_of("alternating(5)"), 60);
        assert_eq!(order_of("dihedral(8)"), 8);
        assert_eq!(order_of("dihedral(4)"), 4);
        assert_eq!(order_of("quaternion8"), 8);
        assert_eq!(order_of("permutations(4, \"(0 1 2 3)\", \"(0 1)\")"), 24);
        assert_eq!(order_of("matrix_group(2, 3, SL)"), 24);
        assert_eq!(
            order_of("vector_semidirect(3, 2, matrix_group(2, 3, SL))"),
            216
        );
        assert_eq!(order_of("direct_product(cyclic(5), cyclic(3))"), 15);
    }

    #[test]
    fn cyclic_is_abelian_and_exponent_checked() {
        let g = construct(&GroupSpec::Cyclic(12)).unwrap();
        assert!(g.is_abelian());
        let e = construct(&GroupSpec::ElementaryAbelian { p: 7, k: 2 }).unwrap();
        assert_eq!(e.exponent().unwrap(), 7);
    }

    #[test]
    fn invalid_parameters_name_the_field() {
        let err = construct(&GroupSpec::ElementaryAbelian { p: 6, k: 2 }).unwrap_err();
        assert!(err.to_string().contains("field p"), "{err}");
        let err = GroupSpec::parse("cyclic(x)").unwrap_err();
        assert!(err.to_string().contains("field n"), "{err}");
        assert!(GroupSpec::parse("mystery(3)").is_err());
        let err = GroupSpec::parse("vector_semidirect(3, 2, cyclic(3))").unwrap_err();
        assert!(err.to_string().contains("field matrices"), "{err}");
    }

    #[test]
    fn canonical_text_is_stable() {
        let text = "direct_product( cyclic(5),matrix_group(2,5,[[0,1],[4,4]], [[0,1],[1,0]]), matrix_group(2, 7, search(GL, order=48, center=2, quotient=S4)))";
        let spec = GroupSpec::parse(text).unwrap();
        let printed = spec.to_string();
        assert_eq!(GroupSpec::parse(&printed).unwrap(), spec);
        assert_eq!(GroupSpec::parse(&printed).unwrap().to_string(), printed);
    }

    #[test]
    fn provenance_is_recorded() {
        let g = construct(&GroupSpec::Symmetric(3)).unwrap();
        assert_eq!(g.provenance(), Some("symmetric(3)"));
    }

    #[test]
    fn subgroup_search_not_found_when_order_does_not_divide() {
        let s4 = construct(&GroupSpec::Symmetric(4)).unwrap();
        let err = find_subgroup_by_order_and_quotient(&s4, 30, 1, "S4").unwrap_err();
        assert!(matches!(err, GroupError::NotFound(_)));
    }
}
