//! Finite groupoids with explicit composition tables.
//!
//! Arrows are dense integer ids `0..arrow_count`; units are arrows `u` with
//! `source(u) = range(u) = u`, and sources/ranges always point at unit ids.
//! A pair `(g1, g2)` composes exactly when `source(g1) = range(g2)`; the
//! product then satisfies `source(g1 g2) = source(g2)` and
//! `range(g1 g2) = range(g1)` (arrows compose right to left, like maps).
//!
//! Every constructor funnels through the same exhaustive validation sweep
//! (definedness, source/range bookkeeping, unit laws, inverse laws,
//! associativity over all composable triples), so downstream modules may
//! index the tables without re-checking.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};

/// One arrow of a finite groupoid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arrow {
    /// Dense id in `0..arrow_count`.
    pub id: usize,
    /// Unit id the arrow starts at.
    pub source: usize,
    /// Unit id the arrow ends at.
    pub range: usize,
}

/// Description accepted by [`build_groupoid`].
#[derive(Debug, Clone)]
pub enum GroupoidSpec {
    /// Pair groupoid on `n` points: one arrow `b -> a` per ordered pair
    /// `(a, b)`, with id `a * n + b`.
    Pair(usize),
    /// A group presented by its Cayley table: `table[i][j]` is the product
    /// `i * j`. The identity is located automatically.
    Group { table: Vec<Vec<usize>> },
    /// Transformation groupoid of a group acting on `{0, .., set_size-1}`.
    /// `perms[h]` lists the images of every point under group element `h`;
    /// the list must be a homomorphism into the symmetric group. The arrow
    /// `(h, p)` has id `h * set_size + p` and runs from `p` to `h . p`.
    Action {
        table: Vec<Vec<usize>>,
        set_size: usize,
        perms: Vec<Vec<usize>>,
    },
    /// Disjoint union; component arrows are renumbered in order.
    Union(Vec<GroupoidSpec>),
    /// Explicit tables. `compose` lists `(g1, g2, g1 g2)` triples and
    /// `inverse` lists `(g, g_inv)` pairs; anything missing or extra is
    /// reported by validation.
    Explicit {
        arrows: Vec<Arrow>,
        units: Vec<usize>,
        compose: Vec<(usize, usize, usize)>,
        inverse: Vec<(usize, usize)>,
    },
}

/// The three fibers attached to a unit `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fibers {
    /// Arrows with source `x`, ascending. Basis order for the Hilbert space
    /// at `x`.
    pub source_fiber: Vec<usize>,
    /// Arrows with range `x`, ascending.
    pub range_fiber: Vec<usize>,
    /// Arrows with source and range both `x`, ascending. Always a group
    /// under composition.
    pub isotropy: Vec<usize>,
}

/// Partition of the unit space into connected components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitDecomposition {
    /// Orbit classes, each ascending, ordered by least member.
    pub classes: Vec<Vec<usize>>,
    /// Least unit id of each class, parallel to `classes`.
    pub representatives: Vec<usize>,
}

impl OrbitDecomposition {
    /// Index of the class containing `x`, if `x` is a unit.
    pub fn class_of(&self, x: usize) -> Option<usize> {
        self.classes.iter().position(|c| c.binary_search(&x).is_ok())
    }
}

/// A validated finite groupoid.
///
/// All tables are immutable after construction; fibers and orbits are
/// precomputed.
#[derive(Debug)]
pub struct FiniteGroupoid {
    arrows: Vec<Arrow>,
    units: Vec<usize>,
    is_unit: Vec<bool>,
    compose: Vec<Option<usize>>,
    inverse: Vec<usize>,
    fibers: BTreeMap<usize, Fibers>,
    orbits: OrbitDecomposition,
    origin: Option<String>,
}

impl FiniteGroupoid {
    /// Number of arrows.
    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    /// All arrows, indexed by id.
    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    /// Unit ids, ascending.
    pub fn units(&self) -> &[usize] {
        &self.units
    }

    /// Whether `id` is a unit (false for out-of-range ids).
    pub fn is_unit(&self, id: usize) -> bool {
        self.is_unit.get(id).copied().unwrap_or(false)
    }

    fn check_arrow(&self, id: usize) -> Result<()> {
        if id < self.arrows.len() {
            Ok(())
        } else {
            Err(Error::UnknownArrow(id))
        }
    }

    /// Source unit of `g`.
    pub fn source(&self, g: usize) -> Result<usize> {
        self.check_arrow(g)?;
        Ok(self.arrows[g].source)
    }

    /// Range unit of `g`.
    pub fn range(&self, g: usize) -> Result<usize> {
        self.check_arrow(g)?;
        Ok(self.arrows[g].range)
    }

    /// Inverse arrow of `g`.
    pub fn inverse(&self, g: usize) -> Result<usize> {
        self.check_arrow(g)?;
        Ok(self.inverse[g])
    }

    /// Product `g1 g2`, defined when `source(g1) = range(g2)`.
    pub fn compose(&self, g1: usize, g2: usize) -> Result<usize> {
        self.check_arrow(g1)?;
        self.check_arrow(g2)?;
        self.compose[g1 * self.arrows.len() + g2]
            .ok_or(Error::UndefinedComposition { first: g1, second: g2 })
    }

    /// Product as an `Option` (also `None` on out-of-range ids).
    pub fn compose_opt(&self, g1: usize, g2: usize) -> Option<usize> {
        let m = self.arrows.len();
        if g1 >= m || g2 >= m {
            return None;
        }
        self.compose[g1 * m + g2]
    }

    /// Fibers at the unit `x`.
    pub fn fibers(&self, x: usize) -> Result<&Fibers> {
        self.check_arrow(x)?;
        self.fibers.get(&x).ok_or(Error::NotAUnit(x))
    }

    /// Iterate `(unit, fibers)` pairs in ascending unit order.
    pub fn unit_fibers(&self) -> impl Iterator<Item = (usize, &Fibers)> {
        self.fibers.iter().map(|(&u, f)| (u, f))
    }

    /// Orbit decomposition of the unit space.
    pub fn orbits(&self) -> &OrbitDecomposition {
        &self.orbits
    }

    /// Cayley table of a one-unit groupoid (a group), arrows as elements.
    pub fn cayley_table(&self) -> Result<Vec<Vec<usize>>> {
        if self.units.len() != 1 {
            return Err(Error::MalformedSpec(format!(
                "expected a group (exactly one unit), found {} units",
                self.units.len()
            )));
        }
        let m = self.arrows.len();
        let mut table = vec![vec![0usize; m]; m];
        for (g1, row) in table.iter_mut().enumerate() {
            for (g2, entry) in row.iter_mut().enumerate() {
                *entry = self.compose[g1 * m + g2].expect("group is everywhere composable");
            }
        }
        Ok(table)
    }

    /// Rebuild this groupoid's tables as an explicit description.
    pub fn to_explicit_spec(&self) -> GroupoidSpec {
        let m = self.arrows.len();
        let mut compose = Vec::new();
        for g1 in 0..m {
            for g2 in 0..m {
                if let Some(p) = self.compose[g1 * m + g2] {
                    compose.push((g1, g2, p));
                }
            }
        }
        GroupoidSpec::Explicit {
            arrows: self.arrows.clone(),
            units: self.units.clone(),
            compose,
            inverse: self.inverse.iter().copied().enumerate().collect(),
        }
    }

    /// Whether two groupoids have identical arrows, units and tables.
    pub fn structural_eq(&self, other: &FiniteGroupoid) -> bool {
        self.arrows == other.arrows
            && self.units == other.units
            && self.compose == other.compose
            && self.inverse == other.inverse
    }

    /// Canonical constructor line when this groupoid came from one.
    pub fn origin(&self) -> Option<&str> {
        self.origin.as_deref()
    }

    /// Pair groupoid on `n` points.
    pub fn pair(n: usize) -> Result<Arc<FiniteGroupoid>> {
        build_groupoid(&GroupoidSpec::Pair(n))
    }

    /// Cyclic group of order `n` as a one-unit groupoid.
    pub fn cyclic_group(n: usize) -> Result<Arc<FiniteGroupoid>> {
        if n == 0 {
            return Err(Error::MalformedSpec("cyclic group order must be positive".into()));
        }
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        build_groupoid(&GroupoidSpec::Group { table })
    }
}

/// Build and exhaustively validate a groupoid from its description.
pub fn build_groupoid(spec: &GroupoidSpec) -> Result<Arc<FiniteGroupoid>> {
    build_groupoid_raw(spec).map(Arc::new)
}

pub(crate) fn build_groupoid_raw(spec: &GroupoidSpec) -> Result<FiniteGroupoid> {
    let raw = assemble(spec)?;
    validate(&raw)?;
    finalize(raw)
}

struct RawGroupoid {
    arrows: Vec<Arrow>,
    units: Vec<usize>,
    is_unit: Vec<bool>,
    compose: Vec<Option<usize>>,
    inverse: Vec<Option<usize>>,
    origin: Option<String>,
}

fn assemble(spec: &GroupoidSpec) -> Result<RawGroupoid> {
    match spec {
        GroupoidSpec::Pair(n) => assemble_pair(*n),
        GroupoidSpec::Group { table } => assemble_group(table),
        GroupoidSpec::Action { table, set_size, perms } => {
            assemble_action(table, *set_size, perms)
        }
        GroupoidSpec::Union(parts) => assemble_union(parts),
        GroupoidSpec::Explicit { arrows, units, compose, inverse } => {
            assemble_explicit(arrows, units, compose, inverse)
        }
    }
}

fn assemble_pair(n: usize) -> Result<RawGroupoid> {
    if n == 0 {
        return Err(Error::MalformedSpec("pair groupoid needs at least one point".into()));
    }
    let m = n * n;
    let id = |a: usize, b: usize| a * n + b;
    let mut arrows = Vec::with_capacity(m);
    for a in 0..n {
        for b in 0..n {
            arrows.push(Arrow { id: id(a, b), source: id(b, b), range: id(a, a) });
        }
    }
    let units: Vec<usize> = (0..n).map(|a| id(a, a)).collect();
    let mut compose = vec![None; m * m];
    for a in 0..n {
        for b in 0..n {
            for d in 0..n {
                // (a <- b) . (b <- d) = (a <- d)
                compose[id(a, b) * m + id(b, d)] = Some(id(a, d));
            }
        }
    }
    let inverse = (0..n)
        .flat_map(|a| (0..n).map(move |b| Some(id(b, a))))
        .collect();
    let mut is_unit = vec![false; m];
    for &u in &units {
        is_unit[u] = true;
    }
    Ok(RawGroupoid {
        arrows,
        units,
        is_unit,
        compose,
        inverse,
        origin: Some(format!("pair {n}")),
    })
}

fn check_square_table(table: &[Vec<usize>]) -> Result<usize> {
    let n = table.len();
    if n == 0 {
        return Err(Error::MalformedSpec("empty Cayley table".into()));
    }
    for row in table {
        if row.len() != n {
            return Err(Error::MalformedSpec(format!(
                "Cayley table must be {n} x {n}, found a row of length {}",
                row.len()
            )));
        }
        for &e in row {
            if e >= n {
                return Err(Error::MalformedSpec(format!(
                    "Cayley table entry {e} out of range 0..{n}"
                )));
            }
        }
    }
    Ok(n)
}

fn group_identity(table: &[Vec<usize>]) -> Result<usize> {
    let n = table.len();
    (0..n)
        .find(|&e| (0..n).all(|j| table[e][j] == j && table[j][e] == j))
        .ok_or_else(|| Error::MalformedSpec("Cayley table has no identity element".into()))
}

fn group_inverses(table: &[Vec<usize>], e: usize) -> Result<Vec<usize>> {
    let n = table.len();
    (0..n)
        .map(|i| {
            (0..n)
                .find(|&j| table[i][j] == e && table[j][i] == e)
                .ok_or_else(|| {
                    Error::MalformedSpec(format!("element {i} has no two-sided inverse"))
                })
        })
        .collect()
}

fn assemble_group(table: &[Vec<usize>]) -> Result<RawGroupoid> {
    let n = check_square_table(table)?;
    let e = group_identity(table)?;
    let inv = group_inverses(table, e)?;
    let arrows = (0..n).map(|i| Arrow { id: i, source: e, range: e }).collect();
    let mut compose = vec![None; n * n];
    for i in 0..n {
        for j in 0..n {
            compose[i * n + j] = Some(table[i][j]);
        }
    }
    let mut is_unit = vec![false; n];
    is_unit[e] = true;
    let flat: Vec<String> = table.iter().flatten().map(|v| v.to_string()).collect();
    Ok(RawGroupoid {
        arrows,
        units: vec![e],
        is_unit,
        compose,
        inverse: inv.into_iter().map(Some).collect(),
        origin: Some(format!("group {n} {}", flat.join(" "))),
    })
}

fn assemble_action(table: &[Vec<usize>], set_size: usize, perms: &[Vec<usize>]) -> Result<RawGroupoid> {
    let n = check_square_table(table)?;
    let e = group_identity(table)?;
    let ginv = group_inverses(table, e)?;
    if set_size == 0 {
        return Err(Error::MalformedSpec("action needs a non-empty set".into()));
    }
    if perms.len() != n {
        return Err(Error::MalformedSpec(format!(
            "action needs one permutation per group element ({n}), found {}",
            perms.len()
        )));
    }
    for (h, p) in perms.iter().enumerate() {
        if p.len() != set_size {
            return Err(Error::MalformedSpec(format!(
                "permutation for element {h} must list {set_size} images, found {}",
                p.len()
            )));
        }
        let mut seen = vec![false; set_size];
        for &img in p {
            if img >= set_size || seen[img] {
                return Err(Error::MalformedSpec(format!(
                    "images for element {h} are not a permutation of the set"
                )));
            }
            seen[img] = true;
        }
    }
    if (0..set_size).any(|p| perms[e][p] != p) {
        return Err(Error::MalformedSpec(
            "identity element must act as the identity permutation".into(),
        ));
    }
    for h1 in 0..n {
        for h2 in 0..n {
            for p in 0..set_size {
                if perms[table[h1][h2]][p] != perms[h1][perms[h2][p]] {
                    return Err(Error::MalformedSpec(format!(
                        "action map is not a homomorphism at elements {h1}, {h2}, point {p}"
                    )));
                }
            }
        }
    }

    let m = n * set_size;
    let id = |h: usize, p: usize| h * set_size + p;
    let mut arrows = Vec::with_capacity(m);
    for h in 0..n {
        for p in 0..set_size {
            arrows.push(Arrow { id: id(h, p), source: id(e, p), range: id(e, perms[h][p]) });
        }
    }
    let units: Vec<usize> = (0..set_size).map(|p| id(e, p)).collect();
    let mut compose = vec![None; m * m];
    for h2 in 0..n {
        for h1 in 0..n {
            for p in 0..set_size {
                // (h2, h1.p) . (h1, p) = (h2 h1, p)
                compose[id(h2, perms[h1][p]) * m + id(h1, p)] = Some(id(table[h2][h1], p));
            }
        }
    }
    let mut inverse = Vec::with_capacity(m);
    for h in 0..n {
        for p in 0..set_size {
            inverse.push(Some(id(ginv[h], perms[h][p])));
        }
    }
    let mut is_unit = vec![false; m];
    for &u in &units {
        is_unit[u] = true;
    }
    Ok(RawGroupoid { arrows, units, is_unit, compose, inverse, origin: None })
}

fn assemble_union(parts: &[GroupoidSpec]) -> Result<RawGroupoid> {
    if parts.is_empty() {
        return Err(Error::MalformedSpec("union of zero groupoids".into()));
    }
    let raws: Vec<RawGroupoid> = parts.iter().map(assemble).collect::<Result<_>>()?;
    let m: usize = raws.iter().map(|r| r.arrows.len()).sum();
    let mut arrows = Vec::with_capacity(m);
    let mut units = Vec::new();
    let mut is_unit = vec![false; m];
    let mut compose = vec![None; m * m];
    let mut inverse = vec![None; m];
    let mut offset = 0;
    for raw in &raws {
        let k = raw.arrows.len();
        for a in &raw.arrows {
            arrows.push(Arrow {
                id: a.id + offset,
                source: a.source + offset,
                range: a.range + offset,
            });
        }
        for &u in &raw.units {
            units.push(u + offset);
            is_unit[u + offset] = true;
        }
        for g1 in 0..k {
            for g2 in 0..k {
                if let Some(p) = raw.compose[g1 * k + g2] {
                    compose[(g1 + offset) * m + (g2 + offset)] = Some(p + offset);
                }
            }
        }
        for (g, inv) in raw.inverse.iter().enumerate() {
            inverse[g + offset] = inv.map(|h| h + offset);
        }
        offset += k;
    }
    units.sort_unstable();
    Ok(RawGroupoid { arrows, units, is_unit, compose, inverse, origin: None })
}

fn assemble_explicit(
    arrows: &[Arrow],
    units: &[usize],
    compose: &[(usize, usize, usize)],
    inverse: &[(usize, usize)],
) -> Result<RawGroupoid> {
    let m = arrows.len();
    if m == 0 {
        return Err(Error::MalformedSpec("a groupoid needs at least one arrow".into()));
    }
    let mut slots: Vec<Option<Arrow>> = vec![None; m];
    for a in arrows {
        if a.id >= m {
            return Err(Error::MalformedSpec(format!(
                "arrow id {} out of range; ids must be dense 0..{m}",
                a.id
            )));
        }
        if slots[a.id].is_some() {
            return Err(Error::MalformedSpec(format!("duplicate arrow id {}", a.id)));
        }
        if a.source >= m || a.range >= m {
            return Err(Error::MalformedSpec(format!(
                "arrow {} has source/range outside 0..{m}",
                a.id
            )));
        }
        slots[a.id] = Some(*a);
    }
    let arrows: Vec<Arrow> = slots.into_iter().map(|s| s.expect("dense ids")).collect();

    let mut is_unit = vec![false; m];
    let mut sorted_units = Vec::with_capacity(units.len());
    for &u in units {
        if u >= m {
            return Err(Error::MalformedSpec(format!("unit id {u} out of range 0..{m}")));
        }
        if is_unit[u] {
            return Err(Error::MalformedSpec(format!("duplicate unit id {u}")));
        }
        is_unit[u] = true;
        sorted_units.push(u);
    }
    if sorted_units.is_empty() {
        return Err(Error::MalformedSpec("a groupoid needs at least one unit".into()));
    }
    sorted_units.sort_unstable();

    let mut table = vec![None; m * m];
    for &(g1, g2, p) in compose {
        if g1 >= m || g2 >= m || p >= m {
            return Err(Error::MalformedSpec(format!(
                "compose entry ({g1}, {g2}) -> {p} references ids outside 0..{m}"
            )));
        }
        match table[g1 * m + g2] {
            Some(q) if q != p => {
                return Err(Error::MalformedSpec(format!(
                    "conflicting compose entries for ({g1}, {g2}): {q} vs {p}"
                )));
            }
            _ => table[g1 * m + g2] = Some(p),
        }
    }

    let mut inv = vec![None; m];
    for &(g, h) in inverse {
        if g >= m || h >= m {
            return Err(Error::MalformedSpec(format!(
                "inverse entry ({g}, {h}) references ids outside 0..{m}"
            )));
        }
        match inv[g] {
            Some(k) if k != h => {
                return Err(Error::MalformedSpec(format!(
                    "conflicting inverse entries for {g}: {k} vs {h}"
                )));
            }
            _ => inv[g] = Some(h),
        }
    }

    Ok(RawGroupoid {
        arrows,
        units: sorted_units,
        is_unit,
        compose: table,
        inverse: inv,
        origin: None,
    })
}

fn violation(law: &str, arrows: &[usize]) -> Error {
    Error::AxiomViolation { law: law.to_string(), arrows: arrows.to_vec() }
}

fn validate(raw: &RawGroupoid) -> Result<()> {
    let m = raw.arrows.len();
    let src = |g: usize| raw.arrows[g].source;
    let rng = |g: usize| raw.arrows[g].range;
    let prod = |g1: usize, g2: usize| raw.compose[g1 * m + g2];

    for (g, a) in raw.arrows.iter().enumerate() {
        if a.id != g {
            return Err(Error::MalformedSpec(format!("arrow at index {g} carries id {}", a.id)));
        }
        if !raw.is_unit[a.source] {
            return Err(violation("source of every arrow is a unit", &[g, a.source]));
        }
        if !raw.is_unit[a.range] {
            return Err(violation("range of every arrow is a unit", &[g, a.range]));
        }
    }
    for &u in &raw.units {
        if src(u) != u || rng(u) != u {
            return Err(violation("a unit arrow has itself as source and range", &[u]));
        }
    }

    for g1 in 0..m {
        for g2 in 0..m {
            let defined = prod(g1, g2).is_some();
            let composable = src(g1) == rng(g2);
            if defined && !composable {
                return Err(violation(
                    "composition is defined only when source(g1) = range(g2)",
                    &[g1, g2],
                ));
            }
            if !defined && composable {
                return Err(violation(
                    "composition must be defined whenever source(g1) = range(g2)",
                    &[g1, g2],
                ));
            }
            if let Some(p) = prod(g1, g2) {
                if p >= m {
                    return Err(Error::MalformedSpec(format!(
                        "compose table entry ({g1}, {g2}) -> {p} out of range"
                    )));
                }
                if src(p) != src(g2) {
                    return Err(violation("source(g1 g2) = source(g2)", &[g1, g2, p]));
                }
                if rng(p) != rng(g1) {
                    return Err(violation("range(g1 g2) = range(g1)", &[g1, g2, p]));
                }
            }
        }
    }

    for g in 0..m {
        if prod(rng(g), g) != Some(g) {
            return Err(violation("left unit law: range(g) . g = g", &[rng(g), g]));
        }
        if prod(g, src(g)) != Some(g) {
            return Err(violation("right unit law: g . source(g) = g", &[g, src(g)]));
        }
    }

    for g in 0..m {
        let h = match raw.inverse[g] {
            Some(h) if h < m => h,
            Some(h) => {
                return Err(Error::MalformedSpec(format!("inverse of {g} is out of range: {h}")));
            }
            None => return Err(violation("every arrow has an inverse", &[g])),
        };
        if prod(g, h) != Some(rng(g)) {
            return Err(violation("right inverse law: g . inverse(g) = range(g)", &[g, h]));
        }
        if prod(h, g) != Some(src(g)) {
            return Err(violation("left inverse law: inverse(g) . g = source(g)", &[h, g]));
        }
        if raw.inverse[h] != Some(g) {
            return Err(violation("inversion is an involution", &[g, h]));
        }
    }

    // Associativity over every composable triple. Composable pairs are
    // enumerated through the range index to keep this near the true triple
    // count rather than m^3.
    let mut by_range: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for g in 0..m {
        by_range.entry(rng(g)).or_default().push(g);
    }
    let empty = Vec::new();
    for g1 in 0..m {
        for &g2 in by_range.get(&src(g1)).unwrap_or(&empty) {
            let p12 = prod(g1, g2).expect("checked composable");
            for &g3 in by_range.get(&src(g2)).unwrap_or(&empty) {
                let p23 = prod(g2, g3).expect("checked composable");
                if prod(p12, g3) != prod(g1, p23) {
                    return Err(violation("associativity: (g1 g2) g3 = g1 (g2 g3)", &[g1, g2, g3]));
                }
            }
        }
    }

    Ok(())
}

fn finalize(raw: RawGroupoid) -> Result<FiniteGroupoid> {
    let mut fibers: BTreeMap<usize, Fibers> = raw
        .units
        .iter()
        .map(|&u| {
            (u, Fibers { source_fiber: Vec::new(), range_fiber: Vec::new(), isotropy: Vec::new() })
        })
        .collect();
    for a in &raw.arrows {
        fibers.get_mut(&a.source).expect("validated unit").source_fiber.push(a.id);
        fibers.get_mut(&a.range).expect("validated unit").range_fiber.push(a.id);
        if a.source == a.range {
            fibers.get_mut(&a.source).expect("validated unit").isotropy.push(a.id);
        }
    }

    let mut class_index: BTreeMap<usize, usize> = BTreeMap::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &u in &raw.units {
        if class_index.contains_key(&u) {
            continue;
        }
        let mut class = vec![u];
        class_index.insert(u, classes.len());
        let mut frontier = vec![u];
        while let Some(x) = frontier.pop() {
            let fib = &fibers[&x];
            let neighbours: Vec<usize> = fib
                .source_fiber
                .iter()
                .map(|&g| raw.arrows[g].range)
                .chain(fib.range_fiber.iter().map(|&g| raw.arrows[g].source))
                .collect();
            for v in neighbours {
                if !class_index.contains_key(&v) {
                    class_index.insert(v, classes.len());
                    class.push(v);
                    frontier.push(v);
                }
            }
        }
        class.sort_unstable();
        classes.push(class);
    }
    let representatives = classes.iter().map(|c| c[0]).collect();

    Ok(FiniteGroupoid {
        arrows: raw.arrows,
        units: raw.units,
        is_unit: raw.is_unit,
        compose: raw.compose,
        inverse: raw.inverse.into_iter().map(|h| h.expect("validated inverse")).collect(),
        fibers,
        orbits: OrbitDecomposition { classes, representatives },
        origin: raw.origin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pid(n: usize, a: usize, b: usize) -> usize {
        a * n + b
    }

    #[test]
    fn pair_counts_and_composition() {
        let g = FiniteGroupoid::pair(3).unwrap();
        assert_eq!(g.arrow_count(), 9);
        assert_eq!(g.units(), &[0, 4, 8]);
        // (0 <- 1) . (1 <- 2) = (0 <- 2)
        assert_eq!(g.compose(pid(3, 0, 1), pid(3, 1, 2)).unwrap(), pid(3, 0, 2));
        assert_eq!(g.inverse(pid(3, 0, 2)).unwrap(), pid(3, 2, 0));
        assert!(g.compose(pid(3, 0, 1), pid(3, 0, 1)).is_err());
        for (_, fib) in g.unit_fibers() {
            assert_eq!(fib.source_fiber.len(), 3);
            assert_eq!(fib.isotropy.len(), 1);
        }
        assert_eq!(g.orbits().classes.len(), 1);
    }

    #[test]
    fn cyclic_group_shape() {
        let g = FiniteGroupoid::cyclic_group(2).unwrap();
        assert_eq!(g.arrow_count(), 2);
        assert_eq!(g.units(), &[0]);
        assert_eq!(g.compose(1, 1).unwrap(), 0);
        assert_eq!(g.fibers(0).unwrap().isotropy, vec![0, 1]);
        assert_eq!(g.cayley_table().unwrap(), vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn action_fibers_and_orbit() {
        // Z/2 swapping two points.
        let spec = GroupoidSpec::Action {
            table: vec![vec![0, 1], vec![1, 0]],
            set_size: 2,
            perms: vec![vec![0, 1], vec![1, 0]],
        };
        let g = build_groupoid(&spec).unwrap();
        assert_eq!(g.arrow_count(), 4);
        assert_eq!(g.units(), &[0, 1]);
        let fib = g.fibers(0).unwrap();
        assert_eq!(fib.source_fiber, vec![0, 2]);
        assert_eq!(fib.isotropy, vec![0]);
        assert_eq!(g.orbits().classes, vec![vec![0, 1]]);
        // (g, p): source p, range q.
        assert_eq!(g.source(2).unwrap(), 0);
        assert_eq!(g.range(2).unwrap(), 1);
        assert_eq!(g.inverse(2).unwrap(), 3);
        assert_eq!(g.compose(3, 2).unwrap(), 0);
    }

    #[test]
    fn union_orbits() {
        let spec = GroupoidSpec::Union(vec![
            GroupoidSpec::Pair(2),
            GroupoidSpec::Group { table: vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]] },
        ]);
        let g = build_groupoid(&spec).unwrap();
        assert_eq!(g.arrow_count(), 7);
        assert_eq!(g.units(), &[0, 3, 4]);
        assert_eq!(g.orbits().classes, vec![vec![0, 3], vec![4]]);
        assert_eq!(g.orbits().representatives, vec![0, 4]);
        assert_eq!(g.orbits().class_of(3), Some(0));
        assert_eq!(g.orbits().class_of(4), Some(1));
    }

    #[test]
    fn missing_composite_rejected() {
        // pair(2) with one compose triple removed.
        let full = FiniteGroupoid::pair(2).unwrap();
        let spec = full.to_explicit_spec();
        if let GroupoidSpec::Explicit { arrows, units, mut compose, inverse } = spec {
            let victim = compose.iter().position(|&(g1, g2, _)| g1 == 1 && g2 == 2).unwrap();
            compose.remove(victim);
            let err = build_groupoid(&GroupoidSpec::Explicit { arrows, units, compose, inverse })
                .unwrap_err();
            match err {
                Error::AxiomViolation { law, arrows } => {
                    assert!(law.contains("must be defined"));
                    assert_eq!(arrows, vec![1, 2]);
                }
                other => panic!("unexpected error {other:?}"),
            }
        } else {
            panic!("explicit spec expected");
        }
    }

    #[test]
    fn corrupt_compose_entry_detected() {
        // Z/3 with 1 . 1 redirected to the identity; associativity must fail.
        let full = FiniteGroupoid::cyclic_group(3).unwrap();
        if let GroupoidSpec::Explicit { arrows, units, mut compose, inverse } =
            full.to_explicit_spec()
        {
            for entry in compose.iter_mut() {
                if entry.0 == 1 && entry.1 == 1 {
                    entry.2 = 0;
                }
            }
            let err = build_groupoid(&GroupoidSpec::Explicit { arrows, units, compose, inverse })
                .unwrap_err();
            match err {
                Error::AxiomViolation { law, .. } => assert!(law.contains("associativity")),
                other => panic!("unexpected error {other:?}"),
            }
        } else {
            panic!("explicit spec expected");
        }
    }

    #[test]
    fn noncomposable_entry_rejected() {
        // Two isolated units plus a compose entry for a non-composable pair.
        let arrows = vec![
            Arrow { id: 0, source: 0, range: 0 },
            Arrow { id: 1, source: 1, range: 1 },
        ];
        let spec = GroupoidSpec::Explicit {
            arrows,
            units: vec![0, 1],
            compose: vec![(0, 0, 0), (1, 1, 1), (0, 1, 0)],
            inverse: vec![(0, 0), (1, 1)],
        };
        let err = build_groupoid(&spec).unwrap_err();
        match err {
            Error::AxiomViolation { law, arrows } => {
                assert!(law.contains("only when"));
                assert_eq!(arrows, vec![0, 1]);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn group_without_identity_rejected() {
        let err = build_groupoid(&GroupoidSpec::Group { table: vec![vec![0, 0], vec![0, 0]] })
            .unwrap_err();
        assert!(matches!(err, Error::MalformedSpec(_)));
    }

    #[test]
    fn action_non_homomorphism_rejected() {
        let spec = GroupoidSpec::Action {
            table: vec![vec![0, 1], vec![1, 0]],
            set_size: 3,
            perms: vec![vec![0, 1, 2], vec![1, 2, 0]],
        };
        let err = build_groupoid(&spec).unwrap_err();
        assert!(matches!(err, Error::MalformedSpec(_)));
    }

    #[test]
    fn ids_must_be_dense() {
        let arrows = vec![Arrow { id: 1, source: 1, range: 1 }];
        let spec = GroupoidSpec::Explicit {
            arrows,
            units: vec![1],
            compose: vec![],
            inverse: vec![],
        };
        assert!(matches!(build_groupoid(&spec).unwrap_err(), Error::MalformedSpec(_)));
    }

    #[test]
    fn explicit_round_trip_is_structural_identity() {
        let g = FiniteGroupoid::pair(3).unwrap();
        let again = build_groupoid(&g.to_explicit_spec()).unwrap();
        assert!(g.structural_eq(&again));
    }
}
