//! Finite groups as dense multiplication tables.
//!
//! Elements are indices `0..N`. Groups generated by permutations multiply as
//! composition of maps, `(g·h)(x) = g(h(x))`.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::cocycles::Cocycle2;
use crate::error::{Error, Result};

pub const DEFAULT_ORDER_CAP: usize = 10_000;
/// Groups up to this order get an exhaustive associativity check.
pub const DEFAULT_ASSOC_BOUND: usize = 256;

/// A permutation of `0..n`, stored as its image vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(Error::NotAPermutation { index: 0, degree: n });
            }
        }
        Ok(Perm(images))
    }

    /// Parses cycle notation such as `"(0 1 2)(3 4)"`; `"()"` or `""` is the identity.
    pub fn parse_cycles(s: &str, degree: usize) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("bad cycle notation {s:?} for degree {degree}"));
        let mut images: Vec<usize> = (0..degree).collect();
        let mut seen = vec![false; degree];
        let mut rest = s.trim();
        while !rest.is_empty() {
            let body_end = rest.find(')').ok_or_else(bad)?;
            if !rest.starts_with('(') {
                return Err(bad());
            }
            let body = &rest[1..body_end];
            let points: Vec<usize> = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().map_err(|_| bad()))
                .collect::<Result<_>>()?;
            for &p in &points {
                if p >= degree || std::mem::replace(&mut seen[p], true) {
                    return Err(bad());
                }
            }
            for (i, &p) in points.iter().enumerate() {
                images[p] = points[(i + 1) % points.len()];
            }
            rest = rest[body_end + 1..].trim_start();
        }
        Ok(Perm(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] == start {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut x = self.0[start];
            while x != start {
                seen[x] = true;
                cyc.push(x);
                x = self.0[x];
            }
            out.push(cyc);
        }
        out
    }

    pub fn fixed_points(&self) -> usize {
        self.0.iter().enumerate().filter(|(i, &x)| *i == x).count()
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(ToString::to_string).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
    /// Element indices that generate the group.
    generators: Vec<usize>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order {})", self.order)
    }
}

impl FiniteGroup {
    /// Closure of a set of permutations. Elements are numbered breadth-first from the
    /// identity, multiplying by generators in input order.
    pub fn from_generators(degree: usize, gens: &[Perm]) -> Result<(Self, Vec<Perm>)> {
        Self::from_generators_capped(degree, gens, DEFAULT_ORDER_CAP)
    }

    pub fn from_generators_capped(
        degree: usize,
        gens: &[Perm],
        cap: usize,
    ) -> Result<(Self, Vec<Perm>)> {
        for (index, g) in gens.iter().enumerate() {
            if g.degree() != degree {
                return Err(Error::NotAPermutation { index, degree });
            }
        }
        let id = Perm::identity(degree);
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Perm, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in gens {
                let x = g.compose(&elems[i]);
                if !index.contains_key(&x) {
                    if elems.len() >= cap {
                        return Err(Error::OrderCapExceeded(cap));
                    }
                    index.insert(x.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(x);
                }
            }
        }
        let n = elems.len();
        let mut table = vec![0usize; n * n];
        for (a, pa) in elems.iter().enumerate() {
            for (b, pb) in elems.iter().enumerate() {
                table[a * n + b] = index[&pa.compose(pb)];
            }
        }
        let inverses = elems.iter().map(|p| index[&p.inverse()]).collect();
        let generators = gens.iter().map(|g| index[g]).collect();
        Ok((
            FiniteGroup {
                order: n,
                table,
                identity: 0,
                inverses,
                generators,
            },
            elems,
        ))
    }

    /// Builds a group from an explicit multiplication table, validating the group law.
    pub fn from_table(rows: Vec<Vec<usize>>) -> Result<Self> {
        Self::from_table_checked(rows, DEFAULT_ASSOC_BOUND)
    }

    pub fn from_table_checked(rows: Vec<Vec<usize>>, assoc_bound: usize) -> Result<Self> {
        Self::from_table_inner(rows, Some(assoc_bound))
    }

    /// Table constructor for tables that are associative by construction.
    pub(crate) fn from_trusted_table(rows: Vec<Vec<usize>>) -> Result<Self> {
        Self::from_table_inner(rows, None)
    }

    fn from_table_inner(rows: Vec<Vec<usize>>, assoc_bound: Option<usize>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidGroupTable("empty table".into()));
        }
        if rows.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::InvalidGroupTable("table must be N×N with entries < N".into()));
        }
        let table: Vec<usize> = rows.into_iter().flatten().collect();
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e * n + x] == x && table[x * n + e] == x))
            .ok_or_else(|| Error::InvalidGroupTable("no identity element".into()))?;
        let mut inverses = vec![0; n];
        for (x, inv) in inverses.iter_mut().enumerate() {
            *inv = (0..n)
                .find(|&y| table[x * n + y] == identity && table[y * n + x] == identity)
                .ok_or_else(|| Error::InvalidGroupTable(format!("element {x} has no inverse")))?;
        }
        let mul = |a: usize, b: usize| table[a * n + b];
        let assoc = |a: usize, b: usize, c: usize| mul(mul(a, b), c) == mul(a, mul(b, c));
        let triple_fails = |a: usize, b: usize, c: usize| {
            Error::InvalidGroupTable(format!("associativity fails at ({a},{b},{c})"))
        };
        match assoc_bound {
            None => {}
            Some(bound) if n <= bound => {
                for a in 0..n {
                    for b in 0..n {
                        for c in 0..n {
                            if !assoc(a, b, c) {
                                return Err(triple_fails(a, b, c));
                            }
                        }
                    }
                }
            }
            Some(_) => {
                // deterministic LCG sample of triples
                let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
                let mut next = || {
                    state = state.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1);
                    ((state >> 33) as usize) % n
                };
                for _ in 0..200_000 {
                    let (a, b, c) = (next(), next(), next());
                    if !assoc(a, b, c) {
                        return Err(triple_fails(a, b, c));
                    }
                }
            }
        }
        let mut g = FiniteGroup {
            order: n,
            table,
            identity,
            inverses,
            generators: Vec::new(),
        };
        g.generators = g.greedy_generators();
        Ok(g)
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![self.identity];
        for x in 0..self.order {
            if !span.contains(&x) {
                gens.push(x);
                span = self.closure(&gens);
            }
        }
        gens
    }

    /// Subgroup generated by the given elements, sorted.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order];
        inside[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(g, x);
                if !inside[y] {
                    inside[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order).filter(|&x| inside[x]).collect()
    }

    pub fn trivial() -> Self {
        FiniteGroup {
            order: 1,
            table: vec![0],
            identity: 0,
            inverses: vec![0],
            generators: Vec::new(),
        }
    }

    pub fn cyclic(n: usize) -> Self {
        let rows = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(rows).expect("cyclic table is a group")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(a) } else { a };
        (0..k.unsigned_abs()).fold(self.identity, |acc, _| self.mul(acc, base))
    }

    pub fn conjugate(&self, x: usize, by: usize) -> usize {
        self.mul(self.mul(by, x), self.inv(by))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        (0..self.order).fold(1, |acc, g| num_integer::lcm(acc, self.element_order(g)))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Sorted list of element orders.
    pub fn order_statistics(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.order).map(|g| self.element_order(g)).collect();
        v.sort_unstable();
        v
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    /// Conjugacy classes; the identity class comes first, the rest ordered by smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut class_of = vec![usize::MAX; self.order];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let starts = std::iter::once(self.identity).chain(0..self.order);
        for x in starts {
            if class_of[x] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut members: Vec<usize> = (0..self.order).map(|g| self.conjugate(x, g)).collect();
            members.sort_unstable();
            members.dedup();
            for &m in &members {
                class_of[m] = id;
            }
            classes.push(members);
        }
        classes
    }

    /// Right coset representatives `J` for `H\G`, identity first.
    pub fn right_transversal(&self, h: &Subgroup) -> Result<Vec<usize>> {
        if h.parent.as_ref() != self {
            return Err(Error::NotASubgroup("subgroup of a different group".into()));
        }
        let mut covered = vec![false; self.order];
        let mut reps = Vec::new();
        for g in std::iter::once(self.identity).chain(0..self.order) {
            if covered[g] {
                continue;
            }
            reps.push(g);
            for &x in &h.elements {
                covered[self.mul(x, g)] = true;
            }
        }
        Ok(reps)
    }
}

/// A subgroup, as a sorted set of element indices of its parent.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    elements: Vec<usize>,
}

impl Subgroup {
    pub fn new(parent: Arc<FiniteGroup>, mut elements: Vec<usize>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        if elements.iter().any(|&x| x >= parent.order()) {
            return Err(Error::NotASubgroup("element out of range".into()));
        }
        if elements.binary_search(&parent.identity()).is_err() {
            return Err(Error::NotASubgroup("identity missing".into()));
        }
        for &a in &elements {
            if elements.binary_search(&parent.inv(a)).is_err() {
                return Err(Error::NotASubgroup(format!("inverse of {a} missing")));
            }
            for &b in &elements {
                if elements.binary_search(&parent.mul(a, b)).is_err() {
                    return Err(Error::NotASubgroup(format!("product {a}·{b} missing")));
                }
            }
        }
        Ok(Subgroup { parent, elements })
    }

    pub fn whole(parent: Arc<FiniteGroup>) -> Self {
        let elements = (0..parent.order()).collect();
        Subgroup { parent, elements }
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn is_whole(&self) -> bool {
        self.elements.len() == self.parent.order()
    }

    /// Position of a parent element inside the subgroup's own numbering.
    pub fn local_index(&self, g: usize) -> Option<usize> {
        self.elements.binary_search(&g).ok()
    }

    /// The subgroup as a standalone group; local index `i` is parent element `elements[i]`.
    pub fn as_group(&self) -> FiniteGroup {
        let rows = self
            .elements
            .iter()
            .map(|&a| {
                self.elements
                    .iter()
                    .map(|&b| self.local_index(self.parent.mul(a, b)).expect("closed"))
                    .collect()
            })
            .collect();
        FiniteGroup::from_trusted_table(rows).expect("subgroup table is a group")
    }

    /// `g H g^{-1}`.
    pub fn conjugate_by(&self, g: usize) -> Subgroup {
        let mut elements: Vec<usize> = self.elements.iter().map(|&x| self.parent.conjugate(x, g)).collect();
        elements.sort_unstable();
        Subgroup {
            parent: Arc::clone(&self.parent),
            elements,
        }
    }
}

/// A central extension `1 → μ_d → Ḡ → G → 1` built from a 2-cocycle.
///
/// Element `(g, j)` of `Ḡ` has index `g·d + j` and the law is
/// `(g,j)(h,k) = (gh, j + k + α(g,h) mod d)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CentralExt {
    base: Arc<FiniteGroup>,
    bar: Arc<FiniteGroup>,
    d: usize,
    cocycle: Cocycle2,
    proj: Vec<usize>,
    section: Vec<usize>,
    center_gen: usize,
}

impl CentralExt {
    pub fn new(cocycle: &Cocycle2) -> Result<Self> {
        cocycle.validate()?;
        let base = Arc::clone(cocycle.group());
        let d = cocycle.modulus();
        let n = base.order();
        let big = n * d;
        let rows: Vec<Vec<usize>> = (0..big)
            .map(|x| {
                let (g, j) = (x / d, x % d);
                (0..big)
                    .map(|y| {
                        let (h, k) = (y / d, y % d);
                        base.mul(g, h) * d + (j + k + cocycle.value(g, h) as usize) % d
                    })
                    .collect()
            })
            .collect();
        let mut bar = FiniteGroup::from_trusted_table(rows)?;
        let c = cocycle.value(base.identity(), base.identity()) as usize;
        let e = base.identity();
        let center_gen = e * d + (1 + d - c % d) % d;
        let proj = (0..big).map(|x| x / d).collect();
        let section: Vec<usize> = (0..n).map(|g| g * d).collect();
        let mut gens: Vec<usize> = base.generators().iter().map(|&g| section[g]).collect();
        if d > 1 {
            gens.push(center_gen);
        }
        bar.generators = gens;
        let ext = CentralExt {
            base,
            bar: Arc::new(bar),
            d,
            cocycle: cocycle.clone(),
            proj,
            section,
            center_gen,
        };
        ext.verify()?;
        Ok(ext)
    }

    /// Exhaustively checks projection, kernel and the defining relation of the sections.
    pub fn verify(&self) -> Result<()> {
        let bar = &self.bar;
        let fail = |msg: &str| Err(Error::InvalidGroupTable(msg.to_string()));
        for x in 0..bar.order() {
            for y in 0..bar.order() {
                if self.proj[bar.mul(x, y)] != self.base.mul(self.proj[x], self.proj[y]) {
                    return fail("projection is not a homomorphism");
                }
            }
            if bar.mul(x, self.center_gen) != bar.mul(self.center_gen, x) {
                return fail("center generator is not central");
            }
        }
        if bar.element_order(self.center_gen) != self.d {
            return fail("center generator has wrong order");
        }
        let kernel: Vec<usize> = (0..bar.order()).filter(|&x| self.proj[x] == self.base.identity()).collect();
        if kernel != bar.closure(&[self.center_gen]) {
            return fail("kernel differs from the center subgroup");
        }
        for g in 0..self.base.order() {
            if self.proj[self.section[g]] != g {
                return fail("section is not a right inverse");
            }
            for h in 0..self.base.order() {
                let lhs = bar.mul(self.section[g], self.section[h]);
                let z = bar.pow(self.center_gen, i64::from(self.cocycle.value(g, h)));
                let rhs = bar.mul(self.section[self.base.mul(g, h)], z);
                if lhs != rhs {
                    return fail("section relation fails");
                }
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &Arc<FiniteGroup> {
        &self.base
    }

    pub fn bar(&self) -> &Arc<FiniteGroup> {
        &self.bar
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn cocycle(&self) -> &Cocycle2 {
        &self.cocycle
    }

    pub fn proj(&self, x: usize) -> usize {
        self.proj[x]
    }

    pub fn section(&self, g: usize) -> usize {
        self.section[g]
    }

    pub fn center_gen(&self) -> usize {
        self.center_gen
    }

    /// Index of `(g, j)`.
    pub fn pair(&self, g: usize, j: usize) -> usize {
        g * self.d + j % self.d
    }
}

pub fn central_extension(cocycle: &Cocycle2) -> Result<CentralExt> {
    CentralExt::new(cocycle)
}
