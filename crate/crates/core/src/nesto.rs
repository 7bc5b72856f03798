//! Connected building sets, nested set complexes and the canonical
//! characteristic matrix of the associated real toric manifold.
//!
//! Building sets come in two flavours. [`BuildingSet`] stores every member and
//! is used whenever the family is small enough to list. [`GeneratedBuildingSet`]
//! keeps only the generators and answers membership queries on the fly; it is
//! what makes the doubled Moore pipeline tractable.

use std::collections::{HashSet, VecDeque};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{maximal_sets, minimal_sets, numeric_labels, Face, SimplicialComplex, MAX_VERTICES};
use crate::error::{Error, Result};
use crate::linalg::Gf2Matrix;

/// Default cap on the number of members of an explicitly listed building set.
pub const DEFAULT_MEMBER_CAP: usize = 2_000_000;

/// Membership oracle for a connected building set on `{0, …, ground-1}`.
pub trait BuildingFamily: Sync {
    fn ground(&self) -> usize;
    fn ground_labels(&self) -> &[String];
    fn contains(&self, x: Face) -> bool;
    /// The maximal members contained in `x`; they partition `x`.
    fn components(&self, x: Face) -> Vec<Face>;

    fn full(&self) -> Face {
        Face::full(self.ground())
    }
}

/// Label of a member: the ground labels concatenated when they are all single
/// characters (`"13"`), joined by `+` otherwise.
pub fn member_label(labels: &[String], x: Face) -> String {
    let parts: Vec<&str> = x.iter().map(|i| labels[i].as_str()).collect();
    if parts.iter().all(|p| p.chars().count() == 1) {
        parts.concat()
    } else {
        parts.join("+")
    }
}

fn check_ground(ground: usize, labels: &[String]) -> Result<()> {
    if ground == 0 {
        return Err(Error::invalid("a building set needs a nonempty ground set"));
    }
    if ground > MAX_VERTICES {
        return Err(Error::cap(format!("ground set of size {ground} exceeds the cap of {MAX_VERTICES}")));
    }
    if labels.len() != ground {
        return Err(Error::invalid("ground label count differs from the ground set size"));
    }
    Ok(())
}

/// Non-singleton generators, deduplicated.
fn proper_generators(generators: &[Face]) -> Vec<Face> {
    let mut g: Vec<Face> = generators.iter().copied().filter(|x| x.len() >= 2).collect();
    g.sort_unstable();
    g.dedup();
    g
}

/// An explicitly listed connected building set.
#[derive(Clone, Debug)]
pub struct BuildingSet {
    ground: usize,
    labels: Vec<String>,
    members: Vec<Face>,
    index: HashSet<Face>,
}

impl BuildingSet {
    /// The connected building set generated by `generators` on `{0, …, ground-1}`.
    /// The generators must cover the ground set.
    pub fn closure(generators: &[Face], ground: usize) -> Result<Self> {
        let cover = generators.iter().fold(Face::EMPTY, |a, g| a.union(*g));
        if ground > MAX_VERTICES {
            return Err(Error::cap(format!("ground set of size {ground} exceeds the cap of {MAX_VERTICES}")));
        }
        if cover != Face::full(ground) {
            return Err(Error::invalid("the generators do not cover the ground set"));
        }
        Self::closure_with(generators, numeric_labels(ground), DEFAULT_MEMBER_CAP)
    }

    /// Closure without the covering requirement: singletons and the full set
    /// are adjoined regardless.
    pub fn closure_with(generators: &[Face], labels: Vec<String>, cap: usize) -> Result<Self> {
        let ground = labels.len();
        check_ground(ground, &labels)?;
        let full = Face::full(ground);
        if let Some(g) = generators.iter().find(|g| !g.is_subset_of(full) || g.is_empty()) {
            return Err(Error::invalid(format!("generator {g:?} is empty or leaves the ground set")));
        }
        let gens = proper_generators(generators);
        let mut index: HashSet<Face> = (0..ground).map(Face::singleton).collect();
        index.insert(full);
        let mut queue: VecDeque<Face> = VecDeque::new();
        for &g in &gens {
            if index.insert(g) {
                queue.push_back(g);
            }
        }
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                if g.intersects(x) && !g.is_subset_of(x) {
                    let y = x.union(g);
                    if index.insert(y) {
                        if index.len() > cap {
                            return Err(Error::cap(format!(
                                "building set has more than {cap} members (member cap)"
                            )));
                        }
                        queue.push_back(y);
                    }
                }
            }
        }
        let mut members: Vec<Face> = index.iter().copied().collect();
        members.sort_unstable();
        Ok(BuildingSet { ground, labels, members, index })
    }

    /// `B(K)`: generated by the minimal non-faces of `K`, labelled like `K`.
    pub fn of_complex(k: &SimplicialComplex) -> Result<Self> {
        Self::of_complex_with_cap(k, DEFAULT_MEMBER_CAP)
    }

    pub fn of_complex_with_cap(k: &SimplicialComplex, cap: usize) -> Result<Self> {
        Self::closure_with(k.minimal_nonfaces(), k.labels().to_vec(), cap)
    }

    /// Validate an explicit member list against the building set axioms.
    pub fn from_members(members: Vec<Face>, labels: Vec<String>) -> Result<Self> {
        let ground = labels.len();
        check_ground(ground, &labels)?;
        let full = Face::full(ground);
        let index: HashSet<Face> = members.iter().copied().collect();
        if index.len() != members.len() {
            return Err(Error::invalid("building set lists a member twice"));
        }
        for x in &members {
            if x.is_empty() || !x.is_subset_of(full) {
                return Err(Error::invalid(format!("member {x:?} is empty or leaves the ground set")));
            }
        }
        for i in 0..ground {
            if !index.contains(&Face::singleton(i)) {
                return Err(Error::invalid(format!("singleton {{{}}} is missing", labels[i])));
            }
        }
        if !index.contains(&full) {
            return Err(Error::invalid("the full ground set is missing (building set not connected)"));
        }
        for (a_pos, a) in members.iter().enumerate() {
            for b in &members[a_pos + 1..] {
                if a.intersects(*b) && !index.contains(&a.union(*b)) {
                    return Err(Error::invalid(format!(
                        "members {} and {} intersect but their union is missing",
                        member_label(&labels, *a),
                        member_label(&labels, *b)
                    )));
                }
            }
        }
        let mut members = members;
        members.sort_unstable();
        Ok(BuildingSet { ground, labels, members, index })
    }

    pub fn members(&self) -> &[Face] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members other than the full set, in canonical order: the vertices of
    /// the nested set complex and the columns of the canonical matrix.
    pub fn proper_members(&self) -> Vec<Face> {
        let full = self.full();
        self.members.iter().copied().filter(|x| *x != full).collect()
    }

    pub fn to_json_value(&self) -> BuildingSetJson {
        BuildingSetJson {
            ground: self.ground,
            members: self.members.iter().map(|x| x.iter().map(|i| i + 1).collect()).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("building set serialisation")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v: BuildingSetJson = serde_json::from_str(text)?;
        if v.ground > MAX_VERTICES {
            return Err(Error::cap(format!("ground set of size {} exceeds the cap of {MAX_VERTICES}", v.ground)));
        }
        let mut members = Vec::with_capacity(v.members.len());
        for m in &v.members {
            let mut x = Face::EMPTY;
            for &i in m {
                if i == 0 || i > v.ground {
                    return Err(Error::invalid(format!("member element {i} outside 1..={}", v.ground)));
                }
                x = x.with(i - 1);
            }
            members.push(x);
        }
        Self::from_members(members, numeric_labels(v.ground))
    }
}

impl BuildingFamily for BuildingSet {
    fn ground(&self) -> usize {
        self.ground
    }

    fn ground_labels(&self) -> &[String] {
        &self.labels
    }

    fn contains(&self, x: Face) -> bool {
        self.index.contains(&x)
    }

    fn components(&self, x: Face) -> Vec<Face> {
        let mut out = Vec::new();
        let mut covered = Face::EMPTY;
        for m in self.members.iter().rev() {
            if m.is_subset_of(x) && !m.intersects(covered) {
                covered = covered.union(*m);
                out.push(*m);
                if covered == x {
                    break;
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// A connected building set known only through its generators.
///
/// `X` is a member iff it is a singleton, the full set, or the union of a
/// connected family of generators contained in `X`.
#[derive(Clone, Debug)]
pub struct GeneratedBuildingSet {
    ground: usize,
    labels: Vec<String>,
    generators: Vec<Face>,
}

impl GeneratedBuildingSet {
    pub fn new(generators: &[Face], labels: Vec<String>) -> Result<Self> {
        let ground = labels.len();
        check_ground(ground, &labels)?;
        let full = Face::full(ground);
        if let Some(g) = generators.iter().find(|g| !g.is_subset_of(full) || g.is_empty()) {
            return Err(Error::invalid(format!("generator {g:?} is empty or leaves the ground set")));
        }
        Ok(GeneratedBuildingSet { ground, labels, generators: proper_generators(generators) })
    }

    /// `B(K)` given implicitly by the minimal non-faces of `K`.
    pub fn of_complex(k: &SimplicialComplex) -> Result<Self> {
        Self::new(k.minimal_nonfaces(), k.labels().to_vec())
    }

    pub fn generators(&self) -> &[Face] {
        &self.generators
    }

    /// List every member; fails beyond `cap` members.
    pub fn enumerate(&self, cap: usize) -> Result<BuildingSet> {
        BuildingSet::closure_with(&self.generators, self.labels.clone(), cap)
    }

    /// Unions of the connected components of the generators inside `x`.
    fn generator_components(&self, x: Face) -> Vec<Face> {
        let mut pool: Vec<Face> = self.generators.iter().copied().filter(|g| g.is_subset_of(x)).collect();
        let mut out = Vec::new();
        while let Some(seed) = pool.pop() {
            let mut comp = seed;
            loop {
                let before = pool.len();
                pool.retain(|g| {
                    if g.intersects(comp) {
                        comp = comp.union(*g);
                        false
                    } else {
                        true
                    }
                });
                if pool.len() == before {
                    break;
                }
            }
            out.push(comp);
        }
        out
    }
}

impl BuildingFamily for GeneratedBuildingSet {
    fn ground(&self) -> usize {
        self.ground
    }

    fn ground_labels(&self) -> &[String] {
        &self.labels
    }

    fn contains(&self, x: Face) -> bool {
        if x.is_empty() || !x.is_subset_of(self.full()) {
            return false;
        }
        x.len() == 1 || x == self.full() || self.generator_components(x).contains(&x)
    }

    fn components(&self, x: Face) -> Vec<Face> {
        if x == self.full() {
            return vec![x];
        }
        let mut out = self.generator_components(x);
        let covered = out.iter().fold(Face::EMPTY, |a, c| a.union(*c));
        out.extend(x.difference(covered).iter().map(Face::singleton));
        out.sort_unstable();
        out
    }
}

/// Wire format `{"ground": n, "members": [[1], [1, 3], ...]}` with 1-based elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildingSetJson {
    pub ground: usize,
    pub members: Vec<Vec<usize>>,
}

/// Whether `sets` (members other than the full set) form a nested set.
pub fn is_nested<F: BuildingFamily + ?Sized>(family: &F, sets: &[Face]) -> bool {
    let full = family.full();
    if sets.iter().any(|s| *s == full || !family.contains(*s)) {
        return false;
    }
    (0..sets.len()).all(|k| compatible(family, sets[k], &sets[..k]))
}

/// Can `x` join the nested set `chosen`?
fn compatible<F: BuildingFamily + ?Sized>(family: &F, x: Face, chosen: &[Face]) -> bool {
    // (N1) chain or disjoint
    if chosen
        .iter()
        .any(|j| j.intersects(x) && !j.is_subset_of(x) && !x.is_subset_of(*j))
    {
        return false;
    }
    // (N2) for disjoint collections through x
    let disjoint: Vec<Face> = chosen.iter().copied().filter(|j| !j.intersects(x)).collect();
    !disjoint_union_hits(family, x, &disjoint, 0)
}

fn disjoint_union_hits<F: BuildingFamily + ?Sized>(family: &F, acc: Face, pool: &[Face], start: usize) -> bool {
    for k in start..pool.len() {
        if pool[k].intersects(acc) {
            continue;
        }
        let next = acc.union(pool[k]);
        if family.contains(next) || disjoint_union_hits(family, next, pool, k + 1) {
            return true;
        }
    }
    false
}

/// The nested set complex `Δ_B` on the proper members in canonical order,
/// found by backtracking over nested sets.
pub fn nested_complex(b: &BuildingSet) -> Result<SimplicialComplex> {
    let vertices = b.proper_members();
    nested_complex_on(b, &vertices)
}

/// The full subcomplex of `Δ_B` on the given members (which must be proper members).
pub fn nested_complex_on<F: BuildingFamily + ?Sized>(family: &F, vertices: &[Face]) -> Result<SimplicialComplex> {
    if vertices.len() > MAX_VERTICES {
        return Err(Error::cap(format!(
            "nested complex would have {} vertices, cap is {MAX_VERTICES}",
            vertices.len()
        )));
    }
    let full = family.full();
    if let Some(v) = vertices.iter().find(|v| **v == full || !family.contains(**v)) {
        return Err(Error::invalid(format!("{v:?} is not a proper member of the building set")));
    }
    let labels: Vec<String> = vertices.iter().map(|x| member_label(family.ground_labels(), *x)).collect();
    let mut facets = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    let mut chosen_sets: Vec<Face> = Vec::new();
    fn dfs<F: BuildingFamily + ?Sized>(
        family: &F,
        vertices: &[Face],
        start: usize,
        chosen: &mut Vec<usize>,
        chosen_sets: &mut Vec<Face>,
        facets: &mut Vec<Face>,
    ) {
        let mut extended = false;
        for k in start..vertices.len() {
            if compatible(family, vertices[k], chosen_sets) {
                extended = true;
                chosen.push(k);
                chosen_sets.push(vertices[k]);
                dfs(family, vertices, k + 1, chosen, chosen_sets, facets);
                chosen.pop();
                chosen_sets.pop();
            }
        }
        if !extended {
            let maximal = (0..start.min(vertices.len()))
                .filter(|k| !chosen.contains(k))
                .all(|k| !compatible(family, vertices[k], chosen_sets));
            if maximal {
                facets.push(Face::from_indices(chosen.iter().copied()));
            }
        }
    }
    dfs(family, vertices, 0, &mut chosen, &mut chosen_sets, &mut facets);
    facets.retain(|f| !f.is_empty());
    SimplicialComplex::new(labels, facets)
}

/// Every maximal nested set, enumerated through B-trees (root choice and
/// recursion into the components of the remainder).
pub fn maximal_nested_sets<F: BuildingFamily + ?Sized>(family: &F, cap: usize) -> Result<Vec<Vec<Face>>> {
    fn below<F: BuildingFamily + ?Sized>(family: &F, c: Face, cap: usize) -> Result<Vec<Vec<Face>>> {
        if c.len() == 1 {
            return Ok(vec![Vec::new()]);
        }
        let mut out = Vec::new();
        for r in c.iter() {
            let mut partial: Vec<Vec<Face>> = vec![Vec::new()];
            for d in family.components(c.without(r)) {
                let subs = below(family, d, cap)?;
                let mut next = Vec::with_capacity(partial.len() * subs.len());
                for p in &partial {
                    for s in &subs {
                        let mut v = p.clone();
                        v.push(d);
                        v.extend_from_slice(s);
                        next.push(v);
                    }
                }
                if next.len() > cap {
                    return Err(Error::cap(format!("more than {cap} maximal nested sets")));
                }
                partial = next;
            }
            out.extend(partial);
            if out.len() > cap {
                return Err(Error::cap(format!("more than {cap} maximal nested sets")));
            }
        }
        Ok(out)
    }
    let mut all = below(family, family.full(), cap)?;
    for s in &mut all {
        s.sort_unstable();
    }
    Ok(all)
}

/// One maximal nested set from a random B-tree.
pub fn random_maximal_nested_set<F: BuildingFamily + ?Sized, R: Rng>(family: &F, rng: &mut R) -> Vec<Face> {
    let mut out = Vec::new();
    let mut stack = vec![family.full()];
    while let Some(c) = stack.pop() {
        if c.len() == 1 {
            continue;
        }
        let elems = c.indices();
        let r = elems[rng.gen_range(0..elems.len())];
        for d in family.components(c.without(r)) {
            out.push(d);
            stack.push(d);
        }
    }
    out.sort_unstable();
    out
}

/// Column of the canonical characteristic matrix for a member `x` of a
/// building set on `n + 1` elements: the GF(2) sum of `v_i` for `i ∈ x`, where
/// `v_1, …, v_n` are the coordinate vectors and `v_{n+1}` is their sum.
pub fn lambda_column(x: Face, n: usize) -> Face {
    let low = x.intersection(Face::full(n));
    if x.contains(n) {
        Face(low.0 ^ Face::full(n).0)
    } else {
        low
    }
}

/// The `n × (|B| - 1)` canonical characteristic matrix, columns in the order
/// of [`BuildingSet::proper_members`].
pub fn canonical_lambda(b: &BuildingSet) -> Gf2Matrix {
    let n = b.ground() - 1;
    let cols = b.proper_members();
    let mut m = Gf2Matrix::zeros(n, cols.len());
    for (j, x) in cols.iter().enumerate() {
        for i in lambda_column(*x, n).iter() {
            m.set(i, j, true);
        }
    }
    m
}

/// Whether the canonical columns of `sets` are linearly independent.
pub fn columns_independent(sets: &[Face], n: usize) -> bool {
    let mut basis: Vec<u128> = Vec::new();
    for x in sets {
        let mut v = lambda_column(*x, n).0;
        for b in &basis {
            let top = 127 - b.leading_zeros();
            if v >> top & 1 == 1 {
                v ^= b;
            }
        }
        if v == 0 {
            return false;
        }
        basis.push(v);
        basis.sort_unstable_by(|a, b| b.cmp(a));
    }
    true
}

/// Replace every ground element `i` by its two copies `2i, 2i+1`, matching
/// the vertex order of `K(2, …, 2)`.
pub fn double(x: Face) -> Face {
    x.iter().fold(Face::EMPTY, |acc, i| acc.with(2 * i).with(2 * i + 1))
}

/// Check that `B(K') ∖ S'` is the doubled image of `B(K) ∖ S` and that every
/// such member has even cardinality. Returns the bijection in canonical order.
pub fn doubling_map(bk: &BuildingSet, bk_doubled: &BuildingSet) -> Result<Vec<(Face, Face)>> {
    if bk_doubled.ground() != 2 * bk.ground() {
        return Err(Error::Consistency(format!(
            "doubled building set has ground {} instead of {}",
            bk_doubled.ground(),
            2 * bk.ground()
        )));
    }
    let pairs: Vec<(Face, Face)> = bk
        .members()
        .iter()
        .filter(|x| x.len() >= 2)
        .map(|x| (*x, double(*x)))
        .collect();
    let image: HashSet<Face> = pairs.iter().map(|p| p.1).collect();
    for y in bk_doubled.members().iter().filter(|y| y.len() >= 2) {
        if y.len() % 2 != 0 {
            return Err(Error::Consistency(format!(
                "member {} of the doubled building set has odd cardinality",
                member_label(bk_doubled.ground_labels(), *y)
            )));
        }
        if !image.contains(y) {
            return Err(Error::Consistency(format!(
                "member {} is not the double of a member",
                member_label(bk_doubled.ground_labels(), *y)
            )));
        }
    }
    if let Some((x, _)) = pairs.iter().find(|p| !bk_doubled.contains(p.1)) {
        return Err(Error::Consistency(format!(
            "double of {} is missing from the doubled building set",
            member_label(bk.ground_labels(), *x)
        )));
    }
    Ok(pairs)
}

/// `Δ_B|_S` on the singleton members, computed from the full nested complex
/// and relabelled `{i} ↦ i`.
pub fn singleton_restriction(b: &BuildingSet) -> Result<SimplicialComplex> {
    let delta = nested_complex(b)?;
    let vertices = b.proper_members();
    let omega = Face::from_indices(vertices.iter().enumerate().filter(|(_, x)| x.len() == 1).map(|(k, _)| k));
    let restricted = delta.full_subcomplex(omega);
    restricted.reorder(b.ground_labels())
}

/// `Δ_B|_S` straight from the family: a set of singletons is nested iff no
/// two or more of them have a union in `B`, so the minimal non-faces are the
/// minimal members with at least two elements.
pub fn singleton_restriction_fast(members_of_size_two_or_more: &[Face], labels: Vec<String>) -> Result<SimplicialComplex> {
    let nonfaces = minimal_sets(members_of_size_two_or_more.iter().copied().filter(|x| x.len() >= 2).collect());
    SimplicialComplex::from_nonfaces(labels, nonfaces)
}

/// [`singleton_restriction_fast`] for a generated family: its minimal members
/// of size at least two are the minimal generators together with the full set.
pub fn singleton_restriction_generated(b: &GeneratedBuildingSet) -> Result<SimplicialComplex> {
    let mut gens = b.generators().to_vec();
    if b.ground() >= 2 {
        gens.push(b.full());
    }
    singleton_restriction_fast(&gens, b.ground_labels().to_vec())
}

/// Maximal members strictly inside `x`, used for diagnostics.
pub fn maximal_proper_members(b: &BuildingSet, x: Face) -> Vec<Face> {
    maximal_sets(b.members().iter().copied().filter(|m| m.is_subset_of(x) && *m != x).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::named::*;

    fn f(ix: &[usize]) -> Face {
        Face::from_indices(ix.iter().map(|i| i - 1))
    }

    fn listed(b: &BuildingSet) -> Vec<String> {
        b.members().iter().map(|x| member_label(b.ground_labels(), *x)).collect()
    }

    #[test]
    fn closure_of_square_nonfaces() {
        let b = BuildingSet::closure(&[f(&[1, 3]), f(&[2, 4])], 4).unwrap();
        assert_eq!(listed(&b), ["1", "2", "3", "4", "13", "24", "1234"]);
        let c = BuildingSet::of_complex(&cycle(4)).unwrap();
        assert_eq!(c.members(), b.members());
    }

    #[test]
    fn closure_of_path_generators() {
        let b = BuildingSet::closure(&[f(&[1, 2]), f(&[2, 3]), f(&[3, 4])], 4).unwrap();
        assert_eq!(listed(&b), ["1", "2", "3", "4", "12", "23", "34", "123", "234", "1234"]);
        assert!(BuildingSet::closure(&[f(&[1, 2])], 4).is_err());
        let trivial = BuildingSet::closure(&[Face::full(3)], 3).unwrap();
        assert_eq!(listed(&trivial), ["1", "2", "3", "123"]);
    }

    #[test]
    fn octahedron() {
        let b = BuildingSet::of_complex(&cycle(4)).unwrap();
        let d = nested_complex(&b).unwrap();
        assert_eq!(d.labels(), &["1", "2", "3", "4", "13", "24"]);
        assert_eq!(d.f_vector_and_euler().unwrap(), (vec![6, 12, 8], 2));
        let mnf: Vec<Vec<String>> = d.minimal_nonfaces().iter().map(|x| d.face_labels(*x)).collect();
        assert_eq!(mnf, vec![vec!["1", "3"], vec!["2", "4"], vec!["13", "24"]]);
        let lambda = canonical_lambda(&b);
        assert_eq!(lambda.num_rows(), 3);
        // λ(13) = λ(24) = (1,0,1)
        assert_eq!(lambda.column(4), lambda.column(5));
        assert_eq!(lambda.column(4).ones().collect::<Vec<_>>(), vec![0, 2]);
        assert!(d.facets().iter().all(|fc| {
            let sets: Vec<Face> = fc.iter().map(|k| b.proper_members()[k]).collect();
            columns_independent(&sets, 3)
        }));
    }

    #[test]
    fn b_tree_enumeration_matches_backtracking() {
        for b in [
            BuildingSet::closure(&[f(&[1, 2]), f(&[2, 3]), f(&[3, 4])], 4).unwrap(),
            BuildingSet::of_complex(&cycle(5)).unwrap(),
            BuildingSet::of_complex(&rp2_6()).unwrap(),
        ] {
            let d = nested_complex(&b).unwrap();
            let verts = b.proper_members();
            let mut from_trees: Vec<Face> = maximal_nested_sets(&b, 1 << 20)
                .unwrap()
                .into_iter()
                .map(|s| Face::from_indices(s.iter().map(|x| verts.iter().position(|v| v == x).unwrap())))
                .collect();
            from_trees.sort_unstable();
            let before = from_trees.len();
            from_trees.dedup();
            assert_eq!(before, from_trees.len(), "B-trees give distinct nested sets");
            assert_eq!(d.facets(), from_trees.as_slice());
        }
    }

    #[test]
    fn generated_family_agrees_with_listing() {
        let k = rp2_6();
        let listed = BuildingSet::of_complex(&k).unwrap();
        let implicit = GeneratedBuildingSet::of_complex(&k).unwrap();
        for bits in 1u128..64 {
            let x = Face(bits);
            assert_eq!(listed.contains(x), implicit.contains(x), "{x:?}");
            assert_eq!(listed.components(x), implicit.components(x), "{x:?}");
        }
        assert_eq!(implicit.enumerate(1000).unwrap().members(), listed.members());
    }

    #[test]
    fn singleton_restrictions() {
        for k in [cycle(4), cycle(5), simplex_boundary(2), rp2_6()] {
            let b = BuildingSet::of_complex(&k).unwrap();
            assert_eq!(singleton_restriction(&b).unwrap(), k);
            let g = GeneratedBuildingSet::of_complex(&k).unwrap();
            assert_eq!(singleton_restriction_generated(&g).unwrap(), k);
        }
    }

    #[test]
    fn doubling() {
        let k = cycle(4);
        let kd = k.multi_wedge(&[2; 4]).unwrap();
        let b = BuildingSet::of_complex(&k).unwrap();
        let bd = BuildingSet::of_complex(&kd).unwrap();
        let map = doubling_map(&b, &bd).unwrap();
        let shown: Vec<(String, String)> = map
            .iter()
            .map(|(x, y)| (member_label(b.ground_labels(), *x), member_label(bd.ground_labels(), *y)))
            .collect();
        assert_eq!(shown[0], ("13".into(), "1_1+1_2+3_1+3_2".into()));
        assert_eq!(shown[1], ("24".into(), "2_1+2_2+4_1+4_2".into()));
        let t = BuildingSet::of_complex(&simplex_boundary(2)).unwrap();
        let td = BuildingSet::of_complex(&simplex_boundary(2).multi_wedge(&[2; 3]).unwrap()).unwrap();
        assert_eq!(doubling_map(&t, &td).unwrap(), vec![(Face::full(3), Face::full(6))]);
        assert!(doubling_map(&b, &t).is_err());
    }

    #[test]
    fn json_round_trip_and_axioms() {
        let b = BuildingSet::of_complex(&cycle(4)).unwrap();
        let text = b.to_json();
        assert_eq!(text, r#"{"ground":4,"members":[[1],[2],[3],[4],[1,3],[2,4],[1,2,3,4]]}"#);
        assert_eq!(BuildingSet::from_json(&text).unwrap().members(), b.members());
        assert!(BuildingSet::from_json(r#"{"ground":3,"members":[[1],[2],[3]]}"#).is_err());
        assert!(BuildingSet::from_json(r#"{"ground":3,"members":[[1],[2],[3],[1,2],[2,3],[1,2,3]]}"#).is_ok());
        assert!(BuildingSet::from_json(r#"{"ground":4,"members":[[1],[2],[3],[4],[1,2],[2,3],[1,2,3,4]]}"#).is_err());
    }

    #[test]
    fn trivial_building_set_gives_simplex_boundary() {
        let b = BuildingSet::closure(&[Face::full(4)], 4).unwrap();
        let d = nested_complex(&b).unwrap();
        assert_eq!(d.facets().len(), 4);
        assert_eq!(d.minimal_nonfaces(), &[Face::full(4)]);
    }
}
