//! Finite abstract simplicial complexes on labelled vertices.
//!
//! A complex is stored by its facets, by its minimal non-faces, or both; the
//! missing description is derived lazily. Faces are bitmasks over vertex
//! indices, so a complex has at most [`MAX_VERTICES`] vertices.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported vertex count (faces are `u128` bitmasks).
pub const MAX_VERTICES: usize = 128;

/// Default cap on the number of faces materialised by face enumeration.
pub const DEFAULT_FACE_CAP: usize = 4_000_000;

/// A subset of vertex indices.
///
/// The [`Ord`] implementation is the canonical order used everywhere in the
/// crate: by cardinality first, then lexicographically on the ascending index
/// lists.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Face(pub u128);

impl Face {
    pub const EMPTY: Face = Face(0);

    pub fn singleton(i: usize) -> Face {
        debug_assert!(i < MAX_VERTICES);
        Face(1u128 << i)
    }

    /// The set `{0, …, m-1}`.
    pub fn full(m: usize) -> Face {
        if m >= MAX_VERTICES {
            Face(u128::MAX)
        } else {
            Face((1u128 << m) - 1)
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Face {
        indices.into_iter().fold(Face::EMPTY, |f, i| f.with(i))
    }

    pub fn bits(self) -> u128 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_VERTICES && self.0 >> i & 1 == 1
    }

    pub fn is_subset_of(self, other: Face) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: Face) -> bool {
        self.0 & other.0 != 0
    }

    pub fn union(self, other: Face) -> Face {
        Face(self.0 | other.0)
    }

    pub fn intersection(self, other: Face) -> Face {
        Face(self.0 & other.0)
    }

    pub fn difference(self, other: Face) -> Face {
        Face(self.0 & !other.0)
    }

    pub fn with(self, i: usize) -> Face {
        Face(self.0 | 1u128 << i)
    }

    pub fn without(self, i: usize) -> Face {
        Face(self.0 & !(1u128 << i))
    }

    pub fn min_index(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn max_index(self) -> Option<usize> {
        (self.0 != 0).then(|| 127 - self.0.leading_zeros() as usize)
    }

    /// Number of elements of `self` strictly below `i`.
    pub fn rank_of(self, i: usize) -> usize {
        (self.0 & ((1u128 << i) - 1)).count_ones() as usize
    }

    /// Ascending vertex indices.
    pub fn iter(self) -> FaceIter {
        FaceIter(self.0)
    }

    pub fn indices(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Re-index `self ⊆ domain` so that the k-th element of `domain` becomes `k`.
    pub fn compress(self, domain: Face) -> Face {
        let mut out = 0u128;
        for (k, i) in domain.iter().enumerate() {
            if self.contains(i) {
                out |= 1u128 << k;
            }
        }
        Face(out)
    }

    /// Inverse of [`Face::compress`].
    pub fn expand(self, domain: Face) -> Face {
        let mut out = 0u128;
        for (k, i) in domain.iter().enumerate() {
            if self.contains(k) {
                out |= 1u128 << i;
            }
        }
        Face(out)
    }
}

impl Ord for Face {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            let diff = self.0 ^ other.0;
            if diff == 0 {
                Ordering::Equal
            } else if self.0 & diff & diff.wrapping_neg() != 0 {
                // the smallest element of the symmetric difference is ours
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

impl PartialOrd for Face {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct FaceIter(u128);

impl Iterator for FaceIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for FaceIter {}

/// Keep only the inclusion-maximal sets, sorted canonically.
pub fn maximal_sets(mut sets: Vec<Face>) -> Vec<Face> {
    sets.sort_unstable_by(|a, b| b.cmp(a));
    sets.dedup();
    let mut kept: Vec<Face> = Vec::with_capacity(sets.len());
    for s in sets {
        if !kept.iter().any(|k| s.is_subset_of(*k)) {
            kept.push(s);
        }
    }
    kept.sort_unstable();
    kept
}

/// Keep only the inclusion-minimal sets, sorted canonically.
pub fn minimal_sets(mut sets: Vec<Face>) -> Vec<Face> {
    sets.sort_unstable();
    sets.dedup();
    let mut kept: Vec<Face> = Vec::with_capacity(sets.len());
    for s in sets {
        if !kept.iter().any(|k| k.is_subset_of(s)) {
            kept.push(s);
        }
    }
    kept
}

/// A finite simplicial complex on the vertex set `{0, …, m-1}` with string
/// labels. Every vertex is a face and the empty face is always present.
///
/// Immutable after construction; the lazily derived descriptions sit behind
/// [`OnceLock`], so a complex may be shared freely across threads.
#[derive(Clone)]
pub struct SimplicialComplex {
    labels: Vec<String>,
    facets: OnceLock<Vec<Face>>,
    minimal_nonfaces: OnceLock<Vec<Face>>,
}

fn check_labels(labels: &[String]) -> Result<()> {
    if labels.len() > MAX_VERTICES {
        return Err(Error::cap(format!(
            "{} vertices exceeds the vertex cap of {MAX_VERTICES}",
            labels.len()
        )));
    }
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(Error::invalid(format!("duplicate vertex label {l:?}")));
        }
    }
    Ok(())
}

impl SimplicialComplex {
    /// The complex `{∅}` on no vertices.
    pub fn empty() -> Self {
        Self::from_parts(Vec::new(), Some(Vec::new()), Some(Vec::new()))
    }

    fn from_parts(labels: Vec<String>, facets: Option<Vec<Face>>, mnf: Option<Vec<Face>>) -> Self {
        let k = SimplicialComplex {
            labels,
            facets: OnceLock::new(),
            minimal_nonfaces: OnceLock::new(),
        };
        if let Some(f) = facets {
            let _ = k.facets.set(f);
        }
        if let Some(n) = mnf {
            let _ = k.minimal_nonfaces.set(n);
        }
        k
    }

    /// Build from a facet list, which must be an antichain covering every vertex.
    pub fn new(labels: Vec<String>, facets: Vec<Face>) -> Result<Self> {
        check_labels(&labels)?;
        let m = labels.len();
        let all = Face::full(m);
        let mut facets = facets;
        facets.sort_unstable();
        facets.dedup();
        for f in &facets {
            if !f.is_subset_of(all) {
                return Err(Error::invalid(format!("facet {f:?} uses a vertex outside 0..{m}")));
            }
        }
        for (i, a) in facets.iter().enumerate() {
            for b in &facets[i + 1..] {
                if a.is_subset_of(*b) {
                    return Err(Error::invalid(format!(
                        "facet list is not an antichain: {a:?} lies in {b:?}"
                    )));
                }
            }
        }
        if facets == [Face::EMPTY] {
            facets.clear();
        }
        let covered = facets.iter().fold(Face::EMPTY, |acc, f| acc.union(*f));
        if covered != all {
            let missing = all.difference(covered).min_index().unwrap();
            return Err(Error::invalid(format!(
                "vertex {:?} lies in no facet",
                labels[missing]
            )));
        }
        Ok(Self::from_parts(labels, Some(facets), None))
    }

    /// Build from arbitrary generating faces; only the maximal ones are kept.
    pub fn from_generating_faces(labels: Vec<String>, faces: Vec<Face>) -> Result<Self> {
        let facets: Vec<Face> = maximal_sets(faces).into_iter().filter(|f| !f.is_empty()).collect();
        Self::new(labels, facets)
    }

    /// Build from a family of non-faces generating the Stanley–Reisner ideal;
    /// the minimal ones are kept. Facets are derived on demand.
    pub fn from_nonfaces(labels: Vec<String>, nonfaces: Vec<Face>) -> Result<Self> {
        check_labels(&labels)?;
        let all = Face::full(labels.len());
        for f in &nonfaces {
            if !f.is_subset_of(all) {
                return Err(Error::invalid(format!("non-face {f:?} uses a vertex out of range")));
            }
            if f.len() < 2 {
                return Err(Error::invalid(format!(
                    "non-face {f:?} has fewer than two vertices; every vertex must be a face"
                )));
            }
        }
        Ok(Self::from_parts(labels, None, Some(minimal_sets(nonfaces))))
    }

    /// Complex on vertices labelled `"1"`, …, `"m"`.
    pub fn with_numeric_labels(m: usize, facets: Vec<Face>) -> Result<Self> {
        Self::new(numeric_labels(m), facets)
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn vertex_set(&self) -> Face {
        Face::full(self.num_vertices())
    }

    /// Resolve a list of labels to a face.
    pub fn face_from_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<Face> {
        let mut f = Face::EMPTY;
        for l in labels {
            let i = self
                .vertex_index(l.as_ref())
                .ok_or_else(|| Error::invalid(format!("unknown vertex label {:?}", l.as_ref())))?;
            f = f.with(i);
        }
        Ok(f)
    }

    pub fn face_labels(&self, f: Face) -> Vec<String> {
        f.iter().map(|i| self.labels[i].clone()).collect()
    }

    /// Facets in canonical order. Empty for the complex `{∅}`.
    pub fn facets(&self) -> &[Face] {
        self.facets.get_or_init(|| {
            let mnf = self.minimal_nonfaces.get().expect("complex without any description");
            facets_from_nonfaces(self.num_vertices(), mnf)
        })
    }

    /// Inclusion-minimal non-faces in canonical order.
    pub fn minimal_nonfaces(&self) -> &[Face] {
        self.minimal_nonfaces.get_or_init(|| {
            let faces = self
                .face_set(usize::MAX)
                .expect("face enumeration without a cap cannot fail");
            let m = self.num_vertices();
            let mut found = HashSet::new();
            for &s in &faces {
                for v in 0..m {
                    if s.contains(v) {
                        continue;
                    }
                    let c = s.with(v);
                    if faces.contains(&c) || found.contains(&c) {
                        continue;
                    }
                    if c.iter().all(|u| faces.contains(&c.without(u))) {
                        found.insert(c);
                    }
                }
            }
            let mut out: Vec<Face> = found.into_iter().collect();
            out.sort_unstable();
            out
        })
    }

    /// Whether `s` is a face; bits outside the vertex range are an input error.
    pub fn is_face(&self, s: Face) -> Result<bool> {
        if !s.is_subset_of(self.vertex_set()) {
            return Err(Error::invalid(format!(
                "{s:?} is not a subset of the {} vertices",
                self.num_vertices()
            )));
        }
        Ok(self.contains_face(s))
    }

    /// Unchecked face test: sets reaching outside the vertex range are non-faces.
    pub fn contains_face(&self, s: Face) -> bool {
        if !s.is_subset_of(self.vertex_set()) {
            return false;
        }
        if let Some(mnf) = self.minimal_nonfaces.get() {
            return !mnf.iter().any(|n| n.is_subset_of(s));
        }
        s.is_empty() || self.facets().iter().any(|f| s.is_subset_of(*f))
    }

    pub fn dimension(&self) -> isize {
        self.facets().iter().map(|f| f.len() as isize - 1).max().unwrap_or(-1)
    }

    /// All faces including the empty face. Fails when more than `cap` faces exist.
    pub fn face_set(&self, cap: usize) -> Result<HashSet<Face>> {
        let mut out = HashSet::new();
        if self.minimal_nonfaces.get().is_some() && self.facets.get().is_none() {
            let m = self.num_vertices();
            let mut stack = vec![Face::EMPTY];
            while let Some(s) = stack.pop() {
                out.insert(s);
                if out.len() > cap {
                    return Err(face_cap_error(cap));
                }
                let start = s.max_index().map_or(0, |i| i + 1);
                for v in start..m {
                    let t = s.with(v);
                    if self.contains_face(t) {
                        stack.push(t);
                    }
                }
            }
            return Ok(out);
        }
        let estimate: f64 = self.facets().iter().map(|f| (f.len() as f64).exp2()).sum();
        if estimate > 4.0 * cap as f64 + 1.0 {
            return Err(face_cap_error(cap));
        }
        out.insert(Face::EMPTY);
        for &f in self.facets() {
            let mut sub = f.0;
            loop {
                out.insert(Face(sub));
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & f.0;
            }
            if out.len() > cap {
                return Err(face_cap_error(cap));
            }
        }
        Ok(out)
    }

    /// Faces grouped by cardinality: entry `k` holds the faces with `k`
    /// vertices (entry 0 is the empty face), each group sorted canonically.
    pub fn faces_by_size(&self, cap: usize) -> Result<Vec<Vec<Face>>> {
        let set = self.face_set(cap)?;
        let top = set.iter().map(|f| f.len()).max().unwrap_or(0);
        let mut groups = vec![Vec::new(); top + 1];
        for f in set {
            groups[f.len()].push(f);
        }
        for g in &mut groups {
            g.sort_unstable();
        }
        Ok(groups)
    }

    /// Number of faces per dimension (empty face excluded) and the Euler
    /// characteristic.
    pub fn f_vector_and_euler(&self) -> Result<(Vec<usize>, i64)> {
        let groups = self.faces_by_size(DEFAULT_FACE_CAP)?;
        let f: Vec<usize> = groups.iter().skip(1).map(|g| g.len()).collect();
        let chi = f
            .iter()
            .enumerate()
            .map(|(d, &n)| if d % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum();
        Ok((f, chi))
    }

    /// The full subcomplex on `omega`, with the labels of `omega` preserved in order.
    pub fn full_subcomplex(&self, omega: Face) -> SimplicialComplex {
        let omega = omega.intersection(self.vertex_set());
        if omega.is_empty() {
            return SimplicialComplex::empty();
        }
        let labels: Vec<String> = omega.iter().map(|i| self.labels[i].clone()).collect();
        if let Some(mnf) = self.minimal_nonfaces.get() {
            let restricted: Vec<Face> = mnf
                .iter()
                .filter(|n| n.is_subset_of(omega))
                .map(|n| n.compress(omega))
                .collect();
            let facets = self
                .facets
                .get()
                .map(|fs| restrict_facets(fs, omega));
            return Self::from_parts(labels, facets, Some(restricted));
        }
        let facets = restrict_facets(self.facets(), omega);
        Self::from_parts(labels, Some(facets), None)
    }

    /// `lk_K σ = { τ ∈ K | σ ∪ τ ∈ K, σ ∩ τ = ∅ }` on the vertices it uses.
    pub fn link(&self, sigma: Face) -> Result<SimplicialComplex> {
        if !self.is_face(sigma)? {
            return Err(Error::invalid(format!("{sigma:?} is not a face, its link is undefined")));
        }
        let pieces: Vec<Face> = self
            .facets()
            .iter()
            .filter(|f| sigma.is_subset_of(**f))
            .map(|f| f.difference(sigma))
            .collect();
        let support = pieces.iter().fold(Face::EMPTY, |a, f| a.union(*f));
        if support.is_empty() {
            return Ok(SimplicialComplex::empty());
        }
        let labels = support.iter().map(|i| self.labels[i].clone()).collect();
        let facets = maximal_sets(pieces.into_iter().map(|f| f.compress(support)).collect());
        Ok(Self::from_parts(labels, Some(facets), None))
    }

    /// Join with a complex on disjoint labels; vertices are concatenated.
    pub fn join(&self, other: &SimplicialComplex) -> Result<SimplicialComplex> {
        let mut labels = self.labels.clone();
        for l in &other.labels {
            if self.vertex_index(l).is_some() {
                return Err(Error::invalid(format!("label {l:?} occurs in both join factors")));
            }
            labels.push(l.clone());
        }
        check_labels(&labels)?;
        let shift = self.num_vertices();
        let left: Vec<Face> = if self.facets().is_empty() { vec![Face::EMPTY] } else { self.facets().to_vec() };
        let right: Vec<Face> = if other.facets().is_empty() {
            vec![Face::EMPTY]
        } else {
            other.facets().iter().map(|f| Face(f.0 << shift)).collect()
        };
        let mut facets = Vec::with_capacity(left.len() * right.len());
        for a in &left {
            for b in &right {
                facets.push(a.union(*b));
            }
        }
        facets.retain(|f| !f.is_empty());
        facets.sort_unstable();
        Ok(Self::from_parts(labels, Some(facets), None))
    }

    /// The simplicial wedge at vertex `i`: `i` is replaced by `i_1, i_2`.
    pub fn wedge(&self, i: usize) -> Result<SimplicialComplex> {
        if i >= self.num_vertices() {
            return Err(Error::invalid(format!("vertex index {i} out of range")));
        }
        let mut j = vec![1; self.num_vertices()];
        j[i] = 2;
        self.multi_wedge(&j)
    }

    /// `K(J)`: vertex `i` is replaced by `j_i` copies and every minimal non-face
    /// is replaced by the set of all copies of its vertices. Copies of a vertex
    /// labelled `v` are labelled `v_1, …, v_{j}`; vertices with `j = 1` keep
    /// their label.
    pub fn multi_wedge(&self, j: &[usize]) -> Result<SimplicialComplex> {
        let m = self.num_vertices();
        if j.len() != m {
            return Err(Error::invalid(format!("J has length {} but K has {m} vertices", j.len())));
        }
        if let Some(bad) = j.iter().position(|&x| x < 1) {
            return Err(Error::invalid(format!("J entry for vertex {:?} is below 1", self.labels[bad])));
        }
        let total: usize = j.iter().sum();
        if total > MAX_VERTICES {
            return Err(Error::cap(format!("K(J) would have {total} vertices, cap is {MAX_VERTICES}")));
        }
        let mut labels = Vec::with_capacity(total);
        let mut copies = Vec::with_capacity(m);
        for (i, &ji) in j.iter().enumerate() {
            let start = labels.len();
            if ji == 1 {
                labels.push(self.labels[i].clone());
            } else {
                for c in 1..=ji {
                    labels.push(format!("{}_{c}", self.labels[i]));
                }
            }
            copies.push(Face(((1u128 << ji) - 1) << start));
        }
        let nonfaces = self
            .minimal_nonfaces()
            .iter()
            .map(|n| n.iter().fold(Face::EMPTY, |acc, i| acc.union(copies[i])))
            .collect();
        Self::from_nonfaces(labels, nonfaces)
    }

    /// The same complex with vertices listed in the order of `labels`.
    pub fn reorder(&self, labels: &[String]) -> Result<SimplicialComplex> {
        if labels.len() != self.num_vertices() {
            return Err(Error::invalid("reorder needs a permutation of the vertex labels"));
        }
        let pos: HashMap<&str, usize> = labels.iter().enumerate().map(|(k, l)| (l.as_str(), k)).collect();
        if pos.len() != labels.len() {
            return Err(Error::invalid("reorder labels contain duplicates"));
        }
        let mut perm = Vec::with_capacity(labels.len());
        for l in &self.labels {
            perm.push(*pos.get(l.as_str()).ok_or_else(|| Error::invalid(format!("label {l:?} missing")))?);
        }
        let map = |f: &Face| Face::from_indices(f.iter().map(|i| perm[i]));
        let facets = self.facets.get().map(|fs| {
            let mut v: Vec<Face> = fs.iter().map(map).collect();
            v.sort_unstable();
            v
        });
        let mnf = self.minimal_nonfaces.get().map(|ns| {
            let mut v: Vec<Face> = ns.iter().map(map).collect();
            v.sort_unstable();
            v
        });
        Ok(Self::from_parts(labels.to_vec(), facets, mnf))
    }

    /// Rename every vertex label through `f`.
    pub fn relabel(&self, f: impl Fn(&str) -> String) -> Result<SimplicialComplex> {
        let labels: Vec<String> = self.labels.iter().map(|l| f(l)).collect();
        check_labels(&labels)?;
        Ok(Self::from_parts(
            labels,
            self.facets.get().cloned(),
            self.minimal_nonfaces.get().cloned(),
        ))
    }

    pub fn to_json_value(&self) -> ComplexJson {
        let mut facets: Vec<Face> = self.facets().to_vec();
        facets.sort_unstable();
        ComplexJson {
            vertices: self.labels.clone(),
            facets: facets.iter().map(|f| self.face_labels(*f)).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("complex serialisation")
    }

    pub fn from_json_value(v: ComplexJson) -> Result<Self> {
        check_labels(&v.vertices)?;
        let index: HashMap<&str, usize> = v.vertices.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let mut facets = Vec::with_capacity(v.facets.len());
        for f in &v.facets {
            let mut face = Face::EMPTY;
            for l in f {
                let i = *index
                    .get(l.as_str())
                    .ok_or_else(|| Error::invalid(format!("facet uses unknown vertex {l:?}")))?;
                if face.contains(i) {
                    return Err(Error::invalid(format!("facet lists vertex {l:?} twice")));
                }
                face = face.with(i);
            }
            if facets.contains(&face) {
                return Err(Error::invalid(format!("facet {f:?} listed twice")));
            }
            facets.push(face);
        }
        if facets.len() > 1 && facets.contains(&Face::EMPTY) {
            return Err(Error::invalid("facet list is not an antichain: contains the empty facet"));
        }
        Self::new(v.vertices, facets)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v: ComplexJson = serde_json::from_str(text)?;
        Self::from_json_value(v)
    }
}

fn face_cap_error(cap: usize) -> Error {
    Error::cap(format!("complex has more than {cap} faces (face enumeration cap)"))
}

fn restrict_facets(facets: &[Face], omega: Face) -> Vec<Face> {
    let pieces: Vec<Face> = facets
        .iter()
        .map(|f| f.intersection(omega).compress(omega))
        .filter(|f| !f.is_empty())
        .collect();
    maximal_sets(pieces)
}

/// Maximal sets containing none of `nonfaces`, by backtracking over vertices.
fn facets_from_nonfaces(m: usize, nonfaces: &[Face]) -> Vec<Face> {
    let mut by_max: Vec<Vec<Face>> = vec![Vec::new(); m];
    let mut containing: Vec<Vec<Face>> = vec![Vec::new(); m];
    for &n in nonfaces {
        by_max[n.max_index().unwrap()].push(n);
        for i in n.iter() {
            containing[i].push(n);
        }
    }
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Face)> = vec![(0, Face::EMPTY)];
    while let Some((v, cur)) = stack.pop() {
        if v == m {
            let maximal = (0..m).all(|u| cur.contains(u) || containing[u].iter().any(|n| n.without(u).is_subset_of(cur)));
            if maximal {
                out.push(cur);
            }
            continue;
        }
        let with = cur.with(v);
        let addable = !by_max[v].iter().any(|n| n.is_subset_of(with));
        if addable {
            // excluding v only leads to a maximal face if v can still be blocked
            let reach = Face(cur.0 | (!0u128).checked_shl(v as u32 + 1).unwrap_or(0) & Face::full(m).0);
            if containing[v].iter().any(|n| n.without(v).is_subset_of(reach)) {
                stack.push((v + 1, cur));
            }
            stack.push((v + 1, with));
        } else {
            stack.push((v + 1, cur));
        }
    }
    out.retain(|f| !f.is_empty());
    out.sort_unstable();
    out
}

pub fn numeric_labels(m: usize) -> Vec<String> {
    (1..=m).map(|i| i.to_string()).collect()
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.facets() == other.facets()
    }
}

impl Eq for SimplicialComplex {}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimplicialComplex")
            .field("vertices", &self.labels)
            .field(
                "facets",
                &self.facets().iter().map(|fc| self.face_labels(*fc)).collect::<Vec<_>>(),
            )
            .finish()
    }
}

/// Wire format `{"vertices": [...], "facets": [[...], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub vertices: Vec<String>,
    pub facets: Vec<Vec<String>>,
}

/// Small named complexes used across tests, examples and the CLI.
pub mod named {
    use super::*;

    fn cx(m: usize, facets: &[&[usize]]) -> SimplicialComplex {
        let fs = facets.iter().map(|f| Face::from_indices(f.iter().map(|i| i - 1))).collect();
        SimplicialComplex::with_numeric_labels(m, fs).expect("named complex")
    }

    /// Boundary of the `d`-simplex on `d + 1` vertices.
    pub fn simplex_boundary(d: usize) -> SimplicialComplex {
        let all = Face::full(d + 1);
        SimplicialComplex::with_numeric_labels(d + 1, (0..=d).map(|i| all.without(i)).collect())
            .expect("simplex boundary")
    }

    pub fn simplex(d: usize) -> SimplicialComplex {
        SimplicialComplex::with_numeric_labels(d + 1, vec![Face::full(d + 1)]).expect("simplex")
    }

    /// The cycle graph on `n ≥ 3` vertices `1-2-…-n-1`.
    pub fn cycle(n: usize) -> SimplicialComplex {
        let facets = (0..n).map(|i| Face::singleton(i).with((i + 1) % n)).collect();
        SimplicialComplex::with_numeric_labels(n, facets).expect("cycle")
    }

    /// Two isolated points.
    pub fn s0() -> SimplicialComplex {
        cx(2, &[&[1], &[2]])
    }

    pub fn point() -> SimplicialComplex {
        cx(1, &[&[1]])
    }

    /// The six-vertex real projective plane.
    pub fn rp2_6() -> SimplicialComplex {
        cx(
            6,
            &[
                &[1, 2, 3], &[1, 3, 4], &[1, 4, 5], &[1, 5, 6], &[1, 2, 6],
                &[2, 3, 5], &[3, 4, 6], &[2, 4, 5], &[3, 5, 6], &[2, 4, 6],
            ],
        )
    }
}

#[cfg(test)]
mod tests {
    use super::named::*;
    use super::*;

    fn f(ix: &[usize]) -> Face {
        Face::from_indices(ix.iter().map(|i| i - 1))
    }

    #[test]
    fn face_order_is_size_then_lex() {
        let mut v = vec![f(&[2, 3]), f(&[1]), f(&[1, 3]), f(&[1, 2]), Face::EMPTY, f(&[1, 2, 3])];
        v.sort();
        assert_eq!(v, vec![Face::EMPTY, f(&[1]), f(&[1, 2]), f(&[1, 3]), f(&[2, 3]), f(&[1, 2, 3])]);
        assert!(f(&[1, 4]) < f(&[2, 3]));
    }

    #[test]
    fn is_face_examples() {
        let b = simplex_boundary(2);
        assert!(b.is_face(f(&[1, 2])).unwrap());
        assert!(!b.is_face(f(&[1, 2, 3])).unwrap());
        let c4 = cycle(4);
        assert!(!c4.is_face(f(&[1, 3])).unwrap());
        assert!(c4.is_face(Face::singleton(7)).is_err());
    }

    #[test]
    fn minimal_nonface_examples() {
        assert_eq!(simplex_boundary(2).minimal_nonfaces(), &[f(&[1, 2, 3])]);
        assert_eq!(cycle(4).minimal_nonfaces(), &[f(&[1, 3]), f(&[2, 4])]);
        assert!(simplex(2).minimal_nonfaces().is_empty());
    }

    #[test]
    fn minimal_nonfaces_of_c4_match_brute_force() {
        let c4 = cycle(4);
        let mut brute = Vec::new();
        for bits in 0u128..16 {
            let s = Face(bits);
            if s.len() > 3 || c4.contains_face(s) {
                continue;
            }
            if s.iter().all(|u| c4.contains_face(s.without(u))) {
                brute.push(s);
            }
        }
        brute.sort();
        assert_eq!(c4.minimal_nonfaces(), brute.as_slice());
    }

    #[test]
    fn full_subcomplex_examples() {
        let c4 = cycle(4);
        let s = c4.full_subcomplex(f(&[1, 3]));
        assert_eq!(s.labels(), &["1", "3"]);
        assert_eq!(s.facets(), &[f(&[1]), f(&[2])]);
        assert_eq!(c4.full_subcomplex(c4.vertex_set()), c4);
        let e = c4.full_subcomplex(Face::EMPTY);
        assert_eq!(e.num_vertices(), 0);
        assert!(e.facets().is_empty());
        assert!(e.contains_face(Face::EMPTY));
    }

    #[test]
    fn link_and_join_examples() {
        let c4 = cycle(4);
        let lk = c4.link(f(&[1])).unwrap();
        assert_eq!(lk.labels(), &["2", "4"]);
        assert_eq!(lk.facets().len(), 2);
        assert!(c4.link(f(&[1, 3])).is_err());

        let a = s0();
        let b = s0().relabel(|l| format!("{l}'")).unwrap();
        let j = a.join(&b).unwrap();
        let c4_like = j.reorder(&["1".into(), "1'".into(), "2".into(), "2'".into()]).unwrap();
        assert_eq!(c4_like.relabel(|l| match l {
            "1" => "1".into(), "1'" => "2".into(), "2" => "3".into(), _ => "4".into(),
        }).unwrap(), cycle(4));
        assert!(a.join(&a).is_err());

        let cone = point().relabel(|_| "c".into()).unwrap().join(&c4).unwrap();
        assert_eq!(cone.facets().len(), 4);
        assert!(cone.facets().iter().all(|fc| fc.contains(0) && fc.len() == 3));
    }

    #[test]
    fn wedge_of_triangle_boundary_is_tetrahedron_boundary() {
        let w = simplex_boundary(2).wedge(0).unwrap();
        assert_eq!(w.labels(), &["1_1", "1_2", "2", "3"]);
        assert_eq!(w.minimal_nonfaces(), &[Face::full(4)]);
        let m = simplex_boundary(2).multi_wedge(&[2, 1, 1]).unwrap();
        assert_eq!(w, m);
    }

    #[test]
    fn wedge_of_pentagon_matches_figure() {
        // wed_1(C5): the pentagon 1_1 2 3 4 5, cone from 1_2 over the path 2-3-4-5
        // and the edges 1_1-1_2
        let w = cycle(5).wedge(0).unwrap();
        let v = |l: &str| w.vertex_index(l).unwrap();
        let tri = |a: &str, b: &str, c: &str| Face::from_indices([v(a), v(b), v(c)]);
        let expected = vec![
            tri("1_1", "1_2", "2"),
            tri("1_1", "1_2", "5"),
            tri("1_1", "3", "4"),
            tri("1_2", "2", "3"),
            tri("1_2", "3", "4"),
            tri("1_2", "4", "5"),
            tri("1_1", "2", "3"),
            tri("1_1", "4", "5"),
        ];
        let mut expected = expected;
        expected.sort();
        assert_eq!(w.facets(), expected.as_slice());
    }

    #[test]
    fn identity_multi_wedge() {
        let k = rp2_6();
        assert_eq!(k.multi_wedge(&[1; 6]).unwrap(), k);
        assert!(k.multi_wedge(&[1, 1, 0, 1, 1, 1]).is_err());
        assert!(k.multi_wedge(&[1, 1]).is_err());
    }

    #[test]
    fn f_vectors() {
        assert_eq!(cycle(4).f_vector_and_euler().unwrap(), (vec![4, 4], 0));
        assert_eq!(simplex_boundary(3).f_vector_and_euler().unwrap(), (vec![4, 6, 4], 2));
        assert_eq!(rp2_6().f_vector_and_euler().unwrap(), (vec![6, 15, 10], 1));
    }

    #[test]
    fn json_round_trip_and_errors() {
        let text = r#"{"vertices":["a","b","c"],"facets":[["b","c"],["a","b"]]}"#;
        let k = SimplicialComplex::from_json(text).unwrap();
        let out = k.to_json();
        assert_eq!(out, r#"{"vertices":["a","b","c"],"facets":[["a","b"],["b","c"]]}"#);
        assert_eq!(SimplicialComplex::from_json(&out).unwrap().to_json(), out);

        assert!(SimplicialComplex::from_json("{").is_err());
        assert!(SimplicialComplex::from_json(r#"{"vertices":["a","a"],"facets":[["a"]]}"#).is_err());
        assert!(SimplicialComplex::from_json(r#"{"vertices":["a","b"],"facets":[["a"],["a","b"]]}"#).is_err());
        assert!(SimplicialComplex::from_json(r#"{"vertices":["a","b"],"facets":[["a"]]}"#).is_err());
        assert!(SimplicialComplex::from_json(r#"{"vertices":["a"],"facets":[["z"]]}"#).is_err());
    }

    #[test]
    fn nonface_description_agrees_with_facets() {
        let k = rp2_6();
        let rebuilt = SimplicialComplex::from_nonfaces(k.labels().to_vec(), k.minimal_nonfaces().to_vec()).unwrap();
        assert_eq!(rebuilt.facets(), k.facets());
        assert!(SimplicialComplex::from_nonfaces(numeric_labels(2), vec![f(&[1])]).is_err());
    }
}
