//! The differential graded ring `R/I` whose cohomology is that of the real
//! moment-angle complex, the `ℤ₂^m` action on it, averaging over `Γ = ker Λ`,
//! and extraction of the cohomology ring of `M(K, λ)` over a field.
//!
//! `R` is generated by `u_i` (degree 1) and `t_i` (degree 0) subject to
//! `u_i t_i = u_i`, `t_i u_i = 0`, `t_i² = t_i`, `u_i² = 0`, `u_i u_j = -u_j u_i`
//! and commutativity otherwise; `I` is spanned by the `u_σ` with `σ ∉ K`.
//! As a group `R/I` is free on the canonical monomials `u_σ t_τ` with
//! `σ ∈ K` and `σ ∩ τ = ∅`. The differential is `dt_i = u_i`, `du_i = 0`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{Face, SimplicialComplex, DEFAULT_FACE_CAP};
use crate::error::{Error, Result};
use crate::homology::{cochain_cohomology, CoeffSpec, CohomologyProfile, SubcomplexCohomologyCache};
use crate::linalg::{Field, Gf2Matrix, SparseMatrix};
use crate::toric::CharacteristicPair;

/// Largest vertex count for the all-subsets loop of [`rz_cohomology`].
pub const RZ_VERTEX_CAP: usize = 20;

/// Largest vertex count for computations on all of `R/I` at once.
pub const FULL_DGA_VERTEX_CAP: usize = 12;

/// Canonical monomial `u_σ t_τ`, with `σ ∩ τ = ∅`.
///
/// Ordered by support `σ ∪ τ` (canonical face order), then degree, then `σ`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub u: Face,
    pub t: Face,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { u: Face::EMPTY, t: Face::EMPTY };

    pub fn new(u: Face, t: Face) -> Result<Self> {
        if u.intersects(t) {
            return Err(Error::invalid(format!("u-part {u:?} and t-part {t:?} overlap")));
        }
        Ok(Monomial { u, t })
    }

    /// The union of all subscripts.
    pub fn support(self) -> Face {
        self.u.union(self.t)
    }

    pub fn degree(self) -> usize {
        self.u.len()
    }

    /// E.g. `u2t3t4` for single-character labels, `u(a0)t(b1)` otherwise.
    pub fn format(self, labels: &[String]) -> String {
        if self.u.is_empty() && self.t.is_empty() {
            return "1".into();
        }
        let name = |i: usize| {
            let l = &labels[i];
            if l.chars().count() == 1 {
                l.clone()
            } else {
                format!("({l})")
            }
        };
        let mut s = String::new();
        for i in self.u.iter() {
            s.push('u');
            s.push_str(&name(i));
        }
        for i in self.t.iter() {
            s.push('t');
            s.push_str(&name(i));
        }
        s
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.support()
            .cmp(&other.support())
            .then(self.degree().cmp(&other.degree()))
            .then(self.u.cmp(&other.u))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u{:?}t{:?}", self.u, self.t)
    }
}

/// Integer combination of canonical monomials; zero coefficients are never stored.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, i64>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Monomial::ONE, 1)
    }

    pub fn monomial(x: Monomial, c: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(x, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, i64)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (x, c) in terms {
            p.add_term(x, c);
        }
        p
    }

    pub fn add_term(&mut self, x: Monomial, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(x).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&x);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, i64)> + '_ {
        self.terms.iter().map(|(x, c)| (*x, *c))
    }

    pub fn coefficient(&self, x: Monomial) -> i64 {
        self.terms.get(&x).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn plus(&self, other: &Polynomial) -> Polynomial {
        let mut p = self.clone();
        for (x, c) in other.terms() {
            p.add_term(x, c);
        }
        p
    }

    pub fn scaled(&self, k: i64) -> Polynomial {
        Polynomial::from_terms(self.terms().map(|(x, c)| (x, c * k)))
    }

    /// Terms whose support is maximal under inclusion.
    pub fn maximal_terms(&self) -> Vec<Monomial> {
        let supports: Vec<Face> = self.terms.keys().map(|x| x.support()).collect();
        self.terms
            .keys()
            .copied()
            .filter(|x| {
                let b = x.support();
                !supports.iter().any(|s| *s != b && b.is_subset_of(*s))
            })
            .collect()
    }

    /// Human-readable form, largest support first: `4u2t3t4 - 2u2t3 + u2`.
    pub fn format(&self, labels: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (x, c)) in self.terms.iter().rev().enumerate() {
            let (sign, a) = if *c < 0 { ("-", -c) } else { ("+", *c) };
            if k == 0 {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            let body = x.format(labels);
            if body == "1" {
                out.push_str(&a.to_string());
            } else if a == 1 {
                out.push_str(&body);
            } else {
                out.push_str(&format!("{a}{body}"));
            }
        }
        out
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

/// Sign of sorting the concatenation of `a` then `b` (disjoint sets).
fn shuffle_sign(a: Face, b: Face) -> i64 {
    let inversions: usize = b.iter().map(|j| a.difference(Face::full(j + 1)).len()).sum();
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `g · (u_σ t_τ)` for `g ∈ ℤ₂^m` given by its support: `u_j ↦ -u_j` and
/// `t_j ↦ 1 - t_j` for `j ∈ g`, expanded into canonical monomials.
pub fn monomial_action(g: Face, x: Monomial) -> Vec<(Monomial, i64)> {
    let sign = if x.u.intersection(g).len().is_multiple_of(2) { 1 } else { -1 };
    let flipped = x.t.intersection(g);
    let kept = x.t.difference(g);
    let mut out = Vec::with_capacity(1 << flipped.len());
    let mut sub = flipped.0;
    loop {
        let a = Face(sub);
        let c = if a.len().is_multiple_of(2) { sign } else { -sign };
        out.push((Monomial { u: x.u, t: kept.union(a) }, c));
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & flipped.0;
    }
    out
}

/// Apply `g` to a polynomial.
pub fn act(g: Face, p: &Polynomial) -> Polynomial {
    let mut out = Polynomial::zero();
    for (x, c) in p.terms() {
        for (y, s) in monomial_action(g, x) {
            out.add_term(y, c * s);
        }
    }
    out
}

/// All `2^r` elements of the group spanned by `basis`.
pub fn group_elements(basis: &[Face]) -> Vec<Face> {
    let mut out = vec![Face::EMPTY];
    for b in basis {
        let more: Vec<Face> = out.iter().map(|g| Face(g.0 ^ b.0)).collect();
        out.extend(more);
    }
    out
}

/// `N(p) = Σ_{g ∈ Γ} g · p`, with `Γ` spanned by `kernel_basis`.
pub fn average(p: &Polynomial, kernel_basis: &[Face]) -> Polynomial {
    let mut out = Polynomial::zero();
    for g in group_elements(kernel_basis) {
        out = out.plus(&act(g, p));
    }
    out
}

/// `R/I` for a fixed complex.
pub struct CaiRing {
    complex: SimplicialComplex,
    faces: HashSet<Face>,
}

impl CaiRing {
    pub fn new(k: &SimplicialComplex) -> Result<Self> {
        Ok(CaiRing { complex: k.clone(), faces: k.face_set(DEFAULT_FACE_CAP)? })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn num_vertices(&self) -> usize {
        self.complex.num_vertices()
    }

    pub fn is_face(&self, s: Face) -> bool {
        self.faces.contains(&s)
    }

    pub fn u(&self, i: usize) -> Polynomial {
        Polynomial::monomial(Monomial { u: Face::singleton(i), t: Face::EMPTY }, 1)
    }

    pub fn t(&self, i: usize) -> Polynomial {
        Polynomial::monomial(Monomial { u: Face::EMPTY, t: Face::singleton(i) }, 1)
    }

    /// Whether `x` is a canonical monomial of `R/I`.
    pub fn is_monomial(&self, x: Monomial) -> bool {
        !x.u.intersects(x.t) && self.is_face(x.u) && x.support().is_subset_of(self.complex.vertex_set())
    }

    /// Product of two canonical monomials as `± monomial`, or zero.
    pub fn monomial_product(&self, a: Monomial, b: Monomial) -> Option<(Monomial, i64)> {
        if a.u.intersects(b.u) || a.t.intersects(b.u) {
            return None;
        }
        let u = a.u.union(b.u);
        if !self.is_face(u) {
            return None;
        }
        let t = a.t.union(b.t).difference(u);
        Some((Monomial { u, t }, shuffle_sign(a.u, b.u)))
    }

    pub fn product(&self, p: &Polynomial, q: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (a, c) in p.terms() {
            for (b, e) in q.terms() {
                if let Some((x, s)) = self.monomial_product(a, b) {
                    out.add_term(x, s * c * e);
                }
            }
        }
        out
    }

    /// `d(u_σ t_τ) = (-1)^{|σ|} Σ_{j ∈ τ} (-1)^{#{i ∈ σ : i > j}} u_{σ∪j} t_{τ∖j}`,
    /// dropping terms with `σ ∪ j ∉ K`.
    pub fn monomial_differential(&self, x: Monomial) -> Vec<(Monomial, i64)> {
        let base = if x.u.len().is_multiple_of(2) { 1 } else { -1 };
        x.t.iter()
            .filter_map(|j| {
                let u = x.u.with(j);
                if !self.is_face(u) {
                    return None;
                }
                let above = x.u.difference(Face::full(j + 1)).len();
                let s = if above.is_multiple_of(2) { base } else { -base };
                Some((Monomial { u, t: x.t.without(j) }, s))
            })
            .collect()
    }

    pub fn differential(&self, p: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (x, c) in p.terms() {
            for (y, s) in self.monomial_differential(x) {
                out.add_term(y, c * s);
            }
        }
        out
    }

    /// Canonical monomials with support `omega`, in canonical order.
    pub fn block(&self, omega: Face) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut sub = omega.0;
        loop {
            let s = Face(sub);
            if self.is_face(s) {
                out.push(Monomial { u: s, t: omega.difference(s) });
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & omega.0;
        }
        out.sort_unstable();
        out
    }

    /// Canonical monomials with support in the row space of `lambda` and
    /// degree in `degrees`, grouped by support, then degree.
    pub fn restricted_basis(&self, lambda: &Gf2Matrix, degrees: std::ops::RangeInclusive<usize>) -> Vec<Monomial> {
        let mut omegas: Vec<Face> = lambda.row_space_faces().collect();
        omegas.sort_unstable();
        omegas
            .into_iter()
            .flat_map(|w| self.block(w))
            .filter(|x| degrees.contains(&x.degree()))
            .collect()
    }

    /// Integral cohomology of the span of `monomials` (closed under `d`),
    /// graded by the degree of the u-part.
    pub fn span_cohomology(&self, monomials: &[Monomial]) -> Result<CohomologyProfile> {
        let top = monomials.iter().map(|x| x.degree()).max().unwrap_or(0);
        let mut by_degree: Vec<Vec<Monomial>> = vec![Vec::new(); top + 1];
        for &x in monomials {
            by_degree[x.degree()].push(x);
        }
        let index: Vec<HashMap<Monomial, usize>> = by_degree
            .iter()
            .map(|v| v.iter().enumerate().map(|(i, x)| (*x, i)).collect())
            .collect();
        let maps: Vec<SparseMatrix> = (0..top)
            .map(|k| {
                let mut m = SparseMatrix::new(by_degree[k + 1].len(), by_degree[k].len());
                for (col, x) in by_degree[k].iter().enumerate() {
                    for (y, s) in self.monomial_differential(*x) {
                        let row = *index[k + 1].get(&y).expect("span not closed under the differential");
                        m.add(row, col, s);
                    }
                }
                m
            })
            .collect();
        let dims: Vec<usize> = by_degree.iter().map(Vec::len).collect();
        cochain_cohomology(&dims, &maps, 0)
    }

    /// Cohomology of the block with support `omega`; it matches
    /// `H̃^{*-1}(K_ω)` with torsion.
    pub fn block_integral_cohomology(&self, omega: Face) -> Result<CohomologyProfile> {
        self.span_cohomology(&self.block(omega))
    }

    /// Cohomology of all of `R/I`, i.e. of the real moment-angle complex.
    pub fn integral_cohomology(&self) -> Result<CohomologyProfile> {
        let m = self.num_vertices();
        if m > FULL_DGA_VERTEX_CAP {
            return Err(Error::cap(format!(
                "{m} vertices exceeds the cap of {FULL_DGA_VERTEX_CAP} for the whole ring"
            )));
        }
        let all: Vec<Monomial> = (0u128..1 << m).flat_map(|w| self.block(Face(w))).collect();
        self.span_cohomology(&all)
    }
}

/// `H^*(RZ_K; G) ≅ ⊕_ω H̃^{*-1}(K_ω; G)` over all `ω ⊆ [m]`.
pub fn rz_cohomology(k: &SimplicialComplex, coeff: CoeffSpec) -> Result<CohomologyProfile> {
    let m = k.num_vertices();
    if m > RZ_VERTEX_CAP {
        return Err(Error::cap(format!(
            "{m} vertices exceeds the cap of {RZ_VERTEX_CAP} for the sum over all 2^m full subcomplexes"
        )));
    }
    let cache = SubcomplexCohomologyCache::new(k);
    let parts: Vec<CohomologyProfile> = (0u128..1 << m)
        .into_par_iter()
        .map(|w| cache.get(Face(w), coeff).map(|p| p.shifted(1)))
        .collect::<Result<_>>()?;
    Ok(parts.iter().fold(CohomologyProfile::zero(coeff), |acc, p| acc.direct_sum(p)))
}

/// One basis class of a cohomology ring.
#[derive(Clone, Debug, Serialize)]
pub struct RingClass<E> {
    /// `"degree.index"`.
    pub label: String,
    pub degree: usize,
    #[serde(skip)]
    pub support: Face,
    #[serde(skip)]
    pub representative: Vec<(Monomial, E)>,
}

/// Cohomology ring over a field: a graded basis with cocycle representatives
/// and sparse structure constants `α · β = Σ c γ`.
#[derive(Clone, Debug)]
pub struct RingPresentation<E> {
    pub field: String,
    pub labels: Vec<String>,
    pub classes: Vec<RingClass<E>>,
    /// `(α, β, γ, c)` with nonzero `c`.
    pub constants: Vec<(usize, usize, usize, E)>,
}

impl<E: Clone + PartialEq + fmt::Display> RingPresentation<E> {
    /// Dimension of each degree.
    pub fn dims(&self) -> Vec<usize> {
        let top = self.classes.iter().map(|c| c.degree + 1).max().unwrap_or(0);
        let mut d = vec![0; top];
        for c in &self.classes {
            d[c.degree] += 1;
        }
        d
    }

    pub fn class_index(&self, label: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.label == label)
    }

    /// Coefficients of `α · β` in the class basis.
    pub fn product(&self, a: usize, b: usize) -> Vec<(usize, E)> {
        self.constants
            .iter()
            .filter(|(x, y, _, _)| *x == a && *y == b)
            .map(|(_, _, g, c)| (*g, c.clone()))
            .collect()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let basis: Vec<serde_json::Value> = self
            .classes
            .iter()
            .map(|c| {
                serde_json::json!({
                    "label": c.label,
                    "degree": c.degree,
                    "representative": c.representative.iter()
                        .map(|(x, e)| serde_json::json!([x.format(&self.labels), e.to_string()]))
                        .collect::<Vec<_>>(),
                })
            })
            .collect();
        let constants: Vec<serde_json::Value> = self
            .constants
            .iter()
            .map(|(a, b, g, c)| {
                serde_json::json!([self.classes[*a].label, self.classes[*b].label, self.classes[*g].label, c.to_string()])
            })
            .collect();
        serde_json::json!({ "field": self.field, "basis": basis, "structure_constants": constants })
    }
}

/// Field-valued polynomial used during ring extraction.
type FieldPoly<E> = BTreeMap<Monomial, E>;

fn fp_add<F: Field>(f: &F, p: &mut FieldPoly<F::Elem>, x: Monomial, c: &F::Elem) {
    if f.is_zero(c) {
        return;
    }
    let sum = match p.get(&x) {
        Some(old) => f.add(old, c),
        None => c.clone(),
    };
    if f.is_zero(&sum) {
        p.remove(&x);
    } else {
        p.insert(x, sum);
    }
}

struct DegreeBlock<E> {
    monos: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    reps: Vec<Vec<E>>,
    /// Spanning set of the coboundaries in this degree.
    exact: Vec<Vec<E>>,
}

struct Extraction<'a, F: Field> {
    field: F,
    ring: &'a CaiRing,
    gamma: Vec<Face>,
    inv_order: F::Elem,
    restricted: HashSet<Face>,
    blocks: BTreeMap<(usize, Face), DegreeBlock<F::Elem>>,
}

impl<'a, F: Field> Extraction<'a, F> {
    /// `Φ(x) = N(x) / |Γ|`.
    fn phi(&self, x: Monomial) -> FieldPoly<F::Elem> {
        let mut out = FieldPoly::new();
        for &g in &self.gamma {
            for (y, s) in monomial_action(g, x) {
                let c = self.field.mul(&self.field.from_i64(s), &self.inv_order);
                fp_add(&self.field, &mut out, y, &c);
            }
        }
        out
    }

    fn average(&self, p: &FieldPoly<F::Elem>) -> FieldPoly<F::Elem> {
        let mut out = FieldPoly::new();
        for (x, c) in p {
            for &g in &self.gamma {
                for (y, s) in monomial_action(g, *x) {
                    let v = self.field.mul(&self.field.mul(c, &self.field.from_i64(s)), &self.inv_order);
                    fp_add(&self.field, &mut out, y, &v);
                }
            }
        }
        out
    }

    fn lift(&self, rep: &[(Monomial, F::Elem)]) -> FieldPoly<F::Elem> {
        let mut out = FieldPoly::new();
        for (x, c) in rep {
            for (y, e) in self.phi(*x) {
                fp_add(&self.field, &mut out, y, &self.field.mul(c, &e));
            }
        }
        out
    }

    fn multiply(&self, p: &FieldPoly<F::Elem>, q: &FieldPoly<F::Elem>) -> FieldPoly<F::Elem> {
        let mut out = FieldPoly::new();
        for (a, c) in p {
            for (b, e) in q {
                if let Some((x, s)) = self.ring.monomial_product(*a, *b) {
                    let v = self.field.mul(&self.field.mul(c, e), &self.field.from_i64(s));
                    fp_add(&self.field, &mut out, x, &v);
                }
            }
        }
        out
    }

    /// Inverse of `Φ` on an invariant polynomial, by peeling maximal terms.
    fn unlift(&self, mut p: FieldPoly<F::Elem>) -> Result<FieldPoly<F::Elem>> {
        let mut out = FieldPoly::new();
        while let Some((&x, c)) = p.iter().max_by_key(|(x, _)| x.support().len()) {
            if !self.restricted.contains(&x.support()) {
                return Err(Error::Consistency(format!(
                    "maximal term {x:?} of an invariant polynomial lies outside the row space"
                )));
            }
            let c = c.clone();
            for (y, e) in self.phi(x) {
                fp_add(&self.field, &mut p, y, &self.field.neg(&self.field.mul(&c, &e)));
            }
            if p.contains_key(&x) {
                return Err(Error::Consistency(format!("peeling did not remove {x:?}")));
            }
            fp_add(&self.field, &mut out, x, &c);
        }
        Ok(out)
    }
}

fn degree_block<F: Field>(f: &F, ring: &CaiRing, omega: Face, k: usize) -> DegreeBlock<F::Elem> {
    let all = ring.block(omega);
    let monos: Vec<Monomial> = all.iter().copied().filter(|x| x.degree() == k).collect();
    let index: HashMap<Monomial, usize> = monos.iter().enumerate().map(|(i, x)| (*x, i)).collect();
    let lower: Vec<Monomial> = all.iter().copied().filter(|x| x.degree() + 1 == k).collect();
    let upper: Vec<Monomial> = all.iter().copied().filter(|x| x.degree() == k + 1).collect();
    let upper_index: HashMap<Monomial, usize> = upper.iter().enumerate().map(|(i, x)| (*x, i)).collect();

    let exact: Vec<Vec<F::Elem>> = lower
        .iter()
        .map(|x| {
            let mut v = vec![f.zero(); monos.len()];
            for (y, s) in ring.monomial_differential(*x) {
                v[index[&y]] = f.add(&v[index[&y]], &f.from_i64(s));
            }
            v
        })
        .collect();
    let mut d = vec![vec![f.zero(); monos.len()]; upper.len()];
    for (col, x) in monos.iter().enumerate() {
        for (y, s) in ring.monomial_differential(*x) {
            let r = upper_index[&y];
            d[r][col] = f.add(&d[r][col], &f.from_i64(s));
        }
    }
    let cocycles = f.kernel_basis(&d, monos.len());
    let mut acc = exact.clone();
    let mut rank = f.rank(&acc);
    let mut reps = Vec::new();
    for z in cocycles {
        acc.push(z.clone());
        let r = f.rank(&acc);
        if r > rank {
            rank = r;
            reps.push(z);
        } else {
            acc.pop();
        }
    }
    DegreeBlock { monos, index, reps, exact }
}

/// Cohomology ring of `M(K, λ)` over a field of characteristic other than 2.
///
/// Classes are represented by cocycles in the span of restricted monomials.
/// A product is computed on the `Γ`-invariant lifts `Φ(x) = N(x)/|Γ|`,
/// averaged back into the invariants, pulled back through `Φ` and expressed
/// in the class basis modulo coboundaries.
pub fn cohomology_ring<F: Field>(pair: &CharacteristicPair, field: F, field_name: &str) -> Result<RingPresentation<F::Elem>> {
    if let Some(face) = pair.check_nonsingular() {
        return Err(Error::Singular { face: pair.complex().face_labels(face) });
    }
    if field.is_zero(&field.from_i64(2)) {
        return Err(Error::invalid("the ring needs a field of characteristic other than 2"));
    }
    let ring = CaiRing::new(pair.complex())?;
    let lambda = pair.lambda();
    let kernel: Vec<Face> = lambda.kernel_basis().iter().map(|v| v.to_face()).collect();
    let gamma = group_elements(&kernel);
    let order = field.from_i64(gamma.len() as i64);
    let mut omegas: Vec<Face> = lambda.row_space_faces().collect();
    omegas.sort_unstable();
    let restricted: HashSet<Face> = omegas.iter().copied().collect();

    let top = ring.complex().dimension() + 1;
    let mut blocks = BTreeMap::new();
    for k in 0..=top.max(0) as usize {
        for &w in &omegas {
            if w.len() < k {
                continue;
            }
            let b = degree_block(&field, &ring, w, k);
            if !b.monos.is_empty() {
                blocks.insert((k, w), b);
            }
        }
    }
    let ex = Extraction { inv_order: field.inv(&order), field: field.clone(), ring: &ring, gamma, restricted, blocks };

    let mut classes = Vec::new();
    let mut per_degree = HashMap::<usize, usize>::new();
    for (&(k, w), b) in &ex.blocks {
        for rep in &b.reps {
            let idx = per_degree.entry(k).or_insert(0);
            let representative: Vec<(Monomial, F::Elem)> = b
                .monos
                .iter()
                .zip(rep)
                .filter(|(_, c)| !field.is_zero(c))
                .map(|(x, c)| (*x, c.clone()))
                .collect();
            classes.push(RingClass { label: format!("{k}.{idx}"), degree: k, support: w, representative });
            *idx += 1;
        }
    }
    // class position by (degree, support, rep index)
    let mut first_class = HashMap::new();
    for (i, c) in classes.iter().enumerate() {
        first_class.entry((c.degree, c.support)).or_insert(i);
    }

    let lifts: Vec<FieldPoly<F::Elem>> = classes.iter().map(|c| ex.lift(&c.representative)).collect();
    let mut constants = Vec::new();
    for a in 0..classes.len() {
        for b in 0..classes.len() {
            let k = classes[a].degree + classes[b].degree;
            let prod = ex.multiply(&lifts[a], &lifts[b]);
            if prod.is_empty() {
                continue;
            }
            let cocycle = ex.unlift(ex.average(&prod))?;
            let mut by_support: BTreeMap<Face, Vec<(Monomial, F::Elem)>> = BTreeMap::new();
            for (x, c) in cocycle {
                if x.degree() != k {
                    return Err(Error::Consistency(format!("product term {x:?} has the wrong degree")));
                }
                by_support.entry(x.support()).or_default().push((x, c));
            }
            for (w, terms) in by_support {
                let blk = ex
                    .blocks
                    .get(&(k, w))
                    .ok_or_else(|| Error::Consistency(format!("no cochains in degree {k} over {w:?}")))?;
                let mut v = vec![field.zero(); blk.monos.len()];
                for (x, c) in terms {
                    v[blk.index[&x]] = c;
                }
                // columns: representatives, then coboundaries
                let columns: Vec<&Vec<F::Elem>> = blk.reps.iter().chain(&blk.exact).collect();
                let rows: Vec<Vec<F::Elem>> = (0..blk.monos.len())
                    .map(|r| columns.iter().map(|col| col[r].clone()).collect())
                    .collect();
                let sol = field.solve(&rows, &v).ok_or_else(|| {
                    Error::Consistency(format!("product of {} and {} is not a cocycle", classes[a].label, classes[b].label))
                })?;
                let base = first_class.get(&(k, w)).copied();
                for (i, c) in sol.into_iter().take(blk.reps.len()).enumerate() {
                    if !field.is_zero(&c) {
                        constants.push((a, b, base.expect("class block") + i, c));
                    }
                }
            }
        }
    }
    constants.sort_by_key(|(a, b, g, _)| (*a, *b, *g));
    Ok(RingPresentation { field: field_name.to_string(), labels: pair.complex().labels().to_vec(), classes, constants })
}
