//! Reduced simplicial cohomology with integral, rational and ℤ/q coefficients.
//!
//! Integral groups come from Smith forms of the coboundary maps; the other
//! coefficient rings are derived through the universal coefficient theorem.
//! Before any matrix is built, vertices are peeled off using the fact that
//! when the deletion `K ∖ v` is a cone, `H̃^k(K) ≅ H̃^{k-1}(lk v)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use parking_lot::RwLock;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{minimal_sets, Face, SimplicialComplex, DEFAULT_FACE_CAP};
use crate::error::{Error, Result};
use crate::linalg::{invariant_factors, SparseMatrix};

/// Coefficient ring of a cohomology computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoeffSpec {
    Rational,
    /// ℤ/q with q odd and at least 3.
    ModQ(u64),
    Integral,
}

impl CoeffSpec {
    pub fn mod_q(q: u64) -> Result<Self> {
        if q < 3 || q.is_multiple_of(2) {
            return Err(Error::invalid(format!(
                "coefficients Z/{q} are not supported: q must be odd and at least 3"
            )));
        }
        Ok(CoeffSpec::ModQ(q))
    }
}

impl fmt::Display for CoeffSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffSpec::Rational => write!(f, "Q"),
            CoeffSpec::ModQ(q) => write!(f, "Z/{q}"),
            CoeffSpec::Integral => write!(f, "Z"),
        }
    }
}

impl FromStr for CoeffSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t {
            "Q" | "q" => Ok(CoeffSpec::Rational),
            "Z" | "z" => Ok(CoeffSpec::Integral),
            _ => {
                let rest = t
                    .strip_prefix("Z/")
                    .or_else(|| t.strip_prefix("z/"))
                    .ok_or_else(|| Error::invalid(format!("unknown coefficient ring {s:?}; use Q, Z or Z/q")))?;
                let q: u64 = rest
                    .parse()
                    .map_err(|_| Error::invalid(format!("cannot parse modulus in {s:?}")))?;
                CoeffSpec::mod_q(q)
            }
        }
    }
}

/// One cohomology group: `R^betti ⊕ ⊕ ℤ/t` over the coefficient ring `R`.
///
/// Over ℤ/q the group is a ℤ/q-module written in invariant factors: `betti`
/// counts the summands ℤ/q and `torsion` lists the smaller factors.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeGroup {
    pub betti: usize,
    pub torsion: Vec<u64>,
}

impl DegreeGroup {
    pub fn is_zero(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
}

/// Graded cohomology, storing only the nonzero degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyProfile {
    pub coeff: CoeffSpec,
    pub degrees: BTreeMap<i32, DegreeGroup>,
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Invariant factors (>1, ascending) of `⊕ ℤ/d` for the given orders.
fn invariant_form(orders: &[u64]) -> Vec<u64> {
    let mut primes: Vec<u64> = orders.iter().flat_map(|&d| prime_factors(d)).collect();
    primes.sort_unstable();
    primes.dedup();
    let mut columns: Vec<Vec<u64>> = Vec::new();
    for p in primes {
        let mut powers: Vec<u64> = orders
            .iter()
            .map(|&d| {
                let mut pk = 1;
                let mut x = d;
                while x % p == 0 {
                    x /= p;
                    pk *= p;
                }
                pk
            })
            .filter(|&pk| pk > 1)
            .collect();
        powers.sort_unstable_by(|a, b| b.cmp(a));
        columns.push(powers);
    }
    let len = columns.iter().map(Vec::len).max().unwrap_or(0);
    let mut out: Vec<u64> = (0..len)
        .map(|j| columns.iter().map(|c| c.get(j).copied().unwrap_or(1)).product())
        .collect();
    out.sort_unstable();
    out
}

impl CohomologyProfile {
    pub fn zero(coeff: CoeffSpec) -> Self {
        CohomologyProfile { coeff, degrees: BTreeMap::new() }
    }

    /// Insert a group, normalising it for the coefficient ring. Zero groups are skipped.
    pub fn insert(&mut self, degree: i32, group: DegreeGroup) {
        let mut g = group;
        self.normalise(&mut g);
        if !g.is_zero() {
            self.degrees.insert(degree, g);
        }
    }

    fn normalise(&self, g: &mut DegreeGroup) {
        match self.coeff {
            CoeffSpec::Rational => g.torsion.clear(),
            CoeffSpec::Integral => {
                g.torsion.retain(|&d| d > 1);
                g.torsion = invariant_form(&g.torsion);
            }
            CoeffSpec::ModQ(q) => {
                let mut orders: Vec<u64> = g.torsion.iter().map(|&d| gcd(d, q)).collect();
                orders.extend(std::iter::repeat_n(q, g.betti));
                let inv = invariant_form(&orders);
                g.betti = inv.iter().filter(|&&d| d == q).count();
                g.torsion = inv.into_iter().filter(|&d| d != q).collect();
            }
        }
    }

    pub fn group(&self, degree: i32) -> Option<&DegreeGroup> {
        self.degrees.get(&degree)
    }

    pub fn betti(&self, degree: i32) -> usize {
        self.degrees.get(&degree).map_or(0, |g| g.betti)
    }

    pub fn torsion(&self, degree: i32) -> &[u64] {
        self.degrees.get(&degree).map_or(&[], |g| g.torsion.as_slice())
    }

    pub fn total_betti(&self) -> usize {
        self.degrees.values().map(|g| g.betti).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn has_torsion(&self) -> bool {
        self.degrees.values().any(|g| !g.torsion.is_empty())
    }

    /// Degrees shifted by `k`.
    pub fn shifted(&self, k: i32) -> Self {
        CohomologyProfile {
            coeff: self.coeff,
            degrees: self.degrees.iter().map(|(d, g)| (d + k, g.clone())).collect(),
        }
    }

    /// Direct sum with a profile over the same coefficients.
    pub fn direct_sum(&self, other: &Self) -> Self {
        assert_eq!(self.coeff, other.coeff, "direct sum over different coefficient rings");
        let mut out = self.clone();
        for (&d, g) in &other.degrees {
            let mut merged = out.degrees.remove(&d).unwrap_or_default();
            merged.betti += g.betti;
            merged.torsion.extend(&g.torsion);
            out.insert(d, merged);
        }
        out
    }

    /// Derive the groups over `coeff` from integral groups via
    /// `H^n(X; G) ≅ H^n(X) ⊗ G ⊕ Tor(H^{n+1}(X), G)`.
    pub fn change_coefficients(&self, coeff: CoeffSpec) -> Self {
        assert_eq!(self.coeff, CoeffSpec::Integral, "coefficient change starts from integral groups");
        match coeff {
            CoeffSpec::Integral => self.clone(),
            CoeffSpec::Rational => {
                let mut out = Self::zero(coeff);
                for (&d, g) in &self.degrees {
                    out.insert(d, DegreeGroup { betti: g.betti, torsion: Vec::new() });
                }
                out
            }
            CoeffSpec::ModQ(q) => {
                let mut out = Self::zero(coeff);
                let mut degrees: Vec<i32> = self.degrees.keys().copied().collect();
                degrees.extend(self.degrees.keys().map(|d| d - 1));
                degrees.sort_unstable();
                degrees.dedup();
                for d in degrees {
                    let here = self.degrees.get(&d);
                    let above = self.degrees.get(&(d + 1));
                    let mut torsion: Vec<u64> = Vec::new();
                    if let Some(g) = here {
                        torsion.extend(g.torsion.iter().map(|&t| gcd(t, q)));
                    }
                    if let Some(g) = above {
                        torsion.extend(g.torsion.iter().map(|&t| gcd(t, q)));
                    }
                    out.insert(d, DegreeGroup { betti: here.map_or(0, |g| g.betti), torsion });
                }
                out
            }
        }
    }

    /// Integral homology of the same space: `H_n` has the free rank of `H^n`
    /// and the torsion of `H^{n+1}`.
    pub fn integral_homology(&self) -> Self {
        assert_eq!(self.coeff, CoeffSpec::Integral);
        let mut out = Self::zero(CoeffSpec::Integral);
        let mut degrees: Vec<i32> = self.degrees.keys().flat_map(|&d| [d, d - 1]).collect();
        degrees.sort_unstable();
        degrees.dedup();
        for d in degrees {
            out.insert(
                d,
                DegreeGroup {
                    betti: self.betti(d),
                    torsion: self.torsion(d + 1).to_vec(),
                },
            );
        }
        out
    }

    /// Number of ℤ/p^k summands summed over all degrees of `H^*(X; ℤ/p^k)`,
    /// computed from integral groups: free rank plus twice the number of
    /// invariant factors divisible by `p^k`.
    pub fn zq_rank(&self, p: u64, k: u32) -> usize {
        assert_eq!(self.coeff, CoeffSpec::Integral);
        let pk = p.pow(k);
        let divisible: usize = self
            .degrees
            .values()
            .map(|g| g.torsion.iter().filter(|&&d| d % pk == 0).count())
            .sum();
        self.total_betti() + 2 * divisible
    }

    pub fn to_json_value(&self) -> ProfileJson {
        ProfileJson {
            coeff: self.coeff.to_string(),
            degrees: self
                .degrees
                .iter()
                .map(|(&p, g)| DegreeJson { p, betti: g.betti, torsion: g.torsion.clone() })
                .collect(),
        }
    }

    pub fn from_json_value(v: &ProfileJson) -> Result<Self> {
        let mut out = Self::zero(v.coeff.parse()?);
        for d in &v.degrees {
            out.insert(d.p, DegreeGroup { betti: d.betti, torsion: d.torsion.clone() });
        }
        Ok(out)
    }
}

impl fmt::Display for CohomologyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degrees.is_empty() {
            return write!(f, "0");
        }
        let ring = match self.coeff {
            CoeffSpec::Rational => "Q".to_string(),
            CoeffSpec::Integral => "Z".to_string(),
            CoeffSpec::ModQ(q) => format!("Z/{q}"),
        };
        let parts: Vec<String> = self
            .degrees
            .iter()
            .map(|(d, g)| {
                let mut terms = Vec::new();
                if g.betti > 0 {
                    terms.push(if g.betti == 1 { ring.clone() } else { format!("{ring}^{}", g.betti) });
                }
                terms.extend(g.torsion.iter().map(|t| format!("Z/{t}")));
                format!("H^{d} = {}", terms.join(" + "))
            })
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// Wire format of a profile.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileJson {
    pub coeff: String,
    pub degrees: Vec<DegreeJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeJson {
    pub p: i32,
    pub betti: usize,
    pub torsion: Vec<u64>,
}

/// How reduced cohomology is computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Peel vertices with contractible deletions first, then reduce matrices.
    Peeled,
    /// Build all coboundary matrices of the complex as given.
    Direct,
}

#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub strategy: Strategy,
    /// Largest number of faces the matrix stage may enumerate.
    pub face_cap: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { strategy: Strategy::Peeled, face_cap: DEFAULT_FACE_CAP }
    }
}

/// Reduced integral cohomology `H̃^*(K; ℤ)`.
pub fn integral_cohomology(k: &SimplicialComplex) -> Result<CohomologyProfile> {
    integral_cohomology_with(k, Options::default())
}

/// Reduced cohomology over `coeff`.
pub fn reduced_cohomology(k: &SimplicialComplex, coeff: CoeffSpec) -> Result<CohomologyProfile> {
    Ok(integral_cohomology(k)?.change_coefficients(coeff))
}

/// Reduced integral homology `H̃_*(K; ℤ)`, indexed by homological degree.
pub fn reduced_integral_homology(k: &SimplicialComplex) -> Result<CohomologyProfile> {
    Ok(integral_cohomology(k)?.integral_homology())
}

pub fn integral_cohomology_with(k: &SimplicialComplex, opts: Options) -> Result<CohomologyProfile> {
    match opts.strategy {
        Strategy::Direct => direct_integral(k, opts.face_cap),
        Strategy::Peeled => {
            let verts = k.vertex_set();
            let mnf = k.minimal_nonfaces().to_vec();
            peeled_integral(k, verts, mnf, opts.face_cap)
        }
    }
}

enum Peel {
    /// All reduced cohomology vanishes.
    Acyclic,
    /// `H̃^j(K) ≅ H̃^{j - shift}(L)` where `L` lives on `verts` with these minimal non-faces.
    Reduced { verts: Face, mnf: Vec<Face>, shift: i32 },
}

/// Peel vertices while some deletion is a cone.
fn peel(mut verts: Face, mut mnf: Vec<Face>) -> Peel {
    let mut shift = 0;
    loop {
        if verts.is_empty() {
            return Peel::Reduced { verts, mnf, shift };
        }
        let support = mnf.iter().fold(Face::EMPTY, |a, f| a.union(*f));
        if support != verts {
            return Peel::Acyclic;
        }
        // a vertex w such that every minimal non-face through w also contains v
        let pick = verts.iter().find_map(|w| {
            let common = mnf
                .iter()
                .filter(|f| f.contains(w))
                .fold(verts, |a, f| a.intersection(*f))
                .without(w);
            common.min_index()
        });
        let Some(v) = pick else {
            return Peel::Reduced { verts, mnf, shift };
        };
        let gens = minimal_sets(mnf.iter().map(|f| f.without(v)).collect());
        let ghosts = gens.iter().filter(|g| g.len() == 1).fold(Face::EMPTY, |a, g| a.union(*g));
        verts = verts.without(v).difference(ghosts);
        mnf = gens.into_iter().filter(|g| g.len() >= 2).collect();
        shift += 1;
    }
}

fn peeled_integral(k: &SimplicialComplex, verts: Face, mnf: Vec<Face>, cap: usize) -> Result<CohomologyProfile> {
    match peel(verts, mnf) {
        Peel::Acyclic => Ok(CohomologyProfile::zero(CoeffSpec::Integral)),
        Peel::Reduced { verts, mnf, shift } => {
            let labels: Vec<String> = verts.iter().map(|i| k.label(i).to_string()).collect();
            let compressed = mnf.iter().map(|f| f.compress(verts)).collect();
            let core = SimplicialComplex::from_nonfaces(labels, compressed)?;
            Ok(direct_integral(&core, cap)?.shifted(shift))
        }
    }
}

fn to_u64(d: &BigInt) -> Result<u64> {
    d.to_u64()
        .ok_or_else(|| Error::cap(format!("torsion coefficient {d} does not fit in 64 bits")))
}

/// Coboundary matrix from faces of size `s - 1` to faces of size `s`.
fn coboundary(lower: &[Face], upper: &[Face]) -> SparseMatrix {
    let index: HashMap<Face, usize> = lower.iter().enumerate().map(|(i, f)| (*f, i)).collect();
    let mut m = SparseMatrix::new(upper.len(), lower.len());
    for (r, tau) in upper.iter().enumerate() {
        let row = tau
            .iter()
            .enumerate()
            .map(|(pos, v)| (index[&tau.without(v)], if pos % 2 == 0 { 1 } else { -1 }))
            .collect();
        m.set_row(r, row);
    }
    m
}

/// The augmented cochain complex of a simplicial complex: `faces[s]` lists
/// the faces with `s` vertices (cochain degree `s - 1`, so `faces[0]` is the
/// empty face in degree −1) and `coboundaries[s]` maps degree `s - 1` to `s`.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    pub faces: Vec<Vec<Face>>,
    pub coboundaries: Vec<SparseMatrix>,
}

/// Reduced cochain complex with signs from the vertex order: the coefficient
/// of `τ` in `δ(τ ∖ v)` is `(-1)^{position of v in τ}`.
pub fn reduced_cochain_complex(k: &SimplicialComplex, face_cap: usize) -> Result<CochainComplex> {
    let faces = k.faces_by_size(face_cap)?;
    let coboundaries = (0..faces.len())
        .map(|s| {
            if s + 1 < faces.len() {
                coboundary(&faces[s], &faces[s + 1])
            } else {
                SparseMatrix::new(0, faces[s].len())
            }
        })
        .collect();
    Ok(CochainComplex { faces, coboundaries })
}

/// Integral cohomology of a cochain complex `C^{d0} → C^{d0+1} → …` given by
/// its coboundary matrices; `maps[i]` goes from degree `d0 + i` to `d0 + i + 1`
/// and has `dims[i+1] × dims[i]` entries.
pub fn cochain_cohomology(dims: &[usize], maps: &[SparseMatrix], first_degree: i32) -> Result<CohomologyProfile> {
    let invariants: Vec<_> = maps.par_iter().map(invariant_factors).collect();
    let rank = |i: usize| invariants.get(i).map_or(0, |inv| inv.rank);
    let mut out = CohomologyProfile::zero(CoeffSpec::Integral);
    for (i, &dim) in dims.iter().enumerate() {
        let incoming = if i == 0 { 0 } else { rank(i - 1) };
        let betti = dim - rank(i) - incoming;
        let torsion = if i == 0 {
            Vec::new()
        } else {
            invariants[i - 1].torsion.iter().map(to_u64).collect::<Result<Vec<_>>>()?
        };
        out.insert(first_degree + i as i32, DegreeGroup { betti, torsion });
    }
    Ok(out)
}

fn direct_integral(k: &SimplicialComplex, cap: usize) -> Result<CohomologyProfile> {
    let cx = reduced_cochain_complex(k, cap)?;
    let dims: Vec<usize> = cx.faces.iter().map(Vec::len).collect();
    cochain_cohomology(&dims, &cx.coboundaries[..dims.len() - 1], -1)
}

/// Memoised integral cohomology of full subcomplexes of one complex.
pub struct SubcomplexCohomologyCache {
    complex: SimplicialComplex,
    options: Options,
    limit: usize,
    entries: RwLock<HashMap<Face, CohomologyProfile>>,
}

/// Default bound on memoised entries.
pub const DEFAULT_CACHE_LIMIT: usize = 1 << 20;

impl SubcomplexCohomologyCache {
    pub fn new(complex: &SimplicialComplex) -> Self {
        Self::with_options(complex, Options::default())
    }

    pub fn with_options(complex: &SimplicialComplex, options: Options) -> Self {
        // force the non-face description once so every lookup can restrict it
        complex.minimal_nonfaces();
        SubcomplexCohomologyCache {
            complex: complex.clone(),
            options,
            limit: DEFAULT_CACHE_LIMIT,
            entries: RwLock::new(HashMap::new()),
        }
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    /// Stop memoising once this many entries are stored.
    pub fn set_limit(&mut self, limit: usize) {
        self.limit = limit;
    }

    /// `H̃^*(K_ω; ℤ)`.
    pub fn integral(&self, omega: Face) -> Result<CohomologyProfile> {
        if let Some(p) = self.entries.read().get(&omega) {
            return Ok(p.clone());
        }
        let p = self.compute(omega)?;
        let mut entries = self.entries.write();
        if entries.len() < self.limit {
            entries.insert(omega, p.clone());
        }
        Ok(p)
    }

    /// `H̃^*(K_ω; ℤ)` without touching the memo table.
    pub fn compute(&self, omega: Face) -> Result<CohomologyProfile> {
        match self.options.strategy {
            Strategy::Peeled => {
                let mnf = self.complex.minimal_nonfaces().iter().filter(|f| f.is_subset_of(omega)).copied().collect();
                peeled_integral(&self.complex, omega, mnf, self.options.face_cap)
            }
            Strategy::Direct => direct_integral(&self.complex.full_subcomplex(omega), self.options.face_cap),
        }
    }

    /// `H̃^*(K_ω; coeff)`.
    pub fn get(&self, omega: Face, coeff: CoeffSpec) -> Result<CohomologyProfile> {
        Ok(self.integral(omega)?.change_coefficients(coeff))
    }

    pub fn len(&self) -> usize {
        self.entries.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Rough heap usage of the stored entries in bytes.
    pub fn memory_bytes(&self) -> usize {
        let per_entry = std::mem::size_of::<Face>() + std::mem::size_of::<CohomologyProfile>();
        self.entries
            .read()
            .values()
            .map(|p| {
                per_entry
                    + p.degrees
                        .values()
                        .map(|g| 48 + g.torsion.len() * std::mem::size_of::<u64>())
                        .sum::<usize>()
            })
            .sum()
    }
}
