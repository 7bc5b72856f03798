//! Real toric spaces `M(K, λ) = RZ_K / ker Λ`: nonsingularity, the additive
//! cohomology formula over row-space supports, odd-torsion detection and a
//! brute-force cellular oracle on the quotient.

use std::collections::HashMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{Face, SimplicialComplex};
use crate::error::{Error, Result};
use crate::homology::{cochain_cohomology, CoeffSpec, CohomologyProfile, DegreeGroup, SubcomplexCohomologyCache};
use crate::linalg::{phi_inv, BitVec, Gf2Matrix, SparseMatrix};

/// Largest GF(2) rank for which full mode enumerates the row space.
pub const FULL_MODE_RANK_CAP: usize = 26;

/// Largest vertex count accepted by [`oracle_quotient_cohomology`].
pub const ORACLE_VERTEX_CAP: usize = 14;

/// Warning attached to every report: the complex is not checked to be a sphere.
pub const SPHERE_WARNING: &str = "sphere_not_verified";

/// Characteristic matrix file: `{"rows": [[1,0,1,0],[0,1,1,1]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LambdaJson {
    pub rows: Vec<Vec<u8>>,
}

/// A complex `K` on `[m]` with an `n × m` characteristic matrix.
#[derive(Clone, Debug)]
pub struct CharacteristicPair {
    complex: SimplicialComplex,
    lambda: Gf2Matrix,
    sphere_verified: bool,
}

impl CharacteristicPair {
    pub fn new(complex: SimplicialComplex, lambda: Gf2Matrix) -> Result<Self> {
        if lambda.num_cols() != complex.num_vertices() {
            return Err(Error::invalid(format!(
                "characteristic matrix has {} columns but the complex has {} vertices",
                lambda.num_cols(),
                complex.num_vertices()
            )));
        }
        Ok(CharacteristicPair { complex, lambda, sphere_verified: false })
    }

    pub fn from_json(complex: &str, lambda: &str) -> Result<Self> {
        let k = SimplicialComplex::from_json(complex)?;
        let l: LambdaJson = serde_json::from_str(lambda)?;
        Self::new(k, Gf2Matrix::from_rows(&l.rows)?)
    }

    /// Record that the caller vouches for `K` being a sphere.
    pub fn assert_sphere(mut self) -> Self {
        self.sphere_verified = true;
        self
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn lambda(&self) -> &Gf2Matrix {
        &self.lambda
    }

    pub fn sphere_verified(&self) -> bool {
        self.sphere_verified
    }

    pub fn warnings(&self) -> Vec<String> {
        if self.sphere_verified {
            Vec::new()
        } else {
            vec![SPHERE_WARNING.to_string()]
        }
    }

    /// A facet whose columns are dependent, or `None` if every face has
    /// independent columns.
    pub fn check_nonsingular(&self) -> Option<Face> {
        let cols: Vec<u128> = (0..self.lambda.num_cols()).map(|j| self.lambda.column(j).to_face().0).collect();
        self.complex
            .facets()
            .iter()
            .copied()
            .find(|f| !independent(f.iter().map(|j| cols[j])))
    }

    pub fn require_nonsingular(&self) -> Result<()> {
        match self.check_nonsingular() {
            Some(f) => Err(Error::Singular { face: self.complex.face_labels(f) }),
            None => Ok(()),
        }
    }

    /// Basis of `Γ = ker Λ` as vertex subsets.
    pub fn kernel_basis(&self) -> Vec<Face> {
        self.lambda.kernel_basis().iter().map(BitVec::to_face).collect()
    }

    pub fn rank(&self) -> usize {
        self.lambda.rank()
    }

    /// Whether `φ⁻¹(ω)` lies in the row space; otherwise the diagnostic
    /// kernel vector pairing oddly with it.
    pub fn row_space_check(&self, omega: Face) -> std::result::Result<(), Face> {
        let v = phi_inv(omega, self.complex.num_vertices());
        match self.lambda.row_space_witness(&v) {
            None => Ok(()),
            Some(x) => Err(x.to_face()),
        }
    }

    fn require_in_row_space(&self, omega: Face) -> Result<()> {
        self.row_space_check(omega).map_err(|x| {
            Error::invalid(format!(
                "ω = {{{}}} is not in the row space: it meets the kernel vector {{{}}} in an odd number of vertices",
                self.complex.face_labels(omega).join(","),
                self.complex.face_labels(x).join(",")
            ))
        })
    }
}

/// Whether GF(2) vectors given as bitmasks are linearly independent.
fn independent(vectors: impl Iterator<Item = u128>) -> bool {
    let mut basis: Vec<u128> = Vec::new();
    for mut v in vectors {
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

/// Which supports the additive formula visits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Every `ω` with `φ⁻¹(ω)` in the row space.
    Full,
    /// Only the listed supports, each of which must lie in the row space.
    Targeted(Vec<Face>),
}

/// One nonzero summand of the additive formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaRow {
    pub omega: Face,
    /// `H̃^{*-1}(K_ω; G)`, already shifted into the degrees of `M`.
    pub profile: CohomologyProfile,
}

/// Result of [`betti_profile`].
#[derive(Clone, Debug)]
pub struct BettiReport {
    pub coeff: CoeffSpec,
    pub total: CohomologyProfile,
    /// Nonzero rows, sorted by `ω`.
    pub per_omega: Vec<OmegaRow>,
    pub complete: bool,
    pub warnings: Vec<String>,
}

impl BettiReport {
    pub fn to_json_value(&self, k: &SimplicialComplex) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .per_omega
            .iter()
            .map(|r| serde_json::json!({ "omega": k.face_labels(r.omega), "profile": r.profile.to_json_value() }))
            .collect();
        serde_json::json!({
            "coeff": self.coeff.to_string(),
            "total": self.total.to_json_value(),
            "complete": self.complete,
            "per_omega": rows,
            "warnings": self.warnings,
        })
    }
}

fn check_odd_coeff(coeff: CoeffSpec) -> Result<()> {
    match coeff {
        CoeffSpec::Rational => Ok(()),
        CoeffSpec::ModQ(q) if q >= 3 && q % 2 == 1 => Ok(()),
        other => Err(Error::invalid(format!(
            "coefficients {other} are not supported here: use Q or Z/q with q odd"
        ))),
    }
}

fn supports(pair: &CharacteristicPair, mode: &Mode) -> Result<(Vec<Face>, bool)> {
    match mode {
        Mode::Full => {
            let r = pair.rank();
            if r > FULL_MODE_RANK_CAP {
                return Err(Error::cap(format!(
                    "row space has 2^{r} elements; full mode is capped at rank {FULL_MODE_RANK_CAP}"
                )));
            }
            let mut all: Vec<Face> = pair.lambda().row_space_faces().collect();
            all.sort_unstable();
            Ok((all, true))
        }
        Mode::Targeted(list) => {
            for &w in list {
                if !w.is_subset_of(pair.complex().vertex_set()) {
                    return Err(Error::invalid(format!("ω = {w:?} is not a set of vertices")));
                }
                pair.require_in_row_space(w)?;
            }
            let mut list = list.clone();
            list.sort_unstable();
            list.dedup();
            Ok((list, false))
        }
    }
}

/// `H^p(M(K,λ); G) ≅ ⊕_ω H̃^{p-1}(K_ω; G)` over row-space supports `ω`,
/// for `G = ℚ` or `ℤ/q` with `q` odd.
pub fn betti_profile(pair: &CharacteristicPair, coeff: CoeffSpec, mode: &Mode) -> Result<BettiReport> {
    check_odd_coeff(coeff)?;
    pair.require_nonsingular()?;
    let (omegas, complete) = supports(pair, mode)?;
    let cache = SubcomplexCohomologyCache::new(pair.complex());
    let rows: Vec<OmegaRow> = omegas
        .par_iter()
        .map(|&w| {
            let p = if complete { cache.compute(w)? } else { cache.integral(w)? };
            Ok(OmegaRow { omega: w, profile: p.change_coefficients(coeff).shifted(1) })
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|r| !r.profile.is_zero())
        .collect();
    let total = rows.iter().fold(CohomologyProfile::zero(coeff), |acc, r| acc.direct_sum(&r.profile));
    Ok(BettiReport { coeff, total, per_omega: rows, complete, warnings: pair.warnings() })
}

/// Odd prime-power factors `(p, k)` of `q`.
pub fn odd_prime_powers(q: u64) -> Result<Vec<(u64, u32)>> {
    if q < 3 || q.is_multiple_of(2) {
        return Err(Error::invalid(format!("q = {q} must be odd and at least 3")));
    }
    let mut out = Vec::new();
    let mut n = q;
    let mut p = 3;
    while p * p <= n {
        let mut k = 0;
        while n.is_multiple_of(p) {
            n /= p;
            k += 1;
        }
        if k > 0 {
            out.push((p, k));
        }
        p += 2;
    }
    if n > 1 {
        out.push((n, 1));
    }
    Ok(out)
}

/// One compared summand: total ℚ-dimension against total `ℤ/p^k`-rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparisonRow {
    pub omega: Vec<String>,
    pub rational: usize,
    pub zq_rank: usize,
}

impl ComparisonRow {
    pub fn unequal(&self) -> bool {
        self.rational != self.zq_rank
    }
}

/// Torsion verdict for one prime power.
#[derive(Clone, Debug, Serialize)]
pub struct PrimePowerVerdict {
    pub p: u64,
    pub k: u32,
    pub modulus: u64,
    pub torsion_present: bool,
    pub verdict: String,
    pub witnesses: Vec<Vec<String>>,
    pub rows: Vec<ComparisonRow>,
}

impl PrimePowerVerdict {
    /// Compare integral profiles of the examined `K_ω` at `p^k`.
    pub fn from_profiles(p: u64, k: u32, profiles: &[(Vec<String>, CohomologyProfile)]) -> Self {
        let modulus = p.pow(k);
        let rows: Vec<ComparisonRow> = profiles
            .iter()
            .map(|(w, h)| ComparisonRow { omega: w.clone(), rational: h.total_betti(), zq_rank: h.zq_rank(p, k) })
            .collect();
        let witnesses: Vec<Vec<String>> = rows.iter().filter(|r| r.unequal()).map(|r| r.omega.clone()).collect();
        let torsion_present = !witnesses.is_empty();
        let verdict = if torsion_present {
            format!("{modulus}-torsion present")
        } else {
            format!("no {modulus}-torsion detected")
        };
        PrimePowerVerdict { p, k, modulus, torsion_present, verdict, witnesses, rows }
    }
}

/// Result of [`torsion_witness`].
#[derive(Clone, Debug, Serialize)]
pub struct TorsionReport {
    pub q: u64,
    pub factors: Vec<(u64, u32)>,
    pub verdicts: Vec<PrimePowerVerdict>,
    /// Whether every row-space support was examined.
    pub complete: bool,
    pub warnings: Vec<String>,
}

impl TorsionReport {
    pub fn torsion_present(&self) -> bool {
        self.verdicts.iter().all(|v| v.torsion_present)
    }
}

/// Detect `p^k`-torsion in `H^*(M(K,λ); ℤ)` for each prime power of `q`.
///
/// Per support `ω`, a strict inequality between `dim_ℚ H̃(K_ω; ℚ)` and the
/// `ℤ/p^k`-rank of `H̃(K_ω; ℤ/p^k)` forces the same inequality for `M`,
/// which can only come from `p^k`-torsion. Targeted mode is sound but not
/// complete.
pub fn torsion_witness(pair: &CharacteristicPair, q: u64, mode: &Mode) -> Result<TorsionReport> {
    let factors = odd_prime_powers(q)?;
    pair.require_nonsingular()?;
    let (omegas, complete) = supports(pair, mode)?;
    let cache = SubcomplexCohomologyCache::new(pair.complex());
    let profiles: Vec<(Vec<String>, CohomologyProfile)> = omegas
        .par_iter()
        .map(|&w| Ok((pair.complex().face_labels(w), cache.integral(w)?)))
        .collect::<Result<_>>()?;
    let verdicts = factors.iter().map(|&(p, k)| PrimePowerVerdict::from_profiles(p, k, &profiles)).collect();
    let mut warnings = pair.warnings();
    if !complete {
        warnings.push("targeted_mode_not_complete".into());
    }
    Ok(TorsionReport { q, factors, verdicts, complete, warnings })
}

/// Row-space statistics reported by the `check` command.
#[derive(Clone, Debug, Serialize)]
pub struct PairCheck {
    pub nonsingular: bool,
    pub witness: Option<Vec<String>>,
    pub rank: usize,
    pub row_space_size: String,
    pub kernel_dimension: usize,
    pub kernel_basis: Vec<Vec<String>>,
    pub warnings: Vec<String>,
    pub seconds: f64,
}

pub fn check_pair(pair: &CharacteristicPair) -> PairCheck {
    let start = Instant::now();
    let witness = pair.check_nonsingular().map(|f| pair.complex().face_labels(f));
    let rank = pair.rank();
    let kernel = pair.kernel_basis();
    PairCheck {
        nonsingular: witness.is_none(),
        witness,
        rank,
        row_space_size: if rank < 128 { (1u128 << rank).to_string() } else { format!("2^{rank}") },
        kernel_dimension: kernel.len(),
        kernel_basis: kernel.iter().map(|f| pair.complex().face_labels(*f)).collect(),
        warnings: pair.warnings(),
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Cellular cohomology of `RZ_K / Γ`, computed from the cube cells directly.
///
/// A cell of `RZ_K` is a face `σ` (interval coordinates) with an endpoint
/// choice on the remaining coordinates. `g ∈ Γ` reflects the coordinates in
/// `g`, reversing the orientation of each interval it flips. One
/// representative per orbit spans the quotient cochains.
pub fn oracle_quotient_cohomology(pair: &CharacteristicPair, coeff: CoeffSpec) -> Result<CohomologyProfile> {
    let k = pair.complex();
    let m = k.num_vertices();
    if m > ORACLE_VERTEX_CAP {
        return Err(Error::cap(format!("{m} vertices exceeds the oracle cap of {ORACLE_VERTEX_CAP}")));
    }
    pair.require_nonsingular()?;
    let gamma = crate::cai::group_elements(&pair.kernel_basis());
    let all = Face::full(m);

    // canonical orbit representative and the group element reaching it
    let canonical = |sigma: Face, eps: Face| -> (Face, Face) {
        gamma
            .iter()
            .map(|g| (Face(eps.0 ^ g.difference(sigma).0), *g))
            .min_by_key(|(e, _)| e.0)
            .expect("group has the identity")
    };

    let faces = k.faces_by_size(crate::complex::DEFAULT_FACE_CAP)?;
    let mut cells: Vec<Vec<(Face, Face)>> = Vec::with_capacity(faces.len());
    for layer in &faces {
        let mut reps = Vec::new();
        for &sigma in layer {
            let rest = all.difference(sigma);
            let mut sub = rest.0;
            loop {
                let eps = Face(sub);
                if canonical(sigma, eps).0 == eps {
                    reps.push((sigma, eps));
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & rest.0;
            }
        }
        cells.push(reps);
    }
    let index: Vec<HashMap<(Face, Face), usize>> = cells
        .iter()
        .map(|v| v.iter().enumerate().map(|(i, c)| (*c, i)).collect())
        .collect();

    // coboundary d^k: cells of dim k -> dim k+1, transpose of the boundary
    let maps: Vec<SparseMatrix> = (0..cells.len().saturating_sub(1))
        .map(|d| {
            let mut mat = SparseMatrix::new(cells[d + 1].len(), cells[d].len());
            for (row, &(sigma, eps)) in cells[d + 1].iter().enumerate() {
                for (pos, i) in sigma.iter().enumerate() {
                    let face_sign = if pos % 2 == 0 { 1 } else { -1 };
                    let lower = sigma.without(i);
                    for (end, end_sign) in [(true, 1), (false, -1)] {
                        let e = if end { eps.with(i) } else { eps };
                        let (rep, g) = canonical(lower, e);
                        let orient = if lower.intersection(g).len() % 2 == 0 { 1 } else { -1 };
                        let col = index[d][&(lower, rep)];
                        mat.add(row, col, face_sign * end_sign * orient);
                    }
                }
            }
            mat
        })
        .collect();
    let dims: Vec<usize> = cells.iter().map(Vec::len).collect();
    let integral = cochain_cohomology(&dims, &maps, 0)?;
    Ok(integral.change_coefficients(coeff))
}

/// `G` in degree 0 and nothing else.
pub fn point_profile(coeff: CoeffSpec) -> CohomologyProfile {
    let mut p = CohomologyProfile::zero(coeff);
    p.insert(0, DegreeGroup { betti: 1, torsion: vec![] });
    p
}
