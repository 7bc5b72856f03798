//! Mod-q Moore spaces and the pipeline that turns them into real toric
//! manifolds with odd torsion in integral cohomology.
//!
//! For each odd prime power `p^k` dividing `q`: triangulate the Moore space
//! `K`, double every vertex to get `K'`, take the building set `B(K')` of its
//! minimal non-faces, its nested set complex `Δ` with the canonical
//! characteristic matrix `Λ`, and compare `ℚ` against `ℤ/p^k` ranks on the
//! summand `ω = S'` (the singletons), where `Δ_{S'} ≅ K'`.

use std::fmt::Write as _;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::SeedableRng;
use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{Face, SimplicialComplex};
use crate::error::{Error, Result};
use crate::homology::{integral_cohomology, CohomologyProfile};
use crate::linalg::{BitVec, Gf2Matrix, Membership};
use crate::nesto::{
    canonical_lambda, columns_independent, double, doubling_map, member_label, nested_complex_on,
    random_maximal_nested_set, singleton_restriction_fast, singleton_restriction_generated, BuildingFamily,
    BuildingSet, GeneratedBuildingSet,
};
use crate::toric::{odd_prime_powers, PrimePowerVerdict, FULL_MODE_RANK_CAP};

/// Triangulated mod-`q` Moore space: a `3q`-gon `a_j` wound `q` times around
/// a triangle `b_0 b_1 b_2` through a staircase annulus, capped off by a cone
/// on the `3q`-gon with apex `c`.
///
/// It has `3q + 4` vertices, `12q + 3` edges and `9q` triangles, and
/// `H̃_1 = ℤ/q` is its only nonzero reduced homology.
pub fn moore_space(q: u64) -> Result<SimplicialComplex> {
    if q < 2 {
        return Err(Error::invalid(format!("q = {q}: the Moore space needs q ≥ 2")));
    }
    let n = 3 * q as usize;
    if n + 4 > crate::complex::MAX_VERTICES {
        return Err(Error::cap(format!("q = {q} needs {} vertices", n + 4)));
    }
    let mut labels: Vec<String> = (0..n).map(|j| format!("a{j}")).collect();
    labels.extend(["b0", "b1", "b2", "c"].map(String::from));
    let a = |j: usize| j % n;
    let b = |i: usize| n + i % 3;
    let c = n + 3;
    let mut facets = Vec::with_capacity(3 * n);
    for j in 0..n {
        facets.push(Face::from_indices([a(j), a(j + 1), b(j + 1)]));
        facets.push(Face::from_indices([a(j), b(j), b(j + 1)]));
        facets.push(Face::from_indices([c, a(j), a(j + 1)]));
    }
    SimplicialComplex::new(labels, facets)
}

/// Which row-space supports the pipeline examines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HuntMode {
    /// `∅`, `S'` and any extra supports.
    Targeted,
    /// Every support in the row space; needs an explicit building set.
    Full,
}

/// Settings of [`torsion_hunt`].
#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub q: u64,
    pub mode: HuntMode,
    /// Extra supports, each a list of member labels of `Δ`.
    pub extra_omegas: Vec<Vec<String>>,
    /// Required for full mode.
    pub allow_full: bool,
    /// List `B(K')` explicitly when it has at most this many members.
    pub explicit_member_cap: usize,
    /// Random maximal nested sets checked for nonsingularity.
    pub nonsingular_samples: usize,
    pub seed: u64,
}

impl PipelineConfig {
    pub fn new(q: u64) -> Result<Self> {
        odd_prime_powers(q)?;
        Ok(PipelineConfig {
            q,
            mode: HuntMode::Targeted,
            extra_omegas: Vec::new(),
            allow_full: false,
            explicit_member_cap: 200_000,
            nonsingular_samples: 2_000,
            seed: 0x5eed,
        })
    }
}

/// Wall-clock time of one pipeline stage.
#[derive(Clone, Debug, Serialize)]
pub struct StageTiming {
    pub stage: String,
    pub seconds: f64,
}

/// Sizes and checks of the intermediate objects for one prime power.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ArtifactSummary {
    pub moore_vertices: usize,
    pub moore_f_vector: Vec<usize>,
    pub moore_homology: String,
    pub wedge_vertices: usize,
    pub wedge_minimal_nonfaces: usize,
    pub wedge_homology: String,
    pub suspension_shift: usize,
    pub building_set_explicit: bool,
    pub building_set_members: Option<usize>,
    pub building_set_generators: usize,
    pub doubling_pairs: Option<usize>,
    pub even_members: String,
    pub delta_vertices: Option<usize>,
    pub lambda_rows: usize,
    pub lambda_columns: Option<usize>,
    pub s_prime_in_row_space: String,
    pub nonsingularity: String,
    pub singleton_restriction_matches: bool,
}

/// Pipeline outcome for one odd prime power.
#[derive(Clone, Debug, Serialize)]
pub struct PrimePowerHunt {
    pub modulus: u64,
    pub artifacts: ArtifactSummary,
    pub failed_stage: Option<String>,
    pub verdict: Option<PrimePowerVerdict>,
    pub timings: Vec<StageTiming>,
}

impl PrimePowerHunt {
    pub fn torsion_present(&self) -> bool {
        self.failed_stage.is_none() && self.verdict.as_ref().is_some_and(|v| v.torsion_present)
    }

    /// The comparison row for `S'`, if it was examined.
    pub fn s_prime_row(&self) -> Option<&crate::toric::ComparisonRow> {
        let v = self.verdict.as_ref()?;
        v.rows.iter().max_by_key(|r| r.omega.len())
    }
}

/// Result of [`torsion_hunt`].
#[derive(Clone, Debug, Serialize)]
pub struct TorsionHuntReport {
    pub q: u64,
    pub mode: HuntMode,
    pub factors: Vec<(u64, u32)>,
    pub torsion_present: bool,
    pub verdict: String,
    pub reports: Vec<PrimePowerHunt>,
    pub warnings: Vec<String>,
}

impl TorsionHuntReport {
    pub fn failed(&self) -> bool {
        self.reports.iter().any(|r| r.failed_stage.is_some())
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serialises")
    }

    /// Aligned plain-text rendering.
    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "q = {}  mode = {:?}  verdict: {}", self.q, self.mode, self.verdict);
        for r in &self.reports {
            let a = &r.artifacts;
            let _ = writeln!(s, "\n[p^k = {}]", r.modulus);
            let rows = [
                ("Moore complex", format!("{} vertices, f = {:?}, {}", a.moore_vertices, a.moore_f_vector, a.moore_homology)),
                ("doubled complex", format!("{} vertices, {} minimal non-faces", a.wedge_vertices, a.wedge_minimal_nonfaces)),
                ("doubled homology", format!("{} (shift {})", a.wedge_homology, a.suspension_shift)),
                (
                    "building set",
                    match a.building_set_members {
                        Some(n) => format!("{n} members (explicit)"),
                        None => format!("{} generators (implicit)", a.building_set_generators),
                    },
                ),
                ("even members", a.even_members.clone()),
                (
                    "Λ",
                    match a.lambda_columns {
                        Some(c) => format!("{} × {c}", a.lambda_rows),
                        None => format!("{} rows, columns not listed", a.lambda_rows),
                    },
                ),
                ("S' in row space", a.s_prime_in_row_space.clone()),
                ("nonsingularity", a.nonsingularity.clone()),
                ("Δ restricted to S'", if a.singleton_restriction_matches { "equals K'".into() } else { "not checked".into() }),
            ];
            for (k, v) in rows {
                let _ = writeln!(s, "  {k:<20} {v}");
            }
            if let Some(f) = &r.failed_stage {
                let _ = writeln!(s, "  FAILED at {f}");
            }
            if let Some(v) = &r.verdict {
                let _ = writeln!(s, "  {:<20} {}", "verdict", v.verdict);
                let _ = writeln!(s, "  {:<12} {:>10} {:>10}", "omega", "dim_Q", "Z/p^k-rank");
                for row in &v.rows {
                    let name = match row.omega.len() {
                        0 => "∅".to_string(),
                        n if n == a.wedge_vertices => "S'".to_string(),
                        n => format!("{n} members"),
                    };
                    let _ = writeln!(s, "  {name:<12} {:>10} {:>10}", row.rational, row.zq_rank);
                }
            }
            for t in &r.timings {
                let _ = writeln!(s, "  {:<20} {:.3}s", t.stage, t.seconds);
            }
        }
        s
    }
}

struct Stages {
    timings: Vec<StageTiming>,
    failed: Option<String>,
}

impl Stages {
    /// Run a stage; a consistency failure is recorded and stops the pipeline,
    /// any other error propagates.
    fn run<T>(&mut self, name: &str, f: impl FnOnce() -> Result<T>) -> Result<Option<T>> {
        if self.failed.is_some() {
            return Ok(None);
        }
        let start = Instant::now();
        let out = f();
        self.timings.push(StageTiming { stage: name.to_string(), seconds: start.elapsed().as_secs_f64() });
        match out {
            Ok(v) => Ok(Some(v)),
            Err(Error::Consistency(msg)) => {
                self.failed = Some(format!("{name}: {msg}"));
                Ok(None)
            }
            Err(e) => Err(e),
        }
    }
}

fn consistency(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Consistency(msg()))
    }
}

/// `x` is the double of some set.
fn is_double(x: Face) -> bool {
    x.iter().all(|i| x.contains(i ^ 1))
}

enum Family {
    Explicit(BuildingSet),
    Implicit(GeneratedBuildingSet),
}

impl Family {
    fn as_dyn(&self) -> &dyn BuildingFamily {
        match self {
            Family::Explicit(b) => b,
            Family::Implicit(g) => g,
        }
    }
}

/// Sum of all rows of `Λ`.
fn row_sum(lambda: &Gf2Matrix) -> BitVec {
    let mut acc = BitVec::zeros(lambda.num_cols());
    for r in lambda.rows() {
        acc.xor_assign(r);
    }
    acc
}

/// Run the pipeline for one odd prime power `pk = p^k`.
fn hunt_prime_power(p: u64, k: u32, config: &PipelineConfig) -> Result<PrimePowerHunt> {
    let pk = p.pow(k);
    let mut st = Stages { timings: Vec::new(), failed: None };
    let mut a = ArtifactSummary::default();

    let moore = st.run("moore", || {
        let km = moore_space(pk)?;
        let (f, _) = km.f_vector_and_euler()?;
        let h = integral_cohomology(&km)?.integral_homology();
        let mut expected = CohomologyProfile::zero(crate::homology::CoeffSpec::Integral);
        expected.insert(1, crate::homology::DegreeGroup { betti: 0, torsion: vec![pk] });
        consistency(h == expected, || format!("Moore complex has reduced homology {h}"))?;
        a.moore_vertices = km.num_vertices();
        a.moore_f_vector = f;
        a.moore_homology = format!("reduced homology {h}");
        Ok(km)
    })?;

    let wedge = match moore {
        Some(km) => st.run("wedge", || {
            let m = km.num_vertices();
            let kw = km.multi_wedge(&vec![2; m])?;
            let mut doubled: Vec<Face> = km.minimal_nonfaces().iter().map(|x| double(*x)).collect();
            doubled.sort_unstable();
            consistency(kw.minimal_nonfaces() == doubled.as_slice(), || {
                "minimal non-faces of the doubled complex are not the doubled minimal non-faces".into()
            })?;
            a.wedge_vertices = kw.num_vertices();
            a.wedge_minimal_nonfaces = kw.minimal_nonfaces().len();
            Ok((km, kw))
        })?,
        None => None,
    };

    let suspension = match &wedge {
        Some((km, kw)) => st.run("suspension", || {
            let m = km.num_vertices();
            let base = integral_cohomology(km)?;
            let h = integral_cohomology(kw)?;
            consistency(h == base.shifted(m as i32), || {
                format!("doubled complex has cohomology {h}, not the {m}-fold shift of {base}")
            })?;
            a.suspension_shift = m;
            a.wedge_homology = format!("reduced homology {}", h.integral_homology());
            Ok(h)
        })?,
        None => None,
    };

    let family = match &wedge {
        Some((km, kw)) if suspension.is_some() => st.run("building set", || {
            let generated = GeneratedBuildingSet::of_complex(kw)?;
            a.building_set_generators = generated.generators().len();
            let explicit = match generated.enumerate(config.explicit_member_cap) {
                Ok(b) => Some(b),
                Err(Error::ResourceCap(_)) => None,
                Err(e) => return Err(e),
            };
            match explicit {
                Some(b) => {
                    let bk = GeneratedBuildingSet::of_complex(km)?.enumerate(config.explicit_member_cap)?;
                    let pairs = doubling_map(&bk, &b)?;
                    a.building_set_explicit = true;
                    a.building_set_members = Some(b.len());
                    a.doubling_pairs = Some(pairs.len());
                    a.even_members = format!("all {} non-singleton members are doubles", pairs.len());
                    Ok(Family::Explicit(b))
                }
                None => {
                    // unions of doubles are doubles, so even generators suffice
                    let bad = generated.generators().iter().find(|g| !is_double(**g));
                    consistency(bad.is_none(), || format!("generator {:?} is not a double", bad.unwrap()))?;
                    a.even_members = format!(
                        "all {} generators are doubles, hence so is every union",
                        generated.generators().len()
                    );
                    Ok(Family::Implicit(generated))
                }
            }
        })?,
        _ => None,
    };

    let ground = wedge.as_ref().map_or(0, |(_, kw)| kw.num_vertices());
    let n = ground.saturating_sub(1);
    a.lambda_rows = n;

    let lambda = match &family {
        Some(fam) => st.run("lambda", || match fam {
            Family::Explicit(b) => {
                let lambda = canonical_lambda(b);
                let columns = b.proper_members();
                let s_prime = Face::from_indices(columns.iter().enumerate().filter(|(_, x)| x.len() == 1).map(|(i, _)| i));
                let target = BitVec::from_face(s_prime, columns.len());
                consistency(row_sum(&lambda) == target, || "sum of rows differs from the singleton indicator".into())?;
                let span = lambda.in_row_space_by(&target, Membership::Span);
                let parity = lambda.in_row_space_by(&target, Membership::Parity);
                consistency(span && parity, || format!("S' membership: span {span}, parity {parity}"))?;
                a.delta_vertices = Some(columns.len());
                a.lambda_columns = Some(columns.len());
                a.s_prime_in_row_space = "sum of all rows; confirmed by elimination and kernel parity".into();
                Ok(Some((lambda, columns)))
            }
            Family::Implicit(g) => {
                // with n odd every column has weight ≡ |I| (mod 2)
                consistency(n % 2 == 1, || format!("Λ has {n} rows; the row-sum identity needs an odd count"))?;
                let probes = g.generators().iter().copied().chain((0..ground).map(Face::singleton));
                for x in probes {
                    consistency(crate::nesto::lambda_column(x, n).len() % 2 == x.len() % 2, || {
                        format!("column parity of {x:?} differs from its size")
                    })?;
                }
                a.s_prime_in_row_space =
                    "sum of all rows: column parity equals member size, odd exactly on singletons".into();
                Ok(None)
            }
        })?,
        None => None,
    };

    if let (Some(fam), Some(_)) = (&family, &lambda) {
        st.run("nonsingularity", || {
            let fam = fam.as_dyn();
            let samples = config.nonsingular_samples;
            let bad = (0..samples).into_par_iter().find_map_any(|i| {
                let mut rng = StdRng::seed_from_u64(config.seed.wrapping_add(i as u64));
                let sets = random_maximal_nested_set(fam, &mut rng);
                (sets.len() != n || !columns_independent(&sets, n)).then_some(sets)
            });
            consistency(bad.is_none(), || {
                let labels: Vec<String> = bad.unwrap().iter().map(|x| member_label(fam.ground_labels(), *x)).collect();
                format!("maximal nested set {{{}}} has dependent columns", labels.join(", "))
            })?;
            a.nonsingularity = format!("{samples} random maximal nested sets, all independent");
            Ok(())
        })?;
    }

    if let (Some(fam), Some((_, kw))) = (&family, &wedge) {
        st.run("restriction", || {
            let restricted = match fam {
                Family::Explicit(b) => {
                    let big: Vec<Face> = b.members().iter().copied().filter(|x| x.len() >= 2).collect();
                    singleton_restriction_fast(&big, b.ground_labels().to_vec())?
                }
                Family::Implicit(g) => singleton_restriction_generated(g)?,
            };
            // compare non-faces: K' has far too many facets to list for larger q
            let same = restricted.labels() == kw.labels() && restricted.minimal_nonfaces() == kw.minimal_nonfaces();
            consistency(same, || "Δ restricted to the singletons is not the doubled complex".into())?;
            a.singleton_restriction_matches = true;
            Ok(())
        })?;
    }

    let mut verdict = None;
    if let (Some(fam), Some(lam), Some(h), Some((_, kw))) = (&family, &lambda, &suspension, &wedge) {
        verdict = st.run("witness", || {
            let empty = integral_cohomology(&SimplicialComplex::empty())?;
            let mut profiles = vec![(Vec::new(), empty), (kw.labels().to_vec(), h.clone())];
            let extra = extra_profiles(fam, lam.as_ref(), config)?;
            profiles.extend(extra);
            Ok(PrimePowerVerdict::from_profiles(p, k, &profiles))
        })?;
    }

    Ok(PrimePowerHunt { modulus: pk, artifacts: a, failed_stage: st.failed, verdict, timings: st.timings })
}

fn profile_of_support(b: &BuildingSet, members: &[Face]) -> Result<CohomologyProfile> {
    let delta = nested_complex_on(b, members)?;
    integral_cohomology(&delta)
}

/// Integral cohomology of `Δ_ω` for the user's supports, or for the whole row
/// space in full mode.
fn extra_profiles(
    fam: &Family,
    lambda: Option<&(Gf2Matrix, Vec<Face>)>,
    config: &PipelineConfig,
) -> Result<Vec<(Vec<String>, CohomologyProfile)>> {
    let wants_extra = !config.extra_omegas.is_empty() || config.mode == HuntMode::Full;
    if !wants_extra {
        return Ok(Vec::new());
    }
    let (Family::Explicit(b), Some((lam, columns))) = (fam, lambda) else {
        return Err(Error::cap(
            "the building set is too large to list, so only ∅ and S' can be examined; raise the member cap",
        ));
    };
    let labels: Vec<String> = columns.iter().map(|x| member_label(b.ground_labels(), *x)).collect();
    let mut out = Vec::new();
    for omega in &config.extra_omegas {
        let mut idx = Vec::new();
        for l in omega {
            let i = labels
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| Error::invalid(format!("{l:?} is not a vertex of the nested set complex")))?;
            idx.push(i);
        }
        let mut v = BitVec::zeros(columns.len());
        for &i in &idx {
            v.set(i, true);
        }
        if let Some(x) = lam.row_space_witness(&v) {
            return Err(Error::invalid(format!(
                "support {{{}}} is not in the row space: it meets a kernel vector of weight {} oddly",
                omega.join(", "),
                x.count_ones()
            )));
        }
        let members: Vec<Face> = idx.iter().map(|&i| columns[i]).collect();
        out.push((omega.clone(), profile_of_support(b, &members)?));
    }
    if config.mode == HuntMode::Full {
        let r = lam.rank();
        if r > FULL_MODE_RANK_CAP {
            return Err(Error::cap(format!("row space has 2^{r} elements; full mode is capped at rank {FULL_MODE_RANK_CAP}")));
        }
        if !config.allow_full {
            return Err(Error::cap(format!(
                "full mode visits 2^{r} supports, each needing a nested set complex; pass --yes-i-know to run it"
            )));
        }
        if columns.len() > crate::complex::MAX_VERTICES {
            return Err(Error::cap(format!(
                "full mode needs Δ_ω on up to {} vertices, beyond the cap of {}",
                columns.len(),
                crate::complex::MAX_VERTICES
            )));
        }
        let omegas: Vec<Face> = lam.row_space_faces().collect();
        let rows: Vec<(Vec<String>, CohomologyProfile)> = omegas
            .par_iter()
            .map(|w| {
                let members: Vec<Face> = w.iter().map(|i| columns[i]).collect();
                let names = w.iter().map(|i| labels[i].clone()).collect();
                Ok((names, profile_of_support(b, &members)?))
            })
            .collect::<Result<_>>()?;
        out.extend(rows);
    }
    Ok(out)
}

/// Run the pipeline for every odd prime power dividing `config.q`.
pub fn torsion_hunt(config: &PipelineConfig) -> Result<TorsionHuntReport> {
    let factors = odd_prime_powers(config.q)?;
    let reports: Vec<PrimePowerHunt> =
        factors.iter().map(|&(p, k)| hunt_prime_power(p, k, config)).collect::<Result<_>>()?;
    let torsion_present = reports.iter().all(PrimePowerHunt::torsion_present);
    let verdict = reports
        .iter()
        .map(|r| match (&r.failed_stage, &r.verdict) {
            (Some(f), _) => format!("{}: failed at {f}", r.modulus),
            (None, Some(v)) => v.verdict.clone(),
            (None, None) => format!("{}: no verdict", r.modulus),
        })
        .collect::<Vec<_>>()
        .join("; ");
    let mut warnings = Vec::new();
    if config.mode == HuntMode::Targeted {
        warnings.push("targeted_mode_not_complete".to_string());
    }
    warnings.push("nonsingularity_sampled".to_string());
    Ok(TorsionHuntReport { q: config.q, mode: config.mode, factors, torsion_present, verdict, reports, warnings })
}
