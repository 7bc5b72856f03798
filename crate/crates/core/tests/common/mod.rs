#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use toric_cohomology::complex::{Face, SimplicialComplex};
use toric_cohomology::linalg::Gf2Matrix;
use toric_cohomology::toric::CharacteristicPair;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random complex on exactly `m` vertices: a few random faces, then any
/// unused vertex as an isolated point.
pub fn random_complex<R: Rng>(rng: &mut R, m: usize, max_dim: usize) -> SimplicialComplex {
    let count = rng.gen_range(1..=m + 2);
    let mut faces = Vec::new();
    for _ in 0..count {
        let size = rng.gen_range(1..=(max_dim + 1).min(m));
        let mut f = Face::EMPTY;
        while f.len() < size {
            f = f.with(rng.gen_range(0..m));
        }
        faces.push(f);
    }
    for i in 0..m {
        faces.push(Face::singleton(i));
    }
    SimplicialComplex::from_generating_faces(toric_cohomology::complex::numeric_labels(m), faces).unwrap()
}

/// Random complex that is not a full simplex.
pub fn random_non_simplex<R: Rng>(rng: &mut R, m: usize, max_dim: usize) -> SimplicialComplex {
    loop {
        let k = random_complex(rng, m, max_dim);
        if !k.minimal_nonfaces().is_empty() {
            return k;
        }
    }
}

/// Random characteristic pair satisfying the independence condition.
pub fn random_pair<R: Rng>(rng: &mut R, m: usize) -> CharacteristicPair {
    loop {
        let k = random_complex(rng, m, 2.min(m - 1));
        let d = k.dimension() as usize + 1;
        let n = rng.gen_range(d..=m);
        for _ in 0..50 {
            let rows: Vec<Vec<u8>> = (0..n).map(|_| (0..m).map(|_| rng.gen_range(0..2)).collect()).collect();
            let pair = CharacteristicPair::new(k.clone(), Gf2Matrix::from_rows(&rows).unwrap()).unwrap();
            if pair.check_nonsingular().is_none() {
                return pair;
            }
        }
    }
}

/// All faces of `k` (including the empty face), by brute force over subsets.
pub fn all_faces(k: &SimplicialComplex) -> Vec<Vec<usize>> {
    let m = k.num_vertices();
    assert!(m <= 20);
    let mut out: Vec<Vec<usize>> = (0u128..1 << m)
        .map(Face)
        .filter(|f| k.contains_face(*f))
        .map(|f| f.indices())
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out
}

fn rank_mod_p(mut a: Vec<Vec<u64>>, p: u64) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, piv);
        let inv = pow_mod(a[r][c], p - 2, p);
        for x in a[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..cols {
                    a[i][j] = (a[i][j] + p - f * a[r][j] % p) % p;
                }
            }
        }
        r += 1;
    }
    r
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Reduced Betti numbers over 𝔽_p, indexed from degree -1, via the
/// augmented simplicial chain complex and plain Gaussian elimination.
pub fn naive_reduced_betti(k: &SimplicialComplex, p: u64) -> Vec<usize> {
    let faces = all_faces(k);
    let top = faces.iter().map(Vec::len).max().unwrap_or(0);
    let by_size: Vec<Vec<&Vec<usize>>> = (0..=top).map(|s| faces.iter().filter(|f| f.len() == s).collect()).collect();
    // ranks[s] = rank of boundary from size s to size s-1
    let mut ranks = vec![0usize; top + 2];
    for s in 1..=top {
        let lower: std::collections::HashMap<&Vec<usize>, usize> =
            by_size[s - 1].iter().enumerate().map(|(i, f)| (*f, i)).collect();
        let mut mat = vec![vec![0u64; by_size[s].len()]; by_size[s - 1].len()];
        for (j, f) in by_size[s].iter().enumerate() {
            for i in 0..f.len() {
                let mut g = (*f).clone();
                g.remove(i);
                let row = lower[&g];
                mat[row][j] = if i % 2 == 0 { 1 } else { p - 1 };
            }
        }
        ranks[s] = rank_mod_p(mat, p);
    }
    (0..=top).map(|s| by_size[s].len() - ranks[s] - ranks[s + 1]).collect()
}

/// Large prime standing in for ℚ in the naive oracle.
pub const BIG_PRIME: u64 = 1_000_003;
