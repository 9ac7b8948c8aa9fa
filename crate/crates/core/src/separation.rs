//! Universal coloring families.
//!
//! An (n, t)-universal family is a set of two-colorings of `0..n` (encoded
//! as bit vectors; a set bit means blue, a clear bit means red) such that
//! for every index set `I` of size `t` and every red/blue pattern on `I`,
//! some member realizes that pattern. Solvers use such families to "guess"
//! the colors of the few indices that matter for a solution.
//!
//! Three constructions are offered: exhaustive (all 2^n vectors), verified
//! random (redrawn until the definitional check passes), and Monte Carlo
//! (sized so the failure probability is at most a requested bound, without
//! a check). Families are memoized process-wide by their parameters.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::problem::{rat, Rational};
use crate::subsets::{choose, combinations, ln_choose};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UsMode {
    /// All 2^n vectors; deterministic and always universal.
    Exhaustive,
    /// Random family redrawn until `verify_universal` accepts it.
    Verified,
    /// Random family sized for miss probability <= error_prob; no check.
    MonteCarlo,
}

#[derive(Clone, Debug)]
pub struct UsConfig {
    pub mode: UsMode,
    pub seed: u64,
    pub error_prob: Rational,
    pub max_work: u64,
}

impl Default for UsConfig {
    fn default() -> Self {
        UsConfig {
            mode: UsMode::Verified,
            seed: 0,
            error_prob: rat(1, 100),
            max_work: 100_000_000,
        }
    }
}

/// A family of colorings of `0..n` with intended strength `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniversalSetFamily {
    pub n: usize,
    pub t: usize,
    pub vectors: Vec<u64>,
}

impl UniversalSetFamily {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vector(&self, idx: usize) -> u64 {
        self.vectors[idx]
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct CacheKey {
    n: usize,
    t: usize,
    mode: u8,
    seed: u64,
    eps: Rational,
}

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<UniversalSetFamily>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<UniversalSetFamily>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Random-family size sufficient for miss probability <= eps:
/// ceil(2^t * ln(C(n, t) * 2^t / eps)).
pub fn mc_family_size(n: usize, t: usize, error_prob: Rational) -> u64 {
    let eps = error_prob.to_f64().unwrap_or(0.01).clamp(1e-12, 0.5);
    let ln_events = ln_choose(n, t) + (t as f64) * std::f64::consts::LN_2 + (1.0 / eps).ln();
    ((1u128 << t.min(100)) as f64 * ln_events.max(1.0)).ceil() as u64
}

/// Builds (and memoizes) an (n, t)-universal family.
///
/// `t = 0` yields the single all-blue vector in every mode; `t > n` is an
/// input error. Work caps are enforced before the cache is consulted so
/// resource failures do not depend on what was built earlier.
pub fn build_universal_set(n: usize, t: usize, cfg: &UsConfig) -> Result<Arc<UniversalSetFamily>> {
    if t > n {
        return Err(Error::Input(format!(
            "strength t = {t} exceeds domain size n = {n}"
        )));
    }
    if n > 60 {
        return Err(Error::Input(format!(
            "coloring domains are limited to 60 indices, got n = {n}"
        )));
    }
    if t == 0 {
        let all_blue = if n == 0 { 0 } else { (1u64 << n) - 1 };
        return Ok(Arc::new(UniversalSetFamily {
            n,
            t,
            vectors: vec![all_blue],
        }));
    }
    let estimate = mc_family_size(n, t, cfg.error_prob);
    let verify_cost = (choose(n, t) as f64) * (estimate as f64) * (t as f64);
    // Verified mode falls back to the exhaustive family (universal by
    // construction) whenever that is cheaper than drawing and checking a
    // random one.
    let exhaustive = cfg.mode == UsMode::Exhaustive
        || (cfg.mode == UsMode::Verified && ((1u128 << n) as f64) <= estimate as f64 + verify_cost);
    let build_cost = if exhaustive {
        (1u128 << n) as f64
    } else if cfg.mode == UsMode::Verified {
        estimate as f64 + verify_cost
    } else {
        estimate as f64
    };
    if build_cost > cfg.max_work as f64 {
        return Err(Error::Resource(format!(
            "universal family for n = {n}, t = {t} needs ~{build_cost:.0} steps (cap {})",
            cfg.max_work
        )));
    }
    let key = if exhaustive {
        CacheKey {
            n,
            t,
            mode: 0,
            seed: 0,
            eps: rat(0, 1),
        }
    } else {
        CacheKey {
            n,
            t,
            mode: if cfg.mode == UsMode::Verified { 1 } else { 2 },
            seed: cfg.seed,
            eps: cfg.error_prob,
        }
    };
    if let Some(found) = cache().lock().unwrap().get(&key) {
        return Ok(Arc::clone(found));
    }
    let family = if exhaustive {
        let vectors: Vec<u64> = (0..(1u64 << n)).collect();
        UniversalSetFamily { n, t, vectors }
    } else {
        let mask = (1u64 << n) - 1;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut drawn = None;
        let attempts = if cfg.mode == UsMode::Verified { 64 } else { 1 };
        for _ in 0..attempts {
            let vectors: Vec<u64> = (0..estimate).map(|_| rng.gen::<u64>() & mask).collect();
            if cfg.mode == UsMode::MonteCarlo
                || verify_universal(n, t, &vectors, cfg.max_work)?
            {
                drawn = Some(vectors);
                break;
            }
        }
        let Some(vectors) = drawn else {
            return Err(Error::Resource(
                "verified universal construction did not converge".into(),
            ));
        };
        UniversalSetFamily { n, t, vectors }
    };
    let family = Arc::new(family);
    cache()
        .lock()
        .unwrap()
        .insert(key, Arc::clone(&family));
    Ok(family)
}

/// Exhaustively checks the universality definition by enumerating index
/// sets and collecting the patterns each vector realizes on them.
pub fn verify_universal(n: usize, t: usize, vectors: &[u64], max_work: u64) -> Result<bool> {
    if t > n {
        return Err(Error::Input(format!(
            "strength t = {t} exceeds domain size n = {n}"
        )));
    }
    if t == 0 {
        return Ok(!vectors.is_empty());
    }
    // Each vector covers one pattern per index set, so fewer vectors than
    // patterns settles the answer by counting.
    if (vectors.len() as u128) < (1u128 << t.min(100)) {
        return Ok(false);
    }
    let work = (choose(n, t) as f64) * (vectors.len() as f64) * (t as f64);
    if work > max_work as f64 {
        return Err(Error::Resource(format!(
            "universality check needs ~{work:.0} steps (cap {max_work})"
        )));
    }
    let patterns = 1usize << t;
    let mut covered = vec![false; patterns];
    for index_set in combinations(n, t) {
        covered.iter_mut().for_each(|c| *c = false);
        let mut remaining = patterns;
        for &v in vectors {
            let mut pattern = 0usize;
            for (j, &i) in index_set.iter().enumerate() {
                pattern |= (((v >> i) & 1) as usize) << j;
            }
            if !covered[pattern] {
                covered[pattern] = true;
                remaining -= 1;
                if remaining == 0 {
                    break;
                }
            }
        }
        if remaining > 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A universal family read as colorings of a solver-chosen domain
/// (vertices or edge indices). Bit set = blue, bit clear = red.
#[derive(Clone, Debug)]
pub struct ColoringFamily {
    pub domain: usize,
    pub strength: usize,
    family: Arc<UniversalSetFamily>,
}

impl ColoringFamily {
    pub fn len(&self) -> usize {
        self.family.len()
    }

    pub fn is_empty(&self) -> bool {
        self.family.is_empty()
    }

    pub fn mask(&self, idx: usize) -> u64 {
        self.family.vector(idx)
    }

    pub fn is_red(&self, idx: usize, d: usize) -> bool {
        debug_assert!(d < self.domain);
        self.family.vector(idx) & (1 << d) == 0
    }

    pub fn red_indices(&self, idx: usize) -> Vec<usize> {
        let v = self.family.vector(idx);
        (0..self.domain).filter(|&d| v & (1 << d) == 0).collect()
    }
}

/// Coloring family over the vertex set; strength is q clamped to n.
pub fn color_nodes(n: usize, q: usize, cfg: &UsConfig) -> Result<ColoringFamily> {
    let t = q.min(n);
    let family = build_universal_set(n, t, cfg)?;
    Ok(ColoringFamily {
        domain: n,
        strength: t,
        family,
    })
}

/// Coloring family over the edge-index set; strength is t clamped to m.
pub fn color_edges(m: usize, t: usize, cfg: &UsConfig) -> Result<ColoringFamily> {
    let t = t.min(m);
    let family = build_universal_set(m, t, cfg)?;
    Ok(ColoringFamily {
        domain: m,
        strength: t,
        family,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cfg(mode: UsMode, seed: u64) -> UsConfig {
        UsConfig {
            mode,
            seed,
            ..Default::default()
        }
    }

    #[test]
    fn strength_zero_gives_single_all_blue_vector() {
        for mode in [UsMode::Exhaustive, UsMode::Verified, UsMode::MonteCarlo] {
            let fam = build_universal_set(5, 0, &cfg(mode, 7)).unwrap();
            assert_eq!(fam.vectors, vec![0b11111]);
        }
        let colors = color_edges(5, 0, &cfg(UsMode::Verified, 0)).unwrap();
        assert_eq!(colors.len(), 1);
        assert!(colors.red_indices(0).is_empty());
    }

    #[test]
    fn strength_above_domain_is_an_input_error() {
        assert!(matches!(
            build_universal_set(3, 4, &UsConfig::default()),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            verify_universal(3, 4, &[0], 1 << 20),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn exhaustive_family_lists_all_vectors_in_order() {
        let fam = build_universal_set(3, 2, &cfg(UsMode::Exhaustive, 0)).unwrap();
        assert_eq!(fam.vectors, (0..8).collect::<Vec<u64>>());
        assert!(verify_universal(3, 2, &fam.vectors, 1 << 20).unwrap());
    }

    #[test]
    fn exhaustive_cap_overflow_is_a_resource_error() {
        let mut c = cfg(UsMode::Exhaustive, 0);
        c.max_work = 100;
        assert!(matches!(
            build_universal_set(10, 2, &c),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn all_zero_vector_is_not_universal_at_strength_one() {
        assert!(!verify_universal(4, 1, &[0], 1 << 20).unwrap());
    }

    #[test]
    fn too_few_vectors_fail_by_counting() {
        // three vectors cannot realize four patterns on any pair
        assert!(!verify_universal(4, 2, &[0b0101, 0b1010, 0b1111], 1 << 20).unwrap());
    }

    #[test]
    fn family_size_formula_pinned() {
        // ceil(8 * ln(120 * 8 / 0.01)) = ceil(91.78) = 92
        assert_eq!(mc_family_size(10, 3, rat(1, 100)), 92);
    }

    #[test]
    fn verified_families_pass_their_own_check() {
        let fam = build_universal_set(8, 2, &cfg(UsMode::Verified, 0)).unwrap();
        assert!(verify_universal(8, 2, &fam.vectors, 1 << 26).unwrap());
        let again = build_universal_set(8, 2, &cfg(UsMode::Verified, 0)).unwrap();
        assert_eq!(fam.vectors, again.vectors);
    }

    #[test]
    fn verified_mode_takes_exhaustive_shortcut_on_tiny_domains() {
        let fam = build_universal_set(2, 2, &cfg(UsMode::Verified, 9)).unwrap();
        assert_eq!(fam.vectors, vec![0, 1, 2, 3]);
    }

    #[test]
    fn monte_carlo_family_has_the_computed_size() {
        let c = cfg(UsMode::MonteCarlo, 3);
        let fam = build_universal_set(10, 3, &c).unwrap();
        assert_eq!(fam.len() as u64, mc_family_size(10, 3, c.error_prob));
        assert!(fam.vectors.iter().all(|&v| v < 1 << 10));
        let again = build_universal_set(10, 3, &c).unwrap();
        assert_eq!(fam.vectors, again.vectors);
    }

    #[test]
    fn exhaustive_cache_ignores_seed() {
        let a = build_universal_set(4, 2, &cfg(UsMode::Exhaustive, 1)).unwrap();
        let b = build_universal_set(4, 2, &cfg(UsMode::Exhaustive, 2)).unwrap();
        assert_eq!(a.vectors, b.vectors);
    }

    #[test]
    fn node_coloring_reads_clear_bits_as_red() {
        let colors = color_nodes(4, 2, &cfg(UsMode::Exhaustive, 0)).unwrap();
        assert_eq!(colors.strength, 2);
        // vector 0b0101 leaves bits 1 and 3 clear
        assert_eq!(colors.red_indices(0b0101), vec![1, 3]);
        assert!(colors.is_red(0b0101, 1));
        assert!(!colors.is_red(0b0101, 2));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn verified_mode_is_universal(n in 3usize..=8, t in 1usize..=3, seed in 0u64..50) {
            prop_assume!(t <= n);
            let fam = build_universal_set(n, t, &cfg(UsMode::Verified, seed)).unwrap();
            prop_assert!(verify_universal(n, t, &fam.vectors, 1 << 28).unwrap());
        }
    }
}
