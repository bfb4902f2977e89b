//! The genetic-programming engine: per-locus mutation, two-point
//! crossover, random-subset tournament selection, and the generational
//! loop with full replacement.
//!
//! One seeded random stream drives everything in a fixed order —
//! population init, then per child pair: two tournaments, crossover,
//! two mutations — so a (seed, config, alphabet) triple determines the
//! whole trajectory. Fitness evaluation is pure per genome and may run in
//! parallel without affecting results.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entanglement::FitnessReport;
use crate::error::{Error, Result};
use crate::genome::{random_genome, GateAlphabet, Genome};
use crate::scalar::{from_usize, tol, Scalar};

/// Engine hyperparameters.
///
/// `keep_probability` is the per-locus probability of *keeping* a gene
/// during mutation (mutation rate is `1 - keep_probability`), so useful
/// values sit near 1.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GaConfig<T> {
    /// Individuals per generation; must be even (children arrive in pairs).
    pub population_size: usize,
    /// Size of the random subset each tournament draws.
    pub tournament_size: usize,
    /// Per-locus probability of keeping a gene during mutation.
    pub keep_probability: f64,
    /// Generation budget after the initial population.
    pub generations: usize,
    /// Seed for the single random stream.
    pub seed: u64,
    /// Stop as soon as the best fitness reaches this value (within 1e-9).
    pub target_fitness: Option<T>,
}

impl<T: Scalar> Default for GaConfig<T> {
    fn default() -> Self {
        GaConfig {
            population_size: 200,
            tournament_size: 4,
            keep_probability: 0.95,
            generations: 2000,
            seed: 0,
            target_fitness: None,
        }
    }
}

impl<T: Scalar> GaConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 || !self.population_size.is_multiple_of(2) {
            return Err(Error::config(format!(
                "population_size must be even and at least 2, got {}",
                self.population_size
            )));
        }
        if self.tournament_size < 1 || self.tournament_size > self.population_size {
            return Err(Error::config(format!(
                "tournament_size must be in 1..={}, got {}",
                self.population_size, self.tournament_size
            )));
        }
        if !(0.0..=1.0).contains(&self.keep_probability) {
            return Err(Error::config(format!(
                "keep_probability must be in [0, 1], got {}",
                self.keep_probability
            )));
        }
        Ok(())
    }
}

/// Progress snapshot for one generation, over the current population.
#[derive(Clone, Debug, Serialize)]
pub struct GenerationStats<T: Scalar> {
    pub generation: usize,
    pub best_fitness: T,
    pub mean_fitness: T,
    pub best_genome: Genome<T>,
}

/// Mutate in place: each gene is kept with `keep_probability`, otherwise
/// resampled uniformly from its position's alphabet (the resample may
/// reproduce the original value). The fitness cache is dropped only if a
/// gene actually changed.
pub fn mutate<T: Scalar, R: Rng + ?Sized>(
    genome: &mut Genome<T>,
    alphabet: &GateAlphabet,
    keep_probability: f64,
    rng: &mut R,
) {
    let mut changed = false;
    for (p, gene) in genome.genes_mut().iter_mut().enumerate() {
        if rng.random::<f64>() < keep_probability {
            continue;
        }
        let new = rng.random_range(0..alphabet.gates_at(p).len());
        if new != *gene {
            *gene = new;
            changed = true;
        }
    }
    if changed {
        genome.clear_fitness();
    }
}

/// Two-point crossover at explicit cut indices: positions strictly between
/// `c1` and `c2` are exchanged, endpoints stay. Children start unevaluated.
pub fn crossover_at<T: Scalar>(
    mom: &Genome<T>,
    dad: &Genome<T>,
    c1: usize,
    c2: usize,
) -> (Genome<T>, Genome<T>) {
    assert_eq!(mom.len(), dad.len(), "parents must have equal length");
    assert!(c1 < c2 && c2 < mom.len(), "cut points must satisfy c1 < c2 < L");
    let mut sister = Vec::with_capacity(mom.len());
    let mut brother = Vec::with_capacity(mom.len());
    for i in 0..mom.len() {
        let swap = c1 < i && i < c2;
        let (m, d) = (mom.genes()[i], dad.genes()[i]);
        sister.push(if swap { d } else { m });
        brother.push(if swap { m } else { d });
    }
    (Genome::from_genes(sister), Genome::from_genes(brother))
}

/// Two-point crossover with uniformly random cuts `c1 < c2`.
///
/// For lengths below 3 no strict-interior exchange is possible, so the
/// children are plain copies of the parents (and no randomness is drawn).
pub fn crossover<T: Scalar, R: Rng + ?Sized>(
    mom: &Genome<T>,
    dad: &Genome<T>,
    rng: &mut R,
) -> (Genome<T>, Genome<T>) {
    assert_eq!(mom.len(), dad.len(), "parents must have equal length");
    let len = mom.len();
    if len < 3 {
        return (
            Genome::from_genes(mom.genes().to_vec()),
            Genome::from_genes(dad.genes().to_vec()),
        );
    }
    let first = rng.random_range(0..len);
    let second = loop {
        let other = rng.random_range(0..len);
        if other != first {
            break other;
        }
    };
    let (c1, c2) = (first.min(second), first.max(second));
    crossover_at(mom, dad, c1, c2)
}

/// Tournament selection: draw a uniform random subset of
/// `tournament_size` distinct individuals and return a uniform random
/// member of that subset's best-fitness set.
///
/// Every individual must already carry a fitness cache.
pub fn tournament_select<'a, T: Scalar, R: Rng + ?Sized>(
    population: &'a [Genome<T>],
    tournament_size: usize,
    rng: &mut R,
) -> Result<&'a Genome<T>> {
    if population.is_empty() {
        return Err(Error::usage("tournament over an empty population".to_string()));
    }
    if tournament_size < 1 || tournament_size > population.len() {
        return Err(Error::usage(format!(
            "tournament_size {} out of range 1..={}",
            tournament_size,
            population.len()
        )));
    }
    let entrants = rand::seq::index::sample(rng, population.len(), tournament_size);

    let mut best: Option<T> = None;
    let mut winners: Vec<usize> = Vec::new();
    for idx in entrants.iter() {
        let fitness = population[idx].potential().ok_or_else(|| {
            Error::usage("tournament requires every fitness cache to be populated".to_string())
        })?;
        match best {
            Some(b) if fitness < b => {}
            Some(b) if fitness == b => winners.push(idx),
            _ => {
                best = Some(fitness);
                winners.clear();
                winners.push(idx);
            }
        }
    }
    Ok(&population[winners[rng.random_range(0..winners.len())]])
}

/// Fill every missing fitness cache, in parallel.
fn evaluate_population<T, F>(population: &mut [Genome<T>], fitness: &F) -> Result<()>
where
    T: Scalar,
    F: Fn(&Genome<T>) -> Result<FitnessReport<T>> + Sync,
{
    population
        .par_iter_mut()
        .filter(|g| g.fitness().is_none())
        .try_for_each(|genome| {
            let report = fitness(genome)?;
            genome.set_fitness(report);
            Ok(())
        })
}

/// Index of the best individual; first index wins ties.
fn best_index<T: Scalar>(population: &[Genome<T>]) -> usize {
    let mut best = 0;
    for (i, g) in population.iter().enumerate().skip(1) {
        if g.potential().expect("population evaluated") > population[best].potential().unwrap() {
            best = i;
        }
    }
    best
}

fn snapshot<T: Scalar>(generation: usize, population: &[Genome<T>]) -> GenerationStats<T> {
    let best = best_index(population);
    let best_fitness = population[best].potential().unwrap();
    let sum: T = population
        .iter()
        .map(|g| g.potential().expect("population evaluated"))
        .fold(T::zero(), |acc, f| acc + f);
    // the true mean never exceeds the maximum; clamp away summation rounding
    let mean_fitness = (sum / from_usize::<T>(population.len())).min(best_fitness);
    GenerationStats {
        generation,
        best_fitness,
        mean_fitness,
        best_genome: population[best].clone(),
    }
}

/// Run the generational loop and return the best genome ever seen together
/// with per-generation stats.
///
/// The loop is full-replacement with no elitism; the incumbent best is
/// tracked outside the population so replacement cannot lose it. Stats
/// describe each current population (generation 0 is the random initial
/// one). Stops early once the incumbent reaches `target_fitness`.
pub fn evolve<T, F>(
    alphabet: &GateAlphabet,
    fitness: F,
    cfg: &GaConfig<T>,
) -> Result<(Genome<T>, Vec<GenerationStats<T>>)>
where
    T: Scalar,
    F: Fn(&Genome<T>) -> Result<FitnessReport<T>> + Sync,
{
    evolve_with_observer(alphabet, fitness, cfg, |_| {})
}

/// [`evolve`] with a callback invoked after each generation's stats are
/// recorded — the hook for streaming line-delimited progress.
pub fn evolve_with_observer<T, F, O>(
    alphabet: &GateAlphabet,
    fitness: F,
    cfg: &GaConfig<T>,
    mut observer: O,
) -> Result<(Genome<T>, Vec<GenerationStats<T>>)>
where
    T: Scalar,
    F: Fn(&Genome<T>) -> Result<FitnessReport<T>> + Sync,
    O: FnMut(&GenerationStats<T>),
{
    cfg.validate()?;
    let target_reached = |fitness: T| match cfg.target_fitness {
        Some(target) => fitness >= target - tol::<T>(1e-9),
        None => false,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut population: Vec<Genome<T>> = (0..cfg.population_size)
        .map(|_| random_genome(alphabet, &mut rng))
        .collect();
    evaluate_population(&mut population, &fitness)?;

    let mut incumbent = population[best_index(&population)].clone();
    let mut stats = Vec::with_capacity(cfg.generations + 1);
    let first = snapshot(0, &population);
    observer(&first);
    stats.push(first);

    for generation in 1..=cfg.generations {
        if target_reached(incumbent.potential().unwrap()) {
            break;
        }
        let mut next = Vec::with_capacity(cfg.population_size);
        for _ in 0..cfg.population_size / 2 {
            let mom = tournament_select(&population, cfg.tournament_size, &mut rng)?.clone();
            let dad = tournament_select(&population, cfg.tournament_size, &mut rng)?.clone();
            let (mut sister, mut brother) = crossover(&mom, &dad, &mut rng);
            mutate(&mut sister, alphabet, cfg.keep_probability, &mut rng);
            mutate(&mut brother, alphabet, cfg.keep_probability, &mut rng);
            next.push(sister);
            next.push(brother);
        }
        population = next;
        evaluate_population(&mut population, &fitness)?;

        let best = best_index(&population);
        if population[best].potential().unwrap() > incumbent.potential().unwrap() {
            incumbent = population[best].clone();
        }
        let snap = snapshot(generation, &population);
        observer(&snap);
        stats.push(snap);
    }

    Ok((incumbent, stats))
}
