//! Genetic architecture search over feature-map genomes.
//!
//! The search evolves a population of genomes under a gate vocabulary and
//! coupling map, scoring each genome by cross-validated QSVM accuracy on a
//! fixed subsample (minus an optional sparsity penalty on two-qubit gates).
//! Runs are fully deterministic for a given config: every stochastic
//! decision site draws from its own seed-derived stream, fitness carries no
//! randomness of its own, and fitness evaluations may therefore run in
//! parallel without affecting the trace.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::featuremap::{FeatureMap, GateToken, Genome};
use crate::hardware::{validate_genome, CouplingMap, GateVocabulary};
use crate::qkernel::gram_matrix;
use crate::rng;
use crate::simcore::NoiseModel;
use crate::svm::{
    cross_validate, grid_search_precomputed, predict, Metrics, SvmModel, STANDARD_C_GRID,
};

/// Search configuration; mirrors the JSON config file one-to-one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NasConfig {
    pub population: usize,
    pub generations: usize,
    pub elitism: usize,
    pub tournament_k: usize,
    pub mutation_rate: f64,
    pub insertion_rate: f64,
    pub deletion_rate: f64,
    pub min_len: usize,
    pub max_len: usize,
    pub vocabulary: GateVocabulary,
    /// Bundled coupling-map name: `chain6`, `chain10`, or `heavyhex27`.
    pub coupling_map: String,
    pub fixed_rz: bool,
    pub noise: Option<NoiseModel>,
    /// Sparsity penalty weight on the two-qubit gate count.
    pub sparsity_weight: f64,
    pub seed: u64,
    pub n_qubits: usize,
    pub subsample: usize,
    pub cv_folds: usize,
    /// Regularization used inside fitness evaluation.
    pub svm_c: f64,
}

impl Default for NasConfig {
    fn default() -> Self {
        NasConfig {
            population: 8,
            generations: 4,
            elitism: 2,
            tournament_k: 3,
            mutation_rate: 0.25,
            insertion_rate: 0.1,
            deletion_rate: 0.1,
            min_len: 4,
            max_len: 12,
            vocabulary: GateVocabulary::Native,
            coupling_map: "chain10".into(),
            fixed_rz: false,
            noise: None,
            sparsity_weight: 0.0,
            seed: 9,
            n_qubits: 10,
            subsample: 200,
            cv_folds: 3,
            svm_c: 1.0,
        }
    }
}

impl NasConfig {
    /// The five variant presets.
    pub fn preset(name: &str) -> Option<NasConfig> {
        let base = NasConfig::default();
        Some(match name {
            "hw-fixed-rz" => NasConfig {
                coupling_map: "chain6".into(),
                fixed_rz: true,
                n_qubits: 6,
                ..base
            },
            "hw-free" => base,
            "all-gates" => NasConfig {
                vocabulary: GateVocabulary::Extended,
                ..base
            },
            "noisy" => NasConfig {
                coupling_map: "chain6".into(),
                n_qubits: 6,
                noise: Some(NoiseModel::standard()),
                ..base
            },
            "sparse" => NasConfig {
                coupling_map: "chain6".into(),
                n_qubits: 6,
                sparsity_weight: 0.01,
                ..base
            },
            _ => return None,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.population < 2 {
            return Err(Error::InvalidParameter("population must be >= 2".into()));
        }
        if self.elitism >= self.population {
            return Err(Error::InvalidParameter(
                "elitism must be smaller than the population".into(),
            ));
        }
        if self.tournament_k == 0 || self.tournament_k > self.population {
            return Err(Error::InvalidParameter(
                "tournament size must lie in 1..=population".into(),
            ));
        }
        for (name, p) in [
            ("mutation_rate", self.mutation_rate),
            ("insertion_rate", self.insertion_rate),
            ("deletion_rate", self.deletion_rate),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must lie in [0,1], got {p}"
                )));
            }
        }
        if self.min_len < 1 || self.min_len > self.max_len {
            return Err(Error::InvalidParameter(
                "genome length bounds must satisfy 1 <= min <= max".into(),
            ));
        }
        if self.sparsity_weight < 0.0 {
            return Err(Error::InvalidParameter(
                "sparsity weight must be non-negative".into(),
            ));
        }
        if self.cv_folds < 2 {
            return Err(Error::InvalidParameter("need at least 2 CV folds".into()));
        }
        Ok(())
    }

    pub fn resolve_coupling(&self) -> Result<CouplingMap> {
        CouplingMap::named(&self.coupling_map).ok_or_else(|| {
            Error::InvalidParameter(format!("unknown coupling map {:?}", self.coupling_map))
        })
    }
}

/// Two-qubit edges usable inside the configured register.
fn legal_edges(map: &CouplingMap, n_qubits: usize) -> Vec<(usize, usize)> {
    map.edges()
        .iter()
        .copied()
        .filter(|&(a, b)| a < n_qubits && b < n_qubits)
        .collect()
}

/// One fresh random gene.
fn random_token(
    config: &NasConfig,
    edges: &[(usize, usize)],
    rng: &mut impl rand::Rng,
) -> Result<GateToken> {
    let kinds = config.vocabulary.kinds();
    let kind = kinds[rng.random_range(0..kinds.len())];
    let qubits = if kind.arity() == 1 {
        vec![rng.random_range(0..config.n_qubits)]
    } else {
        if edges.is_empty() {
            return Err(Error::Topology(
                "vocabulary has two-qubit kinds but the coupling map offers no edges".into(),
            ));
        }
        let (a, b) = edges[rng.random_range(0..edges.len())];
        if rng.random_bool(0.5) {
            vec![a, b]
        } else {
            vec![b, a]
        }
    };
    // Parametric genes stay unbound and pick up their feature slot in
    // appearance order at bind time.
    GateToken::new(kind, qubits, None)
}

/// A fresh random genome with length uniform in the configured bounds.
pub fn random_genome(
    config: &NasConfig,
    map: &CouplingMap,
    rng: &mut impl rand::Rng,
) -> Result<Genome> {
    let edges = legal_edges(map, config.n_qubits);
    let len = rng.random_range(config.min_len..=config.max_len);
    let tokens: Vec<GateToken> = (0..len)
        .map(|_| random_token(config, &edges, rng))
        .collect::<Result<_>>()?;
    Ok(Genome::new(tokens))
}

/// Index of the tournament winner: the best of k distinct candidates,
/// ties resolving to the lower population index.
pub fn tournament_select(fitnesses: &[f64], k: usize, rng: &mut impl rand::Rng) -> usize {
    let n = fitnesses.len();
    debug_assert!(k >= 1 && k <= n);
    // Partial Fisher-Yates for k distinct draws.
    let mut idx: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.random_range(i..n);
        idx.swap(i, j);
    }
    let mut best = idx[0];
    for &cand in &idx[1..k] {
        if fitnesses[cand] > fitnesses[best] || (fitnesses[cand] == fitnesses[best] && cand < best)
        {
            best = cand;
        }
    }
    best
}

/// Single-point crossover at explicit cut points.
///
/// Children are `a[..cut_a] + b[cut_b..]` and `b[..cut_b] + a[cut_a..]`,
/// clamped into the length bounds by truncating the tail or padding with
/// fresh random tokens.
pub fn crossover_at(
    a: &Genome,
    b: &Genome,
    cut_a: usize,
    cut_b: usize,
    config: &NasConfig,
    edges: &[(usize, usize)],
    rng: &mut impl rand::Rng,
) -> Result<(Genome, Genome)> {
    debug_assert!(cut_a >= 1 && cut_a < a.len());
    debug_assert!(cut_b >= 1 && cut_b < b.len());
    let child_a = clamp_child(&a.tokens[..cut_a], &b.tokens[cut_b..], config, edges, rng)?;
    let child_b = clamp_child(&b.tokens[..cut_b], &a.tokens[cut_a..], config, edges, rng)?;
    Ok((child_a, child_b))
}

fn clamp_child(
    head: &[GateToken],
    tail: &[GateToken],
    config: &NasConfig,
    edges: &[(usize, usize)],
    rng: &mut impl rand::Rng,
) -> Result<Genome> {
    let mut tokens: Vec<GateToken> = head.iter().chain(tail.iter()).cloned().collect();
    tokens.truncate(config.max_len);
    while tokens.len() < config.min_len {
        tokens.push(random_token(config, edges, rng)?);
    }
    Ok(Genome::new(tokens))
}

/// Single-point crossover with cut points drawn uniformly per parent.
pub fn crossover(
    a: &Genome,
    b: &Genome,
    config: &NasConfig,
    edges: &[(usize, usize)],
    rng: &mut impl rand::Rng,
) -> Result<(Genome, Genome)> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::DegenerateInput(
            "crossover needs genomes of length >= 2".into(),
        ));
    }
    let cut_a = rng.random_range(1..a.len());
    let cut_b = rng.random_range(1..b.len());
    crossover_at(a, b, cut_a, cut_b, config, edges, rng)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MutationStats {
    pub replaced: usize,
    pub inserted: bool,
    pub deleted: bool,
}

/// Gene-wise replacement, then one optional insertion and one optional
/// deletion, respecting the length bounds.
pub fn mutate_with_stats(
    genome: &Genome,
    config: &NasConfig,
    edges: &[(usize, usize)],
    rng: &mut impl rand::Rng,
) -> Result<(Genome, MutationStats)> {
    let mut stats = MutationStats::default();
    let mut tokens = genome.tokens.clone();
    for t in tokens.iter_mut() {
        if rng.random_bool(config.mutation_rate) {
            *t = random_token(config, edges, rng)?;
            stats.replaced += 1;
        }
    }
    if rng.random_bool(config.insertion_rate) && tokens.len() < config.max_len {
        let at = rng.random_range(0..=tokens.len());
        tokens.insert(at, random_token(config, edges, rng)?);
        stats.inserted = true;
    }
    if rng.random_bool(config.deletion_rate) && tokens.len() > config.min_len {
        let at = rng.random_range(0..tokens.len());
        tokens.remove(at);
        stats.deleted = true;
    }
    Ok((Genome::new(tokens), stats))
}

pub fn mutate(
    genome: &Genome,
    config: &NasConfig,
    edges: &[(usize, usize)],
    rng: &mut impl rand::Rng,
) -> Result<Genome> {
    Ok(mutate_with_stats(genome, config, edges, rng)?.0)
}

/// Fitness of one genome on the (already scaled) fitness subsample:
/// stratified-CV accuracy minus the sparsity penalty.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitnessOutcome {
    pub fitness: Option<f64>,
    pub cv_accuracy: Option<f64>,
    pub failure: Option<String>,
}

impl FitnessOutcome {
    pub fn rank_value(&self) -> f64 {
        self.fitness.unwrap_or(f64::NEG_INFINITY)
    }
}

pub fn fitness(genome: &Genome, config: &NasConfig, subsample: &Dataset) -> FitnessOutcome {
    let map = FeatureMap::Genome {
        genome: genome.clone(),
        fixed_rz: config.fixed_rz,
        n_qubits: config.n_qubits,
    };
    let outcome =
        gram_matrix(&map, &subsample.features, None, config.noise.as_ref()).and_then(|gram| {
            cross_validate(
                &gram,
                &subsample.labels,
                config.svm_c,
                config.cv_folds,
                config.seed,
            )
        });
    match outcome {
        Ok(cv) => {
            let penalty = config.sparsity_weight * genome.two_qubit_count() as f64;
            FitnessOutcome {
                fitness: Some(cv.mean_accuracy - penalty),
                cv_accuracy: Some(cv.mean_accuracy),
                failure: None,
            }
        }
        Err(e) => FitnessOutcome {
            fitness: None,
            cv_accuracy: None,
            failure: Some(e.to_string()),
        },
    }
}

/// One fitness evaluation in the trace.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalRecord {
    pub generation: usize,
    pub index: usize,
    pub genome: String,
    pub fitness: Option<f64>,
    pub cv_accuracy: Option<f64>,
    pub two_qubit_count: usize,
    pub length: usize,
    pub operator: String,
    pub parents: Option<(usize, usize)>,
    pub memoized: bool,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenerationSummary {
    pub generation: usize,
    pub best_index: usize,
    pub best_fitness: f64,
    pub mean_fitness: f64,
}

/// Full audit record of a search run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchTrace {
    pub config: NasConfig,
    pub evaluations: Vec<EvalRecord>,
    pub generations: Vec<GenerationSummary>,
    pub best_genome: String,
    pub best_fitness: f64,
    pub best_cv_accuracy: f64,
    pub test_metrics: Option<Metrics>,
    pub test_c: Option<f64>,
}

impl SearchTrace {
    /// One JSON object per evaluation, newline-separated.
    pub fn evaluations_jsonl(&self) -> String {
        let mut out = String::new();
        for e in &self.evaluations {
            out.push_str(
                &serde_json::to_string(&serde_json::to_value(e).expect("serializable"))
                    .expect("serializable"),
            );
            out.push('\n');
        }
        out
    }
}

/// Inputs for a search run: all feature matrices are already selected and
/// scaled; the fitness subsample is a subset of `train`.
pub struct NasData {
    pub subsample: Dataset,
    pub train: Dataset,
    pub test: Dataset,
}

struct PendingGenome {
    genome: Genome,
    operator: String,
    parents: Option<(usize, usize)>,
}

/// Run the evolutionary search.
///
/// The initial population is evaluated as generation 0; each of the
/// `generations` steps then produces a new population by elitism, then
/// tournament selection, crossover and mutation, and evaluates it. A
/// genome whose fitness evaluation fails ranks as negative infinity and
/// the trace records the failure.
pub fn evolve(config: &NasConfig, data: &NasData) -> Result<SearchTrace> {
    config.validate()?;
    let map = config.resolve_coupling()?;
    if config.n_qubits > map.n_qubits() {
        return Err(Error::Topology(format!(
            "{} qubits requested but {} offers {}",
            config.n_qubits,
            config.coupling_map,
            map.n_qubits()
        )));
    }
    let edges = legal_edges(&map, config.n_qubits);
    let mut cache: HashMap<String, FitnessOutcome> = HashMap::new();
    let mut trace = SearchTrace {
        config: config.clone(),
        evaluations: Vec::new(),
        generations: Vec::new(),
        best_genome: String::new(),
        best_fitness: f64::NEG_INFINITY,
        best_cv_accuracy: 0.0,
        test_metrics: None,
        test_c: None,
    };

    let mut init_rng = rng::stream(config.seed, "nas/init");
    let mut population: Vec<PendingGenome> = (0..config.population)
        .map(|_| {
            Ok(PendingGenome {
                genome: random_genome(config, &map, &mut init_rng)?,
                operator: "init".into(),
                parents: None,
            })
        })
        .collect::<Result<_>>()?;

    let mut best_overall: Option<(Genome, FitnessOutcome)> = None;

    for generation in 0..=config.generations {
        // Hardware validity is guaranteed by construction; re-check anyway.
        for p in &population {
            let violations = validate_genome(&p.genome, config.vocabulary, &map);
            if !violations.is_empty() {
                return Err(Error::Topology(format!(
                    "generated genome violates constraints: {:?}",
                    violations
                )));
            }
        }
        // Evaluate, memoized by canonical form, in parallel.
        let keys: Vec<String> = population.iter().map(|p| p.genome.canonical()).collect();
        let todo: Vec<(String, Genome)> = {
            let mut seen = Vec::new();
            let mut out = Vec::new();
            for (key, p) in keys.iter().zip(population.iter()) {
                if !cache.contains_key(key) && !seen.contains(key) {
                    seen.push(key.clone());
                    out.push((key.clone(), p.genome.clone()));
                }
            }
            out
        };
        let fresh: Vec<(String, FitnessOutcome)> = todo
            .par_iter()
            .map(|(key, genome)| (key.clone(), fitness(genome, config, &data.subsample)))
            .collect();
        let fresh_keys: Vec<&String> = fresh.iter().map(|(k, _)| k).collect();
        for (key, outcome) in &fresh {
            cache.insert(key.clone(), outcome.clone());
        }

        let mut fits = Vec::with_capacity(population.len());
        for (index, (key, p)) in keys.iter().zip(population.iter()).enumerate() {
            let outcome = cache.get(key).expect("just inserted").clone();
            trace.evaluations.push(EvalRecord {
                generation,
                index,
                genome: key.clone(),
                fitness: outcome.fitness,
                cv_accuracy: outcome.cv_accuracy,
                two_qubit_count: p.genome.two_qubit_count(),
                length: p.genome.len(),
                operator: p.operator.clone(),
                parents: p.parents,
                memoized: !fresh_keys.contains(&key),
                failure: outcome.failure.clone(),
            });
            fits.push(outcome.rank_value());
            let better = match &best_overall {
                None => true,
                Some((_, best)) => outcome.rank_value() > best.rank_value(),
            };
            if better {
                best_overall = Some((p.genome.clone(), outcome));
            }
        }

        let mut order: Vec<usize> = (0..population.len()).collect();
        order.sort_by(|&a, &b| fits[b].total_cmp(&fits[a]).then(a.cmp(&b)));
        let finite: Vec<f64> = fits.iter().copied().filter(|f| f.is_finite()).collect();
        trace.generations.push(GenerationSummary {
            generation,
            best_index: order[0],
            best_fitness: fits[order[0]],
            mean_fitness: if finite.is_empty() {
                f64::NEG_INFINITY
            } else {
                finite.iter().sum::<f64>() / finite.len() as f64
            },
        });

        if generation == config.generations {
            break;
        }

        // Next population: elites verbatim, then offspring.
        let mut gen_rng = rng::stream(config.seed, &format!("nas/gen{generation}"));
        let mut next: Vec<PendingGenome> = Vec::with_capacity(config.population);
        for &e in order.iter().take(config.elitism) {
            next.push(PendingGenome {
                genome: population[e].genome.clone(),
                operator: "elite".into(),
                parents: Some((e, e)),
            });
        }
        while next.len() < config.population {
            let pa = tournament_select(&fits, config.tournament_k, &mut gen_rng);
            let pb = tournament_select(&fits, config.tournament_k, &mut gen_rng);
            let (c1, c2) = crossover(
                &population[pa].genome,
                &population[pb].genome,
                config,
                &edges,
                &mut gen_rng,
            )?;
            let m1 = mutate(&c1, config, &edges, &mut gen_rng)?;
            let m2 = mutate(&c2, config, &edges, &mut gen_rng)?;
            next.push(PendingGenome {
                genome: m1,
                operator: "crossover+mutation".into(),
                parents: Some((pa, pb)),
            });
            if next.len() < config.population {
                next.push(PendingGenome {
                    genome: m2,
                    operator: "crossover+mutation".into(),
                    parents: Some((pa, pb)),
                });
            }
            // With one slot left the second child is discarded.
        }
        population = next;
    }

    let (best_genome, best_outcome) = best_overall.expect("population was evaluated");
    trace.best_genome = best_genome.to_text();
    trace.best_fitness = best_outcome.rank_value();
    trace.best_cv_accuracy = best_outcome.cv_accuracy.unwrap_or(0.0);

    // Re-evaluate the winner on the full train/test split.
    if let Ok(eval) = evaluate_genome_on_split(
        &best_genome,
        config.fixed_rz,
        config.n_qubits,
        config.noise.as_ref(),
        &data.train,
        &data.test,
        config.seed,
    ) {
        trace.test_metrics = Some(eval.metrics);
        trace.test_c = Some(eval.svm_c);
    }
    Ok(trace)
}

/// Outcome of training a genome's QSVM on the full training set and
/// scoring the held-out test set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenomeEvaluation {
    pub metrics: Metrics,
    pub svm_c: f64,
    pub cv_accuracy: f64,
    pub predictions: Vec<i8>,
    pub model: SvmModel,
}

/// Train on `train` (C chosen on the standard grid by stratified 5-fold CV)
/// and evaluate on `test`. Both sets must already be scaled.
pub fn evaluate_genome_on_split(
    genome: &Genome,
    fixed_rz: bool,
    n_qubits: usize,
    noise: Option<&NoiseModel>,
    train: &Dataset,
    test: &Dataset,
    seed: u64,
) -> Result<GenomeEvaluation> {
    let map = FeatureMap::Genome {
        genome: genome.clone(),
        fixed_rz,
        n_qubits,
    };
    let k_train = gram_matrix(&map, &train.features, None, noise)?;
    let (grid, model) =
        grid_search_precomputed(&k_train, &train.labels, &STANDARD_C_GRID, 5, seed)?;
    let k_test = gram_matrix(&map, &test.features, Some(&train.features), noise)?;
    let predictions = predict(&model, &k_test)?;
    Ok(GenomeEvaluation {
        metrics: Metrics::from_predictions(&test.labels, &predictions),
        svm_c: grid.best_c,
        cv_accuracy: grid.cv_accuracy,
        predictions,
        model,
    })
}
