//! Buchberger's algorithm with Gebauer-Möller pair elimination, the
//! selection strategies benchmarked in this crate, reduced-minimal-basis
//! post-processing, and complexity statistics.

use crate::algebra::{reduce, reduce_tracked, s_polynomial, Monomial, Polynomial, PrimeField};
use crate::error::{Error, Result};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::str::FromStr;

/// An index pair into the generator list with cached metadata. The
/// generators are never mutated, so the cached lcm stays valid.
#[derive(Debug, Clone)]
pub struct SPair {
    pub i: usize,
    pub j: usize,
    pub lcm: Monomial,
    pub degree: u32,
    pub sugar: u32,
    pub insertion_seq: u64,
}

/// Pair-set maintenance mode. `Naive` is the plain union used as a
/// differential-testing baseline for the Gebauer-Möller criteria.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PairUpdateMode {
    #[default]
    GebauerMoller,
    Naive,
}

/// S-pair selection strategies. All are deterministic except `Random`,
/// which is deterministic given its RNG seed. Learned policies act
/// through the environment's action interface instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SelectionStrategy {
    /// Treat the pair set as a queue: minimal j, then minimal i.
    First,
    /// Minimal total degree of the pair lcm, ties by First.
    Degree,
    /// Lcm minimal in grevlex, ties by First.
    Normal,
    /// Minimal sugar degree, ties by Normal.
    Sugar,
    /// Uniform over the pair set.
    Random,
    /// Minimal total degree of the actual S-polynomial's leading
    /// monomial, computed on demand; ties by First.
    TrueDegree,
}

impl SelectionStrategy {
    pub const ALL: [SelectionStrategy; 6] = [
        SelectionStrategy::First,
        SelectionStrategy::Degree,
        SelectionStrategy::Normal,
        SelectionStrategy::Sugar,
        SelectionStrategy::Random,
        SelectionStrategy::TrueDegree,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SelectionStrategy::First => "first",
            SelectionStrategy::Degree => "degree",
            SelectionStrategy::Normal => "normal",
            SelectionStrategy::Sugar => "sugar",
            SelectionStrategy::Random => "random",
            SelectionStrategy::TrueDegree => "truedegree",
        }
    }
}

impl FromStr for SelectionStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "first" => Ok(SelectionStrategy::First),
            "degree" => Ok(SelectionStrategy::Degree),
            "normal" => Ok(SelectionStrategy::Normal),
            "sugar" => Ok(SelectionStrategy::Sugar),
            "random" => Ok(SelectionStrategy::Random),
            "truedegree" => Ok(SelectionStrategy::TrueDegree),
            other => Err(Error::InvalidArgument(format!(
                "unknown strategy '{other}' (expected first, degree, normal, sugar, random, truedegree)"
            ))),
        }
    }
}

/// Per-run statistics. `basis_size`, `deg_max` and `dimension` refer to
/// the reduced minimal basis computed after the run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunStats {
    pub additions: u64,
    pub pairs_processed: u64,
    pub zero_reductions: u64,
    pub basis_size: usize,
    pub deg_max: u32,
    pub dimension: i32,
    pub truncated: bool,
    #[serde(skip)]
    pub per_pair_additions: Vec<u64>,
}

/// Optional caps on a run.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunLimits {
    /// Maximum number of pairs processed before truncation.
    pub max_steps: Option<u64>,
}

/// Live state of a Buchberger run: generator list, sugar table, ordered
/// pair set and addition counters. The environment wraps this directly
/// so that episodic and batch runs share one code path.
#[derive(Debug, Clone)]
pub struct BuchbergerState {
    field: PrimeField,
    n: usize,
    generators: Vec<Polynomial>,
    sugar_of: Vec<u32>,
    pairs: Vec<SPair>,
    next_seq: u64,
    update_mode: PairUpdateMode,
    pub additions_total: u64,
    pub pairs_processed: u64,
    pub zero_reductions: u64,
    pub per_pair_additions: Vec<u64>,
}

impl BuchbergerState {
    /// Builds the initial state by inserting the generators one at a
    /// time through `update`, so pair elimination applies to the input
    /// pairs as well.
    pub fn new(field: PrimeField, inputs: &[Polynomial], mode: PairUpdateMode) -> Result<Self> {
        if inputs.is_empty() {
            return Err(Error::InvalidArgument("empty generating set".into()));
        }
        let n = inputs[0].num_vars();
        let mut state = Self {
            field,
            n,
            generators: vec![],
            sugar_of: vec![],
            pairs: vec![],
            next_seq: 0,
            update_mode: mode,
            additions_total: 0,
            pairs_processed: 0,
            zero_reductions: 0,
            per_pair_additions: vec![],
        };
        for f in inputs {
            if f.is_zero() {
                return Err(Error::InvalidArgument("zero input generator".into()));
            }
            if f.num_vars() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: f.num_vars(),
                });
            }
            let sugar = f.degree();
            state.update(f.clone(), sugar);
        }
        Ok(state)
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn sugar_of(&self) -> &[u32] {
        &self.sugar_of
    }

    /// Live pairs in insertion order.
    pub fn pairs(&self) -> &[SPair] {
        &self.pairs
    }

    pub fn is_done(&self) -> bool {
        self.pairs.is_empty()
    }

    fn pair_sugar(&self, i: usize, j: usize, lcm: &Monomial) -> u32 {
        let deg = lcm.degree();
        let di = self.generators[i].leading_monomial().unwrap().degree();
        let dj = self.generators[j].leading_monomial().unwrap().degree();
        (self.sugar_of[i] + deg - di).max(self.sugar_of[j] + deg - dj)
    }

    /// Appends `r` as a generator and rebuilds the pair set, applying
    /// the Gebauer-Möller criteria (or the plain union in naive mode).
    pub fn update(&mut self, r: Polynomial, sugar_r: u32) {
        let new_idx = self.generators.len();
        let t = r.leading_monomial().expect("update requires nonzero r").clone();

        let candidate_lcms: Vec<Monomial> = self
            .generators
            .iter()
            .map(|g| g.leading_monomial().unwrap().lcm(&t))
            .collect();

        let keep_new: Vec<bool> = match self.update_mode {
            PairUpdateMode::Naive => vec![true; new_idx],
            PairUpdateMode::GebauerMoller => {
                let mut keep = vec![true; new_idx];
                // (b) discard new pairs whose lcm is strictly divisible
                // by another new pair's lcm; keep one representative
                // per duplicated lcm (the lowest index, hence the
                // smaller insertion_seq).
                for k in 0..new_idx {
                    for k2 in 0..new_idx {
                        if k == k2 || !keep[k] {
                            continue;
                        }
                        if candidate_lcms[k2].divides(&candidate_lcms[k])
                            && candidate_lcms[k2] != candidate_lcms[k]
                        {
                            keep[k] = false;
                        }
                    }
                }
                for k in 0..new_idx {
                    if !keep[k] {
                        continue;
                    }
                    for k2 in 0..k {
                        if keep[k2] && candidate_lcms[k2] == candidate_lcms[k] {
                            keep[k] = false;
                            break;
                        }
                    }
                }
                // (c) coprime criterion.
                for k in 0..new_idx {
                    if keep[k]
                        && self.generators[k]
                            .leading_monomial()
                            .unwrap()
                            .gcd(&t)
                            .is_one()
                    {
                        keep[k] = false;
                    }
                }
                // (a) prune old pairs whose lcm is strictly divisible by
                // LM(r), unless it coincides with one of the new lcms.
                self.pairs.retain(|p| {
                    let strictly = t.divides(&p.lcm) && t != p.lcm;
                    !(strictly && p.lcm != candidate_lcms[p.i] && p.lcm != candidate_lcms[p.j])
                });
                keep
            }
        };

        self.generators.push(r);
        self.sugar_of.push(sugar_r);
        for (k, lcm) in candidate_lcms.into_iter().enumerate() {
            if !keep_new[k] {
                continue;
            }
            let sugar = self.pair_sugar(k, new_idx, &lcm);
            self.pairs.push(SPair {
                i: k,
                j: new_idx,
                degree: lcm.degree(),
                sugar,
                lcm,
                insertion_seq: self.next_seq,
            });
            self.next_seq += 1;
        }
    }

    /// Selects a pair per the strategy and returns its index into
    /// [`pairs`](Self::pairs).
    pub fn select_index<R: Rng>(&self, strategy: SelectionStrategy, rng: &mut R) -> Result<usize> {
        if self.pairs.is_empty() {
            return Err(Error::InvalidState("selection from an empty pair set".into()));
        }
        let first_key = |p: &SPair| (p.j, p.i);
        let idx = match strategy {
            SelectionStrategy::First => argmin(&self.pairs, |p| first_key(p)),
            SelectionStrategy::Degree => argmin(&self.pairs, |p| (p.degree, first_key(p))),
            SelectionStrategy::Normal => argmin(&self.pairs, |p| (p.lcm.clone(), first_key(p))),
            SelectionStrategy::Sugar => {
                argmin(&self.pairs, |p| (p.sugar, p.lcm.clone(), first_key(p)))
            }
            SelectionStrategy::Random => rng.gen_range(0..self.pairs.len()),
            SelectionStrategy::TrueDegree => argmin(&self.pairs, |p| {
                let s = s_polynomial(&self.generators[p.i], &self.generators[p.j], &self.field)
                    .expect("generators are nonzero");
                let d = s.leading_monomial().map(|m| m.degree() as i64).unwrap_or(-1);
                (d, first_key(p))
            }),
        };
        Ok(idx)
    }

    /// Processes the pair at `index`: forms the S-polynomial (one
    /// addition), fully reduces it against the current generators, and
    /// on a nonzero remainder appends it through `update`. Returns the
    /// additions incurred by this pair.
    pub fn process_pair_at(&mut self, index: usize) -> Result<u64> {
        if index >= self.pairs.len() {
            return Err(Error::InvalidAction {
                action: index,
                pairs: self.pairs.len(),
            });
        }
        let pair = self.pairs.remove(index);
        let s = s_polynomial(
            &self.generators[pair.i],
            &self.generators[pair.j],
            &self.field,
        )?;
        let mut additions = 1u64;
        let (res, sugar_r) = reduce_tracked(
            &s,
            pair.sugar,
            &self.generators,
            Some(&self.sugar_of),
            &self.field,
        );
        additions += res.additions;
        if res.remainder.is_zero() {
            self.zero_reductions += 1;
        } else {
            self.update(res.remainder, sugar_r);
        }
        self.pairs_processed += 1;
        self.additions_total += additions;
        self.per_pair_additions.push(additions);
        Ok(additions)
    }

    /// Statistics snapshot; basis metrics come from the reduced
    /// minimal basis of the current generators.
    pub fn stats(&self, truncated: bool) -> RunStats {
        let reduced = reduce_basis(&self.generators, &self.field);
        let deg_max = reduced.iter().map(|g| g.degree()).max().unwrap_or(0);
        let leads: Vec<Monomial> = reduced
            .iter()
            .filter_map(|g| g.leading_monomial().cloned())
            .collect();
        RunStats {
            additions: self.additions_total,
            pairs_processed: self.pairs_processed,
            zero_reductions: self.zero_reductions,
            basis_size: reduced.len(),
            deg_max,
            dimension: dimension(&leads, self.n),
            truncated,
            per_pair_additions: self.per_pair_additions.clone(),
        }
    }
}

fn argmin<T, K: Ord>(items: &[T], key: impl Fn(&T) -> K) -> usize {
    let mut best = 0;
    let mut best_key = key(&items[0]);
    for (i, item) in items.iter().enumerate().skip(1) {
        let k = key(item);
        if k < best_key {
            best = i;
            best_key = k;
        }
    }
    best
}

/// Runs Buchberger's algorithm to completion (or to the step cap) and
/// returns the final generator list with run statistics.
pub fn buchberger<R: Rng>(
    inputs: &[Polynomial],
    field: PrimeField,
    strategy: SelectionStrategy,
    mode: PairUpdateMode,
    rng: &mut R,
    limits: RunLimits,
) -> Result<(Vec<Polynomial>, RunStats)> {
    let mut state = BuchbergerState::new(field, inputs, mode)?;
    let mut truncated = false;
    while !state.is_done() {
        if let Some(cap) = limits.max_steps {
            if state.pairs_processed >= cap {
                truncated = true;
                break;
            }
        }
        let idx = state.select_index(strategy, rng)?;
        state.process_pair_at(idx)?;
    }
    let stats = state.stats(truncated);
    Ok((state.generators, stats))
}

/// The unique minimal reduced Gröbner basis: monic generators, no
/// monomial of any generator divisible by another's lead, sorted by
/// grevlex order of leads.
pub fn reduce_basis(basis: &[Polynomial], field: &PrimeField) -> Vec<Polynomial> {
    // Autoreduce to a fixpoint: replace each element by its full
    // reduction against the others, dropping zeros, until stable.
    let mut work: Vec<Polynomial> = basis.iter().filter(|g| !g.is_zero()).cloned().collect();
    'outer: loop {
        for i in 0..work.len() {
            let others: Vec<Polynomial> = work
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != i)
                .map(|(_, g)| g.clone())
                .collect();
            let r = reduce(&work[i], &others, field).remainder;
            if r != work[i] {
                if r.is_zero() {
                    work.remove(i);
                } else {
                    work[i] = r;
                }
                continue 'outer;
            }
        }
        break;
    }
    let mut out: Vec<Polynomial> = work
        .into_iter()
        .map(|g| g.monic(field).unwrap())
        .collect();
    out.sort_by(|a, b| a.leading_monomial().unwrap().cmp(b.leading_monomial().unwrap()));
    out
}

/// Krull dimension of the quotient by the monomial ideal generated by
/// `leads`: the largest variable subset S such that no lead has its
/// support inside S, found exhaustively over the 2^n subsets. A
/// constant lead (unit ideal) yields the sentinel -1.
pub fn dimension(leads: &[Monomial], n: usize) -> i32 {
    if leads.iter().any(|m| m.is_one()) {
        return -1;
    }
    if leads.is_empty() {
        return n as i32;
    }
    let supports: Vec<u32> = leads
        .iter()
        .map(|m| m.support().fold(0u32, |acc, i| acc | (1 << i)))
        .collect();
    let mut best = 0i32;
    for mask in 0u32..(1 << n) {
        if supports.iter().all(|&s| s & !mask != 0) {
            best = best.max(mask.count_ones() as i32);
        }
    }
    best
}
