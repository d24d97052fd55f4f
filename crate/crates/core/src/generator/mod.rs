//! Sequential k-generators: `init(seed)` then a stream of `emit()` calls
//! whose values form an `(n, k)`-sequence.
//!
//! Kinds:
//!
//! * `horner`: a random polynomial with `k` coefficients evaluated at
//!   `0, 1, 2, ...` in the field's enumeration order.
//! * `fft-batch`: the same polynomial evaluated `k` points at a time with
//!   an FFT over a partition of the field into structured batches.
//! * `table`: emits its seed; fully independent, period `m`.
//! * `expander`: each value is the field sum of table entries at the
//!   neighbors of a left vertex of a random graph, where the table holds
//!   `m` values of a `dk`-independent inner generator.
//! * `cascade`: `t` expander levels applied one after another.
//!
//! A [`Blueprint`] holds every parameter except the seed. It reports the
//! [`GeneratorDescriptor`] and builds generator instances from seeds.

mod batch;
mod expander;
mod horner;
mod table;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::RngCore;
use thiserror::Error;

use crate::expander::{
    log_sum_exp, rank_failure_bound, unique_failure_bound, BipartiteGraph, ExpanderError,
    HashedGraph, NeighborSource,
};
use crate::fft::FftError;
use crate::field::{Field, FieldContext, FieldError};
use crate::poly::PolyError;

pub use batch::{gray_code, BinaryBatchGenerator, PrimeBatchGenerator};
pub use expander::{CascadeGenerator, ExpanderGenerator};
pub use horner::HornerGenerator;
pub use table::TableGenerator;

#[derive(Debug, Error)]
pub enum GeneratorError {
    #[error("seed has {got} elements, expected {expected}")]
    SeedLength { expected: usize, got: usize },
    #[error("stream exhausted after {emitted} values (period {period})")]
    PeriodExhausted { emitted: u128, period: u128 },
    #[error("requested {requested} values but only {remaining} remain in the period")]
    CountExceedsPeriod { requested: u128, remaining: u128 },
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error(
        "unknown generator kind `{0}` (expected horner, fft-batch, table, expander or cascade)"
    )]
    UnknownKind(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Fft(#[from] FftError),
    #[error(transparent)]
    Expander(#[from] ExpanderError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Horner,
    FftBatch,
    Table,
    Expander,
    Cascade,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Horner => "horner",
            Kind::FftBatch => "fft-batch",
            Kind::Table => "table",
            Kind::Expander => "expander",
            Kind::Cascade => "cascade",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = GeneratorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "horner" => Kind::Horner,
            "fft-batch" | "fft" => Kind::FftBatch,
            "table" => Kind::Table,
            "expander" => Kind::Expander,
            "cascade" => Kind::Cascade,
            _ => return Err(GeneratorError::UnknownKind(s.to_string())),
        })
    }
}

/// Public parameters of a generator.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorDescriptor {
    pub kind: Kind,
    /// Field description such as `gf2w:64` or `gfp:257`.
    pub field: String,
    /// Independence `k`.
    pub k: usize,
    /// Number of values before the guarantee runs out.
    pub period: u128,
    /// `log10` of the declared failure probability; `-inf` means zero.
    pub log10_delta: f64,
    /// Seed length in field elements.
    pub seed_len: usize,
}

impl fmt::Display for GeneratorDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "kind={} field={} k={} period={} log10_delta={} seed_len={}",
            self.kind, self.field, self.k, self.period, self.log10_delta, self.seed_len
        )
    }
}

/// Work done so far, for amortized-cost accounting.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct EmitStats {
    /// Table entries read while forming outputs.
    pub table_reads: u64,
    /// Values drawn from the inner generator.
    pub inner_values: u64,
}

/// A seeded generator instance.
pub trait KGenerator: Send {
    fn descriptor(&self) -> &GeneratorDescriptor;

    /// Values emitted so far.
    fn emitted(&self) -> u128;

    fn emit(&mut self) -> Result<u64, GeneratorError>;

    /// Fills `out` with the next `out.len()` values, exactly as repeated
    /// [`KGenerator::emit`] calls would. Emits nothing if fewer values remain.
    fn emit_batch(&mut self, out: &mut [u64]) -> Result<(), GeneratorError>;

    fn stats(&self) -> EmitStats {
        EmitStats::default()
    }

    fn remaining(&self) -> u128 {
        self.descriptor().period - self.emitted()
    }
}

pub(crate) fn check_batch(g: &dyn KGenerator, requested: usize) -> Result<(), GeneratorError> {
    let remaining = g.remaining();
    if requested as u128 > remaining {
        return Err(GeneratorError::CountExceedsPeriod {
            requested: requested as u128,
            remaining,
        });
    }
    Ok(())
}

pub(crate) fn exhausted(d: &GeneratorDescriptor) -> GeneratorError {
    GeneratorError::PeriodExhausted {
        emitted: d.period,
        period: d.period,
    }
}

/// Builds generator instances from seeds.
pub trait GeneratorFactory: Sync {
    fn descriptor(&self) -> GeneratorDescriptor;
    fn field(&self) -> &FieldContext;
    fn init(&self, seed: &[u64]) -> Result<Box<dyn KGenerator>, GeneratorError>;

    /// Draws a uniform seed from `rng`.
    fn random_seed(&self, rng: &mut dyn RngCore) -> Vec<u64> {
        let f = self.field();
        (0..self.descriptor().seed_len)
            .map(|_| f.random_element(rng))
            .collect()
    }
}

/// Graph used by an expander level, stored or recomputed on demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphSpec {
    Stored(Arc<BipartiteGraph>),
    Hashed(HashedGraph),
}

impl NeighborSource for GraphSpec {
    fn imbalance(&self) -> usize {
        match self {
            GraphSpec::Stored(g) => g.imbalance(),
            GraphSpec::Hashed(g) => g.imbalance(),
        }
    }
    fn right(&self) -> usize {
        match self {
            GraphSpec::Stored(g) => g.right(),
            GraphSpec::Hashed(g) => g.right(),
        }
    }
    fn degree(&self) -> usize {
        match self {
            GraphSpec::Stored(g) => g.degree(),
            GraphSpec::Hashed(g) => g.degree(),
        }
    }
    #[inline]
    fn neighbors_into(&self, i: usize, out: &mut [u32]) -> usize {
        match self {
            GraphSpec::Stored(g) => g.neighbors_into(i, out),
            GraphSpec::Hashed(g) => g.neighbors_into(i, out),
        }
    }
}

/// Where sampled graphs live.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GraphStorage {
    /// Stored when the adjacency array fits in [`STORED_GRAPH_LIMIT`] bytes.
    #[default]
    Auto,
    Stored,
    Hashed,
}

/// Largest adjacency array, in bytes, that `GraphStorage::Auto` stores.
pub const STORED_GRAPH_LIMIT: usize = 256 << 20;

impl GraphSpec {
    pub fn sample(
        c: usize,
        m: usize,
        d: usize,
        key: u64,
        storage: GraphStorage,
    ) -> Result<Self, ExpanderError> {
        let hashed = HashedGraph::new(c, m, d, key)?;
        let stored = match storage {
            GraphStorage::Stored => true,
            GraphStorage::Hashed => false,
            GraphStorage::Auto => {
                c.saturating_mul(m).saturating_mul(d).saturating_mul(4) <= STORED_GRAPH_LIMIT
            }
        };
        Ok(if stored {
            GraphSpec::Stored(Arc::new(hashed.materialize()))
        } else {
            GraphSpec::Hashed(hashed)
        })
    }

    pub fn materialize(&self) -> Arc<BipartiteGraph> {
        match self {
            GraphSpec::Stored(g) => Arc::clone(g),
            GraphSpec::Hashed(g) => Arc::new(g.materialize()),
        }
    }
}

impl From<BipartiteGraph> for GraphSpec {
    fn from(g: BipartiteGraph) -> Self {
        GraphSpec::Stored(Arc::new(g))
    }
}

/// Inner generator family for expander and cascade constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InnerKind {
    Horner,
    FftBatch,
    Table,
}

impl FromStr for InnerKind {
    type Err = GeneratorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.parse::<Kind>()? {
            Kind::Horner => Ok(InnerKind::Horner),
            Kind::FftBatch => Ok(InnerKind::FftBatch),
            Kind::Table => Ok(InnerKind::Table),
            other => Err(GeneratorError::Infeasible(format!(
                "{other} cannot serve as an inner generator"
            ))),
        }
    }
}

/// Every parameter of a generator except its seed.
#[derive(Debug, Clone)]
pub enum Blueprint {
    Horner {
        field: FieldContext,
        k: usize,
    },
    FftBatch {
        field: FieldContext,
        k: usize,
    },
    Table {
        field: FieldContext,
        m: usize,
    },
    Expander {
        field: FieldContext,
        k: usize,
        graph: GraphSpec,
        inner: Box<Blueprint>,
    },
    Cascade {
        field: FieldContext,
        k: usize,
        /// `levels[i]` maps a table of `c^i m` values to one of `c^(i+1) m`.
        levels: Vec<GraphSpec>,
        base: Box<Blueprint>,
    },
}

/// Declared failure probability of one expander level, in log10.
///
/// Over characteristic 2 the `F_2` row-independence bound applies; over
/// prime fields only unique-neighbor expansion carries over, and its bound
/// needs `k d <= m` (otherwise the level declares the vacuous bound 1).
fn level_log10_delta(
    field: &FieldContext,
    c: usize,
    m: usize,
    d: usize,
    k: usize,
) -> Result<f64, ExpanderError> {
    if field.characteristic_two() {
        Ok(rank_failure_bound(c, m, d, k)?.log10_delta)
    } else if k.saturating_mul(d) <= m {
        Ok(unique_failure_bound(c, m, d, k)?.log10_delta.min(0.0))
    } else {
        Ok(0.0)
    }
}

impl Blueprint {
    pub fn horner(field: FieldContext, k: usize) -> Result<Self, GeneratorError> {
        if k == 0 {
            return Err(PolyError::Empty.into());
        }
        if k as u128 > field.order() {
            return Err(PolyError::TooManyCoefficients {
                k,
                order: field.order(),
            }
            .into());
        }
        Ok(Blueprint::Horner { field, k })
    }

    pub fn fft_batch(field: FieldContext, k: usize) -> Result<Self, GeneratorError> {
        if k == 0 {
            return Err(PolyError::Empty.into());
        }
        if k as u128 > field.order() {
            return Err(PolyError::TooManyCoefficients {
                k,
                order: field.order(),
            }
            .into());
        }
        if let FieldContext::Prime(f) = &field {
            let group = f.modulus() - 1;
            if !k.is_power_of_two() {
                return Err(FftError::NotPowerOfTwo(k).into());
            }
            if group % k as u64 != 0 {
                return Err(FftError::NotDivisor { k, group }.into());
            }
        }
        Ok(Blueprint::FftBatch { field, k })
    }

    pub fn table(field: FieldContext, m: usize) -> Result<Self, GeneratorError> {
        if m == 0 {
            return Err(GeneratorError::Infeasible(
                "table size must be positive".into(),
            ));
        }
        Ok(Blueprint::Table { field, m })
    }

    /// Expander generator over an explicit graph. The inner generator must
    /// be at least `d k`-independent and its period a multiple of `m`.
    pub fn expander(
        field: FieldContext,
        k: usize,
        graph: GraphSpec,
        inner: Blueprint,
    ) -> Result<Self, GeneratorError> {
        let m = graph.right();
        check_inner(&field, &inner, k * graph.degree(), m)?;
        Ok(Blueprint::Expander {
            field,
            k,
            graph,
            inner: Box::new(inner),
        })
    }

    /// Cascade over explicit level graphs; `levels[i]` must be a
    /// `(c, c^i m, d)`-graph where `m` is the base block size.
    pub fn cascade(
        field: FieldContext,
        k: usize,
        levels: Vec<GraphSpec>,
        base: Blueprint,
    ) -> Result<Self, GeneratorError> {
        let d = levels.iter().map(NeighborSource::degree).max().unwrap_or(1);
        let m = match levels.first() {
            Some(g) => g.right(),
            None => base.block_hint(),
        };
        let mut right = m;
        for (i, g) in levels.iter().enumerate() {
            if g.right() != right {
                return Err(GeneratorError::Infeasible(format!(
                    "level {} has right side {} but the previous table holds {right} values",
                    i + 1,
                    g.right()
                )));
            }
            right = g.left();
        }
        let t = levels.len() as u32;
        let need = d
            .checked_pow(t)
            .and_then(|x| x.checked_mul(k))
            .ok_or_else(|| {
                GeneratorError::Infeasible("independence target d^t k overflows".into())
            })?;
        check_inner(&field, &base, need, m)?;
        Ok(Blueprint::Cascade {
            field,
            k,
            levels,
            base: Box::new(base),
        })
    }

    /// Natural block size of a generator used as a cascade base with no
    /// levels.
    fn block_hint(&self) -> usize {
        match self {
            Blueprint::Table { m, .. } => *m,
            _ => 1,
        }
    }

    pub fn kind(&self) -> Kind {
        match self {
            Blueprint::Horner { .. } => Kind::Horner,
            Blueprint::FftBatch { .. } => Kind::FftBatch,
            Blueprint::Table { .. } => Kind::Table,
            Blueprint::Expander { .. } => Kind::Expander,
            Blueprint::Cascade { .. } => Kind::Cascade,
        }
    }

    pub fn field_context(&self) -> &FieldContext {
        match self {
            Blueprint::Horner { field, .. }
            | Blueprint::FftBatch { field, .. }
            | Blueprint::Table { field, .. }
            | Blueprint::Expander { field, .. }
            | Blueprint::Cascade { field, .. } => field,
        }
    }

    pub fn seed_len(&self) -> usize {
        match self {
            Blueprint::Horner { k, .. } | Blueprint::FftBatch { k, .. } => *k,
            Blueprint::Table { m, .. } => *m,
            Blueprint::Expander { inner, .. } => inner.seed_len(),
            Blueprint::Cascade { base, .. } => base.seed_len(),
        }
    }

    /// Levels of graphs, outermost last.
    pub fn graphs(&self) -> Vec<&GraphSpec> {
        match self {
            Blueprint::Expander { graph, .. } => vec![graph],
            Blueprint::Cascade { levels, .. } => levels.iter().collect(),
            _ => Vec::new(),
        }
    }

    pub fn inner(&self) -> Option<&Blueprint> {
        match self {
            Blueprint::Expander { inner, .. } => Some(inner),
            Blueprint::Cascade { base, .. } => Some(base),
            _ => None,
        }
    }

    fn period(&self) -> u128 {
        match self {
            Blueprint::Horner { field, .. } => field.order(),
            Blueprint::FftBatch { field, .. } => match field {
                FieldContext::Binary(f) => f.order(),
                FieldContext::Prime(f) => f.order() - 1,
            },
            Blueprint::Table { m, .. } => *m as u128,
            Blueprint::Expander { graph, inner, .. } => {
                inner.period() / graph.right() as u128 * graph.left() as u128
            }
            Blueprint::Cascade { levels, base, .. } => match (levels.first(), levels.last()) {
                (Some(first), Some(last)) => {
                    base.period() / first.right() as u128 * last.left() as u128
                }
                _ => base.period(),
            },
        }
    }

    fn log10_delta(&self) -> f64 {
        match self {
            Blueprint::Horner { .. } | Blueprint::FftBatch { .. } | Blueprint::Table { .. } => {
                f64::NEG_INFINITY
            }
            Blueprint::Expander {
                field, k, graph, ..
            } => level_log10_delta(field, graph.imbalance(), graph.right(), graph.degree(), *k)
                .unwrap_or(0.0)
                .min(0.0),
            Blueprint::Cascade {
                field, k, levels, ..
            } => {
                let t = levels.len() as u32;
                let terms: Vec<f64> = levels
                    .iter()
                    .enumerate()
                    .map(|(i, g)| {
                        let target = g.degree().pow(t - 1 - i as u32) * k;
                        level_log10_delta(field, g.imbalance(), g.right(), g.degree(), target)
                            .unwrap_or(0.0)
                            * std::f64::consts::LN_10
                    })
                    .collect();
                (log_sum_exp(&terms) / std::f64::consts::LN_10).min(0.0)
            }
        }
    }

    fn independence(&self) -> usize {
        match self {
            Blueprint::Horner { k, .. }
            | Blueprint::FftBatch { k, .. }
            | Blueprint::Expander { k, .. }
            | Blueprint::Cascade { k, .. } => *k,
            Blueprint::Table { m, .. } => *m,
        }
    }

    /// Builds an instance from a uniformly random seed.
    pub fn init_random(
        &self,
        rng: &mut dyn RngCore,
    ) -> Result<Box<dyn KGenerator>, GeneratorError> {
        let seed = self.random_seed(rng);
        self.init(&seed)
    }
}

fn check_inner(
    field: &FieldContext,
    inner: &Blueprint,
    need: usize,
    m: usize,
) -> Result<(), GeneratorError> {
    if inner.field_context() != field {
        return Err(GeneratorError::Infeasible(format!(
            "inner generator is over {} but the expander is over {field}",
            inner.field_context()
        )));
    }
    if inner.independence() < need {
        return Err(GeneratorError::Infeasible(format!(
            "inner generator is {}-independent but {need} is required",
            inner.independence()
        )));
    }
    let period = inner.period();
    if period < m as u128 || period % m as u128 != 0 {
        return Err(GeneratorError::Infeasible(format!(
            "table size m = {m} must divide the inner period {period}"
        )));
    }
    Ok(())
}

impl GeneratorFactory for Blueprint {
    fn descriptor(&self) -> GeneratorDescriptor {
        GeneratorDescriptor {
            kind: self.kind(),
            field: self.field_context().describe(),
            k: self.independence(),
            period: self.period(),
            log10_delta: self.log10_delta(),
            seed_len: self.seed_len(),
        }
    }

    fn field(&self) -> &FieldContext {
        self.field_context()
    }

    fn init(&self, seed: &[u64]) -> Result<Box<dyn KGenerator>, GeneratorError> {
        let expected = self.seed_len();
        if seed.len() != expected {
            return Err(GeneratorError::SeedLength {
                expected,
                got: seed.len(),
            });
        }
        let field = self.field_context();
        for &x in seed {
            field.check(x)?;
        }
        let desc = self.descriptor();
        Ok(match (self, field) {
            (Blueprint::Horner { .. }, FieldContext::Binary(f)) => {
                Box::new(HornerGenerator::new(f.clone(), seed, desc)?)
            }
            (Blueprint::Horner { .. }, FieldContext::Prime(f)) => {
                Box::new(HornerGenerator::new(f.clone(), seed, desc)?)
            }
            (Blueprint::FftBatch { .. }, FieldContext::Binary(f)) => {
                Box::new(BinaryBatchGenerator::new(f.clone(), seed, desc)?)
            }
            (Blueprint::FftBatch { .. }, FieldContext::Prime(f)) => {
                Box::new(PrimeBatchGenerator::new(f.clone(), seed, desc)?)
            }
            (Blueprint::Table { .. }, _) => Box::new(TableGenerator::new(seed, desc)),
            (Blueprint::Expander { graph, inner, .. }, FieldContext::Binary(f)) => {
                let inner = inner.init(seed)?;
                match graph {
                    GraphSpec::Stored(g) => Box::new(ExpanderGenerator::new(
                        f.clone(),
                        Arc::clone(g),
                        inner,
                        desc,
                    )?),
                    GraphSpec::Hashed(g) => {
                        Box::new(ExpanderGenerator::new(f.clone(), g.clone(), inner, desc)?)
                    }
                }
            }
            (Blueprint::Expander { graph, inner, .. }, FieldContext::Prime(f)) => {
                let inner = inner.init(seed)?;
                match graph {
                    GraphSpec::Stored(g) => Box::new(ExpanderGenerator::new(
                        f.clone(),
                        Arc::clone(g),
                        inner,
                        desc,
                    )?),
                    GraphSpec::Hashed(g) => {
                        Box::new(ExpanderGenerator::new(f.clone(), g.clone(), inner, desc)?)
                    }
                }
            }
            (Blueprint::Cascade { levels, base, .. }, FieldContext::Binary(f)) => {
                Box::new(CascadeGenerator::new(
                    f.clone(),
                    levels.clone(),
                    base.init(seed)?,
                    base.block_hint(),
                    desc,
                )?)
            }
            (Blueprint::Cascade { levels, base, .. }, FieldContext::Prime(f)) => {
                Box::new(CascadeGenerator::new(
                    f.clone(),
                    levels.clone(),
                    base.init(seed)?,
                    base.block_hint(),
                    desc,
                )?)
            }
        })
    }
}

/// Blueprint of an inner generator that is at least `need`-independent.
///
/// Batch evaluation rounds `need` up to a power of two, which is required
/// over prime fields and free over binary fields.
pub fn inner_blueprint(
    field: FieldContext,
    kind: InnerKind,
    need: usize,
    m: usize,
) -> Result<Blueprint, GeneratorError> {
    match kind {
        InnerKind::Horner => Blueprint::horner(field, need),
        InnerKind::FftBatch => Blueprint::fft_batch(field, need.next_power_of_two()),
        InnerKind::Table => {
            if m < need {
                return Err(GeneratorError::Infeasible(format!(
                    "a table of {m} values is only {m}-independent, {need} is required"
                )));
            }
            Blueprint::table(field, m)
        }
    }
}

/// Parameters of a randomly sampled expander generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpanderParams {
    pub k: usize,
    pub c: usize,
    pub m: usize,
    pub d: usize,
    pub inner: InnerKind,
    pub storage: GraphStorage,
}

/// Samples a `(c, m, d)`-graph keyed by `graph_key` and composes it with a
/// `d k`-independent inner generator. The declared failure probability is
/// the bound for these parameters.
pub fn build_expander_generator(
    field: FieldContext,
    params: &ExpanderParams,
    graph_key: u64,
) -> Result<Blueprint, GeneratorError> {
    let ExpanderParams {
        k,
        c,
        m,
        d,
        inner,
        storage,
    } = *params;
    if k == 0 {
        return Err(ExpanderError::ZeroSize.into());
    }
    let graph = GraphSpec::sample(c, m, d, graph_key, storage)?;
    let inner = inner_blueprint(field.clone(), inner, d * k, m)?;
    Blueprint::expander(field, k, graph, inner)
}

/// Parameters of a randomly sampled cascade generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CascadeParams {
    pub k: usize,
    pub c: usize,
    pub m: usize,
    pub d: usize,
    pub t: usize,
    pub base: InnerKind,
    pub storage: GraphStorage,
}

/// Key of level `i` derived from the cascade's graph key.
pub fn level_key(graph_key: u64, level: usize) -> u64 {
    let mut z = graph_key.wrapping_add((level as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Samples level graphs `(c, c^(i-1) m, d)` for `i = 1..=t` and a
/// `d^t k`-independent base generator.
pub fn build_cascade_generator(
    field: FieldContext,
    params: &CascadeParams,
    graph_key: u64,
) -> Result<Blueprint, GeneratorError> {
    let CascadeParams {
        k,
        c,
        m,
        d,
        t,
        base,
        storage,
    } = *params;
    if k == 0 || c == 0 || m == 0 || d == 0 {
        return Err(ExpanderError::ZeroSize.into());
    }
    let need = d
        .checked_pow(t as u32)
        .and_then(|x| x.checked_mul(k))
        .ok_or_else(|| GeneratorError::Infeasible("independence target d^t k overflows".into()))?;
    let mut levels = Vec::with_capacity(t);
    let mut right = m;
    for i in 0..t {
        levels.push(GraphSpec::sample(
            c,
            right,
            d,
            level_key(graph_key, i),
            storage,
        )?);
        right = right
            .checked_mul(c)
            .ok_or_else(|| GeneratorError::Infeasible("level sizes overflow".into()))?;
    }
    let base = inner_blueprint(field.clone(), base, need, m)?;
    Blueprint::cascade(field, k, levels, base)
}
