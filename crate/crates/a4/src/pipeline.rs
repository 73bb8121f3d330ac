//! Mining and learning end to end: example sources in, pattern store out.

use std::path::Path;

use log::{info, warn};
use rayon::prelude::*;

use crate::catalog::ApiCatalog;
use crate::learner::{learn_mapping, LearnConfig, LearnError};
use crate::miner::{discover_sources, mine_all, partition_non_migrations, MigrationExample, MineError};
use crate::migrator::replays_own_example;
use crate::pattern::{MigrationMapping, PatternRecord};

/// Everything `mine` found.
#[derive(Debug, Default)]
pub struct MineSummary {
    pub patterns: Vec<MigrationMapping>,
    pub non_migrations: Vec<MigrationExample>,
    /// Examples whose pattern came out empty, e.g. pure renames.
    pub empty: usize,
    /// Examples the learner could not process.
    pub failed: usize,
}

impl MineSummary {
    pub fn records(&self) -> Vec<PatternRecord> {
        self.patterns.iter().map(|p| p.record.clone()).collect()
    }
}

/// Mines all sources under `examples_root` and learns one pattern per
/// migration example. Patterns that fail to reproduce their own example are
/// kept but marked unreplayable.
pub fn mine_patterns(
    examples_root: &Path,
    catalog: &ApiCatalog,
    cfg: &LearnConfig,
) -> Result<MineSummary, MineError> {
    let sources = discover_sources(examples_root)?;
    let examples = mine_all(&sources, catalog)?;
    let (migrations, non_migrations) = partition_non_migrations(examples, catalog);
    let learned: Vec<Result<MigrationMapping, LearnError>> = migrations
        .par_iter()
        .map(|ex| {
            let mut m = learn_mapping(ex, cfg)?;
            if !m.removes_call() && !replays_own_example(&m, ex, catalog) {
                warn!("{}: pattern does not replay its example", ex.id());
                m.record.replayable = false;
            }
            Ok(m)
        })
        .collect();
    let mut summary = MineSummary {
        non_migrations,
        ..MineSummary::default()
    };
    for (ex, r) in migrations.iter().zip(learned) {
        match r {
            Ok(m) => summary.patterns.push(m),
            Err(LearnError::EmptyPattern) => summary.empty += 1,
            Err(e) => {
                warn!("{}: {e}", ex.id());
                summary.failed += 1;
            }
        }
    }
    info!(
        "{} patterns, {} non-migrations, {} empty",
        summary.patterns.len(),
        summary.non_migrations.len(),
        summary.empty
    );
    Ok(summary)
}

/// Store-order identifiers: `sourceId#k`, counting per source from 1.
pub fn pattern_ids(records: &[PatternRecord]) -> Vec<String> {
    let mut seen: std::collections::BTreeMap<&str, usize> = Default::default();
    records
        .iter()
        .map(|r| {
            let k = seen.entry(&r.source_id).or_insert(0);
            *k += 1;
            format!("{}#{}", r.source_id, k)
        })
        .collect()
}
