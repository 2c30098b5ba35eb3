use super::{CosetTable, Felsch, Hlt, Limits, Overflow, RelatorSet};
use crate::words::Word;

/// A coset enumeration strategy: fills `table` until it is complete and
/// consistent with every relator, or reports that a limit was hit.
///
/// The caller runs a final consistency sweep and standardizes the result, so
/// strategies only need to produce some complete table.
pub trait EnumerationStrategy: Send + Sync {
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str;

    fn run(
        &self,
        table: &mut CosetTable,
        relators: &RelatorSet,
        subgroup: &[Word],
        limits: &Limits,
    ) -> Result<(), Overflow>;
}

/// Strategies registered by name, in registration order.
pub struct StrategyRegistry {
    entries: Vec<Box<dyn EnumerationStrategy>>,
}

impl StrategyRegistry {
    pub fn empty() -> Self {
        StrategyRegistry { entries: Vec::new() }
    }

    /// Adds a strategy, replacing any earlier one with the same name.
    pub fn register(&mut self, strategy: Box<dyn EnumerationStrategy>) {
        self.entries.retain(|s| s.name() != strategy.name());
        self.entries.push(strategy);
    }

    pub fn get(&self, name: &str) -> Option<&dyn EnumerationStrategy> {
        self.entries.iter().find(|s| s.name() == name).map(|s| s.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|s| s.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn EnumerationStrategy> {
        self.entries.iter().map(|s| s.as_ref())
    }

    /// The strategy used when none is named.
    pub fn default_strategy(&self) -> &dyn EnumerationStrategy {
        self.get(Felsch.name()).unwrap_or_else(|| self.entries[0].as_ref())
    }
}

impl Default for StrategyRegistry {
    fn default() -> Self {
        let mut r = StrategyRegistry::empty();
        r.register(Box::new(Felsch));
        r.register(Box::new(Hlt));
        r
    }
}
