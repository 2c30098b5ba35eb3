use super::{CosetTable, EnumerationStrategy, Limits, Overflow, RelatorSet};
use crate::words::Word;

/// Relator-driven enumeration: scans and fills every relator at each coset
/// in turn. When the coset limit is reached, a lookahead pass looks for
/// coincidences before giving up.
#[derive(Clone, Copy, Debug, Default)]
pub struct Hlt;

fn lookahead(table: &mut CosetTable, rels: &RelatorSet) {
    for c in 0..table.total_defined() {
        for r in rels.relators() {
            if !table.is_live(c) {
                break;
            }
            table.scan_and_deduce(c, r.letters());
        }
    }
}

/// Retries `step` after a lookahead pass whenever it overflows, as long as the
/// lookahead freed at least one coset.
fn with_lookahead(
    table: &mut CosetTable,
    rels: &RelatorSet,
    mut step: impl FnMut(&mut CosetTable) -> Result<(), Overflow>,
) -> Result<(), Overflow> {
    loop {
        match step(table) {
            Ok(()) => return Ok(()),
            Err(o) => {
                let before = table.num_cosets();
                lookahead(table, rels);
                log::trace!("hlt lookahead: {} -> {} live cosets", before, table.num_cosets());
                if table.num_cosets() >= before {
                    return Err(o);
                }
            }
        }
    }
}

impl EnumerationStrategy for Hlt {
    fn name(&self) -> &'static str {
        "hlt"
    }

    fn description(&self) -> &'static str {
        "HLT: scan-and-fill relators coset by coset, with lookahead on overflow"
    }

    fn run(
        &self,
        table: &mut CosetTable,
        rels: &RelatorSet,
        subgroup: &[Word],
        limits: &Limits,
    ) -> Result<(), Overflow> {
        table.set_recording(false);
        for g in subgroup {
            with_lookahead(table, rels, |t| t.scan_and_fill(0, g.letters(), limits))?;
        }
        let cols = table.columns();
        let mut c = 0;
        while c < table.total_defined() {
            if table.is_live(c) {
                with_lookahead(table, rels, |t| {
                    for r in rels.relators() {
                        if !t.is_live(c) {
                            break;
                        }
                        t.scan_and_fill(c, r.letters(), limits)?;
                    }
                    for col in 0..cols {
                        if t.is_live(c) && t.entry(c, col).is_none() {
                            t.define(c, col, limits)?;
                        }
                    }
                    Ok(())
                })?;
            }
            c += 1;
        }
        Ok(())
    }
}
