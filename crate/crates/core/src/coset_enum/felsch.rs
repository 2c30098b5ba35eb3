use super::{CosetTable, EnumerationStrategy, Limits, Overflow, RelatorSet};
use crate::words::Word;

/// Deduction-driven enumeration: defines the first undefined entry, then
/// scans every cyclic relator conjugate through each new edge.
#[derive(Clone, Copy, Debug, Default)]
pub struct Felsch;

fn process_deductions(table: &mut CosetTable, rels: &RelatorSet) {
    while let Some((c, col)) = table.pop_deduction() {
        if !table.is_live(c) {
            continue;
        }
        for w in rels.starting_with(col) {
            if !table.is_live(c) {
                break;
            }
            table.scan_and_deduce(c, w);
        }
        let c = table.find(c);
        let Some(d) = table.entry(c, col) else { continue };
        let d = table.find(d);
        for w in rels.starting_with(col ^ 1) {
            if !table.is_live(d) {
                break;
            }
            table.scan_and_deduce(d, w);
        }
    }
}

impl EnumerationStrategy for Felsch {
    fn name(&self) -> &'static str {
        "felsch"
    }

    fn description(&self) -> &'static str {
        "Felsch-style: define the first gap, then process deductions"
    }

    fn run(
        &self,
        table: &mut CosetTable,
        rels: &RelatorSet,
        subgroup: &[Word],
        limits: &Limits,
    ) -> Result<(), Overflow> {
        table.set_recording(true);
        for g in subgroup {
            table.scan_and_fill(0, g.letters(), limits)?;
            process_deductions(table, rels);
        }
        let cols = table.columns();
        let mut c = 0;
        while c < table.total_defined() {
            if !table.is_live(c) {
                c += 1;
                continue;
            }
            match (0..cols).find(|&col| table.entry(c, col).is_none()) {
                Some(col) => {
                    table.define(c, col, limits)?;
                    process_deductions(table, rels);
                }
                None => c += 1,
            }
        }
        table.set_recording(false);
        Ok(())
    }
}
