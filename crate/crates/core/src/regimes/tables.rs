//! The three regime tables as class-set constraints.
//!
//! Table 1 starts from the long-term yield, table 2 from the long-term swap
//! rate and table 3 from the long-term simple rate; each row also fixes the
//! long bond.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::longterm::{LongTermClass, LongTermReport};

/// One of the four limits in a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Yield,
    Bond,
    Swap,
    Simple,
}

impl Slot {
    pub fn name(self) -> &'static str {
        match self {
            Slot::Yield => "yield",
            Slot::Bond => "long_bond",
            Slot::Swap => "swap",
            Slot::Simple => "simple",
        }
    }

    pub fn class_in(self, report: &LongTermReport) -> LongTermClass {
        match self {
            Slot::Yield => report.ell.class,
            Slot::Bond => report.long_bond.class,
            Slot::Swap => report.swap.class,
            Slot::Simple => report.simple.class,
        }
    }
}

/// A set of [`LongTermClass`] values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassSet(u8);

impl ClassSet {
    pub const fn of(classes: &[LongTermClass]) -> Self {
        let mut bits = 0u8;
        let mut i = 0;
        while i < classes.len() {
            bits |= 1 << classes[i] as u8;
            i += 1;
        }
        ClassSet(bits)
    }

    pub fn contains(self, c: LongTermClass) -> bool {
        self.0 >> c as u8 & 1 == 1
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn intersects(self, other: ClassSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn classes(self) -> impl Iterator<Item = LongTermClass> {
        LongTermClass::ALL.into_iter().filter(move |c| self.contains(*c))
    }
}

impl core::fmt::Display for ClassSet {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.classes().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(c.as_str())?;
        }
        f.write_str("}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeRow {
    pub table: u8,
    pub row: u8,
    pub given: [(Slot, ClassSet); 2],
    pub implied: [(Slot, ClassSet); 2],
}

use LongTermClass::{FiniteNegative as Neg, FinitePositive as Pos, PlusInfinity as Inf, Zero};

const NON_POSITIVE: ClassSet = ClassSet::of(&[Zero, Neg]);
const NON_NEGATIVE: ClassSet = ClassSet::of(&[Zero, Pos, Inf]);

pub const TABLE_1: [RegimeRow; 3] = [
    RegimeRow {
        table: 1,
        row: 1,
        given: [(Slot::Yield, ClassSet::of(&[Zero])), (Slot::Bond, ClassSet::of(&[Pos]))],
        implied: [(Slot::Swap, ClassSet::of(&[Zero])), (Slot::Simple, ClassSet::of(&[Zero]))],
    },
    RegimeRow {
        table: 1,
        row: 2,
        given: [(Slot::Yield, ClassSet::of(&[Pos])), (Slot::Bond, ClassSet::of(&[Zero]))],
        implied: [(Slot::Swap, ClassSet::of(&[Pos])), (Slot::Simple, ClassSet::of(&[Inf]))],
    },
    RegimeRow {
        table: 1,
        row: 3,
        given: [(Slot::Yield, ClassSet::of(&[Inf])), (Slot::Bond, ClassSet::of(&[Zero]))],
        implied: [(Slot::Swap, ClassSet::of(&[Pos])), (Slot::Simple, ClassSet::of(&[Inf]))],
    },
];

pub const TABLE_2: [RegimeRow; 3] = [
    RegimeRow {
        table: 2,
        row: 1,
        given: [(Slot::Swap, ClassSet::of(&[Zero])), (Slot::Bond, ClassSet::of(&[Zero, Pos]))],
        // The simple-rate constraint is every non-negative class.
        implied: [(Slot::Yield, NON_POSITIVE), (Slot::Simple, NON_NEGATIVE)],
    },
    RegimeRow {
        table: 2,
        row: 2,
        given: [(Slot::Swap, ClassSet::of(&[Pos])), (Slot::Bond, ClassSet::of(&[Zero]))],
        implied: [(Slot::Yield, NON_NEGATIVE), (Slot::Simple, ClassSet::of(&[Pos, Inf]))],
    },
    RegimeRow {
        table: 2,
        row: 3,
        given: [(Slot::Swap, ClassSet::of(&[Neg])), (Slot::Bond, ClassSet::of(&[Inf]))],
        implied: [(Slot::Yield, NON_POSITIVE), (Slot::Simple, ClassSet::of(&[Zero]))],
    },
];

pub const TABLE_3: [RegimeRow; 3] = [
    RegimeRow {
        table: 3,
        row: 1,
        given: [(Slot::Simple, ClassSet::of(&[Zero, Pos])), (Slot::Bond, ClassSet::of(&[Zero, Pos]))],
        implied: [(Slot::Yield, NON_POSITIVE), (Slot::Swap, ClassSet::of(&[Zero]))],
    },
    RegimeRow {
        table: 3,
        row: 2,
        given: [(Slot::Simple, ClassSet::of(&[Zero, Pos])), (Slot::Bond, ClassSet::of(&[Inf]))],
        implied: [(Slot::Yield, NON_POSITIVE), (Slot::Swap, NON_POSITIVE)],
    },
    RegimeRow {
        table: 3,
        row: 3,
        given: [(Slot::Simple, ClassSet::of(&[Inf])), (Slot::Bond, ClassSet::of(&[Zero]))],
        implied: [(Slot::Yield, NON_NEGATIVE), (Slot::Swap, ClassSet::of(&[Pos]))],
    },
];

pub const TABLES: [&[RegimeRow; 3]; 3] = [&TABLE_1, &TABLE_2, &TABLE_3];

/// Outcome of checking one table.
#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Pass { table: u8, row: u8 },
    Fail { table: u8, row: u8, violation: String },
    /// A row matches but one of its implied slots is undetermined.
    Inconclusive { table: u8, row: u8, slot: Slot },
    /// A given slot is undetermined or no row matches.
    NotCovered { table: u8 },
}

impl Verdict {
    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail { .. })
    }

    /// `pass:row2`, `FAIL:row1:<violation>` or `not_covered`.
    pub fn label(&self) -> String {
        match self {
            Verdict::Pass { row, .. } => format!("pass:row{row}"),
            Verdict::Fail { row, violation, .. } => format!("FAIL:row{row}:{violation}"),
            Verdict::Inconclusive { row, slot, .. } => format!("inconclusive:row{row}:{}", slot.name()),
            Verdict::NotCovered { .. } => String::from("not_covered"),
        }
    }
}

/// Checks `report` against one table.
pub fn check_table(table: &[RegimeRow], report: &LongTermReport) -> Verdict {
    let id = table[0].table;
    let given_slots = table[0].given.map(|(s, _)| s);
    if given_slots.iter().any(|s| s.class_in(report) == LongTermClass::Undetermined) {
        return Verdict::NotCovered { table: id };
    }
    let Some(row) = table.iter().find(|r| r.given.iter().all(|(s, set)| set.contains(s.class_in(report)))) else {
        return Verdict::NotCovered { table: id };
    };
    if let Some((slot, _)) = row.implied.iter().find(|(s, _)| s.class_in(report) == LongTermClass::Undetermined) {
        return Verdict::Inconclusive { table: id, row: row.row, slot: *slot };
    }
    let violations: Vec<String> = row
        .implied
        .iter()
        .filter(|(s, set)| !set.contains(s.class_in(report)))
        .map(|(s, set)| format!("{} is {} but the row requires {set}", s.name(), s.class_in(report)))
        .collect();
    if violations.is_empty() {
        Verdict::Pass { table: id, row: row.row }
    } else {
        Verdict::Fail { table: id, row: row.row, violation: violations.join("; ") }
    }
}

/// Verdicts for tables 1, 2 and 3.
pub fn table_check(report: &LongTermReport) -> [Verdict; 3] {
    TABLES.map(|t| check_table(t, report))
}
