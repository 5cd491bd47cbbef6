//! The eleven families of (-1)-special homogeneous systems with `m <= 3`.
//!
//! Each row carries its printed `(v, l)` expressions. Row 4 prints `v = -1`
//! for `L_6(0,4,3^11)` while the dimension count gives `-2`; matches report
//! both values and a discrepancy note instead of choosing one.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{virtual_dim, SystemSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Table1Row {
    pub number: u8,
    pub family: &'static str,
    pub v_expr: &'static str,
    pub l_expr: &'static str,
    /// Whether the family has a free number of points `r`.
    pub free_r: bool,
}

pub const TABLE1: [Table1Row; 11] = [
    Table1Row { number: 1, family: "L_1(0,4,2^5)", v_expr: "-1", l_expr: "0", free_r: false },
    Table1Row { number: 2, family: "L_1(0,6,3^5)", v_expr: "-3", l_expr: "0", free_r: false },
    Table1Row { number: 3, family: "L_5(1,4,3^10)", v_expr: "-1", l_expr: "0", free_r: false },
    Table1Row { number: 4, family: "L_6(0,4,3^11)", v_expr: "-1", l_expr: "0", free_r: false },
    Table1Row { number: 5, family: "L_n(2e,2,2^{2e+n+1})", v_expr: "-1", l_expr: "0", free_r: false },
    Table1Row { number: 6, family: "L_n(e,0,2^r)", v_expr: "e-3r", l_expr: "e-2r", free_r: true },
    Table1Row { number: 7, family: "L_n(4e+n+1,2,3^{2e+n+1})", v_expr: "-1", l_expr: "0", free_r: false },
    Table1Row { number: 8, family: "L_n(3e+1,3,3^{2e+n+1})", v_expr: "1", l_expr: "2", free_r: false },
    Table1Row { number: 9, family: "L_n(3e,3,3^{2e+n+1})", v_expr: "-3", l_expr: "0", free_r: false },
    Table1Row { number: 10, family: "L_n(e,1,3^r)", v_expr: "2e+n-6r+1", l_expr: "2e+n-5r+1", free_r: true },
    Table1Row { number: 11, family: "L_n(e,0,3^r)", v_expr: "e-6r", l_expr: "e-3r", free_r: true },
];

pub const ROW4_NOTE: &str = "Table 1 prints v = -1 for L_6(0,4,3^11); h0 - 1 - 66 = 64 - 66 gives v = -2 \
(expected dimension -1); the computed value is reported";

/// A system matched to a row, with the row's printed values at its parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Table1Match {
    pub row: Table1Row,
    /// The family parameter `e` (the `F` coefficient for the free-`r` rows).
    pub e: Option<i64>,
    pub v_table: i64,
    pub l_table: i64,
    pub v_computed: i64,
    pub note: Option<&'static str>,
}

impl Table1Match {
    pub fn tag(&self) -> String {
        format!("T1.{}", self.row.number)
    }
}

/// Printed `(v, l)` of a row at parameters `(n, e, r)`.
pub fn row_values(row: u8, n: i64, e: i64, r: i64) -> (i64, i64) {
    match row {
        1 | 3 | 4 | 5 | 7 => (-1, 0),
        2 | 9 => (-3, 0),
        6 => (e - 3 * r, e - 2 * r),
        8 => (1, 2),
        10 => (2 * e + n - 6 * r + 1, 2 * e + n - 5 * r + 1),
        11 => (e - 6 * r, e - 3 * r),
        _ => panic!("Table 1 has rows 1..=11, got {row}"),
    }
}

/// The member of `row` at `(n, e, r)`, if the parameters satisfy the row's
/// constraints (`r` is ignored by rows that fix it). Free-`r` rows need
/// `r >= 1` and a non-empty residual after removing the fibers.
pub fn instantiate(row: u8, n: u32, e: i64, r: usize) -> Option<SystemSpec> {
    let nn = i64::from(n);
    let ri = r as i64;
    let fam_r = 2 * e + nn + 1;
    let (a, b, m, points) = match row {
        1 => (n == 1 && e == 0).then_some((0, 4, 2, 5))?,
        2 => (n == 1 && e == 0).then_some((0, 6, 3, 5))?,
        3 => (n == 5 && e == 0).then_some((1, 4, 3, 10))?,
        4 => (n == 6 && e == 0).then_some((0, 4, 3, 11))?,
        5 => (e >= 0).then_some((2 * e, 2, 2, fam_r))?,
        6 => (ri >= 1 && e >= 2 * ri).then_some((e, 0, 2, ri))?,
        7 => (e >= 0).then_some((4 * e + nn + 1, 2, 3, fam_r))?,
        8 => (e >= 0).then_some((3 * e + 1, 3, 3, fam_r))?,
        9 => (e >= 0).then_some((3 * e, 3, 3, fam_r))?,
        10 => (ri >= 1 && e >= 2 * ri && 2 * e + nn - 5 * ri + 1 >= 0).then_some((e, 1, 3, ri))?,
        11 => (ri >= 1 && e >= 3 * ri).then_some((e, 0, 3, ri))?,
        _ => return None,
    };
    SystemSpec::homogeneous(n, a, b, m, points as usize).ok()
}

/// Match a homogeneous system with `m <= 3` against the table.
pub fn classify_table1(s: &SystemSpec) -> Result<Option<Table1Match>> {
    if s.r() == 0 {
        return Ok(None);
    }
    let Some(m) = s.homogeneous_mult() else {
        return Err(Error::InvalidInput(format!("{s} is not homogeneous")));
    };
    if m > 3 {
        return Err(Error::Unsupported(format!(
            "Table 1 covers multiplicity <= 3, got {m}"
        )));
    }
    let (n, a, b, r) = (i64::from(s.n()), s.a(), s.b(), s.r() as i64);
    let family_e = |count: i64| -> Option<i64> {
        let twice = count - n - 1;
        (twice >= 0 && twice % 2 == 0).then_some(twice / 2)
    };
    let hit = match (m, b) {
        (2, 4) if (n, a, r) == (1, 0, 5) => Some((1, None)),
        (3, 6) if (n, a, r) == (1, 0, 5) => Some((2, None)),
        (3, 4) if (n, a, r) == (5, 1, 10) => Some((3, None)),
        (3, 4) if (n, a, r) == (6, 0, 11) => Some((4, None)),
        (2, 2) => family_e(r).filter(|&e| a == 2 * e).map(|e| (5, Some(e))),
        (2, 0) if a >= 2 * r => Some((6, Some(a))),
        (3, 2) => family_e(r).filter(|&e| a == 4 * e + n + 1).map(|e| (7, Some(e))),
        (3, 3) => family_e(r).and_then(|e| {
            if a == 3 * e + 1 {
                Some((8, Some(e)))
            } else if a == 3 * e {
                Some((9, Some(e)))
            } else {
                None
            }
        }),
        (3, 1) if a >= 2 * r && 2 * a + n - 5 * r + 1 >= 0 => Some((10, Some(a))),
        (3, 0) if a >= 3 * r => Some((11, Some(a))),
        _ => None,
    };
    let Some((number, e)) = hit else {
        return Ok(None);
    };
    let row = TABLE1[usize::from(number) - 1];
    let (v_table, l_table) = row_values(number, n, e.unwrap_or(0), r);
    let v_computed = virtual_dim(s)?;
    let note = (v_table != v_computed).then_some(ROW4_NOTE);
    Ok(Some(Table1Match {
        row,
        e,
        v_table,
        l_table,
        v_computed,
        note,
    }))
}
