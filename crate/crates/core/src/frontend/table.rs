//! CSV sample tables with header `x1,...,xn,f` and rational cells.

use std::collections::BTreeMap;
use std::io::Read;

use super::{FrontendError, OracleSpec};
use crate::algebra::rat::{fmt_rat, parse_rat};
use crate::algebra::Rat;
use crate::oracle::{Oracle, OracleError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleTable {
    dim: usize,
    rows: BTreeMap<Vec<Rat>, Rat>,
}

fn table_err(msg: impl Into<String>) -> FrontendError {
    FrontendError::Table(msg.into())
}

impl SampleTable {
    pub fn new(dim: usize) -> Self {
        SampleTable {
            dim,
            rows: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Adds a row. Repeating a point is allowed only with the same value.
    pub fn insert(&mut self, point: Vec<Rat>, value: Rat) -> Result<(), FrontendError> {
        if point.len() != self.dim {
            return Err(table_err(format!(
                "row has {} coordinates, expected {}",
                point.len(),
                self.dim
            )));
        }
        match self.rows.get(&point) {
            Some(v) if *v != value => Err(table_err(format!(
                "conflicting values {} and {} at ({})",
                fmt_rat(v),
                fmt_rat(&value),
                point.iter().map(fmt_rat).collect::<Vec<_>>().join(", ")
            ))),
            _ => {
                self.rows.insert(point, value);
                Ok(())
            }
        }
    }

    pub fn get(&self, p: &[Rat]) -> Option<&Rat> {
        self.rows.get(p)
    }

    pub fn rows(&self) -> impl Iterator<Item = (&Vec<Rat>, &Rat)> {
        self.rows.iter()
    }

    pub fn from_csv<R: Read>(input: R) -> Result<Self, FrontendError> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(input);
        let header = reader
            .headers()
            .map_err(|e| table_err(e.to_string()))?
            .clone();
        let n = header.len().saturating_sub(1);
        let expected: Vec<String> = (1..=n)
            .map(|i| format!("x{i}"))
            .chain(["f".to_string()])
            .collect();
        if n == 0 || header.iter().ne(expected.iter().map(String::as_str)) {
            return Err(table_err(format!(
                "header must be {}",
                if n == 0 {
                    "x1,...,xn,f".to_string()
                } else {
                    expected.join(",")
                }
            )));
        }
        let mut table = SampleTable::new(n);
        for (i, rec) in reader.records().enumerate() {
            let rec = rec.map_err(|e| table_err(e.to_string()))?;
            let cells: Vec<Rat> = rec
                .iter()
                .map(|c| {
                    parse_rat(c)
                        .ok_or_else(|| table_err(format!("row {}: bad rational '{c}'", i + 1)))
                })
                .collect::<Result<_, _>>()?;
            if cells.len() != n + 1 {
                return Err(table_err(format!(
                    "row {}: expected {} cells",
                    i + 1,
                    n + 1
                )));
            }
            let mut cells = cells;
            let value = cells.pop().expect("nonempty row");
            table.insert(cells, value)?;
        }
        Ok(table)
    }

    pub fn to_csv(&self) -> String {
        let mut out = (1..=self.dim).map(|i| format!("x{i},")).collect::<String>();
        out.push_str("f\n");
        for (p, v) in &self.rows {
            for c in p {
                out.push_str(&fmt_rat(c));
                out.push(',');
            }
            out.push_str(&fmt_rat(v));
            out.push('\n');
        }
        out
    }
}

/// Exact lookup in a table, deferring to an optional spec elsewhere.
#[derive(Clone, Debug)]
pub struct TableOracle {
    table: SampleTable,
    fallback: Option<OracleSpec>,
}

pub fn oracle_from_table(
    t: SampleTable,
    fallback: Option<OracleSpec>,
) -> Result<TableOracle, FrontendError> {
    if t.is_empty() {
        return Err(table_err("table is empty"));
    }
    if let Some(f) = &fallback {
        if f.vars.len() != t.dim() {
            return Err(table_err(format!(
                "fallback has {} variables, table has {}",
                f.vars.len(),
                t.dim()
            )));
        }
    }
    Ok(TableOracle { table: t, fallback })
}

impl Oracle for TableOracle {
    fn dim(&self) -> usize {
        self.table.dim()
    }

    fn eval(&self, p: &[Rat]) -> Result<Rat, OracleError> {
        if p.len() != self.dim() {
            return Err(OracleError::DimensionMismatch {
                expected: self.dim(),
                found: p.len(),
            });
        }
        if let Some(v) = self.table.get(p) {
            return Ok(v.clone());
        }
        match &self.fallback {
            Some(spec) => spec.eval(p),
            None => Err(OracleError::PointNotCovered(format!(
                "({})",
                p.iter().map(fmt_rat).collect::<Vec<_>>().join(", ")
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::{rat, ratio};
    use crate::frontend::parse_expression;

    const CSV: &str = "x1,x2,f\n1,1,1/2\n0,0,0\n2, -1/3 ,7\n1,1,1/2\n";

    #[test]
    fn reads_and_writes_csv() {
        let t = SampleTable::from_csv(CSV.as_bytes()).unwrap();
        assert_eq!(t.dim(), 2);
        assert_eq!(t.len(), 3);
        assert_eq!(t.get(&[rat(2), ratio(-1, 3)]), Some(&rat(7)));
        assert_eq!(SampleTable::from_csv(t.to_csv().as_bytes()).unwrap(), t);
    }

    #[test]
    fn rejects_bad_tables() {
        for bad in [
            "x1,x2,f\n1,1,1\n1,1,2\n",
            "x,y,f\n1,1,1\n",
            "f\n1\n",
            "x1,f\n1/0,1\n",
            "x1,f\nabc,1\n",
        ] {
            assert!(
                matches!(
                    SampleTable::from_csv(bad.as_bytes()),
                    Err(FrontendError::Table(_))
                ),
                "{bad}"
            );
        }
        assert!(oracle_from_table(SampleTable::new(2), None).is_err());
    }

    #[test]
    fn lookup_fallback_and_miss() {
        let t = SampleTable::from_csv(CSV.as_bytes()).unwrap();
        let bare = oracle_from_table(t.clone(), None).unwrap();
        assert_eq!(bare.eval(&[rat(1), rat(1)]).unwrap(), ratio(1, 2));
        assert!(matches!(
            bare.eval(&[rat(3), rat(3)]),
            Err(OracleError::PointNotCovered(_))
        ));
        let spec = parse_expression("vars x y; x*y/(x^2+y^2) default 0").unwrap();
        let with = oracle_from_table(t, Some(spec)).unwrap();
        assert_eq!(with.eval(&[rat(1), rat(2)]).unwrap(), ratio(2, 5));
        assert_eq!(with.eval(&[rat(2), ratio(-1, 3)]).unwrap(), rat(7));
    }
}
