use coulomb_infolab::measures::{
    fisher_length, renyi_length, shannon_entropy, shannon_length, shape_complexity, standard_deviation,
};
use coulomb_infolab::{optimal_k, QuantumState, Result};
use num_rational::BigRational;
use rayon::prelude::*;

use crate::render::real;

pub const FIG4_STATES: [u32; 5] = [1, 2, 3, 5, 7];

/// `1.5, 2, …, 10`
pub fn fig4_default_q() -> Vec<f64> {
    (3..=20).map(|i| f64::from(i) / 2.0).collect()
}

pub fn default_range(id: u8) -> (u32, u32) {
    match id {
        1..=3 => (1, 10),
        5 => (1, 100),
        _ => (1, 50),
    }
}

pub enum Cell {
    Int(u64),
    Real(f64),
}

impl Cell {
    pub fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) => real(*v),
        }
    }

    pub fn json(&self) -> serde_json::Value {
        match self {
            Cell::Int(v) => (*v).into(),
            Cell::Real(v) => (*v).into(),
        }
    }
}

pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

pub struct FigureSpec {
    pub id: u8,
    pub z: BigRational,
    pub n_range: (u32, u32),
    pub q: Vec<f64>,
    pub k_max: u32,
}

fn rows<F>(ns: impl IntoParallelIterator<Item = u32>, z: &BigRational, f: F) -> Result<Vec<Vec<Cell>>>
where
    F: Fn(u32, &QuantumState) -> Result<Vec<Cell>> + Sync,
{
    ns.into_par_iter()
        .map(|n| {
            let s = QuantumState::with_exact_z(n, z.clone())?;
            let mut row = vec![Cell::Int(u64::from(n))];
            row.extend(f(n, &s)?);
            Ok(row)
        })
        .collect()
}

pub fn build(spec: &FigureSpec) -> Result<Table> {
    let (a, b) = spec.n_range;
    let ns = a..=b;
    let z = &spec.z;
    let table = match spec.id {
        1 => Table {
            columns: vec!["n", "k_opt_shannon", "k_opt_complexity"],
            rows: rows(ns, z, |_, s| {
                let o = optimal_k(s, spec.k_max)?;
                Ok(vec![Cell::Int(o.shannon.k.into()), Cell::Int(o.complexity.k.into())])
            })?,
        },
        2 => Table {
            columns: vec!["n", "S_n", "b(k_opt,n)"],
            rows: rows(ns, z, |_, s| {
                let o = optimal_k(s, spec.k_max)?;
                Ok(vec![Cell::Real(shannon_entropy(s)?), Cell::Real(o.shannon.shannon_bound)])
            })?,
        },
        3 => Table {
            columns: vec!["n", "C_n", "c(k_opt,n)"],
            rows: rows(ns, z, |_, s| {
                let o = optimal_k(s, spec.k_max)?;
                Ok(vec![Cell::Real(shape_complexity(s)?), Cell::Real(o.complexity.complexity_bound)])
            })?,
        },
        4 => {
            let states: Vec<u32> = match spec.n_range {
                r if r == default_range(4) => FIG4_STATES.to_vec(),
                (a, b) => (a..=b).collect(),
            };
            let per_state =
                rows(states, z, |_, s| spec.q.iter().map(|&q| renyi_length(s, q).map(Cell::Real)).collect())?;
            let mut out = Vec::new();
            for row in per_state {
                let mut cells = row.into_iter();
                let n = cells.next().expect("n column");
                let n = match n {
                    Cell::Int(n) => n,
                    Cell::Real(_) => unreachable!(),
                };
                for (q, l) in spec.q.iter().zip(cells) {
                    out.push(vec![Cell::Int(n), Cell::Real(*q), l]);
                }
            }
            Table { columns: vec!["n", "q", "L_q^R"], rows: out }
        }
        5 => Table {
            columns: vec!["n", "L_2^R", "L_5^R"],
            rows: rows(ns, z, |_, s| Ok(vec![Cell::Real(renyi_length(s, 2.0)?), Cell::Real(renyi_length(s, 5.0)?)]))?,
        },
        _ => Table {
            columns: vec!["n", "L^S", "Δx", "L_2^R", "L_5^R", "δx"],
            rows: rows(ns, z, |_, s| {
                Ok(vec![
                    Cell::Real(shannon_length(s)?),
                    Cell::Real(standard_deviation(s)?),
                    Cell::Real(renyi_length(s, 2.0)?),
                    Cell::Real(renyi_length(s, 5.0)?),
                    Cell::Real(fisher_length(s)),
                ])
            })?,
        },
    };
    Ok(table)
}
