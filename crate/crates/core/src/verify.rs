//! Pairwise comparison of the four table constructions.

use crate::error::Result;
use crate::exec::Exec;
use crate::params::{generate_params, PacketParams};
use crate::tables::{build_table, Method, PolyTable, TableDistance};

/// Default pass threshold for cross-construction discrepancies.
pub const CROSSCHECK_TOL: f64 = 1e-9;

pub const METHODS: [Method; 4] = [
    Method::Recurrence,
    Method::Generating,
    Method::Rodrigues,
    Method::Ladder,
];

#[derive(Clone, Debug)]
pub struct PairReport {
    pub first: Method,
    pub second: Method,
    pub distance: TableDistance,
}

#[derive(Clone, Debug)]
pub struct CrossCheck {
    pub order: u32,
    pub tables: Vec<PolyTable>,
    pub pairs: Vec<PairReport>,
}

impl CrossCheck {
    pub fn worst(&self) -> &PairReport {
        self.pairs
            .iter()
            .max_by(|a, b| a.distance.max.total_cmp(&b.distance.max))
            .expect("at least one pair")
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.pairs.iter().all(|p| p.distance.max <= tol)
    }

    pub fn table(&self, method: Method) -> Option<&PolyTable> {
        self.tables.iter().find(|t| t.method() == method)
    }
}

/// Builds the tables for `methods` (concurrently under [`Exec::Parallel`])
/// and compares every pair.
///
/// The polynomials do not depend on the phase-space center, so `params` is
/// recentered at the origin first.
pub fn crosscheck_methods(
    params: &PacketParams,
    order: u32,
    methods: &[Method],
    exec: Exec,
) -> Result<CrossCheck> {
    let d = params.dim();
    let centered = params.clone().with_center(vec![0.0; d], vec![0.0; d])?;
    let tables: Vec<PolyTable> = exec
        .map(methods, |&m| build_table(m, &centered, order))
        .into_iter()
        .collect::<Result<_>>()?;
    let mut pairs = Vec::new();
    for i in 0..tables.len() {
        for j in i + 1..tables.len() {
            pairs.push(PairReport {
                first: tables[i].method(),
                second: tables[j].method(),
                distance: tables[i].distance(&tables[j])?,
            });
        }
    }
    Ok(CrossCheck { order, tables, pairs })
}

pub fn crosscheck(params: &PacketParams, order: u32, exec: Exec) -> Result<CrossCheck> {
    crosscheck_methods(params, order, &METHODS, exec)
}

/// One cross-check per seed, parallel over seeds; each check runs
/// sequentially so the sweep is the only level of fan-out.
pub fn crosscheck_sweep(
    seeds: &[u64],
    d: usize,
    order: u32,
    methods: &[Method],
    exec: Exec,
) -> Result<Vec<CrossCheck>> {
    exec.map(seeds, |&seed| {
        let params = generate_params(seed, d, 1.0)?;
        crosscheck_methods(&params, order, methods, Exec::Sequential)
    })
    .into_iter()
    .collect()
}
