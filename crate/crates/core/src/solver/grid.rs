use rayon::prelude::*;

use super::{SolutionFamily, SolverError};
use crate::operators::EquationSystem;
use crate::rational::{format_rational, ratio, Rational};

/// Default oracle grid as `(numerator, denominator)` pairs.
pub const DEFAULT_GRID: [(i64, i64); 7] = [(-2, 1), (-1, 1), (-1, 2), (0, 1), (1, 2), (1, 1), (2, 1)];

/// A row-major rational matrix.
pub type GridPoint = Vec<Rational>;

pub fn default_grid() -> Vec<Rational> {
    DEFAULT_GRID.iter().map(|&(n, d)| ratio(n, d)).collect()
}

fn sorted_grid(grid: &[Rational]) -> Vec<Rational> {
    let mut g = grid.to_vec();
    g.sort();
    g.dedup();
    g
}

/// The `index`-th point of `grid^n` in lexicographic order.
fn nth_point(grid: &[Rational], n: usize, mut index: usize) -> GridPoint {
    let mut out = vec![Rational::default(); n];
    for slot in out.iter_mut().rev() {
        *slot = grid[index % grid.len()].clone();
        index /= grid.len();
    }
    out
}

/// Every matrix with entries in `grid` whose equations all vanish, sorted
/// lexicographically by entries. Work is split across `workers` threads; the
/// result does not depend on the split.
pub fn grid_enumerate(
    system: &EquationSystem,
    grid: &[Rational],
    alpha: Option<&Rational>,
    workers: usize,
) -> Result<Vec<GridPoint>, SolverError> {
    let system = match (system.is_symbolic(), alpha) {
        (true, Some(q)) => system.specialize(q)?,
        (true, None) => return Err(SolverError::MissingAlpha(system.algebra.clone())),
        (false, Some(_)) => return Err(SolverError::UnexpectedAlpha(system.algebra.clone())),
        (false, None) => system.clone(),
    };
    if grid.is_empty() {
        return Err(SolverError::EmptyGrid);
    }
    let grid = sorted_grid(grid);
    let n = system.num_matrix_vars();
    let total = grid.len().pow(n as u32);
    let scan = |i: usize| {
        let p = nth_point(&grid, n, i);
        system.is_solution(&p).then_some(p)
    };
    if workers <= 1 {
        return Ok((0..total).filter_map(scan).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().expect("thread pool");
    Ok(pool.install(|| (0..total).into_par_iter().filter_map(scan).collect()))
}

/// Grid points lying in at least one family, in lexicographic order.
pub fn grid_points_in_families(families: &[SolutionFamily], grid: &[Rational], n: usize) -> Vec<GridPoint> {
    let grid = sorted_grid(grid);
    (0..grid.len().pow(n as u32))
        .map(|i| nth_point(&grid, n, i))
        .filter(|p| families.iter().any(|f| f.contains(p)))
        .collect()
}

/// `[["0","0"],["1/2","0"]]`-style rendering of square matrices.
pub fn points_text(points: &[GridPoint]) -> Vec<Vec<Vec<String>>> {
    points
        .iter()
        .map(|p| {
            let d = (p.len() as f64).sqrt() as usize;
            p.chunks(d).map(|r| r.iter().map(format_rational).collect()).collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::catalog;
    use crate::operators::{build_system, OperatorKind};
    use crate::rational::int;

    fn grid(vals: &[i64]) -> Vec<Rational> {
        vals.iter().map(|&v| int(v)).collect()
    }

    #[test]
    fn a1_rota_baxter_zero_on_small_grid() {
        let sys = build_system(&catalog("A1", None).unwrap(), &OperatorKind::RotaBaxter(int(0))).unwrap();
        let pts = grid_enumerate(&sys, &grid(&[1, 0, -1]), None, 1).unwrap();
        let text = points_text(&pts);
        assert_eq!(
            text,
            vec![
                vec![vec!["0", "-1"], vec!["0", "0"]],
                vec![vec!["0", "0"], vec!["0", "0"]],
                vec![vec!["0", "1"], vec!["0", "0"]],
            ]
        );
        assert_eq!(grid_enumerate(&sys, &grid(&[1, 0, -1]), None, 3).unwrap(), pts);
    }

    #[test]
    fn alpha_handling() {
        let sys = build_system(&catalog("A5", Some(crate::algebra::Alpha::Symbolic)).unwrap(), &OperatorKind::Reynolds)
            .unwrap();
        assert!(matches!(grid_enumerate(&sys, &grid(&[0]), None, 1), Err(SolverError::MissingAlpha(_))));
        assert_eq!(grid_enumerate(&sys, &grid(&[0]), Some(&int(2)), 1).unwrap().len(), 1);
        assert!(matches!(grid_enumerate(&sys, &[], Some(&int(2)), 1), Err(SolverError::EmptyGrid)));
    }

    #[test]
    fn lexicographic_order() {
        let g = grid(&[1, 0]);
        assert_eq!(nth_point(&sorted_grid(&g), 2, 0), grid(&[0, 0]));
        assert_eq!(nth_point(&sorted_grid(&g), 2, 1), grid(&[0, 1]));
        assert_eq!(nth_point(&sorted_grid(&g), 2, 2), grid(&[1, 0]));
    }
}
