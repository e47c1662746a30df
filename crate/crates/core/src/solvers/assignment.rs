use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::money::Money;

/// Square profit matrix: `profit[i][p]` is the profit of element `i + 1`
/// placed at position `p + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentInstance {
    pub profit: Vec<Vec<Money>>,
}

/// `positions[i]` is the 1-based position of element `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation(pub Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Permutation {
        Permutation((1..=n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.0.len() != n {
            return Err(Error::InvalidChoice(format!(
                "permutation of length {} for {n} elements",
                self.0.len()
            )));
        }
        let mut seen = vec![false; n];
        for &p in &self.0 {
            if p == 0 || p > n || std::mem::replace(&mut seen[p - 1], true) {
                return Err(Error::InvalidChoice(format!("{:?} is not a permutation of 1..{n}", self.0)));
            }
        }
        Ok(())
    }
}

impl AssignmentInstance {
    pub fn size(&self) -> usize {
        self.profit.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.profit.len();
        for (i, row) in self.profit.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidInstance(format!(
                    "row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            if let Some(p) = row.iter().find(|p| p.is_negative()) {
                return Err(Error::InvalidInstance(format!("negative profit {p} in row {}", i + 1)));
            }
        }
        Ok(())
    }

    pub fn value(&self, s: &Permutation) -> Money {
        s.0.iter()
            .enumerate()
            .map(|(i, &p)| self.profit[i][p - 1])
            .sum()
    }
}

/// Profit-maximal permutation.
///
/// The optimum comes from the Hungarian method. Every optimal permutation
/// uses only edges that are tight under the optimal duals, so the
/// lexicographically smallest one is fixed row by row inside that subgraph,
/// repairing the matching along an alternating path when a smaller column is
/// taken.
pub fn solve_assignment(inst: &AssignmentInstance) -> Result<Permutation> {
    inst.validate()?;
    let n = inst.size();
    let cost: Vec<Vec<i64>> = inst
        .profit
        .iter()
        .map(|row| row.iter().map(|p| -p.tenths()).collect())
        .collect();
    let (mut row_to_col, u, v) = hungarian(&cost);
    let tight: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| cost[i][j] - u[i + 1] - v[j + 1] == 0).collect())
        .collect();
    let mut col_to_row = vec![0; n];
    for (i, &j) in row_to_col.iter().enumerate() {
        col_to_row[j] = i;
    }
    let mut fixed_col = vec![false; n];
    for i in 0..n {
        for p in 0..n {
            if fixed_col[p] || !tight[i][p] {
                continue;
            }
            if row_to_col[i] == p {
                break;
            }
            let mut seen = vec![false; n];
            seen[p] = true;
            let target = row_to_col[i];
            if reroute(col_to_row[p], target, &tight, &fixed_col, &mut seen, &mut row_to_col, &mut col_to_row) {
                row_to_col[i] = p;
                col_to_row[p] = i;
                break;
            }
        }
        fixed_col[row_to_col[i]] = true;
    }
    Ok(Permutation(row_to_col.into_iter().map(|j| j + 1).collect()))
}

/// Finds a new tight column for `row`, ending at the column `target` that is
/// being released, and rewires the matching along the way.
fn reroute(
    row: usize,
    target: usize,
    tight: &[Vec<bool>],
    fixed_col: &[bool],
    seen: &mut [bool],
    row_to_col: &mut [usize],
    col_to_row: &mut [usize],
) -> bool {
    for j in 0..tight.len() {
        if seen[j] || fixed_col[j] || !tight[row][j] {
            continue;
        }
        seen[j] = true;
        if j == target || reroute(col_to_row[j], target, tight, fixed_col, seen, row_to_col, col_to_row) {
            row_to_col[row] = j;
            col_to_row[j] = row;
            return true;
        }
    }
    false
}

/// Minimum-cost perfect matching on a square matrix (Kuhn-Munkres with
/// potentials). Returns the column of each row plus the 1-based row and
/// column potentials.
fn hungarian(cost: &[Vec<i64>]) -> (Vec<usize>, Vec<i64>, Vec<i64>) {
    let n = cost.len();
    if n == 0 {
        return (Vec::new(), vec![0], vec![0]);
    }
    const INF: i64 = i64::MAX / 4;
    // 1-based internal arrays; column 0 is a sentinel.
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![INF; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = INF;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut row_to_col = vec![0; n];
    for j in 1..=n {
        row_to_col[p[j] - 1] = j - 1;
    }
    (row_to_col, u, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(rows: &[&[i64]]) -> AssignmentInstance {
        AssignmentInstance {
            profit: rows
                .iter()
                .map(|r| r.iter().map(|&x| Money::from_units(x)).collect())
                .collect(),
        }
    }

    #[test]
    fn identity_dominant() {
        let inst = matrix(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(solve_assignment(&inst).unwrap(), Permutation(vec![1, 2, 3]));
    }

    #[test]
    fn cyclic_matrix_value_nine() {
        let inst = matrix(&[&[1, 2, 3], &[3, 1, 2], &[2, 3, 1]]);
        let s = solve_assignment(&inst).unwrap();
        assert_eq!(inst.value(&s), Money::from_units(9));
        assert_eq!(s, Permutation(vec![3, 1, 2]));
    }

    #[test]
    fn single_element() {
        assert_eq!(solve_assignment(&matrix(&[&[5]])).unwrap(), Permutation(vec![1]));
        assert_eq!(solve_assignment(&matrix(&[])).unwrap(), Permutation(vec![]));
    }

    #[test]
    fn all_ties_give_identity() {
        let inst = matrix(&[&[2, 2, 2], &[2, 2, 2], &[2, 2, 2]]);
        assert_eq!(solve_assignment(&inst).unwrap(), Permutation::identity(3));
    }

    #[test]
    fn non_square_rejected() {
        let inst = matrix(&[&[1, 2], &[3]]);
        assert!(matches!(solve_assignment(&inst), Err(Error::InvalidInstance(_))));
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation(vec![2, 1, 3]).validate(3).is_ok());
        assert!(Permutation(vec![2, 2, 3]).validate(3).is_err());
        assert!(Permutation(vec![0, 1]).validate(2).is_err());
        assert!(Permutation(vec![1]).validate(2).is_err());
    }
}
