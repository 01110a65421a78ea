//! Dense linear systems over the two-element field.

#[derive(Clone, Debug)]
pub struct Gf2System {
    cols: usize,
    words: usize,
    rows: Vec<Vec<u64>>,
    rhs: Vec<bool>,
}

impl Gf2System {
    pub fn new(cols: usize) -> Self {
        Gf2System { cols, words: cols.div_ceil(64), rows: Vec::new(), rhs: Vec::new() }
    }

    /// Adds the equation `sum of x[i] for i in vars = rhs`; repeated
    /// variables cancel.
    pub fn add_equation(&mut self, vars: &[usize], rhs: bool) {
        let mut row = vec![0u64; self.words];
        for &v in vars {
            assert!(v < self.cols);
            row[v / 64] ^= 1 << (v % 64);
        }
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    fn bit(row: &[u64], v: usize) -> bool {
        row[v / 64] >> (v % 64) & 1 == 1
    }

    /// Solves with pivots taken in column order `0..cols`; free variables
    /// are set to zero.
    pub fn solve(&self) -> Option<Vec<bool>> {
        let order: Vec<usize> = (0..self.cols).collect();
        self.solve_with_order(&order)
    }

    /// Solves with pivot columns preferred in the given order. Free
    /// variables are zero, so different orders can return different
    /// solutions.
    pub fn solve_with_order(&self, order: &[usize]) -> Option<Vec<bool>> {
        let mut rows = self.rows.clone();
        let mut rhs = self.rhs.clone();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut next = 0;
        for &col in order {
            let Some(found) = (next..rows.len()).find(|&r| Self::bit(&rows[r], col)) else {
                continue;
            };
            rows.swap(next, found);
            rhs.swap(next, found);
            for r in 0..rows.len() {
                if r != next && Self::bit(&rows[r], col) {
                    let (src, dst) = if r < next {
                        let (a, b) = rows.split_at_mut(next);
                        (&b[0], &mut a[r])
                    } else {
                        let (a, b) = rows.split_at_mut(r);
                        (&a[next], &mut b[0])
                    };
                    for (d, s) in dst.iter_mut().zip(src.iter()) {
                        *d ^= s;
                    }
                    rhs[r] ^= rhs[next];
                }
            }
            pivots.push((next, col));
            next += 1;
            if next == rows.len() {
                break;
            }
        }
        // zero rows must have zero right-hand side
        if (next..rows.len()).any(|r| rhs[r]) {
            return None;
        }
        let mut x = vec![false; self.cols];
        for (r, col) in pivots {
            x[col] = rhs[r];
        }
        Some(x)
    }

    pub fn is_solution(&self, x: &[bool]) -> bool {
        self.rows.iter().zip(&self.rhs).all(|(row, &b)| {
            let lhs = (0..self.cols).filter(|&v| Self::bit(row, v) && x[v]).count() % 2 == 1;
            lhs == b
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        // x0 + x1 = 1, x1 + x2 = 0, x0 + x2 = 1
        let mut sys = Gf2System::new(3);
        sys.add_equation(&[0, 1], true);
        sys.add_equation(&[1, 2], false);
        sys.add_equation(&[0, 2], true);
        let x = sys.solve().unwrap();
        assert!(sys.is_solution(&x));
        let y = sys.solve_with_order(&[2, 1, 0]).unwrap();
        assert!(sys.is_solution(&y));
        assert_ne!(x, y);
    }

    #[test]
    fn detects_inconsistency() {
        let mut sys = Gf2System::new(2);
        sys.add_equation(&[0, 1], true);
        sys.add_equation(&[0, 1], false);
        assert!(sys.solve().is_none());
    }

    #[test]
    fn repeated_variables_cancel() {
        let mut sys = Gf2System::new(70);
        sys.add_equation(&[65, 65, 3], true);
        let x = sys.solve().unwrap();
        assert!(x[3] && !x[65]);
    }
}
