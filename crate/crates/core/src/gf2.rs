//! Bit-packed linear algebra over GF(2).
//!
//! Vectors with at most 32 coordinates are stored in a `u32`, bit `i` holding
//! coordinate `i`. A row `(coeffs, rhs)` stands for the equation
//! `<coeffs, x> = rhs`.

/// Row-reduced form of an affine GF(2) system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduced {
    /// Reduced rows; each row's highest set bit is its pivot, and no other
    /// row has that bit set.
    rows: Vec<(u32, bool)>,
    consistent: bool,
    unknowns: u32,
}

fn pivot(row: u32) -> u32 {
    1 << (31 - row.leading_zeros())
}

/// Row-reduce `rows` over `unknowns` unknowns (Gauss-Jordan on bitmasks).
pub fn row_reduce(rows: &[(u32, bool)], unknowns: u32) -> Reduced {
    assert!(unknowns <= 32);
    let mask = if unknowns == 32 { u32::MAX } else { (1u32 << unknowns) - 1 };
    let mut basis: Vec<(u32, bool)> = Vec::new();
    let mut consistent = true;
    for &(coeffs, rhs) in rows {
        let (mut r, mut b) = (coeffs & mask, rhs);
        for &(row, rb) in &basis {
            if r & pivot(row) != 0 {
                r ^= row;
                b ^= rb;
            }
        }
        if r == 0 {
            consistent &= !b;
            continue;
        }
        let p = pivot(r);
        for entry in basis.iter_mut() {
            if entry.0 & p != 0 {
                entry.0 ^= r;
                entry.1 ^= b;
            }
        }
        basis.push((r, b));
    }
    basis.sort_by_key(|&(r, _)| std::cmp::Reverse(pivot(r)));
    Reduced { rows: basis, consistent, unknowns }
}

/// Rank of a set of GF(2) vectors.
pub fn rank(vectors: &[u32]) -> usize {
    let rows: Vec<(u32, bool)> = vectors.iter().map(|&v| (v, false)).collect();
    row_reduce(&rows, 32).rank()
}

impl Reduced {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_consistent(&self) -> bool {
        self.consistent
    }

    pub fn unknowns(&self) -> u32 {
        self.unknowns
    }

    /// Number of solutions: `0` or `2^(unknowns - rank)`.
    pub fn solution_count(&self) -> u64 {
        if self.consistent {
            1u64 << (self.unknowns as usize - self.rank())
        } else {
            0
        }
    }

    /// The solution with every free unknown set to zero.
    pub fn particular(&self) -> Option<u32> {
        if !self.consistent {
            return None;
        }
        Some(self.rows.iter().filter(|&&(_, b)| b).fold(0, |acc, &(r, _)| acc | pivot(r)))
    }

    /// A basis of the solution space of the homogeneous system.
    pub fn kernel_basis(&self) -> Vec<u32> {
        let pivots = self.rows.iter().fold(0u32, |acc, &(r, _)| acc | pivot(r));
        (0..self.unknowns)
            .map(|j| 1u32 << j)
            .filter(|&bit| pivots & bit == 0)
            .map(|bit| {
                self.rows.iter().filter(|&&(r, _)| r & bit != 0).fold(bit, |acc, &(r, _)| acc | pivot(r))
            })
            .collect()
    }

    /// All solutions, in ascending order.
    pub fn solutions(&self) -> Vec<u32> {
        let Some(base) = self.particular() else {
            return Vec::new();
        };
        let kernel = self.kernel_basis();
        let mut out: Vec<u32> = (0u64..1 << kernel.len())
            .map(|sel| {
                kernel
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| sel >> i & 1 == 1)
                    .fold(base, |acc, (_, &k)| acc ^ k)
            })
            .collect();
        out.sort_unstable();
        out
    }
}
