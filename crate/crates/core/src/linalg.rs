//! Dense linear algebra over a prime field `F_p` with `p < 2^32`.

pub fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Bring `rows` to row echelon form in place and return the rank. Only the
/// first `ncols` columns are used as pivots.
pub fn echelon(rows: &mut [Vec<u64>], ncols: usize, p: u64) -> usize {
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_multiple_of(p)) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = inv_mod(rows[rank][col], p);
        for v in rows[rank].iter_mut() {
            *v = *v * inv % p;
        }
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        for row in tail.iter_mut() {
            let f = row[col] % p;
            if f == 0 {
                continue;
            }
            for (v, &pv) in row.iter_mut().zip(pivot_row.iter()).skip(col) {
                *v = (*v + (p - f) * pv) % p;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

pub fn rank(rows: &[Vec<u64>], p: u64) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut m = rows.to_vec();
    echelon(&mut m, ncols, p)
}

/// Number of solutions in `F_p^n` of `A x = b`, as an exponent of `p`:
/// `Some(n - rank)` when consistent, `None` otherwise.
pub fn solution_dimension(a: &[Vec<u64>], b: &[u64], ncols: usize, p: u64) -> Option<usize> {
    let mut aug: Vec<Vec<u64>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r = row.clone();
            r.push(rhs % p);
            r
        })
        .collect();
    let r = echelon(&mut aug, ncols, p);
    let consistent = aug[r..].iter().all(|row| row[ncols] == 0);
    consistent.then_some(ncols - r)
}

/// Determinant by Gaussian elimination.
pub fn det(matrix: &[Vec<u64>], p: u64) -> u64 {
    let n = matrix.len();
    let mut m: Vec<Vec<u64>> = matrix.iter().map(|r| r.iter().map(|v| v % p).collect()).collect();
    let mut acc = 1u64;
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| m[r][col] != 0) else {
            return 0;
        };
        if pivot != col {
            m.swap(col, pivot);
            acc = (p - acc) % p;
        }
        acc = acc * m[col][col] % p;
        let inv = inv_mod(m[col][col], p);
        for r in col + 1..n {
            let f = m[r][col] * inv % p;
            if f == 0 {
                continue;
            }
            let (top, rest) = m.split_at_mut(r);
            for (x, &y) in rest[0][col..n].iter_mut().zip(&top[col][col..n]) {
                *x = (*x + (p - f) * y) % p;
            }
        }
    }
    acc
}

/// Determinant by cofactor expansion along the first row; exponential, for
/// cross-checking [`det`] on small matrices.
pub fn det_cofactor(matrix: &[Vec<u64>], p: u64) -> u64 {
    let n = matrix.len();
    if n == 0 {
        return 1 % p;
    }
    if n == 1 {
        return matrix[0][0] % p;
    }
    let mut acc = 0u64;
    for j in 0..n {
        let minor: Vec<Vec<u64>> = matrix[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect())
            .collect();
        let term = matrix[0][j] % p * det_cofactor(&minor, p) % p;
        acc = if j % 2 == 0 { (acc + term) % p } else { (acc + p - term) % p };
    }
    acc
}
