use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed};

/// Integer type usable for elimination; checked operations report overflow.
pub trait SnfInt:
    Clone + Integer + Signed + CheckedAdd + CheckedSub + CheckedMul + CheckedDiv + std::fmt::Debug
{
}

impl SnfInt for i128 {}
impl SnfInt for BigInt {}

/// `u * a * v = d` with `d` diagonal, diagonal entries nonnegative and each
/// dividing the next.
#[derive(Clone, Debug, PartialEq)]
pub struct Snf<T> {
    pub u: Vec<Vec<T>>,
    pub d: Vec<Vec<T>>,
    pub v: Vec<Vec<T>>,
}

impl<T: SnfInt> Snf<T> {
    /// Nonzero diagonal entries.
    pub fn divisors(&self) -> Vec<T> {
        (0..self.d.len().min(self.d.first().map_or(0, Vec::len)))
            .map(|i| self.d[i][i].clone())
            .filter(|x| !x.is_zero())
            .collect()
    }
}

fn identity<T: SnfInt>(n: usize) -> Vec<Vec<T>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect()).collect()
}

/// `row_i -= q * row_t`.
fn row_sub<T: SnfInt>(m: &mut [Vec<T>], i: usize, t: usize, q: &T) -> Option<()> {
    for k in 0..m[i].len() {
        if m[t][k].is_zero() {
            continue;
        }
        let delta = q.checked_mul(&m[t][k])?;
        m[i][k] = m[i][k].checked_sub(&delta)?;
    }
    Some(())
}

fn col_sub<T: SnfInt>(m: &mut [Vec<T>], j: usize, t: usize, q: &T) -> Option<()> {
    for row in m.iter_mut() {
        if row[t].is_zero() {
            continue;
        }
        let delta = q.checked_mul(&row[t])?;
        row[j] = row[j].checked_sub(&delta)?;
    }
    Some(())
}

fn swap_cols<T>(m: &mut [Vec<T>], a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// Smith normal form, or `None` if a checked operation overflows.
pub fn smith_checked<T: SnfInt>(a: &[Vec<T>], cols: usize) -> Option<Snf<T>> {
    let m = a.len();
    let n = cols;
    let mut d: Vec<Vec<T>> = a.to_vec();
    let mut u = identity::<T>(m);
    let mut v = identity::<T>(n);
    for t in 0..m.min(n) {
        // Smallest nonzero entry of the remaining block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !d[i][j].is_zero() && best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut d, t, pj);
        swap_cols(&mut v, t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..m {
                if d[i][t].is_zero() {
                    continue;
                }
                let q = d[i][t].checked_div(&d[t][t])?;
                row_sub(&mut d, i, t, &q)?;
                row_sub(&mut u, i, t, &q)?;
                if !d[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if d[t][j].is_zero() {
                    continue;
                }
                let q = d[t][j].checked_div(&d[t][t])?;
                col_sub(&mut d, j, t, &q)?;
                col_sub(&mut v, j, t, &q)?;
                if !d[t][j].is_zero() {
                    clean = false;
                }
            }
            if clean {
                // Divisibility: fold an offending row into row t.
                let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d[i][j].is_multiple_of(&d[t][t])));
                match bad {
                    None => break,
                    Some(i) => {
                        let minus_one = T::zero() - T::one();
                        row_sub(&mut d, t, i, &minus_one)?;
                        row_sub(&mut u, t, i, &minus_one)?;
                        continue;
                    }
                }
            }
            // Move the smallest remaining entry of row t / column t to the pivot.
            let mut best = (t, t);
            for i in t + 1..m {
                if !d[i][t].is_zero() && d[i][t].abs() < d[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t + 1..n {
                if !d[t][j].is_zero() && d[t][j].abs() < d[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                d.swap(t, best.0);
                u.swap(t, best.0);
            } else if best.1 != t {
                swap_cols(&mut d, t, best.1);
                swap_cols(&mut v, t, best.1);
            }
        }
        if d[t][t].is_negative() {
            for k in 0..n {
                d[t][k] = T::zero() - d[t][k].clone();
            }
            for k in 0..m {
                u[t][k] = T::zero() - u[t][k].clone();
            }
        }
    }
    Some(Snf { u, d, v })
}

/// Smith normal form over `i128`, recomputed over `BigInt` on overflow.
pub fn smith_normal_form(a: &[Vec<i64>], cols: usize) -> Snf<BigInt> {
    let small: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    if let Some(s) = smith_checked(&small, cols) {
        let big = |m: Vec<Vec<i128>>| -> Vec<Vec<BigInt>> {
            m.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect()
        };
        return Snf { u: big(s.u), d: big(s.d), v: big(s.v) };
    }
    let big: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    smith_checked(&big, cols).expect("big integers do not overflow")
}

/// Elementary divisors of a sparse matrix given by columns of `(row, value)`.
///
/// Unit pivots are eliminated sparsely; the rest goes through the dense form.
pub fn elementary_divisors(rows: usize, columns: &[Vec<(usize, i64)>]) -> Vec<BigInt> {
    if let Some(d) = divisors_with::<i128>(rows, columns) {
        return d;
    }
    divisors_with::<BigInt>(rows, columns).expect("big integers do not overflow")
}

fn divisors_with<T: SnfInt>(rows: usize, columns: &[Vec<(usize, i64)>]) -> Option<Vec<BigInt>>
where
    T: From<i64> + Into<BigInt>,
{
    use std::collections::{BTreeMap, BTreeSet};
    let mut by_row: Vec<BTreeMap<usize, T>> = vec![BTreeMap::new(); rows];
    let mut by_col: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); columns.len()];
    for (c, col) in columns.iter().enumerate() {
        for &(r, x) in col {
            if x != 0 {
                by_row[r].insert(c, T::from(x));
                by_col[c].insert(r);
            }
        }
    }
    let mut units = 0usize;
    let mut live_rows: BTreeSet<usize> = (0..rows).filter(|&r| !by_row[r].is_empty()).collect();
    loop {
        // Unit pivot of least fill-in.
        let mut best: Option<(usize, usize, usize)> = None;
        for &r in &live_rows {
            for (&c, x) in &by_row[r] {
                if x.abs().is_one() {
                    let cost = (by_row[r].len() - 1) * (by_col[c].len() - 1);
                    if best.is_none_or(|b| cost < b.2) {
                        best = Some((r, c, cost));
                    }
                }
            }
        }
        let Some((r, c, _)) = best else { break };
        let pivot_row = std::mem::take(&mut by_row[r]);
        let p = pivot_row[&c].clone();
        let others: Vec<usize> = by_col[c].iter().copied().filter(|&o| o != r).collect();
        for o in others {
            let factor = by_row[o][&c].checked_mul(&p)?;
            for (&k, y) in &pivot_row {
                let delta = factor.checked_mul(y)?;
                let cur = by_row[o].get(&k).cloned().unwrap_or_else(T::zero);
                let next = cur.checked_sub(&delta)?;
                if next.is_zero() {
                    by_row[o].remove(&k);
                    by_col[k].remove(&o);
                } else {
                    by_row[o].insert(k, next);
                    by_col[k].insert(o);
                }
            }
            if by_row[o].is_empty() {
                live_rows.remove(&o);
            }
        }
        for &k in pivot_row.keys() {
            by_col[k].remove(&r);
        }
        live_rows.remove(&r);
        units += 1;
    }
    let rest_cols: Vec<usize> = (0..columns.len()).filter(|&c| !by_col[c].is_empty()).collect();
    let rest_rows: Vec<usize> = live_rows.into_iter().collect();
    let dense: Vec<Vec<T>> = rest_rows
        .iter()
        .map(|&r| rest_cols.iter().map(|c| by_row[r].get(c).cloned().unwrap_or_else(T::zero)).collect())
        .collect();
    let snf = smith_checked(&dense, rest_cols.len())?;
    let mut out: Vec<BigInt> = vec![BigInt::one(); units];
    out.extend(snf.divisors().into_iter().map(Into::into));
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        let inner = b.len();
        let cols = b.first().map_or(0, Vec::len);
        a.iter()
            .map(|r| {
                (0..cols)
                    .map(|j| (0..inner).fold(BigInt::zero(), |s, k| s + &r[k] * &b[k][j]))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn small_example() {
        let a = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let s = smith_normal_form(&a, 3);
        let d: Vec<BigInt> = s.divisors();
        assert_eq!(d, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        let big: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect();
        assert_eq!(mul(&mul(&s.u, &big), &s.v), s.d);
    }

    #[test]
    fn overflow_falls_back() {
        let huge = i64::MAX;
        let a = vec![vec![huge, huge - 1], vec![huge - 2, huge]];
        let s = smith_normal_form(&a, 2);
        let big: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect();
        assert_eq!(mul(&mul(&s.u, &big), &s.v), s.d);
        let det = BigInt::from(huge) * BigInt::from(huge) - BigInt::from(huge - 1) * BigInt::from(huge - 2);
        assert_eq!(s.divisors().iter().product::<BigInt>(), det.abs());
    }

    #[test]
    fn sparse_matches_dense() {
        let cols = vec![vec![(0, 1), (1, 1)], vec![(1, 2), (2, 2)], vec![(0, 2), (2, 4)]];
        let sparse = elementary_divisors(3, &cols);
        let dense_rows: Vec<Vec<i64>> = (0..3)
            .map(|r| cols.iter().map(|c| c.iter().find(|e| e.0 == r).map_or(0, |e| e.1)).collect())
            .collect();
        assert_eq!(sparse, smith_normal_form(&dense_rows, 3).divisors());
    }
}
