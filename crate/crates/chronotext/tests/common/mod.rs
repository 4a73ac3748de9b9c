//! Shared oracles for the integration suites.
//!
//! Everything here recomputes results through a different route than
//! the library: a hand-rolled cyclic Jacobi eigensolver instead of the
//! library's decomposition, and exact integer arithmetic instead of
//! log-space tails. Agreement between the two paths is the evidence
//! the acceptance suite is after.

#![allow(dead_code)]

use chronotext::lextable::LexicalTable;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// ---------- random contingency tables ----------

/// Deterministic set of random count tables, each between 2×2 and
/// `max_rows × max_cols`, with every margin at least 1.
pub fn random_tables(
    count: usize,
    max_rows: usize,
    max_cols: usize,
    seed: u64,
) -> Vec<LexicalTable> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|t| {
            let rows = rng.gen_range(2..=max_rows);
            let cols = rng.gen_range(2..=max_cols);
            let mut counts = vec![vec![0u64; cols]; rows];
            for row in counts.iter_mut() {
                for cell in row.iter_mut() {
                    *cell = if rng.gen_bool(0.35) {
                        0
                    } else {
                        rng.gen_range(1..=9)
                    };
                }
            }
            // Repair empty margins so every row and column count is
            // at least 1 (adding to a column never empties a row).
            for row in counts.iter_mut() {
                if row.iter().sum::<u64>() == 0 {
                    row[rng.gen_range(0..cols)] = rng.gen_range(1..=3);
                }
            }
            for col in 0..cols {
                if (0..rows).map(|r| counts[r][col]).sum::<u64>() == 0 {
                    counts[rng.gen_range(0..rows)][col] = rng.gen_range(1..=3);
                }
            }
            let row_ids = (0..rows).map(|r| format!("r{r:02}")).collect();
            let col_words = (0..cols).map(|c| format!("w{c:02}")).collect();
            LexicalTable::from_dense(&format!("random{t:02}"), row_ids, col_words, &counts)
                .expect("random tables are valid by construction")
        })
        .collect()
}

// ---------- Jacobi eigensolver ----------

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi
/// rotations. Returns (eigenvalues, eigenvectors-as-columns), sorted
/// by descending eigenvalue. Independent of any library decomposition.
pub fn jacobi_eigen(mut a: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "matrix must be square");
    let mut v = DMatrix::<f64>::identity(n, n);
    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
    for _sweep in 0..200 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)] * a[(p, q)];
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                // tan of the rotation angle, the numerically stable way.
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = DMatrix::<f64>::zeros(n, n);
    for (to, &from) in order.iter().enumerate() {
        vectors.set_column(to, &v.column(from));
    }
    (eigenvalues, vectors)
}

// ---------- dense chi-square-metric reference analysis ----------

/// Reference factor results computed densely from first principles.
pub struct CaOracle {
    /// Positive eigenvalues, descending, capped at the table's rank.
    pub eigenvalues: Vec<f64>,
    /// Row principal coordinates for those axes.
    pub row_coords: DMatrix<f64>,
    /// Column principal coordinates for those axes.
    pub col_coords: DMatrix<f64>,
    /// Sum of all eigenvalues (the chi-square statistic over n).
    pub total_inertia: f64,
}

/// Dense reference analysis: standardized residuals are formed
/// explicitly, their (columns × columns) cross-product matrix is
/// eigendecomposed with the Jacobi solver above, and coordinates come
/// from the textbook formulas `F = D_r^{-1/2} S V`, `G = D_c^{-1/2} V Σ`.
pub fn ca_oracle(table: &LexicalTable) -> CaOracle {
    let rows = table.n_rows();
    let cols = table.n_cols();
    let n = table.grand_total as f64;
    let r: Vec<f64> = table.row_margins.iter().map(|&m| m as f64 / n).collect();
    let c: Vec<f64> = table.col_margins.iter().map(|&m| m as f64 / n).collect();
    let mut s = DMatrix::<f64>::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            let p = table.get(i, j) as f64 / n;
            s[(i, j)] = (p - r[i] * c[j]) / (r[i] * c[j]).sqrt();
        }
    }
    let gram = s.transpose() * &s;
    let total_inertia = gram.trace();
    let (raw_eigenvalues, vectors) = jacobi_eigen(gram);
    let rank = rows.min(cols) - 1;
    let kept: Vec<usize> = (0..raw_eigenvalues.len())
        .filter(|&k| k < rank && raw_eigenvalues[k] > 1e-12)
        .collect();
    let eigenvalues: Vec<f64> = kept.iter().map(|&k| raw_eigenvalues[k]).collect();

    let mut row_coords = DMatrix::<f64>::zeros(rows, kept.len());
    let mut col_coords = DMatrix::<f64>::zeros(cols, kept.len());
    for (axis, &k) in kept.iter().enumerate() {
        let v = vectors.column(k);
        let sv = &s * v;
        for i in 0..rows {
            row_coords[(i, axis)] = sv[i] / r[i].sqrt();
        }
        let sigma = eigenvalues[axis].sqrt();
        for j in 0..cols {
            col_coords[(j, axis)] = v[j] * sigma / c[j].sqrt();
        }
    }
    CaOracle {
        eigenvalues,
        row_coords,
        col_coords,
        total_inertia,
    }
}

/// Chi-square statistic of independence, recomputed directly.
pub fn chi_square(table: &LexicalTable) -> f64 {
    let n = table.grand_total as f64;
    let mut chi2 = 0.0;
    for i in 0..table.n_rows() {
        for j in 0..table.n_cols() {
            let expected = table.row_margins[i] as f64 * table.col_margins[j] as f64 / n;
            let d = table.get(i, j) as f64 - expected;
            chi2 += d * d / expected;
        }
    }
    chi2
}

/// Largest absolute difference between two equally-shaped matrices,
/// after flipping each axis of `b` to the sign that best matches `a`
/// (axes of a decomposition are defined up to sign). Optionally a
/// second matrix pair is compared under the *same* per-axis signs, so
/// row and column sides must flip together.
pub fn sign_insensitive_diff(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    paired: Option<(&DMatrix<f64>, &DMatrix<f64>)>,
) -> f64 {
    assert_eq!(a.shape(), b.shape(), "comparing mismatched shapes");
    let mut worst = 0.0_f64;
    for k in 0..a.ncols() {
        let dot: f64 = (0..a.nrows()).map(|i| a[(i, k)] * b[(i, k)]).sum();
        let sign = if dot < 0.0 { -1.0 } else { 1.0 };
        for i in 0..a.nrows() {
            worst = worst.max((a[(i, k)] - sign * b[(i, k)]).abs());
        }
        if let Some((pa, pb)) = paired {
            for i in 0..pa.nrows() {
                worst = worst.max((pa[(i, k)] - sign * pb[(i, k)]).abs());
            }
        }
    }
    worst
}

// ---------- exact hypergeometric oracle ----------

/// Pascal's triangle up to `n`, exact. `C(60, 30) ≈ 1.18e17` fits
/// comfortably in u128 (and even u64), so all arithmetic is exact.
pub struct Binomials {
    rows: Vec<Vec<u128>>,
}

impl Binomials {
    pub fn new(n: usize) -> Self {
        assert!(
            n <= 130,
            "u128 binomials overflow past n = 130; use exact_tail_big instead"
        );
        let mut rows: Vec<Vec<u128>> = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let mut row = vec![1u128; i + 1];
            for k in 1..i {
                row[k] = rows[i - 1][k - 1] + rows[i - 1][k];
            }
            rows.push(row);
        }
        Binomials { rows }
    }

    pub fn choose(&self, n: u64, k: u64) -> u128 {
        if k > n {
            0
        } else {
            self.rows[n as usize][k as usize]
        }
    }
}

/// Exact tail as a reduced integer pair `(numerator, denominator)`:
/// the probability that a size-`part` draw without replacement from
/// `grand` items (of which `word` are marked) contains at least /
/// at most `observed` marked ones.
pub fn exact_tail(
    binomials: &Binomials,
    grand: u64,
    word: u64,
    part: u64,
    observed: u64,
    over: bool,
) -> (u128, u128) {
    assert!(word <= grand && part <= grand);
    let lo = (word + part).saturating_sub(grand);
    let hi = word.min(part);
    assert!((lo..=hi).contains(&observed), "infeasible observed count");
    let range = if over { observed..=hi } else { lo..=observed };
    let numerator: u128 = range
        .map(|x| binomials.choose(word, x) * binomials.choose(grand - word, part - x))
        .sum();
    (numerator, binomials.choose(grand, part))
}

/// The exact tail as a float (both integers are far below 2^127, so
/// the only rounding is the final division).
pub fn exact_tail_p(
    binomials: &Binomials,
    grand: u64,
    word: u64,
    part: u64,
    observed: u64,
    over: bool,
) -> f64 {
    let (num, den) = exact_tail(binomials, grand, word, part, observed, over);
    num as f64 / den as f64
}

/// Exact binomial coefficient as a big integer, via the multiplicative
/// form (every intermediate quotient is itself a binomial, so each
/// stepwise division is exact).
pub fn big_binomial(n: u64, k: u64) -> num::BigInt {
    use num::One;
    if k > n {
        return num::BigInt::ZERO;
    }
    let k = k.min(n - k);
    let mut value = num::BigInt::one();
    for i in 0..k {
        value = value * num::BigInt::from(n - i) / num::BigInt::from(i + 1);
    }
    value
}

/// Exact hypergeometric tail for totals too large for u128, computed
/// with arbitrary-precision integers: the support is walked with the
/// term recurrence
/// `term(x+1)·(x+1)·(g−w−p+x+1) = term(x)·(w−x)·(p−x)`
/// (each term is the integer `C(w, x)·C(g−w, p−x)`), summed exactly,
/// and divided by `C(g, p)` only at the very end.
pub fn exact_tail_big(grand: u64, word: u64, part: u64, observed: u64, over: bool) -> f64 {
    use num::ToPrimitive;
    assert!(word <= grand && part <= grand);
    let lo = (word + part).saturating_sub(grand);
    let hi = word.min(part);
    assert!((lo..=hi).contains(&observed), "infeasible observed count");
    let mut term = big_binomial(word, lo) * big_binomial(grand - word, part - lo);
    let mut numerator = num::BigInt::ZERO;
    for x in lo..=hi {
        let in_tail = if over { x >= observed } else { x <= observed };
        if in_tail {
            numerator += &term;
        }
        if x < hi {
            // `x ≥ lo` keeps this factor ≥ 1; summing before
            // subtracting avoids intermediate u64 underflow.
            let vacancies = (grand + x + 1) - word - part;
            term = term * num::BigInt::from(word - x) * num::BigInt::from(part - x)
                / (num::BigInt::from(x + 1) * num::BigInt::from(vacancies));
        }
    }
    num::BigRational::new(numerator, big_binomial(grand, part))
        .to_f64()
        .expect("tail probabilities are finite")
}
