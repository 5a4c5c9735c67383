//! Dense matrices over the two-element field.
//!
//! Entries are packed one bit each into `u64` words, row-major, with every
//! row padded to a whole number of words. Padding bits are kept at zero so
//! that rows can be compared and combined a word at a time. Addition is XOR
//! and there are no signs to track.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

#[inline]
fn words_for(cols: usize) -> usize {
    cols.div_ceil(WORD_BITS)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Builds a matrix from rows of `0`/`1` values. All rows must have the
    /// same length; `cols` is needed to describe matrices with no rows.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R], cols: usize) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::Parse(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                match v {
                    0 => {}
                    1 => m.set(i, j, true),
                    _ => return Err(Error::Parse(format!("entry ({i}, {j}) is {v}, not 0 or 1"))),
                }
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i}, {j}) out of bounds"
        );
        (self.data[i * self.stride + j / WORD_BITS] >> (j % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i}, {j}) out of bounds"
        );
        let w = &mut self.data[i * self.stride + j / WORD_BITS];
        let mask = 1u64 << (j % WORD_BITS);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize, j: usize) {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i}, {j}) out of bounds"
        );
        self.data[i * self.stride + j / WORD_BITS] ^= 1u64 << (j % WORD_BITS);
    }

    #[inline]
    pub(crate) fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    /// Column indices of the nonzero entries of row `i`, ascending.
    pub fn row_ones(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row_words(i)
            .iter()
            .enumerate()
            .flat_map(|(wi, &w)| BitIter(w).map(move |b| wi * WORD_BITS + b))
    }

    /// Row indices of the nonzero entries of column `j`, ascending.
    pub fn col_ones(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.rows).filter(move |&i| self.get(i, j))
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows)
    }

    /// XOR row `src` into row `dst` (`dst != src`).
    #[inline]
    fn xor_row_into(&mut self, src: usize, dst: usize) {
        debug_assert_ne!(src, dst);
        let s = self.stride;
        let (a, b) = if src < dst {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&lo[src * s..(src + 1) * s], &mut hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&hi[..s], &mut lo[dst * s..(dst + 1) * s])
        };
        for (d, &x) in b.iter_mut().zip(a) {
            *d ^= x;
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in self.row_ones(i) {
                t.set(j, i, true);
            }
        }
        t
    }

    /// Entrywise sum (XOR).
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                op: "add",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = self.clone();
        for (d, &x) in out.data.iter_mut().zip(&other.data) {
            *d ^= x;
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                op: "mul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        let s = out.stride;
        for i in 0..self.rows {
            let dst = &mut out.data[i * s..(i + 1) * s];
            for k in self.row_ones(i) {
                for (d, &x) in dst.iter_mut().zip(other.row_words(k)) {
                    *d ^= x;
                }
            }
        }
        Ok(out)
    }

    /// Rank over GF(2) by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut basis = RowBasis::new(self.cols);
        self.insertion_order()
            .into_iter()
            .filter(|&i| basis.insert(self.row_words(i).to_vec()))
            .count()
    }

    /// Reduced row echelon form: the nonzero rows in pivot order and
    /// their pivot columns.
    fn rref(&self) -> (Vec<usize>, Vec<Vec<u64>>) {
        let mut basis = RowBasis::new(self.cols);
        for i in self.insertion_order() {
            basis.insert(self.row_words(i).to_vec());
        }
        basis.reduce()
    }

    /// Rows by decreasing leading column. A row whose leading column is
    /// left of every stored pivot needs no reduction, so near triangular
    /// inputs are absorbed almost for free.
    fn insertion_order(&self) -> Vec<usize> {
        let lead = |i: usize| next_one(self.row_words(i), 0).unwrap_or(usize::MAX);
        let mut order: Vec<(usize, usize)> = (0..self.rows).map(|i| (lead(i), i)).collect();
        order.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        order.into_iter().map(|(_, i)| i).collect()
    }

    /// Gauss–Jordan inverse.
    pub fn inverse(&self) -> Result<Self> {
        self.require_square()?;
        let n = self.rows;
        let wide = self.hstack(&Self::identity(n))?;
        let mut basis = RowBasis::new(2 * n);
        for i in self.insertion_order() {
            let v = wide.row_words(i).to_vec();
            if !basis.insert(v) || basis.pivots.last().is_some_and(|&p| p >= n) {
                return Err(Error::Singular);
            }
        }
        let (_, rows) = basis.reduce();
        let mut inv = Self::zeros(n, n);
        for (i, row) in rows.iter().enumerate() {
            for j in ones(row).skip_while(|&j| j < n) {
                inv.set(i, j - n, true);
            }
        }
        Ok(inv)
    }

    /// Inverse of a unit lower triangular matrix by forward substitution.
    /// Row `i` of the inverse is `e_i` plus the sum of the inverse rows `j`
    /// for which `l[i][j] = 1`, `j < i`.
    pub fn inv_unit_lower_triangular(&self) -> Result<Self> {
        if !self.is_lower_unitriangular()? {
            return Err(Error::NotUnitriangular);
        }
        let n = self.rows;
        let mut inv = Self::identity(n);
        for i in 0..n {
            let below: Vec<usize> = self.row_ones(i).filter(|&j| j < i).collect();
            for j in below {
                inv.xor_row_into(j, i);
            }
        }
        Ok(inv)
    }

    /// A basis of `{v : self * v = 0}` as the columns of a
    /// `cols x (cols - rank)` matrix, one vector per free column of the
    /// reduced echelon form.
    pub fn right_kernel_basis(&self) -> Self {
        let (pivots, rows) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut basis = Self::zeros(self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            basis.set(f, k, true);
        }
        let mut column = vec![usize::MAX; self.cols];
        for (k, &f) in free.iter().enumerate() {
            column[f] = k;
        }
        for (row, &p) in rows.iter().zip(&pivots) {
            for f in ones(row) {
                if column[f] != usize::MAX {
                    basis.set(p, column[f], true);
                }
            }
        }
        basis
    }

    pub fn pow(&self, k: usize) -> Result<Self> {
        self.require_square()?;
        let mut result = Self::identity(self.rows);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Inverse of `I + self` as the finite geometric series
    /// `sum_{i < bound} self^i`, valid when `self^bound = 0`.
    pub fn nilpotent_series_inverse(&self, bound: usize) -> Result<Self> {
        self.require_square()?;
        let n = self.rows;
        let mut sum = Self::zeros(n, n);
        let mut term = Self::identity(n);
        for _ in 0..bound {
            sum = sum.add(&term)?;
            term = term.mul(self)?;
        }
        // `term` is now self^bound
        if !term.is_zero() {
            return Err(Error::NotNilpotent { bound });
        }
        let one_plus = self.add(&Self::identity(n))?;
        if !one_plus.mul(&sum)?.is_identity() || !sum.mul(&one_plus)?.is_identity() {
            return Err(Error::NotNilpotent { bound });
        }
        Ok(sum)
    }

    /// Returns `p` with `p[rp(i)][cp(j)] = self[i][j]`.
    pub fn permute(&self, rp: &Permutation, cp: &Permutation) -> Result<Self> {
        if rp.len() != self.rows {
            return Err(Error::PermutationSize {
                perm: rp.len(),
                dim: self.rows,
            });
        }
        if cp.len() != self.cols {
            return Err(Error::PermutationSize {
                perm: cp.len(),
                dim: self.cols,
            });
        }
        let mut out = Self::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            let ri = rp.apply(i);
            for j in self.row_ones(i) {
                out.set(ri, cp.apply(j), true);
            }
        }
        Ok(out)
    }

    /// Copies rows `r0..r1` and columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Result<Self> {
        if r0 > r1 || r1 > self.rows || c0 > c1 || c1 > self.cols {
            return Err(Error::SplitOutOfRange {
                i: r1,
                j: c1,
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut out = Self::zeros(r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in self
                .row_ones(i)
                .skip_while(|&j| j < c0)
                .take_while(|&j| j < c1)
            {
                out.set(i - r0, j - c0, true);
            }
        }
        Ok(out)
    }

    /// Splits into `[[a, b], [c, d]]` with `a` of shape `i x j`.
    pub fn split4(&self, i: usize, j: usize) -> Result<[Self; 4]> {
        if i > self.rows || j > self.cols {
            return Err(Error::SplitOutOfRange {
                i,
                j,
                rows: self.rows,
                cols: self.cols,
            });
        }
        let (r, c) = self.shape();
        Ok([
            self.submatrix(0, i, 0, j)?,
            self.submatrix(0, i, j, c)?,
            self.submatrix(i, r, 0, j)?,
            self.submatrix(i, r, j, c)?,
        ])
    }

    /// `[self | other]`
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch {
                op: "hstack",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in self.row_ones(i) {
                out.set(i, j, true);
            }
            for j in other.row_ones(i) {
                out.set(i, self.cols + j, true);
            }
        }
        Ok(out)
    }

    /// `[self ; other]`
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                op: "vstack",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut data = Vec::with_capacity(self.data.len() + other.data.len());
        data.extend_from_slice(&self.data);
        data.extend_from_slice(&other.data);
        Ok(Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            stride: self.stride,
            data,
        })
    }

    /// Inverse of [`split4`](Self::split4).
    pub fn join4(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self> {
        a.hstack(b)?.vstack(&c.hstack(d)?)
    }

    /// Assembles a block matrix from a grid of blocks. Every block in a grid
    /// row must have the same height and every block in a grid column the
    /// same width.
    pub fn from_blocks(blocks: &[Vec<Self>]) -> Result<Self> {
        let mut out: Option<Self> = None;
        for row in blocks {
            let mut acc: Option<Self> = None;
            for b in row {
                acc = Some(match acc {
                    None => b.clone(),
                    Some(a) => a.hstack(b)?,
                });
            }
            let Some(strip) = acc else { continue };
            out = Some(match out {
                None => strip,
                Some(o) => o.vstack(&strip)?,
            });
        }
        Ok(out.unwrap_or_else(|| Self::zeros(0, 0)))
    }

    pub fn is_lower_unitriangular(&self) -> Result<bool> {
        self.require_square()?;
        Ok((0..self.rows).all(|i| self.get(i, i) && self.row_ones(i).all(|j| j <= i)))
    }

    pub fn is_strictly_lower_triangular(&self) -> Result<bool> {
        self.require_square()?;
        Ok((0..self.rows).all(|i| self.row_ones(i).all(|j| j < i)))
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Renders the dense text format: a `rows cols` header line followed by
    /// one line of space-separated `0`/`1` tokens per row.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if j > 0 {
                    s.push(' ');
                }
                s.push(if self.get(i, j) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing header line".into()))?;
        let dims: Vec<&str> = header.split_whitespace().collect();
        let [r, c] = dims.as_slice() else {
            return Err(Error::Parse(format!("bad header {header:?}")));
        };
        let rows: usize = r
            .parse()
            .map_err(|_| Error::Parse(format!("bad row count {r:?}")))?;
        let cols: usize = c
            .parse()
            .map_err(|_| Error::Parse(format!("bad column count {c:?}")))?;
        let body: Vec<&str> = lines.collect();
        // rows without columns print as blank lines, which are skipped
        let expected = if cols == 0 { 0 } else { rows };
        if body.len() < expected {
            return Err(Error::Parse(format!(
                "expected {rows} rows, found {}",
                body.len()
            )));
        }
        let mut lines = body.into_iter();
        let mut m = Self::zeros(rows, cols);
        for i in 0..expected {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("expected {rows} rows, found {i}")))?;
            let mut count = 0;
            for (j, tok) in line.split_whitespace().enumerate() {
                if j >= cols {
                    return Err(Error::Parse(format!(
                        "row {i} has more than {cols} entries"
                    )));
                }
                match tok {
                    "0" => {}
                    "1" => m.set(i, j, true),
                    _ => return Err(Error::Parse(format!("bad entry {tok:?} in row {i}"))),
                }
                count += 1;
            }
            if count != cols {
                return Err(Error::Parse(format!(
                    "row {i} has {count} entries, expected {cols}"
                )));
            }
        }
        if let Some(extra) = lines.next() {
            return Err(Error::Parse(format!("trailing data {extra:?}")));
        }
        Ok(m)
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                f.write_str(if self.get(i, j) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for Gf2Matrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_text(s)
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(b)
    }
}

/// Column indices of the set bits of a packed row.
fn ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words
        .iter()
        .enumerate()
        .flat_map(|(wi, &w)| BitIter(w).map(move |b| wi * WORD_BITS + b))
}

/// First set bit at or after `from`.
fn next_one(words: &[u64], from: usize) -> Option<usize> {
    let mut w = from / WORD_BITS;
    let mut cur = *words.get(w)? & (!0u64 << (from % WORD_BITS));
    loop {
        if cur != 0 {
            return Some(w * WORD_BITS + cur.trailing_zeros() as usize);
        }
        w += 1;
        cur = *words.get(w)?;
    }
}

fn xor_from(dst: &mut [u64], src: &[u64], word: usize) {
    for (d, &x) in dst[word..].iter_mut().zip(&src[word..]) {
        *d ^= x;
    }
}

/// Echelon basis of a row space, grown one row at a time. An inserted row
/// is reduced by the stored rows whose pivot it hits, left to right, so its
/// first remaining set bit is a fresh pivot. Cost follows the fill-in
/// rather than the full matrix size, which suits sparse incidence data.
struct RowBasis {
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
    owner: Vec<Option<usize>>,
}

impl RowBasis {
    fn new(cols: usize) -> Self {
        Self {
            rows: Vec::new(),
            pivots: Vec::new(),
            owner: vec![None; cols],
        }
    }

    /// Returns whether `v` was independent of the stored rows.
    fn insert(&mut self, mut v: Vec<u64>) -> bool {
        let mut pos = 0;
        while let Some(j) = next_one(&v, pos) {
            match self.owner[j] {
                Some(b) => xor_from(&mut v, &self.rows[b], j / WORD_BITS),
                None => {
                    self.owner[j] = Some(self.rows.len());
                    self.pivots.push(j);
                    self.rows.push(v);
                    return true;
                }
            }
            pos = j + 1;
        }
        false
    }

    /// Back substitution; rows come out sorted by pivot.
    fn reduce(mut self) -> (Vec<usize>, Vec<Vec<u64>>) {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_unstable_by_key(|&i| self.pivots[i]);
        for &i in order.iter().rev() {
            let mut row = std::mem::take(&mut self.rows[i]);
            let mut pos = self.pivots[i] + 1;
            while let Some(j) = next_one(&row, pos) {
                if let Some(b) = self.owner[j] {
                    xor_from(&mut row, &self.rows[b], j / WORD_BITS);
                }
                pos = j + 1;
            }
            self.rows[i] = row;
        }
        let pivots = order.iter().map(|&i| self.pivots[i]).collect();
        let rows = order
            .into_iter()
            .map(|i| std::mem::take(&mut self.rows[i]))
            .collect();
        (pivots, rows)
    }
}

/// A bijection on `0..len`, stored as its image table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            image: (0..n).collect(),
        }
    }

    pub fn new(image: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; image.len()];
        for &x in &image {
            if x >= image.len() || seen[x] {
                return Err(Error::InvalidPermutation(format!(
                    "{x} repeated or out of range for size {}",
                    image.len()
                )));
            }
            seen[x] = true;
        }
        Ok(Self { image })
    }

    /// The permutation sending `order[p]` to `p`, i.e. the relabeling that
    /// moves the listed indices to the front in the listed order.
    pub fn from_order(order: &[usize]) -> Result<Self> {
        Ok(Self::new(order.to_vec())?.inverse())
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.image.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.image.len()];
        for (i, &x) in self.image.iter().enumerate() {
            inv[x] = i;
        }
        Self { image: inv }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.image
    }
}
