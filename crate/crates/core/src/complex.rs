//! Finitely generated chain complexes over GF(2) and reductions between them.
//!
//! Degrees live in a finite window `[lo, hi]`; every module outside the
//! window is zero. The differential `d(k)` maps degree `k` to degree `k - 1`
//! and is stored as a `dim(k - 1) x dim(k)` matrix acting on column vectors.

use std::borrow::Cow;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;
use crate::report::VerificationReport;

pub type Degree = i32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FGChainComplex {
    lo: Degree,
    dims: Vec<usize>,
    /// `diffs[i]` is `d(lo + 1 + i)`.
    diffs: Vec<Gf2Matrix>,
}

impl FGChainComplex {
    /// Builds a complex on the window `[lo, lo + dims.len() - 1]`.
    /// `diffs` lists `d(lo + 1), d(lo + 2), ...`, one per degree above `lo`.
    pub fn new(lo: Degree, dims: Vec<usize>, diffs: Vec<Gf2Matrix>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::MalformedComplex("empty degree window".into()));
        }
        if diffs.len() + 1 != dims.len() {
            return Err(Error::MalformedComplex(format!(
                "{} modules need {} differentials, got {}",
                dims.len(),
                dims.len() - 1,
                diffs.len()
            )));
        }
        for (i, d) in diffs.iter().enumerate() {
            if d.shape() != (dims[i], dims[i + 1]) {
                return Err(Error::MalformedComplex(format!(
                    "d({}) has shape {:?}, expected {:?}",
                    lo + 1 + i as Degree,
                    d.shape(),
                    (dims[i], dims[i + 1])
                )));
            }
        }
        let c = Self { lo, dims, diffs };
        c.check_boundary()?;
        Ok(c)
    }

    /// The complex with zero differentials and the given module dimensions.
    pub fn zero_differential(lo: Degree, dims: Vec<usize>) -> Result<Self> {
        let diffs = dims
            .windows(2)
            .map(|w| Gf2Matrix::zeros(w[0], w[1]))
            .collect();
        Self::new(lo, dims, diffs)
    }

    pub fn lo(&self) -> Degree {
        self.lo
    }

    pub fn hi(&self) -> Degree {
        self.lo + self.dims.len() as Degree - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<Degree> {
        self.lo..=self.hi()
    }

    fn index(&self, k: Degree) -> Option<usize> {
        (k >= self.lo && k <= self.hi()).then(|| (k - self.lo) as usize)
    }

    pub fn dim(&self, k: Degree) -> usize {
        self.index(k).map_or(0, |i| self.dims[i])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `d(k)`, a zero matrix of the right shape outside `(lo, hi]`.
    pub fn d(&self, k: Degree) -> Cow<'_, Gf2Matrix> {
        if k > self.lo && k <= self.hi() {
            Cow::Borrowed(&self.diffs[(k - self.lo - 1) as usize])
        } else {
            Cow::Owned(Gf2Matrix::zeros(self.dim(k - 1), self.dim(k)))
        }
    }

    pub fn check_boundary(&self) -> Result<()> {
        for k in self.lo + 1..self.hi() {
            if !self.d(k).mul(&self.d(k + 1))?.is_zero() {
                return Err(Error::BoundaryViolation { degree: k });
            }
        }
        Ok(())
    }

    /// Betti numbers by rank–nullity: `dim(k) - rank d(k) - rank d(k+1)`.
    pub fn betti(&self) -> BettiVector {
        let ranks: Vec<usize> = self.diffs.iter().map(Gf2Matrix::rank).collect();
        let betti = (0..self.dims.len())
            .map(|i| {
                let below = if i > 0 { ranks[i - 1] } else { 0 };
                let above = ranks.get(i).copied().unwrap_or(0);
                self.dims[i] - below - above
            })
            .collect();
        BettiVector { lo: self.lo, betti }
    }

    pub fn same_window(&self, other: &Self) -> bool {
        self.lo == other.lo && self.dims.len() == other.dims.len()
    }
}

/// A complex recorded by its two boundary matrices `d1: C1 -> C0` and
/// `d2: C2 -> C1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedComplex {
    pub d1: Gf2Matrix,
    pub d2: Gf2Matrix,
}

impl TruncatedComplex {
    /// Checks only that the shapes compose; see [`check_boundary`](Self::check_boundary).
    pub fn new(d1: Gf2Matrix, d2: Gf2Matrix) -> Result<Self> {
        if d1.cols() != d2.rows() {
            return Err(Error::DimensionMismatch {
                op: "truncated complex",
                left: d1.shape(),
                right: d2.shape(),
            });
        }
        Ok(Self { d1, d2 })
    }

    pub fn empty() -> Self {
        Self {
            d1: Gf2Matrix::zeros(0, 0),
            d2: Gf2Matrix::zeros(0, 0),
        }
    }

    pub fn c0(&self) -> usize {
        self.d1.rows()
    }

    pub fn c1(&self) -> usize {
        self.d1.cols()
    }

    pub fn c2(&self) -> usize {
        self.d2.cols()
    }

    pub fn dims(&self) -> [usize; 3] {
        [self.c0(), self.c1(), self.c2()]
    }

    pub fn check_boundary(&self) -> Result<()> {
        if self.d1.mul(&self.d2)?.is_zero() {
            Ok(())
        } else {
            Err(Error::BoundaryViolation { degree: 1 })
        }
    }

    /// The complex on the window `[0, 2]` with `d(1) = d1`, `d(2) = d2`.
    pub fn to_complex(&self) -> Result<FGChainComplex> {
        FGChainComplex::new(
            0,
            vec![self.c0(), self.c1(), self.c2()],
            vec![self.d1.clone(), self.d2.clone()],
        )
    }

    /// Reads back `d(1)` and `d(2)` of a complex on the window `[0, 2]`.
    pub fn from_complex(c: &FGChainComplex) -> Result<Self> {
        if c.lo() != 0 || c.hi() != 2 {
            return Err(Error::MalformedComplex(format!(
                "expected window [0, 2], got [{}, {}]",
                c.lo(),
                c.hi()
            )));
        }
        Self::new(c.d(1).into_owned(), c.d(2).into_owned())
    }

    pub fn betti(&self) -> [usize; 3] {
        let r1 = self.d1.rank();
        let r2 = self.d2.rank();
        [self.c0() - r1, self.c1() - r1 - r2, self.c2() - r2]
    }
}

pub fn from_truncated(t: &TruncatedComplex) -> Result<FGChainComplex> {
    t.to_complex()
}

/// Betti numbers indexed by degree, starting at `lo`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BettiVector {
    pub lo: Degree,
    pub betti: Vec<usize>,
}

impl BettiVector {
    pub fn get(&self, k: Degree) -> usize {
        if k < self.lo {
            return 0;
        }
        self.betti.get((k - self.lo) as usize).copied().unwrap_or(0)
    }
}

/// A reduction `(f, g, h)` from `big` onto `small`: `f` and `g` are chain
/// maps, `f g = id`, `g f + d h + h d = id`, and `f h`, `h g`, `h h` vanish.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTriple {
    big: FGChainComplex,
    small: FGChainComplex,
    f: Vec<Gf2Matrix>,
    g: Vec<Gf2Matrix>,
    h: Vec<Gf2Matrix>,
}

impl ReductionTriple {
    /// `f[i]`, `g[i]` and `h[i]` belong to degree `big.lo() + i`. Only shapes
    /// are checked here; use [`verify_reduction`] for the identities.
    pub fn new(
        big: FGChainComplex,
        small: FGChainComplex,
        f: Vec<Gf2Matrix>,
        g: Vec<Gf2Matrix>,
        h: Vec<Gf2Matrix>,
    ) -> Result<Self> {
        if !big.same_window(&small) {
            return Err(Error::MalformedComplex(
                "reduction between complexes on different windows".into(),
            ));
        }
        let n = big.dims().len();
        if f.len() != n || g.len() != n || h.len() != n {
            return Err(Error::MalformedComplex(format!(
                "need {n} maps per component, got f:{} g:{} h:{}",
                f.len(),
                g.len(),
                h.len()
            )));
        }
        for (i, k) in big.degrees().enumerate() {
            let want_f = (small.dim(k), big.dim(k));
            let want_g = (big.dim(k), small.dim(k));
            let want_h = (big.dim(k + 1), big.dim(k));
            for (name, m, want) in [
                ("f", &f[i], want_f),
                ("g", &g[i], want_g),
                ("h", &h[i], want_h),
            ] {
                if m.shape() != want {
                    return Err(Error::MalformedComplex(format!(
                        "{name}({k}) has shape {:?}, expected {want:?}",
                        m.shape()
                    )));
                }
            }
        }
        Ok(Self {
            big,
            small,
            f,
            g,
            h,
        })
    }

    pub fn identity(c: &FGChainComplex) -> Self {
        let ids: Vec<Gf2Matrix> = c.dims().iter().map(|&n| Gf2Matrix::identity(n)).collect();
        let h = c
            .degrees()
            .map(|k| Gf2Matrix::zeros(c.dim(k + 1), c.dim(k)))
            .collect();
        Self {
            big: c.clone(),
            small: c.clone(),
            f: ids.clone(),
            g: ids,
            h,
        }
    }

    pub fn big(&self) -> &FGChainComplex {
        &self.big
    }

    pub fn small(&self) -> &FGChainComplex {
        &self.small
    }

    fn slot(&self, k: Degree) -> Option<usize> {
        (k >= self.big.lo() && k <= self.big.hi()).then(|| (k - self.big.lo()) as usize)
    }

    pub fn f(&self, k: Degree) -> Cow<'_, Gf2Matrix> {
        match self.slot(k) {
            Some(i) => Cow::Borrowed(&self.f[i]),
            None => Cow::Owned(Gf2Matrix::zeros(self.small.dim(k), self.big.dim(k))),
        }
    }

    pub fn g(&self, k: Degree) -> Cow<'_, Gf2Matrix> {
        match self.slot(k) {
            Some(i) => Cow::Borrowed(&self.g[i]),
            None => Cow::Owned(Gf2Matrix::zeros(self.big.dim(k), self.small.dim(k))),
        }
    }

    pub fn h(&self, k: Degree) -> Cow<'_, Gf2Matrix> {
        match self.slot(k) {
            Some(i) => Cow::Borrowed(&self.h[i]),
            None => Cow::Owned(Gf2Matrix::zeros(self.big.dim(k + 1), self.big.dim(k))),
        }
    }

    /// Mutable access to `h(k)` inside the window, for mutation tests.
    pub fn h_mut(&mut self, k: Degree) -> Option<&mut Gf2Matrix> {
        self.slot(k).map(|i| &mut self.h[i])
    }

    pub fn f_mut(&mut self, k: Degree) -> Option<&mut Gf2Matrix> {
        self.slot(k).map(|i| &mut self.f[i])
    }

    pub fn g_mut(&mut self, k: Degree) -> Option<&mut Gf2Matrix> {
        self.slot(k).map(|i| &mut self.g[i])
    }

    pub fn into_parts(
        self,
    ) -> (
        FGChainComplex,
        FGChainComplex,
        Vec<Gf2Matrix>,
        Vec<Gf2Matrix>,
        Vec<Gf2Matrix>,
    ) {
        (self.big, self.small, self.f, self.g, self.h)
    }
}

/// Evaluates every reduction identity and both chain-map conditions at
/// every degree of the window, as exact matrix equalities.
pub fn verify_reduction(r: &ReductionTriple) -> VerificationReport {
    let mut report = VerificationReport::new();
    let big = r.big();
    let small = r.small();

    report.record("big: d*d = 0", big.check_boundary().is_ok());
    report.record("small: d*d = 0", small.check_boundary().is_ok());

    let eq =
        |a: Result<Gf2Matrix>, b: Result<Gf2Matrix>| matches!((a, b), (Ok(x), Ok(y)) if x == y);
    let is_id = |a: Result<Gf2Matrix>| a.is_ok_and(|m| m.is_identity());
    let is_zero = |a: Result<Gf2Matrix>| a.is_ok_and(|m| m.is_zero());

    for k in big.degrees() {
        report.record(format!("f*g = id @{k}"), is_id(r.f(k).mul(&r.g(k))));

        let homotopy = r.g(k).mul(&r.f(k)).and_then(|gf| {
            let dh = big.d(k + 1).mul(&r.h(k))?;
            let hd = r.h(k - 1).mul(&big.d(k))?;
            gf.add(&dh)?.add(&hd)
        });
        report.record(format!("g*f + d*h + h*d = id @{k}"), is_id(homotopy));

        report.record(format!("f*h = 0 @{k}"), is_zero(r.f(k + 1).mul(&r.h(k))));
        report.record(format!("h*g = 0 @{k}"), is_zero(r.h(k).mul(&r.g(k))));
        report.record(format!("h*h = 0 @{k}"), is_zero(r.h(k + 1).mul(&r.h(k))));

        if k > big.lo() {
            report.record(
                format!("f chain map @{k}"),
                eq(r.f(k - 1).mul(&big.d(k)), small.d(k).mul(&r.f(k))),
            );
            report.record(
                format!("g chain map @{k}"),
                eq(big.d(k).mul(&r.g(k)), r.g(k - 1).mul(&small.d(k))),
            );
        }
    }
    report
}
