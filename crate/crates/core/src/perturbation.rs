//! Perturbation of reductions.
//!
//! The perturbed reduction is built constructively: decompose the big
//! complex along the reduction as `A + B + C'` (with `A = ker f ∩ ker h`,
//! `B = ker f ∩ ker d`, `C' = im g`), rewrite `d + δ` in that basis, invert
//! the perturbed pivot block `A_k -> B_{k-1}` with a finite geometric
//! series, and eliminate the `A`/`B` blocks with the generalised hexagonal
//! formulas.
//!
//! Everything is in the column-vector convention. Over GF(2) all the signs
//! of the classical formulas disappear.

use std::borrow::Cow;
use std::collections::BTreeMap;

use crate::complex::{verify_reduction, Degree, FGChainComplex, ReductionTriple};
use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;
use crate::morse::ReorderedComplex;

const A: usize = 0;
const B: usize = 1;
const C: usize = 2;

/// Sizes `[a, b, c]` of the `A`, `B` and `C'` summands of one degree.
pub type BlockSizes = [usize; 3];

fn offsets([a, b, c]: BlockSizes) -> [usize; 4] {
    [0, a, a + b, a + b + c]
}

fn block(
    m: &Gf2Matrix,
    rows: BlockSizes,
    ri: usize,
    cols: BlockSizes,
    ci: usize,
) -> Result<Gf2Matrix> {
    let (r, c) = (offsets(rows), offsets(cols));
    m.submatrix(r[ri], r[ri + 1], c[ci], c[ci + 1])
}

/// A differential perturbation `δ` of a complex such that `d + δ` is again
/// a differential.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Perturbation {
    base: FGChainComplex,
    /// `delta[i]` is `δ(lo + 1 + i)`.
    delta: Vec<Gf2Matrix>,
    perturbed: FGChainComplex,
}

impl Perturbation {
    pub fn new(base: FGChainComplex, delta: Vec<Gf2Matrix>) -> Result<Self> {
        let lo = base.lo();
        if delta.len() + 1 != base.dims().len() {
            return Err(Error::MalformedComplex(format!(
                "need {} perturbation matrices, got {}",
                base.dims().len() - 1,
                delta.len()
            )));
        }
        let mut sums = Vec::with_capacity(delta.len());
        for (i, dk) in delta.iter().enumerate() {
            let k = lo + 1 + i as Degree;
            sums.push(base.d(k).add(dk)?);
        }
        let perturbed = FGChainComplex::new(lo, base.dims().to_vec(), sums)?;
        Ok(Self {
            base,
            delta,
            perturbed,
        })
    }

    pub fn zero(base: &FGChainComplex) -> Self {
        let delta = base
            .degrees()
            .skip(1)
            .map(|k| Gf2Matrix::zeros(base.dim(k - 1), base.dim(k)))
            .collect();
        Self {
            base: base.clone(),
            delta,
            perturbed: base.clone(),
        }
    }

    pub fn base(&self) -> &FGChainComplex {
        &self.base
    }

    /// The complex `(C, d + δ)`.
    pub fn perturbed(&self) -> &FGChainComplex {
        &self.perturbed
    }

    pub fn delta(&self, k: Degree) -> Cow<'_, Gf2Matrix> {
        let lo = self.base.lo();
        if k > lo && k <= self.base.hi() {
            Cow::Borrowed(&self.delta[(k - lo - 1) as usize])
        } else {
            Cow::Owned(Gf2Matrix::zeros(self.base.dim(k - 1), self.base.dim(k)))
        }
    }
}

/// A complex whose every module is split as `A + B + C'`, basis vectors in
/// that order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitComplex {
    complex: FGChainComplex,
    blocks: Vec<BlockSizes>,
}

impl SplitComplex {
    pub fn new(complex: FGChainComplex, blocks: Vec<BlockSizes>) -> Result<Self> {
        if blocks.len() != complex.dims().len() {
            return Err(Error::MalformedComplex("one block split per degree".into()));
        }
        for (k, (b, &n)) in complex.degrees().zip(blocks.iter().zip(complex.dims())) {
            if b.iter().sum::<usize>() != n {
                return Err(Error::MalformedComplex(format!(
                    "blocks {b:?} do not add up to dim {n} at degree {k}"
                )));
            }
        }
        Ok(Self { complex, blocks })
    }

    pub fn complex(&self) -> &FGChainComplex {
        &self.complex
    }

    pub fn blocks(&self, k: Degree) -> BlockSizes {
        let lo = self.complex.lo();
        if k < lo || k > self.complex.hi() {
            return [0, 0, 0];
        }
        self.blocks[(k - lo) as usize]
    }

    /// Block `(row, col)` of `d(k)`.
    fn d_block(&self, k: Degree, row: usize, col: usize) -> Result<Gf2Matrix> {
        block(
            &self.complex.d(k),
            self.blocks(k - 1),
            row,
            self.blocks(k),
            col,
        )
    }

    /// The pivot `d(k)` restricted to `A_k -> B_{k-1}`.
    pub fn pivot(&self, k: Degree) -> Result<Gf2Matrix> {
        self.d_block(k, B, A)
    }
}

/// Eliminates the `A`/`B` summands of a split complex whose pivots
/// `A_k -> B_{k-1}` are invertible, with `pivot_inverses[k]` the inverse of
/// the degree-`k` pivot. Degrees with an empty pivot may be omitted.
///
/// With `Q_k` the pivot inverse, the reduction onto the `C'` summands is
///
/// ```text
/// d'(k) = d_CC + d_CA Q_k d_BC
/// f(k)  = [ 0 | d(k+1)_CA Q_{k+1} | 1 ]
/// g(k)  = [ Q_k d(k)_BC ; 0 ; 1 ]
/// h(k)  = Q_{k+1} placed at rows A_{k+1}, columns B_k
/// ```
pub fn hexagonal_general(
    c: &SplitComplex,
    pivot_inverses: &BTreeMap<Degree, Gf2Matrix>,
) -> Result<ReductionTriple> {
    let cx = c.complex();
    let (lo, hi) = (cx.lo(), cx.hi());

    // One pivot inverse per degree lo..=hi+1; the two ends have to be empty.
    let mut q: BTreeMap<Degree, Gf2Matrix> = BTreeMap::new();
    for k in lo..=hi + 1 {
        let a = c.blocks(k)[A];
        let b = c.blocks(k - 1)[B];
        if (k == lo || k == hi + 1) && (a != 0 || b != 0) {
            return Err(Error::NotInvertible { degree: k });
        }
        let inv = match pivot_inverses.get(&k) {
            Some(m) => m.clone(),
            None if a == 0 && b == 0 => Gf2Matrix::zeros(0, 0),
            None => return Err(Error::NotInvertible { degree: k }),
        };
        if k > lo && k <= hi {
            let p = c.pivot(k)?;
            let ok = inv.shape() == (a, b)
                && inv.mul(&p).is_ok_and(|m| m.is_identity())
                && p.mul(&inv).is_ok_and(|m| m.is_identity());
            if !ok {
                return Err(Error::NotInvertible { degree: k });
            }
        }
        q.insert(k, inv);
    }

    let mut small_dims = Vec::new();
    let mut small_diffs = Vec::new();
    let mut f = Vec::new();
    let mut g = Vec::new();
    let mut h = Vec::new();

    for k in lo..=hi {
        let [a, b, cc] = c.blocks(k);
        small_dims.push(cc);

        if k > lo {
            let dcc = c.d_block(k, C, C)?;
            let correction = c.d_block(k, C, A)?.mul(&q[&k])?.mul(&c.d_block(k, B, C)?)?;
            small_diffs.push(dcc.add(&correction)?);
        }

        let f_b = if k < hi {
            c.d_block(k + 1, C, A)?.mul(&q[&(k + 1)])?
        } else {
            Gf2Matrix::zeros(cc, b)
        };
        f.push(Gf2Matrix::from_blocks(&[vec![
            Gf2Matrix::zeros(cc, a),
            f_b,
            Gf2Matrix::identity(cc),
        ]])?);

        let g_a = if k > lo {
            q[&k].mul(&c.d_block(k, B, C)?)?
        } else {
            Gf2Matrix::zeros(a, cc)
        };
        g.push(Gf2Matrix::from_blocks(&[
            vec![g_a],
            vec![Gf2Matrix::zeros(b, cc)],
            vec![Gf2Matrix::identity(cc)],
        ])?);

        let [a1, b1, c1] = c.blocks(k + 1);
        let mut hk = Gf2Matrix::zeros(a1 + b1 + c1, a + b + cc);
        let qk1 = &q[&(k + 1)];
        for i in 0..a1 {
            for j in qk1.row_ones(i) {
                hk.set(i, a + j, true);
            }
        }
        h.push(hk);
    }

    let small = FGChainComplex::new(lo, small_dims, small_diffs)?;
    ReductionTriple::new(cx.clone(), small, f, g, h)
}

/// The basis change attached to a reduction.
///
/// `phi(k)` has the bases of `A_k`, `B_k` and `C'_k = im g(k)` as its column
/// blocks. In that basis `d` only has the invertible block `A_k -> B_{k-1}`
/// and the small differential on `C'`, and `h` only has the inverse block
/// `B_k -> A_{k+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    lo: Degree,
    blocks: Vec<BlockSizes>,
    phi: Vec<Gf2Matrix>,
    phi_inv: Vec<Gf2Matrix>,
    /// `h` rewritten in the new bases, per degree.
    h_new: Vec<Gf2Matrix>,
}

impl Decomposition {
    fn slot(&self, k: Degree) -> Option<usize> {
        (k >= self.lo && ((k - self.lo) as usize) < self.blocks.len())
            .then(|| (k - self.lo) as usize)
    }

    pub fn blocks(&self, k: Degree) -> BlockSizes {
        self.slot(k).map_or([0, 0, 0], |i| self.blocks[i])
    }

    pub fn phi(&self, k: Degree) -> Cow<'_, Gf2Matrix> {
        match self.slot(k) {
            Some(i) => Cow::Borrowed(&self.phi[i]),
            None => Cow::Owned(Gf2Matrix::zeros(0, 0)),
        }
    }

    pub fn phi_inv(&self, k: Degree) -> Cow<'_, Gf2Matrix> {
        match self.slot(k) {
            Some(i) => Cow::Borrowed(&self.phi_inv[i]),
            None => Cow::Owned(Gf2Matrix::zeros(0, 0)),
        }
    }

    /// `phi(k-1)^-1 * m * phi(k)` for a map from degree `k` to `k - 1`.
    pub fn transport_down(&self, k: Degree, m: &Gf2Matrix) -> Result<Gf2Matrix> {
        self.phi_inv(k - 1).mul(m)?.mul(&self.phi(k))
    }

    /// The rewritten homotopy `phi(k+1)^-1 * h(k) * phi(k)`.
    pub fn h_new(&self, k: Degree) -> Cow<'_, Gf2Matrix> {
        match self.slot(k) {
            Some(i) => Cow::Borrowed(&self.h_new[i]),
            None => Cow::Owned(Gf2Matrix::zeros(
                self.blocks(k + 1).iter().sum(),
                self.blocks(k).iter().sum(),
            )),
        }
    }

    /// Rewrites a complex on the same modules in the new bases.
    pub fn transport(&self, cx: &FGChainComplex) -> Result<SplitComplex> {
        let diffs = cx
            .degrees()
            .skip(1)
            .map(|k| self.transport_down(k, &cx.d(k)))
            .collect::<Result<Vec<_>>>()?;
        let moved = FGChainComplex::new(cx.lo(), cx.dims().to_vec(), diffs)?;
        SplitComplex::new(moved, self.blocks.clone())
    }
}

/// Splits the big complex of a reduction as `A + B + C'`.
pub fn decompose(r: &ReductionTriple) -> Result<Decomposition> {
    let big = r.big();
    let fail = |msg: String| Error::DecompositionFailure(msg);

    let mut blocks = Vec::new();
    let mut phi = Vec::new();
    let mut phi_inv = Vec::new();
    for k in big.degrees() {
        let a_basis = r.f(k).vstack(&r.h(k))?.right_kernel_basis();
        let b_basis = r.f(k).vstack(&big.d(k))?.right_kernel_basis();
        let g = r.g(k).into_owned();
        let sizes = [a_basis.cols(), b_basis.cols(), g.cols()];
        if sizes.iter().sum::<usize>() != big.dim(k) {
            return Err(fail(format!(
                "summands {sizes:?} do not span degree {k} of dim {}",
                big.dim(k)
            )));
        }
        let p = Gf2Matrix::from_blocks(&[vec![a_basis, b_basis, g]])?;
        let p_inv = p
            .inverse()
            .map_err(|_| fail(format!("basis change at degree {k} is singular")))?;
        blocks.push(sizes);
        phi.push(p);
        phi_inv.push(p_inv);
    }

    let mut dec = Decomposition {
        lo: big.lo(),
        blocks,
        phi,
        phi_inv,
        h_new: Vec::new(),
    };

    let split = dec.transport(big)?;
    for k in big.degrees() {
        let rows = dec.blocks(k - 1);
        let cols = dec.blocks(k);
        let d = split.complex().d(k);
        for ri in [A, B, C] {
            for ci in [A, B, C] {
                let blk = block(&d, rows, ri, cols, ci)?;
                let ok = match (ri, ci) {
                    (B, A) => blk.inverse().is_ok(),
                    (C, C) => blk == *r.small().d(k),
                    _ => blk.is_zero(),
                };
                if !ok {
                    return Err(fail(format!(
                        "block ({ri}, {ci}) of d({k}) breaks the decomposition pattern"
                    )));
                }
            }
        }
    }

    for k in big.degrees() {
        let hk = dec.phi_inv(k + 1).mul(&r.h(k))?.mul(&dec.phi(k))?;
        let rows = dec.blocks(k + 1);
        let cols = dec.blocks(k);
        for ri in [A, B, C] {
            for ci in [A, B, C] {
                let blk = block(&hk, rows, ri, cols, ci)?;
                let ok = match (ri, ci) {
                    (A, B) => {
                        let pivot = split.pivot(k + 1)?;
                        blk.mul(&pivot).is_ok_and(|m| m.is_identity())
                            && pivot.mul(&blk).is_ok_and(|m| m.is_identity())
                    }
                    _ => blk.is_zero(),
                };
                if !ok {
                    return Err(fail(format!(
                        "block ({ri}, {ci}) of h({k}) breaks the decomposition pattern"
                    )));
                }
            }
        }
        dec.h_new.push(hk);
    }
    Ok(dec)
}

/// Smallest `m >= 1` with `(δ(k) h(k-1))^m = 0` in every degree, searched up
/// to the matrix size plus one.
pub fn nilpotency_bound(p: &Perturbation, r: &ReductionTriple) -> Result<usize> {
    let mut bound = 1;
    for k in p.base().degrees() {
        let x = p.delta(k).mul(&r.h(k - 1))?;
        let limit = x.rows() + 1;
        let mut power = x.clone();
        let mut m = 1;
        while !power.is_zero() {
            if m >= limit {
                return Err(Error::NotNilpotent { bound: limit });
            }
            power = power.mul(&x)?;
            m += 1;
        }
        bound = bound.max(m);
    }
    Ok(bound)
}

/// Perturbs a reduction `(C, d) => (Ĉ, d̂)` to `(C, d + δ) => (Ĉ, d̂ + δ̂)`,
/// where `(δ h)^bound = 0`. The result is verified before it is returned.
pub fn bpl(r: &ReductionTriple, p: &Perturbation, bound: usize) -> Result<ReductionTriple> {
    if p.base() != r.big() {
        return Err(Error::MalformedComplex(
            "perturbation is not on the big complex of the reduction".into(),
        ));
    }
    bpl_decomposed(r, &decompose(r)?, p, bound)
}

/// [`bpl`] with the decomposition of `r` already at hand.
pub fn bpl_decomposed(
    r: &ReductionTriple,
    dec: &Decomposition,
    p: &Perturbation,
    bound: usize,
) -> Result<ReductionTriple> {
    let sizes: Vec<usize> = dec.blocks.iter().map(|b| b.iter().sum()).collect();
    if p.base() != r.big() || dec.lo != r.big().lo() || sizes != r.big().dims() {
        return Err(Error::MalformedComplex(
            "perturbation or decomposition does not match the reduction".into(),
        ));
    }
    for k in p.base().degrees() {
        let x = p.delta(k).mul(&r.h(k - 1))?;
        if !x.pow(bound)?.is_zero() {
            return Err(Error::NotNilpotent { bound });
        }
    }
    let split = dec.transport(p.perturbed())?;

    let mut inverses = BTreeMap::new();
    for k in p.base().degrees().skip(1) {
        let rows = dec.blocks(k - 1);
        let cols = dec.blocks(k);
        // (d + δ)_BA = (1 + δ_BA h_AB) d_BA with h_AB = d_BA^-1, so its
        // inverse is h_AB (1 + δ_BA h_AB)^-1.
        let delta_ba = block(&dec.transport_down(k, &p.delta(k))?, rows, B, cols, A)?;
        let h_ab = block(&dec.h_new(k - 1), cols, A, rows, B)?;
        let series = delta_ba.mul(&h_ab)?.nilpotent_series_inverse(bound)?;
        inverses.insert(k, h_ab.mul(&series)?);
    }

    let hex = hexagonal_general(&split, &inverses)?;

    let (lo, hi) = (p.base().lo(), p.base().hi());
    let mut f = Vec::new();
    let mut g = Vec::new();
    let mut h = Vec::new();
    for k in lo..=hi {
        f.push(hex.f(k).mul(&dec.phi_inv(k))?);
        g.push(dec.phi(k).mul(&hex.g(k))?);
        let phi_up = if k < hi {
            dec.phi(k + 1).into_owned()
        } else {
            Gf2Matrix::zeros(0, 0)
        };
        h.push(phi_up.mul(&hex.h(k))?.mul(&dec.phi_inv(k))?);
    }
    let out = ReductionTriple::new(p.perturbed().clone(), hex.small().clone(), f, g, h)?;

    let report = verify_reduction(&out);
    if !report.all_passed() {
        let failed: Vec<&str> = report.failures().collect();
        return Err(Error::VerificationFailure(failed.join(", ")));
    }
    Ok(out)
}

/// Outcome of re-deriving the image reduction through the perturbation
/// lemma.
#[derive(Debug, Clone)]
pub struct BplRoute {
    /// Reduction of the base complex (only the identity block of `d(1)`)
    /// onto the critical cells.
    pub initial: ReductionTriple,
    /// The perturbed reduction of the reordered image complex.
    pub reduction: ReductionTriple,
    /// Smallest nilpotency index of `δ h` found.
    pub nilpotency_bound: usize,
    /// Whether `(δ h)^(nv + 1)` vanishes.
    pub tight_bound_holds: bool,
    /// Whether `(δ h)^(nv + 2)` vanishes.
    pub loose_bound_holds: bool,
}

/// Rebuilds the reduction of a reordered image complex by perturbing the
/// trivial reduction of the complex whose only differential is the
/// identity block on the paired cells.
pub fn vf_reduction_via_bpl(rc: &ReorderedComplex) -> Result<BplRoute> {
    let t = &rc.t;
    let nv = rc.nv;
    let [c0, c1, c2] = t.dims();
    let (k0, k1) = (c0 - nv, c1 - nv);

    let hat_d1 = Gf2Matrix::from_fn(c0, c1, |i, j| i == j && i < nv);
    let base = FGChainComplex::new(
        0,
        vec![c0, c1, c2],
        vec![hat_d1.clone(), Gf2Matrix::zeros(c1, c2)],
    )?;
    let critical = FGChainComplex::zero_differential(0, vec![k0, k1, c2])?;

    let select = |n: usize, k: usize| Gf2Matrix::from_fn(k, n, |i, j| j == i + (n - k));
    let f = vec![select(c0, k0), select(c1, k1), Gf2Matrix::identity(c2)];
    let g: Vec<Gf2Matrix> = f.iter().map(Gf2Matrix::transpose).collect();
    let h = vec![
        Gf2Matrix::from_fn(c1, c0, |i, j| i == j && i < nv),
        Gf2Matrix::zeros(c2, c1),
        Gf2Matrix::zeros(0, c2),
    ];
    let initial = ReductionTriple::new(base.clone(), critical, f, g, h)?;
    let report = verify_reduction(&initial);
    if !report.all_passed() {
        let failed: Vec<&str> = report.failures().collect();
        return Err(Error::VerificationFailure(failed.join(", ")));
    }

    let delta1 = t.d1.add(&hat_d1)?;
    let p = Perturbation::new(base, vec![delta1, t.d2.clone()])?;

    // `bound` is the least annihilating power, so any m >= bound annihilates
    let bound = nilpotency_bound(&p, &initial)?;
    let tight_bound_holds = bound <= nv + 1;
    let loose_bound_holds = bound <= nv + 2;

    let reduction = bpl(&initial, &p, bound)?;
    Ok(BplRoute {
        initial,
        reduction,
        nilpotency_bound: bound,
        tight_bound_holds,
        loose_bound_holds,
    })
}
