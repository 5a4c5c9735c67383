//! Reduction of a truncated complex along a discrete vector field on `D1`.
//!
//! After sorting the field by decreasing `lambda`, moving the paired rows
//! and columns of `D1` to the front (pair `i` at position `i` on both axes)
//! leaves a unit lower triangular block `L` in the upper left corner:
//!
//! ```text
//!        paired  critical
//! D1 = [   L        T    ]  paired vertices
//!      [   S        R    ]  critical vertices
//! ```
//!
//! A nonzero `L[i][j]` with `j != i` means the vector of pair `j` has a
//! relation edge to the row of pair `i`, so `lambda` strictly drops from
//! `j` to `i` and `j` sorts first. Eliminating the pairs gives the reduced
//! boundary `R + S L^-1 T` on the critical cells.

use crate::complex::{ReductionTriple, TruncatedComplex};
use crate::error::{Error, Result};
use crate::gf2::{Gf2Matrix, Permutation};
use crate::vector_field::DiscreteVectorField;

/// A truncated complex with the vector-field pairs moved to the front.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReorderedComplex {
    /// The reordered complex.
    pub t: TruncatedComplex,
    /// Number of vector-field pairs.
    pub nv: usize,
    /// Old vertex index to new position.
    pub row_perm: Permutation,
    /// Old edge index to new position (rows of `D2` move the same way).
    pub col_perm: Permutation,
    pub l: Gf2Matrix,
    pub t_block: Gf2Matrix,
    pub s: Gf2Matrix,
    pub r: Gf2Matrix,
    pub d2_top: Gf2Matrix,
    pub d2_bot: Gf2Matrix,
}

impl ReorderedComplex {
    /// Undoes the relabeling.
    pub fn restore(&self) -> Result<TruncatedComplex> {
        let row_inv = self.row_perm.inverse();
        let col_inv = self.col_perm.inverse();
        let keep = Permutation::identity(self.t.c2());
        TruncatedComplex::new(
            self.t.d1.permute(&row_inv, &col_inv)?,
            self.t.d2.permute(&col_inv, &keep)?,
        )
    }
}

/// Moves the pairs of a lambda-sorted vector field on `t.d1` to the front.
pub fn reorder(t: &TruncatedComplex, vf: &DiscreteVectorField) -> Result<ReorderedComplex> {
    if vf.shape() != t.d1.shape() {
        return Err(Error::InvalidVectorField(format!(
            "field built on a {:?} matrix, D1 is {:?}",
            vf.shape(),
            t.d1.shape()
        )));
    }
    if !vf.is_sorted() {
        return Err(Error::InvalidVectorField(
            "field is not sorted by lambda".into(),
        ));
    }
    let nv = vf.len();

    let mut row_order: Vec<usize> = vf.pairs.iter().map(|p| p.0).collect();
    row_order.extend(vf.critical_rows());
    let mut col_order: Vec<usize> = vf.pairs.iter().map(|p| p.1).collect();
    col_order.extend(vf.critical_cols());
    let row_perm = Permutation::from_order(&row_order)
        .map_err(|e| Error::InvalidVectorField(e.to_string()))?;
    let col_perm = Permutation::from_order(&col_order)
        .map_err(|e| Error::InvalidVectorField(e.to_string()))?;

    let d1 = t.d1.permute(&row_perm, &col_perm)?;
    let d2 = t.d2.permute(&col_perm, &Permutation::identity(t.c2()))?;
    let [l, t_block, s, r] = d1.split4(nv, nv)?;
    let [d2_top, _, d2_bot, _] = d2.split4(nv, t.c2())?;

    if !l.is_lower_unitriangular()? {
        return Err(Error::TriangularityViolation);
    }

    Ok(ReorderedComplex {
        t: TruncatedComplex::new(d1, d2)?,
        nv,
        row_perm,
        col_perm,
        l,
        t_block,
        s,
        r,
        d2_top,
        d2_bot,
    })
}

/// Eliminates the vector-field pairs of a reordered complex.
///
/// Returns the reduced complex `(R + S L^-1 T, D2_bot)` on the critical cells
/// together with the reduction from the reordered complex onto it:
///
/// ```text
/// f0 = [S L^-1 | 1]   g0 = [0 ; 1]         h0 = [L^-1 0 ; 0 0]
/// f1 = [0 | 1]        g1 = [L^-1 T ; 1]    h1 = 0
/// f2 = 1              g2 = 1
/// ```
pub fn hexagonal_reduce(rc: &ReorderedComplex) -> Result<(TruncatedComplex, ReductionTriple)> {
    let nv = rc.nv;
    let [c0, c1, c2] = rc.t.dims();
    let (k0, k1) = (c0 - nv, c1 - nv);

    let l_inv = rc.l.inv_unit_lower_triangular()?;
    let s_linv = rc.s.mul(&l_inv)?;
    let d1_small = rc.r.add(&s_linv.mul(&rc.t_block)?)?;
    let d2_small = rc.d2_bot.clone();
    let reduced = TruncatedComplex::new(d1_small, d2_small)?;
    reduced.check_boundary()?;

    let f0 = s_linv.hstack(&Gf2Matrix::identity(k0))?;
    let g0 = Gf2Matrix::zeros(nv, k0).vstack(&Gf2Matrix::identity(k0))?;
    let f1 = Gf2Matrix::zeros(k1, nv).hstack(&Gf2Matrix::identity(k1))?;
    let g1 = l_inv.mul(&rc.t_block)?.vstack(&Gf2Matrix::identity(k1))?;
    let h0 = Gf2Matrix::join4(
        &l_inv,
        &Gf2Matrix::zeros(nv, k0),
        &Gf2Matrix::zeros(k1, nv),
        &Gf2Matrix::zeros(k1, k0),
    )?;
    let h1 = Gf2Matrix::zeros(c2, c1);
    let h2 = Gf2Matrix::zeros(0, c2);

    let triple = ReductionTriple::new(
        rc.t.to_complex()?,
        reduced.to_complex()?,
        vec![f0, f1, Gf2Matrix::identity(c2)],
        vec![g0, g1, Gf2Matrix::identity(c2)],
        vec![h0, h1, h2],
    )?;
    Ok((reduced, triple))
}
