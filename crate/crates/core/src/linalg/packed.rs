//! Bit-sliced elimination over GF(2^k).
//!
//! A row of `width` elements is stored as `k` bit planes of `u64` words; plane
//! `j` holds bit `j` of every element. Multiplying a row by a constant `f` is
//! GF(2)-linear on the planes: output plane `j` is the XOR of the input planes
//! selected by mask `j` of `f`, where the masks are the transposed columns of
//! the multiplication-by-`f` matrix. One `axpy` then costs about `k²/2` word
//! XORs per 64 columns instead of one table lookup per column.

use crate::gf::{Elem, FieldTower};

const MAX_BITS: usize = 16;

pub fn supported(field: &FieldTower) -> bool {
    field.p() == 2 && field.degree() <= MAX_BITS
}

pub struct PackedEchelon<'a> {
    field: &'a FieldTower,
    bits: usize,
    width: usize,
    words: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl<'a> PackedEchelon<'a> {
    pub fn new(field: &'a FieldTower, width: usize) -> Self {
        assert!(supported(field), "packed elimination needs GF(2^k), k <= {MAX_BITS}");
        PackedEchelon {
            field,
            bits: field.degree(),
            width,
            words: width.div_ceil(64),
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pack(&self, v: &[Elem]) -> Vec<u64> {
        let mut out = vec![0u64; self.bits * self.words];
        for (c, x) in v.iter().enumerate() {
            let (w, b) = (c / 64, c % 64);
            let mut code = x.0;
            let mut j = 0;
            while code != 0 {
                if code & 1 == 1 {
                    out[j * self.words + w] |= 1 << b;
                }
                code >>= 1;
                j += 1;
            }
        }
        out
    }

    pub fn unpack(&self, packed: &[u64]) -> Vec<Elem> {
        (0..self.width).map(|c| self.get(packed, c)).collect()
    }

    #[inline]
    fn get(&self, row: &[u64], c: usize) -> Elem {
        let (w, b) = (c / 64, c % 64);
        let mut code = 0u32;
        for j in 0..self.bits {
            code |= (((row[j * self.words + w] >> b) & 1) as u32) << j;
        }
        Elem(code)
    }

    /// `masks[j]` has bit `i` set when bit `j` of `f·x^i` is set.
    fn masks(&self, f: Elem) -> [u32; MAX_BITS] {
        let mut masks = [0u32; MAX_BITS];
        for i in 0..self.bits {
            let col = self.field.mul(f, Elem(1 << i)).0;
            for (j, m) in masks.iter_mut().enumerate().take(self.bits) {
                if (col >> j) & 1 == 1 {
                    *m |= 1 << i;
                }
            }
        }
        masks
    }

    /// `dst += f · src` on packed rows.
    fn axpy(&self, dst: &mut [u64], f: Elem, src: &[u64]) {
        let masks = self.masks(f);
        let n = self.words;
        for (j, &mask) in masks.iter().enumerate().take(self.bits) {
            let out = &mut dst[j * n..(j + 1) * n];
            let mut m = mask;
            while m != 0 {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                let plane = &src[i * n..(i + 1) * n];
                for (o, &s) in out.iter_mut().zip(plane) {
                    *o ^= s;
                }
            }
        }
    }

    fn scale(&self, row: &mut [u64], f: Elem) {
        let src = row.to_vec();
        row.iter_mut().for_each(|w| *w = 0);
        self.axpy(row, f, &src);
    }

    fn leading(&self, row: &[u64]) -> Option<usize> {
        (0..self.words).find_map(|w| {
            let any = (0..self.bits).fold(0u64, |acc, j| acc | row[j * self.words + w]);
            (any != 0).then(|| w * 64 + any.trailing_zeros() as usize)
        })
    }

    /// Adds `v`; returns `true` if it was independent of the rows so far.
    pub fn insert(&mut self, v: &[Elem]) -> bool {
        debug_assert_eq!(v.len(), self.width);
        let mut row = self.pack(v);
        for (stored, &p) in self.rows.iter().zip(&self.pivots) {
            let c = self.get(&row, p);
            if !c.is_zero() {
                // characteristic two: subtracting is adding
                self.axpy(&mut row, c, stored);
            }
        }
        let Some(p) = self.leading(&row) else {
            return false;
        };
        let inv = self.field.inv_nz(self.get(&row, p));
        if inv != Elem::ONE {
            self.scale(&mut row, inv);
        }
        self.rows.push(row);
        self.pivots.push(p);
        true
    }

    pub fn rows(&self) -> Vec<Vec<Elem>> {
        self.rows.iter().map(|r| self.unpack(r)).collect()
    }
}
