//! Fixed-width unsigned arithmetic over circuit literals, least significant
//! bit first.

use crate::bddl::{Axis, CoordBase, CoordExpr};

use super::{Circuit, CircuitError, Lit};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitVec {
    pub bits: Vec<Lit>,
}

impl BitVec {
    pub fn new(bits: Vec<Lit>) -> Self {
        BitVec { bits }
    }

    pub fn of_vars(c: &Circuit, vars: &[super::VarId]) -> Self {
        BitVec::new(vars.iter().map(|&v| c.lit(v)).collect())
    }

    /// `value` in exactly `width` bits, truncating higher bits.
    pub fn constant(value: u64, width: usize) -> Self {
        BitVec::new(
            (0..width)
                .map(|i| Lit::constant(i < 64 && (value >> i) & 1 == 1))
                .collect(),
        )
    }

    pub fn width(&self) -> usize {
        self.bits.len()
    }

    /// Value if every bit is constant.
    pub fn as_constant(&self) -> Option<u64> {
        self.bits.iter().enumerate().try_fold(0u64, |acc, (i, &b)| {
            if b == Lit::TRUE {
                Some(acc | (1 << i))
            } else if b == Lit::FALSE {
                Some(acc)
            } else {
                None
            }
        })
    }
}

/// Argument of [`equality`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Operand {
    Bits(BitVec),
    Const(u64),
}

impl From<BitVec> for Operand {
    fn from(v: BitVec) -> Self {
        Operand::Bits(v)
    }
}

impl From<u64> for Operand {
    fn from(k: u64) -> Self {
        Operand::Const(k)
    }
}

fn bits_needed(k: u64) -> usize {
    (64 - k.leading_zeros()) as usize
}

fn check_width(k: u64, width: usize) -> Result<(), CircuitError> {
    if width < 64 && k >> width != 0 {
        Err(CircuitError::ConstantTooWide { k, width })
    } else {
        Ok(())
    }
}

/// Ripple-carry `v + k mod 2^w`.
pub fn adder(c: &mut Circuit, v: &BitVec, k: u64) -> Result<BitVec, CircuitError> {
    check_width(k, v.width())?;
    let mut carry = Lit::FALSE;
    let mut out = Vec::with_capacity(v.width());
    for (i, &bit) in v.bits.iter().enumerate() {
        if (k >> i) & 1 == 1 {
            out.push(!c.xor(bit, carry));
            carry = c.or([bit, carry]);
        } else {
            out.push(c.xor(bit, carry));
            carry = c.and([bit, carry]);
        }
    }
    Ok(BitVec::new(out))
}

/// `v - k mod 2^w`, as the sum with the two's complement of `k`.
pub fn subtractor(c: &mut Circuit, v: &BitVec, k: u64) -> Result<BitVec, CircuitError> {
    check_width(k, v.width())?;
    let w = v.width();
    let modulus_mask = if w >= 64 { u64::MAX } else { (1u64 << w) - 1 };
    let complement = k.wrapping_neg() & modulus_mask;
    adder(c, v, complement)
}

/// `v < k`, unsigned. Constant true once `k` exceeds every `w`-bit value.
pub fn less_than(c: &mut Circuit, v: &BitVec, k: u64) -> Lit {
    if k == 0 {
        return Lit::FALSE;
    }
    if bits_needed(k) > v.width() {
        return Lit::TRUE;
    }
    // Scan from the least significant bit up; `lt` covers the bits below.
    let mut lt = Lit::FALSE;
    for (i, &bit) in v.bits.iter().enumerate() {
        lt = if (k >> i) & 1 == 1 {
            c.or([!bit, lt])
        } else {
            c.and([!bit, lt])
        };
    }
    lt
}

/// `p = q` as unsigned numbers; the narrower side is padded with zeros.
pub fn equality(c: &mut Circuit, p: &Operand, q: &Operand) -> Lit {
    fn widen(o: &Operand, width: usize) -> BitVec {
        match o {
            Operand::Bits(b) => {
                let mut bits = b.bits.clone();
                bits.resize(width, Lit::FALSE);
                BitVec::new(bits)
            }
            Operand::Const(k) => BitVec::constant(*k, width),
        }
    }
    let width_of = |o: &Operand| match o {
        Operand::Bits(b) => b.width(),
        Operand::Const(k) => bits_needed(*k),
    };
    if let (Operand::Const(a), Operand::Const(b)) = (p, q) {
        return Lit::constant(a == b);
    }
    let width = width_of(p).max(width_of(q));
    let (a, b) = (widen(p, width), widen(q, width));
    let eqs: Vec<Lit> = a
        .bits
        .iter()
        .zip(&b.bits)
        .map(|(&x, &y)| c.iff(x, y))
        .collect();
    c.and(eqs)
}

/// Value of coordinate expression `e` when the parameter of `axis` is `v`.
/// `size` is `m` for the x axis and `n` for the y axis.
pub fn compute(
    c: &mut Circuit,
    v: &BitVec,
    axis: Axis,
    e: &CoordExpr,
    size: u32,
) -> Result<BitVec, CircuitError> {
    if e.axis().is_some_and(|a| a != axis) {
        return Err(CircuitError::CrossAxis {
            expr: e.to_string(),
        });
    }
    let constant = |k: u64| BitVec::constant(k, v.width().max(bits_needed(k)));
    Ok(match e.base {
        CoordBase::VarX | CoordBase::VarY => match e.offset {
            0 => v.clone(),
            k if k > 0 => adder(c, v, k as u64)?,
            k => subtractor(c, v, u64::from(k.unsigned_abs()))?,
        },
        CoordBase::Const(k) => constant(u64::from(k)),
        CoordBase::XMin | CoordBase::YMin => constant(1),
        CoordBase::XMax | CoordBase::YMax => constant(u64::from(size)),
    })
}
