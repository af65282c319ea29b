//! Dense index tables for finite carriers. Exhaustive checks, oracles, and
//! map enumeration all run on `u32` element indices against these tables.

use std::collections::HashMap;

use crate::carrier::{Carrier, CarrierKind};
use crate::error::{Error, Result};
use crate::value::Value;

pub struct FiniteTables {
    pub elems: Vec<Value>,
    pub index: HashMap<Value, u32>,
    /// `add[i * n + j]`
    pub add: Vec<u32>,
    pub neg: Vec<u32>,
    /// Internal multiplication, for ring and algebra carriers.
    pub mul: Option<Vec<u32>>,
    pub zero: u32,
    pub one: Option<u32>,
}

impl FiniteTables {
    pub fn build(carrier: &Carrier, elems: Vec<Value>) -> Result<FiniteTables> {
        let n = elems.len();
        let mut index = HashMap::with_capacity(n);
        for (i, v) in elems.iter().enumerate() {
            if index.insert(v.clone(), i as u32).is_some() {
                return Err(Error::MalformedDescriptor(format!(
                    "duplicate element {} in enumeration of `{}`",
                    v,
                    carrier.id()
                )));
            }
        }
        let zero_v = carrier.zero_value();
        let zero = *index.get(&zero_v).ok_or_else(|| {
            Error::MalformedDescriptor(format!("zero missing from `{}`", carrier.id()))
        })?;
        debug_assert_eq!(zero, 0, "zero should enumerate first");

        let mut add = vec![0u32; n * n];
        let mut neg = vec![0u32; n];
        for (i, a) in elems.iter().enumerate() {
            let nv = carrier.neg_value(a);
            neg[i] = *index.get(&nv).ok_or_else(|| closure_err(carrier, &nv))?;
            for (j, b) in elems.iter().enumerate() {
                let s = carrier.add_value(a, b);
                add[i * n + j] = *index.get(&s).ok_or_else(|| closure_err(carrier, &s))?;
            }
        }

        let with_mul = matches!(carrier.kind(), CarrierKind::Ring | CarrierKind::Algebra);
        let mul = if with_mul {
            let mut table = vec![0u32; n * n];
            for (i, a) in elems.iter().enumerate() {
                for (j, b) in elems.iter().enumerate() {
                    let p = carrier.mul_value(a, b)?;
                    table[i * n + j] = *index.get(&p).ok_or_else(|| closure_err(carrier, &p))?;
                }
            }
            Some(table)
        } else {
            None
        };

        let one = match carrier.one_value() {
            Ok(v) => index.get(&v).copied(),
            Err(_) => None,
        };

        Ok(FiniteTables {
            elems,
            index,
            add,
            neg,
            mul,
            zero,
            one,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.elems.len()
    }

    #[inline]
    pub fn add_idx(&self, i: u32, j: u32) -> u32 {
        self.add[i as usize * self.n() + j as usize]
    }

    #[inline]
    pub fn sub_idx(&self, i: u32, j: u32) -> u32 {
        self.add_idx(i, self.neg[j as usize])
    }

    #[inline]
    pub fn mul_idx(&self, i: u32, j: u32) -> u32 {
        self.mul.as_ref().expect("mul table")[i as usize * self.n() + j as usize]
    }
}

fn closure_err(carrier: &Carrier, v: &Value) -> Error {
    Error::ClosureFailure(format!(
        "operation result {} escapes carrier `{}`",
        v,
        carrier.id()
    ))
}
