//! Canonical payloads of carrier elements.

use std::fmt;

use crate::scalar::Scalar;

/// The exact payload of an element. Interpretation (and canonical form)
/// is fixed by the owning carrier's construction:
/// polynomials are dense coefficient vectors, lowest degree first, with no
/// trailing zeros; matrices are row-major entry grids; products are tuples;
/// quotient and span carriers reuse their parent's payloads.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Scalar(Scalar),
    Poly(Vec<Scalar>),
    Matrix { size: usize, entries: Vec<Scalar> },
    Tuple(Vec<Value>),
}

impl Value {
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Value::Scalar(s) => s.to_json(),
            Value::Poly(cs) => {
                serde_json::Value::Array(cs.iter().map(|c| c.to_json()).collect())
            }
            Value::Matrix { size, entries } => {
                let rows: Vec<serde_json::Value> = (0..*size)
                    .map(|i| {
                        serde_json::Value::Array(
                            entries[i * size..(i + 1) * size]
                                .iter()
                                .map(|c| c.to_json())
                                .collect(),
                        )
                    })
                    .collect();
                serde_json::Value::Array(rows)
            }
            Value::Tuple(vs) => serde_json::Value::Array(vs.iter().map(|v| v.to_json()).collect()),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Scalar(s) => write!(f, "{}", s),
            Value::Poly(cs) => {
                if cs.is_empty() {
                    return write!(f, "0");
                }
                let mut first = true;
                for (i, c) in cs.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    if !first {
                        write!(f, " + ")?;
                    }
                    first = false;
                    match i {
                        0 => write!(f, "{}", c)?,
                        1 => write!(f, "{}*x", c)?,
                        _ => write!(f, "{}*x^{}", c, i)?,
                    }
                }
                if first {
                    write!(f, "0")?;
                }
                Ok(())
            }
            Value::Matrix { size, entries } => {
                write!(f, "[")?;
                for i in 0..*size {
                    if i > 0 {
                        write!(f, "; ")?;
                    }
                    for j in 0..*size {
                        if j > 0 {
                            write!(f, " ")?;
                        }
                        write!(f, "{}", entries[i * size + j])?;
                    }
                }
                write!(f, "]")
            }
            Value::Tuple(vs) => {
                write!(f, "(")?;
                for (i, v) in vs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{}", v)?;
                }
                write!(f, ")")
            }
        }
    }
}
