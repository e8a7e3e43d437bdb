//! Finite abelian groups presented as ordered products of cyclic groups.
//!
//! Elements are residue tuples. Every element also has a canonical
//! mixed-radix index in `[0, v)` with the first-written factor most
//! significant, so label order and index order agree. The hot paths in
//! the rest of the crate work on indices directly through
//! [`GroupSpec::add_index`] and friends.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

/// Largest supported group order (`2^31 - 1`).
pub const MAX_ORDER: u32 = i32::MAX as u32;

/// Largest factor order that can be written as a single label digit.
pub const MAX_LABEL_FACTOR: u32 = 17;

const DIGITS: &[u8; 17] = b"0123456789ABCDEFG";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("empty group specification")]
    Empty,
    #[error("malformed factor token `{token}` (expected Z<n>)")]
    MalformedToken { token: String },
    #[error("factor token `{token}` has order < 2")]
    FactorTooSmall { token: String },
    #[error("group order exceeds {max} at factor token `{token}`", max = MAX_ORDER)]
    OrderOverflow { token: String },
    #[error("label `{label}` has {found} digits, expected {expected}")]
    LabelLength {
        label: String,
        expected: usize,
        found: usize,
    },
    #[error("label `{label}` contains invalid digit `{ch}`")]
    InvalidDigit { label: String, ch: char },
    #[error("label `{label}`: digit {digit} is not below factor order {modulus}")]
    DigitOutOfRange {
        label: String,
        digit: u32,
        modulus: u32,
    },
    #[error("factor Z{factor} cannot be written as a label digit; use tuple notation")]
    LabelUnsupported { factor: u32 },
    #[error("malformed residue tuple `{text}`")]
    MalformedTuple { text: String },
    #[error("tuple has {found} residues, expected {expected}")]
    TupleLength { expected: usize, found: usize },
    #[error("residue {residue} is not below factor order {modulus}")]
    ResidueOutOfRange { residue: u32, modulus: u32 },
    #[error("index {index} out of range for group of order {order}")]
    IndexOutOfRange { index: u64, order: u32 },
    #[error("elements belong to different groups")]
    SpecMismatch,
}

#[derive(Debug, PartialEq, Eq, Hash)]
struct SpecInner {
    factors: Vec<u32>,
    order: u32,
}

/// A finite abelian group `Z_{n_1} x ... x Z_{n_m}`.
///
/// Cheap to clone; equality compares the factor lists.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    inner: Arc<SpecInner>,
}

impl GroupSpec {
    pub fn new(factors: &[u32]) -> Result<Self, GroupError> {
        if factors.is_empty() {
            return Err(GroupError::Empty);
        }
        let mut order: u32 = 1;
        for &n in factors {
            let token = alloc::format!("Z{n}");
            if n < 2 {
                return Err(GroupError::FactorTooSmall { token });
            }
            order = order
                .checked_mul(n)
                .filter(|&o| o <= MAX_ORDER)
                .ok_or(GroupError::OrderOverflow { token })?;
        }
        Ok(Self {
            inner: Arc::new(SpecInner {
                factors: factors.to_vec(),
                order,
            }),
        })
    }

    /// Parses `Z<n>(xZ<n>)*`, e.g. `Z5xZ5xZ9`.
    pub fn parse(text: &str) -> Result<Self, GroupError> {
        let text = text.trim();
        if text.is_empty() {
            return Err(GroupError::Empty);
        }
        let mut factors = Vec::new();
        let mut order: u64 = 1;
        for token in text.split('x') {
            let malformed = || GroupError::MalformedToken {
                token: token.into(),
            };
            let digits = token.strip_prefix('Z').ok_or_else(malformed)?;
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(malformed());
            }
            // Anything that does not fit u64 is certainly beyond the cap.
            let n: u64 = digits.parse().map_err(|_| GroupError::OrderOverflow {
                token: token.into(),
            })?;
            if n < 2 {
                return Err(GroupError::FactorTooSmall {
                    token: token.into(),
                });
            }
            order = order.saturating_mul(n);
            if order > MAX_ORDER as u64 {
                return Err(GroupError::OrderOverflow {
                    token: token.into(),
                });
            }
            factors.push(n as u32);
        }
        Self::new(&factors)
    }

    pub fn factors(&self) -> &[u32] {
        &self.inner.factors
    }

    pub fn order(&self) -> u32 {
        self.inner.order
    }

    pub fn rank(&self) -> usize {
        self.inner.factors.len()
    }

    /// Whether every element has a digit label.
    pub fn supports_labels(&self) -> bool {
        self.factors().iter().all(|&n| n <= MAX_LABEL_FACTOR)
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            spec: self.clone(),
            residues: alloc::vec![0; self.rank()],
        }
    }

    pub fn element(&self, residues: &[u32]) -> Result<GroupElement, GroupError> {
        if residues.len() != self.rank() {
            return Err(GroupError::TupleLength {
                expected: self.rank(),
                found: residues.len(),
            });
        }
        for (&r, &n) in residues.iter().zip(self.factors()) {
            if r >= n {
                return Err(GroupError::ResidueOutOfRange {
                    residue: r,
                    modulus: n,
                });
            }
        }
        Ok(GroupElement {
            spec: self.clone(),
            residues: residues.to_vec(),
        })
    }

    pub fn element_from_label(&self, label: &str) -> Result<GroupElement, GroupError> {
        if let Some(&factor) = self.factors().iter().find(|&&n| n > MAX_LABEL_FACTOR) {
            return Err(GroupError::LabelUnsupported { factor });
        }
        let found = label.chars().count();
        if found != self.rank() {
            return Err(GroupError::LabelLength {
                label: label.into(),
                expected: self.rank(),
                found,
            });
        }
        let mut residues = Vec::with_capacity(self.rank());
        for (ch, &n) in label.chars().zip(self.factors()) {
            let digit = digit_value(ch).ok_or_else(|| GroupError::InvalidDigit {
                label: label.into(),
                ch,
            })?;
            if digit >= n {
                return Err(GroupError::DigitOutOfRange {
                    label: label.into(),
                    digit,
                    modulus: n,
                });
            }
            residues.push(digit);
        }
        Ok(GroupElement {
            spec: self.clone(),
            residues,
        })
    }

    /// Parses `(r_1,...,r_m)` with decimal residues.
    pub fn element_from_tuple(&self, text: &str) -> Result<GroupElement, GroupError> {
        let malformed = || GroupError::MalformedTuple { text: text.into() };
        let body = text
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(malformed)?;
        let residues = body
            .split(',')
            .map(|t| {
                let t = t.trim();
                if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(malformed());
                }
                // An unparsable run of digits is far beyond any factor order.
                t.parse::<u32>().map_err(|_| GroupError::ResidueOutOfRange {
                    residue: u32::MAX,
                    modulus: 0,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.element(&residues)
    }

    /// Accepts either a digit label or a residue tuple.
    pub fn parse_element(&self, token: &str) -> Result<GroupElement, GroupError> {
        if token.starts_with('(') {
            self.element_from_tuple(token)
        } else {
            self.element_from_label(token)
        }
    }

    pub fn element_from_index(&self, index: u64) -> Result<GroupElement, GroupError> {
        if index >= self.order() as u64 {
            return Err(GroupError::IndexOutOfRange {
                index,
                order: self.order(),
            });
        }
        let mut rest = index as u32;
        let mut residues = alloc::vec![0; self.rank()];
        for (slot, &n) in residues.iter_mut().zip(self.factors()).rev() {
            *slot = rest % n;
            rest /= n;
        }
        Ok(GroupElement {
            spec: self.clone(),
            residues,
        })
    }

    /// Sum of two elements given by index. Indices must be below the order.
    #[inline]
    pub fn add_index(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.order() && b < self.order());
        if let [n] = self.factors() {
            let s = a as u64 + b as u64;
            return (s % *n as u64) as u32;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        for &n in self.factors().iter().rev() {
            let (da, db) = (a % n, b % n);
            a /= n;
            b /= n;
            let mut d = da + db;
            if d >= n {
                d -= n;
            }
            out += d * place;
            place = place.wrapping_mul(n);
        }
        out
    }

    #[inline]
    pub fn neg_index(&self, a: u32) -> u32 {
        debug_assert!(a < self.order());
        let mut a = a;
        let mut out = 0u32;
        let mut place = 1u32;
        for &n in self.factors().iter().rev() {
            let d = a % n;
            a /= n;
            out += if d == 0 { 0 } else { n - d } * place;
            place = place.wrapping_mul(n);
        }
        out
    }

    /// `a - b` on indices.
    #[inline]
    pub fn sub_index(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.order() && b < self.order());
        if let [n] = self.factors() {
            return if a >= b { a - b } else { a + (n - b) };
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        for &n in self.factors().iter().rev() {
            let (da, db) = (a % n, b % n);
            a /= n;
            b /= n;
            let d = if da >= db { da - db } else { da + n - db };
            out += d * place;
            place = place.wrapping_mul(n);
        }
        out
    }

    /// Renders an index as a label when possible, otherwise as a tuple.
    pub fn index_token(&self, index: u32) -> String {
        let e = self
            .element_from_index(index as u64)
            .expect("index below group order");
        e.to_token()
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, n) in self.factors().iter().enumerate() {
            if i > 0 {
                f.write_str("x")?;
            }
            write!(f, "Z{n}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupSpec({self})")
    }
}

fn digit_value(ch: char) -> Option<u32> {
    match ch {
        '0'..='9' => Some(ch as u32 - '0' as u32),
        'A'..='G' => Some(ch as u32 - 'A' as u32 + 10),
        'a'..='g' => Some(ch as u32 - 'a' as u32 + 10),
        _ => None,
    }
}

/// A residue tuple bound to its group.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    spec: GroupSpec,
    residues: Vec<u32>,
}

impl GroupElement {
    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn residues(&self) -> &[u32] {
        &self.residues
    }

    pub fn is_identity(&self) -> bool {
        self.residues.iter().all(|&r| r == 0)
    }

    pub fn index(&self) -> u32 {
        self.residues
            .iter()
            .zip(self.spec.factors())
            .fold(0u32, |acc, (&r, &n)| acc * n + r)
    }

    pub fn to_label(&self) -> Result<String, GroupError> {
        if let Some(&factor) = self
            .spec
            .factors()
            .iter()
            .find(|&&n| n > MAX_LABEL_FACTOR)
        {
            return Err(GroupError::LabelUnsupported { factor });
        }
        Ok(self
            .residues
            .iter()
            .map(|&r| DIGITS[r as usize] as char)
            .collect())
    }

    pub fn to_tuple(&self) -> String {
        let mut s = String::from("(");
        for (i, r) in self.residues.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str(&alloc::format!("{r}"));
        }
        s.push(')');
        s
    }

    /// Label if the group supports labels, tuple otherwise.
    pub fn to_token(&self) -> String {
        self.to_label().unwrap_or_else(|_| self.to_tuple())
    }

    fn same_spec(&self, other: &Self) -> Result<(), GroupError> {
        if Arc::ptr_eq(&self.spec.inner, &other.spec.inner) || self.spec == other.spec {
            Ok(())
        } else {
            Err(GroupError::SpecMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, GroupError> {
        self.same_spec(other)?;
        let residues = self
            .residues
            .iter()
            .zip(&other.residues)
            .zip(self.spec.factors())
            .map(|((&a, &b), &n)| (a + b) % n)
            .collect();
        Ok(Self {
            spec: self.spec.clone(),
            residues,
        })
    }

    pub fn neg(&self) -> Self {
        let residues = self
            .residues
            .iter()
            .zip(self.spec.factors())
            .map(|(&a, &n)| (n - a) % n)
            .collect();
        Self {
            spec: self.spec.clone(),
            residues,
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, GroupError> {
        self.add(&other.neg())
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_token())
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self.to_tuple(), self.spec)
    }
}
