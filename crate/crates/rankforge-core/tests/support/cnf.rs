//! Reference ordinals in multiplicity-expanded form: an ordinal is the
//! descending list of its CNF exponents, one entry per coefficient unit, so
//! `w^2*2 + 3` is `[2, 2, 0, 0, 0]`. Arithmetic is implemented directly on
//! that shape, independently of the library's coefficient-packed code.

use rankforge_core::Ordinal;
use std::cmp::Ordering;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OracleOrd(pub Vec<OracleOrd>);

impl OracleOrd {
    pub fn zero() -> OracleOrd {
        OracleOrd(Vec::new())
    }

    pub fn from_core(o: &Ordinal) -> OracleOrd {
        let mut exps = Vec::new();
        for (exp, coef) in o.terms() {
            let e = OracleOrd::from_core(exp);
            for _ in 0..*coef {
                exps.push(e.clone());
            }
        }
        OracleOrd(exps)
    }

    pub fn compare(&self, other: &OracleOrd) -> Ordering {
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            match a.compare(b) {
                Ordering::Equal => continue,
                diff => return diff,
            }
        }
        self.0.len().cmp(&other.0.len())
    }

    pub fn add(&self, other: &OracleOrd) -> OracleOrd {
        let Some(lead) = other.0.first() else {
            return self.clone();
        };
        let mut exps: Vec<OracleOrd> = self
            .0
            .iter()
            .take_while(|e| e.compare(lead) != Ordering::Less)
            .cloned()
            .collect();
        exps.extend(other.0.iter().cloned());
        OracleOrd(exps)
    }

    pub fn nat_add(&self, other: &OracleOrd) -> OracleOrd {
        let mut exps = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            let take_left = match (self.0.get(i), other.0.get(j)) {
                (Some(a), Some(b)) => a.compare(b) != Ordering::Less,
                (Some(_), None) => true,
                _ => false,
            };
            if take_left {
                exps.push(self.0[i].clone());
                i += 1;
            } else {
                exps.push(other.0[j].clone());
                j += 1;
            }
        }
        OracleOrd(exps)
    }

    pub fn mul(&self, other: &OracleOrd) -> OracleOrd {
        if self.0.is_empty() {
            return OracleOrd::zero();
        }
        let mut acc = OracleOrd::zero();
        for f in &other.0 {
            let part = if f.0.is_empty() {
                self.clone()
            } else {
                OracleOrd(vec![self.0[0].add(f)])
            };
            acc = acc.add(&part);
        }
        acc
    }
}
