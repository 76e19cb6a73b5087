//! Bags (multisets) and the exchangeable one-step and full kernels over them.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// An unordered collection with multiplicities. Two bags built from
/// different orderings of the same elements compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Bag<T: Ord> {
    entries: BTreeMap<T, usize>,
    size: usize,
}

impl<T: Ord> Default for Bag<T> {
    fn default() -> Self {
        Bag {
            entries: BTreeMap::new(),
            size: 0,
        }
    }
}

impl<T: Ord + Clone> Bag<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, item: T) {
        self.insert_many(item, 1);
    }

    pub fn insert_many(&mut self, item: T, count: usize) {
        if count == 0 {
            return;
        }
        *self.entries.entry(item).or_insert(0) += count;
        self.size += count;
    }

    /// Removes one copy of `item`.
    pub fn remove(&mut self, item: &T) -> Result<()> {
        match self.entries.get_mut(item) {
            None => Err(Error::AbsentElement),
            Some(k) if *k > 1 => {
                *k -= 1;
                self.size -= 1;
                Ok(())
            }
            Some(_) => {
                self.entries.remove(item);
                self.size -= 1;
                Ok(())
            }
        }
    }

    /// Copy of the bag with `item` added.
    pub fn with(&self, item: T) -> Self {
        let mut b = self.clone();
        b.insert(item);
        b
    }

    /// Copy of the bag with one `item` removed.
    pub fn without(&self, item: &T) -> Result<Self> {
        let mut b = self.clone();
        b.remove(item)?;
        Ok(b)
    }

    pub fn multiplicity(&self, item: &T) -> usize {
        self.entries.get(item).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    /// Distinct elements with their multiplicities, in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&T, usize)> {
        self.entries.iter().map(|(k, &v)| (k, v))
    }

    /// Every copy of every element, in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = &T> {
        self.entries
            .iter()
            .flat_map(|(k, &v)| std::iter::repeat_n(k, v))
    }

    pub fn to_vec(&self) -> Vec<T> {
        self.elements().cloned().collect()
    }

    pub fn distinct(&self) -> usize {
        self.entries.len()
    }
}

impl<T: Ord + Clone> FromIterator<T> for Bag<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut b = Bag::new();
        for x in iter {
            b.insert(x);
        }
        b
    }
}

impl<'a, T: Ord + Clone + 'a> FromIterator<&'a T> for Bag<T> {
    fn from_iter<I: IntoIterator<Item = &'a T>>(iter: I) -> Self {
        iter.into_iter().cloned().collect()
    }
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// Probability `k/n` that the last element drawn from `bag` equals `item`,
/// where `k` is its multiplicity.
pub fn bag_draw_probability<T: Ord + Clone>(bag: &Bag<T>, item: &T) -> Result<BigRational> {
    if bag.is_empty() {
        return Err(Error::EmptyBag);
    }
    Ok(BigRational::new(
        bag.multiplicity(item).into(),
        bag.len().into(),
    ))
}

/// Probability that a uniformly random ordering of `bag` equals `ordering`:
/// `n₁!⋯n_k!/N!` when the contents match and zero otherwise.
pub fn bag_ordering_probability<T: Ord + Clone>(
    bag: &Bag<T>,
    ordering: &[T],
) -> Result<BigRational> {
    if ordering.len() != bag.len() {
        return Err(Error::LengthMismatch {
            expected: bag.len(),
            got: ordering.len(),
        });
    }
    let seen: Bag<T> = ordering.iter().collect();
    if &seen != bag {
        return Ok(BigRational::zero());
    }
    let numer = bag
        .iter()
        .fold(BigUint::one(), |acc, (_, k)| acc * factorial(k));
    Ok(BigRational::new(numer.into(), factorial(bag.len()).into()))
}
