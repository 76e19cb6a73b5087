//! Exchangeability within label: the summary keeps the sequence of labels
//! and, for each label, the bag of examples carrying it. The last
//! example's label is fixed by the summary; its object is drawn uniformly
//! from that label's bag.

use std::collections::BTreeMap;

use crate::bag::Bag;
use crate::error::{Error, Result};
use crate::example::{Example, Label};

use super::{CompressionModel, DiscreteCompressionModel, KernelAtom, OneStepKernel};

/// Label sequence `y_1, …, y_n` and per-label bags `B_j`.
///
/// Each bag holds the examples (object with its label) whose positions
/// carry that label, so `Σ_j |B_j| = n`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WithinLabelSummary {
    pub labels: Vec<Label>,
    pub bags: BTreeMap<Label, Bag<Example>>,
}

impl WithinLabelSummary {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct WithinLabelModel;

impl CompressionModel for WithinLabelModel {
    type Summary = WithinLabelSummary;

    fn name(&self) -> &'static str {
        "within-label"
    }

    fn empty(&self) -> WithinLabelSummary {
        WithinLabelSummary::default()
    }

    fn update(&self, summary: &WithinLabelSummary, z: &Example) -> Result<WithinLabelSummary> {
        let mut next = summary.clone();
        next.labels.push(z.label.clone());
        next.bags.entry(z.label.clone()).or_default().insert(z.clone());
        Ok(next)
    }
}

impl DiscreteCompressionModel for WithinLabelModel {
    fn one_step(&self, summary: &WithinLabelSummary) -> Result<OneStepKernel<WithinLabelSummary>> {
        let y = summary.labels.last().ok_or(Error::EmptyBag)?;
        let bag = &summary.bags[y];
        let mut atoms = Vec::with_capacity(bag.distinct());
        for (z, weight) in bag.iter() {
            let mut previous = summary.clone();
            previous.labels.pop();
            let b = previous.bags.get_mut(y).expect("label has a bag");
            b.remove(z)?;
            if b.is_empty() {
                previous.bags.remove(y);
            }
            atoms.push(KernelAtom {
                previous,
                example: z.clone(),
                weight,
            });
        }
        Ok(OneStepKernel {
            atoms,
            total: bag.len(),
        })
    }

    fn examples(&self, summary: &WithinLabelSummary) -> Bag<Example> {
        let mut all = Bag::new();
        for z in summary.bags.values().flat_map(|b| b.elements()) {
            all.insert(z.clone());
        }
        all
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nonconformity::KnnRatio;
    use crate::ocm::ocm_p_value;
    use crate::pvalue::PValue;

    fn ex(x: f64, y: &str) -> Example {
        Example::classified(&[x], y)
    }

    #[test]
    fn compares_only_within_the_candidate_label() {
        let m = WithinLabelModel;
        let prev = m.summarize(&[ex(0.0, "s"), ex(1.0, "s"), ex(5.0, "v")]).unwrap();
        let p = ocm_p_value(&m, &prev, &ex(4.0, "v"), &KnnRatio).unwrap();
        assert_eq!(p.n, 2);
        let p = ocm_p_value(&m, &prev, &ex(9.0, "w"), &KnnRatio).unwrap();
        assert_eq!(p, PValue::new(1, 1));
    }

    #[test]
    fn summary_invariants() {
        let m = WithinLabelModel;
        let zs = [ex(0.0, "a"), ex(1.0, "b"), ex(0.0, "a"), ex(2.0, "b")];
        let s = m.summarize(&zs).unwrap();
        assert_eq!(s.bags.values().map(Bag::len).sum::<usize>(), s.len());
        assert_eq!(s.bags[&Label::class("a")].multiplicity(&zs[0]), 2);
        let k = m.one_step(&s).unwrap();
        assert_eq!(k.total, 2);
        for atom in &k.atoms {
            assert_eq!(atom.example.label, Label::class("b"));
            assert_eq!(m.update(&atom.previous, &atom.example).unwrap(), s);
        }
    }
}
