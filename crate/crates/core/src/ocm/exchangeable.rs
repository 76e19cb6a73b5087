//! The exchangeability model: the summary is the bag of examples seen so
//! far, and the last example is drawn from it uniformly.

use crate::bag::Bag;
use crate::error::{Error, Result};
use crate::example::Example;

use super::{CompressionModel, DiscreteCompressionModel, KernelAtom, OneStepKernel};

#[derive(Clone, Copy, Debug, Default)]
pub struct ExchangeabilityModel;

impl CompressionModel for ExchangeabilityModel {
    type Summary = Bag<Example>;

    fn name(&self) -> &'static str {
        "exchangeable"
    }

    fn empty(&self) -> Bag<Example> {
        Bag::new()
    }

    fn update(&self, summary: &Bag<Example>, z: &Example) -> Result<Bag<Example>> {
        Ok(summary.with(z.clone()))
    }
}

impl DiscreteCompressionModel for ExchangeabilityModel {
    fn one_step(&self, summary: &Bag<Example>) -> Result<OneStepKernel<Bag<Example>>> {
        if summary.is_empty() {
            return Err(Error::EmptyBag);
        }
        let atoms = summary
            .iter()
            .map(|(z, weight)| {
                Ok(KernelAtom {
                    previous: summary.without(z)?,
                    example: z.clone(),
                    weight,
                })
            })
            .collect::<Result<_>>()?;
        Ok(OneStepKernel {
            atoms,
            total: summary.len(),
        })
    }

    fn examples(&self, summary: &Bag<Example>) -> Bag<Example> {
        summary.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bag::bag_draw_probability;
    use num_rational::BigRational;

    #[test]
    fn kernel_is_the_draw_probability() {
        let zs: Vec<Example> = [1.0, 1.0, 2.0].iter().map(|&v| Example::value(v)).collect();
        let m = ExchangeabilityModel;
        let s = m.summarize(&zs).unwrap();
        let k = m.one_step(&s).unwrap();
        assert_eq!(k.total, 3);
        for atom in &k.atoms {
            let p = BigRational::new(atom.weight.into(), k.total.into());
            assert_eq!(p, bag_draw_probability(&s, &atom.example).unwrap());
            assert_eq!(m.update(&atom.previous, &atom.example).unwrap(), s);
        }
        assert!(m.one_step(&m.empty()).is_err());
    }
}
