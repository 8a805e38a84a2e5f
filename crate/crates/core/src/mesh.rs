//! Partitions of the unit interval and the nodal hat basis.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// A partition `0 = x_0 < x_1 < ... < x_N = 1` of the unit interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition<T> {
    nodes: Vec<T>,
    element_sizes: Vec<T>,
}

impl<T: Real> Partition<T> {
    /// Builds a partition from its nodes, which must start at 0, end at 1 and
    /// be strictly increasing. At least two elements are required so that the
    /// finite element space has an interior node.
    pub fn from_nodes(nodes: Vec<T>) -> Result<Self> {
        if nodes.len() < 3 {
            return Err(Error::InvalidMesh(nodes.len().saturating_sub(1)));
        }
        if nodes[0] != T::zero() || nodes[nodes.len() - 1] != T::one() {
            return Err(Error::InvalidNodes(
                "first node must be 0 and last node must be 1".into(),
            ));
        }
        let element_sizes: Vec<T> = nodes.windows(2).map(|w| w[1] - w[0]).collect();
        if let Some(i) = element_sizes.iter().position(|h| !(*h > T::zero())) {
            return Err(Error::InvalidNodes(format!(
                "nodes must be strictly increasing (element {i})"
            )));
        }
        Ok(Self {
            nodes,
            element_sizes,
        })
    }

    /// Uniform partition with nodes `x_i = i/n`.
    pub fn uniform(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidMesh(n));
        }
        let nf = T::from_index(n);
        let nodes = (0..=n).map(|i| T::from_index(i) / nf).collect();
        Self::from_nodes(nodes)
    }

    /// Number of elements `N`.
    pub fn n(&self) -> usize {
        self.element_sizes.len()
    }

    /// Number of interior nodes, `N - 1`.
    pub fn interior_count(&self) -> usize {
        self.n() - 1
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> T {
        self.nodes[i]
    }

    pub fn element_sizes(&self) -> &[T] {
        &self.element_sizes
    }

    /// `h_i = x_{i+1} - x_i`.
    pub fn h(&self, i: usize) -> T {
        self.element_sizes[i]
    }

    pub(crate) fn check_interior(&self, i: usize) -> Result<()> {
        if i == 0 || i >= self.n() {
            return Err(Error::IndexOutOfRange {
                index: i,
                max: self.interior_count(),
            });
        }
        Ok(())
    }
}

pub fn uniform_partition<T: Real>(n: usize) -> Result<Partition<T>> {
    Partition::uniform(n)
}

/// Evaluates the Lagrange hat function of interior node `i` at `x`.
pub fn hat_basis_eval<T: Real>(p: &Partition<T>, i: usize, x: T) -> Result<T> {
    p.check_interior(i)?;
    let (left, mid, right) = (p.node(i - 1), p.node(i), p.node(i + 1));
    let v = if x == mid {
        T::one()
    } else if x > left && x < mid {
        (x - left) / p.h(i - 1)
    } else if x > mid && x < right {
        (right - x) / p.h(i)
    } else {
        T::zero()
    };
    Ok(v)
}
