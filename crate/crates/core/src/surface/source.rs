//! Node-wise jet providers: spectral tables of sampled fields, closed-form
//! fields evaluated at grid nodes, and linear combinations of either.

use super::field::{SymJetTable, VectorJetTable};
use super::grid::PeriodicGrid;
use super::jets::{SymJet, VectorJet};
use super::local::lie_derivative_jet;
use super::spec::Field;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// A symmetric 2-tensor field known through its jets at the nodes of a grid.
pub trait SymJets<T: Real>: Sync {
    fn grid(&self) -> PeriodicGrid;
    fn jet(&self, node: usize) -> SymJet<T>;
}

/// A vector field known through its jets at the nodes of a grid.
pub trait VectorJets<T: Real>: Sync {
    fn grid(&self) -> PeriodicGrid;
    fn jet(&self, node: usize) -> VectorJet<T>;
}

impl<T: Real> SymJets<T> for SymJetTable<T> {
    fn grid(&self) -> PeriodicGrid {
        SymJetTable::grid(self)
    }
    fn jet(&self, node: usize) -> SymJet<T> {
        self.at(node)
    }
}

impl<T: Real> VectorJets<T> for VectorJetTable<T> {
    fn grid(&self) -> PeriodicGrid {
        VectorJetTable::grid(self)
    }
    fn jet(&self, node: usize) -> VectorJet<T> {
        self.at(node)
    }
}

/// A closed-form field evaluated exactly at grid nodes.
#[derive(Clone, Debug)]
pub struct Analytic {
    field: Field,
    grid: PeriodicGrid,
}

impl Analytic {
    pub fn sym(field: Field, grid: PeriodicGrid) -> Result<Self> {
        if matches!(field, Field::Vector { .. }) {
            return Err(Error::InvalidArgument(
                "expected a symmetric tensor field".into(),
            ));
        }
        Self::checked(field, grid)
    }

    pub fn vector(field: Field, grid: PeriodicGrid) -> Result<Self> {
        if !matches!(field, Field::Vector { .. }) {
            return Err(Error::InvalidArgument("expected a vector field".into()));
        }
        Self::checked(field, grid)
    }

    fn checked(field: Field, grid: PeriodicGrid) -> Result<Self> {
        if field.dim() != grid.dim() {
            return Err(Error::DimensionMismatch {
                expected: grid.dim(),
                found: field.dim(),
            });
        }
        Ok(Self { field, grid })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
}

impl<T: Real> SymJets<T> for Analytic {
    fn grid(&self) -> PeriodicGrid {
        self.grid
    }
    fn jet(&self, node: usize) -> SymJet<T> {
        self.field
            .sym_jet(&self.grid.point(node))
            .expect("kind checked at construction")
    }
}

impl<T: Real> VectorJets<T> for Analytic {
    fn grid(&self) -> PeriodicGrid {
        self.grid
    }
    fn jet(&self, node: usize) -> VectorJet<T> {
        self.field
            .vector_jet(&self.grid.point(node))
            .expect("kind checked at construction")
    }
}

/// `base + s·dir`.
pub struct Shifted<'a, T> {
    pub base: &'a dyn SymJets<T>,
    pub dir: &'a dyn SymJets<T>,
    pub s: T,
}

impl<T: Real> SymJets<T> for Shifted<'_, T> {
    fn grid(&self) -> PeriodicGrid {
        self.base.grid()
    }
    fn jet(&self, node: usize) -> SymJet<T> {
        self.base.jet(node).axpy(self.s, &self.dir.jet(node))
    }
}

/// `s·base`.
pub struct Scaled<'a, T> {
    pub base: &'a dyn SymJets<T>,
    pub s: T,
}

impl<T: Real> SymJets<T> for Scaled<'_, T> {
    fn grid(&self) -> PeriodicGrid {
        self.base.grid()
    }
    fn jet(&self, node: usize) -> SymJet<T> {
        self.base.jet(node).scale(self.s)
    }
}

/// `ζ(X, t)_g = t·g − L_X g`, to first order.
pub struct Zeta<'a, T> {
    pub g: &'a dyn SymJets<T>,
    pub x: &'a dyn VectorJets<T>,
    pub t: T,
}

impl<T: Real> SymJets<T> for Zeta<'_, T> {
    fn grid(&self) -> PeriodicGrid {
        self.g.grid()
    }
    fn jet(&self, node: usize) -> SymJet<T> {
        let g = self.g.jet(node);
        let mut z = lie_derivative_jet(&g, &self.x.jet(node)).scale(-T::one());
        z.value.axpy(self.t, &g.value);
        for (a, b) in z.d1.iter_mut().zip(&g.d1) {
            a.axpy(self.t, b);
        }
        z
    }
}

pub fn same_grid(grids: &[PeriodicGrid]) -> Result<PeriodicGrid> {
    let first = grids[0];
    if grids.iter().any(|g| *g != first) {
        return Err(Error::InvalidArgument(
            "fields live on different grids".into(),
        ));
    }
    Ok(first)
}
