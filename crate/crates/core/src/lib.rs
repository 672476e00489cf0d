//! Exact cohomology of Weil divisors on rational ruled toric surfaces.
//!
//! A surface in the family is fixed by two marked fibers carrying cyclic
//! quotient singularities of types given by `(d1, n1)` and `(d2, n2)`, plus
//! the self-intersection `r` of its sections. Divisor classes are written
//! `aZ + bF + αE_X + βE_Y` with `Z² = -r`. On top of the cohomology engine
//! sits the computation of first Betti numbers and monodromy spectra of
//! cyclic branched covers.
//!
//! Every quantity is an integer or an exact [`Rational`]; there is no
//! floating point anywhere.

pub mod arith;
pub mod cohomology;
pub mod covering;
pub mod error;
pub mod singularity;
pub mod surface;

pub use arith::{floor_div, frac_part, gcd_list, mod_inverse, Rational};
pub use cohomology::{
    chi, h0_closed_biruled, h0_enum, h02_diagnostic, h2_via_duality, h_vector, h_vector_with,
    main2_closed, Checks, H02Report, HOptions, HVector, Main2, Method, MethodChoice,
};
pub use covering::{CoveringSpec, EigensheafRow, EigensheafTable, Splitting};
pub use error::{Error, Result};
pub use singularity::{
    delta, delta_general, g_w, normalize_type, wp2_chi, wp2_lattice_count, CyclicQuotientType,
    WeightTriple,
};
pub use surface::{DivisorClass, QDivisor, RuledToricSurface};
