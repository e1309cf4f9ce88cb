//! The core runs unchanged over machine-word rationals.

use std::sync::Arc;

use tau_loop::central_ops::{casimir_diagonal, omega_apply, t_apply, t_apply_commutator};
use tau_loop::comm_algebra::{crt_split, CommAlgebra};
use tau_loop::linear::SparseVec;
use tau_loop::scalar::Field;
use tau_loop::tau::TauAlgebra;
use tau_loop::weight_modules::{HighestWeightModule, Irreducible, PsiFunctional, Verma, WeightBox};
use tau_loop::{SmallQ, Q};

fn dims<F: Field>(bounds: WeightBox) -> Vec<usize> {
    let tau = TauAlgebra::sl2(Arc::new(CommAlgebra::<F>::points(&[F::from_int(1), F::from_int(2)]).unwrap()));
    let psi = PsiFunctional::new(vec![F::from_int(1); 2], vec![F::from_int(2); 2], vec![F::from_int(0); 2]).unwrap();
    let m = Irreducible::new(tau, psi, bounds).unwrap();
    m.dim_table().unwrap().into_iter().map(|(_, d)| d).collect()
}

#[test]
fn small_and_big_rationals_agree() {
    let b = WeightBox::new(2, 2);
    assert_eq!(dims::<SmallQ>(b), dims::<Q>(b));
}

#[test]
fn operators_over_small_rationals() {
    let tau = TauAlgebra::sl2(Arc::new(CommAlgebra::<SmallQ>::scalar()));
    let (l, c, d) = (SmallQ::new(3, 2), SmallQ::new(-2, 1), SmallQ::new(1, 3));
    let m = Verma::new(tau, PsiFunctional::scalar(l, c, d), WeightBox::new(2, 2)).unwrap();
    let one = SparseVec::unit(0);
    let v = m.highest_vector();
    assert_eq!(omega_apply(&m, &one, &one, &v).unwrap(), v.scale(&casimir_diagonal(&l, &c, &d)));
    assert_eq!(t_apply(&m, -1, &one, &one, &v).unwrap(), t_apply_commutator(&m, -1, &one, &one, &v).unwrap());
}

#[test]
fn crt_over_small_rationals() {
    let a = CommAlgebra::<SmallQ>::points(&[SmallQ::from_int(1), SmallQ::from_int(2)]).unwrap();
    let split = crt_split(&a).unwrap();
    assert_eq!(split.idempotents[0], SparseVec::from_pairs([(0, SmallQ::from_int(2)), (1, SmallQ::from_int(-1))]));
}
