//! Ideal-level checks: a lattice point of `I_h` lies in `I_h𝔭` or `I_h𝔭'`
//! exactly as counted by the split Hecke identity.

use genusmass::arith::Discriminant;
use genusmass::class_group::ClassGroup;
use genusmass::forms::QuadForm;
use genusmass::ideal::form_to_ideal;

#[test]
fn split_prime_intersection_is_p_times_ideal() {
    for d in [-20i64, -23] {
        let delta = Discriminant::new(d).unwrap();
        let group = ClassGroup::new(&delta).unwrap();
        let order = group.order();
        for p in [3u64, 7] {
            if delta.character(p as i64) != 1 {
                continue;
            }
            let b = (0..2 * p as i64).find(|b| (b * b - d) % (4 * p as i64) == 0).unwrap();
            let c = (b * b - d) / (4 * p as i64);
            let prime = form_to_ideal(order, &QuadForm::new(p as i64, b, c).unwrap());
            let conj = form_to_ideal(order, &QuadForm::new(p as i64, -b, c).unwrap());
            assert_eq!((prime.norm(), conj.norm()), (p, p));
            let pc = group.prime_ideal_class(p).unwrap();
            assert_eq!(group.class_of_ideal(&prime).unwrap(), pc);
            assert_eq!(group.class_of_ideal(&conj).unwrap(), group.inverse(pc));
            for h in group.indices() {
                let ih = group.ideal(h);
                let a = ih.multiply(order, &prime).unwrap();
                let b = ih.multiply(order, &conj).unwrap();
                let pih = ih.scale(order, p as i128).unwrap();
                let mut in_a = 0u64;
                let mut in_b = 0u64;
                let bound = 30 * p * ih.norm();
                for u in order.elements_up_to_norm(bound) {
                    let (ia, ib, ip) = (a.contains(u), b.contains(u), pih.contains(u));
                    assert_eq!(ia && ib, ip, "Δ={d} p={p} h={h} u={u:?}");
                    if ia || ib {
                        assert!(ih.contains(u));
                    }
                    in_a += ia as u64;
                    in_b += ib as u64;
                }
                assert_eq!(a.norm(), p * ih.norm());
                assert!(in_a > 0 && in_b > 0);
            }
        }
    }
}
