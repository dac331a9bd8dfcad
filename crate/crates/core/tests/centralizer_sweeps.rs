use jetclass::centralizer::{
    centralizer, centralizer_dim, codim_table, orbit_rank, same_span, sample_normal_form,
    BracketMode, StratumKind,
};
use jetclass::jet::{pushforward, JetBasisIndex, PolyVF};
use jetclass::sampling::{random_diffeo, rng};
use jetclass::Rational;

fn rotation(m: u32) -> PolyVF<Rational> {
    PolyVF::from_ints(m, &[(0, 1, -1)], &[(1, 0, 1)])
}

fn y_dy(m: u32) -> PolyVF<Rational> {
    PolyVF::from_ints(m, &[], &[(0, 1, 1)])
}

#[test]
fn hopf_centralizer_sweep() {
    let mut r = rng(11);
    for k in 0..=2u32 {
        for m in 2 * k + 3..=2 * k + 5 {
            for _ in 0..5 {
                let v = sample_normal_form(StratumKind::AH(k), m, &mut r).unwrap();
                let c = centralizer_dim(&v, m, false).unwrap();
                assert_eq!(c.dim, 2, "AH{k} at order {m}: {v:?}");
                assert!(same_span(&c.basis, &[v.clone(), rotation(m)], m).unwrap());
            }
        }
    }
}

#[test]
fn saddle_node_centralizer_sweep() {
    let mut r = rng(12);
    for k in 0..=3u32 {
        for m in (k + 2).max(2)..=k + 5 {
            for _ in 0..5 {
                let v = sample_normal_form(StratumKind::SN(k), m, &mut r).unwrap();
                let c = centralizer_dim(&v, m, false).unwrap();
                assert_eq!(c.dim, 2, "SN{k} at order {m}: {v:?}");
                assert!(same_span(&c.basis, &[v.clone(), y_dy(m)], m).unwrap());
            }
        }
    }
}

#[test]
fn orbit_dimension_matches_stabilizer() {
    let mut r = rng(13);
    let cases = [
        (StratumKind::AH(0), 3),
        (StratumKind::AH(1), 5),
        (StratumKind::SN(0), 2),
        (StratumKind::SN(2), 4),
        (StratumKind::BT0, 3),
    ];
    for (kind, m) in cases {
        let v = sample_normal_form(kind, m, &mut r).unwrap();
        let stab = centralizer(&v, m, true, BracketMode::Truncated).unwrap().dim;
        let dim_d = JetBasisIndex::new(m).vanishing_len();
        assert_eq!(orbit_rank(&v, m).unwrap(), dim_d - stab, "{kind:?} at {m}");
    }
}

#[test]
fn codimension_table() {
    let mut r = rng(14);
    let mut cases = vec![];
    for k in 0..=2 {
        cases.push((StratumKind::AH(k), 2 * k + 3));
        cases.push((StratumKind::AH(k), 2 * k + 4));
    }
    for k in 0..=3 {
        cases.push((StratumKind::SN(k), k + 2));
        cases.push((StratumKind::SN(k), k + 3));
    }
    for kind in [StratumKind::BT0, StratumKind::BT1NoB11, StratumKind::BT1NoB12] {
        cases.push((kind, 2));
        cases.push((kind, 3));
    }
    for (kind, m) in cases {
        let row = codim_table(kind, m, 3, &mut r).unwrap();
        assert!(
            row.measured.iter().all(|&c| c == row.expected),
            "{} at order {m}: {:?}, expected {}",
            row.stratum,
            row.measured,
            row.expected
        );
    }
}

#[test]
fn restricted_truncated_dimension_is_conjugation_invariant() {
    let mut r = rng(15);
    for (kind, m) in [(StratumKind::AH(0), 3), (StratumKind::SN(1), 3), (StratumKind::BT0, 2)] {
        let v = sample_normal_form(kind, m, &mut r).unwrap();
        let base = centralizer(&v, m, true, BracketMode::Truncated).unwrap().dim;
        for _ in 0..5 {
            let h = random_diffeo(&mut r, m);
            let w = pushforward(&h, &v, m).unwrap();
            let d = centralizer(&w, m, true, BracketMode::Truncated).unwrap().dim;
            assert_eq!(d, base, "{kind:?}");
        }
    }
}
