use std::collections::BTreeSet;

use ffenum::catalog::{parse_catalog, render_catalog, within_bound, CatalogRecord, Method};
use ffenum::isomap::random_isomap;
use ffenum::{
    apply_isomap, build_search_table, certificate_of, design_matrix, full_extend, recover_design, reduce,
    st_canonical_form, wlp, AberrationOrdering, Design,
};
use proptest::prelude::*;

/// Spanning designs with `k` in 3..=5: the seed plus extra generator columns.
fn design() -> impl Strategy<Value = Design> {
    (3u32..=5)
        .prop_flat_map(|k| (Just(k), 0..=k / 2))
        .prop_flat_map(|(k, m)| {
            let pseudo: Vec<u32> = (0..m).flat_map(|j| [1 << (2 * j), 2 << (2 * j), 3 << (2 * j)]).collect();
            let pool: Vec<u32> = (1u32..1 << k).filter(|c| c.count_ones() >= 2 && !pseudo.contains(c)).collect();
            let max = pool.len().min(5);
            (Just(k), Just(m), proptest::sample::subsequence(pool, 0..=max))
        })
        .prop_map(|(k, m, extra)| {
            let cols: Vec<u32> = (2 * m..k).map(|b| 1 << b).chain(extra).collect();
            Design::new(k, m, &cols).expect("seed plus generators spans")
        })
}

fn mapped(d: &Design, seed: u64) -> Design {
    recover_design(&apply_isomap(&design_matrix(d), &random_isomap(d, seed)).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn isomaps_preserve_wlp_and_certificate(d in design(), seed in any::<u64>()) {
        let y = mapped(&d, seed);
        prop_assert_eq!(wlp(&y), wlp(&d));
        prop_assert_eq!(certificate_of(&y), certificate_of(&d));
    }

    #[test]
    fn flatten_orders_are_block_permutations(d in design()) {
        let w = wlp(&d);
        let t0 = w.flatten(AberrationOrdering::Type0);
        let tm = w.flatten(AberrationOrdering::TypeM);
        let width = (d.m() + 1) as usize;
        prop_assert_eq!(t0.len(), (d.m() + d.n()).saturating_sub(2) as usize * width);
        for (a, b) in t0.chunks(width).zip(tm.chunks(width)) {
            let mut rev = b.to_vec();
            rev.reverse();
            prop_assert_eq!(a, &rev[..]);
        }
    }

    #[test]
    fn st_form_is_an_isomorphic_class_invariant(d in design(), seed in any::<u64>()) {
        let table = build_search_table(d.k(), d.m()).unwrap();
        let (form, rows) = st_canonical_form(&d, &table).unwrap();
        prop_assert!(rows.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(certificate_of(&form), certificate_of(&d));
        prop_assert_eq!(st_canonical_form(&mapped(&d, seed), &table).unwrap(), (form, rows));
    }

    #[test]
    fn reduce_is_idempotent_and_order_free(d in design(), seed in any::<u64>()) {
        let mut cands: Vec<Design> = full_extend(&d, 3).into_iter().map(|c| c.design).collect();
        cands.extend(cands.clone().iter().map(|c| mapped(c, seed)));
        let once = reduce(&cands);
        prop_assert_eq!(reduce(&once), once.clone());
        cands.reverse();
        let certs = |v: &[Design]| v.iter().map(certificate_of).collect::<BTreeSet<_>>();
        prop_assert_eq!(certs(&reduce(&cands)), certs(&once));
        prop_assert_eq!(certs(&once).len(), once.len());
    }

    #[test]
    fn catalog_round_trip(designs in proptest::collection::vec(design(), 1..6)) {
        let records: Vec<CatalogRecord> = designs
            .iter()
            .enumerate()
            .map(|(i, d)| CatalogRecord::new(format!("r{i}"), d, &wlp(d), (i > 0).then(|| "p".to_string()), Method::ALL[i % 3]))
            .collect();
        prop_assert_eq!(parse_catalog(&render_catalog(&records)).unwrap(), records.clone());
        for (r, d) in records.iter().zip(&designs) {
            prop_assert_eq!(&r.design().unwrap(), d);
        }
    }

    #[test]
    fn infinite_bounds_keep_everything(d in design()) {
        let w = wlp(&d);
        prop_assert!(within_bound(&w, &vec![u64::MAX; d.m() as usize + 1]));
        let a3 = w.by_type(3);
        prop_assert!(within_bound(&w, &a3));
        if let Some(t) = a3.iter().position(|&c| c > 0) {
            let mut tight = a3.clone();
            tight[t] -= 1;
            prop_assert!(!within_bound(&w, &tight));
        }
    }
}
