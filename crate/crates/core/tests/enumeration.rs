use ffenum::catalog::{
    compute_bounds, enumerate, level_records, render_catalog, write_catalogs, BoundSpec, EnumerationConfig, Level,
    Method,
};
use ffenum::{Design, ExecMode};

/// Length-3 word counts by type, counted directly from column subsets.
fn a3_by_subsets(k: u32, m: u32, cols: &[u32]) -> Vec<u64> {
    let mut out = vec![0u64; m as usize + 1];
    let n = cols.len();
    for mask in 1u32..1 << n {
        let size = mask.count_ones();
        if size > 3 {
            continue;
        }
        let x = (0..n).filter(|i| mask >> i & 1 == 1).fold(0, |x, i| x ^ cols[i]);
        if x >> (2 * m) != 0 || x >= 1 << k {
            continue;
        }
        let t = (0..m).filter(|j| x >> (2 * j) & 3 != 0).count() as u32;
        if size + t == 3 {
            out[t as usize] += 1;
        }
    }
    out
}

/// Bounds by exhaustive descent over every worst projection, without
/// isomorphism reduction.
fn descent_oracle(k: u32, m: u32, seed: &[u32], n_low: usize) -> Vec<(usize, Vec<u64>)> {
    let mut out = vec![(seed.len(), a3_by_subsets(k, m, seed))];
    let mut set = vec![seed.to_vec()];
    while set[0].len() > n_low {
        let children: Vec<Vec<u32>> = set
            .iter()
            .flat_map(|cols| {
                (0..cols.len()).map(move |i| {
                    let mut c = cols.clone();
                    c.remove(i);
                    c
                })
            })
            .collect();
        let key = |c: &Vec<u32>| {
            let mut a = a3_by_subsets(k, m, c);
            a.reverse();
            a
        };
        let worst = children.iter().map(key).max().unwrap();
        set = children.into_iter().filter(|c| key(c) == worst).collect();
        let mut delta = worst;
        delta.reverse();
        out.push((set[0].len(), delta));
    }
    out
}

#[test]
fn compute_bounds_matches_exhaustive_descent() {
    for cols in [[4u32, 8, 16, 7, 29, 14], [4, 8, 16, 12, 20, 28], [4, 8, 16, 5, 26, 15]] {
        let seed = Design::new(5, 1, &cols).unwrap();
        let spec = compute_bounds(&seed, 3, ExecMode::Sequential).unwrap();
        for (n, delta) in descent_oracle(5, 1, &cols, 3) {
            assert_eq!(spec.get(1, n as u32), Some(&delta[..]), "seed {cols:?} level {n}");
        }
    }
}

#[test]
fn zero_a3_seed_gives_zero_bounds() {
    let cols = [4, 8, 16, 29, 14, 23];
    assert_eq!(a3_by_subsets(5, 1, &cols), [0, 0]);
    let seed = Design::new(5, 1, &cols).unwrap();
    let spec = compute_bounds(&seed, 3, ExecMode::Sequential).unwrap();
    assert!(spec.rows().all(|(_, _, d)| d.iter().all(|&x| x == 0)));
}

fn rendered(config: &EnumerationConfig) -> Vec<String> {
    let levels = enumerate(config.clone()).unwrap();
    levels.iter().map(|l| render_catalog(&level_records(config, l))).collect()
}

#[test]
fn output_is_deterministic_and_mode_independent() {
    for method in Method::ALL {
        let config = EnumerationConfig::new(32, 1, 3, 8, method);
        let a = rendered(&config.clone().with_exec(ExecMode::Parallel));
        assert_eq!(a, rendered(&config.clone().with_exec(ExecMode::Parallel)));
        assert_eq!(a, rendered(&config.with_exec(ExecMode::Sequential)));
    }
}

#[test]
fn written_catalogs_are_byte_identical() {
    let config = EnumerationConfig::new(16, 2, 3, 6, Method::St);
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let wa = write_catalogs(config.clone(), a.path(), |_| {}).unwrap();
    let wb = write_catalogs(config, b.path(), |_| {}).unwrap();
    assert_eq!(wa.len(), wb.len());
    for (x, y) in wa.iter().zip(&wb) {
        assert_eq!(std::fs::read(&x.path).unwrap(), std::fs::read(&y.path).unwrap());
    }
}

#[test]
fn infinite_bounds_do_not_change_the_enumeration() {
    let base = EnumerationConfig::new(32, 2, 3, 7, Method::St);
    let mut spec = BoundSpec::new();
    for n in 1..=7 {
        spec.insert(2, n, vec![u64::MAX; 3]).unwrap();
    }
    assert_eq!(rendered(&base), rendered(&base.clone().with_bounds(spec)));
}

#[test]
fn tight_bounds_prune_levels() {
    let base = EnumerationConfig::new(32, 1, 3, 6, Method::Dop);
    let mut spec = BoundSpec::new();
    for n in 3..=6 {
        spec.insert(1, n, vec![0, 0]).unwrap();
    }
    let bounded = enumerate(base.clone().with_bounds(spec)).unwrap();
    let full = enumerate(base).unwrap();
    for (b, f) in bounded.iter().zip(&full) {
        assert!(b.len() <= f.len());
        assert!(b.designs.iter().all(|c| c.wlp.by_type(3).iter().all(|&x| x == 0)));
    }
}

#[test]
fn records_link_to_parents_and_have_unique_ids() {
    let config = EnumerationConfig::new(32, 2, 3, 5, Method::Dop);
    let levels: Vec<Level> = enumerate(config.clone()).unwrap();
    for pair in levels.windows(2) {
        let parents: Vec<String> = level_records(&config, &pair[0]).into_iter().map(|r| r.id).collect();
        let records = level_records(&config, &pair[1]);
        let mut ids: Vec<&String> = records.iter().map(|r| &r.id).collect();
        ids.dedup();
        assert_eq!(ids.len(), records.len());
        assert!(records.iter().all(|r| parents.contains(r.parent_id.as_ref().unwrap())));
    }
}
