use std::collections::{HashMap, HashSet};

use super::{certificate_of, Certificate};
use crate::design::Design;
use crate::exec::ExecMode;
use crate::wlp::{wlp, AberrationOrdering};

/// Certificates are computed in batches of this many designs so memory
/// stays bounded on large levels.
const BATCH: usize = 4096;

/// One retained design of a reduction pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representative {
    /// Position of the design in the input.
    pub index: usize,
    /// Its TYPE_M flattened word length pattern.
    pub key: Vec<u64>,
    /// Present when the design shared its pattern with another input.
    pub certificate: Option<Certificate>,
}

/// Reduces `designs` to one representative per isomorphism class, given
/// their TYPE_M flattened patterns in `keys`.
///
/// Designs are partitioned by key; singleton cells pass without a
/// certificate, and within larger cells the first design carrying each
/// certificate is kept. Output is sorted by (key, certificate).
pub fn reduce_keyed(designs: &[&Design], keys: &[Vec<u64>], exec: ExecMode) -> Vec<Representative> {
    assert_eq!(designs.len(), keys.len(), "one key per design");
    let mut cells: HashMap<&[u64], Vec<usize>> = HashMap::new();
    for (i, k) in keys.iter().enumerate() {
        cells.entry(k.as_slice()).or_default().push(i);
    }

    let mut out = Vec::new();
    let mut shared: Vec<usize> = Vec::new();
    for members in cells.values() {
        if members.len() == 1 {
            let i = members[0];
            out.push(Representative { index: i, key: keys[i].clone(), certificate: None });
        } else {
            shared.extend_from_slice(members);
        }
    }
    // input order decides which member of a class is kept
    shared.sort_unstable();

    let mut seen: HashSet<(&[u64], Certificate)> = HashSet::new();
    for batch in shared.chunks(BATCH) {
        let certs = exec.map(batch, |&i| certificate_of(designs[i]));
        for (&i, cert) in batch.iter().zip(certs) {
            if seen.insert((keys[i].as_slice(), cert.clone())) {
                out.push(Representative { index: i, key: keys[i].clone(), certificate: Some(cert) });
            }
        }
    }
    out.sort_by(|a, b| a.key.cmp(&b.key).then_with(|| a.certificate.cmp(&b.certificate)));
    out
}

/// Minimal complete set of `candidates`: one design per isomorphism class,
/// in deterministic order.
pub fn reduce(candidates: &[Design]) -> Vec<Design> {
    let keys: Vec<Vec<u64>> = candidates.iter().map(|d| wlp(d).flatten(AberrationOrdering::TypeM)).collect();
    let refs: Vec<&Design> = candidates.iter().collect();
    reduce_keyed(&refs, &keys, ExecMode::default())
        .into_iter()
        .map(|r| candidates[r.index].clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isomap::{apply_isomap, random_isomap};
    use crate::matrix::{design_matrix, recover_design};

    #[test]
    fn isomorphic_copies_collapse() {
        let d = Design::new(5, 1, &[4, 8, 16, 7, 29, 14]).unwrap();
        let mut all = vec![d.clone()];
        for seed in 0..6 {
            let y = apply_isomap(&design_matrix(&d), &random_isomap(&d, seed)).unwrap();
            all.push(recover_design(&y).unwrap());
        }
        all.push(Design::new(5, 1, &[4, 8, 16, 7, 11, 14]).unwrap());
        let reps = reduce(&all);
        assert!(reps.len() <= 2);
        assert_eq!(reps.len(), reduce(&reps).len());
        assert!(reps.contains(&d) || reps.iter().any(|r| certificate_of(r) == certificate_of(&d)));
    }

    #[test]
    fn empty_input() {
        assert!(reduce(&[]).is_empty());
    }
}
