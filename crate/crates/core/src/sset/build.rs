use std::collections::HashMap;
use std::hash::Hash;

use super::TruncatedSimplicialSet;
use crate::error::{Error, Result};

/// A simplicial set built from structured keys, with the key of every simplex
/// retained alongside its index.
#[derive(Clone, Debug)]
pub struct Keyed<K> {
    pub sset: TruncatedSimplicialSet,
    pub keys: Vec<Vec<K>>,
    pub index: Vec<HashMap<K, usize>>,
}

impl<K: Clone + Eq + Hash> Keyed<K> {
    pub fn key(&self, n: usize, x: usize) -> &K {
        &self.keys[n][x]
    }

    pub fn find(&self, n: usize, key: &K) -> Option<usize> {
        self.index[n].get(key).copied()
    }
}

/// Builds a simplicial set whose level-n simplices are `levels[n]`.
///
/// `name(n, key)` gives the identifier; simplices are sorted by identifier.
/// `face(n, i, key)` and `degen(n, i, key)` compute structure maps on keys and
/// must land in the adjacent level's key set.
pub(crate) fn build_keyed<K, N, F, D>(
    max_dim: usize,
    levels: Vec<Vec<K>>,
    name: N,
    face: F,
    degen: D,
) -> Result<Keyed<K>>
where
    K: Clone + Eq + Hash,
    N: Fn(usize, &K) -> String,
    F: Fn(usize, usize, &K) -> K,
    D: Fn(usize, usize, &K) -> K,
{
    assert_eq!(levels.len(), max_dim + 1);
    let mut ids = Vec::with_capacity(max_dim + 1);
    let mut keys = Vec::with_capacity(max_dim + 1);
    let mut index = Vec::with_capacity(max_dim + 1);
    for (n, level) in levels.into_iter().enumerate() {
        let mut named: Vec<(String, K)> = level.into_iter().map(|k| (name(n, &k), k)).collect();
        named.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(w) = named.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::Failed(format!(
                "identifier '{}' names two simplices at level {n}",
                w[0].0
            )));
        }
        let mut map = HashMap::with_capacity(named.len());
        let mut level_ids = Vec::with_capacity(named.len());
        let mut level_keys = Vec::with_capacity(named.len());
        for (i, (id, k)) in named.into_iter().enumerate() {
            if map.insert(k.clone(), i).is_some() {
                return Err(Error::Failed(format!("duplicate key at level {n}")));
            }
            level_ids.push(id);
            level_keys.push(k);
        }
        ids.push(level_ids);
        keys.push(level_keys);
        index.push(map);
    }
    let mut faces = vec![Vec::new(); max_dim + 1];
    let mut degens = vec![Vec::new(); max_dim + 1];
    for n in 0..=max_dim {
        if n > 0 {
            for i in 0..=n {
                let mut table = Vec::with_capacity(keys[n].len());
                for (x, k) in keys[n].iter().enumerate() {
                    let fk = face(n, i, k);
                    let target = index[n - 1].get(&fk).copied().ok_or_else(|| {
                        Error::Failed(format!("face d{i} of '{}' is missing", ids[n][x]))
                    })?;
                    table.push(target);
                }
                faces[n].push(table);
            }
        }
        if n < max_dim {
            for i in 0..=n {
                let mut table = Vec::with_capacity(keys[n].len());
                for (x, k) in keys[n].iter().enumerate() {
                    let dk = degen(n, i, k);
                    let target = index[n + 1].get(&dk).copied().ok_or_else(|| {
                        Error::Failed(format!("degeneracy s{i} of '{}' is missing", ids[n][x]))
                    })?;
                    table.push(target);
                }
                degens[n].push(table);
            }
        }
    }
    let sset = TruncatedSimplicialSet::from_tables(max_dim, ids, faces, degens)?;
    Ok(Keyed { sset, keys, index })
}
